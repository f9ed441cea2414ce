use crate::error::Pos;
use crate::exact::GaussRational;

/// Source position that never participates in structural equality, so a
/// reparsed canonical print compares equal to the original tree.
#[derive(Clone, Copy, Debug)]
pub struct Span(pub Pos);

impl PartialEq for Span {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl Eq for Span {}

/// A relation `lhs == rhs` between group elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub lhs: Expr,
    pub rhs: Expr,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Unit(Span),
    Product(Vec<Expr>),
    Inverse(Box<Expr>),
    /// `base^{exponent}` with an exact base.
    ScalarPower { base: GaussRational, exponent: LieExpr, span: Span },
    Named { name: String, span: Span },
    /// A built-in automorphism or distribution map applied to a factor.
    MapApply { map: String, arg: Box<Expr>, span: Span },
    /// A named series with its generators replaced by Lie elements.
    Substitute { name: String, args: Vec<LieExpr>, seps: Vec<Sep>, span: Span },
}

/// Argument separator in a substitution; `|` sets off the first group as in
/// `Psi2(A | b1, bm1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sep {
    Comma,
    Bar,
}

/// Linear combination with exact coefficients, kept as written.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieExpr {
    pub terms: Vec<LieTerm>,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieTerm {
    pub coeff: GaussRational,
    pub atom: LieAtom,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LieAtom {
    Name(String, Span),
    Group(LieExpr),
    Zero,
}

impl Expr {
    /// Names of all series referenced, in order of appearance.
    pub fn series_names(&self, out: &mut Vec<String>) {
        match self {
            Expr::Unit(_) | Expr::ScalarPower { .. } => {}
            Expr::Product(fs) => fs.iter().for_each(|f| f.series_names(out)),
            Expr::Inverse(e) => e.series_names(out),
            Expr::Named { name, .. } | Expr::Substitute { name, .. } => {
                if !out.contains(name) {
                    out.push(name.clone());
                }
            }
            Expr::MapApply { arg, .. } => arg.series_names(out),
        }
    }

    /// Names of all maps referenced.
    pub fn map_names(&self, out: &mut Vec<String>) {
        match self {
            Expr::Product(fs) => fs.iter().for_each(|f| f.map_names(out)),
            Expr::Inverse(e) => e.map_names(out),
            Expr::MapApply { map, arg, .. } => {
                if !out.contains(map) {
                    out.push(map.clone());
                }
                arg.map_names(out);
            }
            _ => {}
        }
    }
}

impl Relation {
    pub fn series_names(&self) -> Vec<String> {
        let mut v = Vec::new();
        self.lhs.series_names(&mut v);
        self.rhs.series_names(&mut v);
        v
    }

    pub fn map_names(&self) -> Vec<String> {
        let mut v = Vec::new();
        self.lhs.map_names(&mut v);
        self.rhs.map_names(&mut v);
        v
    }
}

/// One line of a relation catalogue.
#[derive(Clone, Debug, PartialEq)]
pub struct CatalogueEntry {
    pub name: String,
    pub degree: Option<usize>,
    pub tolerance: Option<f64>,
    pub relation: Relation,
    pub line: usize,
}

impl CatalogueEntry {
    /// `(group, reading)` for names of the form `group@reading`.
    pub fn reading(&self) -> Option<(&str, &str)> {
        self.name.split_once('@')
    }
}
