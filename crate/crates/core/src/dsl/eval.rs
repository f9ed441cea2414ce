use std::collections::BTreeMap;

use super::ast::*;
use crate::alphabet::{Alphabet, LinearElement};
use crate::error::{Error, Pos, Result};
use crate::hom::GeneratorMap;
use crate::series::{Algebra, Series};

/// Names a relation may refer to.
pub trait Context: Sync {
    fn series(&self, name: &str) -> Option<&Series>;
    fn map(&self, name: &str) -> Option<&GeneratorMap>;
    /// Candidate ambient algebras at the evaluation degree, in order of
    /// preference.
    fn algebras(&self) -> &[Algebra];
}

/// A [`Context`] backed by plain maps.
#[derive(Clone, Debug, Default)]
pub struct Env {
    pub series: BTreeMap<String, Series>,
    pub maps: BTreeMap<String, GeneratorMap>,
    pub algebras: Vec<Algebra>,
}

impl Context for Env {
    fn series(&self, name: &str) -> Option<&Series> {
        self.series.get(name)
    }

    fn map(&self, name: &str) -> Option<&GeneratorMap> {
        self.maps.get(name)
    }

    fn algebras(&self) -> &[Algebra] {
        &self.algebras
    }
}

/// Both sides of a relation and the residual `lhs rhs^-1`.
#[derive(Clone, Debug)]
pub struct Evaluation {
    pub algebra: Algebra,
    pub lhs: Series,
    pub rhs: Series,
    pub residual: Series,
}

fn bind<T>(pos: Pos, msg: impl Into<String>) -> Result<T> {
    Err(Error::Bind { pos, msg: msg.into() })
}

fn expr_pos(e: &Expr) -> Option<Pos> {
    match e {
        Expr::Unit(s) => Some(s.0),
        Expr::Product(fs) => fs.first().and_then(expr_pos),
        Expr::Inverse(x) => expr_pos(x),
        Expr::ScalarPower { span, .. } | Expr::Named { span, .. } | Expr::MapApply { span, .. } | Expr::Substitute { span, .. } => {
            Some(span.0)
        }
    }
}

fn lie_names<'a>(e: &'a LieExpr, out: &mut Vec<(&'a str, Pos)>) {
    for t in &e.terms {
        match &t.atom {
            LieAtom::Name(n, s) => out.push((n, s.0)),
            LieAtom::Group(g) => lie_names(g, out),
            LieAtom::Zero => {}
        }
    }
}

/// First alphabet fixed by a named series or a map codomain, and every
/// generator name used at this level (map arguments excluded).
fn evidence<'a, C: Context + ?Sized>(ctx: &C, e: &'a Expr, strong: &mut Option<(std::sync::Arc<Alphabet>, Pos)>, names: &mut Vec<(&'a str, Pos)>) {
    match e {
        Expr::Unit(_) => {}
        Expr::Product(fs) => fs.iter().for_each(|f| evidence(ctx, f, strong, names)),
        Expr::Inverse(x) => evidence(ctx, x, strong, names),
        Expr::ScalarPower { exponent, .. } => lie_names(exponent, names),
        Expr::Named { name, span } => {
            if strong.is_none() {
                if let Some(s) = ctx.series(name) {
                    *strong = Some((s.alphabet().clone(), span.0));
                }
            }
        }
        Expr::MapApply { map, span, .. } => {
            if strong.is_none() {
                if let Some(m) = ctx.map(map) {
                    *strong = Some((m.codomain().clone(), span.0));
                }
            }
        }
        Expr::Substitute { args, .. } => args.iter().for_each(|a| lie_names(a, names)),
    }
}

/// Picks the ambient algebra of a relation.
pub fn ambient<C: Context + ?Sized>(ctx: &C, r: &Relation) -> Result<Algebra> {
    let mut strong = None;
    let mut names = Vec::new();
    evidence(ctx, &r.lhs, &mut strong, &mut names);
    evidence(ctx, &r.rhs, &mut strong, &mut names);
    let start = expr_pos(&r.lhs).unwrap_or(Pos { line: 1, col: 1 });
    if let Some((alpha, pos)) = strong {
        return match ctx.algebras().iter().find(|a| **a.alphabet() == *alpha) {
            Some(a) => Ok(a.clone()),
            None => bind(pos, format!("no algebra over {} is available", alpha.label())),
        };
    }
    if let Some(a) = ctx.algebras().iter().find(|a| names.iter().all(|(n, _)| a.alphabet().resolve(n).is_some())) {
        return Ok(a.clone());
    }
    match names.first() {
        Some(_) => bind(start, "no available algebra contains all generator names used"),
        None => bind(start, "no algebra is available"),
    }
}

/// Exact linear element of `alpha` denoted by `e`.
pub fn lie_element(e: &LieExpr, alpha: &Alphabet) -> Result<LinearElement> {
    let mut acc = LinearElement::zero(alpha.len());
    for t in &e.terms {
        let v = match &t.atom {
            LieAtom::Zero => LinearElement::zero(alpha.len()),
            LieAtom::Group(g) => lie_element(g, alpha)?,
            LieAtom::Name(n, s) => match alpha.resolve(n) {
                Some(v) => v,
                None => return bind(s.0, format!("`{n}` is not a generator of {}", alpha.label())),
            },
        };
        acc = acc.add(&v.scale(&t.coeff));
    }
    Ok(acc)
}

fn coerce(x: &Series, alg: &Algebra, name: &str, pos: Pos) -> Result<Series> {
    if **x.alphabet() != **alg.alphabet() {
        return bind(
            pos,
            format!("`{name}` lives over {} but the relation is over {}", x.alphabet().label(), alg.alphabet().label()),
        );
    }
    if x.degree() < alg.degree() {
        return bind(pos, format!("`{name}` is known to degree {} only, {} requested", x.degree(), alg.degree()));
    }
    if x.prec() != alg.prec() {
        return bind(pos, format!("`{name}` has precision {} bits, {} requested", x.prec(), alg.prec()));
    }
    if x.algebra().backend().is_free() && alg.backend().is_free() {
        return x.truncate(alg.degree());
    }
    GeneratorMap::identity(alg.alphabet().clone()).apply(x, alg)
}

/// Value of `e` in `alg`.
pub fn eval_expr<C: Context + ?Sized>(ctx: &C, e: &Expr, alg: &Algebra) -> Result<Series> {
    match e {
        Expr::Unit(_) => Ok(alg.one()),
        Expr::Product(fs) => {
            let mut acc = eval_expr(ctx, &fs[0], alg)?;
            for f in &fs[1..] {
                acc = acc.mul(&eval_expr(ctx, f, alg)?)?;
            }
            Ok(acc)
        }
        Expr::Inverse(x) => eval_expr(ctx, x, alg)?.inverse(),
        Expr::ScalarPower { base, exponent, span } => {
            if base.is_zero() {
                return bind(span.0, "power base must be nonzero");
            }
            let x = alg.linear(&lie_element(exponent, alg.alphabet())?)?;
            Series::scalar_power(base, &x)
        }
        Expr::Named { name, span } => match ctx.series(name) {
            Some(s) => coerce(s, alg, name, span.0),
            None => bind(span.0, format!("unknown series `{name}`")),
        },
        Expr::MapApply { map, arg, span } => {
            let m = match ctx.map(map) {
                Some(m) => m,
                None => return bind(span.0, format!("map `{map}` is not available")),
            };
            if **m.codomain() != **alg.alphabet() {
                return bind(
                    span.0,
                    format!("map `{map}` lands in {} but the relation is over {}", m.codomain().label(), alg.alphabet().label()),
                );
            }
            let src = match ctx.algebras().iter().find(|a| **a.alphabet() == **m.domain()) {
                Some(a) => a.with_degree(alg.degree())?,
                None => return bind(span.0, format!("no algebra over {} is available", m.domain().label())),
            };
            let x = eval_expr(ctx, arg, &src)?;
            m.apply(&x, alg)
        }
        Expr::Substitute { name, args, span, .. } => {
            let s = match ctx.series(name) {
                Some(s) => s,
                None => return bind(span.0, format!("unknown series `{name}`")),
            };
            if args.len() != s.alphabet().len() {
                return bind(
                    span.0,
                    format!("`{name}` has {} generators but {} arguments were given", s.alphabet().len(), args.len()),
                );
            }
            if s.degree() < alg.degree() {
                return bind(span.0, format!("`{name}` is known to degree {} only, {} requested", s.degree(), alg.degree()));
            }
            let images = args.iter().map(|a| lie_element(a, alg.alphabet())).collect::<Result<Vec<_>>>()?;
            let m = GeneratorMap::new(s.alphabet().clone(), alg.alphabet().clone(), images)?;
            m.apply(s, alg)
        }
    }
}

/// Evaluates both sides in the ambient algebra and forms `lhs rhs^-1`.
pub fn evaluate<C: Context + ?Sized>(ctx: &C, r: &Relation) -> Result<Evaluation> {
    let algebra = ambient(ctx, r)?;
    let lhs = eval_expr(ctx, &r.lhs, &algebra)?;
    let rhs = eval_expr(ctx, &r.rhs, &algebra)?;
    let residual = lhs.mul(&rhs.inverse()?)?;
    Ok(Evaluation { algebra, lhs, rhs, residual })
}
