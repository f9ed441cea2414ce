use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::ast::*;
use crate::exact::{format_rational, GaussRational};

/// Scalar literal without surrounding parentheses: `3`, `-1/2`, `i`, `2*i`,
/// `1-i`, `1/2+3*i`.
fn scalar_literal(g: &GaussRational) -> String {
    let imag = |q: &BigRational| {
        if q.is_one() {
            "i".to_string()
        } else if (-q).is_one() {
            "-i".to_string()
        } else {
            format!("{}*i", format_rational(q))
        }
    };
    if g.im.is_zero() {
        return format_rational(&g.re);
    }
    if g.re.is_zero() {
        return imag(&g.im);
    }
    let re = format_rational(&g.re);
    if g.im.is_negative() {
        format!("{re}-{}", imag(&-&g.im))
    } else {
        format!("{re}+{}", imag(&g.im))
    }
}

fn power_base(g: &GaussRational) -> String {
    if g.im.is_zero() && g.re.denom().is_one() && !g.re.is_negative() {
        format_rational(&g.re)
    } else if *g == GaussRational::i() {
        "i".into()
    } else {
        format!("({})", scalar_literal(g))
    }
}

fn is_negative_looking(g: &GaussRational) -> bool {
    (g.im.is_zero() && g.re.is_negative()) || (g.re.is_zero() && g.im.is_negative())
}

/// Coefficient prefix for a term whose coefficient is not negative-looking.
fn coeff_prefix(c: &GaussRational) -> String {
    if c.is_one() {
        String::new()
    } else if c.im.is_zero() {
        format!("{}*", format_rational(&c.re))
    } else if c.re.is_zero() {
        format!("{}*", scalar_literal(c))
    } else {
        format!("({})*", scalar_literal(c))
    }
}

fn term_body(c: &GaussRational, atom: &LieAtom) -> String {
    match atom {
        LieAtom::Zero => "0".into(),
        LieAtom::Name(n, _) => format!("{}{n}", coeff_prefix(c)),
        LieAtom::Group(g) => format!("{}({})", coeff_prefix(c), print_lie(g)),
    }
}

/// Canonical text of a Lie expression, e.g. `A - 2*B + i*bi`.
pub fn print_lie(e: &LieExpr) -> String {
    let mut out = String::new();
    for (k, t) in e.terms.iter().enumerate() {
        let neg = is_negative_looking(&t.coeff);
        let c = if neg { -&t.coeff } else { t.coeff.clone() };
        let body = term_body(&c, &t.atom);
        match (k, neg) {
            (0, false) => out.push_str(&body),
            (0, true) => out.push_str(&format!("-{body}")),
            (_, false) => out.push_str(&format!(" + {body}")),
            (_, true) => out.push_str(&format!(" - {body}")),
        }
    }
    out
}

fn print_atomic(e: &Expr) -> String {
    match e {
        Expr::Product(_) => format!("({})", print_expr(e)),
        _ => print_expr(e),
    }
}

/// Canonical text of a group expression.
pub fn print_expr(e: &Expr) -> String {
    match e {
        Expr::Unit(_) => "1".into(),
        Expr::Product(fs) => fs.iter().map(print_atomic).collect::<Vec<_>>().join(" "),
        Expr::Inverse(x) => format!("{}^-1", print_atomic(x)),
        Expr::ScalarPower { base, exponent, .. } => format!("{}^{{{}}}", power_base(base), print_lie(exponent)),
        Expr::Named { name, .. } => name.clone(),
        Expr::MapApply { map, arg, .. } => format!("{map}({})", print_expr(arg)),
        Expr::Substitute { name, args, seps, .. } => {
            let mut s = format!("{name}(");
            for (k, a) in args.iter().enumerate() {
                if k > 0 {
                    s.push_str(match seps.get(k - 1) {
                        Some(Sep::Bar) => " | ",
                        _ => ", ",
                    });
                }
                s.push_str(&print_lie(a));
            }
            s.push(')');
            s
        }
    }
}

pub fn print_relation(r: &Relation) -> String {
    format!("{} == {}", print_expr(&r.lhs), print_expr(&r.rhs))
}

pub fn print_entry(e: &CatalogueEntry) -> String {
    let mut attrs = Vec::new();
    if let Some(d) = e.degree {
        attrs.push(format!("degree {d}"));
    }
    if let Some(t) = e.tolerance {
        attrs.push(format!("tol {t:e}"));
    }
    let attrs = if attrs.is_empty() { String::new() } else { format!(" ({})", attrs.join(", ")) };
    format!("{}{attrs}: {}", e.name, print_relation(&e.relation))
}

pub fn print_catalogue(entries: &[CatalogueEntry]) -> String {
    entries.iter().map(|e| print_entry(e) + "\n").collect()
}
