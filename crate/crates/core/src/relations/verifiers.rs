//! Hand-written evaluations of each catalogued identity, independent of the
//! DSL. Every verifier returns the residual `lhs rhs^-1` and its report row.

use super::ingredients::Ingredients;
use super::report::{RelationRow, RowKind};
use crate::alphabet::{Alphabet, LinearElement};
use crate::error::{contract, Result};
use crate::exact::GaussRational;
use crate::hom::GeneratorMap;
use crate::series::{Algebra, Series};

/// A residual and the row describing it.
#[derive(Clone, Debug)]
pub struct Verified {
    pub row: RelationRow,
    pub residual: Series,
}

/// `Σ c · name` over `alpha`; names may be aliases such as `C` or `Z`.
fn lin(alpha: &Alphabet, terms: &[(i64, &str)]) -> Result<LinearElement> {
    let mut acc = LinearElement::zero(alpha.len());
    for &(c, name) in terms {
        let v = alpha.resolve(name).ok_or_else(|| contract(format!("`{name}` is not a generator of {}", alpha.label())))?;
        acc = acc.add(&v.scale(&GaussRational::from_int(c)));
    }
    Ok(acc)
}

fn pow(base: &GaussRational, alg: &Algebra, exponent: &[(i64, &str)]) -> Result<Series> {
    Series::scalar_power(base, &alg.linear(&lin(alg.alphabet(), exponent)?)?)
}

fn subst(x: &Series, alg: &Algebra, images: &[&[(i64, &str)]]) -> Result<Series> {
    let images = images.iter().map(|t| lin(alg.alphabet(), t)).collect::<Result<Vec<_>>>()?;
    GeneratorMap::new(x.alphabet().clone(), alg.alphabet().clone(), images)?.apply(x, alg)
}

fn product(factors: Vec<Series>) -> Result<Series> {
    let mut it = factors.into_iter();
    let mut acc = it.next().ok_or_else(|| contract("empty product"))?;
    for f in it {
        acc = acc.mul(&f)?;
    }
    Ok(acc)
}

fn finish(ing: &Ingredients, name: &str, kind: RowKind, lhs: Series, rhs: Series, tol: f64, inputs: &[&str]) -> Result<Verified> {
    let residual = lhs.mul(&rhs.inverse()?)?;
    let inputs: Vec<String> = inputs.iter().map(|s| s.to_string()).collect();
    let row = RelationRow::new(name, kind, residual.alphabet().label(), residual.residual_by_degree(), tol).with_run(
        ing.prec(),
        ing.terms(),
        ing.tail_bound(&inputs),
    );
    Ok(Verified { row, residual })
}

fn two_over_i() -> GaussRational {
    GaussRational::from_int(2) / GaussRational::i()
}

fn int(v: i64) -> GaussRational {
    GaussRational::from_int(v)
}

/// `(2/i)^A s^2(Psi4) (2/i)^{bi} s(Psi4) (2/i)^{b1} Psi4 = 1`.
pub fn verify_hexagon_psi4(ing: &Ingredients, d: usize, tol: f64) -> Result<Verified> {
    let alg = ing.free_algebra(4, d)?;
    let psi = ing.series_at("Psi4", d)?;
    let c = two_over_i();
    let lhs = product(vec![
        pow(&c, &alg, &[(1, "A")])?,
        ing.map("s2")?.apply(&psi, &alg)?,
        pow(&c, &alg, &[(1, "bi")])?,
        ing.map("s")?.apply(&psi, &alg)?,
        pow(&c, &alg, &[(1, "b1")])?,
        psi,
    ])?;
    finish(ing, "hexagon-psi4", RowKind::Relation, lhs, alg.one(), tol, &["Psi4"])
}

/// `st(Psi4) = 2^{-A} Psi4^-1 2^{-b1}`.
pub fn verify_okuda(ing: &Ingredients, d: usize, tol: f64) -> Result<Verified> {
    let alg = ing.free_algebra(4, d)?;
    let psi = ing.series_at("Psi4", d)?;
    let lhs = ing.map("st")?.apply(&psi, &alg)?;
    let two = int(2);
    let rhs = product(vec![pow(&two, &alg, &[(-1, "A")])?, psi.inverse()?, pow(&two, &alg, &[(-1, "b1")])?])?;
    finish(ing, "okuda-psi4", RowKind::Relation, lhs, rhs, tol, &["Psi4"])
}

/// `Psi4^-1 i^{2b1} (s t^2 s^-1)(Psi4) i^C (s^-1 t s^-1)(Psi4^-1) i^{2bi}
/// t(Psi4) i^A = 1`, with the composite maps built by composition.
pub fn verify_octogon(ing: &Ingredients, d: usize, tol: f64) -> Result<Verified> {
    let alg = ing.free_algebra(4, d)?;
    let psi = ing.series_at("Psi4", d)?;
    let psi_inv = psi.inverse()?;
    let (s, t) = (ing.map("s")?, ing.map("t")?);
    let s_inv = s.inverse()?;
    let m1 = s.compose(t)?.compose(t)?.compose(&s_inv)?;
    let m2 = s_inv.compose(t)?.compose(&s_inv)?;
    let i = GaussRational::i();
    let lhs = product(vec![
        psi_inv.clone(),
        pow(&i, &alg, &[(2, "b1")])?,
        m1.apply(&psi, &alg)?,
        pow(&i, &alg, &[(1, "C")])?,
        m2.apply(&psi_inv, &alg)?,
        pow(&i, &alg, &[(2, "bi")])?,
        t.apply(&psi, &alg)?,
        pow(&i, &alg, &[(1, "A")])?,
    ])?;
    finish(ing, "octogon-psi4", RowKind::Relation, lhs, alg.one(), tol, &["Psi4"])
}

/// `sigma(Psi2) = 2^{-A} Psi2^-1 2^{-b1}`.
pub fn verify_broadhurst(ing: &Ingredients, d: usize, tol: f64) -> Result<Verified> {
    let alg = ing.free_algebra(2, d)?;
    let psi = ing.series_at("Psi2", d)?;
    let lhs = ing.map("sigma")?.apply(&psi, &alg)?;
    let two = int(2);
    let rhs = product(vec![pow(&two, &alg, &[(-1, "A")])?, psi.inverse()?, pow(&two, &alg, &[(-1, "b1")])?])?;
    finish(ing, "broadhurst-psi2", RowKind::Relation, lhs, rhs, tol, &["Psi2"])
}

/// `Phi = 2^B Psi2(A | B, -A-B) 2^A`.
pub fn verify_ns1(ing: &Ingredients, d: usize, tol: f64) -> Result<Verified> {
    let alg = ing.free_algebra(1, d)?;
    let phi = ing.series_at("Phi", d)?;
    let psi2 = &ing.associator("Psi2")?.series;
    let two = int(2);
    let rhs = product(vec![
        pow(&two, &alg, &[(1, "B")])?,
        subst(psi2, &alg, &[&[(1, "A")], &[(1, "B")], &[(-1, "A"), (-1, "B")]])?,
        pow(&two, &alg, &[(1, "A")])?,
    ])?;
    finish(ing, "ns1", RowKind::Relation, phi, rhs, tol, &["Phi", "Psi2"])
}

/// `Phi = 4^B Psi2(A | 2B, -2(A+B)) 4^A`.
pub fn verify_ns2(ing: &Ingredients, d: usize, tol: f64) -> Result<Verified> {
    let alg = ing.free_algebra(1, d)?;
    let phi = ing.series_at("Phi", d)?;
    let psi2 = &ing.associator("Psi2")?.series;
    let four = int(4);
    let rhs = product(vec![
        pow(&four, &alg, &[(1, "B")])?,
        subst(psi2, &alg, &[&[(1, "A")], &[(2, "B")], &[(-2, "A"), (-2, "B")]])?,
        pow(&four, &alg, &[(1, "A")])?,
    ])?;
    finish(ing, "ns2", RowKind::Relation, phi, rhs, tol, &["Phi", "Psi2"])
}

/// `Phi(B, A) = Phi^-1`.
pub fn verify_phi_duality(ing: &Ingredients, d: usize, tol: f64) -> Result<Verified> {
    let alg = ing.free_algebra(1, d)?;
    let phi = ing.series_at("Phi", d)?;
    let lhs = ing.map("theta")?.apply(&phi, &alg)?;
    finish(ing, "phi-duality", RowKind::Relation, lhs, phi.inverse()?, tol, &["Phi"])
}

/// `Phi = PhiHalf(B, A)^-1 PhiHalf(A, B)`.
pub fn verify_phi_half(ing: &Ingredients, d: usize, tol: f64) -> Result<Verified> {
    let alg = ing.free_algebra(1, d)?;
    let phi = ing.series_at("Phi", d)?;
    let half = ing.series_at("PhiHalf", d)?;
    let swapped = subst(&half, &alg, &[&[(1, "B")], &[(1, "A")]])?;
    let rhs = swapped.inverse()?.mul(&half)?;
    finish(ing, "phi-half", RowKind::Relation, phi, rhs, tol, &["Phi", "PhiHalf"])
}

/// `delta_42(Psi4) = Psi2`, `delta_41(Psi4) = Phi`, and both readings of the
/// two `pi` lines.
pub fn verify_distributivity(ing: &Ingredients, d: usize, tol: f64) -> Result<Vec<Verified>> {
    let f2 = ing.free_algebra(1, d)?;
    let f3 = ing.free_algebra(2, d)?;
    let psi4 = ing.series_at("Psi4", d)?;
    let psi2 = ing.series_at("Psi2", d)?;
    let phi = ing.series_at("Phi", d)?;
    let (two, four) = (int(2), int(4));
    let rd = RowKind::Reading;
    let rows = vec![
        finish(ing, "distrib-delta42", RowKind::Relation, ing.map("d42")?.apply(&psi4, &f3)?, psi2.clone(), tol, &["Psi4", "Psi2"])?,
        finish(ing, "distrib-delta41", RowKind::Relation, ing.map("d41")?.apply(&psi4, &f2)?, phi.clone(), tol, &["Psi4", "Phi"])?,
        finish(
            ing,
            "distrib-pi-1@p42",
            rd,
            ing.map("p42")?.apply(&psi4, &f3)?,
            pow(&two, &f3, &[(1, "b1")])?.mul(&psi2)?,
            tol,
            &["Psi4", "Psi2"],
        )?,
        finish(
            ing,
            "distrib-pi-1@p41",
            rd,
            ing.map("p41")?.apply(&psi4, &f2)?,
            pow(&two, &f2, &[(1, "B")])?.mul(&subst(&psi2, &f2, &[&[(1, "A")], &[(1, "B")], &[]])?)?,
            tol,
            &["Psi4", "Psi2"],
        )?,
        finish(
            ing,
            "distrib-pi-2@p42",
            rd,
            ing.map("p42")?.apply(&psi4, &f3)?,
            pow(&four, &f3, &[(1, "b1")])?.mul(&subst(&phi, &f3, &[&[(1, "A")], &[(1, "b1")]])?)?,
            tol,
            &["Psi4", "Phi"],
        )?,
        finish(
            ing,
            "distrib-pi-2@p41",
            rd,
            ing.map("p41")?.apply(&psi4, &f2)?,
            pow(&four, &f2, &[(1, "B")])?.mul(&phi)?,
            tol,
            &["Psi4", "Phi"],
        )?,
    ];
    Ok(rows)
}

/// `Psi2(t12+t34 | t23, t14) = 2^{Z-t23} PhiHalf(t12+t13, t24+t34)
/// Phi(t12, t23) Phi(t13+t23, t34)^-1` in `U(t4)`.
pub fn verify_t4_relation(ing: &Ingredients, d: usize, tol: f64) -> Result<Verified> {
    let alg = ing.t4_algebra(d)?;
    let psi2 = &ing.associator("Psi2")?.series;
    let phi = &ing.associator("Phi")?.series;
    let half = &ing.associator("PhiHalf")?.series;
    let lhs = subst(psi2, &alg, &[&[(1, "t12"), (1, "t34")], &[(1, "t23")], &[(1, "t14")]])?;
    let rhs = product(vec![
        pow(&int(2), &alg, &[(1, "Z"), (-1, "t23")])?,
        subst(half, &alg, &[&[(1, "t12"), (1, "t13")], &[(1, "t24"), (1, "t34")]])?,
        subst(phi, &alg, &[&[(1, "t12")], &[(1, "t23")]])?,
        subst(phi, &alg, &[&[(1, "t13"), (1, "t23")], &[(1, "t34")]])?.inverse()?,
    ])?;
    finish(ing, "t4-relation", RowKind::Relation, lhs, rhs, tol, &["Psi2", "PhiHalf", "Phi"])
}

/// Hand-written verifier for a catalogue row name, if there is one.
pub fn verify_by_name(name: &str, ing: &Ingredients, d: usize, tol: f64) -> Option<Result<Verified>> {
    let f: fn(&Ingredients, usize, f64) -> Result<Verified> = match name {
        "hexagon-psi4" | "hexagon-psi4-d5" => verify_hexagon_psi4,
        "okuda-psi4" => verify_okuda,
        "octogon-psi4" => verify_octogon,
        "broadhurst-psi2" => verify_broadhurst,
        "ns1" => verify_ns1,
        "ns2" => verify_ns2,
        "phi-duality" => verify_phi_duality,
        "phi-half" => verify_phi_half,
        "t4-relation" => verify_t4_relation,
        _ if name.starts_with("distrib-") => {
            return Some(verify_distributivity(ing, d, tol).and_then(|rows| {
                rows.into_iter().find(|v| v.row.name == name).ok_or_else(|| contract(format!("no verifier for `{name}`")))
            }))
        }
        _ => return None,
    };
    Some(f(ing, d, tol))
}
