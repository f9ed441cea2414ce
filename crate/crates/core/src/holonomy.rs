//! Renormalized holonomies of `dH H^{-1} = (A/z + sum_zeta b[zeta]/(z - zeta)) dz`.
//!
//! Near each regular singular point the solution factors as an analytic part
//! times a local monodromy: `H_0 = P(z) z^A` and `H_1 = Q(1-z) (1-z)^{b1}`.
//! The coefficients of `P` and `Q` satisfy
//! `n p_n - [E, p_n] = -sum_poles L sum_{j<n} c^{-(n-j)} p_j`, where `E` is the
//! local exponent letter and each remaining pole contributes its letter `L`
//! at distance `c` from the basepoint. `(n - ad_E)` is inverted by a finite
//! geometric sum since `ad_E` raises degree. Both parts are evaluated at an
//! interior point `z0` and glued:
//! `Psi = (1-z0)^{-b1} Q(1-z0)^{-1} P(z0) z0^A`.

use std::fs;
use std::path::Path;
use std::sync::Arc;

use astro_float::BigFloat;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::alphabet::{cyclotomic, kz, Alphabet};
use crate::error::{contract, domain, Error, Result};
use crate::exact::GaussRational;
use crate::scalar::{bigfloat_to_f64, consts, rational_to_bigfloat, Scalar, RM};
use crate::serial;
use crate::series::{Algebra, Series};

const CACHE_VERSION: u32 = 1;

/// Which associator to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AssociatorKind {
    /// `Psi_N` over `A, b[zeta]`.
    Psi(usize),
    /// The KZ associator `Phi(A, B)`.
    Phi,
    /// `Phi_{1/2}(A, B) = G_0(1/2)`.
    PhiHalf,
}

impl AssociatorKind {
    pub fn name(&self) -> String {
        match self {
            AssociatorKind::Psi(n) => format!("Psi{n}"),
            AssociatorKind::Phi => "Phi".into(),
            AssociatorKind::PhiHalf => "PhiHalf".into(),
        }
    }

    fn connection_order(&self) -> usize {
        match self {
            AssociatorKind::Psi(n) => *n,
            _ => 1,
        }
    }
}

/// Truncation degree, precision, number of Taylor terms and gluing point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HolonomyParams {
    pub degree: usize,
    pub prec: usize,
    pub terms: usize,
    pub point: GaussRational,
}

impl HolonomyParams {
    pub fn new(degree: usize, prec: usize, terms: usize) -> Self {
        Self { degree, prec, terms, point: GaussRational::from_ratio(1, 2) }
    }

    pub fn with_point(mut self, point: GaussRational) -> Self {
        self.point = point;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.prec < 64 {
            return Err(contract("precision must be at least 64 bits"));
        }
        if self.terms < 1 {
            return Err(contract("at least one Taylor term is required"));
        }
        let zero = GaussRational::zero();
        let one = GaussRational::one();
        if !self.point.is_real() || self.point.re <= zero.re || self.point.re >= one.re {
            return Err(domain(format!("evaluation point {} must be real and inside (0, 1)", self.point)));
        }
        Ok(())
    }
}

/// Default number of Taylor terms for a target of `digits` decimal digits at
/// ratio 1/2.
pub fn default_terms(digits: usize) -> usize {
    (digits as f64 * 3.33).ceil() as usize + 20
}

/// Poles of the connection for a given `N`.
#[derive(Clone, Debug)]
pub struct ConnectionData {
    n: usize,
    alphabet: Arc<Alphabet>,
    roots: Vec<Scalar>,
    exact_roots: Vec<Option<GaussRational>>,
}

impl ConnectionData {
    pub fn new(n: usize, prec: usize) -> Result<Self> {
        let alphabet = cyclotomic(n)?;
        let roots = (0..n).map(|k| Scalar::root_of_unity(k, n, prec)).collect();
        let exact_roots = (0..n).map(|k| crate::scalar::exact_root_of_unity(k, n)).collect();
        Ok(Self { n, alphabet, roots, exact_roots })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn roots(&self) -> &[Scalar] {
        &self.roots
    }

    fn letter_of_root(k: usize) -> usize {
        k + 1
    }

    /// `1/x` for `x = root_k` or `x = 1 - root_k`, exact whenever the root is.
    fn inv(&self, k: usize, shifted: bool, p: usize) -> Result<Scalar> {
        let one = GaussRational::one();
        match &self.exact_roots[k] {
            Some(z) => {
                let x = if shifted { &one - z } else { z.clone() };
                Ok(Scalar::from_gauss(&one.checked_div(&x)?, p))
            }
            None => {
                let guard = p + 32;
                let z = &self.roots[k];
                let x = if shifted { Scalar::one(guard).sub(z, guard) } else { z.clone() };
                Scalar::one(guard).div(&x, p)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Basepoint {
    Zero,
    One,
}

#[derive(Clone, Debug)]
struct Pole {
    letter: usize,
    cinv: Scalar,
}

/// `p_0 .. p_M` of the analytic part at a basepoint.
#[derive(Clone, Debug)]
pub struct TaylorExpansion {
    basepoint: Basepoint,
    exponent: usize,
    poles: Vec<Pole>,
    coeffs: Vec<Series>,
    radius: f64,
}

impl TaylorExpansion {
    pub fn basepoint(&self) -> Basepoint {
        self.basepoint
    }

    /// Index of the local exponent letter (`A` at 0, `b1` at 1).
    pub fn exponent(&self) -> usize {
        self.exponent
    }

    pub fn coeffs(&self) -> &[Series] {
        &self.coeffs
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// `max |coeff|` of each `p_n`.
    pub fn norms(&self) -> Vec<f64> {
        self.coeffs.iter().map(Series::max_abs).collect()
    }

    /// `sum_{poles} L * V_L` with `V_L = sum_{j<n} c^{-(n-j)} p_j`.
    fn forcing(&self, acc: &[Series]) -> Result<Series> {
        let alg = self.coeffs[0].algebra();
        let mut out = alg.zero();
        for (pole, v) in self.poles.iter().zip(acc) {
            out = out.add(&v.left_mul_letter(pole.letter)?)?;
        }
        Ok(out.neg())
    }

    /// `|n p_n - [E, p_n] - rhs_n|` for each `n >= 1`, recomputed from the
    /// stored coefficients.
    pub fn recursion_residuals(&self) -> Result<Vec<f64>> {
        let alg = self.coeffs[0].algebra().clone();
        let p = alg.prec();
        let mut acc: Vec<Series> = self.poles.iter().map(|pl| self.coeffs[0].scale(&pl.cinv)).collect();
        let mut out = Vec::new();
        for n in 1..self.coeffs.len() {
            let pn = &self.coeffs[n];
            let lhs = pn.scale(&Scalar::from_i64(n as i64, p)).sub(&pn.ad_letter(self.exponent)?)?;
            out.push(lhs.sub(&self.forcing(&acc)?)?.max_abs());
            for (v, pl) in acc.iter_mut().zip(&self.poles) {
                *v = v.add(pn)?.scale(&pl.cinv);
            }
        }
        Ok(out)
    }

    /// `sum_{n <= terms} p_n v^n` with its a-priori tail bound, where `v` is
    /// the local coordinate (`z` at 0, `1 - z` at 1).
    pub fn evaluate(&self, v: &GaussRational, terms: usize) -> Result<(Series, f64)> {
        if terms >= self.coeffs.len() {
            return Err(contract(format!("expansion holds {} terms, {terms} requested", self.coeffs.len() - 1)));
        }
        let vf = bigfloat_to_f64(&rational_to_bigfloat(&v.norm_sqr(), 64)).sqrt();
        let ratio = vf / self.radius;
        if ratio >= 1.0 {
            return Err(domain(format!("evaluation point outside the disk of convergence (ratio {ratio})")));
        }
        let p = self.coeffs[0].prec();
        let vs = Scalar::from_gauss(v, p);
        let mut pw = Scalar::one(p);
        let mut acc = self.coeffs[0].clone();
        for n in 1..=terms {
            pw = pw.mul(&vs, p);
            acc = acc.add(&self.coeffs[n].scale(&pw))?;
        }
        let maxnorm = self.norms()[..=terms].iter().copied().fold(0.0, f64::max);
        let bound = maxnorm * ratio.powi(terms as i32 + 1) / (1.0 - ratio);
        Ok((acc, bound))
    }
}

fn solve_shifted(y: &Series, n: usize, exponent: usize) -> Result<Series> {
    let nn = n as u64;
    let mut term = y.div_u64(nn);
    let mut acc = term.clone();
    for _ in 0..y.degree() {
        term = term.ad_letter(exponent)?.div_u64(nn);
        acc = acc.add(&term)?;
    }
    Ok(acc)
}

/// Taylor coefficients `p_0 .. p_terms` of the analytic part at `basepoint`.
pub fn taylor(conn: &ConnectionData, basepoint: Basepoint, degree: usize, terms: usize, prec: usize) -> Result<TaylorExpansion> {
    let alg = Algebra::free(conn.alphabet.clone(), degree, prec);
    let n = conn.n;
    let (exponent, poles, radius) = match basepoint {
        Basepoint::Zero => {
            let poles = (0..n)
                .map(|k| Ok(Pole { letter: ConnectionData::letter_of_root(k), cinv: conn.inv(k, false, prec)? }))
                .collect::<Result<Vec<_>>>()?;
            (0, poles, 1.0)
        }
        Basepoint::One => {
            let mut poles = vec![Pole { letter: 0, cinv: Scalar::one(prec) }];
            let mut radius: f64 = 1.0;
            for k in 1..n {
                poles.push(Pole { letter: ConnectionData::letter_of_root(k), cinv: conn.inv(k, true, prec)? });
                let dist = 2.0 * (std::f64::consts::PI * k as f64 / n as f64).sin().abs();
                radius = radius.min(dist);
            }
            (1, poles, radius)
        }
    };
    let mut exp = TaylorExpansion { basepoint, exponent, poles, coeffs: vec![alg.one()], radius };
    let mut acc: Vec<Series> = exp.poles.iter().map(|pl| alg.one().scale(&pl.cinv)).collect();
    for m in 1..=terms {
        let y = exp.forcing(&acc)?;
        let pm = solve_shifted(&y, m, exponent)?;
        for (v, pl) in acc.iter_mut().zip(&exp.poles) {
            *v = v.add(&pm)?.scale(&pl.cinv);
        }
        exp.coeffs.push(pm);
    }
    Ok(exp)
}

/// A computed associator and the parameters that produced it.
#[derive(Clone, Debug)]
pub struct Associator {
    pub kind: AssociatorKind,
    pub series: Series,
    pub tail_bound: f64,
    pub params: HolonomyParams,
}

impl Associator {
    pub fn metadata(&self) -> Value {
        json!({
            "name": self.kind.name(),
            "N": self.kind.connection_order(),
            "degree": self.params.degree,
            "precision_bits": self.params.prec,
            "terms": self.params.terms,
            "point": self.params.point.to_string(),
            "tail_bound": format!("{:e}", self.tail_bound),
        })
    }
}

/// `Psi_N` over `A, b[zeta]`.
pub fn compute_psi(n: usize, params: &HolonomyParams) -> Result<Associator> {
    params.validate()?;
    let (d, p, m) = (params.degree, params.prec, params.terms);
    let conn = ConnectionData::new(n, p)?;
    let z0 = &params.point;
    let v0 = &GaussRational::one() - z0;
    let t0 = taylor(&conn, Basepoint::Zero, d, m, p)?;
    let t1 = taylor(&conn, Basepoint::One, d, m, p)?;
    let (pz, b0) = t0.evaluate(z0, m)?;
    let (qv, b1) = t1.evaluate(&v0, m)?;
    let alg = pz.algebra().clone();
    let left = Series::scalar_power(&v0, &alg.generator(1).neg())?;
    let right = Series::scalar_power(z0, &alg.generator(0))?;
    let series = left.mul(&qv.inverse()?)?.mul(&pz)?.mul(&right)?;
    Ok(Associator { kind: AssociatorKind::Psi(n), series, tail_bound: b0 + b1, params: params.clone() })
}

/// The KZ associator `Phi(A, B) = Psi_1` with `b1` renamed `B`.
pub fn compute_phi(params: &HolonomyParams) -> Result<Associator> {
    let a = compute_psi(1, params)?;
    Ok(Associator { kind: AssociatorKind::Phi, series: a.series.with_alphabet(kz())?, ..a })
}

/// `Phi_{1/2}(A, B) = P(1/2) 2^{-A}`: the KZ solution normalized as `z^A` at
/// 0, divided by the solution equal to 1 at `1/2`.
pub fn compute_phi_half(params: &HolonomyParams) -> Result<Associator> {
    params.validate()?;
    let (d, p, m) = (params.degree, params.prec, params.terms);
    let conn = ConnectionData::new(1, p)?;
    let t0 = taylor(&conn, Basepoint::Zero, d, m, p)?;
    let half = GaussRational::from_ratio(1, 2);
    let (pz, bound) = t0.evaluate(&half, m)?;
    let right = Series::scalar_power(&half, &pz.algebra().generator(0))?;
    let series = pz.mul(&right)?.with_alphabet(kz())?;
    Ok(Associator {
        kind: AssociatorKind::PhiHalf,
        series,
        tail_bound: bound,
        params: HolonomyParams { point: half, ..params.clone() },
    })
}

pub fn compute(kind: AssociatorKind, params: &HolonomyParams) -> Result<Associator> {
    match kind {
        AssociatorKind::Psi(n) => compute_psi(n, params),
        AssociatorKind::Phi => compute_phi(params),
        AssociatorKind::PhiHalf => compute_phi_half(params),
    }
}

fn cache_key(kind: AssociatorKind, params: &HolonomyParams) -> String {
    let mut h = Sha256::new();
    h.update(format!(
        "v{CACHE_VERSION};{};d{};p{};m{};z{}",
        kind.name(),
        params.degree,
        params.prec,
        params.terms,
        params.point
    ));
    hex::encode(h.finalize())[..16].to_string()
}

/// [`compute`] with an on-disk cache of series documents in `dir`.
pub fn compute_cached(kind: AssociatorKind, params: &HolonomyParams, dir: Option<&Path>) -> Result<Associator> {
    let Some(dir) = dir else {
        return compute(kind, params);
    };
    let path = dir.join(format!("{}-{}.json", kind.name().to_lowercase(), cache_key(kind, params)));
    if let Ok(text) = fs::read_to_string(&path) {
        if let Ok(a) = load_cached(&text, kind, params) {
            return Ok(a);
        }
    }
    let a = compute(kind, params)?;
    fs::create_dir_all(dir)?;
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, serial::to_string(&a.series, Some(a.metadata()))?)?;
    fs::rename(&tmp, &path)?;
    Ok(a)
}

fn load_cached(text: &str, kind: AssociatorKind, params: &HolonomyParams) -> Result<Associator> {
    let doc: Value = serde_json::from_str(text)?;
    let alpha = match kind {
        AssociatorKind::Psi(n) => cyclotomic(n)?,
        _ => kz(),
    };
    let series = serial::from_document(&doc, Some(&alpha))?;
    let meta = &doc["metadata"];
    let expected = Associator { kind, series: series.clone(), tail_bound: 0.0, params: params.clone() }.metadata();
    for key in ["name", "degree", "precision_bits", "terms"] {
        if meta[key] != expected[key] {
            return Err(Error::Document(format!("cached associator has different `{key}`")));
        }
    }
    if series.degree() != params.degree || series.prec() != params.prec {
        return Err(Error::Document("cached associator has different shape".into()));
    }
    let tail_bound = meta["tail_bound"].as_str().and_then(|s| s.parse().ok()).unwrap_or(f64::INFINITY);
    Ok(Associator { kind, series, tail_bound, params: params.clone() })
}

/// Cutoffs and step counts for [`ode_oracle_psi`].
#[derive(Clone, Debug)]
pub struct OracleParams {
    pub degree: usize,
    pub prec: usize,
    pub epsilon: GaussRational,
    pub steps: usize,
}

impl OracleParams {
    pub fn new(degree: usize) -> Self {
        Self { degree, prec: 128, epsilon: GaussRational::from_ratio(1, 10_000_000), steps: 1000 }
    }
}

/// `sum_l c_l * (l U)` for a linear coefficient vector `c`.
fn linear_left_mul(coeffs: &[Scalar], u: &Series) -> Result<Series> {
    let mut out = u.algebra().zero();
    for (l, c) in coeffs.iter().enumerate() {
        if !c.is_zero() {
            out = out.add(&u.left_mul_letter(l)?.scale(c))?;
        }
    }
    Ok(out)
}

fn rk4<F>(u0: Series, t0: &BigFloat, t1: &BigFloat, steps: usize, field: F) -> Result<Series>
where
    F: Fn(&BigFloat) -> Vec<Scalar>,
{
    let p = u0.prec();
    let h = t1.sub(t0, p, RM).div(&BigFloat::from_u64(steps as u64, 64), p, RM);
    let half_h = h.div(&BigFloat::from_word(2, 64), p, RM);
    let sixth_h = h.div(&BigFloat::from_word(6, 64), p, RM);
    let two = Scalar::from_i64(2, p);
    let mut u = u0;
    for s in 0..steps {
        let t = t0.add(&h.mul(&BigFloat::from_u64(s as u64, 64), p, RM), p, RM);
        let tm = t.add(&half_h, p, RM);
        let te = t.add(&h, p, RM);
        let (fa, fm, fe) = (field(&t), field(&tm), field(&te));
        let k1 = linear_left_mul(&fa, &u)?;
        let k2 = linear_left_mul(&fm, &u.add(&k1.scale_real(&half_h))?)?;
        let k3 = linear_left_mul(&fm, &u.add(&k2.scale_real(&half_h))?)?;
        let k4 = linear_left_mul(&fe, &u.add(&k3.scale_real(&h))?)?;
        let incr = k1.add(&k2.scale(&two))?.add(&k3.scale(&two))?.add(&k4)?;
        u = u.add(&incr.scale_real(&sixth_h))?;
    }
    Ok(u)
}

/// Independent approximation `Psi_N ~ eps^{-b1} U(eps -> 1 - eps) eps^A`
/// by fourth-order Runge-Kutta in logarithmic coordinates: `x = ln z` on
/// `[eps, 1/2]`, then `y = ln(1 - z)` on `[1/2, 1 - eps]`.
pub fn ode_oracle_psi(n: usize, op: &OracleParams) -> Result<Series> {
    if op.degree > 3 {
        return Err(contract("the ODE oracle is limited to degree 3"));
    }
    let p = op.prec;
    let conn = ConnectionData::new(n, p)?;
    let alg = Algebra::free(conn.alphabet.clone(), op.degree, p);
    let letters = conn.alphabet.len();
    let ln_eps = Scalar::ln_gauss(&op.epsilon, p)?.re().clone();
    let ln_half = Scalar::ln_gauss(&GaussRational::from_ratio(1, 2), p)?.re().clone();
    let roots = conn.roots.clone();
    let one = Scalar::one(p);

    let seg1 = |x: &BigFloat| {
        let z = Scalar::from_real(x.exp(p, RM, &mut consts()), p);
        let mut f = vec![one.clone()];
        for r in &roots {
            f.push(z.div(&z.sub(r, p), p).expect("z is never a root"));
        }
        f
    };
    let u1 = rk4(alg.one(), &ln_eps, &ln_half, op.steps, seg1)?;

    let seg2 = |y: &BigFloat| {
        let w = Scalar::from_real(y.exp(p, RM, &mut consts()), p);
        let z = one.sub(&w, p);
        let mut f = vec![w.div(&z, p).expect("z is never 0").neg()];
        f.push(one.clone());
        for r in &roots[1..] {
            f.push(w.div(&z.sub(r, p), p).expect("z is never a root").neg());
        }
        debug_assert_eq!(f.len(), letters);
        f
    };
    let u2 = rk4(u1, &ln_half, &ln_eps, op.steps, seg2)?;
    let left = Series::scalar_power(&op.epsilon, &alg.generator(1).neg())?;
    let right = Series::scalar_power(&op.epsilon, &alg.generator(0))?;
    left.mul(&u2)?.mul(&right)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ln2, pi};

    const P: usize = 192;

    fn params(d: usize) -> HolonomyParams {
        HolonomyParams::new(d, P, 120)
    }

    fn real(x: &BigFloat) -> Scalar {
        Scalar::from_real(x.clone(), P)
    }

    #[test]
    fn degree_zero_is_unit() {
        for kind in [AssociatorKind::Psi(4), AssociatorKind::Phi, AssociatorKind::PhiHalf] {
            let a = compute(kind, &params(0)).unwrap();
            assert!(a.series.bits_eq(&a.series.algebra().one()));
        }
        let conn = ConnectionData::new(2, P).unwrap();
        let t = taylor(&conn, Basepoint::Zero, 0, 10, P).unwrap();
        assert!(t.coeffs()[1..].iter().all(|c| c.max_abs() == 0.0));
    }

    #[test]
    fn first_coefficient_at_zero_for_kz() {
        // (1 - ad_A) p1 = -B, so p1 = -sum_k ad_A^k(B)
        let conn = ConnectionData::new(1, P).unwrap();
        let t = taylor(&conn, Basepoint::Zero, 4, 3, P).unwrap();
        let alg = t.coeffs()[0].algebra().clone();
        let mut term = alg.generator(1).neg();
        let mut want = term.clone();
        for _ in 0..4 {
            term = term.ad_letter(0).unwrap();
            want = want.add(&term).unwrap();
        }
        assert!(t.coeffs()[1].distance(&want).unwrap() < 1e-50);
    }

    #[test]
    fn first_coefficient_at_zero_for_n4() {
        // r_0 = -sum b[zeta]/zeta = -b1 + i bi + bm1 - i bmi at degree 1
        let conn = ConnectionData::new(4, P).unwrap();
        let t = taylor(&conn, Basepoint::Zero, 1, 2, P).unwrap();
        let p1 = &t.coeffs()[1];
        let i = Scalar::from_gauss(&GaussRational::i(), P);
        assert!(p1.coeff(&[1]).bits_eq(&Scalar::from_i64(-1, P)));
        assert!(p1.coeff(&[2]).bits_eq(&i));
        assert!(p1.coeff(&[3]).bits_eq(&Scalar::one(P)));
        assert!(p1.coeff(&[4]).bits_eq(&i.neg()));
    }

    #[test]
    fn second_pole_term_at_one_for_n2() {
        // s_m = -A - bm1 2^{-(m+1)}; at degree 1, q_n = (s_{n-1} - ...)/n
        let conn = ConnectionData::new(2, P).unwrap();
        let t = taylor(&conn, Basepoint::One, 1, 3, P).unwrap();
        let q2 = &t.coeffs()[2];
        // degree-1 part of q_n is s_{n-1}/n
        let want = Scalar::from_gauss(&GaussRational::from_ratio(-1, 8), P);
        assert!(q2.coeff(&[2]).bits_eq(&want));
        assert!(q2.coeff(&[0]).bits_eq(&Scalar::from_gauss(&GaussRational::from_ratio(-1, 2), P)));
    }

    #[test]
    fn recursion_certificate() {
        for n in [1, 2, 4] {
            let conn = ConnectionData::new(n, P).unwrap();
            for bp in [Basepoint::Zero, Basepoint::One] {
                let t = taylor(&conn, bp, 3, 30, P).unwrap();
                let worst = t.recursion_residuals().unwrap().into_iter().fold(0.0, f64::max);
                assert!(worst < 2f64.powi(-(P as i32 - 20)), "N={n} {bp:?}: {worst}");
            }
        }
    }

    #[test]
    fn tail_bound_decreases_with_terms() {
        let conn = ConnectionData::new(2, P).unwrap();
        let t = taylor(&conn, Basepoint::Zero, 2, 60, P).unwrap();
        let half = GaussRational::from_ratio(1, 2);
        let bounds: Vec<f64> = [10, 20, 40, 60].iter().map(|&m| t.evaluate(&half, m).unwrap().1).collect();
        assert!(bounds.windows(2).all(|w| w[1] < w[0]));
        let (s0, b0) = t.evaluate(&half, 0).unwrap();
        assert!(s0.bits_eq(&s0.algebra().one()));
        assert!(b0 > 0.0);
    }

    #[test]
    fn degree_one_coefficients() {
        let psi2 = compute_psi(2, &params(1)).unwrap().series;
        let l2 = real(&ln2(P));
        assert!(psi2.coeff(&[2]).approx_eq(&l2, 1e-30));
        assert!(psi2.coeff(&[0]).abs_f64() < 1e-30 && psi2.coeff(&[1]).abs_f64() < 1e-30);
        let phi = compute_phi(&params(1)).unwrap().series;
        assert!(phi.max_abs_by_degree()[1] < 1e-30);
        let half = compute_phi_half(&params(1)).unwrap().series;
        assert!(half.coeff(&[0]).approx_eq(&l2.neg(), 1e-30));
        assert!(half.coeff(&[1]).approx_eq(&l2.neg(), 1e-30));
    }

    #[test]
    fn zeta_two_in_phi() {
        let phi = compute_phi(&params(2)).unwrap().series;
        let z2 = real(&pi(P).mul(&pi(P), P, RM).div(&BigFloat::from_word(6, 64), P, RM));
        let ab = phi.coeff(&[0, 1]);
        let ba = phi.coeff(&[1, 0]);
        assert!((ab.abs_f64() - z2.abs_f64()).abs() < 1e-30);
        assert!(ab.add(&ba, P).abs_f64() < 1e-30);
    }

    #[test]
    fn oracle_matches_at_low_degree() {
        for n in [1, 2, 4] {
            let taylor = compute_psi(n, &HolonomyParams::new(2, 128, 80)).unwrap().series;
            let ode = ode_oracle_psi(n, &OracleParams { steps: 400, ..OracleParams::new(2) }).unwrap();
            let dist = taylor.distance(&ode).unwrap();
            assert!(dist < 1e-4, "N={n}: {dist}");
        }
    }

    #[test]
    fn cache_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = params(3);
        let a = compute_cached(AssociatorKind::Psi(2), &p, Some(dir.path())).unwrap();
        let b = compute_cached(AssociatorKind::Psi(2), &p, Some(dir.path())).unwrap();
        assert!(a.series.bits_eq(&b.series));
        assert_eq!(a.tail_bound, b.tail_bound);
    }

    #[test]
    fn parameter_validation() {
        assert!(compute_psi(2, &HolonomyParams::new(2, 32, 10)).is_err());
        assert!(compute_psi(2, &HolonomyParams::new(2, P, 0)).is_err());
        assert!(compute_psi(2, &params(2).with_point(GaussRational::one())).is_err());
        assert!(compute_psi(0, &params(2)).is_err());
    }
}
