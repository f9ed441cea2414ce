//! Möbius symmetries of `{0, ∞} ∪ μ_N`, the automorphisms they induce, and
//! the distribution maps between cyclotomic alphabets.

use std::fmt;
use std::sync::Arc;

use crate::alphabet::{cyclotomic, kz, Alphabet, LinearElement};
use crate::error::{contract, domain, Result};
use crate::exact::GaussRational;
use crate::hom::GeneratorMap;
use crate::scalar::exact_root_of_unity;

/// A point of the projective line with exact coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Point {
    Finite(GaussRational),
    Infinity,
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Finite(z) => write!(f, "{z}"),
            Point::Infinity => write!(f, "∞"),
        }
    }
}

/// `z -> (a z + b) / (c z + d)`, defined up to a nonzero scale.
#[derive(Clone, Debug)]
pub struct Mobius {
    m: [GaussRational; 4],
}

fn g(v: i64) -> GaussRational {
    GaussRational::from_int(v)
}

impl Mobius {
    pub fn new(a: GaussRational, b: GaussRational, c: GaussRational, d: GaussRational) -> Result<Self> {
        if (&a * &d - &b * &c).is_zero() {
            return Err(domain("Möbius matrix is singular"));
        }
        Ok(Self { m: [a, b, c, d] })
    }

    fn raw(a: GaussRational, b: GaussRational, c: GaussRational, d: GaussRational) -> Self {
        Self { m: [a, b, c, d] }
    }

    pub fn identity() -> Self {
        Self::raw(g(1), g(0), g(0), g(1))
    }

    /// `z -> (1 + iz) / (1 - iz)`.
    pub fn s() -> Self {
        let i = GaussRational::i();
        Self::raw(i.clone(), g(1), -i, g(1))
    }

    /// `z -> iz`.
    pub fn t() -> Self {
        Self::raw(GaussRational::i(), g(0), g(0), g(1))
    }

    /// `z -> (1 - z) / (1 + z)`.
    pub fn sigma() -> Self {
        Self::raw(g(-1), g(1), g(1), g(1))
    }

    /// `z -> 1 - z`.
    pub fn theta() -> Self {
        Self::raw(g(-1), g(1), g(0), g(1))
    }

    pub fn matrix(&self) -> &[GaussRational; 4] {
        &self.m
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Mobius) -> Mobius {
        let [a, b, c, d] = &self.m;
        let [e, f, gg, h] = &inner.m;
        Self::raw(a * e + b * gg, a * f + b * h, c * e + d * gg, c * f + d * h)
    }

    pub fn power(&self, k: usize) -> Mobius {
        (0..k).fold(Mobius::identity(), |acc, _| acc.compose(self))
    }

    pub fn inverse(&self) -> Mobius {
        let [a, b, c, d] = &self.m;
        Self::raw(d.clone(), -b, -c, a.clone())
    }

    /// Equality as maps, i.e. of matrices up to scale.
    pub fn same_map(&self, o: &Mobius) -> bool {
        (0..4).all(|i| (0..4).all(|j| &self.m[i] * &o.m[j] == &self.m[j] * &o.m[i]))
    }

    pub fn is_identity(&self) -> bool {
        self.same_map(&Mobius::identity())
    }

    pub fn apply(&self, p: &Point) -> Point {
        let [a, b, c, d] = &self.m;
        let (num, den) = match p {
            Point::Infinity => (a.clone(), c.clone()),
            Point::Finite(z) => (a * z + b, c * z + d),
        };
        if den.is_zero() {
            Point::Infinity
        } else {
            Point::Finite(num / den)
        }
    }
}

/// Alphabet carrying the associator for `N`: `A, B` for `N = 1`, otherwise
/// `A, b[zeta^k]`.
pub fn alphabet_for(n: usize) -> Result<Arc<Alphabet>> {
    if n == 1 {
        Ok(kz())
    } else {
        cyclotomic(n)
    }
}

/// `S = {0} ∪ μ_N ∪ {∞}` in generator order: `A = b[0]`, `b[zeta^k]`, then
/// `C = b[∞]`. Only `N` dividing 4 has exact roots.
pub fn special_points(n: usize) -> Result<Vec<Point>> {
    if n == 0 {
        return Err(contract("N must be positive"));
    }
    let mut pts = vec![Point::Finite(GaussRational::zero())];
    for k in 0..n {
        let z = exact_root_of_unity(k, n).ok_or_else(|| domain(format!("μ_{n} has no exact Gaussian-rational coordinates")))?;
        pts.push(Point::Finite(z));
    }
    pts.push(Point::Infinity);
    Ok(pts)
}

/// A Möbius map together with the permutation it induces on `S`.
#[derive(Clone, Debug)]
pub struct MobiusSymmetry {
    mobius: Mobius,
    n: usize,
    permutation: Vec<usize>,
}

impl MobiusSymmetry {
    pub fn new(mobius: Mobius, n: usize) -> Result<Self> {
        let pts = special_points(n)?;
        let mut permutation = Vec::with_capacity(pts.len());
        for p in &pts {
            let q = mobius.apply(p);
            match pts.iter().position(|x| *x == q) {
                Some(j) => permutation.push(j),
                None => return Err(domain(format!("Möbius map sends {p} to {q}, outside {{0, ∞}} ∪ μ_{n}"))),
            }
        }
        Ok(Self { mobius, n, permutation })
    }

    pub fn mobius(&self) -> &Mobius {
        &self.mobius
    }

    pub fn order(&self) -> usize {
        self.n
    }

    /// Index of the image of each special point, in [`special_points`] order.
    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }
}

/// The automorphism `b[s] -> b[m(s)]`, with `C = b[∞]` expanded.
pub fn mobius_to_automorphism(m: &MobiusSymmetry) -> Result<GeneratorMap> {
    let alpha = alphabet_for(m.n)?;
    let len = alpha.len();
    let images = m.permutation[..len]
        .iter()
        .map(|&j| {
            if j == len {
                LinearElement::from_coeffs(vec![g(-1); len])
            } else {
                LinearElement::generator(len, j)
            }
        })
        .collect();
    GeneratorMap::new(alpha.clone(), alpha, images)
}

/// Automorphism induced by `mobius` on the alphabet for `n`.
pub fn induced(mobius: Mobius, n: usize) -> Result<GeneratorMap> {
    mobius_to_automorphism(&MobiusSymmetry::new(mobius, n)?)
}

fn check_divides(n: usize, m: usize) -> Result<usize> {
    if m == 0 || !n.is_multiple_of(m) {
        return Err(contract(format!("distribution maps need M | N, got N = {n}, M = {m}")));
    }
    Ok(n / m)
}

/// `delta_{NM}`: fixes `A`, keeps `b[zeta]` for `zeta` in `μ_M` and kills
/// the other roots.
pub fn delta(n: usize, m: usize) -> Result<GeneratorMap> {
    let r = check_divides(n, m)?;
    let (src, dst) = (alphabet_for(n)?, alphabet_for(m)?);
    let mut images = vec![LinearElement::generator(m + 1, 0)];
    for k in 0..n {
        images.push(if k % r == 0 { LinearElement::generator(m + 1, k / r + 1) } else { LinearElement::zero(m + 1) });
    }
    GeneratorMap::new(src, dst, images)
}

/// `pi_{NM}`: `A -> (N/M) A`, `b[zeta] -> b[zeta^{N/M}]`.
pub fn pi(n: usize, m: usize) -> Result<GeneratorMap> {
    let r = check_divides(n, m)?;
    let (src, dst) = (alphabet_for(n)?, alphabet_for(m)?);
    let mut images = vec![LinearElement::generator(m + 1, 0).scale(&g(r as i64))];
    for k in 0..n {
        images.push(LinearElement::generator(m + 1, k % m + 1));
    }
    GeneratorMap::new(src, dst, images)
}

/// `z -> (1 + z) / (1 - z)`, a rotation of the square `{0, 1, ∞, -1}`.
pub fn rho() -> Mobius {
    Mobius::sigma().compose(&Mobius::t().power(2))
}

/// Built-in map by DSL name.
pub fn named_map(name: &str) -> Result<GeneratorMap> {
    let (s, t) = (Mobius::s(), Mobius::t());
    match name {
        "s" => induced(s, 4),
        "s2" => induced(s.power(2), 4),
        "t" => induced(t, 4),
        "t2" => induced(t.power(2), 4),
        "t3" => induced(t.power(3), 4),
        "st" => induced(s.compose(&t), 4),
        "sigma" => induced(Mobius::sigma(), 2),
        "rho" => induced(rho(), 2),
        "theta" => induced(Mobius::theta(), 1),
        "d42" => delta(4, 2),
        "d41" => delta(4, 1),
        "d21" => delta(2, 1),
        "p42" => pi(4, 2),
        "p41" => pi(4, 1),
        "p21" => pi(2, 1),
        _ => Err(contract(format!("no built-in map `{name}`"))),
    }
}

/// One exact structural identity between maps.
#[derive(Clone, Debug)]
pub struct MapCheck {
    pub name: &'static str,
    pub holds: bool,
}

fn check(name: &'static str, holds: bool) -> MapCheck {
    MapCheck { name, holds }
}

/// `s^3 = t^4 = (st)^2 = 1` on `f5`.
pub fn presentation_f5() -> Result<Vec<MapCheck>> {
    let s = named_map("s")?;
    let t = named_map("t")?;
    let st = s.compose(&t)?;
    Ok(vec![
        check("s^3 = 1", s.power(3)?.is_identity()),
        check("t^4 = 1", t.power(4)?.is_identity()),
        check("(st)^2 = 1", st.power(2)?.is_identity()),
        check("s, t of orders 3, 4", !s.is_identity() && !t.power(2)?.is_identity()),
    ])
}

/// Composites built by map composition equal the maps of the composite
/// Möbius transformations.
pub fn composites_f5() -> Result<Vec<MapCheck>> {
    let (ms, mt) = (Mobius::s(), Mobius::t());
    let s = named_map("s")?;
    let t = named_map("t")?;
    let s_inv = s.inverse()?;
    let a = s.compose(&t)?.compose(&t)?.compose(&s_inv)?;
    let a_m = induced(ms.compose(&mt).compose(&mt).compose(&ms.inverse()), 4)?;
    let b = s_inv.compose(&t)?.compose(&s_inv)?;
    let b_m = induced(ms.inverse().compose(&mt).compose(&ms.inverse()), 4)?;
    Ok(vec![
        check("s t^2 s^-1", a == a_m),
        check("s^-1 t s^-1", b == b_m),
        check("s t", s.compose(&t)? == named_map("st")?),
        check("s^2", s.compose(&s)? == named_map("s2")?),
        check("s^-1 = s^2", s_inv == named_map("s2")?),
    ])
}

/// `sigma^2 = 1` on `f3`, the square's rotation `rho = sigma t^2` with
/// `rho^4 = sigma^2 = (sigma rho)^2 = 1`, and `sigma ∘ d42 = d42 ∘ st`.
pub fn presentation_f3() -> Result<Vec<MapCheck>> {
    let sigma = named_map("sigma")?;
    let rho = named_map("rho")?;
    let d42 = named_map("d42")?;
    let st = named_map("st")?;
    let sr = sigma.compose(&rho)?;
    Ok(vec![
        check("sigma^2 = 1", sigma.power(2)?.is_identity()),
        check("rho^4 = 1", rho.power(4)?.is_identity()),
        check("(sigma rho)^2 = 1", sr.power(2)?.is_identity()),
        check("rho of order 4", !rho.power(2)?.is_identity()),
        check("sigma d42 = d42 st", sigma.compose(&d42)? == d42.compose(&st)?),
    ])
}
