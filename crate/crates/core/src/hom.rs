//! Substitution homomorphisms given by exact linear images of generators.

use std::fmt;
use std::sync::Arc;

use crate::alphabet::{ipow, Alphabet, LinearElement};
use crate::error::{contract, Result};
use crate::exact::GaussRational;
use crate::scalar::Scalar;
use crate::series::{Algebra, FreeBlocks, Series};

/// Algebra homomorphism determined by `generator i -> images[i]`, each image
/// a linear combination of codomain generators.
#[derive(Clone, PartialEq, Eq)]
pub struct GeneratorMap {
    domain: Arc<Alphabet>,
    codomain: Arc<Alphabet>,
    images: Vec<LinearElement>,
}

impl fmt::Debug for GeneratorMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GeneratorMap({} -> {}: ", self.domain.label(), self.codomain.label())?;
        for (i, img) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{} -> {}", self.domain.name(i), format_linear(&self.codomain, img))?;
        }
        write!(f, ")")
    }
}

/// Human-readable form of a linear element, e.g. `-A - b1 + 2 bi`.
pub fn format_linear(alpha: &Alphabet, e: &LinearElement) -> String {
    let mut out = String::new();
    for (i, c) in e.terms() {
        let name = alpha.name(i);
        let term = if c.is_one() {
            name.to_string()
        } else if *c == GaussRational::from_int(-1) {
            format!("-{name}")
        } else if c.is_real() {
            format!("{c} {name}")
        } else {
            format!("({c}) {name}")
        };
        if out.is_empty() {
            out = term;
        } else if let Some(rest) = term.strip_prefix('-') {
            out = format!("{out} - {rest}");
        } else {
            out = format!("{out} + {term}");
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

impl GeneratorMap {
    pub fn new(domain: Arc<Alphabet>, codomain: Arc<Alphabet>, images: Vec<LinearElement>) -> Result<Self> {
        if images.len() != domain.len() {
            return Err(contract(format!(
                "map out of {} needs {} images, got {}",
                domain.label(),
                domain.len(),
                images.len()
            )));
        }
        if images.iter().any(|e| e.len() != codomain.len()) {
            return Err(contract(format!("image not expressed over {}", codomain.label())));
        }
        Ok(Self { domain, codomain, images })
    }

    pub fn identity(alpha: Arc<Alphabet>) -> Self {
        let images = (0..alpha.len()).map(|i| alpha.generator(i)).collect();
        Self { domain: alpha.clone(), codomain: alpha, images }
    }

    /// Images given by generator/alias names of the codomain, one per domain
    /// generator.
    pub fn from_names(domain: Arc<Alphabet>, codomain: Arc<Alphabet>, names: &[&str]) -> Result<Self> {
        let images = names
            .iter()
            .map(|n| codomain.resolve(n).ok_or_else(|| contract(format!("`{n}` is not a name of {}", codomain.label()))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(domain, codomain, images)
    }

    pub fn domain(&self) -> &Arc<Alphabet> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<Alphabet> {
        &self.codomain
    }

    pub fn images(&self) -> &[LinearElement] {
        &self.images
    }

    pub fn image(&self, i: usize) -> &LinearElement {
        &self.images[i]
    }

    /// Image of a linear element of the domain.
    pub fn apply_linear(&self, e: &LinearElement) -> Result<LinearElement> {
        if e.len() != self.domain.len() {
            return Err(contract("linear element is not over the map's domain"));
        }
        let mut out = LinearElement::zero(self.codomain.len());
        for (i, c) in e.terms() {
            out = out.add(&self.images[i].scale(c));
        }
        Ok(out)
    }

    /// `self ∘ inner`: first `inner`, then `self`.
    pub fn compose(&self, inner: &GeneratorMap) -> Result<GeneratorMap> {
        if *inner.codomain != *self.domain {
            return Err(contract(format!(
                "cannot compose: {} does not match {}",
                inner.codomain.label(),
                self.domain.label()
            )));
        }
        let images = inner.images.iter().map(|e| self.apply_linear(e)).collect::<Result<_>>()?;
        Self::new(inner.domain.clone(), self.codomain.clone(), images)
    }

    /// `self` composed with itself `k` times (`k = 0` is the identity).
    pub fn power(&self, k: usize) -> Result<GeneratorMap> {
        let mut acc = GeneratorMap::identity(self.domain.clone());
        for _ in 0..k {
            acc = self.compose(&acc)?;
        }
        Ok(acc)
    }

    pub fn is_identity(&self) -> bool {
        *self.domain == *self.codomain && *self == GeneratorMap::identity(self.domain.clone())
    }

    /// Inverse of an invertible map between alphabets of equal size, by exact
    /// Gauss-Jordan elimination on the image matrix.
    pub fn inverse(&self) -> Result<GeneratorMap> {
        let n = self.domain.len();
        if self.codomain.len() != n {
            return Err(contract("only maps between alphabets of equal size can be inverted"));
        }
        // columns of m are the images; solve m * x = e_j
        let mut a: Vec<Vec<GaussRational>> = (0..n)
            .map(|r| {
                let mut row: Vec<GaussRational> = (0..n).map(|c| self.images[c].coeff(r).clone()).collect();
                row.extend((0..n).map(|c| if c == r { GaussRational::one() } else { GaussRational::zero() }));
                row
            })
            .collect();
        for col in 0..n {
            let piv = (col..n).find(|&r| !a[r][col].is_zero()).ok_or_else(|| contract("map is not invertible"))?;
            a.swap(col, piv);
            let inv = GaussRational::one() / &a[col][col];
            for x in a[col].iter_mut() {
                *x = &*x * &inv;
            }
            for r in 0..n {
                if r != col && !a[r][col].is_zero() {
                    let f = a[r][col].clone();
                    let pivot_row = a[col].clone();
                    for (x, p) in a[r].iter_mut().zip(&pivot_row) {
                        *x = &*x - &(&f * p);
                    }
                }
            }
        }
        let images = (0..n)
            .map(|c| LinearElement::from_coeffs((0..n).map(|r| a[r][n + c].clone()).collect()))
            .collect();
        Self::new(self.codomain.clone(), self.domain.clone(), images)
    }

    /// Applies the homomorphism to `x`, landing in `target` (whose alphabet
    /// must be the codomain). Under a normal-form target the free image is
    /// reduced. Truncates if `target` has lower degree than `x`.
    pub fn apply(&self, x: &Series, target: &Algebra) -> Result<Series> {
        if **x.alphabet() != *self.domain {
            return Err(contract(format!(
                "series over {} given to a map out of {}",
                x.alphabet().label(),
                self.domain.label()
            )));
        }
        if **target.alphabet() != *self.codomain {
            return Err(contract(format!(
                "target algebra over {} but map lands in {}",
                target.alphabet().label(),
                self.codomain.label()
            )));
        }
        if target.prec() != x.prec() || target.degree() > x.degree() {
            return Err(contract("target algebra precision or degree incompatible with the argument"));
        }
        let p = x.prec();
        let src = x.to_free_blocks();
        let (nd, nc) = (self.domain.len(), self.codomain.len());
        let matrix: Vec<Vec<(usize, Scalar)>> = (0..nd)
            .map(|l| self.images[l].terms().map(|(j, c)| (j, Scalar::from_gauss(c, p))).collect())
            .collect();
        let blocks = (0..=target.degree())
            .map(|k| transform_block(&src.blocks[k], k, nd, nc, &matrix, p))
            .collect();
        target.with_free_blocks(FreeBlocks { blocks })
    }

    /// Applies to `x` inside the free algebra over the codomain with the same
    /// degree and precision.
    pub fn apply_free(&self, x: &Series) -> Result<Series> {
        let target = Algebra::free(self.codomain.clone(), x.degree(), x.prec());
        self.apply(x, &target)
    }
}

/// Replaces every tensor slot of a degree-`k` block by its image, one slot
/// at a time (slots `< j` already over the codomain).
fn transform_block(block: &[Scalar], k: usize, nd: usize, nc: usize, m: &[Vec<(usize, Scalar)>], p: usize) -> Vec<Scalar> {
    let mut cur = block.to_vec();
    for j in 0..k {
        let pre = ipow(nc, j);
        let suf = ipow(nd, k - j - 1);
        let mut next = vec![Scalar::zero(p); pre * nc * suf];
        for a in 0..pre {
            for l in 0..nd {
                if m[l].is_empty() {
                    continue;
                }
                for s in 0..suf {
                    let v = &cur[(a * nd + l) * suf + s];
                    if v.is_zero() {
                        continue;
                    }
                    for (l2, c) in &m[l] {
                        next[(a * nc + l2) * suf + s].add_mul(v, c, p);
                    }
                }
            }
        }
        cur = next;
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::{cyclotomic, kz};

    const P: usize = 128;

    #[test]
    fn composition_and_identity() {
        let f5 = cyclotomic(4).unwrap();
        // cyclic shift of the four root generators
        let t = GeneratorMap::from_names(f5.clone(), f5.clone(), &["A", "bi", "bm1", "bmi", "b1"]).unwrap();
        assert!(!t.is_identity());
        assert!(t.power(4).unwrap().is_identity());
        assert_eq!(t.inverse().unwrap(), t.power(3).unwrap());
    }

    #[test]
    fn alias_images_expand() {
        let f5 = cyclotomic(4).unwrap();
        let m = GeneratorMap::from_names(f5.clone(), f5.clone(), &["C", "b1", "bi", "bm1", "bmi"]).unwrap();
        let c = f5.resolve("C").unwrap();
        // C -> -C - b1 - ... = A under A -> C
        let img = m.apply_linear(&c).unwrap();
        assert_eq!(img, f5.resolve("A").unwrap());
        assert!(m.compose(&m).unwrap().is_identity());
    }

    #[test]
    fn apply_is_multiplicative() {
        let f2 = kz();
        let swap = GeneratorMap::from_names(f2.clone(), f2.clone(), &["B", "A"]).unwrap();
        let alg = Algebra::free(f2.clone(), 5, P);
        let x = alg.generator(0).add(&alg.generator(1).scale(&Scalar::from_i64(3, P))).unwrap().exp().unwrap();
        let y = alg.generator(1).exp().unwrap();
        let lhs = swap.apply_free(&x.mul(&y).unwrap()).unwrap();
        let rhs = swap.apply_free(&x).unwrap().mul(&swap.apply_free(&y).unwrap()).unwrap();
        assert!(lhs.bits_eq(&rhs));
    }

    #[test]
    fn apply_with_linear_images() {
        let f3 = cyclotomic(2).unwrap();
        let f2 = kz();
        // A -> A, b1 -> B, bm1 -> C = -A - B
        let m = GeneratorMap::from_names(f3.clone(), f2.clone(), &["A", "B", "C"]).unwrap();
        let alg = Algebra::free(f3, 3, P);
        let w = alg.word(&[2, 1], Scalar::one(P)).unwrap();
        let img = m.apply_free(&w).unwrap();
        // (-A - B) B = -AB - BB
        assert!(img.coeff(&[0, 1]).bits_eq(&Scalar::from_i64(-1, P)));
        assert!(img.coeff(&[1, 1]).bits_eq(&Scalar::from_i64(-1, P)));
        assert!(img.coeff(&[1, 0]).is_zero());
    }

    #[test]
    fn domain_mismatch_rejected() {
        let f2 = kz();
        let f3 = cyclotomic(2).unwrap();
        let m = GeneratorMap::identity(f2.clone());
        let x = Algebra::free(f3.clone(), 2, P).one();
        assert!(m.apply_free(&x).is_err());
        assert!(GeneratorMap::identity(f3).compose(&m).is_err());
        assert!(GeneratorMap::from_names(f2.clone(), f2, &["A"]).is_err());
    }
}
