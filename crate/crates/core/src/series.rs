//! Degree-truncated non-commutative power series.
//!
//! Coefficients are stored densely per degree. Under the free backend the
//! degree-`k` block has one slot per word of length `k` (base-`n` encoding,
//! see [`encode_word`]); under a normal-form backend it has one slot per
//! normal monomial of the quotient algebra. Products in the quotient are
//! computed as a free product of the normal-word supports followed by a
//! projection through the reduction table, which keeps every output
//! coefficient a fixed-order sum.

use std::fmt;
use std::sync::Arc;

use astro_float::BigFloat;
use rayon::prelude::*;

use crate::alphabet::{decode_word, encode_word, ipow, Alphabet, LinearElement};
use crate::error::{contract, domain, Result};
use crate::exact::GaussRational;
use crate::scalar::Scalar;
use crate::t4algebra::NormalFormBackend;

const PAR_THRESHOLD: usize = 512;

/// How products of basis words are formed.
#[derive(Clone)]
pub enum Backend {
    Free,
    NormalForm(Arc<NormalFormBackend>),
}

impl Backend {
    fn same(&self, o: &Backend) -> bool {
        match (self, o) {
            (Backend::Free, Backend::Free) => true,
            (Backend::NormalForm(a), Backend::NormalForm(b)) => Arc::ptr_eq(a, b) || a.same_table(b),
            _ => false,
        }
    }

    pub fn is_free(&self) -> bool {
        matches!(self, Backend::Free)
    }
}

impl fmt::Debug for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Backend::Free => write!(f, "Free"),
            Backend::NormalForm(b) => write!(f, "NormalForm(degree {})", b.degree()),
        }
    }
}

/// The ambient truncated algebra of a series: alphabet, truncation degree,
/// working precision and multiplication backend.
#[derive(Clone, Debug)]
pub struct Algebra {
    alphabet: Arc<Alphabet>,
    degree: usize,
    prec: usize,
    backend: Backend,
}

impl Algebra {
    pub fn free(alphabet: Arc<Alphabet>, degree: usize, prec: usize) -> Self {
        Self { alphabet, degree, prec, backend: Backend::Free }
    }

    pub fn normal_form(backend: Arc<NormalFormBackend>, degree: usize) -> Result<Self> {
        if degree > backend.degree() {
            return Err(contract(format!(
                "normal-form table built to degree {} but degree {degree} requested",
                backend.degree()
            )));
        }
        Ok(Self {
            alphabet: backend.alphabet(),
            degree,
            prec: backend.prec(),
            backend: Backend::NormalForm(backend),
        })
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn prec(&self) -> usize {
        self.prec
    }

    pub fn backend(&self) -> &Backend {
        &self.backend
    }

    pub fn with_degree(&self, degree: usize) -> Result<Self> {
        if let Backend::NormalForm(b) = &self.backend {
            return Self::normal_form(b.clone(), degree);
        }
        Ok(Self { degree, ..self.clone() })
    }

    pub fn compatible(&self, o: &Algebra) -> bool {
        self.degree == o.degree
            && self.prec == o.prec
            && (Arc::ptr_eq(&self.alphabet, &o.alphabet) || self.alphabet == o.alphabet)
            && self.backend.same(&o.backend)
    }

    pub(crate) fn check(&self, o: &Algebra, what: &str) -> Result<()> {
        if self.compatible(o) {
            return Ok(());
        }
        Err(contract(format!(
            "{what}: operands differ (alphabet {} vs {}, degree {} vs {}, precision {} vs {}, backend {:?} vs {:?})",
            self.alphabet.label(),
            o.alphabet.label(),
            self.degree,
            o.degree,
            self.prec,
            o.prec,
            self.backend,
            o.backend
        )))
    }

    /// Number of basis monomials of degree `k`.
    pub fn dim(&self, k: usize) -> usize {
        match &self.backend {
            Backend::Free => ipow(self.alphabet.len(), k),
            Backend::NormalForm(b) => b.dim(k),
        }
    }

    /// Letters of the basis monomial at slot `pos` of degree `k`.
    pub fn word_at(&self, k: usize, pos: usize) -> Vec<u8> {
        let n = self.alphabet.len();
        match &self.backend {
            Backend::Free => decode_word(pos, k, n),
            Backend::NormalForm(b) => decode_word(b.basis_word(k, pos), k, n),
        }
    }

    /// Slot of a basis monomial, if the word is one.
    pub fn position_of(&self, letters: &[u8]) -> Option<usize> {
        let n = self.alphabet.len();
        if letters.iter().any(|&l| l as usize >= n) || letters.len() > self.degree {
            return None;
        }
        let idx = encode_word(letters, n);
        match &self.backend {
            Backend::Free => Some(idx),
            Backend::NormalForm(b) => b.position(letters.len(), idx),
        }
    }

    fn zero_blocks(&self) -> Vec<Vec<Scalar>> {
        (0..=self.degree).map(|k| vec![Scalar::zero(self.prec); self.dim(k)]).collect()
    }

    pub fn zero(&self) -> Series {
        Series { alg: self.clone(), coeffs: self.zero_blocks() }
    }

    pub fn one(&self) -> Series {
        let mut s = self.zero();
        s.coeffs[0][0] = Scalar::one(self.prec);
        s
    }

    /// The series of a single word, projected to normal form if needed.
    pub fn word(&self, letters: &[u8], c: Scalar) -> Result<Series> {
        let n = self.alphabet.len();
        if letters.len() > self.degree {
            return Ok(self.zero());
        }
        if letters.iter().any(|&l| l as usize >= n) {
            return Err(contract("letter outside the alphabet"));
        }
        let mut free = FreeBlocks::zero(n, self.degree, self.prec);
        free.blocks[letters.len()][encode_word(letters, n)] = c;
        self.with_free_blocks(free)
    }

    pub fn generator(&self, i: usize) -> Series {
        self.word(&[i as u8], Scalar::one(self.prec)).expect("generator index in range")
    }

    /// Degree-one element with exact coefficients.
    pub fn linear(&self, e: &LinearElement) -> Result<Series> {
        if e.len() != self.alphabet.len() {
            return Err(contract("linear element over a different alphabet"));
        }
        let mut s = self.zero();
        if self.degree == 0 {
            return Ok(s);
        }
        for (i, c) in e.terms() {
            let pos = self.position_of(&[i as u8]).ok_or_else(|| contract("generator is not a basis monomial"))?;
            s.coeffs[1][pos] = Scalar::from_gauss(c, self.prec);
        }
        Ok(s)
    }

    /// Linear element given by a generator or alias name.
    pub fn named(&self, name: &str) -> Result<Series> {
        let e = self
            .alphabet
            .resolve(name)
            .ok_or_else(|| contract(format!("`{name}` is not a generator of {}", self.alphabet.label())))?;
        self.linear(&e)
    }

    /// Builds a series from dense free-algebra blocks, reducing to normal form
    /// under a quotient backend.
    pub(crate) fn with_free_blocks(&self, free: FreeBlocks) -> Result<Series> {
        if free.blocks.len() != self.degree + 1 {
            return Err(contract("free blocks have the wrong degree"));
        }
        match &self.backend {
            Backend::Free => Ok(Series { alg: self.clone(), coeffs: free.blocks }),
            Backend::NormalForm(b) => {
                let coeffs = free
                    .blocks
                    .iter()
                    .enumerate()
                    .map(|(k, blk)| b.project(k, blk, self.prec))
                    .collect();
                Ok(Series { alg: self.clone(), coeffs })
            }
        }
    }
}

/// Dense free-algebra coefficient blocks, one per degree.
pub(crate) struct FreeBlocks {
    pub blocks: Vec<Vec<Scalar>>,
}

impl FreeBlocks {
    pub fn zero(n: usize, degree: usize, prec: usize) -> Self {
        Self { blocks: (0..=degree).map(|k| vec![Scalar::zero(prec); ipow(n, k)]).collect() }
    }
}

/// A truncated series in a given [`Algebra`].
#[derive(Clone)]
pub struct Series {
    alg: Algebra,
    coeffs: Vec<Vec<Scalar>>,
}

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let nz: usize = self.coeffs.iter().flatten().filter(|c| !c.is_zero()).count();
        write!(
            f,
            "Series({}, degree {}, {} bits, {} nonzero)",
            self.alg.alphabet.label(),
            self.alg.degree,
            self.alg.prec,
            nz
        )
    }
}

impl Series {
    pub fn algebra(&self) -> &Algebra {
        &self.alg
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alg.alphabet
    }

    pub fn degree(&self) -> usize {
        self.alg.degree
    }

    pub fn prec(&self) -> usize {
        self.alg.prec
    }

    pub fn block(&self, k: usize) -> &[Scalar] {
        &self.coeffs[k]
    }

    pub fn constant_term(&self) -> &Scalar {
        &self.coeffs[0][0]
    }

    /// Coefficient of a basis monomial (zero for words outside the basis).
    pub fn coeff(&self, letters: &[u8]) -> Scalar {
        match self.alg.position_of(letters) {
            Some(pos) => self.coeffs[letters.len()][pos].clone(),
            None => Scalar::zero(self.alg.prec),
        }
    }

    /// Coefficient of a word written with generator names.
    pub fn coeff_of(&self, word: &str) -> Result<Scalar> {
        let w = self.alg.alphabet.parse_word(word)?;
        Ok(self.coeff(&w))
    }

    pub fn set_coeff(&mut self, letters: &[u8], c: Scalar) -> Result<()> {
        let pos = self
            .alg
            .position_of(letters)
            .ok_or_else(|| contract("word is not a basis monomial of this algebra"))?;
        self.coeffs[letters.len()][pos] = c;
        Ok(())
    }

    /// Nonzero coefficients with their words, in degree-then-index order.
    pub fn nonzero_terms(&self) -> impl Iterator<Item = (Vec<u8>, &Scalar)> + '_ {
        self.coeffs.iter().enumerate().flat_map(move |(k, blk)| {
            blk.iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(move |(pos, c)| (self.alg.word_at(k, pos), c))
        })
    }

    fn zip_with(&self, o: &Series, what: &str, f: impl Fn(&Scalar, &Scalar) -> Scalar + Sync) -> Result<Series> {
        self.alg.check(&o.alg, what)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&o.coeffs)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| f(x, y)).collect())
            .collect();
        Ok(Series { alg: self.alg.clone(), coeffs })
    }

    fn map_coeffs(&self, f: impl Fn(&Scalar) -> Scalar) -> Series {
        let coeffs = self.coeffs.iter().map(|b| b.iter().map(&f).collect()).collect();
        Series { alg: self.alg.clone(), coeffs }
    }

    pub fn add(&self, o: &Series) -> Result<Series> {
        let p = self.prec();
        self.zip_with(o, "add", |a, b| a.add(b, p))
    }

    pub fn sub(&self, o: &Series) -> Result<Series> {
        let p = self.prec();
        self.zip_with(o, "sub", |a, b| a.sub(b, p))
    }

    pub fn neg(&self) -> Series {
        self.map_coeffs(Scalar::neg)
    }

    pub fn scale(&self, c: &Scalar) -> Series {
        let p = self.prec();
        self.map_coeffs(|a| a.mul(c, p))
    }

    pub fn scale_real(&self, r: &BigFloat) -> Series {
        let p = self.prec();
        self.map_coeffs(|a| a.mul_real(r, p))
    }

    pub fn div_u64(&self, k: u64) -> Series {
        let p = self.prec();
        self.map_coeffs(|a| a.div_u64(k, p))
    }

    /// Dense free-algebra view of the coefficients.
    pub(crate) fn to_free_blocks(&self) -> FreeBlocks {
        match &self.alg.backend {
            Backend::Free => FreeBlocks { blocks: self.coeffs.clone() },
            Backend::NormalForm(b) => FreeBlocks {
                blocks: self
                    .coeffs
                    .iter()
                    .enumerate()
                    .map(|(k, blk)| b.embed(k, blk, self.prec()))
                    .collect(),
            },
        }
    }

    /// Truncated product.
    pub fn mul(&self, o: &Series) -> Result<Series> {
        self.alg.check(&o.alg, "mul")?;
        match &self.alg.backend {
            Backend::Free => Ok(Series {
                alg: self.alg.clone(),
                coeffs: free_product(&self.coeffs, &o.coeffs, self.alg.alphabet.len(), self.prec()),
            }),
            Backend::NormalForm(_) => {
                let x = self.to_free_blocks();
                let y = o.to_free_blocks();
                let prod = free_product(&x.blocks, &y.blocks, self.alg.alphabet.len(), self.prec());
                self.alg.with_free_blocks(FreeBlocks { blocks: prod })
            }
        }
    }

    /// `letter * self` in the free algebra; no rounding.
    pub fn left_mul_letter(&self, letter: usize) -> Result<Series> {
        if !self.alg.backend.is_free() {
            return Err(contract("letter shifts are defined for the free backend only"));
        }
        let n = self.alg.alphabet.len();
        let mut out = self.alg.zero_blocks();
        for (k, block) in out.iter_mut().enumerate().skip(1) {
            let stride = ipow(n, k - 1);
            block[letter * stride..(letter + 1) * stride].clone_from_slice(&self.coeffs[k - 1]);
        }
        Ok(Series { alg: self.alg.clone(), coeffs: out })
    }

    /// `self * letter` in the free algebra; no rounding.
    pub fn right_mul_letter(&self, letter: usize) -> Result<Series> {
        if !self.alg.backend.is_free() {
            return Err(contract("letter shifts are defined for the free backend only"));
        }
        let n = self.alg.alphabet.len();
        let mut out = self.alg.zero_blocks();
        for (k, block) in out.iter_mut().enumerate().skip(1) {
            for (i, c) in self.coeffs[k - 1].iter().enumerate() {
                if !c.is_zero() {
                    block[i * n + letter] = c.clone();
                }
            }
        }
        Ok(Series { alg: self.alg.clone(), coeffs: out })
    }

    /// `[letter, self]`.
    pub fn ad_letter(&self, letter: usize) -> Result<Series> {
        self.left_mul_letter(letter)?.sub(&self.right_mul_letter(letter)?)
    }

    fn check_constant(&self, want_one: bool, what: &str) -> Result<()> {
        let c0 = self.constant_term();
        let target = if want_one { Scalar::one(self.prec()) } else { Scalar::zero(self.prec()) };
        let tol = 2f64.powi(-(self.prec() as i32 - 8));
        if !c0.approx_eq(&target, tol) {
            return Err(domain(format!(
                "{what} requires constant term {}, found {:e}",
                if want_one { 1 } else { 0 },
                c0.abs_f64()
            )));
        }
        Ok(())
    }

    fn without_constant(&self) -> Series {
        let mut y = self.clone();
        y.coeffs[0][0] = Scalar::zero(self.prec());
        y
    }

    /// `sum_{k <= d} x^k / k!`, for `x` with zero constant term.
    pub fn exp(&self) -> Result<Series> {
        self.check_constant(false, "exp")?;
        let x = self.without_constant();
        let one = self.alg.one();
        let mut acc = one.clone();
        for k in (1..=self.degree()).rev() {
            acc = one.add(&x.mul(&acc)?.div_u64(k as u64))?;
        }
        Ok(acc)
    }

    /// Truncated logarithm of a series with constant term 1.
    pub fn log(&self) -> Result<Series> {
        self.check_constant(true, "log")?;
        let y = self.without_constant();
        let d = self.degree();
        if d == 0 {
            return Ok(self.alg.zero());
        }
        let p = self.prec();
        let coef = |k: usize| {
            let c = Scalar::one(p).div_u64(k as u64, p);
            if k.is_multiple_of(2) {
                c.neg()
            } else {
                c
            }
        };
        let mut acc = self.alg.one().scale(&coef(d));
        for k in (1..d).rev() {
            acc = self.alg.one().scale(&coef(k)).add(&y.mul(&acc)?)?;
        }
        y.mul(&acc)
    }

    /// Inverse of a series with constant term 1.
    pub fn inverse(&self) -> Result<Series> {
        self.check_constant(true, "inverse")?;
        let y = self.without_constant();
        let one = self.alg.one();
        let mut acc = one.clone();
        for _ in 0..self.degree() {
            acc = one.sub(&y.mul(&acc)?)?;
        }
        Ok(acc)
    }

    /// `exp(self * ln)`: the scalar power `a^x` once `ln = ln a` is fixed.
    pub fn exp_scaled(&self, ln: &Scalar) -> Result<Series> {
        self.scale(ln).exp()
    }

    /// Principal scalar power `base^self = exp(self ln(base))`.
    pub fn scalar_power(base: &GaussRational, exponent: &Series) -> Result<Series> {
        let ln = Scalar::ln_gauss(base, exponent.prec())?;
        exponent.exp_scaled(&ln)
    }

    /// Drops all coefficients above degree `d`.
    pub fn truncate(&self, d: usize) -> Result<Series> {
        if d > self.degree() {
            return Err(contract(format!("cannot raise truncation degree {} to {d}", self.degree())));
        }
        Ok(Series { alg: self.alg.with_degree(d)?, coeffs: self.coeffs[..=d].to_vec() })
    }

    /// Relabels the generators (same size, same backend).
    pub fn with_alphabet(&self, alphabet: Arc<Alphabet>) -> Result<Series> {
        if alphabet.len() != self.alphabet().len() || !self.alg.backend.is_free() {
            return Err(contract("relabeling requires a free series over an alphabet of equal size"));
        }
        Ok(Series { alg: Algebra { alphabet, ..self.alg.clone() }, coeffs: self.coeffs.clone() })
    }

    /// Largest coefficient modulus in each degree.
    pub fn max_abs_by_degree(&self) -> Vec<f64> {
        self.coeffs.iter().map(|b| b.iter().map(Scalar::abs_f64).fold(0.0, f64::max)).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.max_abs_by_degree().into_iter().fold(0.0, f64::max)
    }

    /// Per-degree `max |coeff(self - 1)|`.
    pub fn residual_by_degree(&self) -> Vec<f64> {
        let mut v = self.max_abs_by_degree();
        v[0] = self.constant_term().sub(&Scalar::one(self.prec()), self.prec()).abs_f64();
        v
    }

    /// `max |coeff(self - 1)|`, the relation residual norm.
    pub fn residual_norm(&self) -> f64 {
        self.residual_by_degree().into_iter().fold(0.0, f64::max)
    }

    /// `max |coeff(self - other)|`.
    pub fn distance(&self, o: &Series) -> Result<f64> {
        Ok(self.sub(o)?.max_abs())
    }

    /// Bitwise equality of all coefficients.
    pub fn bits_eq(&self, o: &Series) -> bool {
        self.alg.compatible(&o.alg)
            && self.coeffs.iter().flatten().zip(o.coeffs.iter().flatten()).all(|(a, b)| a.bits_eq(b))
    }
}

/// Truncated product of dense free blocks. Output coefficient `w` sums over
/// the splits `w = u v` in increasing `|u|`, so results are independent of
/// thread scheduling.
pub(crate) fn free_product(x: &[Vec<Scalar>], y: &[Vec<Scalar>], n: usize, p: usize) -> Vec<Vec<Scalar>> {
    let d = x.len() - 1;
    (0..=d)
        .map(|k| {
            let size = ipow(n, k);
            let cell = |idx: usize| {
                let mut acc = Scalar::zero(p);
                for a in 0..=k {
                    let nb = ipow(n, k - a);
                    let xa = &x[a][idx / nb];
                    if xa.is_zero() {
                        continue;
                    }
                    acc.add_mul(xa, &y[k - a][idx % nb], p);
                }
                acc
            };
            if size >= PAR_THRESHOLD {
                (0..size).into_par_iter().map(cell).collect()
            } else {
                (0..size).map(cell).collect()
            }
        })
        .collect()
}
