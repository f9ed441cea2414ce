//! Generator alphabets, exact linear combinations of generators, and the
//! base-`n` word encoding used for dense coefficient storage.

use std::sync::Arc;

use crate::error::{contract, Error, Result};
use crate::exact::GaussRational;

/// An exact linear combination of the generators of an [`Alphabet`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearElement {
    coeffs: Vec<GaussRational>,
}

impl LinearElement {
    pub fn zero(n: usize) -> Self {
        Self { coeffs: vec![GaussRational::zero(); n] }
    }

    pub fn generator(n: usize, i: usize) -> Self {
        let mut e = Self::zero(n);
        e.coeffs[i] = GaussRational::one();
        e
    }

    pub fn from_coeffs(coeffs: Vec<GaussRational>) -> Self {
        Self { coeffs }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[GaussRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &GaussRational {
        &self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(GaussRational::is_zero)
    }

    /// Nonzero `(generator, coefficient)` pairs.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &GaussRational)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }

    pub fn add(&self, o: &Self) -> Self {
        debug_assert_eq!(self.len(), o.len());
        Self::from_coeffs(self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, c: &GaussRational) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn neg(&self) -> Self {
        self.scale(&GaussRational::from_int(-1))
    }
}

/// Ordered generator names plus named linear combinations (aliases).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    label: String,
    names: Vec<String>,
    aliases: Vec<(String, LinearElement)>,
}

impl Alphabet {
    pub fn new(label: &str, names: &[&str]) -> Result<Self> {
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() {
                return Err(contract("generator names must be non-empty"));
            }
            if names[..i].contains(n) {
                return Err(contract(format!("duplicate generator name `{n}`")));
            }
        }
        Ok(Self {
            label: label.to_string(),
            names: names.iter().map(|s| s.to_string()).collect(),
            aliases: Vec::new(),
        })
    }

    pub fn with_alias(mut self, name: &str, value: LinearElement) -> Result<Self> {
        if value.len() != self.names.len() {
            return Err(contract(format!("alias `{name}` has wrong arity")));
        }
        if self.index_of(name).is_some() || self.aliases.iter().any(|(n, _)| n == name) {
            return Err(contract(format!("alias `{name}` clashes with an existing name")));
        }
        self.aliases.push((name.to_string(), value));
        Ok(self)
    }

    /// `C = -(sum of all generators)`, the eliminated relation of f_{N+1}.
    pub fn with_minus_sum_alias(self, name: &str) -> Result<Self> {
        let n = self.len();
        let v = LinearElement::from_coeffs(vec![GaussRational::from_int(-1); n]);
        self.with_alias(name, v)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn aliases(&self) -> &[(String, LinearElement)] {
        &self.aliases
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    /// A generator or an alias, as a linear combination.
    pub fn resolve(&self, name: &str) -> Option<LinearElement> {
        if let Some(i) = self.index_of(name) {
            return Some(LinearElement::generator(self.len(), i));
        }
        self.aliases.iter().find(|(n, _)| n == name).map(|(_, v)| v.clone())
    }

    pub fn generator(&self, i: usize) -> LinearElement {
        LinearElement::generator(self.len(), i)
    }

    pub fn word_to_string(&self, letters: &[u8]) -> String {
        letters.iter().map(|&l| self.names[l as usize].as_str()).collect::<Vec<_>>().join(" ")
    }

    /// Inverse of [`Alphabet::word_to_string`]; the empty string is the unit word.
    pub fn parse_word(&self, s: &str) -> Result<Vec<u8>> {
        s.split_whitespace()
            .map(|t| {
                self.index_of(t)
                    .map(|i| i as u8)
                    .ok_or_else(|| Error::Document(format!("unknown generator `{t}` in word `{s}`")))
            })
            .collect()
    }

    /// Same generators, new names (used to present Psi_1 as Phi(A, B)).
    pub fn renamed(&self, label: &str, names: &[&str]) -> Result<Self> {
        if names.len() != self.len() {
            return Err(contract("renaming must preserve the alphabet size"));
        }
        let mut out = Alphabet::new(label, names)?;
        for (n, v) in &self.aliases {
            out = out.with_alias(n, v.clone())?;
        }
        Ok(out)
    }
}

/// Name of the generator b[zeta^k] for `zeta = exp(2 pi i / n)`.
pub fn root_generator_name(k: usize, n: usize) -> String {
    match crate::scalar::exact_root_of_unity(k, n) {
        Some(g) if g == GaussRational::one() => "b1".into(),
        Some(g) if g == GaussRational::i() => "bi".into(),
        Some(g) if g == GaussRational::from_int(-1) => "bm1".into(),
        Some(_) => "bmi".into(),
        None => format!("bz{k}"),
    }
}

/// Generators of f_{N+1}: `A`, then `b[zeta^k]` for k = 0..N, with alias `C`.
pub fn cyclotomic(n: usize) -> Result<Arc<Alphabet>> {
    if n == 0 {
        return Err(contract("N must be positive"));
    }
    let mut names = vec!["A".to_string()];
    names.extend((0..n).map(|k| root_generator_name(k, n)));
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    Ok(Arc::new(Alphabet::new(&format!("f{}", n + 1), &refs)?.with_minus_sum_alias("C")?))
}

/// The KZ alphabet `A, B` (f_2 with b[1] renamed to B).
pub fn kz() -> Arc<Alphabet> {
    Arc::new(
        Alphabet::new("f2", &["A", "B"])
            .and_then(|a| a.with_minus_sum_alias("C"))
            .expect("static alphabet"),
    )
}

/// Alphabet with no generators; series over it are constants.
pub fn trivial() -> Arc<Alphabet> {
    Arc::new(Alphabet::new("trivial", &[]).expect("static alphabet"))
}

pub(crate) fn ipow(n: usize, k: usize) -> usize {
    n.pow(k as u32)
}

/// Index of a word in the dense degree-`len` block; first letter is most
/// significant, so numeric order is lexicographic order.
pub fn encode_word(letters: &[u8], n: usize) -> usize {
    letters.iter().fold(0, |acc, &l| acc * n + l as usize)
}

pub fn decode_word(mut idx: usize, len: usize, n: usize) -> Vec<u8> {
    let mut out = vec![0u8; len];
    for slot in out.iter_mut().rev() {
        *slot = (idx % n) as u8;
        idx /= n;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f5_alphabet_and_alias() {
        let a = cyclotomic(4).unwrap();
        assert_eq!(a.names(), ["A", "b1", "bi", "bm1", "bmi"]);
        let c = a.resolve("C").unwrap();
        assert!(c.coeffs().iter().all(|x| *x == GaussRational::from_int(-1)));
        assert_eq!(cyclotomic(2).unwrap().names(), ["A", "b1", "bm1"]);
        assert_eq!(cyclotomic(3).unwrap().names(), ["A", "b1", "bz1", "bz2"]);
    }

    #[test]
    fn duplicate_names_rejected() {
        assert!(Alphabet::new("x", &["A", "A"]).is_err());
        assert!(Alphabet::new("x", &[""]).is_err());
        let a = Alphabet::new("x", &["A"]).unwrap();
        assert!(a.with_alias("A", LinearElement::zero(1)).is_err());
    }

    #[test]
    fn word_encoding_round_trips() {
        for idx in 0..125 {
            let w = decode_word(idx, 3, 5);
            assert_eq!(encode_word(&w, 5), idx);
        }
        let a = cyclotomic(4).unwrap();
        let w = a.parse_word("A bi bmi").unwrap();
        assert_eq!(w, vec![0, 2, 4]);
        assert_eq!(a.word_to_string(&w), "A bi bmi");
        assert!(a.parse_word("A q").is_err());
        assert!(a.parse_word("").unwrap().is_empty());
    }
}
