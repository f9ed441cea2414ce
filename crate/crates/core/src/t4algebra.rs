//! Truncated enveloping algebra of the infinitesimal pure-braid Lie algebra
//! t4: exact normal forms per degree, and the multiplication backend built
//! on them.
//!
//! Degree `k` is computed from degree `k - 1` as
//! `U_k = (U_{k-1} (x) V) / span{ nf(u x) (x) y : u in basis_{k-2}, r = sum c x y }`,
//! which equals the quotient of `V^k` by the degree-`k` slice of the two-sided
//! ideal. Elimination is exact over the rationals with the largest column as
//! pivot, so normal monomials are the degree-lex smallest ones.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use astro_float::BigFloat;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::alphabet::{decode_word, encode_word, ipow, Alphabet, LinearElement};
use crate::error::{contract, Error, Result};
use crate::exact::{format_rational, parse_rational, GaussRational};
use crate::scalar::{rational_to_bigfloat, Scalar};

/// Sparse exact vector, sorted by index.
pub type SparseVec = Vec<(usize, BigRational)>;

const FORMAT_VERSION: u32 = 1;

/// Index pairs of the generators, in generator order.
pub const PAIRS: [(usize, usize); 6] = [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)];

pub fn generator_index(i: usize, j: usize) -> Option<usize> {
    let key = if i < j { (i, j) } else { (j, i) };
    PAIRS.iter().position(|&p| p == key)
}

/// Generators `t12 < t13 < t14 < t23 < t24 < t34`, aliases `Z` (their sum)
/// and `tji = tij`.
pub fn t4_alphabet() -> Arc<Alphabet> {
    let names: Vec<String> = PAIRS.iter().map(|(i, j)| format!("t{i}{j}")).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let mut a = Alphabet::new("t4", &refs).expect("static alphabet");
    a = a
        .with_alias("Z", LinearElement::from_coeffs(vec![GaussRational::one(); 6]))
        .expect("static alias");
    for (g, (i, j)) in PAIRS.iter().enumerate() {
        a = a.with_alias(&format!("t{j}{i}"), LinearElement::generator(6, g)).expect("static alias");
    }
    Arc::new(a)
}

/// Quadratic relation as `(x, y, c)` terms meaning `sum c x y`.
pub type QuadraticRelation = Vec<(u8, u8, BigRational)>;

/// The defining quadratic relations of t4: `[t_ij + t_ik, t_jk]` for every
/// apex `i` of every 3-subset, and `[t_ij, t_kl]` for disjoint pairs.
pub fn relations() -> Vec<QuadraticRelation> {
    let g = |i, j| generator_index(i, j).unwrap() as u8;
    let one = BigRational::one;
    let comm = |xs: &[u8], y: u8| -> QuadraticRelation {
        let mut r = Vec::new();
        for &x in xs {
            r.push((x, y, one()));
            r.push((y, x, -one()));
        }
        r
    };
    let mut out = Vec::new();
    for a in 1..=4 {
        for b in a + 1..=4 {
            for c in b + 1..=4 {
                for (i, j, k) in [(a, b, c), (b, a, c), (c, a, b)] {
                    out.push(comm(&[g(i, j), g(i, k)], g(j, k)));
                }
            }
        }
    }
    for (i, j, k, l) in [(1, 2, 3, 4), (1, 3, 2, 4), (1, 4, 2, 3)] {
        out.push(comm(&[g(i, j)], g(k, l)));
    }
    out
}

/// Limits on normal-form construction.
#[derive(Clone, Copy, Debug)]
pub struct ResourceGuard {
    /// Maximum number of elimination columns (`dim_{k-1} * 6`) at any degree.
    pub max_columns: usize,
}

impl Default for ResourceGuard {
    fn default() -> Self {
        Self { max_columns: 20_000 }
    }
}

/// Per-degree normal monomials and exact reductions of every free word.
#[derive(Debug)]
pub struct NormalFormTable {
    alphabet: Arc<Alphabet>,
    degree: usize,
    basis: Vec<Vec<usize>>,
    positions: Vec<HashMap<usize, usize>>,
    reductions: Vec<Vec<SparseVec>>,
    fingerprint: String,
}

fn presentation_key(degree: usize) -> String {
    let mut h = Sha256::new();
    h.update(format!("v{FORMAT_VERSION};d{degree};"));
    for n in t4_alphabet().names() {
        h.update(n.as_bytes());
        h.update(b",");
    }
    for r in relations() {
        for (x, y, c) in r {
            h.update(format!("{x}.{y}.{c};"));
        }
        h.update(b"|");
    }
    hex::encode(h.finalize())
}

fn axpy(acc: &mut BTreeMap<usize, BigRational>, a: &BigRational, v: &[(usize, BigRational)]) {
    for (i, c) in v {
        let e = acc.entry(*i).or_insert_with(BigRational::zero);
        *e += a * c;
        if e.is_zero() {
            acc.remove(i);
        }
    }
}

fn sub_scaled(r: &[(usize, BigRational)], a: &BigRational, p: &[(usize, BigRational)]) -> SparseVec {
    let mut out = Vec::with_capacity(r.len() + p.len());
    let (mut i, mut j) = (0, 0);
    while i < r.len() || j < p.len() {
        let take_r = j == p.len() || (i < r.len() && r[i].0 < p[j].0);
        let take_p = i == r.len() || (j < p.len() && p[j].0 < r[i].0);
        if take_r {
            out.push(r[i].clone());
            i += 1;
        } else if take_p {
            out.push((p[j].0, -(a * &p[j].1)));
            j += 1;
        } else {
            let v = &r[i].1 - a * &p[j].1;
            if !v.is_zero() {
                out.push((r[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Reduced row echelon form with the largest column of each row as pivot.
/// Returns `pivot column -> row` (leading coefficient 1, stored last).
fn eliminate(rows: Vec<SparseVec>) -> BTreeMap<usize, SparseVec> {
    let mut pivots: BTreeMap<usize, SparseVec> = BTreeMap::new();
    for mut r in rows {
        while let Some((c, v)) = r.last().cloned() {
            match pivots.get(&c) {
                Some(p) => r = sub_scaled(&r, &v, p),
                None => {
                    let inv = v.recip();
                    for e in r.iter_mut() {
                        e.1 *= &inv;
                    }
                    pivots.insert(c, r);
                    break;
                }
            }
        }
    }
    let cols: Vec<usize> = pivots.keys().copied().collect();
    for c in cols {
        let mut r = pivots[&c].clone();
        let inner: Vec<(usize, BigRational)> = r[..r.len() - 1]
            .iter()
            .filter(|(j, _)| pivots.contains_key(j))
            .cloned()
            .collect();
        for (j, v) in inner {
            r = sub_scaled(&r, &v, &pivots[&j]);
        }
        pivots.insert(c, r);
    }
    pivots
}

impl NormalFormTable {
    /// Builds normal forms up to degree `d`.
    pub fn build(d: usize, guard: ResourceGuard) -> Result<Self> {
        let alphabet = t4_alphabet();
        let n = alphabet.len();
        let rels = relations();
        let one = BigRational::one;
        let mut basis: Vec<Vec<usize>> = vec![vec![0]];
        let mut reductions: Vec<Vec<SparseVec>> = vec![vec![vec![(0, one())]]];
        if d >= 1 {
            basis.push((0..n).collect());
            reductions.push((0..n).map(|w| vec![(w, one())]).collect());
        }
        for k in 2..=d {
            let prev = &basis[k - 1];
            let cols = prev.len() * n;
            if cols > guard.max_columns {
                return Err(Error::Resource {
                    degree: k,
                    msg: format!("{cols} elimination columns exceed the limit of {}", guard.max_columns),
                });
            }
            let mut rows = Vec::with_capacity(basis[k - 2].len() * rels.len());
            for &uw in &basis[k - 2] {
                for rel in &rels {
                    let mut acc = BTreeMap::new();
                    for (x, y, c) in rel {
                        let ux = &reductions[k - 1][uw * n + *x as usize];
                        let shifted: SparseVec = ux.iter().map(|(i, a)| (i * n + *y as usize, a.clone())).collect();
                        axpy(&mut acc, c, &shifted);
                    }
                    if !acc.is_empty() {
                        rows.push(acc.into_iter().collect());
                    }
                }
            }
            let pivots = eliminate(rows);
            let normal_cols: Vec<usize> = (0..cols).filter(|c| !pivots.contains_key(c)).collect();
            let col_pos: HashMap<usize, usize> = normal_cols.iter().enumerate().map(|(p, &c)| (c, p)).collect();
            let col_word = |c: usize| prev[c / n] * n + c % n;
            let step: Vec<SparseVec> = (0..cols)
                .map(|c| match pivots.get(&c) {
                    None => vec![(col_pos[&c], one())],
                    Some(r) => {
                        let mut v: SparseVec = r[..r.len() - 1].iter().map(|(j, a)| (col_pos[j], -a.clone())).collect();
                        v.sort_by_key(|e| e.0);
                        v
                    }
                })
                .collect();
            let red_k: Vec<SparseVec> = (0..ipow(n, k))
                .into_par_iter()
                .map(|w| {
                    let (head, y) = (w / n, w % n);
                    let mut acc = BTreeMap::new();
                    for (i, a) in &reductions[k - 1][head] {
                        axpy(&mut acc, a, &step[i * n + y]);
                    }
                    acc.into_iter().collect()
                })
                .collect();
            basis.push(normal_cols.iter().map(|&c| col_word(c)).collect());
            reductions.push(red_k);
        }
        Ok(Self::assemble(alphabet, d, basis, reductions))
    }

    fn assemble(alphabet: Arc<Alphabet>, degree: usize, basis: Vec<Vec<usize>>, reductions: Vec<Vec<SparseVec>>) -> Self {
        let positions = basis.iter().map(|b| b.iter().enumerate().map(|(p, &w)| (w, p)).collect()).collect();
        Self { alphabet, degree, basis, positions, reductions, fingerprint: presentation_key(degree) }
    }

    pub fn alphabet(&self) -> Arc<Alphabet> {
        self.alphabet.clone()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self, k: usize) -> usize {
        self.basis[k].len()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.basis.iter().map(Vec::len).collect()
    }

    /// Free word indices of the normal monomials of degree `k`, ascending.
    pub fn basis(&self, k: usize) -> &[usize] {
        &self.basis[k]
    }

    pub fn position(&self, k: usize, word: usize) -> Option<usize> {
        self.positions[k].get(&word).copied()
    }

    pub fn fingerprint(&self) -> &str {
        &self.fingerprint
    }

    /// Coordinates of a free word in the normal basis of its degree.
    pub fn nf_reduce(&self, letters: &[u8]) -> Result<&SparseVec> {
        let k = letters.len();
        if k > self.degree {
            return Err(contract(format!("table built to degree {} but word has degree {k}", self.degree)));
        }
        if letters.iter().any(|&l| l as usize >= 6) {
            return Err(contract("letter outside the t4 alphabet"));
        }
        Ok(&self.reductions[k][encode_word(letters, 6)])
    }

    /// Normal form of an exact linear combination of words of one degree.
    pub fn nf_combination(&self, k: usize, terms: &[(Vec<u8>, BigRational)]) -> Result<SparseVec> {
        let mut acc = BTreeMap::new();
        for (w, c) in terms {
            if w.len() != k {
                return Err(contract("mixed degrees in a homogeneous combination"));
            }
            axpy(&mut acc, c, self.nf_reduce(w)?);
        }
        Ok(acc.into_iter().collect())
    }

    /// `nf(Z w - w Z) = 0` for every normal monomial `w` with `deg w < degree`.
    pub fn z_is_central(&self) -> bool {
        (0..self.degree).all(|k| {
            self.basis[k].par_iter().all(|&w| {
                let word = decode_word(w, k, 6);
                let mut terms = Vec::with_capacity(12);
                for g in 0..6u8 {
                    let mut zw = vec![g];
                    zw.extend_from_slice(&word);
                    let mut wz = word.clone();
                    wz.push(g);
                    terms.push((zw, BigRational::one()));
                    terms.push((wz, -BigRational::one()));
                }
                self.nf_combination(k + 1, &terms).map(|v| v.is_empty()).unwrap_or(false)
            })
        })
    }

    /// Versioned JSON document with bases and reductions of non-normal words.
    pub fn to_document(&self) -> Value {
        let names = self.alphabet.names();
        let word = |w: usize, k: usize| self.alphabet.word_to_string(&decode_word(w, k, names.len()));
        let degrees: Vec<Value> = (0..=self.degree)
            .map(|k| {
                let reductions: serde_json::Map<String, Value> = self.reductions[k]
                    .iter()
                    .enumerate()
                    .filter(|(w, _)| self.position(k, *w).is_none())
                    .map(|(w, v)| {
                        let coords: Vec<Value> = v.iter().map(|(p, c)| json!([p, format_rational(c)])).collect();
                        (word(w, k), Value::Array(coords))
                    })
                    .collect();
                json!({
                    "basis": self.basis[k].iter().map(|&w| word(w, k)).collect::<Vec<_>>(),
                    "reductions": reductions,
                })
            })
            .collect();
        json!({
            "format": "t4-normal-forms",
            "version": FORMAT_VERSION,
            "key": self.fingerprint,
            "generators": names,
            "degree": self.degree,
            "degrees": degrees,
        })
    }

    pub fn from_document(doc: &Value) -> Result<Self> {
        let bad = |m: &str| Error::Document(format!("t4 table: {m}"));
        let degree = doc["degree"].as_u64().ok_or_else(|| bad("missing degree"))? as usize;
        if doc["version"].as_u64() != Some(FORMAT_VERSION as u64) {
            return Err(bad("unsupported version"));
        }
        if doc["key"].as_str() != Some(presentation_key(degree).as_str()) {
            return Err(bad("presentation key mismatch"));
        }
        let alphabet = t4_alphabet();
        let n = alphabet.len();
        let levels = doc["degrees"].as_array().ok_or_else(|| bad("missing degrees"))?;
        if levels.len() != degree + 1 {
            return Err(bad("degree count mismatch"));
        }
        let mut basis = Vec::new();
        let mut reductions = Vec::new();
        for (k, lvl) in levels.iter().enumerate() {
            let b: Vec<usize> = lvl["basis"]
                .as_array()
                .ok_or_else(|| bad("missing basis"))?
                .iter()
                .map(|s| {
                    let w = alphabet.parse_word(s.as_str().ok_or_else(|| bad("basis entry"))?)?;
                    if w.len() != k {
                        return Err(bad("basis word of wrong degree"));
                    }
                    Ok(encode_word(&w, n))
                })
                .collect::<Result<_>>()?;
            let pos: HashMap<usize, usize> = b.iter().enumerate().map(|(p, &w)| (w, p)).collect();
            let mut red: Vec<Option<SparseVec>> = vec![None; ipow(n, k)];
            for (p, &w) in b.iter().enumerate() {
                red[w] = Some(vec![(p, BigRational::one())]);
            }
            let rmap = lvl["reductions"].as_object().ok_or_else(|| bad("missing reductions"))?;
            for (ws, coords) in rmap {
                let w = alphabet.parse_word(ws)?;
                if w.len() != k {
                    return Err(bad("reduction word of wrong degree"));
                }
                let idx = encode_word(&w, n);
                if pos.contains_key(&idx) {
                    return Err(bad("normal word listed as reducible"));
                }
                let v: SparseVec = coords
                    .as_array()
                    .ok_or_else(|| bad("reduction entry"))?
                    .iter()
                    .map(|e| {
                        let p = e[0].as_u64().ok_or_else(|| bad("coordinate index"))? as usize;
                        if p >= b.len() {
                            return Err(bad("coordinate out of range"));
                        }
                        Ok((p, parse_rational(e[1].as_str().ok_or_else(|| bad("coordinate value"))?)?))
                    })
                    .collect::<Result<_>>()?;
                red[idx] = Some(v);
            }
            let red: Vec<SparseVec> = red.into_iter().map(|r| r.ok_or_else(|| bad("missing reduction"))).collect::<Result<_>>()?;
            basis.push(b);
            reductions.push(red);
        }
        Ok(Self::assemble(alphabet, degree, basis, reductions))
    }

    fn cache_path(dir: &Path, d: usize) -> PathBuf {
        dir.join(format!("t4-nf-d{d}-{}.json", &presentation_key(d)[..16]))
    }

    /// Loads a cached table from `dir` if present and valid, else builds and
    /// stores it.
    pub fn load_or_build(d: usize, dir: Option<&Path>, guard: ResourceGuard) -> Result<Self> {
        if let Some(dir) = dir {
            let path = Self::cache_path(dir, d);
            if let Ok(text) = fs::read_to_string(&path) {
                if let Ok(t) = serde_json::from_str::<Value>(&text).map_err(Error::from).and_then(|v| Self::from_document(&v)) {
                    return Ok(t);
                }
            }
            let t = Self::build(d, guard)?;
            fs::create_dir_all(dir)?;
            let tmp = path.with_extension("tmp");
            fs::write(&tmp, serde_json::to_string(&t.to_document())?)?;
            fs::rename(&tmp, &path)?;
            return Ok(t);
        }
        Self::build(d, guard)
    }
}

/// A [`NormalFormTable`] with reductions converted to a working precision,
/// stored transposed (per normal monomial, the free words reducing onto it).
pub struct NormalFormBackend {
    table: Arc<NormalFormTable>,
    prec: usize,
    incoming: Vec<Vec<Vec<(usize, BigFloat)>>>,
}

impl std::fmt::Debug for NormalFormBackend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "NormalFormBackend(degree {}, {} bits)", self.table.degree, self.prec)
    }
}

impl NormalFormBackend {
    pub fn new(table: Arc<NormalFormTable>, prec: usize) -> Self {
        let incoming = (0..=table.degree)
            .map(|k| {
                let mut inc: Vec<Vec<(usize, BigFloat)>> = vec![Vec::new(); table.dim(k)];
                for (w, v) in table.reductions[k].iter().enumerate() {
                    for (p, c) in v {
                        inc[*p].push((w, rational_to_bigfloat(c, prec)));
                    }
                }
                inc
            })
            .collect();
        Self { table, prec, incoming }
    }

    pub fn table(&self) -> &Arc<NormalFormTable> {
        &self.table
    }

    pub fn alphabet(&self) -> Arc<Alphabet> {
        self.table.alphabet()
    }

    pub fn degree(&self) -> usize {
        self.table.degree
    }

    pub fn prec(&self) -> usize {
        self.prec
    }

    pub fn dim(&self, k: usize) -> usize {
        self.table.dim(k)
    }

    pub fn basis_word(&self, k: usize, pos: usize) -> usize {
        self.table.basis[k][pos]
    }

    pub fn position(&self, k: usize, word: usize) -> Option<usize> {
        self.table.position(k, word)
    }

    pub(crate) fn same_table(&self, o: &NormalFormBackend) -> bool {
        self.prec == o.prec && self.table.fingerprint == o.table.fingerprint && self.table.degree == o.table.degree
    }

    /// Normal-form coordinates of a dense degree-`k` free block.
    pub(crate) fn project(&self, k: usize, free: &[Scalar], p: usize) -> Vec<Scalar> {
        let cell = |inc: &Vec<(usize, BigFloat)>| {
            let mut acc = Scalar::zero(p);
            for (w, c) in inc {
                let x = &free[*w];
                if !x.is_zero() {
                    acc = acc.add(&x.mul_real(c, p), p);
                }
            }
            acc
        };
        let inc = &self.incoming[k];
        if inc.len() >= 64 {
            inc.par_iter().map(cell).collect()
        } else {
            inc.iter().map(cell).collect()
        }
    }

    /// Dense free block holding normal coordinates on their basis words.
    pub(crate) fn embed(&self, k: usize, coords: &[Scalar], p: usize) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(p); ipow(6, k)];
        for (pos, c) in coords.iter().enumerate() {
            out[self.table.basis[k][pos]] = c.clone();
        }
        out
    }
}

/// Integer coefficients of `1/((1-t)(1-2t)(1-3t))`, the Hilbert series of U(t4).
pub fn hilbert_dims(d: usize) -> Vec<BigInt> {
    (0..=d)
        .map(|k| {
            let k = k as u32;
            let (one, two, three) = (BigInt::from(1), BigInt::from(2), BigInt::from(3));
            // partial fractions: 1/2 - 4*2^k + 9/2*3^k
            (one - two.pow(k + 3) + three.pow(k + 2)) / BigInt::from(2)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(d: usize) -> NormalFormTable {
        NormalFormTable::build(d, ResourceGuard::default()).unwrap()
    }

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn relation_space_has_rank_eleven() {
        let rows: Vec<SparseVec> = relations()
            .into_iter()
            .map(|r| {
                let mut acc = BTreeMap::new();
                for (x, y, c) in r {
                    axpy(&mut acc, &c, &[((x as usize) * 6 + y as usize, BigRational::one())]);
                }
                acc.into_iter().collect()
            })
            .collect();
        assert_eq!(rows.len(), 15);
        assert_eq!(eliminate(rows).len(), 11);
    }

    #[test]
    fn dimensions_follow_the_hilbert_series() {
        let t = table(5);
        assert_eq!(t.dims(), vec![1, 6, 25, 90, 301, 966]);
        let h: Vec<usize> = hilbert_dims(6).iter().map(|x| x.try_into().unwrap()).collect();
        assert_eq!(h, vec![1, 6, 25, 90, 301, 966, 3025]);
    }

    #[test]
    fn low_degree_bases() {
        let t = table(2);
        assert_eq!(t.basis(0), &[0]);
        assert_eq!(t.basis(1), &[0, 1, 2, 3, 4, 5]);
        // t34 t12 is a leading monomial, t12 t34 is normal
        assert!(t.position(2, 5 * 6).is_none());
        assert!(t.position(2, 5).is_some());
    }

    #[test]
    fn defining_relations_reduce_to_zero() {
        let t = table(3);
        for rel in relations() {
            let terms: Vec<(Vec<u8>, BigRational)> = rel.into_iter().map(|(x, y, c)| (vec![x, y], c)).collect();
            assert!(t.nf_combination(2, &terms).unwrap().is_empty());
        }
        let t12 = generator_index(1, 2).unwrap() as u8;
        let t34 = generator_index(3, 4).unwrap() as u8;
        let v = t.nf_combination(2, &[(vec![t12, t34], q(1)), (vec![t34, t12], q(-1))]).unwrap();
        assert!(v.is_empty());
    }

    #[test]
    fn swapped_pair_reduces_to_normal_words() {
        let t = table(2);
        let t12 = generator_index(1, 2).unwrap() as u8;
        let t23 = generator_index(2, 3).unwrap() as u8;
        let v = t.nf_reduce(&[t23, t12]).unwrap();
        // every output coordinate is a normal word smaller than t23 t12
        let w = encode_word(&[t23, t12], 6);
        assert!(!v.is_empty());
        assert!(v.iter().all(|(p, _)| t.basis(2)[*p] < w));
    }

    #[test]
    fn z_is_central_through_degree_five() {
        assert!(table(5).z_is_central());
    }

    #[test]
    fn reduction_is_multiplicative() {
        let t = table(4);
        let words: [&[u8]; 4] = [&[5, 0], &[4, 3], &[3, 1], &[2, 5]];
        for u in words {
            for v in words {
                let mut uv = u.to_vec();
                uv.extend_from_slice(v);
                let direct = t.nf_reduce(&uv).unwrap();
                let mut acc = BTreeMap::new();
                for (i, a) in t.nf_reduce(u).unwrap() {
                    for (j, b) in t.nf_reduce(v).unwrap() {
                        let mut w = decode_word(t.basis(2)[*i], 2, 6);
                        w.extend(decode_word(t.basis(2)[*j], 2, 6));
                        axpy(&mut acc, &(a * b), t.nf_reduce(&w).unwrap());
                    }
                }
                let composed: SparseVec = acc.into_iter().collect();
                assert_eq!(direct, &composed);
            }
        }
    }

    #[test]
    fn document_round_trip() {
        let t = table(3);
        let doc = t.to_document();
        let back = NormalFormTable::from_document(&doc).unwrap();
        assert_eq!(back.dims(), t.dims());
        assert_eq!(back.reductions, t.reductions);
        let mut bad = doc.clone();
        bad["degree"] = json!(2);
        assert!(NormalFormTable::from_document(&bad).is_err());
    }

    #[test]
    fn cache_reuses_stored_table() {
        let dir = tempfile::tempdir().unwrap();
        let a = NormalFormTable::load_or_build(3, Some(dir.path()), ResourceGuard::default()).unwrap();
        let files: Vec<_> = fs::read_dir(dir.path()).unwrap().collect();
        assert_eq!(files.len(), 1);
        let b = NormalFormTable::load_or_build(3, Some(dir.path()), ResourceGuard::default()).unwrap();
        assert_eq!(a.reductions, b.reductions);
    }

    #[test]
    fn resource_guard_names_the_degree() {
        let err = NormalFormTable::build(4, ResourceGuard { max_columns: 200 }).unwrap_err();
        assert!(matches!(err, Error::Resource { degree: 4, .. }));
    }
}
