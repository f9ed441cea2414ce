//! Brute-force check of the U(t4) normal forms: the degree-k part of the
//! two-sided ideal is spanned by u r v over all relations r and words u, v.

use std::collections::BTreeMap;

use associator::alphabet::{decode_word, encode_word};
use associator::t4algebra::{relations, NormalFormTable, ResourceGuard};
use num_rational::BigRational;
use num_traits::{One, Zero};

const N: usize = 6;
const D: usize = 4;

type Row = BTreeMap<usize, BigRational>;

/// Row-echelon basis keyed by leading (largest) column.
struct Echelon {
    rows: BTreeMap<usize, Row>,
}

impl Echelon {
    /// Remainder of `v` after eliminating every pivot column.
    fn reduce(&self, mut v: Row) -> Row {
        let mut done = Row::new();
        while let Some((&lead, c)) = v.iter().next_back() {
            let c = c.clone();
            if let Some(p) = self.rows.get(&lead) {
                let f = c / p[&lead].clone();
                for (k, a) in p {
                    let e = v.entry(*k).or_insert_with(BigRational::zero);
                    *e -= &f * a;
                }
                v.retain(|_, a| !a.is_zero());
            } else {
                v.remove(&lead);
                done.insert(lead, c);
            }
        }
        done
    }

    fn insert(&mut self, v: Row) {
        let v = self.reduce(v);
        if let Some((&lead, _)) = v.iter().next_back() {
            self.rows.insert(lead, v);
        }
    }
}

fn ideal(k: usize) -> Echelon {
    let mut e = Echelon { rows: BTreeMap::new() };
    if k < 2 {
        return e;
    }
    for r in relations() {
        for left in 0..=k - 2 {
            let right = k - 2 - left;
            for u in 0..N.pow(left as u32) {
                for v in 0..N.pow(right as u32) {
                    let (uw, vw) = (decode_word(u, left, N), decode_word(v, right, N));
                    let mut row = Row::new();
                    for (a, b, c) in &r {
                        let mut w = uw.clone();
                        w.extend([*a, *b]);
                        w.extend(&vw);
                        let e = row.entry(encode_word(&w, N)).or_insert_with(BigRational::zero);
                        *e += c;
                    }
                    row.retain(|_, a| !a.is_zero());
                    e.insert(row);
                }
            }
        }
    }
    e
}

#[test]
fn normal_forms_agree_with_the_full_ideal() {
    let table = NormalFormTable::build(D, ResourceGuard::default()).unwrap();
    for k in 0..=D {
        let e = ideal(k);
        let total = N.pow(k as u32);
        assert_eq!(total - e.rows.len(), table.dim(k), "dimension at degree {k}");
        for w in 0..total {
            // w - nf(w) lies in the ideal
            let letters = decode_word(w, k, N);
            let mut v = Row::new();
            v.insert(w, BigRational::one());
            for (pos, c) in table.nf_reduce(&letters).unwrap() {
                let b = table.basis(k)[*pos];
                let e = v.entry(b).or_insert_with(BigRational::zero);
                *e -= c;
            }
            v.retain(|_, a| !a.is_zero());
            assert!(e.reduce(v).is_empty(), "word {letters:?} reduces outside the ideal");
        }
        // normal monomials stay independent modulo the ideal
        let mut e = e;
        let rank = e.rows.len();
        for &b in table.basis(k) {
            e.insert(BTreeMap::from([(b, BigRational::one())]));
        }
        assert_eq!(e.rows.len(), rank + table.dim(k));
    }
}
