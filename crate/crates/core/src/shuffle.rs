//! Shuffle products and the shuffle-character test for group-likeness.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::alphabet::{decode_word, encode_word, ipow};
use crate::error::{contract, Result};
use crate::scalar::Scalar;
use crate::series::Series;

/// All riffle interleavings of `u` and `v`, with multiplicity.
pub fn shuffle(u: &[u8], v: &[u8]) -> BTreeMap<Vec<u8>, u64> {
    let mut out = BTreeMap::new();
    for_each_interleaving(u, v, |w| *out.entry(w.to_vec()).or_insert(0) += 1);
    out
}

fn for_each_interleaving(u: &[u8], v: &[u8], mut f: impl FnMut(&[u8])) {
    let mut buf = Vec::with_capacity(u.len() + v.len());
    fn rec(u: &[u8], v: &[u8], buf: &mut Vec<u8>, f: &mut dyn FnMut(&[u8])) {
        if u.is_empty() && v.is_empty() {
            f(buf);
            return;
        }
        if let Some((&h, t)) = u.split_first() {
            buf.push(h);
            rec(t, v, buf, f);
            buf.pop();
        }
        if let Some((&h, t)) = v.split_first() {
            buf.push(h);
            rec(u, t, buf, f);
            buf.pop();
        }
    }
    rec(u, v, &mut buf, &mut f);
}

/// `max |c(u) c(v) - sum_{w in u ш v} c(w)|` over nonempty words with
/// `|u| + |v| <= d`. Zero exactly for group-like series.
pub fn grouplike_residual(g: &Series) -> Result<f64> {
    if !g.algebra().backend().is_free() {
        return Err(contract("group-likeness is tested in the free algebra"));
    }
    let tol = 2f64.powi(-(g.prec() as i32 - 8));
    if !g.constant_term().approx_eq(&Scalar::one(g.prec()), tol) {
        return Err(crate::error::domain("group-likeness requires constant term 1"));
    }
    let n = g.alphabet().len();
    let d = g.degree();
    let p = g.prec();
    let mut pairs = Vec::new();
    for a in 1..=d {
        for b in 1..=d - a {
            if a <= b {
                for iu in 0..ipow(n, a) {
                    for iv in 0..ipow(n, b) {
                        pairs.push((a, iu, b, iv));
                    }
                }
            }
        }
    }
    let worst = pairs
        .par_iter()
        .map(|&(a, iu, b, iv)| {
            let u = decode_word(iu, a, n);
            let v = decode_word(iv, b, n);
            let mut acc = g.block(a)[iu].mul(&g.block(b)[iv], p);
            for_each_interleaving(&u, &v, |w| {
                acc = acc.sub(&g.block(w.len())[encode_word(w, n)], p);
            });
            acc.abs_f64()
        })
        .reduce(|| 0.0, f64::max);
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::kz;
    use crate::series::Algebra;

    #[test]
    fn small_shuffles() {
        let ab = shuffle(&[0], &[1]);
        assert_eq!(ab.into_iter().collect::<Vec<_>>(), vec![(vec![0, 1], 1), (vec![1, 0], 1)]);
        let unit = shuffle(&[], &[1, 0]);
        assert_eq!(unit.into_iter().collect::<Vec<_>>(), vec![(vec![1, 0], 1)]);
        let s = shuffle(&[0, 1], &[0]);
        assert_eq!(s.into_iter().collect::<Vec<_>>(), vec![(vec![0, 0, 1], 2), (vec![0, 1, 0], 1)]);
    }

    #[test]
    fn shuffle_counts_are_binomial() {
        let total: u64 = shuffle(&[0, 1, 0], &[1, 1]).values().sum();
        assert_eq!(total, 10);
    }

    #[test]
    fn exponentials_are_grouplike() {
        let alg = Algebra::free(kz(), 5, 192);
        let a = alg.generator(0);
        let b = alg.generator(1);
        let br = a.mul(&b).unwrap().sub(&b.mul(&a).unwrap()).unwrap();
        let x = a.add(&br.scale(&Scalar::from_i64(3, 192))).unwrap();
        assert!(grouplike_residual(&x.exp().unwrap()).unwrap() < 1e-50);
    }

    #[test]
    fn non_grouplike_detected() {
        let alg = Algebra::free(kz(), 3, 192);
        let g = alg.one().add(&alg.word(&[0, 1], Scalar::one(192)).unwrap()).unwrap();
        assert_eq!(grouplike_residual(&g).unwrap(), 1.0);
        assert!(grouplike_residual(&alg.zero()).is_err());
    }
}
