//! Multi-precision complex scalars.
//!
//! A [`Scalar`] is a pair of `astro_float::BigFloat`s. Precision is not stored
//! in the value: every rounding operation takes the working precision `p` (in
//! bits) explicitly, and the series layer threads one `p` through a whole
//! computation.

use astro_float::{BigFloat, Consts, RoundingMode, Sign, Word};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{domain, Error, Result};
use crate::exact::GaussRational;

pub(crate) const RM: RoundingMode = RoundingMode::ToEven;

pub(crate) fn consts() -> Consts {
    Consts::new().expect("astro-float constant cache")
}

#[derive(Clone, Debug)]
pub struct Scalar {
    re: BigFloat,
    im: BigFloat,
}

impl Scalar {
    pub fn new(re: BigFloat, im: BigFloat) -> Self {
        Self { re, im }
    }

    pub fn zero(p: usize) -> Self {
        Self::new(BigFloat::from_word(0, p), BigFloat::from_word(0, p))
    }

    pub fn one(p: usize) -> Self {
        Self::from_i64(1, p)
    }

    pub fn from_i64(v: i64, p: usize) -> Self {
        Self::new(BigFloat::from_i64(v, p.max(64)), BigFloat::from_word(0, p))
    }

    pub fn from_real(re: BigFloat, p: usize) -> Self {
        Self::new(re, BigFloat::from_word(0, p))
    }

    pub fn from_gauss(g: &GaussRational, p: usize) -> Self {
        Self::new(rational_to_bigfloat(&g.re, p), rational_to_bigfloat(&g.im, p))
    }

    pub fn re(&self) -> &BigFloat {
        &self.re
    }

    pub fn im(&self) -> &BigFloat {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, o: &Self, p: usize) -> Self {
        Self::new(add_bf(&self.re, &o.re, p), add_bf(&self.im, &o.im, p))
    }

    pub fn sub(&self, o: &Self, p: usize) -> Self {
        Self::new(sub_bf(&self.re, &o.re, p), sub_bf(&self.im, &o.im, p))
    }

    pub fn neg(&self) -> Self {
        Self::new(self.re.neg(), self.im.neg())
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), self.im.neg())
    }

    /// Multiplication by `i`; exact.
    pub fn mul_i(&self) -> Self {
        Self::new(self.im.neg(), self.re.clone())
    }

    pub fn mul(&self, o: &Self, p: usize) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(p);
        }
        if self.im.is_zero() {
            return o.mul_real(&self.re, p);
        }
        if o.im.is_zero() {
            return self.mul_real(&o.re, p);
        }
        let rr = self.re.mul(&o.re, p, RM);
        let ii = self.im.mul(&o.im, p, RM);
        let ri = self.re.mul(&o.im, p, RM);
        let ir = self.im.mul(&o.re, p, RM);
        Self::new(rr.sub(&ii, p, RM), ri.add(&ir, p, RM))
    }

    pub fn mul_real(&self, r: &BigFloat, p: usize) -> Self {
        Self::new(mul_bf(&self.re, r, p), mul_bf(&self.im, r, p))
    }

    /// `self += a * b`, the inner kernel of every series product.
    pub fn add_mul(&mut self, a: &Self, b: &Self, p: usize) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        let prod = a.mul(b, p);
        *self = self.add(&prod, p);
    }

    pub fn div(&self, o: &Self, p: usize) -> Result<Self> {
        if o.is_zero() {
            return Err(domain("complex division by zero"));
        }
        if o.im.is_zero() {
            return Ok(self.div_real(&o.re, p));
        }
        let guard = p + 32;
        let n = o.re.mul(&o.re, guard, RM).add(&o.im.mul(&o.im, guard, RM), guard, RM);
        let num = self.mul(&o.conj(), guard);
        Ok(Self::new(num.re.div(&n, p, RM), num.im.div(&n, p, RM)))
    }

    pub fn div_real(&self, r: &BigFloat, p: usize) -> Self {
        Self::new(self.re.div(r, p, RM), self.im.div(r, p, RM))
    }

    pub fn div_u64(&self, k: u64, p: usize) -> Self {
        self.div_real(&BigFloat::from_u64(k, 64), p)
    }

    /// Modulus as an `f64`; enough for reporting residual magnitudes.
    pub fn abs_f64(&self) -> f64 {
        let a = bigfloat_to_f64(&self.re);
        let b = bigfloat_to_f64(&self.im);
        a.hypot(b)
    }

    /// Modulus in full precision.
    pub fn abs(&self, p: usize) -> BigFloat {
        let s = self.re.mul(&self.re, p + 8, RM).add(&self.im.mul(&self.im, p + 8, RM), p + 8, RM);
        s.sqrt(p, RM)
    }

    /// Principal logarithm of an exact Gaussian rational, imaginary part in
    /// `]-pi, pi[`. The closed negative real axis (including 0) is rejected.
    pub fn ln_gauss(a: &GaussRational, p: usize) -> Result<Self> {
        if a.im.is_zero() && !a.re.is_positive() {
            return Err(domain(format!(
                "logarithm base {a} lies on the closed negative real axis"
            )));
        }
        let guard = p + 32;
        let mut cc = consts();
        let modsq = rational_to_bigfloat(&a.norm_sqr(), guard);
        let half = BigFloat::from_word(1, 64).div(&BigFloat::from_word(2, 64), guard, RM);
        let re = modsq.ln(guard, RM, &mut cc).mul(&half, p, RM);
        let im = if a.im.is_zero() {
            BigFloat::from_word(0, p)
        } else if a.re.is_zero() {
            let hp = cc.pi(guard, RM).mul(&half, p, RM);
            if a.im.is_positive() {
                hp
            } else {
                hp.neg()
            }
        } else {
            let ratio = rational_to_bigfloat(&(&a.im / &a.re), guard);
            let at = ratio.atan(guard, RM, &mut cc);
            if a.re.is_positive() {
                at.add(&BigFloat::from_word(0, p), p, RM)
            } else if a.im.is_positive() {
                at.add(&cc.pi(guard, RM), p, RM)
            } else {
                at.sub(&cc.pi(guard, RM), p, RM)
            }
        };
        Ok(Self::new(re, im))
    }

    /// `exp(2 pi i k / n)`; exact for the fourth roots of unity.
    pub fn root_of_unity(k: usize, n: usize, p: usize) -> Self {
        if let Some(g) = exact_root_of_unity(k, n) {
            return Self::from_gauss(&g, p);
        }
        let guard = p + 32;
        let mut cc = consts();
        let two_pi = cc.pi(guard, RM).mul(&BigFloat::from_word(2, 64), guard, RM);
        let angle = two_pi
            .mul(&BigFloat::from_u64(k as u64, 64), guard, RM)
            .div(&BigFloat::from_u64(n as u64, 64), guard, RM);
        let c = angle.cos(guard, RM, &mut cc);
        let s = angle.sin(guard, RM, &mut cc);
        Self::new(
            c.add(&BigFloat::from_word(0, p), p, RM),
            s.add(&BigFloat::from_word(0, p), p, RM),
        )
    }

    pub fn approx_eq(&self, o: &Self, tol: f64) -> bool {
        let d = Self::new(
            sub_bf(&self.re, &o.re, 256),
            sub_bf(&self.im, &o.im, 256),
        );
        d.abs_f64() <= tol
    }

    /// Bitwise equality of both parts.
    pub fn bits_eq(&self, o: &Self) -> bool {
        bf_bits_eq(&self.re, &o.re) && bf_bits_eq(&self.im, &o.im)
    }
}

/// Roots of unity that lie in the Gaussian rationals.
pub fn exact_root_of_unity(k: usize, n: usize) -> Option<GaussRational> {
    let k = k % n;
    // Reduce k/n to one of 0, 1/4, 1/2, 3/4.
    if !(4 * k).is_multiple_of(n) {
        return None;
    }
    Some(match (4 * k) / n {
        0 => GaussRational::one(),
        1 => GaussRational::i(),
        2 => GaussRational::from_int(-1),
        _ => -GaussRational::i(),
    })
}

fn bf_bits_eq(a: &BigFloat, b: &BigFloat) -> bool {
    if a.is_zero() && b.is_zero() {
        return true;
    }
    a.cmp(b) == Some(0)
}

fn add_bf(a: &BigFloat, b: &BigFloat, p: usize) -> BigFloat {
    if b.is_zero() {
        return a.clone();
    }
    if a.is_zero() {
        return b.clone();
    }
    a.add(b, p, RM)
}

fn sub_bf(a: &BigFloat, b: &BigFloat, p: usize) -> BigFloat {
    if b.is_zero() {
        return a.clone();
    }
    if a.is_zero() {
        return b.neg();
    }
    a.sub(b, p, RM)
}

fn mul_bf(a: &BigFloat, b: &BigFloat, p: usize) -> BigFloat {
    if a.is_zero() || b.is_zero() {
        return BigFloat::from_word(0, p);
    }
    a.mul(b, p, RM)
}

/// Converts to the nearest `f64` (flushes to zero below the `f64` range).
pub fn bigfloat_to_f64(x: &BigFloat) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let Some((m, _, sign, e, _)) = x.as_raw_parts() else {
        return f64::NAN;
    };
    let top = *m.last().unwrap_or(&0);
    let v = (top as f64) * 2f64.powi((e - 64).clamp(-1100, 1100));
    if sign == Sign::Neg {
        -v
    } else {
        v
    }
}

/// Exact conversion of an integer.
pub fn bigint_to_bigfloat(n: &BigInt) -> BigFloat {
    if let Some(v) = n.to_i64() {
        return BigFloat::from_i64(v, 64);
    }
    let mag = n.magnitude();
    let bits = mag.bits() as usize;
    let words = bits.div_ceil(64);
    let shifted: BigUint = mag << (words * 64 - bits);
    let digits: Vec<Word> = shifted.to_u64_digits();
    let sign = if n.is_negative() { Sign::Neg } else { Sign::Pos };
    BigFloat::from_words(&digits, sign, bits as i32)
}

/// Correctly rounded conversion of an exact rational to `p` bits.
pub fn rational_to_bigfloat(q: &BigRational, p: usize) -> BigFloat {
    if q.is_zero() {
        return BigFloat::from_word(0, p);
    }
    let num = bigint_to_bigfloat(q.numer());
    if q.denom().is_one() {
        return BigFloat::from_word(0, p).add(&num, p, RM);
    }
    let den = bigint_to_bigfloat(q.denom());
    num.div(&den, p, RM)
}

/// Exact value of a finite float as a rational.
pub fn bigfloat_to_rational(x: &BigFloat) -> Result<BigRational> {
    if x.is_zero() {
        return Ok(BigRational::zero());
    }
    let (m, _, sign, e, _) = x
        .as_raw_parts()
        .ok_or_else(|| Error::Document("non-finite value".into()))?;
    let mut limbs = Vec::with_capacity(m.len() * 2);
    for w in m {
        limbs.push(*w as u32);
        limbs.push((*w >> 32) as u32);
    }
    let mant = BigInt::from(BigUint::new(limbs));
    let shift = e as i64 - 64 * m.len() as i64;
    let mut q = if shift >= 0 {
        BigRational::from_integer(mant << shift as usize)
    } else {
        BigRational::new(mant, BigInt::one() << (-shift) as usize)
    };
    if sign == Sign::Neg {
        q = -q;
    }
    Ok(q)
}

/// Decimal digits needed for a lossless round trip of a `p`-bit mantissa.
pub fn roundtrip_digits(p: usize) -> usize {
    ((p as f64) * std::f64::consts::LOG10_2).ceil() as usize + 2
}

/// Scientific notation with `digits` significant digits, rounded half-even
/// from the exact binary value.
pub fn format_decimal(x: &BigFloat, digits: usize) -> String {
    let q = match bigfloat_to_rational(x) {
        Ok(q) => q,
        Err(_) => return "nan".into(),
    };
    if q.is_zero() {
        return "0".into();
    }
    let neg = q.is_negative();
    let q = q.abs();
    let approx = bigfloat_to_f64(x).abs();
    let mut e10: i64 = if approx > 0.0 && approx.is_finite() {
        approx.log10().floor() as i64
    } else {
        // Outside f64 range: estimate from the binary exponent.
        let be = x.exponent().unwrap_or(0) as f64;
        (be * std::f64::consts::LOG10_2).floor() as i64
    };
    let ten = BigInt::from(10);
    let lo = num_traits::pow(ten.clone(), digits - 1);
    let hi = &lo * &ten;
    let mantissa = loop {
        let scale = digits as i64 - 1 - e10;
        let scaled = if scale >= 0 {
            &q * BigRational::from_integer(num_traits::pow(ten.clone(), scale as usize))
        } else {
            &q / BigRational::from_integer(num_traits::pow(ten.clone(), (-scale) as usize))
        };
        let r = round_half_even(&scaled);
        if r >= hi {
            e10 += 1;
        } else if r < lo {
            e10 -= 1;
        } else {
            break r;
        }
    };
    let s = mantissa.to_string();
    let (head, tail) = s.split_at(1);
    let tail = tail.trim_end_matches('0');
    let sign = if neg { "-" } else { "" };
    if tail.is_empty() {
        format!("{sign}{head}e{e10}")
    } else {
        format!("{sign}{head}.{tail}e{e10}")
    }
}

fn round_half_even(q: &BigRational) -> BigInt {
    let (fl, rem): (BigInt, BigInt) = q.numer().div_mod_floor(q.denom());
    let twice: BigInt = &rem * 2;
    match twice.cmp(q.denom()) {
        std::cmp::Ordering::Less => fl,
        std::cmp::Ordering::Greater => fl + 1,
        std::cmp::Ordering::Equal => {
            if fl.is_even() {
                fl
            } else {
                fl + 1
            }
        }
    }
}

/// Parses a plain or scientific decimal literal exactly.
pub fn parse_decimal_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Document(format!("malformed decimal `{s}`"));
    let t = s.trim();
    let (neg, t) = match t.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (mant, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i64>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
    if int.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int}{frac}");
    let n: BigInt = digits.parse().map_err(|_| bad())?;
    let e = exp - frac.len() as i64;
    let ten = BigInt::from(10);
    let mut q = if e >= 0 {
        BigRational::from_integer(n * num_traits::pow(ten, e as usize))
    } else {
        BigRational::new(n, num_traits::pow(ten, (-e) as usize))
    };
    if neg {
        q = -q;
    }
    Ok(q)
}

pub fn parse_decimal(s: &str, p: usize) -> Result<BigFloat> {
    Ok(rational_to_bigfloat(&parse_decimal_rational(s)?, p))
}

/// pi and ln 2 at working precision.
pub fn pi(p: usize) -> BigFloat {
    consts().pi(p, RM)
}

pub fn ln2(p: usize) -> BigFloat {
    let mut cc = consts();
    BigFloat::from_word(2, 64).ln(p, RM, &mut cc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const P: usize = 192;

    #[test]
    fn principal_log_of_two_over_i() {
        let base = GaussRational::from_int(2).checked_div(&GaussRational::i()).unwrap();
        let l = Scalar::ln_gauss(&base, P).unwrap();
        let expect_re = ln2(P);
        let half_pi = pi(P).div(&BigFloat::from_word(2, 64), P, RM);
        assert!(l.approx_eq(&Scalar::new(expect_re, half_pi.neg()), 1e-55));
    }

    #[test]
    fn log_rejects_negative_axis() {
        assert!(Scalar::ln_gauss(&GaussRational::from_int(-2), P).is_err());
        assert!(Scalar::ln_gauss(&GaussRational::zero(), P).is_err());
        let l1 = Scalar::ln_gauss(&GaussRational::one(), P).unwrap();
        assert!(l1.is_zero());
    }

    #[test]
    fn log_branch_in_left_half_plane() {
        // ln(-1 + i) has argument 3 pi / 4.
        let a = GaussRational::from_int(-1) + GaussRational::i();
        let l = Scalar::ln_gauss(&a, P).unwrap();
        let want = 3.0 * std::f64::consts::PI / 4.0;
        assert!((bigfloat_to_f64(l.im()) - want).abs() < 1e-15);
        let b = GaussRational::from_int(-1) - GaussRational::i();
        let lb = Scalar::ln_gauss(&b, P).unwrap();
        assert!((bigfloat_to_f64(lb.im()) + want).abs() < 1e-15);
    }

    #[test]
    fn roots_of_unity() {
        let z = Scalar::root_of_unity(1, 4, P);
        assert!(z.bits_eq(&Scalar::from_gauss(&GaussRational::i(), P)));
        let w = Scalar::root_of_unity(1, 3, P);
        let w3 = w.mul(&w, P).mul(&w, P);
        assert!(w3.approx_eq(&Scalar::one(P), 1e-55));
    }

    #[test]
    fn big_integers_convert_exactly() {
        let n: BigInt = "123456789012345678901234567890123456789".parse().unwrap();
        let f = bigint_to_bigfloat(&n);
        assert_eq!(bigfloat_to_rational(&f).unwrap(), BigRational::from_integer(n.clone()));
        let f = bigint_to_bigfloat(&-n.clone());
        assert_eq!(bigfloat_to_rational(&f).unwrap(), BigRational::from_integer(-n));
    }

    #[test]
    fn decimal_formatting() {
        let x = BigFloat::from_f64(0.75, P);
        assert_eq!(format_decimal(&x, 10), "7.5e-1");
        assert_eq!(format_decimal(&BigFloat::from_i64(-3, P), 5), "-3e0");
        assert_eq!(format_decimal(&BigFloat::from_word(0, P), 5), "0");
        assert!(parse_decimal("1.2.3", P).is_err());
        assert!(parse_decimal("abc", P).is_err());
    }

    proptest! {
        #[test]
        fn decimal_round_trip_is_lossless(num in -1_000_000_000i64..1_000_000_000, den in 1i64..1_000_000, e in -200i32..200) {
            let q = BigRational::new(num.into(), den.into());
            let mut x = rational_to_bigfloat(&q, P);
            if !x.is_zero() {
                let ex = x.exponent().unwrap();
                x.set_exponent(ex + e);
            }
            let s = format_decimal(&x, roundtrip_digits(P));
            let y = parse_decimal(&s, P).unwrap();
            prop_assert!(bf_bits_eq(&x, &y), "{} did not round-trip", s);
        }
    }
}
