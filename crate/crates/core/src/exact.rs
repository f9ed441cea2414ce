//! Exact Gaussian rationals, used for generator-map coefficients, Möbius
//! matrices and scalar-power bases.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{domain, Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaussRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn from_int(v: i64) -> Self {
        Self::new(BigRational::from_integer(v.into()), BigRational::zero())
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            BigRational::zero(),
        )
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn i() -> Self {
        Self::new(BigRational::zero(), BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(domain("division by zero"));
        }
        let n = other.norm_sqr();
        let num = self * &other.conj();
        Ok(Self::new(num.re / &n, num.im / n))
    }

    /// Integer power; negative exponents require a nonzero base.
    pub fn pow(&self, e: i64) -> Result<Self> {
        let mut base = if e < 0 {
            Self::one().checked_div(self)?
        } else {
            self.clone()
        };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        Ok(acc)
    }
}

fn fmt_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for GaussRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", fmt_rational(&self.re));
        }
        let im = if self.im.is_one() {
            String::new()
        } else if (-self.im.clone()).is_one() {
            "-".to_string()
        } else {
            fmt_rational(&self.im)
        };
        if self.re.is_zero() {
            write!(f, "{im}i")
        } else if self.im.is_negative() {
            write!(f, "{}{im}i", fmt_rational(&self.re))
        } else {
            write!(f, "{}+{im}i", fmt_rational(&self.re))
        }
    }
}

/// Parses `p`, `p/q`, and optionally signed decimal integers; the imaginary
/// part is not accepted here (documents store real and imaginary parts apart).
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Document(format!("malformed rational `{s}`"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(
            BigInt::from_str(s).map_err(|_| bad())?,
        )),
    }
}

pub fn format_rational(q: &BigRational) -> String {
    fmt_rational(q)
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl $tr<&GaussRational> for &GaussRational {
            type Output = GaussRational;
            fn $method(self, rhs: &GaussRational) -> GaussRational {
                let f: fn(&GaussRational, &GaussRational) -> GaussRational = $body;
                f(self, rhs)
            }
        }
        impl $tr<GaussRational> for GaussRational {
            type Output = GaussRational;
            fn $method(self, rhs: GaussRational) -> GaussRational {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&GaussRational> for GaussRational {
            type Output = GaussRational;
            fn $method(self, rhs: &GaussRational) -> GaussRational {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| GaussRational::new(&a.re + &b.re, &a.im + &b.im));
forward_binop!(Sub, sub, |a, b| GaussRational::new(&a.re - &b.re, &a.im - &b.im));
forward_binop!(Mul, mul, |a, b| GaussRational::new(
    &a.re * &b.re - &a.im * &b.im,
    &a.re * &b.im + &a.im * &b.re
));
// Panics on a zero divisor, like the rational division it wraps.
forward_binop!(Div, div, |a, b| a.checked_div(b).expect("division by zero"));

impl Neg for GaussRational {
    type Output = GaussRational;
    fn neg(self) -> GaussRational {
        GaussRational::new(-self.re, -self.im)
    }
}

impl Neg for &GaussRational {
    type Output = GaussRational;
    fn neg(self) -> GaussRational {
        GaussRational::new(-self.re.clone(), -self.im.clone())
    }
}

impl From<i64> for GaussRational {
    fn from(v: i64) -> Self {
        Self::from_int(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_in_gaussian_rationals() {
        let two = GaussRational::from_int(2);
        let i = GaussRational::i();
        let q = &two / &i;
        assert_eq!(q, GaussRational::new(BigRational::zero(), BigRational::from_integer((-2).into())));
        assert_eq!(&i * &i, GaussRational::from_int(-1));
        assert_eq!(i.pow(4).unwrap(), GaussRational::one());
        assert_eq!(i.pow(-1).unwrap(), -i.clone());
        assert!(GaussRational::zero().checked_div(&GaussRational::zero()).is_err());
    }

    #[test]
    fn display_forms() {
        assert_eq!(GaussRational::from_ratio(-1, 2).to_string(), "-1/2");
        assert_eq!(GaussRational::i().to_string(), "i");
        assert_eq!((-GaussRational::i()).to_string(), "-i");
        let z = GaussRational::from_int(1) - GaussRational::i() * GaussRational::from_int(3);
        assert_eq!(z.to_string(), "1-3i");
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("-3/6").unwrap(), BigRational::new((-1).into(), 2.into()));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
