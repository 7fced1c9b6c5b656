//! Exact rational helpers shared by the scheme tables and the norm formulas.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn pow(base: i64, exp: i64) -> Rational {
    if exp >= 0 {
        Rational::from_integer(num_traits::pow(BigInt::from(base), exp as usize))
    } else {
        Rational::one() / Rational::from_integer(num_traits::pow(BigInt::from(base), (-exp) as usize))
    }
}

/// `C(a, b)`, zero when `b < 0` or `b > a` (including negative `a`).
pub fn binom(a: i64, b: i64) -> BigInt {
    if b < 0 || a < 0 || b > a {
        return BigInt::zero();
    }
    let b = b.min(a - b);
    let mut acc = BigInt::one();
    for k in 0..b {
        acc = acc * BigInt::from(a - k) / BigInt::from(k + 1);
    }
    acc
}

pub fn binom_q(a: i64, b: i64) -> Rational {
    Rational::from_integer(binom(a, b))
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // numerator/denominator too large for a direct conversion
        let n = q.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = q.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

pub fn abs(q: &Rational) -> Rational {
    q.abs()
}

/// Serde adapters: rationals are written as `"p/q"` strings next to an `f64`
/// approximation field where the consumer needs a number.
pub mod ser {
    use super::Rational;
    use serde::ser::SerializeSeq;
    use serde::Serializer;

    pub fn one<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&q.to_string())
    }

    pub fn opt<S: Serializer>(q: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match q {
            Some(q) => s.serialize_some(&q.to_string()),
            None => s.serialize_none(),
        }
    }

    pub fn many<S: Serializer>(qs: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(qs.len()))?;
        for q in qs {
            seq.serialize_element(&q.to_string())?;
        }
        seq.end()
    }
}

/// `⌊q⌋` for non-negative `q`.
pub fn floor_to_usize(q: &Rational) -> usize {
    q.floor().to_integer().to_usize().unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_conventions() {
        assert_eq!(binom(5, 2), BigInt::from(10));
        assert_eq!(binom(1, -1), BigInt::zero());
        assert_eq!(binom(0, -1), BigInt::zero());
        assert_eq!(binom(-1, 0), BigInt::zero());
        assert_eq!(binom(2, 3), BigInt::zero());
        assert_eq!(binom(0, 0), BigInt::one());
    }

    #[test]
    fn negative_powers() {
        assert_eq!(pow(2, -3), frac(1, 8));
        assert_eq!(pow(3, 0), int(1));
    }
}
