//! Scalar helpers around [`BigRat`].

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational; always reduced with a positive denominator.
pub type BigRat = BigRational;

pub fn rat(n: i64) -> BigRat {
    BigRat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> BigRat {
    BigRat::new(BigInt::from(n), BigInt::from(d))
}

pub fn from_bigint(n: BigInt) -> BigRat {
    BigRat::from_integer(n)
}

/// `x^e` for any integer exponent. Panics on `0^e` with `e < 0`.
pub fn pow(x: &BigRat, e: i64) -> BigRat {
    if e >= 0 {
        num_traits::pow(x.clone(), e as usize)
    } else {
        assert!(!x.is_zero(), "zero raised to a negative power");
        num_traits::pow(x.recip(), e.unsigned_abs() as usize)
    }
}

/// Formats as `"p/q"`, including `"p/1"` for integers.
pub fn to_pq(x: &BigRat) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Parses `"p/q"`, `"p"` or `"-p/q"`.
pub fn parse_rat(s: &str) -> Result<BigRat> {
    let bad = || Error::ParseRational(s.to_string());
    let t = s.trim();
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRat::new(n, d))
}

/// Sign as -1, 0, 1.
pub fn sign(x: &BigRat) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

pub fn is_one(x: &BigRat) -> bool {
    x.is_one()
}

/// Binomial coefficient C(n, 2).
pub fn choose2(n: u64) -> u64 {
    n * n.saturating_sub(1) / 2
}

/// Serde adapter writing rationals as `"p/q"` strings.
pub mod serde_pq {
    use super::{parse_rat, to_pq, BigRat};
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigRat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&to_pq(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRat, D::Error> {
        let s = String::deserialize(d)?;
        parse_rat(&s).map_err(D::Error::custom)
    }
}

/// Same as [`serde_pq`] for sequences.
pub mod serde_pq_vec {
    use super::{parse_rat, to_pq, BigRat};
    use serde::{de::Error as _, ser::SerializeSeq, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(xs: &[BigRat], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(xs.len()))?;
        for x in xs {
            seq.serialize_element(&to_pq(x))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigRat>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| parse_rat(s).map_err(D::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pq_round_trip() {
        for s in ["3/1", "-7/4", "0/1", "12345678901234567890/7"] {
            assert_eq!(to_pq(&parse_rat(s).unwrap()), s);
        }
        assert_eq!(parse_rat("6/4").unwrap(), ratio(3, 2));
        assert_eq!(parse_rat(" 5 ").unwrap(), rat(5));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }

    #[test]
    fn negative_powers() {
        assert_eq!(pow(&rat(2), -3), ratio(1, 8));
        assert_eq!(pow(&ratio(2, 3), 2), ratio(4, 9));
        assert_eq!(pow(&rat(5), 0), rat(1));
    }
}
