//! Decimal scientific notation for rationals: the only non-`p/q` numbers in
//! emitted reports.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::arith::{pow, rat, BigRat};
use crate::error::{Error, Result};

/// `x` as `d.ddd...e±k` with `digits` significant digits (truncated).
pub fn to_sci(x: &BigRat, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let neg = x.is_negative();
    let mut m = x.abs();
    let ten = rat(10);
    let mut e: i64 = 0;
    // coarse jump via bit lengths, then exact adjustment
    let approx = ((m.numer().bits() as f64 - m.denom().bits() as f64) * std::f64::consts::LOG10_2) as i64;
    if approx != 0 {
        m /= pow(&ten, approx);
        e += approx;
    }
    while m >= ten {
        m /= &ten;
        e += 1;
    }
    while m < rat(1) {
        m *= &ten;
        e -= 1;
    }
    let scaled = m * pow(&ten, digits.saturating_sub(1) as i64);
    let int: BigInt = scaled.to_integer();
    let s = int.to_string();
    let (head, tail) = s.split_at(1);
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    out.push_str(head);
    if !tail.is_empty() {
        out.push('.');
        out.push_str(tail);
    }
    out.push_str(&format!("e{e}"));
    out
}

/// Parses decimal literals such as `1e-30`, `0.001`, `2.5E+3`, or `p/q`.
pub fn parse_decimal(s: &str) -> Result<BigRat> {
    let bad = || Error::ParseRational(s.to_string());
    let t = s.trim();
    if t.contains('/') {
        return crate::arith::parse_rat(t);
    }
    let (mant, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i64>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (ip, fp) = mant.split_once('.').unwrap_or((mant, ""));
    if ip.is_empty() && fp.is_empty() {
        return Err(bad());
    }
    if !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("0{ip}{fp}").parse().map_err(|_| bad())?;
    let v = BigRat::from_integer(digits) * pow(&rat(10), exp - fp.len() as i64);
    Ok(if neg { -v } else { v })
}
