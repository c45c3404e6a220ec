//! Riemann-hypothesis checks on level numerators: an exact criterion in
//! genus 1 and a fixed-point all-roots solver in general.

pub mod decimal;
pub mod fixed;
pub mod roots;
pub mod sweep;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::rational::{sign, to_pq};
use crate::arith::{pow, rat, BigRat, Poly};
use crate::error::{Error, Result};
use crate::invariants::InvariantSet;

pub use decimal::{parse_decimal, to_sci};
use fixed::{Cx, Fixed};
use roots::{aberth, Initial};

/// Outcome of any check in this crate's reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, PartialOrd, Ord)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    Unknown,
}

impl Outcome {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Outcome::Pass => "pass",
            Outcome::Fail => "fail",
            Outcome::Unknown => "unknown",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ExactG1,
    Numeric,
}

#[derive(Clone, Debug, Serialize)]
pub struct RHVerdict {
    pub method: Method,
    pub holds: Outcome,
    /// Exact: `A^2 = 4Q`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub boundary: Option<bool>,
    /// Exact: sign of `A^2 - 4Q`, the discriminant of `1 - A T + Q T^2`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub discriminant_sign: Option<i8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<String>,
    /// Numeric: `| |root| sqrt(Q) - 1 |` per distinct root.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub deviations: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_deviation: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub precision_bits: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<String>,
    /// Numeric: worst distance between `r` and the nearest root to its
    /// partner `1/(Q conj r)`, in the rescaled variable.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pairing_defect: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub self_inversive: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub iterations: Option<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub diagnostics: Vec<String>,
    #[serde(skip)]
    pub max_deviation_value: Option<BigRat>,
    #[serde(skip)]
    pub pairing_defect_value: Option<BigRat>,
}

impl RHVerdict {
    fn empty(method: Method, holds: Outcome) -> Self {
        RHVerdict {
            method,
            holds,
            boundary: None,
            discriminant_sign: None,
            a: None,
            deviations: Vec::new(),
            max_deviation: None,
            precision_bits: None,
            tolerance: None,
            pairing_defect: None,
            self_inversive: None,
            iterations: None,
            diagnostics: Vec::new(),
            max_deviation_value: None,
            pairing_defect_value: None,
        }
    }
}

pub const DEFAULT_PRECISION_BITS: u32 = 256;
const SCI_DIGITS: usize = 6;
const MAX_ITER: usize = 400;

/// `10^{-floor(3 bits / 20)}`.
pub fn default_tolerance(bits: u32) -> BigRat {
    pow(&rat(10), -((bits as i64 * 3) / 20))
}

/// Genus-1 verdict: with `P = A_0 (1 - A T + Q T^2)`, holds iff `A^2 <= 4Q`.
pub fn rh_exact_genus1(inv: &InvariantSet) -> Result<RHVerdict> {
    if inv.genus != 1 {
        return Err(Error::GenusMismatch {
            expected: 1,
            actual: inv.genus,
        });
    }
    if inv.p.degree() != Some(2) {
        return Err(Error::DegreeMismatch(format!("numerator {} is not quadratic", inv.p)));
    }
    let a0 = inv.p.coeff(0);
    let a = -inv.p.coeff(1) / &a0;
    if inv.p.coeff(2) != &inv.q * &a0 {
        return Err(Error::InvariantShape(format!(
            "leading coefficient of {} is not Q times the constant term",
            inv.p
        )));
    }
    let disc = &a * &a - rat(4) * &inv.q;
    let s = sign(&disc);
    let mut v = RHVerdict::empty(Method::ExactG1, Outcome::from_bool(s <= 0));
    v.boundary = Some(s == 0);
    v.discriminant_sign = Some(s);
    v.a = Some(to_pq(&a));
    Ok(v)
}

/// Exact test of `A_{2g-i} = Q^{g-i} A_i`.
pub fn is_self_inversive(p: &Poly, q: &BigRat) -> bool {
    let Some(d) = p.degree() else { return false };
    if d % 2 == 1 {
        return false;
    }
    let g = (d / 2) as i64;
    (0..=d).all(|i| p.coeff(d - i) == pow(q, g - i as i64) * p.coeff(i))
}

/// Numeric verdict for `inv.p`, with one automatic retry at doubled
/// precision when the result lands in the escalation band.
pub fn rh_numeric(inv: &InvariantSet, bits: u32, tol: &BigRat) -> Result<RHVerdict> {
    if inv.p.degree() != Some(2 * inv.genus as usize) {
        return Err(Error::DegreeMismatch(format!(
            "numerator degree {:?} but genus {}",
            inv.p.degree(),
            inv.genus
        )));
    }
    rh_numeric_poly(&inv.p, &inv.q, bits, tol)
}

/// As [`rh_numeric`] on a bare polynomial `p` and level constant `Q > 0`.
/// `p` need not be self-inversive; the flag is reported.
pub fn rh_numeric_poly(p: &Poly, q: &BigRat, bits: u32, tol: &BigRat) -> Result<RHVerdict> {
    match p.degree() {
        Some(d) if d >= 1 => {}
        _ => return Err(Error::DegreeMismatch(format!("{p} has no roots"))),
    }
    if !q.is_positive() {
        return Err(Error::InvalidCurve(format!("Q = {} must be positive", to_pq(q))));
    }
    if p.constant_term().is_zero() {
        return Err(Error::DegreeMismatch(format!("{p} vanishes at T = 0")));
    }
    let first = numeric_once(p, q, bits, tol)?;
    if first.holds != Outcome::Unknown || first.max_deviation_value.is_none() {
        return Ok(first);
    }
    let mut second = numeric_once(p, q, bits * 2, tol)?;
    second.diagnostics.insert(
        0,
        format!("escalated from {bits} to {} bits", bits * 2),
    );
    Ok(second)
}

fn numeric_once(p: &Poly, q: &BigRat, bits: u32, tol: &BigRat) -> Result<RHVerdict> {
    let fx = Fixed::new(bits);
    let sf = p.squarefree()?;
    let d = sf.degree().expect("nonzero");
    // T = z / s with s ~ sqrt(Q) puts the expected roots near |z| = 1
    let s = isqrt_rat(q).max(BigInt::one());
    let s_rat = BigRat::from_integer(s.clone());
    let scaled = sf.scale_var(&s_rat.recip()).monic();
    let coeffs: Vec<Cx> = scaled.coeffs().iter().map(|c| fx.real(fx.from_rat(c))).collect();
    // |z| expected on the circle s / sqrt(Q)
    let s2_over_q = &s_rat * &s_rat / q;
    let radius = s2_over_q.to_f64().unwrap_or(1.0).sqrt();

    let mut diagnostics = Vec::new();
    let mut run = aberth(&coeffs, &fx, Initial::Circle(radius * 1.125), MAX_ITER);
    if !run.converged {
        diagnostics.push(format!("circle start did not converge in {MAX_ITER} iterations"));
        run = aberth(&coeffs, &fx, Initial::Scattered(radius), MAX_ITER);
    }
    let mut v = RHVerdict::empty(Method::Numeric, Outcome::Unknown);
    v.precision_bits = Some(bits);
    v.tolerance = Some(to_sci(tol, SCI_DIGITS));
    v.self_inversive = Some(is_self_inversive(p, q));
    v.iterations = Some(run.iterations);
    if d < p.degree().unwrap_or(0) {
        diagnostics.push(format!(
            "repeated roots removed: {} distinct of {}",
            d,
            p.degree().unwrap_or(0)
        ));
    }
    if !run.converged {
        diagnostics.push("scattered start did not converge; verdict unknown".to_string());
        v.diagnostics = diagnostics;
        return Ok(v);
    }

    // deviation of |z| sqrt(Q) / s from 1, i.e. sqrt(|z|^2 Q / s^2)
    let one = fx.one();
    let wide_factor = q / (&s_rat * &s_rat);
    let mut devs = Vec::with_capacity(d);
    for z in &run.roots {
        let wide = BigRat::from_integer(fx.abs2_wide(z)) * &wide_factor;
        let m = wide.to_integer().sqrt();
        devs.push(BigRat::new((m - &one).abs(), one.clone()));
    }
    let max = devs.iter().max().cloned().unwrap_or_else(BigRat::zero);
    v.deviations = devs.iter().map(|x| to_sci(x, SCI_DIGITS)).collect();
    v.max_deviation = Some(to_sci(&max, SCI_DIGITS));

    // pairing r -> 1/(Q conj r), which is z -> (s^2/Q) / conj z
    let c = fx.real(fx.from_rat(&s2_over_q));
    let mut defect = BigInt::zero();
    for z in &run.roots {
        let Some(partner) = fx.div(&c, &fx.conj(z)) else { continue };
        let nearest = run
            .roots
            .iter()
            .map(|w| fx.abs(&fx.sub(w, &partner)))
            .min()
            .unwrap_or_default();
        defect = defect.max(nearest);
    }
    let defect = BigRat::new(defect, one);
    v.pairing_defect = Some(to_sci(&defect, SCI_DIGITS));
    v.pairing_defect_value = Some(defect);

    v.holds = if &max < tol {
        Outcome::Pass
    } else if max <= tol * rat(10) {
        Outcome::Unknown
    } else {
        Outcome::Fail
    };
    v.max_deviation_value = Some(max);
    v.diagnostics = diagnostics;
    Ok(v)
}

/// `floor(sqrt(x))` for `x > 0`.
fn isqrt_rat(x: &BigRat) -> BigInt {
    x.to_integer().sqrt()
}

/// Numeric check preferred only where no exact criterion exists.
pub fn rh_check(inv: &InvariantSet, bits: u32, tol: &BigRat) -> Result<RHVerdict> {
    if inv.genus == 1 {
        rh_exact_genus1(inv)
    } else {
        rh_numeric(inv, bits, tol)
    }
}
