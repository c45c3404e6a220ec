//! Power sums `N_k`, the series `B(x) = sum b_k x^k` by two exact routes, the
//! elliptic beta recursion and its ratio bounds.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::rational::serde_pq;
use crate::arith::{pow, rat, BigRat, FormalSeries};
use crate::curves::ZetaLevel;
use crate::derived::derive_step;
use crate::error::{Error, Result};
use crate::invariants::{extract_invariants, InvariantSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSums {
    pub q: BigRat,
    /// `n[k - 1] = N_k`
    pub n: Vec<BigRat>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BRoute {
    Exp,
    Recursion,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BSeries {
    pub q: BigRat,
    /// `b_0..b_K`
    pub b: Vec<BigRat>,
    pub route: BRoute,
}

/// `A_0..A_{2g}` scaled so that `A_0 = 1`.
fn normalized_a(inv: &InvariantSet) -> Result<Vec<BigRat>> {
    let a = inv.a();
    if a[0].is_zero() {
        return Err(Error::InvariantShape("P(0) = 0".into()));
    }
    let a0 = a[0].clone();
    Ok(a.into_iter().map(|x| x / &a0).collect())
}

/// `N_k = Q^k + 1 - p_k` with `p_k` the power sums of the reciprocal roots of
/// `P / P(0)`, via `p_k = -k c_k - sum_{i<k} c_i p_{k-i}`.
pub fn power_sums(inv: &InvariantSet, k_max: usize) -> Result<PowerSums> {
    let c = normalized_a(inv)?;
    let coef = |i: usize| c.get(i).cloned().unwrap_or_else(BigRat::zero);
    let mut p: Vec<BigRat> = Vec::with_capacity(k_max + 1);
    p.push(BigRat::zero());
    for k in 1..=k_max {
        let mut v = -(coef(k) * rat(k as i64));
        for i in 1..k {
            v -= coef(i) * &p[k - i];
        }
        p.push(v);
    }
    let n = (1..=k_max)
        .map(|k| pow(&inv.q, k as i64) + BigRat::one() - &p[k])
        .collect();
    Ok(PowerSums {
        q: inv.q.clone(),
        n,
    })
}

/// `B(x) = exp(sum_m N_m / (Q^m - 1) x^m / m)` to order `K`.
pub fn b_series_exp(ps: &PowerSums, k_max: usize) -> Result<BSeries> {
    if ps.n.len() < k_max {
        return Err(Error::InsufficientDepth {
            have: ps.n.len(),
            need: k_max,
        });
    }
    let mut g = vec![BigRat::zero(); k_max + 1];
    for m in 1..=k_max {
        let d = pow(&ps.q, m as i64) - BigRat::one();
        if d.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        g[m] = &ps.n[m - 1] / (d * rat(m as i64));
    }
    let b = FormalSeries::new(g, k_max).exp()?.into_coeffs();
    Ok(BSeries {
        q: ps.q.clone(),
        b,
        route: BRoute::Exp,
    })
}

/// Coefficients of `(1-x)(1-Qx) B(Qx) = B(x) P(x)`:
/// `(Q^k - 1) b_k = (Q+1) Q^{k-1} b_{k-1} - Q^{k-1} b_{k-2}
///  + sum_{l=1}^{min(k,2g)} A_l b_{k-l}`, with `b_0 = 1`.
pub fn b_series_recursion(inv: &InvariantSet, k_max: usize) -> Result<BSeries> {
    let a = normalized_a(inv)?;
    let q = &inv.q;
    let q1 = q + BigRat::one();
    let mut b: Vec<BigRat> = Vec::with_capacity(k_max + 1);
    b.push(BigRat::one());
    for k in 1..=k_max {
        let qk1 = pow(q, k as i64 - 1);
        let mut rhs = &q1 * &qk1 * &b[k - 1];
        if k >= 2 {
            rhs -= &qk1 * &b[k - 2];
        }
        for l in 1..=k.min(a.len() - 1) {
            rhs += &a[l] * &b[k - l];
        }
        b.push(rhs / (pow(q, k as i64) - BigRat::one()));
    }
    Ok(BSeries {
        q: q.clone(),
        b,
        route: BRoute::Recursion,
    })
}

/// `beta_0..beta_{n_max}` from
/// `(Q^n - 1) beta_n = (Q^n + Q^{n-1} - a) beta_{n-1} - (Q^{n-1} - Q) beta_{n-2}`,
/// `beta_0 = 1`, `beta_{-1} = 0`.
pub fn elliptic_beta_recursion(a: &BigRat, q: &BigRat, n_max: usize) -> Vec<BigRat> {
    let mut beta = vec![BigRat::one()];
    for n in 1..=n_max {
        let qn = pow(q, n as i64);
        let qn1 = pow(q, n as i64 - 1);
        let mut rhs = (&qn + &qn1 - a) * &beta[n - 1];
        if n >= 2 {
            rhs -= (&qn1 - q) * &beta[n - 2];
        }
        beta.push(rhs / (qn - BigRat::one()));
    }
    beta
}

/// Trace `a` of a genus-1 level, read from `P / P(0) = 1 - aT + QT^2`.
pub fn elliptic_trace(inv: &InvariantSet) -> Result<BigRat> {
    if inv.genus != 1 {
        return Err(Error::GenusMismatch {
            expected: 1,
            actual: inv.genus,
        });
    }
    Ok(-normalized_a(inv)?[1].clone())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TriangleRow {
    pub n: u32,
    #[serde(with = "serde_pq")]
    pub beta_extracted: BigRat,
    #[serde(with = "serde_pq")]
    pub beta_recursion: BigRat,
    #[serde(with = "serde_pq")]
    pub b_exp: BigRat,
    pub agree: bool,
}

/// `beta^{(prefix, n)}` three ways for `n = 0..n_max`: residue of the derived
/// level, the elliptic recursion, and `b_n` of the prefix level. `prefix`
/// must be a normalized genus-1 level.
pub fn elliptic_beta_equals_b_check(prefix: &ZetaLevel, n_max: usize) -> Result<Vec<TriangleRow>> {
    if prefix.genus != 1 {
        return Err(Error::GenusMismatch {
            expected: 1,
            actual: prefix.genus,
        });
    }
    let inv = extract_invariants(prefix)?;
    let a = elliptic_trace(&inv)?;
    let rec = elliptic_beta_recursion(&a, &prefix.q, n_max);
    let b = b_series_exp(&power_sums(&inv, n_max)?, n_max)?.b;
    (0..=n_max)
        .map(|n| {
            let extracted = if n == 0 {
                BigRat::one()
            } else {
                extract_invariants(&derive_step(prefix, n as u32)?)?.beta
            };
            Ok(TriangleRow {
                n: n as u32,
                agree: extracted == rec[n] && extracted == b[n],
                beta_extracted: extracted,
                beta_recursion: rec[n].clone(),
                b_exp: b[n].clone(),
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RatioRow {
    pub n: u32,
    #[serde(with = "serde_pq")]
    pub ratio: BigRat,
    pub lower_holds: bool,
    pub upper_holds: bool,
}

impl RatioRow {
    pub fn holds(&self) -> bool {
        self.lower_holds && self.upper_holds
    }
}

/// `1 < r_n` and `r_n < (Q^{n/2}+1)/(Q^{n/2}-1)` for `r_n = beta_n / beta_{n-1}`,
/// the latter as `Q^n (r-1)^2 < (r+1)^2`, which is equivalent when `r > 1`;
/// for `r <= 1` the upper bound holds trivially.
pub fn ratio_bounds_check(betas: &[BigRat], q: &BigRat, ns: impl IntoIterator<Item = usize>) -> Vec<RatioRow> {
    ns.into_iter()
        .filter(|&n| n >= 1 && n < betas.len())
        .map(|n| {
            let r = &betas[n] / &betas[n - 1];
            let lower = r > BigRat::one();
            let rm = &r - BigRat::one();
            let rp = &r + BigRat::one();
            let upper = !lower || pow(q, n as i64) * &rm * &rm < &rp * &rp;
            RatioRow {
                n: n as u32,
                ratio: r,
                lower_holds: lower,
                upper_holds: upper,
            }
        })
        .collect()
}

/// Row of the elliptic export: `(n, beta_n, b_n, ratio, bound check)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EllipticCsvRow {
    pub curve: String,
    pub n: u32,
    #[serde(with = "serde_pq")]
    pub beta: BigRat,
    #[serde(with = "serde_pq")]
    pub b: BigRat,
    pub ratio: String,
    pub bound_check: String,
}

/// Export rows for `n = 0..n_max` over a normalized genus-1 prefix level.
pub fn elliptic_rows(curve: &str, prefix: &ZetaLevel, n_max: usize) -> Result<Vec<EllipticCsvRow>> {
    let inv = extract_invariants(prefix)?;
    let a = elliptic_trace(&inv)?;
    let betas = elliptic_beta_recursion(&a, &prefix.q, n_max);
    let b = b_series_exp(&power_sums(&inv, n_max)?, n_max)?.b;
    let ratios = ratio_bounds_check(&betas, &prefix.q, 1..=n_max);
    Ok((0..=n_max)
        .map(|n| {
            let row = n.checked_sub(1).and_then(|i| ratios.get(i));
            EllipticCsvRow {
                curve: curve.to_string(),
                n: n as u32,
                beta: betas[n].clone(),
                b: b[n].clone(),
                ratio: row.map_or(String::new(), |r| crate::arith::to_pq(&r.ratio)),
                bound_check: row.map_or(String::new(), |r| {
                    if r.holds() { "pass" } else { "fail" }.to_string()
                }),
            }
        })
        .collect())
}

/// The exact `n = 1` outcome: `r_1 = (Q+1-a)/(Q-1)`, so the lower bound
/// fails iff `a >= 2`, and the upper bound fails iff `a <= -2 sqrt(Q)`.
pub fn n1_ratio_prediction(a: &BigRat, q: &BigRat) -> (bool, bool) {
    let lower = a < &rat(2);
    let upper = !(a.is_negative() && a * a >= rat(4) * q);
    (lower, upper)
}
