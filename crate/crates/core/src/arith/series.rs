//! Truncated formal power series with exact coefficients.

use std::ops::{Add, Mul, Sub};

use num_traits::{One, Zero};

use super::rational::{rat, BigRat};
use crate::error::{Error, Result};

/// `sum_{k=0}^{K} c_k x^k + O(x^{K+1})`; always stores exactly `K + 1`
/// coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FormalSeries {
    coeffs: Vec<BigRat>,
}

impl FormalSeries {
    /// Pads with zeros or truncates to `order + 1` coefficients.
    pub fn new(mut coeffs: Vec<BigRat>, order: usize) -> Self {
        coeffs.resize(order + 1, BigRat::zero());
        FormalSeries { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self::new(Vec::new(), order)
    }

    pub fn one(order: usize) -> Self {
        Self::new(vec![BigRat::one()], order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigRat] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigRat> {
        self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &BigRat {
        &self.coeffs[k]
    }

    pub fn scale(&self, c: &BigRat) -> Self {
        FormalSeries {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// `exp(g)` via `exp(g)' = g' exp(g)`:
    /// `k e_k = sum_{j=1}^{k} j g_j e_{k-j}`.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let n = self.order();
        let weighted: Vec<BigRat> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(j, g)| g * rat(j as i64))
            .collect();
        let mut e = Vec::with_capacity(n + 1);
        e.push(BigRat::one());
        for k in 1..=n {
            let mut acc = BigRat::zero();
            for j in 1..=k {
                if !weighted[j].is_zero() {
                    acc += &weighted[j] * &e[k - j];
                }
            }
            e.push(acc / rat(k as i64));
        }
        Ok(FormalSeries { coeffs: e })
    }
}

impl Add<&FormalSeries> for &FormalSeries {
    type Output = FormalSeries;
    fn add(self, rhs: &FormalSeries) -> FormalSeries {
        let n = self.order().min(rhs.order());
        FormalSeries {
            coeffs: (0..=n).map(|k| &self.coeffs[k] + &rhs.coeffs[k]).collect(),
        }
    }
}

impl Sub<&FormalSeries> for &FormalSeries {
    type Output = FormalSeries;
    fn sub(self, rhs: &FormalSeries) -> FormalSeries {
        let n = self.order().min(rhs.order());
        FormalSeries {
            coeffs: (0..=n).map(|k| &self.coeffs[k] - &rhs.coeffs[k]).collect(),
        }
    }
}

impl Mul<&FormalSeries> for &FormalSeries {
    type Output = FormalSeries;
    fn mul(self, rhs: &FormalSeries) -> FormalSeries {
        let n = self.order().min(rhs.order());
        let mut out = vec![BigRat::zero(); n + 1];
        for (i, a) in self.coeffs.iter().take(n + 1).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().take(n + 1 - i).enumerate() {
                out[i + j] += a * b;
            }
        }
        FormalSeries { coeffs: out }
    }
}
