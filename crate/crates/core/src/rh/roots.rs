//! Simultaneous refinement of all roots of a polynomial (Aberth iteration)
//! in fixed-point arithmetic.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::fixed::{Cx, Fixed};

#[derive(Clone, Debug)]
pub struct RootSet {
    pub roots: Vec<Cx>,
    pub iterations: usize,
    pub converged: bool,
}

/// Starting points for [`aberth`].
#[derive(Clone, Copy, Debug)]
pub enum Initial {
    /// Evenly spaced on `|z| = r`, rotated off the real axis.
    Circle(f64),
    /// Deterministic quasi-random spread of radii and angles around `r`.
    Scattered(f64),
}

impl Initial {
    fn points(&self, fx: &Fixed, d: usize) -> Vec<Cx> {
        use std::f64::consts::TAU;
        match *self {
            Initial::Circle(r) => (0..d)
                .map(|k| fx.polar_f64(r, TAU * (k as f64 + 0.25) / d as f64 + 0.4))
                .collect(),
            Initial::Scattered(r) => (0..d)
                .map(|k| {
                    let k = k as f64 + 1.0;
                    let rr = r * (0.3 + 1.7 * (k * 0.618_033_988_75).fract());
                    let th = TAU * (k * 0.754_877_666_25).fract() + 0.1;
                    fx.polar_f64(rr, th)
                })
                .collect(),
        }
    }
}

/// Aberth iteration on `sum coeffs[i] z^i` (degree `d >= 1`).
///
/// Stops once every correction is below `2^{-bits/2}` times the largest
/// root modulus, then applies two more sweeps to reach working precision.
pub fn aberth(coeffs: &[Cx], fx: &Fixed, init: Initial, max_iter: usize) -> RootSet {
    let d = coeffs.len() - 1;
    let mut z = init.points(fx, d);
    let mut polish = None;
    for it in 1..=max_iter {
        let mut next = Vec::with_capacity(d);
        let mut worst = BigInt::zero();
        for i in 0..d {
            let (p, dp) = fx.eval_with_derivative(coeffs, &z[i]);
            let newton = match fx.div(&p, &dp) {
                Some(n) => n,
                None => {
                    // stationary point: nudge and retry next sweep
                    let nudge = fx.real(fx.one() >> (fx.bits / 4));
                    next.push(fx.add(&z[i], &nudge));
                    worst = fx.one();
                    continue;
                }
            };
            let mut s = fx.real(BigInt::zero());
            for j in 0..d {
                if j != i {
                    if let Some(inv) = fx.div(&fx.real(fx.one()), &fx.sub(&z[i], &z[j])) {
                        s = fx.add(&s, &inv);
                    }
                }
            }
            let denom = fx.sub(&fx.real(fx.one()), &fx.mul(&newton, &s));
            let w = fx.div(&newton, &denom).unwrap_or(newton);
            let size = w.re.abs().max(w.im.abs());
            if size > worst {
                worst = size;
            }
            next.push(fx.sub(&z[i], &w));
        }
        z = next;
        let scale = z.iter().map(|r| fx.abs(r)).max().unwrap_or_else(|| fx.one());
        let scale_bits = scale.bits() as i64 - fx.bits as i64;
        let tol_bits = (fx.bits / 2) as i64 - scale_bits.max(0);
        let small = worst.is_zero() || (worst.bits() as i64) + tol_bits <= fx.bits as i64;
        match polish {
            None if small => polish = Some(2),
            Some(0) => {
                return RootSet {
                    roots: z,
                    iterations: it,
                    converged: true,
                }
            }
            Some(k) => polish = Some(k - 1),
            None => {}
        }
    }
    RootSet {
        roots: z,
        iterations: max_iter,
        converged: polish.is_some(),
    }
}
