//! Binary fixed-point complex numbers over `BigInt`: a value `v` stands for
//! `v / 2^bits`.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::arith::BigRat;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cx {
    pub re: BigInt,
    pub im: BigInt,
}

/// Arithmetic context fixing the number of fractional bits.
#[derive(Clone, Copy, Debug)]
pub struct Fixed {
    pub bits: u32,
}

impl Fixed {
    pub fn new(bits: u32) -> Self {
        Fixed { bits }
    }

    pub fn one(&self) -> BigInt {
        BigInt::from(1) << self.bits
    }

    pub fn from_rat(&self, x: &BigRat) -> BigInt {
        (x.numer() << self.bits) / x.denom()
    }

    pub fn from_f64(&self, x: f64) -> BigInt {
        let m = (x * (1u64 << 52) as f64).round() as i64;
        let v = BigInt::from(m);
        if self.bits >= 52 {
            v << (self.bits - 52)
        } else {
            v >> (52 - self.bits)
        }
    }

    pub fn real(&self, x: BigInt) -> Cx {
        Cx {
            re: x,
            im: BigInt::zero(),
        }
    }

    pub fn polar_f64(&self, r: f64, theta: f64) -> Cx {
        Cx {
            re: self.from_f64(r * theta.cos()),
            im: self.from_f64(r * theta.sin()),
        }
    }

    pub fn add(&self, a: &Cx, b: &Cx) -> Cx {
        Cx {
            re: &a.re + &b.re,
            im: &a.im + &b.im,
        }
    }

    pub fn sub(&self, a: &Cx, b: &Cx) -> Cx {
        Cx {
            re: &a.re - &b.re,
            im: &a.im - &b.im,
        }
    }

    pub fn mul(&self, a: &Cx, b: &Cx) -> Cx {
        Cx {
            re: (&a.re * &b.re - &a.im * &b.im) >> self.bits,
            im: (&a.re * &b.im + &a.im * &b.re) >> self.bits,
        }
    }

    /// `None` when `b` is zero at this precision.
    pub fn div(&self, a: &Cx, b: &Cx) -> Option<Cx> {
        let den = &b.re * &b.re + &b.im * &b.im;
        if den.is_zero() {
            return None;
        }
        let re = (&a.re * &b.re + &a.im * &b.im) << self.bits;
        let im = (&a.im * &b.re - &a.re * &b.im) << self.bits;
        Some(Cx {
            re: re / &den,
            im: im / &den,
        })
    }

    /// `|a|^2` at scale `2^{2 bits}`.
    pub fn abs2_wide(&self, a: &Cx) -> BigInt {
        &a.re * &a.re + &a.im * &a.im
    }

    /// `|a|` at scale `2^bits`.
    pub fn abs(&self, a: &Cx) -> BigInt {
        self.abs2_wide(a).sqrt()
    }

    pub fn conj(&self, a: &Cx) -> Cx {
        Cx {
            re: a.re.clone(),
            im: -&a.im,
        }
    }

    pub fn to_rat(&self, x: &BigInt) -> BigRat {
        BigRat::new(x.clone(), self.one())
    }

    /// `(p(z), p'(z))` by Horner; `coeffs[i]` multiplies `z^i`.
    pub fn eval_with_derivative(&self, coeffs: &[Cx], z: &Cx) -> (Cx, Cx) {
        let zero = self.real(BigInt::zero());
        let mut p = zero.clone();
        let mut d = zero;
        for c in coeffs.iter().rev() {
            d = self.add(&self.mul(&d, z), &p);
            p = self.add(&self.mul(&p, z), c);
        }
        (p, d)
    }

    pub fn is_negligible(&self, x: &BigInt, below_bits: u32) -> bool {
        x.abs().bits() + below_bits as u64 <= self.bits as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, ratio};

    #[test]
    fn arithmetic() {
        let f = Fixed::new(128);
        let two = f.real(f.from_rat(&rat(2)));
        let i = Cx {
            re: BigInt::zero(),
            im: f.one(),
        };
        let p = f.mul(&i, &i);
        assert_eq!(p, f.real(-f.one()));
        let q = f.div(&two, &i).unwrap();
        assert_eq!(q.re, BigInt::zero());
        assert_eq!(q.im, -f.from_rat(&rat(2)));
        let three_four = Cx {
            re: f.from_rat(&rat(3)),
            im: f.from_rat(&rat(4)),
        };
        assert_eq!(f.abs(&three_four), f.from_rat(&rat(5)));
        assert_eq!(f.from_rat(&ratio(1, 2)), f.one() >> 1);
        assert!(f.div(&two, &f.real(BigInt::zero())).is_none());
    }

    #[test]
    fn horner_derivative() {
        let f = Fixed::new(96);
        // 1 + 2z + 3z^2 at z = 2: p = 17, p' = 14
        let cs: Vec<Cx> = [1, 2, 3].iter().map(|&c| f.real(f.from_rat(&rat(c)))).collect();
        let (p, d) = f.eval_with_derivative(&cs, &f.real(f.from_rat(&rat(2))));
        assert_eq!(p.re, f.from_rat(&rat(17)));
        assert_eq!(d.re, f.from_rat(&rat(14)));
    }
}
