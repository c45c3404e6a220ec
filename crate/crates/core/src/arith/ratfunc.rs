//! Reduced rational functions in one variable.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::poly::Poly;
use super::rational::{to_pq, BigRat};
use crate::error::{Error, Result};

/// `num / den` with `gcd(num, den) = 1` and the lowest nonzero coefficient of
/// `den` equal to one. Zero is `0/1`.
///
/// Because the form is canonical, `==` is equality of functions.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    /// Reduces `num/den` to canonical form.
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let g = Poly::gcd(&num, &den)?;
        let (num, den) = if g.is_constant() {
            (num, den)
        } else {
            (
                num.exact_div(&g)?.expect("gcd divides numerator"),
                den.exact_div(&g)?.expect("gcd divides denominator"),
            )
        };
        Ok(Self::normalized(num, den))
    }

    /// Applies the denominator normalization to an already-coprime pair.
    fn normalized(num: Poly, den: Poly) -> Self {
        let v = den.valuation().expect("nonzero denominator");
        let c = den.coeffs()[v].clone();
        if c.is_one() {
            return RatFunc { num, den };
        }
        let inv = c.recip();
        RatFunc {
            num: num.scale(&inv),
            den: den.scale(&inv),
        }
    }

    pub fn zero() -> Self {
        RatFunc {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        Self::constant(BigRat::one())
    }

    pub fn constant(c: BigRat) -> Self {
        RatFunc {
            num: Poly::constant(c),
            den: Poly::one(),
        }
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFunc {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    /// The polynomial this function equals, if it is one.
    pub fn as_poly(&self) -> Option<Poly> {
        self.is_polynomial()
            .then(|| self.num.scale(&self.den.constant_term().recip()))
    }

    pub fn eval(&self, t: &BigRat) -> Result<BigRat> {
        let d = self.den.eval(t);
        if d.is_zero() {
            return Err(Error::Pole(to_pq(t)));
        }
        Ok(self.num.eval(t) / d)
    }

    /// `f(c*T)`
    pub fn scale_var(&self, c: &BigRat) -> Result<Self> {
        if c.is_zero() {
            return Err(Error::ZeroScale);
        }
        // Scaling the variable preserves coprimality.
        Ok(Self::normalized(self.num.scale_var(c), self.den.scale_var(c)))
    }

    /// `f(1/(c*T))`
    pub fn invert_var(&self, c: &BigRat) -> Result<Self> {
        if c.is_zero() {
            return Err(Error::ZeroScale);
        }
        // p(1/(cT)) = rev_c(p)(T) / (cT)^deg p, with rev_c(p) = sum p_i c^(d-i) T^(d-i).
        let rev = |p: &Poly| -> (Poly, usize) {
            let d = p.degree().unwrap_or(0);
            let mut out = vec![BigRat::zero(); d + 1];
            let mut f = BigRat::one();
            for i in (0..=d).rev() {
                out[d - i] = p.coeff(i) * &f;
                f *= c;
            }
            (Poly::new(out), d)
        };
        let (rn, dn) = rev(&self.num);
        let (rd, dd) = rev(&self.den);
        // f = rn/(cT)^dn / (rd/(cT)^dd) = rn * (cT)^dd / (rd * (cT)^dn)
        let (num, den) = if dd >= dn {
            let k = dd - dn;
            (rn.shift(k).scale(&super::rational::pow(c, k as i64)), rd)
        } else {
            let k = dn - dd;
            (rn, rd.shift(k).scale(&super::rational::pow(c, k as i64)))
        };
        Self::new(num, den)
    }

    /// Residue at a simple pole `t0`, i.e. `num(t0) / den'(t0)`.
    pub fn residue_simple_pole(&self, t0: &BigRat) -> Result<BigRat> {
        if !self.den.eval(t0).is_zero() {
            return Err(Error::NotAPole(to_pq(t0)));
        }
        let dprime = self.den.derivative().eval(t0);
        if dprime.is_zero() {
            return Err(Error::PoleNotSimple(to_pq(t0)));
        }
        Ok(self.num.eval(t0) / dprime)
    }

    pub fn scale(&self, c: &BigRat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RatFunc {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn mul_poly(&self, p: &Poly) -> Result<Self> {
        Self::new(&self.num * p, self.den.clone())
    }

    pub fn div_poly(&self, p: &Poly) -> Result<Self> {
        if p.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Self::new(self.num.clone(), &self.den * p)
    }

    pub fn recip(&self) -> Result<Self> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, rhs: &RatFunc) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(self * &rhs.recip()?)
    }

    fn add_impl(&self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        // a/b + c/d with g = gcd(b, d): only g can share factors with the sum.
        let g = Poly::gcd(&self.den, &rhs.den).expect("denominators are nonzero");
        let b_g = self.den.exact_div(&g).unwrap().unwrap();
        let d_g = rhs.den.exact_div(&g).unwrap().unwrap();
        let num = &(&self.num * &d_g) + &(&rhs.num * &b_g);
        if num.is_zero() {
            return RatFunc::zero();
        }
        let den = &self.den * &d_g;
        if g.is_constant() {
            return RatFunc::normalized(num, den);
        }
        let h = Poly::gcd(&num, &g).unwrap();
        if h.is_constant() {
            RatFunc::normalized(num, den)
        } else {
            RatFunc::normalized(
                num.exact_div(&h).unwrap().unwrap(),
                den.exact_div(&h).unwrap().unwrap(),
            )
        }
    }

    fn mul_impl(&self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        // Cross-cancel so the product stays reduced.
        let g1 = Poly::gcd(&self.num, &rhs.den).unwrap();
        let g2 = Poly::gcd(&rhs.num, &self.den).unwrap();
        let n1 = self.num.exact_div(&g1).unwrap().unwrap();
        let d2 = rhs.den.exact_div(&g1).unwrap().unwrap();
        let n2 = rhs.num.exact_div(&g2).unwrap().unwrap();
        let d1 = self.den.exact_div(&g2).unwrap().unwrap();
        RatFunc::normalized(&n1 * &n2, &d1 * &d2)
    }
}

impl Add<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        self.add_impl(rhs)
    }
}

impl Sub<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self.add_impl(&-rhs)
    }
}

impl Mul<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        self.mul_impl(rhs)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() && self.den.constant_term().is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{rat, ratio};

    fn p(cs: &[i64]) -> Poly {
        Poly::from_ints(cs)
    }

    fn rf(n: &[i64], d: &[i64]) -> RatFunc {
        RatFunc::new(p(n), p(d)).unwrap()
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(rf(&[1, 0, -1], &[1, -1]), RatFunc::from_poly(p(&[1, 1])));
        assert_eq!(rf(&[], &[1, 5]), RatFunc::zero());
        let n = (&p(&[1, -1]) * &p(&[1, -2])).scale(&rat(7));
        let d = p(&[1, -1]).scale(&rat(7));
        assert_eq!(RatFunc::new(n, d).unwrap(), RatFunc::from_poly(p(&[1, -2])));
        assert_eq!(RatFunc::new(p(&[1]), Poly::zero()), Err(Error::ZeroDenominator));
    }

    #[test]
    fn normalization_uses_lowest_coefficient() {
        let f = rf(&[1], &[0, 2, 4]);
        assert_eq!(f.den(), &p(&[0, 1, 2]));
        assert_eq!(f.num(), &Poly::new(vec![ratio(1, 2)]));
        let g = rf(&[3], &[3, 6]);
        assert_eq!(g.den(), &p(&[1, 2]));
    }

    #[test]
    fn scale_var_examples() {
        let f = rf(&[1], &[1, -1]);
        assert_eq!(f.scale_var(&rat(2)).unwrap(), rf(&[1], &[1, -2]));
        assert_eq!(f.scale_var(&rat(1)).unwrap(), f);
        assert_eq!(f.scale_var(&rat(0)), Err(Error::ZeroScale));
        let g = rf(&[0, 1], &[1, 0, -1]);
        let expect = RatFunc::new(
            Poly::new(vec![rat(0), ratio(1, 2)]),
            Poly::new(vec![rat(1), rat(0), ratio(-1, 4)]),
        )
        .unwrap();
        assert_eq!(g.scale_var(&ratio(1, 2)).unwrap(), expect);
    }

    #[test]
    fn eval_examples() {
        assert_eq!(rf(&[1, 1], &[1, -1]).eval(&rat(0)).unwrap(), rat(1));
        assert_eq!(
            rf(&[1], &[1, -1]).eval(&rat(1)),
            Err(Error::Pole("1/1".into()))
        );
        assert_eq!(rf(&[1, 0, -2], &[1, -1]).eval(&ratio(1, 2)).unwrap(), rat(1));
    }

    #[test]
    fn residue_examples() {
        assert_eq!(rf(&[1], &[1, -1]).residue_simple_pole(&rat(1)).unwrap(), rat(-1));
        // (q-1)T / ((1-T)(1-qT)) at T=1, q=2
        let f = RatFunc::new(p(&[0, 1]), &p(&[1, -1]) * &p(&[1, -2])).unwrap();
        assert_eq!(f.residue_simple_pole(&rat(1)).unwrap(), rat(1));
        assert_eq!(
            rf(&[0, 1], &[1, 0, -1]).residue_simple_pole(&rat(1)).unwrap(),
            ratio(-1, 2)
        );
        assert!(matches!(
            rf(&[1], &[1, -1]).residue_simple_pole(&rat(2)),
            Err(Error::NotAPole(_))
        ));
        assert!(matches!(
            rf(&[1], &[1, -2, 1]).residue_simple_pole(&rat(1)),
            Err(Error::PoleNotSimple(_))
        ));
    }

    #[test]
    fn invert_var_functional_equation() {
        // (1 + 2T^2)/((1-T)(1-2T)) is invariant under T -> 1/(2T)
        let z = RatFunc::new(p(&[1, 0, 2]), &p(&[1, -1]) * &p(&[1, -2])).unwrap();
        assert_eq!(z.invert_var(&rat(2)).unwrap(), z);
        let tampered = RatFunc::new(p(&[1, 1, 1]), &p(&[1, -1]) * &p(&[1, -2])).unwrap();
        assert_ne!(tampered.invert_var(&rat(2)).unwrap(), tampered);
    }

    #[test]
    fn field_operations() {
        let a = rf(&[1], &[1, -1]);
        let b = rf(&[1], &[1, 1]);
        assert_eq!(&a + &b, rf(&[2], &[1, 0, -1]));
        assert_eq!(&a - &a, RatFunc::zero());
        assert_eq!(&a * &a.recip().unwrap(), RatFunc::one());
        assert_eq!(a.checked_div(&b).unwrap(), rf(&[1, 1], &[1, -1]));
    }
}
