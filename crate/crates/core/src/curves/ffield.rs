//! Small finite fields `F_{p^m}` with log/antilog tables, and point counting
//! on curves `y^2 + h(x) y = f(x)`.

use crate::error::{Error, Result};

/// Largest field the counter will enumerate.
pub const ENUMERATION_BOUND: u64 = 1 << 20;

/// `F_{p^m}` realised as `F_p[x]/(f)` for a primitive `f`. Elements are
/// encoded as integers whose base-`p` digits are the coefficients of the
/// residue, so `0` is zero and `1` is one.
#[derive(Debug, Clone)]
pub struct SmallField {
    p: u64,
    m: u32,
    size: u64,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl SmallField {
    pub fn new(p: u64, m: u32) -> Result<Self> {
        let size = checked_pow(p, m).filter(|&s| s <= ENUMERATION_BOUND);
        let size = size.ok_or(Error::EnumerationBound(p.saturating_pow(m)))?;
        if !is_prime(p) {
            return Err(Error::InvalidCurve(format!("{p} is not prime")));
        }
        let modulus = find_primitive(p, m as usize);
        let n = (size - 1) as usize;
        let mut exp = vec![0u32; n];
        let mut log = vec![0u32; size as usize];
        let mut cur = vec![0u64; m as usize];
        cur[0] = 1;
        for (i, slot) in exp.iter_mut().enumerate() {
            let code = encode(&cur, p);
            *slot = code as u32;
            log[code as usize] = i as u32;
            cur = mul_x_mod(&cur, &modulus, p);
        }
        Ok(SmallField {
            p,
            m,
            size,
            exp,
            log,
        })
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        let (mut a, mut b) = (a as u64, b as u64);
        let mut out = 0u64;
        let mut place = 1u64;
        while a > 0 || b > 0 {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out as u32
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let n = self.exp.len();
        let s = self.log[a as usize] as usize + self.log[b as usize] as usize;
        self.exp[s % n]
    }

    pub fn inv(&self, a: u32) -> u32 {
        assert!(a != 0, "inverse of zero");
        let n = self.exp.len();
        self.exp[(n - self.log[a as usize] as usize) % n]
    }

    /// Image of a prime-field element.
    pub fn from_prime(&self, c: u64) -> u32 {
        (c % self.p) as u32
    }

    /// `+1` for nonzero squares, `-1` for non-squares, `0` for zero. Odd `p`.
    pub fn quadratic_character(&self, a: u32) -> i64 {
        if a == 0 {
            0
        } else if self.log[a as usize].is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// Absolute trace to `F_2`. Characteristic 2 only.
    pub fn trace2(&self, a: u32) -> u32 {
        let mut t = 0;
        let mut c = a;
        for _ in 0..self.m {
            t ^= c;
            c = self.mul(c, c);
        }
        debug_assert!(t <= 1);
        t
    }

    fn eval(&self, coeffs: &[u64], x: u32) -> u32 {
        coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| self.add(self.mul(acc, x), self.from_prime(c)))
    }
}

/// Plane model `y^2 + h(x) y = f(x)` over a prime field, with `deg f = 2g+1`
/// and `deg h <= g`; its smooth model has one point at infinity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HyperellipticModel {
    pub p: u64,
    pub h: Vec<u64>,
    pub f: Vec<u64>,
}

impl HyperellipticModel {
    pub fn new(p: u64, h: Vec<u64>, f: Vec<u64>) -> Result<Self> {
        let trim = |mut v: Vec<u64>| {
            v.iter_mut().for_each(|c| *c %= p);
            while v.last() == Some(&0) {
                v.pop();
            }
            v
        };
        let (h, f) = (trim(h), trim(f));
        let df = f.len().saturating_sub(1);
        if f.is_empty() || df < 3 || df % 2 == 0 {
            return Err(Error::UnsupportedEquation(format!(
                "deg f = {df}; need an odd degree >= 3"
            )));
        }
        let g = (df - 1) / 2;
        if h.len() > g + 1 {
            return Err(Error::UnsupportedEquation(format!(
                "deg h = {} exceeds genus {g}",
                h.len() - 1
            )));
        }
        if p == 2 && h.is_empty() {
            return Err(Error::UnsupportedEquation(
                "h = 0 gives a singular model in characteristic 2".into(),
            ));
        }
        Ok(HyperellipticModel { p, h, f })
    }

    pub fn genus(&self) -> u32 {
        ((self.f.len() - 2) / 2) as u32
    }

    /// Points over `F_{p^m}` of the smooth projective model.
    pub fn count_points(&self, m: u32) -> Result<u64> {
        let field = SmallField::new(self.p, m)?;
        let mut affine = 0i64;
        for x in 0..field.size() as u32 {
            let hx = field.eval(&self.h, x);
            let fx = field.eval(&self.f, x);
            affine += if self.p == 2 {
                if hx == 0 {
                    1
                } else {
                    let hinv = field.inv(hx);
                    let c = field.mul(fx, field.mul(hinv, hinv));
                    if field.trace2(c) == 0 {
                        2
                    } else {
                        0
                    }
                }
            } else {
                // (2y + h)^2 = h^2 + 4f
                let four = field.from_prime(4);
                let disc = field.add(field.mul(hx, hx), field.mul(four, fx));
                1 + field.quadratic_character(disc)
            };
        }
        Ok(affine as u64 + 1)
    }
}

/// `#X(F_{q^k})` where `q = p^r`.
pub fn count_points_bruteforce(model: &HyperellipticModel, q: u64, k: u32) -> Result<u64> {
    let (p, r) = prime_power(q).ok_or_else(|| Error::InvalidCurve(format!("{q} is not a prime power")))?;
    if p != model.p {
        return Err(Error::InvalidCurve(format!(
            "model over F_{} cannot be counted over F_{q}",
            model.p
        )));
    }
    let m = r * k;
    match checked_pow(p, m) {
        Some(s) if s <= ENUMERATION_BOUND => model.count_points(m),
        _ => Err(Error::EnumerationBound(p.saturating_pow(m))),
    }
}

/// `(p, r)` with `q = p^r`, or `None` if `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let (mut rest, mut r) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        r += 1;
    }
    (rest == 1).then_some((p, r))
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

fn checked_pow(b: u64, e: u32) -> Option<u64> {
    b.checked_pow(e)
}

fn encode(v: &[u64], p: u64) -> u64 {
    v.iter().rev().fold(0, |acc, &d| acc * p + d)
}

/// `x * v mod modulus`, where `modulus` is monic of degree `v.len()` and
/// stored without its leading coefficient.
fn mul_x_mod(v: &[u64], modulus: &[u64], p: u64) -> Vec<u64> {
    let m = v.len();
    let top = v[m - 1];
    let mut out = vec![0u64; m];
    for i in (1..m).rev() {
        out[i] = v[i - 1];
    }
    for i in 0..m {
        out[i] = (out[i] + (p - top) * modulus[i] % p) % p;
    }
    out
}

fn mulmod_poly(a: &[u64], b: &[u64], modulus: &[u64], p: u64) -> Vec<u64> {
    let m = modulus.len();
    let mut acc = vec![0u64; m];
    // Horner over the coefficients of b, highest first.
    for &bj in b.iter().rev() {
        acc = mul_x_mod(&acc, modulus, p);
        for i in 0..m {
            acc[i] = (acc[i] + a[i] * bj) % p;
        }
    }
    acc
}

fn powmod_x(e: u64, modulus: &[u64], p: u64) -> Vec<u64> {
    let m = modulus.len();
    let mut result = vec![0u64; m];
    result[0] = 1;
    let mut base = vec![0u64; m];
    if m == 1 {
        base[0] = (p - modulus[0]) % p;
    } else {
        base[1] = 1;
    }
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            result = mulmod_poly(&result, &base, modulus, p);
        }
        base = mulmod_poly(&base, &base, modulus, p);
        e >>= 1;
    }
    result
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// First monic degree-`m` polynomial (in encoding order) for which `x` has
/// multiplicative order `p^m - 1`; such a polynomial is irreducible.
fn find_primitive(p: u64, m: usize) -> Vec<u64> {
    let n = p.pow(m as u32) - 1;
    let factors = prime_factors(n);
    let is_one = |v: &[u64]| v[0] == 1 && v[1..].iter().all(|&c| c == 0);
    for code in 0..p.pow(m as u32) {
        let mut modulus = vec![0u64; m];
        let mut c = code;
        for slot in modulus.iter_mut() {
            *slot = c % p;
            c /= p;
        }
        if modulus[0] == 0 {
            continue;
        }
        if !is_one(&powmod_x(n, &modulus, p)) {
            continue;
        }
        if n == 1 || factors.iter().all(|r| !is_one(&powmod_x(n / r, &modulus, p))) {
            return modulus;
        }
    }
    unreachable!("primitive polynomials exist in every degree")
}
