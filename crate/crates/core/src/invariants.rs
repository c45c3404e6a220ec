//! Alpha/beta invariants of a level, the closed beta formula, the counting
//! identity between consecutive levels, and Gamma polynomials.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::rational::{serde_pq, serde_pq_vec, sign};
use crate::arith::{pow, rat, to_pq, BigRat, Poly, RatFunc};
use crate::curves::{pole_polynomial, ZetaLevel};
use crate::derived::{derive_step, level_prefactor, SpecialValues};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantSet {
    /// `alpha(0..g-1)`
    pub alphas: Vec<BigRat>,
    pub beta: BigRat,
    /// Numerator of degree `2g`.
    pub p: Poly,
    pub q: BigRat,
    pub genus: u32,
}

impl InvariantSet {
    /// `A_0..A_{2g}`
    pub fn a(&self) -> Vec<BigRat> {
        (0..=2 * self.genus as usize).map(|i| self.p.coeff(i)).collect()
    }

    pub fn all_positive(&self) -> bool {
        self.beta.is_positive() && self.alphas.iter().all(Signed::is_positive)
    }
}

/// `S(T)` of degree `2g-2` from `alpha(0..g-1)`:
/// `s_j = alpha(j)` for `j < g` and `s_j = Q^{j-g+1} alpha(2g-2-j)` above.
pub fn s_poly(alphas: &[BigRat], q: &BigRat) -> Poly {
    let g = alphas.len();
    let mut s = vec![BigRat::zero(); 2 * g - 1];
    for j in 0..2 * g - 1 {
        s[j] = if j < g {
            alphas[j].clone()
        } else {
            pow(q, (j + 1 - g) as i64) * &alphas[2 * g - 2 - j]
        };
    }
    Poly::new(s)
}

/// `P = (Q-1) beta T^g + (1-T)(1-QT) S(T)`
pub fn reconstruct_p(alphas: &[BigRat], beta: &BigRat, q: &BigRat) -> Poly {
    let g = alphas.len();
    let quad = pole_polynomial(q, 1);
    let s = s_poly(alphas, q);
    &(&quad * &s) + &Poly::monomial((q - BigRat::one()) * beta, g)
}

/// `beta = Res_{T=1}`, `P = Z (1-T)(1-QT) T^{g-1}` and `alpha` from the exact
/// quotient `(P - (Q-1) beta T^g) / ((1-T)(1-QT))`.
pub fn extract_invariants(z: &ZetaLevel) -> Result<InvariantSet> {
    let g = z.genus as usize;
    let beta = z.zeta.residue_simple_pole(&rat(1))?;
    let p = z.numerator()?;
    if p.degree() != Some(2 * g) {
        return Err(Error::InvariantShape(format!(
            "deg P = {:?}, expected {}",
            p.degree(),
            2 * g
        )));
    }
    let rest = &p - &Poly::monomial((&z.q - BigRat::one()) * &beta, g);
    let s = rest
        .exact_div(&pole_polynomial(&z.q, 1))?
        .ok_or_else(|| Error::InvariantShape("P - (Q-1) beta T^g is not divisible".into()))?;
    let alphas: Vec<BigRat> = (0..g).map(|l| s.coeff(l)).collect();
    if s_poly(&alphas, &z.q) != s {
        return Err(Error::InvariantShape(format!("S = {s} is not reflexive")));
    }
    Ok(InvariantSet {
        alphas,
        beta,
        p,
        q: z.q.clone(),
        genus: z.genus,
    })
}

/// `A_k` of `P / alpha(0)` from `alpha' = alpha / alpha(0)` and
/// `beta' = beta / alpha(0)`, case by case in `k`.
pub fn a_table(alphas: &[BigRat], beta: &BigRat, q: &BigRat) -> Vec<BigRat> {
    let g = alphas.len() as i64;
    let a0 = &alphas[0];
    let al = |i: i64| -> BigRat {
        if (0..g).contains(&i) {
            &alphas[i as usize] / a0
        } else {
            BigRat::zero()
        }
    };
    let bp = beta / a0;
    let q1 = q + BigRat::one();
    let qp = |e: i64| pow(q, e);
    (0..=2 * g)
        .map(|k| {
            if k == 0 {
                BigRat::one()
            } else if k == 2 * g {
                qp(g)
            } else if k == g {
                (q - BigRat::one()) * &bp - &q1 * al(g - 1) + rat(2) * q * al(g - 2)
            } else if k == 1 {
                al(1) - &q1
            } else if k < g {
                al(k) - &q1 * al(k - 1) + q * al(k - 2)
            } else if k == g + 1 {
                qp(2) * al(g - 3) - &q1 * q * al(g - 2) + q * al(g - 1)
            } else {
                qp(k - g + 1) * al(2 * g - 2 - k) - &q1 * qp(k - g) * al(2 * g - 1 - k)
                    + qp(k - g) * al(2 * g - k)
            }
        })
        .collect()
}

/// `Q^{C(n,2)(g-1)} sum_{d |= n} prod v-hat(d_i) / prod (1 - Q^{d_j + d_{j+1}})`
pub fn beta_closed_form(sv: &SpecialValues, n: u32, g: u32) -> Result<BigRat> {
    let w = sv.block_weights(n as usize)?;
    let total: BigRat = w[n as usize].iter().sum();
    Ok(total * level_prefactor(&sv.q, n, g))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MiracleCheck {
    pub n: u32,
    #[serde(with = "serde_pq")]
    pub lhs: BigRat,
    #[serde(with = "serde_pq")]
    pub rhs: BigRat,
    pub holds: bool,
}

/// `alpha^{(.., n+1)}(0) = Q_prev^{n(g-1)} alpha^{prev}(0) beta^{(.., n)}`,
/// each side from its own derivation.
pub fn counting_miracle_check(prev: &ZetaLevel, n: u32) -> Result<MiracleCheck> {
    let upper = extract_invariants(&derive_step(prev, n + 1)?)?;
    let lower = extract_invariants(&derive_step(prev, n)?)?;
    let base = extract_invariants(prev)?;
    let g = prev.genus as i64;
    let lhs = upper.alphas[0].clone();
    let rhs = pow(&prev.q, n as i64 * (g - 1)) * &base.alphas[0] * &lower.beta;
    Ok(MiracleCheck {
        n,
        holds: lhs == rhs,
        lhs,
        rhs,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaPoly {
    pub n: u32,
    pub q_prev: BigRat,
    pub gamma: Poly,
    pub delta: RatFunc,
    /// `sum_{k |= n}` of the composition weights.
    pub beta2: BigRat,
}

/// `Delta = sum_{k |= n} w(k) / (Q^{k_p} T - 1)` and
/// `Gamma = Delta prod_{l=1}^{n} (Q^l T - 1)`.
pub fn gamma_poly(sv: &SpecialValues, n: u32) -> Result<GammaPoly> {
    let nn = n as usize;
    let w = sv.block_weights(nn)?;
    let q = &sv.q;
    let mut delta = RatFunc::zero();
    for j in 1..=nn {
        let lin = Poly::new(vec![-BigRat::one(), pow(q, j as i64)]);
        delta = &delta + &RatFunc::new(Poly::constant(w[nn][j].clone()), lin)?;
    }
    let mut clear = Poly::one();
    for l in 1..=nn {
        clear = &clear * &Poly::new(vec![-BigRat::one(), pow(q, l as i64)]);
    }
    let gamma = delta
        .mul_poly(&clear)?
        .as_poly()
        .ok_or_else(|| Error::GammaInconsistency("Delta * prod is not a polynomial".into()))?;
    if gamma.degree().is_some_and(|d| d + 1 > nn) {
        return Err(Error::GammaInconsistency(format!(
            "degree {:?} exceeds n - 1 = {}",
            gamma.degree(),
            nn - 1
        )));
    }
    let beta2: BigRat = w[nn].iter().sum();
    Ok(GammaPoly {
        n,
        q_prev: q.clone(),
        gamma,
        delta,
        beta2,
    })
}

impl GammaPoly {
    /// `Gamma(0) = (-1)^{n-1} beta''`
    pub fn constant_term_holds(&self) -> bool {
        let s = if self.n % 2 == 1 { rat(1) } else { rat(-1) };
        self.gamma.constant_term() == s * &self.beta2
    }

    pub fn has_full_degree(&self) -> bool {
        self.gamma.degree() == Some(self.n as usize - 1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InterlacingCheck {
    pub n: u32,
    /// Sign of `Gamma(Q^{-kappa})`, `kappa = 1..n`.
    pub signs: Vec<i8>,
    pub root_at_sample_point: bool,
    /// Sign changes between consecutive sample points.
    pub interval_sign_changes: usize,
    pub holds: bool,
}

/// Signs at `T = Q^{-kappa}` must alternate as `(-1)^{kappa+1}`, which
/// places one root in each `(Q^{-kappa-1}, Q^{-kappa})`.
pub fn gamma_interlacing_check(gp: &GammaPoly) -> InterlacingCheck {
    let signs: Vec<i8> = (1..=gp.n as i64)
        .map(|k| sign(&gp.gamma.eval(&pow(&gp.q_prev, -k))))
        .collect();
    let holds = signs
        .iter()
        .enumerate()
        .all(|(i, &s)| s == if i % 2 == 0 { 1 } else { -1 });
    let interval_sign_changes = signs.windows(2).filter(|w| w[0] * w[1] < 0).count();
    InterlacingCheck {
        n: gp.n,
        root_at_sample_point: signs.contains(&0),
        interval_sign_changes,
        signs,
        holds,
    }
}

/// Invariant report for one level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantReport {
    pub curve: String,
    pub tuple: Vec<u32>,
    #[serde(rename = "Q", with = "serde_pq")]
    pub q: BigRat,
    #[serde(with = "serde_pq_vec")]
    pub alphas: Vec<BigRat>,
    #[serde(with = "serde_pq")]
    pub beta: BigRat,
    pub positivity: bool,
    pub gamma_signs: BTreeMap<String, Vec<i8>>,
}

impl InvariantReport {
    pub fn new(curve: &str, level: &ZetaLevel, inv: &InvariantSet) -> Self {
        InvariantReport {
            curve: curve.to_string(),
            tuple: level.tuple.clone(),
            q: inv.q.clone(),
            alphas: inv.alphas.clone(),
            beta: inv.beta.clone(),
            positivity: inv.all_positive(),
            gamma_signs: BTreeMap::new(),
        }
    }

    pub fn summary_line(&self) -> String {
        format!(
            "tuple={:?} Q={} beta={} alphas=[{}] positive={}",
            self.tuple,
            to_pq(&self.q),
            to_pq(&self.beta),
            self.alphas.iter().map(to_pq).collect::<Vec<_>>().join(", "),
            self.positivity
        )
    }
}
