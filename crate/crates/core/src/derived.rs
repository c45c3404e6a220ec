//! The derivation step: from one level's complete zeta to the next, as a sum
//! over integer compositions of shifted evaluations of the previous zeta.

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::arith::{pow, rat, BigRat, Poly, RatFunc};
use crate::curves::{validate_zeta_level, ZetaLevel};
use crate::error::{Error, Result};

/// Ordered sequence of positive parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Composition {
    pub parts: Vec<u32>,
}

impl Composition {
    pub fn total(&self) -> u32 {
        self.parts.iter().sum()
    }
}

/// All compositions of `total`, `(total)` first and `(1, .., 1)` last. Zero
/// has exactly one composition, the empty one.
pub fn compositions(total: u32) -> impl Iterator<Item = Composition> {
    let count: u64 = if total == 0 { 1 } else { 1u64 << (total - 1) };
    (0..count).map(move |mask| {
        if total == 0 {
            return Composition { parts: Vec::new() };
        }
        // bit i set: a cut after position i + 1
        let mut parts = Vec::with_capacity(mask.count_ones() as usize + 1);
        let mut run = 1;
        for i in 0..total - 1 {
            if mask >> i & 1 == 1 {
                parts.push(run);
                run = 1;
            } else {
                run += 1;
            }
        }
        parts.push(run);
        Composition { parts }
    })
}

/// `zeta-hat(k)` and `v-hat(N)` of one level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecialValues {
    pub q: BigRat,
    /// `Res_{T=1}` of the zeta.
    pub zeta1: BigRat,
    /// `values[k - 1] = zeta-hat(k)`.
    pub values: Vec<BigRat>,
    /// `vhats[N] = prod_{k<=N} zeta-hat(k)`, with `vhats[0] = 1`.
    pub vhats: Vec<BigRat>,
}

impl SpecialValues {
    pub fn depth(&self) -> usize {
        self.values.len()
    }

    pub fn vhat(&self, n: usize) -> &BigRat {
        &self.vhats[n]
    }

    fn require(&self, n: usize) -> Result<()> {
        if self.depth() < n {
            return Err(Error::InsufficientDepth {
                have: self.depth(),
                need: n,
            });
        }
        Ok(())
    }

    /// `prod v-hat(k_i) / prod (1 - Q^{k_j + k_{j+1}})`; 1 for the empty
    /// composition.
    pub fn weight(&self, c: &Composition) -> Result<BigRat> {
        self.require(c.total() as usize)?;
        let mut w = BigRat::one();
        for (i, &k) in c.parts.iter().enumerate() {
            w *= self.vhat(k as usize);
            if i + 1 < c.parts.len() {
                let e = (k + c.parts[i + 1]) as i64;
                w /= BigRat::one() - pow(&self.q, e);
            }
        }
        Ok(w)
    }

    /// `W[m][j]`: the summed weight of compositions of `m` whose last part
    /// is `j`, for `1 <= j <= m <= n`. Weights are reversal invariant, so
    /// this is also the sum over compositions with first part `j`.
    pub fn block_weights(&self, n: usize) -> Result<Vec<Vec<BigRat>>> {
        self.require(n)?;
        let mut w: Vec<Vec<BigRat>> = vec![Vec::new(); n + 1];
        for m in 1..=n {
            let mut row = vec![BigRat::zero(); m + 1];
            for j in 1..m {
                let mut acc = BigRat::zero();
                for i in 1..=m - j {
                    acc += &w[m - j][i] / (BigRat::one() - pow(&self.q, (i + j) as i64));
                }
                row[j] = acc * self.vhat(j);
            }
            row[m] = self.vhat(m).clone();
            w[m] = row;
        }
        Ok(w)
    }
}

/// `zeta-hat(1)` as the residue at `T = 1`, `zeta-hat(k) = Z(Q^{-k})` for
/// `2 <= k <= n_max`.
pub fn special_values(z: &ZetaLevel, n_max: usize) -> Result<SpecialValues> {
    let zeta1 = z.zeta.residue_simple_pole(&rat(1))?;
    let mut values = Vec::with_capacity(n_max);
    let mut vhats = Vec::with_capacity(n_max + 1);
    vhats.push(BigRat::one());
    for k in 1..=n_max {
        let v = if k == 1 {
            zeta1.clone()
        } else {
            z.zeta.eval(&pow(&z.q, -(k as i64)))?
        };
        vhats.push(&vhats[k - 1] * &v);
        values.push(v);
    }
    Ok(SpecialValues {
        q: z.q.clone(),
        zeta1,
        values,
        vhats,
    })
}

/// `Q^{C(n,2)(g-1)}`
pub fn level_prefactor(q: &BigRat, n: u32, g: u32) -> BigRat {
    let c2 = (n as i64) * (n as i64 - 1) / 2;
    pow(q, c2 * (g as i64 - 1))
}

fn next_level(z: &ZetaLevel, n: u32, zeta: RatFunc) -> ZetaLevel {
    let mut tuple = z.tuple.clone();
    tuple.push(n);
    ZetaLevel {
        tuple,
        q: pow(&z.q, n as i64),
        genus: z.genus,
        zeta,
        normalization: None,
    }
}

fn check_level(level: ZetaLevel) -> Result<ZetaLevel> {
    let failed: Vec<_> = validate_zeta_level(&level)
        .into_iter()
        .filter(|c| !c.passed)
        .map(|c| format!("{}: {}", c.name, c.detail))
        .collect();
    if failed.is_empty() {
        Ok(level)
    } else {
        Err(Error::DerivationInconsistency(failed.join("; ")))
    }
}

fn validate_n(n: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidTuple("tuple entries must be >= 1".into()));
    }
    Ok(())
}

/// `sum_j w_j / (1 - c_j T)` over distinct `c_j`, on one common denominator.
fn partial_fractions(terms: &[(BigRat, BigRat)], times_t: bool) -> Result<RatFunc> {
    let factors: Vec<Poly> = terms.iter().map(|(_, c)| Poly::one_minus(c.clone())).collect();
    let mut den = Poly::one();
    for f in &factors {
        den = &den * f;
    }
    let mut num = Poly::zero();
    for (i, (w, _)) in terms.iter().enumerate() {
        let mut others = Poly::constant(w.clone());
        for (j, f) in factors.iter().enumerate() {
            if i != j {
                others = &others * f;
            }
        }
        num = &num + &others;
    }
    if times_t {
        num = num.shift(1);
    }
    RatFunc::new(num, den)
}

/// Next level of the tower.
///
/// The double composition sum factorizes for each `a` into a right block,
/// the shifted previous zeta and a left block; each block collapses onto its
/// boundary part through [`SpecialValues::block_weights`]. The result is
/// validated against the zeta facts before it is returned.
pub fn derive_step(z: &ZetaLevel, n: u32) -> Result<ZetaLevel> {
    validate_n(n)?;
    if n == 1 {
        return Ok(next_level(z, 1, z.zeta.clone()));
    }
    let q = &z.q;
    let nn = n as usize;
    let sv = special_values(z, nn)?;
    let w = sv.block_weights(nn)?;

    let terms: Vec<RatFunc> = (1..=nn)
        .into_par_iter()
        .map(|a| -> Result<RatFunc> {
            let mr = nn - a;
            let ml = a - 1;
            // T/(T - Q^{a+j-n}) = 1/(1 - Q^{a+j-n} T^{-1}); with u = Q^{n-a-j},
            // it equals -uT / (1 - uT).
            let right = if mr == 0 {
                RatFunc::one()
            } else {
                let t: Vec<(BigRat, BigRat)> = (1..=mr)
                    .map(|j| {
                        let u = pow(q, (nn - a - j) as i64);
                        (-(&w[mr][j] * &u), u)
                    })
                    .collect();
                partial_fractions(&t, true)?
            };
            let left = if ml == 0 {
                RatFunc::one()
            } else {
                let t: Vec<(BigRat, BigRat)> = (1..=ml)
                    .map(|j| (w[ml][j].clone(), pow(q, (nn - a + 1 + j) as i64)))
                    .collect();
                partial_fractions(&t, false)?
            };
            let shifted = z.zeta.scale_var(&pow(q, (nn - a) as i64))?;
            Ok(&(&right * &shifted) * &left)
        })
        .collect::<Result<_>>()?;

    let mut sum = RatFunc::zero();
    for t in &terms {
        sum = &sum + t;
    }
    let zeta = sum.scale(&level_prefactor(q, n, z.genus));
    check_level(next_level(z, n, zeta))
}

/// The defining sum evaluated term by term: every `(a, k, l)` triple in
/// lexicographic order, one reduced addition per term. Exponential in `n`;
/// kept as an independent route for [`derive_step`].
pub fn derive_step_naive(z: &ZetaLevel, n: u32) -> Result<ZetaLevel> {
    validate_n(n)?;
    let q = &z.q;
    let nn = n as i64;
    let sv = special_values(z, n as usize)?;
    let t = Poly::monomial(rat(1), 1);
    let mut sum = RatFunc::zero();
    for a in 1..=nn {
        let shifted = z.zeta.scale_var(&pow(q, nn - a))?;
        for k in compositions((nn - a) as u32) {
            let right = match k.parts.last() {
                None => RatFunc::one(),
                Some(&kp) => {
                    let c = pow(q, a + kp as i64 - nn);
                    let f = RatFunc::new(t.clone(), &t - &Poly::constant(c))?;
                    f.scale(&sv.weight(&k)?)
                }
            };
            for l in compositions((a - 1) as u32) {
                let left = match l.parts.first() {
                    None => RatFunc::one(),
                    Some(&l1) => {
                        let c = pow(q, nn - a + 1 + l1 as i64);
                        RatFunc::new(Poly::constant(sv.weight(&l)?), Poly::one_minus(c))?
                    }
                };
                sum = &sum + &(&(&right * &shifted) * &left);
            }
        }
    }
    let zeta = sum.scale(&level_prefactor(q, n, z.genus));
    check_level(next_level(z, n, zeta))
}

/// Levels `(n_0)`, `(n_0, n_1)`, ... over `base`. With `normalize`, the base
/// and every derived level are divided by their `alpha(0)`, and the divisor
/// is recorded on the level.
pub fn derive_tower(base: &ZetaLevel, tuple: &[u32], normalize: bool) -> Result<Vec<ZetaLevel>> {
    if tuple.is_empty() {
        return Err(Error::InvalidTuple("tuple must be nonempty".into()));
    }
    tuple.iter().try_for_each(|&n| validate_n(n))?;
    let mut cur = if normalize {
        base.normalized()?
    } else {
        base.clone()
    };
    let mut out = Vec::with_capacity(tuple.len());
    for &n in tuple {
        let mut next = derive_step(&cur, n)?;
        if normalize {
            next = next.normalized()?;
        }
        out.push(next.clone());
        cur = next;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{artin_elliptic, level_is_valid};

    #[test]
    fn composition_enumeration() {
        let parts = |n| compositions(n).map(|c| c.parts).collect::<Vec<_>>();
        assert_eq!(parts(0), vec![Vec::<u32>::new()]);
        assert_eq!(parts(2), vec![vec![2], vec![1, 1]]);
        let three = parts(3);
        assert_eq!(three.len(), 4);
        for c in [vec![3], vec![1, 2], vec![2, 1], vec![1, 1, 1]] {
            assert!(three.contains(&c));
        }
        assert!(compositions(7).all(|c| c.total() == 7 && c.parts.iter().all(|&p| p > 0)));
    }

    #[test]
    fn special_values_example() {
        let z = artin_elliptic(2, 0).unwrap();
        let sv = special_values(&z, 2).unwrap();
        assert_eq!(sv.zeta1, rat(3));
        assert_eq!(sv.values[1], rat(3));
        assert_eq!(sv.vhats[2], rat(9));
    }

    #[test]
    fn step_one_is_identity() {
        let z = artin_elliptic(3, 1).unwrap();
        let d = derive_step(&z, 1).unwrap();
        assert_eq!(d.zeta, z.zeta);
        assert_eq!(d.tuple, vec![1]);
        assert_eq!(derive_step_naive(&z, 1).unwrap().zeta, z.zeta);
    }

    #[test]
    fn step_two_example() {
        let z = artin_elliptic(2, 0).unwrap();
        let d = derive_step(&z, 2).unwrap();
        assert_eq!(d.q, rat(4));
        let expect = RatFunc::new(
            Poly::from_ints(&[3, 3, 12]),
            &Poly::from_ints(&[1, -1]) * &Poly::from_ints(&[1, -4]),
        )
        .unwrap();
        assert_eq!(d.zeta, expect);
    }

    #[test]
    fn fast_matches_naive() {
        for (q, a) in [(2, 0), (2, -2), (3, 3), (4, -4), (5, 1)] {
            let z = artin_elliptic(q, a).unwrap();
            for n in 1..=5 {
                assert_eq!(
                    derive_step(&z, n).unwrap().zeta,
                    derive_step_naive(&z, n).unwrap().zeta,
                    "q={q} a={a} n={n}"
                );
            }
        }
    }

    #[test]
    fn towers_validate() {
        let z = artin_elliptic(2, 0).unwrap();
        let t = derive_tower(&z, &[2, 3], false).unwrap();
        assert_eq!(t[1].q, rat(64));
        assert!(t.iter().all(level_is_valid));
        let ones = derive_tower(&z, &[1, 1, 1], false).unwrap();
        assert!(ones.iter().all(|l| l.zeta == z.zeta));
        assert!(derive_tower(&z, &[], false).is_err());
        assert!(derive_tower(&z, &[2, 0], false).is_err());
    }
}
