//! Level-(−1) input: the complete Artin zeta function of a curve, built from
//! a trace, point counts or numerator coefficients.

pub mod ffield;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{pow, rat, to_pq, BigRat, FormalSeries, Poly, RatFunc};
use crate::error::{Error, Result};
pub use ffield::{count_points_bruteforce, prime_power, HyperellipticModel};

/// How a curve's zeta function is specified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CurveSource {
    /// Elliptic trace `a`, numerator `1 - aT + qT^2`.
    Trace(i64),
    /// `N_1, N_2, ...`; at least `g` values.
    PointCounts(Vec<i64>),
    /// `A_0..A_{2g}` of `P(T)`.
    Numerator(Vec<BigRat>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveSpec {
    pub label: String,
    pub q: u64,
    pub genus: u32,
    pub source: CurveSource,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CurveJson {
    label: String,
    q: u64,
    genus: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    trace: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    point_counts: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    numerator: Option<Vec<String>>,
}

impl CurveSpec {
    pub fn elliptic(label: impl Into<String>, q: u64, a: i64) -> Self {
        CurveSpec {
            label: label.into(),
            q,
            genus: 1,
            source: CurveSource::Trace(a),
        }
    }

    pub fn from_counts(label: impl Into<String>, q: u64, genus: u32, counts: Vec<i64>) -> Self {
        CurveSpec {
            label: label.into(),
            q,
            genus,
            source: CurveSource::PointCounts(counts),
        }
    }

    pub fn from_numerator(label: impl Into<String>, q: u64, genus: u32, a: Vec<BigRat>) -> Self {
        CurveSpec {
            label: label.into(),
            q,
            genus,
            source: CurveSource::Numerator(a),
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let j: CurveJson =
            serde_json::from_str(s).map_err(|e| Error::InvalidCurve(e.to_string()))?;
        let source = match (j.trace, j.point_counts, j.numerator) {
            (Some(a), None, None) => CurveSource::Trace(a),
            (None, Some(c), None) => CurveSource::PointCounts(c),
            (None, None, Some(n)) => CurveSource::Numerator(
                n.iter()
                    .map(|s| crate::arith::parse_rat(s))
                    .collect::<Result<_>>()?,
            ),
            _ => {
                return Err(Error::InvalidCurve(
                    "exactly one of trace, point_counts, numerator is required".into(),
                ))
            }
        };
        Ok(CurveSpec {
            label: j.label,
            q: j.q,
            genus: j.genus,
            source,
        })
    }

    pub fn to_json(&self) -> String {
        let mut j = CurveJson {
            label: self.label.clone(),
            q: self.q,
            genus: self.genus,
            trace: None,
            point_counts: None,
            numerator: None,
        };
        match &self.source {
            CurveSource::Trace(a) => j.trace = Some(*a),
            CurveSource::PointCounts(c) => j.point_counts = Some(c.clone()),
            CurveSource::Numerator(n) => j.numerator = Some(n.iter().map(to_pq).collect()),
        }
        serde_json::to_string(&j).expect("curve serializes")
    }

    /// The Artin base level.
    pub fn artin(&self) -> Result<ZetaLevel> {
        if self.genus == 0 {
            return Err(Error::GenusZero);
        }
        if prime_power(self.q).is_none() {
            return Err(Error::InvalidCurve(format!("q = {} is not a prime power", self.q)));
        }
        match &self.source {
            CurveSource::Trace(a) => {
                if self.genus != 1 {
                    return Err(Error::GenusMismatch {
                        expected: 1,
                        actual: self.genus,
                    });
                }
                artin_elliptic(self.q, *a)
            }
            CurveSource::PointCounts(c) => artin_from_point_counts(self.q, self.genus, c),
            CurveSource::Numerator(a) => artin_from_numerator(self.q, self.genus, a),
        }
    }
}

/// One rung of the derived tower.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZetaLevel {
    /// `(n_0, .., n_m)`; empty for the Artin base.
    pub tuple: Vec<u32>,
    /// `q^{prod n_k}`.
    pub q: BigRat,
    pub genus: u32,
    /// Complete zeta in this level's variable `T`.
    pub zeta: RatFunc,
    /// `Some(c)` when `zeta` has been divided by its `alpha(0) = c`.
    pub normalization: Option<BigRat>,
}

impl ZetaLevel {
    pub fn is_normalized(&self) -> bool {
        self.normalization.is_some()
    }

    /// `(1 - T)(1 - QT) T^{g-1}`
    pub fn pole_polynomial(&self) -> Poly {
        pole_polynomial(&self.q, self.genus)
    }

    /// `P(T) = zeta * (1-T)(1-QT)T^{g-1}`, if it is a polynomial.
    pub fn numerator(&self) -> Result<Poly> {
        self.zeta
            .mul_poly(&self.pole_polynomial())?
            .as_poly()
            .ok_or_else(|| Error::InvariantShape("zeta has poles outside {1, 1/Q, 0}".into()))
    }

    /// Divides by the constant term of `P`, recording it.
    pub fn normalized(&self) -> Result<ZetaLevel> {
        let p = self.numerator()?;
        let c = p.constant_term();
        if c.is_zero() {
            return Err(Error::InvariantShape("P(0) = 0".into()));
        }
        let prior = self.normalization.clone().unwrap_or_else(BigRat::one);
        Ok(ZetaLevel {
            tuple: self.tuple.clone(),
            q: self.q.clone(),
            genus: self.genus,
            zeta: self.zeta.scale(&c.recip()),
            normalization: Some(prior * c),
        })
    }
}

pub fn pole_polynomial(q: &BigRat, g: u32) -> Poly {
    let one_minus_t = Poly::one_minus(rat(1));
    let one_minus_qt = Poly::one_minus(q.clone());
    (&one_minus_t * &one_minus_qt).shift(g as usize - 1)
}

fn base_level(q: u64, g: u32, p: Poly) -> Result<ZetaLevel> {
    let qq = rat(q as i64);
    let zeta = RatFunc::new(p, pole_polynomial(&qq, g))?;
    Ok(ZetaLevel {
        tuple: Vec::new(),
        q: qq,
        genus: g,
        zeta,
        normalization: None,
    })
}

/// `Z = (1 - aT + qT^2) / ((1-T)(1-qT))`.
pub fn artin_elliptic(q: u64, a: i64) -> Result<ZetaLevel> {
    if prime_power(q).is_none() {
        return Err(Error::InvalidCurve(format!("q = {q} is not a prime power")));
    }
    let a2 = (a as i128) * (a as i128);
    let four_q = 4 * q as i128;
    if a2 > four_q {
        return Err(Error::Hasse {
            a_squared: a2.to_string(),
            four_q: four_q.to_string(),
        });
    }
    base_level(q, 1, Poly::from_ints(&[1, -a, q as i64]))
}

/// `P` from `exp(sum N_k T^k / k) (1-T)(1-qT)`, completed by reflection.
///
/// Counts beyond `N_g` are cross-checked against the completed `P`.
pub fn artin_from_point_counts(q: u64, g: u32, counts: &[i64]) -> Result<ZetaLevel> {
    if g == 0 {
        return Err(Error::GenusZero);
    }
    let g_us = g as usize;
    if counts.len() < g_us {
        return Err(Error::InconsistentCounts(format!(
            "need {g} point counts, got {}",
            counts.len()
        )));
    }
    let order = counts.len();
    let mut log = vec![BigRat::zero(); order + 1];
    for (k, n) in counts.iter().enumerate() {
        log[k + 1] = BigRat::new((*n).into(), ((k + 1) as i64).into());
    }
    let z = FormalSeries::new(log, order).exp()?;
    let qq = rat(q as i64);
    let denom = FormalSeries::new((&Poly::one_minus(rat(1)) * &Poly::one_minus(qq.clone())).into_coeffs(), order);
    let direct = &z * &denom;

    let mut a = vec![BigRat::zero(); 2 * g_us + 1];
    a[..=g_us].clone_from_slice(&direct.coeffs()[..=g_us]);
    for i in 0..g_us {
        a[2 * g_us - i] = pow(&qq, (g_us - i) as i64) * &a[i];
    }
    for k in g_us + 1..=order {
        let expect = a.get(k).cloned().unwrap_or_else(BigRat::zero);
        if direct.coeff(k) != &expect {
            return Err(Error::InconsistentCounts(format!(
                "coefficient {k} of P is {} from the counts but {} by reflection",
                to_pq(direct.coeff(k)),
                to_pq(&expect)
            )));
        }
    }
    base_level(q, g, Poly::new(a))
}

/// `P` given directly; rescaled so that `A_0 = 1`.
pub fn artin_from_numerator(q: u64, g: u32, coeffs: &[BigRat]) -> Result<ZetaLevel> {
    if g == 0 {
        return Err(Error::GenusZero);
    }
    let p = Poly::new(coeffs.to_vec());
    if p.degree() != Some(2 * g as usize) {
        return Err(Error::DegreeMismatch(format!(
            "numerator has degree {:?}, expected {}",
            p.degree(),
            2 * g
        )));
    }
    if p.constant_term().is_zero() {
        return Err(Error::InvalidCurve("A_0 = 0".into()));
    }
    let p = p.scale(&p.constant_term().recip());
    let qq = rat(q as i64);
    if !reflection_holds(&p, &qq, g) {
        return Err(Error::InvalidCurve(
            "numerator violates A_{2g-i} = q^{g-i} A_i".into(),
        ));
    }
    base_level(q, g, p)
}

/// `A_{2g-i} = Q^{g-i} A_i` for all `i`.
pub fn reflection_holds(p: &Poly, q: &BigRat, g: u32) -> bool {
    let g = g as i64;
    (0..=2 * g).all(|i| p.coeff((2 * g - i) as usize) == pow(q, g - i) * p.coeff(i as usize))
}

/// Named outcome of one structural check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(name: &'static str, passed: bool, detail: impl Into<String>) -> Self {
        CheckResult {
            name,
            passed,
            detail: detail.into(),
        }
    }
}

/// Reports the zeta facts of a level without failing.
///
/// Residues are compared for `Z(T)/T`, the form in which the functional
/// equation `T -> 1/(QT)` exchanges the two poles with a sign.
pub fn validate_zeta_level(z: &ZetaLevel) -> Vec<CheckResult> {
    let mut out = Vec::with_capacity(4);
    let pole = z.pole_polynomial();

    let den_ok = matches!(pole.exact_div(z.zeta.den()), Ok(Some(_)));
    out.push(CheckResult::new(
        "denominator_divides",
        den_ok,
        format!("den = {}", z.zeta.den()),
    ));

    let fe = z.zeta.invert_var(&z.q).map(|w| w == z.zeta);
    out.push(CheckResult::new(
        "functional_equation",
        fe == Ok(true),
        match fe {
            Ok(true) => "Z(1/(QT)) = Z(T)".to_string(),
            Ok(false) => "Z(1/(QT)) != Z(T)".to_string(),
            Err(e) => e.to_string(),
        },
    ));

    let over_t = z.zeta.div_poly(&Poly::monomial(rat(1), 1));
    let residues = over_t.and_then(|f| {
        let r1 = f.residue_simple_pole(&rat(1))?;
        let rq = f.residue_simple_pole(&z.q.recip())?;
        Ok((r1, rq))
    });
    out.push(match residues {
        Ok((r1, rq)) => CheckResult::new(
            "residues_opposite",
            (&r1 + &rq).is_zero() && !r1.is_zero(),
            format!("Res_1 = {}, Res_1/Q = {}", to_pq(&r1), to_pq(&rq)),
        ),
        Err(e) => CheckResult::new("residues_opposite", false, e.to_string()),
    });

    let deg = z.numerator().map(|p| p.degree());
    out.push(CheckResult::new(
        "numerator_degree",
        deg == Ok(Some(2 * z.genus as usize)),
        format!("deg P = {:?}, 2g = {}", deg.ok().flatten(), 2 * z.genus),
    ));
    out
}

pub fn level_is_valid(z: &ZetaLevel) -> bool {
    validate_zeta_level(z).iter().all(|c| c.passed)
}

/// Catalog of plane models with brute-force point counts.
pub mod catalog {
    use super::*;

    pub struct CatalogCurve {
        pub label: &'static str,
        pub q: u64,
        pub model: fn() -> HyperellipticModel,
    }

    fn e_f2() -> HyperellipticModel {
        HyperellipticModel::new(2, vec![1], vec![0, 0, 0, 1]).unwrap()
    }
    fn e_f3() -> HyperellipticModel {
        HyperellipticModel::new(3, vec![], vec![1, 2, 0, 1]).unwrap()
    }
    fn e_f5() -> HyperellipticModel {
        HyperellipticModel::new(5, vec![], vec![1, 1, 0, 1]).unwrap()
    }
    fn g2_f2() -> HyperellipticModel {
        HyperellipticModel::new(2, vec![1], vec![0, 0, 0, 0, 0, 1]).unwrap()
    }

    pub const CURVES: &[CatalogCurve] = &[
        CatalogCurve { label: "y2+y=x3/F2", q: 2, model: e_f2 },
        CatalogCurve { label: "y2+y=x3/F4", q: 4, model: e_f2 },
        CatalogCurve { label: "y2=x3+2x+1/F3", q: 3, model: e_f3 },
        CatalogCurve { label: "y2=x3+x+1/F5", q: 5, model: e_f5 },
        CatalogCurve { label: "y2+y=x5/F2", q: 2, model: g2_f2 },
    ];

    pub fn find(label: &str) -> Option<&'static CatalogCurve> {
        CURVES.iter().find(|c| c.label == label)
    }

    impl CatalogCurve {
        /// Spec with counts `N_1..N_g` from enumeration.
        pub fn spec(&self) -> Result<CurveSpec> {
            let model = (self.model)();
            let g = model.genus();
            let counts = (1..=g)
                .map(|k| count_points_bruteforce(&model, self.q, k).map(|n| n as i64))
                .collect::<Result<Vec<_>>>()?;
            Ok(CurveSpec::from_counts(self.label, self.q, g, counts))
        }
    }

    /// The synthetic genus-2 curve `y^2 + y = x^5` over `F_2`.
    pub fn genus2_synthetic() -> CurveSpec {
        find("y2+y=x5/F2").unwrap().spec().unwrap()
    }
}
