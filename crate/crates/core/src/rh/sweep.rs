//! Batch checks over a grid of curves and tuples, with a deterministic
//! JSON report.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use super::{rh_check, rh_numeric, Outcome};
use crate::arith::{to_pq, BigRat};
use crate::curves::{catalog, CurveSpec, ZetaLevel};
use crate::derived::{derive_step, derive_tower, special_values};
use crate::error::{Error, Result};
use crate::invariants::{
    beta_closed_form, counting_miracle_check, extract_invariants, gamma_interlacing_check, gamma_poly,
    InvariantSet,
};
use crate::mult_struct::{
    b_series_exp, b_series_recursion, elliptic_beta_recursion, elliptic_trace, power_sums, ratio_bounds_check,
};

/// Order up to which the two `b_k` routes are compared.
pub const B_ROUTE_ORDER: usize = 12;
pub const DEFAULT_PRODUCT_CAP: u64 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    Positivity,
    Rh,
    Miracle,
    Interlacing,
    RatioBounds,
    BetaRoutes,
}

impl Check {
    pub const ALL: [Check; 6] = [
        Check::Positivity,
        Check::Rh,
        Check::Miracle,
        Check::Interlacing,
        Check::RatioBounds,
        Check::BetaRoutes,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Check::Positivity => "positivity",
            Check::Rh => "rh",
            Check::Miracle => "miracle",
            Check::Interlacing => "interlacing",
            Check::RatioBounds => "ratio_bounds",
            Check::BetaRoutes => "beta_routes",
        }
    }

    /// `all` or a comma-separated list of names.
    pub fn parse_list(s: &str) -> Result<Vec<Check>> {
        if s.trim() == "all" {
            return Ok(Check::ALL.to_vec());
        }
        let mut out: Vec<Check> = s.split(',').map(str::parse).collect::<Result<_>>()?;
        out.sort();
        out.dedup();
        Ok(out)
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s.trim())
            .ok_or_else(|| Error::InvalidTuple(format!("unknown check {s:?}")))
    }
}

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub curves: Vec<CurveSpec>,
    pub tuples: Vec<Vec<u32>>,
    pub checks: Vec<Check>,
    pub precision_bits: u32,
    pub tolerance: BigRat,
    pub product_cap: u64,
}

impl SweepConfig {
    pub fn new(curves: Vec<CurveSpec>, tuples: Vec<Vec<u32>>, checks: Vec<Check>) -> Self {
        SweepConfig {
            curves,
            tuples,
            checks,
            precision_bits: super::DEFAULT_PRECISION_BITS,
            tolerance: super::default_tolerance(super::DEFAULT_PRECISION_BITS),
            product_cap: DEFAULT_PRODUCT_CAP,
        }
    }

    /// Canonical JSON of the configuration; the report hash is taken over it.
    pub fn canonical_json(&self) -> String {
        let curves: Vec<Value> = self
            .curves
            .iter()
            .map(|c| serde_json::from_str(&c.to_json()).expect("curve json"))
            .collect();
        let checks: Vec<&str> = self.checks.iter().map(Check::name).collect();
        json!({
            "curves": curves,
            "tuples": self.tuples,
            "checks": checks,
            "precision_bits": self.precision_bits,
            "tolerance": to_pq(&self.tolerance),
            "product_cap": self.product_cap,
        })
        .to_string()
    }

    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.canonical_json().as_bytes()))
    }
}

/// Elliptic curves given by trace: every `q` in `qs` and every `a` with
/// `a^2 <= 4q`.
pub fn elliptic_grid(qs: &[u64]) -> Vec<CurveSpec> {
    let mut out = Vec::new();
    for &q in qs {
        let bound = (4 * q).isqrt() as i64;
        for a in -bound..=bound {
            out.push(CurveSpec::elliptic(format!("elliptic:q={q},a={a}"), q, a));
        }
    }
    out
}

/// The `q in {2,3,4,5}` elliptic grid.
pub fn builtin_elliptic() -> Vec<CurveSpec> {
    elliptic_grid(&[2, 3, 4, 5])
}

/// The enumerated catalog curves.
pub fn builtin_catalog() -> Result<Vec<CurveSpec>> {
    catalog::CURVES.iter().map(|c| c.spec()).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct Cell {
    pub curve: String,
    pub tuple: Vec<u32>,
    pub checks: BTreeMap<String, Outcome>,
    pub data: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub pass: usize,
    pub fail: usize,
    pub unknown: usize,
}

impl Tally {
    fn add(&mut self, o: Outcome) {
        match o {
            Outcome::Pass => self.pass += 1,
            Outcome::Fail => self.fail += 1,
            Outcome::Unknown => self.unknown += 1,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub cells: usize,
    pub errors: usize,
    pub failed_cells: usize,
    pub pass: usize,
    pub fail: usize,
    pub unknown: usize,
    pub by_check: BTreeMap<String, Tally>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub config_hash: String,
    pub cells: Vec<Cell>,
    pub summary: Summary,
}

impl SweepReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn any_failed(&self) -> bool {
        self.summary.failed_cells > 0
    }
}

/// Runs every requested check on every `(curve, tuple)` cell. Cells are
/// computed in parallel on the current rayon pool and reported in grid order.
pub fn sweep(cfg: &SweepConfig) -> SweepReport {
    let jobs: Vec<(&CurveSpec, &Vec<u32>)> = cfg
        .curves
        .iter()
        .flat_map(|c| cfg.tuples.iter().map(move |t| (c, t)))
        .collect();
    let cells: Vec<Cell> = jobs.par_iter().map(|(c, t)| run_cell(cfg, c, t)).collect();
    let mut summary = Summary {
        cells: cells.len(),
        ..Summary::default()
    };
    for cell in &cells {
        if cell.error.is_some() {
            summary.errors += 1;
        }
        if cell.checks.values().any(|&o| o == Outcome::Fail) {
            summary.failed_cells += 1;
        }
        for (name, &o) in &cell.checks {
            summary.by_check.entry(name.clone()).or_default().add(o);
            match o {
                Outcome::Pass => summary.pass += 1,
                Outcome::Fail => summary.fail += 1,
                Outcome::Unknown => summary.unknown += 1,
            }
        }
    }
    SweepReport {
        config_hash: cfg.hash(),
        cells,
        summary,
    }
}

fn run_cell(cfg: &SweepConfig, curve: &CurveSpec, tuple: &[u32]) -> Cell {
    let mut cell = Cell {
        curve: curve.label.clone(),
        tuple: tuple.to_vec(),
        checks: BTreeMap::new(),
        data: BTreeMap::new(),
        error: None,
    };
    if let Err(e) = fill_cell(cfg, curve, tuple, &mut cell) {
        cell.error = Some(e.to_string());
        for c in &cfg.checks {
            if applies(*c, curve.genus) {
                cell.checks.entry(c.name().to_string()).or_insert(Outcome::Fail);
            }
        }
    }
    cell
}

fn applies(check: Check, genus: u32) -> bool {
    check != Check::RatioBounds || genus == 1
}

/// `n` of the last step and its prefix level.
struct Step<'a> {
    prefix: ZetaLevel,
    last: &'a ZetaLevel,
    inv: InvariantSet,
    n: u32,
}

fn pq(x: &BigRat) -> Value {
    Value::String(to_pq(x))
}

fn fill_cell(cfg: &SweepConfig, curve: &CurveSpec, tuple: &[u32], cell: &mut Cell) -> Result<()> {
    let product = tuple.iter().try_fold(1u64, |acc, &n| acc.checked_mul(n as u64));
    if tuple.is_empty() || tuple.contains(&0) {
        return Err(Error::InvalidTuple(format!("{tuple:?}: entries must be positive")));
    }
    match product {
        Some(p) if p <= cfg.product_cap => {}
        _ => {
            return Err(Error::InvalidTuple(format!(
                "{tuple:?}: product exceeds the cap {}",
                cfg.product_cap
            )))
        }
    }
    let base = curve.artin()?;
    let tower = derive_tower(&base, tuple, true)?;
    let last = tower.last().expect("nonempty tuple");
    let prefix = match tower.len() {
        1 => base.normalized()?,
        k => tower[k - 2].clone(),
    };
    let inv = extract_invariants(last)?;
    cell.data.insert("Q".into(), pq(&inv.q));
    cell.data.insert("genus".into(), json!(inv.genus));
    cell.data.insert("alphas".into(), inv.alphas.iter().map(pq).collect());
    cell.data.insert("beta".into(), pq(&inv.beta));
    cell.data.insert("numerator".into(), inv.p.coeffs().iter().map(pq).collect());
    let step = Step {
        prefix,
        last,
        n: *tuple.last().expect("nonempty"),
        inv,
    };
    for &check in &cfg.checks {
        if !applies(check, curve.genus) {
            continue;
        }
        let outcome = match run_check(cfg, check, &step, cell) {
            Ok(o) => o,
            Err(e) => {
                cell.data
                    .insert(format!("{}_error", check.name()), Value::String(e.to_string()));
                Outcome::Fail
            }
        };
        cell.checks.insert(check.name().to_string(), outcome);
    }
    Ok(())
}

fn run_check(cfg: &SweepConfig, check: Check, s: &Step, cell: &mut Cell) -> Result<Outcome> {
    let g = s.last.genus;
    match check {
        Check::Positivity => Ok(Outcome::from_bool(s.inv.all_positive())),
        Check::Rh => {
            let v = rh_check(&s.inv, cfg.precision_bits, &cfg.tolerance)?;
            let mut outcome = v.holds;
            cell.data.insert("rh".into(), serde_json::to_value(&v).expect("verdict"));
            if g == 1 {
                // the exact verdict is authoritative; the numeric one must agree
                let n = rh_numeric(&s.inv, cfg.precision_bits, &cfg.tolerance)?;
                if n.holds != v.holds && !v.boundary.unwrap_or(false) {
                    outcome = Outcome::Fail;
                    cell.data
                        .insert("rh_disagreement".into(), Value::String("exact and numeric differ".into()));
                }
                cell.data
                    .insert("rh_numeric".into(), serde_json::to_value(&n).expect("verdict"));
            }
            Ok(outcome)
        }
        Check::Miracle => {
            let m = counting_miracle_check(&s.prefix, s.n)?;
            cell.data.insert("miracle".into(), serde_json::to_value(&m).expect("miracle"));
            Ok(Outcome::from_bool(m.holds))
        }
        Check::Interlacing => {
            let sv = special_values(&s.prefix, s.n as usize)?;
            let gp = gamma_poly(&sv, s.n)?;
            let ic = gamma_interlacing_check(&gp);
            cell.data.insert("gamma".into(), gp.gamma.coeffs().iter().map(pq).collect());
            cell.data
                .insert("interlacing".into(), serde_json::to_value(&ic).expect("interlacing"));
            Ok(Outcome::from_bool(ic.holds))
        }
        Check::RatioBounds => {
            let pinv = extract_invariants(&s.prefix)?;
            let a = elliptic_trace(&pinv)?;
            let n_max = (s.n as usize).max(2);
            let betas = elliptic_beta_recursion(&a, &s.prefix.q, n_max);
            let rows = ratio_bounds_check(&betas, &s.prefix.q, 2..=n_max);
            cell.data
                .insert("ratio_bounds".into(), serde_json::to_value(&rows).expect("rows"));
            Ok(Outcome::from_bool(rows.iter().all(|r| r.holds())))
        }
        Check::BetaRoutes => {
            let sv = special_values(&s.prefix, s.n as usize)?;
            let closed = beta_closed_form(&sv, s.n, g)?;
            // the residue of the step before normalization
            let residue = extract_invariants(&derive_step(&s.prefix, s.n)?)?.beta;
            let exp = b_series_exp(&power_sums(&s.inv, B_ROUTE_ORDER)?, B_ROUTE_ORDER)?;
            let rec = b_series_recursion(&s.inv, B_ROUTE_ORDER)?;
            let beta_ok = closed == residue;
            let b_ok = exp.b == rec.b;
            cell.data.insert(
                "beta_routes".into(),
                json!({
                    "residue": to_pq(&residue),
                    "composition": to_pq(&closed),
                    "b_order": B_ROUTE_ORDER,
                    "b_routes_agree": b_ok,
                }),
            );
            Ok(Outcome::from_bool(beta_ok && b_ok))
        }
    }
}

/// `max_deviation` of a cell's numeric verdict, for summaries.
pub fn cell_max_deviation(cell: &Cell) -> Option<String> {
    let key = if cell.data.contains_key("rh_numeric") { "rh_numeric" } else { "rh" };
    cell.data
        .get(key)?
        .get("max_deviation")?
        .as_str()
        .map(str::to_string)
}
