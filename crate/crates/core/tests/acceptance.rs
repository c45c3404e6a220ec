//! Acceptance criteria 1-12, one line each. Criteria that cannot hold as
//! stated are still computed and printed; they are reported but not
//! asserted, and the process exits nonzero only if an asserted one fails.

use std::sync::OnceLock;
use std::time::Instant;

use num_traits::{One, Signed};
use rayon::prelude::*;

use dzeta_core::arith::{pow, rat, ratio, BigRat, Poly, RatFunc};
use dzeta_core::curves::{artin_elliptic, catalog, pole_polynomial, validate_zeta_level, CurveSpec, ZetaLevel};
use dzeta_core::derived::{derive_step, derive_tower, special_values};
use dzeta_core::invariants::{
    beta_closed_form, counting_miracle_check, extract_invariants, gamma_interlacing_check, gamma_poly,
};
use dzeta_core::mult_struct::{
    b_series_exp, b_series_recursion, elliptic_beta_equals_b_check, elliptic_beta_recursion, elliptic_trace,
    n1_ratio_prediction, power_sums, ratio_bounds_check,
};
use dzeta_core::rh::sweep::elliptic_grid;
use dzeta_core::rh::{rh_exact_genus1, rh_numeric, rh_numeric_poly, Outcome};
use dzeta_core::Error;

const TUPLES: [&[u32]; 8] = [&[1], &[2], &[3], &[4], &[2, 2], &[2, 3], &[3, 2], &[2, 2, 2]];
const BITS: u32 = 256;

fn thirty_digits() -> BigRat {
    pow(&rat(10), -30)
}

/// One derived level with the level it was derived from.
struct Cell {
    curve: String,
    prefix: ZetaLevel,
    level: ZetaLevel,
}

fn elliptic_curves() -> Vec<CurveSpec> {
    elliptic_grid(&[2, 3, 4, 5])
}

/// Every level of every tuple on the elliptic grid, unnormalized.
fn grid() -> &'static Vec<Cell> {
    static GRID: OnceLock<Vec<Cell>> = OnceLock::new();
    GRID.get_or_init(|| {
        let jobs: Vec<(CurveSpec, &[u32])> = elliptic_curves()
            .into_iter()
            .flat_map(|c| TUPLES.iter().map(move |t| (c.clone(), *t)))
            .collect();
        jobs.par_iter()
            .map(|(c, t)| {
                let base = c.artin().unwrap();
                let tower = derive_tower(&base, t, false).unwrap();
                let prefix = if tower.len() == 1 {
                    base
                } else {
                    tower[tower.len() - 2].clone()
                };
                Cell {
                    curve: c.label.clone(),
                    prefix,
                    level: tower.last().unwrap().clone(),
                }
            })
            .collect()
    })
}

struct Outcomes {
    asserted_failures: Vec<u32>,
}

impl Outcomes {
    fn report(&mut self, id: u32, name: &str, pass: bool, detail: String) {
        println!("criterion {id:>2} {:<4} {name}: {detail}", if pass { "PASS" } else { "FAIL" });
        if !pass {
            self.asserted_failures.push(id);
        }
    }

    /// A sub-case that is computed faithfully but cannot hold.
    fn report_unasserted(&self, id: u32, name: &str, pass: bool, detail: String) {
        println!(
            "criterion {id:>2} {:<4} {name} (not asserted): {detail}",
            if pass { "PASS" } else { "FAIL" }
        );
    }
}

/// Point-evaluation oracle for `Z(1/(QT)) = Z(T)`.
fn fe_at_points(z: &RatFunc, q: &BigRat) -> bool {
    [ratio(2, 7), rat(-3), ratio(5, 11), ratio(-13, 4)].iter().all(|t| {
        let inv = (q * t).recip();
        match (z.eval(t), z.eval(&inv)) {
            (Ok(a), Ok(b)) => a == b,
            _ => false,
        }
    })
}

fn c1(o: &mut Outcomes) {
    let bad: Vec<String> = grid()
        .par_iter()
        .filter(|c| {
            let l = &c.level;
            let canonical = l.zeta.invert_var(&l.q).map(|z| z == l.zeta).unwrap_or(false);
            !(canonical && fe_at_points(&l.zeta, &l.q))
        })
        .map(|c| format!("{} {:?}", c.curve, c.level.tuple))
        .collect();
    o.report(
        1,
        "functional equation",
        bad.is_empty(),
        format!("{} levels, exact and pointwise, failures {:?}", grid().len(), bad),
    );
}

fn c2(o: &mut Outcomes) {
    let bad: Vec<String> = grid()
        .par_iter()
        .filter(|c| {
            let l = &c.level;
            let divides = pole_polynomial(&l.q, l.genus)
                .div_rem(l.zeta.den())
                .map(|(_, r)| r.is_zero())
                .unwrap_or(false);
            let degree = l.numerator().ok().and_then(|p| p.degree()) == Some(2 * l.genus as usize);
            let validated = validate_zeta_level(l).iter().all(|r| r.passed);
            !(divides && degree && validated)
        })
        .map(|c| format!("{} {:?}", c.curve, c.level.tuple))
        .collect();
    o.report(
        2,
        "pole cancellation",
        bad.is_empty(),
        format!("{} levels, failures {:?}", grid().len(), bad),
    );
}

fn c3(o: &mut Outcomes) {
    let bad: Vec<String> = grid()
        .par_iter()
        .filter(|c| {
            let n = *c.level.tuple.last().unwrap();
            let residue = extract_invariants(&c.level).unwrap().beta;
            // direct residue at T = 1 of the level, independent of extraction
            let direct = {
                let z = &c.level.zeta;
                let lin = Poly::from_ints(&[1, -1]);
                let p = z.mul_poly(&lin).unwrap();
                p.eval(&rat(1)).unwrap() * rat(-1)
            };
            let sv = special_values(&c.prefix, n as usize).unwrap();
            let closed = beta_closed_form(&sv, n, c.level.genus).unwrap();
            !(residue == closed && direct == closed)
        })
        .map(|c| format!("{} {:?}", c.curve, c.level.tuple))
        .collect();
    o.report(
        3,
        "beta residue = composition sum",
        bad.is_empty(),
        format!("{} levels, failures {:?}", grid().len(), bad),
    );
}

fn c4(o: &mut Outcomes) {
    let mut bases: Vec<(String, ZetaLevel)> = elliptic_grid(&[2, 3])
        .into_iter()
        .map(|c| (c.label.clone(), c.artin().unwrap()))
        .collect();
    let g2 = catalog::genus2_synthetic();
    bases.push((g2.label.clone(), g2.artin().unwrap()));
    let mut checked = 0;
    let mut bad = Vec::new();
    for (label, base) in &bases {
        for n in 1..=3 {
            let m = counting_miracle_check(base, n).unwrap();
            checked += 1;
            if !m.holds {
                bad.push(format!("{label} n={n}"));
            }
        }
    }
    o.report(
        4,
        "counting identity",
        bad.is_empty(),
        format!("{checked} cases incl. genus 2 {}, failures {:?}", g2.label, bad),
    );
}

fn c5(o: &mut Outcomes) {
    let bad: Vec<String> = grid()
        .par_iter()
        .filter(|c| {
            let inv = extract_invariants(&c.level).unwrap();
            let e = b_series_exp(&power_sums(&inv, 12).unwrap(), 12).unwrap();
            let r = b_series_recursion(&inv, 12).unwrap();
            e.b != r.b || e.b.len() != 13
        })
        .map(|c| format!("{} {:?}", c.curve, c.level.tuple))
        .collect();
    // the displayed (Q - 1) middle coefficient, for comparison
    let typo_agrees = grid()
        .par_iter()
        .filter(|c| {
            let inv = extract_invariants(&c.level).unwrap();
            let e = b_series_exp(&power_sums(&inv, 12).unwrap(), 12).unwrap();
            e.b == b_recursion_with_middle(&inv.a(), &inv.q, &(&inv.q - rat(1)), 12)
        })
        .count();
    o.report(
        5,
        "b_k exp = recursion to order 12",
        bad.is_empty() && typo_agrees == 0,
        format!(
            "{} levels, failures {:?}; with a (Q-1) middle coefficient {} levels agree",
            grid().len(),
            bad,
            typo_agrees
        ),
    );
}

/// `(Q^k - 1) b_k = mid Q^{k-1} b_{k-1} - Q^{k-1} b_{k-2} + sum A_l b_{k-l}`
/// on `P / P(0)`.
fn b_recursion_with_middle(a: &[BigRat], q: &BigRat, mid: &BigRat, k_max: usize) -> Vec<BigRat> {
    let a: Vec<BigRat> = a.iter().map(|x| x / &a[0]).collect();
    let mut b = vec![BigRat::one()];
    for k in 1..=k_max {
        let qk1 = pow(q, k as i64 - 1);
        let mut rhs = mid * &qk1 * &b[k - 1];
        if k >= 2 {
            rhs -= &qk1 * &b[k - 2];
        }
        for l in 1..=k.min(a.len() - 1) {
            rhs += &a[l] * &b[k - l];
        }
        b.push(rhs / (pow(q, k as i64) - BigRat::one()));
    }
    b
}

fn c6(o: &mut Outcomes) {
    let mut rows = 0;
    let mut bad = Vec::new();
    for c in elliptic_curves() {
        let base = c.artin().unwrap().normalized().unwrap();
        for r in elliptic_beta_equals_b_check(&base, 6).unwrap() {
            rows += 1;
            if !r.agree {
                bad.push(format!("{} n={}", c.label, r.n));
            }
        }
    }
    o.report(
        6,
        "elliptic beta: extraction = recursion = b_n",
        bad.is_empty(),
        format!("{rows} rows (n <= 6), failures {bad:?}"),
    );
}

fn c7(o: &mut Outcomes) {
    let mut rows = 0;
    let mut bad = Vec::new();
    let mut n1 = Vec::new();
    for c in elliptic_curves() {
        let base = c.artin().unwrap().normalized().unwrap();
        let a = elliptic_trace(&extract_invariants(&base).unwrap()).unwrap();
        let betas = elliptic_beta_recursion(&a, &base.q, 8);
        for r in ratio_bounds_check(&betas, &base.q, 2..=8) {
            rows += 1;
            if !r.holds() {
                bad.push(format!("{} n={}", c.label, r.n));
            }
        }
        let r1 = &ratio_bounds_check(&betas, &base.q, [1])[0];
        assert_eq!(n1_ratio_prediction(&a, &base.q), (r1.lower_holds, r1.upper_holds));
        if !r1.holds() {
            n1.push(format!("{}{}", c.label, if r1.lower_holds { "(upper)" } else { "(lower)" }));
        }
    }
    o.report(
        7,
        "ratio bounds n = 2..8",
        bad.is_empty(),
        format!("{rows} rows, failures {bad:?}"),
    );
    o.report_unasserted(
        7,
        "ratio bounds n = 1",
        n1.is_empty(),
        format!("{} curves violate, exactly those with a >= 2 or a <= -2 sqrt(q): {:?}", n1.len(), n1),
    );
}

fn c8(o: &mut Outcomes) {
    let mut total = 0;
    let mut alternating = 0;
    let mut constant_ok = 0;
    let mut example = String::new();
    for c in elliptic_curves() {
        let base = c.artin().unwrap();
        let sv = special_values(&base, 5).unwrap();
        for n in 1..=5 {
            let gp = gamma_poly(&sv, n).unwrap();
            let ic = gamma_interlacing_check(&gp);
            total += 1;
            alternating += ic.holds as usize;
            constant_ok += gp.constant_term_holds() as usize;
            if c.label == "elliptic:q=2,a=0" && n == 4 {
                example = format!("q=2,a=0,n=4 signs {:?}", ic.signs);
            }
        }
    }
    // only n = 1 can match (-1)^{kappa+1}
    o.report_unasserted(
        8,
        "Gamma sign alternation at Q^-kappa",
        alternating == total,
        format!("{alternating}/{total} alternate; Gamma(0) identity {constant_ok}/{total}; {example}"),
    );
}

fn c9(o: &mut Outcomes) {
    let results: Vec<(String, bool, bool, BigRat)> = grid()
        .par_iter()
        .map(|c| {
            let inv = extract_invariants(&c.level).unwrap();
            let e = rh_exact_genus1(&inv).unwrap();
            let n = rh_numeric(&inv, BITS, &thirty_digits()).unwrap();
            (
                format!("{} {:?}", c.curve, c.level.tuple),
                e.holds == Outcome::Pass,
                n.holds == e.holds,
                n.max_deviation_value.unwrap_or_else(BigRat::one),
            )
        })
        .collect();
    let exact_fail: Vec<&String> = results.iter().filter(|r| !r.1).map(|r| &r.0).collect();
    let disagree: Vec<&String> = results.iter().filter(|r| !r.2).map(|r| &r.0).collect();
    let worst = results.iter().map(|r| r.3.clone()).max().unwrap();
    let ok = exact_fail.is_empty() && disagree.is_empty() && worst < thirty_digits();
    o.report(
        9,
        "RH genus 1, exact and 256-bit numeric",
        ok,
        format!(
            "{} levels, exact failures {exact_fail:?}, disagreements {disagree:?}, max deviation {}",
            results.len(),
            dzeta_core::rh::to_sci(&worst, 3)
        ),
    );
}

fn c10(o: &mut Outcomes) {
    let g2 = catalog::genus2_synthetic();
    let base = g2.artin().unwrap();
    let mut parts = Vec::new();
    let mut ok = true;
    for t in [&[2u32][..], &[2, 2]] {
        let l = derive_tower(&base, t, true).unwrap().pop().unwrap();
        let inv = extract_invariants(&l).unwrap();
        let v = rh_numeric(&inv, BITS, &thirty_digits()).unwrap();
        let dev = v.max_deviation_value.clone().unwrap_or_else(BigRat::one);
        ok &= v.holds == Outcome::Pass && dev < thirty_digits() && v.self_inversive == Some(true);
        parts.push(format!("{t:?} max deviation {}", v.max_deviation.unwrap_or_default()));
    }
    o.report(10, "RH genus 2 synthetic curve", ok, parts.join(", "));
}

fn c11(o: &mut Outcomes) {
    let mut levels: Vec<(String, Vec<u32>, bool)> = grid()
        .par_iter()
        .map(|c| {
            let inv = extract_invariants(&c.level).unwrap();
            (c.curve.clone(), c.level.tuple.clone(), inv.all_positive())
        })
        .collect();
    for spec in catalog::CURVES.iter().map(|c| c.spec().unwrap()) {
        let base = spec.artin().unwrap();
        for t in [&[2u32][..], &[3], &[2, 2]] {
            let l = derive_tower(&base, t, false).unwrap().pop().unwrap();
            let inv = extract_invariants(&l).unwrap();
            levels.push((spec.label.clone(), t.to_vec(), inv.all_positive()));
        }
    }
    let bad: Vec<String> = levels
        .iter()
        .filter(|l| !l.2)
        .map(|l| format!("{} {:?}", l.0, l.1))
        .collect();
    let report: Vec<serde_json::Value> = levels
        .iter()
        .map(|l| serde_json::json!({"curve": l.0, "tuple": l.1, "positive": l.2}))
        .collect();
    let path = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("positivity_report.json");
    std::fs::write(&path, serde_json::to_string_pretty(&report).unwrap()).unwrap();
    o.report(
        11,
        "positivity of alpha and beta",
        bad.is_empty(),
        format!("{} levels, failures {bad:?}, report {}", levels.len(), path.display()),
    );
}

fn c12(o: &mut Outcomes) {
    // planted root of modulus 3 beside an on-circle factor
    let p = &(&Poly::new(vec![rat(1), ratio(-1, 3)]) * &Poly::from_ints(&[1, -3])) * &Poly::from_ints(&[1, 0, 2]);
    let v = rh_numeric_poly(&p, &rat(2), BITS, &thirty_digits()).unwrap();
    let planted = v.holds == Outcome::Fail;

    let z = artin_elliptic(3, 1).unwrap();
    let tampered_p = Poly::from_ints(&[1, -1, 4]);
    let tampered = RatFunc::new(tampered_p, pole_polynomial(&rat(3), 1)).unwrap();
    let bad_level = ZetaLevel {
        zeta: tampered,
        ..z.clone()
    };
    let fe = validate_zeta_level(&bad_level)
        .iter()
        .find(|r| r.name == "functional_equation")
        .map(|r| !r.passed)
        .unwrap_or(false);
    let derived_fe = validate_zeta_level(&derive_step(&z, 2).unwrap()).iter().all(|r| r.passed);

    let hasse = matches!(artin_elliptic(2, 4), Err(Error::Hasse { .. }));
    o.report(
        12,
        "negative controls",
        planted && fe && hasse && derived_fe,
        format!(
            "planted root verdict {:?} (max deviation {}), tampered FE rejected {fe}, a=4 q=2 Hasse rejected {hasse}",
            v.holds,
            v.max_deviation.unwrap_or_default()
        ),
    );
}

fn main() {
    let t0 = Instant::now();
    let mut o = Outcomes {
        asserted_failures: Vec::new(),
    };
    let _ = grid();
    println!("grid: {} levels in {:.1?}", grid().len(), t0.elapsed());
    let all: [fn(&mut Outcomes); 12] = [c1, c2, c3, c4, c5, c6, c7, c8, c9, c10, c11, c12];
    for f in all {
        f(&mut o);
    }
    println!("acceptance finished in {:.1?}", t0.elapsed());
    if !o.asserted_failures.is_empty() {
        eprintln!("asserted criteria failed: {:?}", o.asserted_failures);
        std::process::exit(1);
    }
    assert!(grid().iter().all(|c| !c.level.zeta.is_zero() && c.level.q.is_positive()));
}
