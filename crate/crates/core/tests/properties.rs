//! Property tests for the structural invariants of every module.

use num_traits::{One, Zero};
use proptest::prelude::*;

use dzeta_core::arith::{pow, rat, ratio, BigRat, FormalSeries, Poly, RatFunc};
use dzeta_core::curves::{artin_elliptic, artin_from_point_counts, level_is_valid, ZetaLevel};
use dzeta_core::derived::{derive_step, special_values};
use dzeta_core::invariants::{a_table, extract_invariants, gamma_poly, reconstruct_p};
use dzeta_core::rh::{default_tolerance, rh_numeric_poly, Outcome};

fn small_rat() -> impl Strategy<Value = BigRat> {
    (-9i64..=9, 1i64..=5).prop_map(|(n, d)| ratio(n, d))
}

fn nonzero_rat() -> impl Strategy<Value = BigRat> {
    small_rat().prop_filter("nonzero", |x| !x.is_zero())
}

fn poly(max_len: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(small_rat(), 1..=max_len).prop_map(Poly::new)
}

fn nonzero_poly(max_len: usize) -> impl Strategy<Value = Poly> {
    poly(max_len).prop_filter("nonzero", |p| !p.is_zero())
}

/// `(q, a)` within the Hasse range.
fn elliptic() -> impl Strategy<Value = (u64, i64)> {
    prop::sample::select(vec![2u64, 3, 4, 5, 7, 8, 9]).prop_flat_map(|q| {
        let b = (4 * q).isqrt() as i64;
        (Just(q), -b..=b)
    })
}

fn series(order: usize) -> impl Strategy<Value = FormalSeries> {
    prop::collection::vec(small_rat(), order).prop_map(move |mut c| {
        c[0] = BigRat::zero();
        FormalSeries::new(c, order)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scale_var_round_trip(n in poly(5), d in nonzero_poly(5), c in nonzero_rat()) {
        let f = RatFunc::new(n, d).unwrap();
        let g = f.scale_var(&c).unwrap().scale_var(&c.recip()).unwrap();
        prop_assert_eq!(g, f);
    }

    #[test]
    fn reduction_preserves_values(common in nonzero_poly(3), n in poly(4), d in nonzero_poly(4), t in small_rat()) {
        let nn = &n * &common;
        let dd = &d * &common;
        prop_assume!(!dd.eval(&t).is_zero());
        let f = RatFunc::new(nn.clone(), dd.clone()).unwrap();
        prop_assert_eq!(f.eval(&t).unwrap(), nn.eval(&t) / dd.eval(&t));
    }

    #[test]
    fn exp_is_a_homomorphism(g in series(12), h in series(12)) {
        let lhs = (&g + &h).exp().unwrap();
        let rhs = &g.exp().unwrap() * &h.exp().unwrap();
        prop_assert_eq!(lhs.coeffs(), rhs.coeffs());
    }

    #[test]
    fn residue_matches_division(n in nonzero_poly(4), m in nonzero_poly(3), t0 in small_rat()) {
        prop_assume!(!m.eval(&t0).is_zero() && !n.eval(&t0).is_zero());
        let lin = Poly::new(vec![-t0.clone(), rat(1)]);
        let f = RatFunc::new(n.clone(), &lin * &m).unwrap();
        // (T - t0) f = n / m, evaluated at t0
        let expect = n.eval(&t0) / m.eval(&t0);
        prop_assert_eq!(f.residue_simple_pole(&t0).unwrap(), expect);
    }

    #[test]
    fn genus_one_counts_round_trip((q, a) in elliptic()) {
        let n1 = q as i64 + 1 - a;
        let from_counts = artin_from_point_counts(q, 1, &[n1]).unwrap();
        let from_trace = artin_elliptic(q, a).unwrap();
        prop_assert_eq!(&from_counts.zeta, &from_trace.zeta);
        let p = from_trace.numerator().unwrap();
        prop_assert_eq!(p.coeff(1), -rat(q as i64 + 1 - n1));
        prop_assert_eq!(p.constant_term(), rat(1));
        prop_assert_eq!(p.leading(), rat(q as i64));
    }

    #[test]
    fn constant_scaling_covariance((q, a) in elliptic(), c in nonzero_rat(), n in 1u32..=3) {
        let z = artin_elliptic(q, a).unwrap();
        let scaled = ZetaLevel { zeta: z.zeta.scale(&c), ..z.clone() };
        let lhs = derive_step(&scaled, n).unwrap().zeta;
        let rhs = derive_step(&z, n).unwrap().zeta.scale(&pow(&c, n as i64));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn step_one_is_identity((q, a) in elliptic(), m in 1u32..=3) {
        let z = derive_step(&artin_elliptic(q, a).unwrap(), m).unwrap();
        prop_assert_eq!(derive_step(&z, 1).unwrap().zeta, z.zeta);
    }

    #[test]
    fn derived_levels_satisfy_fe_and_residues((q, a) in elliptic(), n in 1u32..=4) {
        let z = derive_step(&artin_elliptic(q, a).unwrap(), n).unwrap();
        prop_assert!(level_is_valid(&z));
        let zt = z.zeta.div_poly(&Poly::monomial(rat(1), 1)).unwrap();
        let r1 = zt.residue_simple_pole(&rat(1)).unwrap();
        let rq = zt.residue_simple_pole(&z.q.recip()).unwrap();
        prop_assert_eq!(r1, -rq);
    }

    #[test]
    fn table_matches_reconstruction(
        alphas in prop::collection::vec(nonzero_rat(), 1..=5),
        beta in small_rat(),
        q in 2i64..=9,
    ) {
        let q = rat(q);
        let p = reconstruct_p(&alphas, &beta, &q);
        let lead = &alphas[0];
        let table: Vec<BigRat> = a_table(&alphas, &beta, &q);
        let g = alphas.len();
        for (k, ak) in table.iter().enumerate().take(2 * g + 1) {
            prop_assert_eq!(p.coeff(k) / lead, ak.clone(), "k = {}", k);
        }
    }

    #[test]
    fn gamma_has_full_degree_when_positive((q, a) in elliptic(), n in 1u32..=5) {
        let z = artin_elliptic(q, a).unwrap();
        let inv = extract_invariants(&z).unwrap();
        prop_assume!(inv.all_positive());
        let gp = gamma_poly(&special_values(&z, n as usize).unwrap(), n).unwrap();
        prop_assert!(gp.has_full_degree());
        prop_assert!(gp.constant_term_holds());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn self_inversive_roots_pair_up(factors in prop::collection::vec(-3i64..=3, 1..=3), q in 2i64..=5) {
        // product of 1 - aT + QT^2 with a^2 < 4Q
        prop_assume!(factors.iter().all(|a| a * a < 4 * q));
        let qr = rat(q);
        let p = factors.iter().fold(Poly::one(), |acc, &a| &acc * &Poly::from_ints(&[1, -a, q]));
        let bits = 192;
        let v = rh_numeric_poly(&p, &qr, bits, &default_tolerance(bits)).unwrap();
        prop_assert_eq!(v.self_inversive, Some(true));
        prop_assert_eq!(v.holds, Outcome::Pass);
        prop_assert!(v.pairing_defect_value.unwrap() < default_tolerance(bits));
    }

    #[test]
    fn off_circle_root_detected(r in 2i64..=6, q in 2i64..=5) {
        // (1 - rT)(1 - QT/r) keeps the product of roots but moves them off the circle
        prop_assume!(r * r != q);
        let p = &Poly::from_ints(&[1, -r]) * &Poly::new(vec![BigRat::one(), ratio(-q, r)]);
        let v = rh_numeric_poly(&p, &rat(q), 192, &default_tolerance(192)).unwrap();
        prop_assert_eq!(v.holds, Outcome::Fail);
    }
}
