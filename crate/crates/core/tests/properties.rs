use proptest::prelude::*;
use semicubic::arith::{
    int, isolate_and_refine_root, isolate_roots, pow10_neg, rat, sign, sturm_chain, to_f64, ExactRational,
};
use semicubic::region::{log_grid, ray_stays_inside};
use semicubic::{Curve, Derivation, RootInterval, Status, UniPoly, WeightSequence};

fn small_rational() -> impl Strategy<Value = ExactRational> {
    (-40i64..=40, 1i64..=12).prop_map(|(n, d)| rat(n, d))
}

fn unipoly() -> impl Strategy<Value = UniPoly> {
    prop::collection::vec(small_rational(), 0..7).prop_map(UniPoly::new)
}

fn unit_point() -> impl Strategy<Value = (ExactRational, ExactRational)> {
    (1i64..20000, 1i64..20000).prop_map(|(a, b)| (rat(a, 100000), rat(b, 100000)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn evaluation_is_a_ring_map(p in unipoly(), q in unipoly(), x in small_rational()) {
        prop_assert_eq!((&p * &q).eval(&x), p.eval(&x) * q.eval(&x));
        prop_assert_eq!((&p + &q).eval(&x), p.eval(&x) + q.eval(&x));
        prop_assert_eq!(p.compose(&q).eval(&x), p.eval(&q.eval(&x)));
    }

    #[test]
    fn division_reconstructs(p in unipoly(), q in unipoly()) {
        prop_assume!(!q.is_zero());
        let (quot, r) = p.div_rem(&q);
        prop_assert_eq!(&(&quot * &q) + &r, p);
        prop_assert!(r.is_zero() || r.degree() < q.degree());
    }

    #[test]
    fn sturm_counts_distinct_roots(mut roots in prop::collection::vec(-30i64..30, 1..6)) {
        let p = roots.iter().fold(UniPoly::constant(int(1)), |acc, &r| &acc * &UniPoly::linear_root(rat(r, 3)));
        roots.sort();
        roots.dedup();
        let chain = sturm_chain(&p);
        prop_assert_eq!(chain.count_real(), roots.len());
        prop_assert_eq!(chain.count_positive(), roots.iter().filter(|&&r| r > 0).count());
        let found = isolate_roots(&p, &int(-11), &int(11));
        prop_assert_eq!(found.len(), roots.len());
        for (b, &r) in found.iter().zip(&roots) {
            let fine = isolate_and_refine_root(&p, b, &pow10_neg(9)).unwrap();
            prop_assert!(fine.contains(&rat(r, 3)));
            prop_assert!(fine.width() <= pow10_neg(9));
        }
    }

    #[test]
    fn refinement_brackets_irrational_roots(n in 2i64..50) {
        // x^2 - n for non-squares.
        let p = UniPoly::new(vec![int(-n), int(0), int(1)]);
        let r = isolate_and_refine_root(&p, &RootInterval::new(int(0), int(n)), &pow10_neg(12)).unwrap();
        let s = (n as f64).sqrt();
        prop_assert!(r.lo_f64() <= s + 1e-15 && s - 1e-15 <= r.hi_f64());
    }

    #[test]
    fn weights_increase_below_the_limit((h, k) in unit_point()) {
        let w = WeightSequence::from_hk(&h, &k).unwrap();
        let hi = w.limit_sq().hi;
        let first = w.first(30);
        for pair in first.windows(2).skip(1) {
            prop_assert!(pair[0] <= pair[1]);
        }
        prop_assert!(first.last().unwrap() < &hi);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn three_sign_evaluations_agree((h, k) in unit_point()) {
        let d = Derivation::builtin();
        let x = &h + int(1);
        let y = &x + &k;
        let f = sign(&d.f.eval(&[x, y]));
        let p = sign(&d.p.eval(&[h.clone(), k.clone()]));
        let rho = sign(&d.rho.as_ref().unwrap().eval(&[h.clone(), &k / &h]));
        prop_assert_eq!(f, p);
        prop_assert_eq!(p, rho);
    }
}

#[test]
fn slices_match_membership() {
    let c = Curve::builtin();
    for h in log_grid(1e-3, 0.13, 12) {
        let s = c.k_interval(&h).unwrap();
        for j in 1..40 {
            let k = rat(j, 400);
            let status = c.classify(&h, &k).unwrap().status;
            let within = s.roots.len() == 2 && s.roots[0].hi < k && k < s.roots[1].lo;
            let outside = s.roots.is_empty() || k < s.roots[0].lo || s.roots[1].hi < k;
            if within {
                assert_eq!(status, Status::Inside, "h={} k={}", to_f64(&h), to_f64(&k));
            } else if outside {
                assert_eq!(status, Status::Outside, "h={} k={}", to_f64(&h), to_f64(&k));
            }
        }
    }
}

#[test]
fn lines_meet_the_boundary_twice() {
    let c = Curve::builtin();
    let tol = pow10_neg(10);
    let h_m = c.extremal_h(&tol).unwrap();
    let k_m = c.extremal_k(&tol).unwrap();
    for j in 1..=20 {
        let a = &h_m.value.lo * rat(j, 21);
        assert_eq!(c.k_interval(&a).unwrap().roots.len(), 2, "vertical at {}", to_f64(&a));
        let b = &k_m.value.lo * rat(j, 21);
        assert_eq!(c.h_interval(&b).unwrap().roots.len(), 2, "horizontal at {}", to_f64(&b));
    }
    assert!(c.k_interval(&(&h_m.value.hi * rat(101, 100))).unwrap().roots.is_empty());
    assert!(c.h_interval(&(&k_m.value.hi * rat(101, 100))).unwrap().roots.is_empty());
}

#[test]
fn rays_are_starlike() {
    let c = Curve::builtin();
    let tol = pow10_neg(12);
    for t in log_grid(1e-3, 1e3, 50) {
        assert_eq!(c.ray_root_count(&t), 1);
        let s = c.sample(&t, &tol).unwrap();
        assert!(ray_stays_inside(c, &s, 8));
        let beyond = &s.h.hi * rat(11, 10);
        assert_eq!(c.classify(&beyond, &(&beyond * &t)).unwrap().status, Status::Outside);
    }
}

#[test]
fn trace_closes_at_the_origin() {
    let trace = Curve::builtin().default_trace();
    let (first, last) = (&trace[0], &trace[trace.len() - 1]);
    let peak = trace.iter().map(|s| s.h_mid()).fold(0.0, f64::max);
    assert!(first.h_mid() < 1e-3 * peak && last.h_mid() < 1e-3 * peak);
    assert!(first.k_mid() < 1e-6 && last.k_mid() < 1e-3);
}

#[test]
fn extrema_are_stationary() {
    let c = Curve::builtin();
    let tol = pow10_neg(12);
    for e in [c.extremal_h(&tol).unwrap(), c.extremal_k(&tol).unwrap()] {
        assert!(c.stationarity_straddles(&e), "{}", e.kind.label());
    }
}
