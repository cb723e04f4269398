use approx::assert_relative_eq;
use mz_core::weights::{conjugate, v_kappa};
use mz_core::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn c2_is_rotation_invariant(n in 2usize..24, delta in 0.0f64..0.3, seed in 0u64..1000, phi in -7.0f64..7.0) {
        let z = perturbed_family::<f64>(n, &PerturbationSchedule::random(delta, seed).unwrap()).unwrap();
        let a = mz_constant_p2(&z).unwrap().c_p;
        let b = mz_constant_p2(&z.rotated(phi)).unwrap().c_p;
        assert_relative_eq!(a, b, max_relative = 1e-9);
        prop_assert!(a >= 1.0 - 1e-12);
    }

    #[test]
    fn sampling_ratio_within_frame(n in 1usize..20, delta in 0.0f64..0.35, seed in 0u64..1000, pseed in 0u64..1000) {
        let z = perturbed_family::<f64>(n, &PerturbationSchedule::random(delta, seed).unwrap()).unwrap();
        let rep = mz_constant_p2(&z).unwrap();
        let p = random_poly::<f64>(n, pseed);
        let r = sample_mean(&p, &z, 2.0).unwrap() / circle_norm(&p, 2.0, &CircleGrid::oversampled(n, 4)).unwrap();
        prop_assert!(r >= rep.lower_frame * (1.0 - 1e-10));
        prop_assert!(r <= rep.upper_frame * (1.0 + 1e-10));
    }

    #[test]
    fn ap_constant_is_scale_invariant(c in -50.0f64..50.0, a in 0.05f64..0.95, p in 1.2f64..6.0) {
        let g = CircleGrid::new(512).unwrap();
        let w = WeightSamples::from_fn(g, |t: f64| 0.5 * (1.0 + a * a - 2.0 * a * t.cos()).ln()).unwrap();
        let k = ap_constant(&w, p).unwrap().k_p;
        let ks = ap_constant(&w.shifted(c), p).unwrap().k_p;
        assert_relative_eq!(k, ks, max_relative = 1e-12);
        prop_assert!(k >= 1.0 - 1e-12);
    }

    #[test]
    fn conjugate_is_linear_and_kills_constants(a in -3.0f64..3.0, b in -3.0f64..3.0, k in 1usize..30) {
        let g = CircleGrid::new(64).unwrap();
        let t: Vec<f64> = g.angles();
        let f: Vec<f64> = t.iter().map(|x| a * (k as f64 * x).cos() + b + (2.0 * x).sin()).collect();
        let c = conjugate(&f).unwrap();
        for (ci, x) in c.iter().zip(&t) {
            let expect = a * (k as f64 * x).sin() - (2.0 * x).cos();
            prop_assert!((ci - expect).abs() < 1e-11);
        }
    }

    #[test]
    fn separation_lower_bound(n in 1usize..200, delta in 0.0f64..0.49, seed in 0u64..1000) {
        let z = perturbed_family::<f64>(n, &PerturbationSchedule::random(delta, seed).unwrap()).unwrap();
        let np1 = (n + 1) as f64;
        let bound = np1 * 2.0 * (std::f64::consts::PI * (1.0 - 2.0 * delta) / np1).sin();
        prop_assert!(np1 * separation(&z) >= bound * (1.0 - 1e-9));
    }

    #[test]
    fn lemma_identities_hold_exactly(n in 4usize..64, delta in 0.0f64..0.49, seed in 0u64..100) {
        let s = PerturbationSchedule::random(delta, seed).unwrap();
        let probe = LemmaProbe::new(n, 10.0, 1.0, s).unwrap();
        prop_assert_eq!(lemma_ratio_bound(&probe).unwrap(), 0.0);
    }
}

#[test]
fn necessity_c2_increases_and_alternating_is_stable() {
    let c: Vec<f64> = [8usize, 16, 32, 64]
        .iter()
        .map(|&n| {
            mz_constant_p2(&necessity_family::<f64>(n, 0.25).unwrap())
                .unwrap()
                .c_p
        })
        .collect();
    assert!(c.windows(2).all(|w| w[1] > w[0]), "{c:?}");

    let s = PerturbationSchedule::alternating(0.2).unwrap();
    let a: Vec<f64> = [64usize, 128, 256]
        .iter()
        .map(|&n| {
            mz_constant_p2(&perturbed_family::<f64>(n, &s).unwrap())
                .unwrap()
                .c_p
        })
        .collect();
    assert!((a[2] - a[0]).abs() < 0.05 * a[0], "{a:?}");
}

#[test]
fn k2_and_c2_grow_together_at_p2() {
    // Stabilizing k_2 goes with stabilizing c_2, growth with growth.
    let k2 = |z: &NodeSet<f64>| {
        let g = CircleGrid::oversampled(z.degree(), 32);
        ap_constant(
            &generating_weight(z, RadiusRule::DegreeRatio, &g).unwrap(),
            2.0,
        )
        .unwrap()
        .k_p
    };
    let growth = |family: &dyn Fn(usize) -> NodeSet<f64>| {
        let (a, b) = (family(64), family(128));
        let c = mz_constant_p2(&b).unwrap().c_p / mz_constant_p2(&a).unwrap().c_p;
        let k = k2(&b) / k2(&a);
        (c, k)
    };
    let tame = [
        growth(&|n| {
            perturbed_family(n, &PerturbationSchedule::alternating(0.15).unwrap()).unwrap()
        }),
        growth(&|n| perturbed_family(n, &PerturbationSchedule::constant(0.3).unwrap()).unwrap()),
        growth(&|n| necessity_family(n / 2, 0.1).unwrap()),
    ];
    for (c, k) in tame {
        assert!(
            (c - 1.0).abs() < 0.05 && (k - 1.0).abs() < 0.05,
            "tame: c {c} k {k}"
        );
    }
    let (c, k) = growth(&|n| necessity_family(n / 2, 0.25).unwrap());
    assert!(c > 1.1 && k > 1.05, "blow-up: c {c} k {k}");
}

#[test]
fn damping_keeps_u_bounded_between_n_and_2n() {
    let s = PerturbationSchedule::random(0.3, 4).unwrap();
    let u: Vec<f64> = [64usize, 128]
        .iter()
        .map(|&n| {
            helson_szego_check(n, &s, 10.0, &CircleGrid::oversampled(n, 16))
                .unwrap()
                .u_sup
        })
        .collect();
    assert!(u.iter().all(|&x| x < 40.0), "{u:?}");
    assert!(u[1] < 1.25 * u[0], "{u:?}");
}

#[test]
fn unperturbed_v_decays_like_inverse_kappa() {
    let n = 64;
    let g = CircleGrid::oversampled(n, 32);
    let sup = |k: f64| {
        v_kappa(n, &PerturbationSchedule::unperturbed(), k, &g)
            .unwrap()
            .iter()
            .fold(0.0f64, |m, x| m.max(x.abs()))
    };
    let (a, b) = (sup(4.0), sup(8.0));
    assert!(b < a && sup(100.0) < 0.2, "{a} {b}");
}

#[test]
fn single_precision_pipeline() {
    let z = perturbed_family::<f32>(32, &PerturbationSchedule::alternating(0.2).unwrap()).unwrap();
    let c32 = mz_constant_p2(&z).unwrap().c_p;
    let z64 =
        perturbed_family::<f64>(32, &PerturbationSchedule::alternating(0.2).unwrap()).unwrap();
    let c64 = mz_constant_p2(&z64).unwrap().c_p;
    assert!(((c32 as f64) - c64).abs() < 1e-3 * c64);
    let g = CircleGrid::oversampled(32, 16);
    let k32 = ap_constant(
        &generating_weight(&z, RadiusRule::DegreeRatio, &g).unwrap(),
        2.0f32,
    )
    .unwrap()
    .k_p;
    let k64 = ap_constant(
        &generating_weight(&z64, RadiusRule::DegreeRatio, &g).unwrap(),
        2.0,
    )
    .unwrap()
    .k_p;
    assert!(((k32 as f64) - k64).abs() < 1e-3 * k64);
}
