use proptest::prelude::*;
use quench_core::gaussian::{covariance_from_modes, rdm_element};
use quench_core::oracle::symplectic_entropy;
use quench_core::protocol::coupling_matrix;
use quench_core::validate::degenerate_rotation_error;
use quench_core::{
    build_mode_transform, entanglement_entropy, time_grid, ChainSpec, QuenchProtocol, RdmParams, Simulator, Stage,
};

fn protocol(n: usize, wi: f64, wf: f64, k: f64, period: f64, q: usize) -> QuenchProtocol {
    QuenchProtocol::alternating(ChainSpec::new(n, wi, k).unwrap(), wf, period, q).unwrap()
}

prop_compose! {
    fn arb_protocol()(n in 2usize..24, wi in 1.0f64..5.0, wf in 1.0f64..25.0, k in 0.0f64..4.0,
                      period in 0.5f64..5.0, q in 1usize..6) -> QuenchProtocol {
        protocol(n, wi, wf, k, period, q)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn invariant_and_continuity(p in arb_protocol()) {
        let sim = Simulator::new(p).unwrap();
        for mode in sim.modes() {
            prop_assert!(mode.max_invariant_residual() < 1e-10);
            let segs = mode.segments();
            for k in 1..segs.len() {
                let s = &segs[k];
                let before = mode.eta_on_segment(k - 1, s.start);
                let after = mode.eta_on_segment(k, s.start);
                let scale = s.coeffs.gamma + s.coeffs.amplitude();
                prop_assert!((before.eta - after.eta).abs() < 1e-12 * scale);
                prop_assert!((before.eta_dot - after.eta_dot).abs() < 1e-12 * scale * s.lambda.sqrt());
                // eta'' jumps by 2 (lambda_before - lambda_after) eta
                let jump = 2.0 * (segs[k - 1].lambda - s.lambda) * before.eta;
                prop_assert!((after.eta_ddot - before.eta_ddot - jump).abs() < 1e-10 * scale * s.lambda);
            }
        }
    }

    #[test]
    fn eta_positive_and_tau_increasing(p in arb_protocol(), t1 in 0.0f64..30.0, dt in 1e-3f64..10.0) {
        let sim = Simulator::new(p).unwrap();
        for mode in sim.modes() {
            let seg = &mode.segments()[mode.segment_index(t1)];
            let s = mode.eta(t1);
            prop_assert!(s.eta > 0.0);
            prop_assert!(s.eta >= seg.eta_min() * (1.0 - 1e-12));
            prop_assert!(mode.tau(t1 + dt) > mode.tau(t1));
        }
    }

    #[test]
    fn entropy_matches_symplectic_form(g in -3.0f64..3.0, x in 0.0f64..0.999_999) {
        let gamma = 10f64.powf(g);
        let p = RdmParams::new(0.3, gamma, x * gamma);
        let s = entanglement_entropy(&p).unwrap();
        prop_assert!(s >= 0.0);
        prop_assert!((s - symplectic_entropy(p.symplectic_eigenvalue())).abs() < 1e-9);
    }

    #[test]
    fn rdm_is_hermitian(z in -5.0f64..5.0, g in 0.1f64..50.0, x in 0.0f64..0.99,
                        a in -3.0f64..3.0, b in -3.0f64..3.0) {
        let p = RdmParams::new(z, g, x * g);
        let d = rdm_element(&p, a, b) - rdm_element(&p, b, a).conj();
        prop_assert!(d.norm() < 1e-14);
    }

    #[test]
    fn schur_matches_covariance(p in arb_protocol(), t in 0.0f64..30.0) {
        let sim = Simulator::new(p).unwrap();
        let forms = sim.forms(t).unwrap();
        let r = quench_core::rdm_params(&forms, sim.transform(), 0).unwrap();
        let c = covariance_from_modes(&forms, sim.transform(), 0);
        prop_assert!((r.position_variance() - c.xx).abs() < 1e-9 * c.xx);
        prop_assert!((r.momentum_variance() - c.pp).abs() < 1e-9 * c.pp);
        prop_assert!((r.xp_covariance() - c.xp).abs() < 1e-9 * (c.xx * c.pp).sqrt());
    }

    #[test]
    fn basis_diagonalizes_every_stage(n in 2usize..40, w in 0.1f64..30.0, k in 0.0f64..10.0) {
        let u = build_mode_transform(n).unwrap();
        let sigma = coupling_matrix(Stage::new(w, k).unwrap(), n);
        let d = u.to_mode_basis(&sigma);
        let stage = Stage::new(w, k).unwrap();
        for a in 0..n {
            for b in 0..n {
                let want = if a == b { stage.mode_lambda(a + 1, n) } else { 0.0 };
                prop_assert!((d[(a, b)] - want).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn otoc_nonnegative_and_canonical_at_origin(p in arb_protocol(), t in 0.0f64..30.0) {
        let sim = Simulator::new(p).unwrap();
        let n = sim.protocol().n_sites();
        prop_assert!((sim.otoc(n - 1, n - 1, 0.0) - 1.0).abs() < 1e-12);
        prop_assert!(sim.otoc(0, n / 2, t) >= 0.0);
    }

    #[test]
    fn grid_is_sorted_and_hits_boundaries(t_max in 1.0f64..50.0, dt in 0.01f64..1.0, period in 0.3f64..7.0, q in 1usize..6) {
        let p = protocol(4, 3.0, 20.0, 2.0, period, q);
        let g = time_grid(t_max, dt, p.boundaries()).unwrap();
        prop_assert_eq!(g[0], 0.0);
        prop_assert!(g.windows(2).all(|w| w[1] > w[0] && w[1] - w[0] <= dt * (1.0 + 1e-9)));
        for &b in p.boundaries().iter().filter(|&&b| b <= t_max) {
            prop_assert!(g.contains(&b));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn degenerate_pair_rotation_leaves_observables(n in 5usize..30, angle in 0.0f64..6.28, q in 1usize..6) {
        let times: Vec<f64> = (0..10).map(|k| 2.7 * k as f64 + 0.05).collect();
        let err = degenerate_rotation_error(&protocol(n, 3.0, 20.0, 2.0, 4.0, q), angle, &times).unwrap();
        prop_assert!(err < 1e-9, "{err:e}");
    }
}
