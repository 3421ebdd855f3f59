use nrg_core::bounds::{diagnostics, theorem1_bound, theorem2_threshold};
use nrg_core::bp::{run_walk, GammaConfig, MixedPoisson};
use nrg_core::dist::{DistributionSpec, WeightSequence};
use nrg_core::mc::proportion_summary;
use nrg_core::rng::RngContract;
use proptest::prelude::*;

fn weights() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..6.0, 2..40).prop_map(|mut w| {
        w.sort_by(|a, b| b.total_cmp(a));
        w[0] += 0.1;
        w
    })
}

proptest! {
    #[test]
    fn b_h_matches_definition(w in weights(), h in 1u64..50, extra in 0u64..1000) {
        let ws = WeightSequence::new(w.clone()).unwrap();
        let cfg = GammaConfig::new(h, h + extra, 1).unwrap();
        let ds = diagnostics(&ws, &cfg).unwrap();
        let l: f64 = w.iter().sum();
        let m2: f64 = w.iter().map(|x| x * x).sum();
        let m3: f64 = w.iter().map(|x| x * x * x).sum();
        let direct = (2.0 * (h * h) as f64).max(m3 / l + 1.0 - m2 / l);
        prop_assert!((ds.b_h - direct).abs() <= 1e-12 * direct);
        // Cauchy–Schwarz: (Σw²)² <= Σw · Σw³.
        prop_assert!(ds.ew2_star * l * l >= m2 * m2 * (1.0 - 1e-12));
    }

    #[test]
    fn theorem1_bound_decreasing_in_omega(tau in 4.1f64..9.0, a in 1.01f64..50.0, b in 1.01f64..50.0) {
        let s = DistributionSpec::critical_pareto(tau).unwrap();
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assert!(theorem1_bound(&s, hi).unwrap().leading <= theorem1_bound(&s, lo).unwrap().leading);
    }

    #[test]
    fn theorem2_threshold_monotone(tau in 3.01f64..3.99, w1 in 1.01f64..20.0, dw in 0.0f64..20.0, n in 2usize..1_000_000, dn in 0usize..1_000_000) {
        let t = theorem2_threshold(n, tau, w1).unwrap();
        prop_assert!(theorem2_threshold(n, tau, w1 + dw).unwrap() >= t);
        prop_assert!(theorem2_threshold(n + dn, tau, w1).unwrap() >= t);
    }

    #[test]
    fn gamma_is_bounded(w in weights(), h in 1u64..20, hp in 1u64..200, k in 1u64..20, seed in 0u64..1000) {
        prop_assume!(hp >= k);
        let ws = WeightSequence::new(w).unwrap();
        let src = MixedPoisson::new(&ws).unwrap();
        let cfg = GammaConfig::new(h, hp, k).unwrap();
        let path = run_walk(&src, &cfg, &mut RngContract::new(seed, 0).rng(), true, true);
        prop_assert!(path.gamma >= 1 && path.gamma <= hp);
        if path.gamma < hp {
            prop_assert!(path.s_gamma == 0 || path.s_gamma >= h as i64);
        }
        prop_assert_eq!(path.s[path.gamma as usize], path.s_gamma);
        let positive = path.s.iter().skip(1).take(k as usize).all(|&s| s > 0);
        prop_assert_eq!(positive, path.positive_through_k);
    }

    #[test]
    fn interval_contains_estimate(trials in 1u64..100_000, frac in 0.0f64..=1.0) {
        let hits = (frac * trials as f64).round() as u64;
        let s = proportion_summary(hits, trials);
        prop_assert!(s.ci95.0 <= s.estimate && s.estimate <= s.ci95.1);
        prop_assert!(s.ci95.0 >= 0.0 && s.ci95.1 <= 1.0);
    }
}
