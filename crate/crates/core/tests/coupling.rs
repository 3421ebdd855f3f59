use nrg_core::dist::{build_weights, DistributionSpec};
use nrg_core::explore::{cluster_of_random_vertex, components_union_find, Adjacency};
use nrg_core::mc::{
    dominance_check, map_replicates, mean_summary, proportion_summary, run_experiment, Experiment, Quantity, Side,
    Verdict,
};
use nrg_core::oracle::exact_component_laws;
use nrg_core::rng::RngContract;
use nrg_core::sampler::PoissonCollapseSampler;

fn critical(tau: f64) -> DistributionSpec {
    DistributionSpec::critical_pareto(tau).unwrap()
}

#[test]
fn explored_marks_follow_cluster_law() {
    for n in [3, 4] {
        let e = Experiment::new(critical(3.5), n, 100_000, Quantity::Prop24Tv, 24);
        let r = run_experiment(&e, 2).unwrap();
        assert!(r.estimate < 0.02, "n={n}: TV {}", r.estimate);
        assert_eq!(r.verdict, Verdict::BoundHolds);
        assert_eq!(r.censored_fraction, 0.0);
    }
}

#[test]
fn domination_chain_at_n4() {
    let spec = critical(3.5);
    let ws = build_weights(&spec, 4).unwrap();
    let cluster = exact_component_laws(&ws).unwrap().1;
    for k in 1..=10 {
        let walk = run_experiment(
            &Experiment::new(spec.clone(), 4, 20_000, Quantity::WalkPositivity { k }, 7),
            1,
        )
        .unwrap();
        let bp = run_experiment(
            &Experiment::new(spec.clone(), 4, 20_000, Quantity::BpPositivity { k }, 8),
            1,
        )
        .unwrap();
        assert_eq!(
            dominance_check(Side::Exact(cluster.tail(k)), (&walk).into()),
            Verdict::BoundHolds,
            "oracle vs walk at k={k}"
        );
        assert_eq!(
            dominance_check((&bp).into(), (&walk).into()),
            Verdict::BoundHolds,
            "bp vs walk at k={k}"
        );
    }
}

#[test]
fn largest_component_markov_chain() {
    // P(|C_max| > k) <= P(N_k > k) <= E[N_k]/k = n P(|C(V)| > k)/k.
    let n = 300;
    let ws = build_weights(&critical(3.5), n).unwrap();
    let sampler = PoissonCollapseSampler::new(&ws).unwrap();
    let r = 4000;
    let rows = map_replicates(1, r, |i| {
        let g = sampler.sample(RngContract::new(5, i));
        let summary = components_union_find(&g);
        let mut rng = RngContract::new(5, i | nrg_core::mc::AUX_STREAM).rng();
        (summary, cluster_of_random_vertex(&Adjacency::new(&g), &mut rng))
    })
    .unwrap();
    for k in [3usize, 6, 12, 25] {
        let cmax = proportion_summary(rows.iter().filter(|(s, _)| s.c_max() > k).count() as u64, r);
        let nk: Vec<f64> = rows.iter().map(|(s, _)| s.n_k(k) as f64 / k as f64).collect();
        let nk = mean_summary(&nk);
        let cv = proportion_summary(rows.iter().filter(|(_, c)| *c > k).count() as u64, r);
        let scale = n as f64 / k as f64;
        let markov = Side::Estimate {
            value: nk.estimate,
            stderr: nk.stderr,
        };
        let cmax = Side::Estimate {
            value: cmax.estimate,
            stderr: cmax.stderr,
        };
        assert_eq!(dominance_check(cmax, markov), Verdict::BoundHolds, "k={k}");
        let cluster = Side::Estimate {
            value: scale * cv.estimate,
            stderr: scale * cv.stderr,
        };
        // E[N_k]/k and n P(|C(V)| > k)/k estimate the same number.
        assert_eq!(dominance_check(markov, cluster), Verdict::BoundHolds, "k={k}");
        assert_eq!(dominance_check(cluster, markov), Verdict::BoundHolds, "k={k}");
    }
}
