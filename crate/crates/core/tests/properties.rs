use chipfire::config::{linear_equivalent, stabilize_with};
use chipfire::crosscheck::{cross_check_random, CrossCheckOptions, Status};
use chipfire::oracle::{generate_graph, GraphGenSpec};
use chipfire::script::strongly_positive_from_inverse;
use chipfire::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn graph(seed: u64) -> Digraph {
    generate_graph(GraphGenSpec { seed, ..GraphGenSpec::default() }).unwrap()
}

fn chips(g: &Digraph, rng: &mut ChaCha8Rng) -> Configuration {
    Configuration::new(g.out_degrees().iter().map(|&d| rng.gen_range(0..=3 * d)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn firing_order_does_not_matter(seed in 0u64..100_000, order_seed in any::<u64>()) {
        let g = graph(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(order_seed);
        let a = chips(&g, &mut rng);
        let canonical = stabilize(&g, &a).unwrap();
        let shuffled = stabilize_with(&g, &a, |active| active[rng.gen_range(0..active.len())]).unwrap();
        prop_assert_eq!(canonical, shuffled);
    }

    #[test]
    fn stabilization_is_equivalent_and_stable(seed in 0u64..100_000, chip_seed in any::<u64>()) {
        let g = graph(seed);
        let a = chips(&g, &mut ChaCha8Rng::seed_from_u64(chip_seed));
        let r = stabilize(&g, &a).unwrap();
        prop_assert!(chipfire::config::is_stable(&g, &r.stable).unwrap());
        let neg: Vec<i64> = r.script.iter().map(|x| -x).collect();
        prop_assert_eq!(linear_equivalent(&g, &a, &r.stable).unwrap(), Some(neg));
    }

    #[test]
    fn representatives_are_equivalent_and_extremal(seed in 0u64..100_000, chip_seed in any::<u64>()) {
        let g = graph(seed);
        let a = chips(&g, &mut ChaCha8Rng::seed_from_u64(chip_seed));
        let crit = critical_rep(&g, &a).unwrap();
        let ss = superstable_rep(&g, &a).unwrap();
        prop_assert!(linear_equivalent(&g, &a, &crit).unwrap().is_some());
        prop_assert!(linear_equivalent(&g, &a, &ss).unwrap().is_some());
        prop_assert!(is_critical(&g, &crit, &sigma_min(&g).unwrap().sigma).unwrap().critical);
        prop_assert!(is_superstable(&g, &ss).unwrap().superstable);
        prop_assert_eq!(dual(&g, &ss).unwrap(), critical_rep(&g, &dual(&g, &ss).unwrap()).unwrap());
    }

    #[test]
    fn inverse_scripts_are_strongly_positive(seed in 0u64..100_000, target in proptest::collection::vec(1i64..6, 5)) {
        let g = graph(seed);
        let s = strongly_positive_from_inverse(&g, &target[..g.n()]).unwrap();
        prop_assert!(is_g_strongly_positive(&g, &s).unwrap());
        let sigma = sigma_min(&g).unwrap().sigma;
        // σ^M is the least strongly positive script
        prop_assert!(sigma.precedes(&s));
    }
}

#[test]
fn generated_graphs_pass_every_cross_check() {
    let seeds: Vec<u64> = (1000..1200).collect();
    let reports = cross_check_random(GraphGenSpec::default(), &seeds, &CrossCheckOptions::default());
    for r in reports {
        for check in r.results.unwrap() {
            assert_ne!(check.status, Status::Fail, "seed {}: {check}", r.seed);
        }
    }
}

#[test]
fn cross_check_reports_are_deterministic() {
    let seeds = [3, 1, 2];
    let options = CrossCheckOptions::default();
    let a = cross_check_random(GraphGenSpec::default(), &seeds, &options);
    let b = cross_check_random(GraphGenSpec::default(), &seeds, &options);
    let order: Vec<u64> = a.iter().map(|r| r.seed).collect();
    assert_eq!(order, vec![3, 1, 2]);
    for (x, y) in a.iter().zip(&b) {
        assert_eq!(x.results, y.results);
    }
}
