mod common;

use std::sync::OnceLock;

use common::random_points;
use nkconf::{
    are_isomorphic, canonical_code, chirotope_from_points, dualize, enumerate_configurations, generalize, is_chirotope,
    orientability, reorient, CensusEntry, EnumerateOptions, Outcome, SolverOptions, WiringDiagram,
};
use proptest::prelude::*;
use proptest::sample::subsequence;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn corpus() -> &'static [CensusEntry] {
    static CORPUS: OnceLock<Vec<CensusEntry>> = OnceLock::new();
    CORPUS.get_or_init(|| {
        let mut all = Vec::new();
        for n in 7..=10 {
            all.extend(enumerate_configurations(n, 3, &EnumerateOptions::default()).unwrap());
        }
        all.extend(enumerate_configurations(15, 4, &EnumerateOptions::default()).unwrap());
        all
    })
}

fn entry_and_perm() -> impl Strategy<Value = (usize, Vec<usize>)> {
    (0..corpus().len()).prop_flat_map(|i| {
        let n = corpus()[i].configuration.n();
        (Just(i), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn canonical_code_ignores_labels((i, perm) in entry_and_perm()) {
        let e = &corpus()[i];
        let moved = e.configuration.relabel(&perm).unwrap();
        prop_assert_eq!(canonical_code(&moved), e.code.clone());
    }

    #[test]
    fn dualize_is_an_involution((i, perm) in entry_and_perm()) {
        let c = corpus()[i].configuration.relabel(&perm).unwrap();
        let back = dualize(&dualize(&c));
        prop_assert!(are_isomorphic(&c, &back).is_some());
        prop_assert_eq!(dualize(&c).n(), c.n());
    }

    #[test]
    fn points_give_valid_chirotopes(seed in any::<u64>(), count in 3usize..=8, spread in 1i64..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pts = random_points(count, spread, &mut rng);
        let chi = chirotope_from_points(&pts).unwrap();
        if !chi.is_identically_zero() {
            let m = chi.underlying_matroid().unwrap();
            prop_assert!(is_chirotope(&chi, &m).unwrap().valid);
        }
    }

    #[test]
    fn reorientation_keeps_chirotopes_valid(
        seed in any::<u64>(),
        flips in subsequence((0..7usize).collect::<Vec<_>>(), 0..=7),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pts = random_points(7, 4, &mut rng);
        let chi = chirotope_from_points(&pts).unwrap();
        prop_assume!(!chi.is_identically_zero());
        let m = chi.underlying_matroid().unwrap();
        let flipped = reorient(&chi, &flips);
        prop_assert!(is_chirotope(&flipped, &m).unwrap().valid);
        prop_assert_eq!(reorient(&flipped, &flips), chi);
    }

    #[test]
    fn wiring_of_points_has_the_same_chirotope(seed in any::<u64>(), count in 3usize..=8, spread in 1i64..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pts = random_points(count, spread, &mut rng);
        let (w, start) = WiringDiagram::from_points(&pts).unwrap();
        prop_assert!(w.validate().valid);
        prop_assert_eq!(w.chirotope().unwrap().relabel(&start), chirotope_from_points(&pts).unwrap());
        let counts = w.cell_counts().unwrap();
        prop_assert_eq!(counts.euler_characteristic(), 2);
    }

    #[test]
    fn solver_accepts_point_matroids(seed in any::<u64>(), count in 4usize..=8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let chi = chirotope_from_points(&random_points(count, 2, &mut rng)).unwrap();
        prop_assume!(!chi.is_identically_zero());
        let m = chi.underlying_matroid().unwrap();
        let r = orientability(&m, SolverOptions::default());
        prop_assert!(matches!(r.outcome, Outcome::Orientable(_)));
    }
}

#[test]
fn census_is_independent_of_worker_count() {
    for (n, k) in [(10, 3), (12, 3), (15, 4)] {
        let runs: Vec<Vec<CensusEntry>> = [1, 2, 8]
            .into_iter()
            .map(|w| {
                enumerate_configurations(n, k, &EnumerateOptions { workers: Some(w), ..Default::default() }).unwrap()
            })
            .collect();
        assert_eq!(runs[0], runs[1]);
        assert_eq!(runs[0], runs[2]);
    }
}

#[test]
fn generalize_of_census_entries_keeps_one_zero_per_line_triple() {
    for e in corpus() {
        let m = generalize(&e.configuration);
        assert_eq!(
            m.collinear().len(),
            e.configuration.n() * (e.configuration.k() * (e.configuration.k() - 1) * (e.configuration.k() - 2) / 6)
        );
    }
}
