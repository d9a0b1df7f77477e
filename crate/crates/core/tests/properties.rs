//! Property tests over seeded random ensembles and measurements.

use proptest::prelude::*;
use qbound_core::bounds::{bound_report, spectrum_identity_residual};
use qbound_core::infomeasures::{
    conditional_info_gain, mutual_information, mutual_information_from_likelihoods, subentropy, von_neumann,
};
use qbound_core::qobjects::{apply_measurement, coarse_grain, mix_measurements, random_instance, random_mixed_state};
use qbound_core::random::seeded_rng;
use qbound_core::{ComplexMatrix, Ensemble, Measurement};

fn instance() -> impl Strategy<Value = (Ensemble, Measurement)> {
    (2usize..=5, 1usize..=6, 1usize..=6, any::<bool>(), any::<u64>())
        .prop_map(|(d, s, o, pure, seed)| random_instance(d, s, o, pure, seed).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn bayes_and_mixture_consistency((e, m) in instance()) {
        let a = apply_measurement(&m, &e).unwrap();
        let q = a.outcome_probs();
        prop_assert!((q.iter().sum::<f64>() - 1.0).abs() < 1e-10);
        for (i, p) in e.probs().iter().enumerate() {
            for (j, qj) in q.iter().enumerate() {
                let joint = p * a.conditional_probs()[i][j];
                prop_assert!((a.posteriors()[j][i] * qj - joint).abs() < 1e-12);
            }
        }
        // Σ_i P(i|j) ρ'_{ji} = ρ'_j on every outcome that occurs.
        for j in 0..a.num_outcomes() {
            let Some(post) = &a.post_states()[j] else { continue };
            let mut mix = ComplexMatrix::zeros(e.dim());
            for (i, cond) in a.conditional_post_states()[j].iter().enumerate() {
                if let Some(s) = cond {
                    mix = &mix + &s.matrix().scale(a.posteriors()[j][i]);
                }
            }
            prop_assert!((&mix - post.matrix()).frobenius_norm() < 1e-9);
        }
    }

    #[test]
    fn mutual_information_is_symmetric((e, m) in instance()) {
        let a = apply_measurement(&m, &e).unwrap();
        let forward = mutual_information(&a).0;
        let backward = mutual_information_from_likelihoods(e.probs(), a.conditional_probs()).0;
        prop_assert!((forward - backward).abs() < 1e-9);
        prop_assert!(forward >= -1e-10);
    }

    #[test]
    fn bound_chain_holds((e, m) in instance(), seed in any::<u64>()) {
        let r = bound_report(&e, &m, Some(seed)).unwrap();
        prop_assert!(r.passes(1e-8, 1e-9), "{r:?}");
    }

    #[test]
    fn spectrum_identity((e, m) in instance()) {
        prop_assert!(spectrum_identity_residual(&e.ensemble_state(), &m).unwrap() < 1e-9);
    }

    #[test]
    fn averaged_conditional_gain((e, m) in instance()) {
        let a = apply_measurement(&m, &e).unwrap();
        let avg: f64 = (0..e.len()).map(|i| e.probs()[i] * conditional_info_gain(&a, i).unwrap().0).sum();
        let mut raw = 0.0;
        for (i, (p, rho)) in e.probs().iter().zip(e.states()).enumerate() {
            let mut after = 0.0;
            for j in 0..a.num_outcomes() {
                if let Some(s) = &a.conditional_post_states()[j][i] {
                    after += a.conditional_probs()[i][j] * von_neumann(s).unwrap().0;
                }
            }
            raw += p * (von_neumann(rho).unwrap().0 - after);
        }
        prop_assert!((avg - raw).abs() < 1e-10);
    }

    #[test]
    fn subentropy_between_zero_and_entropy(dim in 2usize..=6, seed in any::<u64>()) {
        let rho = random_mixed_state(dim, &mut seeded_rng(seed));
        let q = subentropy(&rho).unwrap().0;
        let s = von_neumann(&rho).unwrap().0;
        prop_assert!(q >= -1e-9 && q <= s + 1e-9, "Q {q} S {s}");
    }

    #[test]
    fn mixing_preserves_completeness(
        dim in 2usize..=4, o1 in 1usize..=4, o2 in 1usize..=4, lambda in 0.0f64..=1.0, seed in any::<u64>()
    ) {
        let (_, m1) = random_instance(dim, 1, o1, true, seed).unwrap();
        let (_, m2) = random_instance(dim, 1, o2, true, seed.wrapping_add(1)).unwrap();
        let mixed = mix_measurements(&m1, &m2, lambda).unwrap();
        prop_assert!(mixed.completeness_residual() < 1e-8);
    }

    #[test]
    fn singleton_grouping_equals_efficient((e, m) in instance()) {
        let groups: Vec<Vec<usize>> = (0..m.len()).map(|j| vec![j]).collect();
        let grouped = m.clone().with_groups(groups).unwrap();
        let fine = apply_measurement(&m, &e).unwrap();
        let coarse = coarse_grain(&grouped, &e).unwrap();
        prop_assert!((mutual_information(&fine).0 - mutual_information(&coarse).0).abs() < 1e-12);
        for (a, b) in fine.outcome_probs().iter().zip(coarse.outcome_probs()) {
            prop_assert!((a - b).abs() < 1e-14);
        }
    }
}
