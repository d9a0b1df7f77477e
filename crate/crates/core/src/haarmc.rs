//! Monte Carlo over the unitarily invariant pure-state ensemble.
//!
//! The Haar measure is normalized to a probability measure, so the ensemble
//! state of the uniform ensemble is `I/N`. For that ensemble the mutual
//! information of an efficient measurement has the closed form
//! `Q[I/N] − Σ_j Q_j Q[ρ'_j]`; [`uniform_ensemble_info_mc`] estimates the same
//! quantity by direct sampling and [`uniform_closed_form`] evaluates it.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::infomeasures::{entropy_raw, subentropy, Nats};
use crate::matrixcore::{sqrt_psd, ComplexMatrix, C64};
use crate::qobjects::{DensityOperator, Measurement, ZERO_PROB};
use crate::random::{haar_vector, trial_rng};

/// Minimum trial count accepted by the estimators.
pub const MIN_TRIALS: usize = 100;

/// Trials per work unit. Partial sums are formed per chunk in trial order and
/// combined in chunk order, so the result does not depend on the thread count.
const CHUNK: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MCEstimate {
    pub mean: Nats,
    /// Sample standard deviation over `√trials`.
    pub std_error: Nats,
    pub trials: usize,
    pub seed: u64,
}

impl MCEstimate {
    /// `|mean − target|` in units of the standard error. Zero error with an
    /// exact hit counts as zero sigmas.
    pub fn sigmas_from(&self, target: f64) -> f64 {
        let d = (self.mean.0 - target).abs();
        if d == 0.0 {
            0.0
        } else {
            d / self.std_error.0
        }
    }

    pub fn within_sigmas(&self, target: f64, k: f64) -> bool {
        self.sigmas_from(target) <= k
    }
}

/// Haar-random pure state: normalized vector of standard complex Gaussians.
pub fn haar_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<C64> {
    assert!(dim >= 1, "haar_state needs dim >= 1");
    haar_vector(dim, rng)
}

/// Ordered mean and standard error of `f(t, rng_t)` over `trials` independent
/// streams.
pub(crate) fn sample_mean<F>(trials: usize, seed: u64, f: F) -> MCEstimate
where
    F: Fn(&mut crate::random::StreamRng) -> f64 + Sync,
{
    let chunks: Vec<(f64, f64)> = (0..trials.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(trials);
            let mut s = 0.0;
            let mut s2 = 0.0;
            for t in lo..hi {
                let x = f(&mut trial_rng(seed, t as u64));
                s += x;
                s2 += x * x;
            }
            (s, s2)
        })
        .collect();
    let (sum, sum_sq) = chunks
        .iter()
        .fold((0.0, 0.0), |(a, b), (s, s2)| (a + s, b + s2));
    let n = trials as f64;
    let mean = sum / n;
    let var = ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0);
    MCEstimate {
        mean: Nats(mean),
        std_error: Nats((var / n).sqrt()),
        trials,
        seed,
    }
}

fn check_efficient(m: &Measurement) -> Result<()> {
    if m.is_efficient() {
        Ok(())
    } else {
        Err(Error::NotEfficient)
    }
}

fn check_trials(trials: usize) -> Result<()> {
    if trials < MIN_TRIALS {
        return Err(Error::InvalidArgument(format!(
            "need at least {MIN_TRIALS} trials, got {trials}"
        )));
    }
    Ok(())
}

/// Estimates `H[Q_j] − E_ψ H[Q(j|ψ)]` for the uniform pure-state ensemble.
/// `Q_j = Tr[E_j]/N` is exact; only the conditional term is sampled.
pub fn uniform_ensemble_info_mc(m: &Measurement, trials: usize, seed: u64) -> Result<MCEstimate> {
    check_efficient(m)?;
    check_trials(trials)?;
    let dim = m.dim();
    let povm = m.povm_elements();
    let marginal: Vec<f64> = povm.iter().map(|e| e.trace().re / dim as f64).collect();
    let h_marginal = entropy_raw(&marginal);
    Ok(sample_mean(trials, seed, |rng| {
        let psi = haar_state(dim, rng);
        let mut likelihood: Vec<f64> = povm.iter().map(|e| e.expectation(&psi).max(0.0)).collect();
        let total: f64 = likelihood.iter().sum();
        likelihood.iter_mut().for_each(|q| *q /= total);
        h_marginal - entropy_raw(&likelihood)
    }))
}

/// `Q[I/N] − Σ_j Q_j Q[ρ'_j]` with `Q_j = Tr[E_j]/N` and
/// `ρ'_j = A_j A_j† / Tr[E_j]`.
pub fn uniform_closed_form(m: &Measurement) -> Result<Nats> {
    check_efficient(m)?;
    let dim = m.dim();
    let mut total = subentropy(&DensityOperator::maximally_mixed(dim))?;
    for a in m.kraus() {
        let post = a * &a.adjoint();
        let q = post.trace().re / dim as f64;
        if q < ZERO_PROB {
            continue;
        }
        total = total - q * subentropy(&DensityOperator::from_unnormalized(&post))?;
    }
    Ok(total)
}

/// One draw from the distortion of the uniform ensemble by `ρ'`:
/// `|φ̃⟩ = √ρ' U |ψ⟩` with Haar `|ψ⟩`, weight `⟨φ̃|φ̃⟩`.
pub fn distorted_sample<R: Rng + ?Sized>(
    rho_prime: &DensityOperator,
    u: &ComplexMatrix,
    rng: &mut R,
) -> Result<(Vec<C64>, f64)> {
    rho_prime.matrix().check_same_dim(u)?;
    let root = sqrt_psd(rho_prime.matrix())?;
    Ok(distorted_with_root(&root, u, rng))
}

fn distorted_with_root<R: Rng + ?Sized>(root: &ComplexMatrix, u: &ComplexMatrix, rng: &mut R) -> (Vec<C64>, f64) {
    let psi = haar_state(root.dim(), rng);
    let phi = root.apply(&u.apply(&psi));
    let weight = phi.iter().map(|z| z.norm_sqr()).sum();
    (phi, weight)
}

/// Entrywise mean and standard error of `N |φ̃⟩⟨φ̃|` over `trials` draws,
/// which should reproduce `ρ'`.
#[derive(Clone, Debug)]
pub struct DistortionMoments {
    pub mean: ComplexMatrix,
    /// Standard errors of real and imaginary parts, row-major.
    pub std_error: Vec<(f64, f64)>,
    /// Mean of `N · weight`, which should be one.
    pub weight: MCEstimate,
}

impl DistortionMoments {
    /// Largest entrywise deviation from `target` in standard errors; exact
    /// agreement on a zero-variance entry counts as zero.
    pub fn max_sigmas_from(&self, target: &ComplexMatrix) -> f64 {
        let n = target.dim();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let d = self.mean[(i, j)] - target[(i, j)];
                let (sr, si) = self.std_error[i * n + j];
                for (dev, se) in [(d.re.abs(), sr), (d.im.abs(), si)] {
                    if dev > 1e-12 {
                        worst = worst.max(dev / se);
                    }
                }
            }
        }
        worst
    }
}

pub fn distortion_moments(
    rho_prime: &DensityOperator,
    u: &ComplexMatrix,
    trials: usize,
    seed: u64,
) -> Result<DistortionMoments> {
    check_trials(trials)?;
    rho_prime.matrix().check_same_dim(u)?;
    let n = u.dim();
    let root = sqrt_psd(rho_prime.matrix())?;
    let scale = n as f64;
    // Per chunk: weight sums, then entrywise (re, im, re², im²) sums.
    let chunks: Vec<(f64, f64, Vec<[f64; 4]>)> = (0..trials.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(trials);
            let mut w = 0.0;
            let mut w2 = 0.0;
            let mut acc = vec![[0.0; 4]; n * n];
            for t in lo..hi {
                let (phi, weight) = distorted_with_root(&root, u, &mut trial_rng(seed, t as u64));
                w += scale * weight;
                w2 += (scale * weight).powi(2);
                for i in 0..n {
                    for j in 0..n {
                        let z = phi[i] * phi[j].conj() * scale;
                        let a = &mut acc[i * n + j];
                        a[0] += z.re;
                        a[1] += z.im;
                        a[2] += z.re * z.re;
                        a[3] += z.im * z.im;
                    }
                }
            }
            (w, w2, acc)
        })
        .collect();
    let mut w = 0.0;
    let mut w2 = 0.0;
    let mut acc = vec![[0.0; 4]; n * n];
    for (cw, cw2, cacc) in &chunks {
        w += cw;
        w2 += cw2;
        for (a, b) in acc.iter_mut().zip(cacc) {
            for k in 0..4 {
                a[k] += b[k];
            }
        }
    }
    let t = trials as f64;
    let se = |s: f64, s2: f64| {
        let m = s / t;
        (((s2 - t * m * m) / (t - 1.0)).max(0.0) / t).sqrt()
    };
    let mean = ComplexMatrix::from_fn(n, |i, j| {
        let a = acc[i * n + j];
        C64::new(a[0] / t, a[1] / t)
    });
    let std_error = acc.iter().map(|a| (se(a[0], a[2]), se(a[1], a[3]))).collect();
    Ok(DistortionMoments {
        mean,
        std_error,
        weight: MCEstimate {
            mean: Nats(w / t),
            std_error: Nats(se(w, w2)),
            trials,
            seed,
        },
    })
}

/// Two-sample Kolmogorov–Smirnov statistic `sup |F_a − F_b|`.
pub fn ks_statistic(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Two-sample KS critical value at the 1% level, `1.628 · √((n+m)/(nm))`.
pub fn ks_critical_1pct(n: usize, m: usize) -> f64 {
    1.628 * ((n + m) as f64 / (n * m) as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qobjects::random_measurement;
    use crate::random::{haar_unitary, seeded_rng};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::LN_2;

    #[test]
    fn haar_state_basics() {
        let mut rng = seeded_rng(1);
        let v = haar_state(1, &mut rng);
        assert_abs_diff_eq!(v[0].norm(), 1.0, epsilon = 1e-12);
        for dim in 2..6 {
            let v = haar_state(dim, &mut rng);
            let n: f64 = v.iter().map(|z| z.norm_sqr()).sum();
            assert_abs_diff_eq!(n, 1.0, epsilon = 1e-12);
        }
        assert_eq!(haar_state(3, &mut seeded_rng(5)), haar_state(3, &mut seeded_rng(5)));
    }

    #[test]
    fn haar_mean_state_is_maximally_mixed() {
        let rho = DensityOperator::maximally_mixed(2);
        let m = distortion_moments(&rho, &ComplexMatrix::identity(2), 100_000, 11).unwrap();
        // With ρ' = I/N the draw is ψ/√N, so N|φ̃⟩⟨φ̃| = |ψ⟩⟨ψ|.
        let half = ComplexMatrix::identity(2).scale(0.5);
        assert!(m.max_sigmas_from(&half) <= 3.0, "{}", m.max_sigmas_from(&half));
    }

    #[test]
    fn trivial_measurements_give_zero() {
        let est = uniform_ensemble_info_mc(&Measurement::identity(3), 200, 1).unwrap();
        assert_eq!(est.mean, Nats(0.0));
        assert_eq!(est.std_error, Nats(0.0));

        let half = ComplexMatrix::identity(2).scale(0.5f64.sqrt());
        let m = Measurement::new(vec![half.clone(), half]).unwrap();
        let est = uniform_ensemble_info_mc(&m, 1000, 2).unwrap();
        assert!(est.mean.0.abs() < 1e-12);
    }

    #[test]
    fn z_measurement_matches_closed_form() {
        let m = Measurement::computational_basis(2);
        let closed = uniform_closed_form(&m).unwrap().0;
        assert_abs_diff_eq!(closed, LN_2 - 0.5, epsilon = 1e-12);
        let est = uniform_ensemble_info_mc(&m, 200_000, 3).unwrap();
        assert!(est.within_sigmas(closed, 3.0), "{est:?}");
    }

    #[test]
    fn random_measurements_match_closed_form() {
        let mut rng = seeded_rng(4);
        for dim in [2, 3] {
            let m = random_measurement(dim, 3, &mut rng).unwrap();
            let closed = uniform_closed_form(&m).unwrap().0;
            let est = uniform_ensemble_info_mc(&m, 50_000, 40 + dim as u64).unwrap();
            assert!(est.within_sigmas(closed, 3.5), "dim {dim}: {est:?} vs {closed}");
        }
    }

    #[test]
    fn estimator_is_deterministic() {
        let m = Measurement::computational_basis(3);
        let a = uniform_ensemble_info_mc(&m, 5000, 9).unwrap();
        let b = uniform_ensemble_info_mc(&m, 5000, 9).unwrap();
        assert_eq!(a.mean.to_bits(), b.mean.to_bits());
        assert_eq!(a.mean.0.to_bits(), b.mean.0.to_bits());
    }

    #[test]
    fn rejects_inefficient_and_short_runs() {
        let m = Measurement::computational_basis(2).with_groups(vec![vec![0, 1]]).unwrap();
        assert_eq!(uniform_ensemble_info_mc(&m, 1000, 0), Err(Error::NotEfficient));
        assert!(uniform_ensemble_info_mc(&Measurement::identity(2), 99, 0).is_err());
    }

    #[test]
    fn distortion_by_maximally_mixed_has_constant_weight() {
        let rho = DensityOperator::maximally_mixed(4);
        let mut rng = seeded_rng(6);
        let u = haar_unitary(4, &mut rng);
        for _ in 0..50 {
            let (_, w) = distorted_sample(&rho, &u, &mut rng).unwrap();
            assert_abs_diff_eq!(w, 0.25, epsilon = 1e-14);
        }
    }

    #[test]
    fn distortion_by_pure_state_is_parallel() {
        let mut rng = seeded_rng(7);
        let v = haar_state(3, &mut rng);
        let rho = DensityOperator::pure(&v).unwrap();
        let u = haar_unitary(3, &mut rng);
        for _ in 0..50 {
            let (phi, w) = distorted_sample(&rho, &u, &mut rng).unwrap();
            let overlap = crate::matrixcore::inner(&v, &phi).norm_sqr();
            assert_abs_diff_eq!(overlap, w, epsilon = 1e-10);
        }
    }

    #[test]
    fn distortion_reproduces_the_state() {
        let mut rng = seeded_rng(8);
        let rho = crate::qobjects::random_mixed_state(3, &mut rng);
        let u = haar_unitary(3, &mut rng);
        let m = distortion_moments(&rho, &u, 100_000, 12).unwrap();
        assert!(m.max_sigmas_from(rho.matrix()) <= 3.5);
        assert!(m.weight.within_sigmas(1.0, 3.0), "{:?}", m.weight);
    }

    #[test]
    fn unitary_invariance_ks() {
        let n = 10_000;
        let mut rng = seeded_rng(13);
        let v = haar_unitary(3, &mut rng);
        let plain: Vec<f64> = (0..n).map(|_| haar_state(3, &mut rng)[0].norm_sqr()).collect();
        let rotated: Vec<f64> = (0..n)
            .map(|_| v.apply(&haar_state(3, &mut rng))[0].norm_sqr())
            .collect();
        assert!(ks_statistic(&plain, &rotated) < ks_critical_1pct(n, n));
    }

    #[test]
    fn ks_statistic_examples() {
        assert_eq!(ks_statistic(&[1.0, 2.0], &[1.0, 2.0]), 0.0);
        assert_eq!(ks_statistic(&[0.0, 0.1], &[5.0, 6.0]), 1.0);
        assert_abs_diff_eq!(ks_statistic(&[1.0, 3.0], &[2.0, 4.0]), 0.5);
    }
}
