//! Entropies and information functionals, all in nats.

use std::f64::consts::LN_2;
use std::iter::Sum;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qobjects::{check_distribution, DensityOperator, Ensemble, OutcomeAnalysis, ZERO_PROB};

/// Tolerance on `Σ p = 1` for [`shannon`].
pub const DISTRIBUTION_TOL: f64 = 1e-9;
/// Largest drift of a clipped spectrum's sum from 1 that is renormalized away.
pub const SPECTRUM_DRIFT_TOL: f64 = 1e-8;
/// Relative gap below which eigenvalues are merged for subentropy.
pub const CLUSTER_GAP: f64 = 1e-7;

/// An information quantity in natural-log units.
#[derive(Clone, Copy, Debug, Default, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Nats(pub f64);

impl Nats {
    pub const ZERO: Nats = Nats(0.0);

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    #[inline]
    pub fn to_bits(self) -> f64 {
        self.0 / LN_2
    }
}

impl Add for Nats {
    type Output = Nats;
    fn add(self, rhs: Nats) -> Nats {
        Nats(self.0 + rhs.0)
    }
}

impl Sub for Nats {
    type Output = Nats;
    fn sub(self, rhs: Nats) -> Nats {
        Nats(self.0 - rhs.0)
    }
}

impl Neg for Nats {
    type Output = Nats;
    fn neg(self) -> Nats {
        Nats(-self.0)
    }
}

impl Mul<Nats> for f64 {
    type Output = Nats;
    fn mul(self, rhs: Nats) -> Nats {
        Nats(self * rhs.0)
    }
}

impl Sum for Nats {
    fn sum<I: Iterator<Item = Nats>>(iter: I) -> Nats {
        Nats(iter.map(|n| n.0).sum())
    }
}

#[inline]
fn plogp(p: f64) -> f64 {
    if p > 0.0 {
        p * p.ln()
    } else {
        0.0
    }
}

/// `−Σ p ln p` without validation; zero and negative entries contribute nothing.
pub(crate) fn entropy_raw(p: &[f64]) -> f64 {
    -p.iter().copied().map(plogp).sum::<f64>()
}

/// Shannon entropy `−Σ p_i ln p_i`, with `0 ln 0 = 0`.
pub fn shannon(p: &[f64]) -> Result<Nats> {
    check_distribution(p, DISTRIBUTION_TOL)?;
    Ok(Nats(entropy_raw(p).max(0.0)))
}

/// Eigenvalues with roundoff negatives clipped and the sum renormalized to one.
pub fn normalized_spectrum(rho: &DensityOperator) -> Result<Vec<f64>> {
    let mut ev = rho.spectrum().to_vec();
    for l in ev.iter_mut() {
        if *l < -crate::matrixcore::PSD_TOL {
            return Err(Error::NotPsd(*l));
        }
        *l = l.max(0.0);
    }
    let s: f64 = ev.iter().sum();
    if (s - 1.0).abs() > SPECTRUM_DRIFT_TOL {
        return Err(Error::InvalidTrace(s));
    }
    ev.iter_mut().for_each(|l| *l /= s);
    Ok(ev)
}

/// `S[ρ] = −Tr ρ ln ρ`
pub fn von_neumann(rho: &DensityOperator) -> Result<Nats> {
    Ok(Nats(entropy_raw(&normalized_spectrum(rho)?).max(0.0)))
}

fn harmonic(n: usize) -> f64 {
    (1..=n).map(|k| 1.0 / k as f64).sum()
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `f^{(m)}(x) / m!` for `f(x) = xⁿ ln x`, extended by continuity at zero (`m < n`).
fn scaled_derivative(n: usize, m: usize, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if m <= n {
        return binomial(n, m) * x.powi((n - m) as i32) * (x.ln() + harmonic(n) - harmonic(n - m));
    }
    // Beyond order n only the logarithm contributes: (−1)^{m−n−1} n!(m−n−1)!/m! · x^{n−m}.
    let mut c = 1.0 / m as f64;
    for k in 1..=n {
        c *= k as f64 / (m - n - 1 + k) as f64;
    }
    let sign = if (m - n - 1).is_multiple_of(2) { 1.0 } else { -1.0 };
    sign * c * x.powi(n as i32 - m as i32)
}

/// Relative span below which a divided difference is summed from the Taylor
/// series at the node midpoint instead of the difference quotient.
const SERIES_SPAN: f64 = 0.5;
const SERIES_TERMS: usize = 400;

/// `f[z_0, …, z_k]` for nodes within `SERIES_SPAN · z_0` of each other:
/// `Σ_{m≥k} f^{(m)}(c)/m! · h_{m−k}(z − c)` with `h_p` the complete
/// homogeneous symmetric polynomials.
fn divided_difference_series(n: usize, z: &[f64]) -> f64 {
    let k = z.len() - 1;
    let c = (z[0] + z[k]) / 2.0;
    let delta: Vec<f64> = z.iter().map(|x| x - c).collect();
    let radius = delta.iter().fold(0.0f64, |r, d| r.max(d.abs()));
    // |h_p| ≤ C(p+k, k) · radius^p
    let mut bound = 1.0;
    // h[j] = h_p(δ_0, …, δ_j) for the current p.
    let mut h = vec![1.0; k + 1];
    let mut sum = scaled_derivative(n, k, c);
    for p in 1..SERIES_TERMS {
        let mut prev = 0.0;
        for (hj, d) in h.iter_mut().zip(&delta) {
            // h_p(δ_0..δ_j) = h_p(δ_0..δ_{j−1}) + δ_j h_{p−1}(δ_0..δ_j)
            *hj = prev + d * *hj;
            prev = *hj;
        }
        let a = scaled_derivative(n, k + p, c);
        sum += a * h[k];
        bound *= radius * (p + k) as f64 / p as f64;
        if (a * bound).abs() <= 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

/// Subentropy of a spectrum (non-negative, summing to one).
///
/// `Q = −f[λ_1, …, λ_N]`, the order-`N−1` divided difference of
/// `f(x) = xᴺ ln x`. Equivalently `−Σ_k λ_kᴺ ln λ_k / Π_{l≠k}(λ_k − λ_l)` for a
/// nondegenerate spectrum. Eigenvalues closer than `CLUSTER_GAP · λ_max` are
/// merged to their mean and handled with confluent (derivative) entries;
/// table entries over closely spaced positive nodes use the Taylor series.
pub fn subentropy_of_spectrum(spectrum: &[f64]) -> f64 {
    let n = spectrum.len();
    if n <= 1 {
        return 0.0;
    }
    let mut lam = spectrum.to_vec();
    lam.sort_by(f64::total_cmp);
    let gap = CLUSTER_GAP * lam[n - 1];

    let mut nodes = Vec::with_capacity(n);
    let mut start = 0;
    for k in 1..=n {
        if k == n || lam[k] - lam[k - 1] >= gap {
            let mean = lam[start..k].iter().sum::<f64>() / (k - start) as f64;
            nodes.extend(std::iter::repeat_n(mean, k - start));
            start = k;
        }
    }

    // d[i] holds f[z_i, …, z_{i+order}] after each pass.
    let mut d: Vec<f64> = nodes.iter().map(|&z| scaled_derivative(n, 0, z)).collect();
    for order in 1..n {
        for i in 0..(n - order) {
            let (lo, hi) = (nodes[i], nodes[i + order]);
            d[i] = if lo == hi {
                scaled_derivative(n, order, lo)
            } else if lo > 0.0 && hi - lo <= SERIES_SPAN * lo {
                divided_difference_series(n, &nodes[i..=i + order])
            } else {
                (d[i + 1] - d[i]) / (hi - lo)
            };
        }
    }
    -d[0]
}

/// Subentropy `Q[ρ]` of a density operator.
pub fn subentropy(rho: &DensityOperator) -> Result<Nats> {
    Ok(Nats(subentropy_of_spectrum(&normalized_spectrum(rho)?)))
}

/// `ΔI_i = H[P_i] − Σ_j Q_j H[P(i|j)]`
pub fn mutual_information(analysis: &OutcomeAnalysis) -> Nats {
    let prior = entropy_raw(analysis.ensemble().probs());
    let remaining: f64 = analysis
        .outcome_probs()
        .iter()
        .zip(analysis.posteriors())
        .filter(|(q, _)| **q >= ZERO_PROB)
        .map(|(q, post)| {
            let s: f64 = post.iter().sum();
            let normalized: Vec<f64> = post.iter().map(|p| p / s).collect();
            q * entropy_raw(&normalized)
        })
        .sum();
    Nats(prior - remaining)
}

/// The other side of the mutual-information symmetry:
/// `H[Q_j] − Σ_i P_i H[Q(j|i)]`, from priors and likelihoods `Q(j|i)` (`[i][j]`).
pub fn mutual_information_from_likelihoods(priors: &[f64], likelihoods: &[Vec<f64>]) -> Nats {
    let n_out = likelihoods.first().map_or(0, Vec::len);
    let mut marginal = vec![0.0; n_out];
    let mut conditional = 0.0;
    for (p, row) in priors.iter().zip(likelihoods) {
        for (m, q) in marginal.iter_mut().zip(row) {
            *m += p * q;
        }
        conditional += p * entropy_raw(row);
    }
    Nats(entropy_raw(&marginal) - conditional)
}

/// `ΔI_f = S[ρ] − Σ_j Q_j S[ρ'_j]`. For coarse analyses the final states are
/// the averaged `ρ̃_k` and the result can be negative.
pub fn info_gain_f(analysis: &OutcomeAnalysis) -> Result<Nats> {
    let before = von_neumann(analysis.ensemble_state())?;
    let mut after = Nats::ZERO;
    for (q, state) in analysis.outcome_probs().iter().zip(analysis.post_states()) {
        if let Some(state) = state {
            after = after + *q * von_neumann(state)?;
        }
    }
    Ok(before - after)
}

/// `ΔI_fi = S[ρ_i] − Σ_j Q(j|i) S[ρ'_{ji}]`, the purification gain had the
/// prepared state been known to be `ρ_i`.
pub fn conditional_info_gain(analysis: &OutcomeAnalysis, i: usize) -> Result<Nats> {
    if !analysis.is_efficient() {
        return Err(Error::NotEfficient);
    }
    let n = analysis.ensemble().len();
    if i >= n {
        return Err(Error::IndexOutOfRange { index: i, len: n });
    }
    let before = von_neumann(&analysis.ensemble().states()[i])?;
    let mut after = Nats::ZERO;
    for (j, states) in analysis.conditional_post_states().iter().enumerate() {
        if let Some(state) = &states[i] {
            after = after + analysis.conditional_probs()[i][j] * von_neumann(state)?;
        }
    }
    Ok(before - after)
}

/// `χ = S[ρ] − Σ_i P_i S[ρ_i]`
pub fn holevo_chi(ensemble: &Ensemble) -> Result<Nats> {
    let mut members = Nats::ZERO;
    for (p, s) in ensemble.probs().iter().zip(ensemble.states()) {
        members = members + *p * von_neumann(s)?;
    }
    Ok(von_neumann(&ensemble.ensemble_state())? - members)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrixcore::{ComplexMatrix, C64};
    use crate::qobjects::{apply_measurement, random_instance, Measurement};
    use approx::assert_abs_diff_eq;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn two_state() -> Ensemble {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Ensemble::from_pure_states(vec![0.5, 0.5], &[vec![c(1.0), c(0.0)], vec![c(h), c(h)]]).unwrap()
    }

    #[test]
    fn shannon_examples() {
        assert_eq!(shannon(&[1.0, 0.0]).unwrap(), Nats(0.0));
        assert_abs_diff_eq!(shannon(&[0.5, 0.5]).unwrap().0, LN_2, epsilon = 1e-15);
        // −(2/3)ln(2/3) − (1/3)ln(1/3) = ln 3 − (2/3) ln 2
        let expect = 3f64.ln() - 2.0 / 3.0 * LN_2;
        assert_abs_diff_eq!(shannon(&[2.0 / 3.0, 1.0 / 3.0]).unwrap().0, expect, epsilon = 1e-15);
        assert_abs_diff_eq!(expect, 0.636514, epsilon = 1e-6);
        assert!(matches!(shannon(&[0.5, 0.4]), Err(Error::InvalidDistribution(_))));
        assert!(matches!(shannon(&[1.5, -0.5]), Err(Error::InvalidDistribution(_))));
    }

    #[test]
    fn von_neumann_examples() {
        let pure = DensityOperator::pure(&[c(0.6), C64::new(0.0, 0.8)]).unwrap();
        assert_abs_diff_eq!(von_neumann(&pure).unwrap().0, 0.0, epsilon = 1e-14);
        for n in 1..6 {
            let mixed = DensityOperator::maximally_mixed(n);
            assert_abs_diff_eq!(von_neumann(&mixed).unwrap().0, (n as f64).ln(), epsilon = 1e-14);
        }
        let rho = two_state().ensemble_state();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let expect = entropy_raw(&[(1.0 - r) / 2.0, (1.0 + r) / 2.0]);
        assert_abs_diff_eq!(von_neumann(&rho).unwrap().0, expect, epsilon = 1e-14);
        assert_abs_diff_eq!(expect, 0.4164955, epsilon = 1e-6);
    }

    #[test]
    fn subentropy_of_pure_states_is_exactly_zero() {
        for n in 1..7 {
            let mut spec = vec![0.0; n];
            spec[n - 1] = 1.0;
            assert_eq!(subentropy_of_spectrum(&spec), 0.0);
        }
    }

    #[test]
    fn subentropy_of_maximally_mixed() {
        assert_abs_diff_eq!(
            subentropy(&DensityOperator::maximally_mixed(2)).unwrap().0,
            LN_2 - 0.5,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            subentropy(&DensityOperator::maximally_mixed(3)).unwrap().0,
            3f64.ln() - 5.0 / 6.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn subentropy_matches_two_level_closed_form() {
        // N = 2: Q = −(a² ln a − b² ln b)/(a − b).
        for &a in &[0.9f64, 0.7, 0.55, 0.51] {
            let b = 1.0 - a;
            let closed = -(a * a * a.ln() - b * b * b.ln()) / (a - b);
            assert_abs_diff_eq!(subentropy_of_spectrum(&[a, b]), closed, epsilon = 1e-14);
        }
    }

    #[test]
    fn subentropy_is_continuous_across_the_cluster_threshold() {
        let base = [0.2, 0.3, 0.5];
        let q0 = subentropy_of_spectrum(&base);
        for delta in [1e-9, 5e-8, 2e-7, 1e-6] {
            let q = subentropy_of_spectrum(&[0.2 - delta, 0.3 + delta, 0.5]);
            assert!((q - q0).abs() < 10.0 * delta + 1e-9, "delta {delta}: {q} vs {q0}");
        }
        let deg = subentropy_of_spectrum(&[0.25, 0.25, 0.5]);
        let near = subentropy_of_spectrum(&[0.25 - 1e-9, 0.25 + 1e-9, 0.5]);
        assert!((deg - near).abs() < 1e-6);
    }

    #[test]
    fn mutual_information_examples() {
        let orth = Ensemble::from_pure_states(vec![0.5, 0.5], &[vec![c(1.0), c(0.0)], vec![c(0.0), c(1.0)]]).unwrap();
        let a = apply_measurement(&Measurement::computational_basis(2), &orth).unwrap();
        assert_abs_diff_eq!(mutual_information(&a).0, LN_2, epsilon = 1e-15);

        let a = apply_measurement(&Measurement::identity(2), &two_state()).unwrap();
        assert_abs_diff_eq!(mutual_information(&a).0, 0.0, epsilon = 1e-15);

        let a = apply_measurement(&Measurement::computational_basis(2), &two_state()).unwrap();
        let expect = LN_2 - 0.75 * entropy_raw(&[2.0 / 3.0, 1.0 / 3.0]);
        assert_abs_diff_eq!(mutual_information(&a).0, expect, epsilon = 1e-14);
        assert_abs_diff_eq!(expect, 0.215761, epsilon = 1e-6);
    }

    #[test]
    fn info_gain_examples() {
        let (e, _) = random_instance(3, 3, 2, false, 5).unwrap();
        let a = apply_measurement(&Measurement::computational_basis(3), &e).unwrap();
        let s = von_neumann(&e.ensemble_state()).unwrap();
        assert_abs_diff_eq!(info_gain_f(&a).unwrap().0, s.0, epsilon = 1e-12);

        let a = apply_measurement(&Measurement::computational_basis(2), &two_state()).unwrap();
        assert_abs_diff_eq!(info_gain_f(&a).unwrap().0, 0.4164955, epsilon = 1e-6);
    }

    #[test]
    fn conditional_info_gain_examples() {
        let a = apply_measurement(&Measurement::computational_basis(2), &two_state()).unwrap();
        for i in 0..2 {
            assert_abs_diff_eq!(conditional_info_gain(&a, i).unwrap().0, 0.0, epsilon = 1e-12);
        }
        assert!(matches!(
            conditional_info_gain(&a, 2),
            Err(Error::IndexOutOfRange { index: 2, len: 2 })
        ));

        let (e, _) = random_instance(3, 4, 2, false, 6).unwrap();
        let a = apply_measurement(&Measurement::identity(3), &e).unwrap();
        for i in 0..4 {
            assert_abs_diff_eq!(conditional_info_gain(&a, i).unwrap().0, 0.0, epsilon = 1e-12);
        }

        let mixed = Ensemble::new(
            vec![1.0],
            vec![DensityOperator::new(ComplexMatrix::from_diag(&[0.5, 0.5])).unwrap()],
        )
        .unwrap();
        let a = apply_measurement(&Measurement::computational_basis(2), &mixed).unwrap();
        assert_abs_diff_eq!(conditional_info_gain(&a, 0).unwrap().0, LN_2, epsilon = 1e-14);
    }

    #[test]
    fn holevo_examples() {
        let orth = Ensemble::from_pure_states(vec![0.5, 0.5], &[vec![c(1.0), c(0.0)], vec![c(0.0), c(1.0)]]).unwrap();
        assert_abs_diff_eq!(holevo_chi(&orth).unwrap().0, LN_2, epsilon = 1e-14);

        let (e, _) = random_instance(3, 1, 1, false, 2).unwrap();
        let same = Ensemble::new(vec![0.3, 0.7], vec![e.states()[0].clone(), e.states()[0].clone()]).unwrap();
        assert_abs_diff_eq!(holevo_chi(&same).unwrap().0, 0.0, epsilon = 1e-13);

        assert_abs_diff_eq!(holevo_chi(&two_state()).unwrap().0, 0.4164955, epsilon = 1e-6);
    }

    #[test]
    fn nats_to_bits() {
        assert_abs_diff_eq!(Nats(LN_2).to_bits(), 1.0, epsilon = 1e-15);
    }
}
