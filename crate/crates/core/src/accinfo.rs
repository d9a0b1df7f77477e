//! Lower bounds on accessible information by searching over rank-one POVMs.
//!
//! A candidate is a list of `K` unnormalized vectors `v_j`. With
//! `S = Σ_j v_j v_j†`, the induced POVM is `E_j = S^{+1/2} v_j v_j† S^{+1/2}`,
//! plus the projector onto the kernel of `S` as an extra outcome when the
//! vectors do not span the space. Every candidate is therefore a valid
//! measurement and the search needs no constraints.
//!
//! Values returned here are achieved by explicit measurements, so they are
//! lower bounds on the accessible information and nothing more.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::infomeasures::{entropy_raw, mutual_information, mutual_information_from_likelihoods, Nats};
use crate::matrixcore::{eig_hermitian, ComplexMatrix, C64};
use crate::qobjects::{apply_measurement, Ensemble, Measurement};
use crate::random::{gaussian_vector, trial_rng, StreamRng};

pub const MIN_BUDGET: usize = 100;

const NULL_VECTOR: f64 = 1e-12;
const KERNEL_TOL: f64 = 1e-10;
const INITIAL_STEP: f64 = 0.5;
const FINAL_STEP: f64 = 1e-7;
/// Restart streams live under a key distinct from Monte Carlo trial streams.
const RESTART_KEY: u64 = 0x5eed_acc1;

/// `K` unnormalized vectors defining a rank-one POVM.
#[derive(Clone, Debug, PartialEq)]
pub struct PovmParams {
    vectors: Vec<Vec<C64>>,
}

/// Rank-one POVM elements `w_j w_j†` and the kernel projector of `S`, if any.
struct InducedPovm {
    dim: usize,
    w: Vec<Vec<C64>>,
    complement: Option<ComplexMatrix>,
}

impl PovmParams {
    pub fn new(vectors: Vec<Vec<C64>>) -> Result<Self> {
        let dim = vectors.first().map_or(0, Vec::len);
        if dim == 0 || vectors.iter().any(|v| v.len() != dim) {
            return Err(Error::InvalidArgument("POVM vectors must share a positive length".into()));
        }
        if vectors.iter().flatten().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        if !vectors.iter().any(|v| crate::matrixcore::vector_norm(v) > NULL_VECTOR) {
            return Err(Error::ZeroOperator);
        }
        Ok(Self { vectors })
    }

    pub fn random<R: Rng + ?Sized>(dim: usize, k: usize, rng: &mut R) -> Self {
        Self {
            vectors: (0..k).map(|_| gaussian_vector(dim, rng)).collect(),
        }
    }

    pub fn vectors(&self) -> &[Vec<C64>] {
        &self.vectors
    }

    pub fn dim(&self) -> usize {
        self.vectors[0].len()
    }

    fn induced(&self) -> Result<InducedPovm> {
        let dim = self.dim();
        let mut s = ComplexMatrix::zeros(dim);
        for v in &self.vectors {
            s = &s + &ComplexMatrix::projector(v);
        }
        let es = eig_hermitian(&s)?;
        let max = es.eigenvalues.last().copied().unwrap_or(0.0);
        if max <= 0.0 {
            return Err(Error::ZeroOperator);
        }
        let kept = |l: f64| l > KERNEL_TOL * max;
        let root = es.map_spectrum(|l| if kept(l) { 1.0 / l.sqrt() } else { 0.0 });
        let complement = if es.eigenvalues.iter().all(|&l| kept(l)) {
            None
        } else {
            Some(es.map_spectrum(|l| if kept(l) { 0.0 } else { 1.0 }))
        };
        Ok(InducedPovm {
            dim,
            w: self.vectors.iter().map(|v| root.apply(v)).collect(),
            complement,
        })
    }

    /// The induced measurement with Kraus operators `|w_j⟩⟨w_j| / ‖w_j‖`;
    /// null vectors are dropped.
    pub fn to_measurement(&self) -> Result<Measurement> {
        let povm = self.induced()?;
        let mut kraus = Vec::with_capacity(povm.w.len() + 1);
        for w in &povm.w {
            let norm = crate::matrixcore::vector_norm(w);
            if norm > NULL_VECTOR {
                kraus.push(ComplexMatrix::projector(w).scale(1.0 / norm));
            }
        }
        if let Some(p) = povm.complement {
            kraus.push(p);
        }
        debug_assert!(kraus.iter().all(|a| a.dim() == povm.dim));
        Measurement::new(kraus)
    }
}

/// Likelihood tables `Q(j|i) = Tr[E_j ρ_i]` for a fixed ensemble.
struct Objective<'a> {
    ensemble: &'a Ensemble,
}

impl Objective<'_> {
    fn value(&self, params: &PovmParams) -> f64 {
        let Ok(povm) = params.induced() else {
            return f64::NEG_INFINITY;
        };
        let likelihoods: Vec<Vec<f64>> = self
            .ensemble
            .states()
            .iter()
            .map(|rho| {
                let mut row: Vec<f64> = povm.w.iter().map(|w| rho.matrix().expectation(w).max(0.0)).collect();
                if let Some(p) = &povm.complement {
                    row.push(p.trace_product(rho.matrix()).re.max(0.0));
                }
                row
            })
            .collect();
        mutual_information_from_likelihoods(self.ensemble.probs(), &likelihoods).0
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OptResult {
    pub best_value: Nats,
    pub best_measurement: Measurement,
    /// `(evaluation index, best value so far)` at every improvement, with
    /// restarts laid end to end in restart order.
    pub trace: Vec<(usize, Nats)>,
    pub restarts: usize,
    pub seed: u64,
}

struct RestartOutcome {
    best: f64,
    params: PovmParams,
    /// `(local evaluation index, value)` at each improvement.
    improvements: Vec<(usize, f64)>,
    evaluations: usize,
}

/// Coordinate search from a random start. The trajectory depends only on
/// `(seed, restart)`; `budget` merely truncates it.
fn run_restart(objective: &Objective, dim: usize, k: usize, budget: usize, rng: &mut StreamRng) -> RestartOutcome {
    let mut params = PovmParams::random(dim, k, rng);
    let mut best = objective.value(&params);
    let mut evaluations = 1;
    let mut improvements = vec![(0, best)];
    let mut step = INITIAL_STEP;
    let coords = k * dim * 2;

    'search: while step >= FINAL_STEP {
        let mut improved = false;
        for c in 0..coords {
            let (j, rest) = (c / (2 * dim), c % (2 * dim));
            let (entry, imag) = (rest / 2, rest % 2 == 1);
            for sign in [1.0, -1.0] {
                if evaluations >= budget {
                    break 'search;
                }
                let delta = if imag { C64::new(0.0, sign * step) } else { C64::new(sign * step, 0.0) };
                let mut trial = params.clone();
                trial.vectors[j][entry] += delta;
                let v = objective.value(&trial);
                evaluations += 1;
                if v > best {
                    best = v;
                    params = trial;
                    improved = true;
                    improvements.push((evaluations - 1, v));
                    break;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    RestartOutcome {
        best,
        params,
        improvements,
        evaluations,
    }
}

/// Multi-start coordinate search for the measurement maximizing `ΔI_i`.
///
/// `budget` counts objective evaluations and is split evenly across restarts
/// (earlier restarts take the remainder). The winner is the largest value,
/// ties going to the lower restart index; its value is recomputed from the
/// explicit measurement through the full outcome analysis.
pub fn maximize_mutual_info(
    ensemble: &Ensemble,
    k: usize,
    budget: usize,
    restarts: usize,
    seed: u64,
) -> Result<OptResult> {
    if budget < MIN_BUDGET {
        return Err(Error::BudgetTooSmall {
            got: budget,
            min: MIN_BUDGET,
        });
    }
    if k < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 outcomes, got {k}")));
    }
    if restarts == 0 || restarts > budget {
        return Err(Error::InvalidArgument(format!("restarts must be in 1..={budget}, got {restarts}")));
    }
    let dim = ensemble.dim();
    let objective = Objective { ensemble };
    let outcomes: Vec<RestartOutcome> = (0..restarts)
        .into_par_iter()
        .map(|r| {
            let share = budget / restarts + usize::from(r < budget % restarts);
            let mut rng = trial_rng(seed ^ RESTART_KEY, r as u64);
            run_restart(&objective, dim, k, share, &mut rng)
        })
        .collect();

    let mut winner = 0;
    for (r, o) in outcomes.iter().enumerate() {
        if o.best > outcomes[winner].best {
            winner = r;
        }
    }
    let mut trace = Vec::new();
    let mut offset = 0;
    let mut running = f64::NEG_INFINITY;
    for o in &outcomes {
        for &(i, v) in &o.improvements {
            if v > running {
                running = v;
                trace.push((offset + i, Nats(v)));
            }
        }
        offset += o.evaluations;
    }

    let best_measurement = outcomes[winner].params.to_measurement()?;
    let analysis = apply_measurement(&best_measurement, ensemble)?;
    let best_value = Nats(mutual_information(&analysis).0.max(0.0));
    Ok(OptResult {
        best_value,
        best_measurement,
        trace,
        restarts,
        seed,
    })
}

/// Default outcome count `N²`.
pub fn default_outcomes(dim: usize) -> usize {
    (dim * dim).max(2)
}

/// Default grid size for [`two_state_reference`].
pub const REFERENCE_GRID: usize = 10_000;

/// Mutual information of the projective measurement at angle `theta` on the
/// equiprobable pair `cos a |0⟩ ± sin a |1⟩`.
fn two_state_projective(a: f64, theta: f64) -> f64 {
    let p_plus = (theta - a).cos().powi(2);
    let p_minus = (theta + a).cos().powi(2);
    let marginal = [(p_plus + p_minus) / 2.0, 1.0 - (p_plus + p_minus) / 2.0];
    entropy_raw(&marginal) - 0.5 * (entropy_raw(&[p_plus, 1.0 - p_plus]) + entropy_raw(&[p_minus, 1.0 - p_minus]))
}

/// Best projective measurement for two equiprobable pure states with overlap
/// modulus `s`, found by a uniform angle sweep and golden-section refinement.
pub fn two_state_reference(s: f64) -> Result<Nats> {
    two_state_reference_with_grid(s, REFERENCE_GRID)
}

pub fn two_state_reference_with_grid(s: f64, grid: usize) -> Result<Nats> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::InvalidArgument(format!("overlap {s} outside [0, 1]")));
    }
    if grid < 3 {
        return Err(Error::InvalidArgument(format!("grid of {grid} points")));
    }
    let a = s.acos() / 2.0;
    let f = |t: f64| two_state_projective(a, t);
    let h = std::f64::consts::PI / grid as f64;
    let (mut best_t, mut best_v) = (0.0, f(0.0));
    for i in 1..grid {
        let t = i as f64 * h;
        let v = f(t);
        if v > best_v {
            best_t = t;
            best_v = v;
        }
    }
    let (mut lo, mut hi) = (best_t - h, best_t + h);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..100 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        }
    }
    Ok(Nats(best_v.max(f1).max(f2).max(0.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::infomeasures::holevo_chi;
    use crate::qobjects::DensityOperator;
    use crate::random::seeded_rng;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_8, LN_2};

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn pair(s: f64) -> Ensemble {
        let a = s.acos() / 2.0;
        Ensemble::from_pure_states(
            vec![0.5, 0.5],
            &[vec![c(a.cos()), c(a.sin())], vec![c(a.cos()), c(-a.sin())]],
        )
        .unwrap()
    }

    #[test]
    fn induced_povm_is_complete() {
        let mut rng = seeded_rng(1);
        for dim in 2..5 {
            for k in [1, dim - 1, dim, dim * dim] {
                let p = PovmParams::random(dim, k, &mut rng);
                let m = p.to_measurement().unwrap();
                assert!(m.completeness_residual() < 1e-10, "dim {dim} k {k}");
                let expected = if k < dim { k + 1 } else { k };
                assert_eq!(m.len(), expected);
            }
        }
    }

    #[test]
    fn params_validation() {
        assert!(PovmParams::new(vec![]).is_err());
        assert!(PovmParams::new(vec![vec![c(0.0), c(0.0)]]).is_err());
        assert!(PovmParams::new(vec![vec![c(1.0)], vec![c(1.0), c(0.0)]]).is_err());
        assert!(PovmParams::new(vec![vec![c(1.0), c(0.0)]]).is_ok());
    }

    #[test]
    fn objective_matches_full_analysis() {
        let mut rng = seeded_rng(2);
        let e = crate::qobjects::random_ensemble(3, 4, false, &mut rng).unwrap();
        let p = PovmParams::random(3, 5, &mut rng);
        let fast = Objective { ensemble: &e }.value(&p);
        let full = mutual_information(&apply_measurement(&p.to_measurement().unwrap(), &e).unwrap()).0;
        assert_abs_diff_eq!(fast, full, epsilon = 1e-12);
    }

    #[test]
    fn orthogonal_pair_reaches_ln2() {
        let r = maximize_mutual_info(&pair(0.0), 4, 4000, 4, 1).unwrap();
        assert!(r.best_value.0 >= LN_2 - 1e-6, "{:?}", r.best_value);
        assert!(r.best_measurement.completeness_residual() < 1e-10);
    }

    #[test]
    fn identical_states_give_zero() {
        let rho = DensityOperator::pure(&[c(0.6), C64::new(0.0, 0.8)]).unwrap();
        let e = Ensemble::new(vec![0.3, 0.7], vec![rho.clone(), rho]).unwrap();
        let r = maximize_mutual_info(&e, 4, 500, 2, 3).unwrap();
        assert!(r.best_value.0.abs() <= 1e-9);
    }

    #[test]
    fn matches_projective_sweep() {
        let s = FRAC_PI_8.cos();
        let reference = two_state_reference(s).unwrap().0;
        let r = maximize_mutual_info(&pair(s), 4, 20_000, 4, 5).unwrap();
        assert!((r.best_value.0 - reference).abs() <= 1e-4, "{:?} vs {reference}", r.best_value);
    }

    #[test]
    fn bounded_by_holevo() {
        let mut rng = seeded_rng(6);
        let e = crate::qobjects::random_ensemble(2, 3, false, &mut rng).unwrap();
        let r = maximize_mutual_info(&e, 4, 2000, 2, 7).unwrap();
        assert!(r.best_value.0 <= holevo_chi(&e).unwrap().0 + 1e-8);
    }

    #[test]
    fn trace_is_nondecreasing_and_deterministic() {
        let e = pair(0.5);
        let a = maximize_mutual_info(&e, 4, 1000, 3, 9).unwrap();
        let b = maximize_mutual_info(&e, 4, 1000, 3, 9).unwrap();
        assert_eq!(a.best_value, b.best_value);
        assert_eq!(a.trace, b.trace);
        assert!(a.trace.windows(2).all(|w| w[0].1 .0 < w[1].1 .0 && w[0].0 < w[1].0));
    }

    #[test]
    fn doubling_budget_never_hurts() {
        let e = pair(0.3);
        let mut prev = f64::NEG_INFINITY;
        for budget in [100, 200, 400, 800] {
            let v = maximize_mutual_info(&e, 4, budget, 3, 11).unwrap().best_value.0;
            assert!(v >= prev - 1e-12);
            prev = v;
        }
    }

    #[test]
    fn argument_errors() {
        let e = pair(0.5);
        assert_eq!(
            maximize_mutual_info(&e, 4, 99, 1, 0).unwrap_err(),
            Error::BudgetTooSmall { got: 99, min: 100 }
        );
        assert!(maximize_mutual_info(&e, 1, 1000, 1, 0).is_err());
        assert!(maximize_mutual_info(&e, 4, 1000, 0, 0).is_err());
    }

    #[test]
    fn two_state_reference_examples() {
        assert_abs_diff_eq!(two_state_reference(0.0).unwrap().0, LN_2, epsilon = 1e-12);
        assert_abs_diff_eq!(two_state_reference(1.0).unwrap().0, 0.0, epsilon = 1e-12);
        let s = 0.5f64.sqrt();
        let coarse = two_state_reference(s).unwrap().0;
        let fine = two_state_reference_with_grid(s, 4 * REFERENCE_GRID).unwrap().0;
        assert!((coarse - fine).abs() <= 1e-6);
        assert!(two_state_reference(1.5).is_err());
    }

    #[test]
    fn two_state_reference_matches_symmetric_measurement() {
        for s in [0.1, 0.5, FRAC_PI_8.cos(), 0.95] {
            let p = (1.0 - (1.0 - s * s).sqrt()) / 2.0;
            let closed = LN_2 - entropy_raw(&[p, 1.0 - p]);
            assert_abs_diff_eq!(two_state_reference(s).unwrap().0, closed, epsilon = 1e-10);
        }
    }
}
