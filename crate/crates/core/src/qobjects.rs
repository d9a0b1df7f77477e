//! Density operators, ensembles, Kraus measurements and outcome statistics.
//!
//! [`apply_measurement`] takes an ensemble `{P_i, ρ_i}` and a measurement
//! `{A_j}` and tabulates everything downstream quantities need: outcome
//! probabilities `Q_j`, likelihoods `Q(j|i)`, posteriors `P(i|j)`, final states
//! `ρ'_j = A_j ρ A_j† / Q_j`, conditional final states `ρ'_{ji}` and the
//! posterior ensembles `ε_j = {P(i|j), ρ'_{ji}}`. [`coarse_grain`] does the same
//! for inefficient measurements, where only the group containing the outcome
//! is learned.

use std::sync::OnceLock;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrixcore::{
    eigvals_hermitian, scale_floor, sqrt_psd, vector_norm, ComplexMatrix, C64, HERMITIAN_TOL,
    PSD_TOL,
};
use crate::random::{ginibre, haar_unitary, haar_vector, seeded_rng, simplex_point};

/// Outcomes (and conditional outcomes) below this probability carry no state.
pub const ZERO_PROB: f64 = 1e-12;
/// Maximum `‖Σ A†A − I‖_F` accepted for a measurement.
pub const COMPLETENESS_TOL: f64 = 1e-8;
/// Tolerance on `Σ P_i = 1`.
pub const PROB_SUM_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-8;
const PURITY_TOL: f64 = 1e-8;

/// A positive semidefinite, unit-trace operator.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "ComplexMatrix", into = "ComplexMatrix")]
pub struct DensityOperator {
    matrix: ComplexMatrix,
    spectrum: OnceLock<Vec<f64>>,
}

impl PartialEq for DensityOperator {
    fn eq(&self, other: &Self) -> bool {
        self.matrix == other.matrix
    }
}

impl TryFrom<ComplexMatrix> for DensityOperator {
    type Error = Error;
    fn try_from(m: ComplexMatrix) -> Result<Self> {
        Self::new(m)
    }
}

impl From<DensityOperator> for ComplexMatrix {
    fn from(d: DensityOperator) -> Self {
        d.matrix
    }
}

impl DensityOperator {
    /// Validates Hermiticity, positivity (roundoff clipped) and unit trace.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_finite() {
            return Err(Error::NonFinite);
        }
        let r = matrix.hermiticity_residual();
        if r > HERMITIAN_TOL * scale_floor(matrix.frobenius_norm()) {
            return Err(Error::NotHermitian(r));
        }
        let tr = matrix.trace().re;
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidTrace(tr));
        }
        let matrix = matrix.hermitian_part();
        let spectrum = eigvals_hermitian(&matrix)?;
        if spectrum[0] < -PSD_TOL {
            return Err(Error::NotPsd(spectrum[0]));
        }
        Ok(Self {
            matrix,
            spectrum: OnceLock::from(spectrum),
        })
    }

    /// `|ψ⟩⟨ψ| / ⟨ψ|ψ⟩`
    pub fn pure(psi: &[C64]) -> Result<Self> {
        let n = vector_norm(psi);
        if !n.is_finite() || n <= 0.0 {
            return Err(Error::InvalidArgument("state vector has zero norm".into()));
        }
        let v: Vec<C64> = psi.iter().map(|z| z / n).collect();
        Ok(Self::from_unnormalized(&ComplexMatrix::projector(&v)))
    }

    /// `I / N`
    pub fn maximally_mixed(dim: usize) -> Self {
        Self::from_unnormalized(&ComplexMatrix::identity(dim))
    }

    /// Normalizes a PSD operator (Hermitian part, divided by its trace) without
    /// validation. For operators produced internally by CP maps.
    pub(crate) fn from_unnormalized(m: &ComplexMatrix) -> Self {
        let h = m.hermitian_part();
        let tr = h.trace().re;
        Self {
            matrix: h.scale(1.0 / tr),
            spectrum: OnceLock::new(),
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Raw eigenvalues in ascending order (not clipped).
    pub fn spectrum(&self) -> &[f64] {
        self.spectrum.get_or_init(|| {
            eigvals_hermitian(&self.matrix).expect("density operator is Hermitian by construction")
        })
    }

    pub fn is_pure(&self) -> bool {
        self.spectrum().last().copied().unwrap_or(0.0) >= 1.0 - PURITY_TOL
    }
}

/// A probability-weighted list of states `{P_i, ρ_i}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "EnsembleJson", into = "EnsembleJson")]
pub struct Ensemble {
    probs: Vec<f64>,
    states: Vec<DensityOperator>,
}

#[derive(Serialize, Deserialize)]
struct EnsembleJson {
    probs: Vec<f64>,
    states: Vec<DensityOperator>,
}

impl TryFrom<EnsembleJson> for Ensemble {
    type Error = Error;
    fn try_from(j: EnsembleJson) -> Result<Self> {
        Self::new(j.probs, j.states)
    }
}

impl From<Ensemble> for EnsembleJson {
    fn from(e: Ensemble) -> Self {
        EnsembleJson {
            probs: e.probs,
            states: e.states,
        }
    }
}

pub(crate) fn check_distribution(p: &[f64], tol: f64) -> Result<()> {
    if p.is_empty() {
        return Err(Error::InvalidDistribution("empty".into()));
    }
    if let Some(x) = p.iter().find(|x| !x.is_finite() || **x < 0.0) {
        return Err(Error::InvalidDistribution(format!("entry {x}")));
    }
    let s: f64 = p.iter().sum();
    if (s - 1.0).abs() > tol {
        return Err(Error::InvalidDistribution(format!("sums to {s}")));
    }
    Ok(())
}

impl Ensemble {
    pub fn new(probs: Vec<f64>, states: Vec<DensityOperator>) -> Result<Self> {
        if probs.len() != states.len() {
            return Err(Error::LengthMismatch(probs.len(), states.len()));
        }
        check_distribution(&probs, PROB_SUM_TOL)?;
        let dim = states[0].dim();
        if let Some(s) = states.iter().find(|s| s.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: s.dim(),
            });
        }
        Ok(Self { probs, states })
    }

    pub fn from_pure_states(probs: Vec<f64>, vectors: &[Vec<C64>]) -> Result<Self> {
        let states = vectors
            .iter()
            .map(|v| DensityOperator::pure(v))
            .collect::<Result<Vec<_>>>()?;
        Self::new(probs, states)
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn states(&self) -> &[DensityOperator] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    /// True iff every member state is pure.
    pub fn is_pure(&self) -> bool {
        self.states.iter().all(DensityOperator::is_pure)
    }

    /// `ρ = Σ_i P_i ρ_i`
    pub fn ensemble_state(&self) -> DensityOperator {
        let mut acc = ComplexMatrix::zeros(self.dim());
        for (p, s) in self.probs.iter().zip(&self.states) {
            acc = &acc + &s.matrix().scale(*p);
        }
        DensityOperator::from_unnormalized(&acc)
    }
}

/// `ρ = Σ_i P_i ρ_i`
pub fn ensemble_state(ensemble: &Ensemble) -> DensityOperator {
    ensemble.ensemble_state()
}

/// Which parent measurement an outcome came from, and its index there.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OutcomeLabel {
    pub parent: usize,
    pub index: usize,
}

/// A set of Kraus operators `A_j` with `Σ A_j†A_j = I`, optionally partitioned
/// into groups for an inefficient readout.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MeasurementJson", into = "MeasurementJson")]
pub struct Measurement {
    kraus: Vec<ComplexMatrix>,
    groups: Option<Vec<Vec<usize>>>,
    labels: Vec<OutcomeLabel>,
}

#[derive(Serialize, Deserialize)]
struct MeasurementJson {
    kraus: Vec<ComplexMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    groups: Option<Vec<Vec<usize>>>,
}

impl TryFrom<MeasurementJson> for Measurement {
    type Error = Error;
    fn try_from(j: MeasurementJson) -> Result<Self> {
        let m = Self::new(j.kraus)?;
        match j.groups {
            Some(g) => m.with_groups(g),
            None => Ok(m),
        }
    }
}

impl From<Measurement> for MeasurementJson {
    fn from(m: Measurement) -> Self {
        MeasurementJson {
            kraus: m.kraus,
            groups: m.groups,
        }
    }
}

fn completeness_residual(kraus: &[ComplexMatrix]) -> f64 {
    let n = kraus[0].dim();
    let mut acc = ComplexMatrix::zeros(n);
    for a in kraus {
        acc = &acc + &(&a.adjoint() * a);
    }
    (&acc - &ComplexMatrix::identity(n)).frobenius_norm()
}

impl Measurement {
    pub fn new(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        if kraus.is_empty() {
            return Err(Error::InvalidArgument("measurement has no operators".into()));
        }
        let dim = kraus[0].dim();
        for a in &kraus {
            if a.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: a.dim(),
                });
            }
            if !a.is_finite() {
                return Err(Error::NonFinite);
            }
        }
        let r = completeness_residual(&kraus);
        if r.is_nan() || r > COMPLETENESS_TOL {
            return Err(Error::Incomplete(r));
        }
        let labels = (0..kraus.len())
            .map(|index| OutcomeLabel { parent: 0, index })
            .collect();
        Ok(Self {
            kraus,
            groups: None,
            labels,
        })
    }

    /// Attaches an outcome grouping. Every outcome index must appear exactly once.
    pub fn with_groups(mut self, groups: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; self.kraus.len()];
        for &j in groups.iter().flatten() {
            match seen.get_mut(j) {
                None => {
                    return Err(Error::InvalidGrouping(format!(
                        "index {j} exceeds outcome count {}",
                        self.kraus.len()
                    )))
                }
                Some(true) => return Err(Error::InvalidGrouping(format!("index {j} repeated"))),
                Some(s) => *s = true,
            }
        }
        if let Some(j) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidGrouping(format!("index {j} not covered")));
        }
        self.groups = Some(groups);
        Ok(self)
    }

    /// Drops the grouping, giving the efficient measurement.
    pub fn efficient(mut self) -> Self {
        self.groups = None;
        self
    }

    /// Groups outcomes that share the same parent-local index, ordered by index.
    pub fn group_by_label_index(self) -> Result<Self> {
        let mut keys: Vec<usize> = self.labels.iter().map(|l| l.index).collect();
        keys.sort_unstable();
        keys.dedup();
        let groups = keys
            .iter()
            .map(|&k| {
                (0..self.labels.len())
                    .filter(|&j| self.labels[j].index == k)
                    .collect()
            })
            .collect();
        self.with_groups(groups)
    }

    /// Rank-one projectors onto an orthonormal basis.
    pub fn projective(basis: &[Vec<C64>]) -> Result<Self> {
        let kraus = basis
            .iter()
            .map(|v| {
                let n = vector_norm(v);
                let u: Vec<C64> = v.iter().map(|z| z / n).collect();
                ComplexMatrix::projector(&u)
            })
            .collect();
        Self::new(kraus)
    }

    pub fn computational_basis(dim: usize) -> Self {
        let kraus = (0..dim)
            .map(|k| {
                let mut d = vec![0.0; dim];
                d[k] = 1.0;
                ComplexMatrix::from_diag(&d)
            })
            .collect();
        Self::new(kraus).expect("basis projectors are complete")
    }

    /// The single-outcome measurement `{I}`.
    pub fn identity(dim: usize) -> Self {
        Self::new(vec![ComplexMatrix::identity(dim)]).expect("identity is complete")
    }

    /// Kraus operators `√E_j` for a list of POVM elements.
    pub fn from_povm(elements: &[ComplexMatrix]) -> Result<Self> {
        let kraus = elements.iter().map(sqrt_psd).collect::<Result<Vec<_>>>()?;
        Self::new(kraus)
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn groups(&self) -> Option<&[Vec<usize>]> {
        self.groups.as_deref()
    }

    pub fn labels(&self) -> &[OutcomeLabel] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.kraus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kraus.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.kraus[0].dim()
    }

    pub fn is_efficient(&self) -> bool {
        self.groups.is_none()
    }

    /// `E_j = A_j† A_j`
    pub fn povm_elements(&self) -> Vec<ComplexMatrix> {
        self.kraus.iter().map(|a| &a.adjoint() * a).collect()
    }

    /// `‖Σ_j A_j†A_j − I‖_F`
    pub fn completeness_residual(&self) -> f64 {
        completeness_residual(&self.kraus)
    }
}

/// Union of `{√λ A_j}` and `{√(1−λ) B_k}`. Outcome labels keep the parent
/// (0 for `first`, 1 for `second`) and the parent-local index; operators
/// with zero weight are dropped.
pub fn mix_measurements(first: &Measurement, second: &Measurement, lambda: f64) -> Result<Measurement> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::InvalidArgument(format!("mixing weight {lambda}")));
    }
    if first.dim() != second.dim() {
        return Err(Error::DimensionMismatch {
            expected: first.dim(),
            got: second.dim(),
        });
    }
    let mut kraus = Vec::new();
    let mut labels = Vec::new();
    for (parent, (m, w)) in [(first, lambda), (second, 1.0 - lambda)].into_iter().enumerate() {
        if w == 0.0 {
            continue;
        }
        for (index, a) in m.kraus.iter().enumerate() {
            kraus.push(a.scale(w.sqrt()));
            labels.push(OutcomeLabel { parent, index });
        }
    }
    let mut out = Measurement::new(kraus)?;
    out.labels = labels;
    Ok(out)
}

/// Outcome statistics of a measurement applied to an ensemble.
///
/// Index conventions: `conditional_probs[i][j] = Q(j|i)`,
/// `posteriors[j][i] = P(i|j)`, `conditional_post_states[j][i] = ρ'_{ji}`.
/// Outcomes with `Q_j < ZERO_PROB` keep their slot but have no final state,
/// no posterior ensemble and all-zero posteriors.
#[derive(Clone, Debug)]
pub struct OutcomeAnalysis {
    ensemble: Ensemble,
    ensemble_state: DensityOperator,
    efficient: bool,
    outcome_probs: Vec<f64>,
    conditional_probs: Vec<Vec<f64>>,
    posteriors: Vec<Vec<f64>>,
    post_operators: Vec<ComplexMatrix>,
    post_states: Vec<Option<DensityOperator>>,
    conditional_post_states: Vec<Vec<Option<DensityOperator>>>,
    posterior_ensembles: Vec<Option<Ensemble>>,
}

impl OutcomeAnalysis {
    pub fn ensemble(&self) -> &Ensemble {
        &self.ensemble
    }

    /// `ρ`
    pub fn ensemble_state(&self) -> &DensityOperator {
        &self.ensemble_state
    }

    /// False for coarse-grained (inefficient) analyses.
    pub fn is_efficient(&self) -> bool {
        self.efficient
    }

    pub fn num_outcomes(&self) -> usize {
        self.outcome_probs.len()
    }

    /// `Q_j`
    pub fn outcome_probs(&self) -> &[f64] {
        &self.outcome_probs
    }

    /// `Q(j|i)`, indexed `[i][j]`.
    pub fn conditional_probs(&self) -> &[Vec<f64>] {
        &self.conditional_probs
    }

    /// `P(i|j)`, indexed `[j][i]`.
    pub fn posteriors(&self) -> &[Vec<f64>] {
        &self.posteriors
    }

    /// Unnormalized final operators `Q_j ρ'_j = Σ_{l∈j} A_l ρ A_l†`.
    pub fn post_operators(&self) -> &[ComplexMatrix] {
        &self.post_operators
    }

    /// `ρ'_j` (or `ρ̃_k` for coarse analyses).
    pub fn post_states(&self) -> &[Option<DensityOperator>] {
        &self.post_states
    }

    /// `ρ'_{ji}`, indexed `[j][i]`.
    pub fn conditional_post_states(&self) -> &[Vec<Option<DensityOperator>>] {
        &self.conditional_post_states
    }

    /// `ε_j = {P(i|j), ρ'_{ji}}` over the members that can produce outcome `j`.
    pub fn posterior_ensembles(&self) -> &[Option<Ensemble>] {
        &self.posterior_ensembles
    }
}

fn analyze(
    kraus: &[ComplexMatrix],
    groups: &[Vec<usize>],
    ensemble: &Ensemble,
    efficient: bool,
) -> Result<OutcomeAnalysis> {
    let dim = ensemble.dim();
    if kraus[0].dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: kraus[0].dim(),
        });
    }
    let rho = ensemble.ensemble_state();
    let adjoints: Vec<ComplexMatrix> = kraus.iter().map(ComplexMatrix::adjoint).collect();
    let channel = |members: &[usize], x: &ComplexMatrix| {
        let mut acc = ComplexMatrix::zeros(dim);
        for &l in members {
            acc = &acc + &(&(&kraus[l] * x) * &adjoints[l]);
        }
        acc
    };

    let n_states = ensemble.len();
    let n_out = groups.len();
    let mut conditional_probs = vec![vec![0.0; n_out]; n_states];
    let mut outcome_probs = Vec::with_capacity(n_out);
    let mut post_operators = Vec::with_capacity(n_out);
    let mut post_states = Vec::with_capacity(n_out);
    let mut conditional_post_states = Vec::with_capacity(n_out);

    for (k, members) in groups.iter().enumerate() {
        let y = channel(members, rho.matrix());
        let q = y.trace().re.max(0.0);
        post_states.push((q >= ZERO_PROB).then(|| DensityOperator::from_unnormalized(&y)));
        outcome_probs.push(q);
        post_operators.push(y);

        let mut row = Vec::with_capacity(n_states);
        for (i, state) in ensemble.states().iter().enumerate() {
            let x = channel(members, state.matrix());
            let qi = x.trace().re.max(0.0);
            conditional_probs[i][k] = qi;
            row.push((qi >= ZERO_PROB).then(|| DensityOperator::from_unnormalized(&x)));
        }
        conditional_post_states.push(row);
    }

    let posteriors: Vec<Vec<f64>> = (0..n_out)
        .map(|k| {
            let q = outcome_probs[k];
            (0..n_states)
                .map(|i| {
                    if q >= ZERO_PROB {
                        ensemble.probs()[i] * conditional_probs[i][k] / q
                    } else {
                        0.0
                    }
                })
                .collect()
        })
        .collect();

    let posterior_ensembles = (0..n_out)
        .map(|k| {
            if outcome_probs[k] < ZERO_PROB {
                return None;
            }
            let (probs, states): (Vec<f64>, Vec<DensityOperator>) = (0..n_states)
                .filter_map(|i| {
                    let p = posteriors[k][i];
                    let s = conditional_post_states[k][i].as_ref()?;
                    (p > 0.0).then(|| (p, s.clone()))
                })
                .unzip();
            let total: f64 = probs.iter().sum();
            if total <= 0.0 {
                return None;
            }
            Ensemble::new(probs.iter().map(|p| p / total).collect(), states).ok()
        })
        .collect();

    Ok(OutcomeAnalysis {
        ensemble: ensemble.clone(),
        ensemble_state: rho,
        efficient,
        outcome_probs,
        conditional_probs,
        posteriors,
        post_operators,
        post_states,
        conditional_post_states,
        posterior_ensembles,
    })
}

/// Applies an efficient measurement to an ensemble.
pub fn apply_measurement(measurement: &Measurement, ensemble: &Ensemble) -> Result<OutcomeAnalysis> {
    if !measurement.is_efficient() {
        return Err(Error::NotEfficient);
    }
    let singletons: Vec<Vec<usize>> = (0..measurement.len()).map(|j| vec![j]).collect();
    analyze(measurement.kraus(), &singletons, ensemble, true)
}

/// Applies an inefficient measurement: outcome `k` is the group, with final
/// state `ρ̃_k = Σ_{l∈k} A_l ρ A_l† / Q_k`.
pub fn coarse_grain(measurement: &Measurement, ensemble: &Ensemble) -> Result<OutcomeAnalysis> {
    let groups = measurement.groups().ok_or(Error::MissingGrouping)?;
    if let Some(k) = groups.iter().position(Vec::is_empty) {
        return Err(Error::EmptyGroup(k));
    }
    analyze(measurement.kraus(), groups, ensemble, false)
}

/// Random full-rank mixed state `GG†/Tr[GG†]`, `G` Ginibre.
pub fn random_mixed_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DensityOperator {
    let g = ginibre(dim, rng);
    DensityOperator::from_unnormalized(&(&g * &g.adjoint()))
}

/// Random measurement with `n_outcomes` operators: random PSD pieces `T_j`
/// (ranks drawn in `1..=dim`, total rank at least `dim`) normalized as
/// `E_j = S^{-1/2} T_j S^{-1/2}` with `S = Σ T_j`, and Kraus operators
/// `A_j = W_j √E_j` for Haar-random `W_j`.
pub fn random_measurement<R: Rng + ?Sized>(
    dim: usize,
    n_outcomes: usize,
    rng: &mut R,
) -> Result<Measurement> {
    if dim < 1 || n_outcomes < 1 {
        return Err(Error::InvalidArgument("empty measurement".into()));
    }
    let mut ranks: Vec<usize> = (0..n_outcomes).map(|_| rng.random_range(1..=dim)).collect();
    let total: usize = ranks.iter().sum();
    if total < dim {
        let last = ranks.len() - 1;
        ranks[last] = (ranks[last] + dim - total).min(dim);
    }
    let pieces: Vec<ComplexMatrix> = ranks
        .iter()
        .map(|&r| {
            let g = ginibre(dim, rng);
            // Keep r Ginibre columns.
            let g = ComplexMatrix::from_fn(dim, |i, j| if j < r { g[(i, j)] } else { C64::new(0.0, 0.0) });
            &g * &g.adjoint()
        })
        .collect();
    let mut s = ComplexMatrix::zeros(dim);
    for p in &pieces {
        s = &s + p;
    }
    let s_inv_half = crate::matrixcore::inv_sqrt_psd(&s, 0.0)?;
    let kraus = pieces
        .iter()
        .map(|p| {
            let e = s_inv_half.conjugate(p);
            let w = haar_unitary(dim, rng);
            Ok(&w * &sqrt_psd(&e.hermitian_part())?)
        })
        .collect::<Result<Vec<_>>>()?;
    Measurement::new(kraus)
}

/// Random ensemble: Haar pure states or Ginibre mixed states, with
/// probabilities uniform on the simplex.
pub fn random_ensemble<R: Rng + ?Sized>(
    dim: usize,
    n_states: usize,
    pure: bool,
    rng: &mut R,
) -> Result<Ensemble> {
    let probs = simplex_point(n_states, rng);
    let states = (0..n_states)
        .map(|_| {
            if pure {
                DensityOperator::pure(&haar_vector(dim, rng))
            } else {
                Ok(random_mixed_state(dim, rng))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ensemble::new(probs, states)
}

/// A seeded random (ensemble, measurement) pair.
pub fn random_instance(
    dim: usize,
    n_states: usize,
    n_outcomes: usize,
    pure: bool,
    seed: u64,
) -> Result<(Ensemble, Measurement)> {
    if dim < 2 || n_states < 1 || n_outcomes < 1 {
        return Err(Error::InvalidArgument(format!(
            "random instance needs dim >= 2, n_states >= 1, n_outcomes >= 1 (got {dim}, {n_states}, {n_outcomes})"
        )));
    }
    let mut rng = seeded_rng(seed);
    let ensemble = random_ensemble(dim, n_states, pure, &mut rng)?;
    let measurement = random_measurement(dim, n_outcomes, &mut rng)?;
    Ok((ensemble, measurement))
}
