//! Right-hand sides of the information bounds and the checks around them.
//!
//! For an efficient measurement the following chain holds:
//!
//! ```text
//! 0 ≤ ΔI_i ≤ SWW = eqx ≤ χ        ΔI_i ≤ dual-Holevo = ΔI_f
//! ```
//!
//! The dual-Holevo right-hand side `S[ρ] − Σ Q_j S[√ρ E_j √ρ / Q_j]` coincides
//! with `ΔI_f` because `√ρ E_j √ρ = B†B` and `Q_j ρ'_j = U_j B B† U_j†` for
//! `B = √E_j √ρ`, and `B†B`, `BB†` share their spectrum.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::infomeasures::{
    conditional_info_gain, holevo_chi, info_gain_f, mutual_information, subentropy, von_neumann,
    Nats,
};
use crate::matrixcore::{
    commutes, eigvals_hermitian, projector_rank, sqrt_psd, support_projector, ComplexMatrix,
    SUPPORT_TOL,
};
use crate::qobjects::{apply_measurement, DensityOperator, Ensemble, Measurement, OutcomeAnalysis, ZERO_PROB};

/// Agreement required between algebraically identical evaluation paths.
pub const IDENTITY_TOL: f64 = 1e-9;
/// Commutator tolerance used by the saturation predicates.
pub const COMMUTE_TOL: f64 = 1e-8;

/// `S[ρ] − Σ_j Q_j S[√ρ E_j √ρ / Q_j]`, evaluated literally.
pub fn dual_holevo_rhs(rho: &DensityOperator, measurement: &Measurement) -> Result<Nats> {
    if !measurement.is_efficient() {
        return Err(Error::NotEfficient);
    }
    rho.matrix().check_same_dim(&measurement.kraus()[0])?;
    let root = sqrt_psd(rho.matrix())?;
    let mut after = Nats::ZERO;
    for e in measurement.povm_elements() {
        let x = &(&root * &e) * &root;
        let q = x.trace().re;
        if q >= ZERO_PROB {
            let state = DensityOperator::from_unnormalized(&x);
            after = after + q * von_neumann(&state)?;
        }
    }
    Ok(von_neumann(rho)? - after)
}

/// The Schumacher–Westmoreland–Wootters right-hand side, by two routes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SwwRhs {
    /// `χ[ε] − Σ_j Q_j χ[ε_j]`
    pub chi_form: Nats,
    /// `S[ρ] − Σ_i P_i S[ρ_i] − Σ_j Q_j (S[ρ'_j] − Σ_i P(i|j) S[ρ'_{ji}])`
    pub four_term: Nats,
}

impl SwwRhs {
    pub fn value(&self) -> Nats {
        self.chi_form
    }
}

/// Evaluates the SWW bound both as a difference of Holevo quantities and
/// term by term; fails with [`Error::FormMismatch`] if they disagree.
pub fn sww_rhs(analysis: &OutcomeAnalysis) -> Result<SwwRhs> {
    if !analysis.is_efficient() {
        return Err(Error::NotEfficient);
    }
    let ensemble = analysis.ensemble();
    let mut chi_form = holevo_chi(ensemble)?;
    for (q, post) in analysis.outcome_probs().iter().zip(analysis.posterior_ensembles()) {
        if let Some(post) = post {
            chi_form = chi_form - *q * holevo_chi(post)?;
        }
    }

    let mut four_term = von_neumann(analysis.ensemble_state())?;
    for (p, s) in ensemble.probs().iter().zip(ensemble.states()) {
        four_term = four_term - *p * von_neumann(s)?;
    }
    for j in 0..analysis.num_outcomes() {
        let Some(post) = &analysis.post_states()[j] else {
            continue;
        };
        let mut inner = von_neumann(post)?;
        for (i, s) in analysis.conditional_post_states()[j].iter().enumerate() {
            if let Some(s) = s {
                inner = inner - analysis.posteriors()[j][i] * von_neumann(s)?;
            }
        }
        four_term = four_term - analysis.outcome_probs()[j] * inner;
    }

    if (chi_form.0 - four_term.0).abs() > IDENTITY_TOL {
        return Err(Error::FormMismatch(chi_form.0, four_term.0));
    }
    Ok(SwwRhs {
        chi_form,
        four_term,
    })
}

/// `S[ρ] − Σ_i P_i ΔI_fi − Σ_j Q_j S[ρ'_j]`
pub fn eqx_rhs(analysis: &OutcomeAnalysis) -> Result<Nats> {
    let mut total = von_neumann(analysis.ensemble_state())?;
    for (i, p) in analysis.ensemble().probs().iter().enumerate() {
        total = total - *p * conditional_info_gain(analysis, i)?;
    }
    for (q, s) in analysis.outcome_probs().iter().zip(analysis.post_states()) {
        if let Some(s) = s {
            total = total - *q * von_neumann(s)?;
        }
    }
    Ok(total)
}

/// `ΔI_acc(ε) − Σ_j Q_j ΔI_acc(ε_j)` from supplied accessible informations.
pub fn accb_rhs(acc_total: Nats, acc_posteriors: &[Nats], outcome_probs: &[f64]) -> Result<Nats> {
    if acc_posteriors.len() != outcome_probs.len() {
        return Err(Error::LengthMismatch(acc_posteriors.len(), outcome_probs.len()));
    }
    Ok(acc_total
        - acc_posteriors
            .iter()
            .zip(outcome_probs)
            .map(|(a, q)| *q * *a)
            .sum::<Nats>())
}

/// `ΔI_acc(ε) − Σ_j Q_j Q[ρ'_j]` for a pure-state ensemble.
pub fn bsub_rhs(acc_total: Nats, analysis: &OutcomeAnalysis) -> Result<Nats> {
    if !analysis.ensemble().is_pure() {
        return Err(Error::NotPureEnsemble);
    }
    let mut total = acc_total;
    for (q, s) in analysis.outcome_probs().iter().zip(analysis.post_states()) {
        if let Some(s) = s {
            total = total - *q * subentropy(s)?;
        }
    }
    Ok(total)
}

/// Result of checking whether every pair of encoding states is proportional
/// on the support of every Kraus operator.
#[derive(Clone, Debug, PartialEq)]
pub struct EqspecReport {
    pub satisfied: bool,
    /// `alphas[j][i][k] = Tr[X_i]/Tr[X_k]` with `X_i = P_j ρ_i P_j`, when `Tr[X_k] > tol`.
    pub alphas: Vec<Vec<Vec<Option<f64>>>>,
}

/// Checks `P_j ρ_i P_j = α_ikj P_j ρ_k P_j` for all `i, k, j`, where `P_j`
/// projects onto the support of `A_j`.
///
/// Compressions with trace at or below `tol` count as vanishing. A pair where
/// both vanish passes; a pair where exactly one vanishes fails; otherwise the
/// residual `‖X_i − α X_k‖_F` must be at most `tol` times the larger of the
/// two compressed norms.
pub fn eqspec_check(ensemble: &Ensemble, measurement: &Measurement, tol: f64) -> Result<EqspecReport> {
    if !measurement.is_efficient() {
        return Err(Error::NotEfficient);
    }
    if ensemble.dim() != measurement.dim() {
        return Err(Error::DimensionMismatch {
            expected: ensemble.dim(),
            got: measurement.dim(),
        });
    }
    let n = ensemble.len();
    let mut satisfied = true;
    let mut alphas = Vec::with_capacity(measurement.len());
    for a in measurement.kraus() {
        let proj = match support_projector(a, SUPPORT_TOL) {
            Ok(p) => p,
            Err(Error::ZeroOperator) => {
                alphas.push(vec![vec![None; n]; n]);
                continue;
            }
            Err(e) => return Err(e),
        };
        let compressed: Vec<ComplexMatrix> = ensemble
            .states()
            .iter()
            .map(|s| proj.conjugate(s.matrix()))
            .collect();
        let traces: Vec<f64> = compressed.iter().map(|x| x.trace().re).collect();
        let mut table = vec![vec![None; n]; n];
        for i in 0..n {
            for k in 0..n {
                let (ti, tk) = (traces[i], traces[k]);
                if tk > tol {
                    table[i][k] = Some(ti / tk);
                }
                match (ti > tol, tk > tol) {
                    (false, false) => {}
                    (true, true) => {
                        let alpha = ti / tk;
                        let scaled = compressed[k].scale(alpha);
                        let residual = (&compressed[i] - &scaled).frobenius_norm();
                        let scale = compressed[i].frobenius_norm().max(scaled.frobenius_norm());
                        if residual > tol * scale {
                            satisfied = false;
                        }
                    }
                    _ => satisfied = false,
                }
            }
        }
        alphas.push(table);
    }
    Ok(EqspecReport { satisfied, alphas })
}

/// `ln(N − M_max + 1)`, with `M_max` the largest support rank among the Kraus operators.
pub fn dimension_bound(measurement: &Measurement, dim: usize) -> Result<Nats> {
    if measurement.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: measurement.dim(),
        });
    }
    let m_max = max_support_rank(measurement)?;
    Ok(Nats(((dim - m_max + 1) as f64).ln()))
}

/// Largest support rank among the (nonzero) Kraus operators.
pub fn max_support_rank(measurement: &Measurement) -> Result<usize> {
    let mut m_max = 0;
    for a in measurement.kraus() {
        match support_projector(a, SUPPORT_TOL) {
            Ok(p) => m_max = m_max.max(projector_rank(&p)),
            Err(Error::ZeroOperator) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(m_max.max(1))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SaturationFlags {
    /// All POVM elements commute pairwise.
    pub povm_commuting: bool,
    /// All encoding states and all Kraus operators commute with each other.
    pub classical: bool,
    pub pure_ensemble: bool,
    /// Every nonzero POVM element has rank one.
    pub rank_one_povm: bool,
}

fn all_commute(ops: &[&ComplexMatrix]) -> bool {
    (0..ops.len()).all(|i| ((i + 1)..ops.len()).all(|k| commutes(ops[i], ops[k], COMMUTE_TOL)))
}

pub fn saturation_predicates(ensemble: &Ensemble, measurement: &Measurement) -> SaturationFlags {
    let elements = measurement.povm_elements();
    let povm_commuting = all_commute(&elements.iter().collect::<Vec<_>>());
    let mut everything: Vec<&ComplexMatrix> = ensemble.states().iter().map(|s| s.matrix()).collect();
    everything.extend(measurement.kraus());
    let classical = all_commute(&everything);
    let rank_one_povm = elements.iter().all(|e| match support_projector(e, SUPPORT_TOL) {
        Ok(p) => projector_rank(&p) == 1,
        Err(_) => true,
    });
    SaturationFlags {
        povm_commuting,
        classical,
        pure_ensemble: ensemble.is_pure(),
        rank_one_povm,
    }
}

/// Largest deviation, over outcomes and sorted eigenvalues, between the spectra
/// of `√ρ E_j √ρ` and `A_j ρ A_j†`.
pub fn spectrum_identity_residual(rho: &DensityOperator, measurement: &Measurement) -> Result<f64> {
    let root = sqrt_psd(rho.matrix())?;
    let mut worst: f64 = 0.0;
    for (a, e) in measurement.kraus().iter().zip(measurement.povm_elements()) {
        let dual = eigvals_hermitian(&(&(&root * &e) * &root).hermitian_part())?;
        let fin = eigvals_hermitian(&a.conjugate(rho.matrix()).hermitian_part())?;
        for (x, y) in dual.iter().zip(&fin) {
            worst = worst.max((x - y).abs());
        }
    }
    Ok(worst)
}

/// All bound quantities for one efficient (ensemble, measurement) instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub dim: usize,
    pub seed: Option<u64>,
    /// `ΔI_i`
    pub lhs: Nats,
    pub info_gain_f: Nats,
    pub rhs_holevo: Nats,
    pub rhs_dual: Nats,
    pub rhs_sww: Nats,
    pub rhs_sww_four_term: Nats,
    pub rhs_eqx: Nats,
    pub spectrum_residual: f64,
    pub flags: SaturationFlags,
}

impl BoundReport {
    /// Inequality slacks; each is non-negative when the bound holds.
    pub fn slacks(&self) -> Vec<(&'static str, Nats)> {
        vec![
            ("mutual_info_nonneg", self.lhs),
            ("info_gain_f_nonneg", self.info_gain_f),
            ("info_gain_f", self.info_gain_f - self.lhs),
            ("holevo", self.rhs_holevo - self.lhs),
            ("dual", self.rhs_dual - self.lhs),
            ("sww", self.rhs_sww - self.lhs),
            ("eqx", self.rhs_eqx - self.lhs),
            ("sww_le_holevo", self.rhs_holevo - self.rhs_sww),
        ]
    }

    /// Residuals of identities that hold exactly in exact arithmetic.
    pub fn identity_residuals(&self) -> Vec<(&'static str, f64)> {
        vec![
            ("dual_eq_info_gain_f", (self.rhs_dual - self.info_gain_f).0.abs()),
            ("sww_eq_eqx", (self.rhs_sww - self.rhs_eqx).0.abs()),
            ("sww_forms", (self.rhs_sww - self.rhs_sww_four_term).0.abs()),
            ("spectrum", self.spectrum_residual),
        ]
    }

    /// True when every slack is at least `-slack_tol` and every identity
    /// residual at most `identity_tol`.
    pub fn passes(&self, slack_tol: f64, identity_tol: f64) -> bool {
        self.slacks().iter().all(|(_, s)| s.0 >= -slack_tol)
            && self.identity_residuals().iter().all(|(_, r)| *r <= identity_tol)
    }
}

/// Evaluates every bound on one efficient instance.
pub fn bound_report(ensemble: &Ensemble, measurement: &Measurement, seed: Option<u64>) -> Result<BoundReport> {
    let analysis = apply_measurement(measurement, ensemble)?;
    let sww = sww_rhs(&analysis)?;
    Ok(BoundReport {
        dim: ensemble.dim(),
        seed,
        lhs: mutual_information(&analysis),
        info_gain_f: info_gain_f(&analysis)?,
        rhs_holevo: holevo_chi(ensemble)?,
        rhs_dual: dual_holevo_rhs(analysis.ensemble_state(), measurement)?,
        rhs_sww: sww.chi_form,
        rhs_sww_four_term: sww.four_term,
        rhs_eqx: eqx_rhs(&analysis)?,
        spectrum_residual: spectrum_identity_residual(analysis.ensemble_state(), measurement)?,
        flags: saturation_predicates(ensemble, measurement),
    })
}
