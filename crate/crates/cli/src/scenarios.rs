//! Scenario registry.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_8};
use std::time::Instant;

use rand::Rng;

use qbound_core::accinfo::{default_outcomes, maximize_mutual_info, two_state_reference, MIN_BUDGET};
use qbound_core::bounds::{bound_report, bsub_rhs, dimension_bound, eqspec_check, max_support_rank};
use qbound_core::haarmc::{distortion_moments, uniform_closed_form, uniform_ensemble_info_mc, MCEstimate};
use qbound_core::infomeasures::{holevo_chi, info_gain_f, mutual_information, shannon, Nats};
use qbound_core::qobjects::{
    apply_measurement, coarse_grain, mix_measurements, random_instance, random_measurement, random_mixed_state,
};
use qbound_core::random::{complex_gaussian, haar_unitary, haar_vector, simplex_point, trial_rng, StreamRng};
use qbound_core::{ComplexMatrix, DensityOperator, Ensemble, Measurement, C64};

use crate::config::ScenarioConfig;
use crate::error::{CliError, Result};
use crate::report::{Interval, Record, Report};

pub struct ScenarioSpec {
    pub name: &'static str,
    pub default_dim: usize,
    pub default_trials: usize,
    pub about: &'static str,
}

pub const SCENARIOS: &[ScenarioSpec] = &[
    ScenarioSpec {
        name: "bound-chain",
        default_dim: 2,
        default_trials: 100,
        about: "random efficient instances: full inequality chain and identity checks",
    },
    ScenarioSpec {
        name: "saturation-classical",
        default_dim: 3,
        default_trials: 200,
        about: "diagonal pure ensembles with diagonal Kraus operators: mutual information equals purification gain",
    },
    ScenarioSpec {
        name: "uniform-theorem",
        default_dim: 2,
        default_trials: 100_000,
        about: "Monte Carlo over Haar states against Q[I/N] - sum_j Q_j Q[rho'_j]",
    },
    ScenarioSpec {
        name: "distorted-ensemble",
        default_dim: 2,
        default_trials: 100_000,
        about: "mean state and weight of the distorted uniform ensemble",
    },
    ScenarioSpec {
        name: "eqspec-recovery",
        default_dim: 3,
        default_trials: 10,
        about: "support-proportionality constructions, posterior information and the dimension bound",
    },
    ScenarioSpec {
        name: "inefficient-violation",
        default_dim: 2,
        default_trials: 1,
        about: "lambda sweep of a grouped Z/X mixture where mutual information exceeds purification gain",
    },
    ScenarioSpec {
        name: "two-state-accinfo",
        default_dim: 2,
        default_trials: 1,
        about: "optimizer against the projective sweep for two equiprobable pure states",
    },
    ScenarioSpec {
        name: "subentropy-corollary",
        default_dim: 2,
        default_trials: 500,
        about: "pure ensembles: mutual information plus averaged posterior subentropy stays below chi",
    },
];

struct Outcome {
    records: Vec<Record>,
    intervals: Vec<Interval>,
}

impl From<Vec<Record>> for Outcome {
    fn from(records: Vec<Record>) -> Self {
        Outcome {
            records,
            intervals: Vec::new(),
        }
    }
}

pub fn run_scenario(cfg: &ScenarioConfig) -> Result<Report> {
    cfg.validate()?;
    let start = Instant::now();
    let out = match cfg.name.as_str() {
        "bound-chain" => bound_chain(cfg)?.into(),
        "saturation-classical" => saturation_classical(cfg)?.into(),
        "uniform-theorem" => uniform_theorem(cfg)?,
        "distorted-ensemble" => distorted_ensemble(cfg)?,
        "eqspec-recovery" => eqspec_recovery(cfg)?.into(),
        "inefficient-violation" => inefficient_violation(cfg)?.into(),
        "two-state-accinfo" => two_state_accinfo(cfg)?.into(),
        "subentropy-corollary" => subentropy_corollary(cfg)?.into(),
        other => return Err(CliError::UnknownScenario(other.to_string())),
    };
    let walltime_ms = start.elapsed().as_millis() as u64;
    Ok(Report::finish(cfg.clone(), out.records, out.intervals, walltime_ms))
}

fn require_dim(cfg: &ScenarioConfig, min: usize) -> Result<()> {
    if cfg.dim < min {
        return Err(CliError::InvalidConfig(format!(
            "{} needs dim >= {min}, got {}",
            cfg.name, cfg.dim
        )));
    }
    Ok(())
}

fn require_exact_dim(cfg: &ScenarioConfig, dim: usize) -> Result<()> {
    if cfg.dim != dim {
        return Err(CliError::InvalidConfig(format!(
            "{} is defined for dim {dim} only, got {}",
            cfg.name, cfg.dim
        )));
    }
    Ok(())
}

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// State and outcome counts in the campaign ranges, plus an instance seed.
fn draw_shape(rng: &mut StreamRng) -> (usize, usize, u64) {
    let states = rng.random_range(2..=8);
    let outcomes = rng.random_range(2..=9);
    (states, outcomes, rng.random())
}

fn bound_chain(cfg: &ScenarioConfig) -> Result<Vec<Record>> {
    require_dim(cfg, 2)?;
    let mode = cfg.param_str("ensembles", "both");
    if !matches!(mode, "both" | "pure" | "mixed") {
        return Err(CliError::InvalidConfig(format!("ensembles must be both|pure|mixed, got {mode}")));
    }
    (0..cfg.trials)
        .map(|t| {
            let mut rng = trial_rng(cfg.seed, t as u64);
            let (states, outcomes, seed) = draw_shape(&mut rng);
            let pure = match mode {
                "pure" => true,
                "mixed" => false,
                _ => rng.random_bool(0.5),
            };
            let (e, m) = random_instance(cfg.dim, states, outcomes, pure, seed)?;
            let b = bound_report(&e, &m, Some(seed))?;
            let mut r = Record::new(t, Some(seed));
            r.value("states", states as f64)
                .value("outcomes", outcomes as f64)
                .value("pure", f64::from(u8::from(pure)))
                .info("mutual_info", b.lhs.0)
                .info("info_gain_f", b.info_gain_f.0)
                .info("holevo", b.rhs_holevo.0)
                .info("dual", b.rhs_dual.0)
                .info("sww", b.rhs_sww.0)
                .info("eqx", b.rhs_eqx.0);
            for (k, s) in b.slacks() {
                r.slack(k, s.0);
            }
            for (k, v) in b.identity_residuals() {
                r.residual(k, v);
            }
            Ok(r)
        })
        .collect()
}

/// Diagonal pure states `|k_i⟩` and Kraus operators `diag(√p(j|k))`.
fn classical_instance(dim: usize, rng: &mut StreamRng) -> Result<(Ensemble, Measurement)> {
    let (states, outcomes, _) = draw_shape(rng);
    let probs = simplex_point(states, rng);
    let vectors: Vec<Vec<C64>> = (0..states)
        .map(|_| {
            let k = rng.random_range(0..dim);
            (0..dim).map(|l| c(f64::from(u8::from(l == k)))).collect()
        })
        .collect();
    let likelihoods: Vec<Vec<f64>> = (0..dim).map(|_| simplex_point(outcomes, rng)).collect();
    let kraus = (0..outcomes)
        .map(|j| ComplexMatrix::from_diag(&likelihoods.iter().map(|p| p[j].sqrt()).collect::<Vec<_>>()))
        .collect();
    Ok((Ensemble::from_pure_states(probs, &vectors)?, Measurement::new(kraus)?))
}

fn saturation_classical(cfg: &ScenarioConfig) -> Result<Vec<Record>> {
    require_dim(cfg, 2)?;
    (0..cfg.trials)
        .map(|t| {
            let mut rng = trial_rng(cfg.seed, t as u64);
            let (e, m) = classical_instance(cfg.dim, &mut rng)?;
            let b = bound_report(&e, &m, None)?;
            let mut r = Record::new(t, None);
            r.value("states", e.len() as f64)
                .value("outcomes", m.len() as f64)
                .value("classical", f64::from(u8::from(b.flags.classical)))
                .info("mutual_info", b.lhs.0)
                .info("info_gain_f", b.info_gain_f.0)
                .residual("saturation", (b.lhs - b.info_gain_f).0.abs())
                .residual("not_classical", f64::from(u8::from(!b.flags.classical)));
            Ok(r)
        })
        .collect()
}

fn mc_record(r: &mut Record, est: &MCEstimate, target: f64) {
    r.info("mc_mean", est.mean.0)
        .info("mc_std_error", est.std_error.0)
        .info("target", target)
        .value("trials", est.trials as f64)
        .value("sigmas", est.sigmas_from(target))
        .margin("three_sigma", 3.0 - est.sigmas_from(target));
}

fn interval(id: usize, est: &MCEstimate, target: f64) -> Interval {
    Interval {
        record: id,
        mean: est.mean.0,
        std_error: est.std_error.0,
        half_width: 3.0 * est.std_error.0,
        target,
    }
}

fn uniform_theorem(cfg: &ScenarioConfig) -> Result<Outcome> {
    require_dim(cfg, 1)?;
    let kind = cfg.param_str("measurement", "basis");
    let count = cfg.param_usize("measurements", 1)?;
    let outcomes = cfg.param_usize("outcomes", cfg.dim)?;
    let retry = cfg.param_bool("retry", true)?;
    let mut out = Outcome::from(Vec::new());
    for id in 0..count {
        let mut rng = trial_rng(cfg.seed, id as u64);
        let m = match kind {
            "basis" => Measurement::computational_basis(cfg.dim),
            "random" => random_measurement(cfg.dim, outcomes, &mut rng)?,
            other => return Err(CliError::InvalidConfig(format!("measurement must be basis|random, got {other}"))),
        };
        let target = uniform_closed_form(&m)?.0;
        let mc_seed: u64 = rng.random();
        let mut est = uniform_ensemble_info_mc(&m, cfg.trials, mc_seed)?;
        let mut retried = false;
        if retry && !est.within_sigmas(target, 3.0) {
            est = uniform_ensemble_info_mc(&m, 4 * cfg.trials, mc_seed.wrapping_add(1))?;
            retried = true;
        }
        let mut r = Record::new(id, Some(est.seed));
        mc_record(&mut r, &est, target);
        r.value("outcomes", m.len() as f64).value("retried", f64::from(u8::from(retried)));
        out.intervals.push(interval(id, &est, target));
        out.records.push(r);
    }
    Ok(out)
}

fn distorted_ensemble(cfg: &ScenarioConfig) -> Result<Outcome> {
    require_dim(cfg, 1)?;
    let count = cfg.param_usize("states", 1)?;
    let kind = cfg.param_str("rho", "mixed");
    let mut out = Outcome::from(Vec::new());
    for id in 0..count {
        let mut rng = trial_rng(cfg.seed, id as u64);
        let rho = match kind {
            "mixed" => random_mixed_state(cfg.dim, &mut rng),
            "pure" => DensityOperator::pure(&haar_vector(cfg.dim, &mut rng))?,
            "uniform" => DensityOperator::maximally_mixed(cfg.dim),
            other => return Err(CliError::InvalidConfig(format!("rho must be mixed|pure|uniform, got {other}"))),
        };
        let u = haar_unitary(cfg.dim, &mut rng);
        let mc_seed: u64 = rng.random();
        let moments = distortion_moments(&rho, &u, cfg.trials, mc_seed)?;
        let sigmas = moments.max_sigmas_from(rho.matrix());
        let mut r = Record::new(id, Some(mc_seed));
        r.value("trials", cfg.trials as f64)
            .value("mean_state_max_sigmas", sigmas)
            .value("weight_mean", moments.weight.mean.0)
            .value("weight_sigmas", moments.weight.sigmas_from(1.0))
            .margin("mean_state_three_sigma", 3.0 - sigmas)
            .margin("weight_three_sigma", 3.0 - moments.weight.sigmas_from(1.0));
        out.intervals.push(Interval {
            record: id,
            mean: moments.weight.mean.0,
            std_error: moments.weight.std_error.0,
            half_width: 3.0 * moments.weight.std_error.0,
            target: 1.0,
        });
        out.records.push(r);
    }
    Ok(out)
}

/// Random composition of `n` into `parts` positive block sizes.
fn block_sizes(n: usize, parts: usize, rng: &mut StreamRng) -> Vec<usize> {
    let mut sizes = vec![1; parts];
    for _ in parts..n {
        sizes[rng.random_range(0..parts)] += 1;
    }
    sizes
}

/// A measurement made of rotated block projectors `V_b P_b` together with
/// an ensemble whose members are proportional on every block.
struct BlockConstruction {
    ensemble: Ensemble,
    measurement: Measurement,
}

fn block_construction(dim: usize, pure: bool, rng: &mut StreamRng) -> Result<BlockConstruction> {
    let parts = rng.random_range(2..=dim);
    let sizes = block_sizes(dim, parts, rng);
    let w = haar_unitary(dim, rng);
    let mut offset = 0;
    let mut projectors = Vec::with_capacity(parts);
    let mut ranges = Vec::with_capacity(parts);
    for &s in &sizes {
        let diag: Vec<f64> = (0..dim).map(|k| f64::from(u8::from(k >= offset && k < offset + s))).collect();
        projectors.push(w.conjugate(&ComplexMatrix::from_diag(&diag)));
        ranges.push(offset..offset + s);
        offset += s;
    }
    let kraus = projectors.iter().map(|p| &haar_unitary(dim, rng) * p).collect();
    let measurement = Measurement::new(kraus)?;

    let n_states = rng.random_range(2..=6);
    let probs = simplex_point(n_states, rng);
    let ensemble = if pure {
        // φ_b: a random unit vector inside block b.
        let blocks: Vec<Vec<C64>> = ranges
            .iter()
            .map(|range| {
                let inner = haar_vector(range.len(), rng);
                let mut v = vec![c(0.0); dim];
                for (k, z) in range.clone().zip(inner) {
                    v[k] = z;
                }
                w.apply(&v)
            })
            .collect();
        let vectors: Vec<Vec<C64>> = (0..n_states)
            .map(|_| {
                let coeffs: Vec<C64> = (0..parts).map(|_| complex_gaussian(rng)).collect();
                let mut v = vec![c(0.0); dim];
                for (coef, phi) in coeffs.iter().zip(&blocks) {
                    for (x, y) in v.iter_mut().zip(phi) {
                        *x += coef * y;
                    }
                }
                let norm = qbound_core::matrixcore::vector_norm(&v);
                v.into_iter().map(|z| z / norm).collect()
            })
            .collect();
        Ensemble::from_pure_states(probs, &vectors)?
    } else {
        // σ_b: a random mixed state inside block b.
        let blocks: Vec<ComplexMatrix> = ranges
            .iter()
            .map(|range| {
                let local = random_mixed_state(range.len(), rng);
                let embedded = ComplexMatrix::from_fn(dim, |i, j| {
                    if range.contains(&i) && range.contains(&j) {
                        local.matrix()[(i - range.start, j - range.start)]
                    } else {
                        c(0.0)
                    }
                });
                w.conjugate(&embedded)
            })
            .collect();
        let states = (0..n_states)
            .map(|_| {
                let weights = simplex_point(parts, rng);
                let mut m = ComplexMatrix::zeros(dim);
                for (wt, s) in weights.iter().zip(&blocks) {
                    m = &m + &s.scale(*wt);
                }
                DensityOperator::new(m.hermitian_part())
            })
            .collect::<qbound_core::Result<Vec<_>>>()?;
        Ensemble::new(probs, states)?
    };
    Ok(BlockConstruction { ensemble, measurement })
}

fn mismatch(expected: bool, got: bool) -> f64 {
    f64::from(u8::from(expected != got))
}

fn eqspec_recovery(cfg: &ScenarioConfig) -> Result<Vec<Record>> {
    require_dim(cfg, 2)?;
    let budget = cfg.param_usize("budget", 2000)?;
    let restarts = cfg.param_usize("restarts", 2)?;
    if budget < MIN_BUDGET {
        return Err(CliError::InvalidConfig(format!("budget must be at least {MIN_BUDGET}")));
    }
    let check_tol = cfg.param_f64("eqspec_tol", 1e-8)?;
    let mut records = Vec::new();

    // Rank-one Kraus operators on a random mixed ensemble.
    {
        let mut rng = trial_rng(cfg.seed, 0);
        let e = qbound_core::qobjects::random_ensemble(cfg.dim, 3, false, &mut rng)?;
        let m = qbound_core::accinfo::PovmParams::random(cfg.dim, default_outcomes(cfg.dim), &mut rng).to_measurement()?;
        let ok = eqspec_check(&e, &m, check_tol)?.satisfied;
        let mut r = Record::new(0, None);
        r.value("expected", 1.0).value("satisfied", f64::from(u8::from(ok)));
        r.residual("eqspec_mismatch", mismatch(true, ok));
        records.push(r);
    }
    // Orthogonal compressions in dimension three.
    {
        let e = Ensemble::new(
            vec![0.5, 0.5],
            vec![
                DensityOperator::new(ComplexMatrix::from_diag(&[1.0, 0.0, 0.0]))?,
                DensityOperator::new(ComplexMatrix::from_diag(&[0.0, 1.0, 0.0]))?,
            ],
        )?;
        let m = Measurement::new(vec![
            ComplexMatrix::from_diag(&[1.0, 1.0, 0.0]),
            ComplexMatrix::from_diag(&[0.0, 0.0, 1.0]),
        ])?;
        let ok = eqspec_check(&e, &m, check_tol)?.satisfied;
        let mut r = Record::new(1, None);
        r.value("expected", 0.0).value("satisfied", f64::from(u8::from(ok)));
        r.residual("eqspec_mismatch", mismatch(false, ok));
        records.push(r);
    }
    for t in 0..cfg.trials {
        let id = t + 2;
        let mut rng = trial_rng(cfg.seed, id as u64);
        let pure = t % 2 == 1;
        let BlockConstruction { ensemble, measurement } = block_construction(cfg.dim, pure, &mut rng)?;
        let ok = eqspec_check(&ensemble, &measurement, check_tol)?.satisfied;
        let analysis = apply_measurement(&measurement, &ensemble)?;
        let opt_seed: u64 = rng.random();
        let k = default_outcomes(cfg.dim);
        let mut posterior_best: f64 = 0.0;
        for post in analysis.posterior_ensembles().iter().flatten() {
            let best = maximize_mutual_info(post, k, budget, restarts, opt_seed)?.best_value.0;
            posterior_best = posterior_best.max(best);
        }
        let mut r = Record::new(id, Some(opt_seed));
        r.value("pure", f64::from(u8::from(pure)))
            .value("blocks", measurement.len() as f64)
            .value("satisfied", f64::from(u8::from(ok)))
            .info("posterior_info_max", posterior_best)
            .info("mutual_info", mutual_information(&analysis).0)
            .residual("eqspec_mismatch", mismatch(true, ok))
            .slack("posterior_info", 1e-3 - posterior_best);
        if pure {
            let bound = dimension_bound(&measurement, cfg.dim)?.0;
            let acc = maximize_mutual_info(&ensemble, k, budget, restarts, opt_seed)?.best_value.0;
            r.value("m_max", max_support_rank(&measurement)? as f64)
                .info("dimension_bound", bound)
                .info("accessible_lower", acc)
                .slack("dimension_bound", bound + 1e-6 - acc);
        }
        records.push(r);
    }
    Ok(records)
}

/// `{3/4: |0⟩, 1/4: |1⟩}`
pub fn inefficient_ensemble() -> Result<Ensemble> {
    Ok(Ensemble::from_pure_states(
        vec![0.75, 0.25],
        &[vec![c(1.0), c(0.0)], vec![c(0.0), c(1.0)]],
    )?)
}

pub fn x_basis() -> Result<Measurement> {
    let h = FRAC_1_SQRT_2;
    Ok(Measurement::projective(&[vec![c(h), c(h)], vec![c(h), c(-h)]])?)
}

fn inefficient_violation(cfg: &ScenarioConfig) -> Result<Vec<Record>> {
    require_exact_dim(cfg, 2)?;
    let points = cfg.param_usize("points", 101)?;
    if points < 2 {
        return Err(CliError::InvalidConfig("points must be at least 2".into()));
    }
    let e = inefficient_ensemble()?;
    let z = Measurement::computational_basis(2);
    let x = x_basis()?;
    let mut records = Vec::with_capacity(points + 2);
    let mut witness: Option<(f64, f64)> = None;
    for k in 0..points {
        let lambda = k as f64 / (points - 1) as f64;
        let m = mix_measurements(&z, &x, lambda)?.group_by_label_index()?;
        let a = coarse_grain(&m, &e)?;
        let mi = mutual_information(&a).0;
        let gain = info_gain_f(&a)?.0;
        let score = (mi - gain).min(gain).min(mi);
        if witness.is_none_or(|(_, s)| score > s) {
            witness = Some((lambda, score));
        }
        let mut r = Record::new(k, None);
        r.value("lambda", lambda)
            .info("mutual_info", mi)
            .info("info_gain_f", gain)
            .info("gap", mi - gain)
            .slack("mutual_info_nonneg", mi);
        records.push(r);
    }

    let grouped = x.with_groups(vec![vec![0, 1]])?;
    let a = coarse_grain(&grouped, &e)?;
    let gain = info_gain_f(&a)?.0;
    let mi = mutual_information(&a).0;
    let expected = (shannon(&[0.75, 0.25])? - Nats(std::f64::consts::LN_2)).0;
    let mut r = Record::new(points, None);
    r.value("grouped_x", 1.0)
        .info("mutual_info", mi)
        .info("info_gain_f", gain)
        .info("expected_info_gain_f", expected)
        .residual("info_gain_f", (gain - expected).abs())
        .residual("mutual_info", mi.abs());
    records.push(r);

    let (lambda, score) = witness.expect("at least two grid points");
    let mut r = Record::new(points + 1, None);
    r.value("witness_lambda", lambda)
        .info("witness_score", score)
        .slack("violation_witness", score - 2.0 * cfg.tol);
    records.push(r);
    Ok(records)
}

fn two_state_accinfo(cfg: &ScenarioConfig) -> Result<Vec<Record>> {
    require_exact_dim(cfg, 2)?;
    let s = cfg.param_f64("s", FRAC_PI_8.cos())?;
    let budget = cfg.param_usize("budget", 20_000)?;
    let restarts = cfg.param_usize("restarts", 4)?;
    let outcomes = cfg.param_usize("outcomes", 4)?;
    let agreement = cfg.param_f64("agreement", 1e-4)?;
    let reference = two_state_reference(s)?.0;
    let a = s.acos() / 2.0;
    let e = Ensemble::from_pure_states(
        vec![0.5, 0.5],
        &[vec![c(a.cos()), c(a.sin())], vec![c(a.cos()), c(-a.sin())]],
    )?;
    let chi = holevo_chi(&e)?.0;
    (0..cfg.trials)
        .map(|t| {
            let seed = cfg.seed.wrapping_add(t as u64);
            let opt = maximize_mutual_info(&e, outcomes, budget, restarts, seed)?;
            let best = opt.best_value.0;
            let mut r = Record::new(t, Some(seed));
            r.value("overlap", s)
                .value("budget", budget as f64)
                .info("best", best)
                .info("reference", reference)
                .info("holevo", chi)
                .slack("sweep_agreement", agreement - (best - reference).abs())
                .slack("holevo", chi - best);
            Ok(r)
        })
        .collect()
}

fn subentropy_corollary(cfg: &ScenarioConfig) -> Result<Vec<Record>> {
    require_dim(cfg, 2)?;
    (0..cfg.trials)
        .map(|t| {
            let mut rng = trial_rng(cfg.seed, t as u64);
            let (states, outcomes, seed) = draw_shape(&mut rng);
            let (e, m) = random_instance(cfg.dim, states, outcomes, true, seed)?;
            let a = apply_measurement(&m, &e)?;
            let chi = holevo_chi(&e)?;
            let mi = mutual_information(&a);
            let rhs = bsub_rhs(chi, &a)?;
            let mut r = Record::new(t, Some(seed));
            r.value("states", states as f64)
                .value("outcomes", outcomes as f64)
                .info("mutual_info", mi.0)
                .info("holevo", chi.0)
                .info("posterior_subentropy", (chi - rhs).0)
                .slack("corollary", (rhs - mi).0);
            Ok(r)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(name: &str, f: impl FnOnce(ScenarioConfig) -> ScenarioConfig) -> Report {
        run_scenario(&f(ScenarioConfig::new(name).unwrap())).unwrap()
    }

    #[test]
    fn bound_chain_example() {
        let r = run("bound-chain", |c| c.with_dim(2).with_trials(10).with_seed(1));
        assert_eq!(r.records.len(), 10);
        assert_eq!(r.summary.failed, 0);
    }

    #[test]
    fn unknown_and_invalid() {
        let mut cfg = ScenarioConfig::new("bound-chain").unwrap();
        cfg.name = "no-such".into();
        assert!(matches!(run_scenario(&cfg), Err(CliError::UnknownScenario(_))));
        let cfg = ScenarioConfig::new("bound-chain").unwrap().with_dim(1);
        assert!(matches!(run_scenario(&cfg), Err(CliError::InvalidConfig(_))));
        let cfg = ScenarioConfig::new("inefficient-violation").unwrap().with_dim(3);
        assert!(matches!(run_scenario(&cfg), Err(CliError::InvalidConfig(_))));
        let cfg = ScenarioConfig::new("bound-chain").unwrap().with_param("ensembles", "odd");
        assert!(matches!(run_scenario(&cfg), Err(CliError::InvalidConfig(_))));
    }

    #[test]
    fn every_scenario_runs_small() {
        for spec in SCENARIOS {
            let cfg = ScenarioConfig::new(spec.name).unwrap().with_trials(match spec.name {
                "uniform-theorem" | "distorted-ensemble" => 20_000,
                "eqspec-recovery" => 2,
                "bound-chain" | "saturation-classical" | "subentropy-corollary" => 5,
                _ => 1,
            });
            let r = run_scenario(&cfg).unwrap();
            assert!(r.all_passed(), "{}: {:?}", spec.name, r.summary);
        }
    }

    #[test]
    fn inefficient_sweep_finds_violation() {
        let r = run("inefficient-violation", |c| c);
        assert_eq!(r.records.len(), 103);
        assert!(r.all_passed());
        let grouped = &r.records[101];
        assert!((grouped.info["info_gain_f"] - (-0.130812)).abs() < 1e-6);
    }

    #[test]
    fn block_constructions_satisfy_eqspec() {
        for dim in 2..=4 {
            for pure in [false, true] {
                let mut rng = trial_rng(3, dim as u64);
                let b = block_construction(dim, pure, &mut rng).unwrap();
                assert!(eqspec_check(&b.ensemble, &b.measurement, 1e-8).unwrap().satisfied);
                assert!(b.measurement.completeness_residual() < 1e-10);
            }
        }
    }

    #[test]
    fn block_sizes_partition() {
        let mut rng = trial_rng(0, 0);
        for n in 2..7 {
            for parts in 1..=n {
                let s = block_sizes(n, parts, &mut rng);
                assert_eq!(s.len(), parts);
                assert_eq!(s.iter().sum::<usize>(), n);
                assert!(s.iter().all(|&x| x >= 1));
            }
        }
    }
}
