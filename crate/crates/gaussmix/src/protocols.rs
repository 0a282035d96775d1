//! Distillation protocols over noisy squeezed and entangled inputs.
//!
//! Three pipelines are provided:
//!
//! * **one-shot squeezing** — deterministic: the input meets a vacuum
//!   pointer on a tunable beam splitter, the pointer is measured, and the
//!   below-threshold region receives a corrective displacement; both
//!   outcome regions are kept.
//! * **multi-copy squeezing** — probabilistic: each round feeds the current
//!   register and one fresh input copy into a balanced beam splitter and
//!   post-selects the pointer sum near zero.
//! * **multi-copy entanglement** — the two-mode analogue, with balanced
//!   beam splitters on each party's pair and a post-selected measurement of
//!   the non-local sum quadrature of the fresh copy.
//!
//! Both multi-copy pipelines rely on all branch covariances being equal, so
//! conditioning stays on the exact path (pure reweighting); this is asserted
//! every round. Displacement magnitudes are physical (vacuum-unit) values;
//! the sweep driver owns the mapping from the reported abscissa to them.

use std::f64::consts::FRAC_PI_4;

use nalgebra::DVector;

use crate::mixture::{
    homodyne_condition, ConditionPath, GaussianMixture, GridPolicy, HomodyneSpec,
};
use crate::symplectic::{
    beam_splitter, displaced_squeezed_vacuum, tmsv, GaussianState, SymplecticOp,
};
use crate::{Error, Result};

/// Relative branch-weight threshold applied between iterations.
pub const DEFAULT_PRUNE_TOL: f64 = 1e-12;

fn require_finite(name: &'static str, value: f64) -> Result<()> {
    if !value.is_finite() {
        return Err(Error::BadParameter {
            name,
            reason: format!("must be finite, got {value}"),
        });
    }
    Ok(())
}

/// Noisy squeezed input: with probability 1−p an x-squeezed vacuum, with
/// probability p the same state displaced by d along x̂.
#[derive(Debug, Clone)]
pub struct SqueezeNoiseModel {
    /// Squeezing parameter (x-variance e^{−2r}).
    pub r: f64,
    /// Displacement probability.
    pub p: f64,
    /// Displacement magnitude along x̂ in vacuum units.
    pub d: f64,
}

impl SqueezeNoiseModel {
    pub fn new(r: f64, p: f64, d: f64) -> Result<Self> {
        require_finite("r", r)?;
        require_finite("p", p)?;
        require_finite("d", d)?;
        if r < 0.0 {
            return Err(Error::BadParameter {
                name: "r",
                reason: format!("must be nonnegative, got {r}"),
            });
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::BadParameter {
                name: "p",
                reason: format!("must lie in [0,1], got {p}"),
            });
        }
        if d < 0.0 {
            return Err(Error::BadParameter {
                name: "d",
                reason: format!("must be nonnegative, got {d}"),
            });
        }
        Ok(Self { r, p, d })
    }

    /// The two-branch input mixture (one branch where p is 0 or 1).
    pub fn build(&self) -> Result<GaussianMixture> {
        let mut branches = Vec::new();
        if self.p < 1.0 {
            branches.push((1.0 - self.p, displaced_squeezed_vacuum(self.r, 0.0)));
        }
        if self.p > 0.0 {
            branches.push((self.p, displaced_squeezed_vacuum(self.r, self.d)));
        }
        GaussianMixture::new(branches)
    }

    /// The distillation target: the undisplaced squeezed vacuum.
    pub fn target(&self) -> GaussianState {
        displaced_squeezed_vacuum(self.r, 0.0)
    }
}

/// Noisy entangled input: a two-mode squeezed vacuum pair, displaced with
/// probability p by d along the first mode's x̂ quadrature.
#[derive(Debug, Clone)]
pub struct EntNoiseModel {
    /// Two-mode squeezing parameter (sum-quadrature variance e^{−2r}).
    pub r: f64,
    /// Displacement probability.
    pub p: f64,
    /// Displacement magnitude along the first mode's x̂, vacuum units.
    pub d: f64,
}

impl EntNoiseModel {
    pub fn new(r: f64, p: f64, d: f64) -> Result<Self> {
        // identical parameter domain as the squeezing model
        let checked = SqueezeNoiseModel::new(r, p, d)?;
        Ok(Self {
            r: checked.r,
            p: checked.p,
            d: checked.d,
        })
    }

    /// The two-branch, two-mode input mixture.
    pub fn build(&self) -> Result<GaussianMixture> {
        let base = tmsv(self.r);
        let shift = SymplecticOp::displacement(DVector::from_vec(vec![self.d, 0.0, 0.0, 0.0]));
        let mut branches = Vec::new();
        if self.p < 1.0 {
            branches.push((1.0 - self.p, base.clone()));
        }
        if self.p > 0.0 {
            branches.push((self.p, shift.apply(&base)?));
        }
        GaussianMixture::new(branches)
    }

    /// The distillation target: the undisplaced two-mode squeezed vacuum.
    pub fn target(&self) -> GaussianState {
        tmsv(self.r)
    }
}

/// Which pipeline produced a result row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProtocolKind {
    OneShot,
    MulticopySqueeze,
    MulticopyEnt,
}

impl ProtocolKind {
    /// Stable name used in result tables.
    pub fn as_str(&self) -> &'static str {
        match self {
            ProtocolKind::OneShot => "one_shot",
            ProtocolKind::MulticopySqueeze => "multicopy_squeeze",
            ProtocolKind::MulticopyEnt => "multicopy_ent",
        }
    }
}

impl std::fmt::Display for ProtocolKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// State of the register after one protocol round.
#[derive(Debug, Clone)]
pub struct IterationRecord {
    /// Renormalized (and pruned) register mixture after the round.
    pub mixture: GaussianMixture,
    /// Product of accept probabilities up to and including the round.
    pub cumulative_success: f64,
    /// Fidelity of the register to the protocol target.
    pub fidelity: f64,
    /// Variance of the target quadrature in the aggregate register state.
    pub variance: f64,
}

/// One line of the result table.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub protocol: ProtocolKind,
    pub r: f64,
    pub p: f64,
    /// Beam-splitter transmittance (cos²θ); 0.5 for the multi-copy pipelines.
    pub t: f64,
    /// Copy count; 1 for the one-shot pipeline.
    pub n_copies: usize,
    /// Reported abscissa (the displacement in detection-quadrature units).
    pub d_over_sigma: f64,
    pub fidelity: f64,
    pub x_variance: f64,
    pub success_prob: f64,
}

/// Full output of a protocol run: per-round records plus the summary line.
#[derive(Debug, Clone)]
pub struct ProtocolResult {
    pub iterations: Vec<IterationRecord>,
    pub summary: SummaryRow,
}

/// Resolve a threshold schedule: empty takes the default for every round, a
/// single value broadcasts, and a full-length list is taken as is.
fn resolve_thresholds(n_rounds: usize, schedule: &[f64], default: f64) -> Result<Vec<f64>> {
    let resolved: Vec<f64> = match schedule.len() {
        0 => vec![default; n_rounds],
        1 => vec![schedule[0]; n_rounds],
        k if k == n_rounds => schedule.to_vec(),
        k => {
            return Err(Error::BadParameter {
                name: "delta_prime",
                reason: format!("schedule has {k} entries for {n_rounds} rounds"),
            })
        }
    };
    for &dp in &resolved {
        if !(dp.is_finite() && dp > 0.0) {
            return Err(Error::BadParameter {
                name: "delta_prime",
                reason: format!("thresholds must be positive, got {dp}"),
            });
        }
    }
    Ok(resolved)
}

fn require_prune_tol(prune_tol: f64) -> Result<()> {
    if !(prune_tol.is_finite() && prune_tol > 0.0 && prune_tol < 1.0) {
        return Err(Error::BadParameter {
            name: "prune_tol",
            reason: format!("relative prune tolerance must lie in (0,1), got {prune_tol}"),
        });
    }
    Ok(())
}

/// Deterministic one-shot distillation: beam-split against a vacuum
/// pointer, measure the pointer's x̂, and displace the below-threshold
/// region back onto the target. Both regions are kept, so the protocol
/// succeeds with probability 1.
pub fn one_shot_squeeze(
    model: &SqueezeNoiseModel,
    theta: f64,
    grid: &GridPolicy,
) -> Result<ProtocolResult> {
    one_shot_squeeze_impl(model, theta, grid, DEFAULT_PRUNE_TOL)
}

fn one_shot_squeeze_impl(
    model: &SqueezeNoiseModel,
    theta: f64,
    grid: &GridPolicy,
    prune_tol: f64,
) -> Result<ProtocolResult> {
    require_finite("theta", theta)?;
    require_prune_tol(prune_tol)?;
    let (sin_t, cos_t) = theta.sin_cos();
    if sin_t.abs() < 1e-12 || cos_t.abs() < 1e-12 {
        return Err(Error::BadParameter {
            name: "theta",
            reason: format!("transmittance cos²θ must lie strictly in (0,1), got θ={theta}"),
        });
    }
    let rho = model.build()?;
    let pointer = GaussianMixture::from_state(GaussianState::vacuum(1)?);
    let joint = rho.tensor(&pointer)?;
    let mixed = joint.apply_op(&beam_splitter(2, theta, 0, 1)?)?;

    let functional = DVector::from_vec(vec![0.0, 0.0, 1.0, 0.0]);
    let threshold = -(model.d / 2.0) * sin_t;
    let below = homodyne_condition(
        &mixed,
        &HomodyneSpec {
            functional: functional.clone(),
            lo: f64::NEG_INFINITY,
            hi: threshold,
            measured_modes: vec![1],
        },
        grid,
    )?;
    let above = homodyne_condition(
        &mixed,
        &HomodyneSpec {
            functional,
            lo: threshold,
            hi: f64::INFINITY,
            measured_modes: vec![1],
        },
        grid,
    )?;
    let correction = SymplecticOp::displacement(DVector::from_vec(vec![-model.d * cos_t, 0.0]));
    let corrected = below.mixture.apply_op(&correction)?;

    let mut branches = Vec::with_capacity(
        corrected.branches().len() + above.mixture.branches().len(),
    );
    branches.extend_from_slice(corrected.branches());
    branches.extend_from_slice(above.mixture.branches());
    let out = GaussianMixture::new(branches)?
        .prune(prune_tol)?
        .renormalize()?;

    let fidelity = out.fidelity_to_pure(&model.target())?;
    let variance = out.quadrature_variance(&DVector::from_vec(vec![1.0, 0.0]))?;
    let record = IterationRecord {
        mixture: out,
        cumulative_success: 1.0,
        fidelity,
        variance,
    };
    Ok(ProtocolResult {
        summary: SummaryRow {
            protocol: ProtocolKind::OneShot,
            r: model.r,
            p: model.p,
            t: cos_t * cos_t,
            n_copies: 1,
            d_over_sigma: model.d,
            fidelity,
            x_variance: variance,
            success_prob: 1.0,
        },
        iterations: vec![record],
    })
}

/// Shared driver for both multi-copy pipelines: per round, tensor the
/// register with a fresh copy, apply the balanced beam splitters, condition
/// on the accept interval (−Δ′, Δ′] of the measured functional, renormalize
/// and prune. The exact conditioning path is asserted every round.
struct MulticopyRound<'a> {
    fresh: &'a dyn Fn() -> Result<GaussianMixture>,
    mixer: SymplecticOp,
    functional: DVector<f64>,
    measured_modes: Vec<usize>,
    target: GaussianState,
    variance_functional: DVector<f64>,
}

fn run_multicopy(
    round: &MulticopyRound<'_>,
    start: GaussianMixture,
    thresholds: &[f64],
    prune_tol: f64,
) -> Result<(Vec<IterationRecord>, f64)> {
    require_prune_tol(prune_tol)?;
    let mut register = start;
    let mut cumulative = 1.0;
    let mut records = Vec::with_capacity(thresholds.len());
    for &dp in thresholds {
        let joint = register.tensor(&(round.fresh)()?)?.apply_op(&round.mixer)?;
        let res = homodyne_condition(
            &joint,
            &HomodyneSpec {
                functional: round.functional.clone(),
                lo: -dp,
                hi: dp,
                measured_modes: round.measured_modes.clone(),
            },
            &GridPolicy::default(),
        )?;
        if res.path != ConditionPath::Exact {
            return Err(Error::BadParameter {
                name: "multicopy",
                reason: "conditioning left the exact path: branch covariances differ".into(),
            });
        }
        cumulative *= res.success_prob;
        register = res.mixture.renormalize()?.prune(prune_tol)?;
        let fidelity = register.fidelity_to_pure(&round.target)?;
        let variance = register.quadrature_variance(&round.variance_functional)?;
        records.push(IterationRecord {
            mixture: register.clone(),
            cumulative_success: cumulative,
            fidelity,
            variance,
        });
    }
    Ok((records, cumulative))
}

/// Probabilistic multi-copy squeezing distillation with N copies (N−1
/// rounds). `thresholds` follows [`resolve_thresholds`]; the default accept
/// half-width is e^{−r}.
pub fn multicopy_squeeze(
    model: &SqueezeNoiseModel,
    n_copies: usize,
    thresholds: &[f64],
) -> Result<ProtocolResult> {
    multicopy_squeeze_impl(model, n_copies, thresholds, DEFAULT_PRUNE_TOL)
}

fn multicopy_squeeze_impl(
    model: &SqueezeNoiseModel,
    n_copies: usize,
    thresholds: &[f64],
    prune_tol: f64,
) -> Result<ProtocolResult> {
    if n_copies < 2 {
        return Err(Error::BadParameter {
            name: "N",
            reason: format!("need at least 2 copies, got {n_copies}"),
        });
    }
    let dps = resolve_thresholds(n_copies - 1, thresholds, (-model.r).exp())?;
    let round = MulticopyRound {
        fresh: &|| model.build(),
        mixer: beam_splitter(2, -FRAC_PI_4, 0, 1)?,
        functional: DVector::from_vec(vec![0.0, 0.0, 1.0, 0.0]),
        measured_modes: vec![1],
        target: model.target(),
        variance_functional: DVector::from_vec(vec![1.0, 0.0]),
    };
    let (iterations, cumulative) = run_multicopy(&round, model.build()?, &dps, prune_tol)?;
    let last = iterations.last().expect("at least one round");
    Ok(ProtocolResult {
        summary: SummaryRow {
            protocol: ProtocolKind::MulticopySqueeze,
            r: model.r,
            p: model.p,
            t: 0.5,
            n_copies,
            d_over_sigma: model.d,
            fidelity: last.fidelity,
            x_variance: last.variance,
            success_prob: cumulative,
        },
        iterations,
    })
}

/// Probabilistic multi-copy entanglement distillation with N pair copies
/// (N−1 rounds). Each round mixes the register pair with a fresh pair on
/// per-party balanced beam splitters and measures the fresh copy's sum
/// quadrature (x̂ of its two modes)/√2 on the accept interval (−Δ′, Δ′].
pub fn multicopy_ent(
    model: &EntNoiseModel,
    n_copies: usize,
    thresholds: &[f64],
) -> Result<ProtocolResult> {
    multicopy_ent_impl(model, n_copies, thresholds, DEFAULT_PRUNE_TOL)
}

fn multicopy_ent_impl(
    model: &EntNoiseModel,
    n_copies: usize,
    thresholds: &[f64],
    prune_tol: f64,
) -> Result<ProtocolResult> {
    if n_copies < 2 {
        return Err(Error::BadParameter {
            name: "N",
            reason: format!("need at least 2 copies, got {n_copies}"),
        });
    }
    let dps = resolve_thresholds(n_copies - 1, thresholds, (-model.r).exp())?;
    let half = 0.5_f64.sqrt();
    let mut functional = DVector::zeros(8);
    functional[4] = half;
    functional[6] = half;
    let mut variance_functional = DVector::zeros(4);
    variance_functional[0] = half;
    variance_functional[2] = half;
    let round = MulticopyRound {
        fresh: &|| model.build(),
        // register modes (0,1), fresh pair (2,3); one balanced splitter per
        // party, acting on disjoint mode pairs
        mixer: beam_splitter(4, -FRAC_PI_4, 0, 2)?
            .compose(&beam_splitter(4, -FRAC_PI_4, 1, 3)?)?,
        functional,
        measured_modes: vec![2, 3],
        target: model.target(),
        variance_functional,
    };
    let (iterations, cumulative) = run_multicopy(&round, model.build()?, &dps, prune_tol)?;
    let last = iterations.last().expect("at least one round");
    Ok(ProtocolResult {
        summary: SummaryRow {
            protocol: ProtocolKind::MulticopyEnt,
            r: model.r,
            p: model.p,
            t: 0.5,
            n_copies,
            d_over_sigma: model.d / std::f64::consts::SQRT_2,
            fidelity: last.fidelity,
            x_variance: last.variance,
            success_prob: cumulative,
        },
        iterations,
    })
}

/// Parameter grid for a batch of protocol runs.
#[derive(Debug, Clone)]
pub struct SweepPlan {
    pub protocol: ProtocolKind,
    pub r: f64,
    pub p: f64,
    /// Reported displacement abscissa grid.
    pub d_over_sigma: Vec<f64>,
    /// Beam-splitter transmittances (one-shot only).
    pub transmittances: Vec<f64>,
    /// Copy counts (multi-copy only).
    pub copy_counts: Vec<usize>,
    /// Accept-threshold schedule shared by every run (multi-copy only).
    pub thresholds: Vec<f64>,
    pub grid: GridPolicy,
    /// Relative weight threshold for dropping negligible branches after each
    /// pipeline stage; [`DEFAULT_PRUNE_TOL`] unless overridden.
    pub prune_tol: f64,
}

/// Run every grid point in input order and return one summary row each.
/// The abscissa maps to a physical displacement of a (squeezing pipelines)
/// or √2·a along the first mode (entanglement pipeline: the displacement is
/// counted along the measured sum quadrature); the rows carry the grid
/// value verbatim. Identical plans give bit-identical tables.
pub fn sweep(plan: &SweepPlan) -> Result<Vec<SummaryRow>> {
    if plan.d_over_sigma.is_empty() {
        return Err(Error::BadParameter {
            name: "d_over_sigma",
            reason: "empty grid".into(),
        });
    }
    for &a in &plan.d_over_sigma {
        if !(a.is_finite() && a >= 0.0) {
            return Err(Error::BadParameter {
                name: "d_over_sigma",
                reason: format!("grid values must be nonnegative, got {a}"),
            });
        }
    }
    let mut rows = Vec::new();
    match plan.protocol {
        ProtocolKind::OneShot => {
            if plan.transmittances.is_empty() {
                return Err(Error::BadParameter {
                    name: "t",
                    reason: "empty transmittance list".into(),
                });
            }
            for &t in &plan.transmittances {
                if !(t > 0.0 && t < 1.0) {
                    return Err(Error::BadParameter {
                        name: "t",
                        reason: format!("transmittance must lie strictly in (0,1), got {t}"),
                    });
                }
                let theta = t.sqrt().acos();
                for &a in &plan.d_over_sigma {
                    let model = SqueezeNoiseModel::new(plan.r, plan.p, a)?;
                    let mut row =
                        one_shot_squeeze_impl(&model, theta, &plan.grid, plan.prune_tol)?.summary;
                    row.t = t;
                    row.d_over_sigma = a;
                    rows.push(row);
                }
            }
        }
        ProtocolKind::MulticopySqueeze => {
            for &n in require_copy_counts(plan)? {
                for &a in &plan.d_over_sigma {
                    let model = SqueezeNoiseModel::new(plan.r, plan.p, a)?;
                    let mut row =
                        multicopy_squeeze_impl(&model, n, &plan.thresholds, plan.prune_tol)?
                            .summary;
                    row.d_over_sigma = a;
                    rows.push(row);
                }
            }
        }
        ProtocolKind::MulticopyEnt => {
            for &n in require_copy_counts(plan)? {
                for &a in &plan.d_over_sigma {
                    let model =
                        EntNoiseModel::new(plan.r, plan.p, a * std::f64::consts::SQRT_2)?;
                    let mut row =
                        multicopy_ent_impl(&model, n, &plan.thresholds, plan.prune_tol)?.summary;
                    row.d_over_sigma = a;
                    rows.push(row);
                }
            }
        }
    }
    Ok(rows)
}

fn require_copy_counts(plan: &SweepPlan) -> Result<&[usize]> {
    if plan.copy_counts.is_empty() {
        return Err(Error::BadParameter {
            name: "N",
            reason: "empty copy-count list".into(),
        });
    }
    Ok(&plan.copy_counts)
}
