//! Finite weighted mixtures of Gaussian states and interval-post-selected
//! homodyne measurement.
//!
//! A mixture is a list of (weight, state) branches sharing one mode count.
//! Conditioning on a homodyne outcome interval takes one of two routes:
//!
//! * **exact path** — when every branch's kept modes are uncorrelated with
//!   the measured quadrature, conditioning only reweights branches by their
//!   Gaussian interval masses (classically exact, no discretization);
//! * **grid path** — otherwise the interval is discretized on a shared
//!   Gauss–Legendre grid and each node spawns a branch with the standard
//!   Gaussian conditional mean and the outcome-independent conditioned
//!   covariance V − ccᵀ/s, c = Vℓ, s = ℓᵀVℓ.
//!
//! Success probabilities are always computed in closed form from Gaussian
//! interval masses, never from the grid.

use nalgebra::{DMatrix, DVector};

use crate::numint::{gauss_legendre_on, normal_mass, normal_pdf};
use crate::symplectic::{overlap_with_pure, purity_defect, GaussianState, SymplecticOp, PURITY_TOL};
use crate::{Error, Result};

/// Weight-sum tolerance separating normalized from subnormalized mixtures.
pub const NORM_TOL: f64 = 1e-9;
/// Kept-row correlation threshold below which the exact path applies.
pub const EXACT_PATH_TOL: f64 = 1e-10;

/// Whether the branch weights sum to 1 or to something smaller (after
/// post-selection).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormFlag {
    /// Weights sum to 1 within [`NORM_TOL`].
    Normalized,
    /// Weights sum to a value in (0, 1]; the deficit is the probability of
    /// the discarded measurement outcomes.
    Subnormalized,
}

/// A finite convex (or subconvex) combination of Gaussian states.
#[derive(Debug, Clone)]
pub struct GaussianMixture {
    branches: Vec<(f64, GaussianState)>,
    norm_flag: NormFlag,
}

/// One homodyne measurement: which quadrature combination is read out, the
/// acceptance interval, and which modes leave the register afterwards.
#[derive(Debug, Clone)]
pub struct HomodyneSpec {
    /// Functional ℓ defining the measured combination q̂ = ℓᵀx̂; must be
    /// supported on the measured modes only.
    pub functional: DVector<f64>,
    /// Lower edge of the acceptance interval (lo, hi]; may be −∞.
    pub lo: f64,
    /// Upper edge; may be +∞. lo = hi conditions on the exact outcome.
    pub hi: f64,
    /// Modes removed after the measurement.
    pub measured_modes: Vec<usize>,
}

/// Discretization policy for the grid path.
#[derive(Debug, Clone)]
pub struct GridPolicy {
    /// Gauss–Legendre node count over the (truncated) acceptance interval.
    pub nodes: usize,
    /// Support truncation half-width in standard deviations of the widest
    /// branch outcome density.
    pub support_sigmas: f64,
    /// Take the grid path even where the exact path applies (testing only).
    pub force_grid: bool,
}

impl Default for GridPolicy {
    fn default() -> Self {
        Self {
            nodes: 64,
            support_sigmas: 8.0,
            force_grid: false,
        }
    }
}

impl GridPolicy {
    /// Default policy with a different node count.
    pub fn with_nodes(nodes: usize) -> Self {
        Self {
            nodes,
            ..Self::default()
        }
    }
}

/// Which conditioning route was taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConditionPath {
    /// Classical reweighting only; no discretization error.
    Exact,
    /// Gauss–Legendre discretization of the acceptance interval.
    Grid,
}

/// Output of [`homodyne_condition`].
#[derive(Debug, Clone)]
pub struct ConditionResult {
    /// The post-measurement mixture on the kept modes (subnormalized: its
    /// total weight is the success probability, up to grid error).
    pub mixture: GaussianMixture,
    /// Closed-form probability that the outcome lands in the interval
    /// (0 for exact-point conditioning).
    pub success_prob: f64,
    /// Route taken.
    pub path: ConditionPath,
}

impl GaussianMixture {
    /// Build a mixture, deriving the normalization flag from the weight sum.
    pub fn new(branches: Vec<(f64, GaussianState)>) -> Result<Self> {
        if branches.is_empty() {
            return Err(Error::EmptyMixture);
        }
        let n = branches[0].1.n_modes();
        let mut total = 0.0;
        for (w, state) in &branches {
            if *w <= 0.0 || !w.is_finite() {
                return Err(Error::NonPositiveWeight(*w));
            }
            if state.n_modes() != n {
                return Err(Error::MixedModeCounts(n, state.n_modes()));
            }
            total += w;
        }
        if total > 1.0 + NORM_TOL {
            return Err(Error::BadParameter {
                name: "weights",
                reason: format!("sum {total} exceeds 1"),
            });
        }
        let norm_flag = if (total - 1.0).abs() <= NORM_TOL {
            NormFlag::Normalized
        } else {
            NormFlag::Subnormalized
        };
        Ok(Self { branches, norm_flag })
    }

    /// Single-branch mixture of weight 1.
    pub fn from_state(state: GaussianState) -> Self {
        Self {
            branches: vec![(1.0, state)],
            norm_flag: NormFlag::Normalized,
        }
    }

    /// Branches as (weight, state) pairs.
    pub fn branches(&self) -> &[(f64, GaussianState)] {
        &self.branches
    }

    /// Shared mode count.
    pub fn n_modes(&self) -> usize {
        self.branches[0].1.n_modes()
    }

    /// Sum of branch weights.
    pub fn total_weight(&self) -> f64 {
        self.branches.iter().map(|(w, _)| w).sum()
    }

    /// Normalization flag derived at construction.
    pub fn norm_flag(&self) -> NormFlag {
        self.norm_flag
    }

    fn require_normalized(&self) -> Result<()> {
        if self.norm_flag != NormFlag::Normalized {
            return Err(Error::NotNormalized(self.total_weight()));
        }
        Ok(())
    }

    /// Apply a symplectic operation branch by branch; weights unchanged.
    pub fn apply_op(&self, op: &SymplecticOp) -> Result<Self> {
        let branches = self
            .branches
            .iter()
            .map(|(w, s)| Ok((*w, op.apply(s)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            branches,
            norm_flag: self.norm_flag,
        })
    }

    /// Tensor product of two mixtures: branch counts multiply, weights are
    /// products (first factor outer, second inner).
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let mut branches = Vec::with_capacity(self.branches.len() * other.branches.len());
        for (wa, sa) in &self.branches {
            for (wb, sb) in &other.branches {
                branches.push((wa * wb, sa.tensor(sb)));
            }
        }
        Self::new(branches)
    }

    /// Keep only the listed modes in every branch.
    pub fn partial_trace(&self, keep_modes: &[usize]) -> Result<Self> {
        let branches = self
            .branches
            .iter()
            .map(|(w, s)| Ok((*w, s.partial_trace(keep_modes)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            branches,
            norm_flag: self.norm_flag,
        })
    }

    /// Per-branch outcome density of q̂ = ℓᵀx̂: (mean ℓᵀx̄_λ, variance ℓᵀV_λℓ).
    pub fn outcome_density(&self, functional: &DVector<f64>) -> Result<Vec<(f64, f64)>> {
        let dim = 2 * self.n_modes();
        if functional.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: functional.len(),
            });
        }
        if functional.iter().all(|&x| x == 0.0) {
            return Err(Error::BadFunctional);
        }
        Ok(self
            .branches
            .iter()
            .map(|(_, s)| {
                let mu = functional.dot(s.mean());
                let var = functional.dot(&(s.cov() * functional));
                (mu, var)
            })
            .collect())
    }

    /// Aggregate first and second moments of the mixture:
    /// x̄ = Σ w x̄_λ and V = Σ w (V_λ + x̄_λx̄_λᵀ) − x̄x̄ᵀ.
    pub fn moments(&self) -> Result<(DVector<f64>, DMatrix<f64>)> {
        self.require_normalized()?;
        let dim = 2 * self.n_modes();
        let mut mean = DVector::zeros(dim);
        let mut second = DMatrix::zeros(dim, dim);
        for (w, s) in &self.branches {
            mean += *w * s.mean();
            second += *w * (s.cov() + s.mean() * s.mean().transpose());
        }
        let cov = second - &mean * mean.transpose();
        Ok((mean, cov))
    }

    /// Variance of the quadrature combination ℓᵀx̂ in the aggregate state.
    pub fn quadrature_variance(&self, functional: &DVector<f64>) -> Result<f64> {
        let (_, cov) = self.moments()?;
        if functional.len() != cov.nrows() {
            return Err(Error::DimensionMismatch {
                expected: cov.nrows(),
                got: functional.len(),
            });
        }
        Ok(functional.dot(&(&cov * functional)))
    }

    /// Fidelity to a pure target: Σ w_λ ⟨ψ|ρ_λ|ψ⟩ by the Gaussian overlap
    /// closed form (valid branch by branch whether branches are pure or not).
    pub fn fidelity_to_pure(&self, target: &GaussianState) -> Result<f64> {
        self.require_normalized()?;
        let defect = purity_defect(target.cov())?;
        if defect > PURITY_TOL {
            return Err(Error::NotPure(defect));
        }
        if target.n_modes() != self.n_modes() {
            return Err(Error::DimensionMismatch {
                expected: 2 * self.n_modes(),
                got: 2 * target.n_modes(),
            });
        }
        Ok(self
            .branches
            .iter()
            .map(|(w, s)| w * overlap_with_pure(s, target))
            .sum())
    }

    /// Drop branches with weight below `tol` × (total weight).
    pub fn prune(&self, tol: f64) -> Result<Self> {
        if tol < 0.0 {
            return Err(Error::BadParameter {
                name: "prune_tol",
                reason: format!("must be nonnegative, got {tol}"),
            });
        }
        let threshold = tol * self.total_weight();
        let branches: Vec<_> = self
            .branches
            .iter()
            .filter(|(w, _)| *w >= threshold && *w > 0.0)
            .cloned()
            .collect();
        if branches.is_empty() {
            return Err(Error::EmptyMixture);
        }
        Ok(Self {
            branches,
            norm_flag: self.norm_flag,
        })
    }

    /// Divide all weights by the total weight, yielding a normalized mixture.
    pub fn renormalize(&self) -> Result<Self> {
        let total = self.total_weight();
        if total <= 0.0 {
            return Err(Error::ZeroSuccessProbability);
        }
        let branches = self
            .branches
            .iter()
            .map(|(w, s)| (w / total, s.clone()))
            .collect();
        Ok(Self {
            branches,
            norm_flag: NormFlag::Normalized,
        })
    }
}

fn validate_spec(mix: &GaussianMixture, spec: &HomodyneSpec) -> Result<Vec<usize>> {
    let n = mix.n_modes();
    let dim = 2 * n;
    if spec.functional.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: spec.functional.len(),
        });
    }
    if spec.measured_modes.is_empty() {
        return Err(Error::BadFunctional);
    }
    for (i, &m) in spec.measured_modes.iter().enumerate() {
        if m >= n {
            return Err(Error::ModeOutOfRange { mode: m, n_modes: n });
        }
        if spec.measured_modes[..i].contains(&m) {
            return Err(Error::EqualModes(m));
        }
    }
    let kept: Vec<usize> = (0..n).filter(|m| !spec.measured_modes.contains(m)).collect();
    if kept.is_empty() {
        return Err(Error::EmptyKeepSet);
    }
    if spec.functional.iter().all(|&x| x == 0.0) {
        return Err(Error::BadFunctional);
    }
    for &m in &kept {
        if spec.functional[2 * m] != 0.0 || spec.functional[2 * m + 1] != 0.0 {
            return Err(Error::BadFunctional);
        }
    }
    if spec.hi < spec.lo || (spec.lo == spec.hi && !spec.lo.is_finite()) {
        return Err(Error::EmptyInterval {
            lo: spec.lo,
            hi: spec.hi,
        });
    }
    Ok(kept)
}

/// Condition a normalized mixture on a homodyne outcome in (lo, hi] and
/// remove the measured modes.
///
/// The success probability is always the closed-form Gaussian interval mass
/// Σ w_λ P_λ. The output keeps branch weights subnormalized so that iterated
/// post-selections compose; callers renormalize explicitly.
pub fn homodyne_condition(
    mix: &GaussianMixture,
    spec: &HomodyneSpec,
    grid: &GridPolicy,
) -> Result<ConditionResult> {
    mix.require_normalized()?;
    let kept = validate_spec(mix, spec)?;
    if grid.nodes == 0 {
        return Err(Error::BadParameter {
            name: "grid_points",
            reason: "node count must be positive".into(),
        });
    }
    let ell = &spec.functional;
    let kept_rows: Vec<usize> = kept.iter().flat_map(|&m| [2 * m, 2 * m + 1]).collect();

    // per-branch outcome density and cross-covariance c = Vℓ
    struct BranchGeom {
        mu: f64,
        s: f64,
        c: DVector<f64>,
    }
    let geom: Vec<BranchGeom> = mix
        .branches
        .iter()
        .map(|(_, st)| {
            let c = st.cov() * ell;
            BranchGeom {
                mu: ell.dot(st.mean()),
                s: ell.dot(&c),
                c,
            }
        })
        .collect();

    let degenerate = spec.lo == spec.hi;
    let success_prob = if degenerate {
        0.0
    } else {
        mix.branches
            .iter()
            .zip(&geom)
            .map(|((w, _), g)| w * normal_mass(g.mu, g.s, spec.lo, spec.hi))
            .sum()
    };
    if !degenerate && success_prob <= 0.0 {
        return Err(Error::ZeroSuccessProbability);
    }

    let exact_ok = !degenerate
        && !grid.force_grid
        && geom
            .iter()
            .all(|g| kept_rows.iter().all(|&r| g.c[r].abs() <= EXACT_PATH_TOL));

    if exact_ok {
        let mut branches = Vec::with_capacity(mix.branches.len());
        for ((w, st), g) in mix.branches.iter().zip(&geom) {
            let mass = normal_mass(g.mu, g.s, spec.lo, spec.hi);
            if w * mass > 0.0 {
                branches.push((w * mass, st.partial_trace(&kept)?));
            }
        }
        return Ok(ConditionResult {
            mixture: GaussianMixture::new(branches)?,
            success_prob,
            path: ConditionPath::Exact,
        });
    }

    // grid path: one shared node set covering every branch's support
    let sigma_max = geom.iter().map(|g| g.s).fold(0.0_f64, f64::max).sqrt();
    let mu_min = geom.iter().map(|g| g.mu).fold(f64::INFINITY, f64::min);
    let mu_max = geom.iter().map(|g| g.mu).fold(f64::NEG_INFINITY, f64::max);
    let (nodes, node_weights) = if degenerate {
        (vec![spec.lo], vec![1.0])
    } else {
        let lo_w = spec.lo.max(mu_min - grid.support_sigmas * sigma_max);
        let hi_w = spec.hi.min(mu_max + grid.support_sigmas * sigma_max);
        if hi_w <= lo_w {
            return Err(Error::ZeroSuccessProbability);
        }
        let rule = gauss_legendre_on(grid.nodes, lo_w, hi_w);
        (rule.nodes, rule.weights)
    };

    let mut branches = Vec::with_capacity(mix.branches.len() * nodes.len());
    for ((w, st), g) in mix.branches.iter().zip(&geom) {
        // conditioned covariance is outcome-independent: V′ = V − ccᵀ/s
        let cov_full = st.cov() - &g.c * g.c.transpose() / g.s;
        let kept_cov = DMatrix::from_fn(kept_rows.len(), kept_rows.len(), |i, j| {
            cov_full[(kept_rows[i], kept_rows[j])]
        });
        for (&q, &u) in nodes.iter().zip(&node_weights) {
            let bw = w * normal_pdf(g.mu, g.s, q) * u;
            if bw <= 0.0 {
                continue;
            }
            let shift = (q - g.mu) / g.s;
            let kept_mean =
                DVector::from_fn(kept_rows.len(), |i, _| {
                    st.mean()[kept_rows[i]] + g.c[kept_rows[i]] * shift
                });
            branches.push((bw, GaussianState::new(kept_mean, kept_cov.clone())?));
        }
    }
    if branches.is_empty() {
        return Err(Error::ZeroSuccessProbability);
    }
    Ok(ConditionResult {
        mixture: GaussianMixture::new(branches)?,
        success_prob,
        path: ConditionPath::Grid,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::{
        beam_splitter, displaced_squeezed_vacuum, tmsv, GaussianState,
    };
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use nalgebra::dvector;

    /// ρ_in = (1−p)|0,r⟩⟨0,r| + p|d,r⟩⟨d,r|.
    fn noisy_squeezed(r: f64, p: f64, d: f64) -> GaussianMixture {
        GaussianMixture::new(vec![
            (1.0 - p, displaced_squeezed_vacuum(r, 0.0)),
            (p, displaced_squeezed_vacuum(r, d)),
        ])
        .unwrap()
    }

    #[test]
    fn tensor_of_two_branch_mixtures_has_product_weights() {
        let m = noisy_squeezed(0.7, 0.5, 4.0);
        let prod = m.tensor(&m).unwrap();
        assert_eq!(prod.branches().len(), 4);
        for (w, s) in prod.branches() {
            assert_relative_eq!(*w, 0.25, max_relative = 1e-15);
            assert_eq!(s.n_modes(), 2);
        }
        assert_eq!(prod.norm_flag(), NormFlag::Normalized);
    }

    #[test]
    fn outcome_density_reports_branch_marginals() {
        let ell = dvector![1.0, 0.0];
        let vac = GaussianMixture::from_state(GaussianState::vacuum(1).unwrap());
        assert_eq!(vac.outcome_density(&ell).unwrap(), vec![(0.0, 1.0)]);
        let sq = GaussianMixture::from_state(displaced_squeezed_vacuum(0.7, 0.0));
        let (mu, s) = sq.outcome_density(&ell).unwrap()[0];
        assert_abs_diff_eq!(mu, 0.0);
        assert_relative_eq!(s, (-1.4_f64).exp(), max_relative = 1e-12);
        // TMSV along x̂₊
        let h = 0.5_f64.sqrt();
        let t = GaussianMixture::from_state(tmsv(0.7));
        let (mu, s) = t.outcome_density(&dvector![h, 0.0, h, 0.0]).unwrap()[0];
        assert_abs_diff_eq!(mu, 0.0);
        assert_relative_eq!(s, (-1.4_f64).exp(), max_relative = 1e-12);
        assert!(matches!(
            t.outcome_density(&dvector![0.0, 0.0, 0.0, 0.0]),
            Err(Error::BadFunctional)
        ));
    }

    #[test]
    fn aggregate_moments_of_the_noisy_squeezed_state() {
        // Var(x̂) = e^{−2r} + p(1−p)d², Var(p̂) = e^{2r}
        let m = noisy_squeezed(0.7, 0.5, 4.0);
        let (mean, cov) = m.moments().unwrap();
        assert_relative_eq!(mean[0], 2.0, max_relative = 1e-14);
        assert_relative_eq!(
            cov[(0, 0)],
            (-1.4_f64).exp() + 4.0,
            max_relative = 1e-13
        );
        assert_relative_eq!(cov[(1, 1)], 1.4_f64.exp(), max_relative = 1e-13);
        assert_relative_eq!(
            m.quadrature_variance(&dvector![1.0, 0.0]).unwrap(),
            (-1.4_f64).exp() + 4.0,
            max_relative = 1e-13
        );
        // single branch: aggregate covariance is that branch's covariance
        let single = GaussianMixture::from_state(displaced_squeezed_vacuum(0.3, 1.0));
        let (_, cov) = single.moments().unwrap();
        assert_relative_eq!(cov[(0, 0)], (-0.6_f64).exp(), max_relative = 1e-14);
    }

    #[test]
    fn fidelity_interpolates_between_branch_overlaps() {
        let target = displaced_squeezed_vacuum(0.7, 0.0);
        // the target itself
        assert_relative_eq!(
            GaussianMixture::from_state(target.clone())
                .fidelity_to_pure(&target)
                .unwrap(),
            1.0,
            max_relative = 1e-12
        );
        // far displacement: only the undisplaced branch overlaps
        let d = 20.0 * (-1.4_f64).exp();
        let m = noisy_squeezed(0.7, 0.5, d);
        assert_abs_diff_eq!(m.fidelity_to_pure(&target).unwrap(), 0.5, epsilon = 1e-6);
        // vacuum against squeezed target: sech(0.7)
        let vac = GaussianMixture::from_state(GaussianState::vacuum(1).unwrap());
        assert_relative_eq!(
            vac.fidelity_to_pure(&target).unwrap(),
            1.0 / 0.7_f64.cosh(),
            max_relative = 1e-12
        );
        // mixed target is rejected
        let thermal = GaussianState::new(
            dvector![0.0, 0.0],
            DMatrix::from_diagonal(&dvector![2.0, 2.0]),
        )
        .unwrap();
        assert!(matches!(
            vac.fidelity_to_pure(&thermal),
            Err(Error::NotPure(_))
        ));
    }

    #[test]
    fn fidelity_is_affine_in_the_mixture() {
        let target = displaced_squeezed_vacuum(0.5, 0.0);
        let m1 = noisy_squeezed(0.5, 0.3, 1.0);
        let m2 = noisy_squeezed(0.5, 0.8, 2.5);
        let alpha = 0.37;
        let mut branches = Vec::new();
        for (w, s) in m1.branches() {
            branches.push((alpha * w, s.clone()));
        }
        for (w, s) in m2.branches() {
            branches.push(((1.0 - alpha) * w, s.clone()));
        }
        let merged = GaussianMixture::new(branches).unwrap();
        let lhs = merged.fidelity_to_pure(&target).unwrap();
        let rhs = alpha * m1.fidelity_to_pure(&target).unwrap()
            + (1.0 - alpha) * m2.fidelity_to_pure(&target).unwrap();
        assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-12);
    }

    #[test]
    fn prune_and_renormalize_behave_as_documented() {
        let m = GaussianMixture::new(vec![
            (0.1, GaussianState::vacuum(1).unwrap()),
            (0.1, displaced_squeezed_vacuum(0.2, 0.0)),
        ])
        .unwrap();
        assert_eq!(m.norm_flag(), NormFlag::Subnormalized);
        let r = m.renormalize().unwrap();
        assert_eq!(r.norm_flag(), NormFlag::Normalized);
        assert_relative_eq!(r.branches()[0].0, 0.5, max_relative = 1e-15);
        // tol = 0 keeps everything
        assert_eq!(m.prune(0.0).unwrap().branches().len(), 2);
        // a tiny branch disappears at the default tolerance
        let tiny = GaussianMixture::new(vec![
            (0.999, GaussianState::vacuum(1).unwrap()),
            (1e-15, displaced_squeezed_vacuum(0.2, 0.0)),
        ])
        .unwrap();
        assert_eq!(tiny.prune(1e-12).unwrap().branches().len(), 1);
    }

    #[test]
    fn constructor_rejects_bad_weight_sets() {
        let vac = GaussianState::vacuum(1).unwrap();
        assert!(matches!(
            GaussianMixture::new(vec![]),
            Err(Error::EmptyMixture)
        ));
        assert!(matches!(
            GaussianMixture::new(vec![(0.0, vac.clone())]),
            Err(Error::NonPositiveWeight(_))
        ));
        assert!(matches!(
            GaussianMixture::new(vec![(0.6, vac.clone()), (0.6, vac.clone())]),
            Err(Error::BadParameter { .. })
        ));
        assert!(matches!(
            GaussianMixture::new(vec![(0.5, vac.clone()), (0.5, GaussianState::vacuum(2).unwrap())]),
            Err(Error::MixedModeCounts(1, 2))
        ));
        // subnormalized input is rejected where normalization is required
        let sub = GaussianMixture::new(vec![(0.5, vac)]).unwrap();
        assert!(matches!(sub.moments(), Err(Error::NotNormalized(_))));
        assert!(matches!(
            sub.fidelity_to_pure(&displaced_squeezed_vacuum(0.1, 0.0)),
            Err(Error::NotNormalized(_))
        ));
    }

    #[test]
    fn acceptance_mass_at_one_sigma_half_width_is_squeezing_independent() {
        // an undisplaced branch with outcome variance e^{−2r}, accepted on
        // (−e^{−r}, e^{−r}], has mass erf(1/√2) for every r
        let expected = libm::erf(0.5_f64.sqrt());
        for r in [0.2, 0.5, 0.7] {
            let m = GaussianMixture::from_state(displaced_squeezed_vacuum(r, 0.0))
                .tensor(&GaussianMixture::from_state(GaussianState::vacuum(1).unwrap()))
                .unwrap();
            let spec = HomodyneSpec {
                functional: dvector![1.0, 0.0, 0.0, 0.0],
                lo: -(-r).exp(),
                hi: (-r).exp(),
                measured_modes: vec![0],
            };
            let res = homodyne_condition(&m, &spec, &GridPolicy::default()).unwrap();
            assert_eq!(res.path, ConditionPath::Exact);
            assert_abs_diff_eq!(res.success_prob, expected, epsilon = 1e-12);
            assert_abs_diff_eq!(res.mixture.total_weight(), expected, epsilon = 1e-12);
        }
    }

    #[test]
    fn exact_path_keeps_branch_states_bitwise_unchanged() {
        // identical covariance across branches ⇒ after a 50:50 beam splitter
        // the measured quadrature is uncorrelated with the kept mode, so
        // conditioning only reweights: kept states coincide, float for
        // float, with the marginals of the pre-measurement branches
        let m = noisy_squeezed(0.7, 0.5, 2.0);
        let pair = m.tensor(&m).unwrap();
        let bs = beam_splitter(2, -std::f64::consts::FRAC_PI_4, 0, 1).unwrap();
        let mixed = pair.apply_op(&bs).unwrap();
        let spec = HomodyneSpec {
            functional: dvector![0.0, 0.0, 1.0, 0.0],
            lo: -1.0,
            hi: 1.0,
            measured_modes: vec![1],
        };
        let res = homodyne_condition(&mixed, &spec, &GridPolicy::default()).unwrap();
        assert_eq!(res.path, ConditionPath::Exact);
        assert_eq!(res.mixture.branches().len(), 4);
        for ((_, got), (_, pre)) in res.mixture.branches().iter().zip(mixed.branches()) {
            let want = pre.partial_trace(&[0]).unwrap();
            assert!(got.mean().iter().zip(want.mean().iter()).all(|(a, b)| a == b));
            assert!(got.cov().iter().zip(want.cov().iter()).all(|(a, b)| a == b));
        }
    }

    #[test]
    fn exact_point_conditioning_of_the_two_mode_squeezed_state() {
        // measuring x̂₂ = q exactly leaves mode 1 with mean (−q·tanh 2r, 0)
        // and covariance diag(1/cosh 2r, cosh 2r): squeezing is heralded
        let r: f64 = 0.5;
        let q = 0.3;
        let ch = (2.0 * r).cosh();
        let m = GaussianMixture::from_state(tmsv(r));
        let spec = HomodyneSpec {
            functional: dvector![0.0, 0.0, 1.0, 0.0],
            lo: q,
            hi: q,
            measured_modes: vec![1],
        };
        let res = homodyne_condition(&m, &spec, &GridPolicy::default()).unwrap();
        assert_eq!(res.path, ConditionPath::Grid);
        assert_eq!(res.success_prob, 0.0);
        assert_eq!(res.mixture.branches().len(), 1);
        let out = res.mixture.renormalize().unwrap();
        let (mean, cov) = out.moments().unwrap();
        assert_relative_eq!(mean[0], -q * (2.0 * r).tanh(), max_relative = 1e-12);
        assert_abs_diff_eq!(mean[1], 0.0, epsilon = 1e-15);
        assert_relative_eq!(cov[(0, 0)], 1.0 / ch, max_relative = 1e-12);
        assert_relative_eq!(cov[(1, 1)], ch, max_relative = 1e-12);
        assert_abs_diff_eq!(cov[(0, 1)], 0.0, epsilon = 1e-14);
    }

    #[test]
    fn interval_conditioning_matches_frozen_reference_moments() {
        // TMSV at r = 0.5 conditioned on x̂₂ ∈ (0.3, 0.7]: aggregate moments
        // of the renormalized kept mode, frozen from an independent
        // number-basis computation
        let m = GaussianMixture::from_state(tmsv(0.5));
        let spec = HomodyneSpec {
            functional: dvector![0.0, 0.0, 1.0, 0.0],
            lo: 0.3,
            hi: 0.7,
            measured_modes: vec![1],
        };
        let res = homodyne_condition(&m, &spec, &GridPolicy::default()).unwrap();
        assert_eq!(res.path, ConditionPath::Grid);
        let out = res.mixture.renormalize().unwrap();
        let (mean, cov) = out.moments().unwrap();
        assert_abs_diff_eq!(mean[0], -0.377_518_985_864, epsilon = 1e-9);
        assert_abs_diff_eq!(cov[(0, 0)], 0.655_754_824_608_852, epsilon = 1e-9);
        assert_abs_diff_eq!(cov[(1, 1)], 1.543_080_634_815_243, epsilon = 1e-9);
        // the branch weights integrate the outcome density: total ≈ success
        assert_abs_diff_eq!(res.mixture.total_weight(), res.success_prob, epsilon = 1e-12);
    }

    #[test]
    fn forced_grid_agrees_with_the_exact_path_and_converges() {
        // the first distillation round input: two copies through a 50:50
        // beam splitter, pointer accepted on (−Δ′, Δ′]
        let r: f64 = 0.7;
        let m = noisy_squeezed(r, 0.5, 2.0);
        let pair = m.tensor(&m).unwrap();
        let bs = beam_splitter(2, -std::f64::consts::FRAC_PI_4, 0, 1).unwrap();
        let mixed = pair.apply_op(&bs).unwrap();
        let dp = (-r).exp();
        let spec = HomodyneSpec {
            functional: dvector![0.0, 0.0, 1.0, 0.0],
            lo: -dp,
            hi: dp,
            measured_modes: vec![1],
        };
        let target = displaced_squeezed_vacuum(r, 0.0);
        let exact = homodyne_condition(&mixed, &spec, &GridPolicy::default()).unwrap();
        assert_eq!(exact.path, ConditionPath::Exact);
        let f_exact = exact
            .mixture
            .renormalize()
            .unwrap()
            .fidelity_to_pure(&target)
            .unwrap();
        let grid_fid = |k: usize| {
            let policy = GridPolicy {
                nodes: k,
                force_grid: true,
                ..GridPolicy::default()
            };
            let res = homodyne_condition(&mixed, &spec, &policy).unwrap();
            assert_eq!(res.path, ConditionPath::Grid);
            assert_abs_diff_eq!(res.success_prob, exact.success_prob, epsilon = 1e-15);
            res.mixture
                .renormalize()
                .unwrap()
                .fidelity_to_pure(&target)
                .unwrap()
        };
        let errs: Vec<f64> = [8, 16, 32, 64]
            .iter()
            .map(|&k| (grid_fid(k) - f_exact).abs())
            .collect();
        assert!(errs[3] <= 1e-8, "K=64 grid error {} too large", errs[3]);
        assert!(
            errs.windows(2).all(|w| w[1] <= w[0] + 1e-15),
            "grid error not monotone: {errs:?}"
        );
    }

    #[test]
    fn interval_masses_of_complementary_intervals_sum_to_one() {
        let m = GaussianMixture::from_state(tmsv(0.5));
        let cut = 0.4;
        let below = HomodyneSpec {
            functional: dvector![0.0, 0.0, 1.0, 0.0],
            lo: f64::NEG_INFINITY,
            hi: cut,
            measured_modes: vec![1],
        };
        let above = HomodyneSpec {
            lo: cut,
            hi: f64::INFINITY,
            ..below.clone()
        };
        let g = GridPolicy::default();
        let p1 = homodyne_condition(&m, &below, &g).unwrap().success_prob;
        let p2 = homodyne_condition(&m, &above, &g).unwrap().success_prob;
        assert_abs_diff_eq!(p1 + p2, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn homodyne_rejects_malformed_measurements() {
        let m = GaussianMixture::from_state(tmsv(0.5));
        let g = GridPolicy::default();
        let base = HomodyneSpec {
            functional: dvector![0.0, 0.0, 1.0, 0.0],
            lo: -1.0,
            hi: 1.0,
            measured_modes: vec![1],
        };
        // functional supported on a kept mode
        let mut bad = base.clone();
        bad.functional = dvector![1.0, 0.0, 1.0, 0.0];
        assert!(matches!(
            homodyne_condition(&m, &bad, &g),
            Err(Error::BadFunctional)
        ));
        // measuring every mode leaves nothing
        let mut bad = base.clone();
        bad.measured_modes = vec![0, 1];
        bad.functional = dvector![0.0, 0.0, 1.0, 0.0];
        assert!(matches!(
            homodyne_condition(&m, &bad, &g),
            Err(Error::EmptyKeepSet)
        ));
        // inverted interval
        let mut bad = base.clone();
        bad.lo = 1.0;
        bad.hi = -1.0;
        assert!(matches!(
            homodyne_condition(&m, &bad, &g),
            Err(Error::EmptyInterval { .. })
        ));
        // degenerate interval must sit at a finite outcome
        let mut bad = base.clone();
        bad.lo = f64::NEG_INFINITY;
        bad.hi = f64::NEG_INFINITY;
        assert!(matches!(
            homodyne_condition(&m, &bad, &g),
            Err(Error::EmptyInterval { .. })
        ));
        // an interval carrying no mass at all
        let mut bad = base.clone();
        bad.lo = 100.0;
        bad.hi = 101.0;
        assert!(matches!(
            homodyne_condition(&m, &bad, &g),
            Err(Error::ZeroSuccessProbability)
        ));
        // subnormalized input must be renormalized first
        let sub = GaussianMixture::new(vec![(0.5, tmsv(0.5))]).unwrap();
        assert!(matches!(
            homodyne_condition(&sub, &base, &g),
            Err(Error::NotNormalized(_))
        ));
    }
}
