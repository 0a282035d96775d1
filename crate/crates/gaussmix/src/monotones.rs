//! Resource measures for Gaussian mixtures: the scale-factor measure κ for
//! the squeezing and two-mode entanglement free sets, its mixture upper
//! bound, and the aggregate-variance measures.
//!
//! Free sets (on covariance matrices): the squeezing free set is
//! {V : V ⪰ 𝟙}; the entanglement free set (one mode against one mode) is the
//! set of separable two-mode covariances, tested by partial transposition.
//! Both are upward closed. κ(V) is the least t ≥ 1 with tV free — for
//! squeezing that has the closed form max(1, 1/λ_min(V)); for entanglement
//! it is found by bisection on the separability test.

use nalgebra::{DMatrix, DVector};

use crate::mixture::GaussianMixture;
use crate::symplectic::{physicality_margin, PHYSICALITY_SLACK};
use crate::{Error, Result};

/// Reject anything that is not a physical covariance matrix.
fn require_valid(cov: &DMatrix<f64>) -> Result<()> {
    let margin = physicality_margin(cov)?;
    if margin < -PHYSICALITY_SLACK {
        return Err(Error::NotPhysical(margin));
    }
    Ok(())
}

/// Which free set the scale-factor measure is taken against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FreeSetSpec {
    /// Covariances dominating the vacuum: V ⪰ 𝟙.
    Squeezing,
    /// Separable two-mode covariances (one mode against one mode).
    Entanglement1x1,
}

/// Evidence accompanying a monotone value.
#[derive(Debug, Clone)]
pub enum Witness {
    /// Least scale factor t with tV inside the free set.
    Scale(f64),
    /// Quadrature direction attaining the minimal aggregate variance.
    Direction(DVector<f64>),
    /// Number of branches in the explicit decomposition the bound used.
    Decomposition(usize),
}

impl std::fmt::Display for Witness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Witness::Scale(t) => write!(f, "t={t:.9}"),
            Witness::Direction(v) => {
                write!(f, "direction=[")?;
                for (i, x) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x:.6}")?;
                }
                write!(f, "]")
            }
            Witness::Decomposition(k) => write!(f, "branches={k}"),
        }
    }
}

/// A monotone value together with the object certifying it.
#[derive(Debug, Clone)]
pub struct MonotoneReport {
    /// The measure's value (≥ 1 for scale-factor measures, ≥ 0 for variances).
    pub value: f64,
    /// Certifying witness.
    pub witness: Witness,
}

/// Smallest eigenvalue of a symmetric matrix and its unit eigenvector.
fn min_eig_pair(m: &DMatrix<f64>) -> (f64, DVector<f64>) {
    let eig = m.clone().symmetric_eigen();
    let mut idx = 0;
    for (i, &v) in eig.eigenvalues.iter().enumerate() {
        if v < eig.eigenvalues[idx] {
            idx = i;
        }
    }
    (eig.eigenvalues[idx], eig.eigenvectors.column(idx).into_owned())
}

/// κ against the squeezing free set: max(1, 1/λ_min(V)), the least t ≥ 1
/// with tV ⪰ 𝟙.
pub fn kappa_squeeze(cov: &DMatrix<f64>) -> Result<MonotoneReport> {
    require_valid(cov)?;
    let (lam_min, _) = min_eig_pair(cov);
    let value = (1.0 / lam_min).max(1.0);
    Ok(MonotoneReport {
        value,
        witness: Witness::Scale(value),
    })
}

/// Partial-transpose separability test for a two-mode covariance:
/// separable iff ΛVΛ + iΩ ⪰ 0 with Λ = diag(1,1,1,−1), within slack 1e−9
/// (boundary states count as separable).
pub fn is_separable_1x1(cov: &DMatrix<f64>) -> Result<bool> {
    require_valid(cov)?;
    if cov.nrows() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            got: cov.nrows(),
        });
    }
    Ok(ppt_margin(cov)? >= -PHYSICALITY_SLACK)
}

/// Smallest eigenvalue of the partial-transpose physicality form; callers
/// validate the unscaled covariance once and rescale freely.
fn ppt_margin(cov: &DMatrix<f64>) -> Result<f64> {
    let mut pt = cov.clone();
    for i in 0..4 {
        pt[(3, i)] = -pt[(3, i)];
        pt[(i, 3)] = -pt[(i, 3)];
    }
    physicality_margin(&pt)
}

/// κ against the entanglement free set: the least t ≥ 1 with tV separable,
/// located by bracket doubling and bisection to absolute tolerance 1e−9.
pub fn kappa_ent(cov: &DMatrix<f64>) -> Result<MonotoneReport> {
    require_valid(cov)?;
    if cov.nrows() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            got: cov.nrows(),
        });
    }
    let separable_at = |t: f64| -> Result<bool> {
        Ok(ppt_margin(&(cov * t))? >= -PHYSICALITY_SLACK)
    };
    if separable_at(1.0)? {
        return Ok(MonotoneReport {
            value: 1.0,
            witness: Witness::Scale(1.0),
        });
    }
    let mut hi = 2.0;
    let mut doublings = 0;
    while !separable_at(hi)? {
        hi *= 2.0;
        doublings += 1;
        if doublings > 60 {
            return Err(Error::BadParameter {
                name: "kappa_ent",
                reason: format!("no separable scale found below t={hi:e}"),
            });
        }
    }
    let mut lo = (hi / 2.0).max(1.0);
    let mut iters = 0;
    while hi - lo > 1e-9 && iters < 200 {
        let mid = 0.5 * (lo + hi);
        if separable_at(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
        iters += 1;
    }
    Ok(MonotoneReport {
        value: hi,
        witness: Witness::Scale(hi),
    })
}

/// Upper bound on the convex-roof scale-factor measure of a mixture:
/// Σ_λ w_λ κ(V_λ) over the mixture's explicit decomposition. The infimum
/// over all decompositions is out of scope; the name says "ub" so the bound
/// is not mistaken for it.
pub fn kappa_tilde_ub(mix: &GaussianMixture, free_set: FreeSetSpec) -> Result<MonotoneReport> {
    if mix.total_weight() < 1.0 - 1e-9 {
        return Err(Error::NotNormalized(mix.total_weight()));
    }
    let mut value = 0.0;
    for (w, state) in mix.branches() {
        let kappa = match free_set {
            FreeSetSpec::Squeezing => kappa_squeeze(state.cov())?.value,
            FreeSetSpec::Entanglement1x1 => kappa_ent(state.cov())?.value,
        };
        value += w * kappa;
    }
    Ok(MonotoneReport {
        value,
        witness: Witness::Decomposition(mix.branches().len()),
    })
}

/// Minimal aggregate quadrature variance: λ_min of the mixture's aggregate
/// covariance, minimized over unit-norm quadrature directions.
pub fn m_var(mix: &GaussianMixture) -> Result<MonotoneReport> {
    let (_, cov) = mix.moments()?;
    let (lam_min, dir) = min_eig_pair(&cov);
    Ok(MonotoneReport {
        value: lam_min,
        witness: Witness::Direction(dir),
    })
}

/// The capped variant min(1, m_var), constant on all vacuum-dominating
/// mixtures and therefore monotone under passive operations, vacuum
/// appending, and partial trace.
pub fn m_var_bar(mix: &GaussianMixture) -> Result<MonotoneReport> {
    let report = m_var(mix)?;
    Ok(MonotoneReport {
        value: report.value.min(1.0),
        witness: report.witness,
    })
}
