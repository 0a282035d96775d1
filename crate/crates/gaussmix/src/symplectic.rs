//! Single Gaussian states and the symplectic operations that move them.
//!
//! Convention: ħ = 2, quadrature ordering x₁, p₁, …, x_n, p_n, vacuum
//! covariance 𝟙. The symplectic form Ω is block-diagonal with 2×2 blocks
//! [[0, 1], [−1, 0]]; a symmetric matrix V is a physical covariance matrix
//! iff V + iΩ ⪰ 0, which vacuum and all pure squeezed states saturate.

use nalgebra::{DMatrix, DVector};

use crate::{Error, Result};

/// Maximum tolerated asymmetry of a covariance matrix.
pub const SYMMETRY_TOL: f64 = 1e-10;
/// Slack allowed on the minimum eigenvalue of V + iΩ.
pub const PHYSICALITY_SLACK: f64 = 1e-9;
/// Maximum deviation of symplectic eigenvalues from 1 for a pure state.
pub const PURITY_TOL: f64 = 1e-8;
/// Maximum tolerated defect in S Ω Sᵀ = Ω.
pub const SYMPLECTIC_TOL: f64 = 1e-10;

/// The symplectic form on `n_modes` modes: ⊕ [[0, 1], [−1, 0]].
pub fn omega(n_modes: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(2 * n_modes, 2 * n_modes);
    for k in 0..n_modes {
        m[(2 * k, 2 * k + 1)] = 1.0;
        m[(2 * k + 1, 2 * k)] = -1.0;
    }
    m
}

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |acc, &x| acc.max(x.abs()))
}

/// Minimum eigenvalue of the Hermitian matrix V + iΩ, computed through the
/// real symmetric embedding [[V, −Ω], [Ω, V]] whose spectrum is that of
/// V + iΩ with every eigenvalue doubled.
///
/// A symmetric V is a physical covariance matrix iff this margin is
/// ≥ −[`PHYSICALITY_SLACK`].
pub fn physicality_margin(cov: &DMatrix<f64>) -> Result<f64> {
    let dim = cov.nrows();
    if dim == 0 || dim % 2 != 0 || cov.ncols() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim.max(2),
            got: cov.ncols(),
        });
    }
    let asym = max_abs(&(cov - cov.transpose()));
    if asym > SYMMETRY_TOL {
        return Err(Error::NotSymmetric(asym));
    }
    let om = omega(dim / 2);
    let mut emb = DMatrix::zeros(2 * dim, 2 * dim);
    emb.view_mut((0, 0), (dim, dim)).copy_from(cov);
    emb.view_mut((0, dim), (dim, dim)).copy_from(&(-&om));
    emb.view_mut((dim, 0), (dim, dim)).copy_from(&om);
    emb.view_mut((dim, dim), (dim, dim)).copy_from(cov);
    let eig = emb.symmetric_eigenvalues();
    Ok(eig.min())
}

/// `true` iff `cov` is symmetric and satisfies the uncertainty relation
/// V + iΩ ⪰ 0 within [`PHYSICALITY_SLACK`].
pub fn is_valid_cm(cov: &DMatrix<f64>) -> Result<bool> {
    Ok(physicality_margin(cov)? >= -PHYSICALITY_SLACK)
}

/// Symplectic eigenvalues ν₁ ≥ … ≥ ν_n of a valid covariance matrix,
/// obtained as the paired singular values of V^{1/2} Ω V^{1/2}.
pub fn symplectic_eigenvalues(cov: &DMatrix<f64>) -> Result<Vec<f64>> {
    let dim = cov.nrows();
    let asym = max_abs(&(cov - cov.transpose()));
    if asym > SYMMETRY_TOL {
        return Err(Error::NotSymmetric(asym));
    }
    let eig = cov.clone().symmetric_eigen();
    if eig.eigenvalues.min() <= 0.0 {
        return Err(Error::SingularCovariance);
    }
    let sqrt_vals = eig.eigenvalues.map(|x| x.sqrt());
    let root = &eig.eigenvectors * DMatrix::from_diagonal(&sqrt_vals) * eig.eigenvectors.transpose();
    let k = &root * omega(dim / 2) * &root;
    let mut svals: Vec<f64> = k.svd(false, false).singular_values.iter().copied().collect();
    svals.sort_by(|a, b| b.total_cmp(a));
    // antisymmetry of K doubles every singular value; average each pair
    Ok((0..dim / 2)
        .map(|j| 0.5 * (svals[2 * j] + svals[2 * j + 1]))
        .collect())
}

/// `true` iff every symplectic eigenvalue of `cov` is 1 within [`PURITY_TOL`].
pub fn is_pure(cov: &DMatrix<f64>) -> Result<bool> {
    Ok(purity_defect(cov)? <= PURITY_TOL)
}

/// Largest deviation |ν − 1| of the symplectic eigenvalues from 1.
pub fn purity_defect(cov: &DMatrix<f64>) -> Result<f64> {
    let nu = symplectic_eigenvalues(cov)?;
    Ok(nu.iter().fold(0.0, |acc: f64, &v| acc.max((v - 1.0).abs())))
}

/// An n-mode Gaussian state: mean vector and covariance matrix.
///
/// Construction validates symmetry and physicality, so every held value is a
/// genuine quantum state; all operations are pure functions.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    mean: DVector<f64>,
    cov: DMatrix<f64>,
}

impl GaussianState {
    /// Build a state from its first and second moments.
    pub fn new(mean: DVector<f64>, cov: DMatrix<f64>) -> Result<Self> {
        let dim = mean.len();
        if dim == 0 || dim % 2 != 0 {
            return Err(Error::ZeroModes);
        }
        if cov.nrows() != dim || cov.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: cov.nrows().max(cov.ncols()),
            });
        }
        let margin = physicality_margin(&cov)?;
        if margin < -PHYSICALITY_SLACK {
            return Err(Error::NotPhysical(margin));
        }
        Ok(Self { mean, cov })
    }

    /// The vacuum state on `n_modes` modes: zero mean, identity covariance.
    pub fn vacuum(n_modes: usize) -> Result<Self> {
        if n_modes == 0 {
            return Err(Error::ZeroModes);
        }
        Ok(Self {
            mean: DVector::zeros(2 * n_modes),
            cov: DMatrix::identity(2 * n_modes, 2 * n_modes),
        })
    }

    /// Number of modes.
    pub fn n_modes(&self) -> usize {
        self.mean.len() / 2
    }

    /// Quadrature mean vector (length 2n).
    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    /// Covariance matrix (2n × 2n).
    pub fn cov(&self) -> &DMatrix<f64> {
        &self.cov
    }

    /// `true` iff all symplectic eigenvalues are 1 within [`PURITY_TOL`].
    pub fn is_pure(&self) -> Result<bool> {
        is_pure(&self.cov)
    }

    /// Direct sum of two states: means concatenate, covariances block-stack.
    pub fn tensor(&self, other: &Self) -> Self {
        let (da, db) = (self.mean.len(), other.mean.len());
        let mut mean = DVector::zeros(da + db);
        mean.rows_mut(0, da).copy_from(&self.mean);
        mean.rows_mut(da, db).copy_from(&other.mean);
        let mut cov = DMatrix::zeros(da + db, da + db);
        cov.view_mut((0, 0), (da, da)).copy_from(&self.cov);
        cov.view_mut((da, da), (db, db)).copy_from(&other.cov);
        Self { mean, cov }
    }

    /// Keep only the listed modes (in the listed order), discarding the rest.
    pub fn partial_trace(&self, keep_modes: &[usize]) -> Result<Self> {
        let n = self.n_modes();
        if keep_modes.is_empty() {
            return Err(Error::EmptyKeepSet);
        }
        for (i, &m) in keep_modes.iter().enumerate() {
            if m >= n {
                return Err(Error::ModeOutOfRange { mode: m, n_modes: n });
            }
            if keep_modes[..i].contains(&m) {
                return Err(Error::EqualModes(m));
            }
        }
        let rows: Vec<usize> = keep_modes
            .iter()
            .flat_map(|&m| [2 * m, 2 * m + 1])
            .collect();
        let dim = rows.len();
        let mean = DVector::from_fn(dim, |i, _| self.mean[rows[i]]);
        let cov = DMatrix::from_fn(dim, dim, |i, j| self.cov[(rows[i], rows[j])]);
        Ok(Self { mean, cov })
    }

    /// Wigner function value at a phase-space point (length-2n vector):
    /// exp[−δᵀV⁻¹δ] / ((π/2)ⁿ √det V) with δ the offset from the mean.
    ///
    /// With this normalization the phase-space volume element is d²ⁿx / 2ⁿ.
    pub fn wigner(&self, point: &DVector<f64>) -> Result<f64> {
        let dim = self.mean.len();
        if point.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: point.len(),
            });
        }
        let chol = self
            .cov
            .clone()
            .cholesky()
            .ok_or(Error::SingularCovariance)?;
        let delta = point - &self.mean;
        let quad = delta.dot(&chol.solve(&delta));
        let n = self.n_modes() as f64;
        let norm = (std::f64::consts::FRAC_PI_2).powf(n) * chol.determinant().sqrt();
        Ok((-quad).exp() / norm)
    }
}

/// Overlap |⟨ψ_a|ψ_b⟩|² of two pure Gaussian states:
/// 2ⁿ det(V_a + V_b)^{−1/2} exp(−½ δᵀ (V_a + V_b)⁻¹ δ).
///
/// Mixed input on either side is rejected; for mixtures use the
/// mixture-level fidelity, which reduces to this branch by branch.
pub fn pure_overlap(a: &GaussianState, b: &GaussianState) -> Result<f64> {
    if a.mean.len() != b.mean.len() {
        return Err(Error::DimensionMismatch {
            expected: a.mean.len(),
            got: b.mean.len(),
        });
    }
    for s in [a, b] {
        let defect = purity_defect(&s.cov)?;
        if defect > PURITY_TOL {
            return Err(Error::NotPure(defect));
        }
    }
    Ok(overlap_with_pure(a, b))
}

/// Tr[ρ_a |ψ_b⟩⟨ψ_b|] for a Gaussian ρ_a (pure or mixed) against a pure
/// target, by the same closed form as [`pure_overlap`]; the caller is
/// responsible for the target's purity.
pub(crate) fn overlap_with_pure(a: &GaussianState, b: &GaussianState) -> f64 {
    let sum = &a.cov + &b.cov;
    let chol = sum
        .cholesky()
        .expect("sum of two physical covariance matrices is positive definite");
    let delta = &a.mean - &b.mean;
    let quad = delta.dot(&chol.solve(&delta));
    let n = a.n_modes() as f64;
    (2.0_f64.powf(n) / chol.determinant().sqrt() * (-0.5 * quad).exp()).clamp(0.0, 1.0)
}

/// A Gaussian unitary on quadratures: x̂ ↦ S x̂ + d with S symplectic.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticOp {
    s: DMatrix<f64>,
    d: DVector<f64>,
}

impl SymplecticOp {
    /// Build an operation, verifying S Ω Sᵀ = Ω within [`SYMPLECTIC_TOL`].
    pub fn new(s: DMatrix<f64>, d: DVector<f64>) -> Result<Self> {
        let dim = s.nrows();
        if dim == 0 || dim % 2 != 0 || s.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim.max(2),
                got: s.ncols(),
            });
        }
        if d.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: d.len(),
            });
        }
        let om = omega(dim / 2);
        let defect = max_abs(&(&s * &om * s.transpose() - &om));
        if defect > SYMPLECTIC_TOL {
            return Err(Error::NotSymmetric(defect));
        }
        Ok(Self { s, d })
    }

    /// Identity on `n_modes` modes.
    pub fn identity(n_modes: usize) -> Self {
        Self {
            s: DMatrix::identity(2 * n_modes, 2 * n_modes),
            d: DVector::zeros(2 * n_modes),
        }
    }

    /// Pure displacement: x̂ ↦ x̂ + d.
    pub fn displacement(d: DVector<f64>) -> Self {
        let dim = d.len();
        Self {
            s: DMatrix::identity(dim, dim),
            d,
        }
    }

    /// Number of modes acted on.
    pub fn n_modes(&self) -> usize {
        self.s.nrows() / 2
    }

    /// Symplectic matrix.
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.s
    }

    /// Displacement vector.
    pub fn shift(&self) -> &DVector<f64> {
        &self.d
    }

    /// Composition: apply `self` after `inner` (self ∘ inner).
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if self.s.nrows() != inner.s.nrows() {
            return Err(Error::DimensionMismatch {
                expected: self.s.nrows(),
                got: inner.s.nrows(),
            });
        }
        Ok(Self {
            s: &self.s * &inner.s,
            d: &self.s * &inner.d + &self.d,
        })
    }

    /// Lift a k-mode operation onto the listed modes of an `n_modes`
    /// register, acting as the identity elsewhere.
    pub fn on_modes(&self, n_modes: usize, modes: &[usize]) -> Result<Self> {
        let k = self.n_modes();
        if modes.len() != k {
            return Err(Error::DimensionMismatch {
                expected: k,
                got: modes.len(),
            });
        }
        for (i, &m) in modes.iter().enumerate() {
            if m >= n_modes {
                return Err(Error::ModeOutOfRange {
                    mode: m,
                    n_modes,
                });
            }
            if modes[..i].contains(&m) {
                return Err(Error::EqualModes(m));
            }
        }
        let mut s = DMatrix::identity(2 * n_modes, 2 * n_modes);
        let mut d = DVector::zeros(2 * n_modes);
        for (i, &mi) in modes.iter().enumerate() {
            d[2 * mi] = self.d[2 * i];
            d[2 * mi + 1] = self.d[2 * i + 1];
            for (j, &mj) in modes.iter().enumerate() {
                for a in 0..2 {
                    for b in 0..2 {
                        s[(2 * mi + a, 2 * mj + b)] = self.s[(2 * i + a, 2 * j + b)];
                    }
                }
            }
        }
        Ok(Self { s, d })
    }

    /// Act on a state: mean ↦ S·mean + d, cov ↦ S·cov·Sᵀ.
    pub fn apply(&self, state: &GaussianState) -> Result<GaussianState> {
        if self.s.nrows() != state.mean.len() {
            return Err(Error::DimensionMismatch {
                expected: state.mean.len(),
                got: self.s.nrows(),
            });
        }
        GaussianState::new(
            &self.s * &state.mean + &self.d,
            &self.s * &state.cov * self.s.transpose(),
        )
    }
}

/// Single-mode squeezer S(r) = diag(e^{−r}, e^{r}); on vacuum it produces
/// covariance diag(e^{−2r}, e^{2r}).
pub fn single_mode_squeezer(r: f64) -> SymplecticOp {
    SymplecticOp {
        s: DMatrix::from_diagonal(&DVector::from_vec(vec![(-r).exp(), r.exp()])),
        d: DVector::zeros(2),
    }
}

/// Two-mode squeezer: on two-mode vacuum it squeezes the non-local
/// quadratures, Var(x̂₊) = Var(p̂₋) = e^{−2r} with x̂₊ = (x̂₁ + x̂₂)/√2.
pub fn two_mode_squeezer(r: f64) -> SymplecticOp {
    let (ch, sh) = (r.cosh(), r.sinh());
    let mut s = DMatrix::identity(4, 4);
    s[(0, 0)] = ch;
    s[(1, 1)] = ch;
    s[(2, 2)] = ch;
    s[(3, 3)] = ch;
    // cross blocks −sinh(r)·Z with Z = diag(1, −1)
    s[(0, 2)] = -sh;
    s[(1, 3)] = sh;
    s[(2, 0)] = -sh;
    s[(3, 1)] = sh;
    SymplecticOp {
        s,
        d: DVector::zeros(4),
    }
}

/// Beam splitter with transmissivity t = cos²θ mixing `mode_a` and `mode_b`
/// of an `n_modes` register:
/// x_a ↦ cosθ·x_a + sinθ·x_b, x_b ↦ −sinθ·x_a + cosθ·x_b (same on p).
pub fn beam_splitter(n_modes: usize, theta: f64, mode_a: usize, mode_b: usize) -> Result<SymplecticOp> {
    if mode_a == mode_b {
        return Err(Error::EqualModes(mode_a));
    }
    let (c, s) = (theta.cos(), theta.sin());
    let mut local = DMatrix::zeros(4, 4);
    for q in 0..2 {
        local[(q, q)] = c;
        local[(q, 2 + q)] = s;
        local[(2 + q, q)] = -s;
        local[(2 + q, 2 + q)] = c;
    }
    SymplecticOp {
        s: local,
        d: DVector::zeros(4),
    }
    .on_modes(n_modes, &[mode_a, mode_b])
}

/// Phase rotation by φ on one mode of an `n_modes` register:
/// (x, p) ↦ (cosφ·x + sinφ·p, −sinφ·x + cosφ·p).
pub fn phase_shift(n_modes: usize, phi: f64, mode: usize) -> Result<SymplecticOp> {
    let (c, s) = (phi.cos(), phi.sin());
    let local = DMatrix::from_row_slice(2, 2, &[c, s, -s, c]);
    SymplecticOp {
        s: local,
        d: DVector::zeros(2),
    }
    .on_modes(n_modes, &[mode])
}

/// The pure state obtained by squeezing vacuum with parameter `r` and then
/// displacing by `d_x` along x̂: mean (d_x, 0), covariance diag(e^{−2r}, e^{2r}).
pub fn displaced_squeezed_vacuum(r: f64, d_x: f64) -> GaussianState {
    GaussianState {
        mean: DVector::from_vec(vec![d_x, 0.0]),
        cov: DMatrix::from_diagonal(&DVector::from_vec(vec![(-2.0 * r).exp(), (2.0 * r).exp()])),
    }
}

/// The two-mode squeezed vacuum state with parameter `r`.
pub fn tmsv(r: f64) -> GaussianState {
    let vac = GaussianState::vacuum(2).expect("two modes is a valid register");
    two_mode_squeezer(r)
        .apply(&vac)
        .expect("squeezing vacuum stays physical")
}
