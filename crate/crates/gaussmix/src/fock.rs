//! Truncated number-basis oracle.
//!
//! Brute-force cross-check for the Gaussian closed forms: squeezed displaced
//! states and two-mode squeezed vacuum expanded in the photon-number basis,
//! with overlaps, position-interval probabilities, and interval-conditioned
//! moments computed directly from wavefunctions. Scope is one and two modes
//! at small cutoff; it validates formulas rather than simulating protocols.
//!
//! Displacements here are along x̂ with real squeezing, so every amplitude is
//! real; the ħ = 2 scaling makes the vacuum position variance 1.

use nalgebra::{DMatrix, DVector};

use crate::numint::{adaptive_simpson, gauss_legendre_on};
use crate::{Error, Result};

/// Hard ceiling on the admissible norm deficit 1 − ‖ψ‖² at construction.
pub const NORM_DEFICIT_TOL: f64 = 1e-6;
/// Position integrations are clipped to this half-width (quadrature units).
pub const POSITION_CLIP: f64 = 10.0;

/// A pure state on one or two modes, truncated at photon number `cutoff`.
///
/// Coefficients are stored flat; for two modes the amplitude of |m, n⟩ sits
/// at index m·(cutoff + 1) + n.
#[derive(Debug, Clone)]
pub struct FockVector {
    n_modes: usize,
    cutoff: usize,
    coeffs: DVector<f64>,
}

/// First and second quadrature moments of a single mode.
#[derive(Debug, Clone)]
pub struct ModeMoments {
    /// (⟨x̂⟩, ⟨p̂⟩).
    pub mean: DVector<f64>,
    /// 2×2 covariance of (x̂, p̂).
    pub cov: DMatrix<f64>,
}

/// Result of conditioning a two-mode state on a position interval of its
/// second mode: the kept mode's (unnormalized) density matrix in the number
/// basis plus the interval probability.
#[derive(Debug, Clone)]
pub struct Conditioned {
    rho: DMatrix<f64>,
    probability: f64,
}

impl Conditioned {
    /// Probability mass of the acceptance interval (0 for exact-point
    /// conditioning, where no finite mass exists).
    pub fn probability(&self) -> f64 {
        self.probability
    }

    /// Moments of the renormalized conditioned mode.
    pub fn moments(&self) -> ModeMoments {
        density_moments(&self.rho)
    }
}

impl FockVector {
    /// Number of modes (1 or 2).
    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    /// Truncation photon number.
    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    /// Flat coefficient vector.
    pub fn coeffs(&self) -> &DVector<f64> {
        &self.coeffs
    }

    /// 1 − ‖ψ‖²: the probability weight lost to truncation.
    pub fn norm_deficit(&self) -> f64 {
        1.0 - self.coeffs.dot(&self.coeffs)
    }

    /// Mean photon number of one mode (the reduced state for two modes).
    pub fn mean_photon(&self, mode: usize) -> Result<f64> {
        if mode >= self.n_modes {
            return Err(Error::ModeOutOfRange {
                mode,
                n_modes: self.n_modes,
            });
        }
        let k = self.cutoff + 1;
        let mut total = 0.0;
        for (idx, &c) in self.coeffs.iter().enumerate() {
            let n = if self.n_modes == 1 {
                idx
            } else if mode == 0 {
                idx / k
            } else {
                idx % k
            };
            total += (n as f64) * c * c;
        }
        Ok(total / self.coeffs.dot(&self.coeffs))
    }

    /// Quadrature moments of a single-mode state.
    pub fn moments(&self) -> Result<ModeMoments> {
        if self.n_modes != 1 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                got: self.n_modes,
            });
        }
        let rho = &self.coeffs * self.coeffs.transpose();
        Ok(density_moments(&rho))
    }

    /// Mean vector and covariance matrix of a two-mode state in the
    /// (x₁, p₁, x₂, p₂) layout, for comparison against the Gaussian picture.
    pub fn two_mode_moments(&self) -> Result<(DVector<f64>, DMatrix<f64>)> {
        if self.n_modes != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                got: self.n_modes,
            });
        }
        let k = self.cutoff + 1;
        let norm = self.coeffs.dot(&self.coeffs);
        let x1 = ladder_x(&self.coeffs, k, 0);
        let x2 = ladder_x(&self.coeffs, k, 1);
        let g1 = ladder_g(&self.coeffs, k, 0);
        let g2 = ladder_g(&self.coeffs, k, 1);
        // real amplitudes: ⟨p̂⟩ = 0 and all x–p cross moments vanish
        let mean_x1 = self.coeffs.dot(&x1) / norm;
        let mean_x2 = self.coeffs.dot(&x2) / norm;
        let mean = DVector::from_vec(vec![mean_x1, 0.0, mean_x2, 0.0]);
        let mut cov = DMatrix::zeros(4, 4);
        cov[(0, 0)] = x1.dot(&x1) / norm - mean_x1 * mean_x1;
        cov[(2, 2)] = x2.dot(&x2) / norm - mean_x2 * mean_x2;
        cov[(0, 2)] = x1.dot(&x2) / norm - mean_x1 * mean_x2;
        cov[(2, 0)] = cov[(0, 2)];
        // p̂ = i(â† − â): ⟨p_j p_k⟩ = g_j · g_k for real amplitudes
        cov[(1, 1)] = g1.dot(&g1) / norm;
        cov[(3, 3)] = g2.dot(&g2) / norm;
        cov[(1, 3)] = g1.dot(&g2) / norm;
        cov[(3, 1)] = cov[(1, 3)];
        Ok((mean, cov))
    }

    /// Wavefunction values ψ(x) of a single-mode state at the given points.
    fn wavefunction(&self, xs: &[f64]) -> Vec<f64> {
        let mut out = Vec::with_capacity(xs.len());
        let mut buf = vec![0.0; self.cutoff + 1];
        for &x in xs {
            hermite_functions(x, &mut buf);
            out.push(self.coeffs.iter().zip(&buf).map(|(&c, &h)| c * h).sum());
        }
        out
    }
}

/// Apply x̂ = â + â† to a coefficient grid (`k` = cutoff + 1 per mode);
/// works for one mode (`k` = full length, mode 0) and two modes.
fn ladder_x(c: &DVector<f64>, k: usize, mode: usize) -> DVector<f64> {
    let len = c.len();
    let stride = if len == k {
        1
    } else if mode == 0 {
        k
    } else {
        1
    };
    let level = |idx: usize| -> usize {
        if len == k {
            idx
        } else if mode == 0 {
            idx / k
        } else {
            idx % k
        }
    };
    let mut out = DVector::zeros(len);
    for idx in 0..len {
        let n = level(idx);
        // â: amplitude √(n+1)·c[n+1] flows down to level n
        if n + 1 < k {
            out[idx] += ((n + 1) as f64).sqrt() * c[idx + stride];
        }
        // â†: amplitude √n·c[n−1] flows up to level n
        if n > 0 {
            out[idx] += (n as f64).sqrt() * c[idx - stride];
        }
    }
    out
}

/// Apply â† − â (so that p̂ = i·(â† − â)) to a coefficient grid.
fn ladder_g(c: &DVector<f64>, k: usize, mode: usize) -> DVector<f64> {
    let len = c.len();
    let stride = if len == k {
        1
    } else if mode == 0 {
        k
    } else {
        1
    };
    let level = |idx: usize| -> usize {
        if len == k {
            idx
        } else if mode == 0 {
            idx / k
        } else {
            idx % k
        }
    };
    let mut out = DVector::zeros(len);
    for idx in 0..len {
        let n = level(idx);
        if n > 0 {
            out[idx] += (n as f64).sqrt() * c[idx - stride];
        }
        if n + 1 < k {
            out[idx] -= ((n + 1) as f64).sqrt() * c[idx + stride];
        }
    }
    out
}

/// Moments of a (possibly unnormalized) real density matrix in the number
/// basis; the trace is divided out.
fn density_moments(rho: &DMatrix<f64>) -> ModeMoments {
    let k = rho.nrows();
    let mut a = DMatrix::zeros(k, k);
    for n in 0..k - 1 {
        a[(n, n + 1)] = ((n + 1) as f64).sqrt();
    }
    let x = &a + a.transpose();
    let d = &a - a.transpose(); // p̂ = i·dᵀ = −i·d, p̂² = −d·d... see below
    let trace = rho.trace();
    let mean_x = (rho * &x).trace() / trace;
    // p̂ = i(â† − â) = −i·d with d = â − â†, so p̂² = −d² (d is real
    // antisymmetric); real symmetric ρ makes ⟨p̂⟩ and ⟨{x̂,p̂}⟩/2 vanish.
    let x2 = (rho * &x * &x).trace() / trace;
    let p2 = -(rho * &d * &d).trace() / trace;
    let mut cov = DMatrix::zeros(2, 2);
    cov[(0, 0)] = x2 - mean_x * mean_x;
    cov[(1, 1)] = p2;
    ModeMoments {
        mean: DVector::from_vec(vec![mean_x, 0.0]),
        cov,
    }
}

/// Orthonormal position wavefunctions of the number states with ħ = 2
/// (vacuum variance ⟨x̂²⟩ = 1), filled into `buf` for n = 0..buf.len().
///
/// Uses the renormalized three-term recurrence; naive factorial formulas
/// would overflow past n ≈ 85.
fn hermite_functions(x: f64, buf: &mut [f64]) {
    let y = x / 2.0_f64.sqrt();
    let scale = 1.0 / 2.0_f64.powf(0.25);
    let h0 = std::f64::consts::PI.powf(-0.25) * (-0.5 * y * y).exp();
    if !buf.is_empty() {
        buf[0] = scale * h0;
    }
    if buf.len() > 1 {
        buf[1] = scale * 2.0_f64.sqrt() * y * h0;
    }
    for n in 1..buf.len().saturating_sub(1) {
        let nf = n as f64;
        buf[n + 1] =
            (2.0 / (nf + 1.0)).sqrt() * y * buf[n] - (nf / (nf + 1.0)).sqrt() * buf[n - 1];
    }
}

fn check_cutoff(cutoff: usize) -> Result<()> {
    if cutoff < 2 {
        return Err(Error::BadParameter {
            name: "cutoff",
            reason: format!("must be at least 2, got {cutoff}"),
        });
    }
    Ok(())
}

fn check_deficit(v: FockVector) -> Result<FockVector> {
    let deficit = v.norm_deficit();
    if deficit > NORM_DEFICIT_TOL {
        return Err(Error::CutoffTooSmall {
            cutoff: v.cutoff,
            deficit,
            tol: NORM_DEFICIT_TOL,
        });
    }
    Ok(v)
}

/// Number-basis expansion of the squeezed displaced state with squeezing `r`
/// and mean position `d` (ħ = 2: displacement amplitude α = d/2).
///
/// Seed c₀ = sech^{1/2}(r)·exp(−α²(1 + tanh r)/2) and the three-term
/// recurrence c_{n+1} = [α e^{r} c_n − sinh r·√n·c_{n−1}] / (cosh r·√(n+1)),
/// both obtained from the annihilation-eigenvector equation of the state.
pub fn fock_squeezed_displaced(r: f64, d: f64, cutoff: usize) -> Result<FockVector> {
    check_cutoff(cutoff)?;
    let alpha = 0.5 * d;
    let mut c = DVector::zeros(cutoff + 1);
    c[0] = (1.0 / r.cosh()).sqrt() * (-0.5 * alpha * alpha * (1.0 + r.tanh())).exp();
    if cutoff >= 1 {
        c[1] = alpha * r.exp() * c[0] / r.cosh();
    }
    for n in 1..cutoff {
        let nf = n as f64;
        c[n + 1] = (alpha * r.exp() * c[n] - r.sinh() * nf.sqrt() * c[n - 1])
            / (r.cosh() * (nf + 1.0).sqrt());
    }
    check_deficit(FockVector {
        n_modes: 1,
        cutoff,
        coeffs: c,
    })
}

/// Number-basis expansion of the two-mode squeezed vacuum: amplitudes
/// √(1 − λ²)·λⁿ on |n, n⟩ with λ = −tanh r.
///
/// The sign of λ is fixed by the engine's two-mode squeezer postcondition
/// Var(x̂₊) = e^{−2r} (equivalently ⟨x̂₁x̂₂⟩ = −sinh 2r), so oracle and
/// engine describe the same state.
pub fn fock_tmsv(r: f64, cutoff: usize) -> Result<FockVector> {
    check_cutoff(cutoff)?;
    let lambda = -r.tanh();
    let k = cutoff + 1;
    let mut c = DVector::zeros(k * k);
    let head = (1.0 - lambda * lambda).sqrt();
    for n in 0..=cutoff {
        c[n * k + n] = head * lambda.powi(n as i32);
    }
    check_deficit(FockVector {
        n_modes: 2,
        cutoff,
        coeffs: c,
    })
}

/// |⟨a|b⟩|² by direct inner product; shapes must match.
pub fn oracle_overlap(a: &FockVector, b: &FockVector) -> Result<f64> {
    if a.n_modes != b.n_modes || a.cutoff != b.cutoff {
        return Err(Error::DimensionMismatch {
            expected: a.coeffs.len(),
            got: b.coeffs.len(),
        });
    }
    let ip = a.coeffs.dot(&b.coeffs);
    Ok(ip * ip)
}

/// Probability that a position measurement of a single-mode state lands in
/// (lo, hi], by adaptive Simpson on |ψ(x)|² over the interval clipped to
/// ±[`POSITION_CLIP`]; tolerance 1e−9.
pub fn oracle_interval_prob(v: &FockVector, lo: f64, hi: f64) -> Result<f64> {
    if v.n_modes != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            got: v.n_modes,
        });
    }
    if hi < lo {
        return Err(Error::EmptyInterval { lo, hi });
    }
    let a = lo.max(-POSITION_CLIP);
    let b = hi.min(POSITION_CLIP);
    if b <= a {
        return Ok(0.0);
    }
    let density = |x: f64| {
        let psi = v.wavefunction(&[x])[0];
        psi * psi
    };
    Ok(adaptive_simpson(&density, a, b, 1e-9).clamp(0.0, 1.0))
}

/// Condition a two-mode state on the second mode's position falling in
/// (lo, hi]: integrates the projected density matrix of the kept mode over
/// the interval (fixed 256-node Gauss–Legendre grid on the clipped
/// interval). A degenerate interval lo = hi conditions on the exact outcome
/// and reports probability 0.
pub fn oracle_condition(v: &FockVector, lo: f64, hi: f64) -> Result<Conditioned> {
    if v.n_modes != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: v.n_modes,
        });
    }
    if hi < lo {
        return Err(Error::EmptyInterval { lo, hi });
    }
    let k = v.cutoff + 1;
    let mut buf = vec![0.0; k];
    // f_m(x₂) = Σ_n C_{mn} ψ_n(x₂): amplitude of |m⟩ after ⟨x₂| projection
    let projected = |x2: f64, buf: &mut [f64], out: &mut DVector<f64>| {
        hermite_functions(x2, buf);
        for m in 0..k {
            let mut s = 0.0;
            for n in 0..k {
                s += v.coeffs[m * k + n] * buf[n];
            }
            out[m] = s;
        }
    };
    let mut f = DVector::zeros(k);
    if lo == hi {
        projected(lo, &mut buf, &mut f);
        let rho = &f * f.transpose();
        return Ok(Conditioned {
            rho,
            probability: 0.0,
        });
    }
    let a = lo.max(-POSITION_CLIP);
    let b = hi.min(POSITION_CLIP);
    let mut rho = DMatrix::zeros(k, k);
    if b > a {
        let rule = gauss_legendre_on(256, a, b);
        for (&x2, &w) in rule.nodes.iter().zip(&rule.weights) {
            projected(x2, &mut buf, &mut f);
            rho.ger(w, &f, &f, 1.0);
        }
    }
    let probability = rho.trace().clamp(0.0, 1.0);
    Ok(Conditioned { rho, probability })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numint::normal_mass;
    use crate::symplectic::{displaced_squeezed_vacuum, tmsv};
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn zero_parameters_give_vacuum() {
        let v = fock_squeezed_displaced(0.0, 0.0, 10).unwrap();
        assert_relative_eq!(v.coeffs()[0], 1.0, max_relative = 1e-15);
        for n in 1..=10 {
            assert_abs_diff_eq!(v.coeffs()[n], 0.0, epsilon = 1e-15);
        }
        let t = fock_tmsv(0.0, 4).unwrap();
        assert_relative_eq!(t.coeffs()[0], 1.0, max_relative = 1e-15);
        assert_abs_diff_eq!(t.coeffs().norm() - 1.0, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn squeezed_vacuum_has_even_parity_and_sech_weight() {
        let v = fock_squeezed_displaced(0.7, 0.0, 60).unwrap();
        for n in (1..=59).step_by(2) {
            assert_abs_diff_eq!(v.coeffs()[n], 0.0, epsilon = 1e-15);
        }
        // |c₀|² = sech(0.7)
        assert_relative_eq!(
            v.coeffs()[0] * v.coeffs()[0],
            1.0 / 0.7_f64.cosh(),
            max_relative = 1e-12
        );
        assert!(v.norm_deficit() < 1e-10);
    }

    #[test]
    fn coherent_state_is_poissonian() {
        // d = 2 means α = 1: |c_n|² = e^{−1}/n!
        let v = fock_squeezed_displaced(0.0, 2.0, 40).unwrap();
        let mut factorial = 1.0;
        for n in 0..8 {
            if n > 0 {
                factorial *= n as f64;
            }
            assert_relative_eq!(
                v.coeffs()[n] * v.coeffs()[n],
                (-1.0_f64).exp() / factorial,
                max_relative = 1e-12
            );
        }
        assert_relative_eq!(v.mean_photon(0).unwrap(), 1.0, max_relative = 1e-12);
        let m = v.moments().unwrap();
        assert_relative_eq!(m.mean[0], 2.0, max_relative = 1e-12);
        assert_relative_eq!(m.cov[(0, 0)], 1.0, max_relative = 1e-10);
        assert_relative_eq!(m.cov[(1, 1)], 1.0, max_relative = 1e-10);
    }

    #[test]
    fn squeezed_displaced_moments_match_the_gaussian_picture() {
        let (r, d) = (0.6, 1.5);
        let v = fock_squeezed_displaced(r, d, 60).unwrap();
        let m = v.moments().unwrap();
        assert_relative_eq!(m.mean[0], d, max_relative = 1e-10);
        assert_relative_eq!(m.cov[(0, 0)], (-2.0 * r).exp(), max_relative = 1e-9);
        assert_relative_eq!(m.cov[(1, 1)], (2.0 * r).exp(), max_relative = 1e-9);
    }

    #[test]
    fn tmsv_schmidt_weights_and_marginal() {
        let v = fock_tmsv(0.7, 60).unwrap();
        let k = 61;
        // Schmidt weight of |0,0⟩ is 1 − tanh²(0.7) = sech²(0.7)
        let w00 = v.coeffs()[0] * v.coeffs()[0];
        assert_relative_eq!(w00, 1.0 - 0.7_f64.tanh().powi(2), max_relative = 1e-12);
        // only diagonal |n,n⟩ entries are populated
        for m in 0..3 {
            for n in 0..3 {
                if m != n {
                    assert_abs_diff_eq!(v.coeffs()[m * k + n], 0.0, epsilon = 1e-15);
                }
            }
        }
        // thermal marginal: ⟨n⟩ = sinh²(0.7) on either mode
        let expected = 0.7_f64.sinh().powi(2);
        assert_relative_eq!(v.mean_photon(0).unwrap(), expected, max_relative = 1e-10);
        assert_relative_eq!(v.mean_photon(1).unwrap(), expected, max_relative = 1e-10);
    }

    #[test]
    fn tmsv_quadrature_moments_match_the_symplectic_covariance() {
        let r = 0.7;
        let v = fock_tmsv(r, 60).unwrap();
        let (mean, cov) = v.two_mode_moments().unwrap();
        let engine = tmsv(r);
        assert_abs_diff_eq!(mean.norm(), 0.0, epsilon = 1e-12);
        for i in 0..4 {
            for j in 0..4 {
                assert_abs_diff_eq!(cov[(i, j)], engine.cov()[(i, j)], epsilon = 1e-9);
            }
        }
        // in particular ⟨x̂₁x̂₂⟩ = −sinh 2r and Var(x̂₊) = e^{−2r}
        assert_relative_eq!(cov[(0, 2)], -(2.0 * r).sinh(), max_relative = 1e-9);
        let var_plus = 0.5 * (cov[(0, 0)] + 2.0 * cov[(0, 2)] + cov[(2, 2)]);
        assert_relative_eq!(var_plus, (-2.0 * r).exp(), max_relative = 1e-8);
    }

    #[test]
    fn overlaps_match_the_gaussian_closed_forms() {
        let cutoff = 60;
        let vac = fock_squeezed_displaced(0.0, 0.0, cutoff).unwrap();
        assert_relative_eq!(oracle_overlap(&vac, &vac).unwrap(), 1.0, max_relative = 1e-12);
        let sq = fock_squeezed_displaced(0.7, 0.0, cutoff).unwrap();
        assert_relative_eq!(
            oracle_overlap(&vac, &sq).unwrap(),
            1.0 / 0.7_f64.cosh(),
            max_relative = 1e-8
        );
        let disp = fock_squeezed_displaced(0.0, 2.0, cutoff).unwrap();
        assert_relative_eq!(
            oracle_overlap(&vac, &disp).unwrap(),
            (-1.0_f64).exp(),
            max_relative = 1e-8
        );
        // and against the engine's closed form on a two-parameter case
        let a = fock_squeezed_displaced(0.5, 1.0, cutoff).unwrap();
        let b = fock_squeezed_displaced(0.2, -0.5, cutoff).unwrap();
        let ga = displaced_squeezed_vacuum(0.5, 1.0);
        let gb = displaced_squeezed_vacuum(0.2, -0.5);
        assert_relative_eq!(
            oracle_overlap(&a, &b).unwrap(),
            crate::symplectic::pure_overlap(&ga, &gb).unwrap(),
            max_relative = 1e-8
        );
    }

    #[test]
    fn interval_probabilities_match_gaussian_masses() {
        let cutoff = 60;
        let vac = fock_squeezed_displaced(0.0, 0.0, cutoff).unwrap();
        assert_abs_diff_eq!(
            oracle_interval_prob(&vac, -1.0, 1.0).unwrap(),
            0.682_689_492_137_086,
            epsilon = 1e-9
        );
        // r-independent acceptance identity at ±e^{−r}
        let sq = fock_squeezed_displaced(0.7, 0.0, cutoff).unwrap();
        let edge = (-0.7_f64).exp();
        assert_abs_diff_eq!(
            oracle_interval_prob(&sq, -edge, edge).unwrap(),
            0.682_689_492_137_086,
            epsilon = 1e-8
        );
        // displaced state against the closed-form normal mass
        let disp = fock_squeezed_displaced(0.0, 2.0, cutoff).unwrap();
        assert_abs_diff_eq!(
            oracle_interval_prob(&disp, f64::NEG_INFINITY, 0.0).unwrap(),
            normal_mass(2.0, 1.0, f64::NEG_INFINITY, 0.0),
            epsilon = 1e-8
        );
    }

    #[test]
    fn exact_point_conditioning_reproduces_the_schur_complement() {
        // conditioning TMSV on x₂ = 0 leaves mode 1 with cov diag(1/cosh 2r, cosh 2r)
        let r = 0.5;
        let v = fock_tmsv(r, 40).unwrap();
        let cond = oracle_condition(&v, 0.0, 0.0).unwrap();
        assert_eq!(cond.probability(), 0.0);
        let m = cond.moments();
        assert_abs_diff_eq!(m.mean[0], 0.0, epsilon = 1e-10);
        assert_abs_diff_eq!(m.cov[(0, 0)], 1.0 / (2.0 * r).cosh(), epsilon = 1e-4);
        assert_abs_diff_eq!(m.cov[(1, 1)], (2.0 * r).cosh(), epsilon = 1e-4);
    }

    #[test]
    fn interval_conditioning_matches_frozen_gaussian_values() {
        // TMSV r = 0.5 conditioned on x₂ ∈ (0.3, 0.7]; reference moments from
        // the exact Gaussian computation
        let v = fock_tmsv(0.5, 60).unwrap();
        let cond = oracle_condition(&v, 0.3, 0.7).unwrap();
        let m = cond.moments();
        assert_abs_diff_eq!(m.mean[0], -0.377_518_985_864, epsilon = 1e-8);
        assert_abs_diff_eq!(m.cov[(0, 0)], 0.655_754_824_608_852, epsilon = 1e-8);
        assert_abs_diff_eq!(m.cov[(1, 1)], 1.543_080_634_815_243, epsilon = 1e-8);
        // interval mass: x₂ is thermal with variance cosh(2r)
        assert_abs_diff_eq!(
            cond.probability(),
            normal_mass(0.0, 1.0_f64.cosh(), 0.3, 0.7),
            epsilon = 1e-8
        );
    }

    #[test]
    fn doubling_the_cutoff_is_converged() {
        let p60 = oracle_interval_prob(&fock_squeezed_displaced(0.7, 2.0, 60).unwrap(), 0.5, 2.0)
            .unwrap();
        let p120 = oracle_interval_prob(&fock_squeezed_displaced(0.7, 2.0, 120).unwrap(), 0.5, 2.0)
            .unwrap();
        assert_abs_diff_eq!(p60, p120, epsilon = 1e-7);
    }

    #[test]
    fn undersized_cutoff_is_rejected_explicitly() {
        assert!(matches!(
            fock_squeezed_displaced(0.8, 4.0, 8),
            Err(Error::CutoffTooSmall { .. })
        ));
        assert!(matches!(
            fock_squeezed_displaced(0.5, 0.0, 1),
            Err(Error::BadParameter { .. })
        ));
        // in-range parameters stay comfortably inside the norm tolerance
        let v = fock_squeezed_displaced(0.8, 4.0, 60).unwrap();
        assert!(v.norm_deficit() < 1e-8);
    }

    #[test]
    fn hermite_functions_are_orthonormal() {
        // check ∫ψ_mψ_n dx = δ_mn on a wide grid for a few (m, n)
        let rule = crate::numint::gauss_legendre_on(200, -12.0, 12.0);
        let mut buf = vec![0.0; 6];
        for (m, n, expect) in [(0, 0, 1.0), (3, 3, 1.0), (5, 5, 1.0), (0, 2, 0.0), (1, 4, 0.0)] {
            let mut s = 0.0;
            for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
                hermite_functions(x, &mut buf);
                s += w * buf[m] * buf[n];
            }
            assert_abs_diff_eq!(s, expect, epsilon = 1e-10);
        }
        // ħ = 2 scaling: vacuum ⟨x̂²⟩ = 1
        let mut second = 0.0;
        for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
            hermite_functions(x, &mut buf);
            second += w * x * x * buf[0] * buf[0];
        }
        assert_abs_diff_eq!(second, 1.0, epsilon = 1e-10);
    }

    #[test]
    fn conditioned_state_is_consistent_with_the_full_state() {
        // conditioning on the (clipped) full line returns the reduced state
        let v = fock_tmsv(0.6, 50).unwrap();
        let cond = oracle_condition(&v, f64::NEG_INFINITY, f64::INFINITY).unwrap();
        assert_abs_diff_eq!(cond.probability(), 1.0, epsilon = 1e-9);
        let m = cond.moments();
        // thermal marginal with variance cosh(2r) in both quadratures
        assert_abs_diff_eq!(m.cov[(0, 0)], 1.2_f64.cosh(), epsilon = 1e-7);
        assert_abs_diff_eq!(m.cov[(1, 1)], 1.2_f64.cosh(), epsilon = 1e-7);
    }
}
