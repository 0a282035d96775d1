//! Numerical integration kernels: Gauss–Legendre rules, adaptive Simpson,
//! and closed-form Gaussian interval masses.
//!
//! Everything here is deterministic: nodes are computed by Newton iteration
//! from fixed starting guesses, so repeated runs produce bit-identical
//! quadrature grids.

/// A one-dimensional quadrature rule: paired nodes and weights.
#[derive(Debug, Clone)]
pub struct QuadRule {
    /// Evaluation points.
    pub nodes: Vec<f64>,
    /// Corresponding weights.
    pub weights: Vec<f64>,
}

impl QuadRule {
    /// ∑ wᵢ f(xᵢ).
    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Gauss–Legendre rule with `k` nodes on the reference interval [−1, 1],
/// nodes in ascending order; exact for polynomials of degree ≤ 2k − 1.
pub fn gauss_legendre(k: usize) -> QuadRule {
    assert!(k >= 1, "quadrature rule needs at least one node");
    let rule = gauss_quad::GaussLegendre::new(k).expect("node count is validated above");
    let mut pairs: Vec<(f64, f64)> = rule.iter().copied().collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    QuadRule {
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1).collect(),
    }
}

/// Gauss–Legendre rule mapped onto [lo, hi].
pub fn gauss_legendre_on(k: usize, lo: f64, hi: f64) -> QuadRule {
    let base = gauss_legendre(k);
    let mid = 0.5 * (hi + lo);
    let half = 0.5 * (hi - lo);
    QuadRule {
        nodes: base.nodes.iter().map(|&x| mid + half * x).collect(),
        weights: base.weights.iter().map(|&w| half * w).collect(),
    }
}

/// Adaptive Simpson integration of `f` over [lo, hi] to absolute tolerance
/// `tol`, with Richardson correction on each accepted panel.
pub fn adaptive_simpson(f: &impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> f64 {
    fn simpson(f: &impl Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        (m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb))
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &impl Fn(f64) -> f64,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        m: f64,
        fm: f64,
        whole: f64,
        tol: f64,
        depth: usize,
    ) -> f64 {
        let (ml, fml, left) = simpson(f, a, fa, m, fm);
        let (mr, fmr, right) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        recurse(f, a, fa, m, fm, ml, fml, left, 0.5 * tol, depth - 1)
            + recurse(f, m, fm, b, fb, mr, fmr, right, 0.5 * tol, depth - 1)
    }
    let (fa, fb) = (f(lo), f(hi));
    let (m, fm, whole) = simpson(f, lo, fa, hi, fb);
    recurse(f, lo, fa, hi, fb, m, fm, whole, tol, 48)
}

/// Density of Normal(μ, var) at `x` (var is the variance).
pub fn normal_pdf(mu: f64, var: f64, x: f64) -> f64 {
    let z = x - mu;
    (-0.5 * z * z / var).exp() / (2.0 * std::f64::consts::PI * var).sqrt()
}

/// Probability that Normal(μ, var) lands in (lo, hi]; either bound may be
/// infinite.
pub fn normal_mass(mu: f64, var: f64, lo: f64, hi: f64) -> f64 {
    debug_assert!(var > 0.0, "outcome variance must be positive");
    let scale = (2.0 * var).sqrt();
    let cdf_term = |b: f64| -> f64 {
        if b == f64::INFINITY {
            1.0
        } else if b == f64::NEG_INFINITY {
            -1.0
        } else {
            libm::erf((b - mu) / scale)
        }
    };
    (0.5 * (cdf_term(hi) - cdf_term(lo))).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn five_node_rule_matches_published_values() {
        let rule = gauss_legendre(5);
        let nodes = [
            -0.906_179_845_938_664,
            -0.538_469_310_105_683,
            0.0,
            0.538_469_310_105_683,
            0.906_179_845_938_664,
        ];
        let weights = [
            0.236_926_885_056_189,
            0.478_628_670_499_366,
            0.568_888_888_888_889,
            0.478_628_670_499_366,
            0.236_926_885_056_189,
        ];
        for i in 0..5 {
            assert_abs_diff_eq!(rule.nodes[i], nodes[i], epsilon = 1e-12);
            assert_abs_diff_eq!(rule.weights[i], weights[i], epsilon = 1e-12);
        }
    }

    #[test]
    fn rule_is_exact_on_high_degree_polynomials() {
        // k nodes are exact through degree 2k−1: ∫₀¹ x¹⁵ dx = 1/16 at k = 8.
        let rule = gauss_legendre_on(8, 0.0, 1.0);
        assert_abs_diff_eq!(rule.integrate(|x| x.powi(15)), 1.0 / 16.0, epsilon = 1e-14);
        // and degree 2k would start to miss; sanity that the weights sum to
        // the interval length regardless.
        let total: f64 = rule.weights.iter().sum();
        assert_abs_diff_eq!(total, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn rule_integrates_gaussian_to_machine_precision() {
        let rule = gauss_legendre_on(64, -8.0, 8.0);
        let integral = rule.integrate(|x| normal_pdf(0.0, 1.0, x));
        assert_abs_diff_eq!(integral, 1.0, epsilon = 1e-13);
    }

    #[test]
    fn nodes_are_sorted_and_symmetric() {
        let rule = gauss_legendre(33);
        for w in rule.nodes.windows(2) {
            assert!(w[0] < w[1]);
        }
        for i in 0..33 {
            assert_abs_diff_eq!(rule.nodes[i], -rule.nodes[32 - i], epsilon = 1e-14);
            assert_abs_diff_eq!(rule.weights[i], rule.weights[32 - i], epsilon = 1e-14);
        }
    }

    #[test]
    fn adaptive_simpson_reaches_requested_tolerance() {
        let pi = adaptive_simpson(&|x| 4.0 / (1.0 + x * x), 0.0, 1.0, 1e-10);
        assert_abs_diff_eq!(pi, std::f64::consts::PI, epsilon = 1e-9);
        let mass = adaptive_simpson(&|x| normal_pdf(0.0, 1.0, x), -1.0, 1.0, 1e-10);
        assert_abs_diff_eq!(mass, 0.682_689_492_137_086, epsilon = 1e-9);
    }

    #[test]
    fn normal_mass_matches_erf_identities() {
        // unit-variance mass of (−1, 1] is erf(1/√2)
        assert_abs_diff_eq!(
            normal_mass(0.0, 1.0, -1.0, 1.0),
            0.682_689_492_137_086,
            epsilon = 1e-12
        );
        // scaling identity: variance e^{−2r} with bounds ±e^{−r} gives the
        // same mass for every r
        for r in [0.0, 0.35, 0.7, 1.2] {
            let s = (-r as f64).exp();
            assert_abs_diff_eq!(
                normal_mass(0.0, s * s, -s, s),
                0.682_689_492_137_086,
                epsilon = 1e-12
            );
        }
        // complement rule
        let inside = normal_mass(0.3, 2.0, -0.5, 1.5);
        let below = normal_mass(0.3, 2.0, f64::NEG_INFINITY, -0.5);
        let above = normal_mass(0.3, 2.0, 1.5, f64::INFINITY);
        assert_abs_diff_eq!(inside + below + above, 1.0, epsilon = 1e-12);
        // full line
        assert_abs_diff_eq!(
            normal_mass(5.0, 0.25, f64::NEG_INFINITY, f64::INFINITY),
            1.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn normal_mass_of_shifted_interval_uses_mean() {
        // Normal(2, 1) mass of (1, 3] = erf(1/√2)
        assert_abs_diff_eq!(
            normal_mass(2.0, 1.0, 1.0, 3.0),
            0.682_689_492_137_086,
            epsilon = 1e-12
        );
    }
}
