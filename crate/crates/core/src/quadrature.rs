//! Composite Gauss-Legendre quadrature on `[0, pi]` with panel doubling.
//!
//! The correlator integrands oscillate with frequency of order
//! `2 (1 + lambda) t`, so the starting panel count grows with `t`. Each
//! evaluation compares `P` and `2P` panels and keeps doubling until every
//! component agrees to the tolerance. Summation order is fixed, so results
//! are bit-reproducible.

use std::f64::consts::PI;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadratureError {
    #[error("invalid quadrature configuration: {0}")]
    InvalidConfig(&'static str),
    #[error("quadrature did not converge with {panels} panels: last two estimates {previous:?} and {last:?}")]
    NotConverged { panels: usize, previous: Vec<f64>, last: Vec<f64> },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub base_panels: usize,
    pub points_per_panel: usize,
    pub tolerance: f64,
    pub max_refinements: usize,
    /// Panels per unit of `(1 + lambda) t`.
    pub panel_density: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self { base_panels: 32, points_per_panel: 10, tolerance: 1e-10, max_refinements: 6, panel_density: 4.0 }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<(), QuadratureError> {
        if self.base_panels == 0 {
            return Err(QuadratureError::InvalidConfig("base_panels must be at least 1"));
        }
        if self.points_per_panel == 0 {
            return Err(QuadratureError::InvalidConfig("points_per_panel must be at least 1"));
        }
        if !(self.tolerance > 0.0) {
            return Err(QuadratureError::InvalidConfig("tolerance must be positive"));
        }
        if self.max_refinements == 0 {
            return Err(QuadratureError::InvalidConfig("max_refinements must be at least 1"));
        }
        if !(self.panel_density >= 0.0) {
            return Err(QuadratureError::InvalidConfig("panel_density must be nonnegative"));
        }
        Ok(())
    }

    /// Starting panel count `max(base_panels, ceil(c (1 + lambda) t))`.
    pub fn initial_panels(&self, lambda: f64, t: f64) -> usize {
        let scaled = (self.panel_density * (1.0 + lambda) * t).ceil();
        self.base_panels.max(scaled as usize)
    }
}

/// Gauss-Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes by Newton iteration on `P_n` from the Chebyshev-like initial
    /// guess; nodes are returned in increasing order.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for j in 2..=n {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Composite integrator over `[0, pi]` for vector-valued integrands.
#[derive(Debug, Clone)]
pub struct CompositeRule {
    rule: GaussLegendre,
}

impl CompositeRule {
    pub fn new(points_per_panel: usize) -> Self {
        Self { rule: GaussLegendre::new(points_per_panel) }
    }

    /// Integral over `[0, pi]` split into `panels` equal panels. Nodes never
    /// touch the endpoints.
    pub fn integrate<const M: usize>(&self, panels: usize, f: impl Fn(f64) -> [f64; M]) -> [f64; M] {
        let width = PI / panels as f64;
        let half = 0.5 * width;
        let mut total = [0.0; M];
        for p in 0..panels {
            let mid = (p as f64 + 0.5) * width;
            let mut panel = [0.0; M];
            for (&x, &w) in self.rule.nodes.iter().zip(&self.rule.weights) {
                let v = f(mid + half * x);
                for (acc, vi) in panel.iter_mut().zip(v) {
                    *acc += w * vi;
                }
            }
            for (acc, pi) in total.iter_mut().zip(panel) {
                *acc += half * pi;
            }
        }
        total
    }
}

/// Integrates `f` over `[0, pi]` with panel doubling until two successive
/// estimates agree componentwise to `cfg.tolerance`. Returns the finer
/// estimate.
pub fn integrate_converged<const M: usize>(
    cfg: &QuadratureConfig,
    initial_panels: usize,
    f: impl Fn(f64) -> [f64; M],
) -> Result<[f64; M], QuadratureError> {
    cfg.validate()?;
    let rule = CompositeRule::new(cfg.points_per_panel);
    let mut panels = initial_panels.max(1);
    let mut previous = rule.integrate(panels, &f);
    let mut refinements = 0;
    loop {
        panels *= 2;
        refinements += 1;
        let current = rule.integrate(panels, &f);
        let converged = previous.iter().zip(&current).all(|(a, b)| (a - b).abs() <= cfg.tolerance);
        if converged {
            return Ok(current);
        }
        if refinements == cfg.max_refinements {
            return Err(QuadratureError::NotConverged { panels, previous: previous.to_vec(), last: current.to_vec() });
        }
        previous = current;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_order_rules() {
        let r = GaussLegendre::new(1);
        assert_eq!(r.nodes, vec![0.0]);
        assert!((r.weights[0] - 2.0).abs() < 1e-15);

        let r = GaussLegendre::new(2);
        let x = 1.0 / 3f64.sqrt();
        assert!((r.nodes[0] + x).abs() < 1e-15 && (r.nodes[1] - x).abs() < 1e-15);
        assert!((r.weights[0] - 1.0).abs() < 1e-15);

        let r = GaussLegendre::new(3);
        assert!((r.nodes[2] - 0.6f64.sqrt()).abs() < 1e-15);
        assert!((r.weights[1] - 8.0 / 9.0).abs() < 1e-15);
        assert!((r.weights[0] - 5.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn weights_sum_and_polynomial_exactness() {
        for n in 1..=20 {
            let r = GaussLegendre::new(n);
            let sum: f64 = r.weights.iter().sum();
            assert!((sum - 2.0).abs() < 1e-13, "n = {n}");
            assert!(r.nodes.windows(2).all(|w| w[0] < w[1]));
            // exact for degree 2n - 1
            let deg = 2 * n - 2;
            let integral: f64 = r.nodes.iter().zip(&r.weights).map(|(x, w)| w * x.powi(deg as i32)).sum();
            assert!((integral - 2.0 / (deg as f64 + 1.0)).abs() < 1e-13, "n = {n}");
        }
    }

    #[test]
    fn composite_integrates_oscillatory_function() {
        let rule = CompositeRule::new(10);
        let [v] = rule.integrate(64, |k| [(40.0 * k).cos() * k.sin()]);
        // int_0^pi cos(a k) sin k dk = (1 + cos(a pi)) / (1 - a^2) for integer a
        let exact = 2.0 / (1.0 - 1600.0);
        assert!((v - exact).abs() < 1e-14);
    }

    #[test]
    fn converged_integration_and_failure() {
        let cfg = QuadratureConfig::default();
        let [s, c] = integrate_converged(&cfg, 32, |k| [k.sin().powi(2), k.cos()]).unwrap();
        assert!((s - PI / 2.0).abs() < 1e-14);
        assert!(c.abs() < 1e-14);

        let tight = QuadratureConfig { max_refinements: 1, tolerance: 1e-300, ..cfg };
        let err = integrate_converged(&tight, 1, |k| [(k * 500.0).sin()]).unwrap_err();
        match err {
            QuadratureError::NotConverged { panels, previous, last } => {
                assert_eq!(panels, 2);
                assert_eq!(previous.len(), 1);
                assert_eq!(last.len(), 1);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn panel_rule() {
        let cfg = QuadratureConfig::default();
        assert_eq!(cfg.initial_panels(1.0, 0.0), 32);
        assert_eq!(cfg.initial_panels(3.0, 8.0), 128);
        assert_eq!(cfg.initial_panels(0.5, 1.0), 32);
    }

    #[test]
    fn config_validation() {
        let bad = QuadratureConfig { tolerance: 0.0, ..Default::default() };
        assert!(bad.validate().is_err());
        let bad = QuadratureConfig { base_panels: 0, ..Default::default() };
        assert!(bad.validate().is_err());
        assert!(QuadratureConfig::default().validate().is_ok());
    }
}
