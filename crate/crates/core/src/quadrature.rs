//! Composite Gauss–Legendre quadrature.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

/// Nodes and weights of an `n`-point Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Builds the rule by Newton iteration on `P_n` from Chebyshev-like guesses.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "rule needs at least one node");
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
                    let (_, d) = legendre_with_derivative(n, x);
                    dp = d;
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    /// The 10-point rule, built once.
    pub fn ten_point() -> &'static Self {
        static RULE: OnceLock<GaussLegendre> = OnceLock::new();
        RULE.get_or_init(|| Self::new(10))
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Integrates `f` over `[lo, hi]` split into `panels` equal panels.
    pub fn integrate<F>(&self, f: F, lo: f64, hi: f64, panels: usize) -> f64
    where
        F: Fn(f64) -> f64,
    {
        let h = (hi - lo) / panels as f64;
        let mut total = 0.0;
        for p in 0..panels {
            let mid = lo + (p as f64 + 0.5) * h;
            let half = 0.5 * h;
            let panel: f64 = self
                .nodes
                .iter()
                .zip(&self.weights)
                .map(|(x, w)| w * f(mid + half * x))
                .sum();
            total += half * panel;
        }
        total
    }

    /// Complex-valued counterpart of [`integrate`](Self::integrate).
    pub fn integrate_complex<F>(&self, f: F, lo: f64, hi: f64, panels: usize) -> Complex64
    where
        F: Fn(f64) -> Complex64,
    {
        let h = (hi - lo) / panels as f64;
        let mut total = Complex64::new(0.0, 0.0);
        for p in 0..panels {
            let mid = lo + (p as f64 + 0.5) * h;
            let half = 0.5 * h;
            let mut panel = Complex64::new(0.0, 0.0);
            for (x, w) in self.nodes.iter().zip(&self.weights) {
                panel += f(mid + half * x) * *w;
            }
            total += panel * half;
        }
        total
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 1 {
        p0 = 1.0;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ten_point_matches_tabulated() {
        let rule = GaussLegendre::ten_point();
        // Abramowitz & Stegun 25.4
        assert!((rule.nodes()[9] - 0.973_906_528_517_171_7).abs() < 1e-15);
        assert!((rule.weights()[9] - 0.066_671_344_308_688_1).abs() < 1e-15);
        assert!((rule.nodes()[5] - 0.148_874_338_981_631_2).abs() < 1e-15);
        assert!((rule.weights()[5] - 0.295_524_224_714_752_9).abs() < 1e-15);
        let total: f64 = rule.weights().iter().sum();
        assert!((total - 2.0).abs() < 1e-14);
    }

    #[test]
    fn exact_for_degree_19() {
        let rule = GaussLegendre::ten_point();
        let got = rule.integrate(|x| x.powi(19) + x.powi(18), -1.0, 1.0, 1);
        assert!((got - 2.0 / 19.0).abs() < 1e-14);
    }

    #[test]
    fn oscillatory_complex() {
        let rule = GaussLegendre::ten_point();
        let got = rule.integrate_complex(|s| Complex64::from_polar(1.0, 3.0 * s), 0.0, 2.0, 16);
        let exact = (Complex64::from_polar(1.0, 6.0) - 1.0) / Complex64::new(0.0, 3.0);
        assert!((got - exact).norm() < 1e-14);
    }
}
