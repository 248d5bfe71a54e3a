//! Gauss–Chebyshev rule for integrals over `(0, inf)`.
//!
//! The half-line is mapped onto `(-1, 1)` by `s = tan(pi/4 * (1 + x))` and the
//! Chebyshev rule of the first kind is applied to `f(x) sqrt(1 - x^2)`.

use std::f64::consts::PI;

/// Nodes and weights of the mapped Gauss–Chebyshev rule.
#[derive(Debug, Clone, PartialEq)]
pub struct GCQuadrature {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GCQuadrature {
    /// Builds the rule of order `n`. Panics if `n == 0`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "quadrature order must be positive");
        let nf = n as f64;
        let (nodes, weights) = (1..=n)
            .map(|v| {
                let theta = (2 * v - 1) as f64 * PI / (2.0 * nf);
                let arg = PI / 4.0 * theta.cos() + PI / 4.0;
                let s = arg.tan();
                let psi = PI * PI * theta.sin() / (4.0 * nf * arg.cos().powi(2));
                (s, psi)
            })
            .unzip();
        Self { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Nodes `s_v`, strictly decreasing in `v`.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    /// Approximates `int_0^inf f(s) ds`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.iter().map(|(s, w)| w * f(s)).sum()
    }
}

/// Nodes `s_v` and weights `psi_v` for order `n`.
pub fn gc_nodes_weights(n: usize) -> GCQuadrature {
    GCQuadrature::new(n)
}
