//! Uniform symmetric quadrature grids and sampled functions.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Block size at the leaves of the pairwise summation tree.
const PAIRWISE_LEAF: usize = 32;

/// Sum with a fixed pairwise tree. The tree shape depends only on the slice
/// length, so the result is identical however the inputs were produced.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= PAIRWISE_LEAF {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// Complex counterpart of [`pairwise_sum`].
pub fn pairwise_sum_c(xs: &[Complex64]) -> Complex64 {
    if xs.len() <= PAIRWISE_LEAF {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum_c(&xs[..mid]) + pairwise_sum_c(&xs[mid..])
}

/// Nodes `x_j = (j - m) h` for `j = 0..=2m`, so the node count is odd, the
/// center node is exactly zero and `-x_j` is a node whenever `x_j` is.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureGrid {
    half_nodes: usize,
    spacing: f64,
}

impl QuadratureGrid {
    /// Smallest symmetric grid with spacing `h` covering `[-half_width, half_width]`.
    pub fn new(half_width: f64, spacing: f64) -> Result<Self> {
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(Error::Config(format!("half-width must be positive, got {half_width}")));
        }
        if !(spacing > 0.0 && spacing.is_finite()) {
            return Err(Error::Config(format!("spacing must be positive, got {spacing}")));
        }
        let m = (half_width / spacing - 1e-9).ceil().max(1.0) as usize;
        Ok(Self { half_nodes: m, spacing })
    }

    pub fn from_half_nodes(half_nodes: usize, spacing: f64) -> Self {
        Self { half_nodes, spacing }
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn half_width(&self) -> f64 {
        self.half_nodes as f64 * self.spacing
    }

    /// Number of nodes on each side of zero.
    pub fn half_nodes(&self) -> usize {
        self.half_nodes
    }

    pub fn len(&self) -> usize {
        2 * self.half_nodes + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn node(&self, j: usize) -> f64 {
        (j as f64 - self.half_nodes as f64) * self.spacing
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.len()).map(|j| self.node(j)).collect()
    }

    /// Index of the node mirrored through the origin.
    pub fn mirror(&self, j: usize) -> usize {
        2 * self.half_nodes - j
    }

    /// Same half-width, half the spacing.
    pub fn refined(&self) -> Self {
        Self { half_nodes: 2 * self.half_nodes, spacing: self.spacing / 2.0 }
    }

    /// Trapezoid rule for real samples. Endpoint corrections are dropped:
    /// every integrand used here has decayed to roundoff at the edges.
    pub fn integrate(&self, samples: &[f64]) -> f64 {
        pairwise_sum(samples) * self.spacing
    }

    pub fn integrate_c(&self, samples: &[Complex64]) -> Complex64 {
        pairwise_sum_c(samples) * self.spacing
    }
}

/// Complex samples of a function on a [`QuadratureGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    pub grid: QuadratureGrid,
    pub values: Vec<Complex64>,
}

impl GridFunction {
    pub fn new(grid: QuadratureGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Config(format!(
                "{} samples for a grid of {} nodes",
                values.len(),
                grid.len()
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: QuadratureGrid, mut f: impl FnMut(f64) -> Complex64) -> Self {
        let values = (0..grid.len()).map(|j| f(grid.node(j))).collect();
        Self { grid, values }
    }

    pub fn from_real_fn(grid: QuadratureGrid, mut f: impl FnMut(f64) -> f64) -> Self {
        Self::from_fn(grid, |x| Complex64::new(f(x), 0.0))
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self { grid: self.grid, values: self.values.iter().map(|v| v * factor).collect() }
    }

    /// Pointwise difference; both operands must share a grid.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::Config("grid mismatch".into()));
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect();
        Ok(Self { grid: self.grid, values })
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn sup_distance(&self, other: &Self) -> Result<f64> {
        Ok(self.sub(other)?.sup_norm())
    }

    pub fn check_finite(&self) -> Result<()> {
        match self.values.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
            Some(j) => Err(Error::NonFinite(j)),
            None => Ok(()),
        }
    }

    /// Largest `|f(x) + parity * f(-x)|` over paired nodes.
    pub fn parity_defect(&self, parity: f64) -> f64 {
        (0..self.values.len())
            .map(|j| (self.values[j] + self.values[self.grid.mirror(j)] * parity).norm())
            .fold(0.0, f64::max)
    }

    pub fn real_parts(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.re).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nodes_are_symmetric_with_zero_center() {
        let g = QuadratureGrid::new(3.0, 0.1).unwrap();
        assert_eq!(g.len() % 2, 1);
        assert_eq!(g.node(g.half_nodes()), 0.0);
        for j in 0..g.len() {
            assert_eq!(g.node(j), -g.node(g.mirror(j)));
        }
        assert!(g.half_width() >= 3.0 - 1e-12);
    }

    #[test]
    fn refinement_keeps_width() {
        let g = QuadratureGrid::new(2.0, 0.25).unwrap();
        let r = g.refined();
        assert_eq!(r.half_width(), g.half_width());
        assert_eq!(r.spacing(), 0.125);
    }

    #[test]
    fn pairwise_matches_naive_on_small_integers() {
        let xs: Vec<f64> = (0..1000).map(|k| k as f64).collect();
        assert_eq!(pairwise_sum(&xs), 499_500.0);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(QuadratureGrid::new(0.0, 0.1).is_err());
        assert!(QuadratureGrid::new(1.0, -0.1).is_err());
    }
}
