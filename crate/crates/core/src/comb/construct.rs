//! Functions built from a comb and a profile: `Σ bₙ ψ₂(ax, (x − xₙ)/a)` and
//! its variants.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::delta::{CombLattice, DeltaComb};
use super::profile::GaussianProfile2D;
use crate::error::{Error, Result};
use crate::functionals::p_norm;
use crate::grid::{GridFunction, QuadratureGrid};

/// Terms smaller than `e^{−CUT}` relative to the profile peak are dropped
/// (`e^{−40} ≈ 4e−18`).
const CUT: f64 = 40.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// `Σ bₙ ψ₂(ax, (x − xₙ)/a)`
    Plain,
    /// `Σ bₙ ψ₂(axₙ, (x − xₙ)/a)`
    Primed,
    /// Plain, keeping for each `x` only the term whose cell contains it.
    Truncated,
    /// Primed, truncated likewise.
    TruncatedPrimed,
}

impl Variant {
    fn is_primed(self) -> bool {
        matches!(self, Variant::Primed | Variant::TruncatedPrimed)
    }

    fn is_truncated(self) -> bool {
        matches!(self, Variant::Truncated | Variant::TruncatedPrimed)
    }
}

/// Lattice parameters in floating point.
#[derive(Debug, Clone)]
struct FloatLattice {
    x0: f64,
    r: f64,
}

impl FloatLattice {
    fn new(l: &CombLattice) -> Self {
        Self { x0: l.position(0), r: l.position(1) - l.position(0) }
    }

    fn position(&self, n: i64) -> f64 {
        self.x0 + n as f64 * self.r
    }

    /// Index of the cell `[xₙ − r/2, xₙ + r/2)` containing `x`.
    fn cell(&self, x: f64) -> i64 {
        ((x - self.x0) / self.r + 0.5).floor() as i64
    }
}

#[derive(Debug, Clone)]
pub struct CombFunction {
    pub comb: DeltaComb,
    pub profile: GaussianProfile2D,
    pub a: f64,
    pub variant: Variant,
    /// Indices `n` summed; every omitted term is below `e^{−40}` of the peak.
    pub window: (i64, i64),
    lat: FloatLattice,
    weights: Vec<Complex64>,
}

impl CombFunction {
    pub fn new(comb: DeltaComb, profile: GaussianProfile2D, a: f64, variant: Variant) -> Result<Self> {
        if !(a > 0.0 && a <= 1.0) {
            return Err(Error::Domain(format!("a must lie in (0, 1], got {a}")));
        }
        profile.validate()?;
        let lat = FloatLattice::new(&comb.lattice);
        // |ψ₂(u, v)| ≤ |N| e^{−λ(u² + v²)/2}; both the plain and primed terms
        // are negligible once |a xₙ| exceeds the decay radius by a cell.
        let reach = profile.decay_radius(CUT) / a + a * profile.decay_radius(CUT) + lat.r;
        let lo = ((-reach - lat.x0) / lat.r).floor() as i64;
        let hi = ((reach - lat.x0) / lat.r).ceil() as i64;
        let weights = (lo..=hi).map(|n| comb.lattice.weight(n)).collect();
        Ok(Self { comb, profile, a, variant, window: (lo, hi), lat, weights })
    }

    /// `Φ_a` (plain) or `Φ′_a` (primed) and their truncations: the alternating
    /// comb with the symmetric profile.
    pub fn bigaussian(a: f64, variant: Variant) -> Result<Self> {
        Self::new(DeltaComb::alternating(), GaussianProfile2D::symmetric(), a, variant)
    }

    pub fn with_variant(&self, variant: Variant) -> Self {
        Self { variant, ..self.clone() }
    }

    /// Contribution of term `n` at `x`, before truncation.
    fn term(&self, n: i64, x: f64, variant: Variant) -> Complex64 {
        let xn = self.lat.position(n);
        let u = if variant.is_primed() { self.a * xn } else { self.a * x };
        self.weights[(n - self.window.0) as usize] * self.profile.eval(u, (x - xn) / self.a)
    }

    /// Index range of terms that can matter at `x`.
    fn local_range(&self, x: f64) -> (i64, i64) {
        let w = self.a * self.profile.decay_radius(CUT);
        let lo = ((x - w - self.lat.x0) / self.lat.r).floor() as i64;
        let hi = ((x + w - self.lat.x0) / self.lat.r).ceil() as i64;
        (lo.max(self.window.0), hi.min(self.window.1))
    }

    fn value_in_cell(&self, x: f64, cell: i64, variant: Variant) -> Complex64 {
        if variant.is_truncated() {
            if cell < self.window.0 || cell > self.window.1 {
                return Complex64::new(0.0, 0.0);
            }
            return self.term(cell, x, variant);
        }
        let (lo, hi) = self.local_range(x);
        self.sum_far_to_near(x, lo, hi, |n| self.term(n, x, variant))
    }

    /// Sums terms in order of decreasing distance from `x`, ties broken by
    /// index, so mirrored terms of an odd construction cancel exactly.
    fn sum_far_to_near(&self, x: f64, lo: i64, hi: i64, term: impl Fn(i64) -> Complex64) -> Complex64 {
        if hi < lo {
            return Complex64::new(0.0, 0.0);
        }
        let mut order: Vec<(f64, i64)> = (lo..=hi).map(|n| ((x - self.lat.position(n)).abs(), n)).collect();
        order.sort_by(|p, q| q.0.total_cmp(&p.0).then(p.1.cmp(&q.1)));
        order.into_iter().map(|(_, n)| term(n)).sum()
    }

    /// Value at a single point.
    pub fn value_at(&self, x: f64) -> Complex64 {
        self.value_in_cell(x, self.lat.cell(x), self.variant)
    }

    /// `self − other` at `x` for two variants of the same construction,
    /// computed term by term so that equal terms cancel exactly.
    fn difference_at(&self, x: f64, cell: i64, other: Variant) -> Complex64 {
        let (lo, hi) = self.local_range(x);
        let (lo, hi) = (lo.min(cell).max(self.window.0), hi.max(cell).min(self.window.1));
        let keep = |v: Variant, n: i64| !v.is_truncated() || n == cell;
        self.sum_far_to_near(x, lo, hi, |n| {
            let t1 = if keep(self.variant, n) { self.term(n, x, self.variant) } else { Complex64::new(0.0, 0.0) };
            let t2 = if keep(other, n) { self.term(n, x, other) } else { Complex64::new(0.0, 0.0) };
            t1 - t2
        })
    }

    /// Cell index of every grid node. When the cell boundaries fall on nodes
    /// the membership is decided in integer arithmetic.
    fn node_cells(&self, grid: &QuadratureGrid) -> Vec<i64> {
        let h = grid.spacing();
        let m = self.lat.r / h;
        let s = (self.lat.x0 - 0.5 * self.lat.r) / h;
        let j0 = grid.half_nodes() as i64;
        let near_int = |v: f64| (v - v.round()).abs() < 1e-9 * v.abs().max(1.0);
        if near_int(m) && near_int(s) && m.round() >= 1.0 {
            let (m, s) = (m.round() as i64, s.round() as i64);
            (0..grid.len() as i64).map(|j| (j - j0 - s).div_euclid(m)).collect()
        } else {
            grid.nodes().iter().map(|&x| self.lat.cell(x)).collect()
        }
    }

    pub fn check_grid(&self, grid: &QuadratureGrid) -> Result<()> {
        let need_h = self.a / 20.0;
        if grid.spacing() > need_h * (1.0 + 1e-12) {
            return Err(Error::Resolution { required: need_h, actual: grid.spacing() });
        }
        let need_l = 5.0 / self.a;
        if grid.half_width() < need_l * (1.0 - 1e-12) {
            return Err(Error::Support { required: need_l, actual: grid.half_width() });
        }
        Ok(())
    }

    /// Samples on `grid`, which must resolve `a/20` and reach `5/a`.
    pub fn eval(&self, grid: &QuadratureGrid) -> Result<GridFunction> {
        self.check_grid(grid)?;
        Ok(self.sample(grid))
    }

    /// Samples on any grid, without the resolution checks.
    pub fn sample(&self, grid: &QuadratureGrid) -> GridFunction {
        let cells = self.node_cells(grid);
        let values = grid.nodes().iter().zip(&cells).map(|(&x, &c)| self.value_in_cell(x, c, self.variant)).collect();
        GridFunction { grid: *grid, values }
    }

    /// `‖self − other‖_p` on `grid` for another variant of the same construction.
    pub fn variant_gap(&self, other: Variant, grid: &QuadratureGrid, p: f64) -> Result<f64> {
        self.check_grid(grid)?;
        if other == self.variant {
            return Ok(0.0);
        }
        let cells = self.node_cells(grid);
        let values = grid.nodes().iter().zip(&cells).map(|(&x, &c)| self.difference_at(x, c, other)).collect();
        let diff = GridFunction { grid: *grid, values };
        if diff.sup_norm() == 0.0 {
            return Ok(0.0);
        }
        p_norm(&diff, p)
    }
}

/// The coarsest grid accepted for parameter `a`: spacing `a/20` adjusted so
/// that `1/(2h)` is an integer, half-width `5/a` rounded up to a node.
pub fn comb_grid(a: f64) -> Result<QuadratureGrid> {
    let per_half = (10.0 / a).ceil();
    let h = 0.5 / per_half;
    let half_nodes = (5.0 / a / h).ceil() as usize;
    let g = QuadratureGrid::from_half_nodes(half_nodes, h);
    if g.len() > 20_000_000 {
        return Err(Error::Config(format!("grid for a = {a} is too large")));
    }
    Ok(g)
}

/// `‖v₁ − v₂‖_p` at parameter `a` on [`comb_grid`].
pub fn equivalence_gap(
    comb: &DeltaComb,
    profile: &GaussianProfile2D,
    a: f64,
    p: f64,
    pair: (Variant, Variant),
) -> Result<f64> {
    let f = CombFunction::new(comb.clone(), *profile, a, pair.0)?;
    f.variant_gap(pair.1, &comb_grid(a)?, p)
}

/// `Φ_a(x)` summed directly from its defining series.
pub fn phi_a_direct(a: f64, x: f64) -> f64 {
    let env = (-std::f64::consts::PI * a * a * x * x).exp();
    let c = x.round() as i64;
    (c - 40..=c + 40)
        .map(|n| {
            let d = x - n as f64 - 0.5;
            let s = if n.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            s * (-std::f64::consts::PI * d * d / (a * a)).exp()
        })
        .sum::<f64>()
        * env
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn odd_with_zero_at_origin() {
        let f = CombFunction::bigaussian(0.29, Variant::Plain).unwrap();
        assert_eq!(f.value_at(0.0).norm(), 0.0);
        let g = f.eval(&comb_grid(0.29).unwrap()).unwrap();
        assert_eq!(g.parity_defect(1.0), 0.0);
        assert!(g.values.iter().all(|v| v.im == 0.0));
    }

    #[test]
    fn three_term_value_at_half() {
        let a: f64 = 0.29;
        let f = CombFunction::bigaussian(a, Variant::Plain).unwrap();
        let pi = std::f64::consts::PI;
        let expect = (-pi * a * a / 4.0).exp() * (1.0 - 2.0 * (-pi / (a * a)).exp());
        assert!((f.value_at(0.5).re - expect).abs() < 1e-15);
        assert!((expect - 0.93609).abs() < 1e-5);
    }

    #[test]
    fn agrees_with_direct_series() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let a = rng.gen_range(0.05..1.0);
            let x = rng.gen_range(-3.0 / a..3.0 / a);
            let f = CombFunction::bigaussian(a, Variant::Plain).unwrap();
            assert!((f.value_at(x).re - phi_a_direct(a, x)).abs() < 1e-12, "a={a} x={x}");
        }
    }

    #[test]
    fn truncated_variant_is_cellwise() {
        let f = CombFunction::bigaussian(0.3, Variant::Truncated).unwrap();
        let g = f.eval(&comb_grid(0.3).unwrap()).unwrap();
        // cells of the alternating comb are [n, n+1); node at x = 1 belongs to n = 1
        let h = g.grid.spacing();
        let j1 = g.grid.half_nodes() + (1.0 / h).round() as usize;
        assert!((g.grid.node(j1) - 1.0).abs() < 1e-14);
        let expect = f.profile.eval(0.3, (1.0 - 1.5) / 0.3) * -1.0;
        assert!((g.values[j1] - expect).norm() < 1e-15);
    }

    #[test]
    fn identical_variants_have_zero_gap() {
        let d = DeltaComb::alternating();
        let p = GaussianProfile2D::symmetric();
        assert_eq!(equivalence_gap(&d, &p, 0.2, 2.0, (Variant::Plain, Variant::Plain)).unwrap(), 0.0);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(CombFunction::bigaussian(0.0, Variant::Plain).is_err());
        assert!(CombFunction::bigaussian(1.5, Variant::Plain).is_err());
        let f = CombFunction::bigaussian(0.2, Variant::Plain).unwrap();
        let coarse = QuadratureGrid::new(30.0, 0.02).unwrap();
        assert!(matches!(f.eval(&coarse), Err(Error::Resolution { .. })));
        let short = QuadratureGrid::new(10.0, 0.005).unwrap();
        assert!(matches!(f.eval(&short), Err(Error::Support { .. })));
    }
}
