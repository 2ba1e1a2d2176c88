//! Harmonic-oscillator eigenfunctions for the `e^{2πixy}` Fourier kernel.
//!
//! `φ_n(x) = h_n(x) e^{-πx²}` with unit L² norm and a positive leading
//! coefficient. With `u = √(2π) x` these are the standard Hermite functions
//! rescaled by `(2π)^{1/4}`, so they obey
//!
//! ```text
//! φ_0(x)     = 2^{1/4} e^{-πx²}
//! φ_{n+1}(x) = √(2/(n+1)) u φ_n(x) − √(n/(n+1)) φ_{n−1}(x)
//! ```
//!
//! and the Fourier transform acts diagonally, `𝓕φ_n = iⁿ φ_n`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{GridFunction, QuadratureGrid};

/// Highest basis index accepted by [`eval_basis`].
pub const MAX_BASIS_INDEX: usize = 1024;

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;
const RESCALE_HIGH: f64 = 1e200;
const RESCALE_LOW: f64 = 1e-280;

/// Symmetry class of a coefficient vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SymmetryClass {
    /// Every index, complex coefficients.
    Full,
    /// Odd indices only, complex coefficients.
    Odd,
    /// Indices `n ≡ 1 (mod 4)`, real coefficients: `ψ* = ψ` and `𝓕ψ = iψ`.
    OddFplus,
}

impl SymmetryClass {
    pub fn admits(self, n: usize) -> bool {
        match self {
            SymmetryClass::Full => true,
            SymmetryClass::Odd => n % 2 == 1,
            SymmetryClass::OddFplus => n % 4 == 1,
        }
    }

    pub fn is_real(self) -> bool {
        matches!(self, SymmetryClass::OddFplus)
    }

    pub fn is_odd(self) -> bool {
        !matches!(self, SymmetryClass::Full)
    }

    /// Indices spanned by a truncation of size `basis_size`.
    ///
    /// For `Full` this is `0..basis_size`. The odd classes truncate to the
    /// first `basis_size` odd functions `φ_1, φ_3, …, φ_{2N−1}`, and
    /// `OddFplus` keeps those with `n ≡ 1 (mod 4)`.
    pub fn active_indices(self, basis_size: usize) -> Vec<usize> {
        match self {
            SymmetryClass::Full => (0..basis_size).collect(),
            SymmetryClass::Odd => (0..basis_size).map(|k| 2 * k + 1).collect(),
            SymmetryClass::OddFplus => (0..basis_size).map(|k| 2 * k + 1).filter(|n| n % 4 == 1).collect(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SymmetryClass::Full => "full",
            SymmetryClass::Odd => "odd",
            SymmetryClass::OddFplus => "odd-fplus",
        }
    }
}

impl std::str::FromStr for SymmetryClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(SymmetryClass::Full),
            "odd" => Ok(SymmetryClass::Odd),
            "odd-fplus" | "odd_fplus" => Ok(SymmetryClass::OddFplus),
            other => Err(Error::Config(format!("unknown subspace '{other}'"))),
        }
    }
}

impl std::fmt::Display for SymmetryClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Radius beyond which `φ_n` for all indices up to `max_index` is negligible:
/// 1.5 times the classical turning point plus a margin of 4.
pub fn support_radius(max_index: usize) -> f64 {
    ((2 * max_index + 1) as f64 / TWO_PI).sqrt() * 1.5 + 4.0
}

/// Default node spacing for a basis reaching `max_index`: a quarter of the
/// inverse local wavenumber at the origin, and never above 0.005.
pub fn default_spacing(max_index: usize) -> f64 {
    let wavenumber = (TWO_PI * (2 * max_index + 1) as f64).sqrt();
    (0.25 / wavenumber).min(0.005)
}

/// Grid covering the support of every basis function up to `max_index`.
pub fn grid_for_basis(max_index: usize) -> QuadratureGrid {
    QuadratureGrid::new(support_radius(max_index), default_spacing(max_index))
        .expect("positive support and spacing")
}

/// Fills `out[n] = φ_n(x)` for `n = 0..out.len()`.
///
/// The recurrence runs on a scaled pair with the scale kept as a separate
/// log-magnitude, so neither the Gaussian factor nor the polynomial growth can
/// underflow or overflow intermediate values.
fn fill_basis(x: f64, out: &mut [f64]) {
    if out.is_empty() {
        return;
    }
    let u = TWO_PI.sqrt() * x;
    let mut log_scale = -std::f64::consts::PI * x * x;
    let mut prev = 0.0_f64;
    let mut cur = 2f64.powf(0.25);
    out[0] = cur * log_scale.exp();
    for n in 0..out.len() - 1 {
        let next = (2.0 / (n + 1) as f64).sqrt() * u * cur - (n as f64 / (n + 1) as f64).sqrt() * prev;
        prev = cur;
        cur = next;
        let mag = cur.abs().max(prev.abs());
        if mag > RESCALE_HIGH || (mag < RESCALE_LOW && mag > 0.0) {
            let shift = mag.ln();
            prev /= mag;
            cur /= mag;
            log_scale += shift;
        }
        out[n + 1] = if log_scale < -745.0 { 0.0 } else { cur * log_scale.exp() };
    }
}

/// `φ_n(x)`.
pub fn eval_basis(n: usize, x: f64) -> Result<f64> {
    if n > MAX_BASIS_INDEX {
        return Err(Error::IndexCap { index: n, cap: MAX_BASIS_INDEX });
    }
    let mut buf = vec![0.0; n + 1];
    fill_basis(x, &mut buf);
    Ok(buf[n])
}

/// Taylor coefficients `[ψ, ψ', ψ''/2, ψ'''/6]` of `ψ = Σ a_n φ_n` at `x`.
///
/// Uses the ladder relation `φ_n' = √(2π)(√(n/2) φ_{n−1} − √((n+1)/2) φ_{n+1})`
/// and the oscillator equation `φ_n'' = 2π(u² − (2n+1)) φ_n`.
pub fn local_taylor(c: &CoefficientVector, x: f64) -> Result<[Complex64; 4]> {
    let max_index = c.max_index();
    if max_index + 1 > MAX_BASIS_INDEX {
        return Err(Error::IndexCap { index: max_index + 1, cap: MAX_BASIS_INDEX });
    }
    let mut phi = vec![0.0; max_index + 2];
    fill_basis(x, &mut phi);
    let root = TWO_PI.sqrt();
    let u = root * x;
    let mut out = [Complex64::new(0.0, 0.0); 4];
    for (n, a) in c.coeffs.iter().enumerate() {
        if a.norm_sqr() == 0.0 {
            continue;
        }
        let p = phi[n];
        let below = if n > 0 { phi[n - 1] } else { 0.0 };
        let dp = root * ((n as f64 / 2.0).sqrt() * below - ((n + 1) as f64 / 2.0).sqrt() * phi[n + 1]);
        let well = u * u - (2 * n + 1) as f64;
        let d2 = TWO_PI * well * p;
        let d3 = TWO_PI * (2.0 * u * root * p + well * dp);
        out[0] += a * p;
        out[1] += a * dp;
        out[2] += a * (d2 / 2.0);
        out[3] += a * (d3 / 6.0);
    }
    Ok(out)
}

/// Values of a set of basis functions at every node of a grid, stored row per index.
#[derive(Debug, Clone)]
pub struct BasisTable {
    pub grid: QuadratureGrid,
    pub indices: Vec<usize>,
    values: Vec<f64>,
}

impl BasisTable {
    pub fn new(grid: QuadratureGrid, indices: &[usize]) -> Result<Self> {
        let max_index = indices.iter().copied().max().unwrap_or(0);
        if max_index > MAX_BASIS_INDEX {
            return Err(Error::IndexCap { index: max_index, cap: MAX_BASIS_INDEX });
        }
        let m = grid.len();
        let mut values = vec![0.0; indices.len() * m];
        let mut buf = vec![0.0; max_index + 1];
        for j in 0..m {
            fill_basis(grid.node(j), &mut buf);
            for (row, &n) in indices.iter().enumerate() {
                values[row * m + j] = buf[n];
            }
        }
        Ok(Self { grid, indices: indices.to_vec(), values })
    }

    pub fn row(&self, row: usize) -> &[f64] {
        let m = self.grid.len();
        &self.values[row * m..(row + 1) * m]
    }

    /// `Σ_k c_k φ_{n_k}(x_j)` for coefficients aligned with `self.indices`.
    pub fn combine(&self, coeffs: &[Complex64]) -> Vec<Complex64> {
        let m = self.grid.len();
        let mut out = vec![Complex64::new(0.0, 0.0); m];
        for (row, c) in coeffs.iter().enumerate() {
            if *c == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (o, &v) in out.iter_mut().zip(self.row(row)) {
                *o += c * v;
            }
        }
        out
    }

    /// Trapezoid projections `∫ f φ_{n_k}` for every row.
    pub fn project(&self, f: &[Complex64]) -> Vec<Complex64> {
        (0..self.indices.len())
            .map(|row| {
                let prod: Vec<Complex64> = self.row(row).iter().zip(f).map(|(&p, v)| v * p).collect();
                self.grid.integrate_c(&prod)
            })
            .collect()
    }
}

/// Expansion coefficients `a_0..a_{max_index}` tagged with a symmetry class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientVector {
    pub coeffs: Vec<Complex64>,
    pub class: SymmetryClass,
}

impl CoefficientVector {
    pub fn new(coeffs: Vec<Complex64>, class: SymmetryClass) -> Self {
        Self { coeffs, class }
    }

    pub fn from_real(coeffs: &[f64], class: SymmetryClass) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect(), class)
    }

    /// The single basis function `φ_n`.
    pub fn unit(n: usize, class: SymmetryClass) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
        coeffs[n] = Complex64::new(1.0, 0.0);
        Self::new(coeffs, class)
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn max_index(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// `Σ|a_n|²`.
    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * factor).collect(), self.class)
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm_sqr().sqrt();
        if n == 0.0 {
            return Err(Error::Degenerate("zero coefficient vector"));
        }
        Ok(self.scaled(Complex64::new(1.0 / n, 0.0)))
    }

    /// Whether the stored coefficients satisfy the class constraints exactly.
    pub fn respects_class(&self) -> bool {
        self.coeffs.iter().enumerate().all(|(n, c)| {
            if !self.class.admits(n) {
                *c == Complex64::new(0.0, 0.0)
            } else {
                !self.class.is_real() || c.im == 0.0
            }
        })
    }

    /// Indices carrying a nonzero coefficient.
    pub fn support(&self) -> Vec<usize> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm_sqr() > 0.0)
            .map(|(n, _)| n)
            .collect()
    }

    /// Multiplies by a unit phase so the first coefficient with magnitude
    /// above `threshold` becomes real and nonnegative.
    pub fn phase_aligned(&self, threshold: f64) -> Self {
        match self.coeffs.iter().find(|c| c.norm() > threshold) {
            Some(c) => self.scaled(c.conj() / c.norm()),
            None => self.clone(),
        }
    }
}

/// `ψ(x_j) = Σ a_n φ_n(x_j)`.
pub fn synthesize(c: &CoefficientVector, grid: &QuadratureGrid) -> Result<GridFunction> {
    let support = c.support();
    let max_index = support.iter().copied().max().unwrap_or(0);
    let required = support_radius(max_index);
    if grid.half_width() < required - 1e-12 {
        return Err(Error::Support { required, actual: grid.half_width() });
    }
    let table = BasisTable::new(*grid, &support)?;
    let coeffs: Vec<Complex64> = support.iter().map(|&n| c.coeffs[n]).collect();
    GridFunction::new(*grid, table.combine(&coeffs))
}

/// `iⁿ`.
pub fn fourier_phase(n: usize) -> Complex64 {
    match n % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// Coefficients of `𝓕ψ`: `a_n ↦ iⁿ a_n`.
///
/// The class tag is kept. For `OddFplus` input the result is `i` times the
/// input, which no longer has real coefficients; callers that need the tag to
/// hold should compare against `c.scaled(i)` rather than re-project.
pub fn fourier_coefficients(c: &CoefficientVector) -> CoefficientVector {
    let coeffs = c.coeffs.iter().enumerate().map(|(n, a)| fourier_phase(n) * a).collect();
    CoefficientVector { coeffs, class: c.class }
}

/// Zeroes coefficients outside `class`; for `OddFplus` also drops imaginary parts.
pub fn project_subspace(c: &CoefficientVector, class: SymmetryClass) -> CoefficientVector {
    let coeffs = c
        .coeffs
        .iter()
        .enumerate()
        .map(|(n, a)| {
            if !class.admits(n) {
                Complex64::new(0.0, 0.0)
            } else if class.is_real() {
                Complex64::new(a.re, 0.0)
            } else {
                *a
            }
        })
        .collect();
    CoefficientVector { coeffs, class }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn ground_state_value_at_origin() {
        // ∫(c e^{-πx²})² dx = c²/√2 = 1 forces c = 2^{1/4}.
        assert_abs_diff_eq!(eval_basis(0, 0.0).unwrap(), 1.189_207_115_002_721, epsilon = 1e-15);
        assert_eq!(eval_basis(1, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn parity_is_exact() {
        for &x in &[0.3, 1.7, 4.1] {
            assert_eq!(eval_basis(5, -x).unwrap(), -eval_basis(5, x).unwrap());
            assert_eq!(eval_basis(8, -x).unwrap(), eval_basis(8, x).unwrap());
        }
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(eval_basis(MAX_BASIS_INDEX + 1, 0.0), Err(Error::IndexCap { .. })));
        assert!(eval_basis(512, 3.0).unwrap().is_finite());
    }

    #[test]
    fn large_index_tails_do_not_underflow_prematurely() {
        // Past the turning point the function is small but not identically zero.
        let tp = (1025.0 / TWO_PI).sqrt();
        let v = eval_basis(512, tp + 1.0).unwrap();
        assert!(v != 0.0 && v.abs() < 1.0);
        // Far out it is negligible.
        assert!(eval_basis(512, support_radius(512)).unwrap().abs() < 1e-14);
    }

    #[test]
    fn first_excited_state_closed_form() {
        // φ_1 = 2^{1/4} · 2√π x e^{-πx²}
        for &x in &[-1.2, 0.4, 2.0] {
            let expected = 2f64.powf(0.25) * 2.0 * std::f64::consts::PI.sqrt() * x * (-std::f64::consts::PI * x * x).exp();
            assert_abs_diff_eq!(eval_basis(1, x).unwrap(), expected, epsilon = 1e-14);
        }
    }

    #[test]
    fn taylor_data_matches_differences() {
        let c = CoefficientVector::from_real(&[0.3, -0.7, 0.2, 0.5, 0.0, -0.4], SymmetryClass::Full);
        let psi = |x: f64| (0..6).map(|n| c.coeffs[n].re * eval_basis(n, x).unwrap()).sum::<f64>();
        let x = 0.37;
        let h = 1e-3;
        let t = local_taylor(&c, x).unwrap();
        let f = |k: f64| psi(x + k * h);
        let d1 = (-f(2.0) + 8.0 * f(1.0) - 8.0 * f(-1.0) + f(-2.0)) / (12.0 * h);
        let d2 = (-f(2.0) + 16.0 * f(1.0) - 30.0 * f(0.0) + 16.0 * f(-1.0) - f(-2.0)) / (12.0 * h * h);
        let d3 = (f(2.0) - 2.0 * f(1.0) + 2.0 * f(-1.0) - f(-2.0)) / (2.0 * h * h * h);
        assert_abs_diff_eq!(t[0].re, psi(x), epsilon = 1e-14);
        assert_abs_diff_eq!(t[1].re, d1, epsilon = 1e-5);
        assert_abs_diff_eq!(t[2].re, d2 / 2.0, epsilon = 1e-4);
        assert_abs_diff_eq!(t[3].re, d3 / 6.0, epsilon = 1e-3);
    }

    #[test]
    fn projection_examples() {
        let full = CoefficientVector::from_real(&[1.0; 6], SymmetryClass::Full);
        let odd = project_subspace(&full, SymmetryClass::Odd);
        assert_eq!(odd.coeffs.iter().map(|c| c.re).collect::<Vec<_>>(), vec![0.0, 1.0, 0.0, 1.0, 0.0, 1.0]);

        let mut coeffs = vec![Complex64::new(0.0, 0.0); 6];
        coeffs[1] = Complex64::new(2.0, 3.0);
        coeffs[5] = Complex64::new(4.0, 0.0);
        let p = project_subspace(&CoefficientVector::new(coeffs, SymmetryClass::Full), SymmetryClass::OddFplus);
        assert_eq!(p.coeffs[1], Complex64::new(2.0, 0.0));
        assert_eq!(p.coeffs[5], Complex64::new(4.0, 0.0));
        assert!(p.respects_class());
    }

    #[test]
    fn fourier_coefficient_examples() {
        let c = CoefficientVector::unit(1, SymmetryClass::Odd);
        assert_eq!(fourier_coefficients(&c).coeffs[1], Complex64::new(0.0, 1.0));
        let g = CoefficientVector::unit(0, SymmetryClass::Full);
        assert_eq!(fourier_coefficients(&g), g);
    }

    #[test]
    fn active_indices_follow_truncation() {
        assert_eq!(SymmetryClass::Full.active_indices(3), vec![0, 1, 2]);
        assert_eq!(SymmetryClass::Odd.active_indices(3), vec![1, 3, 5]);
        assert_eq!(SymmetryClass::OddFplus.active_indices(4), vec![1, 5]);
        assert_eq!(SymmetryClass::OddFplus.active_indices(1), vec![1]);
        assert_eq!(*SymmetryClass::OddFplus.active_indices(128).last().unwrap(), 253);
    }

    #[test]
    fn synthesize_rejects_small_grid() {
        let c = CoefficientVector::unit(40, SymmetryClass::Full);
        let g = QuadratureGrid::new(2.0, 0.01).unwrap();
        assert!(matches!(synthesize(&c, &g), Err(Error::Support { .. })));
    }
}
