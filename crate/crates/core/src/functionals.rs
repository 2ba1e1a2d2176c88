//! Norms, entropies and Hausdorff–Young functionals on sampled functions,
//! plus their first variations in coefficient space.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::basis::{
    fourier_coefficients, fourier_phase, grid_for_basis, local_taylor, synthesize, BasisTable, CoefficientVector,
    SymmetryClass,
};
use crate::error::{Error, Result};
use crate::grid::{pairwise_sum_c, GridFunction, QuadratureGrid};
use crate::special::trapezoid_log_defect;

/// Advertised accuracy of entropy values on the default grids.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Densities below this are treated as exact zeros in `ρ log ρ`.
const RHO_FLOOR: f64 = 1e-300;

/// `1 − log 2`, the sharp lower bound of `S(ψ) + S(ψ̃)` in one dimension.
pub fn entropy_bound() -> f64 {
    1.0 - std::f64::consts::LN_2
}

/// `2(1 − log 2)`, the conjectured infimum on odd functions.
pub fn odd_entropy_bound() -> f64 {
    2.0 * entropy_bound()
}

/// `‖f‖_p` by the trapezoid rule.
pub fn p_norm(f: &GridFunction, p: f64) -> Result<f64> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::Domain(format!("p-norm needs finite p >= 1, got {p}")));
    }
    f.check_finite()?;
    let peak = f.sup_norm();
    if peak == 0.0 {
        return Ok(0.0);
    }
    // Factor out the peak so |f|^p cannot underflow or overflow for large p.
    let powered: Vec<f64> = f.values.iter().map(|v| (v.norm() / peak).powf(p)).collect();
    Ok(peak * f.grid.integrate(&powered).powf(1.0 / p))
}

fn l2_mass(values: &[Complex64], grid: &QuadratureGrid) -> f64 {
    let sq: Vec<f64> = values.iter().map(|v| v.norm_sqr()).collect();
    grid.integrate(&sq)
}

/// Trapezoid sum of `−ρ log ρ` together with the squared norm.
fn entropy_and_mass(values: &[Complex64], grid: &QuadratureGrid) -> Result<(f64, f64)> {
    let mass = l2_mass(values, grid);
    if !mass.is_finite() {
        return Err(Error::NonFinite(values.iter().position(|v| !v.norm_sqr().is_finite()).unwrap_or(0)));
    }
    if mass <= 0.0 {
        return Err(Error::Degenerate("zero function has no entropy"));
    }
    let terms: Vec<f64> = values
        .iter()
        .map(|v| {
            let rho = v.norm_sqr() / mass;
            if rho < RHO_FLOOR {
                0.0
            } else {
                rho * rho.ln()
            }
        })
        .collect();
    Ok((-grid.integrate(&terms), mass))
}

/// A simple zero of a sampled function on the real axis.
#[derive(Debug, Clone, Copy)]
struct RealZero {
    /// Position inside the cell in units of the spacing, in `[0, 1)`.
    theta: f64,
    /// `[ψ, ψ', ψ''/2, ψ'''/6]` at the zero.
    taylor: [Complex64; 4],
}

/// Zeros below this weight cannot move the entropy by more than about 1e-20.
const ZERO_WEIGHT_FLOOR: f64 = 1e-20;

/// Cells that contain a real zero: exact zero nodes always, sign changes only
/// when the samples are real up to one global phase.
fn zero_cells(values: &[Complex64], grid: &QuadratureGrid, mass: f64) -> (Vec<(usize, bool)>, Complex64) {
    let peak = values.iter().copied().fold(Complex64::new(0.0, 0.0), |a, v| if v.norm() > a.norm() { v } else { a });
    let phase = if peak.norm() > 0.0 { peak.conj() / peak.norm() } else { Complex64::new(1.0, 0.0) };
    let tol = 1e-12 * peak.norm();
    let real = values.iter().all(|v| (v * phase).im.abs() <= tol);
    let h = grid.spacing();
    let mut cells = Vec::new();
    for j in 1..values.len().saturating_sub(1) {
        let weight = values[j - 1].norm_sqr().max(values[j + 1].norm_sqr()) / mass * h;
        if weight < ZERO_WEIGHT_FLOOR {
            continue;
        }
        if values[j] == Complex64::new(0.0, 0.0) {
            cells.push((j, true));
        } else if real && (values[j] * phase).re * (values[j + 1] * phase).re < 0.0 {
            cells.push((j, false));
        }
    }
    (cells, phase)
}

/// Amount by which the trapezoid sum of `−ρ log ρ` exceeds the integral
/// because of the `u² log|u|` singularities at real zeros.
fn zero_correction(zeros: &[RealZero], h: f64, mass: f64) -> f64 {
    zeros
        .iter()
        .map(|z| {
            let [_, c1, c2, c3] = z.taylor;
            let r2 = c1.norm_sqr() / mass;
            let r3 = 2.0 * (c1.conj() * c2).re / mass;
            let r4 = (c2.norm_sqr() + 2.0 * (c1.conj() * c3).re) / mass;
            2.0 * [(2u32, r2), (3, r3), (4, r4)]
                .iter()
                .map(|&(k, r)| r * h.powi(k as i32 + 1) * trapezoid_log_defect(k, z.theta))
                .sum::<f64>()
        })
        .sum()
}

/// Solves the small dense system `a x = b` by partial-pivot elimination.
fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap_or(col);
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    x
}

/// Quintic through nodes `j−2..=j+3`, as monomial coefficients in `t = (x − x_j)/h`.
fn local_quintic(samples: &[f64], j: usize) -> Option<[f64; 6]> {
    if j < 2 || j + 3 >= samples.len() {
        return None;
    }
    let rows: Vec<Vec<f64>> = (-2i32..=3).map(|t| (0..6).map(|k| (t as f64).powi(k)).collect()).collect();
    let rhs: Vec<f64> = (0..6).map(|i| samples[j - 2 + i]).collect();
    let c = solve_dense(rows, rhs);
    Some([c[0], c[1], c[2], c[3], c[4], c[5]])
}

/// `[p, p', p''/2, p'''/6]` at `t` for monomial coefficients `c`.
fn poly_taylor(c: &[f64; 6], t: f64) -> [f64; 4] {
    let mut out = [0.0; 4];
    for (k, &ck) in c.iter().enumerate() {
        let mut binom = 1.0;
        for (d, o) in out.iter_mut().enumerate() {
            if d > k {
                break;
            }
            *o += ck * binom * t.powi((k - d) as i32);
            binom = binom * (k - d) as f64 / (d + 1) as f64;
        }
    }
    out
}

/// Safeguarded Newton iteration for a root inside `[0, 1]`, started from
/// linear interpolation of the endpoint values.
fn cell_root(f0: f64, f1: f64, eval: impl Fn(f64) -> (f64, f64)) -> f64 {
    let mut t = (f0 / (f0 - f1)).clamp(0.0, 1.0);
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..60 {
        let (v, d) = eval(t);
        if v == 0.0 {
            break;
        }
        if (v > 0.0) == (f0 > 0.0) {
            lo = t;
        } else {
            hi = t;
        }
        let mut next = t - v / d;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        let done = (next - t).abs() < 1e-15;
        t = next;
        if done {
            break;
        }
    }
    t
}

/// Real zeros located from samples alone, with Taylor data from local quintics.
fn sampled_zeros(values: &[Complex64], grid: &QuadratureGrid, mass: f64) -> Vec<RealZero> {
    let (cells, phase) = zero_cells(values, grid, mass);
    let h = grid.spacing();
    let re: Vec<f64> = values.iter().map(|v| (v * phase).re).collect();
    let im: Vec<f64> = values.iter().map(|v| (v * phase).im).collect();
    let mut zeros = Vec::new();
    for (j, exact) in cells {
        let (Some(pr), Some(pi)) = (local_quintic(&re, j), local_quintic(&im, j)) else { continue };
        let t = if exact {
            0.0
        } else {
            cell_root(re[j], re[j + 1], |t| {
                let d = poly_taylor(&pr, t);
                (d[0], d[1])
            })
        };
        let tr = poly_taylor(&pr, t);
        let ti = poly_taylor(&pi, t);
        let mut taylor = [Complex64::new(0.0, 0.0); 4];
        for k in 0..4 {
            taylor[k] = Complex64::new(tr[k], ti[k]) * phase.conj() / h.powi(k as i32);
        }
        zeros.push(RealZero { theta: t.min(1.0 - f64::EPSILON), taylor });
    }
    zeros
}

/// Real zeros refined with exact derivatives of the basis expansion.
fn expansion_zeros(c: &CoefficientVector, values: &[Complex64], grid: &QuadratureGrid, mass: f64) -> Result<Vec<RealZero>> {
    let (cells, phase) = zero_cells(values, grid, mass);
    let h = grid.spacing();
    let mut zeros = Vec::with_capacity(cells.len());
    for (j, exact) in cells {
        let x0 = grid.node(j);
        let t = if exact {
            0.0
        } else {
            let f0 = (values[j] * phase).re;
            let f1 = (values[j + 1] * phase).re;
            cell_root(f0, f1, |t| match local_taylor(c, x0 + t * h) {
                Ok(d) => ((d[0] * phase).re, (d[1] * phase).re * h),
                Err(_) => (0.0, 1.0),
            })
        };
        let taylor = local_taylor(c, x0 + t * h)?;
        zeros.push(RealZero { theta: t.min(1.0 - f64::EPSILON), taylor });
    }
    Ok(zeros)
}

/// `S = −∫ρ log ρ` with `ρ = |f|²/‖f‖₂²`.
///
/// The trapezoid rule loses its fast convergence at zeros of `f`, where
/// `ρ log ρ` behaves like `u² log|u|`. The leading defects there are removed
/// using local Taylor data, which restores high-order accuracy.
pub fn shannon_entropy(f: &GridFunction) -> Result<f64> {
    f.check_finite()?;
    let (s, mass) = entropy_and_mass(&f.values, &f.grid)?;
    let zeros = sampled_zeros(&f.values, &f.grid, mass);
    Ok(s - zero_correction(&zeros, f.grid.spacing(), mass))
}

/// Entropy of `ψ = Σ a_n φ_n` from its samples, with zeros refined on the expansion.
fn expansion_entropy(c: &CoefficientVector, values: &[Complex64], grid: &QuadratureGrid) -> Result<(f64, f64)> {
    let (s, mass) = entropy_and_mass(values, grid)?;
    let zeros = expansion_zeros(c, values, grid, mass)?;
    Ok((s - zero_correction(&zeros, grid.spacing(), mass), mass))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyReport {
    pub s_position: f64,
    pub s_momentum: f64,
    pub total: f64,
    /// `‖ψ‖₂`.
    pub norm2: f64,
    pub tolerance: f64,
}

/// `S(ψ) + S(ψ̃)` with `ψ̃` built from the exact coefficient phases.
pub fn total_entropy(c: &CoefficientVector, grid: &QuadratureGrid) -> Result<EntropyReport> {
    let ct = fourier_coefficients(c);
    let psi = synthesize(c, grid)?;
    let psi_t = synthesize(&ct, grid)?;
    let (s, mass) = expansion_entropy(c, &psi.values, grid)?;
    let (st, _) = expansion_entropy(&ct, &psi_t.values, grid)?;
    Ok(EntropyReport { s_position: s, s_momentum: st, total: s + st, norm2: mass.sqrt(), tolerance: DEFAULT_TOLERANCE })
}

/// Grid used by default for a coefficient vector.
pub fn default_grid(c: &CoefficientVector) -> QuadratureGrid {
    grid_for_basis(c.support().into_iter().max().unwrap_or(0))
}

/// Refines `(L, h)` until two successive values agree to `tol`.
///
/// Each round halves the spacing and widens the window by a quarter. Returns
/// the last value, the grid it was computed on and the final change.
pub fn refine_until(
    start: QuadratureGrid,
    tol: f64,
    max_rounds: usize,
    eval: impl Fn(&QuadratureGrid) -> Result<f64>,
) -> Result<(f64, QuadratureGrid, f64)> {
    let mut grid = start;
    let mut value = eval(&grid)?;
    let mut change = f64::INFINITY;
    for _ in 0..max_rounds {
        let next = QuadratureGrid::new(grid.half_width() * 1.25, grid.spacing() / 2.0)?;
        let v = eval(&next)?;
        change = (v - value).abs();
        value = v;
        grid = next;
        if change < tol {
            break;
        }
    }
    Ok((value, grid, change))
}

/// [`total_entropy`] under the refinement controller; the report's tolerance is
/// the change over the last refinement.
pub fn total_entropy_converged(c: &CoefficientVector, tol: f64) -> Result<EntropyReport> {
    let (_, grid, change) = refine_until(default_grid(c), tol, 4, |g| total_entropy(c, g).map(|r| r.total))?;
    let mut report = total_entropy(c, &grid)?;
    report.tolerance = change;
    Ok(report)
}

/// `𝒮_q = −log(‖f̃‖_q / ‖f‖_p)` with `1/p + 1/q = 1`.
pub fn sq_functional(f: &GridFunction, f_tilde: &GridFunction, q: f64) -> Result<f64> {
    if !(q >= 2.0 && q.is_finite()) {
        return Err(Error::Domain(format!("q must be finite and at least 2, got {q}")));
    }
    let p = q / (q - 1.0);
    let np = p_norm(f, p)?;
    if np == 0.0 {
        return Err(Error::Degenerate("zero p-norm"));
    }
    let nq = p_norm(f_tilde, q)?;
    Ok(-(nq / np).ln())
}

/// `𝒮_q(ψ)` for a coefficient vector, transform taken exactly.
pub fn sq_of_coefficients(c: &CoefficientVector, grid: &QuadratureGrid, q: f64) -> Result<f64> {
    let f = synthesize(c, grid)?;
    let ft = synthesize(&fourier_coefficients(c), grid)?;
    sq_functional(&f, &ft, q)
}

/// `G_s f = f |f|^{s−2} / ‖f‖_s^s`, written as `phase(f)·|f|^{s−1}` so zeros map to zero.
pub fn gs_apply(f: &GridFunction, s: f64) -> Result<GridFunction> {
    if !(s > 1.0 && s.is_finite()) {
        return Err(Error::Domain(format!("G_s needs s > 1, got {s}")));
    }
    let ns = p_norm(f, s)?;
    if ns == 0.0 {
        return Err(Error::Degenerate("G_s of the zero function"));
    }
    let denom = ns.powf(s);
    let values = f
        .values
        .iter()
        .map(|v| {
            let m = v.norm();
            if m == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                v * (m.powf(s - 2.0) / denom)
            }
        })
        .collect();
    GridFunction::new(f.grid, values)
}

const TWIDDLE_RESEED: usize = 256;

fn fourier_sum(f: &GridFunction, sign: f64) -> Result<GridFunction> {
    f.check_finite()?;
    let n = f.values.len();
    let edge = f.values[0].norm().max(f.values[n - 1].norm());
    if edge >= 1e-12 {
        return Err(Error::EdgeDecay(edge));
    }
    let grid = f.grid;
    let h = grid.spacing();
    let m = grid.half_nodes() as f64;
    let values: Vec<Complex64> = (0..n)
        .into_par_iter()
        .map(|j| {
            let xj = grid.node(j);
            let step = Complex64::from_polar(1.0, sign * 2.0 * std::f64::consts::PI * (j as f64 - m) * h * h);
            let mut terms = Vec::with_capacity(n);
            let mut w = Complex64::new(1.0, 0.0);
            for (k, v) in f.values.iter().enumerate() {
                if k % TWIDDLE_RESEED == 0 {
                    w = Complex64::from_polar(1.0, sign * 2.0 * std::f64::consts::PI * xj * grid.node(k));
                }
                terms.push(w * v);
                w *= step;
            }
            pairwise_sum_c(&terms) * h
        })
        .collect();
    GridFunction::new(grid, values)
}

/// Trapezoid approximation of `∫e^{2πixy} f(y) dy` on the same nodes.
pub fn grid_fourier(f: &GridFunction) -> Result<GridFunction> {
    fourier_sum(f, 1.0)
}

/// Trapezoid approximation of `∫e^{−2πixy} f(y) dy` on the same nodes.
pub fn grid_fourier_inverse(f: &GridFunction) -> Result<GridFunction> {
    fourier_sum(f, -1.0)
}

/// Residual `(G_p − 𝓕⁻¹ G_q 𝓕) ψ`, whose real pairing with a variation `δψ`
/// gives `δ𝒮_q`.
pub fn sq_residual(psi: &GridFunction, psi_tilde: &GridFunction, q: f64) -> Result<GridFunction> {
    if !(q >= 2.0 && q.is_finite()) {
        return Err(Error::Domain(format!("q must be finite and at least 2, got {q}")));
    }
    let p = q / (q - 1.0);
    let gp = gs_apply(psi, p)?;
    let back = grid_fourier_inverse(&gs_apply(psi_tilde, q)?)?;
    gp.sub(&back)
}

/// [`sq_residual`] for a coefficient vector on its default grid.
pub fn grad_sq(c: &CoefficientVector, q: f64) -> Result<GridFunction> {
    let grid = default_grid(c);
    let psi = synthesize(c, &grid)?;
    let psi_t = synthesize(&fourier_coefficients(c), &grid)?;
    sq_residual(&psi, &psi_t, q)
}

/// `4 𝒮_{2+step}(ψ) / step`, a one-sided difference for `d𝒮_q/dq` at `q = 2`
/// scaled to approximate `𝒮(ψ)`.
pub fn entropy_from_sq_slope(c: &CoefficientVector, step: f64) -> Result<f64> {
    if !(step > 0.0 && step <= 0.1) {
        return Err(Error::Domain(format!("step must lie in (0, 0.1], got {step}")));
    }
    let grid = default_grid(c);
    Ok(4.0 * sq_of_coefficients(c, &grid, 2.0 + step)? / step)
}

/// Precomputed basis rows for a fixed set of active indices, evaluating
/// `𝒮` and its coefficient gradient without resampling the basis.
#[derive(Debug, Clone)]
pub struct EntropyEvaluator {
    class: SymmetryClass,
    table: BasisTable,
    phases: Vec<Complex64>,
}

impl EntropyEvaluator {
    pub fn new(class: SymmetryClass, indices: &[usize], grid: QuadratureGrid) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::Config("no active basis functions".into()));
        }
        if let Some(&bad) = indices.iter().find(|&&n| !class.admits(n)) {
            return Err(Error::Config(format!("index {bad} is outside the {class} class")));
        }
        let table = BasisTable::new(grid, indices)?;
        let phases = indices.iter().map(|&n| fourier_phase(n)).collect();
        Ok(Self { class, table, phases })
    }

    /// Evaluator for a truncation of size `basis_size` on the default grid.
    pub fn for_class(class: SymmetryClass, basis_size: usize) -> Result<Self> {
        let indices = class.active_indices(basis_size);
        let max_index = indices.last().copied().unwrap_or(0);
        Self::new(class, &indices, grid_for_basis(max_index))
    }

    pub fn class(&self) -> SymmetryClass {
        self.class
    }

    pub fn indices(&self) -> &[usize] {
        &self.table.indices
    }

    pub fn grid(&self) -> &QuadratureGrid {
        &self.table.grid
    }

    /// Number of real parameters: one per index for real classes, two otherwise.
    pub fn dim(&self) -> usize {
        if self.class.is_real() {
            self.indices().len()
        } else {
            2 * self.indices().len()
        }
    }

    /// Real parameters to active coefficients (real parts first, then imaginary).
    pub fn unpack(&self, x: &[f64]) -> Vec<Complex64> {
        let k = self.indices().len();
        if self.class.is_real() {
            x.iter().map(|&v| Complex64::new(v, 0.0)).collect()
        } else {
            (0..k).map(|i| Complex64::new(x[i], x[k + i])).collect()
        }
    }

    pub fn pack(&self, a: &[Complex64]) -> Vec<f64> {
        if self.class.is_real() {
            a.iter().map(|c| c.re).collect()
        } else {
            a.iter().map(|c| c.re).chain(a.iter().map(|c| c.im)).collect()
        }
    }

    pub fn to_coefficients(&self, active: &[Complex64]) -> CoefficientVector {
        let max_index = self.indices().last().copied().unwrap_or(0);
        let mut coeffs = vec![Complex64::new(0.0, 0.0); max_index + 1];
        for (&n, &a) in self.indices().iter().zip(active) {
            coeffs[n] = a;
        }
        CoefficientVector::new(coeffs, self.class)
    }

    /// Active coefficients read off a full coefficient vector; indices beyond
    /// its length are zero.
    pub fn from_coefficients(&self, c: &CoefficientVector) -> Vec<Complex64> {
        self.indices().iter().map(|&n| c.coeffs.get(n).copied().unwrap_or_default()).collect()
    }

    fn momentum(&self, active: &[Complex64]) -> Vec<Complex64> {
        active.iter().zip(&self.phases).map(|(a, p)| a * p).collect()
    }

    /// Full [`total_entropy`] report, including the corrections at real zeros.
    pub fn report(&self, active: &[Complex64]) -> Result<EntropyReport> {
        total_entropy(&self.to_coefficients(active), &self.table.grid)
    }

    /// `∂S/∂Re a_k + i ∂S/∂Im a_k` for one space, given the samples there.
    ///
    /// With `w = log ρ + S` the first variation is
    /// `δS = −(2/‖ψ‖²) Re Σ δa_k ∫ψ* w φ_k`.
    fn space_gradient(&self, values: &[Complex64], s: f64, mass: f64) -> Vec<Complex64> {
        let weighted: Vec<Complex64> = values
            .iter()
            .map(|v| {
                let rho = v.norm_sqr() / mass;
                if rho < RHO_FLOOR {
                    Complex64::new(0.0, 0.0)
                } else {
                    v * (rho.ln() + s)
                }
            })
            .collect();
        self.table.project(&weighted).into_iter().map(|g| g * (-2.0 / mass)).collect()
    }

    /// Plain trapezoid value and its complex gradient with respect to the
    /// active coefficients. This is the smooth objective the optimizers see;
    /// it differs from [`Self::report`] only by the zero corrections. For real
    /// classes the imaginary parts of the gradient are zeroed.
    pub fn value_and_gradient(&self, active: &[Complex64]) -> Result<(EntropyReport, Vec<Complex64>)> {
        let grid = self.table.grid;
        let momentum = self.momentum(active);
        let psi = self.table.combine(active);
        let psi_t = self.table.combine(&momentum);
        let (s, mass) = entropy_and_mass(&psi, &grid)?;
        let (st, mass_t) = entropy_and_mass(&psi_t, &grid)?;
        let g_pos = self.space_gradient(&psi, s, mass);
        let g_mom = self.space_gradient(&psi_t, st, mass_t);
        let grad = g_pos
            .iter()
            .zip(&g_mom)
            .zip(&self.phases)
            .map(|((gp, gm), ph)| {
                let g = gp + gm * ph.conj();
                if self.class.is_real() {
                    Complex64::new(g.re, 0.0)
                } else {
                    g
                }
            })
            .collect();
        let report =
            EntropyReport { s_position: s, s_momentum: st, total: s + st, norm2: mass.sqrt(), tolerance: DEFAULT_TOLERANCE };
        Ok((report, grad))
    }

    /// Objective value and gradient in packed real parameters.
    pub fn value_and_gradient_packed(&self, x: &[f64]) -> Result<(f64, Vec<f64>)> {
        let (report, grad) = self.value_and_gradient(&self.unpack(x))?;
        Ok((report.total, self.pack(&grad)))
    }
}

/// Gradient of `𝒮` with respect to the coefficients of `c` that its class admits.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyGradient {
    pub indices: Vec<usize>,
    pub values: Vec<Complex64>,
}

impl EntropyGradient {
    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

pub fn grad_total_entropy(c: &CoefficientVector) -> Result<EntropyGradient> {
    let indices: Vec<usize> = (0..c.len()).filter(|&n| c.class.admits(n)).collect();
    let ev = EntropyEvaluator::new(c.class, &indices, default_grid_for_len(c.len()))?;
    let (_, values) = ev.value_and_gradient(&ev.from_coefficients(c))?;
    Ok(EntropyGradient { indices, values })
}

fn default_grid_for_len(len: usize) -> QuadratureGrid {
    grid_for_basis(len.saturating_sub(1))
}

/// `Re ∫ conj(a) b`, the real L² pairing of two sampled functions.
pub fn real_pairing(a: &GridFunction, b: &GridFunction) -> Result<f64> {
    if a.grid != b.grid {
        return Err(Error::Config("pairing of functions on different grids".into()));
    }
    let prods: Vec<f64> = a.values.iter().zip(&b.values).map(|(x, y)| (x.conj() * y).re).collect();
    Ok(a.grid.integrate(&prods))
}
