//! Least-squares fit of an odd function by a dilated `Φ_a`.

use serde::{Deserialize, Serialize};

use super::construct::{CombFunction, Variant};
use crate::error::{Error, Result};
use crate::grid::GridFunction;

pub const A_RANGE: (f64, f64) = (0.05, 1.0);
pub const MU_RANGE: (f64, f64) = (0.5, 2.0);
/// Residuals above this are reported as a poor fit.
pub const POOR_FIT: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub a: f64,
    pub mu: f64,
    /// `±1`, the sign multiplying the model.
    pub sign: f64,
    /// `‖f/‖f‖₂ − sign·g/‖g‖₂‖₂` with `g(x) = Φ_a(μx)`.
    pub residual: f64,
    pub poor_fit: bool,
}

struct Target<'a> {
    f: &'a GridFunction,
    unit: Vec<f64>,
    nodes: Vec<f64>,
}

impl Target<'_> {
    fn residual(&self, a: f64, mu: f64) -> (f64, f64) {
        let model = CombFunction::bigaussian(a, Variant::Plain).expect("a within range");
        let g: Vec<f64> = self.nodes.iter().map(|&x| model.value_at(mu * x).re).collect();
        let h = self.f.grid.spacing();
        let gn = (g.iter().map(|v| v * v).sum::<f64>() * h).sqrt();
        if gn == 0.0 {
            return (f64::INFINITY, 1.0);
        }
        let overlap: f64 = self.unit.iter().zip(&g).map(|(u, v)| u * v).sum::<f64>();
        let sign = if overlap < 0.0 { -1.0 } else { 1.0 };
        let d2: f64 = self.unit.iter().zip(&g).map(|(u, v)| (u - sign * v / gn).powi(2)).sum::<f64>() * h;
        (d2.sqrt(), sign)
    }
}

fn log_points(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64)).collect()
}

/// Golden-section search for a minimum of `f` on `[lo, hi]`.
fn golden<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > tol * (1.0 + x1.abs()) {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Brackets the best point of a coarse log-spaced scan, then refines it.
fn scan_then_golden<F: FnMut(f64) -> f64>(mut f: F, range: (f64, f64), points: usize, tol: f64) -> (f64, f64) {
    let xs = log_points(range.0, range.1, points);
    let vals: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let k = (0..points).min_by(|&i, &j| vals[i].total_cmp(&vals[j])).expect("non-empty scan");
    let lo = xs[k.saturating_sub(1)];
    let hi = xs[(k + 1).min(points - 1)];
    let (x, v) = golden(&mut f, lo, hi, tol);
    if v <= vals[k] {
        (x, v)
    } else {
        (xs[k], vals[k])
    }
}

/// Best `(a, μ, sign)` with `a ∈ [0.05, 1]`, `μ ∈ [0.5, 2]`: golden-section
/// over `a` nested inside golden-section over `μ`, each after a coarse scan.
pub fn fit_bigaussian(f: &GridFunction) -> Result<FitResult> {
    f.check_finite()?;
    let peak = f.sup_norm();
    if peak == 0.0 {
        return Err(Error::Domain("cannot fit the zero function".into()));
    }
    if f.parity_defect(1.0) > 1e-8 * peak {
        return Err(Error::Domain("fit target is not odd".into()));
    }
    if f.values.iter().any(|v| v.im.abs() > 1e-8 * peak) {
        return Err(Error::Domain("fit target is not real".into()));
    }
    let h = f.grid.spacing();
    let re = f.real_parts();
    let norm = (re.iter().map(|v| v * v).sum::<f64>() * h).sqrt();
    let target = Target { f, unit: re.iter().map(|v| v / norm).collect(), nodes: f.grid.nodes() };

    let inner = |mu: f64| scan_then_golden(|a| target.residual(a, mu).0, A_RANGE, 24, 1e-8);
    let (mu, _) = scan_then_golden(|mu| inner(mu).1, MU_RANGE, 13, 1e-7);
    let (a, _) = inner(mu);
    let (residual, sign) = target.residual(a, mu);
    Ok(FitResult { a, mu, sign, residual, poor_fit: residual > POOR_FIT })
}
