//! Nelder–Mead simplex search with the standard coefficients and restarts
//! when the simplex collapses.

use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMeadConfig {
    pub reflection: f64,
    pub expansion: f64,
    pub contraction: f64,
    pub shrink: f64,
    /// Edge length of the initial and restart simplices.
    pub initial_step: f64,
    /// Converged once the simplex diameter falls below this and a restart
    /// brings no further improvement.
    pub tolerance: f64,
    pub max_iterations: usize,
    pub max_restarts: usize,
    /// Set when the objective is invariant under `x → λx`, `λ > 0`; the
    /// simplex is then rescaled to keep its best vertex near unit norm.
    pub scale_invariant: bool,
}

impl Default for NelderMeadConfig {
    fn default() -> Self {
        Self {
            reflection: 1.0,
            expansion: 2.0,
            contraction: 0.5,
            shrink: 0.5,
            initial_step: 0.1,
            tolerance: 1e-7,
            max_iterations: 100_000,
            max_restarts: 20,
            scale_invariant: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NelderMeadOutcome {
    pub x: Vec<f64>,
    pub value: f64,
    pub diameter: f64,
    pub iterations: usize,
    pub restarts: usize,
    pub converged: bool,
}

fn diameter(simplex: &[(Vec<f64>, f64)]) -> f64 {
    let best = &simplex[0].0;
    simplex[1..]
        .iter()
        .map(|(v, _)| v.iter().zip(best).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
        .fold(0.0, f64::max)
}

fn sort(simplex: &mut [(Vec<f64>, f64)]) {
    // Stable, so ties keep their insertion order and runs are reproducible.
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
}

fn build<F>(f: &mut F, center: &[f64], step: f64) -> Result<Vec<(Vec<f64>, f64)>>
where
    F: FnMut(&[f64]) -> Result<f64>,
{
    let mut simplex = vec![(center.to_vec(), f(center)?)];
    for i in 0..center.len() {
        let mut v = center.to_vec();
        v[i] += if v[i] >= 0.0 { step } else { -step };
        let fv = f(&v)?;
        simplex.push((v, fv));
    }
    sort(&mut simplex);
    Ok(simplex)
}

/// Keeps the best vertex near unit norm by rescaling the whole simplex; for a
/// scale-invariant objective this leaves every vertex value unchanged.
fn rescale(simplex: &mut [(Vec<f64>, f64)]) {
    let n = simplex[0].0.iter().map(|v| v * v).sum::<f64>().sqrt();
    if n > 0.0 && !(0.5..=2.0).contains(&n) {
        for (v, _) in simplex.iter_mut() {
            v.iter_mut().for_each(|x| *x /= n);
        }
    }
}

pub fn minimize<F>(mut f: F, x0: &[f64], cfg: &NelderMeadConfig) -> Result<NelderMeadOutcome>
where
    F: FnMut(&[f64]) -> Result<f64>,
{
    let dim = x0.len();
    let mut simplex = build(&mut f, x0, cfg.initial_step)?;
    let mut iterations = 0;
    let mut restarts = 0;
    let mut converged = false;

    let mut last_collapse: Option<f64> = None;

    while iterations < cfg.max_iterations {
        if diameter(&simplex) < cfg.tolerance {
            // Collapsed. Accept if the previous collapse ended at the same
            // value, otherwise restart around the best vertex.
            let best = simplex[0].1;
            if last_collapse.is_some_and(|prev| prev - best <= 1e-13 * (1.0 + best.abs())) || restarts == cfg.max_restarts {
                converged = true;
                break;
            }
            last_collapse = Some(best);
            restarts += 1;
            let center = simplex[0].0.clone();
            simplex = build(&mut f, &center, cfg.initial_step * 0.1)?;
            continue;
        }
        iterations += 1;

        let centroid: Vec<f64> = (0..dim).map(|i| simplex[..dim].iter().map(|(v, _)| v[i]).sum::<f64>() / dim as f64).collect();
        let worst = simplex[dim].clone();
        let along = |t: f64| -> Vec<f64> { centroid.iter().zip(&worst.0).map(|(c, w)| c + t * (c - w)).collect() };

        let xr = along(cfg.reflection);
        let fr = f(&xr)?;
        if fr < simplex[0].1 {
            let xe = along(cfg.reflection * cfg.expansion);
            let fe = f(&xe)?;
            simplex[dim] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[dim - 1].1 {
            simplex[dim] = (xr, fr);
        } else {
            let (xc, fc) = if fr < worst.1 {
                let xc = along(cfg.reflection * cfg.contraction);
                let fc = f(&xc)?;
                (xc, fc)
            } else {
                let xc = along(-cfg.contraction);
                let fc = f(&xc)?;
                (xc, fc)
            };
            if fc < fr.min(worst.1) {
                simplex[dim] = (xc, fc);
            } else {
                let best = simplex[0].0.clone();
                for vertex in simplex.iter_mut().skip(1) {
                    let v: Vec<f64> = best.iter().zip(&vertex.0).map(|(b, x)| b + cfg.shrink * (x - b)).collect();
                    let fv = f(&v)?;
                    *vertex = (v, fv);
                }
            }
        }
        sort(&mut simplex);
        if cfg.scale_invariant {
            rescale(&mut simplex);
        }
    }

    let d = diameter(&simplex);
    let (x, value) = simplex.swap_remove(0);
    Ok(NelderMeadOutcome { x, value, diameter: d, iterations, restarts, converged })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimizes_quadratic() {
        let f = |x: &[f64]| Ok((x[0] - 1.0).powi(2) + 10.0 * (x[1] + 0.5).powi(2) + x[2] * x[2]);
        let out = minimize(f, &[3.0, 3.0, 3.0], &NelderMeadConfig::default()).unwrap();
        assert!(out.converged);
        assert!((out.x[0] - 1.0).abs() < 1e-5 && (out.x[1] + 0.5).abs() < 1e-5 && out.x[2].abs() < 1e-5);
    }

    #[test]
    fn rosenbrock_within_budget() {
        let f = |x: &[f64]| Ok(100.0 * (x[1] - x[0] * x[0]).powi(2) + (1.0 - x[0]).powi(2));
        let cfg = NelderMeadConfig { initial_step: 0.5, ..Default::default() };
        let out = minimize(f, &[-1.2, 1.0], &cfg).unwrap();
        assert!(out.converged);
        assert!(out.value < 1e-10);
    }
}
