//! First-variation residual of `𝒮_q` evaluated on comb functions.

use super::construct::{comb_grid, CombFunction, Variant};
use super::delta::DeltaComb;
use super::profile::GaussianProfile2D;
use crate::error::{Error, Result};
use crate::functionals::{grid_fourier, p_norm, sq_residual};
use crate::grid::{GridFunction, QuadratureGrid};

/// `‖(G_p − 𝓕⁻¹G_q𝓕)ψ₁‖_q` for `ψ₁ = ⟨d, ψ₂⟩_a` on [`comb_grid`], both
/// transforms taken by direct quadrature.
pub fn stationarity_residual(d: &DeltaComb, psi2: &GaussianProfile2D, a: f64, q: f64) -> Result<f64> {
    if !d.admissible {
        return Err(Error::Inadmissible("stationarity needs an admissible comb".into()));
    }
    if !(a > 0.0 && a <= 0.3) {
        return Err(Error::Domain(format!("a must lie in (0, 0.3], got {a}")));
    }
    let f = CombFunction::new(d.clone(), *psi2, a, Variant::Plain)?.eval(&comb_grid(a)?)?;
    residual_norm(&f, q)
}

/// The same residual for `exp(−πx²)`, which is stationary for every `q`.
pub fn gaussian_stationarity_residual(q: f64) -> Result<f64> {
    let grid = QuadratureGrid::new(8.0, 0.02)?;
    let f = GridFunction::from_real_fn(grid, |x| (-std::f64::consts::PI * x * x).exp());
    residual_norm(&f, q)
}

fn residual_norm(f: &GridFunction, q: f64) -> Result<f64> {
    let ft = grid_fourier(f)?;
    let res = sq_residual(f, &ft, q)?;
    if res.sup_norm() == 0.0 {
        return Ok(0.0);
    }
    p_norm(&res, q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_is_stationary() {
        for q in [2.0, 3.0, 4.0, 6.0] {
            assert!(gaussian_stationarity_residual(q).unwrap() < 1e-7, "q={q}");
        }
    }

    #[test]
    fn unitary_case_vanishes() {
        let r = stationarity_residual(&DeltaComb::alternating(), &GaussianProfile2D::symmetric(), 0.3, 2.0).unwrap();
        assert!(r < 1e-9, "{r}");
    }
}
