//! Small-`a` limits of norms and entropies of comb functions.

use num_complex::Complex64;

use super::delta::{comb_constants_f64, DeltaComb};
use super::profile::GaussianProfile2D;
use crate::error::Result;

/// `lim ‖⟨d, ψ₂⟩_a‖_p = b·r^{−1/p}·‖ψ₂‖_p`.
pub fn limit_pnorm(d: &DeltaComb, psi2: &GaussianProfile2D, p: f64) -> f64 {
    let l = &d.lattice;
    let r = l.position(1) - l.position(0);
    l.b.to_f64() * r.powf(-1.0 / p) * psi2.p_norm(p)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitEntropy {
    pub sq: f64,
    pub s: f64,
}

/// `lim 𝒮_q = 𝒮_q(ψ₂) + C_q` and `lim 𝒮 = 𝒮(ψ₂) + C` for an admissible comb,
/// `p ∈ (1, 2]`.
pub fn limit_entropy(d: &DeltaComb, psi2: &GaussianProfile2D, p: f64) -> Result<LimitEntropy> {
    let (cq, c) = comb_constants_f64(d, p)?;
    let q = p / (p - 1.0);
    let sq = if p == 2.0 { 0.0 } else { psi2.sq(q)? };
    Ok(LimitEntropy { sq: sq + cq, s: psi2.total_entropy()? + c })
}

/// `K = ∫ψ₂(0, y) dy`, the weight of the distributional limit of `a^{−1}ψ₁`.
pub fn weak_limit_constant(psi2: &GaussianProfile2D) -> Complex64 {
    psi2.weak_limit_constant()
}
