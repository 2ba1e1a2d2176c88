//! Lattice delta combs `Σ bₙ δ(x − x₀ − nr)` with `|bₙ| = b`, their Fourier
//! duals and dilatations.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::exact::{ratio, PowerProduct};
use crate::error::{Error, Result};

/// Phases of the weights, in turns: `bₙ = b·exp(2πi·θₙ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PhaseRule {
    /// `bₙ = (−1)ⁿ b`.
    Alternating,
    /// `bₙ = b`.
    Uniform,
    /// `θₙ = offset + n·step`.
    Linear { offset: BigRational, step: BigRational },
    /// `θₙ = pattern[n mod len]`. Only the constant pattern is handled by the
    /// duality; anything else is reported as inadmissible.
    Periodic(Vec<BigRational>),
}

fn frac(q: &BigRational) -> BigRational {
    q - q.floor()
}

impl PhaseRule {
    /// `(offset, step)` reduced to `[0, 1)` when the rule is linear in `n`.
    pub fn linear(&self) -> Option<(BigRational, BigRational)> {
        match self {
            PhaseRule::Alternating => Some((BigRational::zero(), ratio(1, 2))),
            PhaseRule::Uniform => Some((BigRational::zero(), BigRational::zero())),
            PhaseRule::Linear { offset, step } => Some((frac(offset), frac(step))),
            PhaseRule::Periodic(p) if p.len() == 1 => Some((frac(&p[0]), BigRational::zero())),
            PhaseRule::Periodic(_) => None,
        }
    }

    /// Phase of the weight with index `n`, in turns reduced to `[0, 1)`.
    pub fn turns(&self, n: i64) -> BigRational {
        match self {
            PhaseRule::Periodic(p) if !p.is_empty() => frac(&p[n.rem_euclid(p.len() as i64) as usize]),
            _ => {
                let (offset, step) = self.linear().unwrap_or_default();
                frac(&(offset + step * BigRational::from_integer(BigInt::from(n))))
            }
        }
    }
}

/// `exp(2πi·t)` with exact values at quarter turns.
pub fn unit_phase(turns: &BigRational) -> Complex64 {
    let t = frac(turns);
    let quarter = |k| t == ratio(k, 4);
    if t.is_zero() {
        Complex64::new(1.0, 0.0)
    } else if quarter(1) {
        Complex64::new(0.0, 1.0)
    } else if quarter(2) {
        Complex64::new(-1.0, 0.0)
    } else if quarter(3) {
        Complex64::new(0.0, -1.0)
    } else {
        Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * t.to_f64().unwrap_or(f64::NAN))
    }
}

/// Lattice data of a comb without its dual.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CombLattice {
    pub x0: BigRational,
    pub r: BigRational,
    pub b: PowerProduct,
    pub phase: PhaseRule,
}

impl CombLattice {
    /// Same comb with `x₀` shifted into `[0, r)` by reindexing, and the phase
    /// rule made explicitly linear.
    pub fn canonical(&self) -> Option<Self> {
        let (offset, step) = self.phase.linear()?;
        let k = (&self.x0 / &self.r).floor();
        let x0 = &self.x0 - &k * &self.r;
        let offset = frac(&(offset + &k * &step));
        Some(Self { x0, r: self.r.clone(), b: self.b.clone(), phase: PhaseRule::Linear { offset, step } })
    }

    /// Poisson summation: the transform of `b Σ e^{2πi(φ+nθ)} δ(x − x₀ − nr)`
    /// under the kernel `e^{2πixy}` is
    /// `(b/r) Σ e^{2πi(φ − x₀θ/r + m·x₀/r)} δ(y + θ/r − m/r)`.
    pub fn fourier_dual(&self) -> Result<Self> {
        let (offset, step) = self.phase.linear().ok_or_else(|| {
            Error::Inadmissible("phase pattern is not linear in the index; dual not determined".into())
        })?;
        let r_inv = BigRational::one() / &self.r;
        let x0 = -&step * &r_inv;
        let dual_offset = frac(&(offset - &self.x0 * &step * &r_inv));
        let dual_step = frac(&(&self.x0 * &r_inv));
        let b = self.b.div(&PowerProduct::from_ratio(&self.r)?);
        Ok(Self { x0, r: r_inv, b, phase: PhaseRule::Linear { offset: dual_offset, step: dual_step } })
    }

    /// If `other = e^{2πiτ}·self` as distributions, returns `τ ∈ [0, 1)`.
    pub fn eigenphase(&self, other: &Self) -> Option<BigRational> {
        let a = self.canonical()?;
        let b = other.canonical()?;
        if a.x0 != b.x0 || a.r != b.r || a.b != b.b {
            return None;
        }
        match (a.phase, b.phase) {
            (PhaseRule::Linear { offset: oa, step: sa }, PhaseRule::Linear { offset: ob, step: sb }) if sa == sb => {
                Some(frac(&(ob - oa)))
            }
            _ => None,
        }
    }

    pub fn weight(&self, n: i64) -> Complex64 {
        unit_phase(&self.phase.turns(n)) * self.b.to_f64()
    }

    pub fn position(&self, n: i64) -> f64 {
        self.x0.to_f64().unwrap_or(f64::NAN) + n as f64 * self.r.to_f64().unwrap_or(f64::NAN)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaComb {
    pub lattice: CombLattice,
    /// Fourier dual, filled in by [`DeltaComb::with_dual`].
    pub dual: Option<CombLattice>,
    /// Set once the dual has been shown to be a comb again.
    pub admissible: bool,
}

impl DeltaComb {
    pub fn new(x0: BigRational, r: BigRational, b: PowerProduct, phase: PhaseRule) -> Result<Self> {
        if !r.is_positive() {
            return Err(Error::Domain(format!("comb spacing must be positive, got {r}")));
        }
        if let PhaseRule::Periodic(p) = &phase {
            if p.is_empty() {
                return Err(Error::Domain("empty phase pattern".into()));
            }
        }
        Ok(Self { lattice: CombLattice { x0, r, b, phase }, dual: None, admissible: false })
    }

    /// `Σ (−1)ⁿ δ(x − n − 1/2)`, an eigendistribution of the transform with eigenvalue `i`.
    pub fn alternating() -> Self {
        Self::new(ratio(1, 2), BigRational::one(), PowerProduct::one(), PhaseRule::Alternating)
            .expect("valid preset")
            .with_dual()
            .expect("alternating comb is self-dual")
    }

    /// `Σ δ(x − n)`, invariant under the transform.
    pub fn uniform() -> Self {
        Self::new(BigRational::zero(), BigRational::one(), PowerProduct::one(), PhaseRule::Uniform)
            .expect("valid preset")
            .with_dual()
            .expect("integer comb is self-dual")
    }

    pub fn with_dual(mut self) -> Result<Self> {
        self.dual = Some(self.lattice.fourier_dual()?);
        self.admissible = true;
        Ok(self)
    }

    pub fn dual_lattice(&self) -> Result<&CombLattice> {
        self.dual.as_ref().ok_or_else(|| Error::Inadmissible("comb has no established dual".into()))
    }

    /// The dual comb as a comb in its own right, with the original as its dual.
    pub fn fourier_dual(&self) -> Result<DeltaComb> {
        let dual = self.lattice.fourier_dual()?;
        Ok(DeltaComb { lattice: dual, dual: Some(self.lattice.clone()), admissible: true })
    }

    /// `d(x) → μ^{1/2} d(μx)`: positions and spacing scale by `1/μ`, weights
    /// by `μ^{−1/2}`.
    pub fn dilate(&self, mu: &BigRational) -> Result<Self> {
        let mu_pp = PowerProduct::from_ratio(mu)?;
        let l = &self.lattice;
        let scaled = CombLattice {
            x0: &l.x0 / mu,
            r: &l.r / mu,
            b: l.b.mul(&mu_pp.pow(&ratio(-1, 2))),
            phase: l.phase.clone(),
        };
        let out = DeltaComb { lattice: scaled, dual: None, admissible: false };
        if self.admissible {
            out.with_dual()
        } else {
            Ok(out)
        }
    }

    /// `r/b²`, invariant under dilatation.
    pub fn r_over_b2(&self) -> Result<PowerProduct> {
        let l = &self.lattice;
        Ok(PowerProduct::from_ratio(&l.r)?.div(&l.b.pow(&ratio(2, 1))))
    }

    /// Whether `b²/r = b̃²/r̃` holds exactly.
    pub fn norm_balance_holds(&self) -> Result<bool> {
        let d = self.dual_lattice()?;
        let l = &self.lattice;
        let lhs = l.b.pow(&ratio(2, 1)).div(&PowerProduct::from_ratio(&l.r)?);
        let rhs = d.b.pow(&ratio(2, 1)).div(&PowerProduct::from_ratio(&d.r)?);
        Ok(lhs == rhs)
    }
}

/// Conjugate exponent `p/(p − 1)`.
pub fn conjugate(p: &BigRational) -> BigRational {
    p / (p - BigRational::one())
}

#[derive(Debug, Clone, PartialEq)]
pub struct CombConstants {
    /// `exp(C_q) = (b/b̃)·r̃^{1/q}·r^{−1/p}`, exact.
    pub exp_cq: PowerProduct,
    /// `exp(C) = 1/(r r̃)`, exact.
    pub exp_c: PowerProduct,
    pub cq: f64,
    pub c: f64,
    /// `C_q ≥ (1/(2p)) log p − (1/(2q)) log q`, decided exactly.
    pub cq_bound_ok: bool,
    /// `C ≥ log 2 − 1`, i.e. `2 r r̃ ≤ e`, decided exactly.
    pub c_bound_ok: bool,
}

impl CombConstants {
    pub fn bounds_ok(&self) -> bool {
        self.cq_bound_ok && self.c_bound_ok
    }
}

/// The additive constants a comb contributes to the limiting `𝒮_q` and `𝒮`
/// of its bi-Gaussian family, for rational `p ∈ (1, 2]`.
pub fn comb_constants(d: &DeltaComb, p: &BigRational) -> Result<CombConstants> {
    if !d.admissible {
        return Err(Error::Inadmissible("comb constants need an admissible comb".into()));
    }
    if !(p > &BigRational::one() && p <= &ratio(2, 1)) {
        return Err(Error::Domain(format!("p must lie in (1, 2], got {p}")));
    }
    let q = conjugate(p);
    let l = &d.lattice;
    let du = d.dual_lattice()?;
    let r = PowerProduct::from_ratio(&l.r)?;
    let rt = PowerProduct::from_ratio(&du.r)?;
    let one = BigRational::one();
    let exp_cq = l.b.div(&du.b).mul(&rt.pow(&(&one / &q))).div(&r.pow(&(&one / p)));
    let exp_c = r.mul(&rt).recip();
    let p_pp = PowerProduct::from_ratio(p)?;
    let q_pp = PowerProduct::from_ratio(&q)?;
    let two = ratio(2, 1);
    let cq_floor = p_pp.pow(&(&one / (&two * p))).div(&q_pp.pow(&(&one / (&two * &q))));
    let cq_bound_ok = exp_cq.cmp_exact(&cq_floor) != Ordering::Less;
    let c_bound_ok = PowerProduct::from_integer(2)?.mul(&r).mul(&rt).cmp_e() == Ordering::Less;
    Ok(CombConstants { cq: exp_cq.ln(), c: exp_c.ln(), exp_cq, exp_c, cq_bound_ok, c_bound_ok })
}

/// `C_q` and `C` in floating point for real `p ∈ (1, 2]`.
pub fn comb_constants_f64(d: &DeltaComb, p: f64) -> Result<(f64, f64)> {
    if !d.admissible {
        return Err(Error::Inadmissible("comb constants need an admissible comb".into()));
    }
    let q = p / (p - 1.0);
    let l = &d.lattice;
    let du = d.dual_lattice()?;
    let r = l.r.to_f64().unwrap_or(f64::NAN);
    let rt = du.r.to_f64().unwrap_or(f64::NAN);
    let cq = l.b.ln() - du.b.ln() + rt.ln() / q - r.ln() / p;
    Ok((cq, -(r * rt).ln()))
}

pub fn big(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alternating_comb_is_eigen_with_phase_i() {
        let d = DeltaComb::alternating();
        let dual = d.dual_lattice().unwrap();
        assert_eq!(dual.r, big(1));
        assert!(dual.b.is_one());
        assert_eq!(d.lattice.eigenphase(dual), Some(ratio(1, 4)));
        let c = dual.canonical().unwrap();
        assert_eq!(c.x0, ratio(1, 2));
    }

    #[test]
    fn integer_comb_is_invariant() {
        let d = DeltaComb::uniform();
        assert_eq!(d.lattice.eigenphase(d.dual_lattice().unwrap()), Some(BigRational::zero()));
    }

    #[test]
    fn dilated_comb_dual() {
        let d = DeltaComb::alternating().dilate(&big(2)).unwrap();
        let half = ratio(1, 2);
        let two = PowerProduct::from_integer(2).unwrap();
        assert_eq!(d.lattice.r, half);
        assert_eq!(d.lattice.b, two.pow(&-half.clone()));
        let du = d.dual_lattice().unwrap();
        assert_eq!(du.r, big(2));
        assert_eq!(du.b, two.pow(&half));
        assert!(d.r_over_b2().unwrap().is_one());
    }

    #[test]
    fn constants_vanish_for_alternating_comb() {
        let d = DeltaComb::alternating();
        for p in [ratio(2, 1), ratio(4, 3), ratio(3, 2), ratio(11, 10)] {
            let c = comb_constants(&d, &p).unwrap();
            assert!(c.exp_cq.is_one() && c.exp_c.is_one());
            assert!(c.bounds_ok());
        }
        let u = comb_constants(&DeltaComb::uniform(), &ratio(4, 3)).unwrap();
        assert!(u.exp_c.is_one());
    }

    #[test]
    fn constants_invariant_under_dilatation() {
        let d = DeltaComb::alternating();
        let p = ratio(4, 3);
        let base = comb_constants(&d, &p).unwrap();
        let dil = comb_constants(&d.dilate(&big(3)).unwrap(), &p).unwrap();
        assert_eq!(base, dil);
        assert_eq!(d.r_over_b2().unwrap(), d.dilate(&big(3)).unwrap().r_over_b2().unwrap());
    }

    #[test]
    fn double_dual_reflects() {
        // The transform applied twice is the reflection x → −x.
        let d = DeltaComb::new(ratio(1, 3), ratio(2, 5), PowerProduct::from_integer(3).unwrap(), PhaseRule::Linear {
            offset: ratio(1, 7),
            step: ratio(2, 9),
        })
        .unwrap();
        let dd = d.lattice.fourier_dual().unwrap().fourier_dual().unwrap();
        for n in -3..=3 {
            let x = d.lattice.position(n);
            let w = d.lattice.weight(n);
            // find the matching term of dd at −x
            let m = ((-x - dd.position(0)) / dd.r.to_f64().unwrap()).round() as i64;
            assert!((dd.position(m) + x).abs() < 1e-12);
            assert!((dd.weight(m) - w).norm() < 1e-12);
        }
    }

    #[test]
    fn non_linear_pattern_is_inadmissible() {
        let d = DeltaComb::new(big(0), big(1), PowerProduct::one(), PhaseRule::Periodic(vec![big(0), big(0), ratio(1, 2)]))
            .unwrap();
        assert!(matches!(d.fourier_dual(), Err(Error::Inadmissible(_))));
        assert!(comb_constants(&d, &big(2)).is_err());
    }
}
