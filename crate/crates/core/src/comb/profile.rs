//! Centered two-variable Gaussians `N·exp(−½Ax² − ½By² − Cxy)` and their
//! closed-form norms, entropies and transforms.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianProfile2D {
    pub amplitude: Complex64,
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
}

impl GaussianProfile2D {
    pub fn new(amplitude: Complex64, a: Complex64, b: Complex64, c: Complex64) -> Result<Self> {
        let g = Self { amplitude, a, b, c };
        g.validate()?;
        Ok(g)
    }

    /// `exp(−π(x² + y²))`.
    pub fn symmetric() -> Self {
        let two_pi = Complex64::new(2.0 * PI, 0.0);
        Self { amplitude: Complex64::new(1.0, 0.0), a: two_pi, b: two_pi, c: Complex64::new(0.0, 0.0) }
    }

    /// `α(x)β(y)` with `α = exp(−½Ax²)`, `β = exp(−½By²)`, real widths.
    pub fn separable(a: f64, b: f64) -> Result<Self> {
        Self::new(Complex64::new(1.0, 0.0), Complex64::new(a, 0.0), Complex64::new(b, 0.0), Complex64::new(0.0, 0.0))
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.amplitude, self.a, self.b, self.c].iter().all(|z| z.re.is_finite() && z.im.is_finite());
        if !finite || self.amplitude.norm() == 0.0 {
            return Err(Error::Domain("profile amplitude must be finite and non-zero".into()));
        }
        if !(self.a.re > 0.0 && self.real_det() > 0.0) {
            return Err(Error::Domain("real part of the quadratic form is not positive definite".into()));
        }
        Ok(())
    }

    /// `det Re[[A, C], [C, B]]`.
    pub fn real_det(&self) -> f64 {
        self.a.re * self.b.re - self.c.re * self.c.re
    }

    fn real_min_eigen(&self) -> f64 {
        let (a, b, c) = (self.a.re, self.b.re, self.c.re);
        let mean = 0.5 * (a + b);
        let rad = (0.25 * (a - b) * (a - b) + c * c).sqrt();
        mean - rad
    }

    /// Radius beyond which `|ψ₂|/|N| < e^{−cut}` in every direction.
    pub fn decay_radius(&self, cut: f64) -> f64 {
        (2.0 * cut / self.real_min_eigen()).sqrt()
    }

    pub fn eval(&self, x: f64, y: f64) -> Complex64 {
        let q = self.a * (0.5 * x * x) + self.b * (0.5 * y * y) + self.c * (x * y);
        self.amplitude * (-q).exp()
    }

    /// `‖ψ₂‖_p = |N|·(2π/(p √det Re))^{1/p}`.
    pub fn p_norm(&self, p: f64) -> f64 {
        self.amplitude.norm() * (2.0 * PI / (p * self.real_det().sqrt())).powf(1.0 / p)
    }

    /// Shannon entropy of `|ψ₂|²/‖ψ₂‖²` on the plane: a normal density with
    /// covariance `(2 Re M)^{-1}`.
    pub fn entropy(&self) -> f64 {
        1.0 + (2.0 * PI).ln() - 0.5 * (4.0 * self.real_det()).ln()
    }

    /// Two-dimensional transform under `e^{2πi(ux+vy)}` followed by swapping
    /// the arguments: `M → 4π² M^{-1}` then transposed, `N → 2πN/√det M`.
    pub fn fourier_transposed(&self) -> Result<Self> {
        self.validate()?;
        let det = self.a * self.b - self.c * self.c;
        let k = 4.0 * PI * PI / det;
        Ok(Self { amplitude: self.amplitude * 2.0 * PI / det.sqrt(), a: self.a * k, b: self.b * k, c: -self.c * k })
    }

    /// `𝒮(ψ₂) = S(ψ₂) + S(ψ̃₂)` on the plane.
    pub fn total_entropy(&self) -> Result<f64> {
        Ok(self.entropy() + self.fourier_transposed()?.entropy())
    }

    /// `−log(‖ψ̃₂‖_q / ‖ψ₂‖_p)` with `1/p + 1/q = 1`.
    pub fn sq(&self, q: f64) -> Result<f64> {
        let p = q / (q - 1.0);
        Ok(-(self.fourier_transposed()?.p_norm(q) / self.p_norm(p)).ln())
    }

    /// `K = ∫ψ₂(0, y) dy = N √(2π/B)`.
    pub fn weak_limit_constant(&self) -> Complex64 {
        self.amplitude * (Complex64::new(2.0 * PI, 0.0) / self.b).sqrt()
    }
}

/// Sharp planar value of `𝒮_q`: `(1/q) log q − (1/p) log p`.
pub fn sq_bound(q: f64) -> f64 {
    let p = q / (q - 1.0);
    q.ln() / q - p.ln() / p
}
