//! Numerical laboratory for the entropic uncertainty functional
//! `𝒮(ψ) = S(ψ) + S(ψ̃)` on the real line.

pub mod basis;
pub mod comb;
pub mod document;
pub mod error;
pub mod functionals;
pub mod grid;
pub mod minimizer;
pub mod optim;
pub mod special;
pub mod suite;

pub use error::{Error, Result};

/// `x` with nine significant digits: fixed notation for `1e-5 ≤ |x| < 1e9`,
/// scientific otherwise.
pub fn sig9(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.8e}");
    let exp: i32 = sci[sci.find('e').expect("exponent") + 1..].parse().expect("integer exponent");
    if (-5..9).contains(&exp) {
        format!("{x:.*}", (8 - exp) as usize)
    } else {
        sci
    }
}
