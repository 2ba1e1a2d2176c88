//! Local optimizers used by the entropy minimizer.

pub mod lbfgs;
pub mod nelder_mead;
