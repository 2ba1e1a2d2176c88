//! Delta combs, Gaussian profiles and the bi-Gaussian functions built from them.

pub mod construct;
pub mod delta;
pub mod exact;
pub mod fit;
pub mod limits;
pub mod precise;
pub mod profile;
pub mod stationarity;

pub use construct::{comb_grid, equivalence_gap, CombFunction, Variant};
pub use delta::{comb_constants, CombConstants, DeltaComb, PhaseRule};
pub use precise::{bigaussian_precise, PreciseBigaussian};
pub use profile::GaussianProfile2D;
