//! Fixed-precision binary floating point reals and complex numbers, with the
//! few transcendental functions needed to evaluate `j` at CM points.

mod complex;
mod modular;
mod real;

pub use complex::{atan2, cis, BigComplex};
pub use modular::{cm_point, j_invariant, reduce_to_fundamental_domain, truncation_order};
pub use real::{exp, ln, ln2, pi, BigFloat, MIN_PREC};
