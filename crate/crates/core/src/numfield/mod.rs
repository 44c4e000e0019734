//! Number fields as towers of relative extensions over ℚ, exact arithmetic,
//! polynomial factorization and prime splitting.

mod elem;
mod field;
mod poly;
mod residue;
mod modular;
mod trager;

pub use elem::AlgElem;
pub use field::NumberField;
pub use poly::FPoly;
pub use residue::{prime_field_as_ext, Branch};

#[cfg(test)]
mod tests;
