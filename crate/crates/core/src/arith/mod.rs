//! Exact polynomial and integer-matrix arithmetic.

pub mod factor;
pub mod gcd;
pub mod modp;
pub mod poly;
pub mod resultant;
pub mod snf;
pub mod zassenhaus;

pub use modp::{factor_degrees_mod_q, factor_mod_q, is_prime_u64, ExtField, FiniteField, PrimeField};
pub use poly::{int_gcd, squarefree_decomposition, IntPoly, RatPoly};
pub use resultant::{discriminant, resultant};
pub use snf::{hermite_rows, smith_normal_form, AbelianGroup, IntMatrix};
pub use zassenhaus::{factor_over_q, factor_rat_poly, Factorization};
