//! Finite fields, matrices over them, and linear codes.

pub mod bits;
mod code;
mod field;
mod matrix;

pub use code::{Code, MAX_CODEWORDS};
pub use field::{prime_power, Field, MAX_ORDER};
pub use matrix::{dot, Matrix, Rref};

pub(crate) use code::binary_min_weight;
pub(crate) use matrix::rref_in_place;
