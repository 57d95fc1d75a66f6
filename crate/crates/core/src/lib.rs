//! Exact counting, ratio analysis and small-scale classification of linear
//! codes over finite fields by the dimension of their hull C ∩ C⊥.

pub mod brute;
pub mod census;
pub mod classify;
pub mod cli;
pub mod error;
pub mod gf;
pub mod qcomb;
pub mod ratio;

pub use error::{Error, Result};
pub use qcomb::{Count, Ratio};
