pub mod arith;
pub mod arrangement;
pub mod braid_action;
pub mod catalog;
pub mod error;
pub mod exact_number;
pub mod matrix;
pub mod orbit_engine;
pub mod perm;
pub mod perm_models;
pub mod poly;
pub mod quasicoxeter;
pub mod realization;
pub mod suites;

pub use arrangement::ArrangementMatrix;
pub use error::{Error, Result};
pub use exact_number::{ExactNumber, Rational};
pub use matrix::Matrix;
pub use perm::Permutation;
pub use poly::Poly;
pub use braid_action::{BraidWord, Letter};
