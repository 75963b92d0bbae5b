//! Exponential Tsallis-Havrda-Charvat entropies for probability distributions
//! and density operators, plus a seeded harness that checks their structural
//! properties numerically.
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`linalg`] | complex matrices, Jacobi eigensolver, Haar and random-state sampling |
//! | [`classical`] | Shannon, Tsallis/Havrda-Charvat, Rényi, Kapur and their exponentials |
//! | [`quantum`] | density operators, von Neumann and exponential quantum entropy, rank bound |
//! | [`channels`] | projective measurements and pure-state ensembles |
//! | [`verify`] | property suites producing serializable reports |
//! | [`cli`] | the `expent` command-line front end |
//!
//! ```
//! use expent::classical::{exp_thc_entropy, Alpha, Distribution};
//!
//! let coin = Distribution::new(vec![0.5, 0.5]).unwrap();
//! let e = exp_thc_entropy(&coin, Alpha::new(2.0).unwrap());
//! assert!((e - (1.0 - (-0.5f64).exp())).abs() < 1e-15);
//! ```

#![forbid(unsafe_code)]

pub mod channels;
pub mod classical;
pub mod cli;
mod error;
pub mod linalg;
pub mod quantum;
pub mod verify;

pub use error::{Error, Result};
pub use quantum::{validate_density, DensityOperator};
