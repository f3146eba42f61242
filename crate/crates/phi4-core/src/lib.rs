//! Lattice Phi^4_3 laboratory.
//!
//! Core building blocks: periodic lattices and fields, the discrete Fourier
//! calculus, a dyadic Littlewood-Paley toolbox (partitions, Besov norms,
//! paraproducts, localizers), renormalized stochastic objects driven by
//! counter-keyed noise, Langevin and Metropolis samplers, and an estimator
//! suite for lattice measures.

pub mod besov;
pub mod calculus;
pub mod error;
pub mod fft;
pub mod field;
pub mod heat;
pub mod lattice;
pub mod para;
pub mod partition;

pub use error::{Phi4Error, Result};
pub use field::{weight_field, Domain, Field};
pub use lattice::{make_lattice, Lattice, Weight, DIM};
