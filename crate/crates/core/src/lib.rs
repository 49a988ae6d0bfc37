//! Parafermion algebras, their qudit representation, the entangling braid,
//! qudit Pauli operators built from four parafermions, a planar-diagram
//! rewrite engine and braid-based entanglement protocols.

pub mod algebra;
pub mod braid;
pub mod diagram;
pub mod error;
pub mod fock;
pub mod models;
pub mod pauli;
pub mod protocols;
pub mod report;
pub mod scalars;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
