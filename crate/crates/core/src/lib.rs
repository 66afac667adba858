//! Quantum weighted Hankel matrices and the Jacobi operators they commute with.
//!
//! The crate builds finite truncations of the Al-Salam--Chihara weighted Hankel
//! matrix `H(a,b)`, the continuous q-Laguerre matrices `G(a;q)` and `H~(alpha;q)`,
//! the quantum Hilbert matrix and the classical Hilbert/`B(a,b,c)` pair, together
//! with the Jacobi matrices commuting with them. Every closed-form statement about
//! these operators (commutation, multiplier functions, spectral intervals, norms,
//! integral identities and the supporting basic hypergeometric identities) can be
//! checked numerically at finite truncation.

pub mod cli;
pub mod error;
pub mod operators;
pub mod polyfam;
pub mod qcore;
pub mod report;
pub mod spectral;
pub mod suite;
pub mod verify;

pub use error::{Error, Result};

pub use operators::{DenseSymmetricMatrix, Provenance};
pub use polyfam::{AscParams, PolynomialFamily};
pub use qcore::{QBase, SeriesResult};
