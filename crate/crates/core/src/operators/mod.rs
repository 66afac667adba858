//! Finite truncations of the weighted Hankel, quantum Hilbert and classical
//! matrices, and of the Jacobi matrices commuting with them.

mod classical;
mod extended;
mod hankel;
mod matrix;
mod quantum;

pub use classical::{b_jacobi_spec, build_classical, ClassicalBuilder};
pub use extended::g_combination_residual;
pub use hankel::{
    asc_jacobi_spec, build_g, build_h, build_h_with, build_j, build_tilde_h, g_combination_coefficients,
    hankel_symbol_h, hankel_symbol_scaled, hankel_symbols, hankel_symbols_scaled, hankel_weight_w, HankelStrategy,
};
pub use matrix::{hex_float, DenseSymmetricMatrix, JacobiSpec, Provenance};
pub use quantum::{
    build_gcal, build_jcal, build_quantum_hilbert, jcal_inverse_entry, jcal_inverse_matrix, jcal_spec,
    quantum_hilbert_trace, QuantumHilbertParams, TraceEstimate,
};
