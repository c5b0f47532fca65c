//! Eigenvalue machinery and spectral diagnostics for Gram blocks and their symbols.

pub mod circulant;
pub mod frame;
pub mod jacobi;

pub use circulant::{
    asymptotic_equivalence_gap, circulant_first_row, circulant_from_symbol, circulant_matrix,
    eigen_comparison, eigen_comparison_trace, szego_check, szego_checks, CirculantSpectrum, EigenComparison,
    SzegoReport,
};
pub use frame::{
    estimate_threshold, frame_bound_trace, interlacing_check, reciprocal_integer,
    FrameBoundTrace, InterlacingReport,
};
pub use jacobi::{
    hermitian_eigenvalues, hermitian_eigenvalues_checked, jacobi_symmetric, real_embedding,
    symmetric_eigenvalues, SpectrumReport,
};
