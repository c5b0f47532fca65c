//! Gram matrices of Gabor systems generated by centered B-splines.
//!
//! The crate builds the truncated Gram matrix `G_n` of `{g(x - ka) e^{2πi jbx}}`
//! for `g = s_N`, exposes its block-Toeplitz structure and the
//! Toeplitz-dot-Hankel factorization of each block, evaluates the Laurent
//! symbols of the Toeplitz factors in two closed forms, and computes the
//! spectral diagnostics built on them (interlacing, circulant approximation,
//! decay of symbol widths, frame-bound sequences).
//!
//! ```
//! use splinegram::{assemble_gram, GaborConfig};
//!
//! let config = GaborConfig::new(0.25, 1.5, 2, 5).unwrap();
//! let gram = assemble_gram(&config);
//! assert_eq!(gram.dim(), 25);
//! assert!(gram.entries.hermitian_deviation() < 1e-12);
//! ```

pub mod bspline;
pub mod error;
pub mod gram;
pub mod matrix;
pub mod poly;
pub mod spectra;
pub mod symbol;

pub use bspline::{build_bspline, build_bspline_closed_form, fourier_sinc, sinc, BSpline};
pub use error::{Error, Result};
pub use gram::{
    apply_lattice_shift, assemble_factor_matrices, assemble_gram, build_block,
    check_per_hermitian, extract_factors, hankel_factor, phase_vector, toeplitz_coeff,
    GaborConfig, GramMatrix, SystemParams, ToeplitzBlock,
};
pub use matrix::{ComplexMatrix, Matrix, RealMatrix};
pub use num_complex::Complex64;
pub use poly::{integrate_poly_cos, PiecewisePolynomial};
pub use spectra::SpectrumReport;
pub use symbol::{
    decay_report, spectral_width, symbol_extrema, DecayReport, LaurentSymbol, SymbolExtrema,
};

/// Version string embedded in every emitted file.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
