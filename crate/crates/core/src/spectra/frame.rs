//! Interlacing between `G_n` and its principal block `G_n^[0]`, and the
//! frame-bound sequences `A_n = λ_min(G_n)`, `B_n = λ_max(G_n)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::jacobi::{hermitian_eigenvalues, symmetric_eigenvalues};
use crate::error::{invalid, Result};
use crate::gram::{assemble_gram, GaborConfig, SystemParams, ToeplitzBlock};
use crate::symbol::{symbol_extrema, LaurentSymbol, DEFAULT_GRID};

/// Largest `n` accepted for full `n² × n²` eigensolves.
pub const MAX_FULL_N: usize = 21;
pub const INTERLACING_SLACK: f64 = 1e-9;
pub const MONOTONE_SLACK: f64 = 1e-9;

fn check_full_n(n: usize) -> Result<()> {
    if n > MAX_FULL_N {
        return invalid(format!(
            "full Gram eigensolves are capped at n = {MAX_FULL_N}, got {n}"
        ));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterlacingReport {
    pub config: GaborConfig,
    /// All `n²` eigenvalues of `G_n`, ascending.
    pub gram_eigenvalues: Vec<f64>,
    /// All `n` eigenvalues of `G_n^[0]`, ascending.
    pub block_eigenvalues: Vec<f64>,
    /// `(lower, upper)` per `k`: `λ_k(G) ≤ λ_k(G^[0])` and `λ_k(G^[0]) ≤ λ_{k+n²-n}(G)`.
    pub inequalities: Vec<(bool, bool)>,
    pub symbol_min: f64,
    pub symbol_max: f64,
    /// `λ_1(G_n) ≤ min t^[0]` (with slack).
    pub lower_estimate: bool,
    /// `max t^[0] ≤ λ_{n²}(G_n)` (with slack).
    pub upper_estimate: bool,
}

impl InterlacingReport {
    pub fn all_interlace(&self) -> bool {
        self.inequalities.iter().all(|&(l, u)| l && u)
    }

    pub fn estimates_hold(&self) -> bool {
        self.lower_estimate && self.upper_estimate
    }

    pub fn gram_min(&self) -> f64 {
        self.gram_eigenvalues[0]
    }

    pub fn gram_max(&self) -> f64 {
        self.gram_eigenvalues[self.gram_eigenvalues.len() - 1]
    }
}

/// Eigensolves `G_n` and `G_n^[0]` and checks Cauchy interlacing together with
/// the symbol-based estimates on the extreme eigenvalues.
pub fn interlacing_check(config: &GaborConfig) -> Result<InterlacingReport> {
    check_full_n(config.n)?;
    let n = config.n;
    let gram = assemble_gram(config);
    let gram_eigenvalues = hermitian_eigenvalues(&gram.entries)?.eigenvalues;
    // G^[0] = T^[0]: real symmetric, no phase
    let block = ToeplitzBlock::new(&config.params, 0);
    let block_eigenvalues = symmetric_eigenvalues(&block.matrix(n))?.eigenvalues;
    let inequalities = (0..n)
        .map(|k| {
            let mid = block_eigenvalues[k];
            (
                gram_eigenvalues[k] <= mid + INTERLACING_SLACK,
                mid <= gram_eigenvalues[k + n * n - n] + INTERLACING_SLACK,
            )
        })
        .collect();
    let ext = symbol_extrema(&LaurentSymbol::from_block(config.params, block), DEFAULT_GRID)?;
    let lower_estimate = gram_eigenvalues[0] <= ext.min + INTERLACING_SLACK;
    let upper_estimate = ext.max <= gram_eigenvalues[n * n - 1] + INTERLACING_SLACK;
    Ok(InterlacingReport {
        config: *config,
        gram_eigenvalues,
        block_eigenvalues,
        inequalities,
        symbol_min: ext.min,
        symbol_max: ext.max,
        lower_estimate,
        upper_estimate,
    })
}

/// Smallest `n` in `ns` from which on both symbol estimates hold for every
/// larger `n` in the list, or `None`.
pub fn estimate_threshold(params: &SystemParams, ns: &[usize]) -> Result<Option<usize>> {
    let reports: Vec<InterlacingReport> = ns
        .par_iter()
        .map(|&n| interlacing_check(&params.with_n(n)?))
        .collect::<Result<_>>()?;
    let mut threshold = None;
    for r in reports.iter().rev() {
        if r.estimates_hold() {
            threshold = Some(r.config.n);
        } else {
            break;
        }
    }
    Ok(threshold)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameBoundTrace {
    pub params: SystemParams,
    pub ns: Vec<usize>,
    /// `A_n = λ_min(G_n)`.
    pub lower: Vec<f64>,
    /// `B_n = λ_max(G_n)`.
    pub upper: Vec<f64>,
    pub lower_nonincreasing: bool,
    pub upper_nondecreasing: bool,
    /// Every `A_n` is positive, i.e. each finite section is numerically invertible.
    pub all_invertible: bool,
    /// `p` when `a = 1/p` for an integer `p ≥ 2`.
    pub rational_p: Option<u32>,
    /// For `a = 1/p`: whether `A_n` strictly decreased from the first to the last `n`.
    pub lower_decays: Option<bool>,
}

/// `p` with `a = 1/p`, `p ≥ 2`, if any.
pub fn reciprocal_integer(a: f64) -> Option<u32> {
    let p = (1.0 / a).round();
    if p >= 2.0 && ((1.0 / a) - p).abs() < 1e-12 {
        Some(p as u32)
    } else {
        None
    }
}

pub fn frame_bound_trace(params: &SystemParams, ns: &[usize]) -> Result<FrameBoundTrace> {
    if ns.is_empty() {
        return invalid("n-list must not be empty");
    }
    if ns.windows(2).any(|w| w[1] <= w[0]) {
        return invalid("n-list must be strictly ascending");
    }
    for &n in ns {
        check_full_n(n)?;
    }
    let configs: Vec<GaborConfig> = ns.iter().map(|&n| params.with_n(n)).collect::<Result<_>>()?;
    let bounds: Vec<(f64, f64)> = configs
        .par_iter()
        .map(|c| {
            let spec = hermitian_eigenvalues(&assemble_gram(c).entries)?;
            Ok((spec.min(), spec.max()))
        })
        .collect::<Result<_>>()?;
    let lower: Vec<f64> = bounds.iter().map(|b| b.0).collect();
    let upper: Vec<f64> = bounds.iter().map(|b| b.1).collect();
    let lower_nonincreasing = lower.windows(2).all(|w| w[1] <= w[0] + MONOTONE_SLACK);
    let upper_nondecreasing = upper.windows(2).all(|w| w[1] + MONOTONE_SLACK >= w[0]);
    let all_invertible = lower.iter().all(|&v| v > 0.0);
    let rational_p = reciprocal_integer(params.a);
    let lower_decays = rational_p.map(|_| lower[lower.len() - 1] < lower[0]);
    Ok(FrameBoundTrace {
        params: *params,
        ns: ns.to_vec(),
        lower,
        upper,
        lower_nonincreasing,
        upper_nondecreasing,
        all_invertible,
        rational_p,
        lower_decays,
    })
}
