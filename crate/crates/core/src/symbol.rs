//! Laurent symbols `t^[ℓ](x) = Σ_{|k| ≤ m} t_k^[ℓ] cos(2πkx)` of the Toeplitz blocks.
//!
//! Two independent evaluations are provided: the finite cosine sum over the
//! exact coefficients, and the periodized product of B-spline Fourier
//! transforms
//!
//! ```text
//! t^[ℓ](x) = (1/a) Σ_r sinc^N((r - x + abℓ/2)/a) · sinc^N((r - x - abℓ/2)/a)
//! ```
//!
//! The extrema of the symbol give the spectrum `[min t, max t]` of the
//! bi-infinite Toeplitz operator.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::bspline::fourier_sinc;
use crate::error::{invalid, Result};
use crate::gram::{SystemParams, ToeplitzBlock};

/// Samples used by [`symbol_extrema`] when no grid is given.
pub const DEFAULT_GRID: usize = 4096;

/// Minimum grid accepted by [`symbol_extrema`].
pub const MIN_GRID: usize = 64;

const BISECTION_WIDTH: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LaurentSymbol {
    pub params: SystemParams,
    pub ell: i64,
    pub block: ToeplitzBlock,
}

impl LaurentSymbol {
    pub fn new(params: SystemParams, ell: i64) -> Self {
        Self {
            params,
            ell,
            block: ToeplitzBlock::new(&params, ell),
        }
    }

    pub fn from_block(params: SystemParams, block: ToeplitzBlock) -> Self {
        Self {
            params,
            ell: block.ell,
            block,
        }
    }

    pub fn bandwidth(&self) -> usize {
        self.block.bandwidth
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.block.coeffs
    }

    /// Cosine-sum form.
    pub fn eval_coeff(&self, x: f64) -> f64 {
        let c = &self.block.coeffs;
        let Some((&t0, rest)) = c.split_first() else {
            return 0.0;
        };
        let tail: f64 = rest
            .iter()
            .enumerate()
            .map(|(i, &tk)| tk * (2.0 * PI * (i as f64 + 1.0) * x).cos())
            .sum();
        t0 + 2.0 * tail
    }

    /// `t'(x) = -Σ_{|k|≤m} 2πk t_k sin(2πkx)`.
    pub fn derivative(&self, x: f64) -> f64 {
        -2.0 * self
            .block
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &tk)| 2.0 * PI * k as f64 * tk * (2.0 * PI * k as f64 * x).sin())
            .sum::<f64>()
    }

    /// Truncation radius of the sinc sum guaranteeing a discarded tail below `tol`.
    pub fn sinc_radius(&self, tol: f64) -> usize {
        let p = &self.params;
        let n = p.order as f64;
        let shift = (p.ab() * self.ell.unsigned_abs() as f64 / 2.0).ceil();
        let tail = (p.a * (2.0 / tol).powf(1.0 / (2.0 * n - 1.0))).ceil();
        ((shift + tail) as usize).max(8)
    }

    /// Sinc-sum form, truncated so the neglected tail is below `tol`.
    ///
    /// The identity is stated for `N ≥ 2`; for `N = 1` the sum still converges
    /// and is evaluated, see [`Self::sinc_form_is_proven`].
    pub fn eval_sinc(&self, x: f64, tol: f64) -> Result<f64> {
        if !(tol > 0.0 && tol.is_finite()) {
            return invalid(format!("tolerance must be positive, got {tol}"));
        }
        let p = &self.params;
        let half = p.ab() * self.ell as f64 / 2.0;
        let radius = self.sinc_radius(tol) as i64;
        let center = x.round() as i64;
        let mut sum = 0.0;
        for r in center - radius..=center + radius {
            let d = r as f64 - x;
            sum += fourier_sinc(p.order, (d + half) / p.a) * fourier_sinc(p.order, (d - half) / p.a);
        }
        Ok(sum / p.a)
    }

    /// Whether the window order is within the stated hypothesis of the sinc identity.
    pub fn sinc_form_is_proven(&self) -> bool {
        self.params.order >= 2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymbolExtrema {
    pub min: f64,
    pub argmin: f64,
    pub max: f64,
    pub argmax: f64,
}

impl SymbolExtrema {
    pub fn width(&self) -> f64 {
        self.max - self.min
    }
}

/// Global extrema of the symbol on one period.
///
/// Samples `[-1/2, 1/2]` at `grid` points, refines every sign change of the
/// derivative by bisection to width 1e-12, and takes the extremes over the
/// refined critical points and the samples themselves.
pub fn symbol_extrema(sym: &LaurentSymbol, grid: usize) -> Result<SymbolExtrema> {
    if grid < MIN_GRID {
        return invalid(format!("grid must be at least {MIN_GRID}, got {grid}"));
    }
    let xs: Vec<f64> = (0..grid)
        .map(|i| -0.5 + i as f64 / (grid - 1) as f64)
        .collect();
    let ds: Vec<f64> = xs.iter().map(|&x| sym.derivative(x)).collect();

    let mut best = SymbolExtrema {
        min: f64::INFINITY,
        argmin: 0.0,
        max: f64::NEG_INFINITY,
        argmax: 0.0,
    };
    let consider = |x: f64, best: &mut SymbolExtrema| {
        let v = sym.eval_coeff(x);
        if v < best.min {
            best.min = v;
            best.argmin = x;
        }
        if v > best.max {
            best.max = v;
            best.argmax = x;
        }
    };

    for &x in &xs {
        consider(x, &mut best);
    }
    for i in 0..grid - 1 {
        let (d0, d1) = (ds[i], ds[i + 1]);
        if d0 == 0.0 || d1 == 0.0 || d0.signum() == d1.signum() {
            continue;
        }
        let (mut lo, mut hi) = (xs[i], xs[i + 1]);
        let lo_sign = d0.signum();
        while hi - lo > BISECTION_WIDTH {
            let mid = 0.5 * (lo + hi);
            let dm = sym.derivative(mid);
            if dm == 0.0 {
                lo = mid;
                hi = mid;
                break;
            }
            if dm.signum() == lo_sign {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        consider(0.5 * (lo + hi), &mut best);
    }
    Ok(best)
}

/// `max t^[ℓ] - min t^[ℓ]` on the default grid.
pub fn spectral_width(params: &SystemParams, ell: i64) -> f64 {
    let sym = LaurentSymbol::new(*params, ell);
    symbol_extrema(&sym, DEFAULT_GRID)
        .expect("default grid is valid")
        .width()
}

/// Least-squares slope and intercept of `log y` against `log x`.
pub fn loglog_fit(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Spectral widths for each `ℓ` and their fitted power law.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayReport {
    pub params: SystemParams,
    pub ells: Vec<i64>,
    pub widths: Vec<f64>,
    pub slope: f64,
    /// `C` in the fitted `width ≈ C ℓ^slope`.
    pub constant: f64,
}

pub fn decay_report(params: &SystemParams, ells: &[i64]) -> DecayReport {
    use rayon::prelude::*;
    let widths: Vec<f64> = ells
        .par_iter()
        .map(|&ell| spectral_width(params, ell))
        .collect();
    let xs: Vec<f64> = ells.iter().map(|&l| l.unsigned_abs() as f64).collect();
    let (slope, intercept) = loglog_fit(&xs, &widths);
    DecayReport {
        params: *params,
        ells: ells.to_vec(),
        widths,
        slope,
        constant: intercept.exp(),
    }
}
