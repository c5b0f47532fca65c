//! Circulant approximants of banded Toeplitz blocks and the statistics that
//! compare the two spectra as `n` grows.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use super::jacobi::symmetric_eigenvalues;
use crate::error::{invalid, Result};
use crate::gram::ToeplitzBlock;
use crate::symbol::LaurentSymbol;

/// Panels of the composite Simpson rule for `∫_0^1 F(t(x)) dx`.
pub const SZEGO_PANELS: usize = 1 << 14;

fn check_size(block: &ToeplitzBlock, n: usize) -> Result<()> {
    if n <= 2 * block.bandwidth {
        return invalid(format!(
            "n = {n} must exceed twice the bandwidth {}",
            block.bandwidth
        ));
    }
    Ok(())
}

/// First row of the circulant: `c_k = t_{-k}` for `k ≤ m`, `c_k = t_{n-k}` for
/// `k ≥ n - m`, zero otherwise.
pub fn circulant_first_row(block: &ToeplitzBlock, n: usize) -> Result<Vec<f64>> {
    check_size(block, n)?;
    let m = block.bandwidth;
    Ok((0..n)
        .map(|k| {
            if k <= m {
                block.coeff(-(k as i64))
            } else if k >= n - m {
                block.coeff((n - k) as i64)
            } else {
                0.0
            }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CirculantSpectrum {
    pub n: usize,
    pub first_row: Vec<f64>,
    /// `t(p/n)` for `p = 0..n`, in `p` order (not sorted).
    pub eigenvalues: Vec<f64>,
    /// `max_p ‖C f_p - t(p/n) f_p‖_∞` over all Fourier vectors `f_p`.
    pub check_residual: f64,
}

impl CirculantSpectrum {
    pub fn sorted_eigenvalues(&self) -> Vec<f64> {
        let mut v = self.eigenvalues.clone();
        v.sort_by(|a, b| a.total_cmp(b));
        v
    }
}

/// Circulant `C_{i,j} = c_{(j-i) mod n}` built from the symbol, with its
/// spectrum given by the uniform symbol samples.
pub fn circulant_from_symbol(sym: &LaurentSymbol, n: usize) -> Result<CirculantSpectrum> {
    let first_row = circulant_first_row(&sym.block, n)?;
    let eigenvalues: Vec<f64> = (0..n).map(|p| sym.eval_coeff(p as f64 / n as f64)).collect();

    let support: Vec<(usize, f64)> = first_row
        .iter()
        .copied()
        .enumerate()
        .filter(|&(_, c)| c != 0.0)
        .collect();
    let roots: Vec<Complex64> = (0..n)
        .map(|q| Complex64::from_polar(1.0, 2.0 * PI * q as f64 / n as f64))
        .collect();
    // f_p[j] = e^{2πi jp/n} = roots[jp mod n]
    let check_residual = (0..n)
        .into_par_iter()
        .map(|p| {
            let lambda = eigenvalues[p];
            let mut worst: f64 = 0.0;
            for i in 0..n {
                let acc: Complex64 = support
                    .iter()
                    .map(|&(d, c)| roots[((i + d) % n) * p % n] * c)
                    .sum();
                worst = worst.max((acc - roots[i * p % n] * lambda).norm());
            }
            worst
        })
        .reduce(|| 0.0, f64::max);

    Ok(CirculantSpectrum {
        n,
        first_row,
        eigenvalues,
        check_residual,
    })
}

/// Dense circulant matrix, for oracles and small diagnostics.
pub fn circulant_matrix(first_row: &[f64]) -> crate::matrix::RealMatrix {
    let n = first_row.len();
    crate::matrix::RealMatrix::from_fn(n, n, |i, j| first_row[(j + n - i) % n])
}

/// `((1/n) Σ_{i,j} |T_ij - C_ij|²)^{1/2}`.
pub fn asymptotic_equivalence_gap(block: &ToeplitzBlock, n: usize) -> Result<f64> {
    let row = circulant_first_row(block, n)?;
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            let t = block.coeff(i as i64 - j as i64);
            let c = row[(j + n - i) % n];
            sum += (t - c) * (t - c);
        }
    }
    Ok((sum / n as f64).sqrt())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenComparison {
    pub n: usize,
    /// `(1/n) Σ (λ_m - ψ_m)` over sorted Toeplitz (`λ`) and circulant (`ψ`) eigenvalues.
    pub first_moment: f64,
    /// `(1/n) Σ (λ_m² - ψ_m²)`.
    pub second_moment: f64,
    /// `t_0 - mean_p t(p/n)`, the trace form of the first moment.
    pub trace_identity: f64,
    pub toeplitz_eigenvalues: Vec<f64>,
    pub circulant_eigenvalues: Vec<f64>,
}

impl EigenComparison {
    /// Sorted eigenvalue differences `λ_m - ψ_m`.
    pub fn differences(&self) -> Vec<f64> {
        self.toeplitz_eigenvalues
            .iter()
            .zip(&self.circulant_eigenvalues)
            .map(|(a, b)| a - b)
            .collect()
    }
}

pub fn eigen_comparison(sym: &LaurentSymbol, n: usize) -> Result<EigenComparison> {
    let circ = circulant_from_symbol(sym, n)?;
    let psi = circ.sorted_eigenvalues();
    let lambda = symmetric_eigenvalues(&sym.block.matrix(n))?.eigenvalues;
    let nf = n as f64;
    let first_moment = lambda.iter().zip(&psi).map(|(l, p)| l - p).sum::<f64>() / nf;
    let second_moment = lambda
        .iter()
        .zip(&psi)
        .map(|(l, p)| l * l - p * p)
        .sum::<f64>()
        / nf;
    let trace_identity = sym.block.coeff(0) - circ.eigenvalues.iter().sum::<f64>() / nf;
    Ok(EigenComparison {
        n,
        first_moment,
        second_moment,
        trace_identity,
        toeplitz_eigenvalues: lambda,
        circulant_eigenvalues: psi,
    })
}

/// [`eigen_comparison`] for every `n` in `ns`, solved in parallel.
pub fn eigen_comparison_trace(sym: &LaurentSymbol, ns: &[usize]) -> Result<Vec<EigenComparison>> {
    ns.par_iter().map(|&n| eigen_comparison(sym, n)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SzegoReport {
    /// `(1/n) Σ F(λ_m(T_n))`.
    pub lhs: f64,
    /// `∫_0^1 F(t(x)) dx`.
    pub rhs: f64,
    pub gap: f64,
}

/// Simpson rule on `[0, 1]` from equally spaced samples (odd count), with
/// compensated summation.
fn simpson_samples(ys: &[f64]) -> f64 {
    let panels = ys.len() - 1;
    let (mut sum, mut comp) = (0.0_f64, 0.0_f64);
    for (i, &v) in ys.iter().enumerate() {
        let w = if i == 0 || i == panels {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        let y = w * v - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    sum / (3.0 * panels as f64)
}

/// Both sides of the Szegő limit for `F` at size `n`.
pub fn szego_check(sym: &LaurentSymbol, n: usize, f: impl Fn(f64) -> f64) -> Result<SzegoReport> {
    Ok(szego_checks(sym, n, &[&f])?[0])
}

/// [`szego_check`] for several test functions sharing one eigensolve.
pub fn szego_checks(
    sym: &LaurentSymbol,
    n: usize,
    fs: &[&dyn Fn(f64) -> f64],
) -> Result<Vec<SzegoReport>> {
    if n == 0 {
        return invalid("n must be positive");
    }
    let lambda = symmetric_eigenvalues(&sym.block.matrix(n))?.eigenvalues;
    let samples: Vec<f64> = (0..=SZEGO_PANELS)
        .map(|i| sym.eval_coeff(i as f64 / SZEGO_PANELS as f64))
        .collect();
    Ok(fs
        .iter()
        .map(|f| {
            let lhs = lambda.iter().map(|&l| f(l)).sum::<f64>() / n as f64;
            let values: Vec<f64> = samples.iter().map(|&t| f(t)).collect();
            let rhs = simpson_samples(&values);
            SzegoReport {
                lhs,
                rhs,
                gap: (lhs - rhs).abs(),
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gram::SystemParams;

    fn constant_symbol(c: f64) -> LaurentSymbol {
        let params = SystemParams::new(0.25, 1.5, 2).unwrap();
        LaurentSymbol::from_block(params, ToeplitzBlock::from_coeffs(0, vec![c]))
    }

    #[test]
    fn rejects_small_n() {
        let sym = LaurentSymbol::new(SystemParams::new(0.25, 1.5, 2).unwrap(), 0);
        assert!(circulant_from_symbol(&sym, 16).is_err());
        assert!(circulant_from_symbol(&sym, 17).is_ok());
        assert!(asymptotic_equivalence_gap(&sym.block, 10).is_err());
    }

    #[test]
    fn constant_symbol_spectrum() {
        let sym = constant_symbol(2.5);
        let c = circulant_from_symbol(&sym, 9).unwrap();
        assert!(c.eigenvalues.iter().all(|&v| v == 2.5));
        assert!(c.check_residual < 1e-14);
        assert_eq!(asymptotic_equivalence_gap(&sym.block, 9).unwrap(), 0.0);
        let cmp = eigen_comparison(&sym, 9).unwrap();
        assert!(cmp.differences().iter().all(|&d| d == 0.0));
        let sz = szego_check(&sym, 9, |x| x.exp()).unwrap();
        assert!(sz.gap < 1e-13 * 2.5_f64.exp());
    }

    #[test]
    fn wrapping_rule() {
        let block = ToeplitzBlock::from_coeffs(0, vec![4.0, 2.0, 1.0]);
        let row = circulant_first_row(&block, 7).unwrap();
        assert_eq!(row, vec![4.0, 2.0, 1.0, 0.0, 0.0, 1.0, 2.0]);
        let c = circulant_matrix(&row);
        assert_eq!(c[(3, 2)], 2.0);
        assert_eq!(c[(0, 6)], 2.0);
        assert_eq!(c[(6, 0)], 2.0);
    }

    #[test]
    fn simpson_integrates_cubic() {
        let ys: Vec<f64> = (0..=8).map(|i| (i as f64 / 8.0).powi(3)).collect();
        let v = simpson_samples(&ys);
        assert!((v - 0.25).abs() < 1e-15);
    }
}
