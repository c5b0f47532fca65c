//! Cyclic-by-row Jacobi eigensolver for dense real symmetric matrices, and the
//! Hermitian solver built on its real embedding
//! `[[Re M, -Im M], [Im M, Re M]]`, which carries every eigenvalue of `M` twice.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, RealMatrix};

pub const MAX_SWEEPS: usize = 60;
/// Stop once the off-diagonal Frobenius norm is below this fraction of `‖A‖_F`.
pub const OFF_DIAGONAL_TOL: f64 = 1e-13;
/// Relative input tolerance for `‖M - M*‖_max`.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Relative tolerance for matching the two copies of each embedded eigenvalue.
pub const PAIRING_TOL: f64 = 1e-9;
const RESIDUAL_SAMPLES: usize = 5;

/// Eigenvalues of a symmetric matrix, sorted ascending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub eigenvalues: Vec<f64>,
    pub matrix_dim: usize,
    /// `max ‖Mv - λv‖₂ / ‖M‖₂` over sampled eigenpairs, when vectors were computed.
    pub residual: Option<f64>,
}

impl SpectrumReport {
    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues[self.eigenvalues.len() - 1]
    }
}

/// Raw Jacobi output: unsorted eigenvalues and, optionally, eigenvectors as columns.
pub struct JacobiOutput {
    pub eigenvalues: Vec<f64>,
    pub vectors: Option<RealMatrix>,
    pub sweeps: usize,
}

fn off_norm(a: &RealMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for (j, v) in a.row(i).iter().enumerate() {
            if i != j {
                s += v * v;
            }
        }
    }
    s.sqrt()
}

/// Diagonalizes the real symmetric `a` by cyclic Jacobi rotations.
pub fn jacobi_symmetric(a: &RealMatrix, want_vectors: bool) -> Result<JacobiOutput> {
    assert!(a.is_square(), "Jacobi needs a square matrix");
    let n = a.rows();
    let mut a = a.clone();
    let mut v = want_vectors.then(|| RealMatrix::identity(n));
    let target = OFF_DIAGONAL_TOL * a.frobenius();

    let mut sweeps = 0;
    loop {
        let off = off_norm(&a);
        if off <= target || n < 2 {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                off_norm: off,
            });
        }
        sweeps += 1;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let app = a[(p, p)];
                let aqq = a[(q, q)];
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta.is_finite() {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                } else {
                    // |apq| negligible relative to the diagonal gap
                    0.5 / theta
                };
                if t == 0.0 {
                    a[(p, q)] = 0.0;
                    a[(q, p)] = 0.0;
                    continue;
                }
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for r in 0..n {
                    if r == p || r == q {
                        continue;
                    }
                    let arp = a[(r, p)];
                    let arq = a[(r, q)];
                    let new_p = c * arp - s * arq;
                    let new_q = s * arp + c * arq;
                    a[(r, p)] = new_p;
                    a[(p, r)] = new_p;
                    a[(r, q)] = new_q;
                    a[(q, r)] = new_q;
                }
                a[(p, p)] = app - t * apq;
                a[(q, q)] = aqq + t * apq;
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
                if let Some(v) = v.as_mut() {
                    for r in 0..n {
                        let vrp = v[(r, p)];
                        let vrq = v[(r, q)];
                        v[(r, p)] = c * vrp - s * vrq;
                        v[(r, q)] = s * vrp + c * vrq;
                    }
                }
            }
        }
    }
    Ok(JacobiOutput {
        eigenvalues: (0..n).map(|i| a[(i, i)]).collect(),
        vectors: v,
        sweeps,
    })
}

fn sorted(mut values: Vec<f64>) -> Vec<f64> {
    values.sort_by(|a, b| a.total_cmp(b));
    values
}

/// Sorted eigenvalues of a real symmetric matrix (no embedding).
pub fn symmetric_eigenvalues(a: &RealMatrix) -> Result<SpectrumReport> {
    let out = jacobi_symmetric(a, false)?;
    Ok(SpectrumReport {
        matrix_dim: a.rows(),
        eigenvalues: sorted(out.eigenvalues),
        residual: None,
    })
}

fn check_hermitian(m: &ComplexMatrix) -> Result<()> {
    assert!(m.is_square(), "Hermitian eigensolver needs a square matrix");
    let deviation = m.hermitian_deviation();
    let tolerance = HERMITIAN_TOL * m.max_abs();
    if deviation > tolerance {
        return Err(Error::NotHermitian {
            deviation,
            tolerance,
        });
    }
    Ok(())
}

/// `[[Re M, -Im M], [Im M, Re M]]`.
pub fn real_embedding(m: &ComplexMatrix) -> RealMatrix {
    let n = m.rows();
    RealMatrix::from_fn(2 * n, 2 * n, |i, j| {
        let z = m[(i % n, j % n)];
        match (i < n, j < n) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    })
}

/// Collapses the doubled spectrum of the embedding by pairing sorted neighbours.
fn collapse_pairs(doubled: &[f64]) -> Result<Vec<f64>> {
    doubled
        .chunks_exact(2)
        .map(|pair| {
            let (x, y) = (pair[0], pair[1]);
            if (x - y).abs() > PAIRING_TOL * (1.0 + y.abs()) {
                return Err(Error::PairingFailure(format!(
                    "neighbouring eigenvalues {x:e} and {y:e} differ"
                )));
            }
            Ok(0.5 * (x + y))
        })
        .collect()
}

/// All eigenvalues of a Hermitian matrix, sorted ascending.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<SpectrumReport> {
    check_hermitian(m)?;
    let out = jacobi_symmetric(&real_embedding(m), false)?;
    Ok(SpectrumReport {
        matrix_dim: m.rows(),
        eigenvalues: collapse_pairs(&sorted(out.eigenvalues))?,
        residual: None,
    })
}

/// As [`hermitian_eigenvalues`], additionally accumulating eigenvectors and
/// reporting the residual of five evenly spaced eigenpairs.
pub fn hermitian_eigenvalues_checked(m: &ComplexMatrix) -> Result<SpectrumReport> {
    check_hermitian(m)?;
    let n = m.rows();
    let out = jacobi_symmetric(&real_embedding(m), true)?;
    let vectors = out.vectors.expect("vectors requested");
    let mut order: Vec<usize> = (0..2 * n).collect();
    order.sort_by(|&i, &j| out.eigenvalues[i].total_cmp(&out.eigenvalues[j]));
    let doubled: Vec<f64> = order.iter().map(|&i| out.eigenvalues[i]).collect();
    let eigenvalues = collapse_pairs(&doubled)?;

    let norm = eigenvalues
        .iter()
        .fold(0.0_f64, |acc, v| acc.max(v.abs()))
        .max(f64::MIN_POSITIVE);
    let samples = RESIDUAL_SAMPLES.min(n);
    let mut residual: f64 = 0.0;
    for s in 0..samples {
        let idx = if samples > 1 { s * (n - 1) / (samples - 1) } else { 0 };
        let col = order[2 * idx];
        let lambda = out.eigenvalues[col];
        // column [x; y] of the embedding is the complex eigenvector x + iy
        let z: Vec<Complex64> = (0..n)
            .map(|r| Complex64::new(vectors[(r, col)], vectors[(r + n, col)]))
            .collect();
        let mz = m.matvec(&z);
        let num: f64 = mz
            .iter()
            .zip(&z)
            .map(|(a, b)| (a - b * lambda).norm_sqr())
            .sum::<f64>()
            .sqrt();
        let den: f64 = z.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        residual = residual.max(num / (den * norm));
    }
    Ok(SpectrumReport {
        matrix_dim: n,
        eigenvalues,
        residual: Some(residual),
    })
}
