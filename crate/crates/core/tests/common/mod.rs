//! Independent oracles shared by the integration tests. Nothing here calls the
//! library's integration or assembly paths.
#![allow(dead_code)]

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Gauss–Legendre nodes and weights on [-1, 1] (Newton on P_n).
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (mut p0, mut p1) = (1.0, x);
        for k in 2..=n {
            let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
            p0 = p1;
            p1 = p2;
        }
        let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

/// Composite 16-point Gauss–Legendre over `[lo, hi]`, with panels no longer
/// than `max_panel`. Integrand must be smooth inside each panel.
pub fn gl_integrate<F: Fn(f64) -> Complex64>(f: F, lo: f64, hi: f64, max_panel: f64) -> Complex64 {
    let (x, w) = gauss_legendre(16);
    let panels = ((hi - lo) / max_panel).ceil().max(1.0) as usize;
    let h = (hi - lo) / panels as f64;
    let mut total = Complex64::new(0.0, 0.0);
    for p in 0..panels {
        let a = lo + p as f64 * h;
        let mid = a + 0.5 * h;
        for (xi, wi) in x.iter().zip(&w) {
            total += f(mid + 0.5 * h * xi) * (0.5 * h * wi);
        }
    }
    total
}

/// Integrates over consecutive breakpoints so every panel sees a smooth integrand.
pub fn gl_piecewise<F: Fn(f64) -> Complex64>(f: F, knots: &[f64], omega: f64) -> Complex64 {
    let max_panel = (0.25_f64).min(4.0 / omega.abs().max(1e-300));
    knots
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| gl_integrate(&f, w[0], w[1], max_panel))
        .sum()
}

/// Truncated-power form of the centered B-spline of order `n`.
pub fn bspline_truncated_power(order: usize, x: f64) -> f64 {
    let half = order as f64 / 2.0;
    if x < -half || x >= half {
        return 0.0;
    }
    let deg = order as i32 - 1;
    let mut sum = 0.0;
    let mut binom = 1.0;
    for k in 0..=order {
        let s = x + half - k as f64;
        if s >= 0.0 {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sum += sign * binom * s.powi(deg);
        }
        binom = binom * (order - k) as f64 / (k + 1) as f64;
    }
    let fact: f64 = (1..=deg).map(|v| v as f64).product();
    sum / fact
}

/// `⟨g_{j,k}, g_{j',k'}⟩ = ∫ g(x-ka) g(x-k'a) e^{2πi b (j-j') x} dx` by quadrature.
pub fn gram_entry_quadrature(a: f64, b: f64, order: usize, j: i64, k: i64, jp: i64, kp: i64) -> Complex64 {
    let half = order as f64 / 2.0;
    let c1 = k as f64 * a;
    let c2 = kp as f64 * a;
    let lo = (c1 - half).max(c2 - half);
    let hi = (c1 + half).min(c2 + half);
    if hi <= lo {
        return Complex64::new(0.0, 0.0);
    }
    let mut knots = vec![lo, hi];
    for i in 0..=order {
        for c in [c1, c2] {
            let x = c - half + i as f64;
            if x > lo && x < hi {
                knots.push(x);
            }
        }
    }
    knots.sort_by(|a, b| a.total_cmp(b));
    let omega = 2.0 * PI * b * (j - jp) as f64;
    gl_piecewise(
        |x| {
            let v = bspline_truncated_power(order, x - c1) * bspline_truncated_power(order, x - c2);
            Complex64::from_polar(v, omega * x)
        },
        &knots,
        omega,
    )
}

/// Trapezoid rule on a uniform grid.
pub fn trapezoid(f: impl Fn(f64) -> f64, lo: f64, hi: f64, step: f64) -> f64 {
    let n = ((hi - lo) / step).round() as usize;
    let h = (hi - lo) / n as f64;
    let mut s = 0.5 * (f(lo) + f(hi));
    for i in 1..n {
        s += f(lo + i as f64 * h);
    }
    s * h
}

/// Determinant by Laplace cofactor expansion along the first row.
pub fn det_laplace(m: &[Vec<Complex64>]) -> Complex64 {
    let n = m.len();
    if n == 1 {
        return m[0][0];
    }
    let mut total = Complex64::new(0.0, 0.0);
    for col in 0..n {
        let minor: Vec<Vec<Complex64>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(c, _)| c != col)
                    .map(|(_, v)| *v)
                    .collect()
            })
            .collect();
        let sign = if col % 2 == 0 { 1.0 } else { -1.0 };
        total += m[0][col] * det_laplace(&minor) * sign;
    }
    total
}

/// Real roots of `λ ↦ det(M - λI)` for Hermitian `M`, found by scanning
/// `[lo, hi]` for sign changes and bisecting.
pub fn charpoly_roots(m: &[Vec<Complex64>], lo: f64, hi: f64, scan: usize) -> Vec<f64> {
    let n = m.len();
    let p = |lambda: f64| -> f64 {
        let shifted: Vec<Vec<Complex64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { m[i][j] - lambda } else { m[i][j] })
                    .collect()
            })
            .collect();
        det_laplace(&shifted).re
    };
    let mut roots = Vec::new();
    let step = (hi - lo) / scan as f64;
    let mut x0 = lo;
    let mut f0 = p(x0);
    for i in 1..=scan {
        let x1 = lo + i as f64 * step;
        let f1 = p(x1);
        if f0 == 0.0 {
            roots.push(x0);
        } else if f0.signum() != f1.signum() && f1 != 0.0 {
            let (mut a, mut b, mut fa) = (x0, x1, f0);
            for _ in 0..200 {
                let mid = 0.5 * (a + b);
                let fm = p(mid);
                if fm.signum() == fa.signum() {
                    a = mid;
                    fa = fm;
                } else {
                    b = mid;
                }
            }
            roots.push(0.5 * (a + b));
        }
        x0 = x1;
        f0 = f1;
    }
    roots
}

/// Random Hermitian matrix with entries in the unit box.
pub fn random_hermitian(n: usize, seed: u64) -> Vec<Vec<Complex64>> {
    let mut r = rng(seed);
    let mut m = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for i in 0..n {
        m[i][i] = Complex64::new(r.gen_range(-1.0..1.0), 0.0);
        for j in i + 1..n {
            let z = Complex64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0));
            m[i][j] = z;
            m[j][i] = z.conj();
        }
    }
    m
}

/// Singular values of `m`, descending, as the nonnegative eigenvalues of
/// `[[0, M], [M*, 0]]` (absolute accuracy, unlike square roots of `M M*`).
pub fn singular_values(m: &splinegram::ComplexMatrix) -> Vec<f64> {
    let n = m.rows();
    let mut aug = splinegram::ComplexMatrix::zeros(2 * n, 2 * n);
    aug.set_block(0, n, m);
    aug.set_block(n, 0, &m.adjoint());
    let ev = splinegram::spectra::hermitian_eigenvalues(&aug).unwrap().eigenvalues;
    ev[n..].iter().rev().copied().collect()
}

/// `D T D` with `D = diag(v)`, by explicit matrix products.
pub fn dtd(t: &splinegram::RealMatrix, v: &[Complex64]) -> splinegram::ComplexMatrix {
    let n = v.len();
    let d = splinegram::ComplexMatrix::from_fn(n, n, |i, j| if i == j { v[i] } else { Complex64::new(0.0, 0.0) });
    d.matmul(&t.to_complex()).matmul(&d)
}
