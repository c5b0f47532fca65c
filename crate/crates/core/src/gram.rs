//! Gram matrices of the truncated Gabor system `{g(x - ka) e^{2πi jb x}}`, `j, k ∈ I_n`,
//! with `g = s_N`.
//!
//! Rows and columns are ordered lexicographically by `(j, k)`, `j` major, with
//! both indices running over the symmetric set `I_n = {-(n-1)/2, …, (n-1)/2}`.
//! Block `(j, j')` depends only on `ℓ = j - j'` and factors as
//! `G^[ℓ] = T^[ℓ] ∘ (v vᵀ)` with a real symmetric banded Toeplitz `T^[ℓ]`
//! and the unimodular vector `v_k = e^{πi abℓk}`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::bspline::{build_bspline, BSpline, MAX_ORDER};
use crate::error::{invalid, Result};
use crate::matrix::{ComplexMatrix, RealMatrix};

/// Lattice steps and window order; everything that does not depend on the truncation size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    pub a: f64,
    pub b: f64,
    pub order: usize,
}

impl SystemParams {
    pub fn new(a: f64, b: f64, order: usize) -> Result<Self> {
        if !(a.is_finite() && a > 0.0) {
            return invalid(format!("time step a must be positive, got {a}"));
        }
        if !(b.is_finite() && b > 0.0) {
            return invalid(format!("frequency step b must be positive, got {b}"));
        }
        if a * b >= 1.0 {
            return invalid(format!("lattice density requires ab < 1, got ab = {}", a * b));
        }
        if order == 0 || order > MAX_ORDER {
            return invalid(format!("order must be in 1..={MAX_ORDER}, got {order}"));
        }
        Ok(Self { a, b, order })
    }

    /// `floor(N / a)`: the largest `|j|` with a possibly nonzero `t_j`.
    pub fn bandwidth(&self) -> usize {
        (self.order as f64 / self.a).floor() as usize
    }

    pub fn ab(&self) -> f64 {
        self.a * self.b
    }

    pub fn with_n(self, n: usize) -> Result<GaborConfig> {
        GaborConfig::from_params(self, n)
    }
}

/// [`SystemParams`] plus the odd truncation size `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaborConfig {
    pub params: SystemParams,
    pub n: usize,
}

impl GaborConfig {
    pub fn new(a: f64, b: f64, order: usize, n: usize) -> Result<Self> {
        Self::from_params(SystemParams::new(a, b, order)?, n)
    }

    pub fn from_params(params: SystemParams, n: usize) -> Result<Self> {
        if n < 3 || n % 2 == 0 {
            return invalid(format!("truncation size n must be odd and >= 3, got {n}"));
        }
        Ok(Self { params, n })
    }

    pub fn a(&self) -> f64 {
        self.params.a
    }

    pub fn b(&self) -> f64 {
        self.params.b
    }

    pub fn order(&self) -> usize {
        self.params.order
    }

    pub fn bandwidth(&self) -> usize {
        self.params.bandwidth()
    }

    pub fn half(&self) -> i64 {
        (self.n as i64 - 1) / 2
    }

    /// `I_n` in ascending order.
    pub fn indices(&self) -> impl Iterator<Item = i64> + Clone {
        let h = self.half();
        -h..=h
    }

    /// Whether `n > N/a + 1`, so every band lies strictly inside each block.
    pub fn is_strictly_banded(&self) -> bool {
        self.n as f64 > self.params.order as f64 / self.params.a + 1.0
    }

    /// Errors unless [`Self::is_strictly_banded`] holds.
    pub fn require_strictly_banded(&self) -> Result<()> {
        if !self.is_strictly_banded() {
            return invalid(format!(
                "n = {} does not exceed N/a + 1 = {}",
                self.n,
                self.params.order as f64 / self.params.a + 1.0
            ));
        }
        Ok(())
    }

    /// Row/column of atom `(j, k)` in the Gram matrix.
    pub fn flat_index(&self, j: i64, k: i64) -> usize {
        let h = self.half();
        ((j + h) as usize) * self.n + (k + h) as usize
    }
}

/// Toeplitz coefficients `t_0 … t_m` of one modulation difference `ℓ`;
/// `t_{-j} = t_j` and `t_j = 0` for `|j| > m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToeplitzBlock {
    pub ell: i64,
    pub coeffs: Vec<f64>,
    pub bandwidth: usize,
}

impl ToeplitzBlock {
    pub fn new(params: &SystemParams, ell: i64) -> Self {
        let window = build_bspline(params.order).expect("order validated by SystemParams");
        Self::with_window(params, &window, ell)
    }

    pub fn with_window(params: &SystemParams, window: &BSpline, ell: i64) -> Self {
        let m = params.bandwidth();
        let coeffs = (0..=m as i64)
            .map(|j| coefficient_integral(params, window, ell, j))
            .collect();
        Self {
            ell,
            coeffs,
            bandwidth: m,
        }
    }

    /// A block from explicit coefficients, used for degenerate and synthetic symbols.
    pub fn from_coeffs(ell: i64, coeffs: Vec<f64>) -> Self {
        let bandwidth = coeffs.len().saturating_sub(1);
        Self {
            ell,
            coeffs,
            bandwidth,
        }
    }

    pub fn coeff(&self, j: i64) -> f64 {
        let j = j.unsigned_abs() as usize;
        self.coeffs.get(j).copied().unwrap_or(0.0)
    }

    /// The `n × n` symmetric Toeplitz matrix `(t_{k-k'})`.
    pub fn matrix(&self, n: usize) -> RealMatrix {
        RealMatrix::from_fn(n, n, |i, j| self.coeff(i as i64 - j as i64))
    }
}

/// `t_j^[ℓ] = ∫ g(x - aj/2) g(x + aj/2) cos(2πbℓx) dx`, exact.
fn coefficient_integral(params: &SystemParams, window: &BSpline, ell: i64, j: i64) -> f64 {
    let half_shift = params.a * j as f64 / 2.0;
    let product = window
        .poly()
        .shift(half_shift)
        .multiply(&window.poly().shift(-half_shift));
    product.integrate_cos(2.0 * PI * params.b * ell as f64)
}

/// `t_j^[ℓ]`, zero beyond the bandwidth.
pub fn toeplitz_coeff(params: &SystemParams, ell: i64, j: i64) -> f64 {
    if j.unsigned_abs() as usize > params.bandwidth() {
        return 0.0;
    }
    let window = build_bspline(params.order).expect("order validated by SystemParams");
    coefficient_integral(params, &window, ell, j)
}

/// The unimodular vector `v_k = e^{πi abℓk}`, `k ∈ I_n`.
pub fn phase_vector(config: &GaborConfig, ell: i64) -> Vec<Complex64> {
    let ab = config.params.ab();
    config
        .indices()
        .map(|k| Complex64::from_polar(1.0, PI * ab * (ell * k) as f64))
        .collect()
}

fn check_ell(config: &GaborConfig, ell: i64) -> Result<()> {
    if ell.unsigned_abs() as usize >= config.n {
        return invalid(format!(
            "modulation difference |{ell}| must be below n = {}",
            config.n
        ));
    }
    Ok(())
}

fn synthesize_block(n: usize, t: &ToeplitzBlock, v: &[Complex64]) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |i, j| {
        let c = t.coeff(i as i64 - j as i64);
        if c == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            v[i] * v[j] * c
        }
    })
}

/// `G_n^[ℓ]`, entries `e^{πi abℓ(k+k')} t_{k-k'}`.
pub fn build_block(config: &GaborConfig, ell: i64) -> Result<ComplexMatrix> {
    check_ell(config, ell)?;
    let t = ToeplitzBlock::new(&config.params, ell);
    Ok(synthesize_block(config.n, &t, &phase_vector(config, ell)))
}

/// The Toeplitz factor and the phase vector of block `ℓ`.
pub fn extract_factors(config: &GaborConfig, ell: i64) -> Result<(ToeplitzBlock, Vec<Complex64>)> {
    check_ell(config, ell)?;
    Ok((
        ToeplitzBlock::new(&config.params, ell),
        phase_vector(config, ell),
    ))
}

/// Rank-one Hankel matrix `v vᵀ`.
pub fn hankel_factor(v: &[Complex64]) -> ComplexMatrix {
    ComplexMatrix::from_fn(v.len(), v.len(), |i, j| v[i] * v[j])
}

/// Toeplitz coefficients for every `ℓ` in `0..n`; `t^[-ℓ] = t^[ℓ]` since the
/// window is even.
pub fn toeplitz_family(config: &GaborConfig) -> Vec<ToeplitzBlock> {
    let window = build_bspline(config.order()).expect("order validated by SystemParams");
    (0..config.n as i64)
        .into_par_iter()
        .map(|ell| ToeplitzBlock::with_window(&config.params, &window, ell))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GramMatrix {
    pub config: GaborConfig,
    pub entries: ComplexMatrix,
}

impl GramMatrix {
    pub fn dim(&self) -> usize {
        self.entries.rows()
    }

    /// Block `(j, j')` for `j, j' ∈ I_n`.
    pub fn block(&self, j: i64, jp: i64) -> ComplexMatrix {
        let n = self.config.n;
        let h = self.config.half();
        self.entries
            .block(((j + h) as usize) * n, ((jp + h) as usize) * n, n, n)
    }

    /// `max |B(j,j') - B(j+1,j'+1)|` over all admissible block pairs.
    pub fn block_toeplitz_deviation(&self) -> f64 {
        let n = self.config.n;
        let mut dev: f64 = 0.0;
        for bj in 0..n - 1 {
            for bjp in 0..n - 1 {
                for k in 0..n {
                    for kp in 0..n {
                        let x = self.entries[(bj * n + k, bjp * n + kp)];
                        let y = self.entries[((bj + 1) * n + k, (bjp + 1) * n + kp)];
                        dev = dev.max((x - y).norm());
                    }
                }
            }
        }
        dev
    }

    /// `max |conj(G_{(j,k),(j',k')}) - G_{(-j',-k'),(-j,-k)}|`.
    pub fn per_hermitian_deviation(&self) -> f64 {
        let c = &self.config;
        let mut dev: f64 = 0.0;
        for j in c.indices() {
            for k in c.indices() {
                let r = c.flat_index(j, k);
                for jp in c.indices() {
                    for kp in c.indices() {
                        let x = self.entries[(r, c.flat_index(jp, kp))].conj();
                        let y = self.entries[(c.flat_index(-jp, -kp), c.flat_index(-j, -k))];
                        dev = dev.max((x - y).norm());
                    }
                }
            }
        }
        dev
    }
}

/// `n² × n²` Gram matrix whose `(j, j')` block is `G_n^[j-j']`.
pub fn assemble_gram(config: &GaborConfig) -> GramMatrix {
    let n = config.n;
    let family = toeplitz_family(config);
    // blocks for ℓ = -(n-1) ..= n-1, index ℓ + n - 1
    let blocks: Vec<ComplexMatrix> = (-(n as i64 - 1)..=(n as i64 - 1))
        .into_par_iter()
        .map(|ell| {
            let t = &family[ell.unsigned_abs() as usize];
            synthesize_block(n, t, &phase_vector(config, ell))
        })
        .collect();
    let mut entries = ComplexMatrix::zeros(n * n, n * n);
    for bj in 0..n {
        for bjp in 0..n {
            let ell = bj as i64 - bjp as i64;
            entries.set_block(bj * n, bjp * n, &blocks[(ell + n as i64 - 1) as usize]);
        }
    }
    GramMatrix {
        config: *config,
        entries,
    }
}

/// The two factors laid out like the Gram matrix: block `(j, j')` of the first
/// is `T^[j-j']`, of the second `H^[j-j'] = v vᵀ`.
pub fn assemble_factor_matrices(config: &GaborConfig) -> (RealMatrix, ComplexMatrix) {
    let n = config.n;
    let family = toeplitz_family(config);
    let mut t_all = RealMatrix::zeros(n * n, n * n);
    let mut h_all = ComplexMatrix::zeros(n * n, n * n);
    for bj in 0..n {
        for bjp in 0..n {
            let ell = bj as i64 - bjp as i64;
            t_all.set_block(bj * n, bjp * n, &family[ell.unsigned_abs() as usize].matrix(n));
            h_all.set_block(bj * n, bjp * n, &hankel_factor(&phase_vector(config, ell)));
        }
    }
    (t_all, h_all)
}

/// Gram matrix of the lattice translated by `(as, bt)`: block `(j, j')` gains
/// the phase `e^{2πi ab s (j - j')}`. Independent of `t`.
pub fn apply_lattice_shift(config: &GaborConfig, s: f64, _t: f64) -> ComplexMatrix {
    let gram = assemble_gram(config);
    shift_gram(&gram, s)
}

/// Applies the lattice-shift phase to an already assembled Gram matrix.
pub fn shift_gram(gram: &GramMatrix, s: f64) -> ComplexMatrix {
    let config = &gram.config;
    let n = config.n;
    let ab = config.params.ab();
    let mut out = gram.entries.clone();
    for bj in 0..n {
        for bjp in 0..n {
            let diff = bj as f64 - bjp as f64;
            // reduce the turn count before multiplying by 2π
            let turns = (ab * s * diff).rem_euclid(1.0);
            let phase = Complex64::from_polar(1.0, 2.0 * PI * turns);
            for k in 0..n {
                for kp in 0..n {
                    out[(bj * n + k, bjp * n + kp)] *= phase;
                }
            }
        }
    }
    out
}

/// `max_{k,k'} |conj(G_{k,k'}) - G_{-k',-k}|` for block `ℓ`.
pub fn check_per_hermitian(config: &GaborConfig, ell: i64) -> Result<f64> {
    let block = build_block(config, ell)?;
    Ok(block_per_hermitian_deviation(&block))
}

/// Per-Hermitian deviation of a square block indexed symmetrically.
pub fn block_per_hermitian_deviation(block: &ComplexMatrix) -> f64 {
    let n = block.rows();
    let mut dev: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            // index k ↦ -k is i ↦ n-1-i
            let y = block[(n - 1 - j, n - 1 - i)];
            dev = dev.max((block[(i, j)].conj() - y).norm());
        }
    }
    dev
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> GaborConfig {
        GaborConfig::new(0.25, 1.5, 2, 15).unwrap()
    }

    #[test]
    fn config_validation() {
        assert!(GaborConfig::new(0.0, 1.0, 2, 5).is_err());
        assert!(GaborConfig::new(0.5, -1.0, 2, 5).is_err());
        assert!(GaborConfig::new(0.5, 2.0, 2, 5).is_err());
        assert!(GaborConfig::new(0.5, 1.0, 0, 5).is_err());
        assert!(GaborConfig::new(0.5, 1.0, 2, 4).is_err());
        assert!(GaborConfig::new(0.5, 1.0, 2, 1).is_err());
        let c = GaborConfig::new(0.9, 1.0, 2, 3).unwrap();
        assert!(!c.is_strictly_banded());
        assert!(c.require_strictly_banded().is_err());
        assert!(cfg().is_strictly_banded());
        assert_eq!(cfg().bandwidth(), 8);
    }

    #[test]
    fn flat_index_is_j_major() {
        let c = GaborConfig::new(0.5, 1.0, 2, 5).unwrap();
        assert_eq!(c.flat_index(-2, -2), 0);
        assert_eq!(c.flat_index(-2, 2), 4);
        assert_eq!(c.flat_index(-1, -2), 5);
        assert_eq!(c.flat_index(2, 2), 24);
    }

    #[test]
    fn simple_coefficients() {
        let p = SystemParams::new(0.5, 1.2, 1).unwrap();
        assert!((toeplitz_coeff(&p, 0, 0) - 1.0).abs() < 1e-15);
        let p2 = SystemParams::new(0.25, 1.5, 2).unwrap();
        assert!((toeplitz_coeff(&p2, 0, 0) - 2.0 / 3.0).abs() < 1e-15);
        for ell in [0, 1, 5] {
            assert_eq!(toeplitz_coeff(&p2, ell, 9), 0.0);
            assert_eq!(toeplitz_coeff(&p2, ell, -9), 0.0);
        }
    }

    #[test]
    fn block_zero_is_real_symmetric() {
        let g0 = build_block(&cfg(), 0).unwrap();
        for i in 0..15 {
            for j in 0..15 {
                assert_eq!(g0[(i, j)].im, 0.0);
                assert_eq!(g0[(i, j)], g0[(j, i)]);
            }
        }
        assert_eq!(check_per_hermitian(&cfg(), 0).unwrap(), 0.0);
    }

    #[test]
    fn block_rejects_large_ell() {
        assert!(build_block(&cfg(), 15).is_err());
        assert!(build_block(&cfg(), -15).is_err());
        assert!(build_block(&cfg(), 14).is_ok());
        assert!(extract_factors(&cfg(), 20).is_err());
    }

    #[test]
    fn block_is_banded() {
        let c = cfg();
        for ell in [-3, 0, 2, 7] {
            let g = build_block(&c, ell).unwrap();
            for i in 0..c.n {
                for j in 0..c.n {
                    if (i as i64 - j as i64).unsigned_abs() as usize > c.bandwidth() {
                        assert_eq!(g[(i, j)], Complex64::new(0.0, 0.0));
                    }
                }
            }
        }
    }

    #[test]
    fn phase_vector_is_unimodular() {
        for v in phase_vector(&cfg(), 5) {
            assert!((v.norm() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn gram_diagonal_is_window_energy() {
        let c = GaborConfig::new(0.5, 1.3, 3, 7).unwrap();
        let g = assemble_gram(&c);
        let t00 = toeplitz_coeff(&c.params, 0, 0);
        for i in 0..g.dim() {
            assert!((g.entries[(i, i)].re - t00).abs() < 1e-15);
            assert_eq!(g.entries[(i, i)].im, 0.0);
        }
    }

    #[test]
    fn shift_by_zero_is_identity() {
        let c = GaborConfig::new(0.5, 1.3, 2, 5).unwrap();
        let g = assemble_gram(&c);
        assert_eq!(shift_gram(&g, 0.0), g.entries);
    }
}
