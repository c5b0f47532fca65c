//! Exact piecewise-polynomial algebra on the real line.
//!
//! Every piece stores monomial coefficients in the local variable `u = x - x_i`,
//! where `x_i` is the left endpoint of the piece. Values are zero outside
//! `[x_0, x_last)`. Products and shifts are exact up to rounding, and the
//! oscillatory moment `∫ p(x) e^{iωx} dx` has a closed form per piece, which
//! is what makes Gram entries of spline windows exact to machine precision.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Two breakpoints closer than this are treated as the same knot.
pub const BREAKPOINT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiecewisePolynomial {
    breakpoints: Vec<f64>,
    pieces: Vec<Vec<f64>>,
}

impl PiecewisePolynomial {
    pub fn new(breakpoints: Vec<f64>, pieces: Vec<Vec<f64>>) -> Result<Self> {
        if breakpoints.len() < 2 {
            return Err(Error::MalformedPolynomial(
                "need at least two breakpoints".into(),
            ));
        }
        if pieces.len() + 1 != breakpoints.len() {
            return Err(Error::MalformedPolynomial(format!(
                "{} breakpoints but {} pieces",
                breakpoints.len(),
                pieces.len()
            )));
        }
        if breakpoints.iter().any(|x| !x.is_finite()) {
            return Err(Error::MalformedPolynomial("non-finite breakpoint".into()));
        }
        if breakpoints.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::MalformedPolynomial(
                "breakpoints must be strictly increasing".into(),
            ));
        }
        Ok(Self {
            breakpoints,
            pieces,
        })
    }

    /// The zero function: a single empty piece over the degenerate interval `[0, 0]`.
    pub fn zero() -> Self {
        Self {
            breakpoints: vec![0.0, 0.0],
            pieces: vec![Vec::new()],
        }
    }

    /// A single polynomial (coefficients in `x - lo`) restricted to `[lo, hi)`.
    pub fn single(lo: f64, hi: f64, coeffs: Vec<f64>) -> Result<Self> {
        Self::new(vec![lo, hi], vec![coeffs])
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.iter().all(|c| c.iter().all(|&v| v == 0.0))
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[Vec<f64>] {
        &self.pieces
    }

    /// `None` for the zero function.
    pub fn support(&self) -> Option<(f64, f64)> {
        if self.is_zero() {
            None
        } else {
            Some((self.breakpoints[0], *self.breakpoints.last().unwrap()))
        }
    }

    /// Highest stored monomial power over all pieces (0 for constants and the zero function).
    pub fn degree(&self) -> usize {
        self.pieces
            .iter()
            .map(|c| c.len().saturating_sub(1))
            .max()
            .unwrap_or(0)
    }

    fn piece_index(&self, x: f64) -> Option<usize> {
        let bp = &self.breakpoints;
        if !(x >= bp[0] && x < bp[bp.len() - 1]) {
            return None;
        }
        // last breakpoint <= x
        let i = bp.partition_point(|&b| b <= x);
        Some(i - 1)
    }

    /// Value at `x`. Right-continuous: at a breakpoint the right piece is used,
    /// and the support is the half-open interval `[x_0, x_last)`.
    pub fn eval(&self, x: f64) -> f64 {
        match self.piece_index(x) {
            Some(i) => horner(&self.pieces[i], x - self.breakpoints[i]),
            None => 0.0,
        }
    }

    /// `x ↦ p(x - c)`.
    pub fn shift(&self, c: f64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Self {
            breakpoints: self.breakpoints.iter().map(|b| b + c).collect(),
            pieces: self.pieces.clone(),
        }
    }

    pub fn scale(&self, alpha: f64) -> Self {
        Self {
            breakpoints: self.breakpoints.clone(),
            pieces: self
                .pieces
                .iter()
                .map(|c| c.iter().map(|v| v * alpha).collect())
                .collect(),
        }
    }

    /// Pointwise product. The result lives on the merged breakpoints inside the
    /// intersection of the two supports, or is the zero function when the
    /// supports do not overlap on an interval of positive length.
    pub fn multiply(&self, other: &Self) -> Self {
        let (Some((a0, a1)), Some((b0, b1))) = (self.support(), other.support()) else {
            return Self::zero();
        };
        let lo = a0.max(b0);
        let hi = a1.min(b1);
        if hi - lo <= BREAKPOINT_TOL {
            return Self::zero();
        }
        let knots = merged_knots(
            lo,
            hi,
            self.breakpoints.iter().chain(other.breakpoints.iter()),
        );
        let mut pieces = Vec::with_capacity(knots.len() - 1);
        for w in knots.windows(2) {
            let p = self.local_piece(w[0], w[1]);
            let q = other.local_piece(w[0], w[1]);
            pieces.push(poly_mul(&p, &q));
        }
        Self {
            breakpoints: knots,
            pieces,
        }
    }

    /// `self + other`, defined on the union of the two supports.
    pub fn add(&self, other: &Self) -> Self {
        match (self.support(), other.support()) {
            (None, None) => Self::zero(),
            (Some(_), None) => self.clone(),
            (None, Some(_)) => other.clone(),
            (Some((a0, a1)), Some((b0, b1))) => {
                let knots = merged_knots(
                    a0.min(b0),
                    a1.max(b1),
                    self.breakpoints.iter().chain(other.breakpoints.iter()),
                );
                let pieces = knots
                    .windows(2)
                    .map(|w| {
                        let p = self.local_piece(w[0], w[1]);
                        let q = other.local_piece(w[0], w[1]);
                        poly_add(&p, &q)
                    })
                    .collect();
                Self {
                    breakpoints: knots,
                    pieces,
                }
            }
        }
    }

    /// Coefficients of the piece covering `[lo, hi]`, re-expanded about `lo`.
    /// Empty when the interval lies outside the support.
    fn local_piece(&self, lo: f64, hi: f64) -> Vec<f64> {
        let mid = 0.5 * (lo + hi);
        match self.piece_index(mid) {
            Some(i) => taylor_shift(&self.pieces[i], lo - self.breakpoints[i]),
            None => Vec::new(),
        }
    }

    /// `∫ p(x) dx` over the support.
    pub fn integrate(&self) -> f64 {
        self.breakpoints
            .windows(2)
            .zip(&self.pieces)
            .map(|(w, c)| {
                let h = w[1] - w[0];
                // Horner on ∫_0^h Σ c_m u^m du = Σ c_m h^{m+1}/(m+1)
                c.iter()
                    .enumerate()
                    .rev()
                    .fold(0.0, |acc, (m, &cm)| acc * h + cm / (m as f64 + 1.0))
                    * h
            })
            .sum()
    }

    /// `∫ p(x) e^{iωx} dx`, exact per piece.
    pub fn integrate_exp(&self, omega: f64) -> Complex64 {
        let mut total = Complex64::new(0.0, 0.0);
        for (w, c) in self.breakpoints.windows(2).zip(&self.pieces) {
            if c.is_empty() {
                continue;
            }
            let h = w[1] - w[0];
            let moments = unit_exp_moments(omega * h, c.len() - 1);
            let mut local = Complex64::new(0.0, 0.0);
            let mut hp = h;
            for (cm, jm) in c.iter().zip(&moments) {
                local += jm * (cm * hp);
                hp *= h;
            }
            total += Complex64::from_polar(1.0, omega * w[0]) * local;
        }
        total
    }

    /// `∫ p(x) cos(ωx) dx`, exact per piece.
    pub fn integrate_cos(&self, omega: f64) -> f64 {
        if omega == 0.0 {
            return self.integrate();
        }
        self.integrate_exp(omega).re
    }
}

/// Free-function form of [`PiecewisePolynomial::integrate_cos`].
pub fn integrate_poly_cos(p: &PiecewisePolynomial, omega: f64) -> f64 {
    p.integrate_cos(omega)
}

/// Sorted knots in `[lo, hi]` with near-duplicates collapsed.
fn merged_knots<'a>(lo: f64, hi: f64, candidates: impl Iterator<Item = &'a f64>) -> Vec<f64> {
    let mut inner: Vec<f64> = candidates
        .copied()
        .filter(|&x| x > lo + BREAKPOINT_TOL && x < hi - BREAKPOINT_TOL)
        .collect();
    inner.sort_by(|a, b| a.total_cmp(b));
    let mut knots = Vec::with_capacity(inner.len() + 2);
    knots.push(lo);
    for x in inner {
        if x - knots[knots.len() - 1] > BREAKPOINT_TOL {
            knots.push(x);
        }
    }
    knots.push(hi);
    knots
}

pub(crate) fn horner(coeffs: &[f64], u: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * u + c)
}

/// Coefficients of `q(u + d)` given those of `q(u)`.
pub(crate) fn taylor_shift(coeffs: &[f64], d: f64) -> Vec<f64> {
    let mut out = coeffs.to_vec();
    if d == 0.0 {
        return out;
    }
    let n = out.len();
    // repeated synthetic division by (u - (-d))
    for i in 0..n {
        for j in (i..n.saturating_sub(1)).rev() {
            out[j] += d * out[j + 1];
        }
    }
    out
}

pub(crate) fn poly_mul(p: &[f64], q: &[f64]) -> Vec<f64> {
    if p.is_empty() || q.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0.0; p.len() + q.len() - 1];
    for (i, &a) in p.iter().enumerate() {
        for (j, &b) in q.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    out
}

pub(crate) fn poly_add(p: &[f64], q: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; p.len().max(q.len())];
    for (i, &a) in p.iter().enumerate() {
        out[i] += a;
    }
    for (i, &b) in q.iter().enumerate() {
        out[i] += b;
    }
    out
}

/// `J_m(θ) = ∫_0^1 t^m e^{iθt} dt` for `m = 0..=max_m`.
///
/// Integration by parts links neighbouring moments,
/// `m·J_{m-1} = e^{iθ} - iθ·J_m`. Upward use divides by `θ` and is only
/// stable for `m ≤ |θ|`; downward use damps errors by `|θ|/m` and is stable
/// for `m > |θ|`, including `θ = 0`. Both directions are combined here.
pub(crate) fn unit_exp_moments(theta: f64, max_m: usize) -> Vec<Complex64> {
    let e = Complex64::from_polar(1.0, theta);
    let i_theta = Complex64::new(0.0, theta);
    let abs = theta.abs();
    let mut out = vec![Complex64::new(0.0, 0.0); max_m + 1];

    // m <= upward_top is computed upward
    let upward_top: Option<usize> = if abs >= 1.0 {
        Some((abs.floor() as usize).min(max_m))
    } else {
        None
    };

    if let Some(top) = upward_top {
        out[0] = (e - 1.0) / i_theta;
        for m in 1..=top {
            out[m] = (e - out[m - 1] * m as f64) / i_theta;
        }
        if top == max_m {
            return out;
        }
    }
    let first_down = upward_top.map_or(0, |t| t + 1);

    // Start well above max(max_m, 2|θ|) so the seed error is damped below rounding.
    let start = max_m.max(2 * abs.ceil() as usize) + 64;
    let mut j = e / (start as f64 + 1.0);
    for m in (1..=start).rev() {
        let prev = (e - i_theta * j) / m as f64;
        let idx = m - 1;
        if idx <= max_m && idx >= first_down {
            out[idx] = prev;
        }
        if idx < first_down {
            break;
        }
        j = prev;
    }
    out
}
