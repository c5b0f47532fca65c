//! Centered cardinal B-splines `s_N`, supported on `[-N/2, N/2]`.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{invalid, Result};
use crate::poly::{poly_add, PiecewisePolynomial};

/// Largest supported order; beyond this the monomial coefficients of the
/// degree `N-1` pieces lose too much precision.
pub const MAX_ORDER: usize = 25;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BSpline {
    order: usize,
    poly: PiecewisePolynomial,
}

impl BSpline {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn poly(&self) -> &PiecewisePolynomial {
        &self.poly
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.poly.eval(x)
    }

    pub fn half_width(&self) -> f64 {
        self.order as f64 / 2.0
    }
}

fn check_order(order: usize) -> Result<()> {
    if order == 0 || order > MAX_ORDER {
        return invalid(format!(
            "B-spline order must be in 1..={MAX_ORDER}, got {order}"
        ));
    }
    Ok(())
}

fn knots(order: usize) -> Vec<f64> {
    let half = order as f64 / 2.0;
    (0..=order).map(|i| i as f64 - half).collect()
}

/// Builds `s_N` by the convolution recursion `s_N = s_1 * s_{N-1}`.
///
/// On unit intervals with local variable `u ∈ [0, 1)`, piece `i` of `s_N` is
/// `∫_u^1 P_{i-1}(v) dv + ∫_0^u P_i(v) dv` where `P` are the pieces of `s_{N-1}`.
pub fn build_bspline(order: usize) -> Result<BSpline> {
    check_order(order)?;
    let mut pieces: Vec<Vec<f64>> = vec![vec![1.0]];
    for _ in 2..=order {
        let prev = pieces;
        let mut next = Vec::with_capacity(prev.len() + 1);
        for i in 0..=prev.len() {
            let mut piece = Vec::new();
            if i >= 1 {
                piece = poly_add(&piece, &integral_to_one(&prev[i - 1]));
            }
            if i < prev.len() {
                piece = poly_add(&piece, &antiderivative(&prev[i]));
            }
            next.push(piece);
        }
        pieces = next;
    }
    Ok(BSpline {
        order,
        poly: PiecewisePolynomial::new(knots(order), pieces)?,
    })
}

/// Builds `s_N` from the truncated-power formula
/// `s_N(x) = 1/(N-1)! Σ_k (-1)^k C(N,k) (x + N/2 - k)_+^{N-1}`.
pub fn build_bspline_closed_form(order: usize) -> Result<BSpline> {
    check_order(order)?;
    let deg = order - 1;
    let fact: f64 = (1..=deg).map(|v| v as f64).product();
    let binom_n: Vec<f64> = binomial_row(order);
    let binom_d: Vec<f64> = binomial_row(deg);
    let mut pieces = Vec::with_capacity(order);
    // on piece i, x + N/2 - k = u + (i - k), active for k <= i
    for i in 0..order {
        let mut piece = vec![0.0; deg + 1];
        for k in 0..=i {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let d = (i - k) as f64;
            // (u + d)^deg = Σ_m C(deg, m) d^{deg-m} u^m
            for (m, c) in piece.iter_mut().enumerate() {
                *c += sign * binom_n[k] * binom_d[m] * d.powi((deg - m) as i32);
            }
        }
        for c in piece.iter_mut() {
            *c /= fact;
        }
        pieces.push(piece);
    }
    Ok(BSpline {
        order,
        poly: PiecewisePolynomial::new(knots(order), pieces)?,
    })
}

fn binomial_row(n: usize) -> Vec<f64> {
    let mut row = vec![1.0; n + 1];
    for k in 1..n {
        row[k] = row[k - 1] * (n - k + 1) as f64 / k as f64;
    }
    row
}

/// `∫_0^u p(v) dv`.
fn antiderivative(p: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; p.len() + 1];
    for (m, &c) in p.iter().enumerate() {
        out[m + 1] = c / (m as f64 + 1.0);
    }
    out
}

/// `∫_u^1 p(v) dv`.
fn integral_to_one(p: &[f64]) -> Vec<f64> {
    let mut out: Vec<f64> = antiderivative(p).iter().map(|c| -c).collect();
    out[0] += p
        .iter()
        .enumerate()
        .map(|(m, &c)| c / (m as f64 + 1.0))
        .sum::<f64>();
    out
}

pub fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        let px = PI * x;
        px.sin() / px
    }
}

/// Fourier transform of `s_N` at `xi`: `sinc(ξ)^N`.
pub fn fourier_sinc(order: usize, xi: f64) -> f64 {
    sinc(xi).powi(order as i32)
}
