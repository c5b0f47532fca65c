//! Data behind the five figures. Every series is recomputed from the
//! library; `--a/--b/--order/--n/--ell*/--grid/--n-list` narrow or override
//! the default sweeps.

use serde_json::{json, Value};
use std::collections::BTreeMap;

use splinegram::spectra::{
    asymptotic_equivalence_gap, eigen_comparison_trace, interlacing_check, InterlacingReport,
};
use splinegram::{assemble_factor_matrices, assemble_gram, decay_report, GaborConfig, LaurentSymbol, SystemParams};

use crate::commands::{warn_if_loose, Outcome, Resolver, EIGEN_TOLERANCES};
use crate::error::CliError;
use crate::output::Table;

/// Entry magnitudes and phases of G_n next to |T| and arg(H) of its factorization.
pub fn fig1(mut r: Resolver) -> Result<Outcome, CliError> {
    let config = r.config(0.25, 1.5, 2, 15)?;
    let g = assemble_gram(&config);
    let (t, h) = assemble_factor_matrices(&config);
    let d = g.dim();
    let e = &g.entries;
    let tables = vec![
        Table::matrix("fig1_magnitude", d, d, |i, j| e[(i, j)].norm()),
        Table::matrix("fig1_phase", d, d, |i, j| e[(i, j)].arg()),
        Table::matrix("fig1_toeplitz_abs", d, d, |i, j| t[(i, j)].abs()),
        Table::matrix("fig1_hankel_arg", d, d, |i, j| h[(i, j)].arg()),
    ];
    let rebuilt = t.to_complex().hadamard(&h);
    let meta = BTreeMap::from([
        ("dim".to_string(), Value::from(d)),
        ("factorization_error".to_string(), e.max_abs_diff(&rebuilt).into()),
    ]);
    Ok(r.finish(tables, meta, &[]))
}

fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    (0..count)
        .map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
        .collect()
}

/// Symbol curves t^[ℓ](x) over a family of (a, b).
pub fn fig2(mut r: Resolver) -> Result<Outcome, CliError> {
    let a_values = match r.opts.a {
        Some(a) => vec![a],
        None => vec![0.3, 0.4, 0.5],
    };
    let b_values = match r.opts.b {
        Some(b) => vec![b],
        None => linspace(1.5, 1.98, 8),
    };
    let order = r.opts.order.unwrap_or(2);
    r.record("a", a_values.clone());
    r.record("b", b_values.clone());
    r.record("order", order);
    let ells = r.ells(0, 4);
    let grid = r.grid(1024)?;

    let mut table = Table::new("fig2_symbol", &["a", "b", "ell", "x", "t"]);
    for &a in &a_values {
        for &b in &b_values {
            let params = SystemParams::new(a, b, order)?;
            for &ell in &ells {
                let sym = LaurentSymbol::new(params, ell);
                for i in 0..grid {
                    let x = -0.5 + i as f64 / (grid - 1) as f64;
                    table.push(vec![a, b, ell as f64, x, sym.eval_coeff(x)]);
                }
            }
        }
    }
    let meta = BTreeMap::from([
        ("a_count".to_string(), Value::from(a_values.len())),
        ("b_count".to_string(), b_values.len().into()),
        ("curves".to_string(), (a_values.len() * b_values.len() * ells.len()).into()),
    ]);
    Ok(r.finish(vec![table], meta, &[]))
}

/// Spectral widths against ℓ for several orders, with the fitted power law
/// and an ℓ^{-N} reference anchored at the first ℓ.
pub fn fig3(mut r: Resolver) -> Result<Outcome, CliError> {
    let a = r.opts.a.unwrap_or(0.23);
    let b = r.opts.b.unwrap_or(1.7);
    let orders: Vec<usize> = match r.opts.order {
        Some(n) => vec![n],
        None => (2..=5).collect(),
    };
    r.record("a", a);
    r.record("b", b);
    r.record("order", orders.clone());
    let ells = r.ells(8, 64);
    if ells.len() < 2 || ells[0] <= 0 {
        return crate::error::invalid("figure 3 needs at least two positive ℓ");
    }

    let mut table = Table::new(
        "fig3_decay",
        &["order", "ell", "width", "fitted", "fitted_slope", "reference"],
    );
    let mut fits = Vec::new();
    for &order in &orders {
        let params = SystemParams::new(a, b, order)?;
        let rep = decay_report(&params, &ells);
        let l0 = ells[0] as f64;
        let anchor = rep.widths[0] * l0.powi(order as i32);
        for (&ell, &w) in rep.ells.iter().zip(&rep.widths) {
            let l = ell as f64;
            table.push(vec![
                order as f64,
                l,
                w,
                rep.constant * l.powf(rep.slope),
                rep.slope,
                anchor * l.powi(-(order as i32)),
            ]);
        }
        fits.push(json!({"order": order, "slope": rep.slope, "constant": rep.constant}));
    }
    let meta = BTreeMap::from([("fits".to_string(), Value::from(fits))]);
    Ok(r.finish(vec![table], meta, &[("extrema_bisection_width", 1e-12)]))
}

/// Extreme eigenvalues of G_n and G_n^[0] against the symbol range over an (a, b) grid.
pub fn fig4(mut r: Resolver) -> Result<Outcome, CliError> {
    let a_values = match r.opts.a {
        Some(a) => vec![a],
        None => vec![0.25, 0.3, 0.35],
    };
    let b_values = match r.opts.b {
        Some(b) => vec![b],
        None => vec![1.5, 1.75, 1.95],
    };
    let order = r.opts.order.unwrap_or(2);
    r.record("a", a_values.clone());
    r.record("b", b_values.clone());
    r.record("order", order);
    let n = r.n(15);

    let mut configs = Vec::new();
    for &a in &a_values {
        for &b in &b_values {
            let c = GaborConfig::new(a, b, order, n)?;
            warn_if_loose(&c);
            configs.push(c);
        }
    }
    let reports: Vec<splinegram::Result<InterlacingReport>> = std::thread::scope(|s| {
        let handles: Vec<_> = configs
            .iter()
            .map(|c| s.spawn(move || interlacing_check(c)))
            .collect();
        handles.into_iter().map(|h| h.join().expect("eigensolve thread")).collect()
    });

    let mut table = Table::new(
        "fig4_bounds",
        &["a", "b", "gram_min", "symbol_min", "block_max", "symbol_max", "gram_max", "block_min"],
    );
    let mut all_interlace = true;
    for (c, rep) in configs.iter().zip(reports) {
        let rep = rep?;
        all_interlace &= rep.all_interlace();
        let block_min = rep.block_eigenvalues.first().copied().unwrap_or(f64::NAN);
        let block_max = rep.block_eigenvalues.last().copied().unwrap_or(f64::NAN);
        table.push(vec![
            c.a(),
            c.b(),
            rep.gram_min(),
            rep.symbol_min,
            block_max,
            rep.symbol_max,
            rep.gram_max(),
            block_min,
        ]);
    }
    let meta = BTreeMap::from([("all_interlace".to_string(), Value::from(all_interlace))]);
    Ok(r.finish(vec![table], meta, &EIGEN_TOLERANCES))
}

/// Sorted Toeplitz versus circulant eigenvalues over growing n.
pub fn fig5(mut r: Resolver) -> Result<Outcome, CliError> {
    let params = r.system(0.25, 1.5, 2)?;
    let ell = r.ell(0)?;
    let ns = r.n_list(&[33, 65, 129, 257]);
    let sym = LaurentSymbol::new(params, ell);
    let comps = eigen_comparison_trace(&sym, &ns)?;

    let mut diffs = Table::new(
        "fig5_differences",
        &["n", "m", "toeplitz", "circulant", "difference"],
    );
    let mut stats = Table::new(
        "fig5_statistics",
        &["n", "s1", "s2", "trace_identity", "hs_gap_sqrt_n"],
    );
    for c in &comps {
        for (m, (l, p)) in c.toeplitz_eigenvalues.iter().zip(&c.circulant_eigenvalues).enumerate() {
            diffs.push(vec![c.n as f64, (m + 1) as f64, *l, *p, l - p]);
        }
        let gap = asymptotic_equivalence_gap(&sym.block, c.n)?;
        stats.push(vec![
            c.n as f64,
            c.first_moment,
            c.second_moment,
            c.trace_identity,
            gap * (c.n as f64).sqrt(),
        ]);
    }
    let meta = BTreeMap::from([
        (
            "s1".to_string(),
            Value::from(comps.iter().map(|c| c.first_moment).collect::<Vec<_>>()),
        ),
        (
            "s2".to_string(),
            Value::from(comps.iter().map(|c| c.second_moment).collect::<Vec<_>>()),
        ),
    ]);
    Ok(r.finish(vec![diffs, stats], meta, &EIGEN_TOLERANCES))
}
