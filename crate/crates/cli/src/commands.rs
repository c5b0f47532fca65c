//! One function per subcommand. Each resolves its parameters (recording the
//! effective values for the manifest) and returns tables plus metadata.

use serde_json::{json, Value};
use std::collections::BTreeMap;

use splinegram::spectra::{
    asymptotic_equivalence_gap, circulant_from_symbol, frame_bound_trace, interlacing_check,
    jacobi::{HERMITIAN_TOL, OFF_DIAGONAL_TOL, PAIRING_TOL},
    frame::{INTERLACING_SLACK, MONOTONE_SLACK},
};
use splinegram::symbol::MIN_GRID;
use splinegram::{
    assemble_gram, build_block, decay_report, extract_factors, symbol_extrema, ComplexMatrix,
    GaborConfig, LaurentSymbol, SystemParams,
};

use crate::args::{ComplexRepr, Options};
use crate::error::{invalid, CliError};
use crate::figures;
use crate::output::Table;

pub struct Outcome {
    pub params: BTreeMap<String, Value>,
    pub tables: Vec<Table>,
    pub meta: BTreeMap<String, Value>,
    pub tolerances: BTreeMap<String, f64>,
}

/// Reads options with per-command defaults and records what was used.
pub struct Resolver<'a> {
    pub opts: &'a Options,
    pub params: BTreeMap<String, Value>,
}

impl<'a> Resolver<'a> {
    pub fn new(opts: &'a Options) -> Self {
        Self {
            opts,
            params: BTreeMap::new(),
        }
    }

    pub fn record(&mut self, key: &str, v: impl Into<Value>) {
        self.params.insert(key.to_string(), v.into());
    }

    pub fn system(&mut self, a: f64, b: f64, order: usize) -> Result<SystemParams, CliError> {
        let a = self.opts.a.unwrap_or(a);
        let b = self.opts.b.unwrap_or(b);
        let order = self.opts.order.unwrap_or(order);
        self.record("a", a);
        self.record("b", b);
        self.record("order", order);
        Ok(SystemParams::new(a, b, order)?)
    }

    pub fn n(&mut self, default: usize) -> usize {
        let n = self.opts.n.unwrap_or(default);
        self.record("n", n);
        n
    }

    pub fn config(&mut self, a: f64, b: f64, order: usize, n: usize) -> Result<GaborConfig, CliError> {
        let params = self.system(a, b, order)?;
        let n = self.n(n);
        let config = GaborConfig::from_params(params, n)?;
        warn_if_loose(&config);
        Ok(config)
    }

    /// `--ell-range`, else `--ell`, else the default range.
    pub fn ells(&mut self, lo: i64, hi: i64) -> Vec<i64> {
        let (lo, hi) = match (self.opts.ell_range, self.opts.ell) {
            (Some(r), _) => r,
            (None, Some(e)) => (e, e),
            (None, None) => (lo, hi),
        };
        if lo == hi {
            self.record("ell", lo);
        } else {
            self.record("ell_range", format!("{lo}..{hi}"));
        }
        (lo..=hi).collect()
    }

    pub fn ell(&mut self, default: i64) -> Result<i64, CliError> {
        if self.opts.ell_range.is_some() {
            return invalid("this command takes a single --ell, not --ell-range");
        }
        let ell = self.opts.ell.unwrap_or(default);
        self.record("ell", ell);
        Ok(ell)
    }

    pub fn grid(&mut self, default: usize) -> Result<usize, CliError> {
        let grid = self.opts.grid.unwrap_or(default);
        if grid < MIN_GRID {
            return invalid(format!("--grid must be at least {MIN_GRID}, got {grid}"));
        }
        self.record("grid", grid);
        Ok(grid)
    }

    pub fn tol(&mut self, default: f64) -> Result<f64, CliError> {
        let tol = self.opts.tol.unwrap_or(default);
        if !(tol > 0.0 && tol.is_finite()) {
            return invalid(format!("--tol must be positive, got {tol}"));
        }
        self.record("tol", tol);
        Ok(tol)
    }

    pub fn n_list(&mut self, default: &[usize]) -> Vec<usize> {
        let ns = self.opts.n_list.clone().unwrap_or_else(|| default.to_vec());
        self.record("n_list", ns.clone());
        ns
    }

    pub fn complex(&mut self) -> ComplexRepr {
        let c = self.opts.complex;
        self.record(
            "complex",
            match c {
                ComplexRepr::ReIm => "re-im",
                ComplexRepr::MagPhase => "mag-phase",
            },
        );
        c
    }

    pub fn finish(self, tables: Vec<Table>, meta: BTreeMap<String, Value>, tolerances: &[(&str, f64)]) -> Outcome {
        Outcome {
            params: self.params,
            tables,
            meta,
            tolerances: tolerances.iter().map(|&(k, v)| (k.to_string(), v)).collect(),
        }
    }
}

pub fn warn_if_loose(config: &GaborConfig) {
    if !config.is_strictly_banded() {
        eprintln!(
            "warning: n = {} does not exceed N/a + 1 = {:.4}; bands reach the block corners",
            config.n,
            config.order() as f64 / config.a() + 1.0
        );
    }
}

pub const EIGEN_TOLERANCES: [(&str, f64); 3] = [
    ("jacobi_off_diagonal", OFF_DIAGONAL_TOL),
    ("hermitian_input", HERMITIAN_TOL),
    ("eigenvalue_pairing", PAIRING_TOL),
];

/// The two real matrices representing `m`, named `<prefix>_re`/`_im` or `_magnitude`/`_phase`.
pub fn complex_tables(prefix: &str, m: &ComplexMatrix, repr: ComplexRepr) -> [Table; 2] {
    let (r, c) = (m.rows(), m.cols());
    match repr {
        ComplexRepr::ReIm => [
            Table::matrix(format!("{prefix}_re"), r, c, |i, j| m[(i, j)].re),
            Table::matrix(format!("{prefix}_im"), r, c, |i, j| m[(i, j)].im),
        ],
        ComplexRepr::MagPhase => [
            Table::matrix(format!("{prefix}_magnitude"), r, c, |i, j| m[(i, j)].norm()),
            Table::matrix(format!("{prefix}_phase"), r, c, |i, j| m[(i, j)].arg()),
        ],
    }
}

fn extrema_json(ell: i64, sym: &LaurentSymbol, grid: usize) -> Result<Value, CliError> {
    let e = symbol_extrema(sym, grid)?;
    Ok(json!({"ell": ell, "min": e.min, "argmin": e.argmin, "max": e.max, "argmax": e.argmax}))
}

pub fn symbol(opts: &Options) -> Result<Outcome, CliError> {
    let mut r = Resolver::new(opts);
    let params = r.system(0.25, 1.5, 2)?;
    let ells = r.ells(0, 0);
    let grid = r.grid(1024)?;
    let tol = r.tol(1e-12)?;

    let mut table = Table::new("symbol", &["ell", "x", "coeff_form", "sinc_form"]);
    let mut extrema = Vec::new();
    let mut proven = true;
    for &ell in &ells {
        let sym = LaurentSymbol::new(params, ell);
        proven &= sym.sinc_form_is_proven();
        for i in 0..grid {
            let x = -0.5 + i as f64 / (grid - 1) as f64;
            table.push(vec![ell as f64, x, sym.eval_coeff(x), sym.eval_sinc(x, tol)?]);
        }
        extrema.push(extrema_json(ell, &sym, grid)?);
    }
    let mut meta = BTreeMap::new();
    if let [only] = extrema.as_slice() {
        for key in ["min", "argmin", "max", "argmax"] {
            meta.insert(key.to_string(), only[key].clone());
        }
    }
    meta.insert("extrema".into(), Value::from(extrema));
    meta.insert("bandwidth".into(), params.bandwidth().into());
    meta.insert("sinc_form_proven".into(), proven.into());
    Ok(r.finish(vec![table], meta, &[("sinc_tail", tol), ("extrema_bisection_width", 1e-12)]))
}

pub fn gram(opts: &Options) -> Result<Outcome, CliError> {
    let mut r = Resolver::new(opts);
    let config = r.config(0.25, 1.5, 2, 15)?;
    let repr = r.complex();
    let g = assemble_gram(&config);
    let [t1, t2] = complex_tables("gram", &g.entries, repr);
    let meta = BTreeMap::from([
        ("dim".to_string(), Value::from(g.dim())),
        ("bandwidth".to_string(), config.bandwidth().into()),
        ("strictly_banded".to_string(), config.is_strictly_banded().into()),
        ("hermitian_deviation".to_string(), g.entries.hermitian_deviation().into()),
        ("per_hermitian_deviation".to_string(), g.per_hermitian_deviation().into()),
        ("block_toeplitz_deviation".to_string(), g.block_toeplitz_deviation().into()),
    ]);
    Ok(r.finish(vec![t1, t2], meta, &[]))
}

pub fn block(opts: &Options) -> Result<Outcome, CliError> {
    let mut r = Resolver::new(opts);
    let config = r.config(0.25, 1.5, 2, 15)?;
    let ell = r.ell(0)?;
    let repr = r.complex();
    let blk = build_block(&config, ell)?;
    let (t, v) = extract_factors(&config, ell)?;
    let m = t.bandwidth as i64;

    let mut toeplitz = Table::new("toeplitz", &["j", "t"]);
    for j in -m..=m {
        toeplitz.push(vec![j as f64, t.coeff(j)]);
    }
    let mut phase = Table::new("phase_vector", &["k", "re", "im"]);
    for (k, z) in config.indices().zip(&v) {
        phase.push(vec![k as f64, z.re, z.im]);
    }
    let [b1, b2] = complex_tables("block", &blk, repr);
    let rebuilt = t.matrix(config.n).to_complex().hadamard(&splinegram::hankel_factor(&v));
    let meta = BTreeMap::from([
        ("bandwidth".to_string(), Value::from(t.bandwidth)),
        ("reconstruction_error".to_string(), blk.max_abs_diff(&rebuilt).into()),
        (
            "per_hermitian_deviation".to_string(),
            splinegram::gram::block_per_hermitian_deviation(&blk).into(),
        ),
    ]);
    Ok(r.finish(vec![toeplitz, phase, b1, b2], meta, &[]))
}

pub fn spectrum(opts: &Options) -> Result<Outcome, CliError> {
    let mut r = Resolver::new(opts);
    let config = r.config(0.25, 1.5, 2, 15)?;
    let rep = interlacing_check(&config)?;
    let mut g = Table::new("gram_eigenvalues", &["k", "eigenvalue"]);
    for (k, v) in rep.gram_eigenvalues.iter().enumerate() {
        g.push(vec![(k + 1) as f64, *v]);
    }
    let mut b = Table::new("block_eigenvalues", &["k", "eigenvalue"]);
    for (k, v) in rep.block_eigenvalues.iter().enumerate() {
        b.push(vec![(k + 1) as f64, *v]);
    }
    let meta = BTreeMap::from([
        ("gram_min".to_string(), Value::from(rep.gram_min())),
        ("gram_max".to_string(), rep.gram_max().into()),
        ("symbol_min".to_string(), rep.symbol_min.into()),
        ("symbol_max".to_string(), rep.symbol_max.into()),
        ("all_interlace".to_string(), rep.all_interlace().into()),
        ("lower_estimate".to_string(), rep.lower_estimate.into()),
        ("upper_estimate".to_string(), rep.upper_estimate.into()),
        ("psd".to_string(), (rep.gram_min() >= -1e-10 * rep.gram_max()).into()),
    ]);
    let mut tol = EIGEN_TOLERANCES.to_vec();
    tol.push(("interlacing_slack", INTERLACING_SLACK));
    Ok(r.finish(vec![g, b], meta, &tol))
}

pub fn decay(opts: &Options) -> Result<Outcome, CliError> {
    let mut r = Resolver::new(opts);
    let params = r.system(0.23, 1.7, 2)?;
    let ells = r.ells(8, 64);
    if ells.len() < 2 || ells[0] <= 0 {
        return invalid("decay needs at least two positive ℓ");
    }
    let rep = decay_report(&params, &ells);
    let mut t = Table::new("decay", &["ell", "width"]);
    for (l, w) in rep.ells.iter().zip(&rep.widths) {
        t.push(vec![*l as f64, *w]);
    }
    let meta = BTreeMap::from([
        ("slope".to_string(), Value::from(rep.slope)),
        ("constant".to_string(), rep.constant.into()),
    ]);
    Ok(r.finish(vec![t], meta, &[("extrema_bisection_width", 1e-12)]))
}

pub fn circulant(opts: &Options) -> Result<Outcome, CliError> {
    let mut r = Resolver::new(opts);
    let params = r.system(0.25, 1.5, 2)?;
    let ell = r.ell(0)?;
    let n = r.n(1024);
    let sym = LaurentSymbol::new(params, ell);
    let circ = circulant_from_symbol(&sym, n)?;
    let mut eig = Table::new("circulant_eigenvalues", &["p", "x", "eigenvalue"]);
    for (p, v) in circ.eigenvalues.iter().enumerate() {
        eig.push(vec![p as f64, p as f64 / n as f64, *v]);
    }
    let mut row = Table::new("first_row", &["k", "c"]);
    for (k, c) in circ.first_row.iter().enumerate() {
        row.push(vec![k as f64, *c]);
    }
    let min = circ.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
    let meta = BTreeMap::from([
        ("bandwidth".to_string(), Value::from(sym.bandwidth())),
        ("hs_gap".to_string(), asymptotic_equivalence_gap(&sym.block, n)?.into()),
        ("check_residual".to_string(), circ.check_residual.into()),
        ("min_eigenvalue".to_string(), min.into()),
    ]);
    Ok(r.finish(vec![eig, row], meta, &[("fourier_check", 1e-10)]))
}

pub fn framebounds(opts: &Options) -> Result<Outcome, CliError> {
    let mut r = Resolver::new(opts);
    let params = r.system(0.25, 1.5, 2)?;
    let ns = r.n_list(&[5, 7, 9, 11, 13, 15]);
    for &n in &ns {
        warn_if_loose(&params.with_n(n)?);
    }
    let tr = frame_bound_trace(&params, &ns)?;
    let mut t = Table::new("frame_bounds", &["n", "A", "B"]);
    for ((n, a), b) in tr.ns.iter().zip(&tr.lower).zip(&tr.upper) {
        t.push(vec![*n as f64, *a, *b]);
    }
    let mut meta = BTreeMap::from([
        ("lower_nonincreasing".to_string(), Value::from(tr.lower_nonincreasing)),
        ("upper_nondecreasing".to_string(), tr.upper_nondecreasing.into()),
        ("all_invertible".to_string(), tr.all_invertible.into()),
    ]);
    if let (Some(p), Some(d)) = (tr.rational_p, tr.lower_decays) {
        meta.insert("rational_p".into(), p.into());
        meta.insert("lower_decays".into(), d.into());
    }
    let mut tol = EIGEN_TOLERANCES.to_vec();
    tol.push(("monotone_slack", MONOTONE_SLACK));
    Ok(r.finish(vec![t], meta, &tol))
}

pub fn figure(opts: &Options) -> Result<Outcome, CliError> {
    let Some(id) = opts.figure else {
        return invalid("figure needs --figure 1..5");
    };
    let mut r = Resolver::new(opts);
    r.record("figure", id);
    match id {
        1 => figures::fig1(r),
        2 => figures::fig2(r),
        3 => figures::fig3(r),
        4 => figures::fig4(r),
        5 => figures::fig5(r),
        _ => invalid(format!("unknown figure {id}")),
    }
}
