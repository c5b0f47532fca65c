use serde_json::Value;
use std::collections::BTreeMap;
use std::path::Path;
use std::process::{Command, Output};

fn splinegram(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_splinegram"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = splinegram(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

/// `# key=value` header lines and the tables that follow them.
struct Csv {
    header: BTreeMap<String, String>,
    tables: BTreeMap<String, (Vec<String>, Vec<Vec<f64>>)>,
}

fn parse_csv(text: &str) -> Csv {
    let mut header = BTreeMap::new();
    let mut tables = BTreeMap::new();
    let mut current: Option<String> = None;
    let mut lines = text.lines().peekable();
    while let Some(line) = lines.next() {
        if let Some(rest) = line.strip_prefix("# ") {
            let (k, v) = rest.split_once('=').unwrap();
            if k == "table" {
                let cols = lines.next().unwrap().split(',').map(String::from).collect();
                tables.insert(v.to_string(), (cols, Vec::new()));
                current = Some(v.to_string());
            } else {
                header.insert(k.to_string(), v.to_string());
            }
        } else {
            let name = current.as_ref().expect("row before any table");
            let row = line.split(',').map(|c| c.parse::<f64>().unwrap()).collect();
            tables.get_mut(name).unwrap().1.push(row);
        }
    }
    Csv { header, tables }
}

fn read_json(path: &Path) -> Value {
    serde_json::from_slice(&std::fs::read(path).unwrap()).unwrap()
}

#[test]
fn symbol_samples_and_extrema() {
    let csv = parse_csv(&ok(&["symbol", "--a", "0.25", "--b", "1.5", "--order", "2", "--ell", "0", "--grid", "1024"]));
    let (cols, rows) = &csv.tables["symbol"];
    assert_eq!(cols, &["ell", "x", "coeff_form", "sinc_form"]);
    assert_eq!(rows.len(), 1024);
    let min: f64 = csv.header["meta.min"].parse().unwrap();
    let max: f64 = csv.header["meta.max"].parse().unwrap();
    assert!(min.abs() < 1e-12, "{min}");
    assert!((max - 4.0).abs() < 1e-12, "{max}");
    for r in rows {
        assert!((r[2] - r[3]).abs() < 1e-10);
    }
    assert_eq!(csv.header["param.tol"], "1e-12");
    assert_eq!(csv.header["version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn output_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    for fmt in ["csv", "json"] {
        let mut files = Vec::new();
        let p = dir.path().join(format!("run.{fmt}"));
        for _ in 0..2 {
            ok(&["block", "--n", "11", "--ell", "2", "--format", fmt, "--out", p.to_str().unwrap()]);
            files.push(std::fs::read(&p).unwrap());
        }
        assert_eq!(files[0], files[1], "{fmt}");
    }
    assert_eq!(ok(&["symbol", "--grid", "64"]), ok(&["symbol", "--grid", "64"]));
}

#[test]
fn stamp_adds_timestamp() {
    assert!(!ok(&["symbol", "--grid", "64"]).contains("timestamp="));
    assert!(ok(&["symbol", "--grid", "64", "--stamp"]).contains("# timestamp="));
}

#[test]
fn json_matches_csv_values() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("g.json");
    ok(&["gram", "--n", "11", "--format", "json", "--out", p.to_str().unwrap()]);
    let j = read_json(&p);
    assert_eq!(j["manifest"]["command"], "gram");
    assert_eq!(j["manifest"]["params"]["n"], 11);
    assert_eq!(j["manifest"]["params"]["a"], 0.25);
    assert!(j["metadata"]["tolerances"].is_object());
    assert_eq!(j["metadata"]["strictly_banded"], true);
    let csv = parse_csv(&ok(&["gram", "--n", "11"]));
    for (t, table) in j["data"].as_array().unwrap().iter().enumerate() {
        let name = table["name"].as_str().unwrap();
        let rows = &csv.tables[name].1;
        assert_eq!(rows.len(), 121, "table {t}");
        for (r, row) in table["rows"].as_array().unwrap().iter().enumerate() {
            for (c, v) in row.as_array().unwrap().iter().enumerate() {
                assert_eq!(v.as_f64().unwrap(), rows[r][c]);
            }
        }
    }
}

#[test]
fn gram_is_hermitian() {
    let csv = parse_csv(&ok(&["gram", "--n", "11"]));
    let dev: f64 = csv.header["meta.hermitian_deviation"].parse().unwrap();
    assert!(dev < 1e-13);
    let re = &csv.tables["gram_re"].1;
    let im = &csv.tables["gram_im"].1;
    for i in 0..121 {
        for j in 0..121 {
            assert_eq!(re[i][j], re[j][i]);
            assert_eq!(im[i][j], -im[j][i]);
        }
    }
}

#[test]
fn framebounds_rows() {
    let csv = parse_csv(&ok(&["framebounds", "--a", "0.25", "--b", "1.5", "--order", "2", "--n-list", "5,7,9"]));
    let rows = &csv.tables["frame_bounds"].1;
    assert_eq!(rows.len(), 3);
    assert_eq!(rows.iter().map(|r| r[0]).collect::<Vec<_>>(), vec![5.0, 7.0, 9.0]);
    for w in rows.windows(2) {
        assert!(w[1][1] <= w[0][1] + 1e-9);
        assert!(w[1][2] >= w[0][2] - 1e-9);
    }
}

#[test]
fn decay_slope_near_minus_order() {
    let csv = parse_csv(&ok(&["decay", "--a", "0.23", "--b", "1.7", "--order", "2", "--ell-range", "8..64"]));
    assert_eq!(csv.tables["decay"].1.len(), 57);
    let slope: f64 = csv.header["meta.slope"].parse().unwrap();
    assert!((slope + 2.0).abs() <= 0.1, "{slope}");
}

#[test]
fn circulant_gap_and_spectrum() {
    let csv = parse_csv(&ok(&["circulant", "--n", "64"]));
    assert_eq!(csv.tables["circulant_eigenvalues"].1.len(), 64);
    assert_eq!(csv.tables["first_row"].1.len(), 64);
    let resid: f64 = csv.header["meta.check_residual"].parse().unwrap();
    assert!(resid < 1e-10);
}

#[test]
fn spectrum_interlaces() {
    let csv = parse_csv(&ok(&["spectrum", "--n", "11"]));
    assert_eq!(csv.tables["gram_eigenvalues"].1.len(), 121);
    assert_eq!(csv.tables["block_eigenvalues"].1.len(), 11);
    assert_eq!(csv.header["meta.all_interlace"], "true");
}

#[test]
fn figure2_curves() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("f2");
    ok(&["figure", "--figure", "2", "--a", "0.4", "--b", "1.5", "--out", out.to_str().unwrap()]);
    let csv = parse_csv(&std::fs::read_to_string(out.join("fig2_symbol.csv")).unwrap());
    let (cols, rows) = &csv.tables["fig2_symbol"];
    assert_eq!(cols, &["a", "b", "ell", "x", "t"]);
    assert_eq!(rows.len(), 5 * 1024);
}

#[test]
fn figure1_matrices() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("f1");
    ok(&["figure", "--figure", "1", "--out", out.to_str().unwrap()]);
    for name in ["fig1_magnitude", "fig1_phase", "fig1_toeplitz_abs", "fig1_hankel_arg"] {
        let csv = parse_csv(&std::fs::read_to_string(out.join(format!("{name}.csv"))).unwrap());
        let (cols, rows) = &csv.tables[name];
        assert_eq!(cols.len(), 225);
        assert_eq!(rows.len(), 225);
    }
}

#[test]
fn figure3_has_slopes() {
    let csv = parse_csv(&ok(&["figure", "--figure", "3", "--ell-range", "8..32"]));
    let (cols, rows) = &csv.tables["fig3_decay"];
    let k = cols.iter().position(|c| c == "fitted_slope").unwrap();
    for order in 2..=5 {
        let slope = rows.iter().find(|r| r[0] == order as f64).unwrap()[k];
        assert!((slope + order as f64).abs() < 0.5, "N={order}: {slope}");
    }
}

#[test]
fn figure4_and_5_json() {
    let dir = tempfile::tempdir().unwrap();
    ok(&["figure", "--figure", "4", "--a", "0.3", "--b", "1.5", "--n", "11", "--format", "json", "--out", dir.path().to_str().unwrap()]);
    let j = read_json(&dir.path().join("fig4.json"));
    let row = j["data"][0]["rows"][0].as_array().unwrap();
    let cols = j["data"][0]["columns"].as_array().unwrap();
    let col = |name: &str| row[cols.iter().position(|c| c == name).unwrap()].as_f64().unwrap();
    // Cauchy interlacing against the diagonal block, whose spectrum lies in the symbol range.
    assert!(col("gram_min") <= col("block_min") + 1e-9);
    assert!(col("gram_max") >= col("block_max") - 1e-9);
    assert!(col("block_min") >= col("symbol_min") - 1e-9);
    assert!(col("block_max") <= col("symbol_max") + 1e-9);

    ok(&["figure", "--figure", "5", "--n-list", "33,65", "--format", "json", "--out", dir.path().to_str().unwrap()]);
    let j = read_json(&dir.path().join("fig5.json"));
    assert_eq!(j["metadata"]["s1"].as_array().unwrap().len(), 2);
    assert_eq!(j["data"][0]["rows"].as_array().unwrap().len(), 33 + 65);
}

#[test]
fn invalid_input_exits_2() {
    for args in [
        &["gram", "--a", "0.5", "--b", "2"][..],
        &["gram", "--n", "4"],
        &["symbol", "--grid", "10"],
        &["symbol", "--order", "0"],
        &["figure"],
        &["figure", "--figure", "9"],
        &["decay", "--ell-range", "0..4"],
        &["symbol", "--tol", "-1"],
    ] {
        let out = splinegram(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn unwritable_output_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("missing").join("x.csv");
    let out = splinegram(&["symbol", "--grid", "64", "--out", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}
