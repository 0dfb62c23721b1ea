use std::path::Path;
use std::process::{Command, Output};

use casimir_cli::{render, RunConfig};
use tempfile::TempDir;

fn casimir(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_casimir")).args(args).output().expect("spawn casimir")
}

fn casimir_env(args: &[&str], threads: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_casimir"))
        .args(args)
        .env("CASIMIR_THREADS", threads)
        .output()
        .expect("spawn casimir")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// Header plus data rows of a CSV, preamble removed.
fn records(csv: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = csv.lines().filter(|l| !l.starts_with('#'));
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(String::from).collect()).collect();
    (header, rows)
}

fn column(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"))
}

fn drude_table(dir: &Path, rows: usize) -> std::path::PathBuf {
    let (wp, wt) = (1.3673407039285594e16, 5.3174360708332875e13);
    let mut text = String::from("# omega [rad/s]   eps2\n");
    for i in 0..rows {
        let w = 1e11 * (1e7f64).powf(i as f64 / (rows - 1) as f64);
        let e2 = wp * wp * wt / (w * (w * w + wt * wt));
        text.push_str(&format!("{w:.15e} {e2:.15e}\n"));
    }
    let path = dir.join("drude.dat");
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn energy_happy_path() {
    let o = casimir(&["energy", "--model", "drude", "--wp-ev", "9.0", "--wt-ev", "0.035", "--a", "1e-6", "--T", "300"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let (header, rows) = records(&stdout(&o));
    assert_eq!(header.last().unwrap(), "status");
    assert_eq!(rows.len(), 1);
    let f: f64 = rows[0][column(&header, "free_energy_J_m2")].parse().unwrap();
    assert!(f < 0.0);
}

#[test]
fn omega_p_with_ideal_metal_is_usage_error() {
    let o = casimir(&["energy", "--model", "ideal", "--wp-ev", "9.0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("--wp-ev is meaningless for --model ideal"), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
}

#[test]
fn unknown_flag_is_usage_error() {
    let o = casimir(&["energy", "--model", "drude", "--bogus", "1"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn kk_reproduces_drude_continuation() {
    let dir = TempDir::new().unwrap();
    let table = drude_table(dir.path(), 200);
    let o = casimir(&["kk", "--table", table.to_str().unwrap(), "--zeta-range", "1e13:1e16:50"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stderr(&o).contains("200 rows"), "{}", stderr(&o));
    let (header, rows) = records(&stdout(&o));
    assert_eq!(rows.len(), 50);
    let (wp, wt) = (1.3673407039285594e16, 5.3174360708332875e13);
    for row in rows {
        let z: f64 = row[column(&header, "zeta_rads")].parse().unwrap();
        let eps: f64 = row[column(&header, "epsilon")].parse().unwrap();
        let exact = 1.0 + wp * wp / (z * (z + wt));
        assert!(((eps - exact) / exact).abs() < 2e-3, "zeta={z:e}: {eps} vs {exact}");
    }
}

#[test]
fn table_errors_cite_line_numbers() {
    let dir = TempDir::new().unwrap();
    let good = drude_table(dir.path(), 30);
    let mut lines: Vec<String> = std::fs::read_to_string(&good).unwrap().lines().map(String::from).collect();
    // File line 17 is data row 16 after the one comment line.
    lines[16] = "1e10 1.0".into();
    let bad = dir.path().join("bad.dat");
    std::fs::write(&bad, lines.join("\n")).unwrap();
    let o = casimir(&["kk", "--table", bad.to_str().unwrap(), "--zeta-range", "1e14"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("bad.dat:17:"), "{}", stderr(&o));

    let short = dir.path().join("short.dat");
    std::fs::write(&short, "1e12 1\n2e12 1\n3e12 1\n").unwrap();
    let o = casimir(&["kk", "--table", short.to_str().unwrap(), "--zeta-range", "1e14"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("at least 8"), "{}", stderr(&o));
}

#[test]
fn compare_has_four_rows_per_separation() {
    let o = casimir(&["compare", "--a", "1e-7,2e-7,3e-7,4e-7,5e-7", "--T", "300"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let (header, rows) = records(&stdout(&o));
    assert_eq!(rows.len(), 20);
    let methods: Vec<&str> = rows.iter().take(4).map(|r| r[column(&header, "method")].as_str()).collect();
    assert_eq!(methods, ["GKM-recipe", "matched", "drude", "plasma"]);
    for row in &rows {
        let wc: f64 = row[column(&header, "omega_c_rads")].parse().unwrap();
        assert!((2.9e14..=1.51e15).contains(&wc), "{wc:e}");
    }
}

#[test]
fn ideal_entropy_falls_toward_low_temperature() {
    let o = casimir(&["entropy", "--model", "ideal", "--a", "1e-6", "--T-grid", "1:50:10"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let (header, rows) = records(&stdout(&o));
    assert_eq!(rows.len(), 10);
    let s: Vec<f64> = rows.iter().map(|r| r[column(&header, "entropy_J_m2K")].parse::<f64>().unwrap().abs()).collect();
    assert!(s.windows(2).all(|w| w[0] < w[1]), "{s:?}");
}

#[test]
fn rerun_is_byte_identical_across_thread_counts() {
    let dir = TempDir::new().unwrap();
    let args = |out: &str| {
        vec!["tempcorr", "--model", "matched", "--a", "1e-7:1e-6:4", "--T", "300", "-o", out]
            .into_iter()
            .map(String::from)
            .collect::<Vec<_>>()
    };
    let mut outputs = Vec::new();
    for (i, threads) in ["1", "4", "4"].iter().enumerate() {
        let path = dir.path().join(format!("run{i}.csv"));
        let a = args(path.to_str().unwrap());
        let o = casimir_env(&a.iter().map(String::as_str).collect::<Vec<_>>(), threads);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        outputs.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[1], outputs[2]);
}

#[test]
fn preamble_reconstructs_the_run() {
    let dir = TempDir::new().unwrap();
    let table = drude_table(dir.path(), 40);
    let table = table.to_str().unwrap();
    for args in [
        vec!["energy", "--model", "plasma", "--wp-ev", "8.5", "--a", "2e-7,7e-7", "--T", "77"],
        vec!["pressure", "--model", "anomalous-skin", "--a", "5e-7", "--T", "300", "--rel-tol", "1e-9"],
        vec!["reflect", "--model", "infrared", "--zeta-range", "0,1e13", "--q-range", "1e5:1e8:3"],
        vec!["epsilon", "--model", "matched", "--zeta-range", "1e10:1e16:7"],
        vec![
            "energy",
            "--model",
            "tabulated",
            "--table",
            table,
            "--prescription",
            "drude",
            "--a",
            "1e-6",
            "--T",
            "300",
        ],
    ] {
        let o = casimir(&args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stderr(&o));
        let csv = stdout(&o);
        let config = RunConfig::from_preamble(&csv).unwrap();
        assert_eq!(render(&config).unwrap().csv, csv, "{args:?}");
    }
}

#[test]
fn non_convergence_exits_2_with_marked_rows() {
    let o = casimir(&["energy", "--model", "drude", "--a", "1e-7,1e-6", "--T", "300", "--max-terms", "3"]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    let (header, rows) = records(&stdout(&o));
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r[column(&header, "status")] == "nonconverged"));
}

#[test]
fn unwritable_output_is_io_error() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("missing").join("x.csv");
    let o = casimir(&["energy", "--model", "ideal", "--a", "1e-6", "--T", "0", "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("x.csv"), "{}", stderr(&o));
}

#[test]
fn svg_plot_is_written() {
    let dir = TempDir::new().unwrap();
    let svg = dir.path().join("plot.svg");
    let o = casimir(&["compare", "--a", "1e-7,3e-7,5e-7", "--T", "300", "--svg", svg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<svg") && text.matches("<polyline").count() == 4);
}

#[test]
fn bad_thread_count_is_usage_error() {
    let o = casimir_env(&["energy", "--model", "ideal", "--a", "1e-6", "--T", "0"], "many");
    assert_eq!(o.status.code(), Some(1));
}
