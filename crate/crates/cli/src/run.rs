//! Executes a [`RunConfig`] and renders its CSV.

use std::io::Write;
use std::path::Path;
use std::sync::Arc;

use casimir_core::{
    default_entropy_step, entropy, eps_imag_axis, free_energy, impedance_imag_axis, kk_transform, matched_impedance,
    n0_term_coefficients, nernst_fit, prescription_comparison_with, pressure, reflection_for, temperature_correction,
    zero_t_energy, CasimirError, ComparisonMethod, ComparisonRow, Frequency, N0Prescription, OpticalTable,
    ResponseModel, CONSTANTS,
};
use rayon::prelude::*;

use crate::config::{join_quoted, Command, ModelKind, RunConfig, ARGS_PREFIX};
use crate::error::CliError;
use crate::output::{Cell, Table, STATUS_FAILED, STATUS_OK};
use crate::table::ingest_optical_table;

/// Everything a run produces, before anything is written.
#[derive(Debug, Clone, PartialEq)]
pub struct Rendered {
    pub csv: String,
    pub svg: Option<String>,
    /// Human-oriented diagnostics (stderr).
    pub notes: Vec<String>,
    pub failed_rows: usize,
}

impl Rendered {
    pub fn exit_code(&self) -> i32 {
        if self.failed_rows > 0 {
            2
        } else {
            0
        }
    }
}

fn build_model(kind: ModelKind, config: &RunConfig, table: Option<Arc<OpticalTable>>) -> ResponseModel {
    let p = config.params;
    match kind {
        ModelKind::Ideal => ResponseModel::IdealMetal,
        ModelKind::Plasma => ResponseModel::Plasma(p),
        ModelKind::Drude => ResponseModel::Drude(p),
        ModelKind::Tabulated => ResponseModel::Tabulated(table.expect("table ingested before use")),
        ModelKind::NormalSkin => ResponseModel::ImpedanceNormalSkin(p),
        ModelKind::AnomalousSkin => ResponseModel::ImpedanceAnomalousSkin(p),
        ModelKind::Infrared => ResponseModel::ImpedanceInfrared(p),
        ModelKind::Matched => {
            ResponseModel::ImpedanceMatched(p, config.breakpoints.expect("matched model has breakpoints"))
        }
    }
}

fn fmt_prescription(p: N0Prescription) -> String {
    match p {
        N0Prescription::PlasmaLike { omega_p } => format!("plasma (omega_p = {omega_p:e} rad/s)"),
        other => other.label().to_string(),
    }
}

fn preamble(config: &RunConfig, model: Option<&ResponseModel>) -> Vec<String> {
    let mut lines = vec![
        format!("casimir {}", env!("CARGO_PKG_VERSION")),
        format!("{}{}", ARGS_PREFIX.trim_start_matches("# "), join_quoted(&config.canonical_args())),
        format!("command: {}", config.command.name()),
    ];
    match model {
        Some(m) => lines.push(format!("model: {}", m.name())),
        None if config.command == Command::Compare => {
            lines.push(format!("methods: {}", ComparisonMethod::ALL.map(|m| m.label()).join(" ")))
        }
        None => {}
    }
    let p = &config.params;
    if model.is_none_or(|m| m.params().is_some()) {
        lines.push(format!(
            "material: omega_p = {:e} rad/s, omega_tau = {:e} rad/s, vf_over_c = {:e}, v_prefactor = {:e}",
            p.omega_p, p.omega_tau, p.vf_over_c, p.v_prefactor
        ));
    }
    if let Some(b) = &config.breakpoints {
        lines.push(format!(
            "breakpoints: ns_upper = {:e} rad/s, as_upper = {:e} rad/s",
            b.ns_upper.rad_per_s(),
            b.as_upper.rad_per_s()
        ));
    }
    if let Some(t) = &config.table {
        lines.push(format!("table: {}", t.display()));
    }
    if let Some(m) = model.filter(|_| config.command.uses_prescription()) {
        let requested = config.n0_prescription();
        let resolved = requested.resolve(m).map(fmt_prescription).unwrap_or_else(|e| e.to_string());
        lines.push(format!("n0 prescription: {} -> {}", requested.label(), resolved));
    }
    if config.command.integrates() {
        let s = &config.settings;
        lines.push(format!(
            "settings: rel_tol = {:e}, abs_tol = {:e}, max_subdivisions = {}, tail_cutoff = {:e}, matsubara_tail_tol = {:e}, max_terms = {}",
            s.rel_tol, s.abs_tol, s.max_subdivisions, s.tail_cutoff, s.matsubara_tail_tol, s.max_terms
        ));
    }
    lines.push(format!(
        "constants: hbar = {:e} J s, c = {:e} m/s, k_B = {:e} J/K",
        CONSTANTS.hbar, CONSTANTS.c, CONSTANTS.k_b
    ));
    lines
}

/// Evaluates `f` at every point in parallel and appends rows in input order.
/// A non-converged point becomes a row of NaNs marked in the status column.
fn evaluate<P, I, F>(table: &mut Table, notes: &mut Vec<String>, points: &[P], inputs: I, f: F) -> Result<(), CliError>
where
    P: Sync,
    I: Fn(&P) -> Vec<Cell>,
    F: Fn(&P) -> casimir_core::Result<Vec<Cell>> + Sync,
{
    let results: Vec<casimir_core::Result<Vec<Cell>>> = points.par_iter().map(&f).collect();
    for (i, (p, r)) in points.iter().zip(results).enumerate() {
        let mut row = inputs(p);
        let n_out = table.columns.len() - row.len() - 1;
        match r {
            Ok(out) => {
                row.extend(out);
                row.push(Cell::text(STATUS_OK));
            }
            Err(e @ CasimirError::Convergence { .. }) => {
                notes.push(format!("row {}: {e}", i + 1));
                row.extend(std::iter::repeat_n(Cell::Num(f64::NAN), n_out));
                row.push(Cell::text(STATUS_FAILED));
            }
            Err(e) => return Err(e.into()),
        }
        table.push(row);
    }
    Ok(())
}

/// Computes the table for `config` without writing anything.
pub fn render(config: &RunConfig) -> Result<Rendered, CliError> {
    let mut notes = Vec::new();
    let optical = match &config.table {
        Some(path) => {
            let t = ingest_optical_table(path)?;
            let (lo, hi) = t.omega_range();
            notes.push(format!("{}: {} rows, omega in [{lo:e}, {hi:e}] rad/s", path.display(), t.len()));
            Some(Arc::new(t))
        }
        None => None,
    };
    let model = config.model.map(|k| build_model(k, config, optical.clone()));
    let presc = config.n0_prescription();
    let s = &config.settings;
    let a_values = config.separations.as_ref().map(|g| g.values()).unwrap_or_default();
    let n = Cell::Num;

    let table = match config.command {
        Command::Energy => {
            let m = model.as_ref().expect("energy has a model");
            let t = config.temperature.expect("validated");
            let mut table = Table::new(
                vec!["a_m", "T_K", "free_energy_J_m2", "n_terms", "quad_error_J_m2", "tail_bound_J_m2", "status"],
                0,
                2,
            );
            evaluate(
                &mut table,
                &mut notes,
                &a_values,
                |&a| vec![n(a), n(t)],
                |&a| {
                    if t == 0.0 {
                        let e = zero_t_energy(a, m, s)?;
                        Ok(vec![n(e.value), Cell::Int(0), n(e.quad_error), n(0.0)])
                    } else {
                        let f = free_energy(a, t, m, presc, s)?;
                        Ok(vec![n(f.value), Cell::Int(f.n_terms), n(f.quad_error), n(f.tail_bound)])
                    }
                },
            )?;
            table
        }
        Command::Pressure => {
            let m = model.as_ref().expect("pressure has a model");
            let t = config.temperature.expect("validated");
            let mut table = Table::new(
                vec![
                    "a_m",
                    "T_K",
                    "pressure_Pa",
                    "pressure_fd_Pa",
                    "discrepancy",
                    "n_terms",
                    "quad_error_Pa",
                    "tail_bound_Pa",
                    "status",
                ],
                0,
                2,
            );
            evaluate(
                &mut table,
                &mut notes,
                &a_values,
                |&a| vec![n(a), n(t)],
                |&a| {
                    let p = pressure(a, t, m, presc, s)?;
                    Ok(vec![
                        n(p.analytic),
                        n(p.finite_difference),
                        n(p.discrepancy),
                        Cell::Int(p.n_terms),
                        n(p.quad_error),
                        n(p.tail_bound),
                    ])
                },
            )?;
            table
        }
        Command::Tempcorr => {
            let m = model.as_ref().expect("tempcorr has a model");
            let t = config.temperature.expect("validated");
            let mut table = Table::new(
                vec![
                    "a_m",
                    "T_K",
                    "delta_f_J_m2",
                    "relative",
                    "free_energy_J_m2",
                    "zero_t_energy_J_m2",
                    "error_J_m2",
                    "status",
                ],
                0,
                2,
            );
            evaluate(
                &mut table,
                &mut notes,
                &a_values,
                |&a| vec![n(a), n(t)],
                |&a| {
                    let c = temperature_correction(a, t, m, presc, s)?;
                    Ok(vec![n(c.delta_f), n(c.relative), n(c.free_energy.value), n(c.zero_t.value), n(c.error())])
                },
            )?;
            table
        }
        Command::Entropy => {
            let m = model.as_ref().expect("entropy has a model");
            let a = a_values[0];
            let temps = config.temperature_grid();
            let mut table = Table::new(
                vec!["a_m", "T_K", "entropy_J_m2K", "stencil_h_K", "richardson_error", "step_warning", "status"],
                1,
                2,
            );
            evaluate(
                &mut table,
                &mut notes,
                &temps,
                |&t| vec![n(a), n(t)],
                |&t| {
                    let h = config.step.unwrap_or_else(|| default_entropy_step(t));
                    let e = entropy(a, t, m, presc, s, h)?;
                    Ok(vec![n(e.s), n(e.stencil_h), n(e.richardson_error), Cell::Bool(e.step_warning)])
                },
            )?;
            table
        }
        Command::Nernst => nernst_table(config, model.as_ref().expect("nernst has a model"), a_values[0], &mut notes)?,
        Command::Compare => compare_table(config, &a_values, &mut notes)?,
        Command::Reflect => {
            let m = model.as_ref().expect("reflect has a model");
            let zetas = config.zetas.as_ref().expect("validated").values();
            let qs = config.qs.as_ref().expect("validated").values();
            let points: Vec<(f64, f64)> = zetas.iter().flat_map(|&z| qs.iter().map(move |&q| (z, q))).collect();
            let mut table = Table::new(vec!["zeta_rads", "q_inv_m", "r_par_sq", "r_perp_sq", "status"], 1, 3);
            table.series_column = Some(0);
            evaluate(
                &mut table,
                &mut notes,
                &points,
                |&(z, q)| vec![n(z), n(q)],
                |&(z, q)| {
                    let r = if z == 0.0 {
                        n0_term_coefficients(presc.resolve(m)?, q)?
                    } else {
                        let zeta = Frequency::new(z)?;
                        let y = (q * q + (z / CONSTANTS.c).powi(2)).sqrt();
                        reflection_for(m.response_at(zeta)?, zeta, y)?
                    };
                    Ok(vec![n(r.r_par_sq), n(r.r_perp_sq)])
                },
            )?;
            table
        }
        Command::Epsilon => {
            let m = model.as_ref().expect("epsilon has a model");
            let zetas = config.zetas.as_ref().expect("validated").values();
            let mut table = Table::new(vec!["zeta_rads", "quantity", "value", "regime", "status"], 0, 2);
            evaluate(
                &mut table,
                &mut notes,
                &zetas,
                |&z| vec![n(z)],
                |&z| {
                    let zeta = Frequency::new(z)?;
                    Ok(match m {
                        ResponseModel::IdealMetal => {
                            vec![Cell::text("epsilon"), n(f64::INFINITY), Cell::text("-")]
                        }
                        ResponseModel::ImpedanceMatched(p, b) => {
                            let mi = matched_impedance(p, b, zeta);
                            vec![Cell::text("impedance"), n(mi.value), Cell::text(mi.regime.label())]
                        }
                        _ if m.is_dielectric() => {
                            vec![Cell::text("epsilon"), n(eps_imag_axis(m, zeta)?), Cell::text("-")]
                        }
                        _ => vec![Cell::text("impedance"), n(impedance_imag_axis(m, zeta)?), Cell::text("-")],
                    })
                },
            )?;
            table
        }
        Command::Kk => {
            let t = optical.as_deref().expect("kk has a table");
            let zetas = config.zetas.as_ref().expect("validated").values();
            let mut table = Table::new(vec!["zeta_rads", "epsilon", "error", "status"], 0, 1);
            evaluate(
                &mut table,
                &mut notes,
                &zetas,
                |&z| vec![n(z)],
                |&z| {
                    let k = kk_transform(t, Frequency::new(z)?)?;
                    Ok(vec![n(k.value), n(k.error)])
                },
            )?;
            table
        }
    };

    let failed_rows =
        table.rows.iter().filter(|r| matches!(r.last(), Some(Cell::Text(s)) if s == STATUS_FAILED)).count();
    let csv = table.to_csv(&preamble(config, model.as_ref()));
    let svg = config
        .svg
        .as_ref()
        .map(|_| table.to_svg(&format!("casimir {}: {}", config.command.name(), table.columns[table.y_column])));
    Ok(Rendered { csv, svg, notes, failed_rows })
}

fn nernst_table(config: &RunConfig, model: &ResponseModel, a: f64, notes: &mut Vec<String>) -> Result<Table, CliError> {
    let temps = config.temperature_grid();
    let presc = config.n0_prescription();
    let results: Vec<_> =
        temps.par_iter().map(|&t| entropy(a, t, model, presc, &config.settings, default_entropy_step(t))).collect();
    let mut entropies = Vec::with_capacity(temps.len());
    let mut failed = vec![false; temps.len()];
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Ok(e) => entropies.push(Some(e)),
            Err(e @ CasimirError::Convergence { .. }) => {
                notes.push(format!("T = {:e} K: {e}", temps[i]));
                failed[i] = true;
                entropies.push(None);
            }
            Err(e) => return Err(e.into()),
        }
    }
    let report = if failed.iter().any(|&f| f) {
        None
    } else {
        Some(nernst_fit(&temps, entropies.iter().map(|e| e.expect("all converged")).collect())?)
    };
    if let Some(r) = &report {
        notes.push(format!(
            "Nernst fit on {} points: intercept {:e} +/- {:e}, {}",
            r.fit_points,
            r.intercept,
            r.intercept_sigma,
            if r.passed { "pass" } else { "FAIL" }
        ));
    }
    let mut table = Table::new(
        vec![
            "a_m",
            "T_K",
            "entropy_J_m2K",
            "richardson_error",
            "in_fit",
            "intercept",
            "intercept_sigma",
            "slope",
            "passed",
            "status",
        ],
        1,
        2,
    );
    let nan = Cell::Num(f64::NAN);
    for (i, &t) in temps.iter().enumerate() {
        let mut row = vec![Cell::Num(a), Cell::Num(t)];
        match &entropies[i] {
            Some(e) => row.extend([Cell::Num(e.s), Cell::Num(e.richardson_error)]),
            None => row.extend([nan.clone(), nan.clone()]),
        }
        match &report {
            Some(r) => row.extend([
                Cell::Bool(i < r.fit_points),
                Cell::Num(r.intercept),
                Cell::Num(r.intercept_sigma),
                Cell::Num(r.slope),
                Cell::Bool(r.passed),
            ]),
            None => row.extend([Cell::Bool(false), nan.clone(), nan.clone(), nan.clone(), Cell::Bool(false)]),
        }
        row.push(Cell::text(if failed[i] { STATUS_FAILED } else { STATUS_OK }));
        table.push(row);
    }
    Ok(table)
}

fn regimes_text(row: &ComparisonRow) -> String {
    if row.regimes.is_empty() {
        return "-".into();
    }
    row.regimes.iter().map(|r| format!("{}:{}-{}", r.regime.label(), r.first_n, r.last_n)).collect::<Vec<_>>().join(";")
}

fn compare_table(config: &RunConfig, a_values: &[f64], notes: &mut Vec<String>) -> Result<Table, CliError> {
    let t = config.temperature.expect("validated");
    let breakpoints = config.breakpoints.expect("compare has breakpoints");
    let mut table = Table::new(
        vec![
            "a_m",
            "method",
            "omega_c_rads",
            "model",
            "prescription",
            "delta_f_J_m2",
            "relative",
            "free_energy_J_m2",
            "zero_t_energy_J_m2",
            "error_J_m2",
            "n_terms",
            "regimes",
            "status",
        ],
        0,
        6,
    );
    table.series_column = Some(1);
    let results: Vec<_> = a_values
        .par_iter()
        .map(|&a| prescription_comparison_with(&[a], t, &config.params, breakpoints, &config.settings))
        .collect();
    for (&a, r) in a_values.iter().zip(results) {
        match r {
            Ok(rows) => {
                for row in rows {
                    let c = &row.correction;
                    table.push(vec![
                        Cell::Num(row.a),
                        Cell::text(row.method.label()),
                        Cell::Num(row.omega_c.rad_per_s()),
                        Cell::text(row.model.name()),
                        Cell::text(row.prescription.label()),
                        Cell::Num(c.delta_f),
                        Cell::Num(c.relative),
                        Cell::Num(c.free_energy.value),
                        Cell::Num(c.zero_t.value),
                        Cell::Num(c.error()),
                        Cell::Int(c.free_energy.n_terms),
                        Cell::text(regimes_text(&row)),
                        Cell::text(STATUS_OK),
                    ]);
                }
            }
            Err(e @ CasimirError::Convergence { .. }) => {
                notes.push(format!("a = {a:e} m: {e}"));
                let omega_c = CONSTANTS.c / (2.0 * a);
                for m in ComparisonMethod::ALL {
                    let mut row = vec![Cell::Num(a), Cell::text(m.label()), Cell::Num(omega_c)];
                    row.extend([Cell::text("-"), Cell::text("-")]);
                    row.extend(std::iter::repeat_n(Cell::Num(f64::NAN), 5));
                    row.extend([Cell::Int(0), Cell::text("-"), Cell::text(STATUS_FAILED)]);
                    table.push(row);
                }
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok(table)
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

/// Renders and writes the CSV (stdout when no output path) and the optional SVG.
pub fn run(config: &RunConfig) -> Result<Rendered, CliError> {
    let rendered = render(config)?;
    match &config.output {
        Some(path) => write_file(path, &rendered.csv)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(rendered.csv.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|source| CliError::Io { path: "<stdout>".into(), source })?;
        }
    }
    if let (Some(path), Some(svg)) = (&config.svg, &rendered.svg) {
        write_file(path, svg)?;
    }
    Ok(rendered)
}
