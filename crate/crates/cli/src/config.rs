//! Argument parsing and validation into a fully resolved [`RunConfig`].

use std::ffi::OsString;
use std::path::PathBuf;

use casimir_core::{ev_to_radsec, Frequency, MaterialParams, N0Prescription, QuadratureSettings, RegimeBreakpoints};
use clap::{Parser, ValueEnum};

use crate::error::CliError;

/// Gold-like defaults used when a material flag is not given.
pub const DEFAULT_WP_EV: f64 = 9.0;
pub const DEFAULT_WT_EV: f64 = 0.035;
pub const DEFAULT_VF_OVER_C: f64 = 4.67e-3;

/// Default temperature grid of the `nernst` command, K.
pub const DEFAULT_NERNST_GRID: [f64; 6] = [1.0, 2.0, 5.0, 10.0, 20.0, 50.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Free energy per area (T = 0 gives the zero-temperature energy).
    Energy,
    Pressure,
    /// F(a, T) − E(a).
    Tempcorr,
    Entropy,
    Nernst,
    /// Fixed-infrared, matched, Drude and plasma side by side.
    Compare,
    /// Squared reflection coefficients.
    Reflect,
    /// ε(iζ) or Z(iζ) of the chosen model.
    Epsilon,
    /// ε(iζ) of an optical table.
    Kk,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelKind {
    Ideal,
    Plasma,
    Drude,
    Tabulated,
    NormalSkin,
    AnomalousSkin,
    Infrared,
    Matched,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PrescriptionKind {
    Auto,
    Drude,
    Plasma,
    Ideal,
}

fn value_name<T: ValueEnum>(v: &T) -> String {
    v.to_possible_value().map(|p| p.get_name().to_string()).unwrap_or_default()
}

/// Values given as `x1,x2,...` or `start:stop:count`.
#[derive(Debug, Clone, PartialEq)]
pub enum Grid {
    List(Vec<f64>),
    Range { start: f64, stop: f64, count: usize, geometric: bool },
}

impl Grid {
    pub fn parse(text: &str, geometric: bool) -> Result<Grid, String> {
        let num = |s: &str| s.trim().parse::<f64>().map_err(|_| format!("`{s}` is not a number"));
        if text.contains(':') {
            let parts: Vec<&str> = text.split(':').collect();
            if parts.len() != 3 {
                return Err(format!("`{text}`: expected start:stop:count"));
            }
            let (start, stop) = (num(parts[0])?, num(parts[1])?);
            let count: usize = parts[2].trim().parse().map_err(|_| format!("`{}` is not a point count", parts[2]))?;
            if count == 0 {
                return Err(format!("`{text}`: count must be at least 1"));
            }
            if !(start.is_finite() && stop.is_finite()) || stop < start {
                return Err(format!("`{text}`: need finite start <= stop"));
            }
            if geometric && !(start > 0.0) {
                return Err(format!("`{text}`: geometric range needs start > 0"));
            }
            Ok(Grid::Range { start, stop, count, geometric })
        } else {
            let values = text.split(',').map(num).collect::<Result<Vec<_>, _>>()?;
            if values.iter().any(|v| !v.is_finite()) {
                return Err(format!("`{text}`: values must be finite"));
            }
            Ok(Grid::List(values))
        }
    }

    pub fn values(&self) -> Vec<f64> {
        match *self {
            Grid::List(ref v) => v.clone(),
            Grid::Range { start, count: 1, .. } => vec![start],
            Grid::Range { start, stop, count, geometric } => (0..count)
                .map(|i| {
                    let f = i as f64 / (count - 1) as f64;
                    if i == count - 1 {
                        stop
                    } else if geometric {
                        start * (stop / start).powf(f)
                    } else {
                        start + (stop - start) * f
                    }
                })
                .collect(),
        }
    }

    fn canonical(&self) -> String {
        match self {
            Grid::List(v) => v.iter().map(|x| format!("{x:e}")).collect::<Vec<_>>().join(","),
            Grid::Range { start, stop, count, .. } => format!("{start:e}:{stop:e}:{count}"),
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "casimir",
    version,
    about = "Thermal Casimir free energy, pressure and entropy between two metal plates"
)]
struct Args {
    #[arg(value_enum)]
    command: Command,
    #[arg(long, value_enum)]
    model: Option<ModelKind>,
    /// Zero-frequency (n = 0) reflection prescription.
    #[arg(long, value_enum)]
    prescription: Option<PrescriptionKind>,
    /// Optical table: two columns ω (rad/s) and ε″, `#` comments.
    #[arg(long, value_name = "PATH")]
    table: Option<PathBuf>,
    #[arg(long, value_name = "EV")]
    wp_ev: Option<f64>,
    #[arg(long, value_name = "RAD_PER_S")]
    wp_rads: Option<f64>,
    #[arg(long, value_name = "EV")]
    wt_ev: Option<f64>,
    #[arg(long, value_name = "RAD_PER_S")]
    wt_rads: Option<f64>,
    #[arg(long)]
    vf_over_c: Option<f64>,
    /// Dimensionless prefactor of the anomalous-skin impedance velocity.
    #[arg(long)]
    v_prefactor: Option<f64>,
    /// Upper edge of the normal-skin band (default ωτ).
    #[arg(long, value_name = "RAD_PER_S")]
    ns_upper_rads: Option<f64>,
    /// Upper edge of the anomalous-skin band (default v_F ωp / c).
    #[arg(long, value_name = "RAD_PER_S")]
    as_upper_rads: Option<f64>,
    /// Separations in m: list or geometric start:stop:count.
    #[arg(long, value_name = "GRID")]
    a: Option<String>,
    #[arg(long = "T", value_name = "K")]
    temperature: Option<f64>,
    /// Temperatures in K: list or linear start:stop:count.
    #[arg(long = "T-grid", value_name = "GRID")]
    t_grid: Option<String>,
    /// Imaginary frequencies in rad/s: list or geometric start:stop:count.
    #[arg(long, value_name = "GRID")]
    zeta_range: Option<String>,
    /// In-plane wave vectors in 1/m: list or geometric start:stop:count.
    #[arg(long, value_name = "GRID")]
    q_range: Option<String>,
    /// Entropy stencil step in K.
    #[arg(long, value_name = "K")]
    step: Option<f64>,
    #[arg(long)]
    rel_tol: Option<f64>,
    #[arg(long)]
    abs_tol: Option<f64>,
    #[arg(long)]
    max_subdivisions: Option<usize>,
    #[arg(long)]
    tail_cutoff: Option<f64>,
    #[arg(long)]
    matsubara_tail_tol: Option<f64>,
    #[arg(long)]
    max_terms: Option<u64>,
    /// CSV destination (stdout when absent).
    #[arg(short, long, value_name = "PATH")]
    output: Option<PathBuf>,
    /// Also write a line plot of the primary column.
    #[arg(long, value_name = "PATH")]
    svg: Option<PathBuf>,
}

const MATERIAL: [&str; 10] = [
    "--wp-ev",
    "--wp-rads",
    "--wt-ev",
    "--wt-rads",
    "--vf-over-c",
    "--v-prefactor",
    "--ns-upper-rads",
    "--as-upper-rads",
    "--model",
    "--table",
];
const TOLERANCES: [&str; 6] =
    ["--rel-tol", "--abs-tol", "--max-subdivisions", "--tail-cutoff", "--matsubara-tail-tol", "--max-terms"];

impl Args {
    fn given(&self) -> Vec<&'static str> {
        let flags: [(&'static str, bool); 23] = [
            ("--model", self.model.is_some()),
            ("--prescription", self.prescription.is_some()),
            ("--table", self.table.is_some()),
            ("--wp-ev", self.wp_ev.is_some()),
            ("--wp-rads", self.wp_rads.is_some()),
            ("--wt-ev", self.wt_ev.is_some()),
            ("--wt-rads", self.wt_rads.is_some()),
            ("--vf-over-c", self.vf_over_c.is_some()),
            ("--v-prefactor", self.v_prefactor.is_some()),
            ("--ns-upper-rads", self.ns_upper_rads.is_some()),
            ("--as-upper-rads", self.as_upper_rads.is_some()),
            ("--a", self.a.is_some()),
            ("--T", self.temperature.is_some()),
            ("--T-grid", self.t_grid.is_some()),
            ("--zeta-range", self.zeta_range.is_some()),
            ("--q-range", self.q_range.is_some()),
            ("--step", self.step.is_some()),
            ("--rel-tol", self.rel_tol.is_some()),
            ("--abs-tol", self.abs_tol.is_some()),
            ("--max-subdivisions", self.max_subdivisions.is_some()),
            ("--tail-cutoff", self.tail_cutoff.is_some()),
            ("--matsubara-tail-tol", self.matsubara_tail_tol.is_some()),
            ("--max-terms", self.max_terms.is_some()),
        ];
        flags.iter().filter(|f| f.1).map(|f| f.0).collect()
    }
}

impl Command {
    pub fn name(self) -> String {
        value_name(&self)
    }

    fn accepts(self, flag: &str) -> bool {
        use Command::*;
        let model = MATERIAL.contains(&flag);
        let tol = TOLERANCES.contains(&flag);
        match self {
            Energy | Pressure | Tempcorr => model || tol || matches!(flag, "--prescription" | "--a" | "--T"),
            Entropy => model || tol || matches!(flag, "--prescription" | "--a" | "--T-grid" | "--step"),
            Nernst => model || tol || matches!(flag, "--prescription" | "--a" | "--T-grid"),
            Compare => (model && !matches!(flag, "--model" | "--table")) || tol || matches!(flag, "--a" | "--T"),
            Reflect => model || matches!(flag, "--prescription" | "--zeta-range" | "--q-range"),
            Epsilon => model || flag == "--zeta-range",
            Kk => matches!(flag, "--table" | "--zeta-range"),
        }
    }

    pub fn integrates(self) -> bool {
        !matches!(self, Command::Reflect | Command::Epsilon | Command::Kk)
    }

    pub fn uses_prescription(self) -> bool {
        !matches!(self, Command::Compare | Command::Epsilon | Command::Kk)
    }
}

/// Material flags that carry meaning for a model (`None` means the comparison set).
fn material_flags(model: Option<ModelKind>) -> &'static [&'static str] {
    use ModelKind::*;
    match model {
        Some(Ideal) | Some(Tabulated) => &[],
        Some(Plasma) | Some(Infrared) => &["--wp"],
        Some(Drude) | Some(NormalSkin) => &["--wp", "--wt"],
        Some(AnomalousSkin) => &["--wp", "--vf-over-c", "--v-prefactor"],
        Some(Matched) | None => &["--wp", "--wt", "--vf-over-c", "--v-prefactor", "--ns-upper-rads", "--as-upper-rads"],
    }
}

/// A validated invocation; every default has been filled in.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    /// `None` for `compare`, which runs a fixed set of models.
    pub model: Option<ModelKind>,
    pub prescription: PrescriptionKind,
    pub params: MaterialParams,
    /// Set for the matched model and for `compare`.
    pub breakpoints: Option<RegimeBreakpoints>,
    pub table: Option<PathBuf>,
    /// ωp given explicitly alongside a model that does not carry it.
    pub extra_omega_p: bool,
    pub separations: Option<Grid>,
    pub temperature: Option<f64>,
    pub temperatures: Option<Grid>,
    pub zetas: Option<Grid>,
    pub qs: Option<Grid>,
    pub step: Option<f64>,
    pub settings: QuadratureSettings,
    pub output: Option<PathBuf>,
    pub svg: Option<PathBuf>,
}

fn pick(ev: Option<f64>, rads: Option<f64>, default_ev: f64, names: (&str, &str)) -> Result<f64, CliError> {
    match (ev, rads) {
        (Some(_), Some(_)) => Err(CliError::usage(format!("{} conflicts with {}", names.0, names.1))),
        (None, Some(w)) => Ok(w),
        (e, None) => Ok(ev_to_radsec(e.unwrap_or(default_ev))
            .map_err(|err| CliError::usage(format!("{}: {err}", names.0)))?
            .rad_per_s()),
    }
}

fn grid(flag: &str, text: &Option<String>, geometric: bool) -> Result<Option<Grid>, CliError> {
    text.as_deref().map(|t| Grid::parse(t, geometric).map_err(|e| CliError::usage(format!("{flag}: {e}")))).transpose()
}

fn require<T>(value: Option<T>, flag: &str, command: Command) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::usage(format!("`{}` requires {flag}", command.name())))
}

/// Parses `argv` (program name first) into a validated configuration.
pub fn parse_and_validate<I, T>(argv: I) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = Args::try_parse_from(argv).map_err(|e| match e.kind() {
        clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => CliError::Help(e.to_string()),
        _ => CliError::Usage(e.to_string().trim_end().trim_start_matches("error: ").to_string()),
    })?;
    let command = args.command;

    for flag in args.given() {
        if !command.accepts(flag) {
            return Err(CliError::usage(format!("{flag} is not accepted by `{}`", command.name())));
        }
    }

    let model = match command {
        Command::Compare => None,
        Command::Kk => {
            if let Some(m) = args.model.filter(|&m| m != ModelKind::Tabulated) {
                return Err(CliError::usage(format!("`kk` works on --table, not --model {}", value_name(&m))));
            }
            Some(ModelKind::Tabulated)
        }
        _ => Some(require(args.model, "--model", command)?),
    };
    let prescription = args.prescription.unwrap_or(PrescriptionKind::Auto);

    if model == Some(ModelKind::Tabulated) {
        if args.table.is_none() {
            return Err(CliError::usage("--model tabulated requires --table"));
        }
    } else if args.table.is_some() {
        return Err(CliError::usage(format!(
            "--table conflicts with --model {}",
            model.map(|m| value_name(&m)).unwrap_or_default()
        )));
    }

    let relevant = material_flags(model);
    let plasma_n0 = command.uses_prescription() && prescription == PrescriptionKind::Plasma;
    let wp_given = args.wp_ev.is_some() || args.wp_rads.is_some();
    let extra_omega_p = plasma_n0 && !relevant.contains(&"--wp");
    for flag in args.given() {
        let family = match flag {
            "--wp-ev" | "--wp-rads" => "--wp",
            "--wt-ev" | "--wt-rads" => "--wt",
            f => f,
        };
        let is_material = MATERIAL.contains(&flag) && !matches!(flag, "--model" | "--table");
        let allowed = relevant.contains(&family) || (family == "--wp" && extra_omega_p);
        if is_material && !allowed {
            let context = match model {
                Some(m) => format!("--model {}", value_name(&m)),
                None => format!("`{}`", command.name()),
            };
            return Err(CliError::usage(format!("{flag} is meaningless for {context}")));
        }
    }
    if extra_omega_p && !wp_given {
        return Err(CliError::usage(format!(
            "--prescription plasma with --model {} requires --wp-ev or --wp-rads",
            model.map(|m| value_name(&m)).unwrap_or_default()
        )));
    }
    if command.uses_prescription() && model == Some(ModelKind::Tabulated) && prescription == PrescriptionKind::Auto {
        return Err(CliError::usage("--model tabulated requires an explicit --prescription (drude, plasma or ideal)"));
    }

    let wp = pick(args.wp_ev, args.wp_rads, DEFAULT_WP_EV, ("--wp-ev", "--wp-rads"))?;
    let wt = pick(args.wt_ev, args.wt_rads, DEFAULT_WT_EV, ("--wt-ev", "--wt-rads"))?;
    let params = MaterialParams::new(wp, wt, args.vf_over_c.unwrap_or(DEFAULT_VF_OVER_C))
        .and_then(|p| p.with_v_prefactor(args.v_prefactor.unwrap_or(1.0)))
        .map_err(|e| CliError::usage(format!("material parameters: {e}")))?;

    let breakpoints = if matches!(model, None | Some(ModelKind::Matched)) {
        let mut b = RegimeBreakpoints::default_for(&params);
        let freq = |flag: &str, w: f64| Frequency::new(w).map_err(|e| CliError::usage(format!("{flag}: {e}")));
        if let Some(w) = args.ns_upper_rads {
            b.ns_upper = freq("--ns-upper-rads", w)?;
        }
        if let Some(w) = args.as_upper_rads {
            b.as_upper = freq("--as-upper-rads", w)?;
        }
        b.validate().map_err(|e| CliError::usage(format!("regime breakpoints: {e}")))?;
        Some(b)
    } else {
        None
    };

    let mut settings = QuadratureSettings::default();
    if let Some(v) = args.rel_tol {
        settings.rel_tol = v;
    }
    if let Some(v) = args.abs_tol {
        settings.abs_tol = v;
    }
    if let Some(v) = args.max_subdivisions {
        settings.max_subdivisions = v;
    }
    if let Some(v) = args.tail_cutoff {
        settings.tail_cutoff = v;
    }
    if let Some(v) = args.matsubara_tail_tol {
        settings.matsubara_tail_tol = v;
    }
    if let Some(v) = args.max_terms {
        settings.max_terms = v;
    }
    settings.validate().map_err(|e| CliError::usage(format!("tolerances: {e}")))?;

    let separations = grid("--a", &args.a, true)?;
    let temperatures = grid("--T-grid", &args.t_grid, false)?;
    let zetas = grid("--zeta-range", &args.zeta_range, true)?;
    let qs = grid("--q-range", &args.q_range, true)?;

    let config = RunConfig {
        command,
        model,
        prescription,
        params,
        breakpoints,
        table: args.table,
        extra_omega_p,
        separations,
        temperature: args.temperature,
        temperatures,
        zetas,
        qs,
        step: args.step,
        settings,
        output: args.output,
        svg: args.svg,
    };
    config.check_required()?;
    Ok(config)
}

impl RunConfig {
    fn check_required(&self) -> Result<(), CliError> {
        use Command::*;
        let cmd = self.command;
        let positive = |flag: &str, values: &[f64], allow_zero: bool| {
            if values.is_empty() {
                return Err(CliError::usage(format!("{flag}: no values")));
            }
            match values.iter().find(|&&v| !(v > 0.0 || (allow_zero && v == 0.0))) {
                Some(v) => Err(CliError::usage(format!(
                    "{flag}: {v:e} is out of range (must be {})",
                    if allow_zero { ">= 0" } else { "> 0" }
                ))),
                None => Ok(()),
            }
        };
        if matches!(cmd, Energy | Pressure | Tempcorr | Entropy | Nernst | Compare) {
            let a = require(self.separations.as_ref(), "--a", cmd)?.values();
            positive("--a", &a, false)?;
            if matches!(cmd, Entropy | Nernst) && a.len() != 1 {
                return Err(CliError::usage(format!("`{}` takes a single --a value", cmd.name())));
            }
        }
        if matches!(cmd, Energy | Pressure | Tempcorr | Compare) {
            let t = require(self.temperature, "--T", cmd)?;
            positive("--T", &[t], cmd == Energy)?;
        }
        if cmd == Entropy || cmd == Nernst {
            let temps = match (&self.temperatures, cmd) {
                (Some(g), _) => g.values(),
                (None, Nernst) => DEFAULT_NERNST_GRID.to_vec(),
                (None, _) => return Err(CliError::usage("`entropy` requires --T-grid")),
            };
            positive("--T-grid", &temps, false)?;
            if let Some(h) = self.step {
                if let Some(t) = temps.iter().find(|&&t| !(h > 0.0 && t - 2.0 * h > 0.0)) {
                    return Err(CliError::usage(format!("--step {h:e} needs T - 2*step > 0 (fails at T = {t:e})")));
                }
            }
            if cmd == Nernst {
                if temps.len() < 4 {
                    return Err(CliError::usage("--T-grid: the Nernst check needs at least 4 temperatures"));
                }
                if temps.windows(2).any(|w| !(w[1] > w[0])) {
                    return Err(CliError::usage("--T-grid: temperatures must be strictly ascending"));
                }
            }
        }
        if matches!(cmd, Reflect | Epsilon | Kk) {
            let z = require(self.zetas.as_ref(), "--zeta-range", cmd)?.values();
            positive("--zeta-range", &z, cmd == Reflect)?;
        }
        if cmd == Reflect {
            let q = require(self.qs.as_ref(), "--q-range", cmd)?.values();
            positive("--q-range", &q, false)?;
        }
        Ok(())
    }

    /// The n = 0 prescription with Auto left for the core to resolve.
    pub fn n0_prescription(&self) -> N0Prescription {
        match self.prescription {
            PrescriptionKind::Auto => N0Prescription::Auto,
            PrescriptionKind::Drude => N0Prescription::DrudeLimit,
            PrescriptionKind::Plasma => N0Prescription::PlasmaLike { omega_p: self.params.omega_p },
            PrescriptionKind::Ideal => N0Prescription::IdealLike,
        }
    }

    /// Temperatures for `entropy` and `nernst`.
    pub fn temperature_grid(&self) -> Vec<f64> {
        match &self.temperatures {
            Some(g) => g.values(),
            None => DEFAULT_NERNST_GRID.to_vec(),
        }
    }

    /// Canonical argument list (without the program name, output and svg paths).
    pub fn canonical_args(&self) -> Vec<String> {
        let mut out = vec![self.command.name()];
        let mut push = |flag: &str, value: String| {
            out.push(flag.to_string());
            out.push(value);
        };
        if let Some(m) = self.model.filter(|_| self.command != Command::Kk) {
            push("--model", value_name(&m));
        }
        if let Some(t) = &self.table {
            push("--table", t.to_string_lossy().into_owned());
        }
        let relevant = material_flags(self.model);
        if relevant.contains(&"--wp") || self.extra_omega_p {
            push("--wp-rads", format!("{:e}", self.params.omega_p));
        }
        if relevant.contains(&"--wt") {
            push("--wt-rads", format!("{:e}", self.params.omega_tau));
        }
        if relevant.contains(&"--vf-over-c") {
            push("--vf-over-c", format!("{:e}", self.params.vf_over_c));
            push("--v-prefactor", format!("{:e}", self.params.v_prefactor));
        }
        if let Some(b) = &self.breakpoints {
            push("--ns-upper-rads", format!("{:e}", b.ns_upper.rad_per_s()));
            push("--as-upper-rads", format!("{:e}", b.as_upper.rad_per_s()));
        }
        if self.command.uses_prescription() {
            push("--prescription", value_name(&self.prescription));
        }
        if let Some(g) = &self.separations {
            push("--a", g.canonical());
        }
        if let Some(t) = self.temperature {
            push("--T", format!("{t:e}"));
        }
        if let Some(g) = &self.temperatures {
            push("--T-grid", g.canonical());
        }
        if let Some(g) = &self.zetas {
            push("--zeta-range", g.canonical());
        }
        if let Some(g) = &self.qs {
            push("--q-range", g.canonical());
        }
        if let Some(h) = self.step {
            push("--step", format!("{h:e}"));
        }
        if self.command.integrates() {
            let s = &self.settings;
            push("--rel-tol", format!("{:e}", s.rel_tol));
            push("--abs-tol", format!("{:e}", s.abs_tol));
            push("--max-subdivisions", s.max_subdivisions.to_string());
            push("--tail-cutoff", format!("{:e}", s.tail_cutoff));
            push("--matsubara-tail-tol", format!("{:e}", s.matsubara_tail_tol));
            push("--max-terms", s.max_terms.to_string());
        }
        out
    }

    /// Rebuilds a configuration from the `# args:` line of a CSV preamble.
    pub fn from_preamble(csv: &str) -> Result<RunConfig, CliError> {
        let line = csv
            .lines()
            .take_while(|l| l.starts_with('#'))
            .find_map(|l| l.strip_prefix(ARGS_PREFIX))
            .ok_or_else(|| CliError::usage("no `# args:` line in preamble"))?;
        let args = split_quoted(line).map_err(CliError::usage)?;
        parse_and_validate(std::iter::once("casimir".to_string()).chain(args))
    }
}

pub(crate) const ARGS_PREFIX: &str = "# args: ";

/// Joins arguments with spaces, double-quoting any that need it.
pub fn join_quoted(args: &[String]) -> String {
    args.iter()
        .map(|a| {
            if !a.is_empty() && !a.chars().any(|c| c.is_whitespace() || c == '"' || c == '\\') {
                a.clone()
            } else {
                let mut q = String::from('"');
                for c in a.chars() {
                    if c == '"' || c == '\\' {
                        q.push('\\');
                    }
                    q.push(c);
                }
                q.push('"');
                q
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// Inverse of [`join_quoted`].
pub fn split_quoted(line: &str) -> Result<Vec<String>, String> {
    let mut out = Vec::new();
    let mut chars = line.chars().peekable();
    loop {
        while chars.peek().is_some_and(|c| c.is_whitespace()) {
            chars.next();
        }
        let Some(&first) = chars.peek() else { break };
        let mut arg = String::new();
        if first == '"' {
            chars.next();
            loop {
                match chars.next() {
                    Some('\\') => arg.push(chars.next().ok_or("dangling escape")?),
                    Some('"') => break,
                    Some(c) => arg.push(c),
                    None => return Err("unterminated quote".into()),
                }
            }
        } else {
            while let Some(&c) = chars.peek() {
                if c.is_whitespace() {
                    break;
                }
                arg.push(c);
                chars.next();
            }
        }
        out.push(arg);
    }
    Ok(out)
}
