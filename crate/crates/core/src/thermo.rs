//! Temperature correction, entropy and the Nernst-theorem check, plus the
//! side-by-side comparison of the fixed-impedance and matched-regime recipes.

use rayon::prelude::*;

use crate::error::{CasimirError, Result};
use crate::lifshitz::{free_energy, zero_t_energy, EnergyEstimate, FreeEnergyResult, QuadratureSettings};
use crate::materials::{ImpedanceRegime, MaterialParams, RegimeBreakpoints, ResponseModel};
use crate::reflection::N0Prescription;
use crate::units::{characteristic_frequency, matsubara_step, Frequency};

/// F(a, T) − E(a).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TemperatureCorrection {
    pub delta_f: f64,
    /// delta_f / |E(a)|.
    pub relative: f64,
    pub free_energy: FreeEnergyResult,
    pub zero_t: EnergyEstimate,
}

impl TemperatureCorrection {
    /// Quadrature plus truncation error carried by `delta_f`.
    pub fn error(&self) -> f64 {
        self.free_energy.quad_error + self.free_energy.tail_bound + self.zero_t.quad_error
    }
}

pub fn temperature_correction(
    a: f64,
    temperature: f64,
    model: &ResponseModel,
    prescription: N0Prescription,
    settings: &QuadratureSettings,
) -> Result<TemperatureCorrection> {
    let f = free_energy(a, temperature, model, prescription, settings)?;
    let e = zero_t_energy(a, model, settings)?;
    let delta_f = f.value - e.value;
    Ok(TemperatureCorrection { delta_f, relative: delta_f / e.value.abs(), free_energy: f, zero_t: e })
}

/// S = −∂F/∂T from a Richardson-extrapolated central difference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyResult {
    /// J/(m²·K).
    pub s: f64,
    pub stencil_h: f64,
    /// |D(h/2) − D(h)| of the two central differences.
    pub richardson_error: f64,
    /// Set when the Richardson error exceeds 10% of |S|.
    pub step_warning: bool,
}

/// `max(0.01 T, 0.5 K)`, reduced to T/4 where that would reach T ≤ 2h.
pub fn default_entropy_step(temperature: f64) -> f64 {
    (0.01 * temperature).max(0.5).min(0.25 * temperature)
}

/// Settings used for the stencil evaluations: the differences are many
/// orders of magnitude below |F|, so tolerances are capped well below the
/// defaults.
pub fn differentiation_settings(settings: &QuadratureSettings) -> QuadratureSettings {
    QuadratureSettings {
        rel_tol: settings.rel_tol.min(1e-12),
        abs_tol: settings.abs_tol.min(1e-40),
        matsubara_tail_tol: settings.matsubara_tail_tol.min(1e-14),
        max_subdivisions: settings.max_subdivisions.max(400),
        ..*settings
    }
}

pub fn entropy(
    a: f64,
    temperature: f64,
    model: &ResponseModel,
    prescription: N0Prescription,
    settings: &QuadratureSettings,
    h: f64,
) -> Result<EntropyResult> {
    if !(h > 0.0) || !(temperature - 2.0 * h > 0.0) {
        return Err(CasimirError::Domain(format!(
            "entropy stencil needs h > 0 and T - 2h > 0 (T = {temperature}, h = {h})"
        )));
    }
    let s = differentiation_settings(settings);
    let offsets = [-h, -0.5 * h, 0.5 * h, h];
    let values: Vec<Result<f64>> =
        offsets.par_iter().map(|d| free_energy(a, temperature + d, model, prescription, &s).map(|r| r.value)).collect();
    let mut f = [0.0; 4];
    for (slot, v) in f.iter_mut().zip(values) {
        *slot = v?;
    }
    let d_h = -(f[3] - f[0]) / (2.0 * h);
    let d_half = -(f[2] - f[1]) / h;
    let extrapolated = (4.0 * d_half - d_h) / 3.0;
    let richardson_error = (d_half - d_h).abs();
    Ok(EntropyResult {
        s: extrapolated,
        stencil_h: h,
        richardson_error,
        step_warning: richardson_error > 0.1 * extrapolated.abs(),
    })
}

/// Entropy on a temperature grid with a linear extrapolation of |S| to T = 0.
#[derive(Debug, Clone, PartialEq)]
pub struct NernstReport {
    pub temperatures: Vec<f64>,
    pub entropies: Vec<EntropyResult>,
    /// Number of lowest grid points used in the fit.
    pub fit_points: usize,
    pub intercept: f64,
    pub intercept_sigma: f64,
    pub slope: f64,
    /// |intercept| ≤ 3 σ.
    pub passed: bool,
}

pub fn nernst_check(
    a: f64,
    model: &ResponseModel,
    prescription: N0Prescription,
    settings: &QuadratureSettings,
    temperatures: &[f64],
) -> Result<NernstReport> {
    check_grid(temperatures)?;
    let entropies: Vec<Result<EntropyResult>> = temperatures
        .par_iter()
        .map(|&t| entropy(a, t, model, prescription, settings, default_entropy_step(t)))
        .collect();
    let entropies = entropies.into_iter().collect::<Result<Vec<_>>>()?;
    nernst_fit(temperatures, entropies)
}

/// Fits |S| against T over the lowest decade of the grid (at least 3 points).
pub fn nernst_fit(temperatures: &[f64], entropies: Vec<EntropyResult>) -> Result<NernstReport> {
    check_grid(temperatures)?;
    if entropies.len() != temperatures.len() {
        return Err(CasimirError::Validation(format!(
            "{} entropies for {} temperatures",
            entropies.len(),
            temperatures.len()
        )));
    }
    let decade = 10.0 * temperatures[0];
    let fit_points = temperatures.iter().filter(|&&t| t <= decade * (1.0 + 1e-12)).count().max(3);
    let xs = &temperatures[..fit_points];
    let ys: Vec<f64> = entropies[..fit_points].iter().map(|e| e.s.abs()).collect();
    let fit = linear_fit(xs, &ys);
    Ok(NernstReport {
        temperatures: temperatures.to_vec(),
        entropies,
        fit_points,
        intercept: fit.intercept,
        intercept_sigma: fit.intercept_sigma,
        slope: fit.slope,
        passed: fit.intercept.abs() <= 3.0 * fit.intercept_sigma,
    })
}

fn check_grid(temperatures: &[f64]) -> Result<()> {
    if temperatures.len() < 4 {
        return Err(CasimirError::Validation(format!(
            "Nernst check needs at least 4 temperatures, got {}",
            temperatures.len()
        )));
    }
    if !(temperatures[0] > 0.0) || temperatures.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(CasimirError::Validation("temperature grid must be positive and ascending".into()));
    }
    Ok(())
}

struct LinearFit {
    intercept: f64,
    slope: f64,
    intercept_sigma: f64,
}

/// Ordinary least squares y = α + βx with the standard error of α.
fn linear_fit(x: &[f64], y: &[f64]) -> LinearFit {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|xi| (xi - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(xi, yi)| (xi - mx) * (yi - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = x.iter().zip(y).map(|(xi, yi)| (yi - intercept - slope * xi).powi(2)).sum();
    let s2 = ssr / (n - 2.0);
    let intercept_sigma = (s2 * (1.0 / n + mx * mx / sxx)).sqrt();
    LinearFit { intercept, slope, intercept_sigma }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ComparisonMethod {
    /// One impedance chosen from ω_c = c/2a and used for every Matsubara term.
    GkmRecipe,
    /// Each term uses the impedance regime containing its own frequency.
    Matched,
    Drude,
    Plasma,
}

impl ComparisonMethod {
    pub const ALL: [ComparisonMethod; 4] =
        [ComparisonMethod::GkmRecipe, ComparisonMethod::Matched, ComparisonMethod::Drude, ComparisonMethod::Plasma];

    pub fn label(self) -> &'static str {
        match self {
            ComparisonMethod::GkmRecipe => "GKM-recipe",
            ComparisonMethod::Matched => "matched",
            ComparisonMethod::Drude => "drude",
            ComparisonMethod::Plasma => "plasma",
        }
    }
}

/// Contiguous Matsubara indices sharing one impedance regime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RegimeSpan {
    pub regime: ImpedanceRegime,
    pub first_n: u64,
    pub last_n: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub a: f64,
    pub method: ComparisonMethod,
    pub omega_c: Frequency,
    pub model: ResponseModel,
    pub prescription: N0Prescription,
    pub correction: TemperatureCorrection,
    /// Regimes used for n ≥ 1; empty for dielectric methods.
    pub regimes: Vec<RegimeSpan>,
}

fn regime_spans(model: &ResponseModel, temperature: f64, n_terms: u64) -> Vec<RegimeSpan> {
    let fixed = match model {
        ResponseModel::ImpedanceNormalSkin(_) => Some(ImpedanceRegime::NormalSkin),
        ResponseModel::ImpedanceAnomalousSkin(_) => Some(ImpedanceRegime::AnomalousSkin),
        ResponseModel::ImpedanceInfrared(_) => Some(ImpedanceRegime::InfraredOptics),
        ResponseModel::ImpedanceMatched(..) => None,
        _ => return Vec::new(),
    };
    if n_terms < 2 {
        return Vec::new();
    }
    if let Some(regime) = fixed {
        return vec![RegimeSpan { regime, first_n: 1, last_n: n_terms - 1 }];
    }
    let ResponseModel::ImpedanceMatched(_, b) = model else { unreachable!() };
    let step = matsubara_step(temperature);
    let mut spans: Vec<RegimeSpan> = Vec::new();
    for n in 1..n_terms {
        let regime = b.regime_at(Frequency::new(step * n as f64).unwrap_or(Frequency::ZERO));
        match spans.last_mut() {
            Some(s) if s.regime == regime => s.last_n = n,
            _ => spans.push(RegimeSpan { regime, first_n: n, last_n: n }),
        }
    }
    spans
}

/// Comparison table with breakpoints at (ωτ, Ω).
pub fn prescription_comparison(
    a_values: &[f64],
    temperature: f64,
    params: &MaterialParams,
    settings: &QuadratureSettings,
) -> Result<Vec<ComparisonRow>> {
    prescription_comparison_with(a_values, temperature, params, RegimeBreakpoints::default_for(params), settings)
}

/// One row per (a, method), ordered by a then method; each method uses its Auto n = 0 prescription.
pub fn prescription_comparison_with(
    a_values: &[f64],
    temperature: f64,
    params: &MaterialParams,
    breakpoints: RegimeBreakpoints,
    settings: &QuadratureSettings,
) -> Result<Vec<ComparisonRow>> {
    if a_values.is_empty() {
        return Err(CasimirError::Validation("comparison needs at least one separation".into()));
    }
    params.validate()?;
    let jobs: Vec<(f64, ComparisonMethod)> =
        a_values.iter().flat_map(|&a| ComparisonMethod::ALL.into_iter().map(move |m| (a, m))).collect();
    let rows: Vec<Result<ComparisonRow>> = jobs
        .par_iter()
        .map(|&(a, method)| {
            let omega_c = characteristic_frequency(a)?;
            let model = match method {
                ComparisonMethod::GkmRecipe => match breakpoints.regime_at(omega_c) {
                    ImpedanceRegime::NormalSkin => ResponseModel::ImpedanceNormalSkin(*params),
                    ImpedanceRegime::AnomalousSkin => ResponseModel::ImpedanceAnomalousSkin(*params),
                    ImpedanceRegime::InfraredOptics => ResponseModel::ImpedanceInfrared(*params),
                },
                ComparisonMethod::Matched => ResponseModel::ImpedanceMatched(*params, breakpoints),
                ComparisonMethod::Drude => ResponseModel::Drude(*params),
                ComparisonMethod::Plasma => ResponseModel::Plasma(*params),
            };
            let prescription = N0Prescription::Auto.resolve(&model)?;
            let correction = temperature_correction(a, temperature, &model, prescription, settings)?;
            let regimes = regime_spans(&model, temperature, correction.free_energy.n_terms);
            Ok(ComparisonRow { a, method, omega_c, model, prescription, correction, regimes })
        })
        .collect();
    rows.into_iter().collect()
}
