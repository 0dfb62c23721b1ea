//! Matsubara sum and quadrature core of the Lifshitz formula for two
//! identical half-spaces a distance `a` apart.
//!
//! With t = 2ya every frequency term becomes
//!
//! ```text
//! F_n = (k_B T / 8π a²) · w_n · ∫_{x_n}^{x_n + L} t [ln(1 − r∥² e^{−t}) + ln(1 − r⊥² e^{−t})] dt
//! ```
//!
//! where x_n = 2ζ_n a / c, w_0 = 1/2, w_{n≥1} = 1 and L is `tail_cutoff`.
//! Terms are reduced in ascending n with compensated summation, so the
//! result does not depend on how many threads evaluated them.

use std::cell::Cell;
use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{domain, CasimirError, Result};
use crate::materials::{ResponseModel, SurfaceResponse};
use crate::quad::{integrate, Integral, Tolerance};
use crate::reflection::{n0_term_coefficients, reflection_for, N0Prescription, ReflectionPair};
use crate::summation::KahanSum;
use crate::units::{matsubara_step, Frequency, C, HBAR, K_B};

/// Tolerances and truncation limits shared by every integral in the engine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSettings {
    pub rel_tol: f64,
    /// Absolute tolerance in J/m² (Pa for the pressure) for each frequency term.
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    /// Width of the t-window integrated above each lower limit.
    pub tail_cutoff: f64,
    /// Stop the Matsubara sum once the tail bound is below this fraction of |F|.
    pub matsubara_tail_tol: f64,
    pub max_terms: u64,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        QuadratureSettings {
            rel_tol: 1e-8,
            abs_tol: 1e-20,
            max_subdivisions: 200,
            tail_cutoff: 60.0,
            matsubara_tail_tol: 1e-10,
            max_terms: 1_000_000,
        }
    }
}

impl QuadratureSettings {
    pub fn validate(&self) -> Result<()> {
        let ok = self.rel_tol > 0.0
            && self.abs_tol > 0.0
            && self.matsubara_tail_tol > 0.0
            && self.tail_cutoff >= 30.0
            && self.max_subdivisions > 0
            && self.max_terms > 0;
        if ok {
            Ok(())
        } else {
            Err(CasimirError::Validation(format!("invalid quadrature settings {self:?}")))
        }
    }
}

/// Free energy per unit area with convergence diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreeEnergyResult {
    /// J/m².
    pub value: f64,
    pub n_terms: u64,
    /// Summed quadrature error estimates, J/m².
    pub quad_error: f64,
    /// Bound on the Matsubara terms that were not summed, J/m².
    pub tail_bound: f64,
}

/// One frequency term with its quadrature error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TermEstimate {
    pub value: f64,
    pub error: f64,
}

/// A T = 0 energy with its quadrature error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyEstimate {
    pub value: f64,
    pub quad_error: f64,
}

/// Both pressure evaluations and their disagreement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PressureResult {
    /// −(k_B T/π) Σ′ ∫ y² r²e^{−2ya}/(1 − r²e^{−2ya}) dy, Pa.
    pub analytic: f64,
    /// Five-point central difference of −F(a), Pa.
    pub finite_difference: f64,
    /// |analytic − finite_difference| / |analytic|.
    pub discrepancy: f64,
    pub n_terms: u64,
    pub quad_error: f64,
    pub tail_bound: f64,
}

/// ln(1 − r² e^{−x}).
pub fn log_integrand(r_sq: f64, x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&r_sq) {
        return Err(domain(format!("r_sq must lie in [0, 1], got {r_sq}")));
    }
    if !(x >= 0.0) {
        return Err(domain(format!("x must be >= 0, got {x}")));
    }
    if r_sq == 1.0 && x == 0.0 {
        return Err(domain("ln(1 - e^0) is singular"));
    }
    Ok(log_term(r_sq, x))
}

#[inline]
fn log_term(r_sq: f64, t: f64) -> f64 {
    if r_sq == 0.0 {
        return 0.0;
    }
    if r_sq == 1.0 {
        // ln(1 − e^{−t}) without losing digits at small or large t.
        return if t < std::f64::consts::LN_2 { (-(-t).exp_m1()).ln() } else { (-(-t).exp()).ln_1p() };
    }
    (-r_sq * (-t).exp()).ln_1p()
}

/// r² e^{−t} / (1 − r² e^{−t}).
#[inline]
fn pressure_term(r_sq: f64, t: f64) -> f64 {
    if r_sq == 0.0 {
        return 0.0;
    }
    if r_sq == 1.0 {
        return 1.0 / (t.exp_m1());
    }
    let e = r_sq * (-t).exp();
    e / (1.0 - e)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Quantity {
    Energy,
    Pressure,
}

fn check_geometry(a: f64, temperature: f64) -> Result<()> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(domain(format!("separation must be > 0, got {a}")));
    }
    if !(temperature > 0.0 && temperature.is_finite()) {
        return Err(domain(format!("temperature must be > 0 K, got {temperature}")));
    }
    Ok(())
}

/// Evaluates the reflection pair at (ζ, y), either from the model or, at ζ = 0, the prescription.
enum Reflector {
    ZeroFrequency(N0Prescription),
    Finite { response: SurfaceResponse, zeta: Frequency },
}

impl Reflector {
    fn new(zeta: Frequency, model: &ResponseModel, prescription: N0Prescription) -> Result<Self> {
        if zeta.is_zero() {
            Ok(Reflector::ZeroFrequency(prescription.resolve(model)?))
        } else {
            Ok(Reflector::Finite { response: model.response_at(zeta)?, zeta })
        }
    }

    #[inline]
    fn at(&self, y: f64) -> Result<ReflectionPair> {
        match *self {
            Reflector::ZeroFrequency(p) => n0_term_coefficients(p, y),
            Reflector::Finite { response, zeta } => reflection_for(response, zeta, y),
        }
    }

    fn is_constant(&self) -> bool {
        matches!(
            self,
            Reflector::ZeroFrequency(N0Prescription::DrudeLimit | N0Prescription::IdealLike)
                | Reflector::Finite { response: SurfaceResponse::Ideal, .. }
        )
    }
}

/// ∫_{x}^{x+L} of the energy or pressure kernel for one reflector; dimensionless.
fn kernel_integral(
    reflector: &Reflector,
    x_lo: f64,
    a: f64,
    quantity: Quantity,
    tol: Tolerance,
    tail_cutoff: f64,
) -> std::result::Result<Integral, Integral> {
    let failed = Cell::new(false);
    let constant = reflector.is_constant().then(|| reflector.at(1.0).ok()).flatten();
    let f = |t: f64| {
        let pair = match constant {
            Some(p) => p,
            None => match reflector.at(t / (2.0 * a)) {
                Ok(p) => p,
                Err(_) => {
                    failed.set(true);
                    return 0.0;
                }
            },
        };
        match quantity {
            Quantity::Energy => t * (log_term(pair.r_par_sq, t) + log_term(pair.r_perp_sq, t)),
            Quantity::Pressure => t * t * (pressure_term(pair.r_par_sq, t) + pressure_term(pair.r_perp_sq, t)),
        }
    };
    let hi = x_lo + tail_cutoff;
    // The integrand decays like e^{−t}; seed the subdivision on that scale.
    let breaks: Vec<f64> = [1.0, 4.0, 12.0].iter().map(|d| x_lo + d).collect();
    let r = integrate(f, x_lo, hi, &breaks, tol);
    if failed.get() {
        let partial = match r {
            Ok(i) | Err(crate::quad::NotConverged(i)) => i,
        };
        return Err(Integral { value: f64::NAN, ..partial });
    }
    r.map_err(|nc| nc.0)
}

struct TermContext<'a> {
    a: f64,
    temperature: f64,
    model: &'a ResponseModel,
    prescription: N0Prescription,
    settings: &'a QuadratureSettings,
    quantity: Quantity,
}

impl TermContext<'_> {
    fn prefactor(&self) -> f64 {
        let kt = K_B * self.temperature;
        match self.quantity {
            Quantity::Energy => kt / (8.0 * PI * self.a * self.a),
            Quantity::Pressure => -kt / (8.0 * PI * self.a.powi(3)),
        }
    }

    fn x(&self, n: u64) -> f64 {
        2.0 * matsubara_step(self.temperature) * n as f64 * self.a / C
    }

    fn term(&self, n: u64) -> Result<TermEstimate> {
        let zeta = Frequency::new(matsubara_step(self.temperature) * n as f64)?;
        let reflector = Reflector::new(zeta, self.model, self.prescription)?;
        let weight = if n == 0 { 0.5 } else { 1.0 };
        let pref = self.prefactor() * weight;
        let tol = Tolerance {
            rel: self.settings.rel_tol,
            abs: self.settings.abs_tol / pref.abs(),
            max_subdivisions: self.settings.max_subdivisions,
        };
        match kernel_integral(&reflector, self.x(n), self.a, self.quantity, tol, self.settings.tail_cutoff) {
            Ok(i) => Ok(TermEstimate { value: pref * i.value, error: pref.abs() * i.error }),
            Err(i) => Err(CasimirError::Convergence {
                what: format!("Matsubara term n = {n}"),
                partial: pref * i.value,
                error: pref.abs() * i.error,
            }),
        }
    }

    /// Rigorous bound (safety factor 2) on Σ_{n ≥ first} |term_n|, from r² ≤ 1 and monotone decay.
    fn tail_bound(&self, first: u64) -> f64 {
        let x = self.x(first);
        let step = self.x(1);
        if x <= 0.0 {
            return f64::INFINITY;
        }
        let kappa = 1.0 / (-(-x).exp_m1());
        let e = (-x).exp();
        let kt = K_B * self.temperature;
        let (head, integral, scale) = match self.quantity {
            Quantity::Energy => (x + 1.0, x + 2.0, kt / (4.0 * PI * self.a * self.a)),
            Quantity::Pressure => (x * x + 2.0 * x + 2.0, x * x + 4.0 * x + 6.0, kt / (4.0 * PI * self.a.powi(3))),
        };
        2.0 * scale * kappa * e * (head + integral / step)
    }

    fn sum(&self) -> Result<FreeEnergyResult> {
        self.settings.validate()?;
        let mut total = KahanSum::new();
        let mut quad_error = 0.0;
        let mut next = 0u64;
        let max_terms = self.settings.max_terms;
        loop {
            let block = (next / 4).clamp(1, 256).min(max_terms - next);
            let terms: Vec<Result<TermEstimate>> = (next..next + block).into_par_iter().map(|n| self.term(n)).collect();
            for (n, term) in (next..).zip(terms) {
                let term = term.map_err(|e| match e {
                    CasimirError::Convergence { what, partial, error } => {
                        CasimirError::Convergence { what, partial: total.value() + partial, error: quad_error + error }
                    }
                    other => other,
                })?;
                total.add(term.value);
                quad_error += term.error;
                let bound = self.tail_bound(n + 1);
                let value = total.value();
                if bound <= self.settings.matsubara_tail_tol * value.abs() {
                    return Ok(FreeEnergyResult { value, n_terms: n + 1, quad_error, tail_bound: bound });
                }
            }
            next += block;
            if next >= max_terms {
                return Err(CasimirError::Convergence {
                    what: format!("Matsubara sum after {max_terms} terms"),
                    partial: total.value(),
                    error: self.tail_bound(next),
                });
            }
        }
    }
}

/// One n-term of the primed Matsubara sum, J/m² (n = 0 carries weight 1/2).
pub fn matsubara_term(
    n: u64,
    a: f64,
    temperature: f64,
    model: &ResponseModel,
    prescription: N0Prescription,
    settings: &QuadratureSettings,
) -> Result<TermEstimate> {
    check_geometry(a, temperature)?;
    TermContext { a, temperature, model, prescription, settings, quantity: Quantity::Energy }.term(n)
}

/// Casimir free energy per unit area, J/m².
pub fn free_energy(
    a: f64,
    temperature: f64,
    model: &ResponseModel,
    prescription: N0Prescription,
    settings: &QuadratureSettings,
) -> Result<FreeEnergyResult> {
    check_geometry(a, temperature)?;
    model.validate()?;
    prescription.resolve(model)?;
    TermContext { a, temperature, model, prescription, settings, quantity: Quantity::Energy }.sum()
}

/// T → 0 limit of [`free_energy`]: the Matsubara sum becomes an integral over ζ.
pub fn zero_t_energy(a: f64, model: &ResponseModel, settings: &QuadratureSettings) -> Result<EnergyEstimate> {
    check_geometry(a, 1.0)?;
    model.validate()?;
    settings.validate()?;
    let inner_tol = Tolerance { rel: settings.rel_tol * 0.1, abs: 1e-300, max_subdivisions: settings.max_subdivisions };
    let failure: Cell<Option<CasimirError>> = Cell::new(None);
    let worst_inner = Cell::new(0.0f64);
    // x = 2ζa/c = u/(1−u)
    let outer = |u: f64| {
        let x = u / (1.0 - u);
        if x > 700.0 {
            return 0.0;
        }
        let zeta = match Frequency::new(x * C / (2.0 * a)) {
            Ok(z) => z,
            Err(e) => {
                failure.set(Some(e));
                return 0.0;
            }
        };
        let reflector = match Reflector::new(zeta, model, N0Prescription::Auto) {
            Ok(r) => r,
            Err(e) => {
                failure.set(Some(e));
                return 0.0;
            }
        };
        let jac = 1.0 / ((1.0 - u) * (1.0 - u));
        match kernel_integral(&reflector, x, a, Quantity::Energy, inner_tol, settings.tail_cutoff) {
            Ok(i) => {
                // The u-interval has unit length, so sup(jac · inner error) bounds their integral.
                worst_inner.set(worst_inner.get().max(jac * i.error));
                jac * i.value
            }
            Err(i) => {
                failure.set(Some(CasimirError::Convergence {
                    what: format!("inner integral at zeta = {zeta}"),
                    partial: i.value,
                    error: i.error,
                }));
                0.0
            }
        }
    };
    let breaks: Vec<f64> = model
        .discontinuities()
        .into_iter()
        .map(|w| {
            let x = 2.0 * w * a / C;
            x / (1.0 + x)
        })
        .collect();
    let outer_tol = Tolerance { rel: settings.rel_tol, abs: 1e-300, max_subdivisions: settings.max_subdivisions };
    let pref = HBAR * C / (32.0 * PI * PI * a.powi(3));
    let result = integrate(outer, 0.0, 1.0, &breaks, outer_tol);
    if let Some(e) = failure.take() {
        return Err(e);
    }
    match result {
        Ok(i) => Ok(EnergyEstimate { value: pref * i.value, quad_error: pref * (i.error + worst_inner.get()) }),
        Err(nc) => Err(CasimirError::Convergence {
            what: "zero-temperature frequency integral".into(),
            partial: pref * nc.0.value,
            error: pref * nc.0.error,
        }),
    }
}

/// Casimir pressure, Pa (negative means attraction), computed two independent ways.
pub fn pressure(
    a: f64,
    temperature: f64,
    model: &ResponseModel,
    prescription: N0Prescription,
    settings: &QuadratureSettings,
) -> Result<PressureResult> {
    check_geometry(a, temperature)?;
    model.validate()?;
    prescription.resolve(model)?;
    let analytic = TermContext { a, temperature, model, prescription, settings, quantity: Quantity::Pressure }.sum()?;

    let h = 0.01 * a;
    let f = |s: f64| free_energy(a + s * h, temperature, model, prescription, settings).map(|r| r.value);
    let (m2, m1, p1, p2) = (f(-2.0)?, f(-1.0)?, f(1.0)?, f(2.0)?);
    let derivative = (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h);
    let finite_difference = -derivative;
    Ok(PressureResult {
        analytic: analytic.value,
        finite_difference,
        discrepancy: ((analytic.value - finite_difference) / analytic.value).abs(),
        n_terms: analytic.n_terms,
        quad_error: analytic.quad_error,
        tail_bound: analytic.tail_bound,
    })
}
