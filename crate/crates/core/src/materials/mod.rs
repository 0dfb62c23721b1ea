//! Material response on the imaginary frequency axis.
//!
//! Dielectric media are described by ε(iζ): the Drude form
//! `1 + ωp²/(ζ(ζ+ωτ))`, its plasma limit `1 + ωp²/ζ²`, or a tabulated ε″(ω)
//! pushed through the dispersion relation (see [`optical`]). Impedance media
//! are described by the dimensionless surface impedance Z(iζ) in one of three
//! regimes, or by the matched selector that picks the regime from ζ itself.

pub mod optical;

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::error::{CasimirError, Result};
use crate::units::{anomalous_frequency, Frequency};

pub use optical::{kk_transform, HighTail, KkValue, LowTail, OpticalTable, TableError};

/// Parameters of a free-electron metal. All frequencies in rad/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaterialParams {
    pub omega_p: f64,
    pub omega_tau: f64,
    /// v_F / c.
    pub vf_over_c: f64,
    /// Multiplies v_F to give the velocity v of the anomalous-skin impedance.
    pub v_prefactor: f64,
}

impl MaterialParams {
    pub fn new(omega_p: f64, omega_tau: f64, vf_over_c: f64) -> Result<Self> {
        let p = MaterialParams { omega_p, omega_tau, vf_over_c, v_prefactor: 1.0 };
        p.validate()?;
        Ok(p)
    }

    pub fn with_v_prefactor(mut self, v_prefactor: f64) -> Result<Self> {
        self.v_prefactor = v_prefactor;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(CasimirError::Validation(m));
        if !(self.omega_p > 0.0 && self.omega_p.is_finite()) {
            return bad(format!("omega_p must be > 0, got {}", self.omega_p));
        }
        if !(self.omega_tau >= 0.0 && self.omega_tau.is_finite()) {
            return bad(format!("omega_tau must be >= 0, got {}", self.omega_tau));
        }
        if !(self.vf_over_c >= 0.0 && self.vf_over_c < 1.0) {
            return bad(format!("vf_over_c must lie in [0, 1), got {}", self.vf_over_c));
        }
        if !(self.v_prefactor > 0.0 && self.v_prefactor.is_finite()) {
            return bad(format!("v_prefactor must be > 0, got {}", self.v_prefactor));
        }
        Ok(())
    }

    /// v / c entering the anomalous-skin impedance.
    pub fn v_over_c(&self) -> f64 {
        self.v_prefactor * self.vf_over_c
    }
}

/// Conductivity in Gaussian units (a frequency, rad/s).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Conductivity {
    pub sigma: f64,
}

/// σ = ωp² / (4π ωτ).
pub fn drude_sigma(params: &MaterialParams) -> Result<Conductivity> {
    if params.omega_tau <= 0.0 {
        return Err(CasimirError::SingularModel("conductivity is infinite for omega_tau = 0".into()));
    }
    Ok(Conductivity { sigma: params.omega_p * params.omega_p / (4.0 * PI * params.omega_tau) })
}

/// Upper edges of the normal-skin and anomalous-skin bands.
///
/// Bands are half-open: `[0, ns_upper)` normal skin, `[ns_upper, as_upper)`
/// anomalous skin, `[as_upper, ∞)` infrared optics. With `as_upper <= ns_upper`
/// the anomalous band is empty.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeBreakpoints {
    pub ns_upper: Frequency,
    pub as_upper: Frequency,
}

impl RegimeBreakpoints {
    /// `(ωτ, Ω = v_F ωp / c)`.
    pub fn default_for(params: &MaterialParams) -> Self {
        RegimeBreakpoints {
            ns_upper: Frequency::new(params.omega_tau).unwrap_or(Frequency::ZERO),
            as_upper: anomalous_frequency(params),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.ns_upper.rad_per_s() > 0.0) {
            return Err(CasimirError::Validation("ns_upper breakpoint must be > 0".into()));
        }
        Ok(())
    }

    pub fn anomalous_band_is_empty(&self) -> bool {
        self.as_upper <= self.ns_upper
    }

    /// Regime containing `zeta`.
    pub fn regime_at(&self, zeta: Frequency) -> ImpedanceRegime {
        if zeta < self.ns_upper {
            ImpedanceRegime::NormalSkin
        } else if zeta < self.as_upper {
            ImpedanceRegime::AnomalousSkin
        } else {
            ImpedanceRegime::InfraredOptics
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ImpedanceRegime {
    NormalSkin,
    AnomalousSkin,
    InfraredOptics,
}

impl ImpedanceRegime {
    pub fn label(self) -> &'static str {
        match self {
            ImpedanceRegime::NormalSkin => "NS",
            ImpedanceRegime::AnomalousSkin => "AS",
            ImpedanceRegime::InfraredOptics => "IR",
        }
    }

    /// Z(iζ) of this regime, with no check that ζ actually lies in the band.
    pub fn impedance(self, params: &MaterialParams, zeta: f64) -> f64 {
        let wp = params.omega_p;
        match self {
            ImpedanceRegime::InfraredOptics => zeta / wp.hypot(zeta),
            ImpedanceRegime::NormalSkin => (zeta * params.omega_tau).sqrt() / wp,
            ImpedanceRegime::AnomalousSkin => {
                let r = zeta / wp;
                (params.v_over_c() * r * r).cbrt()
            }
        }
    }
}

impl fmt::Display for ImpedanceRegime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// The material description used for every Matsubara term.
#[derive(Debug, Clone, PartialEq)]
pub enum ResponseModel {
    IdealMetal,
    Plasma(MaterialParams),
    Drude(MaterialParams),
    Tabulated(Arc<OpticalTable>),
    ImpedanceNormalSkin(MaterialParams),
    ImpedanceAnomalousSkin(MaterialParams),
    ImpedanceInfrared(MaterialParams),
    ImpedanceMatched(MaterialParams, RegimeBreakpoints),
}

/// Material response at one imaginary frequency ζ > 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SurfaceResponse {
    Ideal,
    Dielectric(f64),
    Impedance(f64),
}

impl ResponseModel {
    pub fn matched(params: MaterialParams) -> Self {
        ResponseModel::ImpedanceMatched(params, RegimeBreakpoints::default_for(&params))
    }

    pub fn name(&self) -> &'static str {
        match self {
            ResponseModel::IdealMetal => "ideal",
            ResponseModel::Plasma(_) => "plasma",
            ResponseModel::Drude(_) => "drude",
            ResponseModel::Tabulated(_) => "tabulated",
            ResponseModel::ImpedanceNormalSkin(_) => "normal-skin",
            ResponseModel::ImpedanceAnomalousSkin(_) => "anomalous-skin",
            ResponseModel::ImpedanceInfrared(_) => "infrared",
            ResponseModel::ImpedanceMatched(..) => "matched",
        }
    }

    pub fn params(&self) -> Option<&MaterialParams> {
        match self {
            ResponseModel::IdealMetal | ResponseModel::Tabulated(_) => None,
            ResponseModel::Plasma(p)
            | ResponseModel::Drude(p)
            | ResponseModel::ImpedanceNormalSkin(p)
            | ResponseModel::ImpedanceAnomalousSkin(p)
            | ResponseModel::ImpedanceInfrared(p)
            | ResponseModel::ImpedanceMatched(p, _) => Some(p),
        }
    }

    pub fn is_dielectric(&self) -> bool {
        matches!(self, ResponseModel::Plasma(_) | ResponseModel::Drude(_) | ResponseModel::Tabulated(_))
    }

    pub fn is_impedance(&self) -> bool {
        matches!(
            self,
            ResponseModel::ImpedanceNormalSkin(_)
                | ResponseModel::ImpedanceAnomalousSkin(_)
                | ResponseModel::ImpedanceInfrared(_)
                | ResponseModel::ImpedanceMatched(..)
        )
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(p) = self.params() {
            p.validate()?;
        }
        let need = |ok: bool, what: &str| {
            if ok {
                Ok(())
            } else {
                Err(CasimirError::Validation(format!("{} model requires {what}", self.name())))
            }
        };
        match self {
            ResponseModel::Drude(p) | ResponseModel::ImpedanceNormalSkin(p) => need(p.omega_tau > 0.0, "omega_tau > 0"),
            ResponseModel::ImpedanceAnomalousSkin(p) => need(p.vf_over_c > 0.0, "vf_over_c > 0"),
            ResponseModel::ImpedanceMatched(p, b) => {
                need(p.vf_over_c > 0.0, "vf_over_c > 0")?;
                need(p.omega_tau > 0.0, "omega_tau > 0")?;
                b.validate()
            }
            _ => Ok(()),
        }
    }

    /// Frequencies at which the response is discontinuous (matched-regime breakpoints).
    pub fn discontinuities(&self) -> Vec<f64> {
        match self {
            ResponseModel::ImpedanceMatched(_, b) => {
                let mut v = vec![b.ns_upper.rad_per_s()];
                if !b.anomalous_band_is_empty() {
                    v.push(b.as_upper.rad_per_s());
                }
                v
            }
            _ => Vec::new(),
        }
    }

    /// ε(iζ) or Z(iζ) at ζ > 0, whichever the model provides.
    pub fn response_at(&self, zeta: Frequency) -> Result<SurfaceResponse> {
        if zeta.is_zero() {
            return Err(CasimirError::IndeterminateLimit);
        }
        match self {
            ResponseModel::IdealMetal => Ok(SurfaceResponse::Ideal),
            m if m.is_dielectric() => eps_imag_axis(m, zeta).map(SurfaceResponse::Dielectric),
            m => impedance_imag_axis(m, zeta).map(SurfaceResponse::Impedance),
        }
    }
}

/// ε(iζ) for the dielectric variants.
pub fn eps_imag_axis(model: &ResponseModel, zeta: Frequency) -> Result<f64> {
    let z = zeta.rad_per_s();
    match model {
        ResponseModel::Plasma(_) | ResponseModel::Drude(_) | ResponseModel::Tabulated(_) if z == 0.0 => {
            Err(CasimirError::DivergentPermittivity)
        }
        ResponseModel::Plasma(p) => {
            let r = p.omega_p / z;
            Ok(1.0 + r * r)
        }
        ResponseModel::Drude(p) => {
            if p.omega_tau <= 0.0 {
                return Err(CasimirError::SingularModel("Drude model needs omega_tau > 0".into()));
            }
            Ok(1.0 + p.omega_p / z * (p.omega_p / (z + p.omega_tau)))
        }
        ResponseModel::Tabulated(table) => Ok(kk_transform(table, zeta)?.value),
        other => Err(CasimirError::WrongModel(format!("{} model has no dielectric function", other.name()))),
    }
}

/// Dimensionless surface impedance Z(iζ) for the impedance variants.
pub fn impedance_imag_axis(model: &ResponseModel, zeta: Frequency) -> Result<f64> {
    let z = zeta.rad_per_s();
    match model {
        ResponseModel::ImpedanceInfrared(p) => Ok(ImpedanceRegime::InfraredOptics.impedance(p, z)),
        ResponseModel::ImpedanceNormalSkin(p) => Ok(ImpedanceRegime::NormalSkin.impedance(p, z)),
        ResponseModel::ImpedanceAnomalousSkin(p) => Ok(ImpedanceRegime::AnomalousSkin.impedance(p, z)),
        ResponseModel::ImpedanceMatched(p, b) => Ok(matched_impedance(p, b, zeta).value),
        other => Err(CasimirError::WrongModel(format!("{} model has no surface impedance", other.name()))),
    }
}

/// Output of the matched-regime selector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchedImpedance {
    pub value: f64,
    pub regime: ImpedanceRegime,
    /// Breakpoint closest to ζ (log distance).
    pub nearest_breakpoint: Frequency,
    /// Z(above) − Z(below) evaluated at that breakpoint.
    pub jump: f64,
}

/// Z(iζ) taken from the regime that contains ζ itself.
pub fn matched_impedance(
    params: &MaterialParams,
    breakpoints: &RegimeBreakpoints,
    zeta: Frequency,
) -> MatchedImpedance {
    use ImpedanceRegime::*;
    let regime = breakpoints.regime_at(zeta);
    let value = regime.impedance(params, zeta.rad_per_s());

    let mut edges = vec![(breakpoints.ns_upper, NormalSkin, AnomalousSkin)];
    if breakpoints.anomalous_band_is_empty() {
        edges[0].2 = InfraredOptics;
    } else {
        edges.push((breakpoints.as_upper, AnomalousSkin, InfraredOptics));
    }
    let distance = |b: Frequency| {
        if zeta.is_zero() {
            f64::INFINITY
        } else {
            (zeta.rad_per_s() / b.rad_per_s()).ln().abs()
        }
    };
    let &(at, below, above) =
        edges.iter().min_by(|x, y| distance(x.0).total_cmp(&distance(y.0))).expect("at least one breakpoint");
    let w = at.rad_per_s();
    MatchedImpedance {
        value,
        regime,
        nearest_breakpoint: at,
        jump: above.impedance(params, w) - below.impedance(params, w),
    }
}
