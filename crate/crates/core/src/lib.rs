//! Thermal Casimir interaction between two metal half-spaces from the
//! Lifshitz formula, with interchangeable material descriptions and explicit
//! treatment of the zero-frequency Matsubara term.
//!
//! All frequencies are angular frequencies in rad/s, lengths in m,
//! temperatures in K, energies per area in J/m² and pressures in Pa.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod lifshitz;
pub mod materials;
pub mod quad;
pub mod reflection;
pub mod summation;
pub mod thermo;
pub mod units;

pub use error::{CasimirError, Result};
pub use lifshitz::{
    free_energy, log_integrand, matsubara_term, pressure, zero_t_energy, EnergyEstimate, FreeEnergyResult,
    PressureResult, QuadratureSettings, TermEstimate,
};
pub use materials::{
    drude_sigma, eps_imag_axis, impedance_imag_axis, kk_transform, matched_impedance, Conductivity, ImpedanceRegime,
    KkValue, MaterialParams, OpticalTable, RegimeBreakpoints, ResponseModel, SurfaceResponse,
};
pub use reflection::{
    fresnel_dielectric, fresnel_impedance, n0_term_coefficients, reflection_for, N0Prescription, ReflectionPair,
};
pub use thermo::{
    default_entropy_step, entropy, nernst_check, nernst_fit, prescription_comparison, prescription_comparison_with,
    temperature_correction, ComparisonMethod, ComparisonRow, EntropyResult, NernstReport, RegimeSpan,
    TemperatureCorrection,
};
pub use units::{
    anomalous_frequency, characteristic_frequency, ev_to_radsec, matsubara_frequency, Frequency, CONSTANTS,
};
