//! Physical constants, unit conversions and the characteristic frequencies
//! that decide which material regime a Matsubara term falls into.
//!
//! Every frequency in the crate is an angular frequency in rad/s.

use std::fmt;

use crate::error::{domain, Result};
use crate::materials::MaterialParams;

/// CODATA 2018 exact/recommended values, SI units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Reduced Planck constant, J·s.
    pub hbar: f64,
    /// Speed of light, m/s.
    pub c: f64,
    /// Boltzmann constant, J/K.
    pub k_b: f64,
    /// Elementary charge, C.
    pub e: f64,
}

pub const CONSTANTS: PhysicalConstants =
    PhysicalConstants { hbar: 1.054_571_817e-34, c: 299_792_458.0, k_b: 1.380_649e-23, e: 1.602_176_634e-19 };

pub const HBAR: f64 = CONSTANTS.hbar;
pub const C: f64 = CONSTANTS.c;
pub const K_B: f64 = CONSTANTS.k_b;

/// Riemann ζ(3).
pub const ZETA_3: f64 = 1.202_056_903_159_594_3;

/// A non-negative angular frequency in rad/s.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct Frequency(f64);

impl Frequency {
    pub const ZERO: Frequency = Frequency(0.0);

    pub fn new(rad_per_s: f64) -> Result<Self> {
        if rad_per_s.is_finite() && rad_per_s >= 0.0 {
            Ok(Frequency(rad_per_s))
        } else {
            Err(domain(format!("frequency must be finite and >= 0, got {rad_per_s}")))
        }
    }

    #[inline]
    pub fn rad_per_s(self) -> f64 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0.0
    }
}

impl fmt::Display for Frequency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e} rad/s", self.0)
    }
}

/// Photon energy in eV to angular frequency.
pub fn ev_to_radsec(energy_ev: f64) -> Result<Frequency> {
    if !(energy_ev >= 0.0) {
        return Err(domain(format!("photon energy must be >= 0 eV, got {energy_ev}")));
    }
    Frequency::new(energy_ev * CONSTANTS.e / HBAR)
}

/// ζ_n = 2π k_B T n / ħ. `n = 0` gives exactly zero.
pub fn matsubara_frequency(n: u64, temperature: f64) -> Result<Frequency> {
    if !(temperature > 0.0) || !temperature.is_finite() {
        return Err(domain(format!("temperature must be > 0 K, got {temperature}")));
    }
    Frequency::new(matsubara_step(temperature) * n as f64)
}

/// Spacing 2π k_B T / ħ between consecutive Matsubara frequencies.
#[inline]
pub(crate) fn matsubara_step(temperature: f64) -> f64 {
    2.0 * std::f64::consts::PI * K_B * temperature / HBAR
}

/// ω_c = c / 2a, the frequency scale set by the gap width.
pub fn characteristic_frequency(separation: f64) -> Result<Frequency> {
    if !(separation > 0.0) || !separation.is_finite() {
        return Err(domain(format!("separation must be > 0 m, got {separation}")));
    }
    Frequency::new(C / (2.0 * separation))
}

/// Ω = (v_F / c) ω_p, the onset of the anomalous skin effect.
pub fn anomalous_frequency(params: &MaterialParams) -> Frequency {
    Frequency(params.vf_over_c * params.omega_p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn ev_conversion() {
        assert_eq!(ev_to_radsec(0.0).unwrap(), Frequency::ZERO);
        assert_relative_eq!(ev_to_radsec(1.0).unwrap().rad_per_s(), 1.519e15, max_relative = 1e-3);
        assert_relative_eq!(ev_to_radsec(9.0).unwrap().rad_per_s(), 1.367e16, max_relative = 1e-3);
        assert!(ev_to_radsec(-1.0).is_err());
        assert!(ev_to_radsec(f64::NAN).is_err());
    }

    #[test]
    fn matsubara_values() {
        assert_eq!(matsubara_frequency(0, 300.0).unwrap().rad_per_s(), 0.0);
        assert_relative_eq!(matsubara_frequency(1, 300.0).unwrap().rad_per_s(), 2.468e14, max_relative = 1e-3);
        assert_relative_eq!(matsubara_frequency(10, 300.0).unwrap().rad_per_s(), 2.468e15, max_relative = 1e-3);
        assert!(matsubara_frequency(1, 0.0).is_err());
        assert!(matsubara_frequency(1, -3.0).is_err());
    }

    #[test]
    fn characteristic_values() {
        let w = |a: f64| characteristic_frequency(a).unwrap().rad_per_s();
        assert_relative_eq!(w(100e-9), 1.5e15, max_relative = 1e-3);
        assert_relative_eq!(w(500e-9), 3.0e14, max_relative = 1e-3);
        assert_relative_eq!(w(1e-6), 1.5e14, max_relative = 1e-3);
        assert!(characteristic_frequency(0.0).is_err());
    }

    #[test]
    fn anomalous_values() {
        let mut p = MaterialParams::new(1.37e16, 5.32e13, 4.67e-3).unwrap();
        assert_relative_eq!(anomalous_frequency(&p).rad_per_s(), 6.40e13, max_relative = 1e-3);
        p.vf_over_c = 0.0;
        assert_eq!(anomalous_frequency(&p).rad_per_s(), 0.0);
        let q = MaterialParams::new(2.0 * 1.37e16, 5.32e13, 4.67e-3).unwrap();
        let base = MaterialParams::new(1.37e16, 5.32e13, 4.67e-3).unwrap();
        assert_relative_eq!(
            anomalous_frequency(&q).rad_per_s(),
            2.0 * anomalous_frequency(&base).rad_per_s(),
            max_relative = 1e-15
        );
    }

    proptest::proptest! {
        #[test]
        fn matsubara_is_linear(n in 0u64..1_000_000, t in 1e-3f64..1e4) {
            let z = |n, t| matsubara_frequency(n, t).unwrap().rad_per_s();
            let base = z(n, t);
            proptest::prop_assert_eq!(z(2 * n, t), 2.0 * base);
            let rel = (z(n, 2.0 * t) - 2.0 * base).abs() / base.max(f64::MIN_POSITIVE);
            proptest::prop_assert!(rel <= 4.0 * f64::EPSILON);
        }

        #[test]
        fn characteristic_inverse(a in 1e-9f64..1e-2) {
            let w = characteristic_frequency(a).unwrap().rad_per_s();
            proptest::prop_assert!((w * 2.0 * a / C - 1.0).abs() <= 2.0 * f64::EPSILON);
        }
    }
}
