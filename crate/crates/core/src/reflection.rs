//! Squared reflection coefficients on the imaginary frequency axis.
//!
//! `y` is the integration variable of the Lifshitz formula (lower limit ζ/c);
//! the in-plane wave vector is √(y² − ζ²/c²), which equals `y` at ζ = 0.
//!
//! The zero-frequency term is never obtained by substituting ζ = 0 into a
//! model: its coefficients always come from an [`N0Prescription`].

use crate::error::{domain, CasimirError, Result};
use crate::materials::{ResponseModel, SurfaceResponse};
use crate::units::{Frequency, C};

/// Squared TM (∥) and TE (⊥) reflection coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectionPair {
    pub r_par_sq: f64,
    pub r_perp_sq: f64,
}

impl ReflectionPair {
    pub const PERFECT: ReflectionPair = ReflectionPair { r_par_sq: 1.0, r_perp_sq: 1.0 };
}

/// How the n = 0 Matsubara term is evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum N0Prescription {
    /// r∥² = 1, r⊥² = 0.
    DrudeLimit,
    /// r∥² = 1, r⊥² = ((ωp − cq)/(ωp + cq))².
    PlasmaLike { omega_p: f64 },
    /// r∥² = r⊥² = 1.
    IdealLike,
    /// Chosen from the response model.
    Auto,
}

impl N0Prescription {
    pub fn label(&self) -> &'static str {
        match self {
            N0Prescription::DrudeLimit => "drude",
            N0Prescription::PlasmaLike { .. } => "plasma",
            N0Prescription::IdealLike => "ideal",
            N0Prescription::Auto => "auto",
        }
    }

    /// Replaces `Auto` with the prescription matching the model's ζ → 0 asymptote.
    pub fn resolve(self, model: &ResponseModel) -> Result<N0Prescription> {
        if self != N0Prescription::Auto {
            return Ok(self);
        }
        Ok(match model {
            ResponseModel::Drude(_) => N0Prescription::DrudeLimit,
            ResponseModel::Plasma(p) | ResponseModel::ImpedanceInfrared(p) => {
                N0Prescription::PlasmaLike { omega_p: p.omega_p }
            }
            ResponseModel::IdealMetal
            | ResponseModel::ImpedanceNormalSkin(_)
            | ResponseModel::ImpedanceAnomalousSkin(_)
            | ResponseModel::ImpedanceMatched(..) => N0Prescription::IdealLike,
            ResponseModel::Tabulated(_) => return Err(CasimirError::UnresolvedPrescription(model.name())),
        })
    }
}

fn check_y(zeta: f64, y: f64) -> Result<()> {
    // Tolerate rounding at the lower integration limit y = ζ/c.
    if !(y >= zeta / C * (1.0 - 1e-12)) || !y.is_finite() {
        return Err(domain(format!("y = {y:e} is below zeta/c = {:e}", zeta / C)));
    }
    Ok(())
}

/// Lifshitz coefficients of a half-space with permittivity `eps`.
pub fn fresnel_dielectric(eps: f64, zeta: Frequency, y: f64) -> Result<ReflectionPair> {
    let z = zeta.rad_per_s();
    if !(z > 0.0) {
        return Err(domain("fresnel_dielectric needs zeta > 0"));
    }
    if !(eps >= 1.0) {
        return Err(domain(format!("permittivity must be >= 1, got {eps}")));
    }
    check_y(z, y)?;
    let k2 = (eps - 1.0) * (z / C) * (z / C);
    let y1 = (y * y + k2).sqrt();
    // y − y₁ written without cancellation.
    let r_perp = -k2 / ((y + y1) * (y + y1));
    let r_par = (eps * y - y1) / (eps * y + y1);
    Ok(ReflectionPair { r_par_sq: r_par * r_par, r_perp_sq: r_perp * r_perp })
}

/// Coefficients for an impedance boundary condition with dimensionless `z_imp` = Z(iζ).
pub fn fresnel_impedance(z_imp: f64, zeta: Frequency, y: f64) -> Result<ReflectionPair> {
    let z = zeta.rad_per_s();
    if zeta.is_zero() {
        return Err(CasimirError::IndeterminateLimit);
    }
    if !(z_imp >= 0.0) {
        return Err(domain(format!("impedance must be >= 0, got {z_imp}")));
    }
    check_y(z, y)?;
    let cy = C * y;
    let r_par = (cy - z * z_imp) / (cy + z * z_imp);
    let r_perp = (z - cy * z_imp) / (z + cy * z_imp);
    Ok(ReflectionPair { r_par_sq: r_par * r_par, r_perp_sq: r_perp * r_perp })
}

/// n = 0 coefficients at in-plane wave vector `q` (1/m).
pub fn n0_term_coefficients(prescription: N0Prescription, q: f64) -> Result<ReflectionPair> {
    if !(q > 0.0) {
        return Err(domain(format!("q must be > 0, got {q}")));
    }
    match prescription {
        N0Prescription::DrudeLimit => Ok(ReflectionPair { r_par_sq: 1.0, r_perp_sq: 0.0 }),
        N0Prescription::IdealLike => Ok(ReflectionPair::PERFECT),
        N0Prescription::PlasmaLike { omega_p } => {
            let cq = C * q;
            let r = (omega_p - cq) / (omega_p + cq);
            Ok(ReflectionPair { r_par_sq: 1.0, r_perp_sq: r * r })
        }
        N0Prescription::Auto => Err(CasimirError::UnresolvedPrescription("unspecified")),
    }
}

/// Coefficients for a precomputed response at ζ > 0.
#[inline]
pub fn reflection_for(response: SurfaceResponse, zeta: Frequency, y: f64) -> Result<ReflectionPair> {
    match response {
        SurfaceResponse::Ideal => Ok(ReflectionPair::PERFECT),
        SurfaceResponse::Dielectric(eps) => fresnel_dielectric(eps, zeta, y),
        SurfaceResponse::Impedance(z) => fresnel_impedance(z, zeta, y),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::materials::{eps_imag_axis, impedance_imag_axis, MaterialParams};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn gold() -> MaterialParams {
        MaterialParams::new(1.37e16, 5.32e13, 4.67e-3).unwrap()
    }

    fn f(x: f64) -> Frequency {
        Frequency::new(x).unwrap()
    }

    /// q values spanning 0.5–10 plasma wavenumbers.
    fn q_samples(wp: f64) -> Vec<f64> {
        (0..10).map(|i| 0.5 * 20f64.powf(i as f64 / 9.0) * wp / C).collect()
    }

    #[test]
    fn ideal_metal_limit() {
        let z = f(1e15);
        let r = fresnel_dielectric(1e12, z, 2.0 * z.rad_per_s() / C).unwrap();
        assert!((r.r_par_sq - 1.0).abs() < 1e-5 && (r.r_perp_sq - 1.0).abs() < 1e-5);
    }

    #[test]
    fn drude_low_frequency_limit() {
        let p = gold();
        let z = f(1e-6 * p.omega_tau);
        let eps = eps_imag_axis(&ResponseModel::Drude(p), z).unwrap();
        for y in [1e6, 1e7, 1e8] {
            let r = fresnel_dielectric(eps, z, y).unwrap();
            assert!((r.r_par_sq - 1.0).abs() < 1e-4 && r.r_perp_sq < 1e-4, "y={y}: {r:?}");
        }
    }

    #[test]
    fn plasma_low_frequency_limit() {
        let p = gold();
        let z = f(1e-4 * p.omega_p);
        let eps = eps_imag_axis(&ResponseModel::Plasma(p), z).unwrap();
        for q in q_samples(p.omega_p) {
            let r = fresnel_dielectric(eps, z, q).unwrap();
            let k = p.omega_p / C;
            let expect = (((q * q + k * k).sqrt() - q) / ((q * q + k * k).sqrt() + q)).powi(2);
            assert_relative_eq!(r.r_perp_sq, expect, max_relative = 1e-6);
        }
    }

    #[test]
    fn domain_errors() {
        assert!(fresnel_dielectric(2.0, f(C), 0.5).is_err());
        assert!(fresnel_dielectric(2.0, f(C), 1.0).is_ok());
        assert!(fresnel_dielectric(0.5, f(1.0), 1.0).is_err());
        assert_eq!(fresnel_impedance(0.0, Frequency::ZERO, 1.0), Err(CasimirError::IndeterminateLimit));
        assert!(n0_term_coefficients(N0Prescription::Auto, 1.0).is_err());
        assert!(n0_term_coefficients(N0Prescription::IdealLike, 0.0).is_err());
    }

    #[test]
    fn perfect_reflector_impedance() {
        assert_eq!(fresnel_impedance(0.0, f(1e14), 1e7).unwrap(), ReflectionPair::PERFECT);
    }

    #[test]
    fn infrared_reproduces_plasma_prescription() {
        let p = gold();
        let z = f(1e-6 * p.omega_p);
        let zi = impedance_imag_axis(&ResponseModel::ImpedanceInfrared(p), z).unwrap();
        let presc = N0Prescription::PlasmaLike { omega_p: p.omega_p };
        for q in q_samples(p.omega_p).into_iter().chain([1e5, 1e6, 1e7]) {
            let r = fresnel_impedance(zi, z, q).unwrap();
            let n0 = n0_term_coefficients(presc, q).unwrap();
            assert!((r.r_perp_sq - n0.r_perp_sq).abs() < 1e-4);
            assert!((r.r_par_sq - 1.0).abs() < 1e-4);
        }
    }

    #[test]
    fn normal_skin_reproduces_ideal_prescription() {
        let p = gold();
        let z = f(1e-8 * p.omega_tau);
        let zi = impedance_imag_axis(&ResponseModel::ImpedanceNormalSkin(p), z).unwrap();
        for q in q_samples(p.omega_p) {
            let r = fresnel_impedance(zi, z, q).unwrap();
            assert!((r.r_par_sq - 1.0).abs() < 1e-3 && (r.r_perp_sq - 1.0).abs() < 1e-3, "q={q:e}: {r:?}");
        }
    }

    #[test]
    fn normal_skin_te_deficit_shrinks_like_sqrt_zeta() {
        // 1 − r⊥² ≈ 4 ζ/(c q Z) ∝ √ζ at fixed q, so the limit is reached slowly
        // for q well below ωp/c.
        let p = gold();
        let q = 1e6;
        let deficit = |z: f64| {
            let zi = impedance_imag_axis(&ResponseModel::ImpedanceNormalSkin(p), f(z)).unwrap();
            1.0 - fresnel_impedance(zi, f(z), q).unwrap().r_perp_sq
        };
        let (d1, d2) = (deficit(1e-8 * p.omega_tau), deficit(1e-10 * p.omega_tau));
        assert_relative_eq!(d1 / d2, 10.0, max_relative = 2e-2);
    }

    #[test]
    fn n0_examples() {
        let wp = 1.37e16;
        for q in [1e3, 1e6, 1e9] {
            let d = n0_term_coefficients(N0Prescription::DrudeLimit, q).unwrap();
            assert_eq!((d.r_par_sq, d.r_perp_sq), (1.0, 0.0));
            assert_eq!(n0_term_coefficients(N0Prescription::IdealLike, q).unwrap(), ReflectionPair::PERFECT);
        }
        let pl = n0_term_coefficients(N0Prescription::PlasmaLike { omega_p: wp }, wp / C).unwrap();
        assert_eq!((pl.r_par_sq, pl.r_perp_sq), (1.0, 0.0));
    }

    #[test]
    fn auto_resolution() {
        let p = gold();
        let cases = [
            (ResponseModel::Drude(p), N0Prescription::DrudeLimit),
            (ResponseModel::Plasma(p), N0Prescription::PlasmaLike { omega_p: p.omega_p }),
            (ResponseModel::ImpedanceInfrared(p), N0Prescription::PlasmaLike { omega_p: p.omega_p }),
            (ResponseModel::ImpedanceNormalSkin(p), N0Prescription::IdealLike),
            (ResponseModel::ImpedanceAnomalousSkin(p), N0Prescription::IdealLike),
            (ResponseModel::matched(p), N0Prescription::IdealLike),
            (ResponseModel::IdealMetal, N0Prescription::IdealLike),
        ];
        for (m, want) in cases {
            assert_eq!(N0Prescription::Auto.resolve(&m).unwrap(), want, "{}", m.name());
        }
        assert_eq!(N0Prescription::DrudeLimit.resolve(&ResponseModel::IdealMetal).unwrap(), N0Prescription::DrudeLimit);
    }

    #[test]
    fn tm_limit_is_one_for_every_model() {
        let p = gold();
        let z = f(1e-9 * p.omega_tau);
        for m in [
            ResponseModel::Plasma(p),
            ResponseModel::Drude(p),
            ResponseModel::ImpedanceNormalSkin(p),
            ResponseModel::ImpedanceAnomalousSkin(p),
            ResponseModel::ImpedanceInfrared(p),
            ResponseModel::matched(p),
        ] {
            let resp = m.response_at(z).unwrap();
            let r = reflection_for(resp, z, 1e6).unwrap();
            assert!((r.r_par_sq - 1.0).abs() < 1e-3, "{}: {r:?}", m.name());
        }
    }

    proptest! {
        #[test]
        fn passivity_dielectric(eps in 1.0f64..1e12, z in 1e10f64..1e17, extra in 0.0f64..1e3) {
            let y = z / C * (1.0 + extra);
            let r = fresnel_dielectric(eps, f(z), y).unwrap();
            prop_assert!((0.0..=1.0).contains(&r.r_par_sq));
            prop_assert!((0.0..=1.0).contains(&r.r_perp_sq));
        }

        #[test]
        fn passivity_impedance(zi in 0.0f64..10.0, z in 1e10f64..1e17, extra in 0.0f64..1e3) {
            let y = z / C * (1.0 + extra);
            let r = fresnel_impedance(zi, f(z), y).unwrap();
            prop_assert!((0.0..=1.0).contains(&r.r_par_sq));
            prop_assert!((0.0..=1.0).contains(&r.r_perp_sq));
        }

        #[test]
        fn passivity_plasma_prescription(q in 1e2f64..1e10) {
            let r = n0_term_coefficients(N0Prescription::PlasmaLike { omega_p: 1.37e16 }, q).unwrap();
            prop_assert!((0.0..=1.0).contains(&r.r_perp_sq));
        }
    }
}
