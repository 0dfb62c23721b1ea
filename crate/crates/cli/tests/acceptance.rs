//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Criteria listed in `KNOWN_FAILURES` are reported like any other but do not
//! change the exit status; every other failure does.

use std::f64::consts::PI;
use std::process::Command;
use std::time::{Duration, Instant};

use casimir_core::units::{C, HBAR, K_B, ZETA_3};
use casimir_core::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const KNOWN_FAILURES: &[&str] = &["nernst-matched"];

struct Outcome {
    id: &'static str,
    title: &'static str,
    passed: bool,
    detail: String,
}

fn gold() -> MaterialParams {
    MaterialParams::new(ev_to_radsec(9.0).unwrap().rad_per_s(), ev_to_radsec(0.035).unwrap().rad_per_s(), 4.67e-3)
        .unwrap()
}

fn rel(x: f64, y: f64) -> f64 {
    ((x - y) / y).abs()
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t0 = Instant::now();
    let v = f();
    (v, t0.elapsed())
}

fn q_samples(omega_p: f64) -> Vec<f64> {
    (0..10).map(|i| 0.5 * omega_p / C * 20f64.powf(i as f64 / 9.0)).collect()
}

fn ideal_zero_t_energy() -> Outcome {
    let s = QuadratureSettings::default();
    let mut worst = 0.0f64;
    let mut slowest = Duration::ZERO;
    for a in [1e-7, 1e-6, 1e-5] {
        let (e, dt) = timed(|| zero_t_energy(a, &ResponseModel::IdealMetal, &s).unwrap());
        worst = worst.max(rel(e.value, -PI * PI * HBAR * C / (720.0 * a.powi(3))));
        slowest = slowest.max(dt);
    }
    Outcome {
        id: "ideal-zero-t",
        title: "ideal-metal zero-temperature energy",
        passed: worst <= 1e-6 && slowest < Duration::from_secs(1),
        detail: format!("max rel err {worst:.2e} (tol 1e-6), slowest point {slowest:.2?} (limit 1 s)"),
    }
}

fn ideal_classical_limit() -> Outcome {
    let s = QuadratureSettings::default();
    let (a, t) = (1e-5, 300.0);
    let f = free_energy(a, t, &ResponseModel::IdealMetal, N0Prescription::Auto, &s).unwrap();
    let err = rel(f.value, -K_B * t * ZETA_3 / (8.0 * PI * a * a));
    Outcome {
        id: "ideal-classical",
        title: "ideal-metal classical limit at 10 um, 300 K",
        passed: err <= 1e-4,
        detail: format!("rel err {err:.2e} (tol 1e-4)"),
    }
}

fn zero_frequency_limits() -> Outcome {
    let p = gold();
    let qs = q_samples(p.omega_p);

    let z = Frequency::new(1e-6 * p.omega_tau).unwrap();
    let eps = eps_imag_axis(&ResponseModel::Drude(p), z).unwrap();
    let drude = qs
        .iter()
        .map(|&q| {
            let r = fresnel_dielectric(eps, z, (q * q + (z.rad_per_s() / C).powi(2)).sqrt()).unwrap();
            (r.r_par_sq - 1.0).abs().max(r.r_perp_sq)
        })
        .fold(0.0, f64::max);

    let z = Frequency::new(1e-6 * p.omega_p).unwrap();
    let zi = impedance_imag_axis(&ResponseModel::ImpedanceInfrared(p), z).unwrap();
    let plasma = N0Prescription::PlasmaLike { omega_p: p.omega_p };
    let infrared = qs
        .iter()
        .map(|&q| {
            let r = fresnel_impedance(zi, z, (q * q + (z.rad_per_s() / C).powi(2)).sqrt()).unwrap();
            let n0 = n0_term_coefficients(plasma, q).unwrap();
            (r.r_par_sq - n0.r_par_sq).abs().max((r.r_perp_sq - n0.r_perp_sq).abs())
        })
        .fold(0.0, f64::max);

    let z = Frequency::new(1e-8 * p.omega_tau).unwrap();
    let zi = impedance_imag_axis(&ResponseModel::ImpedanceNormalSkin(p), z).unwrap();
    let normal = qs
        .iter()
        .map(|&q| {
            let r = fresnel_impedance(zi, z, (q * q + (z.rad_per_s() / C).powi(2)).sqrt()).unwrap();
            (r.r_par_sq - 1.0).abs().max((r.r_perp_sq - 1.0).abs())
        })
        .fold(0.0, f64::max);

    Outcome {
        id: "zero-frequency",
        title: "zero-frequency reflection limits (Drude, infrared, normal skin)",
        passed: drude <= 1e-3 && infrared <= 1e-3 && normal <= 1e-3,
        detail: format!(
            "max deviation drude {drude:.2e}, infrared {infrared:.2e}, normal skin {normal:.2e} (tol 1e-3)"
        ),
    }
}

fn kramers_kronig() -> Outcome {
    let p = gold();
    let (wp, wt) = (p.omega_p, p.omega_tau);
    let omega: Vec<f64> = (0..200).map(|i| 1e11 * 1e7f64.powf(i as f64 / 199.0)).collect();
    let eps2: Vec<f64> = omega.iter().map(|&w| wp * wp * wt / (w * (w * w + wt * wt))).collect();
    let table = OpticalTable::new(omega, eps2).unwrap();
    let (worst, dt) = timed(|| {
        (0..50)
            .map(|i| {
                let z = 1e13 * 1e3f64.powf(i as f64 / 49.0);
                let kk = kk_transform(&table, Frequency::new(z).unwrap()).unwrap();
                rel(kk.value, 1.0 + wp * wp / (z * (z + wt)))
            })
            .fold(0.0, f64::max)
    });
    Outcome {
        id: "kramers-kronig",
        title: "dispersion relation on a tabulated Drude spectrum",
        passed: worst <= 2e-3 && dt < Duration::from_secs(5),
        detail: format!("max rel err {worst:.2e} (tol 2e-3), 50 points in {dt:.2?} (limit 5 s)"),
    }
}

fn prescription_difference() -> Outcome {
    let s = QuadratureSettings::default();
    let m = ResponseModel::Drude(gold());
    let mut ok = true;
    let mut parts = Vec::new();
    for (a, t) in [(0.5e-6, 300.0), (1e-6, 300.0), (1e-6, 77.0)] {
        let ideal = free_energy(a, t, &m, N0Prescription::IdealLike, &s).unwrap();
        let drude = free_energy(a, t, &m, N0Prescription::DrudeLimit, &s).unwrap();
        let diff = ideal.value - drude.value;
        let expect = -K_B * t * ZETA_3 / (16.0 * PI * a * a);
        let tol = ideal.quad_error + ideal.tail_bound + drude.quad_error + drude.tail_bound;
        ok &= (diff - expect).abs() <= tol;
        parts.push(format!("|Δ|={:.1e}≤{tol:.1e}", (diff - expect).abs()));
    }
    Outcome {
        id: "prescription-difference",
        title: "ideal-like minus Drude-limit n=0 closed form",
        passed: ok,
        detail: parts.join(", "),
    }
}

fn pressure_cross_check() -> Outcome {
    let s = QuadratureSettings::default();
    let p = pressure(1e-6, 300.0, &ResponseModel::Drude(gold()), N0Prescription::Auto, &s).unwrap();
    let a = 1e-6;
    let ideal = pressure(a, 1.0, &ResponseModel::IdealMetal, N0Prescription::Auto, &s).unwrap();
    let ideal_err = rel(ideal.analytic, -PI * PI * HBAR * C / (240.0 * a.powi(4)));
    Outcome {
        id: "pressure",
        title: "pressure: integrand vs five-point derivative, ideal low-T limit",
        passed: p.discrepancy <= 1e-4 && ideal_err <= 1e-3,
        detail: format!("Drude discrepancy {:.2e} (tol 1e-4), ideal rel err {ideal_err:.2e} (tol 1e-3)", p.discrepancy),
    }
}

fn nernst(id: &'static str, title: &'static str, model: ResponseModel, presc: N0Prescription) -> Outcome {
    let s = QuadratureSettings::default();
    let grid = [1.0, 2.0, 5.0, 10.0, 20.0, 50.0];
    let (r, dt) = timed(|| nernst_check(1e-6, &model, presc, &s, &grid).unwrap());
    let s1 = r.entropies[0].s.abs();
    let s50 = r.entropies[5].s.abs();
    let suppressed = s1 < 0.1 * s50;
    Outcome {
        id,
        title,
        passed: r.passed && suppressed && dt < Duration::from_secs(120),
        detail: format!(
            "intercept {:.2e} ± {:.2e} ({}), |S(1 K)|/|S(50 K)| = {:.2e} (limit 0.1), {dt:.2?}",
            r.intercept,
            r.intercept_sigma,
            if r.passed { "consistent with 0" } else { "inconsistent with 0" },
            s1 / s50
        ),
    }
}

fn methodological_comparison() -> Outcome {
    let s = QuadratureSettings::default();
    let rows = prescription_comparison(&[1e-7, 3e-7, 5e-7], 300.0, &gold(), &s).unwrap();
    let mut ok = true;
    let mut parts = Vec::new();
    for pair in rows.chunks(4) {
        let gkm = pair.iter().find(|r| r.method == ComparisonMethod::GkmRecipe).unwrap();
        let matched = pair.iter().find(|r| r.method == ComparisonMethod::Matched).unwrap();
        let (g, m) = (gkm.correction.delta_f.abs(), matched.correction.delta_f.abs());
        ok &= m > g;
        parts.push(format!("{:.0} nm: {:.2e} vs {:.2e}", gkm.a * 1e9, m, g));
    }
    Outcome {
        id: "comparison",
        title: "matched-regime correction exceeds the fixed-infrared one",
        passed: ok,
        detail: format!("|ΔF| matched vs GKM-recipe: {}", parts.join("; ")),
    }
}

fn cli_csv(args: &[&str]) -> Vec<u8> {
    let o = Command::new(env!("CARGO_BIN_EXE_casimir")).args(args).output().expect("spawn casimir");
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    o.stdout
}

fn determinism_and_honesty() -> Outcome {
    let args = ["compare", "--a", "1e-7,3e-7,5e-7", "--T", "300"];
    let identical = cli_csv(&args) == cli_csv(&args);

    let g = gold();
    let models = [
        ResponseModel::IdealMetal,
        ResponseModel::Plasma(g),
        ResponseModel::Drude(g),
        ResponseModel::ImpedanceNormalSkin(g),
        ResponseModel::ImpedanceAnomalousSkin(g),
        ResponseModel::ImpedanceInfrared(g),
        ResponseModel::matched(g),
    ];
    let base = QuadratureSettings::default();
    let tight =
        QuadratureSettings { rel_tol: base.rel_tol / 10.0, matsubara_tail_tol: base.matsubara_tail_tol / 10.0, ..base };
    let mut rng = StdRng::seed_from_u64(2024);
    let (mut honest, mut certified) = (0, 0);
    for _ in 0..20 {
        let m = &models[rng.random_range(0..models.len())];
        let a = 10f64.powf(rng.random_range(-7.0..-5.0));
        let t = rng.random_range(10.0..400.0);
        let f = free_energy(a, t, m, N0Prescription::Auto, &base).unwrap();
        let fine = free_energy(a, t, m, N0Prescription::Auto, &tight).unwrap();
        if (f.value - fine.value).abs() <= f.quad_error + f.tail_bound {
            honest += 1;
        }
        let extra: f64 = (f.n_terms..2 * f.n_terms)
            .map(|n| matsubara_term(n, a, t, m, N0Prescription::Auto, &base).unwrap().value)
            .sum();
        if extra.abs() <= f.tail_bound {
            certified += 1;
        }
    }
    Outcome {
        id: "determinism",
        title: "byte-identical reruns, honest error estimates, tail certificate",
        passed: identical && honest == 20 && certified == 20,
        detail: format!("rerun identical: {identical}; error bound held {honest}/20; tail bound held {certified}/20"),
    }
}

fn main() {
    let t0 = Instant::now();
    let outcomes = [
        ideal_zero_t_energy(),
        ideal_classical_limit(),
        zero_frequency_limits(),
        kramers_kronig(),
        prescription_difference(),
        pressure_cross_check(),
        nernst("nernst-ideal", "Nernst check: ideal metal", ResponseModel::IdealMetal, N0Prescription::Auto),
        nernst(
            "nernst-matched",
            "Nernst check: matched impedance with ideal-like n=0",
            ResponseModel::matched(gold()),
            N0Prescription::IdealLike,
        ),
        methodological_comparison(),
        determinism_and_honesty(),
    ];
    let mut unexpected = 0;
    for o in &outcomes {
        let known = KNOWN_FAILURES.contains(&o.id);
        let tag = match (o.passed, known) {
            (true, _) => "PASS",
            (false, true) => "FAIL (known)",
            (false, false) => {
                unexpected += 1;
                "FAIL"
            }
        };
        println!("{tag:<12} {}: {}", o.title, o.detail);
    }
    println!("acceptance finished in {:.1?}", t0.elapsed());
    if unexpected > 0 {
        std::process::exit(1);
    }
}
