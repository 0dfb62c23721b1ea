//! Shared fixtures for the Criterion benchmarks in `benches/`.

use casimir_core::{ev_to_radsec, MaterialParams, OpticalTable};

/// Gold-like Drude parameters (ωp = 9.0 eV, ωτ = 0.035 eV, v_F/c = 4.67e-3).
pub fn gold() -> MaterialParams {
    MaterialParams::new(ev_to_radsec(9.0).unwrap().rad_per_s(), ev_to_radsec(0.035).unwrap().rad_per_s(), 4.67e-3)
        .unwrap()
}

/// Drude ε″ sampled log-uniformly on [1e11, 1e18] rad/s.
pub fn drude_table(rows: usize) -> OpticalTable {
    let p = gold();
    let omega: Vec<f64> = (0..rows).map(|i| 1e11 * 1e7f64.powf(i as f64 / (rows - 1) as f64)).collect();
    let eps2 = omega
        .iter()
        .map(|&w| p.omega_p * p.omega_p * p.omega_tau / (w * (w * w + p.omega_tau * p.omega_tau)))
        .collect();
    OpticalTable::new(omega, eps2).unwrap()
}
