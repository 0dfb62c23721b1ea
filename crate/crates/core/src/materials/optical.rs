//! Tabulated ε″(ω) and its dispersion-relation transform to ε(iζ).
//!
//! ε(iζ) = 1 + (2/π) ∫₀^∞ ω ε″(ω) / (ω² + ζ²) dω is split into three pieces:
//! a Drude (or power-law) extension below the first row, the table body with
//! log-log linear interpolation, and an ω^(−p) extension above the last row.
//! Both extensions are integrated in closed form where one exists.

use std::f64::consts::PI;

use thiserror::Error;

use crate::error::{CasimirError, Result};
use crate::quad::{gauss_kronrod, integrate, Tolerance};
use crate::units::Frequency;

pub const MIN_ROWS: usize = 8;
pub const DEFAULT_HIGH_EXPONENT: f64 = 3.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TableError {
    #[error("table has {0} rows, at least {MIN_ROWS} are required")]
    TooFewRows(usize),
    #[error("row {row}: omega is not strictly increasing")]
    NotIncreasing { row: usize },
    #[error("row {row}: eps2 is negative")]
    NegativeEps2 { row: usize },
    #[error("row {row}: non-finite or non-positive omega / non-finite eps2")]
    NonFinite { row: usize },
    #[error("low-frequency extrapolation ε″ ∝ ω^{0} does not converge (needs exponent > -2)")]
    DivergentLowTail(f64),
    #[error("high-frequency exponent must be >= 3, got {0}")]
    BadHighExponent(f64),
}

impl From<TableError> for CasimirError {
    fn from(e: TableError) -> Self {
        CasimirError::Validation(e.to_string())
    }
}

/// Model for ε″ below the first tabulated frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LowTail {
    /// ε″ = ωp² ωτ / (ω (ω² + ωτ²)).
    Drude { omega_p: f64, omega_tau: f64 },
    /// ε″ = eps2_start · (ω / ω_start)^exponent, exponent > −2.
    PowerLaw { exponent: f64 },
    /// ε″ = 0.
    Vacuum,
}

/// ε″ = eps2_end · (ω / ω_end)^(−exponent) above the last row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HighTail {
    pub exponent: f64,
}

/// Validated, immutable ε″(ω) table.
#[derive(Debug, Clone, PartialEq)]
pub struct OpticalTable {
    omega: Vec<f64>,
    eps2: Vec<f64>,
    low_tail: LowTail,
    high_tail: HighTail,
}

/// ε(iζ) with an error estimate covering quadrature and interpolation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KkValue {
    pub value: f64,
    pub error: f64,
}

impl OpticalTable {
    /// Validates the rows and fits both extensions (Drude fit on the first two rows, p = 3 above).
    pub fn new(omega: Vec<f64>, eps2: Vec<f64>) -> std::result::Result<Self, TableError> {
        assert_eq!(omega.len(), eps2.len(), "column lengths differ");
        if omega.len() < MIN_ROWS {
            return Err(TableError::TooFewRows(omega.len()));
        }
        for (row, (&w, &e)) in omega.iter().zip(&eps2).enumerate() {
            if !(w.is_finite() && w > 0.0 && e.is_finite()) {
                return Err(TableError::NonFinite { row });
            }
            if e < 0.0 {
                return Err(TableError::NegativeEps2 { row });
            }
            if row > 0 && w <= omega[row - 1] {
                return Err(TableError::NotIncreasing { row });
            }
        }
        let low_tail = fit_low_tail(omega[0], eps2[0], omega[1], eps2[1])?;
        Ok(OpticalTable { omega, eps2, low_tail, high_tail: HighTail { exponent: DEFAULT_HIGH_EXPONENT } })
    }

    pub fn with_low_tail(mut self, tail: LowTail) -> std::result::Result<Self, TableError> {
        if let LowTail::PowerLaw { exponent } = tail {
            if !(exponent > -2.0) {
                return Err(TableError::DivergentLowTail(exponent));
            }
        }
        self.low_tail = tail;
        Ok(self)
    }

    pub fn with_high_exponent(mut self, exponent: f64) -> std::result::Result<Self, TableError> {
        if !(exponent >= 3.0 && exponent.is_finite()) {
            return Err(TableError::BadHighExponent(exponent));
        }
        self.high_tail = HighTail { exponent };
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.omega.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omega.is_empty()
    }

    pub fn omega_range(&self) -> (f64, f64) {
        (self.omega[0], self.omega[self.omega.len() - 1])
    }

    pub fn rows(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.omega.iter().copied().zip(self.eps2.iter().copied())
    }

    pub fn low_tail(&self) -> LowTail {
        self.low_tail
    }

    pub fn high_tail(&self) -> HighTail {
        self.high_tail
    }

    /// Interpolated ε″(ω), including both extensions.
    pub fn eps2_at(&self, w: f64) -> f64 {
        let n = self.omega.len();
        if w < self.omega[0] {
            return match self.low_tail {
                LowTail::Drude { omega_p, omega_tau } => {
                    omega_p * omega_p * omega_tau / (w * (w * w + omega_tau * omega_tau))
                }
                LowTail::PowerLaw { exponent } => self.eps2[0] * (w / self.omega[0]).powf(exponent),
                LowTail::Vacuum => 0.0,
            };
        }
        if w > self.omega[n - 1] {
            return self.eps2[n - 1] * (w / self.omega[n - 1]).powf(-self.high_tail.exponent);
        }
        let i = match self.omega.binary_search_by(|x| x.total_cmp(&w)) {
            Ok(i) => return self.eps2[i],
            Err(i) => i - 1,
        };
        Segment::new(self.omega[i], self.eps2[i], self.omega[i + 1], self.eps2[i + 1]).eval(w)
    }
}

fn fit_low_tail(w1: f64, e1: f64, w2: f64, e2: f64) -> std::result::Result<LowTail, TableError> {
    if e1 == 0.0 || e2 == 0.0 {
        return Ok(LowTail::Vacuum);
    }
    // g(ω) = ω ε″ = ωp² ωτ / (ω² + ωτ²) for a Drude metal.
    let (g1, g2) = (w1 * e1, w2 * e2);
    if g1 > g2 {
        let tau_sq = (g2 * w2 * w2 - g1 * w1 * w1) / (g1 - g2);
        if tau_sq > 0.0 {
            let omega_tau = tau_sq.sqrt();
            let omega_p = (g1 * (w1 * w1 + tau_sq) / omega_tau).sqrt();
            return Ok(LowTail::Drude { omega_p, omega_tau });
        }
    }
    let exponent = (e2 / e1).ln() / (w2 / w1).ln();
    if exponent > -2.0 {
        Ok(LowTail::PowerLaw { exponent })
    } else {
        Err(TableError::DivergentLowTail(exponent))
    }
}

/// One interpolation interval: log-log linear when both ends are positive, linear otherwise.
#[derive(Debug, Clone, Copy)]
struct Segment {
    w0: f64,
    w1: f64,
    e0: f64,
    e1: f64,
    slope: Option<f64>,
}

impl Segment {
    fn new(w0: f64, e0: f64, w1: f64, e1: f64) -> Self {
        let slope = (e0 > 0.0 && e1 > 0.0).then(|| (e1 / e0).ln() / (w1 / w0).ln());
        Segment { w0, w1, e0, e1, slope }
    }

    fn eval(&self, w: f64) -> f64 {
        match self.slope {
            Some(s) => self.e0 * (w / self.w0).powf(s),
            None => self.e0 + (self.e1 - self.e0) * (w - self.w0) / (self.w1 - self.w0),
        }
    }

    /// ∫ ω ε″/(ω²+ζ²) dω over the interval, returned as (value, error).
    fn integral(&self, zeta: f64, tol: Tolerance) -> (f64, f64) {
        if self.e0 == 0.0 && self.e1 == 0.0 {
            return (0.0, 0.0);
        }
        let z2 = zeta * zeta;
        let r = match self.slope {
            // ω = e^s: integrand ω² ε″ / (ω² + ζ²) in s.
            Some(_) => integrate(
                |s: f64| {
                    let w = s.exp();
                    w * w * self.eval(w) / (w * w + z2)
                },
                self.w0.ln(),
                self.w1.ln(),
                &[],
                tol,
            ),
            None => integrate(|w: f64| w * self.eval(w) / (w * w + z2), self.w0, self.w1, &[], tol),
        };
        match r {
            Ok(i) => (i.value, i.error),
            Err(nc) => (nc.0.value, nc.0.error),
        }
    }
}

const SEGMENT_TOL: Tolerance = Tolerance { rel: 1e-12, abs: 0.0, max_subdivisions: 64 };

/// ε(iζ) from the table by the dispersion relation.
pub fn kk_transform(table: &OpticalTable, zeta: Frequency) -> Result<KkValue> {
    let z = zeta.rad_per_s();
    if !(z > 0.0) {
        return Err(CasimirError::Domain("kk_transform needs zeta > 0".into()));
    }
    let n = table.omega.len();

    let low = low_tail_integral(table, z);
    let high = high_tail_integral(table.eps2[n - 1], table.high_tail.exponent, z / table.omega[n - 1]);

    let body = |step: usize| {
        let mut idx: Vec<usize> = (0..n).step_by(step).collect();
        if *idx.last().unwrap() != n - 1 {
            idx.push(n - 1);
        }
        let mut value = crate::summation::KahanSum::new();
        let mut error = 0.0;
        for w in idx.windows(2) {
            let (i, j) = (w[0], w[1]);
            let seg = Segment::new(table.omega[i], table.eps2[i], table.omega[j], table.eps2[j]);
            let (v, e) = seg.integral(z, SEGMENT_TOL);
            value.add(v);
            error += e;
        }
        (value.value(), error)
    };
    let (fine, fine_err) = body(1);
    let (coarse, _) = body(2);
    // Interpolation error is O(h²); the full fine/coarse gap bounds it with margin.
    let interp_err = (fine - coarse).abs();

    let scale = 2.0 / PI;
    Ok(KkValue {
        value: 1.0 + scale * (low.0 + fine + high.0),
        error: scale * (low.1 + high.1 + fine_err + interp_err),
    })
}

fn low_tail_integral(table: &OpticalTable, zeta: f64) -> (f64, f64) {
    let w1 = table.omega[0];
    match table.low_tail {
        LowTail::Vacuum => (0.0, 0.0),
        LowTail::Drude { omega_p, omega_tau } => {
            // ωp² ωτ ∫₀^ω₁ dω / ((ω²+ωτ²)(ω²+ζ²))
            let (a, b) = (omega_tau, zeta);
            let pref = omega_p * omega_p * omega_tau;
            if ((b - a) / a).abs() > 1e-3 {
                let f = |x: f64| (w1 / x).atan() / x;
                (pref * (f(a) - f(b)) / ((b - a) * (b + a)), 0.0)
            } else {
                let g = |w: f64| 1.0 / ((w * w + a * a) * (w * w + b * b));
                let (v, e) = gauss_kronrod(&g, 0.0, w1);
                (pref * v, pref * e)
            }
        }
        LowTail::PowerLaw { exponent } => {
            // eps2_1 ∫₀¹ v^(1+s)/(v²+x²) dv with v = u^(1/α), α = s+2.
            let alpha = exponent + 2.0;
            let x = zeta / w1;
            let x2 = x * x;
            let p = 2.0 / alpha;
            let f = |u: f64| 1.0 / (u.powf(p) + x2);
            let tol = Tolerance { rel: 1e-12, abs: 0.0, max_subdivisions: 200 };
            let i = match integrate(f, 0.0, 1.0, &[], tol) {
                Ok(i) => i,
                Err(nc) => nc.0,
            };
            let pref = table.eps2[0] / alpha;
            (pref * i.value, pref * i.error)
        }
    }
}

/// eps2_N ∫₀¹ v^(p−1)/(1+x²v²) dv, x = ζ/ω_N.
fn high_tail_integral(eps2_end: f64, p: f64, x: f64) -> (f64, f64) {
    if eps2_end == 0.0 {
        return (0.0, 0.0);
    }
    if p == 3.0 {
        let x2 = x * x;
        let i = if x < 1e-2 {
            1.0 / 3.0 - x2 / 5.0 + x2 * x2 / 7.0 - x2 * x2 * x2 / 9.0
        } else {
            (1.0 - x.atan() / x) / x2
        };
        return (eps2_end * i, 0.0);
    }
    let f = |v: f64| v.powf(p - 1.0) / (1.0 + x * x * v * v);
    let tol = Tolerance { rel: 1e-12, abs: 0.0, max_subdivisions: 100 };
    let i = match integrate(f, 0.0, 1.0, &[], tol) {
        Ok(i) => i,
        Err(nc) => nc.0,
    };
    (eps2_end * i.value, eps2_end * i.error)
}
