//! Kramers–Kronig transform of measured absorption to the imaginary axis:
//!
//! ε(iξ) = 1 + (2/π) ∫₀^∞ ω ε″(ω) / (ω² + ξ²) dω
//!
//! ε″ is a Drude tail below the join energy, a log-log interpolant of the
//! samples inside the measured range, and a power law above it.

use std::f64::consts::FRAC_2_PI;

use crate::constants::ev_to_radps;
use crate::error::{Error, Result};
use crate::quadrature::{integrate, integrate_semi_infinite, Tolerance};
use crate::summation::NeumaierSum;

use super::table::OpticalDataTable;

/// Target relative accuracy of one transform.
pub const KK_REL_TOL: f64 = 1e-6;

// Each piece is integrated well below the overall target.
const PIECE_TOL: f64 = 1e-10;
const PIECE_PANELS: usize = 200;

/// Drude extrapolation below the measured range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DrudeTail {
    /// rad/s
    pub omega_p: f64,
    /// rad/s
    pub gamma: f64,
    /// Photon energy (eV) below which the Drude form replaces the data.
    pub join_energy_ev: f64,
}

impl DrudeTail {
    pub fn new(omega_p: f64, gamma: f64, join_energy_ev: f64) -> Result<Self> {
        // ω_p = 0 is accepted and means "no low-frequency absorption".
        if !(omega_p >= 0.0 && omega_p.is_finite()) {
            return Err(Error::Invalid(format!(
                "tail plasma frequency must be >= 0, got {omega_p}"
            )));
        }
        if !(gamma >= 0.0 && gamma.is_finite()) {
            return Err(Error::Invalid(format!(
                "tail relaxation frequency must be >= 0, got {gamma}"
            )));
        }
        if !(join_energy_ev > 0.0 && join_energy_ev.is_finite()) {
            return Err(Error::Invalid(format!(
                "join energy must be positive, got {join_energy_ev}"
            )));
        }
        Ok(DrudeTail {
            omega_p,
            gamma,
            join_energy_ev,
        })
    }

    /// Real-axis Drude permittivity (ε′, ε″) at angular frequency ω > 0.
    pub fn eps_real_axis(&self, omega: f64) -> (f64, f64) {
        drude_real_axis(self.omega_p, self.gamma, omega)
    }
}

/// ε(ω) = 1 − ω_p²/(ω(ω+iγ)) split into (ε′, ε″).
pub fn drude_real_axis(omega_p: f64, gamma: f64, omega: f64) -> (f64, f64) {
    let wp2 = omega_p * omega_p;
    let denom = omega * omega + gamma * gamma;
    (1.0 - wp2 / denom, wp2 * gamma / (omega * denom))
}

/// ε″(ω) ≈ A·(ω_max/ω)^p above the last sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerTail {
    pub amplitude: f64,
    pub exponent: f64,
}

impl PowerTail {
    pub fn new(amplitude: f64, exponent: f64) -> Result<Self> {
        if !(amplitude >= 0.0 && amplitude.is_finite()) {
            return Err(Error::Invalid(format!(
                "tail amplitude must be >= 0, got {amplitude}"
            )));
        }
        if !(exponent > 1.0 && exponent.is_finite()) {
            return Err(Error::Invalid(format!(
                "tail exponent must exceed 1, got {exponent}"
            )));
        }
        Ok(PowerTail {
            amplitude,
            exponent,
        })
    }

    pub fn zero() -> Self {
        PowerTail {
            amplitude: 0.0,
            exponent: FALLBACK_EXPONENT,
        }
    }
}

/// Exponent used when the fitted one is not integrable (free-electron decay).
pub const FALLBACK_EXPONENT: f64 = 3.0;

/// Outcome of fitting the high-frequency tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailFit {
    pub tail: PowerTail,
    /// RMS of the log-space residuals over the fitted samples.
    pub rms_log_residual: f64,
    pub points: usize,
    /// The fitted exponent was ≤ 1 and was replaced by [`FALLBACK_EXPONENT`].
    pub clamped: bool,
}

/// Least-squares fit of ln ε″ against ln E over the top decade of samples.
/// The amplitude is anchored to the last sample so ε″ stays continuous.
pub fn fit_power_tail(table: &OpticalDataTable) -> TailFit {
    let samples = table.samples();
    let e_max = table.max_energy_ev();
    let mut pts: Vec<(f64, f64)> = samples
        .iter()
        .filter(|s| s.energy_ev >= e_max / 10.0 && s.eps2 > 0.0)
        .map(|s| (s.energy_ev.ln(), s.eps2.ln()))
        .collect();
    if pts.len() < 2 {
        pts = samples
            .iter()
            .rev()
            .filter(|s| s.eps2 > 0.0)
            .take(2)
            .map(|s| (s.energy_ev.ln(), s.eps2.ln()))
            .collect();
    }
    let last = samples[samples.len() - 1].eps2;
    if pts.len() < 2 || last <= 0.0 {
        return TailFit {
            tail: PowerTail::zero(),
            rms_log_residual: 0.0,
            points: pts.len(),
            clamped: true,
        };
    }

    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rms = (pts
        .iter()
        .map(|p| (p.1 - (intercept + slope * p.0)).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();

    let fitted = -slope;
    let clamped = !(fitted > 1.0 && fitted.is_finite());
    TailFit {
        tail: PowerTail {
            amplitude: last,
            exponent: if clamped { FALLBACK_EXPONENT } else { fitted },
        },
        rms_log_residual: rms,
        points: pts.len(),
        clamped,
    }
}

/// ε(iξ) of tabulated data with Drude and power-law extrapolations, ξ in rad/s.
pub fn kk_transform(
    table: &OpticalDataTable,
    low: &DrudeTail,
    high: &PowerTail,
    xi: f64,
) -> Result<f64> {
    if !(xi > 0.0 && xi.is_finite()) {
        return Err(Error::Domain(format!(
            "Kramers–Kronig transform needs xi > 0, got {xi}"
        )));
    }
    let omega_join = ev_to_radps(low.join_energy_ev);
    let mut total = NeumaierSum::new();
    total.add(low_tail_integral(low, omega_join, xi)?);
    total.add(data_integral(table, omega_join, xi)?);
    total.add(high_tail_integral(table, high, xi)?);
    Ok(1.0 + total.total())
}

fn piece_tol() -> Tolerance {
    Tolerance {
        rel: PIECE_TOL,
        abs: 0.0,
    }
}

// (2/π) ω_p²γ ∫₀^{ω_j} dω / ((ω²+γ²)(ω²+ξ²))
fn low_tail_integral(low: &DrudeTail, omega_join: f64, xi: f64) -> Result<f64> {
    let wp2 = low.omega_p * low.omega_p;
    let g = low.gamma;
    if wp2 == 0.0 {
        return Ok(0.0);
    }
    let diff = xi * xi - g * g;
    if diff.abs() > 1e-3 * xi * xi {
        let bracket = (omega_join / g).atan() - (g / xi) * (omega_join / xi).atan();
        return Ok(FRAC_2_PI * wp2 / diff * bracket);
    }
    let est = integrate(
        |w| wp2 * g / ((w * w + g * g) * (w * w + xi * xi)),
        0.0,
        omega_join,
        piece_tol(),
        PIECE_PANELS,
    )?;
    Ok(FRAC_2_PI * est.value)
}

fn data_integral(table: &OpticalDataTable, omega_join: f64, xi: f64) -> Result<f64> {
    let xi2 = xi * xi;
    let mut sum = NeumaierSum::new();
    for pair in table.samples().windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let (wa, wb) = (ev_to_radps(a.energy_ev), ev_to_radps(b.energy_ev));
        if wb <= omega_join {
            continue;
        }
        let (ea, eb) = (a.eps2, b.eps2);
        if ea == 0.0 && eb == 0.0 {
            continue;
        }
        let lo = wa.max(omega_join);
        let piece = if ea > 0.0 && eb > 0.0 {
            // Log-log interpolation, integrated in u = ln ω.
            let (ua, ub) = (wa.ln(), wb.ln());
            let slope = (eb / ea).ln() / (ub - ua);
            let h = |u: f64| {
                let w = u.exp();
                let w2 = w * w;
                ea * (slope * (u - ua)).exp() * w2 / (w2 + xi2)
            };
            integrate(h, lo.ln(), ub, piece_tol(), PIECE_PANELS)?.value
        } else {
            let k = (eb - ea) / (wb - wa);
            let h = |w: f64| w * (ea + k * (w - wa)) / (w * w + xi2);
            integrate(h, lo, wb, piece_tol(), PIECE_PANELS)?.value
        };
        sum.add(piece);
    }
    Ok(FRAC_2_PI * sum.total())
}

fn high_tail_integral(table: &OpticalDataTable, high: &PowerTail, xi: f64) -> Result<f64> {
    if high.amplitude == 0.0 {
        return Ok(0.0);
    }
    let xi2 = xi * xi;
    let u0 = ev_to_radps(table.max_energy_ev()).ln();
    let (a, p) = (high.amplitude, high.exponent);
    // In s = u − u₀: ε″ = A e^{−p s}, integrand ω²ε″/(ω²+ξ²).
    let h = |s: f64| a * (-p * s).exp() / (1.0 + xi2 * (-2.0 * (u0 + s)).exp());
    let est = integrate_semi_infinite(h, 0.0, 1.0 / p, piece_tol(), PIECE_PANELS)?;
    Ok(FRAC_2_PI * est.value)
}
