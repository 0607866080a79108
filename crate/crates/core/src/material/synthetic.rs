//! Analytic dielectric functions for generating stand-in optical tables.

use crate::constants::ev_to_radps;
use crate::error::{Error, Result};

use super::kk::drude_real_axis;
use super::table::OpticalDataTable;

/// Lorentz oscillator ε ⊃ s ω₀² / (ω₀² − ω² − iΓω), parameters in eV
/// except the dimensionless strength `s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Oscillator {
    pub strength: f64,
    pub center_ev: f64,
    pub width_ev: f64,
}

impl Oscillator {
    fn real_axis(&self, omega: f64) -> (f64, f64) {
        let w0 = ev_to_radps(self.center_ev);
        let g = ev_to_radps(self.width_ev);
        let a = w0 * w0 - omega * omega;
        let b = g * omega;
        let den = a * a + b * b;
        let s = self.strength * w0 * w0;
        (s * a / den, s * b / den)
    }
}

/// Drude term plus Lorentz oscillators on the real axis, (ε′, ε″); ω in rad/s.
pub fn drude_lorentz_real_axis(
    omega_p: f64,
    gamma: f64,
    oscillators: &[Oscillator],
    omega: f64,
) -> (f64, f64) {
    let (mut e1, mut e2) = drude_real_axis(omega_p, gamma, omega);
    for o in oscillators {
        let (a, b) = o.real_axis(omega);
        e1 += a;
        e2 += b;
    }
    (e1, e2)
}

/// `points` energies spaced geometrically over [lo, hi], eV.
pub fn log_grid(lo_ev: f64, hi_ev: f64, points: usize) -> Result<Vec<f64>> {
    if !(lo_ev > 0.0 && hi_ev > lo_ev && points >= 2) {
        return Err(Error::Invalid(format!(
            "bad grid [{lo_ev}, {hi_ev}] with {points} points"
        )));
    }
    let ratio = (hi_ev / lo_ev).powf(1.0 / (points - 1) as f64);
    let mut grid: Vec<f64> = (0..points).map(|i| lo_ev * ratio.powi(i as i32)).collect();
    grid[points - 1] = hi_ev;
    Ok(grid)
}

/// Table sampled from a Drude–Lorentz model (ω_p, γ in eV).
pub fn drude_lorentz_table(
    label: &str,
    omega_p_ev: f64,
    gamma_ev: f64,
    oscillators: &[Oscillator],
    energies_ev: &[f64],
) -> Result<OpticalDataTable> {
    let (wp, g) = (ev_to_radps(omega_p_ev), ev_to_radps(gamma_ev));
    OpticalDataTable::from_model(label, energies_ev, |w| {
        drude_lorentz_real_axis(wp, g, oscillators, w)
    })
}
