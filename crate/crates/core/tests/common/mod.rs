#![allow(dead_code)]

use casimir_core::constants::ev_to_radps;
use casimir_core::lifshitz::{n_max_for_separation, MatsubaraConfig};
use casimir_core::material::synthetic::{drude_lorentz_table, log_grid, Oscillator};
use casimir_core::material::{
    fit_power_tail, DrudeTail, OpticalDataTable, PermittivityModel, ZeroMode,
};
use casimir_core::stack::Layer;

/// ε(iξ) = 10¹² stands in for a perfect conductor.
pub const MIRROR_EPS: f64 = 1e12;

pub fn mirror() -> Layer {
    Layer::nonmagnetic(PermittivityModel::Constant(MIRROR_EPS))
}

pub fn vacuum() -> Layer {
    Layer::vacuum()
}

pub fn dielectric(eps: f64) -> Layer {
    Layer::nonmagnetic(PermittivityModel::constant(eps).unwrap())
}

pub fn drude(omega_p_ev: f64, gamma_ev: f64) -> Layer {
    Layer::nonmagnetic(
        PermittivityModel::drude(ev_to_radps(omega_p_ev), ev_to_radps(gamma_ev)).unwrap(),
    )
}

pub fn gold_drude() -> Layer {
    drude(9.0, 0.035)
}

pub fn aluminium_drude() -> Layer {
    drude(12.5, 0.063)
}

/// Low-temperature stand-in for T = 0: 1 K with enough terms for `d`.
pub fn cold(d: f64) -> MatsubaraConfig {
    let n = n_max_for_separation(1.0, d, 1e-16);
    MatsubaraConfig::new(1.0, n, ZeroMode::FromModel).unwrap()
}

pub fn ideal_energy(d: f64) -> f64 {
    use casimir_core::constants::HBAR_C;
    -std::f64::consts::PI.powi(2) * HBAR_C / (720.0 * d.powi(3))
}

pub fn ideal_pressure(d: f64) -> f64 {
    use casimir_core::constants::HBAR_C;
    -std::f64::consts::PI.powi(2) * HBAR_C / (240.0 * d.powi(4))
}

pub fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

/// Interband absorption shared by both synthetic gold tables.
pub const GOLD_INTERBAND: [Oscillator; 1] = [Oscillator {
    strength: 1.5,
    center_ev: 3.5,
    width_ev: 2.0,
}];

pub const ALUMINIUM_INTERBAND: [Oscillator; 1] = [Oscillator {
    strength: 0.3,
    center_ev: 1.5,
    width_ev: 0.5,
}];

/// Closed-form ε(iξ) of a Drude–Lorentz model (eV parameters, ξ in rad/s).
pub fn drude_lorentz_imag(omega_p_ev: f64, gamma_ev: f64, osc: &[Oscillator], xi: f64) -> f64 {
    let (wp, g) = (ev_to_radps(omega_p_ev), ev_to_radps(gamma_ev));
    let mut e = 1.0 + wp * wp / (xi * (xi + g));
    for o in osc {
        let w0 = ev_to_radps(o.center_ev);
        e += o.strength * w0 * w0 / (w0 * w0 + xi * xi + ev_to_radps(o.width_ev) * xi);
    }
    e
}

fn tabulated(table: OpticalDataTable, omega_p_ev: f64, gamma_ev: f64) -> Layer {
    let low = DrudeTail::new(
        ev_to_radps(omega_p_ev),
        ev_to_radps(gamma_ev),
        table.min_energy_ev(),
    )
    .unwrap();
    let high = fit_power_tail(&table).tail;
    Layer::nonmagnetic(PermittivityModel::tabulated(table, low, high).unwrap())
}

pub fn au1_table() -> OpticalDataTable {
    let grid = log_grid(0.1, 200.0, 400).unwrap();
    drude_lorentz_table("synthetic-au1", 9.0, 0.035, &GOLD_INTERBAND, &grid).unwrap()
}

pub fn au2_table() -> OpticalDataTable {
    let grid = log_grid(0.04974, 4.133, 200).unwrap();
    drude_lorentz_table("synthetic-au2", 8.45, 0.047, &GOLD_INTERBAND, &grid).unwrap()
}

/// Synthetic gold with Drude extrapolation 9.0 / 0.035 eV.
pub fn au1() -> Layer {
    tabulated(au1_table(), 9.0, 0.035)
}

/// Au1 with the second gold table substituted below 4.2 eV.
pub fn au2() -> Layer {
    let stitched = au1_table().stitch_below(&au2_table(), 4.2).unwrap();
    tabulated(stitched, 8.45, 0.047)
}

pub fn al() -> Layer {
    let grid = log_grid(0.04, 200.0, 400).unwrap();
    let t = drude_lorentz_table("synthetic-al", 12.5, 0.063, &ALUMINIUM_INTERBAND, &grid).unwrap();
    tabulated(t, 12.5, 0.063)
}
