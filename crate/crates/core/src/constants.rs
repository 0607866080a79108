//! Physical constants (CODATA 2018) and unit conversions.
//!
//! All frequencies inside the crate are angular frequencies in rad/s. Photon
//! energies in eV appear only where data is read in or reported.

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Elementary charge, C (exact).
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
/// Boltzmann constant, J/K (exact).
pub const K_B: f64 = 1.380_649e-23;
/// Speed of light in vacuum, m/s (exact).
pub const C: f64 = 299_792_458.0;
/// ħc, J·m.
pub const HBAR_C: f64 = HBAR * C;
/// Apéry's constant ζ(3).
pub const ZETA_3: f64 = 1.202_056_903_159_594_2;

/// Photon energy in eV to angular frequency in rad/s.
pub fn ev_to_radps(energy_ev: f64) -> f64 {
    energy_ev * (ELEMENTARY_CHARGE / HBAR)
}

/// Angular frequency in rad/s to photon energy in eV.
pub fn radps_to_ev(omega: f64) -> f64 {
    omega * (HBAR / ELEMENTARY_CHARGE)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_ev_in_radps() {
        let w = ev_to_radps(1.0);
        assert!((w / 1.519_267e15 - 1.0).abs() < 1e-6, "{w}");
        assert_eq!(ev_to_radps(0.0), 0.0);
    }

    #[test]
    fn conversion_round_trip() {
        let e = radps_to_ev(ev_to_radps(4.133));
        assert!((e / 4.133 - 1.0).abs() < 1e-12);
    }
}
