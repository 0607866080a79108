//! Material response on the imaginary frequency axis.
//!
//! Every model is evaluated at ω = iξ, where passive media have a real
//! permittivity that decreases monotonically toward 1. The static limit
//! ξ → 0 is not evaluated here; it is described by [`ZeroLimit`] and resolved
//! against a [`ZeroMode`] prescription by the stack code.

mod kk;
pub mod synthetic;
mod table;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use crate::error::{Error, Result};

pub use kk::{
    drude_real_axis, fit_power_tail, kk_transform, DrudeTail, PowerTail, TailFit,
    FALLBACK_EXPONENT, KK_REL_TOL,
};
pub use table::{
    eps2_from_nk, read_samples, read_samples_path, write_csv, OpticalDataTable, OpticalSample,
    TableViolation,
};

/// How the n = 0 Matsubara term treats metallic (divergent) media.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum ZeroMode {
    /// Use the analytic ξ → 0 limit of each layer's own model.
    #[default]
    FromModel,
    /// Dissipative treatment: r^α = 0, r^β = 1 at a vacuum–metal interface.
    DrudeLike,
    /// Dissipationless treatment with γ = 0. `None` keeps each material's own
    /// plasma frequency; `Some(ω_p)` (rad/s) applies one value to all metals.
    PlasmaLike(Option<f64>),
}

impl fmt::Display for ZeroMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ZeroMode::FromModel => write!(f, "model"),
            ZeroMode::DrudeLike => write!(f, "drude"),
            ZeroMode::PlasmaLike(None) => write!(f, "plasma"),
            ZeroMode::PlasmaLike(Some(w)) => write!(f, "plasma(omega_p={w:e})"),
        }
    }
}

/// Static (ξ → 0) behaviour of a permittivity model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ZeroLimit {
    /// ε(0) is finite.
    Finite(f64),
    /// ε ≈ ω_p²/(γξ): diverges linearly, ε·ξ² → 0.
    Drude { omega_p: f64, gamma: f64 },
    /// ε ≈ ω_p²/ξ²: diverges quadratically, ε·ξ² → ω_p².
    Plasma { omega_p: f64 },
}

/// Permittivity on the imaginary frequency axis.
#[derive(Debug, Clone, PartialEq)]
pub enum PermittivityModel {
    Vacuum,
    /// Frequency-independent relative permittivity.
    Constant(f64),
    /// ε(iξ) = 1 + ω_p²/(ξ(ξ+γ)), frequencies in rad/s.
    Drude {
        omega_p: f64,
        gamma: f64,
    },
    /// Drude with γ = 0.
    Plasma {
        omega_p: f64,
    },
    /// Measured ε″ with Drude and power-law extrapolations, via Kramers–Kronig.
    Tabulated(Arc<TabulatedPermittivity>),
}

impl PermittivityModel {
    pub fn constant(eps: f64) -> Result<Self> {
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(Error::Invalid(format!(
                "constant permittivity must be positive, got {eps}"
            )));
        }
        Ok(PermittivityModel::Constant(eps))
    }

    pub fn drude(omega_p: f64, gamma: f64) -> Result<Self> {
        check_drude(omega_p, gamma)?;
        Ok(PermittivityModel::Drude { omega_p, gamma })
    }

    pub fn plasma(omega_p: f64) -> Result<Self> {
        check_drude(omega_p, 0.0)?;
        Ok(PermittivityModel::Plasma { omega_p })
    }

    pub fn tabulated(table: OpticalDataTable, low: DrudeTail, high: PowerTail) -> Result<Self> {
        Ok(PermittivityModel::Tabulated(Arc::new(
            TabulatedPermittivity::new(table, low, high)?,
        )))
    }

    pub fn name(&self) -> &'static str {
        match self {
            PermittivityModel::Vacuum => "vacuum",
            PermittivityModel::Constant(_) => "constant",
            PermittivityModel::Drude { .. } => "drude",
            PermittivityModel::Plasma { .. } => "plasma",
            PermittivityModel::Tabulated(_) => "tabulated",
        }
    }

    /// ε(iξ) for ξ in rad/s.
    ///
    /// ξ = 0 is rejected for the diverging models; the static term goes
    /// through [`PermittivityModel::zero_limit`] instead.
    pub fn eval(&self, xi: f64) -> Result<f64> {
        if xi.is_nan() || xi < 0.0 || xi.is_infinite() {
            return Err(Error::Domain(format!(
                "imaginary frequency must be finite and >= 0, got {xi}"
            )));
        }
        match self {
            PermittivityModel::Vacuum => Ok(1.0),
            PermittivityModel::Constant(eps) => Ok(*eps),
            PermittivityModel::Drude { omega_p, gamma } => {
                if xi == 0.0 {
                    return Err(Error::Divergent { model: "drude", xi });
                }
                Ok(1.0 + omega_p * omega_p / (xi * (xi + gamma)))
            }
            PermittivityModel::Plasma { omega_p } => {
                if xi == 0.0 {
                    return Err(Error::Divergent {
                        model: "plasma",
                        xi,
                    });
                }
                Ok(1.0 + omega_p * omega_p / (xi * xi))
            }
            PermittivityModel::Tabulated(t) => {
                if xi == 0.0 {
                    return Err(Error::Divergent {
                        model: "tabulated",
                        xi,
                    });
                }
                t.eval(xi)
            }
        }
    }

    pub fn zero_limit(&self) -> ZeroLimit {
        match self {
            PermittivityModel::Vacuum => ZeroLimit::Finite(1.0),
            PermittivityModel::Constant(eps) => ZeroLimit::Finite(*eps),
            PermittivityModel::Drude { omega_p, gamma } if *gamma > 0.0 => ZeroLimit::Drude {
                omega_p: *omega_p,
                gamma: *gamma,
            },
            PermittivityModel::Drude { omega_p, .. } | PermittivityModel::Plasma { omega_p } => {
                ZeroLimit::Plasma { omega_p: *omega_p }
            }
            PermittivityModel::Tabulated(t) => {
                let low = t.low_tail();
                if low.gamma > 0.0 {
                    ZeroLimit::Drude {
                        omega_p: low.omega_p,
                        gamma: low.gamma,
                    }
                } else {
                    ZeroLimit::Plasma {
                        omega_p: low.omega_p,
                    }
                }
            }
        }
    }

    /// Plasma frequency of a metallic model, rad/s.
    pub fn plasma_frequency(&self) -> Option<f64> {
        match self.zero_limit() {
            ZeroLimit::Finite(_) => None,
            ZeroLimit::Drude { omega_p, .. } | ZeroLimit::Plasma { omega_p } => Some(omega_p),
        }
    }
}

fn check_drude(omega_p: f64, gamma: f64) -> Result<()> {
    if !(omega_p > 0.0 && omega_p.is_finite()) {
        return Err(Error::Invalid(format!(
            "plasma frequency must be positive, got {omega_p}"
        )));
    }
    if !(gamma >= 0.0 && gamma.is_finite()) {
        return Err(Error::Invalid(format!(
            "relaxation frequency must be >= 0, got {gamma}"
        )));
    }
    Ok(())
}

/// Permeability on the imaginary frequency axis.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum PermeabilityModel {
    #[default]
    Unity,
    Constant(f64),
}

impl PermeabilityModel {
    pub fn constant(mu: f64) -> Result<Self> {
        if !(mu > 0.0 && mu.is_finite()) {
            return Err(Error::Invalid(format!(
                "permeability must be positive, got {mu}"
            )));
        }
        Ok(PermeabilityModel::Constant(mu))
    }

    pub fn eval(&self, _xi: f64) -> f64 {
        match self {
            PermeabilityModel::Unity => 1.0,
            PermeabilityModel::Constant(mu) => *mu,
        }
    }
}

/// Tabulated permittivity with memoized Kramers–Kronig evaluations.
///
/// The cache is keyed on the exact bit pattern of ξ, so the Matsubara grid
/// for a given temperature is transformed once and reused across separations.
#[derive(Debug)]
pub struct TabulatedPermittivity {
    table: OpticalDataTable,
    low: DrudeTail,
    high: PowerTail,
    cache: RwLock<HashMap<u64, f64>>,
}

impl TabulatedPermittivity {
    pub fn new(table: OpticalDataTable, low: DrudeTail, high: PowerTail) -> Result<Self> {
        if low.join_energy_ev < table.min_energy_ev() * (1.0 - 1e-12) {
            return Err(Error::Invalid(format!(
                "Drude tail join energy {} eV lies below the first sample at {} eV",
                low.join_energy_ev,
                table.min_energy_ev()
            )));
        }
        if low.join_energy_ev >= table.max_energy_ev() {
            return Err(Error::Invalid(format!(
                "Drude tail join energy {} eV leaves no tabulated range",
                low.join_energy_ev
            )));
        }
        Ok(TabulatedPermittivity {
            table,
            low,
            high,
            cache: RwLock::new(HashMap::new()),
        })
    }

    pub fn table(&self) -> &OpticalDataTable {
        &self.table
    }

    pub fn low_tail(&self) -> &DrudeTail {
        &self.low
    }

    pub fn high_tail(&self) -> &PowerTail {
        &self.high
    }

    pub fn eval(&self, xi: f64) -> Result<f64> {
        let key = xi.to_bits();
        if let Some(v) = self.cache.read().expect("cache lock poisoned").get(&key) {
            return Ok(*v);
        }
        let v = kk_transform(&self.table, &self.low, &self.high, xi)?;
        self.cache
            .write()
            .expect("cache lock poisoned")
            .insert(key, v);
        Ok(v)
    }
}

impl PartialEq for TabulatedPermittivity {
    fn eq(&self, other: &Self) -> bool {
        self.table == other.table && self.low == other.low && self.high == other.high
    }
}
