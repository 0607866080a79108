//! Wavenumber quadrature and Matsubara summation: energies per unit area and
//! normal pressures at zero and finite temperature.
//!
//! Finite temperature:
//!   E/A = (k_B T / 2π) Σ′ₙ ∫₀^∞ dk k Σ_λ ln G^λ(ξₙ),  ξₙ = 2π n k_B T / ħ,
//! with the n = 0 term half-weighted. Zero temperature:
//!   E/A = (ħ / 4π²) ∫₀^∞ dξ ∫₀^∞ dk k Σ_λ ln G^λ(iξ).
//!
//! Matsubara terms are evaluated in parallel and summed in ascending n with
//! compensated summation, so results do not depend on the worker count.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::constants::{C, HBAR, K_B};
use crate::error::{Error, Result};
use crate::material::ZeroMode;
use crate::quadrature::{integrate_semi_infinite, Estimate, Tolerance};
use crate::stack::{FiveLayerStack, Frequency, Layer, Polarization, TwoInterfaceResponse};
use crate::summation::neumaier_sum;

/// Default truncation index.
pub const DEFAULT_N_MAX: usize = 500;
/// Default k-integral tolerance for single evaluations.
pub const DEFAULT_REL_TOL: f64 = 1e-9;
/// Tolerance used inside sweeps.
pub const SWEEP_REL_TOL: f64 = 1e-7;

/// ξₙ = 2π n k_B T / ħ in rad/s.
pub fn matsubara_xi(n: usize, temperature_k: f64) -> f64 {
    2.0 * PI * n as f64 * K_B * temperature_k / HBAR
}

/// Temperature, truncation and static-term prescription.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatsubaraConfig {
    pub temperature_k: f64,
    /// Highest Matsubara index kept (inclusive).
    pub n_max: usize,
    pub zero_mode: ZeroMode,
}

impl MatsubaraConfig {
    pub fn new(temperature_k: f64, n_max: usize, zero_mode: ZeroMode) -> Result<Self> {
        if !(temperature_k > 0.0 && temperature_k.is_finite()) {
            return Err(Error::Invalid(format!(
                "temperature must be positive, got {temperature_k}"
            )));
        }
        if n_max < 1 {
            return Err(Error::Invalid("n_max must be at least 1".into()));
        }
        if let ZeroMode::PlasmaLike(Some(w)) = zero_mode {
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::Invalid(format!(
                    "plasma-like omega_p must be positive, got {w}"
                )));
            }
        }
        Ok(MatsubaraConfig {
            temperature_k,
            n_max,
            zero_mode,
        })
    }

    /// Room temperature, n_max = 500.
    pub fn room_temperature(zero_mode: ZeroMode) -> Self {
        MatsubaraConfig {
            temperature_k: 300.0,
            n_max: DEFAULT_N_MAX,
            zero_mode,
        }
    }

    pub fn with_n_max(self, n_max: usize) -> Self {
        MatsubaraConfig { n_max, ..self }
    }

    pub fn with_zero_mode(self, zero_mode: ZeroMode) -> Self {
        MatsubaraConfig { zero_mode, ..self }
    }

    pub fn xi(&self, n: usize) -> f64 {
        matsubara_xi(n, self.temperature_k)
    }

    pub fn frequency(&self, n: usize) -> Frequency {
        if n == 0 {
            Frequency::Zero(self.zero_mode)
        } else {
            Frequency::Imag(self.xi(n))
        }
    }
}

/// Smallest n_max for which e^{−2ξₙd/c} < `rel` at separation `d`.
pub fn n_max_for_separation(temperature_k: f64, d: f64, rel: f64) -> usize {
    let per_n = 2.0 * matsubara_xi(1, temperature_k) * d / C;
    ((-rel.ln()) / per_n).ceil().max(1.0) as usize
}

/// k∥ quadrature settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub max_panels: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            rel_tol: DEFAULT_REL_TOL,
            max_panels: 2000,
        }
    }
}

impl QuadratureConfig {
    pub fn new(rel_tol: f64, max_panels: usize) -> Result<Self> {
        if !(rel_tol > 0.0 && rel_tol <= 1e-3) {
            return Err(Error::Invalid(format!(
                "rel_tol must lie in (0, 1e-3], got {rel_tol}"
            )));
        }
        if max_panels < 8 {
            return Err(Error::Invalid(format!(
                "max_panels must be >= 8, got {max_panels}"
            )));
        }
        Ok(QuadratureConfig {
            rel_tol,
            max_panels,
        })
    }

    pub fn sweep() -> Self {
        QuadratureConfig {
            rel_tol: SWEEP_REL_TOL,
            ..Default::default()
        }
    }

    fn tolerance(&self) -> Tolerance {
        Tolerance::relative(self.rel_tol)
    }
}

/// Energy per unit area (J/m²) with its per-n contributions.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyPerArea {
    pub value: f64,
    /// Weighted contribution of each Matsubara index 0..=n_max.
    pub terms: Vec<f64>,
}

impl EnergyPerArea {
    fn from_terms(terms: Vec<f64>) -> Self {
        EnergyPerArea {
            value: neumaier_sum(terms.iter().copied()),
            terms,
        }
    }

    /// Sum truncated at `n_max` (inclusive).
    pub fn partial_sum(&self, n_max: usize) -> f64 {
        let end = (n_max + 1).min(self.terms.len());
        neumaier_sum(self.terms[..end].iter().copied())
    }

    pub fn scaled(mut self, factor: f64) -> Self {
        self.value *= factor;
        self.terms.iter_mut().for_each(|t| *t *= factor);
        self
    }

    /// Elementwise combination, for composite quantities.
    pub fn combine(parts: &[(f64, &EnergyPerArea)]) -> Self {
        let len = parts.iter().map(|p| p.1.terms.len()).max().unwrap_or(0);
        let terms = (0..len)
            .map(|n| {
                neumaier_sum(
                    parts
                        .iter()
                        .map(|(c, e)| c * e.terms.get(n).copied().unwrap_or(0.0)),
                )
            })
            .collect();
        EnergyPerArea::from_terms(terms)
    }

    /// Whether |termₙ| is non-increasing for every n ≥ `from`.
    pub fn decays_beyond(&self, from: usize) -> bool {
        self.terms
            .iter()
            .skip(from.max(1))
            .zip(self.terms.iter().skip(from.max(1) + 1))
            .all(|(a, b)| b.abs() <= a.abs())
    }

    /// Partial sums at ascending checkpoints, with relative changes.
    pub fn truncation(&self, checkpoints: &[usize]) -> Result<Vec<TruncationRow>> {
        let n_max = self.terms.len().saturating_sub(1);
        if checkpoints.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Invalid(
                "checkpoints must be strictly ascending".into(),
            ));
        }
        if let Some(&last) = checkpoints.last() {
            if last > n_max {
                return Err(Error::Invalid(format!(
                    "checkpoint {last} exceeds n_max = {n_max}"
                )));
            }
        }
        let mut rows: Vec<TruncationRow> = Vec::with_capacity(checkpoints.len());
        for &n in checkpoints {
            let value = self.partial_sum(n);
            let rel_delta = rows.last().map(|prev: &TruncationRow| {
                if value == 0.0 {
                    (value - prev.value).abs()
                } else {
                    (value - prev.value).abs() / value.abs()
                }
            });
            rows.push(TruncationRow {
                n_max: n,
                value,
                rel_delta,
            });
        }
        Ok(rows)
    }
}

/// One checkpoint of a truncation study.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationRow {
    pub n_max: usize,
    pub value: f64,
    /// |value − previous| / |value|; `None` on the first row.
    pub rel_delta: Option<f64>,
}

/// ∫₀^∞ f(k) dk, where `f` already contains the k∥ Jacobian.
///
/// `length` sets the mapping k = t / (2·length·(1 − t)), so that the
/// integrand's exponential scale is of order one in t.
pub fn k_integral<F: Fn(f64) -> f64>(
    f: F,
    length: f64,
    quad: &QuadratureConfig,
) -> Result<Estimate> {
    k_integral_scaled(f, 1.0 / (2.0 * length), quad)
}

fn k_integral_scaled<F: Fn(f64) -> f64>(
    f: F,
    scale: f64,
    quad: &QuadratureConfig,
) -> Result<Estimate> {
    integrate_semi_infinite(f, 0.0, scale, quad.tolerance(), quad.max_panels)
}

/// Mapping scale for an integrand ~ k·exp(−2L·sqrt(k² + q²)).
fn k_scale(length: f64, q2_min: f64) -> f64 {
    let base = 1.0 / (2.0 * length);
    (base * base + q2_min.sqrt() / (2.0 * length)).sqrt()
}

/// (k_B T/2π) Σ′ₙ ∫ dk f_n(k), with `prepare` building f_n and its k-scale.
pub(crate) fn thermal_sum<P, F>(
    mats: &MatsubaraConfig,
    quad: &QuadratureConfig,
    prepare: P,
) -> Result<EnergyPerArea>
where
    P: Fn(Frequency) -> Result<(F, f64)> + Sync,
    F: Fn(f64) -> f64,
{
    let prefactor = K_B * mats.temperature_k / (2.0 * PI);
    let terms: Vec<Result<f64>> = (0..=mats.n_max)
        .into_par_iter()
        .map(|n| {
            let tag = |e: Error| Error::Matsubara {
                n,
                source: Box::new(e),
            };
            let (f, scale) = prepare(mats.frequency(n)).map_err(tag)?;
            let est = k_integral_scaled(f, scale, quad).map_err(tag)?;
            let weight = if n == 0 { 0.5 } else { 1.0 };
            Ok(weight * prefactor * est.value)
        })
        .collect();
    let terms = terms.into_iter().collect::<Result<Vec<f64>>>()?;
    Ok(EnergyPerArea::from_terms(terms))
}

/// (ħ/4π²) ∫₀^∞ dξ ∫ dk f_ξ(k).
pub(crate) fn zero_temperature_integral<P, F>(
    length: f64,
    quad: &QuadratureConfig,
    prepare: P,
) -> Result<f64>
where
    P: Fn(Frequency) -> Result<(F, f64)>,
    F: Fn(f64) -> f64,
{
    let inner = QuadratureConfig {
        rel_tol: quad.rel_tol * 0.1,
        ..*quad
    };
    let failure = std::cell::RefCell::new(None);
    let outer = |xi: f64| {
        if xi <= 0.0 {
            return 0.0;
        }
        let r =
            prepare(Frequency::Imag(xi)).and_then(|(f, scale)| k_integral_scaled(f, scale, &inner));
        match r {
            Ok(e) => e.value,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                0.0
            }
        }
    };
    let est = integrate_semi_infinite(
        outer,
        0.0,
        C / (2.0 * length),
        quad.tolerance(),
        quad.max_panels,
    )?;
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(HBAR / (4.0 * PI * PI) * est.value)
}

fn stack_integrand(stack: &FiveLayerStack, freq: Frequency) -> Result<(impl Fn(f64) -> f64, f64)> {
    let resp = stack.response(freq)?;
    let scale = k_scale(stack.min_thickness(), resp.min_q2());
    let f = move |k: f64| {
        k * Polarization::BOTH
            .iter()
            .map(|&p| resp.terms(p, k).ln_g())
            .sum::<f64>()
    };
    Ok((f, scale))
}

fn two_interface_integrand(
    bounding: &Layer,
    gap: &Layer,
    d: f64,
    freq: Frequency,
) -> Result<(impl Fn(f64) -> f64, f64)> {
    let resp = TwoInterfaceResponse::new(bounding, gap, d, freq)?;
    let scale = k_scale(d, resp.gap.q2);
    let f =
        move |k: f64| k * (resp.ln_g(Polarization::Alpha, k) + resp.ln_g(Polarization::Beta, k));
    Ok((f, scale))
}

/// T = 0 energy per unit area of the five-layer stack, J/m².
pub fn energy_per_area_t0(stack: &FiveLayerStack, quad: &QuadratureConfig) -> Result<f64> {
    zero_temperature_integral(stack.min_thickness(), quad, |freq| {
        stack_integrand(stack, freq)
    })
}

/// Finite-temperature energy per unit area of the five-layer stack.
pub fn energy_per_area_t(
    stack: &FiveLayerStack,
    mats: &MatsubaraConfig,
    quad: &QuadratureConfig,
) -> Result<EnergyPerArea> {
    thermal_sum(mats, quad, |freq| stack_integrand(stack, freq))
}

/// Finite-temperature energy per unit area of two identical half-spaces
/// separated by a gap of width `d`.
pub fn energy_per_area_two_interface(
    bounding: &Layer,
    gap: &Layer,
    d: f64,
    mats: &MatsubaraConfig,
    quad: &QuadratureConfig,
) -> Result<EnergyPerArea> {
    check_gap(d)?;
    thermal_sum(mats, quad, |freq| {
        two_interface_integrand(bounding, gap, d, freq)
    })
}

/// T = 0 counterpart of [`energy_per_area_two_interface`].
pub fn energy_per_area_two_interface_t0(
    bounding: &Layer,
    gap: &Layer,
    d: f64,
    quad: &QuadratureConfig,
) -> Result<f64> {
    check_gap(d)?;
    zero_temperature_integral(d, quad, |freq| {
        two_interface_integrand(bounding, gap, d, freq)
    })
}

fn check_gap(d: f64) -> Result<()> {
    if d > 0.0 && d.is_finite() {
        Ok(())
    } else {
        Err(Error::Invalid(format!(
            "separation must be positive, got {d}"
        )))
    }
}

/// Normal pressure −∂(E/A)/∂dᵢ on the pair bracketing inner layer `layer`
/// (2, 3 or 4), N/m². Negative values are attractive.
pub fn normal_pressure(
    stack: &FiveLayerStack,
    layer: usize,
    mats: &MatsubaraConfig,
    quad: &QuadratureConfig,
) -> Result<f64> {
    if !(2..=4).contains(&layer) {
        return Err(Error::Invalid(format!(
            "inner layer index must be 2, 3 or 4, got {layer}"
        )));
    }
    let e = thermal_sum(mats, quad, |freq| {
        let resp = stack.response(freq)?;
        let scale = k_scale(stack.min_thickness(), resp.min_q2());
        let f = move |k: f64| {
            k * Polarization::BOTH
                .iter()
                .map(|&p| resp.terms(p, k).dln_g_dd(layer))
                .sum::<f64>()
        };
        Ok((f, scale))
    })?;
    Ok(-e.value)
}

/// Normal pressure between two identical half-spaces across a gap.
pub fn normal_pressure_two_interface(
    bounding: &Layer,
    gap: &Layer,
    d: f64,
    mats: &MatsubaraConfig,
    quad: &QuadratureConfig,
) -> Result<f64> {
    check_gap(d)?;
    let e = thermal_sum(mats, quad, |freq| {
        let resp = TwoInterfaceResponse::new(bounding, gap, d, freq)?;
        let scale = k_scale(d, resp.gap.q2);
        let f = move |k: f64| {
            k * Polarization::BOTH
                .iter()
                .map(|&p| resp.dln_g_dd(p, k))
                .sum::<f64>()
        };
        Ok((f, scale))
    })?;
    Ok(-e.value)
}

/// Partial energies at the given truncation checkpoints.
pub fn truncation_report(
    stack: &FiveLayerStack,
    mats: &MatsubaraConfig,
    quad: &QuadratureConfig,
    checkpoints: &[usize],
) -> Result<Vec<TruncationRow>> {
    let top = checkpoints.last().copied().unwrap_or(mats.n_max);
    if top > mats.n_max {
        return Err(Error::Invalid(format!(
            "checkpoint {top} exceeds n_max = {}",
            mats.n_max
        )));
    }
    let e = energy_per_area_t(stack, &mats.with_n_max(top), quad)?;
    e.truncation(checkpoints)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::ZETA_3;

    #[test]
    fn first_matsubara_frequency_at_room_temperature() {
        let xi1 = matsubara_xi(1, 300.0);
        assert!((xi1 / 2.468e14 - 1.0).abs() < 5e-4, "{xi1}");
        assert_eq!(matsubara_xi(0, 123.0), 0.0);
        assert!((matsubara_xi(500, 300.0) / (500.0 * xi1) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn zeta3_integral() {
        let d = 3e-7;
        let quad = QuadratureConfig::default();
        let r = k_integral(|k| k * (-(-2.0 * k * d).exp()).ln_1p(), d, &quad).unwrap();
        let exact = -ZETA_3 / (4.0 * d * d);
        assert!(
            (r.value / exact - 1.0).abs() < 1e-9,
            "{} vs {exact}",
            r.value
        );
    }

    #[test]
    fn elementary_integral() {
        let d = 2e-6;
        let quad = QuadratureConfig::default();
        let r = k_integral(|k| k * (-2.0 * k * d).exp(), d, &quad).unwrap();
        assert!((r.value * 4.0 * d * d - 1.0).abs() < 1e-9);
        let z = k_integral(|_| 0.0, d, &quad).unwrap();
        assert_eq!(z.value, 0.0);
    }

    #[test]
    fn config_validation() {
        assert!(MatsubaraConfig::new(0.0, 10, ZeroMode::FromModel).is_err());
        assert!(MatsubaraConfig::new(300.0, 0, ZeroMode::FromModel).is_err());
        assert!(MatsubaraConfig::new(300.0, 1, ZeroMode::PlasmaLike(Some(-1.0))).is_err());
        assert!(QuadratureConfig::new(1e-2, 100).is_err());
        assert!(QuadratureConfig::new(1e-9, 4).is_err());
        assert!(QuadratureConfig::new(1e-9, 8).is_ok());
    }

    #[test]
    fn truncation_rows() {
        let e = EnergyPerArea::from_terms(vec![1.0, 0.5, 0.25, 0.125]);
        let rows = e.truncation(&[1, 3]).unwrap();
        assert_eq!(rows[0].value, 1.5);
        assert_eq!(rows[0].rel_delta, None);
        assert!((rows[1].rel_delta.unwrap() - 0.375 / 1.875).abs() < 1e-15);
        let single = e.truncation(&[3]).unwrap();
        assert_eq!(single.len(), 1);
        assert!(single[0].rel_delta.is_none());
        assert!(e.truncation(&[3, 2]).is_err());
        assert!(e.truncation(&[4]).is_err());
        assert!(e.decays_beyond(1));
    }
}
