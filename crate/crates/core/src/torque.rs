//! Casimir torque between crossed rectangular plates of isotropic media.
//!
//! Plate A (K × L) and plate B (H × L) share the centroid axis; B is rotated
//! by θ relative to A. Because H² > K² + L², B never truncates the overlap
//! along its length, and the overlap is A clipped by B's strip: a
//! parallelogram for θ₀ < θ ≤ π/2 and a truncated hexagon below θ₀.

use std::f64::consts::FRAC_PI_2;

use crate::constants::HBAR_C;
use crate::error::{Error, Result};
use crate::lifshitz::{thermal_sum, EnergyPerArea, MatsubaraConfig, QuadratureConfig};
use crate::stack::{FiveLayerStack, Frequency, Layer, Polarization, TwoInterfaceResponse};

/// Edge energy coefficient for misaligned edges at T = 0.
pub const EDGE_ENERGY_COEFF: f64 = 0.0009;
/// Coefficient of the relative edge correction to the torque.
pub const EDGE_TORQUE_COEFF: f64 = 0.066;
/// Enlargement of the edge correction in the high-temperature limit.
pub const HIGH_TEMPERATURE_EDGE_FACTOR: f64 = 10.0;
/// Default finite thickness of both plates, m.
pub const DEFAULT_PLATE_THICKNESS: f64 = 1e-6;

/// θ₀ = arcsin(2KL/(K² + L²)).
pub fn theta0(k: f64, l: f64) -> f64 {
    (2.0 * k * l / (k * k + l * l)).min(1.0).asin()
}

/// Crossed-rectangle geometry (lengths in m, angle in rad).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorqueGeometry {
    /// K, length of the longer plate.
    pub long_side: f64,
    /// L, width shared by both plates.
    pub width: f64,
    /// H, length of the other plate.
    pub cross_side: f64,
    pub theta: f64,
    /// d₃, gap between the plates.
    pub gap: f64,
}

impl TorqueGeometry {
    pub fn new(long_side: f64, width: f64, cross_side: f64, theta: f64, gap: f64) -> Result<Self> {
        let lengths = [long_side, width, cross_side, gap];
        if lengths.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
            return Err(Error::Invalid(format!(
                "geometry lengths must be positive: {lengths:?}"
            )));
        }
        if long_side <= width {
            return Err(Error::Invalid(format!(
                "need K > L, got K = {long_side}, L = {width}"
            )));
        }
        if cross_side * cross_side <= long_side * long_side + width * width {
            return Err(Error::Invalid(format!(
                "need H^2 > K^2 + L^2, got H = {cross_side}, K = {long_side}, L = {width}"
            )));
        }
        if !(0.0..=FRAC_PI_2).contains(&theta) {
            return Err(Error::Invalid(format!(
                "theta must lie in [0, pi/2], got {theta}"
            )));
        }
        Ok(TorqueGeometry {
            long_side,
            width,
            cross_side,
            theta,
            gap,
        })
    }

    pub fn with_theta(&self, theta: f64) -> Result<Self> {
        TorqueGeometry::new(self.long_side, self.width, self.cross_side, theta, self.gap)
    }

    /// K and L (and H) multiplied by `f`.
    pub fn scaled(&self, f: f64) -> Result<Self> {
        TorqueGeometry::new(
            f * self.long_side,
            f * self.width,
            f * self.cross_side,
            self.theta,
            self.gap,
        )
    }

    pub fn theta0(&self) -> f64 {
        theta0(self.long_side, self.width)
    }

    fn in_parallelogram_regime(&self) -> bool {
        self.theta > self.theta0()
    }
}

/// Overlap polygon of the two plates.
#[derive(Debug, Clone, PartialEq)]
pub struct OverlapShape {
    pub vertices: Vec<[f64; 2]>,
    pub area: f64,
    pub perimeter: f64,
}

// Keep the part of `poly` with n·p ≤ c.
fn clip_half_plane(poly: &[[f64; 2]], n: [f64; 2], c: f64) -> Vec<[f64; 2]> {
    let side = |p: &[f64; 2]| n[0] * p[0] + n[1] * p[1] - c;
    let mut out = Vec::with_capacity(poly.len() + 1);
    for i in 0..poly.len() {
        let cur = poly[i];
        let next = poly[(i + 1) % poly.len()];
        let (sc, sn) = (side(&cur), side(&next));
        if sc <= 0.0 {
            out.push(cur);
        }
        if (sc < 0.0 && sn > 0.0) || (sc > 0.0 && sn < 0.0) {
            let t = sc / (sc - sn);
            out.push([
                cur[0] + t * (next[0] - cur[0]),
                cur[1] + t * (next[1] - cur[1]),
            ]);
        }
    }
    out
}

/// Exact intersection of the two rectangles.
pub fn overlap(geom: &TorqueGeometry) -> OverlapShape {
    let (hk, hl, hh) = (
        0.5 * geom.long_side,
        0.5 * geom.width,
        0.5 * geom.cross_side,
    );
    let mut poly = vec![[-hk, -hl], [hk, -hl], [hk, hl], [-hk, hl]];
    let (s, c) = geom.theta.sin_cos();
    let along = [c, s];
    let across = [-s, c];
    for (n, limit) in [(along, hh), (across, hl)] {
        poly = clip_half_plane(&poly, n, limit);
        poly = clip_half_plane(&poly, [-n[0], -n[1]], limit);
    }
    poly.dedup_by(|a, b| (a[0] - b[0]).hypot(a[1] - b[1]) <= 1e-15 * geom.long_side);

    let mut twice_area = 0.0;
    let mut perimeter = 0.0;
    for i in 0..poly.len() {
        let (p, q) = (poly[i], poly[(i + 1) % poly.len()]);
        twice_area += p[0] * q[1] - q[0] * p[1];
        perimeter += (q[0] - p[0]).hypot(q[1] - p[1]);
    }
    OverlapShape {
        vertices: poly,
        area: 0.5 * twice_area.abs(),
        perimeter,
    }
}

fn reject_zero(theta: f64) -> Result<()> {
    if theta == 0.0 {
        Err(Error::Domain(
            "the overlap has no angular derivative at theta = 0".into(),
        ))
    } else {
        Ok(())
    }
}

/// S′(θ), m²/rad.
pub fn area_derivative(geom: &TorqueGeometry) -> Result<f64> {
    reject_zero(geom.theta)?;
    let (k, l, t) = (geom.long_side, geom.width, geom.theta);
    let (s, c) = t.sin_cos();
    if geom.in_parallelogram_regime() {
        return Ok(-l * l * c / (s * s));
    }
    let first = k / (2.0 * c) - l / (2.0 * t).sin() + l / (2.0 * s);
    let second = l / (2.0 * s) - k / (2.0 * c) - l / (2.0 * t).tan();
    Ok(first * second)
}

/// lim_{θ→0⁺} S′(θ) = −K²/4.
pub fn area_derivative_zero_limit(geom: &TorqueGeometry) -> f64 {
    -0.25 * geom.long_side * geom.long_side
}

/// P′(θ), m/rad. Discontinuous at θ₀, where it is a domain error.
pub fn perimeter_derivative(geom: &TorqueGeometry) -> Result<f64> {
    reject_zero(geom.theta)?;
    let (k, l, t) = (geom.long_side, geom.width, geom.theta);
    if t == geom.theta0() {
        return Err(Error::Domain(format!(
            "perimeter derivative is discontinuous at theta0 = {t}"
        )));
    }
    let (s, c) = t.sin_cos();
    if geom.in_parallelogram_regime() {
        return Ok(-4.0 * l * c / (s * s));
    }
    let s2 = (2.0 * t).sin();
    let c2 = (2.0 * t).cos();
    Ok(k / (c * c) * (s - 1.0)
        + l * (4.0 * c2 / (s2 * s2) - 2.0 * c / (s * s) + 1.0 / (s * s) + s / (c * c)))
}

/// δE ≈ 0.0009 ħc P(θ)/d₃², J.
pub fn edge_energy(geom: &TorqueGeometry) -> f64 {
    EDGE_ENERGY_COEFF * HBAR_C / (geom.gap * geom.gap) * overlap(geom).perimeter
}

/// |δM/M| ≈ 0.066 d₃ P′(θ)/S′(θ).
pub fn edge_torque_ratio(geom: &TorqueGeometry) -> Result<f64> {
    if geom.theta == geom.theta0() {
        return Err(Error::Domain(
            "edge correction is undefined at theta0".into(),
        ));
    }
    Ok(EDGE_TORQUE_COEFF * geom.gap * perimeter_derivative(geom)? / area_derivative(geom)?)
}

/// [`edge_torque_ratio`], optionally with the high-temperature enlargement.
pub fn edge_torque_ratio_with(geom: &TorqueGeometry, high_temperature: bool) -> Result<f64> {
    let r = edge_torque_ratio(geom)?;
    Ok(if high_temperature {
        HIGH_TEMPERATURE_EDGE_FACTOR * r
    } else {
        r
    })
}

/// Plates (layers 2 and 4) immersed in a common medium (layers 1, 3, 5).
#[derive(Debug, Clone, PartialEq)]
pub struct PlateSystem {
    pub plate_a: Layer,
    pub plate_b: Layer,
    pub medium: Layer,
    /// Thickness d₂ = d₄ of both plates, m.
    pub plate_thickness: f64,
}

impl PlateSystem {
    pub fn new(plate_a: Layer, plate_b: Layer, medium: Layer) -> Self {
        PlateSystem {
            plate_a,
            plate_b,
            medium,
            plate_thickness: DEFAULT_PLATE_THICKNESS,
        }
    }

    pub fn with_thickness(self, plate_thickness: f64) -> Self {
        PlateSystem {
            plate_thickness,
            ..self
        }
    }

    fn stack(&self, gap: f64) -> Result<FiveLayerStack> {
        FiveLayerStack::new(
            [
                self.medium.clone(),
                self.plate_a.clone(),
                self.medium.clone(),
                self.plate_b.clone(),
                self.medium.clone(),
            ],
            self.plate_thickness,
            gap,
            self.plate_thickness,
        )
    }
}

/// Overlapped-minus-separated energy per unit overlap area, J/m²:
/// (k_BT/2π) Σ′ ∫dk k Σ_λ [ln G(d₂,d₃,d₄) − ln G(d₂) − ln G(d₄)].
pub fn interaction_energy_per_area(
    system: &PlateSystem,
    gap: f64,
    mats: &MatsubaraConfig,
    quad: &QuadratureConfig,
) -> Result<EnergyPerArea> {
    let stack = system.stack(gap)?;
    let t = system.plate_thickness;
    thermal_sum(mats, quad, |freq: Frequency| {
        let full = stack.response(freq)?;
        let a = TwoInterfaceResponse::new(&system.medium, &system.plate_a, t, freq)?;
        let b = TwoInterfaceResponse::new(&system.medium, &system.plate_b, t, freq)?;
        let length = stack.min_thickness();
        let q = full.min_q2().sqrt();
        let base = 1.0 / (2.0 * length);
        let scale = (base * base + q / (2.0 * length)).sqrt();
        let f = move |k: f64| {
            k * Polarization::BOTH
                .iter()
                .map(|&p| full.terms(p, k).ln_g() - a.ln_g(p, k) - b.ln_g(p, k))
                .sum::<f64>()
        };
        Ok((f, scale))
    })
}

/// E(θ) = S(θ) × interaction energy per area, J.
pub fn torque_energy(
    geom: &TorqueGeometry,
    system: &PlateSystem,
    mats: &MatsubaraConfig,
    quad: &QuadratureConfig,
) -> Result<f64> {
    let w = interaction_energy_per_area(system, geom.gap, mats, quad)?;
    Ok(overlap(geom).area * w.value)
}

/// M = −S′(θ)·w for a precomputed energy per area `w` (J/m²), N·m.
/// M(0) is defined as 0; θ₀ exactly is a domain error.
pub fn torque_from_density(geom: &TorqueGeometry, w: f64) -> Result<f64> {
    if geom.theta == 0.0 {
        return Ok(0.0);
    }
    if geom.theta == geom.theta0() {
        return Err(Error::Domain(
            "torque is evaluated away from the branch point theta0".into(),
        ));
    }
    Ok(-area_derivative(geom)? * w)
}

/// M = −∂E/∂θ, N·m. Negative values drive θ toward 0 for attraction.
pub fn torque(
    geom: &TorqueGeometry,
    system: &PlateSystem,
    mats: &MatsubaraConfig,
    quad: &QuadratureConfig,
) -> Result<f64> {
    let w = interaction_energy_per_area(system, geom.gap, mats, quad)?;
    torque_from_density(geom, w.value)
}
