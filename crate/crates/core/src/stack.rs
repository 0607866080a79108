//! Five-layer planar geometry, interface reflection coefficients and the
//! surface-mode function G^λ on the imaginary frequency axis.
//!
//! Layers are numbered 1..=5; layers 1 and 5 are semi-infinite and layers
//! 2, 3, 4 have thicknesses d₂, d₃, d₄. `r_{i+}` is the coefficient seen from
//! layer i looking into layer i+1, and `r_{(i+1)−} = −r_{i+}`.

use crate::constants::C;
use crate::error::{Error, Result};
use crate::material::{PermeabilityModel, PermittivityModel, ZeroLimit, ZeroMode};

/// The two independent mode families of an isotropic planar stack.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarization {
    /// μ·b_z and db_z/dz continuous (magnetic type).
    Alpha,
    /// b_y and ε⁻¹·db_y/dz continuous (electric type).
    Beta,
}

impl Polarization {
    pub const BOTH: [Polarization; 2] = [Polarization::Alpha, Polarization::Beta];
}

/// Point on the imaginary frequency axis at which responses are evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Frequency {
    /// ξ = 0, resolved with the given prescription.
    Zero(ZeroMode),
    /// ξ > 0 in rad/s.
    Imag(f64),
}

/// One homogeneous isotropic medium.
#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    pub eps: PermittivityModel,
    pub mu: PermeabilityModel,
}

impl Layer {
    pub fn new(eps: PermittivityModel, mu: PermeabilityModel) -> Self {
        Layer { eps, mu }
    }

    pub fn nonmagnetic(eps: PermittivityModel) -> Self {
        Layer {
            eps,
            mu: PermeabilityModel::Unity,
        }
    }

    pub fn vacuum() -> Self {
        Layer::nonmagnetic(PermittivityModel::Vacuum)
    }

    pub fn is_metal(&self) -> bool {
        !matches!(self.eps.zero_limit(), ZeroLimit::Finite(_))
    }

    /// Permittivity and permeability snapshot at `freq`.
    pub fn response(&self, freq: Frequency) -> Result<MediumResponse> {
        match freq {
            Frequency::Imag(xi) => {
                if xi.is_nan() || xi <= 0.0 {
                    return Err(Error::Domain(format!(
                        "positive imaginary frequency required, got {xi}; use Frequency::Zero for xi = 0"
                    )));
                }
                let eps = self.eps.eval(xi)?;
                let mu = self.mu.eval(xi);
                Ok(MediumResponse {
                    eps: StaticEps::Finite(eps),
                    mu,
                    q2: eps * mu * (xi / C) * (xi / C),
                })
            }
            Frequency::Zero(mode) => {
                let mu = self.mu.eval(0.0);
                let limit = self.eps.zero_limit();
                let plasma = |omega_p: f64| MediumResponse {
                    eps: StaticEps::Divergent {
                        coeff: omega_p * omega_p,
                        order: 2,
                    },
                    mu,
                    q2: mu * (omega_p / C) * (omega_p / C),
                };
                let drude = |omega_p: f64, gamma: f64| MediumResponse {
                    eps: StaticEps::Divergent {
                        coeff: if gamma > 0.0 {
                            omega_p * omega_p / gamma
                        } else {
                            omega_p * omega_p
                        },
                        order: 1,
                    },
                    mu,
                    q2: 0.0,
                };
                Ok(match (limit, mode) {
                    (ZeroLimit::Finite(eps), _) => MediumResponse {
                        eps: StaticEps::Finite(eps),
                        mu,
                        q2: 0.0,
                    },
                    (ZeroLimit::Drude { omega_p, gamma }, ZeroMode::FromModel) => {
                        drude(omega_p, gamma)
                    }
                    (ZeroLimit::Plasma { omega_p }, ZeroMode::FromModel) => plasma(omega_p),
                    (ZeroLimit::Drude { omega_p, gamma }, ZeroMode::DrudeLike) => {
                        drude(omega_p, gamma)
                    }
                    (ZeroLimit::Plasma { omega_p }, ZeroMode::DrudeLike) => drude(omega_p, 0.0),
                    (
                        ZeroLimit::Drude { omega_p, .. } | ZeroLimit::Plasma { omega_p },
                        ZeroMode::PlasmaLike(w),
                    ) => plasma(w.unwrap_or(omega_p)),
                })
            }
        }
    }
}

/// Static permittivity: finite, or diverging as coeff·ξ^(−order).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StaticEps {
    Finite(f64),
    Divergent { coeff: f64, order: u8 },
}

/// Layer response at one frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MediumResponse {
    pub eps: StaticEps,
    pub mu: f64,
    /// ε μ ξ²/c² (its finite limit at ξ = 0), m⁻².
    pub q2: f64,
}

impl MediumResponse {
    /// K = sqrt(k∥² + ε μ ξ²/c²).
    #[inline]
    pub fn kappa(&self, k: f64) -> f64 {
        (k * k + self.q2).sqrt()
    }
}

#[inline]
fn weighted_ratio(w_lower: f64, w_upper: f64, k_lower: f64, k_upper: f64) -> f64 {
    let num = w_upper * k_lower - w_lower * k_upper;
    let den = w_upper * k_lower + w_lower * k_upper;
    if den == 0.0 {
        if w_upper + w_lower != 0.0 {
            // Limit k∥ → 0 of the ratio at fixed weights.
            return (w_upper - w_lower) / (w_upper + w_lower);
        }
        return 0.0;
    }
    num / den
}

/// ε weights for the β coefficient, taking divergent media as limits.
#[inline]
fn eps_weights(lower: StaticEps, upper: StaticEps) -> (f64, f64) {
    match (lower, upper) {
        (StaticEps::Finite(a), StaticEps::Finite(b)) => (a, b),
        (StaticEps::Finite(_), StaticEps::Divergent { .. }) => (0.0, 1.0),
        (StaticEps::Divergent { .. }, StaticEps::Finite(_)) => (1.0, 0.0),
        (
            StaticEps::Divergent {
                coeff: a,
                order: oa,
            },
            StaticEps::Divergent {
                coeff: b,
                order: ob,
            },
        ) => match oa.cmp(&ob) {
            std::cmp::Ordering::Equal => (a, b),
            std::cmp::Ordering::Greater => (1.0, 0.0),
            std::cmp::Ordering::Less => (0.0, 1.0),
        },
    }
}

/// r_{lower+} for the interface lower → upper, given both kernels.
#[inline]
pub fn interface_reflection(
    pol: Polarization,
    lower: &MediumResponse,
    upper: &MediumResponse,
    k_lower: f64,
    k_upper: f64,
) -> f64 {
    match pol {
        Polarization::Alpha => weighted_ratio(lower.mu, upper.mu, k_lower, k_upper),
        Polarization::Beta => {
            let (wl, wu) = eps_weights(lower.eps, upper.eps);
            weighted_ratio(wl, wu, k_lower, k_upper)
        }
    }
}

/// K_i = sqrt(k∥² + ε(iξ)μ(iξ)ξ²/c²).
///
/// At ξ = 0 the model's own static limit is used; k∥ = 0 there is a domain
/// error for metals.
pub fn kappa(layer: &Layer, k: f64, xi: f64) -> Result<f64> {
    if k.is_nan() || k < 0.0 {
        return Err(Error::Domain(format!("k must be >= 0, got {k}")));
    }
    if xi == 0.0 {
        if k == 0.0 && layer.is_metal() {
            return Err(Error::Domain(format!(
                "kernel undefined at k = 0, xi = 0 for the {} model",
                layer.eps.name()
            )));
        }
        return Ok(layer
            .response(Frequency::Zero(ZeroMode::FromModel))?
            .kappa(k));
    }
    Ok(layer.response(Frequency::Imag(xi))?.kappa(k))
}

/// r^λ seen from `lower` looking into `upper`, at ξ > 0.
pub fn reflection(pol: Polarization, lower: &Layer, upper: &Layer, k: f64, xi: f64) -> Result<f64> {
    let (a, b) = (
        lower.response(Frequency::Imag(xi))?,
        upper.response(Frequency::Imag(xi))?,
    );
    Ok(interface_reflection(pol, &a, &b, a.kappa(k), b.kappa(k)))
}

/// Static (ξ = 0) coefficient of a vacuum–metal interface, seen from vacuum.
pub fn reflection_zero_mode(
    pol: Polarization,
    metal: &Layer,
    mode: ZeroMode,
    k: f64,
) -> Result<f64> {
    let freq = Frequency::Zero(mode);
    let vac = Layer::vacuum().response(freq)?;
    let m = metal.response(freq)?;
    Ok(interface_reflection(
        pol,
        &vac,
        &m,
        vac.kappa(k),
        m.kappa(k),
    ))
}

/// Reflection coefficients and decay factors of a five-layer stack at one
/// (k∥, ξ) point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeTerms {
    /// r_{i+} for interfaces i = 1..4 (index 0..3).
    pub r_plus: [f64; 4],
    /// e^{−2 K_i d_i} for layers 2, 3, 4.
    pub decay: [f64; 3],
    /// 1 − e^{−2 K_i d_i}, computed without cancellation.
    pub loss: [f64; 3],
    /// K_i for layers 1..5.
    pub kappa: [f64; 5],
}

#[derive(Debug, Clone, Copy)]
struct Factors {
    a: f64,
    b: f64,
    c: f64,
    ln_a: f64,
    ln_b: f64,
    ln_c: f64,
    rl: f64,
    rr: f64,
}

/// ρ_near + ρ_far·e, rewritten as (ρ_far + ρ_near) − ρ_far·m when the two
/// terms have opposite signs.
#[inline]
fn cavity_numerator(far: f64, near: f64, e: f64, m: f64) -> f64 {
    if far * near >= 0.0 {
        near + far * e
    } else {
        (far + near) - far * m
    }
}

/// 1 + a·e and its logarithm for |a| ≤ 1, where m = 1 − e.
#[inline]
fn one_plus(a: f64, e: f64, m: f64) -> (f64, f64) {
    let y = a * e;
    if y >= -0.5 {
        (1.0 + y, y.ln_1p())
    } else {
        let v = (1.0 + a) - a * m;
        (v, v.ln())
    }
}

impl ModeTerms {
    #[inline]
    fn r_minus(&self, layer: usize) -> f64 {
        -self.r_plus[layer - 2]
    }

    #[inline]
    fn r_plus_of(&self, layer: usize) -> f64 {
        self.r_plus[layer - 1]
    }

    #[inline]
    fn e(&self, layer: usize) -> f64 {
        self.decay[layer - 2]
    }

    /// G^λ − 1, term by term in the printed order.
    #[inline]
    pub fn g_minus_one(&self) -> f64 {
        self.terms().iter().sum()
    }

    /// The seven signed terms of G^λ − 1: three nearest-neighbour, two
    /// next-nearest, the four-reflection product and the full span.
    #[inline]
    fn terms(&self) -> [f64; 7] {
        let (e2, e3, e4) = (self.e(2), self.e(3), self.e(4));
        [
            -self.r_minus(2) * self.r_plus_of(2) * e2,
            -self.r_minus(3) * self.r_plus_of(3) * e3,
            -self.r_minus(4) * self.r_plus_of(4) * e4,
            -self.r_minus(2) * self.r_plus_of(3) * e2 * e3,
            -self.r_minus(3) * self.r_plus_of(4) * e3 * e4,
            self.r_minus(2) * self.r_plus_of(2) * self.r_minus(4) * self.r_plus_of(4) * e2 * e4,
            -self.r_minus(2) * self.r_plus_of(4) * e2 * e3 * e4,
        ]
    }

    /// G^λ, evaluated in the factorized form A·B·C (see [`Self::factors`]).
    pub fn g(&self) -> f64 {
        let f = self.factors();
        f.a * f.b * f.c
    }

    /// ln G^λ without the cancellation that 1 + Σ terms suffers when all
    /// reflections approach ±1 and the decays approach 1.
    #[inline]
    pub fn ln_g(&self) -> f64 {
        let f = self.factors();
        f.ln_a + f.ln_b + f.ln_c
    }

    /// G = A·B·C with A = 1 + ρ₁ρ₂e₂, B = 1 + ρ₃ρ₄e₄ and C = 1 − e₃·R_L·R_R,
    /// where ρⱼ = r_{j+} and R_L = −(ρ₂ + ρ₁e₂)/A, R_R = (ρ₃ + ρ₄e₄)/B are the
    /// effective reflections of the two outer cavities seen from layer 3.
    #[inline]
    fn factors(&self) -> Factors {
        let [p1, p2, p3, p4] = self.r_plus;
        let [e2, e3, e4] = self.decay;
        let [m2, m3, m4] = self.loss;
        let (a, ln_a) = one_plus(p1 * p2, e2, m2);
        let (b, ln_b) = one_plus(p3 * p4, e4, m4);
        let rl = -cavity_numerator(p1, p2, e2, m2) / a;
        let rr = cavity_numerator(p4, p3, e4, m4) / b;
        let x = rl * rr;
        let (c, ln_c) = if x <= 0.0 || x * e3 < 0.5 {
            let y = -x * e3;
            (1.0 + y, y.ln_1p())
        } else {
            // 1 − R_L R_R from the product forms of 1 ± R_L and 1 ± R_R,
            // which keep their accuracy as R_L R_R → 1.
            let rl_plus = (1.0 - p2) * one_plus(-p1, e2, m2).0 / a;
            let rl_minus = (1.0 + p2) * one_plus(p1, e2, m2).0 / a;
            let rr_plus = (1.0 + p3) * one_plus(p4, e4, m4).0 / b;
            let rr_minus = (1.0 - p3) * one_plus(-p4, e4, m4).0 / b;
            let c = 0.5 * (rl_plus * rr_minus + rl_minus * rr_plus) + x * m3;
            (c, c.ln())
        };
        Factors {
            a,
            b,
            c,
            ln_a,
            ln_b,
            ln_c,
            rl,
            rr,
        }
    }

    /// ∂ln G/∂d_i for inner layer i ∈ {2, 3, 4}.
    pub fn dln_g_dd(&self, layer: usize) -> f64 {
        let [p1, p2, p3, p4] = self.r_plus;
        let [e2, e3, e4] = self.decay;
        let f = self.factors();
        let k = self.kappa[layer - 1];
        match layer {
            2 => {
                -2.0 * k
                    * e2
                    * (p1 * p2 / f.a + e3 * f.rr * p1 * (1.0 - p2) * (1.0 + p2) / (f.a * f.a * f.c))
            }
            3 => 2.0 * k * e3 * f.rl * f.rr / f.c,
            4 => {
                -2.0 * k
                    * e4
                    * (p3 * p4 / f.b - e3 * f.rl * p4 * (1.0 - p3) * (1.0 + p3) / (f.b * f.b * f.c))
            }
            _ => panic!("inner layer index must be 2, 3 or 4, got {layer}"),
        }
    }

    /// ∂G/∂d_i for inner layer i ∈ {2, 3, 4}.
    pub fn dg_dd(&self, layer: usize) -> f64 {
        const MEMBERS: [[bool; 3]; 7] = [
            [true, false, false],
            [false, true, false],
            [false, false, true],
            [true, true, false],
            [false, true, true],
            [true, false, true],
            [true, true, true],
        ];
        let idx = layer - 2;
        let factor = -2.0 * self.kappa[layer - 1];
        self.terms()
            .iter()
            .zip(MEMBERS.iter())
            .filter(|(_, m)| m[idx])
            .map(|(t, _)| factor * t)
            .sum()
    }
}

/// Five isotropic layers with inner thicknesses d₂, d₃, d₄ (m).
#[derive(Debug, Clone, PartialEq)]
pub struct FiveLayerStack {
    layers: [Layer; 5],
    thickness: [f64; 3],
}

impl FiveLayerStack {
    pub fn new(layers: [Layer; 5], d2: f64, d3: f64, d4: f64) -> Result<Self> {
        for (i, d) in [d2, d3, d4].iter().enumerate() {
            if !(*d > 0.0 && d.is_finite()) {
                return Err(Error::Invalid(format!(
                    "d{} must be finite and positive, got {d}",
                    i + 2
                )));
            }
        }
        Ok(FiveLayerStack {
            layers,
            thickness: [d2, d3, d4],
        })
    }

    /// Layer `i` for i ∈ 1..=5.
    pub fn layer(&self, i: usize) -> &Layer {
        &self.layers[i - 1]
    }

    pub fn layers(&self) -> &[Layer; 5] {
        &self.layers
    }

    /// Thickness of inner layer `i` ∈ {2, 3, 4}.
    pub fn thickness(&self, i: usize) -> f64 {
        self.thickness[i - 2]
    }

    pub fn thicknesses(&self) -> [f64; 3] {
        self.thickness
    }

    pub fn with_thickness(&self, i: usize, d: f64) -> Result<Self> {
        if !(2..=4).contains(&i) {
            return Err(Error::Invalid(format!(
                "inner layer index must be 2, 3 or 4, got {i}"
            )));
        }
        let mut t = self.thickness;
        t[i - 2] = d;
        FiveLayerStack::new(self.layers.clone(), t[0], t[1], t[2])
    }

    pub fn min_thickness(&self) -> f64 {
        self.thickness.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// ε₂ = ε₄ and μ₂ = μ₄, needed for the tangential force.
    pub fn check_tangential_symmetry(&self) -> Result<()> {
        if self.layers[1].eps != self.layers[3].eps {
            return Err(Error::Symmetry(
                "tangential force requires eps2 = eps4 (layers 2 and 4 must share a permittivity model)".into(),
            ));
        }
        if self.layers[1].mu != self.layers[3].mu {
            return Err(Error::Symmetry(
                "tangential force requires mu2 = mu4 (layers 2 and 4 must share a permeability model)".into(),
            ));
        }
        Ok(())
    }

    /// Layers 2–4 all replaced by the layer-2 medium: the middle plate
    /// retracted, leaving one gap of width d₂ + d₃ + d₄.
    pub fn retracted(&self) -> Self {
        let gap = self.layers[1].clone();
        FiveLayerStack {
            layers: [
                self.layers[0].clone(),
                gap.clone(),
                gap.clone(),
                gap,
                self.layers[4].clone(),
            ],
            thickness: self.thickness,
        }
    }

    pub fn response(&self, freq: Frequency) -> Result<StackResponse> {
        let mut media = [MediumResponse {
            eps: StaticEps::Finite(1.0),
            mu: 1.0,
            q2: 0.0,
        }; 5];
        for (m, l) in media.iter_mut().zip(self.layers.iter()) {
            *m = l.response(freq)?;
        }
        Ok(StackResponse {
            media,
            thickness: self.thickness,
        })
    }
}

/// A [`FiveLayerStack`] evaluated at one frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StackResponse {
    pub media: [MediumResponse; 5],
    pub thickness: [f64; 3],
}

impl StackResponse {
    #[inline]
    pub fn terms(&self, pol: Polarization, k: f64) -> ModeTerms {
        let mut kappa = [0.0; 5];
        for (kk, m) in kappa.iter_mut().zip(self.media.iter()) {
            *kk = m.kappa(k);
        }
        let mut r_plus = [0.0; 4];
        for (i, r) in r_plus.iter_mut().enumerate() {
            *r = interface_reflection(
                pol,
                &self.media[i],
                &self.media[i + 1],
                kappa[i],
                kappa[i + 1],
            );
        }
        let mut decay = [0.0; 3];
        let mut loss = [0.0; 3];
        for i in 0..3 {
            let x = -2.0 * kappa[i + 1] * self.thickness[i];
            decay[i] = x.exp();
            loss[i] = -x.exp_m1();
        }
        ModeTerms {
            r_plus,
            decay,
            loss,
            kappa,
        }
    }

    /// Smallest q² among the layers, m⁻².
    pub fn min_q2(&self) -> f64 {
        self.media
            .iter()
            .map(|m| m.q2)
            .fold(f64::INFINITY, f64::min)
    }
}

/// Two identical half-spaces across a gap of width d.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoInterfaceResponse {
    pub outer: MediumResponse,
    pub gap: MediumResponse,
    pub d: f64,
}

impl TwoInterfaceResponse {
    pub fn new(outer: &Layer, gap: &Layer, d: f64, freq: Frequency) -> Result<Self> {
        Ok(TwoInterfaceResponse {
            outer: outer.response(freq)?,
            gap: gap.response(freq)?,
            d,
        })
    }

    /// r_− r_+ e^{−2Kd} and K of the gap.
    #[inline]
    pub fn round_trip(&self, pol: Polarization, k: f64) -> (f64, f64) {
        let kg = self.gap.kappa(k);
        let ko = self.outer.kappa(k);
        let r = interface_reflection(pol, &self.gap, &self.outer, kg, ko);
        (r * r * (-2.0 * kg * self.d).exp(), kg)
    }

    /// 1 − r_− r_+ e^{−2Kd} and its logarithm, stable as r² e^{−2Kd} → 1.
    #[inline]
    pub fn g_and_ln(&self, pol: Polarization, k: f64) -> (f64, f64) {
        let kg = self.gap.kappa(k);
        let ko = self.outer.kappa(k);
        let r = interface_reflection(pol, &self.gap, &self.outer, kg, ko);
        let x = -2.0 * kg * self.d;
        one_plus(-r * r, x.exp(), -x.exp_m1())
    }

    /// ln(1 − r_− r_+ e^{−2Kd}).
    #[inline]
    pub fn ln_g(&self, pol: Polarization, k: f64) -> f64 {
        self.g_and_ln(pol, k).1
    }

    /// ∂/∂d of ln(1 − r_− r_+ e^{−2Kd}).
    #[inline]
    pub fn dln_g_dd(&self, pol: Polarization, k: f64) -> f64 {
        let (x, kg) = self.round_trip(pol, k);
        2.0 * kg * x / self.g_and_ln(pol, k).0
    }
}

/// G^λ of the full five-layer stack at ξ > 0.
pub fn g_full(pol: Polarization, stack: &FiveLayerStack, k: f64, xi: f64) -> Result<f64> {
    Ok(stack.response(Frequency::Imag(xi))?.terms(pol, k).g())
}

/// 1 − r_− r_+ e^{−2Kd} for a gap between two identical half-spaces.
pub fn g_two_interface(
    pol: Polarization,
    bounding: &Layer,
    gap: &Layer,
    d: f64,
    k: f64,
    xi: f64,
) -> Result<f64> {
    check_positive(d, "gap")?;
    let resp = TwoInterfaceResponse::new(bounding, gap, d, Frequency::Imag(xi))?;
    Ok(resp.g_and_ln(pol, k).0)
}

/// G^λ with d₂, d₄ → ∞: a slab of thickness d₃ inside a uniform medium.
pub fn g_slab_in_medium(
    pol: Polarization,
    medium: &Layer,
    slab: &Layer,
    d3: f64,
    k: f64,
    xi: f64,
) -> Result<f64> {
    check_positive(d3, "slab")?;
    let resp = TwoInterfaceResponse::new(medium, slab, d3, Frequency::Imag(xi))?;
    Ok(resp.g_and_ln(pol, k).0)
}

fn check_positive(d: f64, what: &str) -> Result<()> {
    if d > 0.0 && d.is_finite() {
        Ok(())
    } else {
        Err(Error::Invalid(format!(
            "{what} thickness must be positive, got {d}"
        )))
    }
}
