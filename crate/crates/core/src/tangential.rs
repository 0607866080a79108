//! Tangential Casimir force on the middle plate of the misaligned system.
//!
//! Forces are reported per unit width (N/m). Positive values pull the middle
//! plate further in, toward larger overlap.

use crate::error::{Error, Result};
use crate::lifshitz::{
    energy_per_area_t, energy_per_area_two_interface, EnergyPerArea, MatsubaraConfig,
    QuadratureConfig,
};
use crate::material::ZeroMode;
use crate::stack::{FiveLayerStack, Layer};

/// Force per unit width and its decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentialResult {
    /// N/m, positive = inward pull.
    pub force_per_width: f64,
    /// Signed per-area energies whose sum is −force: the full stack, minus
    /// the retracted configuration, minus the isolated slab.
    pub components: [f64; 3],
    /// Per-n contributions to the force.
    pub breakdown: EnergyPerArea,
    pub matsubara: MatsubaraConfig,
    pub quadrature: QuadratureConfig,
}

/// F_T/L = −(k_BT/2π) Σ′ ∫dk k Σ_λ [ln G(d₂,d₃,d₄) − ln G(d₂+d₃+d₄) − ln G(d₃)].
pub fn tangential_force_general(
    stack: &FiveLayerStack,
    mats: &MatsubaraConfig,
    quad: &QuadratureConfig,
) -> Result<TangentialResult> {
    stack.check_tangential_symmetry()?;
    let full = energy_per_area_t(stack, mats, quad)?;
    let retracted = energy_per_area_t(&stack.retracted(), mats, quad)?;
    let slab = energy_per_area_two_interface(
        stack.layer(2),
        stack.layer(3),
        stack.thickness(3),
        mats,
        quad,
    )?;
    let components = [full.value, -retracted.value, -slab.value];
    let breakdown = EnergyPerArea::combine(&[(-1.0, &full), (1.0, &retracted), (1.0, &slab)]);
    Ok(TangentialResult {
        force_per_width: -(components[0] + components[1] + components[2]),
        components,
        breakdown,
        matsubara: *mats,
        quadrature: *quad,
    })
}

/// d₂, d₃ → ∞: F_T/L = −(k_BT/2π) Σ′ ∫dk k Σ_λ ln(1 − r₄₋ r₄₊ e^{−2K₄d₄}).
pub fn tangential_force_reduced(
    bounding: &Layer,
    gap: &Layer,
    d4: f64,
    mats: &MatsubaraConfig,
    quad: &QuadratureConfig,
) -> Result<TangentialResult> {
    let e = energy_per_area_two_interface(bounding, gap, d4, mats, quad)?;
    Ok(TangentialResult {
        force_per_width: -e.value,
        components: [e.value, 0.0, 0.0],
        breakdown: e.scaled(-1.0),
        matsubara: *mats,
        quadrature: *quad,
    })
}

/// One separation of a Drude-vs-plasma comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TreatmentRow {
    pub d: f64,
    pub drude: f64,
    pub plasma: f64,
    /// plasma / drude
    pub ratio: f64,
}

/// Reduced tangential force under both static-term treatments. The
/// temperature, n_max and quadrature come from `mats` and `quad`; the zero
/// mode is overridden.
pub fn drude_vs_plasma_sweep(
    bounding: &Layer,
    gap: &Layer,
    d_grid: &[f64],
    mats: &MatsubaraConfig,
    quad: &QuadratureConfig,
) -> Result<Vec<TreatmentRow>> {
    if d_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Invalid(
            "separation grid must be strictly ascending".into(),
        ));
    }
    d_grid
        .iter()
        .map(|&d| {
            let drude = tangential_force_reduced(
                bounding,
                gap,
                d,
                &mats.with_zero_mode(ZeroMode::DrudeLike),
                quad,
            )?
            .force_per_width;
            let plasma = tangential_force_reduced(
                bounding,
                gap,
                d,
                &mats.with_zero_mode(ZeroMode::PlasmaLike(None)),
                quad,
            )?
            .force_per_width;
            let ratio = if drude == 0.0 && plasma == 0.0 {
                1.0
            } else {
                plasma / drude
            };
            Ok(TreatmentRow {
                d,
                drude,
                plasma,
                ratio,
            })
        })
        .collect()
}
