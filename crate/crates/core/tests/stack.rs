mod common;

use casimir_core::constants::C;
use casimir_core::lifshitz::matsubara_xi;
use casimir_core::material::{PermeabilityModel, PermittivityModel, ZeroMode};
use casimir_core::stack::{
    g_full, g_slab_in_medium, g_two_interface, kappa, reflection, reflection_zero_mode,
    FiveLayerStack, Layer, Polarization,
};
use proptest::prelude::*;

use common::*;

const XI: f64 = 2.468e14;

fn magnetic(eps: f64, mu: f64) -> Layer {
    Layer::new(
        PermittivityModel::constant(eps).unwrap(),
        PermeabilityModel::constant(mu).unwrap(),
    )
}

/// G from the closed-form expansion, rebuilt from pairwise coefficients.
fn hand_expansion(pol: Polarization, s: &FiveLayerStack, k: f64, xi: f64) -> f64 {
    let l = s.layers();
    let r: Vec<f64> = (0..4)
        .map(|i| reflection(pol, &l[i], &l[i + 1], k, xi).unwrap())
        .collect();
    let e: Vec<f64> = (1..4)
        .map(|i| (-2.0 * kappa(&l[i], k, xi).unwrap() * s.thickness(i + 1)).exp())
        .collect();
    let (e2, e3, e4) = (e[0], e[1], e[2]);
    1.0 + r[0] * r[1] * e2
        + r[1] * r[2] * e3
        + r[2] * r[3] * e4
        + r[0] * r[2] * e2 * e3
        + r[1] * r[3] * e3 * e4
        + r[0] * r[1] * r[2] * r[3] * e2 * e4
        + r[0] * r[3] * e2 * e3 * e4
}

#[test]
fn kernel_examples() {
    assert!(rel(kappa(&vacuum(), 0.0, XI).unwrap(), XI / C) < 1e-15);
    assert!(kappa(&gold_drude(), 3e6, 0.0).unwrap() > 0.0);
    assert_eq!(kappa(&dielectric(5.0), 3e6, 0.0).unwrap(), 3e6);
    assert!(
        rel(
            kappa(&dielectric(2.0), XI / C, XI).unwrap(),
            3f64.sqrt() * XI / C
        ) < 1e-15
    );
    assert!(kappa(&gold_drude(), 0.0, 0.0).is_err());
}

#[test]
fn reflection_examples() {
    for p in Polarization::BOTH {
        assert_eq!(
            reflection(p, &gold_drude(), &gold_drude(), 1e6, XI).unwrap(),
            0.0
        );
    }
    let k = 1e6;
    assert!(
        (reflection(Polarization::Beta, &vacuum(), &mirror(), k, XI).unwrap() - 1.0).abs() < 1e-5
    );
    assert!(
        (reflection(Polarization::Alpha, &vacuum(), &mirror(), k, XI).unwrap() + 1.0).abs() < 1e-5
    );

    let xi1 = matsubara_xi(1, 300.0);
    let k = xi1 / C;
    let direct = reflection(Polarization::Beta, &vacuum(), &gold_drude(), k, xi1).unwrap();
    let swapped = reflection(Polarization::Beta, &gold_drude(), &vacuum(), k, xi1).unwrap();
    assert!((direct + swapped).abs() < 1e-14);
}

#[test]
fn static_reflection_limits() {
    for k in [0.0, 1e3, 1e7] {
        let a = reflection_zero_mode(Polarization::Alpha, &gold_drude(), ZeroMode::DrudeLike, k)
            .unwrap();
        assert_eq!(a, 0.0);
        for mode in [ZeroMode::DrudeLike, ZeroMode::PlasmaLike(None)] {
            let b = reflection_zero_mode(Polarization::Beta, &gold_drude(), mode, k).unwrap();
            assert_eq!(b, 1.0);
        }
    }
    let a = reflection_zero_mode(
        Polarization::Alpha,
        &gold_drude(),
        ZeroMode::PlasmaLike(None),
        0.0,
    )
    .unwrap();
    assert_eq!(a, -1.0);
}

#[test]
fn identical_layers_give_unity() {
    let s = FiveLayerStack::new(std::array::from_fn(|_| gold_drude()), 1e-7, 2e-7, 3e-7).unwrap();
    for p in Polarization::BOTH {
        assert_eq!(g_full(p, &s, 1e6, XI).unwrap(), 1.0);
    }
}

#[test]
fn absent_middle_plate_collapses_to_one_gap() {
    let (d2, d3, d4) = (1e-7, 2e-7, 3e-7);
    let s = FiveLayerStack::new(
        [mirror(), vacuum(), vacuum(), vacuum(), mirror()],
        d2,
        d3,
        d4,
    )
    .unwrap();
    for p in Polarization::BOTH {
        for k in [1e5, 1e6, 1e7] {
            let full = g_full(p, &s, k, XI).unwrap();
            let two = g_two_interface(p, &mirror(), &vacuum(), d2 + d3 + d4, k, XI).unwrap();
            assert!((full - two).abs() < 1e-12, "{p:?} {k}: {full} vs {two}");
        }
    }
}

#[test]
fn full_stack_matches_hand_expansion() {
    let layers = [
        gold_drude(),
        vacuum(),
        magnetic(3.0, 1.7),
        dielectric(2.2),
        aluminium_drude(),
    ];
    let s = FiveLayerStack::new(layers, 8e-8, 5e-8, 1.2e-7).unwrap();
    for p in Polarization::BOTH {
        for k in [1e5, 3e6, 2e7] {
            for xi in [XI, 10.0 * XI] {
                let g = g_full(p, &s, k, xi).unwrap();
                assert!((g - hand_expansion(p, &s, k, xi)).abs() < 1e-14);
            }
        }
    }
}

#[test]
fn thick_outer_gaps_leave_the_inner_gap() {
    let d4 = 1e-7;
    let s = FiveLayerStack::new(
        [gold_drude(), vacuum(), gold_drude(), vacuum(), gold_drude()],
        50.0 * d4,
        50.0 * d4,
        d4,
    )
    .unwrap();
    for p in Polarization::BOTH {
        for k in [1e5, 1e6, 5e6, 2e7] {
            let full = g_full(p, &s, k, XI).unwrap();
            let two = g_two_interface(p, &gold_drude(), &vacuum(), d4, k, XI).unwrap();
            let kv = kappa(&vacuum(), k, XI).unwrap();
            let bound = 4.0 * (-2.0 * kv * 50.0 * d4).exp();
            assert!((full - two).abs() <= bound.max(1e-10), "{p:?} {k}");
            if k >= 5e6 {
                assert!((full - two).abs() < 1e-10);
            }
        }
    }
}

#[test]
fn two_interface_examples() {
    for p in Polarization::BOTH {
        assert_eq!(
            g_two_interface(p, &vacuum(), &vacuum(), 1e-7, 1e6, XI).unwrap(),
            1.0
        );
    }
    // 2Kd = ln 2 with K = sqrt(k² + ξ²/c²) in vacuum.
    let d = 1e-7;
    let kv = 2f64.ln() / (2.0 * d);
    let k = (kv * kv - (XI / C).powi(2)).sqrt();
    for p in Polarization::BOTH {
        let g = g_two_interface(p, &mirror(), &vacuum(), d, k, XI).unwrap();
        assert!((g - 0.5).abs() < 1e-5, "{p:?}: {g}");
    }
}

#[test]
fn slab_examples() {
    for p in Polarization::BOTH {
        assert_eq!(
            g_slab_in_medium(p, &gold_drude(), &gold_drude(), 1e-7, 1e6, XI).unwrap(),
            1.0
        );
        let a = g_slab_in_medium(p, &vacuum(), &gold_drude(), 1e-7, 1e6, XI).unwrap();
        let b = g_two_interface(p, &vacuum(), &gold_drude(), 1e-7, 1e6, XI).unwrap();
        assert!((a - b).abs() < 1e-14);
    }
}

#[test]
fn invalid_stacks_are_rejected() {
    let l = || std::array::from_fn(|_| vacuum());
    assert!(FiveLayerStack::new(l(), 0.0, 1e-7, 1e-7).is_err());
    assert!(FiveLayerStack::new(l(), 1e-7, -1.0, 1e-7).is_err());
    assert!(FiveLayerStack::new(l(), 1e-7, 1e-7, f64::NAN).is_err());
    assert!(g_two_interface(Polarization::Beta, &vacuum(), &vacuum(), 0.0, 1.0, XI).is_err());
}

fn layer_strategy() -> impl Strategy<Value = Layer> {
    prop_oneof![
        (1.0f64..20.0, 1.0f64..5.0).prop_map(|(e, m)| magnetic(e, m)),
        (1.0f64..15.0, 0.0f64..0.2).prop_map(|(wp, g)| drude(wp, g)),
        Just(vacuum()),
    ]
}

/// Nonmagnetic plates; with vacuum gaps every cavity is attractive.
fn plate_strategy() -> impl Strategy<Value = Layer> {
    prop_oneof![
        (1.0f64..20.0).prop_map(dielectric),
        (1.0f64..15.0, 0.0f64..0.2).prop_map(|(wp, g)| drude(wp, g)),
    ]
}

proptest! {
    #[test]
    fn reflection_is_antisymmetric_and_bounded(
        a in layer_strategy(), b in layer_strategy(), k in 0.0f64..1e8, xi in 1e12f64..1e17,
    ) {
        for p in Polarization::BOTH {
            let r = reflection(p, &a, &b, k, xi).unwrap();
            let back = reflection(p, &b, &a, k, xi).unwrap();
            prop_assert!(r.abs() <= 1.0);
            prop_assert!((r + back).abs() <= 1e-14);
        }
    }

    #[test]
    fn vacuum_gapped_plates_have_g_in_unit_interval(
        plates in proptest::array::uniform3(plate_strategy()),
        d in proptest::array::uniform3(1e-8f64..1e-5),
        k in 0.0f64..1e8,
        xi in 1e12f64..1e17,
    ) {
        let [a, b, c] = plates;
        let s = FiveLayerStack::new([a, vacuum(), b, vacuum(), c], d[0], d[1], d[2]).unwrap();
        for p in Polarization::BOTH {
            let g = g_full(p, &s, k, xi).unwrap();
            prop_assert!(g > 0.0 && g <= 1.0 + 1e-15, "{}", g);
        }
    }

    #[test]
    fn swapping_eps_and_mu_swaps_polarizations(
        em in proptest::array::uniform5((1.0f64..20.0, 1.0f64..20.0)),
        k in 0.0f64..1e8,
        xi in 1e12f64..1e17,
    ) {
        let fwd: [Layer; 5] = std::array::from_fn(|i| magnetic(em[i].0, em[i].1));
        let rev: [Layer; 5] = std::array::from_fn(|i| magnetic(em[i].1, em[i].0));
        let (a, b) = (
            FiveLayerStack::new(fwd, 1e-7, 2e-7, 1.5e-7).unwrap(),
            FiveLayerStack::new(rev, 1e-7, 2e-7, 1.5e-7).unwrap(),
        );
        let ga = g_full(Polarization::Alpha, &a, k, xi).unwrap();
        let gb = g_full(Polarization::Beta, &b, k, xi).unwrap();
        prop_assert!((ga - gb).abs() <= 1e-14);
    }
}
