//! Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any failure.

mod common;

use std::f64::consts::{FRAC_PI_2, PI};
use std::process::ExitCode;
use std::time::Instant;

use casimir_core::constants::{ev_to_radps, K_B, ZETA_3};
use casimir_core::lifshitz::{
    energy_per_area_t, energy_per_area_two_interface, matsubara_xi, normal_pressure,
    MatsubaraConfig, QuadratureConfig,
};
use casimir_core::material::{
    drude_real_axis, kk_transform, DrudeTail, OpticalDataTable, ZeroMode,
};
use casimir_core::stack::{FiveLayerStack, Layer};
use casimir_core::tangential::{
    drude_vs_plasma_sweep, tangential_force_general, tangential_force_reduced,
};
use casimir_core::torque::{
    area_derivative, edge_torque_ratio, interaction_energy_per_area, overlap, perimeter_derivative,
    theta0, torque, torque_energy, torque_from_density, PlateSystem, TorqueGeometry,
};
use casimir_core::Result;

use common::*;

type Outcome = Result<(bool, String)>;
type Criterion = (&'static str, fn() -> Outcome);

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
        .collect()
}

fn room(n_max: usize, zero_mode: ZeroMode) -> MatsubaraConfig {
    MatsubaraConfig::new(300.0, n_max, zero_mode).unwrap()
}

fn ideal_mirror_limit() -> Outcome {
    let quad = QuadratureConfig::default();
    let mut worst: f64 = 0.0;
    let mut notes = Vec::new();
    for d in [1e-7, 5e-7, 1e-6] {
        let f = tangential_force_reduced(&mirror(), &vacuum(), d, &cold(d), &quad)?.force_per_width;
        let err = rel(f, -ideal_energy(d));
        worst = worst.max(err);
        notes.push(format!("F_T/L({:.1}um)={f:.4e}", d * 1e6));
    }
    let d = 1e-6;
    let stack = FiveLayerStack::new([mirror(), vacuum(), mirror(), vacuum(), mirror()], d, d, d)?;
    let p = normal_pressure(&stack, 2, &cold(d), &quad)?;
    let p_err = rel(p, ideal_pressure(d)).max(rel(p, -1.300e-3));
    notes.push(format!("P(1um)={p:.5e} N/m^2"));
    Ok((
        worst < 5e-3 && p_err < 5e-3,
        format!(
            "{} max force err {worst:.2e}, pressure err {p_err:.2e} (tol 5e-3)",
            notes.join(", ")
        ),
    ))
}

fn truncation_claim() -> Outcome {
    let quad = QuadratureConfig::default();
    let mats = room(500, ZeroMode::FromModel);
    let mut worst: f64 = 0.0;
    for d in linspace(1e-7, 1e-6, 10) {
        let r = tangential_force_reduced(&gold_drude(), &vacuum(), d, &mats, &quad)?;
        let f500 = r.force_per_width;
        let f100 = r.breakdown.partial_sum(100);
        worst = worst.max(rel(f100, f500));
    }
    Ok((
        worst < 1e-6,
        format!("max |F500-F100|/|F| = {worst:.2e} over 10 points (tol 1e-6)"),
    ))
}

fn matsubara_constant() -> Outcome {
    let xi1 = matsubara_xi(1, 300.0);
    let err = rel(xi1, 2.468e14);
    Ok((
        err < 5e-4,
        format!("xi_1(300 K) = {xi1:.6e} rad/s, rel err {err:.2e} (tol 5e-4)"),
    ))
}

fn zero_mode_closed_form() -> Outcome {
    let quad = QuadratureConfig::default();
    let mats = MatsubaraConfig::new(300.0, 1, ZeroMode::DrudeLike)?;
    let mut worst: f64 = 0.0;
    for d in [1e-7, 1e-6, 1e-5] {
        for metal in [gold_drude(), aluminium_drude()] {
            let e = energy_per_area_two_interface(&metal, &vacuum(), d, &mats, &quad)?;
            let exact = -K_B * 300.0 * ZETA_3 / (16.0 * PI * d * d);
            worst = worst.max(rel(e.terms[0], exact));
        }
    }
    Ok((
        worst < 1e-9,
        format!("max rel err of n=0 term {worst:.2e} (tol 1e-9)"),
    ))
}

fn kk_oracle() -> Outcome {
    let (wp, g) = (ev_to_radps(9.0), ev_to_radps(0.035));
    let grid = casimir_core::material::synthetic::log_grid(0.01, 100.0, 600)?;
    let table =
        OpticalDataTable::from_model("analytic-drude", &grid, |w| drude_real_axis(wp, g, w))?;
    let low = DrudeTail::new(wp, g, table.min_energy_ev())?;
    let high = casimir_core::material::fit_power_tail(&table).tail;
    let mut worst: f64 = 0.0;
    for i in 0..=40 {
        let xi = ev_to_radps(0.01 * 5000f64.powf(i as f64 / 40.0));
        let v = kk_transform(&table, &low, &high, xi)?;
        worst = worst.max(rel(v, 1.0 + wp * wp / (xi * (xi + g))));
    }
    Ok((
        worst < 1e-3,
        format!("max rel err {worst:.2e} over 41 points in [0.01, 50] eV (tol 1e-3)"),
    ))
}

fn fig6_geometry(theta: f64) -> TorqueGeometry {
    TorqueGeometry::new(2e-3, 1e-3, 3e-3, theta, 1e-7).unwrap()
}

fn geometry_suite() -> Outcome {
    let t0 = theta0(2e-3, 1e-3);
    let (l, d3) = (1e-3, 1e-7);
    let mut closed: f64 = 0.0;
    for i in 0..=200 {
        let th = t0 + (FRAC_PI_2 - t0) * (i as f64 + 0.5) / 201.0;
        let o = overlap(&fig6_geometry(th));
        closed = closed
            .max(rel(o.area, l * l / th.sin()))
            .max(rel(o.perimeter, 4.0 * l / th.sin()));
    }
    let o = overlap(&fig6_geometry(FRAC_PI_2));
    closed = closed
        .max(rel(o.area, l * l))
        .max(rel(o.perimeter, 4.0 * l));

    let h = 1e-7;
    let mut deriv: f64 = 0.0;
    for i in 0..400 {
        let th = 1e-4 + (FRAC_PI_2 - 0.01 - 1e-4) * i as f64 / 399.0;
        if (th - t0).abs() < 1e-4 {
            continue;
        }
        let g = fig6_geometry(th);
        let (lo, hi) = (
            overlap(&fig6_geometry(th - h)),
            overlap(&fig6_geometry(th + h)),
        );
        let ds = (hi.area - lo.area) / (2.0 * h);
        let dp = (hi.perimeter - lo.perimeter) / (2.0 * h);
        deriv = deriv
            .max(rel(ds, area_derivative(&g)?))
            .max(rel(dp, perimeter_derivative(&g)?));
    }

    let mut branch_const: f64 = 0.0;
    for i in 0..50 {
        let th = t0 + 1e-6 + (FRAC_PI_2 - t0 - 1e-6) * i as f64 / 49.0;
        let r = edge_torque_ratio(&fig6_geometry(th))?;
        branch_const = branch_const
            .max(rel(r, 0.264 * d3 / l))
            .max(rel(r, 2.64e-5));
    }
    let mut inner_max: f64 = 0.0;
    for i in 1..20000 {
        let th = t0 * i as f64 / 20000.0;
        inner_max = inner_max.max(edge_torque_ratio(&fig6_geometry(th))?.abs());
    }
    let pass = closed < 1e-12 && deriv < 1e-6 && branch_const < 1e-12 && inner_max < 1.4e-5;
    Ok((
        pass,
        format!(
            "closed-form err {closed:.1e} (1e-12), derivative err {deriv:.1e} (1e-6), \
             parallelogram edge ratio err {branch_const:.1e}, max edge ratio below theta0 {inner_max:.3e} (< 1.4e-5)"
        ),
    ))
}

fn torque_scaling() -> Outcome {
    let system = PlateSystem::new(gold_drude(), gold_drude(), vacuum());
    let mats = room(500, ZeroMode::FromModel);
    let quad = QuadratureConfig::default();
    let f = 3.0;
    let mut worst: f64 = 0.0;
    for th in [1.2, 0.5] {
        let g = fig6_geometry(th);
        let m = torque(&g, &system, &mats, &quad)?;
        let m1 = torque(&g.scaled(f)?, &system, &mats, &quad)?;
        worst = worst.max(rel(m1, f * f * m));
    }
    Ok((
        worst < 1e-10,
        format!("max |M(3K,3L) - 9 M|/|9 M| = {worst:.2e} (tol 1e-10)"),
    ))
}

fn monotone_toward_one(ratios: &[f64]) -> bool {
    let dev: Vec<f64> = ratios.iter().map(|r| (r - 1.0).abs()).collect();
    dev[dev.len() - 3..].windows(2).all(|w| w[1] < w[0])
}

fn curve_shapes() -> Outcome {
    let quad = QuadratureConfig::sweep();
    let mats = room(500, ZeroMode::FromModel);
    let near = linspace(1e-7, 1e-6, 10);
    let (au1, au2, al) = (au1(), au2(), al());

    let rows = drude_vs_plasma_sweep(&au1, &vacuum(), &near, &mats, &quad)?;
    let plasma_wins = rows.iter().all(|r| r.plasma.abs() >= r.drude.abs());

    let far = [1e-7, 3e-7, 1e-6, 2e-6, 4e-6, 7e-6, 1e-5];
    let au_far = drude_vs_plasma_sweep(&au1, &vacuum(), &far, &mats, &quad)?;
    let al_far = drude_vs_plasma_sweep(&al, &vacuum(), &far, &mats, &quad)?;
    let al_drude: Vec<f64> = al_far
        .iter()
        .zip(&au_far)
        .map(|(a, b)| a.drude / b.drude)
        .collect();
    let al_plasma: Vec<f64> = al_far
        .iter()
        .zip(&au_far)
        .map(|(a, b)| a.plasma / b.plasma)
        .collect();
    let al_ok = monotone_toward_one(&al_drude) && monotone_toward_one(&al_plasma);

    let au2_rows = drude_vs_plasma_sweep(&au2, &vacuum(), &near, &mats, &quad)?;
    let argmax = |v: Vec<f64>| {
        v.iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i)
            .unwrap()
    };
    let dev_d: Vec<f64> = au2_rows
        .iter()
        .zip(&rows)
        .map(|(a, b)| (a.drude / b.drude - 1.0).abs())
        .collect();
    let dev_p: Vec<f64> = au2_rows
        .iter()
        .zip(&rows)
        .map(|(a, b)| (a.plasma / b.plasma - 1.0).abs())
        .collect();
    let au_ok = argmax(dev_d.clone()) == 0 && argmax(dev_p.clone()) == 0;

    let system = PlateSystem::new(au2.clone(), au2, vacuum());
    let w = interaction_energy_per_area(
        &system,
        1e-7,
        &mats.with_zero_mode(ZeroMode::PlasmaLike(None)),
        &quad,
    )?
    .value;
    let curve: Vec<(f64, f64)> = (1..=200)
        .map(|i| {
            let th = FRAC_PI_2 * i as f64 / 200.0;
            let th = if th == theta0(2e-3, 1e-3) {
                th + 1e-9
            } else {
                th
            };
            torque_from_density(&fig6_geometry(th), w).map(|m| (th, m))
        })
        .collect::<Result<_>>()?;
    let peak = curve.iter().map(|c| c.1.abs()).fold(0.0, f64::max);
    let at_right = curve.last().unwrap().1.abs();
    let plateau = 0.25 * 4e-6 * w.abs();
    let small = torque_from_density(&fig6_geometry(1e-6), w)?.abs();
    let torque_ok =
        at_right <= 1e-12 * peak && (small / plateau - 1.0).abs() < 1e-3 && small > 0.0 && w < 0.0;

    Ok((
        plasma_wins && al_ok && au_ok && torque_ok,
        format!(
            "plasma>=drude {plasma_wins}; Al/Au -> 1 {al_ok} (drude tail {:.4}, plasma tail {:.4}); \
             Au2/Au1 max deviation at 0.1um {au_ok} ({:.3e}, {:.3e}); \
             torque M(pi/2)/max {:.1e}, M(0+) = {small:.4e} N m",
            al_drude.last().unwrap(),
            al_plasma.last().unwrap(),
            dev_d[0],
            dev_p[0],
            at_right / peak,
        ),
    ))
}

fn consistency() -> Outcome {
    let quad = QuadratureConfig::new(1e-12, 4000)?;
    let mats = room(300, ZeroMode::FromModel);
    let magnetic = Layer::new(
        casimir_core::material::PermittivityModel::Constant(4.0),
        casimir_core::material::PermeabilityModel::constant(2.0)?,
    );
    let mut pressure_err: f64 = 0.0;
    for (m, mat) in [gold_drude(), mirror(), magnetic].into_iter().enumerate() {
        for (j, d) in [1e-7, 5e-7, 1e-6].into_iter().enumerate() {
            let layer = 2 + (m + j) % 3;
            let stack = FiveLayerStack::new(
                [
                    mat.clone(),
                    vacuum(),
                    mat.clone(),
                    dielectric(2.0),
                    mat.clone(),
                ],
                d,
                1.3 * d,
                0.8 * d,
            )?;
            let p = normal_pressure(&stack, layer, &mats, &quad)?;
            let di = stack.thickness(layer);
            let h = 1e-4 * di;
            let e = |x: f64| -> Result<f64> {
                Ok(energy_per_area_t(&stack.with_thickness(layer, x)?, &mats, &quad)?.value)
            };
            let fd = -(e(di + h)? - e(di - h)?) / (2.0 * h);
            pressure_err = pressure_err.max(rel(fd, p));
        }
    }

    let system = PlateSystem::new(gold_drude(), gold_drude(), vacuum());
    let tq = QuadratureConfig::default();
    let mut torque_err: f64 = 0.0;
    for th in [0.3, 0.6, 1.2, 1.5] {
        let g = fig6_geometry(th);
        let m = torque(&g, &system, &mats, &tq)?;
        let h = 1e-6;
        let fd = -(torque_energy(&g.with_theta(th + h)?, &system, &mats, &tq)?
            - torque_energy(&g.with_theta(th - h)?, &system, &mats, &tq)?)
            / (2.0 * h);
        torque_err = torque_err.max(rel(fd, m));
    }

    let d4 = 1e-7;
    let deep = 1000.0 * d4;
    let mut tangential_err: f64 = 0.0;
    let gmats = room(500, ZeroMode::FromModel);
    for metal in [gold_drude(), aluminium_drude()] {
        let stack = FiveLayerStack::new(
            [
                metal.clone(),
                vacuum(),
                metal.clone(),
                vacuum(),
                metal.clone(),
            ],
            deep,
            deep,
            d4,
        )?;
        let general = tangential_force_general(&stack, &gmats, &tq)?.force_per_width;
        let reduced = tangential_force_reduced(&metal, &vacuum(), d4, &gmats, &tq)?.force_per_width;
        tangential_err = tangential_err.max(rel(general, reduced));
    }
    Ok((
        pressure_err < 1e-5 && torque_err < 1e-5 && tangential_err < 1e-6,
        format!(
            "pressure vs FD {pressure_err:.2e} (1e-5), torque vs FD {torque_err:.2e} (1e-5), \
             general vs reduced {tangential_err:.2e} (1e-6)"
        ),
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("ideal-mirror limit", ideal_mirror_limit),
        ("truncation n_max 100 vs 500", truncation_claim),
        ("first Matsubara frequency", matsubara_constant),
        ("drude-like zero-mode closed form", zero_mode_closed_form),
        ("Kramers-Kronig oracle", kk_oracle),
        ("overlap geometry", geometry_suite),
        ("torque f^2 scaling", torque_scaling),
        ("curve-shape properties", curve_shapes),
        ("internal consistency", consistency),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (pass, detail) = match run() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failed += 1;
        }
        println!(
            "{} criterion {}: {name}: {detail} [{:.1}s]",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            start.elapsed().as_secs_f64()
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
