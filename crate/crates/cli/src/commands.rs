//! The five subcommands. Each returns its full output text; nothing here
//! touches stdout or the filesystem beyond reading inputs.

use std::f64::consts::FRAC_PI_2;
use std::path::PathBuf;

use casimir_core::constants::radps_to_ev;
use casimir_core::lifshitz::{
    energy_per_area_two_interface, truncation_report, MatsubaraConfig, QuadratureConfig,
};
use casimir_core::material::{
    fit_power_tail, read_samples_path, OpticalDataTable, TailFit, ZeroMode,
};
use casimir_core::stack::{FiveLayerStack, Layer};
use casimir_core::tangential::{tangential_force_general, tangential_force_reduced};
use casimir_core::torque::{
    area_derivative, edge_energy, edge_torque_ratio_with, interaction_energy_per_area, overlap,
    torque_from_density, PlateSystem, TorqueGeometry,
};
use rayon::prelude::*;

use crate::config::{grid, MaterialSpec, Resolved, RunConfig, StackSection};
use crate::error::{CliError, Result};
use crate::output::{num, Table};

/// Edge effects are negligible only for plates at least this wide, m.
pub const MIN_EDGE_WIDTH: f64 = 1e-3;
/// ... and for gaps no larger than this, m.
pub const MAX_EDGE_GAP: f64 = 1e-6;
/// Offset applied to θ-grid points that land on θ₀, rad.
pub const THETA0_OFFSET: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    EpsTable,
    ForceSweep,
    TorqueSweep,
    Convergence,
    ValidateData,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::EpsTable => "eps-table",
            Command::ForceSweep => "force-sweep",
            Command::TorqueSweep => "torque-sweep",
            Command::Convergence => "convergence",
            Command::ValidateData => "validate-data",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    ValidationFailed,
    NotConverged,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::ValidationFailed => 1,
            Status::NotConverged => 2,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub text: String,
    pub warnings: Vec<String>,
    pub status: Status,
}

impl Outcome {
    fn ok(text: String, warnings: Vec<String>) -> Self {
        Outcome {
            text,
            warnings,
            status: Status::Ok,
        }
    }
}

pub fn run(cmd: Command, cfg: &RunConfig) -> Result<Outcome> {
    match cmd {
        Command::EpsTable => run_eps_table(cfg),
        Command::ForceSweep => run_force_sweep(cfg),
        Command::TorqueSweep => run_torque_sweep(cfg),
        Command::Convergence => run_convergence(cfg),
        Command::ValidateData => run_validate_data(cfg),
    }
}

fn header(
    table: &mut Table,
    cmd: Command,
    cfg: &RunConfig,
    mats: &MatsubaraConfig,
    quad: &QuadratureConfig,
) {
    table.meta("casimir", cmd.name());
    table.meta("temperature_k", num(mats.temperature_k));
    table.meta("n_max", mats.n_max);
    table.meta("zero_mode", mats.zero_mode);
    table.meta("rel_tol", num(quad.rel_tol));
    table.meta("max_panels", quad.max_panels);
    table.meta_block("config", &cfg.to_toml());
}

fn describe(table: &mut Table, role: &str, m: &Resolved) {
    table.meta(role, &m.label);
    if let Some(fit) = m.tail {
        table.meta(&format!("{role}_tail"), tail_summary(&fit));
    }
}

fn tail_summary(fit: &TailFit) -> String {
    format!(
        "eps2 ~ {} (E_max/E)^{} over {} points, rms log residual {}{}",
        num(fit.tail.amplitude),
        num(fit.tail.exponent),
        fit.points,
        num(fit.rms_log_residual),
        if fit.clamped {
            ", exponent clamped"
        } else {
            ""
        }
    )
}

fn at(what: String) -> impl FnOnce(casimir_core::Error) -> CliError {
    move |source| CliError::Point { what, source }
}

pub fn run_eps_table(cfg: &RunConfig) -> Result<Outcome> {
    let (mats, quad) = (cfg.matsubara()?, cfg.quadrature()?);
    let material = cfg.material()?;
    let section = cfg.eps_table.clone().unwrap_or_default();
    let (with_n, xis): (bool, Vec<f64>) = match section.grid.as_str() {
        "matsubara" => (true, (1..=mats.n_max).map(|n| mats.xi(n)).collect()),
        "log" => {
            let lo = section
                .xi_min_ev
                .ok_or_else(|| CliError::Config("[eps_table] needs xi_min_ev".into()))?;
            let hi = section
                .xi_max_ev
                .ok_or_else(|| CliError::Config("[eps_table] needs xi_max_ev".into()))?;
            let n = section
                .points
                .ok_or_else(|| CliError::Config("[eps_table] needs points".into()))?;
            (
                false,
                grid(lo, hi, n, "log")?
                    .into_iter()
                    .map(casimir_core::constants::ev_to_radps)
                    .collect(),
            )
        }
        "list" => {
            let list = section
                .xi_ev
                .clone()
                .ok_or_else(|| CliError::Config("[eps_table] needs xi_ev".into()))?;
            (
                false,
                list.into_iter()
                    .map(casimir_core::constants::ev_to_radps)
                    .collect(),
            )
        }
        other => {
            return Err(CliError::Config(format!(
                "[eps_table] grid must be matsubara, log or list, got '{other}'"
            )))
        }
    };
    let eps: Vec<f64> = xis
        .par_iter()
        .map(|&xi| {
            material
                .layer
                .eps
                .eval(xi)
                .map_err(at(format!("xi = {xi:e} rad/s")))
        })
        .collect::<Result<_>>()?;

    let cols: &[&str] = if with_n {
        &["n", "xi_rad_s", "xi_ev", "eps"]
    } else {
        &["xi_rad_s", "xi_ev", "eps"]
    };
    let mut table = Table::new(cols);
    header(&mut table, Command::EpsTable, cfg, &mats, &quad);
    describe(&mut table, "material", &material);
    for (i, (&xi, &e)) in xis.iter().zip(&eps).enumerate() {
        let mut row = vec![num(xi), num(radps_to_ev(xi)), num(e)];
        if with_n {
            row.insert(0, (i + 1).to_string());
        }
        table.push(row);
    }
    Ok(Outcome::ok(table.render(), Vec::new()))
}

/// Tangential force per width for one material at separation `d4`.
fn force(
    stack: &StackSection,
    plate: &Layer,
    medium: &Layer,
    d4: f64,
    mats: &MatsubaraConfig,
    quad: &QuadratureConfig,
) -> casimir_core::Result<f64> {
    let r = if stack.is_general().unwrap_or(false) {
        let (d2, d3) = (
            stack.d2_m.unwrap_or_default(),
            stack.d3_m.unwrap_or_default(),
        );
        let s = FiveLayerStack::new(
            [
                plate.clone(),
                medium.clone(),
                plate.clone(),
                medium.clone(),
                plate.clone(),
            ],
            d2,
            d3,
            d4,
        )?;
        tangential_force_general(&s, mats, quad)?
    } else {
        tangential_force_reduced(plate, medium, d4, mats, quad)?
    };
    Ok(r.force_per_width)
}

fn ratio(a: f64, b: f64) -> f64 {
    if a == 0.0 && b == 0.0 {
        1.0
    } else {
        a / b
    }
}

fn edge_warnings(width: Option<f64>, gaps: impl Iterator<Item = f64>) -> Vec<String> {
    let mut w = Vec::new();
    if let Some(l) = width.filter(|l| *l < MIN_EDGE_WIDTH) {
        w.push(format!(
            "plate width {l:e} m is below {MIN_EDGE_WIDTH:e} m; edge corrections may not be negligible"
        ));
    }
    let wide: Vec<f64> = gaps.filter(|g| *g > MAX_EDGE_GAP).collect();
    if let Some(first) = wide.first() {
        w.push(format!(
            "{} point(s) from {first:e} m have gaps above {MAX_EDGE_GAP:e} m; edge corrections may not be negligible",
            wide.len()
        ));
    }
    w
}

pub fn run_force_sweep(cfg: &RunConfig) -> Result<Outcome> {
    let (mats, quad) = (cfg.matsubara()?, cfg.quadrature()?);
    let stack = cfg.stack()?;
    let general = stack.is_general()?;
    let grid = stack.separations()?;
    let (material, medium, compare) = (cfg.material()?, cfg.medium()?, cfg.compare()?);
    let d2 = if general {
        Some(stack.outer()?.0)
    } else {
        None
    };

    let modes: Vec<(&str, MatsubaraConfig)> = if stack.both_treatments {
        vec![
            ("drude", mats.with_zero_mode(ZeroMode::DrudeLike)),
            ("plasma", mats.with_zero_mode(ZeroMode::PlasmaLike(None))),
        ]
    } else {
        vec![("force", mats)]
    };

    let rows: Vec<(Vec<f64>, Vec<f64>)> = grid
        .par_iter()
        .map(|&d| {
            let eval = |plate: &Layer| -> Result<Vec<f64>> {
                modes
                    .iter()
                    .map(|(_, m)| {
                        force(stack, plate, &medium.layer, d, m, &quad)
                            .map_err(at(format!("d4 = {d:e} m")))
                    })
                    .collect()
            };
            let main = eval(&material.layer)?;
            let other = match &compare {
                Some(c) => eval(&c.layer)?,
                None => Vec::new(),
            };
            Ok((main, other))
        })
        .collect::<Result<_>>()?;

    let mut cols = vec!["d4_m".to_string()];
    for (name, _) in &modes {
        cols.push(format!("{name}_n_per_m"));
    }
    if stack.both_treatments {
        cols.push("plasma_over_drude".into());
    }
    if compare.is_some() {
        for (name, _) in &modes {
            cols.push(format!("compare_{name}_n_per_m"));
        }
        for (name, _) in &modes {
            cols.push(if modes.len() == 1 {
                "ratio".to_string()
            } else {
                format!("ratio_{name}")
            });
        }
    }
    let col_refs: Vec<&str> = cols.iter().map(String::as_str).collect();
    let mut table = Table::new(&col_refs);
    header(&mut table, Command::ForceSweep, cfg, &mats, &quad);
    table.meta("layout", if general { "general" } else { "reduced" });
    table.meta(
        "sign",
        "positive force pulls the middle plate toward larger overlap",
    );
    describe(&mut table, "material", &material);
    describe(&mut table, "medium", &medium);
    if let Some(c) = &compare {
        describe(&mut table, "compare", c);
        table.meta("ratio", "material / compare");
    }

    for (&d, (main, other)) in grid.iter().zip(&rows) {
        let mut row = vec![num(d)];
        row.extend(main.iter().map(|v| num(*v)));
        if stack.both_treatments {
            row.push(num(ratio(main[1], main[0])));
        }
        if compare.is_some() {
            row.extend(other.iter().map(|v| num(*v)));
            row.extend(main.iter().zip(other).map(|(a, b)| num(ratio(*a, *b))));
        }
        table.push(row);
    }

    let gaps = grid.iter().map(|&d4| d2.map_or(d4, |d2| d2.min(d4)));
    let warnings = edge_warnings(stack.width_m, gaps);
    for w in &warnings {
        table.meta("warning", w);
    }
    Ok(Outcome::ok(table.render(), warnings))
}

pub fn run_torque_sweep(cfg: &RunConfig) -> Result<Outcome> {
    let (mats, quad) = (cfg.matsubara()?, cfg.quadrature()?);
    let section = cfg.torque()?;
    let (material, medium) = (cfg.material()?, cfg.medium()?);
    let plate_b = match &section.plate_b {
        Some(spec) => spec.resolve(&cfg.base_dir, "torque.plate_b")?,
        None => material.clone(),
    };
    let base = TorqueGeometry::new(
        section.long_side_m,
        section.width_m,
        section.cross_side_m,
        FRAC_PI_2,
        section.gap_m,
    )?;
    let theta0 = base.theta0();
    let mut warnings = edge_warnings(Some(section.width_m), std::iter::empty());
    let mut thetas = section.thetas()?;
    for t in thetas.iter_mut() {
        if *t == theta0 {
            *t += THETA0_OFFSET;
            warnings.push(format!(
                "theta = {theta0:e} rad is the branch point theta0; evaluated at +{THETA0_OFFSET:e} rad"
            ));
        }
    }
    if thetas.iter().any(|t| *t > FRAC_PI_2) {
        return Err(CliError::Config(
            "theta0 offset pushed a point beyond pi/2".into(),
        ));
    }

    let system = PlateSystem::new(
        material.layer.clone(),
        plate_b.layer.clone(),
        medium.layer.clone(),
    )
    .with_thickness(section.plate_thickness());
    let w = interaction_energy_per_area(&system, section.gap_m, &mats, &quad)
        .map_err(at(format!("gap = {:e} m", section.gap_m)))?
        .value;

    let rows: Vec<Vec<String>> = thetas
        .par_iter()
        .map(|&th| {
            let g = base.with_theta(th)?;
            let shape = overlap(&g);
            Ok(vec![
                num(th),
                num(shape.area),
                num(shape.perimeter),
                num(area_derivative(&g)?),
                num(shape.area * w),
                num(torque_from_density(&g, w)?),
                num(edge_energy(&g)),
                num(edge_torque_ratio_with(&g, section.high_temperature_edge)?),
            ])
        })
        .collect::<Result<_>>()?;

    let mut table = Table::new(&[
        "theta_rad",
        "overlap_area_m2",
        "perimeter_m",
        "area_derivative_m2_per_rad",
        "energy_j",
        "torque_n_m",
        "edge_energy_j",
        "edge_torque_ratio",
    ]);
    header(&mut table, Command::TorqueSweep, cfg, &mats, &quad);
    describe(&mut table, "plate_a", &material);
    describe(&mut table, "plate_b", &plate_b);
    describe(&mut table, "medium", &medium);
    table.meta("theta0_rad", num(theta0));
    table.meta("energy_per_area_j_per_m2", num(w));
    table.meta("sign", "negative torque drives theta toward 0; M(0) = 0");
    for w in &warnings {
        table.meta("warning", w);
    }
    for r in rows {
        table.push(r);
    }
    Ok(Outcome::ok(table.render(), warnings))
}

pub fn run_convergence(cfg: &RunConfig) -> Result<Outcome> {
    let (mats, quad) = (cfg.matsubara()?, cfg.quadrature()?);
    let stack = cfg.stack()?;
    let general = stack.is_general()?;
    let grid = stack.separations()?;
    let section = cfg
        .convergence
        .as_ref()
        .ok_or_else(|| CliError::Config("missing [convergence] section".into()))?;
    let (material, medium) = (cfg.material()?, cfg.medium()?);
    let (p, m) = (&material.layer, &medium.layer);

    let reports: Vec<Vec<casimir_core::lifshitz::TruncationRow>> = grid
        .par_iter()
        .map(|&d| {
            let rows = if general {
                let (d2, d3) = stack.outer()?;
                let s = FiveLayerStack::new(
                    [p.clone(), m.clone(), p.clone(), m.clone(), p.clone()],
                    d2,
                    d3,
                    d,
                )?;
                truncation_report(&s, &mats, &quad, &section.checkpoints)
            } else {
                energy_per_area_two_interface(p, m, d, &mats, &quad)
                    .and_then(|e| e.truncation(&section.checkpoints))
            };
            rows.map_err(at(format!("d4 = {d:e} m")))
        })
        .collect::<Result<_>>()?;

    let mut table = Table::new(&["d4_m", "n_max", "energy_j_per_m2", "rel_delta"]);
    header(&mut table, Command::Convergence, cfg, &mats, &quad);
    table.meta("layout", if general { "general" } else { "reduced" });
    describe(&mut table, "material", &material);
    describe(&mut table, "medium", &medium);
    let mut worst: f64 = 0.0;
    for (&d, rows) in grid.iter().zip(&reports) {
        for r in rows {
            table.push(vec![
                num(d),
                r.n_max.to_string(),
                num(r.value),
                r.rel_delta.map(num).unwrap_or_default(),
            ]);
        }
        if let Some(delta) = rows.last().and_then(|r| r.rel_delta) {
            worst = worst.max(delta);
        }
    }
    table.meta("max_final_rel_delta", num(worst));
    let mut out = Outcome::ok(String::new(), Vec::new());
    if let Some(tol) = section.tolerance {
        table.meta("tolerance", num(tol));
        if worst > tol {
            out.status = Status::NotConverged;
            out.warnings.push(format!(
                "final relative change {worst:e} exceeds tolerance {tol:e}"
            ));
        }
    }
    out.text = table.render();
    Ok(out)
}

/// Every data file referenced by the configuration, with the section that
/// names it.
fn data_files(cfg: &RunConfig) -> Vec<(String, &MaterialSpec, PathBuf)> {
    let mut specs: Vec<(&str, &MaterialSpec)> = Vec::new();
    for (name, spec) in [
        ("material", &cfg.material),
        ("medium", &cfg.medium),
        ("compare", &cfg.compare),
    ] {
        if let Some(s) = spec {
            specs.push((name, s));
        }
    }
    if let Some(s) = cfg.torque.as_ref().and_then(|t| t.plate_b.as_ref()) {
        specs.push(("torque.plate_b", s));
    }
    let mut files = Vec::new();
    for (name, spec) in specs {
        if let Some(p) = spec.data_file(&cfg.base_dir) {
            files.push((format!("{name}.data_path"), spec, p));
        }
        if let Some(p) = spec.stitch_file(&cfg.base_dir) {
            files.push((format!("{name}.stitch_path"), spec, p));
        }
    }
    files
}

/// An rms log residual above this marks a poor power-law tail.
pub const TAIL_RMS_WARNING: f64 = 0.5;

pub fn run_validate_data(cfg: &RunConfig) -> Result<Outcome> {
    let files = data_files(cfg);
    if files.is_empty() {
        return Err(CliError::Config(
            "no data_path or stitch_path in the configuration".into(),
        ));
    }
    let mats = cfg.matsubara().ok();
    let mut lines = vec!["# casimir: validate-data".to_string()];
    let mut warnings = Vec::new();
    let mut failed = false;

    for (key, spec, path) in files {
        lines.push(format!("file: {} ({key})", path.display()));
        let samples = match read_samples_path(&path) {
            Ok(s) => s,
            Err(e) => {
                lines.push(format!("  FAIL parse: {e}"));
                failed = true;
                continue;
            }
        };
        lines.push(format!("  rows: {}", samples.len()));
        let violations = OpticalDataTable::violations(&samples);
        if violations.is_empty() {
            lines.push("  ok ordering and passivity".into());
        }
        for v in &violations {
            lines.push(format!("  FAIL {v}"));
        }
        if !violations.is_empty() {
            failed = true;
            continue;
        }
        let table = OpticalDataTable::new(path.display().to_string(), samples)?;
        let (lo, hi) = (table.min_energy_ev(), table.max_energy_ev());
        lines.push(format!("  range: {} to {} eV", num(lo), num(hi)));
        if key.ends_with("data_path") {
            if let Some(join) = spec.join_energy_ev {
                if join < lo || join > hi {
                    lines.push(format!(
                        "  FAIL coverage: join energy {} eV lies outside the data range",
                        num(join)
                    ));
                    failed = true;
                } else {
                    lines.push(format!(
                        "  ok coverage: join energy {} eV inside the data range",
                        num(join)
                    ));
                }
            }
        }
        if let Some(m) = &mats {
            let (x1, xn) = (radps_to_ev(m.xi(1)), radps_to_ev(m.xi(m.n_max)));
            let inside = (1..=m.n_max)
                .filter(|&n| {
                    let e = radps_to_ev(m.xi(n));
                    e >= lo && e <= hi
                })
                .count();
            lines.push(format!(
                "  matsubara coverage: {inside} of {} frequencies ({} to {} eV) inside the data range",
                m.n_max,
                num(x1),
                num(xn)
            ));
        }
        if key.ends_with("stitch_path") {
            lines.push("  tail fit: not used, this file only replaces low-energy samples".into());
            continue;
        }
        let fit = fit_power_tail(&table);
        lines.push(format!("  tail fit: {}", tail_summary(&fit)));
        if fit.clamped || fit.rms_log_residual > TAIL_RMS_WARNING {
            let w = format!("{}: high-frequency tail fit is poor", path.display());
            lines.push(format!("  warning: {w}"));
            warnings.push(w);
        }
    }
    lines.push(format!("result: {}", if failed { "FAIL" } else { "PASS" }));
    let mut text = lines.join("\n");
    text.push('\n');
    Ok(Outcome {
        text,
        warnings,
        status: if failed {
            Status::ValidationFailed
        } else {
            Status::Ok
        },
    })
}
