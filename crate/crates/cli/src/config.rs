//! TOML run configuration and its resolution into engine inputs.

use std::f64::consts::FRAC_PI_2;
use std::path::{Path, PathBuf};

use casimir_core::constants::ev_to_radps;
use casimir_core::lifshitz::{MatsubaraConfig, QuadratureConfig};
use casimir_core::material::{
    fit_power_tail, DrudeTail, OpticalDataTable, PermeabilityModel, PermittivityModel, TailFit,
    ZeroMode,
};
use casimir_core::stack::Layer;
use casimir_core::torque::DEFAULT_PLATE_THICKNESS;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub physics: Physics,
    pub material: Option<MaterialSpec>,
    /// Gap medium; vacuum when absent.
    pub medium: Option<MaterialSpec>,
    /// Second material for a ratio column.
    pub compare: Option<MaterialSpec>,
    pub stack: Option<StackSection>,
    pub eps_table: Option<EpsTableSection>,
    pub torque: Option<TorqueSection>,
    pub convergence: Option<ConvergenceSection>,
    /// Directory that relative data paths are resolved against.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Physics {
    #[serde(default = "default_temperature")]
    pub temperature_k: f64,
    #[serde(default = "default_n_max")]
    pub n_max: usize,
    /// drude | plasma | model
    #[serde(default = "default_zero_mode")]
    pub zero_mode: String,
    #[serde(default = "default_rel_tol")]
    pub rel_tol: f64,
    #[serde(default = "default_max_panels")]
    pub max_panels: usize,
}

fn default_temperature() -> f64 {
    300.0
}
fn default_n_max() -> usize {
    500
}
fn default_zero_mode() -> String {
    "drude".into()
}
fn default_rel_tol() -> f64 {
    QuadratureConfig::sweep().rel_tol
}
fn default_max_panels() -> usize {
    QuadratureConfig::sweep().max_panels
}

impl Default for Physics {
    fn default() -> Self {
        Physics {
            temperature_k: default_temperature(),
            n_max: default_n_max(),
            zero_mode: default_zero_mode(),
            rel_tol: default_rel_tol(),
            max_panels: default_max_panels(),
        }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialSpec {
    pub label: Option<String>,
    /// vacuum | constant | drude | plasma | tabulated
    pub model: String,
    pub epsilon: Option<f64>,
    pub mu: Option<f64>,
    pub omega_p_ev: Option<f64>,
    pub gamma_ev: Option<f64>,
    /// CSV with `energy_ev, eps1, eps2` or `energy_ev, n, k`.
    pub data_path: Option<String>,
    /// Drude extrapolation takes over below this energy; defaults to the
    /// lowest tabulated energy.
    pub join_energy_ev: Option<f64>,
    /// Second data file replacing the primary one below `stitch_below_ev`.
    pub stitch_path: Option<String>,
    pub stitch_below_ev: Option<f64>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StackSection {
    /// reduced (two half-spaces across d₄) | general (five layers)
    #[serde(default = "default_layout")]
    pub layout: String,
    pub d2_m: Option<f64>,
    pub d3_m: Option<f64>,
    /// Explicit separation grid; otherwise built from the range keys.
    pub d4_m: Option<Vec<f64>>,
    pub d4_min_m: Option<f64>,
    pub d4_max_m: Option<f64>,
    pub points: Option<usize>,
    /// log | linear
    pub spacing: Option<String>,
    /// Plate width L, used only for the edge-negligibility warning.
    pub width_m: Option<f64>,
    /// Emit Drude and plasma zero-mode columns side by side.
    #[serde(default)]
    pub both_treatments: bool,
}

fn default_layout() -> String {
    "reduced".into()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EpsTableSection {
    /// matsubara (n = 1..n_max at the configured temperature) | log | list
    #[serde(default = "default_grid")]
    pub grid: String,
    pub xi_ev: Option<Vec<f64>>,
    pub xi_min_ev: Option<f64>,
    pub xi_max_ev: Option<f64>,
    pub points: Option<usize>,
}

fn default_grid() -> String {
    "matsubara".into()
}

impl Default for EpsTableSection {
    fn default() -> Self {
        EpsTableSection {
            grid: default_grid(),
            xi_ev: None,
            xi_min_ev: None,
            xi_max_ev: None,
            points: None,
        }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TorqueSection {
    pub long_side_m: f64,
    pub width_m: f64,
    pub cross_side_m: f64,
    pub gap_m: f64,
    pub plate_thickness_m: Option<f64>,
    pub thetas_rad: Option<Vec<f64>>,
    pub theta_points: Option<usize>,
    #[serde(default)]
    pub high_temperature_edge: bool,
    /// Second plate; the primary material when absent.
    pub plate_b: Option<MaterialSpec>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvergenceSection {
    pub checkpoints: Vec<usize>,
    /// Largest acceptable relative change between the last two checkpoints.
    pub tolerance: Option<f64>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
            path: path.display().to_string(),
            source,
        })?;
        let mut cfg: RunConfig = toml::from_str(&text).map_err(|source| CliError::Parse {
            path: path.display().to_string(),
            source,
        })?;
        cfg.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(cfg)
    }

    /// The configuration as TOML, for embedding in output headers.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).unwrap_or_default()
    }

    pub fn zero_mode(&self) -> Result<ZeroMode> {
        parse_zero_mode(&self.physics.zero_mode)
    }

    pub fn matsubara(&self) -> Result<MatsubaraConfig> {
        Ok(MatsubaraConfig::new(
            self.physics.temperature_k,
            self.physics.n_max,
            self.zero_mode()?,
        )?)
    }

    pub fn quadrature(&self) -> Result<QuadratureConfig> {
        Ok(QuadratureConfig::new(
            self.physics.rel_tol,
            self.physics.max_panels,
        )?)
    }

    pub fn material(&self) -> Result<Resolved> {
        self.material
            .as_ref()
            .ok_or_else(|| CliError::Config("missing [material] section".into()))?
            .resolve(&self.base_dir, "material")
    }

    pub fn medium(&self) -> Result<Resolved> {
        match &self.medium {
            Some(m) => m.resolve(&self.base_dir, "medium"),
            None => Ok(Resolved {
                layer: Layer::vacuum(),
                label: "vacuum".into(),
                tail: None,
            }),
        }
    }

    pub fn compare(&self) -> Result<Option<Resolved>> {
        self.compare
            .as_ref()
            .map(|m| m.resolve(&self.base_dir, "compare"))
            .transpose()
    }

    pub fn stack(&self) -> Result<&StackSection> {
        self.stack
            .as_ref()
            .ok_or_else(|| CliError::Config("missing [stack] section".into()))
    }

    pub fn torque(&self) -> Result<&TorqueSection> {
        self.torque
            .as_ref()
            .ok_or_else(|| CliError::Config("missing [torque] section".into()))
    }
}

pub fn parse_zero_mode(s: &str) -> Result<ZeroMode> {
    match s {
        "drude" => Ok(ZeroMode::DrudeLike),
        "plasma" => Ok(ZeroMode::PlasmaLike(None)),
        "model" => Ok(ZeroMode::FromModel),
        other => Err(CliError::Config(format!(
            "zero_mode must be drude, plasma or model, got '{other}'"
        ))),
    }
}

/// A material ready for the engine.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub layer: Layer,
    pub label: String,
    /// High-frequency tail fit, for tabulated data.
    pub tail: Option<TailFit>,
}

fn need(v: Option<f64>, key: &str, section: &str) -> Result<f64> {
    v.ok_or_else(|| CliError::Config(format!("[{section}] needs {key}")))
}

impl MaterialSpec {
    pub fn data_file(&self, base: &Path) -> Option<PathBuf> {
        self.data_path.as_ref().map(|p| base.join(p))
    }

    pub fn stitch_file(&self, base: &Path) -> Option<PathBuf> {
        self.stitch_path.as_ref().map(|p| base.join(p))
    }

    pub fn resolve(&self, base: &Path, section: &str) -> Result<Resolved> {
        let mu = match self.mu {
            Some(m) => PermeabilityModel::constant(m)?,
            None => PermeabilityModel::Unity,
        };
        let mut tail = None;
        let eps = match self.model.as_str() {
            "vacuum" => PermittivityModel::Vacuum,
            "constant" => PermittivityModel::constant(need(self.epsilon, "epsilon", section)?)?,
            "drude" => PermittivityModel::drude(
                ev_to_radps(need(self.omega_p_ev, "omega_p_ev", section)?),
                ev_to_radps(need(self.gamma_ev, "gamma_ev", section)?),
            )?,
            "plasma" => PermittivityModel::plasma(ev_to_radps(need(self.omega_p_ev, "omega_p_ev", section)?))?,
            "tabulated" => {
                let path = self
                    .data_file(base)
                    .ok_or_else(|| CliError::Config(format!("[{section}] needs data_path")))?;
                let mut table = OpticalDataTable::from_csv_path(&path)?;
                if let Some(low) = self.stitch_file(base) {
                    let cutoff = need(self.stitch_below_ev, "stitch_below_ev", section)?;
                    table = table.stitch_below(&OpticalDataTable::from_csv_path(&low)?, cutoff)?;
                }
                let join = self.join_energy_ev.unwrap_or(table.min_energy_ev());
                let low = DrudeTail::new(
                    ev_to_radps(need(self.omega_p_ev, "omega_p_ev", section)?),
                    ev_to_radps(need(self.gamma_ev, "gamma_ev", section)?),
                    join,
                )?;
                let fit = fit_power_tail(&table);
                tail = Some(fit);
                PermittivityModel::tabulated(table, low, fit.tail)?
            }
            other => {
                return Err(CliError::Config(format!(
                    "[{section}] model must be vacuum, constant, drude, plasma or tabulated, got '{other}'"
                )))
            }
        };
        Ok(Resolved {
            layer: Layer::new(eps, mu),
            label: self.label.clone().unwrap_or_else(|| self.model.clone()),
            tail,
        })
    }
}

impl StackSection {
    pub fn separations(&self) -> Result<Vec<f64>> {
        let grid = match &self.d4_m {
            Some(list) => list.clone(),
            None => {
                let lo = need(self.d4_min_m, "d4_m or d4_min_m", "stack")?;
                let hi = need(self.d4_max_m, "d4_max_m", "stack")?;
                let n = self
                    .points
                    .ok_or_else(|| CliError::Config("[stack] needs points".into()))?;
                grid(lo, hi, n, self.spacing.as_deref().unwrap_or("log"))?
            }
        };
        if grid.is_empty() {
            return Err(CliError::Config("separation grid is empty".into()));
        }
        if grid.iter().any(|d| !(*d > 0.0 && d.is_finite())) {
            return Err(CliError::Config("separations must be positive".into()));
        }
        if grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(CliError::Config(
                "separations must be strictly ascending".into(),
            ));
        }
        Ok(grid)
    }

    pub fn is_general(&self) -> Result<bool> {
        match self.layout.as_str() {
            "reduced" => Ok(false),
            "general" => Ok(true),
            other => Err(CliError::Config(format!(
                "[stack] layout must be reduced or general, got '{other}'"
            ))),
        }
    }

    /// d₂ and d₃ of the general layout.
    pub fn outer(&self) -> Result<(f64, f64)> {
        Ok((
            need(self.d2_m, "d2_m", "stack")?,
            need(self.d3_m, "d3_m", "stack")?,
        ))
    }
}

/// `n` points from `lo` to `hi` inclusive.
pub fn grid(lo: f64, hi: f64, n: usize, spacing: &str) -> Result<Vec<f64>> {
    if n == 0 || !(lo > 0.0 && hi >= lo) {
        return Err(CliError::Config(format!(
            "bad grid {lo}..{hi} with {n} points"
        )));
    }
    if n == 1 {
        return Ok(vec![lo]);
    }
    let step = |i: usize| i as f64 / (n - 1) as f64;
    let mut pts: Vec<f64> = match spacing {
        "log" => (0..n).map(|i| lo * (hi / lo).powf(step(i))).collect(),
        "linear" => (0..n).map(|i| lo + (hi - lo) * step(i)).collect(),
        other => {
            return Err(CliError::Config(format!(
                "spacing must be log or linear, got '{other}'"
            )))
        }
    };
    pts[n - 1] = hi;
    Ok(pts)
}

impl TorqueSection {
    pub fn plate_thickness(&self) -> f64 {
        self.plate_thickness_m.unwrap_or(DEFAULT_PLATE_THICKNESS)
    }

    /// θ grid over (0, π/2]; uniform with `theta_points` (default 90) unless
    /// listed explicitly.
    pub fn thetas(&self) -> Result<Vec<f64>> {
        let thetas = match &self.thetas_rad {
            Some(t) => t.clone(),
            None => {
                let n = self.theta_points.unwrap_or(90);
                if n == 0 {
                    return Err(CliError::Config("theta_points must be positive".into()));
                }
                (1..=n).map(|i| FRAC_PI_2 * i as f64 / n as f64).collect()
            }
        };
        if thetas.iter().any(|t| !(*t > 0.0 && *t <= FRAC_PI_2)) {
            return Err(CliError::Config(
                "theta values must lie in (0, pi/2]".into(),
            ));
        }
        Ok(thetas)
    }
}
