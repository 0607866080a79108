//! `casimir` command-line front end: TOML configuration, sweeps and CSV
//! output over the `casimir-core` engine.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

pub use commands::{run, Command, Outcome, Status};
pub use config::RunConfig;
pub use error::{CliError, Result};

/// Command-line overrides of the `[physics]` section.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub zero_mode: Option<String>,
    pub n_max: Option<usize>,
    pub temperature_k: Option<f64>,
}

impl Overrides {
    pub fn apply(&self, cfg: &mut RunConfig) -> Result<()> {
        if let Some(z) = &self.zero_mode {
            config::parse_zero_mode(z)?;
            cfg.physics.zero_mode = z.clone();
        }
        if let Some(n) = self.n_max {
            cfg.physics.n_max = n;
        }
        if let Some(t) = self.temperature_k {
            cfg.physics.temperature_k = t;
        }
        Ok(())
    }
}
