//! Measured optical data: ingestion, validation and dataset stitching.

use std::fmt;
use std::io::Read;
use std::path::Path;

use crate::error::{Error, Result};

/// ε″ = 2nk for data files that supply (n, k).
pub fn eps2_from_nk(n: f64, k: f64) -> f64 {
    2.0 * n * k
}

/// One row of an optical data file.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpticalSample {
    pub energy_ev: f64,
    pub eps1: f64,
    pub eps2: f64,
}

/// A problem found in raw optical data.
#[derive(Debug, Clone, PartialEq)]
pub enum TableViolation {
    TooFewSamples(usize),
    NonFinite {
        row: usize,
    },
    NonPositiveEnergy {
        row: usize,
        energy_ev: f64,
    },
    NotAscending {
        row: usize,
        energy_ev: f64,
        previous_ev: f64,
    },
    NegativeAbsorption {
        row: usize,
        eps2: f64,
    },
}

impl fmt::Display for TableViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TableViolation::TooFewSamples(n) => write!(f, "need at least 2 samples, found {n}"),
            TableViolation::NonFinite { row } => write!(f, "row {row}: non-finite value"),
            TableViolation::NonPositiveEnergy { row, energy_ev } => {
                write!(f, "row {row}: photon energy {energy_ev} eV is not positive")
            }
            TableViolation::NotAscending {
                row,
                energy_ev,
                previous_ev,
            } => write!(
                f,
                "row {row}: energy {energy_ev} eV does not increase (previous {previous_ev} eV)"
            ),
            TableViolation::NegativeAbsorption { row, eps2 } => {
                write!(f, "row {row}: eps2 = {eps2} < 0 violates passivity")
            }
        }
    }
}

/// Tabulated (E, ε′, ε″) samples, strictly ascending in photon energy.
#[derive(Debug, Clone, PartialEq)]
pub struct OpticalDataTable {
    samples: Vec<OpticalSample>,
    label: String,
}

impl OpticalDataTable {
    pub fn new(label: impl Into<String>, samples: Vec<OpticalSample>) -> Result<Self> {
        if let Some(v) = Self::violations(&samples).into_iter().next() {
            return Err(Error::Invalid(v.to_string()));
        }
        Ok(OpticalDataTable {
            samples,
            label: label.into(),
        })
    }

    /// Samples ε″(E) of a real-axis model `eps(omega_radps) -> (ε′, ε″)`.
    pub fn from_model<F>(label: impl Into<String>, energies_ev: &[f64], eps: F) -> Result<Self>
    where
        F: Fn(f64) -> (f64, f64),
    {
        let samples = energies_ev
            .iter()
            .map(|&e| {
                let (eps1, eps2) = eps(crate::constants::ev_to_radps(e));
                OpticalSample {
                    energy_ev: e,
                    eps1,
                    eps2,
                }
            })
            .collect();
        Self::new(label, samples)
    }

    /// Every invariant violation in `samples`; rows are 1-based.
    pub fn violations(samples: &[OpticalSample]) -> Vec<TableViolation> {
        let mut out = Vec::new();
        if samples.len() < 2 {
            out.push(TableViolation::TooFewSamples(samples.len()));
        }
        for (i, s) in samples.iter().enumerate() {
            let row = i + 1;
            if !(s.energy_ev.is_finite() && s.eps1.is_finite() && s.eps2.is_finite()) {
                out.push(TableViolation::NonFinite { row });
                continue;
            }
            if s.energy_ev <= 0.0 {
                out.push(TableViolation::NonPositiveEnergy {
                    row,
                    energy_ev: s.energy_ev,
                });
            }
            if i > 0 && s.energy_ev <= samples[i - 1].energy_ev {
                out.push(TableViolation::NotAscending {
                    row,
                    energy_ev: s.energy_ev,
                    previous_ev: samples[i - 1].energy_ev,
                });
            }
            if s.eps2 < 0.0 {
                out.push(TableViolation::NegativeAbsorption { row, eps2: s.eps2 });
            }
        }
        out
    }

    pub fn samples(&self) -> &[OpticalSample] {
        &self.samples
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn min_energy_ev(&self) -> f64 {
        self.samples[0].energy_ev
    }

    pub fn max_energy_ev(&self) -> f64 {
        self.samples[self.samples.len() - 1].energy_ev
    }

    /// Reads a table, enforcing the invariants.
    pub fn from_csv_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let samples = read_samples_path(path)?;
        let label = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        Self::new(label, samples)
    }

    /// Replaces every sample below `cutoff_ev` with the samples of
    /// `replacement` that lie below the cutoff.
    pub fn stitch_below(&self, replacement: &OpticalDataTable, cutoff_ev: f64) -> Result<Self> {
        let mut samples: Vec<OpticalSample> = replacement
            .samples
            .iter()
            .filter(|s| s.energy_ev < cutoff_ev)
            .copied()
            .collect();
        samples.extend(
            self.samples
                .iter()
                .filter(|s| s.energy_ev >= cutoff_ev)
                .copied(),
        );
        Self::new(
            format!("{}<{}eV+{}", replacement.label, cutoff_ev, self.label),
            samples,
        )
    }
}

/// Reads raw rows from an optical data file without validating them.
pub fn read_samples_path(path: &Path) -> Result<Vec<OpticalSample>> {
    let file = std::fs::File::open(path)?;
    read_samples(file, &path.display().to_string())
}

#[derive(Clone, Copy)]
enum Columns {
    Epsilon,
    RefractiveIndex,
}

/// Parses CSV text with a header naming either `eps1, eps2` or `n, k` after
/// the energy column. Lines starting with `#` are ignored.
pub fn read_samples<R: Read>(reader: R, source: &str) -> Result<Vec<OpticalSample>> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(false)
        .from_reader(reader);

    let data_err = |line: u64, message: String| Error::Data {
        path: source.to_string(),
        line,
        message,
    };

    let headers = rdr
        .headers()
        .map_err(|e| data_err(csv_line(&e), e.to_string()))?
        .clone();
    let header_line = headers.position().map_or(1, |p| p.line());
    let tokens: Vec<String> = headers.iter().map(|h| h.to_ascii_lowercase()).collect();
    if tokens.len() != 3 {
        return Err(data_err(
            header_line,
            format!("expected 3 columns, found {}", tokens.len()),
        ));
    }
    if !tokens[0].starts_with("energy") {
        return Err(data_err(
            header_line,
            format!("first column must be energy_ev, found '{}'", tokens[0]),
        ));
    }
    let columns = match (tokens[1].as_str(), tokens[2].as_str()) {
        ("eps1", "eps2") => Columns::Epsilon,
        ("n", "k") => Columns::RefractiveIndex,
        (a, b) => {
            return Err(data_err(
                header_line,
                format!("unrecognised columns '{a}, {b}'; expected 'eps1, eps2' or 'n, k'"),
            ))
        }
    };

    let mut samples = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| data_err(csv_line(&e), e.to_string()))?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let mut vals = [0.0; 3];
        for (i, field) in record.iter().enumerate() {
            vals[i] = field
                .parse::<f64>()
                .map_err(|_| data_err(line, format!("cannot parse '{field}' as a number")))?;
        }
        let (eps1, eps2) = match columns {
            Columns::Epsilon => (vals[1], vals[2]),
            Columns::RefractiveIndex => (
                vals[1] * vals[1] - vals[2] * vals[2],
                eps2_from_nk(vals[1], vals[2]),
            ),
        };
        samples.push(OpticalSample {
            energy_ev: vals[0],
            eps1,
            eps2,
        });
    }
    Ok(samples)
}

fn csv_line(e: &csv::Error) -> u64 {
    e.position().map(|p| p.line()).unwrap_or(0)
}

/// Writes a table in the `energy_ev, eps1, eps2` format.
pub fn write_csv<W: std::io::Write>(table: &OpticalDataTable, mut out: W) -> std::io::Result<()> {
    writeln!(out, "# {}", table.label())?;
    writeln!(out, "energy_ev,eps1,eps2")?;
    for s in table.samples() {
        writeln!(out, "{:.9e},{:.9e},{:.9e}", s.energy_ev, s.eps1, s.eps2)?;
    }
    Ok(())
}
