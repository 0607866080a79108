//! Writes the synthetic Drude–Lorentz optical tables used by the sample
//! configurations: `cargo run -p casimir-core --example synthetic_data -- data`.

use std::fs::File;
use std::path::PathBuf;

use casimir_core::material::synthetic::{drude_lorentz_table, log_grid, Oscillator};
use casimir_core::material::write_csv;

const GOLD: [Oscillator; 1] = [Oscillator {
    strength: 1.5,
    center_ev: 3.5,
    width_ev: 2.0,
}];

const ALUMINIUM: [Oscillator; 1] = [Oscillator {
    strength: 0.3,
    center_ev: 1.5,
    width_ev: 0.5,
}];

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "data".into()));
    std::fs::create_dir_all(&dir)?;
    let sets = [
        ("au1.csv", 9.0, 0.035, &GOLD[..], 0.1, 200.0, 400),
        ("au2.csv", 8.45, 0.047, &GOLD[..], 0.04974, 4.133, 200),
        ("al.csv", 12.5, 0.063, &ALUMINIUM[..], 0.04, 200.0, 400),
    ];
    for (name, wp, g, osc, lo, hi, n) in sets {
        let table = drude_lorentz_table(
            name.trim_end_matches(".csv"),
            wp,
            g,
            osc,
            &log_grid(lo, hi, n)?,
        )?;
        write_csv(&table, File::create(dir.join(name))?)?;
        println!("wrote {}", dir.join(name).display());
    }
    Ok(())
}
