//! CSV emission with a `#` metadata header.

use std::fmt::Write as _;

/// Nine significant digits in scientific notation.
pub fn num(v: f64) -> String {
    format!("{v:.8e}")
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    meta: Vec<String>,
    columns: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            ..Default::default()
        }
    }

    /// Adds a `# key: value` line.
    pub fn meta(&mut self, key: &str, value: impl std::fmt::Display) {
        self.meta.push(format!("{key}: {value}"));
    }

    /// Embeds a multi-line block (such as the config) under a heading.
    pub fn meta_block(&mut self, heading: &str, text: &str) {
        self.meta.push(format!("{heading}:"));
        self.meta.extend(text.lines().map(|l| format!("  {l}")));
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for m in &self.meta {
            let _ = writeln!(out, "# {m}");
        }
        let _ = writeln!(out, "{}", self.columns.join(","));
        for r in &self.rows {
            let _ = writeln!(out, "{}", r.join(","));
        }
        out
    }
}
