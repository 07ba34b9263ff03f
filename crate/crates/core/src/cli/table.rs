//! CSV output with a `#`-prefixed metadata header.

use std::fmt::Write as _;

use crate::cli::config::{header_marker, FrequencyUnit, RunConfig};
use crate::oracle::RNG_ALGORITHM;

pub const CONVENTIONS: [(&str, &str); 3] = [
    ("convention.zeta_norm", "zeta / zeta_sql with zeta_sql = 1/sqrt(beta)"),
    (
        "convention.power",
        "normalized power is G^2 / G_ref^2 with G_ref = coupling",
    ),
    ("convention.psd", "single-sided S_FF(nu); thermal <F_in^2> excluded"),
];

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// Extra `# key = value` lines written after the configuration.
    pub notes: Vec<(String, String)>,
}

impl Table {
    pub fn new(columns: Vec<String>) -> Self {
        Self {
            columns,
            ..Self::default()
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Header, column names, then rows. Floats use the shortest round-trip exponent form.
    pub fn render(&self, cfg: &RunConfig) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# {}", header_marker());
        for (k, v) in cfg.to_pairs() {
            let _ = writeln!(out, "# {k} = {v}");
        }
        let frequency = match cfg.frequency_unit {
            FrequencyUnit::Rad => {
                "frequencies and rates in rad/s; values quoted in Hz by the figure presets are used as rad/s"
            }
            FrequencyUnit::Hz => "frequencies and rates read and written in Hz, computed at 2 pi times the value",
        };
        let _ = writeln!(out, "# convention.frequency = {frequency}");
        for (k, v) in CONVENTIONS {
            let _ = writeln!(out, "# {k} = {v}");
        }
        let _ = writeln!(out, "# rng = {RNG_ALGORITHM}");
        for (k, v) in &self.notes {
            let _ = writeln!(out, "# {k} = {v}");
        }
        let _ = writeln!(out, "{}", self.columns.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Cell::Num(v) => format!("{v:e}"),
                    Cell::Text(s) => s.clone(),
                })
                .collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }
}
