//! Run settings shared by the subcommands, and tabular output.

use std::path::PathBuf;

use ncx_core::calculus::EtaLadder;
use ncx_core::problems::SensitivityConfig;
use ncx_core::Interval;

use crate::error::{usage, CliError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum OutputFormat {
    #[default]
    Csv,
    Text,
}

pub const DEFAULT_X_GRID: usize = 4001;
pub const DEFAULT_XI_GRID: usize = 2001;
pub const DEFAULT_RANGE_GRID: usize = 41;
pub const DEFAULT_ETA_DEPTH: u32 = 20;
pub const DEFAULT_XI_WINDOW: (f64, f64) = (-50.0, 50.0);

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Sample grid of the command; `None` selects the command default.
    pub grid: Option<usize>,
    pub xi_grid: usize,
    pub xi_window: Interval,
    pub eta_depth: u32,
    pub format: OutputFormat,
    pub plot: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            grid: None,
            xi_grid: DEFAULT_XI_GRID,
            xi_window: Interval::closed(DEFAULT_XI_WINDOW.0, DEFAULT_XI_WINDOW.1),
            eta_depth: DEFAULT_ETA_DEPTH,
            format: OutputFormat::Csv,
            plot: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if matches!(self.grid, Some(n) if n < 2) {
            return Err(usage("--grid needs at least 2 points"));
        }
        if self.eta_depth == 0 {
            return Err(usage("--eta-depth must be positive"));
        }
        let w = self.xi_window;
        if !(w.lo.is_finite() && w.hi.is_finite() && w.lo < w.hi) {
            return Err(usage("--xi-window must be a bounded interval a,b with a < b"));
        }
        Ok(())
    }

    pub fn grid_or(&self, default: usize) -> usize {
        self.grid.unwrap_or(default)
    }

    pub fn ladder(&self) -> EtaLadder {
        EtaLadder::powers_of_two(self.eta_depth)
    }

    pub fn sensitivity(&self) -> SensitivityConfig {
        SensitivityConfig { ladder: self.ladder(), xi_grid: self.grid_or(DEFAULT_XI_GRID), ..SensitivityConfig::default() }
    }
}

/// Header plus rows of already formatted cells.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table { header: header.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => {
                let mut out = self.header.join(",") + "\n";
                for r in &self.rows {
                    out += &r.join(",");
                    out.push('\n');
                }
                out
            }
            OutputFormat::Text => {
                let widths: Vec<usize> = (0..self.header.len())
                    .map(|i| self.rows.iter().filter_map(|r| r.get(i)).map(|c| c.len()).chain([self.header[i].len()]).max().unwrap_or(0))
                    .collect();
                let line = |cells: &[String]| {
                    let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
                    padded.join("  ").trim_end().to_string() + "\n"
                };
                let mut out = line(&self.header);
                for r in &self.rows {
                    out += &line(r);
                }
                out
            }
        }
    }
}
