//! Plain tables rendered as CSV or markdown.

use std::fmt::Write as _;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const DEFAULT_PRECISION: usize = 3;
pub const MAX_PRECISION: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Markdown,
}

/// Output format plus the number of decimals for numeric cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rendering {
    pub format: Format,
    pub precision: usize,
}

impl Rendering {
    pub fn new(format: Format, precision: usize) -> Result<Self, CliError> {
        if precision > MAX_PRECISION {
            return Err(CliError::Validation(format!(
                "precision must be at most {MAX_PRECISION}, got {precision}"
            )));
        }
        Ok(Self { format, precision })
    }
}

impl Default for Rendering {
    fn default() -> Self {
        Self {
            format: Format::Markdown,
            precision: DEFAULT_PRECISION,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    Empty,
}

impl Cell {
    fn render(&self, precision: usize) -> String {
        match self {
            Cell::Num(v) => format!("{v:.precision$}"),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(headers: impl IntoIterator<Item = S>) -> Self {
        Self {
            headers: headers.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self, precision: usize) -> String {
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        writer.write_record(&self.headers).expect("write to Vec");
        for row in &self.rows {
            writer
                .write_record(row.iter().map(|c| c.render(precision)))
                .expect("write to Vec");
        }
        String::from_utf8(writer.into_inner().expect("flush Vec")).expect("utf-8 input")
    }

    pub fn to_markdown(&self, precision: usize) -> String {
        let cells: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|c| c.render(precision)).collect())
            .collect();
        let widths: Vec<usize> = (0..self.headers.len())
            .map(|i| {
                cells
                    .iter()
                    .map(|r| r[i].len())
                    .chain(std::iter::once(self.headers[i].len()))
                    .max()
                    .unwrap_or(0)
                    .max(3)
            })
            .collect();

        let mut out = String::new();
        let line = |out: &mut String, items: &[String]| {
            out.push('|');
            for (item, w) in items.iter().zip(&widths) {
                let _ = write!(out, " {item:>w$} |");
            }
            out.push('\n');
        };
        line(&mut out, &self.headers);
        out.push('|');
        for w in &widths {
            let _ = write!(out, " {}: |", "-".repeat(w - 1));
        }
        out.push('\n');
        for row in &cells {
            line(&mut out, row);
        }
        out
    }

    /// CSV or markdown; JSON output is produced by each command from its
    /// own serializable record.
    pub fn render(&self, rendering: Rendering) -> String {
        match rendering.format {
            Format::Csv => self.to_csv(rendering.precision),
            Format::Markdown | Format::Json => self.to_markdown(rendering.precision),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Table {
        let mut t = Table::new(["name", "value", "n"]);
        t.push(vec!["a".into(), 1.23456.into(), 3usize.into()]);
        t.push(vec!["b,c".into(), Cell::Empty, 10usize.into()]);
        t
    }

    #[test]
    fn csv_quotes_and_rounds() {
        assert_eq!(sample().to_csv(2), "name,value,n\na,1.23,3\n\"b,c\",,10\n");
    }

    #[test]
    fn markdown_aligns_columns() {
        let md = sample().to_markdown(3);
        let lines: Vec<&str> = md.lines().collect();
        assert_eq!(lines[0], "| name | value |   n |");
        assert_eq!(lines[1], "| ---: | ----: | --: |");
        assert_eq!(lines[2], "|    a | 1.235 |   3 |");
        assert_eq!(lines[3], "|  b,c |       |  10 |");
    }

    #[test]
    fn precision_is_bounded() {
        assert!(Rendering::new(Format::Csv, 12).is_ok());
        assert!(Rendering::new(Format::Csv, 13).is_err());
    }
}
