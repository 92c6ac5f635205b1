//! JSON and CSV rendering of command results.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use classicality::reproduce::{Check, Tolerance};
use classicality::{CurvePoint, IndicatorMinimum, IndicatorResult};
use serde::Serialize;

use crate::args::Format;

/// Twelve significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.11e}")
}

/// A type with a fixed CSV layout.
pub trait CsvRow {
    fn header() -> Vec<String>;
    fn row(&self) -> Vec<String>;
}

impl CsvRow for IndicatorResult {
    fn header() -> Vec<String> {
        ["value", "error", "method", "metric", "N", "zeta"]
            .map(String::from)
            .to_vec()
    }

    fn row(&self) -> Vec<String> {
        let zeta = match (self.averaged, self.zeta()) {
            (true, _) => "averaged".to_string(),
            (false, Some(z)) => num(z),
            (false, None) => String::new(),
        };
        vec![
            num(self.value),
            num(self.error),
            self.method.name().to_string(),
            self.metric.name().to_string(),
            self.n.to_string(),
            zeta,
        ]
    }
}

impl CsvRow for IndicatorMinimum {
    fn header() -> Vec<String> {
        ["metric", "zeta", "value", "evaluations", "method"]
            .map(String::from)
            .to_vec()
    }

    fn row(&self) -> Vec<String> {
        vec![
            self.metric.name().to_string(),
            num(self.zeta),
            num(self.value),
            self.evaluations.to_string(),
            self.method.name().to_string(),
        ]
    }
}

impl CsvRow for CurvePoint {
    fn header() -> Vec<String> {
        ["R", "Q_HS", "Q_Bures", "Q_BKM"].map(String::from).to_vec()
    }

    fn row(&self) -> Vec<String> {
        vec![
            num(self.radius),
            num(self.hs),
            num(self.bures),
            num(self.bkm),
        ]
    }
}

impl CsvRow for Check {
    fn header() -> Vec<String> {
        ["name", "target", "value", "error", "tolerance", "passed"]
            .map(String::from)
            .to_vec()
    }

    fn row(&self) -> Vec<String> {
        let tolerance = match self.tolerance {
            Tolerance::Relative { bound } => format!("rel {bound:e}"),
            Tolerance::Absolute { bound } => format!("abs {bound:e}"),
            Tolerance::Sigma { k } => format!("{k} sigma"),
        };
        vec![
            self.name.clone(),
            num(self.target),
            num(self.value),
            num(self.error),
            tolerance,
            self.passed.to_string(),
        ]
    }
}

/// Opens `out`, or stdout when `None`.
pub fn sink(out: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

pub fn write_csv_line(w: &mut dyn Write, fields: &[String]) -> io::Result<()> {
    let escaped: Vec<String> = fields
        .iter()
        .map(|f| {
            if f.contains([',', '"', '\n']) {
                format!("\"{}\"", f.replace('"', "\"\""))
            } else {
                f.clone()
            }
        })
        .collect();
    writeln!(w, "{}", escaped.join(","))
}

pub fn write_json<T: Serialize + ?Sized>(w: &mut dyn Write, value: &T) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *w, value)?;
    writeln!(w)
}

/// Writes `rows` as a CSV table, or as JSON: a bare object when `single`,
/// an array otherwise.
pub fn emit<T: Serialize + CsvRow>(
    rows: &[T],
    single: bool,
    format: Format,
    out: Option<&Path>,
) -> io::Result<()> {
    let mut w = sink(out)?;
    match format {
        Format::Csv => {
            write_csv_line(&mut *w, &T::header())?;
            for r in rows {
                write_csv_line(&mut *w, &r.row())?;
            }
        }
        Format::Json if single && rows.len() == 1 => write_json(&mut *w, &rows[0])?,
        Format::Json => write_json(&mut *w, rows)?,
    }
    w.flush()
}
