//! Result tables: gap statistics and CSV / JSON-lines output.

use std::io::Write;

use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::lower_bound::{integer_bound, BoundReport};

/// `(UB − ⌈LB⌉) / UB`, the convention of the summary column.
pub fn gap_ceiling(lb: f64, ub: u64) -> f64 {
    if ub == 0 {
        return 0.0;
    }
    (ub as f64 - integer_bound(lb) as f64) / ub as f64
}

/// `(UB − LB) / UB` with the fractional bound.
pub fn gap_raw(lb: f64, ub: u64) -> f64 {
    if ub == 0 {
        return 0.0;
    }
    (ub as f64 - lb) / ub as f64
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    JsonLines,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json-lines" | "jsonl" => Ok(Format::JsonLines),
            other => Err(Error::Contract(format!("unknown format {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(i64),
    /// Value and number of decimals in CSV.
    Float(f64, usize),
    Text(String),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v, d) => format!("{v:.*}", d),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => Value::from(*v),
            Cell::Float(v, _) => serde_json::Number::from_f64(*v).map_or(Value::Null, Value::Number),
            Cell::Text(s) => Value::from(s.as_str()),
            Cell::Empty => Value::Null,
        }
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_owned())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

/// Time cell, blank when timings are suppressed.
pub fn time_cell(seconds: f64, show: bool) -> Cell {
    if show {
        Cell::Float(seconds, 2)
    } else {
        Cell::Empty
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(headers: impl IntoIterator<Item = S>) -> Self {
        Table {
            headers: headers.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) -> Result<()> {
        if row.len() != self.headers.len() {
            return Err(Error::Dimension { expected: self.headers.len(), got: row.len() });
        }
        self.rows.push(row);
        Ok(())
    }

    /// Writes the table. CSV output may start with `# comment` lines.
    pub fn write<W: Write>(&self, out: W, format: Format, comments: &[String]) -> Result<()> {
        let mut w = RowWriter::new(out, format, &self.headers, comments)?;
        for row in &self.rows {
            w.write_row(row)?;
        }
        Ok(())
    }
}

enum Sink<W: Write> {
    Csv(csv::Writer<W>),
    Json(W),
}

/// Streams rows one at a time, flushing after each so that a run which fails
/// halfway still leaves the finished rows on disk.
pub struct RowWriter<W: Write> {
    sink: Sink<W>,
    headers: Vec<String>,
}

impl<W: Write> RowWriter<W> {
    pub fn new(mut out: W, format: Format, headers: &[String], comments: &[String]) -> Result<Self> {
        let sink = match format {
            Format::Csv => {
                for c in comments {
                    writeln!(out, "# {c}")?;
                }
                let mut w = csv::Writer::from_writer(out);
                w.write_record(headers)?;
                w.flush()?;
                Sink::Csv(w)
            }
            Format::JsonLines => Sink::Json(out),
        };
        Ok(RowWriter {
            sink,
            headers: headers.to_vec(),
        })
    }

    pub fn write_row(&mut self, row: &[Cell]) -> Result<()> {
        if row.len() != self.headers.len() {
            return Err(Error::Dimension { expected: self.headers.len(), got: row.len() });
        }
        match &mut self.sink {
            Sink::Csv(w) => {
                w.write_record(row.iter().map(Cell::csv))?;
                w.flush()?;
            }
            Sink::Json(out) => {
                let obj: Map<String, Value> = self.headers.iter().cloned().zip(row.iter().map(Cell::json)).collect();
                serde_json::to_writer(&mut *out, &Value::Object(obj))?;
                writeln!(out)?;
                out.flush()?;
            }
        }
        Ok(())
    }
}

/// Columns of the per-instance summary.
pub fn summary_headers(param: &str) -> Vec<String> {
    [
        "instance", "n", param, "seed", "edges", "LB init", "LB final", "lb_integer", "UB", "gap final", "gap raw",
        "time total", "time SDP", "time sep.", "time UB", "#cuts", "status",
    ]
    .into_iter()
    .map(String::from)
    .collect()
}

/// Instance description for a summary row.
#[derive(Clone, Debug, PartialEq)]
pub struct InstanceInfo {
    pub name: String,
    pub n: usize,
    pub param: Option<f64>,
    pub seed: Option<u64>,
    pub edges: usize,
}

pub fn summary_row(info: &InstanceInfo, lb: &BoundReport, ub: u64, time_ub: f64, timings: bool) -> Vec<Cell> {
    vec![
        Cell::from(info.name.as_str()),
        Cell::from(info.n),
        info.param.map_or(Cell::Empty, |p| Cell::Float(p, 2)),
        info.seed.map_or(Cell::Empty, Cell::from),
        Cell::from(info.edges),
        Cell::Float(lb.alpha_init, 4),
        Cell::Float(lb.alpha_final, 4),
        Cell::from(lb.lb_integer),
        Cell::from(ub),
        Cell::Float(gap_ceiling(lb.alpha_final, ub), 2),
        Cell::Float(gap_raw(lb.alpha_final, ub), 4),
        time_cell(lb.time_total, timings),
        time_cell(lb.time_sdp, timings),
        time_cell(lb.time_separation, timings),
        time_cell(time_ub, timings),
        Cell::from(lb.cut_count()),
        Cell::from(lb.last_status.name()),
    ]
}

/// Columns of a lower-bound-only summary.
pub fn bound_headers() -> Vec<String> {
    [
        "instance", "n", "edges", "LB init", "LB final", "lb_integer", "time total", "time SDP", "time sep.",
        "#cuts", "iterations", "status", "time limit hit", "bound decreased",
    ]
    .into_iter()
    .map(String::from)
    .collect()
}

pub fn bound_row(instance: &str, graph_edges: usize, lb: &BoundReport, timings: bool) -> Vec<Cell> {
    vec![
        Cell::from(instance),
        Cell::from(lb.n),
        Cell::from(graph_edges),
        Cell::Float(lb.alpha_init, 4),
        Cell::Float(lb.alpha_final, 4),
        Cell::from(lb.lb_integer),
        time_cell(lb.time_total, timings),
        time_cell(lb.time_sdp, timings),
        time_cell(lb.time_separation, timings),
        Cell::from(lb.cut_count()),
        Cell::from(lb.records.len().saturating_sub(1)),
        Cell::from(lb.last_status.name()),
        Cell::from(lb.time_limit_hit.to_string()),
        Cell::from(lb.bound_decreased.to_string()),
    ]
}

pub fn iteration_headers() -> Vec<String> {
    [
        "instance", "schedule", "iter", "families", "alpha", "bound", "separated", "added", "pruned", "pool",
        "status", "solver_iterations", "time SDP", "time sep.",
    ]
    .into_iter()
    .map(String::from)
    .collect()
}

pub fn iteration_rows(instance: &str, schedule: &str, lb: &BoundReport, timings: bool) -> Vec<Vec<Cell>> {
    lb.records
        .iter()
        .map(|r| {
            let families: Vec<&str> = r.families.iter().map(|k| k.name()).collect();
            vec![
                Cell::from(instance),
                Cell::from(schedule),
                Cell::from(r.iter),
                Cell::from(families.join(" ")),
                Cell::Float(r.alpha, 6),
                Cell::Float(r.bound, 6),
                Cell::from(r.separated),
                Cell::from(r.added),
                Cell::from(r.pruned),
                Cell::from(r.pool),
                Cell::from(r.status.name()),
                Cell::from(r.solver_iterations),
                time_cell(r.solve_seconds, timings),
                time_cell(r.separation_seconds, timings),
            ]
        })
        .collect()
}
