//! Record rendering shared by all subcommands.

use std::fmt::Write as _;

use clap::ValueEnum;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Table,
    JsonLines,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Text,
    Num,
}

/// Rows of pre-formatted fields. `-` in a numeric column means "absent".
#[derive(Debug, Clone)]
pub struct Records {
    columns: Vec<(&'static str, Kind)>,
    rows: Vec<Vec<String>>,
}

impl Records {
    pub fn new(columns: &[(&'static str, Kind)]) -> Self {
        Records {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.csv(),
            Format::Table => self.table(),
            Format::JsonLines => self.json_lines(),
        }
    }

    /// `key=value` pairs, one line per row.
    pub fn key_values(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            let pairs: Vec<String> = self
                .columns
                .iter()
                .zip(row)
                .map(|((k, _), v)| format!("{k}={v}"))
                .collect();
            out.push_str(&pairs.join(" "));
            out.push('\n');
        }
        out
    }

    fn csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(self.columns.iter().map(|c| c.0))
            .expect("in-memory write");
        for row in &self.rows {
            w.write_record(row).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
    }

    fn table(&self) -> String {
        let widths: Vec<usize> = self
            .columns
            .iter()
            .enumerate()
            .map(|(i, (name, _))| {
                self.rows
                    .iter()
                    .map(|r| r[i].len())
                    .chain([name.len()])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let line = |cells: Vec<&str>| {
            let mut s = String::new();
            for (i, cell) in cells.into_iter().enumerate() {
                if i > 0 {
                    s.push_str("  ");
                }
                let w = widths[i];
                match self.columns[i].1 {
                    Kind::Num => write!(s, "{cell:>w$}").unwrap(),
                    Kind::Text => write!(s, "{cell:<w$}").unwrap(),
                }
            }
            s.trim_end().to_string() + "\n"
        };
        let mut out = line(self.columns.iter().map(|c| c.0).collect());
        for row in &self.rows {
            out.push_str(&line(row.iter().map(String::as_str).collect()));
        }
        out
    }

    fn json_lines(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            let mut obj = Map::new();
            for ((name, kind), v) in self.columns.iter().zip(row) {
                let value = match kind {
                    Kind::Text => Value::String(v.clone()),
                    Kind::Num if v == "-" => Value::Null,
                    Kind::Num => serde_json::from_str::<serde_json::Number>(v)
                        .map(Value::Number)
                        .unwrap_or_else(|_| Value::String(v.clone())),
                };
                obj.insert((*name).to_string(), value);
            }
            out.push_str(&Value::Object(obj).to_string());
            out.push('\n');
        }
        out
    }
}

/// Six decimals with trailing zeros trimmed, keeping at least one decimal.
pub fn bits(x: f64) -> String {
    let s = chromacap::cost::fmt_fixed(x, 6);
    let s = s.trim_end_matches('0');
    if s.ends_with('.') {
        format!("{s}0")
    } else {
        s.to_string()
    }
}
