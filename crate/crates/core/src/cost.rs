//! Cost-effectiveness of moving from a palette `P1` of `N1` colors to a
//! larger palette `P2` of `N2` colors.
//!
//! * density contribution `ΔD_c = log2 N2 / log2 N1 − 1`
//! * accuracy requirement `A_r = 1 − min_diff / 765`
//! * accuracy cost `ΔA_r = max(0, A_r(P2) − A_r(P1))`, or a supplied value
//! * cost-effectiveness `CE = (ΔD_c − ΔA_r) / (1 + ΔA_r)`; positive is a gain

use std::collections::HashMap;

use serde::Serialize;

use crate::capacity::{entropy_gain, EntropyMode};
use crate::color::{leading_integer, min_pairwise_diff, Palette, MAX_COLOR_DIFF};
use crate::{builtin_palette, Error, Result};

pub fn accuracy_from_min_diff(min_diff: u16) -> f64 {
    1.0 - f64::from(min_diff) / f64::from(MAX_COLOR_DIFF)
}

/// Accuracy requirement of an explicit palette, in `[0, 764/765]`.
pub fn accuracy_requirement(p: &Palette) -> Result<f64> {
    min_pairwise_diff(p).map(accuracy_from_min_diff)
}

pub fn delta_density(n2: usize, n1: usize) -> Result<f64> {
    if n1 < 2 {
        return Err(Error::domain(format!(
            "density contribution needs n1 >= 2, got {n1}"
        )));
    }
    if n2 <= n1 {
        return Err(Error::domain(format!(
            "density contribution needs n2 > n1, got {n2} <= {n1}"
        )));
    }
    Ok((n2 as f64).log2() / (n1 as f64).log2() - 1.0)
}

/// Accuracy cost of `p2` relative to `p1`, clamped at zero: a better
/// separated larger palette costs nothing.
pub fn delta_accuracy(p2: &Palette, p1: &Palette) -> Result<f64> {
    Ok((accuracy_requirement(p2)? - accuracy_requirement(p1)?).max(0.0))
}

pub fn cost_effectiveness(delta_density: f64, delta_accuracy: f64) -> Result<f64> {
    if delta_accuracy.is_nan() || delta_accuracy < 0.0 {
        return Err(Error::domain(format!(
            "accuracy cost must be >= 0, got {delta_accuracy}"
        )));
    }
    Ok((delta_density - delta_accuracy) / (1.0 + delta_accuracy))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AccuracySource {
    Computed,
    Supplied,
}

impl AccuracySource {
    pub fn as_str(self) -> &'static str {
        match self {
            AccuracySource::Computed => "computed",
            AccuracySource::Supplied => "supplied",
        }
    }
}

/// One `P2` versus `P1` comparison. Values are unrounded.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub p2_name: String,
    pub p1_name: String,
    pub n2: usize,
    pub n1: usize,
    pub delta_density: f64,
    pub delta_accuracy: f64,
    pub ce: f64,
    /// Entropy gain in paper mode.
    pub entropy_gain_paper: f64,
    pub delta_accuracy_source: AccuracySource,
}

/// Compares a larger palette `p2` against `p1`.
///
/// The accuracy cost is computed from the palettes' colors unless
/// `supplied_da` is given; it must be given when either palette is
/// sized-only.
pub fn compare(p2: &Palette, p1: &Palette, supplied_da: Option<f64>) -> Result<ComparisonRow> {
    let (n2, n1) = (p2.n_colors, p1.n_colors);
    let dd = delta_density(n2, n1)?;
    let (da, source) = match supplied_da {
        Some(da) => (da, AccuracySource::Supplied),
        None if p2.is_sized_only() || p1.is_sized_only() => {
            return Err(Error::MissingAccuracy {
                p2: p2.name.clone(),
                p1: p1.name.clone(),
            })
        }
        None => (delta_accuracy(p2, p1)?, AccuracySource::Computed),
    };
    Ok(ComparisonRow {
        p2_name: p2.name.clone(),
        p1_name: p1.name.clone(),
        n2,
        n1,
        delta_density: dd,
        delta_accuracy: da,
        ce: cost_effectiveness(dd, da)?,
        entropy_gain_paper: entropy_gain(n2, n1, EntropyMode::Paper)?,
        delta_accuracy_source: source,
    })
}

/// Outcome of [`comparison_matrix`]: the rows that could be computed, plus
/// the pairs that were skipped or failed.
#[derive(Debug, Clone, Default)]
pub struct ComparisonMatrix {
    pub rows: Vec<ComparisonRow>,
    /// `(name, name, reason)` for pairs of equal size.
    pub skipped: Vec<(String, String, String)>,
    /// `(p2, p1, error)` for pairs whose comparison failed.
    pub errors: Vec<(String, String, Error)>,
}

/// Compares every pair of palettes, larger against smaller.
///
/// `supplied_da` is keyed by `(p2_name, p1_name)`. Rows are sorted by
/// `(n1, n2, p2_name)`; failures are collected instead of aborting.
pub fn comparison_matrix(
    palettes: &[Palette],
    supplied_da: &HashMap<(String, String), f64>,
) -> Result<ComparisonMatrix> {
    if palettes.len() < 2 {
        return Err(Error::domain(
            "a comparison matrix needs at least two palettes",
        ));
    }
    let mut out = ComparisonMatrix::default();
    for (i, a) in palettes.iter().enumerate() {
        for b in &palettes[i + 1..] {
            let (p2, p1) = match a.n_colors.cmp(&b.n_colors) {
                std::cmp::Ordering::Greater => (a, b),
                std::cmp::Ordering::Less => (b, a),
                std::cmp::Ordering::Equal => {
                    out.skipped.push((
                        a.name.clone(),
                        b.name.clone(),
                        format!("equal sizes ({})", a.n_colors),
                    ));
                    continue;
                }
            };
            let da = supplied_da
                .get(&(p2.name.clone(), p1.name.clone()))
                .copied();
            match compare(p2, p1, da) {
                Ok(row) => out.rows.push(row),
                Err(e) => out.errors.push((p2.name.clone(), p1.name.clone(), e)),
            }
        }
    }
    out.rows
        .sort_by(|x, y| (x.n1, x.n2, &x.p2_name).cmp(&(y.n1, y.n2, &y.p2_name)));
    Ok(out)
}

/// One published row of the HCCB comparison table, as printed (3 decimals).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Table1Entry {
    pub p2: &'static str,
    pub p1: &'static str,
    pub delta_density: f64,
    pub delta_accuracy: f64,
    pub ce: f64,
}

const fn entry(p2: &'static str, p1: &'static str, dd: f64, da: f64, ce: f64) -> Table1Entry {
    Table1Entry {
        p2,
        p1,
        delta_density: dd,
        delta_accuracy: da,
        ce,
    }
}

/// The published comparison table, HCCB4 column first, then HCCB8.
///
/// The accuracy costs depend on palettes whose colors were never published,
/// so reproduction takes them as supplied inputs.
pub const TABLE1: [Table1Entry; 24] = [
    entry("HCCB4", "3c", 0.465, 1.000, -0.268),
    entry("HCCB4", "4e", 0.161, 1.000, -0.420),
    entry("6s", "HCCB4", 0.113, 0.000, 0.113),
    entry("7a", "HCCB4", 0.209, 0.000, 0.209),
    entry("8b", "HCCB4", 0.292, 0.000, 0.292),
    entry("9d", "HCCB4", 0.365, 0.000, 0.365),
    entry("10c", "HCCB4", 0.431, 0.178, 0.214),
    entry("11c", "HCCB4", 0.490, 0.188, 0.254),
    entry("12d", "HCCB4", 0.544, 0.294, 0.193),
    entry("13c", "HCCB4", 0.594, 0.002, 0.591),
    entry("14c", "HCCB4", 0.640, 0.002, 0.637),
    entry("15c", "HCCB4", 0.683, 0.212, 0.389),
    entry("HCCB8", "3c", 0.893, 1.000, -0.054),
    entry("HCCB8", "4e", 0.500, 1.000, -0.250),
    entry("HCCB8", "5d", 0.292, 0.332, -0.030),
    entry("HCCB8", "6s", 0.161, 0.000, 0.161),
    entry("HCCB8", "7a", 0.069, 0.000, 0.069),
    entry("9d", "HCCB8", 0.057, 0.000, 0.057),
    entry("10c", "HCCB8", 0.107, 0.178, -0.060),
    entry("11c", "HCCB8", 0.153, 0.188, -0.030),
    entry("12d", "HCCB8", 0.195, 0.294, -0.077),
    entry("13c", "HCCB8", 0.233, 0.002, 0.231),
    entry("14c", "HCCB8", 0.269, 0.002, 0.267),
    entry("15c", "HCCB8", 0.302, 0.212, 0.075),
];

/// Size of a table label: HCCB4 → 5, HCCB8 → 8, developed labels → their
/// leading integer.
pub fn table_label_size(label: &str) -> Option<usize> {
    match builtin_palette(label) {
        Ok(p) => Some(p.n_colors),
        Err(_) => leading_integer(label),
    }
}

/// Recomputes the 24 table rows from palette sizes, with the published
/// accuracy costs supplied.
pub fn reproduce_table1() -> Vec<ComparisonRow> {
    TABLE1
        .iter()
        .map(|e| {
            let p2 = builtin_palette(e.p2).expect("table labels are registered");
            let p1 = builtin_palette(e.p1).expect("table labels are registered");
            compare(&p2, &p1, Some(e.delta_accuracy)).expect("table rows are well-formed")
        })
        .collect()
}

/// Rounds half away from zero to `decimals` places; never returns `-0.0`.
pub fn round_half_away(x: f64, decimals: u32) -> f64 {
    let scale = 10f64.powi(decimals as i32);
    let r = (x * scale).round() / scale;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// Fixed-point rendering with half-away-from-zero rounding and a decimal
/// point.
pub fn fmt_fixed(x: f64, decimals: u32) -> String {
    format!("{:.*}", decimals as usize, round_half_away(x, decimals))
}

pub const CSV_HEADER: [&str; 13] = [
    "p2",
    "p1",
    "n2",
    "n1",
    "delta_density",
    "delta_accuracy",
    "ce",
    "delta_h",
    "da_source",
    "delta_density_raw",
    "delta_accuracy_raw",
    "ce_raw",
    "delta_h_raw",
];

impl ComparisonRow {
    /// CSV fields in [`CSV_HEADER`] order: 3-decimal reported values, then
    /// 6-decimal raw values.
    pub fn csv_fields(&self) -> Vec<String> {
        vec![
            self.p2_name.clone(),
            self.p1_name.clone(),
            self.n2.to_string(),
            self.n1.to_string(),
            fmt_fixed(self.delta_density, 3),
            fmt_fixed(self.delta_accuracy, 3),
            fmt_fixed(self.ce, 3),
            fmt_fixed(self.entropy_gain_paper, 3),
            self.delta_accuracy_source.as_str().to_string(),
            fmt_fixed(self.delta_density, 6),
            fmt_fixed(self.delta_accuracy, 6),
            fmt_fixed(self.ce, 6),
            fmt_fixed(self.entropy_gain_paper, 6),
        ]
    }
}

/// Renders rows as CSV with a header line.
pub fn rows_to_csv(rows: &[ComparisonRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("in-memory write");
    for row in rows {
        w.write_record(row.csv_fields()).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is utf-8")
}
