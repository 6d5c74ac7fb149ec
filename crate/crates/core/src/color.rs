//! Colors, palettes, the L1 color-difference metric, the palette file format
//! and the registry of named palettes.

use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::{capacity, cost, Error, Result};

/// Largest L1 difference between two 8-bit RGB colors (3 × 255).
pub const MAX_COLOR_DIFF: u16 = 765;

/// A point of the discrete 8-bit RGB cube.
///
/// Ordering is lexicographic on `(r, g, b)`, which is the tie-break order
/// used throughout palette construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "[u8; 3]", into = "[u8; 3]")]
pub struct Color {
    pub r: u8,
    pub g: u8,
    pub b: u8,
}

impl Color {
    pub const BLACK: Color = Color::new(0, 0, 0);
    pub const WHITE: Color = Color::new(255, 255, 255);

    pub const fn new(r: u8, g: u8, b: u8) -> Self {
        Color { r, g, b }
    }

    pub fn channels(self) -> [u8; 3] {
        [self.r, self.g, self.b]
    }
}

impl From<[u8; 3]> for Color {
    fn from([r, g, b]: [u8; 3]) -> Self {
        Color { r, g, b }
    }
}

impl From<Color> for [u8; 3] {
    fn from(c: Color) -> Self {
        c.channels()
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.r, self.g, self.b)
    }
}

/// L1 (city-block) difference of two colors, in `0..=765`.
pub fn color_diff(a: Color, b: Color) -> u16 {
    a.r.abs_diff(b.r) as u16 + a.g.abs_diff(b.g) as u16 + a.b.abs_diff(b.b) as u16
}

/// A named, ordered set of colors.
///
/// A palette may be *sized-only*: its size is known but its colors are not
/// (HCCB and the developed palettes of the reference table are registered
/// this way). Capacity metrics only need the size; distance-based metrics
/// fail with [`Error::SizedOnlyPalette`].
///
/// Fields are public so that raw, possibly inconsistent palettes can be
/// built and checked with [`validate_palette`]. [`Palette::new`] and
/// [`Palette::sized`] enforce the invariants up front.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Palette {
    pub name: String,
    pub colors: Vec<Color>,
    pub n_colors: usize,
}

impl Palette {
    pub fn new(name: impl Into<String>, colors: Vec<Color>) -> Result<Self> {
        let palette = Palette {
            name: name.into(),
            n_colors: colors.len(),
            colors,
        };
        palette.checked()
    }

    pub fn sized(name: impl Into<String>, n_colors: usize) -> Result<Self> {
        Palette {
            name: name.into(),
            colors: Vec::new(),
            n_colors,
        }
        .checked()
    }

    fn checked(self) -> Result<Self> {
        let violations = validate_palette(&self);
        if violations.is_empty() {
            Ok(self)
        } else {
            Err(Error::InvalidPalette {
                name: self.name,
                violations,
            })
        }
    }

    pub fn is_sized_only(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn len(&self) -> usize {
        self.n_colors
    }

    pub fn is_empty(&self) -> bool {
        self.n_colors == 0
    }

    /// The explicit colors, or [`Error::SizedOnlyPalette`].
    pub fn explicit_colors(&self) -> Result<&[Color]> {
        if self.is_sized_only() {
            Err(Error::SizedOnlyPalette(self.name.clone()))
        } else {
            Ok(&self.colors)
        }
    }
}

/// Minimum L1 difference over all unordered pairs of the palette.
pub fn min_pairwise_diff(p: &Palette) -> Result<u16> {
    let colors = p.explicit_colors()?;
    if colors.len() < 2 {
        return Err(Error::TooFewColors {
            name: p.name.clone(),
            n: colors.len(),
        });
    }
    let mut best = MAX_COLOR_DIFF;
    for (i, &a) in colors.iter().enumerate() {
        for &b in &colors[i + 1..] {
            best = best.min(color_diff(a, b));
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    Duplicate { first: usize, second: usize },
    LengthMismatch { colors: usize, n_colors: usize },
    NoColors,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Duplicate { first, second } => {
                write!(f, "duplicate at indices {first},{second}")
            }
            Violation::LengthMismatch { colors, n_colors } => {
                write!(
                    f,
                    "length mismatch: {colors} colors listed, n_colors = {n_colors}"
                )
            }
            Violation::NoColors => write!(f, "n_colors must be at least 1"),
        }
    }
}

/// Checks the palette invariants. An empty result means the palette is valid.
///
/// Duplicates are detected by exact channel equality and reported once per
/// repeated color, against its first occurrence.
pub fn validate_palette(p: &Palette) -> Vec<Violation> {
    let mut out = Vec::new();
    if p.n_colors == 0 {
        out.push(Violation::NoColors);
    }
    if !p.colors.is_empty() && p.colors.len() != p.n_colors {
        out.push(Violation::LengthMismatch {
            colors: p.colors.len(),
            n_colors: p.n_colors,
        });
    }
    let mut seen = std::collections::HashMap::with_capacity(p.colors.len());
    for (i, c) in p.colors.iter().enumerate() {
        if let Some(&first) = seen.get(c) {
            out.push(Violation::Duplicate { first, second: i });
        } else {
            seen.insert(*c, i);
        }
    }
    out
}

/// Parses the canonical palette document.
///
/// The document is a JSON object with a `name` and either `colors` (an
/// array of `[r, g, b]` integer triples) or `n_colors`. Both may be given
/// if they agree. A bare array of triples is accepted as an unnamed palette.
pub fn parse_palette(text: &str) -> Result<Palette> {
    let doc: Value = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: Some(e.line()),
        column: Some(e.column()),
        field: None,
        message: e.to_string(),
    })?;

    let (name, colors, n_colors) = match &doc {
        Value::Array(_) => ("unnamed".to_string(), Some(parse_colors(&doc)?), None),
        Value::Object(map) => {
            if let Some(key) = map
                .keys()
                .find(|k| !matches!(k.as_str(), "name" | "colors" | "n_colors"))
            {
                return Err(Error::parse_field(key.as_str(), "unknown field"));
            }
            let name = match map.get("name") {
                Some(Value::String(s)) => s.clone(),
                Some(_) => return Err(Error::parse_field("name", "expected a string")),
                None => return Err(Error::parse_field("name", "missing field")),
            };
            let colors = map.get("colors").map(parse_colors).transpose()?;
            let n_colors =
                match map.get("n_colors") {
                    Some(v) => Some(v.as_u64().filter(|&n| n >= 1).ok_or_else(|| {
                        Error::parse_field("n_colors", "expected a positive integer")
                    })? as usize),
                    None => None,
                };
            (name, colors, n_colors)
        }
        _ => {
            return Err(Error::Parse {
                line: Some(1),
                column: Some(1),
                field: None,
                message: "expected a palette object or an array of colors".into(),
            })
        }
    };

    match (colors, n_colors) {
        (None, None) => Err(Error::parse_field(
            "colors",
            "either `colors` or `n_colors` is required",
        )),
        (None, Some(n)) => Palette::sized(name, n),
        (Some(colors), n) => {
            if colors.is_empty() {
                return Err(Error::parse_field("colors", "empty color list"));
            }
            Palette {
                name,
                n_colors: n.unwrap_or(colors.len()),
                colors,
            }
            .checked()
        }
    }
}

fn parse_colors(v: &Value) -> Result<Vec<Color>> {
    let items = v
        .as_array()
        .ok_or_else(|| Error::parse_field("colors", "expected an array of [r, g, b] triples"))?;
    items
        .iter()
        .enumerate()
        .map(|(i, item)| {
            let triple = item
                .as_array()
                .filter(|t| t.len() == 3)
                .ok_or_else(|| Error::parse_field(format!("colors[{i}]"), "expected [r, g, b]"))?;
            let mut ch = [0u8; 3];
            for (j, value) in triple.iter().enumerate() {
                ch[j] = channel(value.as_i64(), value)
                    .map_err(|msg| Error::parse_field(format!("colors[{i}][{j}]"), msg))?;
            }
            Ok(Color::from(ch))
        })
        .collect()
}

fn channel(n: Option<i64>, raw: &impl fmt::Display) -> std::result::Result<u8, String> {
    match n {
        Some(n) if (0..=255).contains(&n) => Ok(n as u8),
        Some(n) => Err(format!("channel {n} out of range 0..=255")),
        None => Err(format!("channel `{raw}` is not an integer")),
    }
}

/// Parses a CSV palette: header `r,g,b`, one color per row.
pub fn parse_palette_csv(text: &str, name: &str) -> Result<Palette> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader.headers().map_err(csv_error)?.clone();
    if headers.iter().collect::<Vec<_>>() != ["r", "g", "b"] {
        return Err(Error::Parse {
            line: Some(1),
            column: None,
            field: Some("header".into()),
            message: format!(
                "expected header `r,g,b`, found `{}`",
                headers.iter().collect::<Vec<_>>().join(",")
            ),
        });
    }
    let mut colors = Vec::new();
    for record in reader.records() {
        let record = record.map_err(csv_error)?;
        let line = record.position().map(|p| p.line() as usize);
        if record.len() != 3 {
            return Err(Error::Parse {
                line,
                column: None,
                field: None,
                message: format!("expected 3 fields, found {}", record.len()),
            });
        }
        let mut ch = [0u8; 3];
        for (j, field) in record.iter().enumerate() {
            ch[j] = channel(field.parse::<i64>().ok(), &field).map_err(|message| Error::Parse {
                line,
                column: None,
                field: Some(["r", "g", "b"][j].into()),
                message,
            })?;
        }
        colors.push(Color::from(ch));
    }
    if colors.is_empty() {
        return Err(Error::parse_field("colors", "no color rows"));
    }
    Palette::new(name, colors)
}

fn csv_error(e: csv::Error) -> Error {
    Error::Parse {
        line: e.position().map(|p| p.line() as usize),
        column: None,
        field: None,
        message: e.to_string(),
    }
}

/// Serializes to the canonical document, colors in stored order.
pub fn serialize_palette(p: &Palette) -> String {
    let name = serde_json::to_string(&p.name).expect("strings always serialize");
    if p.is_sized_only() {
        return format!(
            "{{\n  \"name\": {name},\n  \"n_colors\": {}\n}}\n",
            p.n_colors
        );
    }
    let rows = p
        .colors
        .iter()
        .map(|c| format!("    [{}, {}, {}]", c.r, c.g, c.b))
        .collect::<Vec<_>>()
        .join(",\n");
    format!("{{\n  \"name\": {name},\n  \"colors\": [\n{rows}\n  ]\n}}\n")
}

/// Sizes of the developed palettes that appear in the HCCB comparison
/// table. Their colors were never published, so they are sized-only; the
/// size is the label's leading integer.
const DEVELOPED_LABELS: [&str; 13] = [
    "3c", "4e", "5d", "6s", "7a", "8b", "9d", "10c", "11c", "12d", "13c", "14c", "15c",
];

/// Names accepted by [`builtin_palette`].
pub fn builtin_names() -> Vec<&'static str> {
    let mut names = vec!["bw2", "tetra4", "corners8", "HCCB4", "HCCB8"];
    names.extend(DEVELOPED_LABELS);
    names
}

/// Looks up a named palette (case-insensitive).
///
/// `HCCB4` is registered with **five** colors, not four: the comparison
/// table's density contributions against HCCB4 are only consistent with
/// N = 5. `HCCB8` has eight. Both are sized-only.
pub fn builtin_palette(name: &str) -> Result<Palette> {
    let key = name.to_ascii_lowercase();
    let corners = || {
        let mut v = Vec::with_capacity(8);
        for r in [0, 255] {
            for g in [0, 255] {
                for b in [0, 255] {
                    v.push(Color::new(r, g, b));
                }
            }
        }
        v
    };
    match key.as_str() {
        "bw2" => Palette::new("bw2", vec![Color::BLACK, Color::WHITE]),
        "corners8" => Palette::new("corners8", corners()),
        "tetra4" => Palette::new(
            "tetra4",
            vec![
                Color::new(0, 0, 0),
                Color::new(0, 255, 255),
                Color::new(255, 0, 255),
                Color::new(255, 255, 0),
            ],
        ),
        "hccb4" => Palette::sized("HCCB4", 5),
        "hccb8" => Palette::sized("HCCB8", 8),
        _ => match DEVELOPED_LABELS.iter().find(|l| **l == key) {
            Some(label) => Palette::sized(
                *label,
                leading_integer(label).expect("labels start with digits"),
            ),
            None => Err(Error::UnknownPalette(name.to_string())),
        },
    }
}

/// The leading decimal integer of a label such as `13c`.
pub(crate) fn leading_integer(label: &str) -> Option<usize> {
    let digits: String = label.chars().take_while(|c| c.is_ascii_digit()).collect();
    digits.parse().ok()
}

/// Derived per-palette capacity quantities.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CapacityReport {
    pub palette_name: String,
    pub n_colors: usize,
    /// Absent for sized-only palettes.
    pub min_diff: Option<u16>,
    pub accuracy_requirement: Option<f64>,
    pub entropy_paper: f64,
    pub entropy_shannon: f64,
}

impl CapacityReport {
    pub fn for_palette(p: &Palette) -> Result<Self> {
        let min_diff = if p.colors.len() >= 2 {
            Some(min_pairwise_diff(p)?)
        } else {
            None
        };
        Ok(CapacityReport {
            palette_name: p.name.clone(),
            n_colors: p.n_colors,
            min_diff,
            accuracy_requirement: min_diff.map(cost::accuracy_from_min_diff),
            entropy_paper: capacity::palette_entropy(p.n_colors, capacity::EntropyMode::Paper)?,
            entropy_shannon: capacity::palette_entropy(p.n_colors, capacity::EntropyMode::Shannon)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(r: u8, g: u8, b: u8) -> Color {
        Color::new(r, g, b)
    }

    #[test]
    fn diff_examples() {
        assert_eq!(color_diff(c(0, 0, 0), c(255, 255, 255)), 765);
        assert_eq!(color_diff(c(10, 20, 30), c(10, 20, 30)), 0);
        assert_eq!(color_diff(c(255, 0, 0), c(0, 255, 0)), 510);
    }

    #[test]
    fn diameter_only_between_opposite_corners() {
        let corners = builtin_palette("corners8").unwrap().colors;
        for &a in &corners {
            for &b in &corners {
                let opposite = a.r != b.r && a.g != b.g && a.b != b.b;
                assert_eq!(color_diff(a, b) == MAX_COLOR_DIFF, opposite, "{a} {b}");
            }
        }
    }

    // Independent pair enumeration for the min-diff examples.
    fn brute_min(colors: &[Color]) -> u16 {
        let mut all = Vec::new();
        for i in 0..colors.len() {
            for j in 0..colors.len() {
                if i != j {
                    let [a, b] = [colors[i], colors[j]];
                    all.push(
                        (a.r as i32 - b.r as i32).unsigned_abs()
                            + (a.g as i32 - b.g as i32).unsigned_abs()
                            + (a.b as i32 - b.b as i32).unsigned_abs(),
                    );
                }
            }
        }
        *all.iter().min().unwrap() as u16
    }

    #[test]
    fn min_pairwise_examples() {
        let cases = [
            (vec![c(0, 0, 0), c(255, 255, 255)], 765),
            (vec![c(0, 0, 0), c(255, 255, 0), c(0, 255, 255)], 510),
            (
                vec![c(0, 255, 255), c(255, 0, 255), c(255, 255, 0), c(0, 0, 0)],
                510,
            ),
        ];
        for (colors, expected) in cases {
            assert_eq!(brute_min(&colors), expected);
            let p = Palette::new("t", colors).unwrap();
            assert_eq!(min_pairwise_diff(&p).unwrap(), expected);
        }
        let corners = builtin_palette("corners8").unwrap();
        assert_eq!(brute_min(&corners.colors), 255);
        assert_eq!(min_pairwise_diff(&corners).unwrap(), 255);
    }

    #[test]
    fn min_pairwise_errors() {
        let sized = builtin_palette("HCCB8").unwrap();
        assert!(matches!(
            min_pairwise_diff(&sized),
            Err(Error::SizedOnlyPalette(_))
        ));
        let single = Palette::new("one", vec![Color::BLACK]).unwrap();
        assert!(matches!(
            min_pairwise_diff(&single),
            Err(Error::TooFewColors { n: 1, .. })
        ));
    }

    #[test]
    fn validation() {
        let ok = builtin_palette("tetra4").unwrap();
        assert!(validate_palette(&ok).is_empty());

        let dup = Palette {
            name: "d".into(),
            colors: vec![c(1, 2, 3), c(0, 0, 0), c(1, 2, 3)],
            n_colors: 3,
        };
        let v = validate_palette(&dup);
        assert_eq!(
            v,
            vec![Violation::Duplicate {
                first: 0,
                second: 2
            }]
        );
        assert_eq!(v[0].to_string(), "duplicate at indices 0,2");

        let short = Palette {
            name: "s".into(),
            colors: vec![c(0, 0, 0), c(1, 1, 1), c(2, 2, 2)],
            n_colors: 5,
        };
        let v = validate_palette(&short);
        assert!(matches!(
            v[..],
            [Violation::LengthMismatch {
                colors: 3,
                n_colors: 5
            }]
        ));
        assert!(v[0].to_string().starts_with("length mismatch"));

        assert!(matches!(
            Palette::sized("z", 0),
            Err(Error::InvalidPalette { .. })
        ));
    }

    #[test]
    fn parse_examples() {
        let p = parse_palette(r#"{"name":"t2","colors":[[0,0,0],[255,255,255]]}"#).unwrap();
        assert_eq!(p.name, "t2");
        assert_eq!(p.n_colors, 2);
        assert_eq!(p.colors, vec![Color::BLACK, Color::WHITE]);

        let p = parse_palette(r#"{"name":"hccb8","n_colors":8}"#).unwrap();
        assert!(p.is_sized_only());
        assert_eq!(p.n_colors, 8);

        match parse_palette("[[0,0,300]]") {
            Err(Error::Parse { field, message, .. }) => {
                assert_eq!(field.as_deref(), Some("colors[0][2]"));
                assert!(message.contains("out of range"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parse_diagnostics() {
        match parse_palette("{\n  \"name\": \"x\",\n  \"colors\": [[0,0,0],]\n}") {
            Err(Error::Parse { line: Some(3), .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_palette(r#"{"name":"x","colour":[]}"#),
            Err(Error::Parse { field: Some(f), .. }) if f == "colour"
        ));
        assert!(matches!(
            parse_palette(r#"{"name":"x","colors":[[0,0]]}"#),
            Err(Error::Parse { field: Some(f), .. }) if f == "colors[0]"
        ));
        assert!(matches!(
            parse_palette(r#"{"name":"x","colors":[[0,0,0],[0,0,0]]}"#),
            Err(Error::InvalidPalette { .. })
        ));
        assert!(matches!(
            parse_palette(r#"{"name":"x","colors":[[0,0,0],[1,0,0]],"n_colors":3}"#),
            Err(Error::InvalidPalette { .. })
        ));
        assert!(matches!(
            parse_palette(r#"{"name":"x"}"#),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_palette(r#"{"name":"x","colors":[[0,0,1.5]]}"#),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn csv_palettes() {
        let p = parse_palette_csv("r,g,b\n0,0,0\n255, 255, 255\n", "bw").unwrap();
        assert_eq!(
            p,
            builtin_palette("bw2")
                .map(|mut p| {
                    p.name = "bw".into();
                    p
                })
                .unwrap()
        );

        match parse_palette_csv("r,g,b\n0,0,0\n1,2,256\n", "bad") {
            Err(Error::Parse {
                line: Some(3),
                field: Some(f),
                ..
            }) => assert_eq!(f, "b"),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_palette_csv("red,green,blue\n0,0,0\n", "h").is_err());
    }

    #[test]
    fn registry() {
        let h8 = builtin_palette("HCCB8").unwrap();
        assert!(h8.is_sized_only());
        assert_eq!(h8.n_colors, 8);
        let h4 = builtin_palette("hccb4").unwrap();
        assert_eq!(h4.n_colors, 5);
        assert_eq!(builtin_palette("13c").unwrap().n_colors, 13);
        assert!(matches!(
            builtin_palette("nope"),
            Err(Error::UnknownPalette(_))
        ));
        for name in builtin_names() {
            assert!(validate_palette(&builtin_palette(name).unwrap()).is_empty());
        }
    }

    #[test]
    fn capacity_report() {
        let r = CapacityReport::for_palette(&builtin_palette("bw2").unwrap()).unwrap();
        assert_eq!(r.min_diff, Some(765));
        assert_eq!(r.accuracy_requirement, Some(0.0));
        assert_eq!(r.entropy_paper, 2.0);
        assert_eq!(r.entropy_shannon, 1.0);

        let r = CapacityReport::for_palette(&builtin_palette("HCCB8").unwrap()).unwrap();
        assert_eq!(r.min_diff, None);
        assert_eq!(r.accuracy_requirement, None);
        assert_eq!(r.entropy_paper, 24.0);
    }

    fn color() -> impl Strategy<Value = Color> {
        any::<[u8; 3]>().prop_map(Color::from)
    }

    fn palette() -> impl Strategy<Value = Palette> {
        let colors = prop::collection::btree_set(color(), 1..24)
            .prop_map(|set| set.into_iter().collect::<Vec<_>>())
            .prop_shuffle();
        (colors, "[a-z0-9_ \"\\\\]{0,12}")
            .prop_map(|(colors, name)| Palette::new(name, colors).unwrap())
    }

    proptest! {
        #[test]
        fn metric_axioms(a in color(), b in color(), c in color()) {
            let ab = color_diff(a, b);
            prop_assert!(ab <= MAX_COLOR_DIFF);
            prop_assert_eq!(ab == 0, a == b);
            prop_assert_eq!(ab, color_diff(b, a));
            prop_assert!(color_diff(a, c) <= ab + color_diff(b, c));
        }

        #[test]
        fn min_is_a_lower_bound(p in palette()) {
            prop_assume!(p.n_colors >= 2);
            let m = min_pairwise_diff(&p).unwrap();
            for a in &p.colors {
                for b in &p.colors {
                    if a != b {
                        prop_assert!(m <= color_diff(*a, *b));
                    }
                }
            }
        }

        #[test]
        fn serialization_round_trip(p in palette(), sized in any::<bool>()) {
            let p = if sized { Palette::sized(p.name, p.n_colors).unwrap() } else { p };
            prop_assert_eq!(parse_palette(&serialize_palette(&p)).unwrap(), p);
        }
    }
}
