//! `chromacap`: palette capacity, cost-effectiveness, construction and
//! channel simulation from the command line.
//!
//! Data goes to stdout, diagnostics to stderr. Exit codes: 0 success,
//! 2 usage or domain error, 3 I/O error.

mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use chromacap::capacity::{
    entropy_gain, joint_alphabet_entropy, palette_entropy, product_entropy, AlphabetSpec,
    EntropyMode,
};
use chromacap::channel::{sweep, SIM_CSV_HEADER};
use chromacap::construction::{construct, ConstructionConfig, DEFAULT_RESTARTS};
use chromacap::cost::{
    accuracy_from_min_diff, compare, fmt_fixed, reproduce_table1, ComparisonRow, CSV_HEADER,
};
use chromacap::{
    builtin_palette, parse_palette, parse_palette_csv, serialize_palette, CapacityReport, Palette,
};

use output::{bits, Format, Kind, Records};

const SEED_ENV: &str = "CHROMACAP_SEED";

#[derive(Debug, Parser)]
#[command(
    name = "chromacap",
    version,
    about = "Color palette capacity and cost-effectiveness tools"
)]
struct Cli {
    /// Output format; single-record commands print key=value pairs unless set.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Entropy of an N-color palette.
    Entropy {
        n: usize,
        #[arg(long, default_value = "paper", value_parser = parse_mode)]
        mode: EntropyMode,
        /// Also print the gain over a smaller palette of this size.
        #[arg(long, value_name = "N1")]
        vs: Option<usize>,
        /// Also print the joint color x pattern forms for this many patterns.
        #[arg(long, value_name = "NP")]
        patterns: Option<usize>,
    },
    /// Build a maximally separated palette and write it as JSON.
    Construct {
        n: usize,
        #[arg(long, env = SEED_ENV, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_RESTARTS)]
        restarts: usize,
        /// Restrict colors to a uniform grid of this many levels per channel.
        #[arg(long, value_name = "LEVELS")]
        grid: Option<usize>,
        /// Output path [default: ms<N>-seed<SEED>.json]
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Capacity report for each palette (file path or builtin name).
    Eval {
        #[arg(required = true)]
        palettes: Vec<String>,
    },
    /// Cost-effectiveness of moving from P1 to the larger P2.
    Compare {
        p2: String,
        p1: String,
        /// Supplied accuracy cost; required when a palette is sized-only.
        #[arg(long, allow_negative_numbers = true)]
        da: Option<f64>,
    },
    /// Reproduce the HCCB comparison table.
    Table1,
    /// Monte-Carlo symbol error rate over a Gaussian channel.
    Simulate {
        palette: String,
        #[arg(
            long,
            value_delimiter = ',',
            required = true,
            allow_negative_numbers = true
        )]
        sigma: Vec<f64>,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, env = SEED_ENV, default_value_t = 0)]
        seed: u64,
    },
}

fn parse_mode(s: &str) -> Result<EntropyMode, String> {
    s.parse().map_err(|e: chromacap::Error| e.to_string())
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Io(String),
}

impl From<chromacap::Error> for Failure {
    fn from(e: chromacap::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Io(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Io(m) => m,
        }
    }
}

enum Output {
    /// One logical record; key=value by default.
    Single(Records),
    Many(Records),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(out) => {
            let text = match (out, cli.format) {
                (Output::Single(r), None) => r.key_values(),
                (Output::Single(r) | Output::Many(r), Some(f)) => r.render(f),
                (Output::Many(r), None) => r.render(Format::Csv),
            };
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(errors) => {
            for e in &errors {
                eprintln!("chromacap: {}", e.message());
            }
            ExitCode::from(errors.iter().map(Failure::code).max().unwrap_or(2))
        }
    }
}

fn run(cmd: Command) -> Result<Output, Vec<Failure>> {
    let one = |f: Failure| vec![f];
    match cmd {
        Command::Entropy {
            n,
            mode,
            vs,
            patterns,
        } => entropy(n, mode, vs, patterns).map_err(one),
        Command::Construct {
            n,
            seed,
            restarts,
            grid,
            out,
        } => construct_cmd(n, seed, restarts, grid, out).map_err(one),
        Command::Eval { palettes } => eval(&palettes),
        Command::Compare { p2, p1, da } => compare_cmd(&p2, &p1, da).map_err(one),
        Command::Table1 => Ok(table1()),
        Command::Simulate {
            palette,
            sigma,
            trials,
            seed,
        } => simulate(&palette, &sigma, trials, seed).map_err(one),
    }
}

fn entropy(
    n: usize,
    mode: EntropyMode,
    vs: Option<usize>,
    patterns: Option<usize>,
) -> Result<Output, Failure> {
    let mut cols = vec![("h", Kind::Num)];
    let mut row = vec![bits(palette_entropy(n, mode)?)];
    if let Some(n1) = vs {
        cols.push(("delta_h", Kind::Num));
        row.push(bits(entropy_gain(n, n1, mode)?));
    }
    if let Some(np) = patterns {
        let spec = AlphabetSpec::new(n, np)?;
        cols.extend([("h_joint", Kind::Num), ("h_product", Kind::Num)]);
        row.extend([
            bits(joint_alphabet_entropy(spec)),
            bits(product_entropy(spec)),
        ]);
    }
    let mut r = Records::new(&cols);
    r.push(row);
    Ok(Output::Single(r))
}

fn construct_cmd(
    n: usize,
    seed: u64,
    restarts: usize,
    grid: Option<usize>,
    out: Option<PathBuf>,
) -> Result<Output, Failure> {
    if n > 100 {
        eprintln!("chromacap: warning: n = {n} is beyond 100; construction may be slow");
    }
    let cfg = ConstructionConfig {
        seed,
        restarts,
        grid_levels: grid,
        ..ConstructionConfig::new(n)
    };
    let result = construct(&cfg)?;
    let path = out.unwrap_or_else(|| PathBuf::from(format!("{}.json", result.palette.name)));
    std::fs::write(&path, serialize_palette(&result.palette))
        .map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))?;
    eprintln!("chromacap: wrote {}", path.display());

    let mut r = Records::new(&[("min_diff", Kind::Num), ("a_r", Kind::Num)]);
    r.push(vec![
        result.achieved_min_diff.to_string(),
        fmt_fixed(accuracy_from_min_diff(result.achieved_min_diff), 6),
    ]);
    Ok(Output::Single(r))
}

/// A file path if one exists, else a builtin palette name.
fn load_palette(arg: &str) -> Result<Palette, Failure> {
    let path = Path::new(arg);
    if !path.exists() {
        if let Ok(p) = builtin_palette(arg) {
            return Ok(p);
        }
        let looks_like_path = arg.contains(std::path::MAIN_SEPARATOR)
            || arg.contains('/')
            || path.extension().is_some();
        let msg = format!("{arg}: no such file or builtin palette");
        return Err(if looks_like_path {
            Failure::Io(msg)
        } else {
            Failure::Usage(msg)
        });
    }
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{arg}: {e}")))?;
    let parsed = if path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"))
    {
        let stem = path
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("unnamed");
        parse_palette_csv(&text, stem)
    } else {
        parse_palette(&text)
    };
    parsed.map_err(|e| Failure::Usage(format!("{arg}: {e}")))
}

fn eval(args: &[String]) -> Result<Output, Vec<Failure>> {
    let mut r = Records::new(&[
        ("n", Kind::Num),
        ("min_diff", Kind::Num),
        ("a_r", Kind::Num),
        ("h_paper", Kind::Num),
        ("h_shannon", Kind::Num),
    ]);
    let mut failures = Vec::new();
    for arg in args {
        let report =
            load_palette(arg).and_then(|p| CapacityReport::for_palette(&p).map_err(Failure::from));
        match report {
            Ok(c) => r.push(vec![
                c.n_colors.to_string(),
                c.min_diff.map_or("-".into(), |d| d.to_string()),
                c.accuracy_requirement
                    .map_or("-".into(), |a| fmt_fixed(a, 6)),
                bits(c.entropy_paper),
                bits(c.entropy_shannon),
            ]),
            Err(e) => failures.push(e),
        }
    }
    if failures.is_empty() {
        Ok(Output::Many(r))
    } else {
        Err(failures)
    }
}

fn comparison_records(rows: &[ComparisonRow]) -> Records {
    let mut r = Records::new(&CSV_HEADER.map(|h| {
        let kind = if matches!(h, "p2" | "p1" | "da_source") {
            Kind::Text
        } else {
            Kind::Num
        };
        (h, kind)
    }));
    for row in rows {
        r.push(row.csv_fields());
    }
    r
}

fn compare_cmd(p2: &str, p1: &str, da: Option<f64>) -> Result<Output, Failure> {
    let (p2, p1) = (load_palette(p2)?, load_palette(p1)?);
    if p2.n_colors == p1.n_colors {
        return Err(Failure::Usage(format!(
            "{} and {} both have {} colors; sizes must differ",
            p2.name, p1.name, p2.n_colors
        )));
    }
    Ok(Output::Single(comparison_records(&[compare(
        &p2, &p1, da,
    )?])))
}

fn table1() -> Output {
    Output::Many(comparison_records(&reproduce_table1()))
}

fn simulate(palette: &str, sigmas: &[f64], trials: u64, seed: u64) -> Result<Output, Failure> {
    let p = load_palette(palette)?;
    let mut r = Records::new(&SIM_CSV_HEADER.map(|h| {
        (
            h,
            if h == "palette" {
                Kind::Text
            } else {
                Kind::Num
            },
        )
    }));
    for (sigma, res) in sweep(&p, sigmas, trials, seed)? {
        r.push(res.csv_fields(&p.name, sigma));
    }
    Ok(Output::Many(r))
}
