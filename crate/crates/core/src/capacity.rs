//! Entropy and information capacity of color symbologies.
//!
//! Every symbol color (and pattern) is taken to be equiprobable and the
//! source memoryless, so capacity depends only on alphabet sizes. Two
//! per-symbol forms are exposed:
//!
//! * [`EntropyMode::Paper`]: `N·log2 N`, the form used by the HCCB
//!   comparison and the entropy-gain figures (25.219 for 10 vs 4 colors,
//!   29.303 for 14 vs 8).
//! * [`EntropyMode::Shannon`]: `log2 N`, the entropy of a uniform source.
//!
//! All logarithms are base 2.

use serde::Serialize;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EntropyMode {
    #[default]
    Paper,
    Shannon,
}

impl std::str::FromStr for EntropyMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "paper" => Ok(EntropyMode::Paper),
            "shannon" => Ok(EntropyMode::Shannon),
            _ => Err(Error::domain(format!(
                "unknown entropy mode `{s}` (paper|shannon)"
            ))),
        }
    }
}

/// Bits revealed by an event of probability `p`.
pub fn self_information(p: f64) -> Result<f64> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::domain(format!("probability {p} outside (0, 1]")));
    }
    Ok(-p.log2())
}

/// Per-symbol entropy of an `n`-color palette.
pub fn palette_entropy(n: usize, mode: EntropyMode) -> Result<f64> {
    if n < 1 {
        return Err(Error::domain("palette size must be at least 1"));
    }
    let n = n as f64;
    Ok(match mode {
        EntropyMode::Paper => n * n.log2(),
        EntropyMode::Shannon => n.log2(),
    })
}

/// Entropy gained by enlarging a palette from `n1` to `n2` colors.
pub fn entropy_gain(n2: usize, n1: usize, mode: EntropyMode) -> Result<f64> {
    if n1 < 1 || n2 <= n1 {
        return Err(Error::domain(format!(
            "entropy gain needs n2 > n1 >= 1, got n2 = {n2}, n1 = {n1}"
        )));
    }
    Ok(palette_entropy(n2, mode)? - palette_entropy(n1, mode)?)
}

/// Sizes of a joint color × pattern alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AlphabetSpec {
    n_colors: usize,
    n_patterns: usize,
}

impl AlphabetSpec {
    pub fn new(n_colors: usize, n_patterns: usize) -> Result<Self> {
        if n_colors < 1 || n_patterns < 1 {
            return Err(Error::domain("color and pattern counts must be at least 1"));
        }
        Ok(AlphabetSpec {
            n_colors,
            n_patterns,
        })
    }

    pub fn n_colors(&self) -> usize {
        self.n_colors
    }

    pub fn n_patterns(&self) -> usize {
        self.n_patterns
    }
}

/// Entropy of the combined `N_c × N_p` alphabet when every pattern can be
/// printed in every color: `(N_c·N_p)·log2(N_c·N_p)`.
pub fn joint_alphabet_entropy(spec: AlphabetSpec) -> f64 {
    let n = (spec.n_colors * spec.n_patterns) as f64;
    n * n.log2()
}

/// Product form `(N_c·log2 N_c)·(N_p·log2 N_p)` for palettes and albums
/// with differing distributions.
///
/// This is a product of two per-symbol entropies, so its unit is bits² and
/// it is not additive. Do not compare it with [`joint_alphabet_entropy`].
pub fn product_entropy(spec: AlphabetSpec) -> f64 {
    let f = |n: usize| n as f64 * (n as f64).log2();
    f(spec.n_colors) * f(spec.n_patterns)
}

const SUM_TOLERANCE: f64 = 1e-9;

/// A discrete probability distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution(Vec<f64>);

impl Distribution {
    pub fn new(probabilities: Vec<f64>) -> Result<Self> {
        check_probabilities(&probabilities)?;
        Ok(Distribution(probabilities))
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("uniform distribution over an empty support"));
        }
        Ok(Distribution(vec![1.0 / n as f64; n]))
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.0
    }
}

fn check_probabilities(ps: &[f64]) -> Result<()> {
    if ps.is_empty() {
        return Err(Error::domain("empty distribution"));
    }
    if let Some(p) = ps.iter().find(|p| !(p.is_finite() && **p >= 0.0)) {
        return Err(Error::domain(format!("invalid probability {p}")));
    }
    let total: f64 = ps.iter().sum();
    if (total - 1.0).abs() > SUM_TOLERANCE {
        return Err(Error::domain(format!(
            "probabilities sum to {total}, not 1"
        )));
    }
    Ok(())
}

/// Shannon entropy `-Σ p·log2 p`, with `0·log 0 = 0`.
pub fn distribution_entropy(d: &Distribution) -> f64 {
    entropy_of(d.probabilities())
}

fn entropy_of(ps: &[f64]) -> f64 {
    ps.iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum()
}

/// Joint distribution over (pattern, color) pairs, stored row-major with one
/// row per pattern.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    n_patterns: usize,
    n_colors: usize,
    probabilities: Vec<f64>,
}

impl JointDistribution {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n_patterns = rows.len();
        let n_colors = rows.first().map_or(0, Vec::len);
        if n_colors == 0 || rows.iter().any(|r| r.len() != n_colors) {
            return Err(Error::domain(
                "joint distribution must be a non-empty rectangular matrix",
            ));
        }
        let probabilities: Vec<f64> = rows.into_iter().flatten().collect();
        check_probabilities(&probabilities)?;
        Ok(JointDistribution {
            n_patterns,
            n_colors,
            probabilities,
        })
    }

    /// Builds a `n_patterns × n_colors` matrix from sparse `(pattern, color, p)`
    /// entries; missing cells are zero.
    pub fn from_entries(
        n_patterns: usize,
        n_colors: usize,
        entries: &[(usize, usize, f64)],
    ) -> Result<Self> {
        let mut rows = vec![vec![0.0; n_colors]; n_patterns];
        for &(p, c, v) in entries {
            *rows
                .get_mut(p)
                .and_then(|r| r.get_mut(c))
                .ok_or_else(|| Error::domain(format!("entry ({p},{c}) outside the matrix")))? += v;
        }
        Self::new(rows)
    }

    pub fn get(&self, pattern: usize, color: usize) -> f64 {
        self.probabilities[pattern * self.n_colors + color]
    }

    pub fn n_patterns(&self) -> usize {
        self.n_patterns
    }

    pub fn n_colors(&self) -> usize {
        self.n_colors
    }

    pub fn pattern_marginal(&self) -> Vec<f64> {
        self.probabilities
            .chunks(self.n_colors)
            .map(|row| row.iter().sum())
            .collect()
    }

    pub fn color_marginal(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.n_colors];
        for row in self.probabilities.chunks(self.n_colors) {
            for (acc, p) in out.iter_mut().zip(row) {
                *acc += p;
            }
        }
        out
    }
}

/// Entropies of a joint (pattern, color) event and its decompositions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JointDecomposition {
    pub h_pattern: f64,
    /// Uncertainty of the color once the pattern is known.
    pub h_color_given_pattern: f64,
    pub h_joint: f64,
    pub h_color: f64,
    pub h_pattern_given_color: f64,
}

/// Splits `H(p, c)` into `H(p) + H_p(c)` (and `H(c) + H_c(p)`).
///
/// The conditional entropies are computed directly from the conditional
/// distributions, not as differences of the joint and marginal entropies,
/// so the chain rule is a genuine check.
pub fn joint_decomposition(j: &JointDistribution) -> JointDecomposition {
    let pattern_marginal = j.pattern_marginal();
    let color_marginal = j.color_marginal();

    let mut h_color_given_pattern = 0.0;
    for (pattern, &pp) in pattern_marginal.iter().enumerate() {
        if pp > 0.0 {
            let conditional: Vec<f64> = (0..j.n_colors).map(|c| j.get(pattern, c) / pp).collect();
            h_color_given_pattern += pp * entropy_of(&conditional);
        }
    }
    let mut h_pattern_given_color = 0.0;
    for (color, &pc) in color_marginal.iter().enumerate() {
        if pc > 0.0 {
            let conditional: Vec<f64> = (0..j.n_patterns).map(|p| j.get(p, color) / pc).collect();
            h_pattern_given_color += pc * entropy_of(&conditional);
        }
    }

    JointDecomposition {
        h_pattern: entropy_of(&pattern_marginal),
        h_color_given_pattern,
        h_joint: entropy_of(&j.probabilities),
        h_color: entropy_of(&color_marginal),
        h_pattern_given_color,
    }
}
