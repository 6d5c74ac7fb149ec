//! Monte-Carlo symbol error rate of a palette over a noisy channel.
//!
//! Each trial picks a palette color uniformly, adds independent Gaussian
//! noise of deviation `sigma` to every channel (rounded and clamped to
//! `0..=255`), and decodes the observation to the nearest palette color by
//! L1 difference. A decode to the wrong index is a symbol error.
//!
//! Trial `t` draws from its own ChaCha8 stream `(seed, stream = t)`, so the
//! outcome of a trial does not depend on which thread runs it or in which
//! order. Error counts are summed, so results are bit-identical for any
//! degree of parallelism.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::color::{color_diff, Color, Palette};
use crate::cost::fmt_fixed;
use crate::{Error, Result};

const CHUNK: u64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelModel {
    sigma: f64,
    seed: u64,
    trials: u64,
}

impl ChannelModel {
    pub fn new(sigma: f64, seed: u64, trials: u64) -> Result<Self> {
        if !(sigma.is_finite() && sigma >= 0.0) {
            return Err(Error::domain(format!(
                "sigma must be finite and >= 0, got {sigma}"
            )));
        }
        if trials < 1 {
            return Err(Error::domain("at least one trial is required"));
        }
        Ok(ChannelModel {
            sigma,
            seed,
            trials,
        })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn trials(&self) -> u64 {
        self.trials
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimResult {
    pub ser: f64,
    pub errors: u64,
    pub trials: u64,
    /// Normal-approximation 95% confidence half-width of `ser`.
    pub half_width_95: f64,
}

impl SimResult {
    pub fn from_counts(errors: u64, trials: u64) -> Self {
        let ser = errors as f64 / trials as f64;
        SimResult {
            ser,
            errors,
            trials,
            half_width_95: 1.96 * (ser * (1.0 - ser) / trials as f64).sqrt(),
        }
    }

    pub fn interval_95(&self) -> (f64, f64) {
        (self.ser - self.half_width_95, self.ser + self.half_width_95)
    }

    /// Fields in [`SIM_CSV_HEADER`] order.
    pub fn csv_fields(&self, palette: &str, sigma: f64) -> Vec<String> {
        vec![
            palette.to_string(),
            sigma.to_string(),
            self.trials.to_string(),
            self.errors.to_string(),
            fmt_fixed(self.ser, 6),
            fmt_fixed(self.half_width_95, 6),
        ]
    }
}

pub const SIM_CSV_HEADER: [&str; 6] = ["palette", "sigma", "trials", "errors", "ser", "hw95"];

/// Adds `sigma·draw` to each channel, rounding half away from zero and
/// clamping to the cube.
pub fn perturb(c: Color, sigma: f64, draws: [f64; 3]) -> Color {
    let [r, g, b] = c.channels();
    let shift = |v: u8, z: f64| (f64::from(v) + sigma * z).round().clamp(0.0, 255.0) as u8;
    Color::new(shift(r, draws[0]), shift(g, draws[1]), shift(b, draws[2]))
}

/// Index of the palette color nearest to `observed`; ties go to the lowest
/// index.
pub fn decode_nearest(observed: Color, p: &Palette) -> Result<usize> {
    let colors = p.explicit_colors()?;
    Ok(nearest(observed, colors))
}

fn nearest(observed: Color, colors: &[Color]) -> usize {
    let mut best = (u16::MAX, 0);
    for (i, &c) in colors.iter().enumerate() {
        let d = color_diff(observed, c);
        if d < best.0 {
            best = (d, i);
        }
    }
    best.1
}

/// Random stream for one trial.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn run_trial(colors: &[Color], sigma: f64, seed: u64, trial: u64) -> bool {
    let mut rng = trial_rng(seed, trial);
    let truth = rng.random_range(0..colors.len());
    let draws = [
        rng.sample(StandardNormal),
        rng.sample(StandardNormal),
        rng.sample(StandardNormal),
    ];
    nearest(perturb(colors[truth], sigma, draws), colors) != truth
}

fn count_errors(colors: &[Color], model: &ChannelModel, range: std::ops::Range<u64>) -> u64 {
    range
        .filter(|&t| run_trial(colors, model.sigma, model.seed, t))
        .count() as u64
}

/// Estimates the symbol error rate of an explicit palette.
pub fn symbol_error_rate(p: &Palette, model: &ChannelModel) -> Result<SimResult> {
    let colors = p.explicit_colors()?;
    if colors.len() < 2 {
        return Err(Error::TooFewColors {
            name: p.name.clone(),
            n: colors.len(),
        });
    }
    let chunks = model.trials.div_ceil(CHUNK);
    let chunk_range = |k: u64| k * CHUNK..((k + 1) * CHUNK).min(model.trials);

    #[cfg(feature = "parallel")]
    let errors: u64 = {
        use rayon::prelude::*;
        (0..chunks)
            .into_par_iter()
            .map(|k| count_errors(colors, model, chunk_range(k)))
            .sum()
    };
    #[cfg(not(feature = "parallel"))]
    let errors: u64 = (0..chunks)
        .map(|k| count_errors(colors, model, chunk_range(k)))
        .sum();

    Ok(SimResult::from_counts(errors, model.trials))
}

/// One [`SimResult`] per noise level.
pub fn sweep(p: &Palette, sigmas: &[f64], trials: u64, seed: u64) -> Result<Vec<(f64, SimResult)>> {
    sigmas
        .iter()
        .map(|&s| {
            Ok((
                s,
                symbol_error_rate(p, &ChannelModel::new(s, seed, trials)?)?,
            ))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin_palette;

    #[test]
    fn perturb_examples() {
        let c = Color::new(17, 200, 3);
        assert_eq!(perturb(c, 0.0, [3.0, -2.0, 9.0]), c);
        assert_eq!(
            perturb(Color::new(250, 0, 0), 10.0, [1.0, 0.0, 0.0]),
            Color::new(255, 0, 0)
        );
        assert_eq!(
            perturb(Color::new(128, 128, 128), 4.0, [0.5, -0.5, 0.0]),
            Color::new(130, 126, 128)
        );
        // 10.5 → 11 and 9.5 → 10: halves round away from zero
        assert_eq!(
            perturb(Color::new(10, 10, 0), 1.0, [0.5, -0.5, -4.0]),
            Color::new(11, 10, 0)
        );
        assert_eq!(
            perturb(Color::new(10, 10, 0), 1.0, [-10.5, 0.0, 0.0]),
            Color::new(0, 10, 0)
        );
    }

    #[test]
    fn decode_examples() {
        let p = builtin_palette("corners8").unwrap();
        for (i, &c) in p.colors.iter().enumerate() {
            assert_eq!(decode_nearest(c, &p).unwrap(), i);
        }
        let bw = builtin_palette("bw2").unwrap();
        assert_eq!(decode_nearest(Color::new(0, 0, 10), &bw).unwrap(), 0);

        let p = Palette::new(
            "tie",
            vec![
                Color::new(0, 0, 0),
                Color::new(100, 0, 0),
                Color::new(255, 255, 255),
                Color::new(0, 100, 0),
            ],
        )
        .unwrap();
        // (50,50,0) is 100 from index 0, 100 from index 1 and 100 from index 3
        assert_eq!(decode_nearest(Color::new(50, 50, 0), &p).unwrap(), 0);
        // (100,100,0) is 100 from index 1 and index 3
        assert_eq!(decode_nearest(Color::new(100, 100, 0), &p).unwrap(), 1);
        assert!(decode_nearest(Color::BLACK, &builtin_palette("HCCB4").unwrap()).is_err());
    }

    #[test]
    fn model_validation() {
        assert!(ChannelModel::new(-1.0, 0, 10).is_err());
        assert!(ChannelModel::new(f64::NAN, 0, 10).is_err());
        assert!(ChannelModel::new(1.0, 0, 0).is_err());
    }

    #[test]
    fn noiseless_channel_is_error_free() {
        let m = ChannelModel::new(0.0, 3, 5000).unwrap();
        for name in ["bw2", "tetra4", "corners8"] {
            let r = symbol_error_rate(&builtin_palette(name).unwrap(), &m).unwrap();
            assert_eq!((r.errors, r.ser, r.half_width_95), (0, 0.0, 0.0));
        }
    }

    #[test]
    fn sim_result_stats() {
        let r = SimResult::from_counts(25, 100);
        assert_eq!(r.ser, 0.25);
        assert!((r.half_width_95 - 1.96 * (0.25f64 * 0.75 / 100.0).sqrt()).abs() < 1e-15);
        assert_eq!(
            r.csv_fields("p", 30.0),
            vec!["p", "30", "100", "25", "0.250000", "0.084870"]
        );
    }

    #[test]
    fn trial_streams_are_independent_of_chunking() {
        let p = builtin_palette("corners8").unwrap();
        let m = ChannelModel::new(60.0, 11, 10_000).unwrap();
        let whole = count_errors(&p.colors, &m, 0..10_000);
        let split =
            count_errors(&p.colors, &m, 0..3_333) + count_errors(&p.colors, &m, 3_333..10_000);
        assert_eq!(whole, split);
        assert_eq!(symbol_error_rate(&p, &m).unwrap().errors, whole);
    }
}
