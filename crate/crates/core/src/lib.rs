//! Information capacity and cost-effectiveness of color palettes.
//!
//! The crate is organised around a small data model ([`Color`], [`Palette`])
//! and a handful of metric families built on top of it:
//!
//! * [`capacity`]: per-symbol entropy of palettes and joint color/pattern
//!   alphabets, entropy gain from enlarging a palette, and distribution-level
//!   entropy identities.
//! * [`cost`]: the density contribution, accuracy-requirement cost and
//!   cost-effectiveness score used to compare palettes of different sizes,
//!   including the reference HCCB comparison table.
//! * [`construction`]: max-min dispersion palettes in the RGB cube.
//! * [`channel`]: a Monte-Carlo noisy-channel decoder that estimates symbol
//!   error rates for a palette.
//!
//! Color difference is the L1 (city-block) distance on 8-bit channels, so
//! the largest possible difference is [`MAX_COLOR_DIFF`] = 765.

pub mod capacity;
pub mod channel;
pub mod color;
pub mod construction;
pub mod cost;
mod error;

pub use color::{
    builtin_names, builtin_palette, color_diff, min_pairwise_diff, parse_palette,
    parse_palette_csv, serialize_palette, validate_palette, CapacityReport, Color, Palette,
    Violation, MAX_COLOR_DIFF,
};
pub use error::{Error, Result};
