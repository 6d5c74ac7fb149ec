//! Browser bindings for the demo page in `www/`.
//!
//! Every export returns plain strings or numbers so the same functions can
//! be exercised by native tests. Errors surface as message strings.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use chromacap::capacity::{entropy_gain, palette_entropy, EntropyMode};
use chromacap::channel::sweep;
use chromacap::construction::{construct, ConstructionConfig};
use chromacap::cost::{accuracy_from_min_diff, cost_effectiveness, delta_density};
use chromacap::{builtin_palette, parse_palette, serialize_palette, Color};

/// Largest palette the page will build; construction runs on the UI thread.
pub const MAX_DEMO_COLORS: usize = 64;

#[derive(Serialize)]
struct Built {
    name: String,
    colors: Vec<Color>,
    hex: Vec<String>,
    min_diff: u16,
    a_r: f64,
    document: String,
}

fn hex(c: Color) -> String {
    format!("#{:02x}{:02x}{:02x}", c.r, c.g, c.b)
}

/// Builds an `n`-color palette and returns it as JSON with its min
/// difference, accuracy requirement, hex codes and palette document.
#[wasm_bindgen]
pub fn construct_palette(n: usize, seed: u64, restarts: usize) -> Result<String, String> {
    if n > MAX_DEMO_COLORS {
        return Err(format!("the demo builds at most {MAX_DEMO_COLORS} colors"));
    }
    let cfg = ConstructionConfig {
        seed,
        restarts,
        ..ConstructionConfig::new(n)
    };
    let r = construct(&cfg).map_err(|e| e.to_string())?;
    let built = Built {
        name: r.palette.name.clone(),
        hex: r.palette.colors.iter().copied().map(hex).collect(),
        colors: r.palette.colors.clone(),
        min_diff: r.achieved_min_diff,
        a_r: accuracy_from_min_diff(r.achieved_min_diff),
        document: serialize_palette(&r.palette),
    };
    Ok(serde_json::to_string(&built).expect("plain data serializes"))
}

/// Entropy of palettes of size `1..=n_max`.
#[wasm_bindgen]
pub fn entropy_curve(n_max: usize, shannon: bool) -> Vec<f64> {
    let mode = if shannon {
        EntropyMode::Shannon
    } else {
        EntropyMode::Paper
    };
    (1..=n_max)
        .map(|n| palette_entropy(n, mode).unwrap())
        .collect()
}

/// Entropy gain over an `n1`-color palette for sizes `n1+1..=n_max`.
#[wasm_bindgen]
pub fn gain_curve(n1: usize, n_max: usize) -> Result<Vec<f64>, String> {
    (n1 + 1..=n_max)
        .map(|n2| entropy_gain(n2, n1, EntropyMode::Paper).map_err(|e| e.to_string()))
        .collect()
}

/// Cost-effectiveness against an `n1`-color palette for sizes
/// `n1+1..=n_max`, at a fixed accuracy cost.
#[wasm_bindgen]
pub fn ce_curve(n1: usize, n_max: usize, delta_accuracy: f64) -> Result<Vec<f64>, String> {
    (n1 + 1..=n_max)
        .map(|n2| {
            let dd = delta_density(n2, n1)?;
            cost_effectiveness(dd, delta_accuracy)
        })
        .collect::<Result<_, _>>()
        .map_err(|e: chromacap::Error| e.to_string())
}

/// Symbol error rate per noise level. `palette` is a builtin name or a
/// palette document.
#[wasm_bindgen]
pub fn ser_sweep(
    palette: &str,
    sigmas: Vec<f64>,
    trials: u64,
    seed: u64,
) -> Result<Vec<f64>, String> {
    let p = match builtin_palette(palette) {
        Ok(p) => p,
        Err(_) => parse_palette(palette).map_err(|e| e.to_string())?,
    };
    let rows = sweep(&p, &sigmas, trials, seed).map_err(|e| e.to_string())?;
    Ok(rows.into_iter().map(|(_, r)| r.ser).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construct_json() {
        let v: serde_json::Value =
            serde_json::from_str(&construct_palette(2, 0, 2).unwrap()).unwrap();
        assert_eq!(v["min_diff"], 765);
        assert_eq!(v["hex"], serde_json::json!(["#000000", "#ffffff"]));
        assert_eq!(v["colors"], serde_json::json!([[0, 0, 0], [255, 255, 255]]));
        assert!(parse_palette(v["document"].as_str().unwrap()).is_ok());
        assert!(construct_palette(1, 0, 1).is_err());
        assert!(construct_palette(MAX_DEMO_COLORS + 1, 0, 1).is_err());
    }

    #[test]
    fn curves() {
        assert_eq!(
            entropy_curve(4, false),
            vec![0.0, 2.0, 3.0 * 3f64.log2(), 8.0]
        );
        assert_eq!(entropy_curve(2, true), vec![0.0, 1.0]);
        let g = gain_curve(8, 14).unwrap();
        assert_eq!(g.len(), 6);
        assert!((g[5] - 29.302969).abs() < 1e-6);
        let ce = ce_curve(8, 13, 0.002).unwrap();
        assert!((ce[4] - 0.231).abs() < 5e-4);
        assert!(ce_curve(1, 4, 0.0).is_err());
        assert!(ce_curve(4, 8, -0.1).is_err());
    }

    #[test]
    fn sweep_values() {
        let s = ser_sweep("tetra4", vec![0.0, 60.0], 20_000, 1).unwrap();
        assert_eq!(s[0], 0.0);
        assert!(s[1] > 0.0 && s[1] < 0.05);
        let doc = "{\"name\": \"bw\", \"colors\": [[0,0,0],[255,255,255]]}";
        assert_eq!(ser_sweep(doc, vec![5.0], 1000, 0).unwrap(), vec![0.0]);
        assert!(ser_sweep("HCCB8", vec![1.0], 10, 0).is_err());
        assert!(ser_sweep("{", vec![1.0], 10, 0).is_err());
    }
}
