use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Least-squares line through `(ln x, ln y)`: `y ≈ exp(log_coefficient) · x^exponent`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub exponent: f64,
    pub log_coefficient: f64,
    /// Root-mean-square residual in natural-log units.
    pub residual_rms: f64,
    pub n: usize,
}

impl PowerLawFit {
    pub fn predict(&self, x: f64) -> f64 {
        (self.log_coefficient + self.exponent * x.ln()).exp()
    }
}

pub fn fit_power_law(x: &[f64], y: &[f64]) -> Result<PowerLawFit> {
    if x.len() != y.len() {
        return Err(Error::Domain(format!(
            "x and y differ in length ({} vs {})",
            x.len(),
            y.len()
        )));
    }
    if x.len() < 2 {
        return Err(Error::Domain(
            "a power-law fit needs at least two samples".into(),
        ));
    }
    if let Some(v) = x.iter().chain(y).find(|v| !(v.is_finite() && **v > 0.0)) {
        return Err(Error::Domain(format!(
            "sample {v} is not strictly positive"
        )));
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let (sxx, sxy) = lx.iter().zip(&ly).fold((0.0, 0.0), |(sxx, sxy), (a, b)| {
        let dx = a - mx;
        (sxx + dx * dx, sxy + dx * (b - my))
    });
    if sxx == 0.0 {
        return Err(Error::Domain("all x samples are equal".into()));
    }
    let exponent = sxy / sxx;
    let log_coefficient = my - exponent * mx;
    let sse: f64 = lx
        .iter()
        .zip(&ly)
        .map(|(a, b)| {
            let r = b - (log_coefficient + exponent * a);
            r * r
        })
        .sum();
    Ok(PowerLawFit {
        exponent,
        log_coefficient,
        residual_rms: (sse / n).sqrt(),
        n: lx.len(),
    })
}
