use crate::error::{Error, Result};

/// Exponential fit `y ~ exp(-rate * t)` on a window of samples.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayFit {
    /// Decay rate for [`fit_decay`], growth rate for [`fit_growth`]; 1/time.
    pub rate: f64,
    pub r_squared: f64,
    pub window: (f64, f64),
    pub points: usize,
    pub quantity: String,
}

/// Amplitude band, relative to the series maximum, in which decay is fitted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayPolicy {
    pub lo: f64,
    pub hi: f64,
}

impl Default for DecayPolicy {
    fn default() -> Self {
        Self { lo: 1e-8, hi: 1e-3 }
    }
}

/// Least-squares line through `(t, ln y)`; returns `(slope, r_squared)`.
fn log_line(t: &[f64], y: &[f64]) -> (f64, f64) {
    let n = t.len() as f64;
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let tm = t.iter().sum::<f64>() / n;
    let lm = ly.iter().sum::<f64>() / n;
    let (mut stt, mut sty, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in t.iter().zip(&ly) {
        stt += (a - tm) * (a - tm);
        sty += (a - tm) * (b - lm);
        syy += (b - lm) * (b - lm);
    }
    let slope = sty / stt;
    let r2 = if syy == 0.0 { 1.0 } else { (sty * sty / (stt * syy)).clamp(0.0, 1.0) };
    (slope, r2)
}

fn fit_range(t: &[f64], y: &[f64], i0: usize, i1: usize, sign: f64, quantity: &str) -> Result<DecayFit> {
    if i1 < i0 + 3 || y[i0..i1].iter().any(|v| !(*v > 0.0 && v.is_finite())) {
        return Err(Error::WindowEmpty);
    }
    let (slope, r_squared) = log_line(&t[i0..i1], &y[i0..i1]);
    Ok(DecayFit {
        rate: sign * slope,
        r_squared,
        window: (t[i0], t[i1 - 1]),
        points: i1 - i0,
        quantity: quantity.to_string(),
    })
}

/// Fit the decay rate over the first stretch where `y` lies inside the
/// amplitude band `[lo, hi] * max(y)`: from the first sample at or below
/// `hi * max` up to the first later sample below `lo * max`.
pub fn fit_decay(t: &[f64], y: &[f64], policy: DecayPolicy, quantity: &str) -> Result<DecayFit> {
    assert_eq!(t.len(), y.len(), "time and value series differ in length");
    let peak = y.iter().cloned().filter(|v| v.is_finite()).fold(0.0, f64::max);
    if peak <= 0.0 {
        return Err(Error::WindowEmpty);
    }
    let argmax = y.iter().position(|&v| v == peak).unwrap_or(0);
    let Some(i0) = (argmax..y.len()).find(|&i| y[i] <= policy.hi * peak) else {
        return Err(Error::WindowEmpty);
    };
    let i1 = (i0..y.len()).find(|&i| !(y[i] >= policy.lo * peak)).unwrap_or(y.len());
    fit_range(t, y, i0, i1, -1.0, quantity)
}

/// Fit a growth rate between the first samples reaching `from * y[0]` and
/// `to * y[0]`. Fails with `WindowEmpty` if the series never grows by `to`.
pub fn fit_growth(t: &[f64], y: &[f64], from: f64, to: f64, quantity: &str) -> Result<DecayFit> {
    assert_eq!(t.len(), y.len(), "time and value series differ in length");
    let Some(&y0) = y.first() else {
        return Err(Error::WindowEmpty);
    };
    let Some(i0) = y.iter().position(|&v| v >= from * y0) else {
        return Err(Error::WindowEmpty);
    };
    let Some(i1) = (i0..y.len()).find(|&i| y[i] >= to * y0) else {
        return Err(Error::WindowEmpty);
    };
    fit_range(t, y, i0, i1 + 1, 1.0, quantity)
}
