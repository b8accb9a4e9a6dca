//! Histogram, cumulative distribution and normality summaries of
//! per-community quantities.

use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};

pub const DEFAULT_BINS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bin {
    pub lower: f64,
    pub width: f64,
    pub count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CumulativePoint {
    pub value: f64,
    /// Fraction of samples `<= value`.
    pub fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistributionSummary {
    pub variable: String,
    pub count: usize,
    pub mean: f64,
    /// Sample standard deviation (n - 1 denominator).
    pub std_dev: f64,
    /// Adjusted Fisher-Pearson skewness; needs three values and nonzero spread.
    pub skewness: Option<f64>,
    /// Unbiased excess kurtosis; needs four values and nonzero spread.
    pub excess_kurtosis: Option<f64>,
    pub histogram: Vec<Bin>,
    pub cumulative: Vec<CumulativePoint>,
    /// Kolmogorov-Smirnov distance to N(mean, std_dev). `None` when the
    /// spread is zero.
    pub ks_stat: Option<f64>,
}

impl DistributionSummary {
    pub fn is_degenerate(&self) -> bool {
        self.ks_stat.is_none()
    }
}

pub fn summarize(variable: &str, values: &[f64], bins: usize) -> Result<DistributionSummary> {
    if values.len() < 2 {
        return Err(Error::TooFewValues {
            needed: 2,
            got: values.len(),
        });
    }
    if bins == 0 {
        return Err(Error::InvalidParameter(
            "bin count must be at least 1".into(),
        ));
    }
    if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter(format!("non-finite value {bad}")));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;

    let mean = sorted.iter().sum::<f64>() / n;
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for &x in &sorted {
        let d = x - mean;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    let std_dev = (m2 / (n - 1.0)).sqrt();
    let spread = std_dev > 0.0;
    let (m2, m3, m4) = (m2 / n, m3 / n, m4 / n);
    let skewness = (spread && sorted.len() >= 3).then(|| {
        let g1 = m3 / m2.powf(1.5);
        (n * (n - 1.0)).sqrt() / (n - 2.0) * g1
    });
    let excess_kurtosis = (spread && sorted.len() >= 4).then(|| {
        let g2 = m4 / (m2 * m2) - 3.0;
        (n - 1.0) / ((n - 2.0) * (n - 3.0)) * ((n + 1.0) * g2 + 6.0)
    });

    let ks_stat = if spread {
        let normal = Normal::new(mean, std_dev)
            .map_err(|e| Error::Invariant(format!("normal fit failed: {e}")))?;
        let mut d: f64 = 0.0;
        for (i, &x) in sorted.iter().enumerate() {
            let f = normal.cdf(x);
            d = d.max(f - i as f64 / n).max((i + 1) as f64 / n - f);
        }
        Some(d.clamp(0.0, 1.0))
    } else {
        None
    };

    Ok(DistributionSummary {
        variable: variable.to_owned(),
        count: sorted.len(),
        mean,
        std_dev,
        skewness,
        excess_kurtosis,
        histogram: histogram(&sorted, bins),
        cumulative: cumulative(&sorted),
        ks_stat,
    })
}

fn histogram(sorted: &[f64], bins: usize) -> Vec<Bin> {
    let (lo, hi) = (sorted[0], sorted[sorted.len() - 1]);
    if lo == hi {
        return vec![Bin {
            lower: lo,
            width: 0.0,
            count: sorted.len(),
        }];
    }
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0usize; bins];
    for &x in sorted {
        let i = (((x - lo) / width) as usize).min(bins - 1);
        counts[i] += 1;
    }
    counts
        .into_iter()
        .enumerate()
        .map(|(i, count)| Bin {
            lower: lo + i as f64 * width,
            width,
            count,
        })
        .collect()
}

fn cumulative(sorted: &[f64]) -> Vec<CumulativePoint> {
    let n = sorted.len() as f64;
    let mut out: Vec<CumulativePoint> = Vec::new();
    for (i, &x) in sorted.iter().enumerate() {
        let fraction = (i + 1) as f64 / n;
        match out.last_mut() {
            Some(last) if last.value == x => last.fraction = fraction,
            _ => out.push(CumulativePoint { value: x, fraction }),
        }
    }
    out
}
