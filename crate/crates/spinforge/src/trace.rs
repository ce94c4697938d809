//! Gridded 1-D traces with axis metadata.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Unit tag of a trace axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AxisUnit {
    GigaHertz,
    MegaHertz,
    MilliTesla,
    Nanoseconds,
    Microseconds,
    Dimensionless,
}

impl AxisUnit {
    pub fn symbol(&self) -> &'static str {
        match self {
            AxisUnit::GigaHertz => "GHz",
            AxisUnit::MegaHertz => "MHz",
            AxisUnit::MilliTesla => "mT",
            AxisUnit::Nanoseconds => "ns",
            AxisUnit::Microseconds => "us",
            AxisUnit::Dimensionless => "1",
        }
    }
}

/// (x, y) pairs on a strictly increasing grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectrumTrace {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub x_label: String,
    pub x_unit: AxisUnit,
    pub y_label: String,
}

impl SpectrumTrace {
    pub fn new(
        x: Vec<f64>,
        y: Vec<f64>,
        x_label: impl Into<String>,
        x_unit: AxisUnit,
        y_label: impl Into<String>,
    ) -> Result<Self> {
        if x.is_empty() {
            return Err(Error::invalid("trace grid must not be empty"));
        }
        if x.len() != y.len() {
            return Err(Error::DimensionMismatch(format!(
                "x has {} points, y has {}",
                x.len(),
                y.len()
            )));
        }
        if x.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid("trace grid must be strictly increasing"));
        }
        if x.iter().chain(y.iter()).any(|v| !v.is_finite()) {
            return Err(Error::invalid("trace values must be finite"));
        }
        Ok(SpectrumTrace { x, y, x_label: x_label.into(), x_unit, y_label: y_label.into() })
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    /// Trapezoidal integral of y over x.
    pub fn integral(&self) -> f64 {
        self.x
            .windows(2)
            .zip(self.y.windows(2))
            .map(|(xs, ys)| 0.5 * (ys[0] + ys[1]) * (xs[1] - xs[0]))
            .sum()
    }

    /// Intensity-weighted mean of x.
    pub fn centroid(&self) -> f64 {
        let weighted: f64 = self.x.iter().zip(&self.y).map(|(x, y)| x * y).sum();
        let total: f64 = self.y.iter().sum();
        weighted / total
    }
}

/// Evenly spaced grid with `n` points covering [lo, hi].
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let step = (hi - lo) / (n - 1) as f64;
    (0..n).map(|k| lo + step * k as f64).collect()
}
