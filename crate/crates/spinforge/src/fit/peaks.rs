//! Peak extraction from spectra and spectrum stacks.

use crate::error::{Error, Result};
use crate::trace::SpectrumTrace;

/// One extracted peak.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    /// Sub-grid refined position, in the trace's x unit.
    pub x: f64,
    pub height: f64,
    /// FWHM estimate from half-maximum crossings, grid units.
    pub width: f64,
    /// Position uncertainty: half a grid step.
    pub uncertainty: f64,
}

/// Peaks per sweep slice, keyed by the slice coordinate (e.g. field).
#[derive(Debug, Clone, Default)]
pub struct PeakSet {
    pub slices: Vec<(f64, Vec<Peak>)>,
}

impl PeakSet {
    pub fn total_peaks(&self) -> usize {
        self.slices.iter().map(|(_, p)| p.len()).sum()
    }
}

/// Find local maxima above a prominence threshold in one trace.
///
/// Prominence is the height above the higher of the two bases, where each
/// base is the minimum between the peak and the nearest strictly higher
/// point (or the trace end). Positions are refined by a parabola through
/// the three points around the maximum; equal-height adjacent maxima
/// resolve to the lower x.
pub fn extract_peaks_1d(trace: &SpectrumTrace, min_prominence: f64) -> Result<Vec<Peak>> {
    let n = trace.len();
    if n < 3 {
        return Err(Error::invalid(format!("need at least 3 grid points per slice, got {n}")));
    }
    let y = &trace.y;
    let x = &trace.x;

    let mut peaks = Vec::new();
    for k in 1..n - 1 {
        // strict rise into k, non-rise out of k; plateaus resolve to lower x
        if !(y[k] > y[k - 1] && y[k] >= y[k + 1]) {
            continue;
        }
        let prominence = prominence_at(y, k);
        if prominence < min_prominence {
            continue;
        }

        // quadratic sub-grid refinement
        let (y0, y1, y2) = (y[k - 1], y[k], y[k + 1]);
        let denom = y0 - 2.0 * y1 + y2;
        let dx = x[k] - x[k - 1];
        let (pos, height) = if denom < 0.0 {
            let shift = 0.5 * (y0 - y2) / denom;
            (x[k] + shift * dx, y1 - 0.25 * (y0 - y2) * shift)
        } else {
            (x[k], y1)
        };

        peaks.push(Peak {
            x: pos,
            height,
            width: fwhm_estimate(x, y, k, height),
            uncertainty: 0.5 * dx,
        });
    }
    Ok(peaks)
}

fn prominence_at(y: &[f64], k: usize) -> f64 {
    let peak = y[k];
    let mut left_base = peak;
    for i in (0..k).rev() {
        if y[i] > peak {
            break;
        }
        left_base = left_base.min(y[i]);
    }
    let mut right_base = peak;
    for value in y.iter().skip(k + 1) {
        if *value > peak {
            break;
        }
        right_base = right_base.min(*value);
    }
    peak - left_base.max(right_base)
}

fn fwhm_estimate(x: &[f64], y: &[f64], k: usize, height: f64) -> f64 {
    let half = 0.5 * height;
    let mut left = x[0];
    for i in (0..k).rev() {
        if y[i] <= half {
            // linear interpolation of the crossing
            let t = (half - y[i]) / (y[i + 1] - y[i]);
            left = x[i] + t * (x[i + 1] - x[i]);
            break;
        }
    }
    let mut right = x[x.len() - 1];
    for i in k + 1..x.len() {
        if y[i] <= half {
            let t = (y[i - 1] - half) / (y[i - 1] - y[i]);
            right = x[i - 1] + t * (x[i] - x[i - 1]);
            break;
        }
    }
    (right - left).max(x[1] - x[0])
}

/// Extract peaks from a stack of traces keyed by a sweep coordinate.
pub fn extract_peaks(
    stack: &[(f64, SpectrumTrace)],
    min_prominence: f64,
) -> Result<PeakSet> {
    let mut slices = Vec::with_capacity(stack.len());
    for (key, trace) in stack {
        slices.push((*key, extract_peaks_1d(trace, min_prominence)?));
    }
    Ok(PeakSet { slices })
}
