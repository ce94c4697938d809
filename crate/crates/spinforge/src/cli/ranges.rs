//! `start:end[unit]:count` range syntax shared by the CLI options.
//!
//! The unit suffix sits on the end token and applies to both endpoints:
//! `0:50mT:501`, `300:400MHz:201`, `0:4us:801`, `-12:40GHz:1301`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::trace::linspace;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RangeKind {
    /// Tesla after parsing (accepts T, mT, G).
    Field,
    /// MHz after parsing (accepts MHz, GHz).
    FrequencyMhz,
    /// GHz after parsing (accepts GHz, MHz).
    FrequencyGhz,
    /// µs after parsing (accepts us, ns, ms).
    TimeUs,
    /// ns after parsing (accepts ns, us).
    TimeNs,
    /// Degrees (accepts deg or bare).
    Angle,
}

/// A parsed, validated grid specification.
#[derive(Debug, Clone, Serialize)]
pub struct GridSpec {
    pub start: f64,
    pub end: f64,
    pub count: usize,
    pub kind: RangeKind,
    /// The original text, kept for reproducibility metadata.
    pub text: String,
}

impl GridSpec {
    pub fn values(&self) -> Vec<f64> {
        linspace(self.start, self.end, self.count)
    }
}

fn unit_factor(kind: RangeKind, unit: &str) -> Option<f64> {
    match kind {
        RangeKind::Field => match unit {
            "T" => Some(1.0),
            "mT" => Some(1e-3),
            "G" => Some(1e-4),
            "" => Some(1e-3), // bare field numbers read as mT
            _ => None,
        },
        RangeKind::FrequencyMhz => match unit {
            "MHz" | "" => Some(1.0),
            "GHz" => Some(1e3),
            _ => None,
        },
        RangeKind::FrequencyGhz => match unit {
            "GHz" | "" => Some(1.0),
            "MHz" => Some(1e-3),
            _ => None,
        },
        RangeKind::TimeUs => match unit {
            "us" | "" => Some(1.0),
            "ns" => Some(1e-3),
            "ms" => Some(1e3),
            _ => None,
        },
        RangeKind::TimeNs => match unit {
            "ns" | "" => Some(1.0),
            "us" => Some(1e3),
            _ => None,
        },
        RangeKind::Angle => match unit {
            "deg" | "" => Some(1.0),
            _ => None,
        },
    }
}

fn split_unit(token: &str) -> (&str, &str) {
    let idx = token
        .char_indices()
        .rev()
        .take_while(|(_, c)| c.is_ascii_alphabetic())
        .last()
        .map(|(i, _)| i)
        .unwrap_or(token.len());
    token.split_at(idx)
}

/// Parse `start:end[unit]:count`.
pub fn parse_range(text: &str, kind: RangeKind) -> Result<GridSpec> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::parse(format!(
            "range '{text}' must look like start:end[unit]:count, e.g. 0:50mT:501"
        )));
    }
    let (end_num, unit) = split_unit(parts[1].trim());
    let factor = unit_factor(kind, unit)
        .ok_or_else(|| Error::parse(format!("range '{text}': unit '{unit}' not valid here")))?;
    let start: f64 = parts[0]
        .trim()
        .parse()
        .map_err(|_| Error::parse(format!("range '{text}': bad start '{}'", parts[0])))?;
    let end: f64 = end_num
        .trim()
        .parse()
        .map_err(|_| Error::parse(format!("range '{text}': bad end '{}'", parts[1])))?;
    let count: usize = parts[2]
        .trim()
        .parse()
        .map_err(|_| Error::parse(format!("range '{text}': bad count '{}'", parts[2])))?;

    let (start, end) = (start * factor, end * factor);
    if count < 2 {
        return Err(Error::parse(format!("range '{text}': need at least 2 points")));
    }
    if end <= start || end.is_nan() || start.is_nan() {
        return Err(Error::parse(format!(
            "range '{text}': end must exceed start (degenerate range rejected)"
        )));
    }
    Ok(GridSpec { start, end, count, kind, text: text.to_string() })
}

/// Parse a field axis: x, y, z, or a comma-separated 3-vector.
pub fn parse_axis(text: &str) -> Result<nalgebra::Vector3<f64>> {
    match text.trim().to_ascii_lowercase().as_str() {
        "x" => return Ok(nalgebra::Vector3::x()),
        "y" => return Ok(nalgebra::Vector3::y()),
        "z" => return Ok(nalgebra::Vector3::z()),
        _ => {}
    }
    let comps: Vec<&str> = text.split(',').collect();
    if comps.len() != 3 {
        return Err(Error::parse(format!(
            "axis '{text}' must be x, y, z, or three comma-separated components"
        )));
    }
    let mut v = [0.0; 3];
    for (k, c) in comps.iter().enumerate() {
        v[k] = c
            .trim()
            .parse()
            .map_err(|_| Error::parse(format!("axis '{text}': bad component '{c}'")))?;
    }
    let axis = nalgebra::Vector3::new(v[0], v[1], v[2]);
    if axis.norm() == 0.0 {
        return Err(Error::parse(format!("axis '{text}' must be nonzero")));
    }
    Ok(axis)
}
