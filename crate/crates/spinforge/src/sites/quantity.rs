//! Published quantities with provenance.

use std::fmt;

use crate::error::{Error, Result};

/// Where a tabulated value comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    /// Measured in this work, possibly with a final-digit uncertainty.
    Measured,
    /// Taken from literature (`*`).
    Literature,
    /// Partially resolved by comparison with other sites (`**`).
    PartiallyResolved,
    /// Not resolved (`-`).
    Unresolved,
    /// Only bracketed, e.g. `0<g<1`.
    Bounded,
    /// Upper bound, e.g. `<=25`.
    UpperBound,
}

/// A tabulated value kept exactly as published.
#[derive(Debug, Clone, PartialEq)]
pub struct Quantity {
    /// Verbatim transcription, e.g. "1.870(5)", "0*", "-".
    pub text: String,
    pub value: Option<f64>,
    pub uncertainty: Option<f64>,
    /// Present for `Bounded` entries.
    pub bounds: Option<(f64, f64)>,
    pub provenance: Provenance,
}

impl Quantity {
    /// Parse a table-style entry.
    ///
    /// Grammar: `-` | `<=NUM` | `NUM<g<NUM` | `NUM[(INT)][*|**]` where the
    /// parenthesized integer is the uncertainty in units of the last digit.
    pub fn parse(text: &str) -> Result<Self> {
        let raw = text.trim();
        let make = |value, uncertainty, bounds, provenance| {
            Ok(Quantity { text: raw.to_string(), value, uncertainty, bounds, provenance })
        };
        if raw == "-" {
            return make(None, None, None, Provenance::Unresolved);
        }
        if let Some(rest) = raw.strip_prefix("<=").or_else(|| raw.strip_prefix("≤")) {
            let v = parse_num(rest.trim(), raw)?;
            return make(Some(v), None, None, Provenance::UpperBound);
        }
        let squeezed: String = raw.chars().filter(|c| !c.is_whitespace()).collect();
        if let Some((lo_s, hi_s)) = split_bounded(&squeezed) {
            let lo = parse_num(&lo_s, raw)?;
            let hi = parse_num(&hi_s, raw)?;
            return make(None, None, Some((lo, hi)), Provenance::Bounded);
        }

        let (body, provenance) = if let Some(b) = squeezed.strip_suffix("**") {
            (b.to_string(), Provenance::PartiallyResolved)
        } else if let Some(b) = squeezed.strip_suffix('*') {
            (b.to_string(), Provenance::Literature)
        } else {
            (squeezed.clone(), Provenance::Measured)
        };

        if let Some((num, unc)) = body.split_once('(') {
            let unc = unc
                .strip_suffix(')')
                .ok_or_else(|| Error::parse(format!("unbalanced parenthesis in '{raw}'")))?;
            let value = parse_num(num, raw)?;
            let digits: u32 =
                unc.parse().map_err(|_| Error::parse(format!("bad uncertainty in '{raw}'")))?;
            let decimals = num.split('.').nth(1).map_or(0, str::len) as i32;
            let uncertainty = digits as f64 * 10f64.powi(-decimals);
            make(Some(value), Some(uncertainty), None, provenance)
        } else {
            make(Some(parse_num(&body, raw)?), None, None, provenance)
        }
    }
}

fn split_bounded(s: &str) -> Option<(String, String)> {
    // accepts 0<g<1 and 0<x<1 style entries
    let parts: Vec<&str> = s.split('<').collect();
    if parts.len() == 3 && parts[1].chars().all(|c| c.is_ascii_alphabetic()) {
        return Some((parts[0].to_string(), parts[2].to_string()));
    }
    None
}

fn parse_num(s: &str, context: &str) -> Result<f64> {
    s.parse().map_err(|_| Error::parse(format!("cannot parse number '{s}' in '{context}'")))
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(&self.text)
    }
}
