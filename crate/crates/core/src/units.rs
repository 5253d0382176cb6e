//! Unit-suffixed length parsing.

use crate::error::{Error, Result};

/// Suffix and its decimal exponent.
const SUFFIXES: &[(&str, i64)] = &[
    ("nm", -9),
    ("um", -6),
    ("\u{b5}m", -6),
    ("\u{3bc}m", -6),
    ("mm", -3),
    ("m", 0),
];

/// Parses a length such as `"702nm"`, `"11.4 um"`, `"70mm"` or `"1m"` into metres.
///
/// Accepted suffixes are `nm`, `um`, `µm`, `μm`, `mm` and `m`. A suffix is mandatory
/// and the value must be finite. The unit is applied as a decimal exponent, so
/// `"5um"` is exactly the double nearest to `5e-6`.
pub fn parse_length(input: &str) -> Result<f64> {
    let err = |reason| Error::Length {
        input: input.to_string(),
        reason,
    };
    let trimmed = input.trim();
    let (number, scale) = SUFFIXES
        .iter()
        .find_map(|(suffix, scale)| trimmed.strip_suffix(suffix).map(|n| (n, *scale)))
        .ok_or_else(|| err("expected a unit suffix (nm, um, mm or m)"))?;
    let number = number.trim_end();
    if number.is_empty() {
        return Err(err("missing number"));
    }
    if number.contains(|c: char| c.is_alphabetic() && c != 'e' && c != 'E') {
        return Err(err("unrecognised unit"));
    }
    let (mantissa, exponent) = match number.find(['e', 'E']) {
        Some(i) => (&number[..i], &number[i + 1..]),
        None => (number, "0"),
    };
    let exponent: i64 = exponent.parse().map_err(|_| err("not a number"))?;
    let shifted = exponent
        .checked_add(scale)
        .ok_or_else(|| err("not a number"))?;
    let value: f64 = format!("{mantissa}e{shifted}")
        .parse()
        .map_err(|_| err("not a number"))?;
    if mantissa.is_empty() || !value.is_finite() {
        return Err(err("not a number"));
    }
    Ok(value)
}
