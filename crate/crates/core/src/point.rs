use std::fmt;

use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A point of a chart domain in `C^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChartPoint {
    coords: Vec<Complex64>,
}

impl ChartPoint {
    pub fn new(coords: Vec<Complex64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::DimensionMismatch { expected: 1, found: 0 });
        }
        if coords.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("chart point"));
        }
        Ok(ChartPoint { coords })
    }

    pub fn origin(n: usize) -> Self {
        ChartPoint {
            coords: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    /// Builds a point from interleaved real coordinates `(x_1, y_1, x_2, ...)`.
    pub fn from_real(t: &[f64]) -> Result<Self> {
        Self::new(real_to_complex(t))
    }

    pub fn n(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.coords
    }

    pub fn to_real(&self) -> Vec<f64> {
        complex_to_real(&self.coords)
    }
}

impl fmt::Display for ChartPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_complex_list(&self.coords))
    }
}

impl Serialize for ChartPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

pub(crate) fn real_to_complex(t: &[f64]) -> Vec<Complex64> {
    t.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect()
}

pub(crate) fn complex_to_real(z: &[Complex64]) -> Vec<f64> {
    z.iter().flat_map(|c| [c.re, c.im]).collect()
}

pub fn format_complex(z: Complex64) -> String {
    if z.im < 0.0 || (z.im == 0.0 && z.im.is_sign_negative()) {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

pub fn format_complex_list(zs: &[Complex64]) -> String {
    zs.iter().map(|&z| format_complex(z)).collect::<Vec<_>>().join(",")
}

/// Parses one `re+imi` literal. Pure reals (`0.5`) and pure imaginaries
/// (`2i`) are accepted as shorthands.
pub fn parse_complex(text: &str) -> std::result::Result<Complex64, String> {
    let s: String = text
        .trim()
        .chars()
        .map(|c| if c == '\u{2212}' { '-' } else { c })
        .filter(|c| !c.is_whitespace())
        .collect();
    let bad = || format!("malformed complex number `{}` (expected re+imi)", text.trim());
    if s.is_empty() {
        return Err(bad());
    }
    let Some(body) = s.strip_suffix('i') else {
        return s.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    // split at the last sign that is not leading and not part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => "1",
        "-" => "-1",
        other => other,
    };
    let re: f64 = re.parse().map_err(|_| bad())?;
    let im: f64 = im.parse().map_err(|_| bad())?;
    if !re.is_finite() || !im.is_finite() {
        return Err(bad());
    }
    Ok(Complex64::new(re, im))
}

/// Parses a comma-separated list such as `0.1+0.2i,0.3-0.1i`.
pub fn parse_complex_list(text: &str) -> std::result::Result<Vec<Complex64>, String> {
    text.split(',').map(parse_complex).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_literals() {
        assert_eq!(parse_complex("0.1+0.2i").unwrap(), Complex64::new(0.1, 0.2));
        assert_eq!(parse_complex("0.3-0.1i").unwrap(), Complex64::new(0.3, -0.1));
        assert_eq!(parse_complex("-1e-3+2E-2i").unwrap(), Complex64::new(-1e-3, 2e-2));
        assert_eq!(parse_complex("0+0i").unwrap(), Complex64::new(0.0, 0.0));
        assert_eq!(parse_complex("0.5").unwrap(), Complex64::new(0.5, 0.0));
        assert_eq!(parse_complex("-2i").unwrap(), Complex64::new(0.0, -2.0));
        assert_eq!(parse_complex("1-i").unwrap(), Complex64::new(1.0, -1.0));
        for bad in ["", "1+2j", "a+bi", "1++2i", "nan+0i", "1+2i3"] {
            assert!(parse_complex(bad).is_err(), "{bad}");
        }
        let list = parse_complex_list("0.1+0.2i,0.3-0.1i").unwrap();
        assert_eq!(list.len(), 2);
    }

    #[test]
    fn formatting_round_trips() {
        let zs = [Complex64::new(0.1, -0.25), Complex64::new(-3.0, 1e-17)];
        let text = format_complex_list(&zs);
        assert_eq!(parse_complex_list(&text).unwrap(), zs.to_vec());
    }

    #[test]
    fn point_rejects_non_finite() {
        assert!(ChartPoint::new(vec![Complex64::new(f64::INFINITY, 0.0)]).is_err());
        assert!(ChartPoint::new(vec![]).is_err());
    }
}
