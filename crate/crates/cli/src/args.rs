//! Parsers for command-line values.

use std::str::FromStr;

use quartic_core::continuation::{ParameterBox, PathSpec};
use quartic_core::Complex64;
use serde::Deserialize;

use crate::CliError;

#[derive(Deserialize)]
struct ComplexJson {
    re: f64,
    im: f64,
}

/// A complex number written as `1+2i`, `-3.5i`, `2`, or `{"re": 1, "im": 2}`.
pub fn parse_complex(text: &str) -> Result<Complex64, CliError> {
    let t = text.trim();
    let bad = || CliError::Parse(format!("cannot parse complex number {text:?}"));
    let z = if t.starts_with('{') {
        let c: ComplexJson = serde_json::from_str(t).map_err(|_| bad())?;
        Complex64::new(c.re, c.im)
    } else {
        let compact: String = t.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.contains('j') {
            return Err(bad());
        }
        // A bare `i` coefficient is accepted as 1.
        let normalized = match compact.as_str() {
            "i" | "+i" => "1i".to_string(),
            "-i" => "-1i".to_string(),
            s if s.ends_with("+i") || s.ends_with("-i") => format!("{}1i", &s[..s.len() - 1]),
            s => s.to_string(),
        };
        Complex64::from_str(&normalized).map_err(|_| bad())?
    };
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(bad());
    }
    Ok(z)
}

/// `re_min,re_max,im_min,im_max`.
pub fn parse_box(text: &str) -> Result<ParameterBox, CliError> {
    let parts: Vec<f64> = text
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Parse(format!("cannot parse box {text:?}; expected re_min,re_max,im_min,im_max")))?;
    let [a, b, c, d] = parts[..] else {
        return Err(CliError::Parse(format!("box {text:?} needs four numbers")));
    };
    ParameterBox::new(a, b, c, d).map_err(|e| CliError::Parse(e.to_string()))
}

/// A path as inline JSON, or `@file` holding JSON.
pub fn parse_path(text: &str) -> Result<PathSpec, CliError> {
    let json = match text.strip_prefix('@') {
        Some(file) => std::fs::read_to_string(file).map_err(|e| CliError::Parse(format!("cannot read {file}: {e}")))?,
        None => text.to_string(),
    };
    let path: PathSpec =
        serde_json::from_str(&json).map_err(|e| CliError::Parse(format!("invalid path JSON: {e}")))?;
    path.validate().map_err(|e| CliError::Parse(e.to_string()))?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn complex_forms() {
        assert_eq!(parse_complex("1+2i").unwrap(), c(1.0, 2.0));
        assert_eq!(parse_complex("-3-4i").unwrap(), c(-3.0, -4.0));
        assert_eq!(parse_complex("2.5").unwrap(), c(2.5, 0.0));
        assert_eq!(parse_complex("-0.5i").unwrap(), c(0.0, -0.5));
        assert_eq!(parse_complex("i").unwrap(), c(0.0, 1.0));
        assert_eq!(parse_complex("1-i").unwrap(), c(1.0, -1.0));
        assert_eq!(parse_complex("1e-3+2e1i").unwrap(), c(1e-3, 20.0));
        assert_eq!(parse_complex(r#"{"re": 1, "im": -2}"#).unwrap(), c(1.0, -2.0));
        for bad in ["", "1+2j", "abc", "1+2i+3", "inf", "NaN"] {
            assert!(parse_complex(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn boxes_and_paths() {
        let b = parse_box("-6,0,-6,6").unwrap();
        assert_eq!((b.re_min, b.im_max), (-6.0, 6.0));
        assert!(parse_box("0,1,2").is_err());
        assert!(parse_box("1,0,0,1").is_err());
        let p = parse_path(r#"{"kind":"circle","center":{"re":1,"im":0},"radius":0.5,"turns":1,"start_angle":0}"#).unwrap();
        assert!(p.is_closed());
        assert!(parse_path(r#"{"kind":"polyline","points":[{"re":0,"im":0}]}"#).is_err());
    }
}
