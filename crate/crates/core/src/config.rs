//! Model configuration files.
//!
//! ```toml
//! range = 3
//! hop = [[12, 0], [7, 28], [4, 5]]   # hop[l] = A_{0,l} as [re, im]
//! pair = [[-11, 10], [-3, 4]]        # pair[l] = B_{0,l}, l = 1..range
//! ```
//!
//! or the nearest-neighbour shorthand
//!
//! ```toml
//! nn = { gamma = 1.0, h = 1.0, D = 2.0 }
//! ```
//!
//! `range` may be omitted when `hop` is given. The output of
//! [`ModelSpec::canonical`] is itself a valid configuration.

use std::ops::Range;
use std::path::Path;

use num_complex::Complex64;
use serde::Deserialize;
use toml::Spanned;

use crate::error::{Error, Result};
use crate::model::ModelSpec;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    range: Option<Spanned<i64>>,
    hop: Option<Spanned<Vec<Spanned<Vec<f64>>>>>,
    pair: Option<Spanned<Vec<Spanned<Vec<f64>>>>>,
    nn: Option<Spanned<RawNn>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNn {
    gamma: f64,
    h: f64,
    #[serde(rename = "D")]
    d: f64,
}

fn line_of(text: &str, span: Range<usize>) -> usize {
    text[..span.start.min(text.len())].matches('\n').count() + 1
}

fn err(text: &str, span: Range<usize>, message: impl Into<String>) -> Error {
    Error::Config { line: line_of(text, span), message: message.into() }
}

fn coefficients(text: &str, raw: &Spanned<Vec<Spanned<Vec<f64>>>>, name: &str) -> Result<Vec<Complex64>> {
    raw.get_ref()
        .iter()
        .enumerate()
        .map(|(i, v)| match v.get_ref().as_slice() {
            [re, im] if re.is_finite() && im.is_finite() => Ok(Complex64::new(*re, *im)),
            [_, _] => Err(err(text, v.span(), format!("{name}[{i}] is not finite"))),
            _ => Err(err(text, v.span(), format!("{name}[{i}] must be a [re, im] pair"))),
        })
        .collect()
}

/// Parse a model configuration.
pub fn parse_model(text: &str) -> Result<ModelSpec> {
    let raw: RawModel = toml::from_str(text).map_err(|e| Error::Config {
        line: e.span().map(|s| line_of(text, s)).unwrap_or(1),
        message: e.message().to_string(),
    })?;
    if let Some(nn) = &raw.nn {
        for (key, present) in [("range", raw.range.is_some()), ("hop", raw.hop.is_some()), ("pair", raw.pair.is_some())] {
            if present {
                return Err(err(text, nn.span(), format!("`nn` cannot be combined with `{key}`")));
            }
        }
        let v = nn.get_ref();
        return ModelSpec::nearest_neighbor(v.gamma, v.h, v.d).map_err(|e| err(text, nn.span(), e.to_string()));
    }
    let Some(hop_raw) = &raw.hop else {
        return Err(Error::Config { line: 1, message: "missing `hop` (or `nn`)".into() });
    };
    let hop = coefficients(text, hop_raw, "hop")?;
    let pair = match &raw.pair {
        Some(p) => coefficients(text, p, "pair")?,
        None => Vec::new(),
    };
    let range = match &raw.range {
        Some(r) => {
            let v = *r.get_ref();
            if v < 1 {
                return Err(err(text, r.span(), "range must be a positive integer"));
            }
            v as usize
        }
        None => hop.len().max(pair.len() + 1),
    };
    if hop.len() > range {
        return Err(err(text, hop_raw.span(), format!("{} hop entries exceed range {range}", hop.len())));
    }
    if let Some(p) = &raw.pair {
        if pair.len() + 1 > range {
            return Err(err(text, p.span(), format!("{} pair entries exceed range {range}", pair.len())));
        }
    }
    if let Some(h0) = hop_raw.get_ref().first() {
        if hop[0].im != 0.0 {
            return Err(err(text, h0.span(), "hop[0] must be real (A is hermitian)"));
        }
    }
    ModelSpec::new(range, hop, pair).map_err(|e| err(text, hop_raw.span(), e.to_string()))
}

pub fn load_model(path: &Path) -> Result<ModelSpec> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config { line: 0, message: format!("{}: {e}", path.display()) })?;
    parse_model(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn explicit_model() {
        let m = parse_model("range = 3\nhop = [[12, 0], [7, 28], [4.0, 5.0]]\npair = [[-11, 10], [-3, 4]]\n").unwrap();
        assert_eq!(m.a(1), Complex64::new(7.0, 28.0));
        assert_eq!(m.b(-2), Complex64::new(3.0, -4.0));
    }

    #[test]
    fn nn_block_and_round_trip() {
        let m = parse_model("nn = { gamma = 1.0, h = 1.0, D = 2.0 }").unwrap();
        assert_eq!(m, ModelSpec::nearest_neighbor(1.0, 1.0, 2.0).unwrap());
        let back = parse_model(&m.canonical()).unwrap();
        assert_eq!(back.hash(), m.hash());
    }

    #[test]
    fn errors_carry_lines() {
        let line = |t: &str| match parse_model(t) {
            Err(Error::Config { line, .. }) => line,
            other => panic!("{other:?}"),
        };
        assert_eq!(line("range = 2\nhop = [[1, 0.5], [1, 0]]\n"), 2);
        assert_eq!(line("range = 2\nhop = [[1, 0], [1, 0]]\npair = [[1, 0], [2, 0]]\n"), 3);
        assert_eq!(line("range = 2\n\nhop = [[1, 0], [1]]\n"), 3);
        assert_eq!(line("range = 2\nhop = [[1, 0]]\nbogus = 1\n"), 3);
        assert_eq!(line("range = 2\nhop = [[1, 0]\n"), 2);
        assert_eq!(line("nn = { gamma = 1, h = 1, D = 0 }\nhop = [[1, 0]]\n"), 1);
    }
}
