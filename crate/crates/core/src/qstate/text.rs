//! Plain-text state documents.
//!
//! ```text
//! # comment
//! dims = 3,3,3,3          # or: sites = 4 and local_dim = 3
//! noise = 0.1             # white-noise weight, default 0
//!
//! [component 0.9]         # weight of the pure state that follows
//! 1000 = 0.5              # label = re [im]
//! 0100 = 0.5 0.5
//! ```
//!
//! Labels are digit strings, or comma-separated indices when a local
//! dimension exceeds 10. Component amplitudes are normalized on load; weights
//! plus noise must sum to 1.

use super::{DensityOperator, DimensionVector, Family, Mixture, ProductLabel, PureStateSparse};
use crate::{Error, Result, C64};

/// Parsed contents of a state document.
#[derive(Clone, Debug)]
pub struct StateDocument {
    pub dims: DimensionVector,
    pub noise: f64,
    pub components: Vec<(f64, PureStateSparse)>,
}

impl StateDocument {
    pub fn into_density(self) -> Result<DensityOperator> {
        Ok(Mixture::new(self.components, self.noise, self.dims)?.into())
    }

    /// Uses the first two components as the family's `p` and `q` states.
    /// Weights and noise in the document are ignored.
    pub fn into_family(self) -> Result<Family> {
        let mut it = self.components.into_iter();
        match (it.next(), it.next(), it.next()) {
            (Some((_, first)), Some((_, second)), None) => Ok(Family::Custom { first, second }),
            _ => Err(Error::Parse {
                line: 0,
                msg: "a custom family needs exactly two components".into(),
            }),
        }
    }
}

fn parse_f64(s: &str, line: usize) -> Result<f64> {
    s.trim().parse::<f64>().map_err(|_| Error::Parse {
        line,
        msg: format!("expected a number, got {s:?}"),
    })
}

fn parse_usize_list(s: &str, line: usize) -> Result<Vec<usize>> {
    s.split(',')
        .map(|x| {
            x.trim().parse::<usize>().map_err(|_| Error::Parse {
                line,
                msg: format!("expected an integer, got {x:?}"),
            })
        })
        .collect()
}

pub fn parse_state_document(text: &str) -> Result<StateDocument> {
    let mut dims: Option<Vec<usize>> = None;
    let mut sites: Option<usize> = None;
    let mut local_dim: Option<usize> = None;
    let mut noise = 0.0;
    // (weight, header line, terms)
    let mut raw: Vec<(f64, usize, Vec<(ProductLabel, C64, usize)>)> = Vec::new();

    for (idx, full) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = full.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| Error::Parse { line: line_no, msg };
        if let Some(header) = line.strip_prefix('[') {
            let inner = header
                .strip_suffix(']')
                .ok_or_else(|| err("unterminated section header".into()))?;
            let mut words = inner.split_whitespace();
            if words.next() != Some("component") {
                return Err(err(format!("unknown section [{inner}]")));
            }
            let weight = match words.next() {
                Some(w) => parse_f64(w, line_no)?,
                None => return Err(err("component needs a weight".into())),
            };
            raw.push((weight, line_no, Vec::new()));
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| err(format!("expected `key = value`, got {line:?}")))?;
        let (key, value) = (key.trim(), value.trim());
        if let Some((_, _, terms)) = raw.last_mut() {
            let label = ProductLabel::parse(key).map_err(|e| err(e.to_string()))?;
            let nums: Vec<&str> = value.split_whitespace().collect();
            let amp = match nums.as_slice() {
                [re] => C64::new(parse_f64(re, line_no)?, 0.0),
                [re, im] => C64::new(parse_f64(re, line_no)?, parse_f64(im, line_no)?),
                _ => return Err(err(format!("expected `re [im]`, got {value:?}"))),
            };
            terms.push((label, amp, line_no));
            continue;
        }
        match key {
            "dims" => dims = Some(parse_usize_list(value, line_no)?),
            "sites" => sites = Some(parse_usize_list(value, line_no)?[0]),
            "local_dim" => local_dim = Some(parse_usize_list(value, line_no)?[0]),
            "noise" => noise = parse_f64(value, line_no)?,
            other => return Err(err(format!("unknown key {other:?}"))),
        }
    }

    let dims = match (dims, sites, local_dim) {
        (Some(d), None, None) => DimensionVector::new(d)?,
        (None, Some(n), Some(d)) => DimensionVector::uniform(n, d)?,
        _ => {
            return Err(Error::Parse {
                line: 0,
                msg: "specify either `dims` or both `sites` and `local_dim`".into(),
            })
        }
    };

    let mut components = Vec::with_capacity(raw.len());
    for (weight, header, terms) in raw {
        for (label, _, line) in &terms {
            dims.check_label(label).map_err(|e| Error::Parse {
                line: *line,
                msg: e.to_string(),
            })?;
        }
        let psi = PureStateSparse::new(
            terms.into_iter().map(|(l, a, _)| (l, a)),
            dims.clone(),
        )
        .map_err(|e| Error::Parse {
            line: header,
            msg: e.to_string(),
        })?;
        components.push((weight, psi));
    }
    Ok(StateDocument {
        dims,
        noise,
        components,
    })
}
