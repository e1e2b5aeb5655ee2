//! Run configuration: flags layered over an optional `key = value` document.
//!
//! ```text
//! # sweep.conf
//! family = GhzMix10
//! criterion = thm1, critI
//! k = 3, 4
//! resolution = 201
//! ```
//!
//! Keys are the long flag names without dashes (`state-file` and
//! `state_file` both work). A flag given on the command line replaces the
//! document's value.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use multipartite::criteria::{CriterionId, ElementFiducial};
use multipartite::qstate::{parse_state_document, DensityOperator, Family, ProductLabel};
use multipartite::twocopy::SwapFiducial;

use crate::error::CliError;

pub const KEYS: [&str; 19] = [
    "family",
    "state-file",
    "criterion",
    "k",
    "p",
    "q",
    "phi",
    "base",
    "omega",
    "resolution",
    "rays",
    "tol",
    "seed",
    "out",
    "format",
    "workers",
    "suite",
    "samples",
    "n",
];

/// Raw key/value settings before validation.
pub type Settings = BTreeMap<String, String>;

pub fn read_document(path: &Path) -> Result<Settings, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse_document(&text)
}

pub fn parse_document(text: &str) -> Result<Settings, CliError> {
    let mut out = Settings::new();
    for (idx, full) in text.lines().enumerate() {
        let line = full.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Validation(format!("config line {}: expected key = value", idx + 1)))?;
        let key = key.trim().replace('_', "-");
        if !KEYS.contains(&key.as_str()) {
            return Err(CliError::Validation(format!("config line {}: unknown key {key:?}", idx + 1)));
        }
        out.insert(key, value.trim().to_string());
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Text,
    Svg,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    Oracle,
    Soundness,
    Special,
    Observables,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Oracle, Suite::Soundness, Suite::Special, Suite::Observables];

    fn parse(s: &str) -> Result<Self, CliError> {
        match s.to_ascii_lowercase().as_str() {
            "oracle" => Ok(Suite::Oracle),
            "soundness" => Ok(Suite::Soundness),
            "special" => Ok(Suite::Special),
            "observables" => Ok(Suite::Observables),
            _ => Err(invalid(format!("unknown suite {s:?} (oracle, soundness, special, observables)"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Suite::Oracle => "oracle",
            Suite::Soundness => "soundness",
            Suite::Special => "special",
            Suite::Observables => "observables",
        }
    }
}

/// Where states come from.
#[derive(Clone, Debug)]
pub enum Source {
    Family(Family),
    /// A fixed state read from a state file.
    State(DensityOperator),
}

/// Validated settings shared by all commands.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub source: Option<Source>,
    pub criteria: Vec<CriterionId>,
    /// Empty means every admissible `k`.
    pub ks: Vec<usize>,
    pub p: f64,
    pub q: f64,
    pub phi: Option<SwapFiducial>,
    pub element: Option<ElementFiducial>,
    pub resolution: usize,
    pub rays: usize,
    pub tol: f64,
    pub seed: u64,
    pub out: PathBuf,
    pub format: Option<Format>,
    pub workers: Option<usize>,
    pub suites: Vec<Suite>,
    pub samples: usize,
    pub n: Option<usize>,
}

fn invalid(msg: String) -> CliError {
    CliError::Validation(msg)
}

fn number<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value
        .trim()
        .parse()
        .map_err(|_| invalid(format!("--{key}: cannot parse {value:?}")))
}

fn list<T: std::str::FromStr>(key: &str, value: &str) -> Result<Vec<T>, CliError> {
    value
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| number(key, s))
        .collect()
}

/// `GhzMix<N>`, `WQutritMix`, or `custom` (two components from the state file).
fn parse_family(name: &str, state_file: Option<&Path>) -> Result<Family, CliError> {
    let lower = name.to_ascii_lowercase();
    if let Some(n) = lower.strip_prefix("ghzmix") {
        let sites = number("family", n)?;
        if !(2..=24).contains(&sites) {
            return Err(invalid(format!("GhzMix needs 2 to 24 sites, got {sites}")));
        }
        return Ok(Family::GhzMix { sites });
    }
    match lower.as_str() {
        "wqutritmix" => Ok(Family::WQutritMix),
        "custom" => {
            let path = state_file.ok_or_else(|| invalid("family custom needs --state-file".into()))?;
            Ok(load_state_document(path)?.into_family()?)
        }
        _ => Err(invalid(format!("unknown family {name:?} (GhzMix<N>, WQutritMix, custom)"))),
    }
}

fn load_state_document(path: &Path) -> Result<multipartite::qstate::StateDocument, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(parse_state_document(&text)?)
}

/// `A/B` with each side a product label.
fn parse_phi(value: &str) -> Result<SwapFiducial, CliError> {
    let (a, b) = value
        .split_once('/')
        .ok_or_else(|| invalid(format!("--phi expects LABEL/LABEL, got {value:?}")))?;
    Ok(SwapFiducial::new(ProductLabel::parse(a.trim())?, ProductLabel::parse(b.trim())?))
}

impl RunConfig {
    pub fn from_settings(s: &Settings) -> Result<Self, CliError> {
        let get = |k: &str| s.get(k).map(String::as_str);
        let state_file = get("state-file").map(PathBuf::from);

        let source = match (get("family"), &state_file) {
            (Some(f), path) => Some(Source::Family(parse_family(f, path.as_deref())?)),
            (None, Some(path)) => Some(Source::State(load_state_document(path)?.into_density()?)),
            (None, None) => None,
        };

        let criteria = match get("criterion") {
            Some(v) => v
                .split(',')
                .filter(|c| !c.trim().is_empty())
                .map(|c| {
                    CriterionId::from_code(c.trim())
                        .ok_or_else(|| invalid(format!("unknown criterion {:?}", c.trim())))
                })
                .collect::<Result<Vec<_>, _>>()?,
            None => Vec::new(),
        };

        let mut ks: Vec<usize> = get("k").map(|v| list("k", v)).transpose()?.unwrap_or_default();
        ks.sort_unstable();
        ks.dedup();

        let element = match (get("base"), get("omega")) {
            (None, None) => None,
            (Some(b), Some(o)) => Some(ElementFiducial::new(ProductLabel::parse(b)?, list("omega", o)?)?),
            _ => return Err(invalid("--base and --omega must be given together".into())),
        };

        let format = get("format")
            .map(|f| match f.to_ascii_lowercase().as_str() {
                "csv" => Ok(Format::Csv),
                "text" => Ok(Format::Text),
                "svg" => Ok(Format::Svg),
                "all" => Ok(Format::All),
                _ => Err(invalid(format!("unknown format {f:?} (csv, text, svg, all)"))),
            })
            .transpose()?;

        let suites = match get("suite") {
            Some(v) if !v.eq_ignore_ascii_case("all") => {
                let mut out = v.split(',').map(|x| Suite::parse(x.trim())).collect::<Result<Vec<_>, _>>()?;
                out.sort_unstable();
                out.dedup();
                out
            }
            _ => Suite::ALL.to_vec(),
        };

        let cfg = RunConfig {
            source,
            criteria,
            ks,
            p: get("p").map(|v| number("p", v)).transpose()?.unwrap_or(0.0),
            q: get("q").map(|v| number("q", v)).transpose()?.unwrap_or(0.0),
            phi: get("phi").map(parse_phi).transpose()?,
            element,
            resolution: get("resolution").map(|v| number("resolution", v)).transpose()?.unwrap_or(201),
            rays: get("rays").map(|v| number("rays", v)).transpose()?.unwrap_or(64),
            tol: get("tol")
                .map(|v| number("tol", v))
                .transpose()?
                .unwrap_or(multipartite::config::BISECT_TOL),
            seed: get("seed").map(|v| number("seed", v)).transpose()?.unwrap_or(0),
            out: get("out").map(PathBuf::from).unwrap_or_else(|| PathBuf::from(".")),
            format,
            workers: get("workers").map(|v| number("workers", v)).transpose()?,
            suites,
            samples: get("samples").map(|v| number("samples", v)).transpose()?.unwrap_or(100),
            n: get("n").map(|v| number("n", v)).transpose()?,
        };
        cfg.check_ranges()?;
        Ok(cfg)
    }

    fn check_ranges(&self) -> Result<(), CliError> {
        if self.resolution < 2 {
            return Err(invalid(format!("--resolution must be at least 2, got {}", self.resolution)));
        }
        if self.rays < 2 {
            return Err(invalid(format!("--rays must be at least 2, got {}", self.rays)));
        }
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return Err(invalid(format!("--tol must lie in (0, 1), got {}", self.tol)));
        }
        if self.workers == Some(0) {
            return Err(invalid("--workers must be positive".into()));
        }
        if self.samples == 0 {
            return Err(invalid("--samples must be positive".into()));
        }
        Ok(())
    }

    pub fn family(&self) -> Result<&Family, CliError> {
        match &self.source {
            Some(Source::Family(f)) => Ok(f),
            Some(Source::State(_)) => Err(invalid(
                "sweeps need a family; use --family custom with a two-component state file".into(),
            )),
            None => Err(invalid("no --family given".into())),
        }
    }

    pub fn require_criteria(&self) -> Result<&[CriterionId], CliError> {
        if self.criteria.is_empty() {
            Err(invalid("no --criterion given".into()))
        } else {
            Ok(&self.criteria)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn settings(pairs: &[(&str, &str)]) -> Settings {
        pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
    }

    #[test]
    fn document_keys_are_normalized() {
        let s = parse_document("# run\nfamily = GhzMix10\nstate_file = a.txt # trailing\n\nk=3,4\n").unwrap();
        assert_eq!(s["family"], "GhzMix10");
        assert_eq!(s["state-file"], "a.txt");
        assert_eq!(s["k"], "3,4");
        assert!(parse_document("colour = red").is_err());
        assert!(parse_document("family GhzMix10").is_err());
    }

    #[test]
    fn parses_fiducials_and_lists() {
        let cfg = RunConfig::from_settings(&settings(&[
            ("family", "wqutritmix"),
            ("criterion", "thm2, THM4"),
            ("k", "3,2,3"),
            ("base", "0000"),
            ("omega", "1,2"),
            ("phi", "0000/2222"),
        ]))
        .unwrap();
        assert_eq!(cfg.criteria, vec![CriterionId::ElementProducibility, CriterionId::ElementSeparability]);
        assert_eq!(cfg.ks, vec![2, 3]);
        assert_eq!(cfg.element.unwrap().omega(), &[1, 2]);
        assert!(cfg.phi.is_some());
        assert!(matches!(cfg.source, Some(Source::Family(Family::WQutritMix))));
    }

    #[test]
    fn rejects_bad_values() {
        for bad in [
            vec![("family", "Cluster5")],
            vec![("criterion", "thm9")],
            vec![("base", "000")],
            vec![("resolution", "1")],
            vec![("phi", "000")],
            vec![("suite", "speed")],
            vec![("tol", "-1")],
        ] {
            assert!(matches!(RunConfig::from_settings(&settings(&bad)), Err(CliError::Validation(_))), "{bad:?}");
        }
        assert!(matches!(
            RunConfig::from_settings(&settings(&[("state-file", "/nonexistent/state.txt")])),
            Err(CliError::Io(_))
        ));
    }
}
