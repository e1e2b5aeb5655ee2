use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use multipartite::criteria::{format_number, CriterionId, CriterionVerdict, ElementFiducial};
use multipartite::qstate::{DensityOperator, DimensionVector, FamilySpec};
use multipartite::sweep::{
    curve_csv, grid_csv, grid_sweep, threshold_curve, MarginEvaluator, SvgPlot, SweepCriterion,
};
use multipartite::twocopy::SwapFiducial;
use multipartite::Error;

use crate::config::{Format, RunConfig, Source};
use crate::error::CliError;

/// Builds a criterion with the configured fiducial overrides, falling back to
/// `(0…0, (d−1)…(d−1))` and base `0…0`, `Ω = {1, …, d−1}`.
pub fn build_criterion(id: CriterionId, cfg: &RunConfig, dims: &DimensionVector) -> Result<SweepCriterion, CliError> {
    let swap = || {
        let fid = cfg.phi.clone().unwrap_or_else(|| SwapFiducial::lowest_highest(dims));
        fid.check(dims).map(|_| fid)
    };
    let element = || -> multipartite::Result<ElementFiducial> {
        let fid = match &cfg.element {
            Some(f) => f.clone(),
            None => {
                let d = dims
                    .uniform_dim()
                    .ok_or_else(|| Error::UnequalDimensions(dims.dims().to_vec()))?;
                ElementFiducial::lowest_with_all_excitations(dims.sites(), d)?
            }
        };
        fid.check(dims)?;
        Ok(fid)
    };
    Ok(match id {
        CriterionId::SwapProducibility => SweepCriterion::SwapProducibility(swap()?),
        CriterionId::SwapSeparability => SweepCriterion::SwapSeparability(swap()?),
        CriterionId::ElementProducibility => SweepCriterion::ElementProducibility(element()?),
        CriterionId::ElementSeparability => SweepCriterion::ElementSeparability(element()?),
        CriterionId::ElementPairwise => SweepCriterion::ElementPairwise(element()?),
        CriterionId::FisherProducibility => SweepCriterion::FisherProducibility,
        CriterionId::FisherSeparability => SweepCriterion::FisherSeparability,
        CriterionId::CollectiveVariance => SweepCriterion::CollectiveVariance,
        CriterionId::DensityElementSeparability => SweepCriterion::DensityElementSeparability,
        CriterionId::DensityGhzSeparability => SweepCriterion::DensityGhzSeparability,
    })
}

/// Requested `k` values, or every `k` in `1..=N` that `accepts` when none
/// were requested. `accepts` reports an out-of-range `k` as `Ok(false)`.
fn resolve_ks(
    cfg: &RunConfig,
    sites: usize,
    id: CriterionId,
    mut accepts: impl FnMut(usize) -> Result<bool, CliError>,
) -> Result<Vec<usize>, CliError> {
    if !cfg.ks.is_empty() {
        return Ok(cfg.ks.clone());
    }
    let mut out = Vec::new();
    for k in 1..=sites {
        if accepts(k)? {
            out.push(k);
        }
    }
    if out.is_empty() {
        return Err(CliError::Validation(format!("{id} admits no k for {sites} sites")));
    }
    Ok(out)
}

fn in_range<T>(r: multipartite::Result<T>) -> Result<Option<T>, CliError> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::KOutOfRange { .. }) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

pub struct EvalOutput {
    pub verdicts: Vec<CriterionVerdict>,
}

impl EvalOutput {
    pub fn render(&self, format: Format) -> String {
        let mut out = String::new();
        match format {
            Format::Text => {
                let _ = writeln!(out, "{:<32} {:>3} {:>17} {:>17} {:>17}  {:<8} conclusion", "criterion", "k", "lhs", "rhs", "margin", "violated");
                for v in &self.verdicts {
                    let name = match &v.detail {
                        Some(d) => format!("{}[{d}]", v.criterion),
                        None => v.criterion.to_string(),
                    };
                    let _ = writeln!(
                        out,
                        "{name:<32} {:>3} {:>17} {:>17} {:>17}  {:<8} {}",
                        v.k,
                        format_number(v.lhs),
                        format_number(v.rhs),
                        format_number(v.margin),
                        v.violated,
                        v.conclusion
                    );
                }
            }
            _ => {
                out.push_str(CriterionVerdict::RECORD_HEADER);
                out.push('\n');
                for v in &self.verdicts {
                    out.push_str(&v.to_record());
                    out.push('\n');
                }
            }
        }
        out
    }

    pub fn warnings(&self) -> Vec<String> {
        let mut w: Vec<String> = self.verdicts.iter().flat_map(|v| v.warnings.iter().cloned()).collect();
        w.sort();
        w.dedup();
        w
    }
}

pub fn eval(cfg: &RunConfig) -> Result<EvalOutput, CliError> {
    let ids = cfg.require_criteria()?;
    let rho: DensityOperator = match &cfg.source {
        Some(Source::Family(f)) => FamilySpec::new(f.clone(), cfg.p, cfg.q)?.state()?,
        Some(Source::State(rho)) => rho.clone(),
        None => return Err(CliError::Validation("no --family or --state-file given".into())),
    };
    let dims = rho.dims().clone();
    let mut verdicts = Vec::new();
    for &id in ids {
        let criterion = build_criterion(id, cfg, &dims)?;
        if !criterion.uses_k() {
            verdicts.extend(criterion.evaluate(&rho, 2)?);
            continue;
        }
        let mut found = Vec::new();
        let ks = resolve_ks(cfg, dims.sites(), id, |k| {
            Ok(in_range(criterion.evaluate(&rho, k))?.map(|v| found.extend(v)).is_some())
        })?;
        if cfg.ks.is_empty() {
            verdicts.extend(found);
        } else {
            for k in ks {
                verdicts.extend(criterion.evaluate(&rho, k)?);
            }
        }
    }
    Ok(EvalOutput { verdicts })
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// Writes grid, curve and plot files; returns one summary line per file.
pub fn sweep(cfg: &RunConfig) -> Result<Vec<String>, CliError> {
    let family = cfg.family()?.clone();
    let ids = cfg.require_criteria()?;
    let format = cfg.format.unwrap_or(Format::All);
    if format == Format::Text {
        return Err(CliError::Validation("sweep writes csv, svg or all".into()));
    }
    let dims = family.dims()?;

    // every pairing is validated before anything runs
    let mut evaluators = Vec::new();
    for &id in ids {
        let criterion = build_criterion(id, cfg, &dims)?;
        if !criterion.uses_k() {
            evaluators.push(MarginEvaluator::new(family.clone(), criterion, 2)?);
            continue;
        }
        let mut found = Vec::new();
        let ks = resolve_ks(cfg, dims.sites(), id, |k| {
            Ok(in_range(MarginEvaluator::new(family.clone(), criterion.clone(), k))?
                .map(|e| found.push(e))
                .is_some())
        })?;
        if cfg.ks.is_empty() {
            evaluators.extend(found);
        } else {
            for k in ks {
                evaluators.push(MarginEvaluator::new(family.clone(), criterion.clone(), k)?);
            }
        }
    }

    fs::create_dir_all(&cfg.out).map_err(|e| CliError::Io(format!("{}: {e}", cfg.out.display())))?;

    let run = || -> Result<Vec<String>, CliError> {
        let mut log = Vec::new();
        let mut overlay = SvgPlot::new(&family.name());
        for eval in &evaluators {
            let grid = grid_sweep(eval, cfg.resolution)?;
            let curve = threshold_curve(eval, cfg.rays, cfg.tol)?;
            // file names carry the k that the verdicts record
            let k = eval.verdict(0.0, 0.0)?.k;
            let stem = format!("{}_{}_k{k}", family.name(), eval.criterion().id());
            let label = format!("{} k={k}", eval.criterion().id());
            if matches!(format, Format::Csv | Format::All) {
                let path = cfg.out.join(format!("{stem}_grid.csv"));
                write_file(&path, &grid_csv(&grid))?;
                log.push(format!("{} ({} points)", path.display(), grid.evaluated().count()));
                let path = cfg.out.join(format!("{stem}.csv"));
                write_file(&path, &curve_csv(&curve))?;
                log.push(format!(
                    "{} ({} vertices, {} rays without a threshold)",
                    path.display(),
                    curve.vertices.len(),
                    curve.skipped.len()
                ));
            }
            if matches!(format, Format::Svg | Format::All) {
                let mut plot = SvgPlot::new(&format!("{} {label}", family.name()));
                plot.region(&format!("{label} violated"), &grid).curve(&label, &curve);
                let path = cfg.out.join(format!("{stem}.svg"));
                write_file(&path, &plot.render())?;
                log.push(path.display().to_string());
            }
            overlay.curve(&label, &curve);
        }
        if matches!(format, Format::Svg | Format::All) {
            let path = cfg.out.join(format!("{}_overlay.svg", family.name()));
            write_file(&path, &overlay.render())?;
            log.push(path.display().to_string());
        }
        Ok(log)
    };

    match cfg.workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Validation(e.to_string()))?
            .install(run),
        None => run(),
    }
}
