//! Margins over the `(p, q)` simplex of a two-parameter family, threshold
//! points by bisection along rays, and CSV/SVG export.

mod export;

pub use export::{curve_csv, grid_csv, SvgPlot};

use std::f64::consts::FRAC_PI_2;

use rayon::prelude::*;

use crate::baselines::{
    collective_variance, density_element_separability, density_ghz_separability,
    fisher_producibility, fisher_separability, FisherBaseline, VarianceBaseline,
};
use crate::criteria::{
    element_pairwise, element_producibility, element_separability, swap_producibility,
    swap_separability, CriterionId, CriterionVerdict, ElementFiducial,
};
use crate::qstate::{DensityOperator, Family};
use crate::twocopy::SwapFiducial;
use crate::{Error, Result};

/// Maximum bisection steps along one ray.
pub const MAX_BISECT_ITERATIONS: usize = 60;

/// A criterion together with the fiducial it needs, if any.
#[derive(Clone, Debug, PartialEq)]
pub enum SweepCriterion {
    SwapProducibility(SwapFiducial),
    SwapSeparability(SwapFiducial),
    ElementProducibility(ElementFiducial),
    ElementSeparability(ElementFiducial),
    ElementPairwise(ElementFiducial),
    FisherProducibility,
    FisherSeparability,
    CollectiveVariance,
    DensityElementSeparability,
    DensityGhzSeparability,
}

impl SweepCriterion {
    pub fn id(&self) -> CriterionId {
        match self {
            SweepCriterion::SwapProducibility(_) => CriterionId::SwapProducibility,
            SweepCriterion::SwapSeparability(_) => CriterionId::SwapSeparability,
            SweepCriterion::ElementProducibility(_) => CriterionId::ElementProducibility,
            SweepCriterion::ElementSeparability(_) => CriterionId::ElementSeparability,
            SweepCriterion::ElementPairwise(_) => CriterionId::ElementPairwise,
            SweepCriterion::FisherProducibility => CriterionId::FisherProducibility,
            SweepCriterion::FisherSeparability => CriterionId::FisherSeparability,
            SweepCriterion::CollectiveVariance => CriterionId::CollectiveVariance,
            SweepCriterion::DensityElementSeparability => CriterionId::DensityElementSeparability,
            SweepCriterion::DensityGhzSeparability => CriterionId::DensityGhzSeparability,
        }
    }

    /// Preset fiducials: `(0…0, (d−1)…(d−1))` for the swap type and base
    /// `0…0` with `Ω = {1, …, d−1}` for the element type.
    pub fn with_default_fiducials(id: CriterionId, family: &Family) -> Result<Self> {
        let dims = family.dims()?;
        let swap = || SwapFiducial::lowest_highest(&dims);
        let element = || {
            let d = dims
                .uniform_dim()
                .ok_or_else(|| Error::UnequalDimensions(dims.dims().to_vec()))?;
            ElementFiducial::lowest_with_all_excitations(dims.sites(), d)
        };
        Ok(match id {
            CriterionId::SwapProducibility => SweepCriterion::SwapProducibility(swap()),
            CriterionId::SwapSeparability => SweepCriterion::SwapSeparability(swap()),
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

    /// Whether the verdict depends on the requested `k`.
    pub fn uses_k(&self) -> bool {
        !matches!(
            self,
            SweepCriterion::ElementPairwise(_) | SweepCriterion::CollectiveVariance
        )
    }

    /// Every verdict of this criterion on `rho`: one per inequality, so the
    /// pairwise family yields several and everything else yields one.
    pub fn evaluate(&self, rho: &DensityOperator, k: usize) -> Result<Vec<CriterionVerdict>> {
        Ok(match self {
            SweepCriterion::SwapProducibility(f) => vec![swap_producibility(rho, f, k)?],
            SweepCriterion::SwapSeparability(f) => vec![swap_separability(rho, f, k)?],
            SweepCriterion::ElementProducibility(f) => vec![element_producibility(rho, f, k)?],
            SweepCriterion::ElementSeparability(f) => vec![element_separability(rho, f, k)?],
            SweepCriterion::ElementPairwise(f) => element_pairwise(rho, f)?,
            SweepCriterion::FisherProducibility => vec![fisher_producibility(rho, k)?],
            SweepCriterion::FisherSeparability => vec![fisher_separability(rho, k)?],
            SweepCriterion::CollectiveVariance => vec![collective_variance(rho)?],
            SweepCriterion::DensityElementSeparability => vec![density_element_separability(rho, k)?],
            SweepCriterion::DensityGhzSeparability => vec![density_ghz_separability(rho, k)?],
        })
    }
}

/// Evaluates one criterion at one `k` across a family, with per-family
/// operators built once.
#[derive(Clone, Debug)]
pub struct MarginEvaluator {
    family: Family,
    criterion: SweepCriterion,
    k: usize,
    fisher: Option<FisherBaseline>,
    variance: Option<VarianceBaseline>,
}

impl MarginEvaluator {
    /// Rejects invalid family/criterion/k combinations up front by
    /// evaluating once at the maximally mixed corner.
    pub fn new(family: Family, criterion: SweepCriterion, k: usize) -> Result<Self> {
        let dims = family.dims()?;
        let fisher = match criterion {
            SweepCriterion::FisherProducibility | SweepCriterion::FisherSeparability => {
                if !dims.is_qubits() {
                    return Err(Error::NotQubits(dims.dims().to_vec()));
                }
                Some(FisherBaseline::new(dims.sites())?)
            }
            _ => None,
        };
        let variance = match criterion {
            SweepCriterion::CollectiveVariance => Some(VarianceBaseline::new(&dims)?),
            _ => None,
        };
        let eval = Self {
            family,
            criterion,
            k,
            fisher,
            variance,
        };
        eval.verdict(0.0, 0.0)?;
        Ok(eval)
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn criterion(&self) -> &SweepCriterion {
        &self.criterion
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Verdict at `(p, q)`. For the pairwise family the verdict with the
    /// largest margin is returned.
    pub fn verdict(&self, p: f64, q: f64) -> Result<CriterionVerdict> {
        let rho = self.family.state(p, q)?;
        let k = self.k;
        match &self.criterion {
            SweepCriterion::SwapProducibility(f) => swap_producibility(&rho, f, k),
            SweepCriterion::SwapSeparability(f) => swap_separability(&rho, f, k),
            SweepCriterion::ElementProducibility(f) => element_producibility(&rho, f, k),
            SweepCriterion::ElementSeparability(f) => element_separability(&rho, f, k),
            SweepCriterion::ElementPairwise(f) => element_pairwise(&rho, f)?
                .into_iter()
                .max_by(|a, b| a.margin.total_cmp(&b.margin))
                .ok_or_else(|| Error::Unsupported("no pairwise inequalities".into())),
            SweepCriterion::FisherProducibility => fisher(&self.fisher)?.producibility(&rho, k),
            SweepCriterion::FisherSeparability => fisher(&self.fisher)?.separability(&rho, k),
            SweepCriterion::CollectiveVariance => self
                .variance
                .as_ref()
                .ok_or_else(|| Error::Unsupported("variance baseline missing".into()))?
                .evaluate(&rho),
            SweepCriterion::DensityElementSeparability => density_element_separability(&rho, k),
            SweepCriterion::DensityGhzSeparability => density_ghz_separability(&rho, k),
        }
    }
}

fn fisher(f: &Option<FisherBaseline>) -> Result<&FisherBaseline> {
    f.as_ref()
        .ok_or_else(|| Error::Unsupported("Fisher baseline missing".into()))
}

/// One evaluated grid point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridPoint {
    pub p: f64,
    pub q: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub violated: bool,
}

/// Margins on `p = i/(R−1)`, `q = j/(R−1)`; entries with `i + j > R−1` lie
/// outside the simplex and are `None`.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepGrid {
    pub family: String,
    pub criterion: CriterionId,
    pub k: usize,
    pub resolution: usize,
    /// Indexed `[i][j]`.
    pub points: Vec<Vec<Option<GridPoint>>>,
}

impl SweepGrid {
    pub fn get(&self, i: usize, j: usize) -> Option<&GridPoint> {
        self.points.get(i)?.get(j)?.as_ref()
    }

    /// Evaluated points in `(i, j)` order.
    pub fn evaluated(&self) -> impl Iterator<Item = &GridPoint> {
        self.points.iter().flatten().flatten()
    }
}

pub fn grid_sweep(eval: &MarginEvaluator, resolution: usize) -> Result<SweepGrid> {
    if resolution < 2 {
        return Err(Error::Unsupported(format!("grid resolution {resolution} < 2")));
    }
    let step = (resolution - 1) as f64;
    let points = (0..resolution)
        .into_par_iter()
        .map(|i| {
            (0..resolution)
                .map(|j| {
                    if i + j > resolution - 1 {
                        return Ok(None);
                    }
                    let (p, q) = (i as f64 / step, j as f64 / step);
                    let v = eval.verdict(p, q)?;
                    Ok(Some(GridPoint {
                        p,
                        q,
                        lhs: v.lhs,
                        rhs: v.rhs,
                        margin: v.margin,
                        violated: v.violated,
                    }))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepGrid {
        family: eval.family.name(),
        criterion: eval.criterion.id(),
        k: eval.k,
        resolution,
        points,
    })
}

/// Largest `t` keeping `origin + t·dir` inside the simplex.
fn exit_parameter(origin: (f64, f64), dir: (f64, f64)) -> f64 {
    let mut t = f64::INFINITY;
    if dir.0 < 0.0 {
        t = t.min(-origin.0 / dir.0);
    }
    if dir.1 < 0.0 {
        t = t.min(-origin.1 / dir.1);
    }
    let s = dir.0 + dir.1;
    if s > 0.0 {
        t = t.min((1.0 - origin.0 - origin.1) / s);
    }
    t
}

/// Point on the ray from `origin` along `direction` where the violation
/// status flips, located to `tol` in parameter distance. The two ends of the
/// ray inside the simplex must differ in status.
pub fn threshold_bisect(
    eval: &MarginEvaluator,
    origin: (f64, f64),
    direction: (f64, f64),
    tol: f64,
) -> Result<(f64, f64)> {
    let len = direction.0.hypot(direction.1);
    if len.is_nan() || len <= 0.0 || tol.is_nan() || tol <= 0.0 {
        return Err(Error::Unsupported("degenerate ray or tolerance".into()));
    }
    let dir = (direction.0 / len, direction.1 / len);
    let t_max = exit_parameter(origin, dir);
    if !t_max.is_finite() || t_max <= 0.0 {
        return Err(Error::Unsupported("ray does not cross the simplex".into()));
    }
    let at = |t: f64| (origin.0 + t * dir.0, origin.1 + t * dir.1);
    let status = |t: f64| -> Result<bool> {
        let (p, q) = at(t);
        Ok(eval.verdict(p, q)?.violated)
    };
    let start = status(0.0)?;
    if status(t_max)? == start {
        return Err(Error::NoSignChange);
    }
    let (mut lo, mut hi) = (0.0, t_max);
    for _ in 0..MAX_BISECT_ITERATIONS {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if status(mid)? == start {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(at(0.5 * (lo + hi)))
}

/// Bisection along the ray from the origin at angle `angle` from the p axis.
pub fn ray_threshold(eval: &MarginEvaluator, angle: f64, tol: f64) -> Result<(f64, f64)> {
    threshold_bisect(eval, (0.0, 0.0), (angle.cos(), angle.sin()), tol)
}

/// `θ_j = j·(π/2)/(rays−1)`, `j = 0 … rays−1`.
pub fn ray_angles(rays: usize) -> Vec<f64> {
    (0..rays)
        .map(|j| j as f64 * FRAC_PI_2 / (rays - 1) as f64)
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurveVertex {
    pub ray: usize,
    pub angle: f64,
    pub p: f64,
    pub q: f64,
}

/// Threshold points on a fan of rays from the origin, ordered by angle.
#[derive(Clone, Debug, PartialEq)]
pub struct ThresholdCurve {
    pub family: String,
    pub criterion: CriterionId,
    pub k: usize,
    pub vertices: Vec<CurveVertex>,
    /// `(ray, angle)` of rays without a status change.
    pub skipped: Vec<(usize, f64)>,
}

pub fn threshold_curve(eval: &MarginEvaluator, rays: usize, tol: f64) -> Result<ThresholdCurve> {
    if rays < 2 {
        return Err(Error::Unsupported(format!("ray count {rays} < 2")));
    }
    let angles = ray_angles(rays);
    let results: Vec<(usize, f64, Option<(f64, f64)>)> = angles
        .par_iter()
        .enumerate()
        .map(|(j, &a)| match ray_threshold(eval, a, tol) {
            Ok(pt) => Ok((j, a, Some(pt))),
            Err(Error::NoSignChange) => Ok((j, a, None)),
            Err(e) => Err(e),
        })
        .collect::<Result<_>>()?;
    let mut curve = ThresholdCurve {
        family: eval.family.name(),
        criterion: eval.criterion.id(),
        k: eval.k,
        vertices: Vec::new(),
        skipped: Vec::new(),
    };
    for (ray, angle, pt) in results {
        match pt {
            Some((p, q)) => curve.vertices.push(CurveVertex { ray, angle, p, q }),
            None => curve.skipped.push((ray, angle)),
        }
    }
    Ok(curve)
}
