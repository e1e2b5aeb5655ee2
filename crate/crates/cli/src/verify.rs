//! Seeded self-checks: two-copy oracle agreement, soundness on random
//! producible and separable states, recovery of the flat-index criteria, and
//! the local-observable identities.

use multipartite::baselines::{density_element_separability, density_ghz_separability};
use multipartite::criteria::{
    element_producibility, element_separability, swap_producibility, swap_separability,
    ElementFiducial,
};
use multipartite::ensembles::{haar_vector, random_mixed, PartitionMode};
use multipartite::observables::{build_element_observables, build_swap_observables, SwapObservables};
use multipartite::qstate::{DensityOperator, DimensionVector, LocalVector, ProductLabel, ProductVector};
use multipartite::twocopy::{
    enumerate_proper_subsets, oracle_two_copy, partial_swap_expectation, swap_expectation,
    SwapFiducial,
};
use multipartite::C64;
use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{RunConfig, Suite};
use crate::error::CliError;

pub struct SuiteReport {
    pub suite: Suite,
    pub passed: bool,
    pub summary: String,
}

impl SuiteReport {
    pub fn line(&self) -> String {
        let status = if self.passed { "PASS" } else { "FAIL" };
        format!("{status} {}: {}", self.suite.name(), self.summary)
    }
}

fn validation(msg: String) -> CliError {
    CliError::Validation(msg)
}

fn qubits(n: usize) -> Result<DimensionVector, CliError> {
    Ok(DimensionVector::uniform(n, 2)?)
}

fn random_dense(dims: &DimensionVector, rng: &mut ChaCha8Rng) -> Result<DensityOperator, CliError> {
    let m = rng.random_range(1..=4);
    Ok(random_mixed(dims, PartitionMode::MaxPartSize(dims.sites()), m, rng)?)
}

fn random_product(dims: &DimensionVector, rng: &mut ChaCha8Rng) -> Result<ProductVector, CliError> {
    let locals = (0..dims.sites())
        .map(|s| LocalVector::new(haar_vector(dims.local(s), rng)))
        .collect::<multipartite::Result<Vec<_>>>()?;
    Ok(ProductVector::Local(locals))
}

fn random_element_fiducial(n: usize, d: usize, rng: &mut ChaCha8Rng) -> Result<ElementFiducial, CliError> {
    let base = ProductLabel::new((0..n).map(|_| rng.random_range(0..d)).collect::<Vec<_>>());
    let mut levels: Vec<usize> = (0..d).collect();
    levels.shuffle(rng);
    let t = rng.random_range(1..=d);
    Ok(ElementFiducial::new(base, levels[..t].to_vec())?)
}

fn oracle(cfg: &RunConfig, rng: &mut ChaCha8Rng) -> Result<SuiteReport, CliError> {
    let systems = match cfg.n {
        Some(n) if !(2..=5).contains(&n) => {
            return Err(validation(format!("oracle suite supports 2 to 5 qubits, got {n}")))
        }
        Some(n) => vec![qubits(n)?],
        None => vec![qubits(3)?, DimensionVector::uniform(2, 3)?],
    };
    let mut compared = 0usize;
    let mut worst = 0.0f64;
    for dims in &systems {
        let labels: Vec<ProductLabel> = (0..dims.total()).map(|i| dims.label_at(i)).collect();
        let subsets: Vec<_> = enumerate_proper_subsets(dims.sites())?.collect();
        for _ in 0..cfg.samples {
            let rho = random_dense(dims, rng)?;
            let dense = rho.to_dense()?;
            let mut fids = Vec::new();
            if dims.total() <= 9 {
                for a in &labels {
                    for b in &labels {
                        fids.push(SwapFiducial::new(a.clone(), b.clone()));
                    }
                }
            } else {
                for _ in 0..16 {
                    let a = labels[rng.random_range(0..labels.len())].clone();
                    let b = labels[rng.random_range(0..labels.len())].clone();
                    fids.push(SwapFiducial::new(a, b));
                }
            }
            for _ in 0..4 {
                fids.push(SwapFiducial::new(random_product(dims, rng)?, random_product(dims, rng)?));
            }
            for fid in &fids {
                let full = oracle_two_copy(&dense, fid, None)?;
                worst = worst.max((full - swap_expectation(&rho, fid)?).abs());
                compared += 1;
                for &alpha in &subsets {
                    let o = oracle_two_copy(&dense, fid, Some(alpha))?;
                    worst = worst.max((o - partial_swap_expectation(&rho, fid, alpha)?).abs());
                    compared += 1;
                }
            }
        }
    }
    Ok(SuiteReport {
        suite: Suite::Oracle,
        passed: worst < 1e-10,
        summary: format!("{compared} comparisons, max deviation {worst:.3e} (tolerance 1e-10)"),
    })
}

fn soundness(cfg: &RunConfig, rng: &mut ChaCha8Rng) -> Result<SuiteReport, CliError> {
    let pairs: Vec<(usize, usize)> = match cfg.n {
        Some(n) if !(3..=8).contains(&n) => {
            return Err(validation(format!("soundness suite supports 3 to 8 sites, got {n}")))
        }
        Some(n) => (2..n).map(|k| (n, k)).collect(),
        None => vec![(4, 2), (4, 3), (5, 2)],
    };
    let mut evaluated = 0usize;
    let mut violations = Vec::new();
    for &(n, k) in &pairs {
        let dims = qubits(n)?;
        for sample in 0..cfg.samples {
            let components = 1 + sample % 6;
            let fid = if rng.random_bool(0.5) {
                let label = |rng: &mut ChaCha8Rng| ProductLabel::new((0..n).map(|_| rng.random_range(0..2)).collect::<Vec<_>>());
                SwapFiducial::new(label(rng), label(rng))
            } else {
                SwapFiducial::new(random_product(&dims, rng)?, random_product(&dims, rng)?)
            };
            let efid = random_element_fiducial(n, 2, rng)?;
            let producible = random_mixed(&dims, PartitionMode::MaxPartSize(k), components, rng)?;
            let separable = random_mixed(&dims, PartitionMode::ExactlyKParts(k), components, rng)?;
            for v in [
                swap_producibility(&producible, &fid, k)?,
                element_producibility(&producible, &efid, k)?,
                swap_separability(&separable, &fid, k)?,
                element_separability(&separable, &efid, k)?,
            ] {
                evaluated += 1;
                if v.violated {
                    violations.push(format!("{} N={n} k={k} margin {:.3e}", v.criterion, v.margin));
                }
            }
        }
    }
    let mut summary = format!(
        "{evaluated} evaluations over (N,k) in {pairs:?}, {} violations",
        violations.len()
    );
    if let Some(first) = violations.first() {
        summary.push_str(&format!("; first: {first}"));
    }
    Ok(SuiteReport {
        suite: Suite::Soundness,
        passed: violations.is_empty(),
        summary,
    })
}

fn special(cfg: &RunConfig, rng: &mut ChaCha8Rng) -> Result<SuiteReport, CliError> {
    let systems = match cfg.n {
        Some(n) if !(2..=8).contains(&n) => {
            return Err(validation(format!("special suite supports 2 to 8 qubits, got {n}")))
        }
        Some(n) => vec![qubits(n)?],
        None => vec![qubits(3)?, DimensionVector::uniform(2, 3)?],
    };
    let mut worst = 0.0f64;
    let mut compared = 0usize;
    for dims in &systems {
        let n = dims.sites();
        let d = dims.local(0);
        let fid = SwapFiducial::lowest_highest(dims);
        let efid = ElementFiducial::lowest_with_all_excitations(n, d)?;
        // population coefficients coincide for qubits at every k, for qudits at k = N
        let element_ks: Vec<usize> = if d == 2 { (2..=n).collect() } else { vec![n] };
        for _ in 0..cfg.samples {
            let rho = random_dense(dims, rng)?;
            for k in 2..=n {
                let a = swap_separability(&rho, &fid, k)?;
                let b = density_ghz_separability(&rho, k)?;
                worst = worst.max((a.lhs - b.lhs).abs()).max((a.rhs - b.rhs).abs());
                compared += 1;
            }
            for &k in &element_ks {
                let a = element_separability(&rho, &efid, k)?;
                let b = density_element_separability(&rho, k)?;
                worst = worst.max((a.lhs - b.lhs).abs()).max((a.rhs - b.rhs).abs());
                compared += 1;
            }
        }
    }
    Ok(SuiteReport {
        suite: Suite::Special,
        passed: worst < 1e-10,
        summary: format!("{compared} comparisons, max deviation {worst:.3e} (tolerance 1e-10)"),
    })
}

fn residual(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn alternating(ms: &[DMatrix<C64>]) -> DMatrix<C64> {
    let mut acc = DMatrix::zeros(ms[0].nrows(), ms[0].ncols());
    for (idx, m) in ms.iter().enumerate() {
        let sign = if (idx + 1) % 2 == 0 { 1.0 } else { -1.0 };
        acc += m * C64::from(sign);
    }
    acc
}

fn observables(cfg: &RunConfig, rng: &mut ChaCha8Rng) -> Result<SuiteReport, CliError> {
    let sizes = match cfg.n {
        Some(n) if !(2..=6).contains(&n) => {
            return Err(validation(format!("observables suite supports 2 to 6 qubits, got {n}")))
        }
        Some(n) => vec![n],
        None => vec![2, 3, 4],
    };
    let mut worst_op = 0.0f64;
    let mut worst_ex = 0.0f64;
    for &n in &sizes {
        let dims = qubits(n)?;
        let fid = SwapFiducial::lowest_highest(&dims);
        let obs = build_swap_observables(&fid, &dims)?;
        let nn = C64::from(n as f64);
        worst_op = worst_op
            .max(residual(&alternating(&obs.m_l), &(&obs.m * nn)))
            .max(residual(&alternating(&obs.m_tilde_l), &(&obs.m_tilde * nn)));

        let efid = ElementFiducial::new(ProductLabel::filled(n, 0), vec![1])?;
        let eobs = build_element_observables(&efid, &dims, 0, 1, 1, 1)?;
        let a = ProductVector::Basis(ProductLabel::filled(n, 0).with_site(0, 1));
        let b = ProductVector::Basis(ProductLabel::filled(n, 0).with_site(1, 1));
        for _ in 0..cfg.samples {
            let rho = random_dense(&dims, rng)?;
            let z = rho.matrix_element(&fid.phi1, &fid.phi2)?;
            let em = rho.expectation(&obs.m)?.re;
            let emt = rho.expectation(&obs.m_tilde)?.re;
            worst_ex = worst_ex
                .max((em - 2.0 * z.re).abs())
                .max((emt + 2.0 * z.im).abs())
                .max((SwapObservables::reconstruct(em, emt) - z).norm());
            let w = rho.matrix_element(&a, &b)?;
            worst_ex = worst_ex
                .max((rho.expectation(&eobs.m)?.re - 4.0 * w.re).abs())
                .max((rho.expectation(&eobs.m_tilde)?.re + 4.0 * w.im).abs());
        }
    }
    Ok(SuiteReport {
        suite: Suite::Observables,
        passed: worst_op < 1e-12 && worst_ex < 1e-11,
        summary: format!(
            "N in {sizes:?}: operator residual {worst_op:.3e} (tolerance 1e-12), expectation deviation {worst_ex:.3e} (tolerance 1e-11)"
        ),
    })
}

/// Runs the selected suites in order, each from its own seeded stream.
pub fn run(cfg: &RunConfig) -> Result<Vec<SuiteReport>, CliError> {
    cfg.suites
        .iter()
        .map(|&suite| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(suite as u64));
            match suite {
                Suite::Oracle => oracle(cfg, &mut rng),
                Suite::Soundness => soundness(cfg, &mut rng),
                Suite::Special => special(cfg, &mut rng),
                Suite::Observables => observables(cfg, &mut rng),
            }
        })
        .collect()
}
