//! Acceptance suite: one line per criterion, nonzero exit on any failure.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use multipartite::baselines::{
    collective_variance_threshold, density_element_separability, density_ghz_separability,
    fisher_producibility_bound, fisher_separability_bound, CollectiveOperator, FisherBaseline,
};
use multipartite::criteria::{
    element_producibility, element_separability, swap_producibility, swap_separability,
    CriterionId, ElementFiducial,
};
use multipartite::ensembles::{random_mixed, PartitionMode};
use multipartite::observables::{build_element_observables, build_swap_observables, SwapObservables};
use multipartite::qstate::{
    family_ghz_mix, w_qutrit_state, DenseState, DensityOperator, DimensionVector, Family,
    ProductLabel, ProductVector,
};
use multipartite::sweep::{
    curve_csv, grid_csv, grid_sweep, ray_threshold, threshold_curve, MarginEvaluator,
    SvgPlot, SweepCriterion,
};
use multipartite::twocopy::{
    enumerate_proper_subsets, oracle_two_copy, partial_swap_expectation, swap_expectation,
    SwapFiducial,
};
use multipartite::C64;
use nalgebra::DMatrix;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, elapsed: Duration, what: &str) -> Result<(), String> {
    ensure(elapsed < limit, || format!("{what} took {elapsed:.2?}, limit {limit:?}"))
}

fn qubits(n: usize) -> DimensionVector {
    DimensionVector::uniform(n, 2).unwrap()
}

fn basis_fiducials(dims: &DimensionVector) -> Vec<SwapFiducial> {
    let labels: Vec<ProductLabel> = (0..dims.total()).map(|i| dims.label_at(i)).collect();
    let mut out = Vec::new();
    for a in &labels {
        for b in &labels {
            out.push(SwapFiducial::new(a.clone(), b.clone()));
        }
    }
    out
}

fn two_copy_oracle() -> Check {
    let start = Instant::now();
    let mut compared = 0usize;
    let mut worst = 0.0f64;
    for (seed, dims) in [(101u64, qubits(3)), (202, DimensionVector::uniform(2, 3).unwrap())] {
        let mut rng = rng(seed);
        let fixed = basis_fiducials(&dims);
        for _ in 0..100 {
            let rho = random_dense(&dims, &mut rng);
            let d = dense(&rho);
            let mut fids = fixed.clone();
            for _ in 0..4 {
                fids.push(SwapFiducial::new(random_local_product(&dims, &mut rng), random_local_product(&dims, &mut rng)));
            }
            for fid in &fids {
                let o = oracle_two_copy(&d, fid, None).map_err(|e| e.to_string())?;
                worst = worst.max((o - swap_expectation(&rho, fid).unwrap()).abs());
                compared += 1;
                for alpha in enumerate_proper_subsets(dims.sites()).unwrap() {
                    let o = oracle_two_copy(&d, fid, Some(alpha)).map_err(|e| e.to_string())?;
                    worst = worst.max((o - partial_swap_expectation(&rho, fid, alpha).unwrap()).abs());
                    compared += 1;
                }
            }
        }
    }
    ensure(worst < 1e-10, || format!("max deviation {worst:.3e}"))?;
    within(Duration::from_secs(10), start.elapsed(), "oracle suite")?;
    Ok(format!("{compared} comparisons, max deviation {worst:.1e}, {:.2?}", start.elapsed()))
}

fn soundness() -> Check {
    let start = Instant::now();
    let mut evaluated = 0usize;
    let mut rng = rng(303);
    for (n, k) in [(4usize, 2usize), (4, 3), (5, 2)] {
        let dims = qubits(n);
        for sample in 0..500 {
            let rho = random_mixed(&dims, PartitionMode::MaxPartSize(k), 1 + sample % 6, &mut rng).unwrap();
            let fid = random_swap_fiducial(&dims, &mut rng);
            let efid = random_element_fiducial(n, 2, &mut rng);
            for v in [
                swap_producibility(&rho, &fid, k).unwrap(),
                element_producibility(&rho, &efid, k).unwrap(),
            ] {
                ensure(!v.violated, || format!("{} violated on a {k}-producible state (N={n}): margin {:.3e}", v.criterion, v.margin))?;
                evaluated += 1;
            }
            let rho = random_mixed(&dims, PartitionMode::ExactlyKParts(k), 1 + sample % 6, &mut rng).unwrap();
            for v in [
                swap_separability(&rho, &fid, k).unwrap(),
                element_separability(&rho, &efid, k).unwrap(),
            ] {
                ensure(!v.violated, || format!("{} violated on a {k}-separable state (N={n}): margin {:.3e}", v.criterion, v.margin))?;
                evaluated += 1;
            }
        }
    }
    within(Duration::from_secs(120), start.elapsed(), "soundness suite")?;
    Ok(format!("{evaluated} evaluations, 0 violations, {:.2?}", start.elapsed()))
}

fn evaluator(family: Family, id: CriterionId, k: usize) -> MarginEvaluator {
    let c = SweepCriterion::with_default_fiducials(id, &family).unwrap();
    MarginEvaluator::new(family, c, k).unwrap()
}

fn ghz_thresholds() -> Check {
    let mut found = Vec::new();
    for (id, k, want) in [
        (CriterionId::SwapProducibility, 3, 0.124787),
        (CriterionId::SwapProducibility, 4, 0.249634),
        (CriterionId::SwapSeparability, 3, 0.249634),
        (CriterionId::SwapSeparability, 4, 0.124787),
    ] {
        let start = Instant::now();
        let eval = evaluator(Family::GhzMix { sites: 10 }, id, k);
        let (p, q) = ray_threshold(&eval, 0.0, 1e-6).map_err(|e| e.to_string())?;
        ensure((p - want).abs() < 1e-4 && q == 0.0, || format!("{id} k={k}: p*={p:.6}, expected {want}"))?;
        within(Duration::from_secs(5), start.elapsed(), "threshold")?;
        found.push(format!("{id} k={k} p*={p:.6}"));
    }
    Ok(found.join("; "))
}

fn w_threshold() -> Check {
    let eval = evaluator(Family::WQutritMix, CriterionId::ElementProducibility, 2);
    let (p, _) = ray_threshold(&eval, 0.0, 1e-6).map_err(|e| e.to_string())?;
    ensure((p - 16.0 / 97.0).abs() < 1e-4, || format!("p*={p:.6}"))?;
    let w = DensityOperator::pure(w_qutrit_state().unwrap());
    let fid = ElementFiducial::lowest_with_all_excitations(4, 3).unwrap();
    for k in [2usize, 3] {
        let v = element_producibility(&w, &fid, k).unwrap();
        let rhs = 2.0 * (k - 1) as f64;
        ensure((v.lhs - 6.0).abs() < 1e-12 && (v.rhs - rhs).abs() < 1e-12, || {
            format!("k={k}: lhs {} rhs {}", v.lhs, v.rhs)
        })?;
    }
    Ok(format!("p*={p:.6}; pure W lhs 6, rhs 2(k-1) for k=2,3"))
}

fn baseline_bounds() -> Check {
    let got = [
        fisher_producibility_bound(10, 3),
        fisher_producibility_bound(10, 4),
        fisher_separability_bound(10, 3),
        fisher_separability_bound(10, 4),
        collective_variance_threshold(4, 3),
    ];
    ensure(got == [28.0, 36.0, 66.0, 52.0, 8.0], || format!("{got:?}"))?;
    Ok("critI 28/36, critII 66/52, critIII 8".into())
}

fn qfi_checks() -> Check {
    for n in 3..=6 {
        let rho: DensityOperator = dense(&DensityOperator::pure(multipartite::qstate::ghz_state(n).unwrap())).into();
        let f = FisherBaseline::new(n).unwrap().qfi(&rho).unwrap();
        ensure((f - (n * n) as f64).abs() < 1e-8, || format!("GHZ_{n}: F={f}"))?;
    }
    let mixed: DensityOperator = DenseState::maximally_mixed(qubits(4)).into();
    let f0 = FisherBaseline::new(4).unwrap().qfi(&mixed).unwrap();
    ensure(f0.abs() < 1e-10, || format!("maximally mixed F={f0}"))?;
    let mut rng = rng(404);
    let mut worst = 0.0f64;
    for i in 0..100 {
        let n = 2 + i % 4;
        let rho = random_pure(&qubits(n), &mut rng);
        let h = CollectiveOperator::half_sigma_z(n).unwrap();
        let hm = h.to_dense();
        let mean = rho.expectation(&hm).unwrap().re;
        let var = rho.expectation(&(&hm * &hm)).unwrap().re - mean * mean;
        let f = multipartite::baselines::qfi(&dense(&rho).into(), &h).unwrap();
        worst = worst.max((f - 4.0 * var).abs());
    }
    ensure(worst < 1e-8, || format!("pure-state deviation {worst:.3e}"))?;
    Ok(format!("GHZ_3..6 = N^2, mixed = {f0:.1e}, pure 4Var deviation {worst:.1e}"))
}

fn dominance() -> Check {
    let fid = SwapFiducial::lowest_highest(&qubits(10));
    let fisher = FisherBaseline::new(10).unwrap();
    let mut only_swap_prod = Vec::new();
    let mut only_swap_sep = Vec::new();
    for i in 0..=100 {
        let p = i as f64 / 100.0;
        let rho = family_ghz_mix(10, p, 0.0).unwrap();
        let t1 = swap_producibility(&rho, &fid, 3).unwrap();
        let c1 = fisher.producibility(&rho, 3).unwrap();
        if t1.violated && !c1.violated {
            only_swap_prod.push(p);
        }
        let t3 = swap_separability(&rho, &fid, 3).unwrap();
        let c2 = fisher.separability(&rho, 3).unwrap();
        if t3.violated && !c2.violated {
            only_swap_sep.push(p);
        }
    }
    ensure(only_swap_prod.contains(&0.14), || "p=0.14 not in the swap-only region".into())?;
    ensure(!only_swap_sep.is_empty(), || "no separability dominance point".into())?;
    Ok(format!(
        "k=3: {} grid points swap-only for producibility (incl. p=0.14), {} for separability (e.g. p={})",
        only_swap_prod.len(),
        only_swap_sep.len(),
        only_swap_sep[0]
    ))
}

fn special_cases() -> Check {
    let mut rng = rng(505);
    let mut worst = 0.0f64;
    for dims in [qubits(3), DimensionVector::uniform(2, 3).unwrap()] {
        let n = dims.sites();
        let d = dims.local(0);
        let fid = SwapFiducial::lowest_highest(&dims);
        let efid = ElementFiducial::lowest_with_all_excitations(n, d).unwrap();
        for _ in 0..200 {
            let rho = random_dense(&dims, &mut rng);
            for k in 2..=n {
                let a = swap_separability(&rho, &fid, k).unwrap();
                let b = density_ghz_separability(&rho, k).unwrap();
                worst = worst.max((a.lhs - b.lhs).abs()).max((a.rhs - b.rhs).abs());
            }
            // the population coefficients are (d−1)(N−k) and (N−k): equal for
            // qubits at every k, for qudits only at k = N
            for k in 2..=n {
                let a = element_separability(&rho, &efid, k).unwrap();
                let b = density_element_separability(&rho, k).unwrap();
                let scale = if k == n { 1.0 } else { (d - 1) as f64 };
                worst = worst.max((a.lhs - b.lhs).abs()).max((a.rhs - scale * b.rhs).abs());
            }
        }
    }
    ensure(worst < 1e-10, || format!("max deviation {worst:.3e}"))?;
    Ok(format!("400 states, max deviation {worst:.1e}"))
}

fn residual(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn observable_identities() -> Check {
    let mut worst_op = 0.0f64;
    for n in 2..=4 {
        let dims = qubits(n);
        let obs = build_swap_observables(&SwapFiducial::lowest_highest(&dims), &dims).unwrap();
        let mut sm = DMatrix::<C64>::zeros(dims.total(), dims.total());
        let mut st = sm.clone();
        for l in 0..n {
            let sign = C64::from(if (l + 1) % 2 == 0 { 1.0 } else { -1.0 });
            sm += &obs.m_l[l] * sign;
            st += &obs.m_tilde_l[l] * sign;
        }
        let nn = C64::from(n as f64);
        worst_op = worst_op.max(residual(&sm, &(&obs.m * nn))).max(residual(&st, &(&obs.m_tilde * nn)));
    }
    ensure(worst_op < 1e-12, || format!("operator residual {worst_op:.3e}"))?;

    let dims = qubits(3);
    let fid = SwapFiducial::lowest_highest(&dims);
    let obs = build_swap_observables(&fid, &dims).unwrap();
    let efid = ElementFiducial::new(ProductLabel::filled(3, 0), vec![1]).unwrap();
    let eobs = build_element_observables(&efid, &dims, 0, 1, 1, 1).unwrap();
    let a = ProductVector::Basis(ProductLabel::parse("100").unwrap());
    let b = ProductVector::Basis(ProductLabel::parse("010").unwrap());
    let mut rng = rng(606);
    let mut worst_ex = 0.0f64;
    for _ in 0..100 {
        let rho = random_dense(&dims, &mut rng);
        let z = rho.matrix_element(&fid.phi1, &fid.phi2).unwrap();
        let em = rho.expectation(&obs.m).unwrap().re;
        let emt = rho.expectation(&obs.m_tilde).unwrap().re;
        worst_ex = worst_ex.max((em - 2.0 * z.re).abs()).max((emt + 2.0 * z.im).abs());
        worst_ex = worst_ex.max((SwapObservables::reconstruct(em, emt).norm() - z.norm()).abs());
        let w = rho.matrix_element(&a, &b).unwrap();
        worst_ex = worst_ex.max((rho.expectation(&eobs.m).unwrap().re - 4.0 * w.re).abs());
        worst_ex = worst_ex.max((rho.expectation(&eobs.m_tilde).unwrap().re + 4.0 * w.im).abs());
    }
    ensure(worst_ex < 1e-11, || format!("expectation deviation {worst_ex:.3e}"))?;
    Ok(format!("operator residual {worst_op:.1e}, expectation deviation {worst_ex:.1e}"))
}

fn performance() -> Check {
    let rho = family_ghz_mix(10, 0.2, 0.1).unwrap();
    let fid = SwapFiducial::lowest_highest(&qubits(10));
    swap_producibility(&rho, &fid, 3).unwrap();
    let start = Instant::now();
    let v = swap_producibility(&rho, &fid, 3).unwrap();
    let single = start.elapsed();
    ensure((v.lhs - 1.565247584).abs() < 1e-6, || format!("lhs {}", v.lhs))?;
    within(Duration::from_millis(50), single, "single evaluation")?;

    let pool = rayon::ThreadPoolBuilder::new().num_threads(4).build().map_err(|e| e.to_string())?;
    let start = Instant::now();
    let (grid, curve) = pool.install(|| {
        let eval = evaluator(Family::GhzMix { sites: 10 }, CriterionId::SwapProducibility, 3);
        (grid_sweep(&eval, 201), threshold_curve(&eval, 64, 1e-6))
    });
    let sweep = start.elapsed();
    let grid = grid.map_err(|e| e.to_string())?;
    let curve = curve.map_err(|e| e.to_string())?;
    ensure(grid.evaluated().count() == 201 * 202 / 2, || "grid size".into())?;
    ensure(curve.vertices.len() == 64, || format!("{} vertices", curve.vertices.len()))?;
    within(Duration::from_secs(60), sweep, "grid sweep")?;
    Ok(format!("single evaluation {single:.2?}, 201x201 grid + 64-ray curve {sweep:.2?}"))
}

fn artifacts(seed: u64) -> (String, String, String, DensityOperator) {
    let eval = evaluator(Family::WQutritMix, CriterionId::ElementProducibility, 2);
    let grid = grid_sweep(&eval, 41).unwrap();
    let curve = threshold_curve(&eval, 16, 1e-6).unwrap();
    let mut plot = SvgPlot::new("WQutritMix");
    plot.region("thm2 k=2", &grid).curve("thm2 k=2", &curve);
    let mut rng = rng(seed);
    let rho = random_mixed(&qubits(4), PartitionMode::MaxPartSize(2), 4, &mut rng).unwrap();
    (grid_csv(&grid), curve_csv(&curve), plot.render(), rho)
}

fn determinism() -> Check {
    let a = artifacts(707);
    let b = artifacts(707);
    ensure(a.0 == b.0 && a.1 == b.1 && a.2 == b.2, || "exported artifacts differ".into())?;
    ensure(a.3 == b.3, || "seeded ensembles differ".into())?;
    Ok(format!("grid CSV {} bytes, curve CSV {} bytes, SVG {} bytes identical", a.0.len(), a.1.len(), a.2.len()))
}

fn main() -> ExitCode {
    let checks: [(&str, fn() -> Check); 11] = [
        ("two-copy oracle equivalence", two_copy_oracle),
        ("soundness on random producible/separable states", soundness),
        ("GHZ-family thresholds", ghz_thresholds),
        ("W-family threshold and pure W values", w_threshold),
        ("baseline bounds", baseline_bounds),
        ("quantum Fisher information", qfi_checks),
        ("dominance over Fisher baselines", dominance),
        ("flat-index special cases", special_cases),
        ("observable identities", observable_identities),
        ("performance", performance),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (idx, (name, check)) in checks.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS [{:02}] {name}: {detail}", idx + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL [{:02}] {name}: {why}", idx + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", checks.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
