#![allow(dead_code)]

use multipartite::criteria::ElementFiducial;
use multipartite::ensembles::{haar_vector, random_mixed, random_pure_for_partition, PartitionMode, PartitionSpec};
use multipartite::qstate::{DenseState, DensityOperator, DimensionVector, LocalVector, ProductLabel, ProductVector};
use multipartite::twocopy::SwapFiducial;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_label(dims: &DimensionVector, rng: &mut ChaCha8Rng) -> ProductLabel {
    ProductLabel::new((0..dims.sites()).map(|s| rng.random_range(0..dims.local(s))).collect::<Vec<_>>())
}

pub fn random_local_product(dims: &DimensionVector, rng: &mut ChaCha8Rng) -> ProductVector {
    ProductVector::Local(
        (0..dims.sites())
            .map(|s| LocalVector::new(haar_vector(dims.local(s), rng)).unwrap())
            .collect(),
    )
}

/// Basis labels half of the time, Haar-random product vectors otherwise.
pub fn random_swap_fiducial(dims: &DimensionVector, rng: &mut ChaCha8Rng) -> SwapFiducial {
    if rng.random_bool(0.5) {
        SwapFiducial::new(random_label(dims, rng), random_label(dims, rng))
    } else {
        SwapFiducial::new(random_local_product(dims, rng), random_local_product(dims, rng))
    }
}

pub fn random_element_fiducial(sites: usize, d: usize, rng: &mut ChaCha8Rng) -> ElementFiducial {
    let base = ProductLabel::new((0..sites).map(|_| rng.random_range(0..d)).collect::<Vec<_>>());
    let mut levels: Vec<usize> = (0..d).collect();
    levels.shuffle(rng);
    let t = rng.random_range(1..=d);
    ElementFiducial::new(base, levels[..t].to_vec()).unwrap()
}

/// Full-rank-ish random dense state: a Haar mixture without constraints.
pub fn random_dense(dims: &DimensionVector, rng: &mut ChaCha8Rng) -> DensityOperator {
    let m = rng.random_range(1..=4);
    random_mixed(dims, PartitionMode::MaxPartSize(dims.sites()), m, rng).unwrap()
}

pub fn dense(rho: &DensityOperator) -> DenseState {
    rho.to_dense().unwrap()
}

/// Random pure state on the whole system, as a dense operator.
pub fn random_pure(dims: &DimensionVector, rng: &mut ChaCha8Rng) -> DensityOperator {
    let part = PartitionSpec::new(vec![(0..dims.sites()).collect()], dims.sites()).unwrap();
    let psi = random_pure_for_partition(&part, dims, rng).unwrap();
    DensityOperator::pure(psi)
}
