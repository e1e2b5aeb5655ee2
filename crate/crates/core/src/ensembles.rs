//! Random k-producible and k-separable states.
//!
//! Partitions are drawn exactly uniformly from the constrained set (by
//! counting, not rejection), pure factors are Haar-random via normalized
//! complex Gaussians, and mixing weights are Dirichlet(1, …, 1).

use std::fmt;

use rand::seq::index::sample;
use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::config::{DENSE_CAP, SUBSET_ENUM_MAX_SITES};
use crate::qstate::{DensityOperator, DimensionVector, Mixture, ProductLabel, PureStateSparse};
use crate::{Error, Result, C64};

/// Constraint on a random partition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PartitionMode {
    /// Every part has at most `k` sites (k-producible), `1 ≤ k ≤ N`.
    MaxPartSize(usize),
    /// Exactly `k` parts (k-separable), `2 ≤ k ≤ N`.
    ExactlyKParts(usize),
}

/// Disjoint site sets covering `0..N`, each sorted, ordered by least element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionSpec {
    parts: Vec<Vec<usize>>,
    sites: usize,
}

impl PartitionSpec {
    pub fn new(mut parts: Vec<Vec<usize>>, sites: usize) -> Result<Self> {
        let mut seen = vec![false; sites];
        for part in &mut parts {
            if part.is_empty() {
                return Err(Error::InfeasiblePartition("empty part".into()));
            }
            part.sort_unstable();
            for &s in part.iter() {
                if s >= sites || seen[s] {
                    return Err(Error::InfeasiblePartition(format!(
                        "site {s} repeated or out of range"
                    )));
                }
                seen[s] = true;
            }
        }
        if seen.iter().any(|&x| !x) {
            return Err(Error::InfeasiblePartition("parts do not cover all sites".into()));
        }
        parts.sort_by_key(|p| p[0]);
        Ok(Self { parts, sites })
    }

    pub fn parts(&self) -> &[Vec<usize>] {
        &self.parts
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn satisfies(&self, mode: PartitionMode) -> bool {
        match mode {
            PartitionMode::MaxPartSize(k) => self.parts.iter().all(|p| p.len() <= k),
            PartitionMode::ExactlyKParts(k) => self.parts.len() == k,
        }
    }
}

impl fmt::Display for PartitionSpec {
    /// 1-based sites, e.g. `{1,3}{2}{4}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for part in &self.parts {
            let s: Vec<String> = part.iter().map(|x| (x + 1).to_string()).collect();
            write!(f, "{{{}}}", s.join(","))?;
        }
        Ok(())
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// `counts[n]` = number of partitions of `n` elements into parts of size ≤ k.
fn bounded_bell(n: usize, k: usize) -> Vec<u128> {
    let mut counts = vec![0u128; n + 1];
    counts[0] = 1;
    for m in 1..=n {
        counts[m] = (0..k.min(m)).map(|j| binomial(m - 1, j) * counts[m - 1 - j]).sum();
    }
    counts
}

/// `table[n][j]` = Stirling number of the second kind `S(n, j)`.
fn stirling_table(n: usize, k: usize) -> Vec<Vec<u128>> {
    let mut t = vec![vec![0u128; k + 1]; n + 1];
    t[0][0] = 1;
    for m in 1..=n {
        for j in 1..=k.min(m) {
            t[m][j] = j as u128 * t[m - 1][j] + t[m - 1][j - 1];
        }
    }
    t
}

/// Uniform integer below `n` (which may exceed `u64`).
fn below<R: Rng + ?Sized>(rng: &mut R, n: u128) -> u128 {
    if n <= u64::MAX as u128 {
        rng.random_range(0..n as u64) as u128
    } else {
        rng.random_range(0..n)
    }
}

fn sample_bounded<R: Rng + ?Sized>(sites: usize, k: usize, rng: &mut R) -> Vec<Vec<usize>> {
    let counts = bounded_bell(sites, k);
    let mut remaining: Vec<usize> = (0..sites).collect();
    let mut parts = Vec::new();
    while !remaining.is_empty() {
        let n = remaining.len();
        // size j+1 of the part holding the least remaining site
        let mut u = below(rng, counts[n]);
        let mut extra = 0;
        for j in 0..k.min(n) {
            let w = binomial(n - 1, j) * counts[n - 1 - j];
            if u < w {
                extra = j;
                break;
            }
            u -= w;
        }
        let first = remaining.remove(0);
        let mut chosen: Vec<usize> = sample(rng, n - 1, extra).into_iter().collect();
        chosen.sort_unstable_by(|a, b| b.cmp(a));
        let mut part = vec![first];
        for idx in chosen {
            part.push(remaining.remove(idx));
        }
        parts.push(part);
    }
    parts
}

fn sample_exact<R: Rng + ?Sized>(sites: usize, k: usize, rng: &mut R) -> Vec<Vec<usize>> {
    let table = stirling_table(sites, k);
    // Walk from the last site down, deciding whether each opens a new part.
    let mut opens = vec![false; sites];
    let mut j = k;
    for m in (1..=sites).rev() {
        let u = below(rng, table[m][j]);
        if u < table[m - 1][j - 1] {
            opens[m - 1] = true;
            j -= 1;
        }
    }
    // A site that does not open a part joins one of the parts already
    // opened below it, uniformly; that is the k·S(n−1, k) branch.
    let mut parts: Vec<Vec<usize>> = Vec::with_capacity(k);
    let mut pending: Vec<usize> = Vec::new();
    for (site, &open) in opens.iter().enumerate() {
        if open {
            parts.push(vec![site]);
        } else {
            pending.push(site);
        }
    }
    for site in pending {
        let available: Vec<usize> = (0..parts.len()).filter(|&p| parts[p][0] < site).collect();
        let pick = available[rng.random_range(0..available.len())];
        parts[pick].push(site);
    }
    parts
}

/// Uniformly random set partition of `0..sites` subject to `mode`.
pub fn random_partition<R: Rng + ?Sized>(
    sites: usize,
    mode: PartitionMode,
    rng: &mut R,
) -> Result<PartitionSpec> {
    if sites == 0 || sites > SUBSET_ENUM_MAX_SITES {
        return Err(Error::SiteCountOutOfRange(sites));
    }
    let parts = match mode {
        PartitionMode::MaxPartSize(k) => {
            if k < 1 || k > sites {
                return Err(Error::InfeasiblePartition(format!(
                    "part size bound {k} for {sites} sites"
                )));
            }
            sample_bounded(sites, k, rng)
        }
        PartitionMode::ExactlyKParts(k) => {
            if k < 2 || k > sites {
                return Err(Error::InfeasiblePartition(format!("{k} parts for {sites} sites")));
            }
            sample_exact(sites, k, rng)
        }
    };
    PartitionSpec::new(parts, sites)
}

/// Haar-random unit vector of length `dim`.
pub fn haar_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<C64> {
    loop {
        let v: Vec<C64> = (0..dim)
            .map(|_| C64::new(StandardNormal.sample(rng), StandardNormal.sample(rng)))
            .collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

/// Tensor product of Haar-random states on each part.
pub fn random_pure_for_partition<R: Rng + ?Sized>(
    partition: &PartitionSpec,
    dims: &DimensionVector,
    rng: &mut R,
) -> Result<PureStateSparse> {
    let n = dims.sites();
    if partition.sites() != n {
        return Err(Error::DimensionMismatch(format!(
            "partition over {} sites for {n}-site dims",
            partition.sites()
        )));
    }
    let mut terms: Vec<(Vec<usize>, C64)> = vec![(vec![0; n], C64::from(1.0))];
    for part in partition.parts() {
        let local_total: usize = part.iter().map(|&s| dims.local(s)).product();
        let amps = haar_vector(local_total, rng);
        let mut next = Vec::with_capacity(terms.len() * local_total);
        for (label, a) in &terms {
            for (idx, &b) in amps.iter().enumerate() {
                let mut lab = label.clone();
                let mut rest = idx;
                for &s in part.iter().rev() {
                    lab[s] = rest % dims.local(s);
                    rest /= dims.local(s);
                }
                next.push((lab, a * b));
            }
        }
        terms = next;
    }
    PureStateSparse::new(
        terms.into_iter().map(|(l, a)| (ProductLabel::new(l), a)),
        dims.clone(),
    )
}

/// Dirichlet(1, …, 1) weights.
pub fn dirichlet_weights<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Vec<f64> {
    let draws: Vec<f64> = (0..m).map(|_| Exp1.sample(rng)).collect();
    let total: f64 = draws.iter().sum();
    draws.into_iter().map(|x| x / total).collect()
}

/// `Σ_j w_j |φ_j⟩⟨φ_j|` with independent random partitions per component,
/// returned in dense form.
pub fn random_mixed<R: Rng + ?Sized>(
    dims: &DimensionVector,
    mode: PartitionMode,
    components: usize,
    rng: &mut R,
) -> Result<DensityOperator> {
    if dims.total() > DENSE_CAP {
        return Err(Error::CapExceeded {
            dim: dims.total(),
            cap: DENSE_CAP,
        });
    }
    if components == 0 {
        return Err(Error::InvalidState("component count must be positive".into()));
    }
    let mut weights = dirichlet_weights(components, rng);
    let excess: f64 = weights.iter().sum::<f64>() - 1.0;
    weights[0] -= excess;
    let mut mix = Vec::with_capacity(components);
    for w in weights {
        let part = random_partition(dims.sites(), mode, rng)?;
        mix.push((w, random_pure_for_partition(&part, dims, rng)?));
    }
    let rho: DensityOperator = Mixture::new(mix, 0.0, dims.clone())?.into();
    Ok(rho.to_dense()?.into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::BTreeMap;

    #[test]
    fn counting_tables() {
        assert_eq!(bounded_bell(4, 4)[4], 15);
        assert_eq!(bounded_bell(5, 2)[5], 26);
        assert_eq!(bounded_bell(4, 1)[4], 1);
        let s = stirling_table(5, 3);
        assert_eq!(s[5][3], 25);
        assert_eq!(s[4][2], 7);
    }

    #[test]
    fn forced_partitions() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let singles = [vec![0], vec![1], vec![2], vec![3]];
        assert_eq!(random_partition(4, PartitionMode::MaxPartSize(1), &mut rng).unwrap().parts(), &singles[..]);
        assert_eq!(random_partition(4, PartitionMode::ExactlyKParts(4), &mut rng).unwrap().parts(), &singles[..]);
        assert!(random_partition(4, PartitionMode::ExactlyKParts(5), &mut rng).is_err());
        assert!(random_partition(4, PartitionMode::MaxPartSize(0), &mut rng).is_err());
    }

    fn frequencies(mode: PartitionMode, sites: usize, draws: usize) -> BTreeMap<String, usize> {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut freq = BTreeMap::new();
        for _ in 0..draws {
            let p = random_partition(sites, mode, &mut rng).unwrap();
            assert!(p.satisfies(mode));
            *freq.entry(p.to_string()).or_insert(0) += 1;
        }
        freq
    }

    #[test]
    fn bounded_sampler_is_uniform() {
        let freq = frequencies(PartitionMode::MaxPartSize(2), 5, 26_000);
        assert_eq!(freq.len(), 26);
        for &c in freq.values() {
            assert!((800..1200).contains(&c), "count {c}");
        }
    }

    #[test]
    fn exact_sampler_is_uniform() {
        let freq = frequencies(PartitionMode::ExactlyKParts(3), 5, 25_000);
        assert_eq!(freq.len(), 25);
        for &c in freq.values() {
            assert!((800..1200).contains(&c), "count {c}");
        }
    }

    #[test]
    fn product_states_and_seeds() {
        let dims = DimensionVector::uniform(3, 2).unwrap();
        let whole = PartitionSpec::new(vec![vec![0, 1, 2]], 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = random_pure_for_partition(&whole, &dims, &mut rng).unwrap();
        assert!((a.norm_sqr() - 1.0).abs() < 1e-12);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let b = random_pure_for_partition(&whole, &dims, &mut rng).unwrap();
        assert!(a.inner(&b).norm() < 1.0 - 1e-6);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert_eq!(random_pure_for_partition(&whole, &dims, &mut rng).unwrap(), a);
    }

    #[test]
    fn mixed_states_are_valid_and_deterministic() {
        let dims = DimensionVector::new(vec![2, 3, 2]).unwrap();
        let draw = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            random_mixed(&dims, PartitionMode::MaxPartSize(2), 5, &mut rng).unwrap()
        };
        let rho = draw(11);
        match &rho {
            DensityOperator::Dense(s) => {
                assert!((s.matrix().trace().re - 1.0).abs() < 1e-12);
                assert!(crate::qstate::DenseState::new(s.matrix().clone(), dims.clone()).is_ok());
            }
            _ => panic!("expected dense"),
        }
        assert_eq!(rho, draw(11));
        assert_ne!(rho, draw(12));
    }
}
