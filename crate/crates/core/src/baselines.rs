//! Comparison criteria: quantum Fisher information bounds (qubits), the SU(d)
//! collective-variance bound, and two density-element bounds on flat indices.

use std::collections::BTreeMap;

use nalgebra::DMatrix;

use crate::config::{DENSE_CAP, QFI_PAIR_SKIP, SUBSET_SUM_MAX_SITES};
use crate::criteria::{Conclusion, CriterionId, CriterionVerdict};
use crate::qstate::{DensityOperator, DimensionVector};
use crate::twocopy::enumerate_proper_subsets;
use crate::{Error, Result, C64};

/// `Σ_i g^{(i)}` for a local Hermitian `g`, stored as sparse triplets.
#[derive(Clone, Debug)]
pub struct CollectiveOperator {
    dims: DimensionVector,
    /// `(row, col, value)` with no duplicate positions.
    entries: Vec<(usize, usize, C64)>,
    descriptor: String,
}

impl CollectiveOperator {
    /// Sum of `local` acting on every site. Requires equal local dimensions
    /// matching `local`.
    pub fn collective(local: &DMatrix<C64>, dims: &DimensionVector, descriptor: &str) -> Result<Self> {
        let d = dims
            .uniform_dim()
            .ok_or_else(|| Error::UnequalDimensions(dims.dims().to_vec()))?;
        if local.nrows() != d || local.ncols() != d {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} local operator for local dimension {d}",
                local.nrows(),
                local.ncols()
            )));
        }
        if (local - local.adjoint()).camax() > 1e-12 {
            return Err(Error::InvalidState("local generator is not Hermitian".into()));
        }
        let total = dims.total();
        if total > DENSE_CAP {
            return Err(Error::CapExceeded { dim: total, cap: DENSE_CAP });
        }
        let n = dims.sites();
        let mut acc: BTreeMap<(usize, usize), C64> = BTreeMap::new();
        for col in 0..total {
            let label = dims.label_at(col);
            let mut stride = 1;
            for site in (0..n).rev() {
                let x = label.get(site);
                for y in 0..d {
                    let g = local[(y, x)];
                    if g != C64::from(0.0) {
                        let row = col + y * stride - x * stride;
                        *acc.entry((row, col)).or_default() += g;
                    }
                }
                stride *= d;
            }
        }
        let entries = acc.into_iter().filter(|(_, v)| v.norm() > 0.0).map(|((r, c), v)| (r, c, v)).collect();
        Ok(Self {
            dims: dims.clone(),
            entries,
            descriptor: descriptor.to_string(),
        })
    }

    /// `½ Σ_i σ_z^{(i)}` on `sites` qubits.
    pub fn half_sigma_z(sites: usize) -> Result<Self> {
        let dims = DimensionVector::uniform(sites, 2)?;
        let half_z = DMatrix::from_row_slice(2, 2, &[C64::from(0.5), C64::from(0.0), C64::from(0.0), C64::from(-0.5)]);
        Self::collective(&half_z, &dims, "half sigma_z sum")
    }

    pub fn dims(&self) -> &DimensionVector {
        &self.dims
    }

    pub fn descriptor(&self) -> &str {
        &self.descriptor
    }

    pub fn entries(&self) -> &[(usize, usize, C64)] {
        &self.entries
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        let d = self.dims.total();
        let mut m = DMatrix::zeros(d, d);
        for &(r, c, v) in &self.entries {
            m[(r, c)] = v;
        }
        m
    }
}

/// Eigendecomposition of one invariant block of `ρ`.
#[derive(Clone, Debug)]
pub struct SpectralBlock {
    /// Flat indices spanned by the block.
    pub support: Vec<usize>,
    pub values: Vec<f64>,
    /// Columns are eigenvectors in the coordinates of `support`.
    pub vectors: DMatrix<C64>,
}

/// Eigendecomposition of a density operator, split into blocks along the
/// connected components of its nonzero pattern.
#[derive(Clone, Debug)]
pub struct Spectrum {
    dim: usize,
    blocks: Vec<SpectralBlock>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        Self((0..n).collect())
    }

    fn find(&mut self, mut a: usize) -> usize {
        while self.0[a] != a {
            self.0[a] = self.0[self.0[a]];
            a = self.0[a];
        }
        a
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }

    fn groups(&mut self) -> Vec<Vec<usize>> {
        let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for a in 0..self.0.len() {
            let r = self.find(a);
            by_root.entry(r).or_default().push(a);
        }
        by_root.into_values().collect()
    }
}

fn decompose_block(support: Vec<usize>, matrix: DMatrix<C64>) -> SpectralBlock {
    if support.len() == 1 {
        return SpectralBlock {
            support,
            values: vec![matrix[(0, 0)].re],
            vectors: DMatrix::from_element(1, 1, C64::from(1.0)),
        };
    }
    let eig = matrix.symmetric_eigen();
    SpectralBlock {
        support,
        values: eig.eigenvalues.iter().copied().collect(),
        vectors: eig.eigenvectors,
    }
}

impl Spectrum {
    pub fn of(rho: &DensityOperator) -> Result<Self> {
        let dim = rho.dims().total();
        if dim > DENSE_CAP {
            return Err(Error::CapExceeded { dim, cap: DENSE_CAP });
        }
        let mut uf = UnionFind::new(dim);
        let blocks = match rho {
            DensityOperator::Dense(s) => {
                let m = s.matrix();
                for b in 0..dim {
                    for a in 0..b {
                        if m[(a, b)] != C64::from(0.0) || m[(b, a)] != C64::from(0.0) {
                            uf.union(a, b);
                        }
                    }
                }
                uf.groups()
                    .into_iter()
                    .map(|support| {
                        let k = support.len();
                        let sub = DMatrix::from_fn(k, k, |i, j| m[(support[i], support[j])]);
                        decompose_block(support, sub)
                    })
                    .collect()
            }
            DensityOperator::Mixture(mix) => {
                let dims = mix.dims();
                let comps: Vec<(f64, Vec<(usize, C64)>)> = mix
                    .components()
                    .iter()
                    .map(|(w, psi)| {
                        let idx = psi.terms().map(|(l, &a)| (dims.flat_index(l.as_slice()), a)).collect();
                        (*w, idx)
                    })
                    .collect();
                for (_, idx) in &comps {
                    for pair in idx.windows(2) {
                        uf.union(pair[0].0, pair[1].0);
                    }
                }
                let groups = uf.groups();
                let mut block_of = vec![0usize; dim];
                let mut pos_of = vec![0usize; dim];
                for (g, support) in groups.iter().enumerate() {
                    for (p, &a) in support.iter().enumerate() {
                        block_of[a] = g;
                        pos_of[a] = p;
                    }
                }
                let diag = mix.noise() / dim as f64;
                let mut mats: Vec<DMatrix<C64>> = groups
                    .iter()
                    .map(|s| DMatrix::from_diagonal_element(s.len(), s.len(), C64::from(diag)))
                    .collect();
                for (w, idx) in &comps {
                    let g = block_of[idx[0].0];
                    for &(i, ai) in idx {
                        for &(j, aj) in idx {
                            mats[g][(pos_of[i], pos_of[j])] += ai * aj.conj() * *w;
                        }
                    }
                }
                groups.into_iter().zip(mats).map(|(s, m)| decompose_block(s, m)).collect()
            }
        };
        Ok(Self { dim, blocks })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn blocks(&self) -> &[SpectralBlock] {
        &self.blocks
    }

    /// All eigenvalues in descending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.blocks.iter().flat_map(|b| b.values.iter().copied()).collect();
        v.sort_by(|a, b| b.total_cmp(a));
        v
    }

    /// `(λ, V)` with eigenvalues descending and eigenvectors as columns of a
    /// full `D × D` matrix.
    pub fn to_dense(&self) -> (Vec<f64>, DMatrix<C64>) {
        let mut cols: Vec<(f64, usize, usize)> = Vec::with_capacity(self.dim);
        for (bi, b) in self.blocks.iter().enumerate() {
            for (l, &lam) in b.values.iter().enumerate() {
                cols.push((lam, bi, l));
            }
        }
        cols.sort_by(|a, b| b.0.total_cmp(&a.0));
        let mut v = DMatrix::zeros(self.dim, self.dim);
        for (c, &(_, bi, l)) in cols.iter().enumerate() {
            let b = &self.blocks[bi];
            for (p, &a) in b.support.iter().enumerate() {
                v[(a, c)] = b.vectors[(p, l)];
            }
        }
        (cols.into_iter().map(|c| c.0).collect(), v)
    }

    /// `max |ρ − Σ λ |l⟩⟨l||`.
    pub fn reconstruction_error(&self, rho: &DensityOperator) -> Result<f64> {
        let dense = rho.to_dense()?;
        let (vals, v) = self.to_dense();
        let lam = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            self.dim,
            vals.iter().map(|&x| C64::from(x)),
        ));
        Ok((dense.matrix() - &v * lam * v.adjoint()).camax())
    }
}

fn qfi_term(l1: f64, l2: f64, h_sqr: f64) -> f64 {
    let s = l1 + l2;
    if s <= QFI_PAIR_SKIP {
        return 0.0;
    }
    2.0 * (l1 - l2).powi(2) / s * h_sqr
}

/// `F(ρ, H) = Σ_{l,l'} 2(λ_l − λ_l')²/(λ_l + λ_l') |⟨l|H|l'⟩|²`, skipping
/// pairs with `λ_l + λ_l' ≤ 1e-12`.
pub fn qfi(rho: &DensityOperator, h: &CollectiveOperator) -> Result<f64> {
    if rho.dims() != h.dims() {
        return Err(Error::DimensionMismatch(format!(
            "state dims {:?} vs operator dims {:?}",
            rho.dims().dims(),
            h.dims().dims()
        )));
    }
    if let DensityOperator::Dense(s) = rho {
        let err = s.hermiticity_error();
        if err > 1e-10 {
            return Err(Error::InvalidState(format!("not Hermitian (error {err:.3e})")));
        }
    }
    let spectrum = Spectrum::of(rho)?;
    Ok(qfi_with_spectrum(&spectrum, h))
}

fn qfi_with_spectrum(spectrum: &Spectrum, h: &CollectiveOperator) -> f64 {
    let blocks = spectrum.blocks();
    let mut block_of = vec![(0usize, 0usize); spectrum.dim()];
    for (bi, b) in blocks.iter().enumerate() {
        for (p, &a) in b.support.iter().enumerate() {
            block_of[a] = (bi, p);
        }
    }
    // H entries grouped by the pair of blocks they connect
    let mut coupled: BTreeMap<(usize, usize), Vec<(usize, usize, C64)>> = BTreeMap::new();
    for &(r, c, v) in h.entries() {
        let (br, pr) = block_of[r];
        let (bc, pc) = block_of[c];
        coupled.entry((br, bc)).or_default().push((pr, pc, v));
    }
    let mut f = 0.0;
    for ((ba, bb), hs) in coupled {
        let (a, b) = (&blocks[ba], &blocks[bb]);
        if a.support.len() == 1 && b.support.len() == 1 {
            let h_sqr: f64 = hs.iter().map(|e| e.2.norm_sqr()).sum();
            f += qfi_term(a.values[0], b.values[0], h_sqr);
            continue;
        }
        let mut sub = DMatrix::<C64>::zeros(a.support.len(), b.support.len());
        for (pr, pc, v) in hs {
            sub[(pr, pc)] += v;
        }
        let m = a.vectors.adjoint() * sub * &b.vectors;
        for (l1, &lam1) in a.values.iter().enumerate() {
            for (l2, &lam2) in b.values.iter().enumerate() {
                f += qfi_term(lam1, lam2, m[(l1, l2)].norm_sqr());
            }
        }
    }
    f
}

/// `s·k² + (N − s·k)²` with `s = ⌊N/k⌋`.
pub fn fisher_producibility_bound(sites: usize, k: usize) -> f64 {
    let s = sites / k;
    (s * k * k + (sites - s * k).pow(2)) as f64
}

/// `(N − k + 1)² + k − 1`.
pub fn fisher_separability_bound(sites: usize, k: usize) -> f64 {
    ((sites - k + 1).pow(2) + k - 1) as f64
}

/// Fisher-information criteria with the generator `½ Σ σ_z` cached.
#[derive(Clone, Debug)]
pub struct FisherBaseline {
    h: CollectiveOperator,
}

impl FisherBaseline {
    pub fn new(sites: usize) -> Result<Self> {
        Ok(Self {
            h: CollectiveOperator::half_sigma_z(sites)?,
        })
    }

    fn check(&self, rho: &DensityOperator) -> Result<()> {
        if !rho.dims().is_qubits() {
            return Err(Error::NotQubits(rho.dims().dims().to_vec()));
        }
        Ok(())
    }

    pub fn qfi(&self, rho: &DensityOperator) -> Result<f64> {
        self.check(rho)?;
        qfi(rho, &self.h)
    }

    /// `F > s·k² + (N−s·k)²` certifies `(k+1)`-partite entanglement, `1 ≤ k ≤ N−1`.
    pub fn producibility(&self, rho: &DensityOperator, k: usize) -> Result<CriterionVerdict> {
        self.check(rho)?;
        let n = rho.dims().sites();
        if k < 1 || k >= n {
            return Err(Error::KOutOfRange { k, min: 1, max: n - 1 });
        }
        let f = qfi(rho, &self.h)?;
        Ok(CriterionVerdict::new(
            CriterionId::FisherProducibility,
            k,
            f,
            fisher_producibility_bound(n, k),
            Conclusion::PartiteEntanglement(k + 1),
        ))
    }

    /// `F > (N−k+1)² + k − 1` certifies k-nonseparability, `2 ≤ k ≤ N`.
    pub fn separability(&self, rho: &DensityOperator, k: usize) -> Result<CriterionVerdict> {
        self.check(rho)?;
        let n = rho.dims().sites();
        if k < 2 || k > n {
            return Err(Error::KOutOfRange { k, min: 2, max: n });
        }
        let f = qfi(rho, &self.h)?;
        Ok(CriterionVerdict::new(
            CriterionId::FisherSeparability,
            k,
            f,
            fisher_separability_bound(n, k),
            Conclusion::Nonseparable(k),
        ))
    }
}

pub fn fisher_producibility(rho: &DensityOperator, k: usize) -> Result<CriterionVerdict> {
    FisherBaseline::new(rho.dims().sites())?.producibility(rho, k)
}

pub fn fisher_separability(rho: &DensityOperator, k: usize) -> Result<CriterionVerdict> {
    FisherBaseline::new(rho.dims().sites())?.separability(rho, k)
}

/// Generalized Gell-Mann matrices for SU(d): symmetric, antisymmetric, then
/// diagonal, normalized to `tr(g_m g_n) = 2δ_mn`.
pub fn gellmann_generators(d: usize) -> Result<Vec<DMatrix<C64>>> {
    if d < 2 {
        return Err(Error::InvalidDimensions(format!("local dimension {d} < 2")));
    }
    let one = C64::from(1.0);
    let i = C64::i();
    let mut out = Vec::with_capacity(d * d - 1);
    for j in 0..d {
        for k in j + 1..d {
            let mut g = DMatrix::zeros(d, d);
            g[(j, k)] = one;
            g[(k, j)] = one;
            out.push(g);
        }
    }
    for j in 0..d {
        for k in j + 1..d {
            let mut g = DMatrix::zeros(d, d);
            g[(j, k)] = -i;
            g[(k, j)] = i;
            out.push(g);
        }
    }
    for l in 1..d {
        let norm = (2.0 / (l * (l + 1)) as f64).sqrt();
        let mut g = DMatrix::zeros(d, d);
        for j in 0..l {
            g[(j, j)] = C64::from(norm);
        }
        g[(l, l)] = C64::from(-(l as f64) * norm);
        out.push(g);
    }
    Ok(out)
}

/// `2N(d−2)` for even `N`, `2N(d−2) + 2` for odd `N`.
pub fn collective_variance_threshold(sites: usize, d: usize) -> f64 {
    let base = 2 * sites * (d - 2);
    (if sites.is_multiple_of(2) { base } else { base + 2 }) as f64
}

/// Sum of collective variances `Σ_m V(ρ, G_m)` with `G_m` and `G_m²` cached.
#[derive(Clone, Debug)]
pub struct VarianceBaseline {
    dims: DimensionVector,
    /// `(G_m, G_m²)` as dense matrices.
    generators: Vec<(DMatrix<C64>, DMatrix<C64>)>,
}

impl VarianceBaseline {
    pub fn new(dims: &DimensionVector) -> Result<Self> {
        let d = dims
            .uniform_dim()
            .ok_or_else(|| Error::UnequalDimensions(dims.dims().to_vec()))?;
        let generators = gellmann_generators(d)?
            .iter()
            .map(|g| {
                let big = CollectiveOperator::collective(g, dims, "Gell-Mann collective")?.to_dense();
                let sq = &big * &big;
                Ok((big, sq))
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            dims: dims.clone(),
            generators,
        })
    }

    pub fn variance_sum(&self, rho: &DensityOperator) -> Result<f64> {
        if rho.dims() != &self.dims {
            return Err(Error::DimensionMismatch(format!(
                "state dims {:?} vs baseline dims {:?}",
                rho.dims().dims(),
                self.dims.dims()
            )));
        }
        let mut total = 0.0;
        for (g, g2) in &self.generators {
            let m = rho.expectation(g)?.re;
            total += rho.expectation(g2)?.re - m * m;
        }
        Ok(total)
    }

    /// Violated when the variance sum falls below the threshold; recorded as
    /// `lhs = threshold`, `rhs = Σ_m V(ρ, G_m)`. Certifies 3-partite
    /// entanglement (`k = 2`).
    pub fn evaluate(&self, rho: &DensityOperator) -> Result<CriterionVerdict> {
        let sum = self.variance_sum(rho)?;
        let d = self.dims.local(0);
        let threshold = collective_variance_threshold(self.dims.sites(), d);
        Ok(CriterionVerdict::new(
            CriterionId::CollectiveVariance,
            2,
            threshold,
            sum,
            Conclusion::PartiteEntanglement(3),
        ))
    }
}

pub fn collective_variance(rho: &DensityOperator) -> Result<CriterionVerdict> {
    VarianceBaseline::new(rho.dims())?.evaluate(rho)
}

/// W-type density-element bound on flat indices:
///
/// `Σ_{i≠j, p, q} |ρ[p·d^{N−1−i}, q·d^{N−1−j}]| ≤ Σ_{i≠j, p, q} √(ρ[0,0]·ρ[e, e])
///  + (N−k) Σ_{i, p} ρ[p·d^{N−1−i}, p·d^{N−1−i}]`
///
/// with `e = p·d^{N−1−i} + q·d^{N−1−j}`, sites 0-based and `p, q ∈ {1, …, d−1}`.
/// A violation certifies k-nonseparability, `2 ≤ k ≤ N`.
pub fn density_element_separability(rho: &DensityOperator, k: usize) -> Result<CriterionVerdict> {
    let dims = rho.dims();
    let d = dims
        .uniform_dim()
        .ok_or_else(|| Error::UnequalDimensions(dims.dims().to_vec()))?;
    let n = dims.sites();
    if k < 2 || k > n {
        return Err(Error::KOutOfRange { k, min: 2, max: n });
    }
    let weight = |site: usize| d.pow((n - 1 - site) as u32);
    let rho00 = rho.element_at(0, 0).re.max(0.0);
    let (mut lhs, mut geo, mut pop) = (0.0, 0.0, 0.0);
    for i in 0..n {
        for p in 1..d {
            let a = p * weight(i);
            pop += rho.element_at(a, a).re;
            for j in (0..n).filter(|&j| j != i) {
                for q in 1..d {
                    let b = q * weight(j);
                    lhs += rho.element_at(a, b).norm();
                    geo += (rho00 * rho.element_at(a + b, a + b).re.max(0.0)).sqrt();
                }
            }
        }
    }
    Ok(CriterionVerdict::new(
        CriterionId::DensityElementSeparability,
        k,
        lhs,
        geo + (n - k) as f64 * pop,
        Conclusion::Nonseparable(k),
    ))
}

/// GHZ-type density-element bound on flat indices:
///
/// `(2^k − 2)|ρ[0, D−1]| ≤ Σ_α √(ρ[j_α, j_α]·ρ[j_ᾱ, j_ᾱ])`
///
/// over nonempty proper subsets `α`, where `j_α` is the label with `d_i − 1`
/// on the sites of `α` and 0 elsewhere. A violation certifies
/// k-nonseparability, `2 ≤ k ≤ N`.
pub fn density_ghz_separability(rho: &DensityOperator, k: usize) -> Result<CriterionVerdict> {
    let dims = rho.dims();
    let n = dims.sites();
    if n > SUBSET_SUM_MAX_SITES {
        return Err(Error::SiteCountOutOfRange(n));
    }
    if k < 2 || k > n {
        return Err(Error::KOutOfRange { k, min: 2, max: n });
    }
    let total = dims.total();
    let index = |mask: u64| {
        let label: Vec<usize> = (0..n)
            .map(|site| if mask >> site & 1 == 1 { dims.local(site) - 1 } else { 0 })
            .collect();
        dims.flat_index(&label)
    };
    let full = (1u64 << n) - 1;
    let mut rhs = 0.0;
    for alpha in enumerate_proper_subsets(n)? {
        let a = index(alpha.bits());
        let b = index(full ^ alpha.bits());
        rhs += (rho.element_at(a, a).re.max(0.0) * rho.element_at(b, b).re.max(0.0)).sqrt();
    }
    let lhs = (2f64.powi(k as i32) - 2.0) * rho.element_at(0, total - 1).norm();
    Ok(CriterionVerdict::new(
        CriterionId::DensityGhzSeparability,
        k,
        lhs,
        rhs,
        Conclusion::Nonseparable(k),
    ))
}
