//! Two-copy permutation expectation values.
//!
//! For product fiducials `|Φ⟩ = |φ1⟩|φ2⟩` the two-copy quantities reduce to
//! single-copy matrix elements:
//!
//! - `⟨Φ|ρ⊗ρ P|Φ⟩ = |⟨φ1|ρ|φ2⟩|²`
//! - `⟨Φ|P_α† ρ⊗ρ P_α|Φ⟩ = ⟨a|ρ|a⟩⟨b|ρ|b⟩` with `a` taking `φ2` on `α` and
//!   `φ1` elsewhere, and `b` the other way round.
//!
//! [`oracle_two_copy`] builds `ρ⊗ρ` and the permutation matrices explicitly
//! and exists to check those reductions.

use nalgebra::{DMatrix, DVector};

use crate::config::{SUBSET_ENUM_MAX_SITES, TWO_COPY_CAP};
use crate::qstate::{DenseState, DensityOperator, DimensionVector, ProductVector};
use crate::{Error, Result, C64};

/// Subset `α` of sites, bit `i` set when site `i` belongs to it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartitionMask(u64);

impl PartitionMask {
    pub fn new(bits: u64) -> Self {
        Self(bits)
    }

    pub fn from_sites(sites: &[usize]) -> Self {
        Self(sites.iter().fold(0, |acc, &s| acc | 1 << s))
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, site: usize) -> bool {
        self.0 >> site & 1 == 1
    }

    pub fn complement(self, sites: usize) -> Self {
        Self(!self.0 & full_mask(sites))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Nonempty and missing at least one of the `sites` sites.
    pub fn is_proper(self, sites: usize) -> bool {
        self.0 != 0 && self.0 & !full_mask(sites) == 0 && self.0 != full_mask(sites)
    }
}

fn full_mask(sites: usize) -> u64 {
    if sites >= 64 {
        u64::MAX
    } else {
        (1u64 << sites) - 1
    }
}

/// The pair `(|φ1⟩, |φ2⟩)` defining `|Φ⟩ = |φ1⟩|φ2⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct SwapFiducial {
    pub phi1: ProductVector,
    pub phi2: ProductVector,
}

impl SwapFiducial {
    pub fn new(phi1: impl Into<ProductVector>, phi2: impl Into<ProductVector>) -> Self {
        Self {
            phi1: phi1.into(),
            phi2: phi2.into(),
        }
    }

    /// `(|0…0⟩, |(d_0−1)…(d_{N−1}−1)⟩)`.
    pub fn lowest_highest(dims: &DimensionVector) -> Self {
        use crate::qstate::ProductLabel;
        Self::new(
            ProductLabel::filled(dims.sites(), 0),
            ProductLabel::new(dims.dims().iter().map(|d| d - 1).collect::<Vec<_>>()),
        )
    }

    pub fn check(&self, dims: &DimensionVector) -> Result<()> {
        self.phi1.check(dims)?;
        self.phi2.check(dims)
    }

    pub fn swapped(&self) -> Self {
        Self {
            phi1: self.phi2.clone(),
            phi2: self.phi1.clone(),
        }
    }
}

/// `⟨Φ|ρ⊗ρ P|Φ⟩ = |⟨φ1|ρ|φ2⟩|²`.
pub fn swap_expectation(rho: &DensityOperator, fid: &SwapFiducial) -> Result<f64> {
    fid.check(rho.dims())?;
    Ok(rho.element_unchecked(&fid.phi1, &fid.phi2).norm_sqr())
}

/// `⟨Φ|P_α† ρ⊗ρ P_α|Φ⟩` for a nonempty proper subset `α`.
pub fn partial_swap_expectation(
    rho: &DensityOperator,
    fid: &SwapFiducial,
    alpha: PartitionMask,
) -> Result<f64> {
    let dims = rho.dims();
    fid.check(dims)?;
    if !alpha.is_proper(dims.sites()) {
        return Err(Error::InvalidSubset(format!(
            "mask {:#b} is not a nonempty proper subset of {} sites",
            alpha.bits(),
            dims.sites()
        )));
    }
    Ok(partial_swap_unchecked(rho, fid, alpha))
}

pub(crate) fn partial_swap_unchecked(
    rho: &DensityOperator,
    fid: &SwapFiducial,
    alpha: PartitionMask,
) -> f64 {
    let dims = rho.dims();
    let a = fid.phi1.splice(&fid.phi2, alpha.bits(), dims);
    let b = fid.phi2.splice(&fid.phi1, alpha.bits(), dims);
    rho.diagonal_unchecked(&a) * rho.diagonal_unchecked(&b)
}

/// Dense oracle: builds `ρ⊗ρ` and the explicit 0/1 permutation matrix for
/// `P` (when `alpha` is `None`) or `P_α`, and returns the real part of
/// `⟨Φ|ρ⊗ρ P|Φ⟩` or `⟨Φ|P_α† ρ⊗ρ P_α|Φ⟩`.
pub fn oracle_two_copy(
    rho: &DenseState,
    fid: &SwapFiducial,
    alpha: Option<PartitionMask>,
) -> Result<f64> {
    oracle_two_copy_with_cap(rho, fid, alpha, TWO_COPY_CAP)
}

pub fn oracle_two_copy_with_cap(
    rho: &DenseState,
    fid: &SwapFiducial,
    alpha: Option<PartitionMask>,
    cap: usize,
) -> Result<f64> {
    let dims = rho.dims();
    fid.check(dims)?;
    let d = dims.total();
    let d2 = d.saturating_mul(d);
    if d2 > cap {
        return Err(Error::CapExceeded { dim: d2, cap });
    }
    if let Some(mask) = alpha {
        if !mask.is_proper(dims.sites()) {
            return Err(Error::InvalidSubset(format!(
                "mask {:#b} is not a nonempty proper subset",
                mask.bits()
            )));
        }
    }

    let two = rho.matrix().kronecker(rho.matrix());
    let phi: DVector<C64> = fid.phi1.to_dense(dims).kronecker(&fid.phi2.to_dense(dims));
    let perm = permutation_matrix(dims, alpha);
    let permuted = &perm * &phi;
    let value = match alpha {
        None => phi.dotc(&(&two * &permuted)),
        Some(_) => permuted.dotc(&(&two * &permuted)),
    };
    if value.im.abs() >= 1e-10 {
        return Err(Error::Numerical(format!(
            "two-copy expectation has imaginary part {:e}",
            value.im
        )));
    }
    Ok(value.re)
}

/// Two-copy index `a·D + b` for first-copy index `a` and second-copy `b`.
fn permutation_matrix(dims: &DimensionVector, alpha: Option<PartitionMask>) -> DMatrix<C64> {
    let d = dims.total();
    let mut perm = DMatrix::<C64>::zeros(d * d, d * d);
    for a in 0..d {
        for b in 0..d {
            let (a2, b2) = match alpha {
                None => (b, a),
                Some(mask) => {
                    let la = dims.label_at(a);
                    let lb = dims.label_at(b);
                    let mut na = la.as_slice().to_vec();
                    let mut nb = lb.as_slice().to_vec();
                    for site in 0..dims.sites() {
                        if mask.contains(site) {
                            na[site] = lb.get(site);
                            nb[site] = la.get(site);
                        }
                    }
                    (dims.flat_index(&na), dims.flat_index(&nb))
                }
            };
            perm[(a2 * d + b2, a * d + b)] = C64::from(1.0);
        }
    }
    perm
}

/// Iterator over all nonempty proper subsets of `N` sites in reflected Gray
/// code order.
#[derive(Clone, Debug)]
pub struct ProperSubsets {
    next: u64,
    end: u64,
    /// Index whose Gray code is the full mask.
    skip: u64,
}

impl Iterator for ProperSubsets {
    type Item = PartitionMask;

    fn next(&mut self) -> Option<PartitionMask> {
        while self.next < self.end {
            let i = self.next;
            self.next += 1;
            if i != self.skip {
                return Some(PartitionMask(i ^ (i >> 1)));
            }
        }
        None
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let ahead = (self.next..self.end).contains(&self.skip);
        let n = (self.end - self.next - u64::from(ahead)) as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for ProperSubsets {}

/// Yields the `2^N − 2` nonempty proper subsets, `2 ≤ N ≤ 30`.
pub fn enumerate_proper_subsets(sites: usize) -> Result<ProperSubsets> {
    if !(2..=SUBSET_ENUM_MAX_SITES).contains(&sites) {
        return Err(Error::SiteCountOutOfRange(sites));
    }
    let full = full_mask(sites);
    let mut skip = 0u64;
    let mut shift = full;
    while shift != 0 {
        skip ^= shift;
        shift >>= 1;
    }
    Ok(ProperSubsets {
        next: 1,
        end: 1u64 << sites,
        skip,
    })
}
