//! Multipartite pure and mixed states.
//!
//! Sites are numbered `0..N` and site 0 is the most significant digit of the
//! flat computational-basis index.

mod density;
mod families;
pub mod text;

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DVector;

use crate::config::{AMPLITUDE_PRUNE, NORM_TOL, RENORMALIZE_FLAG};
use crate::{Error, Result, C64};

pub use density::{DenseState, DensityOperator, Mixture};
pub use families::{
    cyclic_shift, family_ghz_mix, family_w_qutrit_mix, ghz_state, ghz_tilde_state, w_qutrit_state,
    Family, FamilySpec,
};
pub use text::{parse_state_document, StateDocument};

/// Local dimensions `d_0, …, d_{N-1}` of an `N`-site system.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DimensionVector {
    dims: Vec<usize>,
    total: usize,
}

impl DimensionVector {
    pub fn new(dims: impl Into<Vec<usize>>) -> Result<Self> {
        let dims = dims.into();
        if dims.len() < 2 {
            return Err(Error::InvalidDimensions(format!(
                "need at least 2 sites, got {}",
                dims.len()
            )));
        }
        if let Some(d) = dims.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidDimensions(format!(
                "local dimension {d} is below 2"
            )));
        }
        let total = dims
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .ok_or_else(|| {
                Error::InvalidDimensions(format!("total dimension of {dims:?} overflows"))
            })?;
        Ok(Self { dims, total })
    }

    pub fn uniform(sites: usize, d: usize) -> Result<Self> {
        Self::new(vec![d; sites])
    }

    pub fn sites(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn local(&self, site: usize) -> usize {
        self.dims[site]
    }

    /// Product of all local dimensions.
    pub fn total(&self) -> usize {
        self.total
    }

    /// The common local dimension, if all sites share one.
    pub fn uniform_dim(&self) -> Option<usize> {
        let d = self.dims[0];
        self.dims.iter().all(|&x| x == d).then_some(d)
    }

    pub fn is_qubits(&self) -> bool {
        self.uniform_dim() == Some(2)
    }

    pub fn check_label(&self, label: &ProductLabel) -> Result<()> {
        if label.len() != self.sites() {
            return Err(Error::DimensionMismatch(format!(
                "label {label} has {} sites, system has {}",
                label.len(),
                self.sites()
            )));
        }
        if label.iter().zip(&self.dims).any(|(&l, &d)| l >= d) {
            return Err(Error::LabelOutOfRange {
                label: label.to_string(),
                dims: self.dims.clone(),
            });
        }
        Ok(())
    }

    /// Flat index of a (valid) label.
    pub fn flat_index(&self, label: &[usize]) -> usize {
        label
            .iter()
            .zip(&self.dims)
            .fold(0, |acc, (&l, &d)| acc * d + l)
    }

    /// Inverse of [`flat_index`](Self::flat_index).
    pub fn label_at(&self, mut index: usize) -> ProductLabel {
        let mut labels = vec![0; self.sites()];
        for (slot, &d) in labels.iter_mut().zip(&self.dims).rev() {
            *slot = index % d;
            index /= d;
        }
        ProductLabel(labels)
    }
}

/// Computational-basis product label `|x_0 x_1 … x_{N-1}⟩`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProductLabel(Vec<usize>);

impl ProductLabel {
    pub fn new(labels: impl Into<Vec<usize>>) -> Self {
        Self(labels.into())
    }

    pub fn filled(sites: usize, value: usize) -> Self {
        Self(vec![value; sites])
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, usize> {
        self.0.iter()
    }

    pub fn get(&self, site: usize) -> usize {
        self.0[site]
    }

    /// Copy with `site` set to `value`.
    pub fn with_site(&self, site: usize, value: usize) -> Self {
        let mut out = self.clone();
        out.0[site] = value;
        out
    }

    /// Parses either a digit string (`"0120"`) or a comma-separated list
    /// (`"0,1,12,0"`).
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        let bad = |msg: String| Error::Parse { line: 0, msg };
        if text.is_empty() {
            return Err(bad("empty label".into()));
        }
        let labels = if text.contains(',') {
            text.split(',')
                .map(|s| {
                    s.trim()
                        .parse::<usize>()
                        .map_err(|_| bad(format!("bad label entry {s:?}")))
                })
                .collect::<Result<Vec<_>>>()?
        } else {
            text.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as usize)
                        .ok_or_else(|| bad(format!("bad label digit {c:?}")))
                })
                .collect::<Result<Vec<_>>>()?
        };
        Ok(Self(labels))
    }
}

impl fmt::Display for ProductLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.iter().all(|&l| l < 10) {
            for l in &self.0 {
                write!(f, "{l}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(|l| l.to_string()).collect();
            write!(f, "{}", parts.join(","))
        }
    }
}

/// Unit-norm state of a single site.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalVector(DVector<C64>);

impl LocalVector {
    /// Accepts amplitudes whose norm is 1 within [`NORM_TOL`].
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        let v = DVector::from_vec(amplitudes);
        if v.len() < 2 {
            return Err(Error::InvalidLocalVector("dimension below 2".into()));
        }
        let norm = v.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidLocalVector(format!("norm {norm} is not 1")));
        }
        Ok(Self(v))
    }

    /// Normalizes arbitrary nonzero amplitudes.
    pub fn normalized(amplitudes: Vec<C64>) -> Result<Self> {
        let v = DVector::from_vec(amplitudes);
        let norm = v.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidLocalVector("zero or non-finite norm".into()));
        }
        Self::new((v / C64::from(norm)).as_slice().to_vec())
    }

    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = DVector::zeros(dim);
        v[index] = C64::from(1.0);
        Self(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// `⟨index|self⟩`.
    pub fn amplitude(&self, index: usize) -> C64 {
        self.0[index]
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &LocalVector) -> C64 {
        self.0.dotc(&other.0)
    }

    pub fn as_vector(&self) -> &DVector<C64> {
        &self.0
    }
}

/// Fully separable product vector, either a computational-basis label or a
/// list of general local states.
#[derive(Clone, Debug, PartialEq)]
pub enum ProductVector {
    Basis(ProductLabel),
    Local(Vec<LocalVector>),
}

impl From<ProductLabel> for ProductVector {
    fn from(label: ProductLabel) -> Self {
        ProductVector::Basis(label)
    }
}

impl ProductVector {
    pub fn sites(&self) -> usize {
        match self {
            ProductVector::Basis(l) => l.len(),
            ProductVector::Local(v) => v.len(),
        }
    }

    pub fn check(&self, dims: &DimensionVector) -> Result<()> {
        match self {
            ProductVector::Basis(l) => dims.check_label(l),
            ProductVector::Local(v) => {
                if v.len() != dims.sites() {
                    return Err(Error::DimensionMismatch(format!(
                        "product vector has {} sites, system has {}",
                        v.len(),
                        dims.sites()
                    )));
                }
                match v.iter().zip(dims.dims()).find(|(lv, &d)| lv.dim() != d) {
                    Some((lv, d)) => Err(Error::DimensionMismatch(format!(
                        "local vector of dimension {} on a site of dimension {d}",
                        lv.dim()
                    ))),
                    None => Ok(()),
                }
            }
        }
    }

    pub fn as_label(&self) -> Option<&ProductLabel> {
        match self {
            ProductVector::Basis(l) => Some(l),
            ProductVector::Local(_) => None,
        }
    }

    /// The state on one site.
    pub fn local(&self, site: usize, dim: usize) -> LocalVector {
        match self {
            ProductVector::Basis(l) => LocalVector::basis(dim, l.get(site)),
            ProductVector::Local(v) => v[site].clone(),
        }
    }

    /// `⟨label|self⟩`.
    pub fn amplitude(&self, label: &[usize]) -> C64 {
        match self {
            ProductVector::Basis(l) => {
                if l.as_slice() == label {
                    C64::from(1.0)
                } else {
                    C64::from(0.0)
                }
            }
            ProductVector::Local(v) => v
                .iter()
                .zip(label)
                .map(|(lv, &x)| lv.amplitude(x))
                .product(),
        }
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &ProductVector) -> C64 {
        match (self, other) {
            (ProductVector::Basis(a), ProductVector::Basis(b)) => {
                C64::from(if a == b { 1.0 } else { 0.0 })
            }
            (ProductVector::Basis(a), b) => b.amplitude(a.as_slice()),
            (a, ProductVector::Basis(b)) => a.amplitude(b.as_slice()).conj(),
            (ProductVector::Local(a), ProductVector::Local(b)) => {
                a.iter().zip(b).map(|(x, y)| x.inner(y)).product()
            }
        }
    }

    /// Takes the sites in `mask` from `other` and all remaining sites from
    /// `self`.
    pub fn splice(&self, other: &ProductVector, mask: u64, dims: &DimensionVector) -> ProductVector {
        let take = |site: usize| mask >> site & 1 == 1;
        match (self, other) {
            (ProductVector::Basis(a), ProductVector::Basis(b)) => ProductVector::Basis(
                ProductLabel(
                    (0..a.len())
                        .map(|i| if take(i) { b.get(i) } else { a.get(i) })
                        .collect(),
                ),
            ),
            _ => ProductVector::Local(
                (0..dims.sites())
                    .map(|i| {
                        let d = dims.local(i);
                        if take(i) {
                            other.local(i, d)
                        } else {
                            self.local(i, d)
                        }
                    })
                    .collect(),
            ),
        }
    }

    /// Expands into a dense vector of length `D`.
    pub fn to_dense(&self, dims: &DimensionVector) -> DVector<C64> {
        match self {
            ProductVector::Basis(l) => {
                let mut v = DVector::zeros(dims.total());
                v[dims.flat_index(l.as_slice())] = C64::from(1.0);
                v
            }
            ProductVector::Local(locals) => {
                let mut v = DVector::from_element(1, C64::from(1.0));
                for lv in locals {
                    v = v.kronecker(lv.as_vector());
                }
                v
            }
        }
    }
}

/// Sparse pure state `Σ c_x |x⟩` over computational-basis labels.
#[derive(Clone, Debug, PartialEq)]
pub struct PureStateSparse {
    terms: BTreeMap<ProductLabel, C64>,
    dims: DimensionVector,
    input_norm: f64,
}

impl PureStateSparse {
    /// Builds a normalized state from `(label, amplitude)` terms. Repeated
    /// labels are summed; amplitudes below [`AMPLITUDE_PRUNE`] after
    /// normalization are dropped.
    pub fn new(
        terms: impl IntoIterator<Item = (ProductLabel, C64)>,
        dims: DimensionVector,
    ) -> Result<Self> {
        let mut acc: BTreeMap<ProductLabel, C64> = BTreeMap::new();
        let mut any = false;
        for (label, amp) in terms {
            any = true;
            dims.check_label(&label)?;
            *acc.entry(label).or_insert(C64::from(0.0)) += amp;
        }
        if !any {
            return Err(Error::EmptyState);
        }
        let norm = acc.values().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::ZeroNorm);
        }
        let terms = acc
            .into_iter()
            .map(|(l, a)| (l, a / norm))
            .filter(|(_, a)| a.norm() >= AMPLITUDE_PRUNE)
            .collect();
        Ok(Self {
            terms,
            dims,
            input_norm: norm,
        })
    }

    /// Builds a state from a dense amplitude vector in flat-index order.
    pub fn from_dense(amplitudes: &DVector<C64>, dims: DimensionVector) -> Result<Self> {
        if amplitudes.len() != dims.total() {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} for total dimension {}",
                amplitudes.len(),
                dims.total()
            )));
        }
        let terms: Vec<_> = amplitudes
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm() > 0.0)
            .map(|(i, &a)| (dims.label_at(i), a))
            .collect();
        Self::new(terms, dims)
    }

    pub fn dims(&self) -> &DimensionVector {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ProductLabel, &C64)> {
        self.terms.iter()
    }

    /// Norm of the amplitudes as supplied, before normalization.
    pub fn input_norm(&self) -> f64 {
        self.input_norm
    }

    /// Whether normalization changed the input norm by more than 1e-9.
    pub fn was_renormalized(&self) -> bool {
        (self.input_norm - 1.0).abs() > RENORMALIZE_FLAG
    }

    pub fn norm_sqr(&self) -> f64 {
        self.terms.values().map(|a| a.norm_sqr()).sum()
    }

    /// `⟨label|self⟩`.
    pub fn amplitude(&self, label: &ProductLabel) -> C64 {
        self.terms.get(label).copied().unwrap_or_default()
    }

    /// `⟨v|self⟩` for a product vector `v`.
    pub fn overlap(&self, v: &ProductVector) -> C64 {
        match v {
            ProductVector::Basis(l) => self.amplitude(l),
            ProductVector::Local(_) => self
                .terms
                .iter()
                .map(|(l, a)| v.amplitude(l.as_slice()).conj() * a)
                .sum(),
        }
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &PureStateSparse) -> C64 {
        self.terms
            .iter()
            .map(|(l, a)| a.conj() * other.amplitude(l))
            .sum()
    }

    /// Applies a site-wise basis permutation `|x_i⟩ → |f(i, x_i)⟩`.
    pub fn map_labels(&self, f: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let terms: Vec<_> = self
            .terms
            .iter()
            .map(|(l, &a)| {
                let mapped = l.iter().enumerate().map(|(i, &x)| f(i, x)).collect::<Vec<_>>();
                (ProductLabel(mapped), a)
            })
            .collect();
        Self::new(terms, self.dims.clone())
    }

    pub fn to_dense(&self) -> DVector<C64> {
        let mut v = DVector::zeros(self.dims.total());
        for (l, &a) in &self.terms {
            v[self.dims.flat_index(l.as_slice())] = a;
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn dimension_vector_rules() {
        assert!(DimensionVector::new(vec![2]).is_err());
        assert!(DimensionVector::new(vec![2, 1]).is_err());
        assert!(DimensionVector::new(vec![usize::MAX, 4]).is_err());
        let dims = DimensionVector::new(vec![2, 3, 4]).unwrap();
        assert_eq!(dims.total(), 24);
        assert_eq!(dims.uniform_dim(), None);
        for idx in 0..24 {
            let label = dims.label_at(idx);
            assert_eq!(dims.flat_index(label.as_slice()), idx);
        }
        assert_eq!(dims.flat_index(&[1, 0, 0]), 12);
    }

    #[test]
    fn labels_parse_both_forms() {
        assert_eq!(ProductLabel::parse("0120").unwrap(), ProductLabel::new(vec![0, 1, 2, 0]));
        assert_eq!(ProductLabel::parse("0, 11,2").unwrap(), ProductLabel::new(vec![0, 11, 2]));
        assert!(ProductLabel::parse("01x").is_err());
        assert_eq!(ProductLabel::new(vec![0, 11]).to_string(), "0,11");
    }

    #[test]
    fn ghz3_is_normalized() {
        let dims = DimensionVector::uniform(3, 2).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let psi = PureStateSparse::new(
            vec![
                (ProductLabel::new(vec![0, 0, 0]), c(h)),
                (ProductLabel::new(vec![1, 1, 1]), c(h)),
            ],
            dims,
        )
        .unwrap();
        assert!((psi.norm_sqr() - 1.0).abs() < 1e-12);
        assert!(!psi.was_renormalized());
        assert_eq!(psi.len(), 2);
    }

    #[test]
    fn product_state_and_renormalization_flag() {
        let dims = DimensionVector::uniform(2, 2).unwrap();
        let psi = PureStateSparse::new(vec![(ProductLabel::new(vec![0, 0]), c(3.0))], dims).unwrap();
        assert!(psi.was_renormalized());
        assert!((psi.amplitude(&ProductLabel::new(vec![0, 0])) - c(1.0)).norm() < 1e-15);
    }

    #[test]
    fn pure_state_errors() {
        let dims = DimensionVector::uniform(2, 2).unwrap();
        assert!(matches!(
            PureStateSparse::new(Vec::new(), dims.clone()),
            Err(Error::EmptyState)
        ));
        assert!(matches!(
            PureStateSparse::new(vec![(ProductLabel::new(vec![0, 2]), c(1.0))], dims.clone()),
            Err(Error::LabelOutOfRange { .. })
        ));
        assert!(matches!(
            PureStateSparse::new(vec![(ProductLabel::new(vec![0, 1]), c(0.0))], dims),
            Err(Error::ZeroNorm)
        ));
    }

    #[test]
    fn tiny_amplitudes_are_pruned() {
        let dims = DimensionVector::uniform(2, 2).unwrap();
        let psi = PureStateSparse::new(
            vec![
                (ProductLabel::new(vec![0, 0]), c(1.0)),
                (ProductLabel::new(vec![1, 1]), c(1e-17)),
            ],
            dims,
        )
        .unwrap();
        assert_eq!(psi.len(), 1);
    }

    #[test]
    fn product_vector_inner_and_splice() {
        let dims = DimensionVector::uniform(3, 2).unwrap();
        let plus = LocalVector::normalized(vec![c(1.0), c(1.0)]).unwrap();
        let a = ProductVector::Local(vec![plus.clone(), plus.clone(), plus]);
        let b = ProductVector::Basis(ProductLabel::new(vec![0, 1, 0]));
        let expected = (0.5f64).powf(1.5);
        assert!((a.inner(&b) - c(expected)).norm() < 1e-15);
        assert!((b.inner(&a) - c(expected)).norm() < 1e-15);
        let x = ProductVector::Basis(ProductLabel::filled(3, 0));
        let y = ProductVector::Basis(ProductLabel::filled(3, 1));
        let s = x.splice(&y, 0b101, &dims);
        assert_eq!(s, ProductVector::Basis(ProductLabel::new(vec![1, 0, 1])));
        let dense = a.to_dense(&dims);
        assert!((dense.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn local_vector_norm_check() {
        assert!(LocalVector::new(vec![c(1.0), c(1.0)]).is_err());
        assert!(LocalVector::new(vec![c(0.6), C64::new(0.0, 0.8)]).is_ok());
    }
}
