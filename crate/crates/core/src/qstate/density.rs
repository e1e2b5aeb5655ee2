use nalgebra::{DMatrix, DVector, SymmetricEigen};

use super::{DimensionVector, ProductVector, PureStateSparse};
use crate::config::{DENSE_CAP, DENSE_TOL, NORM_TOL};
use crate::{Error, Result, C64};

/// Dense density matrix in flat computational-basis order.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseState {
    matrix: DMatrix<C64>,
    dims: DimensionVector,
}

impl DenseState {
    /// Validates Hermiticity, unit trace and positivity (all to 1e-10).
    pub fn new(matrix: DMatrix<C64>, dims: DimensionVector) -> Result<Self> {
        let state = Self::check_shape(matrix, dims)?;
        let herm = state.hermiticity_error();
        if herm > DENSE_TOL {
            return Err(Error::InvalidState(format!("not Hermitian (deviation {herm:e})")));
        }
        let trace = state.matrix.trace();
        if (trace.re - 1.0).abs() > DENSE_TOL || trace.im.abs() > DENSE_TOL {
            return Err(Error::InvalidState(format!("trace {trace} is not 1")));
        }
        let eig = SymmetricEigen::new(state.matrix.clone());
        let min = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
        if min < -DENSE_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        Ok(state)
    }

    /// Skips the spectral check; shape is still verified.
    pub(crate) fn new_unchecked(matrix: DMatrix<C64>, dims: DimensionVector) -> Self {
        debug_assert_eq!(matrix.nrows(), dims.total());
        Self { matrix, dims }
    }

    fn check_shape(matrix: DMatrix<C64>, dims: DimensionVector) -> Result<Self> {
        let d = dims.total();
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix for total dimension {d}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(Self { matrix, dims })
    }

    /// `|ψ⟩⟨ψ|` for a normalized dense vector.
    pub fn from_pure(psi: &DVector<C64>, dims: DimensionVector) -> Result<Self> {
        let norm = psi.norm();
        if (norm - 1.0).abs() > NORM_TOL * 10.0 {
            return Err(Error::InvalidState(format!("pure vector has norm {norm}")));
        }
        Self::check_shape(psi * psi.adjoint(), dims)
    }

    pub fn maximally_mixed(dims: DimensionVector) -> Self {
        let d = dims.total();
        Self::new_unchecked(DMatrix::identity(d, d) * C64::from(1.0 / d as f64), dims)
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn dims(&self) -> &DimensionVector {
        &self.dims
    }

    /// Largest `|ρ_ab − conj(ρ_ba)|`.
    pub fn hermiticity_error(&self) -> f64 {
        let m = &self.matrix;
        let n = m.nrows();
        let mut worst = 0.0f64;
        for a in 0..n {
            for b in a..n {
                worst = worst.max((m[(a, b)] - m[(b, a)].conj()).norm());
            }
        }
        worst
    }
}

/// Structured mixture `Σ_m p_m |φ_m⟩⟨φ_m| + w · 1/D` with sparse pure
/// components and an explicit white-noise weight `w`.
#[derive(Clone, Debug, PartialEq)]
pub struct Mixture {
    components: Vec<(f64, PureStateSparse)>,
    noise: f64,
    dims: DimensionVector,
}

impl Mixture {
    /// Components with weight exactly zero are dropped; negative weights and
    /// weights not summing to 1 (within 1e-12) are rejected.
    pub fn new(
        components: Vec<(f64, PureStateSparse)>,
        noise: f64,
        dims: DimensionVector,
    ) -> Result<Self> {
        if noise < 0.0 || !noise.is_finite() {
            return Err(Error::InvalidState(format!("noise weight {noise} is negative")));
        }
        let mut kept = Vec::with_capacity(components.len());
        let mut total = noise;
        for (w, psi) in components {
            if w < 0.0 || !w.is_finite() {
                return Err(Error::InvalidState(format!("component weight {w} is negative")));
            }
            if psi.dims() != &dims {
                return Err(Error::DimensionMismatch(
                    "mixture component has different dimensions".into(),
                ));
            }
            total += w;
            if w > 0.0 {
                kept.push((w, psi));
            }
        }
        if (total - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidState(format!("weights sum to {total}, not 1")));
        }
        Ok(Self {
            components: kept,
            noise,
            dims,
        })
    }

    pub fn maximally_mixed(dims: DimensionVector) -> Self {
        Self {
            components: Vec::new(),
            noise: 1.0,
            dims,
        }
    }

    pub fn components(&self) -> &[(f64, PureStateSparse)] {
        &self.components
    }

    pub fn noise(&self) -> f64 {
        self.noise
    }

    pub fn dims(&self) -> &DimensionVector {
        &self.dims
    }

    fn element(&self, bra: &ProductVector, ket: &ProductVector) -> C64 {
        let coherent: C64 = self
            .components
            .iter()
            .map(|(w, psi)| *w * psi.overlap(bra) * psi.overlap(ket).conj())
            .sum();
        if self.noise == 0.0 {
            coherent
        } else {
            coherent + bra.inner(ket) * (self.noise / self.dims.total() as f64)
        }
    }
}

/// A mixed state, either dense or structured.
#[derive(Clone, Debug, PartialEq)]
pub enum DensityOperator {
    Dense(DenseState),
    Mixture(Mixture),
}

impl From<DenseState> for DensityOperator {
    fn from(s: DenseState) -> Self {
        DensityOperator::Dense(s)
    }
}

impl From<Mixture> for DensityOperator {
    fn from(m: Mixture) -> Self {
        DensityOperator::Mixture(m)
    }
}

impl DensityOperator {
    pub fn pure(psi: PureStateSparse) -> Self {
        let dims = psi.dims().clone();
        DensityOperator::Mixture(Mixture {
            components: vec![(1.0, psi)],
            noise: 0.0,
            dims,
        })
    }

    pub fn dims(&self) -> &DimensionVector {
        match self {
            DensityOperator::Dense(s) => s.dims(),
            DensityOperator::Mixture(m) => m.dims(),
        }
    }

    /// `⟨bra|ρ|ket⟩` for product vectors. Mixtures are evaluated term by term
    /// without forming a matrix.
    pub fn matrix_element(&self, bra: &ProductVector, ket: &ProductVector) -> Result<C64> {
        bra.check(self.dims())?;
        ket.check(self.dims())?;
        Ok(self.element_unchecked(bra, ket))
    }

    pub(crate) fn element_unchecked(&self, bra: &ProductVector, ket: &ProductVector) -> C64 {
        match self {
            DensityOperator::Mixture(m) => m.element(bra, ket),
            DensityOperator::Dense(s) => match (bra, ket) {
                (ProductVector::Basis(a), ProductVector::Basis(b)) => {
                    let dims = s.dims();
                    s.matrix[(dims.flat_index(a.as_slice()), dims.flat_index(b.as_slice()))]
                }
                _ => {
                    let u = bra.to_dense(s.dims());
                    let v = ket.to_dense(s.dims());
                    u.dotc(&(&s.matrix * v))
                }
            },
        }
    }

    /// Element at flat indices `(a, b)`.
    pub fn element_at(&self, a: usize, b: usize) -> C64 {
        match self {
            DensityOperator::Dense(s) => s.matrix[(a, b)],
            DensityOperator::Mixture(m) => {
                let dims = m.dims();
                m.element(
                    &ProductVector::Basis(dims.label_at(a)),
                    &ProductVector::Basis(dims.label_at(b)),
                )
            }
        }
    }

    /// Real part of the diagonal element `⟨v|ρ|v⟩`.
    pub(crate) fn diagonal_unchecked(&self, v: &ProductVector) -> f64 {
        self.element_unchecked(v, v).re
    }

    /// Expands into a dense matrix, refusing totals above `cap`.
    pub fn to_dense_with_cap(&self, cap: usize) -> Result<DenseState> {
        let dims = self.dims().clone();
        let d = dims.total();
        if d > cap {
            return Err(Error::CapExceeded { dim: d, cap });
        }
        match self {
            DensityOperator::Dense(s) => Ok(s.clone()),
            DensityOperator::Mixture(m) => {
                let mut rho = DMatrix::<C64>::zeros(d, d);
                for (w, psi) in &m.components {
                    let idx: Vec<(usize, C64)> = psi
                        .terms()
                        .map(|(l, &a)| (dims.flat_index(l.as_slice()), a))
                        .collect();
                    for &(i, ai) in &idx {
                        for &(j, aj) in &idx {
                            rho[(i, j)] += ai * aj.conj() * *w;
                        }
                    }
                }
                let diag = C64::from(m.noise / d as f64);
                for i in 0..d {
                    rho[(i, i)] += diag;
                }
                Ok(DenseState::new_unchecked(rho, dims))
            }
        }
    }

    pub fn to_dense(&self) -> Result<DenseState> {
        self.to_dense_with_cap(DENSE_CAP)
    }

    /// `tr(ρ A)` for a dense operator `A` on the full space.
    pub fn expectation(&self, op: &DMatrix<C64>) -> Result<C64> {
        let d = self.dims().total();
        if op.nrows() != d || op.ncols() != d {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} operator for total dimension {d}",
                op.nrows(),
                op.ncols()
            )));
        }
        Ok(match self {
            DensityOperator::Dense(s) => {
                let m = s.matrix();
                let mut acc = C64::from(0.0);
                for b in 0..d {
                    for a in 0..d {
                        acc += m[(a, b)] * op[(b, a)];
                    }
                }
                acc
            }
            DensityOperator::Mixture(mix) => {
                let dims = mix.dims();
                let mut acc = C64::from(0.0);
                for (w, psi) in &mix.components {
                    let idx: Vec<(usize, C64)> = psi
                        .terms()
                        .map(|(l, &a)| (dims.flat_index(l.as_slice()), a))
                        .collect();
                    let mut e = C64::from(0.0);
                    for &(i, ai) in &idx {
                        for &(j, aj) in &idx {
                            e += ai.conj() * op[(i, j)] * aj;
                        }
                    }
                    acc += e * *w;
                }
                if mix.noise > 0.0 {
                    acc += op.trace() * (mix.noise / d as f64);
                }
                acc
            }
        })
    }
}
