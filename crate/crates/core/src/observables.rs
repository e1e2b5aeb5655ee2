//! Local-observable decompositions of the two-copy quantities.
//!
//! For `φ1 = ⊗|x_n⟩`, `φ2 = ⊗|y_n⟩`:
//!
//! - `M = |φ1⟩⟨φ2| + h.c.`, `M̃ = −i|φ1⟩⟨φ2| + i|φ2⟩⟨φ1|`, so that
//!   `⟨M⟩ = 2 Re⟨φ1|ρ|φ2⟩` and `⟨M̃⟩ = −2 Im⟨φ1|ρ|φ2⟩`;
//! - `M_l = ⊗_n (e^{iθ}|y_n⟩⟨x_n| + e^{−iθ}|x_n⟩⟨y_n|)` with `θ = lπ/N`,
//!   and `M̃_l` the same with `θ = (lπ + π/2)/N`; then
//!   `Σ_l (−1)^l M_l = N·M` and `Σ_l (−1)^l M̃_l = N·M̃`.
//!
//! The element-type quantities use `M^s = |s⟩⟨x|+|x⟩⟨s|`,
//! `M̃^s = i|s⟩⟨x| − i|x⟩⟨s|` with the base projector on the other sites.

use nalgebra::DMatrix;

use crate::config::DENSE_CAP;
use crate::criteria::ElementFiducial;
use crate::qstate::{DimensionVector, LocalVector, ProductVector};
use crate::twocopy::SwapFiducial;
use crate::{Error, Result, C64};

fn check_cap(dims: &DimensionVector) -> Result<()> {
    if dims.total() > DENSE_CAP {
        return Err(Error::CapExceeded {
            dim: dims.total(),
            cap: DENSE_CAP,
        });
    }
    Ok(())
}

fn outer(a: &LocalVector, b: &LocalVector) -> DMatrix<C64> {
    a.as_vector() * b.as_vector().adjoint()
}

fn kron_all(factors: &[DMatrix<C64>]) -> DMatrix<C64> {
    let mut acc = DMatrix::from_element(1, 1, C64::from(1.0));
    for f in factors {
        acc = acc.kronecker(f);
    }
    acc
}

/// `|v⟩⟨v|` on the full space.
pub fn projector(v: &ProductVector, dims: &DimensionVector) -> Result<DMatrix<C64>> {
    v.check(dims)?;
    check_cap(dims)?;
    let dense = v.to_dense(dims);
    Ok(&dense * dense.adjoint())
}

/// Global and interference-decomposed observables for a swap fiducial.
#[derive(Clone, Debug)]
pub struct SwapObservables {
    pub m: DMatrix<C64>,
    pub m_tilde: DMatrix<C64>,
    /// `M_l` for `l = 1 … N` at index `l − 1`.
    pub m_l: Vec<DMatrix<C64>>,
    pub m_tilde_l: Vec<DMatrix<C64>>,
}

impl SwapObservables {
    /// `⟨φ1|ρ|φ2⟩` recovered from `tr(ρM)` and `tr(ρM̃)`.
    pub fn reconstruct(expect_m: f64, expect_m_tilde: f64) -> C64 {
        C64::new(expect_m, -expect_m_tilde) / 2.0
    }
}

pub fn build_swap_observables(fid: &SwapFiducial, dims: &DimensionVector) -> Result<SwapObservables> {
    fid.check(dims)?;
    check_cap(dims)?;
    let n = dims.sites();
    let phi1 = fid.phi1.to_dense(dims);
    let phi2 = fid.phi2.to_dense(dims);
    let a = &phi1 * phi2.adjoint();
    let i = C64::i();
    let m = &a + a.adjoint();
    let m_tilde = &a * (-i) + a.adjoint() * i;

    let xs: Vec<LocalVector> = (0..n).map(|s| fid.phi1.local(s, dims.local(s))).collect();
    let ys: Vec<LocalVector> = (0..n).map(|s| fid.phi2.local(s, dims.local(s))).collect();
    let product = |theta: f64| {
        let phase = C64::from_polar(1.0, theta);
        let factors: Vec<DMatrix<C64>> = (0..n)
            .map(|s| outer(&ys[s], &xs[s]) * phase + outer(&xs[s], &ys[s]) * phase.conj())
            .collect();
        kron_all(&factors)
    };
    let pi = std::f64::consts::PI;
    let m_l = (1..=n).map(|l| product(l as f64 * pi / n as f64)).collect();
    let m_tilde_l = (1..=n)
        .map(|l| product((l as f64 * pi + pi / 2.0) / n as f64))
        .collect();
    Ok(SwapObservables {
        m,
        m_tilde,
        m_l,
        m_tilde_l,
    })
}

/// Element-type observables for one `(i, j, s, t)`.
#[derive(Clone, Debug)]
pub struct ElementObservables {
    /// `⟨M^{st}_{ij}⟩ = 4 Re⟨ψ^s_i|ρ|ψ^t_j⟩`.
    pub m: DMatrix<C64>,
    /// `⟨M̃^{st}_{ij}⟩ = −4 Im⟨ψ^s_i|ρ|ψ^t_j⟩`.
    pub m_tilde: DMatrix<C64>,
    /// `M^s_i`, `M̃^s_i`, `M^t_j`, `M̃^t_j` as local matrices.
    pub local_s: (DMatrix<C64>, DMatrix<C64>),
    pub local_t: (DMatrix<C64>, DMatrix<C64>),
}

/// Sites `i`, `j` are 0-based and must differ; `s`, `t` must lie in `Ω`.
pub fn build_element_observables(
    fid: &ElementFiducial,
    dims: &DimensionVector,
    i: usize,
    j: usize,
    s: usize,
    t: usize,
) -> Result<ElementObservables> {
    let d = fid.check(dims)?;
    check_cap(dims)?;
    let n = dims.sites();
    if i == j || i >= n || j >= n {
        return Err(Error::InvalidFiducial(format!("site pair ({i}, {j}) invalid")));
    }
    if !fid.omega().contains(&s) || !fid.omega().contains(&t) {
        return Err(Error::InvalidFiducial(format!("({s}, {t}) not in Ω")));
    }
    let base = fid.base();
    let local = |site: usize, level: usize| {
        let x = LocalVector::basis(d, base.get(site));
        let e = LocalVector::basis(d, level);
        let up = outer(&e, &x);
        let plain = &up + up.adjoint();
        let tilde = &up * C64::i() - up.adjoint() * C64::i();
        (plain, tilde)
    };
    let (ms, mts) = local(i, s);
    let (mt, mtt) = local(j, t);
    let assemble = |fi: &DMatrix<C64>, fj: &DMatrix<C64>| {
        let factors: Vec<DMatrix<C64>> = (0..n)
            .map(|site| {
                if site == i {
                    fi.clone()
                } else if site == j {
                    fj.clone()
                } else {
                    let x = LocalVector::basis(d, base.get(site));
                    outer(&x, &x)
                }
            })
            .collect();
        kron_all(&factors)
    };
    let m = assemble(&ms, &mt) + assemble(&mts, &mtt);
    let m_tilde = assemble(&ms, &mtt) - assemble(&mts, &mt);
    Ok(ElementObservables {
        m,
        m_tilde,
        local_s: (ms, mts),
        local_t: (mt, mtt),
    })
}
