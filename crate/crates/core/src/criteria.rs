//! k-producibility and k-separability inequalities built from two-copy
//! permutation expectation values.
//!
//! Two inequality shapes are provided, each at two levels of the hierarchy:
//!
//! - **swap type**: `(2^m − 2)·|⟨φ1|ρ|φ2⟩| ≤ Σ_α √(⟨a_α|ρ|a_α⟩⟨b_α|ρ|b_α⟩)`
//!   over all nonempty proper subsets `α`, with `m = ⌈N/k⌉` for
//!   k-producibility ([`swap_producibility`]) and `m = k` for k-separability
//!   ([`swap_separability`]).
//! - **element type**: `Σ |⟨ψ^s_i|ρ|ψ^t_j⟩| ≤ Σ √(⟨ψ|ρ|ψ⟩⟨ψ^{st}_{ij}|ρ|ψ^{st}_{ij}⟩)
//!   + c·Σ ⟨ψ^s_i|ρ|ψ^s_i⟩` over ordered site pairs `i ≠ j` and `s, t ∈ Ω`,
//!   with `c = T(k−1)` for k-producibility ([`element_producibility`]) and
//!   `c = T(N−k)` for k-separability ([`element_separability`]).
//!
//! Every inequality is a sufficient condition only: a violation certifies the
//! entanglement property, a non-violation is inconclusive.

use std::collections::BTreeSet;
use std::fmt;

use crate::config::{SUBSET_SUM_MAX_SITES, VIOLATION_REL_TOL};
use crate::qstate::{DensityOperator, DimensionVector, ProductLabel, ProductVector};
use crate::twocopy::{enumerate_proper_subsets, partial_swap_unchecked, SwapFiducial};
use crate::{Error, Result};

/// Identifies which inequality produced a verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CriterionId {
    /// Swap-type k-producibility inequality.
    SwapProducibility,
    /// Element-type k-producibility inequality, `2 ≤ k ≤ N−1`.
    ElementProducibility,
    /// Element-type pairwise inequalities for full separability.
    ElementPairwise,
    /// Swap-type k-separability inequality.
    SwapSeparability,
    /// Element-type k-separability inequality.
    ElementSeparability,
    /// Fisher-information bound for k-producible qubit states.
    FisherProducibility,
    /// Fisher-information bound for k-separable qubit states.
    FisherSeparability,
    /// SU(d) collective-variance bound for 2-producible states.
    CollectiveVariance,
    /// Density-element W-type k-separability bound on flat indices.
    DensityElementSeparability,
    /// Density-element GHZ-type k-separability bound on flat indices.
    DensityGhzSeparability,
}

impl CriterionId {
    pub const ALL: [CriterionId; 10] = [
        CriterionId::SwapProducibility,
        CriterionId::ElementProducibility,
        CriterionId::ElementPairwise,
        CriterionId::SwapSeparability,
        CriterionId::ElementSeparability,
        CriterionId::FisherProducibility,
        CriterionId::FisherSeparability,
        CriterionId::CollectiveVariance,
        CriterionId::DensityElementSeparability,
        CriterionId::DensityGhzSeparability,
    ];

    /// Short identifier used in records, file names and on the command line.
    pub fn code(self) -> &'static str {
        match self {
            CriterionId::SwapProducibility => "thm1",
            CriterionId::ElementProducibility => "thm2",
            CriterionId::ElementPairwise => "thm2k1",
            CriterionId::SwapSeparability => "thm3",
            CriterionId::ElementSeparability => "thm4",
            CriterionId::FisherProducibility => "critI",
            CriterionId::FisherSeparability => "critII",
            CriterionId::CollectiveVariance => "critIII",
            CriterionId::DensityElementSeparability => "critIV",
            CriterionId::DensityGhzSeparability => "critGHZ",
        }
    }

    /// Case-insensitive lookup by [`code`](Self::code).
    pub fn from_code(code: &str) -> Option<Self> {
        let wanted = code.trim().to_ascii_lowercase();
        Self::ALL
            .into_iter()
            .find(|c| c.code().to_ascii_lowercase() == wanted)
    }
}

impl fmt::Display for CriterionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// What a violated inequality certifies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Conclusion {
    /// Not k-producible: contains entanglement spanning this many parties.
    PartiteEntanglement(usize),
    /// Not k-separable for this k.
    Nonseparable(usize),
    Inconclusive,
}

impl fmt::Display for Conclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Conclusion::PartiteEntanglement(m) => write!(f, "contains-{m}-partite-entanglement"),
            Conclusion::Nonseparable(k) => write!(f, "{k}-nonseparable"),
            Conclusion::Inconclusive => f.write_str("inconclusive"),
        }
    }
}

/// Outcome of one inequality evaluation. `margin = lhs − rhs`; the
/// inequality counts as violated when the margin exceeds
/// `1e-9·(1 + |lhs| + |rhs|)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CriterionVerdict {
    pub criterion: CriterionId,
    pub k: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub violated: bool,
    pub conclusion: Conclusion,
    /// Which sub-inequality this is, for criteria that produce several.
    pub detail: Option<String>,
    pub warnings: Vec<String>,
}

/// Tolerance below which a positive margin is not counted as a violation.
pub fn violation_tolerance(lhs: f64, rhs: f64) -> f64 {
    VIOLATION_REL_TOL * (1.0 + lhs.abs() + rhs.abs())
}

/// Formats a number for records and CSV output (10 significant digits).
pub fn format_number(x: f64) -> String {
    format!("{x:.9e}")
}

impl CriterionVerdict {
    pub fn new(criterion: CriterionId, k: usize, lhs: f64, rhs: f64, certifies: Conclusion) -> Self {
        let margin = lhs - rhs;
        let violated = margin > violation_tolerance(lhs, rhs);
        Self {
            criterion,
            k,
            lhs,
            rhs,
            margin,
            violated,
            conclusion: if violated { certifies } else { Conclusion::Inconclusive },
            detail: None,
            warnings: Vec::new(),
        }
    }

    pub fn with_detail(mut self, detail: String) -> Self {
        self.detail = Some(detail);
        self
    }

    pub fn with_warnings(mut self, warnings: Vec<String>) -> Self {
        self.warnings = warnings;
        self
    }

    pub const RECORD_HEADER: &'static str = "criterion,k,lhs,rhs,margin,violated,conclusion";

    /// One line matching [`RECORD_HEADER`](Self::RECORD_HEADER). A detail
    /// is appended in brackets and the field is quoted, since details
    /// contain commas.
    pub fn to_record(&self) -> String {
        let criterion = match &self.detail {
            Some(d) => format!("\"{}[{d}]\"", self.criterion),
            None => self.criterion.to_string(),
        };
        format!(
            "{criterion},{},{},{},{},{},{}",
            self.k,
            format_number(self.lhs),
            format_number(self.rhs),
            format_number(self.margin),
            self.violated,
            self.conclusion
        )
    }
}

/// `⌈N/k⌉`, the least number of parts in a k-producible split of `N` sites.
pub fn min_parts(sites: usize, k: usize) -> Result<usize> {
    check_k(k, 1, sites.saturating_sub(1))?;
    Ok(sites.div_ceil(k))
}

fn check_k(k: usize, min: usize, max: usize) -> Result<()> {
    if k < min || k > max {
        return Err(Error::KOutOfRange { k, min, max });
    }
    Ok(())
}

/// `(|⟨φ1|ρ|φ2⟩|, Σ_α √⟨Φ|P_α† ρ⊗ρ P_α|Φ⟩)`, streaming over all proper
/// subsets.
fn swap_sums(rho: &DensityOperator, fid: &SwapFiducial) -> Result<(f64, f64)> {
    let dims = rho.dims();
    if dims.sites() > SUBSET_SUM_MAX_SITES {
        return Err(Error::SiteCountOutOfRange(dims.sites()));
    }
    fid.check(dims)?;
    let coherence = rho.element_unchecked(&fid.phi1, &fid.phi2).norm();
    let mut total = 0.0;
    for alpha in enumerate_proper_subsets(dims.sites())? {
        total += partial_swap_unchecked(rho, fid, alpha).max(0.0).sqrt();
    }
    Ok((coherence, total))
}

fn prefactor(m: usize) -> f64 {
    2f64.powi(m as i32) - 2.0
}

/// Swap-type k-producibility test, `1 ≤ k ≤ N−1`. A violation certifies
/// `(k+1)`-partite entanglement.
pub fn swap_producibility(
    rho: &DensityOperator,
    fid: &SwapFiducial,
    k: usize,
) -> Result<CriterionVerdict> {
    let r = min_parts(rho.dims().sites(), k)?;
    let (coherence, rhs) = swap_sums(rho, fid)?;
    Ok(CriterionVerdict::new(
        CriterionId::SwapProducibility,
        k,
        prefactor(r) * coherence,
        rhs,
        Conclusion::PartiteEntanglement(k + 1),
    ))
}

/// Swap-type k-separability test, `2 ≤ k ≤ N`. A violation certifies
/// k-nonseparability.
pub fn swap_separability(
    rho: &DensityOperator,
    fid: &SwapFiducial,
    k: usize,
) -> Result<CriterionVerdict> {
    check_k(k, 2, rho.dims().sites())?;
    let (coherence, rhs) = swap_sums(rho, fid)?;
    Ok(CriterionVerdict::new(
        CriterionId::SwapSeparability,
        k,
        prefactor(k) * coherence,
        rhs,
        Conclusion::Nonseparable(k),
    ))
}

/// Base label `x` and local index set `Ω` defining the vectors
/// `|ψ^s_i⟩ = |x_0 … s … x_{N−1}⟩` (site `i` replaced by `s ∈ Ω`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementFiducial {
    base: ProductLabel,
    omega: Vec<usize>,
}

impl ElementFiducial {
    pub fn new(base: ProductLabel, omega: Vec<usize>) -> Result<Self> {
        if omega.is_empty() {
            return Err(Error::InvalidFiducial("Ω is empty".into()));
        }
        let distinct: BTreeSet<_> = omega.iter().collect();
        if distinct.len() != omega.len() {
            return Err(Error::InvalidFiducial(format!("Ω {omega:?} has duplicates")));
        }
        Ok(Self { base, omega })
    }

    /// Base `0…0` with `Ω = {1, …, d−1}`.
    pub fn lowest_with_all_excitations(sites: usize, d: usize) -> Result<Self> {
        Self::new(ProductLabel::filled(sites, 0), (1..d).collect())
    }

    pub fn base(&self) -> &ProductLabel {
        &self.base
    }

    pub fn omega(&self) -> &[usize] {
        &self.omega
    }

    /// Checks against `dims` and returns the common local dimension.
    pub fn check(&self, dims: &DimensionVector) -> Result<usize> {
        let d = dims
            .uniform_dim()
            .ok_or_else(|| Error::UnequalDimensions(dims.dims().to_vec()))?;
        dims.check_label(&self.base)?;
        if let Some(&w) = self.omega.iter().find(|&&w| w >= d) {
            return Err(Error::InvalidFiducial(format!(
                "Ω entry {w} not below local dimension {d}"
            )));
        }
        Ok(d)
    }

    /// Notes for each `(site, s)` where `s` equals the base label, so that
    /// `|ψ^s_i⟩` coincides with the base vector.
    pub fn degeneracy_warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        for &s in &self.omega {
            let sites: Vec<String> = self
                .base
                .iter()
                .enumerate()
                .filter(|(_, &x)| x == s)
                .map(|(i, _)| (i + 1).to_string())
                .collect();
            if !sites.is_empty() {
                out.push(format!(
                    "omega entry {s} equals the base label at site(s) {}",
                    sites.join(",")
                ));
            }
        }
        out
    }
}

/// The three sums shared by the element-type inequalities.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ElementSums {
    /// `Σ_{i≠j, s, t} |⟨ψ^s_i|ρ|ψ^t_j⟩|`
    pub coherences: f64,
    /// `Σ_{i≠j, s, t} √(⟨ψ|ρ|ψ⟩⟨ψ^{st}_{ij}|ρ|ψ^{st}_{ij}⟩)`
    pub geometric: f64,
    /// `Σ_{i, s} ⟨ψ^s_i|ρ|ψ^s_i⟩`
    pub populations: f64,
}

pub fn element_sums(rho: &DensityOperator, fid: &ElementFiducial) -> Result<ElementSums> {
    let dims = rho.dims();
    fid.check(dims)?;
    let n = dims.sites();
    let basis = |l: ProductLabel| ProductVector::Basis(l);
    let base = &fid.base;
    let base_pop = rho.diagonal_unchecked(&basis(base.clone())).max(0.0);

    let mut sums = ElementSums {
        coherences: 0.0,
        geometric: 0.0,
        populations: 0.0,
    };
    for i in 0..n {
        for &s in &fid.omega {
            let psi_si = basis(base.with_site(i, s));
            sums.populations += rho.diagonal_unchecked(&psi_si);
            for j in (0..n).filter(|&j| j != i) {
                for &t in &fid.omega {
                    let psi_tj = basis(base.with_site(j, t));
                    sums.coherences += rho.element_unchecked(&psi_si, &psi_tj).norm();
                    let double = basis(base.with_site(i, s).with_site(j, t));
                    let pop = rho.diagonal_unchecked(&double).max(0.0);
                    sums.geometric += (base_pop * pop).sqrt();
                }
            }
        }
    }
    Ok(sums)
}

/// Element-type k-producibility test, `2 ≤ k ≤ N−1`. A violation certifies
/// `(k+1)`-partite entanglement.
pub fn element_producibility(
    rho: &DensityOperator,
    fid: &ElementFiducial,
    k: usize,
) -> Result<CriterionVerdict> {
    let n = rho.dims().sites();
    check_k(k, 2, n.saturating_sub(1))?;
    let sums = element_sums(rho, fid)?;
    let t = fid.omega.len() as f64;
    Ok(CriterionVerdict::new(
        CriterionId::ElementProducibility,
        k,
        sums.coherences,
        sums.geometric + t * (k - 1) as f64 * sums.populations,
        Conclusion::PartiteEntanglement(k + 1),
    )
    .with_warnings(fid.degeneracy_warnings()))
}

/// Element-type k-separability test, `2 ≤ k ≤ N`. At `k = N` the population
/// term drops out and the inequality is the sum of the pairwise ones.
pub fn element_separability(
    rho: &DensityOperator,
    fid: &ElementFiducial,
    k: usize,
) -> Result<CriterionVerdict> {
    let n = rho.dims().sites();
    check_k(k, 2, n)?;
    let sums = element_sums(rho, fid)?;
    let t = fid.omega.len() as f64;
    Ok(CriterionVerdict::new(
        CriterionId::ElementSeparability,
        k,
        sums.coherences,
        sums.geometric + t * (n - k) as f64 * sums.populations,
        Conclusion::Nonseparable(k),
    )
    .with_warnings(fid.degeneracy_warnings()))
}

/// Pairwise inequalities `|⟨ψ^s_i|ρ|ψ^t_j⟩| ≤ √(⟨ψ|ρ|ψ⟩⟨ψ^{st}_{ij}|ρ|ψ^{st}_{ij}⟩)`,
/// one verdict per unordered pair `i < j` and ordered `(s, t) ∈ Ω²`. Any
/// violation certifies 2-partite entanglement. Sites in `detail` are 1-based.
pub fn element_pairwise(
    rho: &DensityOperator,
    fid: &ElementFiducial,
) -> Result<Vec<CriterionVerdict>> {
    let dims = rho.dims();
    fid.check(dims)?;
    let n = dims.sites();
    let basis = |l: ProductLabel| ProductVector::Basis(l);
    let base = &fid.base;
    let base_pop = rho.diagonal_unchecked(&basis(base.clone())).max(0.0);
    let warnings = fid.degeneracy_warnings();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for &s in &fid.omega {
                for &t in &fid.omega {
                    let psi_si = basis(base.with_site(i, s));
                    let psi_tj = basis(base.with_site(j, t));
                    let lhs = rho.element_unchecked(&psi_si, &psi_tj).norm();
                    let double = basis(base.with_site(i, s).with_site(j, t));
                    let rhs = (base_pop * rho.diagonal_unchecked(&double).max(0.0)).sqrt();
                    out.push(
                        CriterionVerdict::new(
                            CriterionId::ElementPairwise,
                            1,
                            lhs,
                            rhs,
                            Conclusion::PartiteEntanglement(2),
                        )
                        .with_detail(format!("i={},j={},s={s},t={t}", i + 1, j + 1))
                        .with_warnings(warnings.clone()),
                    );
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::{
        family_ghz_mix, family_w_qutrit_mix, ghz_state, w_qutrit_state, PureStateSparse,
    };
    use crate::C64;

    fn ghz_fid(n: usize) -> SwapFiducial {
        SwapFiducial::new(ProductLabel::filled(n, 0), ProductLabel::filled(n, 1))
    }

    fn w_fid(base: usize) -> ElementFiducial {
        ElementFiducial::new(ProductLabel::filled(4, base), vec![1, 2]).unwrap()
    }

    #[test]
    fn min_parts_values() {
        assert_eq!(min_parts(10, 3).unwrap(), 4);
        assert_eq!(min_parts(10, 5).unwrap(), 2);
        assert_eq!(min_parts(9, 3).unwrap(), 3);
        assert!(min_parts(10, 0).is_err());
        assert!(min_parts(10, 10).is_err());
    }

    #[test]
    fn pure_ghz10_violates_producibility() {
        let rho = DensityOperator::pure(ghz_state(10).unwrap());
        let v = swap_producibility(&rho, &ghz_fid(10), 3).unwrap();
        assert!((v.lhs - 7.0).abs() < 1e-12);
        assert_eq!(v.rhs, 0.0);
        assert!(v.violated);
        assert_eq!(v.conclusion, Conclusion::PartiteEntanglement(4));

        let v = swap_separability(&rho, &ghz_fid(10), 2).unwrap();
        assert!((v.lhs - 1.0).abs() < 1e-12);
        assert!(v.violated);
        assert_eq!(v.conclusion, Conclusion::Nonseparable(2));
    }

    #[test]
    fn ghz_mix_closed_form() {
        let rho = family_ghz_mix(10, 0.2, 0.1).unwrap();
        let v = swap_producibility(&rho, &ghz_fid(10), 3).unwrap();
        let lhs = 14.0 * 0.0125f64.sqrt();
        let rhs = 1022.0 * 0.7 / 1024.0;
        assert!((v.lhs - lhs).abs() < 1e-12);
        assert!((v.rhs - rhs).abs() < 1e-12);
        assert!((v.lhs - 1.565247584).abs() < 1e-9);
        assert!((v.rhs - 0.698632812).abs() < 1e-9);
        assert!(v.violated);
    }

    #[test]
    fn maximally_mixed_never_violates() {
        let rho = family_ghz_mix(6, 0.0, 0.0).unwrap();
        for k in 1..6 {
            let v = swap_producibility(&rho, &ghz_fid(6), k).unwrap();
            assert_eq!(v.lhs, 0.0);
            assert!(!v.violated);
            assert_eq!(v.conclusion, Conclusion::Inconclusive);
        }
        let rho = family_w_qutrit_mix(0.0, 0.0).unwrap();
        for k in 2..=4 {
            let v = element_separability(&rho, &w_fid(0), k).unwrap();
            assert_eq!(v.lhs, 0.0);
            assert!(!v.violated);
        }
    }

    #[test]
    fn separable_basis_mixture_has_zero_lhs() {
        let dims = DimensionVector::uniform(4, 2).unwrap();
        let a = PureStateSparse::new(vec![(ProductLabel::parse("0101").unwrap(), C64::from(1.0))], dims.clone()).unwrap();
        let b = PureStateSparse::new(vec![(ProductLabel::parse("1100").unwrap(), C64::from(1.0))], dims.clone()).unwrap();
        let rho: DensityOperator = crate::qstate::Mixture::new(vec![(0.3, a), (0.5, b)], 0.2, dims).unwrap().into();
        for k in 2..=4 {
            let v = swap_separability(&rho, &ghz_fid(4), k).unwrap();
            assert_eq!(v.lhs, 0.0);
            assert!(!v.violated);
        }
    }

    #[test]
    fn pure_w_element_values() {
        let rho = DensityOperator::pure(w_qutrit_state().unwrap());
        let fid = w_fid(0);
        for (k, rhs) in [(2usize, 2.0), (3, 4.0)] {
            let v = element_producibility(&rho, &fid, k).unwrap();
            assert!((v.lhs - 6.0).abs() < 1e-12);
            assert!((v.rhs - rhs).abs() < 1e-12);
            assert!(v.violated);
            assert_eq!(v.conclusion, Conclusion::PartiteEntanglement(k + 1));
            assert!(v.warnings.is_empty());
        }
        let v = element_separability(&rho, &fid, 2).unwrap();
        assert!((v.lhs - 6.0).abs() < 1e-12);
        assert!((v.rhs - 4.0).abs() < 1e-12);
        assert_eq!(v.conclusion, Conclusion::Nonseparable(2));
    }

    #[test]
    fn w_mix_producibility_threshold_closed_form() {
        // violation iff 4p > 64(1-p)/81
        let fid = w_fid(0);
        let pstar = 16.0 / 97.0;
        for (p, expect) in [(pstar - 1e-6, false), (pstar + 1e-6, true)] {
            let rho = family_w_qutrit_mix(p, 0.0).unwrap();
            let v = element_producibility(&rho, &fid, 2).unwrap();
            assert!((v.lhs - 6.0 * p).abs() < 1e-12);
            assert!((v.rhs - (2.0 * p + 64.0 * (1.0 - p) / 81.0)).abs() < 1e-12);
            assert_eq!(v.violated, expect);
        }
        // separability at k=3 shares the same numbers
        let rho = family_w_qutrit_mix(0.3, 0.0).unwrap();
        let v = element_separability(&rho, &fid, 3).unwrap();
        let rhs = 48.0 * 0.7 / 81.0 + 2.0 * (0.3 + 8.0 * 0.7 / 81.0);
        assert!((v.rhs - rhs).abs() < 1e-12);
    }

    #[test]
    fn degenerate_omega_is_flagged() {
        let rho = family_w_qutrit_mix(0.0, 1.0).unwrap();
        let v = element_separability(&rho, &w_fid(1), 3).unwrap();
        assert_eq!(v.warnings.len(), 1);
        assert!(v.violated);
    }

    #[test]
    fn pairwise_on_bell_pair() {
        // (|01⟩ + |10⟩)/√2 ⊗ |00⟩
        let dims = DimensionVector::uniform(4, 2).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let psi = PureStateSparse::new(
            vec![
                (ProductLabel::parse("0100").unwrap(), C64::from(h)),
                (ProductLabel::parse("1000").unwrap(), C64::from(h)),
            ],
            dims.clone(),
        )
        .unwrap();
        let rho = DensityOperator::pure(psi);
        let fid = ElementFiducial::new(ProductLabel::filled(4, 0), vec![1]).unwrap();
        let verdicts = element_pairwise(&rho, &fid).unwrap();
        assert_eq!(verdicts.len(), 6);
        let first = &verdicts[0];
        assert_eq!(first.detail.as_deref(), Some("i=1,j=2,s=1,t=1"));
        assert!((first.lhs - 0.5).abs() < 1e-12);
        assert_eq!(first.rhs, 0.0);
        assert!(first.violated);
        assert_eq!(first.conclusion, Conclusion::PartiteEntanglement(2));
        assert!(verdicts[1..].iter().all(|v| !v.violated));

        let product = PureStateSparse::new(vec![(ProductLabel::filled(4, 0), C64::from(1.0))], dims).unwrap();
        let rho = DensityOperator::pure(product);
        assert!(element_pairwise(&rho, &fid).unwrap().iter().all(|v| v.lhs == 0.0 && !v.violated));
    }

    #[test]
    fn k_ranges_and_dimension_rules() {
        let rho = family_ghz_mix(4, 0.5, 0.0).unwrap();
        assert!(swap_producibility(&rho, &ghz_fid(4), 4).is_err());
        assert!(swap_separability(&rho, &ghz_fid(4), 1).is_err());
        assert!(swap_separability(&rho, &ghz_fid(4), 4).is_ok());
        let fid = ElementFiducial::new(ProductLabel::filled(4, 0), vec![1]).unwrap();
        assert!(element_producibility(&rho, &fid, 1).is_err());
        assert!(element_producibility(&rho, &fid, 4).is_err());
        assert!(element_separability(&rho, &fid, 4).is_ok());
        assert!(ElementFiducial::new(ProductLabel::filled(4, 0), vec![1, 1]).is_err());
        let bad = ElementFiducial::new(ProductLabel::filled(4, 0), vec![2]).unwrap();
        assert!(element_producibility(&rho, &bad, 2).is_err());

        let mixed = DimensionVector::new(vec![2, 3]).unwrap();
        let psi = PureStateSparse::new(vec![(ProductLabel::filled(2, 0), C64::from(1.0))], mixed).unwrap();
        let rho = DensityOperator::pure(psi);
        let fid = ElementFiducial::new(ProductLabel::filled(2, 0), vec![1]).unwrap();
        assert!(matches!(element_pairwise(&rho, &fid), Err(Error::UnequalDimensions(_))));
    }

    #[test]
    fn record_format() {
        let v = CriterionVerdict::new(CriterionId::SwapProducibility, 3, 1.5, 0.5, Conclusion::PartiteEntanglement(4));
        assert_eq!(
            v.to_record(),
            "thm1,3,1.500000000e0,5.000000000e-1,1.000000000e0,true,contains-4-partite-entanglement"
        );
        let pair = CriterionVerdict::new(CriterionId::ElementPairwise, 1, 0.5, 0.0, Conclusion::PartiteEntanglement(2))
            .with_detail("i=1,j=2,s=1,t=1".into());
        assert!(pair.to_record().starts_with("\"thm2k1[i=1,j=2,s=1,t=1]\",1,"));
        assert_eq!(CriterionId::from_code("CRITiii"), Some(CriterionId::CollectiveVariance));
        assert_eq!(CriterionId::from_code("nope"), None);
    }
}
