use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use super::{DensityOperator, DimensionVector, Mixture, ProductLabel, PureStateSparse};
use crate::{Error, Result, C64};

/// Simplex slack for parameters produced by floating-point ray arithmetic.
const SIMPLEX_SLACK: f64 = 1e-12;

/// `(|0…0⟩ + |1…1⟩)/√2` on `sites` qubits.
pub fn ghz_state(sites: usize) -> Result<PureStateSparse> {
    let dims = DimensionVector::uniform(sites, 2)?;
    PureStateSparse::new(
        vec![
            (ProductLabel::filled(sites, 0), C64::from(FRAC_1_SQRT_2)),
            (ProductLabel::filled(sites, 1), C64::from(FRAC_1_SQRT_2)),
        ],
        dims,
    )
}

/// `(|0…0⟩ − i|1…1⟩)/√2` on `sites` qubits.
pub fn ghz_tilde_state(sites: usize) -> Result<PureStateSparse> {
    let dims = DimensionVector::uniform(sites, 2)?;
    PureStateSparse::new(
        vec![
            (ProductLabel::filled(sites, 0), C64::from(FRAC_1_SQRT_2)),
            (ProductLabel::filled(sites, 1), C64::new(0.0, -FRAC_1_SQRT_2)),
        ],
        dims,
    )
}

/// Four-qutrit W state: equal superposition of the eight labels with a single
/// site excited to 1 or 2.
pub fn w_qutrit_state() -> Result<PureStateSparse> {
    let dims = DimensionVector::uniform(4, 3)?;
    let amp = C64::from(1.0 / (2.0 * 2f64.sqrt()));
    let mut terms = Vec::with_capacity(8);
    for excitation in 1..=2 {
        for site in 0..4 {
            terms.push((ProductLabel::filled(4, 0).with_site(site, excitation), amp));
        }
    }
    PureStateSparse::new(terms, dims)
}

/// Applies the cyclic shift `|x⟩ → |x+1 mod d⟩` on every site.
pub fn cyclic_shift(psi: &PureStateSparse) -> Result<PureStateSparse> {
    let dims = psi.dims().clone();
    psi.map_labels(|site, x| (x + 1) % dims.local(site))
}

fn check_simplex(p: f64, q: f64) -> Result<(f64, f64)> {
    let ok = p.is_finite()
        && q.is_finite()
        && p >= -SIMPLEX_SLACK
        && q >= -SIMPLEX_SLACK
        && p + q <= 1.0 + SIMPLEX_SLACK;
    if !ok {
        return Err(Error::OutsideSimplex { p, q });
    }
    let p = p.clamp(0.0, 1.0);
    let q = q.clamp(0.0, 1.0 - p);
    Ok((p, q))
}

fn two_component_mix(
    first: &PureStateSparse,
    second: &PureStateSparse,
    p: f64,
    q: f64,
) -> Result<DensityOperator> {
    let (p, q) = check_simplex(p, q)?;
    let noise = (1.0 - p - q).max(0.0);
    Ok(Mixture::new(
        vec![(p, first.clone()), (q, second.clone())],
        noise,
        first.dims().clone(),
    )?
    .into())
}

/// `p|G⟩⟨G| + q|G̃⟩⟨G̃| + (1−p−q)/2^N · 1`.
pub fn family_ghz_mix(sites: usize, p: f64, q: f64) -> Result<DensityOperator> {
    two_component_mix(&ghz_state(sites)?, &ghz_tilde_state(sites)?, p, q)
}

/// `p|W⟩⟨W| + q σ^{⊗4}|W⟩⟨W|σ^{⊗4} + (1−p−q)/81 · 1` on four qutrits.
pub fn family_w_qutrit_mix(p: f64, q: f64) -> Result<DensityOperator> {
    let w = w_qutrit_state()?;
    two_component_mix(&w, &cyclic_shift(&w)?, p, q)
}

/// A two-parameter state family over the simplex `p, q ≥ 0, p + q ≤ 1`.
#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    GhzMix { sites: usize },
    WQutritMix,
    /// `p|A⟩⟨A| + q|B⟩⟨B| + (1−p−q)/D · 1` for user-supplied pure states.
    Custom {
        first: PureStateSparse,
        second: PureStateSparse,
    },
}

impl Family {
    pub fn dims(&self) -> Result<DimensionVector> {
        match self {
            Family::GhzMix { sites } => DimensionVector::uniform(*sites, 2),
            Family::WQutritMix => DimensionVector::uniform(4, 3),
            Family::Custom { first, .. } => Ok(first.dims().clone()),
        }
    }

    pub fn state(&self, p: f64, q: f64) -> Result<DensityOperator> {
        match self {
            Family::GhzMix { sites } => family_ghz_mix(*sites, p, q),
            Family::WQutritMix => family_w_qutrit_mix(p, q),
            Family::Custom { first, second } => {
                if first.dims() != second.dims() {
                    return Err(Error::DimensionMismatch(
                        "custom family components differ in dimensions".into(),
                    ));
                }
                two_component_mix(first, second, p, q)
            }
        }
    }

    /// Short identifier used in file names.
    pub fn name(&self) -> String {
        match self {
            Family::GhzMix { sites } => format!("GhzMix{sites}"),
            Family::WQutritMix => "WQutritMix".into(),
            Family::Custom { .. } => "custom".into(),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// A family together with a point of its parameter simplex.
#[derive(Clone, Debug, PartialEq)]
pub struct FamilySpec {
    pub family: Family,
    p: f64,
    q: f64,
}

impl FamilySpec {
    pub fn new(family: Family, p: f64, q: f64) -> Result<Self> {
        let (p, q) = check_simplex(p, q)?;
        Ok(Self { family, p, q })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn state(&self) -> Result<DensityOperator> {
        self.family.state(self.p, self.q)
    }
}
