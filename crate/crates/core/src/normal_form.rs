//! Exact normal forms for the groups of the ξ and η polygons.
//!
//! With `R = R⁽¹²⁾_{2π/k}`, `S = R⁽³⁴⁾_{2π/m}` and `J = r₀₀`, every element
//! is `R^α S^β J^γ`, optionally preceded by `r_Q^δ` when `k` is odd. The
//! product follows from `J R_φ = R_φ⁻¹ J` and the centrality of `r_Q`.

use std::f64::consts::PI;

use nalgebra::Matrix4;
use serde::Serialize;
use thiserror::Error;

use crate::group::{GroupElement, GroupError, Parity, ParitySet, ReflectionGroup};
use crate::lattice::{r00, r_q, rotation12, rotation34, Family, LatticeConfig};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NormalFormError {
    #[error("parity is undefined: the group contains elements of both parities")]
    ParityUndefined,
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NormalFormFamily {
    Xi,
    EtaEvenK,
    EtaOddK,
}

impl NormalFormFamily {
    pub fn of(family: Family, cfg: &LatticeConfig) -> Self {
        match family {
            Family::Xi => Self::Xi,
            Family::Eta if cfg.k().is_multiple_of(2) => Self::EtaEvenK,
            Family::Eta => Self::EtaOddK,
        }
    }

    pub fn order(self, cfg: &LatticeConfig) -> usize {
        let base = 2 * cfg.m() as usize * cfg.k() as usize;
        match self {
            Self::EtaOddK => 2 * base,
            _ => base,
        }
    }
}

/// `r_Q^δ R^α S^β J^γ`; `delta` is always 0 outside the odd-`k` η family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct NormalFormElement {
    pub family: NormalFormFamily,
    pub m: u32,
    pub k: u32,
    pub alpha: u32,
    pub beta: u32,
    pub gamma: u32,
    pub delta: u32,
}

impl NormalFormElement {
    pub fn new(
        family: NormalFormFamily,
        cfg: &LatticeConfig,
        alpha: i64,
        beta: i64,
        gamma: i64,
        delta: i64,
    ) -> Self {
        let delta = if family == NormalFormFamily::EtaOddK { delta.rem_euclid(2) as u32 } else { 0 };
        Self {
            family,
            m: cfg.m(),
            k: cfg.k(),
            alpha: alpha.rem_euclid(cfg.k() as i64) as u32,
            beta: beta.rem_euclid(cfg.m() as i64) as u32,
            gamma: gamma.rem_euclid(2) as u32,
            delta,
        }
    }

    pub fn identity(family: NormalFormFamily, cfg: &LatticeConfig) -> Self {
        Self::new(family, cfg, 0, 0, 0, 0)
    }

    fn cfg(&self) -> LatticeConfig {
        LatticeConfig::new(self.m, self.k).expect("indices validated on construction")
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!((self.family, self.m, self.k), (other.family, other.m, other.k));
        let sign = if self.gamma == 0 { 1 } else { -1 };
        Self::new(
            self.family,
            &self.cfg(),
            self.alpha as i64 + sign * other.alpha as i64,
            self.beta as i64 + sign * other.beta as i64,
            (self.gamma + other.gamma) as i64,
            (self.delta + other.delta) as i64,
        )
    }

    pub fn inverse(&self) -> Self {
        let (a, b) = (self.alpha as i64, self.beta as i64);
        let (a, b) = if self.gamma == 0 { (-a, -b) } else { (a, b) };
        Self::new(self.family, &self.cfg(), a, b, self.gamma as i64, self.delta as i64)
    }

    pub fn matrix(&self) -> Matrix4<f64> {
        let a = 2.0 * PI * self.alpha as f64 / self.k as f64;
        let b = 2.0 * PI * self.beta as f64 / self.m as f64;
        let mut out = rotation12(a) * rotation34(b);
        if self.gamma == 1 {
            out *= r00();
        }
        if self.delta == 1 {
            out = r_q() * out;
        }
        out
    }
}

/// `σ(g) = γ` for ξ and `γ + δ` for η with odd `k`.
pub fn parity(g: &NormalFormElement) -> Result<Parity, NormalFormError> {
    match g.family {
        NormalFormFamily::Xi => Ok(Parity::from_bit(g.gamma)),
        NormalFormFamily::EtaOddK => Ok(Parity::from_bit(g.gamma + g.delta)),
        NormalFormFamily::EtaEvenK => Err(NormalFormError::ParityUndefined),
    }
}

/// Normal forms of the polygon-edge reflections, in edge order.
///
/// ξ edges lie on `γ₀₀, γ₁₀, γ₁₁, γ₀₁`; η edges on `γ₁₀, γ₁₁, γ₀₁, γ_Q`.
/// The reflection across `γ_ij` is `(α, β, γ) = (i, j, 1)`; `r_Q` equals
/// `R^{k/2}` for even `k` and is the extra central factor for odd `k`.
pub fn generator_normal_forms(family: Family, cfg: &LatticeConfig) -> Vec<NormalFormElement> {
    let nf = NormalFormFamily::of(family, cfg);
    let r = |i: i64, j: i64| NormalFormElement::new(nf, cfg, i, j, 1, 0);
    match nf {
        NormalFormFamily::Xi => vec![r(0, 0), r(1, 0), r(1, 1), r(0, 1)],
        NormalFormFamily::EtaEvenK => {
            vec![r(1, 0), r(1, 1), r(0, 1), NormalFormElement::new(nf, cfg, cfg.k() as i64 / 2, 0, 0, 0)]
        }
        NormalFormFamily::EtaOddK => {
            vec![r(1, 0), r(1, 1), r(0, 1), NormalFormElement::new(nf, cfg, 0, 0, 0, 1)]
        }
    }
}

/// All normal-form elements, in lexicographic index order.
pub fn enumerate(family: Family, cfg: &LatticeConfig) -> Vec<NormalFormElement> {
    let nf = NormalFormFamily::of(family, cfg);
    let deltas = if nf == NormalFormFamily::EtaOddK { 2 } else { 1 };
    let mut out = Vec::with_capacity(nf.order(cfg));
    for delta in 0..deltas {
        for alpha in 0..cfg.k() as i64 {
            for beta in 0..cfg.m() as i64 {
                for gamma in 0..2 {
                    out.push(NormalFormElement::new(nf, cfg, alpha, beta, gamma, delta));
                }
            }
        }
    }
    out
}

/// The group built by index enumeration. Parity evidence is the single value
/// of `σ` where defined and both parities otherwise.
pub fn normal_form_group(family: Family, cfg: &LatticeConfig) -> Result<ReflectionGroup, NormalFormError> {
    let generators: Vec<Matrix4<f64>> =
        generator_normal_forms(family, cfg).iter().map(NormalFormElement::matrix).collect();
    let elements = enumerate(family, cfg)
        .into_iter()
        .map(|g| GroupElement {
            matrix: g.matrix(),
            parity: parity(&g).map(ParitySet::single).unwrap_or_else(|_| ParitySet::both()),
        })
        .collect();
    Ok(ReflectionGroup::from_elements(&generators, elements)?)
}
