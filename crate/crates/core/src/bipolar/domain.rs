//! Fundamental domain of `ψ̃`, its Euler characteristic, area bounds and the
//! embeddedness verdict.

use num_rational::Rational64;
use serde::Serialize;

use super::{BipolarError, CertifiedRelation, LawsonSurface};
use crate::complex::{minus_identity_face_map, quotient_by_minus_identity, ComplexKind, SurfaceComplex};
use crate::exterior::EPS;
use crate::group::{minus_identity_status, MinusIdentityStatus};
use crate::lattice::{Family, LatticeConfig};

/// A vertex image whose classes on the domain have pairwise distinct tangent
/// planes, so no covering map of the domain can leave `ψ̃` invariant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PinningWitness {
    pub label: String,
    pub multiplicity: usize,
}

#[derive(Clone, Debug)]
pub struct FundamentalDomain {
    pub kind: ComplexKind,
    pub complex: SurfaceComplex,
    pub chi: i64,
    pub orientable: bool,
    pub minus_identity: MinusIdentityStatus,
    /// Number of `−𝟙₄`-paired class couples whose planes were checked equal.
    pub paired_classes_checked: usize,
    pub pinning: Option<PinningWitness>,
}

impl FundamentalDomain {
    pub fn degree(&self) -> i64 {
        if self.kind.is_quotient() {
            2
        } else {
            1
        }
    }
}

/// `−𝟙₄` acts on the base domain compatibly with `ψ̃` when it preserves the
/// sign of every face: even parity on `S`, any parity on `S̄`.
fn quotient_candidate(surface: &LawsonSurface, status: MinusIdentityStatus) -> bool {
    if surface.cover().is_some() {
        status.is_present()
    } else {
        status == MinusIdentityStatus::PresentEven
    }
}

/// Decides the domain: the base domain, divided by `−𝟙₄` when `−𝟙₄` preserves
/// `ψ̃` and pairs classes with equal tangent planes. A pinning witness records
/// a vertex image of multiplicity at least 2 with pairwise distinct planes.
pub fn fundamental_domain_decision(surface: &LawsonSurface, eps: f64) -> Result<FundamentalDomain, BipolarError> {
    let base = surface.base_domain();
    let status = minus_identity_status(surface.group());
    let mut checked = 0;
    let complex = if quotient_candidate(surface, status) {
        let map = minus_identity_face_map(surface.group(), base)?;
        for v in 0..base.vertices().len() {
            let (f, c) = base.vertices()[v][0];
            let w = base.corner_vertex(map[f], c);
            if w < v {
                continue;
            }
            let (x, y) = (surface.class_image(base, v)?, surface.class_image(base, w)?);
            if !x.approx_eq(&y, super::IMAGE_TOL) {
                return Err(BipolarError::InconsistentEvidence(format!(
                    "-1 moves vertex class {v} to {w} with a different image"
                )));
            }
            let r = super::certify(&surface.class_plane(base, v), &surface.class_plane(base, w), true, eps);
            if r != CertifiedRelation::Equal {
                return Err(BipolarError::InconsistentEvidence(format!(
                    "-1 pairs vertex classes {v} and {w} whose tangent planes are {r:?}"
                )));
            }
            checked += 1;
        }
        quotient_by_minus_identity(surface.group(), base)?
    } else {
        base.clone()
    };

    let mut pinning: Option<PinningWitness> = None;
    for v in 0..surface.points().len() {
        let c = surface.classify_planes(&complex, v, eps)?;
        let mu = c.classes.len();
        if mu >= 2 && c.pairwise_distinct() && pinning.as_ref().is_none_or(|p| mu > p.multiplicity) {
            pinning = Some(PinningWitness { label: c.label, multiplicity: mu });
        }
    }

    Ok(FundamentalDomain {
        kind: complex.kind(),
        chi: complex.euler_characteristic(),
        orientable: complex.is_orientable(),
        complex,
        minus_identity: status,
        paired_classes_checked: checked,
        pinning,
    })
}

pub fn bipolar_orientability(domain: &FundamentalDomain) -> bool {
    domain.complex.is_orientable()
}

/// Closed form: `1 − (m−1)(k−1)` when both indices are even, twice that
/// otherwise, for both families.
pub fn closed_form_chi_bipolar(_family: Family, cfg: &LatticeConfig) -> i64 {
    let base = 1 - (cfg.m() as i64 - 1) * (cfg.k() as i64 - 1);
    if both_even(cfg) {
        base
    } else {
        2 * base
    }
}

fn both_even(cfg: &LatticeConfig) -> bool {
    cfg.m().is_multiple_of(2) && cfg.k().is_multiple_of(2)
}

/// Area bounds in units of `π`: `lower ≤ area < upper`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AreaBounds {
    #[serde(serialize_with = "ser_rational")]
    pub lower: Rational64,
    #[serde(serialize_with = "ser_rational")]
    pub upper: Rational64,
}

fn ser_rational<S: serde::Serializer>(r: &Rational64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(r))
}

/// `"n"` for integers, `"n/d"` otherwise.
pub fn format_rational(r: &Rational64) -> String {
    if r.is_integer() {
        r.to_integer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Closed forms: `c·max{m,k} ≤ area < c·(mk+k−m)` for ξ and
/// `c·(3mk−3k−m)` for η, with `c = 2` if both indices are even, else `4`.
pub fn closed_form_area_bounds(family: Family, cfg: &LatticeConfig) -> AreaBounds {
    let (m, k) = (cfg.m() as i64, cfg.k() as i64);
    let c = if both_even(cfg) { 2 } else { 4 };
    let upper = match family {
        Family::Xi => m * k + k - m,
        Family::Eta => 3 * m * k - 3 * k - m,
    };
    AreaBounds { lower: Rational64::from_integer(c * m.max(k)), upper: Rational64::from_integer(c * upper) }
}

/// Bound on the area of the minimal surface over `S`, in units of `π`:
/// `4k` for ξ, `2(m−1)k` for η with even `k`, `4(m−1)k` for η with odd `k`.
pub fn minimal_area_bound(family: Family, cfg: &LatticeConfig) -> Rational64 {
    let (m, k) = (cfg.m() as i64, cfg.k() as i64);
    Rational64::from_integer(match family {
        Family::Xi => 4 * k,
        Family::Eta if k % 2 == 0 => 2 * (m - 1) * k,
        Family::Eta => 4 * (m - 1) * k,
    })
}

/// Recomputes the bounds from the pipeline: the lower bound is `4μ` for the
/// largest vertex multiplicity `μ` on the domain; the upper bound is
/// `(2·A − 2χ)/d` with `A` and `χ` taken on `S` or `S̄` and `d` the quotient
/// degree, following `area(ψ̃) = 2·area(ψ) − 2πχ`.
pub fn area_bounds(surface: &LawsonSurface, domain: &FundamentalDomain) -> Result<AreaBounds, BipolarError> {
    let mut max_mu = 0;
    for p in surface.points() {
        max_mu = max_mu.max(surface.classes_at(&domain.complex, &p.image)?.len());
    }
    let base = surface.base_domain();
    let sheets = if surface.cover().is_some() { 2 } else { 1 };
    let a = minimal_area_bound(surface.family, &surface.cfg) * sheets;
    let upper = (a * 2 - Rational64::from_integer(2 * base.euler_characteristic())) / domain.degree();
    Ok(AreaBounds { lower: Rational64::from_integer(4 * max_mu as i64), upper })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EmbeddednessVerdict {
    NotEmbedded,
    Inconclusive,
}

/// `NotEmbedded` iff some vertex image carries two classes whose planes are
/// certified Transversal or Partial.
pub fn embeddedness_verdict(surface: &LawsonSurface, domain: &FundamentalDomain) -> Result<EmbeddednessVerdict, BipolarError> {
    for v in 0..surface.points().len() {
        let c = surface.classify_planes(&domain.complex, v, EPS)?;
        if c.counts.transversal + c.counts.partial > 0 {
            return Ok(EmbeddednessVerdict::NotEmbedded);
        }
    }
    Ok(EmbeddednessVerdict::Inconclusive)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::DEFAULT_CAP;

    fn decide(family: Family, m: u32, k: u32) -> (LawsonSurface, FundamentalDomain) {
        let s = LawsonSurface::new(family, LatticeConfig::new(m, k).unwrap(), DEFAULT_CAP).unwrap();
        let d = fundamental_domain_decision(&s, EPS).unwrap();
        (s, d)
    }

    #[test]
    fn decision_examples() {
        let (_, d) = decide(Family::Xi, 3, 2);
        assert_eq!((d.kind, d.chi), (ComplexKind::S, -2));
        let (_, d) = decide(Family::Xi, 4, 2);
        assert_eq!((d.kind, d.chi), (ComplexKind::SModMinusOne, -2));
        let (_, d) = decide(Family::Eta, 4, 2);
        assert_eq!((d.kind, d.chi), (ComplexKind::SbarModMinusOne, -2));
        assert!(d.orientable);
        assert!(d.pinning.is_some());
    }

    #[test]
    fn area_examples() {
        let c = |m, k| LatticeConfig::new(m, k).unwrap();
        let r = |n| Rational64::from_integer(n);
        assert_eq!(closed_form_area_bounds(Family::Xi, &c(4, 2)), AreaBounds { lower: r(8), upper: r(12) });
        assert_eq!(closed_form_area_bounds(Family::Xi, &c(3, 2)), AreaBounds { lower: r(12), upper: r(20) });
        assert_eq!(closed_form_area_bounds(Family::Eta, &c(3, 2)), AreaBounds { lower: r(12), upper: r(36) });
        for (family, m, k) in [(Family::Xi, 4, 2), (Family::Xi, 3, 2), (Family::Eta, 3, 2), (Family::Eta, 4, 4)] {
            let (s, d) = decide(family, m, k);
            assert_eq!(area_bounds(&s, &d).unwrap(), closed_form_area_bounds(family, &c(m, k)));
        }
    }

    #[test]
    fn embeddedness_examples() {
        let (s, d) = decide(Family::Xi, 3, 2);
        assert_eq!(embeddedness_verdict(&s, &d).unwrap(), EmbeddednessVerdict::NotEmbedded);
        let (s, d) = decide(Family::Eta, 2, 3);
        assert_eq!(embeddedness_verdict(&s, &d).unwrap(), EmbeddednessVerdict::NotEmbedded);
        let (s, d) = decide(Family::Xi, 2, 2);
        assert_eq!(embeddedness_verdict(&s, &d).unwrap(), EmbeddednessVerdict::Inconclusive);
    }

    #[test]
    fn rational_format() {
        assert_eq!(format_rational(&Rational64::new(6, 3)), "2");
        assert_eq!(format_rational(&Rational64::new(5, 2)), "5/2");
    }
}
