//! The bipolar surface `ψ̃ = ψ∧ν` of a Lawson surface, evaluated at the
//! images of polygon vertices.
//!
//! A face `(s, g)` of `S` or `S̄` carries `ψ̃ = (−1)^s · Λ²g(f∧n)`, where
//! `s = σ(g)` on `S` and `s` is the sheet on `S̄`.

pub mod domain;
pub mod planes;

use std::collections::VecDeque;

use nalgebra::{Matrix4, Vector4};
use serde::Serialize;
use thiserror::Error;

use crate::complex::{build_complex, double_cover, ComplexError, SurfaceComplex};
use crate::exterior::{wedge2, Bivector6, ExteriorError, Plane2in6};
use crate::group::{polygon_generators, vertex_stabilizer, GroupError, Parity, ReflectionGroup};
use crate::lattice::{polar_vertex_data, polygon, Family, GeodesicPolygon, LatticeConfig, LatticeError};

pub use domain::{
    area_bounds, bipolar_orientability, closed_form_area_bounds, closed_form_chi_bipolar, embeddedness_verdict,
    fundamental_domain_decision, AreaBounds, EmbeddednessVerdict, FundamentalDomain, PinningWitness,
};
pub use planes::{certify, CertifiedRelation, PlaneFamily, RelationCounts};

/// Bivector agreement tolerance for image points.
pub const IMAGE_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BipolarError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Exterior(#[from] ExteriorError),
    #[error("vertex {0} has a right angle; the branched tangent-plane rule does not apply")]
    BranchRuleInapplicable(String),
    #[error("parity is needed on a non-orientable complex; use the double cover")]
    MissingParity,
    #[error("solution count {count} at vertex {vertex} is not divisible by the stabilizer order {stabilizer}")]
    NonIntegralMultiplicity { vertex: String, count: usize, stabilizer: usize },
    #[error("inconsistent evidence: {0}")]
    InconsistentEvidence(String),
    #[error("vertex index {0} out of range")]
    NoSuchVertex(usize),
}

/// `f(p) ∧ n(p)` at a polygon vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct BipolarVertexPoint {
    pub label: String,
    pub base: Vector4<f64>,
    pub normal: Vector4<f64>,
    pub image: Bivector6,
}

/// Everything needed to evaluate `ψ̃` for one `(family, m, k)`.
#[derive(Clone, Debug)]
pub struct LawsonSurface {
    pub family: Family,
    pub cfg: LatticeConfig,
    polygon: GeodesicPolygon,
    group: ReflectionGroup,
    s: SurfaceComplex,
    cover: Option<SurfaceComplex>,
    points: Vec<BipolarVertexPoint>,
    families: Vec<PlaneFamily>,
    stabilizer_orders: Vec<usize>,
}

impl LawsonSurface {
    pub fn new(family: Family, cfg: LatticeConfig, cap: usize) -> Result<Self, BipolarError> {
        let poly = polygon(family, &cfg);
        let group = ReflectionGroup::closure(&polygon_generators(&poly), cap)?;
        Self::with_group(family, cfg, group)
    }

    /// Uses a prebuilt group whose generators are the polygon-edge reflections.
    pub fn with_group(family: Family, cfg: LatticeConfig, group: ReflectionGroup) -> Result<Self, BipolarError> {
        let poly = polygon(family, &cfg);
        let s = build_complex(&group, &poly)?;
        let cover = if s.is_orientable() { None } else { Some(double_cover(&group, &s)?) };
        let polar = polar_vertex_data(family, &cfg);
        let mut points = Vec::with_capacity(poly.len());
        let mut families = Vec::with_capacity(poly.len());
        let mut stabilizer_orders = Vec::with_capacity(poly.len());
        for v in 0..poly.len() {
            let base = *poly.vertex(v);
            let normal = polar.normals[v];
            points.push(BipolarVertexPoint {
                label: poly.label(v).to_string(),
                base,
                normal,
                image: wedge2(&base, &normal),
            });
            let n = poly.angle_denominators()[v];
            families.push(PlaneFamily::at_vertex(&base, &normal, poly.corner_tangents(v), n));
            stabilizer_orders.push(vertex_stabilizer(&group, &poly, v)?.order());
        }
        Ok(Self { family, cfg, polygon: poly, group, s, cover, points, families, stabilizer_orders })
    }

    pub fn polygon(&self) -> &GeodesicPolygon {
        &self.polygon
    }

    pub fn group(&self) -> &ReflectionGroup {
        &self.group
    }

    /// The complex `S`.
    pub fn s(&self) -> &SurfaceComplex {
        &self.s
    }

    /// `S̄` when `S` is non-orientable.
    pub fn cover(&self) -> Option<&SurfaceComplex> {
        self.cover.as_ref()
    }

    /// The orientable complex on which `ψ̃` is defined: `S` or `S̄`.
    pub fn base_domain(&self) -> &SurfaceComplex {
        self.cover.as_ref().unwrap_or(&self.s)
    }

    pub fn points(&self) -> &[BipolarVertexPoint] {
        &self.points
    }

    pub fn vertex_index(&self, label: &str) -> Option<usize> {
        self.points.iter().position(|p| p.label == label)
    }

    /// `|G^p|` at each polygon vertex.
    pub fn stabilizer_orders(&self) -> &[usize] {
        &self.stabilizer_orders
    }

    /// Base plane family at polygon vertex `v`.
    pub fn plane_family(&self, v: usize) -> &PlaneFamily {
        &self.families[v]
    }

    /// Sign exponent of a face: the sheet on a double cover, `σ(g)` otherwise.
    pub fn face_sign(&self, complex: &SurfaceComplex, f: usize) -> Result<u32, BipolarError> {
        let face = &complex.faces()[f];
        if complex.kind().is_double_cover() {
            Ok(face.sheet as u32)
        } else {
            self.group
                .element(face.element)
                .parity
                .unique()
                .map(Parity::bit)
                .ok_or(BipolarError::MissingParity)
        }
    }

    fn signed_image(&self, sign: u32, g: &Matrix4<f64>, x: &Bivector6) -> Bivector6 {
        let y = x.transform(g);
        if sign % 2 == 1 {
            -y
        } else {
            y
        }
    }

    /// `ψ̃` at corner `c` of face `f`.
    pub fn corner_image(&self, complex: &SurfaceComplex, f: usize, c: usize) -> Result<Bivector6, BipolarError> {
        let sign = self.face_sign(complex, f)?;
        let g = self.group.matrix(complex.faces()[f].element);
        Ok(self.signed_image(sign, g, &self.points[c].image))
    }

    /// `ψ̃` at vertex class `v` of a complex, read from its first incidence.
    pub fn class_image(&self, complex: &SurfaceComplex, v: usize) -> Result<Bivector6, BipolarError> {
        let (f, c) = complex.vertices()[v][0];
        self.corner_image(complex, f, c)
    }

    /// Tangent-plane family at vertex class `v`.
    pub fn class_plane(&self, complex: &SurfaceComplex, v: usize) -> PlaneFamily {
        let (f, c) = complex.vertices()[v][0];
        self.families[c].transform(self.group.matrix(complex.faces()[f].element))
    }

    /// Vertex classes of `complex` whose image is `x`.
    pub fn classes_at(&self, complex: &SurfaceComplex, x: &Bivector6) -> Result<Vec<usize>, BipolarError> {
        let mut out = Vec::new();
        for v in 0..complex.vertices().len() {
            if self.class_image(complex, v)?.approx_eq(x, IMAGE_TOL) {
                out.push(v);
            }
        }
        Ok(out)
    }

    /// Signed group elements `(s, g)` parametrizing the faces of the base
    /// domain, together with the count `N` of such pairs.
    fn signed_faces(&self) -> Result<Vec<(u32, usize)>, BipolarError> {
        let base = self.base_domain();
        (0..base.faces().len())
            .map(|f| Ok((self.face_sign(base, f)?, base.faces()[f].element)))
            .collect()
    }

    /// Brute force: faces of the base domain whose corner `w` lands on `x`,
    /// for every polygon vertex `w`.
    fn brute_force_solutions(&self, x: &Bivector6) -> Result<Vec<Vec<usize>>, BipolarError> {
        let signed = self.signed_faces()?;
        Ok(self
            .points
            .iter()
            .map(|p| {
                signed
                    .iter()
                    .enumerate()
                    .filter(|(_, &(s, g))| self.signed_image(s, self.group.matrix(g), &p.image).approx_eq(x, IMAGE_TOL))
                    .map(|(f, _)| f)
                    .collect()
            })
            .collect())
    }

    /// Orbit of `x` under `X ↦ −Λ²r_i X`, and `X ↦ −X` on a double cover.
    pub fn signed_orbit(&self, x: &Bivector6) -> Vec<Bivector6> {
        let maps = self.group.generators();
        let double = self.cover.is_some();
        let mut orbit = vec![*x];
        let mut queue = VecDeque::from([*x]);
        while let Some(y) = queue.pop_front() {
            let mut next: Vec<Bivector6> = maps.iter().map(|r| -y.transform(r)).collect();
            if double {
                next.push(-y);
            }
            for z in next {
                if !orbit.iter().any(|o| o.approx_eq(&z, IMAGE_TOL)) {
                    orbit.push(z);
                    queue.push_back(z);
                }
            }
        }
        orbit
    }

    /// Multiplicity of `ψ̃` at the image of polygon vertex `v`, on the base
    /// domain, computed three ways.
    pub fn multiplicity(&self, v: usize) -> Result<MultiplicityResult, BipolarError> {
        let point = self.points.get(v).ok_or(BipolarError::NoSuchVertex(v))?;
        let x = point.image;
        let base = self.base_domain();

        let solutions = self.brute_force_solutions(&x)?;
        let mut count = 0;
        for (w, sols) in solutions.iter().enumerate() {
            let stab = self.stabilizer_orders[w];
            if sols.len() % stab != 0 {
                return Err(BipolarError::NonIntegralMultiplicity {
                    vertex: self.points[w].label.clone(),
                    count: sols.len(),
                    stabilizer: stab,
                });
            }
            count += sols.len() / stab;
        }

        let n_total = base.faces().len();
        let mut predicted_num = 0usize;
        for (w, p) in self.points.iter().enumerate() {
            let orbit = self.signed_orbit(&p.image);
            if orbit.iter().any(|o| o.approx_eq(&x, IMAGE_TOL)) {
                let denom = orbit.len() * self.stabilizer_orders[w];
                if !n_total.is_multiple_of(denom) {
                    return Err(BipolarError::NonIntegralMultiplicity {
                        vertex: p.label.clone(),
                        count: n_total,
                        stabilizer: denom,
                    });
                }
                predicted_num += n_total / denom;
            }
        }

        let class_count = self.classes_at(base, &x)?.len();
        let solution_set = solutions[v].iter().map(|&f| base.faces()[f].element).collect();
        Ok(MultiplicityResult {
            label: point.label.clone(),
            vertex: v,
            count,
            orbit_prediction: predicted_num,
            class_count,
            stabilizer_order: self.stabilizer_orders[v],
            solution_set,
        })
    }

    /// Tangent planes at the image of vertex `v`, one per vertex class of the
    /// base domain landing there, under the branched rule only.
    pub fn tangent_planes_at_vertex(&self, v: usize) -> Result<Vec<Plane2in6>, BipolarError> {
        let point = self.points.get(v).ok_or(BipolarError::NoSuchVertex(v))?;
        let base = self.base_domain();
        let classes = self.classes_at(base, &point.image)?;
        let mut out = Vec::with_capacity(classes.len());
        for c in classes {
            let corner = base.vertex_corner(c);
            if !self.families[corner].is_fixed() {
                return Err(BipolarError::BranchRuleInapplicable(self.points[corner].label.clone()));
            }
            let fam = self.class_plane(base, c);
            out.push(Plane2in6::new(fam.base[0], fam.base[1])?);
        }
        Ok(out)
    }

    /// Pairwise classification of the planes at the image of vertex `v` on
    /// `complex`.
    pub fn classify_planes(
        &self,
        complex: &SurfaceComplex,
        v: usize,
        eps: f64,
    ) -> Result<PlaneClassification, BipolarError> {
        let point = self.points.get(v).ok_or(BipolarError::NoSuchVertex(v))?;
        let classes = self.classes_at(complex, &point.image)?;
        let fams: Vec<PlaneFamily> = classes.iter().map(|&c| self.class_plane(complex, c)).collect();
        let mut pairs = Vec::new();
        let mut counts = RelationCounts::default();
        for i in 0..classes.len() {
            for j in i + 1..classes.len() {
                let shared = complex.vertex_corner(classes[i]) == complex.vertex_corner(classes[j]);
                let r = certify(&fams[i], &fams[j], shared, eps);
                counts.add(r);
                pairs.push((classes[i], classes[j], r));
            }
        }
        Ok(PlaneClassification {
            label: point.label.clone(),
            vertex: v,
            classes,
            branched: self.families[v].is_fixed(),
            pairs,
            counts,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MultiplicityResult {
    pub label: String,
    pub vertex: usize,
    /// Brute-force count: solutions divided by `|G^p|`, summed over vertices.
    pub count: usize,
    /// Orbit–stabilizer prediction `Σ N/(|orbit|·|G^p|)`.
    pub orbit_prediction: usize,
    /// Number of vertex classes of the base domain with this image.
    pub class_count: usize,
    pub stabilizer_order: usize,
    /// Group elements of the base-domain faces whose corner at this vertex
    /// realizes the image.
    #[serde(skip)]
    pub solution_set: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PlaneClassification {
    pub label: String,
    pub vertex: usize,
    pub classes: Vec<usize>,
    pub branched: bool,
    pub pairs: Vec<(usize, usize, CertifiedRelation)>,
    pub counts: RelationCounts,
}

impl PlaneClassification {
    pub fn relation(&self, a: usize, b: usize) -> Option<CertifiedRelation> {
        self.pairs
            .iter()
            .find(|&&(x, y, _)| (x, y) == (a, b) || (x, y) == (b, a))
            .map(|&(_, _, r)| r)
    }

    pub fn pairwise_distinct(&self) -> bool {
        self.counts.equal == 0 && self.counts.indeterminate == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::DEFAULT_CAP;

    fn surface(family: Family, m: u32, k: u32) -> LawsonSurface {
        LawsonSurface::new(family, LatticeConfig::new(m, k).unwrap(), DEFAULT_CAP).unwrap()
    }

    #[test]
    fn vertex_images_are_unit() {
        let s = surface(Family::Eta, 3, 4);
        for p in s.points() {
            assert!((p.image.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn xi_multiplicities() {
        for (m, k) in [(3, 2), (2, 3), (4, 5)] {
            let s = surface(Family::Xi, m, k);
            let p0 = s.multiplicity(0).unwrap();
            assert_eq!((p0.count, p0.orbit_prediction, p0.class_count), (k as usize, k as usize, k as usize));
            let q0 = s.multiplicity(1).unwrap();
            assert_eq!((q0.count, q0.orbit_prediction, q0.class_count), (m as usize, m as usize, m as usize));
        }
    }

    #[test]
    fn eta_multiplicities() {
        let s = surface(Family::Eta, 3, 2);
        assert_eq!(s.multiplicity(1).unwrap().count, 2);
        assert_eq!(s.multiplicity(2).unwrap().count, 3);
    }

    #[test]
    fn branched_planes() {
        let s = surface(Family::Xi, 3, 3);
        let planes = s.tangent_planes_at_vertex(0).unwrap();
        assert_eq!(planes.len(), 3);
        let c = s.classify_planes(s.s(), 0, 1e-9).unwrap();
        assert_eq!(c.counts.transversal, 3);

        let s = surface(Family::Xi, 3, 4);
        let c = s.classify_planes(s.s(), 0, 1e-9).unwrap();
        assert_eq!(c.classes.len(), 4);
        assert_eq!(c.counts.equal, 2);
        assert_eq!(c.counts.transversal, 4);
    }

    #[test]
    fn right_angle_vertex_is_reported() {
        let s = surface(Family::Xi, 2, 3);
        assert!(matches!(s.tangent_planes_at_vertex(0), Err(BipolarError::BranchRuleInapplicable(_))));
    }
}
