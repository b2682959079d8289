//! Tangent planes of the bipolar surface at vertex images, and their pairwise
//! classification.
//!
//! At a vertex with angle `π/n`, `n > 2`, the Gauss map branches and the plane
//! is `span(t₁∧ν, t₂∧ν)`. At a right-angle vertex both edges are asymptotic
//! lines, so `dν(t₁) = −c·t₂`, `dν(t₂) = −c·t₁` for an unknown `c = tan φ`,
//! and the plane is `span(cos φ·t₁∧ν − sin φ·ψ∧t₂, cos φ·t₂∧ν − sin φ·ψ∧t₁)`.
//! Relations involving such a family are decided only when they hold for
//! every `φ`, using a grid and Lipschitz bounds.

use std::f64::consts::PI;

use nalgebra::{Matrix4, Vector4};
use serde::Serialize;

use crate::exterior::{plane_relation_with_tolerance, wedge2, Bivector6, Plane2in6, PlaneRelation};

const GRID_1D: usize = 512;
const GRID_2D: usize = 96;

/// `U(φ) = span(cos φ·base₀ − sin φ·twist₀, cos φ·base₁ − sin φ·twist₁)`,
/// with `twist = None` for a fixed plane. All four spanners are orthonormal.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlaneFamily {
    pub base: [Bivector6; 2],
    pub twist: Option<[Bivector6; 2]>,
}

impl PlaneFamily {
    /// Plane family at a polygon vertex `psi` with unit normal `nu`, edge
    /// tangents `t`, and angle `π/n`.
    pub fn at_vertex(psi: &Vector4<f64>, nu: &Vector4<f64>, t: [Vector4<f64>; 2], n: u32) -> Self {
        let e1 = t[0].normalize();
        let r = t[1] - e1 * e1.dot(&t[1]);
        let e2 = r.normalize();
        let base = [wedge2(&e1, nu), wedge2(&e2, nu)];
        let twist = (n == 2).then(|| [wedge2(psi, &e2), wedge2(psi, &e1)]);
        Self { base, twist }
    }

    pub fn is_fixed(&self) -> bool {
        self.twist.is_none()
    }

    pub fn spanners(&self, phi: f64) -> [Bivector6; 2] {
        match &self.twist {
            None => self.base,
            Some(tw) => {
                let (s, c) = phi.sin_cos();
                [c * self.base[0] - s * tw[0], c * self.base[1] - s * tw[1]]
            }
        }
    }

    pub fn transform(&self, g: &Matrix4<f64>) -> Self {
        Self {
            base: self.base.map(|b| b.transform(g)),
            twist: self.twist.map(|tw| tw.map(|b| b.transform(g))),
        }
    }

    /// The plane for a fixed branched vertex.
    pub fn fixed_plane(&self) -> Option<Plane2in6> {
        if self.is_fixed() {
            Plane2in6::new(self.base[0], self.base[1]).ok()
        } else {
            None
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CertifiedRelation {
    Equal,
    Partial,
    Transversal,
    /// The relation depends on the unknown shape-operator coefficient, or the
    /// grid could not separate the cases.
    Indeterminate,
}

impl From<PlaneRelation> for CertifiedRelation {
    fn from(r: PlaneRelation) -> Self {
        match r {
            PlaneRelation::Equal => Self::Equal,
            PlaneRelation::Partial => Self::Partial,
            PlaneRelation::Transversal => Self::Transversal,
        }
    }
}

fn four_volume(u: &[Bivector6; 2], w: &[Bivector6; 2]) -> f64 {
    let vs = [u[0], u[1], w[0], w[1]];
    let gram = Matrix4::from_fn(|i, j| vs[i].dot(&vs[j]));
    gram.determinant().max(0.0).sqrt()
}

/// Largest distance from a spanner of `w` to the plane of orthonormal `u`.
fn residual(u: &[Bivector6; 2], w: &[Bivector6; 2]) -> f64 {
    w.iter()
        .map(|x| (*x - u[0].dot(x) * u[0] - u[1].dot(x) * u[1]).norm())
        .fold(0.0, f64::max)
}

/// Classifies two plane families. When `shared` both families use the same
/// parameter `φ` (same polygon vertex); otherwise the parameters are
/// independent.
///
/// The four-volume is 2-Lipschitz in the parameter of each twisted family
/// and the residual is 1-Lipschitz in `w`'s and 2-Lipschitz in `u`'s
/// parameter, so grid values bound the values between grid points.
pub fn certify(a: &PlaneFamily, b: &PlaneFamily, shared: bool, eps: f64) -> CertifiedRelation {
    if let (Some(p), Some(q)) = (a.fixed_plane(), b.fixed_plane()) {
        return plane_relation_with_tolerance(&p, &q, eps).into();
    }
    let samples: Vec<(f64, f64)> = match (a.is_fixed(), b.is_fixed(), shared) {
        (false, false, false) => {
            let h = PI / GRID_2D as f64;
            (0..GRID_2D)
                .flat_map(|i| (0..GRID_2D).map(move |j| (i as f64 * h, j as f64 * h)))
                .collect()
        }
        _ => {
            let h = PI / GRID_1D as f64;
            (0..GRID_1D).map(|i| (i as f64 * h, i as f64 * h)).collect()
        }
    };
    let h = if !a.is_fixed() && !b.is_fixed() && !shared { PI / GRID_2D as f64 } else { PI / GRID_1D as f64 };
    let twisted = [a, b].iter().filter(|f| !f.is_fixed()).count() as f64;
    let vol_bound = twisted * h;
    let res_bound = (if a.is_fixed() { 0.0 } else { 2.0 } + if b.is_fixed() { 0.0 } else { 1.0 }) * h / 2.0;

    let mut min_vol = f64::INFINITY;
    let mut max_vol: f64 = 0.0;
    let mut min_res = f64::INFINITY;
    let mut max_res: f64 = 0.0;
    for (pa, pb) in samples {
        let u = a.spanners(pa);
        let w = b.spanners(pb);
        let vol = four_volume(&u, &w);
        let res = residual(&u, &w);
        min_vol = min_vol.min(vol);
        max_vol = max_vol.max(vol);
        min_res = min_res.min(res);
        max_res = max_res.max(res);
    }
    if min_vol > vol_bound {
        CertifiedRelation::Transversal
    } else if max_res <= eps {
        CertifiedRelation::Equal
    } else if max_vol <= eps && min_res > res_bound {
        CertifiedRelation::Partial
    } else {
        CertifiedRelation::Indeterminate
    }
}

/// Pair counts of a plane classification.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RelationCounts {
    pub equal: usize,
    pub partial: usize,
    pub transversal: usize,
    pub indeterminate: usize,
}

impl RelationCounts {
    pub fn add(&mut self, r: CertifiedRelation) {
        match r {
            CertifiedRelation::Equal => self.equal += 1,
            CertifiedRelation::Partial => self.partial += 1,
            CertifiedRelation::Transversal => self.transversal += 1,
            CertifiedRelation::Indeterminate => self.indeterminate += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.equal + self.partial + self.transversal + self.indeterminate
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::rotation12;

    fn e(i: usize) -> Vector4<f64> {
        let mut v = Vector4::zeros();
        v[i] = 1.0;
        v
    }

    #[test]
    fn branched_vertex_plane_matches_coordinate_form() {
        // ψ = e₁, ν = e₂, edges toward e₃ and (e₃+e₄)/√2.
        let t = [e(2), (e(2) + e(3)).normalize()];
        let fam = PlaneFamily::at_vertex(&e(0), &e(1), t, 4);
        let plane = fam.fixed_plane().unwrap();
        let expected = Plane2in6::new(wedge2(&e(1), &e(2)), wedge2(&e(1), &e(3))).unwrap();
        assert_eq!(plane_relation_with_tolerance(&plane, &expected, 1e-9), PlaneRelation::Equal);
    }

    #[test]
    fn twisted_spanners_are_orthonormal() {
        let fam = PlaneFamily::at_vertex(&e(0), &e(1), [e(2), e(3)], 2);
        for phi in [0.0, 0.3, 1.2, 2.9] {
            let s = fam.spanners(phi);
            assert!((s[0].norm() - 1.0).abs() < 1e-12);
            assert!((s[1].norm() - 1.0).abs() < 1e-12);
            assert!(s[0].dot(&s[1]).abs() < 1e-12);
        }
    }

    #[test]
    fn rotated_right_angle_families() {
        let fam = PlaneFamily::at_vertex(&e(0), &e(1), [e(2), e(3)], 2);
        assert_eq!(certify(&fam, &fam, true, 1e-9), CertifiedRelation::Equal);
        let half = fam.transform(&rotation12(PI));
        assert_eq!(certify(&fam, &half, true, 1e-9), CertifiedRelation::Equal);
        let third = fam.transform(&rotation12(2.0 * PI / 3.0));
        assert_eq!(certify(&fam, &third, true, 1e-9), CertifiedRelation::Transversal);
    }

    #[test]
    fn fixed_pairs_use_rank_test() {
        let fam = PlaneFamily::at_vertex(&e(0), &e(1), [e(2), e(3)], 3);
        let rotated = fam.transform(&rotation12(2.0 * PI / 3.0));
        assert_eq!(certify(&fam, &rotated, true, 1e-9), CertifiedRelation::Transversal);
        assert_eq!(certify(&fam, &fam.transform(&rotation12(PI)), true, 1e-9), CertifiedRelation::Equal);
    }

    #[test]
    fn counts_accumulate() {
        let mut c = RelationCounts::default();
        c.add(CertifiedRelation::Equal);
        c.add(CertifiedRelation::Transversal);
        c.add(CertifiedRelation::Transversal);
        assert_eq!((c.equal, c.transversal, c.total()), (1, 2, 3));
    }
}
