//! The tessellation of S³ by the lattice points `P_i`, `Q_j`, the geodesic
//! reflections across its great circles, and the two boundary polygons
//! (ξ and η) together with the Gauss-map values at their vertices.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::{Matrix2, Matrix4, Vector4};
use serde::Serialize;
use thiserror::Error;

use crate::exterior::EPS;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LatticeError {
    #[error("lattice indices must satisfy m, k >= 2 (got m={m}, k={k})")]
    InvalidIndices { m: u32, k: u32 },
    #[error("great circle basis has rank < 2")]
    DegenerateCircle,
    #[error("polygon vertex {0} is not a unit vector")]
    NotOnSphere(usize),
    #[error("polygon edge {0} joins antipodal or equal vertices without a via point")]
    AmbiguousEdge(usize),
    #[error("via point on edge {0} is not the midpoint of a half great circle")]
    InvalidViaPoint(usize),
    #[error("interior angle at vertex {vertex} is {angle} rad, not of the form pi/n")]
    AngleNotPiOverN { vertex: usize, angle: f64 },
    #[error("angle denominator at vertex {0} must be >= 2")]
    AngleDenominator(usize),
    #[error("polygon needs at least 3 vertices and matching per-vertex data")]
    Shape,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Xi,
    Eta,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Xi => write!(f, "xi"),
            Family::Eta => write!(f, "eta"),
        }
    }
}

impl std::str::FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "xi" => Ok(Family::Xi),
            "eta" => Ok(Family::Eta),
            other => Err(format!("unknown family '{other}' (expected xi or eta)")),
        }
    }
}

/// The pair `(m, k)`: `π/m` between consecutive `Q_j`, `π/k` between
/// consecutive `P_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct LatticeConfig {
    m: u32,
    k: u32,
}

impl LatticeConfig {
    pub fn new(m: u32, k: u32) -> Result<Self, LatticeError> {
        if m < 2 || k < 2 {
            return Err(LatticeError::InvalidIndices { m, k });
        }
        Ok(Self { m, k })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// `(2, 2)` gives the Clifford torus, which the classification excludes.
    pub fn is_excluded(&self) -> bool {
        self.m == 2 && self.k == 2
    }

    pub fn p(&self, i: i64) -> Vector4<f64> {
        let t = self.p_angle(i);
        Vector4::new(t.cos(), t.sin(), 0.0, 0.0)
    }

    pub fn q(&self, j: i64) -> Vector4<f64> {
        let t = self.q_angle(j);
        Vector4::new(0.0, 0.0, t.cos(), t.sin())
    }

    pub fn p_hat(&self, i: i64) -> Vector4<f64> {
        let t = self.p_angle(i);
        Vector4::new(-t.sin(), t.cos(), 0.0, 0.0)
    }

    pub fn q_hat(&self, j: i64) -> Vector4<f64> {
        let t = self.q_angle(j);
        Vector4::new(0.0, 0.0, -t.sin(), t.cos())
    }

    fn p_angle(&self, i: i64) -> f64 {
        let n = 2 * self.k as i64;
        i.rem_euclid(n) as f64 * PI / self.k as f64
    }

    fn q_angle(&self, j: i64) -> f64 {
        let n = 2 * self.m as i64;
        j.rem_euclid(n) as f64 * PI / self.m as f64
    }
}

/// All lattice points, indexed `0..2k` and `0..2m`.
#[derive(Clone, Debug)]
pub struct LatticePoints {
    pub p: Vec<Vector4<f64>>,
    pub q: Vec<Vector4<f64>>,
    pub p_hat: Vec<Vector4<f64>>,
    pub q_hat: Vec<Vector4<f64>>,
}

pub fn lattice_points(cfg: &LatticeConfig) -> LatticePoints {
    let pk = 0..2 * cfg.k as i64;
    let qm = 0..2 * cfg.m as i64;
    LatticePoints {
        p: pk.clone().map(|i| cfg.p(i)).collect(),
        q: qm.clone().map(|j| cfg.q(j)).collect(),
        p_hat: pk.map(|i| cfg.p_hat(i)).collect(),
        q_hat: qm.map(|j| cfg.q_hat(j)).collect(),
    }
}

/// A great circle, stored as an orthonormal basis of its 2-plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GreatCircle {
    basis: [Vector4<f64>; 2],
}

impl GreatCircle {
    /// The circle through two non-parallel points.
    pub fn through(a: &Vector4<f64>, b: &Vector4<f64>) -> Result<Self, LatticeError> {
        let na = a.norm();
        if na <= EPS {
            return Err(LatticeError::DegenerateCircle);
        }
        let u = a / na;
        let r = b - u * u.dot(b);
        let nr = r.norm();
        if nr <= EPS {
            return Err(LatticeError::DegenerateCircle);
        }
        Ok(Self { basis: [u, r / nr] })
    }

    pub fn basis(&self) -> &[Vector4<f64>; 2] {
        &self.basis
    }

    pub fn contains(&self, x: &Vector4<f64>, eps: f64) -> bool {
        let [u, v] = &self.basis;
        let proj = u * u.dot(x) + v * v.dot(x);
        (x - proj).norm() <= eps
    }

    fn projector(&self) -> Matrix4<f64> {
        let [u, v] = &self.basis;
        u * u.transpose() + v * v.transpose()
    }
}

/// Reflection of S³ across a great circle: identity on its plane, minus the
/// identity on the orthogonal complement.
pub fn geodesic_reflection(c: &GreatCircle) -> Matrix4<f64> {
    c.projector() * 2.0 - Matrix4::identity()
}

fn block(upper: Matrix2<f64>, lower: Matrix2<f64>) -> Matrix4<f64> {
    let mut out = Matrix4::zeros();
    out.fixed_view_mut::<2, 2>(0, 0).copy_from(&upper);
    out.fixed_view_mut::<2, 2>(2, 2).copy_from(&lower);
    out
}

pub fn rotation2(phi: f64) -> Matrix2<f64> {
    let (s, c) = phi.sin_cos();
    Matrix2::new(c, -s, s, c)
}

/// Rotation by `phi` in the `x₁x₂`-plane.
pub fn rotation12(phi: f64) -> Matrix4<f64> {
    block(rotation2(phi), Matrix2::identity())
}

/// Rotation by `phi` in the `x₃x₄`-plane.
pub fn rotation34(phi: f64) -> Matrix4<f64> {
    block(Matrix2::identity(), rotation2(phi))
}

/// `r₀₀ = diag(J₂, J₂)`, the reflection across the circle through `P₀`, `Q₀`.
pub fn r00() -> Matrix4<f64> {
    Matrix4::from_diagonal(&Vector4::new(1.0, -1.0, 1.0, -1.0))
}

/// Reflection across `γ_Q = {x₁ = x₂ = 0}`.
pub fn r_q() -> Matrix4<f64> {
    Matrix4::from_diagonal(&Vector4::new(-1.0, -1.0, 1.0, 1.0))
}

/// Reflection `r_ij` across the circle through `P_i` and `Q_j`, built from
/// the block rotations: `R⁽¹²⁾_{2πi/k} · R⁽³⁴⁾_{2πj/m} · r₀₀`.
///
/// Since `J₂R_φ = R_φ⁻¹J₂`, this equals `r₀₀ · R⁽¹²⁾_{-2πi/k} · R⁽³⁴⁾_{-2πj/m}`.
pub fn lattice_reflection(cfg: &LatticeConfig, i: i64, j: i64) -> Matrix4<f64> {
    let a = 2.0 * PI * i as f64 / cfg.k as f64;
    let b = 2.0 * PI * j as f64 / cfg.m as f64;
    rotation12(a) * rotation34(b) * r00()
}

pub fn lattice_circle(cfg: &LatticeConfig, i: i64, j: i64) -> GreatCircle {
    GreatCircle::through(&cfg.p(i), &cfg.q(j)).expect("P_i and Q_j are orthogonal")
}

/// Spherical interpolation along the shorter arc from `a` to `b`.
fn slerp(a: &Vector4<f64>, b: &Vector4<f64>, t: f64) -> Vector4<f64> {
    let cos = a.dot(b).clamp(-1.0, 1.0);
    let theta = cos.acos();
    if theta.abs() <= EPS {
        return *a;
    }
    (a * ((1.0 - t) * theta).sin() + b * (t * theta).sin()) / theta.sin()
}

/// Unit tangent at `from` of the shorter arc toward `toward`.
fn arc_direction(from: &Vector4<f64>, toward: &Vector4<f64>) -> Vector4<f64> {
    let r = toward - from * from.dot(toward);
    r / r.norm()
}

/// Closed circuit of great-circle arcs. Edge `i` runs from vertex `i` to
/// vertex `i + 1 (mod N)`; an edge joining antipodal vertices carries the
/// midpoint of the intended half circle as its via point.
#[derive(Clone, Debug)]
pub struct GeodesicPolygon {
    vertices: Vec<Vector4<f64>>,
    labels: Vec<String>,
    angle_denominators: Vec<u32>,
    via_points: Vec<Option<Vector4<f64>>>,
    circles: Vec<GreatCircle>,
}

impl GeodesicPolygon {
    pub fn new(
        vertices: Vec<Vector4<f64>>,
        labels: Vec<String>,
        angle_denominators: Vec<u32>,
        via_points: Vec<Option<Vector4<f64>>>,
    ) -> Result<Self, LatticeError> {
        let n = vertices.len();
        if n < 3 || labels.len() != n || angle_denominators.len() != n || via_points.len() != n {
            return Err(LatticeError::Shape);
        }
        for (i, v) in vertices.iter().enumerate() {
            if (v.norm() - 1.0).abs() > EPS {
                return Err(LatticeError::NotOnSphere(i));
            }
        }
        if let Some(i) = angle_denominators.iter().position(|&d| d < 2) {
            return Err(LatticeError::AngleDenominator(i));
        }
        let mut circles = Vec::with_capacity(n);
        for i in 0..n {
            let a = &vertices[i];
            let b = &vertices[(i + 1) % n];
            let c = a.dot(b);
            match via_points[i] {
                Some(via) => {
                    let ok = (c + 1.0).abs() <= EPS
                        && (via.norm() - 1.0).abs() <= EPS
                        && via.dot(a).abs() <= EPS;
                    if !ok {
                        return Err(LatticeError::InvalidViaPoint(i));
                    }
                    circles.push(GreatCircle::through(a, &via)?);
                }
                None => {
                    if (c.abs() - 1.0).abs() <= EPS {
                        return Err(LatticeError::AmbiguousEdge(i));
                    }
                    circles.push(GreatCircle::through(a, b)?);
                }
            }
        }
        Ok(Self { vertices, labels, angle_denominators, via_points, circles })
    }

    /// Builds the polygon and reads each angle denominator off the geometry.
    pub fn from_geometry(
        vertices: Vec<Vector4<f64>>,
        labels: Vec<String>,
        via_points: Vec<Option<Vector4<f64>>>,
    ) -> Result<Self, LatticeError> {
        let n = vertices.len();
        let mut poly = Self::new(vertices, labels, vec![2; n], via_points)?;
        for v in 0..n {
            let angle = poly.interior_angle(v);
            let d = (PI / angle).round();
            if d < 2.0 || (d * angle - PI).abs() > 1e-9 {
                return Err(LatticeError::AngleNotPiOverN { vertex: v, angle });
            }
            poly.angle_denominators[v] = d as u32;
        }
        Ok(poly)
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[Vector4<f64>] {
        &self.vertices
    }

    pub fn vertex(&self, v: usize) -> &Vector4<f64> {
        &self.vertices[v]
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn angle_denominators(&self) -> &[u32] {
        &self.angle_denominators
    }

    pub fn via_points(&self) -> &[Option<Vector4<f64>>] {
        &self.via_points
    }

    /// Great circle carrying edge `i`.
    pub fn edge_circle(&self, i: usize) -> &GreatCircle {
        &self.circles[i]
    }

    pub fn circles(&self) -> &[GreatCircle] {
        &self.circles
    }

    /// The two edges meeting at vertex `v`, as `(incoming, outgoing)`.
    pub fn corner_edges(&self, v: usize) -> (usize, usize) {
        ((v + self.len() - 1) % self.len(), v)
    }

    /// Point at fraction `t ∈ [0, 1]` along edge `i`.
    pub fn edge_point(&self, i: usize, t: f64) -> Vector4<f64> {
        let a = &self.vertices[i];
        let b = &self.vertices[(i + 1) % self.len()];
        match &self.via_points[i] {
            Some(via) if t <= 0.5 => slerp(a, via, 2.0 * t),
            Some(via) => slerp(via, b, 2.0 * t - 1.0),
            None => slerp(a, b, t),
        }
    }

    /// Sample points of edge `i` at fractions 0, ¼, ½, ¾, 1. The fractions are
    /// symmetric, so reversing an edge permutes its samples.
    pub fn edge_samples(&self, i: usize) -> [Vector4<f64>; 5] {
        [0.0, 0.25, 0.5, 0.75, 1.0].map(|t| self.edge_point(i, t))
    }

    /// Unit tangents at vertex `v` along its incoming and outgoing edges,
    /// both pointing away from the vertex.
    pub fn corner_tangents(&self, v: usize) -> [Vector4<f64>; 2] {
        let n = self.len();
        let (incoming, outgoing) = self.corner_edges(v);
        let here = &self.vertices[v];
        let back = self.via_points[incoming].unwrap_or(self.vertices[(v + n - 1) % n]);
        let ahead = self.via_points[outgoing].unwrap_or(self.vertices[(v + 1) % n]);
        [arc_direction(here, &back), arc_direction(here, &ahead)]
    }

    pub fn interior_angle(&self, v: usize) -> f64 {
        let [a, b] = self.corner_tangents(v);
        a.dot(&b).clamp(-1.0, 1.0).acos()
    }

    /// Edges whose closed arc contains `x`.
    pub fn edges_containing(&self, x: &Vector4<f64>) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.circles[i].contains(x, EPS) && self.arc_contains(i, x))
            .collect()
    }

    fn arc_contains(&self, i: usize, x: &Vector4<f64>) -> bool {
        let n = self.len();
        let a = &self.vertices[i];
        let b = &self.vertices[(i + 1) % n];
        let split = |p: &Vector4<f64>, q: &Vector4<f64>| {
            // x on the shorter arc p→q iff d(p,x) + d(x,q) = d(p,q).
            let d = |u: &Vector4<f64>, w: &Vector4<f64>| u.dot(w).clamp(-1.0, 1.0).acos();
            (d(p, x) + d(x, q) - d(p, q)).abs() <= 1e-7
        };
        match &self.via_points[i] {
            Some(via) => split(a, via) || split(via, b),
            None => split(a, b),
        }
    }

    /// Polygon circles passing through `x` (full circles, not arcs).
    pub fn circles_containing(&self, x: &Vector4<f64>) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.circles[i].contains(x, EPS)).collect()
    }
}

/// ξ polygon `P₀ Q₀ P₁ Q₁`.
pub fn xi_polygon(cfg: &LatticeConfig) -> GeodesicPolygon {
    GeodesicPolygon::from_geometry(
        vec![cfg.p(0), cfg.q(0), cfg.p(1), cfg.q(1)],
        ["P0", "Q0", "P1", "Q1"].map(String::from).to_vec(),
        vec![None; 4],
    )
    .expect("xi polygon is well formed for m, k >= 2")
}

/// η polygon `Q₀ P₁ Q₁ [P₀] (−Q₁)`; the half circle from `Q₁` to `−Q₁` runs
/// through `P₀`.
pub fn eta_polygon(cfg: &LatticeConfig) -> GeodesicPolygon {
    GeodesicPolygon::from_geometry(
        vec![cfg.q(0), cfg.p(1), cfg.q(1), -cfg.q(1)],
        ["Q0", "P1", "Q1", "-Q1"].map(String::from).to_vec(),
        vec![None, None, Some(cfg.p(0)), None],
    )
    .expect("eta polygon is well formed for m, k >= 2")
}

pub fn polygon(family: Family, cfg: &LatticeConfig) -> GeodesicPolygon {
    match family {
        Family::Xi => xi_polygon(cfg),
        Family::Eta => eta_polygon(cfg),
    }
}

/// Gauss-map values of the initial disk at the polygon vertices, in vertex
/// order. Connecting them by shortest arcs gives the polar polygon.
#[derive(Clone, Debug, PartialEq)]
pub struct PolarVertexData {
    pub normals: Vec<Vector4<f64>>,
}

pub fn polar_vertex_data(family: Family, cfg: &LatticeConfig) -> PolarVertexData {
    let normals = match family {
        // P₀ ↦ P̂₀, Q₀ ↦ −Q̂₀, P₁ ↦ −P̂₁, Q₁ ↦ Q̂₁
        Family::Xi => vec![cfg.p_hat(0), -cfg.q_hat(0), -cfg.p_hat(1), cfg.q_hat(1)],
        // Q₀ ↦ P̂₁, P₁ ↦ −P̂₁, Q₁ ↦ Q̂₁, −Q₁ ↦ P̂₀
        Family::Eta => vec![cfg.p_hat(1), -cfg.p_hat(1), cfg.q_hat(1), cfg.p_hat(0)],
    };
    PolarVertexData { normals }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &Matrix4<f64>, b: &Matrix4<f64>) -> bool {
        (a - b).abs().max() <= 1e-12
    }

    fn e(i: usize) -> Vector4<f64> {
        let mut v = Vector4::zeros();
        v[i] = 1.0;
        v
    }

    #[test]
    fn lattice_point_values() {
        let c22 = LatticeConfig::new(2, 2).unwrap();
        assert!((c22.p(0) - e(0)).norm() < 1e-15);
        assert!((c22.p(1) - e(1)).norm() < 1e-15);
        assert!((c22.q(1) - e(3)).norm() < 1e-15);
        let c32 = LatticeConfig::new(3, 2).unwrap();
        let expected = Vector4::new(0.0, 0.0, 0.5, 3f64.sqrt() / 2.0);
        assert!((c32.q(1) - expected).norm() < 1e-15);
        // indices wrap mod 2k / 2m
        assert!((c32.q(7) - c32.q(1)).norm() < 1e-12);
        assert!((c32.p(-1) - c32.p(3)).norm() < 1e-12);
        assert_eq!(lattice_points(&c32).q.len(), 6);
        assert!(LatticeConfig::new(1, 3).is_err());
        assert!(c22.is_excluded());
    }

    #[test]
    fn reflections_of_coordinate_circles() {
        let through = |a: usize, b: usize| geodesic_reflection(&GreatCircle::through(&e(a), &e(b)).unwrap());
        assert!(close(&through(0, 2), &r00()));
        assert!(close(&through(2, 3), &r_q()));
        let d = Matrix4::from_diagonal(&Vector4::new(1.0, 1.0, -1.0, -1.0));
        assert!(close(&through(0, 1), &d));
        assert!(GreatCircle::through(&e(0), &(e(0) * 2.0)).is_err());
    }

    #[test]
    fn lattice_reflection_examples() {
        let c = LatticeConfig::new(2, 2).unwrap();
        assert!(close(&lattice_reflection(&c, 0, 0), &r00()));
        let d = Matrix4::from_diagonal(&Vector4::new(-1.0, 1.0, 1.0, -1.0));
        assert!(close(&lattice_reflection(&c, 1, 0), &d));
        assert!(close(&(r00() * rotation12(PI)), &d));
    }

    #[test]
    fn lattice_reflection_agrees_with_circle_reflection() {
        for m in 2..=8u32 {
            for k in 2..=8u32 {
                let c = LatticeConfig::new(m, k).unwrap();
                for i in 0..2 * k as i64 {
                    for j in 0..2 * m as i64 {
                        let r = lattice_reflection(&c, i, j);
                        let g = geodesic_reflection(&lattice_circle(&c, i, j));
                        assert!((r - g).abs().max() < 1e-9, "m={m} k={k} i={i} j={j}");
                        assert!(((r * r) - Matrix4::identity()).abs().max() < 1e-12);
                        assert!((r.determinant() - 1.0).abs() < 1e-12);
                        assert!((r * c.p(i) - c.p(i)).norm() < 1e-12);
                        assert!((r * c.q(j) - c.q(j)).norm() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn polygon_shapes() {
        let c = LatticeConfig::new(2, 2).unwrap();
        let xi = xi_polygon(&c);
        let expected = [e(0), e(2), e(1), e(3)];
        for (v, w) in xi.vertices().iter().zip(expected.iter()) {
            assert!((v - w).norm() < 1e-15);
        }
        let c32 = LatticeConfig::new(3, 2).unwrap();
        assert_eq!(xi_polygon(&c32).angle_denominators(), &[3, 2, 3, 2]);
        for (m, k) in [(2, 3), (3, 4), (5, 2), (7, 8)] {
            let cfg = LatticeConfig::new(m, k).unwrap();
            let eta = eta_polygon(&cfg);
            assert_eq!(eta.angle_denominators(), &[2, m, k, 2]);
            assert_eq!(xi_polygon(&cfg).angle_denominators(), &[m, k, m, k]);
            let vias: Vec<bool> = eta.via_points().iter().map(Option::is_some).collect();
            assert_eq!(vias, vec![false, false, true, false]);
            assert!((eta.via_points()[2].unwrap() - cfg.p(0)).norm() < 1e-15);
        }
    }

    #[test]
    fn polygon_validation() {
        let bad = GeodesicPolygon::new(
            vec![e(0), -e(0), e(1)],
            vec!["a".into(), "b".into(), "c".into()],
            vec![2, 2, 2],
            vec![None; 3],
        );
        assert_eq!(bad.unwrap_err(), LatticeError::AmbiguousEdge(0));
        let bad_den = GeodesicPolygon::new(
            vec![e(0), e(1), e(2)],
            vec!["a".into(), "b".into(), "c".into()],
            vec![2, 1, 2],
            vec![None; 3],
        );
        assert_eq!(bad_den.unwrap_err(), LatticeError::AngleDenominator(1));
        let off = GeodesicPolygon::new(
            vec![e(0) * 1.1, e(1), e(2)],
            vec!["a".into(), "b".into(), "c".into()],
            vec![2, 2, 2],
            vec![None; 3],
        );
        assert_eq!(off.unwrap_err(), LatticeError::NotOnSphere(0));
    }

    #[test]
    fn polar_normals_are_unit_and_orthogonal() {
        for (m, k) in [(2, 3), (3, 2), (4, 4), (5, 7)] {
            let cfg = LatticeConfig::new(m, k).unwrap();
            for family in [Family::Xi, Family::Eta] {
                let poly = polygon(family, &cfg);
                let polar = polar_vertex_data(family, &cfg);
                for (v, n) in poly.vertices().iter().zip(polar.normals.iter()) {
                    assert!((n.norm() - 1.0).abs() < 1e-12);
                    assert!(v.dot(n).abs() < 1e-12);
                }
                // normal is orthogonal to the edge directions at each vertex
                for v in 0..poly.len() {
                    for t in poly.corner_tangents(v) {
                        assert!(t.dot(&polar.normals[v]).abs() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn polar_vertex_values() {
        let cfg = LatticeConfig::new(5, 3).unwrap();
        let xi = polar_vertex_data(Family::Xi, &cfg);
        assert!((xi.normals[0] - cfg.p_hat(0)).norm() < 1e-15);
        assert!((xi.normals[1] + cfg.q_hat(0)).norm() < 1e-15);
        let eta = polar_vertex_data(Family::Eta, &cfg);
        assert!((eta.normals[2] - cfg.q_hat(1)).norm() < 1e-15);
    }

    #[test]
    fn edge_incidence() {
        let cfg = LatticeConfig::new(3, 3).unwrap();
        let eta = eta_polygon(&cfg);
        // Q₁ lies on γ_Q as a circle but not on the arc (−Q₁) → Q₀.
        let q1 = cfg.q(1);
        assert_eq!(eta.circles_containing(&q1), vec![1, 2, 3]);
        assert_eq!(eta.edges_containing(&q1), vec![1, 2]);
        assert_eq!(eta.edges_containing(&cfg.p(0)), vec![2]);
        let mid = eta.edge_point(0, 0.5);
        assert_eq!(eta.edges_containing(&mid), vec![0]);
    }
}
