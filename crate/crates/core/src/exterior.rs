//! Linear and exterior algebra on R⁴ and Λ²R⁴ ≅ R⁶.
//!
//! Bivectors are stored in the fixed lexicographic basis
//! `(e₁₂, e₁₃, e₁₄, e₂₃, e₂₄, e₃₄)`. All rank and equality decisions go
//! through an explicit tolerance; [`EPS`] is the default.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{Matrix4, Vector4};
use thiserror::Error;

/// Default tolerance for every rank or equality decision.
pub const EPS: f64 = 1e-9;

/// Index pairs `(i, j)`, `i < j`, of the bivector basis in storage order.
pub const BASIS_PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExteriorError {
    #[error("plane spanners are linearly dependent (rank {rank} < 2)")]
    DegenerateInput { rank: usize },
}

/// An element of Λ²R⁴.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Bivector6(pub [f64; 6]);

impl Bivector6 {
    pub const ZERO: Self = Self([0.0; 6]);

    /// The basis bivector `e_i ∧ e_j` (zero-based, any order; swapped
    /// indices give the negative).
    pub fn basis(i: usize, j: usize) -> Self {
        let mut out = Self::ZERO;
        if i == j {
            return out;
        }
        let (lo, hi, sign) = if i < j { (i, j, 1.0) } else { (j, i, -1.0) };
        let slot = BASIS_PAIRS
            .iter()
            .position(|&p| p == (lo, hi))
            .expect("indices must be < 4");
        out.0[slot] = sign;
        out
    }

    pub fn components(&self) -> &[f64; 6] {
        &self.0
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0.map(|x| x * s))
    }

    /// Plücker form `p₁₂p₃₄ − p₁₃p₂₄ + p₁₄p₂₃`; zero exactly for simple bivectors.
    pub fn plucker(&self) -> f64 {
        let p = &self.0;
        p[0] * p[5] - p[1] * p[4] + p[2] * p[3]
    }

    pub fn approx_eq(&self, other: &Self, eps: f64) -> bool {
        self.0
            .iter()
            .zip(other.0.iter())
            .all(|(a, b)| (a - b).abs() <= eps)
    }

    /// Image under the induced map Λ²g, i.e. `Σ c_ij g(e_i) ∧ g(e_j)`.
    pub fn transform(&self, g: &Matrix4<f64>) -> Self {
        let mut out = Self::ZERO;
        for (slot, &(i, j)) in BASIS_PAIRS.iter().enumerate() {
            let c = self.0[slot];
            if c == 0.0 {
                continue;
            }
            let w = wedge2(&g.column(i).into_owned(), &g.column(j).into_owned());
            out = out + w.scale(c);
        }
        out
    }
}

impl Add for Bivector6 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut out = self.0;
        for (o, r) in out.iter_mut().zip(rhs.0) {
            *o += r;
        }
        Self(out)
    }
}

impl Sub for Bivector6 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for Bivector6 {
    type Output = Self;
    fn neg(self) -> Self {
        Self(self.0.map(|x| -x))
    }
}

impl Mul<Bivector6> for f64 {
    type Output = Bivector6;
    fn mul(self, rhs: Bivector6) -> Bivector6 {
        rhs.scale(self)
    }
}

impl fmt::Display for Bivector6 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = ["e12", "e13", "e14", "e23", "e24", "e34"];
        let mut first = true;
        for (c, name) in self.0.iter().zip(names) {
            if c.abs() <= EPS {
                continue;
            }
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{:+.6}{}", c, name)?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// `v ∧ w`: component `(i, j)` is the 2×2 minor `v_i w_j − v_j w_i`.
pub fn wedge2(v: &Vector4<f64>, w: &Vector4<f64>) -> Bivector6 {
    Bivector6(BASIS_PAIRS.map(|(i, j)| v[i] * w[j] - v[j] * w[i]))
}

pub fn hodge4(
    v1: &Vector4<f64>,
    v2: &Vector4<f64>,
    v3: &Vector4<f64>,
    v4: &Vector4<f64>,
) -> f64 {
    Matrix4::from_columns(&[*v1, *v2, *v3, *v4]).determinant()
}

/// The vector `*(v₁∧v₂∧v₃) = Σ det(v₁, v₂, v₃, E_i) E_i`.
pub fn hodge3(v1: &Vector4<f64>, v2: &Vector4<f64>, v3: &Vector4<f64>) -> Vector4<f64> {
    let mut out = Vector4::zeros();
    for i in 0..4 {
        let mut e = Vector4::zeros();
        e[i] = 1.0;
        out[i] = hodge4(v1, v2, v3, &e);
    }
    out
}

/// Inner product on Λ²R⁴ (the bilinear extension of the Gram form).
pub fn bivector_inner(a: &Bivector6, b: &Bivector6) -> f64 {
    a.dot(b)
}

/// `⟨v∧w, x∧y⟩` evaluated as the Gram determinant of the pairings.
pub fn gram_inner(v: &Vector4<f64>, w: &Vector4<f64>, x: &Vector4<f64>, y: &Vector4<f64>) -> f64 {
    v.dot(x) * w.dot(y) - v.dot(y) * w.dot(x)
}

/// Numerical rank of a family of bivectors.
///
/// Column-pivoted modified Gram–Schmidt: at every step the residual with the
/// largest norm is taken as the next pivot, and the process stops once that
/// norm drops to `eps` or below. A second projection pass keeps the residuals
/// orthogonal to working precision.
pub fn rank(vectors: &[Bivector6], eps: f64) -> usize {
    orthonormal_pivots(vectors, eps).len()
}

fn orthonormal_pivots(vectors: &[Bivector6], eps: f64) -> Vec<Bivector6> {
    let mut residuals: Vec<Bivector6> = vectors.to_vec();
    let mut basis: Vec<Bivector6> = Vec::new();
    while !residuals.is_empty() {
        let (best, norm) = residuals
            .iter()
            .enumerate()
            .map(|(i, r)| (i, r.norm()))
            .fold((0, f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc });
        if norm <= eps {
            break;
        }
        let q = residuals.swap_remove(best).scale(1.0 / norm);
        for r in residuals.iter_mut() {
            for _ in 0..2 {
                let c = r.dot(&q);
                *r = *r - q.scale(c);
            }
        }
        basis.push(q);
    }
    basis
}

/// A 2-plane in Λ²R⁴, kept both as the given spanners and as an orthonormal
/// 6×2 frame.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Plane2in6 {
    spanners: [Bivector6; 2],
    frame: [Bivector6; 2],
}

impl Plane2in6 {
    pub fn new(a: Bivector6, b: Bivector6) -> Result<Self, ExteriorError> {
        Self::with_tolerance(a, b, EPS)
    }

    pub fn with_tolerance(a: Bivector6, b: Bivector6, eps: f64) -> Result<Self, ExteriorError> {
        // Orthonormalize in input order so the frame is deterministic.
        let na = a.norm();
        if na <= eps {
            return Err(ExteriorError::DegenerateInput { rank: rank(&[a, b], eps) });
        }
        let q1 = a.scale(1.0 / na);
        let mut r = b - q1.scale(b.dot(&q1));
        r = r - q1.scale(r.dot(&q1));
        let nr = r.norm();
        if nr <= eps {
            return Err(ExteriorError::DegenerateInput { rank: 1 });
        }
        Ok(Self { spanners: [a, b], frame: [q1, r.scale(1.0 / nr)] })
    }

    pub fn spanners(&self) -> &[Bivector6; 2] {
        &self.spanners
    }

    pub fn frame(&self) -> &[Bivector6; 2] {
        &self.frame
    }

    pub fn transform(&self, g: &Matrix4<f64>) -> Result<Self, ExteriorError> {
        Self::new(self.spanners[0].transform(g), self.spanners[1].transform(g))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PlaneRelation {
    /// Same plane (combined rank 2).
    Equal,
    /// Meet in a line (combined rank 3).
    Partial,
    /// Meet only at the origin (combined rank 4).
    Transversal,
}

pub fn plane_relation(p: &Plane2in6, q: &Plane2in6) -> PlaneRelation {
    plane_relation_with_tolerance(p, q, EPS)
}

pub fn plane_relation_with_tolerance(p: &Plane2in6, q: &Plane2in6, eps: f64) -> PlaneRelation {
    let combined = [p.frame[0], p.frame[1], q.frame[0], q.frame[1]];
    match rank(&combined, eps) {
        0..=2 => PlaneRelation::Equal,
        3 => PlaneRelation::Partial,
        _ => PlaneRelation::Transversal,
    }
}
