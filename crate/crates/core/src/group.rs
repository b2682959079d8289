//! Finite groups generated by reflections across great circles, enumerated by
//! breadth-first closure with word-parity tracking.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use nalgebra::{Matrix4, Vector4};
use serde::Serialize;
use thiserror::Error;

use crate::lattice::{geodesic_reflection, GeodesicPolygon, GreatCircle};

pub const DEFAULT_CAP: usize = 10_000;

/// Grid used for hashing matrix entries.
const KEY_SCALE: f64 = 1e8;
/// Two matrices with the same key must agree to this tolerance.
const MATCH_TOL: f64 = 1e-7;
const ORTHO_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GroupError {
    #[error("closure exceeded the cap of {cap} elements")]
    CapExceeded { cap: usize },
    #[error("generator {0} is not an orthogonal involution")]
    NonInvolutiveGenerator(usize),
    #[error("cap must be at least 1")]
    InvalidCap,
    #[error("matrix is not an element of the group")]
    NotInGroup,
    #[error("two distinct matrices share key {0}")]
    KeyCollision(String),
}

/// Hash key of a matrix: entries rounded to a 1e-8 grid, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MatrixKey([i64; 16]);

impl MatrixKey {
    pub fn of(m: &Matrix4<f64>) -> Self {
        let mut out = [0i64; 16];
        for r in 0..4 {
            for c in 0..4 {
                out[4 * r + c] = (m[(r, c)] * KEY_SCALE).round() as i64;
            }
        }
        MatrixKey(out)
    }
}

/// Row-major entries at 12 decimals, used for ordering and serialization.
pub fn canonical_string(m: &Matrix4<f64>) -> String {
    let mut parts = Vec::with_capacity(16);
    for r in 0..4 {
        for c in 0..4 {
            let x = (m[(r, c)] * 1e12).round() / 1e12;
            let x = if x == 0.0 { 0.0 } else { x };
            parts.push(format!("{x:.12}"));
        }
    }
    parts.join(",")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_bit(bit: u32) -> Self {
        if bit.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn bit(self) -> u32 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn flip(self) -> Self {
        Parity::from_bit(self.bit() + 1)
    }

}

impl std::ops::Add for Parity {
    type Output = Parity;

    fn add(self, other: Parity) -> Parity {
        Parity::from_bit(self.bit() + other.bit())
    }
}

/// Set of word parities realizing one matrix.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct ParitySet {
    pub even: bool,
    pub odd: bool,
}

impl ParitySet {
    pub fn single(p: Parity) -> Self {
        let mut s = Self::default();
        s.insert(p);
        s
    }

    pub fn both() -> Self {
        Self { even: true, odd: true }
    }

    pub fn insert(&mut self, p: Parity) -> bool {
        let slot = match p {
            Parity::Even => &mut self.even,
            Parity::Odd => &mut self.odd,
        };
        let fresh = !*slot;
        *slot = true;
        fresh
    }

    pub fn contains(&self, p: Parity) -> bool {
        match p {
            Parity::Even => self.even,
            Parity::Odd => self.odd,
        }
    }

    pub fn is_mixed(&self) -> bool {
        self.even && self.odd
    }

    pub fn is_empty(&self) -> bool {
        !self.even && !self.odd
    }

    /// The parity if it is unique.
    pub fn unique(&self) -> Option<Parity> {
        match (self.even, self.odd) {
            (true, false) => Some(Parity::Even),
            (false, true) => Some(Parity::Odd),
            _ => None,
        }
    }
}

impl fmt::Display for ParitySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.even, self.odd) {
            (true, true) => write!(f, "{{even,odd}}"),
            (true, false) => write!(f, "{{even}}"),
            (false, true) => write!(f, "{{odd}}"),
            (false, false) => write!(f, "{{}}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GroupElement {
    pub matrix: Matrix4<f64>,
    pub parity: ParitySet,
}

impl GroupElement {
    pub fn key(&self) -> MatrixKey {
        MatrixKey::of(&self.matrix)
    }
}

pub fn is_orthogonal(m: &Matrix4<f64>, tol: f64) -> bool {
    (m.transpose() * m - Matrix4::identity()).abs().max() <= tol
}

fn is_involution(m: &Matrix4<f64>) -> bool {
    is_orthogonal(m, ORTHO_TOL) && (m * m - Matrix4::identity()).abs().max() <= ORTHO_TOL
}

/// A finite group together with the right action of its generators.
///
/// Element 0 is the identity. `right[g][i]` is the index of `g · r_i`.
#[derive(Clone, Debug)]
pub struct ReflectionGroup {
    generators: Vec<Matrix4<f64>>,
    elements: Vec<GroupElement>,
    right: Vec<Vec<usize>>,
    index: HashMap<MatrixKey, usize>,
}

impl ReflectionGroup {
    /// Breadth-first closure over (matrix, parity) states, right-multiplying
    /// by generators. Fails once more than `cap` distinct matrices appear.
    pub fn closure(generators: &[Matrix4<f64>], cap: usize) -> Result<Self, GroupError> {
        if cap == 0 {
            return Err(GroupError::InvalidCap);
        }
        if let Some(i) = generators.iter().position(|g| !is_involution(g)) {
            return Err(GroupError::NonInvolutiveGenerator(i));
        }
        let mut group = Self {
            generators: generators.to_vec(),
            elements: vec![GroupElement {
                matrix: Matrix4::identity(),
                parity: ParitySet::single(Parity::Even),
            }],
            right: vec![vec![usize::MAX; generators.len()]],
            index: HashMap::from([(MatrixKey::of(&Matrix4::identity()), 0)]),
        };
        let mut queue = VecDeque::from([(0usize, Parity::Even)]);
        while let Some((g, parity)) = queue.pop_front() {
            for (i, r) in generators.iter().enumerate() {
                let product = group.elements[g].matrix * r;
                let next_parity = parity.flip();
                let h = match group.lookup(&product)? {
                    Some(h) => h,
                    None => {
                        if group.elements.len() >= cap {
                            return Err(GroupError::CapExceeded { cap });
                        }
                        group.push(product, ParitySet::default())
                    }
                };
                group.right[g][i] = h;
                if group.elements[h].parity.insert(next_parity) {
                    queue.push_back((h, next_parity));
                }
            }
        }
        Ok(group)
    }

    /// Builds a group from a complete element list with known parity evidence.
    /// The identity must be present; generators must be members.
    pub fn from_elements(
        generators: &[Matrix4<f64>],
        elements: Vec<GroupElement>,
    ) -> Result<Self, GroupError> {
        let mut group = Self {
            generators: generators.to_vec(),
            elements: Vec::with_capacity(elements.len()),
            right: Vec::with_capacity(elements.len()),
            index: HashMap::with_capacity(elements.len()),
        };
        let id = elements
            .iter()
            .position(|e| (e.matrix - Matrix4::identity()).abs().max() <= MATCH_TOL)
            .ok_or(GroupError::NotInGroup)?;
        let ordered = std::iter::once(&elements[id])
            .chain(elements.iter().enumerate().filter(|&(i, _)| i != id).map(|(_, e)| e));
        for e in ordered {
            if group.lookup(&e.matrix)?.is_some() {
                return Err(GroupError::KeyCollision(canonical_string(&e.matrix)));
            }
            group.push(e.matrix, e.parity);
        }
        for g in 0..group.len() {
            for (i, r) in generators.iter().enumerate() {
                let product = group.elements[g].matrix * r;
                group.right[g][i] = group.lookup(&product)?.ok_or(GroupError::NotInGroup)?;
            }
        }
        Ok(group)
    }

    fn push(&mut self, matrix: Matrix4<f64>, parity: ParitySet) -> usize {
        let idx = self.elements.len();
        self.index.insert(MatrixKey::of(&matrix), idx);
        self.elements.push(GroupElement { matrix, parity });
        self.right.push(vec![usize::MAX; self.generators.len()]);
        idx
    }

    fn lookup(&self, m: &Matrix4<f64>) -> Result<Option<usize>, GroupError> {
        match self.index.get(&MatrixKey::of(m)) {
            Some(&i) if (self.elements[i].matrix - m).abs().max() <= MATCH_TOL => Ok(Some(i)),
            Some(_) => Err(GroupError::KeyCollision(canonical_string(m))),
            None => Ok(None),
        }
    }

    pub fn index_of(&self, m: &Matrix4<f64>) -> Option<usize> {
        self.lookup(m).ok().flatten()
    }

    pub fn contains(&self, m: &Matrix4<f64>) -> bool {
        self.index_of(m).is_some()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn element(&self, g: usize) -> &GroupElement {
        &self.elements[g]
    }

    pub fn matrix(&self, g: usize) -> &Matrix4<f64> {
        &self.elements[g].matrix
    }

    pub fn generators(&self) -> &[Matrix4<f64>] {
        &self.generators
    }

    /// Index of `g · r_i`.
    pub fn right_mul_generator(&self, g: usize, i: usize) -> usize {
        self.right[g][i]
    }

    /// Index of `a · b`.
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.index_of(&(self.elements[a].matrix * self.elements[b].matrix))
            .expect("group is closed under multiplication")
    }

    /// True iff no element is realized by words of both parities.
    pub fn is_orientable_quotient(&self) -> bool {
        self.elements.iter().all(|e| !e.parity.is_mixed())
    }

    /// Elements sorted by canonical string.
    pub fn sorted_keys(&self) -> Vec<String> {
        let mut keys: Vec<String> = self.elements.iter().map(|e| canonical_string(&e.matrix)).collect();
        keys.sort();
        keys
    }

    /// Same matrices (up to tolerance) in both groups.
    pub fn same_elements(&self, other: &ReflectionGroup) -> bool {
        self.len() == other.len() && self.elements.iter().all(|e| other.contains(&e.matrix))
    }
}

/// Subgroup as a sorted list of element indices of its ambient group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    members: Vec<usize>,
}

impl Subgroup {
    pub fn trivial() -> Self {
        Self { members: vec![0] }
    }

    /// Subgroup generated by the given elements.
    pub fn generated_by(group: &ReflectionGroup, gens: &[usize]) -> Self {
        let mut seen = vec![false; group.len()];
        seen[0] = true;
        let mut members = vec![0];
        let mut queue = VecDeque::from([0usize]);
        while let Some(g) = queue.pop_front() {
            for &s in gens {
                let h = group.mul(g, s);
                if !seen[h] {
                    seen[h] = true;
                    members.push(h);
                    queue.push_back(h);
                }
            }
        }
        members.sort_unstable();
        Self { members }
    }

    fn from_filter(group: &ReflectionGroup, keep: impl Fn(&GroupElement) -> bool) -> Self {
        let members = (0..group.len()).filter(|&g| keep(group.element(g))).collect();
        Self { members }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.members.binary_search(&g).is_ok()
    }
}

/// `G^p`: generated by the reflections across those of `circles` that pass
/// through `point`.
pub fn stabilizer(
    group: &ReflectionGroup,
    point: &Vector4<f64>,
    circles: &[GreatCircle],
) -> Result<Subgroup, GroupError> {
    let gens = circles
        .iter()
        .filter(|c| c.contains(point, 1e-9))
        .map(|c| group.index_of(&geodesic_reflection(c)).ok_or(GroupError::NotInGroup))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Subgroup::generated_by(group, &gens))
}

/// `G^p` at a polygon vertex, generated by the reflections across its two
/// adjacent edges (dihedral of order `2n` at an angle `π/n`).
pub fn vertex_stabilizer(
    group: &ReflectionGroup,
    polygon: &GeodesicPolygon,
    v: usize,
) -> Result<Subgroup, GroupError> {
    let (a, b) = polygon.corner_edges(v);
    stabilizer(group, polygon.vertex(v), &[*polygon.edge_circle(a), *polygon.edge_circle(b)])
}

/// All elements fixing `point`.
pub fn point_stabilizer(group: &ReflectionGroup, point: &Vector4<f64>) -> Subgroup {
    Subgroup::from_filter(group, |e| (e.matrix * point - point).norm() <= 1e-9)
}

/// Number of distinct images of `point` under the group.
pub fn orbit_size(group: &ReflectionGroup, point: &Vector4<f64>) -> usize {
    let mut orbit: Vec<Vector4<f64>> = Vec::new();
    for e in group.elements() {
        let image = e.matrix * point;
        if !orbit.iter().any(|q| (q - image).norm() <= 1e-9) {
            orbit.push(image);
        }
    }
    orbit.len()
}

fn polygon_sample_set(polygon: &GeodesicPolygon) -> Vec<Vector4<f64>> {
    let mut pts: Vec<Vector4<f64>> = Vec::new();
    for i in 0..polygon.len() {
        let mut samples = polygon.edge_samples(i).to_vec();
        if let Some(via) = polygon.via_points()[i] {
            samples.push(via);
        }
        for s in samples {
            if !pts.iter().any(|q| (q - s).norm() <= 1e-9) {
                pts.push(s);
            }
        }
    }
    pts
}

/// `G^Γ`: elements mapping the polygon's sampled point set onto itself.
pub fn polygon_symmetry_subgroup(group: &ReflectionGroup, polygon: &GeodesicPolygon) -> Subgroup {
    let pts = polygon_sample_set(polygon);
    Subgroup::from_filter(group, |e| {
        pts.iter().all(|p| {
            let image = e.matrix * p;
            pts.iter().any(|q| (q - image).norm() <= 1e-9)
        })
    })
}

/// Membership of `−𝟙₄` and the parities of words realizing it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MinusIdentityStatus {
    Absent,
    PresentEven,
    PresentOdd,
    /// Realized by words of both parities (non-orientable quotient).
    PresentMixed,
}

impl MinusIdentityStatus {
    pub fn is_present(self) -> bool {
        self != MinusIdentityStatus::Absent
    }
}

impl fmt::Display for MinusIdentityStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::Absent => "absent",
            Self::PresentEven => "present_even",
            Self::PresentOdd => "present_odd",
            Self::PresentMixed => "present_mixed",
        };
        f.write_str(s)
    }
}

pub fn minus_identity_index(group: &ReflectionGroup) -> Option<usize> {
    group.index_of(&-Matrix4::identity())
}

pub fn minus_identity_status(group: &ReflectionGroup) -> MinusIdentityStatus {
    match minus_identity_index(group) {
        None => MinusIdentityStatus::Absent,
        Some(i) => {
            let p = group.element(i).parity;
            match p.unique() {
                Some(Parity::Even) => MinusIdentityStatus::PresentEven,
                Some(Parity::Odd) => MinusIdentityStatus::PresentOdd,
                None => MinusIdentityStatus::PresentMixed,
            }
        }
    }
}

/// Reflections across the edges of the polygon, in edge order.
pub fn polygon_generators(polygon: &GeodesicPolygon) -> Vec<Matrix4<f64>> {
    polygon.circles().iter().map(geodesic_reflection).collect()
}
