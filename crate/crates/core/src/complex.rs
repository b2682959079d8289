//! The surface `S = (G × Δ)/∼` as a combinatorial 2-complex, its orientable
//! double cover, and quotients by free involutions.
//!
//! Every complex here has polygonal faces with `n` labelled sides, and every
//! gluing identifies side `i` of one face with side `i` of another by the
//! identity map of the polygon edge. Vertex classes then follow from a
//! union-find over face corners.

use std::collections::{HashMap, VecDeque};
use std::fmt::{self, Write as _};

use num_rational::Rational64;
use serde::Serialize;
use thiserror::Error;

use crate::group::{
    canonical_string, minus_identity_index, polygon_generators, polygon_symmetry_subgroup, Parity,
    ReflectionGroup,
};
use crate::lattice::{Family, GeodesicPolygon, LatticeConfig};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ComplexError {
    #[error("side {side} of face {face} is not glued to exactly one other side")]
    NonManifoldGluing { face: usize, side: usize },
    #[error("vertex class at corner {corner} has {found} face corners, expected {expected}")]
    VertexClassSize { corner: usize, found: usize, expected: usize },
    #[error("polygon symmetry subgroup has order {0}; only trivial symmetry is supported")]
    NontrivialSymmetry(usize),
    #[error("group generator {0} is not the reflection across polygon edge {0}")]
    GeneratorMismatch(usize),
    #[error("Euler characteristic formula gives non-integer {0}")]
    NonIntegerChi(Rational64),
    #[error("complex is already orientable")]
    AlreadyOrientable,
    #[error("-1 is not an element of the group")]
    MinusIdentityAbsent,
    #[error("action is not free: it fixes a {0}")]
    ActionNotFree(&'static str),
    #[error("face map does not commute with the gluing")]
    IncompatibleAction,
}

/// Which surface a complex models.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ComplexKind {
    #[serde(rename = "S")]
    S,
    #[serde(rename = "S_mod_minus_one")]
    SModMinusOne,
    #[serde(rename = "Sbar")]
    Sbar,
    #[serde(rename = "Sbar_mod_minus_one")]
    SbarModMinusOne,
}

impl ComplexKind {
    pub fn quotient(self) -> Option<Self> {
        match self {
            Self::S => Some(Self::SModMinusOne),
            Self::Sbar => Some(Self::SbarModMinusOne),
            _ => None,
        }
    }

    pub fn is_quotient(self) -> bool {
        matches!(self, Self::SModMinusOne | Self::SbarModMinusOne)
    }

    pub fn is_double_cover(self) -> bool {
        matches!(self, Self::Sbar | Self::SbarModMinusOne)
    }
}

impl fmt::Display for ComplexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::S => "S",
            Self::SModMinusOne => "S_mod_minus_one",
            Self::Sbar => "Sbar",
            Self::SbarModMinusOne => "Sbar_mod_minus_one",
        };
        f.write_str(s)
    }
}

/// A face: the copy `(sheet, g)·Δ`. In a quotient, `element` is the orbit
/// representative with the smaller canonical key.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub sheet: u8,
    pub element: usize,
    pub key: String,
}

/// `(face, side)` or `(face, corner)`.
pub type Incidence = (usize, usize);

#[derive(Clone, Debug)]
pub struct SurfaceComplex {
    kind: ComplexKind,
    sides: usize,
    angle_denominators: Vec<u32>,
    faces: Vec<Face>,
    partner: Vec<Vec<usize>>,
    edges: Vec<[Incidence; 2]>,
    side_edge: Vec<Vec<usize>>,
    vertices: Vec<Vec<Incidence>>,
    corner_vertex: Vec<Vec<usize>>,
    orientation: Option<Vec<bool>>,
    parity_map: Option<Vec<Parity>>,
}

impl SurfaceComplex {
    /// Assembles a complex from face data and the side gluing `partner[f][i]`
    /// (side `i` of `f` is glued to side `i` of `partner[f][i]`).
    #[allow(clippy::needless_range_loop)]
    fn assemble(
        kind: ComplexKind,
        angle_denominators: &[u32],
        faces: Vec<Face>,
        partner: Vec<Vec<usize>>,
    ) -> Result<Self, ComplexError> {
        let n = angle_denominators.len();
        let f_count = faces.len();
        for f in 0..f_count {
            for i in 0..n {
                let g = partner[f][i];
                if g == f || partner[g][i] != f {
                    return Err(ComplexError::NonManifoldGluing { face: f, side: i });
                }
            }
        }

        let mut edges = Vec::new();
        let mut side_edge = vec![vec![usize::MAX; n]; f_count];
        for f in 0..f_count {
            for i in 0..n {
                if side_edge[f][i] == usize::MAX {
                    let g = partner[f][i];
                    side_edge[f][i] = edges.len();
                    side_edge[g][i] = edges.len();
                    edges.push([(f, i), (g, i)]);
                }
            }
        }

        let mut uf = UnionFind::new(f_count * n);
        let corner = |f: usize, c: usize| f * n + c;
        for f in 0..f_count {
            for i in 0..n {
                let g = partner[f][i];
                uf.union(corner(f, i), corner(g, i));
                uf.union(corner(f, (i + 1) % n), corner(g, (i + 1) % n));
            }
        }
        let mut class_of_root: HashMap<usize, usize> = HashMap::new();
        let mut vertices: Vec<Vec<Incidence>> = Vec::new();
        let mut corner_vertex = vec![vec![0; n]; f_count];
        for f in 0..f_count {
            for c in 0..n {
                let root = uf.find(corner(f, c));
                let id = *class_of_root.entry(root).or_insert_with(|| {
                    vertices.push(Vec::new());
                    vertices.len() - 1
                });
                vertices[id].push((f, c));
                corner_vertex[f][c] = id;
            }
        }
        for class in &vertices {
            let c = class[0].1;
            let expected = 2 * angle_denominators[c] as usize;
            if class.len() != expected || class.iter().any(|&(_, c2)| c2 != c) {
                return Err(ComplexError::VertexClassSize { corner: c, found: class.len(), expected });
            }
        }

        let orientation = two_colouring(&partner);
        Ok(Self {
            kind,
            sides: n,
            angle_denominators: angle_denominators.to_vec(),
            faces,
            partner,
            edges,
            side_edge,
            vertices,
            corner_vertex,
            orientation,
            parity_map: None,
        })
    }

    pub fn kind(&self) -> ComplexKind {
        self.kind
    }

    pub fn sides(&self) -> usize {
        self.sides
    }

    pub fn angle_denominators(&self) -> &[u32] {
        &self.angle_denominators
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn edges(&self) -> &[[Incidence; 2]] {
        &self.edges
    }

    pub fn vertices(&self) -> &[Vec<Incidence>] {
        &self.vertices
    }

    /// Face glued to side `i` of face `f`.
    pub fn partner(&self, f: usize, i: usize) -> usize {
        self.partner[f][i]
    }

    pub fn side_edge(&self, f: usize, i: usize) -> usize {
        self.side_edge[f][i]
    }

    pub fn corner_vertex(&self, f: usize, c: usize) -> usize {
        self.corner_vertex[f][c]
    }

    /// Polygon corner that all incidences of vertex class `v` share.
    pub fn vertex_corner(&self, v: usize) -> usize {
        self.vertices[v][0].1
    }

    pub fn counts(&self) -> (usize, usize, usize) {
        (self.vertices.len(), self.edges.len(), self.faces.len())
    }

    pub fn euler_characteristic(&self) -> i64 {
        let (v, e, f) = self.counts();
        v as i64 - e as i64 + f as i64
    }

    /// Orientability from a consistent face orientation (a 2-colouring of the
    /// dual graph, since every gluing is label-preserving).
    pub fn is_orientable(&self) -> bool {
        self.orientation.is_some()
    }

    /// Per-face orientation sign, when orientable.
    pub fn orientation(&self) -> Option<&[bool]> {
        self.orientation.as_deref()
    }

    /// Per-face parity `σ(g)`, present on `S` when the group parity is defined.
    pub fn parity_map(&self) -> Option<&[Parity]> {
        self.parity_map.as_deref()
    }

    /// Text export with faces sorted by `(sheet, key)`.
    pub fn export(&self) -> String {
        let mut order: Vec<usize> = (0..self.faces.len()).collect();
        order.sort_by(|&a, &b| {
            let (fa, fb) = (&self.faces[a], &self.faces[b]);
            (fa.sheet, &fa.key).cmp(&(fb.sheet, &fb.key))
        });
        let mut new_id = vec![0; self.faces.len()];
        for (id, &f) in order.iter().enumerate() {
            new_id[f] = id;
        }
        let mut edges: Vec<[Incidence; 2]> = self
            .edges
            .iter()
            .map(|&[a, b]| {
                let (a, b) = ((new_id[a.0], a.1), (new_id[b.0], b.1));
                if a <= b {
                    [a, b]
                } else {
                    [b, a]
                }
            })
            .collect();
        edges.sort();
        let mut vertices: Vec<Vec<Incidence>> = self
            .vertices
            .iter()
            .map(|class| {
                let mut c: Vec<Incidence> = class.iter().map(|&(f, c)| (new_id[f], c)).collect();
                c.sort();
                c
            })
            .collect();
        vertices.sort();

        let mut out = String::new();
        writeln!(out, "# lawson complex v1").unwrap();
        writeln!(out, "kind {}", self.kind).unwrap();
        writeln!(out, "faces {}", self.faces.len()).unwrap();
        for (id, &f) in order.iter().enumerate() {
            let face = &self.faces[f];
            writeln!(out, "face {id} {} {}", face.sheet, face.key).unwrap();
        }
        writeln!(out, "edges {}", edges.len()).unwrap();
        for (id, [a, b]) in edges.iter().enumerate() {
            writeln!(out, "edge {id} {}:{} {}:{}", a.0, a.1, b.0, b.1).unwrap();
        }
        writeln!(out, "vertices {}", vertices.len()).unwrap();
        for (id, class) in vertices.iter().enumerate() {
            let list: Vec<String> = class.iter().map(|(f, c)| format!("{f}:{c}")).collect();
            writeln!(out, "vertex {id} {}", list.join(" ")).unwrap();
        }
        out
    }
}

fn two_colouring(partner: &[Vec<usize>]) -> Option<Vec<bool>> {
    let mut colour: Vec<Option<bool>> = vec![None; partner.len()];
    for start in 0..partner.len() {
        if colour[start].is_some() {
            continue;
        }
        colour[start] = Some(false);
        let mut queue = VecDeque::from([start]);
        while let Some(f) = queue.pop_front() {
            let c = colour[f].unwrap();
            for &g in &partner[f] {
                match colour[g] {
                    None => {
                        colour[g] = Some(!c);
                        queue.push_back(g);
                    }
                    Some(d) if d == c => return None,
                    Some(_) => {}
                }
            }
        }
    }
    Some(colour.into_iter().map(Option::unwrap).collect())
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut y = x;
        while self.parent[y] != root {
            let next = self.parent[y];
            self.parent[y] = root;
            y = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

fn check_generators(group: &ReflectionGroup, polygon: &GeodesicPolygon) -> Result<(), ComplexError> {
    let expected = polygon_generators(polygon);
    if group.generators().len() != expected.len() {
        return Err(ComplexError::GeneratorMismatch(group.generators().len().min(expected.len())));
    }
    for (i, (a, b)) in group.generators().iter().zip(expected.iter()).enumerate() {
        if (a - b).abs().max() > 1e-9 {
            return Err(ComplexError::GeneratorMismatch(i));
        }
    }
    Ok(())
}

/// Builds `S`. Faces are group elements; side `i` of `g` is glued to side `i`
/// of `g·r_i`.
pub fn build_complex(group: &ReflectionGroup, polygon: &GeodesicPolygon) -> Result<SurfaceComplex, ComplexError> {
    check_generators(group, polygon)?;
    let sym = polygon_symmetry_subgroup(group, polygon).order();
    if sym != 1 {
        return Err(ComplexError::NontrivialSymmetry(sym));
    }
    let n = polygon.len();
    let faces = (0..group.len())
        .map(|g| Face { sheet: 0, element: g, key: canonical_string(group.matrix(g)) })
        .collect();
    let partner = (0..group.len())
        .map(|g| (0..n).map(|i| group.right_mul_generator(g, i)).collect())
        .collect();
    let mut complex = SurfaceComplex::assemble(ComplexKind::S, polygon.angle_denominators(), faces, partner)?;
    if group.is_orientable_quotient() {
        complex.parity_map = Some(
            group
                .elements()
                .iter()
                .map(|e| e.parity.unique().expect("single parity"))
                .collect(),
        );
    }
    Ok(complex)
}

/// Builds `S̄`: faces `(s, g)`, side `i` of `(s, g)` glued to `(1−s, g·r_i)`.
/// Face `(s, g)` has index `s·|G| + g`.
pub fn double_cover(group: &ReflectionGroup, base: &SurfaceComplex) -> Result<SurfaceComplex, ComplexError> {
    if base.is_orientable() {
        return Err(ComplexError::AlreadyOrientable);
    }
    let order = group.len();
    let n = base.sides();
    let mut faces = Vec::with_capacity(2 * order);
    let mut partner = Vec::with_capacity(2 * order);
    for s in 0..2u8 {
        for g in 0..order {
            faces.push(Face { sheet: s, element: g, key: canonical_string(group.matrix(g)) });
            let other = (1 - s as usize) * order;
            partner.push((0..n).map(|i| other + group.right_mul_generator(g, i)).collect());
        }
    }
    SurfaceComplex::assemble(ComplexKind::Sbar, base.angle_denominators(), faces, partner)
}

/// The deck involution `(s, g) ↦ (1−s, g)` of a double cover, on faces.
pub fn deck_involution(cover: &SurfaceComplex) -> Vec<usize> {
    let half = cover.faces().len() / 2;
    (0..cover.faces().len()).map(|f| (f + half) % (2 * half)).collect()
}

/// Checks that an involution on faces commuting with the gluing moves every
/// face, edge and vertex class.
pub fn check_free(complex: &SurfaceComplex, face_map: &[usize]) -> Result<(), ComplexError> {
    let n = complex.sides();
    for f in 0..complex.faces().len() {
        let g = face_map[f];
        if face_map[g] != f {
            return Err(ComplexError::IncompatibleAction);
        }
        for i in 0..n {
            if face_map[complex.partner(f, i)] != complex.partner(g, i) {
                return Err(ComplexError::IncompatibleAction);
            }
        }
        if g == f {
            return Err(ComplexError::ActionNotFree("face"));
        }
        for i in 0..n {
            if complex.side_edge(f, i) == complex.side_edge(g, i) {
                return Err(ComplexError::ActionNotFree("edge"));
            }
            if complex.corner_vertex(f, i) == complex.corner_vertex(g, i) {
                return Err(ComplexError::ActionNotFree("vertex"));
            }
        }
    }
    Ok(())
}

/// Face map of left multiplication by `−𝟙₄`, sheets unchanged.
pub fn minus_identity_face_map(group: &ReflectionGroup, complex: &SurfaceComplex) -> Result<Vec<usize>, ComplexError> {
    let minus = minus_identity_index(group).ok_or(ComplexError::MinusIdentityAbsent)?;
    let order = group.len();
    let faces = complex.faces();
    let index: HashMap<(u8, usize), usize> =
        faces.iter().enumerate().map(|(i, f)| ((f.sheet, f.element), i)).collect();
    faces
        .iter()
        .map(|f| {
            let target = group.mul(minus, f.element);
            debug_assert!(target < order);
            index.get(&(f.sheet, target)).copied().ok_or(ComplexError::IncompatibleAction)
        })
        .collect()
}

/// Quotient of `S` or `S̄` by `g ↦ −g`, after verifying the action is free.
pub fn quotient_by_minus_identity(
    group: &ReflectionGroup,
    complex: &SurfaceComplex,
) -> Result<SurfaceComplex, ComplexError> {
    let kind = complex.kind().quotient().ok_or(ComplexError::IncompatibleAction)?;
    let map = minus_identity_face_map(group, complex)?;
    check_free(complex, &map)?;
    quotient_by_involution(complex, &map, kind)
}

fn quotient_by_involution(
    complex: &SurfaceComplex,
    face_map: &[usize],
    kind: ComplexKind,
) -> Result<SurfaceComplex, ComplexError> {
    let mut class = vec![usize::MAX; face_map.len()];
    let mut faces = Vec::new();
    let mut reps = Vec::new();
    for f in 0..face_map.len() {
        if class[f] == usize::MAX {
            let g = face_map[f];
            let (a, b) = (&complex.faces()[f], &complex.faces()[g]);
            let rep = if (a.sheet, &a.key) <= (b.sheet, &b.key) { a.clone() } else { b.clone() };
            class[f] = faces.len();
            class[g] = faces.len();
            faces.push(rep);
            reps.push(f);
        }
    }
    let partner = reps
        .iter()
        .map(|&f| (0..complex.sides()).map(|i| class[complex.partner(f, i)]).collect())
        .collect();
    SurfaceComplex::assemble(kind, complex.angle_denominators(), faces, partner)
}

/// `χ = |G|/|G^Γ| · (1 − Σ (k_i − 1)/(2k_i))`, required to be an integer.
pub fn euler_characteristic_formula(
    angle_denominators: &[u32],
    group_order: usize,
    sym_order: usize,
) -> Result<i64, ComplexError> {
    let defect: Rational64 = angle_denominators
        .iter()
        .map(|&n| Rational64::new(n as i64 - 1, 2 * n as i64))
        .sum();
    let chi = Rational64::new(group_order as i64, sym_order as i64) * (Rational64::from_integer(1) - defect);
    if chi.is_integer() {
        Ok(chi.to_integer())
    } else {
        Err(ComplexError::NonIntegerChi(chi))
    }
}

/// Closed forms `χ(ξ) = 2(1−(m−1)(k−1))`, `χ(η) = 1−(m−1)(k−1)` for even `k`
/// and `2(1−(m−1)(k−1))` for odd `k`.
pub fn closed_form_chi(family: Family, cfg: &LatticeConfig) -> i64 {
    let base = 1 - (cfg.m() as i64 - 1) * (cfg.k() as i64 - 1);
    match family {
        Family::Eta if cfg.k().is_multiple_of(2) => base,
        _ => 2 * base,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::DEFAULT_CAP;
    use crate::lattice::{eta_polygon, polygon, xi_polygon};

    fn setup(family: Family, m: u32, k: u32) -> (ReflectionGroup, GeodesicPolygon) {
        let cfg = LatticeConfig::new(m, k).unwrap();
        let poly = polygon(family, &cfg);
        let group = ReflectionGroup::closure(&polygon_generators(&poly), DEFAULT_CAP).unwrap();
        (group, poly)
    }

    #[test]
    fn xi_2_2_counts() {
        let (g, p) = setup(Family::Xi, 2, 2);
        let s = build_complex(&g, &p).unwrap();
        assert_eq!(s.counts(), (8, 16, 8));
        assert_eq!(s.euler_characteristic(), 0);
    }

    #[test]
    fn chi_examples() {
        for (family, m, k, chi) in [(Family::Xi, 3, 2, -2), (Family::Eta, 2, 3, -2), (Family::Xi, 4, 3, -10)] {
            let (g, p) = setup(family, m, k);
            let s = build_complex(&g, &p).unwrap();
            assert_eq!(s.euler_characteristic(), chi);
            assert_eq!(euler_characteristic_formula(p.angle_denominators(), g.order(), 1).unwrap(), chi);
        }
        assert_eq!(euler_characteristic_formula(&[3, 2, 3, 2], 12, 1).unwrap(), -2);
        assert_eq!(euler_characteristic_formula(&[2, 2, 2, 2], 8, 1).unwrap(), 0);
        assert!(matches!(
            euler_characteristic_formula(&[3, 3, 3, 3], 5, 1),
            Err(ComplexError::NonIntegerChi(_))
        ));
    }

    #[test]
    fn orientability_cases() {
        assert!(build_complex(&setup(Family::Xi, 3, 4).0, &setup(Family::Xi, 3, 4).1).unwrap().is_orientable());
        let (g, p) = setup(Family::Eta, 3, 2);
        let s = build_complex(&g, &p).unwrap();
        assert!(!s.is_orientable());
        assert!(s.parity_map().is_none());
        let (g, p) = setup(Family::Eta, 3, 3);
        let s = build_complex(&g, &p).unwrap();
        assert!(s.is_orientable());
        assert!(s.parity_map().is_some());
    }

    #[test]
    fn double_cover_cases() {
        let (g, p) = setup(Family::Eta, 3, 2);
        let s = build_complex(&g, &p).unwrap();
        assert_eq!(s.euler_characteristic(), -1);
        let cover = double_cover(&g, &s).unwrap();
        assert_eq!(cover.euler_characteristic(), -2);
        assert!(cover.is_orientable());
        check_free(&cover, &deck_involution(&cover)).unwrap();

        let (g, p) = setup(Family::Eta, 2, 2);
        let s = build_complex(&g, &p).unwrap();
        assert_eq!(double_cover(&g, &s).unwrap().euler_characteristic(), 0);

        let (g, p) = setup(Family::Xi, 3, 3);
        let s = build_complex(&g, &p).unwrap();
        assert_eq!(double_cover(&g, &s).unwrap_err(), ComplexError::AlreadyOrientable);
    }

    #[test]
    fn quotient_cases() {
        let (g, p) = setup(Family::Xi, 4, 2);
        let s = build_complex(&g, &p).unwrap();
        assert_eq!(s.euler_characteristic(), -4);
        let q = quotient_by_minus_identity(&g, &s).unwrap();
        assert_eq!(q.euler_characteristic(), -2);
        assert!(q.is_orientable());

        let (g, p) = setup(Family::Xi, 4, 4);
        let s = build_complex(&g, &p).unwrap();
        assert_eq!(quotient_by_minus_identity(&g, &s).unwrap().euler_characteristic(), -8);

        let (g, p) = setup(Family::Eta, 4, 2);
        let cover = double_cover(&g, &build_complex(&g, &p).unwrap()).unwrap();
        assert_eq!(cover.euler_characteristic(), -4);
        let q = quotient_by_minus_identity(&g, &cover).unwrap();
        assert_eq!(q.euler_characteristic(), -2);
        assert_eq!(q.kind(), ComplexKind::SbarModMinusOne);

        let (g, p) = setup(Family::Xi, 3, 2);
        let s = build_complex(&g, &p).unwrap();
        assert_eq!(quotient_by_minus_identity(&g, &s).unwrap_err(), ComplexError::MinusIdentityAbsent);
    }

    #[test]
    fn closed_forms() {
        let c = |m, k| LatticeConfig::new(m, k).unwrap();
        assert_eq!(closed_form_chi(Family::Xi, &c(3, 2)), -2);
        assert_eq!(closed_form_chi(Family::Eta, &c(3, 2)), -1);
        assert_eq!(closed_form_chi(Family::Eta, &c(2, 3)), -2);
    }

    #[test]
    fn generator_mismatch_is_rejected() {
        let cfg = LatticeConfig::new(3, 3).unwrap();
        let g = ReflectionGroup::closure(&polygon_generators(&xi_polygon(&cfg)), DEFAULT_CAP).unwrap();
        assert!(matches!(
            build_complex(&g, &eta_polygon(&cfg)),
            Err(ComplexError::GeneratorMismatch(_))
        ));
    }

    #[test]
    fn export_is_stable() {
        let (g, p) = setup(Family::Xi, 2, 3);
        let s = build_complex(&g, &p).unwrap();
        let text = s.export();
        assert_eq!(text, s.export());
        assert!(text.starts_with("# lawson complex v1\nkind S\nfaces 12\n"));
        assert_eq!(text.lines().filter(|l| l.starts_with("edge ")).count(), 24);
    }
}
