use lawson::complex::{
    build_complex, check_free, closed_form_chi, deck_involution, double_cover, euler_characteristic_formula,
    minus_identity_face_map, quotient_by_minus_identity,
};
use lawson::group::{polygon_generators, DEFAULT_CAP};
use lawson::lattice::polygon;
use lawson::{ComplexError, ComplexKind, Family, LatticeConfig, ReflectionGroup};

fn setup(family: Family, m: u32, k: u32) -> (ReflectionGroup, lawson::SurfaceComplex) {
    let cfg = LatticeConfig::new(m, k).unwrap();
    let poly = polygon(family, &cfg);
    let g = ReflectionGroup::closure(&polygon_generators(&poly), DEFAULT_CAP).unwrap();
    let s = build_complex(&g, &poly).unwrap();
    (g, s)
}

#[test]
fn euler_characteristic_three_ways() {
    for family in [Family::Xi, Family::Eta] {
        for m in 2..=8 {
            for k in 2..=8 {
                let cfg = LatticeConfig::new(m, k).unwrap();
                let (g, s) = setup(family, m, k);
                let formula = euler_characteristic_formula(s.angle_denominators(), g.order(), 1).unwrap();
                assert_eq!(s.euler_characteristic(), formula);
                assert_eq!(formula, closed_form_chi(family, &cfg));
                let (v, e, f) = s.counts();
                assert_eq!(f, g.order());
                assert_eq!(2 * e, 4 * f);
                let corners: usize = s.vertices().iter().map(Vec::len).sum();
                assert_eq!(corners, 4 * f);
                assert!(v > 0);
            }
        }
    }
}

#[test]
fn genus_examples() {
    // ξ_{m−1,k−1} has genus (m−1)(k−1).
    let (_, s) = setup(Family::Xi, 3, 3);
    assert_eq!(s.euler_characteristic(), 2 - 2 * 4);
    let (_, s) = setup(Family::Eta, 3, 2);
    assert_eq!((s.euler_characteristic(), s.is_orientable()), (-1, false));
}

#[test]
fn double_cover_is_orientable_and_free() {
    for (m, k) in [(2, 2), (3, 4), (5, 6)] {
        let (g, s) = setup(Family::Eta, m, k);
        assert!(!s.is_orientable());
        let cover = double_cover(&g, &s).unwrap();
        assert_eq!(cover.kind(), ComplexKind::Sbar);
        assert!(cover.is_orientable());
        assert_eq!(cover.euler_characteristic(), 2 * s.euler_characteristic());
        check_free(&cover, &deck_involution(&cover)).unwrap();
    }
    let (g, s) = setup(Family::Xi, 3, 3);
    assert_eq!(double_cover(&g, &s).unwrap_err(), ComplexError::AlreadyOrientable);
}

#[test]
fn minus_identity_quotients() {
    let (g, s) = setup(Family::Xi, 4, 2);
    let q = quotient_by_minus_identity(&g, &s).unwrap();
    assert_eq!(q.kind(), ComplexKind::SModMinusOne);
    assert_eq!(2 * q.euler_characteristic(), s.euler_characteristic());

    let (g, s) = setup(Family::Eta, 4, 2);
    let cover = double_cover(&g, &s).unwrap();
    let q = quotient_by_minus_identity(&g, &cover).unwrap();
    assert_eq!(q.kind(), ComplexKind::SbarModMinusOne);
    assert!(q.is_orientable());

    let (g, s) = setup(Family::Xi, 3, 2);
    assert_eq!(minus_identity_face_map(&g, &s).unwrap_err(), ComplexError::MinusIdentityAbsent);
}

#[test]
fn export_format() {
    let (_, s) = setup(Family::Xi, 3, 2);
    let text = s.export();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("# lawson complex v1"));
    assert_eq!(lines.next(), Some("kind S"));
    let (v, e, f) = s.counts();
    assert!(text.contains(&format!("faces {f}\n")));
    assert!(text.contains(&format!("edges {e}\n")));
    assert!(text.contains(&format!("vertices {v}\n")));
    assert_eq!(text.lines().filter(|l| l.starts_with("face ")).count(), f);
    assert_eq!(text.lines().filter(|l| l.starts_with("edge ")).count(), e);
    assert_eq!(text.lines().filter(|l| l.starts_with("vertex ")).count(), v);
}
