use lawson::bipolar::{
    area_bounds, closed_form_area_bounds, closed_form_chi_bipolar, fundamental_domain_decision, BipolarError,
    CertifiedRelation,
};
use lawson::exterior::EPS;
use lawson::group::DEFAULT_CAP;
use lawson::{ComplexKind, Family, LatticeConfig, LawsonSurface};

fn surface(family: Family, m: u32, k: u32) -> LawsonSurface {
    LawsonSurface::new(family, LatticeConfig::new(m, k).unwrap(), DEFAULT_CAP).unwrap()
}

#[test]
fn p_and_q_multiplicities() {
    for m in 2..=6 {
        for k in 2..=6 {
            let xi = surface(Family::Xi, m, k);
            assert_eq!(xi.multiplicity(xi.vertex_index("P0").unwrap()).unwrap().count, k as usize);
            assert_eq!(xi.multiplicity(xi.vertex_index("Q0").unwrap()).unwrap().count, m as usize);
            let eta = surface(Family::Eta, m, k);
            assert_eq!(eta.multiplicity(eta.vertex_index("P1").unwrap()).unwrap().count, k as usize);
            assert_eq!(eta.multiplicity(eta.vertex_index("Q1").unwrap()).unwrap().count, m as usize);
        }
    }
}

#[test]
fn three_multiplicity_routes_agree() {
    for family in [Family::Xi, Family::Eta] {
        for (m, k) in [(2, 3), (3, 4), (4, 4), (5, 3)] {
            let s = surface(family, m, k);
            for v in 0..s.points().len() {
                let r = s.multiplicity(v).unwrap();
                assert_eq!(r.count, r.orbit_prediction, "{family}({m},{k}) {}", r.label);
                assert_eq!(r.count, r.class_count);
            }
        }
    }
}

#[test]
fn branched_rule_refuses_right_angles() {
    let s = surface(Family::Xi, 2, 3);
    let p0 = s.vertex_index("P0").unwrap();
    assert!(matches!(s.tangent_planes_at_vertex(p0), Err(BipolarError::BranchRuleInapplicable(_))));
    let q0 = s.vertex_index("Q0").unwrap();
    assert_eq!(s.tangent_planes_at_vertex(q0).unwrap().len(), 2);
    assert!(matches!(s.tangent_planes_at_vertex(99), Err(BipolarError::NoSuchVertex(99))));
}

#[test]
fn domain_chi_and_orientability() {
    for family in [Family::Xi, Family::Eta] {
        for m in 2..=6 {
            for k in 2..=6 {
                if (m, k) == (2, 2) {
                    continue;
                }
                let s = surface(family, m, k);
                let d = fundamental_domain_decision(&s, EPS).unwrap();
                let cfg = LatticeConfig::new(m, k).unwrap();
                assert_eq!(d.chi, closed_form_chi_bipolar(family, &cfg), "{family}({m},{k})");
                assert!(d.orientable);
                assert!(d.pinning.is_some());
                assert_eq!(area_bounds(&s, &d).unwrap(), closed_form_area_bounds(family, &cfg));
            }
        }
    }
}

#[test]
fn quotient_only_when_minus_identity_preserves_the_image() {
    let d = |f, m, k| fundamental_domain_decision(&surface(f, m, k), EPS).unwrap().kind;
    assert_eq!(d(Family::Xi, 4, 4), ComplexKind::SModMinusOne);
    assert_eq!(d(Family::Xi, 4, 3), ComplexKind::S);
    assert_eq!(d(Family::Eta, 4, 4), ComplexKind::SbarModMinusOne);
    // −𝟙₄ is odd here: it flips the sign of ψ̃ on the orientable S.
    assert_eq!(d(Family::Eta, 4, 3), ComplexKind::S);
    assert_eq!(d(Family::Eta, 3, 4), ComplexKind::Sbar);
}

#[test]
fn plane_relations_at_xi_p0() {
    let s = surface(Family::Xi, 3, 4);
    let c = s.classify_planes(s.base_domain(), s.vertex_index("P0").unwrap(), EPS).unwrap();
    assert!(c.branched);
    assert_eq!(c.classes.len(), 4);
    assert_eq!(c.counts.equal, 2);
    assert_eq!(c.counts.transversal, 4);
    for &(a, b, r) in &c.pairs {
        assert_eq!(c.relation(a, b), Some(r));
        assert_ne!(r, CertifiedRelation::Indeterminate);
    }
}
