use nalgebra::Matrix4;

use lawson::group::{is_orthogonal, polygon_generators, polygon_symmetry_subgroup, GroupError, DEFAULT_CAP};
use lawson::lattice::{polygon, r00, r_q, rotation12, rotation34};
use lawson::normal_form::normal_form_group;
use lawson::{Family, LatticeConfig, ReflectionGroup};

fn grid() -> impl Iterator<Item = (Family, LatticeConfig)> {
    [Family::Xi, Family::Eta]
        .into_iter()
        .flat_map(|f| (2..=8).flat_map(move |m| (2..=8).map(move |k| (f, LatticeConfig::new(m, k).unwrap()))))
}

/// Explicit element list, independent of both enumeration routes:
/// `R12(2πa/k)·R34(2πb/m)·r00^c`, times `r_Q` for η with odd `k`.
fn explicit_elements(family: Family, cfg: &LatticeConfig) -> Vec<Matrix4<f64>> {
    let (m, k) = (cfg.m() as f64, cfg.k() as f64);
    let tau = std::f64::consts::TAU;
    let mut out = Vec::new();
    for a in 0..cfg.k() {
        for b in 0..cfg.m() {
            for c in 0..2 {
                let mut g = rotation12(tau * a as f64 / k) * rotation34(tau * b as f64 / m);
                if c == 1 {
                    g *= r00();
                }
                out.push(g);
                if family == Family::Eta && cfg.k() % 2 == 1 {
                    out.push(g * r_q());
                }
            }
        }
    }
    out
}

#[test]
fn closure_and_normal_form_agree_on_the_grid() {
    for (family, cfg) in grid() {
        let gens = polygon_generators(&polygon(family, &cfg));
        let bfs = ReflectionGroup::closure(&gens, DEFAULT_CAP).unwrap();
        let nf = normal_form_group(family, &cfg).unwrap();
        let explicit = explicit_elements(family, &cfg);
        assert_eq!(bfs.order(), explicit.len(), "{family}({}, {})", cfg.m(), cfg.k());
        assert!(bfs.same_elements(&nf));
        assert!(explicit.iter().all(|g| bfs.contains(g)));
        assert!(bfs.elements().iter().all(|e| is_orthogonal(&e.matrix, 1e-9)));
        assert_eq!(polygon_symmetry_subgroup(&bfs, &polygon(family, &cfg)).order(), 1);
    }
}

#[test]
fn generators_are_involutions() {
    for (family, cfg) in grid() {
        for g in polygon_generators(&polygon(family, &cfg)) {
            assert!((g * g - Matrix4::identity()).abs().max() < 1e-12);
            // A reflection across a great circle fixes a 2-plane and negates its complement.
            assert!((g.determinant() - 1.0).abs() < 1e-12);
            assert!(g.trace().abs() < 1e-12);
        }
    }
}

/// Parity read off the `(x₁, x₂)` block: one for a reflection block, plus
/// one if the block angle is an odd multiple of `π/k` (the `r_Q` factor).
fn block_parity(g: &Matrix4<f64>, k: u32) -> u32 {
    let reflection = (g[(0, 0)] * g[(1, 1)] - g[(0, 1)] * g[(1, 0)]) < 0.0;
    let steps = g[(1, 0)].atan2(g[(0, 0)]) * k as f64 / std::f64::consts::PI;
    let odd_half_turns = (steps.round() as i64).rem_euclid(2) as u32;
    (reflection as u32 + odd_half_turns) % 2
}

#[test]
fn parity_matches_block_structure() {
    for (family, cfg) in grid() {
        let g = ReflectionGroup::closure(&polygon_generators(&polygon(family, &cfg)), DEFAULT_CAP).unwrap();
        let orientable = g.is_orientable_quotient();
        assert_eq!(orientable, family == Family::Xi || cfg.k() % 2 == 1);
        if !orientable {
            continue;
        }
        for e in g.elements() {
            assert_eq!(e.parity.unique().unwrap().bit(), block_parity(&e.matrix, cfg.k()), "{family}({}, {})", cfg.m(), cfg.k());
        }
    }
}

#[test]
fn cap_is_enforced() {
    let cfg = LatticeConfig::new(8, 8).unwrap();
    let gens = polygon_generators(&polygon(Family::Xi, &cfg));
    assert_eq!(ReflectionGroup::closure(&gens, 50).unwrap_err(), GroupError::CapExceeded { cap: 50 });
    assert_eq!(ReflectionGroup::closure(&gens, 0).unwrap_err(), GroupError::InvalidCap);
}

#[test]
fn non_involutive_generator_is_rejected() {
    let err = ReflectionGroup::closure(&[r00(), rotation12(1.0)], DEFAULT_CAP).unwrap_err();
    assert_eq!(err, GroupError::NonInvolutiveGenerator(1));
}
