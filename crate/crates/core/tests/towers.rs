use adictrop::degeneration::{default_tower_base, tower_simulate, ComponentKind, TraceClass};
use adictrop::exactnum::{LatticeVector, QVector, Rat, ValueGroup};
use adictrop::polyhedra::{PolyhedralComplex, Polyhedron};
use adictrop::Error;

/// `(-inf, -1], [-1, 0], [0, 1], [1, inf)`.
fn symmetric_base() -> PolyhedralComplex {
    let q = |x: i64| QVector::from_i64(&[x]);
    let cells = [
        Polyhedron::from_points(1, &[q(-1)], &[LatticeVector::from_i64(&[-1])], &[]).unwrap(),
        Polyhedron::from_points(1, &[q(-1), q(0)], &[], &[]).unwrap(),
        Polyhedron::from_points(1, &[q(0), q(1)], &[], &[]).unwrap(),
        Polyhedron::from_points(1, &[q(1)], &[LatticeVector::from_i64(&[1])], &[]).unwrap(),
    ];
    PolyhedralComplex::new(1, &cells).unwrap()
}
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn monotone_insertions_bubble(mut xs in prop::collection::btree_set(1i64..=60, 1..7), from_left in any::<bool>()) {
        let (base, v) = if from_left { (symmetric_base(), QVector::from_i64(&[0])) } else { default_tower_base() };
        let mut pts: Vec<Rat> = std::mem::take(&mut xs).into_iter().rev().map(|x| Rat::new(x, 61)).collect();
        if from_left {
            pts = pts.into_iter().map(|x| -x).collect();
        }
        let t = tower_simulate(&base, &v, &pts, &ValueGroup::new(61).unwrap()).unwrap();
        prop_assert_eq!(t.stages.len(), pts.len() + 1);
        for w in t.stages.windows(2) {
            prop_assert_eq!(w[1].components, w[0].components + 1);
            prop_assert_eq!(w[1].interior_components, w[0].interior_components + 1);
        }
        prop_assert!(t.trace.star_fixed && t.trace.nodes_on_edges);
        prop_assert_eq!(t.trace.class, TraceClass::LimitBoundary);
        prop_assert_eq!(&t.trace.nodes[1..], &pts[..].iter().map(|x| QVector::new(vec![x.clone()])).collect::<Vec<_>>()[..]);
        for s in &t.stages {
            prop_assert!(s.dual.components.iter().all(|c| c.kind == ComponentKind::ProjectiveLine));
        }
    }

    #[test]
    fn insertions_must_approach_the_vertex(a in 1i64..30, b in 1i64..30) {
        prop_assume!(a < b);
        let (base, v) = default_tower_base();
        let pts = [Rat::new(a, 31), Rat::new(b, 31)];
        let r = tower_simulate(&base, &v, &pts, &ValueGroup::new(31).unwrap());
        prop_assert!(matches!(r, Err(Error::InsertionOrder(_))));
    }
}

#[test]
fn irrational_insertions_are_refused() {
    let (base, v) = default_tower_base();
    let r = tower_simulate(&base, &v, &[Rat::new(1, 3)], &ValueGroup::new(2).unwrap());
    assert!(matches!(r, Err(Error::Rationality(_))));
}
