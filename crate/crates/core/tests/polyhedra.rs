use adictrop::exactnum::{QVector, Rat};
use adictrop::oracle::{hull_vertices, minkowski_vertices, pairwise_intersections};
use adictrop::polyhedra::{PolyhedralComplex, Polyhedron};
use adictrop::valpoly::{FieldProfile, LaurentPolynomial, ValuedCoefficient};
use adictrop::LatticeVector;
use proptest::prelude::*;

fn point(n: usize) -> impl Strategy<Value = QVector> {
    prop::collection::vec((-6i64..6, 1i64..4), n).prop_map(|c| QVector::new(c.into_iter().map(|(p, q)| Rat::new(p, q)).collect()))
}

fn cloud(n: usize) -> impl Strategy<Value = Vec<QVector>> {
    prop::collection::vec(point(n), 1..7)
}

/// A decomposition of the line with the given breakpoints.
fn line_complex(mut cuts: Vec<i64>) -> PolyhedralComplex {
    cuts.sort();
    cuts.dedup();
    let q = |x: i64| QVector::from_i64(&[x]);
    let mut cells = vec![
        Polyhedron::from_points(1, &[q(cuts[0])], &[LatticeVector::from_i64(&[-1])], &[]).unwrap(),
        Polyhedron::from_points(1, &[q(*cuts.last().unwrap())], &[LatticeVector::from_i64(&[1])], &[]).unwrap(),
    ];
    for w in cuts.windows(2) {
        cells.push(Polyhedron::from_points(1, &[q(w[0]), q(w[1])], &[], &[]).unwrap());
    }
    PolyhedralComplex::new(1, &cells).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hull_vertices_match_the_oracle(pts in cloud(2)) {
        let p = Polyhedron::from_points(2, &pts, &[], &[]).unwrap();
        let mut v = p.vertices();
        v.sort();
        prop_assert_eq!(v, hull_vertices(&pts));
    }

    #[test]
    fn h_and_v_descriptions_agree(pts in cloud(3)) {
        let p = Polyhedron::from_points(3, &pts, &[], &[]).unwrap();
        let q = Polyhedron::from_inequalities(3, &p.halfspaces(), &p.equations()).unwrap();
        prop_assert_eq!(&q, &p);
        for x in &pts {
            prop_assert!(p.contains(x));
            prop_assert!(p.halfspaces().iter().all(|h| !h.evaluate(x).is_negative()));
        }
    }

    #[test]
    fn newton_polytope_of_a_product(a in prop::collection::vec(point(2), 1..4), b in prop::collection::vec(point(2), 1..4)) {
        let pa = Polyhedron::from_points(2, &a, &[], &[]).unwrap();
        let pb = Polyhedron::from_points(2, &b, &[], &[]).unwrap();
        let sums: Vec<QVector> = pa.vertices().iter().flat_map(|x| pb.vertices().into_iter().map(move |y| x.add(&y))).collect();
        let mut v = Polyhedron::from_points(2, &sums, &[], &[]).unwrap().vertices();
        v.sort();
        prop_assert_eq!(v, minkowski_vertices(&a, &b));
    }

    #[test]
    fn newton_polytope_is_the_hull_of_exponents(exps in prop::collection::btree_set(prop::collection::vec(-3i64..4, 2), 1..8)) {
        let f = LaurentPolynomial::new(
            vec!["x".into(), "y".into()],
            exps.iter().map(|e| (LatticeVector::from_i64(e), ValuedCoefficient::new(Rat::zero(), Rat::one()))),
            FieldProfile::rational(),
        )
        .unwrap();
        let pts: Vec<QVector> = exps.iter().map(|e| QVector::from_i64(e)).collect();
        let mut v = f.newton_polytope().unwrap().vertices();
        v.sort();
        prop_assert_eq!(v, hull_vertices(&pts));
    }

    #[test]
    fn common_refinement_is_the_pairwise_meet(a in prop::collection::vec(-8i64..8, 1..5), b in prop::collection::vec(-8i64..8, 1..5)) {
        let (ca, cb) = (line_complex(a.clone()), line_complex(b.clone()));
        let c = ca.common_refinement(&cb).unwrap();
        let mut cells = c.cells().to_vec();
        cells.sort();
        prop_assert_eq!(cells, pairwise_intersections(&ca, &cb));
        prop_assert!(c.refines(&ca) && c.refines(&cb));
        let mut all = a.clone();
        all.extend(&b);
        prop_assert_eq!(&c, &line_complex(all));
    }

    #[test]
    fn refinement_is_a_partial_order(a in prop::collection::vec(-8i64..8, 1..5), b in prop::collection::vec(-8i64..8, 1..5)) {
        let ca = line_complex(a.clone());
        let cb = line_complex(b.clone());
        prop_assert!(ca.refines(&ca));
        if ca.refines(&cb) && cb.refines(&ca) {
            prop_assert_eq!(&ca, &cb);
        }
        let mut ab = a.clone();
        ab.extend(&b);
        let fine = line_complex(ab);
        prop_assert!(fine.refines(&ca));
        // transitivity through the intermediate refinement
        if ca.refines(&cb) {
            prop_assert!(fine.refines(&cb));
        }
        let coarsest = line_complex(vec![a[0]]);
        prop_assert_eq!(ca.refines(&coarsest), true);
    }
}
