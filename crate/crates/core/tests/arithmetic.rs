use adictrop::exactnum::{pairing, LatticeVector, QVector, Rat, ValueGroup};
use adictrop::valpoly::{parse_poly_with_vars, FieldProfile, LaurentPolynomial, ResidueField, ValuedCoefficient};
use proptest::prelude::*;

fn rat() -> impl Strategy<Value = Rat> {
    (-50i64..50, 1i64..12).prop_map(|(p, q)| Rat::new(p, q))
}

fn lattice(n: usize) -> impl Strategy<Value = LatticeVector> {
    prop::collection::vec(-6i64..6, n).prop_map(|c| LatticeVector::from_i64(&c))
}

fn qvec(n: usize) -> impl Strategy<Value = QVector> {
    prop::collection::vec(rat(), n).prop_map(QVector::new)
}

proptest! {
    #[test]
    fn rationals_print_and_parse_back(r in rat()) {
        let s = r.to_string();
        prop_assert_eq!(s.parse::<Rat>().unwrap(), r.clone());
        let j = serde_json::to_string(&r).unwrap();
        prop_assert_eq!(serde_json::from_str::<Rat>(&j).unwrap(), r);
    }

    #[test]
    fn pairing_is_bilinear(u in lattice(3), w in lattice(3), v in qvec(3), x in qvec(3), a in rat()) {
        let uw = pairing(&u.add(&w), &v).unwrap();
        prop_assert_eq!(uw, pairing(&u, &v).unwrap() + pairing(&w, &v).unwrap());
        let vx = pairing(&u, &v.add(&x.scale(&a))).unwrap();
        prop_assert_eq!(vx, pairing(&u, &v).unwrap() + a * pairing(&u, &x).unwrap());
    }

    #[test]
    fn value_group_membership(p in -40i64..40, q in 1i64..10, d in 1u64..10) {
        let r = Rat::new(p, q);
        let g = ValueGroup::new(d).unwrap();
        prop_assert_eq!(g.contains(&r), (&r * Rat::from_int(d)).is_integer());
        prop_assert!(g.enlarged_by([&r]).contains(&r));
    }

    #[test]
    fn polynomials_print_and_parse_back(
        terms in prop::collection::btree_map(
            prop::collection::vec(-3i64..4, 2),
            (0i64..7, prop::sample::select(vec![-3i64, -2, -1, 1, 2, 3])),
            1..7,
        ),
        d in 1u64..4,
        prime in any::<bool>(),
    ) {
        let profile = if prime {
            FieldProfile { residue: ResidueField::prime(5).unwrap(), ..FieldProfile::rational() }
        } else {
            FieldProfile::rational()
        }
        .with_gamma(ValueGroup::new(d).unwrap());
        let vars = vec!["x".to_string(), "y".to_string()];
        let f = LaurentPolynomial::new(
            vars.clone(),
            terms.into_iter().map(|(e, (val, res))| {
                (LatticeVector::from_i64(&e), ValuedCoefficient::new(Rat::new(val, d as i64), Rat::from_int(res)))
            }),
            profile.clone(),
        )
        .unwrap();
        let g = parse_poly_with_vars(&f.to_string(), &vars, &profile).unwrap();
        prop_assert_eq!(&g, &f);
        let back = LaurentPolynomial::from_json(&f.to_json(), &profile).unwrap();
        prop_assert_eq!(back, f);
    }
}
