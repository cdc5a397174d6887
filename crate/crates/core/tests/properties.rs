//! Property tests over random inputs.

use std::sync::Arc;

use khl_core::groebner::{buchberger, ideal_equal, MonomialOrder};
use khl_core::orders::{initial_form_w, GroupOrder};
use khl_core::polytope::{minkowski_sum, Polytope};
use khl_core::{Exponent, Ideal, Polynomial, Rational, VariableUniverse};
use proptest::prelude::*;

const NVARS: usize = 3;

fn universe() -> Arc<VariableUniverse> {
    VariableUniverse::numbered("x", NVARS)
}

fn rational() -> impl Strategy<Value = Rational> {
    (-12i64..=12, 1i64..=6).prop_map(|(a, b)| Rational::new(a, b))
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    rational().prop_filter("nonzero", |r| !r.is_zero())
}

fn terms(max_deg: u32, max_terms: usize) -> impl Strategy<Value = Vec<(Vec<u32>, Rational)>> {
    prop::collection::vec((prop::collection::vec(0..=max_deg, NVARS), nonzero_rational()), 1..=max_terms)
}

fn poly(t: &[(Vec<u32>, Rational)]) -> Polynomial {
    Polynomial::from_terms(&universe(), t.iter().map(|(e, c)| (Exponent(e.clone()), c.clone())))
}

// Homogeneous of the given degree: exponents are projected onto the simplex.
fn homogeneous(t: &[(Vec<u32>, Rational)], d: u32) -> Polynomial {
    Polynomial::from_terms(
        &universe(),
        t.iter().map(|(e, c)| {
            let a = e[0] % (d + 1);
            let b = e[1] % (d - a + 1);
            (Exponent(vec![a, b, d - a - b]), c.clone())
        }),
    )
}

proptest! {
    #[test]
    fn rational_field_axioms(a in rational(), b in rational(), c in nonzero_rational()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a / &c) * &c, a.clone());
        prop_assert_eq!(&a - &a, Rational::zero());
        prop_assert_eq!(a < b, (&b - &a).signum() > 0);
    }

    #[test]
    fn polynomial_ring_axioms(f in terms(2, 4), g in terms(2, 4), h in terms(2, 4)) {
        let (f, g, h) = (poly(&f), poly(&g), poly(&h));
        prop_assert_eq!(f.add(&g).unwrap(), g.add(&f).unwrap());
        prop_assert_eq!(f.mul(&g).unwrap(), g.mul(&f).unwrap());
        prop_assert_eq!(f.mul(&g).unwrap().mul(&h).unwrap(), f.mul(&g.mul(&h).unwrap()).unwrap());
        prop_assert_eq!(
            f.mul(&g.add(&h).unwrap()).unwrap(),
            f.mul(&g).unwrap().add(&f.mul(&h).unwrap()).unwrap()
        );
        prop_assert!(f.sub(&f).unwrap().is_zero());
        prop_assert_eq!(f.mul(&Polynomial::one(&universe())).unwrap(), f.clone());
        prop_assert!(f.mul(&g).unwrap().num_terms() <= f.num_terms() * g.num_terms());
    }

    #[test]
    fn homogeneous_products_add_degrees(f in terms(3, 4), g in terms(3, 4), d in 1u32..4, e in 1u32..4) {
        let (f, g) = (homogeneous(&f, d), homogeneous(&g, e));
        prop_assume!(!f.is_zero() && !g.is_zero());
        let fg = f.mul(&g).unwrap();
        prop_assert!(fg.is_homogeneous());
        prop_assert_eq!(fg.total_degree(), Some((d + e) as u64));
    }

    #[test]
    fn group_orders_are_total_and_translation_invariant(
        m in prop::collection::vec(-5i64..6, 4),
        n in prop::collection::vec(-5i64..6, 4),
        p in prop::collection::vec(-5i64..6, 4),
    ) {
        for order in [GroupOrder::Lex, GroupOrder::SumThenRevlexAsDisplayed] {
            let mn = order.compare(&m, &n);
            prop_assert_eq!(mn, order.compare(&n, &m).reverse());
            prop_assert_eq!(mn.is_eq(), m == n);
            let shift = |x: &[i64]| x.iter().zip(&p).map(|(a, b)| a + b).collect::<Vec<_>>();
            prop_assert_eq!(order.compare(&shift(&m), &shift(&n)), mn);
            let np = order.compare(&n, &p);
            if mn.is_lt() && np.is_lt() {
                prop_assert!(order.compare(&m, &p).is_lt());
            }
        }
    }

    #[test]
    fn weight_orders_are_monomial_orders(
        w in prop::collection::vec(-3i64..4, NVARS),
        a in prop::collection::vec(0u32..4, NVARS),
        b in prop::collection::vec(0u32..4, NVARS),
        c in prop::collection::vec(0u32..4, NVARS),
    ) {
        let o = MonomialOrder::for_weight(&w);
        let (a, b, c) = (Exponent(a), Exponent(b), Exponent(c));
        let ab = o.compare(&a, &b);
        prop_assert_eq!(ab.is_eq(), a == b);
        prop_assert_eq!(o.compare(&a.add(&c), &b.add(&c)), ab);
    }

    #[test]
    fn initial_forms_are_multiplicative(w in prop::collection::vec(-3i64..4, NVARS), f in terms(2, 4), g in terms(2, 4)) {
        let (f, g) = (poly(&f), poly(&g));
        let lhs = initial_form_w(&f.mul(&g).unwrap(), &w).unwrap();
        let rhs = initial_form_w(&f, &w).unwrap().mul(&initial_form_w(&g, &w).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn polytopes_validate_and_sum(
        a in prop::collection::vec(prop::collection::vec(-3i64..4, 3), 1..8),
        b in prop::collection::vec(prop::collection::vec(-3i64..4, 3), 1..6),
    ) {
        let p = Polytope::from_integer_points(&a).unwrap();
        let q = Polytope::from_integer_points(&b).unwrap();
        prop_assert!(p.cross_validate());
        prop_assert!(a.iter().all(|x| p.contains_integer(x)));
        let ints: Vec<Vec<Rational>> = a.iter().map(|x| x.iter().map(|&v| Rational::from_int(v)).collect()).collect();
        prop_assert!(p.vertices().iter().all(|v| ints.contains(v)));
        let pq = minkowski_sum(&p, &q).unwrap();
        let qp = minkowski_sum(&q, &p).unwrap();
        prop_assert!(pq.same_set(&qp));
        prop_assert!(pq.cross_validate());
        for x in &a {
            for y in &b {
                let s: Vec<i64> = x.iter().zip(y).map(|(u, v)| u + v).collect();
                prop_assert!(pq.contains_integer(&s));
            }
        }
        prop_assert!(pq.dim() >= p.dim().max(q.dim()));
    }

    #[test]
    fn minkowski_sums_associate_and_contain_lattice_sums(
        a in prop::collection::vec(prop::collection::vec(-2i64..3, 3), 1..5),
        b in prop::collection::vec(prop::collection::vec(-2i64..3, 3), 1..5),
        c in prop::collection::vec(prop::collection::vec(-2i64..3, 3), 1..4),
    ) {
        let (p, q, r) = (
            Polytope::from_integer_points(&a).unwrap(),
            Polytope::from_integer_points(&b).unwrap(),
            Polytope::from_integer_points(&c).unwrap(),
        );
        let left = minkowski_sum(&minkowski_sum(&p, &q).unwrap(), &r).unwrap();
        let right = minkowski_sum(&p, &minkowski_sum(&q, &r).unwrap()).unwrap();
        prop_assert!(left.same_set(&right));
        let pq = minkowski_sum(&p, &q).unwrap();
        for x in p.lattice_points() {
            for y in q.lattice_points() {
                let s: Vec<i64> = x.iter().zip(&y).map(|(u, v)| u + v).collect();
                prop_assert!(pq.contains_integer(&s));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn buchberger_bases_verify(gens in prop::collection::vec(terms(2, 3), 1..4), rev in any::<bool>()) {
        let u = universe();
        let mut polys: Vec<Polynomial> = gens.iter().map(|t| poly(t)).collect();
        let ideal = Ideal::new(&u, polys.clone()).unwrap();
        for order in [MonomialOrder::lex(), MonomialOrder::degrevlex()] {
            let gb = buchberger(&ideal, &order).unwrap();
            prop_assert!(gb.verify());
            for g in ideal.generators() {
                prop_assert!(gb.contains(g).unwrap());
            }
            prop_assert!(ideal_equal(&gb.to_ideal(), &ideal).unwrap());
        }
        if rev {
            polys.reverse();
        }
        let other = Ideal::new(&u, polys).unwrap();
        prop_assert!(ideal_equal(&ideal, &other).unwrap());
        let a = buchberger(&ideal, &MonomialOrder::degrevlex()).unwrap().elements();
        let b = buchberger(&other, &MonomialOrder::degrevlex()).unwrap().elements();
        prop_assert_eq!(a, b);
    }
}
