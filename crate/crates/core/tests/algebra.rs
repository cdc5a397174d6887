//! Invariants of the polynomial, order, Gröbner, ideal and toric layers.

use std::sync::Arc;

use khl_core::groebner::{
    buchberger, compositions, initial_ideal_m, initial_ideal_w, monomials_of_degree, quasi_valuation, Deadline,
    MonomialOrder,
};
use khl_core::ideals::{flag_ideal, grassmannian_ideal, pluecker_relation, subsets, PlueckerUniverse};
use khl_core::orders::{apply_form, caldero_form, initial_form_m, initial_form_w, GroupOrder, WeightingMatrix};
use khl_core::string_val::{reduced_words, string_hat_matrix, string_matrix, ReducedWord};
use khl_core::groebner::{ideal_equal, saturate_all_variables};
use khl_core::toric::{khovanskii_check_full, standard_monomial_collisions, toric_ideal, MonomialMap};
use khl_core::{Exponent, Ideal, Polynomial, Rational, VariableUniverse};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn two_blocks() -> Arc<VariableUniverse> {
    VariableUniverse::new(["a", "b", "c", "x", "y"].iter().map(|s| s.to_string()).collect(), vec![3, 2]).unwrap()
}

fn random_homogeneous(rng: &mut ChaCha8Rng, u: &Arc<VariableUniverse>, deg: &[u32], terms: usize) -> Polynomial {
    let monos = monomials_of_degree(u, deg);
    Polynomial::from_terms(
        u,
        (0..terms).map(|_| {
            let c = Rational::new(rng.gen_range(1..=7) * if rng.gen() { 1 } else { -1 }, rng.gen_range(1..=3));
            (monos[rng.gen_range(0..monos.len())].clone(), c)
        }),
    )
}

fn exps() -> impl Strategy<Value = Vec<(Vec<u32>, i64, i64)>> {
    prop::collection::vec((prop::collection::vec(0u32..3, 5), -9i64..=9, 1i64..=4), 1..5)
}

fn build(u: &Arc<VariableUniverse>, t: &[(Vec<u32>, i64, i64)]) -> Polynomial {
    Polynomial::from_terms(u, t.iter().map(|(e, a, b)| (Exponent(e.clone()), Rational::new(*a, *b))))
}

proptest! {
    #[test]
    fn render_parse_round_trip(t in exps()) {
        let u = two_blocks();
        let p = build(&u, &t);
        prop_assert_eq!(Polynomial::parse(&u, &p.to_string()).unwrap(), p.clone());
        prop_assert_eq!(Polynomial::from_json(&u, &p.to_json()).unwrap(), p);
    }

    #[test]
    fn initial_forms_are_idempotent(t in exps(), w in prop::collection::vec(-3i64..4, 5)) {
        let u = two_blocks();
        let p = build(&u, &t);
        prop_assume!(!p.is_zero());
        let i = initial_form_w(&p, &w).unwrap();
        prop_assert_eq!(initial_form_w(&i, &w).unwrap(), i);
        let m = WeightingMatrix::new(vec![w.clone(), vec![1, 0, 2, 0, 1]], GroupOrder::Lex).unwrap();
        let im = initial_form_m(&p, &m).unwrap();
        prop_assert_eq!(initial_form_m(&im, &m).unwrap(), im);
    }
}

#[test]
fn multidegrees_add_under_products() {
    let u = two_blocks();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..50 {
        let d1 = [rng.gen_range(0..3), rng.gen_range(0..3)];
        let d2 = [rng.gen_range(0..3), rng.gen_range(0..3)];
        let f = random_homogeneous(&mut rng, &u, &d1, 3);
        let g = random_homogeneous(&mut rng, &u, &d2, 3);
        if f.is_zero() || g.is_zero() {
            continue;
        }
        let sum: Vec<u32> = d1.iter().zip(&d2).map(|(a, b)| a + b).collect();
        assert_eq!(f.multidegree().unwrap(), d1.to_vec());
        assert_eq!(f.mul(&g).unwrap().multidegree().unwrap(), sum);
    }
}

#[test]
fn matrix_initial_forms_are_multiplicative_on_homogeneous_samples() {
    let u = two_blocks();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let m = WeightingMatrix::new(vec![vec![0, 1, 2, 1, 0], vec![3, 0, 1, 0, 2]], GroupOrder::Lex).unwrap();
    for _ in 0..100 {
        let f = random_homogeneous(&mut rng, &u, &[1, 1], 4);
        let g = random_homogeneous(&mut rng, &u, &[2, 0], 4);
        if f.is_zero() || g.is_zero() {
            continue;
        }
        let lhs = initial_form_m(&f.mul(&g).unwrap(), &m).unwrap();
        let rhs = initial_form_m(&f, &m).unwrap().mul(&initial_form_m(&g, &m).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }
}

// init_M(f) = init_{e(M)}(f) for e from caldero_form on the values of f's support.
#[test]
fn caldero_forms_reproduce_matrix_initial_forms() {
    let word = ReducedWord::parse(4, "121321").unwrap();
    let m = string_hat_matrix(&word).unwrap();
    let (_, ideal) = flag_ideal(4).unwrap();
    let gb = buchberger(&ideal, &MonomialOrder::for_matrix(&m)).unwrap();
    let mut checked = 0;
    for g in gb.elements() {
        let pts: Vec<Vec<i64>> = g.terms().map(|(e, _)| m.apply(&e.0)).collect();
        for variant in 0..2 {
            let e = caldero_form(&pts, &m.order, variant).unwrap();
            let w = apply_form(&m, &e);
            assert_eq!(initial_form_m(&g, &m).unwrap(), initial_form_w(&g, &w).unwrap());
            checked += 1;
        }
    }
    assert!(checked >= 2 * ideal.len());
}

#[test]
fn initial_ideal_is_compatible_with_the_refining_order() {
    let (_, gr) = grassmannian_ideal(2, 5).unwrap();
    let (_, fl) = flag_ideal(4).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for ideal in [gr, fl] {
        for _ in 0..4 {
            let w: Vec<i64> = (0..ideal.universe().len()).map(|_| rng.gen_range(-3..4)).collect();
            let init = initial_ideal_w(&ideal, &w, &Deadline::none()).unwrap();
            let order = MonomialOrder::for_weight(&w);
            for g in init.source.elements() {
                let iw = initial_form_w(&g, &w).unwrap();
                assert_eq!(init.source.leading_exponent(&g), init.basis.leading_exponent(&iw));
                assert_eq!(buchberger(&Ideal::new(g.universe(), vec![iw]).unwrap(), &order).unwrap().leading_exponents()[0],
                    init.source.leading_exponent(&g).unwrap());
            }
        }
    }
}

fn pluecker_products(pu: &PlueckerUniverse, rng: &mut ChaCha8Rng, deg: &[usize]) -> Polynomial {
    let u = pu.universe();
    let mut p = Polynomial::zero(u);
    for _ in 0..3 {
        let mut e = Exponent::zero(u.len());
        for (k, &d) in deg.iter().enumerate() {
            let subs = subsets(4, k + 1);
            for _ in 0..d {
                let j = &subs[rng.gen_range(0..subs.len())];
                e.0[pu.index_of(j).unwrap()] += 1;
            }
        }
        p = p.add(&Polynomial::monomial(u, e, Rational::from_int(rng.gen_range(1..5)))).unwrap();
    }
    p
}

#[test]
fn quasi_valuation_is_superadditive_and_homogeneous() {
    let (pu, ideal) = flag_ideal(4).unwrap();
    let word = ReducedWord::parse(4, "132132").unwrap();
    let m = string_matrix(&word).unwrap();
    let gb = buchberger(&ideal, &MonomialOrder::for_matrix(&m)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let degs = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 0], [0, 1, 1]];
    let mut checked = 0;
    for _ in 0..40 {
        let (df, dg) = (degs[rng.gen_range(0..5)], degs[rng.gen_range(0..5)]);
        let f = pluecker_products(&pu, &mut rng, &df);
        let g = pluecker_products(&pu, &mut rng, &dg);
        let (Ok(vf), Ok(vg)) = (quasi_valuation(&f, &m, &gb), quasi_valuation(&g, &m, &gb)) else { continue };
        let vfg = quasi_valuation(&f.mul(&g).unwrap(), &m, &gb).unwrap();
        let sum: Vec<i64> = vf.iter().zip(&vg).map(|(a, b)| a + b).collect();
        assert!(m.order.compare(&vfg, &sum).is_ge());
        // homogeneity: v(f + g) is the minimum over components when degrees differ
        if f.multidegree().unwrap() != g.multidegree().unwrap() {
            let vs = quasi_valuation(&f.add(&g).unwrap(), &m, &gb).unwrap();
            assert_eq!(&vs, m.order.min([&vf, &vg]).unwrap());
        }
        checked += 1;
    }
    assert!(checked > 30);
}

#[test]
fn pluecker_relations_are_bihomogeneous_quadrics() {
    for (pu, ideal) in [grassmannian_ideal(2, 5).unwrap(), grassmannian_ideal(3, 6).unwrap(), flag_ideal(4).unwrap()] {
        for g in ideal.generators() {
            assert!(g.is_homogeneous());
            assert_eq!(g.total_degree(), Some(2));
            assert_eq!(g.multidegree().unwrap().iter().sum::<u32>(), 2);
        }
        assert!(!pu.subsets().is_empty());
    }
}

#[test]
fn grassmannian_relations_live_in_the_flag_ideal() {
    let (fpu, fl) = flag_ideal(4).unwrap();
    let fgb = buchberger(&fl, &MonomialOrder::degrevlex()).unwrap();
    let (gpu, gr) = grassmannian_ideal(2, 4).unwrap();
    let map: Vec<usize> = gpu.subsets().iter().map(|j| fpu.index_of(j).unwrap()).collect();
    for g in gr.generators() {
        assert!(fgb.contains(&g.embed(fpu.universe(), &map)).unwrap());
    }
}

#[test]
fn relations_do_not_depend_on_presentation_order() {
    let pu = PlueckerUniverse::grassmannian(3, 6).unwrap();
    let a = pluecker_relation(&pu, &[1, 2], &[3, 4, 5, 6]).unwrap();
    let b = pluecker_relation(&pu, &[2, 1], &[6, 4, 3, 5]).unwrap();
    assert!(a == b || a == b.neg());
    assert!(!a.is_zero());
}

#[test]
fn toric_verdicts_are_coherent_and_contain_initial_ideals() {
    let (_, ideal) = flag_ideal(4).unwrap();
    let d = Deadline::none();
    let mut toric = 0;
    for w in reduced_words(4) {
        let m = string_hat_matrix(&w).unwrap();
        let (v, init) = khovanskii_check_full(&ideal, &m, &d).unwrap();
        assert!(v.certificate.initial_in_toric, "{}", w);
        assert!(!v.is_toric || (v.is_binomial && v.is_monomial_free));
        if v.is_toric {
            toric += 1;
            // injective on standard monomials up to total degree 3
            for total in 1..=3 {
                for deg in compositions(total, 3) {
                    assert!(standard_monomial_collisions(&init, &m, &deg).is_empty(), "{} {:?}", w, deg);
                }
            }
        }
    }
    assert!(toric > 0 && toric < 16);
}

#[test]
fn toric_ideals_are_saturated() {
    let u = VariableUniverse::numbered("x", 5);
    let phi = MonomialMap::new(vec![vec![1, 1, 1, 1, 1], vec![0, 1, 2, 3, 4], vec![0, 0, 1, 3, 4]]);
    let t = toric_ideal(&u, &phi, &Deadline::none()).unwrap();
    assert!(!t.is_empty());
    let again = saturate_all_variables(&t, &Deadline::none()).unwrap();
    assert!(ideal_equal(&t, &again).unwrap());
}

#[test]
fn matrix_initial_ideal_refines_to_the_same_leading_terms() {
    let (_, ideal) = flag_ideal(4).unwrap();
    let m = string_hat_matrix(&ReducedWord::parse(4, "213231").unwrap()).unwrap();
    let init = initial_ideal_m(&ideal, &m, &Deadline::none()).unwrap();
    let mut a = init.source.leading_exponents();
    let mut b = init.basis.leading_exponents();
    a.sort();
    b.sort();
    assert_eq!(a, b);
}
