//! Independent oracles for computed values.

use khl_core::groebner::{buchberger, MonomialOrder};
use khl_core::ideals::{flag_ideal, grassmannian_ideal, subsets};
use khl_core::polytope::Polytope;
use khl_core::string_val::{reduced_words, string_valuation, ReducedWord};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// Crystal raising operator on the minuscule crystal of ∧^k: e_i moves i+1 to i.
fn raise(i: usize, j: &mut [usize]) -> bool {
    if j.contains(&(i + 1)) && !j.contains(&i) {
        let p = j.iter().position(|&x| x == i + 1).unwrap();
        j[p] = i;
        j.sort();
        true
    } else {
        false
    }
}

// String parametrization: for each letter from the left, raise as far as possible.
fn greedy_string(word: &ReducedWord, j: &[usize]) -> Vec<u32> {
    let mut cur = j.to_vec();
    let out = word
        .letters()
        .iter()
        .map(|&i| {
            let mut a = 0;
            while raise(i, &mut cur) {
                a += 1;
            }
            a
        })
        .collect();
    assert_eq!(cur, (1..=j.len()).collect::<Vec<_>>(), "string of {:?} does not reach the highest weight", j);
    out
}

#[test]
fn string_valuation_matches_crystal_strings() {
    let mut words: Vec<ReducedWord> = reduced_words(3);
    words.extend(reduced_words(4));
    words.extend(reduced_words(5).into_iter().step_by(37));
    let mut checked = 0;
    for w in &words {
        let n = w.n();
        for k in 1..n {
            for j in subsets(n, k) {
                assert_eq!(string_valuation(w, &j).unwrap(), greedy_string(w, &j), "{} {:?}", w, j);
                checked += 1;
            }
        }
    }
    assert!(checked > 16 * 14);
}

fn ratio_product(pairs: impl Iterator<Item = (i64, i64)>) -> u64 {
    let (mut num, mut den) = (1i128, 1i128);
    for (a, b) in pairs {
        num *= a as i128;
        den *= b as i128;
    }
    assert_eq!(num % den, 0);
    (num / den) as u64
}

// Weyl's formula for GL_n with highest weight λ.
fn weyl_dim(lambda: &[i64]) -> u64 {
    let n = lambda.len();
    ratio_product((0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| {
        (lambda[i] - lambda[j] + (j - i) as i64, (j - i) as i64)
    }))
}

#[test]
fn flag_standard_monomials_match_weyl_dimension() {
    let (_, ideal) = flag_ideal(4).unwrap();
    let gb = buchberger(&ideal, &MonomialOrder::degrevlex()).unwrap();
    for deg in [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1], [2, 1, 0], [0, 2, 1], [1, 1, 2]] {
        let (a, b, c) = (deg[0] as i64, deg[1] as i64, deg[2] as i64);
        let lambda = [a + b + c, b + c, c, 0];
        assert_eq!(gb.standard_monomials(&deg).len() as u64, weyl_dim(&lambda), "degree {:?}", deg);
    }
    assert_eq!(weyl_dim(&[3, 2, 1, 0]), 64);
}

// Hook-content count of semistandard tableaux of shape (d, d) with entries ≤ n.
fn hook_content_two_rows(d: usize, n: i64) -> u64 {
    let cells = (0..2).flat_map(|r| (0..d).map(move |c| (r, c)));
    ratio_product(cells.map(|(r, c)| {
        let content = c as i64 - r as i64;
        let hook = (d - c - 1) as i64 + (1 - r) as i64 + 1;
        (n + content, hook)
    }))
}

#[test]
fn grassmannian_hilbert_function_matches_hook_content() {
    let (_, ideal) = grassmannian_ideal(2, 5).unwrap();
    let gb = buchberger(&ideal, &MonomialOrder::lex()).unwrap();
    let expected = [10, 50, 175];
    for d in 1..=3 {
        let count = gb.standard_monomials(&[d as u32]).len() as u64;
        assert_eq!(count, hook_content_two_rows(d, 5));
        assert_eq!(count, expected[d - 1]);
    }
}

fn cross(o: (i64, i64), a: (i64, i64), b: (i64, i64)) -> i64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

// Andrew's monotone chain, collinear points dropped.
fn monotone_chain(pts: &[(i64, i64)]) -> Vec<(i64, i64)> {
    let mut p = pts.to_vec();
    p.sort();
    p.dedup();
    if p.len() < 3 {
        return p;
    }
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for pass in 0..2 {
        let start = hull.len();
        for &q in p.iter() {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], q) <= 0 {
                hull.pop();
            }
            hull.push(q);
        }
        hull.pop();
        if pass == 0 {
            p.reverse();
        }
    }
    hull
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

// Pick: area = I + B/2 − 1, so I + B = (2·area + B + 2) / 2.
fn pick_count(hull: &[(i64, i64)]) -> i64 {
    let m = hull.len();
    let mut area2 = 0;
    let mut boundary = 0;
    for i in 0..m {
        let (a, b) = (hull[i], hull[(i + 1) % m]);
        area2 += a.0 * b.1 - a.1 * b.0;
        boundary += gcd(b.0 - a.0, b.1 - a.1);
    }
    (area2.abs() + boundary + 2) / 2
}

#[test]
fn planar_hulls_match_monotone_chain_and_pick() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut full = 0;
    for _ in 0..60 {
        let pts: Vec<(i64, i64)> = (0..rng.gen_range(3..9)).map(|_| (rng.gen_range(-4..5), rng.gen_range(-4..5))).collect();
        let chain = monotone_chain(&pts);
        let poly = Polytope::from_integer_points(&pts.iter().map(|&(x, y)| vec![x, y]).collect::<Vec<_>>()).unwrap();
        if chain.len() < 3 || cross(chain[0], chain[1], chain[2]) == 0 {
            assert!(poly.dim() < 2);
            continue;
        }
        full += 1;
        let mut verts: Vec<(i64, i64)> =
            poly.vertices().iter().map(|v| (v[0].to_i64().unwrap(), v[1].to_i64().unwrap())).collect();
        verts.sort();
        let mut expect = chain.clone();
        expect.sort();
        assert_eq!(verts, expect);
        assert_eq!(poly.facets().len(), chain.len());
        assert_eq!(poly.lattice_points().len() as i64, pick_count(&chain));
    }
    assert!(full > 40);
}
