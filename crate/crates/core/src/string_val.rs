//! String valuations on the full flag variety: reduced words of w₀, the
//! action of the lowering operators on ∧^k ℂⁿ, and the resulting weighting
//! matrices and weight vectors.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{KhlError, Result};
use crate::groebner::Deadline;
use crate::ideals::{flag_ideal, subsets, PlueckerUniverse};
use crate::orders::{GroupOrder, LinearForm, WeightingMatrix};
use crate::poly::Exponent;
use crate::rational::Rational;
use crate::toric::{khovanskii_check_full, standard_monomial_collisions, ToricVerdict};

/// A reduced expression s_{i₁}⋯s_{i_N} of the longest element of S_n.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ReducedWord {
    n: usize,
    letters: Vec<usize>,
}

impl ReducedWord {
    pub fn new(n: usize, letters: Vec<usize>) -> Result<Self> {
        if n < 2 {
            return Err(KhlError::Invalid(format!("n must be at least 2, got {}", n)));
        }
        let big_n = n * (n - 1) / 2;
        if letters.len() != big_n {
            return Err(KhlError::Invalid(format!(
                "a reduced word of w0 in S_{} has {} letters, got {}",
                n,
                big_n,
                letters.len()
            )));
        }
        if let Some(&bad) = letters.iter().find(|&&i| i < 1 || i >= n) {
            return Err(KhlError::Invalid(format!("letter {} out of range 1..{}", bad, n - 1)));
        }
        // one-line notation of the product, acting on positions
        let mut perm: Vec<usize> = (1..=n).collect();
        for &i in &letters {
            perm.swap(i - 1, i);
        }
        if perm.iter().enumerate().any(|(j, &p)| p != n - j) {
            return Err(KhlError::Invalid(format!("{:?} does not multiply to w0", letters)));
        }
        Ok(ReducedWord { n, letters })
    }

    /// Digits, e.g. "121321" for n = 4.
    pub fn parse(n: usize, s: &str) -> Result<Self> {
        let letters = s
            .chars()
            .filter(|c| !c.is_whitespace() && *c != ',')
            .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(|| KhlError::Parse(format!("bad letter {:?}", c))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, letters)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}

/// Every reduced word of w₀ in S_n, in lexicographic order of letters.
pub fn reduced_words(n: usize) -> Vec<ReducedWord> {
    fn go(n: usize, perm: &mut Vec<usize>, word: &mut Vec<usize>, out: &mut Vec<ReducedWord>) {
        if word.len() == n * (n - 1) / 2 {
            out.push(ReducedWord { n, letters: word.clone() });
            return;
        }
        for i in 1..n {
            if perm[i - 1] < perm[i] {
                perm.swap(i - 1, i);
                word.push(i);
                go(n, perm, word, out);
                word.pop();
                perm.swap(i - 1, i);
            }
        }
    }
    let mut out = Vec::new();
    if n >= 2 {
        go(n, &mut (1..=n).collect(), &mut Vec::new(), &mut out);
    }
    out
}

impl fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in &self.letters {
            write!(f, "{}", i)?;
        }
        Ok(())
    }
}

/// Element of ∧^k ℂⁿ in the basis of sorted wedges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WedgeVector {
    pub k: usize,
    components: BTreeMap<Vec<usize>, Rational>,
}

impl WedgeVector {
    pub fn zero(k: usize) -> Self {
        WedgeVector { k, components: BTreeMap::new() }
    }

    /// e_{j₁}∧…∧e_{j_k} with the indices in the given order.
    pub fn basis(indices: &[usize]) -> Self {
        let mut v = WedgeVector::zero(indices.len());
        v.add_term(indices.to_vec(), Rational::one());
        v
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn components(&self) -> &BTreeMap<Vec<usize>, Rational> {
        &self.components
    }

    /// The coefficient c when the vector is c·e_J, otherwise None.
    pub fn multiple_of(&self, j: &[usize]) -> Option<&Rational> {
        if self.components.len() != 1 {
            return None;
        }
        self.components.get(j)
    }

    fn add_term(&mut self, mut idx: Vec<usize>, c: Rational) {
        // bubble sort, counting transpositions
        let mut neg = false;
        for a in 0..idx.len() {
            for b in 0..idx.len() - 1 - a {
                if idx[b] == idx[b + 1] {
                    return;
                }
                if idx[b] > idx[b + 1] {
                    idx.swap(b, b + 1);
                    neg = !neg;
                }
            }
        }
        if idx.windows(2).any(|w| w[0] == w[1]) {
            return;
        }
        let c = if neg { -c } else { c };
        let sum = self.components.get(&idx).map_or(c.clone(), |x| x + &c);
        if sum.is_zero() {
            self.components.remove(&idx);
        } else {
            self.components.insert(idx, sum);
        }
    }
}

/// f_i acting by the Leibniz rule, with f_i e_i = e_{i+1}.
pub fn apply_f(i: usize, v: &WedgeVector) -> WedgeVector {
    let mut out = WedgeVector::zero(v.k);
    for (idx, c) in &v.components {
        for s in 0..idx.len() {
            if idx[s] == i {
                let mut t = idx.clone();
                t[s] = i + 1;
                out.add_term(t, c.clone());
            }
        }
    }
    out
}

/// c_i = min(i,k) − |J ∩ [i]| for i = 1..n−1.
pub fn root_counts(j: &[usize], k: usize, n: usize) -> Result<Vec<u32>> {
    if j.len() != k || j.iter().any(|&x| x < 1 || x > n) || j.windows(2).any(|w| w[0] >= w[1]) {
        return Err(KhlError::Invalid(format!("{:?} is not a sorted {}-subset of [{}]", j, k, n)));
    }
    Ok((1..n).map(|i| (i.min(k) - j.iter().filter(|&&x| x <= i).count()) as u32).collect())
}

/// f^m = f_{i₁}^{m₁}⋯f_{i_N}^{m_N} applied to e₁∧…∧e_k; the rightmost factor
/// acts first.
pub fn apply_string(word: &ReducedWord, m: &[u32], k: usize) -> WedgeVector {
    let start: Vec<usize> = (1..=k).collect();
    let mut v = WedgeVector::basis(&start);
    for (pos, &i) in word.letters.iter().enumerate().rev() {
        for _ in 0..m[pos] {
            v = apply_f(i, &v);
            if v.is_zero() {
                return v;
            }
        }
    }
    v
}

/// Every m whose f_i-count per letter equals the root count c_i.
pub fn candidate_strings(word: &ReducedWord, c: &[u32]) -> Vec<Vec<u32>> {
    let big_n = word.len();
    let mut out = vec![vec![0u32; big_n]];
    for (li, &ci) in c.iter().enumerate() {
        let positions: Vec<usize> = (0..big_n).filter(|&p| word.letters[p] == li + 1).collect();
        let dists = crate::groebner::compositions(ci, positions.len());
        let mut next = Vec::with_capacity(out.len() * dists.len());
        for base in &out {
            for d in &dists {
                let mut m = base.clone();
                for (p, &x) in positions.iter().zip(d) {
                    m[*p] = x;
                }
                next.push(m);
            }
        }
        out = next;
    }
    out
}

/// v_{w₀}(p̄_J): the ≺-minimal m with f^m(e_{[k]}) a nonzero multiple of e_J,
/// for the order of the string valuation.
pub fn string_valuation(word: &ReducedWord, j: &[usize]) -> Result<Vec<u32>> {
    string_valuation_in(word, j, &GroupOrder::SumThenRevlexAsDisplayed)
}

/// As [`string_valuation`], minimising with respect to `order`.
pub fn string_valuation_in(word: &ReducedWord, j: &[usize], order: &GroupOrder) -> Result<Vec<u32>> {
    let k = j.len();
    let c = root_counts(j, k, word.n)?;
    let admissible: Vec<Vec<i64>> = candidate_strings(word, &c)
        .into_iter()
        .filter(|m| apply_string(word, m, k).multiple_of(j).is_some())
        .map(|m| m.iter().map(|&x| x as i64).collect())
        .collect();
    order
        .min(admissible.iter())
        .map(|m| m.iter().map(|&x| x as u32).collect())
        .ok_or_else(|| KhlError::NoValue(format!("no admissible string for {:?} under {}", j, word)))
}

/// Columns v(p̄_J) over the flag universe, rows indexed by word positions.
pub fn string_matrix(word: &ReducedWord) -> Result<WeightingMatrix> {
    string_matrix_in(word, GroupOrder::SumThenRevlexAsDisplayed)
}

pub fn string_matrix_in(word: &ReducedWord, order: GroupOrder) -> Result<WeightingMatrix> {
    let pu = PlueckerUniverse::flag(word.n)?;
    let cols = pu
        .subsets()
        .iter()
        .map(|j| string_valuation_in(word, j, &order).map(|m| m.iter().map(|&x| x as i64).collect()))
        .collect::<Result<Vec<Vec<i64>>>>()?;
    WeightingMatrix::from_columns(&cols, order)
}

/// Block sizes C(n,1), …, C(n,n−1) of the flag universe.
pub fn flag_blocks(n: usize) -> Vec<usize> {
    (1..n).map(|k| subsets(n, k).len()).collect()
}

pub fn string_hat_matrix(word: &ReducedWord) -> Result<WeightingMatrix> {
    string_matrix(word)?.hat(&flag_blocks(word.n))
}

/// e with −e(m) = 2^{N−1}m₁ + … + m_N.
pub fn two_power_form(big_n: usize) -> LinearForm {
    LinearForm::new((0..big_n).map(|j| -(1i64 << (big_n - 1 - j))).collect())
}

/// w_{w₀} = (e(v(p̄_J)))_J in flag-universe order.
pub fn string_weight_vector(word: &ReducedWord) -> Result<Vec<i64>> {
    let m = string_matrix(word)?;
    let e = two_power_form(word.len());
    Ok(m.columns().iter().map(|c| e.eval(c)).collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct CollisionWitness {
    pub first: Exponent,
    pub second: Exponent,
    pub first_name: String,
    pub second_name: String,
    /// Matrix value with the degree rows removed.
    pub value: Vec<i64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MinkowskiVerdict {
    pub word: String,
    pub minkowski: bool,
    pub toric: ToricVerdict,
    pub witness: Option<CollisionWitness>,
}

/// Degrees searched for a collision: sums of two block units, then ρ.
fn witness_degrees(s: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for a in 0..s {
        for b in a..s {
            let mut d = vec![0u32; s];
            d[a] += 1;
            d[b] += 1;
            out.push(d);
        }
    }
    out.push(vec![1; s]);
    out
}

/// Minkowski property via the toric test of the initial ideal of I_n under
/// the hat matrix; a failing word comes with a standard-monomial collision.
pub fn minkowski_verdict(word: &ReducedWord, deadline: &Deadline) -> Result<MinkowskiVerdict> {
    let (pu, ideal) = flag_ideal(word.n)?;
    let mhat = string_hat_matrix(word)?;
    let (toric, init) = khovanskii_check_full(&ideal, &mhat, deadline)?;
    let s = pu.universe().num_blocks();
    let mut witness = None;
    if !toric.is_toric {
        for deg in witness_degrees(s) {
            deadline.check()?;
            if let Some((value, ms)) = standard_monomial_collisions(&init, &mhat, &deg).into_iter().next() {
                let u = pu.universe();
                let name = |e: &Exponent| crate::poly::Polynomial::monomial(u, e.clone(), Rational::one()).to_string();
                witness = Some(CollisionWitness {
                    first_name: name(&ms[0]),
                    second_name: name(&ms[1]),
                    first: ms[0].clone(),
                    second: ms[1].clone(),
                    value: value[s..].to_vec(),
                });
                break;
            }
        }
    }
    Ok(MinkowskiVerdict { word: word.to_string(), minkowski: toric.is_toric, toric, witness })
}
