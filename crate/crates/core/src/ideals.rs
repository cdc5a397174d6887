//! Plücker ideals of Grassmannians and the multihomogeneous ideal of the
//! complete flag variety.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use crate::error::{KhlError, Result};
use crate::poly::{Exponent, Ideal, Polynomial, VariableUniverse};
use crate::rational::Rational;

/// All `k`-subsets of `{1, …, n}` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..=n {
            if n - i + 1 < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(1, n, k, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

/// Name of the Plücker variable of a sorted index set.
pub fn pluecker_name(set: &[usize], n: usize) -> String {
    let sep = if n >= 10 { "," } else { "" };
    format!("p_{{{}}}", set.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(sep))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PlueckerKind {
    Grassmannian { k: usize },
    Flag,
}

/// Variables indexed by subsets of `[n]`, blocked by cardinality.
#[derive(Clone, Debug)]
pub struct PlueckerUniverse {
    pub n: usize,
    pub kind: PlueckerKind,
    subsets: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
    universe: Arc<VariableUniverse>,
}

impl PlueckerUniverse {
    pub fn grassmannian(k: usize, n: usize) -> Result<Self> {
        if k < 1 || k >= n {
            return Err(KhlError::Invalid(format!("need 1 <= k < n, got k={}, n={}", k, n)));
        }
        let subs = subsets(n, k);
        let sizes = vec![subs.len()];
        Self::build(n, PlueckerKind::Grassmannian { k }, subs, sizes)
    }

    pub fn flag(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(KhlError::Invalid(format!("flag universe needs n >= 2, got {}", n)));
        }
        let mut subs = Vec::new();
        let mut sizes = Vec::new();
        for k in 1..n {
            let s = subsets(n, k);
            sizes.push(s.len());
            subs.extend(s);
        }
        Self::build(n, PlueckerKind::Flag, subs, sizes)
    }

    fn build(n: usize, kind: PlueckerKind, subs: Vec<Vec<usize>>, sizes: Vec<usize>) -> Result<Self> {
        let names = subs.iter().map(|s| pluecker_name(s, n)).collect();
        let universe = VariableUniverse::new(names, sizes)?;
        let index = subs.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        Ok(PlueckerUniverse { n, kind, subsets: subs, index, universe })
    }

    pub fn universe(&self) -> &Arc<VariableUniverse> {
        &self.universe
    }

    pub fn subsets(&self) -> &[Vec<usize>] {
        &self.subsets
    }

    pub fn index_of(&self, set: &[usize]) -> Option<usize> {
        self.index.get(set).copied()
    }

    pub fn var(&self, set: &[usize]) -> Result<Polynomial> {
        let i = self
            .index_of(set)
            .ok_or_else(|| KhlError::Invalid(format!("{:?} is not a variable here", set)))?;
        Ok(Polynomial::var(&self.universe, i))
    }

    /// Monomial with the given multiset of index sets.
    pub fn monomial(&self, sets: &[&[usize]]) -> Result<Exponent> {
        let mut e = vec![0u32; self.universe.len()];
        for s in sets {
            let i = self
                .index_of(s)
                .ok_or_else(|| KhlError::Invalid(format!("{:?} is not a variable here", s)))?;
            e[i] += 1;
        }
        Ok(Exponent(e))
    }
}

fn sorted_set(v: &[usize]) -> Vec<usize> {
    let mut s = v.to_vec();
    s.sort_unstable();
    s.dedup();
    s
}

/// R_{K,L} = Σ_{j∈L} sgn(j;K,L) p_{K∪j} p_{L∖j}, with
/// sgn = (−1)^{#{l∈L : l>j} + #{k∈K : k>j}}; terms with j ∈ K are dropped.
pub fn pluecker_relation(pu: &PlueckerUniverse, k_set: &[usize], l_set: &[usize]) -> Result<Polynomial> {
    let n = pu.n;
    if k_set.iter().chain(l_set).any(|&i| i < 1 || i > n) {
        return Err(KhlError::Invalid(format!("index out of range 1..={}", n)));
    }
    let ks = sorted_set(k_set);
    let ls = sorted_set(l_set);
    if ks.len() != k_set.len() || ls.len() != l_set.len() {
        return Err(KhlError::Invalid("repeated index inside K or L".into()));
    }
    let u = pu.universe();
    let mut p = Polynomial::zero(u);
    for &j in &ls {
        if ks.contains(&j) {
            continue;
        }
        let mut a = ks.clone();
        a.push(j);
        a.sort_unstable();
        let b: Vec<usize> = ls.iter().copied().filter(|&x| x != j).collect();
        let e = pu.monomial(&[&a, &b])?;
        let exps = ls.iter().filter(|&&l| l > j).count() + ks.iter().filter(|&&k| k > j).count();
        let c = if exps % 2 == 0 { 1 } else { -1 };
        p = p.add(&Polynomial::monomial(u, e, Rational::from_int(c)))?;
    }
    Ok(p)
}

fn push_unique(gens: &mut Vec<Polynomial>, seen: &mut HashSet<String>, p: Polynomial) {
    if p.is_zero() {
        return;
    }
    let key = p.monic_lex().to_string();
    if seen.insert(key) {
        gens.push(p);
    }
}

/// The Plücker ideal I_{k,n}: all nonzero R_{K,L} with |K| = k−1, |L| = k+1,
/// de-duplicated up to sign.
pub fn grassmannian_ideal(k: usize, n: usize) -> Result<(PlueckerUniverse, Ideal)> {
    let pu = PlueckerUniverse::grassmannian(k, n)?;
    let mut gens = Vec::new();
    let mut seen = HashSet::new();
    for ks in subsets(n, k - 1) {
        for ls in subsets(n, k + 1) {
            push_unique(&mut gens, &mut seen, pluecker_relation(&pu, &ks, &ls)?);
        }
    }
    let id = Ideal::graded(pu.universe(), gens)?;
    Ok((pu, id))
}

/// The ideal I_n of the flag variety: all nonzero R_{K,L} with |K| = a−1,
/// |L| = b+1 and 1 ≤ a ≤ b ≤ n−1.
pub fn flag_ideal(n: usize) -> Result<(PlueckerUniverse, Ideal)> {
    if n < 3 {
        return Err(KhlError::Invalid(format!("flag ideal needs n >= 3, got {}", n)));
    }
    let pu = PlueckerUniverse::flag(n)?;
    let mut gens = Vec::new();
    let mut seen = HashSet::new();
    for a in 1..n {
        for b in a..n {
            for ks in subsets(n, a - 1) {
                for ls in subsets(n, b + 1) {
                    push_unique(&mut gens, &mut seen, pluecker_relation(&pu, &ks, &ls)?);
                }
            }
        }
    }
    let id = Ideal::graded(pu.universe(), gens)?;
    Ok((pu, id))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gr24_relation() {
        let pu = PlueckerUniverse::grassmannian(2, 4).unwrap();
        let r = pluecker_relation(&pu, &[1], &[2, 3, 4]).unwrap();
        let expect =
            Polynomial::parse(pu.universe(), "p_{12}*p_{34} - p_{13}*p_{24} + p_{14}*p_{23}").unwrap();
        assert_eq!(r, expect);
        // presenting L in another order gives the same relation
        assert_eq!(pluecker_relation(&pu, &[1], &[4, 2, 3]).unwrap(), expect);
    }

    #[test]
    fn repeated_index_dropped() {
        let pu = PlueckerUniverse::grassmannian(2, 4).unwrap();
        let r = pluecker_relation(&pu, &[1], &[1, 2, 3]).unwrap();
        // j = 1 drops; j = 2: one larger l, sign −; j = 3: sign +
        let expect = Polynomial::parse(pu.universe(), "-p_{12}*p_{13} + p_{13}*p_{12}").unwrap();
        assert_eq!(r, expect);
        assert!(r.is_zero());
    }

    #[test]
    fn flag_cancellation() {
        let pu = PlueckerUniverse::flag(3).unwrap();
        assert!(pluecker_relation(&pu, &[], &[1, 2]).unwrap().is_zero());
    }

    #[test]
    fn generator_counts() {
        assert_eq!(grassmannian_ideal(2, 4).unwrap().1.len(), 1);
        assert!(grassmannian_ideal(1, 4).unwrap().1.is_empty());
        let (pu, i3) = flag_ideal(3).unwrap();
        assert_eq!(i3.len(), 1);
        let g = &i3.generators()[0];
        let expect = Polynomial::parse(pu.universe(), "p_{1}*p_{23} - p_{2}*p_{13} + p_{3}*p_{12}").unwrap();
        assert!(*g == expect || *g == expect.neg());
        let (_, i4) = flag_ideal(4).unwrap();
        assert!(i4.generators().iter().all(|g| g.is_homogeneous()));
    }

    #[test]
    fn names() {
        assert_eq!(pluecker_name(&[1, 3], 5), "p_{13}");
        assert_eq!(pluecker_name(&[1, 10], 10), "p_{1,10}");
        assert_eq!(subsets(4, 2).len(), 6);
        assert_eq!(subsets(3, 0), vec![Vec::<usize>::new()]);
    }
}
