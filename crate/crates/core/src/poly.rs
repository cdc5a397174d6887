//! Sparse multivariate polynomials with exact rational coefficients over a
//! named, block-graded set of variables.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{KhlError, Result};
use crate::rational::Rational;

/// Named variables partitioned into consecutive grading blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VariableUniverse {
    names: Vec<String>,
    block_sizes: Vec<usize>,
    block_of: Vec<usize>,
    index: HashMap<String, usize>,
}

impl VariableUniverse {
    pub fn new(names: Vec<String>, block_sizes: Vec<usize>) -> Result<Arc<Self>> {
        if block_sizes.is_empty() {
            return Err(KhlError::Invalid("at least one grading block is required".into()));
        }
        if block_sizes.iter().sum::<usize>() != names.len() {
            return Err(KhlError::Invalid(format!(
                "block sizes {:?} do not add up to {} variables",
                block_sizes,
                names.len()
            )));
        }
        let mut index = HashMap::with_capacity(names.len());
        for (i, n) in names.iter().enumerate() {
            if index.insert(n.clone(), i).is_some() {
                return Err(KhlError::Invalid(format!("duplicate variable name {}", n)));
            }
        }
        let mut block_of = Vec::with_capacity(names.len());
        for (b, &sz) in block_sizes.iter().enumerate() {
            block_of.extend(std::iter::repeat_n(b, sz));
        }
        Ok(Arc::new(VariableUniverse { names, block_sizes, block_of, index }))
    }

    /// One block holding every variable.
    pub fn single_block(names: Vec<String>) -> Result<Arc<Self>> {
        let n = names.len();
        Self::new(names, vec![n])
    }

    /// Variables `x1, …, xn` in a single block.
    pub fn numbered(prefix: &str, n: usize) -> Arc<Self> {
        Self::single_block((1..=n).map(|i| format!("{}{}", prefix, i)).collect()).unwrap()
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn block_sizes(&self) -> &[usize] {
        &self.block_sizes
    }

    pub fn num_blocks(&self) -> usize {
        self.block_sizes.len()
    }

    pub fn block_of(&self, var: usize) -> usize {
        self.block_of[var]
    }

    /// The universe with one extra variable appended in a new block of its own.
    pub fn with_extra(&self, name: &str) -> Result<Arc<Self>> {
        let mut names = self.names.clone();
        names.push(name.to_string());
        let mut blocks = self.block_sizes.clone();
        blocks.push(1);
        Self::new(names, blocks)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Exponent(pub Vec<u32>);

impl Exponent {
    pub fn zero(n: usize) -> Self {
        Exponent(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Exponent(e)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&a| a as u64).sum()
    }

    pub fn add(&self, other: &Exponent) -> Exponent {
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Exponent) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn sub(&self, other: &Exponent) -> Option<Exponent> {
        if !other.divides(self) {
            return None;
        }
        Some(Exponent(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()))
    }

    pub fn lcm(&self, other: &Exponent) -> Exponent {
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn is_coprime(&self, other: &Exponent) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    pub fn dot(&self, w: &[i64]) -> i64 {
        self.0.iter().zip(w).map(|(&a, &b)| a as i64 * b).sum()
    }
}

pub type MultiDegree = Vec<u32>;

/// Sparse polynomial; terms are keyed by exponent in lexicographic order and
/// zero coefficients are never stored.
#[derive(Clone, Debug)]
pub struct Polynomial {
    universe: Arc<VariableUniverse>,
    terms: BTreeMap<Exponent, Rational>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        same_universe(&self.universe, &other.universe) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

pub fn same_universe(a: &Arc<VariableUniverse>, b: &Arc<VariableUniverse>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl Polynomial {
    pub fn zero(universe: &Arc<VariableUniverse>) -> Self {
        Polynomial { universe: universe.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(universe: &Arc<VariableUniverse>, c: Rational) -> Self {
        Self::monomial(universe, Exponent::zero(universe.len()), c)
    }

    pub fn one(universe: &Arc<VariableUniverse>) -> Self {
        Self::constant(universe, Rational::one())
    }

    pub fn var(universe: &Arc<VariableUniverse>, i: usize) -> Self {
        Self::monomial(universe, Exponent::unit(universe.len(), i), Rational::one())
    }

    pub fn monomial(universe: &Arc<VariableUniverse>, e: Exponent, c: Rational) -> Self {
        assert_eq!(e.len(), universe.len(), "exponent length");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        Polynomial { universe: universe.clone(), terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Exponent, Rational)>>(
        universe: &Arc<VariableUniverse>,
        terms: I,
    ) -> Self {
        let mut p = Polynomial::zero(universe);
        for (e, c) in terms {
            assert_eq!(e.len(), universe.len(), "exponent length");
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Exponent, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn universe(&self) -> &Arc<VariableUniverse> {
        &self.universe
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &Exponent) -> Rational {
        self.terms.get(e).cloned().unwrap_or_default()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    fn check(&self, other: &Polynomial) -> Result<()> {
        if same_universe(&self.universe, &other.universe) {
            Ok(())
        } else {
            Err(KhlError::UniverseMismatch)
        }
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check(other)?;
        let mut r = self.clone();
        for (e, c) in &other.terms {
            r.add_term(e.clone(), c.clone());
        }
        Ok(r)
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Polynomial {
        self.scale(&Rational::from_int(-1))
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.universe);
        }
        Polynomial {
            universe: self.universe.clone(),
            terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check(other)?;
        let mut r = Polynomial::zero(&self.universe);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                r.add_term(e1.add(e2), c1 * c2);
            }
        }
        Ok(r)
    }

    pub fn mul_monomial(&self, e: &Exponent, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.universe);
        }
        Polynomial {
            universe: self.universe.clone(),
            terms: self.terms.iter().map(|(f, a)| (f.add(e), a * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut r = Polynomial::one(&self.universe);
        for _ in 0..k {
            r = r.mul(self).unwrap();
        }
        r
    }

    /// Block degree of a single exponent.
    pub fn degree_of(universe: &VariableUniverse, e: &Exponent) -> MultiDegree {
        let mut d = vec![0u32; universe.num_blocks()];
        for (i, &a) in e.0.iter().enumerate() {
            d[universe.block_of(i)] += a;
        }
        d
    }

    /// Lexicographically largest block degree among the terms.
    pub fn multidegree(&self) -> Result<MultiDegree> {
        self.terms
            .keys()
            .map(|e| Self::degree_of(&self.universe, e))
            .max()
            .ok_or(KhlError::ZeroPolynomial)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(|e| Self::degree_of(&self.universe, e));
        match it.next() {
            None => true,
            Some(d) => it.all(|x| x == d),
        }
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().map(|e| e.degree()).max()
    }

    /// Same polynomial viewed in a larger universe; `map[i]` is the new
    /// position of variable `i`.
    pub fn embed(&self, target: &Arc<VariableUniverse>, map: &[usize]) -> Polynomial {
        let n = target.len();
        Polynomial {
            universe: target.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut f = vec![0u32; n];
                    for (i, &a) in e.0.iter().enumerate() {
                        f[map[i]] += a;
                    }
                    (Exponent(f), c.clone())
                })
                .collect(),
        }
    }

    /// Terms whose exponent satisfies the predicate.
    pub fn filter_terms<F: Fn(&Exponent) -> bool>(&self, keep: F) -> Polynomial {
        Polynomial {
            universe: self.universe.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| keep(e))
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Split into multihomogeneous components keyed by block degree.
    pub fn homogeneous_components(&self) -> BTreeMap<MultiDegree, Polynomial> {
        let mut out: BTreeMap<MultiDegree, Polynomial> = BTreeMap::new();
        for (e, c) in &self.terms {
            let d = Self::degree_of(&self.universe, e);
            out.entry(d)
                .or_insert_with(|| Polynomial::zero(&self.universe))
                .add_term(e.clone(), c.clone());
        }
        out
    }

    /// Rescale so that the coefficient of the lexicographically largest
    /// exponent is one. Useful as a canonical form up to scalars.
    pub fn monic_lex(&self) -> Polynomial {
        match self.terms.iter().next_back() {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<JsonTerm> = self
            .terms
            .iter()
            .rev()
            .map(|(e, c)| JsonTerm { exponent: e.0.clone(), coeff: c.clone() })
            .collect();
        serde_json::to_value(terms).unwrap()
    }

    pub fn from_json(universe: &Arc<VariableUniverse>, v: &serde_json::Value) -> Result<Polynomial> {
        let terms: Vec<JsonTerm> =
            serde_json::from_value(v.clone()).map_err(|e| KhlError::Parse(e.to_string()))?;
        let mut p = Polynomial::zero(universe);
        for t in terms {
            if t.exponent.len() != universe.len() {
                return Err(KhlError::DimensionMismatch(format!(
                    "exponent of length {} in a universe of {} variables",
                    t.exponent.len(),
                    universe.len()
                )));
            }
            p.add_term(Exponent(t.exponent), t.coeff);
        }
        Ok(p)
    }

    pub fn parse(universe: &Arc<VariableUniverse>, text: &str) -> Result<Polynomial> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() || s == "0" {
            return Ok(Polynomial::zero(universe));
        }
        let mut p = Polynomial::zero(universe);
        for (neg, term) in split_terms(&s)? {
            let mut c = Rational::one();
            let mut e = vec![0u32; universe.len()];
            for factor in term.split('*') {
                if factor.is_empty() {
                    return Err(KhlError::Parse(format!("empty factor in {:?}", term)));
                }
                if factor.chars().all(|ch| ch.is_ascii_digit() || ch == '/') {
                    c = &c * &factor.parse::<Rational>()?;
                    continue;
                }
                let (name, pow) = split_power(factor)?;
                let i = universe
                    .index_of(name)
                    .ok_or_else(|| KhlError::Parse(format!("unknown variable {:?}", name)))?;
                e[i] += pow;
            }
            if neg {
                c = -c;
            }
            p.add_term(Exponent(e), c);
        }
        Ok(p)
    }
}

#[derive(Serialize, Deserialize)]
struct JsonTerm {
    exponent: Vec<u32>,
    coeff: Rational,
}

fn split_terms(s: &str) -> Result<Vec<(bool, &str)>> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let mut neg = false;
    let bytes = s.as_bytes();
    for (i, &b) in bytes.iter().enumerate() {
        match b {
            b'{' | b'(' => depth += 1,
            b'}' | b')' => depth -= 1,
            b'+' | b'-' if depth == 0 => {
                if i == start {
                    if i != 0 {
                        return Err(KhlError::Parse(format!("dangling sign in {:?}", s)));
                    }
                    neg = b == b'-';
                    start = i + 1;
                    continue;
                }
                // a sign right after '^' would be a negative exponent
                if bytes[i - 1] == b'^' {
                    return Err(KhlError::Parse("negative exponents are not supported".into()));
                }
                out.push((neg, &s[start..i]));
                neg = b == b'-';
                start = i + 1;
            }
            _ => {}
        }
    }
    if start >= s.len() {
        return Err(KhlError::Parse(format!("trailing sign in {:?}", s)));
    }
    out.push((neg, &s[start..]));
    Ok(out)
}

fn split_power(factor: &str) -> Result<(&str, u32)> {
    let close = factor.rfind('}').map(|i| i + 1).unwrap_or(0);
    match factor[close..].find('^') {
        None => Ok((factor, 1)),
        Some(k) => {
            let at = close + k;
            let pow = factor[at + 1..]
                .parse::<u32>()
                .map_err(|_| KhlError::Parse(format!("bad exponent in {:?}", factor)))?;
            Ok((&factor[..at], pow))
        }
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.signum() < 0;
            let a = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let mut factors: Vec<String> = Vec::new();
            if !a.is_one() || e.degree() == 0 {
                factors.push(a.to_string());
            }
            for (i, &p) in e.0.iter().enumerate() {
                match p {
                    0 => {}
                    1 => factors.push(self.universe.name(i).to_string()),
                    _ => factors.push(format!("{}^{}", self.universe.name(i), p)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

/// A list of generators in a common universe.
#[derive(Clone, Debug)]
pub struct Ideal {
    universe: Arc<VariableUniverse>,
    generators: Vec<Polynomial>,
}

impl Ideal {
    /// Zero generators are dropped.
    pub fn new(universe: &Arc<VariableUniverse>, generators: Vec<Polynomial>) -> Result<Ideal> {
        for g in &generators {
            if !same_universe(universe, g.universe()) {
                return Err(KhlError::UniverseMismatch);
            }
        }
        Ok(Ideal {
            universe: universe.clone(),
            generators: generators.into_iter().filter(|g| !g.is_zero()).collect(),
        })
    }

    /// As [`Ideal::new`], additionally requiring every generator to be
    /// multihomogeneous.
    pub fn graded(universe: &Arc<VariableUniverse>, generators: Vec<Polynomial>) -> Result<Ideal> {
        let id = Ideal::new(universe, generators)?;
        id.check_homogeneous()?;
        Ok(id)
    }

    pub fn check_homogeneous(&self) -> Result<()> {
        match self.generators.iter().find(|g| !g.is_homogeneous()) {
            Some(g) => Err(KhlError::NotHomogeneous(g.to_string())),
            None => Ok(()),
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        self.generators.iter().all(|g| g.is_homogeneous())
    }

    pub fn universe(&self) -> &Arc<VariableUniverse> {
        &self.universe
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }
}
