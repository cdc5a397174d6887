//! Buchberger's algorithm over ℚ with the Gebauer–Möller pair criteria, and
//! the ideal-theoretic operations built on it: normal forms, initial ideals
//! for weight vectors and weighting matrices, equality, saturation,
//! monomial-freeness, lineality and the quasi-valuation of a weighting matrix.

use std::cmp::Ordering;
use std::sync::Arc;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::error::{KhlError, Result};
use crate::orders::{initial_form_m, initial_form_w, WeightingMatrix};
use crate::poly::{same_universe, Exponent, Ideal, Polynomial, VariableUniverse};
use crate::rational::Rational;

/// Cooperative wall-clock limit for long computations.
#[derive(Clone, Copy, Debug, Default)]
pub struct Deadline(Option<Instant>);

impl Deadline {
    pub fn none() -> Self {
        Deadline(None)
    }

    pub fn after(d: Duration) -> Self {
        Deadline(Some(Instant::now() + d))
    }

    /// Reads `KHL_DEADLINE_SECS`; unset or unparsable means no limit.
    pub fn from_env() -> Self {
        match std::env::var("KHL_DEADLINE_SECS").ok().and_then(|s| s.trim().parse::<f64>().ok()) {
            Some(s) if s >= 0.0 => Deadline::after(Duration::from_secs_f64(s)),
            _ => Deadline::none(),
        }
    }

    pub fn check(&self) -> Result<()> {
        match self.0 {
            Some(t) if Instant::now() > t => Err(KhlError::Deadline),
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Tiebreak {
    Lex,
    DegRevLex,
    /// Degree reverse lexicographic with the given variable as the smallest.
    DegRevLexLast(usize),
}

/// Weight rows compared first (larger is bigger), then a classical order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonomialOrder {
    pub primary: Vec<Vec<i64>>,
    pub tiebreak: Tiebreak,
}

impl MonomialOrder {
    pub fn lex() -> Self {
        MonomialOrder { primary: vec![], tiebreak: Tiebreak::Lex }
    }

    pub fn degrevlex() -> Self {
        MonomialOrder { primary: vec![], tiebreak: Tiebreak::DegRevLex }
    }

    /// Order whose leading term of a polynomial homogeneous in total degree
    /// lies among the terms of minimal `w`-weight.
    pub fn for_weight(w: &[i64]) -> Self {
        let n = w.len();
        MonomialOrder {
            primary: vec![vec![1; n], w.iter().map(|x| -x).collect()],
            tiebreak: Tiebreak::DegRevLex,
        }
    }

    /// Order compatible with `M` (minimum convention), for homogeneous input.
    pub fn for_matrix(m: &WeightingMatrix) -> Self {
        let mut primary = vec![vec![1; m.ncols()]];
        primary.extend(m.leading_rows());
        MonomialOrder { primary, tiebreak: Tiebreak::DegRevLex }
    }

    pub fn matrix(&self, n: usize) -> Vec<Vec<i64>> {
        let unit = |i: usize, s: i64| {
            let mut r = vec![0; n];
            r[i] = s;
            r
        };
        let mut rows = self.primary.clone();
        match self.tiebreak {
            Tiebreak::Lex => rows.extend((0..n).map(|i| unit(i, 1))),
            Tiebreak::DegRevLex => {
                rows.push(vec![1; n]);
                rows.extend((1..n).rev().map(|i| unit(i, -1)));
            }
            Tiebreak::DegRevLexLast(v) => {
                rows.push(vec![1; n]);
                rows.push(unit(v, -1));
                rows.extend((0..n).rev().filter(|&i| i != v).map(|i| unit(i, -1)));
            }
        }
        rows
    }

    /// Compare two exponents; Greater means `a` is the bigger monomial.
    pub fn compare(&self, a: &Exponent, b: &Exponent) -> Ordering {
        let m = self.matrix(a.len());
        key_of(&m, &a.0).cmp(&key_of(&m, &b.0))
    }
}

fn key_of(rows: &[Vec<i64>], e: &[u32]) -> Vec<i64> {
    rows.iter().map(|r| r.iter().zip(e).map(|(a, &b)| a * b as i64).sum()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Mon {
    key: Box<[i64]>,
    exp: Box<[u32]>,
    mask: u64,
}

fn mask_of(e: &[u32]) -> u64 {
    let mut m = 0u64;
    for (i, &a) in e.iter().enumerate() {
        if a > 0 {
            m |= 1 << (i % 64);
        }
    }
    m
}

impl Mon {
    fn new(rows: &[Vec<i64>], e: Vec<u32>) -> Mon {
        let key = key_of(rows, &e).into_boxed_slice();
        let mask = mask_of(&e);
        Mon { key, exp: e.into_boxed_slice(), mask }
    }

    fn mul(&self, o: &Mon) -> Mon {
        let exp: Box<[u32]> = self.exp.iter().zip(o.exp.iter()).map(|(a, b)| a + b).collect();
        let key = self.key.iter().zip(o.key.iter()).map(|(a, b)| a + b).collect();
        Mon { key, exp, mask: self.mask | o.mask }
    }

    fn divides(&self, o: &Mon) -> bool {
        self.mask & !o.mask == 0 && self.exp.iter().zip(o.exp.iter()).all(|(a, b)| a <= b)
    }

    fn div(&self, o: &Mon) -> Mon {
        let exp: Box<[u32]> = self.exp.iter().zip(o.exp.iter()).map(|(a, b)| a - b).collect();
        let key = self.key.iter().zip(o.key.iter()).map(|(a, b)| a - b).collect();
        let mask = mask_of(&exp);
        Mon { key, exp, mask }
    }

    fn lcm(&self, o: &Mon, rows: &[Vec<i64>]) -> Mon {
        let e: Vec<u32> = self.exp.iter().zip(o.exp.iter()).map(|(a, b)| *a.max(b)).collect();
        Mon::new(rows, e)
    }

    fn coprime(&self, o: &Mon) -> bool {
        self.exp.iter().zip(o.exp.iter()).all(|(a, b)| *a == 0 || *b == 0)
    }
}

/// Terms sorted by decreasing monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Poly(Vec<(Mon, Rational)>);

impl Poly {
    fn from_poly(p: &Polynomial, rows: &[Vec<i64>]) -> Poly {
        let mut t: Vec<(Mon, Rational)> =
            p.terms().map(|(e, c)| (Mon::new(rows, e.0.clone()), c.clone())).collect();
        t.sort_by(|a, b| b.0.key.cmp(&a.0.key));
        Poly(t)
    }

    fn to_poly(&self, u: &Arc<VariableUniverse>) -> Polynomial {
        Polynomial::from_terms(u, self.0.iter().map(|(m, c)| (Exponent(m.exp.to_vec()), c.clone())))
    }

    fn lm(&self) -> &Mon {
        &self.0[0].0
    }

    fn make_monic(&mut self) {
        let inv = self.0[0].1.recip();
        if inv.is_one() {
            return;
        }
        for t in self.0.iter_mut() {
            t.1 = &t.1 * &inv;
        }
    }

    /// self[from..] - c * m * g, merged.
    fn sub_mul(&self, from: usize, c: &Rational, m: &Mon, g: &Poly, gfrom: usize) -> Poly {
        let a = &self.0[from..];
        let b = &g.0[gfrom..];
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        let mut pending: Option<Mon> = None;
        while i < a.len() || j < b.len() {
            if j < b.len() && pending.is_none() {
                pending = Some(b[j].0.mul(m));
            }
            let ord = match (i < a.len(), pending.as_ref()) {
                (true, Some(pm)) => a[i].0.key.cmp(&pm.key),
                (true, None) => Ordering::Greater,
                (false, _) => Ordering::Less,
            };
            match ord {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let pm = pending.take().unwrap();
                    out.push((pm, -(c * &b[j].1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let pm = pending.take().unwrap();
                    let s = &a[i].1 - &(c * &b[j].1);
                    if !s.is_zero() {
                        out.push((pm, s));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Poly(out)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct GbStats {
    pub spairs_processed: usize,
    pub spairs_skipped: usize,
    pub zero_reductions: usize,
    pub reductions: usize,
    pub wall_time_ms: u128,
}

/// Reduced Gröbner basis: monic elements sorted by decreasing leading monomial.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    universe: Arc<VariableUniverse>,
    order: MonomialOrder,
    rows: Vec<Vec<i64>>,
    elems: Vec<Poly>,
    pub stats: GbStats,
}

struct Reducer<'a> {
    basis: Vec<&'a Poly>,
    reductions: usize,
}

impl<'a> Reducer<'a> {
    fn find(&self, m: &Mon) -> Option<usize> {
        self.basis.iter().position(|g| g.lm().divides(m))
    }

    /// Full reduction; returns the remainder.
    fn reduce(&mut self, p: Poly, deadline: &Deadline) -> Result<Poly> {
        let mut rem: Vec<(Mon, Rational)> = Vec::new();
        let mut p = p;
        let mut start = 0;
        let mut steps = 0usize;
        while start < p.0.len() {
            let idx = self.find(&p.0[start].0);
            match idx {
                None => {
                    rem.push(p.0[start].clone());
                    start += 1;
                }
                Some(k) => {
                    let g = self.basis[k];
                    let q = p.0[start].0.div(g.lm());
                    let c = p.0[start].1.clone();
                    p = p.sub_mul(start + 1, &c, &q, g, 1);
                    start = 0;
                    self.reductions += 1;
                    steps += 1;
                    if steps.is_multiple_of(256) {
                        deadline.check()?;
                    }
                }
            }
        }
        Ok(Poly(rem))
    }
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Mon,
}

fn spoly(f: &Poly, g: &Poly, lcm: &Mon) -> Poly {
    // both monic
    let mf = lcm.div(f.lm());
    let mg = lcm.div(g.lm());
    let one = Rational::one();
    let a = Poly(vec![]).sub_mul(0, &Rational::from_int(-1), &mf, f, 1);
    a.sub_mul(0, &one, &mg, g, 1)
}

/// Gröbner basis of `ideal` under `order`.
pub fn buchberger(ideal: &Ideal, order: &MonomialOrder) -> Result<GroebnerBasis> {
    buchberger_with(ideal, order, &Deadline::none())
}

pub fn buchberger_with(ideal: &Ideal, order: &MonomialOrder, deadline: &Deadline) -> Result<GroebnerBasis> {
    let t0 = Instant::now();
    let u = ideal.universe().clone();
    let n = u.len();
    let rows = order.matrix(n);
    if rows.iter().any(|r| r.len() != n) {
        return Err(KhlError::DimensionMismatch("order rows do not match the variable count".into()));
    }
    let mut stats = GbStats::default();
    let mut polys: Vec<Poly> = Vec::new();
    let mut active: Vec<usize> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();

    let mut inputs: Vec<Poly> = ideal
        .generators()
        .iter()
        .map(|g| Poly::from_poly(g, &rows))
        .filter(|p| !p.0.is_empty())
        .collect();
    // smallest leading monomial first, for a stable insertion order
    inputs.sort_by(|a, b| a.lm().key.cmp(&b.lm().key));

    for f in inputs {
        deadline.check()?;
        let basis: Vec<&Poly> = active.iter().map(|&i| &polys[i]).collect();
        let mut red = Reducer { basis, reductions: 0 };
        let mut h = red.reduce(f, deadline)?;
        stats.reductions += red.reductions;
        if h.0.is_empty() {
            continue;
        }
        h.make_monic();
        update(&mut polys, &mut active, &mut pairs, h, &rows, &mut stats);
    }

    while !pairs.is_empty() {
        deadline.check()?;
        let mut best = 0;
        for k in 1..pairs.len() {
            let (a, b) = (&pairs[k], &pairs[best]);
            let o = a.lcm.key.cmp(&b.lcm.key).then((a.i, a.j).cmp(&(b.i, b.j)));
            if o == Ordering::Less {
                best = k;
            }
        }
        let p = pairs.swap_remove(best);
        stats.spairs_processed += 1;
        let s = spoly(&polys[p.i], &polys[p.j], &p.lcm);
        let basis: Vec<&Poly> = active.iter().map(|&i| &polys[i]).collect();
        let mut red = Reducer { basis, reductions: 0 };
        let mut h = red.reduce(s, deadline)?;
        stats.reductions += red.reductions;
        if h.0.is_empty() {
            stats.zero_reductions += 1;
            continue;
        }
        h.make_monic();
        update(&mut polys, &mut active, &mut pairs, h, &rows, &mut stats);
    }

    let mut g: Vec<Poly> = active.iter().map(|&i| polys[i].clone()).collect();
    g = interreduce(g, deadline)?;
    stats.wall_time_ms = t0.elapsed().as_millis();
    Ok(GroebnerBasis { universe: u, order: order.clone(), rows, elems: g, stats })
}

fn update(
    polys: &mut Vec<Poly>,
    active: &mut Vec<usize>,
    pairs: &mut Vec<Pair>,
    h: Poly,
    rows: &[Vec<i64>],
    stats: &mut GbStats,
) {
    let hi = polys.len();
    let hl = h.lm().clone();
    polys.push(h);

    let cands: Vec<(usize, Mon)> = active.iter().map(|&g| (g, polys[g].lm().lcm(&hl, rows))).collect();
    let mut keep = vec![false; cands.len()];
    for (a, (g1, l1)) in cands.iter().enumerate() {
        if polys[*g1].lm().coprime(&hl) {
            keep[a] = true;
            continue;
        }
        // drop (h,g1) if another (h,g2), still pending or already kept, has
        // an lcm dividing this one
        let dominated = cands.iter().enumerate().any(|(b, (_, l2))| {
            b != a && l2.divides(l1) && (b > a || keep[b]) && !(l2.exp == l1.exp && b > a)
        });
        if !dominated {
            keep[a] = true;
        }
    }
    let mut fresh = Vec::new();
    for (a, (g, l)) in cands.into_iter().enumerate() {
        if !keep[a] {
            stats.spairs_skipped += 1;
            continue;
        }
        if polys[g].lm().coprime(&hl) {
            stats.spairs_skipped += 1;
            continue;
        }
        fresh.push(Pair { i: g, j: hi, lcm: l });
    }

    let before = pairs.len();
    pairs.retain(|p| {
        if !hl.divides(&p.lcm) {
            return true;
        }
        let l1 = polys[p.i].lm().lcm(&hl, rows);
        let l2 = polys[p.j].lm().lcm(&hl, rows);
        l1.exp == p.lcm.exp || l2.exp == p.lcm.exp
    });
    stats.spairs_skipped += before - pairs.len();
    pairs.extend(fresh);

    active.retain(|&g| !hl.divides(polys[g].lm()));
    active.push(hi);
}

fn interreduce(mut g: Vec<Poly>, deadline: &Deadline) -> Result<Vec<Poly>> {
    // minimal basis first
    g.sort_by(|a, b| a.lm().key.cmp(&b.lm().key));
    let mut minimal: Vec<Poly> = Vec::new();
    for p in g {
        if !minimal.iter().any(|q| q.lm().divides(p.lm())) {
            minimal.push(p);
        }
    }
    let mut out = Vec::with_capacity(minimal.len());
    for k in 0..minimal.len() {
        let others: Vec<&Poly> =
            minimal.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, p)| p).collect();
        let lead = minimal[k].0[0].clone();
        let tail = Poly(minimal[k].0[1..].to_vec());
        let mut red = Reducer { basis: others, reductions: 0 };
        let r = red.reduce(tail, deadline)?;
        let mut t = vec![lead];
        t.extend(r.0);
        let mut p = Poly(t);
        p.make_monic();
        out.push(p);
    }
    out.sort_by(|a, b| b.lm().key.cmp(&a.lm().key));
    Ok(out)
}

impl GroebnerBasis {
    pub fn universe(&self) -> &Arc<VariableUniverse> {
        &self.universe
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn elements(&self) -> Vec<Polynomial> {
        self.elems.iter().map(|p| p.to_poly(&self.universe)).collect()
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.elems.iter().any(|p| p.lm().exp.iter().all(|&a| a == 0))
    }

    pub fn leading_exponents(&self) -> Vec<Exponent> {
        self.elems.iter().map(|p| Exponent(p.lm().exp.to_vec())).collect()
    }

    /// Leading term of an arbitrary polynomial under this basis' order.
    pub fn leading_exponent(&self, f: &Polynomial) -> Option<Exponent> {
        let p = Poly::from_poly(f, &self.rows);
        p.0.first().map(|t| Exponent(t.0.exp.to_vec()))
    }

    pub fn to_ideal(&self) -> Ideal {
        Ideal::new(&self.universe, self.elements()).unwrap()
    }

    pub fn normal_form(&self, f: &Polynomial) -> Result<Polynomial> {
        if !same_universe(f.universe(), &self.universe) {
            return Err(KhlError::UniverseMismatch);
        }
        let mut red = Reducer { basis: self.elems.iter().collect(), reductions: 0 };
        let r = red.reduce(Poly::from_poly(f, &self.rows), &Deadline::none())?;
        Ok(r.to_poly(&self.universe))
    }

    pub fn contains(&self, f: &Polynomial) -> Result<bool> {
        Ok(self.normal_form(f)?.is_zero())
    }

    pub fn is_standard(&self, e: &Exponent) -> bool {
        let m = Mon::new(&self.rows, e.0.clone());
        !self.elems.iter().any(|g| g.lm().divides(&m))
    }

    /// Standard monomials of the given block degree, in increasing
    /// lexicographic order of exponents.
    pub fn standard_monomials(&self, degree: &[u32]) -> Vec<Exponent> {
        monomials_of_degree(&self.universe, degree)
            .into_iter()
            .filter(|e| self.is_standard(e))
            .collect()
    }

    /// Every S-polynomial reduces to zero (Buchberger's criterion).
    pub fn verify(&self) -> bool {
        for i in 0..self.elems.len() {
            for j in i + 1..self.elems.len() {
                let l = self.elems[i].lm().lcm(self.elems[j].lm(), &self.rows);
                let s = spoly(&self.elems[i], &self.elems[j], &l);
                let mut red = Reducer { basis: self.elems.iter().collect(), reductions: 0 };
                match red.reduce(s, &Deadline::none()) {
                    Ok(r) if r.0.is_empty() => {}
                    _ => return false,
                }
            }
        }
        true
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "basis": self.elements().iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            "stats": self.stats,
        })
    }
}

/// All exponents of a given block degree, in increasing lexicographic order.
pub fn monomials_of_degree(u: &VariableUniverse, degree: &[u32]) -> Vec<Exponent> {
    assert_eq!(degree.len(), u.num_blocks());
    let mut per_block: Vec<Vec<Vec<u32>>> = Vec::new();
    for (b, &sz) in u.block_sizes().iter().enumerate() {
        per_block.push(compositions(degree[b], sz));
    }
    let mut out: Vec<Vec<u32>> = vec![vec![]];
    for choices in &per_block {
        let mut next = Vec::new();
        for prefix in &out {
            for c in choices {
                let mut e = prefix.clone();
                e.extend(c.iter().copied());
                next.push(e);
            }
        }
        out = next;
    }
    let mut v: Vec<Exponent> = out.into_iter().map(Exponent).collect();
    v.sort();
    v
}

/// All vectors of `parts` nonnegative integers summing to `total`.
pub fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            let mut v = vec![first];
            v.append(&mut rest);
            out.push(v);
        }
    }
    out
}

/// Initial ideal together with its reduced basis and the compatible basis of
/// the original ideal it was read off from.
#[derive(Clone, Debug)]
pub struct InitialIdeal {
    pub ideal: Ideal,
    pub basis: GroebnerBasis,
    pub source: GroebnerBasis,
}

/// init_w(I) for a multihomogeneous ideal.
pub fn initial_ideal_w(ideal: &Ideal, w: &[i64], deadline: &Deadline) -> Result<InitialIdeal> {
    ideal.check_homogeneous()?;
    if w.len() != ideal.universe().len() {
        return Err(KhlError::DimensionMismatch("weight vector length".into()));
    }
    let order = MonomialOrder::for_weight(w);
    let src = buchberger_with(ideal, &order, deadline)?;
    let gens: Result<Vec<Polynomial>> = src.elements().iter().map(|g| initial_form_w(g, w)).collect();
    finish_initial(ideal, gens?, &order, src, deadline)
}

/// init_M(I) for a multihomogeneous ideal.
pub fn initial_ideal_m(ideal: &Ideal, m: &WeightingMatrix, deadline: &Deadline) -> Result<InitialIdeal> {
    ideal.check_homogeneous()?;
    if m.ncols() != ideal.universe().len() {
        return Err(KhlError::DimensionMismatch("matrix column count".into()));
    }
    let order = MonomialOrder::for_matrix(m);
    let src = buchberger_with(ideal, &order, deadline)?;
    let gens: Result<Vec<Polynomial>> = src.elements().iter().map(|g| initial_form_m(g, m)).collect();
    finish_initial(ideal, gens?, &order, src, deadline)
}

fn finish_initial(
    ideal: &Ideal,
    gens: Vec<Polynomial>,
    order: &MonomialOrder,
    src: GroebnerBasis,
    deadline: &Deadline,
) -> Result<InitialIdeal> {
    let init = Ideal::new(ideal.universe(), gens)?;
    let basis = buchberger_with(&init, order, deadline)?;
    Ok(InitialIdeal { ideal: basis.to_ideal(), basis, source: src })
}

/// Equality of ideals via reduced bases under degree reverse lex.
pub fn ideal_equal(a: &Ideal, b: &Ideal) -> Result<bool> {
    ideal_equal_with(a, b, &Deadline::none())
}

pub fn ideal_equal_with(a: &Ideal, b: &Ideal, deadline: &Deadline) -> Result<bool> {
    if !same_universe(a.universe(), b.universe()) {
        return Err(KhlError::UniverseMismatch);
    }
    let o = MonomialOrder::degrevlex();
    let ga = buchberger_with(a, &o, deadline)?;
    let gb = buchberger_with(b, &o, deadline)?;
    Ok(ga.elems == gb.elems)
}

/// Is every generator of `sub` in the ideal with basis `g`?
pub fn contained_in(sub: &Ideal, g: &GroebnerBasis) -> Result<bool> {
    for f in sub.generators() {
        if !g.contains(f)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// (I : f^∞) by eliminating t from I + ⟨t·f − 1⟩.
pub fn saturate(ideal: &Ideal, f: &Polynomial) -> Result<Ideal> {
    saturate_with(ideal, f, &Deadline::none())
}

pub fn saturate_with(ideal: &Ideal, f: &Polynomial, deadline: &Deadline) -> Result<Ideal> {
    if f.is_zero() {
        return Err(KhlError::ZeroPolynomial);
    }
    let u = ideal.universe();
    let n = u.len();
    let mut tname = String::from("_t");
    while u.index_of(&tname).is_some() {
        tname.push('_');
    }
    let big = u.with_extra(&tname)?;
    let map: Vec<usize> = (0..n).collect();
    let mut gens: Vec<Polynomial> = ideal.generators().iter().map(|g| g.embed(&big, &map)).collect();
    let tf = Polynomial::var(&big, n).mul(&f.embed(&big, &map))?;
    gens.push(tf.sub(&Polynomial::one(&big))?);
    let mut elim = vec![0; n + 1];
    elim[n] = 1;
    let order = MonomialOrder { primary: vec![elim], tiebreak: Tiebreak::DegRevLex };
    let g = buchberger_with(&Ideal::new(&big, gens)?, &order, deadline)?;
    let mut out = Vec::new();
    for p in g.elements() {
        if p.terms().all(|(e, _)| e.0[n] == 0) {
            out.push(Polynomial::from_terms(
                u,
                p.terms().map(|(e, c)| (Exponent(e.0[..n].to_vec()), c.clone())),
            ));
        }
    }
    Ideal::new(u, out)
}

/// (I : x_i^∞). Homogeneous ideals use a degree reverse lex basis with x_i
/// last; otherwise this falls back to [`saturate`].
pub fn saturate_by_variable(ideal: &Ideal, i: usize, deadline: &Deadline) -> Result<Ideal> {
    let u = ideal.universe();
    if !ideal.generators().iter().all(is_standard_homogeneous) {
        return saturate_with(ideal, &Polynomial::var(u, i), deadline);
    }
    let order = MonomialOrder { primary: vec![], tiebreak: Tiebreak::DegRevLexLast(i) };
    let g = buchberger_with(ideal, &order, deadline)?;
    let gens = g
        .elements()
        .into_iter()
        .map(|p| {
            let k = p.terms().map(|(e, _)| e.0[i]).min().unwrap_or(0);
            if k == 0 {
                return p;
            }
            Polynomial::from_terms(
                u,
                p.terms().map(|(e, c)| {
                    let mut f = e.0.clone();
                    f[i] -= k;
                    (Exponent(f), c.clone())
                }),
            )
        })
        .collect();
    Ideal::new(u, gens)
}

fn is_standard_homogeneous(p: &Polynomial) -> bool {
    let mut it = p.terms().map(|(e, _)| e.degree());
    match it.next() {
        None => true,
        Some(d) => it.all(|x| x == d),
    }
}

/// (I : (x_1⋯x_n)^∞) one variable at a time; stops early at the unit ideal.
pub fn saturate_all_variables(ideal: &Ideal, deadline: &Deadline) -> Result<Ideal> {
    let mut cur = ideal.clone();
    for i in 0..ideal.universe().len() {
        cur = saturate_by_variable(&cur, i, deadline)?;
        if cur.generators().iter().any(|g| g.total_degree() == Some(0)) {
            return Ideal::new(ideal.universe(), vec![Polynomial::one(ideal.universe())]);
        }
    }
    Ok(cur)
}

/// Does the ideal contain a monomial, i.e. is its saturation by the product
/// of all variables the unit ideal?
pub fn contains_monomial(ideal: &Ideal) -> Result<bool> {
    contains_monomial_with(ideal, &Deadline::none())
}

pub fn contains_monomial_with(ideal: &Ideal, deadline: &Deadline) -> Result<bool> {
    let sat = saturate_all_variables(ideal, deadline)?;
    let g = buchberger_with(&sat, &MonomialOrder::degrevlex(), deadline)?;
    Ok(g.is_unit())
}

/// init_w(I) = I.
pub fn in_lineality(ideal: &Ideal, w: &[i64]) -> Result<bool> {
    in_lineality_with(ideal, w, &Deadline::none())
}

pub fn in_lineality_with(ideal: &Ideal, w: &[i64], deadline: &Deadline) -> Result<bool> {
    let init = initial_ideal_w(ideal, w, deadline)?;
    ideal_equal_with(&init.ideal, ideal, deadline)
}

/// v_M(f): the ≺-minimum of M α over the support of the normal form of `f`
/// with respect to a basis computed under the order compatible with `M`.
pub fn quasi_valuation(f: &Polynomial, m: &WeightingMatrix, g: &GroebnerBasis) -> Result<Vec<i64>> {
    if g.order != MonomialOrder::for_matrix(m) {
        return Err(KhlError::Invalid("basis was not computed under the order compatible with M".into()));
    }
    let nf = g.normal_form(f)?;
    if nf.is_zero() {
        return Err(KhlError::NoValue("polynomial lies in the ideal".into()));
    }
    let vals: Vec<Vec<i64>> = nf.terms().map(|(e, _)| m.apply(&e.0)).collect();
    Ok(m.order.min(vals.iter()).unwrap().clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(names: &[&str]) -> Arc<VariableUniverse> {
        VariableUniverse::single_block(names.iter().map(|s| s.to_string()).collect()).unwrap()
    }

    fn ideal(un: &Arc<VariableUniverse>, gens: &[&str]) -> Ideal {
        Ideal::new(un, gens.iter().map(|g| Polynomial::parse(un, g).unwrap()).collect()).unwrap()
    }

    #[test]
    fn principal_monomial() {
        let un = u(&["x", "y"]);
        let g = buchberger(&ideal(&un, &["x"]), &MonomialOrder::lex()).unwrap();
        assert_eq!(g.elements(), vec![Polynomial::parse(&un, "x").unwrap()]);
    }

    #[test]
    fn textbook_example() {
        // x^2 - y, x*y - 1 under lex
        let un = u(&["x", "y"]);
        let g = buchberger(&ideal(&un, &["x^2 - y", "x*y - 1"]), &MonomialOrder::lex()).unwrap();
        let expect = vec![
            Polynomial::parse(&un, "x - y^2").unwrap(),
            Polynomial::parse(&un, "y^3 - 1").unwrap(),
        ];
        assert_eq!(g.elements(), expect);
        assert!(g.verify());
    }

    #[test]
    fn saturation_examples() {
        let un = u(&["x", "y"]);
        let i = ideal(&un, &["x*y"]);
        let x = Polynomial::parse(&un, "x").unwrap();
        let s = saturate(&i, &x).unwrap();
        assert!(ideal_equal(&s, &ideal(&un, &["y"])).unwrap());
        let via_var = saturate_by_variable(&i, 0, &Deadline::none()).unwrap();
        assert!(ideal_equal(&via_var, &s).unwrap());
        let j = ideal(&un, &["x - y"]);
        assert!(ideal_equal(&saturate(&j, &x).unwrap(), &j).unwrap());
    }

    #[test]
    fn monomial_containment() {
        let un = u(&["x", "y"]);
        assert!(!contains_monomial(&ideal(&un, &["x - y"])).unwrap());
        assert!(contains_monomial(&ideal(&un, &["x*y"])).unwrap());
        assert!(contains_monomial(&ideal(&un, &["x^2 - x*y", "y^2"])).unwrap());
    }

    #[test]
    fn equality() {
        let un = u(&["x", "y"]);
        assert!(ideal_equal(&ideal(&un, &["x", "y"]), &ideal(&un, &["y", "x + y"])).unwrap());
        assert!(!ideal_equal(&ideal(&un, &["x"]), &ideal(&un, &["x^2"])).unwrap());
    }

    #[test]
    fn nonhomogeneous_rejected() {
        let un = u(&["x", "y"]);
        assert!(matches!(
            initial_ideal_w(&ideal(&un, &["x - 1"]), &[1, 0], &Deadline::none()),
            Err(KhlError::NotHomogeneous(_))
        ));
    }

    #[test]
    fn deadline_fires() {
        let un = u(&["x", "y", "z"]);
        let d = Deadline::after(Duration::from_secs(0));
        std::thread::sleep(Duration::from_millis(2));
        assert_eq!(
            buchberger_with(&ideal(&un, &["x^2 - y", "y^2 - z"]), &MonomialOrder::lex(), &d).err(),
            Some(KhlError::Deadline)
        );
    }

    #[test]
    fn compositions_count() {
        assert_eq!(compositions(2, 3).len(), 6);
        assert_eq!(compositions(0, 0), vec![Vec::<u32>::new()]);
    }
}
