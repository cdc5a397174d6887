//! Reproduction runs against the bundled reference values.

use std::time::Duration;

use rayon::prelude::*;
use serde::Serialize;

use khl_core::groebner::{in_lineality_with, Deadline};
use khl_core::ideals::{flag_ideal, grassmannian_ideal, subsets};
use khl_core::lattice::rank;
use khl_core::orders::WeightingMatrix;
use khl_core::plabic::{boundary_column_formula, PlabicData, FIG1, GR36_G1, GR36_G2, GR36_TORIC};
use khl_core::polytope::{newton_okounkov_polytope, Polytope};
use khl_core::string_val::{minkowski_verdict, string_weight_vector, CollisionWitness, ReducedWord};
use khl_core::toric::{khovanskii_check, trop_membership, weight_vector_check, ToricVerdict};
use khl_core::{Ideal, KhlError, Result};

use crate::golden::{Examples, Table1, Table2};

/// Per-job limit: an explicit number of seconds, else `KHL_DEADLINE_SECS`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Limits {
    pub deadline_secs: Option<f64>,
    pub threads: usize,
}

impl Limits {
    pub fn deadline(&self) -> Deadline {
        match self.deadline_secs {
            Some(s) => Deadline::after(Duration::from_secs_f64(s.max(0.0))),
            None => Deadline::from_env(),
        }
    }

    fn pool(&self) -> Result<rayon::ThreadPool> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.threads)
            .build()
            .map_err(|e| KhlError::Invalid(format!("thread pool: {}", e)))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Table1Result {
    pub word: String,
    pub class: String,
    pub expected_vector: Vec<i64>,
    pub vector: Vec<i64>,
    pub vector_match: bool,
    pub expected_mp: bool,
    pub mp: bool,
    pub expected_prime: bool,
    pub prime: bool,
    pub witness: Option<CollisionWitness>,
}

impl Table1Result {
    pub fn matches(&self) -> bool {
        self.vector_match && self.mp == self.expected_mp && self.prime == self.expected_prime
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Table1Report {
    pub source: String,
    pub rows: Vec<Table1Result>,
    pub matched: usize,
}

impl Table1Report {
    pub fn all_match(&self) -> bool {
        self.matched == self.rows.len()
    }
}

fn table1_row(n: usize, row: &crate::golden::Table1Row, ideal: &Ideal, limits: &Limits) -> Result<Table1Result> {
    let word = ReducedWord::parse(n, &row.word)?;
    let w = string_weight_vector(&word)?;
    let prime = weight_vector_check(ideal, &w, &limits.deadline())?.is_toric;
    let mv = minkowski_verdict(&word, &limits.deadline())?;
    let vector: Vec<i64> = w.iter().map(|x| -x).collect();
    Ok(Table1Result {
        word: row.word.clone(),
        class: row.class.clone(),
        vector_match: vector == row.vector,
        expected_vector: row.vector.clone(),
        vector,
        expected_mp: row.mp,
        mp: mv.minkowski,
        expected_prime: row.prime,
        prime,
        witness: mv.witness,
    })
}

/// Weight vectors, MP and primeness for the listed words (all rows when
/// `words` is empty). Rows are computed in parallel and reported in table
/// order.
pub fn run_table1(golden: &Table1, words: &[String], limits: &Limits) -> Result<Table1Report> {
    let rows: Vec<_> = golden.rows.iter().filter(|r| words.is_empty() || words.contains(&r.word)).collect();
    if rows.is_empty() {
        return Err(KhlError::Invalid(format!("no table row for {:?}", words)));
    }
    let (_, ideal) = flag_ideal(golden.n)?;
    let results: Vec<Table1Result> = limits
        .pool()?
        .install(|| rows.par_iter().map(|r| table1_row(golden.n, r, &ideal, limits)).collect::<Result<_>>())?;
    let matched = results.iter().filter(|r| r.matches()).count();
    Ok(Table1Report { source: golden.source.clone(), rows: results, matched })
}

#[derive(Clone, Debug, Serialize)]
pub struct Table2Result {
    pub subset: Vec<usize>,
    pub expected_faces: Vec<i64>,
    pub faces: Vec<i64>,
    pub expected_deg: i64,
    pub deg: i64,
    pub expected_e: i64,
    pub e: i64,
}

impl Table2Result {
    pub fn faces_match(&self) -> bool {
        self.faces == self.expected_faces
    }

    pub fn matches(&self) -> bool {
        self.faces_match() && self.deg == self.expected_deg && self.e == self.expected_e
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Table2Report {
    pub source: String,
    pub columns: Vec<String>,
    pub rows: Vec<Table2Result>,
    pub matched: usize,
}

impl Table2Report {
    pub fn all_match(&self) -> bool {
        self.matched == self.rows.len()
    }

    pub fn degrees(&self) -> Vec<i64> {
        self.rows.iter().map(|r| r.deg).collect()
    }

    pub fn e_column(&self) -> Vec<i64> {
        self.rows.iter().map(|r| r.e).collect()
    }
}

fn label(set: &[usize]) -> String {
    set.iter().map(|x| x.to_string()).collect()
}

/// Face rows, plabic degrees and e-values on a Gr(k,n) fixture.
pub fn run_table2(golden: &Table2, fixture: &str) -> Result<Table2Report> {
    let data = PlabicData::from_text(fixture)?;
    let columns: Vec<String> = data.coordinate_labels().iter().map(|l| label(l)).collect();
    if columns != golden.columns || golden.e_form.len() != columns.len() {
        return Err(KhlError::Invalid(format!(
            "fixture face order {:?} differs from reference {:?}",
            columns, golden.columns
        )));
    }
    let mut rows = Vec::new();
    for g in &golden.rows {
        let (_, faces, deg) = data.minimal_flow(&g.subset)?;
        let e = faces.iter().zip(&golden.e_form).map(|(a, b)| a * b).sum();
        rows.push(Table2Result {
            subset: g.subset.clone(),
            expected_faces: g.faces.clone(),
            faces,
            expected_deg: g.deg,
            deg,
            expected_e: g.e,
            e,
        });
    }
    let matched = rows.iter().filter(|r| r.matches()).count();
    Ok(Table2Report { source: golden.source.clone(), columns, rows, matched })
}

pub fn run_table2_default(golden: &Table2) -> Result<Table2Report> {
    run_table2(golden, FIG1)
}

#[derive(Clone, Debug, Serialize)]
pub struct FixtureVerdict {
    pub name: String,
    pub weight_vector: Vec<i64>,
    pub expected_toric: bool,
    pub toric: ToricVerdict,
    pub weight_in_trop: bool,
    pub boundary_formula_agrees: bool,
    pub boundary_columns_in_lineality: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Gr36Report {
    pub weight: Vec<i64>,
    pub expected_monomial_free: bool,
    pub monomial_free: bool,
    pub expected_toric: bool,
    pub toric: bool,
    /// The reference vector lies in λ·(w_G ∘ (i ↦ n+1−i)) + lineality for
    /// the first non-toric fixture.
    pub mirrors_first_fixture: bool,
    pub fixtures: Vec<FixtureVerdict>,
}

impl Gr36Report {
    pub fn all_match(&self) -> bool {
        self.monomial_free == self.expected_monomial_free
            && self.toric == self.expected_toric
            && self.fixtures.iter().all(|f| {
                f.toric.is_toric == f.expected_toric
                    && f.toric.is_monomial_free
                    && f.toric.certificate.initial_in_toric
                    && f.weight_in_trop
                    && f.boundary_formula_agrees
                    && f.boundary_columns_in_lineality
            })
    }
}

/// Boundary rows from flows against the closed formula, and the lineality
/// test for each of them.
pub fn boundary_checks(data: &PlabicData, ideal: &Ideal, deadline: &Deadline) -> Result<(bool, bool)> {
    let (k, n) = (data.graph.k, data.graph.n());
    let mut agree = true;
    let mut lineal = true;
    for r in (1..=n).filter(|&r| r != k) {
        let row = data.boundary_row(r)?;
        for (j, x) in data.subsets().iter().zip(&row) {
            agree &= boundary_column_formula(r, j, k, n)? == *x;
        }
        lineal &= in_lineality_with(ideal, &row, deadline)?;
    }
    Ok((agree, lineal))
}

fn lineality_rows(k: usize, n: usize) -> Vec<Vec<i64>> {
    let subs = subsets(n, k);
    (1..=n).map(|i| subs.iter().map(|j| j.contains(&i) as i64).collect()).collect()
}

/// Whether `target` lies in span(w, lineality) after pulling back by the
/// reflection i ↦ n+1−i.
pub fn mirror_relation(k: usize, n: usize, w: &[i64], target: &[i64]) -> bool {
    let subs = subsets(n, k);
    let pulled: Vec<i64> = subs
        .iter()
        .map(|j| {
            let mut m: Vec<usize> = j.iter().map(|&i| n + 1 - i).collect();
            m.sort();
            target[subs.iter().position(|s| *s == m).unwrap()]
        })
        .collect();
    let mut base = lineality_rows(k, n);
    base.push(w.to_vec());
    let r = rank(&base);
    base.push(pulled);
    rank(&base) == r
}

pub const GR36_FIXTURES: [(&str, &str, bool); 3] =
    [("gr36-g1", GR36_G1, false), ("gr36-g2", GR36_G2, false), ("gr36-toric", GR36_TORIC, true)];

pub fn run_gr36(examples: &Examples, limits: &Limits) -> Result<Gr36Report> {
    let g = &examples.gr36_weight;
    let (_, ideal) = grassmannian_ideal(g.k, g.n)?;
    let verdict = weight_vector_check(&ideal, &g.weight, &limits.deadline())?;
    let fixtures: Vec<FixtureVerdict> = limits.pool()?.install(|| {
        GR36_FIXTURES
            .par_iter()
            .map(|(name, text, expected)| {
                let data = PlabicData::from_text(text)?;
                let w = data.weight_vector()?;
                let toric = khovanskii_check(&ideal, &data.hat_matrix()?, &limits.deadline())?;
                let weight_in_trop = trop_membership(&ideal, &w, &limits.deadline())?;
                let (agree, lineal) = boundary_checks(&data, &ideal, &limits.deadline())?;
                Ok(FixtureVerdict {
                    name: name.to_string(),
                    weight_vector: w,
                    expected_toric: *expected,
                    toric,
                    weight_in_trop,
                    boundary_formula_agrees: agree,
                    boundary_columns_in_lineality: lineal,
                })
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let mirrors = mirror_relation(g.k, g.n, &fixtures[0].weight_vector, &g.weight);
    Ok(Gr36Report {
        weight: g.weight.clone(),
        expected_monomial_free: g.monomial_free,
        monomial_free: verdict.is_monomial_free,
        expected_toric: g.toric,
        toric: verdict.is_toric,
        mirrors_first_fixture: mirrors,
        fixtures,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct PipelineReport {
    pub verdict: ToricVerdict,
    pub polytope: Option<serde_json::Value>,
    pub lattice_points: Option<usize>,
}

/// Toric verdict for (I, M̂), and the Newton–Okounkov polytope when the
/// verdict is positive and `with_polytope` is set.
pub fn run_pipeline(ideal: &Ideal, mhat: &WeightingMatrix, with_polytope: bool, limits: &Limits) -> Result<PipelineReport> {
    let verdict = khovanskii_check(ideal, mhat, &limits.deadline())?;
    let (polytope, lattice_points) = if with_polytope && verdict.is_toric {
        let p: Polytope = newton_okounkov_polytope(mhat, ideal.universe().block_sizes(), Some(&verdict))?;
        (Some(p.to_json()), Some(p.lattice_points().len()))
    } else {
        (None, None)
    };
    Ok(PipelineReport { verdict, polytope, lattice_points })
}
