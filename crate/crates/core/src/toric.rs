//! Monomial maps, their toric ideals, and the initial-ideal test deciding
//! whether the images of the generators generate the value semigroup.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{KhlError, Result};
use crate::groebner::{
    buchberger_with, contains_monomial_with, ideal_equal_with, initial_ideal_m, initial_ideal_w,
    saturate_all_variables, Deadline, InitialIdeal, MonomialOrder,
};
use crate::lattice::{integer_kernel, rank};
use crate::orders::WeightingMatrix;
use crate::poly::{Exponent, Ideal, Polynomial};
use crate::rational::Rational;

/// x_j ↦ y^{column j}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialMap {
    pub matrix: Vec<Vec<i64>>,
}

impl MonomialMap {
    pub fn new(matrix: Vec<Vec<i64>>) -> Self {
        MonomialMap { matrix }
    }

    pub fn from_weighting(m: &WeightingMatrix) -> Self {
        MonomialMap { matrix: m.rows.clone() }
    }

    pub fn source_len(&self) -> usize {
        self.matrix.first().map(|r| r.len()).unwrap_or(0)
    }

    pub fn image(&self, u: &[u32]) -> Vec<i64> {
        self.matrix
            .iter()
            .map(|r| r.iter().zip(u).map(|(a, &b)| a * b as i64).sum())
            .collect()
    }
}

/// x^{u+} − x^{u−} for every kernel basis vector u.
pub fn lattice_binomials(universe: &std::sync::Arc<crate::VariableUniverse>, kernel: &[Vec<i64>]) -> Vec<Polynomial> {
    kernel
        .iter()
        .map(|u| {
            let pos: Vec<u32> = u.iter().map(|&x| x.max(0) as u32).collect();
            let neg: Vec<u32> = u.iter().map(|&x| (-x).max(0) as u32).collect();
            Polynomial::from_terms(
                universe,
                [(Exponent(pos), Rational::one()), (Exponent(neg), Rational::from_int(-1))],
            )
        })
        .collect()
}

/// ker φ: the lattice ideal of ker M saturated by every variable.
pub fn toric_ideal(
    universe: &std::sync::Arc<crate::VariableUniverse>,
    phi: &MonomialMap,
    deadline: &Deadline,
) -> Result<Ideal> {
    if phi.source_len() != universe.len() {
        return Err(KhlError::DimensionMismatch("monomial map source differs from universe".into()));
    }
    let kernel = integer_kernel(&phi.matrix)?;
    let gens = lattice_binomials(universe, &kernel);
    let lat = Ideal::new(universe, gens)?;
    if lat.is_empty() {
        return Ok(lat);
    }
    saturate_all_variables(&lat, deadline)
}

#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub initial_basis: Vec<String>,
    pub toric_basis: Vec<String>,
    /// Every basis element of the initial ideal reduces to zero modulo ker φ.
    pub initial_in_toric: bool,
    pub ideals_equal: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ToricVerdict {
    pub is_monomial_free: bool,
    pub is_binomial: bool,
    pub is_toric: bool,
    pub certificate: Certificate,
}

/// Check that each grading block's indicator row lies in the rational row
/// span of the matrix.
pub fn has_degree_rows(m: &WeightingMatrix, block_sizes: &[usize]) -> bool {
    let r = rank(&m.rows);
    let mut ext = m.rows.clone();
    let mut start = 0;
    for &b in block_sizes {
        let mut row = vec![0; m.ncols()];
        row[start..start + b].iter_mut().for_each(|x| *x = 1);
        ext.push(row);
        start += b;
    }
    rank(&ext) == r
}

/// Full verdict for (I, M̂); `is_toric` is the answer to the semigroup
/// generation question.
pub fn khovanskii_check(ideal: &Ideal, mhat: &WeightingMatrix, deadline: &Deadline) -> Result<ToricVerdict> {
    Ok(khovanskii_check_full(ideal, mhat, deadline)?.0)
}

/// As [`khovanskii_check`], also returning the initial ideal.
pub fn khovanskii_check_full(
    ideal: &Ideal,
    mhat: &WeightingMatrix,
    deadline: &Deadline,
) -> Result<(ToricVerdict, InitialIdeal)> {
    ideal.check_homogeneous()?;
    let u = ideal.universe();
    if mhat.ncols() != u.len() {
        return Err(KhlError::DimensionMismatch("matrix column count".into()));
    }
    if !has_degree_rows(mhat, u.block_sizes()) {
        return Err(KhlError::Invalid("matrix lacks the block degree rows".into()));
    }
    let init = initial_ideal_m(ideal, mhat, deadline)?;
    let is_binomial = init.basis.elements().iter().all(|g| g.num_terms() <= 2);
    let is_monomial_free = !contains_monomial_with(&init.ideal, deadline)?;
    let tor = toric_ideal(u, &MonomialMap::from_weighting(mhat), deadline)?;
    let tgb = buchberger_with(&tor, &MonomialOrder::degrevlex(), deadline)?;
    let mut initial_in_toric = true;
    for g in init.basis.elements() {
        if !tgb.contains(&g)? {
            initial_in_toric = false;
            break;
        }
    }
    let ideals_equal = initial_in_toric && ideal_equal_with(&init.ideal, &tor, deadline)?;
    let verdict = ToricVerdict {
        is_monomial_free,
        is_binomial,
        is_toric: ideals_equal,
        certificate: Certificate {
            initial_basis: init.basis.elements().iter().map(|p| p.to_string()).collect(),
            toric_basis: tgb.elements().iter().map(|p| p.to_string()).collect(),
            initial_in_toric,
            ideals_equal,
        },
    };
    Ok((verdict, init))
}

/// w ∈ trop(I): init_w(I) contains no monomial.
pub fn trop_membership(ideal: &Ideal, w: &[i64], deadline: &Deadline) -> Result<bool> {
    let init = initial_ideal_w(ideal, w, deadline)?;
    Ok(!contains_monomial_with(&init.ideal, deadline)?)
}

/// Verdict for a single weight vector: whether init_w(I) is a prime binomial
/// ideal. Lattice: the exponent differences of the reduced basis.
#[derive(Clone, Debug, Serialize)]
pub struct WeightVerdict {
    pub is_monomial_free: bool,
    pub is_binomial: bool,
    /// All binomials have the shape x^a − x^b.
    pub is_pure: bool,
    pub lattice_rank: usize,
    pub is_toric: bool,
    pub initial_basis: Vec<String>,
}

/// init_w(I) is toric iff it is a pure binomial ideal equal to the toric
/// ideal of the saturation of its exponent lattice.
pub fn weight_vector_check(ideal: &Ideal, w: &[i64], deadline: &Deadline) -> Result<WeightVerdict> {
    let u = ideal.universe();
    let init = initial_ideal_w(ideal, w, deadline)?;
    let elems = init.basis.elements();
    let is_monomial_free = !contains_monomial_with(&init.ideal, deadline)?;
    let is_binomial = elems.iter().all(|g| g.num_terms() <= 2);
    let mut is_pure = is_binomial;
    let mut lattice = Vec::new();
    if is_binomial {
        for g in &elems {
            let terms: Vec<_> = g.terms().collect();
            if terms.len() != 2 {
                is_pure = false;
                continue;
            }
            let (ea, ca) = terms[0];
            let (eb, cb) = terms[1];
            if *ca != -cb {
                is_pure = false;
            }
            lattice.push(ea.0.iter().zip(&eb.0).map(|(&a, &b)| a as i64 - b as i64).collect::<Vec<_>>());
        }
    }
    let lattice_rank = rank(&lattice);
    let mut is_toric = false;
    if is_monomial_free && is_pure {
        let n = u.len();
        let rows = if lattice.is_empty() {
            (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect()
        } else {
            integer_kernel(&lattice)?
        };
        let phi = MonomialMap::new(if rows.is_empty() { vec![vec![0; n]] } else { rows });
        let tor = toric_ideal(u, &phi, deadline)?;
        is_toric = ideal_equal_with(&init.ideal, &tor, deadline)?;
    }
    Ok(WeightVerdict {
        is_monomial_free,
        is_binomial,
        is_pure,
        lattice_rank,
        is_toric,
        initial_basis: elems.iter().map(|p| p.to_string()).collect(),
    })
}

/// Two distinct standard monomials (with respect to the order compatible
/// with `mhat`) of one block degree that share the value `mhat · α`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Collision {
    pub first: Exponent,
    pub second: Exponent,
    pub value: Vec<i64>,
}

/// All value classes with more than one standard monomial in `degree`.
pub fn standard_monomial_collisions(
    init: &InitialIdeal,
    mhat: &WeightingMatrix,
    degree: &[u32],
) -> Vec<(Vec<i64>, Vec<Exponent>)> {
    let mut classes: BTreeMap<Vec<i64>, Vec<Exponent>> = BTreeMap::new();
    for e in init.source.standard_monomials(degree) {
        classes.entry(mhat.apply(&e.0)).or_default().push(e);
    }
    classes.into_iter().filter(|(_, v)| v.len() > 1).collect()
}
