//! Total orders on ℤ^d, weighting matrices and initial forms (minimum
//! convention), and linear forms that turn a matrix into a weight vector.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{KhlError, Result};
use crate::lattice::rank;
use crate::poly::Polynomial;

pub type WeightVector = Vec<i64>;

/// A total order on ℤ^d. Every variant compares the images under a list of
/// integer functionals lexicographically, smaller first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroupOrder {
    Lex,
    /// m ≺ n iff Σm < Σn, or the sums agree and m >_lex n.
    SumThenRevlexAsDisplayed,
    /// Compare `rows · m` lexicographically; ties broken by lex on m.
    CustomMatrix { rows: Vec<Vec<i64>> },
}

impl GroupOrder {
    /// Functionals L_1, …, L_r with m ≺ n iff (L_i m)_i <_lex (L_i n)_i.
    /// A functional in the span of earlier ones never breaks a tie and is
    /// dropped, so r ≤ d.
    pub fn functionals(&self, d: usize) -> Vec<Vec<i64>> {
        let mut kept: Vec<Vec<i64>> = Vec::new();
        for l in self.raw_functionals(d) {
            kept.push(l);
            if rank(&kept) < kept.len() {
                kept.pop();
            }
        }
        kept
    }

    fn raw_functionals(&self, d: usize) -> Vec<Vec<i64>> {
        let ident = |sign: i64| -> Vec<Vec<i64>> {
            (0..d)
                .map(|i| {
                    let mut r = vec![0; d];
                    r[i] = sign;
                    r
                })
                .collect()
        };
        match self {
            GroupOrder::Lex => ident(1),
            GroupOrder::SumThenRevlexAsDisplayed => {
                let mut rows = vec![vec![1; d]];
                rows.extend(ident(-1));
                rows
            }
            GroupOrder::CustomMatrix { rows } => {
                let mut r = rows.clone();
                r.extend(ident(1));
                r
            }
        }
    }

    pub fn compare(&self, m: &[i64], n: &[i64]) -> Ordering {
        debug_assert_eq!(m.len(), n.len());
        match self {
            GroupOrder::Lex => m.cmp(n),
            GroupOrder::SumThenRevlexAsDisplayed => {
                let (sm, sn): (i64, i64) = (m.iter().sum(), n.iter().sum());
                sm.cmp(&sn).then_with(|| n.cmp(m))
            }
            GroupOrder::CustomMatrix { rows } => {
                for r in rows {
                    let a: i64 = r.iter().zip(m).map(|(x, y)| x * y).sum();
                    let b: i64 = r.iter().zip(n).map(|(x, y)| x * y).sum();
                    match a.cmp(&b) {
                        Ordering::Equal => {}
                        o => return o,
                    }
                }
                m.cmp(n)
            }
        }
    }

    pub fn min<'a>(&self, pts: impl IntoIterator<Item = &'a Vec<i64>>) -> Option<&'a Vec<i64>> {
        pts.into_iter().min_by(|a, b| self.compare(a, b))
    }
}

/// Integer matrix whose columns are indexed by variables, together with the
/// order used to compare its products with exponent vectors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightingMatrix {
    pub rows: Vec<Vec<i64>>,
    pub order: GroupOrder,
}

impl WeightingMatrix {
    pub fn new(rows: Vec<Vec<i64>>, order: GroupOrder) -> Result<Self> {
        if rows.is_empty() {
            return Err(KhlError::DimensionMismatch("a weighting matrix needs at least one row".into()));
        }
        let n = rows[0].len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(KhlError::DimensionMismatch("ragged weighting matrix".into()));
        }
        if let GroupOrder::CustomMatrix { rows: c } = &order {
            if c.iter().any(|r| r.len() != rows.len()) {
                return Err(KhlError::DimensionMismatch("order matrix width differs from row count".into()));
            }
        }
        Ok(WeightingMatrix { rows, order })
    }

    /// Build from columns (one per variable).
    pub fn from_columns(cols: &[Vec<i64>], order: GroupOrder) -> Result<Self> {
        let d = cols.first().map(|c| c.len()).unwrap_or(0);
        if d == 0 || cols.iter().any(|c| c.len() != d) {
            return Err(KhlError::DimensionMismatch("columns must be nonempty and equal length".into()));
        }
        let rows = (0..d).map(|i| cols.iter().map(|c| c[i]).collect()).collect();
        WeightingMatrix::new(rows, order)
    }

    pub fn single_row(w: &[i64]) -> Self {
        WeightingMatrix { rows: vec![w.to_vec()], order: GroupOrder::Lex }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.rows[0].len()
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        self.rows.iter().map(|r| r[j]).collect()
    }

    pub fn columns(&self) -> Vec<Vec<i64>> {
        (0..self.ncols()).map(|j| self.column(j)).collect()
    }

    pub fn apply(&self, u: &[u32]) -> Vec<i64> {
        self.rows
            .iter()
            .map(|r| r.iter().zip(u).map(|(a, &b)| a * b as i64).sum())
            .collect()
    }

    /// Rows −(L·M): the weight rows of a monomial order whose leading terms
    /// realise the ≺-minimum of M u.
    pub fn leading_rows(&self) -> Vec<Vec<i64>> {
        let l = self.order.functionals(self.nrows());
        l.iter()
            .map(|li| {
                (0..self.ncols())
                    .map(|j| -li.iter().zip(&self.rows).map(|(a, r)| a * r[j]).sum::<i64>())
                    .collect()
            })
            .collect()
    }

    /// Prepend one indicator row per block; for a lex or custom order the new
    /// rows are compared first.
    pub fn hat(&self, block_sizes: &[usize]) -> Result<Self> {
        let n: usize = block_sizes.iter().sum();
        if n != self.ncols() {
            return Err(KhlError::DimensionMismatch(format!(
                "blocks cover {} variables, matrix has {} columns",
                n,
                self.ncols()
            )));
        }
        let s = block_sizes.len();
        let mut rows = Vec::with_capacity(s + self.nrows());
        let mut start = 0;
        for &b in block_sizes {
            let mut r = vec![0; n];
            r[start..start + b].iter_mut().for_each(|x| *x = 1);
            rows.push(r);
            start += b;
        }
        rows.extend(self.rows.iter().cloned());
        let order = match &self.order {
            GroupOrder::Lex => GroupOrder::Lex,
            GroupOrder::SumThenRevlexAsDisplayed => {
                // degree block first, then the sum-then-revlex rule on the tail
                let d = self.nrows();
                let mut c = Vec::new();
                for i in 0..s {
                    let mut r = vec![0; s + d];
                    r[i] = 1;
                    c.push(r);
                }
                let mut sum = vec![0; s];
                sum.extend(vec![1; d]);
                c.push(sum);
                for i in 0..d {
                    let mut r = vec![0; s + d];
                    r[s + i] = -1;
                    c.push(r);
                }
                GroupOrder::CustomMatrix { rows: c }
            }
            GroupOrder::CustomMatrix { rows: c } => {
                let d = self.nrows();
                let mut out = Vec::new();
                for i in 0..s {
                    let mut r = vec![0; s + d];
                    r[i] = 1;
                    out.push(r);
                }
                for r in c {
                    let mut x = vec![0; s];
                    x.extend(r.iter().copied());
                    out.push(x);
                }
                GroupOrder::CustomMatrix { rows: out }
            }
        };
        WeightingMatrix::new(rows, order)
    }

    /// Drop the first `s` rows (inverse of [`WeightingMatrix::hat`] on values).
    pub fn strip_rows(&self, s: usize) -> Vec<Vec<i64>> {
        self.rows[s..].to_vec()
    }
}

/// Integer linear form on ℤ^d.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearForm {
    pub coefficients: Vec<i64>,
}

impl LinearForm {
    pub fn new(coefficients: Vec<i64>) -> Self {
        LinearForm { coefficients }
    }

    pub fn eval(&self, m: &[i64]) -> i64 {
        self.coefficients.iter().zip(m).map(|(a, b)| a * b).sum()
    }

    fn eval_checked(&self, m: &[i64]) -> Option<i64> {
        let mut s: i64 = 0;
        for (a, b) in self.coefficients.iter().zip(m) {
            s = s.checked_add(a.checked_mul(*b)?)?;
        }
        Some(s)
    }

    /// Strictly order-preserving and injective on `points`, checked over all
    /// pairs: m ≺ n implies e(m) < e(n).
    pub fn preserves(&self, points: &[Vec<i64>], order: &GroupOrder) -> bool {
        let vals: Option<Vec<i64>> = points.iter().map(|p| self.eval_checked(p)).collect();
        let vals = match vals {
            Some(v) => v,
            None => return false,
        };
        for i in 0..points.len() {
            for j in 0..points.len() {
                if i == j || points[i] == points[j] {
                    continue;
                }
                if order.compare(&points[i], &points[j]) == Ordering::Less && vals[i] >= vals[j] {
                    return false;
                }
            }
        }
        true
    }

    /// The reversed convention: m ≺ n implies e(m) > e(n), injective.
    pub fn reverses(&self, points: &[Vec<i64>], order: &GroupOrder) -> bool {
        LinearForm::new(self.coefficients.iter().map(|c| -c).collect()).preserves(points, order)
    }
}

/// Terms of `f` of minimal weight `w · u`; ties are all kept.
pub fn initial_form_w(f: &Polynomial, w: &[i64]) -> Result<Polynomial> {
    if f.is_zero() {
        return Err(KhlError::ZeroPolynomial);
    }
    if w.len() != f.universe().len() {
        return Err(KhlError::DimensionMismatch(format!(
            "weight of length {} for {} variables",
            w.len(),
            f.universe().len()
        )));
    }
    let min = f.terms().map(|(e, _)| e.dot(w)).min().unwrap();
    Ok(f.filter_terms(|e| e.dot(w) == min))
}

/// Terms of `f` whose value `M u` is ≺-minimal.
pub fn initial_form_m(f: &Polynomial, m: &WeightingMatrix) -> Result<Polynomial> {
    if f.is_zero() {
        return Err(KhlError::ZeroPolynomial);
    }
    if m.ncols() != f.universe().len() {
        return Err(KhlError::DimensionMismatch(format!(
            "matrix with {} columns for {} variables",
            m.ncols(),
            f.universe().len()
        )));
    }
    let vals: Vec<Vec<i64>> = f.terms().map(|(e, _)| m.apply(&e.0)).collect();
    let min = m.order.min(vals.iter()).unwrap().clone();
    Ok(f.filter_terms(|e| m.apply(&e.0) == min))
}

const MAX_ESCALATIONS: usize = 64;

/// Search for an order-preserving, injective linear form on `points`.
///
/// The candidate for base B is Σ_i B^{r-i} L_i over the order's functionals;
/// B starts at `1 + ‖L·points‖_∞` (times `variant + 1`, so distinct variants
/// give distinct forms) and grows until the pairwise check passes.
pub fn caldero_form(points: &[Vec<i64>], order: &GroupOrder, variant: usize) -> Result<LinearForm> {
    let d = match points.first() {
        Some(p) => p.len(),
        None => return Err(KhlError::Invalid("empty point set".into())),
    };
    if points.iter().any(|p| p.len() != d) {
        return Err(KhlError::DimensionMismatch("points of differing length".into()));
    }
    let l = order.functionals(d);
    let norm = points
        .iter()
        .flat_map(|p| l.iter().map(move |li| li.iter().zip(p).map(|(a, b)| a * b).sum::<i64>().abs()))
        .max()
        .unwrap_or(0);
    let mut base = (1 + norm) * (variant as i64 + 1) + variant as i64;
    for _ in 0..MAX_ESCALATIONS {
        if let Some(form) = form_for_base(&l, base, d) {
            if form.preserves(points, order) {
                return Ok(form);
            }
        } else {
            break;
        }
        base += 1;
    }
    Err(KhlError::SearchFailed(format!(
        "no order-preserving linear form found on {} points",
        points.len()
    )))
}

fn form_for_base(l: &[Vec<i64>], base: i64, d: usize) -> Option<LinearForm> {
    let r = l.len();
    let mut c = vec![0i64; d];
    let mut pw: i64 = 1;
    for i in (0..r).rev() {
        for j in 0..d {
            c[j] = c[j].checked_add(pw.checked_mul(l[i][j])?)?;
        }
        if i > 0 {
            pw = pw.checked_mul(base)?;
        }
    }
    Some(LinearForm::new(c))
}

/// (e(M_1), …, e(M_n)), after checking `e` on the columns of `M`.
pub fn weight_vector_of_matrix(m: &WeightingMatrix, e: &LinearForm) -> Result<WeightVector> {
    if e.coefficients.len() != m.nrows() {
        return Err(KhlError::DimensionMismatch(format!(
            "form of length {} for a matrix with {} rows",
            e.coefficients.len(),
            m.nrows()
        )));
    }
    let cols = m.columns();
    if !e.preserves(&cols, &m.order) {
        return Err(KhlError::Invalid("linear form is not order-preserving on the columns".into()));
    }
    Ok(cols.iter().map(|c| e.eval(c)).collect())
}

/// e applied to every column, without validation.
pub fn apply_form(m: &WeightingMatrix, e: &LinearForm) -> WeightVector {
    m.columns().iter().map(|c| e.eval(c)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::VariableUniverse;

    fn gr24() -> (std::sync::Arc<VariableUniverse>, Polynomial) {
        let names = ["p_{12}", "p_{13}", "p_{14}", "p_{23}", "p_{24}", "p_{34}"];
        let u = VariableUniverse::single_block(names.iter().map(|s| s.to_string()).collect()).unwrap();
        let f = Polynomial::parse(&u, "p_{12}*p_{34} - p_{13}*p_{24} + p_{14}*p_{23}").unwrap();
        (u, f)
    }

    #[test]
    fn init_w_examples() {
        let (u, f) = gr24();
        assert_eq!(initial_form_w(&f, &[0; 6]).unwrap(), f);
        let g = initial_form_w(&f, &[1, 0, 0, 0, 0, 0]).unwrap();
        assert_eq!(g, Polynomial::parse(&u, "-p_{13}*p_{24} + p_{14}*p_{23}").unwrap());
        let m = Polynomial::parse(&u, "2*p_{12}^2").unwrap();
        assert_eq!(initial_form_w(&m, &[5, 1, 1, 1, 1, 1]).unwrap(), m);
        assert!(initial_form_w(&f, &[1, 2]).is_err());
    }

    #[test]
    fn single_row_matrix_matches_vector() {
        let (_, f) = gr24();
        let w = vec![3, 1, 4, 1, 5, 9];
        let m = WeightingMatrix::single_row(&w);
        assert_eq!(initial_form_m(&f, &m).unwrap(), initial_form_w(&f, &w).unwrap());
    }

    #[test]
    fn string_order_rule() {
        let o = GroupOrder::SumThenRevlexAsDisplayed;
        assert_eq!(o.compare(&[0, 1], &[1, 1]), Ordering::Less);
        // equal sums: lex-larger is smaller
        assert_eq!(o.compare(&[1, 0], &[0, 1]), Ordering::Less);
    }

    #[test]
    fn caldero_singleton_and_variants() {
        let pts = vec![vec![3, -1]];
        let e = caldero_form(&pts, &GroupOrder::Lex, 0).unwrap();
        assert!(e.coefficients.iter().any(|&c| c != 0));
        let pts = vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1], vec![2, 0]];
        for o in [GroupOrder::Lex, GroupOrder::SumThenRevlexAsDisplayed] {
            let a = caldero_form(&pts, &o, 0).unwrap();
            let b = caldero_form(&pts, &o, 1).unwrap();
            assert_ne!(a, b);
            assert!(a.preserves(&pts, &o) && b.preserves(&pts, &o));
        }
    }

    #[test]
    fn weight_vector_zero_column() {
        let m = WeightingMatrix::from_columns(&[vec![0, 0], vec![1, 0]], GroupOrder::Lex).unwrap();
        let e = caldero_form(&m.columns(), &m.order, 0).unwrap();
        let w = weight_vector_of_matrix(&m, &e).unwrap();
        assert_eq!(w[0], 0);
        assert!(weight_vector_of_matrix(&m, &LinearForm::new(vec![-1, 0])).is_err());
    }
}
