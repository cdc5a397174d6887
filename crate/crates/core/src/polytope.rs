//! Exact polytopes of small dimension: convex hulls by double description,
//! Minkowski sums, lattice points, and Newton–Okounkov polytopes of
//! weighting matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{KhlError, Result};
use crate::orders::WeightingMatrix;
use crate::rational::Rational;
use crate::toric::ToricVerdict;

pub const MAX_DIM: usize = 8;

pub type Point = Vec<Rational>;

/// The half-space `normal · x ≤ offset` (or the hyperplane, for equations).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Facet {
    pub normal: Vec<Rational>,
    pub offset: Rational,
}

impl Facet {
    fn value(&self, x: &[Rational]) -> Rational {
        dot(&self.normal, x)
    }

    pub fn satisfied_by(&self, x: &[Rational]) -> bool {
        self.value(x) <= self.offset
    }

    pub fn tight_at(&self, x: &[Rational]) -> bool {
        self.value(x) == self.offset
    }
}

/// A nonempty polytope with both representations. `equations` cut out the
/// affine hull; `facets` are irredundant inside it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polytope {
    ambient: usize,
    vertices: Vec<Point>,
    equations: Vec<Facet>,
    facets: Vec<Facet>,
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    let mut s = Rational::zero();
    for (x, y) in a.iter().zip(b) {
        s += &(x * y);
    }
    s
}

fn sub(a: &[Rational], b: &[Rational]) -> Point {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Scale to a primitive integer vector with the same direction.
fn primitive(v: &[Rational]) -> Vec<Rational> {
    let mut l = BigInt::one();
    for x in v {
        l = l.lcm(&x.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&l / x.denom())).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return v.to_vec();
    }
    ints.into_iter().map(|x| Rational::from_bigint(x / &g)).collect()
}

/// Reduced row echelon form; returns the nonzero rows and their pivot columns.
fn rref(rows: &[Point]) -> (Vec<Point>, Vec<usize>) {
    let mut a: Vec<Point> = rows.to_vec();
    let ncols = a.first().map(|r| r.len()).unwrap_or(0);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = a[r].clone();
        for i in 0..a.len() {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for (x, y) in a[i].iter_mut().zip(&pivot_row) {
                    *x -= &(&f * y);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == a.len() {
            break;
        }
    }
    a.truncate(r);
    (a, pivots)
}

fn rank(rows: &[Point]) -> usize {
    if rows.is_empty() {
        0
    } else {
        rref(rows).1.len()
    }
}

#[derive(Clone)]
struct Ray {
    v: Vec<Rational>,
    zeros: Vec<u64>,
}

fn bit_set(z: &mut [u64], i: usize) {
    z[i / 64] |= 1 << (i % 64);
}

fn subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

fn popcount(a: &[u64]) -> u32 {
    a.iter().map(|x| x.count_ones()).sum()
}

/// Extreme rays of the pointed cone {z : a·z ≥ 0 for every row a}.
/// Double description with the combinatorial adjacency test.
fn extreme_rays(rows: &[Point]) -> Result<Vec<Vec<Rational>>> {
    let dim = rows[0].len();
    let words = rows.len().div_ceil(64);
    // initial basis: greedily pick dim independent rows
    let mut basis: Vec<usize> = Vec::new();
    let mut chosen: Vec<Point> = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        chosen.push(r.clone());
        if rank(&chosen) == chosen.len() {
            basis.push(i);
            if basis.len() == dim {
                break;
            }
        } else {
            chosen.pop();
        }
    }
    if basis.len() < dim {
        return Err(KhlError::Invalid("cone is not pointed".into()));
    }
    // columns of the inverse: solve B r_j = e_j
    let mut aug: Vec<Point> = basis
        .iter()
        .enumerate()
        .map(|(i, &b)| {
            let mut row = rows[b].clone();
            row.extend((0..dim).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            row
        })
        .collect();
    aug = rref(&aug).0;
    let mut rays: Vec<Ray> = (0..dim)
        .map(|j| {
            let v: Vec<Rational> = (0..dim).map(|i| aug[i][dim + j].clone()).collect();
            let mut zeros = vec![0u64; words];
            for (k, &b) in basis.iter().enumerate() {
                if k != j {
                    bit_set(&mut zeros, b);
                }
            }
            Ray { v: primitive(&v), zeros }
        })
        .collect();
    let mut done = vec![false; rows.len()];
    for &b in &basis {
        done[b] = true;
    }
    for (i, a) in rows.iter().enumerate() {
        if done[i] {
            continue;
        }
        done[i] = true;
        let vals: Vec<Rational> = rays.iter().map(|r| dot(a, &r.v)).collect();
        let plus: Vec<usize> = (0..rays.len()).filter(|&j| vals[j].signum() > 0).collect();
        let minus: Vec<usize> = (0..rays.len()).filter(|&j| vals[j].signum() < 0).collect();
        if minus.is_empty() {
            for (j, r) in rays.iter_mut().enumerate() {
                if vals[j].is_zero() {
                    bit_set(&mut r.zeros, i);
                }
            }
            continue;
        }
        let mut next: Vec<Ray> = Vec::new();
        for &p in &plus {
            for &n in &minus {
                let common: Vec<u64> = rays[p].zeros.iter().zip(&rays[n].zeros).map(|(x, y)| x & y).collect();
                if (popcount(&common) as usize) + 2 < dim {
                    continue;
                }
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(k, r)| k == p || k == n || !subset(&common, &r.zeros));
                if !adjacent {
                    continue;
                }
                let sp = &vals[p];
                let sn = -&vals[n];
                let v: Vec<Rational> = rays[n]
                    .v
                    .iter()
                    .zip(&rays[p].v)
                    .map(|(x, y)| &(sp * x) + &(&sn * y))
                    .collect();
                let mut zeros = common;
                bit_set(&mut zeros, i);
                next.push(Ray { v: primitive(&v), zeros });
            }
        }
        for (j, r) in rays.into_iter().enumerate() {
            if vals[j].signum() > 0 {
                next.push(r);
            } else if vals[j].is_zero() {
                let mut r = r;
                bit_set(&mut r.zeros, i);
                next.push(r);
            }
        }
        rays = next;
    }
    Ok(rays.into_iter().map(|r| r.v).collect())
}

impl Polytope {
    /// Convex hull of finitely many points in ℚ^d, d ≤ [`MAX_DIM`].
    pub fn convex_hull(points: &[Point]) -> Result<Self> {
        let Some(first) = points.first() else {
            return Err(KhlError::Invalid("convex hull of no points".into()));
        };
        let d = first.len();
        if d > MAX_DIM {
            return Err(KhlError::DimensionMismatch(format!("dimension {} exceeds {}", d, MAX_DIM)));
        }
        if points.iter().any(|p| p.len() != d) {
            return Err(KhlError::DimensionMismatch("points of different lengths".into()));
        }
        let mut pts: Vec<Point> = points.to_vec();
        pts.sort();
        pts.dedup();
        let p0 = pts[0].clone();
        let dirs: Vec<Point> = pts[1..].iter().map(|p| sub(p, &p0)).collect();
        let (basis, piv) = if dirs.is_empty() { (Vec::new(), Vec::new()) } else { rref(&dirs) };
        let m = piv.len();

        let mut equations = Vec::new();
        for f in (0..d).filter(|c| !piv.contains(c)) {
            let mut e = vec![Rational::zero(); d];
            e[f] = Rational::one();
            for (i, &pc) in piv.iter().enumerate() {
                e[pc] = -&basis[i][f];
            }
            let e = primitive(&e);
            let offset = dot(&e, &p0);
            equations.push(Facet { normal: e, offset });
        }

        if m == 0 {
            return Ok(Polytope { ambient: d, vertices: vec![p0], equations, facets: Vec::new() });
        }

        // polar cone in affine coordinates y = x[piv]: (b, c) with b + c·y ≥ 0
        let rows: Vec<Point> = pts
            .iter()
            .map(|p| {
                let mut r = vec![Rational::one()];
                r.extend(piv.iter().map(|&c| p[c].clone()));
                r
            })
            .collect();
        let rays = extreme_rays(&rows)?;
        let mut facets: Vec<Facet> = rays
            .into_iter()
            .map(|z| {
                let mut normal = vec![Rational::zero(); d];
                for (j, &c) in piv.iter().enumerate() {
                    normal[c] = -&z[j + 1];
                }
                Facet { normal, offset: z[0].clone() }
            })
            .collect();
        facets.sort();
        facets.dedup();

        let vertices: Vec<Point> = pts
            .iter()
            .filter(|p| {
                let tight: Vec<Point> = facets
                    .iter()
                    .filter(|f| f.tight_at(p))
                    .map(|f| piv.iter().map(|&c| f.normal[c].clone()).collect())
                    .collect();
                rank(&tight) == m
            })
            .cloned()
            .collect();
        let poly = Polytope { ambient: d, vertices, equations, facets };
        if !poly.cross_validate() {
            return Err(KhlError::Invalid("vertex and facet descriptions disagree".into()));
        }
        Ok(poly)
    }

    pub fn from_integer_points(points: &[Vec<i64>]) -> Result<Self> {
        let pts: Vec<Point> = points.iter().map(|p| p.iter().map(|&x| Rational::from_int(x)).collect()).collect();
        Self::convex_hull(&pts)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    /// Dimension of the affine hull.
    pub fn dim(&self) -> usize {
        self.ambient - self.equations.len()
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn equations(&self) -> &[Facet] {
        &self.equations
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        x.len() == self.ambient
            && self.equations.iter().all(|e| e.tight_at(x))
            && self.facets.iter().all(|f| f.satisfied_by(x))
    }

    pub fn contains_integer(&self, x: &[i64]) -> bool {
        let q: Point = x.iter().map(|&v| Rational::from_int(v)).collect();
        self.contains(&q)
    }

    /// Every vertex satisfies every inequality and is tight on at least
    /// `dim` facets; every facet is tight on at least `dim` vertices.
    pub fn cross_validate(&self) -> bool {
        let m = self.dim();
        if self.vertices.iter().any(|v| !self.contains(v)) {
            return false;
        }
        if m == 0 {
            return self.vertices.len() == 1 && self.facets.is_empty();
        }
        let vertex_ok = self.vertices.iter().all(|v| self.facets.iter().filter(|f| f.tight_at(v)).count() >= m);
        let facet_ok = self.facets.iter().all(|f| self.vertices.iter().filter(|v| f.tight_at(v)).count() >= m);
        vertex_ok && facet_ok
    }

    /// Same point set (compared through the vertex sets).
    pub fn same_set(&self, other: &Polytope) -> bool {
        self.vertices == other.vertices
    }

    /// Integer points, by bounding box and membership.
    pub fn lattice_points(&self) -> Vec<Vec<i64>> {
        let bounds: Vec<(i64, i64)> = (0..self.ambient)
            .map(|c| {
                let lo = self.vertices.iter().map(|v| v[c].ceil()).min().unwrap();
                let hi = self.vertices.iter().map(|v| v[c].floor()).max().unwrap();
                (lo.to_i64().unwrap_or(i64::MIN), hi.to_i64().unwrap_or(i64::MAX))
            })
            .collect();
        let mut out = Vec::new();
        if bounds.iter().any(|(lo, hi)| lo > hi) {
            return out;
        }
        let mut x: Vec<i64> = bounds.iter().map(|b| b.0).collect();
        loop {
            if self.contains_integer(&x) {
                out.push(x.clone());
            }
            let mut c = self.ambient;
            loop {
                if c == 0 {
                    return out;
                }
                c -= 1;
                if x[c] < bounds[c].1 {
                    x[c] += 1;
                    break;
                }
                x[c] = bounds[c].0;
            }
        }
    }

    pub fn to_json(&self) -> Value {
        let num = |q: &Rational| match q.to_i64() {
            Some(i) if q.is_integer() => json!(i),
            _ => json!(q.to_string()),
        };
        let vec = |v: &[Rational]| Value::Array(v.iter().map(num).collect());
        let half = |f: &Facet| json!({"normal": vec(&f.normal), "offset": num(&f.offset)});
        json!({
            "vertices": self.vertices.iter().map(|v| vec(v)).collect::<Vec<_>>(),
            "facets": self.facets.iter().map(half).collect::<Vec<_>>(),
            "equations": self.equations.iter().map(half).collect::<Vec<_>>(),
        })
    }
}

/// {a + b}: the hull of pairwise vertex sums.
pub fn minkowski_sum(a: &Polytope, b: &Polytope) -> Result<Polytope> {
    if a.ambient != b.ambient {
        return Err(KhlError::DimensionMismatch("Minkowski summands of different dimension".into()));
    }
    let mut sums = Vec::with_capacity(a.vertices.len() * b.vertices.len());
    for u in &a.vertices {
        for v in &b.vertices {
            sums.push(u.iter().zip(v).map(|(x, y)| x + y).collect());
        }
    }
    Polytope::convex_hull(&sums)
}

/// Sum over blocks of the hull of that block's columns of `mhat` with the
/// degree rows removed. Requires a positive toric verdict for (I, M̂).
pub fn newton_okounkov_polytope(
    mhat: &WeightingMatrix,
    blocks: &[usize],
    verdict: Option<&ToricVerdict>,
) -> Result<Polytope> {
    match verdict {
        Some(v) if v.is_toric => {}
        Some(_) => return Err(KhlError::Invalid("initial ideal is not toric".into())),
        None => return Err(KhlError::Invalid("no toric verdict supplied".into())),
    }
    if blocks.iter().sum::<usize>() != mhat.ncols() {
        return Err(KhlError::DimensionMismatch("blocks do not cover the columns".into()));
    }
    let s = blocks.len();
    if mhat.nrows() <= s {
        return Err(KhlError::DimensionMismatch("matrix has no rows beyond the degree rows".into()));
    }
    let body = mhat.strip_rows(s);
    let mut acc: Option<Polytope> = None;
    let mut start = 0;
    for &b in blocks {
        let cols: Vec<Vec<i64>> = (start..start + b).map(|j| body.iter().map(|r| r[j]).collect()).collect();
        start += b;
        let hull = Polytope::from_integer_points(&cols)?;
        acc = Some(match acc {
            None => hull,
            Some(p) => minkowski_sum(&p, &hull)?,
        });
    }
    acc.ok_or_else(|| KhlError::Invalid("no blocks".into()))
}
