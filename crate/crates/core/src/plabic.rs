//! Plabic graphs in a disk: faces from a rotation system, trips, face labels,
//! perfect orientations, flows, and the flow valuation with its plabic degrees.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use serde::Serialize;

use crate::error::{KhlError, Result};
use crate::ideals::subsets;
use crate::orders::{GroupOrder, WeightingMatrix};

/// Fixture for the Gr(2,5) graph with five boundary faces and two interior ones.
pub const FIG1: &str = include_str!("../fixtures/fig1.plabic");
/// Gr(3,6) graphs whose initial ideals are not toric.
pub const GR36_G1: &str = include_str!("../fixtures/gr36_g1.plabic");
pub const GR36_G2: &str = include_str!("../fixtures/gr36_g2.plabic");
/// A Gr(3,6) graph with toric initial ideal.
pub const GR36_TORIC: &str = include_str!("../fixtures/gr36_toric.plabic");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Color {
    Black,
    White,
    Boundary,
}

/// Turning rule for trips at internal vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TurnRule {
    /// Black: the edge after the incoming one in counterclockwise order.
    /// White: the edge before it.
    BlackNextWhitePrev,
    BlackPrevWhiteNext,
}

/// Edges carry an id; dart 2e goes a→b, dart 2e+1 goes b→a.
#[derive(Clone, Debug)]
pub struct PlabicGraph {
    pub k: usize,
    ids: Vec<String>,
    colors: Vec<Color>,
    /// boundary[r-1] is the vertex labelled r.
    boundary: Vec<usize>,
    /// (a, b, is_arc): arcs join consecutive boundary vertices along the disk.
    edges: Vec<(usize, usize, bool)>,
    /// Outgoing darts per vertex in counterclockwise order (arcs included).
    rot: Vec<Vec<usize>>,
    pos: Vec<usize>,
    given_orientation: Option<Vec<bool>>,
}

fn dart_tail(edges: &[(usize, usize, bool)], d: usize) -> usize {
    let (a, b, _) = edges[d / 2];
    if d.is_multiple_of(2) {
        a
    } else {
        b
    }
}

impl PlabicGraph {
    /// Parse the text fixture format: `k`, `vertex`, `boundary`, `rot`, and
    /// optional `orient <from> <to>` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut k = None;
        let mut ids: Vec<String> = Vec::new();
        let mut colors = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut boundary_ids: Option<Vec<String>> = None;
        let mut rot_lines: Vec<(String, Vec<String>)> = Vec::new();
        let mut orient: Vec<(String, String)> = Vec::new();
        for (ln, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let err = |m: &str| KhlError::Parse(format!("line {}: {}", ln + 1, m));
            let mut it = line.split_whitespace();
            match it.next().unwrap() {
                "k" => {
                    k = Some(it.next().and_then(|s| s.parse().ok()).ok_or_else(|| err("bad k"))?);
                }
                "vertex" => {
                    let id = it.next().ok_or_else(|| err("missing vertex id"))?.to_string();
                    let c = match it.next() {
                        Some("black") => Color::Black,
                        Some("white") => Color::White,
                        Some("boundary") => Color::Boundary,
                        _ => return Err(err("color must be black, white or boundary")),
                    };
                    if index.insert(id.clone(), ids.len()).is_some() {
                        return Err(err("duplicate vertex"));
                    }
                    ids.push(id);
                    colors.push(c);
                }
                "boundary" => boundary_ids = Some(it.map(String::from).collect()),
                "rot" => {
                    let head = it.next().ok_or_else(|| err("missing vertex in rot"))?;
                    let v = head.strip_suffix(':').ok_or_else(|| err("rot vertex must end with ':'"))?;
                    rot_lines.push((v.to_string(), it.map(String::from).collect()));
                }
                "orient" => {
                    let a = it.next().ok_or_else(|| err("orient needs two ids"))?;
                    let b = it.next().ok_or_else(|| err("orient needs two ids"))?;
                    orient.push((a.to_string(), b.to_string()));
                }
                other => return Err(err(&format!("unknown keyword {:?}", other))),
            }
        }
        let k = k.ok_or_else(|| KhlError::Parse("missing k".into()))?;
        let look = |s: &str| index.get(s).copied().ok_or_else(|| KhlError::Parse(format!("unknown vertex {:?}", s)));
        let boundary = boundary_ids
            .ok_or_else(|| KhlError::Parse("missing boundary line".into()))?
            .iter()
            .map(|s| look(s))
            .collect::<Result<Vec<_>>>()?;
        let mut rots: HashMap<usize, Vec<usize>> = HashMap::new();
        for (v, nb) in &rot_lines {
            let vi = look(v)?;
            let nbs = nb.iter().map(|s| look(s)).collect::<Result<Vec<_>>>()?;
            if rots.insert(vi, nbs).is_some() {
                return Err(KhlError::Parse(format!("two rot lines for {}", v)));
            }
        }
        let given = if orient.is_empty() {
            None
        } else {
            Some(orient.iter().map(|(a, b)| Ok((look(a)?, look(b)?))).collect::<Result<Vec<_>>>()?)
        };
        Self::build(k, ids, colors, boundary, rots, given)
    }

    fn build(
        k: usize,
        ids: Vec<String>,
        colors: Vec<Color>,
        boundary: Vec<usize>,
        mut rots: HashMap<usize, Vec<usize>>,
        given: Option<Vec<(usize, usize)>>,
    ) -> Result<Self> {
        let nv = ids.len();
        let n = boundary.len();
        let bad = |m: String| KhlError::Plabic(m);
        if n < 2 || k < 1 || k >= n {
            return Err(bad(format!("need 1 <= k < n, got k={}, n={}", k, n)));
        }
        let mut seen = vec![false; nv];
        for &b in &boundary {
            if colors[b] != Color::Boundary || seen[b] {
                return Err(bad(format!("{} listed wrongly on the boundary", ids[b])));
            }
            seen[b] = true;
        }
        if colors.iter().filter(|&&c| c == Color::Boundary).count() != n {
            return Err(bad("boundary vertex missing from the boundary line".into()));
        }
        // boundary rotations follow from the unique internal neighbour
        let mut inner_nb = vec![usize::MAX; nv];
        for (&v, nbs) in &rots {
            for &w in nbs {
                if colors[w] == Color::Boundary {
                    if colors[v] == Color::Boundary {
                        return Err(bad("edge between two boundary vertices".into()));
                    }
                    if inner_nb[w] != usize::MAX && inner_nb[w] != v {
                        return Err(bad(format!("boundary vertex {} has degree > 1", ids[w])));
                    }
                    inner_nb[w] = v;
                }
            }
        }
        for &b in &boundary {
            if inner_nb[b] == usize::MAX {
                return Err(bad(format!("boundary vertex {} is isolated", ids[b])));
            }
            match rots.get(&b) {
                Some(r) if r != &vec![inner_nb[b]] => {
                    return Err(bad(format!("rot for boundary vertex {} must list its one neighbour", ids[b])))
                }
                _ => {
                    rots.insert(b, vec![inner_nb[b]]);
                }
            }
        }
        for v in 0..nv {
            if !rots.contains_key(&v) {
                return Err(bad(format!("no rot line for {}", ids[v])));
            }
        }
        // graph edges from the rotation lists, checked for symmetry
        let mut edge_of: HashMap<(usize, usize), usize> = HashMap::new();
        let mut edges: Vec<(usize, usize, bool)> = Vec::new();
        for v in 0..nv {
            for &w in &rots[&v] {
                if w == v {
                    return Err(bad(format!("loop at {}", ids[v])));
                }
                let key = (v.min(w), v.max(w));
                if let std::collections::hash_map::Entry::Vacant(e) = edge_of.entry(key) {
                    let cnt_vw = rots[&v].iter().filter(|&&x| x == w).count();
                    let cnt_wv = rots[&w].iter().filter(|&&x| x == v).count();
                    if cnt_vw != 1 || cnt_wv != 1 {
                        return Err(bad(format!("edge {}-{} is not listed once at both ends", ids[v], ids[w])));
                    }
                    e.insert(edges.len());
                    edges.push((key.0, key.1, false));
                }
            }
        }
        let first_arc = edges.len();
        for r in 0..n {
            edges.push((boundary[r], boundary[(r + 1) % n], true));
        }
        let out_dart = |e: usize, from: usize, edges: &[(usize, usize, bool)]| {
            if edges[e].0 == from {
                2 * e
            } else {
                2 * e + 1
            }
        };
        let mut rot = vec![Vec::new(); nv];
        for v in 0..nv {
            if colors[v] == Color::Boundary {
                continue;
            }
            rot[v] = rots[&v].iter().map(|&w| out_dart(edge_of[&(v.min(w), v.max(w))], v, &edges)).collect();
        }
        for r in 0..n {
            let b = boundary[r];
            let w = inner_nb[b];
            let next_arc = 2 * (first_arc + r);
            let prev_arc = 2 * (first_arc + (r + n - 1) % n) + 1;
            rot[b] = vec![next_arc, out_dart(edge_of[&(b.min(w), b.max(w))], b, &edges), prev_arc];
        }
        let mut pos = vec![0; 2 * edges.len()];
        for v in 0..nv {
            for (i, &d) in rot[v].iter().enumerate() {
                pos[d] = i;
            }
        }
        let given_orientation = match given {
            None => None,
            Some(pairs) => {
                let mut dir = vec![None; first_arc];
                for (a, b) in pairs {
                    let e = *edge_of
                        .get(&(a.min(b), a.max(b)))
                        .ok_or_else(|| bad(format!("orient {} {} is not an edge", ids[a], ids[b])))?;
                    if dir[e].replace(edges[e].0 == a).is_some() {
                        return Err(bad(format!("edge {}-{} oriented twice", ids[a], ids[b])));
                    }
                }
                Some(
                    dir.into_iter()
                        .enumerate()
                        .map(|(e, d)| d.ok_or_else(|| bad(format!("edge {} has no orientation", e))))
                        .collect::<Result<Vec<bool>>>()?,
                )
            }
        };
        let g = PlabicGraph { k, ids, colors, boundary, edges, rot, pos, given_orientation };
        g.check_connected()?;
        Ok(g)
    }

    fn check_connected(&self) -> Result<()> {
        let mut seen = vec![false; self.ids.len()];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for &d in &self.rot[v] {
                let w = self.head(d);
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        if seen.iter().all(|&s| s) {
            Ok(())
        } else {
            Err(KhlError::Plabic("graph is not connected".into()))
        }
    }

    pub fn n(&self) -> usize {
        self.boundary.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.ids.len()
    }

    pub fn id(&self, v: usize) -> &str {
        &self.ids[v]
    }

    pub fn color(&self, v: usize) -> Color {
        self.colors[v]
    }

    /// Vertex carrying boundary label r (1-based).
    pub fn boundary_vertex(&self, r: usize) -> usize {
        self.boundary[r - 1]
    }

    /// Boundary label of a vertex, if it is a boundary vertex.
    pub fn boundary_label(&self, v: usize) -> Option<usize> {
        self.boundary.iter().position(|&b| b == v).map(|i| i + 1)
    }

    /// Number of graph edges (boundary arcs excluded).
    pub fn num_edges(&self) -> usize {
        self.edges.iter().filter(|e| !e.2).count()
    }

    fn tail(&self, d: usize) -> usize {
        dart_tail(&self.edges, d)
    }

    fn head(&self, d: usize) -> usize {
        self.tail(d ^ 1)
    }

    fn is_arc(&self, d: usize) -> bool {
        self.edges[d / 2].2
    }

    fn rot_step(&self, d: usize, forward: bool) -> usize {
        let v = self.tail(d);
        let r = &self.rot[v];
        let i = self.pos[d];
        if forward {
            r[(i + 1) % r.len()]
        } else {
            r[(i + r.len() - 1) % r.len()]
        }
    }

    /// The next dart along the face on the left of `d`.
    fn face_next(&self, d: usize) -> usize {
        self.rot_step(d ^ 1, false)
    }

    /// Same recolored graph with one internal vertex's color flipped.
    pub fn recolored(&self, v: usize) -> Result<Self> {
        let mut g = self.clone();
        g.colors[v] = match g.colors[v] {
            Color::Black => Color::White,
            Color::White => Color::Black,
            Color::Boundary => return Err(KhlError::Plabic("cannot recolor a boundary vertex".into())),
        };
        g.given_orientation = None;
        Ok(g)
    }

}

/// Faces of the disk embedding; the outer region is excluded from `faces`.
#[derive(Clone, Debug)]
pub struct Faces {
    /// Face id of the region to the left of each dart.
    pub dart_face: Vec<usize>,
    /// Dart cycles per face id.
    pub cycles: Vec<Vec<usize>>,
    pub outer: usize,
    /// boundary_face[r-1] is the face between boundary vertices r and r+1.
    pub boundary_face: Vec<usize>,
    pub interior: Vec<usize>,
}

impl Faces {
    pub fn num_faces(&self) -> usize {
        self.cycles.len() - 1
    }

    pub fn is_interior(&self, f: usize) -> bool {
        self.interior.contains(&f)
    }
}

pub fn trace_faces(g: &PlabicGraph) -> Result<Faces> {
    let nd = 2 * g.edges.len();
    let mut dart_face = vec![usize::MAX; nd];
    let mut cycles = Vec::new();
    for start in 0..nd {
        if dart_face[start] != usize::MAX {
            continue;
        }
        let id = cycles.len();
        let mut cyc = Vec::new();
        let mut d = start;
        loop {
            if dart_face[d] != usize::MAX {
                return Err(KhlError::Plabic("face trace does not close".into()));
            }
            dart_face[d] = id;
            cyc.push(d);
            d = g.face_next(d);
            if d == start {
                break;
            }
            if cyc.len() > nd {
                return Err(KhlError::Plabic("face trace does not close".into()));
            }
        }
        cycles.push(cyc);
    }
    let n = g.n();
    let first_arc = g.edges.len() - n;
    let outer = dart_face[2 * first_arc + 1];
    for r in 0..n {
        if dart_face[2 * (first_arc + r) + 1] != outer {
            return Err(KhlError::Plabic("boundary arcs do not bound one outer region".into()));
        }
    }
    let boundary_face: Vec<usize> = (0..n).map(|r| dart_face[2 * (first_arc + r)]).collect();
    if boundary_face.iter().collect::<BTreeSet<_>>().len() != n || boundary_face.contains(&outer) {
        return Err(KhlError::Plabic("boundary faces are not distinct".into()));
    }
    let interior: Vec<usize> = (0..cycles.len()).filter(|f| *f != outer && !boundary_face.contains(f)).collect();
    let (v, e, f) = (g.ids.len() as i64, g.edges.len() as i64, cycles.len() as i64);
    if v - e + f != 2 {
        return Err(KhlError::Plabic(format!("Euler characteristic {} instead of 2", v - e + f)));
    }
    Ok(Faces { dart_face, cycles, outer, boundary_face, interior })
}

/// Darts of the trip leaving boundary vertex r.
pub fn trip(g: &PlabicGraph, r: usize, rule: TurnRule) -> Result<Vec<usize>> {
    let b = g.boundary_vertex(r);
    let mut d = g.rot[b][1];
    let mut path = vec![d];
    let limit = 2 * g.edges.len();
    loop {
        let v = g.head(d);
        if g.colors[v] == Color::Boundary {
            return Ok(path);
        }
        let back = d ^ 1;
        let fwd = match (g.colors[v], rule) {
            (Color::Black, TurnRule::BlackNextWhitePrev) | (Color::White, TurnRule::BlackPrevWhiteNext) => true,
            _ => false,
        };
        d = g.rot_step(back, fwd);
        path.push(d);
        if path.len() > limit {
            return Err(KhlError::Plabic(format!("trip from {} does not reach the boundary", r)));
        }
    }
}

/// The rule under which trips realise π(i) = i + k on counterclockwise
/// rotation systems.
pub const TRIP_RULE: TurnRule = TurnRule::BlackPrevWhiteNext;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TripPermutation {
    /// perm[i-1] = π(i).
    pub perm: Vec<usize>,
    /// π(i) = i + k mod n.
    pub is_top_cell: bool,
}

pub fn trip_permutation(g: &PlabicGraph) -> Result<TripPermutation> {
    let n = g.n();
    let mut perm = Vec::with_capacity(n);
    for r in 1..=n {
        let t = trip(g, r, TRIP_RULE)?;
        let end = g.head(*t.last().unwrap());
        perm.push(g.boundary_label(end).unwrap());
    }
    let is_top_cell = perm.iter().enumerate().all(|(i, &p)| p == (i + g.k) % n + 1);
    Ok(TripPermutation { perm, is_top_cell })
}

/// Faces to the left of a boundary-to-boundary dart path.
pub fn left_region(g: &PlabicGraph, faces: &Faces, path: &[usize]) -> BTreeSet<usize> {
    let blocked: BTreeSet<usize> = path.iter().map(|d| d / 2).collect();
    let mut region = BTreeSet::new();
    let mut queue = VecDeque::new();
    for &d in path {
        let f = faces.dart_face[d];
        if region.insert(f) {
            queue.push_back(f);
        }
    }
    while let Some(f) = queue.pop_front() {
        for &d in &faces.cycles[f] {
            if blocked.contains(&(d / 2)) || g.is_arc(d) {
                continue;
            }
            let h = faces.dart_face[d ^ 1];
            if h != faces.outer && region.insert(h) {
                queue.push_back(h);
            }
        }
    }
    region
}

#[derive(Clone, Debug, Serialize)]
pub struct FaceLabeling {
    /// Label of each face id (outer face gets an empty label).
    pub labels: Vec<Vec<usize>>,
    /// Coordinate order: F_1..F_n then interior faces by label.
    pub order: Vec<usize>,
    /// Position of F_∅ = F_k in `order`.
    pub empty_index: usize,
    pub num_boundary: usize,
}

impl FaceLabeling {
    pub fn label_of(&self, f: usize) -> &[usize] {
        &self.labels[f]
    }

    /// Face ids in valuation order, F_∅ omitted.
    pub fn valuation_faces(&self) -> Vec<usize> {
        self.order.iter().enumerate().filter(|(i, _)| *i != self.empty_index).map(|(_, &f)| f).collect()
    }

    pub fn coordinate_names(&self, all: bool) -> Vec<String> {
        self.order
            .iter()
            .enumerate()
            .filter(|(i, _)| all || *i != self.empty_index)
            .map(|(i, &f)| {
                if i < self.num_boundary {
                    format!("F{}", i + 1)
                } else {
                    format!("F{}", self.labels[f].iter().map(|x| x.to_string()).collect::<String>())
                }
            })
            .collect()
    }
}

/// The mirror of a turning rule; a trip under one rule, reversed, is a trip
/// under the other.
pub fn mirror(rule: TurnRule) -> TurnRule {
    match rule {
        TurnRule::BlackNextWhitePrev => TurnRule::BlackPrevWhiteNext,
        TurnRule::BlackPrevWhiteNext => TurnRule::BlackNextWhitePrev,
    }
}

/// Label i goes on every face left of the trip between i and π⁻¹(i),
/// walked from i (that is, the reversed trip ending at i).
pub fn face_labels(g: &PlabicGraph, faces: &Faces) -> Result<FaceLabeling> {
    let tp = trip_permutation(g)?;
    if !tp.is_top_cell {
        return Err(KhlError::Plabic(format!("trip permutation {:?} is not i -> i+k", tp.perm)));
    }
    let mut labels = vec![Vec::new(); faces.cycles.len()];
    for r in 1..=g.n() {
        let t = trip(g, r, mirror(TRIP_RULE))?;
        for f in left_region(g, faces, &t) {
            labels[f].push(r);
        }
    }
    let mut seen = BTreeSet::new();
    for f in 0..labels.len() {
        if f == faces.outer {
            continue;
        }
        if labels[f].len() != g.k {
            return Err(KhlError::Plabic(format!("face label {:?} does not have {} elements", labels[f], g.k)));
        }
        if !seen.insert(labels[f].clone()) {
            return Err(KhlError::Plabic(format!("face label {:?} repeated", labels[f])));
        }
    }
    let mut interior = faces.interior.clone();
    interior.sort_by(|a, b| labels[*a].cmp(&labels[*b]));
    let mut order = faces.boundary_face.clone();
    order.extend(interior);
    Ok(FaceLabeling { labels, order, empty_index: g.k - 1, num_boundary: g.n() })
}

/// Per graph edge (in edge-id order): true if directed from the first
/// endpoint to the second.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerfectOrientation {
    forward: Vec<bool>,
}

impl PerfectOrientation {
    fn out_darts(&self, g: &PlabicGraph, v: usize) -> Vec<usize> {
        g.rot[v].iter().copied().filter(|&d| !g.is_arc(d) && self.forward[d / 2] == (d % 2 == 0)).collect()
    }

    /// Directed edges as (from, to) vertex id pairs.
    pub fn arrows(&self, g: &PlabicGraph) -> Vec<(String, String)> {
        self.forward
            .iter()
            .enumerate()
            .map(|(e, &f)| {
                let (a, b, _) = g.edges[e];
                let (x, y) = if f { (a, b) } else { (b, a) };
                (g.ids[x].clone(), g.ids[y].clone())
            })
            .collect()
    }

    pub fn sources(&self, g: &PlabicGraph) -> Vec<usize> {
        (1..=g.n()).filter(|&r| !self.out_darts(g, g.boundary_vertex(r)).is_empty()).collect()
    }
}

fn check_orientation(g: &PlabicGraph, forward: &[bool]) -> Result<()> {
    let o = PerfectOrientation { forward: forward.to_vec() };
    for v in 0..g.ids.len() {
        let deg = g.rot[v].iter().filter(|&&d| !g.is_arc(d)).count();
        let out = o.out_darts(g, v).len();
        let ok = match g.colors[v] {
            Color::White => deg - out == 1,
            Color::Black => out == 1,
            Color::Boundary => {
                let r = g.boundary_label(v).unwrap();
                (r <= g.k) == (out == 1)
            }
        };
        if !ok {
            return Err(KhlError::Plabic(format!("orientation violated at {}", g.ids[v])));
        }
    }
    Ok(())
}

/// The orientation shipped with the fixture if any, otherwise the first
/// perfect orientation with source set [k] in edge-id order.
pub fn perfect_orientation(g: &PlabicGraph) -> Result<PerfectOrientation> {
    if let Some(f) = &g.given_orientation {
        check_orientation(g, f)?;
        return Ok(PerfectOrientation { forward: f.clone() });
    }
    search_orientation(g)
}

/// Backtracking search ignoring any orientation in the fixture.
pub fn search_orientation(g: &PlabicGraph) -> Result<PerfectOrientation> {
    perfect_orientations(g, 1)?
        .pop()
        .ok_or_else(|| KhlError::Plabic(format!("no perfect orientation with source set [1..{}]", g.k)))
}

/// Up to `limit` perfect orientations with source set [k], in search order.
pub fn perfect_orientations(g: &PlabicGraph, limit: usize) -> Result<Vec<PerfectOrientation>> {
    let ne = g.num_edges();
    let nv = g.ids.len();
    let deg: Vec<usize> = (0..nv).map(|v| g.rot[v].iter().filter(|&&d| !g.is_arc(d)).count()).collect();
    // required out-degree of each vertex
    let need_out: Vec<usize> = (0..nv)
        .map(|v| match g.colors[v] {
            Color::Black => 1,
            Color::White => deg[v] - 1,
            Color::Boundary => usize::from(g.boundary_label(v).unwrap() <= g.k),
        })
        .collect();
    struct Search<'a> {
        g: &'a PlabicGraph,
        need: Vec<usize>,
        out: Vec<usize>,
        left: Vec<usize>,
        forward: Vec<bool>,
        found: Vec<Vec<bool>>,
        limit: usize,
    }
    fn go(s: &mut Search, e: usize) {
        if s.found.len() >= s.limit {
            return;
        }
        if e == s.forward.len() {
            s.found.push(s.forward.clone());
            return;
        }
        let (a, b, _) = s.g.edges[e];
        for dir in [true, false] {
            let (x, y) = if dir { (a, b) } else { (b, a) };
            s.out[x] += 1;
            s.left[a] -= 1;
            s.left[b] -= 1;
            if [x, y].iter().all(|&v| s.out[v] <= s.need[v] && s.out[v] + s.left[v] >= s.need[v]) {
                s.forward[e] = dir;
                go(s, e + 1);
            }
            s.out[x] -= 1;
            s.left[a] += 1;
            s.left[b] += 1;
        }
    }
    let mut s = Search {
        g,
        need: need_out,
        out: vec![0; nv],
        left: deg,
        forward: vec![false; ne],
        found: Vec::new(),
        limit,
    };
    go(&mut s, 0);
    s.found
        .into_iter()
        .map(|f| {
            check_orientation(g, &f)?;
            Ok(PerfectOrientation { forward: f })
        })
        .collect()
}

/// Vertex-disjoint directed paths, one per non-lazy source.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Flow {
    /// Each path as darts; empty for the all-lazy flow.
    #[serde(skip)]
    pub darts: Vec<Vec<usize>>,
    /// Each path as vertex ids from source to sink.
    pub paths: Vec<Vec<String>>,
}

/// All J-flows for the orientation.
pub fn flows(g: &PlabicGraph, o: &PerfectOrientation, j: &[usize]) -> Result<Vec<Flow>> {
    let k = g.k;
    if j.len() != k || j.iter().any(|&x| x < 1 || x > g.n()) || j.windows(2).any(|w| w[0] >= w[1]) {
        return Err(KhlError::Invalid(format!("{:?} is not a sorted {}-subset of [{}]", j, k, g.n())));
    }
    let sources: Vec<usize> = (1..=k).filter(|s| !j.contains(s)).collect();
    let sinks: BTreeSet<usize> = j.iter().copied().filter(|&x| x > k).map(|x| g.boundary_vertex(x)).collect();
    let mut used = vec![false; g.ids.len()];
    for &x in j.iter().filter(|&&x| x <= k) {
        used[g.boundary_vertex(x)] = true;
    }
    let mut out = Vec::new();
    let mut acc: Vec<Vec<usize>> = Vec::new();
    struct Ctx<'a> {
        g: &'a PlabicGraph,
        o: &'a PerfectOrientation,
        sources: Vec<usize>,
        sinks: BTreeSet<usize>,
    }
    fn route(ctx: &Ctx, si: usize, used: &mut Vec<bool>, acc: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if si == ctx.sources.len() {
            out.push(acc.clone());
            return;
        }
        let s = ctx.g.boundary_vertex(ctx.sources[si]);
        used[s] = true;
        let mut path = Vec::new();
        extend(ctx, s, si, used, &mut path, acc, out);
        used[s] = false;
    }
    fn extend(
        ctx: &Ctx,
        v: usize,
        si: usize,
        used: &mut Vec<bool>,
        path: &mut Vec<usize>,
        acc: &mut Vec<Vec<usize>>,
        out: &mut Vec<Vec<Vec<usize>>>,
    ) {
        for d in ctx.o.out_darts(ctx.g, v) {
            let w = ctx.g.head(d);
            if used[w] {
                continue;
            }
            if ctx.g.colors[w] == Color::Boundary {
                if ctx.sinks.contains(&w) {
                    used[w] = true;
                    path.push(d);
                    acc.push(path.clone());
                    route(ctx, si + 1, used, acc, out);
                    acc.pop();
                    path.pop();
                    used[w] = false;
                }
                continue;
            }
            used[w] = true;
            path.push(d);
            extend(ctx, w, si, used, path, acc, out);
            path.pop();
            used[w] = false;
        }
    }
    let ctx = Ctx { g, o, sources, sinks };
    let mut raw = Vec::new();
    route(&ctx, 0, &mut used, &mut acc, &mut raw);
    for darts in raw {
        let paths = darts
            .iter()
            .map(|p| {
                let mut vs = vec![g.ids[g.tail(p[0])].clone()];
                vs.extend(p.iter().map(|&d| g.ids[g.head(d)].clone()));
                vs
            })
            .collect();
        out.push(Flow { darts, paths });
    }
    Ok(out)
}

/// Weight over all faces in labeling order (F_∅ included) and degree.
pub fn flow_weight_degree(g: &PlabicGraph, faces: &Faces, labels: &FaceLabeling, f: &Flow) -> (Vec<i64>, i64) {
    let slot: HashMap<usize, usize> = labels.order.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    let mut w = vec![0i64; labels.order.len()];
    let mut deg = 0;
    for p in &f.darts {
        for face in left_region(g, faces, p) {
            w[slot[&face]] += 1;
            if faces.is_interior(face) {
                deg += 1;
            }
        }
    }
    (w, deg)
}

/// Everything derived from a fixture that the valuation needs.
#[derive(Clone, Debug)]
pub struct PlabicData {
    pub graph: PlabicGraph,
    pub faces: Faces,
    pub labels: FaceLabeling,
    pub orientation: PerfectOrientation,
}

impl PlabicData {
    pub fn new(graph: PlabicGraph) -> Result<Self> {
        let faces = trace_faces(&graph)?;
        let d = graph.k * (graph.n() - graph.k) + 1;
        if faces.num_faces() != d {
            return Err(KhlError::Plabic(format!("{} faces, expected k(n-k)+1 = {}", faces.num_faces(), d)));
        }
        let labels = face_labels(&graph, &faces)?;
        let orientation = perfect_orientation(&graph)?;
        Ok(PlabicData { graph, faces, labels, orientation })
    }

    pub fn from_text(text: &str) -> Result<Self> {
        Self::new(PlabicGraph::parse(text)?)
    }

    /// Same graph and labels with another orientation.
    pub fn with_orientation(&self, orientation: PerfectOrientation) -> Self {
        PlabicData { orientation, ..self.clone() }
    }

    pub fn subsets(&self) -> Vec<Vec<usize>> {
        subsets(self.graph.n(), self.graph.k)
    }

    /// Minimal-degree flow for J with its full weight (F_∅ kept) and degree.
    pub fn minimal_flow(&self, j: &[usize]) -> Result<(Flow, Vec<i64>, i64)> {
        let fl = flows(&self.graph, &self.orientation, j)?;
        let mut scored: Vec<(Flow, Vec<i64>, i64)> = fl
            .into_iter()
            .map(|f| {
                let (w, d) = flow_weight_degree(&self.graph, &self.faces, &self.labels, &f);
                (f, w, d)
            })
            .collect();
        scored.sort_by_key(|x| x.2);
        match scored.len() {
            0 => Err(KhlError::NoValue(format!("no flow for {:?}", j))),
            1 => Ok(scored.pop().unwrap()),
            _ if scored[0].2 == scored[1].2 => {
                Err(KhlError::Plabic(format!("two flows of minimal degree {} for {:?}", scored[0].2, j)))
            }
            _ => Ok(scored.swap_remove(0)),
        }
    }

    /// Weight of the minimal flow over all faces, F_∅ included.
    pub fn full_row(&self, j: &[usize]) -> Result<Vec<i64>> {
        Ok(self.minimal_flow(j)?.1)
    }

    /// v_G(p̄_J) in ℤ^{k(n-k)}.
    pub fn valuation(&self, j: &[usize]) -> Result<Vec<i64>> {
        let mut w = self.full_row(j)?;
        w.remove(self.labels.empty_index);
        Ok(w)
    }

    pub fn degree(&self, j: &[usize]) -> Result<i64> {
        Ok(self.minimal_flow(j)?.2)
    }

    /// Plabic degrees in lexicographic J order.
    pub fn weight_vector(&self) -> Result<Vec<i64>> {
        self.subsets().iter().map(|j| self.degree(j)).collect()
    }

    /// M_G: columns v_G(p̄_J), lexicographic order on values.
    pub fn matrix(&self) -> Result<WeightingMatrix> {
        let cols = self.subsets().iter().map(|j| self.valuation(j)).collect::<Result<Vec<_>>>()?;
        WeightingMatrix::from_columns(&cols, GroupOrder::Lex)
    }

    /// M_G with the row (1,…,1) prepended.
    pub fn hat_matrix(&self) -> Result<WeightingMatrix> {
        let n = self.subsets().len();
        self.matrix()?.hat(&[n])
    }

    /// Row of M_G for boundary face F_r (r ≠ k), from flows.
    pub fn boundary_row(&self, r: usize) -> Result<Vec<i64>> {
        if r == self.graph.k || r < 1 || r > self.graph.n() {
            return Err(KhlError::Invalid(format!("no boundary row for r = {}", r)));
        }
        self.subsets().iter().map(|j| Ok(self.full_row(j)?[r - 1])).collect()
    }

    /// Label per coordinate, in full coordinate order.
    pub fn coordinate_labels(&self) -> Vec<Vec<usize>> {
        self.labels.order.iter().map(|&f| self.labels.labels[f].clone()).collect()
    }

    pub fn table(&self) -> Result<BTreeMap<String, Vec<i64>>> {
        self.subsets()
            .iter()
            .map(|j| Ok((j.iter().map(|x| x.to_string()).collect(), self.full_row(j)?)))
            .collect()
    }
}

/// Cyclic interval convention for [`boundary_column_formula_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Interval {
    /// [j_l, i_{k-l+1}): agrees with the flow computation.
    HalfOpen,
    /// [j_l, i_{k-l+1}] with both endpoints.
    Closed,
}

/// #{ l > s : r ∈ [j_l, i_{k-l+1}) } with cyclic intervals, where
/// J = {j_1 < … < j_s ≤ k < j_{s+1} < … < j_k} and [k] ∖ J = {i_1 < …}.
pub fn boundary_column_formula(r: usize, j: &[usize], k: usize, n: usize) -> Result<i64> {
    boundary_column_formula_with(r, j, k, n, Interval::HalfOpen)
}

pub fn boundary_column_formula_with(r: usize, j: &[usize], k: usize, n: usize, iv: Interval) -> Result<i64> {
    if j.len() != k || j.iter().any(|&x| x < 1 || x > n) || j.windows(2).any(|w| w[0] >= w[1]) {
        return Err(KhlError::Invalid(format!("{:?} is not a sorted {}-subset of [{}]", j, k, n)));
    }
    if r < 1 || r > n || r == k {
        return Err(KhlError::Invalid(format!("r = {} must lie in [n] minus k", r)));
    }
    let s = j.iter().filter(|&&x| x <= k).count();
    let i: Vec<usize> = (1..=k).filter(|x| !j.contains(x)).collect();
    let in_cyclic = |a: usize, b: usize, x: usize| {
        let len = (b + n - a) % n;
        let off = (x + n - a) % n;
        match iv {
            Interval::HalfOpen => off < len,
            Interval::Closed => off <= len,
        }
    };
    Ok((s + 1..=k).filter(|&l| in_cyclic(j[l - 1], i[k - l], r)).count() as i64)
}
