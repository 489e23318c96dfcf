//! The incompatibility graph `G_{A,b}`, the graph isomorphism game, and
//! isomorphism search between game graphs.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::SynchronousGame;
use crate::system::LinearSystem;
use crate::zp::ZpVector;

/// A vertex `(i, x)` with `x` in `S_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Vertex {
    /// 1-based row.
    pub row: usize,
    pub x: ZpVector,
}

impl Vertex {
    pub fn label(&self) -> String {
        format!("{}:{}", self.row, self.x)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub system_digest: String,
    /// Whether the graph was built for `b = 0`.
    pub homogeneous: bool,
}

/// How two vertices of one graph relate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relationship {
    Equal,
    Adjacent,
    Distinct,
}

/// `G_{A,b}`: vertices `(i, x)` for `x` in `S_i`, with `(i,x) ~ (j,y)` iff
/// some `k` in `V_i` and `V_j` has `x_k != y_k`.
#[derive(Debug, Clone)]
pub struct GameGraph {
    vertices: Vec<Vertex>,
    adjacency: Vec<bool>,
    index: HashMap<(usize, ZpVector), usize>,
    provenance: Provenance,
}

/// Builds `G_{A,b}`, or `G_{A,0}` when `homogeneous` is set. Vertices are
/// ordered by row, then by the enumeration order of `S_i`.
pub fn build_game_graph(sys: &LinearSystem, homogeneous: bool, cap: u64) -> Result<GameGraph> {
    let digest = sys.digest();
    let owned;
    let sys = if homogeneous {
        owned = sys.homogeneous();
        &owned
    } else {
        sys
    };
    let mut vertices = Vec::new();
    for row in sys.rows(cap)? {
        for x in row.solutions {
            vertices.push(Vertex { row: row.index, x });
        }
    }
    let n = vertices.len();
    let mut adjacency = vec![false; n * n];
    for a in 0..n {
        for b in a + 1..n {
            let (va, vb) = (&vertices[a], &vertices[b]);
            let edge = !sys.agree_on_shared(va.row, vb.row, &va.x, &vb.x);
            adjacency[a * n + b] = edge;
            adjacency[b * n + a] = edge;
        }
    }
    let index = vertices.iter().enumerate().map(|(k, v)| ((v.row, v.x.clone()), k)).collect();
    Ok(GameGraph { vertices, adjacency, index, provenance: Provenance { system_digest: digest, homogeneous } })
}

impl GameGraph {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex(&self, k: usize) -> &Vertex {
        &self.vertices[k]
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn index_of(&self, row: usize, x: &ZpVector) -> Option<usize> {
        self.index.get(&(row, x.clone())).copied()
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adjacency[a * self.len() + b]
    }

    pub fn relation(&self, a: usize, b: usize) -> Relationship {
        if a == b {
            Relationship::Equal
        } else if self.adjacent(a, b) {
            Relationship::Adjacent
        } else {
            Relationship::Distinct
        }
    }

    pub fn neighbors(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        let n = self.len();
        (0..n).filter(move |&b| self.adjacency[a * n + b])
    }

    pub fn degree(&self, a: usize) -> usize {
        self.neighbors(a).count()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().filter(|&&e| e).count() / 2
    }

    /// Graphviz DOT with nodes labelled `i:x`, in vertex order.
    pub fn export_dot(&self, name: &str) -> String {
        let mut s = format!("graph {name} {{\n");
        for (k, v) in self.vertices.iter().enumerate() {
            let _ = writeln!(s, "  n{k} [label=\"{}\"];", v.label());
        }
        for a in 0..self.len() {
            for b in a + 1..self.len() {
                if self.adjacent(a, b) {
                    let _ = writeln!(s, "  n{a} -- n{b};");
                }
            }
        }
        s.push_str("}\n");
        s
    }

    /// `{ "vertices": [{row, x}], "edges": [[a, b]] }`, 0-based vertex ids.
    pub fn adjacency_json(&self) -> serde_json::Value {
        let vertices: Vec<_> =
            self.vertices.iter().map(|v| serde_json::json!({ "row": v.row, "x": v.x.entries() })).collect();
        let mut edges = Vec::new();
        for a in 0..self.len() {
            for b in a + 1..self.len() {
                if self.adjacent(a, b) {
                    edges.push([a, b]);
                }
            }
        }
        serde_json::json!({
            "provenance": self.provenance,
            "vertices": vertices,
            "edges": edges,
        })
    }
}

/// Which graph an Iso-game vertex belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    G,
    H,
}

/// The graph isomorphism game `Iso(G, H)`.
///
/// Inputs and outputs are `V(G)` followed by `V(H)`. A round wins iff each
/// player answers with a vertex of the other graph than their question,
/// and the two `G`-vertices among `{v, x}`, `{w, y}` stand in the same
/// relationship (equal, adjacent, distinct non-adjacent) as the two
/// `H`-vertices.
#[derive(Debug, Clone, Copy)]
pub struct IsoGame<'a> {
    g: &'a GameGraph,
    h: &'a GameGraph,
}

pub fn build_iso_game<'a>(g: &'a GameGraph, h: &'a GameGraph) -> IsoGame<'a> {
    IsoGame { g, h }
}

impl IsoGame<'_> {
    pub fn side(&self, v: usize) -> (Side, usize) {
        if v < self.g.len() {
            (Side::G, v)
        } else {
            (Side::H, v - self.g.len())
        }
    }

    /// Splits a question/answer pair into its `(G, H)` vertices, or `None`
    /// when both lie in the same graph.
    fn split(&self, q: usize, a: usize) -> Option<(usize, usize)> {
        match (self.side(q), self.side(a)) {
            ((Side::G, g), (Side::H, h)) | ((Side::H, h), (Side::G, g)) => Some((g, h)),
            _ => None,
        }
    }
}

impl SynchronousGame for IsoGame<'_> {
    fn num_inputs(&self) -> usize {
        self.g.len() + self.h.len()
    }

    fn num_outputs(&self) -> usize {
        self.num_inputs()
    }

    fn rule(&self, x: usize, y: usize, v: usize, w: usize) -> bool {
        let (Some((g1, h1)), Some((g2, h2))) = (self.split(v, x), self.split(w, y)) else {
            return false;
        };
        self.g.relation(g1, g2) == self.h.relation(h1, h2)
    }

    fn input_label(&self, v: usize) -> String {
        match self.side(v) {
            (Side::G, k) => format!("G:{}", self.g.vertex(k).label()),
            (Side::H, k) => format!("H:{}", self.h.vertex(k).label()),
        }
    }

    fn output_label(&self, x: usize) -> String {
        self.input_label(x)
    }

    fn candidate_outputs(&self, v: usize) -> Vec<usize> {
        match self.side(v) {
            (Side::G, _) => (self.g.len()..self.num_outputs()).collect(),
            (Side::H, _) => (0..self.g.len()).collect(),
        }
    }
}

/// A bijection `V(G) -> V(H)` with its inverse.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexBijection {
    pub forward: Vec<usize>,
    pub inverse: Vec<usize>,
}

impl VertexBijection {
    pub fn from_forward(forward: Vec<usize>) -> Option<Self> {
        let mut inverse = vec![usize::MAX; forward.len()];
        for (a, &b) in forward.iter().enumerate() {
            if b >= forward.len() || inverse[b] != usize::MAX {
                return None;
            }
            inverse[b] = a;
        }
        Some(VertexBijection { forward, inverse })
    }

    pub fn identity(n: usize) -> Self {
        VertexBijection { forward: (0..n).collect(), inverse: (0..n).collect() }
    }

    pub fn is_identity(&self) -> bool {
        self.forward.iter().enumerate().all(|(a, &b)| a == b)
    }
}

/// Whether `bij` is a graph isomorphism `G -> H`.
pub fn verify_isomorphism(g: &GameGraph, h: &GameGraph, bij: &VertexBijection) -> bool {
    let n = g.len();
    if h.len() != n || bij.forward.len() != n || bij.inverse.len() != n {
        return false;
    }
    if (0..n).any(|a| bij.inverse[bij.forward[a]] != a) {
        return false;
    }
    (0..n).all(|a| (a + 1..n).all(|b| g.adjacent(a, b) == h.adjacent(bij.forward[a], bij.forward[b])))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct IsoSearchStats {
    /// Individualization branches tried.
    pub nodes: u64,
    /// Color refinement passes run.
    pub refinements: u64,
    /// Whether the search space was fully explored (always true on `None`).
    pub exhausted: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsoSearch {
    pub bijection: Option<VertexBijection>,
    pub stats: IsoSearchStats,
}

/// Isomorphism search by individualization and color refinement.
///
/// Both graphs are colored jointly with 1-dimensional Weisfeiler-Leman
/// refinement, so color classes are comparable across them; a class with
/// different sizes on the two sides prunes the branch. Branching
/// individualizes the lowest `G`-vertex of the smallest non-trivial class
/// against each `H`-vertex of that class in index order.
pub fn find_isomorphism(g: &GameGraph, h: &GameGraph, budget: u64) -> Result<IsoSearch> {
    let mut stats = IsoSearchStats::default();
    if g.len() != h.len() {
        stats.exhausted = true;
        return Ok(IsoSearch { bijection: None, stats });
    }
    let mut search = Refiner { g, h, budget, stats };
    let colors = search.initial_colors();
    let found = search.search(colors)?;
    search.stats.exhausted = found.is_none();
    Ok(IsoSearch { bijection: found, stats: search.stats })
}

struct Refiner<'a> {
    g: &'a GameGraph,
    h: &'a GameGraph,
    budget: u64,
    stats: IsoSearchStats,
}

impl Refiner<'_> {
    fn total(&self) -> usize {
        self.g.len() + self.h.len()
    }

    fn neighbors(&self, v: usize) -> Vec<usize> {
        let ng = self.g.len();
        if v < ng {
            self.g.neighbors(v).collect()
        } else {
            self.h.neighbors(v - ng).map(|u| u + ng).collect()
        }
    }

    fn initial_colors(&self) -> Vec<u32> {
        vec![0; self.total()]
    }

    /// Refines to the coarsest equitable coloring. Returns `false` if some
    /// class has unequal sizes in `G` and `H`.
    fn refine(&mut self, colors: &mut [u32]) -> bool {
        let n = self.total();
        let adj: Vec<Vec<usize>> = (0..n).map(|v| self.neighbors(v)).collect();
        let mut classes = count_classes(colors);
        loop {
            self.stats.refinements += 1;
            let signatures: Vec<(u32, Vec<u32>)> = (0..n)
                .map(|v| {
                    let mut nc: Vec<u32> = adj[v].iter().map(|&u| colors[u]).collect();
                    nc.sort_unstable();
                    (colors[v], nc)
                })
                .collect();
            let mut distinct: Vec<&(u32, Vec<u32>)> = signatures.iter().collect();
            distinct.sort();
            distinct.dedup();
            let rank: HashMap<&(u32, Vec<u32>), u32> =
                distinct.iter().enumerate().map(|(k, s)| (*s, k as u32)).collect();
            for v in 0..n {
                colors[v] = rank[&signatures[v]];
            }
            if !self.balanced(colors) {
                return false;
            }
            let now = distinct.len();
            if now == classes {
                return true;
            }
            classes = now;
        }
    }

    fn balanced(&self, colors: &[u32]) -> bool {
        let ng = self.g.len();
        let mut diff: HashMap<u32, i64> = HashMap::new();
        for (v, &c) in colors.iter().enumerate() {
            *diff.entry(c).or_default() += if v < ng { 1 } else { -1 };
        }
        diff.values().all(|&d| d == 0)
    }

    fn search(&mut self, mut colors: Vec<u32>) -> Result<Option<VertexBijection>> {
        if !self.refine(&mut colors) {
            return Ok(None);
        }
        let ng = self.g.len();
        let mut members: HashMap<u32, (Vec<usize>, Vec<usize>)> = HashMap::new();
        for (v, &c) in colors.iter().enumerate() {
            let e = members.entry(c).or_default();
            if v < ng {
                e.0.push(v);
            } else {
                e.1.push(v - ng);
            }
        }
        let target = members.iter().filter(|(_, (gs, _))| gs.len() > 1).min_by_key(|(c, (gs, _))| (gs.len(), **c));
        let Some((_, (gs, hs))) = target else {
            let mut forward = vec![0; ng];
            for (gs, hs) in members.values() {
                forward[gs[0]] = hs[0];
            }
            let bij = VertexBijection::from_forward(forward).expect("discrete coloring is a bijection");
            return Ok(verify_isomorphism(self.g, self.h, &bij).then_some(bij));
        };
        let v = gs[0];
        let candidates = hs.clone();
        let fresh = colors.iter().max().copied().unwrap_or(0) + 1;
        for hv in candidates {
            self.stats.nodes += 1;
            if self.stats.nodes > self.budget {
                return Err(Error::SearchBudgetExceeded { budget: self.budget });
            }
            let mut next = colors.clone();
            next[v] = fresh;
            next[ng + hv] = fresh;
            if let Some(bij) = self.search(next)? {
                return Ok(Some(bij));
            }
        }
        Ok(None)
    }
}

fn count_classes(colors: &[u32]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

/// The isomorphism `G_{A,b} -> G_{A,0}` given by a global solution `x*`:
/// `(i, x) -> (i, (x - x*) restricted to V_i)`.
///
/// Vertex indices refer to [`build_game_graph`] output for the same system.
pub fn translate_isomorphism(sys: &LinearSystem, xstar: &ZpVector, cap: u64) -> Result<VertexBijection> {
    if !sys.is_solution(xstar) {
        return Err(Error::NotASolution(format!("{xstar} does not solve the system")));
    }
    let g = build_game_graph(sys, false, cap)?;
    let h = build_game_graph(sys, true, cap)?;
    let mut forward = Vec::with_capacity(g.len());
    for v in g.vertices() {
        let support = sys.row_support(v.row)?;
        let shifted = v.x.try_sub(xstar)?.restricted_to(&support);
        let target = h.index_of(v.row, &shifted).ok_or_else(|| Error::InvariantViolation {
            check: format!("translate {} lands outside S_{}(A,0)", v.label(), v.row),
            residual: f64::INFINITY,
        })?;
        forward.push(target);
    }
    let bij = VertexBijection::from_forward(forward).ok_or_else(|| Error::InvariantViolation {
        check: "translation is not injective".into(),
        residual: f64::INFINITY,
    })?;
    if !verify_isomorphism(&g, &h, &bij) {
        return Err(Error::InvariantViolation {
            check: "translation does not preserve edges".into(),
            residual: f64::INFINITY,
        });
    }
    Ok(bij)
}
