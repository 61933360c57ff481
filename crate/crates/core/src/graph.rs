//! Edge-weighted simple graphs, their edge ideals, and the structural
//! predicates the criteria rely on.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::monomial::{Monomial, MonomialIdeal, Ring};

/// Graphs are limited to 64 vertices (adjacency rows are `u64` masks).
pub const MAX_VERTICES: usize = 64;

/// Exhaustive maximal-independent-set enumeration is refused above this size.
pub const MAX_VWC_VERTICES: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedGraph {
    ring: Arc<Ring>,
    adj: Vec<u64>,
    weights: BTreeMap<(usize, usize), u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeJson {
    pub u: String,
    pub v: String,
    #[serde(default = "unit_weight")]
    pub w: u64,
}

fn unit_weight() -> u64 {
    1
}

fn key(u: usize, v: usize) -> (usize, usize) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

fn bits(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(v)
        }
    })
}

impl WeightedGraph {
    /// The edgeless graph on the given vertex labels.
    pub fn new<I, S>(vertices: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let ring = Ring::new(vertices)?;
        if ring.len() > MAX_VERTICES {
            return Err(Error::Domain(format!(
                "graphs are limited to {MAX_VERTICES} vertices"
            )));
        }
        let n = ring.len();
        Ok(WeightedGraph { ring, adj: vec![0; n], weights: BTreeMap::new() })
    }

    /// Builds a graph from labeled weighted edges.
    pub fn from_edges<S: AsRef<str>>(vertices: &[S], edges: &[(&str, &str, u32)]) -> Result<Self> {
        let mut g = WeightedGraph::new(vertices.iter().map(|s| s.as_ref().to_string()))?;
        for &(u, v, w) in edges {
            g.add_edge_by_name(u, v, w)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: usize, v: usize, w: u32) -> Result<()> {
        let n = self.len();
        if u >= n || v >= n {
            return Err(Error::AmbientMismatch(format!("edge ({u},{v}) outside 0..{n}")));
        }
        if u == v {
            return Err(Error::Invalid(format!("loop at {}", self.name(u))));
        }
        if w == 0 {
            return Err(Error::Invalid("edge weights must be positive".into()));
        }
        if self.weights.contains_key(&key(u, v)) {
            return Err(Error::Invalid(format!(
                "parallel edge {}{}",
                self.name(u),
                self.name(v)
            )));
        }
        self.adj[u] |= 1 << v;
        self.adj[v] |= 1 << u;
        self.weights.insert(key(u, v), w);
        Ok(())
    }

    pub fn add_edge_by_name(&mut self, u: &str, v: &str, w: u32) -> Result<()> {
        let (a, b) = (self.vertex(u)?, self.vertex(v)?);
        self.add_edge(a, b, w)
    }

    /// Changes the weight of an existing edge.
    pub fn set_weight(&mut self, u: usize, v: usize, w: u32) -> Result<()> {
        if w == 0 {
            return Err(Error::Invalid("edge weights must be positive".into()));
        }
        match self.weights.get_mut(&key(u, v)) {
            Some(x) => {
                *x = w;
                Ok(())
            }
            None => Err(Error::Domain(format!("no edge between {u} and {v}"))),
        }
    }

    pub fn vertex(&self, name: &str) -> Result<usize> {
        self.ring
            .index_of(name)
            .ok_or_else(|| Error::AmbientMismatch(format!("unknown vertex {name:?}")))
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn name(&self, v: usize) -> &str {
        self.ring.name(v)
    }

    pub fn names(&self) -> &[String] {
        self.ring.names()
    }

    /// Edges `(u, v, w)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize, u32)> {
        self.weights.iter().map(|(&(u, v), &w)| (u, v, w)).collect()
    }

    pub fn edge_count(&self) -> usize {
        self.weights.len()
    }

    pub fn weight(&self, u: usize, v: usize) -> Option<u32> {
        self.weights.get(&key(u, v)).copied()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.len() && self.adj[u] >> v & 1 == 1
    }

    pub fn neighbors(&self, v: usize) -> u64 {
        self.adj[v]
    }

    pub fn neighbor_list(&self, v: usize) -> Vec<usize> {
        bits(self.adj[v]).collect()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    fn all_mask(&self) -> u64 {
        if self.len() == 64 {
            !0
        } else {
            (1u64 << self.len()) - 1
        }
    }

    /// `I(G_ω)`: one generator `(uv)^ω(uv)` per edge, over the vertex ring.
    pub fn edge_ideal(&self) -> Result<MonomialIdeal> {
        if self.weights.is_empty() {
            return Err(Error::Domain("edge ideal of a graph without edges".into()));
        }
        let n = self.len();
        let gens = self
            .edges()
            .into_iter()
            .map(|(u, v, w)| {
                let mut e = vec![0u32; n];
                e[u] = w;
                e[v] = w;
                Monomial::from_exponents(e)
            })
            .collect();
        MonomialIdeal::new(self.ring.clone(), gens)
    }

    /// Same graph with every weight set to 1.
    pub fn with_unit_weights(&self) -> WeightedGraph {
        let mut g = self.clone();
        for w in g.weights.values_mut() {
            *w = 1;
        }
        g
    }

    pub fn leaves(&self) -> Vec<usize> {
        (0..self.len()).filter(|&v| self.degree(v) == 1).collect()
    }

    pub fn isolated(&self) -> Vec<usize> {
        (0..self.len()).filter(|&v| self.degree(v) == 0).collect()
    }

    pub fn is_connected(&self) -> bool {
        if self.is_empty() {
            return true;
        }
        let mut seen = 1u64;
        let mut frontier = 1u64;
        while frontier != 0 {
            let mut next = 0;
            for v in bits(frontier) {
                next |= self.adj[v];
            }
            frontier = next & !seen;
            seen |= next;
        }
        seen == self.all_mask()
    }

    pub fn is_tree(&self) -> bool {
        !self.is_empty() && self.is_connected() && self.edge_count() == self.len() - 1
    }

    pub fn is_bipartite(&self) -> bool {
        let mut color: Vec<Option<bool>> = vec![None; self.len()];
        for s in 0..self.len() {
            if color[s].is_some() {
                continue;
            }
            color[s] = Some(false);
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                let c = color[v].unwrap();
                for u in bits(self.adj[v]) {
                    match color[u] {
                        None => {
                            color[u] = Some(!c);
                            stack.push(u);
                        }
                        Some(cu) if cu == c => return false,
                        _ => {}
                    }
                }
            }
        }
        true
    }

    /// Every vertex adjacent to every other.
    pub fn is_complete(&self) -> bool {
        let all = self.all_mask();
        (0..self.len()).all(|v| self.adj[v] == all & !(1 << v))
    }

    /// The weighted subgraph induced on `vertices`, in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Result<WeightedGraph> {
        if let Some(&v) = vertices.iter().find(|&&v| v >= self.len()) {
            return Err(Error::Domain(format!("vertex {v} is not in the graph")));
        }
        let mut g = WeightedGraph::new(vertices.iter().map(|&v| self.name(v).to_string()))?;
        for (i, &a) in vertices.iter().enumerate() {
            for (j, &b) in vertices.iter().enumerate().skip(i + 1) {
                if let Some(w) = self.weight(a, b) {
                    g.add_edge(i, j, w)?;
                }
            }
        }
        Ok(g)
    }

    pub fn induced_by_names<S: AsRef<str>>(&self, names: &[S]) -> Result<WeightedGraph> {
        let idx = names
            .iter()
            .map(|n| {
                self.ring
                    .index_of(n.as_ref())
                    .ok_or_else(|| Error::Domain(format!("vertex {:?} is not in the graph", n.as_ref())))
            })
            .collect::<Result<Vec<_>>>()?;
        self.induced(&idx)
    }

    /// `G \ S`: the induced subgraph on the remaining vertices, in order.
    pub fn remove_vertices(&self, removed: &[usize]) -> Result<WeightedGraph> {
        let keep: Vec<usize> = (0..self.len()).filter(|v| !removed.contains(v)).collect();
        self.induced(&keep)
    }

    /// Maximal independent sets by Bron-Kerbosch with pivoting on the
    /// complement graph.
    pub fn maximal_independent_sets(&self) -> Vec<u64> {
        let all = self.all_mask();
        let non_adj: Vec<u64> = (0..self.len()).map(|v| all & !self.adj[v] & !(1 << v)).collect();
        let mut out = Vec::new();
        fn bk(non_adj: &[u64], r: u64, mut p: u64, mut x: u64, out: &mut Vec<u64>) {
            if p == 0 {
                if x == 0 {
                    out.push(r);
                }
                return;
            }
            let pivot = bits(p | x)
                .max_by_key(|&u| (p & non_adj[u]).count_ones())
                .unwrap();
            for v in bits(p & !non_adj[pivot]) {
                bk(non_adj, r | (1 << v), p & non_adj[v], x & non_adj[v], out);
                p &= !(1 << v);
                x |= 1 << v;
            }
        }
        bk(&non_adj, 0, all, 0, &mut out);
        out.sort_unstable();
        out
    }

    /// Minimal vertex covers: complements of maximal independent sets.
    pub fn minimal_vertex_covers(&self) -> Vec<u64> {
        let all = self.all_mask();
        let mut covers: Vec<u64> = self
            .maximal_independent_sets()
            .into_iter()
            .map(|s| all & !s)
            .collect();
        covers.sort_unstable();
        covers
    }

    /// Even order, no isolated vertices, and all maximal independent sets of
    /// size `|V|/2`.
    pub fn is_very_well_covered(&self) -> Result<bool> {
        if let Some(&v) = self.isolated().first() {
            return Err(Error::Domain(format!("vertex {} is isolated", self.name(v))));
        }
        if self.len() > MAX_VWC_VERTICES {
            return Err(Error::Domain(format!(
                "exhaustive enumeration is limited to {MAX_VWC_VERTICES} vertices"
            )));
        }
        if self.len() % 2 == 1 {
            return Ok(false);
        }
        let half = self.len() as u32 / 2;
        Ok(self
            .maximal_independent_sets()
            .iter()
            .all(|s| s.count_ones() == half))
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            vertices: self.names().to_vec(),
            edges: self
                .edges()
                .into_iter()
                .map(|(u, v, w)| EdgeJson {
                    u: self.name(u).to_string(),
                    v: self.name(v).to_string(),
                    w: w as u64,
                })
                .collect(),
        }
    }

    pub fn from_json(json: &GraphJson) -> Result<Self> {
        let mut g = WeightedGraph::new(json.vertices.iter().cloned())?;
        for e in &json.edges {
            let w = u32::try_from(e.w)
                .map_err(|_| Error::Overflow(format!("weight {} exceeds the u32 range", e.w)))?;
            g.add_edge_by_name(&e.u, &e.v, w)?;
        }
        Ok(g)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let json: GraphJson = serde_json::from_str(text)?;
        WeightedGraph::from_json(&json)
    }
}

/// Pairs `(x_i, y_i)` labeling a graph so that (1*)-(5*) hold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VwcLabeling {
    pub pairs: Vec<(usize, usize)>,
}

impl VwcLabeling {
    pub fn t(&self) -> usize {
        self.pairs.len()
    }

    pub fn x(&self, i: usize) -> usize {
        self.pairs[i].0
    }

    pub fn y(&self, i: usize) -> usize {
        self.pairs[i].1
    }

    /// Every failed condition, as human-readable strings (empty when valid).
    pub fn violations(&self, g: &WeightedGraph) -> Vec<String> {
        let mut out = Vec::new();
        let t = self.t();
        let mut seen = 0u64;
        for &(x, y) in &self.pairs {
            for v in [x, y] {
                if v >= g.len() || seen >> v & 1 == 1 {
                    out.push(format!("vertex {v} missing or repeated"));
                    return out;
                }
                seen |= 1 << v;
            }
        }
        if seen != g.all_mask() {
            out.push("pairs do not cover every vertex".into());
        }
        let (xs, ys): (Vec<usize>, Vec<usize>) = self.pairs.iter().copied().unzip();
        let e = |a: usize, b: usize| g.has_edge(a, b);
        for i in 0..t {
            if !e(xs[i], ys[i]) {
                out.push(format!("(1*) x{}y{} is not an edge", i + 1, i + 1));
            }
            for j in 0..t {
                if i < j && e(ys[i], ys[j]) {
                    out.push(format!("y{}y{} is an edge", i + 1, j + 1));
                }
                if e(xs[i], ys[j]) && i > j {
                    out.push(format!("(2*) x{}y{} with {} > {}", i + 1, j + 1, i + 1, j + 1));
                }
                if i != j && e(xs[i], ys[j]) && e(xs[i], xs[j]) {
                    out.push(format!("(3*) x{}y{} and x{}x{}", i + 1, j + 1, i + 1, j + 1));
                }
            }
        }
        for i in 0..t {
            for k in 0..t {
                for j in 0..t {
                    if i == j || j == k || i == k {
                        continue;
                    }
                    if e(xs[i], ys[k]) && e(xs[k], ys[j]) && !e(xs[i], ys[j]) {
                        out.push(format!("(4*) x{}y{}, x{}y{} but not x{}y{}", i + 1, k + 1, k + 1, j + 1, i + 1, j + 1));
                    }
                    if e(xs[i], ys[k]) && e(xs[k], xs[j]) && !e(xs[i], xs[j]) {
                        out.push(format!("(5*) x{}y{}, x{}x{} but not x{}x{}", i + 1, k + 1, k + 1, j + 1, i + 1, j + 1));
                    }
                }
            }
        }
        out.dedup();
        out
    }

    pub fn validate(&self, g: &WeightedGraph) -> Result<()> {
        let v = self.violations(g);
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::Domain(format!("invalid labeling: {}", v.join("; "))))
        }
    }

    pub fn to_names(&self, g: &WeightedGraph) -> Vec<(String, String)> {
        self.pairs
            .iter()
            .map(|&(x, y)| (g.name(x).to_string(), g.name(y).to_string()))
            .collect()
    }
}

/// Searches perfect matchings (leaves forced to the `y` side), orientations
/// with `Y` independent, and then an order of the pairs compatible with
/// (2*). Returns the first labeling found in this deterministic order.
pub fn find_vwc_labeling(g: &WeightedGraph) -> Option<VwcLabeling> {
    let n = g.len();
    if n == 0 || n % 2 == 1 || !g.isolated().is_empty() {
        return None;
    }
    let mut found = None;
    let mut matching = Vec::with_capacity(n / 2);
    perfect_matchings(g, 0, &mut matching, &mut |m| {
        found = orient(g, m);
        found.is_none()
    });
    found
}

/// Calls `visit` on each perfect matching (edges `(u, v)` with `u < v`), in
/// lexicographic order; stops when `visit` returns false.
fn perfect_matchings(
    g: &WeightedGraph,
    used: u64,
    current: &mut Vec<(usize, usize)>,
    visit: &mut dyn FnMut(&[(usize, usize)]) -> bool,
) -> bool {
    let free = g.all_mask() & !used;
    if free == 0 {
        return visit(current);
    }
    let v = free.trailing_zeros() as usize;
    for u in bits(g.adj[v] & free) {
        current.push((v, u));
        let go = perfect_matchings(g, used | (1 << v) | (1 << u), current, visit);
        current.pop();
        if !go {
            return false;
        }
    }
    true
}

fn orient(g: &WeightedGraph, matching: &[(usize, usize)]) -> Option<VwcLabeling> {
    let t = matching.len();
    let mut pairs: Vec<(usize, usize)> = vec![(0, 0); t];
    fn rec(
        g: &WeightedGraph,
        matching: &[(usize, usize)],
        i: usize,
        ymask: u64,
        pairs: &mut Vec<(usize, usize)>,
    ) -> Option<VwcLabeling> {
        if i == matching.len() {
            return order_pairs(g, pairs);
        }
        let (a, b) = matching[i];
        let options: &[(usize, usize)] = match (g.degree(a) == 1, g.degree(b) == 1) {
            (true, false) => &[(b, a)],
            (false, true) => &[(a, b)],
            _ => &[(a, b), (b, a)],
        };
        for &(x, y) in options {
            if g.adj[y] & ymask != 0 {
                continue;
            }
            pairs[i] = (x, y);
            if let Some(l) = rec(g, matching, i + 1, ymask | (1 << y), pairs) {
                return Some(l);
            }
        }
        None
    }
    rec(g, matching, 0, 0, &mut pairs)
}

/// Checks (3*)-(5*) for the unordered pairs and topologically sorts them by
/// the precedence `x_i y_j ∈ E ⟹ i before j`.
fn order_pairs(g: &WeightedGraph, pairs: &[(usize, usize)]) -> Option<VwcLabeling> {
    let t = pairs.len();
    let candidate = VwcLabeling { pairs: pairs.to_vec() };
    // (3*)-(5*) do not depend on the order; check them once.
    let ok = candidate
        .violations(g)
        .iter()
        .all(|v| v.starts_with("(2*)"));
    if !ok {
        return None;
    }
    let mut indeg = vec![0usize; t];
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); t];
    for i in 0..t {
        for j in 0..t {
            if i != j && g.has_edge(pairs[i].0, pairs[j].1) {
                succ[i].push(j);
                indeg[j] += 1;
            }
        }
    }
    let mut heap: BinaryHeap<Reverse<(usize, usize)>> = (0..t)
        .filter(|&i| indeg[i] == 0)
        .map(|i| Reverse((pairs[i].0, i)))
        .collect();
    let mut order = Vec::with_capacity(t);
    while let Some(Reverse((_, i))) = heap.pop() {
        order.push(pairs[i]);
        for &j in &succ[i] {
            indeg[j] -= 1;
            if indeg[j] == 0 {
                heap.push(Reverse((pairs[j].0, j)));
            }
        }
    }
    (order.len() == t).then_some(VwcLabeling { pairs: order })
}

/// A perfect matching `x_i y_i` in which every `y_i` is a leaf.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PendantMatching {
    pub pairs: Vec<(usize, usize)>,
}

impl PendantMatching {
    pub fn t(&self) -> usize {
        self.pairs.len()
    }

    pub fn xs(&self) -> Vec<usize> {
        self.pairs.iter().map(|p| p.0).collect()
    }

    /// `m_i = ω(x_i y_i)`.
    pub fn pendant_weight(&self, g: &WeightedGraph, i: usize) -> u32 {
        g.weight(self.pairs[i].0, self.pairs[i].1).expect("matching edge")
    }

    pub fn validate(&self, g: &WeightedGraph) -> Result<()> {
        let mut seen = 0u64;
        for &(x, y) in &self.pairs {
            if x >= g.len() || y >= g.len() || !g.has_edge(x, y) {
                return Err(Error::Domain("pendant pair is not an edge".into()));
            }
            if g.degree(y) != 1 {
                return Err(Error::Domain(format!("{} is not a leaf", g.name(y))));
            }
            if seen & ((1 << x) | (1 << y)) != 0 {
                return Err(Error::Domain("pendant pairs overlap".into()));
            }
            seen |= (1 << x) | (1 << y);
        }
        if seen != g.all_mask() {
            return Err(Error::Domain("pendant pairs do not cover every vertex".into()));
        }
        Ok(())
    }

    pub fn to_names(&self, g: &WeightedGraph) -> Vec<(String, String)> {
        self.pairs
            .iter()
            .map(|&(x, y)| (g.name(x).to_string(), g.name(y).to_string()))
            .collect()
    }
}

/// The pendant perfect matching, ordered by the `x` vertex; it is unique
/// when it exists. An isolated edge is oriented with its first vertex as `x`.
pub fn pendant_matching(g: &WeightedGraph) -> Option<PendantMatching> {
    let mut partner: Vec<Option<usize>> = vec![None; g.len()];
    let mut pairs = Vec::new();
    for y in g.leaves() {
        let x = g.adj[y].trailing_zeros() as usize;
        if partner[y].is_some() {
            continue; // the other end of an isolated edge
        }
        if partner[x].is_some() {
            return None;
        }
        if g.degree(x) == 1 && x > y {
            partner[x] = Some(y);
            partner[y] = Some(x);
            pairs.push((y, x));
        } else {
            partner[x] = Some(y);
            partner[y] = Some(x);
            pairs.push((x, y));
        }
    }
    if partner.iter().any(Option::is_none) || g.is_empty() {
        return None;
    }
    pairs.sort_unstable();
    Some(PendantMatching { pairs })
}

/// The induced subgraph on `x_1, …, x_t`, vertices in matching order.
pub fn core(g: &WeightedGraph, m: &PendantMatching) -> Result<WeightedGraph> {
    g.induced(&m.xs())
}

/// Index (in `core`) of the center if `core` is a star. With two vertices the
/// later one is chosen; a single vertex is its own center.
pub fn star_center(core: &WeightedGraph) -> Option<usize> {
    let t = core.len();
    if t == 0 {
        return None;
    }
    if t == 1 {
        return Some(0);
    }
    (0..t).rev().find(|&c| {
        core.degree(c) == t - 1 && (0..t).all(|v| v == c || core.degree(v) == 1)
    })
}

pub fn is_star(core: &WeightedGraph) -> bool {
    star_center(core).is_some()
}
