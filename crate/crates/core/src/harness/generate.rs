//! Deterministic instance streams for sweeps.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{PendantMatching, VwcLabeling, WeightedGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// Paths `x–a–b–y` with weights `ax = p`, `ab = k`, `by = q`.
    Path3,
    /// Stars on `x_1..x_t` centered at `x_t`, a pendant on every `x_i`.
    StarCore,
    /// Complete graphs on `x_1..x_t` with unit weights, a pendant on every `x_i`.
    CompleteCore,
    /// Random trees on `x_1..x_t` (uniform through Prüfer codes), a pendant
    /// on every `x_i`, random weights.
    Tree,
    /// Every (*) labeled structure on `x_1..x_t, y_1..y_t` with every weight
    /// assignment.
    VwcEnum,
}

impl Family {
    pub const ALL: [Family; 5] =
        [Family::Path3, Family::StarCore, Family::CompleteCore, Family::Tree, Family::VwcEnum];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::Path3 => "path3",
            Family::StarCore => "star-core",
            Family::CompleteCore => "complete-core",
            Family::Tree => "tree",
            Family::VwcEnum => "vwc-enum",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown family {s:?}")))
    }
}

/// Size parameters of a generated stream.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenParams {
    pub min_t: usize,
    pub max_t: usize,
    pub max_weight: u32,
    /// Number of random trees (tree family only).
    pub samples: usize,
    pub seed: u64,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams { min_t: 2, max_t: 3, max_weight: 5, samples: 100, seed: 0 }
    }
}

impl GenParams {
    pub fn validate(&self) -> Result<()> {
        if self.min_t == 0 || self.min_t > self.max_t {
            return Err(Error::Invalid(format!("bad t range {}..={}", self.min_t, self.max_t)));
        }
        if self.max_weight == 0 {
            return Err(Error::Invalid("the weight cap must be positive".into()));
        }
        if 2 * self.max_t > crate::graph::MAX_VERTICES {
            return Err(Error::Invalid(format!("t = {} gives too many vertices", self.max_t)));
        }
        Ok(())
    }
}

/// A generated graph with the structure it was built from.
#[derive(Clone, Debug)]
pub struct Instance {
    pub graph: WeightedGraph,
    pub labeling: Option<VwcLabeling>,
    pub matching: Option<PendantMatching>,
}

pub fn generate(family: Family, params: &GenParams) -> Result<Vec<Instance>> {
    params.validate()?;
    match family {
        Family::Path3 => path3(params.max_weight),
        Family::StarCore => {
            let mut out = Vec::new();
            for t in params.min_t..=params.max_t {
                out.extend(star_core(t, params.max_weight)?);
            }
            Ok(out)
        }
        Family::CompleteCore => {
            let mut out = Vec::new();
            for t in params.min_t.max(2)..=params.max_t {
                out.extend(complete_core(t, params.max_weight)?);
            }
            Ok(out)
        }
        Family::Tree => random_trees(params),
        Family::VwcEnum => {
            let mut out = Vec::new();
            for t in params.min_t..=params.max_t {
                out.extend(vwc_enum(t, params.max_weight)?);
            }
            Ok(out)
        }
    }
}

/// All tuples in `[1, w]^len`, last coordinate fastest.
fn weight_tuples(len: usize, w: u32) -> impl Iterator<Item = Vec<u32>> {
    let total = (w as u64).pow(len as u32);
    (0..total).map(move |mut code| {
        let mut out = vec![0u32; len];
        for slot in out.iter_mut().rev() {
            *slot = (code % w as u64) as u32 + 1;
            code /= w as u64;
        }
        out
    })
}

fn pendant_names(t: usize) -> Vec<String> {
    (1..=t).map(|i| format!("x{i}")).chain((1..=t).map(|i| format!("y{i}"))).collect()
}

/// Builds `x_1..x_t, y_1..y_t` with the pendant edges `x_i y_i` weighted by
/// `pendant` and the listed core edges.
fn with_pendants(t: usize, core: &[(usize, usize, u32)], pendant: &[u32]) -> Result<Instance> {
    let mut g = WeightedGraph::new(pendant_names(t))?;
    for &(i, j, w) in core {
        g.add_edge(i, j, w)?;
    }
    for (i, &m) in pendant.iter().enumerate() {
        g.add_edge(i, t + i, m)?;
    }
    let matching = PendantMatching { pairs: (0..t).map(|i| (i, t + i)).collect() };
    Ok(Instance { graph: g, labeling: None, matching: Some(matching) })
}

fn path3(w: u32) -> Result<Vec<Instance>> {
    let mut out = Vec::new();
    for kpq in weight_tuples(3, w) {
        let (k, p, q) = (kpq[0], kpq[1], kpq[2]);
        let g = WeightedGraph::from_edges(&["a", "b", "x", "y"], &[("a", "x", p), ("a", "b", k), ("b", "y", q)])?;
        out.push(Instance {
            graph: g,
            labeling: Some(VwcLabeling { pairs: vec![(0, 2), (1, 3)] }),
            matching: Some(PendantMatching { pairs: vec![(0, 2), (1, 3)] }),
        });
    }
    Ok(out)
}

/// Weights ordered `d_1..d_{t-1}` then `m_1..m_t`.
fn star_core(t: usize, w: u32) -> Result<Vec<Instance>> {
    let mut out = Vec::new();
    for ws in weight_tuples(2 * t - 1, w) {
        let core: Vec<(usize, usize, u32)> = (0..t - 1).map(|i| (i, t - 1, ws[i])).collect();
        out.push(with_pendants(t, &core, &ws[t - 1..])?);
    }
    Ok(out)
}

fn complete_core(t: usize, w: u32) -> Result<Vec<Instance>> {
    let core: Vec<(usize, usize, u32)> =
        (0..t).flat_map(|i| (i + 1..t).map(move |j| (i, j, 1))).collect();
    weight_tuples(t, w).map(|m| with_pendants(t, &core, &m)).collect()
}

fn random_trees(params: &GenParams) -> Result<Vec<Instance>> {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut out = Vec::with_capacity(params.samples);
    for _ in 0..params.samples {
        let t = rng.gen_range(params.min_t..=params.max_t);
        let core: Vec<(usize, usize, u32)> = prufer_tree(t, &mut rng)
            .into_iter()
            .map(|(i, j)| (i, j, rng.gen_range(1..=params.max_weight)))
            .collect();
        let pendant: Vec<u32> = (0..t).map(|_| rng.gen_range(1..=params.max_weight)).collect();
        out.push(with_pendants(t, &core, &pendant)?);
    }
    Ok(out)
}

/// Edges of the labeled tree on `0..t` encoded by a uniform Prüfer sequence.
fn prufer_tree(t: usize, rng: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
    if t < 2 {
        return Vec::new();
    }
    let code: Vec<usize> = (0..t - 2).map(|_| rng.gen_range(0..t)).collect();
    let mut degree = vec![1usize; t];
    for &c in &code {
        degree[c] += 1;
    }
    let mut edges = Vec::with_capacity(t - 1);
    for &c in &code {
        let leaf = (0..t).find(|&v| degree[v] == 1).expect("a leaf exists");
        edges.push((leaf.min(c), leaf.max(c)));
        degree[leaf] -= 1;
        degree[c] -= 1;
    }
    let rest: Vec<usize> = (0..t).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges
}

/// Structures on `x_1..x_t, y_1..y_t`: optional edges `x_i x_j` and `x_i y_j`
/// for `i < j`, kept when (3*)-(5*) hold, each with all weightings.
fn vwc_enum(t: usize, w: u32) -> Result<Vec<Instance>> {
    let mut optional: Vec<(usize, usize)> = Vec::new();
    for i in 0..t {
        for j in i + 1..t {
            optional.push((i, j));
            optional.push((i, t + j));
        }
    }
    let labeling = VwcLabeling { pairs: (0..t).map(|i| (i, t + i)).collect() };
    let mut out = Vec::new();
    for mask in 0u64..1 << optional.len() {
        let mut edges: Vec<(usize, usize)> = (0..t).map(|i| (i, t + i)).collect();
        edges.extend(
            optional
                .iter()
                .enumerate()
                .filter(|(b, _)| mask >> b & 1 == 1)
                .map(|(_, &e)| e),
        );
        let mut shape = WeightedGraph::new(pendant_names(t))?;
        for &(u, v) in &edges {
            shape.add_edge(u, v, 1)?;
        }
        if !labeling.violations(&shape).is_empty() {
            continue;
        }
        for ws in weight_tuples(edges.len(), w) {
            let mut g = WeightedGraph::new(pendant_names(t))?;
            for (&(u, v), &wt) in edges.iter().zip(&ws) {
                g.add_edge(u, v, wt)?;
            }
            let matching = crate::graph::pendant_matching(&g).filter(|m| m.validate(&g).is_ok());
            out.push(Instance { graph: g, labeling: Some(labeling.clone()), matching });
        }
    }
    Ok(out)
}
