//! Combinatorial predicates on weights that predict when powers of a
//! weighted edge ideal are Cohen-Macaulay. Every predicate re-checks the
//! structural shape it assumes and reports all violated inequalities.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{core, pendant_matching, star_center, PendantMatching, VwcLabeling, WeightedGraph};

/// `⌈a / b⌉` for positive `b`.
pub fn ceil_div(a: u64, b: u64) -> u64 {
    a.div_ceil(b)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub condition: String,
    /// Offending edges, as `u-v` vertex names.
    pub edges: Vec<String>,
    /// Pair indices involved (1-based, in the labeling or matching order).
    pub indices: Vec<usize>,
    pub required: String,
    pub actual: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriterionReport {
    pub theorem: String,
    pub holds: bool,
    pub violations: Vec<Violation>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl CriterionReport {
    fn new(theorem: &str) -> Self {
        CriterionReport { theorem: theorem.into(), holds: true, violations: Vec::new(), notes: Vec::new() }
    }

    fn push(&mut self, v: Violation) {
        self.holds = false;
        self.violations.push(v);
    }

    fn finish(mut self) -> Self {
        self.holds = self.violations.is_empty();
        self
    }
}

fn edge_name(g: &WeightedGraph, u: usize, v: usize) -> String {
    format!("{}-{}", g.name(u), g.name(v))
}

fn w(g: &WeightedGraph, u: usize, v: usize) -> u64 {
    g.weight(u, v).expect("edge present") as u64
}

/// Squared-power conditions with coefficient `ell` over a (*) labeling:
///
/// 1. `ℓ·ω(x_i z_j) ≤ min{ω(x_i y_i), ω(x_j y_j)}` for every edge `x_i z_j`,
///    `i ≠ j`, `z_j ∈ {x_j, y_j}`;
/// 2. `ℓ·ω(x_i z_j) ≤ min{ω(x_i y_k), ω(x_k z_j)}` for distinct `i, j, k`
///    with `x_i y_k, x_k z_j ∈ E`.
pub fn power_ell_criterion(g: &WeightedGraph, l: &VwcLabeling, ell: u32) -> Result<CriterionReport> {
    if ell == 0 {
        return Err(Error::Domain("the power bound must be at least 1".into()));
    }
    l.validate(g)?;
    let theorem = if ell == 2 { "square-cm" } else { "power-ell-cm" };
    let mut rep = CriterionReport::new(theorem);
    let ell = ell as u64;
    let t = l.t();
    let (xs, ys): (Vec<usize>, Vec<usize>) = l.pairs.iter().copied().unzip();
    let pendant = |i: usize| w(g, xs[i], ys[i]);
    // z_j ranges over x_j (tag 'x') and y_j (tag 'y').
    let targets = |j: usize| [(xs[j], 'x'), (ys[j], 'y')];

    for i in 0..t {
        for j in 0..t {
            if i == j {
                continue;
            }
            for (z, tag) in targets(j) {
                if tag == 'x' && j < i {
                    continue; // x_i x_j and x_j x_i give the same inequality
                }
                if !g.has_edge(xs[i], z) {
                    continue;
                }
                let lhs = ell * w(g, xs[i], z);
                let rhs = pendant(i).min(pendant(j));
                if lhs > rhs {
                    rep.push(Violation {
                        condition: "1".into(),
                        edges: vec![edge_name(g, xs[i], z)],
                        indices: vec![i + 1, j + 1],
                        required: format!(
                            "{ell}*w(x{}{}{}) <= min(w(x{}y{}), w(x{}y{}))",
                            i + 1, tag, j + 1, i + 1, i + 1, j + 1, j + 1
                        ),
                        actual: format!("{lhs} > {rhs}"),
                    });
                }
            }
        }
    }
    for i in 0..t {
        for k in 0..t {
            if k == i || !g.has_edge(xs[i], ys[k]) {
                continue;
            }
            for j in 0..t {
                if j == i || j == k {
                    continue;
                }
                for (z, tag) in targets(j) {
                    if !g.has_edge(xs[k], z) {
                        continue;
                    }
                    let Some(wij) = g.weight(xs[i], z) else {
                        return Err(Error::Domain("labeling violates (4*)/(5*)".into()));
                    };
                    let lhs = ell * wij as u64;
                    let rhs = w(g, xs[i], ys[k]).min(w(g, xs[k], z));
                    if lhs > rhs {
                        rep.push(Violation {
                            condition: "2".into(),
                            edges: vec![
                                edge_name(g, xs[i], z),
                                edge_name(g, xs[i], ys[k]),
                                edge_name(g, xs[k], z),
                            ],
                            indices: vec![i + 1, j + 1, k + 1],
                            required: format!(
                                "{ell}*w(x{}{}{}) <= min(w(x{}y{}), w(x{}{}{}))",
                                i + 1, tag, j + 1, i + 1, k + 1, k + 1, tag, j + 1
                            ),
                            actual: format!("{lhs} > {rhs}"),
                        });
                    }
                }
            }
        }
    }
    Ok(rep.finish())
}

/// The square criterion: `power_ell_criterion` with `ℓ = 2`.
pub fn square_cm_criterion(g: &WeightedGraph, l: &VwcLabeling) -> Result<CriterionReport> {
    power_ell_criterion(g, l, 2)
}

/// Largest `k` with `ω(x_i y_i) ≥ k·ω(x_i x_j)` for every core edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "k")]
pub enum PnBound {
    /// No core edges: every `k` works.
    Unbounded,
    /// The bound holds exactly for `k ≤` this value (possibly 0).
    UpTo(u64),
}

impl PnBound {
    pub fn covers(self, n: u64) -> bool {
        match self {
            PnBound::Unbounded => true,
            PnBound::UpTo(k) => n <= k,
        }
    }
}

pub fn pn_bound(g: &WeightedGraph, m: &PendantMatching) -> Result<PnBound> {
    m.validate(g)?;
    let xs = m.xs();
    let mut best: Option<u64> = None;
    for (i, &x) in xs.iter().enumerate() {
        let heaviest = xs
            .iter()
            .filter(|&&z| g.has_edge(x, z))
            .map(|&z| w(g, x, z))
            .max();
        if let Some(h) = heaviest {
            let k = m.pendant_weight(g, i) as u64 / h;
            best = Some(best.map_or(k, |b| b.min(k)));
        }
    }
    Ok(best.map_or(PnBound::Unbounded, PnBound::UpTo))
}

/// Report form of the pendant bound at a given `ℓ`.
pub fn pn_criterion(g: &WeightedGraph, m: &PendantMatching, ell: u32) -> Result<CriterionReport> {
    m.validate(g)?;
    let mut rep = CriterionReport::new("pendant-bound");
    let xs = m.xs();
    for (i, &x) in xs.iter().enumerate() {
        let mi = m.pendant_weight(g, i) as u64;
        for (j, &z) in xs.iter().enumerate() {
            if g.has_edge(x, z) && mi < ell as u64 * w(g, x, z) {
                rep.push(Violation {
                    condition: "pendant".into(),
                    edges: vec![edge_name(g, x, z)],
                    indices: vec![i + 1, j + 1],
                    required: format!("m{} >= {ell}*w(x{}x{})", i + 1, i + 1, j + 1),
                    actual: format!("{mi} < {}", ell as u64 * w(g, x, z)),
                });
            }
        }
    }
    rep.notes.push(format!("k_max = {:?}", pn_bound(g, m)?));
    Ok(rep.finish())
}

/// Vertices `(a, b, x, y)` of a path `x–a–b–y`.
fn path3_shape(g: &WeightedGraph) -> Result<(usize, usize, usize, usize)> {
    let bad = || Error::Domain("expected a path of length 3 (edges ab, ax, by)".into());
    if g.len() != 4 || g.edge_count() != 3 || !g.is_tree() {
        return Err(bad());
    }
    let inner: Vec<usize> = (0..4).filter(|&v| g.degree(v) == 2).collect();
    if inner.len() != 2 || !g.has_edge(inner[0], inner[1]) {
        return Err(bad());
    }
    let (a, b) = (inner[0], inner[1]);
    let x = g.neighbor_list(a).into_iter().find(|&v| v != b).ok_or_else(bad)?;
    let y = g.neighbor_list(b).into_iter().find(|&v| v != a).ok_or_else(bad)?;
    Ok((a, b, x, y))
}

/// `min{ω(ax), ω(by)} ≥ 2ω(ab)` on a weighted path `x–a–b–y`: all powers CM.
pub fn path3_all_n(g: &WeightedGraph) -> Result<CriterionReport> {
    let (a, b, x, y) = path3_shape(g)?;
    let (p, k, q) = (w(g, a, x), w(g, a, b), w(g, b, y));
    let mut rep = CriterionReport::new("path3-all-powers");
    if p.min(q) < 2 * k {
        rep.push(Violation {
            condition: "pendant-vs-middle".into(),
            edges: vec![edge_name(g, a, x), edge_name(g, a, b), edge_name(g, b, y)],
            indices: vec![],
            required: "min(w(ax), w(by)) >= 2*w(ab)".into(),
            actual: format!("min({p}, {q}) < 2*{k}"),
        });
    }
    Ok(rep.finish())
}

/// Star core with center `x_t`: `(1) m_t ≥ 2 max d_i`; `(2)` distinct `d_i`,
/// and for `d_i < d_k`, `(a) m_i ≥ d_i⌈d_k/(d_k−d_i)⌉`,
/// `(b) m_k ≥ d_k·max{2, ⌈d_k/(d_k−d_i)⌉−2}`; plus `m_i ≥ 2d_i` for every
/// non-center `i`, which (2) implies once there are two non-center vertices
/// but which is needed on its own when the core is a single edge.
pub fn star_all_n(g: &WeightedGraph, m: &PendantMatching) -> Result<CriterionReport> {
    m.validate(g)?;
    let c = core(g, m)?;
    let center = star_center(&c).ok_or_else(|| Error::Domain("core is not a star".into()))?;
    let xs = m.xs();
    let t = xs.len();
    let mut rep = CriterionReport::new("star-core-all-powers");
    let xc = xs[center];
    let mt = m.pendant_weight(g, center) as u64;
    // Non-center indices with d_i.
    let others: Vec<(usize, u64)> = (0..t)
        .filter(|&i| i != center)
        .map(|i| (i, w(g, xs[i], xc)))
        .collect();
    let label = |i: usize| g.name(xs[i]).to_string();
    rep.notes.push(format!("center {}", g.name(xc)));

    if let Some(&(imax, dmax)) = others.iter().max_by_key(|p| p.1) {
        if mt < 2 * dmax {
            rep.push(Violation {
                condition: "1".into(),
                edges: vec![edge_name(g, xs[imax], xc), edge_name(g, xc, m.pairs[center].1)],
                indices: vec![center + 1],
                required: "m_t >= 2*max d_i".into(),
                actual: format!("{mt} < 2*{dmax}"),
            });
        }
    }
    for &(i, di) in &others {
        let mi = m.pendant_weight(g, i) as u64;
        if mi < 2 * di {
            rep.push(Violation {
                condition: "leaf".into(),
                edges: vec![edge_name(g, xs[i], xc), edge_name(g, xs[i], m.pairs[i].1)],
                indices: vec![i + 1],
                required: format!("m({}) >= 2*d({})", label(i), label(i)),
                actual: format!("{mi} < 2*{di}"),
            });
        }
    }
    for (a, &(i0, d0)) in others.iter().enumerate() {
        for &(k0, dk0) in &others[a + 1..] {
            if d0 == dk0 {
                rep.push(Violation {
                    condition: "2".into(),
                    edges: vec![edge_name(g, xs[i0], xc), edge_name(g, xs[k0], xc)],
                    indices: vec![i0 + 1, k0 + 1],
                    required: "d_i != d_k".into(),
                    actual: format!("{d0} = {dk0}"),
                });
                continue;
            }
            let ((i, di), (k, dk)) = if d0 < dk0 { ((i0, d0), (k0, dk0)) } else { ((k0, dk0), (i0, d0)) };
            let ratio = ceil_div(dk, dk - di);
            let mi = m.pendant_weight(g, i) as u64;
            let mk = m.pendant_weight(g, k) as u64;
            if mi < di * ratio {
                rep.push(Violation {
                    condition: "2a".into(),
                    edges: vec![edge_name(g, xs[i], m.pairs[i].1)],
                    indices: vec![i + 1, k + 1],
                    required: format!("m({}) >= d_i*ceil(d_k/(d_k-d_i)) = {}*{}", label(i), di, ratio),
                    actual: format!("{mi} < {}", di * ratio),
                });
            }
            let factor = 2u64.max(ratio.saturating_sub(2));
            if mk < dk * factor {
                rep.push(Violation {
                    condition: "2b".into(),
                    edges: vec![edge_name(g, xs[k], m.pairs[k].1)],
                    indices: vec![i + 1, k + 1],
                    required: format!(
                        "m({}) >= d_k*max(2, ceil(d_k/(d_k-d_i))-2) = {}*{}",
                        label(k), dk, factor
                    ),
                    actual: format!("{mk} < {}", dk * factor),
                });
            }
        }
    }
    Ok(rep.finish())
}

/// Complete core with unit core weights: all powers CM iff every pendant
/// weight is at least 2.
pub fn complete_core_all_n(g: &WeightedGraph, m: &PendantMatching) -> Result<CriterionReport> {
    m.validate(g)?;
    if !g.is_connected() {
        return Err(Error::Domain("graph is not connected".into()));
    }
    let c = core(g, m)?;
    if c.len() < 2 {
        return Err(Error::Domain("the core needs at least two vertices".into()));
    }
    if !c.is_complete() {
        return Err(Error::Domain("core is not a complete graph".into()));
    }
    if let Some((u, v, wt)) = c.edges().into_iter().find(|e| e.2 != 1) {
        return Err(Error::Hypothesis(format!(
            "core edge {}-{} has weight {wt}, expected 1",
            c.name(u),
            c.name(v)
        )));
    }
    let mut rep = CriterionReport::new("complete-core-all-powers");
    for i in 0..m.t() {
        let mi = m.pendant_weight(g, i);
        if mi < 2 {
            rep.push(Violation {
                condition: "pendant".into(),
                edges: vec![edge_name(g, m.pairs[i].0, m.pairs[i].1)],
                indices: vec![i + 1],
                required: "w(x_i y_i) >= 2".into(),
                actual: format!("{mi} < 2"),
            });
        }
    }
    Ok(rep.finish())
}

/// Necessary conditions on a weighted tree for all powers to be CM:
/// `(1) 2ω_ij ≤ min{m_i, m_j}` on core edges; `(2)` adjacent core edges
/// `x_ix_j, x_jx_k` have `ω_ij ≠ ω_jk`, and for `ω_ij < ω_jk`,
/// `(a) m_i ≥ ω_ij⌈ω_jk/(ω_jk−ω_ij)⌉`, `(b) m_k ≥ ω_jk(⌈ω_jk/(ω_jk−ω_ij)⌉−2)`.
pub fn tree_necessary(g: &WeightedGraph, m: &PendantMatching) -> Result<CriterionReport> {
    if !g.is_tree() {
        return Err(Error::Domain("graph is not a tree".into()));
    }
    m.validate(g)?;
    let xs = m.xs();
    let t = xs.len();
    let mw = |i: usize| m.pendant_weight(g, i) as u64;
    let label = |i: usize| g.name(xs[i]).to_string();
    let mut rep = CriterionReport::new("tree-necessary");
    rep.notes.push(
        "(2b) carries no max{2,.} guard here; combined with (1) it matches the star-core form".into(),
    );
    for i in 0..t {
        for j in i + 1..t {
            if let Some(wij) = g.weight(xs[i], xs[j]) {
                let wij = wij as u64;
                if 2 * wij > mw(i).min(mw(j)) {
                    rep.push(Violation {
                        condition: "1".into(),
                        edges: vec![edge_name(g, xs[i], xs[j])],
                        indices: vec![i + 1, j + 1],
                        required: format!("2*w({}{}) <= min(m_i, m_j)", label(i), label(j)),
                        actual: format!("{} > min({}, {})", 2 * wij, mw(i), mw(j)),
                    });
                }
            }
        }
    }
    for j in 0..t {
        let nbrs: Vec<usize> = (0..t).filter(|&i| i != j && g.has_edge(xs[i], xs[j])).collect();
        for (a, &p) in nbrs.iter().enumerate() {
            for &q in &nbrs[a + 1..] {
                let (wp, wq) = (w(g, xs[p], xs[j]), w(g, xs[q], xs[j]));
                if wp == wq {
                    rep.push(Violation {
                        condition: "2".into(),
                        edges: vec![edge_name(g, xs[p], xs[j]), edge_name(g, xs[j], xs[q])],
                        indices: vec![p + 1, j + 1, q + 1],
                        required: "w_ij != w_jk".into(),
                        actual: format!("{wp} = {wq}"),
                    });
                    continue;
                }
                let ((i, wij), (k, wjk)) = if wp < wq { ((p, wp), (q, wq)) } else { ((q, wq), (p, wp)) };
                let ratio = ceil_div(wjk, wjk - wij);
                if mw(i) < wij * ratio {
                    rep.push(Violation {
                        condition: "2a".into(),
                        edges: vec![edge_name(g, xs[i], m.pairs[i].1)],
                        indices: vec![i + 1, j + 1, k + 1],
                        required: format!("m({}) >= {}*{}", label(i), wij, ratio),
                        actual: format!("{} < {}", mw(i), wij * ratio),
                    });
                }
                let need = wjk * ratio.saturating_sub(2);
                if mw(k) < need {
                    rep.push(Violation {
                        condition: "2b".into(),
                        edges: vec![edge_name(g, xs[k], m.pairs[k].1)],
                        indices: vec![i + 1, j + 1, k + 1],
                        required: format!("m({}) >= {}*({}-2)", label(k), wjk, ratio),
                        actual: format!("{} < {need}", mw(k)),
                    });
                }
            }
        }
    }
    Ok(rep.finish())
}

/// For the tree `x–a–b–c–z` with `y` on `b` and `ω(ab) = ω(bc) = m`: the
/// least integer `n₀ ≥ max{ω(ax), ω(cz)}/m + 2`; powers from `n₀` on are not CM.
pub fn dif_non_cm_threshold(g: &WeightedGraph) -> Result<u64> {
    let bad = |why: &str| Error::Domain(format!("expected the six-vertex caterpillar: {why}"));
    if g.len() != 6 || !g.is_tree() {
        return Err(bad("not a tree on six vertices"));
    }
    let m = pendant_matching(g).ok_or_else(|| bad("no pendant perfect matching"))?;
    let c = core(g, &m)?;
    if c.len() != 3 || c.edge_count() != 2 {
        return Err(bad("core is not a path on three vertices"));
    }
    let mid = (0..3).find(|&v| c.degree(v) == 2).ok_or_else(|| bad("core has no middle"))?;
    let ends: Vec<usize> = (0..3).filter(|&v| v != mid).collect();
    let (w1, w2) = (c.weight(ends[0], mid).unwrap(), c.weight(ends[1], mid).unwrap());
    if w1 != w2 {
        return Err(Error::Hypothesis(format!("core weights differ: {w1} and {w2}")));
    }
    let mm = w1 as u64;
    let p = m.pendant_weight(g, ends[0]) as u64;
    let r = m.pendant_weight(g, ends[1]) as u64;
    Ok(ceil_div(p.max(r), mm) + 2)
}
