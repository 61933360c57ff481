//! Cohen-Macaulayness of `R/I` for monomial ideals, decided two ways.
//!
//! * Reisner route: polarize `I`, take the Stanley-Reisner complex of the
//!   squarefree result and check that every link has vanishing reduced
//!   homology below its dimension.
//! * Depth route: `depth R/I = min_f depth R/√(I : f)` over monomials
//!   `f ∉ I`, each squarefree quotient's depth read off from the homology of
//!   links in its own Stanley-Reisner complex.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::complex::{face_len, walk_closed_faces, Face, SimplicialComplex};
use crate::error::{Error, Result};
use crate::homology::{first_nonzero_degree, reduced_homology, reduced_homology_dual, FieldConfig};
use crate::monomial::{Monomial, MonomialIdeal, Ring, VarSet};

pub const DEFAULT_FACE_BUDGET: u64 = 1 << 24;
pub const DEFAULT_MONOMIAL_BUDGET: u64 = 1 << 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CmOptions {
    pub field: FieldConfig,
    /// Bound on faces, facets or facet intersections materialized for one complex.
    pub face_budget: u64,
    /// Bound on candidate monomials `f` in the depth route.
    pub monomial_budget: u64,
    /// Random samples used to re-check the exponent compression of the depth route.
    pub spot_checks: usize,
    pub seed: u64,
}

impl Default for CmOptions {
    fn default() -> Self {
        CmOptions {
            field: FieldConfig::Rationals,
            face_budget: DEFAULT_FACE_BUDGET,
            monomial_budget: DEFAULT_MONOMIAL_BUDGET,
            spot_checks: 100,
            seed: 0x5eed,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Reisner,
    Depth,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Reisner => "reisner",
            Method::Depth => "depth",
        })
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "reisner" => Ok(Method::Reisner),
            "depth" => Ok(Method::Depth),
            _ => Err(Error::Invalid(format!("unknown method {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CmVerdict {
    pub is_cm: bool,
    /// Known exactly for the depth route, and for the Reisner route when CM.
    pub depth: Option<usize>,
    pub dim: usize,
    /// A monomial `f ∉ I` whose `√(I : f)` has depth below `dim` (depth route only).
    pub witness: Option<Monomial>,
    pub witness_radical: Option<MonomialIdeal>,
    pub method: Method,
    /// Human-readable reason for a negative verdict.
    pub failure: Option<String>,
    /// Distinct radicals examined by the depth route.
    pub radicals: usize,
}

impl CmVerdict {
    pub fn to_json(&self, ring: &Ring) -> serde_json::Value {
        serde_json::json!({
            "is_cm": self.is_cm,
            "depth": self.depth,
            "dim": self.dim,
            "witness": self.witness.as_ref().map(|w| w.to_map(ring)),
            "witness_radical": self.witness_radical.as_ref().map(|r| r.to_string()),
            "method": self.method,
            "failure": self.failure,
        })
    }
}

/// The standard polarization together with the variable correspondence.
#[derive(Clone, Debug)]
pub struct Polarization {
    pub ideal: MonomialIdeal,
    /// `copies[x]` lists the new variables standing for powers of `x`.
    pub copies: Vec<Vec<usize>>,
}

impl Polarization {
    /// Number of variables added by the polarization.
    pub fn extra_variables(&self) -> usize {
        self.ideal.ring().len() - self.copies.len()
    }
}

/// Replaces each exponent of each variable by its rank among the distinct
/// nonzero exponents of that variable in the generators. Ties and order are
/// kept coordinatewise, so the lcm lattice is unchanged, and with it the
/// Betti numbers, the projective dimension and the height: the result is
/// Cohen-Macaulay exactly when the input is.
pub fn rank_compress(ideal: &MonomialIdeal) -> Result<MonomialIdeal> {
    let n = ideal.ring().len();
    let mut values: Vec<Vec<u32>> = vec![Vec::new(); n];
    for g in ideal.generators() {
        for (x, &e) in g.exponents().iter().enumerate() {
            if e > 0 {
                values[x].push(e);
            }
        }
    }
    for v in &mut values {
        v.sort_unstable();
        v.dedup();
    }
    let gens = ideal
        .generators()
        .iter()
        .map(|g| {
            let exps = g
                .exponents()
                .iter()
                .enumerate()
                .map(|(x, &e)| if e == 0 { 0 } else { values[x].binary_search(&e).unwrap() as u32 + 1 })
                .collect();
            Monomial::from_exponents(exps)
        })
        .collect();
    MonomialIdeal::new(ideal.ring().clone(), gens)
}

/// Replaces every `x^e` by `x_1⋯x_e`. Each variable keeps at least one copy,
/// so variables absent from the generators survive as free variables.
pub fn polarize(ideal: &MonomialIdeal) -> Result<Polarization> {
    if ideal.is_zero() {
        return Err(Error::Domain("cannot polarize the zero ideal".into()));
    }
    let ring = ideal.ring();
    let caps = ideal.max_exponents();
    let total: u64 = caps.iter().map(|&c| c.max(1) as u64).sum();
    if total > crate::monomial::MAX_VARIABLES as u64 {
        return Err(Error::Budget(format!(
            "polarization needs {total} variables, limit is {}",
            crate::monomial::MAX_VARIABLES
        )));
    }
    let mut copies = Vec::with_capacity(ring.len());
    let mut next = 0usize;
    for &c in &caps {
        copies.push((next..next + c.max(1) as usize).collect::<Vec<_>>());
        next += c.max(1) as usize;
    }
    let names = |sep: &str| -> Vec<String> {
        let mut v = Vec::with_capacity(next);
        for (i, cs) in copies.iter().enumerate() {
            for j in 1..=cs.len() {
                v.push(format!("{}{sep}{j}", ring.name(i)));
            }
        }
        v
    };
    let new_ring = Ring::new(names("_")).or_else(|_| Ring::new(names("#")))?;
    let gens = ideal
        .generators()
        .iter()
        .map(|g| {
            let mut exps = vec![0u32; next];
            for i in g.support().iter() {
                for &c in &copies[i][..g.exponent(i) as usize] {
                    exps[c] = 1;
                }
            }
            Monomial::from_exponents(exps)
        })
        .collect();
    Ok(Polarization { ideal: MonomialIdeal::new(new_ring, gens)?, copies })
}

fn require_proper_nonzero(ideal: &MonomialIdeal) -> Result<()> {
    if ideal.is_zero() {
        return Err(Error::Domain("the zero ideal is excluded".into()));
    }
    if ideal.is_unit() {
        return Err(Error::Domain("the unit ideal is excluded".into()));
    }
    Ok(())
}

/// Reduced homology of `lk f`, through the facets of the link or through the
/// Alexander dual of its minimal nonfaces, whichever has fewer generators;
/// the other route is tried if the first runs out of budget.
pub fn link_homology(
    delta: &SimplicialComplex,
    f: Face,
    field: FieldConfig,
    face_budget: u64,
) -> Result<Vec<usize>> {
    let facets = delta.link_facets(f);
    let nonfaces = delta.link_nonfaces(f);
    let dim = facets.iter().map(|&g| face_len(g) as isize).max().unwrap_or(0) - 1;
    let via_facets = || reduced_homology(&facets, field, face_budget);
    let via_dual = || reduced_homology_dual(delta.ground() & !f, &nonfaces, dim, field, face_budget);
    if nonfaces.is_empty() {
        return via_facets();
    }
    let (first, second): (&dyn Fn() -> Result<Vec<usize>>, &dyn Fn() -> Result<Vec<usize>>) =
        if nonfaces.len() < facets.len() { (&via_dual, &via_facets) } else { (&via_facets, &via_dual) };
    match first() {
        Err(e) if e.is_budget() => second(),
        other => other,
    }
}

/// First face (in order of increasing size) whose link has reduced homology
/// below the link's dimension, as `(face, degree)`. Assumes a pure complex.
fn reisner_failure(delta: &SimplicialComplex, options: &CmOptions) -> Result<Option<(Face, isize)>> {
    let facets = delta.facets();
    let d = face_len(facets[0]);
    if d < 2 {
        return Ok(None);
    }
    // The whole complex first: it is cheap and often already fails.
    let ranks = link_homology(delta, 0, options.field, options.face_budget)?;
    if let Some(deg) = first_nonzero_degree(&ranks) {
        if deg < d as isize - 1 {
            return Ok(Some((0, deg)));
        }
    }
    // Links of faces with at least d - 1 vertices have dimension <= 0.
    let mut failure = None;
    walk_closed_faces(facets, d - 2, options.face_budget, &mut |f| {
        if f == 0 {
            return Ok(true);
        }
        let k = face_len(f);
        let ranks = link_homology(delta, f, options.field, options.face_budget)?;
        let top = (d - k) as isize - 1;
        if let Some(deg) = first_nonzero_degree(&ranks) {
            if deg < top {
                failure = Some((f, deg));
                return Ok(false);
            }
        }
        Ok(true)
    })?;
    Ok(failure)
}

/// Is `k[Δ]` Cohen-Macaulay?
pub fn is_cm_complex(delta: &SimplicialComplex, options: &CmOptions) -> Result<bool> {
    if delta.facets().is_empty() {
        return Err(Error::Domain("void complex".into()));
    }
    if !delta.is_pure() {
        return Ok(false);
    }
    Ok(reisner_failure(delta, options)?.is_none())
}

/// Reisner route: compress exponents to ranks, polarize and test the
/// Stanley-Reisner complex.
pub fn is_cm_reisner(ideal: &MonomialIdeal, options: &CmOptions) -> Result<CmVerdict> {
    require_proper_nonzero(ideal)?;
    let pol = polarize(&rank_compress(ideal)?)?;
    let delta = SimplicialComplex::stanley_reisner(&pol.ideal, options.face_budget)?;
    let facets = delta.facets();
    let d = face_len(facets[0]);
    let dim = d - pol.extra_variables();
    let mut verdict = CmVerdict {
        is_cm: false,
        depth: None,
        dim,
        witness: None,
        witness_radical: None,
        method: Method::Reisner,
        failure: None,
        radicals: 0,
    };
    let smallest = facets.iter().map(|&f| face_len(f)).min().unwrap_or(0);
    if smallest != d {
        verdict.failure = Some(format!(
            "polarized complex is not pure: facets of sizes {smallest} and {d}"
        ));
        return Ok(verdict);
    }
    match reisner_failure(&delta, options)? {
        Some((face, degree)) => {
            verdict.failure = Some(format!(
                "link of {{{}}} has nonzero reduced homology in degree {degree} below its dimension {}",
                delta.face_names(face).join(","),
                d as isize - face_len(face) as isize - 1
            ));
        }
        None => {
            verdict.is_cm = true;
            verdict.depth = Some(dim);
        }
    }
    Ok(verdict)
}

/// Depth of the Stanley-Reisner ring of a complex: the minimum of
/// `|F| + 1 + i` over faces `F` with `H̃_i(lk F) ≠ 0`. Only intersections of
/// facets can contribute; other links are cones.
pub fn depth_of_complex(delta: &SimplicialComplex, field: FieldConfig, face_budget: u64) -> Result<usize> {
    if delta.facets().is_empty() {
        return Err(Error::Domain("void complex".into()));
    }
    let mut best = usize::MAX;
    let max_size = face_len(delta.facets()[0]);
    walk_closed_faces(delta.facets(), max_size, face_budget, &mut |f| {
        let k = face_len(f);
        if k >= best {
            return Ok(false);
        }
        let ranks = link_homology(delta, f, field, face_budget)?;
        if let Some(deg) = first_nonzero_degree(&ranks) {
            best = best.min((k as isize + 1 + deg) as usize);
        }
        Ok(true)
    })?;
    Ok(best)
}

/// `depth R/J` for a proper squarefree monomial ideal `J`.
pub fn depth_squarefree(ideal: &MonomialIdeal, field: FieldConfig, face_budget: u64) -> Result<usize> {
    let delta = SimplicialComplex::stanley_reisner(ideal, face_budget)?;
    depth_of_complex(&delta, field, face_budget)
}

/// Krull dimension of `R/I` from the largest face of the complex of `√I`.
fn dim_via_radical(ideal: &MonomialIdeal, face_budget: u64) -> Result<usize> {
    let delta = SimplicialComplex::stanley_reisner(&ideal.radical(), face_budget)?;
    Ok(face_len(delta.facets()[0]))
}

/// The distinct radicals `√(I : f)` over all monomials `f ∉ I`, each with the
/// first `f` (in enumeration order) producing it.
///
/// `√(I : f)` is generated by the supports of `g / gcd(g, f)`, and `x` drops
/// out of that support exactly when `deg_x f ≥ deg_x g`. So the radical only
/// depends on which thresholds `deg_x g` each exponent of `f` reaches, and it
/// is enough to let `deg_x f` range over `{0} ∪ {deg_x g : g ∈ G(I)}`. This
/// is a subset of `0..=max_g deg_x g`, beyond which nothing changes either.
pub fn colon_radicals(ideal: &MonomialIdeal, budget: u64) -> Result<Vec<(MonomialIdeal, Monomial)>> {
    require_proper_nonzero(ideal)?;
    let ring = ideal.ring();
    let n = ring.len();
    let gens = ideal.generators();
    let levels = threshold_levels(ideal);
    let candidates = levels
        .iter()
        .try_fold(1u64, |acc, l| acc.checked_mul(l.len() as u64))
        .unwrap_or(u64::MAX);
    if candidates > budget {
        let volume: f64 = ideal
            .max_exponents()
            .iter()
            .map(|&c| c as f64 + 1.0)
            .product();
        return Err(Error::Budget(format!(
            "{candidates} candidate monomials exceed the budget of {budget} \
             (exponent-cap volume {volume:.0})"
        )));
    }

    // Per variable, the generators it appears in.
    let mut occurs: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (j, g) in gens.iter().enumerate() {
        for x in g.support().iter() {
            occurs[x].push(j);
        }
    }

    struct Walk<'a> {
        gens: &'a [Monomial],
        levels: &'a [Vec<u32>],
        occurs: &'a [Vec<usize>],
        exps: Vec<u32>,
        seen: HashMap<Vec<u128>, usize>,
        out: Vec<(Vec<u128>, Vec<u32>)>,
    }

    impl Walk<'_> {
        fn rec(&mut self, x: usize, masks: &mut Vec<u128>) {
            if x == self.levels.len() {
                let key = crate::complex::minimal_sets(masks.clone());
                if !self.seen.contains_key(&key) {
                    self.seen.insert(key.clone(), self.out.len());
                    self.out.push((key, self.exps.clone()));
                }
                return;
            }
            for li in 0..self.levels[x].len() {
                let v = self.levels[x][li];
                let bit = 1u128 << x;
                let mut cleared: Vec<usize> = Vec::new();
                let mut member = false;
                for &j in &self.occurs[x] {
                    if v >= self.gens[j].exponent(x) && masks[j] & bit != 0 {
                        masks[j] &= !bit;
                        cleared.push(j);
                        if masks[j] == 0 {
                            member = true;
                        }
                    }
                }
                if !member {
                    self.exps[x] = v;
                    self.rec(x + 1, masks);
                }
                for &j in &cleared {
                    masks[j] |= bit;
                }
            }
            self.exps[x] = 0;
        }
    }

    let mut walk = Walk {
        gens,
        levels: &levels,
        occurs: &occurs,
        exps: vec![0; n],
        seen: HashMap::new(),
        out: Vec::new(),
    };
    let mut masks: Vec<u128> = gens.iter().map(|g| g.support().0).collect();
    walk.rec(0, &mut masks);

    Ok(walk
        .out
        .into_iter()
        .map(|(key, exps)| {
            let radical = MonomialIdeal::new(
                ring.clone(),
                key.iter().map(|&m| Monomial::of_set(n, VarSet(m))).collect(),
            )
            .expect("same ring");
            (radical, Monomial::from_exponents(exps))
        })
        .collect())
}

/// Per variable, the sorted distinct values `{0} ∪ {deg_x g}`.
fn threshold_levels(ideal: &MonomialIdeal) -> Vec<Vec<u32>> {
    let n = ideal.ring().len();
    let mut levels: Vec<Vec<u32>> = vec![vec![0]; n];
    for g in ideal.generators() {
        for x in g.support().iter() {
            levels[x].push(g.exponent(x));
        }
    }
    for l in &mut levels {
        l.sort_unstable();
        l.dedup();
    }
    levels
}

/// Random monomials with exponents up to one past the generator maxima must
/// have the same colon radical as their compressed representatives.
fn spot_check_compression(ideal: &MonomialIdeal, samples: usize, seed: u64) -> Result<()> {
    let levels = threshold_levels(ideal);
    let caps = ideal.max_exponents();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let f: Vec<u32> = caps.iter().map(|&c| rng.gen_range(0..=c + 1)).collect();
        let compressed: Vec<u32> = f
            .iter()
            .zip(&levels)
            .map(|(&e, l)| *l.iter().rev().find(|&&v| v <= e).unwrap_or(&0))
            .collect();
        let f = Monomial::from_exponents(f);
        let c = Monomial::from_exponents(compressed);
        let a = ideal.colon(&f)?.radical();
        let b = ideal.colon(&c)?.radical();
        if a != b {
            return Err(Error::Domain(format!(
                "exponent compression check failed for {} in {ideal}",
                f.display(ideal.ring())
            )));
        }
    }
    Ok(())
}

/// Depth route: minimum depth over the distinct colon radicals.
pub fn depth_monomial(ideal: &MonomialIdeal, options: &CmOptions) -> Result<CmVerdict> {
    require_proper_nonzero(ideal)?;
    if ideal.ring().len() > 64 {
        return Err(Error::Domain("the depth route supports at most 64 variables".into()));
    }
    let dim = dim_via_radical(ideal, options.face_budget)?;
    spot_check_compression(ideal, options.spot_checks, options.seed)?;
    let radicals = colon_radicals(ideal, options.monomial_budget)?;
    // The radicals are pairwise distinct, so each depth is computed once.
    let mut best: Option<(usize, usize)> = None;
    for (i, (rad, _)) in radicals.iter().enumerate() {
        let depth = depth_squarefree(rad, options.field, options.face_budget)?;
        if best.is_none_or(|(b, _)| depth < b) {
            best = Some((depth, i));
        }
    }
    let (depth, at) = best.expect("f = 1 is never in a proper ideal");
    let is_cm = depth == dim;
    let (witness, witness_radical, failure) = if is_cm {
        (None, None, None)
    } else {
        let (rad, f) = &radicals[at];
        (
            Some(f.clone()),
            Some(rad.clone()),
            Some(format!(
                "depth of R/√(I : {}) = {rad} is {depth} < {dim}",
                f.display(ideal.ring())
            )),
        )
    };
    Ok(CmVerdict {
        is_cm,
        depth: Some(depth),
        dim,
        witness,
        witness_radical,
        method: Method::Depth,
        failure,
        radicals: radicals.len(),
    })
}

/// Runs the requested route.
pub fn check_cm(ideal: &MonomialIdeal, method: Method, options: &CmOptions) -> Result<CmVerdict> {
    match method {
        Method::Reisner => is_cm_reisner(ideal, options),
        Method::Depth => depth_monomial(ideal, options),
    }
}

/// Reduced homology ranks of a complex, for degrees `-1 ..= dim`.
pub fn reduced_homology_ranks(
    complex: &SimplicialComplex,
    field: FieldConfig,
    face_budget: u64,
) -> Result<Vec<usize>> {
    reduced_homology(complex.facets(), field, face_budget)
}
