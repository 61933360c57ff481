//! Exact reduced simplicial homology ranks of complexes given by facets.
//!
//! Ranks of boundary maps are computed by sparse column reduction. Over the
//! rationals the reduction is fraction-free on `i128` columns (content divided
//! out after every step) and restarts on arbitrary-precision integers if an
//! entry ever overflows.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::complex::{maximal_sets, Face};
use crate::error::{Error, Result};

/// Coefficient field for homology.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldConfig {
    #[default]
    Rationals,
    Prime(u64),
}

impl FieldConfig {
    pub fn prime(p: u64) -> Result<Self> {
        if p > u32::MAX as u64 {
            return Err(Error::Invalid(format!("prime {p} exceeds 2^32")));
        }
        if !is_prime(p) {
            return Err(Error::Invalid(format!("{p} is not prime")));
        }
        Ok(FieldConfig::Prime(p))
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl FromStr for FieldConfig {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "q" | "Q" | "rationals" => Ok(FieldConfig::Rationals),
            _ => match s.strip_prefix("fp:") {
                Some(p) => FieldConfig::prime(
                    p.parse()
                        .map_err(|_| Error::Invalid(format!("bad prime in field {s:?}")))?,
                ),
                None => Err(Error::Invalid(format!(
                    "unknown field {s:?}, expected q or fp:<p>"
                ))),
            },
        }
    }
}

impl fmt::Display for FieldConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldConfig::Rationals => write!(f, "q"),
            FieldConfig::Prime(p) => write!(f, "fp:{p}"),
        }
    }
}

/// Reduced homology ranks of the complex with the given facets, indexed by
/// degree + 1 (so entry 0 is `H̃_{-1}`), for degrees `-1 ..= dim`.
///
/// An empty facet list is the void complex and yields an empty vector.
/// `face_budget` bounds the number of faces materialized.
pub fn reduced_homology(facets: &[Face], field: FieldConfig, face_budget: u64) -> Result<Vec<usize>> {
    if facets.is_empty() {
        return Ok(Vec::new());
    }
    let dim = facets.iter().map(|f| f.count_ones() as usize).max().unwrap_or(0) as isize - 1;
    let len = (dim + 2) as usize;
    let mut out = vec![0; len];
    if facets.len() == 1 && facets[0] == 0 {
        out[0] = 1;
        return Ok(out);
    }
    let facets = core_of(facets.to_vec());
    if facets.len() == 1 {
        // Collapsed to a simplex.
        return Ok(out);
    }
    let facets = &facets[..];

    let direct_count = count_faces(facets, face_budget.saturating_add(1));
    let nerve_count = if facets.len() <= 128 {
        count_nerve_faces(facets, direct_count.min(face_budget.saturating_add(1)))
    } else {
        u64::MAX
    };
    let by_size = if nerve_count < direct_count {
        nerve_faces(facets)
    } else {
        if direct_count > face_budget {
            return Err(Error::Budget(format!(
                "complex with {} facets has more than {face_budget} faces",
                facets.len()
            )));
        }
        faces_by_size(facets)
    };
    let ranks = homology_from_faces(&by_size, field);
    for (i, r) in ranks.into_iter().enumerate().take(len) {
        out[i] = r;
    }
    Ok(out)
}

/// Reduced homology of the complex on `ground` whose minimal nonfaces are
/// `nonfaces`, through Alexander duality: `H̃_i(Δ) ≅ H̃^{n-i-3}(Δ^∨)` where
/// the facets of `Δ^∨` are the complements of the minimal nonfaces. Output is
/// indexed like [`reduced_homology`] for degrees `-1 ..= dim`.
///
/// Requires at least one nonface and none of them empty.
pub fn reduced_homology_dual(
    ground: Face,
    nonfaces: &[Face],
    dim: isize,
    field: FieldConfig,
    face_budget: u64,
) -> Result<Vec<usize>> {
    if nonfaces.is_empty() || nonfaces.iter().any(|&n| n == 0 || n & !ground != 0) {
        return Err(Error::Domain("dual homology needs nonempty nonfaces inside the ground set".into()));
    }
    let n = ground.count_ones() as isize;
    let dual: Vec<Face> = maximal_sets(nonfaces.iter().map(|&m| ground & !m).collect());
    let dual_ranks = reduced_homology(&dual, field, face_budget)?;
    let len = (dim + 2).max(0) as usize;
    Ok((0..len)
        .map(|k| {
            let i = k as isize - 1;
            let j = n - i - 3;
            if j < -1 {
                0
            } else {
                dual_ranks.get((j + 1) as usize).copied().unwrap_or(0)
            }
        })
        .collect())
}

/// Removes dominated vertices until none is left. A vertex `v` is dominated
/// when every facet through `v` also contains some other vertex `w`; deleting
/// it is a strong collapse and keeps the homotopy type.
fn remove_dominated(mut facets: Vec<Face>) -> Vec<Face> {
    'outer: loop {
        let verts = facets.iter().fold(0u128, |acc, f| acc | f);
        let mut rest = verts;
        while rest != 0 {
            let v = rest.trailing_zeros();
            rest &= rest - 1;
            let bit = 1u128 << v;
            let common = facets
                .iter()
                .filter(|&&f| f & bit != 0)
                .fold(!0u128, |acc, f| acc & f);
            if common & !bit != 0 {
                for f in facets.iter_mut() {
                    *f &= !bit;
                }
                facets = maximal_sets(facets);
                continue 'outer;
            }
        }
        return facets;
    }
}

/// Facets of the nerve of the facet cover: for each vertex, the set of
/// facets through it, keeping the maximal ones.
fn nerve_facets(facets: &[Face]) -> Vec<Face> {
    let verts = facets.iter().fold(0u128, |acc, f| acc | f);
    let mut out = Vec::new();
    let mut rest = verts;
    while rest != 0 {
        let v = rest.trailing_zeros();
        rest &= rest - 1;
        let set = facets
            .iter()
            .enumerate()
            .filter(|(_, &f)| f >> v & 1 == 1)
            .fold(0u128, |acc, (j, _)| acc | (1u128 << j));
        out.push(set);
    }
    maximal_sets(out)
}

/// Alternates dominated-vertex removal with passing to the nerve while the
/// nerve has fewer vertices. The result has the homotopy type of the input.
fn core_of(facets: Vec<Face>) -> Vec<Face> {
    let mut facets = remove_dominated(facets);
    loop {
        let nverts = facets.iter().fold(0u128, |acc, f| acc | f).count_ones() as usize;
        if facets.len() <= 1 || facets.len() > 128 || facets.len() >= nverts {
            return facets;
        }
        facets = remove_dominated(nerve_facets(&facets));
    }
}

/// Smallest degree with nonzero reduced homology, if any.
pub fn first_nonzero_degree(ranks: &[usize]) -> Option<isize> {
    ranks.iter().position(|&r| r != 0).map(|i| i as isize - 1)
}

fn count_faces(facets: &[Face], limit: u64) -> u64 {
    let mut count = 0u64;
    walk_faces(facets, &mut |_| {
        count += 1;
        count < limit
    });
    count
}

/// Depth-first walk over all faces (each exactly once, `∅` first). The callback
/// returns false to stop.
fn walk_faces(facets: &[Face], visit: &mut dyn FnMut(Face) -> bool) {
    let all: Vec<usize> = (0..facets.len()).collect();
    fn rec(
        facets: &[Face],
        face: Face,
        next: u32,
        containing: &[usize],
        visit: &mut dyn FnMut(Face) -> bool,
    ) -> bool {
        if !visit(face) {
            return false;
        }
        let reach = containing.iter().fold(0u128, |acc, &i| acc | facets[i]);
        let mut cand = if next >= 128 { 0 } else { reach & (!0u128 << next) };
        while cand != 0 {
            let v = cand.trailing_zeros();
            cand &= cand - 1;
            let bit = 1u128 << v;
            let sub: Vec<usize> = containing
                .iter()
                .copied()
                .filter(|&i| facets[i] & bit != 0)
                .collect();
            if !rec(facets, face | bit, v + 1, &sub, visit) {
                return false;
            }
        }
        true
    }
    rec(facets, 0, 0, &all, visit);
}

fn faces_by_size(facets: &[Face]) -> Vec<Vec<Face>> {
    let mut by_size: Vec<Vec<Face>> = Vec::new();
    walk_faces(facets, &mut |f| {
        let k = f.count_ones() as usize;
        if by_size.len() <= k {
            by_size.resize(k + 1, Vec::new());
        }
        by_size[k].push(f);
        true
    });
    for v in &mut by_size {
        v.sort_unstable();
    }
    by_size
}

/// Walk over nonempty sets of facets with a common vertex (the nerve of the
/// facet cover, which has the homotopy type of the complex).
fn walk_nerve(facets: &[Face], visit: &mut dyn FnMut(Face) -> bool) {
    fn rec(facets: &[Face], set: Face, inter: Face, next: usize, visit: &mut dyn FnMut(Face) -> bool) -> bool {
        for j in next..facets.len() {
            let i2 = inter & facets[j];
            if i2 != 0 {
                let s = set | (1u128 << j);
                if !visit(s) || !rec(facets, s, i2, j + 1, visit) {
                    return false;
                }
            }
        }
        true
    }
    rec(facets, 0, !0u128, 0, visit);
}

fn count_nerve_faces(facets: &[Face], limit: u64) -> u64 {
    let mut count = 1u64; // the empty face
    walk_nerve(facets, &mut |_| {
        count += 1;
        count < limit
    });
    count
}

fn nerve_faces(facets: &[Face]) -> Vec<Vec<Face>> {
    let mut by_size: Vec<Vec<Face>> = vec![vec![0]];
    walk_nerve(facets, &mut |f| {
        let k = f.count_ones() as usize;
        if by_size.len() <= k {
            by_size.resize(k + 1, Vec::new());
        }
        by_size[k].push(f);
        true
    });
    for v in &mut by_size {
        v.sort_unstable();
    }
    by_size
}

/// `by_size[k]` lists the faces with `k` vertices; `by_size[0] = [∅]`.
fn homology_from_faces(by_size: &[Vec<Face>], field: FieldConfig) -> Vec<usize> {
    // ranks[k] = rank of the boundary from k-vertex faces to (k-1)-vertex faces.
    let mut ranks = vec![0usize; by_size.len() + 1];
    for k in 1..by_size.len() {
        ranks[k] = boundary_rank(&by_size[k - 1], &by_size[k], field);
    }
    (0..by_size.len())
        .map(|k| by_size[k].len() - ranks[k] - ranks[k + 1])
        .collect()
}

fn boundary_rank(rows: &[Face], cols: &[Face], field: FieldConfig) -> usize {
    if rows.is_empty() || cols.is_empty() {
        return 0;
    }
    let index: HashMap<Face, u32> = rows.iter().enumerate().map(|(i, &f)| (f, i as u32)).collect();
    let columns: Vec<Vec<(u32, i64)>> = cols
        .iter()
        .map(|&f| {
            let mut col = Vec::with_capacity(f.count_ones() as usize);
            let mut rest = f;
            let mut pos = 0;
            while rest != 0 {
                let v = rest.trailing_zeros();
                rest &= rest - 1;
                let sign = if pos % 2 == 0 { 1 } else { -1 };
                col.push((index[&(f & !(1u128 << v))], sign));
                pos += 1;
            }
            col.sort_unstable_by_key(|e| e.0);
            col
        })
        .collect();
    match field {
        FieldConfig::Prime(p) => reduce_rank(&ModP(p), &columns, rows.len())
            .expect("modular arithmetic cannot overflow"),
        FieldConfig::Rationals => match reduce_rank(&SmallInt, &columns, rows.len()) {
            Some(r) => r,
            None => reduce_rank(&BigInts, &columns, rows.len())
                .expect("arbitrary-precision arithmetic cannot overflow"),
        },
    }
}

trait Arith {
    type S: Clone;
    fn lift(&self, v: i64) -> Self::S;
    fn is_zero(&self, s: &Self::S) -> bool;
    /// `a*x - b*y`, or `None` on overflow.
    fn axby(&self, a: &Self::S, x: &Self::S, b: &Self::S, y: &Self::S) -> Option<Self::S>;
    fn normalize(&self, _col: &mut [(u32, Self::S)]) {}
}

struct ModP(u64);

impl Arith for ModP {
    type S = u64;
    fn lift(&self, v: i64) -> u64 {
        v.rem_euclid(self.0 as i64) as u64
    }
    fn is_zero(&self, s: &u64) -> bool {
        *s == 0
    }
    fn axby(&self, a: &u64, x: &u64, b: &u64, y: &u64) -> Option<u64> {
        let p = self.0;
        let l = a * x % p;
        let r = b * y % p;
        Some((l + p - r) % p)
    }
}

struct SmallInt;

impl Arith for SmallInt {
    type S = i128;
    fn lift(&self, v: i64) -> i128 {
        v as i128
    }
    fn is_zero(&self, s: &i128) -> bool {
        *s == 0
    }
    fn axby(&self, a: &i128, x: &i128, b: &i128, y: &i128) -> Option<i128> {
        a.checked_mul(*x)?.checked_sub(b.checked_mul(*y)?)
    }
    fn normalize(&self, col: &mut [(u32, i128)]) {
        let g = col.iter().fold(0i128, |g, (_, v)| g.gcd(v));
        if g > 1 {
            for (_, v) in col.iter_mut() {
                *v /= g;
            }
        }
    }
}

struct BigInts;

impl Arith for BigInts {
    type S = BigInt;
    fn lift(&self, v: i64) -> BigInt {
        BigInt::from(v)
    }
    fn is_zero(&self, s: &BigInt) -> bool {
        s.is_zero()
    }
    fn axby(&self, a: &BigInt, x: &BigInt, b: &BigInt, y: &BigInt) -> Option<BigInt> {
        Some(a * x - b * y)
    }
    fn normalize(&self, col: &mut [(u32, BigInt)]) {
        let g = col.iter().fold(BigInt::zero(), |g, (_, v)| g.gcd(v)).abs();
        if g > BigInt::one() {
            for (_, v) in col.iter_mut() {
                *v /= &g;
            }
        }
    }
}

/// Rank by column reduction with pivots at the lowest (largest-index) row.
fn reduce_rank<A: Arith>(ar: &A, columns: &[Vec<(u32, i64)>], nrows: usize) -> Option<usize> {
    let mut pivot_of: Vec<u32> = vec![u32::MAX; nrows];
    let mut store: Vec<Vec<(u32, A::S)>> = Vec::new();
    for col in columns {
        let mut c: Vec<(u32, A::S)> = col.iter().map(|&(r, v)| (r, ar.lift(v))).collect();
        loop {
            let Some((low, _)) = c.last() else { break };
            let low = *low as usize;
            let j = pivot_of[low];
            if j == u32::MAX {
                pivot_of[low] = store.len() as u32;
                store.push(c);
                break;
            }
            let p = &store[j as usize];
            let pl = &p.last().unwrap().1;
            let cl = c.last().unwrap().1.clone();
            c = combine(ar, pl, &c, &cl, p)?;
            ar.normalize(&mut c);
        }
    }
    Some(store.len())
}

/// `a*x - b*y` for sparse sorted columns, dropping zeros.
fn combine<A: Arith>(
    ar: &A,
    a: &A::S,
    x: &[(u32, A::S)],
    b: &A::S,
    y: &[(u32, A::S)],
) -> Option<Vec<(u32, A::S)>> {
    let zero = ar.lift(0);
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let (row, v) = if j >= y.len() || (i < x.len() && x[i].0 < y[j].0) {
            let r = (x[i].0, ar.axby(a, &x[i].1, b, &zero)?);
            i += 1;
            r
        } else if i >= x.len() || y[j].0 < x[i].0 {
            let r = (y[j].0, ar.axby(a, &zero, b, &y[j].1)?);
            j += 1;
            r
        } else {
            let r = (x[i].0, ar.axby(a, &x[i].1, b, &y[j].1)?);
            i += 1;
            j += 1;
            r
        };
        if !ar.is_zero(&v) {
            out.push((row, v));
        }
    }
    Some(out)
}
