//! Simplicial complexes on at most 128 vertices, faces stored as bit masks.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::monomial::MonomialIdeal;

/// A set of vertices, bit `i` standing for vertex `i`.
pub type Face = u128;

pub fn face_len(f: Face) -> usize {
    f.count_ones() as usize
}

pub fn face_vertices(f: Face) -> impl Iterator<Item = usize> {
    let mut rest = f;
    std::iter::from_fn(move || {
        if rest == 0 {
            None
        } else {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(v)
        }
    })
}

/// Keeps the inclusion-minimal sets, sorted by size then value.
pub fn minimal_sets(mut sets: Vec<Face>) -> Vec<Face> {
    sets.sort_unstable_by_key(|&s| (s.count_ones(), s));
    sets.dedup();
    let mut out: Vec<Face> = Vec::with_capacity(sets.len());
    for s in sets {
        if !out.iter().any(|&t| t & s == t) {
            out.push(s);
        }
    }
    out
}

/// Keeps the inclusion-maximal sets, largest first.
pub fn maximal_sets(mut sets: Vec<Face>) -> Vec<Face> {
    sets.sort_unstable_by_key(|&s| (std::cmp::Reverse(s.count_ones()), s));
    sets.dedup();
    let mut out: Vec<Face> = Vec::with_capacity(sets.len());
    for s in sets {
        if !out.iter().any(|&t| t & s == s) {
            out.push(s);
        }
    }
    out
}

/// Inclusion-minimal sets meeting every edge of the hypergraph, by adding one
/// edge at a time. `budget` bounds the number of intermediate transversals.
pub fn minimal_transversals(edges: &[Face], budget: u64) -> Result<Vec<Face>> {
    let mut edges = minimal_sets(edges.to_vec());
    if edges.first() == Some(&0) {
        return Ok(Vec::new());
    }
    edges.sort_unstable_by_key(|&e| (e.count_ones(), e));
    let mut current: Vec<Face> = vec![0];
    for &e in &edges {
        let mut hit: Vec<Face> = Vec::with_capacity(current.len());
        let mut grown: Vec<Face> = Vec::new();
        for &t in &current {
            if t & e != 0 {
                hit.push(t);
            } else {
                for v in face_vertices(e) {
                    grown.push(t | (1u128 << v));
                }
            }
        }
        grown = minimal_sets(grown);
        grown.retain(|&g| !hit.iter().any(|&h| h & g == h));
        hit.extend(grown);
        if hit.len() as u64 > budget {
            return Err(Error::Budget(format!(
                "more than {budget} minimal transversals while building facets"
            )));
        }
        current = hit;
    }
    current.sort_unstable();
    Ok(current)
}

/// A simplicial complex on the vertex set `0..n`, described by both its
/// minimal nonfaces and its facets. Vertices may be absent from every face.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    names: Vec<String>,
    minimal_nonfaces: Vec<Face>,
    facets: Vec<Face>,
}

impl SimplicialComplex {
    /// The complex whose minimal nonfaces are `nonfaces` (minimalized).
    pub fn from_nonfaces(names: Vec<String>, nonfaces: Vec<Face>, budget: u64) -> Result<Self> {
        if names.len() > 128 {
            return Err(Error::Domain("complexes are limited to 128 vertices".into()));
        }
        let ground = ground(names.len());
        let minimal_nonfaces = minimal_sets(nonfaces);
        if minimal_nonfaces.iter().any(|&n| n & !ground != 0) {
            return Err(Error::AmbientMismatch("nonface outside the vertex set".into()));
        }
        let mut facets: Vec<Face> = minimal_transversals(&minimal_nonfaces, budget)?
            .into_iter()
            .map(|t| ground & !t)
            .collect();
        facets.sort_unstable_by_key(|&f| (std::cmp::Reverse(f.count_ones()), f));
        Ok(SimplicialComplex { names, minimal_nonfaces, facets })
    }

    /// The complex generated by the given faces.
    pub fn from_facets(names: Vec<String>, faces: Vec<Face>, budget: u64) -> Result<Self> {
        let ground = ground(names.len());
        if faces.iter().any(|&f| f & !ground != 0) {
            return Err(Error::AmbientMismatch("face outside the vertex set".into()));
        }
        // Minimal nonfaces are the minimal transversals of the facet complements.
        let comps: Vec<Face> = faces.iter().map(|&f| ground & !f).collect();
        let nonfaces = if faces.is_empty() {
            vec![0]
        } else {
            minimal_transversals(&comps, budget)?
        };
        SimplicialComplex::from_nonfaces(names, nonfaces, budget)
    }

    /// The Stanley-Reisner complex of a squarefree ideal.
    pub fn stanley_reisner(ideal: &MonomialIdeal, budget: u64) -> Result<Self> {
        if !ideal.is_squarefree() {
            return Err(Error::Domain(format!("{ideal} is not squarefree")));
        }
        if ideal.is_unit() {
            return Err(Error::Domain("the unit ideal has no Stanley-Reisner complex".into()));
        }
        let nonfaces = ideal.generators().iter().map(|g| g.support().0).collect();
        SimplicialComplex::from_nonfaces(ideal.ring().names().to_vec(), nonfaces, budget)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn minimal_nonfaces(&self) -> &[Face] {
        &self.minimal_nonfaces
    }

    /// Facets, largest first.
    pub fn facets(&self) -> &[Face] {
        &self.facets
    }

    pub fn is_face(&self, f: Face) -> bool {
        !self.minimal_nonfaces.iter().any(|&n| n & f == n)
    }

    /// Dimension (`-1` for `{∅}`).
    pub fn dim(&self) -> isize {
        self.facets.first().map_or(-1, |&f| face_len(f) as isize - 1)
    }

    pub fn is_pure(&self) -> bool {
        self.facets.iter().all(|&f| face_len(f) == face_len(self.facets[0]))
    }

    /// Facets of the link of a face.
    pub fn link_facets(&self, f: Face) -> Vec<Face> {
        link_facets(&self.facets, f)
    }

    /// All intersections of nonempty families of facets, plus `∅`, sorted by
    /// size. Faces outside this set have links that are cones. `budget` bounds
    /// the number of pairwise intersections computed.
    pub fn closed_faces(&self, budget: u64) -> Result<Vec<Face>> {
        closed_faces(&self.facets, budget)
    }

    /// The vertex set as a mask.
    pub fn ground(&self) -> Face {
        ground(self.names.len())
    }

    /// Minimal nonfaces of the link of the face `f`, as a complex on the
    /// vertices outside `f`: the minimal sets among `N ∖ f`.
    pub fn link_nonfaces(&self, f: Face) -> Vec<Face> {
        minimal_sets(self.minimal_nonfaces.iter().map(|&n| n & !f).collect())
    }

    pub fn face_names(&self, f: Face) -> Vec<String> {
        face_vertices(f).map(|v| self.names[v].clone()).collect()
    }
}

fn ground(n: usize) -> Face {
    if n == 128 {
        !0
    } else {
        (1u128 << n) - 1
    }
}

pub fn link_facets(facets: &[Face], f: Face) -> Vec<Face> {
    facets
        .iter()
        .filter(|&&g| g & f == f)
        .map(|&g| g & !f)
        .collect()
}

pub fn closed_faces(facets: &[Face], budget: u64) -> Result<Vec<Face>> {
    let mut seen: HashSet<Face> = facets.iter().copied().collect();
    seen.insert(0);
    let mut frontier: Vec<Face> = facets.to_vec();
    let mut work = 0u64;
    while let Some(x) = frontier.pop() {
        work += facets.len() as u64;
        if work > budget {
            return Err(Error::Budget(format!("more than {budget} facet intersections")));
        }
        for &g in facets {
            let y = x & g;
            if seen.insert(y) {
                frontier.push(y);
            }
        }
    }
    let mut out: Vec<Face> = seen.into_iter().collect();
    out.sort_unstable_by_key(|&f| (f.count_ones(), f));
    Ok(out)
}

/// Visits the closed faces (intersections of facets containing them) with at
/// most `max_size` vertices, in order of increasing size, then mask. Each is
/// reached as the closure of a smaller closed face plus one vertex, so larger
/// faces are never built. `visit` returns false to stop early. `budget`
/// bounds the number of facet tests performed.
pub fn walk_closed_faces(
    facets: &[Face],
    max_size: usize,
    budget: u64,
    visit: &mut dyn FnMut(Face) -> Result<bool>,
) -> Result<()> {
    use std::collections::{BTreeMap, HashSet};
    if facets.is_empty() {
        return Ok(());
    }
    let mut work = 0u64;
    let mut charge = |n: usize| -> Result<()> {
        work += n as u64;
        if work > budget {
            return Err(Error::Budget(format!("more than {budget} facet intersections")));
        }
        Ok(())
    };
    let all: Vec<u32> = (0..facets.len() as u32).collect();
    charge(all.len())?;
    let bottom = facets.iter().fold(!0u128, |acc, f| acc & f);
    // Pending faces keyed by (size, mask), each with the facets containing it.
    let mut queue: BTreeMap<(u32, Face), Vec<u32>> = BTreeMap::new();
    let mut seen: HashSet<Face> = HashSet::new();
    if face_len(bottom) <= max_size {
        queue.insert((bottom.count_ones(), bottom), all);
        seen.insert(bottom);
    }
    while let Some(((_, f), containing)) = queue.pop_first() {
        if !visit(f)? {
            return Ok(());
        }
        let reach = containing.iter().fold(0u128, |acc, &i| acc | facets[i as usize]) & !f;
        for v in face_vertices(reach) {
            let bit = 1u128 << v;
            charge(containing.len())?;
            let sub: Vec<u32> = containing
                .iter()
                .copied()
                .filter(|&i| facets[i as usize] & bit != 0)
                .collect();
            let closure = sub.iter().fold(!0u128, |acc, &i| acc & facets[i as usize]);
            if face_len(closure) <= max_size && seen.insert(closure) {
                queue.insert((closure.count_ones(), closure), sub);
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monomial::Ring;

    fn set(v: &[u32]) -> Face {
        v.iter().fold(0, |acc, &i| acc | (1u128 << i))
    }

    #[test]
    fn single_edge_ideal_gives_two_points() {
        let r = Ring::new(["x", "y"]).unwrap();
        let i = MonomialIdeal::parse(r, &["x*y"]).unwrap();
        let c = SimplicialComplex::stanley_reisner(&i, 1000).unwrap();
        let mut f = c.facets().to_vec();
        f.sort();
        assert_eq!(f, vec![set(&[0]), set(&[1])]);
    }

    #[test]
    fn path_complex_facets_are_independent_sets() {
        let r = Ring::new(["a", "b", "x", "y"]).unwrap();
        let i = MonomialIdeal::parse(r, &["a*x", "a*b", "b*y"]).unwrap();
        let c = SimplicialComplex::stanley_reisner(&i, 1000).unwrap();
        let mut names: Vec<Vec<String>> = c.facets().iter().map(|&f| c.face_names(f)).collect();
        names.sort();
        assert_eq!(names, vec![vec!["a", "y"], vec!["b", "x"], vec!["x", "y"]]);
        assert!(c.is_pure());
        assert_eq!(c.dim(), 1);
    }

    #[test]
    fn rejects_unit_and_non_squarefree() {
        let r = Ring::new(["x", "y"]).unwrap();
        assert!(SimplicialComplex::stanley_reisner(&MonomialIdeal::unit(r.clone()), 10).is_err());
        let sq = MonomialIdeal::parse(r, &["x^2"]).unwrap();
        assert!(matches!(
            SimplicialComplex::stanley_reisner(&sq, 10),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn zero_ideal_gives_simplex_and_maximal_ideal_gives_empty_face() {
        let r = Ring::new(["x", "y"]).unwrap();
        let c = SimplicialComplex::stanley_reisner(&MonomialIdeal::zero(r.clone()), 10).unwrap();
        assert_eq!(c.facets(), &[set(&[0, 1])]);
        let m = MonomialIdeal::parse(r, &["x", "y"]).unwrap();
        let c = SimplicialComplex::stanley_reisner(&m, 10).unwrap();
        assert_eq!(c.facets(), &[0]);
        assert_eq!(c.dim(), -1);
    }

    #[test]
    fn facets_and_nonfaces_round_trip() {
        let names: Vec<String> = (0..5).map(|i| format!("v{i}")).collect();
        let facets = vec![set(&[0, 1, 2]), set(&[2, 3]), set(&[3, 4]), set(&[0, 4])];
        let c = SimplicialComplex::from_facets(names.clone(), facets.clone(), 1000).unwrap();
        let mut got = c.facets().to_vec();
        got.sort();
        let mut want = facets;
        want.sort();
        assert_eq!(got, want);
        let d = SimplicialComplex::from_nonfaces(names, c.minimal_nonfaces().to_vec(), 1000).unwrap();
        assert_eq!(c, d);
    }

    #[test]
    fn links_and_closure() {
        let facets = vec![set(&[0, 1, 2]), set(&[1, 2, 3]), set(&[3, 4])];
        let mut lk = link_facets(&facets, set(&[1, 2]));
        lk.sort();
        assert_eq!(lk, vec![set(&[0]), set(&[3])]);
        let closed = closed_faces(&facets, 100).unwrap();
        assert_eq!(
            closed,
            vec![0, set(&[3]), set(&[1, 2]), set(&[3, 4]), set(&[0, 1, 2]), set(&[1, 2, 3])]
        );
    }

    #[test]
    fn walk_matches_closed_faces() {
        let facets = vec![set(&[0, 1, 2]), set(&[1, 2, 3]), set(&[3, 4]), set(&[0, 4])];
        let mut walked = Vec::new();
        walk_closed_faces(&facets, 128, 1000, &mut |f| {
            walked.push(f);
            Ok(true)
        })
        .unwrap();
        assert_eq!(walked, closed_faces(&facets, 1000).unwrap());
        let mut small = Vec::new();
        walk_closed_faces(&facets, 1, 1000, &mut |f| {
            small.push(f);
            Ok(true)
        })
        .unwrap();
        assert_eq!(small, vec![0, set(&[0]), set(&[3]), set(&[4])]);
    }

    #[test]
    fn walk_starts_at_common_part_of_a_cone() {
        let facets = vec![set(&[0, 1]), set(&[0, 2])];
        let mut walked = Vec::new();
        walk_closed_faces(&facets, 128, 1000, &mut |f| {
            walked.push(f);
            Ok(true)
        })
        .unwrap();
        assert_eq!(walked, vec![set(&[0]), set(&[0, 1]), set(&[0, 2])]);
    }

    proptest::proptest! {
        #[test]
        fn walk_agrees_with_pairwise_closure(raw in proptest::collection::vec(1u128..1024, 1..9)) {
            let facets = maximal_sets(raw);
            let mut walked = Vec::new();
            walk_closed_faces(&facets, 128, 1 << 20, &mut |f| {
                walked.push(f);
                Ok(true)
            })
            .unwrap();
            let bottom = facets.iter().fold(!0u128, |acc, f| acc & f);
            let mut expected = closed_faces(&facets, 1 << 20).unwrap();
            expected.retain(|&f| f & bottom == bottom);
            proptest::prop_assert_eq!(walked, expected);
        }
    }

    #[test]
    fn transversals_of_triangle_edges() {
        let t = minimal_transversals(&[set(&[0, 1]), set(&[1, 2]), set(&[0, 2])], 100).unwrap();
        assert_eq!(t, vec![set(&[0, 1]), set(&[0, 2]), set(&[1, 2])]);
        assert!(minimal_transversals(&[0], 100).unwrap().is_empty());
        assert_eq!(minimal_transversals(&[], 100).unwrap(), vec![0]);
    }
}
