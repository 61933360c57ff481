//! Irreducible and primary decompositions of monomial ideals, and everything
//! derived from them: associated and minimal primes, height, unmixedness,
//! symbolic powers.
//!
//! The irreducible decomposition is built one generator at a time. Monomial
//! ideals form a distributive lattice, so for an irreducible `Q` and a
//! monomial `g`,
//!
//! ```text
//! Q + (g) = Q                                   if g ∈ Q
//!         = ∩_{x ∈ supp g} (Q + (x^{deg_x g}))  otherwise,
//! ```
//!
//! and every `Q + (x^e)` is again irreducible. Dropping components that
//! contain another one after each step keeps the list irredundant.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::monomial::{Monomial, MonomialIdeal, Ring, VarSet};

/// An ideal generated by pure powers `x^e(x)`, stored as the exponent vector `e`
/// (a zero entry means the variable is absent).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IrreducibleComponent {
    exponents: Monomial,
}

impl IrreducibleComponent {
    pub fn new(exponents: Monomial) -> Self {
        IrreducibleComponent { exponents }
    }

    pub fn exponents(&self) -> &Monomial {
        &self.exponents
    }

    /// The associated prime, as the set of variables with a pure power.
    pub fn prime(&self) -> VarSet {
        self.exponents.support()
    }

    pub fn to_ideal(&self, ring: &Arc<Ring>) -> MonomialIdeal {
        let n = ring.len();
        let gens = self
            .exponents
            .support()
            .iter()
            .map(|i| Monomial::var_power(n, i, self.exponents.exponent(i)))
            .collect();
        MonomialIdeal::from_raw(ring.clone(), gens)
    }

    /// Membership of a monomial: some `x^e(x)` divides it.
    pub fn contains_monomial(&self, m: &Monomial) -> bool {
        self.exponents
            .support()
            .iter()
            .any(|i| m.exponent(i) >= self.exponents.exponent(i))
    }

    /// `other ⊆ self`.
    pub fn contains(&self, other: &IrreducibleComponent) -> bool {
        other.exponents.support().iter().all(|i| {
            self.exponents.support().contains(i)
                && self.exponents.exponent(i) <= other.exponents.exponent(i)
        })
    }
}

/// A primary component together with its prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimaryComponent {
    pub ideal: MonomialIdeal,
    pub prime: VarSet,
}

impl PrimaryComponent {
    pub fn height(&self) -> usize {
        self.prime.len()
    }
}

/// A primary decomposition whose intersection has been checked against the
/// decomposed ideal.
#[derive(Clone, Debug)]
pub struct Decomposition {
    components: Vec<PrimaryComponent>,
    irredundant: bool,
}

impl Decomposition {
    /// Validates that the components intersect to `ideal` (and, when
    /// `irredundant`, that primes are distinct and no component is superfluous).
    pub fn new(
        ideal: &MonomialIdeal,
        components: Vec<PrimaryComponent>,
        irredundant: bool,
    ) -> Result<Self> {
        let rebuilt = MonomialIdeal::intersect_all(components.iter().map(|c| &c.ideal))?;
        if rebuilt != *ideal {
            return Err(Error::Domain(format!(
                "components intersect to {rebuilt}, expected {ideal}"
            )));
        }
        for c in &components {
            if c.ideal.radical() != prime_ideal(ideal.ring(), c.prime) {
                return Err(Error::Domain(format!(
                    "component {} is not primary to its recorded prime",
                    c.ideal
                )));
            }
        }
        if irredundant {
            for (i, c) in components.iter().enumerate() {
                if components[..i].iter().any(|d| d.prime == c.prime) {
                    return Err(Error::Domain("repeated prime in decomposition".into()));
                }
                let others: Vec<&MonomialIdeal> = components
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != i)
                    .map(|(_, d)| &d.ideal)
                    .collect();
                if !others.is_empty() {
                    let rest = MonomialIdeal::intersect_all(others)?;
                    if c.ideal.contains_ideal(&rest)? {
                        return Err(Error::Domain(format!("component {} is redundant", c.ideal)));
                    }
                }
            }
        }
        Ok(Decomposition { components, irredundant })
    }

    pub fn components(&self) -> &[PrimaryComponent] {
        &self.components
    }

    pub fn is_irredundant(&self) -> bool {
        self.irredundant
    }

    pub fn primes(&self) -> Vec<VarSet> {
        self.components.iter().map(|c| c.prime).collect()
    }

    pub fn to_json(&self, ring: &Ring) -> Vec<ComponentJson> {
        self.components
            .iter()
            .map(|c| ComponentJson {
                prime: ring.names_of(c.prime),
                generators: c.ideal.to_json().generators,
            })
            .collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ComponentJson {
    pub prime: Vec<String>,
    pub generators: Vec<std::collections::BTreeMap<String, u64>>,
}

/// The prime ideal generated by the variables in `set`.
pub fn prime_ideal(ring: &Arc<Ring>, set: VarSet) -> MonomialIdeal {
    let n = ring.len();
    MonomialIdeal::from_raw(
        ring.clone(),
        set.iter().map(|i| Monomial::var_power(n, i, 1)).collect(),
    )
}

fn require_proper_nonzero(ideal: &MonomialIdeal) -> Result<()> {
    if ideal.is_zero() {
        return Err(Error::Domain("the zero ideal has no decomposition here".into()));
    }
    if ideal.is_unit() {
        return Err(Error::Domain("the unit ideal has no decomposition".into()));
    }
    Ok(())
}

/// Irredundant irreducible decomposition, in canonical (sorted) order.
pub fn irreducible_decomposition(ideal: &MonomialIdeal) -> Result<Vec<IrreducibleComponent>> {
    require_proper_nonzero(ideal)?;
    let n = ideal.ring().len();
    // Adding low-degree generators first keeps the intermediate lists short.
    let mut gens: Vec<&Monomial> = ideal.generators().iter().collect();
    gens.sort_by_key(|g| (g.support().len(), g.degree()));

    let first = gens[0];
    let mut comps: Vec<Vec<u32>> = first
        .support()
        .iter()
        .map(|i| {
            let mut e = vec![0; n];
            e[i] = first.exponent(i);
            e
        })
        .collect();

    for g in &gens[1..] {
        let mut next: Vec<Vec<u32>> = Vec::with_capacity(comps.len());
        let mut fresh: Vec<Vec<u32>> = Vec::new();
        for q in comps {
            let contains = g.support().iter().any(|i| q[i] > 0 && g.exponent(i) >= q[i]);
            if contains {
                next.push(q);
                continue;
            }
            for i in g.support().iter() {
                let mut r = q.clone();
                r[i] = if q[i] == 0 {
                    g.exponent(i)
                } else {
                    q[i].min(g.exponent(i))
                };
                fresh.push(r);
            }
        }
        // Survivors are pairwise incomparable already; only new components can be redundant.
        fresh.sort();
        fresh.dedup();
        let mut kept: Vec<Vec<u32>> = Vec::with_capacity(fresh.len());
        for r in fresh {
            if !next.iter().any(|q| component_contains(&r, q)) {
                kept.push(r);
            }
        }
        let kept_min: Vec<Vec<u32>> = kept
            .iter()
            .filter(|r| !kept.iter().any(|s| s != *r && component_contains(r, s)))
            .cloned()
            .collect();
        next.extend(kept_min);
        comps = next;
    }

    let mut out: Vec<IrreducibleComponent> = comps
        .into_iter()
        .map(|e| IrreducibleComponent::new(Monomial::from_exponents(e)))
        .collect();
    out.sort();
    Ok(out)
}

/// `small ⊆ big` for pure-power exponent vectors (0 = absent).
fn component_contains(big: &[u32], small: &[u32]) -> bool {
    small
        .iter()
        .zip(big)
        .all(|(&s, &b)| s == 0 || (b > 0 && b <= s))
}

/// Irreducible components grouped by radical, each group intersected.
pub fn primary_decomposition(ideal: &MonomialIdeal) -> Result<Decomposition> {
    let irr = irreducible_decomposition(ideal)?;
    let ring = ideal.ring();
    let mut groups: Vec<(VarSet, Vec<MonomialIdeal>)> = Vec::new();
    for c in &irr {
        let p = c.prime();
        let q = c.to_ideal(ring);
        match groups.iter_mut().find(|(prime, _)| *prime == p) {
            Some((_, v)) => v.push(q),
            None => groups.push((p, vec![q])),
        }
    }
    groups.sort_by_key(|(p, _)| (p.len(), std::cmp::Reverse(p.0)));
    let components = groups
        .into_iter()
        .map(|(prime, qs)| {
            Ok(PrimaryComponent {
                ideal: MonomialIdeal::intersect_all(qs.iter())?,
                prime,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Decomposition::new(ideal, components, true)
}

/// Associated primes, sorted by height and then by variable order.
pub fn associated_primes(ideal: &MonomialIdeal) -> Result<Vec<VarSet>> {
    let mut primes: Vec<VarSet> = irreducible_decomposition(ideal)?
        .iter()
        .map(IrreducibleComponent::prime)
        .collect();
    primes.sort_by_key(|p| (p.len(), std::cmp::Reverse(p.0)));
    primes.dedup();
    Ok(primes)
}

/// Minimal primes: the associated primes of the radical.
pub fn minimal_primes(ideal: &MonomialIdeal) -> Result<Vec<VarSet>> {
    associated_primes(&ideal.radical())
}

pub fn is_unmixed(ideal: &MonomialIdeal) -> Result<bool> {
    let primes = associated_primes(ideal)?;
    Ok(primes.iter().all(|p| p.len() == primes[0].len()))
}

pub fn height(ideal: &MonomialIdeal) -> Result<usize> {
    Ok(minimal_primes(ideal)?
        .iter()
        .map(|p| p.len())
        .min()
        .unwrap_or(0))
}

/// Krull dimension of `R/I`.
pub fn dim_quotient(ideal: &MonomialIdeal) -> Result<usize> {
    Ok(ideal.ring().len() - height(ideal)?)
}

/// `I^(n)`: the intersection over minimal primes `p` of `(I_p)^n`, where `I_p`
/// sets every variable outside `p` to 1.
pub fn symbolic_power(ideal: &MonomialIdeal, n: u32) -> Result<MonomialIdeal> {
    if n == 0 {
        return Err(Error::Domain("symbolic powers start at n = 1".into()));
    }
    let all = ideal.ring().all();
    let parts = minimal_primes(ideal)?
        .into_iter()
        .map(|p| ideal.localize(all.difference(p))?.power(n))
        .collect::<Result<Vec<_>>>()?;
    MonomialIdeal::intersect_all(parts.iter())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(names: &[&str]) -> Arc<Ring> {
        Ring::new(names.iter().copied()).unwrap()
    }

    fn ideal(r: &Arc<Ring>, gens: &[&str]) -> MonomialIdeal {
        MonomialIdeal::parse(r.clone(), gens).unwrap()
    }

    fn comps(r: &Arc<Ring>, i: &MonomialIdeal) -> Vec<MonomialIdeal> {
        let mut v: Vec<MonomialIdeal> = irreducible_decomposition(i)
            .unwrap()
            .iter()
            .map(|c| c.to_ideal(r))
            .collect();
        v.sort_by_key(|q| q.to_string());
        v
    }

    #[test]
    fn path_edge_ideal_components() {
        let r = ring(&["a", "b", "x", "y"]);
        let i = ideal(&r, &["a*b", "a*x", "b*y"]);
        let mut want = vec![
            ideal(&r, &["a", "b"]),
            ideal(&r, &["a", "y"]),
            ideal(&r, &["b", "x"]),
        ];
        want.sort_by_key(|q| q.to_string());
        assert_eq!(comps(&r, &i), want);
    }

    #[test]
    fn principal_ideal_splits_into_pure_powers() {
        let r = ring(&["x", "y"]);
        let i = ideal(&r, &["x^2*y^2"]);
        assert_eq!(comps(&r, &i), vec![ideal(&r, &["x^2"]), ideal(&r, &["y^2"])]);
    }

    #[test]
    fn weighted_path_reconstructs() {
        let r = ring(&["a", "b", "x", "y"]);
        let i = ideal(&r, &["a^2*x^2", "a*b", "b^2*y^2"]);
        let c = comps(&r, &i);
        assert_eq!(MonomialIdeal::intersect_all(c.iter()).unwrap(), i);
        assert!(c.iter().all(|q| q.generators().iter().all(|g| g.support().len() == 1)));
    }

    #[test]
    fn weighted_path_primary_decomposition() {
        let r = ring(&["a", "b", "x", "y"]);
        let i = ideal(&r, &["a^2*x^2", "a*b", "b^2*y^2"]);
        let d = primary_decomposition(&i).unwrap();
        assert!(d.is_irredundant());
        let mut got: Vec<(Vec<String>, MonomialIdeal)> = d
            .components()
            .iter()
            .map(|c| (r.names_of(c.prime), c.ideal.clone()))
            .collect();
        got.sort_by(|a, b| a.0.cmp(&b.0));
        let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        assert_eq!(
            got,
            vec![
                (s(&["a", "b"]), ideal(&r, &["a*b", "a^2", "b^2"])),
                (s(&["a", "y"]), ideal(&r, &["a", "y^2"])),
                (s(&["b", "x"]), ideal(&r, &["b", "x^2"])),
            ]
        );
    }

    #[test]
    fn localized_two_component_decomposition() {
        // (a^k b^k, b^m, a^p x^p, z^r) with k < m <= p, r.
        let r = ring(&["a", "b", "c", "x", "y", "z"]);
        let (k, m, p, rr) = (1, 2, 3, 2);
        let j = ideal(
            &r,
            &[
                &format!("a^{k}*b^{k}"),
                &format!("b^{m}"),
                &format!("a^{p}*x^{p}"),
                &format!("z^{rr}"),
            ],
        );
        let d = primary_decomposition(&j).unwrap();
        let mut got: Vec<MonomialIdeal> = d.components().iter().map(|c| c.ideal.clone()).collect();
        got.sort_by_key(|q| q.to_string());
        let mut want = vec![
            ideal(
                &r,
                &[&format!("a^{k}*b^{k}"), &format!("a^{p}"), &format!("b^{m}"), &format!("z^{rr}")],
            ),
            ideal(&r, &[&format!("b^{k}"), &format!("x^{p}"), &format!("z^{rr}")]),
        ];
        want.sort_by_key(|q| q.to_string());
        assert_eq!(got, want);
    }

    #[test]
    fn single_variable() {
        let r = ring(&["x", "y"]);
        let i = ideal(&r, &["x"]);
        let d = primary_decomposition(&i).unwrap();
        assert_eq!(d.components().len(), 1);
        assert_eq!(d.components()[0].ideal, i);
        assert_eq!(associated_primes(&ideal(&r, &["x^2"])).unwrap(), vec![VarSet::singleton(0)]);
        assert_eq!(height(&i).unwrap(), 1);
    }

    #[test]
    fn unit_and_zero_are_domain_errors() {
        let r = ring(&["x"]);
        assert!(matches!(
            irreducible_decomposition(&MonomialIdeal::unit(r.clone())),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            primary_decomposition(&MonomialIdeal::zero(r)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn path_ass_height_dim() {
        let r = ring(&["a", "b", "x", "y"]);
        let i = ideal(&r, &["a*x", "a*b", "b*y"]);
        let mut names: Vec<Vec<String>> = associated_primes(&i)
            .unwrap()
            .into_iter()
            .map(|p| r.names_of(p))
            .collect();
        names.sort();
        assert_eq!(names, vec![vec!["a", "b"], vec!["a", "y"], vec!["b", "x"]]);
        assert!(is_unmixed(&i).unwrap());
        assert_eq!(height(&i).unwrap(), 2);
        assert_eq!(dim_quotient(&i).unwrap(), 2);
        let xy_z = ideal(&r, &["x*y", "a"]);
        assert!(is_unmixed(&xy_z).unwrap());
    }

    #[test]
    fn embedded_prime_makes_mixed() {
        // (x^2, xy) = (x) ∩ (x^2, y)
        let r = ring(&["x", "y"]);
        let i = ideal(&r, &["x^2", "x*y"]);
        assert_eq!(associated_primes(&i).unwrap().len(), 2);
        assert!(!is_unmixed(&i).unwrap());
        assert_eq!(height(&i).unwrap(), 1);
    }

    #[test]
    fn symbolic_square_of_weighted_path_equals_ordinary() {
        let r = ring(&["a", "b", "x", "y"]);
        let i = ideal(&r, &["a^2*x^2", "a*b", "b^2*y^2"]);
        assert_eq!(symbolic_power(&i, 2).unwrap(), i.power(2).unwrap());
        assert_eq!(symbolic_power(&i, 1).unwrap(), i);
    }

    #[test]
    fn symbolic_square_of_unweighted_path() {
        // Edge ideals of bipartite graphs have equal symbolic and ordinary powers.
        let r = ring(&["a", "b", "x", "y"]);
        let i = ideal(&r, &["a*b", "a*x", "b*y"]);
        let sym = symbolic_power(&i, 2).unwrap();
        let ord = i.power(2).unwrap();
        assert!(sym.contains_ideal(&ord).unwrap());
        assert_eq!(sym, ord);
        assert!(sym.contains(&r.monomial("a*b*x*y").unwrap()).unwrap());
    }

    #[test]
    fn symbolic_square_of_triangle_is_larger() {
        let r = ring(&["a", "b", "c"]);
        let i = ideal(&r, &["a*b", "b*c", "a*c"]);
        let sym = symbolic_power(&i, 2).unwrap();
        let abc = r.monomial("a*b*c").unwrap();
        assert!(sym.contains(&abc).unwrap());
        assert!(!i.power(2).unwrap().contains(&abc).unwrap());
    }

    #[test]
    fn decomposition_rejects_wrong_components() {
        let r = ring(&["x", "y"]);
        let i = ideal(&r, &["x*y"]);
        let bad = vec![PrimaryComponent { ideal: ideal(&r, &["x"]), prime: VarSet::singleton(0) }];
        assert!(Decomposition::new(&i, bad, true).is_err());
    }

    /// Independent route: split at a mixed generator `m = x^a * m'` into
    /// `(I + (x^a)) ∩ (I + (m'))` until only pure powers remain.
    fn split_decomposition(gens: &[Vec<u32>]) -> Vec<Vec<u32>> {
        fn go(gens: Vec<Vec<u32>>, out: &mut Vec<Vec<u32>>) {
            let n = gens[0].len();
            let mixed = gens.iter().find(|g| g.iter().filter(|&&e| e > 0).count() >= 2);
            let Some(m) = mixed else {
                let mut e = vec![0; n];
                for g in &gens {
                    let i = g.iter().position(|&e| e > 0).unwrap();
                    e[i] = if e[i] == 0 { g[i] } else { e[i].min(g[i]) };
                }
                out.push(e);
                return;
            };
            let x = m.iter().position(|&e| e > 0).unwrap();
            let mut pure = vec![0; n];
            pure[x] = m[x];
            let mut rest = m.clone();
            rest[x] = 0;
            for extra in [pure, rest] {
                let mut next = gens.clone();
                next.push(extra);
                let ring = Ring::new((0..n).map(|i| format!("v{i}"))).unwrap();
                let canon = MonomialIdeal::new(ring, next.into_iter().map(Monomial::from_exponents).collect()).unwrap();
                go(canon.generators().iter().map(|g| g.exponents().to_vec()).collect(), out);
            }
        }
        let mut out = Vec::new();
        go(gens.to_vec(), &mut out);
        out.sort();
        out.dedup();
        out.iter().filter(|r| !out.iter().any(|s| s != *r && component_contains(r, s))).cloned().collect()
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn random_ideal() -> impl Strategy<Value = MonomialIdeal> {
            (1usize..5)
                .prop_flat_map(|n| proptest::collection::vec(proptest::collection::vec(0u32..4, n), 1..6))
                .prop_filter_map("zero generator", |gens| {
                    let n = gens[0].len();
                    if gens.iter().any(|g| g.iter().all(|&e| e == 0)) {
                        return None;
                    }
                    let r = Ring::new((0..n).map(|i| format!("v{i}"))).unwrap();
                    MonomialIdeal::new(r, gens.into_iter().map(Monomial::from_exponents).collect()).ok()
                })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(128))]

            #[test]
            fn incremental_matches_splitting(i in random_ideal()) {
                let gens: Vec<Vec<u32>> = i.generators().iter().map(|g| g.exponents().to_vec()).collect();
                let got: Vec<Vec<u32>> = irreducible_decomposition(&i)
                    .unwrap()
                    .iter()
                    .map(|c| c.exponents().exponents().to_vec())
                    .collect();
                prop_assert_eq!(got, split_decomposition(&gens));
            }

            #[test]
            fn primary_components_reconstruct(i in random_ideal()) {
                let d = primary_decomposition(&i).unwrap();
                let rebuilt = MonomialIdeal::intersect_all(d.components().iter().map(|c| &c.ideal)).unwrap();
                prop_assert_eq!(&rebuilt, &i);
                for c in d.components() {
                    prop_assert_eq!(c.ideal.radical(), prime_ideal(i.ring(), c.prime));
                }
                let mins = minimal_primes(&i).unwrap();
                let radical_primes = associated_primes(&i.radical()).unwrap();
                prop_assert_eq!(mins, radical_primes);
            }

            #[test]
            fn symbolic_power_contains_ordinary(i in random_ideal(), n in 1u32..3) {
                let sym = symbolic_power(&i, n).unwrap();
                prop_assert!(sym.contains_ideal(&i.power(n).unwrap()).unwrap());
            }
        }
    }
}
