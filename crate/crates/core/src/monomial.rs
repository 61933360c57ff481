//! Monomials and monomial ideals over a named, ordered set of variables.
//!
//! A [`MonomialIdeal`] always stores its minimal generating set in a
//! canonical order, so structural equality of two ideals over the same ring
//! is ideal equality. The zero ideal has no generators; the unit ideal has
//! the single generator `1`.
//!
//! Exponents are `u32`. Only products can grow them; every product is
//! checked and reports [`Error::Overflow`] instead of wrapping.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Hard limit on the number of variables in one ring (supports are `u128` masks).
pub const MAX_VARIABLES: usize = 128;

/// A set of variable indices, stored as a bit mask.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarSet(pub u128);

impl VarSet {
    pub const EMPTY: VarSet = VarSet(0);

    pub fn singleton(i: usize) -> Self {
        VarSet(1u128 << i)
    }

    pub fn full(n: usize) -> Self {
        if n >= 128 {
            VarSet(u128::MAX)
        } else {
            VarSet((1u128 << n) - 1)
        }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> Self {
        it.into_iter().fold(VarSet::EMPTY, |acc, i| acc.with(i))
    }

    pub fn with(self, i: usize) -> Self {
        VarSet(self.0 | (1u128 << i))
    }

    pub fn without(self, i: usize) -> Self {
        VarSet(self.0 & !(1u128 << i))
    }

    pub fn contains(self, i: usize) -> bool {
        i < 128 && (self.0 >> i) & 1 == 1
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: VarSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: VarSet) -> Self {
        VarSet(self.0 | other.0)
    }

    pub fn intersection(self, other: VarSet) -> Self {
        VarSet(self.0 & other.0)
    }

    pub fn difference(self, other: VarSet) -> Self {
        VarSet(self.0 & !other.0)
    }

    /// Indices in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }
}

impl fmt::Debug for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A variable of a ring: its label and its position in the exponent vectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Variable<'a> {
    pub name: &'a str,
    pub index: usize,
}

/// The ambient polynomial ring, identified by its ordered variable names.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ring {
    names: Vec<String>,
}

impl Ring {
    pub fn new<I, S>(names: I) -> Result<Arc<Ring>>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.len() > MAX_VARIABLES {
            return Err(Error::Domain(format!(
                "{} variables exceed the limit of {MAX_VARIABLES}",
                names.len()
            )));
        }
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() {
                return Err(Error::Invalid("empty variable name".into()));
            }
            if names[..i].contains(n) {
                return Err(Error::Invalid(format!("duplicate variable name {n:?}")));
            }
        }
        Ok(Arc::new(Ring { names }))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn variable(&self, i: usize) -> Variable<'_> {
        Variable { name: &self.names[i], index: i }
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn all(&self) -> VarSet {
        VarSet::full(self.len())
    }

    pub fn var_set<S: AsRef<str>>(&self, names: &[S]) -> Result<VarSet> {
        let mut set = VarSet::EMPTY;
        for n in names {
            let i = self.index_of(n.as_ref()).ok_or_else(|| {
                Error::AmbientMismatch(format!("unknown variable {:?}", n.as_ref()))
            })?;
            set = set.with(i);
        }
        Ok(set)
    }

    pub fn names_of(&self, set: VarSet) -> Vec<String> {
        set.iter().map(|i| self.names[i].clone()).collect()
    }

    /// Parses `1`, `x`, `a^2*x^2` or `a^2 x^2` into a monomial of this ring.
    pub fn monomial(&self, text: &str) -> Result<Monomial> {
        let mut exps = vec![0u32; self.len()];
        let text = text.trim();
        if text != "1" {
            for factor in text.split(|c: char| c == '*' || c.is_whitespace()) {
                if factor.is_empty() {
                    continue;
                }
                let (name, e) = match factor.split_once('^') {
                    Some((n, e)) => (
                        n,
                        e.parse::<u32>()
                            .map_err(|_| Error::Invalid(format!("bad exponent in {factor:?}")))?,
                    ),
                    None => (factor, 1),
                };
                let i = self
                    .index_of(name)
                    .ok_or_else(|| Error::AmbientMismatch(format!("unknown variable {name:?}")))?;
                exps[i] = exps[i]
                    .checked_add(e)
                    .ok_or_else(|| Error::Overflow(format!("exponent of {name}")))?;
            }
        }
        Ok(Monomial::from_exponents(exps))
    }
}

/// A monomial as a dense exponent vector over its ring.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    exps: Box<[u32]>,
    support: VarSet,
}

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial::from_exponents(vec![0; nvars])
    }

    pub fn from_exponents(exps: Vec<u32>) -> Self {
        assert!(exps.len() <= MAX_VARIABLES, "too many variables");
        let support = VarSet::from_indices(
            exps.iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, _)| i),
        );
        Monomial { exps: exps.into_boxed_slice(), support }
    }

    /// `x_i^e` in a ring with `nvars` variables.
    pub fn var_power(nvars: usize, i: usize, e: u32) -> Self {
        let mut exps = vec![0; nvars];
        exps[i] = e;
        Monomial::from_exponents(exps)
    }

    /// Product of the variables in `set`.
    pub fn of_set(nvars: usize, set: VarSet) -> Self {
        let mut exps = vec![0; nvars];
        for i in set.iter() {
            exps[i] = 1;
        }
        Monomial::from_exponents(exps)
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn exponent(&self, i: usize) -> u32 {
        self.exps[i]
    }

    pub fn support(&self) -> VarSet {
        self.support
    }

    pub fn degree(&self) -> u64 {
        self.exps.iter().map(|&e| u64::from(e)).sum()
    }

    pub fn is_one(&self) -> bool {
        self.support.is_empty()
    }

    pub fn is_squarefree(&self) -> bool {
        self.exps.iter().all(|&e| e <= 1)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.support.is_subset(other.support)
            && self.exps.iter().zip(other.exps.iter()).all(|(a, b)| a <= b)
    }

    pub fn checked_mul(&self, other: &Monomial) -> Result<Monomial> {
        let exps = self
            .exps
            .iter()
            .zip(other.exps.iter())
            .map(|(a, b)| a.checked_add(*b))
            .collect::<Option<Vec<u32>>>()
            .ok_or_else(|| Error::Overflow("monomial product exceeds u32 exponents".into()))?;
        Ok(Monomial::from_exponents(exps))
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        self.zip_with(other, |a, b| a.max(b))
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        self.zip_with(other, |a, b| a.min(b))
    }

    /// `self / gcd(self, f)`.
    pub fn quotient_by_gcd(&self, f: &Monomial) -> Monomial {
        self.zip_with(f, |a, b| a.saturating_sub(b))
    }

    /// Every exponent capped at 1.
    pub fn squarefree_part(&self) -> Monomial {
        Monomial::of_set(self.nvars(), self.support)
    }

    /// The monomial with the exponents of the variables in `set` replaced by 0.
    pub fn erase(&self, set: VarSet) -> Monomial {
        let exps = self
            .exps
            .iter()
            .enumerate()
            .map(|(i, &e)| if set.contains(i) { 0 } else { e })
            .collect();
        Monomial::from_exponents(exps)
    }

    fn zip_with(&self, other: &Monomial, f: impl Fn(u32, u32) -> u32) -> Monomial {
        debug_assert_eq!(self.nvars(), other.nvars());
        Monomial::from_exponents(
            self.exps
                .iter()
                .zip(other.exps.iter())
                .map(|(&a, &b)| f(a, b))
                .collect(),
        )
    }

    pub fn display<'a>(&'a self, ring: &'a Ring) -> impl fmt::Display + 'a {
        DisplayMonomial { m: self, ring }
    }

    /// Sparse `name -> exponent` form with zero exponents omitted.
    pub fn to_map(&self, ring: &Ring) -> BTreeMap<String, u64> {
        self.support
            .iter()
            .map(|i| (ring.name(i).to_string(), u64::from(self.exps[i])))
            .collect()
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &self.exps[..])
    }
}

struct DisplayMonomial<'a> {
    m: &'a Monomial,
    ring: &'a Ring,
}

impl fmt::Display for DisplayMonomial<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.m.is_one() {
            return write!(f, "1");
        }
        for (k, i) in self.m.support.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            write!(f, "{}", self.ring.name(i))?;
            if self.m.exps[i] > 1 {
                write!(f, "^{}", self.m.exps[i])?;
            }
        }
        Ok(())
    }
}

/// Reduces a set of monomials to its divisibility-minimal elements, in canonical order.
pub fn minimal_elements(mut gens: Vec<Monomial>) -> Vec<Monomial> {
    gens.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| b.cmp(a)));
    gens.dedup();
    let mut kept: Vec<Monomial> = Vec::with_capacity(gens.len());
    for g in gens {
        if !kept.iter().any(|h| h.divides(&g)) {
            kept.push(g);
        }
    }
    kept.sort_by(|a, b| b.cmp(a));
    kept
}

/// A monomial ideal, stored by its minimal generators.
#[derive(Clone, Debug)]
pub struct MonomialIdeal {
    ring: Arc<Ring>,
    gens: Vec<Monomial>,
}

impl PartialEq for MonomialIdeal {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring) && self.gens == other.gens
    }
}

impl Eq for MonomialIdeal {}

impl MonomialIdeal {
    /// Builds the ideal generated by `gens`, minimalizing them.
    pub fn new(ring: Arc<Ring>, gens: Vec<Monomial>) -> Result<Self> {
        if let Some(g) = gens.iter().find(|g| g.nvars() != ring.len()) {
            return Err(Error::AmbientMismatch(format!(
                "generator has {} exponents, ring has {} variables",
                g.nvars(),
                ring.len()
            )));
        }
        Ok(MonomialIdeal::from_raw(ring, gens))
    }

    /// Convenience constructor from textual monomials (see [`Ring::monomial`]).
    pub fn parse(ring: Arc<Ring>, gens: &[&str]) -> Result<Self> {
        let gens = gens
            .iter()
            .map(|g| ring.monomial(g))
            .collect::<Result<Vec<_>>>()?;
        Ok(MonomialIdeal::from_raw(ring, gens))
    }

    pub(crate) fn from_raw(ring: Arc<Ring>, gens: Vec<Monomial>) -> Self {
        MonomialIdeal { ring, gens: minimal_elements(gens) }
    }

    pub fn zero(ring: Arc<Ring>) -> Self {
        MonomialIdeal { ring, gens: Vec::new() }
    }

    pub fn unit(ring: Arc<Ring>) -> Self {
        let n = ring.len();
        MonomialIdeal { ring, gens: vec![Monomial::one(n)] }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn generators(&self) -> &[Monomial] {
        &self.gens
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.gens.len() == 1 && self.gens[0].is_one()
    }

    pub fn is_proper(&self) -> bool {
        !self.is_unit()
    }

    pub fn is_squarefree(&self) -> bool {
        self.gens.iter().all(Monomial::is_squarefree)
    }

    /// Variables appearing in some minimal generator.
    pub fn support(&self) -> VarSet {
        self.gens
            .iter()
            .fold(VarSet::EMPTY, |acc, g| acc.union(g.support()))
    }

    /// Largest exponent of each variable over the minimal generators.
    pub fn max_exponents(&self) -> Vec<u32> {
        let mut caps = vec![0u32; self.ring.len()];
        for g in &self.gens {
            for (c, &e) in caps.iter_mut().zip(g.exponents()) {
                *c = (*c).max(e);
            }
        }
        caps
    }

    fn check_monomial(&self, f: &Monomial) -> Result<()> {
        if f.nvars() != self.ring.len() {
            return Err(Error::AmbientMismatch(format!(
                "monomial has {} exponents, ring has {} variables",
                f.nvars(),
                self.ring.len()
            )));
        }
        Ok(())
    }

    fn check_same_ring(&self, other: &MonomialIdeal) -> Result<()> {
        if Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::AmbientMismatch(format!(
                "rings {:?} and {:?} differ",
                self.ring.names(),
                other.ring.names()
            )))
        }
    }

    fn check_set(&self, set: VarSet) -> Result<()> {
        if set.is_subset(self.ring.all()) {
            Ok(())
        } else {
            Err(Error::AmbientMismatch("variable set is not contained in the ring".into()))
        }
    }

    /// True iff some generator divides `f`.
    pub fn contains(&self, f: &Monomial) -> Result<bool> {
        self.check_monomial(f)?;
        Ok(self.contains_unchecked(f))
    }

    pub(crate) fn contains_unchecked(&self, f: &Monomial) -> bool {
        self.gens.iter().any(|g| g.divides(f))
    }

    /// True iff `other ⊆ self`.
    pub fn contains_ideal(&self, other: &MonomialIdeal) -> Result<bool> {
        self.check_same_ring(other)?;
        Ok(other.gens.iter().all(|g| self.contains_unchecked(g)))
    }

    pub fn sum(&self, other: &MonomialIdeal) -> Result<MonomialIdeal> {
        self.check_same_ring(other)?;
        let gens = self.gens.iter().chain(other.gens.iter()).cloned().collect();
        Ok(MonomialIdeal::from_raw(self.ring.clone(), gens))
    }

    pub fn product(&self, other: &MonomialIdeal) -> Result<MonomialIdeal> {
        self.check_same_ring(other)?;
        let mut gens = Vec::with_capacity(self.gens.len() * other.gens.len());
        for g in &self.gens {
            for h in &other.gens {
                gens.push(g.checked_mul(h)?);
            }
        }
        Ok(MonomialIdeal::from_raw(self.ring.clone(), gens))
    }

    /// `self^n` by repeated multiplication, minimalizing after every step.
    /// `n = 0` gives the unit ideal.
    pub fn power(&self, n: u32) -> Result<MonomialIdeal> {
        let mut acc = MonomialIdeal::unit(self.ring.clone());
        for _ in 0..n {
            acc = acc.product(self)?;
        }
        Ok(acc)
    }

    pub fn intersect(&self, other: &MonomialIdeal) -> Result<MonomialIdeal> {
        self.check_same_ring(other)?;
        let mut gens = Vec::with_capacity(self.gens.len() * other.gens.len());
        for g in &self.gens {
            for h in &other.gens {
                gens.push(g.lcm(h));
            }
        }
        Ok(MonomialIdeal::from_raw(self.ring.clone(), gens))
    }

    /// Intersection of a nonempty family of ideals over one ring.
    pub fn intersect_all<'a, I>(ideals: I) -> Result<MonomialIdeal>
    where
        I: IntoIterator<Item = &'a MonomialIdeal>,
    {
        let mut it = ideals.into_iter();
        let first = it
            .next()
            .ok_or_else(|| Error::Domain("intersection of an empty family".into()))?;
        it.try_fold(first.clone(), |acc, q| acc.intersect(q))
    }

    /// `self : f`.
    pub fn colon(&self, f: &Monomial) -> Result<MonomialIdeal> {
        self.check_monomial(f)?;
        Ok(self.colon_unchecked(f))
    }

    pub(crate) fn colon_unchecked(&self, f: &Monomial) -> MonomialIdeal {
        let gens = self.gens.iter().map(|g| g.quotient_by_gcd(f)).collect();
        MonomialIdeal::from_raw(self.ring.clone(), gens)
    }

    pub fn radical(&self) -> MonomialIdeal {
        let gens = self.gens.iter().map(Monomial::squarefree_part).collect();
        MonomialIdeal::from_raw(self.ring.clone(), gens)
    }

    /// Ideal generated by the minimal generators whose support lies in `set`.
    pub fn restrict(&self, set: VarSet) -> Result<MonomialIdeal> {
        self.check_set(set)?;
        let gens = self
            .gens
            .iter()
            .filter(|g| g.support().is_subset(set))
            .cloned()
            .collect();
        Ok(MonomialIdeal { ring: self.ring.clone(), gens })
    }

    /// `self : (prod_{x in set} x)^inf`, i.e. every variable of `set` set to 1.
    pub fn localize(&self, set: VarSet) -> Result<MonomialIdeal> {
        self.check_set(set)?;
        let gens = self.gens.iter().map(|g| g.erase(set)).collect();
        Ok(MonomialIdeal::from_raw(self.ring.clone(), gens))
    }

    pub fn to_json(&self) -> IdealJson {
        IdealJson {
            variables: self.ring.names().to_vec(),
            generators: self.gens.iter().map(|g| g.to_map(&self.ring)).collect(),
        }
    }

    pub fn from_json(json: &IdealJson) -> Result<MonomialIdeal> {
        let ring = Ring::new(json.variables.iter().cloned())?;
        let mut gens = Vec::with_capacity(json.generators.len());
        for g in &json.generators {
            let mut exps = vec![0u32; ring.len()];
            for (name, &e) in g {
                let i = ring.index_of(name).ok_or_else(|| {
                    Error::AmbientMismatch(format!("generator uses unknown variable {name:?}"))
                })?;
                exps[i] = u32::try_from(e).map_err(|_| {
                    Error::Overflow(format!("exponent {e} of {name} exceeds the u32 range"))
                })?;
            }
            gens.push(Monomial::from_exponents(exps));
        }
        Ok(MonomialIdeal::from_raw(ring, gens))
    }

    pub fn from_json_str(text: &str) -> Result<MonomialIdeal> {
        let json: IdealJson = serde_json::from_str(text)?;
        MonomialIdeal::from_json(&json)
    }
}

impl fmt::Display for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, g) in self.gens.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", g.display(&self.ring))?;
        }
        if self.gens.is_empty() {
            write!(f, "0")?;
        }
        write!(f, ")")
    }
}

/// File format of an ideal: variables plus sparse generator maps.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealJson {
    pub variables: Vec<String>,
    pub generators: Vec<BTreeMap<String, u64>>,
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

    #[test]
    fn minimalize_examples() {
        let r = ring(&["a", "b", "x", "y", "z"]);
        assert_eq!(ideal(&r, &["x", "x^2*y"]), ideal(&r, &["x"]));
        assert_eq!(ideal(&r, &["x*y", "y*z", "x*z"]).generators().len(), 3);
        assert_eq!(
            ideal(&r, &["a^2*x^2", "a*b", "a^2*b"]),
            ideal(&r, &["a^2*x^2", "a*b"])
        );
    }

    #[test]
    fn unknown_variable_is_ambient_mismatch() {
        let r = ring(&["a", "b"]);
        assert!(matches!(r.monomial("c"), Err(Error::AmbientMismatch(_))));
        let bad = Monomial::from_exponents(vec![1, 0, 0]);
        assert!(matches!(
            MonomialIdeal::new(r.clone(), vec![bad.clone()]),
            Err(Error::AmbientMismatch(_))
        ));
        let i = ideal(&r, &["a"]);
        assert!(matches!(i.contains(&bad), Err(Error::AmbientMismatch(_))));
    }

    #[test]
    fn membership_examples() {
        let r = ring(&["a", "b", "x", "y"]);
        let f = |s| r.monomial(s).unwrap();
        assert!(ideal(&r, &["a*b"]).contains(&f("a^2*b^2")).unwrap());
        assert!(ideal(&r, &["a^2*x^2", "a*b", "b^2*y^2"])
            .contains(&f("a*b"))
            .unwrap());
        assert!(!ideal(&r, &["a^2*x^2", "a*b^2"]).contains(&f("a*b*x")).unwrap());
    }

    #[test]
    fn intersect_examples() {
        let r = ring(&["a", "b", "x", "y"]);
        let ab = ideal(&r, &["a", "b"]);
        let ay = ideal(&r, &["a", "y"]);
        let bx = ideal(&r, &["b", "x"]);
        assert_eq!(ab.intersect(&ay).unwrap(), ideal(&r, &["a", "b*y"]));
        let three = MonomialIdeal::intersect_all([&ab, &ay, &bx]).unwrap();
        assert_eq!(three, ideal(&r, &["a*b", "a*x", "b*y"]));

        let q1 = ideal(&r, &["a*b", "a^2", "b^2"]);
        let q2 = ideal(&r, &["a", "y^2"]);
        let q3 = ideal(&r, &["b", "x^2"]);
        let got = MonomialIdeal::intersect_all([&q1, &q2, &q3]).unwrap();
        assert_eq!(got, ideal(&r, &["a^2*x^2", "a*b", "b^2*y^2"]));
    }

    #[test]
    fn power_examples() {
        let r = ring(&["a", "b", "x", "y"]);
        assert_eq!(ideal(&r, &["x*y"]).power(2).unwrap(), ideal(&r, &["x^2*y^2"]));
        let i = ideal(&r, &["a*b", "a*x", "b*y"]);
        assert_eq!(i.power(1).unwrap(), i);
        assert!(i.power(0).unwrap().is_unit());
        // All six pairwise products are already minimal.
        let sq = i.power(2).unwrap();
        assert_eq!(
            sq,
            ideal(
                &r,
                &["a^2*b^2", "a^2*b*x", "a*b^2*y", "a^2*x^2", "a*b*x*y", "b^2*y^2"]
            )
        );
    }

    #[test]
    fn power_overflow_is_reported() {
        let r = ring(&["x"]);
        let i = MonomialIdeal::new(
            r.clone(),
            vec![Monomial::from_exponents(vec![u32::MAX / 2 + 1])],
        )
        .unwrap();
        assert!(matches!(i.power(2), Err(Error::Overflow(_))));
    }

    #[test]
    fn colon_examples() {
        let r = ring(&["a", "b", "x", "y"]);
        let i = ideal(&r, &["a^2*x^2", "a*b", "b^2*y^2"]);
        assert_eq!(
            i.colon(&r.monomial("a").unwrap()).unwrap(),
            ideal(&r, &["a*x^2", "b"])
        );
        assert_eq!(i.colon(&Monomial::one(4)).unwrap(), i);
        let j = ideal(&r, &["x^2*y^2"]);
        assert_eq!(j.colon(&r.monomial("x^5").unwrap()).unwrap(), ideal(&r, &["y^2"]));
    }

    #[test]
    fn radical_examples() {
        let r = ring(&["a", "b", "x", "y"]);
        let i = ideal(&r, &["a^2*x^2", "a*b", "b^2*y^2"]);
        assert_eq!(i.radical(), ideal(&r, &["a*x", "a*b", "b*y"]));
        assert_eq!(ideal(&r, &["x^3"]).radical(), ideal(&r, &["x"]));
        assert_eq!(i.radical().radical(), i.radical());
    }

    #[test]
    fn restrict_examples() {
        let r = ring(&["a", "b", "x", "y"]);
        let i = ideal(&r, &["a*x", "a*b", "b*y"]);
        let w = r.var_set(&["a", "b", "x"]).unwrap();
        assert_eq!(i.restrict(w).unwrap(), ideal(&r, &["a*x", "a*b"]));
        assert_eq!(
            i.power(2).unwrap().restrict(w).unwrap(),
            i.restrict(w).unwrap().power(2).unwrap()
        );
        assert_eq!(i.restrict(r.all()).unwrap(), i);
    }

    #[test]
    fn localize_examples() {
        let r = ring(&["a", "b", "x", "y"]);
        let (p, k, q) = (3, 2, 4);
        let i = ideal(
            &r,
            &[
                &format!("a^{p}*x^{p}"),
                &format!("a^{k}*b^{k}"),
                &format!("b^{q}*y^{q}"),
            ],
        );
        let got = i.localize(r.var_set(&["y"]).unwrap()).unwrap();
        assert_eq!(
            got,
            ideal(&r, &[&format!("a^{p}*x^{p}"), &format!("a^{k}*b^{k}"), &format!("b^{q}")])
        );
        assert_eq!(i.localize(VarSet::EMPTY).unwrap(), i);

        let r6 = ring(&["a", "b", "c", "x", "y", "z"]);
        let j = ideal(&r6, &["a*b", "b^2*c^2", "a^3*x^3", "b^4*y^4", "c^5*z^5"]);
        let got = j.localize(r6.var_set(&["c", "y"]).unwrap()).unwrap();
        assert_eq!(got, ideal(&r6, &["a*b", "b^2", "a^3*x^3", "z^5"]));
    }

    #[test]
    fn zero_and_unit_behave() {
        let r = ring(&["x", "y"]);
        let zero = MonomialIdeal::zero(r.clone());
        let unit = MonomialIdeal::unit(r.clone());
        let i = ideal(&r, &["x*y"]);
        let x = r.monomial("x").unwrap();
        assert!(!zero.contains(&x).unwrap());
        assert!(unit.contains(&x).unwrap());
        assert_eq!(zero.intersect(&i).unwrap(), zero);
        assert_eq!(unit.intersect(&i).unwrap(), i);
        assert_eq!(zero.sum(&i).unwrap(), i);
        assert!(unit.sum(&i).unwrap().is_unit());
        assert_eq!(zero.product(&i).unwrap(), zero);
        assert_eq!(unit.product(&i).unwrap(), i);
        assert!(zero.colon(&x).unwrap().is_zero());
        assert!(unit.colon(&x).unwrap().is_unit());
        assert!(zero.radical().is_zero());
        assert!(unit.radical().is_unit());
        assert!(i.colon(&r.monomial("x*y").unwrap()).unwrap().is_unit());
        assert!(unit.localize(r.all()).unwrap().is_unit());
        assert!(i.restrict(VarSet::singleton(0)).unwrap().is_zero());
    }

    #[test]
    fn json_round_trip_and_minimalize_on_load() {
        let text = r#"{"variables":["a","b","x","y"],
            "generators":[{"a":2,"x":2},{"a":1,"b":1},{"a":2,"b":1},{"b":2,"y":2,"x":0}]}"#;
        let i = MonomialIdeal::from_json_str(text).unwrap();
        assert_eq!(i.generators().len(), 3);
        let back = MonomialIdeal::from_json(&i.to_json()).unwrap();
        assert_eq!(back, i);
        assert!(!serde_json::to_string(&i.to_json()).unwrap().contains(":0"));
    }

    #[test]
    fn json_rejects_bad_exponents_and_variables() {
        let big = r#"{"variables":["a"],"generators":[{"a":4294967296}]}"#;
        assert!(matches!(MonomialIdeal::from_json_str(big), Err(Error::Overflow(_))));
        let unknown = r#"{"variables":["a"],"generators":[{"b":1}]}"#;
        assert!(matches!(
            MonomialIdeal::from_json_str(unknown),
            Err(Error::AmbientMismatch(_))
        ));
        let negative = r#"{"variables":["a"],"generators":[{"a":-1}]}"#;
        assert!(MonomialIdeal::from_json_str(negative).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        const N: usize = 4;

        fn ring4() -> Arc<Ring> {
            Ring::new(["a", "b", "c", "d"]).unwrap()
        }

        fn monomial() -> impl Strategy<Value = Monomial> {
            proptest::collection::vec(0u32..5, N).prop_map(Monomial::from_exponents)
        }

        fn ideal() -> impl Strategy<Value = MonomialIdeal> {
            proptest::collection::vec(proptest::collection::vec(0u32..4, N), 1..5)
                .prop_map(|gens| MonomialIdeal::new(ring4(), gens.into_iter().map(Monomial::from_exponents).collect()).unwrap())
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(128))]

            #[test]
            fn generators_are_an_antichain(i in ideal()) {
                let g = i.generators();
                for (k, a) in g.iter().enumerate() {
                    for (l, b) in g.iter().enumerate() {
                        prop_assert!(k == l || !a.divides(b));
                    }
                }
            }

            #[test]
            fn intersection_membership(i in ideal(), j in ideal(), f in monomial()) {
                let both = i.intersect(&j).unwrap();
                prop_assert_eq!(both.contains(&f).unwrap(), i.contains(&f).unwrap() && j.contains(&f).unwrap());
                let sum = i.sum(&j).unwrap();
                prop_assert_eq!(sum.contains(&f).unwrap(), i.contains(&f).unwrap() || j.contains(&f).unwrap());
            }

            #[test]
            fn colon_membership(i in ideal(), f in monomial(), g in monomial()) {
                let c = i.colon(&f).unwrap();
                prop_assert_eq!(c.contains(&g).unwrap(), i.contains(&f.checked_mul(&g).unwrap()).unwrap());
            }

            #[test]
            fn radical_membership(i in ideal(), f in monomial()) {
                // Generator exponents are below 4, so f lies in the radical iff f^4 lies in I.
                let f4 = (0..3).try_fold(f.clone(), |acc, _| acc.checked_mul(&f)).unwrap();
                prop_assert_eq!(i.radical().contains(&f).unwrap(), i.contains(&f4).unwrap());
            }

            #[test]
            fn power_is_repeated_product(i in ideal()) {
                prop_assert_eq!(i.power(2).unwrap(), i.product(&i).unwrap());
                prop_assert_eq!(i.power(3).unwrap(), i.power(2).unwrap().product(&i).unwrap());
            }

            #[test]
            fn json_round_trip(i in ideal()) {
                let text = serde_json::to_string(&i.to_json()).unwrap();
                prop_assert_eq!(MonomialIdeal::from_json_str(&text).unwrap(), i);
            }
        }
    }
}
