//! The mutual information arrangement and its intersection lattice.
//!
//! A lattice element is stored as its span-closed member set: the instances
//! whose normals lie in the span of the normals defining the subspace. Two
//! member sets are equal iff the subspaces are, so equality is a bit-vector
//! comparison and the lattice order is set inclusion.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;

use crate::bitset::BitSet;
use crate::entropy_space::{
    self, EntropyVector, LinearFunctional, NormalBuilder, PartyCount, Permutation, SubsystemIndex,
};
use crate::error::{Error, Result};
use crate::exact;
use crate::linalg::{self, RowSpace};

/// An instance `I(i:k)` of the mutual information between disjoint extended
/// subsystems, with `i < k` as bit masks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MiInstance {
    i: SubsystemIndex,
    k: SubsystemIndex,
}

impl MiInstance {
    pub fn new(a: SubsystemIndex, b: SubsystemIndex, n: PartyCount) -> Result<Self> {
        if !a.fits(n, true) || !b.fits(n, true) {
            return Err(Error::InvalidIndex(format!(
                "I({a}:{b}) exceeds {} parties",
                n.purifier()
            )));
        }
        if a.bits() & b.bits() != 0 {
            return Err(Error::InvalidIndex(format!("I({a}:{b}) has overlapping arguments")));
        }
        if a.bits() | b.bits() == n.full_mask() {
            return Err(Error::InvalidIndex(format!("I({a}:{b}) covers the purified system")));
        }
        let (i, k) = if a < b { (a, b) } else { (b, a) };
        Ok(MiInstance { i, k })
    }

    pub fn left(self) -> SubsystemIndex {
        self.i
    }

    pub fn right(self) -> SubsystemIndex {
        self.k
    }

    pub fn permute(self, perm: &Permutation, n: PartyCount) -> MiInstance {
        MiInstance::new(perm.apply(self.i), perm.apply(self.k), n).expect("permutation preserves validity")
    }
}

impl fmt::Display for MiInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "I({}:{})", self.i, self.k)
    }
}

/// Parses `I(13:2)`; the result still has to be validated against a party count.
impl FromStr for MiInstance {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::UnknownInstance(s.to_string());
        let body = s
            .trim()
            .strip_prefix("I(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(bad)?;
        let (a, b) = body.split_once(':').ok_or_else(bad)?;
        let a: SubsystemIndex = a.parse().map_err(|_| bad())?;
        let b: SubsystemIndex = b.parse().map_err(|_| bad())?;
        let (i, k) = if a < b { (a, b) } else { (b, a) };
        Ok(MiInstance { i, k })
    }
}

pub(crate) fn instance_normal_i64(inst: MiInstance, n: PartyCount) -> Vec<i64> {
    let mut b = NormalBuilder::new(n);
    b.add(inst.i.bits(), 1)
        .add(inst.k.bits(), 1)
        .add(inst.i.bits() | inst.k.bits(), -1);
    b.finish()
}

/// Normal of the hyperplane `I(i:k) = 0` after purifier reduction.
pub fn instance_normal(inst: MiInstance, n: PartyCount) -> LinearFunctional {
    LinearFunctional::from_integers(&instance_normal_i64(inst, n))
}

/// The arrangement `MIA_n` in canonical order.
#[derive(Clone, Debug)]
pub struct MiaContext {
    n: PartyCount,
    instances: Vec<MiInstance>,
    normals: Vec<LinearFunctional>,
    int_normals: Vec<Vec<i64>>,
    lookup: HashMap<MiInstance, usize>,
}

/// All instances of the mutual information for `n` parties plus purifier.
pub fn enumerate_mia(n: PartyCount) -> MiaContext {
    let full = n.full_mask();
    let mut instances = Vec::new();
    for i in 1..=full {
        for k in (i + 1)..=full {
            if i & k == 0 && i | k != full {
                instances.push(MiInstance {
                    i: SubsystemIndex::from_bits(i).unwrap(),
                    k: SubsystemIndex::from_bits(k).unwrap(),
                });
            }
        }
    }
    let int_normals: Vec<Vec<i64>> = instances.iter().map(|&h| instance_normal_i64(h, n)).collect();
    let normals = int_normals.iter().map(|r| LinearFunctional::from_integers(r)).collect();
    let lookup = instances.iter().enumerate().map(|(i, &h)| (h, i)).collect();
    MiaContext {
        n,
        instances,
        normals,
        int_normals,
        lookup,
    }
}

impl MiaContext {
    pub fn parties(&self) -> PartyCount {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.n.dim()
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    pub fn instances(&self) -> &[MiInstance] {
        &self.instances
    }

    pub fn normals(&self) -> &[LinearFunctional] {
        &self.normals
    }

    pub fn int_normals(&self) -> &[Vec<i64>] {
        &self.int_normals
    }

    pub fn index_of(&self, inst: MiInstance) -> Option<usize> {
        self.lookup.get(&inst).copied()
    }

    pub fn index_of_name(&self, name: &str) -> Result<usize> {
        let inst: MiInstance = name.parse()?;
        self.index_of(inst)
            .ok_or_else(|| Error::UnknownInstance(name.to_string()))
    }

    fn rank_of(&self, members: &BitSet) -> usize {
        linalg::rank_i64(self.dim(), members.iter().map(|i| self.int_normals[i].as_slice()))
    }

    /// Wraps a member set that is already known to be span-closed.
    pub fn pattern_unchecked(&self, members: BitSet) -> Pattern {
        debug_assert_eq!(members.len(), self.len());
        let dim = self.dim() - self.rank_of(&members);
        Pattern {
            n: self.n,
            members,
            dim,
        }
    }

    pub fn empty_pattern(&self) -> Pattern {
        Pattern {
            n: self.n,
            members: BitSet::new(self.len()),
            dim: self.dim(),
        }
    }

    /// The pattern of the origin: every instance vanishes.
    pub fn full_pattern(&self) -> Pattern {
        self.pattern_unchecked(BitSet::full(self.len()))
    }

    /// Members are the instances vanishing on an integer point.
    pub fn pattern_of_point(&self, point: &[i64]) -> Pattern {
        assert_eq!(point.len(), self.dim());
        let members = BitSet::from_indices(
            self.len(),
            (0..self.len()).filter(|&i| exact::dot_i64(&self.int_normals[i], point) == 0),
        );
        self.pattern_unchecked(members)
    }

    pub fn is_closed(&self, members: &BitSet) -> bool {
        self.closure(members).members == *members
    }

    pub fn closure(&self, raw: &BitSet) -> Pattern {
        assert_eq!(raw.len(), self.len());
        let mut space = RowSpace::new(self.dim());
        for i in raw.iter() {
            space.insert(&self.int_normals[i]);
        }
        let rank = space.rank();
        let mut members = raw.clone();
        for i in 0..self.len() {
            if !members.contains(i) && space.contains(&self.int_normals[i]) {
                members.insert(i);
            }
        }
        Pattern {
            n: self.n,
            members,
            dim: self.dim() - rank,
        }
    }

    fn check(&self, p: &Pattern) -> Result<()> {
        if p.n != self.n || p.members.len() != self.len() {
            return Err(Error::ContextMismatch);
        }
        Ok(())
    }

    pub fn meet(&self, p: &Pattern, q: &Pattern) -> Result<Pattern> {
        self.check(p)?;
        self.check(q)?;
        let members = p.members.intersection(&q.members);
        debug_assert!(self.is_closed(&members), "meet of closed sets must be closed");
        Ok(self.pattern_unchecked(members))
    }

    /// Intersection of the varieties, as a lattice element.
    pub fn join(&self, p: &Pattern, q: &Pattern) -> Result<Pattern> {
        self.check(p)?;
        self.check(q)?;
        Ok(self.closure(&p.members.union(&q.members)))
    }

    pub fn permute_pattern(&self, p: &Pattern, perm: &Permutation) -> Pattern {
        let members = BitSet::from_indices(
            self.len(),
            p.members
                .iter()
                .map(|i| self.lookup[&self.instances[i].permute(perm, self.n)]),
        );
        Pattern {
            n: self.n,
            members,
            dim: p.dim,
        }
    }

    /// Closure of the listed instance names.
    pub fn pattern_from_names<S: AsRef<str>>(&self, names: &[S]) -> Result<Pattern> {
        let raw = names
            .iter()
            .map(|s| self.index_of_name(s.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.closure(&BitSet::from_indices(self.len(), raw)))
    }

    pub fn names(&self, p: &Pattern) -> Vec<String> {
        p.members.iter().map(|i| self.instances[i].to_string()).collect()
    }

    pub fn pattern_json(&self, p: &Pattern) -> String {
        serde_json::to_string(&self.names(p)).expect("serializable")
    }

    /// Every element of the intersection lattice, found breadth-first from the
    /// full space by adding one hyperplane at a time. Returns `None` once more
    /// than `limit` elements have been produced.
    pub fn enumerate_lattice(&self, limit: usize) -> Option<Vec<Pattern>> {
        let mut seen: HashSet<BitSet> = HashSet::new();
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        let bottom = self.empty_pattern();
        seen.insert(bottom.members.clone());
        queue.push_back(bottom);
        while let Some(p) = queue.pop_front() {
            for h in 0..self.len() {
                if p.members.contains(h) {
                    continue;
                }
                let mut raw = p.members.clone();
                raw.insert(h);
                let q = self.closure(&raw);
                if seen.insert(q.members.clone()) {
                    queue.push_back(q);
                }
            }
            out.push(p);
            if out.len() + queue.len() > limit {
                return None;
            }
        }
        out.sort();
        Some(out)
    }
}

/// Pattern of marginal independence.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Pattern {
    n: PartyCount,
    members: BitSet,
    dim: usize,
}

impl Pattern {
    pub fn parties(&self) -> PartyCount {
        self.n
    }

    pub fn members(&self) -> &BitSet {
        &self.members
    }

    pub fn into_members(self) -> BitSet {
        self.members
    }

    /// Dimension of the subspace.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.members.count()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, instance: usize) -> bool {
        self.members.contains(instance)
    }
}

/// Canonical order: fewer members first, then lexicographic on member indices.
impl Ord for Pattern {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n
            .cmp(&other.n)
            .then(self.members.count().cmp(&other.members.count()))
            .then_with(|| self.members.iter().cmp(other.members.iter()))
    }
}

impl PartialOrd for Pattern {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Members are exactly the instances whose normal vanishes on `s`.
pub fn pattern_of_vector(ctx: &MiaContext, s: &EntropyVector) -> Result<Pattern> {
    if s.parties() != ctx.n {
        return Err(Error::Dimension {
            expected: ctx.dim(),
            found: s.dim(),
        });
    }
    if let Some(point) = s.to_i64() {
        return Ok(ctx.pattern_of_point(&point));
    }
    let mut members = BitSet::new(ctx.len());
    for (i, f) in ctx.normals.iter().enumerate() {
        if entropy_space::eval_functional(f, s)?.is_zero() {
            members.insert(i);
        }
    }
    Ok(ctx.pattern_unchecked(members))
}

pub fn closure(ctx: &MiaContext, raw: &BitSet) -> Pattern {
    ctx.closure(raw)
}

pub fn meet(ctx: &MiaContext, p: &Pattern, q: &Pattern) -> Result<Pattern> {
    ctx.meet(p, q)
}

/// Position of `p` relative to `q` in the lattice order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PatternOrder {
    Equal,
    Precedes,
    Succeeds,
    Incomparable,
}

/// `p` precedes `q` when the variety of `p` contains that of `q`, i.e. when the
/// members of `p` are a subset of the members of `q`.
pub fn compare(p: &Pattern, q: &Pattern) -> Result<PatternOrder> {
    if p.n != q.n || p.members.len() != q.members.len() {
        return Err(Error::ContextMismatch);
    }
    Ok(
        match (p.members.is_subset(&q.members), q.members.is_subset(&p.members)) {
            (true, true) => PatternOrder::Equal,
            (true, false) => PatternOrder::Precedes,
            (false, true) => PatternOrder::Succeeds,
            (false, false) => PatternOrder::Incomparable,
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(k: usize) -> PartyCount {
        PartyCount::new(k).unwrap()
    }

    fn names(ctx: &MiaContext, p: &Pattern) -> Vec<String> {
        ctx.names(p)
    }

    #[test]
    fn two_party_arrangement() {
        let ctx = enumerate_mia(n(2));
        let got: Vec<String> = ctx.instances().iter().map(|h| h.to_string()).collect();
        assert_eq!(got, vec!["I(1:2)", "I(1:3)", "I(2:3)"]);
        assert_eq!(ctx.int_normals()[0], vec![1, 1, -1]);
        assert_eq!(ctx.int_normals()[1], vec![1, -1, 1]);
        assert_eq!(ctx.int_normals()[2], vec![-1, 1, 1]);
    }

    #[test]
    fn one_party_arrangement_is_empty() {
        let ctx = enumerate_mia(n(1));
        assert!(ctx.is_empty());
        assert_eq!(ctx.enumerate_lattice(10).unwrap().len(), 1);
    }

    #[test]
    fn instance_validation() {
        let a: SubsystemIndex = "1".parse().unwrap();
        let b: SubsystemIndex = "23".parse().unwrap();
        assert!(MiInstance::new(a, b, n(2)).is_err());
        assert!(MiInstance::new(a, a, n(3)).is_err());
        let h = MiInstance::new(b, a, n(3)).unwrap();
        assert_eq!(h.to_string(), "I(1:23)");
        assert_eq!("I(23:1)".parse::<MiInstance>().unwrap(), h);
    }

    #[test]
    fn normals_have_no_coefficient_collisions() {
        for k in 1..=5 {
            for r in enumerate_mia(n(k)).int_normals() {
                assert_eq!(r.iter().filter(|&&c| c != 0).count(), 3);
                assert!(r.iter().all(|c| c.abs() == 1 || *c == 0));
            }
        }
    }

    #[test]
    fn bell_pattern() {
        let ctx = enumerate_mia(n(2));
        let s = EntropyVector::from_integers(n(2), &[1, 1, 0]).unwrap();
        let p = pattern_of_vector(&ctx, &s).unwrap();
        assert_eq!(names(&ctx, &p), vec!["I(1:3)", "I(2:3)"]);
        assert_eq!(p.dim(), 1);
        let origin = pattern_of_vector(&ctx, &EntropyVector::zero(n(2))).unwrap();
        assert_eq!(origin.len(), 3);
        assert_eq!(origin.dim(), 0);
    }

    #[test]
    fn perfect_four_party_pattern() {
        let ctx = enumerate_mia(n(3));
        // (S1, S2, S12, S3, S13, S23, S123)
        let s = EntropyVector::from_integers(n(3), &[1, 1, 2, 1, 2, 2, 1]).unwrap();
        let p = pattern_of_vector(&ctx, &s).unwrap();
        assert_eq!(
            names(&ctx, &p),
            vec!["I(1:2)", "I(1:3)", "I(1:4)", "I(2:3)", "I(2:4)", "I(3:4)"]
        );
    }

    #[test]
    fn closure_examples() {
        let ctx = enumerate_mia(n(2));
        let raw = BitSet::from_indices(3, [1, 2]);
        let c = ctx.closure(&raw);
        assert_eq!(c.members(), &raw);
        assert_eq!(c.dim(), 1);
        let all = ctx.closure(&BitSet::full(3));
        assert_eq!(all.len(), 3);
        assert_eq!(all.dim(), 0);
        let none = ctx.closure(&BitSet::new(3));
        assert!(none.is_empty());
        assert_eq!(none.dim(), 3);
    }

    #[test]
    fn closure_adds_dependent_instances() {
        let ctx = enumerate_mia(n(3));
        // I(1:23) + I(2:3) = I(1:2) + I(12:3)
        let ids: Vec<usize> = ["I(1:2)", "I(12:3)", "I(2:3)"]
            .iter()
            .map(|s| ctx.index_of_name(s).unwrap())
            .collect();
        let c = ctx.closure(&BitSet::from_indices(ctx.len(), ids));
        assert!(c.contains(ctx.index_of_name("I(1:23)").unwrap()));
    }

    #[test]
    fn meet_and_compare() {
        let ctx = enumerate_mia(n(2));
        let p = ctx.closure(&BitSet::from_indices(3, [1, 2]));
        let q = ctx.closure(&BitSet::from_indices(3, [0, 2]));
        let m = meet(&ctx, &p, &q).unwrap();
        assert_eq!(names(&ctx, &m), vec!["I(2:3)"]);
        assert_eq!(meet(&ctx, &p, &ctx.full_pattern()).unwrap(), p);
        assert!(meet(&ctx, &p, &ctx.empty_pattern()).unwrap().is_empty());
        assert_eq!(compare(&m, &p).unwrap(), PatternOrder::Precedes);
        assert_eq!(compare(&p, &m).unwrap(), PatternOrder::Succeeds);
        assert_eq!(compare(&p, &q).unwrap(), PatternOrder::Incomparable);
        assert_eq!(compare(&p, &p).unwrap(), PatternOrder::Equal);
        let other = enumerate_mia(n(3)).empty_pattern();
        assert!(matches!(compare(&p, &other), Err(Error::ContextMismatch)));
        assert!(ctx.meet(&p, &other).is_err());
        assert_eq!(ctx.join(&p, &q).unwrap(), ctx.full_pattern());
    }

    #[test]
    fn two_party_lattice_has_eight_elements() {
        let ctx = enumerate_mia(n(2));
        let lat = ctx.enumerate_lattice(100).unwrap();
        assert_eq!(lat.len(), 8);
    }
}
