//! Patterns compatible with a family of entropy inequalities.
//!
//! The compatible set is the image of the cone's face lattice under the
//! pattern map. An instance vanishes on the relative interior of a face iff it
//! vanishes on every extreme ray of the face (instances are non-negative on the
//! cone), so face images are exactly the meets of ray patterns, plus the
//! all-members pattern of the origin.

use std::collections::{HashMap, HashSet};
use std::fmt;

use log::info;
use rayon::prelude::*;
use serde::Serialize;

use crate::bitset::BitSet;
use crate::cones::{self, family_label, generate_inequalities, Cone, InequalityFamily, LpOutcome, Ray, RayCache};
use crate::entropy_space::{EntropyVector, LinearFunctional, PartyCount};
use crate::error::{Error, Result};
use crate::mia::{self, MiaContext, Pattern};

/// Largest party count accepted by the oracle without an explicit override.
pub const ORACLE_MAX_PARTIES: usize = 3;

/// Set of patterns sharing one arrangement, in canonical order.
#[derive(Clone, Debug)]
pub struct PatternSet {
    n: PartyCount,
    families: Vec<InequalityFamily>,
    patterns: Vec<Pattern>,
    index: HashMap<BitSet, usize>,
}

impl PatternSet {
    pub fn new(n: PartyCount, families: &[InequalityFamily], mut patterns: Vec<Pattern>) -> Self {
        patterns.sort();
        patterns.dedup();
        let index = patterns
            .iter()
            .enumerate()
            .map(|(i, p)| (p.members().clone(), i))
            .collect();
        let mut families = families.to_vec();
        families.sort();
        families.dedup();
        PatternSet {
            n,
            families,
            patterns,
            index,
        }
    }

    pub fn parties(&self) -> PartyCount {
        self.n
    }

    pub fn families(&self) -> &[InequalityFamily] {
        &self.families
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn patterns(&self) -> &[Pattern] {
        &self.patterns
    }

    pub fn iter(&self) -> impl Iterator<Item = &Pattern> {
        self.patterns.iter()
    }

    pub fn contains(&self, p: &Pattern) -> bool {
        p.parties() == self.n && self.index.contains_key(p.members())
    }

    pub fn get(&self, members: &BitSet) -> Option<&Pattern> {
        self.index.get(members).map(|&i| &self.patterns[i])
    }

    /// Patterns whose members include all of `members`.
    pub fn supersets_of<'a>(&'a self, members: &'a BitSet) -> impl Iterator<Item = &'a Pattern> + 'a {
        self.patterns.iter().filter(move |p| members.is_subset(p.members()))
    }

    /// Count excluding the full space (no members) and the origin (all members).
    pub fn count_without_extremes(&self, ctx: &MiaContext) -> usize {
        self.patterns
            .iter()
            .filter(|p| !p.is_empty() && p.len() != ctx.len())
            .count()
    }

    pub fn to_json(&self, ctx: &MiaContext) -> String {
        #[derive(Serialize)]
        struct Export<'a> {
            n: usize,
            families: Vec<&'a str>,
            count: usize,
            patterns: Vec<Vec<String>>,
        }
        let e = Export {
            n: self.n.get(),
            families: self.families.iter().map(|f| f.name()).collect(),
            count: self.len(),
            patterns: self.patterns.iter().map(|p| ctx.names(p)).collect(),
        };
        serde_json::to_string(&e).expect("serializable")
    }

    /// `pattern_id,members,dim` rows.
    pub fn summary_csv(&self) -> String {
        let mut out = String::from("pattern_id,members,dim\n");
        for (i, p) in self.patterns.iter().enumerate() {
            out.push_str(&format!("{i},{},{}\n", p.len(), p.dim()));
        }
        out
    }
}

/// Closes a list of member sets under pairwise intersection.
///
/// Generators are added one at a time; after adding `g` the store holds the
/// meets of all nonempty subsets of the generators seen so far, so each step
/// only intersects `g` with the existing store.
pub fn meet_closure(generators: &[BitSet]) -> Vec<BitSet> {
    let mut seen: HashSet<BitSet> = HashSet::new();
    let mut store: Vec<BitSet> = Vec::new();
    for g in generators {
        if seen.contains(g) {
            continue;
        }
        let meets: Vec<BitSet> = store.par_iter().map(|x| x.intersection(g)).collect();
        seen.insert(g.clone());
        store.push(g.clone());
        for m in meets {
            if !seen.contains(&m) {
                seen.insert(m.clone());
                store.push(m);
            }
        }
    }
    store
}

/// Compatible set from a list of extreme rays.
pub fn g_from_rays(ctx: &MiaContext, families: &[InequalityFamily], rays: &[Ray]) -> PatternSet {
    let mut gens: Vec<BitSet> = rays
        .par_iter()
        .map(|r| ctx.pattern_of_point(r.point()).into_members())
        .collect();
    gens.sort();
    gens.dedup();
    let mut closed = meet_closure(&gens);
    let full = BitSet::full(ctx.len());
    if !closed.contains(&full) {
        closed.push(full);
    }
    info!("{} ray patterns close to {} patterns", gens.len(), closed.len());
    let patterns: Vec<Pattern> = closed.into_par_iter().map(|m| ctx.pattern_unchecked(m)).collect();
    PatternSet::new(ctx.parties(), families, patterns)
}

fn trivial_set(ctx: &MiaContext, families: &[InequalityFamily]) -> PatternSet {
    PatternSet::new(ctx.parties(), families, vec![ctx.empty_pattern()])
}

/// Compatible set of the cone cut out by `families`.
pub fn compute_g(n: PartyCount, families: &[InequalityFamily]) -> Result<PatternSet> {
    compute_g_cached(&mia::enumerate_mia(n), families, None)
}

/// Like [`compute_g`], reading and writing extreme rays through `cache`.
pub fn compute_g_cached(
    ctx: &MiaContext,
    families: &[InequalityFamily],
    cache: Option<&RayCache>,
) -> Result<PatternSet> {
    if ctx.is_empty() {
        return Ok(trivial_set(ctx, families));
    }
    let cone = Cone::from_families(ctx.parties(), families)?;
    let rays = match cache {
        Some(c) => cone.rays_cached(c)?,
        None => cone.rays()?,
    };
    Ok(g_from_rays(ctx, families, rays))
}

fn family_normals(n: PartyCount, families: &[InequalityFamily]) -> Vec<LinearFunctional> {
    generate_inequalities(n, families)
}

/// Point satisfying `normals >= 0` whose vanishing set is exactly `p`.
fn realizing_point(ctx: &MiaContext, p: &Pattern, normals: &[LinearFunctional]) -> Result<Option<EntropyVector>> {
    if ctx.is_empty() {
        return Ok(Some(EntropyVector::zero(ctx.parties())));
    }
    let eqs: Vec<LinearFunctional> = p.members().iter().map(|i| ctx.normals()[i].clone()).collect();
    let strict: Vec<LinearFunctional> = (0..ctx.len())
        .filter(|&i| !p.contains(i))
        .map(|i| ctx.normals()[i].clone())
        .collect();
    Ok(match cones::lp_feasible(&eqs, normals, &strict)? {
        LpOutcome::Feasible(v) => Some(v),
        LpOutcome::Infeasible => None,
    })
}

/// Compatible set by definition: every lattice element is tested for a point
/// of the cone whose vanishing set is exactly that element.
pub fn compute_g_oracle(n: PartyCount, families: &[InequalityFamily], allow_large: bool) -> Result<PatternSet> {
    if n.get() > ORACLE_MAX_PARTIES && !allow_large {
        return Err(Error::OracleGuard(n.get()));
    }
    let ctx = mia::enumerate_mia(n);
    if ctx.is_empty() {
        return Ok(trivial_set(&ctx, families));
    }
    let lattice = ctx.enumerate_lattice(usize::MAX).expect("unbounded enumeration");
    let normals = family_normals(n, families);
    let keep: Vec<Result<Option<Pattern>>> = lattice
        .into_par_iter()
        .map(|p| Ok(realizing_point(&ctx, &p, &normals)?.map(|_| p)))
        .collect();
    let mut out = Vec::new();
    for k in keep {
        if let Some(p) = k? {
            out.push(p);
        }
    }
    Ok(PatternSet::new(n, families, out))
}

/// Outcome of comparing two compatible sets; witnesses in canonical order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GComparison {
    Equal,
    /// `a` strictly contains `b`; `extra` lists `a \ b`.
    Superset {
        extra: Vec<Pattern>,
    },
    /// `b` strictly contains `a`; `missing` lists `b \ a`.
    Subset {
        missing: Vec<Pattern>,
    },
    Incomparable {
        only_a: Vec<Pattern>,
        only_b: Vec<Pattern>,
    },
}

impl GComparison {
    pub fn verdict(&self) -> &'static str {
        match self {
            GComparison::Equal => "EQUAL",
            GComparison::Superset { .. } => "A_SUPERSET_OF_B",
            GComparison::Subset { .. } => "A_SUBSET_OF_B",
            GComparison::Incomparable { .. } => "INCOMPARABLE",
        }
    }
}

impl fmt::Display for GComparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.verdict())
    }
}

pub fn compare_g(a: &PatternSet, b: &PatternSet) -> Result<GComparison> {
    if a.n != b.n {
        return Err(Error::ContextMismatch);
    }
    let only_a: Vec<Pattern> = a.patterns.iter().filter(|p| !b.contains(p)).cloned().collect();
    let only_b: Vec<Pattern> = b.patterns.iter().filter(|p| !a.contains(p)).cloned().collect();
    Ok(match (only_a.is_empty(), only_b.is_empty()) {
        (true, true) => GComparison::Equal,
        (false, true) => GComparison::Superset { extra: only_a },
        (true, false) => GComparison::Subset { missing: only_b },
        (false, false) => GComparison::Incomparable { only_a, only_b },
    })
}

/// A point realizing exactly `p` that satisfies `families` and classical
/// monotonicity, or `None` if every such point violates monotonicity.
pub fn admits_monotone_representative(
    ctx: &MiaContext,
    p: &Pattern,
    families: &[InequalityFamily],
) -> Result<Option<EntropyVector>> {
    if p.parties() != ctx.parties() || p.members().len() != ctx.len() {
        return Err(Error::ContextMismatch);
    }
    let mut fams = families.to_vec();
    fams.push(InequalityFamily::Mono);
    let normals = family_normals(ctx.parties(), &fams);
    realizing_point(ctx, p, &normals)
}

/// Exact realizing point for `p` under `families` (no monotonicity).
pub fn realizing_vector(ctx: &MiaContext, p: &Pattern, families: &[InequalityFamily]) -> Result<Option<EntropyVector>> {
    realizing_point(ctx, p, &family_normals(ctx.parties(), families))
}

/// Human-readable provenance, e.g. `G_4^{sa,ssa}`.
pub fn describe(set: &PatternSet) -> String {
    format!("G_{}^{{{}}}", set.n, family_label(&set.families))
}

#[cfg(test)]
mod tests {
    use super::*;
    use InequalityFamily::*;

    fn n(k: usize) -> PartyCount {
        PartyCount::new(k).unwrap()
    }

    #[test]
    fn meet_closure_of_three_bell_patterns() {
        let gens = vec![
            BitSet::from_indices(3, [1, 2]),
            BitSet::from_indices(3, [0, 2]),
            BitSet::from_indices(3, [0, 1]),
        ];
        let closed = meet_closure(&gens);
        // three generators, three singletons, and the empty set
        assert_eq!(closed.len(), 7);
    }

    #[test]
    fn two_party_g_is_the_full_lattice() {
        let g = compute_g(n(2), &[Sa]).unwrap();
        assert_eq!(g.len(), 8);
        let sizes: Vec<usize> = g.iter().map(Pattern::len).collect();
        assert_eq!(sizes, vec![0, 1, 1, 1, 2, 2, 2, 3]);
        let ctx = mia::enumerate_mia(n(2));
        assert_eq!(g.count_without_extremes(&ctx), 6);
        let oracle = compute_g_oracle(n(2), &[Sa], false).unwrap();
        assert_eq!(compare_g(&g, &oracle).unwrap(), GComparison::Equal);
    }

    #[test]
    fn one_party_is_trivial() {
        let g = compute_g(n(1), &[Sa, Ssa]).unwrap();
        assert_eq!(g.len(), 1);
        assert!(g.patterns()[0].is_empty());
        let o = compute_g_oracle(n(1), &[Sa], false).unwrap();
        assert_eq!(compare_g(&g, &o).unwrap(), GComparison::Equal);
    }

    #[test]
    fn oracle_guard() {
        assert!(matches!(
            compute_g_oracle(n(4), &[Sa], false),
            Err(Error::OracleGuard(4))
        ));
    }

    #[test]
    fn comparison_verdicts() {
        let ctx = mia::enumerate_mia(n(2));
        let g = compute_g(n(2), &[Sa]).unwrap();
        assert_eq!(compare_g(&g, &g).unwrap(), GComparison::Equal);
        let smaller = PatternSet::new(n(2), &[Sa], g.patterns()[1..].to_vec());
        match compare_g(&g, &smaller).unwrap() {
            GComparison::Superset { extra } => assert_eq!(extra, vec![ctx.empty_pattern()]),
            other => panic!("{other:?}"),
        }
        assert_eq!(compare_g(&smaller, &g).unwrap().verdict(), "A_SUBSET_OF_B");
        let other = PatternSet::new(n(2), &[Sa], g.patterns()[..7].to_vec());
        assert_eq!(compare_g(&smaller, &other).unwrap().verdict(), "INCOMPARABLE");
        let g3 = compute_g(n(3), &[Sa]).unwrap();
        assert!(compare_g(&g, &g3).is_err());
    }

    #[test]
    fn monotone_representatives() {
        let ctx = mia::enumerate_mia(n(2));
        let p = ctx.pattern_from_names(&["I(1:2)", "I(1:3)"]).unwrap();
        let w = admits_monotone_representative(&ctx, &p, &[Sa]).unwrap().unwrap();
        assert_eq!(w.to_i64().unwrap(), vec![0, 1, 1]);
        let origin = ctx.full_pattern();
        assert!(admits_monotone_representative(&ctx, &origin, &[Sa])
            .unwrap()
            .unwrap()
            .is_zero());
    }

    #[test]
    fn exports() {
        let ctx = mia::enumerate_mia(n(2));
        let g = compute_g(n(2), &[Sa]).unwrap();
        let json = g.to_json(&ctx);
        assert!(json.starts_with(r#"{"n":2,"families":["sa"],"count":8,"patterns":[[],["I(1:2)"]"#));
        let csv = g.summary_csv();
        assert_eq!(csv.lines().count(), 9);
        assert_eq!(csv.lines().last().unwrap(), "7,3,0");
        assert_eq!(describe(&g), "G_2^{sa}");
    }
}
