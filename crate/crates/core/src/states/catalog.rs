//! Catalogs of known entropy vectors and tensor-product realizability.
//!
//! The entropy vector of `rho_1 (x) rho_2` is the sum of the two vectors, and
//! since every instance is non-negative on the cone, its pattern is the meet
//! of the two patterns. Products are therefore never materialized.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::bitset::BitSet;
use crate::cones::{generate_int, InequalityFamily};
use crate::entropy_space::{enumerate_subsystems, eval_functional, EntropyVector, LinearFunctional, PartyCount};
use crate::error::{Error, Result};
use crate::gset::PatternSet;
use crate::mia::{pattern_of_vector, MiaContext, Pattern};

use super::generators::GeneratorSpec;

/// A generator family whose placements range over all supports of a given size.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneratorKind {
    Bell,
    Ghz(usize),
    Perfect(usize),
}

impl GeneratorKind {
    /// Every placement of this kind among the `n + 1` parties, in index order.
    pub fn placements(self, n: PartyCount) -> Vec<GeneratorSpec> {
        let size = match self {
            GeneratorKind::Bell => 2,
            GeneratorKind::Ghz(k) | GeneratorKind::Perfect(k) => k,
        };
        enumerate_subsystems(n, true)
            .into_iter()
            .filter(|t| t.len() == size)
            .map(|t| match self {
                GeneratorKind::Bell => {
                    let p: Vec<usize> = t.parties().collect();
                    GeneratorSpec::Bell(p[0], p[1])
                }
                GeneratorKind::Ghz(_) => GeneratorSpec::Ghz(t),
                GeneratorKind::Perfect(_) => GeneratorSpec::Perfect(t),
            })
            .collect()
    }
}

impl fmt::Display for GeneratorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorKind::Bell => write!(f, "bell"),
            GeneratorKind::Ghz(k) => write!(f, "ghz{k}"),
            GeneratorKind::Perfect(k) => write!(f, "perfect{k}"),
        }
    }
}

impl std::str::FromStr for GeneratorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let size = |rest: &str| {
            rest.parse::<usize>()
                .map_err(|_| Error::Parse(format!("unknown generator kind `{s}`")))
        };
        if lower == "bell" {
            Ok(GeneratorKind::Bell)
        } else if let Some(rest) = lower.strip_prefix("ghz") {
            Ok(GeneratorKind::Ghz(size(rest)?))
        } else if let Some(rest) = lower.strip_prefix("perfect") {
            Ok(GeneratorKind::Perfect(size(rest)?))
        } else {
            Err(Error::Parse(format!("unknown generator kind `{s}`")))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub label: String,
    pub vector: EntropyVector,
    pub pattern: Pattern,
}

#[derive(Clone, Debug)]
pub struct Catalog {
    n: PartyCount,
    bounds: Vec<LinearFunctional>,
    entries: Vec<CatalogEntry>,
}

#[derive(Serialize)]
struct EntryJson<'a> {
    label: &'a str,
    vector: Vec<String>,
    pattern: Vec<String>,
}

#[derive(Serialize)]
struct CatalogJson<'a> {
    n: usize,
    count: usize,
    entries: Vec<EntryJson<'a>>,
}

impl Catalog {
    pub fn new(n: PartyCount) -> Self {
        let bounds = generate_int(n, &[InequalityFamily::Sa, InequalityFamily::Ssa])
            .iter()
            .map(|r| LinearFunctional::from_integers(r))
            .collect();
        Catalog {
            n,
            bounds,
            entries: Vec::new(),
        }
    }

    pub fn parties(&self) -> PartyCount {
        self.n
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    /// True if `v` has non-negative coordinates and satisfies SA and SSA.
    pub fn admits(&self, v: &EntropyVector) -> bool {
        v.parties() == self.n
            && !v.has_negative()
            && self
                .bounds
                .iter()
                .all(|f| !num_traits::Signed::is_negative(&eval_functional(f, v).expect("matching dimension")))
    }

    pub fn insert(&mut self, ctx: &MiaContext, label: impl Into<String>, vector: EntropyVector) -> Result<()> {
        let label = label.into();
        if ctx.parties() != self.n {
            return Err(Error::ContextMismatch);
        }
        if !self.admits(&vector) {
            return Err(Error::OutsideCone { label });
        }
        let pattern = pattern_of_vector(ctx, &vector)?;
        self.entries.push(CatalogEntry { label, vector, pattern });
        Ok(())
    }

    pub fn to_json(&self, ctx: &MiaContext) -> String {
        let entries = self
            .entries
            .iter()
            .map(|e| EntryJson {
                label: &e.label,
                vector: e.vector.coords().iter().map(ToString::to_string).collect(),
                pattern: ctx.names(&e.pattern),
            })
            .collect();
        let doc = CatalogJson {
            n: self.n.get(),
            count: self.entries.len(),
            entries,
        };
        serde_json::to_string_pretty(&doc).expect("catalog serializes")
    }
}

/// Catalog of all listed generators plus extra labelled vectors.
pub fn build_catalog(ctx: &MiaContext, specs: &[GeneratorSpec], extra: &[(String, EntropyVector)]) -> Result<Catalog> {
    let n = ctx.parties();
    let mut cat = Catalog::new(n);
    let computed: Vec<(String, EntropyVector)> = specs
        .par_iter()
        .map(|s| s.vector(n).map(|v| (s.to_string(), v)))
        .collect::<Result<_>>()?;
    for (label, v) in computed.into_iter().chain(extra.iter().cloned()) {
        cat.insert(ctx, label, v)?;
    }
    Ok(cat)
}

/// Every placement of each kind, in the order given.
pub fn placements(n: PartyCount, kinds: &[GeneratorKind]) -> Vec<GeneratorSpec> {
    kinds.iter().flat_map(|k| k.placements(n)).collect()
}

/// The generators whose products realize every pattern of small systems:
/// Bell pairs, GHZ states on 4 parties and the 4-party perfect tensor.
pub fn standard_kinds(n: PartyCount) -> Vec<GeneratorKind> {
    let mut kinds = vec![GeneratorKind::Bell];
    if n.purifier() >= 4 {
        kinds.push(GeneratorKind::Ghz(4));
        kinds.push(GeneratorKind::Perfect(4));
    }
    kinds
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Realization {
    /// Labels of catalog entries whose product realizes the target.
    Realized(Vec<String>),
    /// The best the catalog can do: strictly above the target.
    NotRealized(Pattern),
}

impl Realization {
    pub fn is_realized(&self) -> bool {
        matches!(self, Realization::Realized(_))
    }
}

fn meet_of(ctx: &MiaContext, cat: &Catalog, chosen: &[usize]) -> BitSet {
    let mut acc = BitSet::full(ctx.len());
    for &i in chosen {
        acc = acc.intersection(cat.entries[i].pattern.members());
    }
    acc
}

pub fn realize_pattern(ctx: &MiaContext, target: &Pattern, cat: &Catalog) -> Result<Realization> {
    if target.parties() != ctx.parties() || cat.n != ctx.parties() {
        return Err(Error::ContextMismatch);
    }
    let goal = target.members();
    let mut chosen: Vec<usize> = (0..cat.len())
        .filter(|&i| goal.is_subset(cat.entries[i].pattern.members()))
        .collect();
    let best = meet_of(ctx, cat, &chosen);
    if best != *goal {
        return Ok(Realization::NotRealized(ctx.pattern_unchecked(best)));
    }
    let mut k = 0;
    while k < chosen.len() {
        let dropped = chosen.remove(k);
        if meet_of(ctx, cat, &chosen) != *goal {
            chosen.insert(k, dropped);
            k += 1;
        }
    }
    debug_assert_eq!(meet_of(ctx, cat, &chosen), *goal);
    Ok(Realization::Realized(
        chosen.into_iter().map(|i| cat.entries[i].label.clone()).collect(),
    ))
}

#[derive(Clone, Debug)]
pub struct Coverage {
    pub total: usize,
    pub realized: usize,
    pub missing: Vec<Pattern>,
}

impl Coverage {
    pub fn percent(&self) -> f64 {
        if self.total == 0 {
            100.0
        } else {
            100.0 * self.realized as f64 / self.total as f64
        }
    }
}

/// How many patterns of `set` the catalog realizes.
pub fn coverage(ctx: &MiaContext, set: &PatternSet, cat: &Catalog) -> Result<Coverage> {
    let outcomes: Vec<(Pattern, bool)> = set
        .patterns()
        .par_iter()
        .map(|p| realize_pattern(ctx, p, cat).map(|r| (p.clone(), r.is_realized())))
        .collect::<Result<_>>()?;
    let missing: Vec<Pattern> = outcomes.iter().filter(|(_, ok)| !ok).map(|(p, _)| p.clone()).collect();
    Ok(Coverage {
        total: outcomes.len(),
        realized: outcomes.len() - missing.len(),
        missing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mia::enumerate_mia;

    fn ctx(k: usize) -> MiaContext {
        enumerate_mia(PartyCount::new(k).unwrap())
    }

    #[test]
    fn bell_placements_n2() {
        let c = ctx(2);
        let specs = GeneratorKind::Bell.placements(c.parties());
        assert_eq!(specs.len(), 3);
        let cat = build_catalog(&c, &specs, &[]).unwrap();
        assert_eq!(cat.len(), 3);
        assert!(cat.entries().iter().all(|e| e.pattern.len() == 2));
    }

    #[test]
    fn full_support_placement() {
        let n = PartyCount::new(3).unwrap();
        let specs = GeneratorKind::Perfect(4).placements(n);
        assert_eq!(specs.len(), 1);
        assert_eq!(specs[0].to_string(), "PERFECT(1234)");
        assert_eq!(GeneratorKind::Ghz(3).placements(n).len(), 4);
    }

    #[test]
    fn empty_catalog() {
        let c = ctx(3);
        let cat = build_catalog(&c, &[], &[]).unwrap();
        assert!(cat.is_empty());
        let r = realize_pattern(&c, &c.empty_pattern(), &cat).unwrap();
        assert_eq!(r, Realization::NotRealized(c.full_pattern()));
    }

    #[test]
    fn realize_single_instance_n2() {
        let c = ctx(2);
        let cat = build_catalog(&c, &GeneratorKind::Bell.placements(c.parties()), &[]).unwrap();
        let target = c.pattern_from_names(&["I(1:2)"]).unwrap();
        let r = realize_pattern(&c, &target, &cat).unwrap();
        assert_eq!(r, Realization::Realized(vec!["Bell(1,3)".into(), "Bell(2,3)".into()]));

        let own = cat.entries()[0].pattern.clone();
        assert_eq!(
            realize_pattern(&c, &own, &cat).unwrap(),
            Realization::Realized(vec![cat.entries()[0].label.clone()])
        );

        match realize_pattern(&c, &c.empty_pattern(), &cat).unwrap() {
            Realization::Realized(w) => assert!(w.len() >= 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_vectors_outside_the_cone() {
        let c = ctx(2);
        let mut cat = Catalog::new(c.parties());
        let bad = EntropyVector::from_integers(c.parties(), &[1, 0, 0]).unwrap();
        assert!(matches!(cat.insert(&c, "bad", bad), Err(Error::OutsideCone { .. })));
        let neg = EntropyVector::from_integers(c.parties(), &[-1, 0, 0]).unwrap();
        assert!(cat.insert(&c, "neg", neg).is_err());
    }

    #[test]
    fn kind_parsing() {
        assert_eq!("ghz4".parse::<GeneratorKind>().unwrap(), GeneratorKind::Ghz(4));
        assert_eq!("Bell".parse::<GeneratorKind>().unwrap(), GeneratorKind::Bell);
        assert!("w3".parse::<GeneratorKind>().is_err());
    }
}
