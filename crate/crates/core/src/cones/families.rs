//! Linear entropy inequalities, written as normals `f` with `<f, S> >= 0`.

use std::fmt;
use std::str::FromStr;

use crate::entropy_space::{LinearFunctional, NormalBuilder, PartyCount};
use crate::error::{Error, Result};
use crate::exact;
use crate::mia;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum InequalityFamily {
    /// Subadditivity: `I(A:B) >= 0`.
    Sa,
    /// Strong subadditivity: `I(A:BC) - I(A:C) >= 0`.
    Ssa,
    /// `I(A:B) <= I(A:B|C) + I(A:B|D) + I(C:D)`.
    Ingleton,
    /// Monogamy of mutual information: `I3(A:B:C) <= 0`.
    Mmi,
    /// `S_K >= S_{K \ i}` for purifier-free `K`.
    Mono,
}

impl InequalityFamily {
    pub const ALL: [InequalityFamily; 5] = [
        InequalityFamily::Sa,
        InequalityFamily::Ssa,
        InequalityFamily::Ingleton,
        InequalityFamily::Mmi,
        InequalityFamily::Mono,
    ];

    pub fn name(self) -> &'static str {
        match self {
            InequalityFamily::Sa => "sa",
            InequalityFamily::Ssa => "ssa",
            InequalityFamily::Ingleton => "ingleton",
            InequalityFamily::Mmi => "mmi",
            InequalityFamily::Mono => "mono",
        }
    }
}

impl fmt::Display for InequalityFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for InequalityFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "sa" => Ok(InequalityFamily::Sa),
            "ssa" => Ok(InequalityFamily::Ssa),
            "ingleton" | "ing" => Ok(InequalityFamily::Ingleton),
            "mmi" => Ok(InequalityFamily::Mmi),
            "mono" => Ok(InequalityFamily::Mono),
            other => Err(Error::UnknownFamily(other.to_string())),
        }
    }
}

/// Parses a comma-separated list such as `sa,ssa,ingleton` into a sorted set.
pub fn parse_families(s: &str) -> Result<Vec<InequalityFamily>> {
    let mut out = s
        .split(',')
        .filter(|t| !t.trim().is_empty())
        .map(str::parse)
        .collect::<Result<Vec<InequalityFamily>>>()?;
    out.sort();
    out.dedup();
    Ok(out)
}

pub fn family_label(families: &[InequalityFamily]) -> String {
    let mut f = families.to_vec();
    f.sort();
    f.dedup();
    f.iter().map(|x| x.name()).collect::<Vec<_>>().join(",")
}

/// Calls `visit` with every ordered tuple of `k` pairwise disjoint nonempty
/// extended subsystems, as bit masks.
fn disjoint_tuples(n: PartyCount, k: usize, mut visit: impl FnMut(&[u32])) {
    let parties = n.purifier();
    let total = (k + 1).pow(parties as u32);
    let mut parts = vec![0u32; k];
    for code in 0..total {
        parts.iter_mut().for_each(|p| *p = 0);
        let mut c = code;
        for p in 0..parties {
            let slot = c % (k + 1);
            c /= k + 1;
            if slot > 0 {
                parts[slot - 1] |= 1 << p;
            }
        }
        if parts.iter().all(|&m| m != 0) {
            visit(&parts);
        }
    }
}

/// Normals of one family before positive rescaling and deduplication.
pub fn raw_instances(n: PartyCount, family: InequalityFamily) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    match family {
        InequalityFamily::Sa => {
            let ctx = mia::enumerate_mia(n);
            out.extend(ctx.int_normals().iter().cloned());
        }
        InequalityFamily::Ssa => disjoint_tuples(n, 3, |t| {
            let (i, j, k) = (t[0], t[1], t[2]);
            // I(i:jk) - I(i:k) = S_ik + S_jk - S_ijk - S_k
            let mut b = NormalBuilder::new(n);
            b.add(i | k, 1).add(j | k, 1).add(i | j | k, -1).add(k, -1);
            out.push(b.finish());
        }),
        InequalityFamily::Ingleton => disjoint_tuples(n, 4, |t| {
            let (a, bb, c, d) = (t[0], t[1], t[2], t[3]);
            if a > bb || c > d {
                return;
            }
            let mut b = NormalBuilder::new(n);
            b.add(a | c, 1)
                .add(a | d, 1)
                .add(bb | c, 1)
                .add(bb | d, 1)
                .add(a | bb, 1)
                .add(a, -1)
                .add(bb, -1)
                .add(c | d, -1)
                .add(a | bb | c, -1)
                .add(a | bb | d, -1);
            out.push(b.finish());
        }),
        InequalityFamily::Mmi => disjoint_tuples(n, 3, |t| {
            let (a, bb, c) = (t[0], t[1], t[2]);
            if !(a < bb && bb < c) {
                return;
            }
            let mut b = NormalBuilder::new(n);
            b.add(a | bb, 1)
                .add(bb | c, 1)
                .add(a | c, 1)
                .add(a, -1)
                .add(bb, -1)
                .add(c, -1)
                .add(a | bb | c, -1);
            out.push(b.finish());
        }),
        InequalityFamily::Mono => {
            for k in 1..=n.base_mask() {
                for i in 0..n.get() {
                    if k >> i & 1 == 0 {
                        continue;
                    }
                    let mut b = NormalBuilder::new(n);
                    b.add(k, 1);
                    let rest = k & !(1 << i);
                    if rest != 0 {
                        b.add(rest, -1);
                    }
                    out.push(b.finish());
                }
            }
        }
    }
    out
}

/// Canonical normals: primitive, nonzero, deduplicated, lexicographically sorted.
pub(crate) fn canonical_rows(rows: impl IntoIterator<Item = Vec<i64>>) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = rows
        .into_iter()
        .filter(|r| r.iter().any(|&x| x != 0))
        .map(|mut r| {
            exact::make_primitive(&mut r);
            r
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

pub(crate) fn generate_int(n: PartyCount, families: &[InequalityFamily]) -> Vec<Vec<i64>> {
    canonical_rows(families.iter().flat_map(|&f| raw_instances(n, f)))
}

/// All instances of the selected families for `n` parties, purifier-reduced and
/// deduplicated.
pub fn generate_inequalities(n: PartyCount, families: &[InequalityFamily]) -> Vec<LinearFunctional> {
    generate_int(n, families)
        .iter()
        .map(|r| LinearFunctional::from_integers(r))
        .collect()
}
