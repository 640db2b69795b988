//! Double description: half-space representation to extreme rays.
//!
//! Constraints are inserted one at a time, always choosing the remaining
//! constraint violated by the fewest current rays (ties by canonical index).
//! Adjacency of a positive/negative ray pair is decided combinatorially: the
//! pair is adjacent iff its common zero set has at least `d - 2` elements and
//! no third ray is tight on all of it.

use log::info;
use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::exact::{self, ExactInt};
use crate::linalg::{self, RowSpace};

/// Resumable intermediate state: the constraints inserted so far and the
/// extreme rays of the cone they cut out.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct DdCheckpoint {
    pub processed: Vec<usize>,
    pub rays: Vec<Vec<String>>,
}

struct RayRec<T> {
    v: Vec<T>,
    zeros: BitSet,
}

fn to_strings<T: ExactInt>(v: &[T]) -> Vec<String> {
    v.iter().map(|x| x.to_bigint().to_string()).collect()
}

fn checkpoint_of<T: ExactInt>(processed: &[usize], rays: &[RayRec<T>]) -> DdCheckpoint {
    DdCheckpoint {
        processed: processed.to_vec(),
        rays: rays.iter().map(|r| to_strings(&r.v)).collect(),
    }
}

/// Snapshot passed to progress callbacks after each insertion step.
pub struct DdProgress<'a> {
    pub processed: usize,
    pub total: usize,
    pub rays: usize,
    snapshot: &'a dyn Fn() -> DdCheckpoint,
}

impl DdProgress<'_> {
    /// Materializes a checkpoint that can be passed back as `resume`.
    pub fn checkpoint(&self) -> DdCheckpoint {
        (self.snapshot)()
    }
}

enum Start<'a> {
    Fresh,
    Resume(&'a DdCheckpoint),
}

/// Verifies that the rows span the whole space; otherwise reports a basis of the
/// lineality space.
pub fn check_pointed(rows: &[Vec<i64>], dim: usize) -> Result<()> {
    if rows.is_empty() {
        return Err(Error::EmptyHrep);
    }
    if linalg::rank_i64(dim, rows.iter().map(Vec::as_slice)) == dim {
        return Ok(());
    }
    let lineality = linalg::null_space_i64(rows, dim)
        .into_iter()
        .map(|v| v.iter().map(ToString::to_string).collect())
        .collect();
    Err(Error::NotPointed { lineality })
}

/// Extreme rays of the pointed cone `{x : row · x >= 0}` as primitive integer
/// vectors in lexicographic order.
///
/// `progress` is called after every insertion step.
pub fn extreme_rays_of(
    rows: &[Vec<i64>],
    dim: usize,
    resume: Option<&DdCheckpoint>,
    progress: &mut dyn FnMut(&DdProgress<'_>),
) -> Result<Vec<Vec<i64>>> {
    check_pointed(rows, dim)?;
    let start = || match resume {
        Some(c) => Start::Resume(c),
        None => Start::Fresh,
    };
    let rays = match run::<i64>(rows, dim, start(), progress)? {
        Some(r) => r,
        None => {
            info!("machine integers overflowed; restarting double description with big integers");
            run::<BigInt>(rows, dim, start(), progress)?.expect("big integers do not overflow")
        }
    };
    let mut out = rays
        .iter()
        .map(|r| exact::bigints_to_i64(r).ok_or(Error::Overflow))
        .collect::<Result<Vec<_>>>()?;
    out.sort();
    out.dedup();
    Ok(out)
}

fn initial_rays<T: ExactInt>(
    rows: &[Vec<T>],
    int_rows: &[Vec<i64>],
    dim: usize,
) -> Option<(Vec<usize>, Vec<RayRec<T>>)> {
    let mut space = RowSpace::new(dim);
    let mut basis = Vec::new();
    for (i, r) in int_rows.iter().enumerate() {
        if space.insert(r) {
            basis.push(i);
            if basis.len() == dim {
                break;
            }
        }
    }
    debug_assert_eq!(basis.len(), dim);
    let mut rays = Vec::with_capacity(dim);
    for (slot, &b) in basis.iter().enumerate() {
        let others: Vec<Vec<i64>> = basis
            .iter()
            .enumerate()
            .filter(|&(s, _)| s != slot)
            .map(|(_, &i)| int_rows[i].clone())
            .collect();
        let ns = linalg::null_space_i64(&others, dim);
        debug_assert_eq!(ns.len(), 1);
        let mut v: Vec<T> = exact::convert(&ns[0])?;
        if exact::dot(&rows[b], &v)?.is_negative() {
            v = v.iter().map(|x| x.neg()).collect::<Option<Vec<T>>>()?;
        }
        let zeros = BitSet::from_indices(rows.len(), basis.iter().copied().filter(|&i| i != b));
        rays.push(RayRec { v, zeros });
    }
    Some((basis, rays))
}

fn resumed_rays<T: ExactInt>(rows: &[Vec<T>], ck: &DdCheckpoint) -> Result<Option<Vec<RayRec<T>>>> {
    let mut out = Vec::with_capacity(ck.rays.len());
    for r in &ck.rays {
        let big = r
            .iter()
            .map(|s| {
                s.parse::<BigInt>()
                    .map_err(|_| Error::Parse(format!("bad checkpoint entry `{s}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        let Some(v) = exact::convert::<BigInt, T>(&big) else {
            return Ok(None);
        };
        let mut zeros = BitSet::new(rows.len());
        for &c in &ck.processed {
            let Some(val) = exact::dot(&rows[c], &v) else {
                return Ok(None);
            };
            if val.is_negative() {
                return Err(Error::Parse("checkpoint ray violates a processed constraint".into()));
            }
            if val.is_zero() {
                zeros.insert(c);
            }
        }
        out.push(RayRec { v, zeros });
    }
    Ok(Some(out))
}

/// `Ok(None)` signals overflow of `T`.
fn run<T: ExactInt>(
    int_rows: &[Vec<i64>],
    dim: usize,
    start: Start<'_>,
    progress: &mut dyn FnMut(&DdProgress<'_>),
) -> Result<Option<Vec<Vec<BigInt>>>> {
    let rows: Vec<Vec<T>> = int_rows
        .iter()
        .map(|r| r.iter().map(|&x| T::from_i64(x)).collect())
        .collect();
    let m = rows.len();
    let (mut processed, mut rays) = match start {
        Start::Fresh => match initial_rays(&rows, int_rows, dim) {
            Some(x) => x,
            None => return Ok(None),
        },
        Start::Resume(ck) => {
            if ck.processed.iter().any(|&c| c >= m) {
                return Err(Error::Parse("checkpoint refers to unknown constraints".into()));
            }
            match resumed_rays(&rows, ck)? {
                Some(r) => (ck.processed.clone(), r),
                None => return Ok(None),
            }
        }
    };
    let mut done = BitSet::from_indices(m, processed.iter().copied());
    let mut remaining: Vec<usize> = (0..m).filter(|&i| !done.contains(i)).collect();

    while !remaining.is_empty() {
        // constraint with the fewest violating rays
        let counts: Option<Vec<usize>> = remaining
            .par_iter()
            .map(|&c| {
                let mut k = 0;
                for r in &rays {
                    if exact::dot(&rows[c], &r.v)?.is_negative() {
                        k += 1;
                    }
                }
                Some(k)
            })
            .collect();
        let Some(counts) = counts else { return Ok(None) };
        let pick = (0..remaining.len()).min_by_key(|&i| (counts[i], remaining[i])).unwrap();
        let c = remaining.remove(pick);

        let vals: Option<Vec<T>> = rays.par_iter().map(|r| exact::dot(&rows[c], &r.v)).collect();
        let Some(vals) = vals else { return Ok(None) };
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();

        let mut fresh: Vec<RayRec<T>> = Vec::new();
        if !neg.is_empty() {
            // rays tight on each inserted constraint; a blocking ray must lie in
            // the list of every constraint of the common zero set
            let mut tight: Vec<Vec<u32>> = vec![Vec::new(); m];
            for (i, r) in rays.iter().enumerate() {
                for z in r.zeros.iter() {
                    tight[z].push(i as u32);
                }
            }
            let tight = &tight;
            let rays_ref = &rays;
            let vals_ref = &vals;
            let combined: Vec<Option<Vec<RayRec<T>>>> = pos
                .par_iter()
                .map(|&p| {
                    let mut local = Vec::new();
                    for &q in &neg {
                        if rays_ref[p].zeros.intersection_count(&rays_ref[q].zeros) + 2 < dim {
                            continue;
                        }
                        let common = rays_ref[p].zeros.intersection(&rays_ref[q].zeros);
                        let shortest = common.iter().min_by_key(|&z| tight[z].len());
                        let blocked = match shortest {
                            Some(z) => tight[z].iter().any(|&i| {
                                let i = i as usize;
                                i != p && i != q && common.is_subset(&rays_ref[i].zeros)
                            }),
                            None => rays.len() > 2,
                        };
                        if blocked {
                            continue;
                        }
                        // vals[p] > 0 > vals[q]; both weights are positive
                        let wp = vals_ref[q].neg()?;
                        let wq = vals_ref[p].clone();
                        let mut v = Vec::with_capacity(dim);
                        for (a, b) in rays_ref[p].v.iter().zip(&rays_ref[q].v) {
                            v.push(a.mul(&wp)?.add(&b.mul(&wq)?)?);
                        }
                        exact::make_primitive(&mut v);
                        let mut zeros = common;
                        zeros.insert(c);
                        local.push(RayRec { v, zeros });
                    }
                    Some(local)
                })
                .collect();
            for chunk in combined {
                match chunk {
                    Some(local) => fresh.extend(local),
                    None => return Ok(None),
                }
            }
        }

        let mut next = Vec::with_capacity(rays.len() - neg.len() + fresh.len());
        for (i, mut r) in rays.into_iter().enumerate() {
            if vals[i].is_negative() {
                continue;
            }
            if vals[i].is_zero() {
                r.zeros.insert(c);
            }
            next.push(r);
        }
        next.extend(fresh);
        rays = next;
        processed.push(c);
        done.insert(c);
        info!(
            "dd: inserted constraint {c} ({}/{m}), {} rays",
            processed.len(),
            rays.len()
        );
        let snapshot = || checkpoint_of(&processed, &rays);
        progress(&DdProgress {
            processed: processed.len(),
            total: m,
            rays: rays.len(),
            snapshot: &snapshot,
        });
    }
    Ok(Some(
        rays.into_iter()
            .map(|r| r.v.iter().map(ExactInt::to_bigint).collect())
            .collect(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rays(rows: &[Vec<i64>], dim: usize) -> Vec<Vec<i64>> {
        extreme_rays_of(rows, dim, None, &mut |_| {}).unwrap()
    }

    #[test]
    fn orthant() {
        let rows = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]];
        assert_eq!(rays(&rows, 3), vec![vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]]);
    }

    #[test]
    fn two_party_sa_cone() {
        let rows = vec![vec![1, 1, -1], vec![1, -1, 1], vec![-1, 1, 1]];
        assert_eq!(rays(&rows, 3), vec![vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]]);
    }

    #[test]
    fn square_pyramid() {
        // cone over a square: x +- y >= 0, x +- z >= 0 in coordinates (x, y, z)
        let rows = vec![vec![1, 1, 0], vec![1, -1, 0], vec![1, 0, 1], vec![1, 0, -1]];
        assert_eq!(
            rays(&rows, 3),
            vec![vec![1, -1, -1], vec![1, -1, 1], vec![1, 1, -1], vec![1, 1, 1]]
        );
    }

    #[test]
    fn non_pointed_cone_is_reported() {
        let rows = vec![vec![1, 0, 0], vec![0, 1, 0]];
        match extreme_rays_of(&rows, 3, None, &mut |_| {}) {
            Err(Error::NotPointed { lineality }) => assert_eq!(lineality, vec![vec!["0", "0", "1"]]),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            extreme_rays_of(&[], 3, None, &mut |_| {}),
            Err(Error::EmptyHrep)
        ));
    }

    #[test]
    fn resume_from_checkpoint() {
        let rows = vec![
            vec![1, 1, 0],
            vec![1, -1, 0],
            vec![1, 0, 1],
            vec![1, 0, -1],
            vec![2, -1, -1],
        ];
        let mut cks = Vec::new();
        let full = extreme_rays_of(&rows, 3, None, &mut |p| cks.push(p.checkpoint())).unwrap();
        assert!(!cks.is_empty());
        for ck in &cks {
            let again = extreme_rays_of(&rows, 3, Some(ck), &mut |_| {}).unwrap();
            assert_eq!(again, full);
        }
    }

    #[test]
    fn big_integer_fallback() {
        let big = 1i64 << 40;
        let rows = vec![vec![big, 1, 0], vec![0, big, 1], vec![1, 0, big], vec![1, 1, 1]];
        assert!(run::<i64>(&rows, 3, Start::Fresh, &mut |_| {}).unwrap().is_none());
        let rays = run::<BigInt>(&rows, 3, Start::Fresh, &mut |_| {}).unwrap().unwrap();
        assert!(!rays.is_empty());
        for r in &rays {
            for row in &rows {
                let s: BigInt = row.iter().zip(r).map(|(a, b)| BigInt::from(*a) * b).sum();
                assert!(!num_traits::Signed::is_negative(&s));
            }
        }
        // the public entry point reports rays that do not fit machine integers
        assert!(matches!(
            extreme_rays_of(&rows, 3, None, &mut |_| {}),
            Err(Error::Overflow)
        ));
    }
}
