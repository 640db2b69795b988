//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Stirling numbers of the second kind from the triangle recurrence.
pub fn stirling2(n: u64, k: u64) -> u64 {
    let mut row = vec![1u64];
    for i in 1..=n {
        let mut next = vec![0u64; (i + 1) as usize];
        for j in 1..=i as usize {
            let carried = if j < row.len() { j as u64 * row[j] } else { 0 };
            next[j] = carried + row[j - 1];
        }
        row = next;
    }
    row.get(k as usize).copied().unwrap_or(0)
}

fn to_rational(rows: &[Vec<i64>]) -> Vec<Vec<BigRational>> {
    rows.iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
        .collect()
}

/// Row-reduces in place and returns the pivot columns.
fn eliminate(m: &mut [Vec<BigRational>]) -> Vec<usize> {
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let t = &f * &m[r][j];
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &[Vec<i64>]) -> usize {
    eliminate(&mut to_rational(rows)).len()
}

/// One primitive integer vector spanning the kernel, if it is one-dimensional.
pub fn kernel_line(rows: &[Vec<i64>], dim: usize) -> Option<Vec<i64>> {
    let mut m = to_rational(rows);
    let pivots = eliminate(&mut m);
    if pivots.len() + 1 != dim {
        return None;
    }
    let free = (0..dim).find(|c| !pivots.contains(c)).unwrap();
    let mut v = vec![BigRational::zero(); dim];
    v[free] = BigRational::one();
    for (r, &p) in pivots.iter().enumerate() {
        v[p] = -m[r][free].clone();
    }
    Some(primitive(&v))
}

pub fn primitive(v: &[BigRational]) -> Vec<i64> {
    use num_integer::Integer;
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v
        .iter()
        .map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    ints.iter().map(|x| i64::try_from(x / &g).unwrap()).collect()
}

pub fn dot(a: &[i64], b: &[i64]) -> i128 {
    a.iter().zip(b).map(|(&x, &y)| x as i128 * y as i128).sum()
}

/// Extreme rays by exhaustion: every (d-1)-subset of rows with a
/// one-dimensional kernel yields a candidate line; a direction on it is an
/// extreme ray iff it satisfies every row.
pub fn brute_force_rays(rows: &[Vec<i64>], dim: usize) -> BTreeSet<Vec<i64>> {
    let mut out = BTreeSet::new();
    let mut idx: Vec<usize> = (0..dim - 1).collect();
    let m = rows.len();
    if m < dim - 1 {
        return out;
    }
    loop {
        let sub: Vec<Vec<i64>> = idx.iter().map(|&i| rows[i].clone()).collect();
        if let Some(v) = kernel_line(&sub, dim) {
            for cand in [v.clone(), v.iter().map(|x| -x).collect()] {
                if rows.iter().all(|r| dot(r, &cand) >= 0) {
                    out.insert(cand);
                }
            }
        }
        if !next_combination(&mut idx, m) {
            return out;
        }
    }
}

fn next_combination(idx: &mut [usize], m: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] != i + m - k {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Span closure of a set of rows: every row lying in their span.
pub fn span_closure(all: &[Vec<i64>], members: &BTreeSet<usize>) -> BTreeSet<usize> {
    let base: Vec<Vec<i64>> = members.iter().map(|&i| all[i].clone()).collect();
    let r = rank(&base);
    (0..all.len())
        .filter(|&i| {
            let mut ext = base.clone();
            ext.push(all[i].clone());
            rank(&ext) == r
        })
        .collect()
}

pub fn is_negative(x: &BigRational) -> bool {
    x.is_negative()
}
