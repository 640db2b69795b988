//! Exact linear algebra over the integers and rationals.
//!
//! Row reduction here is fraction-free: a row is eliminated against a pivot
//! row by cross-multiplication and then divided by the gcd of its entries, so
//! integer inputs stay integral and small.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::exact::{self, ExactInt};

/// Echelon basis of a row space over `T`.
#[derive(Clone, Debug)]
pub struct Echelon<T> {
    dim: usize,
    rows: Vec<(usize, Vec<T>)>,
}

impl<T: ExactInt> Echelon<T> {
    pub fn new(dim: usize) -> Self {
        Echelon { dim, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the basis. The result is zero iff `v` lies in the span.
    pub fn reduce(&self, v: &[T]) -> Option<Vec<T>> {
        debug_assert_eq!(v.len(), self.dim);
        let mut v = v.to_vec();
        for (p, row) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let a = row[*p].clone();
            let b = v[*p].clone();
            for j in 0..self.dim {
                v[j] = v[j].mul(&a)?.sub(&row[j].mul(&b)?)?;
            }
            exact::make_primitive(&mut v);
        }
        Some(v)
    }

    pub fn contains(&self, v: &[T]) -> Option<bool> {
        Some(self.reduce(v)?.iter().all(ExactInt::is_zero))
    }

    /// Adds `v`; returns whether it was independent of the existing rows.
    pub fn insert(&mut self, v: &[T]) -> Option<bool> {
        let mut r = self.reduce(v)?;
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return Some(false);
        };
        if r[p].is_negative() {
            for x in r.iter_mut() {
                *x = x.neg()?;
            }
        }
        self.rows.push((p, r));
        Some(true)
    }
}

/// Row space of integer vectors, falling back to big integers on overflow.
#[derive(Clone, Debug)]
pub enum RowSpace {
    Machine(Echelon<i128>, Vec<Vec<i64>>),
    Big(Echelon<BigInt>),
}

impl RowSpace {
    pub fn new(dim: usize) -> Self {
        RowSpace::Machine(Echelon::new(dim), Vec::new())
    }

    fn promote(&mut self) {
        if let RowSpace::Machine(e, src) = self {
            let mut big = Echelon::<BigInt>::new(e.dim);
            for r in src.iter() {
                let r: Vec<BigInt> = r.iter().map(|&x| BigInt::from(x)).collect();
                big.insert(&r).expect("big integers do not overflow");
            }
            *self = RowSpace::Big(big);
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            RowSpace::Machine(e, _) => e.rank(),
            RowSpace::Big(e) => e.rank(),
        }
    }

    pub fn insert(&mut self, v: &[i64]) -> bool {
        if let RowSpace::Machine(e, src) = self {
            let w: Vec<i128> = v.iter().map(|&x| x as i128).collect();
            // a failed insert leaves `e` untouched
            if let Some(added) = e.insert(&w) {
                src.push(v.to_vec());
                return added;
            }
            self.promote();
        }
        let RowSpace::Big(b) = self else { unreachable!() };
        let w: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
        b.insert(&w).expect("big integers do not overflow")
    }

    pub fn contains(&mut self, v: &[i64]) -> bool {
        if let RowSpace::Machine(e, _) = self {
            let w: Vec<i128> = v.iter().map(|&x| x as i128).collect();
            if let Some(c) = e.contains(&w) {
                return c;
            }
            self.promote();
        }
        let RowSpace::Big(b) = self else { unreachable!() };
        let w: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
        b.contains(&w).expect("big integers do not overflow")
    }
}

/// Rank of a set of integer rows of length `dim`.
pub fn rank_i64<'a>(dim: usize, rows: impl IntoIterator<Item = &'a [i64]>) -> usize {
    let mut space = RowSpace::new(dim);
    for r in rows {
        space.insert(r);
        if space.rank() == dim {
            break;
        }
    }
    space.rank()
}

/// Reduced row echelon form over the rationals. Returns the nonzero rows and
/// their pivot columns.
pub fn rref(mut rows: Vec<Vec<BigRational>>, dim: usize) -> (Vec<Vec<BigRational>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..dim {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x -= &f * p;
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    (rows, pivots)
}

/// Basis of `{x : row · x = 0 for every row}` as primitive integer vectors.
pub fn null_space(rows: &[Vec<BigRational>], dim: usize) -> Vec<Vec<BigInt>> {
    let (red, pivots) = rref(rows.to_vec(), dim);
    let mut basis = Vec::new();
    for free in (0..dim).filter(|c| !pivots.contains(c)) {
        let mut v = vec![BigRational::zero(); dim];
        v[free] = BigRational::one();
        for (row, &p) in red.iter().zip(&pivots) {
            v[p] = -row[free].clone();
        }
        basis.push(exact::rational_to_primitive(&v));
    }
    basis
}

pub fn null_space_i64(rows: &[Vec<i64>], dim: usize) -> Vec<Vec<BigInt>> {
    let rows: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| exact::rational_from_i64(x)).collect())
        .collect();
    null_space(&rows, dim)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_mutual_information_normals() {
        let rows: [&[i64]; 3] = [&[1, 1, -1], &[1, -1, 1], &[-1, 1, 1]];
        assert_eq!(rank_i64(3, rows), 3);
        assert_eq!(rank_i64(3, rows[1..].iter().copied()), 2);
        let mut sp = RowSpace::new(3);
        sp.insert(rows[1]);
        sp.insert(rows[2]);
        assert!(!sp.contains(rows[0]));
        assert!(sp.contains(&[0, 0, 2]));
    }

    #[test]
    fn null_space_is_orthogonal() {
        let rows = vec![vec![1i64, 1, -1, 0], vec![0, 1, 1, 1]];
        let ns = null_space_i64(&rows, 4);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for r in &rows {
                let s: BigInt = r.iter().zip(v).map(|(a, b)| BigInt::from(*a) * b).sum();
                assert!(Zero::is_zero(&s));
            }
        }
    }

    #[test]
    fn overflow_promotes_to_big_integers() {
        let big = i64::MAX / 2;
        let mut sp = RowSpace::new(2);
        sp.insert(&[big, big - 1]);
        sp.insert(&[big - 3, big]);
        assert_eq!(sp.rank(), 2);
        assert!(sp.contains(&[1, 0]));
    }
}
