//! Exact feasibility of homogeneous systems with strict inequalities.
//!
//! Find `x` with `<e, x> = 0`, `<a, x> >= 0` and `<b, x> > 0`. Because the
//! system is homogeneous, strictness can be replaced by `<b, x> >= 1`. The
//! equalities are eliminated by parametrizing their null space, and the rest is
//! a phase-one simplex over an integer-preserving tableau (every entry is a
//! minor of the input, the current basis determinant is the common denominator)
//! with Bland's rule.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::entropy_space::{EntropyVector, LinearFunctional, PartyCount};
use crate::error::{Error, Result};
use crate::exact::{self, ExactInt};
use crate::linalg;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Feasible(EntropyVector),
    Infeasible,
}

impl LpOutcome {
    pub fn witness(&self) -> Option<&EntropyVector> {
        match self {
            LpOutcome::Feasible(v) => Some(v),
            LpOutcome::Infeasible => None,
        }
    }

    pub fn is_feasible(&self) -> bool {
        matches!(self, LpOutcome::Feasible(_))
    }
}

fn integer_row(f: &LinearFunctional) -> Vec<BigInt> {
    f.primitive_integers()
}

/// Decides whether some point satisfies `eqs = 0`, `nonstrict >= 0` and
/// `strict > 0`, returning an exact witness.
pub fn lp_feasible(
    eqs: &[LinearFunctional],
    nonstrict: &[LinearFunctional],
    strict: &[LinearFunctional],
) -> Result<LpOutcome> {
    let dim = eqs
        .iter()
        .chain(nonstrict)
        .chain(strict)
        .map(LinearFunctional::dim)
        .next()
        .ok_or(Error::Dimension { expected: 1, found: 0 })?;
    for f in eqs.iter().chain(nonstrict).chain(strict) {
        if f.dim() != dim {
            return Err(Error::Dimension {
                expected: dim,
                found: f.dim(),
            });
        }
    }
    let n = PartyCount::from_dim(dim)?;
    let eq_rows: Vec<Vec<BigInt>> = eqs.iter().map(integer_row).collect();
    let ge_rows: Vec<Vec<BigInt>> = nonstrict.iter().map(integer_row).collect();
    let gt_rows: Vec<Vec<BigInt>> = strict.iter().map(integer_row).collect();
    let x = feasible_point(&eq_rows, &ge_rows, &gt_rows, dim);
    let Some(x) = x else {
        return Ok(LpOutcome::Infeasible);
    };
    // re-check the witness against the original functionals
    let v = EntropyVector::from_bigints(n, &x)?;
    for f in eqs {
        assert!(
            crate::entropy_space::eval_functional(f, &v)?.is_zero(),
            "witness violates an equality"
        );
    }
    for f in nonstrict {
        assert!(
            crate::entropy_space::eval_functional(f, &v)? >= BigRational::zero(),
            "witness violates an inequality"
        );
    }
    for f in strict {
        assert!(
            crate::entropy_space::eval_functional(f, &v)? > BigRational::zero(),
            "witness violates a strict inequality"
        );
    }
    Ok(LpOutcome::Feasible(v))
}

fn big_dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Integer point satisfying the system, or `None` if infeasible.
pub(crate) fn feasible_point(
    eqs: &[Vec<BigInt>],
    nonstrict: &[Vec<BigInt>],
    strict: &[Vec<BigInt>],
    dim: usize,
) -> Option<Vec<BigInt>> {
    if strict.is_empty() {
        return Some(vec![<BigInt as Zero>::zero(); dim]);
    }
    let eq_rat: Vec<Vec<BigRational>> = eqs
        .iter()
        .map(|r| r.iter().cloned().map(BigRational::from_integer).collect())
        .collect();
    let basis = linalg::null_space(&eq_rat, dim);
    if basis.is_empty() {
        return None;
    }
    // constraints on the coordinates y of x = Σ y_j basis_j
    let project = |row: &Vec<BigInt>| -> Vec<BigInt> { basis.iter().map(|b| big_dot(row, b)).collect() };
    let mut ge: Vec<Vec<BigInt>> = nonstrict
        .iter()
        .map(project)
        .filter(|r| r.iter().any(|x| !Zero::is_zero(x)))
        .collect();
    let mut gt: Vec<Vec<BigInt>> = Vec::with_capacity(strict.len());
    for r in strict {
        let p = project(r);
        if p.iter().all(Zero::is_zero) {
            return None;
        }
        gt.push(p);
    }
    ge.sort();
    ge.dedup();
    gt.sort();
    gt.dedup();
    let y = match phase_one::<i128>(&ge, &gt, basis.len()) {
        Some(y) => y,
        None => phase_one::<BigInt>(&ge, &gt, basis.len()).expect("big integers do not overflow"),
    }?;
    let mut x = vec![<BigInt as Zero>::zero(); dim];
    for (coef, b) in y.iter().zip(&basis) {
        if Zero::is_zero(coef) {
            continue;
        }
        for (xi, bi) in x.iter_mut().zip(b) {
            *xi += coef * bi;
        }
    }
    exact::make_primitive(&mut x);
    Some(x)
}

/// Phase-one simplex for `ge · y >= 0`, `gt · y >= 1` with free `y`.
///
/// Outer `None`: overflow of `T`. Inner `None`: infeasible.
fn phase_one<T: ExactInt>(ge: &[Vec<BigInt>], gt: &[Vec<BigInt>], k: usize) -> Option<Option<Vec<BigInt>>> {
    // columns: y+ (k), y- (k), slacks (m), artificials (gt.len()), rhs
    let m = ge.len() + gt.len();
    let n_art = gt.len();
    let cols = 2 * k + m + n_art;
    let rhs = cols;
    let width = cols + 1;
    let mut t: Vec<Vec<T>> = Vec::with_capacity(m + 1);
    let mut basic: Vec<usize> = Vec::with_capacity(m);

    // ge rows, negated so the slack is basic: -G y+ + G y- + s = 0
    for (i, r) in ge.iter().enumerate() {
        let mut row = vec![T::zero(); width];
        for j in 0..k {
            let g = T::from_bigint(&r[j])?;
            row[j] = g.neg()?;
            row[k + j] = g;
        }
        row[2 * k + i] = T::from_i64(1);
        t.push(row);
        basic.push(2 * k + i);
    }
    // gt rows: G y+ - G y- - s + a = 1
    for (i, r) in gt.iter().enumerate() {
        let mut row = vec![T::zero(); width];
        for j in 0..k {
            let g = T::from_bigint(&r[j])?;
            row[k + j] = g.neg()?;
            row[j] = g;
        }
        row[2 * k + ge.len() + i] = T::from_i64(-1);
        row[2 * k + m + i] = T::from_i64(1);
        row[rhs] = T::from_i64(1);
        t.push(row);
        basic.push(2 * k + m + i);
    }
    // reduced costs of min Σ a: minus the sum of the artificial rows
    let mut obj = vec![T::zero(); width];
    for row in &t[ge.len()..] {
        for j in 0..width {
            if (2 * k + m..2 * k + m + n_art).contains(&j) {
                continue;
            }
            obj[j] = obj[j].sub(&row[j])?;
        }
    }
    t.push(obj);
    let mut det = T::from_i64(1);

    while let Some(enter) = (0..cols).find(|&j| t[m][j].is_negative()) {
        // ratio test, ties to the smallest basic variable
        let mut leave: Option<usize> = None;
        for i in 0..m {
            if !t[i][enter].is_positive() {
                continue;
            }
            leave = match leave {
                None => Some(i),
                Some(l) => {
                    let lhs = t[i][rhs].mul(&t[l][enter])?;
                    let rhs_v = t[l][rhs].mul(&t[i][enter])?;
                    if lhs < rhs_v || (lhs == rhs_v && basic[i] < basic[l]) {
                        Some(i)
                    } else {
                        Some(l)
                    }
                }
            };
        }
        // phase one is bounded below by zero
        let r = leave.expect("phase-one objective is bounded");
        let p = t[r][enter].clone();
        for i in 0..=m {
            if i == r || t[i][enter].is_zero() {
                if i != r {
                    for j in 0..width {
                        if !t[i][j].is_zero() {
                            t[i][j] = t[i][j].mul(&p)?.div_exact(&det);
                        }
                    }
                }
                continue;
            }
            let f = t[i][enter].clone();
            for j in 0..width {
                let v = t[i][j].mul(&p)?.sub(&f.mul(&t[r][j])?)?;
                t[i][j] = v.div_exact(&det);
            }
        }
        det = p;
        basic[r] = enter;
    }

    if !t[m][rhs].is_zero() {
        return Some(None);
    }
    let mut y = vec![<BigInt as Zero>::zero(); k];
    for (i, &b) in basic.iter().enumerate() {
        if b < k {
            y[b] += t[i][rhs].to_bigint();
        } else if b < 2 * k {
            y[b - k] -= t[i][rhs].to_bigint();
        }
    }
    Some(Some(y))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(c: &[i64]) -> LinearFunctional {
        LinearFunctional::from_integers(c)
    }

    fn sa2() -> Vec<LinearFunctional> {
        vec![f(&[1, 1, -1]), f(&[1, -1, 1]), f(&[-1, 1, 1])]
    }

    #[test]
    fn bell_pattern_witness() {
        let out = lp_feasible(&[f(&[1, -1, 1]), f(&[-1, 1, 1])], &sa2(), &[f(&[1, 1, -1])]).unwrap();
        let w = out.witness().unwrap();
        assert_eq!(w.to_i64().unwrap(), vec![1, 1, 0]);
    }

    #[test]
    fn contradictory_strict_pair() {
        let g = f(&[1, 2, -1]);
        assert_eq!(
            lp_feasible(&[], &[], &[g.clone(), g.negated()]).unwrap(),
            LpOutcome::Infeasible
        );
    }

    #[test]
    fn equalities_force_origin() {
        let eqs = vec![f(&[1, 0, 0]), f(&[0, 1, 0]), f(&[1, 1, 1])];
        assert_eq!(lp_feasible(&eqs, &[], &[f(&[1, 0, 0])]).unwrap(), LpOutcome::Infeasible);
        let zero = lp_feasible(&eqs, &sa2(), &[]).unwrap();
        assert!(zero.witness().unwrap().is_zero());
    }

    #[test]
    fn strictness_inside_sa_cone() {
        // interior of the two-party SA cone
        let out = lp_feasible(&[], &[], &sa2()).unwrap();
        let w = out.witness().unwrap();
        for g in sa2() {
            assert!(crate::entropy_space::eval_functional(&g, w).unwrap() > BigRational::zero());
        }
        // all three instances vanishing forces the origin
        assert!(!lp_feasible(&sa2(), &[], &[f(&[1, 0, 0])]).unwrap().is_feasible());
    }

    #[test]
    fn needs_negative_coordinates() {
        // x1 - x2 > 0 and -x1 > 0 with nothing else: feasible at (-1, -2, 0)
        let out = lp_feasible(&[], &[], &[f(&[1, -1, 0]), f(&[-1, 0, 0])]).unwrap();
        let w = out.witness().unwrap().to_i64().unwrap();
        assert!(w[0] - w[1] > 0 && -w[0] > 0);
    }

    #[test]
    fn dimension_checks() {
        assert!(lp_feasible(&[], &[], &[]).is_err());
        assert!(lp_feasible(&[f(&[1, 0, 0])], &[], &[f(&[1])]).is_err());
    }
}
