use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::exact;

use super::Cone;

/// Face of a cone: the constraints tight on it and the extreme rays spanning it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub tight: BitSet,
    pub generators: Vec<usize>,
}

impl Face {
    /// Sum of the generators; a point of the relative interior.
    pub fn barycenter(&self, cone: &Cone) -> Result<Vec<i64>> {
        let rays = cone.rays()?;
        let mut sum = vec![0i64; cone.dim()];
        for &g in &self.generators {
            for (s, x) in sum.iter_mut().zip(rays[g].point()) {
                *s = s.checked_add(*x).ok_or(Error::Overflow)?;
            }
        }
        Ok(sum)
    }
}

/// Smallest face containing the selected rays (indices into `cone.rays()`).
pub fn minimal_face_containing(cone: &Cone, selection: &[usize]) -> Result<Face> {
    if selection.is_empty() {
        return Err(Error::EmptySelection);
    }
    let rays = cone.rays()?;
    let mut sum = vec![0i128; cone.dim()];
    for &s in selection {
        for (acc, &x) in sum.iter_mut().zip(rays[s].point()) {
            *acc += x as i128;
        }
    }
    let rows = cone.int_rows();
    let tight = BitSet::from_indices(
        rows.len(),
        (0..rows.len()).filter(|&i| rows[i].iter().zip(&sum).map(|(&a, &b)| a as i128 * b).sum::<i128>() == 0),
    );
    let generators = (0..rays.len())
        .filter(|&r| tight.iter().all(|c| exact::dot_i64(&rows[c], rays[r].point()) == 0))
        .collect();
    Ok(Face { tight, generators })
}
