//! Entropy vectors of stabilizer states from GF(2) check matrices.
//!
//! For a pure stabilizer state on `q` qubits with stabilizer group `G`, the
//! entropy of a qubit set `A` is `|A| - dim G_A`, where `G_A` is the subgroup
//! supported on `A`. `G_A` is the kernel of restricting the generators to the
//! complement of `A`, so `dim G_A = q - rank(G restricted to A^c)`.

use crate::bitset::BitSet;
use crate::entropy_space::{EntropyVector, PartyCount};
use crate::error::{Error, Result};
use crate::exact::rational_from_i64;

/// Generators of a stabilizer group as rows `(x_1..x_q | z_1..z_q)`, plus the
/// party owning each qubit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckMatrix {
    n: PartyCount,
    q: usize,
    rows: Vec<BitSet>,
    assignment: Vec<usize>,
}

fn gf2_rank(mut rows: Vec<BitSet>) -> usize {
    let mut rank = 0;
    let width = rows.first().map_or(0, BitSet::len);
    for col in 0..width {
        let Some(p) = (rank..rows.len()).find(|&i| rows[i].contains(col)) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && row.contains(col) {
                *row = xor(row, &pivot);
            }
        }
        rank += 1;
    }
    rank
}

fn xor(a: &BitSet, b: &BitSet) -> BitSet {
    let both = a.intersection(b);
    let mut out = a.union(b);
    for i in both.iter() {
        out.remove(i);
    }
    out
}

impl CheckMatrix {
    pub fn new(n: PartyCount, q: usize, rows: Vec<BitSet>, assignment: Vec<usize>) -> Result<Self> {
        let bad = |m: String| Err(Error::CheckMatrix(m));
        if q == 0 {
            return bad("no qubits".into());
        }
        if rows.len() != q {
            return bad(format!(
                "{} generators for {q} qubits; a pure state needs exactly {q}",
                rows.len()
            ));
        }
        if let Some(r) = rows.iter().find(|r| r.len() != 2 * q) {
            return bad(format!("row of length {} instead of {}", r.len(), 2 * q));
        }
        if assignment.len() != q {
            return bad(format!("{} party labels for {q} qubits", assignment.len()));
        }
        if let Some(&p) = assignment.iter().find(|&&p| p == 0 || p > n.purifier()) {
            return bad(format!("party {p} outside 1..={}", n.purifier()));
        }
        for a in 0..q {
            for b in a + 1..q {
                let mut s = 0;
                for k in 0..q {
                    s ^= (rows[a].contains(k) && rows[b].contains(q + k)) as u8;
                    s ^= (rows[a].contains(q + k) && rows[b].contains(k)) as u8;
                }
                if s == 1 {
                    return bad(format!("generators {a} and {b} anticommute"));
                }
            }
        }
        if gf2_rank(rows.clone()) != q {
            return bad("generators are dependent".into());
        }
        Ok(CheckMatrix { n, q, rows, assignment })
    }

    /// Builds rows from Pauli strings such as `"XZI"`.
    pub fn from_paulis(n: PartyCount, paulis: &[&str], assignment: Vec<usize>) -> Result<Self> {
        let q = assignment.len();
        let mut rows = Vec::with_capacity(paulis.len());
        for s in paulis {
            let chars: Vec<char> = s.chars().collect();
            if chars.len() != q {
                return Err(Error::CheckMatrix(format!("`{s}` does not act on {q} qubits")));
            }
            let mut row = BitSet::new(2 * q);
            for (k, c) in chars.iter().enumerate() {
                match c.to_ascii_uppercase() {
                    'I' => {}
                    'X' => row.insert(k),
                    'Z' => row.insert(q + k),
                    'Y' => {
                        row.insert(k);
                        row.insert(q + k);
                    }
                    other => return Err(Error::CheckMatrix(format!("unknown Pauli `{other}`"))),
                }
            }
            rows.push(row);
        }
        CheckMatrix::new(n, q, rows, assignment)
    }

    pub fn parties(&self) -> PartyCount {
        self.n
    }

    pub fn qubits(&self) -> usize {
        self.q
    }

    /// Parses `q m n`, then `m` rows of `2q` bits, then `q` party labels.
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty check matrix file".into()))?;
        let h: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad header `{header}`"))))
            .collect::<Result<_>>()?;
        let [q, m, n] = h[..] else {
            return Err(Error::Parse(format!("bad header `{header}`")));
        };
        let n = PartyCount::new(n)?;
        let mut rows = Vec::with_capacity(m);
        for _ in 0..m {
            let l = lines
                .next()
                .ok_or_else(|| Error::Parse("missing generator row".into()))?;
            let bits: Vec<char> = l.chars().filter(|c| !c.is_whitespace()).collect();
            if bits.len() != 2 * q {
                return Err(Error::Parse(format!("row `{l}` does not have {} bits", 2 * q)));
            }
            let mut row = BitSet::new(2 * q);
            for (i, c) in bits.iter().enumerate() {
                match c {
                    '0' => {}
                    '1' => row.insert(i),
                    _ => return Err(Error::Parse(format!("bad bit `{c}`"))),
                }
            }
            rows.push(row);
        }
        let l = lines
            .next()
            .ok_or_else(|| Error::Parse("missing party assignment".into()))?;
        let assignment = l
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad party `{t}`"))))
            .collect::<Result<Vec<usize>>>()?;
        CheckMatrix::new(n, q, rows, assignment)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {}\n", self.q, self.rows.len(), self.n);
        for r in &self.rows {
            let bits: String = (0..2 * self.q).map(|i| if r.contains(i) { '1' } else { '0' }).collect();
            out.push_str(&bits);
            out.push('\n');
        }
        let parties: Vec<String> = self.assignment.iter().map(ToString::to_string).collect();
        out.push_str(&parties.join(" "));
        out.push('\n');
        out
    }

    /// Entropy of the qubits owned by the parties in `mask`.
    fn entropy_of_mask(&self, mask: u32) -> i64 {
        let inside: Vec<bool> = self.assignment.iter().map(|&p| mask >> (p - 1) & 1 == 1).collect();
        let outside_cols: Vec<usize> = (0..self.q).filter(|&k| !inside[k]).collect();
        let width = 2 * outside_cols.len();
        let restricted: Vec<BitSet> = self
            .rows
            .iter()
            .map(|r| {
                let mut out = BitSet::new(width.max(1));
                for (i, &k) in outside_cols.iter().enumerate() {
                    if r.contains(k) {
                        out.insert(i);
                    }
                    if r.contains(self.q + k) {
                        out.insert(outside_cols.len() + i);
                    }
                }
                out
            })
            .collect();
        let rank = if width == 0 { 0 } else { gf2_rank(restricted) };
        let local_dim = self.q - rank;
        inside.iter().filter(|&&b| b).count() as i64 - local_dim as i64
    }
}

/// Entropy vector (in bits) of the stabilizer state described by `cm`.
pub fn stabilizer_entropy_vector(cm: &CheckMatrix, n: PartyCount) -> Result<EntropyVector> {
    if cm.n != n {
        return Err(Error::CheckMatrix(format!("matrix is for {} parties, not {n}", cm.n)));
    }
    Ok(EntropyVector::from_fn(n, |j| {
        rational_from_i64(cm.entropy_of_mask(j.bits()))
    }))
}

/// Entropy of an extended subsystem, used for purity checks.
pub fn stabilizer_extended_entropy(cm: &CheckMatrix, bits: u32) -> i64 {
    cm.entropy_of_mask(bits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::generators::{bell_vector, ghz_vector};

    fn n(k: usize) -> PartyCount {
        PartyCount::new(k).unwrap()
    }

    #[test]
    fn bell_check_matrix() {
        let cm = CheckMatrix::from_paulis(n(2), &["XX", "ZZ"], vec![1, 2]).unwrap();
        let v = stabilizer_entropy_vector(&cm, n(2)).unwrap();
        assert_eq!(v.to_i64().unwrap(), vec![1, 1, 0]);
        assert_eq!(v, bell_vector(n(2), 1, 2).unwrap());
    }

    #[test]
    fn ghz_check_matrix() {
        let cm = CheckMatrix::from_paulis(n(2), &["XXX", "ZZI", "IZZ"], vec![1, 2, 3]).unwrap();
        let v = stabilizer_entropy_vector(&cm, n(2)).unwrap();
        assert_eq!(v.to_i64().unwrap(), vec![1, 1, 1]);
        assert_eq!(v, ghz_vector(n(2), "123".parse().unwrap()).unwrap());
    }

    #[test]
    fn product_state() {
        let cm = CheckMatrix::from_paulis(n(1), &["Z"], vec![1]).unwrap();
        assert_eq!(stabilizer_entropy_vector(&cm, n(1)).unwrap().to_i64().unwrap(), vec![0]);
    }

    #[test]
    fn invalid_matrices() {
        assert!(CheckMatrix::from_paulis(n(2), &["XI", "ZI"], vec![1, 2]).is_err()); // anticommute
        assert!(CheckMatrix::from_paulis(n(2), &["XX", "XX"], vec![1, 2]).is_err()); // dependent
        assert!(CheckMatrix::from_paulis(n(2), &["XX"], vec![1, 2]).is_err()); // mixed
        assert!(CheckMatrix::from_paulis(n(2), &["XX", "ZZ"], vec![1, 4]).is_err());
        let cm = CheckMatrix::from_paulis(n(2), &["XX", "ZZ"], vec![1, 2]).unwrap();
        assert!(stabilizer_entropy_vector(&cm, n(3)).is_err());
    }

    #[test]
    fn text_format() {
        let text = "3 3 2\n111000\n000110\n000011\n1 2 3\n";
        let cm = CheckMatrix::parse_text(text).unwrap();
        assert_eq!(cm.to_text(), text);
        assert_eq!(
            stabilizer_entropy_vector(&cm, n(2)).unwrap().to_i64().unwrap(),
            vec![1, 1, 1]
        );
        assert!(CheckMatrix::parse_text("2 2 2\n1100\n0011\n").is_err());
        assert!(CheckMatrix::parse_text("2 2 2\n1100\n0021\n1 2\n").is_err());
    }

    #[test]
    fn several_qubits_per_party() {
        // two Bell pairs shared between parties 1 and 2: S1 = S2 = 2
        let cm = CheckMatrix::from_paulis(n(2), &["XXII", "ZZII", "IIXX", "IIZZ"], vec![1, 2, 1, 2]).unwrap();
        assert_eq!(
            stabilizer_entropy_vector(&cm, n(2)).unwrap().to_i64().unwrap(),
            vec![2, 2, 0]
        );
    }
}
