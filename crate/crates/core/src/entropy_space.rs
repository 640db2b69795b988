//! Party indexing and exact entropy vectors.
//!
//! Parties are numbered `1..=n`; party `n + 1` is the purifier. A subsystem is
//! a bit mask with party `p` stored at bit `p - 1`, and a purifier-free
//! subsystem `J` occupies coordinate `J - 1` of an entropy vector. Entropies of
//! the empty set and of the full purified system are zero and never stored.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact;

pub const MAX_PARTIES: usize = 8;

/// Number of fundamental parties, excluding the purifier.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartyCount(u8);

impl PartyCount {
    pub fn new(n: usize) -> Result<Self> {
        if (1..=MAX_PARTIES).contains(&n) {
            Ok(PartyCount(n as u8))
        } else {
            Err(Error::PartyCount(n))
        }
    }

    /// Recovers `n` from an entropy-space dimension `2^n - 1`.
    pub fn from_dim(dim: usize) -> Result<Self> {
        let n = (dim + 1).trailing_zeros() as usize;
        if dim == 0 || (1usize << n) != dim + 1 {
            return Err(Error::Dimension {
                expected: (1 << n) - 1,
                found: dim,
            });
        }
        PartyCount::new(n)
    }

    pub fn get(self) -> usize {
        self.0 as usize
    }

    /// Entropy-space dimension `2^n - 1`.
    pub fn dim(self) -> usize {
        (1 << self.0) - 1
    }

    pub fn purifier(self) -> usize {
        self.get() + 1
    }

    /// Mask of `[n]`.
    pub fn base_mask(self) -> u32 {
        (1 << self.0) - 1
    }

    /// Mask of `[n + 1]`.
    pub fn full_mask(self) -> u32 {
        (1 << (self.0 + 1)) - 1
    }
}

impl fmt::Display for PartyCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Nonempty set of parties, possibly including the purifier.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsystemIndex(u32);

impl SubsystemIndex {
    pub fn from_bits(bits: u32) -> Result<Self> {
        if bits == 0 {
            return Err(Error::InvalidIndex("empty subsystem".into()));
        }
        Ok(SubsystemIndex(bits))
    }

    pub fn from_parties(parties: &[usize]) -> Result<Self> {
        let mut bits = 0u32;
        for &p in parties {
            if p == 0 || p > MAX_PARTIES + 1 {
                return Err(Error::InvalidIndex(format!("party {p}")));
            }
            bits |= 1 << (p - 1);
        }
        SubsystemIndex::from_bits(bits)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, party: usize) -> bool {
        party >= 1 && self.0 >> (party - 1) & 1 == 1
    }

    pub fn parties(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (1..=32).filter(move |p| bits >> (p - 1) & 1 == 1)
    }

    /// Coordinate of a purifier-free index in an entropy vector.
    pub fn position(self) -> usize {
        self.0 as usize - 1
    }

    pub fn fits(self, n: PartyCount, extended: bool) -> bool {
        let mask = if extended { n.full_mask() } else { n.base_mask() };
        self.0 & !mask == 0
    }
}

impl fmt::Display for SubsystemIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in self.parties() {
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl FromStr for SubsystemIndex {
    type Err = Error;

    /// Parses party digits such as `"13"`.
    fn from_str(s: &str) -> Result<Self> {
        let parties = s
            .chars()
            .map(|c| {
                c.to_digit(10)
                    .map(|d| d as usize)
                    .ok_or_else(|| Error::InvalidIndex(s.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        SubsystemIndex::from_parties(&parties)
    }
}

/// All nonempty subsets of `[n]` (or `[n + 1]`), ascending by bit value.
pub fn enumerate_subsystems(n: PartyCount, extended: bool) -> Vec<SubsystemIndex> {
    let mask = if extended { n.full_mask() } else { n.base_mask() };
    (1..=mask).map(SubsystemIndex).collect()
}

/// Replaces an index containing the purifier by its complement.
pub fn reduce_index(j: SubsystemIndex, n: PartyCount) -> Result<SubsystemIndex> {
    if !j.fits(n, true) {
        return Err(Error::InvalidIndex(format!("{j} exceeds {} parties", n.purifier())));
    }
    if j.0 == n.full_mask() {
        return Err(Error::FullSystem);
    }
    if j.contains(n.purifier()) {
        Ok(SubsystemIndex(n.full_mask() & !j.0))
    } else {
        Ok(j)
    }
}

/// Coordinate of an extended index after purifier reduction, or `None` for the
/// full system.
pub(crate) fn reduced_position(bits: u32, n: PartyCount) -> Option<usize> {
    let full = n.full_mask();
    debug_assert!(bits != 0 && bits & !full == 0);
    if bits == full {
        None
    } else if bits >> n.get() & 1 == 1 {
        Some((full & !bits) as usize - 1)
    } else {
        Some(bits as usize - 1)
    }
}

/// Accumulates integer coefficients on extended indices into a reduced normal.
pub(crate) struct NormalBuilder {
    n: PartyCount,
    coeffs: Vec<i64>,
}

impl NormalBuilder {
    pub fn new(n: PartyCount) -> Self {
        NormalBuilder {
            n,
            coeffs: vec![0; n.dim()],
        }
    }

    pub fn add(&mut self, bits: u32, c: i64) -> &mut Self {
        if let Some(p) = reduced_position(bits, self.n) {
            self.coeffs[p] += c;
        }
        self
    }

    pub fn finish(self) -> Vec<i64> {
        self.coeffs
    }
}

/// Point of entropy space.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EntropyVector {
    n: PartyCount,
    coords: Vec<BigRational>,
}

impl EntropyVector {
    pub fn new(n: PartyCount, coords: Vec<BigRational>) -> Result<Self> {
        if coords.len() != n.dim() {
            return Err(Error::Dimension {
                expected: n.dim(),
                found: coords.len(),
            });
        }
        Ok(EntropyVector { n, coords })
    }

    pub fn zero(n: PartyCount) -> Self {
        EntropyVector {
            n,
            coords: vec![BigRational::zero(); n.dim()],
        }
    }

    pub fn from_integers(n: PartyCount, coords: &[i64]) -> Result<Self> {
        EntropyVector::new(n, coords.iter().map(|&x| exact::rational_from_i64(x)).collect())
    }

    pub fn from_bigints(n: PartyCount, coords: &[BigInt]) -> Result<Self> {
        EntropyVector::new(n, coords.iter().cloned().map(BigRational::from_integer).collect())
    }

    /// Builds a vector from a function on extended indices; only purifier-free
    /// indices are queried.
    pub fn from_fn(n: PartyCount, mut f: impl FnMut(SubsystemIndex) -> BigRational) -> Self {
        let coords = enumerate_subsystems(n, false).into_iter().map(&mut f).collect();
        EntropyVector { n, coords }
    }

    pub fn parties(&self) -> PartyCount {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn get(&self, j: SubsystemIndex) -> &BigRational {
        &self.coords[j.position()]
    }

    /// Entropy of an extended index, using `S_J = S_{J^c}` and `S_[n+1] = 0`.
    pub fn extended(&self, j: SubsystemIndex) -> BigRational {
        match reduced_position(j.bits(), self.n) {
            Some(p) => self.coords[p].clone(),
            None => BigRational::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// Integer coordinates after clearing denominators, scaled to be primitive.
    pub fn primitive_integers(&self) -> Vec<BigInt> {
        exact::rational_to_primitive(&self.coords)
    }

    /// Coordinates as `i64` if every entry is an integer in range.
    pub fn to_i64(&self) -> Option<Vec<i64>> {
        self.coords
            .iter()
            .map(|c| {
                if c.is_integer() {
                    num_traits::ToPrimitive::to_i64(c.numer())
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn add(&self, other: &EntropyVector) -> Result<EntropyVector> {
        if self.n != other.n {
            return Err(Error::Dimension {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(EntropyVector {
            n: self.n,
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn scale(&self, k: &BigRational) -> EntropyVector {
        EntropyVector {
            n: self.n,
            coords: self.coords.iter().map(|a| a * k).collect(),
        }
    }

    /// Relabels parties (purifier included): `perm[p - 1]` is the image of party `p`.
    /// The result satisfies `S'_{π(J)} = S_J`.
    pub fn permute(&self, perm: &Permutation) -> Result<EntropyVector> {
        if perm.len() != self.n.purifier() {
            return Err(Error::Dimension {
                expected: self.n.purifier(),
                found: perm.len(),
            });
        }
        let inv = perm.inverse();
        Ok(EntropyVector::from_fn(self.n, |j| self.extended(inv.apply(j))))
    }

    pub fn has_negative(&self) -> bool {
        self.coords.iter().any(Signed::is_negative)
    }

    /// Names of the coordinates, e.g. `S_1, S_2, S_12`.
    pub fn header(n: PartyCount) -> Vec<String> {
        enumerate_subsystems(n, false)
            .iter()
            .map(|j| format!("S_{j}"))
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let header = EntropyVector::header(self.n).join(",");
        let row: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        format!("{header}\n{}\n", row.join(","))
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header: Vec<&str> = lines
            .next()
            .ok_or_else(|| Error::Parse("empty CSV".into()))?
            .split(',')
            .map(str::trim)
            .collect();
        let row: Vec<&str> = lines
            .next()
            .ok_or_else(|| Error::Parse("CSV has no data row".into()))?
            .split(',')
            .map(str::trim)
            .collect();
        let n = PartyCount::from_dim(header.len())?;
        if header != EntropyVector::header(n).iter().map(String::as_str).collect::<Vec<_>>() {
            return Err(Error::Parse("CSV header is not in canonical order".into()));
        }
        if row.len() != header.len() {
            return Err(Error::Dimension {
                expected: header.len(),
                found: row.len(),
            });
        }
        let coords = row.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?;
        EntropyVector::new(n, coords)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&EntropyVectorFile::from(self)).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: EntropyVectorFile = serde_json::from_str(text)?;
        file.try_into()
    }
}

impl fmt::Display for EntropyVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// On-disk form: `{"n": 2, "coords": ["1", "1/2", "0"]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EntropyVectorFile {
    pub n: usize,
    pub coords: Vec<String>,
}

impl From<&EntropyVector> for EntropyVectorFile {
    fn from(v: &EntropyVector) -> Self {
        EntropyVectorFile {
            n: v.n.get(),
            coords: v.coords.iter().map(|c| c.to_string()).collect(),
        }
    }
}

impl TryFrom<EntropyVectorFile> for EntropyVector {
    type Error = Error;

    fn try_from(f: EntropyVectorFile) -> Result<Self> {
        let n = PartyCount::new(f.n)?;
        let coords = f.coords.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?;
        EntropyVector::new(n, coords)
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: `{s}`"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Exact linear functional on entropy space.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearFunctional {
    coeffs: Vec<BigRational>,
}

impl LinearFunctional {
    pub fn new(coeffs: Vec<BigRational>) -> Self {
        LinearFunctional { coeffs }
    }

    pub fn from_integers(coeffs: &[i64]) -> Self {
        LinearFunctional {
            coeffs: coeffs.iter().map(|&x| exact::rational_from_i64(x)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn negated(&self) -> LinearFunctional {
        LinearFunctional {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    /// Primitive integer normal with the same positive direction.
    pub fn primitive_integers(&self) -> Vec<BigInt> {
        exact::rational_to_primitive(&self.coeffs)
    }

    pub fn to_i64(&self) -> Option<Vec<i64>> {
        exact::bigints_to_i64(&self.primitive_integers())
    }
}

/// Exact inner product `Σ f_J S_J`.
pub fn eval_functional(f: &LinearFunctional, s: &EntropyVector) -> Result<BigRational> {
    if f.dim() != s.dim() {
        return Err(Error::Dimension {
            expected: s.dim(),
            found: f.dim(),
        });
    }
    Ok(f.coeffs.iter().zip(&s.coords).map(|(a, b)| a * b).sum())
}

/// Permutation of the `n + 1` parties, stored as images of `1..=n+1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &p in &images {
            if p == 0 || p > images.len() || std::mem::replace(&mut seen[p - 1], true) {
                return Err(Error::InvalidIndex(format!("not a permutation: {images:?}")));
            }
        }
        Ok(Permutation(images))
    }

    pub fn identity(len: usize) -> Self {
        Permutation((1..=len).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn image(&self, p: usize) -> usize {
        self.0[p - 1]
    }

    pub fn apply(&self, j: SubsystemIndex) -> SubsystemIndex {
        SubsystemIndex(j.parties().fold(0, |acc, p| acc | 1 << (self.image(p) - 1)))
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &p) in self.0.iter().enumerate() {
            inv[p - 1] = i + 1;
        }
        Permutation(inv)
    }

    /// All permutations of `len` parties in lexicographic order.
    pub fn all(len: usize) -> Vec<Permutation> {
        fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Permutation>) {
            if prefix.len() == used.len() {
                out.push(Permutation(prefix.clone()));
                return;
            }
            for p in 1..=used.len() {
                if !used[p - 1] {
                    used[p - 1] = true;
                    prefix.push(p);
                    rec(prefix, used, out);
                    prefix.pop();
                    used[p - 1] = false;
                }
            }
        }
        let mut out = Vec::new();
        rec(&mut Vec::new(), &mut vec![false; len], &mut out);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(k: usize) -> PartyCount {
        PartyCount::new(k).unwrap()
    }

    fn idx(s: &str) -> SubsystemIndex {
        s.parse().unwrap()
    }

    #[test]
    fn subsystem_enumeration() {
        let subs = enumerate_subsystems(n(2), false);
        assert_eq!(subs, vec![idx("1"), idx("2"), idx("12")]);
        assert_eq!(enumerate_subsystems(n(2), true).len(), 7);
        assert_eq!(enumerate_subsystems(n(4), false).len(), 15);
    }

    #[test]
    fn purifier_reduction() {
        assert_eq!(reduce_index(idx("3"), n(2)).unwrap(), idx("12"));
        assert_eq!(reduce_index(idx("13"), n(2)).unwrap(), idx("2"));
        assert_eq!(reduce_index(idx("1"), n(2)).unwrap(), idx("1"));
        assert!(matches!(reduce_index(idx("123"), n(2)), Err(Error::FullSystem)));
        assert!(reduce_index(idx("4"), n(2)).is_err());
    }

    #[test]
    fn reduction_never_contains_purifier() {
        for k in 1..=5 {
            for j in enumerate_subsystems(n(k), true) {
                match reduce_index(j, n(k)) {
                    Ok(r) => {
                        assert!(!r.contains(k + 1));
                        if !j.contains(k + 1) {
                            assert_eq!(r, j);
                        } else {
                            assert_eq!(r.bits() | j.bits(), n(k).full_mask());
                        }
                    }
                    Err(_) => assert_eq!(j.bits(), n(k).full_mask()),
                }
            }
        }
    }

    #[test]
    fn functional_evaluation() {
        let f = LinearFunctional::from_integers(&[1, 1, -1]);
        let s = EntropyVector::from_integers(n(2), &[1, 1, 0]).unwrap();
        assert_eq!(eval_functional(&f, &s).unwrap(), exact::rational_from_i64(2));
        assert!(eval_functional(&f, &EntropyVector::zero(n(2))).unwrap().is_zero());
        let g = LinearFunctional::from_integers(&[1, -1, 1]);
        let t = EntropyVector::from_integers(n(2), &[1, 1, 2]).unwrap();
        assert_eq!(eval_functional(&g, &t).unwrap(), exact::rational_from_i64(2));
        let h = LinearFunctional::from_integers(&[1, 1]);
        assert!(matches!(eval_functional(&h, &s), Err(Error::Dimension { .. })));
    }

    #[test]
    fn file_formats_round_trip() {
        let v = EntropyVector::new(
            n(2),
            vec![
                parse_rational("1/2").unwrap(),
                parse_rational("-3").unwrap(),
                parse_rational("4/6").unwrap(),
            ],
        )
        .unwrap();
        let json = v.to_json();
        assert_eq!(json, r#"{"n":2,"coords":["1/2","-3","2/3"]}"#);
        assert_eq!(EntropyVector::from_json(&json).unwrap(), v);
        let csv = v.to_csv();
        assert_eq!(csv, "S_1,S_2,S_12\n1/2,-3,2/3\n");
        assert_eq!(EntropyVector::from_csv(&csv).unwrap().to_csv(), csv);
    }

    #[test]
    fn bad_inputs_are_rejected() {
        assert!(PartyCount::new(0).is_err());
        assert!(PartyCount::from_dim(6).is_err());
        assert_eq!(PartyCount::from_dim(15).unwrap().get(), 4);
        assert!(parse_rational("1/0").is_err());
        assert!(EntropyVector::from_json(r#"{"n":2,"coords":["1"]}"#).is_err());
    }

    #[test]
    fn permutation_moves_entropies() {
        // S_1 = 1, others 0 is not physical but exercises the relabeling rule
        let v = EntropyVector::from_integers(n(2), &[5, 7, 11]).unwrap();
        let swap = Permutation::new(vec![2, 1, 3]).unwrap();
        assert_eq!(
            v.permute(&swap).unwrap(),
            EntropyVector::from_integers(n(2), &[7, 5, 11]).unwrap()
        );
        // moving party 1 to the purifier slot: S'_3 = S_1, i.e. S'_12 = 5
        let cyc = Permutation::new(vec![3, 1, 2]).unwrap();
        let w = v.permute(&cyc).unwrap();
        assert_eq!(w.extended(idx("3")), exact::rational_from_i64(5));
        assert_eq!(w.extended(idx("1")), exact::rational_from_i64(7));
        assert_eq!(Permutation::all(4).len(), 24);
    }
}
