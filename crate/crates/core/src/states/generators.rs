//! Closed-form entropy vectors of Bell pairs, GHZ states and perfect tensors.
//!
//! Each generator is described by its entropy on extended subsystems (one
//! qubit or qudit per participating party, entropies in units of its log
//! dimension); the stored coordinates are the purifier-free ones.

use std::fmt;

use num_rational::BigRational;

use crate::entropy_space::{EntropyVector, PartyCount, SubsystemIndex};
use crate::error::{Error, Result};
use crate::exact::rational_from_i64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GeneratorSpec {
    Bell(usize, usize),
    Ghz(SubsystemIndex),
    Perfect(SubsystemIndex),
}

impl GeneratorSpec {
    pub fn validate(self, n: PartyCount) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidGenerator(msg));
        match self {
            GeneratorSpec::Bell(a, b) => {
                if a == b || a == 0 || b == 0 || a > n.purifier() || b > n.purifier() {
                    return bad(format!("Bell({a},{b}) for {} parties", n.purifier()));
                }
            }
            GeneratorSpec::Ghz(t) => {
                if t.len() < 2 || !t.fits(n, true) {
                    return bad(format!("GHZ on {{{t}}}"));
                }
            }
            GeneratorSpec::Perfect(t) => {
                if t.len() < 4 || t.len() % 2 == 1 || !t.fits(n, true) {
                    return bad(format!("perfect tensor on {{{t}}} needs an even support of at least 4"));
                }
            }
        }
        Ok(())
    }

    /// Entropy of an extended subsystem.
    pub fn entropy(self, j: SubsystemIndex) -> i64 {
        match self {
            GeneratorSpec::Bell(a, b) => (j.contains(a) != j.contains(b)) as i64,
            GeneratorSpec::Ghz(t) => {
                let inside = (j.bits() & t.bits()).count_ones();
                (inside != 0 && inside != t.bits().count_ones()) as i64
            }
            GeneratorSpec::Perfect(t) => {
                let inside = (j.bits() & t.bits()).count_ones() as i64;
                inside.min(t.len() as i64 - inside)
            }
        }
    }

    pub fn vector(self, n: PartyCount) -> Result<EntropyVector> {
        self.validate(n)?;
        Ok(EntropyVector::from_fn(n, |j| rational_from_i64(self.entropy(j))))
    }
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorSpec::Bell(a, b) => write!(f, "Bell({a},{b})"),
            GeneratorSpec::Ghz(t) => write!(f, "GHZ({t})"),
            GeneratorSpec::Perfect(t) => write!(f, "PERFECT({t})"),
        }
    }
}

pub fn bell_vector(n: PartyCount, a: usize, b: usize) -> Result<EntropyVector> {
    GeneratorSpec::Bell(a, b).vector(n)
}

pub fn ghz_vector(n: PartyCount, t: SubsystemIndex) -> Result<EntropyVector> {
    GeneratorSpec::Ghz(t).vector(n)
}

pub fn perfect_vector(n: PartyCount, t: SubsystemIndex) -> Result<EntropyVector> {
    GeneratorSpec::Perfect(t).vector(n)
}

/// Entropy of `J` and of its complement in `[n + 1]`, for purity checks.
pub fn complementary_entropies(spec: GeneratorSpec, n: PartyCount, j: SubsystemIndex) -> (BigRational, BigRational) {
    let c = SubsystemIndex::from_bits(n.full_mask() & !j.bits()).expect("proper subsystem");
    (rational_from_i64(spec.entropy(j)), rational_from_i64(spec.entropy(c)))
}
