//! The three-point semiring of quantities `{0, 1, ω}` and usage vectors.

use std::collections::BTreeMap;
use std::fmt;

/// How often a bound variable may be used at run time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Multiplicity {
    Zero,
    One,
    Omega,
}

pub use Multiplicity::{Omega, One, Zero};

impl Multiplicity {
    pub const ALL: [Multiplicity; 3] = [Zero, One, Omega];

    /// Semiring addition. Two definite uses saturate to `Omega`.
    pub fn add(self, other: Multiplicity) -> Multiplicity {
        match (self, other) {
            (Zero, m) | (m, Zero) => m,
            _ => Omega,
        }
    }

    /// Semiring multiplication. `Zero` annihilates, `One` is the identity.
    pub fn mul(self, other: Multiplicity) -> Multiplicity {
        match (self, other) {
            (Zero, _) | (_, Zero) => Zero,
            (One, m) | (m, One) => m,
            (Omega, Omega) => Omega,
        }
    }

    /// Least upper bound in the display order `0 < 1 < ω`.
    pub fn join(self, other: Multiplicity) -> Multiplicity {
        self.max(other)
    }

    /// The part of a declared budget that remains after `used`.
    pub fn remaining(self, used: Multiplicity) -> Multiplicity {
        match (self, used) {
            (Omega, _) => Omega,
            (m, Zero) => m,
            _ => Zero,
        }
    }

    /// Column shown in hole reports: ω is left blank.
    pub fn column(self) -> &'static str {
        match self {
            Zero => "0",
            One => "1",
            Omega => "",
        }
    }
}

/// Whether a variable declared at `declared` may be used `used` times.
pub fn admissible(declared: Multiplicity, used: Multiplicity) -> bool {
    match declared {
        Zero => used == Zero,
        One => used == One,
        Omega => true,
    }
}

impl fmt::Display for Multiplicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.column())
    }
}

/// Per-variable usage counts, keyed by de Bruijn level. Absent entries are `Zero`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct UsageVector {
    counts: BTreeMap<usize, Multiplicity>,
}

impl UsageVector {
    pub fn new() -> UsageVector {
        UsageVector::default()
    }

    pub fn single(level: usize) -> UsageVector {
        let mut u = UsageVector::new();
        u.counts.insert(level, One);
        u
    }

    pub fn get(&self, level: usize) -> Multiplicity {
        self.counts.get(&level).copied().unwrap_or(Zero)
    }

    pub fn set(&mut self, level: usize, m: Multiplicity) {
        if m == Zero {
            self.counts.remove(&level);
        } else {
            self.counts.insert(level, m);
        }
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, Multiplicity)> + '_ {
        self.counts.iter().map(|(k, v)| (*k, *v))
    }

    pub fn add(&self, other: &UsageVector) -> UsageVector {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &UsageVector) {
        for (k, v) in other.iter() {
            let cur = self.get(k);
            self.set(k, cur.add(v));
        }
    }

    pub fn scale(&self, m: Multiplicity) -> UsageVector {
        let mut out = UsageVector::new();
        for (k, v) in self.iter() {
            out.set(k, m.mul(v));
        }
        out
    }

    pub fn join(&self, other: &UsageVector) -> UsageVector {
        let mut out = self.clone();
        for (k, v) in other.iter() {
            let cur = out.get(k);
            out.set(k, cur.join(v));
        }
        out
    }

    /// Drops every entry at or above `depth` (variables going out of scope).
    pub fn truncate(&mut self, depth: usize) {
        self.counts.retain(|k, _| *k < depth);
    }

    pub fn remove(&mut self, level: usize) -> Multiplicity {
        self.counts.remove(&level).unwrap_or(Zero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(Zero.add(One), One);
        assert_eq!(One.add(One), Omega);
        assert_eq!(One.add(Omega), Omega);
        assert_eq!(Zero.mul(Omega), Zero);
        assert_eq!(One.mul(One), One);
        assert_eq!(Omega.mul(Omega), Omega);
        assert!(admissible(One, One));
        assert!(!admissible(One, Omega));
        assert!(admissible(Omega, Zero));
    }

    #[test]
    fn linear_budget_has_one_admissible_usage() {
        let n = Multiplicity::ALL.iter().filter(|u| admissible(One, **u)).count();
        assert_eq!(n, 1);
    }

    #[test]
    fn remaining_after_use() {
        assert_eq!(One.remaining(One), Zero);
        assert_eq!(One.remaining(Zero), One);
        assert_eq!(Omega.remaining(Omega), Omega);
        assert_eq!(Zero.remaining(Zero), Zero);
    }

    #[test]
    fn usage_vector_is_sparse() {
        let mut u = UsageVector::single(3);
        u.add_assign(&UsageVector::single(3));
        assert_eq!(u.get(3), Omega);
        assert_eq!(u.scale(Zero), UsageVector::new());
        u.truncate(3);
        assert!(u.is_empty());
    }
}
