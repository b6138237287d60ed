//! Weight semirings.
//!
//! A semiring `(K, ⊕, ⊗, 0̄, 1̄)` combines weights of alternative derivations
//! with `⊕` and weights of sequenced sub-derivations with `⊗`. All weights are
//! stored as `f64`; the boolean semiring uses `0.0` and `1.0`.

use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use crate::error::Error;

pub type Weight = f64;

/// The built-in semirings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Semiring {
    /// Viterbi / tropical: `(min, +, +∞, 0)`. Weights are costs (negative logs).
    Tropical,
    /// Probability: `(+, ×, 0, 1)`.
    Probability,
    /// Boolean: `(or, and, 0, 1)`.
    Boolean,
}

impl Semiring {
    pub const ALL: [Semiring; 3] = [Semiring::Tropical, Semiring::Probability, Semiring::Boolean];

    pub fn name(self) -> &'static str {
        match self {
            Semiring::Tropical => "tropical",
            Semiring::Probability => "prob",
            Semiring::Boolean => "boolean",
        }
    }

    #[inline]
    pub fn zero(self) -> Weight {
        match self {
            Semiring::Tropical => f64::INFINITY,
            Semiring::Probability | Semiring::Boolean => 0.0,
        }
    }

    #[inline]
    pub fn one(self) -> Weight {
        match self {
            Semiring::Tropical => 0.0,
            Semiring::Probability | Semiring::Boolean => 1.0,
        }
    }

    #[inline]
    pub fn plus(self, a: Weight, b: Weight) -> Weight {
        match self {
            Semiring::Tropical => a.min(b),
            Semiring::Probability => a + b,
            Semiring::Boolean => a.max(b),
        }
    }

    #[inline]
    pub fn times(self, a: Weight, b: Weight) -> Weight {
        match self {
            Semiring::Tropical => a + b,
            Semiring::Probability => a * b,
            Semiring::Boolean => a.min(b),
        }
    }

    /// Semiring sum over an iterator, starting from zero.
    pub fn sum<I: IntoIterator<Item = Weight>>(self, it: I) -> Weight {
        it.into_iter().fold(self.zero(), |acc, w| self.plus(acc, w))
    }

    /// Semiring product over an iterator, starting from one.
    pub fn product<I: IntoIterator<Item = Weight>>(self, it: I) -> Weight {
        it.into_iter().fold(self.one(), |acc, w| self.times(acc, w))
    }

    #[inline]
    pub fn is_zero(self, w: Weight) -> bool {
        w == self.zero()
    }

    #[inline]
    pub fn is_one(self, w: Weight) -> bool {
        w == self.one()
    }

    /// Whether the semiring carries a total "better-than" order usable for
    /// best-path search.
    pub fn is_ordered(self) -> bool {
        matches!(self, Semiring::Tropical)
    }

    /// Natural order for ordered semirings: `Less` means `a` is the better weight.
    pub fn compare(self, a: Weight, b: Weight) -> Option<Ordering> {
        match self {
            Semiring::Tropical => Some(a.total_cmp(&b)),
            _ => None,
        }
    }

    /// Whether `w` belongs to the semiring's carrier set.
    pub fn contains(self, w: Weight) -> bool {
        match self {
            Semiring::Tropical => !w.is_nan() && w != f64::NEG_INFINITY,
            Semiring::Probability => w.is_finite() && w >= 0.0,
            Semiring::Boolean => w == 0.0 || w == 1.0,
        }
    }

    pub fn check(self, w: Weight) -> crate::Result<Weight> {
        if self.contains(w) {
            Ok(w)
        } else {
            Err(Error::InvalidWeight(w, self.name()))
        }
    }
}

impl fmt::Display for Semiring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Semiring {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "tropical" | "viterbi" => Ok(Semiring::Tropical),
            "prob" | "probability" => Ok(Semiring::Probability),
            "boolean" | "bool" => Ok(Semiring::Boolean),
            other => Err(Error::Invalid(alloc::format!("unknown semiring `{other}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_matches_definitions() {
        let t = Semiring::Tropical;
        assert_eq!((t.zero(), t.one()), (f64::INFINITY, 0.0));
        assert_eq!(t.plus(2.0, 3.0), 2.0);
        assert_eq!(t.times(2.0, 3.0), 5.0);
        let p = Semiring::Probability;
        assert_eq!((p.zero(), p.one()), (0.0, 1.0));
        assert_eq!(p.plus(0.25, 0.5), 0.75);
        assert_eq!(p.times(0.25, 0.5), 0.125);
        let b = Semiring::Boolean;
        assert_eq!((b.zero(), b.one()), (0.0, 1.0));
        assert_eq!(b.plus(0.0, 1.0), 1.0);
        assert_eq!(b.times(0.0, 1.0), 0.0);
    }

    #[test]
    fn tropical_zero_annihilates() {
        let t = Semiring::Tropical;
        assert_eq!(t.times(t.zero(), 3.5), t.zero());
        assert_eq!(t.times(-1.0, t.zero()), t.zero());
    }

    #[test]
    fn parses_names() {
        assert_eq!("prob".parse::<Semiring>().unwrap(), Semiring::Probability);
        assert!("log".parse::<Semiring>().is_err());
    }
}
