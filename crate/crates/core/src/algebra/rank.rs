use std::fmt;
use std::str::FromStr;

/// A Spohn rank (degree of disbelief): a nonnegative integer or the top
/// element `∞` (impossible). Ordered with every finite rank below `∞`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rank {
    Finite(u64),
    Infinite,
}

impl Rank {
    pub const ZERO: Rank = Rank::Finite(0);

    pub fn is_finite(self) -> bool {
        matches!(self, Rank::Finite(_))
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            Rank::Finite(k) => Some(k),
            Rank::Infinite => None,
        }
    }

    /// Combination: addition with `∞` absorbing.
    pub fn plus(self, other: Rank) -> Rank {
        match (self, other) {
            (Rank::Finite(a), Rank::Finite(b)) => Rank::Finite(a.saturating_add(b)),
            _ => Rank::Infinite,
        }
    }

    /// Removal: subtraction with `∞ − ∞ = 0`. `None` when the result would
    /// be negative or when a finite rank has `∞` removed from it.
    pub fn minus(self, other: Rank) -> Option<Rank> {
        match (self, other) {
            (Rank::Finite(a), Rank::Finite(b)) => a.checked_sub(b).map(Rank::Finite),
            (Rank::Infinite, Rank::Finite(_)) => Some(Rank::Infinite),
            (Rank::Infinite, Rank::Infinite) => Some(Rank::ZERO),
            (Rank::Finite(_), Rank::Infinite) => None,
        }
    }

    /// Absolute difference, `∞` when exactly one side is infinite.
    pub(crate) fn distance(self, other: Rank) -> f64 {
        match (self, other) {
            (Rank::Finite(a), Rank::Finite(b)) => a.abs_diff(b) as f64,
            (Rank::Infinite, Rank::Infinite) => 0.0,
            _ => f64::INFINITY,
        }
    }
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rank::Finite(k) => write!(f, "{k}"),
            Rank::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Rank {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "inf" | "∞" => Ok(Rank::Infinite),
            _ => s
                .parse::<u64>()
                .map(Rank::Finite)
                .map_err(|_| format!("invalid rank {s:?}")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        assert_eq!(Rank::Finite(2).plus(Rank::Finite(3)), Rank::Finite(5));
        assert_eq!(Rank::Finite(2).plus(Rank::Infinite), Rank::Infinite);
        assert_eq!(Rank::Finite(5).minus(Rank::Finite(2)), Some(Rank::Finite(3)));
        assert_eq!(Rank::Infinite.minus(Rank::Infinite), Some(Rank::ZERO));
        assert_eq!(Rank::Finite(1).minus(Rank::Finite(2)), None);
        assert_eq!(Rank::Finite(1).minus(Rank::Infinite), None);
        assert!(Rank::Finite(u64::MAX) < Rank::Infinite);
    }

    #[test]
    fn parse_and_print() {
        assert_eq!("inf".parse::<Rank>(), Ok(Rank::Infinite));
        assert_eq!("∞".parse::<Rank>(), Ok(Rank::Infinite));
        assert_eq!("7".parse::<Rank>(), Ok(Rank::Finite(7)));
        assert!("-1".parse::<Rank>().is_err());
        assert_eq!(Rank::Infinite.to_string(), "inf");
    }
}
