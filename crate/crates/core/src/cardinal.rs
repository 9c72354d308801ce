//! Symbolic cardinals: the naturals together with `ω`, `ω₁` and `2^ω`.
//!
//! Only sums, suprema and comparisons are provided. `ω₁` and `2^ω` are
//! always stored as distinct values; the continuum-hypothesis flag only
//! affects comparisons.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Default value of the continuum-hypothesis flag used by comparisons.
pub const DEFAULT_CH: bool = true;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cardinal {
    Fin(u64),
    Omega,
    Omega1,
    Continuum,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CardinalError {
    #[error("supremum of an empty list")]
    EmptySup,
    #[error("invalid cardinal token `{0}` (expected a natural number, `w`, `w1` or `c`)")]
    BadToken(String),
}

impl Cardinal {
    pub const ZERO: Cardinal = Cardinal::Fin(0);
    pub const ONE: Cardinal = Cardinal::Fin(1);

    pub fn is_finite(self) -> bool {
        matches!(self, Cardinal::Fin(_))
    }

    pub fn is_zero(self) -> bool {
        self == Cardinal::ZERO
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            Cardinal::Fin(k) => Some(k),
            _ => None,
        }
    }

    /// Countable means finite or `ω`.
    pub fn is_countable(self) -> bool {
        matches!(self, Cardinal::Fin(_) | Cardinal::Omega)
    }

    /// Position in the comparison order. Under CH `ω₁` sits at the rank of
    /// `2^ω`.
    fn rank(self, ch: bool) -> (u8, u64) {
        match self {
            Cardinal::Fin(k) => (0, k),
            Cardinal::Omega => (1, 0),
            Cardinal::Omega1 if ch => (3, 0),
            Cardinal::Omega1 => (2, 0),
            Cardinal::Continuum => (3, 0),
        }
    }

    pub fn cmp_with(self, other: Cardinal, ch: bool) -> Ordering {
        self.rank(ch).cmp(&other.rank(ch))
    }

    /// Equality up to the CH identification of `ω₁` with `2^ω`.
    pub fn eq_with(self, other: Cardinal, ch: bool) -> bool {
        self.cmp_with(other, ch) == Ordering::Equal
    }

    pub fn add(self, other: Cardinal) -> Cardinal {
        card_sum(self, other)
    }
}

/// Cardinal addition. Finite values add; as soon as one side is infinite the
/// result is the larger of the two.
pub fn card_sum(a: Cardinal, b: Cardinal) -> Cardinal {
    match (a, b) {
        (Cardinal::Fin(x), Cardinal::Fin(y)) => {
            Cardinal::Fin(x.checked_add(y).expect("finite cardinal overflow"))
        }
        _ => a.max(b),
    }
}

/// Sum of a list; the empty sum is `0`.
pub fn card_sum_all<I: IntoIterator<Item = Cardinal>>(xs: I) -> Cardinal {
    xs.into_iter().fold(Cardinal::ZERO, card_sum)
}

/// Least upper bound of a nonempty list. With `unbounded_finite` the list is
/// read as a sample of an unbounded family of finite values, so a finite
/// maximum is lifted to `ω`.
pub fn card_sup(xs: &[Cardinal], unbounded_finite: bool) -> Result<Cardinal, CardinalError> {
    let max = xs.iter().copied().max().ok_or(CardinalError::EmptySup)?;
    Ok(match max {
        Cardinal::Fin(_) if unbounded_finite => Cardinal::Omega,
        other => other,
    })
}

pub fn card_le(a: Cardinal, b: Cardinal, ch: bool) -> bool {
    a.cmp_with(b, ch) != Ordering::Greater
}

impl fmt::Display for Cardinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cardinal::Fin(k) => write!(f, "{k}"),
            Cardinal::Omega => f.write_str("w"),
            Cardinal::Omega1 => f.write_str("w1"),
            Cardinal::Continuum => f.write_str("c"),
        }
    }
}

impl FromStr for Cardinal {
    type Err = CardinalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "w" => Ok(Cardinal::Omega),
            "w1" => Ok(Cardinal::Omega1),
            "c" => Ok(Cardinal::Continuum),
            t if !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit()) => t
                .parse()
                .map(Cardinal::Fin)
                .map_err(|_| CardinalError::BadToken(s.to_string())),
            _ => Err(CardinalError::BadToken(s.to_string())),
        }
    }
}

impl From<u64> for Cardinal {
    fn from(k: u64) -> Self {
        Cardinal::Fin(k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Cardinal::*;

    #[test]
    fn sums() {
        assert_eq!(card_sum(Fin(2), Fin(3)), Fin(5));
        assert_eq!(card_sum(Omega, Fin(7)), Omega);
        assert_eq!(card_sum(Omega1, Continuum), Continuum);
        assert_eq!(card_sum(Fin(0), Omega1), Omega1);
        assert_eq!(card_sum_all([]), Fin(0));
    }

    #[test]
    fn sups() {
        assert_eq!(card_sup(&[Fin(1), Fin(4), Fin(2)], false), Ok(Fin(4)));
        assert_eq!(card_sup(&[Fin(3), Omega], false), Ok(Omega));
        assert_eq!(card_sup(&[Fin(1)], true), Ok(Omega));
        assert_eq!(card_sup(&[Continuum], true), Ok(Continuum));
        assert_eq!(card_sup(&[], false), Err(CardinalError::EmptySup));
    }

    #[test]
    fn comparisons() {
        assert!(card_le(Omega, Omega1, false));
        assert!(!card_le(Continuum, Omega1, false));
        assert!(card_le(Continuum, Omega1, true));
        assert!(Omega1.eq_with(Continuum, true));
        assert!(!Omega1.eq_with(Continuum, false));
    }

    #[test]
    fn text_round_trip() {
        for c in [Fin(0), Fin(17), Omega, Omega1, Continuum] {
            assert_eq!(c.to_string().parse::<Cardinal>(), Ok(c));
        }
        assert!("omega".parse::<Cardinal>().is_err());
        assert!("".parse::<Cardinal>().is_err());
        assert!("-1".parse::<Cardinal>().is_err());
    }
}
