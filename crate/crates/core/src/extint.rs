//! Integers extended by `-inf` and `+inf`.

use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

/// Raised when `+inf` meets `-inf` in a sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("indeterminate sum of +inf and -inf")]
pub struct IndeterminateInfinity;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse extended integer from {0:?}")]
pub struct ParseExtIntError(pub alloc::string::String);

/// An element of `Z ∪ {-inf, +inf}` with the obvious total order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtInt {
    NegInf,
    Finite(i64),
    PosInf,
}

pub use ExtInt::{Finite, NegInf, PosInf};

impl ExtInt {
    pub const ZERO: ExtInt = Finite(0);

    pub fn is_finite(self) -> bool {
        matches!(self, Finite(_))
    }

    pub fn finite(self) -> Option<i64> {
        match self {
            Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn checked_add(self, rhs: ExtInt) -> Result<ExtInt, IndeterminateInfinity> {
        match (self, rhs) {
            (PosInf, NegInf) | (NegInf, PosInf) => Err(IndeterminateInfinity),
            (PosInf, _) | (_, PosInf) => Ok(PosInf),
            (NegInf, _) | (_, NegInf) => Ok(NegInf),
            (Finite(a), Finite(b)) => Ok(Finite(a + b)),
        }
    }

    pub fn neg(self) -> ExtInt {
        match self {
            NegInf => PosInf,
            PosInf => NegInf,
            Finite(a) => Finite(-a),
        }
    }

    pub fn checked_sub(self, rhs: ExtInt) -> Result<ExtInt, IndeterminateInfinity> {
        self.checked_add(rhs.neg())
    }

    /// Adds a finite offset; never indeterminate.
    pub fn shift(self, by: i64) -> ExtInt {
        match self {
            Finite(a) => Finite(a + by),
            other => other,
        }
    }

    /// Compares against a plain integer.
    pub fn cmp_int(self, v: i64) -> Ordering {
        self.cmp(&Finite(v))
    }
}

impl From<i64> for ExtInt {
    fn from(v: i64) -> Self {
        Finite(v)
    }
}

impl fmt::Display for ExtInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NegInf => f.write_str("-inf"),
            PosInf => f.write_str("inf"),
            Finite(v) => write!(f, "{v}"),
        }
    }
}

impl FromStr for ExtInt {
    type Err = ParseExtIntError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "inf" | "+inf" => Ok(PosInf),
            "-inf" => Ok(NegInf),
            _ => s.parse::<i64>().map(Finite).map_err(|_| ParseExtIntError(s.into())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use proptest::prelude::*;

    #[test]
    fn order() {
        assert!(NegInf < Finite(i64::MIN));
        assert!(Finite(i64::MAX) < PosInf);
        assert!(Finite(-1) < Finite(0));
    }

    #[test]
    fn arithmetic() {
        assert_eq!(Finite(2).checked_add(Finite(3)), Ok(Finite(5)));
        assert_eq!(PosInf.checked_add(Finite(-7)), Ok(PosInf));
        assert_eq!(NegInf.checked_sub(Finite(1)), Ok(NegInf));
        assert_eq!(PosInf.checked_add(NegInf), Err(IndeterminateInfinity));
        assert_eq!(PosInf.checked_sub(PosInf), Err(IndeterminateInfinity));
    }

    #[test]
    fn text_round_trip() {
        for v in [NegInf, Finite(-3), Finite(0), Finite(12), PosInf] {
            assert_eq!(v.to_string().parse::<ExtInt>(), Ok(v));
        }
        assert!("x".parse::<ExtInt>().is_err());
    }

    fn ext() -> impl Strategy<Value = ExtInt> {
        prop_oneof![Just(NegInf), Just(PosInf), (-1000i64..1000).prop_map(Finite)]
    }

    proptest! {
        #[test]
        fn negation_is_involutive(a in ext()) {
            prop_assert_eq!(a.neg().neg(), a);
        }

        #[test]
        fn addition_commutes(a in ext(), b in ext()) {
            prop_assert_eq!(a.checked_add(b), b.checked_add(a));
        }

        #[test]
        fn addition_is_monotone(a in ext(), b in ext(), c in ext()) {
            if let (Ok(x), Ok(y)) = (a.checked_add(c), b.checked_add(c)) {
                if a <= b { prop_assert!(x <= y); }
            }
        }
    }
}
