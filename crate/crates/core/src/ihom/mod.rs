//! Intersection homology of stratified complexes, plus the homotopy-flavoured
//! computations that a fixed triangulation supports: components and the
//! fundamental group of the regular part.
//!
//! A triangulation cannot see singular simplices that meet the singular set
//! only in their interior, so nothing here claims to compute intersection
//! homotopy groups in degrees above zero.

mod allow;
mod chain;
mod ic;
mod mv;
mod pi;
mod probe;

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigUint;

pub use allow::AllowabilityTable;
pub use chain::{simplicial_chain_complex, simplicial_homology, ChainComplex};
pub use ic::{intersection_chain_complex, intersection_homology, IntersectionChains};
pub use mv::{mv_exactness_check, MvDegree, MvReport};
pub use pi::{pi0_p, pi1_regular, GroupPresentation, Pi0, Word};
pub use probe::{
    calibrate_cone_offset, calibrate_two_cone_offset, calibration_links, cone_threshold_probe, two_cone_probe,
    ConeProbe, TwoConeProbe, TwoConeValues,
};

use crate::extint::ExtInt;
use crate::perv::PervError;
use crate::strat::StratError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IhomError {
    #[error("unsupported coefficient ring {0}")]
    RingUnsupported(String),
    #[error("the boundary of the boundary is nonzero in degree {0}")]
    BoundarySquareNonzero(usize),
    #[error("a boundary leaves the allowable chains in degree {0}")]
    NotClosed(usize),
    #[error("integer overflow while computing coordinates")]
    Overflow,
    #[error("perversity {value} exceeds the top perversity {top} on stratum {stratum}")]
    PerversityTooLarge { stratum: usize, value: ExtInt, top: ExtInt },
    #[error("perversity has {got} values but the stratification has {expected} strata")]
    PerversityLength { expected: usize, got: usize },
    #[error("the regular part has {0} components; pick a basepoint")]
    DisconnectedSpine(usize),
    #[error("basepoint simplex {0} is not regular")]
    SingularBasepoint(usize),
    #[error("the regular part is empty")]
    EmptySpine,
    #[error("the subcomplexes do not cover the space")]
    NotACover,
    #[error("the subcomplexes have empty intersection")]
    EmptyIntersection,
    #[error("dual values violate Dq(v) <= Dp(u,v) <= Dq(v) + b: {0}")]
    TwoConeBounds(String),
    #[error("calibration found no consistent offset: {0}")]
    Calibration(String),
    #[error(transparent)]
    Strat(#[from] StratError),
    #[error(transparent)]
    Perv(#[from] PervError),
}

impl From<crate::linalg::Overflow> for IhomError {
    fn from(_: crate::linalg::Overflow) -> Self {
        IhomError::Overflow
    }
}

/// Coefficients: the integers, the rationals or a prime field `F_p`, `p <= 97`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ring {
    Z,
    Q,
    Fp(u32),
}

impl Ring {
    pub fn validate(self) -> Result<Ring, IhomError> {
        match self {
            Ring::Fp(p) if !(2..=97).contains(&p) || !is_prime(p) => {
                Err(IhomError::RingUnsupported(alloc::format!("F{p}")))
            }
            r => Ok(r),
        }
    }

    pub fn is_field(self) -> bool {
        !matches!(self, Ring::Z)
    }
}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Z => f.write_str("Z"),
            Ring::Q => f.write_str("Q"),
            Ring::Fp(p) => write!(f, "F{p}"),
        }
    }
}

impl FromStr for Ring {
    type Err = IhomError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let r = match s {
            "Z" | "z" => Ring::Z,
            "Q" | "q" => Ring::Q,
            _ => {
                let digits = s
                    .strip_prefix("Fp:")
                    .or_else(|| s.strip_prefix('F'))
                    .or_else(|| s.strip_prefix('f'))
                    .or_else(|| s.strip_prefix("Z/"));
                let p = digits.and_then(|d| d.parse::<u32>().ok());
                Ring::Fp(p.ok_or_else(|| IhomError::RingUnsupported(s.into()))?)
            }
        };
        r.validate()
    }
}

/// One homology group: free rank and torsion coefficients in divisibility order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Group {
    pub rank: usize,
    pub torsion: Vec<BigUint>,
}

impl Group {
    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn free(rank: usize) -> Self {
        Group { rank, torsion: Vec::new() }
    }
}

/// Homology in degrees `0..degrees.len()`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Homology {
    pub ring: Ring,
    pub degrees: Vec<Group>,
}

impl Homology {
    pub fn betti(&self) -> Vec<usize> {
        self.degrees.iter().map(|g| g.rank).collect()
    }

    pub fn degree(&self, k: usize) -> Group {
        self.degrees.get(k).cloned().unwrap_or_default()
    }

    /// Same groups up to trailing zeros.
    pub fn same_groups(&self, other: &Homology) -> bool {
        let n = self.degrees.len().max(other.degrees.len());
        (0..n).all(|k| self.degree(k) == other.degree(k))
    }

    /// Stable report lines `{label}[k] rank=r torsion=[..] ring=R`.
    pub fn lines(&self, label: &str) -> String {
        use core::fmt::Write;
        let mut out = String::new();
        for (k, g) in self.degrees.iter().enumerate() {
            let _ = write!(out, "{label}[{k}] rank={} torsion=[", g.rank);
            for (i, t) in g.torsion.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                let _ = write!(out, "{t}");
            }
            let _ = writeln!(out, "] ring={}", self.ring);
        }
        out
    }
}

impl fmt::Display for Homology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.lines("H"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_parsing() {
        assert_eq!("Z".parse::<Ring>().unwrap(), Ring::Z);
        assert_eq!("F7".parse::<Ring>().unwrap(), Ring::Fp(7));
        assert_eq!("Z/2".parse::<Ring>().unwrap(), Ring::Fp(2));
        assert!("F4".parse::<Ring>().is_err());
        assert!("F101".parse::<Ring>().is_err());
        assert!("R".parse::<Ring>().is_err());
    }

    #[test]
    fn line_format() {
        let h = Homology {
            ring: Ring::Z,
            degrees: alloc::vec![Group::free(1), Group { rank: 0, torsion: alloc::vec![BigUint::from(2u32)] }],
        };
        assert_eq!(h.lines("IH"), "IH[0] rank=1 torsion=[] ring=Z\nIH[1] rank=0 torsion=[2] ring=Z\n");
    }
}
