//! Perversities on strata posets and their transfer along coarsenings.

use alloc::vec::Vec;
use core::fmt;

use crate::extint::{ExtInt, Finite, NegInf, PosInf};
use crate::simplex::Simplex;
use crate::strat::{StrataPoset, Stratification};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PervError {
    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("stratum {0} is regular but has a nonzero value")]
    NonZeroOnRegular(usize),
    #[error("codimensional function must vanish at 0")]
    NonZeroAtZero,
    #[error("link stratum {0} does not match a single ambient stratum")]
    StratumMismatch(usize),
    #[error(transparent)]
    Strat(#[from] crate::strat::StratError),
}

/// A perversity: one extended integer per stratum, zero on regular strata.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Perversity {
    values: Vec<ExtInt>,
}

impl Perversity {
    pub fn new(poset: &StrataPoset, values: Vec<ExtInt>) -> Result<Self, PervError> {
        if values.len() != poset.len() {
            return Err(PervError::LengthMismatch { expected: poset.len(), got: values.len() });
        }
        for (s, v) in values.iter().enumerate() {
            if poset.is_regular(s) && *v != ExtInt::ZERO {
                return Err(PervError::NonZeroOnRegular(s));
            }
        }
        Ok(Perversity { values })
    }

    /// Builds from values on singular strata only, regular strata get 0.
    pub fn from_fn(poset: &StrataPoset, f: impl Fn(usize) -> ExtInt) -> Self {
        let values = (0..poset.len()).map(|s| if poset.is_regular(s) { ExtInt::ZERO } else { f(s) }).collect();
        Perversity { values }
    }

    pub fn zero(poset: &StrataPoset) -> Self {
        Self::constant(poset, 0)
    }

    pub fn constant(poset: &StrataPoset, k: i64) -> Self {
        Self::from_fn(poset, |_| Finite(k))
    }

    /// `codim - 2` on singular strata.
    pub fn top(poset: &StrataPoset) -> Self {
        Self::from_fn(poset, |s| Finite(poset.codim(s) as i64 - 2))
    }

    pub fn from_codim_fn(poset: &StrataPoset, f: &CodimFn) -> Self {
        Self::from_fn(poset, |s| Finite(f.value(poset.codim(s))))
    }

    pub fn values(&self) -> &[ExtInt] {
        &self.values
    }

    pub fn value(&self, s: usize) -> ExtInt {
        self.values[s]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `t - p`. The top perversity is finite, so this never hits `inf - inf`.
    pub fn dual(&self, poset: &StrataPoset) -> Perversity {
        let top = Self::top(poset);
        let values = self.values.iter().zip(&top.values).map(|(p, t)| t.checked_sub(*p).unwrap()).collect();
        Perversity { values }
    }

    /// Pointwise `self <= other`.
    pub fn le(&self, other: &Perversity) -> bool {
        self.values.iter().zip(&other.values).all(|(a, b)| a <= b)
    }

    /// First stratum where `self > other`.
    pub fn first_excess(&self, other: &Perversity) -> Option<usize> {
        self.values.iter().zip(&other.values).position(|(a, b)| a > b)
    }

    /// `q(S^ι)` on singular strata of the fine poset.
    pub fn pullback(fine: &StrataPoset, map: &[usize], q: &Perversity) -> Perversity {
        Self::from_fn(fine, |s| q.values[map[s]])
    }

    /// Infimum over preimages on singular strata of the coarse poset, with
    /// `inf ∅ = inf`. The result records the strata whose infimum involved
    /// `-inf` next to other values, and those with no preimage at all.
    pub fn pushforward(coarse: &StrataPoset, map: &[usize], p: &Perversity) -> Pushforward {
        let mut flagged = Vec::new();
        let mut empty = Vec::new();
        let values = (0..coarse.len())
            .map(|t| {
                if coarse.is_regular(t) {
                    return ExtInt::ZERO;
                }
                let pre: Vec<ExtInt> = (0..map.len()).filter(|&s| map[s] == t).map(|s| p.values[s]).collect();
                if pre.is_empty() {
                    empty.push(t);
                    return PosInf;
                }
                if pre.contains(&NegInf) && pre.iter().any(|v| *v != NegInf) {
                    flagged.push(t);
                }
                *pre.iter().min().unwrap()
            })
            .collect();
        Pushforward { perversity: Perversity { values }, neg_inf_mattered: flagged, empty_preimage: empty }
    }

    /// Checks (K1) and (K2) on a coarsening given by its fine poset and map.
    pub fn k_violation(&self, fine: &StrataPoset, map: &[usize]) -> Option<KViolation> {
        let top = |s: usize| if fine.is_regular(s) { 0 } else { fine.codim(s) as i64 - 2 };
        for s in 0..fine.len() {
            for q in 0..fine.len() {
                if map[s] != map[q] {
                    continue;
                }
                let (ps, pq) = (self.values[s], self.values[q]);
                if fine.le(s, q) {
                    let upper = pq.shift(top(s) - top(q));
                    if !(pq <= ps && ps <= upper) {
                        return Some(KViolation { condition: KCondition::Monotone, lower: s, upper: q, values: (ps, pq) });
                    }
                }
                if fine.dims[s] == fine.dims[q] && ps != pq {
                    return Some(KViolation { condition: KCondition::EqualDim, lower: s, upper: q, values: (ps, pq) });
                }
            }
        }
        None
    }

    pub fn is_k_perversity(&self, fine: &StrataPoset, map: &[usize]) -> bool {
        self.k_violation(fine, map).is_none()
    }

    /// Transfers this perversity, defined on `ambient`, to the link of `s`.
    pub fn link_induced(&self, ambient: &Stratification, s: &Simplex) -> Result<LinkPerversity, PervError> {
        let link = ambient.link(s)?;
        let apex_stratum = ambient.stratum_of_simplex(s)?;
        let mut assigned: Vec<Option<usize>> = alloc::vec![None; link.strata().len()];
        for (g, t) in link.complex().iter().enumerate() {
            let big = ambient.stratum_of_simplex(&t.union(s))?;
            let ls = link.stratum_of(g);
            match assigned[ls] {
                None => assigned[ls] = Some(big),
                Some(b) if b == big => {}
                Some(_) => return Err(PervError::StratumMismatch(ls)),
            }
        }
        let values: Vec<ExtInt> = assigned.iter().map(|a| self.values[a.unwrap()]).collect();
        let perversity = Perversity::new(link.poset(), values)?;
        Ok(LinkPerversity { link, perversity, ambient_strata: assigned.into_iter().map(Option::unwrap).collect(), apex: self.values[apex_stratum] })
    }
}

impl fmt::Display for Perversity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("]")
    }
}

/// Output of [`Perversity::pushforward`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pushforward {
    pub perversity: Perversity,
    pub neg_inf_mattered: Vec<usize>,
    pub empty_preimage: Vec<usize>,
}

/// A perversity carried to a link, with the value at the virtual apex.
#[derive(Clone, Debug)]
pub struct LinkPerversity {
    pub link: Stratification,
    pub perversity: Perversity,
    /// Ambient stratum of each link stratum.
    pub ambient_strata: Vec<usize>,
    pub apex: ExtInt,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KCondition {
    /// `p(Q) <= p(S) <= p(Q) + t(S) - t(Q)` for `S <= Q`.
    Monotone,
    /// Equal values on equal-dimensional strata with the same image.
    EqualDim,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KViolation {
    pub condition: KCondition,
    pub lower: usize,
    pub upper: usize,
    pub values: (ExtInt, ExtInt),
}

impl fmt::Display for KViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.condition {
            KCondition::Monotone => "K1",
            KCondition::EqualDim => "K2",
        };
        write!(f, "{name} fails for strata ({}, {}) with values ({}, {})", self.lower, self.upper, self.values.0, self.values.1)
    }
}

/// A function of the codimension with `f(0) = 0`. Values past the end of the
/// list repeat the last one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodimFn {
    values: Vec<i64>,
}

impl CodimFn {
    /// `values[k]` is `f(k)`; `values[0]` must be 0.
    pub fn new(values: Vec<i64>) -> Result<Self, PervError> {
        if values.first().is_some_and(|&v| v != 0) {
            return Err(PervError::NonZeroAtZero);
        }
        let values = if values.is_empty() { alloc::vec![0] } else { values };
        Ok(CodimFn { values })
    }

    /// Builds from `f(1), f(2), ...`.
    pub fn from_positive(tail: &[i64]) -> Self {
        let mut values = alloc::vec![0];
        values.extend_from_slice(tail);
        CodimFn { values }
    }

    pub fn zero() -> Self {
        CodimFn { values: alloc::vec![0] }
    }

    pub fn constant(k: i64) -> Self {
        CodimFn { values: alloc::vec![0, k] }
    }

    /// `k - 2` for `k > 0`, tabulated up to `n`.
    pub fn top(n: usize) -> Self {
        let mut values = alloc::vec![0];
        values.extend((1..=n.max(1)).map(|k| k as i64 - 2));
        CodimFn { values }
    }

    pub fn value(&self, k: usize) -> i64 {
        if k == 0 {
            0
        } else {
            *self.values.get(k).unwrap_or_else(|| self.values.last().unwrap())
        }
    }

    /// `f(k) <= f(k+1) <= f(k) + 1` for `1 <= k < n`.
    pub fn growing(&self, n: usize) -> bool {
        (1..n).all(|k| {
            let (a, b) = (self.value(k), self.value(k + 1));
            a <= b && b <= a + 1
        })
    }

    /// `f(1) = f(2) = 0` and growing.
    pub fn is_gm(&self, n: usize) -> bool {
        self.value(1) == 0 && self.value(2) == 0 && self.growing(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplex::SimplicialComplex;
    use proptest::prelude::*;

    fn suspension_poles() -> Stratification {
        Stratification::trivial(SimplicialComplex::sphere(1, 0)).unwrap().join_sphere(0, 10).unwrap()
    }

    fn chain_poset(n: usize) -> StrataPoset {
        // strata of dims 0..=n in a single chain
        let dims: Vec<usize> = (0..=n).collect();
        let le = (0..=n).map(|a| (0..=n).map(|b| a <= b).collect()).collect();
        StrataPoset::new(n, dims, le)
    }

    #[test]
    fn top_values() {
        let p = chain_poset(3);
        let t = Perversity::top(&p);
        assert_eq!(t.values(), [Finite(1), Finite(0), Finite(-1), Finite(0)]);
    }

    #[test]
    fn dual_examples() {
        let p = chain_poset(3);
        assert_eq!(Perversity::zero(&p).dual(&p).value(0), Finite(1));
        assert_eq!(Perversity::top(&p).dual(&p), Perversity::zero(&p));
        let p5 = chain_poset(5);
        let one = Perversity::constant(&p5, 1);
        let p = one.dual(&p5);
        assert_eq!(p.value(0), Finite(2));
        let inf = Perversity::from_fn(&p5, |_| PosInf);
        assert!(inf.dual(&p5).values()[..5].iter().all(|v| *v == NegInf));
    }

    #[test]
    fn regular_must_vanish() {
        let p = chain_poset(2);
        assert_eq!(Perversity::new(&p, alloc::vec![Finite(0), Finite(0), Finite(1)]), Err(PervError::NonZeroOnRegular(2)));
    }

    #[test]
    fn codim_functions() {
        assert!(CodimFn::zero().growing(6));
        assert!(CodimFn::top(6).growing(6));
        let jump = CodimFn::from_positive(&[0, 0, 0, 2]);
        assert!(!jump.growing(6));
        assert!(CodimFn::zero().is_gm(6));
        // t(1) = -1, so the top perversity is not GM in the strict sense
        assert!(!CodimFn::top(6).is_gm(6));
        assert!(!CodimFn::constant(1).is_gm(6));
        assert_eq!(CodimFn::new(alloc::vec![1]), Err(PervError::NonZeroAtZero));
        let p = chain_poset(4);
        assert_eq!(Perversity::from_codim_fn(&p, &CodimFn::top(4)), Perversity::top(&p));
        assert_eq!(Perversity::from_codim_fn(&p, &CodimFn::constant(3)), Perversity::constant(&p, 3));
    }

    #[test]
    fn one_exceptional_blocks_k_perversities() {
        // path a-0-b, singular vertex of codim 1, coarsened to trivial
        let c = SimplicialComplex::from_facets([[1u32, 0], [0, 2]]).unwrap();
        let fine = Stratification::new(c.clone(), 1, &[(0, alloc::vec![Simplex::vertex(0)])]).unwrap();
        let coarse = Stratification::trivial(c).unwrap();
        let map = fine.coarsening_map(&coarse).unwrap().unwrap();
        for v in [NegInf, Finite(-1), Finite(0), Finite(1), PosInf] {
            let p = Perversity::from_fn(fine.poset(), |_| v);
            assert!(!p.is_k_perversity(fine.poset(), &map));
        }
    }

    #[test]
    fn pushforward_flags() {
        let st = suspension_poles();
        let coarse = Stratification::trivial(st.complex().clone()).unwrap();
        let coarse2 = st.clone();
        let map = st.coarsening_map(&coarse2).unwrap().unwrap();
        let p = Perversity::from_fn(st.poset(), |s| if s == 0 { NegInf } else { Finite(0) });
        let push = Perversity::pushforward(coarse2.poset(), &map, &p);
        assert_eq!(push.perversity, p);
        assert!(push.neg_inf_mattered.is_empty());
        let map = st.coarsening_map(&coarse).unwrap().unwrap();
        let push = Perversity::pushforward(coarse.poset(), &map, &p);
        assert_eq!(push.perversity, Perversity::zero(coarse.poset()));
    }

    #[test]
    fn link_perversity_on_cone() {
        let base = Stratification::trivial(SimplicialComplex::sphere(1, 0)).unwrap();
        let cone = base.cone(9).unwrap();
        let p = Perversity::from_fn(cone.poset(), |_| Finite(0));
        let lp = p.link_induced(&cone, &Simplex::vertex(9)).unwrap();
        assert_eq!(lp.perversity, Perversity::zero(base.poset()));
        assert_eq!(lp.apex, Finite(0));
    }

    fn ext() -> impl Strategy<Value = ExtInt> {
        prop_oneof![Just(NegInf), Just(PosInf), (-3i64..6).prop_map(Finite)]
    }

    proptest! {
        #[test]
        fn duality_is_involutive(vals in proptest::collection::vec(ext(), 5)) {
            let p5 = chain_poset(5);
            let p = Perversity::from_fn(&p5, |s| vals[s]);
            prop_assert_eq!(p.dual(&p5).dual(&p5), p);
        }

        #[test]
        fn k_condition_is_self_dual(vals in proptest::collection::vec(ext(), 5)) {
            let p5 = chain_poset(5);
            let map = alloc::vec![0usize; 6];
            let p = Perversity::from_fn(&p5, |s| vals[s]);
            prop_assert_eq!(p.is_k_perversity(&p5, &map), p.dual(&p5).is_k_perversity(&p5, &map));
        }

        #[test]
        fn pull_push_laws(vals in proptest::collection::vec(ext(), 3)) {
            let st = suspension_poles();
            let coarse = Stratification::trivial(st.complex().clone()).unwrap();
            let map = st.coarsening_map(&coarse).unwrap().unwrap();
            let p = Perversity::from_fn(st.poset(), |s| vals[s]);
            let push = Perversity::pushforward(coarse.poset(), &map, &p).perversity;
            // the pullback is 0 on exceptional strata, so the inequality is
            // only guaranteed where the image stays singular
            let back = Perversity::pullback(st.poset(), &map, &push);
            for s in st.poset().singular() {
                if coarse.poset().is_regular(map[s]) {
                    prop_assert_eq!(back.value(s), ExtInt::ZERO);
                } else {
                    prop_assert!(back.value(s) <= p.value(s));
                }
            }
            let back = Perversity::pushforward(coarse.poset(), &map, &Perversity::pullback(st.poset(), &map, &push)).perversity;
            prop_assert_eq!(back, push);
        }
    }
}
