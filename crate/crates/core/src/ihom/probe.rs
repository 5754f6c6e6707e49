//! Comparisons between a link and its cone, and between the two
//! stratifications of a cone on a join, with thresholds calibrated on small
//! links before they are asserted.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{intersection_homology, Group, Homology, IhomError, Ring};
use crate::extint::{ExtInt, Finite, NegInf, PosInf};
use crate::perv::{KViolation, Perversity};
use crate::simplex::{Simplex, SimplicialComplex};
use crate::strat::{StratError, Stratification};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeProbe {
    pub link_ih: Homology,
    pub cone_ih: Homology,
    /// Dual perversity at the apex.
    pub dual_apex: ExtInt,
    /// Largest `j` with equal groups in every degree `<= j`; `-1` if degree 0 differs.
    pub iso_through: i64,
    /// `dual_apex + offset`.
    pub predicted: ExtInt,
    /// Groups agree up to `predicted` and are truncated above it.
    pub consistent: bool,
}

fn agree_through(a: &Homology, b: &Homology, top: usize) -> i64 {
    (0..=top).take_while(|&k| a.degree(k) == b.degree(k)).last().map_or(-1, |k| k as i64)
}

/// Intersection homology of a compact stratified `link` and of its closed
/// cone, where the cone strata inherit `p` and the apex gets `apex_value`.
/// The expectation is: equal groups in degrees `<= Dp(v) + offset`, and
/// above that nothing except one component in degree 0.
pub fn cone_threshold_probe(
    link: &Stratification,
    p: &Perversity,
    apex_value: ExtInt,
    ring: Ring,
    offset: i64,
) -> Result<ConeProbe, IhomError> {
    let apex = link.complex().fresh_vertex();
    let cone = link.cone(apex)?;
    let apex_s = Simplex::vertex(apex);
    let values: Vec<ExtInt> = (0..cone.strata().len())
        .map(|id| {
            let rep = cone.representative(id);
            if *rep == apex_s {
                apex_value
            } else {
                let base = rep.difference(&apex_s).unwrap();
                p.value(link.stratum_of_simplex(&base).unwrap())
            }
        })
        .collect();
    let cp = Perversity::new(cone.poset(), values)?;
    let link_ih = intersection_homology(link, p, ring)?;
    let cone_ih = intersection_homology(&cone, &cp, ring)?;
    let n = cone.formal_dim();
    let dual_apex = Finite(n as i64 - 2).checked_sub(apex_value).expect("finite minus extended integer");
    let predicted = dual_apex.shift(offset);
    let iso_through = agree_through(&link_ih, &cone_ih, n);
    let consistent = (0..=n).all(|k| {
        if Finite(k as i64) <= predicted {
            cone_ih.degree(k) == link_ih.degree(k)
        } else if k == 0 {
            cone_ih.degree(0) == Group::free(1)
        } else {
            cone_ih.degree(k).is_zero()
        }
    });
    Ok(ConeProbe { link_ih, cone_ih, dual_apex, iso_through, predicted, consistent })
}

/// Trivially stratified links used for calibration: `S^0`, `S^1` and a
/// wedge of two circles.
pub fn calibration_links() -> Vec<(&'static str, Stratification)> {
    let wedge = SimplicialComplex::from_facets([[0u32, 1], [1, 2], [0, 2], [0, 3], [3, 4], [0, 4]]).unwrap();
    [("S0", SimplicialComplex::sphere(0, 0)), ("S1", SimplicialComplex::sphere(1, 0)), ("S1vS1", wedge)]
        .into_iter()
        .map(|(n, c)| (n, Stratification::trivial(c).unwrap()))
        .collect()
}

fn apex_values() -> Vec<ExtInt> {
    let mut v = alloc::vec![NegInf];
    v.extend((-2..=3).map(Finite));
    v.push(PosInf);
    v
}

/// The unique offset in `-2..=2` that makes the cone probe consistent on
/// every calibration link and apex value.
pub fn calibrate_cone_offset(ring: Ring) -> Result<i64, IhomError> {
    let mut good = Vec::new();
    'offsets: for offset in -2..=2 {
        for (_, link) in calibration_links() {
            let p = Perversity::zero(link.poset());
            for a in apex_values() {
                if !cone_threshold_probe(&link, &p, a, ring, offset)?.consistent {
                    continue 'offsets;
                }
            }
        }
        good.push(offset);
    }
    match good[..] {
        [o] => Ok(o),
        _ => Err(IhomError::Calibration(format!("cone offsets {good:?}"))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoConeProbe {
    /// Stratification with the apex as a point stratum.
    pub refined: Stratification,
    /// Stratification where the apex lies in the disk stratum.
    pub coarse: Stratification,
    pub refined_ih: Homology,
    pub coarse_ih: Homology,
    /// `Dp({u, v})` on the refined side.
    pub dual_apex: ExtInt,
    /// `Dq({v})` for the pushed-forward perversity.
    pub dual_disk: ExtInt,
    pub agree_through: i64,
    pub predicted: ExtInt,
    pub k_violation: Option<KViolation>,
    pub consistent: bool,
}

/// Perversity data on the refined two-cone: one value per stratum of the
/// link, one on the punctured disk and one at the apex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoConeValues {
    pub link: Perversity,
    pub disk: ExtInt,
    pub apex: ExtInt,
}

/// Builds `c(S^{b-1} * L)` as the join `D^b * L` in two ways: with the disk
/// as one stratum, and with its center `u` split off. Compares intersection
/// homology for the given values and their pushforward.
pub fn two_cone_probe(
    b: usize,
    link: &Stratification,
    values: &TwoConeValues,
    ring: Ring,
    offset: i64,
) -> Result<TwoConeProbe, IhomError> {
    assert!(b >= 1, "the sphere factor must have positive dimension");
    let first = link.complex().fresh_vertex();
    let u = first + b as u32 + 1;
    let disk = SimplicialComplex::sphere(b - 1, first).cone(u).map_err(StratError::from)?;
    let coarse = link.join_with(&disk, b)?;
    let refined = coarse.point_refinement(u)?;
    let map = refined.coarsening_map(&coarse)?.expect("point refinement coarsens back");
    let link_vertices = link.complex().vertices();
    let coarse_link_stratum = |id: usize| -> Option<usize> {
        let rep = coarse.representative(id);
        let base: Vec<u32> = rep.vertices().iter().copied().filter(|v| link_vertices.binary_search(v).is_ok()).collect();
        (!base.is_empty()).then(|| link.stratum_of_simplex(&Simplex::new(base).unwrap()).unwrap())
    };
    let us = Simplex::vertex(u);
    let pv: Vec<ExtInt> = (0..refined.strata().len())
        .map(|id| {
            if *refined.representative(id) == us {
                values.apex
            } else {
                coarse_link_stratum(map[id]).map_or(values.disk, |s| values.link.value(s))
            }
        })
        .collect();
    let p = Perversity::new(refined.poset(), pv)?;
    let q = Perversity::pushforward(coarse.poset(), &map, &p).perversity;
    let apex_id = refined.stratum_of_simplex(&us)?;
    let disk_id = map[apex_id];
    let dual_apex = p.dual(refined.poset()).value(apex_id);
    let dual_disk = q.dual(coarse.poset()).value(disk_id);
    if !(dual_disk <= dual_apex && dual_apex <= dual_disk.shift(b as i64)) {
        let msg: String = format!("Dq(v) = {dual_disk}, Dp(u,v) = {dual_apex}, b = {b}");
        return Err(IhomError::TwoConeBounds(msg));
    }
    let k_violation = p.k_violation(refined.poset(), &map);
    let refined_ih = intersection_homology(&refined, &p, ring)?;
    let coarse_ih = intersection_homology(&coarse, &q, ring)?;
    let top = coarse.formal_dim();
    let agree = agree_through(&refined_ih, &coarse_ih, top);
    let predicted = dual_apex.shift(offset);
    let consistent = predicted <= Finite(agree) || agree == top as i64;
    Ok(TwoConeProbe {
        refined,
        coarse,
        refined_ih,
        coarse_ih,
        dual_apex,
        dual_disk,
        agree_through: agree,
        predicted,
        k_violation,
        consistent,
    })
}

/// Every K-perversity value pair on the disk and apex for trivially
/// stratified calibration links, `b` in `1..=2`.
fn two_cone_cases() -> Vec<(usize, Stratification, TwoConeValues)> {
    let mut out = Vec::new();
    for (_, link) in calibration_links() {
        for b in 1..=2usize {
            let t = link.formal_dim() as i64 - 1;
            for d in -1..=t.max(0) + 1 {
                for a in d..=d + b as i64 {
                    let values = TwoConeValues { link: Perversity::zero(link.poset()), disk: Finite(d), apex: Finite(a) };
                    out.push((b, link.clone(), values));
                }
            }
        }
    }
    out
}

/// The largest offset in `-1..=2` for which the two stratifications agree
/// through `Dp({u, v}) + offset` on every calibration case.
pub fn calibrate_two_cone_offset(ring: Ring) -> Result<i64, IhomError> {
    let cases = two_cone_cases();
    for offset in (-1..=2).rev() {
        let mut ok = true;
        for (b, link, values) in &cases {
            if !two_cone_probe(*b, link, values, ring, offset)?.consistent {
                ok = false;
                break;
            }
        }
        if ok {
            return Ok(offset);
        }
    }
    Err(IhomError::Calibration("no two-cone offset in -1..=2".into()))
}
