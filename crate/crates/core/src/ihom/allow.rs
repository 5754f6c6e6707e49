use alloc::vec::Vec;

use super::IhomError;
use crate::extint::{ExtInt, Finite};
use crate::perv::Perversity;
use crate::strat::Stratification;

/// Which simplices are allowable for a perversity.
///
/// For a simplex `σ` and singular stratum `S`, `d(σ, S)` is the largest
/// dimension of a face of `σ` carried by `S`. The simplex is allowable when
/// `d(σ, S) <= dim σ - Dp(S) - 2` for every singular `S`, which is the
/// classical bound `dim σ - codim S + p(S)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AllowabilityTable {
    dual: Vec<ExtInt>,
    carrier_dims: Vec<Vec<(usize, usize)>>,
    allowable: Vec<bool>,
    full: Vec<bool>,
}

impl AllowabilityTable {
    pub fn new(strat: &Stratification, p: &Perversity) -> Result<Self, IhomError> {
        let poset = strat.poset();
        if p.len() != poset.len() {
            return Err(IhomError::PerversityLength { expected: poset.len(), got: p.len() });
        }
        let dual = p.dual(poset).values().to_vec();
        let complex = strat.complex();
        let mut carrier_dims = Vec::with_capacity(complex.num_simplices());
        let mut allowable = Vec::with_capacity(complex.num_simplices());
        for s in complex.iter() {
            let mut dims: Vec<(usize, usize)> = Vec::new();
            for face in s.faces() {
                let st = strat.stratum_of_simplex(&face)?;
                if poset.is_regular(st) {
                    continue;
                }
                match dims.iter_mut().find(|e| e.0 == st) {
                    Some(e) => e.1 = e.1.max(face.dim()),
                    None => dims.push((st, face.dim())),
                }
            }
            dims.sort_unstable();
            let ok = dims.iter().all(|&(st, d)| dual[st] <= Finite(s.dim() as i64 - d as i64 - 2));
            carrier_dims.push(dims);
            allowable.push(ok);
        }
        let full = complex
            .iter()
            .map(|s| s.faces().iter().all(|f| allowable[complex.index_of(f).unwrap()]))
            .collect();
        Ok(AllowabilityTable { dual, carrier_dims, allowable, full })
    }

    pub fn dual(&self) -> &[ExtInt] {
        &self.dual
    }

    pub fn is_allowable(&self, global: usize) -> bool {
        self.allowable[global]
    }

    /// Every face, the simplex included, is allowable.
    pub fn is_full(&self, global: usize) -> bool {
        self.full[global]
    }

    /// `d(σ, S)`, or `None` when no face of `σ` lies in `S`.
    pub fn carrier_dim(&self, global: usize, stratum: usize) -> Option<usize> {
        self.carrier_dims[global].iter().find(|e| e.0 == stratum).map(|e| e.1)
    }

    pub fn allowable_count(&self) -> usize {
        self.allowable.iter().filter(|&&a| a).count()
    }

    pub fn len(&self) -> usize {
        self.allowable.len()
    }

    pub fn is_empty(&self) -> bool {
        self.allowable.is_empty()
    }
}
