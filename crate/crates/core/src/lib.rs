//! Stratified finite simplicial complexes and the machinery around them:
//! perversities, coarsenings, allowable chains, intersection homology and a
//! small symbolic calculator for intersection homotopy facts.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod coarsen;
pub mod extint;
pub mod ihom;
pub mod linalg;
pub mod oracle;
pub mod perv;
pub mod simplex;
pub mod strat;
pub mod symcalc;

mod unionfind;

pub use extint::ExtInt;
pub use perv::Perversity;
pub use strat::Stratification;
pub use simplex::{Simplex, SimplicialComplex, Vertex};

