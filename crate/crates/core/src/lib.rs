//! Exact-arithmetic toolkit for the geometry of height functions on
//! products of horocyclic trees and the polyhedral cone bounds they induce.
//!
//! Everything is computed over the integers or the rationals; there is no
//! floating point anywhere. The main pieces:
//!
//! - [`root_data`]: Chevalley root systems, formal places, the weighted
//!   coordinate map on a product of apartments and its kernel, and
//!   restriction of root forms to that kernel.
//! - [`cones`]: exact rational cone membership, m-tameness, the two
//!   polyhedral bounds for higher geometric invariants, and finiteness
//!   certificates for normal subgroups.
//! - [`trees`]: finite windows of (q+1)-regular trees with an integer
//!   height toward a distinguished descending end.
//! - [`complex`]: products of tree windows sliced by height constraints,
//!   integer homology through Smith normal form, inclusion-induced maps,
//!   witness spheres and essential-triviality ladders.
//! - [`moufang`]: rank-1 root groups on the horocyclic model, fixed
//!   chamber sets, directed enumerations, covering and sheet audits.
//! - [`cli`]: reproducible batch scenarios with machine-readable
//!   certificates (also exposed by the `horotree` binary).

pub mod cli;
pub mod complex;
pub mod cones;
pub mod intmat;
pub mod lp;
pub mod moufang;
pub mod rat;
pub mod root_data;
pub mod trees;

pub use rat::Rat;
