//! Numerical laboratory for pairs of Fuchsian surface-group representations.
//!
//! The crate has five parts:
//!
//! * [`lie`] — exact small-matrix algebra: SL(2,R), SO_0(2,2) and the explicit
//!   homomorphisms between them.
//! * [`rep`] — a concrete genus-2 base point (the regular-octagon group),
//!   relator-preserving Newton deformations, and bending paths of
//!   representation pairs.
//! * [`spectrum`] — marked length spectra, entropy slopes, and the degeneracy /
//!   proportionality tests for length derivatives along deformation paths.
//! * [`thermo`] — pressure, entropy and the pressure form computed exactly on
//!   subshifts of finite type with edge-valued potentials.
//! * [`hodge`] — the frame inner product on the flat so_0(2,2) bundle at the
//!   Fuchsian locus and finite-difference verification of the harmonicity and
//!   Weil-Petersson identities.
//!
//! [`verify`] bundles the identity checks into a reportable suite.

pub mod error;
pub mod hodge;
pub mod lie;
pub mod rep;
pub mod spectrum;
pub mod thermo;
pub mod verify;

pub use error::{Error, Result};
