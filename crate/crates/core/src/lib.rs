//! Numerical calibrated geometry of the resolved conifold.
//!
//! The crate models the small resolution of the quadric cone
//! `{XY - UV = 0}` in C^4, carrying a one-parameter family of Ricci-flat
//! Kaehler metrics with resolution scale `a >= 0` (`a = 0` is the cone
//! metric). On top of the metric it provides:
//!
//! * the Kaehler form, holomorphic volume form, and calibration data
//!   ([`cy_structure`]);
//! * moment maps for the maximal torus and an SO(3) subgroup of the
//!   isometric SO(4) action ([`moment_maps`]);
//! * two families of special Lagrangian (or at `a > 0` for SO(3), merely
//!   Lagrangian-defect-measured) 3-folds cut out by moment-map levels
//!   ([`slag_families`]);
//! * a residual-based verification engine that checks the special
//!   Lagrangian conditions pointwise on sampled leaves ([`verify_engine`]);
//! * a command line frontend ([`cli`]).
//!
//! Everything is double precision, deterministic for a fixed seed, and
//! validated against closed-form values where they exist.

pub mod ambient;
pub mod cli;
pub mod cy_structure;
pub mod fd;
pub mod moment_maps;
pub mod slag_families;
pub mod verify_engine;

pub use ambient::{
    lift_to_resolved, to_xyuv, to_z, Cp1Point, Generator, GroupElement, Patch, ResolvedPoint,
    XyuvPoint, ZPoint,
};
pub use cy_structure::{CyStructure, KaehlerPotential};
