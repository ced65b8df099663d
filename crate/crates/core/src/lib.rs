//! Controllability analysis and constructive steering for bilinear control
//! systems projected onto the unit sphere,
//!
//! ```text
//! ṡ = h_A(s) + u·h_B(s),   h_M(s) = Ms − ⟨Ms, s⟩s,   s ∈ S².
//! ```
//!
//! The crate checks the Lie algebra rank condition (sampled for general
//! pairs, algebraically for skew pairs), reduces skew pairs to a canonical
//! frame, and for skew pairs with `[A, B] ≠ 0` builds piecewise-constant
//! control schedules that steer any point of the sphere to any other. An RK4
//! integrator provides an independent check of every closed-form trajectory.

// `!(x > tol)` gates are deliberate: they reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
pub mod error;
pub mod induced_fields;
pub mod larc;
pub mod linalg3;
pub mod normal_form;
pub mod planner;
pub mod simulator;

pub use error::{Error, Result};
