//! Generalised truth values at desk scale.
//!
//! The crate covers four layers:
//!
//! * [`algebra`]: finite monoids, their left ideals and the Heyting algebra
//!   those ideals form, plus free monoids of projector strings and
//!   depth-bounded ideals inside them.
//! * [`mset`]: sets with a monoid action, invariant subsets, characteristic
//!   arrows and the ideal-valued truth assignments built from them.
//! * [`linalg`], [`classical`], [`quantum`]: small dense complex linear
//!   algebra and the function-monoid valuations of propositions `A ∈ Δ`.
//! * [`reduction`], [`context`]: projector strings acting on states, the
//!   resulting valuations, polar (Galois) operations between rays and strings,
//!   and sieve-valued contextual truth values on string contexts.
//!
//! Every value is immutable once built and every operation is a pure
//! function, so shared references can be used freely across threads.

pub mod algebra;
pub mod classical;
pub mod context;
pub mod error;
pub mod linalg;
pub mod mset;
pub mod quantum;
pub mod reduction;

pub use error::{Error, Result};
