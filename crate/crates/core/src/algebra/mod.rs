//! Finite monoids, left ideals and projector-string monoids.

mod bounded;
mod ideal;
mod laws;
mod monoid;
mod strings;

pub use bounded::{BoundedIdeal, ClosureViolation, IdealCertificate, Predicate};
pub use ideal::{enumerate_left_ideals, IdealEnumeration, LeftIdeal};
pub use laws::{check_heyting_laws, HeytingReport, LawCheck};
pub use monoid::{enumerate_monoids, transformation_monoid, verify_associativity, FiniteMonoid};
pub use strings::{enumerate_strings, string_count, ProjString, ProjStringMonoid, StringIter};

/// Default bound on the number of strings a single enumeration may produce.
pub const DEFAULT_STRING_BUDGET: u128 = 1 << 20;
