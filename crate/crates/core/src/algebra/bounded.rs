use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use super::{enumerate_strings, ProjString};
use crate::Result;

/// Membership predicate of an ideal in a free string monoid.
pub type Predicate = Arc<dyn Fn(&ProjString) -> bool + Send + Sync>;

/// A string `member` whose extension `(letter) ⋆ member` left the ideal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureViolation {
    pub member: ProjString,
    pub letter: usize,
}

/// Result of checking left closure up to a depth.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealCertificate {
    pub depth: usize,
    pub strings_checked: usize,
    pub violations: Vec<ClosureViolation>,
}

impl IdealCertificate {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// An ideal of a free string monoid known through a predicate.
///
/// Ideals of the free monoid are infinite, so membership is decided by the
/// predicate and the left-ideal property is certified only for strings up
/// to `max_verified_length`: for every cached member `Q` with
/// `|Q| < max_verified_length` and every letter `P`, `P ⋆ Q` must be a member.
#[derive(Clone)]
pub struct BoundedIdeal {
    alphabet_size: usize,
    max_verified_length: usize,
    witnesses: Vec<ProjString>,
    witness_set: HashSet<ProjString>,
    non_members: Vec<ProjString>,
    certificate: IdealCertificate,
    predicate: Predicate,
}

impl BoundedIdeal {
    /// Evaluates `predicate` on every string up to `depth` and certifies closure.
    pub fn build(
        alphabet_size: usize,
        depth: usize,
        budget: u128,
        predicate: Predicate,
    ) -> Result<Self> {
        let mut witnesses = Vec::new();
        let mut non_members = Vec::new();
        for q in enumerate_strings(alphabet_size, depth, budget)? {
            if predicate(&q) {
                witnesses.push(q);
            } else {
                non_members.push(q);
            }
        }
        let witness_set: HashSet<ProjString> = witnesses.iter().cloned().collect();
        let mut violations = Vec::new();
        for q in witnesses.iter().filter(|q| q.len() < depth) {
            for letter in 0..alphabet_size {
                if !witness_set.contains(&q.prepend(letter)) {
                    violations.push(ClosureViolation {
                        member: q.clone(),
                        letter,
                    });
                }
            }
        }
        let certificate = IdealCertificate {
            depth,
            strings_checked: witnesses.len() + non_members.len(),
            violations,
        };
        Ok(BoundedIdeal {
            alphabet_size,
            max_verified_length: depth,
            witnesses,
            witness_set,
            non_members,
            certificate,
            predicate,
        })
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn max_verified_length(&self) -> usize {
        self.max_verified_length
    }

    /// Members up to the verified depth, shortest first.
    pub fn witnesses(&self) -> &[ProjString] {
        &self.witnesses
    }

    /// Strings up to the verified depth that are not members.
    pub fn non_members(&self) -> &[ProjString] {
        &self.non_members
    }

    pub fn certificate(&self) -> &IdealCertificate {
        &self.certificate
    }

    /// Membership of any string; cached below the verified depth.
    pub fn contains(&self, q: &ProjString) -> bool {
        if q.len() <= self.max_verified_length {
            self.witness_set.contains(q)
        } else {
            (self.predicate)(q)
        }
    }

    /// True when every string up to the verified depth is a member.
    pub fn is_everything(&self) -> bool {
        self.non_members.is_empty()
    }
}

impl fmt::Debug for BoundedIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BoundedIdeal")
            .field("max_verified_length", &self.max_verified_length)
            .field("witnesses", &self.witnesses.len())
            .field("violations", &self.certificate.violations.len())
            .finish()
    }
}
