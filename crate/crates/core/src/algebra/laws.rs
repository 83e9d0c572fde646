use super::LeftIdeal;
use crate::{Error, Result};

/// Outcome of checking one law over every tuple of ideals it quantifies over.
#[derive(Clone, Debug)]
pub struct LawCheck {
    pub law: &'static str,
    pub instances: usize,
    /// The first tuple (or `(ideal, element)` rendered as ideals) that failed.
    pub counterexample: Option<Vec<LeftIdeal>>,
}

impl LawCheck {
    pub fn holds(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Every law checked by [`check_heyting_laws`], plus the ideals `P` with
/// `P ∨ ¬P ≠ M`.
#[derive(Clone, Debug)]
pub struct HeytingReport {
    pub ideals: usize,
    pub laws: Vec<LawCheck>,
    pub excluded_middle_failures: Vec<LeftIdeal>,
}

impl HeytingReport {
    pub fn all_hold(&self) -> bool {
        self.laws.iter().all(LawCheck::holds)
    }
}

struct Checker {
    law: &'static str,
    instances: usize,
    counterexample: Option<Vec<LeftIdeal>>,
}

impl Checker {
    fn new(law: &'static str) -> Self {
        Checker {
            law,
            instances: 0,
            counterexample: None,
        }
    }

    fn check(&mut self, ok: bool, witness: impl FnOnce() -> Vec<LeftIdeal>) {
        self.instances += 1;
        if !ok && self.counterexample.is_none() {
            self.counterexample = Some(witness());
        }
    }

    fn done(self) -> LawCheck {
        LawCheck {
            law: self.law,
            instances: self.instances,
            counterexample: self.counterexample,
        }
    }
}

/// Checks the bounded-lattice, distributivity, Heyting and action laws
/// exhaustively over `ideals`, which must be the complete list of left
/// ideals of one monoid.
pub fn check_heyting_laws(ideals: &[LeftIdeal]) -> Result<HeytingReport> {
    let first = ideals
        .first()
        .ok_or_else(|| Error::Usage("no ideals to check".into()))?;
    let m = first.monoid().clone();
    let top = LeftIdeal::full(m.clone());
    let bottom = LeftIdeal::empty(m.clone());

    let mut closed = Checker::new("operations stay among the ideals");
    let mut bounds = Checker::new("bounds: ⊥ ≤ a ≤ ⊤, a ∧ ⊤ = a, a ∨ ⊥ = a");
    let mut idempotent = Checker::new("idempotence: a ∧ a = a = a ∨ a");
    let mut commutative = Checker::new("commutativity of ∧ and ∨");
    let mut absorption = Checker::new("absorption: a ∧ (a ∨ b) = a = a ∨ (a ∧ b)");
    let mut associative = Checker::new("associativity of ∧ and ∨");
    let mut distributive = Checker::new("distributivity: a ∧ (b ∨ c) = (a ∧ b) ∨ (a ∧ c)");
    let mut residuation = Checker::new("residuation: c ∧ a ≤ b ⟺ c ≤ (a ⇒ b)");
    let mut modus = Checker::new("a ∧ (a ⇒ b) = a ∧ b and b ≤ (a ⇒ b)");
    let mut self_impl = Checker::new("a ⇒ a = ⊤");
    let mut negation = Checker::new("¬a = a ⇒ ⊥ and a ∧ ¬a = ⊥");
    let mut unit = Checker::new("action unit: ℓ₁(a) = a");
    let mut compose = Checker::new("action composition: ℓ_m(ℓ_n(a)) = ℓ_(mn)(a)");
    let mut preserves = Checker::new("ℓ_m preserves ∧, ∨ and ⇒");

    let e = m.identity();
    for a in ideals {
        let not_a = a.not();
        closed.check(ideals.contains(&not_a), || vec![a.clone()]);
        bounds.check(
            bottom.le(a)? && a.le(&top)? && a.meet(&top)? == *a && a.join(&bottom)? == *a,
            || vec![a.clone()],
        );
        idempotent.check(a.meet(a)? == *a && a.join(a)? == *a, || vec![a.clone()]);
        self_impl.check(a.implies(a)?.is_full(), || vec![a.clone()]);
        negation.check(
            not_a == a.implies(&bottom)? && a.meet(&not_a)?.is_empty(),
            || vec![a.clone()],
        );
        unit.check(a.act(e)? == *a, || vec![a.clone()]);
        for x in 0..m.size() {
            for y in 0..m.size() {
                compose.check(a.act(y)?.act(x)? == a.act(m.mul(x, y))?, || {
                    vec![a.clone(), LeftIdeal::principal(m.clone(), x).unwrap_or_else(|_| a.clone())]
                });
            }
        }
        for b in ideals {
            let (meet, join, imp) = (a.meet(b)?, a.join(b)?, a.implies(b)?);
            closed.check(
                ideals.contains(&meet) && ideals.contains(&join) && ideals.contains(&imp),
                || vec![a.clone(), b.clone()],
            );
            commutative.check(meet == b.meet(a)? && join == b.join(a)?, || {
                vec![a.clone(), b.clone()]
            });
            absorption.check(a.meet(&join)? == *a && a.join(&meet)? == *a, || {
                vec![a.clone(), b.clone()]
            });
            modus.check(a.meet(&imp)? == meet && b.le(&imp)?, || vec![a.clone(), b.clone()]);
            for x in 0..m.size() {
                let ok = a.meet(b)?.act(x)? == a.act(x)?.meet(&b.act(x)?)?
                    && a.join(b)?.act(x)? == a.act(x)?.join(&b.act(x)?)?
                    && imp.act(x)? == a.act(x)?.implies(&b.act(x)?)?;
                preserves.check(ok, || vec![a.clone(), b.clone()]);
            }
            for c in ideals {
                associative.check(
                    a.meet(&b.meet(c)?)? == meet.meet(c)? && a.join(&b.join(c)?)? == join.join(c)?,
                    || vec![a.clone(), b.clone(), c.clone()],
                );
                distributive.check(
                    a.meet(&b.join(c)?)? == meet.join(&a.meet(c)?)?,
                    || vec![a.clone(), b.clone(), c.clone()],
                );
                residuation.check(c.meet(a)?.le(b)? == c.le(&imp)?, || {
                    vec![a.clone(), b.clone(), c.clone()]
                });
            }
        }
    }

    let mut excluded_middle_failures = Vec::new();
    for a in ideals {
        if !a.join(&a.not())?.is_full() {
            excluded_middle_failures.push(a.clone());
        }
    }
    Ok(HeytingReport {
        ideals: ideals.len(),
        laws: [
            closed,
            bounds,
            idempotent,
            commutative,
            absorption,
            associative,
            distributive,
            residuation,
            modus,
            self_impl,
            negation,
            unit,
            compose,
            preserves,
        ]
        .into_iter()
        .map(Checker::done)
        .collect(),
        excluded_middle_failures,
    })
}
