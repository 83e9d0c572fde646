use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use super::FiniteMonoid;
use crate::{Error, Result};

/// A left ideal `I` of a finite monoid: `m·i ∈ I` for every `m` and `i ∈ I`.
///
/// These are the truth values of the topos of `M`-sets. Membership is stored
/// as a bit set over element indices.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LeftIdeal {
    monoid: Arc<FiniteMonoid>,
    members: FixedBitSet,
}

fn same_monoid(a: &Arc<FiniteMonoid>, b: &Arc<FiniteMonoid>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

pub(crate) fn is_left_closed(monoid: &FiniteMonoid, members: &FixedBitSet) -> bool {
    members
        .ones()
        .all(|i| (0..monoid.size()).all(|m| members.contains(monoid.mul(m, i))))
}

impl LeftIdeal {
    /// Wraps `members` after checking the left-ideal condition.
    pub fn new(monoid: Arc<FiniteMonoid>, members: FixedBitSet) -> Result<Self> {
        if members.len() != monoid.size() {
            return Err(Error::Structural(format!(
                "member set has length {}, monoid has {} elements",
                members.len(),
                monoid.size()
            )));
        }
        if !is_left_closed(&monoid, &members) {
            return Err(Error::Validation(
                "subset is not closed under left multiplication".into(),
            ));
        }
        Ok(LeftIdeal { monoid, members })
    }

    pub fn from_elements(
        monoid: Arc<FiniteMonoid>,
        elements: impl IntoIterator<Item = usize>,
    ) -> Result<Self> {
        let mut members = FixedBitSet::with_capacity(monoid.size());
        for e in elements {
            if e >= monoid.size() {
                return Err(Error::Structural(format!("element {e} out of range")));
            }
            members.insert(e);
        }
        Self::new(monoid, members)
    }

    /// Caller guarantees closure; used where closure is a theorem of the construction.
    pub(crate) fn from_closed(monoid: Arc<FiniteMonoid>, members: FixedBitSet) -> Self {
        debug_assert!(is_left_closed(&monoid, &members));
        LeftIdeal { monoid, members }
    }

    /// The bottom element `0 := ∅`.
    pub fn empty(monoid: Arc<FiniteMonoid>) -> Self {
        let n = monoid.size();
        LeftIdeal {
            monoid,
            members: FixedBitSet::with_capacity(n),
        }
    }

    /// The top element `1 := M`.
    pub fn full(monoid: Arc<FiniteMonoid>) -> Self {
        let n = monoid.size();
        let mut members = FixedBitSet::with_capacity(n);
        members.insert_range(..);
        LeftIdeal { monoid, members }
    }

    /// The principal left ideal `M·x`.
    pub fn principal(monoid: Arc<FiniteMonoid>, x: usize) -> Result<Self> {
        if x >= monoid.size() {
            return Err(Error::Structural(format!("element {x} out of range")));
        }
        let mut members = FixedBitSet::with_capacity(monoid.size());
        for m in 0..monoid.size() {
            members.insert(monoid.mul(m, x));
        }
        Ok(LeftIdeal { monoid, members })
    }

    pub fn monoid(&self) -> &Arc<FiniteMonoid> {
        &self.monoid
    }

    pub fn members(&self) -> &FixedBitSet {
        &self.members
    }

    pub fn elements(&self) -> Vec<usize> {
        self.members.ones().collect()
    }

    pub fn contains(&self, m: usize) -> bool {
        self.members.contains(m)
    }

    pub fn len(&self) -> usize {
        self.members.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_clear()
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.monoid.size()
    }

    fn check_same(&self, other: &LeftIdeal) -> Result<()> {
        if same_monoid(&self.monoid, &other.monoid) {
            Ok(())
        } else {
            Err(Error::Usage("ideals belong to different monoids".into()))
        }
    }

    /// Lattice order `I ≤ J` iff `I ⊆ J`.
    pub fn le(&self, other: &LeftIdeal) -> Result<bool> {
        self.check_same(other)?;
        Ok(self.members.is_subset(&other.members))
    }

    pub fn meet(&self, other: &LeftIdeal) -> Result<LeftIdeal> {
        self.check_same(other)?;
        let mut members = self.members.clone();
        members.intersect_with(&other.members);
        Ok(LeftIdeal::from_closed(self.monoid.clone(), members))
    }

    pub fn join(&self, other: &LeftIdeal) -> Result<LeftIdeal> {
        self.check_same(other)?;
        let mut members = self.members.clone();
        members.union_with(&other.members);
        Ok(LeftIdeal::from_closed(self.monoid.clone(), members))
    }

    /// `ℓ_m(I) = {m' | m'm ∈ I}`, the action of `M` on its own truth values.
    pub fn act(&self, m: usize) -> Result<LeftIdeal> {
        let n = self.monoid.size();
        if m >= n {
            return Err(Error::Usage(format!("element {m} is not in the monoid")));
        }
        let mut members = FixedBitSet::with_capacity(n);
        for x in 0..n {
            if self.members.contains(self.monoid.mul(x, m)) {
                members.insert(x);
            }
        }
        Ok(LeftIdeal::from_closed(self.monoid.clone(), members))
    }

    /// Relative pseudo-complement `I ⇒ J = {m | ℓ_m(I) ⊆ ℓ_m(J)}`.
    pub fn implies(&self, other: &LeftIdeal) -> Result<LeftIdeal> {
        self.check_same(other)?;
        let n = self.monoid.size();
        let mut members = FixedBitSet::with_capacity(n);
        for m in 0..n {
            let holds = (0..n).all(|x| {
                let xm = self.monoid.mul(x, m);
                !self.members.contains(xm) || other.members.contains(xm)
            });
            if holds {
                members.insert(m);
            }
        }
        Ok(LeftIdeal::from_closed(self.monoid.clone(), members))
    }

    /// Pseudo-complement `¬I = {m | ∀n, nm ∉ I}`, equal to `I ⇒ 0`.
    pub fn not(&self) -> LeftIdeal {
        let n = self.monoid.size();
        let mut members = FixedBitSet::with_capacity(n);
        for m in 0..n {
            if (0..n).all(|x| !self.members.contains(self.monoid.mul(x, m))) {
                members.insert(m);
            }
        }
        LeftIdeal::from_closed(self.monoid.clone(), members)
    }
}

impl fmt::Debug for LeftIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LeftIdeal{:?}", self.elements())
    }
}

impl fmt::Display for LeftIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = self.members.ones().map(|e| self.monoid.label(e)).collect();
        write!(f, "{{{}}}", labels.join(", "))
    }
}

/// Limits for [`enumerate_left_ideals`].
#[derive(Clone, Copy, Debug)]
pub struct IdealEnumeration {
    /// Monoids up to this size are handled by filtering all subsets.
    pub subset_filter_max: usize,
    /// Upper bound on the number of ideals returned.
    pub max_ideals: usize,
}

impl Default for IdealEnumeration {
    fn default() -> Self {
        IdealEnumeration {
            subset_filter_max: 12,
            max_ideals: 1 << 16,
        }
    }
}

impl IdealEnumeration {
    /// All left ideals of `monoid`, sorted by size and then by member list.
    ///
    /// Small monoids filter every subset; larger ones close the principal
    /// ideals `M·x` under union, since every left ideal is such a union.
    pub fn run(&self, monoid: &Arc<FiniteMonoid>) -> Result<Vec<LeftIdeal>> {
        let n = monoid.size();
        let mut found: Vec<FixedBitSet> = Vec::new();
        if n <= self.subset_filter_max {
            for mask in 0u64..(1u64 << n) {
                let mut bits = FixedBitSet::with_capacity(n);
                for i in 0..n {
                    if mask >> i & 1 == 1 {
                        bits.insert(i);
                    }
                }
                if is_left_closed(monoid, &bits) {
                    found.push(bits);
                    self.check_cap(found.len())?;
                }
            }
        } else {
            let principals: Vec<FixedBitSet> = (0..n)
                .map(|x| LeftIdeal::principal(monoid.clone(), x).map(|i| i.members))
                .collect::<Result<_>>()?;
            let mut seen: HashSet<FixedBitSet> = HashSet::new();
            let empty = FixedBitSet::with_capacity(n);
            seen.insert(empty.clone());
            found.push(empty);
            let mut cursor = 0;
            while cursor < found.len() {
                let base = found[cursor].clone();
                for p in &principals {
                    if p.is_subset(&base) {
                        continue;
                    }
                    let mut u = base.clone();
                    u.union_with(p);
                    if seen.insert(u.clone()) {
                        found.push(u);
                        self.check_cap(found.len())?;
                    }
                }
                cursor += 1;
            }
        }
        found.sort_by(|a, b| {
            a.count_ones(..)
                .cmp(&b.count_ones(..))
                .then_with(|| a.ones().cmp(b.ones()))
        });
        Ok(found
            .into_iter()
            .map(|members| LeftIdeal::from_closed(monoid.clone(), members))
            .collect())
    }

    fn check_cap(&self, count: usize) -> Result<()> {
        if count > self.max_ideals {
            Err(Error::Capacity {
                what: "left ideals",
                needed: count as u128,
                limit: self.max_ideals as u128,
            })
        } else {
            Ok(())
        }
    }
}

/// [`IdealEnumeration::run`] with default limits.
pub fn enumerate_left_ideals(monoid: &Arc<FiniteMonoid>) -> Result<Vec<LeftIdeal>> {
    IdealEnumeration::default().run(monoid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{enumerate_monoids, transformation_monoid};

    fn pair() -> Arc<FiniteMonoid> {
        Arc::new(FiniteMonoid::from_table(&[vec![0, 1], vec![1, 1]]).unwrap())
    }

    fn map_monoid() -> (Arc<FiniteMonoid>, Vec<Vec<usize>>) {
        let gens = vec![vec![0, 0], vec![1, 0], vec![1, 1]];
        let (m, maps) = transformation_monoid(2, &gens, 16).unwrap();
        (Arc::new(m), maps)
    }

    fn ideal(m: &Arc<FiniteMonoid>, e: &[usize]) -> LeftIdeal {
        LeftIdeal::from_elements(m.clone(), e.iter().copied()).unwrap()
    }

    #[test]
    fn action_fixes_top_and_bottom() {
        let m = pair();
        for e in 0..2 {
            assert!(LeftIdeal::full(m.clone()).act(e).unwrap().is_full());
            assert!(LeftIdeal::empty(m.clone()).act(e).unwrap().is_empty());
        }
    }

    #[test]
    fn action_of_idempotent_on_its_ideal() {
        let m = pair();
        // ℓ_e({e}) = {m' | m'e ∈ {e}} = {1, e}
        assert_eq!(ideal(&m, &[1]).act(1).unwrap().elements(), vec![0, 1]);
    }

    #[test]
    fn implication_examples() {
        let m = pair();
        let e = ideal(&m, &[1]);
        let top = LeftIdeal::full(m.clone());
        let bot = LeftIdeal::empty(m.clone());
        assert!(e.implies(&e).unwrap().is_full());
        assert_eq!(top.implies(&e).unwrap(), e);
        assert!(e.implies(&bot).unwrap().is_empty());
    }

    #[test]
    fn top_implies_j_is_j_on_small_monoids() {
        for n in 1..=3 {
            for mon in enumerate_monoids(n).unwrap() {
                let mon = Arc::new(mon);
                let top = LeftIdeal::full(mon.clone());
                for j in enumerate_left_ideals(&mon).unwrap() {
                    assert_eq!(top.implies(&j).unwrap(), j);
                }
            }
        }
    }

    #[test]
    fn negation_examples() {
        let m = pair();
        let top = LeftIdeal::full(m.clone());
        let bot = LeftIdeal::empty(m.clone());
        assert!(top.not().is_empty());
        assert!(bot.not().is_full());
        let e = ideal(&m, &[1]);
        assert!(e.not().is_empty());
        let lem = e.join(&e.not()).unwrap();
        assert_eq!(lem, e);
        assert!(!lem.is_full());
    }

    #[test]
    fn enumeration_examples() {
        let trivial = Arc::new(FiniteMonoid::trivial());
        let ideals = enumerate_left_ideals(&trivial).unwrap();
        assert_eq!(ideals.len(), 2);
        assert!(ideals[0].is_empty() && ideals[1].is_full());

        let m = pair();
        let got: Vec<Vec<usize>> = enumerate_left_ideals(&m)
            .unwrap()
            .iter()
            .map(LeftIdeal::elements)
            .collect();
        assert_eq!(got, vec![vec![], vec![1], vec![0, 1]]);

        let (mm, maps) = map_monoid();
        let consts: Vec<usize> = (0..4).filter(|&i| maps[i][0] == maps[i][1]).collect();
        let all = enumerate_left_ideals(&mm).unwrap();
        assert!(all.iter().any(|i| i.elements() == consts));
        // Brute-force count over all 16 subsets.
        let brute = (0u32..16)
            .filter(|mask| {
                let set: Vec<usize> = (0..4).filter(|i| mask >> i & 1 == 1).collect();
                set.iter()
                    .all(|&i| (0..4).all(|g| set.contains(&mm.mul(g, i))))
            })
            .count();
        assert_eq!(all.len(), brute);
    }

    #[test]
    fn closure_generation_matches_subset_filter() {
        let gens = vec![vec![1, 2, 0], vec![0, 0, 2], vec![1, 1, 1]];
        let (m, _) = transformation_monoid(3, &gens, 64).unwrap();
        let m = Arc::new(m);
        let filtered = IdealEnumeration {
            subset_filter_max: 32,
            ..Default::default()
        }
        .run(&m)
        .unwrap();
        let generated = IdealEnumeration {
            subset_filter_max: 0,
            ..Default::default()
        }
        .run(&m)
        .unwrap();
        assert_eq!(filtered, generated);
    }

    #[test]
    fn ideal_cap_is_enforced() {
        let m = pair();
        let r = IdealEnumeration {
            subset_filter_max: 12,
            max_ideals: 2,
        }
        .run(&m);
        assert!(matches!(r, Err(Error::Capacity { .. })));
    }

    #[test]
    fn mismatched_monoids_are_rejected() {
        let a = LeftIdeal::full(pair());
        let b = LeftIdeal::full(Arc::new(FiniteMonoid::trivial()));
        assert!(matches!(a.meet(&b), Err(Error::Usage(_))));
        assert!(matches!(a.implies(&b), Err(Error::Usage(_))));
        // Structurally equal monoids behind different pointers are the same monoid.
        let c = LeftIdeal::full(pair());
        assert!(a.meet(&c).is_ok());
    }

    #[test]
    fn non_ideal_subset_is_rejected() {
        let m = pair();
        assert!(LeftIdeal::from_elements(m, [0]).is_err());
    }
}
