//! Either-or valuations of classical quantities and their generalisation to
//! ideals of a finite function monoid.
//!
//! Subsets of the value set `X` are bit masks over value indices.

use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::algebra::{transformation_monoid, FiniteMonoid, LeftIdeal};
use crate::mset::MSet;
use crate::{Error, Result};

/// Largest value set the masks can address.
pub const MAX_VALUES: usize = 32;
/// Largest value set for which the full monoid `Map(X, X)` is built.
pub const MAX_FULL_MAP_VALUES: usize = 4;
/// Bound on orbit sizes in the product M-sets.
pub const ORBIT_LIMIT: usize = 1 << 16;

/// A subset of the value set, bit `i` standing for value index `i`.
pub type ValueMask = u32;

/// A finite set of reals, kept sorted.
#[derive(Clone, Debug, PartialEq)]
pub struct ValueSet {
    values: Vec<f64>,
}

impl ValueSet {
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Validation("value set is empty".into()));
        }
        if values.len() > MAX_VALUES {
            return Err(Error::Capacity {
                what: "value set size",
                needed: values.len() as u128,
                limit: MAX_VALUES as u128,
            });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Validation("value set has non-finite members".into()));
        }
        values.sort_by(f64::total_cmp);
        if values.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Validation("value set has repeated members".into()));
        }
        Ok(ValueSet { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value(&self, i: usize) -> f64 {
        self.values[i]
    }

    /// Index of the member within `eps · max(1, |v|)` of `v`.
    pub fn index_of(&self, v: f64, eps: f64) -> Option<usize> {
        self.values
            .iter()
            .position(|x| (x - v).abs() <= eps * x.abs().max(1.0))
    }

    pub fn full_mask(&self) -> ValueMask {
        full_mask(self.len())
    }

    /// Mask of the given values; every one must be a member.
    pub fn mask_of(&self, vals: &[f64], eps: f64) -> Result<ValueMask> {
        vals.iter().try_fold(0, |acc, &v| {
            self.index_of(v, eps)
                .map(|i| acc | 1 << i)
                .ok_or_else(|| Error::lookup("value", &v.to_string()))
        })
    }

    pub fn values_of(&self, mask: ValueMask) -> Vec<f64> {
        mask_indices(mask).map(|i| self.values[i]).collect()
    }
}

pub fn full_mask(n: usize) -> ValueMask {
    if n >= 32 {
        u32::MAX
    } else {
        (1 << n) - 1
    }
}

pub fn mask_indices(mask: ValueMask) -> impl Iterator<Item = usize> {
    (0..32).filter(move |i| mask >> i & 1 == 1)
}

/// A monoid of maps on `{0, …, n−1}` under composition, `f ⋆ g = f ∘ g`.
#[derive(Clone, Debug)]
pub struct FunctionMonoid {
    points: usize,
    monoid: Arc<FiniteMonoid>,
    maps: Vec<Vec<usize>>,
}

impl FunctionMonoid {
    /// All of `Map(X, X)`, elements in lexicographic order of their value lists.
    pub fn full(points: usize) -> Result<Self> {
        if points == 0 || points > MAX_FULL_MAP_VALUES {
            return Err(Error::Capacity {
                what: "value set size for the full map monoid",
                needed: points as u128,
                limit: MAX_FULL_MAP_VALUES as u128,
            });
        }
        let count = points.pow(points as u32);
        let maps: Vec<Vec<usize>> = (0..count)
            .map(|mut code| {
                let mut f = vec![0; points];
                for slot in f.iter_mut().rev() {
                    *slot = code % points;
                    code /= points;
                }
                f
            })
            .collect();
        let encode = |f: &[usize]| f.iter().fold(0, |acc, &v| acc * points + v);
        let mut table = Vec::with_capacity(count * count);
        for f in &maps {
            for g in &maps {
                let fg: Vec<usize> = g.iter().map(|&x| f[x]).collect();
                table.push(encode(&fg));
            }
        }
        let monoid = FiniteMonoid::from_flat(count, table)?;
        Ok(FunctionMonoid {
            points,
            monoid: Arc::new(monoid),
            maps,
        })
    }

    /// The submonoid generated by `generators` (identity is element 0).
    pub fn generated(points: usize, generators: &[Vec<usize>], limit: usize) -> Result<Self> {
        let (monoid, maps) = transformation_monoid(points, generators, limit)?;
        Ok(FunctionMonoid {
            points,
            monoid: Arc::new(monoid),
            maps,
        })
    }

    pub fn monoid(&self) -> &Arc<FiniteMonoid> {
        &self.monoid
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn size(&self) -> usize {
        self.maps.len()
    }

    pub fn map(&self, f: usize) -> &[usize] {
        &self.maps[f]
    }

    pub fn maps(&self) -> &[Vec<usize>] {
        &self.maps
    }

    pub fn index_of(&self, map: &[usize]) -> Option<usize> {
        self.maps.iter().position(|m| m == map)
    }

    #[inline]
    pub fn apply(&self, f: usize, x: usize) -> usize {
        self.maps[f][x]
    }

    /// `f(Δ)`.
    pub fn image(&self, f: usize, delta: ValueMask) -> ValueMask {
        mask_indices(delta).fold(0, |acc, x| acc | 1 << self.maps[f][x])
    }

    /// `f⁻¹(Γ)`.
    pub fn preimage(&self, f: usize, gamma: ValueMask) -> ValueMask {
        (0..self.points)
            .filter(|&x| gamma >> self.maps[f][x] & 1 == 1)
            .fold(0, |acc, x| acc | 1 << x)
    }

    pub(crate) fn ideal_where(&self, pred: impl Fn(usize) -> bool) -> LeftIdeal {
        let mut members = FixedBitSet::with_capacity(self.size());
        for f in (0..self.size()).filter(|&f| pred(f)) {
            members.insert(f);
        }
        LeftIdeal::from_closed(self.monoid.clone(), members)
    }
}

/// A finite state space with real-valued quantities taking values in `X`.
#[derive(Clone, Debug)]
pub struct ClassicalSystem {
    states: Vec<String>,
    values: ValueSet,
    quantities: Vec<(String, Vec<usize>)>,
}

impl ClassicalSystem {
    /// `quantities` give, per state, the value of the quantity.
    pub fn new(
        states: Vec<String>,
        values: ValueSet,
        quantities: Vec<(String, Vec<f64>)>,
        eps: f64,
    ) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::Validation("classical system has no states".into()));
        }
        check_unique("state", &states)?;
        let names: Vec<String> = quantities.iter().map(|q| q.0.clone()).collect();
        check_unique("quantity", &names)?;
        let mut resolved = Vec::with_capacity(quantities.len());
        for (name, vals) in quantities {
            if vals.len() != states.len() {
                return Err(Error::Validation(format!(
                    "quantity {name} has {} values for {} states",
                    vals.len(),
                    states.len()
                )));
            }
            let idx = vals
                .iter()
                .map(|&v| {
                    values.index_of(v, eps).ok_or_else(|| {
                        Error::Validation(format!("quantity {name} takes value {v} outside X"))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            resolved.push((name, idx));
        }
        Ok(ClassicalSystem {
            states,
            values,
            quantities: resolved,
        })
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn values(&self) -> &ValueSet {
        &self.values
    }

    pub fn quantity_names(&self) -> impl Iterator<Item = &str> {
        self.quantities.iter().map(|q| q.0.as_str())
    }

    pub fn state(&self, name: &str) -> Result<usize> {
        self.states
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| Error::lookup("state", name))
    }

    pub fn quantity(&self, name: &str) -> Result<usize> {
        self.quantities
            .iter()
            .position(|q| q.0 == name)
            .ok_or_else(|| Error::lookup("quantity", name))
    }

    /// Value index of quantity `a` in state `s`.
    pub fn value_index(&self, s: usize, a: usize) -> Result<usize> {
        let q = self
            .quantities
            .get(a)
            .ok_or_else(|| Error::lookup("quantity", &a.to_string()))?;
        q.1.get(s)
            .copied()
            .ok_or_else(|| Error::lookup("state", &s.to_string()))
    }

    fn check_mask(&self, delta: ValueMask) -> Result<()> {
        if delta & !self.values.full_mask() != 0 {
            return Err(Error::Usage("subset mentions values outside X".into()));
        }
        Ok(())
    }

    /// `Ā(s) ∈ Δ`.
    pub fn classical_truth(&self, s: usize, a: usize, delta: ValueMask) -> Result<bool> {
        self.check_mask(delta)?;
        Ok(delta >> self.value_index(s, a)? & 1 == 1)
    }

    /// `{f | f(Ā(s)) ∈ f(Δ)}`.
    pub fn generalized_valuation(
        &self,
        monoid: &FunctionMonoid,
        s: usize,
        a: usize,
        delta: ValueMask,
    ) -> Result<LeftIdeal> {
        self.check_monoid(monoid)?;
        self.check_mask(delta)?;
        let v = self.value_index(s, a)?;
        Ok(monoid.ideal_where(|f| monoid.image(f, delta) >> monoid.apply(f, v) & 1 == 1))
    }

    /// `B̄(s) ∈ Γ` for an arbitrary map `B̄` given by value indices.
    pub fn e_s_membership(s: usize, b: &[usize], gamma: ValueMask) -> bool {
        gamma >> b[s] & 1 == 1
    }

    fn check_monoid(&self, monoid: &FunctionMonoid) -> Result<()> {
        if monoid.points() != self.values.len() {
            return Err(Error::Usage(format!(
                "function monoid acts on {} values, system has {}",
                monoid.points(),
                self.values.len()
            )));
        }
        Ok(())
    }

    /// The product M-set of quantities (as maps `𝒮 → X`) and subsets of `X`,
    /// generated by the declared quantities.
    pub fn proposition_set(&self, monoid: &FunctionMonoid) -> Result<PropositionSet> {
        self.check_monoid(monoid)?;
        let full = self.values.full_mask();
        let seeds = self
            .quantities
            .iter()
            .flat_map(|q| (0..=full).map(move |g| (q.1.clone(), g)));
        let (set, points) = MSet::orbit_closure(
            monoid.monoid().clone(),
            seeds,
            |f, (b, g): &(Vec<usize>, ValueMask)| {
                (b.iter().map(|&x| monoid.apply(f, x)).collect(), monoid.image(f, *g))
            },
            ORBIT_LIMIT,
        )?;
        Ok(PropositionSet {
            set,
            points,
            seeds_per_quantity: full as usize + 1,
        })
    }
}

fn check_unique(kind: &str, names: &[String]) -> Result<()> {
    for (i, n) in names.iter().enumerate() {
        if names[..i].contains(n) {
            return Err(Error::Validation(format!("{kind} {n} declared twice")));
        }
    }
    Ok(())
}

/// Points `(B̄, Γ)` with the action `f(B̄, Γ) = (f ∘ B̄, f(Γ))`.
#[derive(Clone, Debug)]
pub struct PropositionSet {
    set: MSet,
    points: Vec<(Vec<usize>, ValueMask)>,
    seeds_per_quantity: usize,
}

impl PropositionSet {
    pub fn mset(&self) -> &MSet {
        &self.set
    }

    pub fn points(&self) -> &[(Vec<usize>, ValueMask)] {
        &self.points
    }

    /// The point for declared quantity `a` and subset `delta`.
    pub fn point_of(&self, a: usize, delta: ValueMask) -> usize {
        a * self.seeds_per_quantity + delta as usize
    }

    /// `E^s = {(B̄, Γ) | B̄(s) ∈ Γ}`.
    pub fn e_s(&self, s: usize) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.points.len());
        for (i, (b, g)) in self.points.iter().enumerate() {
            if ClassicalSystem::e_s_membership(s, b, *g) {
                out.insert(i);
            }
        }
        out
    }

    /// `[(Ā, Δ) ∈ E^s]` through the characteristic arrow of `E^s`.
    pub fn e_s_valuation(&self, s: usize, a: usize, delta: ValueMask) -> Result<LeftIdeal> {
        let e = self.e_s(s);
        self.set.truth_in_invariant(self.point_of(a, delta), &e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_state() -> ClassicalSystem {
        ClassicalSystem::new(
            vec!["s0".into(), "s1".into()],
            ValueSet::new(vec![0.0, 1.0]).unwrap(),
            vec![("A".into(), vec![0.0, 1.0]), ("B".into(), vec![1.0, 1.0])],
            1e-9,
        )
        .unwrap()
    }

    #[test]
    fn full_map_monoid() {
        let m = FunctionMonoid::full(2).unwrap();
        assert_eq!(m.size(), 4);
        assert_eq!(m.map(m.monoid().identity()), &[0, 1]);
        assert!(m.monoid().is_associative());
        let m3 = FunctionMonoid::full(3).unwrap();
        assert_eq!(m3.size(), 27);
        assert!(FunctionMonoid::full(5).is_err());
        // f ⋆ g = f ∘ g
        let swap = m.index_of(&[1, 0]).unwrap();
        let c0 = m.index_of(&[0, 0]).unwrap();
        assert_eq!(m.monoid().mul(swap, c0), m.index_of(&[1, 1]).unwrap());
    }

    #[test]
    fn classical_truth_examples() {
        let sys = two_state();
        let a = sys.quantity("A").unwrap();
        assert!(sys.classical_truth(0, a, 0b01).unwrap());
        assert!(!sys.classical_truth(0, a, 0b10).unwrap());
        assert!(sys.classical_truth(1, a, 0b11).unwrap());
        assert!(matches!(sys.quantity("C"), Err(Error::Lookup { .. })));
        assert!(matches!(sys.state("s9"), Err(Error::Lookup { .. })));
    }

    #[test]
    fn generalized_examples() {
        let sys = two_state();
        let m = FunctionMonoid::full(2).unwrap();
        let a = sys.quantity("A").unwrap();
        assert!(sys.generalized_valuation(&m, 0, a, 0b01).unwrap().is_full());
        // Ā(s1) = 1, Δ = {0}: only the constants qualify.
        let got = sys.generalized_valuation(&m, 1, a, 0b01).unwrap();
        let mut want = vec![m.index_of(&[0, 0]).unwrap(), m.index_of(&[1, 1]).unwrap()];
        want.sort();
        assert_eq!(got.elements(), want);
        assert!(sys.generalized_valuation(&m, 1, a, 0).unwrap().is_empty());
    }

    #[test]
    fn arrow_route_matches_direct() {
        let sys = two_state();
        let m = FunctionMonoid::full(2).unwrap();
        let props = sys.proposition_set(&m).unwrap();
        props.mset().check_laws().unwrap();
        for s in 0..2 {
            assert!(props.mset().is_invariant(&props.e_s(s)).unwrap());
            for a in 0..2 {
                for delta in 0..4 {
                    assert_eq!(
                        props.e_s_valuation(s, a, delta).unwrap(),
                        sys.generalized_valuation(&m, s, a, delta).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn coarse_graining() {
        let sys = two_state();
        let m = FunctionMonoid::full(2).unwrap();
        for s in 0..2 {
            for delta in 0..4 {
                let ideal = sys.generalized_valuation(&m, s, 0, delta).unwrap();
                for f in 0..m.size() {
                    let pulled = m.preimage(f, m.image(f, delta));
                    let via = pulled >> sys.value_index(s, 0).unwrap() & 1 == 1;
                    assert_eq!(ideal.contains(f), via);
                }
            }
        }
    }

    #[test]
    fn validation() {
        let x = ValueSet::new(vec![0.0, 1.0]).unwrap();
        assert!(ValueSet::new(vec![1.0, 1.0]).is_err());
        assert!(ValueSet::new(vec![]).is_err());
        assert!(ClassicalSystem::new(vec!["s".into()], x.clone(), vec![("A".into(), vec![2.0])], 1e-9).is_err());
        assert!(ClassicalSystem::new(vec!["s".into()], x.clone(), vec![("A".into(), vec![])], 1e-9).is_err());
        assert_eq!(x.mask_of(&[1.0], 1e-9).unwrap(), 0b10);
        assert!(x.mask_of(&[3.0], 1e-9).is_err());
    }
}
