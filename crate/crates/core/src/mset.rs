//! Sets with a left monoid action and the ideal-valued truth values they carry.

use std::collections::HashMap;
use std::hash::Hash;
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::algebra::{FiniteMonoid, LeftIdeal};
use crate::{Error, Result};

/// A finite carrier `0..points` with a left action of a finite monoid,
/// stored as a dense table `act(m, x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MSet {
    monoid: Arc<FiniteMonoid>,
    points: usize,
    action: Vec<usize>,
}

impl MSet {
    /// `rows[m][x]` is the image of point `x` under element `m`. Both action
    /// laws are checked exhaustively.
    pub fn new(monoid: Arc<FiniteMonoid>, rows: &[Vec<usize>]) -> Result<Self> {
        if rows.len() != monoid.size() {
            return Err(Error::Structural(format!(
                "action has {} rows, monoid has {} elements",
                rows.len(),
                monoid.size()
            )));
        }
        let points = rows.first().map_or(0, Vec::len);
        let mut action = Vec::with_capacity(points * rows.len());
        for (m, row) in rows.iter().enumerate() {
            if row.len() != points {
                return Err(Error::Structural(format!(
                    "action row {m} has {} entries, expected {points}",
                    row.len()
                )));
            }
            if let Some(&bad) = row.iter().find(|&&y| y >= points) {
                return Err(Error::Structural(format!(
                    "action row {m} maps to {bad}, outside the carrier"
                )));
            }
            action.extend_from_slice(row);
        }
        let set = MSet {
            monoid,
            points,
            action,
        };
        set.check_laws()?;
        Ok(set)
    }

    /// Left multiplication of the monoid on itself.
    pub fn regular(monoid: Arc<FiniteMonoid>) -> Self {
        let n = monoid.size();
        let action = (0..n)
            .flat_map(|m| (0..n).map(move |x| (m, x)))
            .map(|(m, x)| monoid.mul(m, x))
            .collect();
        MSet {
            monoid,
            points: n,
            action,
        }
    }

    /// The truth object: the given left ideals acted on by `ℓ_m`.
    ///
    /// `ideals` must be closed under the action (the full list from
    /// `enumerate_left_ideals` is). Point `i` is `ideals[i]`.
    pub fn truth_object(monoid: Arc<FiniteMonoid>, ideals: &[LeftIdeal]) -> Result<Self> {
        let index: HashMap<&LeftIdeal, usize> =
            ideals.iter().enumerate().map(|(i, j)| (j, i)).collect();
        let mut action = Vec::with_capacity(monoid.size() * ideals.len());
        for m in 0..monoid.size() {
            for ideal in ideals {
                let moved = ideal.act(m)?;
                let &i = index.get(&moved).ok_or_else(|| {
                    Error::Precondition("ideal list is not closed under the action".into())
                })?;
                action.push(i);
            }
        }
        Ok(MSet {
            monoid,
            points: ideals.len(),
            action,
        })
    }

    /// The sub-`M`-set generated by `seeds` under `act`, with points
    /// numbered in breadth-first discovery order.
    ///
    /// `act(m, p)` must define a left action; this is not re-checked here
    /// (call [`MSet::check_laws`] when in doubt). `limit` bounds the orbit size.
    pub fn orbit_closure<P, F>(
        monoid: Arc<FiniteMonoid>,
        seeds: impl IntoIterator<Item = P>,
        act: F,
        limit: usize,
    ) -> Result<(Self, Vec<P>)>
    where
        P: Clone + Eq + Hash,
        F: Fn(usize, &P) -> P,
    {
        let mut points: Vec<P> = Vec::new();
        let mut index: HashMap<P, usize> = HashMap::new();
        let push = |p: P, points: &mut Vec<P>, index: &mut HashMap<P, usize>| -> Result<usize> {
            if let Some(&i) = index.get(&p) {
                return Ok(i);
            }
            if points.len() >= limit {
                return Err(Error::Capacity {
                    what: "orbit size",
                    needed: points.len() as u128 + 1,
                    limit: limit as u128,
                });
            }
            index.insert(p.clone(), points.len());
            points.push(p);
            Ok(points.len() - 1)
        };
        for s in seeds {
            push(s, &mut points, &mut index)?;
        }
        let n = monoid.size();
        let mut images: Vec<Vec<usize>> = Vec::new();
        let mut cursor = 0;
        while cursor < points.len() {
            let p = points[cursor].clone();
            let row = (0..n)
                .map(|m| push(act(m, &p), &mut points, &mut index))
                .collect::<Result<Vec<_>>>()?;
            images.push(row);
            cursor += 1;
        }
        let count = points.len();
        let mut action = vec![0; n * count];
        for (x, row) in images.iter().enumerate() {
            for (m, &y) in row.iter().enumerate() {
                action[m * count + x] = y;
            }
        }
        Ok((
            MSet {
                monoid,
                points: count,
                action,
            },
            points,
        ))
    }

    /// Checks `1x = x` and `m(nx) = (mn)x` for all points and elements.
    pub fn check_laws(&self) -> Result<()> {
        let e = self.monoid.identity();
        for x in 0..self.points {
            if self.act(e, x) != x {
                return Err(Error::Validation(format!(
                    "identity moves point {x} to {}",
                    self.act(e, x)
                )));
            }
        }
        let n = self.monoid.size();
        for m in 0..n {
            for k in 0..n {
                let mk = self.monoid.mul(m, k);
                for x in 0..self.points {
                    if self.act(m, self.act(k, x)) != self.act(mk, x) {
                        return Err(Error::Validation(format!(
                            "m(nx) ≠ (mn)x for m={m}, n={k}, x={x}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn monoid(&self) -> &Arc<FiniteMonoid> {
        &self.monoid
    }

    pub fn points(&self) -> usize {
        self.points
    }

    #[inline]
    pub fn act(&self, m: usize, x: usize) -> usize {
        self.action[m * self.points + x]
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        if self.points == 0 {
            return vec![Vec::new(); self.monoid.size()];
        }
        self.action.chunks(self.points).map(<[usize]>::to_vec).collect()
    }

    pub fn subset(&self, members: impl IntoIterator<Item = usize>) -> Result<FixedBitSet> {
        let mut s = FixedBitSet::with_capacity(self.points);
        for x in members {
            self.check_point(x)?;
            s.insert(x);
        }
        Ok(s)
    }

    /// `mK = {mx | x ∈ K}`.
    pub fn image(&self, m: usize, k: &FixedBitSet) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.points);
        for x in k.ones() {
            out.insert(self.act(m, x));
        }
        out
    }

    fn check_point(&self, x: usize) -> Result<()> {
        if x < self.points {
            Ok(())
        } else {
            Err(Error::Usage(format!(
                "point {x} is not in a carrier of size {}",
                self.points
            )))
        }
    }

    fn check_subset(&self, s: &FixedBitSet) -> Result<()> {
        if s.len() != self.points {
            return Err(Error::Usage(format!(
                "subset has length {}, carrier has {} points",
                s.len(),
                self.points
            )));
        }
        Ok(())
    }

    fn ideal_where(&self, pred: impl Fn(usize) -> bool) -> LeftIdeal {
        let n = self.monoid.size();
        let mut members = FixedBitSet::with_capacity(n);
        for m in (0..n).filter(|&m| pred(m)) {
            members.insert(m);
        }
        LeftIdeal::from_closed(self.monoid.clone(), members)
    }

    /// `mJ ⊆ J` for every `m`.
    pub fn is_invariant(&self, j: &FixedBitSet) -> Result<bool> {
        self.check_subset(j)?;
        let n = self.monoid.size();
        Ok(j.ones().all(|x| (0..n).all(|m| j.contains(self.act(m, x)))))
    }

    /// `χ^J(x) = {m | mx ∈ J}` for every point, in point order.
    pub fn characteristic_arrow(&self, j: &FixedBitSet) -> Result<Vec<LeftIdeal>> {
        if !self.is_invariant(j)? {
            return Err(Error::Precondition("subset is not M-invariant".into()));
        }
        Ok((0..self.points)
            .map(|x| self.ideal_where(|m| j.contains(self.act(m, x))))
            .collect())
    }

    /// `[x ∈ J] = {m | mx ∈ J}` for an invariant subset `J`.
    pub fn truth_in_invariant(&self, x: usize, j: &FixedBitSet) -> Result<LeftIdeal> {
        self.check_point(x)?;
        if !self.is_invariant(j)? {
            return Err(Error::Precondition("subset is not M-invariant".into()));
        }
        Ok(self.ideal_where(|m| j.contains(self.act(m, x))))
    }

    /// `[x ∈ K] = {m | mx ∈ mK}` for an arbitrary subset `K`.
    ///
    /// Not the same as [`MSet::truth_in_invariant`] even when `K` happens to
    /// be invariant, since `mK` can be a proper subset of `K`.
    pub fn truth_in_subset(&self, x: usize, k: &FixedBitSet) -> Result<LeftIdeal> {
        self.check_point(x)?;
        self.check_subset(k)?;
        Ok(self.ideal_where(|m| self.image(m, k).contains(self.act(m, x))))
    }

    /// `[K₁ ⊆ K₂] = {m | mK₁ ⊆ mK₂}`.
    pub fn truth_subset_leq(&self, k1: &FixedBitSet, k2: &FixedBitSet) -> Result<LeftIdeal> {
        self.check_subset(k1)?;
        self.check_subset(k2)?;
        Ok(self.ideal_where(|m| self.image(m, k1).is_subset(&self.image(m, k2))))
    }

    /// `[x = y] = {m | mx = my}`.
    pub fn truth_equal(&self, x: usize, y: usize) -> Result<LeftIdeal> {
        self.check_point(x)?;
        self.check_point(y)?;
        Ok(self.ideal_where(|m| self.act(m, x) == self.act(m, y)))
    }

    /// `[x ∈ 𝐊] = {m | mx ∈ K_m}`.
    pub fn truth_in_family(&self, x: usize, family: &KFamily) -> Result<LeftIdeal> {
        self.check_point(x)?;
        family.check_base(self)?;
        Ok(self.ideal_where(|m| family.sets[m].contains(self.act(m, x))))
    }

    /// All invariant subsets, as bit sets, in mask order. Carrier must be ≤ 20 points.
    pub fn invariant_subsets(&self) -> Result<Vec<FixedBitSet>> {
        if self.points > 20 {
            return Err(Error::Capacity {
                what: "carrier size for subset enumeration",
                needed: self.points as u128,
                limit: 20,
            });
        }
        let mut out = Vec::new();
        for mask in 0u32..(1u32 << self.points) {
            let s = mask_to_set(mask, self.points);
            if self.is_invariant(&s)? {
                out.push(s);
            }
        }
        Ok(out)
    }
}

fn mask_to_set(mask: u32, n: usize) -> FixedBitSet {
    let mut s = FixedBitSet::with_capacity(n);
    for i in 0..n {
        if mask >> i & 1 == 1 {
            s.insert(i);
        }
    }
    s
}

/// `J^χ = {x | χ(x) = M}`: the invariant subset classified by an equivariant map.
pub fn classified_subset(chi: &[LeftIdeal]) -> FixedBitSet {
    let mut s = FixedBitSet::with_capacity(chi.len());
    for (x, i) in chi.iter().enumerate() {
        if i.is_full() {
            s.insert(x);
        }
    }
    s
}

/// Whether `chi(mx) = ℓ_m(chi(x))` for all `m` and `x`.
pub fn is_equivariant(set: &MSet, chi: &[LeftIdeal]) -> Result<bool> {
    if chi.len() != set.points() {
        return Err(Error::Usage("map must assign an ideal to every point".into()));
    }
    for x in 0..set.points() {
        for m in 0..set.monoid().size() {
            if chi[set.act(m, x)] != chi[x].act(m)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A family `{K_m}` of subsets indexed by monoid elements with `m'K_m ⊆ K_{m'm}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KFamily {
    points: usize,
    sets: Vec<FixedBitSet>,
}

impl KFamily {
    pub fn new(base: &MSet, sets: Vec<FixedBitSet>) -> Result<Self> {
        let n = base.monoid().size();
        if sets.len() != n {
            return Err(Error::Structural(format!(
                "family has {} sets, monoid has {n} elements",
                sets.len()
            )));
        }
        for s in &sets {
            base.check_subset(s)?;
        }
        for m in 0..n {
            for mp in 0..n {
                let target = &sets[base.monoid().mul(mp, m)];
                if !base.image(mp, &sets[m]).is_subset(target) {
                    return Err(Error::Precondition(format!(
                        "family violates m'K_m ⊆ K_(m'm) at m={m}, m'={mp}"
                    )));
                }
            }
        }
        Ok(KFamily {
            points: base.points(),
            sets,
        })
    }

    /// `K_m := mK`, valid for any subset `K`.
    pub fn from_subset(base: &MSet, k: &FixedBitSet) -> Result<Self> {
        base.check_subset(k)?;
        let sets = (0..base.monoid().size()).map(|m| base.image(m, k)).collect();
        Self::new(base, sets)
    }

    pub fn constant(base: &MSet, k: &FixedBitSet) -> Result<Self> {
        Self::new(base, vec![k.clone(); base.monoid().size()])
    }

    pub fn sets(&self) -> &[FixedBitSet] {
        &self.sets
    }

    fn check_base(&self, base: &MSet) -> Result<()> {
        if self.points != base.points() || self.sets.len() != base.monoid().size() {
            return Err(Error::Usage("family belongs to a different M-set".into()));
        }
        Ok(())
    }

    /// `λ^𝐊(x, m) = {m' | m'x ∈ K_{m'm}}`, indexed `[x][m]`.
    pub fn to_lambda(&self, base: &MSet) -> Result<Lambda> {
        self.check_base(base)?;
        let monoid = base.monoid();
        let n = monoid.size();
        let values = (0..base.points())
            .map(|x| {
                (0..n)
                    .map(|m| {
                        base.ideal_where(|mp| self.sets[monoid.mul(mp, m)].contains(base.act(mp, x)))
                    })
                    .collect()
            })
            .collect();
        Ok(Lambda { values })
    }
}

/// A map `X × M → LM`, indexed `[x][m]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lambda {
    values: Vec<Vec<LeftIdeal>>,
}

impl Lambda {
    pub fn new(values: Vec<Vec<LeftIdeal>>) -> Self {
        Lambda { values }
    }

    pub fn get(&self, x: usize, m: usize) -> &LeftIdeal {
        &self.values[x][m]
    }

    /// Equivariance for the action `m'(x, m) = (m'x, m'm)` on `X × M`.
    pub fn is_equivariant(&self, base: &MSet) -> Result<bool> {
        let n = base.monoid().size();
        if self.values.len() != base.points() || self.values.iter().any(|r| r.len() != n) {
            return Err(Error::Usage("lambda does not match the M-set".into()));
        }
        for x in 0..base.points() {
            for m in 0..n {
                for mp in 0..n {
                    let lhs = &self.values[base.act(mp, x)][base.monoid().mul(mp, m)];
                    if *lhs != self.values[x][m].act(mp)? {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    /// `K^λ_m = {x | λ(x, m) = M}`.
    pub fn to_family(&self, base: &MSet) -> Result<KFamily> {
        if !self.is_equivariant(base)? {
            return Err(Error::Precondition("lambda is not equivariant".into()));
        }
        let n = base.monoid().size();
        let sets = (0..n)
            .map(|m| {
                let mut s = FixedBitSet::with_capacity(base.points());
                for x in 0..base.points() {
                    if self.values[x][m].is_full() {
                        s.insert(x);
                    }
                }
                s
            })
            .collect();
        KFamily::new(base, sets)
    }
}
