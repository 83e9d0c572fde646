use std::collections::{BTreeSet, HashMap};

use crate::{Error, Result};

/// Largest order accepted by [`enumerate_monoids`]. Order 5 already needs
/// 5^16 candidate tables.
const MAX_ENUMERATED_ORDER: usize = 4;

/// A finite monoid given by its multiplication table.
///
/// Elements are the indices `0..size`; `mul(a, b)` is the product `a·b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteMonoid {
    size: usize,
    table: Vec<usize>,
    identity: usize,
    names: Option<Vec<String>>,
}

fn flatten(rows: &[Vec<usize>]) -> Result<(usize, Vec<usize>)> {
    let size = rows.len();
    if size == 0 {
        return Err(Error::Structural("a monoid needs at least one element".into()));
    }
    let mut flat = Vec::with_capacity(size * size);
    for (r, row) in rows.iter().enumerate() {
        if row.len() != size {
            return Err(Error::Structural(format!(
                "row {r} has {} entries, expected {size}",
                row.len()
            )));
        }
        for (c, &v) in row.iter().enumerate() {
            if v >= size {
                return Err(Error::Structural(format!(
                    "entry [{r}][{c}] = {v} is not an element index below {size}"
                )));
            }
            flat.push(v);
        }
    }
    Ok((size, flat))
}

fn associativity_violation(size: usize, t: &[usize]) -> Option<(usize, usize, usize)> {
    for a in 0..size {
        for b in 0..size {
            let ab = t[a * size + b];
            for c in 0..size {
                if t[ab * size + c] != t[a * size + t[b * size + c]] {
                    return Some((a, b, c));
                }
            }
        }
    }
    None
}

fn find_identity(size: usize, t: &[usize]) -> Option<usize> {
    (0..size).find(|&e| (0..size).all(|x| t[e * size + x] == x && t[x * size + e] == x))
}

/// Checks `(ab)c = a(bc)` over every triple of a raw table.
///
/// Fails with a structural error when the table is ragged or has entries
/// outside `0..n`.
pub fn verify_associativity(rows: &[Vec<usize>]) -> Result<bool> {
    let (size, flat) = flatten(rows)?;
    Ok(associativity_violation(size, &flat).is_none())
}

impl FiniteMonoid {
    /// Builds a monoid from a row-major table, locating the identity.
    pub fn from_table(rows: &[Vec<usize>]) -> Result<Self> {
        let (size, table) = flatten(rows)?;
        Self::from_flat(size, table)
    }

    pub(crate) fn from_flat(size: usize, table: Vec<usize>) -> Result<Self> {
        if let Some((a, b, c)) = associativity_violation(size, &table) {
            return Err(Error::NonAssociative { a, b, c });
        }
        let identity = find_identity(size, &table).ok_or(Error::NoIdentity)?;
        Ok(FiniteMonoid {
            size,
            table,
            identity,
            names: None,
        })
    }

    /// Attaches display names to the elements.
    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.size {
            return Err(Error::Structural(format!(
                "{} names given for {} elements",
                names.len(),
                self.size
            )));
        }
        let distinct: BTreeSet<&String> = names.iter().collect();
        if distinct.len() != names.len() {
            return Err(Error::Structural("element names must be distinct".into()));
        }
        self.names = Some(names);
        Ok(self)
    }

    /// The trivial monoid `{1}`.
    pub fn trivial() -> Self {
        FiniteMonoid {
            size: 1,
            table: vec![0],
            identity: 0,
            names: None,
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.size + b]
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.size).map(<[usize]>::to_vec).collect()
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    /// Display label of an element: its name if one was given, else its index.
    pub fn label(&self, element: usize) -> String {
        match &self.names {
            Some(n) => n[element].clone(),
            None => element.to_string(),
        }
    }

    pub fn is_associative(&self) -> bool {
        associativity_violation(self.size, &self.table).is_none()
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.size).all(|a| (0..self.size).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Relabels the elements by `perm` (old index → new index).
    fn relabel(&self, perm: &[usize]) -> Vec<usize> {
        let n = self.size;
        let mut out = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                out[perm[a] * n + perm[b]] = perm[self.mul(a, b)];
            }
        }
        out
    }

    /// Smallest relabelled table over all permutations sending the identity to 0.
    pub fn canonical_form(&self) -> FiniteMonoid {
        let n = self.size;
        let others: Vec<usize> = (0..n).filter(|&x| x != self.identity).collect();
        let mut best: Option<Vec<usize>> = None;
        for_each_permutation(others.len(), &mut |p: &[usize]| {
            let mut perm = vec![0; n];
            for (slot, &old) in others.iter().enumerate() {
                perm[old] = p[slot] + 1;
            }
            perm[self.identity] = 0;
            let t = self.relabel(&perm);
            if best.as_ref().map_or(true, |b| t < *b) {
                best = Some(t);
            }
        });
        FiniteMonoid {
            size: n,
            table: best.unwrap_or_else(|| self.table.clone()),
            identity: 0,
            names: None,
        }
    }

    /// Direct product with componentwise multiplication; element `(a, b)` has index `a * other.size + b`.
    pub fn product(&self, other: &FiniteMonoid) -> FiniteMonoid {
        let (n, m) = (self.size, other.size);
        let size = n * m;
        let mut table = vec![0; size * size];
        for a in 0..size {
            for b in 0..size {
                let (a1, a2) = (a / m, a % m);
                let (b1, b2) = (b / m, b % m);
                table[a * size + b] = self.mul(a1, b1) * m + other.mul(a2, b2);
            }
        }
        FiniteMonoid {
            size,
            table,
            identity: self.identity * m + other.identity,
            names: None,
        }
    }
}

fn for_each_permutation(k: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec(items: &mut Vec<usize>, start: usize, f: &mut dyn FnMut(&[usize])) {
        if start == items.len() {
            f(items);
            return;
        }
        for i in start..items.len() {
            items.swap(start, i);
            rec(items, start + 1, f);
            items.swap(start, i);
        }
    }
    let mut items: Vec<usize> = (0..k).collect();
    rec(&mut items, 0, f);
}

/// All monoids of the given order up to isomorphism, in canonical form,
/// sorted by table.
///
/// Brute force over every table with identity `0`; orders above 4 are
/// rejected with a capacity error.
pub fn enumerate_monoids(order: usize) -> Result<Vec<FiniteMonoid>> {
    if order == 0 || order > MAX_ENUMERATED_ORDER {
        return Err(Error::Capacity {
            what: "monoid enumeration order",
            needed: order as u128,
            limit: MAX_ENUMERATED_ORDER as u128,
        });
    }
    let n = order;
    // Free cells are the products of two non-identity elements.
    let free: Vec<usize> = (1..n)
        .flat_map(|a| (1..n).map(move |b| a * n + b))
        .collect();
    let mut table = vec![0; n * n];
    for x in 0..n {
        table[x] = x;
        table[x * n] = x;
    }
    let total = (n as u64).pow(free.len() as u32);
    let mut seen: HashMap<Vec<usize>, FiniteMonoid> = HashMap::new();
    for code in 0..total {
        let mut c = code;
        for &cell in &free {
            table[cell] = (c % n as u64) as usize;
            c /= n as u64;
        }
        if associativity_violation(n, &table).is_some() {
            continue;
        }
        let m = FiniteMonoid {
            size: n,
            table: table.clone(),
            identity: 0,
            names: None,
        };
        let canon = m.canonical_form();
        seen.entry(canon.table.clone()).or_insert(canon);
    }
    let mut out: Vec<FiniteMonoid> = seen.into_values().collect();
    out.sort_by(|a, b| a.table.cmp(&b.table));
    Ok(out)
}

/// The submonoid of `Map(X, X)` generated by `generators`, for `X = 0..points`.
///
/// Composition follows `(f⋆g)(x) = f(g(x))`. Returns the monoid together with
/// the map realising each element; element 0 is the identity map and the
/// rest follow in breadth-first discovery order. `limit` caps the number of
/// elements.
pub fn transformation_monoid(
    points: usize,
    generators: &[Vec<usize>],
    limit: usize,
) -> Result<(FiniteMonoid, Vec<Vec<usize>>)> {
    for g in generators {
        if g.len() != points || g.iter().any(|&v| v >= points) {
            return Err(Error::Structural(format!(
                "generator {g:?} is not a map on {points} points"
            )));
        }
    }
    let identity: Vec<usize> = (0..points).collect();
    let mut maps = vec![identity.clone()];
    let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(identity, 0)]);
    let mut frontier = 0;
    while frontier < maps.len() {
        for g in generators {
            let composed: Vec<usize> = maps[frontier].iter().map(|&x| g[x]).collect();
            if !index.contains_key(&composed) {
                if maps.len() >= limit {
                    return Err(Error::Capacity {
                        what: "transformation monoid elements",
                        needed: maps.len() as u128 + 1,
                        limit: limit as u128,
                    });
                }
                index.insert(composed.clone(), maps.len());
                maps.push(composed);
            }
        }
        frontier += 1;
    }
    let n = maps.len();
    let mut table = vec![0; n * n];
    for (a, f) in maps.iter().enumerate() {
        for (b, g) in maps.iter().enumerate() {
            let fg: Vec<usize> = g.iter().map(|&x| f[x]).collect();
            table[a * n + b] = index[&fg];
        }
    }
    let monoid = FiniteMonoid {
        size: n,
        table,
        identity: 0,
        names: None,
    };
    Ok((monoid, maps))
}
