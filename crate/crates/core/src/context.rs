//! Contexts for contextual truth values: the strings with nonzero reduction,
//! the polarity between rays and strings induced by "Q̂ψ ≠ 0", and sieves on
//! string objects.

use fixedbitset::FixedBitSet;
use num_complex::Complex64;

use crate::algebra::{enumerate_strings, ProjString, DEFAULT_STRING_BUDGET};
use crate::linalg::{hermitian_eig, image_subspace, in_subspace, norm, ray_equal, Ray, Subspace, Vector};
use crate::reduction::Reducer;
use crate::{Error, Result};

/// `Q̂ ≠ 0`, decided by the largest singular value against the null threshold.
pub fn in_sp0(reducer: &Reducer, q: &ProjString) -> Result<bool> {
    let m = reducer.reduce(q)?;
    let gram = &m.adjoint() * &m;
    let top = hermitian_eig(&gram, reducer.tolerance())?
        .eigenvalues()
        .last()
        .copied()
        .unwrap_or(0.0);
    Ok(top.max(0.0).sqrt() > reducer.tolerance().null_threshold)
}

/// All strings of length at most `max_len` with nonzero reduction, shortest first.
#[derive(Clone, Debug)]
pub struct StringUniverse {
    max_len: usize,
    members: Vec<ProjString>,
}

impl StringUniverse {
    pub fn new(reducer: &Reducer, max_len: usize) -> Result<Self> {
        let mut members = Vec::new();
        for q in enumerate_strings(reducer.alphabet().len(), max_len, DEFAULT_STRING_BUDGET)? {
            if in_sp0(reducer, &q)? {
                members.push(q);
            }
        }
        Ok(StringUniverse { max_len, members })
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn members(&self) -> &[ProjString] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn index_of(&self, q: &ProjString) -> Option<usize> {
        self.members.iter().position(|m| m == q)
    }
}

/// A finite list of distinct named rays.
#[derive(Clone, Debug)]
pub struct RaySet {
    names: Vec<String>,
    rays: Vec<Ray>,
}

impl RaySet {
    pub fn new(named: Vec<(String, Ray)>, eps: f64) -> Result<Self> {
        let mut names = Vec::with_capacity(named.len());
        let mut rays: Vec<Ray> = Vec::with_capacity(named.len());
        for (name, ray) in named {
            if names.contains(&name) {
                return Err(Error::Validation(format!("ray {name} listed twice")));
            }
            if let Some(i) = rays.iter().position(|r| r.same(&ray, eps)) {
                return Err(Error::Validation(format!(
                    "rays {} and {name} coincide",
                    names[i]
                )));
            }
            if rays.first().is_some_and(|r| r.dim() != ray.dim()) {
                return Err(Error::Validation("rays differ in dimension".into()));
            }
            names.push(name);
            rays.push(ray);
        }
        Ok(RaySet { names, rays })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn rays(&self) -> &[Ray] {
        &self.rays
    }

    pub fn len(&self) -> usize {
        self.rays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::lookup("ray", name))
    }

    /// Subset of the listed rays by name.
    pub fn select<S: AsRef<str>>(&self, names: &[S]) -> Result<FixedBitSet> {
        let mut s = FixedBitSet::with_capacity(self.len());
        for n in names {
            let i = self.names.iter().position(|m| m == n.as_ref()).ok_or_else(|| {
                Error::Usage(format!("ray {} is not in the ray universe", n.as_ref()))
            })?;
            s.insert(i);
        }
        Ok(s)
    }
}

/// The relation `Q̂ψ ≠ 0` between a string universe `U` and a ray universe
/// `V`, with its two polar maps.
#[derive(Clone, Debug)]
pub struct GaloisContext {
    reducer: Reducer,
    strings: StringUniverse,
    rays: RaySet,
    /// Per string, the rays it does not annihilate.
    rows: Vec<FixedBitSet>,
    /// Per ray, the strings that do not annihilate it.
    cols: Vec<FixedBitSet>,
}

impl GaloisContext {
    pub fn new(reducer: Reducer, strings: StringUniverse, rays: RaySet) -> Result<Self> {
        if rays.rays.iter().any(|r| r.dim() != reducer.dim()) {
            return Err(Error::Usage("ray dimension does not match the alphabet".into()));
        }
        let null = reducer.tolerance().null_threshold;
        let mut rows = vec![FixedBitSet::with_capacity(rays.len()); strings.len()];
        let mut cols = vec![FixedBitSet::with_capacity(strings.len()); rays.len()];
        for (i, q) in strings.members.iter().enumerate() {
            let m = reducer.reduce(q)?;
            for (j, r) in rays.rays.iter().enumerate() {
                if norm(&m.apply(r.representative())) > null {
                    rows[i].insert(j);
                    cols[j].insert(i);
                }
            }
        }
        Ok(GaloisContext {
            reducer,
            strings,
            rays,
            rows,
            cols,
        })
    }

    pub fn strings(&self) -> &StringUniverse {
        &self.strings
    }

    pub fn rays(&self) -> &RaySet {
        &self.rays
    }

    pub fn reducer(&self) -> &Reducer {
        &self.reducer
    }

    pub fn empty_rays(&self) -> FixedBitSet {
        FixedBitSet::with_capacity(self.rays.len())
    }

    pub fn empty_strings(&self) -> FixedBitSet {
        FixedBitSet::with_capacity(self.strings.len())
    }

    fn check(&self, set: &FixedBitSet, len: usize, what: &str) -> Result<()> {
        if set.len() != len {
            return Err(Error::Usage(format!(
                "{what} set has length {}, universe has {len}",
                set.len()
            )));
        }
        Ok(())
    }

    /// `Ξ⁰ = {Q ∈ U | ∀[ψ] ∈ Ξ: Q̂ψ ≠ 0}`.
    pub fn polar_of_rays(&self, xi: &FixedBitSet) -> Result<FixedBitSet> {
        self.check(xi, self.rays.len(), "ray")?;
        let mut out = self.empty_strings();
        for (i, row) in self.rows.iter().enumerate() {
            if xi.is_subset(row) {
                out.insert(i);
            }
        }
        Ok(out)
    }

    /// `J⁰ = {[ψ] ∈ V | ∀Q ∈ J: Q̂ψ ≠ 0}`.
    pub fn polar_of_strings(&self, j: &FixedBitSet) -> Result<FixedBitSet> {
        self.check(j, self.strings.len(), "string")?;
        let mut out = self.empty_rays();
        for (i, col) in self.cols.iter().enumerate() {
            if j.is_subset(col) {
                out.insert(i);
            }
        }
        Ok(out)
    }

    /// `Ξ⁰⁰`.
    pub fn closure_rays(&self, xi: &FixedBitSet) -> Result<FixedBitSet> {
        self.polar_of_strings(&self.polar_of_rays(xi)?)
    }

    /// `J⁰⁰`.
    pub fn closure_strings(&self, j: &FixedBitSet) -> Result<FixedBitSet> {
        self.polar_of_rays(&self.polar_of_strings(j)?)
    }

    /// `Ξ = Ξ⁰⁰`.
    pub fn is_full(&self, xi: &FixedBitSet) -> Result<bool> {
        Ok(self.closure_rays(xi)? == *xi)
    }

    fn require_in(&self, xi: &FixedBitSet, idx: usize) -> Result<()> {
        self.check(xi, self.rays.len(), "ray")?;
        if idx >= self.rays.len() || !xi.contains(idx) {
            return Err(Error::Precondition(format!(
                "ray {} is not in the context",
                self.rays.names.get(idx).map_or("?", String::as_str)
            )));
        }
        Ok(())
    }

    /// `{Q ∈ Ξ⁰ | [Q̂ψ] = [Q̂φ]}` for rays `ψ, φ` of `Ξ`.
    pub fn truth_equal(&self, psi: usize, phi: usize, xi: &FixedBitSet) -> Result<FixedBitSet> {
        self.require_in(xi, psi)?;
        self.require_in(xi, phi)?;
        let polar = self.polar_of_rays(xi)?;
        let a = self.rays.rays[psi].representative();
        let b = self.rays.rays[phi].representative();
        let tol = *self.reducer.tolerance();
        let mut out = self.empty_strings();
        for i in polar.ones() {
            let m = self.reducer.reduce(&self.strings.members[i])?;
            if ray_equal(&m.apply(a), &m.apply(b), &tol)? {
                out.insert(i);
            }
        }
        Ok(out)
    }

    /// `{Q ∈ Ξ⁰ | Q̂ψ ∈ Q̂K}` for a ray `ψ` of `Ξ`.
    pub fn valuation(&self, psi: usize, k: &Subspace, xi: &FixedBitSet) -> Result<FixedBitSet> {
        self.require_in(xi, psi)?;
        let polar = self.polar_of_rays(xi)?;
        let a = self.rays.rays[psi].representative();
        let tol = *self.reducer.tolerance();
        let mut out = self.empty_strings();
        for i in polar.ones() {
            let m = self.reducer.reduce(&self.strings.members[i])?;
            if in_subspace(&m.apply(a), &image_subspace(&m, k, &tol), &tol) {
                out.insert(i);
            }
        }
        Ok(out)
    }
}

/// The arrow `domain → codomain` given by a decomposition `domain = codomain ⋆ tail`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub domain: ProjString,
    pub tail: ProjString,
    pub codomain: ProjString,
}

impl Arrow {
    /// `self` followed by `next`; the tail is `next.tail ⋆ self.tail`.
    pub fn then(&self, next: &Arrow) -> Result<Arrow> {
        if self.codomain != next.domain {
            return Err(Error::Usage("arrows are not composable".into()));
        }
        Ok(Arrow {
            domain: self.domain.clone(),
            tail: next.tail.concat(&self.tail),
            codomain: next.codomain.clone(),
        })
    }
}

/// The `|Q| + 1` arrows out of `Q`, by increasing tail length.
pub fn arrows_out(reducer: &Reducer, q: &ProjString) -> Result<Vec<Arrow>> {
    if !in_sp0(reducer, q)? {
        return Err(Error::Precondition(format!(
            "{} has zero reduction",
            reducer.alphabet().strings().format(q)
        )));
    }
    Ok((0..=q.len())
        .map(|k| Arrow {
            domain: q.clone(),
            tail: q.tail(k),
            codomain: q.head(k),
        })
        .collect())
}

/// `ψ ∈ 𝐑(Q)`, i.e. `Q̂ψ̂ ≠ 0` for the normalised vector.
pub fn presheaf_contains(reducer: &Reducer, q: &ProjString, psi: &[Complex64]) -> Result<bool> {
    let n = norm(psi);
    if n <= reducer.tolerance().null_threshold {
        return Ok(false);
    }
    let v = reducer.apply(q, psi)?;
    Ok(norm(&v) / n > reducer.tolerance().null_threshold)
}

/// `𝐑(S)ψ = Ŝψ` for `ψ ∈ 𝐑(domain)`.
pub fn presheaf_restrict(reducer: &Reducer, arrow: &Arrow, psi: &[Complex64]) -> Result<Vector> {
    if !presheaf_contains(reducer, &arrow.domain, psi)? {
        return Err(Error::Precondition(
            "vector is annihilated by the domain string".into(),
        ));
    }
    reducer.apply(&arrow.tail, psi)
}

/// A sieve on a string `Q`: since the arrows out of `Q` form a chain, it is
/// the set of tails of length at least `min_tail`, or empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sieve {
    context: ProjString,
    min_tail: Option<usize>,
}

impl Sieve {
    pub fn full(context: ProjString) -> Self {
        Sieve {
            context,
            min_tail: Some(0),
        }
    }

    pub fn empty(context: ProjString) -> Self {
        Sieve {
            context,
            min_tail: None,
        }
    }

    /// From a flag per tail length `0..=|Q|`; the flags must be upward closed.
    pub fn from_flags(context: ProjString, flags: &[bool]) -> Result<Self> {
        if flags.len() != context.len() + 1 {
            return Err(Error::Usage(format!(
                "{} flags for {} tails",
                flags.len(),
                context.len() + 1
            )));
        }
        let min_tail = flags.iter().position(|&f| f);
        if let Some(k) = min_tail {
            if flags[k..].iter().any(|&f| !f) {
                return Err(Error::Context(format!(
                    "included tails {flags:?} are not closed under extension"
                )));
            }
        }
        Ok(Sieve { context, min_tail })
    }

    pub fn context(&self) -> &ProjString {
        &self.context
    }

    pub fn min_tail(&self) -> Option<usize> {
        self.min_tail
    }

    pub fn is_full(&self) -> bool {
        self.min_tail == Some(0)
    }

    pub fn is_empty(&self) -> bool {
        self.min_tail.is_none()
    }

    pub fn includes(&self, tail_len: usize) -> bool {
        self.min_tail.is_some_and(|k| k <= tail_len && tail_len <= self.context.len())
    }

    pub fn included_tail_lengths(&self) -> Vec<usize> {
        match self.min_tail {
            Some(k) => (k..=self.context.len()).collect(),
            None => Vec::new(),
        }
    }

    pub fn tails(&self) -> Vec<ProjString> {
        self.included_tail_lengths()
            .into_iter()
            .map(|k| self.context.tail(k))
            .collect()
    }

    fn rank(&self) -> usize {
        self.min_tail.unwrap_or(self.context.len() + 1)
    }

    fn with_rank(&self, r: usize) -> Sieve {
        Sieve {
            context: self.context.clone(),
            min_tail: (r <= self.context.len()).then_some(r),
        }
    }

    fn same_context(&self, other: &Sieve) -> Result<()> {
        if self.context != other.context {
            return Err(Error::Usage("sieves live on different strings".into()));
        }
        Ok(())
    }

    pub fn le(&self, other: &Sieve) -> Result<bool> {
        self.same_context(other)?;
        Ok(self.rank() >= other.rank())
    }

    pub fn meet(&self, other: &Sieve) -> Result<Sieve> {
        self.same_context(other)?;
        Ok(self.with_rank(self.rank().max(other.rank())))
    }

    pub fn join(&self, other: &Sieve) -> Result<Sieve> {
        self.same_context(other)?;
        Ok(self.with_rank(self.rank().min(other.rank())))
    }

    /// In a chain, `a ⇒ b` is the top when `a ≤ b` and `b` otherwise.
    pub fn implies(&self, other: &Sieve) -> Result<Sieve> {
        if self.le(other)? {
            Ok(Sieve::full(self.context.clone()))
        } else {
            Ok(other.clone())
        }
    }
}

fn require_in_context(reducer: &Reducer, q: &ProjString, psi: &[Complex64]) -> Result<()> {
    if !presheaf_contains(reducer, q, psi)? {
        return Err(Error::Context(format!(
            "vector is annihilated by {}",
            reducer.alphabet().strings().format(q)
        )));
    }
    Ok(())
}

fn sieve_by(q: &ProjString, test: impl Fn(&ProjString) -> Result<bool>) -> Result<Sieve> {
    let flags = (0..=q.len())
        .map(|k| test(&q.tail(k)))
        .collect::<Result<Vec<_>>>()?;
    Sieve::from_flags(q.clone(), &flags)
}

/// `{S | [Ŝψ] = [Ŝφ]}` on the arrows out of `Q`, for `ψ, φ ∈ 𝐑(Q)`.
pub fn sieve_truth_equal(reducer: &Reducer, psi: &[Complex64], phi: &[Complex64], q: &ProjString) -> Result<Sieve> {
    require_in_context(reducer, q, psi)?;
    require_in_context(reducer, q, phi)?;
    let tol = *reducer.tolerance();
    sieve_by(q, |s| {
        ray_equal(&reducer.apply(s, psi)?, &reducer.apply(s, phi)?, &tol)
    })
}

/// `{S | Ŝψ ∈ ŜK}` on the arrows out of `Q`, for `ψ ∈ 𝐑(Q)`.
pub fn sieve_valuation(reducer: &Reducer, psi: &[Complex64], k: &Subspace, q: &ProjString) -> Result<Sieve> {
    require_in_context(reducer, q, psi)?;
    if k.ambient() != reducer.dim() {
        return Err(Error::Usage("subspace dimension does not match the alphabet".into()));
    }
    let tol = *reducer.tolerance();
    let unit = crate::linalg::normalize(psi).expect("nonzero");
    sieve_by(q, |s| {
        let m = reducer.reduce(s)?;
        Ok(in_subspace(&m.apply(&unit), &image_subspace(&m, k, &tol), &tol))
    })
}

/// Two contexts in which the same pair of vectors receives different
/// ray-equality sieves.
#[derive(Clone, Debug)]
pub struct ContextualityWitness {
    pub first: Sieve,
    pub second: Sieve,
}

/// Searches the strings up to `max_len` (shortest first) for contexts `Q, Q′`
/// containing both vectors whose ray-equality sieves differ. A pair where one
/// sieve is empty and the other is not is preferred; failing that, any pair
/// whose included tails differ as sets of strings.
pub fn find_contextuality_witness(
    reducer: &Reducer,
    psi: &[Complex64],
    phi: &[Complex64],
    max_len: usize,
) -> Result<Option<ContextualityWitness>> {
    let mut sieves = Vec::new();
    for q in enumerate_strings(reducer.alphabet().len(), max_len, DEFAULT_STRING_BUDGET)? {
        if presheaf_contains(reducer, &q, psi)? && presheaf_contains(reducer, &q, phi)? {
            sieves.push(sieve_truth_equal(reducer, psi, phi, &q)?);
        }
    }
    let status = sieves
        .iter()
        .find(|s| s.is_empty())
        .zip(sieves.iter().find(|s| !s.is_empty()));
    if let Some((a, b)) = status {
        return Ok(Some(ContextualityWitness {
            first: a.clone(),
            second: b.clone(),
        }));
    }
    for (i, a) in sieves.iter().enumerate() {
        for b in &sieves[i + 1..] {
            if a.tails() != b.tails() {
                return Ok(Some(ContextualityWitness {
                    first: a.clone(),
                    second: b.clone(),
                }));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{ComplexMatrix, Projector, TolerancePolicy};
    use crate::reduction::Alphabet;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn tol() -> TolerancePolicy {
        TolerancePolicy::default()
    }

    fn proj(rows: &[&[f64]]) -> Projector {
        Projector::new(ComplexMatrix::from_real(rows).unwrap(), 1e-9).unwrap()
    }

    /// Letters `Pz = diag(1,0)`, `Pplus = ½[[1,1],[1,1]]`, `Pdown = diag(0,1)`.
    fn qubit() -> Reducer {
        let a = Alphabet::projectors(
            vec!["Pz".into(), "Pplus".into(), "Pdown".into()],
            vec![
                proj(&[&[1.0, 0.0], &[0.0, 0.0]]),
                proj(&[&[0.5, 0.5], &[0.5, 0.5]]),
                proj(&[&[0.0, 0.0], &[0.0, 1.0]]),
            ],
        )
        .unwrap();
        Reducer::new(a, tol())
    }

    fn e1() -> Vec<Complex64> {
        vec![c(1.0), c(0.0)]
    }

    fn e2() -> Vec<Complex64> {
        vec![c(0.0), c(1.0)]
    }

    fn rays(r: &[(&str, Vec<Complex64>)]) -> RaySet {
        RaySet::new(
            r.iter()
                .map(|(n, v)| (n.to_string(), Ray::new(v, &tol()).unwrap()))
                .collect(),
            1e-9,
        )
        .unwrap()
    }

    #[test]
    fn sp0_examples() {
        let r = qubit();
        assert!(in_sp0(&r, &ProjString::empty()).unwrap());
        assert!(in_sp0(&r, &ProjString::letter(1)).unwrap());
        assert!(!in_sp0(&r, &ProjString::new(vec![2, 0])).unwrap());
        assert!(in_sp0(&r, &ProjString::new(vec![2, 1, 0])).unwrap());
        let u = StringUniverse::new(&r, 2).unwrap();
        assert!(u.index_of(&ProjString::new(vec![0, 2])).is_none());
        assert_eq!(u.len(), 1 + 3 + 9 - 2);
    }

    #[test]
    fn polar_examples() {
        let r = qubit();
        let u = StringUniverse::new(&r, 2).unwrap();
        let v = rays(&[("up", e1()), ("down", e2()), ("plus", vec![c(1.0), c(1.0)])]);
        let g = GaloisContext::new(r.clone(), u, v).unwrap();
        let everything = g.polar_of_rays(&g.empty_rays()).unwrap();
        assert_eq!(everything.count_ones(..), g.strings().len());
        let down = g.rays().select(&["down"]).unwrap();
        let polar = g.polar_of_rays(&down).unwrap();
        let at = |l: Vec<usize>| g.strings().index_of(&ProjString::new(l)).unwrap();
        assert!(!polar.contains(at(vec![0])));
        assert!(!polar.contains(at(vec![1, 0])));
        assert!(polar.contains(at(vec![1])));
        assert!(polar.contains(at(vec![0, 1])));
        assert!(polar.contains(0));
        let all_rays = g.polar_of_strings(&g.empty_strings()).unwrap();
        assert_eq!(all_rays.count_ones(..), 3);
        let mut pz = g.empty_strings();
        pz.insert(g.strings().index_of(&ProjString::letter(0)).unwrap());
        let p0 = g.polar_of_strings(&pz).unwrap();
        assert_eq!(p0, g.rays().select(&["up", "plus"]).unwrap());
        assert!(g.is_full(&p0).unwrap());
        let all = g.rays().select(&["up", "down", "plus"]).unwrap();
        assert!(g.is_full(&all).unwrap());
    }

    #[test]
    fn context_truth_examples() {
        let r = qubit();
        let u = StringUniverse::new(&r, 2).unwrap();
        let v = rays(&[("up", e1()), ("down", e2())]);
        let g = GaloisContext::new(r, u, v).unwrap();
        let xi = g.rays().select(&["up", "down"]).unwrap();
        let t = g.truth_equal(0, 1, &xi).unwrap();
        assert!(t.contains(g.strings().index_of(&ProjString::letter(1)).unwrap()));
        assert!(!t.contains(0));
        let same = g.truth_equal(0, 0, &xi).unwrap();
        assert_eq!(same, g.polar_of_rays(&xi).unwrap());
        let only_up = g.rays().select(&["up"]).unwrap();
        assert!(matches!(g.truth_equal(0, 1, &only_up), Err(Error::Precondition(_))));
    }

    #[test]
    fn arrows_and_composition() {
        let r = qubit();
        assert_eq!(arrows_out(&r, &ProjString::empty()).unwrap().len(), 1);
        let q = ProjString::new(vec![0, 1]);
        let arrows = arrows_out(&r, &q).unwrap();
        assert_eq!(arrows.len(), 3);
        assert_eq!(arrows[2].codomain, ProjString::empty());
        let q3 = ProjString::new(vec![0, 1, 0]);
        let first = &arrows_out(&r, &q3).unwrap()[1];
        let second = &arrows_out(&r, &first.codomain).unwrap()[1];
        let both = first.then(second).unwrap();
        assert_eq!(both, arrows_out(&r, &q3).unwrap()[2]);
        assert!(matches!(
            arrows_out(&r, &ProjString::new(vec![2, 0])),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn presheaf_restriction_chain() {
        let r = qubit();
        let q = ProjString::new(vec![0, 1]);
        let psi = vec![c(0.3), c(-0.9)];
        let arrows = arrows_out(&r, &q).unwrap();
        let step1 = presheaf_restrict(&r, &arrows[1], &psi).unwrap();
        let next = &arrows_out(&r, &arrows[1].codomain).unwrap()[1];
        let step2 = presheaf_restrict(&r, next, &step1).unwrap();
        let direct = presheaf_restrict(&r, &arrows[2], &psi).unwrap();
        assert!(norm(&crate::linalg::sub(&step2, &direct)) < 1e-15);
        assert!(presheaf_contains(&r, &ProjString::empty(), &e2()).unwrap());
        assert!(presheaf_restrict(&r, &arrows_out(&r, &ProjString::letter(0)).unwrap()[1], &e2()).is_err());
    }

    #[test]
    fn sieve_examples() {
        let r = qubit();
        let q = ProjString::new(vec![0, 1]);
        let s = sieve_truth_equal(&r, &e1(), &e2(), &q).unwrap();
        assert_eq!(s.included_tail_lengths(), vec![1, 2]);
        let full = sieve_truth_equal(&r, &e1(), &[c(-2.0), c(0.0)], &q).unwrap();
        assert!(full.is_full());
        let none = sieve_truth_equal(&r, &e1(), &e2(), &ProjString::empty()).unwrap();
        assert!(none.is_empty());
        let k = Subspace::span(2, &[e1()], &tol());
        assert!(sieve_valuation(&r, &e1(), &k, &q).unwrap().is_full());
        assert!(sieve_valuation(&r, &e2(), &Subspace::zero(2), &ProjString::letter(2))
            .unwrap()
            .is_empty());
        assert!(matches!(
            sieve_truth_equal(&r, &e1(), &e2(), &ProjString::letter(0)),
            Err(Error::Context(_))
        ));
    }

    #[test]
    fn sieve_lattice() {
        let q = ProjString::new(vec![0, 1, 0]);
        let a = Sieve::from_flags(q.clone(), &[false, true, true, true]).unwrap();
        let b = Sieve::from_flags(q.clone(), &[false, false, false, true]).unwrap();
        assert!(b.le(&a).unwrap());
        assert_eq!(a.meet(&b).unwrap(), b);
        assert_eq!(a.join(&b).unwrap(), a);
        assert!(b.implies(&a).unwrap().is_full());
        assert_eq!(a.implies(&b).unwrap(), b);
        assert!(Sieve::from_flags(q, &[true, false, true, true]).is_err());
    }

    #[test]
    fn witness_exists_for_orthogonal_pair() {
        let r = qubit();
        let w = find_contextuality_witness(&r, &e1(), &e2(), 2).unwrap().unwrap();
        assert!(w.first.is_empty());
        assert!(!w.second.is_empty());
    }
}
