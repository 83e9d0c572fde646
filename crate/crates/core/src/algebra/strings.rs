use std::fmt;

use crate::{Error, Result};

/// A finite string of letters from a projector alphabet.
///
/// Letters are stored in display order `(R_p, …, R_1)`: the leftmost letter
/// is applied last, so the reduction is the operator product read left to
/// right. The empty string is the monoid unit.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjString(Vec<usize>);

impl ProjString {
    pub fn empty() -> Self {
        ProjString(Vec::new())
    }

    pub fn new(letters: Vec<usize>) -> Self {
        ProjString(letters)
    }

    pub fn letter(l: usize) -> Self {
        ProjString(vec![l])
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `self ⋆ other`: the letters of `self` followed by those of `other`,
    /// so `other` acts first.
    pub fn concat(&self, other: &ProjString) -> ProjString {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.0);
        letters.extend_from_slice(&other.0);
        ProjString(letters)
    }

    /// Prepends a single letter: `(p) ⋆ self`.
    pub fn prepend(&self, p: usize) -> ProjString {
        ProjString::letter(p).concat(self)
    }

    /// The rightmost `k` letters, i.e. the first `k` operations applied.
    pub fn tail(&self, k: usize) -> ProjString {
        let k = k.min(self.len());
        ProjString(self.0[self.len() - k..].to_vec())
    }

    /// What remains after removing the tail of length `k`: `self = head(k) ⋆ tail(k)`.
    pub fn head(&self, k: usize) -> ProjString {
        let k = k.min(self.len());
        ProjString(self.0[..self.len() - k].to_vec())
    }

    /// The string without its leftmost letter.
    pub fn without_first(&self) -> ProjString {
        ProjString(self.0.get(1..).unwrap_or_default().to_vec())
    }
}

impl fmt::Display for ProjString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// The free monoid on a named projector alphabet under concatenation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjStringMonoid {
    alphabet: Vec<String>,
}

impl ProjStringMonoid {
    pub fn new(alphabet: Vec<String>) -> Result<Self> {
        for (i, a) in alphabet.iter().enumerate() {
            if alphabet[..i].contains(a) {
                return Err(Error::Structural(format!("duplicate letter `{a}`")));
            }
        }
        Ok(ProjStringMonoid { alphabet })
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn size(&self) -> usize {
        self.alphabet.len()
    }

    pub fn unit(&self) -> ProjString {
        ProjString::empty()
    }

    pub fn concat(&self, q: &ProjString, r: &ProjString) -> ProjString {
        q.concat(r)
    }

    /// Builds a string from letter names in display order.
    pub fn string<S: AsRef<str>>(&self, names: &[S]) -> Result<ProjString> {
        names
            .iter()
            .map(|n| {
                self.alphabet
                    .iter()
                    .position(|a| a == n.as_ref())
                    .ok_or_else(|| Error::lookup("projector", n.as_ref()))
            })
            .collect::<Result<Vec<_>>>()
            .map(ProjString)
    }

    pub fn format(&self, q: &ProjString) -> String {
        let parts: Vec<&str> = q.0.iter().map(|&l| self.alphabet[l].as_str()).collect();
        format!("({})", parts.join(","))
    }

    pub fn enumerate(&self, max_len: usize) -> Result<StringIter> {
        enumerate_strings(self.size(), max_len, super::DEFAULT_STRING_BUDGET)
    }
}

/// `Σ_{k ≤ max_len} alphabet^k`, or `None` on overflow.
pub fn string_count(alphabet: usize, max_len: usize) -> Option<u128> {
    let mut total: u128 = 0;
    let mut power: u128 = 1;
    for k in 0..=max_len {
        total = total.checked_add(power)?;
        if k < max_len {
            power = power.checked_mul(alphabet as u128)?;
        }
    }
    Some(total)
}

/// All strings of length at most `max_len`, shortest first and in
/// lexicographic letter order within a length.
pub fn enumerate_strings(alphabet: usize, max_len: usize, budget: u128) -> Result<StringIter> {
    let needed = string_count(alphabet, max_len).unwrap_or(u128::MAX);
    if needed > budget {
        return Err(Error::Capacity {
            what: "string enumeration",
            needed,
            limit: budget,
        });
    }
    Ok(StringIter {
        alphabet,
        max_len,
        current: Some(Vec::new()),
    })
}

#[derive(Clone, Debug)]
pub struct StringIter {
    alphabet: usize,
    max_len: usize,
    current: Option<Vec<usize>>,
}

impl Iterator for StringIter {
    type Item = ProjString;

    fn next(&mut self) -> Option<ProjString> {
        let cur = self.current.take()?;
        let out = ProjString(cur.clone());
        // Advance an odometer; roll over into the next length.
        let mut next = cur;
        let mut i = next.len();
        loop {
            if i == 0 {
                let len = next.len() + 1;
                if len > self.max_len || self.alphabet == 0 {
                    self.current = None;
                } else {
                    self.current = Some(vec![0; len]);
                }
                break;
            }
            i -= 1;
            next[i] += 1;
            if next[i] < self.alphabet {
                self.current = Some(next);
                break;
            }
            next[i] = 0;
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_law_and_display_order() {
        let m = ProjStringMonoid::new(vec!["Q1".into(), "Q2".into()]).unwrap();
        let r = m.string(&["Q2", "Q1"]).unwrap();
        assert_eq!(m.concat(&m.unit(), &r), r);
        assert_eq!(m.concat(&r, &m.unit()), r);
        let q2 = m.string(&["Q2"]).unwrap();
        let q1 = m.string(&["Q1"]).unwrap();
        assert_eq!(m.format(&q2.concat(&q1)), "(Q2,Q1)");
    }

    #[test]
    fn enumeration_small_cases() {
        let got: Vec<ProjString> = enumerate_strings(1, 2, 100).unwrap().collect();
        assert_eq!(
            got,
            vec![ProjString::empty(), ProjString::new(vec![0]), ProjString::new(vec![0, 0])]
        );
        let got: Vec<ProjString> = enumerate_strings(2, 1, 100).unwrap().collect();
        assert_eq!(got.len(), 3);
        assert_eq!(enumerate_strings(3, 4, 1000).unwrap().count(), 121);
        assert_eq!(string_count(3, 4), Some(121));
    }

    #[test]
    fn enumeration_budget() {
        assert!(matches!(
            enumerate_strings(4, 4, 100),
            Err(Error::Capacity { needed: 341, .. })
        ));
        assert!(enumerate_strings(usize::MAX, 40, 1 << 20).is_err());
    }

    #[test]
    fn empty_alphabet_yields_only_unit() {
        let got: Vec<ProjString> = enumerate_strings(0, 3, 10).unwrap().collect();
        assert_eq!(got, vec![ProjString::empty()]);
    }

    #[test]
    fn head_tail_split() {
        let q = ProjString::new(vec![2, 1, 0]);
        for k in 0..=3 {
            assert_eq!(q.head(k).concat(&q.tail(k)), q);
            assert_eq!(q.tail(k).len(), k);
        }
        assert_eq!(q.tail(1), ProjString::letter(0));
    }

    #[test]
    fn unknown_letter_is_lookup_error() {
        let m = ProjStringMonoid::new(vec!["P".into()]).unwrap();
        assert!(matches!(m.string(&["X"]), Err(Error::Lookup { .. })));
        assert!(ProjStringMonoid::new(vec!["P".into(), "P".into()]).is_err());
    }
}
