//! Finite multisets over opaque string elements.
//!
//! A [`Multiset`] keeps its entries in a `BTreeMap`, so iteration order,
//! equality, hashing and ordering are all canonical. Element names are
//! compared bytewise. Zero multiplicities are never stored.
//!
//! Unions of multisets are sums: `{a} + {a, b} = {a^2, b}`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Characters with a meaning in the text formats; not allowed in element names.
pub const RESERVED_CHARS: &[char] = &['^', '|', '#', '{', '}', '(', ')', ',', ':', '/', '"'];

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Multiset {
    entries: BTreeMap<String, u32>,
}

impl Multiset {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a multiset from `(name, multiplicity)` pairs; repeated names add up.
    pub fn from_counts<I, S>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, u32)>,
        S: Into<String>,
    {
        let mut m = Self::new();
        for (name, count) in pairs {
            let name = name.into();
            validate_name(&name)?;
            m.add(name, count);
        }
        Ok(m)
    }

    /// Builds a multiset from a list of element occurrences.
    pub fn from_elements<I, S>(elements: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self::from_counts(elements.into_iter().map(|e| (e, 1)))
    }

    pub(crate) fn add(&mut self, name: String, count: u32) {
        if count > 0 {
            *self.entries.entry(name).or_insert(0) += count;
        }
    }

    pub fn multiplicity(&self, name: &str) -> u32 {
        self.entries.get(name).copied().unwrap_or(0)
    }

    /// Total number of elements, counted with multiplicity.
    pub fn len(&self) -> usize {
        self.entries.values().map(|&c| c as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of distinct elements.
    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    /// `(name, multiplicity)` in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, u32)> + '_ {
        self.entries.iter().map(|(k, &v)| (k.as_str(), v))
    }

    /// Distinct element names in canonical order.
    pub fn support(&self) -> impl Iterator<Item = &str> + '_ {
        self.entries.keys().map(String::as_str)
    }

    /// Total excess multiplicity: the sum over elements of `multiplicity - 1`.
    pub fn delta(&self) -> usize {
        self.entries.values().map(|&c| c as usize - 1).sum()
    }

    /// True when every multiplicity is 1.
    pub fn is_set(&self) -> bool {
        self.entries.values().all(|&c| c == 1)
    }

    pub fn is_submultiset_of(&self, other: &Multiset) -> bool {
        self.entries.len() <= other.entries.len()
            && self
                .entries
                .iter()
                .all(|(k, &c)| c <= other.multiplicity(k))
    }

    pub fn is_proper_submultiset_of(&self, other: &Multiset) -> bool {
        self.len() < other.len() && self.is_submultiset_of(other)
    }

    /// Multiset sum.
    pub fn sum(&self, other: &Multiset) -> Multiset {
        let mut out = self.clone();
        for (k, &c) in &other.entries {
            out.add(k.clone(), c);
        }
        out
    }

    /// `self - other`, or `None` if `other` is not a submultiset of `self`.
    pub fn checked_sub(&self, other: &Multiset) -> Option<Multiset> {
        if !other.is_submultiset_of(self) {
            return None;
        }
        let entries = self
            .entries
            .iter()
            .filter_map(|(k, &c)| {
                let left = c - other.multiplicity(k);
                (left > 0).then(|| (k.clone(), left))
            })
            .collect();
        Some(Multiset { entries })
    }

    /// Minimum-multiplicity intersection.
    pub fn intersection(&self, other: &Multiset) -> Multiset {
        let entries = self
            .entries
            .iter()
            .filter_map(|(k, &c)| {
                let m = c.min(other.multiplicity(k));
                (m > 0).then(|| (k.clone(), m))
            })
            .collect();
        Multiset { entries }
    }

    /// True when the two multisets have at least one element in common.
    pub fn shares_element(&self, other: &Multiset) -> bool {
        self.entries.keys().any(|k| other.entries.contains_key(k))
    }

    /// `ground - self`.
    pub fn complement_in(&self, ground: &Multiset) -> Result<Multiset> {
        ground
            .checked_sub(self)
            .ok_or_else(|| not_submultiset(self, ground))
    }

    /// The elements of `self` whose multiplicity in `ground` is exactly 1.
    pub fn unique_part(&self, ground: &Multiset) -> Result<Multiset> {
        if !self.is_submultiset_of(ground) {
            return Err(not_submultiset(self, ground));
        }
        let entries = self
            .entries
            .keys()
            .filter(|k| ground.multiplicity(k) == 1)
            .map(|k| (k.clone(), 1))
            .collect();
        Ok(Multiset { entries })
    }

    /// Brace form used in tree labels: `{a^2,b}`, `{}` when empty.
    pub fn to_label(&self) -> String {
        let body: Vec<String> = self.iter().map(|(k, c)| token(k, c)).collect();
        format!("{{{}}}", body.join(","))
    }

    /// Parses the brace form produced by [`Multiset::to_label`].
    pub fn parse_label(text: &str) -> Result<Multiset> {
        let inner = text
            .trim()
            .strip_prefix('{')
            .and_then(|t| t.strip_suffix('}'))
            .ok_or_else(|| Error::InvalidToken {
                token: text.to_string(),
                reason: "label must be enclosed in braces",
            })?;
        let mut m = Multiset::new();
        for tok in inner.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (name, count) = parse_token(tok)?;
            m.add(name, count);
        }
        Ok(m)
    }
}

impl fmt::Display for Multiset {
    /// Literal form `a^2 b c`; the empty multiset prints as `{}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("{}");
        }
        let body: Vec<String> = self.iter().map(|(k, c)| token(k, c)).collect();
        f.write_str(&body.join(" "))
    }
}

impl FromStr for Multiset {
    type Err = Error;

    /// Parses a whitespace-separated literal such as `a^2 b^2 c x x`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut m = Multiset::new();
        if s == "{}" {
            return Ok(m);
        }
        for tok in s.split_whitespace() {
            let (name, count) = parse_token(tok)?;
            m.add(name, count);
        }
        Ok(m)
    }
}

fn token(name: &str, count: u32) -> String {
    if count == 1 {
        name.to_string()
    } else {
        format!("{name}^{count}")
    }
}

/// Parses `name` or `name^k` with `k >= 1`.
pub(crate) fn parse_token(tok: &str) -> Result<(String, u32)> {
    let (name, count) = match tok.split_once('^') {
        None => (tok, 1),
        Some((name, exp)) => {
            let count = exp.parse::<u32>().map_err(|_| Error::InvalidToken {
                token: tok.to_string(),
                reason: "multiplicity must be a positive integer",
            })?;
            if count == 0 {
                return Err(Error::InvalidToken {
                    token: tok.to_string(),
                    reason: "multiplicity must be a positive integer",
                });
            }
            (name, count)
        }
    };
    validate_name(name).map_err(|_| Error::InvalidToken {
        token: tok.to_string(),
        reason: "element names must be nonempty and avoid whitespace and ^|#{}(),:/\"",
    })?;
    Ok((name.to_string(), count))
}

fn validate_name(name: &str) -> Result<()> {
    if name.is_empty() || name.chars().any(|c| c.is_whitespace() || RESERVED_CHARS.contains(&c)) {
        return Err(Error::InvalidToken {
            token: name.to_string(),
            reason: "element names must be nonempty and avoid whitespace and ^|#{}(),:/\"",
        });
    }
    Ok(())
}

fn not_submultiset(part: &Multiset, ground: &Multiset) -> Error {
    Error::NotSubmultiset {
        part: part.to_string(),
        ground: ground.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ms(s: &str) -> Multiset {
        s.parse().unwrap()
    }

    #[test]
    fn delta_examples() {
        assert_eq!(ms("a^2 b^2 c^2 x y").delta(), 3);
        assert_eq!(ms("a b c").delta(), 0);
        assert_eq!(ms("a^2 b^2 c^5 d^2 e^2").delta(), 8);
    }

    #[test]
    fn unique_part_examples() {
        let g = ms("a^2 b^2 c^2 x y");
        assert_eq!(ms("c x").unique_part(&g).unwrap(), ms("x"));
        assert!(ms("a b").unique_part(&g).unwrap().is_empty());
        let set = ms("a b");
        assert_eq!(set.unique_part(&set).unwrap(), set);
        assert!(ms("z").unique_part(&g).is_err());
    }

    #[test]
    fn submultiset_examples() {
        assert!(ms("a b").is_submultiset_of(&ms("a b d")));
        assert!(ms("a b").is_proper_submultiset_of(&ms("a b d")));
        assert!(!ms("x^2").is_submultiset_of(&ms("x y z")));
        assert!(ms("a b").is_submultiset_of(&ms("a b")));
        assert!(!ms("a b").is_proper_submultiset_of(&ms("a b")));
    }

    #[test]
    fn complement_examples() {
        assert_eq!(
            ms("a b").complement_in(&ms("a^2 b c d")).unwrap(),
            ms("a c d")
        );
        let g = ms("a^2 b^2 c^2 x y");
        assert!(g.complement_in(&g).unwrap().is_empty());
        assert_eq!(ms("c x").complement_in(&g).unwrap(), ms("a a b b c y"));
        assert!(ms("a^3").complement_in(&g).is_err());
    }

    #[test]
    fn literal_and_label_forms() {
        let m = ms("x x b a^2");
        assert_eq!(m.to_string(), "a^2 b x^2");
        assert_eq!(m.to_label(), "{a^2,b,x^2}");
        assert_eq!(Multiset::parse_label("{a^2, b,x^2}").unwrap(), m);
        assert_eq!(Multiset::parse_label("{}").unwrap(), Multiset::new());
        assert_eq!(Multiset::new().to_string(), "{}");
        assert!("a^0".parse::<Multiset>().is_err());
        assert!("a|b".parse::<Multiset>().is_err());
        assert!("a^x".parse::<Multiset>().is_err());
        // numerals are ordinary names
        assert_eq!(ms("10 2 2").multiplicity("2"), 2);
    }

    /// Every multiset with support in {a,b,c} and multiplicities up to 2.
    fn small_multisets() -> Vec<Multiset> {
        let mut out = Vec::new();
        for a in 0..3u32 {
            for b in 0..3u32 {
                for c in 0..3u32 {
                    out.push(Multiset::from_counts([("a", a), ("b", b), ("c", c)]).unwrap());
                }
            }
        }
        out
    }

    #[test]
    fn proper_submultiset_is_strict_partial_order() {
        let all = small_multisets();
        for x in &all {
            assert!(!x.is_proper_submultiset_of(x));
            for y in &all {
                if x.is_proper_submultiset_of(y) {
                    assert!(!y.is_proper_submultiset_of(x));
                }
                for z in &all {
                    if x.is_proper_submultiset_of(y) && y.is_proper_submultiset_of(z) {
                        assert!(x.is_proper_submultiset_of(z));
                    }
                }
            }
        }
    }

    #[test]
    fn delta_zero_iff_set() {
        for m in small_multisets() {
            assert_eq!(m.delta() == 0, m.is_set());
        }
    }

    fn arb_multiset() -> impl Strategy<Value = Multiset> {
        proptest::collection::btree_map("[a-e]|x[0-9]", 1u32..4, 0..5)
            .prop_map(|entries| Multiset { entries })
    }

    proptest! {
        #[test]
        fn literal_round_trip(m in arb_multiset()) {
            let text = m.to_string();
            let back: Multiset = text.parse().unwrap();
            prop_assert_eq!(&back, &m);
            prop_assert_eq!(back.to_string(), text);
            prop_assert_eq!(Multiset::parse_label(&m.to_label()).unwrap(), m);
        }

        #[test]
        fn complement_is_involution(g in arb_multiset(), pick in proptest::collection::vec(0u32..4, 5)) {
            let part = Multiset::from_counts(
                g.iter().zip(pick).map(|((k, c), p)| (k.to_string(), p.min(c))),
            ).unwrap();
            let comp = part.complement_in(&g).unwrap();
            prop_assert_eq!(comp.complement_in(&g).unwrap(), part.clone());
            prop_assert_eq!(part.sum(&comp), g);
        }
    }
}
