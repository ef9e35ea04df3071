//! Splits (bipartitions) of a multiset and indexed split systems.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multiset::Multiset;

/// Which stored part of a split a value refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Small,
    Large,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Small => Side::Large,
            Side::Large => Side::Small,
        }
    }
}

/// An unordered bipartition `A | B` of a ground multiset.
///
/// Stored in canonical orientation: `small` has fewer elements, ties are
/// broken by the multiset ordering. `A | B` and `B | A` therefore compare
/// equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Split {
    ground: Multiset,
    small: Multiset,
    large: Multiset,
}

impl Split {
    /// Builds a split from both sides, checking that they are nonempty and
    /// sum to `ground`.
    pub fn new(ground: &Multiset, a: Multiset, b: Multiset) -> Result<Split> {
        if a.is_empty() || b.is_empty() {
            return Err(Error::EmptyPart);
        }
        if &a.sum(&b) != ground {
            return Err(Error::SidesDoNotSumToGround {
                left: a.to_string(),
                right: b.to_string(),
                ground: ground.to_string(),
            });
        }
        let (small, large) = if (a.len(), &a) <= (b.len(), &b) {
            (a, b)
        } else {
            (b, a)
        };
        Ok(Split {
            ground: ground.clone(),
            small,
            large,
        })
    }

    /// The split `part | ground - part`.
    pub fn from_part(ground: &Multiset, part: Multiset) -> Result<Split> {
        let rest = part.complement_in(ground)?;
        Split::new(ground, part, rest)
    }

    pub fn ground(&self) -> &Multiset {
        &self.ground
    }

    pub fn small(&self) -> &Multiset {
        &self.small
    }

    pub fn large(&self) -> &Multiset {
        &self.large
    }

    pub fn part(&self, side: Side) -> &Multiset {
        match side {
            Side::Small => &self.small,
            Side::Large => &self.large,
        }
    }

    pub fn parts(&self) -> [&Multiset; 2] {
        [&self.small, &self.large]
    }

    /// Element count of the smaller part.
    pub fn size(&self) -> usize {
        self.small.len()
    }

    /// Whether `part` is one of the two sides.
    pub fn has_part(&self, part: &Multiset) -> bool {
        &self.small == part || &self.large == part
    }
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} | {}", self.small, self.large)
    }
}

/// Whether two splits admit parts `A`, `B` that fit side by side in the
/// ground, i.e. `A + B` is a submultiset of it. On a set ground this is the
/// classical `A ∩ B = ∅` test.
///
/// Note that a duplicated split `S, S` always passes (`A + Ā` is the ground)
/// even though `{S, S}` need not be compatible as a system.
pub fn pairwise_compatible(s1: &Split, s2: &Split) -> Result<bool> {
    if s1.ground != s2.ground {
        return Err(Error::GroundMismatch);
    }
    Ok(s1.parts().iter().any(|a| {
        s2.parts()
            .iter()
            .any(|b| a.sum(b).is_submultiset_of(&s1.ground))
    }))
}

/// An indexed sequence of splits over one ground multiset.
///
/// Duplicates are kept as distinct entries. Indices are 0-based in the API
/// and printed 1-based (`S1`, `S2`, ...).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SplitSystem {
    ground: Multiset,
    splits: Vec<Split>,
}

impl SplitSystem {
    pub fn new(ground: Multiset, splits: Vec<Split>) -> Result<SplitSystem> {
        if splits.iter().any(|s| s.ground != ground) {
            return Err(Error::GroundMismatch);
        }
        Ok(SplitSystem { ground, splits })
    }

    /// Convenience constructor from one part per split.
    pub fn from_parts<I>(ground: &Multiset, parts: I) -> Result<SplitSystem>
    where
        I: IntoIterator<Item = Multiset>,
    {
        let splits = parts
            .into_iter()
            .map(|p| Split::from_part(ground, p))
            .collect::<Result<Vec<_>>>()?;
        SplitSystem::new(ground.clone(), splits)
    }

    pub fn empty(ground: Multiset) -> SplitSystem {
        SplitSystem {
            ground,
            splits: Vec::new(),
        }
    }

    pub fn ground(&self) -> &Multiset {
        &self.ground
    }

    pub fn splits(&self) -> &[Split] {
        &self.splits
    }

    pub fn len(&self) -> usize {
        self.splits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.splits.is_empty()
    }

    pub fn get(&self, index: usize) -> Result<&Split> {
        self.splits.get(index).ok_or(Error::IndexOutOfRange {
            index,
            len: self.splits.len(),
        })
    }

    /// The subsystem formed by the given indices, in the given order.
    pub fn subsystem(&self, indices: &[usize]) -> Result<SplitSystem> {
        let splits = indices
            .iter()
            .map(|&i| self.get(i).cloned())
            .collect::<Result<Vec<_>>>()?;
        Ok(SplitSystem {
            ground: self.ground.clone(),
            splits,
        })
    }

    /// The subsystem picked out by a bitmask over indices.
    pub fn subsystem_mask(&self, mask: u64) -> SplitSystem {
        let splits = self
            .splits
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, s)| s.clone())
            .collect();
        SplitSystem {
            ground: self.ground.clone(),
            splits,
        }
    }

    /// The splits sorted canonically; two systems are equal as multisets of
    /// splits iff these agree.
    pub fn sorted_splits(&self) -> Vec<Split> {
        let mut v = self.splits.clone();
        v.sort();
        v
    }

    /// True when no split occurs twice.
    pub fn is_duplicate_free(&self) -> bool {
        let sorted = self.sorted_splits();
        sorted.windows(2).all(|w| w[0] != w[1])
    }

    /// True when all pairs of splits pass [`pairwise_compatible`].
    pub fn is_pairwise_compatible(&self) -> bool {
        self.splits.iter().enumerate().all(|(i, s)| {
            self.splits[i + 1..]
                .iter()
                .all(|t| pairwise_compatible(s, t).unwrap_or(false))
        })
    }
}

impl fmt::Display for SplitSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.splits.iter().map(|s| s.to_string()).collect();
        write!(f, "{{{}}} on {}", body.join(", "), self.ground)
    }
}
