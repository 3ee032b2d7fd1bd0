//! Ground sets and bundles.
//!
//! A [`GroundSet`] is an ordered list of up to 24 distinct element labels.
//! A [`Bundle`] is a subset of a ground set, stored as a bit vector: bit `i`
//! set means the element with index `i` is a member. All iteration orders in
//! the crate follow the ground set's element order, so every "first found"
//! witness is reproducible.

use std::fmt;

/// Hard cap on ground-set size: every bundle fits a `u32` and full `2^n`
/// table enumeration stays tractable.
pub const MAX_ELEMENTS: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroundSetError {
    TooLarge {
        n: usize,
    },
    DuplicateLabel {
        label: String,
    },
    UnknownLabel {
        label: String,
    },
    /// Labels must be nonempty and comma-free so the canonical
    /// comma-joined set keys stay unambiguous.
    BadLabel {
        label: String,
    },
}

impl fmt::Display for GroundSetError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroundSetError::TooLarge { n } => {
                write!(f, "ground set has {n} elements, maximum is {MAX_ELEMENTS}")
            }
            GroundSetError::DuplicateLabel { label } => {
                write!(f, "duplicate element label {label:?}")
            }
            GroundSetError::UnknownLabel { label } => {
                write!(f, "unknown element label {label:?}")
            }
            GroundSetError::BadLabel { label } => {
                write!(f, "element label {label:?} is empty or contains a comma")
            }
        }
    }
}

impl std::error::Error for GroundSetError {}

/// The finite set of elements everything else is built over.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundSet {
    labels: Vec<String>,
}

impl GroundSet {
    pub fn new<I, S>(labels: I) -> Result<Self, GroundSetError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.len() > MAX_ELEMENTS {
            return Err(GroundSetError::TooLarge { n: labels.len() });
        }
        for (i, a) in labels.iter().enumerate() {
            if a.is_empty() || a.contains(',') {
                return Err(GroundSetError::BadLabel { label: a.clone() });
            }
            if labels[..i].contains(a) {
                return Err(GroundSetError::DuplicateLabel { label: a.clone() });
            }
        }
        Ok(GroundSet { labels })
    }

    /// Ground set `{"1", "2", ..., "n"}`, handy in tests and generators.
    pub fn numbered(n: usize) -> Self {
        GroundSet::new((1..=n).map(|i| i.to_string())).expect("numbered ground set")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, index: u8) -> &str {
        &self.labels[index as usize]
    }

    pub fn index_of(&self, label: &str) -> Result<u8, GroundSetError> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(|i| i as u8)
            .ok_or_else(|| GroundSetError::UnknownLabel {
                label: label.to_string(),
            })
    }

    /// The bundle containing every element.
    pub fn full(&self) -> Bundle {
        Bundle::full(self.len())
    }

    pub fn contains_bundle(&self, b: Bundle) -> bool {
        b.is_subset(self.full())
    }

    /// All `2^n` bundles in ascending bit-vector order.
    pub fn bundles(&self) -> impl Iterator<Item = Bundle> {
        (0u32..(1u32 << self.len())).map(Bundle)
    }

    pub fn bundle_of_labels<'a, I>(&self, labels: I) -> Result<Bundle, GroundSetError>
    where
        I: IntoIterator<Item = &'a str>,
    {
        let mut b = Bundle::EMPTY;
        for l in labels {
            b = b.with(self.index_of(l)?);
        }
        Ok(b)
    }

    /// Renders `{a,b}` with members in ground order; the empty bundle is `{}`.
    pub fn render(&self, b: Bundle) -> String {
        let mut out = String::from("{");
        for (k, i) in b.iter().enumerate() {
            if k > 0 {
                out.push(',');
            }
            out.push_str(self.label(i));
        }
        out.push('}');
        out
    }

    /// Canonical string key for a bundle: member labels sorted
    /// lexicographically, joined by commas; the empty bundle is `""`.
    pub fn key(&self, b: Bundle) -> String {
        let mut labels: Vec<&str> = b.iter().map(|i| self.label(i)).collect();
        labels.sort_unstable();
        labels.join(",")
    }
}

/// A subset of a ground set, as an n-bit vector.
///
/// Bundles are context-free: they only make sense next to the ground set they
/// were built from. Mixing bundles from different ground sets is not detected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Bundle(pub u32);

impl Bundle {
    pub const EMPTY: Bundle = Bundle(0);

    pub fn full(n: usize) -> Bundle {
        debug_assert!(n <= MAX_ELEMENTS);
        if n == 0 {
            Bundle(0)
        } else {
            Bundle((1u32 << n) - 1)
        }
    }

    pub fn singleton(i: u8) -> Bundle {
        Bundle(1 << i)
    }

    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: u8) -> bool {
        self.0 & (1 << i) != 0
    }

    pub fn with(self, i: u8) -> Bundle {
        Bundle(self.0 | (1 << i))
    }

    pub fn without(self, i: u8) -> Bundle {
        Bundle(self.0 & !(1 << i))
    }

    pub fn union(self, other: Bundle) -> Bundle {
        Bundle(self.0 | other.0)
    }

    pub fn inter(self, other: Bundle) -> Bundle {
        Bundle(self.0 & other.0)
    }

    pub fn minus(self, other: Bundle) -> Bundle {
        Bundle(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Bundle) -> bool {
        self.0 & !other.0 == 0
    }

    /// Member indices in ground order (ascending).
    pub fn iter(self) -> BundleIter {
        BundleIter(self.0)
    }

    /// All subsets of `self`, ascending in bit-vector order.
    pub fn subsets(self) -> SubsetIter {
        SubsetIter {
            mask: self.0,
            next: Some(0),
        }
    }
}

pub struct BundleIter(u32);

impl Iterator for BundleIter {
    type Item = u8;

    fn next(&mut self) -> Option<u8> {
        if self.0 == 0 {
            None
        } else {
            let i = self.0.trailing_zeros() as u8;
            self.0 &= self.0 - 1;
            Some(i)
        }
    }
}

/// Carry-rippler subset iteration within a fixed mask.
pub struct SubsetIter {
    mask: u32,
    next: Option<u32>,
}

impl Iterator for SubsetIter {
    type Item = Bundle;

    fn next(&mut self) -> Option<Bundle> {
        let cur = self.next?;
        self.next = if cur == self.mask {
            None
        } else {
            Some(cur.wrapping_sub(self.mask) & self.mask)
        };
        Some(Bundle(cur))
    }
}
