//! Ground sets and bitmask subsets.

use std::fmt;
use std::ops::{BitAnd, BitOr, Not, Sub};

use crate::error::{Error, Result};

/// Largest ground set accepted by default.
pub const MAX_ELEMENTS: usize = 26;

/// A subset of a ground set, bit `i` standing for element `i`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Subset(pub u32);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn singleton(i: usize) -> Subset {
        Subset(1 << i)
    }

    pub fn from_elements<I: IntoIterator<Item = usize>>(it: I) -> Subset {
        Subset(it.into_iter().fold(0, |m, i| m | (1 << i)))
    }

    /// Coordinate position of a non-empty subset in a dense rank vector.
    pub fn index(self) -> usize {
        debug_assert!(self.0 != 0);
        self.0 as usize - 1
    }

    pub fn from_index(idx: usize) -> Subset {
        Subset(idx as u32 + 1)
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn meets(self, other: Subset) -> bool {
        self.0 & other.0 != 0
    }

    pub fn with(self, i: usize) -> Subset {
        Subset(self.0 | 1 << i)
    }

    pub fn without(self, i: usize) -> Subset {
        Subset(self.0 & !(1 << i))
    }

    /// Element indices in increasing order.
    pub fn elements(self) -> impl Iterator<Item = usize> {
        let mut m = self.0;
        std::iter::from_fn(move || {
            if m == 0 {
                None
            } else {
                let i = m.trailing_zeros() as usize;
                m &= m - 1;
                Some(i)
            }
        })
    }

    /// All subsets of `self`, the empty set included, in increasing mask order.
    pub fn subsets(self) -> impl Iterator<Item = Subset> {
        let full = self.0;
        let mut cur = Some(0u32);
        std::iter::from_fn(move || {
            let c = cur?;
            cur = if c == full {
                None
            } else {
                Some(((c | !full).wrapping_add(1)) & full)
            };
            Some(Subset(c))
        })
    }
}

impl BitOr for Subset {
    type Output = Subset;
    fn bitor(self, o: Subset) -> Subset {
        Subset(self.0 | o.0)
    }
}

impl BitAnd for Subset {
    type Output = Subset;
    fn bitand(self, o: Subset) -> Subset {
        Subset(self.0 & o.0)
    }
}

impl Sub for Subset {
    type Output = Subset;
    fn sub(self, o: Subset) -> Subset {
        Subset(self.0 & !o.0)
    }
}

impl Not for Subset {
    type Output = Subset;
    fn not(self) -> Subset {
        Subset(!self.0)
    }
}

/// An ordered list of distinct element labels.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GroundSet {
    labels: Vec<String>,
}

impl GroundSet {
    pub fn new<S: AsRef<str>>(labels: &[S]) -> Result<GroundSet> {
        let labels: Vec<String> = labels.iter().map(|s| s.as_ref().to_string()).collect();
        if labels.is_empty() {
            return Err(Error::Ground("no elements".into()));
        }
        if labels.len() > MAX_ELEMENTS {
            return Err(Error::Ground(format!(
                "{} elements exceeds the cap of {MAX_ELEMENTS}",
                labels.len()
            )));
        }
        for (i, l) in labels.iter().enumerate() {
            if l.is_empty() || !l.chars().all(|c| c.is_alphanumeric() || c == '\'' || c == '_') {
                return Err(Error::Ground(format!("bad label `{l}`")));
            }
            if labels[..i].contains(l) {
                return Err(Error::LabelClash(l.clone()));
            }
        }
        Ok(GroundSet { labels })
    }

    /// Ground set labelled by single letters from `a`.
    pub fn letters(n: usize) -> Result<GroundSet> {
        if n > MAX_ELEMENTS {
            return Err(Error::Ground(format!("{n} elements exceeds the cap")));
        }
        let labels: Vec<String> = (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
        GroundSet::new(&labels)
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

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn full(&self) -> Subset {
        Subset(((1u64 << self.len()) - 1) as u32)
    }

    /// Number of non-empty subsets, i.e. the dimension of rank vectors.
    pub fn dim(&self) -> usize {
        (1usize << self.len()) - 1
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Non-empty subsets in increasing mask order.
    pub fn nonempty_subsets(&self) -> impl Iterator<Item = Subset> {
        (1..=self.full().0).map(Subset)
    }

    /// Parse a concatenation of labels such as `acd` or `a1b2`; separators
    /// (spaces, commas) are also accepted. Longest label match wins.
    pub fn parse_subset(&self, text: &str) -> Result<Subset> {
        Ok(Subset::from_elements(self.parse_elements(text)?))
    }

    /// Like [`GroundSet::parse_subset`] but keeps the written order.
    pub fn parse_elements(&self, text: &str) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        for word in text.split(|c: char| c.is_whitespace() || c == ',') {
            let mut rest = word;
            while !rest.is_empty() {
                let best = self
                    .labels
                    .iter()
                    .enumerate()
                    .filter(|(_, l)| rest.starts_with(l.as_str()))
                    .max_by_key(|(_, l)| l.len());
                match best {
                    Some((i, l)) => {
                        if !out.contains(&i) {
                            out.push(i);
                        }
                        rest = &rest[l.len()..];
                    }
                    None => return Err(Error::OutOfGround(text.to_string())),
                }
            }
        }
        Ok(out)
    }

    pub fn element(&self, label: &str) -> Result<usize> {
        self.index_of(label)
            .ok_or_else(|| Error::OutOfGround(label.to_string()))
    }

    /// Concatenated label name of a subset; the empty set prints as `{}`.
    pub fn name(&self, s: Subset) -> String {
        if s.is_empty() {
            return "{}".to_string();
        }
        s.elements().map(|i| self.labels[i].as_str()).collect()
    }

    /// Ground set extended by fresh labels.
    pub fn extended<S: AsRef<str>>(&self, extra: &[S]) -> Result<GroundSet> {
        let mut labels = self.labels.clone();
        labels.extend(extra.iter().map(|s| s.as_ref().to_string()));
        GroundSet::new(&labels)
    }

    /// The labels of a subset, as a new ground set in the original order.
    pub fn restricted(&self, s: Subset) -> Result<GroundSet> {
        let labels: Vec<&str> = s.elements().map(|i| self.labels[i].as_str()).collect();
        GroundSet::new(&labels)
    }

    /// True when all labels are one character, so subset names are unambiguous.
    pub fn single_char_labels(&self) -> bool {
        self.labels.iter().all(|l| l.chars().count() == 1)
    }

    /// Subset name, separated by spaces when labels are longer than one character.
    pub fn display(&self, s: Subset) -> String {
        if self.single_char_labels() || s.len() <= 1 {
            self.name(s)
        } else {
            s.elements()
                .map(|i| self.labels[i].as_str())
                .collect::<Vec<_>>()
                .join(",")
        }
    }
}

impl fmt::Display for GroundSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.labels.join(" "))
    }
}

/// Projection of a subset mask: bit `i` of the input goes to bit `map[i]`.
pub fn map_subset(s: Subset, map: &[usize]) -> Subset {
    Subset::from_elements(s.elements().map(|i| map[i]))
}
