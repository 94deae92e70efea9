//! Natural-number arithmetic on Grundy values: `mex`, the ρ-th excluded
//! value, and nim addition.
//!
//! Only short games are modelled, so every "ordinal" here is a natural number
//! represented as [`Nat`].

use std::fmt;

use serde::{Deserialize, Serialize};

/// Grundy values are naturals; transfinite values never arise for short games.
pub type Nat = u64;

/// A finite set of naturals, stored sorted and deduplicated.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct GrundySet {
    values: Vec<Nat>,
}

impl GrundySet {
    pub const fn new() -> Self {
        GrundySet { values: Vec::new() }
    }

    /// `{0, 1, ..., n - 1}`, the Grundy set of the nim heap of size `n`.
    pub fn initial_segment(n: Nat) -> Self {
        GrundySet { values: (0..n).collect() }
    }

    /// Builds a set from values that are already strictly ascending.
    ///
    /// Returns `None` if the input is not strictly ascending.
    pub fn from_sorted(values: Vec<Nat>) -> Option<Self> {
        if values.windows(2).all(|w| w[0] < w[1]) {
            Some(GrundySet { values })
        } else {
            None
        }
    }

    /// Builds a set from signed values, failing on any negative entry.
    pub fn try_from_signed<I: IntoIterator<Item = i128>>(iter: I) -> Result<Self, i128> {
        let mut values = Vec::new();
        for v in iter {
            values.push(Nat::try_from(v).map_err(|_| v)?);
        }
        Ok(values.into_iter().collect())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn contains(&self, v: Nat) -> bool {
        self.values.binary_search(&v).is_ok()
    }

    pub fn max(&self) -> Option<Nat> {
        self.values.last().copied()
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = Nat> + ExactSizeIterator + '_ {
        self.values.iter().copied()
    }

    pub fn as_slice(&self) -> &[Nat] {
        &self.values
    }

    pub fn insert(&mut self, v: Nat) -> bool {
        match self.values.binary_search(&v) {
            Ok(_) => false,
            Err(pos) => {
                self.values.insert(pos, v);
                true
            }
        }
    }

    pub fn union(&self, other: &GrundySet) -> GrundySet {
        let (a, b) = (&self.values, &other.values);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push(a[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        GrundySet { values: out }
    }

    pub fn mex(&self) -> Nat {
        mex(self)
    }

    pub fn ex(&self, rho: Nat) -> Nat {
        ex(rho, self)
    }

    pub fn into_vec(self) -> Vec<Nat> {
        self.values
    }
}

impl FromIterator<Nat> for GrundySet {
    fn from_iter<I: IntoIterator<Item = Nat>>(iter: I) -> Self {
        let mut values: Vec<Nat> = iter.into_iter().collect();
        values.sort_unstable();
        values.dedup();
        GrundySet { values }
    }
}

impl From<Vec<Nat>> for GrundySet {
    fn from(values: Vec<Nat>) -> Self {
        values.into_iter().collect()
    }
}

impl<'de> Deserialize<'de> for GrundySet {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        Vec::<Nat>::deserialize(de).map(GrundySet::from)
    }
}

impl fmt::Debug for GrundySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.values.iter()).finish()
    }
}

impl fmt::Display for GrundySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, v) in self.values.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}

/// Least natural number not in `s`.
pub fn mex(s: &GrundySet) -> Nat {
    // Sorted and deduplicated: the first index whose value differs from it is the gap.
    s.values.iter().enumerate().find(|&(k, &v)| v != k as Nat).map_or(s.values.len() as Nat, |(k, _)| k as Nat)
}

/// The ρ-th value (counting from zero) missing from `s`; `ex(0, s) == mex(s)`.
///
/// Walks the gaps of `s` instead of repeatedly taking `mex` of a growing
/// union, so the cost is `O(|s|)`.
pub fn ex(rho: Nat, s: &GrundySet) -> Nat {
    // Before the k-th member (value v) there are v - k excluded values.
    let mut remaining = rho;
    let mut next = 0;
    for (k, &v) in s.values.iter().enumerate() {
        let gap = v - next;
        if remaining < gap {
            return next + remaining;
        }
        remaining -= gap;
        next = v + 1;
        debug_assert_eq!(next - (k as Nat + 1), rho - remaining);
    }
    next + remaining
}

/// Nimber addition: bitwise xor.
#[inline]
pub fn nim_add(a: Nat, b: Nat) -> Nat {
    a ^ b
}
