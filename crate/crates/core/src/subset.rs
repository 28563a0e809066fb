//! Subsets of `[d]` as bitmasks, and the invariants of triples of subsets.
//!
//! Element `i` of `[d]` (1-based) is stored in bit `i - 1`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported degree.
pub const MAX_DEGREE: usize = 16;

/// A subset of `[d]`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Subset(pub u32);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    /// The full set `[d]`.
    pub fn full(degree: usize) -> Subset {
        Subset(mask(degree))
    }

    /// Builds a subset from 1-based element labels.
    pub fn from_elements(elements: &[usize], degree: usize) -> Result<Subset> {
        let mut bits = 0u32;
        for &e in elements {
            if e == 0 || e > degree {
                return Err(Error::ElementOutOfRange {
                    element: e as i64,
                    degree,
                });
            }
            bits |= 1 << (e - 1);
        }
        Ok(Subset(bits))
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// 1-based elements in increasing order.
    pub fn elements(self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.len());
        let mut b = self.0;
        while b != 0 {
            out.push(b.trailing_zeros() as usize + 1);
            b &= b - 1;
        }
        out
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, element: usize) -> bool {
        (1..=32).contains(&element) && self.0 & (1 << (element - 1)) != 0
    }

    pub fn complement(self, degree: usize) -> Subset {
        Subset(!self.0 & mask(degree))
    }

    pub fn union(self, other: Subset) -> Subset {
        Subset(self.0 | other.0)
    }

    pub fn intersection(self, other: Subset) -> Subset {
        Subset(self.0 & other.0)
    }

    pub fn difference(self, other: Subset) -> Subset {
        Subset(self.0 & !other.0)
    }

    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    /// True when no bit at or above `degree` is set.
    pub fn fits(self, degree: usize) -> bool {
        self.0 & !mask(degree) == 0
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.elements().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

pub(crate) fn mask(degree: usize) -> u32 {
    if degree >= 32 {
        u32::MAX
    } else {
        (1u32 << degree) - 1
    }
}

/// Orbit invariant of a triple `(a, b, c)` under simultaneous relabeling:
/// `(|a|, |b|, |c|, |a∩b|, |a∩c|, |b∩c|, |a∩b∩c|)`.
#[derive(
    Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default, Serialize, Deserialize,
)]
pub struct TripleType(pub [u8; 7]);

impl TripleType {
    pub fn sizes(&self) -> [u8; 7] {
        self.0
    }

    /// `|b ∩ c|`
    pub fn bc(&self) -> u8 {
        self.0[5]
    }

    /// `|a ∩ b ∩ c|`
    pub fn abc(&self) -> u8 {
        self.0[6]
    }

    /// Checks the containment constraints between the entries.
    pub fn is_consistent(&self) -> bool {
        let [a, b, c, ab, ac, bc, abc] = self.0;
        ab <= a.min(b) && ac <= a.min(c) && bc <= b.min(c) && abc <= ab.min(ac).min(bc)
    }

    /// Whether triples of this type are triangles: each set lies in the union of
    /// the other two. Counting `a \ (b ∪ c)` by inclusion–exclusion gives the test.
    pub fn is_triangle(&self) -> bool {
        let [a, b, c, ab, ac, bc, abc] = self.0.map(i32::from);
        a - ab - ac + abc == 0 && b - ab - bc + abc == 0 && c - ac - bc + abc == 0
    }
}

pub fn triple_invariant(a: Subset, b: Subset, c: Subset) -> TripleType {
    let n = |s: Subset| s.len() as u8;
    TripleType([
        n(a),
        n(b),
        n(c),
        n(a.intersection(b)),
        n(a.intersection(c)),
        n(b.intersection(c)),
        n(a.intersection(b).intersection(c)),
    ])
}

/// `a ⊂ b ∪ c`, `b ⊂ a ∪ c` and `c ⊂ a ∪ b`.
pub fn is_triangle(a: Subset, b: Subset, c: Subset) -> bool {
    a.is_subset_of(b.union(c)) && b.is_subset_of(a.union(c)) && c.is_subset_of(a.union(b))
}

/// Calls `f(b, c, |a ∩ b ∩ c|)` for every triangle `(a, b, c)` with `b, c ⊂ [d]`.
///
/// Every element of `a` lies in exactly one of `a∩b∖c`, `a∩c∖b`, `a∩b∩c`, and every
/// element outside `a` lies in neither or in `b∩c∖a`, so there are
/// `3^|a| 2^(d-|a|)` triangles.
#[inline]
pub fn for_each_triangle(a: Subset, degree: usize, mut f: impl FnMut(Subset, Subset, u32)) {
    let a = a.0;
    let outside = !a & mask(degree);
    // x = a∩b∩c
    let mut x = a;
    loop {
        let rest = a & !x;
        let xc = x.count_ones();
        // y = a∩b∖c, the remainder of `rest` goes to c only
        let mut y = rest;
        loop {
            let z_only_c = rest & !y;
            // w = b∩c∖a
            let mut w = outside;
            loop {
                f(Subset(x | y | w), Subset(x | z_only_c | w), xc);
                if w == 0 {
                    break;
                }
                w = (w - 1) & outside;
            }
            if y == 0 {
                break;
            }
            y = (y - 1) & rest;
        }
        if x == 0 {
            break;
        }
        x = (x - 1) & a;
    }
}
