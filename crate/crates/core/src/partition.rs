//! Partitions of the power set `2^[d]`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::Permutation;
use crate::subset::{Subset, MAX_DEGREE};

/// A coloring of all `2^d` subsets of `[d]`.
///
/// Colors are always numbered by first occurrence in bitmask order, so the cell of
/// `∅` has color 0 and two partitions are equal iff their color arrays are.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetPartition {
    degree: usize,
    colors: Vec<u32>,
    rank: usize,
}

/// Renumbers colors by first occurrence; returns the rank.
pub(crate) fn normalize_colors(colors: &mut [u32]) -> usize {
    let max = colors.iter().copied().max().map_or(0, |m| m as usize + 1);
    let mut map = vec![u32::MAX; max];
    let mut next = 0u32;
    for c in colors.iter_mut() {
        let slot = &mut map[*c as usize];
        if *slot == u32::MAX {
            *slot = next;
            next += 1;
        }
        *c = *slot;
    }
    next as usize
}

impl SetPartition {
    /// Builds a partition from an arbitrary color array of length `2^degree`.
    pub fn from_colors(degree: usize, mut colors: Vec<u32>) -> Result<Self> {
        if degree > MAX_DEGREE {
            return Err(Error::DegreeTooLarge {
                degree,
                limit: MAX_DEGREE,
            });
        }
        if colors.len() != 1 << degree {
            return Err(Error::Malformed(format!(
                "expected {} colors, found {}",
                1usize << degree,
                colors.len()
            )));
        }
        let rank = normalize_colors(&mut colors);
        Ok(SetPartition {
            degree,
            colors,
            rank,
        })
    }

    /// Builds a partition from explicit cells, checking that they cover every subset
    /// exactly once.
    pub fn from_cells(degree: usize, cells: &[Vec<Subset>]) -> Result<Self> {
        if degree > MAX_DEGREE {
            return Err(Error::DegreeTooLarge {
                degree,
                limit: MAX_DEGREE,
            });
        }
        let n = 1usize << degree;
        let mut colors = vec![u32::MAX; n];
        for (i, cell) in cells.iter().enumerate() {
            if cell.is_empty() {
                return Err(Error::Malformed(format!("cell {i} is empty")));
            }
            for &s in cell {
                if !s.fits(degree) {
                    let bad = s.elements().into_iter().find(|&e| e > degree).unwrap_or(0);
                    return Err(Error::ElementOutOfRange {
                        element: bad as i64,
                        degree,
                    });
                }
                if colors[s.index()] != u32::MAX {
                    return Err(Error::DuplicateSubset(s.elements()));
                }
                colors[s.index()] = i as u32;
            }
        }
        if let Some(missing) = colors.iter().position(|&c| c == u32::MAX) {
            return Err(Error::NotAPartition(Subset(missing as u32).elements()));
        }
        Self::from_colors(degree, colors)
    }

    /// The partition of `2^[d]` by cardinality.
    pub fn trivial(degree: usize) -> Self {
        let colors = (0..1u32 << degree).map(u32::count_ones).collect();
        Self::from_colors(degree, colors).unwrap()
    }

    /// Every subset in its own cell.
    pub fn discrete(degree: usize) -> Self {
        Self::from_colors(degree, (0..1u32 << degree).collect()).unwrap()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    #[inline]
    pub fn color(&self, s: Subset) -> u32 {
        self.colors[s.index()]
    }

    /// Cells indexed by color; subsets within a cell in increasing bitmask order.
    pub fn cells(&self) -> Vec<Vec<Subset>> {
        let mut cells = vec![Vec::new(); self.rank];
        for (x, &c) in self.colors.iter().enumerate() {
            cells[c as usize].push(Subset(x as u32));
        }
        cells
    }

    pub fn cell_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.rank];
        for &c in &self.colors {
            sizes[c as usize] += 1;
        }
        sizes
    }

    /// Cardinality of the members of each cell, or `None` for a cell mixing sizes.
    pub fn member_sizes(&self) -> Vec<Option<usize>> {
        let mut out: Vec<Option<Option<usize>>> = vec![None; self.rank];
        for (x, &c) in self.colors.iter().enumerate() {
            let len = (x as u32).count_ones() as usize;
            let slot = &mut out[c as usize];
            *slot = match *slot {
                None => Some(Some(len)),
                Some(Some(l)) if l == len => Some(Some(l)),
                _ => Some(None),
            };
        }
        out.into_iter().map(|o| o.flatten()).collect()
    }

    /// Cells only contain subsets of one size.
    pub fn is_size_homogeneous(&self) -> bool {
        self.member_sizes().iter().all(Option::is_some)
    }

    /// Common refinement with the partition by cardinality.
    pub fn split_by_size(&self) -> SetPartition {
        let colors = self
            .colors
            .iter()
            .enumerate()
            .map(|(x, &c)| c * (self.degree as u32 + 1) + (x as u32).count_ones())
            .collect();
        Self::from_colors(self.degree, colors).unwrap()
    }

    /// The singletons form a single cell.
    pub fn is_homogeneous(&self) -> bool {
        if self.degree == 0 {
            return true;
        }
        let c = self.colors[1];
        let singletons = (0..self.degree)
            .filter(|&i| self.colors[1 << i] == c)
            .count();
        singletons == self.degree && self.cell_sizes()[c as usize] == self.degree
    }

    /// `self ≤ other`: every cell of `self` lies inside a cell of `other`.
    pub fn refines(&self, other: &SetPartition) -> bool {
        if self.degree != other.degree {
            return false;
        }
        let mut map = vec![u32::MAX; self.rank];
        for (&a, &b) in self.colors.iter().zip(&other.colors) {
            let slot = &mut map[a as usize];
            if *slot == u32::MAX {
                *slot = b;
            } else if *slot != b {
                return false;
            }
        }
        true
    }

    /// Common refinement of two partitions of the same degree.
    pub fn meet(&self, other: &SetPartition) -> SetPartition {
        assert_eq!(self.degree, other.degree);
        let mut ids = std::collections::HashMap::new();
        let colors = self
            .colors
            .iter()
            .zip(&other.colors)
            .map(|(&a, &b)| {
                let next = ids.len() as u32;
                *ids.entry((a, b)).or_insert(next)
            })
            .collect();
        Self::from_colors(self.degree, colors).unwrap()
    }

    /// Image under relabeling the points by `g`: the cell of `g(a)` is the old cell of `a`.
    pub fn permute(&self, g: &Permutation) -> SetPartition {
        assert_eq!(g.degree(), self.degree);
        let table = g.subset_table();
        let mut colors = vec![0u32; self.colors.len()];
        for (x, &c) in self.colors.iter().enumerate() {
            colors[table[x] as usize] = c;
        }
        Self::from_colors(self.degree, colors).unwrap()
    }

    /// Refines the cell with color `cell` into `part` and the rest. `part` must be a
    /// nonempty proper subset of the cell.
    pub fn split_cell(&self, cell: u32, part: &[Subset]) -> Result<SetPartition> {
        let fresh = self.rank as u32;
        let mut colors = self.colors.clone();
        for &s in part {
            if !s.fits(self.degree) || self.colors[s.index()] != cell {
                return Err(Error::InvalidSplit(format!("{s} is not in cell {cell}")));
            }
            colors[s.index()] = fresh;
        }
        let out = Self::from_colors(self.degree, colors)?;
        if out.rank != self.rank + 1 {
            return Err(Error::InvalidSplit(
                "part must be a proper nonempty subset".into(),
            ));
        }
        Ok(out)
    }

    /// Each cell's set of complements is again a cell.
    pub fn is_complement_closed(&self) -> bool {
        let mut map = vec![u32::MAX; self.rank];
        for x in 0..self.colors.len() {
            let c = self.colors[x];
            let cc = self.colors[Subset(x as u32).complement(self.degree).index()];
            let slot = &mut map[c as usize];
            if *slot == u32::MAX {
                *slot = cc;
            } else if *slot != cc {
                return false;
            }
        }
        // complementation is an involution, so a consistent cell map is a bijection
        true
    }

    /// Members of one cell in bitmask order.
    pub fn cell(&self, color: u32) -> Vec<Subset> {
        self.colors
            .iter()
            .enumerate()
            .filter(|(_, &c)| c == color)
            .map(|(x, _)| Subset(x as u32))
            .collect()
    }
}

impl fmt::Debug for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SetPartition(d={}, rank={}, ", self.degree, self.rank)?;
        f.debug_list().entries(self.cells()).finish()?;
        write!(f, ")")
    }
}

/// Lexicographically minimal color array over all relabelings of `[d]`.
/// Serialized as its display string.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct CanonicalForm {
    pub degree: usize,
    pub colors: Vec<u16>,
}

impl CanonicalForm {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(1 + 2 * self.colors.len());
        out.push(self.degree as u8);
        for c in &self.colors {
            out.extend_from_slice(&c.to_be_bytes());
        }
        out
    }

    pub fn to_partition(&self) -> SetPartition {
        SetPartition::from_colors(self.degree, self.colors.iter().map(|&c| c as u32).collect())
            .expect("canonical forms are valid color arrays")
    }

    pub fn rank(&self) -> usize {
        self.colors
            .iter()
            .copied()
            .max()
            .map_or(0, |m| m as usize + 1)
    }

    /// Short stable identifier (64-bit FNV-1a of the bytes, in hex).
    pub fn id(&self) -> String {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for b in self.to_bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
        format!("{h:016x}")
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "d{}:", self.degree)?;
        for c in &self.colors {
            write!(f, "{c:x}.")?;
        }
        Ok(())
    }
}

impl std::str::FromStr for CanonicalForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Malformed(format!("bad canonical form {s:?}"));
        let (deg, body) = s
            .strip_prefix('d')
            .and_then(|r| r.split_once(':'))
            .ok_or_else(bad)?;
        let degree: usize = deg.parse().map_err(|_| bad())?;
        let colors = body
            .split('.')
            .filter(|t| !t.is_empty())
            .map(|t| u16::from_str_radix(t, 16).map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        if degree > MAX_DEGREE || colors.len() != 1 << degree {
            return Err(bad());
        }
        Ok(CanonicalForm { degree, colors })
    }
}

impl From<CanonicalForm> for String {
    fn from(c: CanonicalForm) -> String {
        c.to_string()
    }
}

impl TryFrom<String> for CanonicalForm {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl fmt::Debug for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalForm({})", self.id())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sub(e: &[usize], d: usize) -> Subset {
        Subset::from_elements(e, d).unwrap()
    }

    #[test]
    fn normalization_by_first_occurrence() {
        let p = SetPartition::from_colors(1, vec![7, 3]).unwrap();
        assert_eq!(p.colors(), &[0, 1]);
        assert_eq!(p.rank(), 2);
    }

    #[test]
    fn from_cells_checks_coverage_and_duplicates() {
        let cells = vec![vec![sub(&[], 2)], vec![sub(&[1], 2), sub(&[2], 2)]];
        assert!(matches!(
            SetPartition::from_cells(2, &cells),
            Err(Error::NotAPartition(v)) if v == vec![1, 2]
        ));
        let cells = vec![
            vec![sub(&[], 2)],
            vec![sub(&[1], 2), sub(&[2], 2), sub(&[1], 2)],
            vec![sub(&[1, 2], 2)],
        ];
        assert!(matches!(
            SetPartition::from_cells(2, &cells),
            Err(Error::DuplicateSubset(_))
        ));
    }

    #[test]
    fn trivial_and_discrete() {
        let t = SetPartition::trivial(4);
        assert_eq!(t.rank(), 5);
        assert!(t.is_size_homogeneous());
        assert!(t.is_homogeneous());
        assert!(t.is_complement_closed());
        let d = SetPartition::discrete(4);
        assert_eq!(d.rank(), 16);
        assert!(d.refines(&t));
        assert!(!t.refines(&d));
        assert!(!d.is_homogeneous());
    }

    #[test]
    fn split_by_size_and_meet() {
        let p = SetPartition::from_colors(2, vec![0, 0, 0, 1]).unwrap();
        assert!(!p.is_size_homogeneous());
        let q = p.split_by_size();
        assert_eq!(q, SetPartition::trivial(2));
        assert_eq!(p.meet(&SetPartition::trivial(2)), q);
    }

    #[test]
    fn split_cell_validates_part() {
        let t = SetPartition::trivial(3);
        let c = t.color(sub(&[1], 3));
        let s = t.split_cell(c, &[sub(&[1], 3)]).unwrap();
        assert_eq!(s.rank(), 5);
        assert!(t.split_cell(c, &[sub(&[1, 2], 3)]).is_err());
        let all = t.cell(c);
        assert!(t.split_cell(c, &all).is_err());
    }
}
