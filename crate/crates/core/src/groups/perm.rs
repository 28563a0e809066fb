use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::subset::Subset;

/// A permutation of `[d]`; `images[i]` is the image of point `i + 1`, stored 0-based.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    images: Vec<u8>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as u8).collect(),
        }
    }

    /// From 0-based images.
    pub fn from_images(images: Vec<u8>) -> Result<Self> {
        let d = images.len();
        let mut seen = vec![false; d];
        for &i in &images {
            let i = i as usize;
            if i >= d || seen[i] {
                return Err(Error::InvalidPermutation(format!(
                    "{images:?} is not a bijection"
                )));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    pub(crate) fn from_images_unchecked(images: Vec<u8>) -> Self {
        Permutation { images }
    }

    /// From 1-based images.
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        let v = images
            .iter()
            .map(|&i| {
                if i == 0 || i > images.len() {
                    Err(Error::InvalidPermutation(format!("{images:?}")))
                } else {
                    Ok((i - 1) as u8)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_images(v)
    }

    /// From cycles over 1-based points.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<u8> = (0..degree as u8).collect();
        let mut touched = vec![false; degree];
        for cycle in cycles {
            for (k, &p) in cycle.iter().enumerate() {
                if p == 0 || p > degree {
                    return Err(Error::InvalidPermutation(format!(
                        "point {p} outside 1..={degree}"
                    )));
                }
                if touched[p - 1] {
                    return Err(Error::InvalidPermutation(format!("point {p} repeated")));
                }
                touched[p - 1] = true;
                let q = cycle[(k + 1) % cycle.len()];
                images[p - 1] = (q - 1) as u8;
            }
        }
        Self::from_images(images)
    }

    /// Affine map `x ↦ a x + b` on `ℤ/n`, with residue `z` placed at point `z + 1`.
    pub fn affine(n: usize, a: usize, b: usize) -> Result<Self> {
        Self::from_images((0..n).map(|z| ((a * z + b) % n) as u8).collect())
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u8] {
        &self.images
    }

    /// Image of a 0-based point.
    #[inline]
    pub fn apply(&self, point: usize) -> usize {
        self.images[point] as usize
    }

    pub fn apply_subset(&self, s: Subset) -> Subset {
        let mut out = 0u32;
        let mut b = s.0;
        while b != 0 {
            let i = b.trailing_zeros() as usize;
            out |= 1 << self.images[i];
            b &= b - 1;
        }
        Subset(out)
    }

    /// Image of every subset of `[d]`, indexed by bitmask.
    pub fn subset_table(&self) -> Vec<u32> {
        let n = 1usize << self.degree();
        let mut table = vec![0u32; n];
        for x in 1..n {
            let low = x.trailing_zeros() as usize;
            table[x] = table[x & (x - 1)] | (1 << self.images[low]);
        }
        table
    }

    /// Apply `self`, then `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation {
            images: self
                .images
                .iter()
                .map(|&i| other.images[i as usize])
                .collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u8; self.degree()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j as usize] = i as u8;
        }
        Permutation { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, &j)| i == j as usize)
    }

    /// Nontrivial cycles over 1-based points, each starting at its least point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let d = self.degree();
        let mut seen = vec![false; d];
        let mut out = Vec::new();
        for start in 0..d {
            if seen[start] || self.apply(start) == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                cycle.push(p + 1);
                p = self.apply(p);
            }
            out.push(cycle);
        }
        out
    }

    pub fn order(&self) -> usize {
        self.cycles()
            .iter()
            .fold(1, |acc, c| num_integer::lcm(acc, c.len()))
    }

    pub fn pow(&self, mut e: usize) -> Permutation {
        let mut base = self.clone();
        let mut acc = Permutation::identity(self.degree());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.then(&base);
            }
            base = base.then(&base);
            e >>= 1;
        }
        acc
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            write!(f, "(")?;
            for (i, p) in c.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{p}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parses cycle notation such as `(1,3,5,7)(2,4,6,8)`; the degree is the largest
/// point mentioned. Use [`parse_cycles`] to fix the degree.
impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let cycles = cycles_from_str(s)?;
        let degree = cycles.iter().flatten().copied().max().unwrap_or(0);
        Permutation::from_cycles(degree, &cycles)
    }
}

pub fn parse_cycles(s: &str, degree: usize) -> Result<Permutation> {
    Permutation::from_cycles(degree, &cycles_from_str(s)?)
}

fn cycles_from_str(s: &str) -> Result<Vec<Vec<usize>>> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let mut cycles = Vec::new();
    let mut rest = s.as_str();
    while !rest.is_empty() {
        let inner = rest
            .strip_prefix('(')
            .and_then(|r| r.find(')').map(|end| (&r[..end], &r[end + 1..])));
        let Some((body, tail)) = inner else {
            return Err(Error::InvalidPermutation(format!(
                "bad cycle notation {s:?}"
            )));
        };
        if !body.is_empty() {
            let cycle = body
                .split(',')
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| Error::InvalidPermutation(format!("bad point {t:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            cycles.push(cycle);
        }
        rest = tail;
    }
    Ok(cycles)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_notation_round_trip() {
        let p = parse_cycles("(1,3,5,7)(2,4,6,8)", 8).unwrap();
        assert_eq!(p.to_string(), "(1,3,5,7)(2,4,6,8)");
        assert_eq!(p.order(), 4);
        assert_eq!(Permutation::identity(4).to_string(), "()");
        assert_eq!(parse_cycles("()", 3).unwrap(), Permutation::identity(3));
        assert!(parse_cycles("(1,2", 3).is_err());
        assert!(parse_cycles("(1,4)", 3).is_err());
        assert!(parse_cycles("(1,2)(2,3)", 3).is_err());
    }

    #[test]
    fn composition_and_inverse() {
        let p = parse_cycles("(1,2,3)", 3).unwrap();
        let q = parse_cycles("(1,2)", 3).unwrap();
        // apply p then q: 1 -> 2 -> 1
        assert_eq!(p.then(&q).apply(0), 0);
        assert!(p.then(&p.inverse()).is_identity());
        assert_eq!(p.pow(3), Permutation::identity(3));
    }

    #[test]
    fn subset_table_matches_pointwise_image() {
        let p = Permutation::affine(8, 3, 1).unwrap();
        let t = p.subset_table();
        for x in 0..256u32 {
            assert_eq!(t[x as usize], p.apply_subset(Subset(x)).0);
        }
    }
}
