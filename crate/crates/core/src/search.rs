//! Backtracking over relabelings of `[d]`.
//!
//! All searches assign the image of points `0, 1, ..., d-1` in order. Once points
//! `0..j` are placed, the image of every subset below `2^j` is known, so each level
//! only has to examine the subsets whose highest element is `j`.

use std::cmp::Ordering;

use crate::groups::{PermGroup, Permutation};
use crate::partition::{CanonicalForm, SetPartition};

/// Degree limit for the exhaustive relabeling searches.
pub const MAX_SEARCH_DEGREE: usize = 16;

struct Canon<'a> {
    degree: usize,
    colors: &'a [u32],
    pi: Vec<u8>,
    used: u32,
    img: Vec<u32>,
    cur: Vec<u16>,
    cmap: Vec<u32>,
    next_color: u32,
    best: Option<(Vec<u16>, Vec<u8>)>,
}

impl Canon<'_> {
    fn dfs(&mut self, j: usize, mut rel: Ordering) -> bool {
        if j == self.degree {
            if rel == Ordering::Less {
                self.best = Some((self.cur.clone(), self.pi.clone()));
                return true;
            }
            return false;
        }
        let lo = 1usize << j;
        let mut updated = false;
        for q in 0..self.degree {
            if self.used & (1 << q) != 0 {
                continue;
            }
            self.pi[j] = q as u8;
            let mut fresh: Vec<u32> = Vec::new();
            let mut child = rel;
            let mut pruned = false;
            for x in lo..2 * lo {
                let im = self.img[x - lo] | (1 << q);
                self.img[x] = im;
                let old = self.colors[im as usize];
                let slot = &mut self.cmap[old as usize];
                if *slot == u32::MAX {
                    *slot = self.next_color;
                    self.next_color += 1;
                    fresh.push(old);
                }
                let c = *slot as u16;
                self.cur[x] = c;
                if child == Ordering::Equal {
                    let b = self.best.as_ref().map(|(b, _)| b[x]).unwrap();
                    child = c.cmp(&b);
                    if child == Ordering::Greater {
                        pruned = true;
                        break;
                    }
                }
            }
            if !pruned {
                self.used |= 1 << q;
                if self.dfs(j + 1, child) {
                    updated = true;
                    rel = Ordering::Equal;
                }
                self.used &= !(1 << q);
            }
            for old in fresh {
                self.cmap[old as usize] = u32::MAX;
                self.next_color -= 1;
            }
        }
        updated
    }
}

/// Canonical form together with a relabeling `g` such that
/// `s.permute(&g) == form.to_partition()`.
pub fn canonical_labeling(s: &SetPartition) -> (CanonicalForm, Permutation) {
    let d = s.degree();
    assert!(d <= MAX_SEARCH_DEGREE);
    let n = 1usize << d;
    let mut c = Canon {
        degree: d,
        colors: s.colors(),
        pi: vec![0; d],
        used: 0,
        img: vec![0; n],
        cur: vec![0; n],
        cmap: vec![u32::MAX; s.rank()],
        next_color: 0,
        best: None,
    };
    // the empty set always receives color 0
    c.cmap[s.colors()[0] as usize] = 0;
    c.next_color = 1;
    c.dfs(0, Ordering::Less);
    let (colors, pi) = c.best.expect("at least one relabeling");
    // position p of the canonical array reads old point pi[p]; relabel old -> new
    let pi = Permutation::from_images(pi).unwrap();
    (CanonicalForm { degree: d, colors }, pi.inverse())
}

/// Lexicographically least first-occurrence color array over all `d!` relabelings.
/// Two partitions have equal forms iff they are weakly isomorphic.
pub fn canonical_form(s: &SetPartition) -> CanonicalForm {
    canonical_labeling(s).0
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum IsoKind {
    /// Each cell maps to the cell with the same color.
    Strong,
    /// Cells may be permuted.
    Weak,
}

struct IsoSearch<'a> {
    degree: usize,
    kind: IsoKind,
    from: &'a [u32],
    to: &'a [u32],
    g: Vec<u8>,
    used: u32,
    img: Vec<u32>,
    fwd: Vec<u32>,
    back: Vec<u32>,
    first_only: bool,
    found: Vec<Permutation>,
}

impl IsoSearch<'_> {
    fn dfs(&mut self, j: usize) -> bool {
        if j == self.degree {
            self.found
                .push(Permutation::from_images(self.g.clone()).unwrap());
            return self.first_only;
        }
        let lo = 1usize << j;
        for q in 0..self.degree {
            if self.used & (1 << q) != 0 {
                continue;
            }
            self.g[j] = q as u8;
            let mut bound: Vec<u32> = Vec::new();
            let mut ok = true;
            for x in lo..2 * lo {
                let im = self.img[x - lo] | (1 << q);
                self.img[x] = im;
                let (a, b) = (self.from[x], self.to[im as usize]);
                match self.kind {
                    IsoKind::Strong => {
                        if a != b {
                            ok = false;
                            break;
                        }
                    }
                    IsoKind::Weak => {
                        let f = self.fwd[a as usize];
                        if f == u32::MAX {
                            if self.back[b as usize] != u32::MAX {
                                ok = false;
                                break;
                            }
                            self.fwd[a as usize] = b;
                            self.back[b as usize] = a;
                            bound.push(a);
                        } else if f != b {
                            ok = false;
                            break;
                        }
                    }
                }
            }
            if ok {
                self.used |= 1 << q;
                let stop = self.dfs(j + 1);
                self.used &= !(1 << q);
                if stop {
                    return true;
                }
            }
            for a in bound {
                let b = self.fwd[a as usize];
                self.back[b as usize] = u32::MAX;
                self.fwd[a as usize] = u32::MAX;
            }
        }
        false
    }
}

fn run_iso(
    from: &SetPartition,
    to: &SetPartition,
    kind: IsoKind,
    first_only: bool,
) -> Vec<Permutation> {
    let d = from.degree();
    assert!(d <= MAX_SEARCH_DEGREE);
    if d != to.degree() || from.rank() != to.rank() {
        return Vec::new();
    }
    let mut sa = from.cell_sizes();
    let mut sb = to.cell_sizes();
    if kind == IsoKind::Strong && sa != sb {
        return Vec::new();
    }
    sa.sort_unstable();
    sb.sort_unstable();
    if sa != sb {
        return Vec::new();
    }
    let n = 1usize << d;
    let mut s = IsoSearch {
        degree: d,
        kind,
        from: from.colors(),
        to: to.colors(),
        g: vec![0; d],
        used: 0,
        img: vec![0; n],
        fwd: vec![u32::MAX; from.rank()],
        back: vec![u32::MAX; to.rank()],
        first_only,
        found: Vec::new(),
    };
    if kind == IsoKind::Weak {
        s.fwd[from.colors()[0] as usize] = to.colors()[0];
        s.back[to.colors()[0] as usize] = from.colors()[0];
    } else if from.colors()[0] != to.colors()[0] {
        return Vec::new();
    }
    s.dfs(0);
    s.found
}

/// All relabelings `g` with `from.permute(&g)` equal to `to` (weak) or color-for-color
/// equal (strong), in lexicographic order of images.
pub fn isomorphisms(from: &SetPartition, to: &SetPartition, kind: IsoKind) -> Vec<Permutation> {
    run_iso(from, to, kind, false)
}

pub fn find_isomorphism(from: &SetPartition, to: &SetPartition) -> Option<Permutation> {
    run_iso(from, to, IsoKind::Weak, true).pop()
}

/// Permutations of `[d]` fixing every cell setwise.
pub fn automorphism_group(s: &SetPartition) -> PermGroup {
    PermGroup::from_elements(s.degree(), isomorphisms(s, s, IsoKind::Strong))
}

/// Permutations of `[d]` mapping the partition to itself, possibly permuting cells.
pub fn weak_automorphism_group(s: &SetPartition) -> PermGroup {
    PermGroup::from_elements(s.degree(), isomorphisms(s, s, IsoKind::Weak))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::NamedGroup;

    fn all_perms(d: usize) -> Vec<Permutation> {
        PermGroup::symmetric(d).elements().to_vec()
    }

    fn brute_canonical(s: &SetPartition) -> Vec<u16> {
        all_perms(s.degree())
            .iter()
            .map(|g| {
                s.permute(g)
                    .colors()
                    .iter()
                    .map(|&c| c as u16)
                    .collect::<Vec<_>>()
            })
            .min()
            .unwrap()
    }

    #[test]
    fn canonical_form_matches_brute_force_minimum() {
        let c2 = PermGroup::generated(4, &[Permutation::from_cycles(4, &[vec![1, 3]]).unwrap()])
            .unwrap();
        let c3 = PermGroup::generated(4, &[Permutation::from_cycles(4, &[vec![2, 3, 4]]).unwrap()])
            .unwrap();
        for s in [
            SetPartition::trivial(4),
            SetPartition::discrete(4),
            c2.orbital_scheme(),
            c3.orbital_scheme(),
            SetPartition::from_colors(3, vec![0, 1, 2, 2, 3, 3, 3, 4]).unwrap(),
        ] {
            let (form, g) = canonical_labeling(&s);
            assert_eq!(form.colors, brute_canonical(&s));
            assert_eq!(s.permute(&g), form.to_partition());
        }
    }

    #[test]
    fn conjugate_transpositions_share_canonical_form() {
        let a = PermGroup::generated(3, &[Permutation::from_cycles(3, &[vec![1, 2]]).unwrap()])
            .unwrap();
        let b = PermGroup::generated(3, &[Permutation::from_cycles(3, &[vec![2, 3]]).unwrap()])
            .unwrap();
        assert_ne!(a.orbital_scheme(), b.orbital_scheme());
        assert_eq!(
            canonical_form(&a.orbital_scheme()),
            canonical_form(&b.orbital_scheme())
        );
    }

    #[test]
    fn trivial_scheme_form_is_size_coloring() {
        let t = SetPartition::trivial(3);
        let form = canonical_form(&t);
        assert_eq!(form.to_partition(), t);
    }

    #[test]
    fn automorphisms_of_extremes() {
        assert_eq!(automorphism_group(&SetPartition::trivial(5)).order(), 120);
        for d in 2..=5 {
            assert_eq!(automorphism_group(&SetPartition::discrete(d)).order(), 1);
        }
        assert_eq!(
            weak_automorphism_group(&SetPartition::trivial(4)).order(),
            24
        );
    }

    #[test]
    fn aut_of_orbital_scheme_contains_group() {
        for g in [NamedGroup::H3, NamedGroup::G4, NamedGroup::H2] {
            let grp = g.group();
            let aut = automorphism_group(&grp.orbital_scheme());
            assert!(grp.is_subgroup_of(&aut));
        }
    }

    #[test]
    fn weak_contains_strong() {
        let s = NamedGroup::H4.group().orbital_scheme();
        let a = automorphism_group(&s);
        let w = weak_automorphism_group(&s);
        assert!(a.is_subgroup_of(&w));
    }

    #[test]
    fn isomorphism_is_found_for_relabeled_scheme() {
        let s = NamedGroup::H3.group().orbital_scheme();
        let g = Permutation::affine(8, 3, 5).unwrap();
        let t = s.permute(&g);
        let f = find_isomorphism(&s, &t).unwrap();
        assert_eq!(s.permute(&f), t);
        assert!(find_isomorphism(&s, &SetPartition::trivial(8)).is_none());
    }
}
