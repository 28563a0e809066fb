//! Coherence of power-set partitions and their Weisfeiler–Leman style refinement.
//!
//! For a subset `a`, its *fingerprint* is the multiset of
//! `(cell(b), cell(c), type(a, b, c))` over pairs `(b, c)`: over triangles only in
//! [`Mode::Triangle`], over all pairs in [`Mode::AllTypes`]. A partition is coherent in
//! a mode iff fingerprints are constant on cells; one refinement step recolors each
//! subset by its old color and fingerprint.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::groups::PermGroup;
use crate::partition::SetPartition;
use crate::subset::{for_each_triangle, Subset, TripleType};
use crate::union_find::UnionFind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Coherence with respect to triangle types (scheme status).
    #[default]
    Triangle,
    /// Coherence with respect to every triple type ("fully coherent").
    AllTypes,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Triangle => "triangle",
            Mode::AllTypes => "all-types",
        })
    }
}

// Key layout: cell(b) | cell(c) | |a∩b| | |a∩c| | |b∩c| | |a∩b∩c|, 5 bits per size.
#[inline]
fn key(cb: u32, cc: u32, ab: u32, ac: u32, bc: u32, abc: u32) -> u64 {
    ((cb as u64) << 44)
        | ((cc as u64) << 24)
        | ((ab as u64) << 15)
        | ((ac as u64) << 10)
        | ((bc as u64) << 5)
        | abc as u64
}

#[inline]
fn unkey(k: u64) -> (u32, u32, u8, u8, u8, u8) {
    (
        (k >> 44) as u32,
        ((k >> 24) & 0xFFFFF) as u32,
        ((k >> 15) & 31) as u8,
        ((k >> 10) & 31) as u8,
        ((k >> 5) & 31) as u8,
        (k & 31) as u8,
    )
}

/// Run-length encoded sorted multiset of keys.
type Fingerprint = Vec<(u64, u32)>;

fn run_length(mut keys: Vec<u64>) -> Fingerprint {
    keys.sort_unstable();
    let mut out: Fingerprint = Vec::new();
    for k in keys {
        match out.last_mut() {
            Some((last, n)) if *last == k => *n += 1,
            _ => out.push((k, 1)),
        }
    }
    out
}

/// Fingerprint of `a`. Triangle keys only record `|a∩b∩c|`, which together with the
/// cells (hence sizes) determines the triangle type.
fn fingerprint(s: &SetPartition, a: Subset, mode: Mode) -> Fingerprint {
    let colors = s.colors();
    let d = s.degree();
    match mode {
        Mode::Triangle => {
            let mut keys = Vec::with_capacity(3usize.pow(a.len() as u32) << (d - a.len()));
            for_each_triangle(a, d, |b, c, abc| {
                keys.push(key(colors[b.index()], colors[c.index()], 0, 0, 0, abc));
            });
            run_length(keys)
        }
        Mode::AllTypes => {
            let n = 1u32 << d;
            let mut keys = Vec::with_capacity((n as usize) * (n as usize));
            let a = a.0;
            for b in 0..n {
                let cb = colors[b as usize];
                let ab = (a & b).count_ones();
                for c in 0..n {
                    keys.push(key(
                        cb,
                        colors[c as usize],
                        ab,
                        (a & c).count_ones(),
                        (b & c).count_ones(),
                        (a & b & c).count_ones(),
                    ));
                }
            }
            run_length(keys)
        }
    }
}

/// Orbit representative of every subset under `group`.
fn orbit_representatives(degree: usize, group: &PermGroup) -> Vec<usize> {
    let n = 1usize << degree;
    let mut uf = UnionFind::new(n);
    for g in group.generators() {
        for (x, &y) in g.subset_table().iter().enumerate() {
            uf.union(x, y as usize);
        }
    }
    let mut rep = vec![usize::MAX; n];
    let mut out = vec![0; n];
    for x in 0..n {
        let r = uf.find(x);
        if rep[r] == usize::MAX {
            rep[r] = x;
        }
        out[x] = rep[r];
    }
    out
}

fn refine(s: &SetPartition, mode: Mode, symmetry: Option<&PermGroup>) -> SetPartition {
    let n = 1usize << s.degree();
    let reps: Vec<usize> = match symmetry {
        Some(g) => orbit_representatives(s.degree(), g),
        None => (0..n).collect(),
    };
    let distinct: Vec<usize> = (0..n).filter(|&x| reps[x] == x).collect();
    let prints: Vec<Fingerprint> = distinct
        .par_iter()
        .map(|&x| fingerprint(s, Subset(x as u32), mode))
        .collect();
    let mut slot_of_rep = vec![usize::MAX; n];
    for (i, &x) in distinct.iter().enumerate() {
        slot_of_rep[x] = i;
    }
    let mut ids: HashMap<(u32, &Fingerprint), u32> = HashMap::new();
    let mut colors = Vec::with_capacity(n);
    for x in 0..n {
        let fp = &prints[slot_of_rep[reps[x]]];
        let next = ids.len() as u32;
        colors.push(*ids.entry((s.colors()[x], fp)).or_insert(next));
    }
    SetPartition::from_colors(s.degree(), colors).unwrap()
}

/// One refinement step. Returns the refined partition and whether it equals the input.
///
/// Input that is not size-homogeneous is first split by cardinality; that split counts
/// as a change.
pub fn wl_step(s: &SetPartition, mode: Mode) -> (SetPartition, bool) {
    wl_step_with_symmetry(s, mode, None)
}

/// As [`wl_step`], computing fingerprints once per orbit of `symmetry`, which must
/// consist of automorphisms of `s` (cell-preserving permutations).
pub fn wl_step_with_symmetry(
    s: &SetPartition,
    mode: Mode,
    symmetry: Option<&PermGroup>,
) -> (SetPartition, bool) {
    if !s.is_size_homogeneous() {
        return (s.split_by_size(), false);
    }
    let out = refine(s, mode, symmetry);
    let stable = out.rank() == s.rank();
    (out, stable)
}

/// Iterates [`wl_step`] to its fixpoint: the coarsest coherent refinement.
pub fn wl_stabilize(s: &SetPartition, mode: Mode) -> SetPartition {
    wl_stabilize_counted(s, mode).0
}

/// Fixpoint and the number of steps that changed the partition.
pub fn wl_stabilize_counted(s: &SetPartition, mode: Mode) -> (SetPartition, usize) {
    let mut cur = s.clone();
    let mut rounds = 0;
    loop {
        let (next, stable) = wl_step(&cur, mode);
        if stable {
            return (cur, rounds);
        }
        cur = next;
        rounds += 1;
    }
}

/// Stabilization that exploits a group of automorphisms of the input. Refinement never
/// destroys an automorphism, so the group stays valid for every step.
pub fn wl_stabilize_with_symmetry(
    s: &SetPartition,
    mode: Mode,
    symmetry: &PermGroup,
) -> SetPartition {
    let mut cur = s.clone();
    loop {
        let (next, stable) = wl_step_with_symmetry(&cur, mode, Some(symmetry));
        if stable {
            return cur;
        }
        cur = next;
    }
}

pub fn is_coherent(s: &SetPartition, mode: Mode) -> bool {
    s.is_size_homogeneous() && wl_step(s, mode).1
}

/// Coherent with respect to every triple type.
pub fn is_fully_coherent(s: &SetPartition) -> bool {
    is_coherent(s, Mode::AllTypes)
}

pub fn is_fully_coherent_with_symmetry(s: &SetPartition, symmetry: &PermGroup) -> bool {
    s.is_size_homogeneous() && wl_step_with_symmetry(s, Mode::AllTypes, Some(symmetry)).1
}

/// Whether `s` is a set association scheme: size-homogeneous and triangle-coherent.
pub fn is_scheme(s: &SetPartition) -> bool {
    is_coherent(s, Mode::Triangle)
}

/// Key of a structure constant `p^α_{βγ;τ}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ConstantKey {
    pub alpha: u32,
    pub beta: u32,
    pub gamma: u32,
    pub tau: TripleType,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureConstantTable {
    pub mode: Mode,
    pub degree: usize,
    pub rank: usize,
    /// Nonzero constants only.
    pub entries: BTreeMap<ConstantKey, u64>,
}

impl StructureConstantTable {
    pub fn get(&self, alpha: u32, beta: u32, gamma: u32, tau: TripleType) -> u64 {
        self.entries
            .get(&ConstantKey {
                alpha,
                beta,
                gamma,
                tau,
            })
            .copied()
            .unwrap_or(0)
    }

    /// CSV with header `alpha,beta,gamma,tau1,...,tau7,p`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("alpha,beta,gamma,tau1,tau2,tau3,tau4,tau5,tau6,tau7,p\n");
        for (k, v) in &self.entries {
            let t = k.tau.0;
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{}\n",
                k.alpha, k.beta, k.gamma, t[0], t[1], t[2], t[3], t[4], t[5], t[6], v
            ));
        }
        out
    }
}

/// Two members of a cell with different counts for some `(β, γ, τ)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IncoherenceWitness {
    pub alpha: u32,
    pub a: Vec<usize>,
    pub a_prime: Vec<usize>,
    pub beta: u32,
    pub gamma: u32,
    pub tau: TripleType,
    pub count_a: u64,
    pub count_a_prime: u64,
}

impl fmt::Display for IncoherenceWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "cell {} members {:?} and {:?} differ for (beta={}, gamma={}, tau={:?}): {} vs {}",
            self.alpha,
            self.a,
            self.a_prime,
            self.beta,
            self.gamma,
            self.tau.0,
            self.count_a,
            self.count_a_prime
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coherence {
    Coherent(StructureConstantTable),
    Incoherent(IncoherenceWitness),
}

impl Coherence {
    pub fn is_coherent(&self) -> bool {
        matches!(self, Coherence::Coherent(_))
    }
}

fn full_type(a: Subset, k: u64, mode: Mode, sizes: &[Option<usize>]) -> (u32, u32, TripleType) {
    let (cb, cc, ab, ac, bc, abc) = unkey(k);
    let la = a.len() as u8;
    let lb = sizes[cb as usize].unwrap() as u8;
    let lc = sizes[cc as usize].unwrap() as u8;
    let tau = match mode {
        Mode::AllTypes => TripleType([la, lb, lc, ab, ac, bc, abc]),
        Mode::Triangle => {
            // |a ∪ b ∪ c| = (|a| + |b| + |c| - |a∩b∩c|) / 2 and all pairwise unions coincide
            let u = (la + lb + lc - abc) / 2;
            TripleType([la, lb, lc, la + lb - u, la + lc - u, lb + lc - u, abc])
        }
    };
    (cb, cc, tau)
}

/// First key at which two sorted fingerprints differ, with both counts.
fn first_difference(x: &Fingerprint, y: &Fingerprint) -> Option<(u64, u64, u64)> {
    let (mut i, mut j) = (0, 0);
    loop {
        match (x.get(i), y.get(j)) {
            (None, None) => return None,
            (Some(&(k, n)), None) => return Some((k, n as u64, 0)),
            (None, Some(&(k, n))) => return Some((k, 0, n as u64)),
            (Some(&(k1, n1)), Some(&(k2, n2))) => {
                if k1 < k2 {
                    return Some((k1, n1 as u64, 0));
                } else if k2 < k1 {
                    return Some((k2, 0, n2 as u64));
                } else if n1 != n2 {
                    return Some((k1, n1 as u64, n2 as u64));
                }
                i += 1;
                j += 1;
            }
        }
    }
}

/// Structure constants of a size-homogeneous partition, or a witness of incoherence.
///
/// The witness is minimal: the least cell, its first member, the first member that
/// disagrees with it, and the least `(β, γ, τ)` key where they differ.
pub fn structure_constants(s: &SetPartition, mode: Mode) -> Coherence {
    assert!(
        s.is_size_homogeneous(),
        "structure constants need a size-homogeneous partition"
    );
    let sizes = s.member_sizes();
    let cells = s.cells();
    let results: Vec<Result<(u32, Fingerprint), IncoherenceWitness>> = cells
        .par_iter()
        .enumerate()
        .map(|(alpha, members)| {
            let first = members[0];
            let fp0 = fingerprint(s, first, mode);
            for &other in &members[1..] {
                let fp = fingerprint(s, other, mode);
                if let Some((k, n0, n1)) = first_difference(&fp0, &fp) {
                    let (beta, gamma, tau) = full_type(first, k, mode, &sizes);
                    return Err(IncoherenceWitness {
                        alpha: alpha as u32,
                        a: first.elements(),
                        a_prime: other.elements(),
                        beta,
                        gamma,
                        tau,
                        count_a: n0,
                        count_a_prime: n1,
                    });
                }
            }
            Ok((alpha as u32, fp0))
        })
        .collect();
    let mut entries = BTreeMap::new();
    for r in results {
        match r {
            Err(w) => return Coherence::Incoherent(w),
            Ok((alpha, fp)) => {
                let a = cells[alpha as usize][0];
                for (k, n) in fp {
                    let (beta, gamma, tau) = full_type(a, k, mode, &sizes);
                    *entries
                        .entry(ConstantKey {
                            alpha,
                            beta,
                            gamma,
                            tau,
                        })
                        .or_insert(0) += n as u64;
                }
            }
        }
    }
    Coherence::Coherent(StructureConstantTable {
        mode,
        degree: s.degree(),
        rank: s.rank(),
        entries,
    })
}

/// Triangle count `#{(b, c) ∈ β × γ : (a, b, c) a triangle}` for one subset `a`.
pub fn triangle_count(s: &SetPartition, a: Subset, beta: u32, gamma: u32) -> u64 {
    let mut n = 0;
    for_each_triangle(a, s.degree(), |b, c, _| {
        if s.color(b) == beta && s.color(c) == gamma {
            n += 1;
        }
    });
    n
}
