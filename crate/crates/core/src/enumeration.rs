//! Isomorph-free enumeration of the lattice of set association schemes of degree `d`.
//!
//! Starting from the trivial scheme, every scheme is expanded by splitting one cell
//! `α_i` (members of size at most `⌊d/2⌋`) into a design-like part `α` and the rest,
//! followed by WL stabilization. Only one `α` per weak-automorphism orbit is tried.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant, SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coherence::{is_fully_coherent_with_symmetry, wl_stabilize, Mode};
use crate::error::{Error, Result};
use crate::groups::{
    automorphism_group, describe, weak_automorphism_group, PermGroup, Permutation,
};
use crate::partition::{CanonicalForm, SetPartition};
use crate::search::canonical_form;
use crate::subset::Subset;
use crate::union_find::UnionFind;

/// Degree limit for enumeration.
pub const MAX_ENUMERATION_DEGREE: usize = 9;

/// Cells that may be split: member size at most `⌊d/2⌋` and at least two members,
/// ordered by (member size, color).
pub fn splittable_cells(s: &SetPartition) -> Vec<u32> {
    let sizes = s.member_sizes();
    let counts = s.cell_sizes();
    let mut cells: Vec<(usize, u32)> = (0..s.rank())
        .filter_map(|c| match sizes[c] {
            Some(k) if k <= s.degree() / 2 && counts[c] >= 2 => Some((k, c as u32)),
            _ => None,
        })
        .collect();
    cells.sort();
    cells.into_iter().map(|(_, c)| c).collect()
}

struct Backtrack<'a> {
    members: &'a [Subset],
    /// Proper subsets of each member, as bitmask indices.
    below: Vec<Vec<usize>>,
    target: &'a [u32],
    deg: Vec<u32>,
    rem: Vec<u32>,
    size: usize,
    chosen: Vec<Subset>,
    out: Vec<Vec<Subset>>,
}

impl Backtrack<'_> {
    fn run(&mut self, pos: usize) {
        if self.chosen.len() == self.size {
            // all remaining members excluded: every target must already be met
            if self.deg != self.target {
                return;
            }
            self.out.push(self.chosen.clone());
            return;
        }
        if self.members.len() - pos < self.size - self.chosen.len() {
            return;
        }
        let m = pos;
        for &x in &self.below[m] {
            self.rem[x] -= 1;
        }
        // include
        if self.below[m].iter().all(|&x| self.deg[x] < self.target[x]) {
            for &x in &self.below[m] {
                self.deg[x] += 1;
            }
            self.chosen.push(self.members[m]);
            self.run(pos + 1);
            self.chosen.pop();
            for &x in &self.below[m] {
                self.deg[x] -= 1;
            }
        }
        // exclude
        if self.below[m]
            .iter()
            .all(|&x| self.deg[x] + self.rem[x] >= self.target[x])
        {
            self.run(pos + 1);
        }
        for &x in &self.below[m] {
            self.rem[x] += 1;
        }
    }
}

/// All `α ⊂ α_i` with `0 < |α| ≤ |α_i|/2` whose containment graph against every cell of
/// smaller member size is biregular, each given as a sorted member list. No orbit
/// reduction is applied.
pub fn all_design_like_subsets(s: &SetPartition, cell: u32) -> Vec<Vec<Subset>> {
    let members = s.cell(cell);
    let n = members.len();
    if n < 2 {
        return Vec::new();
    }
    let cell_sizes = s.cell_sizes();
    let below: Vec<Vec<usize>> = members
        .iter()
        .map(|m| {
            let full = m.0;
            let mut v = Vec::new();
            // proper subsets of m, including ∅
            let mut x = (full.wrapping_sub(1)) & full;
            loop {
                v.push(x as usize);
                if x == 0 {
                    break;
                }
                x = (x - 1) & full;
            }
            v
        })
        .collect();
    // q[c]: members of cell c below one member of α_i
    let mut q = vec![0u32; s.rank()];
    for &x in &below[0] {
        q[s.colors()[x] as usize] += 1;
    }
    let mut rem = vec![0u32; 1 << s.degree()];
    for b in &below {
        for &x in b {
            rem[x] += 1;
        }
    }
    let mut out = Vec::new();
    for size in 1..=n / 2 {
        let mut ok = true;
        let mut target = vec![0u32; 1 << s.degree()];
        for x in 0..target.len() {
            if rem[x] == 0 {
                continue;
            }
            let c = s.colors()[x] as usize;
            let num = size as u32 * q[c];
            if !num.is_multiple_of(cell_sizes[c] as u32) {
                ok = false;
                break;
            }
            target[x] = num / cell_sizes[c] as u32;
        }
        if !ok {
            continue;
        }
        let mut bt = Backtrack {
            members: &members,
            below: below.clone(),
            target: &target,
            deg: vec![0; 1 << s.degree()],
            rem: rem.clone(),
            size,
            chosen: Vec::new(),
            out: Vec::new(),
        };
        bt.run(0);
        out.extend(bt.out);
    }
    out
}

fn encode(item: &[Subset]) -> Vec<u32> {
    let mut v: Vec<u32> = item.iter().map(|s| s.0).collect();
    v.sort_unstable();
    v
}

/// One item per `G`-orbit, chosen as the item with the least encoding (sorted bitmask
/// list) in its orbit. Orbits are found by union–find over generator images; images
/// that are not themselves items are ignored.
pub fn orbit_reps(items: &[Vec<Subset>], g: &PermGroup) -> Vec<Vec<Subset>> {
    let codes: Vec<Vec<u32>> = items.iter().map(|i| encode(i)).collect();
    let index: HashMap<&[u32], usize> = codes
        .iter()
        .enumerate()
        .map(|(i, c)| (c.as_slice(), i))
        .collect();
    let mut uf = UnionFind::new(items.len());
    for p in g.generators() {
        let table = p.subset_table();
        for (i, code) in codes.iter().enumerate() {
            let mut img: Vec<u32> = code.iter().map(|&x| table[x as usize]).collect();
            img.sort_unstable();
            if let Some(&j) = index.get(img.as_slice()) {
                uf.union(i, j);
            }
        }
    }
    let mut best: BTreeMap<usize, usize> = BTreeMap::new();
    for i in 0..items.len() {
        let r = uf.find(i);
        let e = best.entry(r).or_insert(i);
        if codes[i] < codes[*e] {
            *e = i;
        }
    }
    let mut reps: Vec<usize> = best.into_values().collect();
    reps.sort_by(|&a, &b| codes[a].cmp(&codes[b]));
    reps.into_iter()
        .map(|i| codes[i].iter().map(|&x| Subset(x)).collect())
        .collect()
}

/// First member of every cell.
fn cell_leaders(s: &SetPartition) -> Vec<Subset> {
    let mut lead = vec![None; s.rank()];
    for (x, &c) in s.colors().iter().enumerate() {
        lead[c as usize].get_or_insert(Subset(x as u32));
    }
    lead.into_iter().map(Option::unwrap).collect()
}

/// Design-like subsets of cell `cell`, one per orbit of the weak automorphisms that
/// stabilize the cell.
pub fn design_like_subsets(s: &SetPartition, cell: u32) -> Vec<Vec<Subset>> {
    let aut_w = weak_automorphism_group(s);
    design_like_with(s, cell, &aut_w)
}

fn design_like_with(s: &SetPartition, cell: u32, aut_w: &PermGroup) -> Vec<Vec<Subset>> {
    let all = all_design_like_subsets(s, cell);
    let lead = cell_leaders(s)[cell as usize];
    let stab: Vec<Permutation> = aut_w
        .elements()
        .iter()
        .filter(|g| s.color(g.apply_subset(lead)) == cell)
        .cloned()
        .collect();
    orbit_reps(&all, &PermGroup::from_elements(s.degree(), stab))
}

/// The splits to try: for one cell per weak-automorphism orbit of splittable cells,
/// the orbit representatives of its design-like subsets.
pub fn candidate_splits(s: &SetPartition) -> Vec<(u32, Vec<Subset>)> {
    let aut_w = weak_automorphism_group(s);
    let lead = cell_leaders(s);
    let mut seen_cells = BTreeSet::new();
    let mut out = Vec::new();
    for cell in splittable_cells(s) {
        if seen_cells.contains(&cell) {
            continue;
        }
        for g in aut_w.elements() {
            seen_cells.insert(s.color(g.apply_subset(lead[cell as usize])));
        }
        for alpha in design_like_with(s, cell, &aut_w) {
            out.push((cell, alpha));
        }
    }
    out
}

/// WL stabilizations of all candidate splits, deduplicated by canonical form and
/// sorted by (rank, canonical form).
pub fn refinement_children(s: &SetPartition) -> Vec<(CanonicalForm, SetPartition)> {
    let cands = candidate_splits(s);
    let mut kids: Vec<(CanonicalForm, SetPartition)> = cands
        .par_iter()
        .map(|(cell, alpha)| {
            let split = s
                .split_cell(*cell, alpha)
                .expect("candidate is a proper part");
            let child = wl_stabilize(&split, Mode::Triangle);
            (canonical_form(&child), child)
        })
        .collect();
    kids.sort_by(|a, b| (a.1.rank(), &a.0).cmp(&(b.1.rank(), &b.0)));
    kids.dedup_by(|a, b| a.0 == b.0);
    kids
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SchemeRecord {
    pub form: CanonicalForm,
    pub rank: usize,
    pub schurian: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct EnumerationState {
    pub degree: usize,
    /// Pending expansions, ordered by (rank, canonical form).
    pub frontier: Vec<CanonicalForm>,
    pub seen: BTreeSet<CanonicalForm>,
    /// Expanded schemes, sorted by canonical form.
    pub results: Vec<SchemeRecord>,
    pub complete: bool,
    pub elapsed_seconds: f64,
    /// Unix time of the last checkpoint.
    pub timestamp: u64,
}

impl EnumerationState {
    pub fn new(degree: usize) -> Self {
        let start = canonical_form(&SetPartition::trivial(degree));
        EnumerationState {
            degree,
            frontier: vec![start.clone()],
            seen: BTreeSet::from([start]),
            results: Vec::new(),
            complete: false,
            elapsed_seconds: 0.0,
            timestamp: 0,
        }
    }

    pub fn nonschurian(&self) -> impl Iterator<Item = &SchemeRecord> {
        self.results.iter().filter(|r| !r.schurian)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let tmp = path.with_extension("tmp");
        std::fs::write(&tmp, serde_json::to_string(self)?)?;
        std::fs::rename(tmp, path)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }
}

#[derive(Clone, Debug, Default)]
pub struct EnumerationOptions {
    pub max_seconds: Option<f64>,
    pub checkpoint_path: Option<PathBuf>,
    /// Seconds between checkpoint writes.
    pub checkpoint_interval: Option<f64>,
    /// Required for `d ≥ 8`.
    pub long_run: bool,
}

fn now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0, |d| d.as_secs())
}

/// Enumerates all set association schemes of degree `d` up to weak isomorphism.
///
/// Resumes from `checkpoint_path` when it holds a state for the same degree. On timeout
/// the partial state (with `complete = false`) is saved and returned.
pub fn enumerate_all(d: usize, options: &EnumerationOptions) -> Result<EnumerationState> {
    if d > MAX_ENUMERATION_DEGREE {
        return Err(Error::DegreeTooLarge {
            degree: d,
            limit: MAX_ENUMERATION_DEGREE,
        });
    }
    if d >= 8 && !options.long_run {
        return Err(Error::InvalidArgument(format!(
            "degree {d} needs the long-run option"
        )));
    }
    let mut state = match &options.checkpoint_path {
        Some(p) if p.exists() => {
            let s = EnumerationState::load(p)?;
            if s.degree != d {
                return Err(Error::DegreeMismatch {
                    expected: d,
                    found: s.degree,
                });
            }
            s
        }
        _ => EnumerationState::new(d),
    };
    let start = Instant::now();
    let base_elapsed = state.elapsed_seconds;
    let deadline = options.max_seconds.map(Duration::from_secs_f64);
    let interval = Duration::from_secs_f64(options.checkpoint_interval.unwrap_or(60.0));
    let mut last_save = Instant::now();
    let batch = rayon::current_num_threads().max(1) * 2;
    let mut results: BTreeMap<CanonicalForm, SchemeRecord> = std::mem::take(&mut state.results)
        .into_iter()
        .map(|r| (r.form.clone(), r))
        .collect();
    let mut frontier: BTreeSet<(usize, CanonicalForm)> = std::mem::take(&mut state.frontier)
        .into_iter()
        .map(|f| (f.rank(), f))
        .collect();
    let mut timed_out = false;
    while !frontier.is_empty() {
        if deadline.is_some_and(|dl| start.elapsed() >= dl) {
            timed_out = true;
            break;
        }
        let work: Vec<CanonicalForm> = (0..batch)
            .map_while(|_| frontier.pop_first().map(|(_, f)| f))
            .collect();
        let expanded: Vec<(SchemeRecord, Vec<CanonicalForm>)> = work
            .par_iter()
            .map(|form| {
                let s = form.to_partition();
                let aut = automorphism_group(&s);
                let record = SchemeRecord {
                    form: form.clone(),
                    rank: s.rank(),
                    schurian: aut.orbital_scheme() == s,
                };
                let kids = refinement_children(&s)
                    .into_iter()
                    .map(|(f, _)| f)
                    .collect();
                (record, kids)
            })
            .collect();
        for (record, kids) in expanded {
            for k in kids {
                if state.seen.insert(k.clone()) {
                    frontier.insert((k.rank(), k));
                }
            }
            results.insert(record.form.clone(), record);
        }
        if let Some(p) = &options.checkpoint_path {
            if last_save.elapsed() >= interval {
                state.results = results.values().cloned().collect();
                state.frontier = frontier.iter().map(|(_, f)| f.clone()).collect();
                state.elapsed_seconds = base_elapsed + start.elapsed().as_secs_f64();
                state.timestamp = now();
                state.save(p)?;
                last_save = Instant::now();
            }
        }
    }
    state.results = results.into_values().collect();
    state.frontier = frontier.into_iter().map(|(_, f)| f).collect();
    state.complete = !timed_out;
    state.elapsed_seconds = base_elapsed + start.elapsed().as_secs_f64();
    state.timestamp = now();
    if let Some(p) = &options.checkpoint_path {
        state.save(p)?;
    }
    Ok(state)
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SummaryRow {
    pub canonical_id: String,
    pub rank: usize,
    pub aut_order: usize,
    pub aut: String,
    pub schurian: bool,
    pub homogeneous: bool,
    pub vertex_transitive: bool,
    pub fully_coherent: bool,
}

pub fn summary_row(form: &CanonicalForm) -> SummaryRow {
    let s = form.to_partition();
    let aut = automorphism_group(&s);
    SummaryRow {
        canonical_id: form.id(),
        rank: s.rank(),
        aut_order: aut.order(),
        aut: describe(&aut).name,
        schurian: aut.orbital_scheme() == s,
        homogeneous: s.is_homogeneous(),
        vertex_transitive: aut.is_transitive(),
        fully_coherent: is_fully_coherent_with_symmetry(&s, &aut),
    }
}

pub fn summary(state: &EnumerationState) -> Vec<SummaryRow> {
    state
        .results
        .par_iter()
        .map(|r| summary_row(&r.form))
        .collect()
}

pub fn summary_csv(rows: &[SummaryRow]) -> String {
    let mut out = String::from(
        "canonical_id,rank,aut_order,schurian,homogeneous,vertex_transitive,fully_coherent\n",
    );
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.canonical_id,
            r.rank,
            r.aut_order,
            r.schurian,
            r.homogeneous,
            r.vertex_transitive,
            r.fully_coherent
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sub(e: &[usize], d: usize) -> Subset {
        Subset::from_elements(e, d).unwrap()
    }

    #[test]
    fn no_regular_proper_subgraph_of_a_triangle() {
        let t = SetPartition::trivial(3);
        let pairs = t.color(sub(&[1, 2], 3));
        assert!(all_design_like_subsets(&t, pairs).is_empty());
        assert!(design_like_subsets(&t, pairs).is_empty());
    }

    #[test]
    fn regular_graphs_on_four_points() {
        let t = SetPartition::trivial(4);
        let pairs = t.color(sub(&[1, 2], 4));
        // three perfect matchings, nothing else of size ≤ 3 is regular
        assert_eq!(all_design_like_subsets(&t, pairs).len(), 3);
        let reps = design_like_subsets(&t, pairs);
        assert_eq!(reps, vec![vec![sub(&[1, 2], 4), sub(&[3, 4], 4)]]);
    }

    #[test]
    fn empty_set_cell_has_no_candidates() {
        assert!(design_like_subsets(&SetPartition::trivial(3), 0).is_empty());
    }

    #[test]
    fn orbit_reps_examples() {
        let d = 4;
        let pairs: Vec<Vec<Subset>> = (1..=d)
            .flat_map(|i| (i + 1..=d).map(move |j| vec![sub(&[i, j], d)]))
            .collect();
        let swap = PermGroup::generated(4, &[Permutation::from_cycles(4, &[vec![1, 2]]).unwrap()])
            .unwrap();
        let reps = orbit_reps(&pairs, &swap);
        assert_eq!(reps.len(), 4);
        assert!(reps.contains(&vec![sub(&[1, 3], 4)]));
        assert!(reps.contains(&vec![sub(&[1, 4], 4)]));
        assert_eq!(orbit_reps(&pairs, &PermGroup::trivial(4)).len(), 6);
        let singles: Vec<Vec<Subset>> = (1..=d).map(|i| vec![sub(&[i], d)]).collect();
        assert_eq!(
            orbit_reps(&singles, &PermGroup::symmetric(4)),
            vec![vec![sub(&[1], d)]]
        );
    }

    #[test]
    fn children_of_small_schemes() {
        let kids = refinement_children(&SetPartition::trivial(2));
        assert_eq!(kids.len(), 1);
        assert_eq!(kids[0].0, canonical_form(&SetPartition::discrete(2)));
        assert!(refinement_children(&SetPartition::discrete(3)).is_empty());
    }

    #[test]
    fn small_degree_counts() {
        let opts = EnumerationOptions::default();
        assert_eq!(enumerate_all(2, &opts).unwrap().results.len(), 2);
        let three = enumerate_all(3, &opts).unwrap();
        assert_eq!(three.results.len(), 3);
        assert!(three.complete);
        assert!(three.results.iter().all(|r| r.schurian));
    }

    #[test]
    fn long_run_gate() {
        assert!(enumerate_all(8, &EnumerationOptions::default()).is_err());
    }
}
