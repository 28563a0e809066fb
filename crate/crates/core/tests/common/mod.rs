//! Independent reference implementations used as oracles by the integration tests.
//! Nothing here calls the search, WL or enumeration code of the library.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use setscheme::subset::triple_invariant;
use setscheme::{SetPartition, Subset};

/// All permutations of `0..d` as image vectors, in lexicographic order.
pub fn all_perms(d: usize) -> Vec<Vec<u8>> {
    fn rec(cur: &mut Vec<u8>, used: &mut Vec<bool>, out: &mut Vec<Vec<u8>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i as u8);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; d], &mut out);
    out
}

pub fn image_of(p: &[u8], x: u32) -> u32 {
    let mut out = 0;
    for (i, &j) in p.iter().enumerate() {
        if x >> i & 1 == 1 {
            out |= 1 << j;
        }
    }
    out
}

/// Colors renumbered by first occurrence.
pub fn normalized(colors: &[u32]) -> Vec<u32> {
    let mut map = HashMap::new();
    colors
        .iter()
        .map(|c| {
            let n = map.len() as u32;
            *map.entry(*c).or_insert(n)
        })
        .collect()
}

/// Least normalized color array over all `d!` relabelings.
pub fn brute_canonical(s: &SetPartition) -> Vec<u32> {
    let d = s.degree();
    let n = 1usize << d;
    all_perms(d)
        .iter()
        .map(|p| {
            let mut colors = vec![0; n];
            for x in 0..n as u32 {
                colors[image_of(p, x) as usize] = s.colors()[x as usize];
            }
            normalized(&colors)
        })
        .min()
        .unwrap()
}

/// Triangle coherence straight from the definition: for each cell and each triangle
/// type, the number of `(b, c) ∈ β × γ` completing a triangle of that type.
pub fn brute_is_scheme(s: &SetPartition) -> bool {
    let d = s.degree();
    let n = 1u32 << d;
    let sizes_ok = (0..n).all(|x| {
        (0..n).all(|y| s.color(Subset(x)) != s.color(Subset(y)) || x.count_ones() == y.count_ones())
    });
    if !sizes_ok {
        return false;
    }
    let mut per_cell: HashMap<u32, BTreeMap<(u32, u32, [u8; 7]), u64>> = HashMap::new();
    for a in 0..n {
        let mut counts = BTreeMap::new();
        for b in 0..n {
            for c in 0..n {
                let (sa, sb, sc) = (Subset(a), Subset(b), Subset(c));
                let t = triple_invariant(sa, sb, sc);
                if t.is_triangle() {
                    *counts.entry((s.color(sb), s.color(sc), t.0)).or_insert(0) += 1;
                }
            }
        }
        match per_cell.get(&s.color(Subset(a))) {
            Some(prev) if *prev != counts => return false,
            Some(_) => {}
            None => {
                per_cell.insert(s.color(Subset(a)), counts);
            }
        }
    }
    true
}

/// `Sym(d)` with a multiplication table; `mul[i][j]` is "apply i, then j".
pub struct SymTable {
    pub d: usize,
    pub perms: Vec<Vec<u8>>,
    pub mul: Vec<Vec<u16>>,
    pub inv: Vec<u16>,
}

impl SymTable {
    pub fn new(d: usize) -> Self {
        let perms = all_perms(d);
        let index: HashMap<Vec<u8>, u16> = perms
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i as u16))
            .collect();
        let mul = perms
            .iter()
            .map(|p| {
                perms
                    .iter()
                    .map(|q| index[&p.iter().map(|&x| q[x as usize]).collect::<Vec<u8>>()])
                    .collect()
            })
            .collect();
        let inv = perms
            .iter()
            .map(|p| {
                let mut v = vec![0u8; d];
                for (i, &j) in p.iter().enumerate() {
                    v[j as usize] = i as u8;
                }
                index[&v]
            })
            .collect();
        SymTable { d, perms, mul, inv }
    }

    pub fn closure(&self, gens: &[u16]) -> BTreeSet<u16> {
        let mut seen: BTreeSet<u16> = BTreeSet::from([0]);
        let mut queue = VecDeque::from([0u16]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul[x as usize][g as usize];
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        seen
    }

    fn conjugate(&self, h: &BTreeSet<u16>, g: u16) -> BTreeSet<u16> {
        h.iter()
            .map(|&x| {
                self.mul[self.mul[self.inv[g as usize] as usize][x as usize] as usize][g as usize]
            })
            .collect()
    }

    /// One generating set per conjugacy class of subgroups.
    pub fn subgroup_classes(&self) -> Vec<Vec<u16>> {
        let n = self.perms.len() as u16;
        let mut raw: HashSet<BTreeSet<u16>> = HashSet::new();
        let mut reps: Vec<(Vec<u16>, BTreeSet<u16>)> = Vec::new();
        let add = |gens: Vec<u16>,
                   h: BTreeSet<u16>,
                   raw: &mut HashSet<BTreeSet<u16>>,
                   reps: &mut Vec<(Vec<u16>, BTreeSet<u16>)>| {
            if raw.contains(&h) {
                return;
            }
            for g in 0..n {
                raw.insert(self.conjugate(&h, g));
            }
            reps.push((gens, h));
        };
        add(Vec::new(), BTreeSet::from([0]), &mut raw, &mut reps);
        let mut i = 0;
        while i < reps.len() {
            let (gens, h) = reps[i].clone();
            for g in 0..n {
                if h.contains(&g) {
                    continue;
                }
                let mut gs = gens.clone();
                gs.push(g);
                let k = self.closure(&gs);
                add(gs, k, &mut raw, &mut reps);
            }
            i += 1;
        }
        reps.into_iter().map(|(g, _)| g).collect()
    }

    /// Orbits of the group generated by `gens` on subsets, as a partition.
    pub fn orbital(&self, gens: &[u16]) -> SetPartition {
        let n = 1usize << self.d;
        let mut colors = vec![u32::MAX; n];
        let mut next = 0;
        let elements = self.closure(gens);
        for x in 0..n {
            if colors[x] != u32::MAX {
                continue;
            }
            for &g in &elements {
                colors[image_of(&self.perms[g as usize], x as u32) as usize] = next;
            }
            next += 1;
        }
        SetPartition::from_colors(self.d, colors).unwrap()
    }
}

/// Orbital schemes of all subgroups of `Sym(d)`, as brute canonical forms.
pub fn orbital_scheme_forms(d: usize) -> BTreeSet<Vec<u32>> {
    let t = SymTable::new(d);
    t.subgroup_classes()
        .iter()
        .map(|g| brute_canonical(&t.orbital(g)))
        .collect()
}

/// A random subgroup of `Sym(d)` given by up to two random generators.
pub fn random_orbital(d: usize, rng: &mut ChaCha8Rng) -> SetPartition {
    let ngens = rng.gen_range(0..=2);
    let mut gens = Vec::new();
    for _ in 0..ngens {
        let mut p: Vec<u8> = (0..d as u8).collect();
        p.shuffle(rng);
        gens.push(p);
    }
    let n = 1usize << d;
    let mut uf: Vec<usize> = (0..n).collect();
    fn find(uf: &mut Vec<usize>, x: usize) -> usize {
        if uf[x] != x {
            let r = find(uf, uf[x]);
            uf[x] = r;
        }
        uf[x]
    }
    for p in &gens {
        for x in 0..n {
            let y = image_of(p, x as u32) as usize;
            let (a, b) = (find(&mut uf, x), find(&mut uf, y));
            uf[a] = b;
        }
    }
    let colors: Vec<u32> = (0..n).map(|x| find(&mut uf, x) as u32).collect();
    SetPartition::from_colors(d, colors).unwrap()
}

/// Merges a few random pairs of cells with equal member size.
pub fn random_coarsening(s: &SetPartition, merges: usize, rng: &mut ChaCha8Rng) -> SetPartition {
    let mut colors = s.colors().to_vec();
    for _ in 0..merges {
        let x = rng.gen_range(1..colors.len()) as u32;
        let k = x.count_ones();
        let peers: Vec<u32> = (1..colors.len() as u32)
            .filter(|y| y.count_ones() == k)
            .collect();
        let y = *peers.choose(rng).unwrap();
        let (cx, cy) = (colors[x as usize], colors[y as usize]);
        for c in colors.iter_mut() {
            if *c == cy {
                *c = cx;
            }
        }
    }
    SetPartition::from_colors(s.degree(), colors).unwrap()
}

/// Containment graph `{(a, b) ∈ α × β : a ⊆ b}` is biregular for all cells.
pub fn containment_biregular(s: &SetPartition) -> bool {
    let cells = s.cells();
    cells.iter().all(|alpha| {
        cells.iter().all(|beta| {
            let out: BTreeSet<usize> = alpha
                .iter()
                .map(|a| beta.iter().filter(|b| a.is_subset_of(**b)).count())
                .collect();
            let inn: BTreeSet<usize> = beta
                .iter()
                .map(|b| alpha.iter().filter(|a| a.is_subset_of(*b)).count())
                .collect();
            out.len() == 1 && inn.len() == 1
        })
    })
}

/// Every cell's complement family is a cell.
pub fn complement_closed(s: &SetPartition) -> bool {
    let d = s.degree();
    s.cells().iter().all(|cell| {
        let comp: BTreeSet<u32> = cell.iter().map(|a| a.complement(d).0).collect();
        let c = s.color(Subset(*comp.iter().next().unwrap()));
        let target: BTreeSet<u32> = s.cell(c).iter().map(|x| x.0).collect();
        comp == target
    })
}
