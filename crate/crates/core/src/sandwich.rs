//! Hamming sandwiches `[m]^𝔖`: the pair coloring of `[m]^d` by the cell of the
//! disagreement set, together with a generic pairwise WL oracle for configurations.

use std::collections::HashMap;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coherence::is_scheme;
use crate::error::{Error, Result};
use crate::groups::{automorphism_group, is_schurian};
use crate::partition::{normalize_colors, SetPartition};
use crate::poly::Scalar;
use crate::subset::{for_each_triangle, Subset};
use crate::union_find::UnionFind;

/// Largest vertex count for an explicit `n × n` color table.
pub const MAX_MATERIALIZED_VERTICES: usize = 6561;
/// Largest vertex count accepted by the `n³` configuration WL.
pub const MAX_WL_VERTICES: usize = 1024;
/// Largest vertex count for explicit connectivity checks.
pub const MAX_CONNECTIVITY_VERTICES: usize = 10_000;

/// A coloring of ordered vertex pairs.
pub trait PairColoring: Sync {
    fn vertex_count(&self) -> usize;
    fn color(&self, u: usize, v: usize) -> u32;
}

/// Explicit pair coloring with colors numbered by first occurrence in row-major order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Configuration {
    n: usize,
    rank: usize,
    colors: Vec<u32>,
}

impl Configuration {
    pub fn from_colors(n: usize, mut colors: Vec<u32>) -> Result<Self> {
        if colors.len() != n * n {
            return Err(Error::Malformed(format!("expected {} pair colors", n * n)));
        }
        let rank = normalize_colors(&mut colors);
        Ok(Configuration { n, rank, colors })
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> u32) -> Result<Self> {
        if n > MAX_MATERIALIZED_VERTICES {
            return Err(Error::TooLarge {
                vertices: n,
                limit: MAX_MATERIALIZED_VERTICES,
            });
        }
        let mut colors = Vec::with_capacity(n * n);
        for u in 0..n {
            for v in 0..n {
                colors.push(f(u, v));
            }
        }
        Self::from_colors(n, colors)
    }

    pub fn materialize(c: &impl PairColoring) -> Result<Self> {
        Self::from_fn(c.vertex_count(), |u, v| c.color(u, v))
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|u| (0..u).all(|v| self.color(u, v) == self.color(v, u)))
    }

    /// Diagonal pairs and off-diagonal pairs never share a color.
    pub fn diagonal_is_separated(&self) -> bool {
        let mut on = vec![false; self.rank];
        for u in 0..self.n {
            on[self.color(u, u) as usize] = true;
        }
        (0..self.n).all(|u| (0..self.n).all(|v| u == v || !on[self.color(u, v) as usize]))
    }

    /// `self ≤ other`: every color class of `self` lies inside one of `other`.
    pub fn refines(&self, other: &Configuration) -> bool {
        if self.n != other.n {
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
}

impl PairColoring for Configuration {
    fn vertex_count(&self) -> usize {
        self.n
    }

    #[inline]
    fn color(&self, u: usize, v: usize) -> u32 {
        self.colors[u * self.n + v]
    }
}

/// One round of pairwise WL: `(c(u,v), c(v,u), {(c(u,w), c(w,v)) : w})`, starting with
/// the diagonal separated. Returns the refinement and whether it is stable.
pub fn cc_wl_step(c: &Configuration) -> Result<(Configuration, bool)> {
    let n = c.n;
    if n > MAX_WL_VERTICES {
        return Err(Error::TooLarge {
            vertices: n,
            limit: MAX_WL_VERTICES,
        });
    }
    let base: Vec<u32> = (0..n * n)
        .map(|i| c.colors[i] * 2 + u32::from(i / n == i % n))
        .collect();
    let base = Configuration::from_colors(n, base)?;
    let sigs: Vec<Vec<(u64, u32)>> = (0..n * n)
        .into_par_iter()
        .map(|i| {
            let (u, v) = (i / n, i % n);
            let mut keys: Vec<u64> = (0..n)
                .map(|w| ((base.color(u, w) as u64) << 32) | base.color(w, v) as u64)
                .collect();
            keys.sort_unstable();
            let mut out: Vec<(u64, u32)> = Vec::new();
            for k in keys {
                match out.last_mut() {
                    Some((last, cnt)) if *last == k => *cnt += 1,
                    _ => out.push((k, 1)),
                }
            }
            out
        })
        .collect();
    let mut ids: HashMap<(u32, u32, &Vec<(u64, u32)>), u32> = HashMap::new();
    let mut colors = Vec::with_capacity(n * n);
    for (i, sig) in sigs.iter().enumerate() {
        let (u, v) = (i / n, i % n);
        let next = ids.len() as u32;
        colors.push(
            *ids.entry((base.color(u, v), base.color(v, u), sig))
                .or_insert(next),
        );
    }
    let out = Configuration::from_colors(n, colors)?;
    let stable = out.rank == c.rank;
    Ok((out, stable))
}

/// Coarsest coherent refinement of a pair coloring.
pub fn cc_wl_stabilize(c: &Configuration) -> Result<Configuration> {
    let mut cur = c.clone();
    loop {
        let (next, stable) = cc_wl_step(&cur)?;
        if stable {
            return Ok(cur);
        }
        cur = next;
    }
}

pub fn is_coherent_configuration(c: &Configuration) -> Result<bool> {
    Ok(cc_wl_step(c)?.1)
}

/// `[m]^𝔖` with vertices `[m]^d` encoded in base `m` (coordinate `i` is digit `i`).
#[derive(Clone, Debug)]
pub struct HammingSandwich {
    scheme: SetPartition,
    m: usize,
    n: usize,
}

impl HammingSandwich {
    pub fn new(scheme: SetPartition, m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidArgument(format!(
                "m = {m} must be at least 2"
            )));
        }
        let n = m
            .checked_pow(scheme.degree() as u32)
            .filter(|&n| n <= u32::MAX as usize)
            .ok_or_else(|| Error::InvalidArgument("vertex count overflows".into()))?;
        Ok(HammingSandwich { scheme, m, n })
    }

    pub fn scheme(&self) -> &SetPartition {
        &self.scheme
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn rank(&self) -> usize {
        self.scheme.rank()
    }

    pub fn digits(&self, mut v: usize) -> Vec<usize> {
        (0..self.scheme.degree())
            .map(|_| {
                let r = v % self.m;
                v /= self.m;
                r
            })
            .collect()
    }

    /// `{i : u_i ≠ v_i}`.
    pub fn disagreement(&self, mut u: usize, mut v: usize) -> Subset {
        let mut bits = 0u32;
        for i in 0..self.scheme.degree() {
            if u % self.m != v % self.m {
                bits |= 1 << i;
            }
            u /= self.m;
            v /= self.m;
        }
        Subset(bits)
    }

    pub fn materialize(&self) -> Result<Configuration> {
        Configuration::materialize(self)
    }

    /// Number of `w` with `disagreement(u, w) ∈ β` and `disagreement(w, v) ∈ γ`.
    pub fn count_paths(&self, u: usize, v: usize, beta: u32, gamma: u32) -> u64 {
        (0..self.n)
            .filter(|&w| {
                self.scheme.color(self.disagreement(u, w)) == beta
                    && self.scheme.color(self.disagreement(w, v)) == gamma
            })
            .count() as u64
    }

    /// A vertex whose disagreement with vertex 0 is `a`.
    pub fn vertex_with_support(&self, a: Subset) -> usize {
        let mut v = 0;
        let mut p = 1;
        for i in 0..self.scheme.degree() {
            if a.contains(i + 1) {
                v += p;
            }
            p *= self.m;
        }
        v
    }

    /// Whether the graph of pairs colored `cell` is connected.
    pub fn color_graph_connected(&self, cell: u32) -> bool {
        let members = self.scheme.cell(cell);
        let d = self.scheme.degree();
        let m = self.m;
        let mut uf = UnionFind::new(self.n);
        let powers: Vec<usize> = (0..d).map(|i| m.pow(i as u32)).collect();
        for u in 0..self.n {
            let du = self.digits(u);
            for &dset in &members {
                let pos: Vec<usize> = dset.elements().iter().map(|e| e - 1).collect();
                // change each coordinate in `pos` to every other value
                let mut shift = vec![1usize; pos.len()];
                loop {
                    let mut v = u;
                    for (j, &i) in pos.iter().enumerate() {
                        let new = (du[i] + shift[j]) % m;
                        v = v - du[i] * powers[i] + new * powers[i];
                    }
                    uf.union(u, v);
                    if uf.components() == 1 {
                        return true;
                    }
                    let mut j = 0;
                    while j < shift.len() {
                        shift[j] += 1;
                        if shift[j] < m {
                            break;
                        }
                        shift[j] = 1;
                        j += 1;
                    }
                    if j == shift.len() {
                        break;
                    }
                }
            }
        }
        uf.components() == 1
    }
}

impl PairColoring for HammingSandwich {
    fn vertex_count(&self) -> usize {
        self.n
    }

    #[inline]
    fn color(&self, u: usize, v: usize) -> u32 {
        self.scheme.color(self.disagreement(u, v))
    }
}

/// `p^a_{βγ}(m) = Σ (m−1)^{|b∩c∖a|} (m−2)^{|a∩b∩c|}` over triangles `(a, b, c)` with
/// `b ∈ β`, `c ∈ γ`, for one subset `a`.
pub fn sandwich_constant_at<T: Scalar>(
    s: &SetPartition,
    m: &T,
    a: Subset,
    beta: u32,
    gamma: u32,
) -> T {
    let m1 = m.clone() - T::one();
    let m2 = m.clone() - T::from_i64(2);
    let d = s.degree();
    let mut counts = vec![vec![0u64; d + 1]; d + 1];
    for_each_triangle(a, d, |b, c, abc| {
        if s.color(b) == beta && s.color(c) == gamma {
            let outside = (b.0 & c.0 & !a.0).count_ones() as usize;
            counts[outside][abc as usize] += 1;
        }
    });
    let mut total = T::zero();
    for (i, row) in counts.iter().enumerate() {
        for (j, &n) in row.iter().enumerate() {
            if n > 0 {
                total = total + T::from_i64(n as i64) * m1.pow(i as u32) * m2.pow(j as u32);
            }
        }
    }
    total
}

/// The structure constant `p^α_{βγ}(m)` of `[m]^𝔖` evaluated at the representative `a`.
///
/// The value is recomputed for every member of `a`'s cell and asserted equal.
pub fn sandwich_structure_constants<T: Scalar>(
    s: &SetPartition,
    m: &T,
    beta: u32,
    gamma: u32,
    a: Subset,
) -> T {
    let value = sandwich_constant_at(s, m, a, beta, gamma);
    for other in s.cell(s.color(a)) {
        let v = sandwich_constant_at(s, m, other, beta, gamma);
        assert_eq!(
            v, value,
            "structure constant depends on the representative ({a} vs {other})"
        );
    }
    value
}

/// Lower bound on `m` above which coherent sandwiches come from schemes: `3^d + 4`.
pub fn guarantee_bound(d: usize) -> usize {
    3usize.pow(d as u32) + 4
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Recovered {
    pub scheme: SetPartition,
    /// Whether the recovered partition is triangle-coherent.
    pub coherent: bool,
    /// `m ≥ 3^d + 4`.
    pub guaranteed: bool,
    pub warning: Option<String>,
}

/// Reads off the partition of `2^[d]` from a pair coloring of `[m]^d` that is coarser
/// than the coordinatewise trivial coloring and finer than the Hamming distance.
pub fn recover_sas(c: &impl PairColoring, m: usize, d: usize) -> Result<Recovered> {
    let shape = HammingSandwich::new(SetPartition::discrete(d), m)?;
    if c.vertex_count() != shape.vertex_count() {
        return Err(Error::NotSandwiched(format!(
            "{} vertices, expected {m}^{d}",
            c.vertex_count()
        )));
    }
    let n = c.vertex_count();
    let mut by_set = vec![u32::MAX; 1 << d];
    let mut size_of: HashMap<u32, u32> = HashMap::new();
    for u in 0..n {
        for v in 0..n {
            let dset = shape.disagreement(u, v);
            let col = c.color(u, v);
            let slot = &mut by_set[dset.index()];
            if *slot == u32::MAX {
                *slot = col;
            } else if *slot != col {
                return Err(Error::NotSandwiched(format!(
                    "pairs with disagreement set {dset} carry different colors"
                )));
            }
            if *size_of.entry(col).or_insert(dset.len() as u32) != dset.len() as u32 {
                return Err(Error::NotSandwiched(format!(
                    "color {col} mixes Hamming distances"
                )));
            }
        }
    }
    let scheme = SetPartition::from_colors(d, by_set)?;
    let coherent = is_scheme(&scheme);
    let bound = guarantee_bound(d);
    let guaranteed = m >= bound;
    let warning = (!guaranteed).then(|| {
        format!("m = {m} is below 3^d + 4 = {bound}; the recovered partition is not guaranteed coherent")
    });
    Ok(Recovered {
        scheme,
        coherent,
        guaranteed,
        warning,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SandwichReport {
    pub m: usize,
    pub degree: usize,
    pub vertices: String,
    pub rank: usize,
    pub primitive: bool,
    /// `(m!)^d · |Aut(𝔖)|`, in decimal.
    pub aut_order: String,
    pub schurian: bool,
    pub aut_primitive: bool,
    /// Nonidentity color graphs found connected, when checked explicitly.
    pub connected_colors: Option<usize>,
    pub nonidentity_colors: usize,
}

pub fn sandwich_report(s: &SetPartition, m: usize) -> Result<SandwichReport> {
    let x = HammingSandwich::new(s.clone(), m)?;
    let aut = automorphism_group(s);
    let m_fact: BigUint = (1..=m as u64).product();
    let aut_order = m_fact.pow(s.degree() as u32) * BigUint::from(aut.order());
    let nonidentity: Vec<u32> = (0..s.rank() as u32)
        .filter(|&c| c != s.color(Subset::EMPTY))
        .collect();
    let connected_colors = (x.vertex_count() <= MAX_CONNECTIVITY_VERTICES).then(|| {
        nonidentity
            .par_iter()
            .filter(|&&c| x.color_graph_connected(c))
            .count()
    });
    Ok(SandwichReport {
        m,
        degree: s.degree(),
        vertices: BigUint::from(m).pow(s.degree() as u32).to_string(),
        rank: s.rank(),
        primitive: s.is_homogeneous() && m >= 3,
        aut_order: aut_order.to_string(),
        schurian: is_schurian(s),
        aut_primitive: aut.is_transitive() && m >= 3,
        connected_colors,
        nonidentity_colors: nonidentity.len(),
    })
}

struct AutSearch<'a> {
    c: &'a Configuration,
    img: Vec<usize>,
    used: Vec<bool>,
    count: u64,
}

impl AutSearch<'_> {
    fn dfs(&mut self, u: usize) {
        let n = self.c.n;
        if u == n {
            self.count += 1;
            return;
        }
        for x in 0..n {
            if self.used[x] {
                continue;
            }
            let ok = self.c.color(u, u) == self.c.color(x, x)
                && (0..u).all(|v| {
                    let y = self.img[v];
                    self.c.color(u, v) == self.c.color(x, y)
                        && self.c.color(v, u) == self.c.color(y, x)
                });
            if ok {
                self.img[u] = x;
                self.used[x] = true;
                self.dfs(u + 1);
                self.used[x] = false;
            }
        }
    }
}

/// Order of the group of vertex permutations preserving every pair color, by
/// exhaustive backtracking. Intended for a dozen vertices or so.
pub fn configuration_automorphism_count(c: &Configuration) -> Result<u64> {
    if c.n > 16 {
        return Err(Error::TooLarge {
            vertices: c.n,
            limit: 16,
        });
    }
    let mut s = AutSearch {
        c,
        img: vec![0; c.n],
        used: vec![false; c.n],
        count: 0,
    };
    s.dfs(0);
    Ok(s.count)
}

/// For every size-homogeneous partition of `2^[d]` with `{∅}` a cell: whether `[m]^P`
/// is a coherent configuration and whether `P` is a set association scheme.
pub fn fusion_experiment(d: usize, m: usize) -> Result<Vec<(SetPartition, bool, bool)>> {
    let mut out = Vec::new();
    for p in size_homogeneous_partitions(d) {
        let x = HammingSandwich::new(p.clone(), m)?.materialize()?;
        let cc = is_coherent_configuration(&x)?;
        let scheme = is_scheme(&p);
        out.push((p, cc, scheme));
    }
    Ok(out)
}

/// All size-homogeneous partitions of `2^[d]` (small `d` only).
pub fn size_homogeneous_partitions(d: usize) -> Vec<SetPartition> {
    // set partitions of each size class, combined by product
    let classes: Vec<Vec<u32>> = (0..=d)
        .map(|k| {
            (0..1u32 << d)
                .filter(|x| x.count_ones() as usize == k)
                .collect()
        })
        .collect();
    let mut acc: Vec<Vec<u32>> = vec![vec![0; 1 << d]];
    let mut offset = 0u32;
    for class in classes {
        let parts = restricted_growth(class.len());
        let width = class.len() as u32;
        let mut next = Vec::new();
        for base in &acc {
            for rg in &parts {
                let mut colors = base.clone();
                for (x, &r) in class.iter().zip(rg) {
                    colors[*x as usize] = offset + r;
                }
                next.push(colors);
            }
        }
        acc = next;
        offset += width;
    }
    acc.into_iter()
        .map(|c| SetPartition::from_colors(d, c).unwrap())
        .collect()
}

/// Restricted growth strings of length `n` (set partitions of `[n]`).
fn restricted_growth(n: usize) -> Vec<Vec<u32>> {
    fn rec(i: usize, n: usize, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for v in 0..=max + 1 {
            let v = if i == 0 { 0 } else { v };
            cur.push(v);
            rec(i + 1, n, max.max(v), cur, out);
            cur.pop();
            if i == 0 {
                break;
            }
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        return vec![Vec::new()];
    }
    rec(0, n, 0, &mut Vec::new(), &mut out);
    out
}
