//! Vector association schemes: partitions of `{0..k}^d` whose structure polynomials,
//! built from the Johnson scheme constants, do not depend on the representative.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{PermGroup, Permutation};
use crate::partition::{normalize_colors, SetPartition};
use crate::poly::{IntPolynomial, Polynomial, RationalPolynomial};
use crate::subset::Subset;

/// Largest profile count `(k+1)^d` handled by the exhaustive routines.
pub const MAX_PROFILES: usize = 81;
/// Exhaustion bound for [`johnson_p_oracle`].
pub const MAX_ORACLE_M: usize = 14;

/// A vector in `{0..k}^d`.
pub type Profile = Vec<u8>;

fn binomial(n: i64, r: i64) -> i128 {
    if r < 0 || n < 0 || r > n {
        return 0;
    }
    let r = r.min(n - r);
    (0..r).fold(1i128, |acc, t| acc * (n - t) as i128 / (t + 1) as i128)
}

fn factorial(n: usize) -> i128 {
    (1..=n as i128).product()
}

/// `k! · p^a_{bc}` as an integer polynomial in `m`.
pub fn johnson_p_scaled(k: usize, a: usize, b: usize, c: usize) -> IntPolynomial {
    let (k, a, b, c) = (k as i64, a as i64, b as i64, c as i64);
    let kf = factorial(k as usize);
    let mut total = IntPolynomial::zero();
    for i in 0..=k - a {
        let coef = binomial(k - a, i) * binomial(a, k - b - i) * binomial(a, k - c - i);
        let j = b + c + i - k;
        if coef == 0 || j < 0 {
            continue;
        }
        let scale = coef * kf / factorial(j as usize);
        total = total + Polynomial::falling(-k - a, j as usize).scale(&scale);
    }
    total
}

/// Structure constant `p^a_{bc}(m)` of the Johnson scheme `J(m, k)`.
pub fn johnson_p(k: usize, a: usize, b: usize, c: usize) -> RationalPolynomial {
    johnson_p_scaled(k, a, b, c).to_rational(factorial(k))
}

/// Exhaustive count of `k`-subsets `w ⊆ [m]` with `|u∖w| = b`, `|w∖v| = c` for a fixed
/// pair with `|u∖v| = a`.
pub fn johnson_p_oracle(m: usize, k: usize, a: usize, b: usize, c: usize) -> Result<u64> {
    if m > MAX_ORACLE_M {
        return Err(Error::InvalidArgument(format!(
            "m = {m} exceeds {MAX_ORACLE_M}"
        )));
    }
    if a > k || k + a > m || b > k || c > k {
        return Err(Error::InvalidArgument(format!(
            "no k-subsets with |u∖v| = {a} for k = {k}, m = {m}"
        )));
    }
    let u: u32 = (1 << k) - 1;
    let v: u32 = ((1 << (k - a)) - 1) | (((1 << a) - 1) << k);
    let count = (0u32..1 << m)
        .filter(|w| w.count_ones() as usize == k)
        .filter(|w| (u & !w).count_ones() as usize == b && (w & !v).count_ones() as usize == c)
        .count();
    Ok(count as u64)
}

/// Condition (Δ): `a ≤ b + c`, `b ≤ a + c`, `c ≤ a + b`.
pub fn delta_condition(a: usize, b: usize, c: usize) -> bool {
    a <= b + c && b <= a + c && c <= a + b
}

/// Componentwise (Δ), i.e. `p^a_{bc}` is not the zero polynomial.
pub fn delta_condition_profiles(a: &[u8], b: &[u8], c: &[u8]) -> bool {
    a.iter()
        .zip(b)
        .zip(c)
        .all(|((&x, &y), &z)| delta_condition(x as usize, y as usize, z as usize))
}

/// `p^a_{bc} = Π_i p^{a_i}_{b_i c_i}`.
pub fn profile_p(k: usize, a: &[u8], b: &[u8], c: &[u8]) -> RationalPolynomial {
    a.iter()
        .zip(b)
        .zip(c)
        .fold(RationalPolynomial::one(), |acc, ((&x, &y), &z)| {
            acc * johnson_p(k, x as usize, y as usize, z as usize)
        })
}

/// Leading monomial `Π_i (k−a_i)! / ((k−b_i)! c_i!²) · m^{c_i}` of `p^a_{bc}` when `b = a + c`.
pub fn leading_term(k: usize, a: &[u8], b: &[u8], c: &[u8]) -> Result<RationalPolynomial> {
    let ok = a.len() == b.len()
        && a.len() == c.len()
        && a.iter()
            .zip(b)
            .zip(c)
            .all(|((&x, &y), &z)| x + z == y && y as usize <= k);
    if !ok {
        return Err(Error::InvalidArgument(format!(
            "leading term needs b = a + c within 0..={k}, got a={a:?} b={b:?} c={c:?}"
        )));
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    let mut deg = 0;
    for ((&x, &y), &z) in a.iter().zip(b).zip(c) {
        num *= BigInt::from(factorial(k - x as usize));
        let cf = BigInt::from(factorial(z as usize));
        den *= BigInt::from(factorial(k - y as usize)) * &cf * &cf;
        deg += z as usize;
    }
    Ok(RationalPolynomial::monomial(
        num_rational::BigRational::new(num, den),
        deg,
    ))
}

/// Index of a profile: entry `i` is digit `i` in base `k + 1`.
pub fn profile_index(k: usize, p: &[u8]) -> usize {
    p.iter().rev().fold(0, |acc, &x| acc * (k + 1) + x as usize)
}

pub fn profile_at(k: usize, d: usize, mut index: usize) -> Profile {
    (0..d)
        .map(|_| {
            let x = (index % (k + 1)) as u8;
            index /= k + 1;
            x
        })
        .collect()
}

fn sorted_profile(p: &[u8]) -> Profile {
    let mut s = p.to_vec();
    s.sort_unstable();
    s
}

/// `(a^g)_{g(i)} = a_i`.
pub fn permute_profile(p: &[u8], g: &Permutation) -> Profile {
    let mut out = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        out[g.apply(i)] = x;
    }
    out
}

/// A partition of `{0..k}^d` whose cells lie inside `Sym(d)`-orbits, with `{(0)^d}` a cell.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VectorPartition {
    k: usize,
    d: usize,
    rank: usize,
    colors: Vec<u32>,
}

impl VectorPartition {
    pub fn from_colors(k: usize, d: usize, mut colors: Vec<u32>) -> Result<Self> {
        if k == 0 || d == 0 {
            return Err(Error::InvalidArgument("k and d must be positive".into()));
        }
        let n = (k + 1)
            .checked_pow(d as u32)
            .filter(|&n| n <= 1 << 20)
            .ok_or_else(|| Error::InvalidArgument(format!("(k+1)^d too large for k={k}, d={d}")))?;
        if colors.len() != n {
            return Err(Error::InvalidVectorPartition(format!(
                "expected {n} profile colors, got {}",
                colors.len()
            )));
        }
        let rank = normalize_colors(&mut colors);
        let mut shape: HashMap<u32, Profile> = HashMap::new();
        for (i, &c) in colors.iter().enumerate() {
            let p = profile_at(k, d, i);
            let s = sorted_profile(&p);
            match shape.get(&c) {
                Some(t) if *t != s => {
                    return Err(Error::InvalidVectorPartition(format!(
                        "cell of {p:?} meets two Sym(d)-orbits"
                    )))
                }
                Some(_) => {}
                None => {
                    shape.insert(c, s);
                }
            }
        }
        // the zero profile is its own orbit, so it is a singleton cell
        Ok(VectorPartition { k, d, rank, colors })
    }

    pub fn from_cells(k: usize, d: usize, cells: &[Vec<Profile>]) -> Result<Self> {
        let n = (k + 1).pow(d as u32);
        let mut colors = vec![u32::MAX; n];
        for (c, cell) in cells.iter().enumerate() {
            for p in cell {
                if p.len() != d || p.iter().any(|&x| x as usize > k) {
                    return Err(Error::InvalidVectorPartition(format!(
                        "profile {p:?} is not in {{0..{k}}}^{d}"
                    )));
                }
                let i = profile_index(k, p);
                if colors[i] != u32::MAX {
                    return Err(Error::InvalidVectorPartition(format!(
                        "profile {p:?} repeated"
                    )));
                }
                colors[i] = c as u32;
            }
        }
        if let Some(i) = colors.iter().position(|&c| c == u32::MAX) {
            return Err(Error::InvalidVectorPartition(format!(
                "profile {:?} is missing",
                profile_at(k, d, i)
            )));
        }
        Self::from_colors(k, d, colors)
    }

    /// `𝔖_k(Sym(d))`.
    pub fn trivial(k: usize, d: usize) -> Result<Self> {
        vas_orbital(&PermGroup::symmetric(d), k)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    pub fn profile_count(&self) -> usize {
        self.colors.len()
    }

    pub fn color(&self, p: &[u8]) -> u32 {
        self.colors[profile_index(self.k, p)]
    }

    pub fn cell(&self, color: u32) -> Vec<Profile> {
        (0..self.colors.len())
            .filter(|&i| self.colors[i] == color)
            .map(|i| profile_at(self.k, self.d, i))
            .collect()
    }

    pub fn cells(&self) -> Vec<Vec<Profile>> {
        let mut cells = vec![Vec::new(); self.rank];
        for (i, &c) in self.colors.iter().enumerate() {
            cells[c as usize].push(profile_at(self.k, self.d, i));
        }
        cells
    }

    /// `(0, …, 0, 1)^{Sym(d)}` is a single cell.
    pub fn is_homogeneous(&self) -> bool {
        let unit = |i: usize| {
            let mut p = vec![0u8; self.d];
            p[i] = 1;
            self.color(&p)
        };
        (1..self.d).all(|i| unit(i) == unit(0))
    }

    pub fn permute(&self, g: &Permutation) -> VectorPartition {
        let mut colors = vec![0; self.colors.len()];
        for (i, &c) in self.colors.iter().enumerate() {
            let p = permute_profile(&profile_at(self.k, self.d, i), g);
            colors[profile_index(self.k, &p)] = c;
        }
        VectorPartition::from_colors(self.k, self.d, colors).expect("relabeling keeps orbits")
    }

    /// Least normalized color vector over all relabelings of `[d]`.
    pub fn canonical(&self) -> VectorPartition {
        PermGroup::symmetric(self.d)
            .elements()
            .iter()
            .map(|g| self.permute(g))
            .min_by(|x, y| x.colors.cmp(&y.colors))
            .expect("group is nonempty")
    }

    pub fn refines(&self, other: &VectorPartition) -> bool {
        let mut map = vec![u32::MAX; self.rank];
        self.colors.iter().zip(&other.colors).all(|(&a, &b)| {
            let slot = &mut map[a as usize];
            if *slot == u32::MAX {
                *slot = b;
            }
            *slot == b
        })
    }

    /// Splits cell `color` into `part` and the rest.
    pub fn split_cell(&self, color: u32, part: &[Profile]) -> Result<VectorPartition> {
        let mut colors = self.colors.clone();
        for p in part {
            let i = profile_index(self.k, p);
            if colors[i] != color {
                return Err(Error::InvalidSplit(format!("{p:?} is not in cell {color}")));
            }
            colors[i] = self.rank as u32;
        }
        VectorPartition::from_colors(self.k, self.d, colors)
    }
}

/// Profile colored by its `G`-orbit.
pub fn vas_orbital(g: &PermGroup, k: usize) -> Result<VectorPartition> {
    let d = g.degree();
    let n = (k + 1)
        .checked_pow(d as u32)
        .ok_or_else(|| Error::InvalidArgument("too many profiles".into()))?;
    let mut colors = vec![u32::MAX; n];
    let mut next = 0;
    for i in 0..n {
        if colors[i] != u32::MAX {
            continue;
        }
        let p = profile_at(k, d, i);
        for h in g.elements() {
            colors[profile_index(k, &permute_profile(&p, h))] = next;
        }
        next += 1;
    }
    VectorPartition::from_colors(k, d, colors)
}

/// Permutations of `[d]` fixing every cell.
pub fn vas_automorphism_group(s: &VectorPartition) -> PermGroup {
    let elements: Vec<Permutation> = PermGroup::symmetric(s.d)
        .elements()
        .iter()
        .filter(|g| {
            (0..s.colors.len()).all(|i| {
                let p = permute_profile(&profile_at(s.k, s.d, i), g);
                s.colors[profile_index(s.k, &p)] == s.colors[i]
            })
        })
        .cloned()
        .collect();
    PermGroup::from_elements(s.d, elements)
}

pub fn is_vas_schurian(s: &VectorPartition) -> bool {
    vas_orbital(&vas_automorphism_group(s), s.k).is_ok_and(|o| o == *s)
}

/// All nonzero `k!^d · p^a_{bc}`, grouped by `a`.
struct Table {
    len: usize,
    // per a: (b, c, coefficient offset)
    entries: Vec<Vec<(u32, u32, usize)>>,
    coeffs: Vec<i128>,
}

impl Table {
    fn new(k: usize, d: usize) -> Table {
        let len = k * d + 1;
        let base: Vec<Vec<Vec<IntPolynomial>>> = (0..=k)
            .map(|a| {
                (0..=k)
                    .map(|b| (0..=k).map(|c| johnson_p_scaled(k, a, b, c)).collect())
                    .collect()
            })
            .collect();
        let n = (k + 1).pow(d as u32);
        let mut entries = vec![Vec::new(); n];
        let mut coeffs = Vec::new();
        for (ai, row) in entries.iter_mut().enumerate() {
            let a = profile_at(k, d, ai);
            for bi in 0..n {
                let b = profile_at(k, d, bi);
                for ci in 0..n {
                    let c = profile_at(k, d, ci);
                    if !delta_condition_profiles(&a, &b, &c) {
                        continue;
                    }
                    let mut p = IntPolynomial::one();
                    for i in 0..d {
                        p = &p * &base[a[i] as usize][b[i] as usize][c[i] as usize];
                    }
                    if p.is_zero() {
                        continue;
                    }
                    row.push((bi as u32, ci as u32, coeffs.len()));
                    let mut padded = p.coeffs().to_vec();
                    padded.resize(len, 0);
                    coeffs.extend(padded);
                }
            }
        }
        Table {
            len,
            entries,
            coeffs,
        }
    }

    /// `p^a_{βγ}` for every `(β, γ)` with a nonzero value.
    fn signature(&self, colors: &[u32], a: usize) -> Vec<((u32, u32), Vec<i128>)> {
        let mut acc: BTreeMap<(u32, u32), Vec<i128>> = BTreeMap::new();
        for &(b, c, off) in &self.entries[a] {
            let slot = acc
                .entry((colors[b as usize], colors[c as usize]))
                .or_insert_with(|| vec![0; self.len]);
            for (s, x) in slot.iter_mut().zip(&self.coeffs[off..off + self.len]) {
                *s += x;
            }
        }
        acc.into_iter().collect()
    }
}

/// A failure of representative independence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VasWitness {
    pub alpha: u32,
    pub a: Profile,
    pub a_prime: Profile,
    pub beta: u32,
    pub gamma: u32,
    pub p_a: RationalPolynomial,
    pub p_a_prime: RationalPolynomial,
}

impl fmt::Display for VasWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "cell {}: p^a_(β{},γ{}) = {} at a = {:?} but {} at a' = {:?}",
            self.alpha, self.beta, self.gamma, self.p_a, self.a, self.p_a_prime, self.a_prime
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VasCoherence {
    Coherent,
    Incoherent(VasWitness),
}

impl VasCoherence {
    pub fn is_coherent(&self) -> bool {
        matches!(self, VasCoherence::Coherent)
    }
}

fn check_size(k: usize, d: usize) -> Result<()> {
    let n = (k + 1).checked_pow(d as u32).unwrap_or(usize::MAX);
    if n > MAX_PROFILES {
        return Err(Error::TooLarge {
            vertices: n,
            limit: MAX_PROFILES,
        });
    }
    Ok(())
}

/// Exact check of `p^a_{βγ} = p^{a'}_{βγ}` for all cells and representatives.
pub fn vas_check(s: &VectorPartition) -> Result<VasCoherence> {
    check_size(s.k, s.d)?;
    let table = Table::new(s.k, s.d);
    Ok(check_with(&table, s))
}

fn check_with(table: &Table, s: &VectorPartition) -> VasCoherence {
    let sigs: Vec<_> = (0..s.colors.len())
        .into_par_iter()
        .map(|a| table.signature(&s.colors, a))
        .collect();
    let mut first: Vec<Option<usize>> = vec![None; s.rank];
    for a in 0..s.colors.len() {
        let alpha = s.colors[a];
        let Some(a0) = first[alpha as usize] else {
            first[alpha as usize] = Some(a);
            continue;
        };
        if sigs[a0] == sigs[a] {
            continue;
        }
        let zero = vec![0i128; table.len];
        let lookup = |i: usize, key: (u32, u32)| {
            sigs[i]
                .iter()
                .find(|(k, _)| *k == key)
                .map_or(zero.clone(), |(_, v)| v.clone())
        };
        let keys: BTreeSet<(u32, u32)> = sigs[a0].iter().chain(&sigs[a]).map(|(k, _)| *k).collect();
        let key = keys
            .into_iter()
            .find(|&key| lookup(a0, key) != lookup(a, key))
            .expect("signatures differ");
        let den = factorial(s.k).pow(s.d as u32);
        return VasCoherence::Incoherent(VasWitness {
            alpha,
            a: profile_at(s.k, s.d, a0),
            a_prime: profile_at(s.k, s.d, a),
            beta: key.0,
            gamma: key.1,
            p_a: IntPolynomial::new(lookup(a0, key)).to_rational(den),
            p_a_prime: IntPolynomial::new(lookup(a, key)).to_rational(den),
        });
    }
    VasCoherence::Coherent
}

/// Structure polynomial `p^α_{βγ}`, evaluated at the first member of `α`.
pub fn structure_polynomial(
    s: &VectorPartition,
    alpha: u32,
    beta: u32,
    gamma: u32,
) -> RationalPolynomial {
    let a = &s.cell(alpha)[0];
    let mut total = RationalPolynomial::zero();
    for b in s.cell(beta) {
        for c in s.cell(gamma) {
            if delta_condition_profiles(a, &b, &c) {
                total = total + profile_p(s.k, a, &b, &c);
            }
        }
    }
    total
}

fn wl_step(table: &Table, s: &VectorPartition) -> VectorPartition {
    let sigs: Vec<_> = (0..s.colors.len())
        .into_par_iter()
        .map(|a| table.signature(&s.colors, a))
        .collect();
    let mut ids: HashMap<(u32, &Vec<((u32, u32), Vec<i128>)>), u32> = HashMap::new();
    let colors = sigs
        .iter()
        .enumerate()
        .map(|(a, sig)| {
            let next = ids.len() as u32;
            *ids.entry((s.colors[a], sig)).or_insert(next)
        })
        .collect();
    VectorPartition::from_colors(s.k, s.d, colors).expect("refinement keeps orbits")
}

fn stabilize_with(table: &Table, s: &VectorPartition) -> VectorPartition {
    let mut cur = s.clone();
    loop {
        let next = wl_step(table, &cur);
        if next.rank == cur.rank {
            return cur;
        }
        cur = next;
    }
}

/// Coarsest refinement of `s` with representative-independent structure polynomials.
pub fn vas_stabilize(s: &VectorPartition) -> Result<VectorPartition> {
    check_size(s.k, s.d)?;
    Ok(stabilize_with(&Table::new(s.k, s.d), s))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VasRecord {
    pub scheme: VectorPartition,
    pub rank: usize,
    pub homogeneous: bool,
    pub schurian: bool,
}

/// Every VAS on `{0..k}^d` up to relabeling of `[d]`, sorted by rank.
///
/// Starts from `𝔖_k(Sym(d))`; each state spawns, for every cell and every 2-split of
/// it, the stabilization of the split. Any VAS strictly below a state is below one
/// of its children, so the search is complete.
pub fn vas_enumerate(k: usize, d: usize) -> Result<Vec<VasRecord>> {
    check_size(k, d)?;
    let table = Table::new(k, d);
    let start = VectorPartition::trivial(k, d)?;
    let start = stabilize_with(&table, &start).canonical();
    let mut seen: BTreeSet<VectorPartition> = BTreeSet::from([start.clone()]);
    let mut frontier = vec![start];
    while !frontier.is_empty() {
        let children: Vec<VectorPartition> = frontier
            .par_iter()
            .flat_map_iter(|s| {
                let mut out = Vec::new();
                for (color, cell) in s.cells().into_iter().enumerate() {
                    let n = cell.len();
                    if n < 2 {
                        continue;
                    }
                    // splits containing the first member, excluding the whole cell
                    for mask in 0u64..(1 << (n - 1)) - 1 {
                        let part: Vec<Profile> = std::iter::once(cell[0].clone())
                            .chain(
                                (1..n)
                                    .filter(|i| mask >> (i - 1) & 1 == 1)
                                    .map(|i| cell[i].clone()),
                            )
                            .collect();
                        let split = s
                            .split_cell(color as u32, &part)
                            .expect("members of the cell");
                        out.push(stabilize_with(&table, &split).canonical());
                    }
                }
                out
            })
            .collect();
        frontier = Vec::new();
        for c in children {
            if seen.insert(c.clone()) {
                frontier.push(c);
            }
        }
    }
    let mut out: Vec<VasRecord> = seen
        .into_iter()
        .filter(|s| check_with(&table, s).is_coherent())
        .map(|s| VasRecord {
            rank: s.rank,
            homogeneous: s.is_homogeneous(),
            schurian: is_vas_schurian(&s),
            scheme: s,
        })
        .collect();
    out.sort_by(|x, y| (x.rank, &x.scheme).cmp(&(y.rank, &y.scheme)));
    Ok(out)
}

/// `α ∈ 𝔖 ⇒ (k)^d − α ∈ 𝔖`.
pub fn is_complement_closed(s: &VectorPartition) -> bool {
    s.cells().iter().all(|cell| {
        let comp: Vec<Profile> = cell
            .iter()
            .map(|p| p.iter().map(|&x| s.k as u8 - x).collect())
            .collect();
        let c = s.color(&comp[0]);
        comp.iter().all(|p| s.color(p) == c) && s.cell(c).len() == comp.len()
    })
}

/// For all cells `α, β`, the graph `{(a, b) ∈ α × β : a ≤ b}` is biregular.
pub fn is_domination_biregular(s: &VectorPartition) -> bool {
    let cells = s.cells();
    let le = |a: &Profile, b: &Profile| a.iter().zip(b).all(|(x, y)| x <= y);
    cells.iter().all(|alpha| {
        cells.iter().all(|beta| {
            let out: BTreeSet<usize> = alpha
                .iter()
                .map(|a| beta.iter().filter(|b| le(a, b)).count())
                .collect();
            let inn: BTreeSet<usize> = beta
                .iter()
                .map(|b| alpha.iter().filter(|a| le(a, b)).count())
                .collect();
            out.len() == 1 && inn.len() == 1
        })
    })
}

/// Every cell sums to a constant vector `(x)^d`.
pub fn has_balanced_row_sums(s: &VectorPartition) -> bool {
    s.cells().iter().all(|cell| {
        let sums: Vec<usize> = (0..s.d)
            .map(|i| cell.iter().map(|p| p[i] as usize).sum())
            .collect();
        sums.iter().all(|&x| x == sums[0])
    })
}

/// The `k = 1` correspondence: a profile is the indicator vector of a subset.
pub fn to_set_partition(s: &VectorPartition) -> Result<SetPartition> {
    if s.k != 1 {
        return Err(Error::InvalidArgument(format!("k = {} is not 1", s.k)));
    }
    // with k = 1, the profile index is the subset bitmask
    SetPartition::from_colors(s.d, s.colors.clone())
}

pub fn from_set_partition(p: &SetPartition) -> Result<VectorPartition> {
    let colors = (0..1u32 << p.degree())
        .map(|x| p.color(Subset(x)))
        .collect();
    VectorPartition::from_colors(1, p.degree(), colors)
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VasFile {
    k: usize,
    degree: usize,
    cells: Vec<Vec<Vec<i64>>>,
}

pub fn parse_vas(text: &str) -> Result<VectorPartition> {
    let file: VasFile = serde_json::from_str(text)?;
    let cells = file
        .cells
        .iter()
        .map(|cell| {
            cell.iter()
                .map(|p| {
                    if p.len() != file.degree || p.iter().any(|&x| x < 0 || x > file.k as i64) {
                        Err(Error::InvalidVectorPartition(format!(
                            "profile {p:?} is not in {{0..{}}}^{}",
                            file.k, file.degree
                        )))
                    } else {
                        Ok(p.iter().map(|&x| x as u8).collect())
                    }
                })
                .collect::<Result<Vec<Profile>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    VectorPartition::from_cells(file.k, file.degree, &cells)
}

/// Canonical text form: cells ordered by least profile index, one per line.
pub fn serialize_vas(s: &VectorPartition) -> String {
    let cells = s.cells();
    let mut out = format!(
        "{{\n  \"k\": {},\n  \"degree\": {},\n  \"cells\": [\n",
        s.k, s.d
    );
    for (i, cell) in cells.iter().enumerate() {
        let body: Vec<String> = cell
            .iter()
            .map(|p| {
                let xs: Vec<String> = p.iter().map(|x| x.to_string()).collect();
                format!("[{}]", xs.join(","))
            })
            .collect();
        out.push_str(&format!("    [{}]", body.join(",")));
        out.push_str(if i + 1 < cells.len() { ",\n" } else { "\n" });
    }
    out.push_str("  ]\n}\n");
    out
}

pub fn read_vas(path: impl AsRef<Path>) -> Result<VectorPartition> {
    parse_vas(&std::fs::read_to_string(path)?)
}

pub fn write_vas(path: impl AsRef<Path>, s: &VectorPartition) -> Result<()> {
    std::fs::write(path, serialize_vas(s))?;
    Ok(())
}
