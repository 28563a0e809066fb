//! Finite permutation groups on `[d]`, stored with their full element lists.

mod describe;
mod named;
mod perm;

use std::collections::{HashSet, VecDeque};

pub use describe::{describe, GroupDescription};
pub use named::{named_group, NamedGroup};
pub use perm::{parse_cycles, Permutation};

pub use crate::search::{automorphism_group, weak_automorphism_group};

use crate::error::{Error, Result};
use crate::partition::SetPartition;
use crate::union_find::UnionFind;

/// Degree bound for operations that store or scan whole groups.
pub const MAX_GROUP_DEGREE: usize = 16;

#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    elements: Vec<Permutation>,
}

impl PermGroup {
    /// Breadth-first closure of `generators`. Elements appear in discovery order
    /// starting from the identity.
    pub fn generated(degree: usize, generators: &[Permutation]) -> Result<Self> {
        for g in generators {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch {
                    expected: degree,
                    found: g.degree(),
                });
            }
        }
        let generators: Vec<Permutation> = generators
            .iter()
            .filter(|g| !g.is_identity())
            .cloned()
            .collect();
        let id = Permutation::identity(degree);
        let mut seen: HashSet<Permutation> = HashSet::new();
        let mut elements = vec![id.clone()];
        seen.insert(id);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in &generators {
                let h = elements[i].then(g);
                if seen.insert(h.clone()) {
                    elements.push(h);
                    queue.push_back(elements.len() - 1);
                }
            }
        }
        Ok(PermGroup {
            degree,
            generators,
            elements,
        })
    }

    /// Closure of a non-empty generator list; the degree is taken from the first generator.
    pub fn closure(generators: &[Permutation]) -> Result<Self> {
        let degree = generators
            .first()
            .map(Permutation::degree)
            .ok_or_else(|| Error::InvalidArgument("no generators given".into()))?;
        Self::generated(degree, generators)
    }

    /// Wraps a list that is already closed under composition. Elements are sorted and a
    /// small generating set is picked greedily.
    pub fn from_elements(degree: usize, mut elements: Vec<Permutation>) -> Self {
        elements.sort();
        elements.dedup();
        let mut generators: Vec<Permutation> = Vec::new();
        let mut covered: HashSet<Permutation> = HashSet::new();
        covered.insert(Permutation::identity(degree));
        for e in &elements {
            if covered.contains(e) {
                continue;
            }
            generators.push(e.clone());
            let sub = PermGroup::generated(degree, &generators).expect("same degree");
            covered = sub.elements.into_iter().collect();
            if covered.len() == elements.len() {
                break;
            }
        }
        PermGroup {
            degree,
            generators,
            elements,
        }
    }

    pub fn trivial(degree: usize) -> Self {
        PermGroup {
            degree,
            generators: Vec::new(),
            elements: vec![Permutation::identity(degree)],
        }
    }

    pub fn symmetric(degree: usize) -> Self {
        let mut gens = Vec::new();
        if degree >= 2 {
            gens.push(Permutation::from_cycles(degree, &[vec![1, 2]]).unwrap());
        }
        if degree >= 3 {
            gens.push(Permutation::from_cycles(degree, &[(1..=degree).collect()]).unwrap());
        }
        Self::generated(degree, &gens).unwrap()
    }

    pub fn alternating(degree: usize) -> Self {
        let gens: Vec<Permutation> = (3..=degree)
            .map(|i| Permutation::from_cycles(degree, &[vec![1, 2, i]]).unwrap())
            .collect();
        Self::generated(degree, &gens).unwrap()
    }

    pub fn cyclic(degree: usize) -> Self {
        if degree < 2 {
            return Self::trivial(degree);
        }
        let c = Permutation::from_cycles(degree, &[(1..=degree).collect()]).unwrap();
        Self::generated(degree, &[c]).unwrap()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.elements.iter().any(|e| e == p)
    }

    /// Whether every element of `self` lies in `other`.
    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        let set: HashSet<&Permutation> = other.elements.iter().collect();
        self.degree == other.degree && self.elements.iter().all(|e| set.contains(e))
    }

    /// Same element set.
    pub fn same_elements(&self, other: &PermGroup) -> bool {
        self.order() == other.order() && self.is_subgroup_of(other)
    }

    /// Orbits on `[d]` as sorted lists of 1-based points, ordered by least point.
    pub fn point_orbits(&self) -> Vec<Vec<usize>> {
        let mut uf = UnionFind::new(self.degree);
        for g in &self.generators {
            for p in 0..self.degree {
                uf.union(p, g.apply(p));
            }
        }
        let labels = uf.labels();
        let count = labels.iter().copied().max().map_or(0, |m| m + 1);
        let mut orbits = vec![Vec::new(); count];
        for (p, &l) in labels.iter().enumerate() {
            orbits[l].push(p + 1);
        }
        orbits
    }

    pub fn is_transitive(&self) -> bool {
        self.point_orbits().len() <= 1
    }

    /// Partition of `2^[d]` into orbits.
    pub fn orbital_scheme(&self) -> SetPartition {
        let n = 1usize << self.degree;
        let mut uf = UnionFind::new(n);
        for g in &self.generators {
            let table = g.subset_table();
            for (x, &y) in table.iter().enumerate() {
                uf.union(x, y as usize);
            }
        }
        let labels = uf.labels().into_iter().map(|l| l as u32).collect();
        SetPartition::from_colors(self.degree, labels).expect("orbit labels are valid")
    }

    /// `G × H` acting on `[d + d']`, with `H` on the points after `d`.
    pub fn direct_product(&self, other: &PermGroup) -> PermGroup {
        let d = self.degree + other.degree;
        let mut gens = Vec::new();
        for g in &self.generators {
            let mut im: Vec<u8> = g.images().to_vec();
            im.extend((self.degree..d).map(|i| i as u8));
            gens.push(Permutation::from_images_unchecked(im));
        }
        for h in &other.generators {
            let mut im: Vec<u8> = (0..self.degree as u8).collect();
            im.extend(h.images().iter().map(|&i| i + self.degree as u8));
            gens.push(Permutation::from_images_unchecked(im));
        }
        PermGroup::generated(d, &gens).unwrap()
    }

    /// Imprimitive wreath product `self ≀ top` on `[n] × [k]`, where copy `i` of `[n]`
    /// occupies points `i n + 1 ..= (i + 1) n`.
    pub fn wreath(&self, top: &PermGroup) -> PermGroup {
        let n = self.degree;
        let k = top.degree;
        let d = n * k;
        let mut gens = Vec::new();
        for i in 0..k {
            for g in &self.generators {
                let mut im: Vec<u8> = (0..d as u8).collect();
                for p in 0..n {
                    im[i * n + p] = (i * n + g.apply(p)) as u8;
                }
                gens.push(Permutation::from_images_unchecked(im));
            }
        }
        for t in &top.generators {
            let mut im = vec![0u8; d];
            for i in 0..k {
                for p in 0..n {
                    im[i * n + p] = (t.apply(i) * n + p) as u8;
                }
            }
            gens.push(Permutation::from_images_unchecked(im));
        }
        PermGroup::generated(d, &gens).unwrap()
    }

    /// Conjugate group `x⁻¹ G x`, i.e. the image of `G` under relabeling by `x`.
    pub fn conjugate(&self, x: &Permutation) -> PermGroup {
        let xi = x.inverse();
        let gens: Vec<Permutation> = self.generators.iter().map(|g| xi.then(g).then(x)).collect();
        PermGroup::generated(self.degree, &gens).unwrap()
    }
}

/// Whether `s` is the orbital scheme of its own automorphism group.
pub fn is_schurian(s: &SetPartition) -> bool {
    automorphism_group(s).orbital_scheme() == *s
}
