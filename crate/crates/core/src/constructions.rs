//! Direct sums, wreath products, index-two splittings, and the catalog of nonschurian
//! schemes of degrees 8 and 9.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::coherence::{is_fully_coherent_with_symmetry, is_scheme};
use crate::error::{Error, Result};
use crate::groups::{automorphism_group, describe, NamedGroup, PermGroup};
use crate::partition::SetPartition;
use crate::subset::{Subset, MAX_DEGREE};

/// `S ⊕ S'` on `[d + d']`: the cells `{a ⊔ a'}` with `S'` on the points after `d`.
/// Color of `a ⊔ a'` is `color(a) · rank(S') + color(a')` before renumbering.
pub fn direct_sum(s: &SetPartition, t: &SetPartition) -> Result<SetPartition> {
    let (d, e) = (s.degree(), t.degree());
    if d + e > MAX_DEGREE {
        return Err(Error::DegreeTooLarge {
            degree: d + e,
            limit: MAX_DEGREE,
        });
    }
    let rt = t.rank() as u32;
    let low = (1u32 << d) - 1;
    let colors = (0..1u32 << (d + e))
        .map(|x| s.colors()[(x & low) as usize] * rt + t.colors()[(x >> d) as usize])
        .collect();
    SetPartition::from_colors(d + e, colors)
}

/// Wreath product `S ≀ G` for `G` on `[k]`: copy `i` of `S` occupies points
/// `i d + 1 ..= (i + 1) d`, and the cells of `S^k` are fused along `G`-orbits of
/// cell-index tuples.
pub fn wreath_product(s: &SetPartition, g: &PermGroup) -> Result<SetPartition> {
    let d = s.degree();
    let k = g.degree();
    if d * k > MAX_DEGREE {
        return Err(Error::DegreeTooLarge {
            degree: d * k,
            limit: MAX_DEGREE,
        });
    }
    let low = (1u32 << d) - 1;
    let mut ids: HashMap<Vec<u32>, u32> = HashMap::new();
    let mut colors = Vec::with_capacity(1 << (d * k));
    for x in 0..1u32 << (d * k) {
        let tuple: Vec<u32> = (0..k)
            .map(|i| s.colors()[((x >> (i * d)) & low) as usize])
            .collect();
        let canon = g
            .elements()
            .iter()
            .map(|p| {
                let mut t = vec![0; k];
                for (i, &c) in tuple.iter().enumerate() {
                    t[p.apply(i)] = c;
                }
                t
            })
            .min()
            .unwrap();
        let next = ids.len() as u32;
        colors.push(*ids.entry(canon).or_insert(next));
    }
    SetPartition::from_colors(d * k, colors)
}

fn check_index_two(g: &PermGroup, h: &PermGroup) -> Result<()> {
    if g.degree() != h.degree() {
        return Err(Error::DegreeMismatch {
            expected: g.degree(),
            found: h.degree(),
        });
    }
    if !h.is_subgroup_of(g) || g.order() != 2 * h.order() {
        return Err(Error::InvalidSplit(format!(
            "subgroup of order {} is not of index 2 in a group of order {}",
            h.order(),
            g.order()
        )));
    }
    Ok(())
}

/// Colors of the cells of `𝔖(G)` that split in `𝔖(H)`, in increasing order.
pub fn split_cells(g: &PermGroup, h: &PermGroup) -> Result<Vec<u32>> {
    check_index_two(g, h)?;
    let sg = g.orbital_scheme();
    let sh = h.orbital_scheme();
    let mut halves: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); sg.rank()];
    for (x, &c) in sg.colors().iter().enumerate() {
        halves[c as usize].insert(sh.colors()[x]);
    }
    Ok((0..sg.rank() as u32)
        .filter(|&c| halves[c as usize].len() > 1)
        .collect())
}

/// Refines the selected cells of `𝔖(G)` (by color) into their two `𝔖(H)`-halves.
/// Coherence of the result is not guaranteed.
pub fn split_scheme(g: &PermGroup, h: &PermGroup, which: &[u32]) -> Result<SetPartition> {
    let splittable = split_cells(g, h)?;
    let which: BTreeSet<u32> = which.iter().copied().collect();
    if which.is_empty() || which.len() >= splittable.len() {
        return Err(Error::InvalidSplit(format!(
            "need a proper nonempty subset of the {} split cells, got {}",
            splittable.len(),
            which.len()
        )));
    }
    if let Some(bad) = which.iter().find(|c| !splittable.contains(c)) {
        return Err(Error::InvalidSplit(format!("cell {bad} does not split")));
    }
    let sg = g.orbital_scheme();
    let sh = h.orbital_scheme();
    let n = sg.rank() as u32;
    let colors = sg
        .colors()
        .iter()
        .zip(sh.colors())
        .map(|(&cg, &ch)| if which.contains(&cg) { n + ch } else { cg })
        .collect();
    SetPartition::from_colors(g.degree(), colors)
}

/// The split cells not in `which`.
pub fn complementary_split(g: &PermGroup, h: &PermGroup, which: &[u32]) -> Result<Vec<u32>> {
    Ok(split_cells(g, h)?
        .into_iter()
        .filter(|c| !which.contains(c))
        .collect())
}

/// Splits each listed part out of the cell containing it.
pub fn separate(s: &SetPartition, parts: &[Vec<Subset>]) -> Result<SetPartition> {
    let mut cur = s.clone();
    for part in parts {
        let first = *part
            .first()
            .ok_or_else(|| Error::InvalidSplit("empty part".into()))?;
        cur = cur.split_cell(cur.color(first), part)?;
    }
    Ok(cur)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CatalogId {
    S1,
    S2,
    S3,
    S4,
    S5,
    S6,
    S7,
    S8,
    N9a,
    N9b,
}

impl CatalogId {
    pub const ALL: [CatalogId; 10] = [
        CatalogId::S1,
        CatalogId::S2,
        CatalogId::S3,
        CatalogId::S4,
        CatalogId::S5,
        CatalogId::S6,
        CatalogId::S7,
        CatalogId::S8,
        CatalogId::N9a,
        CatalogId::N9b,
    ];
    pub const DEGREE_8: [CatalogId; 8] = [
        CatalogId::S1,
        CatalogId::S2,
        CatalogId::S3,
        CatalogId::S4,
        CatalogId::S5,
        CatalogId::S6,
        CatalogId::S7,
        CatalogId::S8,
    ];
    pub const DEGREE_9: [CatalogId; 2] = [CatalogId::N9a, CatalogId::N9b];

    /// Group pair `(G, H)` the scheme sits between.
    pub fn groups(self) -> (NamedGroup, NamedGroup) {
        use CatalogId::*;
        match self {
            S1 | S2 => (NamedGroup::G1, NamedGroup::H1),
            S3 | S4 => (NamedGroup::G2, NamedGroup::H2),
            S5 | S6 => (NamedGroup::G3, NamedGroup::H3),
            S7 | S8 => (NamedGroup::G4, NamedGroup::H4),
            N9a | N9b => (NamedGroup::A9, NamedGroup::M27),
        }
    }

    pub fn expected(self) -> TableRow {
        use CatalogId::*;
        let (rank, aut_order, aut_name, homogeneous, vertex_transitive) = match self {
            S1 => (25, 16, "Q8∘C4", true, true),
            S2 => (30, 16, "Q8∘C4", true, true),
            S3 => (28, 8, "Q8", true, true),
            S4 => (36, 8, "Q8", true, true),
            S5 => (28, 8, "C4 × C2", true, false),
            S6 => (51, 8, "C4 × C2", false, false),
            S7 => (43, 8, "C4 × C2", false, false),
            S8 => (49, 8, "C4 × C2", false, false),
            N9a => (24, 27, "C9 ⋊ C3", true, true),
            N9b => (26, 27, "C9 ⋊ C3", true, true),
        };
        TableRow {
            rank,
            aut_order,
            aut_description: aut_name.to_string(),
            homogeneous,
            vertex_transitive,
            fully_coherent: true,
            schurian: false,
        }
    }
}

impl fmt::Display for CatalogId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for CatalogId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CatalogId::ALL
            .into_iter()
            .find(|c| c.to_string().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::UnknownName(s.to_string()))
    }
}

fn subsets(sets: &[&[usize]], d: usize) -> Vec<Subset> {
    sets.iter()
        .map(|s| Subset::from_elements(s, d).unwrap())
        .collect()
}

/// Arithmetic progressions `{a, a+r, a+2r, a+3r}` mod 8 with `a` even and `r ∈ {1, 5}`,
/// on points `z + 1`.
pub fn even_progressions() -> Vec<Subset> {
    let mut out: Vec<Subset> = (0..8)
        .step_by(2)
        .flat_map(|a| [1, 5].map(move |r| (a, r)))
        .map(|(a, r)| Subset((0..4).fold(0, |m, i| m | 1 << ((a + i * r) % 8))))
        .collect();
    out.sort();
    out.dedup();
    out
}

/// The explicit 3-sets and 4-sets separated from `𝔖(G4)`.
pub fn g4_parts() -> (Vec<Subset>, Vec<Subset>) {
    let alpha = subsets(
        &[
            &[1, 2, 3],
            &[1, 3, 6],
            &[1, 4, 7],
            &[1, 7, 8],
            &[2, 5, 7],
            &[3, 4, 5],
            &[3, 5, 8],
            &[5, 6, 7],
        ],
        8,
    );
    let beta = subsets(
        &[&[1, 2, 3, 6], &[1, 4, 7, 8], &[2, 5, 6, 7], &[3, 4, 5, 8]],
        8,
    );
    (alpha, beta)
}

/// The `G`-cells split in the primary member of each pair (S1, S3, S5, S7, N9a).
/// Splitting a cell forces its complement cell to split as well.
fn primary_split(id: CatalogId) -> Vec<u32> {
    use CatalogId::*;
    let (g, _) = id.groups();
    let sg = g.group().orbital_scheme();
    let seeds: Vec<Subset> = match id {
        S1 | S2 | S3 | S4 | S5 | S6 => subsets(&[&[1, 2, 3, 4]], 8),
        S7 | S8 => {
            let (alpha, beta) = g4_parts();
            vec![alpha[0], alpha[0].complement(8), beta[0]]
        }
        N9a | N9b => {
            let x = Subset::from_elements(&[1, 2, 3, 5], 9).unwrap();
            vec![x, x.complement(9)]
        }
    };
    let mut cells: Vec<u32> = seeds.iter().map(|&s| sg.color(s)).collect();
    cells.sort();
    cells.dedup();
    cells
}

fn build(id: CatalogId) -> Result<SetPartition> {
    use CatalogId::*;
    let (gn, hn) = id.groups();
    let (g, h) = (gn.group(), hn.group());
    let primary = primary_split(id);
    let which = match id {
        S1 | S3 | S5 | S7 | N9a => primary,
        S2 | S4 | S6 | S8 | N9b => complementary_split(&g, &h, &primary)?,
    };
    let s = split_scheme(&g, &h, &which)?;
    // the primary members must agree with their explicit descriptions
    let expected = match id {
        S1 | S3 | S5 => Some(separate(&g.orbital_scheme(), &[even_progressions()])?),
        S7 => {
            let (alpha, beta) = g4_parts();
            let alpha_c: Vec<Subset> = alpha.iter().map(|a| a.complement(8)).collect();
            Some(separate(&g.orbital_scheme(), &[alpha, alpha_c, beta])?)
        }
        N9a => {
            let x = Subset::from_elements(&[1, 2, 3, 6], 9)?;
            let sh = h.orbital_scheme();
            let half = sh.cell(sh.color(x));
            let half_c: Vec<Subset> = half.iter().map(|a| a.complement(9)).collect();
            Some(separate(&g.orbital_scheme(), &[half, half_c])?)
        }
        _ => None,
    };
    if let Some(e) = expected {
        if e != s {
            return Err(Error::InvalidSplit(format!(
                "{id}: index-two split disagrees with the explicit construction"
            )));
        }
    }
    Ok(s)
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub id: CatalogId,
    pub scheme: SetPartition,
    pub expected: TableRow,
}

/// Builds a catalog scheme and verifies that it is a set association scheme.
pub fn catalog(id: CatalogId) -> Result<CatalogEntry> {
    let scheme = build(id)?;
    if !is_scheme(&scheme) {
        return Err(Error::InvalidSplit(format!(
            "{id} failed the coherence check"
        )));
    }
    Ok(CatalogEntry {
        id,
        scheme,
        expected: id.expected(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub rank: usize,
    pub aut_order: usize,
    pub aut_description: String,
    pub homogeneous: bool,
    pub vertex_transitive: bool,
    pub fully_coherent: bool,
    pub schurian: bool,
}

impl TableRow {
    /// Names and rendered values of the columns that differ.
    pub fn diff(&self, other: &TableRow) -> Vec<(&'static str, String, String)> {
        let a = self.columns();
        let b = other.columns();
        a.into_iter()
            .zip(b)
            .filter(|(x, y)| x.1 != y.1)
            .map(|(x, y)| (x.0, x.1, y.1))
            .collect()
    }

    pub fn columns(&self) -> Vec<(&'static str, String)> {
        let yn = |b: bool| if b { "Yes" } else { "No" }.to_string();
        vec![
            ("rank", self.rank.to_string()),
            ("aut_order", self.aut_order.to_string()),
            ("aut", self.aut_description.clone()),
            ("homogeneous", yn(self.homogeneous)),
            ("vertex_transitive", yn(self.vertex_transitive)),
            ("fully_coherent", yn(self.fully_coherent)),
            ("schurian", yn(self.schurian)),
        ]
    }
}

/// Table columns for a set association scheme.
pub fn table_row(s: &SetPartition) -> TableRow {
    let aut = automorphism_group(s);
    let desc = describe(&aut);
    TableRow {
        rank: s.rank(),
        aut_order: aut.order(),
        aut_description: desc.name,
        homogeneous: s.is_homogeneous(),
        vertex_transitive: aut.is_transitive(),
        fully_coherent: is_fully_coherent_with_symmetry(s, &aut),
        schurian: aut.orbital_scheme() == *s,
    }
}
