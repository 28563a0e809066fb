use std::fmt;
use std::str::FromStr;

use super::{parse_cycles, PermGroup, Permutation};
use crate::error::{Error, Result};

/// The groups used to build the degree-8 and degree-9 catalog schemes.
///
/// Affine maps `x ↦ a x + b` act on `ℤ/8` (resp. `ℤ/9`) with residue `z` at point `z + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NamedGroup {
    /// Full affine group mod 8, `⟨x+1, 3x, 5x⟩`.
    G1,
    /// `⟨x+2, 3x+1, 5x⟩`, the Pauli group.
    H1,
    /// `⟨x+1, 3x⟩`, quasidihedral of order 16.
    G2,
    /// `⟨x+2, 3x+1⟩ ≅ Q8`, regular.
    H2,
    /// `⟨x+1, 5x⟩`, modular of order 16.
    G3,
    /// `⟨x+2, 5x⟩`, intransitive.
    H3,
    G4,
    H4,
    /// Full affine group mod 9, `⟨x+1, 2x⟩`.
    A9,
    /// `⟨x+1, 4x⟩` mod 9, of order 27.
    M27,
}

impl NamedGroup {
    pub const ALL: [NamedGroup; 10] = [
        NamedGroup::G1,
        NamedGroup::H1,
        NamedGroup::G2,
        NamedGroup::H2,
        NamedGroup::G3,
        NamedGroup::H3,
        NamedGroup::G4,
        NamedGroup::H4,
        NamedGroup::A9,
        NamedGroup::M27,
    ];

    pub fn degree(self) -> usize {
        match self {
            NamedGroup::A9 | NamedGroup::M27 => 9,
            _ => 8,
        }
    }

    pub fn generators(self) -> Vec<Permutation> {
        let aff8 = |a, b| Permutation::affine(8, a, b).unwrap();
        let aff9 = |a, b| Permutation::affine(9, a, b).unwrap();
        let cyc = |s: &str| parse_cycles(s, 8).unwrap();
        match self {
            NamedGroup::G1 => vec![aff8(1, 1), aff8(3, 0), aff8(5, 0)],
            NamedGroup::H1 => vec![aff8(1, 2), aff8(3, 1), aff8(5, 0)],
            NamedGroup::G2 => vec![aff8(1, 1), aff8(3, 0)],
            NamedGroup::H2 => vec![aff8(1, 2), aff8(3, 1)],
            NamedGroup::G3 => vec![aff8(1, 1), aff8(5, 0)],
            NamedGroup::H3 => vec![aff8(1, 2), aff8(5, 0)],
            NamedGroup::G4 => vec![cyc("(1,3,5,7)(2,4,6,8)"), cyc("(2,4)(6,8)")],
            NamedGroup::H4 => vec![cyc("(1,3,5,7)(2,4,6,8)"), cyc("(2,6)(4,8)")],
            NamedGroup::A9 => vec![aff9(1, 1), aff9(2, 0)],
            NamedGroup::M27 => vec![aff9(1, 1), aff9(4, 0)],
        }
    }

    pub fn group(self) -> PermGroup {
        PermGroup::generated(self.degree(), &self.generators()).expect("consistent degrees")
    }
}

impl fmt::Display for NamedGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for NamedGroup {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        NamedGroup::ALL
            .into_iter()
            .find(|g| g.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownName(s.to_string()))
    }
}

pub fn named_group(id: &str) -> Result<PermGroup> {
    Ok(id.parse::<NamedGroup>()?.group())
}
