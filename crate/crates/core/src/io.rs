//! The JSON scheme file format: `{"degree": d, "cells": [[[1, 2], ...], ...]}`.
//!
//! Subsets are strictly increasing arrays of elements in `1..=d`; the empty set is `[]`.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::SetPartition;
use crate::subset::{Subset, MAX_DEGREE};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SchemeFile {
    degree: usize,
    cells: Vec<Vec<Vec<i64>>>,
}

fn subset_from_json(elements: &[i64], degree: usize) -> Result<Subset> {
    let mut bits = 0u32;
    let mut prev = 0i64;
    for &e in elements {
        if e < 1 || e > degree as i64 {
            return Err(Error::ElementOutOfRange { element: e, degree });
        }
        if e <= prev {
            return Err(Error::Malformed(format!(
                "subset {elements:?} is not strictly increasing"
            )));
        }
        prev = e;
        bits |= 1 << (e - 1);
    }
    Ok(Subset(bits))
}

pub fn parse_partition(text: &str) -> Result<SetPartition> {
    let file: SchemeFile = serde_json::from_str(text)?;
    if file.degree > MAX_DEGREE {
        return Err(Error::DegreeTooLarge {
            degree: file.degree,
            limit: MAX_DEGREE,
        });
    }
    let cells = file
        .cells
        .iter()
        .map(|cell| {
            cell.iter()
                .map(|s| subset_from_json(s, file.degree))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    SetPartition::from_cells(file.degree, &cells)
}

/// Cells in canonical file order: by member size, then least bitmask; members by bitmask.
pub fn canonical_cells(s: &SetPartition) -> Vec<Vec<Subset>> {
    // cells() already lists members by increasing bitmask
    let mut cells = s.cells();
    cells.sort_by_key(|c| (c[0].len(), c[0].0));
    cells
}

fn write_subset(out: &mut String, s: Subset) {
    out.push('[');
    for (i, e) in s.elements().iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        write!(out, "{e}").unwrap();
    }
    out.push(']');
}

/// Canonical serialization, one cell per line.
pub fn serialize_partition(s: &SetPartition) -> String {
    let mut out = format!("{{\n  \"degree\": {},\n  \"cells\": [\n", s.degree());
    let cells = canonical_cells(s);
    for (i, cell) in cells.iter().enumerate() {
        out.push_str("    [");
        for (j, &m) in cell.iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            write_subset(&mut out, m);
        }
        out.push(']');
        if i + 1 < cells.len() {
            out.push(',');
        }
        out.push('\n');
    }
    out.push_str("  ]\n}\n");
    out
}

pub fn read_partition(path: impl AsRef<Path>) -> Result<SetPartition> {
    parse_partition(&std::fs::read_to_string(path)?)
}

pub fn write_partition(path: impl AsRef<Path>, s: &SetPartition) -> Result<()> {
    std::fs::write(path, serialize_partition(s))?;
    Ok(())
}
