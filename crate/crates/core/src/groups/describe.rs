use std::collections::HashSet;
use std::fmt;

use super::{PermGroup, Permutation};

/// Coarse isomorphism-type fingerprint of a small permutation group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupDescription {
    pub order: usize,
    pub abelian: bool,
    /// Invariant factors `n_1 ≥ n_2 ≥ ...` with `n_{i+1} | n_i`, for abelian groups.
    pub invariants: Option<Vec<usize>>,
    pub involutions: usize,
    pub center_order: usize,
    pub exponent: usize,
    pub name: String,
}

impl fmt::Display for GroupDescription {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

fn commutes(a: &Permutation, b: &Permutation) -> bool {
    a.then(b) == b.then(a)
}

fn is_even(p: &Permutation) -> bool {
    p.cycles().iter().map(|c| c.len() - 1).sum::<usize>() % 2 == 0
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

fn prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Abelian invariants from the counts `#{g : g^(p^k) = 1}`, which equal
/// `p^(Σ_i min(k, e_i))` for the `p`-primary part `⊕ C_{p^e_i}`.
fn abelian_invariants(elements: &[Permutation], orders: &[usize]) -> Vec<usize> {
    let n = elements.len();
    let mut primary: Vec<Vec<usize>> = Vec::new();
    for p in prime_factors(n) {
        let mut exps_at_least = Vec::new();
        let mut prev_log = 0u32;
        let mut pk = p;
        loop {
            let count = orders.iter().filter(|&&o| pk % o == 0).count();
            let log = count.ilog(p);
            if log == prev_log {
                break;
            }
            exps_at_least.push((log - prev_log) as usize);
            prev_log = log;
            pk *= p;
        }
        // exps_at_least[k-1] = #{i : e_i >= k}
        let parts = exps_at_least.first().copied().unwrap_or(0);
        let mut cyclic = Vec::new();
        for i in 0..parts {
            let e = exps_at_least.iter().filter(|&&c| c > i).count();
            cyclic.push(p.pow(e as u32));
        }
        primary.push(cyclic);
    }
    let len = primary.iter().map(Vec::len).max().unwrap_or(0);
    (0..len)
        .map(|i| {
            primary
                .iter()
                .map(|c| c.get(i).copied().unwrap_or(1))
                .product()
        })
        .collect()
}

pub fn describe(group: &PermGroup) -> GroupDescription {
    let elements = group.elements();
    let n = elements.len();
    let gens = group.generators();
    let orders: Vec<usize> = elements.iter().map(Permutation::order).collect();
    let involutions = orders.iter().filter(|&&o| o == 2).count();
    let exponent = orders.iter().fold(1, |a, &o| num_integer::lcm(a, o));
    let abelian = gens
        .iter()
        .enumerate()
        .all(|(i, a)| gens[i + 1..].iter().all(|b| commutes(a, b)));
    let center: Vec<&Permutation> = elements
        .iter()
        .filter(|e| gens.iter().all(|g| commutes(e, g)))
        .collect();
    let center_involutions = center.iter().filter(|e| e.order() == 2).count();
    let invariants = abelian.then(|| abelian_invariants(elements, &orders));
    let d = group.degree();

    let name = if n == 1 {
        "1".to_string()
    } else if d >= 2 && n == factorial(d) && d > 2 {
        format!("Sym({d})")
    } else if d >= 4 && n == factorial(d) / 2 && elements.iter().all(is_even) {
        format!("Alt({d})")
    } else if let Some(inv) = &invariants {
        inv.iter()
            .map(|c| format!("C{c}"))
            .collect::<Vec<_>>()
            .join(" × ")
    } else {
        match (n, involutions, center.len(), exponent) {
            (8, 1, _, _) => "Q8".to_string(),
            (8, 5, _, _) => "D8".to_string(),
            (16, _, 4, 4) if center_involutions == 1 => "Q8∘C4".to_string(),
            (27, _, _, 9) => "C9 ⋊ C3".to_string(),
            (27, _, _, 3) => "3^(1+2)".to_string(),
            _ => format!("nonabelian of order {n}"),
        }
    };
    let distinct: HashSet<usize> = orders.iter().copied().collect();
    debug_assert!(distinct.contains(&1));
    GroupDescription {
        order: n,
        abelian,
        invariants,
        involutions,
        center_order: center.len(),
        exponent,
        name,
    }
}
