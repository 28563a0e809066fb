//! Acceptance run: one line per criterion, then a nonzero exit if any failed.
//!
//! Degree 8 enumeration (about four minutes on one core) only runs with
//! `SETSCHEME_LONG_RUN=1`.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use setscheme::coherence::{is_scheme, structure_constants, wl_stabilize, Mode};
use setscheme::constructions::{catalog, direct_sum, table_row, wreath_product, CatalogId};
use setscheme::enumeration::{enumerate_all, EnumerationOptions};
use setscheme::groups::{automorphism_group, is_schurian, PermGroup, Permutation};
use setscheme::sandwich::{
    cc_wl_stabilize, configuration_automorphism_count, sandwich_report,
    sandwich_structure_constants, HammingSandwich,
};
use setscheme::search::canonical_form;
use setscheme::vector::{delta_condition, johnson_p, johnson_p_oracle, vas_enumerate, vas_orbital};
use setscheme::{SetPartition, Subset};

use common::{
    brute_canonical, complement_closed, containment_biregular, orbital_scheme_forms,
    random_coarsening, random_orbital,
};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn cli(args: &[&str]) -> (i32, Vec<u8>) {
    let o = Command::new(env!("CARGO_BIN_EXE_setscheme"))
        .args(args)
        .output()
        .unwrap();
    (o.status.code().unwrap_or(-1), o.stdout)
}

fn structural(s: &SetPartition) -> Outcome {
    ensure!(
        complement_closed(s),
        "not complement closed: {:?}",
        s.colors()
    );
    ensure!(
        containment_biregular(s),
        "containment not biregular: {:?}",
        s.colors()
    );
    Ok(String::new())
}

fn table1() -> Outcome {
    let (code, out) = cli(&["table", "table1"]);
    ensure!(code == 0, "`table table1` exited {code}");
    let rows: Value = serde_json::from_slice(&out).map_err(|e| e.to_string())?;
    ensure!(rows.as_array().map(Vec::len) == Some(8), "expected 8 rows");
    let ranks = [25, 30, 28, 36, 28, 51, 43, 49];
    let orders = [16, 16, 8, 8, 8, 8, 8, 8];
    let names = [
        "Q8∘C4", "Q8∘C4", "Q8", "Q8", "C4 × C2", "C4 × C2", "C4 × C2", "C4 × C2",
    ];
    let homogeneous = [true, true, true, true, true, false, false, false];
    let transitive = [true, true, true, true, false, false, false, false];
    for (i, id) in CatalogId::DEGREE_8.into_iter().enumerate() {
        let s = catalog(id).map_err(|e| e.to_string())?.scheme;
        let row = table_row(&s);
        ensure!(row.rank == ranks[i], "{id}: rank {}", row.rank);
        ensure!(row.aut_order == orders[i], "{id}: |Aut| {}", row.aut_order);
        ensure!(
            row.aut_description == names[i],
            "{id}: Aut {}",
            row.aut_description
        );
        ensure!(row.homogeneous == homogeneous[i], "{id}: homogeneous");
        ensure!(
            row.vertex_transitive == transitive[i],
            "{id}: vertex transitive"
        );
        ensure!(row.fully_coherent && !row.schurian, "{id}: flags");
        ensure!(common::brute_is_scheme(&s), "{id}: brute coherence check");
        structural(&s)?;
    }
    Ok("8 rows exact".into())
}

fn table2() -> Outcome {
    let (code, _) = cli(&["table", "table2"]);
    ensure!(code == 0, "`table table2` exited {code}");
    for (id, rank) in [(CatalogId::N9a, 24), (CatalogId::N9b, 26)] {
        let s = catalog(id).map_err(|e| e.to_string())?.scheme;
        let row = table_row(&s);
        ensure!(
            row.rank == rank && row.aut_order == 27,
            "{id}: rank {} |Aut| {}",
            row.rank,
            row.aut_order
        );
        ensure!(
            row.aut_description == "C9 ⋊ C3",
            "{id}: Aut {}",
            row.aut_description
        );
        ensure!(
            row.homogeneous && row.vertex_transitive && row.fully_coherent,
            "{id}: flags"
        );
        ensure!(!row.schurian && !is_schurian(&s), "{id}: schurian");
        structural(&s)?;
    }
    Ok("ranks 24, 26; |Aut| 27".into())
}

fn classification() -> Outcome {
    for d in 2..=6 {
        let state = enumerate_all(d, &EnumerationOptions::default()).map_err(|e| e.to_string())?;
        ensure!(state.complete, "degree {d} incomplete");
        ensure!(
            state.nonschurian().count() == 0,
            "degree {d} has nonschurian classes"
        );
        let found: BTreeSet<Vec<u32>> = state
            .results
            .iter()
            .map(|r| brute_canonical(&r.form.to_partition()))
            .collect();
        ensure!(
            found.len() == state.results.len(),
            "degree {d}: duplicate classes"
        );
        ensure!(
            found == orbital_scheme_forms(d),
            "degree {d}: differs from the subgroup scan"
        );
        for r in &state.results {
            structural(&r.form.to_partition())?;
        }
    }
    let d7 = enumerate_all(7, &EnumerationOptions::default()).map_err(|e| e.to_string())?;
    ensure!(
        d7.complete && d7.nonschurian().count() == 0,
        "degree 7 has nonschurian classes"
    );
    let mut msg = format!(
        "d<=6 equal to subgroup scan; d=7: {} classes, 0 nonschurian",
        d7.results.len()
    );
    if std::env::var_os("SETSCHEME_LONG_RUN").is_some() {
        let opts = EnumerationOptions {
            long_run: true,
            ..Default::default()
        };
        let d8 = enumerate_all(8, &opts).map_err(|e| e.to_string())?;
        let found: BTreeSet<_> = d8.nonschurian().map(|r| r.form.clone()).collect();
        let expected: BTreeSet<_> = CatalogId::DEGREE_8
            .into_iter()
            .map(|id| canonical_form(&catalog(id).unwrap().scheme))
            .collect();
        ensure!(d8.complete, "degree 8 incomplete");
        ensure!(
            found == expected,
            "degree 8 nonschurian classes differ from the catalog"
        );
        msg += &format!(
            "; d=8: {} classes, 8 nonschurian = catalog",
            d8.results.len()
        );
    } else {
        msg += "; d=8 skipped (set SETSCHEME_LONG_RUN=1)";
    }
    Ok(msg)
}

fn sandwich_oracle() -> Outcome {
    let mut checked = 0;
    for d in 1..=3usize {
        let state = enumerate_all(d, &EnumerationOptions::default()).map_err(|e| e.to_string())?;
        for rec in &state.results {
            let s = rec.form.to_partition();
            for m in 3..=5usize {
                let x = HammingSandwich::new(s.clone(), m).map_err(|e| e.to_string())?;
                let c = x.materialize().map_err(|e| e.to_string())?;
                ensure!(
                    cc_wl_stabilize(&c).map_err(|e| e.to_string())? == c,
                    "WL split [{m}]^S at d={d}"
                );
                let n = m.pow(d as u32);
                let digit = |v: usize, i: usize| v / m.pow(i as u32) % m;
                let support = |u: usize, v: usize| {
                    Subset(
                        (0..d)
                            .filter(|&i| digit(u, i) != digit(v, i))
                            .map(|i| 1 << i)
                            .sum(),
                    )
                };
                for a in 0..1u32 << d {
                    let v: usize = (0..d)
                        .filter(|&i| a >> i & 1 == 1)
                        .map(|i| m.pow(i as u32))
                        .sum();
                    let mut counts = vec![vec![0i64; s.rank()]; s.rank()];
                    for w in 0..n {
                        counts[s.color(support(0, w)) as usize][s.color(support(w, v)) as usize] +=
                            1;
                    }
                    for beta in 0..s.rank() as u32 {
                        for gamma in 0..s.rank() as u32 {
                            let p = sandwich_structure_constants(
                                &s,
                                &(m as i64),
                                beta,
                                gamma,
                                Subset(a),
                            );
                            ensure!(
                                p == counts[beta as usize][gamma as usize],
                                "d={d} m={m} a={a:b}"
                            );
                            checked += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(format!("{checked} constants exact, all WL stable"))
}

fn sandwich_slice() -> Outcome {
    let s5 = catalog(CatalogId::S5).map_err(|e| e.to_string())?.scheme;
    let aut = automorphism_group(&s5);
    ensure!(s5.is_homogeneous(), "S5 not homogeneous");
    ensure!(
        aut.order() == 8 && !aut.is_transitive(),
        "Aut(S5) order {}",
        aut.order()
    );
    let r = sandwich_report(&s5, 3).map_err(|e| e.to_string())?;
    ensure!(
        r.vertices == "6561" && r.rank == 28,
        "vertices {} rank {}",
        r.vertices,
        r.rank
    );
    ensure!(
        r.nonidentity_colors == 27 && r.connected_colors == Some(27),
        "connected {:?}",
        r.connected_colors
    );
    ensure!(r.primitive, "not primitive");
    ensure!(r.aut_order == "13436928", "|Aut| {}", r.aut_order);
    let trivial = SetPartition::trivial(2);
    let c = HammingSandwich::new(trivial.clone(), 3)
        .unwrap()
        .materialize()
        .unwrap();
    let brute = configuration_automorphism_count(&c).map_err(|e| e.to_string())?;
    let formula = sandwich_report(&trivial, 3)
        .map_err(|e| e.to_string())?
        .aut_order;
    ensure!(
        brute == 72 && formula == "72",
        "n=9: brute {brute}, formula {formula}"
    );
    Ok("6561 vertices, rank 28, 27/27 connected, |Aut| 13436928; n=9 brute |Aut| 72".into())
}

fn johnson() -> Outcome {
    let mut checked = 0;
    for k in 1..=3usize {
        for m in 2 * k..=12 {
            for a in 0..=k {
                for b in 0..=k {
                    for c in 0..=k {
                        let v = johnson_p(k, a, b, c)
                            .eval_integer(m as i64)
                            .ok_or("non-integer value")?;
                        let o = johnson_p_oracle(m, k, a, b, c).map_err(|e| e.to_string())?;
                        ensure!(
                            v == BigInt::from(o),
                            "k={k} m={m} ({a},{b},{c}): {v} vs {o}"
                        );
                        let positive = v > BigInt::from(0);
                        ensure!(
                            positive == (delta_condition(a, b, c) && a + b + c <= m),
                            "positivity k={k} m={m} ({a},{b},{c})"
                        );
                        checked += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{checked} evaluations exact"))
}

fn vas() -> Outcome {
    let two_two = vas_enumerate(2, 2).map_err(|e| e.to_string())?;
    let trivial = setscheme::vector::VectorPartition::trivial(2, 2).unwrap();
    for r in two_two.iter().filter(|r| r.homogeneous) {
        ensure!(r.scheme == trivial, "nontrivial homogeneous VAS at (2,2)");
    }
    let two_three = vas_enumerate(2, 3).map_err(|e| e.to_string())?;
    let hom: Vec<_> = two_three.iter().filter(|r| r.homogeneous).collect();
    ensure!(
        hom.iter().all(|r| r.schurian),
        "nonschurian homogeneous VAS at (2,3)"
    );
    let alt = vas_orbital(&PermGroup::alternating(3), 2)
        .map_err(|e| e.to_string())?
        .canonical();
    let orbit: BTreeSet<Vec<u8>> = common::all_perms(3).into_iter().collect();
    let splitting: Vec<_> = hom
        .iter()
        .filter(|r| {
            r.scheme
                .cells()
                .iter()
                .any(|c| c.len() < orbit.len() && c.iter().all(|p| orbit.contains(p)))
        })
        .collect();
    ensure!(
        splitting.len() == 1,
        "{} homogeneous VAS split the orbit of (0,1,2)",
        splitting.len()
    );
    ensure!(
        splitting[0].scheme.canonical() == alt,
        "the split is not the Alt(3) orbital scheme"
    );
    Ok(format!(
        "(2,2): {} VAS, homogeneous trivial; (2,3): {} homogeneous, all schurian, Alt(3) split",
        two_two.len(),
        hom.len()
    ))
}

/// Permutations of `[k]` mapping every cell-index tuple into its `G`-orbit.
fn g_bar(g: &PermGroup, r: u32) -> usize {
    let k = g.degree();
    let act = |p: &Permutation, t: &[u32]| {
        let mut out = vec![0; k];
        for (i, &c) in t.iter().enumerate() {
            out[p.apply(i)] = c;
        }
        out
    };
    let tuples: Vec<Vec<u32>> = (0..r.pow(k as u32))
        .map(|x| (0..k as u32).map(|i| x / r.pow(i) % r).collect())
        .collect();
    PermGroup::symmetric(k)
        .elements()
        .iter()
        .filter(|s| {
            tuples
                .iter()
                .all(|t| g.elements().iter().any(|h| act(h, t) == act(s, t)))
        })
        .count()
}

fn properties() -> Outcome {
    const SEEDS: u64 = 48;
    for seed in 0..SEEDS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = rng.gen_range(3..=5);
        let s = random_orbital(d, &mut rng);
        let p = random_coarsening(&s, rng.gen_range(1..=4), &mut rng);
        let q = random_coarsening(&p, rng.gen_range(1..=3), &mut rng);
        for mode in [Mode::Triangle, Mode::AllTypes] {
            let (wp, wq) = (wl_stabilize(&p, mode), wl_stabilize(&q, mode));
            ensure!(wp.refines(&p) && s.refines(&wp), "seed {seed}: WL bounds");
            ensure!(
                wl_stabilize(&wp, mode) == wp,
                "seed {seed}: WL not idempotent"
            );
            ensure!(wp.refines(&wq), "seed {seed}: WL not monotone");
            ensure!(is_scheme(&wp), "seed {seed}: WL output not a scheme");
            structural(&wp)?;
        }

        let (d1, d2) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let (a, b) = (random_orbital(d1, &mut rng), random_orbital(d2, &mut rng));
        let sum = direct_sum(&a, &b).map_err(|e| e.to_string())?;
        structural(&sum)?;
        let (ga, gb) = (automorphism_group(&a), automorphism_group(&b));
        ensure!(sum.rank() == a.rank() * b.rank(), "seed {seed}: sum rank");
        ensure!(
            automorphism_group(&sum).order() == ga.order() * gb.order(),
            "seed {seed}: sum Aut"
        );
        ensure!(
            is_schurian(&sum) == (is_schurian(&a) && is_schurian(&b)),
            "seed {seed}: sum schurian"
        );

        let k = rng.gen_range(2..=3);
        let base = random_orbital(rng.gen_range(1..=6 / k), &mut rng);
        let top = match rng.gen_range(0..3) {
            0 => PermGroup::trivial(k),
            1 => PermGroup::alternating(k),
            _ => PermGroup::symmetric(k),
        };
        let w = wreath_product(&base, &top).map_err(|e| e.to_string())?;
        structural(&w)?;
        let r = base.rank() as u32;
        let fixed: usize = top
            .elements()
            .iter()
            .map(|g| {
                let moved: usize = g.cycles().iter().map(Vec::len).sum();
                r.pow((g.cycles().len() + k - moved) as u32) as usize
            })
            .sum();
        ensure!(w.rank() == fixed / top.order(), "seed {seed}: wreath rank");
        let aut = automorphism_group(&base).order();
        ensure!(
            automorphism_group(&w).order() == aut.pow(k as u32) * g_bar(&top, r),
            "seed {seed}: wreath Aut"
        );
    }

    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        pool.install(|| {
            let state = enumerate_all(5, &EnumerationOptions::default()).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(11);
            let p = random_coarsening(&random_orbital(6, &mut rng), 5, &mut rng);
            let w = wl_stabilize(&p, Mode::AllTypes);
            (
                serde_json::to_string(&state.results).unwrap(),
                structure_constants(&w, Mode::Triangle),
                vas_enumerate(2, 2).unwrap(),
            )
        })
    };
    let one = run(1);
    ensure!(
        [2, 4].into_iter().all(|t| run(t) == one),
        "output depends on thread count"
    );
    Ok(format!("{SEEDS} seeds; thread counts 1, 2, 4 agree"))
}

fn main() {
    let criteria: [(&str, Duration, fn() -> Outcome); 8] = [
        ("catalog table, degree 8", Duration::from_secs(120), table1),
        ("catalog table, degree 9", Duration::from_secs(300), table2),
        (
            "small-degree classification",
            Duration::from_secs(1800),
            classification,
        ),
        (
            "sandwich constants and WL stability",
            Duration::from_secs(600),
            sandwich_oracle,
        ),
        (
            "sandwich of S5 at m=3",
            Duration::from_secs(300),
            sandwich_slice,
        ),
        (
            "Johnson polynomial oracle",
            Duration::from_secs(300),
            johnson,
        ),
        (
            "small vector association schemes",
            Duration::from_secs(1200),
            vas,
        ),
        ("property suites", Duration::from_secs(900), properties),
    ];
    let mut failed = 0;
    for (i, (name, limit, check)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome =
            catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(_) if elapsed > limit => Err(format!(
                "took {:.1}s, limit {}s",
                elapsed.as_secs_f64(),
                limit.as_secs()
            )),
            o => o,
        };
        let (tag, detail) = match &outcome {
            Ok(m) => ("PASS", m),
            Err(m) => ("FAIL", m),
        };
        println!(
            "criterion {}: {tag} [{:.1}s / {}s] {name}: {detail}",
            i + 1,
            elapsed.as_secs_f64(),
            limit.as_secs()
        );
        failed += usize::from(outcome.is_err());
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
