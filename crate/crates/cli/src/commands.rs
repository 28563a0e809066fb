use std::path::Path;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use serde_json::{json, Value};

use setscheme::coherence::{structure_constants, wl_stabilize_counted, Coherence, Mode};
use setscheme::constructions::{catalog, table_row, CatalogId};
use setscheme::enumeration::{enumerate_all, summary, summary_csv, EnumerationOptions};
use setscheme::groups::describe;
use setscheme::groups::{
    automorphism_group, is_schurian, weak_automorphism_group, PermGroup, Permutation,
};
use setscheme::io::{parse_partition, read_partition, serialize_partition};
use setscheme::sandwich::{cc_wl_stabilize, recover_sas, sandwich_report, HammingSandwich};
use setscheme::search::{canonical_form, find_isomorphism};
use setscheme::vector::{
    read_vas, serialize_vas, vas_check, vas_enumerate, vas_orbital, VasCoherence,
};
use setscheme::{coherence::is_scheme, SetPartition};

use crate::output::{emit, render_record, Format, Table};
use crate::{Cli, Command, TableName};

/// A scheme file, or a catalog name such as `S5`.
pub fn load_scheme(arg: &str) -> Result<SetPartition> {
    let path = Path::new(arg);
    if path.exists() {
        return read_partition(path).with_context(|| format!("reading {arg}"));
    }
    match arg.parse::<CatalogId>() {
        Ok(id) => Ok(catalog(id)?.scheme),
        Err(_) => bail!("{arg} is neither a readable file nor a catalog name"),
    }
}

pub fn run(cli: &Cli) -> Result<bool> {
    let fmt = cli.global.format;
    let out = cli.global.out.as_deref();
    match &cli.command {
        Command::Check { scheme, mode } => check(&load_scheme(scheme)?, (*mode).into(), fmt, out),
        Command::Stabilize { scheme, mode } => {
            let s = load_scheme(scheme)?;
            let (st, rounds) = wl_stabilize_counted(&s, (*mode).into());
            eprintln!("rank {} -> {} in {rounds} rounds", s.rank(), st.rank());
            emit(&serialize_partition(&st), out)?;
            Ok(true)
        }
        Command::Aut { scheme } => {
            let s = load_scheme(scheme)?;
            let aut = automorphism_group(&s);
            let weak = weak_automorphism_group(&s);
            let gens = |g: &PermGroup| -> Value {
                g.generators()
                    .iter()
                    .map(|p| Value::String(p.to_string()))
                    .collect()
            };
            let fields = [
                ("order", json!(aut.order())),
                ("structure", json!(describe(&aut).name)),
                ("generators", gens(&aut)),
                ("transitive", json!(aut.is_transitive())),
                ("weak_order", json!(weak.order())),
                ("weak_generators", gens(&weak)),
            ];
            emit(&render_record(&fields, fmt), out)?;
            Ok(true)
        }
        Command::Schurian { scheme } => {
            let s = load_scheme(scheme)?;
            let fields = [
                ("rank", json!(s.rank())),
                ("schurian", json!(is_schurian(&s))),
            ];
            emit(&render_record(&fields, fmt), out)?;
            Ok(true)
        }
        Command::Enumerate {
            degree,
            long_run,
            checkpoint,
            max_seconds,
        } => {
            let opts = EnumerationOptions {
                max_seconds: *max_seconds,
                checkpoint_path: checkpoint.clone(),
                checkpoint_interval: None,
                long_run: *long_run,
            };
            let t = Instant::now();
            let state = enumerate_all(*degree, &opts)?;
            let rows = summary(&state);
            eprintln!(
                "degree {degree}: {} schemes, {} nonschurian, complete = {}, {:.1}s",
                state.results.len(),
                state.nonschurian().count(),
                state.complete,
                t.elapsed().as_secs_f64()
            );
            match out {
                Some(dir) => {
                    std::fs::create_dir_all(dir)?;
                    for r in &state.results {
                        let s = r.form.to_partition();
                        let path = dir.join(format!("d{degree}_{}.json", r.form.id()));
                        write_verified(&path, &s)?;
                    }
                    std::fs::write(dir.join("summary.csv"), summary_csv(&rows))?;
                }
                None => {
                    let mut t = Table::new(&[
                        "canonical_id",
                        "rank",
                        "aut_order",
                        "aut",
                        "schurian",
                        "homogeneous",
                        "vertex_transitive",
                        "fully_coherent",
                    ]);
                    for r in &rows {
                        t.push(vec![
                            r.canonical_id.clone(),
                            r.rank.to_string(),
                            r.aut_order.to_string(),
                            r.aut.clone(),
                            r.schurian.to_string(),
                            r.homogeneous.to_string(),
                            r.vertex_transitive.to_string(),
                            r.fully_coherent.to_string(),
                        ]);
                    }
                    print!("{}", t.render(fmt));
                }
            }
            Ok(state.complete)
        }
        Command::Catalog { name } => match name {
            Some(n) => {
                let id: CatalogId = n.parse()?;
                emit(&serialize_partition(&catalog(id)?.scheme), out)?;
                Ok(true)
            }
            None => {
                let mut t = Table::new(&["name", "degree", "rank", "file"]);
                for id in CatalogId::ALL {
                    let s = catalog(id)?.scheme;
                    let file = match out {
                        Some(dir) => {
                            std::fs::create_dir_all(dir)?;
                            let p = dir.join(format!("{id}.json"));
                            write_verified(&p, &s)?;
                            p.display().to_string()
                        }
                        None => String::new(),
                    };
                    t.push(vec![
                        id.to_string(),
                        s.degree().to_string(),
                        s.rank().to_string(),
                        file,
                    ]);
                }
                print!("{}", t.render(fmt));
                Ok(true)
            }
        },
        Command::Table { which } => table(*which, fmt, out),
        Command::Sandwich {
            scheme,
            m,
            materialize,
            verify_wl,
            report,
        } => sandwich(
            &load_scheme(scheme)?,
            *m,
            *materialize,
            *verify_wl,
            *report,
            fmt,
            out,
        ),
        Command::Vas {
            k,
            d,
            check,
            enumerate,
            orbital,
        } => vas(
            *k,
            *d,
            check.as_deref(),
            *enumerate,
            orbital.as_deref(),
            fmt,
            out,
        ),
        Command::Iso { a, b } => {
            let (s, t) = (load_scheme(a)?, load_scheme(b)?);
            if s.degree() != t.degree() {
                bail!("degree mismatch: {} vs {}", s.degree(), t.degree());
            }
            let found = find_isomorphism(&s, &t);
            let fields = [
                ("isomorphic", json!(found.is_some())),
                (
                    "mapping",
                    found.as_ref().map_or(Value::Null, |g| json!(g.to_string())),
                ),
                ("canonical_id_a", json!(canonical_form(&s).id())),
                ("canonical_id_b", json!(canonical_form(&t).id())),
            ];
            emit(&render_record(&fields, fmt), out)?;
            Ok(found.is_some())
        }
    }
}

fn write_verified(path: &Path, s: &SetPartition) -> Result<()> {
    let text = serialize_partition(s);
    std::fs::write(path, &text)?;
    let back = parse_partition(&std::fs::read_to_string(path)?)?;
    if back != *s || !is_scheme(&back) {
        bail!("{} did not re-verify", path.display());
    }
    Ok(())
}

fn check(s: &SetPartition, mode: Mode, fmt: Format, out: Option<&Path>) -> Result<bool> {
    let verdict = structure_constants(s, mode);
    let mut fields = vec![
        ("mode", json!(mode.to_string())),
        ("rank", json!(s.rank())),
        ("coherent", json!(verdict.is_coherent())),
    ];
    if let Coherence::Incoherent(w) = &verdict {
        fields.push(("witness", json!(w.to_string())));
    }
    emit(&render_record(&fields, fmt), out)?;
    Ok(verdict.is_coherent())
}

fn table(which: TableName, fmt: Format, out: Option<&Path>) -> Result<bool> {
    let ids: &[CatalogId] = match which {
        TableName::Table1 => &CatalogId::DEGREE_8,
        TableName::Table2 => &CatalogId::DEGREE_9,
    };
    let mut t = Table::new(&[
        "scheme",
        "rank",
        "aut_order",
        "aut",
        "homogeneous",
        "vertex_transitive",
        "fully_coherent",
        "schurian",
    ]);
    let mut ok = true;
    for &id in ids {
        let entry = catalog(id)?;
        let row = table_row(&entry.scheme);
        for (col, got, want) in row.diff(&entry.expected) {
            eprintln!("mismatch {id} {col}: got {got}, expected {want}");
            ok = false;
        }
        let mut cells = vec![id.to_string()];
        cells.extend(row.columns().into_iter().map(|(_, v)| v));
        t.push(cells);
    }
    emit(&t.render(fmt), out)?;
    Ok(ok)
}

fn sandwich(
    s: &SetPartition,
    m: usize,
    materialize: bool,
    verify_wl: bool,
    report: bool,
    fmt: Format,
    out: Option<&Path>,
) -> Result<bool> {
    let x = HammingSandwich::new(s.clone(), m)?;
    let mut fields: Vec<(&str, Value)> = vec![
        ("degree", json!(s.degree())),
        ("m", json!(m)),
        ("rank", json!(x.rank())),
        ("is_scheme", json!(is_scheme(s))),
    ];
    let mut ok = true;
    if materialize || verify_wl {
        let c = x.materialize()?;
        let rec = recover_sas(&c, m, s.degree())?;
        let round_trip = rec.scheme == *s;
        ok &= round_trip;
        fields.push(("materialized_rank", json!(c.rank())));
        fields.push(("recovered_matches", json!(round_trip)));
        fields.push(("above_guarantee_bound", json!(rec.guaranteed)));
        if let Some(w) = rec.warning {
            eprintln!("warning: {w}");
        }
        if verify_wl {
            let stable = cc_wl_stabilize(&c)? == c;
            ok &= stable;
            fields.push(("wl_stable", json!(stable)));
        }
    }
    if report {
        let r = sandwich_report(s, m)?;
        fields.push(("vertices", json!(r.vertices)));
        fields.push(("primitive", json!(r.primitive)));
        fields.push(("aut_order", json!(r.aut_order)));
        fields.push(("schurian", json!(r.schurian)));
        fields.push(("aut_primitive", json!(r.aut_primitive)));
        fields.push(("nonidentity_colors", json!(r.nonidentity_colors)));
        fields.push(("connected_colors", json!(r.connected_colors)));
    }
    emit(&render_record(&fields, fmt), out)?;
    Ok(ok)
}

/// `sym`, `alt`, `cyclic`, `trivial`, or `;`-separated cycle notation.
fn parse_group(spec: &str, d: usize) -> Result<PermGroup> {
    Ok(match spec.to_ascii_lowercase().as_str() {
        "sym" => PermGroup::symmetric(d),
        "alt" => PermGroup::alternating(d),
        "cyclic" => PermGroup::cyclic(d),
        "trivial" => PermGroup::trivial(d),
        _ => {
            let gens = spec
                .split(';')
                .map(|g| setscheme::groups::parse_cycles(g, d))
                .collect::<setscheme::Result<Vec<Permutation>>>()?;
            PermGroup::generated(d, &gens)?
        }
    })
}

fn vas(
    k: usize,
    d: usize,
    check: Option<&Path>,
    enumerate: bool,
    orbital: Option<&str>,
    fmt: Format,
    out: Option<&Path>,
) -> Result<bool> {
    if let Some(path) = check {
        let s = read_vas(path)?;
        if (s.k(), s.degree()) != (k, d) {
            bail!("file has k = {}, d = {}", s.k(), s.degree());
        }
        let verdict = vas_check(&s)?;
        let mut fields = vec![
            ("rank", json!(s.rank())),
            ("coherent", json!(verdict.is_coherent())),
        ];
        if let VasCoherence::Incoherent(w) = &verdict {
            fields.push(("witness", json!(w.to_string())));
        }
        emit(&render_record(&fields, fmt), out)?;
        return Ok(verdict.is_coherent());
    }
    if let Some(spec) = orbital {
        let s = vas_orbital(&parse_group(spec, d)?, k)?;
        emit(&serialize_vas(&s), out)?;
        return Ok(true);
    }
    if enumerate {
        let all = vas_enumerate(k, d)?;
        let mut t = Table::new(&["index", "rank", "homogeneous", "schurian", "cells"]);
        for (i, r) in all.iter().enumerate() {
            let cells: Vec<String> = r
                .scheme
                .cells()
                .iter()
                .map(|c| {
                    let ps: Vec<String> = c
                        .iter()
                        .map(|p| p.iter().map(|x| x.to_string()).collect::<String>())
                        .collect();
                    format!("{{{}}}", ps.join(" "))
                })
                .collect();
            t.push(vec![
                i.to_string(),
                r.rank.to_string(),
                r.homogeneous.to_string(),
                r.schurian.to_string(),
                cells.join(" "),
            ]);
        }
        emit(&t.render(fmt), out)?;
        return Ok(true);
    }
    bail!("one of --check, --enumerate, --orbital is required")
}
