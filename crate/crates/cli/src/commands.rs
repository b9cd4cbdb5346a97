use std::collections::BTreeSet;
use std::path::Path;

use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use progvc_core::bounds;
use progvc_core::freegroup::{
    self, dist_vector, generator_shatter_witness, is_shattered_free_with_cap, search_shattered,
    tripod_profile_with_arm, F2Example, FWord, SearchConfig,
};
use progvc_core::heisenberg::{
    self, enumerate_progression, in_progression, membership, witness_word, word_eval,
};
use progvc_core::{HPoint, HProgressionSpec, SetSystem};

use crate::args::{BoundsCmd, Cli, Command, FreeCmd, HeisenbergCmd, SetSystemCmd};
use crate::output::{CliError, Outcome, Table};

pub fn dispatch(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Heisenberg(cmd) => heisenberg_cmd(cmd),
        Command::Bounds(cmd) => bounds_cmd(cmd),
        Command::Free(cmd) => free_cmd(cmd, cli.global.seed),
        Command::Setsystem(cmd) => setsystem_cmd(cmd),
    }
}

/// A JSON number when it fits in 64 bits, a decimal string otherwise.
fn big_json(n: &BigInt) -> Value {
    n.to_i64()
        .map_or_else(|| json!(n.to_string()), |v| json!(v))
}

fn ubig_json(n: &BigUint) -> Value {
    n.to_u64()
        .map_or_else(|| json!(n.to_string()), |v| json!(v))
}

fn positive_cap(cap: usize) -> Result<usize, CliError> {
    if cap == 0 {
        return Err(CliError::Usage("--cap must be positive".into()));
    }
    Ok(cap)
}

fn parse_bigint(flag: &str, text: &str) -> Result<BigInt, CliError> {
    text.trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("--{flag} expects an integer, got {text:?}")))
}

fn parse_list<T: std::str::FromStr>(flag: &str, text: &str) -> Result<Vec<T>, CliError> {
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse()
                .map_err(|_| CliError::Usage(format!("--{flag}: malformed entry {t:?}")))
        })
        .collect()
}

fn parse_words(k: u32, text: &str) -> Result<Vec<FWord>, CliError> {
    text.split(',')
        .map(|t| FWord::parse(k, t).map_err(|e| CliError::Usage(e.to_string())))
        .collect()
}

fn heisenberg_cmd(cmd: &HeisenbergCmd) -> Result<Outcome, CliError> {
    match cmd {
        HeisenbergCmd::Verify { nmax, inject_fault } => {
            let mut cells = Vec::new();
            let mut rows = Vec::new();
            let mut mismatches = Vec::new();
            for n1 in 0..=*nmax {
                for n2 in 0..=*nmax {
                    let bfs = enumerate_progression(n1, n2)?;
                    let (b1, b2) = (BigInt::from(n1), BigInt::from(n2));
                    let top = (n1 * n2 + 1) as i64;
                    let mut closed = BTreeSet::new();
                    for a in -(n1 as i64)..=n1 as i64 {
                        for b in -(n2 as i64)..=n2 as i64 {
                            for c in -top..=top {
                                let p = HPoint::new(a, b, c);
                                if in_progression(&b1, &b2, &p) {
                                    closed.insert(p);
                                }
                            }
                        }
                    }
                    if *inject_fault && n1 == *nmax && n2 == *nmax {
                        closed.remove(&HPoint::identity());
                    }
                    let ok = bfs == closed;
                    if !ok {
                        mismatches.push(json!({ "n1": n1, "n2": n2 }));
                    }
                    cells.push(json!({ "n1": n1, "n2": n2, "size": bfs.len(), "ok": ok }));
                    rows.push(vec![
                        n1.to_string(),
                        n2.to_string(),
                        bfs.len().to_string(),
                        ok.to_string(),
                    ]);
                }
            }
            let verified = mismatches.is_empty();
            let body = json!({
                "nmax": nmax,
                "cells_verified": cells.len() - mismatches.len(),
                "cells_total": cells.len(),
                "mismatches": mismatches,
                "cells": cells,
            });
            Ok(Outcome::ok("heisenberg verify", body)
                .with_table(Table {
                    header: vec!["n1", "n2", "size", "ok"],
                    rows,
                })
                .verified(verified))
        }
        HeisenbergCmd::Member {
            n1,
            n2,
            point,
            translate,
        } => {
            let (n1, n2) = (parse_bigint("n1", n1)?, parse_bigint("n2", n2)?);
            let p: HPoint = point.parse()?;
            let g: HPoint = match translate {
                Some(t) => t.parse()?,
                None => HPoint::identity(),
            };
            let spec = HProgressionSpec::new(n1.clone(), n2.clone(), g.clone())?;
            let body = json!({
                "n1": big_json(&n1),
                "n2": big_json(&n2),
                "translate": g,
                "point": p,
                "member": membership(&spec, &p),
            });
            Ok(Outcome::ok("heisenberg member", body))
        }
        HeisenbergCmd::Enumerate { n1, n2 } => {
            let points = enumerate_progression(*n1, *n2)?;
            let rows = points
                .iter()
                .map(|p| vec![p.a.to_string(), p.b.to_string(), p.c.to_string()])
                .collect();
            let body = json!({
                "n1": n1,
                "n2": n2,
                "count": points.len(),
                "points": points,
            });
            Ok(Outcome::ok("heisenberg enumerate", body).with_table(Table {
                header: vec!["a", "b", "c"],
                rows,
            }))
        }
        HeisenbergCmd::Witness { n1, n2, point } => {
            let p: HPoint = point.parse()?;
            let w = witness_word(&p, *n1, *n2)?;
            let check = word_eval(&w) == p && w.n_a() <= *n1 && w.n_b() <= *n2;
            let body = json!({
                "n1": n1,
                "n2": n2,
                "point": p,
                "word": w.to_string(),
                "length": w.len(),
            });
            Ok(Outcome::ok("heisenberg witness", body).verified(check))
        }
        HeisenbergCmd::Shatter {
            experimental,
            translate_window,
            n1,
            n2,
            points,
        } => {
            if !experimental {
                return Err(CliError::Usage(
                    "heisenberg shatter is a heuristic; pass --experimental to run it".into(),
                ));
            }
            let window = translate_window.ok_or_else(|| {
                CliError::Usage("heisenberg shatter requires --translate-window".into())
            })?;
            let x = points
                .split(';')
                .map(str::parse)
                .collect::<Result<Vec<HPoint>, _>>()?;
            let report = heisenberg::window_shatter_search(&x, *n1, *n2, window)?;
            let body = json!({
                "heuristic": true,
                "note": "translates restricted to |a|,|b|,|c| <= window; a missing subset may still be cut out outside it",
                "window": window,
                "n1": n1,
                "n2": n2,
                "result": report,
            });
            Ok(Outcome::ok("heisenberg shatter", body))
        }
    }
}

fn bounds_cmd(cmd: &BoundsCmd) -> Result<Outcome, CliError> {
    match cmd {
        BoundsCmd::Cd { d, n } => Ok(Outcome::ok(
            "bounds cd",
            json!({ "d": d, "n": n, "value": ubig_json(&bounds::capital_c(*d, *n)) }),
        )),
        BoundsCmd::F { d, k } => {
            let mut body = json!({ "d": d, "k": k, "value": bounds::f_bound(*d, *k)? });
            if *d >= 1 {
                body["upper_estimate"] = json!({
                    "value": bounds::f_upper_estimate(*d, *k)?,
                    "approximate": true,
                });
            }
            Ok(Outcome::ok("bounds f", body))
        }
        BoundsCmd::G { d, k } => Ok(Outcome::ok(
            "bounds g",
            json!({ "d": d, "k": k, "value": bounds::g_bound(*d, *k)? }),
        )),
        BoundsCmd::Km { d, l, s, n } => Ok(Outcome::ok(
            "bounds km",
            json!({
                "d": d, "l": l, "s": s, "n": n,
                "value": ubig_json(&bounds::km_bound(*d, *l, *s, *n)?),
            }),
        )),
        BoundsCmd::VerifyHeisenberg => {
            let t = bounds::verify_heisenberg_translate_threshold();
            let f = bounds::verify_heisenberg_fixed_threshold();
            let verified = t.bound == 267
                && t.fails_at == [267]
                && t.holds_at == [268]
                && f.bound == 140
                && f.holds_at == [35]
                && f.fails_at == [36];
            let body = json!({
                "checks": [t, f],
                "expected_bounds": { "heisenberg-translate-family": 267, "heisenberg-fixed-progression": 140 },
            });
            Ok(Outcome::ok("bounds verify-heisenberg", body).verified(verified))
        }
    }
}

fn load_fixture(path: Option<&Path>) -> Result<F2Example, CliError> {
    match path {
        None => Ok(F2Example::shipped()),
        Some(p) => Ok(F2Example::from_json(&std::fs::read_to_string(p)?)?),
    }
}

fn free_cmd(cmd: &FreeCmd, seed: u64) -> Result<Outcome, CliError> {
    match cmd {
        FreeCmd::Shatter { k, points, cap } => {
            let x = parse_words(*k, points)?;
            let report = is_shattered_free_with_cap(&x, positive_cap(*cap)?)?;
            Ok(Outcome::ok(
                "free shatter",
                serde_json::to_value(report).expect("serializes"),
            ))
        }
        FreeCmd::ExampleF2 { fixture } => {
            let ex = load_fixture(fixture.as_deref())?;
            let check = ex.check()?;
            let mut rows = Vec::new();
            for entry in &ex.distances {
                let d = dist_vector(&ex.word(&entry.from)?, &ex.word(&entry.to)?)?;
                let mut row = vec![entry.from.clone(), entry.to.clone()];
                row.extend(d.iter().map(u64::to_string));
                rows.push(row);
            }
            let mut header = vec!["from", "to"];
            header.extend(
                ["d1", "d2", "d3", "d4", "d5", "d6", "d7", "d8"]
                    .iter()
                    .take(ex.rank as usize),
            );
            let body = json!({
                "points": ex.points,
                "check": check,
                "printed_tables_exact": check.printed_tables_exact(),
            });
            Ok(Outcome::ok("free example-f2", body)
                .with_table(Table { header, rows })
                .verified(check.passed()))
        }
        FreeCmd::Search {
            k,
            size,
            samples,
            max_len,
        } => {
            let config = SearchConfig {
                rank: *k,
                size: *size,
                samples: *samples,
                max_len: *max_len,
                seed,
            };
            let report = search_shattered(&config)?;
            // A hit at size ≥ 3k would contradict the VC bound.
            let contradiction = report.shattered_count > 0 && *size >= 3 * *k as usize;
            Ok(Outcome::ok(
                "free search",
                serde_json::to_value(report).expect("serializes"),
            )
            .verified(!contradiction))
        }
        FreeCmd::Witness { k, bounds, subset } => {
            let bounds: Vec<u64> = parse_list("bounds", bounds)?;
            let subset: Vec<u32> = parse_list("subset", subset)?;
            let spec = generator_shatter_witness(*k, &bounds, &subset)?;
            let generators: Vec<u32> = (1..=*k)
                .filter(|&i| {
                    FWord::generator_power(*k, i, 1)
                        .and_then(|g| spec.contains(&g))
                        .unwrap_or(false)
                })
                .collect();
            let body = json!({
                "k": k,
                "subset": subset,
                "spec": spec,
                "display": spec.to_string(),
                "generators_inside": generators,
            });
            Ok(Outcome::ok("free witness", body))
        }
        FreeCmd::Tripod { k, points, arm } => {
            let x = parse_words(*k, points)?;
            let arm = arm.unwrap_or(*k as usize);
            let tripod = tripod_profile_with_arm(&x, arm)?;
            let leaves = freegroup::leaves(&x)?;
            let distinct: BTreeSet<FWord> = x.iter().cloned().collect();
            let body = json!({
                "arm": arm,
                "tripod": tripod,
                "leaves_equal_points": leaves == distinct,
            });
            Ok(Outcome::ok("free tripod", body))
        }
    }
}

fn read_system(path: &Path) -> Result<SetSystem, CliError> {
    Ok(SetSystem::from_json(&std::fs::read_to_string(path)?)?)
}

fn setsystem_cmd(cmd: &SetSystemCmd) -> Result<Outcome, CliError> {
    match cmd {
        SetSystemCmd::Vc { input, cap } => {
            let s = read_system(input)?;
            let vc = s.vc_dimension_with_cap(positive_cap(*cap)?)?;
            let body = json!({
                "ground_size": s.ground_size(),
                "family_size": s.family().len(),
                "vc_dimension": vc,
            });
            Ok(Outcome::ok("setsystem vc", body))
        }
        SetSystemCmd::Shatter { input, target } => {
            let s = read_system(input)?;
            let labels: Vec<String> = parse_list("target", target)?;
            let report = s.shatters(&s.point_set(&labels)?)?;
            Ok(Outcome::ok(
                "setsystem shatter",
                serde_json::to_value(report).expect("serializes"),
            ))
        }
        SetSystemCmd::Pi { input, n } => {
            let s = read_system(input)?;
            let ns: Vec<usize> = match n {
                Some(n) => vec![*n],
                None => (0..=s.ground_size()).collect(),
            };
            let mut values = Vec::new();
            let mut rows = Vec::new();
            for n in ns {
                let pi = s.shatter_function(n)?;
                values.push(json!({ "n": n, "pi": pi }));
                rows.push(vec![n.to_string(), pi.to_string()]);
            }
            Ok(
                Outcome::ok("setsystem pi", json!({ "values": values })).with_table(Table {
                    header: vec!["n", "pi"],
                    rows,
                }),
            )
        }
    }
}
