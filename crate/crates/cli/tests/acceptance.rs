//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#[path = "../../core/tests/common/congruence.rs"]
mod congruence;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mdspace::complex::{Complex, ComplexDesc, PathExpr};
use mdspace::identities::{self, Identity};
use mdspace::mooreflow::{self, FundamentalCategory, StratumPoint};
use mdspace::rational::{self, Rational};
use mdspace::reedy::Pushout;
use mdspace::{sample, selftest, PLHomeo, PosLen};

const SEED: u64 = 20_240_601;

const C1_CASES: usize = 1000;
const C1_MAX_PIECES: usize = 8;
const C1_LIMIT: Duration = Duration::from_secs(5);
const C2_CASES: usize = 300;
const C2_LIMIT: Duration = Duration::from_secs(10);
const C3_PAIRS: usize = 500;
const C3_TIMES: usize = 10;
const C4_PATHS: usize = 100;
const C4_MAPS: usize = 20;
const C5_CONFLUENCE: usize = 200;
const C5_MAX_ENTRIES: usize = 5;
const C5_RELATIONS: usize = 100;
const C6_MIN_FIXTURES: usize = 10;
const C6_MAX_CELLS: usize = 6;
const C6_BOUND: usize = 6;
const C7_CASES: usize = 50;
const C7_MAX_LABELS: usize = 5;
const C8_MAX_ARITY: usize = 5;
const C9_LIMIT: Duration = Duration::from_secs(5);

type Expectation = Box<dyn Fn(&mooreflow::FlowPresentation, &ComplexDesc) -> bool>;
type Criterion = Box<dyn FnOnce(&mut ChaCha8Rng) -> Outcome>;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(failures: usize, detail: String) -> Outcome {
    Outcome {
        ok: failures == 0,
        detail,
    }
}

fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn load(name: &str) -> ComplexDesc {
    let raw = std::fs::read_to_string(fixtures_dir().join(name)).expect("fixture readable");
    serde_json::from_str(&raw).expect("fixture parses")
}

fn complex_fixtures() -> Vec<(String, ComplexDesc)> {
    let mut out: Vec<(String, ComplexDesc)> = std::fs::read_dir(fixtures_dir())
        .expect("fixtures dir")
        .map(|e| e.expect("entry").path())
        .filter_map(|p| {
            let raw = std::fs::read_to_string(&p).ok()?;
            let d: ComplexDesc = serde_json::from_str(&raw).ok()?;
            Some((p.file_name()?.to_string_lossy().into_owned(), d))
        })
        .collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

fn cycle() -> Complex {
    selftest::decorated_cycle().validate().expect("valid")
}

fn partial_sums(lens: &[PosLen]) -> Vec<Rational> {
    let mut acc = rational::zero();
    lens.iter()
        .map(|l| {
            acc += l.value();
            acc.clone()
        })
        .collect()
}

fn reparam_case(rng: &mut ChaCha8Rng) -> bool {
    let phi = sample::pl(rng, C1_MAX_PIECES);
    let (s, d) = (phi.src_len().clone(), phi.dst_len().clone());
    let mut ok = phi.breaks().len() <= C1_MAX_PIECES + 1;
    let id_s = PLHomeo::identity(s.clone());
    let id_d = PLHomeo::identity(d.clone());
    ok &= phi.compose(&phi.inverse()).ok() == Some(id_s.clone());
    ok &= phi.inverse().compose(&phi).ok() == Some(id_d.clone());
    ok &= id_s.compose(&phi).ok().as_ref() == Some(&phi) && phi.compose(&id_d).ok().as_ref() == Some(&phi);
    let e = sample::len(rng);
    let psi = sample::pl_between(rng, &d, &e, C1_MAX_PIECES);
    let f = sample::len(rng);
    let chi = sample::pl_between(rng, &e, &f, C1_MAX_PIECES);
    let l = phi.compose(&psi).and_then(|x| x.compose(&chi));
    let r = psi.compose(&chi).and_then(|x| phi.compose(&x));
    ok &= l.is_ok() && l == r;
    if let Ok(pp) = phi.compose(&psi) {
        for k in 0..=8 {
            let t = s.value() * rational::q(k, 8);
            ok &= pp.eval(&t).ok() == phi.eval(&t).and_then(|y| psi.eval(&y)).ok();
        }
    }
    let k = rng.gen_range(1..=5);
    let lens = sample::split(rng, &s, k);
    match phi.decompose(&lens) {
        Ok(parts) => {
            ok &= PLHomeo::tensor(&parts).ok().as_ref() == Some(&phi);
            let dsts: Vec<PosLen> = parts.iter().map(|p| p.dst_len().clone()).collect();
            for (a, b) in partial_sums(&lens).iter().zip(partial_sums(&dsts)) {
                ok &= phi.eval(a).ok() == Some(b);
            }
            let srcs: Vec<PosLen> = parts.iter().map(|p| p.src_len().clone()).collect();
            ok &= srcs == lens;
        }
        Err(_) => ok = false,
    }
    let targets = sample::split(rng, &d, k);
    match phi.preimage_blocks(&targets) {
        Ok(blocks) => {
            for (a, b) in partial_sums(&blocks).iter().zip(partial_sums(&targets)) {
                ok &= phi.eval(a).ok() == Some(b);
            }
        }
        Err(_) => ok = false,
    }
    let factors: Vec<PLHomeo> = (0..k).map(|_| sample::pl(rng, 3)).collect();
    let srcs: Vec<PosLen> = factors.iter().map(|p| p.src_len().clone()).collect();
    ok &= PLHomeo::tensor(&factors).and_then(|t| t.decompose(&srcs)).ok() == Some(factors);
    ok
}

fn criterion_1(rng: &mut ChaCha8Rng) -> Outcome {
    let start = Instant::now();
    let failures = (0..C1_CASES).filter(|_| !reparam_case(rng)).count();
    let took = start.elapsed();
    let mut o = outcome(
        failures,
        format!("{C1_CASES} maps, {failures} failures, {took:.2?} (limit {C1_LIMIT:?})"),
    );
    o.ok &= took < C1_LIMIT;
    o
}

fn agree(x: &Complex, l: &PathExpr, r: &PathExpr, rng: &mut ChaCha8Rng, times: usize) -> bool {
    let (Ok(nl), Ok(nr)) = (x.normalize(l), x.normalize(r)) else {
        return false;
    };
    if nl != nr || PosLen::new(l.length()).ok() != Some(nl.total_len()) {
        return false;
    }
    (0..times).all(|_| {
        let t = sample::time_in(rng, &nl.total_len());
        let a = x.eval_path(l, &t);
        a.is_ok() && a == x.eval_path(r, &t) && a == nl.eval(x, &t)
    })
}

fn criterion_2(rng: &mut ChaCha8Rng) -> Outcome {
    let x = cycle();
    let start = Instant::now();
    let (mut made, mut failures) = (0, 0);
    let mut per_id: BTreeMap<Identity, usize> = BTreeMap::new();
    let mut attempts = 0;
    while made < C2_CASES && attempts < 20 * C2_CASES {
        attempts += 1;
        let id = identities::ALL[attempts % identities::ALL.len()];
        let n = rng.gen_range(2..=6);
        let Some((l, r)) = identities::instance(rng, &x, id, n) else {
            continue;
        };
        made += 1;
        *per_id.entry(id).or_default() += 1;
        if !agree(&x, &l, &r, rng, 3) {
            failures += 1;
        }
    }
    let took = start.elapsed();
    let all_ids = per_id.len() == identities::ALL.len();
    let mut o = outcome(
        failures + (C2_CASES - made),
        format!(
            "{made} instances over {} identities, n in 2..=6, {failures} mismatches, {took:.2?} (limit {C2_LIMIT:?})",
            per_id.len()
        ),
    );
    o.ok &= took < C2_LIMIT && all_ids;
    o
}

/// An identity instance, optionally placed in a random context.
fn related_pair(rng: &mut ChaCha8Rng, x: &Complex) -> Option<(PathExpr, PathExpr)> {
    let id = identities::ALL[rng.gen_range(0..identities::ALL.len())];
    let n = rng.gen_range(1..=4);
    let (mut l, mut r) = identities::instance(rng, x, id, n)?;
    if rng.gen_bool(0.5) {
        let end = x.normalize(&l).ok()?.to_state().to_string();
        let (s, _) = identities::random_expr(rng, x, &end, 1)?;
        l = PathExpr::moore(l, s.clone());
        r = PathExpr::moore(r, s);
    }
    if rng.gen_bool(0.5) {
        let total = PosLen::new(l.length()).ok()?;
        let src = sample::len(rng);
        let phi = sample::pl_between(rng, &src, &total, 4);
        l = PathExpr::repar(l, phi.clone());
        r = PathExpr::repar(r, phi);
    }
    Some((l, r))
}

fn criterion_3(rng: &mut ChaCha8Rng) -> Outcome {
    let x = cycle();
    let (mut made, mut failures) = (0, 0);
    while made < C3_PAIRS {
        let Some((l, r)) = related_pair(rng, &x) else {
            continue;
        };
        made += 1;
        if !agree(&x, &l, &r, rng, C3_TIMES) {
            failures += 1;
        }
    }
    outcome(
        failures,
        format!("{made} pairs, {C3_TIMES} times each, {failures} mismatches"),
    )
}

fn criterion_4(rng: &mut ChaCha8Rng) -> Outcome {
    let x = cycle();
    let (mut paths, mut fixed, mut bad) = (0, 0, 0);
    while paths < C4_PATHS {
        let from = format!("s{}", rng.gen_range(0..4));
        let Some((e, _)) = identities::random_unit(rng, &x, &from, 2) else {
            continue;
        };
        let Ok(p) = x.normalize(&e) else {
            bad += 1;
            continue;
        };
        if p.total_len() != PosLen::one() {
            bad += 1;
            continue;
        }
        paths += 1;
        for _ in 0..C4_MAPS {
            let phi = sample::non_identity_unit(rng, 6);
            if p.reparametrize(&phi).ok().as_ref() == Some(&p) {
                fixed += 1;
            }
        }
    }
    outcome(
        fixed + bad,
        format!("{paths} unit paths x {C4_MAPS} maps, {fixed} fixed points, {bad} malformed"),
    )
}

fn reedy_pushouts() -> Vec<Pushout> {
    let mut out = vec![Pushout::for_cell(&cycle(), "t1").expect("cell")];
    for (name, cell) in [
        ("square.json", "sq"),
        ("loop_filled.json", "t"),
        ("wedge.json", "s"),
        ("nested.json", "s"),
        ("nested.json", "t"),
        ("theta.json", "t"),
    ] {
        let x = load(name).validate().expect("fixture valid");
        out.push(Pushout::for_cell(&x, cell).expect("cell"));
    }
    out
}

fn criterion_5(rng: &mut ChaCha8Rng) -> Outcome {
    let pushouts = reedy_pushouts();
    let (mut made, mut trace_bad, mut non_confluent, mut steps) = (0, 0, 0, 0);
    while made < C5_CONFLUENCE {
        let po = &pushouts[made % pushouts.len()];
        let Some(e) = selftest::random_elem(rng, po, C5_MAX_ENTRIES) else {
            continue;
        };
        made += 1;
        match po.normalize_traced(&e) {
            Ok((n, trace)) => {
                steps += trace.len() - 1;
                if !trace.windows(2).all(|w| w[1] + 1 == w[0]) || !po.is_simplified(&n) {
                    trace_bad += 1;
                }
                let unique = po
                    .all_normal_forms(&e)
                    .is_ok_and(|forms| forms.len() == 1 && forms.first() == serde_json::to_string(&n).ok().as_ref());
                if !unique {
                    non_confluent += 1;
                }
            }
            Err(_) => trace_bad += 1,
        }
    }
    let (mut rel_made, mut rel_fail) = (0, 0);
    while rel_made < C5_RELATIONS {
        let po = &pushouts[rel_made % pushouts.len()];
        let Some(e) = selftest::random_elem(rng, po, C5_MAX_ENTRIES) else {
            continue;
        };
        rel_made += 1;
        if !po.check_relations(&e).is_ok_and(|f| f.is_empty()) {
            rel_fail += 1;
        }
    }
    outcome(
        trace_bad + non_confluent + rel_fail,
        format!(
            "{made} elements ({steps} rewrite steps, {trace_bad} bad traces, {non_confluent} non-confluent), \
             {rel_made} relation instances ({rel_fail} failing)"
        ),
    )
}

fn criterion_6() -> Outcome {
    let (mut used, mut loops, mut steps, mut failures) = (0, 0, 0, 0);
    for (name, desc) in complex_fixtures() {
        if desc.cells.len() > C6_MAX_CELLS {
            continue;
        }
        used += 1;
        let x = match desc.validate() {
            Ok(x) => x,
            Err(_) => {
                failures += 1;
                continue;
            }
        };
        if !x.loop_free() {
            loops += 1;
        }
        match mooreflow::counit_check(&x, C6_BOUND) {
            Ok(r) => {
                steps += r.steps.len();
                if !r.ok || r.steps.len() != x.cell_count() || r.steps.iter().any(|s| !s.bijection) {
                    eprintln!("  counit failed on {name}");
                    failures += 1;
                }
            }
            Err(e) => {
                eprintln!("  counit error on {name}: {e}");
                failures += 1;
            }
        }
    }
    let mut o = outcome(
        failures,
        format!(
            "{used} fixtures ({loops} with loops), {steps} attachment steps at bound {C6_BOUND}, {failures} failures"
        ),
    );
    o.ok &= used >= C6_MIN_FIXTURES && loops >= 1;
    o
}

fn criterion_7(rng: &mut ChaCha8Rng) -> Outcome {
    let mut failures = 0;
    for _ in 0..C7_CASES {
        let k = rng.gen_range(1..=C7_MAX_LABELS);
        let labels: Vec<String> = (0..k).map(|i| format!("u{i}")).collect();
        let len = sample::len(rng);
        if !mooreflow::globe_roundtrip(&len, &labels).is_ok_and(|r| r.ok) {
            failures += 1;
        }
    }
    outcome(failures, format!("{C7_CASES} globes, {failures} failures"))
}

fn chain_case(rng: &mut ChaCha8Rng, dims: &[u32]) -> bool {
    let p = dims.len();
    let Ok(stratum) = mooreflow::chain_path_space(dims) else {
        return false;
    };
    let tops: Vec<String> = (1..=p).map(|i| format!("g{i}")).collect();
    if stratum.reparam_arity != p || stratum.factor_dims != dims || stratum.carrier != tops {
        return false;
    }
    let Ok(x) = mooreflow::chain_complex(dims).map(|d| d.validate()) else {
        return false;
    };
    let Ok(x) = x else {
        return false;
    };
    let Ok(carriers) = x.enumerate_carriers("x0", &format!("x{p}"), None) else {
        return false;
    };
    let through_tops = carriers.iter().filter(|c| **c == tops).count();
    let expected_total: usize = dims.iter().map(|&d| if d == 0 { 1 } else { 3 }).product();
    if through_tops != 1 || carriers.len() != expected_total {
        return false;
    }
    if dims.iter().all(|&d| d == 0) && carriers.len() != 1 {
        return false;
    }
    let len = sample::len(rng);
    let phi = sample::pl_between(rng, &len, &PosLen::new(rational::int(p as i64)).expect("positive"), 4);
    let points: Vec<Vec<Rational>> = dims.iter().map(|&d| sample::interior_point(rng, d as usize)).collect();
    let at = StratumPoint { phi, points };
    match mooreflow::stratum_path(&x, &stratum, &at) {
        Ok(path) => path.carrier() == tops && mooreflow::stratum_coordinates(&path) == at,
        Err(_) => false,
    }
}

fn criterion_8(rng: &mut ChaCha8Rng) -> Outcome {
    let (mut cases, mut failures) = (0, 0);
    for p in 1..=C8_MAX_ARITY {
        for mask in 0..(1u32 << p) {
            let dims: Vec<u32> = (0..p).map(|i| (mask >> i) & 1).collect();
            cases += 1;
            if !chain_case(rng, &dims) {
                eprintln!("  chain {dims:?} failed");
                failures += 1;
            }
        }
    }
    outcome(
        failures,
        format!("{cases} chains of arity 1..={C8_MAX_ARITY}, {failures} failures"),
    )
}

fn fundcat_case(name: &str, expect: impl Fn(&mooreflow::FlowPresentation, &ComplexDesc) -> bool) -> (bool, Duration) {
    let desc = load(name);
    let start = Instant::now();
    let ok = (|| {
        let fc = FundamentalCategory::new(&desc).ok()?;
        let pres = fc.presentation();
        let oracle = congruence::all_classes(&desc);
        for a in &desc.states {
            for b in &desc.states {
                let classes = oracle.get(&(a.clone(), b.clone())).cloned().unwrap_or_default();
                if pres.hom_size(a, b) != classes.len() {
                    return Some(false);
                }
                for class in &classes {
                    let reps: std::collections::BTreeSet<_> = class.iter().map(|w| fc.representative(w)).collect();
                    if reps.len() != 1 {
                        return Some(false);
                    }
                }
            }
        }
        Some(expect(&pres, &desc) && pres.is_associative())
    })()
    .unwrap_or(false);
    (ok, start.elapsed())
}

fn criterion_9() -> Outcome {
    let cases: Vec<(&str, Expectation)> = vec![
        ("square.json", Box::new(|f, _| f.hom_size("bot", "top") == 1)),
        ("square_hollow.json", Box::new(|f, _| f.hom_size("bot", "top") == 2)),
        (
            "grid2x1.json",
            Box::new(|f, d| {
                let corners = ["a00", "a20", "a01", "a21"];
                let corner_ok = corners.iter().all(|a| {
                    corners.iter().all(|b| {
                        let words = congruence::edge_words(d, a, b).len();
                        f.hom_size(a, b) == usize::from(words > 0)
                    })
                });
                corner_ok && f.hom_size("a00", "a21") == 1
            }),
        ),
    ];
    let mut failures = 0;
    let mut parts = Vec::new();
    for (name, expect) in cases {
        let (ok, took) = fundcat_case(name, expect);
        if !ok || took >= C9_LIMIT {
            failures += 1;
        }
        parts.push(format!("{name} {} in {took:.2?}", if ok { "ok" } else { "wrong" }));
    }
    outcome(failures, format!("{} (limit {C9_LIMIT:?} each)", parts.join(", ")))
}

fn run_cli(args: &[String]) -> (Option<i32>, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_mdspace"))
        .args(args)
        .output()
        .expect("binary runs");
    (out.status.code(), out.stdout)
}

fn cli_commands() -> Vec<(Vec<String>, i32)> {
    let f = |n: &str| fixtures_dir().join(n).to_string_lossy().into_owned();
    let s = |xs: &[&str]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    let mut cmds = Vec::new();
    for (name, desc) in complex_fixtures() {
        let path = f(&name);
        cmds.push((s(&["validate", &path]), 0));
        let loop_free = desc.validate().is_ok_and(|x| x.loop_free());
        cmds.push((s(&["fundcat", &path]), if loop_free { 0 } else { 2 }));
        cmds.push((s(&["counit-check", &path, "--bound", "4"]), 0));
        cmds.push((s(&["validate", &path, "--format", "text"]), 0));
        if let (Some(a), Some(b)) = (desc.states.first(), desc.states.last()) {
            let bound = if loop_free { vec![] } else { s(&["--bound", "4"]) };
            let mut c = s(&["carriers", &path, a, b]);
            c.extend(bound);
            cmds.push((c, 0));
        }
    }
    let sq = f("square.json");
    let path = f("path_square.json");
    cmds.extend([
        (s(&["normalize", &sq, &path]), 0),
        (s(&["normalize", &sq, &path, "--format", "text"]), 0),
        (s(&["normalize", &sq, &f("path_bad.json")]), 2),
        (s(&["compose", &sq, &path, &path]), 2),
        (
            s(&[
                "reedy-normalize",
                &f("loop_filled.json"),
                &f("elem_loop_filled.json"),
                "--cell",
                "t",
            ]),
            0,
        ),
        (s(&["reedy-normalize", &sq, &f("elem_square.json"), "--cell", "sq"]), 0),
        (s(&["pushout-check", &sq, "--cell", "sq", "--bound", "6"]), 0),
        (
            s(&[
                "pushout-check",
                &f("loop.json"),
                "--cell",
                "l",
                "--bound",
                "5",
                "--format",
                "text",
            ]),
            0,
        ),
        (s(&["carriers", &f("loop.json"), "x", "y"]), 2),
        (s(&["selftest", "--seed", "11"]), 0),
        (s(&["validate", &f("missing.json")]), 2),
    ]);
    cmds
}

fn criterion_10() -> Outcome {
    let mut failures = 0;
    let cmds = cli_commands();
    for (args, want) in &cmds {
        let first = run_cli(args);
        let second = run_cli(args);
        if first != second || first.0 != Some(*want) {
            eprintln!("  {args:?}: status {:?} vs {:?}, expected {want}", first.0, second.0);
            failures += 1;
        }
    }
    let v: serde_json::Value = serde_json::from_slice(
        &run_cli(&[
            "validate".into(),
            fixtures_dir().join("square.json").to_string_lossy().into_owned(),
        ])
        .1,
    )
    .unwrap_or_default();
    if v != serde_json::json!({ "loop_free": true, "cells": 5 }) {
        failures += 1;
    }
    outcome(
        failures,
        format!(
            "{} commands run twice, {failures} differences or wrong statuses",
            cmds.len()
        ),
    )
}

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let criteria: Vec<(&str, Criterion)> = vec![
        ("reparametrization algebra", Box::new(criterion_1)),
        ("composition identities", Box::new(criterion_2)),
        ("normal form uniqueness", Box::new(criterion_3)),
        ("reparametrization rigidity", Box::new(criterion_4)),
        ("rewriting engine", Box::new(criterion_5)),
        ("pushout preservation", Box::new(|_| criterion_6())),
        ("globe unit", Box::new(criterion_7)),
        ("chains of globes", Box::new(criterion_8)),
        ("fundamental category", Box::new(|_| criterion_9())),
        ("cli determinism", Box::new(|_| criterion_10())),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.into_iter().enumerate() {
        let o = run(&mut rng);
        let tag = if o.ok { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {tag}: {name}: {}", i + 1, o.detail);
        if !o.ok {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
