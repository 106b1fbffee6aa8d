//! A quick seeded battery of engine checks, run by `mdspace selftest`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::complex::{CellDesc, Complex, ComplexDesc, PathExpr};
use crate::identities;
use crate::mooreflow;
use crate::reedy::{Entry, Pushout, ReedyElem};
use crate::reparam::{PLHomeo, PosLen};
use crate::sample;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub cases: usize,
    pub failures: usize,
}

/// Four edges around a cycle, a parallel edge and a 2-cell between them.
pub fn decorated_cycle() -> ComplexDesc {
    ComplexDesc {
        states: (0..4).map(|i| format!("s{i}")).collect(),
        cells: vec![
            CellDesc::edge("e1", "s0", "s1"),
            CellDesc::edge("e2", "s1", "s2"),
            CellDesc::edge("e3", "s2", "s3"),
            CellDesc::edge("e4", "s3", "s0"),
            CellDesc::edge("f1", "s0", "s1"),
            CellDesc::two_cell("t1", "s0", "s1", PathExpr::edge("e1"), PathExpr::edge("f1")),
        ],
    }
}

fn check(name: &str, cases: usize, failures: usize) -> Check {
    Check {
        name: name.into(),
        passed: failures == 0,
        cases,
        failures,
    }
}

pub fn run(seed: u64) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = decorated_cycle().validate().expect("fixture is valid");
    vec![
        reparam_laws(&mut rng),
        composition_identities(&mut rng, &x),
        rigidity(&mut rng, &x),
        reedy_confluence(&mut rng, &x),
        globes(&mut rng),
    ]
}

fn reparam_laws(rng: &mut ChaCha8Rng) -> Check {
    let mut failures = 0;
    let n = 100;
    for _ in 0..n {
        let phi = sample::pl(rng, 8);
        let id_src = PLHomeo::identity(phi.src_len().clone());
        let ok_inv = phi.compose(&phi.inverse()).ok() == Some(id_src);
        let k = rng.gen_range(1..=4);
        let lens = sample::split(rng, phi.src_len(), k);
        let ok_dec = phi
            .decompose(&lens)
            .ok()
            .and_then(|parts| PLHomeo::tensor(&parts).ok())
            .is_some_and(|t| t == phi);
        if !(ok_inv && ok_dec) {
            failures += 1;
        }
    }
    check("reparametrization laws", n, failures)
}

fn composition_identities(rng: &mut ChaCha8Rng, x: &Complex) -> Check {
    let mut failures = 0;
    let mut cases = 0;
    for id in identities::ALL {
        for n in 1..=4 {
            let Some((l, r)) = identities::instance(rng, x, id, n) else {
                continue;
            };
            cases += 1;
            let (nl, nr) = (x.normalize(&l), x.normalize(&r));
            let same = matches!((&nl, &nr), (Ok(a), Ok(b)) if a == b);
            let t = sample::time_in(rng, &PosLen::new(l.length()).expect("positive"));
            let pointwise = x.eval_path(&l, &t).ok() == x.eval_path(&r, &t).ok();
            if !same || !pointwise {
                failures += 1;
            }
        }
    }
    check("composition identities", cases, failures)
}

fn rigidity(rng: &mut ChaCha8Rng, x: &Complex) -> Check {
    let mut failures = 0;
    let mut cases = 0;
    for _ in 0..20 {
        let Some((e, _)) = identities::random_unit(rng, x, "s0", 2) else {
            continue;
        };
        let p = x.normalize(&e).expect("generated expressions are valid");
        for _ in 0..5 {
            cases += 1;
            let phi = sample::non_identity_unit(rng, 4);
            if p.reparametrize(&phi).ok().as_ref() == Some(&p) {
                failures += 1;
            }
        }
    }
    check("reparametrization rigidity", cases, failures)
}

/// A random element for the attachment `po`, with at most `max` entries.
pub fn random_elem<R: Rng + ?Sized>(rng: &mut R, po: &Pushout, max: usize) -> Option<ReedyElem> {
    let base = po.base();
    let (u, v) = po.ends();
    let states = base.states();
    let mut at = states[rng.gen_range(0..states.len())].clone();
    let mut entries = Vec::new();
    let target = rng.gen_range(1..=max);
    while entries.len() < target {
        let mut options = Vec::new();
        let words = base.words_from(&at, 2);
        if !words.is_empty() {
            options.push(0);
        }
        if at == u {
            options.push(2);
            if words.iter().any(|(_, end)| end == v) {
                options.push(1);
            }
        }
        if options.is_empty() {
            break;
        }
        match options[rng.gen_range(0..options.len())] {
            0 => {
                let (w, end) = &words[rng.gen_range(0..words.len())];
                let p = base.canonical_path(w).ok()?;
                let src = sample::len(rng);
                let phi = sample::pl_between(rng, &src, &p.total_len(), 3);
                entries.push(Entry::Path(p.reparametrize(&phi).ok()?));
                at = end.clone();
            }
            1 => {
                let to_v: Vec<_> = words.iter().filter(|(_, end)| end == v).collect();
                let (w, _) = to_v[rng.gen_range(0..to_v.len())];
                entries.push(Entry::Inj(base.canonical_path(w).ok()?));
                at = v.to_string();
            }
            _ => {
                let boundary: Vec<_> = po.boundary_points().cloned().collect();
                let z = if !boundary.is_empty() && rng.gen_bool(0.4) {
                    boundary[rng.gen_range(0..boundary.len())].clone()
                } else {
                    sample::interior_point(rng, po.cell_dim())
                };
                let src = sample::len(rng);
                let chi = sample::pl_between(rng, &src, &PosLen::one(), 3);
                entries.push(Entry::Cell { z, chi });
                at = v.to_string();
            }
        }
    }
    if entries.is_empty() {
        None
    } else {
        Some(ReedyElem { entries })
    }
}

fn reedy_confluence(rng: &mut ChaCha8Rng, x: &Complex) -> Check {
    let po = Pushout::for_cell(x, "t1").expect("cell exists");
    let mut failures = 0;
    let mut cases = 0;
    for _ in 0..20 {
        let Some(e) = random_elem(rng, &po, 5) else {
            continue;
        };
        cases += 1;
        let ok = match (po.all_normal_forms(&e), po.normalize_elem(&e)) {
            (Ok(forms), Ok(n)) => forms.len() == 1 && po.realize(&n).ok() == po.realize(&e).ok(),
            _ => false,
        };
        if !ok {
            failures += 1;
        }
    }
    check("rewriting confluence", cases, failures)
}

fn globes(rng: &mut ChaCha8Rng) -> Check {
    let mut failures = 0;
    let n = 10;
    for _ in 0..n {
        let k = rng.gen_range(1..=4);
        let labels: Vec<String> = (0..k).map(|i| format!("u{i}")).collect();
        let ok = mooreflow::globe_roundtrip(&sample::len(rng), &labels).is_ok_and(|r| r.ok);
        if !ok {
            failures += 1;
        }
    }
    check("globe round trip", n, failures)
}
