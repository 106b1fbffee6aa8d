//! Brute-force fundamental category: edge words are enumerated by a plain
//! DFS over the description, 2-cell boundaries are read off the raw path
//! expressions, and classes are connected components of one-step rewrites.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use mdspace::complex::{ComplexDesc, PathExpr};
use mdspace::rational;

pub type Word = Vec<String>;

fn expr_word(desc: &ComplexDesc, e: &PathExpr) -> Word {
    match e {
        PathExpr::Step { cell, z, .. } => {
            let c = desc.cells.iter().find(|c| &c.id == cell).expect("known cell");
            if c.dim == 0 {
                return vec![cell.clone()];
            }
            let upper = z.len() == 1 && z[0] == rational::one();
            let b = if upper { &c.boundary_plus } else { &c.boundary_minus };
            expr_word(desc, b.as_ref().expect("2-cells carry boundaries"))
        }
        PathExpr::Moore(l, r) | PathExpr::NormComp(l, r) => {
            let mut w = expr_word(desc, l);
            w.extend(expr_word(desc, r));
            w
        }
        PathExpr::Repar { path, .. } => expr_word(desc, path),
    }
}

pub fn relations(desc: &ComplexDesc) -> Vec<(Word, Word)> {
    desc.cells
        .iter()
        .filter(|c| c.dim == 1)
        .map(|c| {
            (
                expr_word(desc, c.boundary_minus.as_ref().unwrap()),
                expr_word(desc, c.boundary_plus.as_ref().unwrap()),
            )
        })
        .collect()
}

pub fn edge_words(desc: &ComplexDesc, from: &str, to: &str) -> Vec<Word> {
    fn go(desc: &ComplexDesc, at: &str, to: &str, cur: &mut Word, out: &mut Vec<Word>) {
        if at == to && !cur.is_empty() {
            out.push(cur.clone());
        }
        for c in desc.cells.iter().filter(|c| c.dim == 0 && c.from == at) {
            cur.push(c.id.clone());
            go(desc, &c.to, to, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(desc, from, to, &mut Vec::new(), &mut out);
    out.sort();
    out
}

fn neighbours(w: &Word, rels: &[(Word, Word)]) -> Vec<Word> {
    let mut out = Vec::new();
    for (l, r) in rels {
        for (a, b) in [(l, r), (r, l)] {
            if a.len() > w.len() {
                continue;
            }
            for i in 0..=w.len() - a.len() {
                if w[i..i + a.len()] == a[..] {
                    let mut v = w[..i].to_vec();
                    v.extend(b.iter().cloned());
                    v.extend(w[i + a.len()..].iter().cloned());
                    out.push(v);
                }
            }
        }
    }
    out
}

/// Classes of edge words from `from` to `to`, each sorted, listed by least member.
pub fn classes(desc: &ComplexDesc, from: &str, to: &str) -> Vec<Vec<Word>> {
    let rels = relations(desc);
    let mut seen: BTreeSet<Word> = BTreeSet::new();
    let mut out = Vec::new();
    for w in edge_words(desc, from, to) {
        if seen.contains(&w) {
            continue;
        }
        let mut class = BTreeSet::new();
        let mut queue = VecDeque::from([w.clone()]);
        seen.insert(w.clone());
        while let Some(u) = queue.pop_front() {
            for v in neighbours(&u, &rels) {
                if seen.insert(v.clone()) {
                    queue.push_back(v);
                }
            }
            class.insert(u);
        }
        out.push(class.into_iter().collect());
    }
    out.sort();
    out
}

/// Oracle class tables for every ordered pair of states with nonempty hom.
pub fn all_classes(desc: &ComplexDesc) -> BTreeMap<(String, String), Vec<Vec<Word>>> {
    let mut out = BTreeMap::new();
    for a in &desc.states {
        for b in &desc.states {
            let cs = classes(desc, a, b);
            if !cs.is_empty() {
                out.insert((a.clone(), b.clone()), cs);
            }
        }
    }
    out
}
