mod common;

use std::collections::BTreeMap;
use std::path::PathBuf;

use proptest::prelude::*;

use common::congruence::{self, Word};
use mdspace::complex::{CellDesc, ComplexDesc, PathExpr};
use mdspace::mooreflow::{FlowError, FundamentalCategory};

fn fixture(name: &str) -> ComplexDesc {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name);
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

/// Engine classes, grouped by representative and laid out like the oracle's.
fn engine_classes(fc: &FundamentalCategory, desc: &ComplexDesc) -> BTreeMap<(String, String), Vec<Vec<Word>>> {
    let mut out = BTreeMap::new();
    for a in &desc.states {
        for b in &desc.states {
            let mut by_rep: BTreeMap<Word, Vec<Word>> = BTreeMap::new();
            for w in fc.edge_words(a, b) {
                by_rep.entry(fc.representative(&w).unwrap()).or_default().push(w);
            }
            if !by_rep.is_empty() {
                let mut cs: Vec<Vec<Word>> = by_rep.into_values().collect();
                cs.sort();
                out.insert((a.clone(), b.clone()), cs);
            }
        }
    }
    out
}

fn agrees_with_oracle(desc: &ComplexDesc) {
    let fc = FundamentalCategory::new(desc).unwrap();
    let oracle = congruence::all_classes(desc);
    assert_eq!(engine_classes(&fc, desc), oracle);
    let pres = fc.presentation();
    for ((a, b), cs) in &oracle {
        assert_eq!(pres.hom_size(a, b), cs.len(), "{a}→{b}");
        let reps: Vec<Word> = cs.iter().map(|c| c[0].clone()).collect();
        let mut listed = pres.hom(a, b).to_vec();
        listed.sort();
        let mut want = reps;
        want.sort();
        assert_eq!(listed, want);
    }
    assert!(pres.is_associative());
    assert!(fc.congruence_well_defined());
    if desc.cells.iter().all(|c| c.dim == 0) {
        let x = desc.validate().unwrap();
        for a in &desc.states {
            for b in &desc.states {
                assert_eq!(pres.hom_size(a, b), x.enumerate_carriers(a, b, None).unwrap().len());
            }
        }
    }
}

#[test]
fn fixtures_match_oracle() {
    for name in [
        "square.json",
        "square_hollow.json",
        "grid2x1.json",
        "wedge.json",
        "nested.json",
        "theta.json",
        "bigon.json",
        "double_bigon.json",
        "chain3.json",
        "segment.json",
        "discrete.json",
    ] {
        agrees_with_oracle(&fixture(name));
    }
}

#[test]
fn square_and_grid_hom_sizes() {
    let f = FundamentalCategory::new(&fixture("square.json"))
        .unwrap()
        .presentation();
    assert_eq!(f.hom_size("bot", "top"), 1);
    let f = FundamentalCategory::new(&fixture("square_hollow.json"))
        .unwrap()
        .presentation();
    assert_eq!(f.hom_size("bot", "top"), 2);
    let g = fixture("grid2x1.json");
    let f = FundamentalCategory::new(&g).unwrap().presentation();
    for a in &g.states {
        for b in &g.states {
            assert!(f.hom_size(a, b) <= 1, "{a}→{b}");
        }
    }
    assert_eq!(f.hom_size("a00", "a21"), 1);
    assert_eq!(congruence::edge_words(&g, "a00", "a21").len(), 3);
}

#[test]
fn loops_and_higher_cells_are_refused() {
    assert!(matches!(
        FundamentalCategory::new(&fixture("loop.json")),
        Err(FlowError::HasLoops)
    ));
    let mut d = fixture("bigon.json");
    d.cells[2].dim = 2;
    assert!(matches!(
        FundamentalCategory::new(&d),
        Err(FlowError::HigherCellsPresent(_))
    ));
}

/// A random loop-free complex: states `q0 < q1 < …`, edges going up, and
/// 2-cells between parallel edge words of length at most 2.
fn random_desc() -> impl Strategy<Value = ComplexDesc> {
    (
        3usize..=5,
        prop::collection::vec((0usize..5, 0usize..5), 3..=8),
        prop::collection::vec((any::<prop::sample::Index>(), any::<prop::sample::Index>()), 0..=3),
    )
        .prop_map(|(n, raw_edges, raw_cells)| {
            let states: Vec<String> = (0..n).map(|i| format!("q{i}")).collect();
            let mut cells = Vec::new();
            for (k, (a, b)) in raw_edges.into_iter().enumerate() {
                let (a, b) = (a % n, b % n);
                if a == b {
                    continue;
                }
                let (lo, hi) = (a.min(b), a.max(b));
                cells.push(CellDesc::edge(&format!("e{k}"), &states[lo], &states[hi]));
            }
            let probe = ComplexDesc {
                states: states.clone(),
                cells: cells.clone(),
            };
            // Parallel pairs of edge words of length ≤ 2.
            let mut pairs = Vec::new();
            for a in &states {
                for b in &states {
                    let ws: Vec<Word> = congruence::edge_words(&probe, a, b)
                        .into_iter()
                        .filter(|w| w.len() <= 2)
                        .collect();
                    for i in 0..ws.len() {
                        for j in i + 1..ws.len() {
                            pairs.push((a.clone(), b.clone(), ws[i].clone(), ws[j].clone()));
                        }
                    }
                }
            }
            if !pairs.is_empty() {
                for (k, (i, flip)) in raw_cells.into_iter().enumerate() {
                    let (a, b, u, v) = &pairs[i.index(pairs.len())];
                    let (u, v) = if flip.index(2) == 0 { (u, v) } else { (v, u) };
                    let expr =
                        |w: &Word| PathExpr::normcomp_all(w.iter().map(|id| PathExpr::edge(id)).collect()).unwrap();
                    cells.push(CellDesc::two_cell(&format!("t{k}"), a, b, expr(u), expr(v)));
                }
            }
            ComplexDesc { states, cells }
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn random_complexes_match_oracle(desc in random_desc()) {
        agrees_with_oracle(&desc);
    }
}
