//! Flow-level constructions: path-space strata of chains of globes, the
//! globe round trip, cell-by-cell counit verification, the fundamental
//! category of a loop-free 2-dimensional complex and the flow presented by
//! free 𝒢-space generators.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::complex::{CellDesc, Complex, ComplexDesc, ComplexError, NormalPath, PathExpr};
use crate::gspace::{FreeGSpace, GSpaceError};
use crate::rational::{self, Rational};
use crate::reedy::{Pushout, PushoutReport, ReedyError};
use crate::reparam::{PLHomeo, PosLen};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FlowError {
    #[error("the complex has directed loops")]
    HasLoops,
    #[error("cell {0:?} has disk dimension above 1")]
    HigherCellsPresent(String),
    #[error("generators form a cycle; give a bound")]
    UnboundedEnumeration,
    #[error("unknown object {0:?}")]
    UnknownObject(String),
    #[error("label {0:?} is used by two generators")]
    DuplicateLabel(String),
    #[error("empty chain")]
    EmptyChain,
    #[error("class count {got} disagrees with tensor basis size {expected}")]
    CountMismatch { got: usize, expected: usize },
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Reedy(#[from] ReedyError),
    #[error(transparent)]
    GSpace(#[from] GSpaceError),
}

/// One stratum of a path space: paths with a fixed carrier, parametrized
/// by `𝒢(1,p) × Z₁ × … × Z_p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct StratumDesc {
    pub carrier: Vec<String>,
    pub factor_dims: Vec<u32>,
    pub reparam_arity: usize,
}

/// Coordinates of a path in a stratum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratumPoint {
    pub phi: PLHomeo,
    pub points: Vec<Vec<Rational>>,
}

fn chain_state(i: usize) -> String {
    format!("x{i}")
}

fn chain_cell(i: usize) -> String {
    format!("g{i}")
}

/// The stratum of a chain of globes with the given disk dimensions.
pub fn chain_path_space(dims: &[u32]) -> Result<StratumDesc, FlowError> {
    if dims.is_empty() {
        return Err(FlowError::EmptyChain);
    }
    Ok(StratumDesc {
        carrier: (1..=dims.len()).map(chain_cell).collect(),
        factor_dims: dims.to_vec(),
        reparam_arity: dims.len(),
    })
}

/// The chain `x0 → x1 → … → xp` of globes `g1 … gp`. A globe of disk
/// dimension 1 is glued along two parallel edges `gi-` and `gi+`.
pub fn chain_complex(dims: &[u32]) -> Result<ComplexDesc, FlowError> {
    if dims.is_empty() {
        return Err(FlowError::EmptyChain);
    }
    let states = (0..=dims.len()).map(chain_state).collect();
    let mut cells = Vec::new();
    for (k, &d) in dims.iter().enumerate() {
        let (i, from, to) = (k + 1, chain_state(k), chain_state(k + 1));
        let id = chain_cell(i);
        match d {
            0 => cells.push(CellDesc::edge(&id, &from, &to)),
            _ => {
                let (m, p) = (format!("{id}-"), format!("{id}+"));
                cells.push(CellDesc::edge(&m, &from, &to));
                cells.push(CellDesc::edge(&p, &from, &to));
                let mut c = CellDesc::two_cell(&id, &from, &to, PathExpr::edge(&m), PathExpr::edge(&p));
                c.dim = d;
                cells.push(c);
            }
        }
    }
    Ok(ComplexDesc { states, cells })
}

/// `Ψ(φ, z₁, …, z_p)`: unit-speed steps through the carrier at the given
/// points, reparametrized by `φ ∈ 𝒢(ℓ, p)`.
pub fn stratum_path(x: &Complex, stratum: &StratumDesc, at: &StratumPoint) -> Result<NormalPath, FlowError> {
    let mut acc: Option<NormalPath> = None;
    for (id, z) in stratum.carrier.iter().zip(&at.points) {
        let seg = x.segment_path(id, z.clone(), PLHomeo::identity(PosLen::one()))?;
        acc = Some(match acc {
            None => seg,
            Some(a) => a.concat(&seg)?,
        });
    }
    let unit = acc.ok_or(FlowError::EmptyChain)?;
    Ok(unit.reparametrize(&at.phi)?)
}

/// Inverse of [`stratum_path`]: the twist is the block sum of the segment
/// reparametrizations.
pub fn stratum_coordinates(p: &NormalPath) -> StratumPoint {
    let chis: Vec<PLHomeo> = p.segs().iter().map(|s| s.chi.clone()).collect();
    StratumPoint {
        phi: PLHomeo::tensor(&chis).expect("nonempty"),
        points: p.segs().iter().map(|s| s.z.clone()).collect(),
    }
}

/// One stratum per carrier from `from` to `to`.
pub fn mgflow_strata(x: &Complex, from: &str, to: &str, bound: Option<usize>) -> Result<Vec<StratumDesc>, FlowError> {
    let words = x.enumerate_carriers(from, to, bound)?;
    Ok(words
        .into_iter()
        .map(|w| StratumDesc {
            factor_dims: w.iter().map(|id| x.cell(id).expect("enumerated").dim).collect(),
            reparam_arity: w.len(),
            carrier: w,
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GlobeReport {
    pub length: PosLen,
    pub basis_in: Vec<String>,
    pub basis_out: Vec<String>,
    pub endpoints_ok: bool,
    pub samples: usize,
    pub sample_failures: usize,
    pub ok: bool,
}

/// The globe of the discrete space `U`: states `0`, `1` and one edge per label.
pub fn globe_complex(labels: &[String]) -> ComplexDesc {
    ComplexDesc {
        states: vec!["0".into(), "1".into()],
        cells: labels.iter().map(|u| CellDesc::edge(u, "0", "1")).collect(),
    }
}

/// Sends `Glob(𝔽_ℓ U)` to the globe complex and reads the path space back,
/// comparing presentations and a fixed set of elements `(φ, u)`.
pub fn globe_roundtrip(len: &PosLen, labels: &[String]) -> Result<GlobeReport, FlowError> {
    let source = FreeGSpace::new(len.clone(), labels.to_vec())?;
    let x = globe_complex(labels).validate()?;

    let mut endpoints_ok = true;
    for a in x.states() {
        for b in x.states() {
            let words = x.enumerate_carriers(a, b, None)?;
            let expected = a == "0" && b == "1";
            if expected != !words.is_empty() || words.iter().any(|w| w.len() != 1) {
                endpoints_ok = false;
            }
        }
    }
    let basis_out: Vec<String> = x
        .enumerate_carriers("0", "1", None)?
        .into_iter()
        .map(|mut w| w.remove(0))
        .collect();
    let mut basis_in = source.basis().to_vec();
    basis_in.sort();
    let back = FreeGSpace::new(len.clone(), basis_out.clone())?;

    let l = len.value();
    let bent = PLHomeo::new(
        len.clone(),
        len.clone(),
        vec![
            (rational::zero(), rational::zero()),
            (l * rational::q(1, 3), l * rational::q(1, 2)),
            (l.clone(), l.clone()),
        ],
    )
    .expect("monotone");
    let maps = [
        PLHomeo::identity(len.clone()),
        PLHomeo::linear(PosLen::one(), len.clone()),
        bent,
    ];
    let to_unit = PLHomeo::mu(len.clone());
    let mut samples = 0;
    let mut sample_failures = 0;
    for u in source.basis() {
        for phi in &maps {
            samples += 1;
            let chi = phi.compose(&to_unit).expect("lengths chain");
            let p = x.normalize(&PathExpr::step(u, vec![], chi))?;
            let seg = &p.segs()[0];
            let phi_back = seg.chi.compose(&to_unit.inverse()).expect("lengths chain");
            if p.segs().len() != 1 || seg.cell != *u || phi_back != *phi {
                sample_failures += 1;
            }
        }
    }
    let ok = endpoints_ok && sample_failures == 0 && basis_in == basis_out && back.length() == source.length();
    Ok(GlobeReport {
        length: len.clone(),
        basis_in,
        basis_out,
        endpoints_ok,
        samples,
        sample_failures,
        ok,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CounitReport {
    pub bound: usize,
    pub steps: Vec<PushoutReport>,
    pub ok: bool,
}

/// Runs the pushout check at every attachment of `x`, in cell order.
pub fn counit_check(x: &Complex, bound: usize) -> Result<CounitReport, FlowError> {
    let mut steps = Vec::with_capacity(x.cell_count());
    for k in 0..x.cell_count() {
        steps.push(Pushout::at(x, k)?.pushout_check(bound)?);
    }
    let ok = steps.iter().all(|s| s.bijection);
    Ok(CounitReport { bound, steps, ok })
}

/// Objects, morphism classes per ordered pair and the composition table on
/// class indices. Keys are `"α→β"` and `"α→β→γ"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FlowPresentation {
    pub objects: Vec<String>,
    pub homs: BTreeMap<String, Vec<Vec<String>>>,
    pub comp: BTreeMap<String, Vec<[usize; 3]>>,
}

pub fn hom_key(a: &str, b: &str) -> String {
    format!("{a}→{b}")
}

pub fn comp_key(a: &str, b: &str, c: &str) -> String {
    format!("{a}→{b}→{c}")
}

impl FlowPresentation {
    pub fn hom(&self, a: &str, b: &str) -> &[Vec<String>] {
        self.homs.get(&hom_key(a, b)).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn hom_size(&self, a: &str, b: &str) -> usize {
        self.hom(a, b).len()
    }

    /// Associativity of the composition table.
    pub fn is_associative(&self) -> bool {
        let lookup: BTreeMap<(&str, usize, usize), usize> = self
            .comp
            .iter()
            .flat_map(|(k, rows)| rows.iter().map(move |r| ((k.as_str(), r[0], r[1]), r[2])))
            .collect();
        let get = |a: &str, b: &str, c: &str, i, j| lookup.get(&(comp_key(a, b, c).as_str(), i, j)).copied();
        for a in &self.objects {
            for b in &self.objects {
                for c in &self.objects {
                    for d in &self.objects {
                        for i in 0..self.hom_size(a, b) {
                            for j in 0..self.hom_size(b, c) {
                                for k in 0..self.hom_size(c, d) {
                                    let l = get(a, b, c, i, j).and_then(|ij| get(a, c, d, ij, k));
                                    let r = get(b, c, d, j, k).and_then(|jk| get(a, b, d, i, jk));
                                    if l != r {
                                        return false;
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        true
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Edge words of a loop-free complex of dimension at most 2 modulo the
/// congruence generated by the 2-cells.
#[derive(Debug, Clone)]
pub struct FundamentalCategory {
    complex: Complex,
    words: Vec<(Vec<String>, String, String)>,
    index: BTreeMap<Vec<String>, usize>,
    class: Vec<usize>,
    relations: Vec<(Vec<String>, Vec<String>)>,
}

impl FundamentalCategory {
    pub fn new(desc: &ComplexDesc) -> Result<Self, FlowError> {
        if let Some(c) = desc.cells.iter().find(|c| c.dim > 1) {
            return Err(FlowError::HigherCellsPresent(c.id.clone()));
        }
        let complex = desc.validate()?;
        if !complex.loop_free() {
            return Err(FlowError::HasLoops);
        }
        let mut memo = BTreeMap::new();
        let relations: Vec<(Vec<String>, Vec<String>)> = complex
            .cells()
            .filter_map(|c| c.boundary())
            .map(|(m, p)| {
                (
                    edge_word(&complex, &m.carrier(), &mut memo),
                    edge_word(&complex, &p.carrier(), &mut memo),
                )
            })
            .collect();

        let mut words = Vec::new();
        for a in complex.states() {
            for b in complex.states() {
                for w in complex.enumerate_carriers(a, b, None)? {
                    if w.iter().all(|id| complex.cell(id).expect("enumerated").dim == 0) {
                        words.push((w, a.clone(), b.clone()));
                    }
                }
            }
        }
        let index: BTreeMap<Vec<String>, usize> =
            words.iter().enumerate().map(|(i, (w, _, _))| (w.clone(), i)).collect();
        let mut uf = UnionFind::new(words.len());
        for (i, (w, _, _)) in words.iter().enumerate() {
            for (l, r) in &relations {
                for (from, to) in [(l, r), (r, l)] {
                    for at in occurrences(w, from) {
                        let mut v = w[..at].to_vec();
                        v.extend(to.iter().cloned());
                        v.extend(w[at + from.len()..].iter().cloned());
                        let j = index[&v];
                        uf.union(i, j);
                    }
                }
            }
        }
        // Words are sorted within each hom, so the root of a class is its
        // least word only up to union order; pick the least member explicitly.
        let mut least: BTreeMap<usize, usize> = BTreeMap::new();
        for i in 0..words.len() {
            let r = uf.find(i);
            let e = least.entry(r).or_insert(i);
            if words[i].0 < words[*e].0 {
                *e = i;
            }
        }
        let class = (0..words.len()).map(|i| least[&uf.find(i)]).collect();
        Ok(FundamentalCategory {
            complex,
            words,
            index,
            class,
            relations,
        })
    }

    pub fn relations(&self) -> &[(Vec<String>, Vec<String>)] {
        &self.relations
    }

    /// All edge words from `a` to `b`, in lexicographic order.
    pub fn edge_words(&self, a: &str, b: &str) -> Vec<Vec<String>> {
        self.words
            .iter()
            .filter(|(_, x, y)| x == a && y == b)
            .map(|(w, _, _)| w.clone())
            .collect()
    }

    /// The least word in the class of an arbitrary carrier; 2-cells are
    /// replaced by the edge word of their lower boundary.
    pub fn representative(&self, carrier: &[String]) -> Option<Vec<String>> {
        let mut memo = BTreeMap::new();
        let w = edge_word(&self.complex, carrier, &mut memo);
        self.index.get(&w).map(|&i| self.words[self.class[i]].0.clone())
    }

    pub fn presentation(&self) -> FlowPresentation {
        let objects = self.complex.states().to_vec();
        let mut homs: BTreeMap<String, Vec<Vec<String>>> = BTreeMap::new();
        for (i, (_, a, b)) in self.words.iter().enumerate() {
            if self.class[i] == i {
                homs.entry(hom_key(a, b)).or_default().push(self.words[i].0.clone());
            }
        }
        for v in homs.values_mut() {
            v.sort();
        }
        let pos = |a: &str, b: &str, w: &Vec<String>| -> Option<usize> {
            homs.get(&hom_key(a, b)).and_then(|v| v.binary_search(w).ok())
        };
        let mut comp: BTreeMap<String, Vec<[usize; 3]>> = BTreeMap::new();
        for a in &objects {
            for b in &objects {
                for c in &objects {
                    let (Some(l), Some(r)) = (homs.get(&hom_key(a, b)), homs.get(&hom_key(b, c))) else {
                        continue;
                    };
                    let mut rows = Vec::new();
                    for (i, u) in l.iter().enumerate() {
                        for (j, v) in r.iter().enumerate() {
                            let uv: Vec<String> = u.iter().chain(v).cloned().collect();
                            let rep = self.representative(&uv).expect("concatenation is an edge word");
                            rows.push([i, j, pos(a, c, &rep).expect("class listed")]);
                        }
                    }
                    comp.insert(comp_key(a, b, c), rows);
                }
            }
        }
        FlowPresentation { objects, homs, comp }
    }

    /// Checks that the class of `u·v` depends only on the classes of `u`
    /// and `v`, over every composable pair of edge words.
    pub fn congruence_well_defined(&self) -> bool {
        let reps: BTreeMap<&Vec<String>, &Vec<String>> = self
            .words
            .iter()
            .enumerate()
            .map(|(i, (w, _, _))| (w, &self.words[self.class[i]].0))
            .collect();
        for (u, _, b) in &self.words {
            for (v, c, _) in &self.words {
                if b != c {
                    continue;
                }
                let uv: Vec<String> = u.iter().chain(v).cloned().collect();
                let ru_rv: Vec<String> = reps[u].iter().chain(reps[v].iter()).cloned().collect();
                if self.representative(&uv) != self.representative(&ru_rv) {
                    return false;
                }
            }
        }
        true
    }
}

fn occurrences(w: &[String], pat: &[String]) -> Vec<usize> {
    if pat.is_empty() || pat.len() > w.len() {
        return Vec::new();
    }
    (0..=w.len() - pat.len())
        .filter(|&i| w[i..i + pat.len()] == *pat)
        .collect()
}

fn edge_word(x: &Complex, carrier: &[String], memo: &mut BTreeMap<String, Vec<String>>) -> Vec<String> {
    let mut out = Vec::new();
    for id in carrier {
        if let Some(w) = memo.get(id) {
            out.extend(w.iter().cloned());
            continue;
        }
        let c = x.cell(id).expect("carrier cells belong to the complex");
        let w = match c.boundary() {
            None => vec![id.clone()],
            Some((m, _)) => edge_word(x, &m.carrier(), memo),
        };
        memo.insert(id.clone(), w.clone());
        out.extend(w);
    }
    out
}

/// The fundamental category of a loop-free complex of dimension at most 2.
pub fn fundamental_category(desc: &ComplexDesc) -> Result<FlowPresentation, FlowError> {
    Ok(FundamentalCategory::new(desc)?.presentation())
}

/// A generator `from → to` whose path space is a free 𝒢-space.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct Generator {
    pub from: String,
    pub to: String,
    pub space: FreeGSpace,
}

/// The flow presented by free generators: classes from `α` to `β` are
/// words of basis labels along chains of generators; composition is
/// concatenation. With cyclic generators a chain-length bound is required.
pub fn flow_of_gflow(
    objects: &[String],
    gens: &[Generator],
    bound: Option<usize>,
) -> Result<FlowPresentation, FlowError> {
    let known: BTreeSet<&str> = objects.iter().map(String::as_str).collect();
    let mut labels = BTreeSet::new();
    for g in gens {
        for s in [&g.from, &g.to] {
            if !known.contains(s.as_str()) {
                return Err(FlowError::UnknownObject(s.clone()));
            }
        }
        for u in g.space.basis() {
            if !labels.insert(u.as_str()) {
                return Err(FlowError::DuplicateLabel(u.clone()));
            }
        }
    }
    let graph = ComplexDesc {
        states: objects.to_vec(),
        cells: gens
            .iter()
            .enumerate()
            .map(|(i, g)| CellDesc::edge(&i.to_string(), &g.from, &g.to))
            .collect(),
    }
    .validate()?;
    if bound.is_none() && !graph.loop_free() {
        return Err(FlowError::UnboundedEnumeration);
    }
    let mut homs: BTreeMap<String, Vec<Vec<String>>> = BTreeMap::new();
    for a in objects {
        for b in objects {
            let mut classes = Vec::new();
            for chain in graph.enumerate_carriers(a, b, bound)? {
                let spaces: Vec<&FreeGSpace> = chain
                    .iter()
                    .map(|i| &gens[i.parse::<usize>().expect("index")].space)
                    .collect();
                let product = spaces[1..].iter().fold(spaces[0].clone(), |acc, f| acc.tensor(f));
                let words = label_words(&spaces);
                if words.len() != product.basis().len() {
                    return Err(FlowError::CountMismatch {
                        got: words.len(),
                        expected: product.basis().len(),
                    });
                }
                classes.extend(words);
            }
            if !classes.is_empty() {
                classes.sort();
                homs.insert(hom_key(a, b), classes);
            }
        }
    }
    let mut comp = BTreeMap::new();
    for a in objects {
        for b in objects {
            for c in objects {
                let (Some(l), Some(r), Some(t)) = (
                    homs.get(&hom_key(a, b)),
                    homs.get(&hom_key(b, c)),
                    homs.get(&hom_key(a, c)),
                ) else {
                    continue;
                };
                let mut rows = Vec::new();
                for (i, u) in l.iter().enumerate() {
                    for (j, v) in r.iter().enumerate() {
                        let uv: Vec<String> = u.iter().chain(v).cloned().collect();
                        if let Ok(k) = t.binary_search(&uv) {
                            rows.push([i, j, k]);
                        }
                    }
                }
                if !rows.is_empty() {
                    comp.insert(comp_key(a, b, c), rows);
                }
            }
        }
    }
    Ok(FlowPresentation {
        objects: objects.to_vec(),
        homs,
        comp,
    })
}

fn label_words(spaces: &[&FreeGSpace]) -> Vec<Vec<String>> {
    spaces.iter().fold(vec![Vec::new()], |acc, f| {
        acc.iter()
            .flat_map(|w| {
                f.basis().iter().map(move |u| {
                    let mut w = w.clone();
                    w.push(u.clone());
                    w
                })
            })
            .collect()
    })
}
