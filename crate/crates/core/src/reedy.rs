//! Path spaces of a one-cell pushout `X = A ∪ c` as a rewriting system.
//!
//! An element is a tuple of entries over consecutive states. A `Path` entry
//! (ε = 0) is a path of `A`; an ε = 1 entry runs from `u` to `v`, the ends of
//! the new cell, and is either `Inj(p)` (a path of `A` seen inside the
//! pushout of the boundary inclusion) or a point `(z, χ)` of the new cell.
//! Two rewrites lower the degree `n + Σε` by one:
//!
//! * merge: two adjacent ε = 0 entries are Moore-composed;
//! * demote: `Inj(p)` becomes `Path(p)`, and a cell point with `z` on the
//!   boundary sphere becomes the attaching path reparametrized by `χ`.
//!
//! Irreducible elements are the simplified ones; [`Pushout::realize`] maps
//! them bijectively onto the paths of `X`.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::complex::{CellDesc, Complex, ComplexDesc, ComplexError, NormalPath, Segment};
use crate::rational::{self, Rational};
use crate::reparam::{PLHomeo, PosLen};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReedyError {
    #[error("entries {0} and {1} are not both ε=0 paths")]
    NotComposableHere(usize, usize),
    #[error("entry {0} is not an ε=0 path from u to v")]
    WrongEndpoints(usize),
    #[error("entry {0} admits no demotion")]
    NotDemotable(usize),
    #[error("index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("no boundary path recorded for point {0}")]
    MissingBoundaryData(String),
    #[error("element is malformed: {0}")]
    Malformed(String),
    #[error("complex does not match the pushout: {0}")]
    ComplexMismatch(String),
    #[error("cell position {0} is out of range")]
    NoSuchCell(usize),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// One slot `(uᵢ₋₁, εᵢ, uᵢ)` of an object.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Slot(pub String, pub u8, pub String);

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Entry {
    Path(NormalPath),
    Inj(NormalPath),
    Cell {
        #[serde(with = "rational::serde_str_vec")]
        z: Vec<Rational>,
        chi: PLHomeo,
    },
}

impl Entry {
    pub fn eps(&self) -> u8 {
        match self {
            Entry::Path(_) => 0,
            Entry::Inj(_) | Entry::Cell { .. } => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ReedyElem {
    pub entries: Vec<Entry>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rewrite {
    Merge(usize),
    Demote(usize),
}

/// The data of a single attachment: the base `A`, the new cell and, for
/// points on its boundary sphere, the attaching paths in `A`.
#[derive(Debug, Clone)]
pub struct Pushout {
    base: Complex,
    id: String,
    dim: usize,
    from: String,
    to: String,
    boundary: BTreeMap<Vec<Rational>, NormalPath>,
}

impl Pushout {
    /// The attachment of the cell at `position` of a validated complex.
    pub fn at(x: &Complex, position: usize) -> Result<Self, ReedyError> {
        if position >= x.cell_count() {
            return Err(ReedyError::NoSuchCell(position));
        }
        let base = x.desc().prefix(position).validate()?;
        let c = x.cell_at(position);
        let mut boundary = BTreeMap::new();
        if let Some((m, p)) = c.boundary() {
            boundary.insert(vec![rational::int(-1)], m.clone());
            boundary.insert(vec![rational::int(1)], p.clone());
        }
        Ok(Pushout {
            base,
            id: c.id.to_string(),
            dim: c.dim as usize,
            from: c.from.to_string(),
            to: c.to.to_string(),
            boundary,
        })
    }

    /// The attachment of `x.cell(id)`.
    pub fn for_cell(x: &Complex, id: &str) -> Result<Self, ReedyError> {
        let c = x
            .cell(id)
            .ok_or_else(|| ReedyError::Complex(ComplexError::UnknownCell(id.to_string())))?;
        Self::at(x, c.position)
    }

    /// A formal attachment of a cell of any disk dimension. Boundary points
    /// must lie on the unit sphere and their paths run `from → to` in `base`
    /// with length 1.
    pub fn formal(
        base: Complex,
        id: &str,
        dim: usize,
        from: &str,
        to: &str,
        boundary: Vec<(Vec<Rational>, NormalPath)>,
    ) -> Result<Self, ReedyError> {
        for s in [from, to] {
            if !base.has_state(s) {
                return Err(ComplexError::UnknownState(s.to_string()).into());
            }
        }
        if base.cell(id).is_some() {
            return Err(ComplexError::DuplicateCell(id.to_string()).into());
        }
        let mut table = BTreeMap::new();
        for (z, p) in boundary {
            let on_sphere =
                z.len() == dim && rational::inside_closed_unit_ball(&z) && !rational::strictly_inside_unit_ball(&z);
            if !on_sphere {
                return Err(ReedyError::Malformed(format!(
                    "{} is not on the boundary sphere",
                    show_point(&z)
                )));
            }
            base.check_path(&p)?;
            if p.from_state() != from || p.to_state() != to || p.total_len() != PosLen::one() {
                return Err(ReedyError::Malformed(format!(
                    "boundary path at {} must run {from} → {to} with length 1",
                    show_point(&z)
                )));
            }
            table.insert(z, p);
        }
        Ok(Pushout {
            base,
            id: id.to_string(),
            dim,
            from: from.to_string(),
            to: to.to_string(),
            boundary: table,
        })
    }

    pub fn base(&self) -> &Complex {
        &self.base
    }

    pub fn cell_id(&self) -> &str {
        &self.id
    }

    pub fn cell_dim(&self) -> usize {
        self.dim
    }

    pub fn ends(&self) -> (&str, &str) {
        (&self.from, &self.to)
    }

    pub fn boundary_points(&self) -> impl Iterator<Item = &Vec<Rational>> {
        self.boundary.keys()
    }

    fn entry_ends<'a>(&'a self, e: &'a Entry) -> (&'a str, &'a str) {
        match e {
            Entry::Path(p) | Entry::Inj(p) => (p.from_state(), p.to_state()),
            Entry::Cell { .. } => (&self.from, &self.to),
        }
    }

    pub fn obj(&self, e: &ReedyElem) -> Vec<Slot> {
        e.entries
            .iter()
            .map(|x| {
                let (a, b) = self.entry_ends(x);
                Slot(a.to_string(), x.eps(), b.to_string())
            })
            .collect()
    }

    /// `n + Σεᵢ`.
    pub fn degree(&self, e: &ReedyElem) -> usize {
        e.entries.len() + e.entries.iter().map(|x| x.eps() as usize).sum::<usize>()
    }

    /// Validates endpoints, paths and points of an element.
    pub fn check(&self, e: &ReedyElem) -> Result<(), ReedyError> {
        if e.entries.is_empty() {
            return Err(ReedyError::Malformed("no entries".into()));
        }
        for (i, x) in e.entries.iter().enumerate() {
            match x {
                Entry::Path(p) => self.base.check_path(p)?,
                Entry::Inj(p) => {
                    self.base.check_path(p)?;
                    if p.from_state() != self.from || p.to_state() != self.to {
                        return Err(ReedyError::WrongEndpoints(i));
                    }
                }
                Entry::Cell { z, chi } => {
                    if z.len() != self.dim || !rational::inside_closed_unit_ball(z) {
                        return Err(ReedyError::Malformed(format!(
                            "entry {i}: point outside D^{}",
                            self.dim
                        )));
                    }
                    if *chi.dst_len() != PosLen::one() {
                        return Err(ReedyError::Malformed(format!("entry {i}: chi must end at length 1")));
                    }
                    if !rational::strictly_inside_unit_ball(z) && !self.boundary.contains_key(z) {
                        return Err(ReedyError::MissingBoundaryData(show_point(z)));
                    }
                }
            }
        }
        for (i, w) in e.entries.windows(2).enumerate() {
            if self.entry_ends(&w[0]).1 != self.entry_ends(&w[1]).0 {
                return Err(ReedyError::Malformed(format!("entries {i} and {} do not chain", i + 1)));
            }
        }
        Ok(())
    }

    /// Merges entries `i` and `i+1`.
    pub fn apply_composition(&self, e: &ReedyElem, i: usize) -> Result<ReedyElem, ReedyError> {
        match (e.entries.get(i), e.entries.get(i + 1)) {
            (Some(Entry::Path(p)), Some(Entry::Path(q))) => {
                let mut entries = e.entries.clone();
                entries.splice(i..i + 2, [Entry::Path(p.concat(q)?)]);
                Ok(ReedyElem { entries })
            }
            _ => Err(ReedyError::NotComposableHere(i, i + 1)),
        }
    }

    /// Raises an ε=0 entry from `u` to `v` to `Inj`.
    pub fn apply_inclusion(&self, e: &ReedyElem, i: usize) -> Result<ReedyElem, ReedyError> {
        match e.entries.get(i) {
            Some(Entry::Path(p)) if p.from_state() == self.from && p.to_state() == self.to => {
                let mut entries = e.entries.clone();
                entries[i] = Entry::Inj(p.clone());
                Ok(ReedyElem { entries })
            }
            Some(_) => Err(ReedyError::WrongEndpoints(i)),
            None => Err(ReedyError::IndexOutOfRange(i)),
        }
    }

    fn boundary_path(&self, z: &[Rational], chi: &PLHomeo) -> Result<NormalPath, ReedyError> {
        let side = self
            .boundary
            .get(z)
            .ok_or_else(|| ReedyError::MissingBoundaryData(show_point(z)))?;
        Ok(side.reparametrize(chi)?)
    }

    pub fn apply_demotion(&self, e: &ReedyElem, i: usize) -> Result<ReedyElem, ReedyError> {
        let lowered = match e.entries.get(i) {
            Some(Entry::Inj(p)) => p.clone(),
            Some(Entry::Cell { z, chi }) if !rational::strictly_inside_unit_ball(z) => self.boundary_path(z, chi)?,
            Some(_) => return Err(ReedyError::NotDemotable(i)),
            None => return Err(ReedyError::IndexOutOfRange(i)),
        };
        let mut entries = e.entries.clone();
        entries[i] = Entry::Path(lowered);
        Ok(ReedyElem { entries })
    }

    pub fn redexes(&self, e: &ReedyElem) -> Vec<Rewrite> {
        let mut out = Vec::new();
        for (i, x) in e.entries.iter().enumerate() {
            match x {
                Entry::Inj(_) => out.push(Rewrite::Demote(i)),
                Entry::Cell { z, .. } if !rational::strictly_inside_unit_ball(z) => out.push(Rewrite::Demote(i)),
                _ => {}
            }
            if let (Entry::Path(_), Some(Entry::Path(_))) = (x, e.entries.get(i + 1)) {
                out.push(Rewrite::Merge(i));
            }
        }
        out.sort();
        out
    }

    pub fn apply_rewrite(&self, e: &ReedyElem, r: Rewrite) -> Result<ReedyElem, ReedyError> {
        match r {
            Rewrite::Merge(i) => self.apply_composition(e, i),
            Rewrite::Demote(i) => self.apply_demotion(e, i),
        }
    }

    /// Rewrites to the simplified form, returning it with the degree after
    /// each step (starting with the input degree).
    pub fn normalize_traced(&self, e: &ReedyElem) -> Result<(ReedyElem, Vec<usize>), ReedyError> {
        let mut cur = e.clone();
        let mut trace = vec![self.degree(&cur)];
        while let Some(&r) = self.redexes(&cur).first() {
            cur = self.apply_rewrite(&cur, r)?;
            let d = self.degree(&cur);
            let prev = *trace.last().expect("nonempty");
            assert!(d + 1 == prev, "rewrite {r:?} moved degree {prev} to {d}");
            trace.push(d);
        }
        Ok((cur, trace))
    }

    pub fn normalize_elem(&self, e: &ReedyElem) -> Result<ReedyElem, ReedyError> {
        Ok(self.normalize_traced(e)?.0)
    }

    /// Structural test for simplified elements: no `Inj`, no two adjacent
    /// ε = 0 entries and every cell point strictly interior.
    pub fn is_simplified(&self, e: &ReedyElem) -> bool {
        let no_inj = e.entries.iter().all(|x| !matches!(x, Entry::Inj(_)));
        let interior = e.entries.iter().all(|x| match x {
            Entry::Cell { z, .. } => rational::strictly_inside_unit_ball(z),
            _ => true,
        });
        let no_pairs = e.entries.windows(2).all(|w| w[0].eps() + w[1].eps() > 0);
        no_inj && interior && no_pairs
    }

    /// Every irreducible element reachable by some rewrite order.
    pub fn all_normal_forms(&self, e: &ReedyElem) -> Result<BTreeSet<String>, ReedyError> {
        let mut seen = HashSet::new();
        let mut out = BTreeSet::new();
        let mut stack = vec![e.clone()];
        while let Some(cur) = stack.pop() {
            if !seen.insert(cur.clone()) {
                continue;
            }
            let rs = self.redexes(&cur);
            if rs.is_empty() {
                out.insert(serde_json::to_string(&cur).expect("serializable"));
            }
            for r in rs {
                stack.push(self.apply_rewrite(&cur, r)?);
            }
        }
        Ok(out)
    }

    /// The execution path of `X` an element stands for.
    pub fn realize(&self, e: &ReedyElem) -> Result<NormalPath, ReedyError> {
        let mut acc: Option<NormalPath> = None;
        for x in &e.entries {
            let p = match x {
                Entry::Path(p) | Entry::Inj(p) => p.clone(),
                Entry::Cell { z, chi } if rational::strictly_inside_unit_ball(z) => NormalPath::single(
                    &self.from,
                    &self.to,
                    Segment {
                        cell: self.id.clone(),
                        z: z.clone(),
                        len: chi.src_len().clone(),
                        chi: chi.clone(),
                    },
                ),
                Entry::Cell { z, chi } => self.boundary_path(z, chi)?,
            };
            acc = Some(match acc {
                None => p,
                Some(a) => a.concat(&p)?,
            });
        }
        acc.ok_or_else(|| ReedyError::Malformed("no entries".into()))
    }

    /// [`Pushout::realize`], after checking that `x` is this attachment.
    pub fn realize_in(&self, e: &ReedyElem, x: &Complex) -> Result<NormalPath, ReedyError> {
        self.matches(x)?;
        let p = self.realize(e)?;
        x.check_path(&p)?;
        Ok(p)
    }

    fn matches(&self, x: &Complex) -> Result<(), ReedyError> {
        let c = x
            .cell(&self.id)
            .ok_or_else(|| ReedyError::ComplexMismatch(format!("no cell {:?}", self.id)))?;
        if c.dim as usize != self.dim || c.from != self.from || c.to != self.to {
            return Err(ReedyError::ComplexMismatch(format!("cell {:?} differs", self.id)));
        }
        for b in self.base.cells() {
            match x.cell(b.id) {
                Some(o) if o.dim == b.dim && o.from == b.from && o.to == b.to => {}
                _ => return Err(ReedyError::ComplexMismatch(format!("base cell {:?} missing", b.id))),
            }
        }
        Ok(())
    }

    /// Splits a path of `X` into maximal runs in `A` and single segments in
    /// the new cell; the result is simplified.
    pub fn lift(&self, p: &NormalPath) -> Result<ReedyElem, ReedyError> {
        let mut entries = Vec::new();
        let mut run: Vec<Segment> = Vec::new();
        let mut at = p.from_state().to_string();
        let flush = |run: &mut Vec<Segment>, at: &mut String, entries: &mut Vec<Entry>| -> Result<(), ReedyError> {
            if run.is_empty() {
                return Ok(());
            }
            let mut acc: Option<NormalPath> = None;
            for s in run.drain(..) {
                let c = self
                    .base
                    .cell(&s.cell)
                    .ok_or_else(|| ReedyError::ComplexMismatch(format!("segment cell {:?} not in the base", s.cell)))?;
                let piece = NormalPath::single(c.from, c.to, s);
                acc = Some(match acc {
                    None => piece,
                    Some(a) => a.concat(&piece)?,
                });
            }
            let path = acc.expect("run nonempty");
            *at = path.to_state().to_string();
            entries.push(Entry::Path(path));
            Ok(())
        };
        for s in p.segs() {
            if s.cell == self.id {
                flush(&mut run, &mut at, &mut entries)?;
                if at != self.from {
                    return Err(ReedyError::Malformed("path does not chain".into()));
                }
                entries.push(Entry::Cell {
                    z: s.z.clone(),
                    chi: s.chi.clone(),
                });
                at = self.to.clone();
            } else {
                run.push(s.clone());
            }
        }
        flush(&mut run, &mut at, &mut entries)?;
        Ok(ReedyElem { entries })
    }

    /// Every A-path entry split into single segments: a maximally unmerged
    /// representative.
    pub fn expand(&self, e: &ReedyElem) -> ReedyElem {
        let entries = e
            .entries
            .iter()
            .flat_map(|x| match x {
                Entry::Path(p) => p.pieces(&self.base).into_iter().map(Entry::Path).collect(),
                other => vec![other.clone()],
            })
            .collect();
        ReedyElem { entries }
    }

    /// Checks the commutation relations among merges and inclusions on `e`,
    /// both as elements and after realization. Returns the failures.
    pub fn check_relations(&self, e: &ReedyElem) -> Result<Vec<String>, ReedyError> {
        let n = e.entries.len();
        let mut failures = Vec::new();
        let mut same = |tag: String,
                        l: Result<ReedyElem, ReedyError>,
                        r: Result<ReedyElem, ReedyError>|
         -> Result<(), ReedyError> {
            match (l, r) {
                (Ok(l), Ok(r)) => {
                    if l != r || self.realize(&l)? != self.realize(&r)? {
                        failures.push(tag);
                    }
                }
                (Err(_), Err(_)) => {}
                _ => failures.push(format!("{tag}: only one side defined")),
            }
            Ok(())
        };
        let comp = |x: &ReedyElem, i| self.apply_composition(x, i);
        let incl = |x: &ReedyElem, i| self.apply_inclusion(x, i);
        for i in 0..n {
            for j in i + 1..n {
                // merges at i and j, in either order
                same(
                    format!("merge {i}/{j}"),
                    comp(e, j).and_then(|x| comp(&x, i)),
                    comp(e, i).and_then(|x| comp(&x, j - 1)),
                )?;
                same(
                    format!("include {i}/{j}"),
                    incl(e, i).and_then(|x| incl(&x, j)),
                    incl(e, j).and_then(|x| incl(&x, i)),
                )?;
            }
        }
        for i in 0..n.saturating_sub(1) {
            for j in 0..n {
                if j >= i + 2 {
                    same(
                        format!("merge {i} past include {j}"),
                        incl(e, j).and_then(|x| comp(&x, i)),
                        comp(e, i).and_then(|x| incl(&x, j - 1)),
                    )?;
                } else if j < i {
                    same(
                        format!("merge {i} after include {j}"),
                        incl(e, j).and_then(|x| comp(&x, i)),
                        comp(e, i).and_then(|x| incl(&x, j)),
                    )?;
                }
            }
        }
        Ok(failures)
    }

    // All chained words of `X = A + c` up to length `cap`, with endpoints.
    fn words(&self, cap: usize) -> Vec<(Vec<String>, String, String)> {
        let mut cells: Vec<(String, String, String)> = self
            .base
            .cells()
            .map(|c| (c.id.to_string(), c.from.to_string(), c.to.to_string()))
            .collect();
        cells.push((self.id.clone(), self.from.clone(), self.to.clone()));
        let mut out = Vec::new();
        for s in self.base.states() {
            let mut stack: Vec<(Vec<String>, String)> = vec![(Vec::new(), s.clone())];
            while let Some((w, at)) = stack.pop() {
                if !w.is_empty() {
                    out.push((w.clone(), s.clone(), at.clone()));
                }
                if w.len() == cap {
                    continue;
                }
                for (id, f, t) in &cells {
                    if *f == at {
                        let mut w2 = w.clone();
                        w2.push(id.clone());
                        stack.push((w2, t.clone()));
                    }
                }
            }
        }
        out.sort();
        out
    }

    /// Simplified elements of carrier length at most `cap`, one canonical
    /// representative per shape.
    pub fn simplified_elements(&self, cap: usize) -> Result<Vec<ReedyElem>, ReedyError> {
        let mut out = Vec::new();
        for s in self.base.states() {
            let mut entries = Vec::new();
            self.grow(s, cap, false, &mut entries, &mut out)?;
        }
        Ok(out)
    }

    fn grow(
        &self,
        at: &str,
        room: usize,
        last_path: bool,
        entries: &mut Vec<Entry>,
        out: &mut Vec<ReedyElem>,
    ) -> Result<(), ReedyError> {
        if !entries.is_empty() {
            out.push(ReedyElem {
                entries: entries.clone(),
            });
        }
        if room == 0 {
            return Ok(());
        }
        if at == self.from {
            entries.push(Entry::Cell {
                z: vec![rational::zero(); self.dim],
                chi: PLHomeo::identity(PosLen::one()),
            });
            self.grow(&self.to.clone(), room - 1, false, entries, out)?;
            entries.pop();
        }
        if !last_path {
            for (w, end) in self.base.words_from(at, room) {
                entries.push(Entry::Path(self.base.canonical_path(&w)?));
                self.grow(&end, room - w.len(), true, entries, out)?;
                entries.pop();
            }
        }
        Ok(())
    }

    /// Compares the carriers of realized simplified elements with the
    /// carriers of `X`, up to length `bound`, and checks on each carrier that
    /// lifting, expanding and renormalizing recover the path.
    pub fn pushout_check(&self, bound: usize) -> Result<PushoutReport, ReedyError> {
        let mut mismatches = Vec::new();
        let mut lhs = Vec::new();
        for e in self.simplified_elements(bound)? {
            if !self.is_simplified(&e) {
                mismatches.push(format!("generated element is not simplified: {:?}", self.obj(&e)));
            }
            lhs.push(self.realize(&e)?.carrier());
        }
        lhs.sort();
        let rhs: Vec<Vec<String>> = self.words(bound).into_iter().map(|(w, _, _)| w).collect();
        let mut rhs = rhs;
        rhs.sort();
        for w in lhs.windows(2).filter(|w| w[0] == w[1]) {
            mismatches.push(format!("carrier {} realized twice", w[0].join(" ")));
        }
        let lset: BTreeSet<&Vec<String>> = lhs.iter().collect();
        let rset: BTreeSet<&Vec<String>> = rhs.iter().collect();
        for w in rset.difference(&lset) {
            mismatches.push(format!("carrier {} has no simplified element", w.join(" ")));
        }
        for w in lset.difference(&rset) {
            mismatches.push(format!("carrier {} is not a path of X", w.join(" ")));
        }
        let mut witnesses = 0;
        for w in &rhs {
            let p = self.canonical_x_path(w)?;
            let lifted = self.lift(&p)?;
            let ok = self.is_simplified(&lifted)
                && self.realize(&lifted)? == p
                && self.normalize_elem(&self.expand(&lifted))? == lifted;
            if ok {
                witnesses += 1;
            } else {
                mismatches.push(format!("lift of {} does not round-trip", w.join(" ")));
            }
        }
        let bijection = mismatches.is_empty();
        Ok(PushoutReport {
            cell: self.id.clone(),
            bound,
            lhs_carriers: lhs,
            rhs_carriers: rhs,
            witnesses,
            bijection,
            mismatches,
        })
    }

    fn canonical_x_path(&self, word: &[String]) -> Result<NormalPath, ReedyError> {
        let len = PosLen::new(rational::q(1, word.len() as i64))?;
        let mut acc: Option<NormalPath> = None;
        for id in word {
            let p = if *id == self.id {
                NormalPath::single(
                    &self.from,
                    &self.to,
                    Segment {
                        cell: id.clone(),
                        z: vec![rational::zero(); self.dim],
                        len: len.clone(),
                        chi: PLHomeo::mu(len.clone()),
                    },
                )
            } else {
                let c = self.base.cell(id).expect("word over X");
                self.base
                    .segment_path(id, vec![rational::zero(); c.dim as usize], PLHomeo::mu(len.clone()))?
            };
            acc = Some(match acc {
                None => p,
                Some(a) => a.concat(&p)?,
            });
        }
        acc.ok_or_else(|| ReedyError::Malformed("empty word".into()))
    }
}

impl From<crate::reparam::ReparamError> for ReedyError {
    fn from(e: crate::reparam::ReparamError) -> Self {
        ReedyError::Complex(e.into())
    }
}

fn show_point(z: &[Rational]) -> String {
    let parts: Vec<String> = z.iter().map(rational::format).collect();
    format!("({})", parts.join(","))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PushoutReport {
    pub cell: String,
    pub bound: usize,
    pub lhs_carriers: Vec<Vec<String>>,
    pub rhs_carriers: Vec<Vec<String>>,
    pub witnesses: usize,
    pub bijection: bool,
    pub mismatches: Vec<String>,
}

/// Convenience: `X = A + cell` validated, then the attachment of `cell`.
pub fn attach(base: &ComplexDesc, cell: CellDesc) -> Result<(Complex, Pushout), ReedyError> {
    let mut desc = base.clone();
    desc.cells.push(cell);
    let x = desc.validate()?;
    let po = Pushout::at(&x, x.cell_count() - 1)?;
    Ok((x, po))
}
