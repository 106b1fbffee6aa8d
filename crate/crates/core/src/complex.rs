//! Cellular multipointed d-spaces with combinatorial attaching data,
//! execution-path expressions and their carrier normal forms.
//!
//! A cell of disk dimension `n` is a globe `Glob(Dⁿ)` glued from state
//! `from` to state `to`. For `n = 0` the cell is a directed edge; for `n = 1`
//! it is a 2-cell whose two boundary paths (`z = −1` and `z = +1`) are
//! execution paths through earlier cells. A point of a cell is `(z, h)` with
//! `z ∈ Dⁿ` and height `h ∈ [0,1]`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::rational::{self, Rational};
use crate::reparam::{PLHomeo, PosLen, ReparamError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ComplexError {
    #[error("duplicate state {0:?}")]
    DuplicateState(String),
    #[error("duplicate cell {0:?}")]
    DuplicateCell(String),
    #[error("unknown state {0:?}")]
    UnknownState(String),
    #[error("unknown cell {0:?}")]
    UnknownCell(String),
    #[error("boundary of {cell:?} refers to {referenced:?}, which is not attached earlier")]
    ForwardReference { cell: String, referenced: String },
    #[error("boundary of {cell:?} runs {found}, expected {expected}")]
    BoundaryEndpointMismatch {
        cell: String,
        expected: String,
        found: String,
    },
    #[error("cell {cell:?} has disk dimension {dim}; only 0 and 1 are supported")]
    BadDim { cell: String, dim: u32 },
    #[error("cell {0:?} needs both boundary paths")]
    MissingBoundary(String),
    #[error("cell {0:?} is an edge and takes no boundary paths")]
    UnexpectedBoundary(String),
    #[error("point for cell {cell:?} has {got} coordinates, expected {expected}")]
    BadPoint { cell: String, expected: usize, got: usize },
    #[error("point for cell {0:?} lies outside the closed disk")]
    PointOutsideDisk(String),
    #[error("step in {0:?}: chi must end at length 1")]
    BadChiTarget(String),
    #[error("cannot compose: path ends at {left:?}, next starts at {right:?}")]
    EndpointMismatch { left: String, right: String },
    #[error("normalized composition needs length 1 operands, got {0}")]
    BadLength(String),
    #[error("{t} is outside [0,{len}]")]
    OutOfDomain { t: String, len: String },
    #[error("carriers from {from:?} to {to:?} are infinite; give a bound")]
    UnboundedEnumeration { from: String, to: String },
    #[error(transparent)]
    Reparam(#[from] ReparamError),
}

/// Unvalidated complex description, as read from JSON.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexDesc {
    pub states: Vec<String>,
    pub cells: Vec<CellDesc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellDesc {
    pub id: String,
    pub dim: u32,
    pub from: String,
    pub to: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary_minus: Option<PathExpr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary_plus: Option<PathExpr>,
}

impl CellDesc {
    pub fn edge(id: &str, from: &str, to: &str) -> Self {
        CellDesc {
            id: id.into(),
            dim: 0,
            from: from.into(),
            to: to.into(),
            boundary_minus: None,
            boundary_plus: None,
        }
    }

    pub fn two_cell(id: &str, from: &str, to: &str, minus: PathExpr, plus: PathExpr) -> Self {
        CellDesc {
            id: id.into(),
            dim: 1,
            from: from.into(),
            to: to.into(),
            boundary_minus: Some(minus),
            boundary_plus: Some(plus),
        }
    }
}

/// An execution-path expression.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PathExpr {
    /// `t ↦ ĝ(z, χ(t))` on `[0, src χ]`, with `χ ∈ 𝒢(ℓ,1)`.
    Step {
        cell: String,
        #[serde(with = "rational::serde_str_vec")]
        z: Vec<Rational>,
        chi: PLHomeo,
    },
    Moore(Box<PathExpr>, Box<PathExpr>),
    NormComp(Box<PathExpr>, Box<PathExpr>),
    Repar {
        path: Box<PathExpr>,
        phi: PLHomeo,
    },
}

impl PathExpr {
    pub fn step(cell: &str, z: Vec<Rational>, chi: PLHomeo) -> Self {
        PathExpr::Step {
            cell: cell.into(),
            z,
            chi,
        }
    }

    /// A unit-speed step of length 1 through the middle of an edge.
    pub fn edge(cell: &str) -> Self {
        Self::step(cell, vec![], PLHomeo::identity(PosLen::one()))
    }

    pub fn moore(l: PathExpr, r: PathExpr) -> Self {
        PathExpr::Moore(Box::new(l), Box::new(r))
    }

    pub fn normcomp(l: PathExpr, r: PathExpr) -> Self {
        PathExpr::NormComp(Box::new(l), Box::new(r))
    }

    pub fn repar(path: PathExpr, phi: PLHomeo) -> Self {
        PathExpr::Repar {
            path: Box::new(path),
            phi,
        }
    }

    /// Left-nested Moore composite of a nonempty list.
    pub fn moore_all(mut items: Vec<PathExpr>) -> Option<Self> {
        if items.is_empty() {
            return None;
        }
        let rest = items.split_off(1);
        let first = items.pop()?;
        Some(rest.into_iter().fold(first, PathExpr::moore))
    }

    /// Left-nested normalized composite of a nonempty list.
    pub fn normcomp_all(mut items: Vec<PathExpr>) -> Option<Self> {
        if items.is_empty() {
            return None;
        }
        let rest = items.split_off(1);
        let first = items.pop()?;
        Some(rest.into_iter().fold(first, PathExpr::normcomp))
    }

    /// Structural length, without consulting a complex.
    pub fn length(&self) -> Rational {
        match self {
            PathExpr::Step { chi, .. } => chi.src_len().value().clone(),
            PathExpr::Moore(l, r) => l.length() + r.length(),
            PathExpr::NormComp(..) => rational::one(),
            PathExpr::Repar { phi, .. } => phi.src_len().value().clone(),
        }
    }
}

/// One minimal piece of a normal form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Segment {
    pub cell: String,
    #[serde(with = "rational::serde_str_vec")]
    pub z: Vec<Rational>,
    pub len: PosLen,
    pub chi: PLHomeo,
}

/// A path in carrier normal form: consecutive minimal segments.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "NormalRepr", into = "NormalRepr")]
pub struct NormalPath {
    from: String,
    to: String,
    segs: Vec<Segment>,
}

#[derive(Serialize, Deserialize)]
struct NormalRepr {
    from: String,
    to: String,
    total_len: PosLen,
    segs: Vec<Segment>,
}

impl From<NormalPath> for NormalRepr {
    fn from(p: NormalPath) -> Self {
        NormalRepr {
            total_len: p.total_len(),
            from: p.from,
            to: p.to,
            segs: p.segs,
        }
    }
}

impl TryFrom<NormalRepr> for NormalPath {
    type Error = String;
    fn try_from(r: NormalRepr) -> Result<Self, String> {
        if r.segs.is_empty() {
            return Err("a normal path needs at least one segment".into());
        }
        for s in &r.segs {
            if s.chi.src_len() != &s.len || !s.chi.dst_len().value().eq(&rational::one()) {
                return Err(format!("segment in {:?}: chi must map [0,len] onto [0,1]", s.cell));
            }
        }
        let p = NormalPath {
            from: r.from,
            to: r.to,
            segs: r.segs,
        };
        if p.total_len() != r.total_len {
            return Err("total_len disagrees with segment lengths".into());
        }
        Ok(p)
    }
}

impl NormalPath {
    /// A one-segment path, unchecked against any complex.
    pub fn single(from: &str, to: &str, seg: Segment) -> NormalPath {
        NormalPath {
            from: from.to_string(),
            to: to.to_string(),
            segs: vec![seg],
        }
    }

    pub fn from_state(&self) -> &str {
        &self.from
    }

    pub fn to_state(&self) -> &str {
        &self.to
    }

    pub fn segs(&self) -> &[Segment] {
        &self.segs
    }

    pub fn total_len(&self) -> PosLen {
        PosLen::sum(self.segs.iter().map(|s| &s.len)).expect("nonempty")
    }

    pub fn carrier(&self) -> Vec<String> {
        self.segs.iter().map(|s| s.cell.clone()).collect()
    }

    pub fn is_minimal(&self) -> bool {
        self.segs.len() == 1
    }

    /// Moore composition; the caller checks endpoints.
    pub fn concat(&self, next: &NormalPath) -> Result<NormalPath, ComplexError> {
        if self.to != next.from {
            return Err(ComplexError::EndpointMismatch {
                left: self.to.clone(),
                right: next.from.clone(),
            });
        }
        let mut segs = self.segs.clone();
        segs.extend(next.segs.iter().cloned());
        Ok(NormalPath {
            from: self.from.clone(),
            to: next.to.clone(),
            segs,
        })
    }

    /// `γ ∘ φ` for `φ ∈ 𝒢(ℓ′, total_len)`.
    pub fn reparametrize(&self, phi: &PLHomeo) -> Result<NormalPath, ComplexError> {
        let lens: Vec<PosLen> = self.segs.iter().map(|s| s.len.clone()).collect();
        if *phi.dst_len() != self.total_len() {
            return Err(ReparamError::LengthMismatch {
                left: phi.dst_len().to_string(),
                right: self.total_len().to_string(),
            }
            .into());
        }
        let blocks = phi.preimage_blocks(&lens)?;
        let pieces = phi.decompose(&blocks)?;
        let segs = self
            .segs
            .iter()
            .zip(blocks.into_iter().zip(pieces))
            .map(|(s, (len, piece))| {
                Ok(Segment {
                    cell: s.cell.clone(),
                    z: s.z.clone(),
                    len,
                    chi: piece.compose(&s.chi)?,
                })
            })
            .collect::<Result<Vec<_>, ReparamError>>()?;
        Ok(NormalPath {
            from: self.from.clone(),
            to: self.to.clone(),
            segs,
        })
    }

    /// The first `k` segments as a path (`1 ≤ k ≤ len`).
    pub fn prefix(&self, k: usize, complex: &Complex) -> Option<NormalPath> {
        if k == 0 || k > self.segs.len() {
            return None;
        }
        let last = complex.cell(&self.segs[k - 1].cell)?;
        Some(NormalPath {
            from: self.from.clone(),
            to: last.to.to_string(),
            segs: self.segs[..k].to_vec(),
        })
    }

    /// Splits into one-segment paths.
    pub fn pieces(&self, complex: &Complex) -> Vec<NormalPath> {
        self.segs
            .iter()
            .map(|s| {
                let c = complex.cell(&s.cell).expect("segment cells belong to the complex");
                NormalPath {
                    from: c.from.to_string(),
                    to: c.to.to_string(),
                    segs: vec![s.clone()],
                }
            })
            .collect()
    }

    /// Expression form: a left-nested Moore composite of steps.
    pub fn to_expr(&self) -> PathExpr {
        let steps = self
            .segs
            .iter()
            .map(|s| PathExpr::step(&s.cell, s.z.clone(), s.chi.clone()))
            .collect();
        PathExpr::moore_all(steps).expect("nonempty")
    }

    /// When `other` has the same carrier and points, the `φ` with
    /// `other = self ∘ φ`.
    pub fn reparametrization_to(&self, other: &NormalPath) -> Option<PLHomeo> {
        if self.segs.len() != other.segs.len() {
            return None;
        }
        let mut parts = Vec::with_capacity(self.segs.len());
        for (a, b) in self.segs.iter().zip(&other.segs) {
            if a.cell != b.cell || a.z != b.z {
                return None;
            }
            parts.push(b.chi.compose(&a.chi.inverse()).ok()?);
        }
        PLHomeo::tensor(&parts).ok()
    }

    pub fn eval(&self, complex: &Complex, t: &Rational) -> Result<PathPoint, ComplexError> {
        let total = self.total_len();
        if *t < rational::zero() || t > total.value() {
            return Err(ComplexError::OutOfDomain {
                t: rational::format(t),
                len: total.to_string(),
            });
        }
        let mut offset = rational::zero();
        for s in &self.segs {
            let end = &offset + s.len.value();
            if *t <= end {
                let h = s.chi.eval(&(t - &offset))?;
                return Ok(complex.point(&s.cell, &s.z, h));
            }
            offset = end;
        }
        unreachable!("t is within the total length")
    }
}

impl fmt::Display for NormalPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -[{}]-> {}", self.from, self.carrier().join(" "), self.to)
    }
}

/// A point on an execution path: either a state, or a point `(z, h)` in the
/// interior of a cell's globe.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PathPoint {
    State(String),
    Interior {
        cell: String,
        #[serde(with = "rational::serde_str_vec")]
        z: Vec<Rational>,
        #[serde(with = "rational::serde_str")]
        height: Rational,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct CellInfo {
    id: String,
    dim: u32,
    from: String,
    to: String,
    // Boundary paths at z = −1 and z = +1, rescaled to length 1.
    boundary: Option<(NormalPath, NormalPath)>,
}

/// A validated complex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Complex {
    desc: ComplexDesc,
    cells: Vec<CellInfo>,
    index: BTreeMap<String, usize>,
    loop_free: bool,
}

/// Read-only view of a validated cell.
#[derive(Debug, Clone, Copy)]
pub struct CellRef<'a> {
    pub id: &'a str,
    pub dim: u32,
    pub from: &'a str,
    pub to: &'a str,
    pub position: usize,
    boundary: Option<&'a (NormalPath, NormalPath)>,
}

impl<'a> CellRef<'a> {
    /// Normalized boundary paths `(minus, plus)` of length 1.
    pub fn boundary(&self) -> Option<(&'a NormalPath, &'a NormalPath)> {
        self.boundary.map(|(m, p)| (m, p))
    }
}

impl ComplexDesc {
    pub fn validate(&self) -> Result<Complex, ComplexError> {
        Complex::new(self.clone())
    }

    /// The first `k` cells with all states.
    pub fn prefix(&self, k: usize) -> ComplexDesc {
        ComplexDesc {
            states: self.states.clone(),
            cells: self.cells[..k.min(self.cells.len())].to_vec(),
        }
    }
}

impl Complex {
    pub fn new(desc: ComplexDesc) -> Result<Self, ComplexError> {
        let mut states = BTreeSet::new();
        for s in &desc.states {
            if !states.insert(s.as_str()) {
                return Err(ComplexError::DuplicateState(s.clone()));
            }
        }
        let mut cx = Complex {
            desc: ComplexDesc {
                states: desc.states.clone(),
                cells: Vec::new(),
            },
            cells: Vec::new(),
            index: BTreeMap::new(),
            loop_free: true,
        };
        let all_ids: BTreeSet<&str> = desc.cells.iter().map(|c| c.id.as_str()).collect();
        for c in &desc.cells {
            if cx.index.contains_key(&c.id) {
                return Err(ComplexError::DuplicateCell(c.id.clone()));
            }
            for s in [&c.from, &c.to] {
                if !states.contains(s.as_str()) {
                    return Err(ComplexError::UnknownState(s.clone()));
                }
            }
            let boundary = match (c.dim, &c.boundary_minus, &c.boundary_plus) {
                (0, None, None) => None,
                (0, _, _) => return Err(ComplexError::UnexpectedBoundary(c.id.clone())),
                (1, Some(m), Some(p)) => {
                    let m = cx.boundary_path(c, m, &all_ids)?;
                    let p = cx.boundary_path(c, p, &all_ids)?;
                    Some((m, p))
                }
                (1, _, _) => return Err(ComplexError::MissingBoundary(c.id.clone())),
                (dim, _, _) => {
                    return Err(ComplexError::BadDim {
                        cell: c.id.clone(),
                        dim,
                    })
                }
            };
            cx.index.insert(c.id.clone(), cx.cells.len());
            cx.cells.push(CellInfo {
                id: c.id.clone(),
                dim: c.dim,
                from: c.from.clone(),
                to: c.to.clone(),
                boundary,
            });
            cx.desc.cells.push(c.clone());
        }
        cx.loop_free = cx.compute_loop_free();
        Ok(cx)
    }

    fn boundary_path(
        &self,
        cell: &CellDesc,
        expr: &PathExpr,
        all_ids: &BTreeSet<&str>,
    ) -> Result<NormalPath, ComplexError> {
        let p = self.normalize(expr).map_err(|e| match e {
            ComplexError::UnknownCell(id) if all_ids.contains(id.as_str()) => ComplexError::ForwardReference {
                cell: cell.id.clone(),
                referenced: id,
            },
            other => other,
        })?;
        if p.from != cell.from || p.to != cell.to {
            return Err(ComplexError::BoundaryEndpointMismatch {
                cell: cell.id.clone(),
                expected: format!("{} → {}", cell.from, cell.to),
                found: format!("{} → {}", p.from, p.to),
            });
        }
        let total = p.total_len();
        p.reparametrize(&PLHomeo::mu(total).inverse())
    }

    fn compute_loop_free(&self) -> bool {
        // Kahn's algorithm on the state graph.
        let mut indeg: BTreeMap<&str, usize> = self.desc.states.iter().map(|s| (s.as_str(), 0)).collect();
        for c in &self.cells {
            *indeg.get_mut(c.to.as_str()).expect("validated") += 1;
        }
        let mut ready: Vec<&str> = indeg.iter().filter(|(_, &d)| d == 0).map(|(s, _)| *s).collect();
        let mut seen = 0;
        while let Some(s) = ready.pop() {
            seen += 1;
            for c in self.cells.iter().filter(|c| c.from == s) {
                let d = indeg.get_mut(c.to.as_str()).expect("validated");
                *d -= 1;
                if *d == 0 {
                    ready.push(&c.to);
                }
            }
        }
        seen == self.desc.states.len()
    }

    pub fn desc(&self) -> &ComplexDesc {
        &self.desc
    }

    pub fn states(&self) -> &[String] {
        &self.desc.states
    }

    pub fn has_state(&self, s: &str) -> bool {
        self.desc.states.iter().any(|x| x == s)
    }

    pub fn loop_free(&self) -> bool {
        self.loop_free
    }

    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    pub fn cell(&self, id: &str) -> Option<CellRef<'_>> {
        self.index.get(id).map(|&i| self.cell_at(i))
    }

    pub fn cell_at(&self, position: usize) -> CellRef<'_> {
        let c = &self.cells[position];
        CellRef {
            id: &c.id,
            dim: c.dim,
            from: &c.from,
            to: &c.to,
            position,
            boundary: c.boundary.as_ref(),
        }
    }

    pub fn cells(&self) -> impl Iterator<Item = CellRef<'_>> {
        (0..self.cells.len()).map(|i| self.cell_at(i))
    }

    fn require(&self, id: &str) -> Result<&CellInfo, ComplexError> {
        self.index
            .get(id)
            .map(|&i| &self.cells[i])
            .ok_or_else(|| ComplexError::UnknownCell(id.to_string()))
    }

    fn check_point(&self, c: &CellInfo, z: &[Rational]) -> Result<(), ComplexError> {
        if z.len() != c.dim as usize {
            return Err(ComplexError::BadPoint {
                cell: c.id.clone(),
                expected: c.dim as usize,
                got: z.len(),
            });
        }
        if !rational::inside_closed_unit_ball(z) {
            return Err(ComplexError::PointOutsideDisk(c.id.clone()));
        }
        Ok(())
    }

    /// The point `ĝ(z, h)` of a cell, pushed down to a state when `h ∈ {0,1}`.
    fn point(&self, cell: &str, z: &[Rational], h: Rational) -> PathPoint {
        let c = &self.cells[self.index[cell]];
        if h == rational::zero() {
            PathPoint::State(c.from.clone())
        } else if h == rational::one() {
            PathPoint::State(c.to.clone())
        } else {
            PathPoint::Interior {
                cell: cell.to_string(),
                z: z.to_vec(),
                height: h,
            }
        }
    }

    /// A one-segment normal path for a step whose point is interior.
    pub fn segment_path(&self, cell: &str, z: Vec<Rational>, chi: PLHomeo) -> Result<NormalPath, ComplexError> {
        let c = self.require(cell)?;
        self.check_point(c, &z)?;
        if !rational::strictly_inside_unit_ball(&z) {
            return Err(ComplexError::PointOutsideDisk(c.id.clone()));
        }
        if chi.dst_len() != &PosLen::one() {
            return Err(ComplexError::BadChiTarget(c.id.clone()));
        }
        Ok(NormalPath {
            from: c.from.clone(),
            to: c.to.clone(),
            segs: vec![Segment {
                cell: c.id.clone(),
                z,
                len: chi.src_len().clone(),
                chi,
            }],
        })
    }

    /// The carrier normal form of an expression.
    pub fn normalize(&self, expr: &PathExpr) -> Result<NormalPath, ComplexError> {
        match expr {
            PathExpr::Step { cell, z, chi } => {
                let c = self.require(cell)?;
                self.check_point(c, z)?;
                if chi.dst_len() != &PosLen::one() {
                    return Err(ComplexError::BadChiTarget(c.id.clone()));
                }
                match &c.boundary {
                    Some((minus, plus)) if !rational::strictly_inside_unit_ball(z) => {
                        let side = if z[0] < rational::zero() { minus } else { plus };
                        side.reparametrize(chi)
                    }
                    _ => self.segment_path(cell, z.clone(), chi.clone()),
                }
            }
            PathExpr::Moore(l, r) => self.normalize(l)?.concat(&self.normalize(r)?),
            PathExpr::NormComp(l, r) => {
                let (l, r) = (self.normalize(l)?, self.normalize(r)?);
                for p in [&l, &r] {
                    if p.total_len() != PosLen::one() {
                        return Err(ComplexError::BadLength(p.total_len().to_string()));
                    }
                }
                let half = PLHomeo::mu(PosLen::new(rational::q(1, 2))?);
                l.reparametrize(&half)?.concat(&r.reparametrize(&half)?)
            }
            PathExpr::Repar { path, phi } => self.normalize(path)?.reparametrize(phi),
        }
    }

    pub fn carrier(&self, expr: &PathExpr) -> Result<Vec<String>, ComplexError> {
        Ok(self.normalize(expr)?.carrier())
    }

    pub fn is_minimal(&self, expr: &PathExpr) -> Result<bool, ComplexError> {
        Ok(self.normalize(expr)?.is_minimal())
    }

    /// Pointwise semantics evaluated on the expression tree itself, without
    /// normalizing.
    pub fn eval_path(&self, expr: &PathExpr, t: &Rational) -> Result<PathPoint, ComplexError> {
        let len = expr.length();
        if *t < rational::zero() || *t > len {
            return Err(ComplexError::OutOfDomain {
                t: rational::format(t),
                len: rational::format(&len),
            });
        }
        match expr {
            PathExpr::Step { cell, z, chi } => {
                let c = self.require(cell)?;
                let h = chi.eval(t)?;
                let i = self.index[cell];
                match &self.desc.cells[i] {
                    CellDesc {
                        boundary_minus: Some(m),
                        boundary_plus: Some(p),
                        ..
                    } if !rational::strictly_inside_unit_ball(z) && h != rational::zero() && h != rational::one() => {
                        let side = if z[0] < rational::zero() { m } else { p };
                        let at = &h * side.length();
                        self.eval_path(side, &at)
                    }
                    _ => Ok(self.point(&c.id, z, h)),
                }
            }
            PathExpr::Moore(l, r) => {
                let ll = l.length();
                if *t <= ll {
                    self.eval_path(l, t)
                } else {
                    self.eval_path(r, &(t - ll))
                }
            }
            PathExpr::NormComp(l, r) => {
                let two = rational::int(2);
                if *t <= rational::q(1, 2) {
                    self.eval_path(l, &(t * &two))
                } else {
                    self.eval_path(r, &(t * &two - rational::one()))
                }
            }
            PathExpr::Repar { path, phi } => self.eval_path(path, &phi.eval(t)?),
        }
    }

    /// All chained cell words from `from` to `to`, in lexicographic order of
    /// cell ids. Unbounded enumeration is refused on complexes with loops.
    pub fn enumerate_carriers(
        &self,
        from: &str,
        to: &str,
        max_len: Option<usize>,
    ) -> Result<Vec<Vec<String>>, ComplexError> {
        for s in [from, to] {
            if !self.has_state(s) {
                return Err(ComplexError::UnknownState(s.to_string()));
            }
        }
        let cap = match max_len {
            Some(n) => n,
            None if self.loop_free => self.desc.states.len(),
            None => {
                return Err(ComplexError::UnboundedEnumeration {
                    from: from.into(),
                    to: to.into(),
                })
            }
        };
        let mut sorted: Vec<&CellInfo> = self.cells.iter().collect();
        sorted.sort_by(|a, b| a.id.cmp(&b.id));
        let mut out = Vec::new();
        let mut word = Vec::new();
        self.extend_words(&sorted, from, to, cap, &mut word, &mut out);
        out.sort();
        Ok(out)
    }

    fn extend_words(
        &self,
        sorted: &[&CellInfo],
        at: &str,
        to: &str,
        cap: usize,
        word: &mut Vec<String>,
        out: &mut Vec<Vec<String>>,
    ) {
        if !word.is_empty() && at == to {
            out.push(word.clone());
        }
        if word.len() == cap {
            return;
        }
        for c in sorted.iter().filter(|c| c.from == at) {
            word.push(c.id.clone());
            self.extend_words(sorted, &c.to, to, cap, word, out);
            word.pop();
        }
    }

    /// Checks that a deserialized normal path lives in this complex: known
    /// cells, interior points, unit-target chis and chained endpoints.
    pub fn check_path(&self, p: &NormalPath) -> Result<(), ComplexError> {
        let mut at = p.from.as_str();
        for s in &p.segs {
            let c = self.require(&s.cell)?;
            self.check_point(c, &s.z)?;
            if !rational::strictly_inside_unit_ball(&s.z) {
                return Err(ComplexError::PointOutsideDisk(c.id.clone()));
            }
            if c.from != at {
                return Err(ComplexError::EndpointMismatch {
                    left: at.to_string(),
                    right: c.from.clone(),
                });
            }
            at = &c.to;
        }
        if at != p.to {
            return Err(ComplexError::EndpointMismatch {
                left: at.to_string(),
                right: p.to.clone(),
            });
        }
        Ok(())
    }

    /// Every chained word of length `1..=cap` starting at `from`, paired with
    /// its end state, in lexicographic order.
    pub fn words_from(&self, from: &str, cap: usize) -> Vec<(Vec<String>, String)> {
        let mut out = Vec::new();
        let mut word = Vec::new();
        self.walk(from, cap, &mut word, &mut out);
        out.sort();
        out
    }

    fn walk(&self, at: &str, cap: usize, word: &mut Vec<String>, out: &mut Vec<(Vec<String>, String)>) {
        if word.len() == cap {
            return;
        }
        for c in self.cells.iter().filter(|c| c.from == at) {
            word.push(c.id.clone());
            out.push((word.clone(), c.to.clone()));
            self.walk(&c.to, cap, word, out);
            word.pop();
        }
    }

    /// Canonical representative of a carrier word: centered points, each
    /// segment of length `1/k` at constant speed, total length 1.
    pub fn canonical_path(&self, word: &[String]) -> Result<NormalPath, ComplexError> {
        let k = word.len() as i64;
        let len = PosLen::new(rational::q(1, k.max(1)))?;
        let mut acc: Option<NormalPath> = None;
        for id in word {
            let c = self.require(id)?;
            let seg = self.segment_path(id, vec![rational::zero(); c.dim as usize], PLHomeo::mu(len.clone()))?;
            acc = Some(match acc {
                None => seg,
                Some(p) => p.concat(&seg)?,
            });
        }
        acc.ok_or_else(|| ComplexError::UnknownCell(String::new()))
    }
}
