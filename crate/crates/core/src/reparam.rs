//! The reparametrization category: positive lengths and piecewise-linear
//! increasing bijections between closed intervals.
//!
//! A [`PLHomeo`] from `ℓ` to `ℓ′` is a strictly increasing PL bijection
//! `[0,ℓ] → [0,ℓ′]`, stored as its list of breakpoints. Composition is
//! written in diagrammatic order: `compose(φ, ψ)` is `t ↦ ψ(φ(t))`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReparamError {
    #[error("length must be positive, got {0}")]
    NonPositiveLength(String),
    #[error("breakpoints are not strictly increasing at index {0}")]
    NonMonotonic(usize),
    #[error("breakpoints must start at (0,0) and end at (src,dst)")]
    BadEndpoints,
    #[error("{t} is outside the domain [0,{len}]")]
    OutOfDomain { t: String, len: String },
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: String, right: String },
    #[error("block lengths sum to {got}, expected {expected}")]
    LengthSumMismatch { got: String, expected: String },
    #[error("tensor of an empty family")]
    EmptyTensor,
    #[error(transparent)]
    Parse(#[from] rational::ParseRationalError),
}

/// A strictly positive rational length.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PosLen(Rational);

impl PosLen {
    pub fn new(value: Rational) -> Result<Self, ReparamError> {
        if rational::is_positive(&value) {
            Ok(PosLen(value))
        } else {
            Err(ReparamError::NonPositiveLength(rational::format(&value)))
        }
    }

    pub fn one() -> Self {
        PosLen(rational::one())
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }

    pub fn into_inner(self) -> Rational {
        self.0
    }

    /// Sum of a nonempty list of lengths.
    pub fn sum<'a>(lens: impl IntoIterator<Item = &'a PosLen>) -> Option<PosLen> {
        let mut it = lens.into_iter();
        let first = it.next()?.0.clone();
        Some(PosLen(it.fold(first, |acc, l| acc + &l.0)))
    }

    pub fn add(&self, other: &PosLen) -> PosLen {
        PosLen(&self.0 + &other.0)
    }

    pub fn mul(&self, other: &PosLen) -> PosLen {
        PosLen(&self.0 * &other.0)
    }
}

impl fmt::Display for PosLen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Serialize for PosLen {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&rational::format(&self.0))
    }
}

impl<'de> Deserialize<'de> for PosLen {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        let r = rational::parse(&s).map_err(serde::de::Error::custom)?;
        PosLen::new(r).map_err(serde::de::Error::custom)
    }
}

/// An exact PL homeomorphism `[0,src] ≅⁺ [0,dst]` in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PLHomeo {
    src: PosLen,
    dst: PosLen,
    breaks: Vec<(Rational, Rational)>,
}

impl PLHomeo {
    /// Validates and canonicalizes a breakpoint list.
    pub fn new(src: PosLen, dst: PosLen, breaks: Vec<(Rational, Rational)>) -> Result<Self, ReparamError> {
        if breaks.len() < 2 {
            return Err(ReparamError::BadEndpoints);
        }
        let (x0, y0) = &breaks[0];
        let (xn, yn) = &breaks[breaks.len() - 1];
        if *x0 != rational::zero() || *y0 != rational::zero() || xn != src.value() || yn != dst.value() {
            return Err(ReparamError::BadEndpoints);
        }
        for (i, w) in breaks.windows(2).enumerate() {
            if w[1].0 <= w[0].0 || w[1].1 <= w[0].1 {
                return Err(ReparamError::NonMonotonic(i + 1));
            }
        }
        Ok(Self::from_sorted(src, dst, breaks))
    }

    // Breaks are known to be valid; only drop collinear interior points.
    fn from_sorted(src: PosLen, dst: PosLen, breaks: Vec<(Rational, Rational)>) -> Self {
        let mut out: Vec<(Rational, Rational)> = Vec::with_capacity(breaks.len());
        for p in breaks {
            while out.len() >= 2 && collinear(&out[out.len() - 2], &out[out.len() - 1], &p) {
                out.pop();
            }
            out.push(p);
        }
        PLHomeo { src, dst, breaks: out }
    }

    /// The linear map `[0,src] → [0,dst]`.
    pub fn linear(src: PosLen, dst: PosLen) -> Self {
        let breaks = vec![
            (rational::zero(), rational::zero()),
            (src.value().clone(), dst.value().clone()),
        ];
        PLHomeo { src, dst, breaks }
    }

    pub fn identity(len: PosLen) -> Self {
        Self::linear(len.clone(), len)
    }

    /// `μ_ℓ : [0,ℓ] → [0,1]`, `t ↦ t/ℓ`.
    pub fn mu(len: PosLen) -> Self {
        Self::linear(len, PosLen::one())
    }

    pub fn src_len(&self) -> &PosLen {
        &self.src
    }

    pub fn dst_len(&self) -> &PosLen {
        &self.dst
    }

    pub fn breaks(&self) -> &[(Rational, Rational)] {
        &self.breaks
    }

    /// Number of linear pieces.
    pub fn pieces(&self) -> usize {
        self.breaks.len() - 1
    }

    pub fn is_identity(&self) -> bool {
        self.src == self.dst && self.breaks.len() == 2
    }

    pub fn eval(&self, t: &Rational) -> Result<Rational, ReparamError> {
        if *t < rational::zero() || t > self.src.value() {
            return Err(ReparamError::OutOfDomain {
                t: rational::format(t),
                len: self.src.to_string(),
            });
        }
        Ok(interpolate(&self.breaks, t, false))
    }

    /// Evaluates the inverse map at `y ∈ [0,dst]`.
    pub fn eval_inverse(&self, y: &Rational) -> Result<Rational, ReparamError> {
        if *y < rational::zero() || y > self.dst.value() {
            return Err(ReparamError::OutOfDomain {
                t: rational::format(y),
                len: self.dst.to_string(),
            });
        }
        Ok(interpolate(&self.breaks, y, true))
    }

    /// `compose(φ, ψ) = ψ ∘ φ`. Requires `dst(φ) = src(ψ)`.
    pub fn compose(&self, next: &PLHomeo) -> Result<PLHomeo, ReparamError> {
        if self.dst != next.src {
            return Err(ReparamError::LengthMismatch {
                left: self.dst.to_string(),
                right: next.src.to_string(),
            });
        }
        let mut xs: Vec<Rational> = self.breaks.iter().map(|(x, _)| x.clone()).collect();
        xs.extend(next.breaks.iter().map(|(y, _)| interpolate(&self.breaks, y, true)));
        xs.sort();
        xs.dedup();
        let breaks = xs
            .into_iter()
            .map(|x| {
                let mid = interpolate(&self.breaks, &x, false);
                let y = interpolate(&next.breaks, &mid, false);
                (x, y)
            })
            .collect();
        Ok(Self::from_sorted(self.src.clone(), next.dst.clone(), breaks))
    }

    pub fn inverse(&self) -> PLHomeo {
        PLHomeo {
            src: self.dst.clone(),
            dst: self.src.clone(),
            breaks: self.breaks.iter().map(|(x, y)| (y.clone(), x.clone())).collect(),
        }
    }

    /// Block sum `φ₁ ⊗ … ⊗ φₙ`: each map runs on its own block, shifted by
    /// the partial sums of the preceding source and target lengths.
    pub fn tensor(maps: &[PLHomeo]) -> Result<PLHomeo, ReparamError> {
        let first = maps.first().ok_or(ReparamError::EmptyTensor)?;
        let mut src = first.src.value().clone();
        let mut dst = first.dst.value().clone();
        let mut breaks = first.breaks.clone();
        for m in &maps[1..] {
            for (x, y) in m.breaks.iter().skip(1) {
                breaks.push((x + &src, y + &dst));
            }
            src += m.src.value();
            dst += m.dst.value();
        }
        Ok(Self::from_sorted(PosLen(src), PosLen(dst), breaks))
    }

    /// The unique decomposition `φ = φ₁ ⊗ … ⊗ φₙ` with `src(φᵢ) = lengths[i]`.
    pub fn decompose(&self, lengths: &[PosLen]) -> Result<Vec<PLHomeo>, ReparamError> {
        let total = PosLen::sum(lengths).ok_or(ReparamError::EmptyTensor)?;
        if total != self.src {
            return Err(ReparamError::LengthSumMismatch {
                got: total.to_string(),
                expected: self.src.to_string(),
            });
        }
        let mut out = Vec::with_capacity(lengths.len());
        let mut x0 = rational::zero();
        let mut y0 = rational::zero();
        let mut k = 0; // first break with x > x0
        for len in lengths {
            let x1 = &x0 + len.value();
            let y1 = interpolate(&self.breaks, &x1, false);
            let mut piece = vec![(rational::zero(), rational::zero())];
            while k < self.breaks.len() && self.breaks[k].0 <= x0 {
                k += 1;
            }
            while k < self.breaks.len() && self.breaks[k].0 < x1 {
                let (bx, by) = &self.breaks[k];
                piece.push((bx - &x0, by - &y0));
                k += 1;
            }
            piece.push((len.value().clone(), &y1 - &y0));
            let dst = PosLen(&y1 - &y0);
            out.push(Self::from_sorted(len.clone(), dst, piece));
            x0 = x1;
            y0 = y1;
        }
        Ok(out)
    }

    /// Source-side block lengths `ℓ″ᵢ` such that `φ` maps the partial sums of
    /// `ℓ″` onto the partial sums of `targets`.
    pub fn preimage_blocks(&self, targets: &[PosLen]) -> Result<Vec<PosLen>, ReparamError> {
        let total = PosLen::sum(targets).ok_or(ReparamError::EmptyTensor)?;
        if total != self.dst {
            return Err(ReparamError::LengthSumMismatch {
                got: total.to_string(),
                expected: self.dst.to_string(),
            });
        }
        let mut acc = rational::zero();
        let mut prev = rational::zero();
        let mut out = Vec::with_capacity(targets.len());
        for t in targets {
            acc += t.value();
            let x = interpolate(&self.breaks, &acc, true);
            out.push(PosLen(&x - &prev));
            prev = x;
        }
        Ok(out)
    }
}

fn collinear(a: &(Rational, Rational), b: &(Rational, Rational), c: &(Rational, Rational)) -> bool {
    (&b.1 - &a.1) * (&c.0 - &b.0) == (&c.1 - &b.1) * (&b.0 - &a.0)
}

// Linear interpolation over a strictly increasing break list; `inverse`
// swaps the roles of the coordinates. Caller guarantees the argument is in range.
fn interpolate(breaks: &[(Rational, Rational)], t: &Rational, inverse: bool) -> Rational {
    let key = |p: &(Rational, Rational)| if inverse { p.1.clone() } else { p.0.clone() };
    let val = |p: &(Rational, Rational)| if inverse { p.0.clone() } else { p.1.clone() };
    let idx = breaks.partition_point(|p| key(p) < *t);
    if idx < breaks.len() && key(&breaks[idx]) == *t {
        return val(&breaks[idx]);
    }
    let (a, b) = (&breaks[idx - 1], &breaks[idx]);
    let (ka, kb, va, vb) = (key(a), key(b), val(a), val(b));
    &va + (&vb - &va) * (t - &ka) / (&kb - &ka)
}

#[derive(Serialize, Deserialize)]
struct PLHomeoRepr {
    src: String,
    dst: String,
    breaks: Vec<[String; 2]>,
}

impl Serialize for PLHomeo {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PLHomeoRepr {
            src: self.src.to_string(),
            dst: self.dst.to_string(),
            breaks: self
                .breaks
                .iter()
                .map(|(x, y)| [rational::format(x), rational::format(y)])
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PLHomeo {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = PLHomeoRepr::deserialize(d)?;
        let conv = || -> Result<PLHomeo, ReparamError> {
            let src = PosLen::new(rational::parse(&repr.src)?)?;
            let dst = PosLen::new(rational::parse(&repr.dst)?)?;
            let breaks = repr
                .breaks
                .iter()
                .map(|[x, y]| Ok((rational::parse(x)?, rational::parse(y)?)))
                .collect::<Result<Vec<_>, ReparamError>>()?;
            PLHomeo::new(src, dst, breaks)
        };
        conv().map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for PLHomeo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[0,{}]→[0,{}]", self.src, self.dst)?;
        for (x, y) in &self.breaks {
            write!(f, " ({x},{y})")?;
        }
        Ok(())
    }
}
