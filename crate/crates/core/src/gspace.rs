//! Free 𝒢-spaces on finite labeled bases and elements of their tensor
//! products.
//!
//! `FreeGSpace { length: ℓ, basis: U }` presents the 𝒢-space whose value at
//! `ℓ′` is `𝒢(ℓ′,ℓ) × U`. An element of `F₁ ⊗ … ⊗ Fₙ` at length `L` is a raw
//! triple `(ψ, (u₁,θ₁), …, (uₙ,θₙ))` with `ψ ∈ 𝒢(L, Σ srcθᵢ)` and
//! `θᵢ ∈ 𝒢(src θᵢ, ℓᵢ)`; [`TensorElem::normalize`] pushes `ψ` into the twists.

use serde::{Deserialize, Serialize};

use crate::reparam::{PLHomeo, PosLen, ReparamError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GSpaceError {
    #[error("duplicate basis label {0:?}")]
    DuplicateLabel(String),
    #[error("outer map ends at {outer}, factor lengths sum to {parts}")]
    LengthChainMismatch { outer: String, parts: String },
    #[error("tensor element needs at least one factor")]
    NoFactors,
    #[error("factor {index}: {detail}")]
    FactorMismatch { index: usize, detail: String },
    #[error(transparent)]
    Reparam(#[from] ReparamError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "FreeRepr", into = "FreeRepr")]
pub struct FreeGSpace {
    length: PosLen,
    basis: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct FreeRepr {
    free: FreeBody,
}

#[derive(Serialize, Deserialize)]
struct FreeBody {
    len: PosLen,
    basis: Vec<String>,
}

impl TryFrom<FreeRepr> for FreeGSpace {
    type Error = GSpaceError;
    fn try_from(r: FreeRepr) -> Result<Self, GSpaceError> {
        FreeGSpace::new(r.free.len, r.free.basis)
    }
}

impl From<FreeGSpace> for FreeRepr {
    fn from(f: FreeGSpace) -> Self {
        FreeRepr {
            free: FreeBody {
                len: f.length,
                basis: f.basis,
            },
        }
    }
}

impl FreeGSpace {
    pub fn new(length: PosLen, basis: Vec<String>) -> Result<Self, GSpaceError> {
        let mut seen = std::collections::BTreeSet::new();
        for b in &basis {
            if !seen.insert(b.as_str()) {
                return Err(GSpaceError::DuplicateLabel(b.clone()));
            }
        }
        Ok(FreeGSpace { length, basis })
    }

    pub fn length(&self) -> &PosLen {
        &self.length
    }

    pub fn basis(&self) -> &[String] {
        &self.basis
    }

    pub fn contains(&self, label: &str) -> bool {
        self.basis.iter().any(|b| b == label)
    }

    /// `𝔽_{ℓ₁}U₁ ⊗ 𝔽_{ℓ₂}U₂ ≅ 𝔽_{ℓ₁+ℓ₂}(U₁×U₂)`, with pair labels `"(a,b)"`
    /// listed in `a`-major order.
    pub fn tensor(&self, other: &FreeGSpace) -> FreeGSpace {
        let basis = self
            .basis
            .iter()
            .flat_map(|a| other.basis.iter().map(move |b| pair_label(a, b)))
            .collect();
        FreeGSpace {
            length: self.length.add(&other.length),
            basis,
        }
    }
}

pub fn pair_label(a: &str, b: &str) -> String {
    format!("({a},{b})")
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Part {
    pub label: String,
    pub twist: PLHomeo,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ElemRepr", into = "ElemRepr")]
pub struct TensorElem {
    outer: PLHomeo,
    parts: Vec<Part>,
}

#[derive(Serialize, Deserialize)]
struct ElemRepr {
    outer: PLHomeo,
    parts: Vec<Part>,
}

impl TryFrom<ElemRepr> for TensorElem {
    type Error = GSpaceError;
    fn try_from(r: ElemRepr) -> Result<Self, GSpaceError> {
        TensorElem::new(r.outer, r.parts)
    }
}

impl From<TensorElem> for ElemRepr {
    fn from(e: TensorElem) -> Self {
        ElemRepr {
            outer: e.outer,
            parts: e.parts,
        }
    }
}

impl TensorElem {
    /// Stores a raw representative; the outer map must land on the sum of
    /// the twist source lengths.
    pub fn new(outer: PLHomeo, parts: Vec<Part>) -> Result<Self, GSpaceError> {
        let lens: Vec<PosLen> = parts.iter().map(|p| p.twist.src_len().clone()).collect();
        let total = PosLen::sum(&lens).ok_or(GSpaceError::NoFactors)?;
        if total != *outer.dst_len() {
            return Err(GSpaceError::LengthChainMismatch {
                outer: outer.dst_len().to_string(),
                parts: total.to_string(),
            });
        }
        Ok(TensorElem { outer, parts })
    }

    pub fn outer(&self) -> &PLHomeo {
        &self.outer
    }

    pub fn parts(&self) -> &[Part] {
        &self.parts
    }

    pub fn total_len(&self) -> &PosLen {
        self.outer.src_len()
    }

    pub fn is_canonical(&self) -> bool {
        self.outer.is_identity()
    }

    /// Absorbs the outer map into the twists: `ψ` is split at the preimages
    /// of the factor partial sums and each piece is precomposed onto its twist.
    pub fn normalize(&self) -> TensorElem {
        let lens: Vec<PosLen> = self.parts.iter().map(|p| p.twist.src_len().clone()).collect();
        let blocks = self
            .outer
            .preimage_blocks(&lens)
            .expect("lengths chain by construction");
        let pieces = self.outer.decompose(&blocks).expect("blocks sum to the source");
        let parts = self
            .parts
            .iter()
            .zip(pieces)
            .map(|(p, psi)| Part {
                label: p.label.clone(),
                twist: psi.compose(&p.twist).expect("piece lands on the twist source"),
            })
            .collect();
        TensorElem {
            outer: PLHomeo::identity(self.outer.src_len().clone()),
            parts,
        }
    }

    pub fn equivalent(&self, other: &TensorElem) -> bool {
        self.normalize() == other.normalize()
    }

    /// Checks labels and twist targets against the factor spaces.
    pub fn check_against(&self, spaces: &[FreeGSpace]) -> Result<(), GSpaceError> {
        if spaces.len() != self.parts.len() {
            return Err(GSpaceError::FactorMismatch {
                index: spaces.len().min(self.parts.len()),
                detail: format!("{} factors for {} spaces", self.parts.len(), spaces.len()),
            });
        }
        for (index, (p, f)) in self.parts.iter().zip(spaces).enumerate() {
            if !f.contains(&p.label) {
                return Err(GSpaceError::FactorMismatch {
                    index,
                    detail: format!("label {:?} not in basis", p.label),
                });
            }
            if p.twist.dst_len() != f.length() {
                return Err(GSpaceError::FactorMismatch {
                    index,
                    detail: format!("twist ends at {}, space length {}", p.twist.dst_len(), f.length()),
                });
            }
        }
        Ok(())
    }
}
