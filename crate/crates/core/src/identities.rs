//! Random instances of the Moore-composition identities: pairs of path
//! expressions that must share a normal form.
//!
//! Juxtaposition `γφ` means `γ ∘ φ`, written `Repar(γ, φ)` here; `γμ_ℓ` is a
//! unit-length path slowed down to length `ℓ`.

use rand::Rng;

use crate::complex::{Complex, PathExpr};
use crate::rational::{self, Rational};
use crate::reparam::{PLHomeo, PosLen};
use crate::sample;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Identity {
    /// `((γ₁μ_{ℓ′₁})*…*(γₙμ_{ℓ′ₙ}))(φ₁⊗…⊗φₙ) = (γ₁μ_{ℓ′₁}φ₁)*…*(γₙμ_{ℓ′ₙ}φₙ)`
    BlockReparam,
    /// `((γ₁μ_{ℓ₁})*…*(γₙμ_{ℓₙ}))μ_ℓ = (γ₁μ_{ℓ₁ℓ})*…*(γₙμ_{ℓₙℓ})`, `Σℓᵢ = 1`
    Scaling,
    /// `γ₁ *_N … *_N γₙ = (γ₁μ_{w₁})*…*(γₙμ_{wₙ})` with dyadic weights
    NormalizedExpansion,
    /// the same, reparametrized by `φ ∈ 𝒢(1,1)` on both sides
    NormalizedReparam,
    /// `((γ₁μ_{ℓ₁})*…*(γₙμ_{ℓₙ}))φ = ⋆_N (γᵢμ_{ℓᵢ}φᵢμ⁻¹_{wᵢ})`
    MooreToNormalized,
    /// `((γ₁μ_{ℓ₁})*(γ₂μ_{ℓ₂}))μ⁻¹_{ℓ₁+ℓ₂}` rewritten through `*_N`
    VariableLength,
    /// `(γ₁*γ₂)*γ₃ = γ₁*(γ₂*γ₃)`
    Associativity,
    /// a boundary step equals its attaching path reparametrized
    BoundaryStep,
}

pub const ALL: [Identity; 8] = [
    Identity::BlockReparam,
    Identity::Scaling,
    Identity::NormalizedExpansion,
    Identity::NormalizedReparam,
    Identity::MooreToNormalized,
    Identity::VariableLength,
    Identity::Associativity,
    Identity::BoundaryStep,
];

/// Weights `(1/2ⁿ⁻¹, 1/2ⁿ⁻¹, 1/2ⁿ⁻², …, 1/2)` of a left-nested `*_N` of `n` paths.
pub fn dyadic_weights(n: usize) -> Vec<PosLen> {
    (1..=n)
        .map(|i| {
            let e = if i == 1 { n - 1 } else { n + 1 - i };
            PosLen::new(rational::q(1, 1i64 << e)).expect("positive")
        })
        .collect()
}

fn pl<R: Rng + ?Sized>(rng: &mut R, src: &PosLen, dst: &PosLen) -> PLHomeo {
    sample::pl_between(rng, src, dst, 4)
}

fn slow(g: PathExpr, len: &PosLen) -> PathExpr {
    PathExpr::repar(g, PLHomeo::mu(len.clone()))
}

/// A random expression starting at `from`, with its end state; `None` when
/// no cell leaves `from`.
pub fn random_expr<R: Rng + ?Sized>(rng: &mut R, x: &Complex, from: &str, depth: u32) -> Option<(PathExpr, String)> {
    let choice = if depth == 0 { 0 } else { rng.gen_range(0..4) };
    match choice {
        1 => {
            let (l, mid) = random_expr(rng, x, from, depth - 1)?;
            let (r, end) = random_expr(rng, x, &mid, depth - 1)?;
            Some((PathExpr::moore(l, r), end))
        }
        2 => {
            let (l, mid) = random_unit(rng, x, from, depth - 1)?;
            let (r, end) = random_unit(rng, x, &mid, depth - 1)?;
            Some((PathExpr::normcomp(l, r), end))
        }
        3 => {
            let (p, end) = random_expr(rng, x, from, depth - 1)?;
            let len = PosLen::new(p.length()).expect("positive length");
            let src = sample::len(rng);
            let phi = pl(rng, &src, &len);
            Some((PathExpr::repar(p, phi), end))
        }
        _ => {
            let out: Vec<_> = x.cells().filter(|c| c.from == from).collect();
            if out.is_empty() {
                return None;
            }
            let c = out[rng.gen_range(0..out.len())];
            let z = if c.dim == 1 && rng.gen_bool(0.3) {
                vec![if rng.gen_bool(0.5) {
                    rational::int(1)
                } else {
                    rational::int(-1)
                }]
            } else {
                sample::interior_point(rng, c.dim as usize)
            };
            let src = sample::len(rng);
            let chi = pl(rng, &src, &PosLen::one());
            Some((PathExpr::step(c.id, z, chi), c.to.to_string()))
        }
    }
}

/// A random expression of length exactly 1.
pub fn random_unit<R: Rng + ?Sized>(rng: &mut R, x: &Complex, from: &str, depth: u32) -> Option<(PathExpr, String)> {
    let (p, end) = random_expr(rng, x, from, depth)?;
    let len = PosLen::new(p.length()).expect("positive length");
    if len == PosLen::one() {
        return Some((p, end));
    }
    let phi = pl(rng, &PosLen::one(), &len);
    Some((PathExpr::repar(p, phi), end))
}

/// `n` chained unit-length expressions starting at a random state.
pub fn random_chain<R: Rng + ?Sized>(rng: &mut R, x: &Complex, n: usize, depth: u32) -> Option<Vec<PathExpr>> {
    let states = x.states();
    let mut at = states[rng.gen_range(0..states.len())].clone();
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let (g, next) = random_unit(rng, x, &at, depth)?;
        out.push(g);
        at = next;
    }
    Some(out)
}

fn moore_all(items: Vec<PathExpr>) -> PathExpr {
    PathExpr::moore_all(items).expect("nonempty")
}

fn normcomp_all(items: Vec<PathExpr>) -> PathExpr {
    PathExpr::normcomp_all(items).expect("nonempty")
}

/// A random instance `(lhs, rhs)` of `id` on `x`, with `n` factors where the
/// identity takes a variable number. `None` when `x` cannot host it.
pub fn instance<R: Rng + ?Sized>(rng: &mut R, x: &Complex, id: Identity, n: usize) -> Option<(PathExpr, PathExpr)> {
    let depth = rng.gen_range(0..=2);
    match id {
        Identity::BlockReparam => {
            let g = random_chain(rng, x, n, depth)?;
            let mut inner = Vec::new();
            let mut phis = Vec::new();
            let mut rhs = Vec::new();
            for gi in g {
                let target = sample::len(rng);
                let src = sample::len(rng);
                let phi = pl(rng, &src, &target);
                inner.push(slow(gi.clone(), &target));
                rhs.push(PathExpr::repar(slow(gi, &target), phi.clone()));
                phis.push(phi);
            }
            let lhs = PathExpr::repar(moore_all(inner), PLHomeo::tensor(&phis).expect("nonempty"));
            Some((lhs, moore_all(rhs)))
        }
        Identity::Scaling => {
            let g = random_chain(rng, x, n, depth)?;
            let lens = sample::split(rng, &PosLen::one(), n);
            let l = sample::len(rng);
            let lhs = PathExpr::repar(
                moore_all(g.iter().zip(&lens).map(|(gi, li)| slow(gi.clone(), li)).collect()),
                PLHomeo::mu(l.clone()),
            );
            let rhs = moore_all(g.into_iter().zip(&lens).map(|(gi, li)| slow(gi, &li.mul(&l))).collect());
            Some((lhs, rhs))
        }
        Identity::NormalizedExpansion => {
            let g = random_chain(rng, x, n.max(2), depth)?;
            let w = dyadic_weights(g.len());
            let rhs = moore_all(g.iter().zip(&w).map(|(gi, wi)| slow(gi.clone(), wi)).collect());
            Some((normcomp_all(g), rhs))
        }
        Identity::NormalizedReparam => {
            let g = random_chain(rng, x, n, depth)?;
            let w = dyadic_weights(g.len());
            let phi = pl(rng, &PosLen::one(), &PosLen::one());
            let blocks = phi.preimage_blocks(&w).expect("weights sum to 1");
            let parts = phi.decompose(&blocks).expect("blocks sum to 1");
            let rhs = moore_all(
                g.iter()
                    .zip(w.iter().zip(parts))
                    .map(|(gi, (wi, pi))| PathExpr::repar(slow(gi.clone(), wi), pi))
                    .collect(),
            );
            let lhs = if g.len() == 1 {
                PathExpr::repar(g[0].clone(), phi)
            } else {
                PathExpr::repar(normcomp_all(g), phi)
            };
            Some((lhs, rhs))
        }
        Identity::MooreToNormalized => {
            let g = random_chain(rng, x, n.max(2), depth)?;
            let w = dyadic_weights(g.len());
            let lens = sample::split(rng, &PosLen::one(), g.len());
            let phis: Vec<PLHomeo> = w.iter().zip(&lens).map(|(wi, li)| pl(rng, wi, li)).collect();
            let phi = PLHomeo::tensor(&phis).expect("nonempty");
            let lhs = PathExpr::repar(
                moore_all(g.iter().zip(&lens).map(|(gi, li)| slow(gi.clone(), li)).collect()),
                phi,
            );
            let rhs = normcomp_all(
                g.into_iter()
                    .zip(w.iter().zip(lens.iter().zip(&phis)))
                    .map(|(gi, (wi, (li, pi)))| {
                        let t = PLHomeo::mu(wi.clone())
                            .inverse()
                            .compose(pi)
                            .and_then(|a| a.compose(&PLHomeo::mu(li.clone())))
                            .expect("lengths chain");
                        PathExpr::repar(gi, t)
                    })
                    .collect(),
            );
            Some((lhs, rhs))
        }
        Identity::VariableLength => {
            let g = random_chain(rng, x, 2, depth)?;
            let (l1, l2) = (sample::len(rng), sample::len(rng));
            let half = PosLen::new(rational::q(1, 2)).expect("positive");
            let (p1, p2) = (pl(rng, &half, &l1), pl(rng, &half, &l2));
            let total = l1.add(&l2);
            let lhs = PathExpr::repar(
                PathExpr::moore(slow(g[0].clone(), &l1), slow(g[1].clone(), &l2)),
                PLHomeo::mu(total.clone()).inverse(),
            );
            let inner = |gi: PathExpr, p: &PLHomeo, l: &PosLen| {
                let t = PLHomeo::mu(half.clone())
                    .inverse()
                    .compose(p)
                    .and_then(|a| a.compose(&PLHomeo::mu(l.clone())))
                    .expect("lengths chain");
                PathExpr::repar(gi, t)
            };
            let outer = PLHomeo::mu(total)
                .inverse()
                .compose(&PLHomeo::tensor(&[p1.clone(), p2.clone()]).expect("nonempty").inverse())
                .expect("lengths chain");
            let rhs = PathExpr::repar(
                PathExpr::normcomp(inner(g[0].clone(), &p1, &l1), inner(g[1].clone(), &p2, &l2)),
                outer,
            );
            Some((lhs, rhs))
        }
        Identity::Associativity => {
            let states = x.states();
            let mut at = states[rng.gen_range(0..states.len())].clone();
            let mut g = Vec::new();
            for _ in 0..3 {
                let (p, next) = random_expr(rng, x, &at, depth)?;
                g.push(p);
                at = next;
            }
            let lhs = PathExpr::moore(PathExpr::moore(g[0].clone(), g[1].clone()), g[2].clone());
            let rhs = PathExpr::moore(g[0].clone(), PathExpr::moore(g[1].clone(), g[2].clone()));
            Some((lhs, rhs))
        }
        Identity::BoundaryStep => {
            let cells: Vec<_> = x.cells().filter(|c| c.dim == 1).collect();
            if cells.is_empty() {
                return None;
            }
            let c = cells[rng.gen_range(0..cells.len())];
            let desc = &x.desc().cells[c.position];
            let minus = rng.gen_bool(0.5);
            let side = if minus {
                &desc.boundary_minus
            } else {
                &desc.boundary_plus
            }
            .clone()?;
            let z: Vec<Rational> = vec![rational::int(if minus { -1 } else { 1 })];
            let src = sample::len(rng);
            let chi = pl(rng, &src, &PosLen::one());
            let side_len = PosLen::new(side.length()).expect("positive");
            let phi = chi.compose(&PLHomeo::mu(side_len).inverse()).expect("lengths chain");
            Some((PathExpr::step(c.id, z, chi), PathExpr::repar(side, phi)))
        }
    }
}
