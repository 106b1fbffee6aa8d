//! Random generators for lengths, PL maps and points, used by property
//! tests, the acceptance suite and `selftest`.

use num_bigint::BigInt;
use rand::seq::index::sample;
use rand::Rng;

use crate::rational::{self, q, Rational};
use crate::reparam::{PLHomeo, PosLen};

/// A length `k/d` with `d ≤ 6` and value in `(0, 3]`.
pub fn len<R: Rng + ?Sized>(rng: &mut R) -> PosLen {
    let d = rng.gen_range(1..=6);
    let k = rng.gen_range(1..=3 * d);
    PosLen::new(q(k, d)).expect("positive")
}

// `count` distinct sorted fractions strictly inside (0, total).
fn interior_cuts<R: Rng + ?Sized>(rng: &mut R, total: &Rational, count: usize) -> Vec<Rational> {
    if count == 0 {
        return Vec::new();
    }
    let den = rng.gen_range(count + 1..=count + 12);
    let mut idx: Vec<usize> = sample(rng, den - 1, count).into_iter().map(|i| i + 1).collect();
    idx.sort_unstable();
    idx.into_iter()
        .map(|i| total * Rational::new(BigInt::from(i), BigInt::from(den)))
        .collect()
}

/// A random PL homeomorphism `[0,src] → [0,dst]` with at most `max_pieces` pieces.
pub fn pl_between<R: Rng + ?Sized>(rng: &mut R, src: &PosLen, dst: &PosLen, max_pieces: usize) -> PLHomeo {
    let pieces = rng.gen_range(1..=max_pieces.max(1));
    let xs = interior_cuts(rng, src.value(), pieces - 1);
    let ys = interior_cuts(rng, dst.value(), pieces - 1);
    let mut breaks = vec![(rational::zero(), rational::zero())];
    breaks.extend(xs.into_iter().zip(ys));
    breaks.push((src.value().clone(), dst.value().clone()));
    PLHomeo::new(src.clone(), dst.clone(), breaks).expect("generated breaks are monotone")
}

/// A random PL homeomorphism with random lengths.
pub fn pl<R: Rng + ?Sized>(rng: &mut R, max_pieces: usize) -> PLHomeo {
    let src = len(rng);
    let dst = len(rng);
    pl_between(rng, &src, &dst, max_pieces)
}

/// A random PL self-map of `[0,1]` that is not the identity.
pub fn non_identity_unit<R: Rng + ?Sized>(rng: &mut R, max_pieces: usize) -> PLHomeo {
    loop {
        let phi = pl_between(rng, &PosLen::one(), &PosLen::one(), max_pieces.max(2));
        if !phi.is_identity() {
            return phi;
        }
    }
}

/// Splits `total` into `parts` random positive lengths.
pub fn split<R: Rng + ?Sized>(rng: &mut R, total: &PosLen, parts: usize) -> Vec<PosLen> {
    let cuts = interior_cuts(rng, total.value(), parts.saturating_sub(1));
    let mut out = Vec::with_capacity(parts);
    let mut prev = rational::zero();
    for c in cuts.into_iter().chain(std::iter::once(total.value().clone())) {
        out.push(PosLen::new(&c - &prev).expect("cuts increase"));
        prev = c;
    }
    out
}

/// A random rational point strictly inside the disk of dimension `dim`.
pub fn interior_point<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<Rational> {
    loop {
        let z: Vec<Rational> = (0..dim)
            .map(|_| {
                let d = rng.gen_range(1..=8);
                q(rng.gen_range(-d + 1..d), d)
            })
            .collect();
        if rational::strictly_inside_unit_ball(&z) {
            return z;
        }
    }
}

/// A random rational in `[0, bound]`.
pub fn time_in<R: Rng + ?Sized>(rng: &mut R, bound: &PosLen) -> Rational {
    let d: i64 = rng.gen_range(1..=24);
    bound.value() * q(rng.gen_range(0..=d), d)
}
