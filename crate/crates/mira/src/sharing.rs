//! Additive sharing over a 2^D hypercube of leaves, and (ℓ+1, N) Shamir
//! sharing with reconstruction and expansion.
//!
//! Shares are handled as flat F_q vectors (see [`PartyInput::flatten`]); both
//! schemes are F_q-linear, so sharing a tuple coordinate by coordinate is the
//! same as sharing its components.

use sha3::digest::XofReader;

use crate::error::{Error, Result};
use crate::galois::{BaseField, ExtElement, Fields, Sampler};
use crate::hash::{Role, Xof};
use crate::mpc::{inner, PartyInput, Shape};

/// Side (1 or 2) of leaf `i` in dimension `k`: bit k−1 of i−1, plus one.
pub fn side(i: usize, k: usize) -> usize {
    ((i - 1) >> (k - 1) & 1) + 1
}

/// Main shares (k, 1) and (k, 2) for each dimension k = 1..D, where
/// share (k, j) is the sum of the leaves on side j of dimension k.
pub fn hypercube_aggregate(f: &BaseField, leaves: &[Vec<u8>]) -> Vec<[Vec<u8>; 2]> {
    let n = leaves.len();
    assert!(n.is_power_of_two() && n >= 2, "hypercube needs 2^D leaves");
    let dims = n.trailing_zeros() as usize;
    let len = leaves[0].len();
    (1..=dims)
        .map(|k| {
            let mut main = [vec![0u8; len], vec![0u8; len]];
            for (idx, leaf) in leaves.iter().enumerate() {
                f.add_assign(&mut main[side(idx + 1, k) - 1], leaf);
            }
            main
        })
        .collect()
}

/// The explicit share of leaf N that makes the x, β and c shares sum to the secret.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Aux {
    pub x: Vec<u8>,
    pub beta: Vec<ExtElement>,
    pub c: ExtElement,
}

impl Aux {
    pub fn zero(shape: Shape) -> Self {
        Self {
            x: vec![0; shape.k],
            beta: vec![ExtElement::ZERO; shape.r],
            c: ExtElement::ZERO,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.x.iter().all(|&v| v == 0)
            && self.beta.iter().all(ExtElement::is_zero)
            && self.c.is_zero()
    }

    /// Completes the seed-derived part of leaf N.
    pub fn apply(&self, leaf: &mut PartyInput) {
        leaf.x.clone_from(&self.x);
        leaf.beta.clone_from(&self.beta);
        leaf.c = self.c;
    }
}

/// N additive shares of (x, β, a, c) with c = −⟨a, β⟩.
#[derive(Clone, Debug)]
pub struct AdditiveShareSet {
    /// Leaf i at index i − 1; leaf N already includes the aux values.
    pub leaves: Vec<PartyInput>,
    pub aux: Aux,
}

impl AdditiveShareSet {
    /// Σ over all leaves, i.e. the shared secret (x, β, a, c).
    pub fn secret(&self, f: &BaseField, shape: Shape) -> PartyInput {
        let mut acc = PartyInput::zero(shape);
        for leaf in &self.leaves {
            acc.add_assign(f, leaf);
        }
        acc
    }
}

/// Pseudorandom part of leaf `i` of `parties`: the full tuple for i < N, only
/// a for leaf N (its x, β and c come from [`Aux`]).
pub fn leaf_from_seed(
    fields: &Fields,
    shape: Shape,
    salt: &[u8],
    e: u32,
    i: usize,
    parties: usize,
    seed: &[u8],
) -> PartyInput {
    let mut s = Xof::new(Role::LeafPrg)
        .update(salt)
        .u32(e)
        .u32(i as u32)
        .update(seed)
        .sampler();
    let f = &fields.base;
    let a = s.ext_vec(f, shape.lift, shape.r);
    if i == parties {
        return PartyInput {
            a,
            ..PartyInput::zero(shape)
        };
    }
    let x = s.base_vec(f, shape.k);
    let beta = s.ext_vec(f, shape.m, shape.r);
    let c = s.ext(f, shape.lift);
    PartyInput { x, beta, a, c }
}

/// Shares (x, β) over the leaves derived from `seeds`, with a drawn from the
/// leaves and c = −⟨a, β⟩ fixed through leaf N.
pub fn additive_share(
    fields: &Fields,
    shape: Shape,
    x: &[u8],
    beta: &[ExtElement],
    salt: &[u8],
    e: u32,
    seeds: &[&[u8]],
) -> AdditiveShareSet {
    let f = &*fields.base;
    let lift = &*fields.lift;
    let n = seeds.len();
    let mut leaves: Vec<PartyInput> = seeds
        .iter()
        .enumerate()
        .map(|(idx, seed)| leaf_from_seed(fields, shape, salt, e, idx + 1, n, seed))
        .collect();
    let mut partial = PartyInput::zero(shape);
    for leaf in &leaves {
        partial.add_assign(f, leaf);
    }
    // partial.a is the full a; the other components miss leaf N
    let mut aux = Aux {
        x: x.to_vec(),
        beta: beta.to_vec(),
        c: lift.neg(&inner(fields, &partial.a, beta)),
    };
    f.sub_assign(&mut aux.x, &partial.x);
    for (b, p) in aux.beta.iter_mut().zip(&partial.beta) {
        f.sub_assign(&mut b.coeffs_mut()[..shape.m], &p.coeffs()[..shape.m]);
    }
    aux.c = lift.sub(&aux.c, &partial.c);
    aux.apply(&mut leaves[n - 1]);
    AdditiveShareSet { leaves, aux }
}

fn check_points(f: &BaseField, parties: usize) -> Result<()> {
    if parties >= f.order() as usize {
        return Err(Error::TooManyParties {
            parties,
            q: f.order(),
        });
    }
    Ok(())
}

/// Evaluation point of party i (1-based).
pub fn point(f: &BaseField, i: usize) -> u8 {
    f.from_index(i)
}

/// Shamir shares of a vector secret: coordinate j uses the polynomial
/// s_j + Σ_t r_{j,t} X^t, with r_{j,1..ℓ} drawn in order from `sampler`.
/// Share i (at index i − 1) is the evaluation at party i's point.
pub fn shamir_share<R: XofReader>(
    f: &BaseField,
    secret: &[u8],
    ell: usize,
    parties: usize,
    sampler: &mut Sampler<R>,
) -> Result<Vec<Vec<u8>>> {
    check_points(f, parties)?;
    if ell + 1 > parties {
        return Err(Error::InvalidParameters(format!(
            "({}, {parties}) sharing",
            ell + 1
        )));
    }
    let coeffs: Vec<Vec<u8>> = secret
        .iter()
        .map(|&s| {
            let mut c = Vec::with_capacity(ell + 1);
            c.push(s);
            c.extend(sampler.base_vec(f, ell));
            c
        })
        .collect();
    Ok((1..=parties)
        .map(|i| {
            let x = point(f, i);
            coeffs
                .iter()
                .map(|c| c.iter().rev().fold(0, |acc, &ci| f.add(f.mul(acc, x), ci)))
                .collect()
        })
        .collect())
}

/// Lagrange coefficients λ_j with P(target) = Σ λ_j P(points_j).
pub fn lagrange_coeffs(f: &BaseField, points: &[u8], target: u8) -> Result<Vec<u8>> {
    for (j, &p) in points.iter().enumerate() {
        if points[..j].contains(&p) {
            return Err(Error::DuplicatePoint(p));
        }
    }
    points
        .iter()
        .enumerate()
        .map(|(j, &pj)| {
            let (mut num, mut den) = (1u8, 1u8);
            for (t, &pt) in points.iter().enumerate() {
                if t != j {
                    num = f.mul(num, f.sub(target, pt));
                    den = f.mul(den, f.sub(pj, pt));
                }
            }
            Ok(f.mul(num, f.inv(den)?))
        })
        .collect()
}

/// Σ λ_j v_j over F_q vectors.
pub fn combine(f: &BaseField, coeffs: &[u8], vectors: &[&[u8]]) -> Vec<u8> {
    let mut out = vec![0u8; vectors.first().map_or(0, |v| v.len())];
    for (&c, v) in coeffs.iter().zip(vectors) {
        f.axpy(&mut out, c, v);
    }
    out
}

/// Interpolates the shares at `points` and evaluates at 0.
pub fn shamir_reconstruct(f: &BaseField, shares: &[&[u8]], points: &[u8]) -> Result<Vec<u8>> {
    shamir_evaluate(f, shares, points, 0)
}

/// Interpolates the shares at `points` and evaluates at `target`.
pub fn shamir_evaluate(
    f: &BaseField,
    shares: &[&[u8]],
    points: &[u8],
    target: u8,
) -> Result<Vec<u8>> {
    if shares.len() != points.len() {
        return Err(Error::InvalidParameters(
            "share and point counts differ".into(),
        ));
    }
    Ok(combine(f, &lagrange_coeffs(f, points, target)?, shares))
}

/// The unique sharing through `shares` at `points`, evaluated at every point of `all_points`.
pub fn shamir_expand(
    f: &BaseField,
    shares: &[&[u8]],
    points: &[u8],
    all_points: &[u8],
) -> Result<Vec<Vec<u8>>> {
    all_points
        .iter()
        .map(|&t| shamir_evaluate(f, shares, points, t))
        .collect()
}
