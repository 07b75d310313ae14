//! MIRA-Threshold: Fiat-Shamir signatures over (ℓ+1, N) Shamir sharing.
//!
//! Per round the prover Shamir-shares (x, β, a, c), commits to all N shares
//! in a Merkle tree and runs the MPC for the public set S = {1..ℓ+1} only.
//! The second challenge opens a set I of ℓ parties; the prover adds the
//! α-share of i* = min(S ∖ I), from which the verifier interpolates α and
//! the broadcasts of all of S.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::galois::{BitReader, BitWriter, ExtElement, Fields};
use crate::hash::{
    commit, derive_challenge1, derive_challenge2_threshold, Challenge1, Hasher, Role, Xof,
};
use crate::keys::Context;
use crate::mpc::{inner, party_alpha, party_v, Broadcast, PartyInput, Shape};
use crate::params::{ParameterSet, Variant};
use crate::sharing::{lagrange_coeffs, point, shamir_share};
use crate::tree::{merkle_auth, merkle_root, merkle_root_from_auth};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundResponse {
    pub auth: Vec<Vec<u8>>,
    /// Flattened shares of the opened parties, ascending by index.
    pub states: Vec<Vec<u8>>,
    pub alpha_hidden: Vec<ExtElement>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThresholdSignature {
    pub salt: Vec<u8>,
    pub h1: Vec<u8>,
    pub h2: Vec<u8>,
    pub rounds: Vec<RoundResponse>,
}

/// Elements of F_q per opened state: k + rm + (r+1)mη.
fn state_len(p: &ParameterSet) -> usize {
    p.k + p.r * p.m + (p.r + 1) * p.m * p.eta
}

/// The tabulated bound 6λ + τ((ℓ(k + rm + (r+1)mη) + rmη)·log2 q + 2λ·ℓ·log2(N/ℓ)), in bits.
pub fn signature_bound_bits(p: &ParameterSet) -> f64 {
    let field = (p.ell * state_len(p) + p.r * p.m * p.eta) as f64 * (p.q as f64).log2();
    let tree = 2.0 * p.lambda as f64 * p.ell as f64 * (p.parties as f64 / p.ell as f64).log2();
    6.0 * p.lambda as f64 + p.tau as f64 * (field + tree)
}

/// Public set S = {1, .., ℓ+1}.
pub fn public_set(p: &ParameterSet) -> Vec<usize> {
    (1..=p.ell + 1).collect()
}

/// The deterministic i*: the smallest index of S outside I.
pub fn hidden_party(p: &ParameterSet, opened: &[usize]) -> usize {
    (1..=p.ell + 1)
        .find(|i| !opened.contains(i))
        .expect("|I| < |S|")
}

/// Σ λ_j s_j for vectors of F_{q^{mη}} elements.
fn combine_ext(fields: &Fields, coeffs: &[u8], shares: &[&[ExtElement]]) -> Vec<ExtElement> {
    let lift = &*fields.lift;
    let mut out = vec![ExtElement::ZERO; shares[0].len()];
    for (&c, s) in coeffs.iter().zip(shares) {
        for (o, x) in out.iter_mut().zip(s.iter()) {
            lift.add_assign(o, &lift.scale(x, c));
        }
    }
    out
}

impl ThresholdSignature {
    pub fn to_bytes(&self, ctx: &Context) -> Vec<u8> {
        let f = &ctx.fields.base;
        let mut w = BitWriter::new();
        w.put_bytes(&self.salt);
        w.put_bytes(&self.h1);
        w.put_bytes(&self.h2);
        for round in &self.rounds {
            w.put_bits(round.auth.len() as u32, 16);
            for node in &round.auth {
                w.put_bytes(node);
            }
            for s in &round.states {
                w.put_base(f, s);
            }
            w.put_ext(f, ctx.fields.lift_degree(), &round.alpha_hidden);
        }
        w.finish()
    }

    pub fn from_bytes(ctx: &Context, bytes: &[u8]) -> Result<Self> {
        let p = &ctx.params;
        let f = &ctx.fields.base;
        let digest = p.digest_bytes();
        let mut r = BitReader::new(bytes);
        let salt = r.get_bytes(digest)?;
        let h1 = r.get_bytes(digest)?;
        let h2 = r.get_bytes(digest)?;
        let rounds = (0..p.tau)
            .map(|_| {
                let count = r.get_u16()? as usize;
                if count > 2 * p.parties {
                    return Err(Error::Decode(format!("{count} authentication nodes")));
                }
                let auth = (0..count)
                    .map(|_| r.get_bytes(digest))
                    .collect::<Result<_>>()?;
                let states = (0..p.ell)
                    .map(|_| r.get_base(f, state_len(p)))
                    .collect::<Result<_>>()?;
                let alpha_hidden = r.get_ext(f, ctx.fields.lift_degree(), p.r)?;
                Ok(RoundResponse {
                    auth,
                    states,
                    alpha_hidden,
                })
            })
            .collect::<Result<_>>()?;
        r.finish()?;
        Ok(Self {
            salt,
            h1,
            h2,
            rounds,
        })
    }
}

fn first_hash(ctx: &Context, msg: &[u8], salt: &[u8], roots: &[Vec<u8>]) -> Vec<u8> {
    let mut h = Hasher::new(Role::H1, ctx.params.lambda);
    h.bytes_prefixed(msg).update(&ctx.pk_bytes).update(salt);
    for root in roots {
        h.update(root);
    }
    h.finish()
}

/// h2 = H_2(msg, pk, salt, h1, (α_i, v_i) for i ∈ S in every round).
pub fn second_hash(
    ctx: &Context,
    msg: &[u8],
    salt: &[u8],
    h1: &[u8],
    broadcasts: &[Vec<Broadcast>],
) -> Vec<u8> {
    let mut w = BitWriter::new();
    for b in broadcasts.iter().flatten() {
        b.write(&mut w, &ctx.fields);
    }
    let mut h = Hasher::new(Role::H2, ctx.params.lambda);
    h.bytes_prefixed(msg)
        .update(&ctx.pk_bytes)
        .update(salt)
        .update(h1)
        .update(&w.finish());
    h.finish()
}

fn check_params(p: &ParameterSet) -> Result<()> {
    if p.variant != Variant::Threshold {
        return Err(Error::InvalidParameters(format!(
            "{} is not a threshold parameter set",
            p.name()
        )));
    }
    p.validate()
}

struct ProverRound {
    shares: Vec<Vec<u8>>,
    cmts: Vec<Vec<u8>>,
}

/// The interactive prover behind [`sign_with`].
pub struct ThresholdProver<'a> {
    ctx: &'a Context,
    shape: Shape,
    salt: Vec<u8>,
    h1: Vec<u8>,
    rounds: Vec<ProverRound>,
}

impl<'a> ThresholdProver<'a> {
    pub fn commit(
        ctx: &'a Context,
        x: &[u8],
        beta: &[ExtElement],
        seed_sk: &[u8],
        msg: &[u8],
        entropy: &[u8],
    ) -> Result<Self> {
        let p = &ctx.params;
        check_params(p)?;
        let fields = &ctx.fields;
        let shape = Shape::new(p.k, p.r, fields);
        let mut salt = vec![0u8; p.digest_bytes()];
        Xof::new(Role::Sign)
            .update(&[0])
            .prefixed(entropy)
            .prefixed(seed_sk)
            .prefixed(msg)
            .sampler()
            .bytes(&mut salt);
        let rounds = (1..=p.tau as u32)
            .into_par_iter()
            .map(|e| {
                let mut s = Xof::new(Role::Sign)
                    .update(&[2])
                    .prefixed(entropy)
                    .prefixed(seed_sk)
                    .update(&salt)
                    .u32(e)
                    .sampler();
                let a = s.ext_vec(&fields.base, shape.lift, shape.r);
                let c = fields.lift.neg(&inner(fields, &a, beta));
                let secret = PartyInput {
                    x: x.to_vec(),
                    beta: beta.to_vec(),
                    a,
                    c,
                };
                let shares = shamir_share(
                    &fields.base,
                    &secret.flatten(shape),
                    p.ell,
                    p.parties,
                    &mut s,
                )?;
                let cmts = shares
                    .iter()
                    .enumerate()
                    .map(|(idx, share)| {
                        let mut w = BitWriter::new();
                        w.put_base(&fields.base, share);
                        commit(p.lambda, &salt, e, idx as u32 + 1, &w.finish())
                    })
                    .collect();
                Ok(ProverRound { shares, cmts })
            })
            .collect::<Result<Vec<_>>>()?;
        let roots: Vec<Vec<u8>> = rounds
            .par_iter()
            .map(|r| merkle_root(p.lambda, &r.cmts))
            .collect();
        let h1 = first_hash(ctx, msg, &salt, &roots);
        Ok(Self {
            ctx,
            shape,
            salt,
            h1,
            rounds,
        })
    }

    pub fn salt(&self) -> &[u8] {
        &self.salt
    }

    pub fn h1(&self) -> &[u8] {
        &self.h1
    }

    /// Broadcasts of the parties in S, per round.
    pub fn broadcasts(&self, ch1: &[Challenge1]) -> Vec<Vec<Broadcast>> {
        let (ctx, shape) = (self.ctx, self.shape);
        let fields = &ctx.fields;
        let set = public_set(&ctx.params);
        let points: Vec<u8> = set.iter().map(|&i| point(&fields.base, i)).collect();
        let lagrange = lagrange_coeffs(&fields.base, &points, 0).expect("distinct points");
        self.rounds
            .par_iter()
            .zip(ch1)
            .map(|(round, ch)| {
                let inputs: Vec<PartyInput> = set
                    .iter()
                    .map(|&i| PartyInput::unflatten(shape, &round.shares[i - 1]))
                    .collect();
                let phase1: Vec<_> = inputs
                    .iter()
                    .map(|p| party_alpha(fields, &ctx.instance, &p.x, &p.a, true, ch))
                    .collect();
                let alpha_shares: Vec<&[ExtElement]> =
                    phase1.iter().map(|s| s.alpha.as_slice()).collect();
                let alpha = combine_ext(fields, &lagrange, &alpha_shares);
                inputs
                    .iter()
                    .zip(phase1)
                    .map(|(p, s)| {
                        let v = party_v(fields, &s.z, &p.beta, &p.c, &alpha, ch);
                        Broadcast { alpha: s.alpha, v }
                    })
                    .collect()
            })
            .collect()
    }

    pub fn respond(&self, ch1: &[Challenge1], opened: &[Vec<usize>]) -> Result<Vec<RoundResponse>> {
        let ctx = self.ctx;
        let p = &ctx.params;
        self.rounds
            .par_iter()
            .zip(ch1)
            .zip(opened)
            .map(|((round, ch), set)| {
                let i = hidden_party(p, set);
                let input = PartyInput::unflatten(self.shape, &round.shares[i - 1]);
                let s = party_alpha(&ctx.fields, &ctx.instance, &input.x, &input.a, true, ch);
                Ok(RoundResponse {
                    auth: merkle_auth(p.lambda, &round.cmts, set)?,
                    states: set.iter().map(|&j| round.shares[j - 1].clone()).collect(),
                    alpha_hidden: s.alpha,
                })
            })
            .collect()
    }
}

pub fn sign_with(
    ctx: &Context,
    x: &[u8],
    beta: &[ExtElement],
    seed_sk: &[u8],
    msg: &[u8],
    entropy: &[u8],
) -> Result<ThresholdSignature> {
    let p = &ctx.params;
    let prover = ThresholdProver::commit(ctx, x, beta, seed_sk, msg, entropy)?;
    let ch1 = derive_challenge1(prover.h1(), &ctx.fields, p.n, p.tau);
    let broadcasts = prover.broadcasts(&ch1);
    let h2 = second_hash(ctx, msg, prover.salt(), prover.h1(), &broadcasts);
    let opened = derive_challenge2_threshold(&h2, p.parties, p.ell, p.tau)?;
    let rounds = prover.respond(&ch1, &opened)?;
    Ok(ThresholdSignature {
        salt: prover.salt.clone(),
        h1: prover.h1.clone(),
        h2,
        rounds,
    })
}

/// Merkle root and interpolated S-broadcasts of one round; `None` if the
/// authentication path has the wrong shape.
fn replay_round(
    ctx: &Context,
    shape: Shape,
    salt: &[u8],
    e: u32,
    resp: &RoundResponse,
    opened: &[usize],
    ch: &Challenge1,
) -> Result<Option<(Vec<u8>, Vec<Broadcast>)>> {
    let p = &ctx.params;
    let fields = &ctx.fields;
    let f = &*fields.base;
    let cmts: Vec<Vec<u8>> = opened
        .iter()
        .zip(&resp.states)
        .map(|(&i, s)| {
            let mut w = BitWriter::new();
            w.put_base(f, s);
            commit(p.lambda, salt, e, i as u32, &w.finish())
        })
        .collect();
    let Some(root) = merkle_root_from_auth(p.lambda, p.parties, opened, &cmts, &resp.auth)? else {
        return Ok(None);
    };
    let inputs: Vec<PartyInput> = resp
        .states
        .iter()
        .map(|s| PartyInput::unflatten(shape, s))
        .collect();
    let phase1: Vec<_> = inputs
        .iter()
        .map(|x| party_alpha(fields, &ctx.instance, &x.x, &x.a, true, ch))
        .collect();

    // α from I ∪ {i*}, then α-shares of S
    let hidden = hidden_party(p, opened);
    let mut pts: Vec<u8> = opened.iter().map(|&i| point(f, i)).collect();
    pts.push(point(f, hidden));
    let mut alpha_shares: Vec<&[ExtElement]> = phase1.iter().map(|s| s.alpha.as_slice()).collect();
    alpha_shares.push(&resp.alpha_hidden);
    let alpha = combine_ext(fields, &lagrange_coeffs(f, &pts, 0)?, &alpha_shares);

    // v-shares on I plus v = 0 at the secret point
    let mut v_shares: Vec<Vec<ExtElement>> = inputs
        .iter()
        .zip(&phase1)
        .map(|(x, s)| vec![party_v(fields, &s.z, &x.beta, &x.c, &alpha, ch)])
        .collect();
    v_shares.push(vec![ExtElement::ZERO]);
    let mut v_pts: Vec<u8> = opened.iter().map(|&i| point(f, i)).collect();
    v_pts.push(0);
    let v_refs: Vec<&[ExtElement]> = v_shares.iter().map(|v| v.as_slice()).collect();

    let broadcasts = public_set(p)
        .into_iter()
        .map(|j| {
            let t = point(f, j);
            Ok(Broadcast {
                alpha: combine_ext(fields, &lagrange_coeffs(f, &pts, t)?, &alpha_shares),
                v: combine_ext(fields, &lagrange_coeffs(f, &v_pts, t)?, &v_refs)[0],
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Some((root, broadcasts)))
}

pub fn verify_signature(ctx: &Context, msg: &[u8], sig: &ThresholdSignature) -> Result<bool> {
    let p = &ctx.params;
    check_params(p)?;
    let shape = Shape::new(p.k, p.r, &ctx.fields);
    let ch1 = derive_challenge1(&sig.h1, &ctx.fields, p.n, p.tau);
    let opened = derive_challenge2_threshold(&sig.h2, p.parties, p.ell, p.tau)?;
    let replayed = sig
        .rounds
        .par_iter()
        .zip(&ch1)
        .zip(&opened)
        .enumerate()
        .map(|(e, ((resp, ch), set))| {
            replay_round(ctx, shape, &sig.salt, e as u32 + 1, resp, set, ch)
        })
        .collect::<Result<Option<Vec<_>>>>()?;
    let Some(replayed) = replayed else {
        return Ok(false);
    };
    let (roots, broadcasts): (Vec<_>, Vec<_>) = replayed.into_iter().unzip();
    if first_hash(ctx, msg, &sig.salt, &roots) != sig.h1 {
        return Ok(false);
    }
    Ok(second_hash(ctx, msg, &sig.salt, &sig.h1, &broadcasts) == sig.h2)
}

pub fn verify(ctx: &Context, msg: &[u8], sig: &[u8]) -> Result<bool> {
    let sig = ThresholdSignature::from_bytes(ctx, sig)?;
    verify_signature(ctx, msg, &sig)
}
