//! MIRA-Additive: Fiat-Shamir signatures over additive sharing with the
//! hypercube optimization.
//!
//! Per round the prover expands N = 2^D leaf seeds, shares (x, β, a, c) over
//! them and commits to every leaf. Only the 2D main parties take part in the
//! MPC; the prover runs D + 1 executions and recovers the remaining shares by
//! subtraction from the plaintext values. The verifier is told one hidden
//! leaf i* and completes the main party containing it from the broadcast
//! α-share of i*, forcing v = 0 on that side.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::galois::{BitReader, BitWriter, ExtElement, Fields};
use crate::hash::{
    commit, derive_challenge1, derive_challenge2_additive, Challenge1, Hasher, Role, Xof,
};
use crate::keys::Context;
use crate::mpc::{party_alpha, party_v, Broadcast, PartyInput, Shape};
use crate::params::{ParameterSet, Variant};
use crate::sharing::{
    additive_share, hypercube_aggregate, leaf_from_seed, side, AdditiveShareSet, Aux,
};
use crate::tree::{leaves_from_path, SeedTree};

/// Response for one round.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundResponse {
    /// D sibling seeds of the hidden leaf, bottom-up.
    pub path: Vec<Vec<u8>>,
    pub cmt_hidden: Vec<u8>,
    pub alpha_hidden: Vec<ExtElement>,
    /// Zero when the hidden leaf is leaf N itself.
    pub aux: Aux,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdditiveSignature {
    pub salt: Vec<u8>,
    pub h1: Vec<u8>,
    pub h2: Vec<u8>,
    pub rounds: Vec<RoundResponse>,
}

fn write_aux(w: &mut BitWriter, fields: &Fields, shape: Shape, aux: &Aux) {
    w.put_base(&fields.base, &aux.x);
    w.put_ext(&fields.base, shape.m, &aux.beta);
    w.put_ext(&fields.base, shape.lift, std::slice::from_ref(&aux.c));
}

fn read_aux(r: &mut BitReader<'_>, fields: &Fields, shape: Shape) -> Result<Aux> {
    let x = r.get_base(&fields.base, shape.k)?;
    let beta = r.get_ext(&fields.base, shape.m, shape.r)?;
    let c = r.get_ext(&fields.base, shape.lift, 1)?[0];
    Ok(Aux { x, beta, c })
}

/// Committed state of leaf i: its seed, followed by the packed aux for leaf N.
fn leaf_state(fields: &Fields, shape: Shape, seed: &[u8], aux: Option<&Aux>) -> Vec<u8> {
    let mut w = BitWriter::new();
    w.put_bytes(seed);
    if let Some(aux) = aux {
        write_aux(&mut w, fields, shape, aux);
    }
    w.finish()
}

/// Size in bits: 6λ + τ((k + rm + (r+1)mη)·log2 q + 2λ + Dλ).
pub fn signature_bits(p: &ParameterSet) -> usize {
    let field = p.k + p.r * p.m + (p.r + 1) * p.m * p.eta;
    6 * p.lambda + p.tau * (field * p.element_bits() + 2 * p.lambda + p.depth() * p.lambda)
}

pub fn signature_bytes(p: &ParameterSet) -> usize {
    signature_bits(p).div_ceil(8)
}

impl AdditiveSignature {
    pub fn to_bytes(&self, ctx: &Context) -> Vec<u8> {
        let shape = Shape::new(ctx.params.k, ctx.params.r, &ctx.fields);
        let mut w = BitWriter::new();
        w.put_bytes(&self.salt);
        w.put_bytes(&self.h1);
        w.put_bytes(&self.h2);
        for round in &self.rounds {
            for seed in &round.path {
                w.put_bytes(seed);
            }
            w.put_bytes(&round.cmt_hidden);
            w.put_ext(&ctx.fields.base, shape.lift, &round.alpha_hidden);
            write_aux(&mut w, &ctx.fields, shape, &round.aux);
        }
        w.finish()
    }

    pub fn from_bytes(ctx: &Context, bytes: &[u8]) -> Result<Self> {
        let p = &ctx.params;
        if bytes.len() != signature_bytes(p) {
            return Err(Error::Decode(format!(
                "signature is {} bytes, expected {}",
                bytes.len(),
                signature_bytes(p)
            )));
        }
        let shape = Shape::new(p.k, p.r, &ctx.fields);
        let (seed, digest) = (p.seed_bytes(), p.digest_bytes());
        let mut r = BitReader::new(bytes);
        let salt = r.get_bytes(digest)?;
        let h1 = r.get_bytes(digest)?;
        let h2 = r.get_bytes(digest)?;
        let rounds = (0..p.tau)
            .map(|_| {
                let path = (0..p.depth())
                    .map(|_| r.get_bytes(seed))
                    .collect::<Result<_>>()?;
                let cmt_hidden = r.get_bytes(digest)?;
                let alpha_hidden = r.get_ext(&ctx.fields.base, shape.lift, shape.r)?;
                let aux = read_aux(&mut r, &ctx.fields, shape)?;
                Ok(RoundResponse {
                    path,
                    cmt_hidden,
                    alpha_hidden,
                    aux,
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

/// H_k = H_3(salt, e, k, α_(k,1), α_(k,2), v_(k,1), v_(k,2)).
pub fn dimension_digest(
    ctx: &Context,
    salt: &[u8],
    e: u32,
    k: usize,
    main: &[Broadcast; 2],
) -> Vec<u8> {
    let d = ctx.fields.lift_degree();
    let f = &ctx.fields.base;
    let mut w = BitWriter::new();
    w.put_ext(f, d, &main[0].alpha);
    w.put_ext(f, d, &main[1].alpha);
    w.put_ext(f, d, &[main[0].v, main[1].v]);
    let mut h = Hasher::new(Role::H3, ctx.params.lambda);
    h.update(salt).u32(e).u32(k as u32).update(&w.finish());
    h.finish()
}

/// h_0 = H_1(salt, e, cmt_1..cmt_N).
fn round_digest(lambda: usize, salt: &[u8], e: u32, cmts: &[Vec<u8>]) -> Vec<u8> {
    let mut h = Hasher::new(Role::H1, lambda);
    h.update(salt).u32(e);
    for c in cmts {
        h.update(c);
    }
    h.finish()
}

/// h1 = H_2(salt, msg, h_0^(1..τ)).
fn first_hash(lambda: usize, salt: &[u8], msg: &[u8], h0: &[Vec<u8>]) -> Vec<u8> {
    let mut h = Hasher::new(Role::H2, lambda);
    h.update(salt).bytes_prefixed(msg);
    for d in h0 {
        h.update(d);
    }
    h.finish()
}

/// h2 = H_4(msg, pk, salt, h1, H_k^(e) for all rounds and dimensions).
pub fn second_hash(
    ctx: &Context,
    msg: &[u8],
    salt: &[u8],
    h1: &[u8],
    broadcasts: &[Vec<[Broadcast; 2]>],
) -> Vec<u8> {
    let digests: Vec<Vec<Vec<u8>>> = broadcasts
        .par_iter()
        .enumerate()
        .map(|(e, dims)| {
            dims.iter()
                .enumerate()
                .map(|(k, b)| dimension_digest(ctx, salt, e as u32 + 1, k + 1, b))
                .collect()
        })
        .collect();
    let mut h = Hasher::new(Role::H4, ctx.params.lambda);
    h.bytes_prefixed(msg)
        .update(&ctx.pk_bytes)
        .update(salt)
        .update(h1);
    for d in digests.iter().flatten() {
        h.update(d);
    }
    h.finish()
}

struct ProverRound {
    tree: SeedTree,
    shares: AdditiveShareSet,
    cmts: Vec<Vec<u8>>,
}

/// The interactive prover behind [`sign`]. Exposing the three moves lets
/// tests supply their own challenges or tamper with broadcasts.
pub struct AdditiveProver<'a> {
    ctx: &'a Context,
    shape: Shape,
    salt: Vec<u8>,
    h1: Vec<u8>,
    rounds: Vec<ProverRound>,
}

impl<'a> AdditiveProver<'a> {
    /// First move: shares (x, β) in every round and commits to the leaves.
    /// `x` and `β` are not checked, so a cheating prover can be built on top.
    pub fn commit(
        ctx: &'a Context,
        x: &[u8],
        beta: &[ExtElement],
        seed_sk: &[u8],
        msg: &[u8],
        entropy: &[u8],
    ) -> Result<Self> {
        let p = &ctx.params;
        if p.variant != Variant::Additive {
            return Err(Error::InvalidParameters(format!(
                "{} is not an additive parameter set",
                p.name()
            )));
        }
        let shape = Shape::new(p.k, p.r, &ctx.fields);
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
                let mut root = vec![0u8; p.seed_bytes()];
                Xof::new(Role::Sign)
                    .update(&[1])
                    .prefixed(entropy)
                    .prefixed(seed_sk)
                    .update(&salt)
                    .u32(e)
                    .sampler()
                    .bytes(&mut root);
                let tree = SeedTree::expand(&root, &salt, e, p.parties)?;
                let seeds: Vec<&[u8]> = tree.leaves().collect();
                let shares = additive_share(&ctx.fields, shape, x, beta, &salt, e, &seeds);
                let cmts = (1..=p.parties)
                    .map(|i| {
                        let aux = (i == p.parties).then_some(&shares.aux);
                        commit(
                            p.lambda,
                            &salt,
                            e,
                            i as u32,
                            &leaf_state(&ctx.fields, shape, tree.leaf(i), aux),
                        )
                    })
                    .collect();
                Ok(ProverRound { tree, shares, cmts })
            })
            .collect::<Result<Vec<_>>>()?;
        let h0: Vec<Vec<u8>> = rounds
            .iter()
            .enumerate()
            .map(|(e, r)| round_digest(p.lambda, &salt, e as u32 + 1, &r.cmts))
            .collect();
        let h1 = first_hash(p.lambda, &salt, msg, &h0);
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

    /// Second move: the main parties' broadcasts per round and dimension.
    pub fn broadcasts(&self, ch1: &[Challenge1]) -> Vec<Vec<[Broadcast; 2]>> {
        self.rounds
            .par_iter()
            .zip(ch1)
            .map(|(round, ch)| self.round_broadcasts(round, ch))
            .collect()
    }

    fn round_broadcasts(&self, round: &ProverRound, ch: &Challenge1) -> Vec<[Broadcast; 2]> {
        let (ctx, shape) = (self.ctx, self.shape);
        let (fields, inst) = (&ctx.fields, &ctx.instance);
        let lift = &*fields.lift;
        let flat: Vec<Vec<u8>> = round
            .shares
            .leaves
            .iter()
            .map(|l| l.flatten(shape))
            .collect();
        let main = hypercube_aggregate(&fields.base, &flat);
        let run = |k: usize, j: usize| {
            let input = PartyInput::unflatten(shape, &main[k][j]);
            let s = party_alpha(fields, inst, &input.x, &input.a, j == 0, ch);
            (input, s)
        };
        // dimension 1: both main parties
        let (p1, s1) = run(0, 0);
        let (p2, s2) = run(0, 1);
        let alpha: Vec<ExtElement> = s1
            .alpha
            .iter()
            .zip(&s2.alpha)
            .map(|(a, b)| lift.add(a, b))
            .collect();
        let v1 = party_v(fields, &s1.z, &p1.beta, &p1.c, &alpha, ch);
        let v2 = party_v(fields, &s2.z, &p2.beta, &p2.c, &alpha, ch);
        let v = lift.add(&v1, &v2);
        let mut out = vec![[
            Broadcast {
                alpha: s1.alpha,
                v: v1,
            },
            Broadcast {
                alpha: s2.alpha,
                v: v2,
            },
        ]];
        // other dimensions: one execution, the second share by subtraction
        for k in 1..main.len() {
            let (pk, sk) = run(k, 0);
            let vk = party_v(fields, &sk.z, &pk.beta, &pk.c, &alpha, ch);
            let other = Broadcast {
                alpha: alpha
                    .iter()
                    .zip(&sk.alpha)
                    .map(|(a, b)| lift.sub(a, b))
                    .collect(),
                v: lift.sub(&v, &vk),
            };
            out.push([
                Broadcast {
                    alpha: sk.alpha,
                    v: vk,
                },
                other,
            ]);
        }
        out
    }

    /// Third move: opens everything but leaf i* in each round.
    pub fn respond(&self, ch1: &[Challenge1], hidden: &[usize]) -> Result<Vec<RoundResponse>> {
        let (ctx, shape) = (self.ctx, self.shape);
        let n = ctx.params.parties;
        self.rounds
            .par_iter()
            .zip(ch1)
            .zip(hidden)
            .map(|((round, ch), &i)| {
                let leaf = &round.shares.leaves[i - 1];
                let s = party_alpha(&ctx.fields, &ctx.instance, &leaf.x, &leaf.a, i == 1, ch);
                Ok(RoundResponse {
                    path: round.tree.sibling_path(i)?,
                    cmt_hidden: round.cmts[i - 1].clone(),
                    alpha_hidden: s.alpha,
                    aux: if i == n {
                        Aux::zero(shape)
                    } else {
                        round.shares.aux.clone()
                    },
                })
            })
            .collect()
    }
}

/// Signs with explicit (x, β); [`crate::sign`] derives them from the key pair.
pub fn sign_with(
    ctx: &Context,
    x: &[u8],
    beta: &[ExtElement],
    seed_sk: &[u8],
    msg: &[u8],
    entropy: &[u8],
) -> Result<AdditiveSignature> {
    let p = &ctx.params;
    let prover = AdditiveProver::commit(ctx, x, beta, seed_sk, msg, entropy)?;
    let ch1 = derive_challenge1(prover.h1(), &ctx.fields, p.n, p.tau);
    let broadcasts = prover.broadcasts(&ch1);
    let h2 = second_hash(ctx, msg, prover.salt(), prover.h1(), &broadcasts);
    let hidden = derive_challenge2_additive(&h2, p.parties, p.tau);
    let rounds = prover.respond(&ch1, &hidden)?;
    Ok(AdditiveSignature {
        salt: prover.salt.clone(),
        h1: prover.h1.clone(),
        h2,
        rounds,
    })
}

/// Recomputed (h_0, main broadcasts) of one round, or `None` when the
/// response is inconsistent in a way that needs no hashing to detect.
fn replay_round(
    ctx: &Context,
    shape: Shape,
    salt: &[u8],
    e: u32,
    resp: &RoundResponse,
    hidden: usize,
    ch: &Challenge1,
) -> Result<Option<(Vec<u8>, Vec<[Broadcast; 2]>)>> {
    let p = &ctx.params;
    let (fields, inst) = (&ctx.fields, &ctx.instance);
    let lift = &*fields.lift;
    let n = p.parties;
    if hidden == n && !resp.aux.is_zero() {
        return Ok(None);
    }
    let seeds = leaves_from_path(&resp.path, hidden, salt, e, n)?;
    let mut cmts = Vec::with_capacity(n);
    let mut flat = Vec::with_capacity(n);
    for (idx, seed) in seeds.iter().enumerate() {
        let i = idx + 1;
        match seed {
            Some(seed) if i != hidden => {
                let mut leaf = leaf_from_seed(fields, shape, salt, e, i, n, seed);
                let aux = (i == n).then_some(&resp.aux);
                if let Some(aux) = aux {
                    aux.apply(&mut leaf);
                }
                cmts.push(commit(
                    p.lambda,
                    salt,
                    e,
                    i as u32,
                    &leaf_state(fields, shape, seed, aux),
                ));
                flat.push(leaf.flatten(shape));
            }
            _ => {
                cmts.push(resp.cmt_hidden.clone());
                flat.push(vec![0u8; shape.flat_len()]);
            }
        }
    }
    let h0 = round_digest(p.lambda, salt, e, &cmts);
    // Everything but leaf i* gives α(T); the plaintext is α(T) + α_{i*}, and
    // the hidden side of dimension k holds α(T) − α(other side) + α_{i*}.
    let mut total = vec![0u8; shape.flat_len()];
    for leaf in &flat {
        fields.base.add_assign(&mut total, leaf);
    }
    let pt = PartyInput::unflatten(shape, &total);
    let st = party_alpha(fields, inst, &pt.x, &pt.a, hidden != 1, ch);
    let alpha: Vec<ExtElement> = st
        .alpha
        .iter()
        .zip(&resp.alpha_hidden)
        .map(|(a, b)| lift.add(a, b))
        .collect();
    let main = hypercube_aggregate(&fields.base, &flat);
    let mut out = Vec::with_capacity(main.len());
    for (k, sides) in main.iter().enumerate() {
        let hs = side(hidden, k + 1) - 1;
        let os = 1 - hs;
        let po = PartyInput::unflatten(shape, &sides[os]);
        let so = party_alpha(fields, inst, &po.x, &po.a, os == 0, ch);
        let alpha_h: Vec<ExtElement> = alpha
            .iter()
            .zip(&so.alpha)
            .map(|(a, b)| lift.sub(a, b))
            .collect();
        let vo = party_v(fields, &so.z, &po.beta, &po.c, &alpha, ch);
        let bo = Broadcast {
            alpha: so.alpha,
            v: vo,
        };
        let bh = Broadcast {
            alpha: alpha_h,
            v: lift.neg(&vo),
        };
        out.push(if hs == 0 { [bh, bo] } else { [bo, bh] });
    }
    Ok(Some((h0, out)))
}

/// Checks a decoded signature; `Err` only for structurally invalid input.
pub fn verify_signature(ctx: &Context, msg: &[u8], sig: &AdditiveSignature) -> Result<bool> {
    let p = &ctx.params;
    if p.variant != Variant::Additive {
        return Err(Error::InvalidParameters(format!(
            "{} is not an additive parameter set",
            p.name()
        )));
    }
    let shape = Shape::new(p.k, p.r, &ctx.fields);
    let ch1 = derive_challenge1(&sig.h1, &ctx.fields, p.n, p.tau);
    let hidden = derive_challenge2_additive(&sig.h2, p.parties, p.tau);
    let replayed = sig
        .rounds
        .par_iter()
        .zip(&ch1)
        .zip(&hidden)
        .enumerate()
        .map(|(e, ((resp, ch), &i))| replay_round(ctx, shape, &sig.salt, e as u32 + 1, resp, i, ch))
        .collect::<Result<Option<Vec<_>>>>()?;
    let Some(replayed) = replayed else {
        return Ok(false);
    };
    let (h0, broadcasts): (Vec<_>, Vec<_>) = replayed.into_iter().unzip();
    if first_hash(p.lambda, &sig.salt, msg, &h0) != sig.h1 {
        return Ok(false);
    }
    Ok(second_hash(ctx, msg, &sig.salt, &sig.h1, &broadcasts) == sig.h2)
}

/// Decodes and checks; malformed bytes are an `Err`.
pub fn verify(ctx: &Context, msg: &[u8], sig: &[u8]) -> Result<bool> {
    let sig = AdditiveSignature::from_bytes(ctx, sig)?;
    verify_signature(ctx, msg, &sig)
}
