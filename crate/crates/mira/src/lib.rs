//! MIRA: MinRank-based signatures from the MPC-in-the-Head paradigm.
//!
//! Two variants share the key format and the rank-check protocol: an
//! additive one using seed trees and the hypercube technique, and a
//! threshold one over Shamir sharing. [`sign`] and [`verify`] dispatch on
//! the parameter set carried by the key.

pub mod additive;
pub mod error;
pub mod estimator;
pub mod galois;
pub mod hash;
pub mod keys;
pub mod matrix;
pub mod mpc;
pub mod params;
pub mod qpoly;
pub mod sharing;
pub mod threshold;
pub mod tree;

pub use error::{Error, Result};
pub use keys::{keygen_optimized, keygen_simple, Context, KeyForm, PublicKey, SecretKey};
pub use params::{ParameterSet, Variant};

use galois::ExtElement;

/// Coefficients β of the annihilator of the support of E.
pub fn witness_beta(ctx: &Context, e: &matrix::MatFq) -> Result<Vec<ExtElement>> {
    let cols = e.columns_to_ext();
    Ok(qpoly::annihilator(&ctx.fields.ext, &cols, ctx.params.r)?.into_beta())
}

/// Signs `msg`; `entropy` may be empty for fully deterministic signatures.
pub fn sign(sk: &SecretKey, pk: &PublicKey, msg: &[u8], entropy: &[u8]) -> Result<Vec<u8>> {
    let ctx = Context::new(pk)?;
    sign_with_context(&ctx, sk, msg, entropy)
}

pub fn sign_with_context(
    ctx: &Context,
    sk: &SecretKey,
    msg: &[u8],
    entropy: &[u8],
) -> Result<Vec<u8>> {
    let pk = PublicKey::from_bytes(&ctx.pk_bytes)?;
    let w = sk.witness_for(&pk)?;
    let beta = witness_beta(ctx, &w.e)?;
    Ok(match ctx.params.variant {
        Variant::Additive => {
            additive::sign_with(ctx, &w.x, &beta, &sk.seed_sk, msg, entropy)?.to_bytes(ctx)
        }
        Variant::Threshold => {
            threshold::sign_with(ctx, &w.x, &beta, &sk.seed_sk, msg, entropy)?.to_bytes(ctx)
        }
    })
}

/// `Ok(true)` accept, `Ok(false)` reject, `Err` for undecodable input.
pub fn verify(pk: &PublicKey, msg: &[u8], sig: &[u8]) -> Result<bool> {
    let ctx = Context::new(pk)?;
    verify_with_context(&ctx, msg, sig)
}

pub fn verify_with_context(ctx: &Context, msg: &[u8], sig: &[u8]) -> Result<bool> {
    match ctx.params.variant {
        Variant::Additive => additive::verify(ctx, msg, sig),
        Variant::Threshold => threshold::verify(ctx, msg, sig),
    }
}
