//! Known-answer test files: a header naming the parameter set, then one
//! blank-line separated `key = value` block per record. Every field after
//! `seed` is a deterministic function of the seed and the record count.

use std::collections::HashMap;
use std::fmt::Write;

use mira::hash::{Role, Xof};
use mira::{keygen_optimized, ParameterSet, Variant};

const FIELDS: [&str; 4] = ["msg", "pk", "sk", "sig"];

/// The first field of record `count` that does not replay.
#[derive(Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub count: u32,
    pub field: String,
}

fn record_seed(master: &[u8], count: u32) -> Vec<u8> {
    Xof::new(Role::KeyGen)
        .update(b"kat")
        .prefixed(master)
        .u32(count)
        .sampler()
        .array::<48>()
        .to_vec()
}

/// Fields of record `count` derived from its seed, in file order.
fn derive(p: &ParameterSet, seed: &[u8], count: u32) -> mira::Result<[String; 4]> {
    let mut msg = vec![0u8; 33 * (count as usize + 1)];
    Xof::new(Role::KeyGen)
        .update(b"kat message")
        .update(seed)
        .sampler()
        .bytes(&mut msg);
    let (pk, sk) = keygen_optimized(p, seed)?;
    let sig = mira::sign(&sk, &pk, &msg, seed)?;
    Ok([
        hex::encode(&msg),
        hex::encode(pk.to_bytes()),
        hex::encode(sk.to_bytes()),
        hex::encode(sig),
    ])
}

pub fn generate(p: &ParameterSet, master: &[u8], count: u32) -> mira::Result<String> {
    let mut out = String::new();
    writeln!(out, "# {} known-answer tests", p.name()).unwrap();
    writeln!(out, "variant = {}", p.variant).unwrap();
    writeln!(out, "level = {}", p.level).unwrap();
    for i in 0..count {
        let seed = record_seed(master, i);
        let fields = derive(p, &seed, i)?;
        writeln!(out).unwrap();
        writeln!(out, "count = {i}").unwrap();
        writeln!(out, "seed = {}", hex::encode(&seed)).unwrap();
        for (name, value) in FIELDS.iter().zip(fields) {
            writeln!(out, "{name} = {value}").unwrap();
        }
    }
    Ok(out)
}

fn blocks(text: &str) -> Vec<HashMap<String, String>> {
    let mut out = vec![HashMap::new()];
    for line in text.lines() {
        let line = line.trim();
        if line.starts_with('#') {
            continue;
        }
        if line.is_empty() {
            if !out.last().unwrap().is_empty() {
                out.push(HashMap::new());
            }
            continue;
        }
        if let Some((k, v)) = line.split_once('=') {
            out.last_mut()
                .unwrap()
                .insert(k.trim().to_string(), v.trim().to_string());
        }
    }
    out.retain(|b| !b.is_empty());
    out
}

/// Replays every record; returns the record count or the first divergence.
pub fn check(text: &str) -> Result<usize, Mismatch> {
    let header_err = |field: &str| Mismatch {
        count: 0,
        field: field.to_string(),
    };
    let mut blocks = blocks(text).into_iter();
    let header = blocks.next().ok_or_else(|| header_err("variant"))?;
    let variant: Variant = header
        .get("variant")
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| header_err("variant"))?;
    let level: u8 = header
        .get("level")
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| header_err("level"))?;
    let p = ParameterSet::operational(variant, level).map_err(|_| header_err("level"))?;
    let mut n = 0;
    for (idx, rec) in blocks.enumerate() {
        let count = idx as u32;
        let mismatch = |field: &str| Mismatch {
            count,
            field: field.to_string(),
        };
        if rec.get("count").and_then(|c| c.parse::<u32>().ok()) != Some(count) {
            return Err(mismatch("count"));
        }
        let seed = rec
            .get("seed")
            .and_then(|s| hex::decode(s).ok())
            .ok_or_else(|| mismatch("seed"))?;
        let fields = derive(&p, &seed, count).map_err(|_| mismatch("seed"))?;
        for (name, value) in FIELDS.iter().zip(&fields) {
            if rec.get(*name) != Some(value) {
                return Err(mismatch(name));
            }
        }
        n += 1;
    }
    Ok(n)
}
