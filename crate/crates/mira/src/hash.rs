//! Hash and XOF instantiation with one-byte role prefixes, commitments, and
//! Fiat-Shamir challenge derivation.
//!
//! Fixed-length digests are SHA3 with a 2λ-bit output (SHA3-256/384/512 for
//! λ = 128/192/256); every other pseudorandom stream is SHAKE256.

use sha3::digest::{Digest as _, ExtendableOutput, Update};
use sha3::{Sha3_256, Sha3_384, Sha3_512, Shake256, Shake256Reader};

use crate::error::{Error, Result};
use crate::galois::{ExtElement, Fields, Sampler};

/// Domain-separation prefixes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum Role {
    /// Party commitments.
    H0 = 0x00,
    H1 = 0x01,
    H2 = 0x02,
    H3 = 0x03,
    H4 = 0x04,
    Merkle = 0x05,
    SeedTree = 0x10,
    LeafPrg = 0x11,
    SharePrg = 0x12,
    KeyGen = 0x13,
    Sign = 0x14,
    Challenge1 = 0x15,
    Challenge2 = 0x16,
}

enum Inner {
    L128(Sha3_256),
    L192(Sha3_384),
    L256(Sha3_512),
}

/// Incremental 2λ-bit hash bound to a [`Role`].
pub struct Hasher(Inner);

impl Hasher {
    pub fn new(role: Role, lambda: usize) -> Self {
        let mut inner = match lambda {
            128 => Inner::L128(Sha3_256::new()),
            192 => Inner::L192(Sha3_384::new()),
            256 => Inner::L256(Sha3_512::new()),
            _ => panic!("security level {lambda} is not one of 128, 192, 256"),
        };
        match &mut inner {
            Inner::L128(h) => Update::update(h, &[role as u8]),
            Inner::L192(h) => Update::update(h, &[role as u8]),
            Inner::L256(h) => Update::update(h, &[role as u8]),
        }
        Self(inner)
    }

    pub fn update(&mut self, data: &[u8]) -> &mut Self {
        match &mut self.0 {
            Inner::L128(h) => Update::update(h, data),
            Inner::L192(h) => Update::update(h, data),
            Inner::L256(h) => Update::update(h, data),
        }
        self
    }

    pub fn u32(&mut self, v: u32) -> &mut Self {
        self.update(&v.to_le_bytes())
    }

    /// Length-prefixed byte string (used for messages).
    pub fn bytes_prefixed(&mut self, data: &[u8]) -> &mut Self {
        self.update(&(data.len() as u64).to_le_bytes()).update(data)
    }

    pub fn finish(self) -> Vec<u8> {
        match self.0 {
            Inner::L128(h) => h.finalize().to_vec(),
            Inner::L192(h) => h.finalize().to_vec(),
            Inner::L256(h) => h.finalize().to_vec(),
        }
    }
}

/// SHAKE256 stream bound to a [`Role`].
pub struct Xof(Shake256);

impl Xof {
    pub fn new(role: Role) -> Self {
        let mut h = Shake256::default();
        h.update(&[role as u8]);
        Self(h)
    }

    pub fn update(mut self, data: &[u8]) -> Self {
        self.0.update(data);
        self
    }

    pub fn u32(self, v: u32) -> Self {
        self.update(&v.to_le_bytes())
    }

    /// Length-prefixed byte string.
    pub fn prefixed(self, data: &[u8]) -> Self {
        self.update(&(data.len() as u64).to_le_bytes()).update(data)
    }

    pub fn reader(self) -> Shake256Reader {
        self.0.finalize_xof()
    }

    pub fn sampler(self) -> Sampler<Shake256Reader> {
        Sampler::new(self.reader())
    }
}

/// cmt = H_0(salt, e, i, state).
pub fn commit(lambda: usize, salt: &[u8], e: u32, i: u32, state: &[u8]) -> Vec<u8> {
    let mut h = Hasher::new(Role::H0, lambda);
    h.update(salt).u32(e).u32(i).update(state);
    h.finish()
}

/// First challenge of one round: γ_1..γ_n and ε in F_{q^{mη}}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Challenge1 {
    pub gamma: Vec<ExtElement>,
    pub epsilon: ExtElement,
}

impl Challenge1 {
    /// Draws one round's challenge from an element sampler.
    pub fn sample<R: sha3::digest::XofReader>(
        fields: &Fields,
        n: usize,
        s: &mut Sampler<R>,
    ) -> Self {
        let d = fields.lift_degree();
        let gamma = s.ext_vec(&fields.base, d, n);
        let epsilon = s.ext(&fields.base, d);
        Self { gamma, epsilon }
    }
}

pub fn derive_challenge1(h1: &[u8], fields: &Fields, n: usize, tau: usize) -> Vec<Challenge1> {
    let mut s = Xof::new(Role::Challenge1).update(h1).sampler();
    (0..tau)
        .map(|_| Challenge1::sample(fields, n, &mut s))
        .collect()
}

/// Hidden leaves i* ∈ [1, N], one per round.
pub fn derive_challenge2_additive(h2: &[u8], parties: usize, tau: usize) -> Vec<usize> {
    let mut s = Xof::new(Role::Challenge2).update(h2).sampler();
    (0..tau)
        .map(|_| s.below(parties as u32) as usize + 1)
        .collect()
}

/// Opened sets I ⊂ [1, N] with |I| = ℓ, one per round, ascending.
pub fn derive_challenge2_threshold(
    h2: &[u8],
    parties: usize,
    ell: usize,
    tau: usize,
) -> Result<Vec<Vec<usize>>> {
    if ell > parties {
        return Err(Error::InvalidParameters(format!(
            "cannot open {ell} of {parties} parties"
        )));
    }
    let mut s = Xof::new(Role::Challenge2).update(h2).sampler();
    Ok((0..tau)
        .map(|_| {
            let mut set = Vec::with_capacity(ell);
            while set.len() < ell {
                let i = s.below(parties as u32) as usize + 1;
                if !set.contains(&i) {
                    set.push(i);
                }
            }
            set.sort_unstable();
            set
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_lengths() {
        for lambda in [128, 192, 256] {
            assert_eq!(commit(lambda, b"salt", 1, 2, b"state").len(), lambda / 4);
        }
    }

    #[test]
    fn commitments_bind_position_and_salt() {
        let base = commit(128, b"salt", 1, 2, b"state");
        assert_eq!(base, commit(128, b"salt", 1, 2, b"state"));
        assert_ne!(base, commit(128, b"salt", 1, 3, b"state"));
        assert_ne!(base, commit(128, b"salt", 2, 2, b"state"));
        assert_ne!(base, commit(128, b"tlas", 1, 2, b"state"));
    }

    #[test]
    fn roles_separate_domains() {
        let roles = [
            Role::H0,
            Role::H1,
            Role::H2,
            Role::H3,
            Role::H4,
            Role::Merkle,
        ];
        let digests: Vec<_> = roles
            .iter()
            .map(|&r| {
                let mut h = Hasher::new(r, 128);
                h.update(b"same payload");
                h.finish()
            })
            .collect();
        for i in 0..digests.len() {
            for j in i + 1..digests.len() {
                assert_ne!(digests[i], digests[j]);
            }
        }
    }

    #[test]
    fn challenges_are_deterministic_and_well_formed() {
        let f = Fields::get(251, 12, 1).unwrap();
        let a = derive_challenge1(b"h1", &f, 13, 7);
        assert_eq!(a, derive_challenge1(b"h1", &f, 13, 7));
        assert!(a.iter().all(|c| c.gamma.len() == 13));
        assert!(a
            .iter()
            .flat_map(|c| c.gamma.iter())
            .all(|g| g.coeffs()[..12].iter().all(|&x| x < 251)));

        let sets = derive_challenge2_threshold(b"h2", 250, 3, 50).unwrap();
        for s in &sets {
            assert_eq!(s.len(), 3);
            assert!(s.windows(2).all(|w| w[0] < w[1]));
            assert!(s.iter().all(|&i| (1..=250).contains(&i)));
        }
        let leaves = derive_challenge2_additive(b"h2", 256, 1000);
        assert!(leaves.iter().all(|&i| (1..=256).contains(&i)));
    }
}
