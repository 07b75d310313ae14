//! Parameter sets of both variants.

use std::fmt;

use crate::error::{Error, Result};
use crate::galois::{Fields, MAX_EXT_DEGREE};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    Additive,
    Threshold,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Additive => "additive",
            Variant::Threshold => "threshold",
        })
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "additive" | "add" => Ok(Variant::Additive),
            "threshold" | "thr" => Ok(Variant::Threshold),
            other => Err(Error::InvalidParameters(format!(
                "unknown variant {other:?}"
            ))),
        }
    }
}

/// Everything that determines keys, signatures and their encodings.
#[derive(Clone, Debug, PartialEq)]
pub struct ParameterSet {
    pub variant: Variant,
    /// NIST level 1, 3 or 5; 0 for custom sets.
    pub level: u8,
    pub q: u16,
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub r: usize,
    /// Number of simulated parties N.
    pub parties: usize,
    /// Privacy threshold ℓ (threshold variant only, 0 otherwise).
    pub ell: usize,
    pub tau: usize,
    pub eta: usize,
    pub lambda: usize,
    /// Linear-algebra exponent used by the attack estimates.
    pub omega: f64,
}

const ADDITIVE: [(u8, u16, usize, usize, usize, usize, usize, usize); 3] = [
    (1, 16, 16, 16, 120, 5, 18, 128),
    (3, 16, 19, 19, 168, 6, 26, 192),
    (5, 16, 23, 22, 271, 6, 34, 256),
];

const THRESHOLD: [(u8, u16, usize, usize, usize, usize, usize, usize); 3] = [
    (1, 251, 12, 13, 55, 5, 7, 128),
    (3, 251, 16, 15, 109, 5, 10, 192),
    (5, 251, 16, 17, 109, 6, 14, 256),
];

impl ParameterSet {
    /// The set exactly as tabulated, including N = 251 for the threshold
    /// variant. Usable for size and cost estimates; signing needs
    /// [`operational`](Self::operational).
    pub fn published(variant: Variant, level: u8) -> Result<Self> {
        let table = match variant {
            Variant::Additive => &ADDITIVE,
            Variant::Threshold => &THRESHOLD,
        };
        let &(level, q, m, n, k, r, tau, lambda) =
            table.iter().find(|row| row.0 == level).ok_or_else(|| {
                Error::InvalidParameters(format!("level {level} is not one of 1, 3, 5"))
            })?;
        let (parties, ell) = match variant {
            Variant::Additive => (256, 0),
            Variant::Threshold => (251, 3),
        };
        Ok(Self {
            variant,
            level,
            q,
            m,
            n,
            k,
            r,
            parties,
            ell,
            tau,
            eta: 1,
            lambda,
            omega: 2.81,
        })
    }

    /// The set used for signing. Shamir sharing over F_q has only q − 1
    /// nonzero evaluation points, so the threshold sets run with N = 250.
    pub fn operational(variant: Variant, level: u8) -> Result<Self> {
        let mut p = Self::published(variant, level)?;
        if variant == Variant::Threshold {
            p.parties = p.q as usize - 1;
        }
        Ok(p)
    }

    pub fn all_operational() -> Vec<Self> {
        [Variant::Additive, Variant::Threshold]
            .into_iter()
            .flat_map(|v| [1, 3, 5].map(move |l| Self::operational(v, l).unwrap()))
            .collect()
    }

    /// Identifier byte used in key files: 0x01/0x03/0x05 additive,
    /// 0x11/0x13/0x15 threshold, 0x00 for anything else.
    pub fn id(&self) -> u8 {
        match Self::operational(self.variant, self.level) {
            Ok(ref p) if p == self => match self.variant {
                Variant::Additive => self.level,
                Variant::Threshold => 0x10 | self.level,
            },
            _ => 0,
        }
    }

    pub fn from_id(id: u8) -> Result<Self> {
        let variant = match id >> 4 {
            0 => Variant::Additive,
            1 => Variant::Threshold,
            _ => return Err(Error::Decode(format!("unknown parameter id {id:#04x}"))),
        };
        Self::operational(variant, id & 0x0f)
            .map_err(|_| Error::Decode(format!("unknown parameter id {id:#04x}")))
    }

    pub fn name(&self) -> String {
        if self.level == 0 {
            format!("{}-custom", self.variant)
        } else {
            format!("{}-L{}", self.variant, self.level)
        }
    }

    /// Checks the structural constraints both schemes rely on.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameters(msg));
        if ![128, 192, 256].contains(&self.lambda) {
            return bad(format!("λ = {} is not 128, 192 or 256", self.lambda));
        }
        if self.r == 0 || self.r > self.m.min(self.n) {
            return bad(format!("rank r = {} outside 1..=min(m, n)", self.r));
        }
        if self.k == 0 || self.k >= self.m * self.n {
            return bad(format!("k = {} must lie in 1..m·n", self.k));
        }
        if self.eta == 0 || self.m * self.eta > MAX_EXT_DEGREE {
            return bad(format!(
                "m·η = {} exceeds {MAX_EXT_DEGREE}",
                self.m * self.eta
            ));
        }
        if self.tau == 0 {
            return bad("τ must be positive".into());
        }
        match self.variant {
            Variant::Additive => {
                if !self.parties.is_power_of_two() || self.parties < 2 || self.parties > 1 << 16 {
                    return bad(format!(
                        "N = {} must be a power of two in 2..=65536",
                        self.parties
                    ));
                }
            }
            Variant::Threshold => {
                if self.parties >= self.q as usize {
                    return Err(Error::TooManyParties {
                        parties: self.parties,
                        q: self.q,
                    });
                }
                if self.ell == 0 || self.ell + 1 > self.parties {
                    return bad(format!(
                        "need 1 ≤ ℓ < N, got ℓ = {}, N = {}",
                        self.ell, self.parties
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn fields(&self) -> Result<Fields> {
        Fields::get(self.q, self.m, self.eta)
    }

    /// D = log2 N for the additive variant.
    pub fn depth(&self) -> usize {
        self.parties.trailing_zeros() as usize
    }

    pub fn seed_bytes(&self) -> usize {
        self.lambda / 8
    }

    pub fn digest_bytes(&self) -> usize {
        self.lambda / 4
    }

    /// Bits per serialized F_q element.
    pub fn element_bits(&self) -> usize {
        if self.q.is_power_of_two() {
            self.q.trailing_zeros() as usize
        } else {
            8
        }
    }

    /// Compact encoding of (q, m, n, k, r, η, λ) bound into key derivation.
    pub fn instance_tag(&self) -> Vec<u8> {
        let mut v = Vec::with_capacity(16);
        v.extend_from_slice(&self.q.to_le_bytes());
        for x in [self.m, self.n, self.k, self.r, self.eta, self.lambda] {
            v.extend_from_slice(&(x as u16).to_le_bytes());
        }
        v
    }
}
