//! Signature and key sizes, soundness, the KZ forgery cost and MinRank
//! attack costs. All combinatorics is exact (big integers); logarithms are
//! taken last.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::mpc::false_positive_rate;
use crate::params::{ParameterSet, Variant};

/// log2 of a positive big integer, accurate to f64 precision.
pub fn log2_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits == 0 {
        return f64::NEG_INFINITY;
    }
    let shift = bits.saturating_sub(64);
    let top = (x >> shift).to_u64().expect("64 bits") as f64;
    top.log2() + shift as f64
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

fn binomial_i(n: i64, k: i64) -> BigInt {
    if n < 0 || k < 0 || k > n {
        BigInt::zero()
    } else {
        BigInt::from(binomial(n as u64, k as u64))
    }
}

/// Number of r-dimensional F_q-subspaces of F_{q^m}.
pub fn gaussian_binomial(m: u32, r: u32, q: u64) -> BigUint {
    assert!(r <= m, "r must not exceed m");
    let q = BigUint::from(q);
    let (mut num, mut den) = (BigUint::one(), BigUint::one());
    for i in 0..r {
        num *= q.pow(m) - q.pow(i);
        den *= q.pow(r) - q.pow(i);
    }
    num / den
}

/// An exact non-negative rational.
#[derive(Clone, Debug)]
struct Ratio {
    num: BigUint,
    den: BigUint,
}

impl Ratio {
    fn log2(&self) -> f64 {
        log2_big(&self.num) - log2_big(&self.den)
    }
}

/// p = 2/q^{mη} − 1/q^{2mη} = (2q^{mη} − 1)/q^{2mη}.
fn false_positive_exact(q: u16, m: usize, eta: usize) -> Ratio {
    let qe = BigUint::from(q).pow((m * eta) as u32);
    Ratio {
        num: (&qe << 1u32) - 1u32,
        den: &qe * &qe,
    }
}

/// Expected number of digests in a Merkle authentication path when ℓ of n
/// leaves are opened uniformly at random: a subtree contributes exactly when
/// it holds no opened leaf while its parent does.
pub fn expected_auth_len(n: usize, ell: usize) -> f64 {
    fn walk(n: u64, ell: u64, len: u64, parent: u64, acc: &mut BigUint) {
        if parent > 0 {
            *acc += binomial(n - len, ell) - binomial(n - parent, ell);
        }
        if len > 1 {
            let left = len.div_ceil(2);
            walk(n, ell, left, len, acc);
            walk(n, ell, len - left, len, acc);
        }
    }
    let mut acc = BigUint::zero();
    walk(n as u64, ell as u64, n as u64, 0, &mut acc);
    2f64.powf(log2_big(&acc) - log2_big(&binomial(n as u64, ell as u64)))
}

/// Signature size in bits from the published formula: exact for the
/// additive variant, the upper bound for the threshold one.
pub fn sig_size_bits(p: &ParameterSet) -> f64 {
    let lq = (p.q as f64).log2();
    let lambda = p.lambda as f64;
    let state = (p.k + p.r * p.m + (p.r + 1) * p.m * p.eta) as f64;
    match p.variant {
        Variant::Additive => {
            let d = (p.parties as f64).log2();
            6.0 * lambda + p.tau as f64 * (state * lq + 2.0 * lambda + d * lambda)
        }
        Variant::Threshold => threshold_size_bits(
            p,
            lq,
            2.0 * lambda * p.ell as f64 * (p.parties as f64 / p.ell as f64).log2(),
        ),
    }
}

fn threshold_size_bits(p: &ParameterSet, bits_per_element: f64, tree_bits: f64) -> f64 {
    let field = (p.ell * (p.k + p.r * p.m + (p.r + 1) * p.m * p.eta) + p.r * p.m * p.eta) as f64;
    6.0 * p.lambda as f64 + p.tau as f64 * (field * bits_per_element + tree_bits)
}

/// Threshold size with the expected authentication path in place of the
/// ℓ·log2(N/ℓ) bound, with log2 q bits or whole bytes per element.
pub fn threshold_average_bits(p: &ParameterSet, byte_packed: bool) -> f64 {
    let per_element = if byte_packed {
        p.element_bits() as f64
    } else {
        (p.q as f64).log2()
    };
    let tree = 2.0 * p.lambda as f64 * expected_auth_len(p.parties, p.ell);
    threshold_size_bits(p, per_element, tree)
}

/// Public key: seed plus the non-systematic entries of M_0.
pub fn pk_bits(p: &ParameterSet) -> usize {
    p.lambda + (p.m * p.n - p.k) * p.element_bits()
}

pub fn sk_bits(p: &ParameterSet) -> usize {
    p.lambda
}

/// log2 of ε: 1/N + p(1 − 1/N) additive, 1/C(N,ℓ) + p·ℓ(N−ℓ)/(ℓ+1) threshold.
pub fn soundness_epsilon(p: &ParameterSet) -> f64 {
    let fp = false_positive_exact(p.q, p.m, p.eta);
    let n = p.parties as u64;
    let eps = match p.variant {
        Variant::Additive => Ratio {
            num: &fp.den + &fp.num * (n - 1),
            den: fp.den * n,
        },
        Variant::Threshold => {
            let ell = p.ell as u64;
            let c = binomial(n, ell);
            // 1/c + fp·ℓ(N−ℓ)/(ℓ+1)
            let den = &c * &fp.den * (ell + 1);
            let num = &fp.den * (ell + 1) + &c * &fp.num * (ell * (n - ell));
            Ratio { num, den }
        }
    };
    eps.log2()
}

/// log2 of min over τ′ of 1/P[Bin(τ, p) ≥ τ′] + M^{τ−τ′}, with M = N for the
/// additive variant and C(N, ℓ) with p′ = p·C(N, ℓ+1) for the threshold one.
/// Returns (log2 cost, minimizing τ′).
pub fn kz_cost(p: &ParameterSet) -> (f64, usize) {
    let mut fp = false_positive_exact(p.q, p.m, p.eta);
    let n = p.parties as u64;
    let second = match p.variant {
        Variant::Additive => BigUint::from(n),
        Variant::Threshold => {
            fp.num *= binomial(n, p.ell as u64 + 1);
            binomial(n, p.ell as u64)
        }
    };
    if fp.num > fp.den {
        fp.num = fp.den.clone();
    }
    kz_cost_from(&fp, &second, p.tau)
}

fn kz_cost_from(fp: &Ratio, second: &BigUint, tau: usize) -> (f64, usize) {
    let (a, d) = (&fp.num, &fp.den);
    let miss = d - a;
    // P[Bin ≥ τ′] = Σ_{i ≥ τ′} C(τ,i) a^i (d−a)^{τ−i} / d^τ
    let terms: Vec<BigUint> = (0..=tau)
        .map(|i| binomial(tau as u64, i as u64) * a.pow(i as u32) * miss.pow((tau - i) as u32))
        .collect();
    let den = d.pow(tau as u32);
    let mut tail = BigUint::zero();
    let mut best = (f64::INFINITY, tau);
    for t in (0..=tau).rev() {
        tail += &terms[t];
        if tail.is_zero() {
            continue;
        }
        let cost = Ratio {
            num: &den + &tail * second.pow((tau - t) as u32),
            den: tail.clone(),
        };
        let l = cost.log2();
        if l < best.0 {
            best = (l, t);
        }
    }
    best
}

/// log2 of q^{r⌈k/m⌉}·k^ω.
pub fn kernel_cost(p: &ParameterSet) -> f64 {
    (p.r * p.k.div_ceil(p.m)) as f64 * (p.q as f64).log2() + p.omega * (p.k as f64).log2()
}

/// Search ranges for the support-minors sweep.
#[derive(Clone, Copy, Debug)]
pub struct MinorsRange {
    pub max_a: Option<usize>,
    pub max_b: usize,
}

impl Default for MinorsRange {
    fn default() -> Self {
        Self {
            max_a: None,
            max_b: 10,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MinorsCost {
    pub log2_cost: f64,
    pub a: usize,
    pub b: usize,
}

/// Support-minors cost with hybridization:
/// min over (a, b) of q^{ar}·N_b·M_b^{ω−1} on the instance (n − a, K − am),
/// restricted to N_b ≥ M_b − 1. `None` if no pair is feasible.
pub fn support_minors_cost(p: &ParameterSet, range: MinorsRange) -> Option<MinorsCost> {
    let (m, r) = (p.m as i64, p.r as i64);
    let big_k = p.k as i64;
    let max_a = range.max_a.unwrap_or(p.n - p.r) as i64;
    let lq = (p.q as f64).log2();
    let mut best: Option<MinorsCost> = None;
    for a in 0..=max_a {
        let (n, k) = (p.n as i64 - a, big_k - a * m);
        if k <= 0 || n < r {
            break;
        }
        for b in 1..=range.max_b as i64 {
            let mb = binomial_i(k + b - 1, b) * binomial_i(n, r);
            let nb: BigInt = (1..=b)
                .map(|i| {
                    let t = binomial_i(n, r + i)
                        * binomial_i(k + b - 1 - i, b - i)
                        * binomial_i(m + i - 1, i);
                    if i % 2 == 1 {
                        t
                    } else {
                        -t
                    }
                })
                .sum();
            if !nb.is_positive() || nb < &mb - 1 {
                continue;
            }
            let lnb = log2_big(nb.magnitude());
            let lmb = log2_big(mb.magnitude());
            let cost = (a * r) as f64 * lq + lnb + (p.omega - 1.0) * lmb;
            if best.is_none_or(|c| cost < c.log2_cost) {
                best = Some(MinorsCost {
                    log2_cost: cost,
                    a: a as usize,
                    b: b as usize,
                });
            }
        }
    }
    best
}

/// Every metric for one parameter set, as log2 values or bit counts.
#[derive(Clone, Debug)]
pub struct CostReport {
    pub params: ParameterSet,
    pub sig_size_bits: f64,
    /// Threshold only: expected size with exact log2 q and with byte packing.
    pub sig_average_bits: Option<(f64, f64)>,
    pub pk_bits: usize,
    pub sk_bits: usize,
    pub kz_cost: f64,
    pub kz_tau_prime: usize,
    pub kernel_cost: f64,
    pub support_minors: Option<MinorsCost>,
    pub soundness_epsilon: f64,
    pub false_positive: f64,
}

impl CostReport {
    pub fn new(p: &ParameterSet) -> Self {
        let (kz, tp) = kz_cost(p);
        Self {
            params: p.clone(),
            sig_size_bits: sig_size_bits(p),
            sig_average_bits: (p.variant == Variant::Threshold).then(|| {
                (
                    threshold_average_bits(p, false),
                    threshold_average_bits(p, true),
                )
            }),
            pk_bits: pk_bits(p),
            sk_bits: sk_bits(p),
            kz_cost: kz,
            kz_tau_prime: tp,
            kernel_cost: kernel_cost(p),
            support_minors: support_minors_cost(p, MinorsRange::default()),
            soundness_epsilon: soundness_epsilon(p),
            false_positive: false_positive_rate(p.q, p.m, p.eta).1,
        }
    }

    /// (key, value) records in a fixed order.
    pub fn records(&self) -> Vec<(String, String)> {
        let p = &self.params;
        let mut out: Vec<(String, String)> = vec![
            ("name".into(), p.name()),
            ("q".into(), p.q.to_string()),
            ("m".into(), p.m.to_string()),
            ("n".into(), p.n.to_string()),
            ("k".into(), p.k.to_string()),
            ("r".into(), p.r.to_string()),
            ("N".into(), p.parties.to_string()),
        ];
        if p.variant == Variant::Threshold {
            out.push(("ell".into(), p.ell.to_string()));
        }
        out.extend([
            ("tau".into(), p.tau.to_string()),
            ("eta".into(), p.eta.to_string()),
            ("lambda".into(), p.lambda.to_string()),
            ("sig_bits".into(), format!("{:.1}", self.sig_size_bits)),
            (
                "sig_bytes".into(),
                format!("{:.0}", (self.sig_size_bits / 8.0).ceil()),
            ),
        ]);
        if let Some((exact, packed)) = self.sig_average_bits {
            out.push((
                "sig_avg_bytes".into(),
                format!("{:.0}", (exact / 8.0).ceil()),
            ));
            out.push((
                "sig_avg_bytes_packed".into(),
                format!("{:.0}", (packed / 8.0).ceil()),
            ));
        }
        out.extend([
            ("pk_bytes".into(), self.pk_bits.div_ceil(8).to_string()),
            ("sk_bytes".into(), self.sk_bits.div_ceil(8).to_string()),
            (
                "log2_false_positive".into(),
                format!("{:.2}", self.false_positive),
            ),
            (
                "log2_soundness".into(),
                format!("{:.2}", self.soundness_epsilon),
            ),
            ("log2_kz_cost".into(), format!("{:.2}", self.kz_cost)),
            ("kz_tau_prime".into(), self.kz_tau_prime.to_string()),
            (
                "log2_kernel_cost".into(),
                format!("{:.2}", self.kernel_cost),
            ),
        ]);
        match self.support_minors {
            Some(c) => {
                out.push((
                    "log2_support_minors_cost".into(),
                    format!("{:.2}", c.log2_cost),
                ));
                out.push(("support_minors_ab".into(), format!("{},{}", c.a, c.b)));
            }
            None => out.push((
                "log2_support_minors_cost".into(),
                "inf (no feasible a, b)".into(),
            )),
        }
        out
    }
}
