//! End-to-end acceptance run: one PASS/FAIL line per criterion, nonzero exit
//! if any fails. Built with `harness = false` so the lines always print.

mod common;

use std::time::Instant;

use mira::additive::{self, AdditiveProver, AdditiveSignature};
use mira::estimator::{kz_cost, pk_bits, sk_bits, threshold_average_bits};
use mira::galois::{ExtElement, ExtField, Fields};
use mira::hash::{derive_challenge1, derive_challenge2_additive, Challenge1};
use mira::keys::Instance;
use mira::matrix::MatFq;
use mira::mpc::{inner, party_alpha, party_compute, party_v, plain_check, PartyInput, Shape};
use mira::qpoly::{annihilator, extract_basis, QPolynomial};
use mira::sharing::{
    additive_share, combine, hypercube_aggregate, lagrange_coeffs, point, shamir_share, side,
};
use mira::threshold::signature_bound_bits;
use mira::{
    keygen_optimized, keygen_simple, sign_with_context, verify_with_context, witness_beta, Context,
    ParameterSet, Variant,
};
use rand::Rng;

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn completeness() -> Outcome {
    let start = Instant::now();
    let mut lines = Vec::new();
    let mut all = true;
    for p in ParameterSet::all_operational() {
        let (pk, sk) = keygen_optimized(&p, format!("completeness {}", p.name()).as_bytes())
            .map_err(|e| e.to_string())?;
        let ctx = Context::new(&pk).map_err(|e| e.to_string())?;
        let mut accepted = 0;
        for i in 0..100u32 {
            let msg = format!("message {i}");
            let sig = sign_with_context(&ctx, &sk, msg.as_bytes(), &i.to_le_bytes())
                .map_err(|e| e.to_string())?;
            if verify_with_context(&ctx, msg.as_bytes(), &sig) == Ok(true) {
                accepted += 1;
            }
        }
        all &= accepted == 100;
        lines.push(format!("{} {accepted}/100", p.name()));
    }
    let secs = start.elapsed().as_secs_f64();
    check(
        all && secs < 60.0,
        format!("{}; {secs:.1} s (target < 60 s)", lines.join(", ")),
    )
}

fn additive_sizes() -> Outcome {
    let mut ok = true;
    let mut lines = Vec::new();
    for ((level, sig), (pk_len, sk_len)) in
        [(1, 5640), (3, 11779), (5, 20762)]
            .into_iter()
            .zip([(84, 16), (121, 24), (150, 32)])
    {
        let p = ParameterSet::operational(Variant::Additive, level).unwrap();
        let (pk, sk) = keygen_optimized(&p, b"sizes").map_err(|e| e.to_string())?;
        let ctx = Context::new(&pk).map_err(|e| e.to_string())?;
        let s = sign_with_context(&ctx, &sk, b"size", b"").map_err(|e| e.to_string())?;
        let pk_body = pk.body_bytes().len();
        let sk_body = sk.to_bytes().len() - 1;
        ok &= s.len() == sig && additive::signature_bytes(&p) == sig;
        ok &= pk_body == pk_len && pk_bits(&p).div_ceil(8) == pk_len;
        ok &= sk_body == sk_len && sk_bits(&p).div_ceil(8) == sk_len;
        lines.push(format!(
            "L{level}: sig {} pk {pk_body} sk {sk_body}",
            s.len()
        ));
    }
    check(ok, lines.join(", "))
}

fn threshold_sizes() -> Outcome {
    let mut ok = true;
    let mut lines = Vec::new();
    for (level, reference) in [(1, 8318.0), (3, 17797.0), (5, 30381.0)] {
        let published = ParameterSet::published(Variant::Threshold, level).unwrap();
        let est = threshold_average_bits(&published, false) / 8.0;
        let dev = (est - reference) / reference;
        ok &= dev.abs() <= 0.02;
        let p = ParameterSet::operational(Variant::Threshold, level).unwrap();
        let bound = signature_bound_bits(&p) / 8.0;
        let (pk, sk) = keygen_optimized(&p, b"threshold sizes").map_err(|e| e.to_string())?;
        let ctx = Context::new(&pk).map_err(|e| e.to_string())?;
        let mut largest = 0;
        for i in 0..20u32 {
            let sig =
                sign_with_context(&ctx, &sk, &i.to_le_bytes(), b"").map_err(|e| e.to_string())?;
            largest = largest.max(sig.len());
        }
        ok &= (largest as f64) <= bound;
        lines.push(format!(
            "L{level}: est {est:.0} vs {reference} ({:+.2}%), max measured {largest} <= bound {bound:.0}",
            100.0 * dev
        ));
    }
    check(ok, lines.join("; "))
}

/// All 8^3·8 first challenges against a rank-2 E at q = 2, m = n = 3, r = 1,
/// for every β and every value of ⟨a, β⟩ + c.
fn false_positives() -> Outcome {
    let fields = Fields::get(2, 3, 1).unwrap();
    let f = &*fields.base;
    let mut r = common::rng(4);
    let (m, n, k) = (3, 3, 2);
    let e = loop {
        let cand = MatFq::from_vec(m, n, common::random_base(&mut r, f, m * n));
        if cand.rank(f) == 2 {
            break cand;
        }
    };
    // M_0 = E − Σ x_i M_i, so x is an (invalid) witness with E(x) = E
    let mats: Vec<MatFq> = (0..k)
        .map(|_| MatFq::from_vec(m, n, common::random_base(&mut r, f, m * n)))
        .collect();
    let x = vec![1, 0];
    let mut m0 = e.clone();
    m0.add_scaled(f, 1, &mats[0]);
    let inst = Instance::new(m0, mats);
    if inst.combine(f, &x) != e {
        return Err("instance construction".into());
    }
    let elems: Vec<ExtElement> = (0..8).map(|v| fields.lift.from_integer(v)).collect();
    let total = 8usize.pow(4);
    let mut worst = 0usize;
    let mut best = usize::MAX;
    for beta in &elems {
        for d in &elems {
            let a = vec![ExtElement::ZERO];
            let mut accepted = 0;
            for g in 0..total {
                let ch = Challenge1 {
                    gamma: (0..3).map(|j| elems[(g >> (3 * j)) & 7]).collect(),
                    epsilon: elems[g >> 9],
                };
                let input = PartyInput {
                    x: x.clone(),
                    beta: vec![*beta],
                    a: a.clone(),
                    c: fields.lift.sub(d, &inner(&fields, &a, &[*beta])),
                };
                if plain_check(&fields, &inst, &input, &ch).v.is_zero() {
                    accepted += 1;
                }
            }
            worst = worst.max(accepted);
            best = best.min(accepted);
        }
    }
    check(
        worst * 64 <= 15 * total && best > 0,
        format!("max accept {worst}/{total} (bound 15/64 = 960/4096), min {best}/{total}"),
    )
}

/// Single-leaf cheater: commits to a non-witness and forges the broadcasts of
/// every main party containing leaf i_c, so it survives exactly when i* = i_c.
fn soundness_monte_carlo() -> Outcome {
    let p = ParameterSet {
        variant: Variant::Additive,
        level: 0,
        q: 2,
        m: 3,
        n: 3,
        k: 3,
        r: 1,
        parties: 4,
        ell: 0,
        tau: 1,
        eta: 3,
        lambda: 128,
        omega: 2.81,
    };
    let (pk, sk) = keygen_optimized(&p, b"forger").map_err(|e| e.to_string())?;
    let ctx = Context::new(&pk).map_err(|e| e.to_string())?;
    let fields = &ctx.fields;
    let mut r = common::rng(5);
    let trials = 10_000;
    let mut passed = 0;
    for t in 0..trials {
        let x: Vec<u8> = loop {
            let x = common::random_base(&mut r, &fields.base, p.k);
            if !ctx.instance.validate_witness(&fields.base, &x, p.r) {
                break x;
            }
        };
        let beta = vec![common::random_ext(&mut r, &fields.base, p.m)];
        let cheat = r.gen_range(1..=p.parties);
        let msg = format!("forgery {t}");
        let prover = AdditiveProver::commit(&ctx, &x, &beta, &sk.seed_sk, msg.as_bytes(), b"")
            .map_err(|e| e.to_string())?;
        let ch1 = derive_challenge1(prover.h1(), fields, p.n, p.tau);
        let mut b = prover.broadcasts(&ch1);
        for (k, main) in b[0].iter_mut().enumerate() {
            let s = side(cheat, k + 1) - 1;
            main[s].v = fields.lift.neg(&main[1 - s].v);
        }
        let h2 = additive::second_hash(&ctx, msg.as_bytes(), prover.salt(), prover.h1(), &b);
        let hidden = derive_challenge2_additive(&h2, p.parties, p.tau);
        let rounds = prover.respond(&ch1, &hidden).map_err(|e| e.to_string())?;
        let sig = AdditiveSignature {
            salt: prover.salt().to_vec(),
            h1: prover.h1().to_vec(),
            h2,
            rounds,
        };
        let bytes = sig.to_bytes(&ctx);
        if additive::verify(&ctx, msg.as_bytes(), &bytes) == Ok(true) {
            passed += 1;
        }
    }
    let rate = passed as f64 / trials as f64;
    let sigma = (0.25f64 * 0.75 / trials as f64).sqrt();
    check(
        (rate - 0.25).abs() <= 3.0 * sigma,
        format!(
            "{passed}/{trials} = {rate:.4}, |rate − 1/4| = {:.4} <= 3σ = {:.4} (p = {:.4})",
            (rate - 0.25).abs(),
            3.0 * sigma,
            mira::mpc::false_positive_rate(2, 3, 3).0
        ),
    )
}

fn kz_costs() -> Outcome {
    let start = Instant::now();
    let mut worst = f64::INFINITY;
    let mut lines = Vec::new();
    for v in [Variant::Additive, Variant::Threshold] {
        for level in [1, 3, 5] {
            for (j, p) in [
                ParameterSet::published(v, level).unwrap(),
                ParameterSet::operational(v, level).unwrap(),
            ]
            .into_iter()
            .enumerate()
            {
                let (c, _) = kz_cost(&p);
                worst = worst.min(c);
                if j == 0 {
                    lines.push(format!("{} 2^{c:.2}", p.name()));
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    check(
        worst >= 126.0 && secs < 1.0,
        format!(
            "{}; min over published and operational sets 2^{worst:.2}; {secs:.3} s",
            lines.join(", ")
        ),
    )
}

fn lagrange_ext(fields: &Fields, coeffs: &[u8], shares: &[&[ExtElement]]) -> Vec<ExtElement> {
    let lift = &*fields.lift;
    let mut out = vec![ExtElement::ZERO; shares[0].len()];
    for (&c, s) in coeffs.iter().zip(shares) {
        for (o, x) in out.iter_mut().zip(s.iter()) {
            lift.add_assign(o, &lift.scale(x, c));
        }
    }
    out
}

/// Additive (leaf-level and hypercube main parties) and Shamir executions
/// against plain_check on the reconstructed input.
fn oracle_equivalence() -> Outcome {
    let cases = 1000usize;
    let mut r = common::rng(7);
    // additive, q = 16, m = 5, η = 2, N = 8
    let fields = Fields::get(16, 5, 2).unwrap();
    let lift = &*fields.lift;
    let (m, n, k, rank, parties) = (5, 6, 9, 2, 8);
    let shape = Shape::new(k, rank, &fields);
    let mut additive_ok = 0;
    for _ in 0..cases {
        let inst = common::random_instance(&mut r, &fields.base, m, n, k);
        let ch = common::random_challenge(&mut r, &fields, n);
        let x = common::random_base(&mut r, &fields.base, k);
        let beta: Vec<ExtElement> = (0..rank)
            .map(|_| common::random_ext(&mut r, &fields.base, m))
            .collect();
        let seeds: Vec<Vec<u8>> = (0..parties)
            .map(|_| (0..16).map(|_| r.gen()).collect())
            .collect();
        let refs: Vec<&[u8]> = seeds.iter().map(|s| s.as_slice()).collect();
        let set = additive_share(&fields, shape, &x, &beta, b"oracle", 1, &refs);
        let plain = plain_check(&fields, &inst, &set.secret(&fields.base, shape), &ch);
        let phase1: Vec<_> = set
            .leaves
            .iter()
            .enumerate()
            .map(|(i, l)| party_alpha(&fields, &inst, &l.x, &l.a, i == 0, &ch))
            .collect();
        let mut alpha = vec![ExtElement::ZERO; rank];
        for s in &phase1 {
            for (a, b) in alpha.iter_mut().zip(&s.alpha) {
                lift.add_assign(a, b);
            }
        }
        let mut v = ExtElement::ZERO;
        for (l, s) in set.leaves.iter().zip(&phase1) {
            lift.add_assign(&mut v, &party_v(&fields, &s.z, &l.beta, &l.c, &alpha, &ch));
        }
        let mut ok = alpha == plain.alpha && v == plain.v;
        let flat: Vec<Vec<u8>> = set.leaves.iter().map(|l| l.flatten(shape)).collect();
        for sides in hypercube_aggregate(&fields.base, &flat) {
            let b: Vec<_> = (0..2)
                .map(|j| {
                    let input = PartyInput::unflatten(shape, &sides[j]);
                    party_compute(&fields, &inst, &input, j == 0, &ch, &alpha)
                })
                .collect();
            ok &= b[0].add(&fields, &b[1]) == plain;
        }
        additive_ok += ok as usize;
    }
    // Shamir, q = 251, m = 4, η = 2, ℓ = 3, N = 12
    let fields = Fields::get(251, 4, 2).unwrap();
    let lift = &*fields.lift;
    let f = &*fields.base;
    let (m, n, k, rank, ell, parties) = (4, 5, 7, 2, 3, 12);
    let shape = Shape::new(k, rank, &fields);
    let mut shamir_ok = 0;
    for t in 0..cases {
        let inst = common::random_instance(&mut r, f, m, n, k);
        let ch = common::random_challenge(&mut r, &fields, n);
        let d = fields.lift_degree();
        let a: Vec<ExtElement> = (0..rank)
            .map(|_| common::random_ext(&mut r, f, d))
            .collect();
        let beta: Vec<ExtElement> = (0..rank)
            .map(|_| common::random_ext(&mut r, f, m))
            .collect();
        let secret = PartyInput {
            x: common::random_base(&mut r, f, k),
            c: lift.neg(&inner(&fields, &a, &beta)),
            beta,
            a,
        };
        let plain = plain_check(&fields, &inst, &secret, &ch);
        let mut s = mira::hash::Xof::new(mira::hash::Role::SharePrg)
            .u32(t as u32)
            .sampler();
        let shares = shamir_share(f, &secret.flatten(shape), ell, parties, &mut s)
            .map_err(|e| e.to_string())?;
        let inputs: Vec<PartyInput> = shares
            .iter()
            .map(|sh| PartyInput::unflatten(shape, sh))
            .collect();
        let phase1: Vec<_> = inputs
            .iter()
            .map(|i| party_alpha(&fields, &inst, &i.x, &i.a, true, &ch))
            .collect();
        // any ℓ + 1 parties open α
        let mut chosen: Vec<usize> = (0..parties).collect();
        for i in (1..parties).rev() {
            chosen.swap(i, r.gen_range(0..=i));
        }
        chosen.truncate(ell + 1);
        let pts: Vec<u8> = chosen.iter().map(|&i| point(f, i + 1)).collect();
        let lam = lagrange_coeffs(f, &pts, 0).map_err(|e| e.to_string())?;
        let alpha_shares: Vec<&[ExtElement]> =
            chosen.iter().map(|&i| phase1[i].alpha.as_slice()).collect();
        let alpha = lagrange_ext(&fields, &lam, &alpha_shares);
        let v: Vec<ExtElement> = chosen
            .iter()
            .map(|&i| {
                party_v(
                    &fields,
                    &phase1[i].z,
                    &inputs[i].beta,
                    &inputs[i].c,
                    &alpha,
                    &ch,
                )
            })
            .collect();
        let v_refs: Vec<&[ExtElement]> = v.iter().map(std::slice::from_ref).collect();
        let v = lagrange_ext(&fields, &lam, &v_refs)[0];
        // the flat input reconstructs as well
        let flat_refs: Vec<&[u8]> = chosen.iter().map(|&i| shares[i].as_slice()).collect();
        let flat_ok = combine(f, &lam, &flat_refs) == secret.flatten(shape);
        shamir_ok += (alpha == plain.alpha && v == plain.v && flat_ok) as usize;
    }
    check(
        additive_ok == cases && shamir_ok == cases,
        format!("additive {additive_ok}/{cases}, Shamir {shamir_ok}/{cases} exact"),
    )
}

/// ∏_{u ∈ span(basis)} (X − u) as a dense polynomial, lowest degree first.
fn full_product(f: &ExtField, basis: &[ExtElement]) -> Vec<ExtElement> {
    let q = f.base().order() as usize;
    let mut span = vec![ExtElement::ZERO];
    for b in basis {
        let mut next = Vec::with_capacity(span.len() * q);
        for c in 0..q {
            let cb = f.scale(b, f.base().from_index(c));
            next.extend(span.iter().map(|u| f.add(u, &cb)));
        }
        span = next;
    }
    let mut poly = vec![ExtElement::one()];
    for u in &span {
        let mut next = vec![ExtElement::ZERO; poly.len() + 1];
        for (i, c) in poly.iter().enumerate() {
            next[i + 1] = f.add(&next[i + 1], c);
            next[i] = f.sub(&next[i], &f.mul(c, u));
        }
        poly = next;
    }
    poly
}

fn annihilators() -> Outcome {
    let mut keys = 0;
    let mut roots_ok = true;
    for p in ParameterSet::all_operational() {
        for s in 0..3u8 {
            for keygen in [keygen_optimized, keygen_simple] {
                let (pk, sk) = keygen(&p, &[s, 0xa5]).map_err(|e| e.to_string())?;
                let ctx = Context::new(&pk).map_err(|e| e.to_string())?;
                let w = sk.witness_for(&pk).map_err(|e| e.to_string())?;
                let l =
                    QPolynomial::from_beta(witness_beta(&ctx, &w.e).map_err(|e| e.to_string())?);
                roots_ok &= l.q_degree() == p.r;
                roots_ok &=
                    w.e.columns_to_ext()
                        .iter()
                        .all(|c| l.evaluate(&ctx.fields.ext, c).is_zero());
                keys += 1;
            }
        }
    }
    let f = Fields::get(2, 7, 1).unwrap();
    let ext = &*f.ext;
    let mut r = common::rng(8);
    let mut products = 0;
    let mut product_ok = true;
    for _ in 0..1000 {
        let rank = r.gen_range(1..=3);
        let support: Vec<ExtElement> = (0..rank + 1)
            .map(|_| common::random_ext(&mut r, &f.base, 7))
            .collect();
        let basis = extract_basis(ext, &support);
        if basis.len() < rank {
            continue;
        }
        let basis = &basis[..rank];
        let l = annihilator(ext, basis, rank).map_err(|e| e.to_string())?;
        let dense = full_product(ext, basis);
        for (deg, c) in dense.iter().enumerate() {
            let expected = if deg == 1 << rank {
                ExtElement::one()
            } else if deg.is_power_of_two() && deg < 1 << rank {
                l.beta()[deg.trailing_zeros() as usize]
            } else {
                ExtElement::ZERO
            };
            product_ok &= *c == expected;
        }
        products += 1;
    }
    check(
        roots_ok && product_ok && products >= 900,
        format!(
            "{keys} key pairs: all columns are roots; iterative = full product on {products} subspaces of F_2^7 with r <= 3"
        ),
    )
}

fn property_suites() -> Outcome {
    let suites: [(&str, fn(u32) -> Result<(), String>); 8] = [
        ("seed tree", common::seed_tree_reveal),
        ("Merkle", common::merkle_auth_roundtrip),
        ("Shamir", common::shamir_roundtrip),
        ("Frobenius", common::frobenius_linearity),
        ("hypercube", common::hypercube_partition),
        ("mul oracle", common::ext_mul_matches_schoolbook),
        ("additive sum", common::additive_share_sum),
        ("MPC affine", common::mpc_linearity),
    ];
    let mut failures = Vec::new();
    for (name, suite) in suites {
        if let Err(e) = suite(common::CASES) {
            failures.push(format!("{name}: {e}"));
        }
    }
    check(
        failures.is_empty(),
        if failures.is_empty() {
            format!(
                "{} suites x {} cases, zero failures",
                suites.len(),
                common::CASES
            )
        } else {
            failures.join("; ")
        },
    )
}

fn fuzz() -> Outcome {
    let mut r = common::rng(10);
    let mut lines = Vec::new();
    let mut ok = true;
    for v in [Variant::Additive, Variant::Threshold] {
        let p = ParameterSet::operational(v, 1).unwrap();
        let (pk, sk) = keygen_optimized(&p, b"fuzz").map_err(|e| e.to_string())?;
        let ctx = Context::new(&pk).map_err(|e| e.to_string())?;
        let sigs: Vec<Vec<u8>> = (0..4u32)
            .map(|i| sign_with_context(&ctx, &sk, b"fuzz", &i.to_le_bytes()))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        let (mut rejected, mut malformed, mut accepted) = (0, 0, 0);
        for t in 0..1000 {
            let mut sig = sigs[t % sigs.len()].clone();
            let bit = r.gen_range(0..sig.len() * 8);
            sig[bit / 8] ^= 1 << (bit % 8);
            match verify_with_context(&ctx, b"fuzz", &sig) {
                Ok(true) => accepted += 1,
                Ok(false) => rejected += 1,
                Err(_) => malformed += 1,
            }
        }
        ok &= accepted == 0;
        lines.push(format!(
            "{}: {rejected} rejected, {malformed} malformed, {accepted} accepted",
            p.name()
        ));
    }
    check(ok, lines.join("; "))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("completeness", completeness),
        ("additive sizes", additive_sizes),
        ("threshold sizes", threshold_sizes),
        ("false-positive rate", false_positives),
        ("soundness Monte Carlo", soundness_monte_carlo),
        ("KZ forgery cost", kz_costs),
        ("oracle equivalence", oracle_equivalence),
        ("annihilator", annihilators),
        ("property suites", property_suites),
        ("fuzz rejection", fuzz),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (status, detail) = match run() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!(
            "criterion {:>2} {status} {name} [{:.1} s]: {detail}",
            i + 1,
            start.elapsed().as_secs_f64()
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
