//! Randomized property suites shared by the `properties` and `acceptance`
//! targets. Each suite runs its own proptest runner and reports the first
//! failure as a string.

#![allow(dead_code)]

use mira::galois::{BaseField, ExtElement, ExtField, Fields};
use mira::hash::Challenge1;
use mira::hash::{Role, Xof};
use mira::keys::Instance;
use mira::matrix::MatFq;
use mira::mpc::{party_alpha, PartyInput, Shape};
use mira::sharing::{
    additive_share, hypercube_aggregate, point, shamir_expand, shamir_reconstruct, shamir_share,
    side,
};
use mira::tree::{
    leaves_from_path, merkle_auth, merkle_auth_len, merkle_root, merkle_verify, SeedTree,
};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const CASES: u32 = 1000;

/// (q, m) pairs covering the toy fields and every field the parameter sets use.
pub const FIELDS: [(u16, usize); 8] = [
    (2, 3),
    (2, 7),
    (7, 4),
    (16, 5),
    (16, 16),
    (16, 23),
    (251, 12),
    (251, 16),
];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn run<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    let mut runner = TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    });
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

pub fn random_base(rng: &mut impl Rng, f: &BaseField, len: usize) -> Vec<u8> {
    (0..len)
        .map(|_| f.from_index(rng.gen_range(0..f.order() as usize)))
        .collect()
}

pub fn random_ext(rng: &mut impl Rng, f: &BaseField, degree: usize) -> ExtElement {
    ExtElement::from_coeffs(&random_base(rng, f, degree))
}

pub fn random_instance(
    rng: &mut impl Rng,
    f: &BaseField,
    m: usize,
    n: usize,
    k: usize,
) -> Instance {
    let m0 = MatFq::from_vec(m, n, random_base(rng, f, m * n));
    let mats = (0..k)
        .map(|_| MatFq::from_vec(m, n, random_base(rng, f, m * n)))
        .collect();
    Instance::new(m0, mats)
}

pub fn random_challenge(rng: &mut impl Rng, fields: &Fields, n: usize) -> Challenge1 {
    let d = fields.lift_degree();
    Challenge1 {
        gamma: (0..n).map(|_| random_ext(rng, &fields.base, d)).collect(),
        epsilon: random_ext(rng, &fields.base, d),
    }
}

/// Schoolbook product in F_q[y] followed by long division by the modulus.
pub fn schoolbook_mul(f: &ExtField, a: &ExtElement, b: &ExtElement) -> ExtElement {
    let base = f.base();
    let m = f.degree();
    let mut prod = vec![0u8; 2 * m - 1];
    for i in 0..m {
        for j in 0..m {
            let t = base.mul(a.coeffs()[i], b.coeffs()[j]);
            prod[i + j] = base.add(prod[i + j], t);
        }
    }
    // y^m = −(f_0 + f_1 y + … + f_{m−1} y^{m−1})
    for d in (m..2 * m - 1).rev() {
        let lead = prod[d];
        prod[d] = 0;
        for (i, &fi) in f.modulus().iter().enumerate() {
            let t = base.mul(lead, fi);
            prod[d - m + i] = base.sub(prod[d - m + i], t);
        }
    }
    ExtElement::from_coeffs(&prod[..m])
}

fn field_strategy() -> impl Strategy<Value = ((u16, usize), u64)> {
    (prop::sample::select(FIELDS.to_vec()), any::<u64>())
}

pub fn ext_mul_matches_schoolbook(cases: u32) -> Result<(), String> {
    run(cases, field_strategy(), |((q, m), seed)| {
        let f = Fields::get(q, m, 1).unwrap();
        let mut r = rng(seed);
        let a = random_ext(&mut r, &f.base, m);
        let b = random_ext(&mut r, &f.base, m);
        prop_assert_eq!(f.ext.mul(&a, &b), schoolbook_mul(&f.ext, &a, &b));
        Ok(())
    })
}

pub fn frobenius_linearity(cases: u32) -> Result<(), String> {
    run(cases, field_strategy(), |((q, m), seed)| {
        let f = Fields::get(q, m, 1).unwrap();
        let ext = &*f.ext;
        let mut r = rng(seed);
        let a = random_ext(&mut r, &f.base, m);
        let b = random_ext(&mut r, &f.base, m);
        let c = f.base.from_index(r.gen_range(0..q as usize));
        let i = r.gen_range(0..=m);
        let lhs = ext.frobenius_pow(&ext.add(&a, &ext.scale(&b, c)), i);
        let rhs = ext.add(
            &ext.frobenius_pow(&a, i),
            &ext.scale(&ext.frobenius_pow(&b, i), c),
        );
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(ext.frobenius_pow(&a, 1), ext.pow(&a, q as u64));
        prop_assert_eq!(
            ext.frobenius_pow(&ext.mul(&a, &b), i),
            ext.mul(&ext.frobenius_pow(&a, i), &ext.frobenius_pow(&b, i))
        );
        prop_assert_eq!(ext.frobenius_pow(&a, m), a);
        Ok(())
    })
}

pub fn seed_tree_reveal(cases: u32) -> Result<(), String> {
    let strategy = (
        1usize..=7,
        any::<u64>(),
        prop::collection::vec(any::<u8>(), 16..=32),
    );
    run(cases, strategy, |(depth, seed, root)| {
        let n = 1 << depth;
        let mut r = rng(seed);
        let hidden = r.gen_range(1..=n);
        let salt: Vec<u8> = (0..32).map(|_| r.gen()).collect();
        let e = r.gen_range(1..40u32);
        let tree = SeedTree::expand(&root, &salt, e, n).unwrap();
        let path = tree.sibling_path(hidden).unwrap();
        prop_assert_eq!(path.len(), depth);
        // hiding: the hidden seed and its ancestors never appear in the path
        for s in &path {
            prop_assert_ne!(s.as_slice(), tree.leaf(hidden));
            prop_assert_ne!(s.as_slice(), root.as_slice());
        }
        let rec = leaves_from_path(&path, hidden, &salt, e, n).unwrap();
        for j in 1..=n {
            if j == hidden {
                prop_assert!(rec[j - 1].is_none());
            } else {
                prop_assert_eq!(rec[j - 1].as_deref(), Some(tree.leaf(j)));
            }
        }
        // another salt gives unrelated leaves
        let other = leaves_from_path(&path, hidden, b"other", e, n).unwrap();
        if depth > 1 {
            prop_assert!(
                (1..=n).any(|j| j != hidden && other[j - 1].as_deref() != Some(tree.leaf(j)))
            );
        }
        Ok(())
    })
}

pub fn merkle_auth_roundtrip(cases: u32) -> Result<(), String> {
    let strategy = (
        1usize..=64,
        any::<u64>(),
        prop::sample::select(vec![128usize, 192, 256]),
    );
    run(cases, strategy, |(n, seed, lambda)| {
        let mut r = rng(seed);
        let leaves: Vec<Vec<u8>> = (0..n)
            .map(|_| (0..lambda / 4).map(|_| r.gen()).collect())
            .collect();
        let root = merkle_root(lambda, &leaves);
        let count = r.gen_range(1..=n.min(8));
        let mut opened: Vec<usize> = Vec::new();
        while opened.len() < count {
            let i = r.gen_range(1..=n);
            if !opened.contains(&i) {
                opened.push(i);
            }
        }
        opened.sort_unstable();
        let vals: Vec<Vec<u8>> = opened.iter().map(|&i| leaves[i - 1].clone()).collect();
        let auth = merkle_auth(lambda, &leaves, &opened).unwrap();
        prop_assert_eq!(auth.len(), merkle_auth_len(n, &opened).unwrap());
        prop_assert!(merkle_verify(lambda, n, &opened, &vals, &auth, &root).unwrap());
        // flip one bit in either an opened leaf or an authentication digest
        let total = vals.len() + auth.len();
        let pick = r.gen_range(0..total);
        let bit = r.gen_range(0..lambda / 4 * 8);
        let (mut bad_vals, mut bad_auth) = (vals.clone(), auth.clone());
        let target = if pick < vals.len() {
            &mut bad_vals[pick]
        } else {
            &mut bad_auth[pick - vals.len()]
        };
        target[bit / 8] ^= 1 << (bit % 8);
        prop_assert!(!merkle_verify(lambda, n, &opened, &bad_vals, &bad_auth, &root).unwrap());
        Ok(())
    })
}

pub fn shamir_roundtrip(cases: u32) -> Result<(), String> {
    let strategy = (prop::sample::select(vec![7u16, 16, 251]), any::<u64>());
    run(cases, strategy, |(q, seed)| {
        let f = BaseField::new(q).unwrap();
        let mut r = rng(seed);
        let parties = r.gen_range(2..q as usize).min(40);
        let ell = r.gen_range(0..parties);
        let len = r.gen_range(1..8);
        let secret = random_base(&mut r, &f, len);
        let mut s = Xof::new(Role::SharePrg)
            .update(&seed.to_le_bytes())
            .sampler();
        let shares = shamir_share(&f, &secret, ell, parties, &mut s).unwrap();
        let mut idx: Vec<usize> = (1..=parties).collect();
        for i in (1..idx.len()).rev() {
            idx.swap(i, r.gen_range(0..=i));
        }
        idx.truncate(ell + 1);
        let pts: Vec<u8> = idx.iter().map(|&i| point(&f, i)).collect();
        let sub: Vec<&[u8]> = idx.iter().map(|&i| shares[i - 1].as_slice()).collect();
        prop_assert_eq!(shamir_reconstruct(&f, &sub, &pts).unwrap(), secret);
        let all: Vec<u8> = (1..=parties).map(|i| point(&f, i)).collect();
        prop_assert_eq!(shamir_expand(&f, &sub, &pts, &all).unwrap(), shares);
        Ok(())
    })
}

pub fn hypercube_partition(cases: u32) -> Result<(), String> {
    let strategy = (
        1usize..=8,
        prop::sample::select(vec![2u16, 7, 16, 251]),
        any::<u64>(),
    );
    run(cases, strategy, |(depth, q, seed)| {
        let f = BaseField::new(q).unwrap();
        let mut r = rng(seed);
        let n = 1 << depth;
        let len = r.gen_range(1..6);
        let leaves: Vec<Vec<u8>> = (0..n).map(|_| random_base(&mut r, &f, len)).collect();
        let mut total = vec![0u8; len];
        for l in &leaves {
            f.add_assign(&mut total, l);
        }
        let main = hypercube_aggregate(&f, &leaves);
        prop_assert_eq!(main.len(), depth);
        for (k, sides) in main.iter().enumerate() {
            let mut sum = sides[0].clone();
            f.add_assign(&mut sum, &sides[1]);
            prop_assert_eq!(&sum, &total);
            let ones = (1..=n).filter(|&i| side(i, k + 1) == 1).count();
            prop_assert_eq!(ones, n / 2);
        }
        // two leaves share a side in every dimension only if they are equal
        let (i, j) = (r.gen_range(1..=n), r.gen_range(1..=n));
        let same = (1..=depth).all(|k| side(i, k) == side(j, k));
        prop_assert_eq!(same, i == j);
        Ok(())
    })
}

pub fn additive_share_sum(cases: u32) -> Result<(), String> {
    let strategy = (
        prop::sample::select(vec![(2u16, 3usize, 3usize), (16, 5, 1), (251, 4, 2)]),
        1usize..=5,
        any::<u64>(),
    );
    run(cases, strategy, |((q, m, eta), depth, seed)| {
        let fields = Fields::get(q, m, eta).unwrap();
        let mut r = rng(seed);
        let (k, rank) = (r.gen_range(1..6), r.gen_range(1..=m.min(3)));
        let shape = Shape::new(k, rank, &fields);
        let x = random_base(&mut r, &fields.base, k);
        let beta: Vec<ExtElement> = (0..rank)
            .map(|_| random_ext(&mut r, &fields.base, m))
            .collect();
        let n = 1 << depth;
        let seeds: Vec<Vec<u8>> = (0..n).map(|_| (0..16).map(|_| r.gen()).collect()).collect();
        let refs: Vec<&[u8]> = seeds.iter().map(|s| s.as_slice()).collect();
        let set = additive_share(&fields, shape, &x, &beta, b"salt", 1, &refs);
        let secret = set.secret(&fields.base, shape);
        prop_assert_eq!(&secret.x, &x);
        prop_assert_eq!(&secret.beta, &beta);
        prop_assert_eq!(
            secret.c,
            fields
                .lift
                .neg(&mira::mpc::inner(&fields, &secret.a, &beta))
        );
        Ok(())
    })
}

/// The first MPC phase is affine: shares of (x, a) give shares of (α, z),
/// with the constant M_0 contributed by exactly one of them.
pub fn mpc_linearity(cases: u32) -> Result<(), String> {
    let strategy = (
        prop::sample::select(vec![(2u16, 3usize, 3usize), (16, 5, 2), (251, 4, 1)]),
        any::<u64>(),
    );
    run(cases, strategy, |((q, m, eta), seed)| {
        let fields = Fields::get(q, m, eta).unwrap();
        let lift = &*fields.lift;
        let mut r = rng(seed);
        let (n, k, rank) = (
            r.gen_range(1..5),
            r.gen_range(1..6),
            r.gen_range(1..=m.min(3)),
        );
        let inst = random_instance(&mut r, &fields.base, m, n, k);
        let ch = random_challenge(&mut r, &fields, n);
        let d = fields.lift_degree();
        let x1 = random_base(&mut r, &fields.base, k);
        let x2 = random_base(&mut r, &fields.base, k);
        let a1: Vec<ExtElement> = (0..rank)
            .map(|_| random_ext(&mut r, &fields.base, d))
            .collect();
        let a2: Vec<ExtElement> = (0..rank)
            .map(|_| random_ext(&mut r, &fields.base, d))
            .collect();
        let mut x = x1.clone();
        fields.base.add_assign(&mut x, &x2);
        let a: Vec<ExtElement> = a1.iter().zip(&a2).map(|(u, v)| lift.add(u, v)).collect();
        let whole = party_alpha(&fields, &inst, &x, &a, true, &ch);
        let s1 = party_alpha(&fields, &inst, &x1, &a1, true, &ch);
        let s2 = party_alpha(&fields, &inst, &x2, &a2, false, &ch);
        let alpha: Vec<ExtElement> = s1
            .alpha
            .iter()
            .zip(&s2.alpha)
            .map(|(u, v)| lift.add(u, v))
            .collect();
        prop_assert_eq!(alpha, whole.alpha);
        prop_assert_eq!(lift.add(&s1.z, &s2.z), whole.z);
        // flatten / unflatten is a bijection
        let shape = Shape::new(k, rank, &fields);
        let input = PartyInput {
            x,
            beta: (0..rank)
                .map(|_| random_ext(&mut r, &fields.base, m))
                .collect(),
            a,
            c: random_ext(&mut r, &fields.base, d),
        };
        prop_assert_eq!(PartyInput::unflatten(shape, &input.flatten(shape)), input);
        Ok(())
    })
}
