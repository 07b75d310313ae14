//! Dense univariate polynomials over a field, just enough to test
//! irreducibility (Rabin's test) when choosing the fixed moduli.

/// Minimal field interface for the polynomial routines below.
pub(crate) trait FieldOps {
    type E: Copy + PartialEq;
    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn add(&self, a: Self::E, b: Self::E) -> Self::E;
    fn sub(&self, a: Self::E, b: Self::E) -> Self::E;
    fn mul(&self, a: Self::E, b: Self::E) -> Self::E;
    /// Inverse of a nonzero element.
    fn inv_nonzero(&self, a: Self::E) -> Self::E;
    /// Order q of the base field; |F| = q^degree_over_base.
    fn base_order(&self) -> u64;
    fn degree_over_base(&self) -> usize;
}

type Poly<E> = Vec<E>;

fn trim<F: FieldOps>(f: &F, p: &mut Poly<F::E>) {
    while p.last().is_some_and(|&c| c == f.zero()) {
        p.pop();
    }
}

fn rem<F: FieldOps>(f: &F, a: &[F::E], m: &[F::E]) -> Poly<F::E> {
    let mut r = a.to_vec();
    trim(f, &mut r);
    let dm = m.len() - 1;
    let lead_inv = f.inv_nonzero(m[dm]);
    while r.len() > dm {
        let d = r.len() - 1;
        let c = f.mul(r[d], lead_inv);
        for i in 0..=dm {
            r[d - dm + i] = f.sub(r[d - dm + i], f.mul(c, m[i]));
        }
        trim(f, &mut r);
    }
    r
}

fn mul_mod<F: FieldOps>(f: &F, a: &[F::E], b: &[F::E], m: &[F::E]) -> Poly<F::E> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![f.zero(); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    rem(f, &out, m)
}

fn pow_mod<F: FieldOps>(f: &F, a: &[F::E], mut e: u64, m: &[F::E]) -> Poly<F::E> {
    let mut acc = vec![f.one()];
    let mut base = rem(f, a, m);
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(f, &acc, &base, m);
        }
        base = mul_mod(f, &base, &base, m);
        e >>= 1;
    }
    acc
}

/// a^{|F|} mod m.
fn frobenius_mod<F: FieldOps>(f: &F, a: &[F::E], m: &[F::E]) -> Poly<F::E> {
    let mut r = a.to_vec();
    for _ in 0..f.degree_over_base() {
        r = pow_mod(f, &r, f.base_order(), m);
    }
    r
}

fn gcd<F: FieldOps>(f: &F, a: &[F::E], b: &[F::E]) -> Poly<F::E> {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    trim(f, &mut a);
    trim(f, &mut b);
    while !b.is_empty() {
        let r = rem(f, &a, &b);
        a = b;
        b = r;
    }
    a
}

fn prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's irreducibility test for a monic polynomial `m` (ascending coefficients).
pub(crate) fn is_irreducible<F: FieldOps>(f: &F, m: &[F::E]) -> bool {
    let d = m.len() - 1;
    if d == 0 {
        return false;
    }
    if d == 1 {
        return true;
    }
    // X^d + c with p | d is a p-th power in characteristic p
    let q = f.base_order();
    let p = (2..=q).find(|p| q % p == 0).unwrap_or(q);
    if d as u64 % p == 0 && m[1..d].iter().all(|&c| c == f.zero()) {
        return false;
    }
    let x = vec![f.zero(), f.one()];
    // powers[i] = X^{|F|^i} mod m
    let mut powers = vec![rem(f, &x, m)];
    for i in 1..=d {
        let next = frobenius_mod(f, &powers[i - 1], m);
        powers.push(next);
    }
    let x_mod = rem(f, &x, m);
    if powers[d] != x_mod {
        return false;
    }
    prime_factors(d).into_iter().all(|p| {
        let mut t = powers[d / p].clone();
        t.resize(t.len().max(2), f.zero());
        t[1] = f.sub(t[1], f.one());
        let g = gcd(f, &t, m);
        g.len() == 1
    })
}

/// Enumerates monic degree-`degree` candidates in order of increasing weight
/// (number of nonzero non-leading coefficients), and within a weight in
/// increasing order of Σ c_i·Q^i where Q indexes `elements`. The constant term is
/// always nonzero. Returns the first polynomial accepted by `accept`.
pub(crate) fn first_by_weight<E: Copy>(
    degree: usize,
    elements: &dyn Fn(u64) -> E,
    nonzero_count: u64,
    zero: E,
    one: E,
    accept: &mut dyn FnMut(&[E]) -> bool,
) -> Option<Vec<E>> {
    // Indices into `elements` are 1..=nonzero_count for nonzero values.
    fn rec<E: Copy>(
        positions_left: usize,
        below: usize,
        coeffs: &mut Vec<E>,
        elements: &dyn Fn(u64) -> E,
        nonzero_count: u64,
        zero: E,
        accept: &mut dyn FnMut(&[E]) -> bool,
    ) -> bool {
        if positions_left == 0 {
            // constant term, ascending value
            for c in 1..=nonzero_count {
                coeffs[0] = elements(c);
                if accept(coeffs) {
                    return true;
                }
            }
            coeffs[0] = zero;
            return false;
        }
        // pick the highest remaining position first, smallest position first
        for pos in positions_left..below {
            for c in 1..=nonzero_count {
                coeffs[pos] = elements(c);
                if rec(
                    positions_left - 1,
                    pos,
                    coeffs,
                    elements,
                    nonzero_count,
                    zero,
                    accept,
                ) {
                    return true;
                }
            }
            coeffs[pos] = zero;
        }
        false
    }

    let mut coeffs = vec![zero; degree + 1];
    coeffs[degree] = one;
    for weight in 1..=degree {
        if rec(
            weight - 1,
            degree,
            &mut coeffs,
            elements,
            nonzero_count,
            zero,
            accept,
        ) {
            return Some(coeffs);
        }
    }
    None
}
