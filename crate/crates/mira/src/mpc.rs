//! The rank-check protocol Π^η, run share-wise by each simulated party or in
//! the clear by a single party holding the plaintext.

use crate::error::Result;
use crate::galois::{BaseField, BitReader, BitWriter, ExtElement, Fields};
use crate::hash::Challenge1;
use crate::keys::Instance;

/// One party's input: shares of x ∈ F_q^k, β ∈ F_{q^m}^r, a ∈ F_{q^{mη}}^r and c ∈ F_{q^{mη}}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartyInput {
    pub x: Vec<u8>,
    pub beta: Vec<ExtElement>,
    pub a: Vec<ExtElement>,
    pub c: ExtElement,
}

/// Dimensions of a [`PartyInput`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Shape {
    pub k: usize,
    pub r: usize,
    pub m: usize,
    /// m·η
    pub lift: usize,
}

impl Shape {
    pub fn new(k: usize, r: usize, fields: &Fields) -> Self {
        Self {
            k,
            r,
            m: fields.m(),
            lift: fields.lift_degree(),
        }
    }

    /// Number of F_q coefficients in a flattened input.
    pub fn flat_len(&self) -> usize {
        self.k + self.r * self.m + self.r * self.lift + self.lift
    }
}

impl PartyInput {
    pub fn zero(shape: Shape) -> Self {
        Self {
            x: vec![0; shape.k],
            beta: vec![ExtElement::ZERO; shape.r],
            a: vec![ExtElement::ZERO; shape.r],
            c: ExtElement::ZERO,
        }
    }

    /// x ‖ β ‖ a ‖ c as F_q coefficients.
    pub fn flatten(&self, shape: Shape) -> Vec<u8> {
        let mut out = Vec::with_capacity(shape.flat_len());
        out.extend_from_slice(&self.x);
        for b in &self.beta {
            out.extend_from_slice(&b.coeffs()[..shape.m]);
        }
        for a in &self.a {
            out.extend_from_slice(&a.coeffs()[..shape.lift]);
        }
        out.extend_from_slice(&self.c.coeffs()[..shape.lift]);
        out
    }

    pub fn unflatten(shape: Shape, flat: &[u8]) -> Self {
        assert_eq!(flat.len(), shape.flat_len());
        let (x, rest) = flat.split_at(shape.k);
        let (beta, rest) = rest.split_at(shape.r * shape.m);
        let (a, c) = rest.split_at(shape.r * shape.lift);
        Self {
            x: x.to_vec(),
            beta: beta.chunks(shape.m).map(ExtElement::from_coeffs).collect(),
            a: a.chunks(shape.lift).map(ExtElement::from_coeffs).collect(),
            c: ExtElement::from_coeffs(c),
        }
    }

    pub fn add_assign(&mut self, f: &BaseField, other: &PartyInput) {
        f.add_assign(&mut self.x, &other.x);
        for (s, o) in self.beta.iter_mut().zip(&other.beta) {
            f.add_assign(s.coeffs_mut(), o.coeffs());
        }
        for (s, o) in self.a.iter_mut().zip(&other.a) {
            f.add_assign(s.coeffs_mut(), o.coeffs());
        }
        f.add_assign(self.c.coeffs_mut(), other.c.coeffs());
    }

    pub fn sub_assign(&mut self, f: &BaseField, other: &PartyInput) {
        f.sub_assign(&mut self.x, &other.x);
        for (s, o) in self.beta.iter_mut().zip(&other.beta) {
            f.sub_assign(s.coeffs_mut(), o.coeffs());
        }
        for (s, o) in self.a.iter_mut().zip(&other.a) {
            f.sub_assign(s.coeffs_mut(), o.coeffs());
        }
        f.sub_assign(self.c.coeffs_mut(), other.c.coeffs());
    }

    pub fn write(&self, w: &mut BitWriter, f: &BaseField, shape: Shape) {
        w.put_base(f, &self.flatten(shape));
    }

    pub fn read(r: &mut BitReader<'_>, f: &BaseField, shape: Shape) -> Result<Self> {
        Ok(Self::unflatten(shape, &r.get_base(f, shape.flat_len())?))
    }
}

/// A party's opened values (shares of α and v).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Broadcast {
    pub alpha: Vec<ExtElement>,
    pub v: ExtElement,
}

impl Broadcast {
    pub fn write(&self, w: &mut BitWriter, fields: &Fields) {
        let d = fields.lift_degree();
        w.put_ext(&fields.base, d, &self.alpha);
        w.put_ext(&fields.base, d, std::slice::from_ref(&self.v));
    }

    pub fn add(&self, fields: &Fields, other: &Broadcast) -> Broadcast {
        let lift = &fields.lift;
        Broadcast {
            alpha: self
                .alpha
                .iter()
                .zip(&other.alpha)
                .map(|(a, b)| lift.add(a, b))
                .collect(),
            v: lift.add(&self.v, &other.v),
        }
    }
}

/// Output of the first phase: the α share plus the z share kept for phase two.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaShare {
    pub alpha: Vec<ExtElement>,
    pub z: ExtElement,
}

/// Phase one: ⟦E⟧ = [M_0] + Σ⟦x_i⟧M_i, ⟦z⟧ = −Σγ_j⟦e_j⟧^{q^r},
/// ⟦w_i⟧ = Σγ_j⟦e_j⟧^{q^i}, ⟦α⟧ = ε⟦w⟧ + ⟦a⟧.
pub fn party_alpha(
    fields: &Fields,
    inst: &Instance,
    x: &[u8],
    a: &[ExtElement],
    offset: bool,
    ch: &Challenge1,
) -> AlphaShare {
    let (ext, lift) = (&*fields.ext, &*fields.lift);
    let m = ext.degree();
    let r = a.len();
    let cols = inst.combine_columns(&fields.base, x, offset);
    let mut w = vec![ExtElement::ZERO; r + 1];
    for (j, gamma) in ch.gamma.iter().enumerate() {
        let mut e = ExtElement::from_coeffs(&cols[j * m..(j + 1) * m]);
        for (i, wi) in w.iter_mut().enumerate() {
            if i > 0 {
                e = ext.frobenius_pow(&e, 1);
            }
            let t = lift.mul_ext(gamma, &e);
            lift.add_assign(wi, &t);
        }
    }
    let z = lift.neg(&w[r]);
    let alpha = (0..r)
        .map(|i| lift.add(&lift.mul(&ch.epsilon, &w[i]), &a[i]))
        .collect();
    AlphaShare { alpha, z }
}

/// Phase two: ⟦v⟧ = ε⟦z⟧ − ⟨α, ⟦β⟧⟩ − ⟦c⟧ for the opened plaintext α.
pub fn party_v(
    fields: &Fields,
    z: &ExtElement,
    beta: &[ExtElement],
    c: &ExtElement,
    alpha: &[ExtElement],
    ch: &Challenge1,
) -> ExtElement {
    let lift = &*fields.lift;
    let mut v = lift.mul(&ch.epsilon, z);
    for (al, b) in alpha.iter().zip(beta) {
        v = lift.sub(&v, &lift.mul_ext(al, b));
    }
    lift.sub(&v, c)
}

/// Both phases for a party that already knows the plaintext α.
pub fn party_compute(
    fields: &Fields,
    inst: &Instance,
    input: &PartyInput,
    offset: bool,
    ch: &Challenge1,
    alpha_plain: &[ExtElement],
) -> Broadcast {
    let s = party_alpha(fields, inst, &input.x, &input.a, offset, ch);
    let v = party_v(fields, &s.z, &input.beta, &input.c, alpha_plain, ch);
    Broadcast { alpha: s.alpha, v }
}

/// Π^η run by one party on the plaintext inputs.
pub fn plain_check(
    fields: &Fields,
    inst: &Instance,
    input: &PartyInput,
    ch: &Challenge1,
) -> Broadcast {
    let s = party_alpha(fields, inst, &input.x, &input.a, true, ch);
    let v = party_v(fields, &s.z, &input.beta, &input.c, &s.alpha, ch);
    Broadcast { alpha: s.alpha, v }
}

/// ⟨a, β⟩ with a ∈ F_{q^{mη}}^r and β ∈ F_{q^m}^r.
pub fn inner(fields: &Fields, a: &[ExtElement], beta: &[ExtElement]) -> ExtElement {
    let lift = &*fields.lift;
    a.iter().zip(beta).fold(ExtElement::ZERO, |acc, (x, b)| {
        lift.add(&acc, &lift.mul_ext(x, b))
    })
}

/// The false-positive rate p = 2/q^{mη} − 1/q^{2mη} as (value, log2 value).
pub fn false_positive_rate(q: u16, m: usize, eta: usize) -> (f64, f64) {
    let log_qme = (m * eta) as f64 * (q as f64).log2();
    // p = 2^{1 − L}(1 − 2^{−L−1}), evaluated in log space for large L
    let log_p = 1.0 - log_qme + (-(2f64.powf(-log_qme - 1.0))).ln_1p() / std::f64::consts::LN_2;
    (2f64.powf(log_p), log_p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn false_positive_substitutions() {
        let (p, _) = false_positive_rate(2, 3, 1);
        assert!((p - 15.0 / 64.0).abs() < 1e-15);
        let (_, l) = false_positive_rate(16, 16, 1);
        assert!((l - -63.0).abs() < 1e-9);
        let (_, l) = false_positive_rate(251, 12, 1);
        assert!((l - -94.66).abs() < 0.01, "{l}");
    }
}
