use std::sync::Arc;

use super::base::BaseField;
use super::poly::{self, FieldOps};
use crate::error::{Error, Result};

/// Largest supported extension degree (m, or m·η for the lifted field).
pub const MAX_EXT_DEGREE: usize = 32;

/// An element of F_{q^m} (or F_{q^{mη}}) as its F_q coefficient vector in
/// ascending basis order. Coefficients past the field degree are always zero,
/// so equality and hashing are field-independent.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct ExtElement {
    coeffs: [u8; MAX_EXT_DEGREE],
}

impl Default for ExtElement {
    fn default() -> Self {
        Self::ZERO
    }
}

impl std::fmt::Debug for ExtElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let len = MAX_EXT_DEGREE - self.coeffs.iter().rev().take_while(|&&c| c == 0).count();
        write!(f, "Ext{:?}", &self.coeffs[..len.max(1)])
    }
}

impl ExtElement {
    pub const ZERO: Self = Self {
        coeffs: [0; MAX_EXT_DEGREE],
    };

    pub fn one() -> Self {
        let mut e = Self::ZERO;
        e.coeffs[0] = 1;
        e
    }

    /// Builds an element from its coefficient vector. The caller guarantees the
    /// coefficients are reduced in F_q.
    pub fn from_coeffs(coeffs: &[u8]) -> Self {
        assert!(
            coeffs.len() <= MAX_EXT_DEGREE,
            "extension degree above {MAX_EXT_DEGREE}"
        );
        let mut e = Self::ZERO;
        e.coeffs[..coeffs.len()].copy_from_slice(coeffs);
        e
    }

    pub fn from_base(c: u8) -> Self {
        let mut e = Self::ZERO;
        e.coeffs[0] = c;
        e
    }

    #[inline]
    pub fn coeffs(&self) -> &[u8; MAX_EXT_DEGREE] {
        &self.coeffs
    }

    #[inline]
    pub fn coeffs_mut(&mut self) -> &mut [u8; MAX_EXT_DEGREE] {
        &mut self.coeffs
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

/// Finds the fixed modulus of F_{q^m} over F_q: the lowest-weight monic
/// irreducible polynomial of degree m, ties broken by the smallest value of
/// Σ c_i·q^i over the non-leading coefficients.
pub(crate) fn find_base_modulus(base: &BaseField, m: usize) -> Vec<u8> {
    let q = base.order() as u64;
    poly::first_by_weight(m, &|c| c as u8, q - 1, 0u8, 1u8, &mut |cand| {
        poly::is_irreducible(base, cand)
    })
    .expect("an irreducible polynomial exists in every degree")
}

impl FieldOps for BaseField {
    type E = u8;
    fn zero(&self) -> u8 {
        0
    }
    fn one(&self) -> u8 {
        1
    }
    fn add(&self, a: u8, b: u8) -> u8 {
        BaseField::add(self, a, b)
    }
    fn sub(&self, a: u8, b: u8) -> u8 {
        BaseField::sub(self, a, b)
    }
    fn mul(&self, a: u8, b: u8) -> u8 {
        BaseField::mul(self, a, b)
    }
    fn inv_nonzero(&self, a: u8) -> u8 {
        self.inv(a).expect("nonzero")
    }
    fn base_order(&self) -> u64 {
        self.order() as u64
    }
    fn degree_over_base(&self) -> usize {
        1
    }
}

/// The extension F_{q^m} = F_q[y]/(f(y)) with the polynomial basis 1, y, …, y^{m−1}.
pub struct ExtField {
    base: Arc<BaseField>,
    m: usize,
    /// Non-leading coefficients of the monic modulus f.
    modulus: Vec<u8>,
    /// −f_i, used when folding high-degree terms back down.
    reduction: Vec<u8>,
    /// frob[i] is the row-major m×m matrix of x ↦ x^{q^i}, for 0 ≤ i < m.
    frob: Vec<Vec<u8>>,
}

impl std::fmt::Debug for ExtField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "F_{}^{} mod {:?}",
            self.base.order(),
            self.m,
            self.modulus
        )
    }
}

impl ExtField {
    /// Builds F_{q^m} with the canonical modulus for (q, m).
    pub fn new(base: Arc<BaseField>, m: usize) -> Result<Self> {
        if m == 0 || m > MAX_EXT_DEGREE {
            return Err(Error::InvalidParameters(format!(
                "extension degree {m} outside 1..={MAX_EXT_DEGREE}"
            )));
        }
        let modulus = find_base_modulus(&base, m);
        Self::with_modulus(base, &modulus[..m])
    }

    /// Builds F_{q^m} for an explicit monic modulus given by its m non-leading coefficients.
    pub fn with_modulus(base: Arc<BaseField>, modulus: &[u8]) -> Result<Self> {
        let m = modulus.len();
        if m == 0 || m > MAX_EXT_DEGREE {
            return Err(Error::InvalidParameters(format!(
                "extension degree {m} outside 1..={MAX_EXT_DEGREE}"
            )));
        }
        let mut full = modulus.to_vec();
        full.push(1);
        if !poly::is_irreducible(base.as_ref(), &full) {
            return Err(Error::InvalidParameters(format!(
                "modulus {full:?} is reducible over F_{}",
                base.order()
            )));
        }
        let reduction = modulus.iter().map(|&c| base.neg(c)).collect();
        let mut field = Self {
            base,
            m,
            modulus: modulus.to_vec(),
            reduction,
            frob: Vec::new(),
        };
        field.frob = field.frobenius_tables();
        Ok(field)
    }

    fn frobenius_tables(&self) -> Vec<Vec<u8>> {
        let m = self.m;
        let q = self.base.order() as u64;
        // images of the basis under x ↦ x^q, by repeated squaring
        let mut current: Vec<ExtElement> = (0..m)
            .map(|j| {
                let mut b = ExtElement::ZERO;
                b.coeffs[j] = 1;
                b
            })
            .collect();
        let mut tables = Vec::with_capacity(m);
        for _ in 0..m {
            let mut mat = vec![0u8; m * m];
            for (col, img) in current.iter().enumerate() {
                for row in 0..m {
                    mat[row * m + col] = img.coeffs[row];
                }
            }
            tables.push(mat);
            current = current.iter().map(|b| self.pow(b, q)).collect();
        }
        tables
    }

    #[inline]
    pub fn base(&self) -> &BaseField {
        &self.base
    }

    pub fn base_arc(&self) -> &Arc<BaseField> {
        &self.base
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.m
    }

    /// The non-leading coefficients f_0..f_{m−1} of the monic modulus.
    pub fn modulus(&self) -> &[u8] {
        &self.modulus
    }

    #[inline]
    pub fn add(&self, a: &ExtElement, b: &ExtElement) -> ExtElement {
        let mut out = *a;
        self.add_assign(&mut out, b);
        out
    }

    #[inline]
    pub fn add_assign(&self, a: &mut ExtElement, b: &ExtElement) {
        self.base
            .add_assign(&mut a.coeffs[..self.m], &b.coeffs[..self.m]);
    }

    #[inline]
    pub fn sub(&self, a: &ExtElement, b: &ExtElement) -> ExtElement {
        let mut out = *a;
        self.base
            .sub_assign(&mut out.coeffs[..self.m], &b.coeffs[..self.m]);
        out
    }

    #[inline]
    pub fn neg(&self, a: &ExtElement) -> ExtElement {
        let mut out = *a;
        for c in &mut out.coeffs[..self.m] {
            *c = self.base.neg(*c);
        }
        out
    }

    /// a·s for s in F_q.
    #[inline]
    pub fn scale(&self, a: &ExtElement, s: u8) -> ExtElement {
        let mut out = ExtElement::ZERO;
        self.base
            .axpy(&mut out.coeffs[..self.m], s, &a.coeffs[..self.m]);
        out
    }

    pub fn mul(&self, a: &ExtElement, b: &ExtElement) -> ExtElement {
        let m = self.m;
        let base = &*self.base;
        let mut out = ExtElement::ZERO;
        if base.is_binary() {
            let mut acc = [0u8; 2 * MAX_EXT_DEGREE];
            for i in 0..m {
                let ai = a.coeffs[i];
                if ai != 0 {
                    base.axpy(&mut acc[i..i + m], ai, &b.coeffs[..m]);
                }
            }
            for d in (m..2 * m - 1).rev() {
                let h = acc[d];
                if h != 0 {
                    base.axpy(&mut acc[d - m..d], h, &self.reduction);
                }
            }
            out.coeffs[..m].copy_from_slice(&acc[..m]);
        } else {
            let p = base.order() as u64;
            let mut acc = [0u64; 2 * MAX_EXT_DEGREE];
            for i in 0..m {
                let ai = a.coeffs[i] as u64;
                if ai != 0 {
                    for j in 0..m {
                        acc[i + j] += ai * b.coeffs[j] as u64;
                    }
                }
            }
            for d in (m..2 * m - 1).rev() {
                let h = acc[d] % p;
                if h != 0 {
                    for i in 0..m {
                        acc[d - m + i] += h * self.reduction[i] as u64;
                    }
                }
            }
            for i in 0..m {
                out.coeffs[i] = base.reduce_wide(acc[i]);
            }
        }
        out
    }

    pub fn square(&self, a: &ExtElement) -> ExtElement {
        self.mul(a, a)
    }

    pub fn pow(&self, a: &ExtElement, mut e: u64) -> ExtElement {
        let mut acc = ExtElement::one();
        let mut b = *a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            b = self.square(&b);
            e >>= 1;
        }
        acc
    }

    /// x^{q^i}, applied as an F_q-linear map. `i` is taken modulo m.
    pub fn frobenius_pow(&self, x: &ExtElement, i: usize) -> ExtElement {
        let i = i % self.m;
        if i == 0 {
            return *x;
        }
        let m = self.m;
        let mat = &self.frob[i];
        let mut out = ExtElement::ZERO;
        for row in 0..m {
            out.coeffs[row] = self.base.dot(&mat[row * m..(row + 1) * m], &x.coeffs[..m]);
        }
        out
    }

    /// Inverse through the norm: x^{-1} = x^{r−1} · N(x)^{-1} with
    /// r = (q^m − 1)/(q − 1) and x^{r−1} = ∏_{i=1}^{m−1} x^{q^i}.
    pub fn inv(&self, x: &ExtElement) -> Result<ExtElement> {
        if x.is_zero() {
            return Err(Error::ZeroInversion);
        }
        let mut partial = ExtElement::one();
        for i in 1..self.m {
            partial = self.mul(&partial, &self.frobenius_pow(x, i));
        }
        let norm = self.mul(&partial, x);
        debug_assert!(norm.coeffs[1..].iter().all(|&c| c == 0));
        let norm_inv = self.base.inv(norm.coeffs[0])?;
        Ok(self.scale(&partial, norm_inv))
    }

    /// Element whose coefficient vector is the base-q expansion of `v`.
    pub fn from_integer(&self, mut v: u128) -> ExtElement {
        let q = self.base.order() as u128;
        let mut out = ExtElement::ZERO;
        for i in 0..self.m {
            out.coeffs[i] = (v % q) as u8;
            v /= q;
        }
        out
    }
}

impl FieldOps for ExtField {
    type E = ExtElement;
    fn zero(&self) -> ExtElement {
        ExtElement::ZERO
    }
    fn one(&self) -> ExtElement {
        ExtElement::one()
    }
    fn add(&self, a: ExtElement, b: ExtElement) -> ExtElement {
        ExtField::add(self, &a, &b)
    }
    fn sub(&self, a: ExtElement, b: ExtElement) -> ExtElement {
        ExtField::sub(self, &a, &b)
    }
    fn mul(&self, a: ExtElement, b: ExtElement) -> ExtElement {
        ExtField::mul(self, &a, &b)
    }
    fn inv_nonzero(&self, a: ExtElement) -> ExtElement {
        self.inv(&a).expect("nonzero")
    }
    fn base_order(&self) -> u64 {
        self.base.order() as u64
    }
    fn degree_over_base(&self) -> usize {
        self.m
    }
}
