use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::One;

use super::ext::{ExtElement, ExtField, MAX_EXT_DEGREE};
use super::poly;
use crate::error::{Error, Result};

/// F_{q^{mη}} as the tower F_{q^m}[Z]/(g(Z)) with g monic of degree η.
///
/// Elements reuse [`ExtElement`]: the F_q coefficient at flat position
/// t·m + i is coefficient i of the F_{q^m} coefficient of Z^t. For η = 1 the
/// lifted field is F_{q^m} itself and every operation delegates.
pub struct LiftField {
    ext: Arc<ExtField>,
    eta: usize,
    /// Non-leading coefficients g_0..g_{η−1} of the tower modulus.
    modulus: Vec<ExtElement>,
}

impl std::fmt::Debug for LiftField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?} lifted by {}", self.ext, self.eta)
    }
}

impl LiftField {
    pub fn new(ext: Arc<ExtField>, eta: usize) -> Result<Self> {
        let m = ext.degree();
        if eta == 0 || m * eta > MAX_EXT_DEGREE {
            return Err(Error::InvalidParameters(format!(
                "lift degree m·η = {m}·{eta} unsupported"
            )));
        }
        let modulus = if eta == 1 {
            Vec::new()
        } else {
            let q = ext.base().order() as u128;
            let count = ((0..m).fold(1u128, |acc, _| acc.saturating_mul(q)) - 1)
                .min(u64::MAX as u128) as u64;
            let f = ext.clone();
            let elements = move |c: u64| f.from_integer(c as u128);
            let mut found = poly::first_by_weight(
                eta,
                &elements,
                count,
                ExtElement::ZERO,
                ExtElement::one(),
                &mut |cand| poly::is_irreducible(ext.as_ref(), cand),
            )
            .expect("irreducible tower polynomial exists");
            found.pop();
            found
        };
        Ok(Self { ext, eta, modulus })
    }

    #[inline]
    pub fn ext(&self) -> &ExtField {
        &self.ext
    }

    #[inline]
    pub fn eta(&self) -> usize {
        self.eta
    }

    /// Total degree m·η over F_q.
    #[inline]
    pub fn degree(&self) -> usize {
        self.ext.degree() * self.eta
    }

    pub fn tower_modulus(&self) -> &[ExtElement] {
        &self.modulus
    }

    fn limb(&self, a: &ExtElement, t: usize) -> ExtElement {
        let m = self.ext.degree();
        ExtElement::from_coeffs(&a.coeffs()[t * m..(t + 1) * m])
    }

    fn set_limb(&self, a: &mut ExtElement, t: usize, v: &ExtElement) {
        let m = self.ext.degree();
        a.coeffs_mut()[t * m..(t + 1) * m].copy_from_slice(&v.coeffs()[..m]);
    }

    /// Embeds x ∈ F_{q^m} as the constant Z^0 coefficient.
    #[inline]
    pub fn embed(&self, x: &ExtElement) -> ExtElement {
        *x
    }

    #[inline]
    pub fn add(&self, a: &ExtElement, b: &ExtElement) -> ExtElement {
        let mut out = *a;
        self.add_assign(&mut out, b);
        out
    }

    #[inline]
    pub fn add_assign(&self, a: &mut ExtElement, b: &ExtElement) {
        let d = self.degree();
        self.ext
            .base()
            .add_assign(&mut a.coeffs_mut()[..d], &b.coeffs()[..d]);
    }

    #[inline]
    pub fn sub(&self, a: &ExtElement, b: &ExtElement) -> ExtElement {
        let d = self.degree();
        let mut out = *a;
        self.ext
            .base()
            .sub_assign(&mut out.coeffs_mut()[..d], &b.coeffs()[..d]);
        out
    }

    #[inline]
    pub fn neg(&self, a: &ExtElement) -> ExtElement {
        self.sub(&ExtElement::ZERO, a)
    }

    /// a·s for s ∈ F_q.
    pub fn scale(&self, a: &ExtElement, s: u8) -> ExtElement {
        let d = self.degree();
        let mut out = ExtElement::ZERO;
        self.ext
            .base()
            .axpy(&mut out.coeffs_mut()[..d], s, &a.coeffs()[..d]);
        out
    }

    /// a·s for s ∈ F_{q^m}.
    pub fn mul_ext(&self, a: &ExtElement, s: &ExtElement) -> ExtElement {
        if self.eta == 1 {
            return self.ext.mul(a, s);
        }
        let mut out = ExtElement::ZERO;
        for t in 0..self.eta {
            let v = self.ext.mul(&self.limb(a, t), s);
            self.set_limb(&mut out, t, &v);
        }
        out
    }

    pub fn mul(&self, a: &ExtElement, b: &ExtElement) -> ExtElement {
        if self.eta == 1 {
            return self.ext.mul(a, b);
        }
        let eta = self.eta;
        let f = &*self.ext;
        let al: Vec<_> = (0..eta).map(|t| self.limb(a, t)).collect();
        let bl: Vec<_> = (0..eta).map(|t| self.limb(b, t)).collect();
        let mut acc = vec![ExtElement::ZERO; 2 * eta - 1];
        for i in 0..eta {
            for j in 0..eta {
                let p = f.mul(&al[i], &bl[j]);
                f.add_assign(&mut acc[i + j], &p);
            }
        }
        for d in (eta..2 * eta - 1).rev() {
            let h = acc[d];
            for i in 0..eta {
                let p = f.mul(&h, &self.modulus[i]);
                acc[d - eta + i] = f.sub(&acc[d - eta + i], &p);
            }
        }
        let mut out = ExtElement::ZERO;
        for (t, v) in acc.iter().take(eta).enumerate() {
            self.set_limb(&mut out, t, v);
        }
        out
    }

    pub fn pow_big(&self, a: &ExtElement, e: &BigUint) -> ExtElement {
        let mut acc = ExtElement::one();
        for i in (0..e.bits()).rev() {
            acc = self.mul(&acc, &acc);
            if e.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    pub fn inv(&self, a: &ExtElement) -> Result<ExtElement> {
        if self.eta == 1 {
            return self.ext.inv(a);
        }
        if a.is_zero() {
            return Err(Error::ZeroInversion);
        }
        let order = BigUint::from(self.ext.base().order()).pow(self.degree() as u32);
        Ok(self.pow_big(a, &(order - BigUint::one() - BigUint::one())))
    }

    pub fn from_integer(&self, mut v: u128) -> ExtElement {
        let q = self.ext.base().order() as u128;
        let mut out = ExtElement::ZERO;
        for i in 0..self.degree() {
            out.coeffs_mut()[i] = (v % q) as u8;
            v /= q;
        }
        out
    }
}
