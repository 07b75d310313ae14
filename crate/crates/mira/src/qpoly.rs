//! Monic q-polynomials L(X) = X^{q^r} + Σ_{i<r} β_i X^{q^i} over F_{q^m}.

use crate::error::{Error, Result};
use crate::galois::{ExtElement, ExtField};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QPolynomial {
    beta: Vec<ExtElement>,
}

impl QPolynomial {
    /// The monic q-polynomial with the given low coefficients β_0..β_{r−1}.
    pub fn from_beta(beta: Vec<ExtElement>) -> Self {
        Self { beta }
    }

    /// q-degree r.
    pub fn q_degree(&self) -> usize {
        self.beta.len()
    }

    pub fn beta(&self) -> &[ExtElement] {
        &self.beta
    }

    pub fn into_beta(self) -> Vec<ExtElement> {
        self.beta
    }

    /// Σ β_i x^{q^i} + x^{q^r}.
    pub fn evaluate(&self, f: &ExtField, x: &ExtElement) -> ExtElement {
        let mut acc = f.frobenius_pow(x, self.beta.len());
        for (i, b) in self.beta.iter().enumerate() {
            let t = f.mul(b, &f.frobenius_pow(x, i));
            f.add_assign(&mut acc, &t);
        }
        acc
    }
}

/// Picks, in order, the elements of `elems` that are independent of the ones
/// picked before them.
pub fn extract_basis(f: &ExtField, elems: &[ExtElement]) -> Vec<ExtElement> {
    let base = f.base();
    let m = f.degree();
    // reduced rows with their pivot positions
    let mut echelon: Vec<(usize, Vec<u8>)> = Vec::new();
    let mut basis = Vec::new();
    for e in elems {
        let mut v = e.coeffs()[..m].to_vec();
        for (p, row) in &echelon {
            let c = v[*p];
            if c != 0 {
                base.axpy(&mut v, base.neg(c), row);
            }
        }
        if let Some(p) = v.iter().position(|&c| c != 0) {
            let inv = base.inv(v[p]).expect("nonzero pivot");
            let row: Vec<u8> = v.iter().map(|&c| base.mul(c, inv)).collect();
            echelon.push((p, row));
            basis.push(*e);
        }
    }
    basis
}

/// The unique monic annihilator of q-degree r of the F_q-span of `support`.
///
/// Built one basis vector at a time: with L_0(X) = X,
/// L_{i+1}(X) = L_i(X)^q − L_i(b_{i+1})^{q−1}·L_i(X).
pub fn annihilator(f: &ExtField, support: &[ExtElement], r: usize) -> Result<QPolynomial> {
    let basis = extract_basis(f, support);
    if basis.len() != r {
        return Err(Error::RankMismatch {
            expected: r,
            found: basis.len(),
        });
    }
    let q = f.base().order() as u64;
    // coefficients of X^{q^0}, …, X^{q^i}
    let mut coeffs = vec![ExtElement::one()];
    for b in &basis {
        let value = QPolynomial::from_beta(coeffs[..coeffs.len() - 1].to_vec()).evaluate(f, b);
        let t = f.pow(&value, q - 1);
        let mut next = vec![ExtElement::ZERO; coeffs.len() + 1];
        for (j, c) in coeffs.iter().enumerate() {
            next[j + 1] = f.add(&next[j + 1], &f.frobenius_pow(c, 1));
            next[j] = f.sub(&next[j], &f.mul(&t, c));
        }
        coeffs = next;
    }
    coeffs.pop();
    Ok(QPolynomial::from_beta(coeffs))
}
