use sha3::digest::XofReader;

use super::base::BaseField;
use super::ext::ExtElement;

/// SHAKE256 rate; reading whole blocks avoids squeezing one that is never used.
const RATE: usize = 136;

/// Draws uniform field elements from an extendable-output stream.
///
/// For q = 2^b, elements take b bits of the stream LSB first (no rejection).
/// Otherwise one byte is read per attempt and values at or above
/// ⌊256/q⌋·q are rejected before reducing mod q; for q = 251 that means bytes
/// 251..=255 are skipped.
pub struct Sampler<R: XofReader> {
    xof: R,
    buf: [u8; RATE],
    pos: usize,
    bits: u32,
    nbits: u32,
}

impl<R: XofReader> Sampler<R> {
    pub fn new(xof: R) -> Self {
        Self {
            xof,
            buf: [0; RATE],
            pos: RATE,
            bits: 0,
            nbits: 0,
        }
    }

    fn byte(&mut self) -> u8 {
        if self.pos == self.buf.len() {
            self.xof.read(&mut self.buf);
            self.pos = 0;
        }
        let b = self.buf[self.pos];
        self.pos += 1;
        b
    }

    /// Byte-aligned output; any buffered partial bits are discarded.
    pub fn bytes(&mut self, out: &mut [u8]) {
        self.nbits = 0;
        for b in out {
            *b = self.byte();
        }
    }

    pub fn array<const N: usize>(&mut self) -> [u8; N] {
        let mut out = [0u8; N];
        self.bytes(&mut out);
        out
    }

    pub fn base(&mut self, f: &BaseField) -> u8 {
        if f.is_binary() {
            let w = f.element_bits();
            if self.nbits < w {
                self.bits = self.byte() as u32;
                self.nbits = 8;
            }
            let v = self.bits & ((1 << w) - 1);
            self.bits >>= w;
            self.nbits -= w;
            v as u8
        } else {
            let q = f.order() as u32;
            let bound = 256 / q * q;
            loop {
                let b = self.byte() as u32;
                if b < bound {
                    return (b % q) as u8;
                }
            }
        }
    }

    pub fn base_vec(&mut self, f: &BaseField, count: usize) -> Vec<u8> {
        (0..count).map(|_| self.base(f)).collect()
    }

    pub fn nonzero_base(&mut self, f: &BaseField) -> u8 {
        loop {
            let v = self.base(f);
            if v != 0 {
                return v;
            }
        }
    }

    /// A uniform element with `degree` F_q coefficients.
    pub fn ext(&mut self, f: &BaseField, degree: usize) -> ExtElement {
        let mut e = ExtElement::ZERO;
        for c in &mut e.coeffs_mut()[..degree] {
            *c = self.base(f);
        }
        e
    }

    pub fn ext_vec(&mut self, f: &BaseField, degree: usize, count: usize) -> Vec<ExtElement> {
        (0..count).map(|_| self.ext(f, degree)).collect()
    }

    /// Uniform integer in 0..n by rejection on the smallest covering bit width.
    pub fn below(&mut self, n: u32) -> u32 {
        assert!(n > 0);
        if n == 1 {
            return 0;
        }
        let bits = 32 - (n - 1).leading_zeros();
        let nbytes = bits.div_ceil(8);
        let mask = if bits == 32 {
            u32::MAX
        } else {
            (1u32 << bits) - 1
        };
        loop {
            let mut v = 0u32;
            for i in 0..nbytes {
                v |= (self.byte() as u32) << (8 * i);
            }
            v &= mask;
            if v < n {
                return v;
            }
        }
    }
}
