//! Bit-level wire encoding. Binary-field elements occupy log2 q bits, packed
//! least-significant bit first (for q = 16, two elements per byte with the
//! lower index in the low nibble); prime-field elements occupy one byte.
//! Byte strings are written as eight bits each, so they stay byte-aligned
//! whenever the preceding field data is.

use super::base::BaseField;
use super::ext::ExtElement;
use crate::error::{Error, Result};

#[derive(Debug, Default, Clone)]
pub struct BitWriter {
    bytes: Vec<u8>,
    bit: u32,
}

impl BitWriter {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends the low `width` bits of `v`, LSB first.
    pub fn put_bits(&mut self, v: u32, width: u32) {
        for i in 0..width {
            if self.bit == 0 {
                self.bytes.push(0);
            }
            let b = ((v >> i) & 1) as u8;
            *self.bytes.last_mut().unwrap() |= b << self.bit;
            self.bit = (self.bit + 1) % 8;
        }
    }

    pub fn put_bytes(&mut self, data: &[u8]) {
        if self.bit == 0 {
            self.bytes.extend_from_slice(data);
        } else {
            for &b in data {
                self.put_bits(b as u32, 8);
            }
        }
    }

    pub fn put_base(&mut self, f: &BaseField, v: &[u8]) {
        let w = f.element_bits();
        for &x in v {
            self.put_bits(x as u32, w);
        }
    }

    /// Writes the first `degree` coefficients of each element.
    pub fn put_ext(&mut self, f: &BaseField, degree: usize, v: &[ExtElement]) {
        for x in v {
            self.put_base(f, &x.coeffs()[..degree]);
        }
    }

    pub fn bit_len(&self) -> usize {
        self.bytes.len() * 8
            - if self.bit == 0 {
                0
            } else {
                (8 - self.bit) as usize
            }
    }

    pub fn finish(self) -> Vec<u8> {
        self.bytes
    }
}

#[derive(Debug, Clone)]
pub struct BitReader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> BitReader<'a> {
    pub fn new(bytes: &'a [u8]) -> Self {
        Self { bytes, pos: 0 }
    }

    pub fn get_bits(&mut self, width: u32) -> Result<u32> {
        if self.pos + width as usize > self.bytes.len() * 8 {
            return Err(Error::Decode("truncated input".into()));
        }
        let mut v = 0u32;
        for i in 0..width {
            let byte = self.bytes[self.pos / 8];
            v |= (((byte >> (self.pos % 8)) & 1) as u32) << i;
            self.pos += 1;
        }
        Ok(v)
    }

    pub fn get_bytes(&mut self, n: usize) -> Result<Vec<u8>> {
        if self.pos % 8 == 0 {
            let start = self.pos / 8;
            let chunk = self
                .bytes
                .get(start..start + n)
                .ok_or_else(|| Error::Decode("truncated input".into()))?;
            self.pos += 8 * n;
            Ok(chunk.to_vec())
        } else {
            (0..n).map(|_| self.get_bits(8).map(|b| b as u8)).collect()
        }
    }

    pub fn get_array<const N: usize>(&mut self) -> Result<[u8; N]> {
        let v = self.get_bytes(N)?;
        Ok(v.try_into().unwrap())
    }

    pub fn get_u16(&mut self) -> Result<u16> {
        let b = self.get_bytes(2)?;
        Ok(u16::from_le_bytes([b[0], b[1]]))
    }

    pub fn get_base(&mut self, f: &BaseField, count: usize) -> Result<Vec<u8>> {
        let w = f.element_bits();
        (0..count)
            .map(|_| {
                let v = self.get_bits(w)?;
                if v >= f.order() as u32 {
                    Err(Error::Decode(format!(
                        "value {v} is not an element of F_{}",
                        f.order()
                    )))
                } else {
                    Ok(v as u8)
                }
            })
            .collect()
    }

    pub fn get_ext(
        &mut self,
        f: &BaseField,
        degree: usize,
        count: usize,
    ) -> Result<Vec<ExtElement>> {
        (0..count)
            .map(|_| Ok(ExtElement::from_coeffs(&self.get_base(f, degree)?)))
            .collect()
    }

    /// Requires that only zero padding bits of the final byte remain.
    pub fn finish(self) -> Result<()> {
        let total = self.bytes.len() * 8;
        if total - self.pos >= 8 {
            return Err(Error::Decode(format!(
                "{} trailing bytes",
                (total - self.pos) / 8
            )));
        }
        if self.pos < total {
            let last = self.bytes[self.bytes.len() - 1];
            if last >> (self.pos % 8) != 0 {
                return Err(Error::Decode("nonzero padding bits".into()));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf16_packs_low_nibble_first() {
        let f = BaseField::new(16).unwrap();
        let mut w = BitWriter::new();
        w.put_base(&f, &[0x3, 0xa, 0x7]);
        assert_eq!(w.finish(), vec![0xa3, 0x07]);
    }

    #[test]
    fn round_trip_mixed_payload() {
        let f = BaseField::new(16).unwrap();
        let mut w = BitWriter::new();
        w.put_base(&f, &[1]);
        w.put_bytes(&[0xde, 0xad]);
        w.put_base(&f, &[2, 3, 4]);
        let bytes = w.finish();
        let mut r = BitReader::new(&bytes);
        assert_eq!(r.get_base(&f, 1).unwrap(), vec![1]);
        assert_eq!(r.get_bytes(2).unwrap(), vec![0xde, 0xad]);
        assert_eq!(r.get_base(&f, 3).unwrap(), vec![2, 3, 4]);
        r.finish().unwrap();
    }

    #[test]
    fn rejects_out_of_range_and_padding() {
        let f = BaseField::new(251).unwrap();
        assert!(BitReader::new(&[251]).get_base(&f, 1).is_err());
        let g = BaseField::new(16).unwrap();
        let mut r = BitReader::new(&[0x15]);
        r.get_base(&g, 1).unwrap();
        assert!(r.finish().is_err());
        let mut r = BitReader::new(&[1, 2]);
        r.get_bytes(1).unwrap();
        assert!(r.finish().is_err());
    }
}
