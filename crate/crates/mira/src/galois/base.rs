use crate::error::{Error, Result};

/// Reduction polynomials for the binary fields GF(2^b), bit i = coefficient of y^i.
const BINARY_MODULI: [u16; 9] = [
    0,
    0b11,
    0b111,
    0b1011,
    0b1_0011,
    0b10_0101,
    0b100_0011,
    0b1000_0011,
    0b1_0001_1101,
];

/// The prime-order or binary base field F_q, with q ≤ 256.
///
/// Elements are `u8` values in `0..q`. For prime q they are integers mod q;
/// for q = 2^b they are polynomials over GF(2) in y, bit i holding the
/// coefficient of y^i (for q = 16 the modulus is y^4 + y + 1).
#[derive(Clone)]
pub struct BaseField {
    q: u16,
    binary: bool,
    bits: u32,
    /// Product table indexed by (a << 8) | b.
    mul: Box<[u8; 65536]>,
    inv: Box<[u8]>,
}

impl std::fmt::Debug for BaseField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "F_{}", self.q)
    }
}

fn is_prime(n: u16) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

impl BaseField {
    pub fn new(q: u16) -> Result<Self> {
        if q.is_power_of_two() && (2..=256).contains(&q) {
            Ok(Self::binary(q.trailing_zeros()))
        } else if q < 256 && is_prime(q) {
            Ok(Self::prime(q))
        } else {
            Err(Error::InvalidParameters(format!(
                "q = {q} is not supported (primes below 256 and 2^b with b <= 8 are)"
            )))
        }
    }

    fn prime(p: u16) -> Self {
        let q = p as usize;
        let mut mul = vec![0u8; 65536];
        for a in 0..q {
            for b in 0..q {
                mul[a << 8 | b] = ((a * b) % q) as u8;
            }
        }
        let mut inv = vec![0u8; q];
        for a in 1..q {
            inv[a] = (1..q).find(|&b| (a * b) % q == 1).unwrap() as u8;
        }
        Self {
            q: p,
            binary: false,
            bits: 8,
            mul: mul.into_boxed_slice().try_into().unwrap(),
            inv: inv.into(),
        }
    }

    fn binary(bits: u32) -> Self {
        let q = 1usize << bits;
        let modulus = BINARY_MODULI[bits as usize] as usize;
        // y is primitive for every modulus in the table, so log/antilog tables
        // cover all nonzero elements.
        let mut exp = vec![0usize; 2 * q];
        let mut log = vec![0usize; q];
        let mut v = 1usize;
        for (i, slot) in exp.iter_mut().enumerate().take(q - 1) {
            *slot = v;
            log[v] = i;
            v <<= 1;
            if v & q != 0 {
                v ^= modulus;
            }
        }
        for i in q - 1..2 * q {
            exp[i] = exp[i - (q - 1)];
        }
        let mut mul = vec![0u8; 65536];
        let mut inv = vec![0u8; q];
        for a in 1..q {
            for b in 1..q {
                mul[a << 8 | b] = exp[log[a] + log[b]] as u8;
            }
            inv[a] = exp[(q - 1 - log[a]) % (q - 1)] as u8;
        }
        Self {
            q: q as u16,
            binary: true,
            bits,
            mul: mul.into_boxed_slice().try_into().unwrap(),
            inv: inv.into(),
        }
    }

    #[inline]
    pub fn order(&self) -> u16 {
        self.q
    }

    #[inline]
    pub fn is_binary(&self) -> bool {
        self.binary
    }

    /// Number of bits one element occupies in the packed wire format:
    /// log2 q for binary fields, a full byte otherwise.
    #[inline]
    pub fn element_bits(&self) -> u32 {
        if self.binary {
            self.bits
        } else {
            8
        }
    }

    /// Maps the integer `i` (which must be below q) to a field element.
    pub fn from_index(&self, i: usize) -> u8 {
        debug_assert!(i < self.q as usize);
        i as u8
    }

    #[inline(always)]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        if self.binary {
            a ^ b
        } else {
            let s = a as u16 + b as u16;
            if s >= self.q {
                (s - self.q) as u8
            } else {
                s as u8
            }
        }
    }

    #[inline(always)]
    pub fn neg(&self, a: u8) -> u8 {
        if self.binary || a == 0 {
            a
        } else {
            (self.q - a as u16) as u8
        }
    }

    #[inline(always)]
    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg(b))
    }

    #[inline(always)]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[(a as usize) << 8 | b as usize]
    }

    pub fn inv(&self, a: u8) -> Result<u8> {
        if a == 0 {
            Err(Error::ZeroInversion)
        } else {
            Ok(self.inv[a as usize])
        }
    }

    pub fn pow(&self, a: u8, mut e: u64) -> u8 {
        let (mut acc, mut base) = (1u8, a);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Σ a_i·b_i.
    #[inline]
    pub fn dot(&self, a: &[u8], b: &[u8]) -> u8 {
        debug_assert_eq!(a.len(), b.len());
        if self.binary {
            a.iter().zip(b).fold(0u8, |acc, (&x, &y)| {
                acc ^ self.mul[(x as usize) << 8 | y as usize]
            })
        } else {
            let s: u64 = a.iter().zip(b).map(|(&x, &y)| x as u64 * y as u64).sum();
            (s % self.q as u64) as u8
        }
    }

    /// y ← y + a·x, elementwise.
    #[inline]
    pub fn axpy(&self, y: &mut [u8], a: u8, x: &[u8]) {
        debug_assert_eq!(y.len(), x.len());
        if a == 0 {
            return;
        }
        let row: &[u8; 256] = self.mul[(a as usize) << 8..][..256].try_into().unwrap();
        if self.binary {
            for (yi, &xi) in y.iter_mut().zip(x) {
                *yi ^= row[xi as usize];
            }
        } else {
            for (yi, &xi) in y.iter_mut().zip(x) {
                *yi = self.add(*yi, row[xi as usize]);
            }
        }
    }

    /// y ← y + x, elementwise.
    #[inline]
    pub fn add_assign(&self, y: &mut [u8], x: &[u8]) {
        debug_assert_eq!(y.len(), x.len());
        if self.binary {
            for (yi, &xi) in y.iter_mut().zip(x) {
                *yi ^= xi;
            }
            return;
        }
        for (yi, &xi) in y.iter_mut().zip(x) {
            *yi = self.add(*yi, xi);
        }
    }

    /// y ← y − x, elementwise.
    #[inline]
    pub fn sub_assign(&self, y: &mut [u8], x: &[u8]) {
        debug_assert_eq!(y.len(), x.len());
        for (yi, &xi) in y.iter_mut().zip(x) {
            *yi = self.sub(*yi, xi);
        }
    }

    /// Reduces an integer accumulator produced by summing products of
    /// canonical representatives. Only meaningful for prime fields.
    #[inline(always)]
    pub(crate) fn reduce_wide(&self, v: u64) -> u8 {
        (v % self.q as u64) as u8
    }
}
