//! Dense matrices over F_q, rank, rank-bounded sampling and the
//! column ↔ F_{q^m} embedding.

use sha3::digest::XofReader;

use crate::galois::{BaseField, ExtElement, Sampler};

/// A row-major m×n matrix over F_q.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MatFq {
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

impl MatFq {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size, size);
        for i in 0..size {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<u8>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must be rows·cols");
        Self { rows, cols, data }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn entries(&self) -> &[u8] {
        &self.data
    }

    #[inline]
    pub fn entries_mut(&mut self) -> &mut [u8] {
        &mut self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u8) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<u8> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    /// self ← self + s·other.
    pub fn add_scaled(&mut self, f: &BaseField, s: u8, other: &MatFq) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        f.axpy(&mut self.data, s, &other.data);
    }

    pub fn mul(&self, f: &BaseField, other: &MatFq) -> MatFq {
        assert_eq!(self.cols, other.rows);
        let mut out = MatFq::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for t in 0..self.cols {
                let a = self.get(i, t);
                let src = &other.data[t * other.cols..(t + 1) * other.cols];
                f.axpy(&mut out.data[i * other.cols..(i + 1) * other.cols], a, src);
            }
        }
        out
    }

    /// Rank by Gaussian elimination, taking the first nonzero entry of each
    /// column as pivot.
    pub fn rank(&self, f: &BaseField) -> usize {
        let mut a = self.data.clone();
        let (rows, cols) = (self.rows, self.cols);
        let mut rank = 0;
        for col in 0..cols {
            if rank == rows {
                break;
            }
            let Some(p) = (rank..rows).find(|&i| a[i * cols + col] != 0) else {
                continue;
            };
            if p != rank {
                for j in 0..cols {
                    a.swap(p * cols + j, rank * cols + j);
                }
            }
            let inv = f.inv(a[rank * cols + col]).expect("pivot is nonzero");
            let pivot_row: Vec<u8> = a[rank * cols..(rank + 1) * cols]
                .iter()
                .map(|&v| f.mul(v, inv))
                .collect();
            for i in rank + 1..rows {
                let c = a[i * cols + col];
                if c != 0 {
                    f.axpy(&mut a[i * cols..(i + 1) * cols], f.neg(c), &pivot_row);
                }
            }
            rank += 1;
        }
        rank
    }

    /// Column j as the F_{q^m} element whose coefficient vector is that column.
    pub fn columns_to_ext(&self) -> Vec<ExtElement> {
        (0..self.cols)
            .map(|j| ExtElement::from_coeffs(&self.column(j)))
            .collect()
    }

    /// Inverse of [`columns_to_ext`](Self::columns_to_ext) for m-row matrices.
    pub fn from_ext_columns(m: usize, elems: &[ExtElement]) -> MatFq {
        let mut out = MatFq::zeros(m, elems.len());
        for (j, e) in elems.iter().enumerate() {
            for i in 0..m {
                out.set(i, j, e.coeffs()[i]);
            }
        }
        out
    }

    pub fn random<R: XofReader>(
        f: &BaseField,
        rows: usize,
        cols: usize,
        s: &mut Sampler<R>,
    ) -> MatFq {
        MatFq::from_vec(rows, cols, s.base_vec(f, rows * cols))
    }

    /// Samples E = A·B with A ∈ F_q^{m×r}, B ∈ F_q^{r×n}, redrawing until
    /// rank(E) is exactly r.
    pub fn sample_rank_exact<R: XofReader>(
        f: &BaseField,
        m: usize,
        n: usize,
        r: usize,
        s: &mut Sampler<R>,
    ) -> MatFq {
        assert!(r >= 1 && r <= m.min(n), "rank must lie in 1..=min(m, n)");
        loop {
            let a = MatFq::random(f, m, r, s);
            let b = MatFq::random(f, r, n, s);
            let e = a.mul(f, &b);
            if e.rank(f) == r {
                return e;
            }
        }
    }
}

/// Dimension of the F_q-span of `elems` (each given by `degree` coefficients).
pub fn span_dimension(f: &BaseField, degree: usize, elems: &[ExtElement]) -> usize {
    MatFq::from_ext_columns(degree, elems).rank(f)
}
