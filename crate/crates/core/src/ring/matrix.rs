use std::fmt;

use super::field::Coeff;
use super::poly::{Poly, Ring};

/// Dense row-major matrix of polynomials. Zero-sized dimensions are allowed and
/// keep their shape, so blocks for empty summands compose normally.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyMatrix {
    ring: Ring,
    rows: usize,
    cols: usize,
    data: Vec<Poly>,
}

impl PolyMatrix {
    pub fn zero(ring: Ring, rows: usize, cols: usize) -> Self {
        PolyMatrix { ring, rows, cols, data: vec![ring.zero(); rows * cols] }
    }

    pub fn identity(ring: Ring, n: usize) -> Self {
        Self::scalar(ring, n, &ring.one())
    }

    pub fn scalar(ring: Ring, n: usize, p: &Poly) -> Self {
        let mut m = Self::zero(ring, n, n);
        for i in 0..n {
            m.set(i, i, p.clone());
        }
        m
    }

    pub fn from_rows(ring: Ring, rows: Vec<Vec<Poly>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        PolyMatrix { ring, rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Builds an `rows × cols` matrix from a list of columns.
    pub fn from_columns(ring: Ring, rows: usize, cols: &[Vec<Poly>]) -> Self {
        let mut m = Self::zero(ring, rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (i, p) in col.iter().enumerate() {
                m.set(i, j, p.clone());
            }
        }
        m
    }

    pub fn from_fn(ring: Ring, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Poly) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        PolyMatrix { ring, rows, cols, data }
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Poly) {
        self.data[i * self.cols + j] = p;
    }

    pub fn entries(&self) -> &[Poly] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<Poly> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row(&self, i: usize) -> Vec<Poly> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Poly::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn mul(&self, o: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.cols, o.rows, "matrix product shape mismatch: {:?} * {:?}", self.shape(), o.shape());
        let mut out = Self::zero(self.ring, self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * o.cols + j;
                    out.data[idx] = out.data[idx].add(&a.mul(b));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Poly]) -> Vec<Poly> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = self.ring.zero();
                for (k, x) in v.iter().enumerate() {
                    let a = self.get(i, k);
                    if !a.is_zero() && !x.is_zero() {
                        acc = acc.add(&a.mul(x));
                    }
                }
                acc
            })
            .collect()
    }

    fn zip(&self, o: &PolyMatrix, f: impl Fn(&Poly, &Poly) -> Poly) -> PolyMatrix {
        assert_eq!(self.shape(), o.shape(), "matrix shape mismatch");
        PolyMatrix {
            ring: self.ring,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(o.data.iter()).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn add(&self, o: &PolyMatrix) -> PolyMatrix {
        self.zip(o, Poly::add)
    }

    pub fn sub(&self, o: &PolyMatrix) -> PolyMatrix {
        self.zip(o, Poly::sub)
    }

    pub fn neg(&self) -> PolyMatrix {
        self.map(Poly::neg)
    }

    pub fn scale(&self, p: &Poly) -> PolyMatrix {
        self.map(|a| a.mul(p))
    }

    pub fn scale_coeff(&self, c: &Coeff) -> PolyMatrix {
        self.map(|a| a.scale(c))
    }

    pub fn map(&self, f: impl Fn(&Poly) -> Poly) -> PolyMatrix {
        PolyMatrix { ring: self.ring, rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> PolyMatrix {
        Self::from_fn(self.ring, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> PolyMatrix {
        Self::from_fn(self.ring, rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }

    pub fn select_cols(&self, cols: &[usize]) -> PolyMatrix {
        let rows: Vec<usize> = (0..self.rows).collect();
        self.select(&rows, cols)
    }

    pub fn select_rows(&self, rows: &[usize]) -> PolyMatrix {
        let cols: Vec<usize> = (0..self.cols).collect();
        self.select(rows, &cols)
    }

    pub fn hstack(parts: &[&PolyMatrix]) -> PolyMatrix {
        let ring = parts[0].ring;
        let rows = parts[0].rows;
        assert!(parts.iter().all(|p| p.rows == rows), "hstack row mismatch");
        let cols: usize = parts.iter().map(|p| p.cols).sum();
        let mut out = Self::zero(ring, rows, cols);
        let mut off = 0;
        for p in parts {
            for i in 0..rows {
                for j in 0..p.cols {
                    out.set(i, off + j, p.get(i, j).clone());
                }
            }
            off += p.cols;
        }
        out
    }

    pub fn vstack(parts: &[&PolyMatrix]) -> PolyMatrix {
        let ring = parts[0].ring;
        let cols = parts[0].cols;
        assert!(parts.iter().all(|p| p.cols == cols), "vstack column mismatch");
        let rows: usize = parts.iter().map(|p| p.rows).sum();
        let mut data = Vec::with_capacity(rows * cols);
        for p in parts {
            data.extend(p.data.iter().cloned());
        }
        PolyMatrix { ring, rows, cols, data }
    }

    /// Block matrix from a grid; every row of the grid must agree on heights and
    /// every column on widths.
    pub fn block(grid: &[Vec<PolyMatrix>]) -> PolyMatrix {
        let rows: Vec<PolyMatrix> = grid.iter().map(|r| Self::hstack(&r.iter().collect::<Vec<_>>())).collect();
        Self::vstack(&rows.iter().collect::<Vec<_>>())
    }

    /// Extracts block (r0..r0+nr, c0..c0+nc).
    pub fn sub_block(&self, r0: usize, nr: usize, c0: usize, nc: usize) -> PolyMatrix {
        Self::from_fn(self.ring, nr, nc, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    /// First differing entry against `o`, if any.
    pub fn first_diff(&self, o: &PolyMatrix) -> Option<(usize, usize)> {
        if self.shape() != o.shape() {
            return Some((usize::MAX, usize::MAX));
        }
        (0..self.data.len()).find(|&k| self.data[k] != o.data[k]).map(|k| (k / self.cols, k % self.cols))
    }

    /// Determinant by cofactor-free fraction-free elimination (Bareiss).
    pub fn det(&self) -> Poly {
        assert!(self.is_square());
        super::linalg::bareiss_det(self)
    }
}

impl fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|p| p.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}
