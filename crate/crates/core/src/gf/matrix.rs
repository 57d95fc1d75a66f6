use std::fmt;

use super::field::Field;
use crate::error::{Error, Result};

/// Dense row-major matrix over a small finite field.
#[derive(Clone)]
pub struct Matrix {
    field: &'static Field,
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

/// Reduced row echelon form with zero rows dropped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn new(field: &'static Field, rows: usize, cols: usize, data: Vec<u8>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::domain(format!(
                "matrix data has {} entries, expected {rows}x{cols}",
                data.len()
            )));
        }
        if let Some(bad) = data.iter().find(|&&x| x as u32 >= field.order()) {
            return Err(Error::domain(format!(
                "entry {bad} is not an element of GF({})",
                field.order()
            )));
        }
        Ok(Matrix {
            field,
            rows,
            cols,
            data,
        })
    }

    pub fn zeros(field: &'static Field, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: &'static Field, n: usize) -> Self {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Parses rows written as digit strings, e.g. `["1100", "0011"]`.
    pub fn parse(field: &'static Field, rows: &[&str]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::domain("rows have different lengths"));
            }
            for ch in r.chars() {
                let d = ch
                    .to_digit(36)
                    .ok_or_else(|| Error::domain(format!("bad matrix digit {ch:?}")))?;
                data.push(d as u8);
            }
        }
        Matrix::new(field, rows.len(), cols, data)
    }

    pub fn field(&self) -> &'static Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u8) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u8] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[u8]> {
        self.data.chunks(self.cols.max(1)).take(self.rows)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::domain("matrix dimensions do not match for product"));
        }
        let f = self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for t in 0..self.cols {
                let a = self.get(i, t);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(out.get(i, j), f.mul(a, other.get(t, j)));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// Gram matrix `M * M^T` under the Euclidean inner product.
    pub fn gram(&self) -> Matrix {
        let f = self.field;
        let mut g = Matrix::zeros(f, self.rows, self.rows);
        for i in 0..self.rows {
            for j in i..self.rows {
                let v = dot(f, self.row(i), self.row(j));
                g.set(i, j, v);
                g.set(j, i, v);
            }
        }
        g
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.cols {
            return Err(Error::domain("cannot stack matrices of different widths"));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Matrix {
            field: self.field,
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// Unique reduced row echelon form of the row space.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let pivots = rref_in_place(self.field, &mut m.data, self.rows, self.cols);
        let rank = pivots.len();
        m.data.truncate(rank * self.cols);
        m.rows = rank;
        Rref {
            matrix: m,
            rank,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        let mut data = self.data.clone();
        rref_in_place(self.field, &mut data, self.rows, self.cols).len()
    }

    /// Basis of the right null space `{x : M x^T = 0}`, as rows in RREF.
    pub fn null_space(&self) -> Matrix {
        let f = self.field;
        let Rref { matrix, pivots, .. } = self.rref();
        let n = self.cols;
        let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Matrix::zeros(f, free.len(), n);
        for (b, &fc) in free.iter().enumerate() {
            basis.set(b, fc, 1);
            for (r, &pc) in pivots.iter().enumerate() {
                basis.set(b, pc, f.neg(matrix.get(r, fc)));
            }
        }
        basis.rref().matrix
    }
}

/// Euclidean inner product of two vectors.
#[inline]
pub fn dot(f: &Field, a: &[u8], b: &[u8]) -> u8 {
    a.iter()
        .zip(b)
        .fold(0u8, |acc, (&x, &y)| f.add(acc, f.mul(x, y)))
}

/// Row-reduces a row-major `rows x cols` buffer; returns the pivot columns.
/// Nonzero rows end up first, in echelon order.
pub(crate) fn rref_in_place(f: &Field, data: &mut [u8], rows: usize, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| data[i * cols + c] != 0) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                data.swap(p * cols + j, r * cols + j);
            }
        }
        let inv = f.inv(data[r * cols + c]);
        if inv != 1 {
            for j in c..cols {
                data[r * cols + j] = f.mul(data[r * cols + j], inv);
            }
        }
        for i in 0..rows {
            if i == r {
                continue;
            }
            let factor = data[i * cols + c];
            if factor == 0 {
                continue;
            }
            let nf = f.neg(factor);
            for j in c..cols {
                let v = f.add(data[i * cols + j], f.mul(nf, data[r * cols + j]));
                data[i * cols + j] = v;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

impl PartialEq for Matrix {
    fn eq(&self, other: &Self) -> bool {
        self.field.order() == other.field.order()
            && self.rows == other.rows
            && self.cols == other.cols
            && self.data == other.data
    }
}

impl Eq for Matrix {}

impl std::hash::Hash for Matrix {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.field.order().hash(state);
        self.rows.hash(state);
        self.cols.hash(state);
        self.data.hash(state);
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Matrix[GF({}); {}x{}](",
            self.field.order(),
            self.rows,
            self.cols
        )?;
        for (i, row) in self.row_iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            for x in row {
                write!(f, "{x}")?;
            }
        }
        write!(f, ")")
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.row_iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            for x in row {
                write!(f, "{}", std::char::from_digit(*x as u32, 36).unwrap_or('?'))?;
            }
        }
        Ok(())
    }
}
