use super::bits;
use super::field::Field;
use super::matrix::{dot, Matrix};
use crate::error::{Error, Result};

/// Codeword sweeps are refused beyond this many codewords.
pub const MAX_CODEWORDS: u64 = 1 << 24;

/// A linear [n, k] code, held by the RREF of a generator matrix.
///
/// Two codes are equal exactly when they are the same subspace.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Code {
    generator: Matrix,
    pivots: Vec<usize>,
}

impl std::fmt::Debug for Code {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Code[{},{}]_{}({:?})",
            self.length(),
            self.dimension(),
            self.field().order(),
            self.generator
        )
    }
}

impl Code {
    /// The row space of `m`. Dependent rows are allowed.
    pub fn from_generator(m: &Matrix) -> Self {
        let r = m.rref();
        Code {
            generator: r.matrix,
            pivots: r.pivots,
        }
    }

    /// Wraps a matrix that is already in reduced row echelon form with
    /// full row rank.
    pub fn from_rref(m: Matrix) -> Result<Self> {
        let r = m.rref();
        if r.matrix != m {
            return Err(Error::domain("matrix is not a full-rank RREF"));
        }
        Ok(Code {
            generator: r.matrix,
            pivots: r.pivots,
        })
    }

    pub fn parse(field: &'static Field, rows: &[&str]) -> Result<Self> {
        Ok(Code::from_generator(&Matrix::parse(field, rows)?))
    }

    pub fn zero(field: &'static Field, n: usize) -> Self {
        Code {
            generator: Matrix::zeros(field, 0, n),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: &'static Field, n: usize) -> Self {
        Code::from_generator(&Matrix::identity(field, n))
    }

    pub fn field(&self) -> &'static Field {
        self.generator.field()
    }

    pub fn length(&self) -> usize {
        self.generator.cols()
    }

    pub fn dimension(&self) -> usize {
        self.generator.rows()
    }

    /// Generator matrix in RREF.
    pub fn generator(&self) -> &Matrix {
        &self.generator
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// The Euclidean dual code.
    pub fn dual(&self) -> Code {
        if self.dimension() == 0 {
            return Code::full(self.field(), self.length());
        }
        Code::from_generator(&self.generator.null_space())
    }

    /// dim(C ∩ C⊥), computed as k - rank(G G^T).
    pub fn hull_dimension(&self) -> usize {
        if self.field().order() == 2 && self.length() <= bits::MAX_BITS {
            let rows = bits::pack(&self.generator).expect("binary code packs");
            return self.dimension() - bits::gram_rank(&rows);
        }
        self.dimension() - self.generator.gram().rank()
    }

    /// Basis of C ∩ C⊥ built explicitly with the Zassenhaus sum-intersection
    /// reduction on `[G | G ; H | 0]`.
    pub fn hull_basis(&self) -> Matrix {
        let f = self.field();
        let n = self.length();
        let dual = self.dual();
        let rows = self.dimension() + dual.dimension();
        let mut z = Matrix::zeros(f, rows, 2 * n);
        for (i, row) in self.generator.row_iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                z.set(i, j, x);
                z.set(i, n + j, x);
            }
        }
        for (i, row) in dual.generator.row_iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                z.set(self.dimension() + i, j, x);
            }
        }
        let r = z.rref();
        let hull_rows: Vec<u8> = r
            .matrix
            .row_iter()
            .filter(|row| row[..n].iter().all(|&x| x == 0))
            .flat_map(|row| row[n..].to_vec())
            .collect();
        let count = hull_rows.len() / n.max(1);
        Matrix::new(f, count, n, hull_rows).expect("intersection rows are field elements")
    }

    /// Hull dimension via the explicit intersection; the verification route.
    pub fn hull_dimension_by_intersection(&self) -> usize {
        self.hull_basis().rows()
    }

    pub fn is_self_orthogonal(&self) -> bool {
        self.generator.gram().is_zero()
    }

    pub fn is_lcd(&self) -> bool {
        self.hull_dimension() == 0
    }

    /// True when every codeword has even weight. Binary codes only.
    pub fn is_even(&self) -> Result<bool> {
        if self.field().order() != 2 {
            return Err(Error::domain("evenness is defined for binary codes only"));
        }
        Ok(self
            .generator
            .row_iter()
            .all(|row| row.iter().filter(|&&x| x != 0).count() % 2 == 0))
    }

    pub fn has_zero_column(&self) -> bool {
        (0..self.length()).any(|j| self.generator.row_iter().all(|row| row[j] == 0))
    }

    /// True when some codeword has weight 1; read off the RREF, where such a
    /// word must be a generator row.
    pub fn has_weight_one_word(&self) -> bool {
        self.generator
            .row_iter()
            .any(|row| row.iter().filter(|&&x| x != 0).count() == 1)
    }

    pub fn contains(&self, word: &[u8]) -> bool {
        if word.len() != self.length() {
            return false;
        }
        let dual = self.dual();
        let inside = dual
            .generator
            .row_iter()
            .all(|h| dot(self.field(), h, word) == 0);
        inside
    }

    /// Minimum Hamming weight over nonzero codewords, by a full sweep.
    /// `None` for the zero code.
    pub fn min_distance(&self) -> Result<Option<usize>> {
        let k = self.dimension() as u32;
        let q = self.field().order() as u64;
        let words = q.checked_pow(k).filter(|&w| w <= MAX_CODEWORDS);
        if words.is_none() {
            return Err(Error::GuardExceeded {
                needed: crate::qcomb::q_power(q, k as u64),
                limit: MAX_CODEWORDS.into(),
                unit: "codewords",
            });
        }
        if k == 0 {
            return Ok(None);
        }
        if q == 2 && self.length() <= bits::MAX_BITS {
            let rows = bits::pack(&self.generator)?;
            return Ok(Some(binary_min_weight(&rows)));
        }
        Ok(Some(self.sweep_min_weight()))
    }

    /// Minimum distance of the dual code; `None` when the dual is zero.
    pub fn dual_distance(&self) -> Result<Option<usize>> {
        self.dual().min_distance()
    }

    fn sweep_min_weight(&self) -> usize {
        let f = self.field();
        let k = self.dimension();
        let n = self.length();
        let q = f.order() as u8;
        let mut coeffs = vec![0u8; k];
        let mut word = vec![0u8; n];
        let mut best = n;
        loop {
            // odometer step, updating the codeword by the change in one coefficient
            let mut i = 0;
            while i < k {
                let old = coeffs[i];
                let new = if old + 1 == q { 0 } else { old + 1 };
                coeffs[i] = new;
                let delta = f.sub(new, old);
                for (w, &g) in word.iter_mut().zip(self.generator.row(i)) {
                    *w = f.add(*w, f.mul(delta, g));
                }
                if new != 0 {
                    break;
                }
                i += 1;
            }
            if i == k {
                return best;
            }
            let wt = word.iter().filter(|&&x| x != 0).count();
            best = best.min(wt);
        }
    }
}

/// Minimum weight of a nonzero binary codeword, via a Gray-code sweep.
pub(crate) fn binary_min_weight(rows: &[u64]) -> usize {
    let mut word = 0u64;
    let mut best = u32::MAX;
    for step in 1u64..(1u64 << rows.len()) {
        word ^= rows[step.trailing_zeros() as usize];
        best = best.min(word.count_ones());
    }
    best as usize
}
