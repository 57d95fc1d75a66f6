//! GF(2) rows packed into machine words: bit `j` of a row is column `j`.
//!
//! These mirror the table-driven routines in [`super::matrix`] and must give
//! identical results on binary input.

use super::field::Field;
use super::matrix::Matrix;
use crate::error::{Error, Result};

/// Longest binary vector the packed representation holds.
pub const MAX_BITS: usize = 64;

/// Rank of a set of packed rows; the slice is used as scratch space.
pub fn rank(rows: &mut [u64]) -> usize {
    let mut rank = 0;
    while rank < rows.len() {
        // next pivot: the lowest column set in any remaining row
        let mut pivot: Option<(usize, u64)> = None;
        for (j, &r) in rows.iter().enumerate().skip(rank) {
            if r != 0 {
                let low = r & r.wrapping_neg();
                if pivot.is_none_or(|(_, b)| low < b) {
                    pivot = Some((j, low));
                }
            }
        }
        let Some((j, bit)) = pivot else { break };
        rows.swap(rank, j);
        let p = rows[rank];
        for (t, r) in rows.iter_mut().enumerate() {
            if t != rank && *r & bit != 0 {
                *r ^= p;
            }
        }
        rank += 1;
    }
    rank
}

/// Reduced row echelon form in place; returns the rank. The first `rank`
/// entries hold the reduced rows ordered by pivot column, the rest are zero.
pub fn rref(rows: &mut [u64]) -> usize {
    let r = rank(rows);
    rows[..r].sort_unstable_by_key(|x| x.trailing_zeros());
    r
}

/// Rank of the Gram matrix `G G^T` of packed rows (at most 64 of them).
#[inline]
pub fn gram_rank(rows: &[u64]) -> usize {
    debug_assert!(rows.len() <= MAX_BITS);
    let mut gram = [0u64; MAX_BITS];
    let k = rows.len();
    for i in 0..k {
        for j in i..k {
            if (rows[i] & rows[j]).count_ones() & 1 == 1 {
                gram[i] |= 1 << j;
                gram[j] |= 1 << i;
            }
        }
    }
    rank(&mut gram[..k])
}

/// Packs a binary matrix into words.
pub fn pack(m: &Matrix) -> Result<Vec<u64>> {
    if m.field().order() != 2 {
        return Err(Error::domain("bit packing requires GF(2)"));
    }
    if m.cols() > MAX_BITS {
        return Err(Error::domain(format!(
            "bit packing supports at most {MAX_BITS} columns"
        )));
    }
    Ok(m.row_iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .fold(0u64, |acc, (j, &x)| acc | ((x as u64) << j))
        })
        .collect())
}

pub fn unpack(rows: &[u64], n: usize) -> Matrix {
    let f = Field::of_order(2).expect("GF(2) always exists");
    let mut m = Matrix::zeros(f, rows.len(), n);
    for (i, &r) in rows.iter().enumerate() {
        for j in 0..n {
            m.set(i, j, ((r >> j) & 1) as u8);
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn packed_routines_match_tables(rows in proptest::collection::vec(0u64..(1 << 9), 0..7)) {
            let m = unpack(&rows, 9);
            let table = m.rref();
            let mut packed = rows.clone();
            let r = rref(&mut packed);
            prop_assert_eq!(r, table.rank);
            prop_assert_eq!(unpack(&packed[..r], 9), table.matrix);
            prop_assert_eq!(gram_rank(&rows), m.gram().rank());
        }
    }

    #[test]
    fn pack_round_trip() {
        let f = Field::of_order(2).unwrap();
        let m = Matrix::parse(f, &["1100", "0011"]).unwrap();
        let p = pack(&m).unwrap();
        assert_eq!(p, vec![0b0011, 0b1100]);
        assert_eq!(unpack(&p, 4), m);
    }
}
