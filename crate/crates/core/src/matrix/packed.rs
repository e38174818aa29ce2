//! Bit-packed square matrices over GF(2), for the inner loops of breadth
//! first searches. Each row is one `u16` bit mask, so a product row is an
//! XOR fold over the set bits of the left factor and the commuting test
//! exits on the first differing row.

use crate::gf::Field;
use crate::matrix::Mat;

/// Largest dimension the packed representation supports.
pub const PACK_MAX: usize = 16;

/// An `n x n` matrix over GF(2), one bit per entry: bit `j` of `rows[i]` is
/// the entry at row `i`, column `j`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct PackedMat {
    n: u8,
    rows: [u16; PACK_MAX],
}

impl PackedMat {
    /// Packs a square GF(2) matrix of dimension at most [`PACK_MAX`]; any
    /// other input yields `None`.
    pub fn from_mat(m: &Mat) -> Option<PackedMat> {
        if m.field().order() != 2 || !m.is_square() || m.rows() > PACK_MAX {
            return None;
        }
        let n = m.rows();
        let mut rows = [0u16; PACK_MAX];
        for (i, row) in rows.iter_mut().enumerate().take(n) {
            for j in 0..n {
                *row |= u16::from(m.codes()[i * n + j]) << j;
            }
        }
        Some(PackedMat { n: n as u8, rows })
    }

    pub fn to_mat(&self, field: &Field) -> Mat {
        assert_eq!(field.order(), 2, "packed matrices live over GF(2)");
        let n = self.n as usize;
        let codes = (0..n * n)
            .map(|idx| ((self.rows[idx / n] >> (idx % n)) & 1) as u8)
            .collect();
        Mat::from_codes(field, n, n, codes).expect("bits are valid GF(2) codes")
    }

    pub fn dim(&self) -> usize {
        self.n as usize
    }

    #[inline]
    fn product_row(bits: u16, rows: &[u16; PACK_MAX]) -> u16 {
        let mut acc = 0u16;
        let mut rest = bits;
        while rest != 0 {
            acc ^= rows[rest.trailing_zeros() as usize];
            rest &= rest - 1;
        }
        acc
    }

    pub fn mul(&self, other: &PackedMat) -> PackedMat {
        debug_assert_eq!(self.n, other.n);
        let mut rows = [0u16; PACK_MAX];
        for i in 0..self.n as usize {
            rows[i] = Self::product_row(self.rows[i], &other.rows);
        }
        PackedMat { n: self.n, rows }
    }

    /// Row-by-row comparison of the two products, exiting early.
    pub fn commutes_with(&self, other: &PackedMat) -> bool {
        debug_assert_eq!(self.n, other.n);
        for i in 0..self.n as usize {
            if Self::product_row(self.rows[i], &other.rows)
                != Self::product_row(other.rows[i], &self.rows)
            {
                return false;
            }
        }
        true
    }
}
