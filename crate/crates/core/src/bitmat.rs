//! Dense binary matrices with word-packed rows.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl BinaryMatrix {
    pub fn zeros(rows: usize, cols: usize) -> BinaryMatrix {
        let stride = cols.div_ceil(64);
        BinaryMatrix {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> BinaryMatrix {
        let mut m = BinaryMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from rows of 0/1 bytes.
    pub fn from_rows(rows: &[Vec<u8>]) -> Result<BinaryMatrix> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("rows have different lengths".into()));
        }
        let mut m = BinaryMatrix::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            for (j, &b) in r.iter().enumerate() {
                match b {
                    0 => {}
                    1 => m.set(i, j, true),
                    _ => return Err(Error::Parse(format!("non-binary entry {b}"))),
                }
            }
        }
        Ok(m)
    }

    /// Fills a `rows x cols` matrix row-major from a flat bit vector.
    pub fn from_row_major(rows: usize, cols: usize, bits: &[u8]) -> Result<BinaryMatrix> {
        if bits.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} bits cannot fill a {rows}x{cols} matrix",
                bits.len()
            )));
        }
        let mut m = BinaryMatrix::zeros(rows, cols);
        for (idx, &b) in bits.iter().enumerate() {
            if b != 0 {
                m.set(idx / cols, idx % cols, true);
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        (self.data[r * self.stride + c / 64] >> (c % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        debug_assert!(r < self.rows && c < self.cols);
        let w = &mut self.data[r * self.stride + c / 64];
        if v {
            *w |= 1 << (c % 64);
        } else {
            *w &= !(1 << (c % 64));
        }
    }

    pub fn flip(&mut self, r: usize, c: usize) {
        let v = self.get(r, c);
        self.set(r, c, !v);
    }

    pub fn row_bits(&self, r: usize) -> Vec<u8> {
        (0..self.cols).map(|c| self.get(r, c) as u8).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        (0..self.rows).map(|r| self.row_bits(r)).collect()
    }

    /// Row-major concatenation of all entries.
    pub fn to_row_major(&self) -> Vec<u8> {
        (0..self.rows).flat_map(|r| self.row_bits(r)).collect()
    }

    pub fn count_ones(&self) -> usize {
        self.data.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn xor(&self, other: &BinaryMatrix) -> Result<BinaryMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a ^ b).collect();
        Ok(BinaryMatrix {
            data,
            ..self.clone()
        })
    }

    pub fn hamming(&self, other: &BinaryMatrix) -> Result<usize> {
        Ok(self.xor(other)?.count_ones())
    }

    /// Rank distance: GF(2) rank of the difference.
    pub fn rank_distance(&self, other: &BinaryMatrix) -> Result<usize> {
        Ok(self.xor(other)?.rank_gf2())
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Result<BinaryMatrix> {
        if r0 + rows > self.rows || c0 + cols > self.cols {
            return Err(Error::OutOfRange(format!(
                "{rows}x{cols} block at ({r0},{c0}) exceeds {}x{}",
                self.rows, self.cols
            )));
        }
        let mut m = BinaryMatrix::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                if self.get(r0 + r, c0 + c) {
                    m.set(r, c, true);
                }
            }
        }
        Ok(m)
    }

    /// The `rows x cols` block whose top-left entry is (r0, c0), wrapping around both edges.
    pub fn cyclic_submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> BinaryMatrix {
        let mut m = BinaryMatrix::zeros(rows, cols);
        for r in 0..rows {
            let sr = (r0 + r) % self.rows;
            for c in 0..cols {
                if self.get(sr, (c0 + c) % self.cols) {
                    m.set(r, c, true);
                }
            }
        }
        m
    }

    /// Cyclic shift moving row `dr` to the top and column `dc` to the left.
    pub fn rotate(&self, dr: usize, dc: usize) -> BinaryMatrix {
        self.cyclic_submatrix(dr, dc, self.rows, self.cols)
    }

    /// Copies `block` into `self` with its top-left corner at (r0, c0).
    pub fn paste(&mut self, r0: usize, c0: usize, block: &BinaryMatrix) -> Result<()> {
        if r0 + block.rows > self.rows || c0 + block.cols > self.cols {
            return Err(Error::OutOfRange("pasted block does not fit".into()));
        }
        for r in 0..block.rows {
            for c in 0..block.cols {
                self.set(r0 + r, c0 + c, block.get(r, c));
            }
        }
        Ok(())
    }

    /// Rank over GF(2) by Gaussian elimination on packed rows.
    pub fn rank_gf2(&self) -> usize {
        let mut rows: Vec<Vec<u64>> = self.data.chunks(self.stride.max(1)).map(|c| c.to_vec()).collect();
        if self.stride == 0 {
            return 0;
        }
        let mut rank = 0;
        for c in 0..self.cols {
            let (w, bit) = (c / 64, 1u64 << (c % 64));
            let Some(p) = (rank..rows.len()).find(|&i| rows[i][w] & bit != 0) else {
                continue;
            };
            rows.swap(rank, p);
            let pivot = rows[rank].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != rank && row[w] & bit != 0 {
                    for (x, y) in row.iter_mut().zip(&pivot) {
                        *x ^= y;
                    }
                }
            }
            rank += 1;
            if rank == rows.len() {
                break;
            }
        }
        rank
    }
}

impl fmt::Debug for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BinaryMatrix {}x{}", self.rows, self.cols)?;
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let line: String = (0..self.cols).map(|c| if self.get(r, c) { '1' } else { '0' }).collect();
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn det3(m: &BinaryMatrix) -> bool {
        let a = |r, c| m.get(r, c) as u8;
        let d = a(0, 0) * (a(1, 1) * a(2, 2) ^ a(1, 2) * a(2, 1))
            ^ a(0, 1) * (a(1, 0) * a(2, 2) ^ a(1, 2) * a(2, 0))
            ^ a(0, 2) * (a(1, 0) * a(2, 1) ^ a(1, 1) * a(2, 0));
        d == 1
    }

    /// Rank from minors: 3 if the determinant is nonzero, else 2 if some 2x2 minor is nonzero, etc.
    fn minor_rank3(m: &BinaryMatrix) -> usize {
        if det3(m) {
            return 3;
        }
        for r in [(0, 1), (0, 2), (1, 2)] {
            for c in [(0, 1), (0, 2), (1, 2)] {
                let g = |i, j| m.get(i, j) as u8;
                if (g(r.0, c.0) * g(r.1, c.1)) ^ (g(r.0, c.1) * g(r.1, c.0)) == 1 {
                    return 2;
                }
            }
        }
        if m.count_ones() > 0 {
            1
        } else {
            0
        }
    }

    #[test]
    fn rank_matches_minor_oracle_on_all_3x3() {
        for bits in 0u32..512 {
            let v: Vec<u8> = (0..9).map(|i| ((bits >> i) & 1) as u8).collect();
            let m = BinaryMatrix::from_row_major(3, 3, &v).unwrap();
            assert_eq!(m.rank_gf2(), minor_rank3(&m), "{m}");
        }
    }

    #[test]
    fn rank_basics() {
        assert_eq!(BinaryMatrix::zeros(4, 4).rank_gf2(), 0);
        assert_eq!(BinaryMatrix::identity(4).rank_gf2(), 4);
        assert_eq!(BinaryMatrix::identity(130).rank_gf2(), 130);
        let mut wide = BinaryMatrix::zeros(3, 200);
        wide.set(0, 150, true);
        wide.set(1, 150, true);
        wide.set(2, 3, true);
        assert_eq!(wide.rank_gf2(), 2);
    }

    #[test]
    fn rotation_and_blocks() {
        let v: Vec<u8> = (0..12).map(|i| (i % 3 == 0) as u8).collect();
        let m = BinaryMatrix::from_row_major(3, 4, &v).unwrap();
        let r = m.rotate(1, 2);
        for i in 0..3 {
            for j in 0..4 {
                assert_eq!(r.get(i, j), m.get((i + 1) % 3, (j + 2) % 4));
            }
        }
        let mut big = BinaryMatrix::zeros(5, 6);
        big.paste(2, 2, &m).unwrap();
        assert_eq!(big.submatrix(2, 2, 3, 4).unwrap(), m);
        assert!(big.paste(3, 3, &m).is_err());
        assert_eq!(m.to_row_major(), v);
    }
}
