//! Gabidulin codes over GF(2^m) viewed as m x m binary matrices.
//!
//! A message (f_0, ..., f_{k-1}) defines the linearized polynomial
//! f(x) = sum f_i x^(2^i). Row `i` of the codeword matrix holds the bits of
//! f(x^i) and column `j` holds bit `j`.

pub use crate::bitmat::BinaryMatrix;
use crate::error::{Error, Result};
use crate::ff::Field;

#[derive(Debug, Clone)]
pub struct Gabidulin {
    field: Field,
    m: usize,
    d: usize,
}

impl Gabidulin {
    pub fn new(m: usize, d: usize) -> Result<Gabidulin> {
        if d == 0 || d > m {
            return Err(Error::InvalidParam(format!("rank distance must lie in [1, {m}], got {d}")));
        }
        Ok(Gabidulin {
            field: Field::binary(m as u32)?,
            m,
            d,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Dimension over GF(2^m).
    pub fn k(&self) -> usize {
        self.m - self.d + 1
    }

    /// Dimension over GF(2).
    pub fn binary_dimension(&self) -> usize {
        self.m * self.k()
    }

    pub fn encode(&self, message: &[u32]) -> Result<BinaryMatrix> {
        if message.len() != self.k() {
            return Err(Error::Dimension(format!(
                "message has {} symbols, expected {}",
                message.len(),
                self.k()
            )));
        }
        if let Some(s) = message.iter().find(|&&s| !self.field.contains(s)) {
            return Err(Error::InvalidParam(format!("symbol {s} outside GF(2^{})", self.m)));
        }
        let f = &self.field;
        let mut out = BinaryMatrix::zeros(self.m, self.m);
        for i in 0..self.m {
            let beta = 1u32 << i;
            let mut frob = beta;
            let mut value = 0;
            for &coef in message {
                value = f.add(value, f.mul(coef, frob));
                frob = f.mul(frob, frob);
            }
            for j in 0..self.m {
                out.set(i, j, (value >> j) & 1 == 1);
            }
        }
        Ok(out)
    }

    /// Codeword for the message whose base-2^m little-endian digits spell `index`.
    pub fn encode_index(&self, index: u64) -> Result<BinaryMatrix> {
        let mut rest = index;
        let mut msg = Vec::with_capacity(self.k());
        for _ in 0..self.k() {
            msg.push((rest & ((1u64 << self.m) - 1)) as u32);
            rest >>= self.m;
        }
        if rest != 0 {
            return Err(Error::OutOfRange(format!("index {index} exceeds the code size")));
        }
        self.encode(&msg)
    }
}
