//! Reflected r-ary Gray code with arbitrary-precision rank and unrank.
//!
//! Words are written most significant digit first. Digit `j` runs forwards
//! when the number formed by the digits before it is even and backwards
//! otherwise, so consecutive words differ in exactly one coordinate.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct GrayCode {
    k: usize,
    alphabet: Vec<u32>,
    index: HashMap<u32, u32>,
}

impl GrayCode {
    /// Gray code of length `k` over the given ordered alphabet.
    pub fn new(k: usize, alphabet: Vec<u32>) -> Result<GrayCode> {
        if k == 0 {
            return Err(Error::InvalidParam("Gray code length must be positive".into()));
        }
        if alphabet.len() < 2 {
            return Err(Error::InvalidParam("Gray code radix must be at least 2".into()));
        }
        let index: HashMap<u32, u32> = alphabet
            .iter()
            .enumerate()
            .map(|(i, &s)| (s, i as u32))
            .collect();
        if index.len() != alphabet.len() {
            return Err(Error::InvalidParam("Gray code alphabet has repeated symbols".into()));
        }
        Ok(GrayCode { k, alphabet, index })
    }

    /// Gray code over the symbols 0..r.
    pub fn with_radix(k: usize, r: u32) -> Result<GrayCode> {
        GrayCode::new(k, (0..r).collect())
    }

    pub fn len(&self) -> usize {
        self.k
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn radix(&self) -> u32 {
        self.alphabet.len() as u32
    }

    pub fn alphabet(&self) -> &[u32] {
        &self.alphabet
    }

    /// Number of codewords, r^k.
    pub fn size(&self) -> BigUint {
        BigUint::from(self.radix()).pow(self.k as u32)
    }

    /// Digit indices (positions in the alphabet) of the i-th word.
    pub fn unrank_digits(&self, i: &BigUint) -> Result<Vec<u32>> {
        if *i >= self.size() {
            return Err(Error::OutOfRange(format!("Gray index {i} not below {}", self.size())));
        }
        let r = self.radix();
        let rb = BigUint::from(r);
        let mut base = vec![0u32; self.k];
        let mut rest = i.clone();
        for slot in base.iter_mut().rev() {
            let (qt, rm) = rest.div_rem(&rb);
            *slot = rm.to_u32().expect("remainder below radix");
            rest = qt;
        }
        let mut odd = false;
        Ok(base
            .into_iter()
            .map(|b| {
                let g = if odd { r - 1 - b } else { b };
                odd = ((odd as u32 * (r & 1)) + b) & 1 == 1;
                g
            })
            .collect())
    }

    /// The i-th word over the alphabet.
    pub fn unrank(&self, i: &BigUint) -> Result<Vec<u32>> {
        Ok(self
            .unrank_digits(i)?
            .into_iter()
            .map(|g| self.alphabet[g as usize])
            .collect())
    }

    /// Inverse of [`GrayCode::unrank_digits`].
    pub fn rank_digits(&self, digits: &[u32]) -> Result<BigUint> {
        if digits.len() != self.k {
            return Err(Error::Dimension(format!(
                "Gray word has length {}, expected {}",
                digits.len(),
                self.k
            )));
        }
        let r = self.radix();
        let mut acc = BigUint::zero();
        let mut odd = false;
        for &g in digits {
            if g >= r {
                return Err(Error::InvalidParam(format!("digit {g} outside radix {r}")));
            }
            let b = if odd { r - 1 - g } else { g };
            odd = ((odd as u32 * (r & 1)) + b) & 1 == 1;
            acc = acc * r + b;
        }
        Ok(acc)
    }

    /// Position of `word` in the code.
    pub fn rank(&self, word: &[u32]) -> Result<BigUint> {
        let digits = word
            .iter()
            .map(|s| {
                self.index
                    .get(s)
                    .copied()
                    .ok_or_else(|| Error::InvalidParam(format!("symbol {s} not in Gray alphabet")))
            })
            .collect::<Result<Vec<u32>>>()?;
        self.rank_digits(&digits)
    }

    /// Coordinate in which words `i` and `i + 1` differ.
    pub fn changed_coordinate(&self, i: &BigUint) -> Result<usize> {
        let a = self.unrank_digits(i)?;
        let b = self.unrank_digits(&(i + BigUint::one()))?;
        a.iter()
            .zip(&b)
            .position(|(x, y)| x != y)
            .ok_or_else(|| Error::OutOfRange("consecutive Gray words coincide".into()))
    }
}
