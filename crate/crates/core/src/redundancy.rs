//! Exact redundancy bookkeeping: window area minus log2 of the position count.

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Redundancy `area - sum(exp * log2(base))`, where the product of `base^exp`
/// equals the number of encoded positions exactly.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Redundancy {
    pub area: u64,
    pub factors: Vec<(u64, u64)>,
    #[serde(with = "crate::format::big")]
    pub positions: BigUint,
}

impl Redundancy {
    pub fn new(area: u64, factors: Vec<(u64, u64)>, positions: BigUint) -> Result<Redundancy> {
        let product = factors
            .iter()
            .fold(BigUint::one(), |acc, &(b, e)| acc * BigUint::from(b).pow(e as u32));
        if product != positions {
            return Err(Error::InvalidParam(format!(
                "factorization {factors:?} does not multiply to {positions}"
            )));
        }
        Ok(Redundancy {
            area,
            factors,
            positions,
        })
    }

    /// Redundancy in bits, evaluated from the factor list.
    pub fn bits(&self) -> f64 {
        self.area as f64
            - self
                .factors
                .iter()
                .map(|&(b, e)| e as f64 * (b as f64).log2())
                .sum::<f64>()
    }

    /// Redundancy in bits, evaluated from the exact position count.
    pub fn bits_from_positions(&self) -> f64 {
        self.area as f64 - log2_big(&self.positions)
    }

    pub fn formula(&self) -> String {
        let mut s = self.area.to_string();
        for &(b, e) in &self.factors {
            if e == 1 {
                s.push_str(&format!(" - log2({b})"));
            } else {
                s.push_str(&format!(" - {e}*log2({b})"));
            }
        }
        s
    }
}

/// log2 of a positive big integer to double precision.
pub fn log2_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 64 {
        return (x.iter_u64_digits().next().unwrap_or(0) as f64).log2();
    }
    let shift = bits - 64;
    let top: BigUint = x >> shift;
    let top = top.iter_u64_digits().next().unwrap_or(0) as f64;
    top.log2() + shift as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_value() {
        let r = Redundancy::new(48, vec![(4, 1), (48, 1)], BigUint::from(192u32)).unwrap();
        assert!((r.bits() - (48.0 - 192f64.log2())).abs() < 1e-12);
        assert!((r.bits() - r.bits_from_positions()).abs() < 1e-12);
        assert_eq!(r.formula(), "48 - log2(4) - log2(48)");
        assert!(Redundancy::new(48, vec![(4, 1)], BigUint::from(5u32)).is_err());
    }

    #[test]
    fn big_log() {
        let x = BigUint::from(53u32).pow(34);
        assert!((log2_big(&x) - 34.0 * 53f64.log2()).abs() < 1e-9);
    }
}
