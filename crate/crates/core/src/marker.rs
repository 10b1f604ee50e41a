//! Auto-cyclic vectors, the window-weight-limited check and the 1-D and 2-D markers.

use crate::bitmat::BinaryMatrix;
use crate::error::{Error, Result};

/// ceil(log2 d), with ceil(log2 1) = 0.
pub fn ceil_log2(d: usize) -> usize {
    if d <= 1 {
        0
    } else {
        (usize::BITS - (d - 1).leading_zeros()) as usize
    }
}

/// Length of the d-auto-cyclic vector: d * ceil(log2 d) + 2d.
pub fn auto_cyclic_len(d: usize) -> usize {
    d * ceil_log2(d) + 2 * d
}

/// u = 1^d u_0 u_1 ... u_L with L = ceil(log2 d) and u_i the length-d prefix of (1^(2^i) 0^(2^i))^d.
pub fn build_auto_cyclic(d: usize) -> Result<Vec<u8>> {
    if d == 0 {
        return Err(Error::InvalidParam("d must be positive".into()));
    }
    let mut u = vec![1u8; d];
    for i in 0..=ceil_log2(d) {
        let half = 1usize << i;
        u.extend((0..d).map(|t| ((t / half) % 2 == 0) as u8));
    }
    debug_assert_eq!(u.len(), auto_cyclic_len(d));
    Ok(u)
}

/// Checks d_H(u, 0^i u[0, len-i-1]) >= d for every shift i in [1, d].
pub fn is_auto_cyclic(u: &[u8], d: usize) -> bool {
    (1..=d).all(|i| {
        let shifted = std::iter::repeat(0u8).take(i.min(u.len())).chain(u.iter().copied());
        u.iter().zip(shifted).filter(|(a, b)| **a != *b).count() >= d
    })
}

/// True iff every length-k window of `v` has weight at least d.
pub fn is_wwl(v: &[u8], d: usize, k: usize) -> Result<bool> {
    if !(d < k && k <= v.len()) {
        return Err(Error::InvalidParam(format!(
            "need d < k <= |v|, got d={d}, k={k}, |v|={}",
            v.len()
        )));
    }
    let mut weight: usize = v[..k].iter().map(|&b| b as usize).sum();
    if weight < d {
        return Ok(false);
    }
    for i in k..v.len() {
        weight = weight + v[i] as usize - v[i - k] as usize;
        if weight < d {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Marker1D {
    pub d: usize,
    pub k: usize,
    pub bits: Vec<u8>,
}

impl Marker1D {
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }
}

/// p = 0^k u for the d-auto-cyclic u; requires k > len(u).
pub fn build_marker_1d(d: usize, k: usize) -> Result<Marker1D> {
    let u = build_auto_cyclic(d)?;
    if k <= u.len() {
        return Err(Error::InvalidParam(format!(
            "marker prefix k={k} must exceed the auto-cyclic length {}",
            u.len()
        )));
    }
    let mut bits = vec![0u8; k];
    bits.extend(u);
    Ok(Marker1D { d, k, bits })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Marker2D {
    pub m: usize,
    pub d: usize,
    pub ell: usize,
    pub matrix: BinaryMatrix,
}

/// 4m x 4m marker: diagonal 0^(4m - ell) u, identity d x d blocks in the top-right
/// and bottom-left corners, zeros elsewhere.
pub fn build_marker_2d(m: usize, d: usize) -> Result<Marker2D> {
    let u = build_auto_cyclic(d)?;
    let size = 4 * m;
    if size < u.len() + d {
        return Err(Error::InvalidParam(format!(
            "4m={size} cannot hold the diagonal ({}) and a {d}x{d} corner",
            u.len()
        )));
    }
    let mut matrix = BinaryMatrix::zeros(size, size);
    let offset = size - u.len();
    for (i, &b) in u.iter().enumerate() {
        matrix.set(offset + i, offset + i, b == 1);
    }
    for i in 0..d {
        matrix.set(i, size - d + i, true);
        matrix.set(size - d + i, i, true);
    }
    Ok(Marker2D {
        m,
        d,
        ell: u.len(),
        matrix,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(s: &str) -> Vec<u8> {
        s.bytes().filter(|b| !b.is_ascii_whitespace()).map(|b| b - b'0').collect()
    }

    #[test]
    fn auto_cyclic_examples() {
        assert_eq!(build_auto_cyclic(3).unwrap(), bits("111 101 110 111"));
        assert_eq!(build_auto_cyclic(1).unwrap(), bits("11"));
        assert_eq!(build_auto_cyclic(2).unwrap(), bits("11 10 11"));
        assert!(build_auto_cyclic(0).is_err());
    }

    #[test]
    fn auto_cyclic_property_d_up_to_16() {
        for d in 1..=16 {
            let u = build_auto_cyclic(d).unwrap();
            assert_eq!(u.len(), auto_cyclic_len(d));
            for i in 1..=d {
                let dist = (0..u.len())
                    .filter(|&t| u[t] != if t < i { 0 } else { u[t - i] })
                    .count();
                assert!(dist >= d, "d={d} shift={i} dist={dist}");
            }
            assert!(is_auto_cyclic(&u, d));
        }
    }

    #[test]
    fn wwl_examples() {
        assert!(is_wwl(&[1; 9], 3, 5).unwrap());
        assert!(!is_wwl(&[0; 6], 1, 6).unwrap());
        let v = bits("10010010");
        let windows_ok = v.windows(4).all(|w| w.iter().filter(|&&b| b == 1).count() >= 2);
        assert!(!windows_ok);
        assert_eq!(is_wwl(&v, 2, 4).unwrap(), windows_ok);
        assert!(is_wwl(&bits("10011001"), 2, 4).unwrap());
        assert!(is_wwl(&[1; 3], 3, 3).is_err());
        assert!(is_wwl(&[1; 3], 1, 4).is_err());
    }

    #[test]
    fn marker_1d() {
        let p = build_marker_1d(3, 13).unwrap();
        assert_eq!(p.len(), 25);
        assert!(p.bits[..13].iter().all(|&b| b == 0));
        assert_eq!(&p.bits[13..], bits("111101110111").as_slice());
        assert!(build_marker_1d(3, 12).is_err());
        assert_eq!(build_marker_1d(2, 9).unwrap().bits, bits("000000000 111011"));
    }

    #[test]
    fn marker_2d() {
        let p = build_marker_2d(4, 1).unwrap();
        let mat = &p.matrix;
        assert_eq!(mat.rows(), 16);
        let diag: Vec<u8> = (0..16).map(|i| mat.get(i, i) as u8).collect();
        assert_eq!(diag, bits("0000000000000011"));
        assert!(mat.get(0, 15) && mat.get(15, 0));
        assert_eq!(mat.count_ones(), 4);

        let p = build_marker_2d(4, 2).unwrap();
        let corner = p.matrix.submatrix(0, 14, 2, 2).unwrap();
        assert_eq!(corner, BinaryMatrix::identity(2));
        assert_eq!(corner.rank_gf2(), 2);
        assert_eq!(p.matrix.submatrix(14, 0, 2, 2).unwrap(), BinaryMatrix::identity(2));
        assert!(build_marker_2d(2, 3).is_err());
    }
}
