//! q-ary and closed-form positioning sequences.
//!
//! Symbols of mixed alphabets are stored as integer codes: field values keep
//! their value, and the second half of the alphabet starts at the field size.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ff::{is_prime, solve_linear, Field};
use crate::gray::GrayCode;

/// GF(q) for a prime or a power of two.
pub fn field_of_order(q: u64) -> Result<Field> {
    if q >= 2 && q <= u32::MAX as u64 && is_prime(q) {
        Field::prime(q as u32)
    } else if q >= 2 && q.is_power_of_two() {
        Field::binary(q.trailing_zeros())
    } else {
        Err(Error::InvalidParam(format!("unsupported field size {q}: need a prime or a power of two")))
    }
}

/// Alphabet F_p together with a disjoint set E.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum MixedAlphabet {
    /// Only the field itself.
    Field { q: u64 },
    /// F_q together with a relabeled copy: value v of the copy has code q + v.
    Relabeled { q: u64 },
    /// F_p together with [n] x F_r: element (i, b) has code p + i r + b.
    Indexed { p: u64, n: u64, r: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Symbol {
    Field(u64),
    Copy(u64),
    Indexed(u64, u64),
}

impl MixedAlphabet {
    pub fn size(&self) -> u64 {
        match *self {
            MixedAlphabet::Field { q } => q,
            MixedAlphabet::Relabeled { q } => 2 * q,
            MixedAlphabet::Indexed { p, n, r } => p + n * r,
        }
    }

    fn base(&self) -> u64 {
        match *self {
            MixedAlphabet::Field { q } | MixedAlphabet::Relabeled { q } => q,
            MixedAlphabet::Indexed { p, .. } => p,
        }
    }

    pub fn encode(&self, s: Symbol) -> Result<u64> {
        let code = match (s, *self) {
            (Symbol::Field(v), _) if v < self.base() => v,
            (Symbol::Copy(v), MixedAlphabet::Relabeled { q }) if v < q => q + v,
            (Symbol::Indexed(i, b), MixedAlphabet::Indexed { p, n, r }) if i < n && b < r => p + i * r + b,
            _ => return Err(Error::InvalidParam(format!("{s:?} is not in {self:?}"))),
        };
        Ok(code)
    }

    pub fn decode(&self, code: u64) -> Result<Symbol> {
        if code >= self.size() {
            return Err(Error::OutOfRange(format!("symbol code {code} not below {}", self.size())));
        }
        let base = self.base();
        Ok(match *self {
            _ if code < base => Symbol::Field(code),
            MixedAlphabet::Relabeled { q } => Symbol::Copy(code - q),
            MixedAlphabet::Indexed { p, r, .. } => Symbol::Indexed((code - p) / r, (code - p) % r),
            MixedAlphabet::Field { .. } => unreachable!("codes above the field are rejected"),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QarySequence {
    pub alphabet: MixedAlphabet,
    pub symbols: Vec<u64>,
    pub cyclic: bool,
}

/// The base sequence t_0 t_1 ... t_{q^k - 1} over GF(q).
///
/// Block i lists f_i(g^0), ..., f_i(g^(q-2)) where f_i has degree at most k+1,
/// constant term 0, linear coefficient 1 and f_i(g^j) = sigma_i[j] for j < k.
pub fn bk_base(q: u64, k: usize) -> Result<Vec<u32>> {
    let field = field_of_order(q)?;
    if q < 3 || k + 3 > q as usize {
        return Err(Error::InvalidParam(format!("need 0 <= k <= q-3, got q={q}, k={k}")));
    }
    let n = q as usize - 1;
    let points: Vec<u32> = (0..n as u64).map(|j| field.gen_pow(j)).collect();
    let words: Vec<Vec<u32>> = if k == 0 {
        vec![Vec::new()]
    } else {
        let gray = GrayCode::with_radix(k, q as u32)?;
        (0..q.pow(k as u32))
            .map(|i| gray.unrank(&BigUint::from(i)))
            .collect::<Result<_>>()?
    };
    let mut lhs = vec![vec![0u32; k + 2]; k + 2];
    lhs[0][0] = 1;
    lhs[1][1] = 1;
    for j in 0..k {
        for (t, slot) in lhs[j + 2].iter_mut().enumerate() {
            *slot = field.pow(points[j], t as u64);
        }
    }
    let mut out = Vec::with_capacity(n * words.len());
    for sigma in &words {
        let mut rhs = vec![0, 1];
        rhs.extend_from_slice(sigma);
        let coeffs = solve_linear(&field, &lhs, &rhs)?;
        out.extend(points.iter().map(|&x| field.poly_eval(&coeffs, x)));
    }
    Ok(out)
}

/// T_a: odd-indexed blocks of the base sequence moved to the relabeled copy.
pub fn construct_ta(q: u64, k: usize) -> Result<QarySequence> {
    let n = q as usize - 1;
    let symbols = bk_base(q, k)?
        .chunks(n)
        .enumerate()
        .flat_map(|(i, block)| block.iter().map(move |&v| v as u64 + if i % 2 == 1 { q } else { 0 }))
        .collect();
    Ok(QarySequence {
        alphabet: MixedAlphabet::Relabeled { q },
        symbols,
        cyclic: false,
    })
}

/// T_b: positions k..n-1 of every block moved to the relabeled copy.
pub fn construct_tb(q: u64, k: usize) -> Result<QarySequence> {
    let n = q as usize - 1;
    let symbols = bk_base(q, k)?
        .chunks(n)
        .flat_map(|block| block.iter().enumerate().map(|(j, &v)| v as u64 + if j >= k { q } else { 0 }))
        .collect();
    Ok(QarySequence {
        alphabet: MixedAlphabet::Relabeled { q },
        symbols,
        cyclic: false,
    })
}

/// Cyclic sequence c_1 s_1 c_2 s_2 ... c_{p-1} s_{p-1} of strength n and distance n-1.
pub fn build_crps(n: u64, p: u64, r: u64) -> Result<QarySequence> {
    if !is_prime(p) || !is_prime(r) {
        return Err(Error::InvalidParam(format!("p={p} and r={r} must be prime")));
    }
    if p <= n || r <= n {
        return Err(Error::InvalidParam(format!("need p, r > n: n={n}, p={p}, r={r}")));
    }
    if r * r < p - 1 {
        return Err(Error::InvalidParam(format!("need r^2 >= p-1: p={p}, r={r}")));
    }
    let alphabet = MixedAlphabet::Indexed { p, n, r };
    let mut symbols = Vec::with_capacity(((p - 1) * (p - 1 + n)) as usize);
    let pairs = (0..r).flat_map(|a| (0..r).map(move |b| (a, b)));
    for (d, (a, b)) in (1..p).zip(pairs) {
        symbols.extend((1..p).map(|t| t * d % p));
        for i in 0..n {
            symbols.push(alphabet.encode(Symbol::Indexed(i, (i * a + b) % r))?);
        }
    }
    Ok(QarySequence {
        alphabet,
        symbols,
        cyclic: true,
    })
}

/// S_m: S_1 = 0001000, S_{m+1} = S_m[0, m+3] !S_m[m+4] S_m[m+2, 3m+3].
pub fn sm_sequence(m: usize) -> Result<Vec<u8>> {
    if m == 0 {
        return Err(Error::InvalidParam("m must be positive".into()));
    }
    let mut s = vec![0, 0, 0, 1, 0, 0, 0];
    for m in 1..m {
        let mut next = s[..=m + 3].to_vec();
        next.push(1 - s[m + 4]);
        next.extend_from_slice(&s[m + 2..=3 * m + 3]);
        s = next;
    }
    Ok(s)
}

/// Closed-form binary (n, d) sequence for the large-distance regimes.
pub fn exact_rps(n: usize, d: usize) -> Result<Vec<u8>> {
    if n == 0 || d == 0 || d > n {
        return Err(Error::InvalidParam(format!("need 1 <= d <= n, got n={n}, d={d}")));
    }
    let pattern = |unit: &[u8], reps: usize, tail: &[u8]| -> Vec<u8> {
        unit.iter().copied().cycle().take(unit.len() * reps).chain(tail.iter().copied()).collect()
    };
    if d > 2 * n / 3 {
        let half = n.div_ceil(2);
        let mut s = pattern(&[0, 1], half, &[]);
        s.resize(n + 1, 0);
        return Ok(s);
    }
    if n % 3 == 0 && d == 2 * n / 3 {
        return Ok(pattern(&[1, 0, 0], n / 3, &[1, 0]));
    }
    if n % 3 == 1 && d == 2 * (n / 3) {
        return sm_sequence(n / 3);
    }
    if n % 3 == 2 && d == 2 * (n / 3) + 1 {
        return Ok(pattern(&[1, 0, 0], n / 3, &[1, 0, 0, 1]));
    }
    Err(Error::InvalidParam(format!("no closed form covers (n={n}, d={d})")))
}

/// The q-ary (n, n) sequence 0 1 ... q-1 0 1 ... of length q + n - 1.
pub fn exact_rps_full_distance(q: u64, n: usize) -> Result<Vec<u64>> {
    if q < 2 || n == 0 {
        return Err(Error::InvalidParam("need q >= 2 and n >= 1".into()));
    }
    Ok((0..q).cycle().take(q as usize + n - 1).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{check_pair_appearance, min_window_distance_1d, plotkin_upper};
    use crate::rs::RsCode;

    fn bits(s: &str) -> Vec<u8> {
        s.bytes().map(|b| b - b'0').collect()
    }

    #[test]
    fn field_sizes() {
        assert_eq!(field_of_order(8).unwrap().order(), 8);
        assert_eq!(field_of_order(13).unwrap().order(), 13);
        assert!(field_of_order(6).is_err());
    }

    #[test]
    fn alphabet_codes_are_bijective() {
        for a in [
            MixedAlphabet::Relabeled { q: 8 },
            MixedAlphabet::Indexed { p: 5, n: 3, r: 5 },
            MixedAlphabet::Field { q: 7 },
        ] {
            for code in 0..a.size() {
                assert_eq!(a.encode(a.decode(code).unwrap()).unwrap(), code);
            }
            assert!(a.decode(a.size()).is_err());
        }
        assert!(MixedAlphabet::Field { q: 4 }.encode(Symbol::Copy(1)).is_err());
    }

    #[test]
    fn bk_base_k0_is_powers_of_generator() {
        let f = field_of_order(4).unwrap();
        let t = bk_base(4, 0).unwrap();
        assert_eq!(t, vec![f.gen_pow(0), f.gen_pow(1), f.gen_pow(2)]);
    }

    #[test]
    fn bk_base_prefix_and_code_membership() {
        let (q, k) = (8u64, 2usize);
        let f = field_of_order(q).unwrap();
        let t = bk_base(q, k).unwrap();
        assert_eq!(t.len(), 7 * 64);
        let gray = GrayCode::with_radix(k, q as u32).unwrap();
        let points: Vec<u32> = (0..7).map(|j| f.gen_pow(j)).collect();
        let base: Vec<u32> = points.clone();
        let rs = RsCode::new(f, points, k + 2).unwrap();
        for (i, block) in t.chunks(7).enumerate() {
            let sigma = gray.unrank(&BigUint::from(i)).unwrap();
            assert_eq!(&block[..k], sigma.as_slice());
            // block minus the identity lies in the span of x^2 .. x^(k+1)
            let shifted: Vec<u32> = block.iter().zip(&base).map(|(&v, &x)| f.sub(v, x)).collect();
            assert_eq!(rs.decode(&shifted).unwrap().errors, 0);
        }
        assert!(min_window_distance_1d(&t, 7, false).min_distance.unwrap() >= 1);
    }

    #[test]
    fn ta_alternates_halves() {
        let s = construct_ta(8, 1).unwrap();
        for (i, block) in s.symbols.chunks(7).enumerate() {
            assert!(block.iter().all(|&v| (v >= 8) == (i % 2 == 1)));
        }
        let r = min_window_distance_1d(&s.symbols, 7, false);
        assert!(r.min_distance.unwrap() >= 7 - 2);
    }

    #[test]
    fn tb_relabels_suffixes() {
        let s = construct_tb(8, 2).unwrap();
        for block in s.symbols.chunks(7) {
            assert!(block[..2].iter().all(|&v| v < 8));
            assert!(block[2..].iter().all(|&v| v >= 8));
        }
    }

    #[test]
    fn crps_small() {
        let s = build_crps(3, 5, 5).unwrap();
        assert_eq!(s.symbols.len(), 28);
        assert_eq!(s.alphabet.size(), 20);
        assert!(check_pair_appearance(&s.symbols, 3).pass);
        assert_eq!(min_window_distance_1d(&s.symbols, 3, true).min_distance, Some(2));
        assert!(build_crps(3, 5, 2).is_err());
        assert!(build_crps(3, 6, 5).is_err());
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(exact_rps(5, 4).unwrap(), bits("010101"));
        assert_eq!(exact_rps(6, 4).unwrap(), bits("10010010"));
        assert_eq!(sm_sequence(2).unwrap(), bits("0001011000"));
        assert_eq!(exact_rps(4, 2).unwrap(), bits("0001000"));
        assert!(exact_rps(6, 2).is_err());
        assert_eq!(exact_rps_full_distance(3, 4).unwrap(), vec![0, 1, 2, 0, 1, 2]);
    }

    #[test]
    fn closed_forms_verify() {
        for n in 1..=31 {
            for d in 1..=n {
                let Ok(s) = exact_rps(n, d) else { continue };
                let r = min_window_distance_1d(&s, n, false).with_target(d);
                assert!(r.pass, "n={n} d={d} got {:?}", r.min_distance);
                if let Ok(bound) = plotkin_upper(n as u64, d as u64) {
                    assert!(s.len() as u64 <= bound);
                }
            }
        }
        for q in 2..6u64 {
            for n in 1..8 {
                let s = exact_rps_full_distance(q, n).unwrap();
                assert_eq!(s.len() as u64, q + n as u64 - 1);
                assert!(min_window_distance_1d(&s, n, false).with_target(n).pass);
            }
        }
    }

    #[test]
    fn sm_family() {
        for m in 1..=10 {
            let s = sm_sequence(m).unwrap();
            assert_eq!(s.len(), 3 * m + 4);
            assert!(min_window_distance_1d(&s, 3 * m + 1, false).with_target(2 * m).pass);
            assert_eq!(s[m + 1], s[m + 4]);
            let triple = (s[m + 2], s[m + 3], 1 - s[m + 4]);
            assert!(triple == (1, 0, 1) || triple == (0, 1, 0), "m={m} {triple:?}");
        }
    }
}
