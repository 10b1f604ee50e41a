//! Binary robust positioning sequences built from Gray-coded Reed-Solomon blocks.
//!
//! The sequence is S = p s_0 p s_1 ... p s_{M-1}. The marker p = 0^k u
//! reveals the offset of a window inside its block. Each s_i is the binary
//! image of the Reed-Solomon codeword of the i-th Gray word, with a run of
//! d ones in front of every check symbol. Windows are produced lazily, so
//! positions are big integers.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ff::Field;
use crate::gray::GrayCode;
use crate::marker::{auto_cyclic_len, build_marker_1d};
use crate::redundancy::Redundancy;
use crate::rs::RsCode;

/// Largest sequence length [`Seq1D::materialize`] will produce.
pub const MATERIALIZE_CAP: u64 = 1 << 24;

const MAX_M: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params1D {
    pub d: usize,
    pub m: usize,
    pub k: usize,
    pub ell: usize,
    pub ell_p: usize,
    pub n_prime: usize,
    pub q: u64,
    pub modulus: u64,
    pub r: usize,
    pub n_r: usize,
    pub k_r: usize,
    pub n: usize,
    #[serde(rename = "M", with = "crate::format::big")]
    pub big_m: BigUint,
    #[serde(rename = "N", with = "crate::format::big")]
    pub big_n: BigUint,
    /// Field elements whose m-bit image has weight at least d, in increasing order.
    #[serde(rename = "X")]
    pub x_set: Vec<u32>,
}

/// Length formula n = ell_p + m n_R + (2d + 2) d.
pub fn length_1d(d: usize, m: usize, n_r: usize) -> usize {
    3 * m + auto_cyclic_len(d) + m * n_r + (2 * d + 2) * d
}

pub fn solve_params_1d(d: usize, m: usize, n_r: usize) -> Result<Params1D> {
    if d == 0 {
        return Err(Error::InvalidParam("d must be positive".into()));
    }
    if m < d {
        return Err(Error::Infeasible(format!("m >= d violated: m={m}, d={d}")));
    }
    if m > MAX_M {
        return Err(Error::Infeasible(format!("m={m} exceeds the supported maximum {MAX_M}")));
    }
    let q = 1u64 << m;
    let k = 3 * m;
    let ell = auto_cyclic_len(d);
    if ell >= k {
        return Err(Error::Infeasible(format!("ell < k violated: ell={ell}, k={k}")));
    }
    if (n_r as u64) > q {
        return Err(Error::Infeasible(format!("n_R <= q violated: n_R={n_r}, q={q}")));
    }
    if n_r < 2 * d + 3 {
        return Err(Error::Infeasible(format!(
            "k_R >= 1 violated: n_R={n_r} needs to be at least 2d+3={}",
            2 * d + 3
        )));
    }
    let x_set: Vec<u32> = (0..q as u32).filter(|v| v.count_ones() as usize >= d).collect();
    let r = x_set.len();
    if r < 2 {
        return Err(Error::Infeasible(format!("r >= 2 violated: r={r}")));
    }
    let k_r = n_r - 2 * d - 2;
    let ell_p = k + ell;
    let n = length_1d(d, m, n_r);
    let n_prime = n - ell_p;
    debug_assert_eq!(n_prime, m * k_r + (n_r - k_r) * (m + d));
    let big_m = BigUint::from(r).pow(k_r as u32);
    let big_n = &big_m * n;
    let field = Field::binary(m as u32)?;
    Ok(Params1D {
        d,
        m,
        k,
        ell,
        ell_p,
        n_prime,
        q,
        modulus: field.modulus,
        r,
        n_r,
        k_r,
        n,
        big_m,
        big_n,
        x_set,
    })
}

/// Result of [`solve_params_for_n`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParamSearch {
    Exact(Params1D),
    Nearest(Params1D),
}

impl ParamSearch {
    pub fn params(&self) -> &Params1D {
        match self {
            ParamSearch::Exact(p) | ParamSearch::Nearest(p) => p,
        }
    }
}

/// Finds parameters of window length exactly `n`, or the feasible length closest to it.
pub fn solve_params_for_n(n: usize, d: usize) -> Result<ParamSearch> {
    if n == 0 || d == 0 || d > n {
        return Err(Error::Infeasible(format!("no feasible parameters for n={n}, d={d}")));
    }
    let log_n = (usize::BITS - n.leading_zeros()) as f64;
    let m_hi = ((2.0 * (1.5 * log_n).ceil()) as usize).clamp(d, MAX_M);
    let mut shapes = Vec::new();
    for m in d..=m_hi {
        let r: usize = (d..=m).map(|i| binomial(m, i)).sum();
        let (lo, hi) = (2 * d + 3, 1usize << m);
        if r < 2 || lo > hi || auto_cyclic_len(d) >= 3 * m {
            continue;
        }
        let guess = n.saturating_sub(length_1d(d, m, 0)) / m;
        for n_r in [guess, guess + 1] {
            let n_r = n_r.clamp(lo, hi);
            shapes.push((length_1d(d, m, n_r), m, n_r));
        }
    }
    shapes.sort_unstable();
    shapes.dedup();
    let exact: Vec<Params1D> = shapes
        .iter()
        .filter(|s| s.0 == n)
        .map(|&(_, m, n_r)| solve_params_1d(d, m, n_r))
        .collect::<Result<_>>()?;
    let exact = exact
        .into_iter()
        .reduce(|best, p| if p.big_m > best.big_m { p } else { best });
    let nearest = match shapes.iter().map(|s| (s.0.abs_diff(n), s.0)).min() {
        Some(key) if exact.is_none() => shapes
            .iter()
            .filter(|s| (s.0.abs_diff(n), s.0) == key)
            .map(|&(_, m, n_r)| solve_params_1d(d, m, n_r))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .reduce(|best, p| if p.big_m > best.big_m { p } else { best })
            .map(|p| (key.0, p)),
        _ => None,
    };
    match (exact, nearest) {
        (Some(p), _) => Ok(ParamSearch::Exact(p)),
        (None, Some((_, p))) => Ok(ParamSearch::Nearest(p)),
        (None, None) => Err(Error::Infeasible(format!("no feasible parameters for n={n}, d={d}"))),
    }
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocateResult1D {
    #[serde(with = "crate::format::big")]
    pub position: BigUint,
    #[serde(with = "crate::format::big")]
    pub block: BigUint,
    pub offset: usize,
    pub errors: usize,
}

/// A Construction-1A sequence with its derived code objects.
#[derive(Debug, Clone)]
pub struct Seq1D {
    params: Params1D,
    rs: RsCode,
    gray: GrayCode,
    marker: Vec<u8>,
}

impl Seq1D {
    pub fn new(d: usize, m: usize, n_r: usize) -> Result<Seq1D> {
        Seq1D::from_params(solve_params_1d(d, m, n_r)?)
    }

    /// Rebuilds the code objects, checking the parameters against a fresh solve.
    pub fn from_params(params: Params1D) -> Result<Seq1D> {
        let fresh = solve_params_1d(params.d, params.m, params.n_r)?;
        if fresh != params {
            return Err(Error::InvalidParam("parameters are inconsistent with (d, m, n_R)".into()));
        }
        let field = Field::binary(params.m as u32)?;
        let rs = RsCode::with_value_points(field, params.n_r, params.k_r)?;
        let gray = GrayCode::new(params.k_r, params.x_set.clone())?;
        let marker = build_marker_1d(params.d, params.k)?.bits;
        Ok(Seq1D {
            params,
            rs,
            gray,
            marker,
        })
    }

    pub fn params(&self) -> &Params1D {
        &self.params
    }

    pub fn marker(&self) -> &[u8] {
        &self.marker
    }

    pub fn rs(&self) -> &RsCode {
        &self.rs
    }

    pub fn gray(&self) -> &GrayCode {
        &self.gray
    }

    /// Window length n.
    pub fn n(&self) -> usize {
        self.params.n
    }

    /// Number of errors the locator tolerates.
    pub fn radius(&self) -> usize {
        (self.params.d - 1) / 2
    }

    /// Total sequence length N.
    pub fn total_len(&self) -> &BigUint {
        &self.params.big_n
    }

    /// Number of valid window positions, N - n + 1.
    pub fn num_positions(&self) -> BigUint {
        &self.params.big_n - self.params.n + 1u32
    }

    fn push_symbol(&self, out: &mut Vec<u8>, v: u32) {
        let m = self.params.m;
        out.extend((0..m).rev().map(|b| ((v >> b) & 1) as u8));
    }

    /// Reed-Solomon codeword of the i-th block.
    pub fn codeword(&self, i: &BigUint) -> Result<Vec<u32>> {
        if *i >= self.params.big_m {
            return Err(Error::OutOfRange(format!("block {i} not below M={}", self.params.big_m)));
        }
        self.rs.encode(&self.gray.unrank(i)?)
    }

    /// p s_i, the i-th block of length n.
    pub fn build_block(&self, i: &BigUint) -> Result<Vec<u8>> {
        let c = self.codeword(i)?;
        let p = &self.params;
        let mut out = Vec::with_capacity(p.n);
        out.extend_from_slice(&self.marker);
        for &sym in &c[..p.k_r] {
            self.push_symbol(&mut out, sym);
        }
        for &sym in &c[p.k_r..] {
            out.extend(std::iter::repeat(1u8).take(p.d));
            self.push_symbol(&mut out, sym);
        }
        debug_assert_eq!(out.len(), p.n);
        Ok(out)
    }

    /// S[pos, pos + n - 1].
    pub fn window_at(&self, pos: &BigUint) -> Result<Vec<u8>> {
        let n = self.params.n;
        if pos + n > self.params.big_n {
            return Err(Error::OutOfRange(format!(
                "window at {pos} overruns the sequence of length {}",
                self.params.big_n
            )));
        }
        let (a, off) = pos.div_rem(&BigUint::from(n));
        let off = off.to_usize().expect("offset below n");
        let first = self.build_block(&a)?;
        if off == 0 {
            return Ok(first);
        }
        let second = self.build_block(&(a + 1u32))?;
        let mut out = first[off..].to_vec();
        out.extend_from_slice(&second[..off]);
        Ok(out)
    }

    /// The whole sequence, when its length is at most [`MATERIALIZE_CAP`].
    pub fn materialize(&self) -> Result<Vec<u8>> {
        let total = self.params.big_n.to_u64().filter(|&t| t <= MATERIALIZE_CAP).ok_or_else(|| {
            Error::OutOfRange(format!(
                "sequence length {} exceeds the materialization cap {MATERIALIZE_CAP}",
                self.params.big_n
            ))
        })?;
        let mut out = Vec::with_capacity(total as usize);
        let mut i = BigUint::zero();
        while i < self.params.big_m {
            out.extend(self.build_block(&i)?);
            i += 1u32;
        }
        Ok(out)
    }

    /// Distance from the cyclic length-ell_p subword of `w` starting at `start` to the marker.
    fn marker_distance(&self, w: &[u8], start: usize) -> usize {
        let n = w.len();
        self.marker
            .iter()
            .enumerate()
            .filter(|&(t, &b)| w[(start + t) % n] != b)
            .count()
    }

    /// Locates a window with at most floor((d-1)/2) bit errors.
    pub fn locate(&self, w: &[u8]) -> Result<LocateResult1D> {
        let p = &self.params;
        let n = p.n;
        if w.len() != n {
            return Err(Error::Dimension(format!("window has {} bits, expected {n}", w.len())));
        }
        if w.iter().any(|&b| b > 1) {
            return Err(Error::InvalidParam("window must be binary".into()));
        }
        let thr = self.radius();
        let cands: Vec<usize> = (0..n).filter(|&i| self.marker_distance(w, i) <= thr).collect();
        let i_hat = match cands.as_slice() {
            [] => return Err(Error::DecodeFailure("no marker within the error radius".into())),
            [i] => *i,
            [a, b, ..] => return Err(Error::Ambiguous(format!("marker offsets {a} and {b}"))),
        };
        let i_bar = (n - i_hat) % n;
        let v: Vec<u8> = w[i_hat..].iter().chain(&w[..i_hat]).copied().collect();
        let data = &v[p.ell_p..];
        let read = |start: usize| data[start..start + p.m].iter().fold(0u32, |acc, &b| (acc << 1) | b as u32);
        let mut received = Vec::with_capacity(p.n_r);
        for j in 0..p.k_r {
            received.push(read(p.m * j));
        }
        for j in 0..p.n_r - p.k_r {
            received.push(read(p.m * p.k_r + (p.m + p.d) * j + p.d));
        }

        let full_end = p.ell_p + p.m * p.k_r;
        let mid_end = full_end + (p.d + 1) * (p.m + p.d);
        let (message, next_block) = if i_bar < full_end {
            (self.rs.decode(&received)?.codeword[..p.k_r].to_vec(), false)
        } else if i_bar < mid_end {
            let keep: Vec<usize> = (0..p.k_r).chain(p.k_r + p.d + 1..p.n_r).collect();
            let sub: Vec<u32> = keep.iter().map(|&c| received[c]).collect();
            (self.rs.decode_shortened(&keep, &sub)?.codeword[..p.k_r].to_vec(), false)
        } else {
            let keep: Vec<usize> = (0..p.k_r + p.d + 1).collect();
            (self.rs.decode_shortened(&keep, &received[..keep.len()])?.codeword[..p.k_r].to_vec(), true)
        };
        let mut block = self.gray.rank(&message).map_err(|_| {
            Error::DecodeFailure("decoded message is not a Gray word".into())
        })?;
        if next_block {
            if block.is_zero() {
                return Err(Error::DecodeFailure("decoded block precedes the sequence".into()));
            }
            block -= BigUint::one();
        }
        let position = &block * n + i_bar;
        if position.clone() + n > p.big_n {
            return Err(Error::DecodeFailure(format!("decoded position {position} is out of range")));
        }
        let errors = self
            .window_at(&position)?
            .iter()
            .zip(w)
            .filter(|(a, b)| a != b)
            .count();
        if errors > thr {
            return Err(Error::DecodeFailure(format!(
                "window at decoded position {position} differs in {errors} bits"
            )));
        }
        Ok(LocateResult1D {
            position,
            block,
            offset: i_bar,
            errors,
        })
    }

    /// n - log2(n M) with M = r^k_R.
    pub fn redundancy(&self) -> Result<Redundancy> {
        let p = &self.params;
        Redundancy::new(
            p.n as u64,
            vec![(p.r as u64, p.k_r as u64), (p.n as u64, 1)],
            &p.big_m * p.n,
        )
    }
}
