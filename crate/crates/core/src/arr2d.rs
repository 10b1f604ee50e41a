//! Binary robust positioning arrays with Hamming distance guarantees.
//!
//! Tile (i, j) of the array is the n1 x n2 matrix whose rows, read in order,
//! spell p psi(c_ij): the marker p = 0^k u followed by the images of the
//! Reed-Solomon codeword of the message sigma_i sigma_j under an injective
//! map psi from GF(q) to m-bit words of weight at least d.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::bitmat::BinaryMatrix;
use crate::error::{Error, Result};
use crate::ff::{is_prime, Field};
use crate::gray::GrayCode;
use crate::marker::build_auto_cyclic;
use crate::redundancy::Redundancy;
use crate::rs::RsCode;

const TILE_CACHE_LIMIT: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params2D {
    pub d: usize,
    pub m: usize,
    pub ell: usize,
    pub k: usize,
    pub n1: usize,
    pub n2: usize,
    pub area: usize,
    pub n_r: usize,
    pub k_r: usize,
    pub r: usize,
    pub q: u32,
    #[serde(rename = "M", with = "crate::format::big")]
    pub big_m: BigUint,
}

pub(crate) fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

pub fn solve_params_2d(d: usize, m: usize, n1: usize, n2: usize) -> Result<Params2D> {
    if d == 0 || m == 0 || n1 == 0 || n2 == 0 {
        return Err(Error::InvalidParam("d, m, n1 and n2 must be positive".into()));
    }
    if n2 % m != 0 {
        return Err(Error::InvalidParam(format!("m={m} does not divide n2={n2}")));
    }
    if n1 > n2 {
        return Err(Error::InvalidParam(format!("n1={n1} exceeds n2={n2}")));
    }
    if m < d {
        return Err(Error::Infeasible(format!("m >= d violated: m={m}, d={d}")));
    }
    if m > 31 {
        return Err(Error::Infeasible(format!("m={m} exceeds the supported maximum 31")));
    }
    let ell = build_auto_cyclic(d)?.len();
    if 4 * m <= 2 * ell {
        return Err(Error::Infeasible(format!(
            "marker needs k = 4m - ell > ell: m={m}, ell={ell}"
        )));
    }
    if 4 * m > n2 {
        return Err(Error::Infeasible(format!("4m <= n2 violated: 4m={}, n2={n2}", 4 * m)));
    }
    let blocks = n1 * (n2 / m);
    let checks = 2 * (d + 7);
    if blocks < 4 + checks + 2 {
        return Err(Error::Infeasible(format!(
            "k_R >= 2 violated: n1*n2/m = {blocks} leaves no room for the message"
        )));
    }
    let n_r = blocks - 4;
    let k_r = n_r - checks;
    if k_r % 2 != 0 {
        return Err(Error::Infeasible(format!("k_R={k_r} must be even")));
    }
    let r: usize = (d..=m).map(|i| binomial(m, i)).sum();
    let q = (n_r..=r.min(u32::MAX as usize))
        .rev()
        .find(|&c| is_prime(c as u64))
        .ok_or_else(|| Error::Infeasible(format!("no prime q with n_R={n_r} <= q <= r={r}")))?;
    if checks * m > n2 {
        return Err(Error::Infeasible(format!(
            "check symbols do not fit the last row: 2(d+7)m = {} > n2={n2}",
            checks * m
        )));
    }
    Ok(Params2D {
        d,
        m,
        ell,
        k: 4 * m - ell,
        n1,
        n2,
        area: n1 * n2,
        n_r,
        k_r,
        r,
        q: q as u32,
        big_m: BigUint::from(q).pow((k_r / 2) as u32),
    })
}

/// Window of a tiled array with top-left corner (i, j), built from at most four tiles.
pub(crate) fn assemble_window<F>(n1: usize, n2: usize, i: &BigUint, j: &BigUint, tile: F) -> Result<BinaryMatrix>
where
    F: Fn(&BigUint, &BigUint) -> Result<Arc<BinaryMatrix>>,
{
    let (a, ri) = i.div_rem(&BigUint::from(n1));
    let (b, cj) = j.div_rem(&BigUint::from(n2));
    let ri = ri.to_usize().expect("offset below n1");
    let cj = cj.to_usize().expect("offset below n2");
    let mut tiles = [[None, None], [None, None]];
    for (dr, row) in tiles.iter_mut().enumerate() {
        if dr == 1 && ri == 0 {
            continue;
        }
        for (dc, slot) in row.iter_mut().enumerate() {
            if dc == 1 && cj == 0 {
                continue;
            }
            *slot = Some(tile(&(&a + dr), &(&b + dc))?);
        }
    }
    let mut out = BinaryMatrix::zeros(n1, n2);
    for r in 0..n1 {
        let (tr, lr) = ((ri + r) / n1, (ri + r) % n1);
        for c in 0..n2 {
            let (tc, lc) = ((cj + c) / n2, (cj + c) % n2);
            let t: &BinaryMatrix = tiles[tr][tc].as_ref().expect("tile loaded");
            if t.get(lr, lc) {
                out.set(r, c, true);
            }
        }
    }
    Ok(out)
}

/// The `rows x cols` block of a tiled array with top-left entry (row0, col0).
pub fn region_matrix<F>(
    n1: usize,
    n2: usize,
    row0: &BigUint,
    rows: usize,
    col0: &BigUint,
    cols: usize,
    tile: F,
) -> Result<BinaryMatrix>
where
    F: Fn(&BigUint, &BigUint) -> Result<Arc<BinaryMatrix>>,
{
    let (a0, r_off) = row0.div_rem(&BigUint::from(n1));
    let (b0, c_off) = col0.div_rem(&BigUint::from(n2));
    let r_off = r_off.to_usize().expect("offset below n1");
    let c_off = c_off.to_usize().expect("offset below n2");
    let mut out = BinaryMatrix::zeros(rows, cols);
    for ti in 0..(r_off + rows).div_ceil(n1) {
        for tj in 0..(c_off + cols).div_ceil(n2) {
            let t = tile(&(&a0 + ti), &(&b0 + tj))?;
            for lr in 0..n1 {
                let Some(r) = (ti * n1 + lr).checked_sub(r_off).filter(|&r| r < rows) else {
                    continue;
                };
                for lc in 0..n2 {
                    let Some(c) = (tj * n2 + lc).checked_sub(c_off).filter(|&c| c < cols) else {
                        continue;
                    };
                    if t.get(lr, lc) {
                        out.set(r, c, true);
                    }
                }
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocateResult2D {
    #[serde(with = "crate::format::big")]
    pub row: BigUint,
    #[serde(with = "crate::format::big")]
    pub col: BigUint,
    #[serde(with = "crate::format::big")]
    pub a: BigUint,
    #[serde(with = "crate::format::big")]
    pub b: BigUint,
    pub row_offset: usize,
    pub col_offset: usize,
    pub errors: usize,
}

type TileKey = (BigUint, BigUint);

/// A Construction-2 array, evaluated lazily tile by tile.
#[derive(Debug)]
pub struct Arr2D {
    params: Params2D,
    rs: RsCode,
    gray: GrayCode,
    marker: Vec<u8>,
    psi: Vec<u32>,
    chi: Vec<Option<u32>>,
    cache: RwLock<HashMap<TileKey, Arc<BinaryMatrix>>>,
}

impl Arr2D {
    pub fn new(d: usize, m: usize, n1: usize, n2: usize) -> Result<Arr2D> {
        Arr2D::from_params(solve_params_2d(d, m, n1, n2)?)
    }

    pub fn from_params(params: Params2D) -> Result<Arr2D> {
        let fresh = solve_params_2d(params.d, params.m, params.n1, params.n2)?;
        if fresh != params {
            return Err(Error::InvalidParam("parameters are inconsistent with (d, m, n1, n2)".into()));
        }
        let field = Field::prime(params.q)?;
        let rs = RsCode::with_value_points(field, params.n_r, params.k_r)?;
        let gray = GrayCode::with_radix(params.k_r / 2, params.q)?;
        let mut marker = vec![0u8; params.k];
        marker.extend(build_auto_cyclic(params.d)?);
        let psi: Vec<u32> = (0..1u32 << params.m)
            .filter(|w| w.count_ones() as usize >= params.d)
            .take(params.q as usize)
            .collect();
        let mut chi = vec![None; 1 << params.m];
        for (x, &w) in psi.iter().enumerate() {
            chi[w as usize] = Some(x as u32);
        }
        Ok(Arr2D {
            params,
            rs,
            gray,
            marker,
            psi,
            chi,
            cache: RwLock::new(HashMap::new()),
        })
    }

    pub fn params(&self) -> &Params2D {
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

    /// psi(x): the (x+1)-th m-bit word of weight at least d.
    pub fn psi(&self, x: u32) -> u32 {
        self.psi[x as usize]
    }

    /// Inverse of psi; words outside its image map to 0.
    pub fn chi(&self, w: u32) -> u32 {
        self.chi[w as usize].unwrap_or(0)
    }

    pub fn radius(&self) -> usize {
        (self.params.d - 1) / 2
    }

    /// Array height and width, n1 M and n2 M.
    pub fn dims(&self) -> (BigUint, BigUint) {
        let p = &self.params;
        (&p.big_m * p.n1, &p.big_m * p.n2)
    }

    pub fn codeword(&self, i: &BigUint, j: &BigUint) -> Result<Vec<u32>> {
        let p = &self.params;
        if *i >= p.big_m || *j >= p.big_m {
            return Err(Error::OutOfRange(format!("tile ({i}, {j}) outside the {0}x{0} tile grid", p.big_m)));
        }
        let mut msg = self.gray.unrank(i)?;
        msg.extend(self.gray.unrank(j)?);
        self.rs.encode(&msg)
    }

    /// Row-major bits of tile (i, j).
    pub fn tile_bits(&self, i: &BigUint, j: &BigUint) -> Result<Vec<u8>> {
        let c = self.codeword(i, j)?;
        let m = self.params.m;
        let mut bits = Vec::with_capacity(self.params.area);
        bits.extend_from_slice(&self.marker);
        for &sym in &c {
            let w = self.psi(sym);
            bits.extend((0..m).rev().map(|b| ((w >> b) & 1) as u8));
        }
        Ok(bits)
    }

    pub fn tile_at(&self, i: &BigUint, j: &BigUint) -> Result<Arc<BinaryMatrix>> {
        let key = (i.clone(), j.clone());
        if let Some(t) = self.cache.read().expect("tile cache poisoned").get(&key) {
            return Ok(Arc::clone(t));
        }
        let p = &self.params;
        let tile = Arc::new(BinaryMatrix::from_row_major(p.n1, p.n2, &self.tile_bits(i, j)?)?);
        let mut cache = self.cache.write().expect("tile cache poisoned");
        if cache.len() >= TILE_CACHE_LIMIT {
            cache.clear();
        }
        cache.insert(key, Arc::clone(&tile));
        Ok(tile)
    }

    /// The n1 x n2 window with top-left corner (i, j).
    pub fn window_at(&self, i: &BigUint, j: &BigUint) -> Result<BinaryMatrix> {
        let p = &self.params;
        let (h, w) = self.dims();
        if i + p.n1 > h || j + p.n2 > w {
            return Err(Error::OutOfRange(format!("window at ({i}, {j}) overruns the {h}x{w} array")));
        }
        assemble_window(p.n1, p.n2, i, j, |a, b| self.tile_at(a, b))
    }

    /// Materializes `rows x cols` entries starting at (row0, col0).
    pub fn region(&self, row0: &BigUint, rows: usize, col0: &BigUint, cols: usize) -> Result<BinaryMatrix> {
        let p = &self.params;
        let (h, w) = self.dims();
        if row0 + rows > h || col0 + cols > w {
            return Err(Error::OutOfRange(format!("region at ({row0}, {col0}) overruns the {h}x{w} array")));
        }
        region_matrix(p.n1, p.n2, row0, rows, col0, cols, |a, b| self.tile_at(a, b))
    }

    /// Marker offsets (row, col) whose cyclic row segment is within the error radius of p.
    fn marker_candidates(&self, w: &BinaryMatrix) -> Vec<(usize, usize)> {
        let (n1, n2) = (self.params.n1, self.params.n2);
        let thr = self.radius();
        let mut out = Vec::new();
        for r in 0..n1 {
            let row = w.row_bits(r);
            for c in 0..n2 {
                let mut dist = 0;
                for (t, &b) in self.marker.iter().enumerate() {
                    if row[(c + t) % n2] != b {
                        dist += 1;
                        if dist > thr {
                            break;
                        }
                    }
                }
                if dist <= thr {
                    out.push((r, c));
                }
            }
        }
        out
    }

    /// Locates a window with at most floor((d-1)/2) bit errors.
    pub fn locate(&self, w: &BinaryMatrix) -> Result<LocateResult2D> {
        let p = &self.params;
        if w.rows() != p.n1 || w.cols() != p.n2 {
            return Err(Error::Dimension(format!(
                "window is {}x{}, expected {}x{}",
                w.rows(),
                w.cols(),
                p.n1,
                p.n2
            )));
        }
        let (i_hat, j_hat) = match self.marker_candidates(w).as_slice() {
            [] => return Err(Error::DecodeFailure("no marker within the error radius".into())),
            [x] => *x,
            [x, y, ..] => return Err(Error::Ambiguous(format!("marker offsets {x:?} and {y:?}"))),
        };
        let i_bar = (p.n1 - i_hat) % p.n1;
        let j_bar = (p.n2 - j_hat) % p.n2;
        let v = w.rotate(i_hat, j_hat).to_row_major();
        let received: Vec<u32> = (0..p.n_r)
            .map(|t| {
                let start = 4 * p.m + p.m * t;
                self.chi(v[start..start + p.m].iter().fold(0u32, |acc, &b| (acc << 1) | b as u32))
            })
            .collect();

        let span = (p.d + 7) * p.m;
        let (first_cut, second_cut) = (p.n2 - 2 * span, p.n2 - span);
        let c = if j_bar < first_cut {
            self.rs.decode(&received)?.codeword
        } else if j_bar < second_cut {
            let keep: Vec<usize> = (0..p.k_r).chain(p.k_r + p.d + 7..p.n_r).collect();
            let sub: Vec<u32> = keep.iter().map(|&t| received[t]).collect();
            self.rs.decode_shortened(&keep, &sub)?.codeword
        } else {
            let keep: Vec<usize> = (0..p.k_r + p.d + 7).collect();
            self.rs.decode_shortened(&keep, &received[..keep.len()])?.codeword
        };
        let half = p.k_r / 2;
        let a = self.gray.rank(&c[..half])?;
        let mut b = self.gray.rank(&c[half..p.k_r])?;
        if j_bar >= second_cut {
            if b.is_zero() {
                return Err(Error::DecodeFailure("decoded column tile precedes the array".into()));
            }
            b -= BigUint::one();
        }
        let row = &a * p.n1 + i_bar;
        let col = &b * p.n2 + j_bar;
        let (h, wd) = self.dims();
        if &row + p.n1 > h || &col + p.n2 > wd {
            return Err(Error::DecodeFailure(format!("decoded position ({row}, {col}) is out of range")));
        }
        let errors = self.window_at(&row, &col)?.hamming(w)?;
        if errors > self.radius() {
            return Err(Error::DecodeFailure(format!(
                "window at decoded position ({row}, {col}) differs in {errors} bits"
            )));
        }
        Ok(LocateResult2D {
            row,
            col,
            a,
            b,
            row_offset: i_bar,
            col_offset: j_bar,
            errors,
        })
    }

    /// A - log2(A M^2) with M = q^(k_R/2).
    pub fn redundancy(&self) -> Result<Redundancy> {
        let p = &self.params;
        Redundancy::new(
            p.area as u64,
            vec![(p.q as u64, p.k_r as u64), (p.area as u64, 1)],
            &p.big_m * &p.big_m * p.area,
        )
    }
}
