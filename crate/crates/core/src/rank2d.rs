//! Binary positioning arrays whose windows are pairwise far apart in rank distance.
//!
//! Each tile is an (n1/m) x (n2/m) grid of m x m blocks. The top-left 4 x 4
//! blocks hold the marker P, three 2 x 4 block regions along the anti-diagonal
//! of the bottom-right corner hold the 24 check symbols, and the message
//! symbols fill the remaining cells row by row. Every symbol is drawn as a
//! nonzero Gabidulin codeword.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::arr2d::{assemble_window, region_matrix};
use crate::bitmat::BinaryMatrix;
use crate::error::{Error, Result};
use crate::ff::{is_prime, Field};
use crate::gabidulin::Gabidulin;
use crate::gray::GrayCode;
use crate::marker::{build_marker_2d, Marker2D};
use crate::rs::RsCode;

const TILE_CACHE_LIMIT: usize = 1024;

/// What a grid cell of a tile carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Cell {
    Marker,
    Symbol(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamsRank {
    pub d: usize,
    pub m: usize,
    pub ell: usize,
    pub n1: usize,
    pub n2: usize,
    pub n_r: usize,
    pub k_r: usize,
    pub q: u32,
    #[serde(rename = "M", with = "crate::format::big")]
    pub big_m: BigUint,
    /// Row-major grid of (n1/m) x (n2/m) cells.
    #[serde(skip)]
    pub layout: Vec<Cell>,
}

impl ParamsRank {
    pub fn grid(&self) -> (usize, usize) {
        (self.n1 / self.m, self.n2 / self.m)
    }

    /// Grid cell (row, col) holding RS symbol `t`.
    pub fn symbol_cell(&self, t: usize) -> Option<(usize, usize)> {
        let g2 = self.n2 / self.m;
        self.layout
            .iter()
            .position(|&c| c == Cell::Symbol(t))
            .map(|idx| (idx / g2, idx % g2))
    }
}

fn build_layout(g1: usize, g2: usize, k_r: usize) -> Result<Vec<Cell>> {
    let mut grid: Vec<Option<Cell>> = vec![None; g1 * g2];
    let claim = |r: usize, c: usize, cell: Cell, grid: &mut Vec<Option<Cell>>| -> Result<()> {
        let slot = &mut grid[r * g2 + c];
        if let Some(prev) = slot {
            return Err(Error::Infeasible(format!("grid cell ({r}, {c}) claimed by {prev:?} and {cell:?}")));
        }
        *slot = Some(cell);
        Ok(())
    };
    for r in 0..4 {
        for c in 0..4 {
            claim(r, c, Cell::Marker, &mut grid)?;
        }
    }
    let mut next = k_r;
    for l in 1..=3 {
        for r in g1 - 2 * l..g1 - 2 * l + 2 {
            for c in g2 - 4 * l..g2 - 4 * l + 4 {
                claim(r, c, Cell::Symbol(next), &mut grid)?;
                next += 1;
            }
        }
    }
    let mut t = 0;
    for slot in grid.iter_mut().filter(|s| s.is_none()) {
        *slot = Some(Cell::Symbol(t));
        t += 1;
    }
    if t != k_r {
        return Err(Error::Infeasible(format!("layout leaves {t} message cells, expected {k_r}")));
    }
    Ok(grid.into_iter().map(|c| c.expect("every cell assigned")).collect())
}

pub fn solve_params_rank(d: usize, m: usize, n1: usize, n2: usize) -> Result<ParamsRank> {
    if d == 0 || m == 0 {
        return Err(Error::InvalidParam("d and m must be positive".into()));
    }
    if n1 % m != 0 || n2 % m != 0 {
        return Err(Error::InvalidParam(format!("m={m} must divide n1={n1} and n2={n2}")));
    }
    if m < d {
        return Err(Error::InvalidParam(format!("m >= d violated: m={m}, d={d}")));
    }
    if m > 31 {
        return Err(Error::Infeasible(format!("m={m} exceeds the supported maximum 31")));
    }
    if n1 < 10 * m || n2 < 16 * m {
        return Err(Error::Infeasible(format!(
            "check regions overlap unless n1 >= 10m and n2 >= 16m: n1={n1}, n2={n2}, m={m}"
        )));
    }
    let marker = build_marker_2d(m, d)?;
    let (g1, g2) = (n1 / m, n2 / m);
    let n_r = g1 * g2 - 16;
    let k_r = n_r - 24;
    if k_r % 2 != 0 {
        return Err(Error::Infeasible(format!("k_R={k_r} must be even")));
    }
    let dim = m * (m - d + 1);
    let cap = if dim >= 32 { u32::MAX as u64 } else { (1u64 << dim) - 1 };
    let q = (n_r as u64..=cap)
        .find(|&c| is_prime(c))
        .ok_or_else(|| Error::Infeasible(format!("no prime q with n_R={n_r} <= q < 2^{dim}")))?;
    let layout = build_layout(g1, g2, k_r)?;
    Ok(ParamsRank {
        d,
        m,
        ell: marker.ell,
        n1,
        n2,
        n_r,
        k_r,
        q: q as u32,
        big_m: BigUint::from(q).pow((k_r / 2) as u32),
        layout,
    })
}

/// A Construction-3 array, evaluated lazily tile by tile.
#[derive(Debug)]
pub struct RankArray {
    params: ParamsRank,
    rs: RsCode,
    gray: GrayCode,
    marker: Marker2D,
    psi: Vec<BinaryMatrix>,
    cache: RwLock<HashMap<(BigUint, BigUint), Arc<BinaryMatrix>>>,
}

impl RankArray {
    pub fn new(d: usize, m: usize, n1: usize, n2: usize) -> Result<RankArray> {
        let params = solve_params_rank(d, m, n1, n2)?;
        let field = Field::prime(params.q)?;
        let rs = RsCode::with_value_points(field, params.n_r, params.k_r)?;
        let gray = GrayCode::with_radix(params.k_r / 2, params.q)?;
        let mrd = Gabidulin::new(m, d)?;
        let psi = (1..=params.q as u64)
            .map(|idx| mrd.encode_index(idx))
            .collect::<Result<Vec<_>>>()?;
        Ok(RankArray {
            marker: build_marker_2d(m, d)?,
            params,
            rs,
            gray,
            psi,
            cache: RwLock::new(HashMap::new()),
        })
    }

    pub fn params(&self) -> &ParamsRank {
        &self.params
    }

    pub fn marker(&self) -> &Marker2D {
        &self.marker
    }

    pub fn psi(&self, x: u32) -> &BinaryMatrix {
        &self.psi[x as usize]
    }

    pub fn dims(&self) -> (BigUint, BigUint) {
        let p = &self.params;
        (&p.big_m * p.n1, &p.big_m * p.n2)
    }

    pub fn codeword(&self, i: &BigUint, j: &BigUint) -> Result<Vec<u32>> {
        let p = &self.params;
        if *i >= p.big_m || *j >= p.big_m {
            return Err(Error::OutOfRange(format!("tile ({i}, {j}) outside the tile grid")));
        }
        let mut msg = self.gray.unrank(i)?;
        msg.extend(self.gray.unrank(j)?);
        self.rs.encode(&msg)
    }

    pub fn tile_at(&self, i: &BigUint, j: &BigUint) -> Result<Arc<BinaryMatrix>> {
        let key = (i.clone(), j.clone());
        if let Some(t) = self.cache.read().expect("tile cache poisoned").get(&key) {
            return Ok(Arc::clone(t));
        }
        let c = self.codeword(i, j)?;
        let p = &self.params;
        let (_, g2) = p.grid();
        let mut tile = BinaryMatrix::zeros(p.n1, p.n2);
        tile.paste(0, 0, &self.marker.matrix)?;
        for (idx, cell) in p.layout.iter().enumerate() {
            if let Cell::Symbol(t) = *cell {
                tile.paste((idx / g2) * p.m, (idx % g2) * p.m, self.psi(c[t]))?;
            }
        }
        let tile = Arc::new(tile);
        let mut cache = self.cache.write().expect("tile cache poisoned");
        if cache.len() >= TILE_CACHE_LIMIT {
            cache.clear();
        }
        cache.insert(key, Arc::clone(&tile));
        Ok(tile)
    }

    pub fn window_at(&self, i: &BigUint, j: &BigUint) -> Result<BinaryMatrix> {
        let p = &self.params;
        let (h, w) = self.dims();
        if i + p.n1 > h || j + p.n2 > w {
            return Err(Error::OutOfRange(format!("window at ({i}, {j}) overruns the {h}x{w} array")));
        }
        assemble_window(p.n1, p.n2, i, j, |a, b| self.tile_at(a, b))
    }

    pub fn region(&self, row0: &BigUint, rows: usize, col0: &BigUint, cols: usize) -> Result<BinaryMatrix> {
        let p = &self.params;
        let (h, w) = self.dims();
        if row0 + rows > h || col0 + cols > w {
            return Err(Error::OutOfRange(format!("region at ({row0}, {col0}) overruns the {h}x{w} array")));
        }
        region_matrix(p.n1, p.n2, row0, rows, col0, cols, |a, b| self.tile_at(a, b))
    }

    /// Rank distances between P and the cyclic 4m x 4m block of `w` at every offset, row-major.
    pub fn marker_profile(&self, w: &BinaryMatrix) -> Result<Vec<usize>> {
        let size = 4 * self.params.m;
        let mut out = Vec::with_capacity(w.rows() * w.cols());
        for r in 0..w.rows() {
            for c in 0..w.cols() {
                out.push(w.cyclic_submatrix(r, c, size, size).rank_distance(&self.marker.matrix)?);
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    #[test]
    fn parameter_examples() {
        let p = solve_params_rank(2, 4, 44, 72).unwrap();
        assert_eq!((p.n_r, p.k_r, p.q), (182, 158, 191));
        assert!(matches!(solve_params_rank(2, 3, 33, 51), Err(Error::Infeasible(_))));
        assert!(matches!(solve_params_rank(2, 4, 44, 70), Err(Error::InvalidParam(_))));
        assert!(solve_params_rank(2, 4, 36, 72).is_err());
    }

    #[test]
    fn layout_partitions_grid() {
        let p = solve_params_rank(2, 4, 44, 72).unwrap();
        let (g1, g2) = p.grid();
        assert_eq!(p.layout.len(), g1 * g2);
        assert_eq!(p.layout.iter().filter(|&&c| c == Cell::Marker).count(), 16);
        for t in 0..p.n_r {
            assert_eq!(p.layout.iter().filter(|&&c| c == Cell::Symbol(t)).count(), 1);
        }
        assert_eq!(p.symbol_cell(p.k_r), Some((g1 - 2, g2 - 4)));
        assert_eq!(p.symbol_cell(p.n_r - 1), Some((g1 - 5, g2 - 9)));
        assert_eq!(p.symbol_cell(0), Some((0, 4)));
    }

    #[test]
    fn tile_contents() {
        let arr = RankArray::new(2, 4, 44, 72).unwrap();
        let p = arr.params().clone();
        let (i, j) = (BigUint::from(3u32), BigUint::from(11u32));
        let tile = arr.tile_at(&i, &j).unwrap();
        assert_eq!(tile.submatrix(0, 0, 16, 16).unwrap(), arr.marker().matrix);
        let c = arr.codeword(&i, &j).unwrap();
        for t in 0..p.n_r {
            let (r, col) = p.symbol_cell(t).unwrap();
            let block = tile.submatrix(r * p.m, col * p.m, p.m, p.m).unwrap();
            assert_eq!(&block, arr.psi(c[t]));
            assert!(block.rank_gf2() >= p.d);
        }
        let origin = arr.window_at(&BigUint::zero(), &BigUint::zero()).unwrap();
        assert_eq!(origin, *arr.tile_at(&BigUint::zero(), &BigUint::zero()).unwrap());
    }

    #[test]
    fn aligned_marker_profile() {
        let arr = RankArray::new(2, 4, 44, 72).unwrap();
        let w = arr.window_at(&BigUint::from(44u32 * 5), &BigUint::from(72u32 * 2)).unwrap();
        let prof = arr.marker_profile(&w).unwrap();
        assert_eq!(prof[0], 0);
    }
}
