//! Brute-force verification of window distance properties, plus classical upper bounds.

use std::collections::HashMap;
use std::hash::Hash;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitmat::BinaryMatrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Exhaustive,
    Sampled,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Position {
    Linear(u64),
    Grid(
        #[serde(with = "crate::format::big")] BigUint,
        #[serde(with = "crate::format::big")] BigUint,
    ),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub property: String,
    pub min_distance: Option<usize>,
    pub witness: Option<(Position, Position)>,
    pub target: Option<usize>,
    pub pass: bool,
    pub pairs: u64,
    pub mode: Mode,
    pub seed: Option<u64>,
}

impl VerificationReport {
    fn new(property: &str, best: Option<(usize, Position, Position)>, pairs: u64, mode: Mode) -> Self {
        let (min_distance, witness) = match best {
            Some((d, a, b)) => (Some(d), Some((a, b))),
            None => (None, None),
        };
        VerificationReport {
            property: property.into(),
            min_distance,
            witness,
            target: None,
            pass: true,
            pairs,
            mode,
            seed: None,
        }
    }

    /// Sets the target distance; the report passes iff every examined pair reaches it.
    pub fn with_target(mut self, d: usize) -> Self {
        self.target = Some(d);
        self.pass = self.min_distance.is_none_or(|m| m >= d);
        self
    }
}

/// Minimum over pairs (i, i + delta) of the window distance, for the given shifts.
fn diagonal_min<T: PartialEq + Sync>(
    seq: &[T],
    n: usize,
    cyclic: bool,
    shifts: impl ParallelIterator<Item = usize>,
) -> Option<(usize, u64, u64)> {
    let len = seq.len();
    let windows = if cyclic { len } else { (len + 1).saturating_sub(n) };
    shifts
        .filter_map(|delta| {
            let count = windows - delta;
            let at = |t: usize| if cyclic { t % len } else { t };
            let diff = |t: usize| (seq[at(t)] != seq[at(t + delta)]) as usize;
            let mut dist: usize = (0..n).map(diff).sum();
            let mut best = (dist, 0usize);
            for i in 1..count {
                dist = dist + diff(i + n - 1) - diff(i - 1);
                if dist < best.0 {
                    best = (dist, i);
                }
            }
            Some((best.0, best.1 as u64, (best.1 + delta) as u64))
        })
        .min()
}

/// Exact minimum Hamming distance over all pairs of length-n windows.
///
/// In cyclic mode every start position is a window and windows wrap around.
pub fn min_window_distance_1d<T: PartialEq + Sync>(seq: &[T], n: usize, cyclic: bool) -> VerificationReport {
    let len = seq.len();
    let windows = match (cyclic, len) {
        (true, _) => len,
        (false, l) if l >= n => l + 1 - n,
        _ => 0,
    };
    let property = if cyclic { "cyclic-window-distance" } else { "window-distance" };
    let best = diagonal_min(seq, n, cyclic, (1..windows.max(1)).into_par_iter());
    let pairs = (windows as u64) * (windows.saturating_sub(1) as u64) / 2;
    VerificationReport::new(
        property,
        best.map(|(d, i, j)| (d, Position::Linear(i), Position::Linear(j))),
        pairs,
        Mode::Exhaustive,
    )
}

/// Distance check restricted to window pairs whose starts agree modulo n.
pub fn check_modular_1d<T: PartialEq + Sync>(seq: &[T], n: usize, d: usize) -> VerificationReport {
    let windows = if seq.len() >= n { seq.len() + 1 - n } else { 0 };
    let shifts: Vec<usize> = (1..windows).filter(|s| s % n == 0).collect();
    let best = diagonal_min(seq, n, false, shifts.into_par_iter());
    let pairs = shifts_pairs(windows, n);
    VerificationReport::new(
        "modular-window-distance",
        best.map(|(d, i, j)| (d, Position::Linear(i), Position::Linear(j))),
        pairs,
        Mode::Exhaustive,
    )
    .with_target(d)
}

fn shifts_pairs(windows: usize, n: usize) -> u64 {
    (1..windows).filter(|s| s % n == 0).map(|s| (windows - s) as u64).sum()
}

/// Checks that each ordered symbol pair occurs at most once with each cyclic gap in [1, n-1].
///
/// On failure the witness holds the two start positions sharing a pair and gap.
pub fn check_pair_appearance<T: Eq + Hash + Sync>(seq: &[T], n: usize) -> VerificationReport {
    let len = seq.len();
    let hit = (1..n).into_par_iter().find_map_first(|delta| {
        let mut seen: HashMap<(&T, &T), usize> = HashMap::with_capacity(len);
        for i in 0..len {
            let key = (&seq[i], &seq[(i + delta) % len]);
            if let Some(&first) = seen.get(&key) {
                return Some((first, i));
            }
            seen.insert(key, i);
        }
        None
    });
    let mut report = VerificationReport::new("pair-appearance", None, (len * n.saturating_sub(1)) as u64, Mode::Exhaustive);
    if let Some((a, b)) = hit {
        report.witness = Some((Position::Linear(a as u64), Position::Linear(b as u64)));
        report.pass = false;
    }
    report
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Metric {
    Hamming,
    Rank,
}

impl Metric {
    pub fn distance(self, a: &BinaryMatrix, b: &BinaryMatrix) -> Result<usize> {
        match self {
            Metric::Hamming => a.hamming(b),
            Metric::Rank => a.rank_distance(b),
        }
    }
}

/// Anything that can hand out n1 x n2 windows by top-left corner.
pub trait WindowSource: Sync {
    fn window(&self, row: &BigUint, col: &BigUint) -> Result<BinaryMatrix>;
}

impl WindowSource for crate::arr2d::Arr2D {
    fn window(&self, row: &BigUint, col: &BigUint) -> Result<BinaryMatrix> {
        self.window_at(row, col)
    }
}

impl WindowSource for crate::rank2d::RankArray {
    fn window(&self, row: &BigUint, col: &BigUint) -> Result<BinaryMatrix> {
        self.window_at(row, col)
    }
}

/// A fully materialized array with a fixed window size.
#[derive(Debug, Clone)]
pub struct DenseArray {
    pub array: BinaryMatrix,
    pub n1: usize,
    pub n2: usize,
}

impl WindowSource for DenseArray {
    fn window(&self, row: &BigUint, col: &BigUint) -> Result<BinaryMatrix> {
        let r = usize::try_from(row).map_err(|_| Error::OutOfRange(format!("row {row}")))?;
        let c = usize::try_from(col).map_err(|_| Error::OutOfRange(format!("col {col}")))?;
        self.array.submatrix(r, c, self.n1, self.n2)
    }
}

/// Every top-left corner in [row0, row0 + rows) x [col0, col0 + cols).
pub fn region_corners(row0: &BigUint, rows: usize, col0: &BigUint, cols: usize) -> Vec<(BigUint, BigUint)> {
    (0..rows)
        .flat_map(|r| (0..cols).map(move |c| (row0 + r, col0 + c)))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sampling {
    Exhaustive,
    Pairs { count: u64, seed: u64 },
}

/// Minimum window distance over pairs of distinct corners.
///
/// Exhaustive mode compares every pair; sampled mode draws `count` random
/// distinct pairs from `corners` with a seeded generator.
pub fn min_window_distance_2d<S: WindowSource>(
    src: &S,
    corners: &[(BigUint, BigUint)],
    metric: Metric,
    sampling: Sampling,
) -> Result<VerificationReport> {
    let windows = corners
        .par_iter()
        .map(|(r, c)| src.window(r, c))
        .collect::<Result<Vec<_>>>()?;
    let property = match metric {
        Metric::Hamming => "window-distance-2d",
        Metric::Rank => "window-rank-distance-2d",
    };
    let n = windows.len();
    let (pairs, best) = match sampling {
        Sampling::Exhaustive => {
            let best = (0..n)
                .into_par_iter()
                .map(|i| -> Result<Option<(usize, usize, usize)>> {
                    let mut best: Option<(usize, usize, usize)> = None;
                    for j in i + 1..n {
                        let d = metric.distance(&windows[i], &windows[j])?;
                        if best.is_none_or(|b| d < b.0) {
                            best = Some((d, i, j));
                        }
                    }
                    Ok(best)
                })
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .flatten()
                .min();
            ((n as u64) * (n.saturating_sub(1) as u64) / 2, best)
        }
        Sampling::Pairs { count, seed } => {
            if n < 2 {
                return Err(Error::InvalidParam("sampling needs at least two corners".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let draws: Vec<(usize, usize)> = (0..count)
                .map(|_| {
                    let i = rng.gen_range(0..n);
                    let mut j = rng.gen_range(0..n - 1);
                    if j >= i {
                        j += 1;
                    }
                    (i.min(j), i.max(j))
                })
                .collect();
            let best = draws
                .par_iter()
                .map(|&(i, j)| Ok((metric.distance(&windows[i], &windows[j])?, i, j)))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .min();
            (count, best)
        }
    };
    let grid = |k: usize| Position::Grid(corners[k].0.clone(), corners[k].1.clone());
    let mode = match sampling {
        Sampling::Exhaustive => Mode::Exhaustive,
        Sampling::Pairs { .. } => Mode::Sampled,
    };
    let mut report = VerificationReport::new(property, best.map(|(d, i, j)| (d, grid(i), grid(j))), pairs, mode);
    if let Sampling::Pairs { seed, .. } = sampling {
        report.seed = Some(seed);
    }
    Ok(report)
}

/// Plotkin-type bound on P(n, d) for binary sequences.
pub fn plotkin_upper(n: u64, d: u64) -> Result<u64> {
    if d == 0 || d > n {
        return Err(Error::InvalidParam(format!("need 1 <= d <= n, got n={n}, d={d}")));
    }
    if d % 2 == 0 && 2 * d > n {
        Ok(2 * (d / (2 * d - n)) + n - 1)
    } else if d % 2 == 1 && 2 * d + 1 > n {
        Ok(2 * ((d + 1) / (2 * d + 1 - n)) + n - 1)
    } else {
        Err(Error::InvalidParam(format!("Plotkin bound needs 2d > n (d even) or 2d+1 > n (d odd): n={n}, d={d}")))
    }
}

/// Singleton-type bound q^(n-d+1) + n - 1 on the length of a q-ary (n, d) sequence.
pub fn singleton_upper(q: u64, n: u64, d: u64) -> Result<BigUint> {
    if d == 0 || d > n {
        return Err(Error::InvalidParam(format!("need 1 <= d <= n, got n={n}, d={d}")));
    }
    Ok(BigUint::from(q).pow((n - d + 1) as u32) + (n - 1))
}

/// Largest number of windows whose radius-floor((d-1)/2) balls fit in q^(n1 n2) words.
pub fn sphere_packing_max_positions(q: u64, n1: u64, n2: u64, d: u64) -> Result<BigUint> {
    if q < 2 || d == 0 {
        return Err(Error::InvalidParam("need q >= 2 and d >= 1".into()));
    }
    let area = n1 * n2;
    let t = (d - 1) / 2;
    let mut volume = BigUint::zero();
    let mut binom = BigUint::one();
    let mut power = BigUint::one();
    for i in 0..=t.min(area) {
        volume += &binom * &power;
        binom = binom * (area - i) / (i + 1);
        power *= q - 1;
    }
    Ok(BigUint::from(q).pow(area as u32) / volume)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bits(s: &str) -> Vec<u8> {
        s.bytes().map(|b| b - b'0').collect()
    }

    fn brute(seq: &[u8], n: usize, cyclic: bool) -> Option<(usize, u64, u64)> {
        let len = seq.len();
        let windows = if cyclic { len } else { (len + 1).saturating_sub(n) };
        let at = |i: usize, t: usize| seq[(i + t) % len];
        let mut best = None;
        for i in 0..windows {
            for j in i + 1..windows {
                let d = (0..n).filter(|&t| at(i, t) != at(j, t)).count();
                if best.is_none_or(|(b, _, _)| d < b) {
                    best = Some((d, i as u64, j as u64));
                }
            }
        }
        best
    }

    fn witness_linear(r: &VerificationReport) -> (u64, u64) {
        match r.witness.as_ref().unwrap() {
            (Position::Linear(a), Position::Linear(b)) => (*a, *b),
            _ => panic!("expected linear witness"),
        }
    }

    #[test]
    fn examples_1d() {
        let r = min_window_distance_1d(&bits("0001000"), 4, false);
        assert_eq!(r.min_distance, Some(2));
        assert_eq!(witness_linear(&r), (0, 1));
        assert!(r.clone().with_target(2).pass);
        assert!(!r.with_target(3).pass);
        assert_eq!(min_window_distance_1d(&bits("000000"), 3, false).min_distance, Some(0));
        assert_eq!(min_window_distance_1d(&bits("010101"), 5, false).min_distance, Some(5));
        assert_eq!(min_window_distance_1d(&bits("0101"), 5, false).min_distance, None);
    }

    #[test]
    fn pair_appearance() {
        let r = check_pair_appearance(&bits("0101"), 2);
        assert!(!r.pass);
        assert_eq!(witness_linear(&r), (0, 2));
        assert!(check_pair_appearance(&[0u32, 1, 2, 3], 2).pass);
    }

    #[test]
    fn modular_restricts_pairs() {
        let s = bits("0001000");
        let r = check_modular_1d(&s, 2, 1);
        let expect = brute(&s, 2, false);
        assert!(r.min_distance >= expect.map(|e| e.0));
        assert_eq!(r.pairs, 4 + 2);
    }

    #[test]
    fn dense_2d() {
        let array = BinaryMatrix::from_rows(&[vec![0, 1], vec![1, 1]]).unwrap();
        let src = DenseArray { array, n1: 1, n2: 1 };
        let corners = region_corners(&BigUint::zero(), 2, &BigUint::zero(), 2);
        let r = min_window_distance_2d(&src, &corners, Metric::Hamming, Sampling::Exhaustive).unwrap();
        assert_eq!(r.min_distance, Some(0));
        assert_eq!(r.pairs, 6);
        let corners = region_corners(&BigUint::zero(), 1, &BigUint::zero(), 2);
        let r = min_window_distance_2d(&src, &corners, Metric::Rank, Sampling::Exhaustive).unwrap();
        assert_eq!(r.min_distance, Some(1));
    }

    #[test]
    fn sampled_2d_is_reproducible() {
        let mut array = BinaryMatrix::zeros(8, 8);
        for i in 0..8 {
            array.set(i, (3 * i) % 8, true);
        }
        let src = DenseArray { array, n1: 3, n2: 3 };
        let corners = region_corners(&BigUint::zero(), 6, &BigUint::zero(), 6);
        let s = Sampling::Pairs { count: 200, seed: 5 };
        let a = min_window_distance_2d(&src, &corners, Metric::Hamming, s).unwrap();
        let b = min_window_distance_2d(&src, &corners, Metric::Hamming, s).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.seed, Some(5));
        let full = min_window_distance_2d(&src, &corners, Metric::Hamming, Sampling::Exhaustive).unwrap();
        assert!(full.min_distance <= a.min_distance);
    }

    #[test]
    fn bounds() {
        assert_eq!(plotkin_upper(5, 4).unwrap(), 6);
        assert_eq!(plotkin_upper(7, 5).unwrap(), 8);
        assert!(plotkin_upper(6, 2).is_err());
        for q in 2..6u64 {
            for n in 1..6u64 {
                assert_eq!(singleton_upper(q, n, n).unwrap(), BigUint::from(q + n - 1));
            }
        }
        assert_eq!(sphere_packing_max_positions(2, 1, 10, 1).unwrap(), BigUint::from(1024u32));
        assert_eq!(sphere_packing_max_positions(2, 1, 7, 3).unwrap(), BigUint::from(16u32));
    }

    proptest! {
        #[test]
        fn matches_brute_force(seq in proptest::collection::vec(0u8..2, 1..40), n in 1usize..8, cyclic: bool) {
            let r = min_window_distance_1d(&seq, n, cyclic);
            let b = brute(&seq, n, cyclic);
            prop_assert_eq!(r.min_distance, b.map(|x| x.0));
            if let Some((d, i, j)) = b {
                prop_assert_eq!(witness_linear(&r), (i, j));
                let len = seq.len();
                let redo = (0..n).filter(|&t| seq[(i as usize + t) % len] != seq[(j as usize + t) % len]).count();
                prop_assert_eq!(redo, d);
            }
        }
    }
}
