//! Exhaustive depth-first search for P(n, d), the longest binary (n, d) sequence.

use std::fmt::Write as _;
use std::time::Instant;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::{plotkin_upper, sphere_packing_max_positions};

pub const DEFAULT_BUDGET: u64 = 1_000_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchResult {
    pub n: usize,
    pub d: usize,
    pub best: usize,
    pub witness: String,
    pub certified: bool,
    pub upper_bound: u64,
    pub nodes: u64,
    pub elapsed_ms: u64,
}

/// The tighter of the Plotkin and sphere-packing bounds on P(n, d).
pub fn length_upper_bound(n: usize, d: usize) -> u64 {
    let sphere = sphere_packing_max_positions(2, 1, n as u64, d as u64)
        .ok()
        .and_then(|b| b.to_u64())
        .map_or(u64::MAX, |b| b.saturating_add(n as u64 - 1));
    plotkin_upper(n as u64, d as u64).map_or(sphere, |p| p.min(sphere))
}

struct Dfs {
    n: usize,
    d: u32,
    mask: u64,
    budget: u64,
    nodes: u64,
    bits: Vec<u8>,
    windows: Vec<u64>,
    best: Vec<u8>,
    upper: usize,
    truncated: bool,
}

impl Dfs {
    /// Returns true once the search can stop early (bound reached or budget spent).
    fn extend(&mut self, current: u64) -> bool {
        if self.bits.len() > self.best.len() {
            self.best = self.bits.clone();
            if self.best.len() >= self.upper {
                return true;
            }
        }
        for bit in 0..2u8 {
            if self.nodes >= self.budget {
                self.truncated = true;
                return true;
            }
            self.nodes += 1;
            let next = ((current << 1) | bit as u64) & self.mask;
            let full = self.bits.len() + 1 >= self.n;
            if full && self.windows.iter().any(|&w| (w ^ next).count_ones() < self.d) {
                continue;
            }
            self.bits.push(bit);
            if full {
                self.windows.push(next);
            }
            let stop = self.extend(next);
            if full {
                self.windows.pop();
            }
            self.bits.pop();
            if stop {
                return true;
            }
        }
        false
    }
}

/// Maximum length of a binary (n, d) sequence by exhaustive search.
///
/// The first symbol is fixed to 0. The witness is the lexicographically least
/// sequence of the best length found.
pub fn max_rps_length(n: usize, d: usize, budget: u64) -> Result<SearchResult> {
    if !(2 <= d && d <= n && n <= 63) {
        return Err(Error::InvalidParam(format!("need 2 <= d <= n <= 63, got n={n}, d={d}")));
    }
    let start = Instant::now();
    let upper = length_upper_bound(n, d);
    let mut dfs = Dfs {
        n,
        d: d as u32,
        mask: (1u64 << n) - 1,
        budget,
        nodes: 1,
        bits: vec![0],
        windows: Vec::new(),
        best: Vec::new(),
        upper: upper.min(usize::MAX as u64) as usize,
        truncated: false,
    };
    dfs.extend(0);
    let certified = !dfs.truncated || dfs.best.len() as u64 >= upper;
    Ok(SearchResult {
        n,
        d,
        best: dfs.best.len(),
        witness: dfs.best.iter().map(|&b| char::from(b'0' + b)).collect(),
        certified,
        upper_bound: upper,
        nodes: dfs.nodes,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

/// Searches every cell 2 <= d <= n <= n_max.
pub fn search_table(n_max: usize, budget: u64) -> Result<Vec<SearchResult>> {
    let mut out = Vec::new();
    for n in 2..=n_max {
        for d in 2..=n {
            out.push(max_rps_length(n, d, budget)?);
        }
    }
    Ok(out)
}

/// Renders results as a triangle with rows n and columns d; uncertified cells carry ">=".
pub fn render_table(results: &[SearchResult]) -> String {
    let n_max = results.iter().map(|r| r.n).max().unwrap_or(2);
    let cell = |n: usize, d: usize| -> String {
        results
            .iter()
            .find(|r| r.n == n && r.d == d)
            .map(|r| if r.certified { r.best.to_string() } else { format!(">={}", r.best) })
            .unwrap_or_default()
    };
    let mut s = String::new();
    let _ = write!(s, "{:>4} |", "n\\d");
    for d in 2..=n_max {
        let _ = write!(s, "{d:>7}");
    }
    s.push('\n');
    s.push_str(&"-".repeat(6 + 7 * (n_max - 1)));
    s.push('\n');
    for n in 2..=n_max {
        let _ = write!(s, "{n:>4} |");
        for d in 2..=n {
            let _ = write!(s, "{:>7}", cell(n, d));
        }
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::min_window_distance_1d;
    use crate::qary::exact_rps;

    fn verify(r: &SearchResult) {
        let bits: Vec<u8> = r.witness.bytes().map(|b| b - b'0').collect();
        assert_eq!(bits.len(), r.best);
        assert!(min_window_distance_1d(&bits, r.n, false).with_target(r.d).pass);
    }

    #[test]
    fn small_cells() {
        for (n, d, expect) in [(2, 2, 3), (3, 2, 5), (3, 3, 4), (4, 2, 7), (4, 3, 5), (6, 3, 12)] {
            let r = max_rps_length(n, d, DEFAULT_BUDGET).unwrap();
            assert_eq!(r.best, expect, "n={n} d={d}");
            assert!(r.certified);
            verify(&r);
        }
    }

    #[test]
    fn full_distance_matches_closed_form() {
        for n in 2..=6 {
            let r = max_rps_length(n, n, DEFAULT_BUDGET).unwrap();
            assert_eq!(r.best, n + 1);
            assert!(r.certified);
        }
    }

    #[test]
    fn search_agrees_with_closed_forms() {
        for n in 2..=10 {
            for d in 2..=n {
                let Ok(s) = exact_rps(n, d) else { continue };
                let r = max_rps_length(n, d, DEFAULT_BUDGET).unwrap();
                assert!(r.certified);
                assert!(r.best >= s.len(), "n={n} d={d}");
                if d > 2 * n / 3 || (n % 3 == 0 && d == 2 * n / 3) || (n % 3 == 2 && d == 2 * (n / 3) + 1) {
                    assert_eq!(r.best, s.len(), "n={n} d={d}");
                }
            }
        }
    }

    #[test]
    fn monotone_in_d() {
        let table = search_table(7, DEFAULT_BUDGET).unwrap();
        for n in 2..=7 {
            let row: Vec<usize> = table.iter().filter(|r| r.n == n).map(|r| r.best).collect();
            assert!(row.windows(2).all(|w| w[0] >= w[1]), "n={n} {row:?}");
        }
        let text = render_table(&table);
        assert!(text.lines().any(|l| l.trim_start().starts_with("4 |") && l.contains('7')));
    }

    #[test]
    fn budget_truncation() {
        let r = max_rps_length(8, 2, 1000).unwrap();
        assert!(!r.certified);
        verify(&r);
        assert!(max_rps_length(4, 1, 10).is_err());
    }
}
