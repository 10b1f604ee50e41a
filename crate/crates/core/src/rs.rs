//! Systematic Reed-Solomon codes with Berlekamp-Welch decoding.

use crate::error::{Error, Result};
use crate::ff::{solve_any, Field};

/// Reed-Solomon code of length `n` and dimension `k` over explicit evaluation points.
///
/// A codeword lists the evaluations of the unique polynomial of degree below
/// `k` that takes the message values at the first `k` points, so every
/// codeword starts with its message.
#[derive(Debug, Clone)]
pub struct RsCode {
    field: Field,
    points: Vec<u32>,
    k: usize,
    /// weights[i][j] = L_j(points[k + i]) for the Lagrange basis on the first k points.
    weights: Vec<Vec<u32>>,
}

/// A decoded word together with the number of corrected symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decoded {
    pub codeword: Vec<u32>,
    pub errors: usize,
}

impl RsCode {
    pub fn new(field: Field, points: Vec<u32>, k: usize) -> Result<RsCode> {
        let n = points.len();
        if k == 0 || k >= n {
            return Err(Error::InvalidParam(format!("need 0 < k < n, got k={k}, n={n}")));
        }
        if n as u64 > field.q {
            return Err(Error::InvalidParam(format!("length {n} exceeds field size {}", field.q)));
        }
        let mut sorted = points.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) || points.iter().any(|&p| !field.contains(p)) {
            return Err(Error::InvalidParam("evaluation points must be distinct field elements".into()));
        }
        let denoms: Vec<u32> = (0..k)
            .map(|j| {
                let prod = (0..k)
                    .filter(|&l| l != j)
                    .fold(1, |acc, l| field.mul(acc, field.sub(points[j], points[l])));
                field.inv(prod)
            })
            .collect::<Result<_>>()?;
        let weights = points[k..]
            .iter()
            .map(|&x| {
                (0..k)
                    .map(|j| {
                        let num = (0..k)
                            .filter(|&l| l != j)
                            .fold(1, |acc, l| field.mul(acc, field.sub(x, points[l])));
                        field.mul(num, denoms[j])
                    })
                    .collect()
            })
            .collect();
        Ok(RsCode {
            field,
            points,
            k,
            weights,
        })
    }

    /// Code evaluated at the field elements 0, 1, ..., n-1 in value order.
    pub fn with_value_points(field: Field, n: usize, k: usize) -> Result<RsCode> {
        RsCode::new(field, (0..n as u32).collect(), k)
    }

    /// Code evaluated at g^0, g^1, ..., g^(n-1).
    pub fn with_generator_points(field: Field, n: usize, k: usize) -> Result<RsCode> {
        RsCode::new(field, (0..n as u64).map(|j| field.gen_pow(j)).collect(), k)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn points(&self) -> &[u32] {
        &self.points
    }

    pub fn min_distance(&self) -> usize {
        self.n() - self.k + 1
    }

    /// Number of errors the full-length decoder corrects.
    pub fn radius(&self) -> usize {
        (self.n() - self.k) / 2
    }

    pub fn encode(&self, message: &[u32]) -> Result<Vec<u32>> {
        if message.len() != self.k {
            return Err(Error::Dimension(format!(
                "message has {} symbols, expected {}",
                message.len(),
                self.k
            )));
        }
        if let Some(s) = message.iter().find(|&&s| !self.field.contains(s)) {
            return Err(Error::InvalidParam(format!("symbol {s} outside the field")));
        }
        let f = &self.field;
        let mut out = message.to_vec();
        out.extend(self.weights.iter().map(|w| {
            w.iter()
                .zip(message)
                .fold(0, |acc, (&wj, &mj)| f.add(acc, f.mul(wj, mj)))
        }));
        Ok(out)
    }

    pub fn decode(&self, received: &[u32]) -> Result<Decoded> {
        if received.len() != self.n() {
            return Err(Error::Dimension(format!(
                "received {} symbols, expected {}",
                received.len(),
                self.n()
            )));
        }
        let poly = self.berlekamp_welch(&self.points, received)?;
        let codeword: Vec<u32> = self.points.iter().map(|&x| self.field.poly_eval(&poly, x)).collect();
        let errors = hamming(&codeword, received);
        Ok(Decoded { codeword, errors })
    }

    /// Decodes the code punctured to the coordinates in `keep`; returns the restricted codeword.
    pub fn decode_shortened(&self, keep: &[usize], received: &[u32]) -> Result<Decoded> {
        let (poly, pts) = self.decode_punctured(keep, received)?;
        let codeword: Vec<u32> = pts.iter().map(|&x| self.field.poly_eval(&poly, x)).collect();
        let errors = hamming(&codeword, received);
        Ok(Decoded { codeword, errors })
    }

    /// Like [`RsCode::decode_shortened`] but returns the full-length codeword.
    pub fn decode_shortened_full(&self, keep: &[usize], received: &[u32]) -> Result<Decoded> {
        let (poly, pts) = self.decode_punctured(keep, received)?;
        let restricted: Vec<u32> = pts.iter().map(|&x| self.field.poly_eval(&poly, x)).collect();
        let errors = hamming(&restricted, received);
        let codeword = self.points.iter().map(|&x| self.field.poly_eval(&poly, x)).collect();
        Ok(Decoded { codeword, errors })
    }

    fn decode_punctured(&self, keep: &[usize], received: &[u32]) -> Result<(Vec<u32>, Vec<u32>)> {
        if keep.len() != received.len() {
            return Err(Error::Dimension("kept coordinates and received symbols differ in count".into()));
        }
        if keep.len() <= self.k {
            return Err(Error::InvalidParam(format!(
                "shortened length {} must exceed k={}",
                keep.len(),
                self.k
            )));
        }
        let mut seen = vec![false; self.n()];
        for &c in keep {
            if c >= self.n() || std::mem::replace(&mut seen[c], true) {
                return Err(Error::InvalidParam(format!("bad kept coordinate {c}")));
            }
        }
        let pts: Vec<u32> = keep.iter().map(|&c| self.points[c]).collect();
        let poly = self.berlekamp_welch(&pts, received)?;
        Ok((poly, pts))
    }

    /// Berlekamp-Welch: find E monic of degree t and Q of degree < k + t with
    /// Q(x_i) = y_i E(x_i), then return P = Q / E.
    fn berlekamp_welch(&self, pts: &[u32], ys: &[u32]) -> Result<Vec<u32>> {
        let f = &self.field;
        if let Some(s) = ys.iter().find(|&&s| !f.contains(s)) {
            return Err(Error::InvalidParam(format!("symbol {s} outside the field")));
        }
        let n = pts.len();
        let k = self.k;
        let t = (n - k) / 2;
        let unknowns = k + 2 * t;
        let mut rows = Vec::with_capacity(n);
        let mut rhs = Vec::with_capacity(n);
        for (&x, &y) in pts.iter().zip(ys) {
            let mut row = Vec::with_capacity(unknowns);
            let mut xp = 1;
            let mut powers = Vec::with_capacity(k + t + 1);
            for _ in 0..=k + t {
                powers.push(xp);
                xp = f.mul(xp, x);
            }
            row.extend_from_slice(&powers[..k + t]);
            row.extend((0..t).map(|l| f.neg(f.mul(y, powers[l]))));
            rows.push(row);
            rhs.push(f.mul(y, powers[t]));
        }
        let sol = solve_any(f, &rows, &rhs)?
            .ok_or_else(|| Error::DecodeFailure("key equation has no solution".into()))?;
        let q_poly = &sol[..k + t];
        let mut e_poly = sol[k + t..].to_vec();
        e_poly.push(1);
        let (quot, rem) = poly_divmod(f, q_poly, &e_poly)?;
        if rem.iter().any(|&c| c != 0) {
            return Err(Error::DecodeFailure("error locator does not divide".into()));
        }
        let mut p = quot;
        p.resize(k.max(p.len()), 0);
        if p[k..].iter().any(|&c| c != 0) {
            return Err(Error::DecodeFailure("decoded polynomial degree too large".into()));
        }
        p.truncate(k);
        let dist = pts
            .iter()
            .zip(ys)
            .filter(|(&x, &y)| f.poly_eval(&p, x) != y)
            .count();
        if dist > t {
            return Err(Error::DecodeFailure(format!("{dist} errors exceed radius {t}")));
        }
        Ok(p)
    }
}

/// Polynomial long division (constant term first); the divisor must have a nonzero leading coefficient.
pub fn poly_divmod(f: &Field, num: &[u32], den: &[u32]) -> Result<(Vec<u32>, Vec<u32>)> {
    let dl = den.len();
    if dl == 0 || den[dl - 1] == 0 {
        return Err(Error::InvalidParam("divisor must have a nonzero leading coefficient".into()));
    }
    let lead_inv = f.inv(den[dl - 1])?;
    let mut rem = num.to_vec();
    if rem.len() < dl {
        return Ok((vec![0], rem));
    }
    let mut quot = vec![0; rem.len() - dl + 1];
    for i in (0..quot.len()).rev() {
        let c = f.mul(rem[i + dl - 1], lead_inv);
        quot[i] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[i + j] = f.sub(rem[i + j], f.mul(c, dj));
            }
        }
    }
    rem.truncate(dl - 1);
    Ok((quot, rem))
}

pub fn hamming(a: &[u32], b: &[u32]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}
