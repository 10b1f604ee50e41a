//! Finite fields GF(p) and GF(2^m) with 32-bit element values.
//!
//! Elements are plain `u32` values interpreted by a [`Field`] descriptor.
//! For GF(2^m) the value is the coefficient vector of the polynomial
//! representative, bit `i` holding the coefficient of `x^i`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FieldKind {
    Prime,
    BinaryExtension,
}

/// Descriptor of a finite field with at most 2^32 elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Field {
    pub kind: FieldKind,
    pub p: u32,
    pub m: u32,
    pub q: u64,
    /// Reduction polynomial for GF(2^m), zero for prime fields.
    pub modulus: u64,
    /// Smallest element of multiplicative order q - 1.
    pub generator: u32,
}

impl Field {
    pub fn make(kind: FieldKind, p: u32, m: u32) -> Result<Field> {
        match kind {
            FieldKind::Prime => {
                if m != 1 {
                    return Err(Error::InvalidParam(format!(
                        "prime field requires m = 1, got {m}"
                    )));
                }
                Field::prime(p)
            }
            FieldKind::BinaryExtension => {
                if p != 2 {
                    return Err(Error::InvalidParam(format!(
                        "binary extension requires p = 2, got {p}"
                    )));
                }
                Field::binary(m)
            }
        }
    }

    /// GF(p) for a prime `p`.
    pub fn prime(p: u32) -> Result<Field> {
        if !is_prime(p as u64) {
            return Err(Error::InvalidParam(format!("{p} is not prime")));
        }
        let mut f = Field {
            kind: FieldKind::Prime,
            p,
            m: 1,
            q: p as u64,
            modulus: 0,
            generator: 0,
        };
        f.generator = f.find_generator();
        Ok(f)
    }

    /// GF(2^m) with the smallest irreducible modulus of degree `m`.
    pub fn binary(m: u32) -> Result<Field> {
        if m == 0 || m > 31 {
            return Err(Error::InvalidParam(format!(
                "extension degree must be in [1, 31], got {m}"
            )));
        }
        let modulus = (1u64 << m..1u64 << (m + 1))
            .find(|&f| is_irreducible_gf2(f))
            .ok_or_else(|| Error::Infeasible(format!("no irreducible polynomial of degree {m}")))?;
        Field::binary_with_modulus(m, modulus)
    }

    /// GF(2^m) with a caller-supplied modulus.
    pub fn binary_with_modulus(m: u32, modulus: u64) -> Result<Field> {
        if m == 0 || m > 31 {
            return Err(Error::InvalidParam(format!(
                "extension degree must be in [1, 31], got {m}"
            )));
        }
        if modulus >> m != 1 || !is_irreducible_gf2(modulus) {
            return Err(Error::InvalidParam(format!(
                "{modulus:#b} is not an irreducible polynomial of degree {m}"
            )));
        }
        let mut f = Field {
            kind: FieldKind::BinaryExtension,
            p: 2,
            m,
            q: 1u64 << m,
            modulus,
            generator: 0,
        };
        f.generator = f.find_generator();
        Ok(f)
    }

    pub fn order(&self) -> u64 {
        self.q
    }

    pub fn contains(&self, a: u32) -> bool {
        (a as u64) < self.q
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.q as u32
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        match self.kind {
            FieldKind::BinaryExtension => a ^ b,
            FieldKind::Prime => ((a as u64 + b as u64) % self.q) as u32,
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        match self.kind {
            FieldKind::BinaryExtension => a,
            FieldKind::Prime => {
                if a == 0 {
                    0
                } else {
                    (self.q - a as u64) as u32
                }
            }
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        match self.kind {
            FieldKind::Prime => ((a as u64 * b as u64) % self.q) as u32,
            FieldKind::BinaryExtension => gf2_mulmod(a as u64, b as u64, self.modulus, self.m) as u32,
        }
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u32) -> Result<u32> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(a, self.q - 2))
    }

    pub fn div(&self, a: u32, b: u32) -> Result<u32> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// g^j for the field generator g.
    pub fn gen_pow(&self, j: u64) -> u32 {
        self.pow(self.generator, j % (self.q - 1))
    }

    /// Multiplicative order of a nonzero element.
    pub fn mult_order(&self, a: u32) -> Result<u64> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        let mut ord = self.q - 1;
        for (p, _) in factorize(self.q - 1) {
            while ord % p == 0 && self.pow(a, ord / p) == 1 {
                ord /= p;
            }
        }
        Ok(ord)
    }

    fn find_generator(&self) -> u32 {
        let n = self.q - 1;
        let primes: Vec<u64> = factorize(n).into_iter().map(|(p, _)| p).collect();
        (1..self.q as u32)
            .find(|&g| primes.iter().all(|&p| self.pow(g, n / p) != 1))
            .expect("every finite field has a primitive element")
    }

    /// Evaluates the polynomial with coefficients `coeffs` (constant term first) at `x`.
    pub fn poly_eval(&self, coeffs: &[u32], x: u32) -> u32 {
        coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| self.add(self.mul(acc, x), c))
    }
}

fn gf2_mulmod(mut a: u64, mut b: u64, modulus: u64, m: u32) -> u64 {
    let top = 1u64 << m;
    let mut r = 0;
    while b != 0 {
        if b & 1 == 1 {
            r ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a & top != 0 {
            a ^= modulus;
        }
    }
    r
}

fn gf2_degree(a: u64) -> i32 {
    63 - a.leading_zeros() as i32
}

fn gf2_rem(mut a: u64, b: u64) -> u64 {
    let db = gf2_degree(b);
    while a != 0 && gf2_degree(a) >= db {
        a ^= b << (gf2_degree(a) - db);
    }
    a
}

fn gf2_gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = gf2_rem(a, b);
        a = b;
        b = r;
    }
    a
}

/// Ben-Or irreducibility test for a binary polynomial given as a bit vector.
pub fn is_irreducible_gf2(f: u64) -> bool {
    let m = gf2_degree(f);
    if m < 1 {
        return false;
    }
    if m == 1 {
        return true;
    }
    if f & 1 == 0 {
        return false;
    }
    let m = m as u32;
    let mut h = 2u64;
    for _ in 0..m / 2 {
        h = gf2_mulmod(h, h, f, m);
        if gf2_gcd(f, h ^ 2) != 1 {
            return false;
        }
    }
    true
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(r, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        r
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Prime factorization by trial division as (prime, exponent) pairs.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Solves the square system `a x = b`, failing with [`Error::Singular`] when `a` is not invertible.
pub fn solve_linear(field: &Field, a: &[Vec<u32>], b: &[u32]) -> Result<Vec<u32>> {
    let n = a.len();
    if b.len() != n || a.iter().any(|row| row.len() != n) {
        return Err(Error::Dimension(format!(
            "expected a square {n}x{n} system with {n} right-hand sides"
        )));
    }
    let (x, rank) = eliminate(field, a, b)?.ok_or(Error::Singular)?;
    if rank < n {
        return Err(Error::Singular);
    }
    if !check_solution(field, a, b, &x) {
        return Err(Error::Singular);
    }
    Ok(x)
}

/// Returns some solution of a rectangular system (free variables set to zero), or `None` if inconsistent.
pub fn solve_any(field: &Field, a: &[Vec<u32>], b: &[u32]) -> Result<Option<Vec<u32>>> {
    if b.len() != a.len() {
        return Err(Error::Dimension("row count differs from right-hand side".into()));
    }
    let cols = a.first().map_or(0, |r| r.len());
    if a.iter().any(|row| row.len() != cols) {
        return Err(Error::Dimension("ragged matrix".into()));
    }
    Ok(eliminate(field, a, b)?.map(|(x, _)| x))
}

fn check_solution(field: &Field, a: &[Vec<u32>], b: &[u32], x: &[u32]) -> bool {
    a.iter().zip(b).all(|(row, &bi)| {
        row.iter()
            .zip(x)
            .fold(0, |acc, (&aij, &xj)| field.add(acc, field.mul(aij, xj)))
            == bi
    })
}

fn eliminate(field: &Field, a: &[Vec<u32>], b: &[u32]) -> Result<Option<(Vec<u32>, usize)>> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut aug: Vec<Vec<u32>> = a
        .iter()
        .zip(b)
        .map(|(row, &bi)| {
            let mut r = row.clone();
            r.push(bi);
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| aug[i][c] != 0) else {
            continue;
        };
        aug.swap(r, pr);
        let inv = field.inv(aug[r][c])?;
        for v in aug[r].iter_mut() {
            *v = field.mul(*v, inv);
        }
        let pivot_row = aug[r].clone();
        for (i, row) in aug.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let f = row[c];
                for (v, &p) in row.iter_mut().zip(&pivot_row).skip(c) {
                    *v = field.sub(*v, field.mul(f, p));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if aug[r..].iter().any(|row| row[cols] != 0) {
        return Ok(None);
    }
    let mut x = vec![0; cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = aug[i][cols];
    }
    Ok(Some((x, pivots.len())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_irreducible(f: u64) -> bool {
        let deg = gf2_degree(f);
        (2u64..1 << (deg / 2 + 1))
            .filter(|&g| gf2_degree(g) >= 1 && gf2_degree(g) <= deg / 2)
            .all(|g| gf2_rem(f, g) != 0)
    }

    #[test]
    fn gf2_is_trivial() {
        let f = Field::make(FieldKind::Prime, 2, 1).unwrap();
        assert_eq!(f.generator, 1);
        assert_eq!(f.add(1, 1), 0);
    }

    #[test]
    fn gf8_default_modulus() {
        let f = Field::make(FieldKind::BinaryExtension, 2, 3).unwrap();
        assert_eq!(f.modulus, 0b1011);
        let smallest = (8u64..16).find(|&p| brute_irreducible(p)).unwrap();
        assert_eq!(f.modulus, smallest);
        assert_eq!(f.generator, 2);
        assert_eq!(f.pow(2, 3), 3);
    }

    #[test]
    fn gf53_generator_and_inverse() {
        let f = Field::prime(53).unwrap();
        assert_eq!(f.generator, 2);
        let order_of_two = (1..=52u64).find(|&e| f.pow(2, e) == 1).unwrap();
        assert_eq!(order_of_two, 52);
        assert_eq!(f.inv(2).unwrap(), 27);
        assert_eq!(f.inv(0), Err(Error::DivisionByZero));
    }

    #[test]
    fn rejects_bad_fields() {
        assert!(Field::prime(15).is_err());
        assert!(Field::make(FieldKind::BinaryExtension, 3, 2).is_err());
        assert!(Field::binary_with_modulus(3, 0b1001).is_err());
    }

    #[test]
    fn irreducibility_matches_trial_division() {
        for f in 2u64..1 << 11 {
            assert_eq!(is_irreducible_gf2(f), brute_irreducible(f), "{f:#b}");
        }
    }

    #[test]
    fn generator_powers_enumerate_nonzero_elements() {
        let fields = [
            Field::prime(2).unwrap(),
            Field::prime(53).unwrap(),
            Field::prime(191).unwrap(),
            Field::binary(3).unwrap(),
            Field::binary(8).unwrap(),
            Field::binary(12).unwrap(),
            Field::binary(16).unwrap(),
        ];
        for f in fields {
            let mut seen = vec![false; f.q as usize];
            let mut x = 1u32;
            for _ in 0..f.q - 1 {
                assert!(!seen[x as usize], "repeat in {f:?}");
                seen[x as usize] = true;
                x = f.mul(x, f.generator);
            }
            assert_eq!(x, 1);
            assert!(!seen[0] && seen[1..].iter().all(|&s| s));
        }
    }

    #[test]
    fn inverse_round_trip_sampled() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for f in [Field::prime(65521).unwrap(), Field::binary(16).unwrap(), Field::binary(20).unwrap()] {
            for _ in 0..10_000 {
                let a = rng.gen_range(1..f.q) as u32;
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            }
        }
    }

    #[test]
    fn solve_linear_examples() {
        let f = Field::prime(7).unwrap();
        let id = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]];
        assert_eq!(solve_linear(&f, &id, &[3, 4, 5]).unwrap(), vec![3, 4, 5]);
        let a = vec![vec![1, 1], vec![1, 2]];
        assert_eq!(solve_linear(&f, &a, &[0, 1]).unwrap(), vec![6, 1]);
        let z = vec![vec![0, 0], vec![0, 0]];
        assert_eq!(solve_linear(&f, &z, &[1, 0]), Err(Error::Singular));
        assert!(matches!(solve_linear(&f, &a, &[1]), Err(Error::Dimension(_))));
    }

    #[test]
    fn solve_any_rectangular() {
        let f = Field::prime(5).unwrap();
        let a = vec![vec![1, 2, 3]];
        let x = solve_any(&f, &a, &[4]).unwrap().unwrap();
        assert_eq!(f.add(f.add(x[0], f.mul(2, x[1])), f.mul(3, x[2])), 4);
        let inconsistent = vec![vec![1, 1], vec![2, 2]];
        assert_eq!(solve_any(&f, &inconsistent, &[1, 3]).unwrap(), None);
    }

    #[test]
    fn primality() {
        let sieve: Vec<u64> = (0..2000).filter(|&n| (2..n).all(|d| n % d != 0) && n > 1).collect();
        let fast: Vec<u64> = (0..2000).filter(|&n| is_prime(n)).collect();
        assert_eq!(sieve, fast);
        assert!(is_prime(4_294_967_291));
        assert!(!is_prime(4_294_967_297));
    }

    proptest! {
        #[test]
        fn field_axioms_gf256(a in 0u32..256, b in 0u32..256, c in 0u32..256) {
            let f = Field::binary(8).unwrap();
            prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
            prop_assert_eq!(f.sub(f.add(a, b), b), a);
        }

        #[test]
        fn field_axioms_prime(a in 0u32..101, b in 1u32..101) {
            let f = Field::prime(101).unwrap();
            prop_assert_eq!(f.mul(f.div(a, b).unwrap(), b), a);
            prop_assert_eq!(f.add(a, f.neg(a)), 0);
        }

        #[test]
        fn solve_linear_reverifies(seed in 0u64..500, n in 1usize..6) {
            use rand::{Rng, SeedableRng};
            let f = Field::prime(13).unwrap();
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let a: Vec<Vec<u32>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(0..13)).collect()).collect();
            let b: Vec<u32> = (0..n).map(|_| rng.gen_range(0..13)).collect();
            if let Ok(x) = solve_linear(&f, &a, &b) {
                prop_assert!(check_solution(&f, &a, &b, &x));
            }
        }
    }
}
