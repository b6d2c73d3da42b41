//! Exact ranks: over GF(2) on packed rows, over GF(p), and over the rationals.
//!
//! The rational rank is certified by a modular computation plus an exact
//! kernel check: the rank modulo a prime is a lower bound, and `n - r`
//! reconstructed kernel vectors multiplied out over the integers give the
//! matching upper bound. When reconstruction or the integer check fails the
//! computation falls back to fraction-free Bareiss elimination on big integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::AlgebraError;
use crate::gf::is_prime;
use crate::graph::Graph;

/// Mersenne prime 2^61 - 1.
const MODULUS: u64 = (1 << 61) - 1;

pub type IntMatrix = Vec<Vec<i64>>;

/// Rank of packed rows over GF(2).
pub fn gf2_rank(mut rows: Vec<Vec<u64>>, columns: usize) -> usize {
    let mut rank = 0;
    for col in 0..columns {
        let (w, bit) = (col / 64, 1u64 << (col % 64));
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][w] & bit != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let (head, tail) = rows.split_at_mut(rank + 1);
        let prow = &head[rank];
        for row in tail.iter_mut() {
            if row[w] & bit != 0 {
                for (a, b) in row[w..].iter_mut().zip(&prow[w..]) {
                    *a ^= b;
                }
            }
        }
        rank += 1;
    }
    rank
}

#[inline]
fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    acc
}

#[inline]
fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn reduce(m: &[Vec<i64>], p: u64) -> Vec<Vec<u64>> {
    m.iter()
        .map(|row| row.iter().map(|&x| x.rem_euclid(p as i64) as u64).collect())
        .collect()
}

/// Reduced row echelon form over GF(p) in place; returns pivot columns.
fn rref_mod(a: &mut [Vec<u64>], p: u64) -> Vec<usize> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, pr);
        let inv = inv_mod(a[r][c], p);
        for x in a[r][c..].iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[c] == 0 {
                continue;
            }
            let f = row[c];
            for (x, &y) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                *x = (*x + p - mul_mod(f, y, p)) % p;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank over GF(p) for word-sized primes. Forward elimination only.
pub fn rank_mod_p(m: &[Vec<i64>], p: u64) -> usize {
    let mut a = reduce(m, p);
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..rows).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, pr);
        let inv = inv_mod(a[r][c], p);
        let (head, tail) = a.split_at_mut(r + 1);
        let prow = &head[r];
        for row in tail.iter_mut() {
            if row[c] == 0 {
                continue;
            }
            let f = mul_mod(row[c], inv, p);
            for (x, &y) in row[c..].iter_mut().zip(&prow[c..]) {
                *x = (*x + p - mul_mod(f, y, p)) % p;
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// Rank of the adjacency matrix over GF(p).
pub fn p_rank(g: &Graph, p: u64) -> Result<usize, AlgebraError> {
    if !is_prime(p) {
        return Err(AlgebraError::NotPrime(p));
    }
    if p == 2 {
        let rows = (0..g.order()).map(|x| g.row(x).to_vec()).collect();
        return Ok(gf2_rank(rows, g.order()));
    }
    Ok(rank_mod_p(&g.shifted_matrix(0), p))
}

/// Fraction-free Gaussian elimination: after step `t` every active entry is a
/// `(t+1)`-minor of the input, so each division by the previous pivot is exact.
pub fn bareiss_rank(m: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, pr);
        let (head, tail) = a.split_at_mut(r + 1);
        let prow = &head[r];
        let pivot = &prow[c];
        for row in tail.iter_mut() {
            let f = row[c].clone();
            for j in c + 1..cols {
                let t = pivot * &row[j] - &f * &prow[j];
                row[j] = t / &prev;
            }
            row[c] = BigInt::zero();
        }
        prev = pivot.clone();
        r += 1;
    }
    r
}

/// Rational reconstruction of `a mod p` with numerator and denominator below `bound`.
fn reconstruct(a: u64, p: u64, bound: i128) -> Option<(i128, i128)> {
    let (mut r0, mut r1) = (p as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 >= bound {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if t1 == 0 || t1.abs() >= bound {
        return None;
    }
    let (num, den) = if t1 < 0 { (-r1, -t1) } else { (r1, t1) };
    (num.gcd(&den) == 1).then_some((num, den))
}

/// Integer kernel vectors of `m` lifted from the GF(p) reduced echelon form,
/// each verified exactly. `None` if any vector fails to lift.
fn lifted_kernel(m: &[Vec<i64>], rref: &[Vec<u64>], pivots: &[usize]) -> Option<usize> {
    let cols = m.first().map_or(0, Vec::len);
    let bound = ((MODULUS / 2) as f64).sqrt() as i128;
    let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
    let mut found = 0;
    for free in (0..cols).filter(|c| !pivot_set.contains(c)) {
        let mut fracs = vec![(0i128, 1i128); cols];
        fracs[free] = (1, 1);
        for (row, &pc) in pivots.iter().enumerate() {
            let value = (MODULUS - rref[row][free]) % MODULUS;
            fracs[pc] = reconstruct(value, MODULUS, bound)?;
        }
        let lcm = fracs.iter().fold(BigInt::one(), |acc, &(_, d)| acc.lcm(&BigInt::from(d)));
        let vector: Vec<BigInt> = fracs.iter().map(|&(n, d)| BigInt::from(n) * (&lcm / BigInt::from(d))).collect();
        if !annihilates(m, &vector) {
            return None;
        }
        found += 1;
    }
    Some(found)
}

fn annihilates(m: &[Vec<i64>], vector: &[BigInt]) -> bool {
    let small: Option<Vec<i64>> = vector
        .iter()
        .map(|x| x.to_i64().filter(|v| v.unsigned_abs() < 1 << 40))
        .collect();
    match small {
        // |row| * 2^40 * n stays far below i128 range for the sizes handled here
        Some(v) => m.iter().all(|row| row.iter().zip(&v).map(|(&a, &b)| a as i128 * b as i128).sum::<i128>() == 0),
        None => m.iter().all(|row| {
            row.iter().zip(vector).map(|(&a, b)| b * a).fold(BigInt::zero(), |acc, t| acc + t).is_zero()
        }),
    }
}

/// Exact rank over the rationals.
pub fn rational_rank(m: &[Vec<i64>]) -> usize {
    let mut a = reduce(m, MODULUS);
    let pivots = rref_mod(&mut a, MODULUS);
    let rank = pivots.len();
    let cols = m.first().map_or(0, Vec::len);
    match lifted_kernel(m, &a, &pivots) {
        Some(nullity) if nullity == cols - rank => rank,
        _ => bareiss_rank(m),
    }
}

/// Multiplicity of the integer eigenvalue `theta`: `n - rank_Q(A - θI)`.
pub fn exact_multiplicity(g: &Graph, theta: i64) -> usize {
    g.order() - rational_rank(&g.shifted_matrix(-theta))
}

/// Nullity over the rationals of `c0 I + c1 A + c2 A^2`.
pub fn polynomial_nullity(g: &Graph, c0: i64, c1: i64, c2: i64) -> usize {
    let n = g.order();
    let mut m = vec![vec![0i64; n]; n];
    for (x, row) in m.iter_mut().enumerate() {
        for y in 0..n {
            let a2 = if x == y { g.degree(x) } else { g.common_unchecked(x, y) } as i64;
            row[y] = c2 * a2 + c1 * g.has_edge(x, y) as i64 + if x == y { c0 } else { 0 };
        }
    }
    n - rational_rank(&m)
}
