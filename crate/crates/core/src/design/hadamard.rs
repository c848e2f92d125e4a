//! Sylvester and Paley Hadamard matrices and the Hadamard designs they give.
//!
//! Matrices are labeled `c0…c_{n-1}` with `c0` the all-ones column after
//! normalization, so [`to_hadamard_design`] keeps the labels `c1…c_{n-1}`.

use super::{ColumnLabel, SignMatrix};
use crate::error::{Error, Result};

/// Largest Hadamard order built unless a caller asks for more.
pub const DEFAULT_MAX_ORDER: usize = 64;

/// Which construction to use for a requested order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Construction {
    Sylvester,
    Paley,
    /// Sylvester for powers of two, Paley otherwise.
    Auto,
}

fn matrix_labels(n: usize) -> Vec<ColumnLabel> {
    (0..n).map(ColumnLabel::Main).collect()
}

/// The `2^k × 2^k` Sylvester matrix, capped at [`DEFAULT_MAX_ORDER`].
pub fn sylvester_hadamard(k: u32) -> Result<SignMatrix> {
    sylvester_hadamard_bounded(k, DEFAULT_MAX_ORDER)
}

pub fn sylvester_hadamard_bounded(k: u32, max_order: usize) -> Result<SignMatrix> {
    if k == 0 {
        return Err(Error::OutOfRange("Sylvester exponent must be at least 1".into()));
    }
    let order = 1usize
        .checked_shl(k)
        .filter(|&n| n <= max_order)
        .ok_or(Error::OrderTooLarge { order: 1usize.checked_shl(k).unwrap_or(usize::MAX), max: max_order })?;
    let mut m = vec![1i8];
    let mut size = 1;
    while size < order {
        let next = size * 2;
        let mut grown = vec![0i8; next * next];
        for i in 0..size {
            for j in 0..size {
                let v = m[i * size + j];
                grown[i * next + j] = v;
                grown[i * next + j + size] = v;
                grown[(i + size) * next + j] = v;
                grown[(i + size) * next + j + size] = -v;
            }
        }
        m = grown;
        size = next;
    }
    SignMatrix::new(order, order, m, matrix_labels(order))
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Quadratic character of `a` modulo the odd prime `p`.
fn legendre_table(p: u64) -> Vec<i8> {
    let mut chi = vec![-1i8; p as usize];
    chi[0] = 0;
    for x in 1..p {
        chi[((x * x) % p) as usize] = 1;
    }
    chi
}

/// Paley matrix from the odd prime `p`, normalized.
///
/// Type I (order `p+1`) when `p ≡ 3 (mod 4)`, type II (order `2(p+1)`) when
/// `p ≡ 1 (mod 4)`.
pub fn paley_hadamard(p: u64) -> Result<SignMatrix> {
    paley_hadamard_bounded(p, DEFAULT_MAX_ORDER)
}

pub fn paley_hadamard_bounded(p: u64, max_order: usize) -> Result<SignMatrix> {
    if p < 3 || !is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    let order = if p % 4 == 3 { p + 1 } else { 2 * (p + 1) } as usize;
    if order > max_order {
        return Err(Error::OrderTooLarge { order, max: max_order });
    }
    let chi = legendre_table(p);
    let ps = p as usize;
    // Jacobsthal matrix Q[a][b] = chi(b - a)
    let q = |a: usize, b: usize| chi[(b + ps - a) % ps];

    let entries = if p % 4 == 3 {
        // H = I + [[0, 1ᵀ], [-1, Q]]
        let n = order;
        let mut h = vec![0i8; n * n];
        for i in 0..n {
            for j in 0..n {
                let s = match (i, j) {
                    (0, 0) => 0,
                    (0, _) => 1,
                    (_, 0) => -1,
                    _ => q(i - 1, j - 1),
                };
                h[i * n + j] = s + (i == j) as i8;
            }
        }
        h
    } else {
        // C = [[0, 1ᵀ], [1, Q]]; 0 -> [[1,-1],[-1,-1]], ±1 -> ±[[1,1],[1,-1]]
        let c_size = ps + 1;
        let c = |i: usize, j: usize| -> i8 {
            match (i, j) {
                (0, 0) => 0,
                (0, _) | (_, 0) => 1,
                _ => q(i - 1, j - 1),
            }
        };
        let n = order;
        let mut h = vec![0i8; n * n];
        for i in 0..c_size {
            for j in 0..c_size {
                let block: [[i8; 2]; 2] = match c(i, j) {
                    0 => [[1, -1], [-1, -1]],
                    s => [[s, s], [s, -s]],
                };
                for (di, brow) in block.iter().enumerate() {
                    for (dj, &v) in brow.iter().enumerate() {
                        h[(2 * i + di) * n + 2 * j + dj] = v;
                    }
                }
            }
        }
        h
    };
    normalize(&SignMatrix::new(order, order, entries, matrix_labels(order))?)
}

/// True iff `m` is square with `M·Mᵀ = nI`.
pub fn is_hadamard(m: &SignMatrix) -> bool {
    let n = m.rows();
    if m.cols() != n {
        return false;
    }
    let gram = m.gram_rows();
    (0..n).all(|a| (0..n).all(|b| gram[a * n + b] == if a == b { n as i64 } else { 0 }))
}

/// Negates rows and then columns so the first column and first row are all
/// `+1`.
pub fn normalize(m: &SignMatrix) -> Result<SignMatrix> {
    if !is_hadamard(m) {
        return Err(Error::NotHadamard);
    }
    let mut out = m.clone();
    for i in 0..out.rows() {
        if out.get(i, 0) < 0 {
            out.negate_row(i);
        }
    }
    for j in 0..out.cols() {
        if out.get(0, j) < 0 {
            out.negate_col(j);
        }
    }
    Ok(out)
}

/// Deletes the all-ones first column, giving an OA(n, n-1, 2, 2) labeled
/// `c1…c_{n-1}`.
pub fn to_hadamard_design(m: &SignMatrix) -> Result<SignMatrix> {
    if !is_hadamard(m) {
        return Err(Error::NotHadamard);
    }
    let n = m.rows();
    if (0..n).any(|i| m.get(i, 0) != 1) {
        return Err(Error::NotNormalized);
    }
    if n < 2 {
        return Err(Error::Shape("order 1 has no design columns".into()));
    }
    let rows: Vec<Vec<i8>> = (0..n).map(|i| m.row(i)[1..].to_vec()).collect();
    SignMatrix::from_rows(&rows)
}

/// Normalized Hadamard matrix of order `n` from the requested construction.
pub fn hadamard_matrix(n: usize, construction: Construction) -> Result<SignMatrix> {
    hadamard_matrix_bounded(n, construction, DEFAULT_MAX_ORDER)
}

pub fn hadamard_matrix_bounded(n: usize, construction: Construction, max_order: usize) -> Result<SignMatrix> {
    if n > max_order {
        return Err(Error::OrderTooLarge { order: n, max: max_order });
    }
    if n < 4 || !n.is_multiple_of(4) {
        return Err(Error::NotMultipleOfFour(n));
    }
    let power_of_two = n.is_power_of_two();
    match construction {
        Construction::Sylvester if power_of_two => sylvester_hadamard_bounded(n.trailing_zeros(), max_order),
        Construction::Sylvester => Err(Error::NoConstruction(n)),
        Construction::Auto if power_of_two => sylvester_hadamard_bounded(n.trailing_zeros(), max_order),
        Construction::Paley | Construction::Auto => {
            let type_one = (n - 1) as u64;
            if type_one % 4 == 3 && is_prime(type_one) {
                return paley_hadamard_bounded(type_one, max_order);
            }
            let type_two = (n / 2) as u64 - 1;
            if n.is_multiple_of(2) && type_two % 4 == 1 && is_prime(type_two) {
                return paley_hadamard_bounded(type_two, max_order);
            }
            Err(Error::NoConstruction(n))
        }
    }
}

/// Hadamard design `H(n, n-1)` of order `n`.
pub fn hadamard_design(n: usize, construction: Construction) -> Result<SignMatrix> {
    to_hadamard_design(&hadamard_matrix(n, construction)?)
}
