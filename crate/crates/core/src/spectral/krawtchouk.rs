use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// `C(n, k)`, zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Binary Krawtchouk polynomial `P_i(j; q) = Σ_k (-1)^k C(j,k) C(q-j, i-k)`.
pub fn krawtchouk(i: usize, j: usize, q: usize) -> Result<BigInt> {
    if i > q || j > q {
        return Err(Error::OutOfRange(format!("Krawtchouk P_{i}({j}; {q}) needs i, j <= q")));
    }
    Ok(KrawtchoukTable::new(q).value(i, j))
}

/// Pascal rows up to `q`, for evaluating many `P_i(j; q)` at one length.
#[derive(Debug, Clone)]
pub struct KrawtchoukTable {
    q: usize,
    pascal: Vec<Vec<BigInt>>,
}

impl KrawtchoukTable {
    pub fn new(q: usize) -> Self {
        let mut pascal: Vec<Vec<BigInt>> = Vec::with_capacity(q + 1);
        for n in 0..=q {
            let mut row = vec![BigInt::one(); n + 1];
            for k in 1..n {
                row[k] = &pascal[n - 1][k - 1] + &pascal[n - 1][k];
            }
            pascal.push(row);
        }
        KrawtchoukTable { q, pascal }
    }

    fn choose(&self, n: usize, k: usize) -> Option<&BigInt> {
        self.pascal.get(n).and_then(|row| row.get(k))
    }

    /// `P_i(j; q)`; both arguments must be at most `q`.
    pub fn value(&self, i: usize, j: usize) -> BigInt {
        assert!(i <= self.q && j <= self.q);
        let mut acc = BigInt::zero();
        for k in 0..=i.min(j) {
            let Some(b) = self.choose(self.q - j, i - k) else { continue };
            let term = &self.pascal[j][k] * b;
            if k % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }
}
