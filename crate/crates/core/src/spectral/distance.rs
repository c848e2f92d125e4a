use num_bigint::BigInt;
use serde::Serialize;

use super::KrawtchoukTable;
use crate::design::SignMatrix;
use crate::rational::Rational;

/// `E_j`: ordered row pairs (including a row with itself) at Hamming
/// distance `j`, divided by `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DistanceDistribution {
    pub n: usize,
    pub q: usize,
    /// Raw ordered-pair counts, indexed by distance.
    #[serde(skip)]
    pub counts: Vec<u64>,
    pub values: Vec<Rational>,
}

impl DistanceDistribution {
    pub fn e(&self, j: usize) -> &Rational {
        &self.values[j]
    }

    /// Distances carrying a non-zero `E_j`.
    pub fn support(&self) -> Vec<usize> {
        (0..=self.q).filter(|&j| self.counts[j] > 0).collect()
    }
}

pub fn distance_distribution(h: &SignMatrix) -> DistanceDistribution {
    let (n, q) = (h.rows(), h.cols());
    let words = q.div_ceil(64);
    let mut packed = vec![0u64; n * words];
    for i in 0..n {
        for (j, &v) in h.row(i).iter().enumerate() {
            if v < 0 {
                packed[i * words + j / 64] |= 1 << (j % 64);
            }
        }
    }
    let row = |i: usize| &packed[i * words..(i + 1) * words];
    let mut counts = vec![0u64; q + 1];
    counts[0] += n as u64;
    for a in 0..n {
        for b in a + 1..n {
            let dist: u32 = row(a).iter().zip(row(b)).map(|(x, y)| (x ^ y).count_ones()).sum();
            counts[dist as usize] += 2;
        }
    }
    let values = counts.iter().map(|&c| Rational::new(c, n as u64)).collect();
    DistanceDistribution { n, q, counts, values }
}

/// Generalized wordlength pattern `A_1 … A_q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct GwpVector {
    pub values: Vec<Rational>,
}

impl GwpVector {
    /// `A_i` for `1 <= i <= q`.
    pub fn a(&self, i: usize) -> &Rational {
        &self.values[i - 1]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// `A_i = (1/n) Σ_j P_i(j; q) E_j`.
pub fn gwp_via_krawtchouk(h: &SignMatrix) -> GwpVector {
    let dist = distance_distribution(h);
    let (n, q) = (dist.n, dist.q);
    let table = KrawtchoukTable::new(q);
    let support = dist.support();
    // (1/n)·Σ_j P_i(j)·count_j/n, accumulated as an integer over n²
    let n_sq = BigInt::from(n) * BigInt::from(n);
    let values = (1..=q)
        .map(|i| {
            let total: BigInt = support.iter().map(|&j| table.value(i, j) * dist.counts[j]).sum();
            Rational::new(total, n_sq.clone())
        })
        .collect();
    GwpVector { values }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::{drop_columns, hadamard_design, Construction};

    fn r(a: i64, b: i64) -> Rational {
        Rational::new(a, b)
    }

    #[test]
    fn saturated_design_distribution() {
        let h = hadamard_design(12, Construction::Paley).unwrap();
        let d = distance_distribution(&h);
        assert_eq!(d.support(), vec![0, 6]);
        assert_eq!(d.e(0), &r(1, 1));
        assert_eq!(d.e(6), &r(11, 1));
    }

    #[test]
    fn one_column_dropped() {
        let h = hadamard_design(12, Construction::Paley).unwrap();
        let d = distance_distribution(&drop_columns(&h, &[4]).unwrap().kept);
        assert_eq!(d.support(), vec![0, 5, 6]);
        assert_eq!(d.e(5), &r(6, 1));
        assert_eq!(d.e(6), &r(5, 1));
        let total: Rational = d.values.iter().cloned().sum();
        assert_eq!(total, r(12, 1));
    }

    #[test]
    fn gwp_of_saturated_design() {
        let h = hadamard_design(12, Construction::Paley).unwrap();
        let a = gwp_via_krawtchouk(&h);
        assert_eq!(a.len(), 11);
        assert_eq!(a.a(1), &Rational::zero());
        assert_eq!(a.a(2), &Rational::zero());
        assert_eq!(a.a(3), &r(55, 3));
        assert_eq!(a.a(4), &r(110, 3));
        assert!(a.values.iter().all(|v| !v.is_negative()));
    }

    #[test]
    fn repeated_rows_raise_e0() {
        let x = SignMatrix::from_rows(&[vec![1, 1], vec![1, 1], vec![-1, -1], vec![-1, 1]]).unwrap();
        let d = distance_distribution(&x);
        assert_eq!(d.counts, vec![6, 6, 4]);
        assert_eq!(d.e(0), &r(3, 2));
    }
}
