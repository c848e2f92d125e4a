//! J-characteristics, distance distributions, Krawtchouk polynomials and
//! generalized wordlength patterns of two-level arrays.
//!
//! Columns are bit-packed (bit set ⇔ entry `-1`) so that the product of a
//! column subset is an XOR and its J-characteristic is
//! `n - 2·popcount`. Subsets are always enumerated in lexicographic order of
//! column positions; the exhaustive sums split the work on the first column
//! of each subset and reduce with an integer sum, so results do not depend
//! on scheduling.

mod distance;
mod krawtchouk;
pub mod lemmas;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::design::{drop_columns, SignMatrix};
use crate::error::{Error, Result};

pub use self::distance::{distance_distribution, gwp_via_krawtchouk, DistanceDistribution, GwpVector};
pub use self::krawtchouk::{binomial, krawtchouk, KrawtchoukTable};

/// Column-major bit-packed copy of a sign matrix.
#[derive(Debug, Clone)]
pub struct PackedColumns {
    rows: usize,
    words: usize,
    data: Vec<u64>,
}

impl PackedColumns {
    pub fn from_matrix(h: &SignMatrix) -> Self {
        let rows = h.rows();
        let words = rows.div_ceil(64);
        let mut data = vec![0u64; words * h.cols()];
        for j in 0..h.cols() {
            for i in 0..rows {
                if h.get(i, j) < 0 {
                    data[j * words + i / 64] |= 1 << (i % 64);
                }
            }
        }
        PackedColumns { rows, words, data }
    }

    pub fn from_columns<'a>(rows: usize, columns: impl IntoIterator<Item = &'a [i8]>) -> Self {
        let words = rows.div_ceil(64);
        let mut data = Vec::new();
        for col in columns {
            debug_assert_eq!(col.len(), rows);
            let start = data.len();
            data.resize(start + words, 0);
            for (i, &v) in col.iter().enumerate() {
                if v < 0 {
                    data[start + i / 64] |= 1 << (i % 64);
                }
            }
        }
        PackedColumns { rows, words, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.data.len() / self.words.max(1)
    }

    #[inline]
    pub fn column(&self, j: usize) -> &[u64] {
        &self.data[j * self.words..(j + 1) * self.words]
    }

    #[inline]
    fn j_of(&self, product: &[u64]) -> i64 {
        let ones: u32 = product.iter().map(|w| w.count_ones()).sum();
        self.rows as i64 - 2 * ones as i64
    }

    /// Inner product of columns `a` and `b`.
    #[inline]
    pub fn dot(&self, a: usize, b: usize) -> i64 {
        let ones: u32 = self.column(a).iter().zip(self.column(b)).map(|(x, y)| (x ^ y).count_ones()).sum();
        self.rows as i64 - 2 * ones as i64
    }

    /// J-characteristic of an arbitrary (unchecked) set of positions.
    pub fn j(&self, subset: &[usize]) -> i64 {
        let mut acc = vec![0u64; self.words];
        for &c in subset {
            for (a, w) in acc.iter_mut().zip(self.column(c)) {
                *a ^= w;
            }
        }
        self.j_of(&acc)
    }

    /// Calls `f(subset, J)` for every `k`-subset of `pool` (lexicographic in
    /// pool order), where J includes the product `seed`.
    pub fn for_each_subset<F: FnMut(&[usize], i64)>(&self, pool: &[usize], k: usize, seed: &[u64], f: &mut F) {
        if pool.len() < k {
            return;
        }
        let mut chosen = Vec::with_capacity(k);
        let mut stack = vec![seed.to_vec(); k + 1];
        self.visit(pool, k, 0, &mut chosen, &mut stack, f);
    }

    fn visit<F: FnMut(&[usize], i64)>(
        &self,
        pool: &[usize],
        k: usize,
        start: usize,
        chosen: &mut Vec<usize>,
        stack: &mut [Vec<u64>],
        f: &mut F,
    ) {
        let depth = chosen.len();
        if depth == k {
            f(chosen, self.j_of(&stack[depth]));
            return;
        }
        let remaining = k - depth;
        for idx in start..=pool.len() - remaining {
            let col = pool[idx];
            let (lo, hi) = stack.split_at_mut(depth + 1);
            for ((dst, src), w) in hi[0].iter_mut().zip(&lo[depth]).zip(self.column(col)) {
                *dst = src ^ w;
            }
            chosen.push(col);
            self.visit(pool, k, idx + 1, chosen, stack, f);
            chosen.pop();
        }
    }

    /// Σ J² over `k`-subsets of `pool`, each multiplied by `seed`.
    /// Partitioned on the first pool element and reduced in parallel.
    pub fn sum_sq(&self, pool: &[usize], k: usize, seed: &[u64]) -> u64 {
        if k == 0 {
            let j = self.j_of(seed);
            return (j * j) as u64;
        }
        if pool.len() < k {
            return 0;
        }
        (0..=pool.len() - k)
            .into_par_iter()
            .map(|first| {
                let mut head: Vec<u64> = seed.to_vec();
                for (h, w) in head.iter_mut().zip(self.column(pool[first])) {
                    *h ^= w;
                }
                let mut total = 0u64;
                self.for_each_subset(&pool[first + 1..], k - 1, &head, &mut |_, j| {
                    total += (j * j) as u64;
                });
                total
            })
            .sum()
    }

    fn ones(&self) -> Vec<u64> {
        vec![0u64; self.words]
    }

    fn product_of(&self, subset: &[usize]) -> Vec<u64> {
        let mut acc = self.ones();
        for &c in subset {
            for (a, w) in acc.iter_mut().zip(self.column(c)) {
                *a ^= w;
            }
        }
        acc
    }
}

fn validate_subset(h: &SignMatrix, subset: &[usize]) -> Result<()> {
    if subset.is_empty() {
        return Err(Error::InvalidSubset("empty column subset".into()));
    }
    let mut sorted = subset.to_vec();
    sorted.sort_unstable();
    if let Some(&bad) = sorted.iter().find(|&&c| c >= h.cols()) {
        return Err(Error::ColumnOutOfRange { index: bad, cols: h.cols() });
    }
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidSubset(format!("repeated column in {subset:?}")));
    }
    Ok(())
}

/// `J_s(S)`: sum over runs of the product of the entries in columns `subset`.
pub fn j_characteristic(h: &SignMatrix, subset: &[usize]) -> Result<i64> {
    validate_subset(h, subset)?;
    Ok(PackedColumns::from_matrix(h).j(subset))
}

/// J-characteristics of one order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JSummary {
    pub order: usize,
    pub total_sq: u64,
    /// Per-subset values keyed by column positions, when retained.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub per_subset: Option<BTreeMap<Vec<usize>, i64>>,
}

/// Exhaustive J-characteristics of order `s`; `retain` keeps every value.
pub fn j_summary(h: &SignMatrix, s: usize, retain: bool) -> Result<JSummary> {
    if s == 0 {
        return Err(Error::OutOfRange("J order must be at least 1".into()));
    }
    let packed = PackedColumns::from_matrix(h);
    let pool: Vec<usize> = (0..h.cols()).collect();
    if !retain {
        return Ok(JSummary { order: s, total_sq: packed.sum_sq(&pool, s, &packed.ones()), per_subset: None });
    }
    let mut map = BTreeMap::new();
    let mut total = 0u64;
    packed.for_each_subset(&pool, s, &packed.ones(), &mut |subset, j| {
        total += (j * j) as u64;
        map.insert(subset.to_vec(), j);
    });
    Ok(JSummary { order: s, total_sq: total, per_subset: Some(map) })
}

/// Σ over all `s`-subsets of `J_s(S)²`. Zero when `s` exceeds the column
/// count.
pub fn sum_j_squared(h: &SignMatrix, s: usize) -> Result<u64> {
    Ok(j_summary(h, s, false)?.total_sq)
}

/// Σ of `J_s(S)²` over the `s`-subsets containing every column in `fixed`
/// (one or two positions).
pub fn sum_j_squared_filtered(h: &SignMatrix, s: usize, fixed: &[usize]) -> Result<u64> {
    if !(1..=2).contains(&fixed.len()) {
        return Err(Error::InvalidSubset(format!("fixed set must have 1 or 2 columns, got {}", fixed.len())));
    }
    validate_subset(h, fixed)?;
    if s <= fixed.len() {
        return Err(Error::OutOfRange(format!("order {s} must exceed the {} fixed columns", fixed.len())));
    }
    let packed = PackedColumns::from_matrix(h);
    let pool: Vec<usize> = (0..h.cols()).filter(|c| !fixed.contains(c)).collect();
    Ok(packed.sum_sq(&pool, s - fixed.len(), &packed.product_of(fixed)))
}

/// Number of replicates of the `I = ABC` half fraction in three columns
/// taken from a strength-2 array: `d = (n + J₃) / 8`.
pub fn d_parameter(t1: &[i8], t2: &[i8], t3: &[i8]) -> Result<u64> {
    let n = t1.len();
    if t2.len() != n || t3.len() != n {
        return Err(Error::Shape("d needs three columns of equal length".into()));
    }
    if n == 0 || !n.is_multiple_of(4) {
        return Err(Error::NotMultipleOfFour(n));
    }
    let mut j3 = 0i64;
    for i in 0..n {
        for v in [t1[i], t2[i], t3[i]] {
            if v != 1 && v != -1 {
                return Err(Error::InvalidEntry { row: i, col: 0, value: v as i64 });
            }
        }
        j3 += (t1[i] * t2[i] * t3[i]) as i64;
    }
    let shifted = n as i64 + j3;
    if shifted % 8 != 0 {
        return Err(Error::NonIntegralD { n, j3 });
    }
    Ok((shifted / 8) as u64)
}

/// Checks the four decomposition identities that relate J sums of an array
/// to those of the array with one column removed.
///
/// For every `i0` in `removed` (positions in `parent`), with `H' = H \ {i0}`:
///
/// * `ΣJ²₃(H) = ΣJ²₃(H') + ΣJ²₃(H; i0)`
/// * `ΣJ²₄(H) = ΣJ²₄(H') + ΣJ²₄(H; i0)`
///
/// and for every other column `j0`, with `H'' = H \ {j0}`:
///
/// * `ΣJ²₃(H) = ΣJ²₃(H') + ΣJ²₃(H; i0, j0) + ΣJ²₃(H''; i0)`
/// * `ΣJ²₄(H) = ΣJ²₄(H') + ΣJ²₄(H; i0, j0) + ΣJ²₄(H''; i0)`
///
/// where `ΣJ²_s(A; F)` sums over subsets containing the columns `F`.
pub fn verify_recursions(parent: &SignMatrix, removed: &[usize]) -> Result<bool> {
    if removed.is_empty() {
        return Ok(true);
    }
    validate_subset(parent, removed)?;
    let q = parent.cols();
    let packed = PackedColumns::from_matrix(parent);
    let all: Vec<usize> = (0..q).collect();
    let without = |c: usize| -> Vec<usize> { all.iter().copied().filter(|&x| x != c).collect() };
    let whole = |pool: &[usize], s: usize| packed.sum_sq(pool, s, &packed.ones());
    let containing = |pool: &[usize], s: usize, fixed: &[usize]| -> u64 {
        let rest: Vec<usize> = pool.iter().copied().filter(|c| !fixed.contains(c)).collect();
        if s < fixed.len() {
            return 0;
        }
        packed.sum_sq(&rest, s - fixed.len(), &packed.product_of(fixed))
    };

    for &i0 in removed {
        let child = without(i0);
        // the child is built through drop_columns so the identity is checked
        // against an independently materialised array
        let child_matrix = drop_columns(parent, &[i0])?.kept;
        for s in [3, 4] {
            let total = whole(&all, s);
            let child_total = sum_j_squared(&child_matrix, s)?;
            if child_total != whole(&child, s) {
                return Ok(false);
            }
            if total != child_total + containing(&all, s, &[i0]) {
                return Ok(false);
            }
            for j0 in (0..q).filter(|&c| c != i0) {
                let other_child = without(j0);
                let rhs = child_total + containing(&all, s, &[i0, j0]) + containing(&other_child, s, &[i0]);
                if total != rhs {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::{hadamard_design, sylvester_hadamard, to_hadamard_design, Construction};

    /// Oracle: J from the raw ±1 entries, no packing.
    fn naive_j(h: &SignMatrix, subset: &[usize]) -> i64 {
        (0..h.rows()).map(|i| subset.iter().map(|&c| h.get(i, c) as i64).product::<i64>()).sum()
    }

    fn naive_sum(h: &SignMatrix, s: usize, fixed: &[usize]) -> u64 {
        fn rec(h: &SignMatrix, s: usize, start: usize, cur: &mut Vec<usize>, fixed: &[usize], acc: &mut u64) {
            if cur.len() == s {
                if fixed.iter().all(|f| cur.contains(f)) {
                    let j = naive_j(h, cur);
                    *acc += (j * j) as u64;
                }
                return;
            }
            for c in start..h.cols() {
                cur.push(c);
                rec(h, s, c + 1, cur, fixed, acc);
                cur.pop();
            }
        }
        let mut acc = 0;
        rec(h, s, 0, &mut Vec::new(), fixed, &mut acc);
        acc
    }

    fn h4() -> SignMatrix {
        to_hadamard_design(&sylvester_hadamard(2).unwrap()).unwrap()
    }

    #[test]
    fn j_of_h4_triple() {
        assert_eq!(j_characteristic(&h4(), &[0, 1, 2]).unwrap(), 4);
        assert_eq!(naive_j(&h4(), &[0, 1, 2]), 4);
    }

    #[test]
    fn j_vanishes_for_balanced_columns_and_oa_pairs() {
        let h = hadamard_design(12, Construction::Paley).unwrap();
        for a in 0..h.cols() {
            assert_eq!(j_characteristic(&h, &[a]).unwrap(), 0);
            for b in a + 1..h.cols() {
                assert_eq!(j_characteristic(&h, &[a, b]).unwrap(), 0);
            }
        }
    }

    #[test]
    fn j_rejects_invalid_subsets() {
        let h = h4();
        assert!(j_characteristic(&h, &[]).is_err());
        assert!(j_characteristic(&h, &[0, 0]).is_err());
        assert!(matches!(j_characteristic(&h, &[5]), Err(Error::ColumnOutOfRange { .. })));
    }

    #[test]
    fn packed_sums_match_naive_oracle() {
        let h = hadamard_design(12, Construction::Paley).unwrap();
        for s in 1..=5 {
            assert_eq!(sum_j_squared(&h, s).unwrap(), naive_sum(&h, s, &[]), "s = {s}");
        }
        assert_eq!(sum_j_squared_filtered(&h, 3, &[2]).unwrap(), naive_sum(&h, 3, &[2]));
        assert_eq!(sum_j_squared_filtered(&h, 4, &[2, 7]).unwrap(), naive_sum(&h, 4, &[2, 7]));
    }

    #[test]
    fn multiword_packing_matches_naive() {
        // 128 runs spans two words
        let h = to_hadamard_design(&crate::design::sylvester_hadamard_bounded(7, 128).unwrap()).unwrap();
        let cols: Vec<usize> = (0..8).collect();
        let sub = crate::design::drop_columns(&h, &(8..h.cols()).collect::<Vec<_>>()).unwrap().kept;
        assert_eq!(sub.cols(), cols.len());
        for s in 1..=4 {
            assert_eq!(sum_j_squared(&sub, s).unwrap(), naive_sum(&sub, s, &[]));
        }
    }

    #[test]
    fn summary_retains_lexicographic_values() {
        let summary = j_summary(&h4(), 2, true).unwrap();
        let keys: Vec<_> = summary.per_subset.as_ref().unwrap().keys().cloned().collect();
        assert_eq!(keys, vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        let h = hadamard_design(12, Construction::Paley).unwrap();
        let summary = j_summary(&h, 3, true).unwrap();
        let map = summary.per_subset.unwrap();
        assert_eq!(map.len(), 165);
        assert_eq!(map.values().map(|j| (j * j) as u64).sum::<u64>(), summary.total_sq);
        assert!(map.values().all(|j| j.abs() <= 12 && (j - 12) % 2 == 0));
    }

    #[test]
    fn order_beyond_columns_sums_to_zero() {
        assert_eq!(sum_j_squared(&h4(), 4).unwrap(), 0);
        assert!(sum_j_squared(&h4(), 0).is_err());
    }

    #[test]
    fn filtered_rejects_bad_fixed_sets() {
        let h = h4();
        assert!(sum_j_squared_filtered(&h, 3, &[]).is_err());
        assert!(sum_j_squared_filtered(&h, 3, &[0, 1, 2]).is_err());
        assert!(sum_j_squared_filtered(&h, 2, &[0, 1]).is_err());
        assert!(sum_j_squared_filtered(&h, 3, &[1, 1]).is_err());
    }

    #[test]
    fn d_parameter_extremes() {
        let all_minus = |n: usize| -> [Vec<i8>; 3] {
            // rows (+,+,-), (+,-,+), (-,+,+), (-,-,-): every product -1
            let pattern = [[1, 1, -1], [1, -1, 1], [-1, 1, 1], [-1, -1, -1]];
            let mut cols = [vec![], vec![], vec![]];
            for r in 0..n {
                for c in 0..3 {
                    cols[c].push(pattern[r % 4][c]);
                }
            }
            cols
        };
        let [a, b, c] = all_minus(12);
        assert_eq!(d_parameter(&a, &b, &c).unwrap(), 0);
        let neg: Vec<i8> = c.iter().map(|v| -v).collect();
        assert_eq!(d_parameter(&a, &b, &neg).unwrap(), 3);
        assert!(matches!(d_parameter(&a[..6], &b[..6], &c[..6]), Err(Error::NotMultipleOfFour(6))));
        let mut odd = c.clone();
        odd[0] = -odd[0];
        assert!(matches!(d_parameter(&a, &b, &odd), Err(Error::NonIntegralD { .. })));
    }

    #[test]
    fn recursions_hold() {
        let h = hadamard_design(12, Construction::Paley).unwrap();
        assert!(verify_recursions(&h, &[]).unwrap());
        assert!(verify_recursions(&h, &[4]).unwrap());
        let child = crate::design::drop_columns(&h, &[0]).unwrap().kept;
        assert!(verify_recursions(&child, &[3]).unwrap());
        assert!(verify_recursions(&h, &[11]).is_err());
    }
}
