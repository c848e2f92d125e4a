//! Closed forms for J-characteristic sums of arrays obtained from a
//! saturated OA(n, n-1, 2, 2) by deleting columns.
//!
//! These are claims under test. Exhaustive enumeration in
//! [`super::sum_j_squared`] and [`super::sum_j_squared_filtered`] is the
//! reference they are checked against.
//!
//! # The `d` parameter
//!
//! Claims whose value depends on `d` take it from a column triple:
//!
//! | deleted | fixed | triple |
//! |---------|-------|--------|
//! | 3       | 0     | the three deleted columns |
//! | 2       | 1     | both deleted columns and `c_{i0}` |
//! | 1       | 2     | the deleted column, `c_{i0}` and `c_{j0}` |
//!
//! i.e. the deleted columns, topped up with the specific columns in order.

use crate::rational::Rational;

/// One closed-form J sum: orders 3 or 4, over subsets that contain `fixed`
/// specific columns, in the array with `deleted` columns removed from
/// `H(n, n-1)`.
#[derive(Debug, Clone, Copy)]
pub struct JSumClaim {
    /// 1 for sums over all subsets, 2 for sums through specific columns.
    pub group: u8,
    pub item: u8,
    pub order: usize,
    pub fixed: usize,
    pub deleted: usize,
    pub uses_d: bool,
    formula: fn(i64, i64) -> Rational,
}

impl JSumClaim {
    /// Claimed value at `n` runs; `d` is ignored unless [`Self::uses_d`].
    pub fn value(&self, n: i64, d: i64) -> Rational {
        (self.formula)(n, d)
    }

    pub fn name(&self) -> String {
        let through = match self.fixed {
            0 => String::new(),
            f => format!(" through {f} fixed column{}", if f == 1 { "" } else { "s" }),
        };
        format!("sum J{}^2{through}, q = n-{}", self.order, self.deleted + 1)
    }
}

fn q(num: i64, den: i64) -> Rational {
    Rational::new(num, den)
}

/// `16d(n - 4d)`
fn d_term(n: i64, d: i64) -> i64 {
    16 * d * (n - 4 * d)
}

macro_rules! claim {
    ($group:expr, $item:expr, $order:expr, $fixed:expr, $deleted:expr, $uses_d:expr, $f:expr) => {
        JSumClaim {
            group: $group,
            item: $item,
            order: $order,
            fixed: $fixed,
            deleted: $deleted,
            uses_d: $uses_d,
            formula: $f,
        }
    };
}

/// All eighteen closed forms: eight over every subset, ten through one or
/// two specific columns.
pub static J_SUM_CLAIMS: [JSumClaim; 18] = [
    claim!(1, 1, 3, 0, 0, false, |n, _| q(n * n * (n - 1) * (n - 2), 6)),
    claim!(1, 2, 3, 0, 1, false, |n, _| q(n * n * (n - 2) * (n - 4), 6)),
    claim!(1, 3, 3, 0, 2, false, |n, _| q(n * n * (n - 4) * (n - 5), 6)),
    claim!(1, 4, 3, 0, 3, true, |n, d| q(n * n * (n - 4) * (n - 8), 6) + q(d_term(n, d), 1)),
    claim!(1, 5, 4, 0, 0, false, |n, _| q(n * n * (n - 1) * (n - 2) * (n - 4), 24)),
    claim!(1, 6, 4, 0, 1, false, |n, _| q(n * n * (n - 2) * (n - 4) * (n - 5), 24)),
    claim!(1, 7, 4, 0, 2, false, |n, _| q(n * n * (n - 4) * (n - 5) * (n - 6), 24)),
    claim!(1, 8, 4, 0, 3, true, |n, d| q(n * n * (n - 4) * (n * n - 15 * n + 62), 24) - q(d_term(n, d), 1)),
    claim!(2, 1, 3, 1, 0, false, |n, _| q(n * n * (n - 2), 2)),
    claim!(2, 2, 3, 1, 1, false, |n, _| q(n * n * (n - 4), 2)),
    claim!(2, 3, 3, 1, 2, true, |n, d| q(n * n * (n - 4), 2) - q(d_term(n, d), 1)),
    claim!(2, 4, 3, 2, 0, false, |n, _| q(n * n, 1)),
    claim!(2, 5, 3, 2, 1, true, |n, d| q(d_term(n, d), 1)),
    claim!(2, 6, 4, 1, 0, false, |n, _| q(n * n * (n - 2) * (n - 4), 6)),
    claim!(2, 7, 4, 1, 1, false, |n, _| q(n * n * (n - 4) * (n - 5), 6)),
    claim!(2, 8, 4, 1, 2, true, |n, d| q(n * n * (n - 4) * (n - 8), 6) + q(d_term(n, d), 1)),
    claim!(2, 9, 4, 2, 0, false, |n, _| q(n * n * (n - 4), 2)),
    claim!(2, 10, 4, 2, 1, true, |n, d| q(n * n * (n - 4), 2) - q(d_term(n, d), 1)),
];

/// The claim for a given order, number of specific columns and number of
/// deleted columns, if one exists.
pub fn find_claim(order: usize, fixed: usize, deleted: usize) -> Option<&'static JSumClaim> {
    J_SUM_CLAIMS.iter().find(|c| c.order == order && c.fixed == fixed && c.deleted == deleted)
}

/// A closed-form Krawtchouk evaluation `P_i(j; n-1-deleted)` used to derive
/// the J sums from distance distributions.
#[derive(Debug, Clone, Copy)]
pub struct KrawtchoukClaim {
    pub degree: usize,
    pub deleted: usize,
    /// `j = n/2 - offset`, or `j = 0` when `offset` is `None`.
    pub offset: Option<usize>,
    formula: fn(i64) -> Rational,
}

impl KrawtchoukClaim {
    pub fn point(&self, n: usize) -> usize {
        self.offset.map_or(0, |o| n / 2 - o)
    }

    pub fn length(&self, n: usize) -> usize {
        n - 1 - self.deleted
    }

    pub fn value(&self, n: i64) -> Rational {
        (self.formula)(n)
    }

    pub fn name(&self) -> String {
        let point = match self.offset {
            None => "0".to_string(),
            Some(0) => "n/2".to_string(),
            Some(o) => format!("(n-{})/2", 2 * o),
        };
        format!("P{}({point}; n-{})", self.degree, self.deleted + 1)
    }
}

macro_rules! kclaim {
    ($deg:expr, $deleted:expr, $offset:expr, $f:expr) => {
        KrawtchoukClaim { degree: $deg, deleted: $deleted, offset: $offset, formula: $f }
    };
}

/// The 28 evaluations behind the distance-distribution derivation of the
/// all-subset J sums. `P3(n/2; n-3)` is `(3n-20)/2`.
pub static KRAWTCHOUK_CLAIMS: [KrawtchoukClaim; 28] = [
    kclaim!(3, 0, None, |n| q((n - 3) * (n - 2) * (n - 1), 6)),
    kclaim!(3, 0, Some(0), |n| q(n - 2, 2)),
    kclaim!(4, 0, None, |n| q((n - 4) * (n - 3) * (n - 2) * (n - 1), 24)),
    kclaim!(4, 0, Some(0), |n| q((n - 4) * (n - 2), 8)),
    kclaim!(3, 1, None, |n| q((n - 4) * (n - 3) * (n - 2), 6)),
    kclaim!(3, 1, Some(1), |_| q(0, 1)),
    kclaim!(3, 1, Some(0), |n| q(n - 4, 1)),
    kclaim!(4, 1, None, |n| q((n - 5) * (n - 4) * (n - 3) * (n - 2), 24)),
    kclaim!(4, 1, Some(1), |n| q((n - 4) * (n - 2), 8)),
    kclaim!(4, 1, Some(0), |n| q((n - 10) * (n - 4), 8)),
    kclaim!(3, 2, None, |n| q((n - 5) * (n - 4) * (n - 3), 6)),
    kclaim!(3, 2, Some(2), |n| q(4 - n, 2)),
    kclaim!(3, 2, Some(1), |n| q(n - 4, 2)),
    kclaim!(3, 2, Some(0), |n| q(3 * n - 20, 2)),
    kclaim!(4, 2, None, |n| q((n - 6) * (n - 5) * (n - 4) * (n - 3), 24)),
    kclaim!(4, 2, Some(2), |n| q((n - 6) * (n - 4), 8)),
    kclaim!(4, 2, Some(1), |n| q((n - 6) * (n - 4), 8)),
    kclaim!(4, 2, Some(0), |n| q((n - 20) * (n - 6), 8)),
    kclaim!(3, 3, None, |n| q((n - 6) * (n - 5) * (n - 4), 6)),
    kclaim!(3, 3, Some(3), |n| q(6 - n, 1)),
    kclaim!(3, 3, Some(2), |_| q(0, 1)),
    kclaim!(3, 3, Some(1), |n| q(n - 6, 1)),
    kclaim!(3, 3, Some(0), |n| q(2 * (n - 10), 1)),
    kclaim!(4, 3, None, |n| q((n - 7) * (n - 6) * (n - 5) * (n - 4), 24)),
    kclaim!(4, 3, Some(3), |n| q((n - 6) * (n - 12), 8)),
    kclaim!(4, 3, Some(2), |n| q((n - 6) * (n - 4), 8)),
    kclaim!(4, 3, Some(1), |n| q((n - 6) * (n - 12), 8)),
    kclaim!(4, 3, Some(0), |n| q(n * n - 42 * n + 280, 8)),
];

/// Closed-form non-zero distance distribution of `H(n, n-1-deleted)` as
/// `(distance, E_j)` pairs; `d` is used when three columns were deleted.
pub fn distance_distribution_claim(n: i64, deleted: usize, d: i64) -> Vec<(usize, Rational)> {
    let half = (n / 2) as usize;
    match deleted {
        0 => vec![(0, q(1, 1)), (half, q(n - 1, 1))],
        1 => vec![(0, q(1, 1)), (half - 1, q(n, 2)), (half, q(n - 2, 2))],
        2 => vec![(0, q(1, 1)), (half - 2, q(n, 4)), (half - 1, q(n, 2)), (half, q(n - 4, 4))],
        3 => vec![
            (0, q(1, 1)),
            (half - 3, q(2 * d * (n - 4 * d), n)),
            (half - 2, q(96 * d * d - 24 * d * n + 3 * n * n, 4 * n)),
            (half - 1, q(6 * d * (n - 4 * d), n)),
            (half, q(8 * d * (4 * d - n) + n * (n - 4), 4 * n)),
        ],
        _ => Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::krawtchouk;

    #[test]
    fn claims_are_unique_per_shape() {
        for c in &J_SUM_CLAIMS {
            assert!(std::ptr::eq(find_claim(c.order, c.fixed, c.deleted).unwrap(), c));
        }
        assert!(find_claim(5, 0, 0).is_none());
    }

    #[test]
    fn closed_forms_are_integers_for_multiples_of_four() {
        for n in (8..=64).step_by(4) {
            for c in &J_SUM_CLAIMS {
                for d in 0..=n / 4 {
                    assert!(c.value(n, d).is_integer(), "{} at n={n}", c.name());
                }
            }
        }
    }

    #[test]
    fn krawtchouk_claims_at_desk_sizes() {
        for n in [12usize, 16, 20, 24] {
            for c in &KRAWTCHOUK_CLAIMS {
                let actual = krawtchouk(c.degree, c.point(n), c.length(n)).unwrap();
                assert_eq!(Rational::from(actual), c.value(n as i64), "{} at n={n}", c.name());
            }
        }
    }

    #[test]
    fn claimed_distance_distributions_sum_to_n() {
        for n in [12i64, 16, 20, 24] {
            for deleted in 0..=3 {
                for d in 0..=n / 4 {
                    let total: Rational = distance_distribution_claim(n, deleted, d).into_iter().map(|(_, e)| e).sum();
                    assert_eq!(total, Rational::from(n));
                }
            }
        }
    }
}
