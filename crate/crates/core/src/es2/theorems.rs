//! Closed-form E(s²), lower bound and gap for each covered family and
//! starting-array size.
//!
//! A cell is `(family, n, q)` with `k = n-1-q` columns missing from a
//! saturated start: `k ∈ {0, 1}` for the minus-one family, `k ∈ {0, 1, 2}`
//! otherwise. Only `n ≡ 0 (mod 4)` with `n >= 12` is covered.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::wu::SsdFamily;

/// The claimed outcome for one cell.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremClaim {
    pub es2: Rational,
    pub lower_bound: Rational,
    pub gap: Rational,
    pub optimal: bool,
}

fn missing(n: usize, q: usize) -> Option<usize> {
    (q < n).then(|| n - 1 - q)
}

pub fn is_covered(family: &SsdFamily, n: usize, q: usize) -> bool {
    if n < 12 || !n.is_multiple_of(4) {
        return false;
    }
    match (family, missing(n, q)) {
        (SsdFamily::MinusOne { .. }, Some(k)) => k <= 1,
        (_, Some(k)) => k <= 2,
        _ => false,
    }
}

fn r(num: i64, den: i64) -> Rational {
    Rational::new(num, den)
}

/// E(s²), LB and, where it has its own closed form, the gap.
fn cell(family: &SsdFamily, n: i64, k: usize, d: Option<u64>) -> Result<(Rational, Rational, Option<Rational>)> {
    let full = |k: usize| match k {
        0 => r(n * n, n + 1),
        1 => r(n * (n - 4), n - 3),
        _ => r(n * n * (n - 5), (n - 3) * (n - 1)),
    };
    Ok(match family {
        SsdFamily::FullAugment => (full(k), full(k), None),
        SsdFamily::MinusOne { .. } => (full(k), full(k), None),
        SsdFamily::InteractionsOnly => match k {
            0 => (r(n * (n - 4), n - 3), r(n * (n - 4), n - 3), None),
            1 => (r(n * n * (n - 5), (n - 1) * (n - 3)), r(n * n * (n - 5), (n - 1) * (n - 3)), None),
            _ => (
                r(n * n * (n - 6), (n - 2) * (n - 3)),
                r(n * (n * n * n - 13 * n * n + 48 * n - 32), (n - 3) * (n - 4) * (n - 5)),
                Some(r(8 * n * (n - 8), (n - 2) * (n - 3) * (n - 4) * (n - 5))),
            ),
        },
        SsdFamily::SingleParent { .. } => match k {
            0 => (r(n * n, 2 * n - 3), r(n * n, 2 * n - 3), None),
            1 => (
                r(n * n * (n - 4), (2 * n - 5) * (n - 3)),
                r(n * (n * n - 5 * n + 8), (2 * n - 5) * (n - 3)),
                Some(r(n * n - 8 * n, (2 * n - 5) * (n - 3))),
            ),
            _ => {
                let d = d.ok_or(Error::MissingD { family: family.name(), n: n as usize, q: n as usize - 3 })? as i64;
                (
                    r(n * n * n - 4 * n * n - 32 * n * d + 128 * d * d, (2 * n - 7) * (n - 4)),
                    r(n * (n - 4), 2 * n - 7),
                    Some(r(4 * n * n + 128 * d * d - 32 * n * d - 16 * n, (n - 4) * (2 * n - 7))),
                )
            }
        },
    })
}

/// The claimed E(s²), lower bound and gap for a covered cell. `d` is
/// needed for the single-parent family at `q = n-3`.
pub fn theorem_claim(family: &SsdFamily, n: usize, q: usize, d: Option<u64>) -> Result<TheoremClaim> {
    if !is_covered(family, n, q) {
        return Err(Error::UncoveredCase { family: family.name(), n, q });
    }
    let (es2, lower_bound, gap) = cell(family, n as i64, n - 1 - q, d)?;
    let gap = gap.unwrap_or_else(|| &es2 - &lower_bound);
    Ok(TheoremClaim { optimal: gap.is_zero(), es2, lower_bound, gap })
}

pub fn es2_closed_form(family: &SsdFamily, n: usize, q: usize, d: Option<u64>) -> Result<Rational> {
    Ok(theorem_claim(family, n, q, d)?.es2)
}
