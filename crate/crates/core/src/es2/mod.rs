//! E(s²), the Das et al. lower bound for balanced designs with `n ≡ 0
//! (mod 4)` runs, and optimality verdicts.
//!
//! Everything is exact. A design is reported optimal only when
//! `E(s²) - LB` is exactly zero.

mod theorems;

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::design::{verify_oa_strength2, AliasedPair, ColumnLabel, SignMatrix};
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::spectral::{gwp_via_krawtchouk, GwpVector, PackedColumns};
use crate::wu::{SsdBuild, SsdFamily};

pub use self::theorems::{es2_closed_form, is_covered, theorem_claim, TheoremClaim};

/// Σ over column pairs `i < j` of `s_ij²`.
fn off_diagonal_sum(x: &SignMatrix) -> u128 {
    let packed = PackedColumns::from_matrix(x);
    let m = x.cols();
    (0..m)
        .into_par_iter()
        .map(|a| {
            (a + 1..m)
                .map(|b| {
                    let s = packed.dot(a, b);
                    (s * s) as u128
                })
                .sum::<u128>()
        })
        .sum()
}

/// Average squared off-diagonal entry of `XᵀX`, from column inner products.
pub fn es2_direct(x: &SignMatrix) -> Result<Rational> {
    let m = x.cols();
    if m < 2 {
        return Err(Error::TooFewColumns(m));
    }
    let total = off_diagonal_sum(x);
    Ok(Rational::new(2 * total, (m * (m - 1)) as u128))
}

/// For each set `S` of starting-array positions, the number of ordered
/// pairs of distinct design columns whose entrywise product is the product
/// of the columns in `S`. Keys are bitmasks over positions.
pub fn j_route_multiplicities(build: &SsdBuild) -> Result<HashMap<u128, u64>> {
    let start = &build.start.array;
    if start.cols() > 128 {
        return Err(Error::OutOfRange("J route supports at most 128 starting columns".into()));
    }
    let position = |i: usize| -> Result<u128> {
        start.position_of(ColumnLabel::Main(i)).map(|p| 1u128 << p).ok_or(Error::LabelNotFound(ColumnLabel::Main(i)))
    };
    let masks = build
        .design
        .labels()
        .iter()
        .map(|l| l.factors().into_iter().map(position).try_fold(0u128, |acc, b| b.map(|b| acc ^ b)))
        .collect::<Result<Vec<u128>>>()?;
    let mut counts = HashMap::new();
    for (a, &ma) in masks.iter().enumerate() {
        for &mb in &masks[a + 1..] {
            *counts.entry(ma ^ mb).or_insert(0) += 2;
        }
    }
    Ok(counts)
}

/// E(s²) assembled from J-characteristics of the starting array, weighted
/// by how often each appears off the diagonal of `XᵀX`.
pub fn es2_via_j(build: &SsdBuild) -> Result<Rational> {
    let m = build.m();
    if m < 2 {
        return Err(Error::TooFewColumns(m));
    }
    let packed = PackedColumns::from_matrix(&build.start.array);
    let mut total = 0u128;
    for (mask, mult) in j_route_multiplicities(build)? {
        let subset: Vec<usize> = (0..128).filter(|b| mask >> b & 1 == 1).collect();
        let j = packed.j(&subset);
        total += (j * j) as u128 * mult as u128;
    }
    Ok(Rational::new(total, (m * (m - 1)) as u128))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Serialize for Sign {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// `m = a(n-1) ± r` with `a >= 1` and `0 <= r <= n/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub a: u64,
    pub r: u64,
    pub sign: Sign,
    #[serde(rename = "D")]
    pub d_value: i64,
    #[serde(skip)]
    pub r_mod4: u8,
}

impl Decomposition {
    pub fn m(&self, n: usize) -> i64 {
        let base = self.a as i64 * (n as i64 - 1);
        match self.sign {
            Sign::Plus => base + self.r as i64,
            Sign::Minus => base - self.r as i64,
        }
    }
}

/// `D(n, r)` by the residue of `r` mod 4.
pub fn d_of(n: usize, r: usize) -> i64 {
    let (n, r) = (n as i64, r as i64);
    match r % 4 {
        0 => 4 * r,
        1 => n + 2 * r - 3,
        2 => 2 * n - 4,
        _ => n + 2 * r + 1,
    }
}

/// Every decomposition of `m` for `n` runs, smaller `r` first (at most two).
pub fn decompose_m(n: usize, m: usize) -> Vec<Decomposition> {
    if n < 2 || m == 0 {
        return Vec::new();
    }
    let step = (n - 1) as i64;
    let half = (n / 2) as i64;
    let mut out = Vec::new();
    let max_a = (m as i64 + half) / step;
    for a in 1..=max_a {
        let diff = m as i64 - a * step;
        let (r, sign) = if (0..=half).contains(&diff) {
            (diff, Sign::Plus)
        } else if (-half..0).contains(&diff) {
            (-diff, Sign::Minus)
        } else {
            continue;
        };
        out.push(Decomposition { a: a as u64, r: r as u64, sign, d_value: d_of(n, r as usize), r_mod4: (r % 4) as u8 });
    }
    out.sort_by_key(|d| (d.r, d.sign));
    out
}

/// The bound for one decomposition:
/// `n²(m-n+1)/((n-1)(m-1)) + n/(m(m-1))·(D(n,r) - r²/(n-1))`.
pub fn bound_for(n: usize, m: usize, dec: &Decomposition) -> Rational {
    let (ni, mi) = (n as i64, m as i64);
    let base = Rational::new(ni * ni * (mi - ni + 1), (ni - 1) * (mi - 1));
    let r = dec.r as i64;
    let correction = Rational::from(dec.d_value) - Rational::new(r * r, ni - 1);
    base + Rational::new(ni, mi * (mi - 1)) * correction
}

/// Bound with the decomposition it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LowerBound {
    pub value: Rational,
    pub chosen: Decomposition,
    pub decompositions: Vec<Decomposition>,
}

/// Largest bound over all decompositions of `m`.
pub fn lower_bound_detail(n: usize, m: usize) -> Result<LowerBound> {
    if n == 0 || !n.is_multiple_of(4) {
        return Err(Error::NotMultipleOfFour(n));
    }
    if m < 2 {
        return Err(Error::TooFewColumns(m));
    }
    let decompositions = decompose_m(n, m);
    let mut best: Option<(Rational, Decomposition)> = None;
    for dec in &decompositions {
        let value = bound_for(n, m, dec);
        if best.as_ref().is_none_or(|(b, _)| value > *b) {
            best = Some((value, *dec));
        }
    }
    let (value, chosen) = best.ok_or(Error::NoDecomposition { n, m })?;
    Ok(LowerBound { value, chosen, decompositions })
}

pub fn lower_bound(n: usize, m: usize) -> Result<Rational> {
    Ok(lower_bound_detail(n, m)?.value)
}

/// E(s²) against the bound, for a build or an arbitrary design.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OptimalityReport {
    pub n: usize,
    pub m: usize,
    pub family: Option<SsdFamily>,
    #[serde(flatten)]
    pub chosen: Decomposition,
    #[serde(rename = "lb")]
    pub lower_bound: Rational,
    pub es2: Rational,
    pub gap: Rational,
    pub optimal: bool,
    pub aliased_pairs: Vec<AliasedPair>,
    pub d: Option<u64>,
    pub decompositions: Vec<Decomposition>,
    pub closed_form: Option<Rational>,
    pub notes: Vec<String>,
}

impl OptimalityReport {
    pub fn summary_line(&self) -> String {
        let family = self.family.map_or("design".to_string(), |f| f.to_string());
        format!(
            "{family} n={} m={} E(s^2)={} ({}) LB={} ({}) gap={} optimal={}",
            self.n,
            self.m,
            self.es2,
            self.es2.decimal(),
            self.lower_bound,
            self.lower_bound.decimal(),
            self.gap,
            self.optimal
        )
    }
}

fn aliasing_note(aliased: &[AliasedPair]) -> Option<String> {
    let first = aliased.first()?;
    Some(format!(
        "{} fully aliased column pair(s), first {} and {}; the partial-aliasing precondition does not hold",
        aliased.len(),
        first.first_label,
        first.second_label
    ))
}

fn assess(
    x: &SignMatrix,
    family: Option<SsdFamily>,
    d: Option<u64>,
    aliased: Vec<AliasedPair>,
    es2: Rational,
) -> Result<OptimalityReport> {
    let (n, m) = (x.rows(), x.cols());
    let bound = lower_bound_detail(n, m)?;
    let gap = &es2 - &bound.value;
    let optimal = gap.is_zero();
    let mut notes = Vec::new();
    if let Some(note) = aliasing_note(&aliased) {
        notes.push(note);
    }
    if bound.decompositions.len() > 1 {
        notes.push(format!("bound is the maximum over {} decompositions of m", bound.decompositions.len()));
    }
    if gap.is_negative() {
        notes.push("E(s^2) is below the lower bound; the design is not balanced".to_string());
    } else if optimal {
        notes.push("E(s^2) attains the lower bound".to_string());
    } else {
        notes.push(format!("E(s^2) exceeds the lower bound by {gap}"));
    }
    Ok(OptimalityReport {
        n,
        m,
        family,
        chosen: bound.chosen,
        lower_bound: bound.value,
        es2,
        gap,
        optimal,
        aliased_pairs: aliased,
        d,
        decompositions: bound.decompositions,
        closed_form: None,
        notes,
    })
}

/// Evaluates a build, checking the direct E(s²) against the closed form for
/// its family whenever one applies.
pub fn verdict(build: &SsdBuild) -> Result<OptimalityReport> {
    let es2 = es2_direct(&build.design)?;
    let mut report = assess(&build.design, Some(build.family), build.d, build.aliased.clone(), es2)?;
    let (n, q) = (build.n(), build.start.q());
    if is_covered(&build.family, n, q) {
        let closed = es2_closed_form(&build.family, n, q, build.d)?;
        if closed != report.es2 {
            return Err(Error::ClosedFormMismatch { direct: report.es2.to_string(), closed: closed.to_string() });
        }
        report.notes.push(format!("E(s^2) agrees with the closed form for {} at q = n-{}", build.family, n - q));
        report.closed_form = Some(closed);
    }
    Ok(report)
}

/// Optimality of an arbitrary design, without family information.
pub fn assess_design(x: &SignMatrix) -> Result<OptimalityReport> {
    let es2 = es2_direct(x)?;
    assess(x, None, None, crate::design::aliasing_report(x), es2)
}

/// Everything `evaluate` reports about a design file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EvaluationReport {
    pub n: usize,
    pub m: usize,
    pub balanced: bool,
    pub oa_strength2: bool,
    pub gwp: GwpVector,
    pub es2: Option<Rational>,
    pub aliased_pairs: Vec<AliasedPair>,
    /// Absent when no bound applies (n not a multiple of 4, or no
    /// decomposition of m).
    pub optimality: Option<OptimalityReport>,
    pub notes: Vec<String>,
}

pub fn evaluate_design(x: &SignMatrix) -> Result<EvaluationReport> {
    let (n, m) = (x.rows(), x.cols());
    let balanced = (0..m).all(|j| (0..n).map(|i| x.get(i, j) as i64).sum::<i64>() == 0);
    let aliased = crate::design::aliasing_report(x);
    let es2 = if m >= 2 { Some(es2_direct(x)?) } else { None };
    let mut notes = Vec::new();
    let optimality = match &es2 {
        Some(value) => match assess(x, None, None, aliased.clone(), value.clone()) {
            Ok(r) => Some(r),
            Err(e @ (Error::NotMultipleOfFour(_) | Error::NoDecomposition { .. })) => {
                notes.push(format!("no lower bound: {e}"));
                None
            }
            Err(e) => return Err(e),
        },
        None => {
            notes.push("fewer than two columns; E(s^2) undefined".into());
            None
        }
    };
    if !balanced {
        notes.push("design is not balanced; the lower bound assumes balanced columns".into());
    }
    Ok(EvaluationReport {
        n,
        m,
        balanced,
        oa_strength2: verify_oa_strength2(x),
        gwp: gwp_via_krawtchouk(x),
        es2,
        aliased_pairs: aliased,
        optimality,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::{hadamard_design, Column, Construction};
    use crate::wu::{build_full, build_interactions_only, build_single_parent, StartingArray};

    fn r(a: i64, b: i64) -> Rational {
        Rational::new(a, b)
    }

    fn start(drop: &[usize]) -> StartingArray {
        StartingArray::from_design(&hadamard_design(12, Construction::Paley).unwrap(), drop).unwrap()
    }

    #[test]
    fn orthogonal_columns_have_zero_es2() {
        let x = SignMatrix::from_rows(&[vec![1, 1], vec![1, -1], vec![-1, 1], vec![-1, -1]]).unwrap();
        assert_eq!(es2_direct(&x).unwrap(), Rational::zero());
        let one = SignMatrix::from_rows(&[vec![1], vec![-1]]).unwrap();
        assert!(matches!(es2_direct(&one), Err(Error::TooFewColumns(1))));
    }

    #[test]
    fn es2_of_desk_builds() {
        assert_eq!(es2_direct(&build_full(&start(&[])).unwrap().design).unwrap(), r(144, 13));
        assert_eq!(es2_direct(&build_interactions_only(&start(&[9, 10])).unwrap().design).unwrap(), r(48, 5));
    }

    #[test]
    fn j_route_agrees_and_multiplicity_is_six() {
        let b = build_full(&start(&[])).unwrap();
        let mult = j_route_multiplicities(&b).unwrap();
        for (mask, count) in &mult {
            if mask.count_ones() >= 3 {
                assert_eq!(*count, 6, "mask {mask:b}");
            }
        }
        assert_eq!(es2_via_j(&b).unwrap(), es2_direct(&b.design).unwrap());
        let b = build_single_parent(&start(&[3, 7]), 2).unwrap();
        assert_eq!(es2_via_j(&b).unwrap(), es2_direct(&b.design).unwrap());
    }

    #[test]
    fn das_d_table() {
        assert_eq!(d_of(12, 0), 0);
        assert_eq!(d_of(12, 1), 11);
        assert_eq!(d_of(12, 2), 20);
        assert_eq!(d_of(12, 3), 19);
        assert_eq!(d_of(12, 4), 16);
    }

    #[test]
    fn decompositions() {
        let d = decompose_m(12, 66);
        assert_eq!(d.len(), 1);
        assert_eq!((d[0].a, d[0].r, d[0].sign), (6, 0, Sign::Plus));
        let d = decompose_m(12, 45);
        assert_eq!((d[0].a, d[0].r, d[0].sign), (4, 1, Sign::Plus));
        let d = decompose_m(12, 36);
        assert_eq!((d[0].a, d[0].r, d[0].sign), (3, 3, Sign::Plus));
        let d = decompose_m(12, 65);
        assert_eq!((d[0].a, d[0].r, d[0].sign), (6, 1, Sign::Minus));
        // m = 17 = 2·11 - 5 = 1·11 + 6
        let d = decompose_m(12, 17);
        assert_eq!(d.len(), 2);
        assert_eq!((d[0].a, d[0].r, d[0].sign), (2, 5, Sign::Minus));
        assert_eq!((d[1].a, d[1].r, d[1].sign), (1, 6, Sign::Plus));
        assert!(decompose_m(12, 4).is_empty());
        for m in 5..400 {
            for dec in decompose_m(12, m) {
                assert_eq!(dec.m(12), m as i64);
            }
        }
    }

    #[test]
    fn bounds() {
        assert_eq!(lower_bound(12, 66).unwrap(), r(144, 13));
        assert_eq!(lower_bound(12, 21).unwrap(), r(48, 7));
        assert_eq!(lower_bound(12, 17).unwrap(), r(96, 17));
        assert!(matches!(lower_bound(10, 20), Err(Error::NotMultipleOfFour(10))));
        assert!(matches!(lower_bound(12, 1), Err(Error::TooFewColumns(1))));
        assert!(matches!(lower_bound(12, 4), Err(Error::NoDecomposition { .. })));
    }

    #[test]
    fn verdicts() {
        let report = verdict(&build_full(&start(&[9, 10])).unwrap()).unwrap();
        assert!(report.optimal);
        assert_eq!(report.gap, Rational::zero());
        assert_eq!(report.closed_form, Some(r(112, 11)));

        let report = verdict(&build_single_parent(&start(&[10]), 0).unwrap()).unwrap();
        assert!(!report.optimal);
        assert_eq!(report.gap, r(16, 57));

        let report = verdict(&build_interactions_only(&start(&[9, 10])).unwrap()).unwrap();
        assert!(!report.optimal);
        assert_eq!(report.gap, r(8, 105));
    }

    #[test]
    fn report_json_shape() {
        let report = verdict(&build_full(&start(&[])).unwrap()).unwrap();
        let v = serde_json::to_value(&report).unwrap();
        for key in ["n", "m", "family", "a", "r", "sign", "D", "lb", "es2", "gap", "optimal", "aliased_pairs", "d"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert_eq!(v["family"], "full");
        assert_eq!(v["sign"], "+");
        assert_eq!(v["lb"]["num"], 144);
        assert_eq!(v["es2"]["den"], 13);
        assert_eq!(v["d"], serde_json::Value::Null);
    }

    #[test]
    fn duplicated_column_is_flagged() {
        let h = hadamard_design(12, Construction::Paley).unwrap();
        let mut cols = build_full(&StartingArray::saturated(h.clone())).unwrap().design.columns();
        cols.pop();
        cols.push(Column { label: ColumnLabel::Main(99), entries: h.column(0) });
        let x = SignMatrix::from_columns(&cols).unwrap();
        let report = evaluate_design(&x).unwrap();
        assert_eq!(report.aliased_pairs.len(), 1);
        assert!(report.optimality.unwrap().gap > Rational::zero());
    }

    #[test]
    fn appended_duplicate_can_attain_the_bound() {
        // m = 67 = 6·11 + 1 leaves room in the bound for one fully aliased pair
        let h = hadamard_design(12, Construction::Paley).unwrap();
        let mut cols = build_full(&StartingArray::saturated(h.clone())).unwrap().design.columns();
        cols.push(Column { label: ColumnLabel::Main(99), entries: h.column(0) });
        let report = assess_design(&SignMatrix::from_columns(&cols).unwrap()).unwrap();
        assert_eq!(report.aliased_pairs.len(), 1);
        assert!(report.optimal);
        assert!(report.notes[0].contains("fully aliased"));
    }

    #[test]
    fn evaluate_orthogonal_array() {
        let x = start(&[10]).array;
        let report = evaluate_design(&x).unwrap();
        assert_eq!(report.es2, Some(Rational::zero()));
        assert!(report.oa_strength2 && report.balanced);
        assert_eq!(report.gwp.a(1), &Rational::zero());
    }

    #[test]
    fn evaluate_without_bound() {
        let x = SignMatrix::from_rows(&[
            vec![1, 1, -1],
            vec![-1, -1, 1],
            vec![1, -1, 1],
            vec![-1, 1, 1],
            vec![1, 1, -1],
            vec![-1, -1, -1],
        ])
        .unwrap();
        let report = evaluate_design(&x).unwrap();
        assert!(report.optimality.is_none());
        assert!(report.es2.is_some());
    }
}
