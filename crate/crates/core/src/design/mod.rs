//! Two-level sign matrices and the operations that build starting arrays
//! from Hadamard matrices.

mod csv;
mod hadamard;

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub use self::csv::{read_csv, read_csv_path, write_csv, write_csv_path};
pub use self::hadamard::{
    hadamard_design, hadamard_matrix, is_hadamard, is_prime, normalize, paley_hadamard, paley_hadamard_bounded,
    sylvester_hadamard, sylvester_hadamard_bounded, to_hadamard_design, Construction, DEFAULT_MAX_ORDER,
};

/// Provenance of a design column: a main effect `c_i` of the starting
/// array, or the interaction `c_i c_j` of two of its columns.
///
/// Indices follow the starting design's labels (1-based `c1…c_{n-1}` for a
/// Hadamard design; `c0` is the all-ones column of a Hadamard matrix).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ColumnLabel {
    Main(usize),
    Interaction(usize, usize),
}

impl ColumnLabel {
    /// Interaction label with its indices put in increasing order.
    pub fn interaction(i: usize, j: usize) -> Result<Self> {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => Ok(ColumnLabel::Interaction(i, j)),
            std::cmp::Ordering::Greater => Ok(ColumnLabel::Interaction(j, i)),
            std::cmp::Ordering::Equal => Err(Error::InvalidSubset(format!("interaction of c{i} with itself"))),
        }
    }

    /// Main-effect indices this label is a product of.
    pub fn factors(&self) -> Vec<usize> {
        match *self {
            ColumnLabel::Main(i) => vec![i],
            ColumnLabel::Interaction(i, j) => vec![i, j],
        }
    }

    pub fn is_main(&self) -> bool {
        matches!(self, ColumnLabel::Main(_))
    }
}

impl fmt::Display for ColumnLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColumnLabel::Main(i) => write!(f, "c{i}"),
            ColumnLabel::Interaction(i, j) => write!(f, "c{i}*c{j}"),
        }
    }
}

impl FromStr for ColumnLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidSubset(format!("cannot parse column label {s:?}"));
        let index = |part: &str| -> Result<usize> {
            let digits = part.strip_prefix('c').ok_or_else(bad)?;
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            digits.parse().map_err(|_| bad())
        };
        match s.split_once('*') {
            None => Ok(ColumnLabel::Main(index(s)?)),
            Some((a, b)) => {
                let (i, j) = (index(a)?, index(b)?);
                if i >= j {
                    return Err(bad());
                }
                Ok(ColumnLabel::Interaction(i, j))
            }
        }
    }
}

impl Serialize for ColumnLabel {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// A single labeled ±1 column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Column {
    pub label: ColumnLabel,
    pub entries: Vec<i8>,
}

/// An `n × q` matrix of ±1 entries with one distinct label per column.
///
/// Entries are stored row-major. Values are immutable once constructed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<i8>,
    labels: Vec<ColumnLabel>,
}

impl SignMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<i8>, labels: Vec<ColumnLabel>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Shape(format!("empty matrix {rows}x{cols}")));
        }
        if entries.len() != rows * cols {
            return Err(Error::Shape(format!("{} entries for a {rows}x{cols} matrix", entries.len())));
        }
        if labels.len() != cols {
            return Err(Error::Shape(format!("{} labels for {cols} columns", labels.len())));
        }
        if let Some(pos) = entries.iter().position(|&v| v != 1 && v != -1) {
            return Err(Error::InvalidEntry { row: pos / cols, col: pos % cols, value: entries[pos] as i64 });
        }
        let mut seen = HashSet::with_capacity(cols);
        for label in &labels {
            if let ColumnLabel::Interaction(i, j) = *label {
                if i >= j {
                    return Err(Error::InvalidSubset(format!("interaction label {label} needs i < j")));
                }
            }
            if !seen.insert(*label) {
                return Err(Error::DuplicateLabel(*label));
            }
        }
        Ok(SignMatrix { rows, cols, entries, labels })
    }

    /// Builds from rows, labelling columns `c1…cq`.
    pub fn from_rows(rows: &[Vec<i8>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let labels = (1..=cols).map(ColumnLabel::Main).collect();
        Self::from_rows_labeled(rows, labels)
    }

    pub fn from_rows_labeled(rows: &[Vec<i8>], labels: Vec<ColumnLabel>) -> Result<Self> {
        let cols = labels.len();
        if let Some(r) = rows.iter().position(|r| r.len() != cols) {
            return Err(Error::Shape(format!("row {r} has {} entries, expected {cols}", rows[r].len())));
        }
        let entries = rows.iter().flatten().copied().collect();
        Self::new(rows.len(), cols, entries, labels)
    }

    /// Builds from columns; labels are taken from the columns.
    pub fn from_columns(columns: &[Column]) -> Result<Self> {
        let rows = columns.first().map_or(0, |c| c.entries.len());
        if let Some(c) = columns.iter().find(|c| c.entries.len() != rows) {
            return Err(Error::Shape(format!("column {} has {} entries, expected {rows}", c.label, c.entries.len())));
        }
        let cols = columns.len();
        let mut entries = vec![0i8; rows * cols];
        for (j, c) in columns.iter().enumerate() {
            for (i, &v) in c.entries.iter().enumerate() {
                entries[i * cols + j] = v;
            }
        }
        let labels = columns.iter().map(|c| c.label).collect();
        Self::new(rows, cols, entries, labels)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> i8 {
        self.entries[row * self.cols + col]
    }

    pub fn labels(&self) -> &[ColumnLabel] {
        &self.labels
    }

    pub fn label(&self, col: usize) -> ColumnLabel {
        self.labels[col]
    }

    pub fn position_of(&self, label: ColumnLabel) -> Option<usize> {
        self.labels.iter().position(|&l| l == label)
    }

    pub fn row(&self, row: usize) -> &[i8] {
        &self.entries[row * self.cols..(row + 1) * self.cols]
    }

    pub fn column(&self, col: usize) -> Vec<i8> {
        (0..self.rows).map(|i| self.get(i, col)).collect()
    }

    pub fn labeled_column(&self, col: usize) -> Column {
        Column { label: self.labels[col], entries: self.column(col) }
    }

    pub fn columns(&self) -> Vec<Column> {
        (0..self.cols).map(|j| self.labeled_column(j)).collect()
    }

    /// Inner product of columns `a` and `b`.
    pub fn column_dot(&self, a: usize, b: usize) -> i64 {
        (0..self.rows).map(|i| (self.get(i, a) * self.get(i, b)) as i64).sum()
    }

    /// Replaces the labels, keeping the entries.
    pub fn with_labels(self, labels: Vec<ColumnLabel>) -> Result<Self> {
        Self::new(self.rows, self.cols, self.entries, labels)
    }

    /// Returns `M · Mᵀ` as a dense row-major `n × n` integer matrix.
    pub fn gram_rows(&self) -> Vec<i64> {
        let n = self.rows;
        let mut out = vec![0i64; n * n];
        for a in 0..n {
            for b in a..n {
                let dot: i64 = self.row(a).iter().zip(self.row(b)).map(|(&x, &y)| (x * y) as i64).sum();
                out[a * n + b] = dot;
                out[b * n + a] = dot;
            }
        }
        out
    }

    pub(crate) fn negate_row(&mut self, row: usize) {
        for v in &mut self.entries[row * self.cols..(row + 1) * self.cols] {
            *v = -*v;
        }
    }

    pub(crate) fn negate_col(&mut self, col: usize) {
        for i in 0..self.rows {
            self.entries[i * self.cols + col] *= -1;
        }
    }
}

/// Result of [`drop_columns`]: the kept array and the removed columns, in
/// increasing index order.
#[derive(Debug, Clone)]
pub struct Dropped {
    pub kept: SignMatrix,
    pub removed: Vec<Column>,
}

/// Removes the columns at `indices`, keeping labels of the rest.
pub fn drop_columns(h: &SignMatrix, indices: &[usize]) -> Result<Dropped> {
    let mut sorted = indices.to_vec();
    sorted.sort_unstable();
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            return Err(Error::InvalidSubset(format!("column {} listed twice", w[0])));
        }
    }
    if let Some(&bad) = sorted.iter().find(|&&i| i >= h.cols()) {
        return Err(Error::ColumnOutOfRange { index: bad, cols: h.cols() });
    }
    if sorted.len() == h.cols() {
        return Err(Error::Shape("cannot drop every column".into()));
    }
    let removed = sorted.iter().map(|&j| h.labeled_column(j)).collect();
    let kept: Vec<Column> =
        (0..h.cols()).filter(|j| sorted.binary_search(j).is_err()).map(|j| h.labeled_column(j)).collect();
    Ok(Dropped { kept: SignMatrix::from_columns(&kept)?, removed })
}

/// Entrywise product of columns `i` and `j` (positions), labeled as the
/// interaction of their main-effect labels.
pub fn interaction_column(h: &SignMatrix, i: usize, j: usize) -> Result<Column> {
    for &k in &[i, j] {
        if k >= h.cols() {
            return Err(Error::ColumnOutOfRange { index: k, cols: h.cols() });
        }
    }
    if i == j {
        return Err(Error::InvalidSubset(format!("interaction of column {i} with itself")));
    }
    let (a, b) = match (h.label(i), h.label(j)) {
        (ColumnLabel::Main(a), ColumnLabel::Main(b)) => (a, b),
        (ColumnLabel::Main(_), other) | (other, _) => return Err(Error::NonMainStartColumn(other)),
    };
    let entries = (0..h.rows()).map(|r| h.get(r, i) * h.get(r, j)).collect();
    Ok(Column { label: ColumnLabel::interaction(a, b)?, entries })
}

/// True iff every pair of columns shows each of `++, +-, -+, --` exactly
/// `n/4` times (and hence every column is balanced).
pub fn verify_oa_strength2(h: &SignMatrix) -> bool {
    let n = h.rows();
    if !n.is_multiple_of(4) {
        return false;
    }
    let balanced = (0..h.cols()).all(|j| (0..n).map(|i| h.get(i, j) as i64).sum::<i64>() == 0);
    if !balanced {
        return false;
    }
    for a in 0..h.cols() {
        for b in a + 1..h.cols() {
            let mut counts = [0usize; 4];
            for i in 0..n {
                let idx = ((h.get(i, a) < 0) as usize) << 1 | (h.get(i, b) < 0) as usize;
                counts[idx] += 1;
            }
            if counts.iter().any(|&c| c != n / 4) {
                return false;
            }
        }
    }
    true
}

/// A pair of columns that are equal up to sign.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AliasedPair {
    #[serde(skip)]
    pub first: usize,
    #[serde(skip)]
    pub second: usize,
    #[serde(rename = "first")]
    pub first_label: ColumnLabel,
    #[serde(rename = "second")]
    pub second_label: ColumnLabel,
    pub inner_product: i64,
}

/// Every unordered pair of columns with `|inner product| = n`, in
/// lexicographic position order. An empty list certifies that all columns
/// are at most partially aliased.
pub fn aliasing_report(x: &SignMatrix) -> Vec<AliasedPair> {
    let n = x.rows() as i64;
    let packed = crate::spectral::PackedColumns::from_matrix(x);
    let mut out = Vec::new();
    for a in 0..x.cols() {
        for b in a + 1..x.cols() {
            let dot = packed.dot(a, b);
            if dot.abs() == n {
                out.push(AliasedPair {
                    first: a,
                    second: b,
                    first_label: x.label(a),
                    second_label: x.label(b),
                    inner_product: dot,
                });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h4_design() -> SignMatrix {
        to_hadamard_design(&sylvester_hadamard(2).unwrap()).unwrap()
    }

    #[test]
    fn rejects_non_sign_entries() {
        let err = SignMatrix::from_rows(&[vec![1, 0], vec![1, 1]]).unwrap_err();
        assert!(matches!(err, Error::InvalidEntry { row: 0, col: 1, value: 0 }));
    }

    #[test]
    fn rejects_duplicate_labels() {
        let labels = vec![ColumnLabel::Main(1), ColumnLabel::Main(1)];
        let err = SignMatrix::from_rows_labeled(&[vec![1, 1]], labels).unwrap_err();
        assert!(matches!(err, Error::DuplicateLabel(_)));
    }

    #[test]
    fn label_text_round_trip() {
        for l in [ColumnLabel::Main(3), ColumnLabel::Interaction(1, 2), ColumnLabel::Main(0)] {
            assert_eq!(l.to_string().parse::<ColumnLabel>().unwrap(), l);
        }
        assert_eq!(ColumnLabel::Interaction(1, 12).to_string(), "c1*c12");
        assert!("c2*c1".parse::<ColumnLabel>().is_err());
        assert!("x1".parse::<ColumnLabel>().is_err());
        assert!("c".parse::<ColumnLabel>().is_err());
        assert!("c+1".parse::<ColumnLabel>().is_err());
    }

    #[test]
    fn drop_nothing_is_identity() {
        let h = h4_design();
        let d = drop_columns(&h, &[]).unwrap();
        assert_eq!(d.kept, h);
        assert!(d.removed.is_empty());
    }

    #[test]
    fn drop_keeps_labels_and_returns_removed() {
        let h = hadamard_design(12, Construction::Paley).unwrap();
        let d = drop_columns(&h, &[7, 2, 9]).unwrap();
        assert_eq!(d.kept.cols(), 8);
        assert!(verify_oa_strength2(&d.kept));
        let removed: Vec<_> = d.removed.iter().map(|c| c.label).collect();
        assert_eq!(removed, vec![ColumnLabel::Main(3), ColumnLabel::Main(8), ColumnLabel::Main(10)]);
        assert_eq!(d.removed[0].entries, h.column(2));
        assert!(!d.kept.labels().contains(&ColumnLabel::Main(8)));
    }

    #[test]
    fn drop_rejects_bad_indices() {
        let h = h4_design();
        assert!(matches!(drop_columns(&h, &[3]), Err(Error::ColumnOutOfRange { index: 3, .. })));
        assert!(drop_columns(&h, &[1, 1]).is_err());
    }

    #[test]
    fn interaction_entrywise_product() {
        let h = SignMatrix::from_rows(&[vec![1, 1], vec![1, -1], vec![-1, 1], vec![-1, -1]]).unwrap();
        let c = interaction_column(&h, 0, 1).unwrap();
        assert_eq!(c.entries, vec![1, -1, -1, 1]);
        assert_eq!(c.label, ColumnLabel::Interaction(1, 2));
        assert!(interaction_column(&h, 1, 1).is_err());
        assert!(interaction_column(&h, 0, 2).is_err());
    }

    #[test]
    fn h4_interaction_of_first_two_columns_is_third() {
        let h = h4_design();
        let c = interaction_column(&h, 0, 1).unwrap();
        assert_eq!(c.entries, h.column(2));
    }

    #[test]
    fn oa_checker() {
        let h = h4_design();
        assert!(verify_oa_strength2(&h));
        let dup = SignMatrix::from_columns(&[
            h.labeled_column(0),
            Column { label: ColumnLabel::Main(9), entries: h.column(0) },
        ])
        .unwrap();
        assert!(!verify_oa_strength2(&dup));
        let unbalanced = SignMatrix::from_rows(&[vec![1], vec![1], vec![1], vec![-1]]).unwrap();
        assert!(!verify_oa_strength2(&unbalanced));
    }

    #[test]
    fn aliasing_finds_negated_column() {
        let h = h4_design();
        let neg = Column { label: ColumnLabel::Main(7), entries: h.column(1).iter().map(|v| -v).collect() };
        let mut cols = h.columns();
        cols.push(neg);
        let x = SignMatrix::from_columns(&cols).unwrap();
        let report = aliasing_report(&x);
        assert_eq!(report.len(), 1);
        assert_eq!((report[0].first, report[0].second), (1, 3));
        assert_eq!(report[0].inner_product, -4);
        assert!(aliasing_report(&h).is_empty());
    }
}
