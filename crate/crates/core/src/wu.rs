//! Wu's construction: supersaturated designs from a strength-2 starting
//! array and its two-column interactions.
//!
//! Design columns are ordered mains first, then interactions in
//! lexicographic order of the starting array's column positions, so a
//! rebuild from the same inputs is identical.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::design::{
    aliasing_report, drop_columns, interaction_column, verify_oa_strength2, AliasedPair, Column, ColumnLabel, Dropped,
    SignMatrix,
};
use crate::error::{Error, Result};
use crate::spectral::d_parameter;

/// A strength-2 array together with the columns deleted from the saturated
/// design it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StartingArray {
    pub array: SignMatrix,
    pub removed: Vec<Column>,
}

impl StartingArray {
    /// A saturated design used as is.
    pub fn saturated(array: SignMatrix) -> Self {
        StartingArray { array, removed: Vec::new() }
    }

    /// `design` with the columns at `positions` deleted.
    pub fn from_design(design: &SignMatrix, positions: &[usize]) -> Result<Self> {
        Ok(drop_columns(design, positions)?.into())
    }

    pub fn n(&self) -> usize {
        self.array.rows()
    }

    pub fn q(&self) -> usize {
        self.array.cols()
    }
}

impl From<Dropped> for StartingArray {
    fn from(d: Dropped) -> Self {
        StartingArray { array: d.kept, removed: d.removed }
    }
}

/// Which interaction columns are adjoined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SsdFamily {
    /// All mains and all two-column interactions.
    FullAugment,
    /// The full augmentation with one column (main or interaction) removed.
    MinusOne { deleted: ColumnLabel },
    /// Interactions only.
    InteractionsOnly,
    /// All mains plus the interactions of one parent column (a position in
    /// the starting array).
    SingleParent { parent: usize },
}

impl SsdFamily {
    pub fn name(&self) -> &'static str {
        match self {
            SsdFamily::FullAugment => "full",
            SsdFamily::MinusOne { .. } => "minus-one",
            SsdFamily::InteractionsOnly => "interactions-only",
            SsdFamily::SingleParent { .. } => "single-parent",
        }
    }

    /// Column count for a starting array with `q` columns.
    pub fn column_count(&self, q: usize) -> usize {
        let pairs = q * q.saturating_sub(1) / 2;
        match self {
            SsdFamily::FullAugment => q + pairs,
            SsdFamily::MinusOne { .. } => q + pairs - 1,
            SsdFamily::InteractionsOnly => pairs,
            SsdFamily::SingleParent { .. } => 2 * q - 1,
        }
    }
}

impl fmt::Display for SsdFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for SsdFamily {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

/// A supersaturated design with its provenance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SsdBuild {
    pub design: SignMatrix,
    pub start: StartingArray,
    pub family: SsdFamily,
    /// Half-fraction replicate count of the natural column triple, when the
    /// start lost columns (see [`crate::spectral::lemmas`]).
    pub d: Option<u64>,
    pub aliased: Vec<AliasedPair>,
}

impl SsdBuild {
    pub fn n(&self) -> usize {
        self.design.rows()
    }

    pub fn m(&self) -> usize {
        self.design.cols()
    }

    /// Metadata written next to the design CSV.
    pub fn summary(&self) -> BuildSummary {
        let (deleted, parent) = match self.family {
            SsdFamily::MinusOne { deleted } => (Some(deleted), None),
            SsdFamily::SingleParent { parent } => (None, Some(self.start.array.label(parent))),
            _ => (None, None),
        };
        BuildSummary {
            family: self.family,
            n: self.n(),
            q: self.start.q(),
            m: self.m(),
            start_labels: self.start.array.labels().to_vec(),
            removed: self.start.removed.iter().map(|c| c.label).collect(),
            deleted,
            parent,
            d: self.d,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BuildSummary {
    pub family: SsdFamily,
    pub n: usize,
    pub q: usize,
    pub m: usize,
    pub start_labels: Vec<ColumnLabel>,
    pub removed: Vec<ColumnLabel>,
    pub deleted: Option<ColumnLabel>,
    pub parent: Option<ColumnLabel>,
    pub d: Option<u64>,
}

pub fn build_full(start: &StartingArray) -> Result<SsdBuild> {
    assemble(start, SsdFamily::FullAugment)
}

pub fn build_minus_one(start: &StartingArray, delete: ColumnLabel) -> Result<SsdBuild> {
    assemble(start, SsdFamily::MinusOne { deleted: delete })
}

pub fn build_interactions_only(start: &StartingArray) -> Result<SsdBuild> {
    assemble(start, SsdFamily::InteractionsOnly)
}

pub fn build_single_parent(start: &StartingArray, parent: usize) -> Result<SsdBuild> {
    assemble(start, SsdFamily::SingleParent { parent })
}

/// Builds any family.
pub fn build(start: &StartingArray, family: SsdFamily) -> Result<SsdBuild> {
    assemble(start, family)
}

fn check_start(start: &StartingArray, family: &SsdFamily) -> Result<()> {
    let h = &start.array;
    if let Some(&bad) = h.labels().iter().find(|l| !l.is_main()) {
        return Err(Error::NonMainStartColumn(bad));
    }
    let n = h.rows();
    if !n.is_multiple_of(4) {
        return Err(Error::NotMultipleOfFour(n));
    }
    if !verify_oa_strength2(h) {
        return Err(Error::NotOrthogonalArray);
    }
    let q = h.cols();
    let (ok, allowed) = match family {
        SsdFamily::MinusOne { .. } => (q + 1 == n || q + 2 == n, "{n-1, n-2}"),
        _ => (q + 1 == n || q + 2 == n || q + 3 == n, "{n-1, n-2, n-3}"),
    };
    if !ok {
        return Err(Error::UnsupportedColumnCount { family: family.name(), n, q, allowed });
    }
    Ok(())
}

fn d_of_triple(a: &[i8], b: &[i8], c: &[i8]) -> Result<Option<u64>> {
    d_parameter(a, b, c).map(Some)
}

fn build_d(start: &StartingArray, family: &SsdFamily) -> Result<Option<u64>> {
    let h = &start.array;
    let r = &start.removed;
    match (r.len(), family) {
        (3, _) => d_of_triple(&r[0].entries, &r[1].entries, &r[2].entries),
        (2, SsdFamily::SingleParent { parent }) => d_of_triple(&r[0].entries, &r[1].entries, &h.column(*parent)),
        (1, SsdFamily::MinusOne { deleted: ColumnLabel::Interaction(i, j) }) => {
            let pi = h.position_of(ColumnLabel::Main(*i)).ok_or(Error::LabelNotFound(ColumnLabel::Main(*i)))?;
            let pj = h.position_of(ColumnLabel::Main(*j)).ok_or(Error::LabelNotFound(ColumnLabel::Main(*j)))?;
            d_of_triple(&r[0].entries, &h.column(pi), &h.column(pj))
        }
        _ => Ok(None),
    }
}

fn assemble(start: &StartingArray, family: SsdFamily) -> Result<SsdBuild> {
    check_start(start, &family)?;
    let h = &start.array;
    let q = h.cols();

    let mains = || h.columns();
    let interactions = || -> Result<Vec<Column>> {
        let mut out = Vec::with_capacity(q * (q - 1) / 2);
        for i in 0..q {
            for j in i + 1..q {
                out.push(interaction_column(h, i, j)?);
            }
        }
        Ok(out)
    };

    let columns: Vec<Column> = match family {
        SsdFamily::FullAugment => {
            let mut cols = mains();
            cols.extend(interactions()?);
            cols
        }
        SsdFamily::MinusOne { deleted } => {
            let mut cols = mains();
            cols.extend(interactions()?);
            let pos = cols.iter().position(|c| c.label == deleted).ok_or(Error::LabelNotFound(deleted))?;
            cols.remove(pos);
            cols
        }
        SsdFamily::InteractionsOnly => interactions()?,
        SsdFamily::SingleParent { parent } => {
            if parent >= q {
                return Err(Error::ColumnOutOfRange { index: parent, cols: q });
            }
            let mut cols = mains();
            for j in (0..q).filter(|&j| j != parent) {
                cols.push(interaction_column(h, parent, j)?);
            }
            cols
        }
    };

    let n = h.rows();
    if columns.len() < n {
        return Err(Error::NotSupersaturated { n, m: columns.len() });
    }
    let design = SignMatrix::from_columns(&columns)?;
    let d = build_d(start, &family)?;
    let aliased = aliasing_report(&design);
    Ok(SsdBuild { design, start: start.clone(), family, d, aliased })
}
