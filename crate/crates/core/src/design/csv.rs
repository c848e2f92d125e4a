//! Design CSV: one run per line, entries `+1`/`-1` separated by commas,
//! preceded by a header of column labels (`c3`, `c1*c2`).
//!
//! Writers always emit the header and a trailing newline. Readers accept
//! files with or without a header; without one, columns are labeled
//! `c1…cq`. Parsing is strict: any other token is an error naming its line
//! and column (both 1-based).

use std::fs;
use std::path::Path;

use super::{ColumnLabel, SignMatrix};
use crate::error::{Error, Result};

pub fn write_csv(x: &SignMatrix) -> String {
    let mut out = String::with_capacity((x.cols() * 3 + 1) * (x.rows() + 1));
    let header: Vec<String> = x.labels().iter().map(ToString::to_string).collect();
    out.push_str(&header.join(","));
    out.push('\n');
    for i in 0..x.rows() {
        for (j, &v) in x.row(i).iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            out.push_str(if v > 0 { "+1" } else { "-1" });
        }
        out.push('\n');
    }
    out
}

pub fn write_csv_path(x: &SignMatrix, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, write_csv(x))?;
    Ok(())
}

fn csv_error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Csv { line, column, message: message.into() }
}

fn parse_entry(token: &str) -> Option<i8> {
    match token {
        "+1" => Some(1),
        "-1" => Some(-1),
        _ => None,
    }
}

pub fn read_csv(text: &str) -> Result<SignMatrix> {
    let mut lines: Vec<&str> = text.split('\n').map(|l| l.strip_suffix('\r').unwrap_or(l)).collect();
    if lines.last() == Some(&"") {
        lines.pop();
    }
    if lines.is_empty() {
        return Err(csv_error(1, 1, "empty design file"));
    }

    let first: Vec<&str> = lines[0].split(',').collect();
    let has_header = first.iter().any(|t| parse_entry(t).is_none());
    let labels = if has_header {
        let mut labels = Vec::with_capacity(first.len());
        for (j, token) in first.iter().enumerate() {
            let label: ColumnLabel =
                token.parse().map_err(|_| csv_error(1, j + 1, format!("invalid column label {token:?}")))?;
            labels.push(label);
        }
        labels
    } else {
        (1..=first.len()).map(ColumnLabel::Main).collect()
    };
    let width = labels.len();

    let body_start = has_header as usize;
    let mut rows = Vec::with_capacity(lines.len() - body_start);
    for (offset, line) in lines[body_start..].iter().enumerate() {
        let line_no = body_start + offset + 1;
        let tokens: Vec<&str> = line.split(',').collect();
        if tokens.len() != width {
            return Err(csv_error(
                line_no,
                tokens.len().min(width) + 1,
                format!("expected {width} entries, found {}", tokens.len()),
            ));
        }
        let mut row = Vec::with_capacity(width);
        for (j, token) in tokens.iter().enumerate() {
            let v = parse_entry(token)
                .ok_or_else(|| csv_error(line_no, j + 1, format!("invalid entry {token:?}, expected +1 or -1")))?;
            row.push(v);
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(csv_error(lines.len() + 1, 1, "no design rows"));
    }
    SignMatrix::from_rows_labeled(&rows, labels).map_err(|e| match e {
        Error::DuplicateLabel(l) => csv_error(1, 1, format!("duplicate column label {l}")),
        other => other,
    })
}

pub fn read_csv_path(path: impl AsRef<Path>) -> Result<SignMatrix> {
    read_csv(&fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::{hadamard_design, Construction};

    #[test]
    fn writes_header_and_signed_tokens() {
        let x = SignMatrix::from_rows(&[vec![1, -1], vec![-1, -1]]).unwrap();
        assert_eq!(write_csv(&x), "c1,c2\n+1,-1\n-1,-1\n");
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let h = hadamard_design(12, Construction::Paley).unwrap();
        let text = write_csv(&h);
        let back = read_csv(&text).unwrap();
        assert_eq!(back, h);
        assert_eq!(write_csv(&back), text);
    }

    #[test]
    fn headerless_input_gets_default_labels() {
        let x = read_csv("+1,-1\n-1,+1\n").unwrap();
        assert_eq!(x.labels(), &[ColumnLabel::Main(1), ColumnLabel::Main(2)]);
        assert_eq!(x.row(1), &[-1, 1]);
    }

    #[test]
    fn interaction_headers_parse() {
        let x = read_csv("c1,c1*c2\n+1,+1\n-1,-1\n").unwrap();
        assert_eq!(x.label(1), ColumnLabel::Interaction(1, 2));
    }

    #[test]
    fn errors_carry_line_and_column() {
        let err = read_csv("c1,c2\n+1,-1\n+1,1\n").unwrap_err();
        assert!(matches!(err, Error::Csv { line: 3, column: 2, .. }), "{err}");
        let err = read_csv("c1,c2\n+1,-1\n+1\n").unwrap_err();
        assert!(matches!(err, Error::Csv { line: 3, column: 2, .. }), "{err}");
        let err = read_csv("c1,c2\n+1,-1,+1\n").unwrap_err();
        assert!(matches!(err, Error::Csv { line: 2, column: 3, .. }), "{err}");
        let err = read_csv("c1,bad\n+1,-1\n").unwrap_err();
        assert!(matches!(err, Error::Csv { line: 1, column: 2, .. }), "{err}");
        assert!(read_csv("").is_err());
        assert!(read_csv("c1,c2\n").is_err());
        assert!(read_csv("+1, -1\n").is_err());
    }
}
