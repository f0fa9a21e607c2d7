//! Permutation tableaux: shapes, 0/1 fillings, validation and statistics.
//!
//! A permutation tableau is a Ferrers shape (weakly decreasing row lengths,
//! empty rows allowed, at least one row) filled with 0s and 1s such that
//!
//! 1. every column contains at least one 1, and
//! 2. no 0 has both a 1 above it in its column and a 1 to its left in its
//!    row.
//!
//! Its length is the number of rows plus the number of columns. A 0 with a
//! 1 above it is *restricted*; a row without restricted 0s is
//! *unrestricted*. A 1 with another 1 above it is *superfluous*.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

/// Row lengths of a tableau, top to bottom.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Shape {
    row_lengths: Vec<usize>,
}

impl Shape {
    /// Checks the shape invariants: at least one row, weakly decreasing.
    pub fn new(row_lengths: Vec<usize>) -> Result<Self, Vec<Violation>> {
        let violations = shape_violations(&row_lengths);
        if violations.is_empty() {
            Ok(Shape { row_lengths })
        } else {
            Err(violations)
        }
    }

    pub fn row_lengths(&self) -> &[usize] {
        &self.row_lengths
    }

    pub fn num_rows(&self) -> usize {
        self.row_lengths.len()
    }

    pub fn num_columns(&self) -> usize {
        self.row_lengths[0]
    }

    /// Rows plus columns.
    pub fn length(&self) -> usize {
        self.num_rows() + self.num_columns()
    }
}

fn shape_violations(row_lengths: &[usize]) -> Vec<Violation> {
    if row_lengths.is_empty() {
        return vec![Violation::NoRows];
    }
    row_lengths
        .windows(2)
        .enumerate()
        .filter(|(_, w)| w[0] < w[1])
        .map(|(row, _)| Violation::NonMonotoneShape { row: row + 1 })
        .collect()
}

/// One broken rule found by [`validate`]. Rows and columns are 0-based,
/// counted from the top and from the left.
#[derive(Clone, Debug, PartialEq, Eq, Hash, thiserror::Error)]
pub enum Violation {
    #[error("shape has no rows")]
    NoRows,
    #[error("row {row} is longer than the row above it")]
    NonMonotoneShape { row: usize },
    #[error("shape has {expected} rows but the fill has {found}")]
    RowCountMismatch { expected: usize, found: usize },
    #[error("row {row} should have {expected} cells but has {found}")]
    RowLengthMismatch {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("column {column} contains no 1")]
    ColumnWithoutOne { column: usize },
    #[error("0 at ({row}, {column}) has a 1 above it and a 1 to its left")]
    ForbiddenZero { row: usize, column: usize },
}

/// A valid permutation tableau. Immutable once built.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tableau {
    shape: Shape,
    rows: Vec<Vec<bool>>,
}

/// Validates a shape and a row-major fill, reporting every violation.
pub fn validate(row_lengths: Vec<usize>, rows: Vec<Vec<bool>>) -> Result<Tableau, Vec<Violation>> {
    let mut violations = shape_violations(&row_lengths);
    if row_lengths.len() != rows.len() {
        violations.push(Violation::RowCountMismatch {
            expected: row_lengths.len(),
            found: rows.len(),
        });
    } else {
        for (row, (&expected, cells)) in row_lengths.iter().zip(&rows).enumerate() {
            if cells.len() != expected {
                violations.push(Violation::RowLengthMismatch {
                    row,
                    expected,
                    found: cells.len(),
                });
            }
        }
    }
    let dimensions_ok = !violations.iter().any(|v| {
        matches!(
            v,
            Violation::NoRows
                | Violation::RowCountMismatch { .. }
                | Violation::RowLengthMismatch { .. }
        )
    });
    if dimensions_ok {
        fill_violations(&rows, &mut violations);
    }
    if violations.is_empty() {
        Ok(Tableau {
            shape: Shape { row_lengths },
            rows,
        })
    } else {
        Err(violations)
    }
}

fn fill_violations(rows: &[Vec<bool>], out: &mut Vec<Violation>) {
    let width = rows.iter().map(Vec::len).max().unwrap_or(0);
    let mut one_above = vec![false; width];
    for (r, cells) in rows.iter().enumerate() {
        let mut one_left = false;
        for (c, &cell) in cells.iter().enumerate() {
            if cell {
                one_left = true;
                one_above[c] = true;
            } else if one_left && one_above[c] {
                out.push(Violation::ForbiddenZero { row: r, column: c });
            }
        }
    }
    out.extend(
        one_above
            .iter()
            .enumerate()
            .filter(|(_, &seen)| !seen)
            .map(|(column, _)| Violation::ColumnWithoutOne { column }),
    );
}

impl Tableau {
    /// The unique tableau of length 1: one empty row.
    pub fn single_row() -> Self {
        Tableau {
            shape: Shape {
                row_lengths: vec![0],
            },
            rows: vec![Vec::new()],
        }
    }

    /// Builds a tableau from rows of `'0'`/`'1'` strings (top to bottom);
    /// the shape is read off the row lengths.
    pub fn from_rows<S: AsRef<str>>(rows: &[S]) -> Result<Self, DecodeError> {
        let parsed = rows
            .iter()
            .enumerate()
            .map(|(row, s)| parse_row(row, s.as_ref()))
            .collect::<Result<Vec<_>, _>>()?;
        let lengths = parsed.iter().map(Vec::len).collect();
        validate(lengths, parsed).map_err(DecodeError::Invalid)
    }

    pub(crate) fn from_parts_unchecked(rows: Vec<Vec<bool>>) -> Self {
        let row_lengths = rows.iter().map(Vec::len).collect();
        let t = Tableau {
            shape: Shape { row_lengths },
            rows,
        };
        debug_assert!(
            validate(t.shape.row_lengths.clone(), t.rows.clone()).is_ok(),
            "internal construction produced an invalid tableau"
        );
        t
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn rows(&self) -> &[Vec<bool>] {
        &self.rows
    }

    pub fn num_rows(&self) -> usize {
        self.shape.num_rows()
    }

    pub fn num_columns(&self) -> usize {
        self.shape.num_columns()
    }

    pub fn length(&self) -> usize {
        self.shape.length()
    }

    pub fn cell(&self, row: usize, column: usize) -> Option<bool> {
        self.rows.get(row)?.get(column).copied()
    }

    /// For each row, whether it contains a restricted 0.
    pub fn restricted_rows(&self) -> Vec<bool> {
        let mut one_above = vec![false; self.num_columns()];
        self.rows
            .iter()
            .map(|cells| {
                let mut restricted = false;
                for (c, &cell) in cells.iter().enumerate() {
                    if cell {
                        one_above[c] = true;
                    } else if one_above[c] {
                        restricted = true;
                    }
                }
                restricted
            })
            .collect()
    }

    /// All six statistics in one top-down pass.
    pub fn stats(&self) -> StatVector {
        let mut one_above = vec![false; self.num_columns()];
        let mut unrestricted = 0;
        let mut superfluous = 0;
        let mut total_ones = 0;
        for cells in &self.rows {
            let mut restricted = false;
            for (c, &cell) in cells.iter().enumerate() {
                if cell {
                    total_ones += 1;
                    if one_above[c] {
                        superfluous += 1;
                    }
                    one_above[c] = true;
                } else if one_above[c] {
                    restricted = true;
                }
            }
            if !restricted {
                unrestricted += 1;
            }
        }
        StatVector {
            rows: self.num_rows(),
            columns: self.num_columns(),
            unrestricted,
            first_row_ones: self.rows[0].iter().filter(|&&c| c).count(),
            superfluous,
            total_ones,
        }
    }

    /// Canonical text form; see [`decode`].
    pub fn encode(&self) -> String {
        let lengths: Vec<String> = self
            .shape
            .row_lengths
            .iter()
            .map(ToString::to_string)
            .collect();
        let mut out = format!("shape: {}\n", lengths.join(","));
        for cells in &self.rows {
            out.extend(cells.iter().map(|&c| if c { '1' } else { '0' }));
            out.push('\n');
        }
        out
    }

    /// Rows as `'0'`/`'1'` strings joined by `/` (empty rows stay empty).
    pub fn compact(&self) -> String {
        self.rows
            .iter()
            .map(|cells| {
                cells
                    .iter()
                    .map(|&c| if c { '1' } else { '0' })
                    .collect::<String>()
            })
            .collect::<Vec<_>>()
            .join("/")
    }
}

/// Per-tableau statistics.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize)]
pub struct StatVector {
    pub rows: usize,
    pub columns: usize,
    pub unrestricted: usize,
    pub first_row_ones: usize,
    pub superfluous: usize,
    pub total_ones: usize,
}

impl StatVector {
    pub fn length(&self) -> usize {
        self.rows + self.columns
    }

    pub fn get(&self, stat: TableauStat) -> usize {
        match stat {
            TableauStat::Unrestricted => self.unrestricted,
            TableauStat::FirstRow => self.first_row_ones,
            TableauStat::Rows => self.rows,
            TableauStat::Columns => self.columns,
            TableauStat::Superfluous => self.superfluous,
            TableauStat::TotalOnes => self.total_ones,
        }
    }
}

/// Names of the tableau statistics.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TableauStat {
    Unrestricted,
    FirstRow,
    Rows,
    Columns,
    Superfluous,
    TotalOnes,
}

impl TableauStat {
    pub const ALL: [TableauStat; 6] = [
        TableauStat::Unrestricted,
        TableauStat::FirstRow,
        TableauStat::Rows,
        TableauStat::Columns,
        TableauStat::Superfluous,
        TableauStat::TotalOnes,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TableauStat::Unrestricted => "unrestricted",
            TableauStat::FirstRow => "first-row",
            TableauStat::Rows => "rows",
            TableauStat::Columns => "columns",
            TableauStat::Superfluous => "superfluous",
            TableauStat::TotalOnes => "total-ones",
        }
    }
}

impl fmt::Display for TableauStat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TableauStat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        TableauStat::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| format!("unknown statistic `{s}`"))
    }
}

/// Parse or validation failure for the text form.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum DecodeError {
    #[error("first line must be `shape: l1,l2,...`")]
    MissingHeader,
    #[error("bad row length `{0}` in shape line")]
    BadShape(String),
    #[error("shape lists {expected} rows but {found} row lines follow")]
    RowCount { expected: usize, found: usize },
    #[error("row {row}: {reason}")]
    BadRow { row: usize, reason: String },
    #[error("invalid tableau: {}", join_violations(.0))]
    Invalid(Vec<Violation>),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

fn parse_row(row: usize, s: &str) -> Result<Vec<bool>, DecodeError> {
    s.chars()
        .map(|ch| match ch {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(DecodeError::BadRow {
                row,
                reason: format!("unexpected character {other:?}"),
            }),
        })
        .collect()
}

/// Canonical form of a tableau.
pub fn encode(t: &Tableau) -> String {
    t.encode()
}

/// Parses the canonical text form: a `shape: l1,...,lk` line followed by
/// `k` lines of 0/1 strings (an empty line for a zero-length row), each
/// LF-terminated.
pub fn decode(text: &str) -> Result<Tableau, DecodeError> {
    let body = text.strip_suffix('\n').unwrap_or(text);
    let mut lines = body.split('\n');
    let header = lines.next().ok_or(DecodeError::MissingHeader)?;
    let list = header
        .strip_prefix("shape:")
        .ok_or(DecodeError::MissingHeader)?
        .trim();
    let lengths = list
        .split(',')
        .map(|tok| {
            tok.trim()
                .parse::<usize>()
                .map_err(|_| DecodeError::BadShape(tok.trim().to_string()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let row_lines: Vec<&str> = lines.collect();
    if row_lines.len() != lengths.len() {
        return Err(DecodeError::RowCount {
            expected: lengths.len(),
            found: row_lines.len(),
        });
    }
    let mut rows = Vec::with_capacity(row_lines.len());
    for (row, line) in row_lines.iter().enumerate() {
        let cells = parse_row(row, line)?;
        if cells.len() != lengths[row] {
            return Err(DecodeError::BadRow {
                row,
                reason: format!("expected {} cells, found {}", lengths[row], cells.len()),
            });
        }
        rows.push(cells);
    }
    validate(lengths, rows).map_err(DecodeError::Invalid)
}

impl fmt::Display for Tableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encode())
    }
}

impl FromStr for Tableau {
    type Err = DecodeError;
    fn from_str(s: &str) -> Result<Self, DecodeError> {
        decode(s)
    }
}

/// The length-13 example tableau used throughout the documentation.
pub fn example_tableau() -> Tableau {
    Tableau::from_rows(&["0010011", "00101", "01111", "000", "1", ""])
        .expect("example tableau is valid")
}
