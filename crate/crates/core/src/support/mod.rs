//! Binary support matrices and the combinatorial conditions on them.
//!
//! A `k x n` support matrix `M` records which entries of a generator matrix
//! are nonzero. Three properties matter:
//!
//! * **P1**: every row has weight `n - k + 1` (the sparsest possible MDS row);
//! * **P2**: column weights differ pairwise by at most one;
//! * **P3**: for every nonempty row set `I`, `|U_{i in I} R_i| >= n - k + |I|`.
//!
//! P3 is checked three independent ways (row unions, column unions, and
//! perfect matchings on every `k`-column subgraph), plus a polynomial check
//! built from `k` bipartite matchings. Indices are 0-based throughout the
//! library; the text formats and CLI use 1-based indices.

mod checks;
mod matching;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub use checks::{P3Check, P3Witness};
pub use matching::{max_bipartite_matching, BipartiteGraph, Matching};

/// Upper bound on the row count for subset enumeration over rows.
pub const MAX_ENUM_ROWS: usize = 20;
/// Upper bound on the column count for subset enumeration over columns.
pub const MAX_ENUM_COLS: usize = 20;
/// Upper bound on `C(n, k)` for the all-subsets matching oracle.
pub const MAX_K_SUBSETS: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SupportError {
    #[error("invalid dimensions k = {k}, n = {n} (need 1 <= k <= n)")]
    InvalidDimensions { k: usize, n: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("instance too large for enumeration: {0}")]
    TooLarge(String),
    #[error("row {row} has weight {weight}, expected n - k + 1 = {expected}")]
    RowWeight { row: usize, weight: usize, expected: usize },
    #[error("edge ({left}, {right}) is out of range for a {left_count}x{right_count} bipartite graph")]
    EdgeOutOfRange {
        left: usize,
        right: usize,
        left_count: usize,
        right_count: usize,
    },
}

/// A `k x n` binary matrix stored as one bitset per row.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SupportMatrix {
    k: usize,
    n: usize,
    words_per_row: usize,
    bits: Vec<u64>,
}

impl SupportMatrix {
    /// The all-zero `k x n` matrix.
    pub fn zeros(k: usize, n: usize) -> Result<Self, SupportError> {
        if k == 0 || k > n {
            return Err(SupportError::InvalidDimensions { k, n });
        }
        let words_per_row = n.div_ceil(64);
        Ok(Self {
            k,
            n,
            words_per_row,
            bits: vec![0; k * words_per_row],
        })
    }

    pub fn from_rows<R: AsRef<[bool]>>(rows: &[R]) -> Result<Self, SupportError> {
        let n = rows.first().map_or(0, |r| r.as_ref().len());
        let mut m = Self::zeros(rows.len(), n)?;
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n {
                return Err(SupportError::Parse {
                    line: i + 1,
                    message: format!("row has {} entries, expected {n}", row.len()),
                });
            }
            for (j, &b) in row.iter().enumerate() {
                m.set(i, j, b);
            }
        }
        Ok(m)
    }

    /// Builds a matrix from `0`/`1` strings, one per row.
    pub fn from_strs<S: AsRef<str>>(rows: &[S]) -> Result<Self, SupportError> {
        let parsed = rows
            .iter()
            .enumerate()
            .map(|(i, r)| parse_bit_row(r.as_ref(), i + 1))
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_rows(&parsed)
    }

    /// The `k x n` all-ones matrix.
    pub fn ones(k: usize, n: usize) -> Result<Self, SupportError> {
        let mut m = Self::zeros(k, n)?;
        for i in 0..k {
            for j in 0..n {
                m.set(i, j, true);
            }
        }
        Ok(m)
    }

    /// The `k x k` identity support.
    pub fn identity(k: usize) -> Result<Self, SupportError> {
        let mut m = Self::zeros(k, k)?;
        for i in 0..k {
            m.set(i, i, true);
        }
        Ok(m)
    }

    /// The cyclic starting matrix: row `i` is supported on columns
    /// `i, i + 1, ..., i + n - k`.
    pub fn initial_cyclic(n: usize, k: usize) -> Result<Self, SupportError> {
        let mut m = Self::zeros(k, n)?;
        for i in 0..k {
            for j in i..=i + n - k {
                m.set(i, j, true);
            }
        }
        Ok(m)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        assert!(i < self.k && j < self.n, "index ({i}, {j}) out of range");
        self.bits[i * self.words_per_row + j / 64] >> (j % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        assert!(i < self.k && j < self.n, "index ({i}, {j}) out of range");
        let word = &mut self.bits[i * self.words_per_row + j / 64];
        if value {
            *word |= 1 << (j % 64);
        } else {
            *word &= !(1 << (j % 64));
        }
    }

    pub(crate) fn row_words(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words_per_row..(i + 1) * self.words_per_row]
    }

    pub(crate) fn words_per_row(&self) -> usize {
        self.words_per_row
    }

    pub fn row_weight(&self, i: usize) -> usize {
        self.row_words(i).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn row_weights(&self) -> Vec<usize> {
        (0..self.k).map(|i| self.row_weight(i)).collect()
    }

    pub fn column_weights(&self) -> Vec<usize> {
        (0..self.n)
            .map(|j| (0..self.k).filter(|&i| self.get(i, j)).count())
            .collect()
    }

    /// Row support `R_i`.
    pub fn row_support(&self, i: usize) -> Vec<usize> {
        (0..self.n).filter(|&j| self.get(i, j)).collect()
    }

    /// Column support `C_j`.
    pub fn column_support(&self, j: usize) -> Vec<usize> {
        (0..self.k).filter(|&i| self.get(i, j)).collect()
    }

    /// Total number of ones.
    pub fn weight(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Target row weight `n - k + 1`.
    pub fn sparsest_row_weight(&self) -> usize {
        self.n - self.k + 1
    }

    /// `max - min` over column weights.
    pub fn column_spread(&self) -> usize {
        let w = self.column_weights();
        w.iter().max().unwrap() - w.iter().min().unwrap()
    }

    /// Serializes to the `.sm` text format.
    pub fn to_sm_string(&self) -> String {
        self.to_string()
    }
}

fn parse_bit_row(s: &str, line: usize) -> Result<Vec<bool>, SupportError> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(SupportError::Parse {
                line,
                message: format!("unexpected character {other:?}"),
            }),
        })
        .collect()
}

/// `.sm` format: a `k n` header line followed by `k` rows of `n` characters
/// from `{0, 1}`.
impl fmt::Display for SupportMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.k, self.n)?;
        for i in 0..self.k {
            let row: String = (0..self.n).map(|j| if self.get(i, j) { '1' } else { '0' }).collect();
            writeln!(f, "{row}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for SupportMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SupportMatrix[")?;
        for i in 0..self.k {
            if i > 0 {
                write!(f, "/")?;
            }
            for j in 0..self.n {
                write!(f, "{}", u8::from(self.get(i, j)))?;
            }
        }
        write!(f, "]")
    }
}

impl FromStr for SupportMatrix {
    type Err = SupportError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut lines = s.lines().enumerate().map(|(i, l)| (i + 1, l.trim_end_matches('\r')));
        let (_, header) = lines.next().ok_or(SupportError::Parse {
            line: 1,
            message: "empty input".into(),
        })?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse::<usize>())
            .collect::<Result<_, _>>()
            .map_err(|e| SupportError::Parse {
                line: 1,
                message: format!("bad header {header:?}: {e}"),
            })?;
        let [k, n] = dims[..] else {
            return Err(SupportError::Parse {
                line: 1,
                message: format!("header must be \"k n\", got {header:?}"),
            });
        };
        let mut m = Self::zeros(k, n)?;
        let mut row = 0;
        for (line, text) in lines {
            if row == k {
                if text.trim().is_empty() {
                    continue;
                }
                return Err(SupportError::Parse {
                    line,
                    message: format!("more than {k} rows"),
                });
            }
            let bits = parse_bit_row(text, line)?;
            if bits.len() != n {
                return Err(SupportError::Parse {
                    line,
                    message: format!("row has {} entries, expected {n}", bits.len()),
                });
            }
            for (j, b) in bits.into_iter().enumerate() {
                m.set(row, j, b);
            }
            row += 1;
        }
        if row != k {
            return Err(SupportError::Parse {
                line: row + 2,
                message: format!("expected {k} rows, found {row}"),
            });
        }
        Ok(m)
    }
}

/// The 5x8 matrix that satisfies P1 and P2 but violates P3 on rows 1-3.
pub fn counterexample_p() -> SupportMatrix {
    SupportMatrix::from_strs(&["10001110", "10001011", "10000111", "01111000", "01110100"])
        .expect("fixture is well formed")
}
