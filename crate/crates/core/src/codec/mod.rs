//! Generator matrices over GF(q) with a prescribed support: random
//! instantiation, MDS verification through minors, encoding, and decoding.

mod decode;
mod instantiate;
mod verify;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::finite_field::{FieldElement, FieldError, FieldMatrix, PrimeField};
use crate::support::{P3Witness, SupportError, SupportMatrix};

pub use decode::DecodeResult;
pub use instantiate::{instantiate, FieldChoice, Instantiation};
pub use verify::{MdsVerdict, MAX_MESSAGES, MAX_MINORS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodecError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Support(#[from] SupportError),
    #[error("invalid dimensions k = {k}, n = {n} (need 1 <= k <= n)")]
    InvalidDimensions { k: usize, n: usize },
    #[error("support violates P1: row {row} has weight {weight}, expected {expected}")]
    NotSparsest { row: usize, weight: usize, expected: usize },
    #[error(
        "support violates P3: rows {:?} cover {} columns, need {}",
        .0.violating_rows.iter().map(|i| i + 1).collect::<Vec<_>>(), .0.union_size, .0.required
    )]
    P3Violated(P3Witness),
    #[error("field size q = {q} does not exceed C(n-1, k-1) = {bound}")]
    FieldTooSmall { q: u64, bound: u64 },
    #[error("field-size bound C(n-1, k-1) does not fit in 64 bits")]
    FieldBoundOverflow,
    #[error(
        "no MDS assignment found in {attempts} attempts over GF({q}); \
         try a larger field (q multiplier) or more attempts"
    )]
    AttemptsExhausted { attempts: usize, q: u64 },
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("need at least {k} known positions, got {known}")]
    NotEnoughPositions { known: usize, k: usize },
    #[error("position {position} is out of range for length {n}")]
    PositionOutOfRange { position: usize, n: usize },
    #[error("received symbols are inconsistent with every codeword (first mismatch at position {position})")]
    Inconsistent { position: usize },
    #[error("expected a vector of length {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// A `k x n` generator matrix over a prime field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorMatrix {
    matrix: FieldMatrix,
}

impl GeneratorMatrix {
    pub fn new(matrix: FieldMatrix) -> Result<Self, CodecError> {
        let (k, n) = (matrix.rows(), matrix.cols());
        if k == 0 || k > n {
            return Err(CodecError::InvalidDimensions { k, n });
        }
        Ok(Self { matrix })
    }

    /// Rows of residues; values are reduced modulo q.
    pub fn from_rows<R: AsRef<[u64]>>(field: PrimeField, rows: &[R]) -> Result<Self, CodecError> {
        Self::new(FieldMatrix::from_rows(field, rows)?)
    }

    pub fn k(&self) -> usize {
        self.matrix.rows()
    }

    pub fn n(&self) -> usize {
        self.matrix.cols()
    }

    pub fn field(&self) -> PrimeField {
        self.matrix.field()
    }

    pub fn matrix(&self) -> &FieldMatrix {
        &self.matrix
    }

    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        self.matrix.get(i, j)
    }

    #[inline]
    pub(crate) fn raw(&self, i: usize, j: usize) -> u64 {
        self.matrix.raw()[i * self.n() + j]
    }

    /// Correction radius `floor((n - k) / 2)` of an MDS code with these dimensions.
    pub fn correction_radius(&self) -> usize {
        (self.n() - self.k()) / 2
    }

    /// Binary pattern of nonzero entries.
    pub fn support_of(&self) -> SupportMatrix {
        let mut m = SupportMatrix::zeros(self.k(), self.n()).expect("dimensions validated on construction");
        for i in 0..self.k() {
            for j in 0..self.n() {
                m.set(i, j, self.raw(i, j) != 0);
            }
        }
        m
    }

    /// Parses a vector of field elements, rejecting values `>= q`.
    pub fn parse_vector(&self, values: &[u64]) -> Result<Vec<FieldElement>, CodecError> {
        let f = self.field();
        Ok(values.iter().map(|&v| f.checked_elem(v)).collect::<Result<_, _>>()?)
    }

    pub(crate) fn raw_vector(&self, v: &[FieldElement], expected: usize) -> Result<Vec<u64>, CodecError> {
        if v.len() != expected {
            return Err(CodecError::LengthMismatch { expected, got: v.len() });
        }
        let q = self.field().modulus();
        v.iter()
            .map(|e| {
                if e.field() == self.field() {
                    Ok(e.value())
                } else {
                    Err(FieldError::FieldMismatch(q, e.field().modulus()).into())
                }
            })
            .collect()
    }

    /// Codeword `c` with `c_j = <x, column j>`.
    pub fn encode(&self, x: &[FieldElement]) -> Result<Vec<FieldElement>, CodecError> {
        let x = self.raw_vector(x, self.k())?;
        Ok(self.encode_raw(&x).into_iter().map(|v| self.field().elem(v)).collect())
    }

    pub(crate) fn encode_raw(&self, x: &[u64]) -> Vec<u64> {
        let f = self.field();
        (0..self.n())
            .map(|j| {
                (0..self.k()).fold(0, |acc, i| f.add_raw(acc, f.mul_raw(x[i], self.raw(i, j))))
            })
            .collect()
    }
}

/// A generator matrix together with the seed that produced it; the `.gm`
/// file format.
///
/// Line 1 is `k n q seed`, followed by `k` lines of `n` decimal values in
/// `[0, q)` separated by single spaces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GmFile {
    pub generator: GeneratorMatrix,
    pub seed: u64,
}

impl fmt::Display for GmFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = &self.generator;
        writeln!(f, "{} {} {} {}", g.k(), g.n(), g.field().modulus(), self.seed)?;
        write!(f, "{}", g.matrix())
    }
}

fn parse_fields(line_no: usize, line: &str) -> Result<Vec<u64>, CodecError> {
    line.split(' ')
        .map(|tok| {
            tok.parse::<u64>().map_err(|e| CodecError::Parse {
                line: line_no,
                message: format!("bad number {tok:?}: {e}"),
            })
        })
        .collect()
}

impl FromStr for GmFile {
    type Err = CodecError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lines: Vec<&str> = s.lines().map(|l| l.trim_end_matches('\r')).collect();
        let header = lines.first().ok_or(CodecError::Parse {
            line: 1,
            message: "empty input".into(),
        })?;
        let [k, n, q, seed] = parse_fields(1, header)?[..] else {
            return Err(CodecError::Parse {
                line: 1,
                message: format!("header must be \"k n q seed\", got {header:?}"),
            });
        };
        let (k, n) = (k as usize, n as usize);
        if k == 0 || k > n {
            return Err(CodecError::InvalidDimensions { k, n });
        }
        let field = PrimeField::new(q)?;
        let body: Vec<&str> = lines[1..].to_vec();
        let trailing_blank = body.iter().rev().take_while(|l| l.is_empty()).count();
        let body = &body[..body.len() - trailing_blank];
        if body.len() != k {
            return Err(CodecError::Parse {
                line: body.len().min(k) + 2,
                message: format!("expected {k} matrix rows, found {}", body.len()),
            });
        }
        let mut rows = Vec::with_capacity(k);
        for (i, line) in body.iter().enumerate() {
            let row = parse_fields(i + 2, line)?;
            if row.len() != n {
                return Err(CodecError::Parse {
                    line: i + 2,
                    message: format!("row has {} values, expected {n}", row.len()),
                });
            }
            if let Some(&v) = row.iter().find(|&&v| v >= q) {
                return Err(CodecError::Parse {
                    line: i + 2,
                    message: format!("value {v} is not below q = {q}"),
                });
            }
            rows.push(row);
        }
        Ok(GmFile {
            generator: GeneratorMatrix::from_rows(field, &rows)?,
            seed,
        })
    }
}
