use std::collections::BTreeMap;

use itertools::Itertools;

use super::{CodecError, GeneratorMatrix};
use crate::finite_field::{matrix_solve_in_place, FieldElement, FieldError};

/// Outcome of bounded-distance decoding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecodeResult {
    /// The unique codeword within the correction radius.
    Decoded {
        message: Vec<FieldElement>,
        /// Sorted 0-based positions where the received word differs from
        /// the codeword.
        error_positions: Vec<usize>,
    },
    /// No codeword lies within the correction radius.
    Failure,
}

impl DecodeResult {
    pub fn message(&self) -> Option<&[FieldElement]> {
        match self {
            DecodeResult::Decoded { message, .. } => Some(message),
            DecodeResult::Failure => None,
        }
    }
}

impl GeneratorMatrix {
    /// Solves for the message from the first `k` known positions and
    /// checks the remaining ones against it. Assumes the code is MDS.
    pub fn erasure_decode(&self, known: &BTreeMap<usize, FieldElement>) -> Result<Vec<FieldElement>, CodecError> {
        let (k, n) = (self.k(), self.n());
        if let Some((&position, _)) = known.iter().next_back().filter(|(&p, _)| p >= n) {
            return Err(CodecError::PositionOutOfRange { position, n });
        }
        if known.len() < k {
            return Err(CodecError::NotEnoughPositions { known: known.len(), k });
        }
        let positions: Vec<usize> = known.keys().copied().collect();
        let values: Vec<FieldElement> = known.values().copied().collect();
        let values = self.raw_vector(&values, values.len())?;
        match self.solve_on(&positions, &values)? {
            Ok(x) => Ok(x.into_iter().map(|v| self.field().elem(v)).collect()),
            Err(position) => Err(CodecError::Inconsistent { position }),
        }
    }

    /// Returns `Ok(Ok(x))` when the raw values at `positions` are consistent
    /// with a single message, `Ok(Err(p))` with the first mismatching
    /// position otherwise.
    fn solve_on(&self, positions: &[usize], values: &[u64]) -> Result<Result<Vec<u64>, usize>, CodecError> {
        let k = self.k();
        let f = self.field();
        // row r of the system: sum_i x_i g[i][positions[r]] = values[r]
        let mut a = vec![0u64; k * k];
        for (r, &j) in positions[..k].iter().enumerate() {
            for i in 0..k {
                a[r * k + i] = self.raw(i, j);
            }
        }
        let mut x = values[..k].to_vec();
        matrix_solve_in_place(f, &mut a, &mut x, k).map_err(|e| match e {
            FieldError::Singular => CodecError::Field(FieldError::Singular),
            other => other.into(),
        })?;
        for (&j, &v) in positions[k..].iter().zip(&values[k..]) {
            let c = (0..k).fold(0, |acc, i| f.add_raw(acc, f.mul_raw(x[i], self.raw(i, j))));
            if c != v {
                return Ok(Err(j));
            }
        }
        Ok(Ok(x))
    }

    /// Bounded-distance decoding by exhaustive search over error supports.
    ///
    /// Candidate supports `E` are tried in order of increasing size up to
    /// `floor((n - k) / 2)`; the first `E` whose complement is consistent
    /// with a codeword wins. Because the minimum distance of an MDS code is
    /// `n - k + 1`, that codeword is unique. Assumes the code is MDS.
    pub fn error_decode(&self, received: &[FieldElement]) -> Result<DecodeResult, CodecError> {
        let n = self.n();
        let y = self.raw_vector(received, n)?;
        for size in 0..=self.correction_radius() {
            for erased in (0..n).combinations(size) {
                let positions: Vec<usize> = (0..n).filter(|j| !erased.contains(j)).collect();
                let values: Vec<u64> = positions.iter().map(|&j| y[j]).collect();
                if let Ok(x) = self.solve_on(&positions, &values)? {
                    let codeword = self.encode_raw(&x);
                    let error_positions = (0..n).filter(|&j| codeword[j] != y[j]).collect();
                    return Ok(DecodeResult::Decoded {
                        message: x.into_iter().map(|v| self.field().elem(v)).collect(),
                        error_positions,
                    });
                }
            }
        }
        Ok(DecodeResult::Failure)
    }
}
