use itertools::Itertools;

use super::{CodecError, GeneratorMatrix};
use crate::finite_field::{binomial, matrix_det_in_place};

/// Upper bound on `C(n, k)` for minor enumeration.
pub const MAX_MINORS: u64 = 10_000_000;
/// Upper bound on `q^k` for codeword enumeration.
pub const MAX_MESSAGES: u64 = 1_000_000;

/// Result of checking every `k x k` minor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MdsVerdict {
    Mds,
    /// Lexicographically first column subset with a zero minor (0-based).
    Singular(Vec<usize>),
}

impl MdsVerdict {
    pub fn is_mds(&self) -> bool {
        matches!(self, MdsVerdict::Mds)
    }
}

impl GeneratorMatrix {
    /// Checks that every `k x k` submatrix is nonsingular, which holds iff
    /// the code is MDS.
    pub fn verify_mds(&self) -> Result<MdsVerdict, CodecError> {
        let (k, n) = (self.k(), self.n());
        match binomial(n as u64, k as u64) {
            Some(c) if c <= MAX_MINORS => {}
            _ => {
                return Err(CodecError::TooLarge(format!(
                    "C({n}, {k}) exceeds {MAX_MINORS} minors"
                )))
            }
        }
        let field = self.field();
        let mut buf = vec![0u64; k * k];
        for cols in (0..n).combinations(k) {
            for i in 0..k {
                for (c, &j) in cols.iter().enumerate() {
                    buf[i * k + c] = self.raw(i, j);
                }
            }
            if matrix_det_in_place(field, &mut buf, k) == 0 {
                return Ok(MdsVerdict::Singular(cols));
            }
        }
        Ok(MdsVerdict::Mds)
    }

    /// Minimum Hamming weight over all nonzero codewords, by enumerating
    /// every message.
    pub fn minimum_distance_bruteforce(&self) -> Result<usize, CodecError> {
        let q = self.field().modulus();
        let k = self.k();
        let total = (0..k).try_fold(1u64, |acc, _| acc.checked_mul(q).filter(|&t| t <= MAX_MESSAGES));
        if total.is_none() {
            return Err(CodecError::TooLarge(format!(
                "q^k = {q}^{k} exceeds {MAX_MESSAGES} messages"
            )));
        }
        let mut x = vec![0u64; k];
        let mut best = usize::MAX;
        // odometer over F_q^k, skipping the zero message
        while let Some(pos) = x.iter().position(|&d| d + 1 < q) {
            x[pos] += 1;
            x[..pos].iter_mut().for_each(|d| *d = 0);
            let weight = self.encode_raw(&x).iter().filter(|&&c| c != 0).count();
            best = best.min(weight);
        }
        Ok(best)
    }
}
