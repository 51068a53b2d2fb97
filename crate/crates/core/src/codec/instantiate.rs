use itertools::Itertools;
use rand::Rng;

use super::{CodecError, GeneratorMatrix, MdsVerdict};
use crate::finite_field::{
    field_size_bound, matrix_det_in_place, matrix_rank_in_place, smallest_prime_above, FieldMatrix,
    PrimeField,
};
use crate::rng::{derived_rng, DOMAIN_INSTANTIATE};
use crate::support::SupportMatrix;

/// How to pick the field for [`instantiate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldChoice {
    /// Smallest prime above `C(n-1, k-1) * multiplier`; `multiplier` of 1 is
    /// the plain bound, larger values raise the per-attempt success rate.
    Auto { multiplier: u64 },
    /// A given prime, which must exceed `C(n-1, k-1)` unless `force` is set.
    Prime { q: u64, force: bool },
}

impl FieldChoice {
    pub const AUTO: FieldChoice = FieldChoice::Auto { multiplier: 1 };

    fn resolve(self, n: usize, k: usize) -> Result<PrimeField, CodecError> {
        let bound = field_size_bound(n, k).ok_or(CodecError::FieldBoundOverflow)?;
        match self {
            FieldChoice::Auto { multiplier } => {
                let target = bound
                    .checked_mul(multiplier.max(1))
                    .ok_or(CodecError::FieldBoundOverflow)?;
                let q = smallest_prime_above(target).ok_or(CodecError::FieldBoundOverflow)?;
                Ok(PrimeField::new(q)?)
            }
            FieldChoice::Prime { q, force } => {
                let field = PrimeField::new(q)?;
                if q <= bound && !force {
                    return Err(CodecError::FieldTooSmall { q, bound });
                }
                Ok(field)
            }
        }
    }
}

/// A generator matrix found by [`instantiate`] and how it was found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instantiation {
    pub generator: GeneratorMatrix,
    /// 1-based index of the successful attempt.
    pub attempts: usize,
    pub seed: u64,
}

/// Redraws allowed per column before an attempt is abandoned.
const COLUMN_DRAWS: usize = 64;

/// Fills the support `m` with uniformly random nonzero field elements until
/// every `k x k` minor is nonzero.
///
/// Columns are drawn left to right. A `k x k` minor is linear in the entries
/// of its last column, so once the earlier columns are fixed a fresh draw of
/// column `j` kills a given minor through `j` with probability about `1/q`;
/// with at most `C(n-1, k-1)` such minors and `q > C(n-1, k-1)`, redrawing
/// column `j` until none vanish terminates quickly. An attempt restarts from
/// scratch if a column cannot be placed within [`COLUMN_DRAWS`] draws. The
/// finished matrix must still pass [`GeneratorMatrix::verify_mds`].
///
/// `m` must satisfy P1 and P3. Attempt `a` draws from the stream
/// `(seed, a)`, so the result depends only on the inputs.
pub fn instantiate(
    m: &SupportMatrix,
    field: FieldChoice,
    seed: u64,
    max_attempts: usize,
) -> Result<Instantiation, CodecError> {
    let expected = m.sparsest_row_weight();
    if let Some(row) = (0..m.k()).find(|&i| m.row_weight(i) != expected) {
        return Err(CodecError::NotSparsest {
            row,
            weight: m.row_weight(row),
            expected,
        });
    }
    if let Some(w) = m.check_p3_matching()?.witness() {
        return Err(CodecError::P3Violated(w.clone()));
    }
    let field = field.resolve(m.n(), m.k())?;

    for attempt in 0..max_attempts {
        let mut rng = derived_rng(seed, DOMAIN_INSTANTIATE, attempt as u64);
        let Some(entries) = draw_columns(m, field, &mut rng) else {
            continue;
        };
        let generator = GeneratorMatrix::new(FieldMatrix::from_rows(field, &entries)?)?;
        if generator.verify_mds()? == MdsVerdict::Mds {
            return Ok(Instantiation {
                generator,
                attempts: attempt + 1,
                seed,
            });
        }
    }
    Err(CodecError::AttemptsExhausted {
        attempts: max_attempts,
        q: field.modulus(),
    })
}

/// One attempt: rows of entries, or `None` if some column ran out of draws.
fn draw_columns<R: Rng>(m: &SupportMatrix, field: PrimeField, rng: &mut R) -> Option<Vec<Vec<u64>>> {
    let (k, n) = (m.k(), m.n());
    let q = field.modulus();
    let mut entries = vec![vec![0u64; n]; k];
    for j in 0..n {
        let placed = (0..COLUMN_DRAWS).any(|_| {
            for (i, row) in entries.iter_mut().enumerate() {
                row[j] = if m.get(i, j) { rng.gen_range(1..q) } else { 0 };
            }
            column_fits(&entries, field, j)
        });
        if !placed {
            return None;
        }
    }
    Some(entries)
}

/// Whether column `j` keeps columns `0..=j` in general position: every
/// subset of at most `k` of them containing `j` is linearly independent.
fn column_fits(entries: &[Vec<u64>], field: PrimeField, j: usize) -> bool {
    let k = entries.len();
    if j + 1 < k {
        // fewer than k columns so far: they must all be independent
        let mut a: Vec<u64> = entries.iter().flat_map(|row| row[..=j].to_vec()).collect();
        return matrix_rank_in_place(field, &mut a, k, j + 1) == j + 1;
    }
    let mut buf = vec![0u64; k * k];
    (0..j).combinations(k - 1).all(|mut cols| {
        cols.push(j);
        for (i, row) in entries.iter().enumerate() {
            for (c, &col) in cols.iter().enumerate() {
                buf[i * k + c] = row[col];
            }
        }
        matrix_det_in_place(field, &mut buf, k) != 0
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::balancer::construct_balanced_support;
    use crate::support::counterexample_p;

    #[test]
    fn small_balanced_code() {
        let (m, _) = construct_balanced_support(4, 2).unwrap();
        let inst = instantiate(&m, FieldChoice::AUTO, 0, 64).unwrap();
        let g = &inst.generator;
        assert_eq!(g.field().modulus(), 5);
        assert_eq!(g.support_of(), m);
        // independent check of all C(4,2) = 6 minors with 2x2 cross products
        let f = g.field();
        for a in 0..4 {
            for b in a + 1..4 {
                let det = g.get(0, a) * g.get(1, b) - g.get(0, b) * g.get(1, a);
                assert!(!det.is_zero(), "minor ({a}, {b})");
            }
        }
        assert_eq!(f.modulus(), 5);
    }

    #[test]
    fn single_row_always_mds() {
        let m = SupportMatrix::ones(1, 6).unwrap();
        for q in [2, 3, 7] {
            let inst = instantiate(&m, FieldChoice::Prime { q, force: false }, 3, 1).unwrap();
            assert_eq!(inst.attempts, 1);
            assert_eq!(inst.generator.support_of(), m);
        }
    }

    #[test]
    fn permutation_support_first_attempt() {
        let m = SupportMatrix::identity(5).unwrap();
        let inst = instantiate(&m, FieldChoice::AUTO, 9, 1).unwrap();
        assert_eq!(inst.attempts, 1);
        assert_eq!(inst.generator.field().modulus(), 2);
        assert_eq!(inst.generator.support_of(), m);
    }

    #[test]
    fn field_bound_enforced() {
        let (m, _) = construct_balanced_support(4, 2).unwrap();
        assert_eq!(
            instantiate(&m, FieldChoice::Prime { q: 2, force: false }, 0, 64),
            Err(CodecError::FieldTooSmall { q: 2, bound: 3 })
        );
        assert_eq!(
            instantiate(&m, FieldChoice::Prime { q: 3, force: false }, 0, 64),
            Err(CodecError::FieldTooSmall { q: 3, bound: 3 })
        );
        assert!(matches!(
            instantiate(&m, FieldChoice::Prime { q: 9, force: true }, 0, 64),
            Err(CodecError::Field(_))
        ));
        // over GF(2) every nonzero entry is 1, and two all-one columns collide
        assert_eq!(
            instantiate(&m, FieldChoice::Prime { q: 2, force: true }, 0, 4),
            Err(CodecError::AttemptsExhausted { attempts: 4, q: 2 })
        );
    }

    #[test]
    fn multiplier_raises_field() {
        let (m, _) = construct_balanced_support(8, 5).unwrap();
        let plain = instantiate(&m, FieldChoice::AUTO, 1, 64).unwrap();
        assert_eq!(plain.generator.field().modulus(), 37);
        let big = instantiate(&m, FieldChoice::Auto { multiplier: 10 }, 1, 64).unwrap();
        assert_eq!(big.generator.field().modulus(), 353);
    }

    #[test]
    fn rejects_supports_without_p3() {
        let err = instantiate(&counterexample_p(), FieldChoice::AUTO, 0, 64).unwrap_err();
        match err {
            CodecError::P3Violated(w) => assert!(w.is_genuine(&counterexample_p())),
            other => panic!("unexpected {other:?}"),
        }
        let heavy = SupportMatrix::ones(2, 4).unwrap();
        assert!(matches!(
            instantiate(&heavy, FieldChoice::AUTO, 0, 64),
            Err(CodecError::NotSparsest { .. })
        ));
    }

    #[test]
    fn deterministic_given_seed() {
        let (m, _) = construct_balanced_support(9, 4).unwrap();
        let a = instantiate(&m, FieldChoice::AUTO, 11, 64).unwrap();
        let b = instantiate(&m, FieldChoice::AUTO, 11, 64).unwrap();
        assert_eq!(a, b);
        let c = instantiate(&m, FieldChoice::AUTO, 12, 64).unwrap();
        assert_ne!(a.generator, c.generator);
    }
}
