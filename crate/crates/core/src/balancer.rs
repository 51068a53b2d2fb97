//! Column balancing of a sparsest support matrix.
//!
//! Starting from a matrix that satisfies P1 and P3, repeatedly move a one
//! from a heaviest column to a lightest column within some row, choosing a
//! row for which P3 survives the move. Row weights never change, so P1 is
//! preserved, and the spread between the heaviest and lightest column drops
//! by at least one every `floor(n / 2)` swaps. Starting from the cyclic
//! matrix (spread at most `k - 1`) this gives at most `(k - 1) * floor(n / 2)`
//! swaps.
//!
//! Ties are broken towards the smallest index everywhere, so the result is a
//! pure function of the input.

use std::fmt::Write as _;

use thiserror::Error;

use crate::support::{P3Witness, SupportError, SupportMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BalanceError {
    #[error(transparent)]
    Support(#[from] SupportError),
    #[error("input violates P1: row {row} has weight {weight}, expected {expected}")]
    NotSparsest { row: usize, weight: usize, expected: usize },
    #[error("input violates P3 on rows {:?}", .0.violating_rows)]
    NotP3(P3Witness),
    #[error("columns {j_max} and {j_min} are not a valid swap pair (weights {w_max} and {w_min})")]
    BadColumns {
        j_max: usize,
        j_min: usize,
        w_max: usize,
        w_min: usize,
    },
    #[error(
        "internal error: no row can move a one from column {j_max} to column {j_min} while keeping P3; \
         a valid row always exists, so this is a bug"
    )]
    NoValidSwapRow { j_max: usize, j_min: usize },
}

/// One swap: `bits[i_s][j_max]` went from 1 to 0 and `bits[i_s][j_min]` from 0 to 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SwapRecord {
    /// 1-based iteration number.
    pub iteration: usize,
    pub j_max: usize,
    pub j_min: usize,
    pub i_s: usize,
    /// Column-weight spread `max - min` before the swap.
    pub spread_before: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BalanceTrace {
    pub records: Vec<SwapRecord>,
    pub initial_weights: Vec<usize>,
    pub final_weights: Vec<usize>,
}

impl BalanceTrace {
    pub fn swap_count(&self) -> usize {
        self.records.len()
    }

    /// One line per swap: `iter j_max j_min i_s spread`, indices 1-based.
    pub fn to_log(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            writeln!(
                out,
                "{} {} {} {} {}",
                r.iteration,
                r.j_max + 1,
                r.j_min + 1,
                r.i_s + 1,
                r.spread_before
            )
            .unwrap();
        }
        out
    }
}

/// Upper bound `(k - 1) * floor(n / 2)` on the number of swaps from the cyclic start.
pub fn swap_bound(n: usize, k: usize) -> usize {
    k.saturating_sub(1) * (n / 2)
}

fn ensure_p1_p3(m: &SupportMatrix) -> Result<(), BalanceError> {
    let expected = m.sparsest_row_weight();
    if let Some(row) = (0..m.k()).find(|&i| m.row_weight(i) != expected) {
        return Err(BalanceError::NotSparsest {
            row,
            weight: m.row_weight(row),
            expected,
        });
    }
    if let Some(w) = m.check_p3_matching()?.witness() {
        return Err(BalanceError::NotP3(w.clone()));
    }
    Ok(())
}

/// Smallest row `i_s` with a one in `j_max`, a zero in `j_min`, and whose swap
/// keeps P3.
///
/// `m` must satisfy P1 and P3, and `weight(j_max) - weight(j_min) >= 2`.
pub fn find_swap_row(m: &SupportMatrix, j_max: usize, j_min: usize) -> Result<usize, BalanceError> {
    ensure_p1_p3(m)?;
    let weights = m.column_weights();
    let (w_max, w_min) = (weights[j_max], weights[j_min]);
    if w_max < w_min + 2 {
        return Err(BalanceError::BadColumns {
            j_max,
            j_min,
            w_max,
            w_min,
        });
    }
    let mut scratch = m.clone();
    search_swap_row(&mut scratch, j_max, j_min).ok_or(BalanceError::NoValidSwapRow { j_max, j_min })
}

/// Tries each candidate row in order on `m`, reverting failed swaps. On
/// success the swap is left applied.
fn search_swap_row(m: &mut SupportMatrix, j_max: usize, j_min: usize) -> Option<usize> {
    for i in 0..m.k() {
        if !m.get(i, j_max) || m.get(i, j_min) {
            continue;
        }
        m.set(i, j_max, false);
        m.set(i, j_min, true);
        let keeps_p3 = m
            .check_p3_matching()
            .expect("row weights are unchanged by a swap")
            .holds();
        if keeps_p3 {
            return Some(i);
        }
        m.set(i, j_max, true);
        m.set(i, j_min, false);
    }
    None
}

/// Balances the column weights of a P1 + P3 matrix.
pub fn balance(mut m: SupportMatrix) -> Result<(SupportMatrix, BalanceTrace), BalanceError> {
    ensure_p1_p3(&m)?;
    let initial_weights = m.column_weights();
    let mut weights = initial_weights.clone();
    let mut records = Vec::new();
    loop {
        let max = *weights.iter().max().unwrap();
        let min = *weights.iter().min().unwrap();
        if max - min <= 1 {
            break;
        }
        let j_max = weights.iter().position(|&w| w == max).unwrap();
        let j_min = weights.iter().position(|&w| w == min).unwrap();
        let i_s = search_swap_row(&mut m, j_max, j_min).ok_or(BalanceError::NoValidSwapRow { j_max, j_min })?;
        weights[j_max] -= 1;
        weights[j_min] += 1;
        records.push(SwapRecord {
            iteration: records.len() + 1,
            j_max,
            j_min,
            i_s,
            spread_before: max - min,
        });
        debug_assert!(m.check_p1());
        debug_assert_eq!(weights, m.column_weights());
    }
    let trace = BalanceTrace {
        records,
        initial_weights,
        final_weights: weights,
    };
    Ok((m, trace))
}

/// Balanced sparsest support for an `[n, k]` MDS code, starting from the
/// cyclic matrix.
pub fn construct_balanced_support(n: usize, k: usize) -> Result<(SupportMatrix, BalanceTrace), BalanceError> {
    balance(SupportMatrix::initial_cyclic(n, k)?)
}
