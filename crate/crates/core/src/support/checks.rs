use itertools::Itertools;

use super::matching::{max_bipartite_matching, BipartiteGraph};
use super::{SupportError, SupportMatrix, MAX_ENUM_COLS, MAX_ENUM_ROWS, MAX_K_SUBSETS};
use crate::finite_field::binomial;

/// A nonempty row set `I` with `|U_{i in I} R_i| < n - k + |I|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct P3Witness {
    /// Sorted 0-based row indices.
    pub violating_rows: Vec<usize>,
    pub union_size: usize,
    pub required: usize,
}

impl P3Witness {
    fn for_rows(m: &SupportMatrix, rows: Vec<usize>) -> Self {
        let union_size = m.union_size(&rows);
        let required = m.n() - m.k() + rows.len();
        Self {
            violating_rows: rows,
            union_size,
            required,
        }
    }

    /// Recomputes the union on `m` and confirms the violation.
    pub fn is_genuine(&self, m: &SupportMatrix) -> bool {
        !self.violating_rows.is_empty()
            && self.violating_rows.iter().all(|&i| i < m.k())
            && self.union_size == m.union_size(&self.violating_rows)
            && self.required == m.n() - m.k() + self.violating_rows.len()
            && self.union_size < self.required
    }
}

/// Outcome of a P3 check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum P3Check {
    Holds,
    Violated(P3Witness),
}

impl P3Check {
    pub fn holds(&self) -> bool {
        matches!(self, P3Check::Holds)
    }

    pub fn witness(&self) -> Option<&P3Witness> {
        match self {
            P3Check::Holds => None,
            P3Check::Violated(w) => Some(w),
        }
    }
}

impl SupportMatrix {
    /// `|U_{i in rows} R_i|` by word-wise OR.
    pub fn union_size(&self, rows: &[usize]) -> usize {
        let mut acc = vec![0u64; self.words_per_row()];
        for &i in rows {
            for (a, w) in acc.iter_mut().zip(self.row_words(i)) {
                *a |= w;
            }
        }
        acc.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// P1: every row has weight `n - k + 1`.
    pub fn check_p1(&self) -> bool {
        let target = self.sparsest_row_weight();
        (0..self.k()).all(|i| self.row_weight(i) == target)
    }

    /// P2: column weights differ by at most one.
    pub fn check_p2(&self) -> bool {
        self.column_spread() <= 1
    }

    /// P3 by enumerating every nonempty row subset, smallest first; the
    /// returned witness therefore has minimum size (lexicographically first
    /// among those).
    pub fn check_p3_bruteforce(&self) -> Result<P3Check, SupportError> {
        if self.k() > MAX_ENUM_ROWS {
            return Err(SupportError::TooLarge(format!(
                "k = {} exceeds {MAX_ENUM_ROWS} rows for subset enumeration",
                self.k()
            )));
        }
        let slack = self.n() - self.k();
        for size in 1..=self.k() {
            for rows in (0..self.k()).combinations(size) {
                if self.union_size(&rows) < slack + size {
                    return Ok(P3Check::Violated(P3Witness::for_rows(self, rows)));
                }
            }
        }
        Ok(P3Check::Holds)
    }

    /// P3 in polynomial time for matrices satisfying P1.
    ///
    /// For a set `I` containing row `i`, the condition reads
    /// `|N_i(I \ {i})| >= |I \ {i}|` where `N_i` is the neighborhood in the
    /// bipartite graph `H_i` between the other rows and the columns outside
    /// `R_i`. So P3 holds iff each `H_i` has a matching saturating its left
    /// side, and a Hall violator of `H_i` plus `i` is a violating row set.
    pub fn check_p3_matching(&self) -> Result<P3Check, SupportError> {
        let expected = self.sparsest_row_weight();
        if let Some(row) = (0..self.k()).find(|&i| self.row_weight(i) != expected) {
            return Err(SupportError::RowWeight {
                row,
                weight: self.row_weight(row),
                expected,
            });
        }
        for i in 0..self.k() {
            let others: Vec<usize> = (0..self.k()).filter(|&r| r != i).collect();
            let outside: Vec<usize> = (0..self.n()).filter(|&j| !self.get(i, j)).collect();
            let mut graph = BipartiteGraph::new(others.len(), outside.len());
            for (l, &row) in others.iter().enumerate() {
                for (r, &col) in outside.iter().enumerate() {
                    if self.get(row, col) {
                        graph.add_edge(l, r)?;
                    }
                }
            }
            let matching = max_bipartite_matching(&graph);
            if let Some(deficient) = graph.hall_violator(&matching) {
                let mut rows: Vec<usize> = deficient.into_iter().map(|l| others[l]).collect();
                rows.push(i);
                rows.sort_unstable();
                let witness = P3Witness::for_rows(self, rows);
                debug_assert!(witness.is_genuine(self));
                return Ok(P3Check::Violated(witness));
            }
        }
        Ok(P3Check::Holds)
    }

    /// Hall's condition over columns: `|U_{j in J} C_j| >= |J|` for every
    /// column set `J` with `|J| <= k`.
    pub fn check_hall_columns(&self) -> Result<bool, SupportError> {
        let n = self.n();
        if n > MAX_ENUM_COLS {
            return Err(SupportError::TooLarge(format!(
                "n = {n} exceeds {MAX_ENUM_COLS} columns for subset enumeration"
            )));
        }
        let col_masks: Vec<u32> = (0..n)
            .map(|j| {
                (0..self.k())
                    .filter(|&i| self.get(i, j))
                    .fold(0u32, |acc, i| acc | 1 << i)
            })
            .collect();
        // union[J] = union[J minus lowest] | C_lowest
        let mut union = vec![0u32; 1 << n];
        for set in 1usize..1 << n {
            let low = set.trailing_zeros() as usize;
            union[set] = union[set & (set - 1)] | col_masks[low];
            let size = set.count_ones();
            if size as usize <= self.k() && union[set].count_ones() < size {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Whether the subgraph on all rows and each `k`-subset of columns has a
    /// perfect matching.
    pub fn check_all_k_subsets_matchable(&self) -> Result<bool, SupportError> {
        let (k, n) = (self.k(), self.n());
        match binomial(n as u64, k as u64) {
            Some(c) if c <= MAX_K_SUBSETS => {}
            _ => {
                return Err(SupportError::TooLarge(format!(
                    "C({n}, {k}) exceeds {MAX_K_SUBSETS} column subsets"
                )))
            }
        }
        for cols in (0..n).combinations(k) {
            let mut graph = BipartiteGraph::new(k, k);
            for i in 0..k {
                for (r, &j) in cols.iter().enumerate() {
                    if self.get(i, j) {
                        graph.add_edge(i, r)?;
                    }
                }
            }
            if max_bipartite_matching(&graph).size < k {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
