use std::fmt;

use super::{FieldElement, FieldError, PrimeField};

/// A dense row-major matrix over a single prime field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    entries: Vec<u64>,
}

impl FieldMatrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        Self {
            field,
            rows,
            cols,
            entries: vec![0; rows * cols],
        }
    }

    pub fn identity(field: PrimeField, order: usize) -> Self {
        let mut m = Self::zeros(field, order, order);
        for i in 0..order {
            m.entries[i * order + i] = 1;
        }
        m
    }

    /// Builds a matrix from rows of residues; values are reduced modulo q.
    pub fn from_rows<R: AsRef<[u64]>>(field: PrimeField, rows: &[R]) -> Result<Self, FieldError> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(FieldError::ShapeMismatch(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            entries.extend(row.iter().map(|&v| v % field.modulus()));
        }
        Ok(Self {
            field,
            rows: rows.len(),
            cols,
            entries,
        })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        self.field.elem(self.entries[i * self.cols + j])
    }

    pub fn set(&mut self, i: usize, j: usize, value: FieldElement) -> Result<(), FieldError> {
        if value.field() != self.field {
            return Err(FieldError::FieldMismatch(self.field.modulus(), value.field().modulus()));
        }
        self.entries[i * self.cols + j] = value.value();
        Ok(())
    }

    pub(crate) fn raw(&self) -> &[u64] {
        &self.entries
    }

    /// Matrix-vector product `A x`.
    pub fn mul_vec(&self, x: &[FieldElement]) -> Result<Vec<FieldElement>, FieldError> {
        if x.len() != self.cols {
            return Err(FieldError::ShapeMismatch(format!(
                "vector of length {} against {} columns",
                x.len(),
                self.cols
            )));
        }
        let xs = self.raw_vector(x)?;
        Ok((0..self.rows)
            .map(|i| {
                let row = &self.entries[i * self.cols..(i + 1) * self.cols];
                let acc = row.iter().zip(&xs).fold(0, |acc, (&a, &b)| {
                    self.field.add_raw(acc, self.field.mul_raw(a, b))
                });
                self.field.elem(acc)
            })
            .collect())
    }

    fn raw_vector(&self, v: &[FieldElement]) -> Result<Vec<u64>, FieldError> {
        v.iter()
            .map(|e| {
                if e.field() == self.field {
                    Ok(e.value())
                } else {
                    Err(FieldError::FieldMismatch(self.field.modulus(), e.field().modulus()))
                }
            })
            .collect()
    }

    /// Determinant by Gaussian elimination, exact over GF(q).
    pub fn determinant(&self) -> Result<FieldElement, FieldError> {
        if self.rows != self.cols {
            return Err(FieldError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut work = self.entries.clone();
        Ok(self.field.elem(det_in_place(self.field, &mut work, self.rows)))
    }

    /// Rank by row reduction.
    pub fn rank(&self) -> usize {
        let mut work = self.entries.clone();
        rank_in_place(self.field, &mut work, self.rows, self.cols)
    }

    /// Solves `A x = b` for square nonsingular `A`.
    pub fn solve(&self, b: &[FieldElement]) -> Result<Vec<FieldElement>, FieldError> {
        if self.rows != self.cols {
            return Err(FieldError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        if b.len() != self.rows {
            return Err(FieldError::ShapeMismatch(format!(
                "right-hand side of length {} for order {}",
                b.len(),
                self.rows
            )));
        }
        let mut rhs = self.raw_vector(b)?;
        let mut work = self.entries.clone();
        solve_in_place(self.field, &mut work, &mut rhs, self.rows)?;
        Ok(rhs.into_iter().map(|v| self.field.elem(v)).collect())
    }
}

impl fmt::Display for FieldMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row = &self.entries[i * self.cols..(i + 1) * self.cols];
            let line: Vec<String> = row.iter().map(u64::to_string).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

/// Determinant of the `order x order` row-major matrix in `a`, which is
/// destroyed in the process.
pub(crate) fn det_in_place(field: PrimeField, a: &mut [u64], order: usize) -> u64 {
    let mut det = 1u64;
    for col in 0..order {
        let Some(pivot) = (col..order).find(|&r| a[r * order + col] != 0) else {
            return 0;
        };
        if pivot != col {
            for j in col..order {
                a.swap(pivot * order + j, col * order + j);
            }
            det = field.neg_raw(det);
        }
        let p = a[col * order + col];
        det = field.mul_raw(det, p);
        let p_inv = field.inv_raw(p);
        for r in col + 1..order {
            let factor = field.mul_raw(a[r * order + col], p_inv);
            if factor == 0 {
                continue;
            }
            for j in col..order {
                let t = field.mul_raw(factor, a[col * order + j]);
                a[r * order + j] = field.sub_raw(a[r * order + j], t);
            }
        }
    }
    det
}

/// Rank of the `rows x cols` row-major matrix in `a`, which is destroyed.
pub(crate) fn rank_in_place(field: PrimeField, a: &mut [u64], rows: usize, cols: usize) -> usize {
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot) = (rank..rows).find(|&r| a[r * cols + col] != 0) else {
            continue;
        };
        if pivot != rank {
            for j in 0..cols {
                a.swap(pivot * cols + j, rank * cols + j);
            }
        }
        let p_inv = field.inv_raw(a[rank * cols + col]);
        for r in rank + 1..rows {
            let factor = field.mul_raw(a[r * cols + col], p_inv);
            if factor == 0 {
                continue;
            }
            for j in col..cols {
                let t = field.mul_raw(factor, a[rank * cols + j]);
                a[r * cols + j] = field.sub_raw(a[r * cols + j], t);
            }
        }
        rank += 1;
    }
    rank
}

/// Gauss-Jordan solve of `a x = b`; the solution overwrites `b`.
pub(crate) fn solve_in_place(
    field: PrimeField,
    a: &mut [u64],
    b: &mut [u64],
    order: usize,
) -> Result<(), FieldError> {
    for col in 0..order {
        let pivot = (col..order)
            .find(|&r| a[r * order + col] != 0)
            .ok_or(FieldError::Singular)?;
        if pivot != col {
            for j in 0..order {
                a.swap(pivot * order + j, col * order + j);
            }
            b.swap(pivot, col);
        }
        let p_inv = field.inv_raw(a[col * order + col]);
        for j in col..order {
            a[col * order + j] = field.mul_raw(a[col * order + j], p_inv);
        }
        b[col] = field.mul_raw(b[col], p_inv);
        for r in 0..order {
            if r == col {
                continue;
            }
            let factor = a[r * order + col];
            if factor == 0 {
                continue;
            }
            for j in col..order {
                let t = field.mul_raw(factor, a[col * order + j]);
                a[r * order + j] = field.sub_raw(a[r * order + j], t);
            }
            let t = field.mul_raw(factor, b[col]);
            b[r] = field.sub_raw(b[r], t);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gf(q: u64) -> PrimeField {
        PrimeField::new(q).unwrap()
    }

    fn vec_of(f: PrimeField, v: &[u64]) -> Vec<FieldElement> {
        v.iter().map(|&x| f.elem(x)).collect()
    }

    /// Laplace expansion along the first row; independent of elimination.
    fn cofactor_det(f: PrimeField, m: &[Vec<u64>]) -> u64 {
        let n = m.len();
        if n == 0 {
            return 1;
        }
        let mut acc = f.zero();
        for j in 0..n {
            let minor: Vec<Vec<u64>> = m[1..]
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|&(c, _)| c != j)
                        .map(|(_, &v)| v)
                        .collect()
                })
                .collect();
            let term = f.elem(m[0][j]) * f.elem(cofactor_det(f, &minor));
            acc = if j % 2 == 0 { acc + term } else { acc - term };
        }
        acc.value()
    }

    #[test]
    fn determinant_examples() {
        let f = gf(5);
        let a = FieldMatrix::from_rows(f, &[[1, 2], [3, 4]]).unwrap();
        assert_eq!(a.determinant().unwrap().value(), 3);
        for k in 0..6 {
            assert_eq!(FieldMatrix::identity(f, k).determinant().unwrap().value(), 1);
        }
        let b = FieldMatrix::from_rows(f, &[[1, 1], [1, 1]]).unwrap();
        assert_eq!(b.determinant().unwrap().value(), 0);
    }

    #[test]
    fn determinant_rejects_rectangular() {
        let a = FieldMatrix::zeros(gf(5), 2, 3);
        assert_eq!(a.determinant(), Err(FieldError::NotSquare { rows: 2, cols: 3 }));
    }

    #[test]
    fn ragged_rows_rejected() {
        let rows = vec![vec![1, 2], vec![3]];
        assert!(matches!(
            FieldMatrix::from_rows(gf(5), &rows),
            Err(FieldError::ShapeMismatch(_))
        ));
    }

    #[test]
    fn solve_examples() {
        let f5 = gf(5);
        let id = FieldMatrix::from_rows(f5, &[[1, 0], [0, 1]]).unwrap();
        assert_eq!(id.solve(&vec_of(f5, &[2, 3])).unwrap(), vec_of(f5, &[2, 3]));
        let upper = FieldMatrix::from_rows(f5, &[[1, 1], [0, 1]]).unwrap();
        assert_eq!(upper.solve(&vec_of(f5, &[3, 2])).unwrap(), vec_of(f5, &[1, 2]));
        let f7 = gf(7);
        let diag = FieldMatrix::from_rows(f7, &[[2, 0], [0, 3]]).unwrap();
        assert_eq!(diag.solve(&vec_of(f7, &[1, 1])).unwrap(), vec_of(f7, &[4, 5]));
    }

    #[test]
    fn solve_distinguishes_singular_from_shape() {
        let f = gf(5);
        let sing = FieldMatrix::from_rows(f, &[[1, 1], [1, 1]]).unwrap();
        assert_eq!(sing.solve(&vec_of(f, &[1, 2])), Err(FieldError::Singular));
        assert!(matches!(
            sing.solve(&vec_of(f, &[1, 2, 3])),
            Err(FieldError::ShapeMismatch(_))
        ));
        let rect = FieldMatrix::zeros(f, 2, 3);
        assert!(matches!(rect.solve(&vec_of(f, &[1, 2])), Err(FieldError::NotSquare { .. })));
        assert!(matches!(
            sing.solve(&vec_of(gf(7), &[1, 2])),
            Err(FieldError::FieldMismatch(5, 7))
        ));
    }

    #[test]
    fn rank_examples() {
        let f = gf(5);
        assert_eq!(FieldMatrix::from_rows(f, &[[1, 2, 3], [2, 4, 2]]).unwrap().rank(), 2);
        assert_eq!(FieldMatrix::from_rows(f, &[[1, 2, 3], [2, 4, 1]]).unwrap().rank(), 1);
        assert_eq!(FieldMatrix::zeros(f, 3, 2).rank(), 0);
        assert_eq!(FieldMatrix::identity(f, 4).rank(), 4);
    }

    fn square_matrix() -> impl Strategy<Value = (u64, Vec<Vec<u64>>, Vec<u64>)> {
        (prop::sample::select(vec![2u64, 3, 5, 7, 13, 101]), 1usize..=6).prop_flat_map(|(q, n)| {
            (
                Just(q),
                prop::collection::vec(prop::collection::vec(0..q, n), n),
                prop::collection::vec(0..q, n),
            )
        })
    }

    proptest! {
        #[test]
        fn solve_round_trips_and_agrees_with_determinant((q, rows, b) in square_matrix()) {
            let f = gf(q);
            let a = FieldMatrix::from_rows(f, &rows).unwrap();
            let b = vec_of(f, &b);
            let det = a.determinant().unwrap();
            prop_assert_eq!(a.rank() == rows.len(), !det.is_zero());
            match a.solve(&b) {
                Ok(x) => {
                    prop_assert!(!det.is_zero());
                    prop_assert_eq!(a.mul_vec(&x).unwrap(), b);
                }
                Err(FieldError::Singular) => prop_assert!(det.is_zero()),
                Err(e) => prop_assert!(false, "unexpected error {e}"),
            }
        }

        #[test]
        fn determinant_matches_cofactor_expansion((q, rows, _b) in square_matrix()) {
            prop_assume!(rows.len() <= 4);
            let f = gf(q);
            let a = FieldMatrix::from_rows(f, &rows).unwrap();
            prop_assert_eq!(a.determinant().unwrap().value(), cofactor_det(f, &rows));
        }
    }
}
