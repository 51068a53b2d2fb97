//! Exact arithmetic over prime fields GF(q) and dense linear algebra over them.
//!
//! Elements carry their field so that mixing fields is caught at the call
//! site. The hot loops in [`matrix`] work on raw `u64` residues through the
//! [`PrimeField`] helpers instead.

mod matrix;
mod prime;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use matrix::FieldMatrix;
pub use prime::{binomial, field_size_bound, is_prime, smallest_prime_above};

pub(crate) use matrix::{
    det_in_place as matrix_det_in_place, rank_in_place as matrix_rank_in_place,
    solve_in_place as matrix_solve_in_place,
};
pub(crate) use prime::{mul_mod, pow_mod};

/// Errors raised by field arithmetic and linear algebra.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("operands belong to different fields (GF({0}) vs GF({1}))")]
    FieldMismatch(u64, u64),
    #[error("zero has no multiplicative inverse")]
    InverseOfZero,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("matrix is singular")]
    Singular,
    #[error("value {value} is out of range for GF({q})")]
    OutOfRange { value: u64, q: u64 },
}

/// The prime field GF(q).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct PrimeField {
    q: u64,
}

impl PrimeField {
    /// Builds GF(q) after checking that `q` is prime.
    pub fn new(q: u64) -> Result<Self, FieldError> {
        if is_prime(q) {
            Ok(Self { q })
        } else {
            Err(FieldError::NotPrime(q))
        }
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    /// Reduces `value` modulo q.
    pub fn elem(&self, value: u64) -> FieldElement {
        FieldElement {
            value: value % self.q,
            field: *self,
        }
    }

    /// Like [`elem`](Self::elem) but rejects non-canonical values.
    pub fn checked_elem(&self, value: u64) -> Result<FieldElement, FieldError> {
        if value < self.q {
            Ok(FieldElement { value, field: *self })
        } else {
            Err(FieldError::OutOfRange { value, q: self.q })
        }
    }

    pub fn zero(&self) -> FieldElement {
        self.elem(0)
    }

    pub fn one(&self) -> FieldElement {
        self.elem(1)
    }

    #[inline]
    pub(crate) fn add_raw(&self, a: u64, b: u64) -> u64 {
        let (s, overflow) = a.overflowing_add(b);
        if overflow || s >= self.q {
            s.wrapping_sub(self.q)
        } else {
            s
        }
    }

    #[inline]
    pub(crate) fn sub_raw(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            self.q - (b - a)
        }
    }

    #[inline]
    pub(crate) fn neg_raw(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.q - a
        }
    }

    #[inline]
    pub(crate) fn mul_raw(&self, a: u64, b: u64) -> u64 {
        mul_mod(a, b, self.q)
    }

    /// Inverse by Fermat's little theorem; `a` must be nonzero.
    #[inline]
    pub(crate) fn inv_raw(&self, a: u64) -> u64 {
        debug_assert!(a != 0);
        pow_mod(a, self.q - 2, self.q)
    }
}

impl TryFrom<u64> for PrimeField {
    type Error = FieldError;

    fn try_from(q: u64) -> Result<Self, Self::Error> {
        Self::new(q)
    }
}

impl From<PrimeField> for u64 {
    fn from(f: PrimeField) -> u64 {
        f.q
    }
}

impl fmt::Display for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.q)
    }
}

/// A residue modulo the prime of its field, always in `[0, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u64,
    field: PrimeField,
}

impl FieldElement {
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn same_field(&self, other: &Self) -> Result<PrimeField, FieldError> {
        if self.field == other.field {
            Ok(self.field)
        } else {
            Err(FieldError::FieldMismatch(self.field.q, other.field.q))
        }
    }

    pub fn try_add(self, rhs: Self) -> Result<Self, FieldError> {
        let f = self.same_field(&rhs)?;
        Ok(FieldElement { value: f.add_raw(self.value, rhs.value), field: f })
    }

    pub fn try_sub(self, rhs: Self) -> Result<Self, FieldError> {
        let f = self.same_field(&rhs)?;
        Ok(FieldElement { value: f.sub_raw(self.value, rhs.value), field: f })
    }

    pub fn try_mul(self, rhs: Self) -> Result<Self, FieldError> {
        let f = self.same_field(&rhs)?;
        Ok(FieldElement { value: f.mul_raw(self.value, rhs.value), field: f })
    }

    pub fn inv(self) -> Result<Self, FieldError> {
        if self.value == 0 {
            return Err(FieldError::InverseOfZero);
        }
        Ok(FieldElement {
            value: self.field.inv_raw(self.value),
            field: self.field,
        })
    }

    pub fn pow(self, exp: u64) -> Self {
        FieldElement {
            value: pow_mod(self.value, exp, self.field.q),
            field: self.field,
        }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

// The operator forms panic on a field mismatch; use the `try_*` methods when
// operands come from untrusted sources.
impl Add for FieldElement {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        self.try_add(rhs).expect("field mismatch in addition")
    }
}

impl Sub for FieldElement {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        self.try_sub(rhs).expect("field mismatch in subtraction")
    }
}

impl Mul for FieldElement {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        self.try_mul(rhs).expect("field mismatch in multiplication")
    }
}

impl Neg for FieldElement {
    type Output = Self;

    fn neg(self) -> Self {
        FieldElement {
            value: self.field.neg_raw(self.value),
            field: self.field,
        }
    }
}
