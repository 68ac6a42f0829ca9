//! Exact rational matrix algebra: characteristic polynomials, unit-eigenvalue
//! multiplicity, and Cesaro limiting matrices of stochastic matrices.
//!
//! The Cesaro limit `Q* = lim (1/n) sum Q^m` is computed symbolically: take
//! the characteristic polynomial of `Q`, strip the `(z-1)` factors, evaluate
//! the quotient polynomial at `Q`, and normalize by the common row sum. No
//! floating point is involved, so periodic and multichain structures come out
//! exact.

use crate::rational::Rational;
use num::traits::{One, Signed, Zero};
use std::fmt;
use thiserror::Error;

/// Hard cap on matrix dimension; the exact arithmetic here is O(n^4).
pub const MAX_DIM: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RatmatError {
    #[error("matrix dimension {0} exceeds the supported maximum {MAX_DIM}")]
    DimensionCap(usize),
    #[error("all rows of the quotient matrix sum to zero; input was not row-stochastic")]
    DegenerateRowSum,
    #[error("rows of the quotient matrix have unequal sums; input was not row-stochastic")]
    UnequalRowSums,
}

/// Dense square matrix of exact rationals, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    n: usize,
    entries: Vec<Rational>,
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RationalMatrix({}x{})", self.n, self.n)?;
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n)
                .map(|j| crate::rational::format_rational(self.get(i, j)))
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl RationalMatrix {
    pub fn zero(n: usize) -> Self {
        RationalMatrix {
            n,
            entries: vec![Rational::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    /// Builds from rows; panics if the rows are not square.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "rows must form a square matrix");
        RationalMatrix {
            n,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.entries[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn mul(&self, rhs: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.n, rhs.n);
        let n = self.n;
        let mut out = RationalMatrix::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.get(i, j).clone();
                    out.set(i, j, cur + a * b);
                }
            }
        }
        out
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.n, v.len());
        (0..self.n)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .fold(Rational::zero(), |acc, x| acc + x)
            })
            .collect()
    }

    pub fn trace(&self) -> Rational {
        (0..self.n).fold(Rational::zero(), |acc, i| acc + self.get(i, i))
    }

    pub fn scale(&self, c: &Rational) -> RationalMatrix {
        RationalMatrix {
            n: self.n,
            entries: self.entries.iter().map(|e| e * c).collect(),
        }
    }

    pub fn add(&self, rhs: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.n, rhs.n);
        RationalMatrix {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn row_sum(&self, i: usize) -> Rational {
        self.row(i).iter().fold(Rational::zero(), |acc, x| acc + x)
    }

    pub fn is_row_stochastic(&self) -> bool {
        (0..self.n).all(|i| {
            self.row(i).iter().all(|p| !p.is_negative()) && self.row_sum(i).is_one()
        })
    }
}

/// Polynomial with exact rational coefficients, ascending degree order.
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| format!("{}*z^{}", crate::rational::format_rational(c), i))
            .collect();
        write!(f, "Polynomial[{}]", terms.join(" + "))
    }
}

impl Polynomial {
    /// Constructs from ascending coefficients, trimming trailing zeros.
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.len() > 1 && coeffs.last().map(Zero::is_zero).unwrap_or(false) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Rational::zero());
        }
        Polynomial { coeffs }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_zero()
    }

    pub fn eval(&self, z: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// Synthetic division by `(z - 1)`. Returns `(quotient, remainder)`;
    /// the remainder equals `self.eval(1)`.
    pub fn div_z_minus_one(&self) -> (Polynomial, Rational) {
        if self.coeffs.len() == 1 {
            return (Polynomial::new(vec![Rational::zero()]), self.coeffs[0].clone());
        }
        let mut quotient = vec![Rational::zero(); self.coeffs.len() - 1];
        let mut carry = Rational::zero();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            let v = c + &carry;
            if i == 0 {
                return (Polynomial::new(quotient), v);
            }
            quotient[i - 1] = v.clone();
            carry = v;
        }
        unreachable!()
    }

    /// Horner evaluation with a matrix argument.
    pub fn eval_matrix(&self, q: &RationalMatrix) -> RationalMatrix {
        let n = q.dim();
        let mut acc = RationalMatrix::zero(n);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(q);
            for i in 0..n {
                let cur = acc.get(i, i).clone();
                acc.set(i, i, cur + c);
            }
        }
        acc
    }
}

/// Characteristic polynomial `C_Q(z) = det(Q - zI)`, exact, via the
/// Faddeev-LeVerrier recurrence.
pub fn char_poly(q: &RationalMatrix) -> Polynomial {
    let n = q.dim();
    // Recurrence yields det(zI - Q) = z^n + c_{n-1} z^{n-1} + ... + c_0.
    let mut descending = vec![Rational::one()];
    let mut m = RationalMatrix::identity(n);
    for k in 1..=n {
        let am = q.mul(&m);
        let c = -am.trace() / Rational::from_integer(k.into());
        m = am;
        for i in 0..n {
            let cur = m.get(i, i).clone();
            m.set(i, i, cur + &c);
        }
        descending.push(c);
    }
    // det(Q - zI) = (-1)^n det(zI - Q)
    let sign = if n % 2 == 0 {
        Rational::one()
    } else {
        -Rational::one()
    };
    let ascending: Vec<Rational> = descending.into_iter().rev().map(|c| c * &sign).collect();
    Polynomial::new(ascending)
}

/// Largest `m` such that `(z - 1)^m` divides `p`, by repeated exact division.
pub fn unit_multiplicity(p: &Polynomial) -> usize {
    assert!(!p.is_zero(), "unit multiplicity of the zero polynomial is undefined");
    let mut m = 0;
    let mut cur = p.clone();
    loop {
        let (quot, rem) = cur.div_z_minus_one();
        if !rem.is_zero() {
            return m;
        }
        m += 1;
        cur = quot;
    }
}

/// Cesaro limiting matrix of a row-stochastic matrix, exact.
///
/// Steps: characteristic polynomial, divide out `(z-1)^m` where `m` is the
/// algebraic multiplicity of the unit eigenvalue, evaluate the quotient at
/// `Q`, and divide by the common row sum. For a stochastic `Q` every row of
/// the quotient matrix sums to the same nonzero value; anything else means
/// the input was not stochastic.
pub fn cesaro_limit(q: &RationalMatrix) -> Result<RationalMatrix, RatmatError> {
    let n = q.dim();
    if n > MAX_DIM {
        return Err(RatmatError::DimensionCap(n));
    }
    let cp = char_poly(q);
    let mult = unit_multiplicity(&cp);
    let mut quotient = cp;
    for _ in 0..mult {
        quotient = quotient.div_z_minus_one().0;
    }
    let w = quotient.eval_matrix(q);
    let sum = w.row_sum(0);
    if (1..n).any(|i| w.row_sum(i) != sum) {
        return Err(RatmatError::UnequalRowSums);
    }
    if sum.is_zero() {
        return Err(RatmatError::DegenerateRowSum);
    }
    let inv = Rational::one() / sum;
    Ok(w.scale(&inv))
}
