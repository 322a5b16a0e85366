//! Exact integer and rational linear algebra.
//!
//! Everything here is arbitrary precision. Lattices are column spans, so
//! [`hnf`] produces column-style Hermite forms `H = M·U`.

mod hnf;
mod matrix;
mod pfaffian;
mod snf;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub use hnf::{hnf, lattice_basis, same_lattice, HermiteForm};
pub use matrix::{IntMatrix, Matrix, RationalMatrix};
pub use pfaffian::pfaffian;
pub use snf::{snf, SmithForm};

/// Exact rational in lowest terms with positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or `"p"`; rejects zero denominators.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(BigInt::from_str(s).map_err(|_| bad())?)),
    }
}

/// `"p/q"`, or `"p"` when the denominator is one.
pub fn format_rational(x: &Rational) -> String {
    x.to_string()
}

/// Integer square matrix with determinant ±1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UnimodularMatrix(IntMatrix);

impl UnimodularMatrix {
    pub fn new(m: IntMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::Dimension("unimodular matrix must be square".into()));
        }
        let det = m.det()?;
        if det.abs() != BigInt::one() {
            return Err(Error::NotUnimodular(det.to_string()));
        }
        Ok(Self(m))
    }

    /// Wraps a matrix already known to be unimodular (products of elementary
    /// operations). Checked in debug builds.
    pub(crate) fn trusted(m: IntMatrix) -> Self {
        debug_assert!(m.det().map(|d| d.abs().is_one()).unwrap_or(false));
        Self(m)
    }

    pub fn identity(n: usize) -> Self {
        Self(IntMatrix::identity(n))
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> IntMatrix {
        self.0
    }

    pub fn det(&self) -> BigInt {
        self.0.det().expect("square")
    }

    pub fn inverse(&self) -> Self {
        let inv = self.0.to_rational().inverse().expect("unimodular matrices are invertible");
        Self(inv.to_integer().expect("inverse of a unimodular matrix is integral"))
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self(&self.0 * &other.0)
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    /// `Uᵀ·A·U` over the rationals.
    pub fn congruence(&self, a: &RationalMatrix) -> RationalMatrix {
        let u = self.0.to_rational();
        &(&u.transpose() * a) * &u
    }
}

impl fmt::Display for UnimodularMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Clears all denominators of `a` and `b` with one common positive scalar.
pub fn lcd_scale(a: &RationalMatrix, b: &RationalMatrix) -> (IntMatrix, IntMatrix, BigInt) {
    let c = a
        .entries()
        .iter()
        .chain(b.entries())
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let scale = |m: &RationalMatrix| m.map(|x| (x * &c).to_integer());
    (scale(a), scale(b), c)
}

/// Common denominator of a single matrix.
pub fn lcd(a: &RationalMatrix) -> BigInt {
    a.entries().iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}
