use num_traits::{One, Zero};

use super::{Rational, RationalMatrix};
use crate::error::{Error, Result};

/// Pfaffian of an antisymmetric matrix, by skew Schur-complement elimination.
///
/// Each step pivots a nonzero entry of the first row into position (0, 1),
/// multiplies the running product by it and continues on the Schur
/// complement `D + Cᵀ·B⁻¹·C` of the leading 2×2 block.
pub fn pfaffian(a: &RationalMatrix) -> Result<Rational> {
    if !a.is_square() {
        return Err(Error::Dimension("Pfaffian of a non-square matrix".into()));
    }
    if a.rows() % 2 == 1 {
        return Err(Error::OddDimension(a.rows()));
    }
    if !a.is_antisymmetric() {
        return Err(Error::NotAntisymmetric);
    }
    let mut m = a.clone();
    let mut acc = Rational::one();
    while m.rows() > 0 {
        let n = m.rows();
        let Some(j) = (1..n).find(|&j| !m[(0, j)].is_zero()) else {
            return Ok(Rational::zero());
        };
        if j != 1 {
            // simultaneous swap of indices 1 and j flips the sign
            m.swap_rows(1, j);
            m.swap_cols(1, j);
            acc = -acc;
        }
        let p = m[(0, 1)].clone();
        acc *= &p;
        let rest = n - 2;
        let next = RationalMatrix::from_fn(rest, rest, |i, k| {
            let (i2, k2) = (i + 2, k + 2);
            let cross = &m[(1, i2)] * &m[(0, k2)] - &m[(0, i2)] * &m[(1, k2)];
            &m[(i2, k2)] + cross / &p
        });
        m = next;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactint::int;

    fn skew(rows: &[&[i64]]) -> RationalMatrix {
        RationalMatrix::from_i64_rows(rows)
    }

    /// Expansion along the first row.
    fn pf_expand(a: &RationalMatrix) -> Rational {
        let n = a.rows();
        if n == 0 {
            return Rational::one();
        }
        let mut total = Rational::zero();
        for j in 1..n {
            if a[(0, j)].is_zero() {
                continue;
            }
            let keep: Vec<usize> = (1..n).filter(|&k| k != j).collect();
            let minor = RationalMatrix::from_fn(n - 2, n - 2, |r, c| a[(keep[r], keep[c])].clone());
            let term = &a[(0, j)] * pf_expand(&minor);
            if j % 2 == 1 {
                total += term;
            } else {
                total -= term;
            }
        }
        total
    }

    #[test]
    fn two_by_two() {
        assert_eq!(pfaffian(&skew(&[&[0, 5], &[-5, 0]])).unwrap(), int(5));
        assert_eq!(pfaffian(&skew(&[&[0, -3], &[3, 0]])).unwrap(), int(-3));
    }

    #[test]
    fn block_diagonal_2_6() {
        let a = skew(&[&[0, 2, 0, 0], &[-2, 0, 0, 0], &[0, 0, 0, 6], &[0, 0, -6, 0]]);
        assert_eq!(pf_expand(&a), int(12));
        assert_eq!(pfaffian(&a).unwrap(), int(12));
    }

    #[test]
    fn needs_pivoting() {
        let a = skew(&[&[0, 0, 1, 2], &[0, 0, 3, 4], &[-1, -3, 0, 5], &[-2, -4, -5, 0]]);
        assert_eq!(pfaffian(&a).unwrap(), pf_expand(&a));
        let det = a.det().unwrap();
        let pf = pfaffian(&a).unwrap();
        assert_eq!(&pf * &pf, det);
    }

    #[test]
    fn errors() {
        assert!(matches!(pfaffian(&skew(&[&[0, 1, 0], &[-1, 0, 0], &[0, 0, 0]])), Err(Error::OddDimension(3))));
        assert!(matches!(pfaffian(&skew(&[&[0, 1], &[1, 0]])), Err(Error::NotAntisymmetric)));
        assert!(matches!(pfaffian(&skew(&[&[1, 1], &[-1, 0]])), Err(Error::NotAntisymmetric)));
    }

    #[test]
    fn degenerate_is_zero() {
        assert!(pfaffian(&RationalMatrix::zeros(4, 4)).unwrap().is_zero());
    }
}
