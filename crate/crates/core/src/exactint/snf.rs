use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::{IntMatrix, UnimodularMatrix};

/// Smith normal form `s = u·m·v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub s: IntMatrix,
    pub u: UnimodularMatrix,
    pub v: UnimodularMatrix,
}

impl SmithForm {
    /// Diagonal entries `d₁ | d₂ | …`, including trailing zeros.
    pub fn divisors(&self) -> Vec<BigInt> {
        (0..self.s.rows().min(self.s.cols())).map(|i| self.s[(i, i)].clone()).collect()
    }
}

fn row_add(m: &mut IntMatrix, dst: usize, src: usize, c: &BigInt) {
    if c.is_zero() {
        return;
    }
    for j in 0..m.cols() {
        let v = c * &m[(src, j)];
        m[(dst, j)] += v;
    }
}

fn col_add(m: &mut IntMatrix, dst: usize, src: usize, c: &BigInt) {
    if c.is_zero() {
        return;
    }
    for i in 0..m.rows() {
        let v = c * &m[(i, src)];
        m[(i, dst)] += v;
    }
}

pub fn snf(m: &IntMatrix) -> SmithForm {
    let (rows, cols) = (m.rows(), m.cols());
    let mut s = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        loop {
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if s[(i, j)].is_zero() {
                        continue;
                    }
                    // row-major scan keeps the lexicographically first on ties
                    if pivot.map_or(true, |(pi, pj)| s[(i, j)].abs() < s[(pi, pj)].abs()) {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else {
                return finish(s, u, v);
            };
            s.swap_rows(pi, t);
            u.swap_rows(pi, t);
            s.swap_cols(pj, t);
            v.swap_cols(pj, t);

            let mut clean = true;
            for i in t + 1..rows {
                let q = s[(i, t)].div_floor(&s[(t, t)]);
                row_add(&mut s, i, t, &-&q);
                row_add(&mut u, i, t, &-&q);
                clean &= s[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                let q = s[(t, j)].div_floor(&s[(t, t)]);
                col_add(&mut s, j, t, &-&q);
                col_add(&mut v, j, t, &-&q);
                clean &= s[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }
            let offender = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !s[(i, j)].is_multiple_of(&s[(t, t)])));
            match offender {
                Some(i) => {
                    let one = BigInt::from(1);
                    row_add(&mut s, t, i, &one);
                    row_add(&mut u, t, i, &one);
                }
                None => break,
            }
        }
        if s[(t, t)].is_negative() {
            for j in 0..cols {
                let x = -&s[(t, j)];
                s[(t, j)] = x;
            }
            for j in 0..rows {
                let x = -&u[(t, j)];
                u[(t, j)] = x;
            }
        }
    }
    finish(s, u, v)
}

fn finish(s: IntMatrix, u: IntMatrix, v: IntMatrix) -> SmithForm {
    SmithForm { s, u: UnimodularMatrix::trusted(u), v: UnimodularMatrix::trusted(v) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_i64_rows(rows)
    }

    fn check(a: &IntMatrix) -> SmithForm {
        let f = snf(a);
        assert_eq!(&(f.u.matrix() * a) * f.v.matrix(), f.s);
        for i in 0..f.s.rows() {
            for j in 0..f.s.cols() {
                if i != j {
                    assert!(f.s[(i, j)].is_zero());
                }
            }
        }
        let d = f.divisors();
        for w in d.windows(2) {
            assert!(!w[0].is_negative());
            if !w[0].is_zero() {
                assert!(w[1].is_multiple_of(&w[0]));
            } else {
                assert!(w[1].is_zero());
            }
        }
        f
    }

    #[test]
    fn diag_2_3() {
        let f = check(&m(&[&[2, 0], &[0, 3]]));
        assert_eq!(f.divisors(), vec![BigInt::one(), BigInt::from(6)]);
    }

    #[test]
    fn zero_and_identity() {
        assert!(check(&IntMatrix::zeros(2, 3)).s.is_zero());
        assert!(check(&IntMatrix::identity(3)).s.is_identity());
    }

    #[test]
    fn rectangular_and_negative() {
        check(&m(&[&[4, -6, 2], &[2, 8, -10]]));
        check(&m(&[&[-3], &[6], &[9]]));
        let f = check(&m(&[&[0, -4], &[6, 0]]));
        assert_eq!(f.divisors(), vec![BigInt::from(2), BigInt::from(12)]);
    }
}
