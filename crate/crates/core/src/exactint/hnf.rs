use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::{IntMatrix, UnimodularMatrix};
use crate::error::{Error, Result};

/// Column-style Hermite normal form `h = m·u`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermiteForm {
    pub h: IntMatrix,
    pub u: UnimodularMatrix,
}

/// Column Hermite normal form of a full-column-rank integer matrix.
///
/// The output is in column echelon form: the first nonzero entry of column
/// `j` sits at a row strictly below that of column `j - 1`, is positive, and
/// every entry to its left in the same row lies in `[0, pivot)`. For a square
/// nonsingular input this is lower triangular with positive diagonal.
pub fn hnf(m: &IntMatrix) -> Result<HermiteForm> {
    let (h, u, rank) = column_echelon(m);
    if rank < m.cols() {
        return Err(Error::RankDeficient { rank, cols: m.cols() });
    }
    Ok(HermiteForm { h, u: UnimodularMatrix::trusted(u) })
}

/// Canonical basis (Hermite form, zero columns dropped) of the column
/// lattice generated by `m`, whatever its rank.
pub fn lattice_basis(m: &IntMatrix) -> IntMatrix {
    let (h, _, rank) = column_echelon(m);
    h.submatrix(0, 0, h.rows(), rank)
}

/// Whether two generator matrices span the same column lattice.
pub fn same_lattice(a: &IntMatrix, b: &IntMatrix) -> bool {
    a.rows() == b.rows() && lattice_basis(a) == lattice_basis(b)
}

fn add_col_multiple(m: &mut IntMatrix, dst: usize, src: usize, c: &BigInt) {
    if c.is_zero() {
        return;
    }
    for i in 0..m.rows() {
        let v = c * &m[(i, src)];
        m[(i, dst)] += v;
    }
}

fn negate_col(m: &mut IntMatrix, j: usize) {
    for i in 0..m.rows() {
        let v = -&m[(i, j)];
        m[(i, j)] = v;
    }
}

/// Returns `(h, u, rank)` with `h = m·u`, nonzero columns first.
fn column_echelon(m: &IntMatrix) -> (IntMatrix, IntMatrix, usize) {
    let k = m.cols();
    let mut h = m.clone();
    let mut u = IntMatrix::identity(k);
    let mut c = 0;
    for r in 0..m.rows() {
        if c == k {
            break;
        }
        let mut found = false;
        loop {
            // smallest |entry|, lowest column on ties
            let pivot = (c..k)
                .filter(|&j| !h[(r, j)].is_zero())
                .min_by(|&a, &b| h[(r, a)].abs().cmp(&h[(r, b)].abs()).then(a.cmp(&b)));
            let Some(p) = pivot else { break };
            found = true;
            h.swap_cols(p, c);
            u.swap_cols(p, c);
            let mut clean = true;
            for j in c + 1..k {
                if h[(r, j)].is_zero() {
                    continue;
                }
                let q = h[(r, j)].div_floor(&h[(r, c)]);
                add_col_multiple(&mut h, j, c, &-&q);
                add_col_multiple(&mut u, j, c, &-&q);
                clean &= h[(r, j)].is_zero();
            }
            if clean {
                break;
            }
        }
        if !found {
            continue;
        }
        if h[(r, c)].is_negative() {
            negate_col(&mut h, c);
            negate_col(&mut u, c);
        }
        for j in 0..c {
            let q = h[(r, j)].div_floor(&h[(r, c)]);
            add_col_multiple(&mut h, j, c, &-&q);
            add_col_multiple(&mut u, j, c, &-&q);
        }
        c += 1;
    }
    debug_assert!((c..k).all(|j| (0..h.rows()).all(|i| h[(i, j)].is_zero())));
    (h, u, c)
}
