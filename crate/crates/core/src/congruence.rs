//! GL(2n, ℤ)-congruence of nondegenerate antisymmetric forms.
//!
//! An integer antisymmetric form is congruent to exactly one block sum
//! `⊕ dᵢ·J₂` with `d₁ | d₂ | … | dₙ`, `J₂ = [[0, 1], [-1, 0]]`. Rational forms
//! are compared after clearing denominators with one common scalar.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactint::{lcd_scale, pfaffian, IntMatrix, Rational, RationalMatrix, UnimodularMatrix};

/// Nondegenerate antisymmetric matrix of even dimension.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AntisymmetricForm {
    matrix: RationalMatrix,
}

impl AntisymmetricForm {
    pub fn new(matrix: RationalMatrix) -> Result<Self> {
        if pfaffian(&matrix)?.is_zero() {
            return Err(Error::Degenerate);
        }
        Ok(Self { matrix })
    }

    pub fn from_int(matrix: &IntMatrix) -> Result<Self> {
        Self::new(matrix.to_rational())
    }

    /// `⊕ᵢ dᵢ·J₂`.
    pub fn block_sum(divisors: &[BigInt]) -> Result<Self> {
        let blocks: Vec<RationalMatrix> = divisors
            .iter()
            .map(|d| {
                let d = Rational::from_integer(d.clone());
                RationalMatrix::from_rows(vec![vec![Rational::zero(), d.clone()], vec![-d, Rational::zero()]])
                    .expect("2x2")
            })
            .collect();
        Self::new(RationalMatrix::block_diag(&blocks))
    }

    /// `⊕ J₂`, the unimodular normal form.
    pub fn standard(n: usize) -> Self {
        Self::block_sum(&vec![BigInt::one(); n]).expect("standard form is nondegenerate")
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &RationalMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> RationalMatrix {
        self.matrix
    }

    pub fn pfaffian(&self) -> Rational {
        pfaffian(&self.matrix).expect("validated on construction")
    }

    pub fn is_integral(&self) -> bool {
        self.matrix.is_integral()
    }

    /// `Uᵀ·A·U`.
    pub fn transform(&self, u: &UnimodularMatrix) -> Result<Self> {
        if u.dim() != self.dim() {
            return Err(Error::Dimension(format!(
                "{}x{} witness for a form of dimension {}",
                u.dim(),
                u.dim(),
                self.dim()
            )));
        }
        Ok(Self { matrix: u.congruence(&self.matrix) })
    }

    pub fn scale(&self, c: &Rational) -> Result<Self> {
        Self::new(self.matrix.scale(c))
    }
}

/// Symplectic elementary divisors `d₁ | d₂ | … | dₙ`, all positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DivisorChain(Vec<BigInt>);

impl DivisorChain {
    pub fn new(divisors: Vec<BigInt>) -> Result<Self> {
        if divisors.iter().any(|d| !d.is_positive()) {
            return Err(Error::Precondition("divisors must be positive".into()));
        }
        if divisors.windows(2).any(|w| !w[1].is_multiple_of(&w[0])) {
            return Err(Error::Precondition("divisors must form a divisibility chain".into()));
        }
        Ok(Self(divisors))
    }

    pub fn divisors(&self) -> &[BigInt] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `∏ dᵢ`, which equals `|Pf|` of the form.
    pub fn product(&self) -> BigInt {
        self.0.iter().product()
    }
}

impl fmt::Display for DivisorChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub equivalent: bool,
    /// `U` with `Uᵀ·A·U = B` when equivalent.
    pub witness: Option<UnimodularMatrix>,
}

impl Verdict {
    pub fn inequivalent() -> Self {
        Self { equivalent: false, witness: None }
    }
}

/// Congruence operations on `a`, mirrored as column operations on `u`, so that
/// `uᵀ·a₀·u = a` holds throughout.
struct Reducer {
    a: IntMatrix,
    u: IntMatrix,
}

impl Reducer {
    fn swap(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap_rows(i, j);
        self.a.swap_cols(i, j);
        self.u.swap_cols(i, j);
    }

    /// Basis vector `dst` += `c` · basis vector `src`.
    fn add(&mut self, dst: usize, src: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        let n = self.a.rows();
        for i in 0..n {
            let v = c * &self.a[(i, src)];
            self.a[(i, dst)] += v;
        }
        for j in 0..n {
            let v = c * &self.a[(src, j)];
            self.a[(dst, j)] += v;
        }
        for i in 0..n {
            let v = c * &self.u[(i, src)];
            self.u[(i, dst)] += v;
        }
    }

    /// Smallest nonzero |a_ij|, i < j, in the trailing block from `k`.
    fn pivot(&self, k: usize) -> Option<(usize, usize)> {
        let n = self.a.rows();
        let mut best: Option<(usize, usize)> = None;
        for i in k..n {
            for j in i + 1..n {
                let x = &self.a[(i, j)];
                if x.is_zero() {
                    continue;
                }
                if best.map_or(true, |(bi, bj)| x.abs() < self.a[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        best
    }

    fn reduce_block(&mut self, k: usize) -> Result<BigInt> {
        let n = self.a.rows();
        loop {
            let (i, j) = self.pivot(k).ok_or(Error::Degenerate)?;
            // k <= i < j, so moving i to k leaves j in place
            self.swap(k, i);
            self.swap(k + 1, j);
            if self.a[(k, k + 1)].is_negative() {
                self.swap(k, k + 1);
            }
            let d = self.a[(k, k + 1)].clone();

            let mut clean = true;
            for j in k + 2..n {
                let q = self.a[(k, j)].div_floor(&d);
                self.add(j, k + 1, &-&q);
                let q = self.a[(k + 1, j)].div_floor(&d);
                self.add(j, k, &q);
                clean &= self.a[(k, j)].is_zero() && self.a[(k + 1, j)].is_zero();
            }
            if !clean {
                continue;
            }
            let offender = (k + 2..n).find(|&i| (k + 2..n).any(|j| !self.a[(i, j)].is_multiple_of(&d)));
            match offender {
                Some(i) => self.add(k, i, &BigInt::one()),
                None => return Ok(d),
            }
        }
    }
}

/// Symplectic normal form of an integer form: returns the divisor chain and
/// `U` with `Uᵀ·A·U = ⊕ dᵢ·J₂`.
pub fn symplectic_divisors(a: &AntisymmetricForm) -> Result<(DivisorChain, UnimodularMatrix)> {
    let m = a.matrix().to_integer()?;
    let n = m.rows();
    let mut r = Reducer { a: m, u: IntMatrix::identity(n) };
    let mut divisors = Vec::with_capacity(n / 2);
    for k in (0..n).step_by(2) {
        divisors.push(r.reduce_block(k)?);
    }
    Ok((DivisorChain::new(divisors)?, UnimodularMatrix::trusted(r.u)))
}

/// Decides whether `Uᵀ·A·U = B` for some `U ∈ GL(2n, ℤ)`.
pub fn congruent(a: &AntisymmetricForm, b: &AntisymmetricForm) -> Result<Verdict> {
    if a.dim() != b.dim() {
        return Err(Error::Dimension(format!("forms of dimension {} and {}", a.dim(), b.dim())));
    }
    let (ai, bi, _) = lcd_scale(a.matrix(), b.matrix());
    let (da, ua) = symplectic_divisors(&AntisymmetricForm::from_int(&ai)?)?;
    let (db, ub) = symplectic_divisors(&AntisymmetricForm::from_int(&bi)?)?;
    if da != db {
        return Ok(Verdict::inequivalent());
    }
    let w = ua.compose(&ub.inverse());
    debug_assert_eq!(&w.congruence(a.matrix()), b.matrix());
    Ok(Verdict { equivalent: true, witness: Some(w) })
}

/// Divisor chains of both forms after one common rescaling.
pub fn scaled_divisors(a: &AntisymmetricForm, b: &AntisymmetricForm) -> Result<(DivisorChain, DivisorChain)> {
    let (ai, bi, _) = lcd_scale(a.matrix(), b.matrix());
    let (da, _) = symplectic_divisors(&AntisymmetricForm::from_int(&ai)?)?;
    let (db, _) = symplectic_divisors(&AntisymmetricForm::from_int(&bi)?)?;
    Ok((da, db))
}

/// Largest number of candidate matrices `(2·bound+1)^(dim²)` the exhaustive
/// search accepts.
pub const BRUTEFORCE_BUDGET: u64 = 100_000_000;

/// Exhaustive search for an integer `U` with entries in `[-bound, bound]`,
/// `det U = ±1` and `Uᵀ·A·U = B`.
///
/// Candidates are ordered column by column, each column lexicographically
/// from `(-bound, …, -bound)` up; the returned witness is the first in that
/// order. Columns are fixed one at a time and pruned on the pairings
/// `uᵢᵀ·A·uⱼ = B_ij`, which visits candidates in the same order as the full
/// enumeration.
pub fn bruteforce_congruent(a: &AntisymmetricForm, b: &AntisymmetricForm, bound: u32) -> Result<Verdict> {
    let n = a.dim();
    if b.dim() != n {
        return Err(Error::Dimension(format!("forms of dimension {} and {}", n, b.dim())));
    }
    if n > 4 {
        return Err(Error::OverBudget(format!("dimension {n} > 4")));
    }
    let base = 2 * u64::from(bound) + 1;
    let size = (0..n * n).try_fold(1u64, |acc, _| acc.checked_mul(base));
    if size.map_or(true, |s| s > BRUTEFORCE_BUDGET) {
        return Err(Error::OverBudget(format!("{base}^{} candidates at bound {bound}", n * n)));
    }
    let small = |m: &RationalMatrix| -> Result<Vec<Vec<i64>>> {
        let m = m.to_integer()?;
        m.iter_rows()
            .map(|r| {
                r.iter()
                    .map(|x| x.to_i64().filter(|v| v.abs() < 1 << 20).ok_or(Error::OverBudget("entries too large".into())))
                    .collect()
            })
            .collect()
    };
    let am = small(a.matrix())?;
    let bm = small(b.matrix())?;

    let b_i = i64::from(bound);
    let mut vectors: Vec<Vec<i64>> = vec![vec![]];
    for _ in 0..n {
        vectors = vectors
            .into_iter()
            .flat_map(|v| {
                (-b_i..=b_i).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    // A·v for each candidate
    let av: Vec<Vec<i64>> = vectors
        .iter()
        .map(|v| (0..n).map(|i| (0..n).map(|k| am[i][k] * v[k]).sum()).collect())
        .collect();

    let mut chosen: Vec<usize> = Vec::with_capacity(n);
    let found = search(&vectors, &av, &bm, &mut chosen);
    Ok(match found {
        Some(cols) => {
            let u = IntMatrix::from_fn(n, n, |i, j| BigInt::from(vectors[cols[j]][i]));
            Verdict { equivalent: true, witness: Some(UnimodularMatrix::new(u)?) }
        }
        None => Verdict::inequivalent(),
    })
}

fn search(vectors: &[Vec<i64>], av: &[Vec<i64>], b: &[Vec<i64>], chosen: &mut Vec<usize>) -> Option<Vec<usize>> {
    let n = b.len();
    let k = chosen.len();
    if k == n {
        let cols: Vec<&[i64]> = chosen.iter().map(|&c| vectors[c].as_slice()).collect();
        let det = small_det(&(0..n).map(|i| (0..n).map(|j| cols[j][i]).collect()).collect::<Vec<_>>());
        return (det.abs() == 1).then(|| chosen.clone());
    }
    for (c, v) in vectors.iter().enumerate() {
        // uᵢᵀ·A·v = B_ik for every earlier column i
        let ok = chosen.iter().enumerate().all(|(i, &ci)| {
            let dot: i64 = vectors[ci].iter().zip(&av[c]).map(|(x, y)| x * y).sum();
            dot == b[i][k]
        });
        if !ok || v.iter().all(|&x| x == 0) {
            continue;
        }
        chosen.push(c);
        if let Some(found) = search(vectors, av, b, chosen) {
            return Some(found);
        }
        chosen.pop();
    }
    None
}

fn small_det(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    match n {
        0 => 1,
        1 => m[0][0],
        _ => (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> =
                    m[1..].iter().map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect()).collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * m[0][j] * small_det(&minor)
            })
            .sum(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactint::{int, rat};

    fn form(rows: &[&[i64]]) -> AntisymmetricForm {
        AntisymmetricForm::from_int(&IntMatrix::from_i64_rows(rows)).unwrap()
    }

    fn chain(ds: &[i64]) -> DivisorChain {
        DivisorChain::new(ds.iter().map(|&d| BigInt::from(d)).collect()).unwrap()
    }

    #[test]
    fn already_normal() {
        let (d, u) = symplectic_divisors(&form(&[&[0, 2], &[-2, 0]])).unwrap();
        assert_eq!(d, chain(&[2]));
        assert!(u.matrix().is_identity());
    }

    #[test]
    fn standard_form_has_unit_chain() {
        let (d, u) = symplectic_divisors(&AntisymmetricForm::standard(3)).unwrap();
        assert_eq!(d, chain(&[1, 1, 1]));
        assert!(u.matrix().is_identity());
    }

    #[test]
    fn chain_2_6() {
        let a = AntisymmetricForm::block_sum(&[BigInt::from(6), BigInt::from(2)]).unwrap();
        let (d, u) = symplectic_divisors(&a).unwrap();
        // d₁ = gcd of all entries, d₁·d₂ = |Pf|
        assert_eq!(d.divisors()[0], BigInt::from(2));
        assert_eq!(Rational::from_integer(d.product()), a.pfaffian().abs());
        assert_eq!(d, chain(&[2, 6]));
        let normal = AntisymmetricForm::block_sum(d.divisors()).unwrap();
        assert_eq!(a.transform(&u).unwrap(), normal);
    }

    #[test]
    fn non_divisible_blocks_merge() {
        // 2J ⊕ 3J ~ J ⊕ 6J
        let a = AntisymmetricForm::block_sum(&[BigInt::from(2), BigInt::from(3)]).unwrap();
        let (d, u) = symplectic_divisors(&a).unwrap();
        assert_eq!(d, chain(&[1, 6]));
        assert_eq!(a.transform(&u).unwrap(), AntisymmetricForm::block_sum(d.divisors()).unwrap());
    }

    #[test]
    fn degenerate_and_shape_errors() {
        assert!(matches!(
            AntisymmetricForm::from_int(&IntMatrix::from_i64_rows(&[&[0, 1, 0, 0], &[-1, 0, 0, 0], &[0, 0, 0, 0], &[0, 0, 0, 0]])),
            Err(Error::Degenerate)
        ));
        let a = form(&[&[0, 1], &[-1, 0]]);
        let b = AntisymmetricForm::standard(2);
        assert!(matches!(congruent(&a, &b), Err(Error::Dimension(_))));
    }

    #[test]
    fn rational_forms_scale_together() {
        let a = form(&[&[0, 1], &[-1, 0]]);
        let half = AntisymmetricForm::new(RationalMatrix::from_rows(vec![
            vec![int(0), rat(1, 2)],
            vec![rat(-1, 2), int(0)],
        ]).unwrap()).unwrap();
        assert!(!congruent(&a, &half).unwrap().equivalent);
        assert!(congruent(&half, &half).unwrap().equivalent);
    }

    #[test]
    fn identity_is_a_valid_self_witness() {
        let a = form(&[&[0, 3, 1, 0], &[-3, 0, 2, 5], &[-1, -2, 0, 4], &[0, -5, -4, 0]]);
        let v = congruent(&a, &a).unwrap();
        assert!(v.equivalent);
        assert_eq!(a.transform(v.witness.as_ref().unwrap()).unwrap(), a);
    }

    #[test]
    fn bruteforce_examples() {
        let j = form(&[&[0, 1], &[-1, 0]]);
        let v = bruteforce_congruent(&j, &j, 1).unwrap();
        assert!(v.equivalent);
        // first hit in column-lexicographic order
        assert_eq!(v.witness.unwrap().matrix(), &IntMatrix::from_i64_rows(&[&[-1, 0], &[-1, -1]]));

        let two = form(&[&[0, 2], &[-2, 0]]);
        assert!(!bruteforce_congruent(&j, &two, 3).unwrap().equivalent);

        let neg = form(&[&[0, -1], &[1, 0]]);
        let v = bruteforce_congruent(&j, &neg, 1).unwrap();
        assert!(v.equivalent);
        let u = v.witness.unwrap();
        assert_eq!(j.transform(&u).unwrap(), neg);
        let diag = UnimodularMatrix::new(IntMatrix::from_i64_rows(&[&[1, 0], &[0, -1]])).unwrap();
        assert_eq!(j.transform(&diag).unwrap(), neg);
    }

    #[test]
    fn bruteforce_budget() {
        let a = AntisymmetricForm::standard(2);
        assert!(matches!(bruteforce_congruent(&a, &a, 2), Err(Error::OverBudget(_))));
        let big = AntisymmetricForm::standard(3);
        assert!(matches!(bruteforce_congruent(&big, &big, 1), Err(Error::OverBudget(_))));
    }
}
