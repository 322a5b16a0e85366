//! Special isogenous symplectic tori.
//!
//! A factor `(ᾱ, l)` is the split torus `T(ᾱ) = ∏ ℝ²/(αᵢℤ ⊕ ℤ)` divided by a
//! free `ℤ/l` translation. Coordinates are ordered `(s₁, …, s_N, t₁, …, t_N)`
//! across all factors.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::congruence::{congruent, AntisymmetricForm, Verdict};
use crate::error::{Error, Result};
use crate::exactint::{lcd, same_lattice, Rational, RationalMatrix};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SpecialIsogenyFactor {
    areas: Vec<Rational>,
    l: u64,
}

impl SpecialIsogenyFactor {
    pub fn new(areas: Vec<Rational>, l: u64) -> Result<Self> {
        if areas.is_empty() {
            return Err(Error::Precondition("factor needs at least one area".into()));
        }
        if areas.iter().any(|a| !a.is_positive()) {
            return Err(Error::Precondition("areas must be positive".into()));
        }
        if l == 0 {
            return Err(Error::Precondition("l must be at least 1".into()));
        }
        Ok(Self { areas, l })
    }

    pub fn split(areas: Vec<Rational>) -> Result<Self> {
        Self::new(areas, 1)
    }

    pub fn areas(&self) -> &[Rational] {
        &self.areas
    }

    pub fn l(&self) -> u64 {
        self.l
    }

    pub fn n(&self) -> usize {
        self.areas.len()
    }

    pub fn is_split(&self) -> bool {
        self.l == 1
    }

    fn l_rat(&self) -> Rational {
        Rational::from_integer(BigInt::from(self.l))
    }

    /// s-block of the lattice basis: columns `(α₁/l, …, αₙ/l)` and `αᵢ·eᵢ`
    /// for `i ≥ 2`.
    pub fn s_block(&self) -> RationalMatrix {
        let l = self.l_rat();
        RationalMatrix::from_fn(self.n(), self.n(), |i, j| match j {
            0 => &self.areas[i] / &l,
            _ if i == j => self.areas[i].clone(),
            _ => Rational::zero(),
        })
    }

    /// `M`, lower triangular with `M₁₁ = l/α₁`, `Mᵢ₁ = −1/α₁`, `Mᵢᵢ = 1/αᵢ`.
    pub fn factor_matrix(&self) -> RationalMatrix {
        let a1 = &self.areas[0];
        RationalMatrix::from_fn(self.n(), self.n(), |i, j| match (i, j) {
            (0, 0) => self.l_rat() / a1,
            (_, 0) => -a1.recip(),
            _ if i == j => self.areas[i].recip(),
            _ => Rational::zero(),
        })
    }

    /// `l / ∏ αᵢ`.
    pub fn pfaffian_magnitude(&self) -> Rational {
        self.areas.iter().fold(self.l_rat(), |acc, a| acc / a)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SpecialIsogenousTorus {
    factors: Vec<SpecialIsogenyFactor>,
}

impl SpecialIsogenousTorus {
    pub fn new(factors: Vec<SpecialIsogenyFactor>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::Precondition("torus needs at least one factor".into()));
        }
        Ok(Self { factors })
    }

    pub fn single(factor: SpecialIsogenyFactor) -> Self {
        Self { factors: vec![factor] }
    }

    pub fn factors(&self) -> &[SpecialIsogenyFactor] {
        &self.factors
    }

    /// `N = Σ nᵢ`; the torus has real dimension `2N`.
    pub fn n(&self) -> usize {
        self.factors.iter().map(SpecialIsogenyFactor::n).sum()
    }

    pub fn dim(&self) -> usize {
        2 * self.n()
    }

    /// Block-diagonal `M` over all factors.
    pub fn factor_matrix(&self) -> RationalMatrix {
        let blocks: Vec<_> = self.factors.iter().map(SpecialIsogenyFactor::factor_matrix).collect();
        RationalMatrix::block_diag(&blocks)
    }

    fn s_block(&self) -> RationalMatrix {
        let blocks: Vec<_> = self.factors.iter().map(SpecialIsogenyFactor::s_block).collect();
        RationalMatrix::block_diag(&blocks)
    }
}

impl From<SpecialIsogenyFactor> for SpecialIsogenousTorus {
    fn from(f: SpecialIsogenyFactor) -> Self {
        Self::single(f)
    }
}

/// Full-rank lattice in `ℝ²ᴺ`, generators as columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymplecticLattice {
    basis: RationalMatrix,
}

impl SymplecticLattice {
    pub fn new(basis: RationalMatrix) -> Result<Self> {
        if !basis.is_square() {
            return Err(Error::Dimension("lattice basis must be square".into()));
        }
        if basis.det()?.is_zero() {
            return Err(Error::Degenerate);
        }
        Ok(Self { basis })
    }

    pub fn basis(&self) -> &RationalMatrix {
        &self.basis
    }

    pub fn covolume(&self) -> Rational {
        self.basis.det().expect("square").abs()
    }
}

pub fn standard_lattice(t: &SpecialIsogenousTorus) -> SymplecticLattice {
    let basis = RationalMatrix::block_diag(&[t.s_block(), RationalMatrix::identity(t.n())]);
    SymplecticLattice { basis }
}

/// `M̃ = blockdiag(M, I)`, sending the standard lattice to `ℤ²ᴺ`.
pub fn normalizing_matrix(t: &SpecialIsogenousTorus) -> RationalMatrix {
    RationalMatrix::block_diag(&[t.factor_matrix(), RationalMatrix::identity(t.n())])
}

/// `Ω = [[0, Mᵀ], [−M, 0]]`.
pub fn omega(t: &SpecialIsogenousTorus) -> AntisymmetricForm {
    let m = t.factor_matrix();
    let z = RationalMatrix::zeros(t.n(), t.n());
    let w = RationalMatrix::from_blocks(&z, &m.transpose(), &-&m, &z).expect("square blocks");
    AntisymmetricForm::new(w).expect("M is invertible")
}

/// Decides linear symplectomorphism by congruence of the `Ω` matrices.
/// Tori of different dimension are simply not symplectomorphic.
pub fn symplectomorphic(t1: &SpecialIsogenousTorus, t2: &SpecialIsogenousTorus) -> Verdict {
    if t1.dim() != t2.dim() {
        return Verdict::inequivalent();
    }
    congruent(&omega(t1), &omega(t2)).expect("equal dimensions")
}

/// The `n + 1` generators `αᵢ·sᵢ`, `tⱼ` and `(α₁/l₁, …, αₙ/lₙ, 0, …, 0)` of a
/// general quotient, as columns of a `2n × (2n+1)` matrix.
pub fn general_quotient_generators(areas: &[Rational], l: &[u64]) -> Result<RationalMatrix> {
    check_general(areas, l)?;
    let n = areas.len();
    Ok(RationalMatrix::from_fn(2 * n, 2 * n + 1, |i, j| {
        if j < n {
            if i == j { areas[i].clone() } else { Rational::zero() }
        } else if j < 2 * n {
            if i == j { Rational::one() } else { Rational::zero() }
        } else if i < n {
            &areas[i] / Rational::from_integer(BigInt::from(l[i]))
        } else {
            Rational::zero()
        }
    }))
}

fn check_general(areas: &[Rational], l: &[u64]) -> Result<()> {
    if areas.len() != l.len() {
        return Err(Error::Dimension(format!("{} areas and {} l-values", areas.len(), l.len())));
    }
    if areas.is_empty() {
        return Err(Error::Precondition("empty area vector".into()));
    }
    if areas.iter().any(|a| !a.is_positive()) {
        return Err(Error::Precondition("areas must be positive".into()));
    }
    if l.contains(&0) {
        return Err(Error::Precondition("l-values must be positive".into()));
    }
    let g = l.iter().fold(0u64, |acc, &x| acc.gcd(&x));
    if g != 1 {
        return Err(Error::NonCoprime(g.to_string()));
    }
    Ok(())
}

/// A reduced general quotient: `torus` lives in permuted coordinates, output
/// coordinate `k` being input coordinate `coordinate_order[k]` (in both the
/// s- and t-blocks).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    pub torus: SpecialIsogenousTorus,
    pub coordinate_order: Vec<usize>,
}

impl Reduction {
    /// Standard lattice of `torus`, rows moved back to input coordinates.
    pub fn lattice_in_input_coordinates(&self) -> RationalMatrix {
        let b = standard_lattice(&self.torus).basis;
        let n = self.coordinate_order.len();
        let mut row_of = vec![0; 2 * n];
        for (k, &orig) in self.coordinate_order.iter().enumerate() {
            row_of[orig] = k;
            row_of[orig + n] = k + n;
        }
        RationalMatrix::from_fn(2 * n, 2 * n, |i, j| b[(row_of[i], j)].clone())
    }
}

/// Rewrites the quotient of `T(ᾱ)` by `(α₁/l₁, …, αₙ/lₙ)` as a special
/// isogenous torus: one factor on the coordinates where a common level
/// survives, one split factor on the rest.
///
/// Each pass replaces `lᵢ` by `lᵢ' = gcd(lᵢ, lcm_{j≠i} lⱼ)` and `αᵢ` by
/// `αᵢ·lᵢ'/lᵢ` (the part of `lᵢ` coprime to the other levels only refines the
/// i-th circle). Once stable, the surviving levels must all be equal; when
/// they are not, the lattice has no such decomposition and `NotReducible` is
/// returned. The result is certified by comparing Hermite forms of both
/// lattices after clearing denominators.
pub fn reduce_general_quotient(areas: &[Rational], l: &[u64]) -> Result<Reduction> {
    check_general(areas, l)?;
    let n = areas.len();
    let mut alpha = areas.to_vec();
    let mut level = l.to_vec();
    loop {
        let next: Vec<u64> = (0..n)
            .map(|i| {
                let others = (0..n).filter(|&j| j != i).fold(1u64, |acc, j| acc.lcm(&level[j]));
                level[i].gcd(&others)
            })
            .collect();
        if next == level {
            break;
        }
        for i in 0..n {
            let refine = level[i] / next[i];
            alpha[i] /= Rational::from_integer(BigInt::from(refine));
        }
        level = next;
    }

    let active: Vec<usize> = (0..n).filter(|&i| level[i] > 1).collect();
    let rest: Vec<usize> = (0..n).filter(|&i| level[i] == 1).collect();
    if let Some(&first) = active.first() {
        if active.iter().any(|&i| level[i] != level[first]) {
            let stable: Vec<String> = level.iter().map(u64::to_string).collect();
            return Err(Error::NotReducible(format!("stable levels ({}) are not all equal", stable.join(", "))));
        }
    }
    let pick = |idx: &[usize]| idx.iter().map(|&i| alpha[i].clone()).collect::<Vec<_>>();
    let mut factors = Vec::new();
    if !active.is_empty() {
        factors.push(SpecialIsogenyFactor::new(pick(&active), level[active[0]])?);
    }
    if !rest.is_empty() {
        factors.push(SpecialIsogenyFactor::split(pick(&rest))?);
    }
    let reduction = Reduction {
        torus: SpecialIsogenousTorus::new(factors)?,
        coordinate_order: active.into_iter().chain(rest).collect(),
    };

    let generators = general_quotient_generators(areas, l)?;
    if !same_rational_lattice(&generators, &reduction.lattice_in_input_coordinates()) {
        return Err(Error::NotReducible("reduced lattice differs from the generated lattice".into()));
    }
    Ok(reduction)
}

/// Column lattices compared after scaling both by one common denominator.
pub fn same_rational_lattice(a: &RationalMatrix, b: &RationalMatrix) -> bool {
    let c = Rational::from_integer(lcd(a).lcm(&lcd(b)));
    let scale = |m: &RationalMatrix| m.scale(&c).to_integer().expect("denominators cleared");
    same_lattice(&scale(a), &scale(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactint::{int, pfaffian, rat};

    fn factor(areas: &[Rational], l: u64) -> SpecialIsogenyFactor {
        SpecialIsogenyFactor::new(areas.to_vec(), l).unwrap()
    }

    fn torus(areas: &[Rational], l: u64) -> SpecialIsogenousTorus {
        factor(areas, l).into()
    }

    #[test]
    fn split_two_torus_lattice() {
        let b = standard_lattice(&torus(&[int(1)], 1));
        assert!(b.basis().is_identity());
    }

    #[test]
    fn level_two_lattice() {
        let b = standard_lattice(&torus(&[int(1), int(1)], 2));
        let expected = RationalMatrix::from_rows(vec![
            vec![rat(1, 2), int(0), int(0), int(0)],
            vec![rat(1, 2), int(1), int(0), int(0)],
            vec![int(0), int(0), int(1), int(0)],
            vec![int(0), int(0), int(0), int(1)],
        ])
        .unwrap();
        assert_eq!(b.basis(), &expected);
    }

    #[test]
    fn split_lattice_has_index_l() {
        let split = standard_lattice(&torus(&[int(1), int(1)], 1));
        let quot = standard_lattice(&torus(&[int(1), int(1)], 2));
        assert_eq!(split.covolume() / quot.covolume(), int(2));
    }

    #[test]
    fn factor_matrix_examples() {
        let m = factor(&[int(1), int(1)], 2).factor_matrix();
        assert_eq!(m, RationalMatrix::from_i64_rows(&[&[2, 0], &[-1, 1]]));
        let m = factor(&[rat(3, 5)], 1).factor_matrix();
        assert_eq!(m, RationalMatrix::from_rows(vec![vec![rat(5, 3)]]).unwrap());
    }

    #[test]
    fn normalizing_is_unimodular() {
        let t = SpecialIsogenousTorus::new(vec![factor(&[rat(2, 3), rat(7, 4), int(5)], 6), factor(&[rat(1, 9)], 1)])
            .unwrap();
        let prod = &normalizing_matrix(&t) * standard_lattice(&t).basis();
        assert!(prod.is_integral());
        assert_eq!(prod.det().unwrap().abs(), int(1));
    }

    #[test]
    fn omega_examples() {
        assert_eq!(omega(&torus(&[int(1)], 1)), AntisymmetricForm::standard(1));
        let w = omega(&torus(&[int(1), int(1)], 2));
        let expected = RationalMatrix::from_i64_rows(&[&[0, 0, 2, -1], &[0, 0, 0, 1], &[-2, 0, 0, 0], &[1, -1, 0, 0]]);
        assert_eq!(w.matrix(), &expected);
    }

    #[test]
    fn pfaffian_and_covolume() {
        let f = factor(&[rat(3, 2), rat(5, 7)], 4);
        let t: SpecialIsogenousTorus = f.clone().into();
        let pf = pfaffian(omega(&t).matrix()).unwrap().abs();
        assert_eq!(pf, f.pfaffian_magnitude());
        assert_eq!(pf * standard_lattice(&t).covolume(), int(1));
    }

    #[test]
    fn symplectomorphism_examples() {
        let t = torus(&[int(1), int(2)], 1);
        assert!(symplectomorphic(&t, &t).equivalent);
        let swapped = torus(&[int(2), int(1)], 1);
        let v = symplectomorphic(&t, &swapped);
        assert!(v.equivalent);
        assert_eq!(omega(&t).transform(v.witness.as_ref().unwrap()).unwrap(), omega(&swapped));
        assert!(!symplectomorphic(&torus(&[int(1)], 1), &torus(&[int(2)], 1)).equivalent);
        assert!(!symplectomorphic(&torus(&[int(1)], 1), &t).equivalent);
    }

    #[test]
    fn reduce_all_ones_is_split() {
        let areas = [int(1), rat(3, 2), int(2)];
        let r = reduce_general_quotient(&areas, &[1, 1, 1]).unwrap();
        assert_eq!(r.torus, SpecialIsogenousTorus::single(SpecialIsogenyFactor::split(areas.to_vec()).unwrap()));
        assert_eq!(r.coordinate_order, vec![0, 1, 2]);
    }

    #[test]
    fn reduce_coprime_levels() {
        // levels 2 and 3 only refine their own circles
        let r = reduce_general_quotient(&[int(1), int(1)], &[2, 3]).unwrap();
        assert_eq!(r.torus.factors().len(), 1);
        assert!(r.torus.factors()[0].is_split());
        assert_eq!(r.torus.factors()[0].areas(), &[rat(1, 2), rat(1, 3)]);
        let gens = general_quotient_generators(&[int(1), int(1)], &[2, 3]).unwrap();
        assert!(same_rational_lattice(&gens, &r.lattice_in_input_coordinates()));
    }

    #[test]
    fn reduce_mixed_levels() {
        let r = reduce_general_quotient(&[int(1), int(2), int(3)], &[4, 2, 1]).unwrap();
        assert_eq!(r.coordinate_order, vec![0, 1, 2]);
        let f = &r.torus.factors()[0];
        assert_eq!((f.areas(), f.l()), (&[rat(1, 2), int(2)][..], 2));
        assert!(r.torus.factors()[1].is_split());
    }

    #[test]
    fn reduce_rejects_bad_input() {
        assert!(matches!(reduce_general_quotient(&[int(1), int(1)], &[2, 2]), Err(Error::NonCoprime(_))));
        assert!(reduce_general_quotient(&[int(1)], &[1, 1]).is_err());
        assert!(reduce_general_quotient(&[int(-1)], &[1]).is_err());
    }

    #[test]
    fn unequal_stable_levels_are_not_reducible() {
        // Zw + Z³ with w = (1/2, 1/3, 1/6): each axis meets the lattice in Z,
        // and w projects to orders 2, 3, 6, so no single level fits
        let err = reduce_general_quotient(&[int(1), int(1), int(1)], &[2, 3, 6]).unwrap_err();
        assert!(matches!(err, Error::NotReducible(_)));
    }

    #[test]
    fn invalid_factors() {
        assert!(SpecialIsogenyFactor::new(vec![], 1).is_err());
        assert!(SpecialIsogenyFactor::new(vec![int(0)], 1).is_err());
        assert!(SpecialIsogenyFactor::new(vec![int(1)], 0).is_err());
        assert!(SpecialIsogenousTorus::new(vec![]).is_err());
    }
}
