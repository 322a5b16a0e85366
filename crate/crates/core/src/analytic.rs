//! Lattice quotients of the split torus over the Novikov field.
//!
//! A lattice `Γ ⊂ (Λ*)ⁿ` is recorded by its valuation matrix: column `j`
//! holds the exponents of the generator `eⱼ = (T^{m₁ⱼ}, …, T^{mₙⱼ})`.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::congruence::{congruent, AntisymmetricForm, Verdict};
use crate::error::{Error, Result};
use crate::exactint::{IntMatrix, Rational, RationalMatrix, UnimodularMatrix};

/// Finite sum `Σ aᵢ·T^{λᵢ}` with strictly increasing exponents and nonzero
/// coefficients. The empty sum is zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct NovikovScalar {
    terms: Vec<(Rational, Rational)>,
}

impl NovikovScalar {
    /// Collects like powers and drops zero coefficients.
    pub fn new(terms: impl IntoIterator<Item = (Rational, Rational)>) -> Self {
        let mut terms: Vec<(Rational, Rational)> = terms.into_iter().collect();
        terms.sort_by(|a, b| a.1.cmp(&b.1));
        let mut out: Vec<(Rational, Rational)> = Vec::with_capacity(terms.len());
        for (c, e) in terms {
            match out.last_mut() {
                Some(last) if last.1 == e => last.0 += c,
                _ => out.push((c, e)),
            }
        }
        out.retain(|(c, _)| !c.is_zero());
        Self { terms: out }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(Rational::one(), Rational::zero())
    }

    pub fn monomial(coeff: Rational, exp: Rational) -> Self {
        Self::new([(coeff, exp)])
    }

    /// `T^λ`.
    pub fn t_pow(exp: Rational) -> Self {
        Self::monomial(Rational::one(), exp)
    }

    pub fn terms(&self) -> &[(Rational, Rational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(self.terms.iter().chain(&other.terms).cloned())
    }

    pub fn neg(&self) -> Self {
        Self { terms: self.terms.iter().map(|(c, e)| (-c, e.clone())).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(
            self.terms
                .iter()
                .flat_map(|(c1, e1)| other.terms.iter().map(move |(c2, e2)| (c1 * c2, e1 + e2))),
        )
    }

    /// Integer power of a monomial; negative powers need a single term.
    pub fn pow(&self, k: i64) -> Result<Self> {
        if k >= 0 {
            return Ok((0..k).fold(Self::one(), |acc, _| acc.mul(self)));
        }
        match self.terms.as_slice() {
            [(c, e)] => {
                let m = Self::monomial(c.recip(), -e);
                Ok((0..-k).fold(Self::one(), |acc, _| acc.mul(&m)))
            }
            [] => Err(Error::ZeroValuation),
            _ => Err(Error::Precondition("negative power of a non-monomial".into())),
        }
    }
}

impl fmt::Display for NovikovScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(c, e)| format!("{c}*T^({e})")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `σ(x)`, the smallest exponent.
pub fn valuation(x: &NovikovScalar) -> Result<Rational> {
    x.terms.first().map(|(_, e)| e.clone()).ok_or(Error::ZeroValuation)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NovikovLattice {
    valuation: RationalMatrix,
}

impl NovikovLattice {
    pub fn new(valuation: RationalMatrix) -> Result<Self> {
        if !valuation.is_square() || valuation.rows() == 0 {
            return Err(Error::Dimension("valuation matrix must be square and nonempty".into()));
        }
        if valuation.det()?.is_zero() {
            return Err(Error::Degenerate);
        }
        Ok(Self { valuation })
    }

    pub fn rank(&self) -> usize {
        self.valuation.rows()
    }

    pub fn valuation_matrix(&self) -> &RationalMatrix {
        &self.valuation
    }

    /// Generator `eⱼ` as a vector of monomials.
    pub fn generator(&self, j: usize) -> Vec<NovikovScalar> {
        (0..self.rank()).map(|i| NovikovScalar::t_pow(self.valuation[(i, j)].clone())).collect()
    }
}

/// `φ: Γ → X(T)`; row `i` is the exponent vector of the character `φ(eᵢ)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polarization {
    phi: IntMatrix,
}

impl Polarization {
    pub fn new(phi: IntMatrix) -> Result<Self> {
        if !phi.is_square() {
            return Err(Error::Dimension("polarization must be square".into()));
        }
        Ok(Self { phi })
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.phi
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AnalyticTorus {
    lattice: NovikovLattice,
    polarization: Option<Polarization>,
}

impl AnalyticTorus {
    pub fn new(lattice: NovikovLattice, polarization: Option<Polarization>) -> Result<Self> {
        if let Some(p) = &polarization {
            if p.phi.rows() != lattice.rank() {
                return Err(Error::Dimension(format!(
                    "polarization of size {} on a rank {} lattice",
                    p.phi.rows(),
                    lattice.rank()
                )));
            }
        }
        Ok(Self { lattice, polarization })
    }

    pub fn lattice(&self) -> &NovikovLattice {
        &self.lattice
    }

    pub fn polarization(&self) -> Option<&Polarization> {
        self.polarization.as_ref()
    }

    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    /// Product torus: block-diagonal valuation matrix and polarization. The
    /// product is polarized only when every factor is.
    pub fn product(parts: &[AnalyticTorus]) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::Precondition("empty product".into()));
        }
        let vals: Vec<_> = parts.iter().map(|p| p.lattice.valuation.clone()).collect();
        let lattice = NovikovLattice::new(RationalMatrix::block_diag(&vals))?;
        let phis: Option<Vec<IntMatrix>> = parts.iter().map(|p| p.polarization.as_ref().map(|q| q.phi.clone())).collect();
        let polarization = phis.map(|b| Polarization { phi: IntMatrix::block_diag(&b) });
        Self::new(lattice, polarization)
    }
}

/// `A(ᾱ)_l`: generators `(T^{α₁/l}, …, T^{αₙ/l})` and `T^{αᵢ}` in slot `i ≥ 2`,
/// polarized by `φ(e₁) = z₁⋯zₙ`, `φ(eᵢ) = zᵢˡ`.
pub fn standard_analytic_torus(areas: &[Rational], l: u64) -> Result<AnalyticTorus> {
    if areas.is_empty() || areas.iter().any(|a| !a.is_positive()) || l == 0 {
        return Err(Error::Precondition("areas must be positive and l at least 1".into()));
    }
    let n = areas.len();
    let lr = Rational::from_integer(l.into());
    let val = RationalMatrix::from_fn(n, n, |i, j| match j {
        0 => &areas[i] / &lr,
        _ if i == j => areas[i].clone(),
        _ => Rational::zero(),
    });
    let phi = IntMatrix::from_fn(n, n, |i, j| match i {
        0 => 1.into(),
        _ if i == j => l.into(),
        _ => 0.into(),
    });
    AnalyticTorus::new(NovikovLattice::new(val)?, Some(Polarization { phi }))
}

/// `Gᵢⱼ = σ(φ(eᵢ)(eⱼ))`, evaluated monomial by monomial.
pub fn gram_matrix(t: &AnalyticTorus) -> Result<RationalMatrix> {
    let phi = &t.polarization.as_ref().ok_or(Error::MissingPolarization)?.phi;
    let n = t.rank();
    let gens: Vec<Vec<NovikovScalar>> = (0..n).map(|j| t.lattice.generator(j)).collect();
    let mut g = RationalMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut value = NovikovScalar::one();
            for k in 0..n {
                let e = i64::try_from(&phi[(i, k)])
                    .map_err(|_| Error::Precondition("polarization exponent out of range".into()))?;
                value = value.mul(&gens[j][k].pow(e)?);
            }
            g[(i, j)] = valuation(&value)?;
        }
    }
    Ok(g)
}

/// Symmetric and positive definite Gram pairing (Sylvester's criterion).
pub fn is_abelian_variety(t: &AnalyticTorus) -> Result<bool> {
    let g = gram_matrix(t)?;
    if g != g.transpose() {
        return Ok(false);
    }
    let n = g.rows();
    for k in 1..=n {
        if !g.submatrix(0, 0, k, k).det()?.is_positive() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Dual lattice: valuation matrix `M_Γᵀ`.
pub fn dual(lattice: &NovikovLattice) -> NovikovLattice {
    NovikovLattice { valuation: lattice.valuation.transpose() }
}

/// `Qᵢⱼ = σ(zᵢ(eⱼ))`, the valuation of the i-th coordinate character on the
/// j-th generator. For `A(ᾱ)_l` this is `M⁻¹`, the inverse of the symplectic
/// factor matrix.
pub fn pairing_matrix(lattice: &NovikovLattice) -> RationalMatrix {
    let n = lattice.rank();
    RationalMatrix::from_fn(n, n, |i, j| {
        valuation(&lattice.generator(j)[i]).expect("monomials are nonzero")
    })
}

/// `[[0, Qᵀ], [−Q, 0]]`.
pub fn pairing_form(t: &AnalyticTorus) -> AntisymmetricForm {
    let q = pairing_matrix(&t.lattice);
    let z = RationalMatrix::zeros(q.rows(), q.rows());
    let m = RationalMatrix::from_blocks(&z, &q.transpose(), &-&q, &z).expect("square blocks");
    AntisymmetricForm::new(m).expect("Q is invertible")
}

/// Derived equivalence via congruence of the pairing forms. Tori of
/// different rank are not equivalent.
pub fn derived_equivalent(a1: &AnalyticTorus, a2: &AnalyticTorus) -> Verdict {
    if a1.rank() != a2.rank() {
        return Verdict::inequivalent();
    }
    congruent(&pairing_form(a1), &pairing_form(a2)).expect("equal dimensions")
}

/// Checks that `f = Uᵀ = [[F, G], [H, I]]` is an isometric isomorphism
/// `A₁ × Â₁ → A₂ × Â₂`: the block congruence
/// `f·[[0, Q₁ᵀ], [−Q₁, 0]]·fᵀ = [[0, Q₂ᵀ], [−Q₂, 0]]` and, with
/// `f⁻¹ = [[Î, −Ĝ], [−Ĥ, F̂]]`, the four block relations
/// `Q₁Fᵀ = F̂Q₂`, `IQ₁ = Q₂Îᵀ`, `GQ₁ = Q₂ᵀĜᵀ`, `HQ₁ᵀ = Q₂Ĥᵀ`.
pub fn verify_isometric(u: &IntMatrix, a1: &AnalyticTorus, a2: &AnalyticTorus) -> Result<bool> {
    let u = UnimodularMatrix::new(u.clone())?;
    let n = a1.rank();
    if a2.rank() != n || u.dim() != 2 * n {
        return Err(Error::Dimension(format!(
            "{}x{} matrix for tori of rank {} and {}",
            u.dim(),
            u.dim(),
            n,
            a2.rank()
        )));
    }
    let qb = pairing_matrix(&a1.lattice);
    let qa = pairing_matrix(&a2.lattice);
    let f = u.matrix().transpose().to_rational();
    let finv = u.inverse().matrix().transpose().to_rational();
    let block = |m: &RationalMatrix, r: usize, c: usize| m.submatrix(r * n, c * n, n, n);

    let congruence_ok = &(&f * pairing_form(a1).matrix()) * &f.transpose() == *pairing_form(a2).matrix();

    let (bf, bg, bh, bi) = (block(&f, 0, 0), block(&f, 0, 1), block(&f, 1, 0), block(&f, 1, 1));
    let hat_i = block(&finv, 0, 0);
    let hat_g = -&block(&finv, 0, 1);
    let hat_h = -&block(&finv, 1, 0);
    let hat_f = block(&finv, 1, 1);
    let relations = [
        &qb * &bf.transpose() == &hat_f * &qa,
        &bi * &qb == &qa * &hat_i.transpose(),
        &bg * &qb == &qa.transpose() * &hat_g.transpose(),
        &bh * &qb.transpose() == &qa * &hat_h.transpose(),
    ];
    Ok(congruence_ok && relations.iter().all(|&ok| ok))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactint::{int, rat};

    #[test]
    fn valuation_examples() {
        let x = NovikovScalar::new([(int(3), rat(1, 2)), (int(1), int(2))]);
        assert_eq!(valuation(&x).unwrap(), rat(1, 2));
        assert_eq!(valuation(&NovikovScalar::one()).unwrap(), int(0));
        assert!(matches!(valuation(&NovikovScalar::zero()), Err(Error::ZeroValuation)));
    }

    #[test]
    fn arithmetic_normalizes() {
        let x = NovikovScalar::new([(int(1), int(1)), (int(2), int(0))]);
        assert_eq!(x.terms()[0].1, int(0));
        assert!(x.add(&x.neg()).is_zero());
        let y = NovikovScalar::new([(int(1), int(0)), (int(-1), int(1))]);
        let z = NovikovScalar::new([(int(1), int(0)), (int(1), int(1))]);
        // (1 - T)(1 + T) = 1 - T²
        assert_eq!(y.mul(&z), NovikovScalar::new([(int(1), int(0)), (int(-1), int(2))]));
        assert_eq!(NovikovScalar::t_pow(rat(1, 3)).pow(-3).unwrap(), NovikovScalar::t_pow(int(-1)));
        assert!(z.pow(-1).is_err());
    }

    #[test]
    fn tate_curve() {
        let a = standard_analytic_torus(&[int(1)], 1).unwrap();
        assert_eq!(a.lattice().valuation_matrix(), &RationalMatrix::from_i64_rows(&[&[1]]));
        assert_eq!(a.polarization().unwrap().matrix(), &IntMatrix::from_i64_rows(&[&[1]]));
        assert!(is_abelian_variety(&a).unwrap());
    }

    #[test]
    fn level_two_surface() {
        let a = standard_analytic_torus(&[int(1), int(1)], 2).unwrap();
        let expected = RationalMatrix::from_rows(vec![vec![rat(1, 2), int(0)], vec![rat(1, 2), int(1)]]).unwrap();
        assert_eq!(a.lattice().valuation_matrix(), &expected);
        assert_eq!(pairing_matrix(a.lattice()), expected);
        assert!(is_abelian_variety(&a).unwrap());
    }

    #[test]
    fn non_polarizations() {
        let swap = NovikovLattice::new(RationalMatrix::from_i64_rows(&[&[0, 1], &[1, 0]])).unwrap();
        let a = AnalyticTorus::new(swap, Some(Polarization::new(IntMatrix::identity(2)).unwrap())).unwrap();
        assert!(!is_abelian_variety(&a).unwrap());

        let std = standard_analytic_torus(&[int(2), int(3)], 3).unwrap();
        let neg = -std.polarization().unwrap().matrix();
        let b = AnalyticTorus::new(std.lattice().clone(), Some(Polarization::new(neg).unwrap())).unwrap();
        assert!(!is_abelian_variety(&b).unwrap());

        let bare = AnalyticTorus::new(std.lattice().clone(), None).unwrap();
        assert!(matches!(is_abelian_variety(&bare), Err(Error::MissingPolarization)));
    }

    #[test]
    fn dual_is_involution() {
        let a = standard_analytic_torus(&[rat(3, 2), int(5), rat(1, 7)], 4).unwrap();
        let d = dual(a.lattice());
        assert_eq!(d.valuation_matrix(), &a.lattice().valuation_matrix().transpose());
        assert_eq!(&dual(&d), a.lattice());
        let diag = NovikovLattice::new(RationalMatrix::from_i64_rows(&[&[2, 0], &[0, 3]])).unwrap();
        assert_eq!(dual(&diag), diag);
    }

    #[test]
    fn one_dimensional_pairing() {
        let a = standard_analytic_torus(&[rat(7, 3)], 1).unwrap();
        assert_eq!(pairing_matrix(a.lattice()), RationalMatrix::from_rows(vec![vec![rat(7, 3)]]).unwrap());
    }

    #[test]
    fn derived_equivalence_examples() {
        let a = standard_analytic_torus(&[int(1), int(2)], 1).unwrap();
        let b = standard_analytic_torus(&[int(2), int(1)], 1).unwrap();
        assert!(derived_equivalent(&a, &a).equivalent);
        let v = derived_equivalent(&a, &b);
        assert!(v.equivalent);
        assert!(verify_isometric(v.witness.unwrap().matrix(), &a, &b).unwrap());
        let one = standard_analytic_torus(&[int(1)], 1).unwrap();
        let two = standard_analytic_torus(&[int(2)], 1).unwrap();
        assert!(!derived_equivalent(&one, &two).equivalent);
        assert!(!derived_equivalent(&one, &a).equivalent);
    }

    #[test]
    fn isometry_checks() {
        let a = standard_analytic_torus(&[int(1), int(3)], 2).unwrap();
        let b = standard_analytic_torus(&[int(1), int(5)], 2).unwrap();
        assert!(verify_isometric(&IntMatrix::identity(4), &a, &a).unwrap());
        assert!(!verify_isometric(&IntMatrix::identity(4), &a, &b).unwrap());
        let twice = IntMatrix::identity(4).scale(&2.into());
        assert!(matches!(verify_isometric(&twice, &a, &a), Err(Error::NotUnimodular(_))));
    }

    #[test]
    fn product_is_block_diagonal() {
        let a = standard_analytic_torus(&[int(1)], 1).unwrap();
        let b = standard_analytic_torus(&[int(1), int(1)], 2).unwrap();
        let p = AnalyticTorus::product(&[a, b]).unwrap();
        assert_eq!(p.rank(), 3);
        assert_eq!(p.lattice().valuation_matrix()[(1, 1)], rat(1, 2));
        assert!(p.lattice().valuation_matrix()[(0, 1)].is_zero());
        assert!(is_abelian_variety(&p).unwrap());
    }
}
