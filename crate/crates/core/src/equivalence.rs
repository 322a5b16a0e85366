//! Mirror correspondence between special isogenous tori and lattice
//! quotients, and a joint classifier that runs both deciders.

use std::fmt;

use crate::analytic::{derived_equivalent, pairing_form, standard_analytic_torus, AnalyticTorus};
use crate::congruence::{congruent, scaled_divisors, symplectic_divisors, AntisymmetricForm, DivisorChain};
use crate::error::{Error, Result};
use crate::exactint::{lcd, Rational, RationalMatrix, UnimodularMatrix};
use crate::symptorus::{omega, symplectomorphic, SpecialIsogenousTorus};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Letter {
    /// Meridian.
    M,
    /// Longitude.
    L,
}

/// Product Lagrangian `L^{W,t}`: one circle per coordinate.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LagrangianWord {
    letters: Vec<Letter>,
    params: Vec<Rational>,
}

impl LagrangianWord {
    pub fn new(letters: Vec<Letter>, params: Vec<Rational>) -> Result<Self> {
        if letters.len() != params.len() {
            return Err(Error::Dimension(format!("{} letters and {} parameters", letters.len(), params.len())));
        }
        Ok(Self { letters, params })
    }

    /// Parses a word over `{m, l}`.
    pub fn parse(word: &str, params: Vec<Rational>) -> Result<Self> {
        let letters = word
            .chars()
            .map(|c| match c {
                'm' => Ok(Letter::M),
                'l' => Ok(Letter::L),
                other => Err(Error::Parse(format!("letter {other:?} is not m or l"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(letters, params)
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SheafFactor {
    /// `O(p_b − p₀)`.
    DegreeZeroLineBundle(Rational),
    /// `O_{T^a·p₀}`.
    SkyscraperPoint(Rational),
}

/// Box product `E₁ ⊠ ⋯ ⊠ Eₙ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SheafDescriptor(pub Vec<SheafFactor>);

impl fmt::Display for SheafDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|s| match s {
                SheafFactor::DegreeZeroLineBundle(b) => format!("O(p_{b} - p_0)"),
                SheafFactor::SkyscraperPoint(a) => format!("O_(T^{a} p_0)"),
            })
            .collect();
        write!(f, "{}", parts.join(" ⊠ "))
    }
}

pub fn mirror_object(w: &LagrangianWord) -> SheafDescriptor {
    SheafDescriptor(
        w.letters
            .iter()
            .zip(&w.params)
            .map(|(letter, p)| match letter {
                Letter::L => SheafFactor::DegreeZeroLineBundle(p.clone()),
                Letter::M => SheafFactor::SkyscraperPoint(p.clone()),
            })
            .collect(),
    )
}

/// Factor-wise `A(ᾱ)_l`, assembled as a product.
pub fn mirror(t: &SpecialIsogenousTorus) -> AnalyticTorus {
    let parts: Vec<AnalyticTorus> = t
        .factors()
        .iter()
        .map(|f| standard_analytic_torus(f.areas(), f.l()).expect("valid factor"))
        .collect();
    AnalyticTorus::product(&parts).expect("nonempty product")
}

/// `P·Ω⁻¹·P` with `P` the swap of the two `n × n` blocks. On `Ω` of a special
/// isogenous torus this is the pairing form `[[0, Qᵀ], [−Q, 0]]` of its
/// mirror; it extends the analytic side to arbitrary forms.
pub fn mirror_form(w: &AntisymmetricForm) -> AntisymmetricForm {
    let n = w.dim() / 2;
    let inv = w.matrix().inverse().expect("nondegenerate");
    let m = RationalMatrix::from_fn(2 * n, 2 * n, |i, j| inv[((i + n) % (2 * n), (j + n) % (2 * n))].clone());
    AntisymmetricForm::new(m).expect("inverse of a nondegenerate form")
}

/// Diagnostic for a disagreement between the two deciders.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoremViolation {
    pub symplectomorphic: bool,
    pub derived_equivalent: bool,
    pub omega_lhs: RationalMatrix,
    pub omega_rhs: RationalMatrix,
    pub pairing_lhs: RationalMatrix,
    pub pairing_rhs: RationalMatrix,
}

impl fmt::Display for TheoremViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "symplectomorphic = {}, derived_equivalent = {}", self.symplectomorphic, self.derived_equivalent)?;
        writeln!(f, "omega lhs: {}", self.omega_lhs)?;
        writeln!(f, "omega rhs: {}", self.omega_rhs)?;
        writeln!(f, "pairing lhs: {}", self.pairing_lhs)?;
        write!(f, "pairing rhs: {}", self.pairing_rhs)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassificationReport {
    pub symplectomorphic: bool,
    pub derived_equivalent: bool,
    pub divisors_lhs: DivisorChain,
    pub divisors_rhs: DivisorChain,
    /// Symplectic-side congruence `Uᵀ·Ω₁·U = Ω₂`.
    pub witness: Option<UnimodularMatrix>,
}

fn own_divisors(w: &AntisymmetricForm) -> DivisorChain {
    let c = Rational::from_integer(lcd(w.matrix()));
    let scaled = w.scale(&c).expect("nonzero scale");
    symplectic_divisors(&scaled).expect("integral after scaling").0
}

fn report(
    w1: &AntisymmetricForm,
    w2: &AntisymmetricForm,
    p1: &AntisymmetricForm,
    p2: &AntisymmetricForm,
) -> Result<ClassificationReport> {
    if w1.dim() != w2.dim() {
        return Ok(ClassificationReport {
            symplectomorphic: false,
            derived_equivalent: false,
            divisors_lhs: own_divisors(w1),
            divisors_rhs: own_divisors(w2),
            witness: None,
        });
    }
    let symp = congruent(w1, w2)?;
    let derived = congruent(p1, p2)?;
    if symp.equivalent != derived.equivalent {
        return Err(Error::TheoremViolation(Box::new(TheoremViolation {
            symplectomorphic: symp.equivalent,
            derived_equivalent: derived.equivalent,
            omega_lhs: w1.matrix().clone(),
            omega_rhs: w2.matrix().clone(),
            pairing_lhs: p1.matrix().clone(),
            pairing_rhs: p2.matrix().clone(),
        })));
    }
    let (d1, d2) = scaled_divisors(w1, w2)?;
    Ok(ClassificationReport {
        symplectomorphic: symp.equivalent,
        derived_equivalent: derived.equivalent,
        divisors_lhs: d1,
        divisors_rhs: d2,
        witness: symp.witness,
    })
}

/// Runs the symplectic decider on `Ω` and the analytic decider on the
/// mirrors' pairing forms, and reports both. A disagreement is returned as
/// [`Error::TheoremViolation`].
pub fn classify(t1: &SpecialIsogenousTorus, t2: &SpecialIsogenousTorus) -> Result<ClassificationReport> {
    let (a1, a2) = (mirror(t1), mirror(t2));
    let r = report(&omega(t1), &omega(t2), &pairing_form(&a1), &pairing_form(&a2))?;
    debug_assert_eq!(r.symplectomorphic, symplectomorphic(t1, t2).equivalent);
    debug_assert_eq!(r.derived_equivalent, derived_equivalent(&a1, &a2).equivalent);
    Ok(r)
}

/// [`classify`] for raw normalized forms, with [`mirror_form`] standing in for
/// the analytic side.
pub fn classify_forms(w1: &AntisymmetricForm, w2: &AntisymmetricForm) -> Result<ClassificationReport> {
    report(w1, w2, &mirror_form(w1), &mirror_form(w2))
}
