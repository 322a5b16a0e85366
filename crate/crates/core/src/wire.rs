//! JSON representations. Rationals and big integers travel as strings
//! (`"p/q"` or `"p"`); plain JSON integers are accepted on input.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::analytic::{AnalyticTorus, NovikovLattice, NovikovScalar, Polarization};
use crate::congruence::{AntisymmetricForm, DivisorChain};
use crate::equivalence::ClassificationReport;
use crate::error::{Error, Result};
use crate::exactint::{format_rational, parse_rational, IntMatrix, Rational, RationalMatrix};
use crate::strictify::{Coefficient, FiniteGroup};
use crate::symptorus::{Reduction, SpecialIsogenousTorus, SpecialIsogenyFactor};

/// A rational given as `"p/q"`, `"p"` or a JSON integer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RationalText {
    Text(String),
    Int(i64),
}

impl RationalText {
    pub fn parse(&self) -> Result<Rational> {
        match self {
            Self::Text(s) => parse_rational(s),
            Self::Int(i) => Ok(Rational::from_integer(BigInt::from(*i))),
        }
    }
}

impl From<&Rational> for RationalText {
    fn from(x: &Rational) -> Self {
        Self::Text(format_rational(x))
    }
}

pub fn rational_rows(m: &RationalMatrix) -> Vec<Vec<RationalText>> {
    m.iter_rows().map(|r| r.iter().map(RationalText::from).collect()).collect()
}

pub fn integer_rows(m: &IntMatrix) -> Vec<Vec<String>> {
    m.iter_rows().map(|r| r.iter().map(ToString::to_string).collect()).collect()
}

pub fn parse_matrix(rows: &[Vec<RationalText>]) -> Result<RationalMatrix> {
    let parsed = rows
        .iter()
        .map(|r| r.iter().map(RationalText::parse).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    RationalMatrix::from_rows(parsed)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorJson {
    pub areas: Vec<RationalText>,
    pub l: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorusJson {
    pub factors: Vec<FactorJson>,
}

impl TorusJson {
    pub fn to_torus(&self) -> Result<SpecialIsogenousTorus> {
        let factors = self
            .factors
            .iter()
            .map(|f| {
                let areas = f.areas.iter().map(RationalText::parse).collect::<Result<Vec<_>>>()?;
                SpecialIsogenyFactor::new(areas, f.l)
            })
            .collect::<Result<Vec<_>>>()?;
        SpecialIsogenousTorus::new(factors)
    }
}

impl From<&SpecialIsogenousTorus> for TorusJson {
    fn from(t: &SpecialIsogenousTorus) -> Self {
        let factors = t
            .factors()
            .iter()
            .map(|f| FactorJson { areas: f.areas().iter().map(RationalText::from).collect(), l: f.l() })
            .collect();
        Self { factors }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionJson {
    pub factors: Vec<FactorJson>,
    pub coordinate_order: Vec<usize>,
}

impl From<&Reduction> for ReductionJson {
    fn from(r: &Reduction) -> Self {
        Self { factors: TorusJson::from(&r.torus).factors, coordinate_order: r.coordinate_order.clone() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalyticTorusJson {
    pub rank: usize,
    pub valuation_matrix: Vec<Vec<RationalText>>,
    pub polarization: Option<Vec<Vec<i64>>>,
}

impl AnalyticTorusJson {
    pub fn to_torus(&self) -> Result<AnalyticTorus> {
        let val = parse_matrix(&self.valuation_matrix)?;
        if val.rows() != self.rank {
            return Err(Error::Dimension(format!("rank {} with a {}-row valuation matrix", self.rank, val.rows())));
        }
        let polarization = match &self.polarization {
            Some(rows) => {
                let rows: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
                if rows.iter().any(|r| r.len() != rows.len()) {
                    return Err(Error::Dimension("polarization must be square".into()));
                }
                Some(Polarization::new(IntMatrix::from_i64_rows(&rows))?)
            }
            None => None,
        };
        AnalyticTorus::new(NovikovLattice::new(val)?, polarization)
    }

    /// Lattice only, polarization dropped.
    pub fn from_lattice(lattice: &NovikovLattice) -> Self {
        Self { rank: lattice.rank(), valuation_matrix: rational_rows(lattice.valuation_matrix()), polarization: None }
    }
}

impl TryFrom<&AnalyticTorus> for AnalyticTorusJson {
    type Error = Error;

    fn try_from(t: &AnalyticTorus) -> Result<Self> {
        let polarization = match t.polarization() {
            Some(p) => Some(
                p.matrix()
                    .iter_rows()
                    .map(|r| {
                        r.iter()
                            .map(|x| i64::try_from(x).map_err(|_| Error::Parse("polarization entry too large".into())))
                            .collect()
                    })
                    .collect::<Result<Vec<Vec<i64>>>>()?,
            ),
            None => None,
        };
        Ok(Self { polarization, ..Self::from_lattice(t.lattice()) })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NovikovTermJson {
    pub coeff: RationalText,
    pub exp: RationalText,
}

pub fn novikov_to_json(x: &NovikovScalar) -> Vec<NovikovTermJson> {
    x.terms().iter().map(|(c, e)| NovikovTermJson { coeff: c.into(), exp: e.into() }).collect()
}

pub fn novikov_from_json(terms: &[NovikovTermJson]) -> Result<NovikovScalar> {
    let parsed = terms.iter().map(|t| Ok((t.coeff.parse()?, t.exp.parse()?))).collect::<Result<Vec<_>>>()?;
    Ok(NovikovScalar::new(parsed))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupJson {
    pub order: usize,
    pub table: Vec<Vec<usize>>,
    pub generators: Vec<usize>,
}

impl GroupJson {
    pub fn to_group(&self) -> Result<FiniteGroup> {
        if self.table.len() != self.order {
            return Err(Error::InvalidGroup(format!("order {} with a {}-row table", self.order, self.table.len())));
        }
        FiniteGroup::new(self.table.clone(), self.generators.clone())
    }
}

impl From<&FiniteGroup> for GroupJson {
    fn from(g: &FiniteGroup) -> Self {
        Self { order: g.order(), table: g.table().to_vec(), generators: g.generators().to_vec() }
    }
}

pub fn coefficient_text(x: &Coefficient) -> String {
    x.to_string()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorsJson {
    pub divisors: Vec<String>,
}

impl From<&DivisorChain> for DivisorsJson {
    fn from(d: &DivisorChain) -> Self {
        Self { divisors: d.divisors().iter().map(ToString::to_string).collect() }
    }
}

/// Antisymmetric form given as a bare matrix.
pub fn parse_form(rows: &[Vec<RationalText>]) -> Result<AntisymmetricForm> {
    AntisymmetricForm::new(parse_matrix(rows)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportJson {
    pub symplectomorphic: bool,
    pub derived_equivalent: bool,
    pub divisors: [Vec<String>; 2],
    pub witness: Option<Vec<Vec<String>>>,
}

impl From<&ClassificationReport> for ReportJson {
    fn from(r: &ClassificationReport) -> Self {
        Self {
            symplectomorphic: r.symplectomorphic,
            derived_equivalent: r.derived_equivalent,
            divisors: [DivisorsJson::from(&r.divisors_lhs).divisors, DivisorsJson::from(&r.divisors_rhs).divisors],
            witness: r.witness.as_ref().map(|w| integer_rows(w.matrix())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactint::{int, rat};

    #[test]
    fn torus_round_trip() {
        let text = r#"{"factors": [{"areas": ["1", "3/2"], "l": 2}, {"areas": [5], "l": 1}]}"#;
        let json: TorusJson = serde_json::from_str(text).unwrap();
        let t = json.to_torus().unwrap();
        assert_eq!(t.factors()[0].areas(), &[int(1), rat(3, 2)]);
        assert_eq!(t.factors()[1].areas(), &[int(5)]);
        let back = serde_json::to_string(&TorusJson::from(&t)).unwrap();
        assert_eq!(back, r#"{"factors":[{"areas":["1","3/2"],"l":2},{"areas":["5"],"l":1}]}"#);
    }

    #[test]
    fn bad_rationals_are_errors() {
        let json: TorusJson = serde_json::from_str(r#"{"factors": [{"areas": ["1/0"], "l": 1}]}"#).unwrap();
        assert!(json.to_torus().is_err());
        let json: TorusJson = serde_json::from_str(r#"{"factors": [{"areas": ["-1"], "l": 1}]}"#).unwrap();
        assert!(json.to_torus().is_err());
    }

    #[test]
    fn analytic_round_trip() {
        let a = crate::analytic::standard_analytic_torus(&[int(1), int(1)], 2).unwrap();
        let json = AnalyticTorusJson::try_from(&a).unwrap();
        assert_eq!(serde_json::to_string(&json).unwrap(), r#"{"rank":2,"valuation_matrix":[["1/2","0"],["1/2","1"]],"polarization":[[1,1],[0,2]]}"#);
        assert_eq!(json.to_torus().unwrap(), a);
    }

    #[test]
    fn novikov_round_trip() {
        let x = NovikovScalar::new([(rat(3, 1), rat(1, 2)), (int(1), int(2))]);
        let json = serde_json::to_string(&novikov_to_json(&x)).unwrap();
        assert_eq!(json, r#"[{"coeff":"3","exp":"1/2"},{"coeff":"1","exp":"2"}]"#);
        let back: Vec<NovikovTermJson> = serde_json::from_str(&json).unwrap();
        assert_eq!(novikov_from_json(&back).unwrap(), x);
    }

    #[test]
    fn group_json() {
        let g: GroupJson = serde_json::from_str(r#"{"order": 2, "table": [[0,1],[1,0]], "generators": [1]}"#).unwrap();
        assert_eq!(g.to_group().unwrap(), FiniteGroup::cyclic(2).unwrap());
        let g: GroupJson = serde_json::from_str(r#"{"order": 3, "table": [[0,1],[1,0]], "generators": [1]}"#).unwrap();
        assert!(g.to_group().is_err());
    }

    #[test]
    fn forms_from_integers() {
        let rows: Vec<Vec<RationalText>> = serde_json::from_str("[[0,2],[-2,0]]").unwrap();
        let f = parse_form(&rows).unwrap();
        assert_eq!(f.matrix(), &RationalMatrix::from_i64_rows(&[&[0, 2], &[-2, 0]]));
    }
}
