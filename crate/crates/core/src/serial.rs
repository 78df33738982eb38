//! JSON forms of [`OperatorPolynomial`] and [`SymmetryOperator`].
//!
//! ```json
//! {
//!   "metadata": {"scalar_mode": "exact", "degree": 1},
//!   "terms": [{"row": 0, "col": 1, "grading": 1, "dagger_power": 1, "a_power": 0, "coeff": "1/1"}]
//! }
//! ```
//!
//! Exact coefficients are `"num/den"` strings, float coefficients are JSON
//! numbers. Exact round trips are lossless.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{Entry, Monomial, OperatorPolynomial};
use crate::models::{ModelError, ModelParams, ParamsRecord};
use crate::scalar::{
    format_rational, parse_rational, Coefficient, Rational, Scalar, ScalarError, ScalarMode,
};
use crate::solver::{Normalization, Provenance, SymmetryOperator};

#[derive(Debug, Error)]
pub enum SerialError {
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("term ({row},{col}) outside the 2×2 operator matrix")]
    BadEntry { row: usize, col: usize },
    #[error("grading must be 0 or 1, found {0}")]
    BadGrading(u8),
    #[error("metadata degree {declared} disagrees with terms (actual {actual})")]
    DegreeMismatch { declared: u32, actual: u32 },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("unknown provenance {0:?}")]
    BadProvenance(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolynomialMetadata {
    pub scalar_mode: ScalarMode,
    pub degree: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoeffRepr {
    Exact(String),
    Float(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermRecord {
    pub row: usize,
    pub col: usize,
    pub grading: u8,
    pub dagger_power: u32,
    pub a_power: u32,
    pub coeff: CoeffRepr,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolynomialRecord {
    pub metadata: PolynomialMetadata,
    pub terms: Vec<TermRecord>,
}

impl<C: Coefficient> OperatorPolynomial<C> {
    pub fn to_record(&self) -> PolynomialRecord {
        let terms = self
            .terms()
            .map(|(e, m, c)| TermRecord {
                row: e.row,
                col: e.col,
                grading: m.grading,
                dagger_power: m.creation,
                a_power: m.annihilation,
                coeff: match c.to_scalar() {
                    Scalar::Exact(q) => CoeffRepr::Exact(format_rational(&q)),
                    Scalar::Float(x) => CoeffRepr::Float(x),
                },
            })
            .collect();
        PolynomialRecord {
            metadata: PolynomialMetadata {
                scalar_mode: C::MODE,
                degree: self.degree(),
            },
            terms,
        }
    }

    /// Rebuilds a polynomial; the record's scalar mode must match `C`.
    pub fn from_record(record: &PolynomialRecord) -> Result<Self, SerialError> {
        if record.metadata.scalar_mode != C::MODE {
            return Err(ScalarError::ModeMismatch {
                expected: C::MODE,
                found: record.metadata.scalar_mode,
            }
            .into());
        }
        let mut p = Self::zero();
        for t in &record.terms {
            if t.row > 1 || t.col > 1 {
                return Err(SerialError::BadEntry {
                    row: t.row,
                    col: t.col,
                });
            }
            if t.grading > 1 {
                return Err(SerialError::BadGrading(t.grading));
            }
            let scalar = match &t.coeff {
                CoeffRepr::Exact(s) => Scalar::Exact(parse_rational(s)?),
                CoeffRepr::Float(x) => Scalar::Float(*x),
            };
            let c = C::from_scalar(&scalar)?;
            p.add_term(
                t.row,
                t.col,
                Monomial::new(t.grading, t.dagger_power, t.a_power),
                c,
            );
        }
        if p.degree() != record.metadata.degree {
            return Err(SerialError::DegreeMismatch {
                declared: record.metadata.degree,
                actual: p.degree(),
            });
        }
        Ok(p)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_record()).expect("polynomial record serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, SerialError> {
        let record: PolynomialRecord = serde_json::from_str(s)?;
        Self::from_record(&record)
    }
}

/// The coefficient a symmetry operator's scale was fixed by.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PinnedCoefficient {
    pub row: usize,
    pub col: usize,
    pub grading: u8,
    pub dagger_power: u32,
    pub a_power: u32,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetryMetadata {
    pub model: String,
    #[serde(rename = "M")]
    pub m: i64,
    pub params: ParamsRecord,
    pub provenance: String,
    pub pinned_coefficient: PinnedCoefficient,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetryRecord {
    pub symmetry: SymmetryMetadata,
    pub polynomial: PolynomialRecord,
}

impl SymmetryOperator {
    pub fn to_record(&self) -> SymmetryRecord {
        let n = &self.normalization;
        SymmetryRecord {
            symmetry: SymmetryMetadata {
                model: self.params.model.name().to_string(),
                m: self.m,
                params: ParamsRecord::from(&self.params),
                provenance: self.provenance.name().to_string(),
                pinned_coefficient: PinnedCoefficient {
                    row: n.entry.row,
                    col: n.entry.col,
                    grading: n.monomial.grading,
                    dagger_power: n.monomial.creation,
                    a_power: n.monomial.annihilation,
                    value: format_rational(&n.value),
                },
            },
            polynomial: self.j.to_record(),
        }
    }

    pub fn from_record(record: &SymmetryRecord) -> Result<Self, SerialError> {
        let meta = &record.symmetry;
        let provenance = match meta.provenance.as_str() {
            "derived" => Provenance::Derived,
            "catalog" => Provenance::Catalog,
            other => return Err(SerialError::BadProvenance(other.to_string())),
        };
        let pin = &meta.pinned_coefficient;
        if pin.row > 1 || pin.col > 1 {
            return Err(SerialError::BadEntry {
                row: pin.row,
                col: pin.col,
            });
        }
        Ok(SymmetryOperator {
            j: OperatorPolynomial::<Rational>::from_record(&record.polynomial)?,
            m: meta.m,
            params: ModelParams::try_from(&meta.params)?,
            provenance,
            normalization: Normalization {
                entry: Entry {
                    row: pin.row,
                    col: pin.col,
                },
                monomial: Monomial::new(pin.grading, pin.dagger_power, pin.a_power),
                value: parse_rational(&pin.value)?,
            },
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_record()).expect("symmetry record serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, SerialError> {
        Self::from_record(&serde_json::from_str(s)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rational};

    #[test]
    fn exact_json_shape() {
        let p = OperatorPolynomial::<Rational>::term(0, 1, Monomial::new(1, 1, 0), rat(-3, 4));
        let v: serde_json::Value = serde_json::from_str(&p.to_json()).unwrap();
        assert_eq!(v["metadata"]["scalar_mode"], "exact");
        assert_eq!(v["metadata"]["degree"], 1);
        assert_eq!(v["terms"][0]["coeff"], "-3/4");
        assert_eq!(v["terms"][0]["dagger_power"], 1);
    }

    #[test]
    fn float_record_is_rejected_in_exact_mode() {
        let p = OperatorPolynomial::<f64>::sigma_x();
        let err = OperatorPolynomial::<Rational>::from_json(&p.to_json()).unwrap_err();
        assert!(matches!(
            err,
            SerialError::Scalar(ScalarError::ModeMismatch { .. })
        ));
        let back = OperatorPolynomial::<f64>::from_json(&p.to_json()).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn degree_metadata_is_checked() {
        let p = OperatorPolynomial::<Rational>::number();
        let mut rec = p.to_record();
        rec.metadata.degree = 3;
        assert!(matches!(
            OperatorPolynomial::<Rational>::from_record(&rec),
            Err(SerialError::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn symmetry_operator_round_trip() {
        let p = ModelParams::aniso_aqrm(rat(1, 2), rat(3, 4), rat(0, 1), rat(2, 1))
            .on_condition(1)
            .unwrap();
        let j = crate::solver::solve(&p, 1).unwrap().unique().unwrap();
        let text = j.to_json();
        assert!(text.contains("\"M\": 1"));
        assert!(text.contains("\"provenance\": \"derived\""));
        assert_eq!(SymmetryOperator::from_json(&text).unwrap(), j);
    }
}
