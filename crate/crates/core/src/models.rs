//! The four Hamiltonians, their parameter domains and ε-conditions.
//!
//! All four share the matrix form
//!
//! ```text
//! H = ⎛ (1+U) a†a + Δ        g(λa† + a) + ε ⎞
//!     ⎝ g(a† + λa) + ε       (1−U) a†a − Δ  ⎠
//! ```
//!
//! with λ = 1 for the isotropic models and U = 0 without the Stark term.
//! Anisotropy is supplied as μ with λ = μ², and the Stark parameter as an
//! exact circle point (sin t, cos t), so √λ, cos t, sin 2t and cos 2t are
//! all rational whenever the inputs are.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{Monomial, OperatorPolynomial};
use crate::scalar::{format_rational, parse_rational, Coefficient, Rational, ScalarError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Aqrm,
    AnisoAqrm,
    Arsm,
    AnisoArsm,
}

impl ModelKind {
    pub const ALL: [ModelKind; 4] = [
        ModelKind::Aqrm,
        ModelKind::AnisoAqrm,
        ModelKind::Arsm,
        ModelKind::AnisoArsm,
    ];

    pub fn is_anisotropic(self) -> bool {
        matches!(self, ModelKind::AnisoAqrm | ModelKind::AnisoArsm)
    }

    pub fn has_stark(self) -> bool {
        matches!(self, ModelKind::Arsm | ModelKind::AnisoArsm)
    }

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Aqrm => "aqrm",
            ModelKind::AnisoAqrm => "aniso_aqrm",
            ModelKind::Arsm => "arsm",
            ModelKind::AnisoArsm => "aniso_arsm",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ModelKind::ALL
            .into_iter()
            .find(|m| m.name() == s.trim().to_ascii_lowercase())
            .ok_or_else(|| ModelError::UnknownModel(s.to_string()))
    }
}

/// (sin t, cos t) with U = sin t.
#[derive(Debug, Clone, PartialEq)]
pub struct Stark<C> {
    pub sin_t: C,
    pub cos_t: C,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams<C> {
    pub model: ModelKind,
    pub g: C,
    pub delta: C,
    pub epsilon: C,
    /// √λ; required iff the model is anisotropic.
    pub mu: Option<C>,
    /// Required iff the model carries the Stark term.
    pub stark: Option<Stark<C>>,
}

/// A single failed admissibility rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub field: &'static str,
    pub rule: &'static str,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.rule)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("unknown model {0:?} (expected aqrm, aniso_aqrm, arsm or aniso_arsm)")]
    UnknownModel(String),
    #[error("invalid parameters: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("{model} requires the anisotropy parameter mu")]
    MissingAnisotropy { model: ModelKind },
    #[error("{model} requires the Stark pair (sin t, cos t)")]
    MissingStark { model: ModelKind },
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

impl<C: Coefficient> ModelParams<C> {
    pub fn aqrm(g: C, delta: C, epsilon: C) -> Self {
        ModelParams {
            model: ModelKind::Aqrm,
            g,
            delta,
            epsilon,
            mu: None,
            stark: None,
        }
    }

    pub fn aniso_aqrm(g: C, delta: C, epsilon: C, mu: C) -> Self {
        ModelParams {
            model: ModelKind::AnisoAqrm,
            mu: Some(mu),
            ..Self::aqrm(g, delta, epsilon)
        }
    }

    pub fn arsm(g: C, delta: C, epsilon: C, sin_t: C, cos_t: C) -> Self {
        ModelParams {
            model: ModelKind::Arsm,
            stark: Some(Stark { sin_t, cos_t }),
            ..Self::aqrm(g, delta, epsilon)
        }
    }

    pub fn aniso_arsm(g: C, delta: C, epsilon: C, mu: C, sin_t: C, cos_t: C) -> Self {
        ModelParams {
            model: ModelKind::AnisoArsm,
            mu: Some(mu),
            stark: Some(Stark { sin_t, cos_t }),
            ..Self::aqrm(g, delta, epsilon)
        }
    }

    /// √λ, or 1 for isotropic models.
    pub fn mu(&self) -> C {
        match (self.model.is_anisotropic(), &self.mu) {
            (true, Some(mu)) => mu.clone(),
            _ => C::one(),
        }
    }

    pub fn lambda(&self) -> C {
        let mu = self.mu();
        mu.clone() * mu
    }

    /// sin t, or 0 without the Stark term.
    pub fn sin_t(&self) -> C {
        match (self.model.has_stark(), &self.stark) {
            (true, Some(s)) => s.sin_t.clone(),
            _ => C::zero(),
        }
    }

    /// cos t, or 1 without the Stark term.
    pub fn cos_t(&self) -> C {
        match (self.model.has_stark(), &self.stark) {
            (true, Some(s)) => s.cos_t.clone(),
            _ => C::one(),
        }
    }

    /// Empty iff the parameters are admissible.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.model.is_anisotropic() {
            match &self.mu {
                None => out.push(Violation {
                    field: "mu",
                    rule: "anisotropic models require mu (lambda = mu^2)",
                }),
                Some(mu) if *mu <= C::zero() => out.push(Violation {
                    field: "mu",
                    rule: "mu > 0 required",
                }),
                _ => {}
            }
        }
        if self.model.has_stark() {
            match &self.stark {
                None => out.push(Violation {
                    field: "sin_t",
                    rule: "Stark models require (sin t, cos t)",
                }),
                Some(Stark { sin_t, cos_t }) => {
                    let norm = sin_t.clone() * sin_t.clone() + cos_t.clone() * cos_t.clone();
                    if !(norm - C::one()).is_negligible() {
                        out.push(Violation {
                            field: "cos_t",
                            rule: "s²+c²=1 required",
                        });
                    }
                    if *sin_t >= C::one() || *sin_t <= -C::one() {
                        out.push(Violation {
                            field: "sin_t",
                            rule: "|U| < 1 required",
                        });
                    }
                }
            }
        }
        out
    }

    pub fn check(&self) -> Result<(), ModelError> {
        let v = self.validate();
        if v.is_empty() {
            Ok(())
        } else {
            Err(ModelError::Invalid(v))
        }
    }

    pub fn hamiltonian(&self) -> Result<OperatorPolynomial<C>, ModelError> {
        build_hamiltonian(self)
    }

    pub fn epsilon_condition(&self, m: i64) -> Result<C, ModelError> {
        epsilon_condition(self.model, m, self)
    }

    pub fn with_g(&self, g: C) -> Self {
        ModelParams { g, ..self.clone() }
    }

    pub fn with_epsilon(&self, epsilon: C) -> Self {
        ModelParams {
            epsilon,
            ..self.clone()
        }
    }

    /// Sets ε to the degree-`m` condition value.
    pub fn on_condition(&self, m: i64) -> Result<Self, ModelError> {
        Ok(self.with_epsilon(self.epsilon_condition(m)?))
    }

    pub fn map<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> ModelParams<D> {
        ModelParams {
            model: self.model,
            g: f(&self.g),
            delta: f(&self.delta),
            epsilon: f(&self.epsilon),
            mu: self.mu.as_ref().map(&f),
            stark: self.stark.as_ref().map(|s| Stark {
                sin_t: f(&s.sin_t),
                cos_t: f(&s.cos_t),
            }),
        }
    }

    pub fn to_float(&self) -> ModelParams<f64> {
        self.map(|c| c.to_f64())
    }
}

/// Hermitian Hamiltonian of the selected model; grading 0 throughout.
pub fn build_hamiltonian<C: Coefficient>(
    params: &ModelParams<C>,
) -> Result<OperatorPolynomial<C>, ModelError> {
    params.check()?;
    let one = C::one();
    let s = params.sin_t();
    let lambda = params.lambda();
    let g = params.g.clone();
    let number = Monomial::new(0, 1, 1);
    let create = Monomial::new(0, 1, 0);
    let destroy = Monomial::new(0, 0, 1);

    let mut h = OperatorPolynomial::zero();
    h.add_term(0, 0, number, one.clone() + s.clone());
    h.add_term(0, 0, Monomial::ONE, params.delta.clone());
    h.add_term(1, 1, number, one - s);
    h.add_term(1, 1, Monomial::ONE, -params.delta.clone());

    h.add_term(0, 1, create, g.clone() * lambda.clone());
    h.add_term(0, 1, destroy, g.clone());
    h.add_term(0, 1, Monomial::ONE, params.epsilon.clone());
    h.add_term(1, 0, create, g.clone());
    h.add_term(1, 0, destroy, g * lambda);
    h.add_term(1, 0, Monomial::ONE, params.epsilon.clone());
    Ok(h)
}

/// ε at which the degree-|m| hidden symmetry exists; the sign of ε follows `m`.
///
/// `M/2`, `M√λ/(1+λ)`, `(M/2)cos t` and `M√λ cos t/(1+λ)` for the four models.
pub fn epsilon_condition<C: Coefficient>(
    model: ModelKind,
    m: i64,
    params: &ModelParams<C>,
) -> Result<C, ModelError> {
    if model.is_anisotropic() && params.mu.is_none() {
        return Err(ModelError::MissingAnisotropy { model });
    }
    if model.has_stark() && params.stark.is_none() {
        return Err(ModelError::MissingStark { model });
    }
    let m = C::from_int(m);
    let cos_t = if model.has_stark() {
        params
            .stark
            .as_ref()
            .map(|s| s.cos_t.clone())
            .unwrap_or_else(C::one)
    } else {
        C::one()
    };
    let anisotropy = if model.is_anisotropic() {
        let mu = params.mu.clone().unwrap_or_else(C::one);
        mu.clone() / (C::one() + mu.clone() * mu)
    } else {
        C::one() / C::from_int(2)
    };
    Ok(m * anisotropy * cos_t)
}

/// Serializable form with rationals as `"num/den"` strings and a lowercase model tag.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamsRecord {
    pub model: String,
    pub g: String,
    pub delta: String,
    pub epsilon: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sin_t: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cos_t: Option<String>,
}

impl From<&ModelParams<Rational>> for ParamsRecord {
    fn from(p: &ModelParams<Rational>) -> Self {
        ParamsRecord {
            model: p.model.name().to_string(),
            g: format_rational(&p.g),
            delta: format_rational(&p.delta),
            epsilon: format_rational(&p.epsilon),
            mu: p.mu.as_ref().map(format_rational),
            sin_t: p.stark.as_ref().map(|s| format_rational(&s.sin_t)),
            cos_t: p.stark.as_ref().map(|s| format_rational(&s.cos_t)),
        }
    }
}

impl TryFrom<&ParamsRecord> for ModelParams<Rational> {
    type Error = ModelError;

    fn try_from(r: &ParamsRecord) -> Result<Self, ModelError> {
        let model: ModelKind = r.model.parse()?;
        let opt = |s: &Option<String>| s.as_deref().map(parse_rational).transpose();
        let stark = match (opt(&r.sin_t)?, opt(&r.cos_t)?) {
            (Some(sin_t), Some(cos_t)) => Some(Stark { sin_t, cos_t }),
            (None, None) => None,
            _ => {
                return Err(ModelError::Invalid(vec![Violation {
                    field: "sin_t",
                    rule: "sin_t and cos_t must be given together",
                }]))
            }
        };
        Ok(ModelParams {
            model,
            g: parse_rational(&r.g)?,
            delta: parse_rational(&r.delta)?,
            epsilon: parse_rational(&r.epsilon)?,
            mu: opt(&r.mu)?,
            stark,
        })
    }
}
