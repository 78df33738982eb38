//! Derivation of J_M from `[J_M, H] = 0`.
//!
//! The ansatz places an unknown constant on `𝒫 (a†)^i a^j` for every
//! matrix entry and every `0 ≤ i, j ≤ M`. Expanding the commutator with H
//! is linear in those unknowns, so each `(entry, monomial)` coefficient of
//! the result is one row of a homogeneous system whose nullspace is the
//! space of symmetry operators inside the ansatz.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::algebra::{Entry, Monomial, OperatorPolynomial};
use crate::catalog::{self, CatalogError};
use crate::exact;
use crate::models::{ModelError, ModelParams};
use crate::scalar::Rational;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
}

/// The coefficient of `𝒫 (a†)^creation a^annihilation` in one matrix entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Unknown {
    pub entry: Entry,
    pub creation: u32,
    pub annihilation: u32,
}

impl Unknown {
    pub fn monomial(&self) -> Monomial {
        Monomial::new(1, self.creation, self.annihilation)
    }

    /// `a`, `b`, `c` or `d` for the four matrix entries.
    pub fn label(&self) -> String {
        let letter = ['a', 'b', 'c', 'd'][self.entry.index()];
        format!("{letter}_{}{}", self.creation, self.annihilation)
    }
}

#[derive(Debug, Clone)]
pub struct AnsatzSystem {
    pub degree: u32,
    pub unknowns: Vec<Unknown>,
    /// Row labels: the `(entry, monomial)` coefficient each row constrains.
    pub rows: Vec<(Entry, Monomial)>,
    pub matrix: Vec<Vec<Rational>>,
}

/// Skeleton with `4(M+1)²` unknowns and no constraints yet.
pub fn build_ansatz(degree: u32) -> AnsatzSystem {
    let mut unknowns = Vec::with_capacity(4 * (degree as usize + 1).pow(2));
    for entry in Entry::ALL {
        for creation in 0..=degree {
            for annihilation in 0..=degree {
                unknowns.push(Unknown {
                    entry,
                    creation,
                    annihilation,
                });
            }
        }
    }
    AnsatzSystem {
        degree,
        unknowns,
        rows: Vec::new(),
        matrix: Vec::new(),
    }
}

/// Fills in the constraint matrix of `[J, H] = 0` at `params` (ε as given).
pub fn assemble(
    mut system: AnsatzSystem,
    params: &ModelParams<Rational>,
) -> Result<AnsatzSystem, SolverError> {
    let h = params.hamiltonian()?;
    let mut rows: BTreeMap<(Entry, Monomial), Vec<Rational>> = BTreeMap::new();
    let cols = system.unknowns.len();
    for (col, u) in system.unknowns.iter().enumerate() {
        let basis =
            OperatorPolynomial::term(u.entry.row, u.entry.col, u.monomial(), Rational::one());
        for (e, m, c) in basis.commutator(&h).terms() {
            rows.entry((e, *m))
                .or_insert_with(|| vec![Rational::zero(); cols])[col] = c.clone();
        }
    }
    let (labels, matrix) = rows.into_iter().unzip();
    system.rows = labels;
    system.matrix = matrix;
    Ok(system)
}

impl AnsatzSystem {
    pub fn rank(&self) -> usize {
        exact::rank(&self.matrix, self.unknowns.len())
    }

    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        exact::nullspace(&self.matrix, self.unknowns.len())
    }

    /// The operator `𝒫 Σ v_u (a†)^i a^j` placed per entry.
    pub fn polynomial(&self, v: &[Rational]) -> OperatorPolynomial<Rational> {
        let mut j = OperatorPolynomial::zero();
        for (u, c) in self.unknowns.iter().zip(v) {
            j.add_term(u.entry.row, u.entry.col, u.monomial(), c.clone());
        }
        j
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Derived,
    Catalog,
}

impl Provenance {
    pub fn name(self) -> &'static str {
        match self {
            Provenance::Derived => "derived",
            Provenance::Catalog => "catalog",
        }
    }
}

/// Which coefficient fixes the overall scale, and its value.
#[derive(Debug, Clone, PartialEq)]
pub struct Normalization {
    pub entry: Entry,
    pub monomial: Monomial,
    pub value: Rational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryOperator {
    pub j: OperatorPolynomial<Rational>,
    pub m: i64,
    pub params: ModelParams<Rational>,
    pub provenance: Provenance,
    pub normalization: Normalization,
}

impl SymmetryOperator {
    pub fn degree(&self) -> u32 {
        self.m.unsigned_abs() as u32
    }

    /// `J† − J`; reported, never asserted.
    pub fn hermiticity_defect(&self) -> OperatorPolynomial<Rational> {
        &self.j.adjoint() - &self.j
    }

    /// `r · J` with the normalization record rescaled to match.
    pub fn rescaled(&self, r: &Rational) -> SymmetryOperator {
        SymmetryOperator {
            j: self.j.scale(r),
            normalization: Normalization {
                value: &self.normalization.value * r,
                ..self.normalization.clone()
            },
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[allow(clippy::large_enum_variant)]
pub enum SolveOutcome {
    Unique(SymmetryOperator),
    NoSymmetry,
    /// Nullspace dimension above one: every basis vector, unresolved.
    Degenerate(Vec<OperatorPolynomial<Rational>>),
}

impl SolveOutcome {
    pub fn nullity(&self) -> usize {
        match self {
            SolveOutcome::Unique(_) => 1,
            SolveOutcome::NoSymmetry => 0,
            SolveOutcome::Degenerate(b) => b.len(),
        }
    }

    pub fn unique(self) -> Option<SymmetryOperator> {
        match self {
            SolveOutcome::Unique(j) => Some(j),
            _ => None,
        }
    }
}

/// Solves for J_|m| at `params` without assuming the ε-condition holds.
pub fn solve(params: &ModelParams<Rational>, m: i64) -> Result<SolveOutcome, SolverError> {
    let degree = m.unsigned_abs() as u32;
    let system = assemble(build_ansatz(degree), params)?;
    let mut basis = system.nullspace();
    match basis.len() {
        0 => Ok(SolveOutcome::NoSymmetry),
        1 => {
            let j = system.polynomial(&basis.remove(0));
            let (j, normalization) = normalize(j, params, m);
            Ok(SolveOutcome::Unique(SymmetryOperator {
                j,
                m,
                params: params.clone(),
                provenance: Provenance::Derived,
                normalization,
            }))
        }
        _ => Ok(SolveOutcome::Degenerate(
            basis.iter().map(|v| system.polynomial(v)).collect(),
        )),
    }
}

/// Pins the coefficient carrying the closed form's leading term to the closed
/// form's value when one exists; otherwise pins the first nonzero coefficient
/// (canonical order) to 1.
fn normalize(
    j: OperatorPolynomial<Rational>,
    params: &ModelParams<Rational>,
    m: i64,
) -> (OperatorPolynomial<Rational>, Normalization) {
    if let Ok(reference) = catalog::catalog_polynomial(params, m) {
        if let Some((e, mono, target)) = reference.terms().next() {
            if let Some(current) = j.coefficient(e.row, e.col, mono) {
                let r = target / current;
                let record = Normalization {
                    entry: e,
                    monomial: *mono,
                    value: target.clone(),
                };
                return (j.scale(&r), record);
            }
        }
    }
    let (e, mono, current) = j
        .terms()
        .next()
        .map(|(e, m, c)| (e, *m, c.clone()))
        .expect("nullspace vectors are nonzero");
    let record = Normalization {
        entry: e,
        monomial: mono,
        value: Rational::one(),
    };
    (j.scale(&(Rational::one() / current)), record)
}

/// The closed form packaged as a [`SymmetryOperator`].
pub fn catalog(params: &ModelParams<Rational>, m: i64) -> Result<SymmetryOperator, SolverError> {
    let j = catalog::catalog_polynomial(params, m)?;
    let (e, mono, value) = j
        .terms()
        .next()
        .map(|(e, m, c)| (e, *m, c.clone()))
        .expect("closed forms are nonzero");
    Ok(SymmetryOperator {
        j,
        m,
        params: params.clone(),
        provenance: Provenance::Catalog,
        normalization: Normalization {
            entry: e,
            monomial: mono,
            value,
        },
    })
}

/// Catalog operator if one exists for `(model, m)`, else a derived one.
pub fn symmetry_operator(
    params: &ModelParams<Rational>,
    m: i64,
) -> Result<SolveOutcome, SolverError> {
    if catalog::is_catalogued(params.model, m) {
        match catalog(params, m) {
            Ok(j) => return Ok(SolveOutcome::Unique(j)),
            Err(SolverError::Catalog(CatalogError::OffCondition { .. })) => {}
            Err(SolverError::Catalog(CatalogError::ZeroCoupling { .. })) => {}
            Err(e) => return Err(e),
        }
    }
    solve(params, m)
}
