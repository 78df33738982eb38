//! `J² = Σ_k c_k H^k`, fitted and certified in exact arithmetic.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::algebra::{Entry, Monomial, OperatorPolynomial};
use crate::exact::{self, LinearSolution};
use crate::models::{ModelKind, ModelParams};
use crate::scalar::Rational;
use crate::solver::SymmetryOperator;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CasimirError {
    #[error("J² is not a polynomial of degree <= {max_degree} in H (residual has {} terms)", residual.len())]
    FitFailure {
        max_degree: usize,
        coefficients: Vec<Rational>,
        residual: Box<OperatorPolynomial<Rational>>,
    },
    #[error("cannot rescale: {0} is not the square of a rational")]
    NotASquare(Rational),
}

/// Coefficients of `J² = Σ c_k H^k` with the certifying residual.
#[derive(Debug, Clone, PartialEq)]
pub struct HPolynomialRelation {
    /// `c_0 ..= c_D`, with `c_D != 0`.
    pub coefficients: Vec<Rational>,
    pub residual: OperatorPolynomial<Rational>,
    pub params: ModelParams<Rational>,
}

impl HPolynomialRelation {
    pub fn degree(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }

    pub fn is_certified(&self) -> bool {
        self.residual.is_zero()
    }

    pub fn evaluate(&self, energy: f64) -> f64 {
        self.coefficients.iter().rev().fold(0.0, |acc, c| {
            acc * energy + crate::scalar::Coefficient::to_f64(c)
        })
    }
}

pub fn square(j: &SymmetryOperator) -> OperatorPolynomial<Rational> {
    j.j.multiply(&j.j)
}

/// `H^0 ..= H^max` computed once and reused across fits.
#[derive(Debug, Clone)]
pub struct HPowers {
    powers: Vec<OperatorPolynomial<Rational>>,
}

impl HPowers {
    pub fn new(h: &OperatorPolynomial<Rational>, max_degree: usize) -> Self {
        let mut powers = vec![OperatorPolynomial::identity()];
        for k in 1..=max_degree {
            let next = powers[k - 1].multiply(h);
            powers.push(next);
        }
        HPowers { powers }
    }

    pub fn max_degree(&self) -> usize {
        self.powers.len() - 1
    }

    pub fn combine(&self, coefficients: &[Rational]) -> OperatorPolynomial<Rational> {
        coefficients
            .iter()
            .zip(&self.powers)
            .fold(OperatorPolynomial::zero(), |acc, (c, p)| &acc + &p.scale(c))
    }
}

/// Matches `jsq` against `Σ_{k ≤ max_degree} c_k H^k` coefficient by coefficient.
pub fn fit(
    jsq: &OperatorPolynomial<Rational>,
    powers: &HPowers,
    params: &ModelParams<Rational>,
) -> Result<HPolynomialRelation, CasimirError> {
    let cols = powers.powers.len();
    let mut keys: Vec<(Entry, Monomial)> = jsq.terms().map(|(e, m, _)| (e, *m)).collect();
    for p in &powers.powers {
        keys.extend(p.terms().map(|(e, m, _)| (e, *m)));
    }
    keys.sort_unstable();
    keys.dedup();

    let matrix: Vec<Vec<Rational>> = keys
        .iter()
        .map(|(e, m)| {
            powers
                .powers
                .iter()
                .map(|p| {
                    p.coefficient(e.row, e.col, m)
                        .cloned()
                        .unwrap_or_else(Rational::zero)
                })
                .collect()
        })
        .collect();
    let rhs: Vec<Rational> = keys
        .iter()
        .map(|(e, m)| {
            jsq.coefficient(e.row, e.col, m)
                .cloned()
                .unwrap_or_else(Rational::zero)
        })
        .collect();

    let mut coefficients = match exact::solve(&matrix, &rhs, cols) {
        LinearSolution::Solved { x, .. } => x,
        LinearSolution::Inconsistent => {
            // Report the best consistent sub-fit: the rows that pin each power.
            let partial = least_rows_fit(&matrix, &rhs, cols);
            let residual = jsq - &powers.combine(&partial);
            return Err(CasimirError::FitFailure {
                max_degree: powers.max_degree(),
                coefficients: partial,
                residual: Box::new(residual),
            });
        }
    };
    while coefficients.len() > 1 && coefficients.last().is_some_and(Zero::is_zero) {
        coefficients.pop();
    }
    let residual = jsq - &powers.combine(&coefficients);
    Ok(HPolynomialRelation {
        coefficients,
        residual,
        params: params.clone(),
    })
}

/// Solves using only the rows whose addition keeps the system consistent.
fn least_rows_fit(matrix: &[Vec<Rational>], rhs: &[Rational], cols: usize) -> Vec<Rational> {
    let mut kept_rows: Vec<Vec<Rational>> = Vec::new();
    let mut kept_rhs: Vec<Rational> = Vec::new();
    for (row, b) in matrix.iter().zip(rhs) {
        kept_rows.push(row.clone());
        kept_rhs.push(b.clone());
        if exact::solve(&kept_rows, &kept_rhs, cols) == LinearSolution::Inconsistent {
            kept_rows.pop();
            kept_rhs.pop();
        }
    }
    match exact::solve(&kept_rows, &kept_rhs, cols) {
        LinearSolution::Solved { x, .. } => x,
        LinearSolution::Inconsistent => vec![Rational::zero(); cols],
    }
}

/// Squares J and fits against powers of H up to `2|M| + 1`.
pub fn relation(j: &SymmetryOperator) -> Result<HPolynomialRelation, CasimirError> {
    let h = j
        .params
        .hamiltonian()
        .expect("symmetry operators carry admissible parameters");
    let powers = HPowers::new(&h, default_max_degree(j.m));
    fit(&square(j), &powers, &j.params)
}

pub fn default_max_degree(m: i64) -> usize {
    2 * m.unsigned_abs() as usize + 1
}

/// Degree of the J² relation: |M|, doubled by a nonzero Stark term.
pub fn expected_degree(model: ModelKind, m: i64, sin_t_is_zero: bool) -> usize {
    let m = m.unsigned_abs() as usize;
    if model.has_stark() && !sin_t_is_zero {
        2 * m
    } else {
        m
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DegreeCheck {
    pub expected: usize,
    pub observed: usize,
}

impl DegreeCheck {
    pub fn pass(&self) -> bool {
        self.expected == self.observed
    }
}

pub fn degree_law_check(model: ModelKind, m: i64, relation: &HPolynomialRelation) -> DegreeCheck {
    DegreeCheck {
        expected: expected_degree(model, m, relation.params.sin_t().is_zero()),
        observed: relation.degree(),
    }
}

/// Rescales J so that the leading coefficient of its relation becomes `target`.
///
/// Needs `target / c_D` to be the square of a rational; the positive root is used.
pub fn normalize_leading(
    j: &SymmetryOperator,
    relation: &HPolynomialRelation,
    target: &Rational,
) -> Result<(SymmetryOperator, HPolynomialRelation), CasimirError> {
    let lead = relation
        .coefficients
        .last()
        .expect("relations have at least one coefficient");
    let ratio = target / lead;
    let r = rational_sqrt(&ratio).ok_or(CasimirError::NotASquare(ratio.clone()))?;
    let scaled = j.rescaled(&r);
    let r2 = &r * &r;
    let rel = HPolynomialRelation {
        coefficients: relation.coefficients.iter().map(|c| c * &r2).collect(),
        residual: relation.residual.scale(&r2),
        params: relation.params.clone(),
    };
    Ok((scaled, rel))
}

pub fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let root = |n: &BigInt| {
        let r = n.sqrt();
        (&r * &r == *n).then_some(r)
    };
    Some(Rational::new(root(q.numer())?, root(q.denom())?))
}

/// The closed-form relations, as coefficient lists `c_0, c_1, ...`.
pub mod known {
    use super::*;
    use crate::scalar::Coefficient;

    fn n(v: i64) -> Rational {
        Rational::from_int(v)
    }

    fn pow(x: &Rational, k: u32) -> Rational {
        (0..k).fold(Rational::one(), |acc, _| acc * x)
    }

    /// `J² = 4H + 4g² + Δ²/g² + 2` for the AQRM at ε = 1/2.
    pub fn aqrm_1(p: &ModelParams<Rational>) -> Vec<Rational> {
        let (g, d) = (&p.g, &p.delta);
        let c0 = n(4) * g * g + d * d / (g * g) + n(2);
        vec![c0, n(4)]
    }

    /// `J₁² = g²(1+λ)²H + g²(1+λ)²/2 + g⁴(1+λ)⁴/4 + (Δ − (1−λ)/(2(1+λ)))²`.
    pub fn aniso_aqrm_1(p: &ModelParams<Rational>) -> Vec<Rational> {
        let (g, d) = (&p.g, &p.delta);
        let l = p.lambda();
        let one_l = Rational::one() + &l;
        let c1 = g * g * pow(&one_l, 2);
        let shift = d - (Rational::one() - &l) / (n(2) * &one_l);
        let c0 = &c1 / n(2) + pow(g, 4) * pow(&one_l, 4) / n(4) + &shift * &shift;
        vec![c0, c1]
    }

    /// `J₁² = sin²t H² + (2Δ sin t + 4g²)H + C`,
    /// `C = 4g²Δ sin t + g² cos 2t + Δ² + 4g⁴ + g²`.
    pub fn arsm_1(p: &ModelParams<Rational>) -> Vec<Rational> {
        let (g, d) = (&p.g, &p.delta);
        let (s, c) = (p.sin_t(), p.cos_t());
        let g2 = g * g;
        let cos_2t = &c * &c - &s * &s;
        let c2 = &s * &s;
        let c1 = n(2) * d * &s + n(4) * &g2;
        let c0 = n(4) * &g2 * d * &s + &g2 * cos_2t + d * d + n(4) * &g2 * &g2 + &g2;
        vec![c0, c1, c2]
    }

    /// The degree-4 relation for the ARSM J₂, normalised so `c₄ = sin⁴t cos²t`.
    ///
    /// `c₂ = cos²t (sin²t(g² + 8g⁴ + 6Δ² + cos⁴t) + g²(sin t(sin 3t − 4Δ(cos 2t − 5)) + 16g²))`,
    /// which reduces to `16g⁴` at sin t = 0 as the degree-2 AQRM relation requires.
    pub fn arsm_2(p: &ModelParams<Rational>) -> Vec<Rational> {
        let (g, d) = (&p.g, &p.delta);
        let (s, c) = (p.sin_t(), p.cos_t());
        let g2 = g * g;
        let c2t = &c * &c;
        let cos_2t = &c2t - &s * &s;
        let sin_2t = n(2) * &s * &c;
        let sin_3t = n(3) * &s - n(4) * pow(&s, 3);
        let c4t = pow(&c, 4);

        let k4 = pow(&s, 4) * &c2t;
        let k3 = &sin_2t * &sin_2t * (n(2) * &g2 + d * &s);
        let k2 = &c2t
            * (&s * &s * (&g2 + n(8) * pow(g, 4) + n(6) * d * d + &c4t)
                + &g2 * (&s * (&sin_3t - n(4) * d * (&cos_2t - n(5))) + n(16) * &g2));
        let k1 = n(2)
            * &c2t
            * (d * &s * (&c4t + n(2) * d * d)
                + n(4) * pow(g, 4) * (n(6) * d * &s + &cos_2t + n(1))
                + &g2 * d * (&sin_3t + &s - n(4) * d * &cos_2t + n(8) * d)
                + n(16) * pow(g, 6));
        let k0 = &c2t
            * (d * d * &c4t
                + n(8) * pow(g, 6) * (n(4) * d * &s + &cos_2t + n(1))
                + n(2) * &g2 * d * d * (n(4) * d * &s + &cos_2t + n(1))
                + n(4) * pow(g, 4) * d * (&sin_3t + &s - n(2) * d * &cos_2t + n(4) * d)
                + pow(d, 4)
                + n(16) * pow(g, 8));
        vec![k0, k1, k2, k3, k4]
    }
}
