//! Closed-form symmetry operators.
//!
//! Each entry is a `𝒫`-prefactored 2×2 matrix of boson polynomials, valid
//! when ε sits at the model's degree-M condition. Available pairs:
//! AQRM M ∈ {0, 1}, anisotropic AQRM M ∈ {1, 2}, ARSM M = 1 and
//! anisotropic ARSM M = 1. Negative M is served by conjugating the |M|
//! operator with the parity `σz 𝒫`, which maps H(ε) to H(−ε).

use thiserror::Error;

use crate::algebra::{Monomial, OperatorPolynomial};
use crate::models::{ModelError, ModelKind, ModelParams};
use crate::scalar::Coefficient;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CatalogError {
    #[error("no closed form for {model} at M = {m}")]
    NotCatalogued { model: ModelKind, m: i64 },
    #[error("epsilon is not at the M = {m} condition value for {model}")]
    OffCondition { model: ModelKind, m: i64 },
    #[error("the closed form for {model} at M = {m} needs g != 0")]
    ZeroCoupling { model: ModelKind, m: i64 },
    #[error(transparent)]
    Model(#[from] ModelError),
}

pub fn is_catalogued(model: ModelKind, m: i64) -> bool {
    matches!(
        (model, m.unsigned_abs()),
        (ModelKind::Aqrm, 0 | 1)
            | (ModelKind::AnisoAqrm, 1 | 2)
            | (ModelKind::Arsm, 1)
            | (ModelKind::AnisoArsm, 1)
    )
}

/// Every catalogued `(model, M)` pair with M ≥ 0.
pub fn entries() -> Vec<(ModelKind, i64)> {
    vec![
        (ModelKind::Aqrm, 0),
        (ModelKind::Aqrm, 1),
        (ModelKind::AnisoAqrm, 1),
        (ModelKind::AnisoAqrm, 2),
        (ModelKind::Arsm, 1),
        (ModelKind::AnisoArsm, 1),
    ]
}

/// The closed-form J at `params`, with the normalization prefactors included.
pub fn catalog_polynomial<C: Coefficient>(
    params: &ModelParams<C>,
    m: i64,
) -> Result<OperatorPolynomial<C>, CatalogError> {
    let model = params.model;
    if !is_catalogued(model, m) {
        return Err(CatalogError::NotCatalogued { model, m });
    }
    params.check()?;
    let expected = params.epsilon_condition(m)?;
    if !(params.epsilon.clone() - expected).is_negligible() {
        return Err(CatalogError::OffCondition { model, m });
    }
    if m < 0 {
        let mirrored = params.with_epsilon(-params.epsilon.clone());
        let j = catalog_polynomial(&mirrored, -m)?;
        let parity = parity::<C>();
        return Ok(parity.multiply(&j).multiply(&parity));
    }
    let needs_g = matches!((model, m), (ModelKind::Aqrm, 1));
    if needs_g && params.g.is_zero() {
        return Err(CatalogError::ZeroCoupling { model, m });
    }
    let k = Terms::new(params);
    Ok(match (model, m) {
        (ModelKind::Aqrm, 0) => parity(),
        (ModelKind::Aqrm, 1) => k.aqrm_1(),
        (ModelKind::AnisoAqrm, 1) => k.aniso_aqrm_1(),
        (ModelKind::AnisoAqrm, 2) => k.aniso_aqrm_2(),
        (ModelKind::Arsm, 1) => k.arsm_1(),
        (ModelKind::AnisoArsm, 1) => k.aniso_arsm_1(),
        _ => unreachable!("guarded by is_catalogued"),
    })
}

/// `P = σz 𝒫`.
pub fn parity<C: Coefficient>() -> OperatorPolynomial<C> {
    let mut p = OperatorPolynomial::zero();
    p.add_term(0, 0, Monomial::new(1, 0, 0), C::one());
    p.add_term(1, 1, Monomial::new(1, 0, 0), -C::one());
    p
}

const P1: Monomial = Monomial::new(1, 0, 0);
const P_AD: Monomial = Monomial::new(1, 1, 0);
const P_A: Monomial = Monomial::new(1, 0, 1);
const P_N: Monomial = Monomial::new(1, 1, 1);
const P_AD2: Monomial = Monomial::new(1, 2, 0);
const P_A2: Monomial = Monomial::new(1, 0, 2);

/// Parameter shorthands shared by the closed forms.
struct Terms<C> {
    g: C,
    delta: C,
    mu: C,
    lambda: C,
    s: C,
    c: C,
}

fn n<C: Coefficient>(v: i64) -> C {
    C::from_int(v)
}

fn pow<C: Coefficient>(x: &C, k: u32) -> C {
    (0..k).fold(C::one(), |acc, _| acc * x.clone())
}

impl<C: Coefficient> Terms<C> {
    fn new(p: &ModelParams<C>) -> Self {
        Terms {
            g: p.g.clone(),
            delta: p.delta.clone(),
            mu: p.mu(),
            lambda: p.lambda(),
            s: p.sin_t(),
            c: p.cos_t(),
        }
    }

    /// 𝒫 [[a†−a+2g+Δ/g, a†+a], [−a†−a, a−a†−2g+Δ/g]]
    fn aqrm_1(&self) -> OperatorPolynomial<C> {
        let g = &self.g;
        let shift = self.delta.clone() / g.clone();
        let two_g = n::<C>(2) * g.clone();
        let mut j = OperatorPolynomial::zero();
        j.add_term(0, 0, P_AD, n(1));
        j.add_term(0, 0, P_A, n(-1));
        j.add_term(0, 0, P1, two_g.clone() + shift.clone());
        j.add_term(0, 1, P_AD, n(1));
        j.add_term(0, 1, P_A, n(1));
        j.add_term(1, 0, P_AD, n(-1));
        j.add_term(1, 0, P_A, n(-1));
        j.add_term(1, 1, P_AD, n(-1));
        j.add_term(1, 1, P_A, n(1));
        j.add_term(1, 1, P1, shift - two_g);
        j
    }

    /// (1/(2(1+λ))) 𝒫 [[A₁⁺, B₁], [−B₁†, A₁⁻]]
    fn aniso_aqrm_1(&self) -> OperatorPolynomial<C> {
        let (g, d, mu, l) = (&self.g, &self.delta, &self.mu, &self.lambda);
        let one_l = C::one() + l.clone();
        let hop = n::<C>(2) * g.clone() * mu.clone() * one_l.clone();
        let shift = g.clone() * g.clone() * pow(&one_l, 3);
        let common = n::<C>(2) * d.clone() * one_l.clone() + l.clone() - C::one();
        let b = n::<C>(2) * g.clone() * one_l.clone();

        let mut j = OperatorPolynomial::zero();
        for (row, sign) in [(0usize, C::one()), (1, -C::one())] {
            j.add_term(row, row, P_AD, sign.clone() * hop.clone());
            j.add_term(row, row, P_A, -sign.clone() * hop.clone());
            j.add_term(row, row, P1, sign * shift.clone() + common.clone());
        }
        j.add_term(0, 1, P_AD, b.clone() * l.clone());
        j.add_term(0, 1, P_A, b.clone());
        j.add_term(1, 0, P_AD, -b.clone());
        j.add_term(1, 0, P_A, -b * l.clone());
        j.scale(&(C::one() / (n::<C>(2) * one_l)))
    }

    /// (1/(4(1+λ)²)) 𝒫 [[A₂⁺, B₂], [𝒫B₂†𝒫, A₂⁻]] with κ = Δλ + λ + Δ − 1,
    ///
    /// A₂± = ±4g²(1−λ)²(1+λ)² a†a ± 8g²λ(1+λ)²(a†² + a²)
    ///       ∓ 4g√λ(1+λ)(g²(1+λ)³ ± 2κ)(a − a†)
    ///       ± (1+λ)(g⁴(1+λ)⁵ + 4Δκ + 2g²(1+λ)((1−λ)² ± 2Δ(1+λ)²)),
    /// B₂  = 8g²(1−λ)√λ(1+λ)² a†a + 8g²√λ(1+λ)²(λa†² − a²) + 4g³(1+λ)⁴(λa† + a)
    ///       + 4√λ(g²(1−λ)(1+λ)² + 2κ).
    ///
    /// The lower-left entry conjugates B₂† by 𝒫, which flips its odd part and
    /// makes J Hermitian.
    fn aniso_aqrm_2(&self) -> OperatorPolynomial<C> {
        let (g, d, mu, l) = (&self.g, &self.delta, &self.mu, &self.lambda);
        let one = C::one();
        let one_l = one.clone() + l.clone();
        let one_ml = one.clone() - l.clone();
        let g2 = g.clone() * g.clone();
        let kappa = d.clone() * l.clone() + l.clone() + d.clone() - one.clone();

        let mut j = OperatorPolynomial::zero();
        for (row, sign) in [(0usize, one.clone()), (1, -one.clone())] {
            let number = sign.clone() * n::<C>(4) * g2.clone() * pow(&one_ml, 2) * pow(&one_l, 2);
            let squeeze = sign.clone() * n::<C>(8) * g2.clone() * l.clone() * pow(&one_l, 2);
            let hop = -sign.clone()
                * n::<C>(4)
                * g.clone()
                * mu.clone()
                * one_l.clone()
                * (g2.clone() * pow(&one_l, 3) + sign.clone() * n::<C>(2) * kappa.clone());
            let constant = sign.clone()
                * one_l.clone()
                * (g2.clone() * g2.clone() * pow(&one_l, 5)
                    + n::<C>(4) * d.clone() * kappa.clone()
                    + n::<C>(2)
                        * g2.clone()
                        * one_l.clone()
                        * (pow(&one_ml, 2)
                            + sign.clone() * n::<C>(2) * d.clone() * pow(&one_l, 2)));
            j.add_term(row, row, P_N, number);
            j.add_term(row, row, P_AD2, squeeze.clone());
            j.add_term(row, row, P_A2, squeeze);
            j.add_term(row, row, P_A, hop.clone());
            j.add_term(row, row, P_AD, -hop);
            j.add_term(row, row, P1, constant);
        }
        let b_number = n::<C>(8) * g2.clone() * one_ml * mu.clone() * pow(&one_l, 2);
        let b_squeeze = n::<C>(8) * g2.clone() * mu.clone() * pow(&one_l, 2);
        let b_hop = n::<C>(4) * g2.clone() * g.clone() * pow(&one_l, 4);
        let b_const = n::<C>(4)
            * mu.clone()
            * (g2 * (one.clone() - l.clone()) * pow(&one_l, 2) + n::<C>(2) * kappa);
        j.add_term(0, 1, P_N, b_number.clone());
        j.add_term(0, 1, P_AD2, b_squeeze.clone() * l.clone());
        j.add_term(0, 1, P_A2, -b_squeeze.clone());
        j.add_term(0, 1, P_AD, b_hop.clone() * l.clone());
        j.add_term(0, 1, P_A, b_hop.clone());
        j.add_term(0, 1, P1, b_const.clone());
        j.add_term(1, 0, P_N, b_number);
        j.add_term(1, 0, P_AD2, -b_squeeze.clone());
        j.add_term(1, 0, P_A2, b_squeeze * l.clone());
        j.add_term(1, 0, P_AD, -b_hop.clone());
        j.add_term(1, 0, P_A, -b_hop * l.clone());
        j.add_term(1, 0, P1, b_const);
        j.scale(&(one / (n::<C>(4) * pow(&one_l, 2))))
    }

    /// 𝒫 [[A, B], [C, D]] with
    /// A = s(1+s)a†a + gc(a†−a) + 2g² + Δ(1+s), B = g(a†+a) + sin2t/4,
    /// C = −g(a+a†) + sin2t/4, D = s(1−s)a†a − gc(a†−a) − (2g² − Δ(1−s)).
    fn arsm_1(&self) -> OperatorPolynomial<C> {
        let (g, d, s, c) = (&self.g, &self.delta, &self.s, &self.c);
        let one = C::one();
        let g2 = g.clone() * g.clone();
        let quarter_sin_2t = s.clone() * c.clone() / n::<C>(2);
        let hop = g.clone() * c.clone();
        let mut j = OperatorPolynomial::zero();
        j.add_term(0, 0, P_N, s.clone() * (one.clone() + s.clone()));
        j.add_term(0, 0, P_AD, hop.clone());
        j.add_term(0, 0, P_A, -hop.clone());
        j.add_term(
            0,
            0,
            P1,
            n::<C>(2) * g2.clone() + d.clone() * (one.clone() + s.clone()),
        );
        j.add_term(0, 1, P_AD, g.clone());
        j.add_term(0, 1, P_A, g.clone());
        j.add_term(0, 1, P1, quarter_sin_2t.clone());
        j.add_term(1, 0, P_AD, -g.clone());
        j.add_term(1, 0, P_A, -g.clone());
        j.add_term(1, 0, P1, quarter_sin_2t);
        j.add_term(1, 1, P_N, s.clone() * (one.clone() - s.clone()));
        j.add_term(1, 1, P_AD, -hop.clone());
        j.add_term(1, 1, P_A, hop);
        j.add_term(1, 1, P1, -(n::<C>(2) * g2 - d.clone() * (one - s.clone())));
        j
    }

    /// 𝒫 [[s(1+s)a†a + gμc(a†−a) + Ā₊, g(λa†+a) + μ sin2t/(2(1+λ))],
    ///    [−g(a†+λa) + μ sin2t/(2(1+λ)), s(1−s)a†a − gμc(a†−a) + Ā₋]]
    /// with Ā± = ¼((λ−1)/(1+λ)(1+cos2t) ± 2g²(1+λ)² + 4Δ(1±s)).
    fn aniso_arsm_1(&self) -> OperatorPolynomial<C> {
        let (g, d, mu, l, s, c) = (
            &self.g,
            &self.delta,
            &self.mu,
            &self.lambda,
            &self.s,
            &self.c,
        );
        let one = C::one();
        let one_l = one.clone() + l.clone();
        let cos_2t = c.clone() * c.clone() - s.clone() * s.clone();
        let sin_2t = n::<C>(2) * s.clone() * c.clone();
        let off_const = mu.clone() * sin_2t / (n::<C>(2) * one_l.clone());
        let hop = g.clone() * mu.clone() * c.clone();
        let bar = |sign: C| {
            ((l.clone() - one.clone()) / one_l.clone() * (one.clone() + cos_2t.clone())
                + sign.clone() * n::<C>(2) * g.clone() * g.clone() * one_l.clone() * one_l.clone()
                + n::<C>(4) * d.clone() * (one.clone() + sign * s.clone()))
                / n::<C>(4)
        };
        let mut j = OperatorPolynomial::zero();
        j.add_term(0, 0, P_N, s.clone() * (one.clone() + s.clone()));
        j.add_term(0, 0, P_AD, hop.clone());
        j.add_term(0, 0, P_A, -hop.clone());
        j.add_term(0, 0, P1, bar(one.clone()));
        j.add_term(0, 1, P_AD, g.clone() * l.clone());
        j.add_term(0, 1, P_A, g.clone());
        j.add_term(0, 1, P1, off_const.clone());
        j.add_term(1, 0, P_AD, -g.clone());
        j.add_term(1, 0, P_A, -g.clone() * l.clone());
        j.add_term(1, 0, P1, off_const);
        j.add_term(1, 1, P_N, s.clone() * (one.clone() - s.clone()));
        j.add_term(1, 1, P_AD, -hop.clone());
        j.add_term(1, 1, P_A, hop);
        j.add_term(1, 1, P1, bar(-C::one()));
        j
    }
}
