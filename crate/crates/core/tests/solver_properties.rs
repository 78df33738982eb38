use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use symforge::casimir;
use symforge::catalog::{self, parity};
use symforge::solver::{self, SolveOutcome};
use symforge::{rat, ModelKind, ModelParams, OperatorPolynomial, Rational};

const CIRCLE: [(i64, i64, i64); 4] = [(3, 4, 5), (5, 12, 13), (8, 15, 17), (7, 24, 25)];

fn random_params(rng: &mut ChaCha8Rng, model: ModelKind) -> ModelParams<Rational> {
    let g = rat(rng.gen_range(1..=9), rng.gen_range(2..=7));
    let d = rat(
        [-1, 1][rng.gen_range(0..2)] * rng.gen_range(1..=6),
        rng.gen_range(1..=5),
    );
    let mu = rat(rng.gen_range(1..=7), rng.gen_range(1..=4));
    let (a, b, h) = CIRCLE[rng.gen_range(0..CIRCLE.len())];
    let (s, c) = if rng.gen_bool(0.5) {
        (rat(a, h), rat(b, h))
    } else {
        (rat(-a, h), rat(b, h))
    };
    let e = rat(0, 1);
    match model {
        ModelKind::Aqrm => ModelParams::aqrm(g, d, e),
        ModelKind::AnisoAqrm => ModelParams::aniso_aqrm(g, d, e, mu),
        ModelKind::Arsm => ModelParams::arsm(g, d, e, s, c),
        ModelKind::AnisoArsm => ModelParams::aniso_arsm(g, d, e, mu, s, c),
    }
}

fn sigma_z() -> OperatorPolynomial<Rational> {
    OperatorPolynomial::sigma_z()
}

#[test]
fn on_condition_nullity_one_off_condition_zero() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for model in ModelKind::ALL {
        for m in [1, 2] {
            for _ in 0..2 {
                let p = random_params(&mut rng, model).on_condition(m).unwrap();
                let on = solver::solve(&p, m).unwrap();
                assert_eq!(on.nullity(), 1, "{model} M={m} at {p:?}");
                let off = p.with_epsilon(&p.epsilon + rat(1, 7));
                assert_eq!(solver::solve(&off, m).unwrap(), SolveOutcome::NoSymmetry);
            }
        }
    }
}

/// With Δ = 0 the degree-2 ansatz picks up a second solution.
#[test]
fn unbiased_splitting_is_degenerate_at_second_order() {
    let p = ModelParams::aqrm(rat(5, 4), rat(0, 1), rat(1, 1));
    match solver::solve(&p, 2).unwrap() {
        SolveOutcome::Degenerate(basis) => {
            assert_eq!(basis.len(), 2);
            let h = p.hamiltonian().unwrap();
            assert!(basis.iter().all(|b| b.commutator(&h).is_zero()));
        }
        other => panic!("expected a degenerate nullspace, got {other:?}"),
    }
}

#[test]
fn derived_operators_are_graded_and_bounded() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for model in ModelKind::ALL {
        for m in [1, 2] {
            let p = random_params(&mut rng, model).on_condition(m).unwrap();
            let j = solver::solve(&p, m).unwrap().unique().unwrap();
            assert_eq!(j.j.gradings(), vec![1]);
            for (_, mono, _) in j.j.terms() {
                assert!(mono.creation <= m as u32 && mono.annihilation <= m as u32);
            }
            assert!(j.j.commutator(&p.hamiltonian().unwrap()).is_zero());
        }
    }
}

#[test]
fn derived_is_proportional_to_catalog() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for (model, m) in catalog::entries() {
        for _ in 0..3 {
            let p = random_params(&mut rng, model).on_condition(m).unwrap();
            let derived = solver::solve(&p, m).unwrap().unique().unwrap();
            let closed = catalog::catalog_polynomial(&p, m).unwrap();
            assert!(derived.j.ratio_to(&closed).is_some(), "{model} M={m}");
        }
    }
}

/// `P = σz𝒫` maps H(ε) to H(−ε), so it relates the two symmetry operators;
/// σz alone also flips g and does not.
#[test]
fn epsilon_reflection_is_parity_conjugation() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for model in ModelKind::ALL {
        for m in [1, 2] {
            let p = random_params(&mut rng, model).on_condition(m).unwrap();
            let mirrored = p.with_epsilon(-p.epsilon.clone());
            let j = solver::solve(&p, m).unwrap().unique().unwrap().j;
            let j_minus = solver::solve(&mirrored, -m).unwrap().unique().unwrap().j;
            let big_p = parity::<Rational>();
            let conj = big_p.multiply(&j_minus).multiply(&big_p);
            assert!(conj.ratio_to(&j).is_some(), "{model} M={m}");
            let sz = sigma_z();
            let h = p.hamiltonian().unwrap();
            let hm = mirrored.hamiltonian().unwrap();
            assert_eq!(big_p.multiply(&hm).multiply(&big_p), h);
            assert_ne!(sz.multiply(&hm).multiply(&sz), h);
        }
    }
}

#[test]
fn negative_m_catalog_commutes() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for (model, m) in catalog::entries().into_iter().filter(|e| e.1 > 0) {
        let p = random_params(&mut rng, model).on_condition(-m).unwrap();
        let j = catalog::catalog_polynomial(&p, -m).unwrap();
        assert!(j.commutator(&p.hamiltonian().unwrap()).is_zero());
    }
}

#[test]
fn rescaling_squares_the_relation() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for (model, m) in [
        (ModelKind::Aqrm, 1),
        (ModelKind::AnisoAqrm, 1),
        (ModelKind::Arsm, 1),
    ] {
        let p = random_params(&mut rng, model).on_condition(m).unwrap();
        let j = solver::catalog(&p, m).unwrap();
        let rel = casimir::relation(&j).unwrap();
        let r = rat(rng.gen_range(-9..=9).max(1), rng.gen_range(1..=9));
        let scaled = casimir::relation(&j.rescaled(&r)).unwrap();
        let r2 = &r * &r;
        let expected: Vec<Rational> = rel.coefficients.iter().map(|c| c * &r2).collect();
        assert_eq!(scaled.coefficients, expected);
    }
}

#[test]
fn squares_are_even() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for (model, m) in catalog::entries() {
        let p = random_params(&mut rng, model).on_condition(m).unwrap();
        let j = solver::catalog(&p, m).unwrap();
        assert_eq!(casimir::square(&j).gradings(), vec![0]);
    }
}

#[test]
fn epsilon_conditions_vanish_at_m_zero() {
    let mut rng = ChaCha8Rng::seed_from_u64(18);
    for model in ModelKind::ALL {
        let p = random_params(&mut rng, model);
        assert_eq!(p.epsilon_condition(0).unwrap(), rat(0, 1));
    }
}

#[test]
fn hamiltonian_reduction_lattice() {
    let (g, d, e) = (rat(2, 3), rat(5, 7), rat(1, 3));
    let (s, c) = (rat(5, 13), rat(12, 13));
    let h = |p: ModelParams<Rational>| p.hamiltonian().unwrap();
    let mu = rat(3, 2);
    assert_eq!(
        h(ModelParams::aniso_arsm(
            g.clone(),
            d.clone(),
            e.clone(),
            rat(1, 1),
            s.clone(),
            c.clone()
        )),
        h(ModelParams::arsm(
            g.clone(),
            d.clone(),
            e.clone(),
            s.clone(),
            c.clone()
        ))
    );
    assert_eq!(
        h(ModelParams::aniso_arsm(
            g.clone(),
            d.clone(),
            e.clone(),
            mu.clone(),
            rat(0, 1),
            rat(1, 1)
        )),
        h(ModelParams::aniso_aqrm(g.clone(), d.clone(), e.clone(), mu))
    );
    assert_eq!(
        h(ModelParams::aniso_arsm(
            g.clone(),
            d.clone(),
            e.clone(),
            rat(1, 1),
            rat(0, 1),
            rat(1, 1)
        )),
        h(ModelParams::aqrm(g, d, e))
    );
}

#[test]
fn hermiticity_is_reported() {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    for (model, m) in catalog::entries() {
        let p = random_params(&mut rng, model).on_condition(m).unwrap();
        let j = solver::catalog(&p, m).unwrap();
        let defect = j.hermiticity_defect();
        eprintln!("{model} M={m}: J† − J has {} terms", defect.len());
    }
}
