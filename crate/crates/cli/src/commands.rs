use std::fs;
use std::path::Path;

use symforge::fock::{self, CrossingKind, FockError, GridSpec, TruncationSpec};
use symforge::solver::{self, SolveOutcome};
use symforge::verify::{self, SuiteParams};
use symforge::{ModelKind, ModelParams, Rational};

use crate::config::{Kind, RunConfig};
use crate::{exit, Failure};

/// Largest |M| tried when inferring which J labels a sweep.
const MAX_INFERRED_M: i64 = 4;

fn write(dir: &Path, name: &str, contents: &str) -> Result<(), Failure> {
    let path = dir.join(name);
    fs::write(&path, contents)
        .map_err(|e| Failure::invalid(format!("cannot write {}: {e}", path.display())))
}

pub fn execute(config: &RunConfig) -> Result<u8, Failure> {
    let (resolved, explicit) = config.resolve()?;
    let out = &resolved.out;
    fs::create_dir_all(out)
        .map_err(|e| Failure::invalid(format!("cannot create {}: {e}", out.display())))?;
    write(out, "resolved.toml", &explicit.to_toml())?;
    match resolved.kind {
        Kind::Derive { params, m } => derive(&params, m, out),
        Kind::Verify {
            suite,
            model,
            m,
            perturb,
        } => verify(&suite, model, m, perturb, out),
        Kind::Sweep {
            params,
            m,
            spec,
            grid,
        } => sweep(
            &params,
            m,
            &spec,
            &grid,
            out,
            resolved.command == crate::config::Command::Crossings,
        ),
    }
}

fn derive(params: &ModelParams<Rational>, m: i64, out: &Path) -> Result<u8, Failure> {
    match solver::solve(params, m).map_err(|e| Failure::invalid(e.to_string()))? {
        SolveOutcome::Unique(j) => {
            write(out, "j.json", &j.to_json())?;
            println!("J_{m} = {}", j.j);
            Ok(exit::OK)
        }
        SolveOutcome::NoSymmetry => Err(Failure::new(
            exit::NO_SYMMETRY,
            format!(
                "no J_{m} commutes with H at epsilon = {}",
                symforge::scalar::format_rational(&params.epsilon)
            ),
        )),
        SolveOutcome::Degenerate(basis) => {
            let records: Vec<_> = basis.iter().map(|b| b.to_record()).collect();
            let json = serde_json::to_string_pretty(&records).expect("records serialize");
            write(out, "nullspace.json", &json)?;
            Err(Failure::new(
                exit::DEGENERATE,
                format!(
                    "nullspace of dimension {} written to nullspace.json, not resolved",
                    basis.len()
                ),
            ))
        }
    }
}

fn verify(
    suite: &SuiteParams,
    model: Option<ModelKind>,
    m: Option<i64>,
    perturb: bool,
    out: &Path,
) -> Result<u8, Failure> {
    let reports = verify::run(suite, &verify::cases_for(model, m), perturb);
    let json = serde_json::to_string_pretty(&reports).expect("reports serialize");
    write(out, "report.json", &json)?;
    let failed: Vec<&str> = reports
        .iter()
        .filter(|r| !r.passed())
        .map(|r| r.identity_id.as_str())
        .collect();
    println!(
        "{} identities checked, {} failed",
        reports.len(),
        failed.len()
    );
    if failed.is_empty() {
        Ok(exit::OK)
    } else {
        Err(Failure::new(
            exit::VERIFY_FAILED,
            format!("failed: {}", failed.join(", ")),
        ))
    }
}

fn fock_failure(e: FockError) -> Failure {
    let code = match &e {
        FockError::AtGrid { source, .. } => {
            return Failure::new(fock_failure(*source.clone()).code, e.to_string())
        }
        FockError::NonConvergence { .. } => exit::NON_CONVERGENCE,
        FockError::NoSymmetry { nullity: 0, .. } => exit::NO_SYMMETRY,
        FockError::NoSymmetry { .. } => exit::DEGENERATE,
        FockError::NotHermitian(_)
        | FockError::AmbiguousLabel { .. }
        | FockError::CommutatorTransfer(_) => exit::ANOMALIES,
        _ => exit::INVALID,
    };
    Failure::new(code, e.to_string())
}

fn sweep(
    params: &ModelParams<Rational>,
    m: Option<i64>,
    spec: &TruncationSpec,
    grid: &GridSpec,
    out: &Path,
    crossings: bool,
) -> Result<u8, Failure> {
    let symmetry = m.or_else(|| fock::condition_order(params, MAX_INFERRED_M));
    match symmetry {
        Some(m) => eprintln!("labelling levels with J_{m}"),
        None => eprintln!(
            "epsilon is off every condition with |M| <= {MAX_INFERRED_M}; levels are unlabelled"
        ),
    }
    let sweep = fock::sweep(params, grid, spec, symmetry).map_err(fock_failure)?;
    let mut csv = Vec::new();
    fock::write_csv(&sweep, &mut csv).expect("writing to memory");
    write(
        out,
        "spectrum.csv",
        std::str::from_utf8(&csv).expect("ascii"),
    )?;
    eprintln!(
        "largest cutoff-doubling shift {:.3e} at g = {}",
        sweep.convergence.1, sweep.convergence.0
    );
    if !crossings {
        return Ok(exit::OK);
    }
    let events = fock::detect_crossings(&sweep).map_err(fock_failure)?;
    let json = serde_json::to_string_pretty(&events).expect("events serialize");
    write(out, "crossings.json", &json)?;
    let count = |k: CrossingKind| events.iter().filter(|e| e.kind == k).count();
    println!(
        "{} crossings, {} avoided, {} approaches, {} anomalies",
        count(CrossingKind::Crossing),
        count(CrossingKind::Avoided),
        count(CrossingKind::Approach),
        count(CrossingKind::Anomaly)
    );
    if count(CrossingKind::Anomaly) > 0 {
        return Err(Failure::new(
            exit::ANOMALIES,
            "anomalous gap minima, see crossings.json",
        ));
    }
    Ok(exit::OK)
}
