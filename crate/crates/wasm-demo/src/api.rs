use serde::Serialize;
use serde_json::json;
use symforge::casimir;
use symforge::fock::{self, CrossingEvent, GridSpec, TruncationSpec};
use symforge::scalar::{format_rational, parse_decimal};
use symforge::serial::TermRecord;
use symforge::solver::{self, SolveOutcome};
use symforge::{rat, ModelKind, ModelParams, Rational};

/// Model parameters as typed into the page. Unused fields are ignored.
pub struct Params {
    pub model: String,
    pub g: String,
    pub delta: String,
    pub mu: String,
    pub sin_t: String,
    pub cos_t: String,
}

impl Params {
    pub fn new(model: &str, g: &str, delta: &str, mu: &str, sin_t: &str, cos_t: &str) -> Self {
        Params {
            model: model.into(),
            g: g.into(),
            delta: delta.into(),
            mu: mu.into(),
            sin_t: sin_t.into(),
            cos_t: cos_t.into(),
        }
    }

    fn build(&self) -> Result<ModelParams<Rational>, String> {
        let num = |name: &str, s: &str| parse_decimal(s).map_err(|e| format!("{name}: {e}"));
        let kind: ModelKind = self
            .model
            .parse()
            .map_err(|e: symforge::models::ModelError| e.to_string())?;
        let (g, d, e) = (num("g", &self.g)?, num("delta", &self.delta)?, rat(0, 1));
        let p = match kind {
            ModelKind::Aqrm => ModelParams::aqrm(g, d, e),
            ModelKind::AnisoAqrm => ModelParams::aniso_aqrm(g, d, e, num("mu", &self.mu)?),
            ModelKind::Arsm => ModelParams::arsm(
                g,
                d,
                e,
                num("sin t", &self.sin_t)?,
                num("cos t", &self.cos_t)?,
            ),
            ModelKind::AnisoArsm => ModelParams::aniso_arsm(
                g,
                d,
                e,
                num("mu", &self.mu)?,
                num("sin t", &self.sin_t)?,
                num("cos t", &self.cos_t)?,
            ),
        };
        let violations = p.validate();
        if violations.is_empty() {
            Ok(p)
        } else {
            Err(violations
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join("; "))
        }
    }

    fn on_condition(&self, m: i64) -> Result<ModelParams<Rational>, String> {
        self.build()?.on_condition(m).map_err(|e| e.to_string())
    }
}

pub fn derive(p: &Params, m: i64) -> Result<String, String> {
    let params = p.on_condition(m)?;
    let epsilon = format_rational(&params.epsilon);
    let out = match solver::solve(&params, m).map_err(|e| e.to_string())? {
        SolveOutcome::Unique(j) => {
            let terms: Vec<TermRecord> = j.j.to_record().terms;
            json!({"epsilon": epsilon, "nullity": 1, "terms": terms, "text": j.j.to_string()})
        }
        other => json!({"epsilon": epsilon, "nullity": other.nullity(), "terms": [], "text": ""}),
    };
    Ok(out.to_string())
}

fn relation_text(c: &[Rational]) -> String {
    let terms: Vec<String> = c
        .iter()
        .enumerate()
        .filter(|(_, c)| **c != rat(0, 1))
        .map(|(k, c)| match k {
            0 => format_rational(c),
            1 => format!("({}) H", format_rational(c)),
            _ => format!("({}) H^{k}", format_rational(c)),
        })
        .collect();
    format!("J² = {}", terms.join(" + "))
}

pub fn relation(p: &Params, m: i64) -> Result<String, String> {
    let params = p.on_condition(m)?;
    let j = match solver::symmetry_operator(&params, m).map_err(|e| e.to_string())? {
        SolveOutcome::Unique(j) => j,
        other => return Err(format!("nullspace dimension {}", other.nullity())),
    };
    let rel = casimir::relation(&j).map_err(|e| e.to_string())?;
    let coefficients: Vec<String> = rel.coefficients.iter().map(format_rational).collect();
    Ok(json!({
        "epsilon": format_rational(&params.epsilon),
        "coefficients": coefficients,
        "text": relation_text(&rel.coefficients),
    })
    .to_string())
}

pub struct Grid {
    pub epsilon: String,
    pub g_min: String,
    pub g_max: String,
    pub steps: usize,
    pub fock_dim: usize,
    pub levels: usize,
}

#[derive(Serialize)]
struct SweepOut {
    symmetry: Option<i64>,
    g: Vec<f64>,
    /// `energies[k][i]` is level k at grid point i.
    energies: Vec<Vec<f64>>,
    /// Sign of `⟨J⟩`, or 0 when unlabelled.
    labels: Vec<Vec<i8>>,
    crossings: Vec<CrossingEvent>,
}

pub fn sweep(p: &Params, grid: &Grid) -> Result<String, String> {
    let epsilon = parse_decimal(&grid.epsilon).map_err(|e| format!("epsilon: {e}"))?;
    // g is swept, so the field is ignored.
    let fixed = Params::new(&p.model, "1", &p.delta, &p.mu, &p.sin_t, &p.cos_t);
    let params = fixed.build()?.with_epsilon(epsilon);
    let spec = TruncationSpec::new(grid.fock_dim, (grid.fock_dim / 6).max(4), grid.levels)
        .map_err(|e| e.to_string())?;
    let range = GridSpec {
        g_min: parse_decimal(&grid.g_min).map_err(|e| format!("g min: {e}"))?,
        g_max: parse_decimal(&grid.g_max).map_err(|e| format!("g max: {e}"))?,
        steps: grid.steps,
    };
    let symmetry = fock::condition_order(&params, 4);
    let sweep = fock::sweep(&params, &range, &spec, symmetry).map_err(|e| e.to_string())?;
    let crossings = fock::detect_crossings(&sweep).map_err(|e| e.to_string())?;
    let k = spec.levels;
    let out = SweepOut {
        symmetry,
        g: sweep.grid(),
        energies: (0..k)
            .map(|l| sweep.points.iter().map(|pt| pt.levels[l].energy).collect())
            .collect(),
        labels: (0..k)
            .map(|l| {
                sweep
                    .points
                    .iter()
                    .map(|pt| pt.levels[l].label.map_or(0, |x| x.sign))
                    .collect()
            })
            .collect(),
        crossings,
    };
    serde_json::to_string(&out).map_err(|e| e.to_string())
}
