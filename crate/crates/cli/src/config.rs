//! Run configuration: TOML file values, overridden by flags, resolved to a
//! complete record that is written next to every run's outputs.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use symforge::fock::{GridSpec, TruncationSpec, DEFAULT_FOCK_DIM, DEFAULT_LEVELS, DEFAULT_MARGIN};
use symforge::scalar::{format_rational, parse_decimal, parse_rational};
use symforge::verify::SuiteParams;
use symforge::{rat, ModelKind, ModelParams, Rational};

use crate::Failure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Derive,
    Verify,
    Spectrum,
    Crossings,
}

impl Command {
    /// `derive` and `verify` certify in exact arithmetic and take `num/den` only.
    fn exact(self) -> bool {
        matches!(self, Command::Derive | Command::Verify)
    }
}

/// Everything a run reads. Unset fields fall back to per-command defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<Command>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<String>,
    #[serde(default, rename = "M", skip_serializing_if = "Option::is_none")]
    pub m: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sin_t: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cos_t: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fock_dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub margin: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub levels: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g_min: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g_max: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perturb: Option<bool>,
}

macro_rules! overlay {
    ($base:ident, $top:ident, $($field:ident),*) => {
        $( if $top.$field.is_some() { $base.$field = $top.$field.clone(); } )*
    };
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::invalid(format!("cannot read {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))
    }

    /// `self` with every field set in `top` replaced.
    pub fn overlay(mut self, top: &RunConfig) -> Self {
        overlay!(
            self, top, command, model, m, g, delta, epsilon, mu, sin_t, cos_t, fock_dim, margin,
            levels, g_min, g_max, steps, out, perturb
        );
        self
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("flat record of strings and integers")
    }
}

const DEFAULT_G_MIN: &str = "1/100";
const DEFAULT_G_MAX: &str = "3/2";
const DEFAULT_STEPS: usize = 300;

/// A configuration with model parameters parsed and defaults applied.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub command: Command,
    pub out: PathBuf,
    pub kind: Kind,
}

#[derive(Debug, Clone)]
pub enum Kind {
    Derive {
        params: ModelParams<Rational>,
        m: i64,
    },
    Verify {
        suite: SuiteParams,
        model: Option<ModelKind>,
        m: Option<i64>,
        perturb: bool,
    },
    Sweep {
        params: ModelParams<Rational>,
        m: Option<i64>,
        spec: TruncationSpec,
        grid: GridSpec,
    },
}

struct Parser {
    exact: bool,
}

impl Parser {
    fn scalar(&self, field: &str, s: &str) -> Result<Rational, Failure> {
        let parsed = if self.exact {
            parse_rational(s)
        } else {
            parse_decimal(s)
        };
        parsed.map_err(|e| Failure::invalid(format!("{field}: {e}")))
    }

    fn or(&self, field: &str, v: &Option<String>, default: &str) -> Result<Rational, Failure> {
        self.scalar(field, v.as_deref().unwrap_or(default))
    }
}

fn model_kind(s: &str) -> Result<ModelKind, Failure> {
    s.parse()
        .map_err(|e: symforge::models::ModelError| Failure::invalid(e.to_string()))
}

fn model_params(
    c: &RunConfig,
    p: &Parser,
    m: Option<i64>,
) -> Result<ModelParams<Rational>, Failure> {
    let kind = model_kind(
        c.model
            .as_deref()
            .ok_or_else(|| Failure::invalid("--model is required"))?,
    )?;
    let g = p.or("g", &c.g, "1/2")?;
    let d = p.or("delta", &c.delta, "3/4")?;
    let zero = rat(0, 1);
    let base = match kind {
        ModelKind::Aqrm => ModelParams::aqrm(g, d, zero),
        ModelKind::AnisoAqrm => ModelParams::aniso_aqrm(g, d, zero, p.or("mu", &c.mu, "2")?),
        ModelKind::Arsm => ModelParams::arsm(
            g,
            d,
            zero,
            p.or("sin_t", &c.sin_t, "3/5")?,
            p.or("cos_t", &c.cos_t, "4/5")?,
        ),
        ModelKind::AnisoArsm => ModelParams::aniso_arsm(
            g,
            d,
            zero,
            p.or("mu", &c.mu, "2")?,
            p.or("sin_t", &c.sin_t, "3/5")?,
            p.or("cos_t", &c.cos_t, "4/5")?,
        ),
    };
    let params = match (&c.epsilon, m) {
        (Some(e), _) => base.with_epsilon(p.scalar("epsilon", e)?),
        (None, Some(m)) => base
            .on_condition(m)
            .map_err(|e| Failure::invalid(e.to_string()))?,
        (None, None) => base,
    };
    let violations = params.validate();
    if !violations.is_empty() {
        let list: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
        return Err(Failure::invalid(format!(
            "invalid parameters:\n  {}",
            list.join("\n  ")
        )));
    }
    Ok(params)
}

fn write_params(c: &mut RunConfig, params: &ModelParams<Rational>) {
    c.model = Some(params.model.name().to_string());
    c.g = Some(format_rational(&params.g));
    c.delta = Some(format_rational(&params.delta));
    c.epsilon = Some(format_rational(&params.epsilon));
    c.mu = params.mu.as_ref().map(format_rational);
    c.sin_t = params.stark.as_ref().map(|s| format_rational(&s.sin_t));
    c.cos_t = params.stark.as_ref().map(|s| format_rational(&s.cos_t));
}

impl RunConfig {
    /// Parses and fills defaults. The second value is the fully explicit
    /// configuration that reproduces the run.
    pub fn resolve(&self) -> Result<(Resolved, RunConfig), Failure> {
        let command = self
            .command
            .ok_or_else(|| Failure::invalid("no subcommand"))?;
        let p = Parser {
            exact: command.exact(),
        };
        let out = self.out.clone().unwrap_or_else(|| PathBuf::from("."));
        let mut explicit = RunConfig {
            command: Some(command),
            out: Some(out.clone()),
            ..RunConfig::default()
        };
        let kind = match command {
            Command::Derive => {
                let m = self.m.unwrap_or(1);
                let params = model_params(self, &p, Some(m))?;
                explicit.m = Some(m);
                write_params(&mut explicit, &params);
                Kind::Derive { params, m }
            }
            Command::Verify => {
                let model = self.model.as_deref().map(model_kind).transpose()?;
                let suite = SuiteParams {
                    g: p.or("g", &self.g, "1/2")?,
                    delta: p.or("delta", &self.delta, "3/4")?,
                    mu: p.or("mu", &self.mu, "2")?,
                    sin_t: p.or("sin_t", &self.sin_t, "3/5")?,
                    cos_t: p.or("cos_t", &self.cos_t, "4/5")?,
                    epsilon: self
                        .epsilon
                        .as_deref()
                        .map(|e| p.scalar("epsilon", e))
                        .transpose()?,
                };
                let perturb = self.perturb.unwrap_or(false);
                explicit.model = model.map(|k| k.name().to_string());
                explicit.m = self.m;
                explicit.g = Some(format_rational(&suite.g));
                explicit.delta = Some(format_rational(&suite.delta));
                explicit.mu = Some(format_rational(&suite.mu));
                explicit.sin_t = Some(format_rational(&suite.sin_t));
                explicit.cos_t = Some(format_rational(&suite.cos_t));
                explicit.epsilon = suite.epsilon.as_ref().map(format_rational);
                explicit.perturb = Some(perturb);
                Kind::Verify {
                    suite,
                    model,
                    m: self.m,
                    perturb,
                }
            }
            Command::Spectrum | Command::Crossings => {
                let params = model_params(self, &p, self.m)?;
                let spec = TruncationSpec::new(
                    self.fock_dim.unwrap_or(DEFAULT_FOCK_DIM),
                    self.margin.unwrap_or(DEFAULT_MARGIN),
                    self.levels.unwrap_or(DEFAULT_LEVELS),
                )
                .map_err(|e| Failure::invalid(e.to_string()))?;
                let grid = GridSpec {
                    g_min: p.or("g_min", &self.g_min, DEFAULT_G_MIN)?,
                    g_max: p.or("g_max", &self.g_max, DEFAULT_G_MAX)?,
                    steps: self.steps.unwrap_or(DEFAULT_STEPS),
                };
                grid.points().map_err(|e| Failure::invalid(e.to_string()))?;
                write_params(&mut explicit, &params);
                explicit.m = self.m;
                explicit.fock_dim = Some(spec.fock_dim);
                explicit.margin = Some(spec.margin);
                explicit.levels = Some(spec.levels);
                explicit.g_min = Some(format_rational(&grid.g_min));
                explicit.g_max = Some(format_rational(&grid.g_max));
                explicit.steps = Some(grid.steps);
                Kind::Sweep {
                    params,
                    m: self.m,
                    spec,
                    grid,
                }
            }
        };
        Ok((Resolved { command, out, kind }, explicit))
    }
}
