//! Truncated Fock-space spectra, J-parity labels and crossing classification.
//!
//! Matrices are real and qubit-major: index `q·N + n` is qubit row `q`
//! with `n` bosons. All coefficients of the models are real, so nothing here
//! needs complex arithmetic.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::OperatorPolynomial;
use crate::models::{ModelError, ModelParams};
use crate::scalar::{Coefficient, Rational};
use crate::solver::{self, SolveOutcome, SolverError};

pub const DEFAULT_FOCK_DIM: usize = 120;
pub const DEFAULT_MARGIN: usize = 10;
pub const DEFAULT_LEVELS: usize = 12;
pub const GAP_CROSS_TOL: f64 = 1e-6;
pub const GAP_AVOID_TOL: f64 = 1e-3;
pub const CLUSTER_TOL: f64 = 1e-10;
pub const CONVERGENCE_TOL: f64 = 1e-10;
pub const HERMITICITY_TOL: f64 = 1e-12;
pub const COMMUTATOR_TOL: f64 = 1e-8;
pub const REFINE_WIDTH: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FockError {
    #[error("invalid truncation: {0}")]
    InvalidTruncation(String),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("Hamiltonian matrix is not symmetric (max defect {0:e})")]
    NotHermitian(f64),
    #[error("level {level} moved by {shift:e} when the cutoff was doubled to {cutoff}")]
    NonConvergence {
        level: usize,
        shift: f64,
        cutoff: usize,
    },
    #[error("level {level} has J expectation {expectation:e}; its label is ambiguous")]
    AmbiguousLabel { level: usize, expectation: f64 },
    #[error("interior block of [J, H] has max norm {0:e}")]
    CommutatorTransfer(f64),
    #[error("no unique J_{m} at these parameters (nullspace dimension {nullity})")]
    NoSymmetry { m: i64, nullity: usize },
    #[error("at grid point {index} (g = {g}): {source}")]
    AtGrid {
        index: usize,
        g: f64,
        source: Box<FockError>,
    },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Solver(#[from] SolverError),
}

/// Fock cutoff `N`, contaminated margin `d` and trusted level count `K`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationSpec {
    pub fock_dim: usize,
    pub margin: usize,
    pub levels: usize,
}

impl Default for TruncationSpec {
    fn default() -> Self {
        TruncationSpec {
            fock_dim: DEFAULT_FOCK_DIM,
            margin: DEFAULT_MARGIN,
            levels: DEFAULT_LEVELS,
        }
    }
}

impl TruncationSpec {
    pub fn new(fock_dim: usize, margin: usize, levels: usize) -> Result<Self, FockError> {
        let spec = TruncationSpec {
            fock_dim,
            margin,
            levels,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), FockError> {
        let bad = |m: String| Err(FockError::InvalidTruncation(m));
        if self.fock_dim < 8 {
            return bad(format!("fock_dim = {} (need >= 8)", self.fock_dim));
        }
        if self.margin == 0 || self.margin >= self.fock_dim {
            return bad(format!(
                "margin = {} (need 0 < margin < {})",
                self.margin, self.fock_dim
            ));
        }
        if self.levels == 0 || self.levels > self.fock_dim - self.margin {
            return bad(format!(
                "levels = {} (need 0 < levels <= {})",
                self.levels,
                self.fock_dim - self.margin
            ));
        }
        Ok(())
    }

    pub fn doubled(&self) -> TruncationSpec {
        TruncationSpec {
            fock_dim: 2 * self.fock_dim,
            ..*self
        }
    }

    pub fn dim(&self) -> usize {
        2 * self.fock_dim
    }
}

/// `𝒫^p (a†)^i a^j` in each 2×2 entry, truncated to `n` Fock states.
pub fn to_matrix<C: Coefficient>(p: &OperatorPolynomial<C>, n: usize) -> DMatrix<f64> {
    let mut out = DMatrix::zeros(2 * n, 2 * n);
    for (e, mono, c) in p.terms() {
        let c = c.to_f64();
        let (i, j) = (mono.creation as usize, mono.annihilation as usize);
        for m in j..n {
            let mid = m - j;
            let t = mid + i;
            if t >= n {
                continue;
            }
            let squared: f64 = (mid + 1..=m).chain(mid + 1..=t).map(|k| k as f64).product();
            let sign = if mono.grading == 1 && t % 2 == 1 {
                -1.0
            } else {
                1.0
            };
            out[(e.row * n + t, e.col * n + m)] += sign * c * squared.sqrt();
        }
    }
    out
}

/// Indices with fewer than `N − d` bosons, in both qubit blocks.
pub fn interior_indices(spec: &TruncationSpec) -> Vec<usize> {
    let keep = spec.fock_dim - spec.margin;
    (0..2)
        .flat_map(|q| (0..keep).map(move |n| q * spec.fock_dim + n))
        .collect()
}

/// Largest absolute entry of the interior block.
pub fn interior_max_norm(m: &DMatrix<f64>, spec: &TruncationSpec) -> f64 {
    let idx = interior_indices(spec);
    let mut max = 0.0f64;
    for &r in &idx {
        for &c in &idx {
            max = max.max(m[(r, c)].abs());
        }
    }
    max
}

/// Lowest `K` eigenpairs, ascending.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub energies: Vec<f64>,
    /// Columns are the matching eigenvectors.
    pub vectors: DMatrix<f64>,
}

pub fn diagonalize(h: &DMatrix<f64>, levels: usize) -> Result<Spectrum, FockError> {
    let defect = (h - h.transpose()).amax();
    if defect >= HERMITICITY_TOL {
        return Err(FockError::NotHermitian(defect));
    }
    let eig = SymmetricEigen::new(h.clone());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    order.truncate(levels);
    let energies = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_columns(
        &order
            .iter()
            .map(|&k| eig.eigenvectors.column(k).into_owned())
            .collect::<Vec<_>>(),
    );
    Ok(Spectrum { energies, vectors })
}

fn hamiltonian_matrix<C: Coefficient>(
    params: &ModelParams<C>,
    n: usize,
) -> Result<DMatrix<f64>, FockError> {
    Ok(to_matrix(&params.hamiltonian()?, n))
}

/// Largest shift of the lowest `K` levels under `N → 2N`.
pub fn convergence_shift<C: Coefficient>(
    params: &ModelParams<C>,
    spec: &TruncationSpec,
    base: &Spectrum,
) -> Result<(usize, f64), FockError> {
    let fine = diagonalize(&hamiltonian_matrix(params, 2 * spec.fock_dim)?, spec.levels)?;
    Ok(base
        .energies
        .iter()
        .zip(&fine.energies)
        .map(|(a, b)| (a - b).abs())
        .enumerate()
        .fold((0, 0.0), |acc, (k, d)| if d > acc.1 { (k, d) } else { acc }))
}

fn certify(shift: (usize, f64), spec: &TruncationSpec) -> Result<(), FockError> {
    if shift.1 >= CONVERGENCE_TOL {
        return Err(FockError::NonConvergence {
            level: shift.0,
            shift: shift.1,
            cutoff: 2 * spec.fock_dim,
        });
    }
    Ok(())
}

/// Lowest `K` levels of H, certified against the doubled cutoff.
pub fn spectrum<C: Coefficient>(
    params: &ModelParams<C>,
    spec: &TruncationSpec,
) -> Result<Spectrum, FockError> {
    spec.validate()?;
    let s = diagonalize(&hamiltonian_matrix(params, spec.fock_dim)?, spec.levels)?;
    certify(convergence_shift(params, spec, &s)?, spec)?;
    Ok(s)
}

/// The J-sector of one level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelLabel {
    /// `+1` or `-1`.
    pub sign: i8,
    pub expectation: f64,
}

/// `sign(v† J v)` per level. Clusters of levels closer than [`CLUSTER_TOL`]
/// are first rotated onto eigenvectors of J.
pub fn j_labels(j: &DMatrix<f64>, spectrum: &mut Spectrum) -> Result<Vec<LevelLabel>, FockError> {
    let k = spectrum.energies.len();
    let mut start = 0;
    while start < k {
        let mut end = start + 1;
        while end < k && spectrum.energies[end] - spectrum.energies[start] < CLUSTER_TOL {
            end += 1;
        }
        if end - start > 1 {
            resolve_cluster(j, spectrum, start, end)?;
        }
        start = end;
    }
    (0..k)
        .map(|level| {
            let v = spectrum.vectors.column(level);
            let expectation = v.dot(&(j * v));
            if expectation.abs() < CLUSTER_TOL {
                return Err(FockError::AmbiguousLabel { level, expectation });
            }
            Ok(LevelLabel {
                sign: if expectation > 0.0 { 1 } else { -1 },
                expectation,
            })
        })
        .collect()
}

/// Replaces the cluster's vectors by bases of the ± eigenspaces of J.
///
/// J squares to a multiple of the identity on an H-eigenspace, so
/// `(B ± σ)/(2σ)` with `σ² = tr(B²)/k` project onto its two eigenspaces
/// even when J is not symmetric.
fn resolve_cluster(
    j: &DMatrix<f64>,
    spectrum: &mut Spectrum,
    start: usize,
    end: usize,
) -> Result<(), FockError> {
    let k = end - start;
    let v = spectrum.vectors.columns(start, k).into_owned();
    let b = v.transpose() * j * &v;
    let sigma = ((&b * &b).trace() / k as f64).sqrt();
    if sigma.is_nan() || sigma < CLUSTER_TOL {
        return Err(FockError::AmbiguousLabel {
            level: start,
            expectation: sigma,
        });
    }
    let id = DMatrix::<f64>::identity(k, k);
    let mut columns = Vec::with_capacity(k);
    for s in [1.0, -1.0] {
        let proj = (&b * s + &id * sigma) / (2.0 * sigma);
        let svd = proj.svd(true, false);
        let u = svd.u.expect("left singular vectors requested");
        for (c, &sv) in svd.singular_values.iter().enumerate() {
            if sv > 0.5 {
                columns.push(&v * u.column(c));
            }
        }
    }
    if columns.len() != k {
        return Err(FockError::AmbiguousLabel {
            level: start,
            expectation: sigma,
        });
    }
    for (c, col) in columns.into_iter().enumerate() {
        let norm = col.norm();
        spectrum.vectors.set_column(start + c, &(col / norm));
    }
    Ok(())
}

/// `g_min, g_min + h, ..., g_max` in exact arithmetic.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub g_min: Rational,
    pub g_max: Rational,
    pub steps: usize,
}

impl GridSpec {
    pub fn points(&self) -> Result<Vec<Rational>, FockError> {
        if self.g_min >= self.g_max {
            return Err(FockError::InvalidGrid("g_min must be below g_max".into()));
        }
        if self.steps < 2 {
            return Err(FockError::InvalidGrid("steps must be at least 2".into()));
        }
        let h = (&self.g_max - &self.g_min) / Rational::from_int(self.steps as i64 - 1);
        Ok((0..self.steps)
            .map(|k| &self.g_min + &h * Rational::from_int(k as i64))
            .collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Level {
    pub energy: f64,
    pub label: Option<LevelLabel>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub g: Rational,
    pub levels: Vec<Level>,
}

impl SweepPoint {
    pub fn g_f64(&self) -> f64 {
        self.g.to_f64()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumSweep {
    pub params: ModelParams<Rational>,
    pub spec: TruncationSpec,
    /// The M whose J labelled the levels, if any.
    pub symmetry: Option<i64>,
    pub points: Vec<SweepPoint>,
    /// `(g, largest shift)` of the doubled-cutoff check at the largest |g|.
    pub convergence: (f64, f64),
}

/// The operator J_m at `params` as a truncated matrix, catalog form first.
pub fn symmetry_matrix(
    params: &ModelParams<Rational>,
    m: i64,
    n: usize,
) -> Result<DMatrix<f64>, FockError> {
    match solver::symmetry_operator(params, m)? {
        SolveOutcome::Unique(j) => Ok(to_matrix(&j.j, n)),
        other => Err(FockError::NoSymmetry {
            m,
            nullity: other.nullity(),
        }),
    }
}

/// Spectrum and labels at one point, without the cutoff-doubling check.
pub fn labelled_levels(
    params: &ModelParams<Rational>,
    spec: &TruncationSpec,
    symmetry: Option<i64>,
) -> Result<Vec<Level>, FockError> {
    let h = hamiltonian_matrix(params, spec.fock_dim)?;
    let mut s = diagonalize(&h, spec.levels)?;
    let labels = match symmetry {
        Some(m) => {
            let j = symmetry_matrix(params, m, spec.fock_dim)?;
            let comm = &j * &h - &h * &j;
            let norm = interior_max_norm(&comm, spec);
            if norm.is_nan() || norm >= COMMUTATOR_TOL {
                return Err(FockError::CommutatorTransfer(norm));
            }
            j_labels(&j, &mut s)?.into_iter().map(Some).collect()
        }
        None => vec![None; s.energies.len()],
    };
    Ok(s.energies
        .into_iter()
        .zip(labels)
        .map(|(energy, label)| Level { energy, label })
        .collect())
}

fn map_grid<T: Send>(
    points: &[Rational],
    f: impl Fn(usize, &Rational) -> T + Sync + Send,
) -> Vec<T> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        points
            .par_iter()
            .enumerate()
            .map(|(i, g)| f(i, g))
            .collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        points.iter().enumerate().map(|(i, g)| f(i, g)).collect()
    }
}

/// Labelled spectra along the grid with ε held fixed. The cutoff-doubling
/// check runs at the grid point of largest |g|, where truncation bites most.
pub fn sweep(
    params: &ModelParams<Rational>,
    grid: &GridSpec,
    spec: &TruncationSpec,
    symmetry: Option<i64>,
) -> Result<SpectrumSweep, FockError> {
    spec.validate()?;
    params.check()?;
    let gs = grid.points()?;
    let results = map_grid(&gs, |index, g| {
        labelled_levels(&params.with_g(g.clone()), spec, symmetry).map_err(|e| FockError::AtGrid {
            index,
            g: g.to_f64(),
            source: Box::new(e),
        })
    });
    let mut points = Vec::with_capacity(gs.len());
    for (g, levels) in gs.iter().zip(results) {
        points.push(SweepPoint {
            g: g.clone(),
            levels: levels?,
        });
    }

    let (index, g_worst) = gs
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.abs_cmp(b.1))
        .map(|(i, g)| (i, g.clone()))
        .expect("grids have at least two points");
    let worst = params.with_g(g_worst.clone());
    let base = Spectrum {
        energies: points[index].levels.iter().map(|l| l.energy).collect(),
        vectors: DMatrix::zeros(0, 0),
    };
    let shift = convergence_shift(&worst, spec, &base)?;
    certify(shift, spec).map_err(|e| FockError::AtGrid {
        index,
        g: g_worst.to_f64(),
        source: Box::new(e),
    })?;

    Ok(SpectrumSweep {
        params: params.clone(),
        spec: *spec,
        symmetry,
        points,
        convergence: (g_worst.to_f64(), shift.1),
    })
}

trait AbsCmp {
    fn abs_cmp(&self, other: &Self) -> std::cmp::Ordering;
}

impl AbsCmp for Rational {
    fn abs_cmp(&self, other: &Self) -> std::cmp::Ordering {
        num_traits::Signed::abs(self).cmp(&num_traits::Signed::abs(other))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CrossingKind {
    Crossing,
    Avoided,
    /// Opposite-label levels that come close and separate in the same order.
    Approach,
    Anomaly,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossingEvent {
    /// Levels `(k, k+1)`, counted from the ground state.
    pub levels: (usize, usize),
    pub g: f64,
    pub gap: f64,
    pub kind: CrossingKind,
    /// Labels of levels `k` and `k+1` just below and just above `g`.
    pub labels_before: Option<(i8, i8)>,
    pub labels_after: Option<(i8, i8)>,
}

fn label_pair(point: &SweepPoint, k: usize) -> Option<(i8, i8)> {
    Some((point.levels[k].label?.sign, point.levels[k + 1].label?.sign))
}

fn classify(gap: f64, before: Option<(i8, i8)>, after: Option<(i8, i8)>) -> CrossingKind {
    match (before, after) {
        (Some(b), Some(a)) => {
            let differ = b.0 != b.1 && a.0 != a.1;
            let equal = b.0 == b.1 && a.0 == a.1;
            if gap < GAP_CROSS_TOL && differ {
                CrossingKind::Crossing
            } else if gap > GAP_AVOID_TOL && equal {
                CrossingKind::Avoided
            } else if gap > GAP_AVOID_TOL && differ && a == b {
                CrossingKind::Approach
            } else {
                CrossingKind::Anomaly
            }
        }
        _ if gap < GAP_CROSS_TOL => CrossingKind::Crossing,
        _ if gap > GAP_AVOID_TOL => CrossingKind::Avoided,
        _ => CrossingKind::Anomaly,
    }
}

/// Golden-section search for the minimum of `f` on `[a, b]`.
pub fn golden_min(mut a: f64, mut b: f64, width: f64, f: impl Fn(f64) -> f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > width {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    if fc <= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Refines every interior local minimum of each adjacent gap and classifies it.
pub fn detect_crossings(sweep: &SpectrumSweep) -> Result<Vec<CrossingEvent>, FockError> {
    let pts = &sweep.points;
    let levels = sweep.spec.levels;
    let mut candidates = Vec::new();
    for k in 0..levels.saturating_sub(1) {
        let gap = |i: usize| pts[i].levels[k + 1].energy - pts[i].levels[k].energy;
        for i in 1..pts.len().saturating_sub(1) {
            if gap(i) <= gap(i - 1) && gap(i) < gap(i + 1) {
                candidates.push((k, i));
            }
        }
    }
    let float = sweep.params.to_float();
    let n = sweep.spec.fock_dim;
    let refine = |&(k, i): &(usize, usize)| -> Result<CrossingEvent, FockError> {
        let (a, b) = (pts[i - 1].g_f64(), pts[i + 1].g_f64());
        let gap_at = |g: f64| -> f64 {
            let h = hamiltonian_matrix(&float.with_g(g), n).expect("validated parameters");
            let mut e: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
            e.sort_by(f64::total_cmp);
            e[k + 1] - e[k]
        };
        let (g, gap) = golden_min(a, b, REFINE_WIDTH, gap_at);
        let before = label_pair(&pts[i - 1], k);
        let after = label_pair(&pts[i + 1], k);
        Ok(CrossingEvent {
            levels: (k, k + 1),
            g,
            gap,
            kind: classify(gap, before, after),
            labels_before: before,
            labels_after: after,
        })
    };
    #[cfg(feature = "parallel")]
    let events: Result<Vec<_>, _> = {
        use rayon::prelude::*;
        candidates.par_iter().map(refine).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let events: Result<Vec<_>, _> = candidates.iter().map(refine).collect();
    let mut events = events?;
    events.sort_by(|a, b| a.g.total_cmp(&b.g).then(a.levels.cmp(&b.levels)));
    Ok(events)
}

/// `g,level,energy,label,j_expectation`, floats at 17 significant digits.
pub fn write_csv(sweep: &SpectrumSweep, mut out: impl std::io::Write) -> std::io::Result<()> {
    writeln!(out, "g,level,energy,label,j_expectation")?;
    for p in &sweep.points {
        let g = p.g_f64();
        for (k, level) in p.levels.iter().enumerate() {
            match level.label {
                Some(l) => writeln!(
                    out,
                    "{g:.16e},{k},{:.16e},{},{:.16e}",
                    level.energy, l.sign, l.expectation
                )?,
                None => writeln!(out, "{g:.16e},{k},{:.16e},,", level.energy)?,
            }
        }
    }
    Ok(())
}

/// The M for which `params` sits on the ε-condition, searching `|M| ≤ max_m`.
pub fn condition_order(params: &ModelParams<Rational>, max_m: i64) -> Option<i64> {
    (0..=max_m)
        .flat_map(|m| if m == 0 { vec![0] } else { vec![m, -m] })
        .find(|&m| {
            params
                .epsilon_condition(m)
                .map(|c| c == params.epsilon)
                .unwrap_or(false)
        })
}

/// Absolute gap of `J²` against its fitted relation, for labelled levels.
pub fn relation_defects(levels: &[Level], coefficients: &[Rational]) -> Vec<f64> {
    let c: Vec<f64> = coefficients.iter().map(Coefficient::to_f64).collect();
    levels
        .iter()
        .filter_map(|l| {
            let x = l.label?.expectation;
            let poly = c.iter().rev().fold(0.0, |acc, ck| acc * l.energy + ck);
            Some((x * x - poly).abs())
        })
        .collect()
}

impl SpectrumSweep {
    pub fn grid(&self) -> Vec<f64> {
        self.points.iter().map(SweepPoint::g_f64).collect()
    }

    pub fn is_labelled(&self) -> bool {
        self.symmetry.is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn number_and_parity_matrices() {
        let n = to_matrix(&OperatorPolynomial::<Rational>::number(), 8);
        for q in 0..2 {
            for k in 0..8 {
                assert_eq!(n[(q * 8 + k, q * 8 + k)], k as f64);
            }
        }
        let p = to_matrix(&OperatorPolynomial::<Rational>::boson_parity(), 8);
        assert_eq!(p[(0, 0)], 1.0);
        assert_eq!(p[(1, 1)], -1.0);
        assert_eq!(p[(9, 9)], -1.0);
        assert_eq!(p.iter().filter(|x| **x != 0.0).count(), 16);
    }

    #[test]
    fn ccr_holds_away_from_the_boundary() {
        let a = OperatorPolynomial::<Rational>::annihilation();
        let ad = OperatorPolynomial::<Rational>::creation();
        let ma = to_matrix(&a, 8);
        let mad = to_matrix(&ad, 8);
        let c = &ma * &mad - &mad * &ma;
        for q in 0..2 {
            for k in 0..7 {
                assert!((c[(q * 8 + k, q * 8 + k)] - 1.0).abs() < 1e-14);
            }
            assert!((c[(q * 8 + 7, q * 8 + 7)] + 7.0).abs() < 1e-12);
        }
        assert_eq!(to_matrix(&a.commutator(&ad), 8), DMatrix::identity(16, 16));
    }

    #[test]
    fn truncation_spec_rules() {
        assert!(TruncationSpec::new(7, 2, 2).is_err());
        assert!(TruncationSpec::new(8, 0, 2).is_err());
        assert!(TruncationSpec::new(8, 8, 2).is_err());
        assert!(TruncationSpec::new(8, 2, 7).is_err());
        assert!(TruncationSpec::new(8, 2, 6).is_ok());
    }

    #[test]
    fn decoupled_spectra() {
        let spec = TruncationSpec::new(40, 5, 6).unwrap();
        let p = ModelParams::aqrm(rat(0, 1), rat(3, 4), rat(0, 1));
        let s = spectrum(&p, &spec).unwrap();
        let expected = [-0.75, 0.25, 0.75, 1.25, 1.75, 2.25];
        for (e, x) in s.energies.iter().zip(expected) {
            assert!((e - x).abs() < 1e-12);
        }
        let p = ModelParams::aqrm(rat(0, 1), rat(0, 1), rat(1, 2));
        let s = spectrum(&p, &spec).unwrap();
        let expected = [-0.5, 0.5, 0.5, 1.5, 1.5, 2.5];
        for (e, x) in s.energies.iter().zip(expected) {
            assert!((e - x).abs() < 1e-12);
        }
    }

    #[test]
    fn parity_labels_in_the_unbiased_model() {
        let spec = TruncationSpec::new(60, 10, 8).unwrap();
        let p = ModelParams::aqrm(rat(1, 2), rat(7, 10), rat(0, 1));
        let levels = labelled_levels(&p, &spec, Some(0)).unwrap();
        for l in &levels {
            let label = l.label.unwrap();
            assert!((label.expectation.abs() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn degenerate_cluster_is_resolved_by_j() {
        let spec = TruncationSpec::new(30, 5, 6).unwrap();
        let p = ModelParams::aqrm(rat(0, 1), rat(0, 1), rat(0, 1));
        let h = hamiltonian_matrix(&p, 30).unwrap();
        let mut s = diagonalize(&h, spec.levels).unwrap();
        let j = to_matrix(&crate::catalog::parity::<Rational>(), 30);
        let labels = j_labels(&j, &mut s).unwrap();
        for pair in labels.chunks(2) {
            assert_ne!(pair[0].sign, pair[1].sign);
            assert!((pair[0].expectation.abs() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn two_point_grid() {
        let grid = GridSpec {
            g_min: rat(1, 10),
            g_max: rat(1, 5),
            steps: 2,
        };
        let p = ModelParams::aqrm(rat(0, 1), rat(3, 4), rat(1, 2));
        let s = sweep(&p, &grid, &TruncationSpec::new(40, 5, 4).unwrap(), Some(1)).unwrap();
        assert_eq!(s.points.len(), 2);
        assert!(detect_crossings(&s).unwrap().is_empty());
        let mut csv = Vec::new();
        write_csv(&s, &mut csv).unwrap();
        assert_eq!(String::from_utf8(csv).unwrap().lines().count(), 9);
    }

    #[test]
    fn classification_rules() {
        use CrossingKind::*;
        assert_eq!(classify(1e-9, Some((1, -1)), Some((-1, 1))), Crossing);
        assert_eq!(classify(1e-9, Some((1, 1)), Some((1, 1))), Anomaly);
        assert_eq!(classify(0.2, Some((1, 1)), Some((1, 1))), Avoided);
        assert_eq!(classify(0.2, Some((1, -1)), Some((1, -1))), Approach);
        assert_eq!(classify(0.2, Some((1, -1)), Some((-1, 1))), Anomaly);
        assert_eq!(classify(1e-5, Some((1, -1)), Some((-1, 1))), Anomaly);
        assert_eq!(classify(1e-9, None, None), Crossing);
        assert_eq!(classify(0.2, None, None), Avoided);
    }

    #[test]
    fn golden_section_finds_v_minimum() {
        let (x, fx) = golden_min(0.0, 1.0, 1e-10, |x| (x - 0.3).abs());
        assert!((x - 0.3).abs() < 1e-9 && fx < 1e-9);
    }

    #[test]
    fn grid_is_exact() {
        let grid = GridSpec {
            g_min: rat(0, 1),
            g_max: rat(1, 1),
            steps: 4,
        };
        assert_eq!(grid.points().unwrap()[1], rat(1, 3));
        assert!(GridSpec {
            steps: 1,
            ..grid.clone()
        }
        .points()
        .is_err());
    }

    #[test]
    fn finds_condition_order() {
        let p = ModelParams::aqrm(rat(1, 2), rat(1, 2), rat(-1, 1));
        assert_eq!(condition_order(&p, 4), Some(-2));
        assert_eq!(condition_order(&p.with_epsilon(rat(1, 3)), 4), None);
    }
}
