//! Construction of the solvable zeroth-order problem for a polynomial
//! potential.
//!
//! Given a potential `V` and an even trial degree `M`, the solver finds
//! exponent coefficients `a = (a_1, ..., a_M)` for the trial state
//! `phi(x) = exp(-h(x))` with `h(x) = sum_i a_i x^i` such that the exactly
//! solvable potential
//!
//! ```text
//! V0(x) = h'(x)^2 - h''(x) + E0,    E0 = 2 a_2 - a_1^2
//! ```
//!
//! matches `V` on a chosen set of low-degree terms: the coefficients of the
//! residual `V - V0` at those degrees are driven to zero with a damped Newton
//! iteration started from a small grid of initial points. `phi` is the exact
//! ground state of `-d^2/dx^2 + V0` with energy `E0`, so the leftover
//! residual is a small perturbation that the quadrature module turns into a
//! first-order energy correction.

use crate::polynomial::{Parity, Polynomial};
use crate::quadrature::{self, QuadratureConfig};
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// Relative threshold under which a converged coefficient is snapped to an
/// exact zero (kept only if the annihilation residual still passes). Without
/// the snap, coefficients that are analytically zero carry +/-1e-16 noise
/// whose sign would make the admissibility test nondeterministic.
const ZERO_SNAP_RELATIVE: f64 = 1e-11;

/// Two Newton roots closer than this (max-norm) are considered the same.
const ROOT_DEDUP_TOLERANCE: f64 = 1e-8;

/// Maximum step halvings in the damped Newton line search.
const MAX_STEP_HALVINGS: u32 = 30;

/// Errors from the ansatz solver.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnsatzError {
    #[error("exponent coefficient vector must not be empty")]
    EmptyExponent,
    #[error("exponent coefficient vector must have even length, got {0}")]
    OddExponentLength(usize),
    #[error("exponent degree must be a positive even integer, got {0}")]
    InvalidExponentDegree(usize),
    #[error(
        "exponent degree {exponent_degree} is too small for a potential of degree \
         {potential_degree}: 2M-2 must exceed the potential degree"
    )]
    IncompatibleDegree {
        exponent_degree: usize,
        potential_degree: usize,
    },
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),
    #[error("no admissible solution found from any starting point\n{}", format_diagnostics(.0))]
    NoAdmissibleRoot(Vec<StartDiagnostic>),
    #[error("Jacobian numerically singular at every starting point\n{}", format_diagnostics(.0))]
    AllJacobiansSingular(Vec<StartDiagnostic>),
}

/// Per-starting-point outcome, reported when a solve fails and kept for
/// diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub enum StartOutcome {
    /// Newton converged to an admissible root.
    Converged,
    /// Converged to the same root as an earlier start.
    DuplicateOf(usize),
    /// Converged, but the root's trial state is not normalizable.
    Inadmissible,
    /// Iteration cap reached before the residual dropped below tolerance.
    MaxIterations { residual_norm: f64 },
    /// The damped line search could not reduce the residual further.
    LineSearchStall { residual_norm: f64 },
    /// The finite-difference Jacobian was numerically singular.
    SingularJacobian,
    /// Converged and admissible, but the tie-break quadrature failed.
    TieBreakQuadratureFailed(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct StartDiagnostic {
    pub start_index: usize,
    pub outcome: StartOutcome,
}

impl fmt::Display for StartOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StartOutcome::Converged => write!(f, "converged"),
            StartOutcome::DuplicateOf(i) => write!(f, "duplicate of the root from start {i}"),
            StartOutcome::Inadmissible => {
                write!(f, "converged to a non-normalizable (inadmissible) root")
            }
            StartOutcome::MaxIterations { residual_norm } => {
                write!(f, "iteration cap reached, residual norm {residual_norm:.3e}")
            }
            StartOutcome::LineSearchStall { residual_norm } => {
                write!(f, "line search stalled, residual norm {residual_norm:.3e}")
            }
            StartOutcome::SingularJacobian => write!(f, "singular Jacobian"),
            StartOutcome::TieBreakQuadratureFailed(msg) => {
                write!(f, "tie-break quadrature failed: {msg}")
            }
        }
    }
}

fn format_diagnostics(diags: &[StartDiagnostic]) -> String {
    diags
        .iter()
        .map(|d| format!("  start {}: {}", d.start_index, d.outcome))
        .collect::<Vec<_>>()
        .join("\n")
}

/// Configuration for [`solve`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnsatzConfig {
    /// Trial exponent degree `M` (even, at least 2).
    pub exponent_degree: usize,
    /// Convergence threshold on the infinity norm of the annihilation system.
    pub newton_tolerance: f64,
    /// Per-start Newton iteration cap.
    pub max_iterations: u32,
    /// Starting coefficient vectors (each of length `exponent_degree`).
    pub multistart_grid: Vec<Vec<f64>>,
}

impl AnsatzConfig {
    /// Default configuration for trial degree `exponent_degree`.
    pub fn with_exponent_degree(exponent_degree: usize) -> Self {
        AnsatzConfig {
            exponent_degree,
            newton_tolerance: 1e-12,
            max_iterations: 100,
            multistart_grid: default_multistart_grid(exponent_degree),
        }
    }
}

impl Default for AnsatzConfig {
    fn default() -> Self {
        AnsatzConfig::with_exponent_degree(4)
    }
}

/// Default grid of Newton starting vectors for trial degree `m`: the
/// quadratic coefficient ranges over {0.25, 0.5, 1, 2}, every higher even
/// coefficient over {0.01, 0.1, 0.3}, and odd coefficients start at zero.
/// Every published solution this toolkit reproduces lies inside this box.
pub fn default_multistart_grid(m: usize) -> Vec<Vec<f64>> {
    if m < 2 {
        return Vec::new();
    }
    const A2: [f64; 4] = [0.25, 0.5, 1.0, 2.0];
    const HIGHER: [f64; 3] = [0.01, 0.1, 0.3];
    let higher_slots = m / 2 - 1;
    let mut grid = Vec::new();
    let combos = 3usize.pow(higher_slots as u32);
    for &a2 in &A2 {
        for combo in 0..combos {
            let mut start = vec![0.0; m];
            start[1] = a2;
            let mut rem = combo;
            for slot in 0..higher_slots {
                start[3 + 2 * slot] = HIGHER[rem % 3];
                rem /= 3;
            }
            grid.push(start);
        }
    }
    grid
}

/// Solved trial-state data: exponent coefficients, zeroth-order energy, the
/// solvable potential, and the residual perturbation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnsatzSolution {
    /// Exponent coefficients `a_1..a_M` (index `i` holds the coefficient of
    /// `x^{i+1}` in `h`).
    pub a: Vec<f64>,
    /// Zeroth-order energy `2 a_2 - a_1^2`.
    pub e0: f64,
    /// Solvable potential `h'^2 - h'' + e0`; its constant term is zero by
    /// construction.
    pub v0: Polynomial,
    /// Perturbation `V - v0`.
    pub residual: Polynomial,
    /// Degrees whose residual coefficients were driven below tolerance.
    pub annihilated_degrees: Vec<usize>,
}

/// The exponent polynomial `h(x) = sum_i a_i x^i` (slice index `i` holds
/// `a_{i+1}`).
pub fn exponent_polynomial(a: &[f64]) -> Polynomial {
    let mut coeffs = Vec::with_capacity(a.len() + 1);
    coeffs.push(0.0);
    coeffs.extend_from_slice(a);
    Polynomial::new(coeffs)
}

/// Whether `exp(-h)` is square-integrable: the highest-index nonzero entry of
/// `a` must sit at an even power of `x` with a strictly positive coefficient.
/// The all-zero vector is not admissible (a constant is not normalizable).
pub fn is_admissible(a: &[f64]) -> bool {
    match a.iter().rposition(|&c| c != 0.0) {
        None => false,
        // Slice index k holds the coefficient of x^{k+1}.
        Some(k) => (k + 1) % 2 == 0 && a[k] > 0.0,
    }
}

fn validate_exponent(a: &[f64]) -> Result<(), AnsatzError> {
    if a.is_empty() {
        return Err(AnsatzError::EmptyExponent);
    }
    if a.len() % 2 != 0 {
        return Err(AnsatzError::OddExponentLength(a.len()));
    }
    Ok(())
}

fn v0_and_e0(a: &[f64]) -> (Polynomial, f64) {
    let e0 = 2.0 * a.get(1).copied().unwrap_or(0.0) - a[0] * a[0];
    let h = exponent_polynomial(a);
    let hp = h.differentiate();
    let v0 = &(&(&hp * &hp) - &hp.differentiate()) + &Polynomial::constant(e0);
    // The constant lane of h'^2 - h'' is a1^2 - 2 a2 = -e0, so adding e0
    // cancels it exactly (the two roundings are negations of each other).
    debug_assert_eq!(v0.coefficient(0), 0.0);
    (v0, e0)
}

/// The solvable potential and its ground-state energy for exponent
/// coefficients `a`: returns `(h'^2 - h'' + E0, E0)` with `E0 = 2a_2 - a_1^2`.
/// The constant coefficient of the potential is zero by construction, and its
/// degree is `2M - 2` whenever `a_M != 0`.
pub fn zeroth_order_potential(a: &[f64]) -> Result<(Polynomial, f64), AnsatzError> {
    validate_exponent(a)?;
    Ok(v0_and_e0(a))
}

/// The perturbation `V - V0(a)`. Its constant coefficient equals the constant
/// coefficient of `V`, since `V0` has none.
pub fn residual(v: &Polynomial, a: &[f64]) -> Result<Polynomial, AnsatzError> {
    validate_exponent(a)?;
    let (v0, _) = v0_and_e0(a);
    Ok(v - &v0)
}

/// The residual degrees the solver must annihilate for potential `v` and
/// trial degree `m`: the `m/2` lowest even degrees `2, 4, ..., m` when `v` is
/// even, otherwise the `m` lowest degrees `1, ..., m`. The count always
/// equals the number of free parameters.
pub fn target_degrees(v: &Polynomial, m: usize) -> Result<Vec<usize>, AnsatzError> {
    if m < 2 || m % 2 != 0 {
        return Err(AnsatzError::InvalidExponentDegree(m));
    }
    if let Some(n) = v.degree() {
        if 2 * m - 2 <= n {
            return Err(AnsatzError::IncompatibleDegree {
                exponent_degree: m,
                potential_degree: n,
            });
        }
    }
    if v.parity() == Parity::Even {
        Ok((1..=m / 2).map(|k| 2 * k).collect())
    } else {
        Ok((1..=m).collect())
    }
}

/// Which coefficients of `a` the Newton iteration treats as unknowns.
#[derive(Clone, Copy, PartialEq)]
enum ParameterSpace {
    /// All of `a_1..a_M`.
    Full,
    /// Only the even-power coefficients `a_2, a_4, ...` (odd ones pinned to
    /// exactly zero) — the natural space for even potentials.
    ReducedEven,
}

struct SpaceMap {
    m: usize,
    positions: Vec<usize>,
}

impl SpaceMap {
    fn new(m: usize, space: ParameterSpace) -> SpaceMap {
        let positions = match space {
            ParameterSpace::Full => (0..m).collect(),
            ParameterSpace::ReducedEven => (0..m / 2).map(|k| 2 * k + 1).collect(),
        };
        SpaceMap { m, positions }
    }

    fn embed(&self, params: &[f64]) -> Vec<f64> {
        let mut a = vec![0.0; self.m];
        for (&pos, &p) in self.positions.iter().zip(params) {
            a[pos] = p;
        }
        a
    }

    fn project(&self, a: &[f64]) -> Vec<f64> {
        self.positions.iter().map(|&pos| a[pos]).collect()
    }
}

/// Solves the annihilation system for `v` with the given configuration and
/// returns the admissible solution; among several admissible Newton roots the
/// one with the lowest variational energy `E0 + E1` wins (`E1` computed by
/// the quadrature module). Even potentials are solved in the reduced
/// even-coefficient space, so their odd exponent coefficients are exactly
/// zero.
pub fn solve(v: &Polynomial, config: &AnsatzConfig) -> Result<AnsatzSolution, AnsatzError> {
    let space = if v.parity() == Parity::Even {
        ParameterSpace::ReducedEven
    } else {
        ParameterSpace::Full
    };
    let targets = target_degrees(v, config.exponent_degree)?;
    solve_in_space(v, config, space, targets)
}

/// Diagnostic variant of [`solve`] that always uses the full `M`-dimensional
/// parameter space with targets `1..=M`, even for even potentials. Useful for
/// verifying that the reduced even-space solve of [`solve`] is equivalent to
/// the unreduced problem.
pub fn solve_full_space(
    v: &Polynomial,
    config: &AnsatzConfig,
) -> Result<AnsatzSolution, AnsatzError> {
    let m = config.exponent_degree;
    if m < 2 || m % 2 != 0 {
        return Err(AnsatzError::InvalidExponentDegree(m));
    }
    if let Some(n) = v.degree() {
        if 2 * m - 2 <= n {
            return Err(AnsatzError::IncompatibleDegree {
                exponent_degree: m,
                potential_degree: n,
            });
        }
    }
    solve_in_space(v, config, ParameterSpace::Full, (1..=m).collect())
}

fn validate_config(config: &AnsatzConfig) -> Result<(), AnsatzError> {
    let m = config.exponent_degree;
    if m < 2 || m % 2 != 0 {
        return Err(AnsatzError::InvalidExponentDegree(m));
    }
    if config.newton_tolerance <= 0.0 || !config.newton_tolerance.is_finite() {
        return Err(AnsatzError::InvalidConfig(
            "newton_tolerance must be positive and finite".into(),
        ));
    }
    if config.max_iterations == 0 {
        return Err(AnsatzError::InvalidConfig(
            "max_iterations must be at least 1".into(),
        ));
    }
    for (i, start) in config.multistart_grid.iter().enumerate() {
        if start.len() != m {
            return Err(AnsatzError::InvalidConfig(format!(
                "multistart vector {i} has length {}, expected {m}",
                start.len()
            )));
        }
    }
    Ok(())
}

fn solve_in_space(
    v: &Polynomial,
    config: &AnsatzConfig,
    space: ParameterSpace,
    targets: Vec<usize>,
) -> Result<AnsatzSolution, AnsatzError> {
    validate_config(config)?;
    let m = config.exponent_degree;

    if v.is_zero() {
        // The zero potential is its own solvable problem: h = 0, E0 = 0.
        return Ok(AnsatzSolution {
            a: vec![0.0; m],
            e0: 0.0,
            v0: Polynomial::zero(),
            residual: Polynomial::zero(),
            annihilated_degrees: targets,
        });
    }

    let map = SpaceMap::new(m, space);
    let objective = |params: &[f64]| -> Vec<f64> {
        let a = map.embed(params);
        let (v0, _) = v0_and_e0(&a);
        let res = v - &v0;
        targets.iter().map(|&d| res.coefficient(d)).collect()
    };

    // Starting points: the closed-form seed (when available) first, then the
    // configured grid, all projected into the active parameter space.
    let mut starts: Vec<Vec<f64>> = Vec::new();
    if let Some(seed) = closed_form_seed(v, m) {
        starts.push(map.project(&seed));
    }
    for start in &config.multistart_grid {
        starts.push(map.project(start));
    }
    if starts.is_empty() {
        return Err(AnsatzError::InvalidConfig(
            "no starting points: multistart_grid is empty".into(),
        ));
    }

    let mut diagnostics: Vec<StartDiagnostic> = Vec::new();
    let mut roots: Vec<(usize, Vec<f64>)> = Vec::new(); // (start index, full a)

    for (start_index, p0) in starts.iter().enumerate() {
        let outcome = match newton(&objective, p0, config.newton_tolerance, config.max_iterations)
        {
            NewtonResult::Converged(p) => {
                let a = snap_zeros(&map, &p, &objective, config.newton_tolerance);
                if !is_admissible(&a) {
                    StartOutcome::Inadmissible
                } else if let Some(dup) = roots
                    .iter()
                    .find(|(_, existing)| max_abs_diff(existing, &a) <= ROOT_DEDUP_TOLERANCE)
                    .map(|(idx, _)| *idx)
                {
                    StartOutcome::DuplicateOf(dup)
                } else {
                    roots.push((start_index, a));
                    StartOutcome::Converged
                }
            }
            NewtonResult::MaxIterations(r) => StartOutcome::MaxIterations { residual_norm: r },
            NewtonResult::Stalled(r) => StartOutcome::LineSearchStall { residual_norm: r },
            NewtonResult::SingularJacobian => StartOutcome::SingularJacobian,
        };
        diagnostics.push(StartDiagnostic {
            start_index,
            outcome,
        });
    }

    if roots.is_empty() {
        if diagnostics
            .iter()
            .all(|d| d.outcome == StartOutcome::SingularJacobian)
        {
            return Err(AnsatzError::AllJacobiansSingular(diagnostics));
        }
        return Err(AnsatzError::NoAdmissibleRoot(diagnostics));
    }

    // Unique root: no tie-break needed.
    if roots.len() == 1 {
        return Ok(build_solution(v, roots.into_iter().next().unwrap().1, targets));
    }

    // Tie-break among distinct admissible roots by the variational energy
    // E0 + E1 of each trial state; roots whose quadrature fails are skipped
    // (their diagnostics record the failure). Evaluation order follows start
    // order, so the selection is deterministic.
    let quad_config = QuadratureConfig::default();
    let mut best: Option<(f64, AnsatzSolution)> = None;
    for (start_index, a) in roots {
        let candidate = build_solution(v, a, targets.clone());
        let energy = if candidate.residual.is_zero() {
            candidate.e0
        } else {
            match quadrature::first_order_correction(v, &candidate, &quad_config) {
                Ok(result) => result.total,
                Err(err) => {
                    diagnostics[start_index].outcome =
                        StartOutcome::TieBreakQuadratureFailed(err.to_string());
                    continue;
                }
            }
        };
        // `energy >= best` is false for NaN, so without this guard a
        // non-finite energy would silently displace a finite best.
        if !energy.is_finite() {
            diagnostics[start_index].outcome = StartOutcome::TieBreakQuadratureFailed(
                "first-order energy is not finite".into(),
            );
            continue;
        }
        match &best {
            Some((best_energy, _)) if energy >= *best_energy => {}
            _ => best = Some((energy, candidate)),
        }
    }
    match best {
        Some((_, solution)) => Ok(solution),
        None => Err(AnsatzError::NoAdmissibleRoot(diagnostics)),
    }
}

fn build_solution(v: &Polynomial, a: Vec<f64>, annihilated_degrees: Vec<usize>) -> AnsatzSolution {
    let (v0, e0) = v0_and_e0(&a);
    let residual = v - &v0;
    AnsatzSolution {
        a,
        e0,
        v0,
        residual,
        annihilated_degrees,
    }
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn infinity_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x.abs()).fold(0.0, f64::max)
}

/// Closed-form seed for the `M = 4`, even, degree <= 4 case. Eliminating the
/// quartic equation `16 a2 a4 = b4` from the quadratic one
/// `4 a2^2 - 12 a4 = b2` leaves the cubic `16 a2^3 - 4 b2 a2 - 3 b4 = 0`,
/// which has a unique nonnegative root whenever `b4 >= 0`; Newton then
/// refines the seed (for exactly solvable inputs it is already a root).
fn closed_form_seed(v: &Polynomial, m: usize) -> Option<Vec<f64>> {
    if m != 4 || v.parity() != Parity::Even || v.degree().unwrap_or(0) > 4 {
        return None;
    }
    let b2 = v.coefficient(2);
    let b4 = v.coefficient(4);
    if b4 < 0.0 {
        return None; // cubic has no nonnegative root
    }
    let a2 = if b4 == 0.0 {
        if b2 > 0.0 {
            0.5 * b2.sqrt()
        } else {
            0.0
        }
    } else {
        positive_cubic_root(b2, b4)
    };
    let a4 = (4.0 * a2 * a2 - b2) / 12.0;
    Some(vec![0.0, a2, 0.0, a4])
}

/// Unique positive root of `f(a) = 16 a^3 - 4 b2 a - 3 b4` for `b4 > 0`
/// (`f(0) < 0` and `f` crosses zero exactly once on the positive axis), by
/// bracketing bisection plus a Newton polish.
fn positive_cubic_root(b2: f64, b4: f64) -> f64 {
    let f = |a: f64| 16.0 * a * a * a - 4.0 * b2 * a - 3.0 * b4;
    let mut lo = 0.0f64;
    let mut hi = 1.0f64;
    while f(hi) <= 0.0 {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if f(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let mut a = 0.5 * (lo + hi);
    for _ in 0..4 {
        let fp = 48.0 * a * a - 4.0 * b2;
        if fp == 0.0 {
            break;
        }
        let next = a - f(a) / fp;
        if next.is_finite() && next > 0.0 {
            a = next;
        } else {
            break;
        }
    }
    a
}

enum NewtonResult {
    Converged(Vec<f64>),
    MaxIterations(f64),
    Stalled(f64),
    SingularJacobian,
}

/// Damped Newton iteration on the annihilation system. The Jacobian is
/// formed by central finite differences with per-component step
/// `1e-7 * max(1, |p_j|)`; a step is accepted only if it reduces the
/// infinity norm of the system, halving up to [`MAX_STEP_HALVINGS`] times.
fn newton<F>(objective: &F, p0: &[f64], tolerance: f64, max_iterations: u32) -> NewtonResult
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    let mut p = p0.to_vec();
    let mut fval = objective(&p);
    let mut fnorm = infinity_norm(&fval);
    let dim = p.len();
    for _ in 0..max_iterations {
        if fnorm < tolerance {
            return NewtonResult::Converged(p);
        }
        // Central-difference Jacobian, column by column.
        let mut jacobian = vec![vec![0.0; dim]; fval.len()];
        for j in 0..dim {
            let step = 1e-7 * p[j].abs().max(1.0);
            let mut plus = p.clone();
            plus[j] += step;
            let mut minus = p.clone();
            minus[j] -= step;
            let f_plus = objective(&plus);
            let f_minus = objective(&minus);
            for (k, row) in jacobian.iter_mut().enumerate() {
                row[j] = (f_plus[k] - f_minus[k]) / (2.0 * step);
            }
        }
        let rhs: Vec<f64> = fval.iter().map(|f| -f).collect();
        let Some(delta) = crate::linalg::solve_dense(jacobian, rhs) else {
            return NewtonResult::SingularJacobian;
        };
        let mut damping = 1.0;
        let mut accepted = false;
        for _ in 0..=MAX_STEP_HALVINGS {
            let trial: Vec<f64> = p
                .iter()
                .zip(&delta)
                .map(|(pi, di)| pi + damping * di)
                .collect();
            let f_trial = objective(&trial);
            let norm_trial = infinity_norm(&f_trial);
            if norm_trial < fnorm {
                p = trial;
                fval = f_trial;
                fnorm = norm_trial;
                accepted = true;
                break;
            }
            damping *= 0.5;
        }
        if !accepted {
            return NewtonResult::Stalled(fnorm);
        }
    }
    if fnorm < tolerance {
        NewtonResult::Converged(p)
    } else {
        NewtonResult::MaxIterations(fnorm)
    }
}

/// Snaps near-zero converged coefficients to exact zeros, keeping the snap
/// only when the annihilation residual still passes (within 10x tolerance).
fn snap_zeros<F>(map: &SpaceMap, params: &[f64], objective: &F, tolerance: f64) -> Vec<f64>
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    let a = map.embed(params);
    let scale = infinity_norm(&a).max(1.0);
    let threshold = ZERO_SNAP_RELATIVE * scale;
    let snapped: Vec<f64> = params
        .iter()
        .map(|&p| if p.abs() <= threshold { 0.0 } else { p })
        .collect();
    if snapped == params {
        return a;
    }
    if infinity_norm(&objective(&snapped)) < 10.0 * tolerance {
        map.embed(&snapped)
    } else {
        a
    }
}
