//! Weighted integration against the squared trial state, and the first-order
//! energy correction.
//!
//! The trial state `phi = exp(-h)` decays super-exponentially, so integrals
//! of the form `integral p(x) * phi(x)^2 dx` are truncated to a finite
//! radius chosen from the exponent itself and then evaluated with a
//! composite 16-point Gauss-Legendre rule whose panel count doubles until
//! two successive estimates agree. All integrands are rescaled by
//! `exp(2 * h_min)` (the minimum of `h` on the truncated interval) before
//! integration; the rescaling cancels in the Rayleigh ratio and keeps the
//! weight within floating-point range even for steep exponents.

use crate::ansatz::{exponent_polynomial, is_admissible, AnsatzSolution};
use crate::polynomial::Polynomial;
use serde::{Deserialize, Serialize};
use std::sync::OnceLock;
use thiserror::Error;

/// Errors from weighted integration.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadratureError {
    #[error("trial exponent is not admissible: the weight exp(-2h) is not integrable")]
    Inadmissible,
    #[error("invalid quadrature configuration: {0}")]
    InvalidConfig(String),
    #[error(
        "integral did not converge at {panels} panels: previous estimate {previous}, \
         latest {latest}"
    )]
    DidNotConverge {
        panels: usize,
        previous: f64,
        latest: f64,
    },
    #[error(
        "the weight exp(-2h) is numerically unresolvable on the truncation interval: \
         its mass is confined to a window narrower than any sampled panel"
    )]
    DegenerateWeight,
}

/// Configuration for the adaptive panel ladder.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    /// Two successive estimates must agree to this relative tolerance.
    pub relative_tolerance: f64,
    /// The truncation radius is chosen so the weight has decayed by a factor
    /// `exp(-tail_exponent)` relative to its interior maximum (must be at
    /// least 10; the truncated tail is then negligible at any supported
    /// tolerance).
    pub tail_exponent: f64,
    /// Maximum number of panel-count doublings before giving up. With 0
    /// doublings no second estimate exists to confirm convergence, so every
    /// integration fails.
    pub max_panel_doublings: u32,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            relative_tolerance: 1e-10,
            tail_exponent: 25.0,
            max_panel_doublings: 20,
        }
    }
}

fn validate_config(config: &QuadratureConfig) -> Result<(), QuadratureError> {
    if config.relative_tolerance <= 0.0 || !config.relative_tolerance.is_finite() {
        return Err(QuadratureError::InvalidConfig(
            "relative_tolerance must be positive and finite".into(),
        ));
    }
    validate_tail_exponent(config.tail_exponent)
}

fn validate_tail_exponent(tail_exponent: f64) -> Result<(), QuadratureError> {
    if tail_exponent < 10.0 || !tail_exponent.is_finite() {
        return Err(QuadratureError::InvalidConfig(
            "tail_exponent must be finite and at least 10".into(),
        ));
    }
    Ok(())
}

/// First-order perturbation data for a solved trial state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerturbationResult {
    /// Zeroth-order energy of the solvable problem.
    pub e0: f64,
    /// First-order correction `<phi|V - V0|phi> / <phi|phi>`.
    pub e1: f64,
    /// `e0 + e1`; equals the Rayleigh quotient of the trial state, hence an
    /// upper bound on the true ground-state energy.
    pub total: f64,
    /// Truncation radius used for both integrals (0 when no quadrature ran).
    pub radius: f64,
    /// Final panel count (0 when no quadrature ran).
    pub panels: usize,
    /// Bound on the quadrature error of `e1`, from the last ladder step; at
    /// most `relative_tolerance * max(1, |e1|)`.
    pub estimated_error: f64,
}

/// 16-point Gauss-Legendre nodes and weights on [-1, 1], computed once by
/// Newton iteration on the Legendre polynomial.
fn gauss_legendre_16() -> &'static ([f64; 16], [f64; 16]) {
    static TABLE: OnceLock<([f64; 16], [f64; 16])> = OnceLock::new();
    TABLE.get_or_init(|| {
        const N: usize = 16;
        let mut nodes = [0.0; N];
        let mut weights = [0.0; N];
        for i in 0..N.div_ceil(2) {
            // Chebyshev-like initial guess for the i-th root, then Newton.
            let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (N as f64 + 0.5)).cos();
            let mut derivative = 0.0;
            for _ in 0..100 {
                // Recurrence for P_N(z) and P_{N-1}(z).
                let mut p_curr = 1.0;
                let mut p_prev = 0.0;
                for j in 0..N {
                    let p_older = p_prev;
                    p_prev = p_curr;
                    p_curr = ((2 * j + 1) as f64 * z * p_prev - j as f64 * p_older)
                        / (j + 1) as f64;
                }
                derivative = N as f64 * (z * p_curr - p_prev) / (z * z - 1.0);
                let step = p_curr / derivative;
                z -= step;
                if step.abs() < 1e-15 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - z * z) * derivative * derivative);
            nodes[i] = -z;
            nodes[N - 1 - i] = z;
            weights[i] = w;
            weights[N - 1 - i] = w;
        }
        (nodes, weights)
    })
}

/// Composite Gauss-Legendre sum of a pair of integrands over [-r, r] with
/// the given number of equal panels. Returns both sums; the integrands share
/// every node evaluation.
fn composite_pair<F>(eval: &F, r: f64, panels: usize) -> (f64, f64)
where
    F: Fn(f64) -> (f64, f64),
{
    let (nodes, weights) = gauss_legendre_16();
    let width = 2.0 * r / panels as f64;
    let half = 0.5 * width;
    let mut first = 0.0;
    let mut second = 0.0;
    for k in 0..panels {
        let center = -r + (k as f64 + 0.5) * width;
        for (z, w) in nodes.iter().zip(weights.iter()) {
            let x = center + half * z;
            let (f, g) = eval(x);
            let scale = half * w;
            first += scale * f;
            second += scale * g;
        }
    }
    (first, second)
}

/// Minimum of a polynomial over [-r, r]: coarse scan on a uniform grid, then
/// golden-section refinement around the best grid cell.
fn interior_minimum(p: &Polynomial, r: f64) -> f64 {
    const GRID: usize = 2000;
    let mut best = f64::INFINITY;
    let mut best_index = 0;
    for i in 0..=GRID {
        let x = -r + 2.0 * r * i as f64 / GRID as f64;
        let y = p.evaluate(x);
        if y < best {
            best = y;
            best_index = i;
        }
    }
    let cell = |i: usize| -r + 2.0 * r * i as f64 / GRID as f64;
    let mut lo = cell(best_index.saturating_sub(1));
    let mut hi = cell((best_index + 1).min(GRID));
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = p.evaluate(x1);
    let mut f2 = p.evaluate(x2);
    for _ in 0..100 {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = p.evaluate(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = p.evaluate(x2);
        }
    }
    best.min(f1).min(f2)
}

/// Smallest radius (to within 1e-3, rounded up) at which the exponent has
/// risen by at least `tail_exponent` above its interior minimum on both
/// sides, i.e. `min(h(R), h(-R)) - min_{|x| <= R} h(x) >= tail_exponent`.
/// Returns 1.0 whenever the condition already holds there.
pub fn integration_radius(a: &[f64], tail_exponent: f64) -> Result<f64, QuadratureError> {
    validate_tail_exponent(tail_exponent)?;
    if !is_admissible(a) {
        return Err(QuadratureError::Inadmissible);
    }
    let h = exponent_polynomial(a);
    let cleared = |r: f64| {
        let boundary = h.evaluate(r).min(h.evaluate(-r));
        boundary - interior_minimum(&h, r) - tail_exponent >= 0.0
    };
    if cleared(1.0) {
        return Ok(1.0);
    }
    let mut hi = 1.0;
    while !cleared(hi) {
        hi *= 2.0;
    }
    let mut lo = hi / 2.0;
    while hi - lo > 1e-3 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if cleared(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Integrates `p(x) * exp(-2 h(x) + 2 h_min)` over the truncation interval
/// `[-R, R]`, with `R` from [`integration_radius`] and `h_min` the interior
/// minimum of the exponent. The panel count starts at `max(1, ceil(R))` and
/// doubles until two successive estimates agree to the configured relative
/// tolerance (measured against the larger of the integral itself and the
/// bare weight integral, so near-zero results of odd integrands still
/// converge).
pub fn integrate_weighted(
    p: &Polynomial,
    a: &[f64],
    config: &QuadratureConfig,
) -> Result<f64, QuadratureError> {
    validate_config(config)?;
    if !is_admissible(a) {
        return Err(QuadratureError::Inadmissible);
    }
    let radius = integration_radius(a, config.tail_exponent)?;
    let h = exponent_polynomial(a);
    let h_min = interior_minimum(&h, radius);
    let eval = |x: f64| {
        let weight = (-2.0 * (h.evaluate(x) - h_min)).exp();
        (p.evaluate(x) * weight, weight)
    };
    let mut panels = (radius.ceil() as usize).max(1);
    let (mut value, _) = composite_pair(&eval, radius, panels);
    let mut previous = value;
    for _ in 0..config.max_panel_doublings {
        panels *= 2;
        let (next, weight_integral) = composite_pair(&eval, radius, panels);
        let scale = next.abs().max(weight_integral);
        if (next - value).abs() <= config.relative_tolerance * scale {
            // The rescaled weight peaks at exactly 1 somewhere inside the
            // interval, so a zero weight integral means every sample missed
            // the region holding the mass — the "converged" value is an
            // artifact of sampling nothing, not a resolved integral.
            if weight_integral == 0.0 {
                return Err(QuadratureError::DegenerateWeight);
            }
            return Ok(next);
        }
        previous = value;
        value = next;
    }
    Err(QuadratureError::DidNotConverge {
        panels,
        previous,
        latest: value,
    })
}

/// First-order energy correction for a solved trial state:
/// `e1 = integral (V - V0) phi^2 / integral phi^2` with `phi = exp(-h)`.
/// Both integrals share one panel ladder, each converged to half the
/// configured tolerance, so the ratio meets the full tolerance. When the
/// perturbation `V - V0` is identically zero the correction is exactly zero
/// and no quadrature runs.
pub fn first_order_correction(
    v: &Polynomial,
    solution: &AnsatzSolution,
    config: &QuadratureConfig,
) -> Result<PerturbationResult, QuadratureError> {
    validate_config(config)?;
    if !is_admissible(&solution.a) {
        return Err(QuadratureError::Inadmissible);
    }
    // Recompute the perturbation from the caller's potential so the result
    // is correct even if `v` differs from the potential originally solved.
    let perturbation = v - &solution.v0;
    if perturbation.is_zero() {
        return Ok(PerturbationResult {
            e0: solution.e0,
            e1: 0.0,
            total: solution.e0,
            radius: 0.0,
            panels: 0,
            estimated_error: 0.0,
        });
    }
    let radius = integration_radius(&solution.a, config.tail_exponent)?;
    let h = exponent_polynomial(&solution.a);
    let h_min = interior_minimum(&h, radius);
    let eval = |x: f64| {
        let weight = (-2.0 * (h.evaluate(x) - h_min)).exp();
        (perturbation.evaluate(x) * weight, weight)
    };
    let half_tolerance = 0.5 * config.relative_tolerance;
    let mut panels = (radius.ceil() as usize).max(1);
    let (mut numerator, mut denominator) = composite_pair(&eval, radius, panels);
    let mut previous_ratio = numerator / denominator;
    for _ in 0..config.max_panel_doublings {
        panels *= 2;
        let (next_num, next_den) = composite_pair(&eval, radius, panels);
        let delta_num = (next_num - numerator).abs();
        let delta_den = (next_den - denominator).abs();
        previous_ratio = numerator / denominator;
        numerator = next_num;
        denominator = next_den;
        let num_scale = next_num.abs().max(next_den);
        if delta_num <= half_tolerance * num_scale && delta_den <= half_tolerance * next_den {
            let e1 = numerator / denominator;
            // A zero denominator trivially satisfies both delta checks while
            // carrying no information: every sample missed the weight mass.
            if !e1.is_finite() {
                return Err(QuadratureError::DegenerateWeight);
            }
            let estimated_error = (delta_num + e1.abs() * delta_den) / denominator;
            return Ok(PerturbationResult {
                e0: solution.e0,
                e1,
                total: solution.e0 + e1,
                radius,
                panels,
                estimated_error,
            });
        }
    }
    Err(QuadratureError::DidNotConverge {
        panels,
        previous: previous_ratio,
        latest: numerator / denominator,
    })
}
