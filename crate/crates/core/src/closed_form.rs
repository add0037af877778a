//! Series-reduced single-plant model and its closed-form optimum.
//!
//! The exact balance equations are linearised in `gamma theta`, which turns the cost per unit
//! time into a function of `(T4, T)` alone. Under complete backlogging it takes the form
//! `A T + B T4 + C T4^2 / T + K / T + D`, minimized in closed form when `B < 0` and
//! `4AC > B^2`. Partial backlogging is minimized numerically.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{
    decay_warning, validate, CaseLabel, CostParams, CycleTimes, GenericCoefficients, ProductionParams, Solution,
};
use crate::optimizer::{minimize_2d, DEFAULT_TOL};
use crate::trajectory::boundary_levels;

/// How much of the `gamma theta` series the time split keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitOrder {
    /// Stock balance `(alpha_r p_r - lambda) T3 + (alpha p - lambda) T2 = lambda T4`.
    FirstOrder,
    /// Stock balance with the consumption term `lambda (T4 + gamma theta T4^2 / 2)`.
    SecondOrder,
}

/// `omega = beta lambda + (alpha p - (1 - beta) lambda) p_r / ((1 - alpha) p)`, the `T3`
/// coefficient of the imperfect-item balance. Undefined for perfect yield.
pub fn omega(params: &ProductionParams) -> Option<f64> {
    (params.alpha < 1.0).then(|| {
        params.beta * params.lambda
            + (params.alpha * params.p - params.beta_lost() * params.lambda) * params.p_r
                / ((1.0 - params.alpha) * params.p)
    })
}

/// Production and rework times `(T2, T3)` from the linear imperfect-item balance and the
/// second-order stock balance. Either being negative means `(t4, t)` is infeasible.
pub fn approx_reduce(t4: f64, t: f64, params: &ProductionParams) -> Result<(f64, f64)> {
    approx_reduce_with(t4, t, params, SplitOrder::SecondOrder)
}

pub fn approx_reduce_with(t4: f64, t: f64, params: &ProductionParams, order: SplitOrder) -> Result<(f64, f64)> {
    let (t2, t3) = split(t4, t, params, order);
    if t2 < 0.0 {
        return Err(Error::NegativePeriod { name: "t2", value: t2 });
    }
    if t3 < 0.0 {
        return Err(Error::NegativePeriod { name: "t3", value: t3 });
    }
    Ok((t2, t3))
}

fn split(t4: f64, t: f64, params: &ProductionParams, order: SplitOrder) -> (f64, f64) {
    let anp = params.net_production();
    let consumed = match order {
        SplitOrder::FirstOrder => params.lambda * t4,
        SplitOrder::SecondOrder => params.lambda * (t4 + params.decay() * t4 * t4 / 2.0),
    };
    match omega(params) {
        None => (consumed / anp, 0.0),
        Some(omega) => {
            let backlogged = params.beta * params.lambda * (t4 - t);
            let t3 = (consumed - backlogged) / (params.net_rework() + omega);
            let t2 = (omega * t3 + backlogged) / anp;
            (t2, t3)
        }
    }
}

/// All period lengths for `(t4, t)`: `(T2, T3)` from the series split and `T1`, `T5` from
/// the backlog balance.
pub fn approx_times(t4: f64, t: f64, params: &ProductionParams, order: SplitOrder) -> Result<CycleTimes> {
    let (t2, t3) = approx_reduce_with(t4, t, params, order)?;
    let rest = t - t2 - t3 - t4;
    if rest < 0.0 {
        return Err(Error::NegativePeriod { name: "t1 + t5", value: rest });
    }
    let shared = params.alpha * params.p - params.beta_lost() * params.lambda;
    Ok(CycleTimes {
        t1: params.beta * params.lambda / shared * rest,
        t2,
        t3,
        t4,
        t5: params.net_production() / shared * rest,
        t6: None,
        total: t,
    })
}

/// Series-reduced cost per unit time under partial backlogging.
///
/// `(T2, T3)` come from the first-order split, so that at `beta = 1` the value coincides with
/// [`generic_cost`] on [`coefficients_complete`].
pub fn approx_cost_partial(t4: f64, t: f64, params: &ProductionParams, costs: &CostParams) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::InvalidArgument(format!("cycle length must be > 0, got {t}")));
    }
    let (t2, t3) = approx_reduce_with(t4, t, params, SplitOrder::FirstOrder)?;
    let lambda = params.lambda;
    let anp = params.net_production();
    let shared = params.alpha * params.p - params.beta_lost() * lambda;
    let rest = t - t2 - t3 - t4;

    let deterioration = costs.deterioration_weight(params.gamma) * lambda * params.theta * t4 * t4 / 2.0;
    let holding = costs.h_s
        * (anp * t2 * t2 / 2.0 + anp * t2 * t3 + params.net_rework() * t3 * t3 / 2.0 + lambda * t4 * t4 / 2.0);
    let imperfect = if t3 > 0.0 {
        costs.h_r * (params.p_r * params.p_r + (1.0 - params.alpha) * params.p * params.p_r) * t3 * t3
            / (2.0 * (1.0 - params.alpha) * params.p)
    } else {
        0.0
    };
    let unrecoverable = costs.c_p * (1.0 - params.alpha_r) * params.p_r * t3;
    let shortage = costs.c_s * anp * params.beta * lambda / (2.0 * shared) * rest * rest;
    let lost = costs.c_u * anp * params.beta_lost() * lambda / shared * rest;
    Ok((deterioration + holding + imperfect + costs.k + unrecoverable + shortage + lost) / t)
}

/// Coefficients of the complete-backlog objective `A T + B T4 + C T4^2/T + K/T + D`.
pub fn coefficients_complete(params: &ProductionParams, costs: &CostParams) -> Result<GenericCoefficients> {
    if !params.complete_backlog() {
        return Err(Error::NotCompleteBacklog(params.beta));
    }
    let ProductionParams { p, alpha, lambda, theta, gamma, p_r, alpha_r, .. } = *params;
    let anp = params.net_production();
    let arn = params.net_rework();
    let eta = (1.0 - alpha) * lambda / (alpha * p_r + (1.0 - alpha) * alpha_r * p_r);
    // net stock build-up per unit cycle length ahead of the shortage period
    let build = (1.0 - eta) * anp + eta * arn;

    let a = costs.h_s * (arn * arn * eta * eta / (2.0 * anp) - arn * eta * eta / 2.0)
        + if alpha < 1.0 {
            costs.h_r * (p_r * p_r + (1.0 - alpha) * p * p_r) * eta * eta / (2.0 * (1.0 - alpha) * p)
        } else {
            0.0
        }
        + costs.c_s * lambda * build * build / (2.0 * alpha * p * anp);
    let b = costs.h_s * (lambda * eta - arn * lambda * eta / anp) - costs.c_s * lambda * build / anp;
    let c = costs.deterioration_weight(gamma) * lambda * theta / 2.0
        + costs.h_s * (lambda * lambda / (2.0 * anp) + lambda / 2.0)
        + costs.c_s * alpha * p * lambda / (2.0 * anp);
    let d = costs.c_p * (1.0 - alpha_r) * p_r * eta;
    Ok(GenericCoefficients {
        a,
        b,
        c,
        d,
        k_total: costs.k,
        eta: Some(eta),
        omega: omega(params),
    })
}

/// `a t + b t4 + c t4^2 / t + k / t + d`
pub fn generic_cost(coeffs: &GenericCoefficients, t4: f64, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::InvalidArgument(format!("cycle length must be > 0, got {t}")));
    }
    Ok(coeffs.a * t + coeffs.b * t4 + coeffs.c * t4 * t4 / t + coeffs.k_total / t + coeffs.d)
}

/// Stationary point `(T4*, T*)` of [`generic_cost`].
///
/// Exists only for `B < 0` and `4AC > B^2` (with `C, K > 0`); `B = 0` counts as infeasible.
pub fn solve_closed_form(coeffs: &GenericCoefficients) -> Result<(f64, f64)> {
    let GenericCoefficients { a, b, c, k_total: k, .. } = *coeffs;
    if ![a, b, c, k].iter().all(|v| v.is_finite()) {
        return Err(Error::InvalidArgument("coefficients must be finite".into()));
    }
    if !(b < 0.0) {
        return Err(Error::NoInteriorOptimum(format!("B = {b} must be < 0")));
    }
    if !(c > 0.0 && k > 0.0) {
        return Err(Error::NoInteriorOptimum(format!("C = {c} and K = {k} must be > 0")));
    }
    let disc = 4.0 * a * c - b * b;
    if !(disc > 0.0) {
        return Err(Error::NoInteriorOptimum(format!("4AC - B^2 = {disc} must be > 0")));
    }
    let t4 = -b * (k / (c * disc)).sqrt();
    let t = 2.0 * (c * k / disc).sqrt();
    Ok((t4, t))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HessianReport {
    pub matrix: [[f64; 2]; 2],
    /// `4 C K / T^4`
    pub determinant: f64,
    pub positive_definite: bool,
}

/// Hessian of [`generic_cost`] in `(T4, T)` and its leading-minor test.
pub fn hessian_check(coeffs: &GenericCoefficients, t4: f64, t: f64) -> Result<HessianReport> {
    if !(t > 0.0) {
        return Err(Error::InvalidArgument(format!("cycle length must be > 0, got {t}")));
    }
    let (c, k) = (coeffs.c, coeffs.k_total);
    let off = -2.0 * c * t4 / (t * t);
    let matrix = [[2.0 * c / t, off], [off, 2.0 * k / t.powi(3) + 2.0 * c * t4 * t4 / t.powi(3)]];
    let determinant = 4.0 * c * k / t.powi(4);
    Ok(HessianReport {
        matrix,
        determinant,
        positive_definite: matrix[0][0] > 0.0 && determinant > 0.0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    /// Route complete backlogging through the numerical partial-backlog path.
    pub force_partial: bool,
    /// Domain tolerance of the partial-backlog minimization.
    pub tol: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { force_partial: false, tol: DEFAULT_TOL }
    }
}

/// Upper limit on the partial-backlog cycle length, as a multiple of the complete-backlog `T*`.
pub const PARTIAL_SEARCH_SPAN: f64 = 10.0;
/// Objective value of an infeasible probe, as a multiple of the seed objective.
pub const INFEASIBLE_PENALTY: f64 = 1e6;

pub fn solve_basic(params: &ProductionParams, costs: &CostParams) -> Result<Solution> {
    solve_basic_with(params, costs, &SolveOptions::default())
}

pub fn solve_basic_with(params: &ProductionParams, costs: &CostParams, options: &SolveOptions) -> Result<Solution> {
    let (params, costs) = validate(*params, *costs)?;
    let (t4, t, tc, label) = if params.complete_backlog() && !options.force_partial {
        let coeffs = coefficients_complete(&params, &costs)?;
        let (t4, t) = solve_closed_form(&coeffs)?;
        (t4, t, generic_cost(&coeffs, t4, t)?, CaseLabel::BasicComplete)
    } else {
        let (t4, t, tc) = minimize_partial(&params, &costs, options.tol)?;
        (t4, t, tc, CaseLabel::BasicPartial)
    };

    // the partial path minimized over the first-order split, so its times must come from it too
    let order = match label {
        CaseLabel::BasicComplete => SplitOrder::SecondOrder,
        _ => SplitOrder::FirstOrder,
    };
    let times = approx_times(t4, t, &params, order)?;
    let levels = boundary_levels(&times, &params);
    let t_p = times.t1 + times.t2;
    let t_p_proportional = (label == CaseLabel::BasicComplete).then(|| {
        params.lambda * t / (params.alpha * params.p + (1.0 - params.alpha) * params.alpha_r * params.p)
    });
    Ok(Solution {
        t4_star: t4,
        t_star: t,
        times,
        levels,
        t_p,
        t_p_proportional,
        q: params.p * t_p,
        tc,
        case_label: label,
        clamped: false,
        warnings: decay_warning(&params, t).into_iter().collect(),
    })
}

/// Numerical minimum of [`approx_cost_partial`], seeded at the complete-backlog optimum.
fn minimize_partial(params: &ProductionParams, costs: &CostParams, tol: f64) -> Result<(f64, f64, f64)> {
    let complete = ProductionParams { beta: 1.0, ..*params };
    let seed = solve_closed_form(&coefficients_complete(&complete, costs)?)?;
    let t_max = PARTIAL_SEARCH_SPAN * seed.1;
    let seed_value = approx_cost_partial(seed.0, seed.1, params, costs)
        .or_else(|_| approx_cost_partial(seed.0, seed.1, &complete, costs))?;
    let penalty = INFEASIBLE_PENALTY * seed_value.abs().max(1.0);
    let objective = |t4: f64, t: f64| {
        if !(t4 > 0.0 && t4 < t && t <= t_max) {
            return penalty;
        }
        match approx_times(t4, t, params, SplitOrder::FirstOrder) {
            Ok(_) => approx_cost_partial(t4, t, params, costs).unwrap_or(penalty),
            Err(_) => penalty,
        }
    };
    let report = minimize_2d(objective, seed, tol)?;
    if report.value >= penalty {
        return Err(Error::NoInteriorOptimum("no feasible cycle found near the seed".into()));
    }
    Ok((report.point.0, report.point.1, report.value))
}
