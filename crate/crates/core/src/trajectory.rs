//! Exact inventory trajectories and the exact (series-free) cost objectives.
//!
//! Serviceable stock obeys `I' + gamma theta I = rate` in the production, rework and
//! consumption periods and is linear in the two backlog periods. Every exponential is
//! evaluated through the ratios in [`crate::numeric`] so that all formulas stay accurate
//! as `gamma theta -> 0`.

use std::fmt;
use std::io::Write;

use serde::Serialize;

use crate::aggregated::recovered_stock;
use crate::error::{Error, Result};
use crate::model::{AggregatedParams, CostParams, CycleTimes, InventoryLevels, ProductionParams, Solution};
use crate::numeric::{expm1_ratio, expm1_sub_ratio, format_significant, neg_ln1m_ratio};
use crate::optimizer::bracket_root;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Phase {
    P1,
    P2,
    P3,
    P4,
    P5,
    /// Depletion of the central plant's recovered stock.
    #[serde(rename = "P6-central")]
    P6Central,
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Phase::P1 => "P1",
            Phase::P2 => "P2",
            Phase::P3 => "P3",
            Phase::P4 => "P4",
            Phase::P5 => "P5",
            Phase::P6Central => "P6-central",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhasePoint {
    pub t: f64,
    pub phase: Phase,
    /// Signed serviceable stock; negative values are backlog.
    pub serviceable: f64,
    pub imperfect: f64,
    /// Recovered stock at the central plant (aggregated model only).
    pub recovered: Option<f64>,
}

/// Phase containing `t`. A boundary instant belongs to the phase that starts there,
/// except the cycle end, which belongs to the last period.
pub fn phase_at(t: f64, times: &CycleTimes) -> Phase {
    let b = times.boundaries();
    let phases = [Phase::P1, Phase::P2, Phase::P3, Phase::P4];
    for (end, phase) in b.iter().zip(phases) {
        if t < *end {
            return phase;
        }
    }
    Phase::P5
}

fn check_time(t: f64, times: &CycleTimes) -> Result<()> {
    if !(t >= 0.0 && t <= times.total) {
        return Err(Error::TimeOutOfRange { t, total: times.total });
    }
    Ok(())
}

/// Stock at the end of production, `(alpha p - lambda)/(gamma theta) (1 - e^{-gamma theta T2})`.
fn stock_after_production(t2: f64, params: &ProductionParams) -> f64 {
    params.net_production() * t2 * expm1_ratio(-params.decay() * t2)
}

/// `I3(s)` for a rework period entered with stock `start`.
fn rework_level(start: f64, s: f64, params: &ProductionParams) -> f64 {
    let g = params.decay();
    start * (-g * s).exp() + params.net_rework() * s * expm1_ratio(-g * s)
}

/// `I4(s)` for a consumption period entered with stock `start`.
fn consumption_level(start: f64, s: f64, params: &ProductionParams) -> f64 {
    let g = params.decay();
    start * (-g * s).exp() - params.lambda * s * expm1_ratio(-g * s)
}

/// Signed serviceable inventory at time `t` of a cycle.
///
/// Each period starts from the level the previous one ended with, so the curve is
/// continuous for any `times`; it closes (`I4(T4) = 0`, `I5(T5) = -I_b`) only when the
/// times satisfy the exact reduction.
pub fn serviceable_level(t: f64, times: &CycleTimes, params: &ProductionParams) -> Result<f64> {
    check_time(t, times)?;
    let anp = params.net_production();
    let b = times.boundaries();
    let level = match phase_at(t, times) {
        Phase::P1 => anp * t - anp * times.t1,
        Phase::P2 => stock_after_production(t - b[0], params),
        Phase::P3 => {
            let is = stock_after_production(times.t2, params);
            rework_level(is, t - b[1], params)
        }
        Phase::P4 => {
            let is = stock_after_production(times.t2, params);
            let im = rework_level(is, times.t3, params);
            consumption_level(im, t - b[2], params)
        }
        _ => -params.beta * params.lambda * (t - b[3]),
    };
    Ok(level)
}

/// Imperfect-item stock at time `t`.
///
/// With `shipped_after_production` the stock leaves the plant at the end of production
/// (aggregated model); otherwise it is reworked on site at rate `p_r`.
pub fn imperfect_level(
    t: f64,
    times: &CycleTimes,
    params: &ProductionParams,
    shipped_after_production: bool,
) -> Result<f64> {
    check_time(t, times)?;
    let produced = times.t1 + times.t2;
    let inflow = (1.0 - params.alpha) * params.p;
    if t <= produced {
        return Ok(inflow * t);
    }
    if shipped_after_production {
        return Ok(0.0);
    }
    let peak = inflow * produced;
    Ok((peak - params.p_r * (t - produced)).max(0.0))
}

/// Boundary stocks `I_s`, `I_m`, `I_b`, `I_c` for the given period lengths.
pub fn boundary_levels(times: &CycleTimes, params: &ProductionParams) -> InventoryLevels {
    let g = params.decay();
    InventoryLevels {
        i_s: stock_after_production(times.t2, params),
        i_m: params.lambda * times.t4 * expm1_ratio(g * times.t4),
        i_b: params.net_production() * times.t1,
        i_c: (1.0 - params.alpha) * params.p * (times.t1 + times.t2),
        n_i_c: None,
    }
}

/// Production time after which the stock reaches the level that a consumption period of
/// length `t4` depletes exactly: solves `(alpha p - lambda)(1 - e^{-g T2}) = lambda (e^{g T4} - 1)`.
pub(crate) fn production_span_for(t4: f64, params: &ProductionParams) -> Result<f64> {
    let g = params.decay();
    let anp = params.net_production();
    let need = params.lambda * t4 * expm1_ratio(g * t4);
    let u = g * need / anp;
    if !(u < 1.0) {
        return Err(Error::NoRoot(format!(
            "production cannot build the stock {need} consumed in t4 = {t4}"
        )));
    }
    Ok(need / anp * neg_ln1m_ratio(u))
}

/// Splits the cycle `(t4, t)` into all five periods using the exact balance equations:
/// the linear material balance of imperfect items and the transcendental stock balance,
/// solved for `T3` by bisection.
pub fn exact_reduce(t4: f64, t: f64, params: &ProductionParams) -> Result<CycleTimes> {
    if !(t4 > 0.0 && t4 < t && t.is_finite()) {
        return Err(Error::InvalidArgument(format!("need 0 < t4 < t, got t4 = {t4}, t = {t}")));
    }
    let g = params.decay();
    let anp = params.net_production();
    let lambda = params.lambda;
    let backlogged = params.beta * lambda;
    let shared = params.alpha * params.p - params.beta_lost() * lambda;

    let (t2, t3) = if params.alpha == 1.0 {
        (production_span_for(t4, params)?, 0.0)
    } else {
        let omega = backlogged + shared * params.p_r / ((1.0 - params.alpha) * params.p);
        let t2_of = |t3: f64| (omega * t3 + backlogged * (t4 - t)) / anp;
        let consumed = lambda * t4 * expm1_ratio(g * t4);
        // stock balance divided by gamma theta
        let residual = |t3: f64| {
            let t2 = t2_of(t3);
            consumed
                - anp * (-g * t3).exp() * t2 * expm1_ratio(-g * t2)
                - params.net_rework() * t3 * expm1_ratio(-g * t3)
        };
        let hi = t - t4;
        let root = bracket_root(residual, 0.0, hi, hi * 1e-14).map_err(|e| match e {
            Error::NoSignChange { f_lo, f_hi, .. } => Error::NoRoot(format!(
                "stock balance has no sign change on T3 in [0, {hi}] ({f_lo}, {f_hi})"
            )),
            other => other,
        })?;
        (t2_of(root.root), root.root)
    };

    if t2 < 0.0 {
        return Err(Error::NegativePeriod { name: "t2", value: t2 });
    }
    let mut rest = t - t2 - t3 - t4;
    if rest < 0.0 {
        if rest < -1e-12 * t {
            return Err(Error::NegativePeriod { name: "t1 + t5", value: rest });
        }
        rest = 0.0;
    }
    Ok(CycleTimes {
        t1: backlogged / shared * rest,
        t2,
        t3,
        t4,
        t5: anp / shared * rest,
        t6: None,
        total: t,
    })
}

/// Per-unit-time cost of one cycle, split by cost driver.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CostBreakdown {
    pub deterioration: f64,
    pub serviceable_holding: f64,
    pub imperfect_holding: f64,
    pub setup: f64,
    pub unrecoverable: f64,
    pub shortage: f64,
    pub lost_sales: f64,
}

impl CostBreakdown {
    pub fn total(&self) -> f64 {
        self.deterioration
            + self.serviceable_holding
            + self.imperfect_holding
            + self.setup
            + self.unrecoverable
            + self.shortage
            + self.lost_sales
    }
}

/// Integral of serviceable stock over production, rework and consumption.
pub(crate) fn serviceable_area(times: &CycleTimes, params: &ProductionParams) -> f64 {
    let g = params.decay();
    let (t2, t3, t4) = (times.t2, times.t3, times.t4);
    let is = stock_after_production(t2, params);
    params.net_production() * t2 * t2 * expm1_sub_ratio(-g * t2)
        + is * t3 * expm1_ratio(-g * t3)
        + params.net_rework() * t3 * t3 * expm1_sub_ratio(-g * t3)
        + params.lambda * t4 * t4 * expm1_sub_ratio(g * t4)
}

/// Exact single-plant cost per unit time for fully specified period lengths.
pub fn basic_cost_breakdown(times: &CycleTimes, params: &ProductionParams, costs: &CostParams) -> CostBreakdown {
    let t = times.total;
    let anp = params.net_production();
    let lambda = params.lambda;
    // screened-out quantity; the leaked share scales it by (1 - gamma)/gamma
    let screened = anp * times.t2 + params.net_rework() * times.t3 - lambda * times.t4;
    let weight = costs.c + (1.0 - params.gamma) / params.gamma * costs.c_d;
    let reworked = params.p_r * times.t3;
    CostBreakdown {
        deterioration: weight * screened / t,
        serviceable_holding: costs.h_s * serviceable_area(times, params) / t,
        imperfect_holding: costs.h_r * (times.t1 + times.t2 + times.t3) * reworked / 2.0 / t,
        setup: costs.k / t,
        unrecoverable: costs.c_p * (1.0 - params.alpha_r) * reworked / t,
        shortage: costs.c_s
            * (anp * times.t1 * times.t1 / 2.0 + params.beta * lambda * times.t5 * times.t5 / 2.0)
            / t,
        lost_sales: costs.c_u * params.beta_lost() * lambda * times.t5 / t,
    }
}

/// Exact single-plant cost per unit time at `(t4, t)`, with no series approximation.
pub fn exact_cost_basic(t4: f64, t: f64, params: &ProductionParams, costs: &CostParams) -> Result<f64> {
    let times = exact_reduce(t4, t, params)?;
    Ok(basic_cost_breakdown(&times, params, costs).total())
}

/// Which side of the central-plant case boundary a cycle falls on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CentralCase {
    /// Recovered stock is left over at cycle end and sold off.
    Leftover,
    /// Recovered stock runs out before cycle end.
    Stockout,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CentralCost {
    /// Cost per cycle `F(T)`.
    pub per_cycle: f64,
    pub case: CentralCase,
    pub t6: f64,
    pub n_i_c: f64,
}

/// Time at which the central plant's recovered stock runs out.
pub fn central_depletion_time(n_i_c: f64, agg: &AggregatedParams) -> f64 {
    n_i_c / (agg.plant.lambda + n_i_c * agg.plant.decay())
}

/// Recovered stock at the central plant, `nI_c (1 - gamma theta s) - lambda s`, floored at zero.
pub fn recovered_level(s: f64, n_i_c: f64, agg: &AggregatedParams) -> f64 {
    (n_i_c * (1.0 - agg.plant.decay() * s) - agg.plant.lambda * s).max(0.0)
}

/// Central-plant cost per cycle when stock is left over at `t`.
pub fn central_cost_leftover(t: f64, n_i_c: f64, agg: &AggregatedParams) -> f64 {
    let lambda = agg.plant.lambda;
    let g = agg.plant.decay();
    agg.h_c * (n_i_c * t - (lambda + n_i_c * g) / 2.0 * t * t)
        + agg.c_v * (n_i_c * (1.0 - g * t) - lambda * t)
        + agg.k_c
}

/// Central-plant cost per cycle when stock runs out at `T6 < t`.
pub fn central_cost_stockout(t: f64, n_i_c: f64, agg: &AggregatedParams) -> f64 {
    let lambda = agg.plant.lambda;
    let g = agg.plant.decay();
    let t6 = central_depletion_time(n_i_c, agg);
    agg.h_c * n_i_c * n_i_c / (2.0 * (lambda + n_i_c * g)) + agg.costs.c_u * lambda * (t - t6) + agg.k_c
}

pub fn central_cost(t: f64, n_i_c: f64, agg: &AggregatedParams) -> CentralCost {
    let t6 = central_depletion_time(n_i_c, agg);
    if t6 >= t {
        CentralCost {
            per_cycle: central_cost_leftover(t, n_i_c, agg),
            case: CentralCase::Leftover,
            t6,
            n_i_c,
        }
    } else {
        CentralCost {
            per_cycle: central_cost_stockout(t, n_i_c, agg),
            case: CentralCase::Stockout,
            t6,
            n_i_c,
        }
    }
}

/// Per-unit-time cost of the `n` local plants at `(t4, t)`, before any coefficient simplification.
pub fn local_plants_cost(t4: f64, t: f64, agg: &AggregatedParams) -> f64 {
    let pl = &agg.plant;
    let c = &agg.costs;
    let g = pl.decay();
    let lambda = pl.lambda;
    let ap = pl.alpha * pl.p;
    let anp = pl.net_production();
    let deterioration = c.deterioration_weight(pl.gamma) * lambda * pl.theta * t4 * t4 / 2.0;
    let holding = c.h_s * (lambda / anp) * (ap * t4 * t4 + g * lambda * t4.powi(3)) / 2.0;
    let produced = lambda * t / ap + g * lambda * t4 * t4 / (2.0 * ap);
    let imperfect = c.h_r * (1.0 - pl.alpha) * pl.p / 2.0 * produced * produced;
    let gap = t - (ap * t4 + g * lambda * t4 * t4 / 2.0) / anp;
    let shortage = c.c_s * lambda / 2.0 * (anp / ap) * gap * gap;
    agg.n_f64() * (deterioration + holding + imperfect + c.k + shortage) / t
}

/// Aggregated cost per unit time at `(t4, t)` with the un-simplified production time,
/// recovered stock and depletion time, and the central cost chosen by whether stock runs out.
pub fn exact_cost_aggregated(t4: f64, t: f64, agg: &AggregatedParams) -> Result<f64> {
    if !(t > 0.0 && t4 >= 0.0 && t4 < t) {
        return Err(Error::InvalidArgument(format!("need 0 <= t4 < t, got t4 = {t4}, t = {t}")));
    }
    let n_i_c = recovered_stock(t4, t, agg);
    let central = central_cost(t, n_i_c, agg);
    Ok(local_plants_cost(t4, t, agg) + central.per_cycle / t)
}

/// Period lengths of a local plant in the aggregated model that close the stock balance exactly.
pub fn aggregated_exact_times(t4: f64, t: f64, agg: &AggregatedParams) -> Result<CycleTimes> {
    let pl = &agg.plant;
    let t2 = production_span_for(t4, pl)?;
    let rest = t - t2 - t4;
    if rest < 0.0 {
        return Err(Error::NegativePeriod { name: "t1 + t5", value: rest });
    }
    let ap = pl.alpha * pl.p;
    let n_i_c = recovered_stock(t4, t, agg);
    Ok(CycleTimes {
        t1: pl.lambda / ap * rest,
        t2,
        t3: 0.0,
        t4,
        t5: pl.net_production() / ap * rest,
        t6: Some(central_depletion_time(n_i_c, agg)),
        total: t,
    })
}

/// Which model a trajectory is sampled for.
#[derive(Debug, Clone, Copy)]
pub enum TrajectoryModel<'a> {
    Basic(&'a ProductionParams),
    Aggregated(&'a AggregatedParams),
}

/// Upper bound on rows of one sampled trajectory.
pub const MAX_SAMPLES: usize = 10_000_000;

/// Period lengths that make the solution's trajectory close exactly.
///
/// The reported solution times come from series reductions; resplitting `(T4*, T*)` with the
/// exact balance keeps the sampled curve continuous with `I4(T4) = 0`. At a no-shortage
/// optimum the exact split of `(T4*, T*)` can overshoot the cycle; `T4` is then shortened
/// to the largest value whose split fits. Falls back to the reported times if neither works.
pub fn trajectory_times(solution: &Solution, model: TrajectoryModel<'_>) -> CycleTimes {
    let t = solution.t_star;
    let split = |t4: f64| match model {
        TrajectoryModel::Basic(p) => exact_reduce(t4, t, p),
        TrajectoryModel::Aggregated(a) => aggregated_exact_times(t4, t, a),
    };
    match split(solution.t4_star) {
        Ok(times) => times,
        Err(Error::NegativePeriod { name: "t1 + t5", .. }) => {
            shortened_split(solution.t4_star, split).unwrap_or(solution.times)
        }
        Err(_) => solution.times,
    }
}

/// Largest `t4' < t4` whose exact split leaves no negative shortage period.
fn shortened_split(t4: f64, split: impl Fn(f64) -> Result<CycleTimes>) -> Option<CycleTimes> {
    const PROBES: i32 = 40;
    let (mut fits, mut overshoots) = (None, t4);
    for k in 0..PROBES {
        let x = t4 * (1.0 - 1e-9 * 2f64.powi(k));
        if x <= 0.0 {
            break;
        }
        if split(x).is_ok() {
            fits = Some(x);
            break;
        }
        overshoots = x;
    }
    let mut lo = fits?;
    while overshoots - lo > 1e-15 * t4 {
        let mid = 0.5 * (lo + overshoots);
        if split(mid).is_ok() {
            lo = mid;
        } else {
            overshoots = mid;
        }
    }
    split(lo).ok()
}

/// Samples one cycle at multiples of `step`, plus every phase boundary.
pub fn sample_trajectory(solution: &Solution, model: TrajectoryModel<'_>, step: f64) -> Result<Vec<PhasePoint>> {
    let times = trajectory_times(solution, model);
    sample_times(&times, model, solution, step)
}

fn sample_times(
    times: &CycleTimes,
    model: TrajectoryModel<'_>,
    solution: &Solution,
    step: f64,
) -> Result<Vec<PhasePoint>> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::InvalidArgument(format!("step must be > 0, got {step}")));
    }
    let total = times.total;
    let count = (total / step).floor();
    if count > MAX_SAMPLES as f64 {
        return Err(Error::InvalidArgument(format!(
            "step {step} gives more than {MAX_SAMPLES} samples"
        )));
    }
    let (params, central) = match model {
        TrajectoryModel::Basic(p) => (p, None),
        TrajectoryModel::Aggregated(a) => (&a.plant, Some((a, recovered_stock(solution.t4_star, solution.t_star, a)))),
    };

    let mut instants: Vec<(f64, Option<Phase>)> = (0..=count as usize).map(|k| (k as f64 * step, None)).collect();
    instants.push((0.0, None));
    instants.extend(times.boundaries().iter().map(|&b| (b, None)));
    if let Some((agg, n_i_c)) = central {
        let t6 = central_depletion_time(n_i_c, agg);
        if t6 < total {
            instants.push((t6, Some(Phase::P6Central)));
        }
    }
    instants.retain(|(t, _)| *t <= total);
    instants.sort_by(|a, b| a.0.total_cmp(&b.0).then(b.1.is_some().cmp(&a.1.is_some())));
    let eps = 1e-12 * total.max(1.0);
    instants.dedup_by(|later, earlier| {
        if (later.0 - earlier.0).abs() <= eps {
            if later.1.is_some() {
                earlier.1 = later.1;
            }
            true
        } else {
            false
        }
    });

    instants
        .into_iter()
        .map(|(t, label)| {
            Ok(PhasePoint {
                t,
                phase: label.unwrap_or_else(|| phase_at(t, times)),
                serviceable: serviceable_level(t, times, params)?,
                imperfect: imperfect_level(t, times, params, central.is_some())?,
                recovered: central.map(|(agg, n_i_c)| recovered_level(t, n_i_c, agg)),
            })
        })
        .collect()
}

pub const CSV_HEADER: &str = "t,phase,serviceable,imperfect,recovered";
const CSV_DIGITS: usize = 9;

/// Writes the trajectory as CSV: header row, ascending time, 9 significant digits.
/// The `recovered` cell is empty for single-plant trajectories.
pub fn write_csv<W: Write>(points: &[PhasePoint], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for p in points {
        let recovered = p.recovered.map(|r| format_significant(r, CSV_DIGITS)).unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{},{}",
            format_significant(p.t, CSV_DIGITS),
            p.phase,
            format_significant(p.serviceable, CSV_DIGITS),
            format_significant(p.imperfect, CSV_DIGITS),
            recovered
        )?;
    }
    Ok(())
}
