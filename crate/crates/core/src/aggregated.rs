//! `n` identical local plants that ship their imperfect items to one central rework plant.
//!
//! The central plant's cost depends on whether its recovered stock outlasts the cycle, which
//! splits the reduced objective at `t_bound` into two generic objectives sharing `B` and `C`.
//! Each is minimized in closed form, moved onto the boundary if it lands on the wrong side,
//! and the cheaper of the two candidates is returned.

use serde::Serialize;

use crate::closed_form::{generic_cost, solve_closed_form};
use crate::error::{Error, Result};
use crate::model::{
    decay_warning, validate_aggregated, AggregatedParams, CaseLabel, CycleTimes, GenericCoefficients,
    InventoryLevels, Solution,
};
use crate::trajectory::central_depletion_time;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AggregatedCoefficients {
    /// `T` coefficient when recovered stock is left over (Case I).
    pub a1: f64,
    /// `T` coefficient when recovered stock runs out (Case II).
    pub a2: f64,
    pub b: f64,
    pub c: f64,
    pub d1: f64,
    pub d2: f64,
    /// `n K + K_c`
    pub k_total: f64,
    /// Cycle length at which the central stock runs out exactly at cycle end. May be `<= 0`
    /// (or `-inf` for perfect yield), in which case only Case II is reachable.
    pub t_bound: f64,
}

impl AggregatedCoefficients {
    pub fn case_i(&self) -> GenericCoefficients {
        GenericCoefficients::new(self.a1, self.b, self.c, self.d1, self.k_total)
    }

    pub fn case_ii(&self) -> GenericCoefficients {
        GenericCoefficients::new(self.a2, self.b, self.c, self.d2, self.k_total)
    }

    pub fn for_case(&self, case: CaseLabel) -> GenericCoefficients {
        match case {
            CaseLabel::AggregatedCaseII => self.case_ii(),
            _ => self.case_i(),
        }
    }

    /// Optimum along the boundary `T = t_bound`, where `T4 = (-B / 2C) T`.
    pub fn boundary_pair(&self) -> (f64, f64) {
        (-self.b / (2.0 * self.c) * self.t_bound, self.t_bound)
    }
}

pub fn coefficients_aggregated(agg: &AggregatedParams) -> Result<AggregatedCoefficients> {
    let agg = validate_aggregated(*agg)?;
    let pl = &agg.plant;
    let c = &agg.costs;
    let n = agg.n_f64();
    let (p, alpha, lambda) = (pl.p, pl.alpha, pl.lambda);
    let g = pl.decay();
    let ap = alpha * p;
    let anp = pl.net_production();
    // recovered units reaching the central plant per unit cycle length
    let recovered_rate = n * lambda * (1.0 - alpha) / alpha;

    let shared_a = c.h_r * n * (1.0 - alpha) * lambda * lambda / (2.0 * alpha * alpha * p)
        + c.c_s * n * anp * lambda / (2.0 * ap);
    let a1 = shared_a + agg.h_c * (recovered_rate - lambda / 2.0) - agg.c_v * recovered_rate * g;
    let a2 = shared_a + agg.h_c * n * n * lambda * (1.0 - alpha).powi(2) / (2.0 * alpha * alpha);
    let b = -c.c_s * n * lambda;
    let cc = c.deterioration_weight(pl.gamma) * n * lambda * pl.theta / 2.0
        + c.h_s * n * lambda * ap / (2.0 * anp)
        + c.c_s * n * lambda * ap / (2.0 * anp);
    let t_bound = (1.0 - alpha / (n * (1.0 - alpha))) / g;
    Ok(AggregatedCoefficients {
        a1,
        a2,
        b,
        c: cc,
        d1: agg.c_v * (recovered_rate - lambda),
        d2: c.c_u * (lambda - recovered_rate),
        k_total: n * c.k + agg.k_c,
        t_bound,
    })
}

/// Peak recovered stock at the central plant, `n lambda (1 - alpha)/alpha (t + gamma theta t4^2 / 2)`.
pub fn recovered_stock(t4: f64, t: f64, agg: &AggregatedParams) -> f64 {
    let pl = &agg.plant;
    agg.n_f64() * pl.lambda * (1.0 - pl.alpha) / pl.alpha * (t + pl.decay() * t4 * t4 / 2.0)
}

/// One case's candidate pair after the boundary check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Candidate {
    pub case: CaseLabel,
    /// Closed-form stationary point, if the case has one.
    pub unclamped: Option<(f64, f64)>,
    /// Pair after moving it onto the boundary, if it was on the wrong side.
    pub pair: Option<(f64, f64)>,
    pub clamped: bool,
    /// The case's own objective at `pair`.
    pub tc: Option<f64>,
    /// Whether the candidate took part in the final comparison.
    pub considered: bool,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AggregatedSolve {
    pub solution: Solution,
    pub coefficients: AggregatedCoefficients,
    pub candidates: Vec<Candidate>,
}

pub fn solve_aggregated(agg: &AggregatedParams) -> Result<Solution> {
    solve_aggregated_detailed(agg).map(|s| s.solution)
}

/// Solves both cases, applies the boundary checks and keeps the cheaper candidate.
pub fn solve_aggregated_detailed(agg: &AggregatedParams) -> Result<AggregatedSolve> {
    let coefficients = coefficients_aggregated(agg)?;
    let tb = coefficients.t_bound;
    let mut warnings = Vec::new();

    let mut candidates: Vec<Candidate> = [CaseLabel::AggregatedCaseI, CaseLabel::AggregatedCaseII]
        .into_iter()
        .map(|case| {
            let stationary = solve_closed_form(&coefficients.for_case(case));
            Candidate {
                case,
                unclamped: stationary.as_ref().ok().copied(),
                pair: None,
                clamped: false,
                tc: None,
                considered: false,
                note: stationary.err().map(|e| e.to_string()),
            }
        })
        .collect();

    if tb <= 0.0 {
        // Case I needs T <= t_bound, which no positive cycle satisfies
        candidates[0].note = Some(format!("case boundary {tb} <= 0 leaves only Case II"));
        candidates[1].considered = candidates[1].unclamped.is_some();
        candidates[1].pair = candidates[1].unclamped;
    } else {
        for cand in candidates.iter_mut() {
            let Some((t4, t)) = cand.unclamped else { continue };
            let wrong_side = match cand.case {
                CaseLabel::AggregatedCaseI => t > tb,
                _ => t <= tb,
            };
            cand.clamped = wrong_side;
            cand.pair = Some(if wrong_side { coefficients.boundary_pair() } else { (t4, t) });
            cand.considered = true;
        }
    }

    for cand in candidates.iter_mut().filter(|c| c.considered) {
        let (t4, t) = cand.pair.expect("considered candidates have a pair");
        cand.tc = Some(generic_cost(&coefficients.for_case(cand.case), t4, t)?);
    }
    for cand in candidates.iter().filter(|c| !c.considered && c.unclamped.is_none()) {
        if let Some(note) = &cand.note {
            warnings.push(format!("{}: {}", cand.case.as_str(), note));
        }
    }

    let best = candidates
        .iter()
        .filter(|c| c.considered)
        .min_by(|a, b| a.tc.unwrap_or(f64::INFINITY).total_cmp(&b.tc.unwrap_or(f64::INFINITY)))
        .ok_or_else(|| {
            let notes: Vec<_> = candidates.iter().filter_map(|c| c.note.clone()).collect();
            Error::NoInteriorOptimum(notes.join("; "))
        })?;

    let (t4, t) = best.pair.expect("chosen candidate has a pair");
    let solution = assemble(agg, t4, t, best.tc.expect("chosen candidate is priced"), best.case, best.clamped, warnings);
    Ok(AggregatedSolve { solution, coefficients, candidates })
}

/// Period lengths of a local plant from the series-reduced production time.
pub fn aggregated_times(t4: f64, t: f64, agg: &AggregatedParams) -> CycleTimes {
    let pl = &agg.plant;
    let ap = pl.alpha * pl.p;
    let t2 = pl.lambda / pl.net_production() * (t4 + pl.decay() * t4 * t4 / 2.0);
    let rest = t - t2 - t4;
    CycleTimes {
        t1: pl.lambda / ap * rest,
        t2,
        t3: 0.0,
        t4,
        t5: pl.net_production() / ap * rest,
        t6: Some(central_depletion_time(recovered_stock(t4, t, agg), agg)),
        total: t,
    }
}

fn assemble(
    agg: &AggregatedParams,
    t4: f64,
    t: f64,
    tc: f64,
    case: CaseLabel,
    clamped: bool,
    mut warnings: Vec<String>,
) -> Solution {
    let pl = &agg.plant;
    let times = aggregated_times(t4, t, agg);
    let g = pl.decay();
    let i_m = pl.lambda * t4 * crate::numeric::expm1_ratio(g * t4);
    let t_p = pl.lambda / (pl.alpha * pl.p) * (t + g * t4 * t4 / 2.0);
    let levels = InventoryLevels {
        i_s: i_m,
        i_m,
        i_b: pl.net_production() * times.t1,
        i_c: (1.0 - pl.alpha) * pl.p * t_p,
        n_i_c: Some(recovered_stock(t4, t, agg)),
    };
    warnings.extend(decay_warning(pl, t));
    Solution {
        t4_star: t4,
        t_star: t,
        times,
        levels,
        t_p,
        t_p_proportional: None,
        q: pl.p * t_p,
        tc,
        case_label: case,
        clamped,
        warnings,
    }
}
