//! Parameter and result types shared by every solver, plus feasibility validation.
//!
//! Fractions are stored as fractions in `(0, 1]`, never as percentages. The lost-sales
//! fraction `1 - beta` is always derived.

use serde::{Deserialize, Serialize};

use crate::error::{ValidationError, Violation, ViolationKind};

/// Physical rates and fractions of one production plant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductionParams {
    /// Production rate.
    pub p: f64,
    /// Good-quality fraction of production.
    pub alpha: f64,
    /// Demand rate.
    pub lambda: f64,
    /// Deterioration fraction per unit time.
    pub theta: f64,
    /// Fraction of deteriorated items screened out.
    pub gamma: f64,
    /// Rework rate.
    pub p_r: f64,
    /// Fraction of reworked items recovered.
    pub alpha_r: f64,
    /// Fraction of short customers who accept backlogging.
    pub beta: f64,
}

impl ProductionParams {
    /// Lost-sales fraction `1 - beta`.
    pub fn beta_lost(&self) -> f64 {
        1.0 - self.beta
    }

    /// Rate at which screening removes serviceable stock, `gamma * theta`.
    pub fn decay(&self) -> f64 {
        self.gamma * self.theta
    }

    /// `alpha p - lambda`
    pub fn net_production(&self) -> f64 {
        self.alpha * self.p - self.lambda
    }

    /// `alpha_r p_r - lambda`
    pub fn net_rework(&self) -> f64 {
        self.alpha_r * self.p_r - self.lambda
    }

    /// Complete backlogging is selected by `beta == 1` exactly.
    pub fn complete_backlog(&self) -> bool {
        self.beta == 1.0
    }

    pub fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for (field, v) in [("p", self.p), ("lambda", self.lambda), ("theta", self.theta), ("p_r", self.p_r)] {
            if !(v.is_finite() && v > 0.0) {
                out.push(Violation {
                    field,
                    kind: ViolationKind::NonpositiveRate,
                    detail: format!("{field} = {v} must be > 0"),
                });
            }
        }
        for (field, v) in [
            ("alpha", self.alpha),
            ("gamma", self.gamma),
            ("alpha_r", self.alpha_r),
            ("beta", self.beta),
        ] {
            if !(v > 0.0 && v <= 1.0) {
                out.push(Violation {
                    field,
                    kind: ViolationKind::FractionOutOfRange,
                    detail: format!("{field} = {v} must lie in (0, 1]"),
                });
            }
        }
        if !(self.alpha * self.p > self.lambda) {
            out.push(Violation {
                field: "alpha",
                kind: ViolationKind::InfeasibleRates,
                detail: format!(
                    "alpha*p > lambda fails: {} * {} = {} <= {}",
                    self.alpha,
                    self.p,
                    self.alpha * self.p,
                    self.lambda
                ),
            });
        }
        if !(self.alpha_r * self.p_r > self.lambda) {
            out.push(Violation {
                field: "alpha_r",
                kind: ViolationKind::InfeasibleRates,
                detail: format!(
                    "alpha_r*p_r > lambda fails: {} * {} = {} <= {}",
                    self.alpha_r,
                    self.p_r,
                    self.alpha_r * self.p_r,
                    self.lambda
                ),
            });
        }
        out
    }
}

/// Unit and setup costs of one plant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CostParams {
    /// Setup cost per cycle.
    #[serde(rename = "K")]
    pub k: f64,
    /// Cost per deteriorated unit screened out.
    pub c: f64,
    /// Penalty per deteriorated unit sold.
    pub c_d: f64,
    /// Cost per unrecoverable imperfect unit.
    pub c_p: f64,
    /// Shortage cost per unit per unit time.
    pub c_s: f64,
    /// Penalty per unit of lost demand.
    pub c_u: f64,
    /// Serviceable holding cost per unit per unit time.
    pub h_s: f64,
    /// Imperfect-item holding cost per unit per unit time.
    pub h_r: f64,
}

impl CostParams {
    pub fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let fields = [
            ("c", self.c),
            ("c_d", self.c_d),
            ("c_p", self.c_p),
            ("c_s", self.c_s),
            ("c_u", self.c_u),
            ("h_s", self.h_s),
            ("h_r", self.h_r),
        ];
        for (field, v) in fields {
            if !(v.is_finite() && v >= 0.0) {
                out.push(Violation {
                    field,
                    kind: ViolationKind::NegativeCost,
                    detail: format!("{field} = {v} must be >= 0"),
                });
            }
        }
        if !(self.k.is_finite() && self.k > 0.0) {
            out.push(Violation {
                field: "K",
                kind: ViolationKind::NegativeCost,
                detail: format!("K = {} must be > 0", self.k),
            });
        }
        out
    }

    /// Combined deterioration weight `gamma c + (1 - gamma) c_d`.
    pub fn deterioration_weight(&self, gamma: f64) -> f64 {
        gamma * self.c + (1.0 - gamma) * self.c_d
    }

    /// Multiplies every cost (including `K`) by `factor`.
    pub fn scaled(&self, factor: f64) -> CostParams {
        CostParams {
            k: self.k * factor,
            c: self.c * factor,
            c_d: self.c_d * factor,
            c_p: self.c_p * factor,
            c_s: self.c_s * factor,
            c_u: self.c_u * factor,
            h_s: self.h_s * factor,
            h_r: self.h_r * factor,
        }
    }
}

/// `n` identical local plants feeding one central rework plant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AggregatedParams {
    pub plant: ProductionParams,
    pub costs: CostParams,
    pub n: u32,
    /// Central-plant setup cost per cycle.
    pub k_c: f64,
    /// Penalty per recovered unit left at cycle end.
    pub c_v: f64,
    /// Central-plant holding cost per unit per unit time.
    pub h_c: f64,
}

impl AggregatedParams {
    pub fn violations(&self) -> Vec<Violation> {
        let mut out = self.plant.violations();
        out.extend(self.costs.violations());
        if self.n < 1 {
            out.push(Violation {
                field: "n",
                kind: ViolationKind::InvalidValue,
                detail: "n = 0 must be >= 1".into(),
            });
        }
        for (field, v) in [("K_c", self.k_c), ("c_v", self.c_v), ("h_c", self.h_c)] {
            if !(v.is_finite() && v >= 0.0) {
                out.push(Violation {
                    field,
                    kind: ViolationKind::NegativeCost,
                    detail: format!("{field} = {v} must be >= 0"),
                });
            }
        }
        if self.plant.beta != 1.0 {
            out.push(Violation {
                field: "beta",
                kind: ViolationKind::InvalidValue,
                detail: format!(
                    "aggregated model backlogs every shortage, beta = {} must equal 1",
                    self.plant.beta
                ),
            });
        }
        out
    }

    pub fn n_f64(&self) -> f64 {
        f64::from(self.n)
    }
}

/// Checks every invariant of a single-plant parameter set.
///
/// Returns the inputs unchanged when they are feasible, otherwise every violation found.
pub fn validate(
    params: ProductionParams,
    costs: CostParams,
) -> Result<(ProductionParams, CostParams), ValidationError> {
    let mut violations = params.violations();
    violations.extend(costs.violations());
    if violations.is_empty() {
        Ok((params, costs))
    } else {
        Err(ValidationError { violations })
    }
}

pub fn validate_aggregated(agg: AggregatedParams) -> Result<AggregatedParams, ValidationError> {
    let violations = agg.violations();
    if violations.is_empty() {
        Ok(agg)
    } else {
        Err(ValidationError { violations })
    }
}

/// Period lengths of one cycle.
///
/// The single-plant model uses all of `t1..t5`; the aggregated model has no rework
/// period at the local plants (`t3 = 0`) and adds the central depletion time `t6`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CycleTimes {
    pub t1: f64,
    pub t2: f64,
    pub t3: f64,
    pub t4: f64,
    pub t5: f64,
    pub t6: Option<f64>,
    pub total: f64,
}

impl CycleTimes {
    /// Phase end times `[T1, T1+T2, .., T]` within the cycle.
    pub fn boundaries(&self) -> [f64; 5] {
        let b1 = self.t1;
        let b2 = b1 + self.t2;
        let b3 = b2 + self.t3;
        let b4 = b3 + self.t4;
        [b1, b2, b3, b4, self.total]
    }

    pub fn period_sum(&self) -> f64 {
        self.t1 + self.t2 + self.t3 + self.t4 + self.t5
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InventoryLevels {
    /// Serviceable stock at the end of production.
    pub i_s: f64,
    /// Maximum serviceable stock.
    pub i_m: f64,
    /// Backlog depth.
    pub i_b: f64,
    /// Maximum imperfect-item stock.
    pub i_c: f64,
    /// Pooled recovered stock at the central plant.
    pub n_i_c: Option<f64>,
}

/// Coefficients of the reduced objective `a T + b T4 + c T4^2 / T + k_total / T + d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GenericCoefficients {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub k_total: f64,
    /// Rework-period fraction `T3 = eta T` (single plant, complete backlogging).
    pub eta: Option<f64>,
    pub omega: Option<f64>,
}

impl GenericCoefficients {
    pub fn new(a: f64, b: f64, c: f64, d: f64, k_total: f64) -> Self {
        GenericCoefficients {
            a,
            b,
            c,
            d,
            k_total,
            eta: None,
            omega: None,
        }
    }

    /// Theorem-style existence condition for an interior optimum.
    pub fn has_interior_optimum(&self) -> bool {
        self.b < 0.0 && self.c > 0.0 && self.k_total > 0.0 && 4.0 * self.a * self.c > self.b * self.b
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CaseLabel {
    #[serde(rename = "basic-complete")]
    BasicComplete,
    #[serde(rename = "basic-partial")]
    BasicPartial,
    #[serde(rename = "aggregated-case-I")]
    AggregatedCaseI,
    #[serde(rename = "aggregated-case-II")]
    AggregatedCaseII,
}

impl CaseLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            CaseLabel::BasicComplete => "basic-complete",
            CaseLabel::BasicPartial => "basic-partial",
            CaseLabel::AggregatedCaseI => "aggregated-case-I",
            CaseLabel::AggregatedCaseII => "aggregated-case-II",
        }
    }
}

/// An optimal lot-sizing decision with everything derived from it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Solution {
    pub t4_star: f64,
    pub t_star: f64,
    pub times: CycleTimes,
    pub levels: InventoryLevels,
    /// Production time `T1 + T2`.
    pub t_p: f64,
    /// Production time from the closed-form proportionality to `T*`, when the model has one.
    pub t_p_proportional: Option<f64>,
    /// Production quantity `p * t_p`.
    pub q: f64,
    /// Cost per unit time of the solved objective at the optimum.
    pub tc: f64,
    pub case_label: CaseLabel,
    pub clamped: bool,
    pub warnings: Vec<String>,
}

/// `gamma theta T*` above this makes the second-order series reductions unreliable.
pub const DECAY_WARNING_THRESHOLD: f64 = 0.3;

pub(crate) fn decay_warning(params: &ProductionParams, t_star: f64) -> Option<String> {
    let x = params.decay() * t_star;
    (x > DECAY_WARNING_THRESHOLD).then(|| {
        format!("gamma*theta*T = {x:.4} exceeds {DECAY_WARNING_THRESHOLD}; series reductions may be inaccurate")
    })
}
