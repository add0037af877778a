//! Economic production quantity with rework, deterioration, imperfect screening and
//! partial backlogging, for a single plant and for `n` plants sharing a central rework plant.
//!
//! [`solve_basic`] and [`solve_aggregated`] return the cost-minimizing cycle. The exact
//! cycle dynamics in [`trajectory`] serve as an independent check of the closed forms.

// `!(x > 0.0)` style checks are kept so that NaN fails them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod aggregated;
pub mod closed_form;
pub mod error;
pub mod model;
pub mod numeric;
pub mod optimizer;
pub mod scenario;
pub mod trajectory;

pub use aggregated::{coefficients_aggregated, solve_aggregated, solve_aggregated_detailed};
pub use closed_form::{coefficients_complete, solve_basic, solve_basic_with, solve_closed_form, SolveOptions};
pub use error::{Error, Result, ValidationError, Violation, ViolationKind};
pub use model::{
    validate, validate_aggregated, AggregatedParams, CaseLabel, CostParams, CycleTimes, GenericCoefficients,
    InventoryLevels, ProductionParams, Solution,
};
pub use trajectory::{exact_cost_aggregated, exact_cost_basic, sample_trajectory, write_csv, TrajectoryModel};

#[cfg(test)]
pub(crate) mod fixtures {
    use crate::model::{AggregatedParams, CostParams, ProductionParams};

    pub fn sec5() -> (ProductionParams, CostParams) {
        (
            ProductionParams {
                p: 6000.0,
                alpha: 0.7,
                lambda: 1000.0,
                theta: 0.1,
                gamma: 0.6,
                p_r: 4000.0,
                alpha_r: 0.6,
                beta: 1.0,
            },
            CostParams {
                k: 300.0,
                c: 40.0,
                c_d: 100.0,
                c_p: 30.0,
                c_s: 200.0,
                c_u: 0.0,
                h_s: 5.0,
                h_r: 4.0,
            },
        )
    }

    pub fn sec5_aggregated() -> AggregatedParams {
        let (plant, costs) = sec5();
        AggregatedParams { plant, costs, n: 5, k_c: 250.0, c_v: 10.0, h_c: 3.0 }
    }
}
