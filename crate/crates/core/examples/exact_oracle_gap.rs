//! Measures how much the series-reduced closed form loses against the exact cycle cost.

use epq_rework::optimizer::{minimize_2d, NESTED_TOL};
use epq_rework::{exact_cost_basic, solve_basic, CostParams, ProductionParams};

fn main() -> epq_rework::Result<()> {
    let costs = CostParams { k: 300.0, c: 40.0, c_d: 100.0, c_p: 30.0, c_s: 200.0, c_u: 0.0, h_s: 5.0, h_r: 4.0 };
    println!("{:>7} {:>18} {:>10} {:>18} {:>10} {:>8}", "theta", "closed form", "exact TC", "exact optimum", "exact TC", "gap %");
    for theta in [0.001, 0.01, 0.05, 0.1, 0.2, 0.4] {
        let plant = ProductionParams {
            p: 6000.0,
            alpha: 0.7,
            lambda: 1000.0,
            theta,
            gamma: 0.6,
            p_r: 4000.0,
            alpha_r: 0.6,
            beta: 1.0,
        };
        let s = solve_basic(&plant, &costs)?;
        let at_closed = exact_cost_basic(s.t4_star, s.t_star, &plant, &costs)?;
        let oracle = minimize_2d(
            |t4, t| exact_cost_basic(t4, t, &plant, &costs).unwrap_or(f64::INFINITY),
            (s.t4_star, s.t_star),
            NESTED_TOL,
        )?;
        let gap = 100.0 * (at_closed - oracle.value) / oracle.value;
        println!(
            "{theta:>7} ({:.4}, {:.4}) {at_closed:>10.2} ({:.4}, {:.4}) {:>10.2} {gap:>8.4}",
            s.t4_star, s.t_star, oracle.point.0, oracle.point.1, oracle.value
        );
    }
    Ok(())
}
