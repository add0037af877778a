//! Several identical plants sharing a central rework plant: both cost cases, the boundary
//! check, and the selected cycle.

use epq_rework::{solve_aggregated_detailed, AggregatedParams, CostParams, ProductionParams};

fn main() -> epq_rework::Result<()> {
    let plant = ProductionParams {
        p: 6000.0,
        alpha: 0.7,
        lambda: 1000.0,
        theta: 0.1,
        gamma: 0.6,
        p_r: 4000.0,
        alpha_r: 0.6,
        beta: 1.0,
    };
    let costs = CostParams { k: 300.0, c: 40.0, c_d: 100.0, c_p: 30.0, c_s: 200.0, c_u: 0.0, h_s: 5.0, h_r: 4.0 };

    for n in [1, 2, 5, 10] {
        let agg = AggregatedParams { plant, costs, n, k_c: 250.0, c_v: 10.0, h_c: 3.0 };
        let solved = solve_aggregated_detailed(&agg)?;
        let k = &solved.coefficients;
        println!("n = {n}: t_bound = {:.4}, A1 = {:.1}, A2 = {:.1}, C = {:.2}", k.t_bound, k.a1, k.a2, k.c);
        for cand in &solved.candidates {
            match (cand.pair, cand.tc) {
                (Some((t4, t)), Some(tc)) => println!(
                    "  {:<18} ({t4:.4}, {t:.4}) TC = {tc:.1}{}",
                    cand.case.as_str(),
                    if cand.clamped { "  [moved to boundary]" } else { "" }
                ),
                _ => println!("  {:<18} not considered", cand.case.as_str()),
            }
        }
        let s = &solved.solution;
        println!(
            "  chosen {}: Q = {:.1}, Tp = {:.4}, nIc = {:.1}, T6 = {:.4}",
            s.case_label.as_str(),
            s.q,
            s.t_p,
            s.levels.n_i_c.unwrap_or(0.0),
            s.times.t6.unwrap_or(0.0)
        );
    }
    Ok(())
}
