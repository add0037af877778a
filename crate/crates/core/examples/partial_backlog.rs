//! Partial backlogging: how the lost-sales fraction and its penalty reshape the cycle.

use epq_rework::{solve_basic, CostParams, ProductionParams};

fn main() -> epq_rework::Result<()> {
    let base = ProductionParams {
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

    println!("{:>5} {:>5} {:>8} {:>8} {:>8} {:>8} {:>9}", "beta", "c_u", "T4*", "T*", "T1", "T5", "TC");
    for beta in [1.0, 0.9, 0.7, 0.5] {
        for c_u in [0.0, 5.0, 20.0] {
            let plant = ProductionParams { beta, ..base };
            let s = solve_basic(&plant, &CostParams { c_u, ..costs })?;
            println!(
                "{beta:>5} {c_u:>5} {:>8.5} {:>8.5} {:>8.5} {:>8.5} {:>9.2}  {}",
                s.t4_star,
                s.t_star,
                s.times.t1,
                s.times.t5,
                s.tc,
                s.case_label.as_str()
            );
        }
    }
    Ok(())
}
