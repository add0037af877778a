//! Closed-form optimal cycle for a single plant under complete backlogging.

use epq_rework::closed_form::hessian_check;
use epq_rework::{coefficients_complete, solve_basic, solve_closed_form, CostParams, ProductionParams};

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

    let k = coefficients_complete(&plant, &costs)?;
    println!("A = {:.2}  B = {:.2}  C = {:.2}  D = {:.2}  eta = {:.6}", k.a, k.b, k.c, k.d, k.eta.unwrap_or(0.0));

    let (t4, t) = solve_closed_form(&k)?;
    let h = hessian_check(&k, t4, t)?;
    println!("(T4*, T*) = ({t4:.4}, {t:.4}), Hessian det {:.4e}, positive definite: {}", h.determinant, h.positive_definite);

    let s = solve_basic(&plant, &costs)?;
    let ts = &s.times;
    println!("T1..T5 = {:.4} {:.4} {:.4} {:.4} {:.4}", ts.t1, ts.t2, ts.t3, ts.t4, ts.t5);
    println!("Tp = {:.4}  Q = {:.1}  TC = {:.1}", s.t_p, s.q, s.tc);
    let l = &s.levels;
    println!("I_m = {:.1}  I_s = {:.1}  I_b = {:.2}  I_c = {:.1}", l.i_m, l.i_s, l.i_b, l.i_c);

    for k_setup in [150.0, 300.0, 600.0, 1200.0] {
        let s = solve_basic(&plant, &CostParams { k: k_setup, ..costs })?;
        println!("K = {k_setup:>6}: T* = {:.4}, Q = {:.1}", s.t_star, s.q);
    }
    Ok(())
}
