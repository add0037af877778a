//! Writes the inventory trajectory of the optimal single-plant cycle as CSV.
//!
//! Usage: `cargo run --example trajectory_csv [out.csv]` (stdout by default).

use std::io::Write;

use epq_rework::trajectory::boundary_levels;
use epq_rework::{sample_trajectory, solve_basic, write_csv, CostParams, ProductionParams, TrajectoryModel};

fn main() -> Result<(), Box<dyn std::error::Error>> {
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
    let s = solve_basic(&plant, &costs)?;
    let points = sample_trajectory(&s, TrajectoryModel::Basic(&plant), 0.001)?;

    let peak = points.iter().map(|p| p.serviceable).fold(f64::MIN, f64::max);
    let trough = points.iter().map(|p| p.serviceable).fold(f64::MAX, f64::min);
    let levels = boundary_levels(&s.times, &plant);
    eprintln!("{} rows, serviceable in [{trough:.2}, {peak:.2}], I_m = {:.2}", points.len(), levels.i_m);

    let mut buf = Vec::new();
    write_csv(&points, &mut buf)?;
    match std::env::args().nth(1) {
        Some(path) => std::fs::write(path, buf)?,
        None => std::io::stdout().write_all(&buf)?,
    }
    Ok(())
}
