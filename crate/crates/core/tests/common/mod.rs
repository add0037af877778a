#![allow(dead_code)]

use epq_rework::{AggregatedParams, CostParams, GenericCoefficients, ProductionParams};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn plant() -> ProductionParams {
    ProductionParams {
        p: 6000.0,
        alpha: 0.7,
        lambda: 1000.0,
        theta: 0.1,
        gamma: 0.6,
        p_r: 4000.0,
        alpha_r: 0.6,
        beta: 1.0,
    }
}

pub fn costs() -> CostParams {
    CostParams { k: 300.0, c: 40.0, c_d: 100.0, c_p: 30.0, c_s: 200.0, c_u: 0.0, h_s: 5.0, h_r: 4.0 }
}

pub fn aggregated() -> AggregatedParams {
    AggregatedParams { plant: plant(), costs: costs(), n: 5, k_c: 250.0, c_v: 10.0, h_c: 3.0 }
}

fn log_uniform<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    (rng.gen_range(lo.ln()..hi.ln())).exp()
}

/// Feasible plant: both net good production and net rework output exceed demand.
pub fn random_plant<R: Rng>(rng: &mut R, beta: f64) -> ProductionParams {
    let lambda = log_uniform(rng, 100.0, 5000.0);
    let alpha = rng.gen_range(0.5..0.98);
    let alpha_r = rng.gen_range(0.4..1.0);
    ProductionParams {
        p: lambda / alpha * rng.gen_range(1.3..6.0),
        alpha,
        lambda,
        theta: rng.gen_range(0.005..0.2),
        gamma: rng.gen_range(0.2..1.0),
        p_r: lambda / alpha_r * rng.gen_range(1.3..6.0),
        alpha_r,
        beta,
    }
}

pub fn random_costs<R: Rng>(rng: &mut R) -> CostParams {
    CostParams {
        k: log_uniform(rng, 10.0, 2000.0),
        c: rng.gen_range(1.0..80.0),
        c_d: rng.gen_range(1.0..200.0),
        c_p: rng.gen_range(0.0..50.0),
        c_s: rng.gen_range(20.0..400.0),
        c_u: rng.gen_range(0.0..20.0),
        h_s: rng.gen_range(0.5..10.0),
        h_r: rng.gen_range(0.5..8.0),
    }
}

pub fn random_aggregated<R: Rng>(rng: &mut R) -> AggregatedParams {
    AggregatedParams {
        plant: random_plant(rng, 1.0),
        costs: random_costs(rng),
        n: rng.gen_range(1..=12),
        k_c: rng.gen_range(0.0..500.0),
        c_v: rng.gen_range(0.0..20.0),
        h_c: rng.gen_range(0.0..6.0),
    }
}

/// Coefficients with `B < 0` and `4AC > B^2`.
pub fn random_generic<R: Rng>(rng: &mut R) -> GenericCoefficients {
    let a = log_uniform(rng, 1.0, 1e5);
    let c = log_uniform(rng, 1.0, 1e5);
    let b = -(4.0 * a * c).sqrt() * rng.gen_range(0.05..0.95);
    GenericCoefficients::new(a, b, c, rng.gen_range(-100.0..100.0), log_uniform(rng, 1.0, 1e4))
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}
