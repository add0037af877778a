//! Derivative-free 2D minimization, bracketed root finding and finite-difference gradients.
//!
//! The minimizer knows nothing about feasible regions. Callers that need a domain
//! restriction wrap their objective so that infeasible probes return a large finite value.

use crate::error::{Error, Result};

/// Domain tolerance for polynomial-type objectives.
pub const DEFAULT_TOL: f64 = 1e-10;
/// Domain tolerance for objectives that run a root-find per evaluation.
pub const NESTED_TOL: f64 = 1e-8;
pub const MAX_EVALUATIONS: usize = 100_000;

// Standard Nelder-Mead coefficients.
const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;
/// Axis offset of the initial simplex, relative to each seed coordinate.
const INITIAL_STEP: f64 = 0.05;
/// Offset used when a seed coordinate is exactly zero.
const ZERO_STEP: f64 = 2.5e-4;
const RESTARTS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinimizeReport {
    pub point: (f64, f64),
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
    pub probe_count: usize,
}

type Vertex = ([f64; 2], f64);

struct Counted<F> {
    f: F,
    calls: usize,
}

impl<F: FnMut(f64, f64) -> f64> Counted<F> {
    fn eval(&mut self, x: [f64; 2]) -> f64 {
        self.calls += 1;
        let v = (self.f)(x[0], x[1]);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    }
}

fn diameter(s: &[Vertex; 3]) -> f64 {
    let mut d: f64 = 0.0;
    for i in 0..3 {
        for j in (i + 1)..3 {
            let dx = s[i].0[0] - s[j].0[0];
            let dy = s[i].0[1] - s[j].0[1];
            d = d.max(dx.abs().max(dy.abs()));
        }
    }
    d
}

fn lerp(a: [f64; 2], b: [f64; 2], t: f64) -> [f64; 2] {
    [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]
}

fn initial_simplex<F: FnMut(f64, f64) -> f64>(f: &mut Counted<F>, seed: [f64; 2]) -> [Vertex; 3] {
    let step = |v: f64| if v == 0.0 { ZERO_STEP } else { INITIAL_STEP * v };
    let a = seed;
    let b = [seed[0] + step(seed[0]), seed[1]];
    let c = [seed[0], seed[1] + step(seed[1])];
    [(a, f.eval(a)), (b, f.eval(b)), (c, f.eval(c))]
}

/// Runs one simplex descent until the simplex diameter drops below `tol`.
fn descend<F: FnMut(f64, f64) -> f64>(
    f: &mut Counted<F>,
    mut s: [Vertex; 3],
    tol: f64,
    iterations: &mut usize,
) -> ([Vertex; 3], bool) {
    loop {
        s.sort_by(|x, y| x.1.total_cmp(&y.1));
        if s.iter().any(|v| !(v.0[0].is_finite() && v.0[1].is_finite()) || v.1 == f64::NEG_INFINITY) {
            return (s, false);
        }
        if diameter(&s) < tol {
            return (s, true);
        }
        if f.calls >= MAX_EVALUATIONS {
            return (s, false);
        }
        *iterations += 1;
        let centroid = [(s[0].0[0] + s[1].0[0]) / 2.0, (s[0].0[1] + s[1].0[1]) / 2.0];
        let worst = s[2];
        let xr = lerp(centroid, worst.0, -REFLECT);
        let fr = f.eval(xr);
        if fr < s[0].1 {
            let xe = lerp(centroid, worst.0, -EXPAND);
            let fe = f.eval(xe);
            s[2] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < s[1].1 {
            s[2] = (xr, fr);
            continue;
        }
        let (xc, fc) = if fr < worst.1 {
            let xc = lerp(centroid, xr, CONTRACT);
            (xc, f.eval(xc))
        } else {
            let xc = lerp(centroid, worst.0, CONTRACT);
            (xc, f.eval(xc))
        };
        if fc < worst.1.min(fr) {
            s[2] = (xc, fc);
            continue;
        }
        let best = s[0].0;
        for v in s.iter_mut().skip(1) {
            let x = lerp(best, v.0, SHRINK);
            *v = (x, f.eval(x));
        }
    }
}

/// Minimizes `objective` over the plane with a Nelder-Mead simplex started at `seed`.
///
/// The initial simplex is the seed plus two axis-offset vertices at 5% of each coordinate.
/// After convergence the search restarts from the best vertex with a fresh simplex, which
/// guards against a simplex that collapsed before reaching the minimum.
pub fn minimize_2d<F>(objective: F, seed: (f64, f64), tol: f64) -> Result<MinimizeReport>
where
    F: FnMut(f64, f64) -> f64,
{
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be > 0, got {tol}")));
    }
    if !(seed.0.is_finite() && seed.1.is_finite()) {
        return Err(Error::InvalidArgument("seed must be finite".into()));
    }
    let mut f = Counted { f: objective, calls: 0 };
    let mut iterations = 0;
    let mut simplex = initial_simplex(&mut f, [seed.0, seed.1]);
    let mut converged;
    let mut restarts = 0;
    loop {
        let (s, ok) = descend(&mut f, simplex, tol, &mut iterations);
        converged = ok;
        if !ok || restarts == RESTARTS {
            simplex = s;
            break;
        }
        let best = s[0];
        let fresh = initial_simplex(&mut f, best.0);
        let moved = fresh[1].1.min(fresh[2].1) < best.1;
        restarts += 1;
        simplex = fresh;
        if !moved {
            // the fresh simplex cannot improve on the best vertex; a last descent polishes it
            let (s, ok) = descend(&mut f, simplex, tol, &mut iterations);
            converged = ok;
            simplex = s;
            break;
        }
    }
    simplex.sort_by(|x, y| x.1.total_cmp(&y.1));
    let (point, value) = simplex[0];
    let report = MinimizeReport {
        point: (point[0], point[1]),
        value,
        iterations,
        converged,
        probe_count: f.calls,
    };
    if converged {
        Ok(report)
    } else {
        Err(Error::MinimizerFailed { evaluations: f.calls })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootReport {
    pub root: f64,
    /// `f(root)`
    pub residual: f64,
    pub iterations: usize,
    /// Final bracket width.
    pub width: f64,
}

/// Bisection on `[lo, hi]` until the bracket is narrower than `tol`.
///
/// Requires `f(lo) * f(hi) <= 0`. Each iteration halves the bracket, so the iteration
/// count never exceeds `ceil(log2((hi - lo) / tol)) + 1`.
pub fn bracket_root<F>(mut f: F, lo: f64, hi: f64, tol: f64) -> Result<RootReport>
where
    F: FnMut(f64) -> f64,
{
    if !(tol > 0.0) || !(lo <= hi) {
        return Err(Error::InvalidArgument(format!(
            "bracket [{lo}, {hi}] with tolerance {tol}"
        )));
    }
    let (mut a, mut b) = (lo, hi);
    let (mut fa, fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(RootReport { root: a, residual: fa, iterations: 0, width: b - a });
    }
    if fb == 0.0 {
        return Ok(RootReport { root: b, residual: fb, iterations: 0, width: b - a });
    }
    if !(fa.signum() != fb.signum()) || fa.is_nan() || fb.is_nan() {
        return Err(Error::NoSignChange { lo, hi, f_lo: fa, f_hi: fb });
    }
    let mut iterations = 0;
    while b - a >= tol {
        let m = a + (b - a) / 2.0;
        if m <= a || m >= b {
            // bracket is down to adjacent floats
            break;
        }
        iterations += 1;
        let fm = f(m);
        if fm == 0.0 {
            return Ok(RootReport { root: m, residual: fm, iterations, width: b - a });
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    let root = a + (b - a) / 2.0;
    Ok(RootReport {
        root,
        residual: f(root),
        iterations,
        width: b - a,
    })
}

/// Central-difference gradient of a two-argument objective.
pub fn gradient_check<F>(mut objective: F, point: (f64, f64), h: f64) -> [f64; 2]
where
    F: FnMut(f64, f64) -> f64,
{
    let (x, y) = point;
    let gx = (objective(x + h, y) - objective(x - h, y)) / (2.0 * h);
    let gy = (objective(x, y + h) - objective(x, y - h)) / (2.0 * h);
    [gx, gy]
}
