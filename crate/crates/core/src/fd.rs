//! Theta finite-difference scheme for the pricing PDE
//! `∂_t f + μ(t,x) ∂_x f + ½ σ²(t,x) ∂_xx f - x f = 0`,
//! stepped backward on each interval between relevant dates.
//!
//! The known level `V^{j+1}` carries weight `θ` and the unknown level `V^j`
//! weight `1 - θ`, so `θ = 1` is explicit Euler, `θ = 0` implicit Euler and
//! `θ = ½` Crank-Nicolson. The right boundary drops the diffusion term
//! (linearity condition); the left boundary collocates the PDE with one-sided
//! differences.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::model::{apply_jump_condition, GridFunction, ModelSpec, Timeline, UniformGrid};
use crate::result::{Method, PriceResult, ResultMeta, Snapshot};

/// Minimum number of grid intervals.
const MIN_INTERVALS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdConfig {
    pub theta: f64,
    pub dt: f64,
    pub grid: UniformGrid,
}

impl FdConfig {
    pub fn new(theta: f64, dt: f64, grid: UniformGrid) -> Result<Self> {
        if !(0.0..=1.0).contains(&theta) {
            return Err(Error::param(format!("theta must lie in [0, 1], got {theta}")));
        }
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::param(format!("dt must be positive, got {dt}")));
        }
        if grid.intervals < MIN_INTERVALS {
            return Err(Error::InvalidGrid(format!(
                "need at least {MIN_INTERVALS} grid intervals, got {}",
                grid.intervals
            )));
        }
        Ok(Self { theta, dt, grid })
    }

    pub fn dx(&self) -> f64 {
        self.grid.dx
    }

    /// Warning for explicit Euler when `σ² Δt / Δx² > 1` somewhere on the grid.
    pub fn stability_warning(&self, model: &ModelSpec) -> Option<String> {
        if self.theta != 1.0 {
            return None;
        }
        let dx = self.grid.dx;
        let worst = self
            .grid
            .nodes()
            .iter()
            .filter_map(|&x| model.variance(0.0, x).ok())
            .fold(0.0, f64::max)
            * self.dt
            / (dx * dx);
        (worst > 1.0).then(|| {
            format!("explicit Euler with sigma^2 dt / dx^2 = {worst:.3} > 1 may be unstable")
        })
    }
}

/// Tridiagonal system `sub[i] u[i-1] + diag[i] u[i] + sup[i] u[i+1] = rhs[i]`
/// (`sub[0]` and `sup[n-1]` unused).
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalSystem {
    pub sub: Vec<f64>,
    pub diag: Vec<f64>,
    pub sup: Vec<f64>,
    pub rhs: Vec<f64>,
}

impl TridiagonalSystem {
    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// `A u - rhs`.
    pub fn residual(&self, u: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut r = self.diag[i] * u[i] - self.rhs[i];
                if i > 0 {
                    r += self.sub[i] * u[i - 1];
                }
                if i + 1 < n {
                    r += self.sup[i] * u[i + 1];
                }
                r
            })
            .collect()
    }
}

/// Thomas algorithm.
pub fn solve_tridiagonal(sys: &TridiagonalSystem) -> Result<Vec<f64>> {
    let n = sys.len();
    if sys.sub.len() != n || sys.sup.len() != n || sys.rhs.len() != n {
        return Err(Error::InvalidGrid("tridiagonal arrays of unequal length".into()));
    }
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut pivot = sys.diag[0];
    if pivot == 0.0 || !pivot.is_finite() {
        return Err(Error::ZeroPivot { row: 0 });
    }
    c[0] = sys.sup[0] / pivot;
    d[0] = sys.rhs[0] / pivot;
    for i in 1..n {
        pivot = sys.diag[i] - sys.sub[i] * c[i - 1];
        if pivot == 0.0 || !pivot.is_finite() {
            return Err(Error::ZeroPivot { row: i });
        }
        c[i] = if i + 1 < n { sys.sup[i] / pivot } else { 0.0 };
        d[i] = (sys.rhs[i] - sys.sub[i] * d[i - 1]) / pivot;
    }
    let mut u = d;
    for i in (0..n - 1).rev() {
        u[i] -= c[i] * u[i + 1];
    }
    Ok(u)
}

/// Spatial operator rows `L V` at one time level: `(lower, centre, upper)`
/// weights for `V_{i-1}, V_i, V_{i+1}`, plus the `V_2` weight of row 0.
struct Operator {
    lower: Vec<f64>,
    centre: Vec<f64>,
    upper: Vec<f64>,
    row0_v2: f64,
}

fn operator(model: &ModelSpec, t: f64, xs: &[f64], dx: f64) -> Result<Operator> {
    let n = xs.len();
    let (mut lower, mut centre, mut upper) = (vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    let dx2 = dx * dx;
    for i in 1..n - 1 {
        let x = xs[i];
        let half_var = 0.5 * model.variance(t, x)? / dx2;
        let conv = model.drift(t, x) / (2.0 * dx);
        lower[i] = half_var - conv;
        centre[i] = -2.0 * half_var - x;
        upper[i] = half_var + conv;
    }
    // left: (V0 - 2V1 + V2)/dx² and (V1 - V0)/dx
    let x0 = xs[0];
    let half_var0 = 0.5 * model.variance(t, x0)? / dx2;
    let conv0 = model.drift(t, x0) / dx;
    centre[0] = half_var0 - conv0 - x0;
    upper[0] = -2.0 * half_var0 + conv0;
    let row0_v2 = half_var0;
    // right: linearity, (V_N - V_{N-1})/dx
    let xn = xs[n - 1];
    let convn = model.drift(t, xn) / dx;
    lower[n - 1] = -convn;
    centre[n - 1] = convn - xn;
    Ok(Operator {
        lower,
        centre,
        upper,
        row0_v2,
    })
}

/// Assembles the system for `V^j` given `V^{j+1}` at `t_next` and the step
/// `dt`. The `V_2` coupling of row 0 is eliminated with row 1.
pub fn assemble_step(
    model: &ModelSpec,
    cfg: &FdConfig,
    v_next: &GridFunction,
    t_next: f64,
    dt: f64,
) -> Result<TridiagonalSystem> {
    if !(dt > 0.0) {
        return Err(Error::param(format!("dt must be positive, got {dt}")));
    }
    let xs = v_next.xs();
    let v = v_next.vals();
    let n = xs.len();
    if n < MIN_INTERVALS + 1 {
        return Err(Error::InvalidGrid(format!("need at least {} nodes", MIN_INTERVALS + 1)));
    }
    let dx = cfg.grid.dx;
    let theta = cfg.theta;
    let inv_dt = 1.0 / dt;

    // known level: V^{j+1}/Δt + θ L(t^{j+1}) V^{j+1}
    let mut rhs: Vec<f64> = v.iter().map(|vi| vi * inv_dt).collect();
    let mut known_v2 = 0.0;
    if theta > 0.0 {
        let op = operator(model, t_next, xs, dx)?;
        for i in 0..n {
            let mut lv = op.centre[i] * v[i];
            if i > 0 {
                lv += op.lower[i] * v[i - 1];
            }
            if i + 1 < n {
                lv += op.upper[i] * v[i + 1];
            }
            rhs[i] += theta * lv;
        }
        known_v2 = theta * op.row0_v2 * v[2];
    }
    rhs[0] += known_v2;

    // unknown level: V^j/Δt - (1-θ) L(t^j) V^j
    let mut sub = vec![0.0; n];
    let mut diag = vec![inv_dt; n];
    let mut sup = vec![0.0; n];
    let mut row0_v2 = 0.0;
    if theta < 1.0 {
        let w = 1.0 - theta;
        let op = operator(model, t_next - dt, xs, dx)?;
        for i in 0..n {
            sub[i] = -w * op.lower[i];
            diag[i] -= w * op.centre[i];
            sup[i] = -w * op.upper[i];
        }
        row0_v2 = -w * op.row0_v2;
    }
    if row0_v2 != 0.0 {
        // row0 -= (row0_v2 / sup[1]) * row1 removes the V_2 entry
        if sup[1] == 0.0 {
            return Err(Error::ZeroPivot { row: 1 });
        }
        let f = row0_v2 / sup[1];
        diag[0] -= f * sub[1];
        sup[0] -= f * diag[1];
        rhs[0] -= f * rhs[1];
    }
    sub[0] = 0.0;
    sup[n - 1] = 0.0;
    Ok(TridiagonalSystem { sub, diag, sup, rhs })
}

/// Number of substeps `round(length / dt)`, at least one.
pub fn substeps(length: f64, dt: f64) -> usize {
    ((length / dt).round() as usize).max(1)
}

/// Backward sweep: terminal data from the payoff or the jump condition at
/// each relevant date, then `M_k` theta steps per interval.
///
/// Snapshots hold every level `t^j`, `j = 0..M_k-1`, of every interval.
pub fn sweep_fd(
    model: &ModelSpec,
    timeline: &Timeline,
    payoff: &dyn Fn(f64) -> f64,
    cfg: &FdConfig,
) -> Result<PriceResult> {
    let started = Instant::now();
    let mut v = cfg.grid.function(payoff);
    let mut snapshots = Vec::new();
    let mut steps = 0;
    for (lo, hi, event) in timeline.intervals().iter().rev() {
        if let Some(ev) = event {
            v = apply_jump_condition(&v, &ev.kind)?;
        }
        let m_k = substeps(hi - lo, cfg.dt);
        let dt_k = (hi - lo) / m_k as f64;
        for j in (0..m_k).rev() {
            let t_next = lo + (j + 1) as f64 * dt_k;
            let sys = assemble_step(model, cfg, &v, t_next, dt_k)?;
            v = v.with_vals(solve_tridiagonal(&sys)?);
            snapshots.push(Snapshot {
                t: lo + j as f64 * dt_k,
                values: v.vals().to_vec(),
            });
        }
        steps += m_k;
    }
    let meta = ResultMeta {
        domain: Some((cfg.grid.lo, cfg.grid.hi())),
        dx: Some(cfg.grid.dx),
        dt: Some(cfg.dt),
        theta: Some(cfg.theta),
        time_steps: steps,
        wall_time: started.elapsed(),
        warnings: cfg.stability_warning(model).into_iter().collect(),
        ..ResultMeta::default()
    };
    Ok(PriceResult::new(Method::FiniteDifference, cfg.grid.nodes(), snapshots, meta))
}
