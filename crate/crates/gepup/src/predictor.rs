//! Explicit GePUP-E stepper. It serves two purposes: seeding the stage
//! extrapolator during the first two steps (substeps of k/3) and producing
//! the predicted endpoint sample in steady operation (one full step of k).

use crate::cases::Case;
use crate::error::Result;
use crate::grid::{
    fill_ghosts_vector, smooth_wall_line, wall_normal_component, Grid, ScalarBc, VectorBc,
    VectorField, Wall,
};
use crate::ops::{convection, div, grad, laplacian_vector};
use crate::projection::project;
use crate::solver::solve_poisson_neumann;
use crate::tableau::ButcherTableau;

/// Shared parameters for one configured run.
#[derive(Debug, Clone, Copy)]
pub struct StepContext {
    pub case: Case,
    pub grid: Grid,
    pub nu: f64,
    pub lambda: f64,
    /// Relative residual tolerance for the elliptic solves.
    pub tol: f64,
}

impl StepContext {
    pub fn new(case: Case, grid: Grid, lambda: f64, tol: f64) -> StepContext {
        StepContext {
            case,
            grid,
            nu: case.nu,
            lambda,
            tol,
        }
    }
}

pub const WALLS: [Wall; 4] = [Wall::Left, Wall::Right, Wall::Bottom, Wall::Top];

/// Wall-face data n.(g - N + nu*Lap(w)) + lambda n.w for the pressure BVP of
/// the explicit formulation. `w` and `lap_w` must carry filled ghosts.
fn pressure_wall_data(
    ctx: &StepContext,
    t: f64,
    conv: &VectorField,
    w: &VectorField,
    lap_w: &VectorField,
) -> [Vec<f64>; 4] {
    WALLS.map(|wall| {
        let g = ctx.case.forcing_wall_normal(&ctx.grid, t, wall);
        let nn = wall_normal_component(conv, wall);
        let nl = smooth_wall_line(&wall_normal_component(lap_w, wall));
        let nw = wall_normal_component(w, wall);
        (0..g.len())
            .map(|f| g[f] - nn[f] + ctx.nu * nl[f] + ctx.lambda * nw[f])
            .collect()
    })
}

/// The GePUP-E right-hand side rho = g - (u.grad)u - grad(q) + nu*Lap(w)
/// evaluated at time t for the state w (ghosts need not be filled).
pub fn gepup_e_rhs(ctx: &StepContext, t: f64, w: &VectorField) -> Result<VectorField> {
    let mut wg = w.clone();
    fill_ghosts_vector(&mut wg, &VectorBc::electric());
    let (u, _) = project(&wg, &VectorBc::electric(), ctx.tol)?;
    let conv = convection(&u);
    let g = ctx.case.forcing(&ctx.grid, t);
    let lap_w = laplacian_vector(&wg);

    // div(g - N) with extrapolation ghosts on the composite field
    let mut gmn = g.clone();
    gmn.axpy(-1.0, &conv);
    fill_ghosts_vector(&mut gmn, &VectorBc::extrapolate());
    let rhs_q = div(&gmn);

    let data = pressure_wall_data(ctx, t, &conv, &wg, &lap_w);
    let (q, _) = solve_poisson_neumann(&rhs_q, &ScalarBc::neumann_data(data), ctx.tol)?;
    let gq = grad(&q);

    let mut rho = g;
    rho.axpy(-1.0, &conv);
    rho.axpy(-1.0, &gq);
    rho.axpy(ctx.nu, &lap_w);
    Ok(rho)
}

/// One explicit RK step of size k from (t, w). Returns the endpoint W and
/// U = project(W), plus the recorded stage slopes.
pub fn erk_step(
    ctx: &StepContext,
    tableau: &ButcherTableau,
    t: f64,
    k: f64,
    w: &VectorField,
) -> Result<(VectorField, VectorField, Vec<VectorField>)> {
    assert!(tableau.is_explicit(), "predictor tableau must be explicit");
    let s = tableau.stages();
    let mut slopes: Vec<VectorField> = Vec::with_capacity(s);
    for i in 0..s {
        let mut wi = w.clone();
        for (j, slope) in slopes.iter().enumerate() {
            if tableau.a[i][j] != 0.0 {
                wi.axpy(k * tableau.a[i][j], slope);
            }
        }
        slopes.push(gepup_e_rhs(ctx, t + tableau.c[i] * k, &wi)?);
    }
    let mut w_end = w.clone();
    for (bi, slope) in tableau.b.iter().zip(&slopes) {
        w_end.axpy(k * bi, slope);
    }
    let (u_end, _) = project(&w_end, &VectorBc::electric(), ctx.tol)?;
    Ok((w_end, u_end, slopes))
}

/// Initial state for a case: cell-averaged initial velocity, optionally
/// scrubbed by repeated projection; W and U start equal.
pub fn initial_state(ctx: &StepContext) -> Result<(VectorField, VectorField)> {
    let w0 = ctx.case.initial_velocity(&ctx.grid);
    let u0 = if ctx.case.pre_projection_passes > 0 {
        crate::projection::project_repeated(
            &w0,
            &VectorBc::electric(),
            ctx.case.pre_projection_passes,
            ctx.tol,
        )?
    } else {
        w0.clone()
    };
    Ok((u0.clone(), u0))
}
