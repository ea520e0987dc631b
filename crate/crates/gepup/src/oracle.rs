//! Independent check of the SDIRK stage decomposition: advance one step by
//! fixed-point iteration on the undecomposed stage equations (stage value
//! w^(i), scalar r^(i), and pressure q^(i) solved jointly), given the same
//! extrapolated stage approximations as the production stepper. Used only
//! in tests and behind the CLI --oracle flag; quadratic cost is fine at the
//! toy scales it runs at.

use crate::error::{GepupError, Result};
use crate::extrap::StageHistory;
use crate::grid::{
    fill_ghosts_vector, smooth_wall_line, wall_normal_component, CellField, ScalarBc, VectorBc,
    VectorField,
};
use crate::ops::{
    convection, div, grad, inner_product_vector, laplacian_vector, norm_linf_vector,
};
use crate::predictor::{StepContext, WALLS};
use crate::projection::project;
use crate::solver::{solve_helmholtz, solve_poisson_neumann};
use crate::tableau::ButcherTableau;

pub struct OracleResult {
    pub w: VectorField,
    pub u: VectorField,
    pub r: f64,
    pub fixed_point_iterations: Vec<usize>,
}

/// One step of the undecomposed GePUP-ES-SDIRK scheme from (t, w_n, r_n).
/// The q boundary data uses the same extrapolated w~ substitution as the
/// production stepper, so the two algorithms solve identical equations and
/// must agree to solver tolerance.
pub fn oracle_step(
    ctx: &StepContext,
    tableau: &ButcherTableau,
    history: &StageHistory,
    t: f64,
    k: f64,
    w_n: &VectorField,
    r_n: f64,
) -> Result<OracleResult> {
    let s = tableau.stages();
    let gamma = tableau.a[0][0];
    let alpha_h = ctx.nu * gamma * k;
    let electric = VectorBc::electric();
    let projected = VectorBc::projected();

    let mut rho: Vec<VectorField> = Vec::with_capacity(s);
    let mut alpha_cv: Vec<f64> = Vec::with_capacity(s);
    let mut iters = Vec::with_capacity(s);
    let mut w_last = w_n.clone();
    let mut u_last = VectorField::zeros(&ctx.grid);
    let mut r_last = r_n;

    for i in 0..s {
        let ti = t + tableau.c[i] * k;
        let (mut u_t, mut w_t) = history.extrapolate(tableau.c[i])?;
        fill_ghosts_vector(&mut u_t, &projected);
        fill_ghosts_vector(&mut w_t, &electric);
        let conv = convection(&u_t);
        let lap_wt = laplacian_vector(&w_t);
        let g_i = ctx.case.forcing(&ctx.grid, ti);

        // explicit part of the stage right-hand side
        let mut base = w_n.clone();
        for (j, rho_j) in rho.iter().enumerate() {
            if tableau.a[i][j] != 0.0 {
                base.axpy(k * tableau.a[i][j], rho_j);
            }
        }
        let mut acc_prev = 0.0;
        for j in 0..i {
            acc_prev += k * tableau.a[i][j] * alpha_cv[j];
        }

        // fixed-point iteration on (w, r, q)
        let mut w_i = w_n.clone();
        let mut r_i = r_n;
        let mut q_i = CellField::zeros(&ctx.grid);
        let mut n_iter = 0;
        for it in 0..200 {
            n_iter = it + 1;
            // q from the stage Poisson problem at the current r
            let mut src = g_i.clone();
            src.axpy(-r_i, &conv);
            let mut src_g = src.clone();
            fill_ghosts_vector(&mut src_g, &VectorBc::extrapolate());
            let q_rhs = div(&src_g);
            let q_data = WALLS.map(|wall| {
                let ng = ctx.case.forcing_wall_normal(&ctx.grid, ti, wall);
                let nn = wall_normal_component(&conv, wall);
                let nl = smooth_wall_line(&wall_normal_component(&lap_wt, wall));
                let nw = wall_normal_component(&w_t, wall);
                (0..ng.len())
                    .map(|f| ng[f] - r_i * nn[f] + ctx.nu * nl[f] + ctx.lambda * nw[f])
                    .collect::<Vec<f64>>()
            });
            let (q, _) = solve_poisson_neumann(&q_rhs, &ScalarBc::neumann_data(q_data), ctx.tol)?;
            let gq = grad(&q);

            // (1 - nu gamma k Lap) w = base + gamma k (g - r N - grad q)
            let mut rhs = base.clone();
            rhs.axpy(gamma * k, &g_i);
            rhs.axpy(-gamma * k * r_i, &conv);
            rhs.axpy(-gamma * k, &gq);
            let (wx, _) = solve_helmholtz(alpha_h, &rhs.x, &electric.x, ctx.tol)?;
            let (wy, _) = solve_helmholtz(alpha_h, &rhs.y, &electric.y, ctx.tol)?;
            let w_new = VectorField { x: wx, y: wy };

            let (u_new, _) = project(&w_new, &electric, ctx.tol)?;
            let r_new = r_n + acc_prev + gamma * k * inner_product_vector(&conv, &u_new);

            let mut dw = w_new.clone();
            dw.axpy(-1.0, &w_i);
            let defect = norm_linf_vector(&dw).max((r_new - r_i).abs());
            w_i = w_new;
            u_last = u_new;
            r_i = r_new;
            q_i = q;
            if defect < 1e-14 {
                break;
            }
            if it == 199 {
                return Err(GepupError::SolverDiverged {
                    residual: defect,
                    iterations: 200,
                });
            }
        }
        iters.push(n_iter);

        // slope from the converged stage values
        let mut wg = w_i.clone();
        fill_ghosts_vector(&mut wg, &electric);
        let lap_w = laplacian_vector(&wg);
        let gq = grad(&q_i);
        let mut rho_i = g_i.clone();
        rho_i.axpy(-r_i, &conv);
        rho_i.axpy(-1.0, &gq);
        rho_i.axpy(ctx.nu, &lap_w);
        rho.push(rho_i);
        alpha_cv.push(inner_product_vector(&conv, &u_last));
        w_last = w_i;
        r_last = r_i;
    }
    let _ = (w_last, r_last);

    let mut w_end = w_n.clone();
    let mut r_end = r_n;
    for i in 0..s {
        w_end.axpy(k * tableau.b[i], &rho[i]);
        r_end += k * tableau.b[i] * alpha_cv[i];
    }
    let (u_end, _) = project(&w_end, &electric, ctx.tol)?;
    Ok(OracleResult {
        w: w_end,
        u: u_end,
        r: r_end,
        fixed_point_iterations: iters,
    })
}
