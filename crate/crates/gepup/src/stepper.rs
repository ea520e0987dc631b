//! The fully discrete GePUP-ES-SDIRK stepper. Each stage solves two
//! pressure Poisson problems (GES.1-2), a family of Helmholtz problems for
//! the decomposition pieces of w (GES.3), projects each piece (GES.4),
//! closes the scalar-variable equation (GES.5), and assembles the stage
//! value and slope (GES.6). The endpoint is the tableau combination.

use crate::error::{GepupError, Result};
use crate::extrap::StageHistory;
use crate::grid::{
    fill_ghosts_vector, smooth_wall_line, wall_normal_component, CellField, ScalarBc, VectorBc,
    VectorField,
};
use crate::ops::{
    convection, div, grad, inner_product_vector, laplacian_vector, norm_linf,
};
use crate::predictor::{erk_step, initial_state, StepContext, WALLS};
use crate::projection::project;
use crate::solver::{solve_helmholtz, solve_poisson_neumann};
use crate::tableau::{rk4, ButcherTableau};
use std::collections::VecDeque;

/// Scalar diagnostics recorded at the end of every step (and once at t0).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepDiagnostics {
    pub step: usize,
    pub t: f64,
    /// Modified energy 0.5 (||u||^2 + r^2).
    pub energy: f64,
    pub r: f64,
    /// Norms of the discrete divergence of W.
    pub div_w_l1: f64,
    pub div_w_l2: f64,
    pub div_w_linf: f64,
    /// Max over wall faces of |n . W|.
    pub wall_normal_w_max: f64,
    /// Kinetic energy 0.5 ||u||^2.
    pub kinetic: f64,
}

pub struct GepupStepper {
    pub ctx: StepContext,
    pub tableau: ButcherTableau,
    pub t: f64,
    pub step_index: usize,
    pub w: VectorField,
    pub u: VectorField,
    pub r: f64,
    /// Recent step endpoints (t, U, W), oldest first, at most 3.
    past: VecDeque<(f64, VectorField, VectorField)>,
    predictor: ButcherTableau,
}

impl GepupStepper {
    pub fn new(ctx: StepContext, tableau: ButcherTableau, t0: f64) -> Result<GepupStepper> {
        if !tableau.is_diagonally_implicit() {
            return Err(GepupError::Config(format!(
                "stepper requires a DIRK tableau, got {}",
                tableau.name
            )));
        }
        let (w, u) = initial_state(&ctx)?;
        let mut past = VecDeque::new();
        past.push_back((t0, u.clone(), w.clone()));
        Ok(GepupStepper {
            ctx,
            tableau,
            t: t0,
            step_index: 0,
            w,
            u,
            r: 1.0,
            past,
            predictor: rk4(),
        })
    }

    pub fn diagnostics(&self) -> StepDiagnostics {
        let mut wg = self.w.clone();
        fill_ghosts_vector(&mut wg, &VectorBc::electric());
        let dw = div(&wg);
        let wall_max = WALLS
            .iter()
            .flat_map(|&wall| wall_normal_component(&wg, wall))
            .fold(0.0f64, |a, v| a.max(v.abs()));
        let kinetic = 0.5 * inner_product_vector(&self.u, &self.u);
        StepDiagnostics {
            step: self.step_index,
            t: self.t,
            energy: kinetic + 0.5 * self.r * self.r,
            r: self.r,
            div_w_l1: crate::ops::norm_l1(&dw),
            div_w_l2: crate::ops::norm_l2(&dw),
            div_w_linf: norm_linf(&dw),
            wall_normal_w_max: wall_max,
            kinetic,
        }
    }

    /// Four extrapolation samples for the current step of size k.
    /// Startup (fewer than 3 stored endpoints): three k/3 predictor substeps
    /// give nodes (0, 1/3, 2/3, 1). Steady: the stored endpoints plus a
    /// full-step prediction give nodes ((t_j - t_n)/k, ..., 0, 1).
    pub fn build_history(&self, k: f64) -> Result<StageHistory> {
        if self.past.len() < 3 {
            let sub = k / 3.0;
            let mut u_samples = vec![self.u.clone()];
            let mut w_samples = vec![self.w.clone()];
            let mut w = self.w.clone();
            for j in 0..3 {
                let (wn, un, _) =
                    erk_step(&self.ctx, &self.predictor, self.t + j as f64 * sub, sub, &w)?;
                u_samples.push(un);
                w_samples.push(wn.clone());
                w = wn;
            }
            StageHistory::new([0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0], u_samples, w_samples)
        } else {
            let (w_pred, u_pred, _) =
                erk_step(&self.ctx, &self.predictor, self.t, k, &self.w)?;
            let mut nodes = [0.0; 4];
            let mut u_samples = Vec::with_capacity(4);
            let mut w_samples = Vec::with_capacity(4);
            for (j, (tj, uj, wj)) in self.past.iter().enumerate() {
                nodes[j] = (tj - self.t) / k;
                u_samples.push(uj.clone());
                w_samples.push(wj.clone());
            }
            nodes[3] = 1.0;
            u_samples.push(u_pred);
            w_samples.push(w_pred);
            StageHistory::new(nodes, u_samples, w_samples)
        }
    }

    /// Advance one step of size k.
    pub fn step(&mut self, k: f64) -> Result<StepDiagnostics> {
        self.step_inner(k).map_err(|e| GepupError::StepFailed {
            step: self.step_index,
            stage: usize::MAX,
            source: Box::new(e),
        })
    }

    fn step_inner(&mut self, k: f64) -> Result<StepDiagnostics> {
        let ctx = self.ctx;
        let tab = self.tableau.clone();
        let s = tab.stages();
        let gamma = tab.a[0][0];
        let alpha_h = ctx.nu * gamma * k; // Helmholtz coefficient
        let history = self.build_history(k)?;

        let electric = VectorBc::electric();
        let projected = VectorBc::projected();

        // per-stage records
        let mut g_stage: Vec<VectorField> = Vec::with_capacity(s);
        let mut conv_stage: Vec<VectorField> = Vec::with_capacity(s);
        let mut gq1: Vec<VectorField> = Vec::with_capacity(s);
        let mut gq2: Vec<VectorField> = Vec::with_capacity(s);
        // decomposition pieces and their Laplacians: [stage][piece]
        let mut lap_pieces: Vec<Vec<VectorField>> = Vec::with_capacity(s);
        let mut r_stage: Vec<f64> = Vec::with_capacity(s);
        let mut alpha_cv: Vec<f64> = Vec::with_capacity(s);
        let mut rho: Vec<VectorField> = Vec::with_capacity(s);

        for i in 0..s {
            let ti = self.t + tab.c[i] * k;
            let (mut u_t, mut w_t) = history.extrapolate(tab.c[i])?;
            fill_ghosts_vector(&mut u_t, &projected);
            fill_ghosts_vector(&mut w_t, &electric);

            let g_i = ctx.case.forcing(&ctx.grid, ti);

            // GES.1: q1 from div(g) with data n.(g + nu Lap w~) + lambda n.w~
            let lap_wt = laplacian_vector(&w_t);
            let q1_data = WALLS.map(|wall| {
                let ng = ctx.case.forcing_wall_normal(&ctx.grid, ti, wall);
                let nl = smooth_wall_line(&wall_normal_component(&lap_wt, wall));
                let nw = wall_normal_component(&w_t, wall);
                (0..ng.len())
                    .map(|f| ng[f] + ctx.nu * nl[f] + ctx.lambda * nw[f])
                    .collect::<Vec<f64>>()
            });
            let q1_rhs = if ctx.case.has_forcing() {
                let mut gg = g_i.clone();
                fill_ghosts_vector(&mut gg, &VectorBc::extrapolate());
                div(&gg)
            } else {
                CellField::zeros(&ctx.grid)
            };
            let (q1, _) =
                solve_poisson_neumann(&q1_rhs, &ScalarBc::neumann_data(q1_data), ctx.tol)?;
            gq1.push(grad(&q1));

            // GES.2: q2 from -div(N) with data -n.N, N = (u~.grad)u~
            let conv_i = convection(&u_t);
            let mut conv_g = conv_i.clone();
            fill_ghosts_vector(&mut conv_g, &VectorBc::extrapolate());
            let mut q2_rhs = div(&conv_g);
            q2_rhs.scale(-1.0);
            let q2_data = WALLS.map(|wall| {
                wall_normal_component(&conv_i, wall)
                    .into_iter()
                    .map(|v| -v)
                    .collect::<Vec<f64>>()
            });
            let (q2, _) =
                solve_poisson_neumann(&q2_rhs, &ScalarBc::neumann_data(q2_data), ctx.tol)?;
            gq2.push(grad(&q2));
            conv_stage.push(conv_i);
            g_stage.push(g_i);

            // GES.3: Helmholtz solves for the pieces of w^(i)
            let mut pieces: Vec<VectorField> = Vec::with_capacity(i + 2);
            let mut piece_laps: Vec<VectorField> = Vec::with_capacity(i + 2);

            // piece 0
            let mut rhs0 = self.w.clone();
            for j in 0..=i {
                if tab.a[i][j] == 0.0 {
                    continue;
                }
                rhs0.axpy(k * tab.a[i][j], &g_stage[j]);
                rhs0.axpy(-k * tab.a[i][j], &gq1[j]);
            }
            for j in 0..i {
                if tab.a[i][j] != 0.0 {
                    rhs0.axpy(ctx.nu * k * tab.a[i][j], &lap_pieces[j][0]);
                }
            }
            pieces.push(solve_helmholtz_vector(alpha_h, &rhs0, &electric, ctx.tol)?);

            // pieces 1..=i+1 (piece p belongs to stage index p-1)
            for p in 1..=(i + 1) {
                let ell = p - 1; // stage index of the convection/q2 source
                let mut rhs = VectorField::zeros(&ctx.grid);
                let a_il = tab.a[i][ell];
                if a_il != 0.0 {
                    rhs.axpy(-k * a_il, &conv_stage[ell]);
                    rhs.axpy(-k * a_il, &gq2[ell]);
                }
                for j in ell..i {
                    if tab.a[i][j] != 0.0 {
                        rhs.axpy(ctx.nu * k * tab.a[i][j], &lap_pieces[j][p]);
                    }
                }
                pieces.push(solve_helmholtz_vector(alpha_h, &rhs, &electric, ctx.tol)?);
            }
            for piece in &pieces {
                piece_laps.push(laplacian_vector(piece));
            }

            // GES.4: project every piece
            let mut u_pieces: Vec<VectorField> = Vec::with_capacity(pieces.len());
            for piece in &pieces {
                let (up, _) = project(piece, &electric, ctx.tol)?;
                u_pieces.push(up);
            }

            // GES.5: scalar stage equation. I_cv(u~, v) = <N_i, v>.
            let n_i = &conv_stage[i];
            let mut u_bar = u_pieces[0].clone();
            for p in 1..=i {
                u_bar.axpy(r_stage[p - 1], &u_pieces[p]);
            }
            let denom = 1.0 - gamma * k * inner_product_vector(n_i, &u_pieces[i + 1]);
            if denom.abs() < 1e-12 {
                return Err(GepupError::DegenerateStage {
                    step: self.step_index,
                    stage: i,
                    denom,
                });
            }
            let mut num = self.r + gamma * k * inner_product_vector(n_i, &u_bar);
            for j in 0..i {
                num += k * tab.a[i][j] * alpha_cv[j];
            }
            let r_i = num / denom;
            r_stage.push(r_i);

            // GES.6: assemble stage values and the slope rho^(i)
            let mut w_i = pieces[0].clone();
            let mut u_i = u_pieces[0].clone();
            let mut lap_w_i = piece_laps[0].clone();
            for p in 1..=(i + 1) {
                w_i.axpy(r_stage[p - 1], &pieces[p]);
                u_i.axpy(r_stage[p - 1], &u_pieces[p]);
                lap_w_i.axpy(r_stage[p - 1], &piece_laps[p]);
            }
            alpha_cv.push(inner_product_vector(n_i, &u_i));

            let mut rho_i = g_stage[i].clone();
            rho_i.axpy(-r_i, n_i);
            rho_i.axpy(-1.0, &gq1[i]);
            rho_i.axpy(-r_i, &gq2[i]);
            rho_i.axpy(ctx.nu, &lap_w_i);
            rho.push(rho_i);

            lap_pieces.push(piece_laps);
        }

        // endpoint combination
        let mut w_new = self.w.clone();
        let mut r_new = self.r;
        for i in 0..s {
            w_new.axpy(k * tab.b[i], &rho[i]);
            r_new += k * tab.b[i] * alpha_cv[i];
        }
        let (u_new, _) = project(&w_new, &electric, ctx.tol)?;

        self.t += k;
        self.step_index += 1;
        self.w = w_new;
        self.u = u_new;
        self.r = r_new;
        self.past
            .push_back((self.t, self.u.clone(), self.w.clone()));
        while self.past.len() > 3 {
            self.past.pop_front();
        }
        Ok(self.diagnostics())
    }
}

fn solve_helmholtz_vector(
    alpha: f64,
    rhs: &VectorField,
    bc: &VectorBc,
    tol: f64,
) -> Result<VectorField> {
    let (x, _) = solve_helmholtz(alpha, &rhs.x, &bc.x, tol)?;
    let (y, _) = solve_helmholtz(alpha, &rhs.y, &bc.y, tol)?;
    Ok(VectorField { x, y })
}

/// A complete configured run: fixed step k = Cr h / max|u0| from t0 to te
/// (the final step is shortened to land on te exactly), diagnostics per step.
pub struct RunResult {
    pub stepper: GepupStepper,
    pub diagnostics: Vec<StepDiagnostics>,
}

pub fn run(
    ctx: StepContext,
    tableau: ButcherTableau,
    cr: f64,
    t0: f64,
    te: f64,
    mut on_step: impl FnMut(&StepDiagnostics),
) -> Result<RunResult> {
    let k = cr * ctx.grid.h / ctx.case.max_speed;
    let mut stepper = GepupStepper::new(ctx, tableau, t0)?;
    let mut diagnostics = vec![stepper.diagnostics()];
    on_step(&diagnostics[0]);
    let mut t = t0;
    while te - t > 1e-12 * te.abs().max(1.0) {
        let dt = k.min(te - t);
        let rec = stepper.step(dt)?;
        t = stepper.t;
        on_step(&rec);
        diagnostics.push(rec);
    }
    Ok(RunResult {
        stepper,
        diagnostics,
    })
}
