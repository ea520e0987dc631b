//! Acceptance gate: one test per criterion, each printing a single
//! machine-readable verdict line. Heavy benchmark runs are shared through
//! `OnceLock` so the energy/SAV and lambda criteria reuse the convergence
//! runs instead of repeating them.

use gepup::cases::Case;
use gepup::diagnostics::{observed_order, richardson_error, Norm};
use gepup::grid::{
    fill_ghosts, fill_ghosts_vector, BcKind, Grid, ScalarBc, VectorBc, VectorField,
};
use gepup::ops::{
    div, grad, init_cell_averages, laplacian, norm_l2, norm_l2_vector,
    norm_linf, norm_linf_vector,
};
use gepup::oracle::oracle_step;
use gepup::predictor::StepContext;
use gepup::solver::{solve_helmholtz, solve_poisson_neumann};
use gepup::stepper::{run, GepupStepper, StepDiagnostics};
use gepup::tableau::{rk4, sdirk43};
use std::sync::OnceLock;

const TOL: f64 = 1e-11;

fn verdict(idx: usize, name: &str, pass: bool, details: &str) {
    println!(
        "acceptance {idx:02} {name}: {} ({details})",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "acceptance {idx:02} {name} failed: {details}");
}

struct SweepData {
    grids: Vec<usize>,
    finals: Vec<VectorField>,
    diags: Vec<Vec<StepDiagnostics>>,
}

fn sweep(case_for: impl Fn() -> Case, lambda: f64, cr: f64, te: f64, grids: &[usize]) -> SweepData {
    let mut finals = Vec::new();
    let mut diags = Vec::new();
    for &n in grids {
        let ctx = StepContext::new(case_for(), Grid::unit_square(n), lambda, TOL);
        let result = run(ctx, sdirk43(), cr, 0.0, te, |_| {}).expect("run failed");
        finals.push(result.stepper.u.clone());
        diags.push(result.diagnostics);
    }
    SweepData {
        grids: grids.to_vec(),
        finals,
        diags,
    }
}

/// Viscous box, Re = 1e4, Cr = 0.5, te = 0.5, grids 64/128/256.
fn table_high_re() -> &'static SweepData {
    static DATA: OnceLock<SweepData> = OnceLock::new();
    DATA.get_or_init(|| sweep(|| Case::viscous_box(1e4), 1.0, 0.5, 0.5, &[64, 128, 256]))
}

/// Viscous box, Re = 1e2, Cr = 0.1, te = 0.5, grids 32/64/128.
fn table_low_re() -> &'static SweepData {
    static DATA: OnceLock<SweepData> = OnceLock::new();
    DATA.get_or_init(|| sweep(|| Case::viscous_box(1e2), 1.0, 0.1, 0.5, &[32, 64, 128]))
}

fn orders(data: &SweepData, norm: Norm) -> (Vec<f64>, Vec<f64>) {
    let errs: Vec<f64> = (0..data.grids.len() - 1)
        .map(|lev| richardson_error(&data.finals[lev], &data.finals[lev + 1], norm))
        .collect();
    let ords = errs.windows(2).map(|e| observed_order(e[0], e[1])).collect();
    (errs, ords)
}

// ---------------------------------------------------------------- 1

#[test]
fn a01_operators_fourth_order() {
    // Degree-3 exactness with quartic-extrapolated ghosts. A coarse grid
    // keeps the 1/h^2 rounding amplification of the Laplacian below 1e-12.
    let grid = Grid::unit_square(8);
    let p = |x: f64, y: f64| x * x * x - 2.0 * x * x * y + 3.0 * x * y * y + y * y * y - x * x
        + x * y - y * y + x - 2.0 * y + 1.0;
    let px = |x: f64, y: f64| 3.0 * x * x - 4.0 * x * y + 3.0 * y * y - 2.0 * x + y + 1.0;
    let py = |x: f64, y: f64| -2.0 * x * x + 6.0 * x * y + 3.0 * y * y + x - 2.0 * y - 2.0;
    let lap = |x: f64, y: f64| (6.0 * x - 4.0 * y - 2.0) + (6.0 * x + 6.0 * y - 2.0);

    let mut f = init_cell_averages(&grid, p);
    fill_ghosts(&mut f, &ScalarBc::extrapolate());
    let g = grad(&f);
    let l = laplacian(&f);
    let mut v = VectorField {
        x: f.clone(),
        y: init_cell_averages(&grid, py),
    };
    fill_ghosts(&mut v.y, &ScalarBc::extrapolate());
    let d = div(&v);

    let mut exact_gx = init_cell_averages(&grid, px);
    exact_gx.axpy(-1.0, &g.x);
    let mut exact_gy = init_cell_averages(&grid, py);
    exact_gy.axpy(-1.0, &g.y);
    let mut exact_l = init_cell_averages(&grid, lap);
    exact_l.axpy(-1.0, &l);
    // div (p, py): exact divergence is px + pyy.
    let mut exact_d = init_cell_averages(&grid, |x, y| px(x, y) + 6.0 * x + 6.0 * y - 2.0);
    exact_d.axpy(-1.0, &d);
    let poly_err = norm_linf(&exact_gx)
        .max(norm_linf(&exact_gy))
        .max(norm_linf(&exact_l))
        .max(norm_linf(&exact_d));

    // Trigonometric refinement: grad and laplacian of a Neumann-compatible
    // scalar, divergence of the solenoidal no-slip box field.
    let phi = |x: f64, y: f64| (std::f64::consts::PI * x).cos() * (std::f64::consts::PI * y).cos();
    let pi = std::f64::consts::PI;
    let mut eg = Vec::new();
    let mut el = Vec::new();
    let mut ed = Vec::new();
    for n in [32usize, 64, 128, 256] {
        let grid = Grid::unit_square(n);
        let mut f = init_cell_averages(&grid, phi);
        fill_ghosts(&mut f, &ScalarBc::neumann_zero());
        let g = grad(&f);
        let l = laplacian(&f);
        let mut ex = init_cell_averages(&grid, |x, y| -pi * (pi * x).sin() * (pi * y).cos());
        ex.axpy(-1.0, &g.x);
        let mut ey = init_cell_averages(&grid, |x, y| -pi * (pi * x).cos() * (pi * y).sin());
        ey.axpy(-1.0, &g.y);
        eg.push(norm_l2(&ex).hypot(norm_l2(&ey)));
        let mut elap = init_cell_averages(&grid, |x, y| -2.0 * pi * pi * phi(x, y));
        elap.axpy(-1.0, &l);
        el.push(norm_l2(&elap));

        let case = Case::viscous_box(1e4);
        let mut v = case.initial_velocity(&grid);
        fill_ghosts_vector(&mut v, &VectorBc::electric());
        ed.push(norm_l2(&div(&v)));
    }
    let og = observed_order(eg[eg.len() - 2], eg[eg.len() - 1]);
    let ol = observed_order(el[el.len() - 2], el[el.len() - 1]);
    let od = observed_order(ed[ed.len() - 2], ed[ed.len() - 1]);

    let pass = poly_err <= 1e-12 && og >= 3.7 && ol >= 3.7 && od >= 3.7;
    verdict(
        1,
        "operators-fourth-order",
        pass,
        &format!(
            "cubic exactness {poly_err:.2e} <= 1e-12; orders at 128->256: grad {og:.2}, laplacian {ol:.2}, div {od:.2}, all >= 3.7"
        ),
    );
}

// ---------------------------------------------------------------- 2

#[test]
fn a02_elliptic_solvers() {
    let pi = std::f64::consts::PI;
    let tol = 1e-12;
    let mut ep = Vec::new();
    let mut eh = Vec::new();
    for n in [32usize, 64, 128, 256] {
        let grid = Grid::unit_square(n);

        // Neumann Poisson: phi = cos(pi x) cos(pi y), homogeneous Neumann.
        let phi = |x: f64, y: f64| (pi * x).cos() * (pi * y).cos();
        let rhs = init_cell_averages(&grid, |x, y| -2.0 * pi * pi * phi(x, y));
        let (sol, stats) = solve_poisson_neumann(&rhs, &ScalarBc::neumann_zero(), tol).unwrap();
        assert!(
            stats.residual <= tol * stats.rhs_norm.max(1e-30) * 1.0001,
            "poisson residual contract violated: {} vs {}",
            stats.residual,
            tol * stats.rhs_norm
        );
        let mut exact = init_cell_averages(&grid, phi);
        let m = exact.interior_mean();
        exact.shift(-m);
        exact.axpy(-1.0, &sol);
        ep.push(norm_l2(&exact));

        // Mixed-BC Helmholtz: phi = cos(pi x) sin(pi y), Neumann on the
        // x-walls, Dirichlet on the y-walls, both homogeneous.
        let alpha = 0.1;
        let phi2 = |x: f64, y: f64| (pi * x).cos() * (pi * y).sin();
        let rhs2 = init_cell_averages(&grid, |x, y| (1.0 + 2.0 * alpha * pi * pi) * phi2(x, y));
        let bc = ScalarBc {
            walls: [
                BcKind::NeumannZero,
                BcKind::NeumannZero,
                BcKind::DirichletZero,
                BcKind::DirichletZero,
            ],
        };
        let (sol2, stats2) = solve_helmholtz(alpha, &rhs2, &bc, tol).unwrap();
        assert!(
            stats2.residual <= tol * stats2.rhs_norm.max(1e-30) * 1.0001,
            "helmholtz residual contract violated: {} vs {}",
            stats2.residual,
            tol * stats2.rhs_norm
        );
        let mut exact2 = init_cell_averages(&grid, phi2);
        exact2.axpy(-1.0, &sol2);
        eh.push(norm_l2(&exact2));
    }
    let op = observed_order(ep[ep.len() - 2], ep[ep.len() - 1]);
    let oh = observed_order(eh[eh.len() - 2], eh[eh.len() - 1]);
    let pass = op >= 3.5 && oh >= 3.5;
    verdict(
        2,
        "elliptic-manufactured-solutions",
        pass,
        &format!("orders at 128->256: Neumann Poisson {op:.2}, mixed-BC Helmholtz {oh:.2}, both >= 3.5; residual contracts held"),
    );
}

// ---------------------------------------------------------------- 3

#[test]
fn a03_tableau_certificate() {
    let s = sdirk43();
    let eigs = s.stability_eigenvalues();
    let min_eig = eigs[0];
    let b_pos = s.b.iter().all(|&b| b > 0.0);
    let r = rk4();
    let m11 = r.stability_matrix()[0][0];
    let rk4_stable = r.is_algebraically_stable(1e-14);
    let pass = min_eig >= -1e-12 && b_pos && !rk4_stable && (m11 + 1.0 / 36.0).abs() <= 1e-15;
    verdict(
        3,
        "tableau-certificate",
        pass,
        &format!(
            "sdirk43 min eig {min_eig:.2e} >= -1e-12, b positive: {b_pos}; rk4 stable: {rk4_stable}, m11 = {m11:.6} (= -1/36)"
        ),
    );
}

// ---------------------------------------------------------------- 4

#[test]
fn a04_stage_oracle_equivalence() {
    let ctx = StepContext::new(Case::viscous_box(1e4), Grid::unit_square(16), 1.0, TOL);
    let tableau = sdirk43();
    let k = 0.5 * ctx.grid.h;
    let mut st = GepupStepper::new(ctx, tableau.clone(), 0.0).unwrap();
    for _ in 0..3 {
        st.step(k).unwrap();
    }
    let history = st.build_history(k).unwrap();
    let (w_n, r_n, t) = (st.w.clone(), st.r, st.t);
    let rec = st.step(k).unwrap();
    let o = oracle_step(&ctx, &tableau, &history, t, k, &w_n, r_n).unwrap();
    let scale = norm_linf_vector(&st.w).max(1e-30);
    let mut dw = st.w.clone();
    dw.axpy(-1.0, &o.w);
    let w_dev = norm_linf_vector(&dw) / scale;
    let r_dev = (rec.r - o.r).abs() / rec.r.abs().max(1.0);
    let pass = w_dev <= 1e-10 && r_dev <= 1e-10;
    verdict(
        4,
        "stage-oracle-equivalence",
        pass,
        &format!("relative deviations on 16^2: w {w_dev:.2e}, r {r_dev:.2e}, both <= 1e-10"),
    );
}

// ---------------------------------------------------------------- 5

#[test]
fn a05_viscous_box_re1e4_convergence() {
    let data = table_high_re();
    let (e1, o1) = orders(data, Norm::L1);
    let (e2, o2) = orders(data, Norm::L2);
    let pass = o1[0] >= 3.3 && o2[0] >= 3.3;
    verdict(
        5,
        "viscous-box-re1e4-convergence",
        pass,
        &format!(
            "Richardson errors L1 {:.3e}/{:.3e} order {:.2}, L2 {:.3e}/{:.3e} order {:.2}, required >= 3.3",
            e1[0], e1[1], o1[0], e2[0], e2[1], o2[0]
        ),
    );
}

// ---------------------------------------------------------------- 6

#[test]
fn a06_viscous_box_re100_convergence() {
    let data = table_low_re();
    let (e1, o1) = orders(data, Norm::L1);
    let (ei, oi) = orders(data, Norm::LInf);
    let pass = o1[0] >= 3.5 && oi[0] >= 2.0;
    verdict(
        6,
        "viscous-box-re100-convergence",
        pass,
        &format!(
            "Richardson errors L1 {:.3e}/{:.3e} order {:.2} (>= 3.5), Linf {:.3e}/{:.3e} order {:.2} (>= 2.0)",
            e1[0], e1[1], o1[0], ei[0], ei[1], oi[0]
        ),
    );
}

// ---------------------------------------------------------------- 7

#[test]
fn a07_energy_monotone_and_sav_drift() {
    let mut violations = 0usize;
    let mut max_drift: f64 = 0.0;
    for data in [table_high_re(), table_low_re()] {
        for diag in &data.diags {
            for pair in diag.windows(2) {
                if pair[1].energy > pair[0].energy * (1.0 + 1e-10) {
                    violations += 1;
                }
            }
            for rec in diag {
                max_drift = max_drift.max((rec.r - 1.0).abs());
            }
        }
    }
    let pass = violations == 0 && max_drift <= 1e-8;
    verdict(
        7,
        "energy-monotone-and-sav-drift",
        pass,
        &format!("energy violations {violations} (= 0 required); max |r - 1| {max_drift:.2e} (<= 1e-8 required)"),
    );
}

// ---------------------------------------------------------------- 8

#[test]
fn a08_single_vortex_divergence_decay() {
    let mut drops = Vec::new();
    let mut late = Vec::new();
    for n in [128usize, 256] {
        let ctx = StepContext::new(Case::single_vortex(), Grid::unit_square(n), 1.0, TOL);
        let result = run(ctx, sdirk43(), 0.5, 0.0, 2.0, |_| {}).unwrap();
        let d = &result.diagnostics;
        let d0 = d[0].div_w_l2;
        let dmin = d.iter().map(|r| r.div_w_l2).fold(f64::INFINITY, f64::min);
        drops.push(d0 / dmin);
        late.push(
            d.iter()
                .filter(|r| r.t >= 1.5)
                .map(|r| r.div_w_l2)
                .fold(0.0f64, f64::max),
        );
    }
    let ratio = late[1] / late[0];
    let pass = drops[0] >= 10.0 && drops[1] >= 10.0 && ratio <= 0.6;
    verdict(
        8,
        "single-vortex-divergence-decay",
        pass,
        &format!(
            "|div W|_2 drop 128^2 {:.1}x, 256^2 {:.1}x (>= 10x required); late-window ratio 256/128 {ratio:.2} (<= 0.6 required)",
            drops[0], drops[1]
        ),
    );
}

// ---------------------------------------------------------------- 9

#[test]
fn a09_lambda_insensitivity() {
    let base = table_high_re();
    let e_lambda1 = richardson_error(&base.finals[0], &base.finals[1], Norm::L2);
    let mut errs = vec![e_lambda1];
    for lambda in [10.0, 100.0] {
        let data = sweep(|| Case::viscous_box(1e4), lambda, 0.5, 0.5, &[64, 128]);
        errs.push(richardson_error(&data.finals[0], &data.finals[1], Norm::L2));
    }
    let rounded: Vec<String> = errs.iter().map(|e| format!("{e:.1e}")).collect();
    let pass = rounded.iter().all(|s| s == &rounded[0]);
    verdict(
        9,
        "lambda-insensitivity",
        pass,
        &format!(
            "L2 Richardson errors for lambda 1/10/100: {} / {} / {}, equal to 2 significant digits",
            rounded[0], rounded[1], rounded[2]
        ),
    );
}

// ---------------------------------------------------------------- 10

#[test]
fn a10_temporal_order() {
    let mut finals = Vec::new();
    for cr in [0.5, 0.25, 0.125] {
        let ctx = StepContext::new(Case::viscous_box(1e4), Grid::unit_square(64), 1.0, TOL);
        let result = run(ctx, sdirk43(), cr, 0.0, 0.5, |_| {}).unwrap();
        finals.push(result.stepper.u.clone());
    }
    // Self-convergence on a fixed grid isolates the temporal error.
    let mut d1 = finals[0].clone();
    d1.axpy(-1.0, &finals[1]);
    let mut d2 = finals[1].clone();
    d2.axpy(-1.0, &finals[2]);
    let e1 = norm_l2_vector(&d1);
    let e2 = norm_l2_vector(&d2);
    let order = observed_order(e1, e2);
    let pass = order >= 3.3;
    verdict(
        10,
        "temporal-order",
        pass,
        &format!("self-convergence errors {e1:.3e} -> {e2:.3e}, observed order {order:.2} (>= 3.3 required)"),
    );
}
