//! Elliptic solvers for the fourth-order operators: BiCGStab on
//! sigma*x - alpha*L(x), preconditioned by a geometric multigrid V-cycle
//! built on the second-order 5-point Laplacian with matching homogeneous
//! boundary conditions.
//!
//! Inhomogeneous boundary data is handled by an affine split: the operator
//! applied to the zero field with data ghosts is moved to the right-hand
//! side, and the Krylov iteration runs with homogeneous ghosts throughout.
//! The pure-Neumann Poisson problem is made compatible by subtracting the
//! mean of the (already data-corrected) right-hand side; the subtracted
//! value is reported and the returned solution has zero mean.

use crate::error::{GepupError, Result};
use crate::grid::{fill_ghosts, BcKind, CellField, Grid, ScalarBc};
use crate::ops::laplacian;

#[derive(Debug, Clone, Copy)]
pub struct SolveStats {
    pub iterations: usize,
    /// L2 norm (h-weighted) of the final residual.
    pub residual: f64,
    /// L2 norm of the effective right-hand side the iteration ran against.
    pub rhs_norm: f64,
    /// Compatibility shift subtracted from the rhs (pure-Neumann only).
    pub shift: f64,
}

const MAX_ITER: usize = 400;

/// sigma*x - alpha*L4(x) with homogeneous ghost fill under `bc`.
fn apply(sigma: f64, alpha: f64, bc: &ScalarBc, x: &CellField, buf: &mut CellField) -> CellField {
    buf.assign(x);
    fill_ghosts(buf, bc);
    let mut out = laplacian(buf);
    out.scale(-alpha);
    out.axpy(sigma, x);
    out
}

fn dot(a: &CellField, b: &CellField) -> f64 {
    crate::ops::inner_product(a, b)
}

fn is_pure_neumann(bc: &ScalarBc) -> bool {
    bc.walls.iter().all(|k| {
        matches!(k, BcKind::NeumannZero | BcKind::NeumannData(_))
    })
}

fn homogeneous(bc: &ScalarBc) -> ScalarBc {
    ScalarBc {
        walls: bc.walls.clone().map(|k| match k {
            BcKind::NeumannData(_) => BcKind::NeumannZero,
            other => other,
        }),
    }
}

/// One level of the cell-centered multigrid hierarchy for the 5-point
/// operator sigma*x - alpha*L2(x).
struct MgLevel {
    n: usize,
    h: f64,
    x: Vec<f64>,
    b: Vec<f64>,
}

/// Per-wall closure coefficient for the second-order stencil: the ghost
/// neighbor equals coef * center (Neumann reflection +1, Dirichlet -1).
fn wall_coef(kind: &BcKind) -> f64 {
    match kind {
        BcKind::DirichletZero => -1.0,
        _ => 1.0,
    }
}

pub struct MgPreconditioner {
    sigma: f64,
    alpha: f64,
    coefs: [f64; 4],
    pure_neumann: bool,
    levels: Vec<MgLevel>,
}

impl MgPreconditioner {
    pub fn new(grid: &Grid, sigma: f64, alpha: f64, bc: &ScalarBc) -> MgPreconditioner {
        assert_eq!(grid.nx, grid.ny, "multigrid assumes square grids");
        let coefs = [
            wall_coef(&bc.walls[0]),
            wall_coef(&bc.walls[1]),
            wall_coef(&bc.walls[2]),
            wall_coef(&bc.walls[3]),
        ];
        let mut levels = Vec::new();
        let mut n = grid.nx;
        let mut h = grid.h;
        loop {
            levels.push(MgLevel {
                n,
                h,
                x: vec![0.0; n * n],
                b: vec![0.0; n * n],
            });
            if n % 2 != 0 || n / 2 < 4 {
                break;
            }
            n /= 2;
            h *= 2.0;
        }
        MgPreconditioner {
            sigma,
            alpha,
            coefs,
            pure_neumann: is_pure_neumann(bc),
            levels,
        }
    }

    /// Residual b - A2 x on one level.
    fn residual(&self, lvl: &MgLevel, out: &mut Vec<f64>) {
        let n = lvl.n;
        out.resize(n * n, 0.0);
        let inv_h2 = 1.0 / (lvl.h * lvl.h);
        for j in 0..n {
            for i in 0..n {
                let c = lvl.x[j * n + i];
                let w = if i == 0 { self.coefs[0] * c } else { lvl.x[j * n + i - 1] };
                let e = if i == n - 1 { self.coefs[1] * c } else { lvl.x[j * n + i + 1] };
                let s = if j == 0 { self.coefs[2] * c } else { lvl.x[(j - 1) * n + i] };
                let nb = if j == n - 1 { self.coefs[3] * c } else { lvl.x[(j + 1) * n + i] };
                let lap = (w + e + s + nb - 4.0 * c) * inv_h2;
                out[j * n + i] = lvl.b[j * n + i] - (self.sigma * c - self.alpha * lap);
            }
        }
    }

    fn smooth(&mut self, level: usize, sweeps: usize) {
        let lvl = &mut self.levels[level];
        let n = lvl.n;
        let inv_h2 = 1.0 / (lvl.h * lvl.h);
        for _ in 0..sweeps {
            for color in 0..2 {
                for j in 0..n {
                    for i in 0..n {
                        if (i + j) % 2 != color {
                            continue;
                        }
                        let c = lvl.x[j * n + i];
                        let (mut off, mut diag_adj) = (0.0, 0.0);
                        if i == 0 { diag_adj += self.coefs[0]; } else { off += lvl.x[j * n + i - 1]; }
                        if i == n - 1 { diag_adj += self.coefs[1]; } else { off += lvl.x[j * n + i + 1]; }
                        if j == 0 { diag_adj += self.coefs[2]; } else { off += lvl.x[(j - 1) * n + i]; }
                        if j == n - 1 { diag_adj += self.coefs[3]; } else { off += lvl.x[(j + 1) * n + i]; }
                        // A x = sigma x - alpha ((off + diag_adj*c) - 4c)/h^2
                        let diag = self.sigma - self.alpha * (diag_adj - 4.0) * inv_h2;
                        let rhs = lvl.b[j * n + i] + self.alpha * off * inv_h2;
                        let _ = c;
                        lvl.x[j * n + i] = rhs / diag;
                    }
                }
            }
        }
    }

    fn vcycle(&mut self, level: usize) {
        if level + 1 == self.levels.len() {
            self.smooth(level, 40);
            if self.pure_neumann && self.sigma == 0.0 {
                let lvl = &mut self.levels[level];
                let mean = lvl.x.iter().sum::<f64>() / lvl.x.len() as f64;
                for v in &mut lvl.x {
                    *v -= mean;
                }
            }
            return;
        }
        self.smooth(level, 2);
        let mut res = Vec::new();
        self.residual(&self.levels[level], &mut res);
        let nf = self.levels[level].n;
        let nc = self.levels[level + 1].n;
        {
            let coarse = &mut self.levels[level + 1];
            for j in 0..nc {
                for i in 0..nc {
                    coarse.b[j * nc + i] = 0.25
                        * (res[(2 * j) * nf + 2 * i]
                            + res[(2 * j) * nf + 2 * i + 1]
                            + res[(2 * j + 1) * nf + 2 * i]
                            + res[(2 * j + 1) * nf + 2 * i + 1]);
                }
            }
            coarse.x.iter_mut().for_each(|v| *v = 0.0);
        }
        self.vcycle(level + 1);
        for j in 0..nc {
            for i in 0..nc {
                let corr = self.levels[level + 1].x[j * nc + i];
                let fine = &mut self.levels[level].x;
                fine[(2 * j) * nf + 2 * i] += corr;
                fine[(2 * j) * nf + 2 * i + 1] += corr;
                fine[(2 * j + 1) * nf + 2 * i] += corr;
                fine[(2 * j + 1) * nf + 2 * i + 1] += corr;
            }
        }
        self.smooth(level, 2);
    }

    /// z ~= A^{-1} r via one V-cycle.
    fn solve_approx(&mut self, r: &CellField, z: &mut CellField) {
        let n = self.levels[0].n;
        {
            let top = &mut self.levels[0];
            for j in 0..n {
                for i in 0..n {
                    top.b[j * n + i] = r.get(i as isize, j as isize);
                    top.x[j * n + i] = 0.0;
                }
            }
        }
        self.vcycle(0);
        let top = &self.levels[0];
        for j in 0..n {
            for i in 0..n {
                z.set(i as isize, j as isize, top.x[j * n + i]);
            }
        }
        if self.pure_neumann && self.sigma == 0.0 {
            let m = z.interior_mean();
            z.shift(-m);
        }
    }
}

/// Preconditioned BiCGStab for sigma*x - alpha*L4(x) = b with homogeneous
/// boundary conditions (data already folded into b). `tol` is relative to
/// the rhs norm.
fn bicgstab(
    grid: &Grid,
    sigma: f64,
    alpha: f64,
    bc: &ScalarBc,
    b: &CellField,
    tol: f64,
) -> Result<(CellField, usize, f64, f64)> {
    let pure_neumann = is_pure_neumann(bc) && sigma == 0.0;
    let mut pre = MgPreconditioner::new(grid, sigma, alpha, bc);
    let project = |f: &mut CellField| {
        if pure_neumann {
            let m = f.interior_mean();
            f.shift(-m);
        }
    };

    let b_norm = crate::ops::norm_l2(b);
    let stop = tol * b_norm;
    let mut x = CellField::zeros(grid);
    if b_norm == 0.0 {
        return Ok((x, 0, 0.0, 0.0));
    }

    let mut buf = CellField::zeros(grid);
    let mut r = b.clone();
    let r_hat = r.clone();
    let mut rho = 1.0f64;
    let mut a_coef = 1.0f64;
    let mut omega = 1.0f64;
    let mut v = CellField::zeros(grid);
    let mut p = CellField::zeros(grid);
    let mut phat = CellField::zeros(grid);
    let mut shat = CellField::zeros(grid);

    for it in 1..=MAX_ITER {
        let rho_new = dot(&r_hat, &r);
        if rho_new.abs() < 1e-300 {
            break;
        }
        let beta = (rho_new / rho) * (a_coef / omega);
        // p = r + beta (p - omega v)
        p.axpy(-omega, &v);
        p.scale(beta);
        p.axpy(1.0, &r);
        rho = rho_new;

        pre.solve_approx(&p, &mut phat);
        project(&mut phat);
        v = apply(sigma, alpha, bc, &phat, &mut buf);
        a_coef = rho / dot(&r_hat, &v);

        let mut s = r.clone();
        s.axpy(-a_coef, &v);
        let s_norm = crate::ops::norm_l2(&s);
        if s_norm <= stop {
            x.axpy(a_coef, &phat);
            project(&mut x);
            return Ok((x, it, s_norm, b_norm));
        }

        pre.solve_approx(&s, &mut shat);
        project(&mut shat);
        let t = apply(sigma, alpha, bc, &shat, &mut buf);
        let tt = dot(&t, &t);
        omega = dot(&t, &s) / tt;
        x.axpy(a_coef, &phat);
        x.axpy(omega, &shat);
        project(&mut x);
        r = s;
        r.axpy(-omega, &t);
        let r_norm = crate::ops::norm_l2(&r);
        if r_norm <= stop {
            return Ok((x, it, r_norm, b_norm));
        }
    }
    let res = crate::ops::norm_l2(&r);
    Err(GepupError::SolverDiverged {
        residual: res / b_norm,
        iterations: MAX_ITER,
    })
}

/// Move inhomogeneous boundary data to the rhs: returns b - A(0-with-data-ghosts).
fn fold_boundary_data(_sigma: f64, alpha: f64, bc: &ScalarBc, b: &CellField) -> CellField {
    let mut zero = CellField::zeros(&b.grid);
    fill_ghosts(&mut zero, bc);
    let mut lz = laplacian(&zero);
    lz.scale(-alpha);
    // sigma * 0 contributes nothing in the interior
    let mut out = b.clone();
    out.axpy(-1.0, &lz);
    out
}

/// Solve L(phi) = rhs with Neumann conditions given by `bc` (NeumannZero or
/// NeumannData per wall). The rhs is shifted to the compatible subspace and
/// the returned solution has zero mean; ghosts are filled under `bc`.
pub fn solve_poisson_neumann(
    rhs: &CellField,
    bc: &ScalarBc,
    tol: f64,
) -> Result<(CellField, SolveStats)> {
    let grid = rhs.grid;
    let mut b = fold_boundary_data(0.0, -1.0, bc, rhs);
    let shift = b.interior_mean();
    b.shift(-shift);
    let hom = homogeneous(bc);
    let (mut x, iterations, residual, rhs_norm) = bicgstab(&grid, 0.0, -1.0, &hom, &b, tol)?;
    fill_ghosts(&mut x, bc);
    Ok((
        x,
        SolveStats {
            iterations,
            residual,
            rhs_norm,
            shift,
        },
    ))
}

/// Solve (I - alpha L) x = rhs under `bc`; ghosts of the result are filled.
pub fn solve_helmholtz(
    alpha: f64,
    rhs: &CellField,
    bc: &ScalarBc,
    tol: f64,
) -> Result<(CellField, SolveStats)> {
    let grid = rhs.grid;
    let b = fold_boundary_data(1.0, alpha, bc, rhs);
    let hom = homogeneous(bc);
    let (mut x, iterations, residual, rhs_norm) = bicgstab(&grid, 1.0, alpha, &hom, &b, tol)?;
    fill_ghosts(&mut x, bc);
    Ok((
        x,
        SolveStats {
            iterations,
            residual,
            rhs_norm,
            shift: 0.0,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ops::{init_cell_averages, norm_linf};
    use std::f64::consts::PI;

    #[test]
    fn poisson_neumann_manufactured() {
        // u = cos(pi x) cos(pi y) has homogeneous Neumann data on the unit square.
        let mut errs = Vec::new();
        for n in [16usize, 32, 64] {
            let grid = Grid::unit_square(n);
            let exact = init_cell_averages(&grid, |x, y| (PI * x).cos() * (PI * y).cos());
            let rhs = init_cell_averages(&grid, |x, y| {
                -2.0 * PI * PI * (PI * x).cos() * (PI * y).cos()
            });
            let (phi, stats) = solve_poisson_neumann(&rhs, &ScalarBc::neumann_zero(), 1e-12).unwrap();
            assert!(stats.residual <= 1e-12 * stats.rhs_norm.max(1e-30) * 1.0001);
            let mut diff = phi.clone();
            diff.axpy(-1.0, &exact);
            let m = diff.interior_mean();
            diff.shift(-m);
            errs.push(norm_linf(&diff));
        }
        for w in errs.windows(2) {
            let order = (w[0] / w[1]).log2();
            assert!(order > 3.5, "poisson order {order}, errs {errs:?}");
        }
    }

    #[test]
    fn poisson_neumann_inhomogeneous_data() {
        // u = x^2 y^2 pointwise; use exact cell averages and exact face data.
        let grid = Grid::unit_square(32);
        let n = 32;
        let h = grid.h;
        let exact = init_cell_averages(&grid, |x, y| x * x * y * y);
        let rhs = init_cell_averages(&grid, |x, y| 2.0 * y * y + 2.0 * x * x);
        // face-averaged outward normal derivatives
        let face_avg_sq = |t: usize| {
            let a = t as f64 * h;
            (3.0 * a * a + 3.0 * a * h + h * h) / 3.0 // average of tau^2 over the face
        };
        let left: Vec<f64> = (0..n).map(|_| 0.0).collect();
        let right: Vec<f64> = (0..n).map(|t| 2.0 * face_avg_sq(t)).collect();
        let bottom: Vec<f64> = (0..n).map(|_| 0.0).collect();
        let top: Vec<f64> = (0..n).map(|t| 2.0 * face_avg_sq(t)).collect();
        let bc = ScalarBc::neumann_data([left, right, bottom, top]);
        let (phi, stats) = solve_poisson_neumann(&rhs, &bc, 1e-12).unwrap();
        // compatibility shift must vanish for consistent data
        assert!(stats.shift.abs() < 1e-10, "shift {}", stats.shift);
        let mut diff = phi.clone();
        diff.axpy(-1.0, &exact);
        let m = diff.interior_mean();
        diff.shift(-m);
        assert!(norm_linf(&diff) < 1e-9, "err {}", norm_linf(&diff));
    }

    #[test]
    fn poisson_reports_compatibility_shift() {
        let grid = Grid::unit_square(16);
        let mut rhs = CellField::zeros(&grid);
        rhs.fill_with(|_, _| 1.0); // incompatible with zero-flux walls
        let (_, stats) = solve_poisson_neumann(&rhs, &ScalarBc::neumann_zero(), 1e-12).unwrap();
        assert!((stats.shift - 1.0).abs() < 1e-13);
    }

    #[test]
    fn helmholtz_dirichlet_manufactured() {
        // (I - alpha L) u = (1 + 2 alpha pi^2) u for u = sin(pi x) sin(pi y).
        let alpha = 0.37;
        let mut errs = Vec::new();
        for n in [16usize, 32, 64] {
            let grid = Grid::unit_square(n);
            let exact = init_cell_averages(&grid, |x, y| (PI * x).sin() * (PI * y).sin());
            let mut rhs = exact.clone();
            rhs.scale(1.0 + 2.0 * alpha * PI * PI);
            let (u, _) = solve_helmholtz(alpha, &rhs, &ScalarBc::dirichlet_zero(), 1e-13).unwrap();
            let mut diff = u.clone();
            diff.axpy(-1.0, &exact);
            errs.push(norm_linf(&diff));
        }
        for w in errs.windows(2) {
            let order = (w[0] / w[1]).log2();
            assert!(order > 3.5, "helmholtz order {order}, errs {errs:?}");
        }
    }

    #[test]
    fn helmholtz_small_alpha_identity_limit() {
        let grid = Grid::unit_square(32);
        let rhs = init_cell_averages(&grid, |x, y| (2.0 * x).sin() * (3.0 * y).cos());
        let (u, _) = solve_helmholtz(1e-14, &rhs, &ScalarBc::neumann_zero(), 1e-13).unwrap();
        let mut diff = u.clone();
        diff.axpy(-1.0, &rhs);
        assert!(norm_linf(&diff) < 1e-9);
    }

    #[test]
    fn zero_rhs_gives_zero() {
        let grid = Grid::unit_square(16);
        let rhs = CellField::zeros(&grid);
        let (u, stats) = solve_poisson_neumann(&rhs, &ScalarBc::neumann_zero(), 1e-12).unwrap();
        assert_eq!(stats.iterations, 0);
        assert_eq!(norm_linf(&u), 0.0);
    }
}
