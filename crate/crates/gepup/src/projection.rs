//! Discrete Leray projection: split w = u + grad(phi) with div(u) ~ 0 and
//! n.u = 0 on the walls. phi solves the pure-Neumann Poisson problem
//! L(phi) = D(w), n.grad(phi) = n.w, and u = w - G(phi).
//!
//! Because D(G(.)) and L(.) are different fourth-order compositions, the
//! projected field is solenoidal to truncation order, not to machine zero.

use crate::error::Result;
use crate::grid::{fill_ghosts_vector, wall_normal_component, ScalarBc, VectorBc, Wall, VectorField};
use crate::ops::{div, grad};
use crate::solver::{solve_poisson_neumann, SolveStats};

/// Project `w` onto the discretely divergence-free space. Ghosts of `w` are
/// filled under `bc_w`; the result carries filled ghosts under the
/// homogeneous-Neumann conditions appropriate for a projected field.
pub fn project(w: &VectorField, bc_w: &VectorBc, tol: f64) -> Result<(VectorField, SolveStats)> {
    let mut ww = w.clone();
    fill_ghosts_vector(&mut ww, bc_w);

    let rhs = div(&ww);
    // Neumann data n.grad(phi) = n.w from one-sided face reconstruction.
    let data = [
        wall_normal_component(&ww, Wall::Left),
        wall_normal_component(&ww, Wall::Right),
        wall_normal_component(&ww, Wall::Bottom),
        wall_normal_component(&ww, Wall::Top),
    ];
    let bc_phi = ScalarBc::neumann_data(data);
    let (phi, stats) = solve_poisson_neumann(&rhs, &bc_phi, tol)?;
    let gphi = grad(&phi);

    let mut u = ww;
    u.axpy(-1.0, &gphi);
    fill_ghosts_vector(&mut u, &VectorBc::projected());
    Ok((u, stats))
}

/// Repeated projection. Used to scrub initial data whose discrete divergence
/// is above truncation level.
pub fn project_repeated(
    w: &VectorField,
    bc_w: &VectorBc,
    passes: usize,
    tol: f64,
) -> Result<VectorField> {
    let (mut u, _) = project(w, bc_w, tol)?;
    for _ in 1..passes {
        let (next, _) = project(&u, &VectorBc::projected(), tol)?;
        u = next;
    }
    Ok(u)
}
