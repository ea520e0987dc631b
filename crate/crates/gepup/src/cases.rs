//! Benchmark flow definitions: the single-vortex and viscous-box initial
//! fields, and a forced manufactured variant with a known exact solution.

use crate::grid::{Grid, Wall};
use crate::ops::{init_vector_averages, wall_face_averages};
use crate::grid::VectorField;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseKind {
    SingleVortex,
    ViscousBox,
    /// Viscous-box profile with exponential decay enforced by a body force;
    /// exact solution available at all times.
    Manufactured,
}

#[derive(Debug, Clone, Copy)]
pub struct Case {
    pub kind: CaseKind,
    pub nu: f64,
    /// Maximum speed of the initial field, used to convert Cr to a time step.
    pub max_speed: f64,
    /// Repeated-projection passes applied to the initial data.
    pub pre_projection_passes: usize,
}

const VORTEX_R: f64 = 0.2;
const VORTEX_GAMMA: f64 = 1.0;

/// Azimuthal speed of the single vortex.
fn vortex_utheta(r: f64) -> f64 {
    if r < VORTEX_R {
        VORTEX_GAMMA * (0.5 * r - 4.0 * r * r * r)
    } else {
        VORTEX_GAMMA * (VORTEX_R / r) * (0.5 * VORTEX_R - 4.0 * VORTEX_R.powi(3))
    }
}

fn vortex_velocity(x: f64, y: f64) -> (f64, f64) {
    let (dx, dy) = (x - 0.5, y - 0.5);
    let r = dx.hypot(dy);
    // u_theta / r is smooth through r = 0
    let s = if r < VORTEX_R {
        VORTEX_GAMMA * (0.5 - 4.0 * r * r)
    } else {
        vortex_utheta(r) / r
    };
    (-s * dy, s * dx)
}

fn box_psi(x: f64, y: f64) -> (f64, f64) {
    (
        (PI * x).sin().powi(2) * (2.0 * PI * y).sin(),
        -(2.0 * PI * x).sin() * (PI * y).sin().powi(2),
    )
}

fn box_psi_laplacian(x: f64, y: f64) -> (f64, f64) {
    let lx = 2.0 * PI * PI * (2.0 * PI * x).cos() * (2.0 * PI * y).sin()
        - 4.0 * PI * PI * (PI * x).sin().powi(2) * (2.0 * PI * y).sin();
    let ly = 4.0 * PI * PI * (2.0 * PI * x).sin() * (PI * y).sin().powi(2)
        - 2.0 * PI * PI * (2.0 * PI * x).sin() * (2.0 * PI * y).cos();
    (lx, ly)
}

fn box_psi_grad(x: f64, y: f64) -> [[f64; 2]; 2] {
    // [component][derivative direction]
    let dpx_dx = PI * (2.0 * PI * x).sin() * (2.0 * PI * y).sin();
    let dpx_dy = 2.0 * PI * (PI * x).sin().powi(2) * (2.0 * PI * y).cos();
    let dpy_dx = -2.0 * PI * (2.0 * PI * x).cos() * (PI * y).sin().powi(2);
    let dpy_dy = -PI * (2.0 * PI * x).sin() * (2.0 * PI * y).sin();
    [[dpx_dx, dpx_dy], [dpy_dx, dpy_dy]]
}

impl Case {
    pub fn single_vortex() -> Case {
        Case {
            kind: CaseKind::SingleVortex,
            nu: 3.4e-6,
            max_speed: vortex_utheta(VORTEX_R),
            pre_projection_passes: 10,
        }
    }

    /// nu = U_ref L_ref / Re with U_ref = 1 (max initial speed) and L_ref = 1.
    pub fn viscous_box(re: f64) -> Case {
        Case {
            kind: CaseKind::ViscousBox,
            nu: 1.0 / re,
            max_speed: 1.0,
            pre_projection_passes: 0,
        }
    }

    pub fn manufactured(re: f64) -> Case {
        Case {
            kind: CaseKind::Manufactured,
            nu: 1.0 / re,
            max_speed: 1.0,
            pre_projection_passes: 0,
        }
    }

    /// Pointwise initial (t = 0) velocity.
    pub fn velocity_at(&self, t: f64, x: f64, y: f64) -> (f64, f64) {
        match self.kind {
            CaseKind::SingleVortex => vortex_velocity(x, y),
            CaseKind::ViscousBox => box_psi(x, y),
            CaseKind::Manufactured => {
                let (px, py) = box_psi(x, y);
                ((-t).exp() * px, (-t).exp() * py)
            }
        }
    }

    pub fn initial_velocity(&self, grid: &Grid) -> VectorField {
        init_vector_averages(
            grid,
            |x, y| self.velocity_at(0.0, x, y).0,
            |x, y| self.velocity_at(0.0, x, y).1,
        )
    }

    pub fn has_exact_solution(&self) -> bool {
        self.kind == CaseKind::Manufactured
    }

    pub fn exact_velocity(&self, grid: &Grid, t: f64) -> Option<VectorField> {
        if !self.has_exact_solution() {
            return None;
        }
        Some(init_vector_averages(
            grid,
            |x, y| self.velocity_at(t, x, y).0,
            |x, y| self.velocity_at(t, x, y).1,
        ))
    }

    pub fn has_forcing(&self) -> bool {
        self.kind == CaseKind::Manufactured
    }

    /// Pointwise body force. With p* = 0 the manufactured force is
    /// g = du*/dt + (u*.grad)u* - nu*Lap(u*).
    pub fn forcing_at(&self, t: f64, x: f64, y: f64) -> (f64, f64) {
        match self.kind {
            CaseKind::SingleVortex | CaseKind::ViscousBox => (0.0, 0.0),
            CaseKind::Manufactured => {
                let e = (-t).exp();
                let (px, py) = box_psi(x, y);
                let gp = box_psi_grad(x, y);
                let (lx, ly) = box_psi_laplacian(x, y);
                let conv_x = px * gp[0][0] + py * gp[0][1];
                let conv_y = px * gp[1][0] + py * gp[1][1];
                (
                    -e * px + e * e * conv_x - self.nu * e * lx,
                    -e * py + e * e * conv_y - self.nu * e * ly,
                )
            }
        }
    }

    /// Cell averages of the body force at time t.
    pub fn forcing(&self, grid: &Grid, t: f64) -> VectorField {
        if !self.has_forcing() {
            return VectorField::zeros(grid);
        }
        init_vector_averages(
            grid,
            |x, y| self.forcing_at(t, x, y).0,
            |x, y| self.forcing_at(t, x, y).1,
        )
    }

    /// Face averages of the outward-normal component of g on one wall.
    pub fn forcing_wall_normal(&self, grid: &Grid, t: f64, wall: Wall) -> Vec<f64> {
        if !self.has_forcing() {
            let n = match wall {
                Wall::Left | Wall::Right => grid.ny,
                Wall::Bottom | Wall::Top => grid.nx,
            };
            return vec![0.0; n];
        }
        let sign = wall.normal_sign();
        match wall {
            Wall::Left | Wall::Right => {
                wall_face_averages(grid, wall, |x, y| sign * self.forcing_at(t, x, y).0)
            }
            Wall::Bottom | Wall::Top => {
                wall_face_averages(grid, wall, |x, y| sign * self.forcing_at(t, x, y).1)
            }
        }
    }
}
