//! Error measurement between grid resolutions. Cell averages are conserved
//! under 2x2 aggregation, so a solution on h/2 restricts exactly to the h
//! grid and the difference is a meaningful fourth-order Richardson error.

use crate::grid::{CellField, Grid, VectorField};
use crate::ops::{norm_l1, norm_l1_vector, norm_l2, norm_l2_vector, norm_linf, norm_linf_vector};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Norm {
    L1,
    L2,
    LInf,
}

impl Norm {
    pub fn parse(s: &str) -> Option<Norm> {
        match s {
            "l1" | "L1" => Some(Norm::L1),
            "l2" | "L2" => Some(Norm::L2),
            "linf" | "Linf" | "LInf" | "max" => Some(Norm::LInf),
            _ => None,
        }
    }

    pub fn of(self, f: &CellField) -> f64 {
        match self {
            Norm::L1 => norm_l1(f),
            Norm::L2 => norm_l2(f),
            Norm::LInf => norm_linf(f),
        }
    }

    pub fn of_vector(self, v: &VectorField) -> f64 {
        match self {
            Norm::L1 => norm_l1_vector(v),
            Norm::L2 => norm_l2_vector(v),
            Norm::LInf => norm_linf_vector(v),
        }
    }
}

/// Exact 2x2 block average onto the grid with half the resolution.
pub fn coarsen(fine: &CellField) -> CellField {
    let fg = &fine.grid;
    assert!(
        fg.nx % 2 == 0 && fg.ny % 2 == 0,
        "coarsening needs even cell counts"
    );
    let cg = Grid::new(fg.nx / 2, fg.ny / 2, fg.origin, fg.extent).unwrap();
    let mut out = CellField::zeros(&cg);
    for j in 0..cg.ny as isize {
        for i in 0..cg.nx as isize {
            let s = fine.get(2 * i, 2 * j)
                + fine.get(2 * i + 1, 2 * j)
                + fine.get(2 * i, 2 * j + 1)
                + fine.get(2 * i + 1, 2 * j + 1);
            out.set(i, j, 0.25 * s);
        }
    }
    out
}

pub fn coarsen_vector(fine: &VectorField) -> VectorField {
    VectorField {
        x: coarsen(&fine.x),
        y: coarsen(&fine.y),
    }
}

/// Richardson error: ||coarse - restrict(fine)|| in the requested norm.
/// `coarse` lives on h, `fine` on h/2.
pub fn richardson_error(coarse: &VectorField, fine: &VectorField, norm: Norm) -> f64 {
    let restricted = coarsen_vector(fine);
    assert_eq!(
        coarse.grid().nx,
        restricted.grid().nx,
        "fine grid must be exactly twice the coarse grid"
    );
    let mut d = coarse.clone();
    d.axpy(-1.0, &restricted);
    norm.of_vector(&d)
}

/// Observed convergence order from errors on h and h/2.
pub fn observed_order(err_coarse: f64, err_fine: f64) -> f64 {
    (err_coarse / err_fine).log2()
}
