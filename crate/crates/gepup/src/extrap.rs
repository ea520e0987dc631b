//! Cubic-in-time stage-value extrapolation. A Lagrange polynomial is fit
//! through four (time, U, W) samples and evaluated at the stage abscissae.
//! Node coordinates are expressed in units of the step size k: (0, 1/3,
//! 2/3, 1) while the startup predictor substeps fill the history, and
//! (-2, -1, 0, 1) in steady operation with a predicted endpoint at +1.

use crate::error::{GepupError, Result};
use crate::grid::VectorField;

#[derive(Debug, Clone)]
pub struct StageHistory {
    /// Node coordinates in units of k, strictly increasing.
    pub nodes: [f64; 4],
    /// Projected-velocity samples at the nodes.
    pub u: Vec<VectorField>,
    /// Non-solenoidal-velocity samples at the nodes.
    pub w: Vec<VectorField>,
}

/// Lagrange basis weights for evaluating at `target`.
pub fn lagrange_weights(nodes: &[f64; 4], target: f64) -> Result<[f64; 4]> {
    let mut w = [0.0; 4];
    for j in 0..4 {
        let mut p = 1.0;
        for l in 0..4 {
            if l == j {
                continue;
            }
            let d = nodes[j] - nodes[l];
            if d == 0.0 {
                return Err(GepupError::Config(format!(
                    "duplicate extrapolation nodes at {}",
                    nodes[j]
                )));
            }
            p *= (target - nodes[l]) / d;
        }
        w[j] = p;
    }
    Ok(w)
}

fn combine(samples: &[VectorField], w: &[f64; 4]) -> VectorField {
    let mut out = samples[0].clone();
    out.scale(w[0]);
    for j in 1..4 {
        out.axpy(w[j], &samples[j]);
    }
    out
}

impl StageHistory {
    pub fn new(nodes: [f64; 4], u: Vec<VectorField>, w: Vec<VectorField>) -> Result<StageHistory> {
        if u.len() != 4 || w.len() != 4 {
            return Err(GepupError::Config(
                "stage history needs exactly 4 samples".into(),
            ));
        }
        if !nodes.windows(2).all(|p| p[0] < p[1]) {
            return Err(GepupError::Config(
                "extrapolation nodes must be strictly increasing".into(),
            ));
        }
        Ok(StageHistory { nodes, u, w })
    }

    /// (u~, w~) at node coordinate `target` (stage abscissa c_i).
    pub fn extrapolate(&self, target: f64) -> Result<(VectorField, VectorField)> {
        let wts = lagrange_weights(&self.nodes, target)?;
        Ok((combine(&self.u, &wts), combine(&self.w, &wts)))
    }
}
