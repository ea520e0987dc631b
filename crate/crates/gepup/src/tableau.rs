//! Runge-Kutta tableaus and the algebraic-stability certificate.
//!
//! A tableau (A, b, c) is algebraically stable when every weight b_j is
//! nonnegative and the matrix M with entries
//!     m_ij = b_i a_ij + b_j a_ji - b_i b_j
//! is positive semidefinite. For a DIRK method applied to the GePUP system
//! this yields unconditional decay of the discrete energy.

#[derive(Debug, Clone)]
pub struct ButcherTableau {
    pub name: &'static str,
    pub a: Vec<Vec<f64>>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
}

impl ButcherTableau {
    pub fn stages(&self) -> usize {
        self.b.len()
    }

    /// Lower-triangular A with nonzero diagonal.
    pub fn is_diagonally_implicit(&self) -> bool {
        self.a
            .iter()
            .enumerate()
            .all(|(i, row)| row[i] != 0.0 && row.iter().skip(i + 1).all(|&v| v == 0.0))
    }

    /// Strictly lower-triangular A.
    pub fn is_explicit(&self) -> bool {
        self.a
            .iter()
            .enumerate()
            .all(|(i, row)| row.iter().skip(i).all(|&v| v == 0.0))
    }

    /// Row-sum consistency: c_i = sum_j a_ij.
    pub fn row_sum_defect(&self) -> f64 {
        self.a
            .iter()
            .zip(&self.c)
            .map(|(row, &ci)| (row.iter().sum::<f64>() - ci).abs())
            .fold(0.0, f64::max)
    }

    /// The stability matrix m_ij = b_i a_ij + b_j a_ji - b_i b_j.
    pub fn stability_matrix(&self) -> Vec<Vec<f64>> {
        let s = self.stages();
        let mut m = vec![vec![0.0; s]; s];
        for i in 0..s {
            for j in 0..s {
                m[i][j] = self.b[i] * self.a[i][j] + self.b[j] * self.a[j][i]
                    - self.b[i] * self.b[j];
            }
        }
        m
    }

    /// Eigenvalues of the (symmetric) stability matrix, ascending.
    pub fn stability_eigenvalues(&self) -> Vec<f64> {
        jacobi_eigenvalues(self.stability_matrix())
    }

    /// Certificate: all b_j >= 0 and all eigenvalues of M >= -tol.
    pub fn is_algebraically_stable(&self, tol: f64) -> bool {
        self.b.iter().all(|&bj| bj >= -tol)
            && self.stability_eigenvalues().iter().all(|&ev| ev >= -tol)
    }
}

/// The three-stage, fourth-order, algebraically stable SDIRK method with
/// gamma = cos(pi/18)/sqrt(3) + 1/2.
pub fn sdirk43() -> ButcherTableau {
    let gamma = (std::f64::consts::PI / 18.0).cos() / 3.0f64.sqrt() + 0.5;
    let mu = 1.0 / (6.0 * (2.0 * gamma - 1.0).powi(2));
    ButcherTableau {
        name: "sdirk43",
        a: vec![
            vec![gamma, 0.0, 0.0],
            vec![0.5 - gamma, gamma, 0.0],
            vec![2.0 * gamma, 1.0 - 4.0 * gamma, gamma],
        ],
        b: vec![mu, 1.0 - 2.0 * mu, mu],
        c: vec![gamma, 0.5, 1.0 - gamma],
    }
}

/// Classical explicit RK4. Not algebraically stable; kept as the negative
/// control for the certificate and as the startup predictor integrator.
pub fn rk4() -> ButcherTableau {
    ButcherTableau {
        name: "rk4",
        a: vec![
            vec![0.0, 0.0, 0.0, 0.0],
            vec![0.5, 0.0, 0.0, 0.0],
            vec![0.0, 0.5, 0.0, 0.0],
            vec![0.0, 0.0, 1.0, 0.0],
        ],
        b: vec![1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0],
        c: vec![0.0, 0.5, 0.5, 1.0],
    }
}

/// Eigenvalues of a small symmetric matrix by the cyclic Jacobi method.
fn jacobi_eigenvalues(mut m: Vec<Vec<f64>>) -> Vec<f64> {
    let n = m.len();
    for sweep in 0..100 {
        let mut off = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                off += m[i][j] * m[i][j];
            }
        }
        if off.sqrt() < 1e-15 || sweep == 99 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if m[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (mkp, mkq) = (m[k][p], m[k][q]);
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let (mpk, mqk) = (m[p][k], m[q][k]);
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
            }
        }
    }
    let mut evs: Vec<f64> = (0..n).map(|i| m[i][i]).collect();
    evs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    evs
}
