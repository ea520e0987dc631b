//! Uniform rectangular grid, cell-averaged field storage with ghost layers,
//! and boundary-condition descriptors.
//!
//! Ghost cells are filled so that a quartic polynomial fitted per wall-normal
//! line through the boundary datum and the first interior cell averages
//! reproduces the ghost cell averages. This gives fourth-order boundary
//! closures that are exact on cell averages of polynomials up to degree 4
//! compatible with the imposed condition.

use crate::error::{GepupError, Result};
use std::sync::OnceLock;

/// Ghost-layer width required by the five-point-per-axis stencils.
pub const N_GHOST: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub nx: usize,
    pub ny: usize,
    /// Uniform cell width; cells are square.
    pub h: f64,
    pub origin: (f64, f64),
    pub extent: (f64, f64),
    pub n_ghost: usize,
}

impl Grid {
    pub fn new(nx: usize, ny: usize, origin: (f64, f64), extent: (f64, f64)) -> Result<Grid> {
        if nx == 0 || ny == 0 {
            return Err(GepupError::Config("cell counts must be positive".into()));
        }
        let hx = extent.0 / nx as f64;
        let hy = extent.1 / ny as f64;
        if (hx - hy).abs() > 1e-13 * hx.max(hy) {
            return Err(GepupError::Config(format!(
                "non-square cells: hx = {hx}, hy = {hy}"
            )));
        }
        Ok(Grid {
            nx,
            ny,
            h: hx,
            origin,
            extent,
            n_ghost: N_GHOST,
        })
    }

    /// Unit square [0,1]^2 with n cells per axis.
    pub fn unit_square(n: usize) -> Grid {
        Grid::new(n, n, (0.0, 0.0), (1.0, 1.0)).unwrap()
    }

    pub fn cell_center(&self, i: isize, j: isize) -> (f64, f64) {
        (
            self.origin.0 + (i as f64 + 0.5) * self.h,
            self.origin.1 + (j as f64 + 0.5) * self.h,
        )
    }

    /// Lower-left corner of cell (i, j).
    pub fn cell_corner(&self, i: isize, j: isize) -> (f64, f64) {
        (
            self.origin.0 + i as f64 * self.h,
            self.origin.1 + j as f64 * self.h,
        )
    }

    pub fn cell_area(&self) -> f64 {
        self.h * self.h
    }

    fn stride(&self) -> usize {
        self.nx + 2 * self.n_ghost
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Wall {
    Left,
    Right,
    Bottom,
    Top,
}

pub const WALLS: [Wall; 4] = [Wall::Left, Wall::Right, Wall::Bottom, Wall::Top];

impl Wall {
    pub fn index(self) -> usize {
        match self {
            Wall::Left => 0,
            Wall::Right => 1,
            Wall::Bottom => 2,
            Wall::Top => 3,
        }
    }

    pub fn axis(self) -> usize {
        match self {
            Wall::Left | Wall::Right => 0,
            Wall::Bottom | Wall::Top => 1,
        }
    }

    /// Outward normal sign along the wall axis.
    pub fn normal_sign(self) -> f64 {
        match self {
            Wall::Left | Wall::Bottom => -1.0,
            Wall::Right | Wall::Top => 1.0,
        }
    }
}

/// Boundary condition kind for one scalar quantity on one wall.
///
/// `NeumannData` carries face-averaged values of the outward normal
/// derivative, one per wall face. `Extrapolate` imposes no datum and fills
/// ghosts by one-sided extrapolation; it is used for derived fields (e.g. the
/// convection term) that have no physical boundary condition of their own.
#[derive(Debug, Clone, PartialEq)]
pub enum BcKind {
    DirichletZero,
    NeumannZero,
    NeumannData(Vec<f64>),
    Extrapolate,
}

/// Per-wall boundary conditions for a scalar field, ordered
/// (left, right, bottom, top).
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarBc {
    pub walls: [BcKind; 4],
}

impl ScalarBc {
    pub fn uniform(kind: BcKind) -> ScalarBc {
        ScalarBc {
            walls: [kind.clone(), kind.clone(), kind.clone(), kind],
        }
    }

    pub fn neumann_zero() -> ScalarBc {
        ScalarBc::uniform(BcKind::NeumannZero)
    }

    pub fn dirichlet_zero() -> ScalarBc {
        ScalarBc::uniform(BcKind::DirichletZero)
    }

    pub fn extrapolate() -> ScalarBc {
        ScalarBc::uniform(BcKind::Extrapolate)
    }

    /// Neumann condition with outward-normal-derivative data per wall,
    /// ordered (left, right, bottom, top).
    pub fn neumann_data(data: [Vec<f64>; 4]) -> ScalarBc {
        let [l, r, b, t] = data;
        ScalarBc {
            walls: [
                BcKind::NeumannData(l),
                BcKind::NeumannData(r),
                BcKind::NeumannData(b),
                BcKind::NeumannData(t),
            ],
        }
    }
}

/// Per-component boundary conditions for a velocity-like field.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorBc {
    pub x: ScalarBc,
    pub y: ScalarBc,
}

impl VectorBc {
    /// Electric boundary conditions on a rectangle: tangential components
    /// homogeneous Dirichlet, normal component homogeneous Neumann.
    pub fn electric() -> VectorBc {
        VectorBc {
            x: ScalarBc {
                walls: [
                    BcKind::NeumannZero,   // left: x is the normal component
                    BcKind::NeumannZero,   // right
                    BcKind::DirichletZero, // bottom: x is tangential
                    BcKind::DirichletZero, // top
                ],
            },
            y: ScalarBc {
                walls: [
                    BcKind::DirichletZero,
                    BcKind::DirichletZero,
                    BcKind::NeumannZero,
                    BcKind::NeumannZero,
                ],
            },
        }
    }

    /// Ghost fill for the projected velocity: only the no-penetration
    /// condition is a constraint, so both components get homogeneous Neumann.
    pub fn projected() -> VectorBc {
        VectorBc {
            x: ScalarBc::neumann_zero(),
            y: ScalarBc::neumann_zero(),
        }
    }

    pub fn extrapolate() -> VectorBc {
        VectorBc {
            x: ScalarBc::extrapolate(),
            y: ScalarBc::extrapolate(),
        }
    }

    pub fn component(&self, c: usize) -> &ScalarBc {
        match c {
            0 => &self.x,
            _ => &self.y,
        }
    }
}

/// Cell-averaged scalar data on a grid, including ghost cells.
#[derive(Debug, Clone, PartialEq)]
pub struct CellField {
    pub grid: Grid,
    data: Vec<f64>,
}

impl CellField {
    pub fn zeros(grid: &Grid) -> CellField {
        let stride = grid.stride();
        let rows = grid.ny + 2 * grid.n_ghost;
        CellField {
            grid: *grid,
            data: vec![0.0; stride * rows],
        }
    }

    #[inline(always)]
    fn idx(&self, i: isize, j: isize) -> usize {
        let ng = self.grid.n_ghost as isize;
        let stride = self.grid.stride() as isize;
        ((j + ng) * stride + (i + ng)) as usize
    }

    #[inline(always)]
    pub fn get(&self, i: isize, j: isize) -> f64 {
        self.data[self.idx(i, j)]
    }

    #[inline(always)]
    pub fn set(&mut self, i: isize, j: isize, v: f64) {
        let k = self.idx(i, j);
        self.data[k] = v;
    }

    #[inline(always)]
    pub fn add(&mut self, i: isize, j: isize, v: f64) {
        let k = self.idx(i, j);
        self.data[k] += v;
    }

    pub fn raw(&self) -> &[f64] {
        &self.data
    }

    /// Apply `f(x_center, y_center)` to every interior cell (point values,
    /// not cell averages; see `init_cell_averages` for the quadrature path).
    pub fn fill_with(&mut self, f: impl Fn(f64, f64) -> f64) {
        for j in 0..self.grid.ny as isize {
            for i in 0..self.grid.nx as isize {
                let (x, y) = self.grid.cell_center(i, j);
                self.set(i, j, f(x, y));
            }
        }
    }

    pub fn assign(&mut self, other: &CellField) {
        self.data.copy_from_slice(&other.data);
    }

    /// self += a * other, over the whole array including ghosts.
    pub fn axpy(&mut self, a: f64, other: &CellField) {
        for (s, o) in self.data.iter_mut().zip(other.data.iter()) {
            *s += a * *o;
        }
    }

    pub fn scale(&mut self, a: f64) {
        for s in self.data.iter_mut() {
            *s *= a;
        }
    }

    pub fn interior_mean(&self) -> f64 {
        let mut sum = 0.0;
        for j in 0..self.grid.ny as isize {
            for i in 0..self.grid.nx as isize {
                sum += self.get(i, j);
            }
        }
        sum / (self.grid.nx * self.grid.ny) as f64
    }

    pub fn shift(&mut self, c: f64) {
        for j in 0..self.grid.ny as isize {
            for i in 0..self.grid.nx as isize {
                let k = self.idx(i, j);
                self.data[k] += c;
            }
        }
    }
}

/// Two-component cell-averaged vector data; both components share the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    pub x: CellField,
    pub y: CellField,
}

impl VectorField {
    pub fn zeros(grid: &Grid) -> VectorField {
        VectorField {
            x: CellField::zeros(grid),
            y: CellField::zeros(grid),
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.x.grid
    }

    pub fn component(&self, c: usize) -> &CellField {
        match c {
            0 => &self.x,
            _ => &self.y,
        }
    }

    pub fn component_mut(&mut self, c: usize) -> &mut CellField {
        match c {
            0 => &mut self.x,
            _ => &mut self.y,
        }
    }

    pub fn assign(&mut self, other: &VectorField) {
        self.x.assign(&other.x);
        self.y.assign(&other.y);
    }

    pub fn axpy(&mut self, a: f64, other: &VectorField) {
        self.x.axpy(a, &other.x);
        self.y.axpy(a, &other.y);
    }

    pub fn scale(&mut self, a: f64) {
        self.x.scale(a);
        self.y.scale(a);
    }
}

/// Precomputed weights, in cell units, for the quartic boundary closures.
///
/// For the Dirichlet and Neumann variants the ghost cell averages are linear
/// combinations of (datum, a0, a1, a2, a3) where a_q is the q-th interior
/// cell average counted from the wall; for the extrapolation variant they
/// combine (a0..a4). `face_value` and `face_slope` reconstruct the wall face
/// value and the inward derivative (in cell units) from (a0..a4).
struct GhostWeights {
    dirichlet: [[f64; 5]; 2],
    neumann: [[f64; 5]; 2],
    extrapolate: [[f64; 5]; 2],
    face_value: [f64; 5],
    face_slope: [f64; 5],
}

/// Average of xi^m over the cell [j, j+1], i.e. the m-th moment row entry.
fn cell_moment(j: f64, m: usize) -> f64 {
    let p = (m + 1) as f64;
    ((j + 1.0).powi(m as i32 + 1) - j.powi(m as i32 + 1)) / p
}

/// Solve the 5x5 system a * x = b by Gaussian elimination with partial
/// pivoting; `a` is row-major.
fn solve5(a: &mut [[f64; 5]; 5], b: &mut [f64; 5]) {
    for col in 0..5 {
        let mut piv = col;
        for r in col + 1..5 {
            if a[r][col].abs() > a[piv][col].abs() {
                piv = r;
            }
        }
        a.swap(col, piv);
        b.swap(col, piv);
        let d = a[col][col];
        for r in col + 1..5 {
            let f = a[r][col] / d;
            if f == 0.0 {
                continue;
            }
            for c in col..5 {
                a[r][c] -= f * a[col][c];
            }
            b[r] -= f * b[col];
        }
    }
    for col in (0..5).rev() {
        let mut s = b[col];
        for c in col + 1..5 {
            s -= a[col][c] * b[c];
        }
        b[col] = s / a[col][col];
    }
}

/// Weight vector w such that w . rhs = target_row . (A^{-1} rhs),
/// obtained by solving A^T w = target_row.
fn weight_row(a: &[[f64; 5]; 5], target: [f64; 5]) -> [f64; 5] {
    let mut at = [[0.0; 5]; 5];
    for r in 0..5 {
        for c in 0..5 {
            at[r][c] = a[c][r];
        }
    }
    let mut w = target;
    solve5(&mut at, &mut w);
    w
}

fn ghost_weights() -> &'static GhostWeights {
    static WEIGHTS: OnceLock<GhostWeights> = OnceLock::new();
    WEIGHTS.get_or_init(|| {
        // Row for the fitted quartic's value / inward slope at the wall face.
        let value_row = [1.0, 0.0, 0.0, 0.0, 0.0];
        let slope_row = [0.0, 1.0, 0.0, 0.0, 0.0];
        let avg_row = |j: f64| {
            let mut row = [0.0; 5];
            for (m, entry) in row.iter_mut().enumerate() {
                *entry = cell_moment(j, m);
            }
            row
        };
        let ghost_rows = [avg_row(-1.0), avg_row(-2.0)];

        let build = |datum_row: Option<[f64; 5]>| -> [[f64; 5]; 2] {
            let mut a = [[0.0; 5]; 5];
            match datum_row {
                Some(row) => {
                    a[0] = row;
                    for q in 0..4 {
                        a[q + 1] = avg_row(q as f64);
                    }
                }
                None => {
                    for q in 0..5 {
                        a[q] = avg_row(q as f64);
                    }
                }
            }
            [weight_row(&a, ghost_rows[0]), weight_row(&a, ghost_rows[1])]
        };

        let mut a_ext = [[0.0; 5]; 5];
        for q in 0..5 {
            a_ext[q] = avg_row(q as f64);
        }

        GhostWeights {
            dirichlet: build(Some(value_row)),
            neumann: build(Some(slope_row)),
            extrapolate: build(None),
            face_value: weight_row(&a_ext, value_row),
            face_slope: weight_row(&a_ext, slope_row),
        }
    })
}

/// Wall-line accessor: cell q counted inward from `wall` along the line with
/// tangential index t (t may address ghost lines during the corner pass).
#[inline(always)]
fn line_get(f: &CellField, wall: Wall, t: isize, q: isize) -> f64 {
    match wall {
        Wall::Left => f.get(q, t),
        Wall::Right => f.get(f.grid.nx as isize - 1 - q, t),
        Wall::Bottom => f.get(t, q),
        Wall::Top => f.get(t, f.grid.ny as isize - 1 - q),
    }
}

#[inline(always)]
fn line_set(f: &mut CellField, wall: Wall, t: isize, q: isize, v: f64) {
    match wall {
        Wall::Left => f.set(q, t, v),
        Wall::Right => f.set(f.grid.nx as isize - 1 - q, t, v),
        Wall::Bottom => f.set(t, q, v),
        Wall::Top => f.set(t, f.grid.ny as isize - 1 - q, v),
    }
}

fn fill_wall(f: &mut CellField, wall: Wall, kind: &BcKind, tangential: std::ops::Range<isize>, h: f64) {
    let w = ghost_weights();
    let (w0, w1, uses_datum) = match kind {
        BcKind::DirichletZero => (&w.dirichlet[0], &w.dirichlet[1], true),
        BcKind::NeumannZero | BcKind::NeumannData(_) => (&w.neumann[0], &w.neumann[1], true),
        BcKind::Extrapolate => (&w.extrapolate[0], &w.extrapolate[1], false),
    };
    for t in tangential {
        // rhs layout: [datum, a0..a3] or [a0..a4].
        let mut rhs = [0.0; 5];
        if uses_datum {
            if let BcKind::NeumannData(data) = kind {
                // Datum is the inward slope in cell units.
                let gn = if t >= 0 && (t as usize) < data.len() {
                    data[t as usize]
                } else {
                    0.0
                };
                rhs[0] = -h * gn;
            }
            for q in 0..4isize {
                rhs[q as usize + 1] = line_get(f, wall, t, q);
            }
        } else {
            for q in 0..5isize {
                rhs[q as usize] = line_get(f, wall, t, q);
            }
        }
        let mut g = [0.0; 2];
        for (gi, wrow) in [w0, w1].iter().enumerate() {
            let mut s = 0.0;
            for q in 0..5 {
                s += wrow[q] * rhs[q];
            }
            g[gi] = s;
        }
        line_set(f, wall, t, -1, g[0]);
        line_set(f, wall, t, -2, g[1]);
    }
}

/// Fill all ghost cells of `f` according to `bc`. Face ghosts first along x,
/// then the y-direction pass covers all columns including the ghost columns,
/// which fills the corners. Idempotent: ghosts are functions of interior
/// values and boundary data only.
pub fn fill_ghosts(f: &mut CellField, bc: &ScalarBc) {
    let nx = f.grid.nx as isize;
    let ny = f.grid.ny as isize;
    let ng = f.grid.n_ghost as isize;
    let h = f.grid.h;
    fill_wall(f, Wall::Left, &bc.walls[0], 0..ny, h);
    fill_wall(f, Wall::Right, &bc.walls[1], 0..ny, h);
    fill_wall(f, Wall::Bottom, &bc.walls[2], -ng..nx + ng, h);
    fill_wall(f, Wall::Top, &bc.walls[3], -ng..nx + ng, h);
}

pub fn fill_ghosts_vector(v: &mut VectorField, bc: &VectorBc) {
    fill_ghosts(&mut v.x, &bc.x);
    fill_ghosts(&mut v.y, &bc.y);
}

/// Fourth-order one-sided reconstruction of wall-face values from the five
/// interior cell averages nearest the wall. Returns one value per wall face.
pub fn wall_face_values(f: &CellField, wall: Wall) -> Vec<f64> {
    let w = &ghost_weights().face_value;
    let n = match wall.axis() {
        0 => f.grid.ny,
        _ => f.grid.nx,
    };
    (0..n as isize)
        .map(|t| (0..5).map(|q| w[q as usize] * line_get(f, wall, t, q)).sum())
        .collect()
}

/// One-sided reconstruction of the outward normal derivative on wall faces.
pub fn wall_face_normal_derivative(f: &CellField, wall: Wall) -> Vec<f64> {
    let w = &ghost_weights().face_slope;
    let n = match wall.axis() {
        0 => f.grid.ny,
        _ => f.grid.nx,
    };
    let h = f.grid.h;
    (0..n as isize)
        .map(|t| {
            let inward: f64 = (0..5).map(|q| w[q as usize] * line_get(f, wall, t, q)).sum();
            -inward / h
        })
        .collect()
}

/// Fourth-difference filter (I - delta^4/16) along a line of wall-face data,
/// with reflection at the line ends. It annihilates the grid-frequency mode
/// exactly while perturbing smooth data only at O(h^4). Used on the viscous
/// pressure boundary data: the one-sided reconstruction of the Laplacian
/// amplifies grid-frequency modes seeded at the corners, and feeding them
/// back through the pressure gradient is unstable.
pub fn smooth_wall_line(d: &[f64]) -> Vec<f64> {
    let n = d.len() as isize;
    let at = |mut i: isize| {
        if i < 0 {
            i = -i;
        }
        if i >= n {
            i = 2 * n - 2 - i;
        }
        d[i as usize]
    };
    (0..n)
        .map(|i| {
            let d4 = at(i - 2) - 4.0 * at(i - 1) + 6.0 * at(i) - 4.0 * at(i + 1) + at(i + 2);
            at(i) - d4 / 16.0
        })
        .collect()
}

/// Normal component n . v reconstructed on the faces of `wall`.
pub fn wall_normal_component(v: &VectorField, wall: Wall) -> Vec<f64> {
    let comp = v.component(wall.axis());
    let sign = wall.normal_sign();
    wall_face_values(comp, wall)
        .into_iter()
        .map(|x| sign * x)
        .collect()
}
