//! C ABI for embedding the solver. Handles are opaque; every fallible call
//! returns a `GEPUP_*` code and stores a message retrievable through
//! `gepup_last_error`. The matching declarations live in `include/gepup.h`.

use gepup::config::RunConfig;
use gepup::grid::Grid;
use gepup::predictor::StepContext;
use gepup::stepper::GepupStepper;
use gepup::tableau::sdirk43;
use gepup::GepupError;
use std::cell::RefCell;
use std::ffi::{c_char, c_double, c_int, CStr, CString};

pub const GEPUP_OK: c_int = 0;
pub const GEPUP_ERR_NULL: c_int = 1;
pub const GEPUP_ERR_CONFIG: c_int = 2;
pub const GEPUP_ERR_SOLVER: c_int = 3;
pub const GEPUP_ERR_STEP: c_int = 4;
pub const GEPUP_ERR_BUFFER: c_int = 5;

/// Opaque from C; boxed and returned as a raw pointer.
pub struct GepupSolver {
    stepper: GepupStepper,
    /// Fixed step Cr h / max|u0| from the configuration.
    k: f64,
}

/// Per-step scalar diagnostics, mirrored in gepup.h.
#[repr(C)]
pub struct GepupDiagnostics {
    pub t: c_double,
    /// Modified energy 0.5 (||u||^2 + r^2).
    pub energy: c_double,
    pub r: c_double,
    pub div_w_l1: c_double,
    pub div_w_l2: c_double,
    pub div_w_linf: c_double,
    pub wall_normal_w_max: c_double,
    pub kinetic: c_double,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let sanitized: String = msg.chars().filter(|&c| c != '\0').collect();
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(sanitized).unwrap());
}

fn code_of(e: &GepupError) -> c_int {
    match e {
        GepupError::Config(_) | GepupError::Io { .. } => GEPUP_ERR_CONFIG,
        GepupError::SolverDiverged { .. } => GEPUP_ERR_SOLVER,
        GepupError::DegenerateStage { .. } | GepupError::StepFailed { .. } => GEPUP_ERR_STEP,
    }
}

fn fail(e: &GepupError) -> c_int {
    set_error(&e.to_string());
    code_of(e)
}

/// Message from the most recent failure on this thread. Valid until the
/// next failing call; never null.
#[no_mangle]
pub extern "C" fn gepup_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Build a solver from configuration text (same `key = value` format as the
/// CLI config files). Returns null on error.
///
/// # Safety
/// `config` must be a valid NUL-terminated string or null.
#[no_mangle]
pub unsafe extern "C" fn gepup_solver_new(config: *const c_char) -> *mut GepupSolver {
    if config.is_null() {
        set_error("config must not be null");
        return std::ptr::null_mut();
    }
    let text = match CStr::from_ptr(config).to_str() {
        Ok(t) => t,
        Err(_) => {
            set_error("config is not valid UTF-8");
            return std::ptr::null_mut();
        }
    };
    let cfg = match RunConfig::parse(text).and_then(|c| {
        c.validate()?;
        Ok(c)
    }) {
        Ok(c) => c,
        Err(e) => {
            fail(&e);
            return std::ptr::null_mut();
        }
    };
    let ctx = StepContext::new(
        cfg.build_case(),
        Grid::unit_square(cfg.grid),
        cfg.lambda,
        cfg.solver_tol,
    );
    let k = cfg.cr * ctx.grid.h / ctx.case.max_speed;
    match GepupStepper::new(ctx, sdirk43(), cfg.t0) {
        Ok(stepper) => Box::into_raw(Box::new(GepupSolver { stepper, k })),
        Err(e) => {
            fail(&e);
            std::ptr::null_mut()
        }
    }
}

/// # Safety
/// `solver` must come from `gepup_solver_new` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn gepup_solver_free(solver: *mut GepupSolver) {
    if !solver.is_null() {
        drop(Box::from_raw(solver));
    }
}

/// Advance `steps` fixed time steps.
///
/// # Safety
/// `solver` must be a live handle from `gepup_solver_new`.
#[no_mangle]
pub unsafe extern "C" fn gepup_solver_step(solver: *mut GepupSolver, steps: c_int) -> c_int {
    let Some(s) = solver.as_mut() else {
        set_error("solver must not be null");
        return GEPUP_ERR_NULL;
    };
    for _ in 0..steps {
        if let Err(e) = s.stepper.step(s.k) {
            return fail(&e);
        }
    }
    GEPUP_OK
}

/// Advance to time `te` with the fixed step, shortening the last step to
/// land on `te` exactly.
///
/// # Safety
/// `solver` must be a live handle from `gepup_solver_new`.
#[no_mangle]
pub unsafe extern "C" fn gepup_solver_advance_to(solver: *mut GepupSolver, te: c_double) -> c_int {
    let Some(s) = solver.as_mut() else {
        set_error("solver must not be null");
        return GEPUP_ERR_NULL;
    };
    while te - s.stepper.t > 1e-12 * te.abs().max(1.0) {
        let dt = s.k.min(te - s.stepper.t);
        if let Err(e) = s.stepper.step(dt) {
            return fail(&e);
        }
    }
    GEPUP_OK
}

/// # Safety
/// `solver` must be a live handle from `gepup_solver_new`.
#[no_mangle]
pub unsafe extern "C" fn gepup_solver_time(solver: *const GepupSolver) -> c_double {
    solver.as_ref().map_or(f64::NAN, |s| s.stepper.t)
}

/// Fixed time step used by `gepup_solver_step`.
///
/// # Safety
/// `solver` must be a live handle from `gepup_solver_new`.
#[no_mangle]
pub unsafe extern "C" fn gepup_solver_dt(solver: *const GepupSolver) -> c_double {
    solver.as_ref().map_or(f64::NAN, |s| s.k)
}

/// Cells per side of the (square) grid, or 0 for a null handle.
///
/// # Safety
/// `solver` must be a live handle from `gepup_solver_new`.
#[no_mangle]
pub unsafe extern "C" fn gepup_solver_grid(solver: *const GepupSolver) -> c_int {
    solver.as_ref().map_or(0, |s| s.stepper.ctx.grid.nx as c_int)
}

/// Scalar diagnostics of the current state.
///
/// # Safety
/// `solver` must be a live handle and `out` a valid destination.
#[no_mangle]
pub unsafe extern "C" fn gepup_solver_diagnostics(
    solver: *const GepupSolver,
    out: *mut GepupDiagnostics,
) -> c_int {
    let (Some(s), Some(out)) = (solver.as_ref(), out.as_mut()) else {
        set_error("solver and out must not be null");
        return GEPUP_ERR_NULL;
    };
    let d = s.stepper.diagnostics();
    *out = GepupDiagnostics {
        t: d.t,
        energy: d.energy,
        r: d.r,
        div_w_l1: d.div_w_l1,
        div_w_l2: d.div_w_l2,
        div_w_linf: d.div_w_linf,
        wall_normal_w_max: d.wall_normal_w_max,
        kinetic: d.kinetic,
    };
    GEPUP_OK
}

/// Copy one velocity component into `out`, row-major with i fastest
/// (index j * n + i). `field` is 0 for the projected velocity U and 1 for
/// the advanced velocity W; `component` is 0 for x and 1 for y. `len` must
/// be at least n * n.
///
/// # Safety
/// `solver` must be a live handle and `out` must point to `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn gepup_solver_velocity(
    solver: *const GepupSolver,
    field: c_int,
    component: c_int,
    out: *mut c_double,
    len: usize,
) -> c_int {
    let Some(s) = solver.as_ref() else {
        set_error("solver must not be null");
        return GEPUP_ERR_NULL;
    };
    if out.is_null() {
        set_error("out must not be null");
        return GEPUP_ERR_NULL;
    }
    let v = match field {
        0 => &s.stepper.u,
        1 => &s.stepper.w,
        _ => {
            set_error("field must be 0 (U) or 1 (W)");
            return GEPUP_ERR_BUFFER;
        }
    };
    if !(0..=1).contains(&component) {
        set_error("component must be 0 (x) or 1 (y)");
        return GEPUP_ERR_BUFFER;
    }
    let f = v.component(component as usize);
    let (nx, ny) = (s.stepper.ctx.grid.nx, s.stepper.ctx.grid.ny);
    if len < nx * ny {
        set_error("out buffer too small");
        return GEPUP_ERR_BUFFER;
    }
    for j in 0..ny {
        for i in 0..nx {
            *out.add(j * nx + i) = f.get(i as isize, j as isize);
        }
    }
    GEPUP_OK
}

/// 1 when the built-in SDIRK tableau passes the algebraic-stability
/// certificate, else 0.
#[no_mangle]
pub extern "C" fn gepup_tableau_stable() -> c_int {
    sdirk43().is_algebraically_stable(1e-12) as c_int
}
