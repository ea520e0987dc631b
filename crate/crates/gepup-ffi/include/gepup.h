/*
 * C interface to the gepup solver: fourth-order finite-volume integration
 * of the 2D incompressible Navier-Stokes equations on [0,1]^2 with no-slip
 * walls. Handles are opaque; fallible calls return a GEPUP_* code and leave
 * a message readable through gepup_last_error().
 */

#ifndef GEPUP_H
#define GEPUP_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#define GEPUP_OK 0
#define GEPUP_ERR_NULL 1
#define GEPUP_ERR_CONFIG 2
#define GEPUP_ERR_SOLVER 3
#define GEPUP_ERR_STEP 4
#define GEPUP_ERR_BUFFER 5

typedef struct GepupSolver GepupSolver;

typedef struct GepupDiagnostics {
    double t;
    /* Modified energy 0.5 (||u||^2 + r^2). */
    double energy;
    /* Scalar auxiliary variable; stays near 1 on a healthy run. */
    double r;
    double div_w_l1;
    double div_w_l2;
    double div_w_linf;
    double wall_normal_w_max;
    double kinetic;
} GepupDiagnostics;

/*
 * Build a solver from configuration text, the same `key = value` format the
 * CLI accepts (keys: case, re, nu, lambda, cr, t0, te, grid,
 * pre_projection_passes, solver_tol). Returns NULL on error.
 */
GepupSolver *gepup_solver_new(const char *config);

void gepup_solver_free(GepupSolver *solver);

/* Advance a number of fixed time steps. */
int gepup_solver_step(GepupSolver *solver, int steps);

/* Advance to time te, shortening the last step to land on it exactly. */
int gepup_solver_advance_to(GepupSolver *solver, double te);

double gepup_solver_time(const GepupSolver *solver);

/* Fixed step k = Cr h / max|u0| from the configuration. */
double gepup_solver_dt(const GepupSolver *solver);

/* Cells per side of the square grid, 0 for a null handle. */
int gepup_solver_grid(const GepupSolver *solver);

int gepup_solver_diagnostics(const GepupSolver *solver, GepupDiagnostics *out);

/*
 * Copy one velocity component, row-major with i fastest (index j*n + i).
 * field: 0 = projected velocity U, 1 = advanced velocity W.
 * component: 0 = x, 1 = y. len must be at least n*n.
 */
int gepup_solver_velocity(const GepupSolver *solver, int field, int component,
                          double *out, size_t len);

/*
 * Message from the most recent failure on the calling thread. Valid until
 * the next failing call; never NULL.
 */
const char *gepup_last_error(void);

/* 1 when the built-in SDIRK tableau is algebraically stable. */
int gepup_tableau_stable(void);

#ifdef __cplusplus
}
#endif

#endif /* GEPUP_H */
