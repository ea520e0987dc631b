//! Command-line driver: single runs, grid-refinement sweeps, and the
//! tableau stability report. On any failure the last stderr line is
//! machine readable: `FAIL kind=<kind> msg="<message>"`.

use clap::{Args, Parser, Subcommand, ValueEnum};
use gepup::config::RunConfig;
use gepup::diagnostics::{observed_order, richardson_error, Norm};
use gepup::grid::Grid;
use gepup::oracle::oracle_step;
use gepup::output::{write_diagnostics_csv, write_fields_csv, write_vtk};
use gepup::predictor::StepContext;
use gepup::stepper::{run, GepupStepper};
use gepup::tableau::{rk4, sdirk43, ButcherTableau};
use gepup::GepupError;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "gepup", about = "Fourth-order finite-volume solver for the 2D incompressible Navier-Stokes equations with no-slip walls", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate one configured case and dump diagnostics and final fields.
    Run(RunArgs),
    /// Run a sequence of refined grids and print a Richardson convergence table.
    Sweep(SweepArgs),
    /// Print the stability certificate for the built-in tableaux.
    CheckTableau,
}

#[derive(Args)]
struct CommonArgs {
    /// Path to a `key = value` config file; flags below override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Final time.
    #[arg(long)]
    te: Option<f64>,
    /// Electric-boundary penalty coefficient.
    #[arg(long)]
    lambda: Option<f64>,
    /// Courant number; the fixed step is Cr h / max|u0|.
    #[arg(long)]
    cr: Option<f64>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Number of cells per side.
    #[arg(long)]
    grid: Option<usize>,
    /// Final-field dump format.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Cross-check the first full-history step against the fixed-point
    /// oracle of the undecomposed stage equations (toy grids only).
    #[arg(long)]
    oracle: bool,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Comma-separated cell counts; each must double the previous.
    #[arg(long, value_delimiter = ',', default_value = "32,64,128")]
    grids: Vec<usize>,
}

#[derive(Copy, Clone, ValueEnum)]
enum Format {
    Vtk,
    Csv,
}

fn build_config(common: &CommonArgs, grid: Option<usize>) -> gepup::Result<RunConfig> {
    let mut cfg = match &common.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(te) = common.te {
        cfg.te = te;
    }
    if let Some(lambda) = common.lambda {
        cfg.lambda = lambda;
    }
    if let Some(cr) = common.cr {
        cfg.cr = cr;
    }
    if let Some(n) = grid {
        cfg.grid = n;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn context(cfg: &RunConfig, n: usize) -> StepContext {
    StepContext::new(cfg.build_case(), Grid::unit_square(n), cfg.lambda, cfg.solver_tol)
}

fn oracle_cross_check(cfg: &RunConfig) -> gepup::Result<()> {
    let ctx = context(cfg, cfg.grid);
    let tableau = sdirk43();
    let k = cfg.cr * ctx.grid.h / ctx.case.max_speed;
    let mut st = GepupStepper::new(ctx, tableau.clone(), cfg.t0)?;
    // Three steps so the oracle sees a steady-operation history.
    for _ in 0..3 {
        st.step(k)?;
    }
    let history = st.build_history(k)?;
    let (w_n, r_n, t) = (st.w.clone(), st.r, st.t);
    let rec = st.step(k)?;
    let o = oracle_step(&ctx, &tableau, &history, t, k, &w_n, r_n)?;
    let scale = gepup::ops::norm_linf_vector(&st.w).max(1e-30);
    let mut dev: f64 = 0.0;
    let g = ctx.grid;
    for j in 0..g.ny as isize {
        for i in 0..g.nx as isize {
            dev = dev
                .max((st.w.x.get(i, j) - o.w.x.get(i, j)).abs())
                .max((st.w.y.get(i, j) - o.w.y.get(i, j)).abs());
        }
    }
    let w_dev = dev / scale;
    let r_dev = (rec.r - o.r).abs() / rec.r.abs().max(1.0);
    println!(
        "oracle: w_dev = {w_dev:.3e}, r_dev = {r_dev:.3e} (fixed-point iterations per stage: {:?})",
        o.fixed_point_iterations
    );
    if w_dev > 1e-9 || r_dev > 1e-9 {
        return Err(GepupError::Config(format!(
            "oracle cross-check deviation too large: w_dev = {w_dev:.3e}, r_dev = {r_dev:.3e}"
        )));
    }
    Ok(())
}

fn cmd_run(args: &RunArgs) -> gepup::Result<()> {
    let cfg = build_config(&args.common, args.grid)?;
    if args.oracle {
        if cfg.grid > 32 {
            return Err(GepupError::Config(format!(
                "--oracle is a toy-scale check; grid = {} exceeds 32",
                cfg.grid
            )));
        }
        oracle_cross_check(&cfg)?;
    }
    let ctx = context(&cfg, cfg.grid);
    let result = run(ctx, sdirk43(), cfg.cr, cfg.t0, cfg.te, |_| {})?;
    let out = &args.common.out;
    write_diagnostics_csv(&out.join("diagnostics.csv"), &result.diagnostics)?;
    let st = &result.stepper;
    match args.format {
        Format::Vtk => write_vtk(&out.join("fields.vtk"), st.t, &st.u, &st.w)?,
        Format::Csv => write_fields_csv(&out.join("fields.csv"), &st.u, &st.w)?,
    }
    let last = result.diagnostics.last().unwrap();
    println!(
        "run: case={:?} grid={} te={} steps={} E_h={:.6e} |r-1|={:.3e} |div W|_inf={:.3e}",
        cfg.case,
        cfg.grid,
        cfg.te,
        result.diagnostics.len() - 1,
        last.energy,
        (last.r - 1.0).abs(),
        last.div_w_linf
    );
    println!("wrote {}", out.display());
    Ok(())
}

fn cmd_sweep(args: &SweepArgs) -> gepup::Result<()> {
    let grids = &args.grids;
    if grids.len() < 2 {
        return Err(GepupError::Config(
            "sweep needs at least two grids".to_string(),
        ));
    }
    for pair in grids.windows(2) {
        if pair[1] != 2 * pair[0] {
            return Err(GepupError::Config(format!(
                "grids must double at each refinement, got {} then {}",
                pair[0], pair[1]
            )));
        }
    }
    let cfg = build_config(&args.common, None)?;
    let mut finals = Vec::new();
    for &n in grids {
        let ctx = context(&cfg, n);
        let result = run(ctx, sdirk43(), cfg.cr, cfg.t0, cfg.te, |_| {})?;
        println!(
            "sweep: grid {n} done, {} steps",
            result.diagnostics.len() - 1
        );
        finals.push(result.stepper.u.clone());
    }
    // Richardson: error on grid n is u_n vs the coarsened n*2 solution.
    let norms = [Norm::L1, Norm::L2, Norm::LInf];
    let mut errs = vec![[0.0; 3]; grids.len() - 1];
    for lev in 0..grids.len() - 1 {
        for (ni, &norm) in norms.iter().enumerate() {
            errs[lev][ni] = richardson_error(&finals[lev], &finals[lev + 1], norm);
        }
    }
    let mut csv = String::from("grid,err_l1,order_l1,err_l2,order_l2,err_linf,order_linf\n");
    let mut table = format!(
        "{:>6} {:>13} {:>6} {:>13} {:>6} {:>13} {:>6}\n",
        "grid", "L1 error", "order", "L2 error", "order", "Linf error", "order"
    );
    for lev in 0..errs.len() {
        let _ = write!(csv, "{}", grids[lev]);
        let _ = write!(table, "{:>6}", grids[lev]);
        for ni in 0..3 {
            let order = if lev == 0 {
                None
            } else {
                Some(observed_order(errs[lev - 1][ni], errs[lev][ni]))
            };
            let _ = write!(csv, ",{:.17e}", errs[lev][ni]);
            let _ = write!(table, " {:>13.4e}", errs[lev][ni]);
            match order {
                Some(p) => {
                    let _ = write!(csv, ",{p:.17e}");
                    let _ = write!(table, " {p:>6.2}");
                }
                None => {
                    let _ = write!(csv, ",");
                    let _ = write!(table, " {:>6}", "-");
                }
            }
        }
        csv.push('\n');
        table.push('\n');
    }
    print!("{table}");
    let out = &args.common.out;
    let path = out.join("sweep.csv");
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(|e| GepupError::Io {
            path: dir.display().to_string(),
            source: e,
        })?;
    }
    std::fs::write(&path, &csv).map_err(|e| GepupError::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    println!("wrote {}", path.display());
    Ok(())
}

fn report_tableau(t: &ButcherTableau) -> bool {
    println!("tableau: {}", t.name);
    println!("  diagonally implicit: {}", t.is_diagonally_implicit());
    println!("  max row-sum defect |sum_j a_ij - c_i|: {:.3e}", t.row_sum_defect());
    println!(
        "  b: [{}]",
        t.b.iter()
            .map(|x| format!("{x:.16}"))
            .collect::<Vec<_>>()
            .join(", ")
    );
    let eigs = t.stability_eigenvalues();
    println!(
        "  eigenvalues of M = (b_i a_ij + b_j a_ji - b_i b_j): [{}]",
        eigs.iter()
            .map(|x| format!("{x:.3e}"))
            .collect::<Vec<_>>()
            .join(", ")
    );
    let stable = t.is_algebraically_stable(1e-14);
    println!("  algebraically stable: {stable}");
    stable
}

fn cmd_check_tableau() -> gepup::Result<()> {
    let ok = report_tableau(&sdirk43());
    println!();
    let rk4_stable = report_tableau(&rk4());
    if !ok {
        return Err(GepupError::Config(
            "sdirk43 failed the algebraic-stability certificate".to_string(),
        ));
    }
    if rk4_stable {
        return Err(GepupError::Config(
            "rk4 unexpectedly passed the algebraic-stability test; the certificate is not discriminating".to_string(),
        ));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::CheckTableau => cmd_check_tableau(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let kind = match &e {
                GepupError::Config(_) => "config",
                GepupError::SolverDiverged { .. } => "solver-diverged",
                GepupError::DegenerateStage { .. } => "degenerate-stage",
                GepupError::StepFailed { .. } => "step-failed",
                GepupError::Io { .. } => "io",
            };
            eprintln!("FAIL kind={kind} msg=\"{e}\"");
            ExitCode::FAILURE
        }
    }
}
