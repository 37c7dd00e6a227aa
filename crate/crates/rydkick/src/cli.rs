//! Command-line front end.
//!
//! Five subcommands share the same flags: `--config <path>` (required),
//! `--out <dir>` for the emitted files, `--jobs <n>` to cap the worker pool,
//! and `--dump-wavefunction` to write the final grid state in gate mode.
//!
//! Exit codes: 0 success, 1 configuration error, 2 completed with untrusted
//! points (boundary leakage or unsolvable protocol points).

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::config::{AnalysisMode, ConfigError, RunConfig};
use crate::gate::{
    check_validity, fidelity_thermal, iterate_cycles, run_gate, rydberg_design_report,
    MarginKind, ValidityReport,
};
use crate::sweep::{
    self, contours_csv, cycles_csv, fmt_float, reference_curve, reference_curve_csv, run_sweep,
    thermal_csv, CycleRow, SweepRecord, ThermalRow,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_UNTRUSTED: i32 = 2;

#[derive(Parser)]
#[command(
    name = "rydkick",
    about = "Three-kick Rydberg phase gate: design, propagation, and quality metrics",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a single gate and report its fidelity metrics.
    Gate(RunArgs),
    /// Sweep fidelity over (theta, x0) ranges; writes sweep.csv, contour
    /// polylines, and the fast-gate reference curve.
    Sweep(RunArgs),
    /// Thermal-state fidelity versus temperature; writes thermal.csv.
    Thermal(RunArgs),
    /// Repeated gate cycles: entropy and fidelity per cycle; writes
    /// cycles.csv.
    Cycles(RunArgs),
    /// Approximation-validity margins; writes validity.txt.
    Validity(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// TOML run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory for CSV/report files.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Worker threads for sweeps and per-level runs (default: all cores).
    #[arg(long)]
    jobs: Option<usize>,
    /// Also write the final wavefunction as CSV rows (x, re, im);
    /// gate mode only.
    #[arg(long)]
    dump_wavefunction: bool,
}

/// Parse argv and run; returns the process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    let (mode, args) = match &cli.command {
        Command::Gate(a) => (AnalysisMode::Gate, a),
        Command::Sweep(a) => (AnalysisMode::Sweep, a),
        Command::Thermal(a) => (AnalysisMode::Thermal, a),
        Command::Cycles(a) => (AnalysisMode::Cycles, a),
        Command::Validity(a) => (AnalysisMode::Validity, a),
    };
    match execute(mode, args) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            EXIT_CONFIG
        }
    }
}

fn execute(mode: AnalysisMode, args: &RunArgs) -> Result<i32, ConfigError> {
    let cfg = RunConfig::from_path(&args.config)?;
    cfg.expect_mode(mode)?;
    if let Some(section) = &cfg.physical {
        if let Some(warning) = section.to_physical_config().rydberg_trap_mismatch() {
            eprintln!("warning: {warning}");
        }
    }
    std::fs::create_dir_all(&args.out).map_err(|source| ConfigError::Io {
        path: args.out.display().to_string(),
        source,
    })?;
    let body = || match mode {
        AnalysisMode::Gate => cmd_gate(&cfg, args),
        AnalysisMode::Sweep => cmd_sweep(&cfg, args),
        AnalysisMode::Thermal => cmd_thermal(&cfg, args),
        AnalysisMode::Cycles => cmd_cycles(&cfg, args),
        AnalysisMode::Validity => cmd_validity(&cfg, args),
    };
    match args.jobs {
        None => body(),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .expect("worker pool");
            pool.install(body)
        }
    }
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<(), ConfigError> {
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|source| ConfigError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn cmd_gate(cfg: &RunConfig, args: &RunArgs) -> Result<i32, ConfigError> {
    let (theta, x0) = cfg.require_single_point()?;
    let record = sweep::evaluate_point(cfg, theta, x0)?;
    let params = cfg.gate_params_at(theta, x0)?;
    let outcome = run_gate(&params, 0)?;

    println!("gate run");
    println!("  phi_target      = {} rad (realized -|phi|)", fmt_float(cfg.phi_target()));
    println!("  theta           = {} rad ({} T_ho)", fmt_float(theta), fmt_float(theta / (2.0 * std::f64::consts::PI)));
    println!("  x0              = {} a_ho", fmt_float(x0));
    println!("  dt1             = {}", fmt_float(params.dt1));
    println!("  alpha_plus_sq   = {}", fmt_float(params.alpha_plus_sq));
    println!("  lambda          = {}", fmt_float(params.lambda));
    println!("  tau             = {} ({} T_ho)", fmt_float(outcome.tau), fmt_float(outcome.tau / (2.0 * std::f64::consts::PI)));
    println!("  phi_dyn         = {}", fmt_float(record.phi_dyn));
    println!("  phi_geom        = {}", fmt_float(record.phi_geom));
    println!("  F0              = {}", fmt_float(outcome.f_k));
    println!("  |alpha_00|      = {}", fmt_float(outcome.alpha_kk.norm()));
    println!("  arg alpha_00    = {}", fmt_float(outcome.phi_kk));
    println!("  completeness    = {}", fmt_float(outcome.completeness()));
    println!("  truncation_loss = {}", fmt_float(outcome.alpha_row.truncation_loss()));
    println!("  untrusted       = {}", outcome.untrusted);

    let mut csv = String::from(SweepRecord::HEADER);
    csv.push('\n');
    csv.push_str(&record.to_csv_row());
    csv.push('\n');
    write_file(&args.out, "gate.csv", &csv)?;

    if args.dump_wavefunction {
        let mut dump = String::from("x,re_psi,im_psi\n");
        let psi = &outcome.final_state;
        for (x, a) in psi.grid().points().zip(psi.amplitudes()) {
            dump.push_str(&format!("{},{},{}\n", fmt_float(x), fmt_float(a.re), fmt_float(a.im)));
        }
        write_file(&args.out, "wavefunction.csv", &dump)?;
    }
    Ok(if outcome.untrusted { EXIT_UNTRUSTED } else { EXIT_OK })
}

fn cmd_sweep(cfg: &RunConfig, args: &RunArgs) -> Result<i32, ConfigError> {
    cfg.require_ranges()?;
    let result = run_sweep(cfg)?;
    write_file(&args.out, "sweep.csv", &result.to_csv())?;

    let levels = cfg
        .analysis
        .contour_levels
        .clone()
        .unwrap_or_else(|| vec![0.9, 0.99, 0.999]);
    for level in &levels {
        let polylines = result.contours(*level);
        write_file(&args.out, &format!("contours_{level}.csv"), &contours_csv(*level, &polylines))?;
    }
    let curve = reference_curve(cfg.phi_target(), &result.thetas);
    write_file(&args.out, "reference_curve.csv", &reference_curve_csv(&curve))?;

    let untrusted = result.any_untrusted();
    println!(
        "sweep: {} points ({} x {}), {} untrusted",
        result.records.len(),
        result.thetas.len(),
        result.x0s.len(),
        result.records.iter().filter(|r| r.untrusted).count(),
    );
    Ok(if untrusted { EXIT_UNTRUSTED } else { EXIT_OK })
}

fn cmd_thermal(cfg: &RunConfig, args: &RunArgs) -> Result<i32, ConfigError> {
    if cfg.analysis.temperatures.is_empty() {
        return Err(ConfigError::Field {
            field: "analysis.temperatures",
            reason: "thermal mode needs a non-empty temperature list".into(),
        });
    }
    let mut rows: Vec<ThermalRow> = Vec::new();
    for theta in cfg.theta_values() {
        for x0 in cfg.x0_values() {
            let params = cfg.gate_params_at(theta, x0)?;
            // T -> 0 anchor: only the ground level contributes.
            let anchor = run_gate(&params, 0)?;
            rows.push(ThermalRow {
                theta,
                x0,
                k_bt: 0.0,
                levels: 1,
                fidelity: anchor.f_k,
                untrusted: anchor.untrusted,
            });
            for k_bt in &cfg.analysis.temperatures {
                let thermal = fidelity_thermal(&params, *k_bt)?;
                rows.push(ThermalRow {
                    theta,
                    x0,
                    k_bt: *k_bt,
                    levels: thermal.density.levels(),
                    fidelity: thermal.fidelity,
                    untrusted: thermal.untrusted,
                });
            }
        }
    }
    write_file(&args.out, "thermal.csv", &thermal_csv(&rows))?;
    let untrusted = rows.iter().any(|r| r.untrusted);
    println!("thermal: {} rows", rows.len());
    Ok(if untrusted { EXIT_UNTRUSTED } else { EXIT_OK })
}

fn cmd_cycles(cfg: &RunConfig, args: &RunArgs) -> Result<i32, ConfigError> {
    let n_cycles = cfg.analysis.n_cycles.unwrap_or(0);
    if n_cycles < 1 {
        return Err(ConfigError::Field {
            field: "analysis.n_cycles",
            reason: "cycles mode needs n_cycles >= 1".into(),
        });
    }
    let mut rows: Vec<CycleRow> = Vec::new();
    for theta in cfg.theta_values() {
        for x0 in cfg.x0_values() {
            let params = cfg.gate_params_at(theta, x0)?;
            for rec in iterate_cycles(&params, n_cycles)? {
                rows.push(CycleRow {
                    theta,
                    x0,
                    n: rec.n,
                    entropy: rec.entropy,
                    fidelity: rec.fidelity,
                    truncation_loss: rec.truncation_loss,
                    untrusted: rec.untrusted,
                });
            }
        }
    }
    write_file(&args.out, "cycles.csv", &cycles_csv(&rows))?;
    let untrusted = rows.iter().any(|r| r.untrusted);
    println!("cycles: {} rows", rows.len());
    Ok(if untrusted { EXIT_UNTRUSTED } else { EXIT_OK })
}

fn margin_lines(report: &ValidityReport, out: &mut String) {
    out.push_str("  margins (small-good pass <= 0.1, large-good pass >= 10):\n");
    for (name, value, kind, pass) in report.rows() {
        let direction = match kind {
            MarginKind::SmallGood => "small-good",
            MarginKind::LargeGood => "large-good",
        };
        out.push_str(&format!(
            "    {name:<34} = {:<18} [{direction}] {}\n",
            fmt_float(value),
            if pass { "PASS" } else { "WARN" },
        ));
    }
    out.push_str(&format!("    R bound p1_tilde                   = {}\n", fmt_float(report.r_bound)));
}

fn cmd_validity(cfg: &RunConfig, args: &RunArgs) -> Result<i32, ConfigError> {
    let mut out = String::from("validity report\n");

    if let Some(section) = &cfg.physical {
        let hw = section.to_physical_config();
        let design = rydberg_design_report(&hw, cfg.phi_target())?;
        let t_ho = 2.0 * std::f64::consts::PI;
        out.push_str("hardware\n");
        out.push_str(&format!(
            "  osc_length a_ho                    = {} m\n",
            fmt_float(design.scales.osc_length)
        ));
        out.push_str(&format!(
            "  alpha_plus_sq                      = {}\n",
            fmt_float(design.scales.alpha_plus_sq)
        ));
        out.push_str("fast-gate design point (factor-ten conditions)\n");
        out.push_str(&format!("  theta                              = {} rad\n", fmt_float(design.design.theta)));
        out.push_str(&format!("  x0                                 = {} a_ho\n", fmt_float(design.design.x0)));
        out.push_str(&format!("  dt1 (phase-consistent)             = {}\n", fmt_float(design.dt1)));
        out.push_str(&format!(
            "  tau estimate 2*theta               = {} T_ho\n",
            fmt_float(design.design.tau_estimate / t_ho)
        ));
        out.push_str(&format!(
            "  tau full schedule                  = {} T_ho\n",
            fmt_float(design.tau_full / t_ho)
        ));
        if let Some(wl_nm) = section.lattice_wavelength_nm {
            out.push_str(&format!(
                "  x0 in lattice sites                = {}\n",
                fmt_float(design.scales.lattice_sites(design.design.x0, wl_nm * 1e-9))
            ));
        }
        margin_lines(&design.report, &mut out);
        if let Some(lattice) = &design.lattice {
            out.push_str("lattice-limited separation\n");
            out.push_str(&format!(
                "  x0 = (lambda/2)/a_ho               = {} a_ho\n",
                fmt_float(lattice.x0_lattice)
            ));
            margin_lines(&lattice.report, &mut out);
        }
    }

    if cfg.protocol.theta.is_some() && cfg.protocol.x0.is_some() {
        let (theta, x0) = cfg.require_single_point()?;
        let params = cfg.gate_params_at(theta, x0)?;
        let rabi = cfg.physical.as_ref().map(|sec| {
            let hw = sec.to_physical_config();
            hw.rabi_freq / hw.trap_freq
        });
        let report = check_validity(&params, rabi);
        out.push_str("configured protocol point\n");
        out.push_str(&format!("  theta                              = {} rad\n", fmt_float(theta)));
        out.push_str(&format!("  x0                                 = {} a_ho\n", fmt_float(x0)));
        out.push_str(&format!("  dt1                                = {}\n", fmt_float(params.dt1)));
        out.push_str(&format!("  alpha_plus_sq                      = {}\n", fmt_float(params.alpha_plus_sq)));
        margin_lines(&report, &mut out);
    } else if cfg.physical.is_none() {
        return Err(ConfigError::Field {
            field: "protocol.theta",
            reason: "validity mode needs scalar theta and x0 (or a [physical] section)".into(),
        });
    }

    print!("{out}");
    std::io::stdout().flush().ok();
    write_file(&args.out, "validity.txt", &out)?;
    Ok(EXIT_OK)
}
