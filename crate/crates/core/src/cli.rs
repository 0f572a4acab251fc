//! The `scs` command line tool.
//!
//! Exit status: 0 on success, 1 on invalid input, 2 on numerical failure.
//! Every artifact lands in `--output-dir`.

use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use crate::algebra::{
    anticommutator, gamma, gamma_mu, lorentz_matrix, metric, squared_bilinear, squared_bilinear_expansion,
    BilinearFamily, ComplexMatrix2, GammaIndex, GammaRepresentation, Spinor,
};
use crate::config::{parse_config, RunConfig};
use crate::error::{Error, Result};
use crate::gauge::{classify_regime_with, field_strength, field_strength_from_potential, pure_gauge, PhasePair};
use crate::gauge::{RegimeInputs, RegimeThresholds};
use crate::grid::SpaceTimeGrid;
use crate::kinematics::{free_dispersion, KinematicState};
use crate::meanfield::dispersion_solve;
use crate::output::{read_numeric_csv, write_json, Cell, CsvTable, ReportRecord};
use crate::pairdyn::{
    density_phase_split, evolve, kink_profile, kink_profile_residual, static_kink_oracle, traveling_integrate,
    traveling_integrate_log, Boundary, FieldGrid, KinkDirection, MassSign, SolverConfig, TravelingParams,
};
use crate::quasi::{decomposed_residuals, quadrature_solution, select_convention, CoefficientForm, QuadratureSpec, QuasiParams};
use crate::scsfactor::{factorize, reconstruction_error};

#[derive(Debug, Parser)]
#[command(name = "scs", version, about = "Paired Dirac fermions in 1+1 dimensions")]
pub struct Cli {
    /// Directory for output artifacts (created if missing).
    #[arg(long, global = true, default_value = ".")]
    pub output_dir: PathBuf,
    /// Worker threads; 0 picks the number of cores.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    /// Reserved; no subcommand is stochastic.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Clifford algebra identities; writes algebra_report.json.
    AlgebraCheck,
    /// Dispersion branches over a momentum range; writes dispersion.csv.
    #[command(allow_negative_numbers = true)]
    Dispersion(DispersionArgs),
    /// Spin-charge factorization of the dressed boost; writes factorize.json.
    #[command(allow_negative_numbers = true)]
    Factorize(FactorizeArgs),
    /// Evolve the pairing field from a key = value config file.
    Evolve {
        #[arg(long)]
        config: PathBuf,
    },
    /// Static kink and the closed-form profile; writes kink.csv, kink.json.
    #[command(allow_negative_numbers = true)]
    Kink(KinkArgs),
    /// Weakly nonlinear traveling-wave ODEs; writes travel.csv, travel.json.
    #[command(allow_negative_numbers = true)]
    Travel(TravelArgs),
    /// Quasiparticle quadrature and residuals; writes quasi_fields.csv,
    /// quasi_report.json.
    #[command(allow_negative_numbers = true)]
    Quasi(QuasiArgs),
    /// Regime labels over a two-parameter scan; writes regimes.csv.
    #[command(allow_negative_numbers = true)]
    Regimes(RegimesArgs),
    /// Field strength from a phase-field CSV (t,x,theta_n,beta_delta);
    /// writes gauge.csv.
    Gauge {
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct DispersionArgs {
    #[arg(long)]
    pub m: f64,
    #[arg(long, default_value_t = 0.0)]
    pub mu: f64,
    #[arg(long, default_value_t = 0.0)]
    pub sigma: f64,
    #[arg(long, default_value_t = 0.0)]
    pub re_delta: f64,
    #[arg(long, default_value_t = 0.0)]
    pub im_delta: f64,
    #[arg(long, default_value_t = -2.0)]
    pub p_min: f64,
    #[arg(long, default_value_t = 2.0)]
    pub p_max: f64,
    #[arg(long, default_value_t = 41)]
    pub p_steps: usize,
}

#[derive(Debug, Args)]
pub struct FactorizeArgs {
    #[arg(long = "E")]
    pub energy: f64,
    #[arg(long)]
    pub p: f64,
    #[arg(long, default_value_t = 0.0)]
    pub mu: f64,
    #[arg(long, default_value_t = 0.0)]
    pub re_delta: f64,
    #[arg(long, default_value_t = 0.0)]
    pub im_delta: f64,
}

#[derive(Debug, Args)]
pub struct KinkArgs {
    #[arg(long, default_value_t = 1.0)]
    pub m_delta: f64,
    #[arg(long, default_value_t = 6.0)]
    pub g_delta: f64,
    #[arg(long, default_value_t = 801)]
    pub nx: usize,
    #[arg(long, default_value_t = 0.02)]
    pub dx: f64,
}

#[derive(Debug, Args)]
pub struct TravelArgs {
    #[arg(long)]
    pub omega_rho: f64,
    #[arg(long)]
    pub k_rho: f64,
    #[arg(long)]
    pub omega_beta: f64,
    #[arg(long)]
    pub k_beta: f64,
    #[arg(long, default_value_t = 0.3)]
    pub c: f64,
    #[arg(long, default_value_t = 0.5)]
    pub rho_init: f64,
    #[arg(long, default_value_t = 1.0)]
    pub m_delta: f64,
    #[arg(long, default_value_t = 1.0)]
    pub u_max: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub du: f64,
    /// Use the ω_β = 2ω_ρ, k_β = 2k_ρ logarithmic system.
    #[arg(long)]
    pub log: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FormArg {
    Printed,
    Consistent,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum BackgroundArg {
    /// ρ_Δ = A cos θ + B sin θ, β_Δ = C_β.
    Cosine,
    /// ρ_Δ = 0.
    Zero,
}

#[derive(Debug, Args)]
pub struct QuasiArgs {
    #[arg(long, default_value_t = 1.0)]
    pub c1: f64,
    #[arg(long, default_value_t = 1.0)]
    pub c2: f64,
    #[arg(long, default_value_t = 0.0)]
    pub k_phi1: f64,
    #[arg(long, default_value_t = 0.0)]
    pub k_phi2: f64,
    #[arg(long, default_value_t = 0.3)]
    pub a_rho: f64,
    #[arg(long, default_value_t = 0.0)]
    pub b_rho: f64,
    #[arg(long, default_value_t = 1.5)]
    pub k_rho: f64,
    #[arg(long, default_value_t = 2.0)]
    pub omega_rho: f64,
    #[arg(long, default_value_t = 0.0)]
    pub c_beta: f64,
    #[arg(long, default_value_t = 1.0)]
    pub m_delta: f64,
    #[arg(long, default_value_t = 1.0)]
    pub g_delta: f64,
    #[arg(long, default_value_t = 1.0)]
    pub rho0: f64,
    /// Fermion mass used in the residual equations.
    #[arg(long, default_value_t = 0.0)]
    pub m: f64,
    #[arg(long, default_value_t = 0.0)]
    pub mu: f64,
    #[arg(long, value_enum, default_value_t = FormArg::Consistent)]
    pub form: FormArg,
    #[arg(long, value_enum, default_value_t = BackgroundArg::Cosine)]
    pub background: BackgroundArg,
    #[arg(long, default_value_t = 41)]
    pub nt: usize,
    #[arg(long, default_value_t = 81)]
    pub nx: usize,
    /// Lattice spacing in both t and x.
    #[arg(long, default_value_t = 0.01)]
    pub h: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RegimeParam {
    Rho0,
    CondensateFraction,
    P,
    QBeta,
    QDelta,
    Mu,
    M,
}

#[derive(Debug, Args)]
pub struct RegimesArgs {
    #[arg(long, value_enum)]
    pub param1: RegimeParam,
    #[arg(long)]
    pub min1: f64,
    #[arg(long)]
    pub max1: f64,
    #[arg(long, default_value_t = 11)]
    pub n1: usize,
    #[arg(long, value_enum)]
    pub param2: RegimeParam,
    #[arg(long)]
    pub min2: f64,
    #[arg(long)]
    pub max2: f64,
    #[arg(long, default_value_t = 11)]
    pub n2: usize,
    #[arg(long, default_value_t = 0.0)]
    pub rho0: f64,
    #[arg(long, default_value_t = 0.0)]
    pub condensate_fraction: f64,
    #[arg(long, default_value_t = 0.0)]
    pub p: f64,
    #[arg(long, default_value_t = 0.0)]
    pub q_beta: f64,
    #[arg(long, default_value_t = 0.0)]
    pub q_delta: f64,
    #[arg(long, default_value_t = 0.0)]
    pub mu: f64,
    #[arg(long, default_value_t = 1.0)]
    pub m: f64,
    #[arg(long, default_value_t = 0.05)]
    pub negligible: f64,
    #[arg(long, default_value_t = 0.5)]
    pub broken_fraction: f64,
    #[arg(long, default_value_t = 1.0)]
    pub molecular_ratio: f64,
}

/// Parse `args`, run, print a one-line diagnostic on failure and return the
/// exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("scs: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    if e.is_numerical() {
        2
    } else {
        1
    }
}

pub fn run(cli: &Cli) -> Result<()> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build()
        .map_err(|e| Error::Io(e.to_string()))?;
    fs::create_dir_all(&cli.output_dir).map_err(|e| Error::Io(format!("{}: {e}", cli.output_dir.display())))?;
    let out = cli.output_dir.as_path();
    pool.install(|| match &cli.command {
        Command::AlgebraCheck => run_algebra_check(out),
        Command::Dispersion(a) => run_dispersion(a, out),
        Command::Factorize(a) => run_factorize(a, out),
        Command::Evolve { config } => run_evolve(config, out),
        Command::Kink(a) => run_kink(a, out),
        Command::Travel(a) => run_travel(a, out),
        Command::Quasi(a) => run_quasi(a, out),
        Command::Regimes(a) => run_regimes(a, out),
        Command::Gauge { input } => run_gauge(input, out),
    })
}

fn finite(name: &'static str, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::param(name, "must be finite"))
    }
}

/// Deterministic spinor sample: Weyl sequences in magnitude and phase.
fn sample_spinors(n: usize) -> Vec<Spinor> {
    let frac = |k: usize, a: f64| (k as f64 * a).fract();
    let (a1, a2, a3, a4) = (0.618_033_988_749_895, 0.414_213_562_373_095, 0.732_050_807_568_877, 0.236_067_977_499_79);
    (1..=n)
        .map(|k| {
            Spinor::new(
                Complex64::from_polar(0.1 + 2.0 * frac(k, a1), 2.0 * PI * frac(k, a2)),
                Complex64::from_polar(0.1 + 2.0 * frac(k, a3), 2.0 * PI * frac(k, a4)),
            )
        })
        .collect()
}

/// Records behind `algebra-check`.
pub fn algebra_report() -> Vec<ReportRecord> {
    let mut out = Vec::new();
    let rep_name = |r: GammaRepresentation| match r {
        GammaRepresentation::Hyperbolic => "hyperbolic",
        GammaRepresentation::Complex => "complex",
    };
    for rep in GammaRepresentation::ALL {
        let mut worst = 0.0f64;
        for mu in 0..2 {
            for nu in 0..2 {
                let ac = anticommutator(gamma_mu(rep, mu), gamma_mu(rep, nu));
                let want = ComplexMatrix2::identity().scale((2.0 * metric(mu, nu)).into());
                worst = worst.max(ac.max_abs_diff(&want));
            }
        }
        out.push(ReportRecord::residual(format!("anticommutator_{}", rep_name(rep)), worst, 0.0));

        let g5 = gamma(rep, GammaIndex::G5);
        let mut g5_err = (g5 * g5).max_abs_diff(&ComplexMatrix2::identity());
        g5_err = g5_err.max((gamma(rep, GammaIndex::G0) * gamma(rep, GammaIndex::G1)).max_abs_diff(&g5));
        for mu in 0..2 {
            g5_err = g5_err.max(anticommutator(g5, gamma_mu(rep, mu)).max_abs());
        }
        out.push(ReportRecord::residual(format!("gamma5_{}", rep_name(rep)), g5_err, 1e-12));

        let mut law = 0.0f64;
        for i in 0..21 {
            for j in 0..21 {
                let (a, b) = (-1.0 + 0.1 * i as f64, -1.0 + 0.1 * j as f64);
                let lhs = lorentz_matrix(rep, a) * lorentz_matrix(rep, b);
                let rhs = lorentz_matrix(rep, a + b);
                law = law.max(lhs.max_abs_diff(&rhs) / rhs.max_abs());
            }
        }
        out.push(ReportRecord::residual(format!("boost_group_law_{}", rep_name(rep)), law, 1e-12));
    }
    let spinors = sample_spinors(1000);
    for family in BilinearFamily::ALL {
        let worst = spinors
            .iter()
            .map(|psi| {
                let direct = squared_bilinear(GammaRepresentation::Hyperbolic, family, *psi);
                let expanded = squared_bilinear_expansion(family, *psi);
                let scale = psi.norm().powi(4);
                (direct - expanded).norm() / scale
            })
            .fold(0.0, f64::max);
        out.push(ReportRecord::residual(format!("squared_bilinear_{family:?}").to_lowercase(), worst, 1e-12));
    }
    out
}

fn run_algebra_check(out: &Path) -> Result<()> {
    let records = algebra_report();
    write_json(&out.join("algebra_report.json"), &records)?;
    let failed: Vec<&str> = records.iter().filter(|r| !r.pass).map(|r| r.name.as_str()).collect();
    if failed.is_empty() {
        println!("algebra-check: {} checks passed", records.len());
        Ok(())
    } else {
        Err(Error::CheckFailed(failed.join(", ")))
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![lo],
        _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
    }
}

fn run_dispersion(a: &DispersionArgs, out: &Path) -> Result<()> {
    for (n, v) in [
        ("m", a.m),
        ("mu", a.mu),
        ("sigma", a.sigma),
        ("re_delta", a.re_delta),
        ("im_delta", a.im_delta),
        ("p_min", a.p_min),
        ("p_max", a.p_max),
    ] {
        finite(n, v)?;
    }
    if a.p_steps == 0 {
        return Err(Error::param("p_steps", "must be positive"));
    }
    let delta = Complex64::new(a.re_delta, a.im_delta);
    let free = delta == Complex64::new(0.0, 0.0) && a.sigma == 0.0;
    let rows: Vec<(f64, Vec<f64>)> = linspace(a.p_min, a.p_max, a.p_steps)
        .into_iter()
        .map(|p| {
            let roots = if free {
                let (lo, hi) = free_dispersion(p, a.m, a.mu);
                vec![lo, hi]
            } else {
                dispersion_solve(p, a.mu, a.sigma, a.m, delta)
            };
            (p, roots)
        })
        .collect();
    let width = rows.iter().map(|r| r.1.len()).max().unwrap_or(0);
    let mut header = vec!["p".to_string()];
    header.extend((1..=width).map(|i| format!("E{i}")));
    let mut t = CsvTable::new(&header);
    for (p, roots) in rows {
        let mut cells = vec![Cell::Num(p)];
        cells.extend((0..width).map(|i| roots.get(i).map_or(Cell::Empty, |&e| Cell::Num(e))));
        t.push_cells(cells);
    }
    t.write(&out.join("dispersion.csv"))
}

#[derive(Serialize)]
struct FactorizeReport {
    eta: f64,
    zeta: f64,
    phi_mag: f64,
    beta: f64,
    reconstruction_error: f64,
}

fn run_factorize(a: &FactorizeArgs, out: &Path) -> Result<()> {
    let state = KinematicState::new(finite("E", a.energy)?, finite("p", a.p)?, 0.0, finite("mu", a.mu)?);
    let db = Complex64::new(finite("re_delta", a.re_delta)?, finite("im_delta", a.im_delta)?);
    let (ep, em) = (state.e_plus(), state.e_minus());
    let f = factorize(ep, em, db)?;
    let report = FactorizeReport {
        eta: f.eta,
        zeta: f.zeta,
        phi_mag: f.phi_mag,
        beta: f.beta,
        reconstruction_error: reconstruction_error(ep, em, db, &f),
    };
    write_json(&out.join("factorize.json"), &report)
}

/// Solver configuration and initial field described by an `evolve` config.
pub fn evolve_setup(cfg: &RunConfig, base_dir: &Path) -> Result<(FieldGrid, SolverConfig)> {
    let nx = cfg.require_usize("nx")?;
    if nx < 3 {
        return Err(Error::Config {
            line: cfg.line("nx"),
            reason: "nx must be at least 3".into(),
        });
    }
    let mut sc = SolverConfig::new(
        cfg.require_number("dx")?,
        cfg.require_number("dt")?,
        cfg.require_usize("steps")?,
        cfg.require_number("m_delta")?,
        cfg.require_number("g_delta")?,
    );
    sc.snapshot_every = cfg.number("snapshot_every").unwrap_or(0.0) as usize;
    sc.sign = match cfg.text("sign").unwrap_or("manifest") {
        "manifest" => MassSign::Manifest,
        "broken" => MassSign::Broken,
        other => {
            return Err(Error::Config {
                line: cfg.line("sign"),
                reason: format!("sign must be `manifest` or `broken`, got `{other}`"),
            })
        }
    };
    let rho0 = cfg.number("rho0").unwrap_or(0.0);
    let m2 = sc.m_delta * sc.m_delta;
    sc.source = match sc.sign {
        MassSign::Manifest => m2 * rho0,
        MassSign::Broken => -m2 * rho0,
    } + sc.g_delta / 6.0 * rho0.powi(3);
    let x0 = cfg.number("x0").unwrap_or(-0.5 * (nx as f64 - 1.0) * sc.dx);

    let ic = cfg.text("ic").unwrap_or("zero");
    let ic_err = |reason: String| Error::Config {
        line: cfg.line("ic"),
        reason,
    };
    let words: Vec<&str> = ic.split_whitespace().collect();
    let zero = Complex64::new(0.0, 0.0);
    let mut kink_vacuum = None;
    let field = match words.as_slice() {
        ["zero"] => FieldGrid::from_fn(nx, sc.dx, x0, |_| (rho0.into(), zero))?,
        ["mode", k, amp] => {
            let num = |s: &str| {
                s.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| ic_err(format!("malformed number `{s}` in ic")))
            };
            let (k, amp) = (num(k)?, num(amp)?);
            FieldGrid::from_fn(nx, sc.dx, x0, |x| ((rho0 + amp * (k * x).cos()).into(), zero))?
        }
        ["kink"] => {
            if sc.sign != MassSign::Broken {
                return Err(ic_err("kink initial data needs sign = broken".into()));
            }
            let k = static_kink_oracle(sc.m_delta, sc.g_delta, nx, sc.dx)?;
            kink_vacuum = Some(k.vacuum);
            FieldGrid::new(
                sc.dx,
                x0,
                k.rho.iter().map(|&r| r.into()).collect(),
                vec![zero; nx],
            )?
        }
        ["file", path] => {
            let path = base_dir.join(path);
            let (header, rows) = read_numeric_csv(&path)?;
            let col = |name: &str| header.iter().position(|h| h == name);
            let (ire, iim) = match (col("re"), col("im")) {
                (Some(a), Some(b)) => (a, b),
                _ => return Err(ic_err("initial-data file needs `re` and `im` columns".into())),
            };
            if rows.len() != nx {
                return Err(ic_err(format!("initial-data file has {} rows, nx = {nx}", rows.len())));
            }
            let (irt, iit) = (col("re_t"), col("im_t"));
            let values = rows.iter().map(|r| Complex64::new(r[ire], r[iim])).collect();
            let vel = rows
                .iter()
                .map(|r| Complex64::new(irt.map_or(0.0, |i| r[i]), iit.map_or(0.0, |i| r[i])))
                .collect();
            FieldGrid::new(sc.dx, x0, values, vel)?
        }
        _ => return Err(ic_err(format!("unrecognized ic `{ic}`"))),
    };
    sc.boundary = match cfg.text("boundary").unwrap_or("periodic") {
        "periodic" => Boundary::Periodic,
        "fixed" => match kink_vacuum {
            Some(v) => Boundary::FixedAsymptote {
                left: (-v).into(),
                right: v.into(),
            },
            None => Boundary::FixedAsymptote {
                left: field.values[0],
                right: field.values[nx - 1],
            },
        },
        other => {
            return Err(Error::Config {
                line: cfg.line("boundary"),
                reason: format!("boundary must be `periodic` or `fixed`, got `{other}`"),
            })
        }
    };
    Ok((field, sc))
}

fn run_evolve(config: &Path, out: &Path) -> Result<()> {
    let text = fs::read_to_string(config).map_err(|e| Error::Io(format!("{}: {e}", config.display())))?;
    let cfg = parse_config(&text)?;
    let base = config.parent().unwrap_or(Path::new("."));
    let (field, sc) = evolve_setup(&cfg, base)?;
    let traj = evolve(field, sc)?;

    let mut snaps = CsvTable::new(&["t", "x", "re_delta", "im_delta", "rho", "beta"]);
    for (t, f) in &traj.snapshots {
        let split = density_phase_split(&f.values);
        for (i, v) in f.values.iter().enumerate() {
            snaps.push(&[*t, f.x(i), v.re, v.im, split.rho[i], split.beta[i]]);
        }
    }
    snaps.write(&out.join("snapshots.csv"))?;
    let mut diag = CsvTable::new(&["t", "energy", "charge", "max_abs", "efield_norm"]);
    for d in &traj.diagnostics {
        diag.push(&[d.t, d.energy, d.charge, d.max_abs, d.efield_norm]);
    }
    diag.write(&out.join("diagnostics.csv"))
}

#[derive(Serialize)]
struct KinkReport {
    vacuum: f64,
    residual: f64,
    printed_residual_max: f64,
}

fn run_kink(a: &KinkArgs, out: &Path) -> Result<()> {
    let k = static_kink_oracle(a.m_delta, a.g_delta, a.nx, a.dx)?;
    let mut t = CsvTable::new(&["x", "rho", "printed", "printed_residual"]);
    let mut worst = 0.0f64;
    for (x, r) in k.x.iter().zip(&k.rho) {
        let p = kink_profile(*x, 0.0, a.m_delta, a.g_delta, KinkDirection::Left)?;
        let pr = kink_profile_residual(*x, 0.0, a.m_delta, a.g_delta, KinkDirection::Left)?;
        worst = worst.max(pr.abs());
        t.push(&[*x, *r, p, pr]);
    }
    t.write(&out.join("kink.csv"))?;
    write_json(
        &out.join("kink.json"),
        &KinkReport {
            vacuum: k.vacuum,
            residual: k.residual,
            printed_residual_max: worst,
        },
    )
}

#[derive(Serialize)]
struct TravelReport {
    r: f64,
    allowed: bool,
    halted_at: Option<f64>,
    points: usize,
}

fn run_travel(a: &TravelArgs, out: &Path) -> Result<()> {
    let params = TravelingParams {
        omega_rho: finite("omega_rho", a.omega_rho)?,
        k_rho: finite("k_rho", a.k_rho)?,
        omega_beta: finite("omega_beta", a.omega_beta)?,
        k_beta: finite("k_beta", a.k_beta)?,
        c: finite("c", a.c)?,
        rho_init: finite("rho_init", a.rho_init)?,
        m_delta: finite("m_delta", a.m_delta)?,
    };
    let (sol, r) = if a.log {
        (traveling_integrate_log(&params, a.u_max, a.du)?, 0.5)
    } else {
        (traveling_integrate(&params, a.u_max, a.du)?, params.r()?)
    };
    let mut t = CsvTable::new(&["u", "rho", "beta", "efield"]);
    for i in 0..sol.u.len() {
        t.push(&[sol.u[i], sol.rho[i], sol.beta[i], sol.efield[i]]);
    }
    t.write(&out.join("travel.csv"))?;
    write_json(
        &out.join("travel.json"),
        &TravelReport {
            r,
            allowed: true,
            halted_at: sol.halted_at,
            points: sol.u.len(),
        },
    )
}

#[derive(Serialize)]
struct QuasiReport {
    res1: f64,
    res2: f64,
    res3: f64,
    res4: f64,
    convention: &'static str,
    form: &'static str,
    residual_minus: f64,
    residual_plus: f64,
}

fn run_quasi(a: &QuasiArgs, out: &Path) -> Result<()> {
    let p = QuasiParams::new(
        a.c1, a.c2, a.k_phi1, a.k_phi2, a.a_rho, a.b_rho, a.k_rho, a.omega_rho, a.c_beta, a.m_delta, a.g_delta, a.rho0,
    )?;
    if !(a.h > 0.0 && a.h.is_finite()) {
        return Err(Error::param("h", "must be positive"));
    }
    let bg = |t: f64, x: f64| match a.background {
        BackgroundArg::Cosine => p.background(x, t),
        BackgroundArg::Zero => (0.0, p.c_beta),
    };
    let rd = SpaceTimeGrid::from_fn(a.nt, a.nx, a.h, a.h, 0.0, 0.0, |t, x| bg(t, x).0);
    let bd = SpaceTimeGrid::from_fn(a.nt, a.nx, a.h, a.h, 0.0, 0.0, |t, x| bg(t, x).1);
    let choice = select_convention(&rd, &bd, p.ratio1, p.ratio2)?;
    let (form, form_name) = match a.form {
        FormArg::Printed => (CoefficientForm::Printed, "printed"),
        FormArg::Consistent => (CoefficientForm::Consistent, "consistent"),
    };
    let mut spec = QuadratureSpec::new(p.ratio1, p.ratio2, choice.convention, form);
    spec.c1 = p.c1;
    spec.c2 = p.c2;
    let st = quadrature_solution(&bd, &rd, &spec)?;
    let res = decomposed_residuals(&st, &rd, &bd, a.m, a.mu)?.norms();

    let mut t = CsvTable::new(&["t", "x", "rho1", "phi1", "rho2", "phi2", "rho_delta", "beta_delta"]);
    for i in 0..a.nt {
        for j in 0..a.nx {
            t.push(&[
                rd.t(i),
                rd.x(j),
                st.rho1.get(i, j),
                st.phi1.get(i, j),
                st.rho2.get(i, j),
                st.phi2.get(i, j),
                rd.get(i, j),
                bd.get(i, j),
            ]);
        }
    }
    t.write(&out.join("quasi_fields.csv"))?;
    write_json(
        &out.join("quasi_report.json"),
        &QuasiReport {
            res1: res[0],
            res2: res[1],
            res3: res[2],
            res4: res[3],
            convention: choice.convention.as_str(),
            form: form_name,
            residual_minus: choice.residual_minus,
            residual_plus: choice.residual_plus,
        },
    )
}

fn set_regime_param(inputs: &mut RegimeInputs, which: RegimeParam, v: f64) {
    match which {
        RegimeParam::Rho0 => inputs.rho0 = v,
        RegimeParam::CondensateFraction => inputs.condensate_fraction = v,
        RegimeParam::P => inputs.p = v,
        RegimeParam::QBeta => inputs.q_beta = v,
        RegimeParam::QDelta => inputs.q_delta = v,
        RegimeParam::Mu => inputs.mu = v,
        RegimeParam::M => inputs.m = v,
    }
}

fn run_regimes(a: &RegimesArgs, out: &Path) -> Result<()> {
    if a.param1 == a.param2 {
        return Err(Error::param("param2", "must differ from param1"));
    }
    let base = RegimeInputs {
        rho0: a.rho0,
        condensate_fraction: a.condensate_fraction,
        p: a.p,
        q_beta: a.q_beta,
        q_delta: a.q_delta,
        mu: a.mu,
        m: a.m,
    };
    let th = RegimeThresholds {
        negligible: a.negligible,
        broken_fraction: a.broken_fraction,
        molecular_ratio: a.molecular_ratio,
    };
    let mut t = CsvTable::new(&["param1", "param2", "label"]);
    for v1 in linspace(a.min1, a.max1, a.n1) {
        for v2 in linspace(a.min2, a.max2, a.n2) {
            let mut inp = base;
            set_regime_param(&mut inp, a.param1, v1);
            set_regime_param(&mut inp, a.param2, v2);
            let label = classify_regime_with(&inp, &th);
            t.push_cells(vec![Cell::Num(v1), Cell::Num(v2), label.as_str().into()]);
        }
    }
    t.write(&out.join("regimes.csv"))
}

/// Rebuild a (t, x) lattice from rows sorted t-major.
fn lattice_from_rows(ts: &[f64], xs: &[f64]) -> Result<(usize, usize, f64, f64)> {
    let n = ts.len();
    let nx = ts.iter().take_while(|&&t| t == ts[0]).count();
    if nx == 0 || n % nx != 0 {
        return Err(Error::GridMismatch("rows do not form a full t-major lattice".into()));
    }
    let nt = n / nx;
    let dx = if nx > 1 { xs[1] - xs[0] } else { 0.0 };
    let dt = if nt > 1 { ts[nx] - ts[0] } else { 0.0 };
    let tol = 1e-9;
    for i in 0..nt {
        for j in 0..nx {
            let k = i * nx + j;
            let (et, ex) = (ts[0] + i as f64 * dt, xs[0] + j as f64 * dx);
            if (ts[k] - et).abs() > tol * (1.0 + et.abs()) || (xs[k] - ex).abs() > tol * (1.0 + ex.abs()) {
                return Err(Error::GridMismatch(format!("row {} is off the uniform lattice", k + 2)));
            }
        }
    }
    Ok((nt, nx, dt, dx))
}

fn run_gauge(input: &Path, out: &Path) -> Result<()> {
    let (header, rows) = read_numeric_csv(input)?;
    let col = |name: &str| {
        header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::param("input", format!("missing column `{name}`")))
    };
    let (it, ix, ith, ib) = (col("t")?, col("x")?, col("theta_n")?, col("beta_delta")?);
    let ts: Vec<f64> = rows.iter().map(|r| r[it]).collect();
    let xs: Vec<f64> = rows.iter().map(|r| r[ix]).collect();
    let (nt, nx, dt, dx) = lattice_from_rows(&ts, &xs)?;
    let grid = |idx: usize| SpaceTimeGrid {
        nt,
        nx,
        dt,
        dx,
        t0: ts[0],
        x0: xs[0],
        data: rows.iter().map(|r| r[idx]).collect(),
    };
    let phases = PhasePair::new(grid(ith), grid(ib))?;
    let e = field_strength(&phases.beta_delta)?;
    let f01 = field_strength_from_potential(&pure_gauge(&phases)?)?;
    let mut t = CsvTable::new(&["t", "x", "efield", "f01"]);
    for k in 0..rows.len() {
        t.push(&[ts[k], xs[k], e.data[k], f01.data[k]]);
    }
    t.write(&out.join("gauge.csv"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algebra_report_passes() {
        let r = algebra_report();
        assert!(r.iter().all(|x| x.pass), "{r:?}");
        assert_eq!(r.len(), 12);
    }

    #[test]
    fn lattice_reconstruction() {
        let ts = [0.0, 0.0, 0.0, 0.5, 0.5, 0.5];
        let xs = [1.0, 1.1, 1.2, 1.0, 1.1, 1.2];
        let (nt, nx, dt, dx) = lattice_from_rows(&ts, &xs).unwrap();
        assert_eq!((nt, nx), (2, 3));
        assert!((dt - 0.5).abs() < 1e-15 && (dx - 0.1).abs() < 1e-12);
        assert!(lattice_from_rows(&ts[..5], &xs[..5]).is_err());
    }

    #[test]
    fn evolve_config_cfl_rejected() {
        let cfg = parse_config("nx = 16\ndx = 0.1\ndt = 0.2\nsteps = 1\nm_delta = 1\ng_delta = 1").unwrap();
        let (f, sc) = evolve_setup(&cfg, Path::new(".")).unwrap();
        let e = evolve(f, sc).unwrap_err();
        assert!(e.to_string().contains("CFL violated"));
        assert_eq!(exit_code(&e), 1);
    }

    #[test]
    fn kink_ic_requires_broken_sign() {
        let cfg = parse_config("nx = 16\ndx = 0.1\ndt = 0.02\nsteps = 1\nm_delta = 1\ng_delta = 6\nic = kink").unwrap();
        assert!(matches!(evolve_setup(&cfg, Path::new(".")), Err(Error::Config { line: 7, .. })));
    }
}
