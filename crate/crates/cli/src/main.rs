//! Command-line surface for the inverse-square scattering library. Every
//! subcommand emits a single JSON or CSV artifact with the fixed schema
//! `{"command", "params", "rows", "checks"}`; the process exit code is 0
//! when all embedded checks pass, otherwise the 1-based index of the
//! first failing check. Grid evaluations run in parallel but output
//! order follows input order, so identical parameters give byte-identical
//! artifacts.

mod report;
mod settings;

use clap::{Parser, Subcommand, ValueEnum};
use isq_core::{
    classify, cross_section, effective_channel, reduce_three_body, reduce_two_body,
    resonance_scan, total_amplitude, verify_bound_scatt_orthogonality, verify_completeness,
    verify_scatt_orthonormality, BoundState, CouplingSign, FluxConfig, IntermediateChannel,
    OrderNu, PhaseClass, QuadratureGrid, ReductionResult, SheetPoint, ThreeBodyMasses,
    TwoBodyMasses,
};
use num_complex::Complex64;
use rayon::prelude::*;
use report::{Cell, Check, Report};
use settings::Settings;
use std::error::Error;
use std::f64::consts::PI;
use std::path::PathBuf;

type Fallible<T> = Result<T, Box<dyn Error>>;

#[derive(Parser)]
#[command(
    name = "isq-scatter",
    version,
    about = "Scattering data for the inverse-square potential in its intermediate coupling window"
)]
struct Cli {
    /// TOML file supplying any parameter not given as a flag
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Output format
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,

    /// Write the artifact to a file instead of stdout
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Copy, Clone, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Copy, Clone, ValueEnum)]
enum PlaneArg {
    K,
    E,
}

#[derive(Subcommand)]
enum Cmd {
    /// Classify a coupling strength into its scale-invariance regime
    Classify {
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<f64>,
    },
    /// Tabulate the reflection amplitude over a momentum grid
    Smatrix {
        #[arg(long)]
        nu: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        g: Option<f64>,
        #[arg(long)]
        k_min: Option<f64>,
        #[arg(long)]
        k_max: Option<f64>,
        #[arg(long)]
        k_steps: Option<usize>,
        /// Cover sheet: the grid argument is 2*pi*sheet
        #[arg(long, allow_hyphen_values = true)]
        sheet: Option<i64>,
    },
    /// Tabulate the pole ladder and residues in the k- or E-plane
    Poles {
        #[arg(long)]
        nu: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        g: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        n_min: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        n_max: Option<i64>,
        #[arg(long, value_enum)]
        plane: Option<PlaneArg>,
    },
    /// Run the eigenfunction checks: norm, orthogonality, orthonormality,
    /// completeness
    SpectrumVerify {
        #[arg(long)]
        nu: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        g: Option<f64>,
        /// Negative control: overlap the bound state against scattering
        /// states of a channel with this (different) coupling; the
        /// resulting check is expected to fail
        #[arg(long, allow_hyphen_values = true)]
        mismatch_g: Option<f64>,
        #[arg(long)]
        tol_norm: Option<f64>,
        #[arg(long)]
        tol_orth: Option<f64>,
        #[arg(long)]
        tol_diag: Option<f64>,
        #[arg(long)]
        tol_cross: Option<f64>,
        #[arg(long)]
        tol_complete: Option<f64>,
    },
    /// Scattering amplitude of the flux problem over an angular grid
    AbAmplitude {
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<f64>,
        /// Boundary scale of each anomalous channel (repeat for the second)
        #[arg(long)]
        kappa: Vec<f64>,
        /// Boundary coupling sign per channel: positive|negative
        #[arg(long)]
        sign: Vec<String>,
        #[arg(long)]
        k: Option<f64>,
        #[arg(long)]
        theta_steps: Option<usize>,
    },
    /// Differential cross section of the flux problem over an angular grid
    AbCrossSection {
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<f64>,
        #[arg(long)]
        kappa: Vec<f64>,
        #[arg(long)]
        sign: Vec<String>,
        #[arg(long)]
        k: Option<f64>,
        #[arg(long)]
        theta_steps: Option<usize>,
    },
    /// Scan channel strength for resonance peaks and match them to
    /// near-axis ladder poles
    ResonanceScan {
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<f64>,
        #[arg(long)]
        kappa: Vec<f64>,
        #[arg(long)]
        sign: Vec<String>,
        #[arg(long)]
        k_min: Option<f64>,
        #[arg(long)]
        k_max: Option<f64>,
        #[arg(long)]
        k_steps: Option<usize>,
        /// Admit poles whose rotation past the bound ray has |cos| below
        /// this threshold
        #[arg(long)]
        cos_threshold: Option<f64>,
    },
    /// Reduce a two- or three-body problem to its Jacobi form and,
    /// optionally, attach the effective flux channels
    Reduce {
        /// two|three
        #[arg(long)]
        bodies: Option<String>,
        /// Particle masses in order (repeat per particle)
        #[arg(long)]
        mass: Vec<f64>,
        /// Reference mass for the scaled-polar form (three-body only)
        #[arg(long)]
        mu0: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<f64>,
        #[arg(long)]
        kappa: Vec<f64>,
        #[arg(long)]
        sign: Vec<String>,
    },
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = init_threads() {
        eprintln!("error: {e}");
        std::process::exit(2);
    }
    match run(&cli) {
        Ok(report) => {
            let settings = match Settings::load(cli.config.as_deref()) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("error: {e}");
                    std::process::exit(2);
                }
            };
            match emit(&cli, &settings, &report) {
                Ok(()) => std::process::exit(report.exit_code()),
                Err(e) => {
                    eprintln!("error: {e}");
                    std::process::exit(2);
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    }
}

fn init_threads() -> Fallible<()> {
    match std::env::var("ISQ_SCATTER_THREADS") {
        Err(_) => Ok(()),
        Ok(raw) => {
            let n: usize = raw
                .trim()
                .parse()
                .map_err(|_| format!("ISQ_SCATTER_THREADS must be a positive integer, got `{raw}`"))?;
            if n == 0 {
                return Err("ISQ_SCATTER_THREADS must be a positive integer".into());
            }
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| format!("thread pool: {e}").into())
        }
    }
}

fn emit(cli: &Cli, settings: &Settings, report: &Report) -> Fallible<()> {
    let format_flag = cli.format.map(|f| match f {
        FormatArg::Json => "json",
        FormatArg::Csv => "csv",
    });
    let format = settings.str_or("format", format_flag, "json")?;
    let text = match format.as_str() {
        "json" => report.to_json(),
        "csv" => report.to_csv(),
        other => return Err(format!("unknown format `{other}` (use json|csv)").into()),
    };
    let out = match &cli.out {
        Some(p) => Some(p.clone()),
        None => {
            let from_file = settings.str_or("out", None, "")?;
            if from_file.is_empty() {
                None
            } else {
                Some(PathBuf::from(from_file))
            }
        }
    };
    match out {
        Some(path) => std::fs::write(&path, text)
            .map_err(|e| format!("cannot write {}: {e}", path.display()).into()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> Fallible<Report> {
    let s = Settings::load(cli.config.as_deref())?;
    match &cli.cmd {
        Cmd::Classify { lambda } => cmd_classify(&s, *lambda),
        Cmd::Smatrix {
            nu,
            g,
            k_min,
            k_max,
            k_steps,
            sheet,
        } => cmd_smatrix(&s, *nu, *g, *k_min, *k_max, *k_steps, *sheet),
        Cmd::Poles {
            nu,
            g,
            n_min,
            n_max,
            plane,
        } => cmd_poles(&s, *nu, *g, *n_min, *n_max, *plane),
        Cmd::SpectrumVerify {
            nu,
            g,
            mismatch_g,
            tol_norm,
            tol_orth,
            tol_diag,
            tol_cross,
            tol_complete,
        } => cmd_spectrum_verify(
            &s,
            *nu,
            *g,
            *mismatch_g,
            [*tol_norm, *tol_orth, *tol_diag, *tol_cross, *tol_complete],
        ),
        Cmd::AbAmplitude {
            alpha,
            kappa,
            sign,
            k,
            theta_steps,
        } => cmd_ab_table(&s, *alpha, kappa, sign, *k, *theta_steps, AbQuantity::Amplitude),
        Cmd::AbCrossSection {
            alpha,
            kappa,
            sign,
            k,
            theta_steps,
        } => cmd_ab_table(&s, *alpha, kappa, sign, *k, *theta_steps, AbQuantity::CrossSection),
        Cmd::ResonanceScan {
            alpha,
            kappa,
            sign,
            k_min,
            k_max,
            k_steps,
            cos_threshold,
        } => cmd_resonance_scan(&s, *alpha, kappa, sign, *k_min, *k_max, *k_steps, *cos_threshold),
        Cmd::Reduce {
            bodies,
            mass,
            mu0,
            alpha,
            kappa,
            sign,
        } => cmd_reduce(&s, bodies.as_deref(), mass, *mu0, *alpha, kappa, sign),
    }
}

fn make_channel(s: &Settings, nu: Option<f64>, g: Option<f64>) -> Fallible<IntermediateChannel> {
    let nu = OrderNu::new(s.f64_req("nu", nu)?)?;
    let g = s.f64_req("g", g)?;
    Ok(IntermediateChannel::from_coupling(nu, g)?)
}

fn push_channel_params(report: &mut Report, channel: &IntermediateChannel) {
    report.param("nu", Cell::Float(channel.nu().get()));
    report.param("g", Cell::Float(channel.coupling_g()));
    report.param(
        "sign",
        Cell::text(match channel.sign() {
            CouplingSign::Positive => "positive",
            CouplingSign::Negative => "negative",
        }),
    );
    report.param("kappa0", Cell::Float(channel.kappa0()));
}

fn log_grid(k_min: f64, k_max: f64, steps: usize) -> Fallible<Vec<f64>> {
    if !(k_min > 0.0 && k_max > k_min) {
        return Err("need 0 < k-min < k-max".into());
    }
    if steps < 2 {
        return Err("k-steps must be at least 2".into());
    }
    let ratio = k_max / k_min;
    Ok((0..steps)
        .map(|i| k_min * ratio.powf(i as f64 / (steps - 1) as f64))
        .collect())
}

fn cmd_classify(s: &Settings, lambda: Option<f64>) -> Fallible<Report> {
    let lambda = s.f64_req("lambda", lambda)?;
    let (label, exponent) = match classify(lambda) {
        PhaseClass::ContinuousScale => ("continuous-scale", 0.0),
        PhaseClass::DiscretePhase { nu } => ("discrete-phase", nu),
        PhaseClass::DiscreteScale { exponent } => ("discrete-scale", exponent),
        PhaseClass::CriticalLower => ("critical-lower", 0.0),
        PhaseClass::CriticalUpper => ("critical-upper", 0.0),
    };
    let mut report = Report::new("classify", vec!["lambda", "class", "exponent"]);
    report.param("lambda", Cell::Float(lambda));
    report.push_row(vec![
        Cell::Float(lambda),
        Cell::text(label),
        Cell::Float(exponent),
    ]);
    Ok(report)
}

fn cmd_smatrix(
    s: &Settings,
    nu: Option<f64>,
    g: Option<f64>,
    k_min: Option<f64>,
    k_max: Option<f64>,
    k_steps: Option<usize>,
    sheet: Option<i64>,
) -> Fallible<Report> {
    let channel = make_channel(s, nu, g)?;
    let k_min = s.f64_or("k_min", k_min, 0.1)?;
    let k_max = s.f64_or("k_max", k_max, 10.0)?;
    let steps = s.usize_or("k_steps", k_steps, 200)?;
    let sheet = s.i64_or("sheet", sheet, 0)?;
    let ks = log_grid(k_min, k_max, steps)?;
    let angle = 2.0 * PI * sheet as f64;

    let values: Vec<(f64, Option<Complex64>)> = ks
        .par_iter()
        .map(|&k| {
            let point = SheetPoint::new(k, angle).expect("grid momenta are positive");
            (k, channel.s_matrix(point).ok())
        })
        .collect();

    let mut report = Report::new(
        "smatrix",
        vec!["k", "re_s", "im_s", "abs_s", "arg_s", "pole"],
    );
    push_channel_params(&mut report, &channel);
    report.param("sheet", Cell::Int(sheet));
    report.param("k_min", Cell::Float(k_min));
    report.param("k_max", Cell::Float(k_max));
    report.param("k_steps", Cell::Int(steps as i64));

    let mut unitarity_dev: f64 = 0.0;
    for (k, value) in &values {
        match value {
            Some(sv) => {
                unitarity_dev = unitarity_dev.max((sv.norm() - 1.0).abs());
                report.push_row(vec![
                    Cell::Float(*k),
                    Cell::Float(sv.re),
                    Cell::Float(sv.im),
                    Cell::Float(sv.norm()),
                    Cell::Float(sv.arg()),
                    Cell::Int(0),
                ]);
            }
            None => report.push_row(vec![
                Cell::Float(*k),
                Cell::Float(0.0),
                Cell::Float(0.0),
                Cell::Float(0.0),
                Cell::Float(0.0),
                Cell::Int(1),
            ]),
        }
    }
    if sheet == 0 {
        report
            .checks
            .push(Check::upper("unitarity_max_dev", unitarity_dev, 1e-11));
    }
    Ok(report)
}

fn cmd_poles(
    s: &Settings,
    nu: Option<f64>,
    g: Option<f64>,
    n_min: Option<i64>,
    n_max: Option<i64>,
    plane: Option<PlaneArg>,
) -> Fallible<Report> {
    let channel = make_channel(s, nu, g)?;
    let n_min = s.i64_or("n_min", n_min, -3)?;
    let n_max = s.i64_or("n_max", n_max, 3)?;
    if n_min > n_max {
        return Err("need n-min <= n-max".into());
    }
    let plane_flag = plane.map(|p| match p {
        PlaneArg::K => "k",
        PlaneArg::E => "e",
    });
    let plane = s.str_or("plane", plane_flag, "k")?;
    let (n_lo, n_hi) = (
        i32::try_from(n_min).map_err(|_| "n-min out of range")?,
        i32::try_from(n_max).map_err(|_| "n-max out of range")?,
    );
    let ladder = match plane.as_str() {
        "k" => channel.pole_ladder(n_lo, n_hi),
        "e" => channel.energy_ladder(n_lo, n_hi),
        other => return Err(format!("unknown plane `{other}` (use k|e)").into()),
    };

    let mut report = Report::new(
        "poles",
        vec![
            "n", "re", "im", "modulus", "argument", "sheet", "res_re", "res_im",
        ],
    );
    push_channel_params(&mut report, &channel);
    report.param("n_min", Cell::Int(n_min));
    report.param("n_max", Cell::Int(n_max));
    report.param("plane", Cell::text(plane.clone()));

    for entry in &ladder.entries {
        let z = entry.location.to_complex();
        report.push_row(vec![
            Cell::Int(entry.n as i64),
            Cell::Float(z.re),
            Cell::Float(z.im),
            Cell::Float(entry.location.modulus()),
            Cell::Float(entry.location.argument()),
            Cell::Int(entry.sheet),
            Cell::Float(entry.residue.re),
            Cell::Float(entry.residue.im),
        ]);
    }
    if plane == "k" {
        if let Some(entry) = ladder
            .entries
            .iter()
            .find(|e| e.n == 0)
            .or_else(|| ladder.entries.first())
        {
            let numeric = channel.residue_numeric(entry.location);
            let rel = (numeric - entry.residue).norm() / entry.residue.norm();
            report.checks.push(Check::upper(
                format!("residue_contour_rel_dev_n{}", entry.n),
                rel,
                1e-6,
            ));
        }
    }
    Ok(report)
}

fn cmd_spectrum_verify(
    s: &Settings,
    nu: Option<f64>,
    g: Option<f64>,
    mismatch_g: Option<f64>,
    tols: [Option<f64>; 5],
) -> Fallible<Report> {
    let channel = make_channel(s, nu, g)?;
    let mismatch_g = s.f64_opt("mismatch_g", mismatch_g)?;
    let tol_norm = s.f64_or("tol_norm", tols[0], 1e-6)?;
    let tol_orth = s.f64_or("tol_orth", tols[1], 1e-6)?;
    let tol_diag = s.f64_or("tol_diag", tols[2], 1e-4)?;
    let tol_cross = s.f64_or("tol_cross", tols[3], 1e-6)?;
    let tol_complete = s.f64_or("tol_complete", tols[4], 1e-4)?;

    let nu_val = channel.nu().get();
    let kappa0 = channel.kappa0();
    let has_bound = channel.sign() == CouplingSign::Positive;

    let mut report = Report::new("spectrum-verify", vec!["k_max", "rel_error"]);
    push_channel_params(&mut report, &channel);
    if let Some(mg) = mismatch_g {
        report.param("mismatch_g", Cell::Float(mg));
    }

    let bound = if has_bound {
        Some(BoundState::new(channel)?)
    } else {
        None
    };

    if let Some(b) = &bound {
        report.checks.push(Check::upper(
            "bound_norm_dev",
            (b.quadrature_norm() - 1.0).abs(),
            tol_norm,
        ));
        let ks = [0.3 * kappa0, kappa0, 3.0 * kappa0];
        let orth = verify_bound_scatt_orthogonality(b, &channel, &ks)?;
        report.checks.push(Check::upper(
            "bound_scatt_orthogonality_max",
            orth.max_abs,
            tol_orth,
        ));
    }

    let packets = verify_scatt_orthonormality(&channel, kappa0, 2.0 * kappa0, 0.05 * kappa0)?;
    report.checks.push(Check::upper(
        "packet_diag_rel_err",
        packets.diag_rel_err,
        tol_diag,
    ));
    report.checks.push(Check::upper(
        "packet_cross_to_diag",
        packets.cross_to_diag,
        tol_cross,
    ));

    let r_min = QuadratureGrid::singular_head_min(nu_val, 1e-12) / kappa0.max(1.0);
    let grid = QuadratureGrid::graded(r_min, 8.0 / kappa0, 21.0 * kappa0);
    let center = 3.0 / kappa0;
    let width_sq = 0.5 / (kappa0 * kappa0);
    let bump = move |r: f64| (-(r - center) * (r - center) / width_sq).exp();
    let checkpoints = [5.0 * kappa0, 10.0 * kappa0, 20.0 * kappa0];
    let complete = verify_completeness(&channel, bump, &grid, &checkpoints, true)?;
    for &(k_max, err) in &complete.checkpoints {
        report.push_row(vec![Cell::Float(k_max), Cell::Float(err)]);
    }
    let final_err = complete.checkpoints.last().unwrap().1;
    report
        .checks
        .push(Check::upper("completeness_rel_error", final_err, tol_complete));
    let worst_ratio = complete
        .checkpoints
        .windows(2)
        .map(|w| w[1].1 / w[0].1)
        .fold(0.0f64, f64::max);
    report.checks.push(Check::upper(
        "completeness_monotone_ratio",
        worst_ratio,
        1.0,
    ));

    if has_bound {
        let ablated = verify_completeness(&channel, bump, &grid, &checkpoints[2..], false)?;
        let ratio = final_err / ablated.checkpoints[0].1;
        report
            .checks
            .push(Check::upper("bound_ablation_ratio", ratio, 0.1));
    }

    if let Some(mg) = mismatch_g {
        let b = bound
            .as_ref()
            .ok_or("mismatch control needs a bound state; use g > 0")?;
        let other = IntermediateChannel::from_coupling(channel.nu(), mg)?;
        if other == channel {
            return Err("mismatch-g equals the channel coupling; nothing to contrast".into());
        }
        let ks = [0.3 * kappa0, kappa0, 3.0 * kappa0];
        let orth = verify_bound_scatt_orthogonality(b, &other, &ks)?;
        report.checks.push(Check::upper(
            "mismatched_orthogonality_max",
            orth.max_abs,
            tol_orth,
        ));
    }
    Ok(report)
}

enum AbQuantity {
    Amplitude,
    CrossSection,
}

fn resolve_flux(
    s: &Settings,
    alpha: Option<f64>,
    kappa_flags: &[f64],
    sign_flags: &[String],
) -> Fallible<FluxConfig> {
    let alpha = s.f64_req("alpha", alpha)?;
    let mut kappas = s.f64_list("kappa", kappa_flags)?;
    match kappas.len() {
        0 => kappas = vec![1.0, 1.0],
        1 => kappas.push(kappas[0]),
        2 => {}
        n => return Err(format!("expected at most 2 kappa values, got {n}").into()),
    }
    let sign_names = s.str_list("sign", sign_flags)?;
    let mut signs = Vec::with_capacity(2);
    for name in &sign_names {
        signs.push(match name.as_str() {
            "positive" | "pos" | "+" => CouplingSign::Positive,
            "negative" | "neg" | "-" => CouplingSign::Negative,
            other => return Err(format!("unknown sign `{other}` (use positive|negative)").into()),
        });
    }
    match signs.len() {
        0 => signs = vec![CouplingSign::Positive; 2],
        1 => signs.push(signs[0]),
        2 => {}
        n => return Err(format!("expected at most 2 sign values, got {n}").into()),
    }
    Ok(FluxConfig::new(
        alpha,
        [(signs[0], kappas[0]), (signs[1], kappas[1])],
    )?)
}

fn push_flux_params(report: &mut Report, cfg: &FluxConfig) {
    report.param("alpha", Cell::Float(cfg.alpha()));
    let entries = cfg.entries();
    for (i, entry) in entries.iter().enumerate() {
        let (n_name, nu_name, kappa_name, sign_name) = match i {
            0 => ("anomalous_n_1", "nu_1", "kappa_1", "sign_1"),
            _ => ("anomalous_n_2", "nu_2", "kappa_2", "sign_2"),
        };
        report.param(n_name, Cell::Int(entry.n));
        report.param(nu_name, Cell::Float(entry.channel.nu().get()));
        report.param(kappa_name, Cell::Float(entry.channel.kappa0()));
        report.param(
            sign_name,
            Cell::text(match entry.channel.sign() {
                CouplingSign::Positive => "positive",
                CouplingSign::Negative => "negative",
            }),
        );
    }
}

/// Angular grid over (0, 2*pi), clamped at least 1e-3 away from the
/// forward direction where the amplitude's defining series has no Abel
/// limit.
fn theta_grid(steps: usize) -> Vec<f64> {
    (1..=steps)
        .map(|j| {
            let theta = 2.0 * PI * j as f64 / (steps as f64 + 1.0);
            theta.clamp(1e-3, 2.0 * PI - 1e-3)
        })
        .collect()
}

fn cmd_ab_table(
    s: &Settings,
    alpha: Option<f64>,
    kappa_flags: &[f64],
    sign_flags: &[String],
    k: Option<f64>,
    theta_steps: Option<usize>,
    quantity: AbQuantity,
) -> Fallible<Report> {
    let cfg = resolve_flux(s, alpha, kappa_flags, sign_flags)?;
    let k = s.f64_req("k", k)?;
    if !(k > 0.0 && k.is_finite()) {
        return Err("k must be positive".into());
    }
    let steps = s.usize_or("theta_steps", theta_steps, 64)?;
    if steps == 0 {
        return Err("theta-steps must be positive".into());
    }
    let thetas = theta_grid(steps);

    let mut report = match quantity {
        AbQuantity::Amplitude => {
            let rows: Vec<(f64, Complex64)> = thetas
                .par_iter()
                .map(|&theta| total_amplitude(&cfg, k, theta).map(|f| (theta, f)))
                .collect::<Result<_, _>>()?;
            let mut report = Report::new("ab-amplitude", vec!["theta", "re_f", "im_f", "abs_f"]);
            for (theta, f) in rows {
                report.push_row(vec![
                    Cell::Float(theta),
                    Cell::Float(f.re),
                    Cell::Float(f.im),
                    Cell::Float(f.norm()),
                ]);
            }
            report
        }
        AbQuantity::CrossSection => {
            let rows: Vec<(f64, f64)> = thetas
                .par_iter()
                .map(|&theta| cross_section(&cfg, k, theta).map(|d| (theta, d)))
                .collect::<Result<_, _>>()?;
            let mut report = Report::new("ab-cross-section", vec!["theta", "dsigma"]);
            for (theta, d) in rows {
                report.push_row(vec![Cell::Float(theta), Cell::Float(d)]);
            }
            report
        }
    };
    push_flux_params(&mut report, &cfg);
    report.param("k", Cell::Float(k));
    report.param("theta_steps", Cell::Int(steps as i64));
    Ok(report)
}

#[allow(clippy::too_many_arguments)]
fn cmd_resonance_scan(
    s: &Settings,
    alpha: Option<f64>,
    kappa_flags: &[f64],
    sign_flags: &[String],
    k_min: Option<f64>,
    k_max: Option<f64>,
    k_steps: Option<usize>,
    cos_threshold: Option<f64>,
) -> Fallible<Report> {
    let cfg = resolve_flux(s, alpha, kappa_flags, sign_flags)?;
    let k_min = s.f64_or("k_min", k_min, 0.1)?;
    let k_max = s.f64_or("k_max", k_max, 3.0)?;
    let samples = s.usize_or("k_steps", k_steps, 600)?;
    let threshold = s.f64_or("cos_threshold", cos_threshold, 0.2)?;
    if !(k_min > 0.0 && k_max > k_min) {
        return Err("need 0 < k-min < k-max".into());
    }
    if samples < 16 {
        return Err("k-steps must be at least 16 for a scan".into());
    }
    if threshold <= 0.0 {
        return Err("cos-threshold must be positive".into());
    }

    let peaks = resonance_scan(&cfg, k_min, k_max, samples, threshold)?;

    let mut report = Report::new(
        "resonance-scan",
        vec![
            "n",
            "ell",
            "predicted_k",
            "k_peak",
            "height",
            "match_radius",
            "rel_offset",
        ],
    );
    push_flux_params(&mut report, &cfg);
    report.param("k_min", Cell::Float(k_min));
    report.param("k_max", Cell::Float(k_max));
    report.param("k_steps", Cell::Int(samples as i64));
    report.param("cos_threshold", Cell::Float(threshold));

    for peak in &peaks {
        let rel_offset = (peak.k_peak - peak.predicted_k).abs() / peak.predicted_k;
        report.push_row(vec![
            Cell::Int(peak.n),
            Cell::Int(peak.ell),
            Cell::Float(peak.predicted_k),
            Cell::Float(peak.k_peak),
            Cell::Float(peak.height),
            Cell::Float(peak.match_radius),
            Cell::Float(rel_offset),
        ]);
        report.checks.push(Check::upper(
            format!("peak_n{}_ell{}_rel_offset", peak.n, peak.ell),
            rel_offset,
            0.02,
        ));
    }
    Ok(report)
}

fn push_matrix(report: &mut Report, prefix: &str, matrix: &[Vec<f64>]) {
    for (i, row) in matrix.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            report.push_row(vec![Cell::text(format!("{prefix}_{i}{j}")), Cell::Float(v)]);
        }
    }
}

fn cmd_reduce(
    s: &Settings,
    bodies: Option<&str>,
    mass_flags: &[f64],
    mu0: Option<f64>,
    alpha: Option<f64>,
    kappa_flags: &[f64],
    sign_flags: &[String],
) -> Fallible<Report> {
    let bodies = s.str_or("bodies", bodies, "")?;
    let masses = s.f64_list("mass", mass_flags)?;
    let mu0 = s.f64_opt("mu0", mu0)?;
    let alpha = s.f64_opt("alpha", alpha)?;

    let reduction: ReductionResult = match bodies.as_str() {
        "two" => {
            if masses.len() != 2 {
                return Err(format!("two-body reduction needs 2 masses, got {}", masses.len()).into());
            }
            if mu0.is_some() {
                return Err("mu0 applies only to the three-body reduction".into());
            }
            reduce_two_body(&TwoBodyMasses::new(masses[0], masses[1])?)
        }
        "three" => {
            if masses.len() != 3 {
                return Err(
                    format!("three-body reduction needs 3 masses, got {}", masses.len()).into(),
                );
            }
            let m = match mu0 {
                Some(r) => ThreeBodyMasses::with_reference(masses[0], masses[1], masses[2], r)?,
                None => ThreeBodyMasses::new(masses[0], masses[1], masses[2])?,
            };
            reduce_three_body(&m)
        }
        "" => return Err("missing required parameter --bodies (two|three)".into()),
        other => return Err(format!("unknown bodies `{other}` (use two|three)").into()),
    };

    let mut report = Report::new("reduce", vec!["quantity", "value"]);
    report.param("bodies", Cell::text(bodies));
    for (i, &m) in masses.iter().enumerate() {
        let name: &'static str = ["m1", "m2", "m3"][i];
        report.param(name, Cell::Float(m));
    }

    for (i, &mu) in reduction.reduced_masses.iter().enumerate() {
        report.push_row(vec![
            Cell::text(format!("mu_{}", i + 1)),
            Cell::Float(mu),
        ]);
    }
    push_matrix(&mut report, "jacobi_forward", &reduction.jacobi_forward);
    push_matrix(&mut report, "jacobi_backward", &reduction.jacobi_backward);
    report.push_row(vec![
        Cell::text("kinetic_prefactor"),
        Cell::Float(reduction.kinetic_prefactor),
    ]);
    report.push_row(vec![
        Cell::text("reference_mass"),
        Cell::Float(reduction.reference_mass),
    ]);

    if let Some(alpha) = alpha {
        let cfg = resolve_flux(s, Some(alpha), kappa_flags, sign_flags)?;
        let effective = effective_channel(&reduction, alpha, {
            let e = cfg.entries();
            [
                (e[0].channel.sign(), e[0].channel.kappa0()),
                (e[1].channel.sign(), e[1].channel.kappa0()),
            ]
        })?;
        report.param("alpha", Cell::Float(alpha));
        for (i, entry) in effective.config.entries().iter().enumerate() {
            report.push_row(vec![
                Cell::text(format!("effective_n_{}", i + 1)),
                Cell::Float(entry.n as f64),
            ]);
            report.push_row(vec![
                Cell::text(format!("effective_nu_{}", i + 1)),
                Cell::Float(entry.channel.nu().get()),
            ]);
            report.push_row(vec![
                Cell::text(format!("effective_kappa_{}", i + 1)),
                Cell::Float(entry.channel.kappa0()),
            ]);
        }
    }

    report.checks.push(Check::upper(
        "round_trip_defect",
        reduction.round_trip_defect(),
        1e-14,
    ));
    report.checks.push(Check::upper(
        "polar_congruence_defect",
        reduction.polar_congruence_defect(),
        1e-14,
    ));
    Ok(report)
}
