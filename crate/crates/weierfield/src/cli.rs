//! Batch command-line front end: config parsing, experiment orchestration,
//! deterministic seeding, and JSON/CSV report emission.

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::error::{Error, Result};
use crate::field::{check_functional_equations, HarmonicField, WeierstrassField, MIN_Y};
use crate::lattice::NadicCube;
use crate::linalg::normalize;
use crate::qr;
use crate::report::{config_hash, OutputWriter};
use crate::sampling::SampleStream;
use crate::slow_points;
use crate::stopping;
use crate::trig;

#[derive(Parser)]
#[command(
    name = "weierfield",
    version,
    about = "Weierstrass-type fields on the upper half-space: jets, stopping-time Cantor trees, weak quasi-regularity and slow-point surveys"
)]
struct Cli {
    /// Experiment configuration file (JSON).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory (overrides the config's output_dir).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Seed override for all sampled estimators.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker threads (default: available cores). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate field jets at points read from a file (one "x₁ … x_d y" row each).
    Eval {
        /// Points file: comma- or whitespace-separated floats, d+1 per row.
        #[arg(long)]
        points: PathBuf,
    },
    /// Build the stopping-time Cantor tree, verify the ray certificate, and
    /// emit the dimension lower bound.
    Cantor,
    /// Sweep weak quasi-regularity ratios over all N-adic cubes up to the
    /// configured depth.
    Qr,
    /// Vertical-ray gradient profiles at sampled boundary points.
    Ray,
    /// Directional divergence survey over shrinking y-floors.
    Survey,
    /// Condition-H certificates for a sampled direction set.
    Condh,
    /// Zygmund and Bloch seminorm estimates with their cross-constant.
    Seminorms,
    /// Internal consistency battery; nonzero exit on any failure.
    Selftest,
}

/// Parses arguments, runs the command, and returns the process exit code:
/// 0 success, 2 config error, 3 numeric validation failure.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            let class = match &e {
                Error::Config(_) | Error::Json(_) => "config",
                _ => "numeric",
            };
            eprintln!("error[{class}]: {e}");
            match class {
                "config" => 2,
                _ => 3,
            }
        }
    }
}

fn execute(cli: Cli) -> Result<()> {
    let config_path = cli
        .config
        .ok_or_else(|| Error::config("--config PATH is required"))?;
    let mut cfg = ExperimentConfig::load(&config_path)?;
    if let Some(seed) = cli.seed {
        cfg.sampling.seed = seed;
    }
    if let Some(out) = cli.out {
        cfg.output_dir = out.to_string_lossy().into_owned();
    }
    if let Some(threads) = cli.threads.or(cfg.threads) {
        if threads == 0 {
            return Err(Error::config("threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| Error::config(format!("thread pool: {e}")))?;
    }

    let phi = cfg.build_phi()?;
    if phi.symmetrization_defect() > 1e-12 {
        eprintln!(
            "warning: phi terms were not Hermitian-symmetric (defect {:.3e}); coefficients were symmetrized",
            phi.symmetrization_defect()
        );
    }

    let hash = config_hash(&cfg)?;
    let out_dir = PathBuf::from(&cfg.output_dir);
    let mut writer = OutputWriter::new(&out_dir, hash)?;

    let name = match &cli.command {
        Command::Eval { points } => {
            cmd_eval(&cfg, &mut writer, points)?;
            "eval"
        }
        Command::Cantor => {
            cmd_cantor(&cfg, &mut writer)?;
            "cantor"
        }
        Command::Qr => {
            cmd_qr(&cfg, &mut writer)?;
            "qr"
        }
        Command::Ray => {
            cmd_ray(&cfg, &mut writer)?;
            "ray"
        }
        Command::Survey => {
            cmd_survey(&cfg, &mut writer)?;
            "survey"
        }
        Command::Condh => {
            cmd_condh(&cfg, &mut writer)?;
            "condh"
        }
        Command::Seminorms => {
            cmd_seminorms(&cfg, &mut writer)?;
            "seminorms"
        }
        Command::Selftest => {
            cmd_selftest(&cfg, &mut writer)?;
            "selftest"
        }
    };
    writer.finish(name)
}

fn parse_point_line(line: &str, dim: usize, line_no: usize) -> Result<(Vec<f64>, f64)> {
    let fields: Vec<&str> = line
        .split([',', ' ', '\t'])
        .filter(|s| !s.is_empty())
        .collect();
    if fields.len() != dim + 1 {
        return Err(Error::config(format!(
            "points line {line_no}: expected {} fields, found {}",
            dim + 1,
            fields.len()
        )));
    }
    let values: Vec<f64> = fields
        .iter()
        .map(|s| {
            s.parse::<f64>()
                .map_err(|_| Error::config(format!("points line {line_no}: bad float '{s}'")))
        })
        .collect::<Result<_>>()?;
    let (x, y) = values.split_at(dim);
    Ok((x.to_vec(), y[0]))
}

fn cmd_eval(cfg: &ExperimentConfig, w: &mut OutputWriter, points: &PathBuf) -> Result<()> {
    let field = cfg.build_field()?;
    let d = field.dim();
    let text = std::fs::read_to_string(points)
        .map_err(|e| Error::config(format!("cannot read points file: {e}")))?;
    let mut parsed = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let (x, y) = parse_point_line(line, d, i + 1)?;
        if y < MIN_Y {
            return Err(Error::numeric(format!(
                "points line {}: height {y:e} below the evaluation floor {MIN_Y:e}",
                i + 1
            )));
        }
        parsed.push((x, y));
    }

    let jets: Vec<Result<crate::field::HarmonicJet>> = parsed
        .par_iter()
        .map(|(x, y)| field.jet(x, *y))
        .collect();

    let mut header: Vec<String> = (1..=d).map(|i| format!("x{i}")).collect();
    header.push("y".into());
    header.push("value".into());
    for i in 1..=d + 1 {
        header.push(format!("g{i}"));
    }
    for i in 1..=d + 1 {
        for j in i..=d + 1 {
            header.push(format!("h{i}_{j}"));
        }
    }
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut out = w.csv_writer("jets.csv", &header_refs)?;
    for ((x, y), jet) in parsed.iter().zip(jets) {
        let jet = jet?;
        let mut row: Vec<String> = x.iter().map(|v| format!("{v}")).collect();
        row.push(format!("{y}"));
        row.push(format!("{}", jet.value));
        row.extend(jet.gradient.iter().map(|v| format!("{v}")));
        row.extend(jet.hessian.upper_triangular().iter().map(|v| format!("{v}")));
        out.write_record(&row)
            .map_err(|e| Error::numeric(format!("csv write failed: {e}")))?;
    }
    out.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct TreeNodeDump {
    address: String,
    avg_grad: Vec<f64>,
    status: &'static str,
    deviation: f64,
    parent: usize,
}

#[derive(Serialize)]
struct TreeGenerationDump {
    summary: stopping::GenerationSummary,
    nodes: Vec<TreeNodeDump>,
}

#[derive(Serialize)]
struct TreeDump {
    params: stopping::CantorParams,
    root_address: String,
    root_avg: Vec<f64>,
    generations: Vec<TreeGenerationDump>,
    terminated_early: bool,
    validation: stopping::TreeValidation,
}

#[derive(Serialize)]
struct DimBoundDump {
    measured_alpha: Option<f64>,
    measured_beta: Option<f64>,
    dim: usize,
    bound: Option<stopping::DimBound>,
    makarov_bound_raw: Option<f64>,
    makarov_bound_clamped: Option<f64>,
    c_const_calibrated: Option<f64>,
    bloch_estimate: f64,
    warning: Option<String>,
}

fn cmd_cantor(cfg: &ExperimentConfig, w: &mut OutputWriter) -> Result<()> {
    let field = cfg.build_field()?;
    let root = cfg.root_cube()?;
    let params = cfg.cantor_params()?;
    let radius = cfg.stopping_radius()?;

    let tree = stopping::cantor_build(&field, &root, &params)?;
    w.record_timing("cantor_build");
    let validation = stopping::validate_tree(&field, &tree)?;
    w.record_timing("validate_tree");

    let total_depth = params.j_max * params.k_generations;
    let y_floor = (root.side() * (root.arity() as f64).powi(-(total_depth as i32)))
        .max(10.0 * MIN_Y);
    let ray = stopping::verify_bounded_ray(&field, &tree, radius, y_floor, cfg.sampling.points_per_decade)?;
    let radius_offenders = stopping::check_gradient_radii(&tree, radius);
    w.record_timing("verify_bounded_ray");

    // Seminorm calibration for the radius-driven bound.
    let bloch = qr::bloch_seminorm(
        &field,
        &root.corner(),
        root.side(),
        (cfg.sampling.y_min.max(MIN_Y * 10.0), cfg.sampling.y_max),
        cfg.sampling.count,
        cfg.sampling.seed,
    )?;
    let c_const = if bloch.value > 0.0 {
        Some(stopping::calibrate_c_const(
            &field,
            &root,
            3.min(params.j_max),
            params.quad_m,
            bloch.value,
        )?)
    } else {
        None
    };

    let alpha = tree.measured_alpha();
    let beta = tree.measured_beta();
    let (bound, warning) = match (alpha, beta) {
        (Some(a), Some(b)) if b > 0.0 => match stopping::hungerford_bound(a, b, root.dim()) {
            Ok(db) => {
                let warn = if db.valid {
                    None
                } else {
                    Some("measured parameters violate alpha < beta^(1/d) < 1; no bound claimed".to_string())
                };
                (Some(db), warn)
            }
            Err(e) => (None, Some(format!("dimension bound not evaluable: {e}"))),
        },
        (Some(_), Some(_)) => (
            None,
            Some("some stage accepted no children (beta = 0); no bound claimed".to_string()),
        ),
        _ => (
            None,
            Some("no stopping escape observed; no bound claimed".to_string()),
        ),
    };
    let makarov_raw = match (c_const, beta) {
        (Some(c), Some(b)) if b > 0.0 => Some(stopping::makarov_bound(
            root.dim(),
            c,
            bloch.value,
            b,
            radius,
            params.theta,
            root.arity(),
        )?),
        _ => None,
    };

    let nodes_dump = |gen: &[stopping::CantorNode]| -> Vec<TreeNodeDump> {
        gen.iter()
            .map(|n| TreeNodeDump {
                address: n.cube.address(),
                avg_grad: n.avg_grad.clone(),
                status: "stopped",
                deviation: n.deviation,
                parent: n.parent,
            })
            .collect()
    };
    let dump = TreeDump {
        params: tree.params,
        root_address: tree.root.address(),
        root_avg: tree.root_avg.clone(),
        generations: tree
            .generations
            .iter()
            .zip(&tree.summaries)
            .map(|(g, s)| TreeGenerationDump {
                summary: s.clone(),
                nodes: nodes_dump(g),
            })
            .collect(),
        terminated_early: tree.terminated_early,
        validation,
    };
    w.write_json("cantor_tree.json", &dump)?;
    w.write_json(
        "ray_check.json",
        &serde_json::json!({
            "ray": ray,
            "radius": radius,
            "gradient_radius_offenders": radius_offenders,
        }),
    )?;
    let bound_dump = DimBoundDump {
        measured_alpha: alpha,
        measured_beta: beta,
        dim: root.dim(),
        bound,
        makarov_bound_raw: makarov_raw,
        makarov_bound_clamped: makarov_raw.map(|v| v.max(0.0)),
        c_const_calibrated: c_const,
        bloch_estimate: bloch.value,
        warning: warning.clone(),
    };
    w.write_json("dim_bound.json", &bound_dump)?;
    if let Some(msg) = warning {
        eprintln!("warning: {msg}");
    }
    Ok(())
}

fn cmd_qr(cfg: &ExperimentConfig, w: &mut OutputWriter) -> Result<()> {
    let spec = cfg
        .qr
        .as_ref()
        .ok_or_else(|| Error::config("qr section required for this command"))?;
    let field = cfg.build_field()?;
    let root = cfg.root_cube()?;
    let cubes = root.descendants_up_to(spec.sweep_depth);
    let reports: Vec<Result<qr::QRReport>> = cubes
        .par_iter()
        .map(|q| qr::weak_qr_ratio(&field, q, spec.n, cfg.lattice.quad_nodes))
        .collect();

    let mut out = w.csv_writer(
        "qr_sweep.csv",
        &["cube_address", "N", "numerator", "denominator", "gamma_sq", "flagged"],
    )?;
    for r in reports {
        let r = r?;
        out.write_record([
            r.cube.as_str(),
            &r.n.to_string(),
            &format!("{}", r.numerator),
            &format!("{}", r.denominator),
            &r.gamma_sq.map_or(String::new(), |g| format!("{g}")),
            &r.flagged_infinite.to_string(),
        ])
        .map_err(|e| Error::numeric(format!("csv write failed: {e}")))?;
    }
    out.flush()?;
    Ok(())
}

fn sample_points(cfg: &ExperimentConfig, root: &NadicCube) -> Vec<Vec<f64>> {
    let mut stream = SampleStream::new(cfg.sampling.seed);
    (0..cfg.sampling.count)
        .map(|_| stream.point_in_box(&root.corner(), root.side()))
        .collect()
}

fn cmd_ray(cfg: &ExperimentConfig, w: &mut OutputWriter) -> Result<()> {
    let field = cfg.build_field()?;
    let root = cfg.root_cube()?;
    let xs = sample_points(cfg, &root);
    let profiles: Vec<Result<slow_points::RayProfile>> = xs
        .par_iter()
        .map(|x| {
            slow_points::ray_profile(
                &field,
                x,
                cfg.sampling.y_min,
                cfg.sampling.y_max,
                cfg.sampling.points_per_decade,
            )
        })
        .collect();

    let d = field.dim();
    let mut header: Vec<String> = (1..=d).map(|i| format!("x{i}")).collect();
    header.extend(["y", "grad_norm", "tangential_norm"].map(String::from));
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut out = w.csv_writer("rays.csv", &header_refs)?;
    for p in profiles {
        let p = p?;
        for (i, y) in p.y_grid.iter().enumerate() {
            let mut row: Vec<String> = p.x.iter().map(|v| format!("{v}")).collect();
            row.push(format!("{y}"));
            row.push(format!("{}", p.grad_norms[i]));
            row.push(format!("{}", p.tangential_norms[i]));
            out.write_record(&row)
                .map_err(|e| Error::numeric(format!("csv write failed: {e}")))?;
        }
    }
    out.flush()?;
    Ok(())
}

fn cmd_survey(cfg: &ExperimentConfig, w: &mut OutputWriter) -> Result<()> {
    let field = cfg.build_field()?;
    let root = cfg.root_cube()?;
    let d = field.dim();
    let direction = match &cfg.sampling.survey_direction {
        Some(dir) => normalize(dir)?,
        None => {
            let mut e = vec![0.0; d];
            e[0] = 1.0;
            e
        }
    };
    let floors = cfg.survey_floors();
    let y_top = cfg.sampling.y_max;
    let xs = sample_points(cfg, &root);
    let survey = slow_points::directional_divergence_survey(
        &field,
        &direction,
        &xs,
        &floors,
        y_top,
        cfg.sampling.points_per_decade,
    )?;
    w.record_timing("survey");

    let mut header: Vec<String> = (1..=d).map(|i| format!("x{i}")).collect();
    header.extend(["floor", "sup_directional_derivative"].map(String::from));
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut out = w.csv_writer("survey.csv", &header_refs)?;
    for (x, row) in xs.iter().zip(&survey.sups) {
        for (floor, sup) in floors.iter().zip(row) {
            let mut rec: Vec<String> = x.iter().map(|v| format!("{v}")).collect();
            rec.push(format!("{floor}"));
            rec.push(format!("{sup}"));
            out.write_record(&rec)
                .map_err(|e| Error::numeric(format!("csv write failed: {e}")))?;
        }
    }
    out.flush()?;

    // Default threshold: median first-window sup.
    let thresholds = cfg.sampling.thresholds.clone().unwrap_or_else(|| {
        let mut first: Vec<f64> = survey.sups.iter().map(|r| r[0]).collect();
        first.sort_by(f64::total_cmp);
        vec![first.get(first.len() / 2).copied().unwrap_or(0.0)]
    });
    let mut entries = Vec::new();
    for t in &thresholds {
        for (k, floor) in floors.iter().enumerate() {
            entries.push(serde_json::json!({
                "threshold": t,
                "floor": floor,
                "exceedance_fraction": survey.exceedance_fraction(*t, k),
            }));
        }
    }
    w.write_json(
        "survey_summary.json",
        &serde_json::json!({
            "direction": survey.direction,
            "y_top": survey.y_top,
            "sample_count": xs.len(),
            "entries": entries,
        }),
    )?;
    Ok(())
}

fn cmd_condh(cfg: &ExperimentConfig, w: &mut OutputWriter) -> Result<()> {
    let phi = cfg.build_phi()?;
    let dirs = trig::default_direction_set(phi.dim(), cfg.sampling.directions, cfg.sampling.seed);
    let reports = trig::check_condition_h(&phi, &dirs, cfg.sampling.t_window, cfg.sampling.grid_step)?;
    let count = |s: trig::ConditionHStatus| reports.iter().filter(|r| r.status == s).count();
    w.write_json(
        "condh.json",
        &serde_json::json!({
            "t_window": cfg.sampling.t_window,
            "grid_step": cfg.sampling.grid_step,
            "counts": {
                "holds_via_derivative": count(trig::ConditionHStatus::HoldsViaDerivative),
                "holds_via_extremum": count(trig::ConditionHStatus::HoldsViaExtremum),
                "fails": count(trig::ConditionHStatus::Fails),
                "inconclusive": count(trig::ConditionHStatus::Inconclusive),
            },
            "directions": reports,
        }),
    )?;
    Ok(())
}

fn cmd_seminorms(cfg: &ExperimentConfig, w: &mut OutputWriter) -> Result<()> {
    let field = cfg.build_field()?;
    let root = cfg.root_cube()?;
    let zygmund = qr::zygmund_seminorm(
        &field,
        &root.corner(),
        root.side(),
        (cfg.sampling.h_min, cfg.sampling.h_max),
        cfg.sampling.count,
        cfg.sampling.seed,
    )?;
    let bloch = qr::bloch_seminorm(
        &field,
        &root.corner(),
        root.side(),
        (cfg.sampling.y_min.max(MIN_Y * 10.0), cfg.sampling.y_max),
        cfg.sampling.count,
        cfg.sampling.seed.wrapping_add(1),
    )?;
    let cross = if bloch.value > 0.0 && zygmund.value > 0.0 {
        Some((zygmund.value / bloch.value).max(bloch.value / zygmund.value))
    } else {
        None
    };
    let d = field.dim();
    w.write_json(
        "seminorms.json",
        &serde_json::json!({
            "zygmund": zygmund,
            "bloch": bloch,
            "cross_constant": cross,
            "entrywise_to_operator_factor": ((d + 1) as f64).sqrt(),
        }),
    )?;
    Ok(())
}

#[derive(Serialize)]
struct SelftestItem {
    name: &'static str,
    pass: bool,
    detail: String,
}

fn cmd_selftest(cfg: &ExperimentConfig, w: &mut OutputWriter) -> Result<()> {
    let field = cfg.build_field()?;
    let d = field.dim();
    let mut items: Vec<SelftestItem> = Vec::new();
    let mut record = |name: &'static str, pass: bool, detail: String| {
        println!("[{}] {name}: {detail}", if pass { "ok" } else { "FAIL" });
        items.push(SelftestItem { name, pass, detail });
    };

    // Harmonicity of the configured field.
    {
        let mut s = SampleStream::new(cfg.sampling.seed);
        let mut worst = 0.0f64;
        for _ in 0..100 {
            let x: Vec<f64> = (0..d).map(|_| s.uniform(0.0, 1.0)).collect();
            let y = s.log_uniform(0.01, 1.0);
            worst = worst.max(field.jet(&x, y)?.harmonicity_residual());
        }
        record(
            "harmonicity",
            worst <= 1e-9,
            format!("max |trace HF| / (1 + |HF|) = {worst:e}"),
        );
    }

    // Functional equations of the lacunary series.
    {
        let mut s = SampleStream::new(cfg.sampling.seed.wrapping_add(1));
        let samples: Vec<(Vec<f64>, f64)> = (0..100)
            .map(|_| {
                (
                    (0..d).map(|_| s.uniform(0.0, 1.0)).collect(),
                    s.log_uniform(0.01, 1.0),
                )
            })
            .collect();
        let res = check_functional_equations(&field, &samples)?;
        let tol = 1e-9f64.max(20.0 * field.tail_tol());
        let worst = res.value.max(res.gradient).max(res.hessian);
        record(
            "functional_equations",
            worst <= tol,
            format!("max relative residual = {worst:e}"),
        );
    }

    // Jets against central finite differences.
    {
        let mut s = SampleStream::new(cfg.sampling.seed.wrapping_add(2));
        let mut worst = 0.0f64;
        for _ in 0..10 {
            let x: Vec<f64> = (0..d).map(|_| s.uniform(0.0, 1.0)).collect();
            let y = s.log_uniform(0.05, 1.0);
            let h = 1e-4 * y;
            let jet = field.jet(&x, y)?;
            for i in 0..=d {
                let mut xp = x.clone();
                let mut xm = x.clone();
                let (mut yp, mut ym) = (y, y);
                if i < d {
                    xp[i] += h;
                    xm[i] -= h;
                } else {
                    yp += h;
                    ym -= h;
                }
                let fd = (field.jet(&xp, yp)?.value - field.jet(&xm, ym)?.value) / (2.0 * h);
                worst = worst.max((fd - jet.gradient[i]).abs() / (1.0 + jet.gradient[i].abs()));
            }
        }
        record(
            "finite_differences",
            worst <= 1e-4,
            format!("max relative gradient error = {worst:e}"),
        );
    }

    // Dimension-bound arithmetic.
    {
        let h = stopping::hungerford_bound(0.25, 0.5, 1)?;
        let pass_h = h.valid && (h.bound - 0.5).abs() < 1e-15;
        let m = stopping::makarov_bound(d, 1.0, 1.0, 1.0, 10.0, std::f64::consts::PI / 3.0, 2)?;
        let pass_m = (m - d as f64).abs() < 1e-15;
        record(
            "dimension_bounds",
            pass_h && pass_m,
            format!("hungerford(1/4,1/2,1) = {}, makarov(beta=1) = {m}", h.bound),
        );
    }

    // Cone geometry.
    {
        let report =
            stopping::cone_bound_check(1.0, 0.4, std::f64::consts::PI / 3.0, d + 1, 100_000, 7)?;
        record(
            "cone_bound",
            report.violations == 0,
            format!("violations = {} over {} trials", report.violations, report.trials),
        );
    }

    // Radius recursion fixed point.
    {
        let theta = std::f64::consts::PI / 3.0;
        let seq = vec![0.25; 200];
        let r = stopping::radius_recursion(&seq, theta, 10.0)?;
        let fixed = stopping::radius_seed(0.25 / theta.cos());
        let err = (r[199] - fixed).abs();
        record("radius_recursion", err < 1e-9, format!("fixed-point error = {err:e}"));
    }

    // d = 1 conformality of the QR ratio (canonical classical field).
    {
        let classical = WeierstrassField::new(
            crate::trig::TrigPolynomial::coordinate_cosines(1),
            2.0,
            1e-12,
        )?;
        let root = NadicCube::root(vec![0.0], 1.0, 2)?;
        let mut worst = 0.0f64;
        for cube in root.descendants_up_to(2) {
            let r = qr::weak_qr_ratio(&classical, &cube, 2, 8)?;
            if let Some(g) = r.gamma_sq {
                worst = worst.max((g - 1.0).abs());
            }
        }
        record(
            "qr_conformality_d1",
            worst <= 0.02,
            format!("max |gamma^2 - 1| = {worst:e}"),
        );
    }

    let all_pass = items.iter().all(|i| i.pass);
    w.write_json(
        "selftest.json",
        &serde_json::json!({ "pass": all_pass, "items": items }),
    )?;
    if !all_pass {
        return Err(Error::numeric("selftest failed"));
    }
    Ok(())
}
