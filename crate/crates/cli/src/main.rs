//! `smoothlab`: CSV-emitting front end for the smoothed-decision-region
//! library. Every subcommand is deterministic given its flags (plus seed
//! where applicable); re-running reproduces byte-identical output.
//!
//! Exit codes: 0 success, 2 usage error, 3 numerical failure.

use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use smoothlab::boundary::{shrink_rate_curve, vanish_sigma, RootSettings};
use smoothlab::certify::{ball_radius_curve, cone_scaled_radius_curve, peak_of_curve};
use smoothlab::curve::{Cell, CurveTable};
use smoothlab::mc::{clopper_pearson_lower, mc_smoothed_prob, GENERATOR_ID};
use smoothlab::quad::QuadratureSettings;
use smoothlab::regions::RegionSpec;
use smoothlab::smoothprob::{ball_axis_prob, cone_axis_prob, halfspace_prob, interval1d_prob};
use smoothlab::sweep::arithmetic_grid;
use smoothlab::synthetic::{
    accuracy_original_rule, accuracy_smoothing_rule, mi_curve, train_classifier, SyntheticDataset,
};
use smoothlab::thresholds::{bounded_vanish_threshold, cone_narrowness_limit_deg};
use smoothlab::Error as LabError;

#[derive(Parser)]
#[command(name = "smoothlab", version, about = "Smoothed-classifier decision-region analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Smoothed ball radius R_sigma and its shrinking rate across a sigma grid.
    ShrinkRate(ShrinkRateArgs),
    /// Empirical vanishing factor vs the closed-form sufficient bound.
    Vanish(VanishArgs),
    /// Certified-radius curves for balls or cones.
    Certify(CertifyArgs),
    /// Synthetic-dataset accuracy and mutual-information curves.
    Synthetic(SyntheticArgs),
    /// Monte Carlo cross-check of a smoothed probability against closed form.
    McCheck(McCheckArgs),
    /// Cone narrowness limits for (c, d) pairs.
    Narrowness(NarrownessArgs),
}

#[derive(Args)]
struct ShrinkRateArgs {
    /// Region radius R.
    #[arg(long = "R", default_value_t = 1.0)]
    radius: f64,
    /// Class count c (threshold 1/c).
    #[arg(long, default_value_t = 2)]
    c: u32,
    /// Comma-separated dimension list, e.g. 3,8,20.
    #[arg(long)]
    d: String,
    /// Sigma grid as start:stop:step.
    #[arg(long, default_value = "0.01:0.7:0.005")]
    sigma: String,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct VanishArgs {
    #[arg(long = "R", default_value_t = 1.0)]
    radius: f64,
    #[arg(long, default_value_t = 2)]
    c: u32,
    #[arg(long)]
    d: String,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct CertifyArgs {
    /// Ball geometry.
    #[arg(long)]
    ball: bool,
    /// Cone geometry.
    #[arg(long)]
    cone: bool,
    #[arg(long = "R", default_value_t = 1.0)]
    radius: f64,
    /// Dimension list.
    #[arg(long)]
    d: String,
    /// Cone half-angle list in degrees.
    #[arg(long)]
    theta: Option<String>,
    /// Evaluation point a on the axis (ball mode).
    #[arg(long, default_value_t = 0.0)]
    a: f64,
    /// Optional axis-point grid start:stop:step (ball mode surface).
    #[arg(long = "a-grid")]
    a_grid: Option<String>,
    /// Sigma grid start:stop:step; defaults depend on geometry.
    #[arg(long = "sigma-grid")]
    sigma_grid: Option<String>,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum SyntheticMode {
    Original,
    Smoothed,
    Mi,
}

#[derive(Args)]
struct SyntheticArgs {
    #[arg(long, default_value_t = 1.0)]
    a: f64,
    #[arg(long, default_value_t = 2.0)]
    k: f64,
    #[arg(long, default_value_t = 0.1)]
    eps: f64,
    #[arg(long = "sigma-train")]
    sigma_train: Option<f64>,
    #[arg(long = "sigma-infer")]
    sigma_infer: Option<f64>,
    /// Single sigma for mi mode.
    #[arg(long)]
    sigma: Option<f64>,
    /// Sigma grid start:stop:step for mi mode sweeps.
    #[arg(long = "sigma-grid")]
    sigma_grid: Option<String>,
    #[arg(long, value_enum)]
    mode: SyntheticMode,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct McCheckArgs {
    /// Region JSON, inline or @path-to-file.
    #[arg(long)]
    region: String,
    /// Comma-separated evaluation point.
    #[arg(long)]
    point: String,
    #[arg(long)]
    sigma: f64,
    #[arg(long, default_value_t = 100_000)]
    n: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.001)]
    alpha: f64,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct NarrownessArgs {
    /// Comma-separated c:d pairs, e.g. 10:784,10:3072.
    #[arg(long)]
    pairs: String,
    #[arg(long)]
    out: Option<String>,
}

enum CliError {
    Usage(String),
    Numerical(String),
}

impl From<LabError> for CliError {
    fn from(e: LabError) -> Self {
        match e {
            LabError::Domain(_) | LabError::DimensionMismatch { .. } => {
                CliError::Usage(e.to_string())
            }
            LabError::Quadrature { .. } | LabError::Bracket(_) | LabError::Numerical(_) => {
                CliError::Numerical(e.to_string())
            }
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Numerical(format!("io error: {e}"))
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("SMOOTHLAB_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        } else {
            eprintln!("error: SMOOTHLAB_THREADS must be a nonnegative integer");
            return ExitCode::from(2);
        }
    }
    let cli = Cli::parse();
    let result = match cli.command {
        Command::ShrinkRate(args) => cmd_shrink_rate(args),
        Command::Vanish(args) => cmd_vanish(args),
        Command::Certify(args) => cmd_certify(args),
        Command::Synthetic(args) => cmd_synthetic(args),
        Command::McCheck(args) => cmd_mc_check(args),
        Command::Narrowness(args) => cmd_narrowness(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Numerical(msg)) => {
            eprintln!("numerical failure: {msg}");
            ExitCode::from(3)
        }
    }
}

fn parse_grid(spec: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(usage(format!("grid '{spec}' must be start:stop:step")));
    }
    let nums: Vec<f64> = parts
        .iter()
        .map(|p| p.parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| usage(format!("grid '{spec}' has non-numeric fields")))?;
    let (start, stop, step) = (nums[0], nums[1], nums[2]);
    if !step.is_finite() || step <= 0.0 || !start.is_finite() || !stop.is_finite() || stop < start
    {
        return Err(usage(format!("grid '{spec}' must satisfy start <= stop, step > 0")));
    }
    Ok(arithmetic_grid(start, stop, step))
}

fn parse_dims(spec: &str) -> Result<Vec<u32>, CliError> {
    let dims: Vec<u32> = spec
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse::<u32>())
        .collect::<Result<_, _>>()
        .map_err(|_| usage(format!("dimension list '{spec}' must be comma-separated integers")))?;
    if dims.is_empty() {
        return Err(usage("dimension list is empty"));
    }
    Ok(dims)
}

fn emit(table: &CurveTable, preamble: &[String], out: &Option<String>) -> Result<(), CliError> {
    match out {
        Some(path) => {
            let mut file = fs::File::create(path)?;
            table.write_csv(&mut file, preamble)?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            table.write_csv(&mut lock, preamble)?;
            lock.flush()?;
        }
    }
    Ok(())
}

fn manifest(subcommand: &str, params: String, out: &Option<String>) -> Vec<String> {
    vec![
        format!("tool: smoothlab {}", env!("CARGO_PKG_VERSION")),
        format!("subcommand: {subcommand}"),
        format!("params: {params}"),
        format!("out: {}", out.as_deref().unwrap_or("-")),
    ]
}

fn cmd_shrink_rate(args: ShrinkRateArgs) -> Result<(), CliError> {
    let dims = parse_dims(&args.d)?;
    let grid = parse_grid(&args.sigma)?;
    let q = QuadratureSettings::default();
    let rs = RootSettings::default();
    let mut table = CurveTable::new(vec!["d", "sigma", "r_sigma", "shrink_rate", "vanished"]);
    for &d in &dims {
        let sub = shrink_rate_curve(args.radius, d, args.c, &grid, &q, &rs)?;
        for row in sub.rows {
            let mut full = vec![Cell::Int(d as i64)];
            full.extend(row);
            table.push_row(full);
        }
    }
    let pre = manifest(
        "shrink-rate",
        format!("R={} c={} d={} sigma={}", args.radius, args.c, args.d, args.sigma),
        &args.out,
    );
    emit(&table, &pre, &args.out)
}

fn cmd_vanish(args: VanishArgs) -> Result<(), CliError> {
    let dims = parse_dims(&args.d)?;
    let rs = RootSettings::default();
    let mut table = CurveTable::new(vec!["d", "sigma_van_empirical", "sigma_van_bound_thm2"]);
    for &d in &dims {
        let empirical = vanish_sigma(args.radius, d, args.c, &rs)?;
        let bound = bounded_vanish_threshold(args.radius, args.c, d)?;
        table.push_row(vec![Cell::Int(d as i64), Cell::Num(empirical), Cell::Num(bound)]);
    }
    let pre = manifest(
        "vanish",
        format!("R={} c={} d={}", args.radius, args.c, args.d),
        &args.out,
    );
    emit(&table, &pre, &args.out)
}

fn cmd_certify(args: CertifyArgs) -> Result<(), CliError> {
    if args.ball == args.cone {
        return Err(usage("choose exactly one geometry: --ball or --cone"));
    }
    let dims = parse_dims(&args.d)?;
    let q = QuadratureSettings::default();
    let rs = RootSettings::default();

    if args.ball {
        let a_values = match &args.a_grid {
            Some(spec) => parse_grid(spec)?,
            None => vec![args.a],
        };
        let fixed_grid = args.sigma_grid.as_deref().map(parse_grid).transpose()?;
        let mut table =
            CurveTable::new(vec!["d", "a", "sigma", "p_a", "radius", "abstained", "saturated"]);
        for &d in &dims {
            // Default grid: 200 points up to 1.2x the vanishing factor, so
            // every curve shows both the peak and the collapse.
            let grid = match &fixed_grid {
                Some(g) => g.clone(),
                None => {
                    let hi = 1.2 * vanish_sigma(args.radius, d, 2, &rs)?;
                    arithmetic_grid(hi / 200.0, hi, hi / 200.0)
                }
            };
            for &a in &a_values {
                let sub = ball_radius_curve(args.radius, d, &grid, a, &q)?;
                for row in sub.rows {
                    let mut full = vec![Cell::Int(d as i64), Cell::Num(a)];
                    full.extend(row);
                    table.push_row(full);
                }
            }
        }
        let pre = manifest(
            "certify",
            format!(
                "geometry=ball R={} d={} a={} a-grid={} sigma-grid={}",
                args.radius,
                args.d,
                args.a,
                args.a_grid.as_deref().unwrap_or("-"),
                args.sigma_grid.as_deref().unwrap_or("auto")
            ),
            &args.out,
        );
        return emit(&table, &pre, &args.out);
    }

    let theta_spec = args
        .theta
        .as_deref()
        .ok_or_else(|| usage("--cone requires --theta (degrees, comma-separated)"))?;
    let thetas: Vec<f64> = theta_spec
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| usage(format!("theta list '{theta_spec}' must be numeric")))?;
    if thetas.is_empty() {
        return Err(usage("theta list is empty"));
    }
    let grid = match &args.sigma_grid {
        Some(spec) => parse_grid(spec)?,
        None => arithmetic_grid(0.015, 3.0, 0.015),
    };
    let mut table = CurveTable::new(vec![
        "theta_deg",
        "d",
        "sigma",
        "p_a",
        "radius",
        "scaled_radius",
        "abstained",
        "saturated",
        "peak_scaled_radius",
    ]);
    for &theta_deg in &thetas {
        if !(0.0..90.0).contains(&theta_deg) || theta_deg == 0.0 {
            return Err(usage(format!("theta {theta_deg}° outside (0°, 90°)")));
        }
        let theta = theta_deg.to_radians();
        for &d in &dims {
            let sub = cone_scaled_radius_curve(theta, d, &grid, &q)?;
            let (_, peak) = peak_of_curve(&grid, |sigma| {
                let p = cone_axis_prob(theta, d, sigma, -1.0, &q)?;
                Ok(smoothlab::certify::certified_radius(p, sigma)?.radius / theta.sin())
            })?;
            for row in sub.rows {
                let mut full = vec![Cell::Num(theta_deg), Cell::Int(d as i64)];
                full.extend(row);
                full.push(Cell::Num(peak));
                table.push_row(full);
            }
        }
    }
    let pre = manifest(
        "certify",
        format!(
            "geometry=cone theta={} d={} sigma-grid={}",
            theta_spec,
            args.d,
            args.sigma_grid.as_deref().unwrap_or("0.015:3:0.015")
        ),
        &args.out,
    );
    emit(&table, &pre, &args.out)
}

fn cmd_synthetic(args: SyntheticArgs) -> Result<(), CliError> {
    let ds = SyntheticDataset::new(args.a, args.k, args.eps).map_err(CliError::from)?;
    let params = format!("a={} k={} eps={}", args.a, args.k, args.eps);
    match args.mode {
        SyntheticMode::Original => {
            let sigma_train = args
                .sigma_train
                .ok_or_else(|| usage("--mode original requires --sigma-train"))?;
            let clf = train_classifier(&ds, sigma_train)?;
            let acc = accuracy_original_rule(&ds, &clf);
            let mut table =
                CurveTable::new(vec!["a", "k", "eps", "sigma_train", "accuracy"]);
            table.push_row(vec![
                Cell::Num(args.a),
                Cell::Num(args.k),
                Cell::Num(args.eps),
                Cell::Num(sigma_train),
                Cell::Num(acc.get()),
            ]);
            let pre = manifest(
                "synthetic",
                format!("{params} sigma-train={sigma_train} mode=original"),
                &args.out,
            );
            emit(&table, &pre, &args.out)
        }
        SyntheticMode::Smoothed => {
            let sigma_train = args
                .sigma_train
                .ok_or_else(|| usage("--mode smoothed requires --sigma-train"))?;
            let sigma_infer = args.sigma_infer.unwrap_or(sigma_train);
            let clf = train_classifier(&ds, sigma_train)?;
            let acc = accuracy_smoothing_rule(&ds, &clf, sigma_infer)?;
            let mut table = CurveTable::new(vec![
                "a",
                "k",
                "eps",
                "sigma_train",
                "sigma_infer",
                "accuracy",
            ]);
            table.push_row(vec![
                Cell::Num(args.a),
                Cell::Num(args.k),
                Cell::Num(args.eps),
                Cell::Num(sigma_train),
                Cell::Num(sigma_infer),
                Cell::Num(acc.get()),
            ]);
            let pre = manifest(
                "synthetic",
                format!("{params} sigma-train={sigma_train} sigma-infer={sigma_infer} mode=smoothed"),
                &args.out,
            );
            emit(&table, &pre, &args.out)
        }
        SyntheticMode::Mi => {
            let grid = match (&args.sigma, &args.sigma_grid) {
                (Some(s), None) => {
                    if !s.is_finite() || *s < 0.0 {
                        return Err(usage(format!("sigma {s} must be nonnegative")));
                    }
                    vec![*s]
                }
                (None, Some(spec)) => parse_grid(spec)?,
                (None, None) => vec![0.0, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0],
                (Some(_), Some(_)) => {
                    return Err(usage("--sigma and --sigma-grid are mutually exclusive"))
                }
            };
            let table = mi_curve(&ds, &grid)?;
            let pre = manifest(
                "synthetic",
                format!(
                    "{params} mode=mi sigma={} sigma-grid={}",
                    args.sigma.map(|s| s.to_string()).unwrap_or_else(|| "-".into()),
                    args.sigma_grid.as_deref().unwrap_or("-")
                ),
                &args.out,
            );
            emit(&table, &pre, &args.out)
        }
    }
}

/// Closed-form smoothed probability for the regions where one exists; `None`
/// for points with no analytic reduction (off-axis cone points).
fn analytic_prob(
    region: &RegionSpec,
    point: &[f64],
    sigma: f64,
    q: &QuadratureSettings,
) -> Result<Option<f64>, CliError> {
    let value = match region {
        RegionSpec::Ball { dim, radius } => {
            let a = point.iter().map(|x| x * x).sum::<f64>().sqrt();
            if *dim == 1 {
                Some(interval1d_prob(&[(-radius, *radius)], sigma, point[0])?.get())
            } else {
                // Rotational symmetry: any point reduces to the axis point at
                // its norm.
                Some(ball_axis_prob(*radius, *dim as u32, sigma, a, q)?.get())
            }
        }
        RegionSpec::Cone { dim, theta_deg } => {
            let on_axis = point[..point.len() - 1].iter().all(|&x| x == 0.0);
            if on_axis {
                Some(
                    cone_axis_prob(
                        theta_deg.to_radians(),
                        *dim as u32,
                        sigma,
                        point[point.len() - 1],
                        q,
                    )?
                    .get(),
                )
            } else {
                None
            }
        }
        RegionSpec::HalfSpace { offset, .. } => {
            Some(halfspace_prob(*offset, sigma, point[point.len() - 1])?.get())
        }
        RegionSpec::Interval1d { intervals } => {
            Some(interval1d_prob(intervals, sigma, point[0])?.get())
        }
    };
    Ok(value)
}

fn cmd_mc_check(args: McCheckArgs) -> Result<(), CliError> {
    let json = if let Some(path) = args.region.strip_prefix('@') {
        fs::read_to_string(path).map_err(|e| usage(format!("cannot read region file: {e}")))?
    } else {
        args.region.clone()
    };
    let region: RegionSpec = serde_json::from_str(&json)
        .map_err(|e| usage(format!("malformed region JSON: {e}")))?;
    region.validate().map_err(CliError::from)?;
    let point: Vec<f64> = args
        .point
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| usage(format!("point '{}' must be comma-separated numbers", args.point)))?;
    if point.len() != region.dim() {
        return Err(usage(format!(
            "point has {} coordinates but the region is {}-dimensional",
            point.len(),
            region.dim()
        )));
    }

    let q = QuadratureSettings::default();
    let est = mc_smoothed_prob(&region, &point, args.sigma, args.n, args.seed, args.alpha)?;
    let analytic = analytic_prob(&region, &point, args.sigma, &q)?;
    let (analytic_cell, z_cell) = match analytic {
        Some(p) => {
            let se = (p * (1.0 - p) / args.n as f64).sqrt();
            let z = if se > 0.0 { (est.p_hat - p) / se } else { f64::NAN };
            (Cell::Num(p), Cell::Num(z))
        }
        None => (Cell::Num(f64::NAN), Cell::Num(f64::NAN)),
    };
    let mut table = CurveTable::new(vec!["p_hat", "lower_cp", "analytic", "z_score"]);
    table.push_row(vec![Cell::Num(est.p_hat), Cell::Num(est.lower_cp), analytic_cell, z_cell]);

    let mut pre = manifest(
        "mc-check",
        format!(
            "region={json} point={} sigma={} n={} alpha={}",
            args.point, args.sigma, args.n, args.alpha
        ),
        &args.out,
    );
    pre.push(format!("seed: {}", args.seed));
    pre.push(format!("generator: {GENERATOR_ID}"));
    // Sanity guard: a degenerate alpha would already have failed above.
    debug_assert!(clopper_pearson_lower(est.successes, est.n, est.alpha).is_ok());
    emit(&table, &pre, &args.out)
}

fn cmd_narrowness(args: NarrownessArgs) -> Result<(), CliError> {
    let mut table = CurveTable::new(vec!["c", "d", "theta_limit_deg"]);
    let pairs: Vec<&str> = args.pairs.split(',').filter(|s| !s.trim().is_empty()).collect();
    if pairs.is_empty() {
        return Err(usage("pair list is empty"));
    }
    for pair in pairs {
        let mut it = pair.trim().split(':');
        let (c, d) = match (it.next(), it.next(), it.next()) {
            (Some(c), Some(d), None) => {
                let c = c.parse::<u32>().map_err(|_| usage(format!("bad pair '{pair}'")))?;
                let d = d.parse::<u32>().map_err(|_| usage(format!("bad pair '{pair}'")))?;
                (c, d)
            }
            _ => return Err(usage(format!("pair '{pair}' must be c:d"))),
        };
        let limit = cone_narrowness_limit_deg(c, d)?;
        table.push_row(vec![Cell::Int(c as i64), Cell::Int(d as i64), Cell::Num(limit)]);
    }
    let pre = manifest("narrowness", format!("pairs={}", args.pairs), &args.out);
    emit(&table, &pre, &args.out)
}
