//! Command-line surface.
//!
//! Exit codes: 0 on success (all assertions pass), 1 when a verification
//! assertion fails, 2 for usage, parameter, or precondition errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use l1tv_core::energy::{energy_with, EnergyParams};
use l1tv_core::fixtures::{self, NotchStyle};
use l1tv_core::mincut::{minimize_with, FlowAlgo, MinimizerSide, SolveOptions};
use l1tv_core::morphology::sandwich_bounds_with;
use l1tv_core::oracle;
use l1tv_core::perimeter::BorderPolicy;
use l1tv_core::verify;
use l1tv_core::{exact_to_f64, parse_decimal, BinaryMask, GridGeom, Rational, Stencil};

use crate::pnm;
use crate::report::{self, Meta};

#[derive(Parser)]
#[command(
    name = "l1tv",
    version,
    about = "Exact discrete minimization of Per(S) + lambda*|S xor Omega| on pixel grids, \
             with morphological minimizer bounds and verification suites"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Solve for a global minimizer of the shape energy via min-cut.
    Minimize(MinimizeArgs),
    /// Compute the inner/outer sandwich bounds by disc opening.
    Bounds(BoundsArgs),
    /// Run the verification suites (exit 1 on any asserted failure).
    Verify(VerifyArgs),
    /// Exhaustive minimization on tiny grids (ground-truth oracle).
    Oracle(OracleArgs),
    /// Evaluate the energy of a candidate mask against an input mask.
    Energy(EnergyArgs),
    /// Solve across a list of fidelity weights and report the scale sweep.
    SweepLambda(SweepArgs),
    /// Generate deterministic fixture masks with a manifest.
    Fixtures(FixtureArgs),
}

#[derive(Clone, Copy, ValueEnum)]
pub enum AlgoArg {
    TreeReuse,
    PushRelabel,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum BorderArg {
    /// Outside the grid is background; the image border pays perimeter.
    Background,
    /// Only edges interior to the grid count.
    Interior,
}

impl From<BorderArg> for BorderPolicy {
    fn from(b: BorderArg) -> Self {
        match b {
            BorderArg::Background => BorderPolicy::OutsideBackground,
            BorderArg::Interior => BorderPolicy::InteriorOnly,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
pub enum StyleArg {
    Bite,
    Hole,
}

impl From<StyleArg> for NotchStyle {
    fn from(s: StyleArg) -> Self {
        match s {
            StyleArg::Bite => NotchStyle::BoundaryBite,
            StyleArg::Hole => NotchStyle::InteriorHole,
        }
    }
}

#[derive(Args)]
pub struct MinimizeArgs {
    /// Input mask Omega (PGM P5 or PBM P4).
    #[arg(long)]
    pub input: PathBuf,
    /// Fidelity weight as a decimal string, e.g. 0.1 (kept exact).
    #[arg(long)]
    pub lambda: String,
    #[arg(long, default_value = "n16")]
    pub stencil: String,
    /// Grid spacing (length units per pixel), decimal string.
    #[arg(long, default_value = "1")]
    pub spacing: String,
    /// Output mask path for the minimizer (.pgm or .pbm).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON report path.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Return the largest canonical minimizer instead of the smallest.
    #[arg(long)]
    pub largest: bool,
    #[arg(long, value_enum, default_value_t = AlgoArg::TreeReuse)]
    pub algo: AlgoArg,
    #[arg(long, value_enum, default_value_t = BorderArg::Background)]
    pub border: BorderArg,
}

#[derive(Args)]
pub struct BoundsArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub lambda: String,
    #[arg(long, default_value = "1")]
    pub spacing: String,
    #[arg(long)]
    pub out_inner: PathBuf,
    #[arg(long)]
    pub out_outer: PathBuf,
    /// Extra cells added to the critical radius before opening.
    #[arg(long, default_value_t = 2)]
    pub margin_cells: u32,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
pub enum SuiteArg {
    Thm1,
    Thm2,
    Vanishing,
    Deficit,
    Roots,
    All,
}

#[derive(Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub suite: SuiteArg,
    #[arg(long, default_value = "0.1")]
    pub lambda: String,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Square grid side for generated fixtures.
    #[arg(long, default_value_t = 256)]
    pub grid: u32,
    /// Grid spacing; defaults to 1 (0.5 for the thm2/deficit suites so
    /// sub-unit notch areas are realizable).
    #[arg(long)]
    pub spacing: Option<String>,
    #[arg(long, default_value = "n16")]
    pub stencil: String,
    /// Blob fixtures for the contained-ball suite.
    #[arg(long, default_value_t = 50)]
    pub fixtures: u32,
    /// Test discs sampled per side per fixture.
    #[arg(long, default_value_t = 8)]
    pub trials: usize,
    #[arg(long, default_value_t = 2)]
    pub margin_cells: u32,
    /// Almost-contained radius r_hat for the thm2/deficit suites.
    #[arg(long, default_value_t = 24.0)]
    pub outer_r: f64,
    #[arg(long, default_value_t = 0.25)]
    pub epsilon: f64,
    /// Relative isoperimetric constant C.
    #[arg(long, default_value_t = 1.0)]
    pub iso_c: f64,
    #[arg(long, default_value_t = 0.5)]
    pub notch_area: f64,
    #[arg(long, default_value_t = 10)]
    pub placements: usize,
    #[arg(long, value_enum, default_value_t = StyleArg::Bite)]
    pub style: StyleArg,
    /// Radii for the vanishing suite, comma separated.
    #[arg(long, default_value = "12,14,16,18,19,20,21,22,25,30")]
    pub radii: String,
    #[arg(long, default_value_t = 0.9)]
    pub survive_fraction: f64,
    /// Triples for the root-identity sweep.
    #[arg(long, default_value_t = 10_000)]
    pub root_trials: u64,
}

#[derive(Args)]
pub struct OracleArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub lambda: String,
    #[arg(long, default_value = "n4")]
    pub stencil: String,
    #[arg(long, default_value = "1")]
    pub spacing: String,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Args)]
pub struct EnergyArgs {
    /// Candidate mask S.
    #[arg(long)]
    pub sigma: PathBuf,
    /// Input mask Omega.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub lambda: String,
    #[arg(long, default_value = "n16")]
    pub stencil: String,
    #[arg(long, default_value = "1")]
    pub spacing: String,
    #[arg(long, value_enum, default_value_t = BorderArg::Background)]
    pub border: BorderArg,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Positive, ascending, comma-separated decimal weights.
    #[arg(long)]
    pub lambdas: String,
    #[arg(long, default_value = "n16")]
    pub stencil: String,
    #[arg(long, default_value = "1")]
    pub spacing: String,
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Directory for per-lambda minimizer masks.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum KindArg {
    Disc,
    NotchedDisc,
    Blobs,
    Neck,
}

#[derive(Args)]
pub struct FixtureArgs {
    #[arg(long, value_enum)]
    pub kind: KindArg,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    /// Square grid side.
    #[arg(long, default_value_t = 256)]
    pub grid: u32,
    #[arg(long, default_value = "1")]
    pub spacing: String,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Disc radius (disc, notched-disc).
    #[arg(long, default_value_t = 20.0)]
    pub radius: f64,
    #[arg(long, default_value_t = 0.5)]
    pub notch_area: f64,
    /// Notch direction in degrees.
    #[arg(long, default_value_t = 0.0)]
    pub angle_deg: f64,
    #[arg(long, value_enum, default_value_t = StyleArg::Bite)]
    pub style: StyleArg,
    /// Ball-radius scale for blob fixtures.
    #[arg(long, default_value_t = 20.0)]
    pub critical_r: f64,
    #[arg(long, default_value_t = 30.0)]
    pub blob_radius: f64,
    #[arg(long, default_value_t = 10.0)]
    pub neck_width: f64,
}

pub fn run() -> ExitCode {
    let cli = Cli::parse();
    let invocation: Vec<String> = std::env::args().collect();
    match dispatch(cli, invocation) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: Cli, invocation: Vec<String>) -> Result<bool> {
    match cli.command {
        Command::Minimize(a) => cmd_minimize(a, invocation).map(|_| true),
        Command::Bounds(a) => cmd_bounds(a, invocation).map(|_| true),
        Command::Verify(a) => cmd_verify(a, invocation),
        Command::Oracle(a) => cmd_oracle(a, invocation).map(|_| true),
        Command::Energy(a) => cmd_energy(a, invocation).map(|_| true),
        Command::SweepLambda(a) => cmd_sweep(a, invocation).map(|_| true),
        Command::Fixtures(a) => cmd_fixtures(a, invocation).map(|_| true),
    }
}

fn load_inputs(
    path: &Path,
    spacing: &str,
    lambda: &str,
    stencil: &str,
) -> Result<(BinaryMask, EnergyParams, Stencil)> {
    let spacing = parse_decimal(spacing).context("--spacing")?;
    let mask = pnm::read_mask(path, spacing)?;
    let params = EnergyParams::from_lambda_str(lambda).context("--lambda")?;
    let stencil = Stencil::by_name(stencil)?;
    Ok((mask, params, stencil))
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<()> {
    pnm::write_bytes_atomic(path, &report::to_json_bytes(value)?)
}

fn cmd_minimize(a: MinimizeArgs, invocation: Vec<String>) -> Result<()> {
    let (omega, params, stencil) = load_inputs(&a.input, &a.spacing, &a.lambda, &a.stencil)?;
    let options = SolveOptions {
        side: if a.largest {
            MinimizerSide::Largest
        } else {
            MinimizerSide::Smallest
        },
        algo: match a.algo {
            AlgoArg::TreeReuse => FlowAlgo::TreeReuse,
            AlgoArg::PushRelabel => FlowAlgo::PushRelabel,
        },
        border: a.border.into(),
    };
    let solved = minimize_with(&omega, &params, &stencil, &options)?;
    if let Some(out) = &a.out {
        pnm::write_mask(out, &solved.sigma)?;
    }
    if let Some(path) = &a.report {
        let rep = report::MinimizeReport {
            meta: Meta::new(invocation)
                .with_grid(omega.geom())
                .with_params(&params)
                .with_stencil(&stencil),
            side: if a.largest {
                "largest".into()
            } else {
                "smallest".into()
            },
            border: match options.border {
                BorderPolicy::OutsideBackground => "background".into(),
                BorderPolicy::InteriorOnly => "interior".into(),
            },
            energy: (&solved.report).into(),
            flow: (&solved.flow_value).into(),
            sigma_cells: solved.sigma.count_ones(),
            sigma_area: exact_to_f64(&solved.sigma.area()),
            stats: report::SolveStatsJson {
                algorithm: match options.algo {
                    FlowAlgo::TreeReuse => "tree-reuse".into(),
                    FlowAlgo::PushRelabel => "push-relabel".into(),
                },
                augmentations: solved.stats.augmentations,
                orphans_processed: solved.stats.orphans_processed,
                pushes: solved.stats.pushes,
                relabels: solved.stats.relabels,
            },
        };
        write_json(path, &rep)?;
    }
    if let Some(wall) = solved.stats.wall {
        eprintln!("solve time: {wall:.2?}");
    }
    println!(
        "minimize: E = {} (perimeter {} + fidelity {}), {} cells",
        exact_to_f64(&solved.report.total),
        exact_to_f64(&solved.report.perimeter_term),
        exact_to_f64(&solved.report.fidelity_term),
        solved.sigma.count_ones()
    );
    Ok(())
}

fn cmd_bounds(a: BoundsArgs, invocation: Vec<String>) -> Result<()> {
    let spacing = parse_decimal(&a.spacing).context("--spacing")?;
    let omega = pnm::read_mask(&a.input, spacing)?;
    let params = EnergyParams::from_lambda_str(&a.lambda).context("--lambda")?;
    let bounds = sandwich_bounds_with(&omega, &params, a.margin_cells)?;
    pnm::write_mask(&a.out_inner, &bounds.inner)?;
    pnm::write_mask(&a.out_outer, &bounds.outer)?;
    if let Some(path) = &a.report {
        let rep = report::BoundsReport {
            meta: Meta::new(invocation)
                .with_grid(omega.geom())
                .with_params(&params),
            radius: bounds.radius,
            margin_cells: bounds.margin_cells,
            inner: report::MaskSummary {
                path: a.out_inner.display().to_string(),
                cells: bounds.inner.count_ones(),
                area: exact_to_f64(&bounds.inner.area()),
            },
            outer: report::MaskSummary {
                path: a.out_outer.display().to_string(),
                cells: bounds.outer.count_ones(),
                area: exact_to_f64(&bounds.outer.area()),
            },
            inner_subset_of_outer: true,
        };
        write_json(path, &rep)?;
    }
    println!(
        "bounds: opening radius {} -> inner {} cells, outer {} cells",
        bounds.radius,
        bounds.inner.count_ones(),
        bounds.outer.count_ones()
    );
    Ok(())
}

fn cmd_oracle(a: OracleArgs, invocation: Vec<String>) -> Result<()> {
    let (omega, params, stencil) = load_inputs(&a.input, &a.spacing, &a.lambda, &a.stencil)?;
    let result = oracle::brute_force_minimize(&omega, &params, &stencil)?;
    if let Some(path) = &a.report {
        let rep = report::OracleReport {
            meta: Meta::new(invocation)
                .with_grid(omega.geom())
                .with_params(&params)
                .with_stencil(&stencil),
            enumerated: result.enumerated,
            min_energy: (&result.min_energy).into(),
            minimizer_count: result.minimizers.len(),
            minimizer_cells: result.minimizers.iter().map(|m| m.count_ones()).collect(),
        };
        write_json(path, &rep)?;
    }
    println!(
        "oracle: enumerated {} subsets, min energy {}, {} minimizer(s)",
        result.enumerated,
        exact_to_f64(&result.min_energy),
        result.minimizers.len()
    );
    Ok(())
}

fn cmd_energy(a: EnergyArgs, invocation: Vec<String>) -> Result<()> {
    let spacing = parse_decimal(&a.spacing).context("--spacing")?;
    let sigma = pnm::read_mask(&a.sigma, spacing)?;
    let omega = pnm::read_mask(&a.input, spacing)?;
    let params = EnergyParams::from_lambda_str(&a.lambda).context("--lambda")?;
    let stencil = Stencil::by_name(&a.stencil)?;
    let rep = energy_with(&sigma, &omega, &params, &stencil, a.border.into())?;
    if let Some(path) = &a.report {
        #[derive(serde::Serialize)]
        struct EnergyCmdReport {
            meta: Meta,
            energy: report::EnergyJson,
        }
        let out = EnergyCmdReport {
            meta: Meta::new(invocation)
                .with_grid(omega.geom())
                .with_params(&params)
                .with_stencil(&stencil),
            energy: (&rep).into(),
        };
        write_json(path, &out)?;
    }
    println!(
        "energy: total {} = perimeter {} + fidelity {}",
        exact_to_f64(&rep.total),
        exact_to_f64(&rep.perimeter_term),
        exact_to_f64(&rep.fidelity_term)
    );
    Ok(())
}

fn cmd_sweep(a: SweepArgs, invocation: Vec<String>) -> Result<()> {
    let spacing = parse_decimal(&a.spacing).context("--spacing")?;
    let omega = pnm::read_mask(&a.input, spacing)?;
    let stencil = Stencil::by_name(&a.stencil)?;
    let lambda_strs: Vec<String> = a.lambdas.split(',').map(|s| s.trim().to_string()).collect();
    if lambda_strs.is_empty() {
        bail!("--lambdas must list at least one value");
    }
    let mut lambdas: Vec<Rational> = Vec::new();
    for s in &lambda_strs {
        let l = parse_decimal(s).with_context(|| format!("--lambdas entry {s:?}"))?;
        if l <= Rational::new(0, 1) {
            bail!("--lambdas entries must be positive");
        }
        lambdas.push(l);
    }
    if lambdas.windows(2).any(|w| w[0] >= w[1]) {
        bail!("--lambdas must be strictly ascending");
    }

    // Independent solves; run them concurrently.
    let results: Vec<_> = std::thread::scope(|scope| {
        let omega = &omega;
        let stencil = &stencil;
        let handles: Vec<_> = lambdas
            .iter()
            .map(|&l| {
                scope.spawn(move || {
                    let params = EnergyParams::new(l, 2)?;
                    let solved = minimize_with(omega, &params, stencil, &SolveOptions::default())?;
                    anyhow::Ok((params, solved))
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("solver thread panicked"))
            .collect()
    });
    let mut rows = Vec::new();
    let mut sigmas = Vec::new();
    for (s, r) in lambda_strs.iter().zip(results) {
        let (params, solved) = r?;
        rows.push(report::SweepRow {
            lambda: s.clone(),
            critical_radius: params.critical_radius_f64(),
            energy: (&solved.report).into(),
            sigma_cells: solved.sigma.count_ones(),
            sigma_area: exact_to_f64(&solved.sigma.area()),
        });
        sigmas.push(solved.sigma);
    }
    if let Some(dir) = &a.out_dir {
        for (s, sigma) in lambda_strs.iter().zip(&sigmas) {
            let name = format!("sigma_{}.pgm", s.replace('.', "p"));
            pnm::write_mask(&dir.join(name), sigma)?;
        }
    }
    let mut containment = Vec::new();
    for i in 0..sigmas.len() {
        for j in (i + 1)..sigmas.len() {
            containment.push(report::ContainmentObservation {
                lambda_small: lambda_strs[i].clone(),
                lambda_large: lambda_strs[j].clone(),
                nested: sigmas[i].is_subset_of(&sigmas[j])?,
            });
        }
    }
    for row in &rows {
        println!(
            "lambda {}: R {}, E {}, {} cells",
            row.lambda, row.critical_radius, row.energy.total.value, row.sigma_cells
        );
    }
    for c in &containment {
        println!(
            "containment: sigma({}) subset of sigma({}): {}",
            c.lambda_small, c.lambda_large, c.nested
        );
    }
    if let Some(path) = &a.report {
        let rep = report::SweepReport {
            meta: Meta::new(invocation)
                .with_grid(omega.geom())
                .with_stencil(&stencil),
            rows,
            containment,
        };
        write_json(path, &rep)?;
    }
    Ok(())
}

fn cmd_fixtures(a: FixtureArgs, invocation: Vec<String>) -> Result<()> {
    let spacing = parse_decimal(&a.spacing).context("--spacing")?;
    let geom = GridGeom::with_spacing(a.grid, a.grid, spacing)?;
    let meta = Meta::new(invocation).with_grid(geom).with_seed(a.seed);
    let (mask, manifest) = match a.kind {
        KindArg::Disc => {
            let mask = fixtures::centered_disc(geom, a.radius)?;
            let m = report::FixtureManifest {
                meta,
                kind: "disc".into(),
                output: a.out.display().to_string(),
                disc_radius: Some(a.radius),
                notch: None,
                blobs: None,
                neck: None,
                foreground_cells: mask.count_ones(),
                foreground_area: exact_to_f64(&mask.area()),
            };
            (mask, m)
        }
        KindArg::NotchedDisc => {
            let angle = a.angle_deg.to_radians();
            let (mask, info) =
                fixtures::notched_disc(geom, a.radius, a.notch_area, angle, a.style.into())?;
            let m = report::FixtureManifest {
                meta,
                kind: "notched-disc".into(),
                output: a.out.display().to_string(),
                disc_radius: Some(a.radius),
                notch: Some(report::NotchManifest {
                    center: info.center,
                    radius: info.radius,
                    style: match info.style {
                        NotchStyle::BoundaryBite => "bite".into(),
                        NotchStyle::InteriorHole => "hole".into(),
                    },
                    angle: info.angle,
                    requested_area: info.requested_area,
                    achieved_area: (&info.achieved_area).into(),
                    removed_cells: info.removed_cells,
                }),
                blobs: None,
                neck: None,
                foreground_cells: mask.count_ones(),
                foreground_area: exact_to_f64(&mask.area()),
            };
            (mask, m)
        }
        KindArg::Blobs => {
            let (mask, info) = fixtures::blobs(geom, a.critical_r, a.seed)?;
            let m = report::FixtureManifest {
                meta,
                kind: "blobs".into(),
                output: a.out.display().to_string(),
                disc_radius: None,
                notch: None,
                blobs: Some(info.discs),
                neck: None,
                foreground_cells: mask.count_ones(),
                foreground_area: exact_to_f64(&mask.area()),
            };
            (mask, m)
        }
        KindArg::Neck => {
            let (mask, info) = fixtures::neck(geom, a.blob_radius, a.neck_width)?;
            let m = report::FixtureManifest {
                meta,
                kind: "neck".into(),
                output: a.out.display().to_string(),
                disc_radius: None,
                notch: None,
                blobs: None,
                neck: Some(report::NeckManifest {
                    blob_radius: info.blob_radius,
                    neck_width: info.neck_width,
                    center_offset: info.center_offset,
                }),
                foreground_cells: mask.count_ones(),
                foreground_area: exact_to_f64(&mask.area()),
            };
            (mask, m)
        }
    };
    pnm::write_mask(&a.out, &mask)?;
    if let Some(path) = &a.manifest {
        write_json(path, &manifest)?;
    }
    println!(
        "fixtures: {} -> {} ({} cells)",
        manifest.kind,
        a.out.display(),
        manifest.foreground_cells
    );
    Ok(())
}

fn cmd_verify(a: VerifyArgs, invocation: Vec<String>) -> Result<bool> {
    let params = EnergyParams::from_lambda_str(&a.lambda).context("--lambda")?;
    let stencil = Stencil::by_name(&a.stencil)?;
    let run_thm1 = matches!(a.suite, SuiteArg::Thm1 | SuiteArg::All);
    let run_thm2 = matches!(a.suite, SuiteArg::Thm2 | SuiteArg::All);
    let run_vanishing = matches!(a.suite, SuiteArg::Vanishing | SuiteArg::All);
    let run_deficit = matches!(a.suite, SuiteArg::Deficit | SuiteArg::All);
    let run_roots = matches!(a.suite, SuiteArg::Roots | SuiteArg::All);

    let coarse_spacing = parse_decimal(a.spacing.as_deref().unwrap_or("1")).context("--spacing")?;
    let fine_spacing = parse_decimal(a.spacing.as_deref().unwrap_or("0.5")).context("--spacing")?;
    let mut all_pass = true;

    let thm1 = if run_thm1 {
        let geom = GridGeom::with_spacing(a.grid, a.grid, coarse_spacing)?;
        let mut out = Vec::with_capacity(a.fixtures as usize);
        for i in 0..u64::from(a.fixtures) {
            let fixture_seed = a.seed.wrapping_add(i);
            let (omega, _) = fixtures::blobs(geom, params.critical_radius_f64(), fixture_seed)?;
            let rep = verify::check_ball_union(
                &omega,
                &params,
                &stencil,
                a.trials,
                fixture_seed,
                a.margin_cells,
            )?;
            all_pass &= rep.all_pass;
            out.push(report::ball_union_json(fixture_seed, &rep));
        }
        let pass = out.iter().all(|r| r.all_pass);
        let max_d = out
            .iter()
            .flat_map(|r| [r.inside.max_delta_energy, r.complement.max_delta_energy])
            .flatten()
            .fold(f64::NEG_INFINITY, f64::max);
        println!(
            "thm1 (contained-ball union): {} — {} fixtures, max dE {max_d:.4}",
            pass_str(pass),
            out.len()
        );
        Some(out)
    } else {
        None
    };

    let thm2 = if run_thm2 {
        let geom = GridGeom::with_spacing(a.grid, a.grid, fine_spacing)?;
        let cfg = verify::NotchedBallConfig {
            geom,
            params,
            outer_r: a.outer_r,
            epsilon: a.epsilon,
            iso_c: a.iso_c,
            notch_area: a.notch_area,
            placements: a.placements,
            style: a.style.into(),
            margin_cells: a.margin_cells,
            seed: a.seed,
            curve_samples: 8,
        };
        let rep = verify::check_notched_ball(&cfg)?;
        all_pass &= rep.all_pass;
        println!(
            "thm2 (almost-contained ball): {} — {} placements, effective threshold {:.4}",
            pass_str(rep.all_pass),
            rep.placements.len(),
            rep.thresholds.effective
        );
        Some(report::notched_ball_json(&rep))
    } else {
        None
    };

    let vanishing = if run_vanishing {
        let geom = GridGeom::with_spacing(a.grid, a.grid, coarse_spacing)?;
        let mut radii = Vec::new();
        for tok in a.radii.split(',') {
            let r: f64 = tok
                .trim()
                .parse()
                .with_context(|| format!("--radii entry {tok:?}"))?;
            radii.push(r);
        }
        let rep = verify::check_vanishing(geom, &params, &stencil, &radii, a.survive_fraction)?;
        all_pass &= rep.all_pass;
        println!(
            "vanishing (critical radius {}): {} — {} radii",
            rep.critical_radius,
            pass_str(rep.all_pass),
            rep.rows.len()
        );
        Some(report::vanishing_json(&rep))
    } else {
        None
    };

    let deficit = if run_deficit {
        // Deficit bound across defect sizes and both notch styles.
        let geom = GridGeom::with_spacing(a.grid, a.grid, fine_spacing)?;
        let cell = exact_to_f64(&geom.cell_area());
        let mut rows = Vec::new();
        let mut pass = true;
        for style in [NotchStyle::BoundaryBite, NotchStyle::InteriorHole] {
            for k in 0..=3u32 {
                let notch_area = cell * f64::from(k) * 2.0;
                let (omega, info) =
                    fixtures::notched_disc(geom, a.outer_r, notch_area, 0.7 + f64::from(k), style)?;
                let solved = l1tv_core::mincut::minimize(&omega, &params, &stencil)?;
                let achieved = exact_to_f64(&info.achieved_area);
                let rec = verify::check_deficit_bound(
                    &solved.sigma,
                    info.center,
                    &params,
                    a.outer_r,
                    achieved.max(cell * 1e-6),
                )?;
                let curve = verify::deficit_curve(
                    &solved.sigma,
                    info.center,
                    &params,
                    a.epsilon,
                    a.iso_c,
                    8,
                )?;
                let curve_bound = curve.comparison[0] + verify::area_tolerance(geom);
                let curve_pass = curve.missing[0] <= curve_bound;
                pass &= rec.pass && curve_pass;
                rows.push(report::DeficitSweepRowJson {
                    notch_area,
                    style: match style {
                        NotchStyle::BoundaryBite => "bite".into(),
                        NotchStyle::InteriorHole => "hole".into(),
                    },
                    achieved_area: achieved,
                    missing_area: rec.missing_area,
                    bound: rec.bound,
                    tolerance: rec.tolerance,
                    pass: rec.pass,
                    curve_value: curve.missing[0],
                    curve_bound,
                    curve_pass,
                });
            }
        }
        all_pass &= pass;
        println!(
            "deficit (missing-area bound): {} — {} fixtures",
            pass_str(pass),
            rows.len()
        );
        Some(report::DeficitSweepJson {
            rows,
            all_pass: pass,
        })
    } else {
        None
    };

    let roots = if run_roots {
        let rep = verify::check_root_identities(a.seed, a.root_trials);
        all_pass &= rep.all_pass;
        println!(
            "roots (Vieta identities): {} — max rel err {:.2e}",
            pass_str(rep.all_pass),
            rep.max_sum_rel_err.max(rep.max_prod_rel_err)
        );
        Some((&rep).into())
    } else {
        None
    };

    if let Some(path) = &a.report {
        let rep = report::VerifyReport {
            meta: Meta::new(invocation)
                .with_params(&params)
                .with_stencil(&stencil)
                .with_seed(a.seed),
            thm1,
            thm2,
            vanishing,
            deficit,
            roots,
            all_pass,
        };
        write_json(path, &rep)?;
    }
    println!("verify: {}", pass_str(all_pass));
    Ok(all_pass)
}

fn pass_str(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}
