//! JSON report structures.
//!
//! Every report embeds a `meta` block — tool version, the exact invocation,
//! grid and stencil echoes (including the integer weight numerators and the
//! anisotropy bound) — so each number in the report can be reproduced from
//! the report alone. Reports contain no wall-clock fields; given the same
//! seed they are byte-reproducible.

use l1tv_core::energy::EnergyParams;
use l1tv_core::exact_to_f64;
use l1tv_core::verify::{
    BallUnionReport, DeficitThresholds, DiscTolerance, NotchedBallReport, RootIdentityReport,
    VanishingClass, VanishingReport,
};
use l1tv_core::{Exact, GridGeom, Stencil};
use serde::Serialize;

pub const TOOL: &str = "l1tv";

#[derive(Serialize)]
pub struct ExactJson {
    /// Reduced fraction, exact.
    pub exact: String,
    /// Rounded convenience view.
    pub value: f64,
}

impl From<&Exact> for ExactJson {
    fn from(x: &Exact) -> Self {
        ExactJson {
            exact: format!("{}/{}", x.numer(), x.denom()),
            value: exact_to_f64(x),
        }
    }
}

#[derive(Serialize)]
pub struct StencilEcho {
    pub name: String,
    pub offsets: Vec<(i32, i32)>,
    /// Weight numerators over `denominator`, per unit spacing.
    pub weight_numerators: Vec<i64>,
    pub denominator: i64,
    pub anisotropy_bound: f64,
}

impl From<&Stencil> for StencilEcho {
    fn from(s: &Stencil) -> Self {
        StencilEcho {
            name: s.name().to_string(),
            offsets: s.offsets().to_vec(),
            weight_numerators: s.unit_weight_numerators().to_vec(),
            denominator: s.denominator(),
            anisotropy_bound: s.anisotropy_bound(),
        }
    }
}

#[derive(Serialize)]
pub struct GridEcho {
    pub width: u32,
    pub height: u32,
    pub spacing: String,
}

impl From<GridGeom> for GridEcho {
    fn from(g: GridGeom) -> Self {
        GridEcho {
            width: g.width(),
            height: g.height(),
            spacing: format!("{}/{}", g.spacing().numer(), g.spacing().denom()),
        }
    }
}

#[derive(Serialize)]
pub struct Meta {
    pub tool: &'static str,
    pub version: &'static str,
    pub invocation: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridEcho>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<String>,
    #[serde(rename = "R", skip_serializing_if = "Option::is_none")]
    pub critical_radius: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stencil: Option<StencilEcho>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl Meta {
    pub fn new(invocation: Vec<String>) -> Self {
        Meta {
            tool: TOOL,
            version: env!("CARGO_PKG_VERSION"),
            invocation,
            grid: None,
            lambda: None,
            critical_radius: None,
            stencil: None,
            seed: None,
        }
    }

    pub fn with_grid(mut self, g: GridGeom) -> Self {
        self.grid = Some(g.into());
        self
    }

    pub fn with_params(mut self, p: &EnergyParams) -> Self {
        let l = p.lambda();
        self.lambda = Some(format!("{}/{}", l.numer(), l.denom()));
        self.critical_radius = Some(p.critical_radius_f64());
        self
    }

    pub fn with_stencil(mut self, s: &Stencil) -> Self {
        self.stencil = Some(s.into());
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }
}

/// Energy breakdown in the published field layout.
#[derive(Serialize)]
pub struct EnergyJson {
    pub perimeter: ExactJson,
    pub fidelity: ExactJson,
    pub total: ExactJson,
    pub lambda: String,
    #[serde(rename = "R")]
    pub critical_radius: f64,
    pub stencil: String,
}

impl From<&l1tv_core::energy::EnergyReport> for EnergyJson {
    fn from(r: &l1tv_core::energy::EnergyReport) -> Self {
        let l = r.params.lambda();
        EnergyJson {
            perimeter: (&r.perimeter_term).into(),
            fidelity: (&r.fidelity_term).into(),
            total: (&r.total).into(),
            lambda: format!("{}/{}", l.numer(), l.denom()),
            critical_radius: r.params.critical_radius_f64(),
            stencil: r.stencil_name.clone(),
        }
    }
}

#[derive(Serialize)]
pub struct SolveStatsJson {
    pub algorithm: String,
    pub augmentations: u64,
    pub orphans_processed: u64,
    pub pushes: u64,
    pub relabels: u64,
}

#[derive(Serialize)]
pub struct MinimizeReport {
    pub meta: Meta,
    pub side: String,
    pub border: String,
    pub energy: EnergyJson,
    /// Max-flow value; equals `energy.total` exactly (the cut construction
    /// absorbs no constant offset).
    pub flow: ExactJson,
    pub sigma_cells: u64,
    pub sigma_area: f64,
    pub stats: SolveStatsJson,
}

#[derive(Serialize)]
pub struct MaskSummary {
    pub path: String,
    pub cells: u64,
    pub area: f64,
}

#[derive(Serialize)]
pub struct BoundsReport {
    pub meta: Meta,
    pub radius: f64,
    pub margin_cells: u32,
    pub inner: MaskSummary,
    pub outer: MaskSummary,
    pub inner_subset_of_outer: bool,
}

#[derive(Serialize)]
pub struct OracleReport {
    pub meta: Meta,
    pub enumerated: u64,
    pub min_energy: ExactJson,
    pub minimizer_count: usize,
    /// Cell counts of each minimizer, smallest first.
    pub minimizer_cells: Vec<u64>,
}

#[derive(Serialize)]
pub struct SweepRow {
    pub lambda: String,
    #[serde(rename = "R")]
    pub critical_radius: f64,
    pub energy: EnergyJson,
    pub sigma_cells: u64,
    pub sigma_area: f64,
}

#[derive(Serialize)]
pub struct ContainmentObservation {
    pub lambda_small: String,
    pub lambda_large: String,
    /// Whether the small-lambda minimizer is contained in the large-lambda
    /// one. Reported, not asserted.
    pub nested: bool,
}

#[derive(Serialize)]
pub struct SweepReport {
    pub meta: Meta,
    pub rows: Vec<SweepRow>,
    pub containment: Vec<ContainmentObservation>,
}

#[derive(Serialize)]
pub struct FixtureManifest {
    pub meta: Meta,
    pub kind: String,
    pub output: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub disc_radius: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub notch: Option<NotchManifest>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub blobs: Option<Vec<(f64, f64, f64)>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub neck: Option<NeckManifest>,
    pub foreground_cells: u64,
    pub foreground_area: f64,
}

#[derive(Serialize)]
pub struct NotchManifest {
    pub center: (f64, f64),
    pub radius: f64,
    pub style: String,
    pub angle: f64,
    pub requested_area: f64,
    pub achieved_area: ExactJson,
    pub removed_cells: u64,
}

#[derive(Serialize)]
pub struct NeckManifest {
    pub blob_radius: f64,
    pub neck_width: f64,
    pub center_offset: f64,
}

// --- verify suites ---

#[derive(Serialize)]
pub struct DiscToleranceJson {
    pub anisotropy: f64,
    pub disc_perimeter: f64,
    pub band_area: f64,
    pub value: f64,
}

impl From<&DiscTolerance> for DiscToleranceJson {
    fn from(t: &DiscTolerance) -> Self {
        DiscToleranceJson {
            anisotropy: t.anisotropy,
            disc_perimeter: t.disc_perimeter,
            band_area: t.band_area,
            value: t.value,
        }
    }
}

#[derive(Serialize)]
pub struct BallTrialJson {
    pub center: (f64, f64),
    pub radius: f64,
    pub delta_energy: ExactJson,
    pub tol_disc: DiscToleranceJson,
    pub pass: bool,
}

#[derive(Serialize)]
pub struct BallSideJson {
    pub candidate_centers: u64,
    pub vacuous: bool,
    pub max_delta_energy: Option<f64>,
    pub trials: Vec<BallTrialJson>,
    pub all_pass: bool,
}

#[derive(Serialize)]
pub struct BallUnionJson {
    pub fixture_seed: u64,
    pub test_radius: f64,
    pub minimizer_energy: ExactJson,
    pub inside: BallSideJson,
    pub complement: BallSideJson,
    pub all_pass: bool,
}

fn side_json(s: &l1tv_core::verify::BallSideReport) -> BallSideJson {
    BallSideJson {
        candidate_centers: s.candidate_centers,
        vacuous: s.vacuous,
        max_delta_energy: s.max_delta_energy,
        trials: s
            .trials
            .iter()
            .map(|t| BallTrialJson {
                center: t.center,
                radius: t.radius,
                delta_energy: (&t.delta_energy).into(),
                tol_disc: (&t.tolerance).into(),
                pass: t.pass,
            })
            .collect(),
        all_pass: s.all_pass,
    }
}

pub fn ball_union_json(seed: u64, r: &BallUnionReport) -> BallUnionJson {
    BallUnionJson {
        fixture_seed: seed,
        test_radius: r.test_radius,
        minimizer_energy: (&r.minimizer_energy).into(),
        inside: side_json(&r.inside),
        complement: side_json(&r.complement),
        all_pass: r.all_pass,
    }
}

#[derive(Serialize)]
pub struct ThresholdsJson {
    pub interval_bound: f64,
    pub root_bound: f64,
    pub area_bound: f64,
    pub decay_bound: f64,
    pub effective: f64,
}

impl From<&DeficitThresholds> for ThresholdsJson {
    fn from(t: &DeficitThresholds) -> Self {
        ThresholdsJson {
            interval_bound: t.interval_bound,
            root_bound: t.root_bound,
            area_bound: t.area_bound,
            decay_bound: t.decay_bound,
            effective: t.effective,
        }
    }
}

#[derive(Serialize)]
pub struct NotchPlacementJson {
    pub angle: f64,
    pub achieved_notch_area: f64,
    pub union_delta_energy: ExactJson,
    pub union_tol_disc: DiscToleranceJson,
    pub union_pass: bool,
    pub containment_pass: bool,
    pub deficit_missing_area: f64,
    pub deficit_bound: f64,
    pub deficit_tolerance: f64,
    pub deficit_pass: bool,
    pub curve_value: f64,
    pub curve_bound: f64,
    pub curve_pass: bool,
}

#[derive(Serialize)]
pub struct NotchedBallJson {
    pub thresholds: ThresholdsJson,
    pub shrunken_radius: f64,
    pub placements: Vec<NotchPlacementJson>,
    pub all_pass: bool,
}

pub fn notched_ball_json(r: &NotchedBallReport) -> NotchedBallJson {
    NotchedBallJson {
        thresholds: (&r.thresholds).into(),
        shrunken_radius: r.shrunken_radius,
        placements: r
            .placements
            .iter()
            .map(|p| NotchPlacementJson {
                angle: p.angle,
                achieved_notch_area: p.achieved_notch_area,
                union_delta_energy: (&p.union_delta_energy).into(),
                union_tol_disc: (&p.union_tolerance).into(),
                union_pass: p.union_pass,
                containment_pass: p.containment_pass,
                deficit_missing_area: p.deficit.missing_area,
                deficit_bound: p.deficit.bound,
                deficit_tolerance: p.deficit.tolerance,
                deficit_pass: p.deficit.pass,
                curve_value: p.curve_value,
                curve_bound: p.curve_bound,
                curve_pass: p.curve_pass,
            })
            .collect(),
        all_pass: r.all_pass,
    }
}

#[derive(Serialize)]
pub struct VanishingRowJson {
    pub radius: f64,
    pub omega_area: f64,
    pub sigma_area: f64,
    pub class: String,
    pub pass: Option<bool>,
}

#[derive(Serialize)]
pub struct VanishingJson {
    #[serde(rename = "R")]
    pub critical_radius: f64,
    pub survive_fraction: f64,
    pub rows: Vec<VanishingRowJson>,
    pub all_pass: bool,
}

pub fn vanishing_json(r: &VanishingReport) -> VanishingJson {
    VanishingJson {
        critical_radius: r.critical_radius,
        survive_fraction: r.survive_fraction,
        rows: r
            .rows
            .iter()
            .map(|row| VanishingRowJson {
                radius: row.radius,
                omega_area: row.omega_area,
                sigma_area: row.sigma_area,
                class: match row.class {
                    VanishingClass::Vanishes => "vanishes".into(),
                    VanishingClass::Transition => "transition".into(),
                    VanishingClass::Survives => "survives".into(),
                },
                pass: row.pass,
            })
            .collect(),
        all_pass: r.all_pass,
    }
}

#[derive(Serialize)]
pub struct RootsJson {
    pub trials: u64,
    pub evaluated: u64,
    pub max_sum_rel_err: f64,
    pub max_prod_rel_err: f64,
    pub boundary_rel_err: f64,
    pub tolerance: f64,
    pub all_pass: bool,
}

impl From<&RootIdentityReport> for RootsJson {
    fn from(r: &RootIdentityReport) -> Self {
        RootsJson {
            trials: r.trials,
            evaluated: r.evaluated,
            max_sum_rel_err: r.max_sum_rel_err,
            max_prod_rel_err: r.max_prod_rel_err,
            boundary_rel_err: r.boundary_rel_err,
            tolerance: r.tolerance,
            all_pass: r.all_pass,
        }
    }
}

#[derive(Serialize)]
pub struct DeficitSweepRowJson {
    pub notch_area: f64,
    pub style: String,
    pub achieved_area: f64,
    pub missing_area: f64,
    pub bound: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub curve_value: f64,
    pub curve_bound: f64,
    pub curve_pass: bool,
}

#[derive(Serialize)]
pub struct DeficitSweepJson {
    pub rows: Vec<DeficitSweepRowJson>,
    pub all_pass: bool,
}

#[derive(Serialize)]
pub struct VerifyReport {
    pub meta: Meta,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub thm1: Option<Vec<BallUnionJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub thm2: Option<NotchedBallJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vanishing: Option<VanishingJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub deficit: Option<DeficitSweepJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub roots: Option<RootsJson>,
    pub all_pass: bool,
}

pub fn to_json_bytes<T: Serialize>(value: &T) -> anyhow::Result<Vec<u8>> {
    let mut out = serde_json::to_vec_pretty(value)?;
    out.push(b'\n');
    Ok(out)
}
