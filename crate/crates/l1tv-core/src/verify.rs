//! Executable forms of the minimizer characterizations.
//!
//! Each check turns a continuum statement about minimizers of
//! `Per(S) + lambda |S xor Omega|` into a falsifiable discrete inequality
//! with a published discretization budget:
//!
//! * **Contained-ball union** ([`check_ball_union`]): unioning any disc of
//!   radius `R (1 + margin)` contained in the input into the solved
//!   minimizer must not raise the energy beyond the budget; likewise on the
//!   complement side, removing a disc contained in the input's complement.
//! * **Notched ball** ([`check_notched_ball`]): if a disc of radius
//!   `r_hat > R` misses the input by less than the deficit thresholds, a
//!   slightly shrunken concentric disc can be added for free, and the
//!   `R`-disc misses the minimizer by at most six times the defect.
//! * **Vanishing threshold** ([`check_vanishing`]): discs below the
//!   critical radius minimize to the empty set, above it they survive.
//! * **Root bounds** ([`sqrt_overlap_roots`]): the quadratic whose roots
//!   bound `sqrt(|B_r & S|)` for any minimizer, with its Vieta identities.
//!
//! The discretization budget `tol_disc` for energy inequalities is
//! `anisotropy(stencil) * Per(B) + lambda * band_area(B)`, where the band
//! is the set of cells within one spacing of the ideal circle; both factors
//! are computed per disc and published in every report. Area inequalities
//! use the plain raster allowance `6 h^2`.

use alloc::vec::Vec;

use crate::energy::{delta_energy_ball_union, energy, EnergyParams};
use crate::error::{Error, Result};
use crate::fixtures::{notched_disc, NotchStyle};
use crate::grid::{BinaryMask, DiscSpec, GridGeom};
use crate::math;
use crate::mincut::{minimize, SolveResult};
use crate::morphology::erode;
use crate::perimeter::{perimeter, Stencil};
use crate::rng::Rng;
use crate::{exact_to_f64, Exact};

// ---------------------------------------------------------------------------
// Parameter intervals and deficit thresholds
// ---------------------------------------------------------------------------

/// Open-interval factors admissible for the notched-ball property in
/// dimension `n`: returns `(outer_max, eps_max)` such that the outer radius
/// must lie in `(R, outer_max * R)` and the shrink factor in
/// `(0, eps_max)`.
///
/// `outer_max = (2 - ((n-1)/n)^n)^(1/n)`, `eps_max = 1 - 2^(-1/n)`;
/// at `n = 2` these reduce to `sqrt(7)/2` and `1 - 1/sqrt(2)`.
pub fn admissible_interval_factors(n: u32) -> (f64, f64) {
    let nf = f64::from(n);
    let outer = math::powf(2.0 - math::powf((nf - 1.0) / nf, nf), 1.0 / nf);
    let eps = 1.0 - math::powf(2.0, -1.0 / nf);
    (outer, eps)
}

/// The four admissible bounds on the defect area `delta = |B_rhat \ Omega|`,
/// all in area units, for the planar case.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeficitThresholds {
    /// `pi R / 4 * (r_hat - R)`: keeps the lower root negative for every
    /// perturbation radius up to `r_hat`.
    pub interval_bound: f64,
    /// `pi R^2 / 8`: keeps the roots at radius `R` real and distinct.
    pub root_bound: f64,
    /// `pi R^2 / 24`: keeps the missing area under a quarter of the disc.
    pub area_bound: f64,
    /// `C^2 R^2 / 24 * (1 - e^{-eps})^2`: drives the comparison decay to
    /// zero before the shrunken radius.
    pub decay_bound: f64,
    /// Minimum of the four.
    pub effective: f64,
}

/// Evaluates the deficit thresholds for `(R, r_hat, eps, C)`, validating
/// the parameter intervals. Only the planar formulas are defined; pass
/// `dimension_n = 2` callers' parameters through
/// [`admissible_interval_factors`] for other dimensions.
pub fn deficit_thresholds(
    critical_r: f64,
    outer_r: f64,
    epsilon: f64,
    iso_c: f64,
) -> Result<DeficitThresholds> {
    if !critical_r.is_finite() || critical_r <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "critical_r",
            reason: "must be finite and > 0",
        });
    }
    if !iso_c.is_finite() || iso_c <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "iso_c",
            reason: "must be finite and > 0",
        });
    }
    let (outer_max, eps_max) = admissible_interval_factors(2);
    if !(outer_r > critical_r && outer_r < outer_max * critical_r) {
        return Err(Error::OutsideInterval {
            name: "outer_r",
            value: outer_r,
            lo: critical_r,
            hi: outer_max * critical_r,
        });
    }
    if !(epsilon > 0.0 && epsilon < eps_max) {
        return Err(Error::OutsideInterval {
            name: "epsilon",
            value: epsilon,
            lo: 0.0,
            hi: eps_max,
        });
    }
    let pi = core::f64::consts::PI;
    let r2 = critical_r * critical_r;
    let interval_bound = pi * critical_r / 4.0 * (outer_r - critical_r);
    let root_bound = pi * r2 / 8.0;
    let area_bound = pi * r2 / 24.0;
    let em = 1.0 - math::exp(-epsilon);
    let decay_bound = iso_c * iso_c * r2 / 24.0 * em * em;
    let effective = interval_bound
        .min(root_bound)
        .min(area_bound)
        .min(decay_bound);
    Ok(DeficitThresholds {
        interval_bound,
        root_bound,
        area_bound,
        decay_bound,
        effective,
    })
}

// ---------------------------------------------------------------------------
// Quadratic root bounds on sqrt(|B_r & S|)
// ---------------------------------------------------------------------------

/// Roots of the quadratic
/// `f(x) = (2/R) x^2 - 2 sqrt(pi) x + (4 delta / R + 2 pi r - 2 pi r^2 / R)`:
/// for a minimizer, `sqrt(|B_r & S|)` cannot lie strictly between them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqrtOverlapRoots {
    /// `pi R^2/4 + pi r (r - R) - 2 delta`; negative means no real roots.
    pub discriminant: f64,
    /// `(lower, upper)` when the discriminant is nonnegative.
    pub roots: Option<(f64, f64)>,
}

impl SqrtOverlapRoots {
    pub fn lower(&self) -> Option<f64> {
        self.roots.map(|(lo, _)| lo)
    }

    pub fn upper(&self) -> Option<f64> {
        self.roots.map(|(_, hi)| hi)
    }
}

/// See [`SqrtOverlapRoots`]. A negative discriminant is reported as data,
/// not an error; no roots are fabricated.
pub fn sqrt_overlap_roots(r: f64, critical_r: f64, delta: f64) -> Result<SqrtOverlapRoots> {
    if !r.is_finite() || r <= 0.0 || !critical_r.is_finite() || critical_r <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "radius",
            reason: "must be finite and > 0",
        });
    }
    if delta < 0.0 {
        return Err(Error::InvalidParameter {
            name: "delta",
            reason: "must be >= 0",
        });
    }
    let pi = core::f64::consts::PI;
    let quarter = pi * critical_r * critical_r / 4.0;
    let discriminant = quarter + pi * r * (r - critical_r) - 2.0 * delta;
    let roots = if discriminant >= 0.0 {
        let a = math::sqrt(quarter);
        let d = math::sqrt(discriminant);
        Some((a - d, a + d))
    } else {
        None
    };
    Ok(SqrtOverlapRoots {
        discriminant,
        roots,
    })
}

/// Vieta sweep over seeded `(r, R, delta)` triples: the computed roots must
/// satisfy `lo + hi = R sqrt(pi)` and `lo * hi = 2 delta + pi r (R - r)` to
/// within `1e-12`, relative to the scale of the dominant root.
#[derive(Debug, Clone, Copy)]
pub struct RootIdentityReport {
    pub trials: u64,
    pub evaluated: u64,
    pub max_sum_rel_err: f64,
    pub max_prod_rel_err: f64,
    /// Relative spread of the double root at the exact root-bound defect.
    pub boundary_rel_err: f64,
    pub tolerance: f64,
    pub all_pass: bool,
}

pub fn check_root_identities(seed: u64, trials: u64) -> RootIdentityReport {
    let pi = core::f64::consts::PI;
    let mut rng = Rng::new(seed);
    let tolerance = 1e-12;
    let mut evaluated = 0;
    let mut max_sum = 0.0f64;
    let mut max_prod = 0.0f64;
    for _ in 0..trials {
        let critical_r = rng.range_f64(1.0, 100.0);
        let r = rng.range_f64(0.3, 1.4) * critical_r;
        let delta = rng.range_f64(0.0, pi * critical_r * critical_r / 8.0);
        let out = sqrt_overlap_roots(r, critical_r, delta).unwrap();
        let Some((lo, hi)) = out.roots else { continue };
        evaluated += 1;
        let sum_want = critical_r * math::sqrt(pi);
        let prod_want = 2.0 * delta + pi * r * (critical_r - r);
        let sum_err = ((lo + hi) - sum_want).abs() / sum_want;
        // The product can pass through zero; normalize by the dominant
        // root's square, the natural scale of the quadratic.
        let prod_err = ((lo * hi) - prod_want).abs() / (hi * hi).max(1e-300);
        max_sum = max_sum.max(sum_err);
        max_prod = max_prod.max(prod_err);
    }
    // Double root at r = R, delta = pi R^2 / 8.
    let boundary = {
        let critical_r = 20.0;
        let delta = pi * critical_r * critical_r / 8.0;
        let out = sqrt_overlap_roots(critical_r, critical_r, delta).unwrap();
        match out.roots {
            Some((lo, hi)) => {
                let want = critical_r * math::sqrt(pi) / 2.0;
                ((hi - lo).abs() / want).max((lo - want).abs() / want)
            }
            None => f64::INFINITY,
        }
    };
    let all_pass = max_sum <= tolerance && max_prod <= tolerance && boundary <= tolerance;
    RootIdentityReport {
        trials,
        evaluated,
        max_sum_rel_err: max_sum,
        max_prod_rel_err: max_prod,
        boundary_rel_err: boundary,
        tolerance,
        all_pass,
    }
}

// ---------------------------------------------------------------------------
// Discretization budget
// ---------------------------------------------------------------------------

/// Published discretization budget for one test disc.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscTolerance {
    pub anisotropy: f64,
    /// Discrete perimeter of the rasterized disc, alone on the grid.
    pub disc_perimeter: f64,
    /// Area of the cells within one spacing of the ideal circle.
    pub band_area: f64,
    /// `anisotropy * disc_perimeter + lambda * band_area`.
    pub value: f64,
}

/// Budget for "adding this disc is energy-free": the stencil's directional
/// error applied to the disc boundary, plus the fidelity cost of the raster
/// band around the ideal circle.
pub fn disc_tolerance(
    disc: &DiscSpec,
    geom: GridGeom,
    stencil: &Stencil,
    params: &EnergyParams,
) -> DiscTolerance {
    let mask = disc.rasterize(geom);
    let disc_perimeter = exact_to_f64(&perimeter(&mask, stencil));
    let h = geom.spacing_f64();
    let (cx, cy) = disc.center();
    let r = disc.radius();
    let (lo2, hi2) = {
        let lo = (r - h).max(0.0);
        let hi = r + h;
        (lo * lo, hi * hi)
    };
    let mut band_cells: u64 = 0;
    let x_lo = (math::floor((cx - r - h) / h - 0.5).max(0.0)) as i64;
    let x_hi = (math::ceil((cx + r + h) / h - 0.5)).min(f64::from(geom.width() - 1)) as i64;
    let y_lo = (math::floor((cy - r - h) / h - 0.5).max(0.0)) as i64;
    let y_hi = (math::ceil((cy + r + h) / h - 0.5)).min(f64::from(geom.height() - 1)) as i64;
    for y in y_lo..=y_hi {
        for x in x_lo..=x_hi {
            let (px, py) = geom.cell_center(x as u32, y as u32);
            let d2 = (px - cx) * (px - cx) + (py - cy) * (py - cy);
            if d2 >= lo2 && d2 <= hi2 {
                band_cells += 1;
            }
        }
    }
    let band_area = band_cells as f64 * h * h;
    let anisotropy = stencil.anisotropy_bound();
    DiscTolerance {
        anisotropy,
        disc_perimeter,
        band_area,
        value: anisotropy * disc_perimeter + params.lambda_f64() * band_area,
    }
}

/// Raster allowance for area inequalities: six cells.
pub fn area_tolerance(geom: GridGeom) -> f64 {
    let h = geom.spacing_f64();
    6.0 * h * h
}

// ---------------------------------------------------------------------------
// Contained-ball union check
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct BallTrial {
    pub center: (f64, f64),
    pub radius: f64,
    pub delta_energy: Exact,
    pub tolerance: DiscTolerance,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct BallSideReport {
    /// Number of cells at which the test disc fits.
    pub candidate_centers: u64,
    pub trials: Vec<BallTrial>,
    /// No contained disc exists; the check holds vacuously.
    pub vacuous: bool,
    pub max_delta_energy: Option<f64>,
    pub all_pass: bool,
}

#[derive(Debug, Clone)]
pub struct BallUnionReport {
    pub test_radius: f64,
    pub margin_cells: u32,
    pub minimizer_energy: Exact,
    pub inside: BallSideReport,
    pub complement: BallSideReport,
    pub all_pass: bool,
}

fn sample_centers(eroded: &BinaryMask, trials: usize, rng: &mut Rng) -> (u64, Vec<(u32, u32)>) {
    let cells: Vec<(u32, u32)> = eroded.iter_set().collect();
    let total = cells.len() as u64;
    let picks = rng.sample_distinct(cells.len(), trials);
    (total, picks.into_iter().map(|i| cells[i]).collect())
}

/// For seeded trial discs of radius `R + margin_cells * h` fully contained
/// in the input (resp. its complement), asserts that unioning the disc into
/// the canonical minimizer (resp. carving it out) costs at most the
/// published budget.
pub fn check_ball_union(
    omega: &BinaryMask,
    params: &EnergyParams,
    stencil: &Stencil,
    trials: usize,
    seed: u64,
    margin_cells: u32,
) -> Result<BallUnionReport> {
    let geom = omega.geom();
    let h = geom.spacing_f64();
    let test_radius = params.critical_radius_f64() + f64::from(margin_cells) * h;
    let solved = minimize(omega, params, stencil)?;
    let sigma = &solved.sigma;
    let mut rng = Rng::new(seed);

    // Inside: centers where the disc fits in omega.
    let inside = {
        let (candidates, picks) = sample_centers(&erode(omega, test_radius), trials, &mut rng);
        let mut trials_out = Vec::with_capacity(picks.len());
        let mut max_delta: Option<f64> = None;
        let mut all_pass = true;
        for (x, y) in picks {
            let (cx, cy) = geom.cell_center(x, y);
            let disc = DiscSpec::new(cx, cy, test_radius)?;
            let delta = delta_energy_ball_union(sigma, &disc, omega, params, stencil)?;
            let tolerance = disc_tolerance(&disc, geom, stencil, params);
            let df = exact_to_f64(&delta);
            let pass = df <= tolerance.value;
            all_pass &= pass;
            max_delta = Some(max_delta.map_or(df, |m: f64| m.max(df)));
            trials_out.push(BallTrial {
                center: (cx, cy),
                radius: test_radius,
                delta_energy: delta,
                tolerance,
                pass,
            });
        }
        BallSideReport {
            candidate_centers: candidates,
            vacuous: candidates == 0,
            max_delta_energy: max_delta,
            all_pass,
            trials: trials_out,
        }
    };

    // Complement: centers (possibly off-grid) where the disc fits in the
    // unbounded complement; carving the disc out of sigma must be free.
    let complement = {
        let pad = (math::ceil(test_radius / h) as u32) + 2;
        let comp = omega.padded(pad, false)?.complement();
        let eroded = erode(&comp, test_radius);
        // Keep only centers whose disc can intersect the original grid.
        let cells: Vec<(u32, u32)> = eroded
            .iter_set()
            .filter(|&(x, y)| {
                let (cx, cy) = eroded.geom().cell_center(x, y);
                let (ox, oy) = (cx - f64::from(pad) * h, cy - f64::from(pad) * h);
                ox > -test_radius
                    && oy > -test_radius
                    && ox < f64::from(geom.width()) * h + test_radius
                    && oy < f64::from(geom.height()) * h + test_radius
            })
            .collect();
        let candidates = cells.len() as u64;
        let picks = rng.sample_distinct(cells.len(), trials);
        let mut trials_out = Vec::with_capacity(picks.len());
        let mut max_delta: Option<f64> = None;
        let mut all_pass = true;
        for i in picks {
            let (x, y) = cells[i];
            let (pcx, pcy) = eroded.geom().cell_center(x, y);
            let (cx, cy) = (pcx - f64::from(pad) * h, pcy - f64::from(pad) * h);
            let disc = DiscSpec::new(cx, cy, test_radius)?;
            let ball = disc.rasterize(geom);
            let trimmed = sigma.difference(&ball)?;
            let delta = energy(&trimmed, omega, params, stencil)?.total - solved.report.total;
            let tolerance = disc_tolerance(&disc, geom, stencil, params);
            let df = exact_to_f64(&delta);
            let pass = df <= tolerance.value;
            all_pass &= pass;
            max_delta = Some(max_delta.map_or(df, |m: f64| m.max(df)));
            trials_out.push(BallTrial {
                center: (cx, cy),
                radius: test_radius,
                delta_energy: delta,
                tolerance,
                pass,
            });
        }
        BallSideReport {
            candidate_centers: candidates,
            vacuous: candidates == 0,
            max_delta_energy: max_delta,
            all_pass,
            trials: trials_out,
        }
    };

    let all_pass = inside.all_pass && complement.all_pass;
    Ok(BallUnionReport {
        test_radius,
        margin_cells,
        minimizer_energy: solved.report.total,
        inside,
        complement,
        all_pass,
    })
}

// ---------------------------------------------------------------------------
// Deficit bound and comparison curve
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy)]
pub struct DeficitBoundRecord {
    /// Measured `|B_R \ sigma|` for the concentric critical disc.
    pub missing_area: f64,
    /// `6 * delta_measured`.
    pub bound: f64,
    /// Raster allowance added to the bound.
    pub tolerance: f64,
    pub pass: bool,
}

/// Checks `|B_R \ sigma| <= 6 delta + tol` for the critical disc concentric
/// with a disc of radius `outer_r` whose measured defect against the input
/// is `delta_measured`.
///
/// Precondition (reported, not asserted as a property failure): the defect
/// must be below the thresholds that keep the root argument alive —
/// `min(interval_bound, root_bound)`.
pub fn check_deficit_bound(
    sigma: &BinaryMask,
    center: (f64, f64),
    params: &EnergyParams,
    outer_r: f64,
    delta_measured: f64,
) -> Result<DeficitBoundRecord> {
    let critical_r = params.critical_radius_f64();
    let pi = core::f64::consts::PI;
    let interval_bound = pi * critical_r / 4.0 * (outer_r - critical_r);
    let root_bound = pi * critical_r * critical_r / 8.0;
    if !outer_r.is_finite() || outer_r <= critical_r {
        return Err(Error::PreconditionUnmet(
            "outer radius must exceed the critical radius",
        ));
    }
    if delta_measured >= interval_bound.min(root_bound) {
        return Err(Error::PreconditionUnmet(
            "defect not below the admissible thresholds",
        ));
    }
    let geom = sigma.geom();
    let ball = DiscSpec::new(center.0, center.1, critical_r)?.rasterize(geom);
    let missing = exact_to_f64(&ball.difference(sigma)?.area());
    let bound = 6.0 * delta_measured;
    let tolerance = area_tolerance(geom);
    Ok(DeficitBoundRecord {
        missing_area: missing,
        bound,
        tolerance,
        pass: missing <= bound + tolerance,
    })
}

/// Samples of the missing area `v(r) = |B_r \ sigma|` over
/// `[(1-eps) R, R]`, with the decay-comparison bound for each radius.
#[derive(Debug, Clone)]
pub struct DeficitCurve {
    pub radii: Vec<f64>,
    pub missing: Vec<f64>,
    /// `wbar(R - r) * e^{lambda (R - r)}`, the upper comparison for `v(r)`.
    pub comparison: Vec<f64>,
}

/// `sqrt(wbar(s)) = max(0, (C R / 2)(e^{-s/R} - 1) + sqrt(v_at_r))`.
pub fn comparison_decay_sqrt(s: f64, critical_r: f64, iso_c: f64, v_at_critical: f64) -> f64 {
    let t = iso_c * critical_r / 2.0 * (math::exp(-s / critical_r) - 1.0)
        + math::sqrt(v_at_critical.max(0.0));
    t.max(0.0)
}

pub fn deficit_curve(
    sigma: &BinaryMask,
    center: (f64, f64),
    params: &EnergyParams,
    epsilon: f64,
    iso_c: f64,
    samples: usize,
) -> Result<DeficitCurve> {
    let geom = sigma.geom();
    let critical_r = params.critical_radius_f64();
    let lambda = params.lambda_f64();
    let r_lo = (1.0 - epsilon) * critical_r;
    let n = samples.max(2);
    let ball_r = DiscSpec::new(center.0, center.1, critical_r)?.rasterize(geom);
    let v_at_critical = exact_to_f64(&ball_r.difference(sigma)?.area());
    let mut radii = Vec::with_capacity(n);
    let mut missing = Vec::with_capacity(n);
    let mut comparison = Vec::with_capacity(n);
    for i in 0..n {
        let r = r_lo + (critical_r - r_lo) * i as f64 / (n - 1) as f64;
        let ball = DiscSpec::new(center.0, center.1, r)?.rasterize(geom);
        let v = exact_to_f64(&ball.difference(sigma)?.area());
        let s = critical_r - r;
        let wb = comparison_decay_sqrt(s, critical_r, iso_c, v_at_critical);
        radii.push(r);
        missing.push(v);
        comparison.push(wb * wb * math::exp(lambda * s));
    }
    Ok(DeficitCurve {
        radii,
        missing,
        comparison,
    })
}

// ---------------------------------------------------------------------------
// Notched-ball check
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct NotchedBallConfig {
    pub geom: GridGeom,
    pub params: EnergyParams,
    /// `r_hat`, the almost-contained radius.
    pub outer_r: f64,
    pub epsilon: f64,
    pub iso_c: f64,
    /// Requested defect area; must stay below the effective threshold.
    pub notch_area: f64,
    /// Number of notch placements (angles around the boundary).
    pub placements: usize,
    pub style: NotchStyle,
    pub margin_cells: u32,
    pub seed: u64,
    pub curve_samples: usize,
}

#[derive(Debug, Clone)]
pub struct NotchPlacementRecord {
    pub angle: f64,
    pub achieved_notch_area: f64,
    /// Energy increment of unioning the shrunken disc into the minimizer.
    pub union_delta_energy: Exact,
    pub union_tolerance: DiscTolerance,
    pub union_pass: bool,
    /// The shrunken disc is contained in the augmented minimizer.
    pub containment_pass: bool,
    pub deficit: DeficitBoundRecord,
    /// Measured `v((1-eps) R)` against the comparison decay bound.
    pub curve_value: f64,
    pub curve_bound: f64,
    pub curve_pass: bool,
}

#[derive(Debug, Clone)]
pub struct NotchedBallReport {
    pub thresholds: DeficitThresholds,
    /// Radius of the disc whose free union is asserted:
    /// `(1 - eps) R - margin_cells * h`.
    pub shrunken_radius: f64,
    pub placements: Vec<NotchPlacementRecord>,
    pub all_pass: bool,
}

/// Builds a notched disc of radius `r_hat` per placement, solves, and
/// asserts: the shrunken concentric disc unions into the minimizer within
/// the budget (and is contained in the augmented set), the critical disc
/// misses the minimizer by at most `6 delta`, and the measured deficit
/// curve respects the decay comparison.
pub fn check_notched_ball(cfg: &NotchedBallConfig) -> Result<NotchedBallReport> {
    let params = cfg.params;
    let critical_r = params.critical_radius_f64();
    let thresholds = deficit_thresholds(critical_r, cfg.outer_r, cfg.epsilon, cfg.iso_c)?;
    if cfg.notch_area >= thresholds.effective {
        return Err(Error::PreconditionUnmet(
            "requested notch area not below the effective threshold",
        ));
    }
    let h = cfg.geom.spacing_f64();
    let shrunken_radius = (1.0 - cfg.epsilon) * critical_r - f64::from(cfg.margin_cells) * h;
    if shrunken_radius <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "margin_cells",
            reason: "shrunken radius vanished",
        });
    }
    let stencil = Stencil::n16();
    let mut rng = Rng::new(cfg.seed);
    let angle0 = rng.range_f64(0.0, core::f64::consts::PI * 2.0);

    let mut placements = Vec::with_capacity(cfg.placements);
    let mut all_pass = true;
    for i in 0..cfg.placements {
        let angle = angle0 + core::f64::consts::PI * 2.0 * i as f64 / cfg.placements.max(1) as f64;
        let (omega, info) = notched_disc(cfg.geom, cfg.outer_r, cfg.notch_area, angle, cfg.style)?;
        let achieved = exact_to_f64(&info.achieved_area);
        if achieved >= thresholds.effective {
            return Err(Error::PreconditionUnmet(
                "achieved notch area not below the effective threshold",
            ));
        }
        let solved: SolveResult = minimize(&omega, &params, &stencil)?;
        let center = info.center;

        let disc = DiscSpec::new(center.0, center.1, shrunken_radius)?;
        let union_delta = delta_energy_ball_union(&solved.sigma, &disc, &omega, &params, &stencil)?;
        let union_tolerance = disc_tolerance(&disc, cfg.geom, &stencil, &params);
        let union_pass = exact_to_f64(&union_delta) <= union_tolerance.value;

        let ball = disc.rasterize(cfg.geom);
        let augmented = solved.sigma.union(&ball)?;
        let containment_pass = ball.is_subset_of(&augmented)?;

        let deficit = check_deficit_bound(&solved.sigma, center, &params, cfg.outer_r, achieved)?;

        let curve = deficit_curve(
            &solved.sigma,
            center,
            &params,
            cfg.epsilon,
            cfg.iso_c,
            cfg.curve_samples,
        )?;
        let curve_value = curve.missing[0];
        let curve_bound = curve.comparison[0] + area_tolerance(cfg.geom);
        let curve_pass = curve_value <= curve_bound;

        all_pass &= union_pass && containment_pass && deficit.pass && curve_pass;
        placements.push(NotchPlacementRecord {
            angle,
            achieved_notch_area: achieved,
            union_delta_energy: union_delta,
            union_tolerance,
            union_pass,
            containment_pass,
            deficit,
            curve_value,
            curve_bound,
            curve_pass,
        });
    }
    Ok(NotchedBallReport {
        thresholds,
        shrunken_radius,
        placements,
        all_pass,
    })
}

// ---------------------------------------------------------------------------
// Sandwich consistency
// ---------------------------------------------------------------------------

/// Consistency of the morphological bounds with the solver: growing the
/// canonical minimizer to cover the inner bound, or trimming it into the
/// outer bound, must be energy-free within the published budget.
#[derive(Debug, Clone)]
pub struct SandwichCheckReport {
    pub bound_radius: f64,
    pub minimizer_energy: Exact,
    /// `E(sigma | inner) - E(sigma)` and its budget.
    pub grow_delta: Exact,
    pub grow_tolerance: f64,
    pub grow_pass: bool,
    /// `E(sigma & outer) - E(sigma)` and its budget.
    pub trim_delta: Exact,
    pub trim_tolerance: f64,
    pub trim_pass: bool,
    pub all_pass: bool,
}

/// Budget for unioning/intersecting a morphological bound into the
/// minimizer: the stencil's directional error on the bound's own boundary
/// plus the fidelity cost of the one-spacing band around it. Same structure
/// as [`disc_tolerance`], with the bound's raster boundary in place of the
/// ideal circle.
fn bound_tolerance(bound: &BinaryMask, stencil: &Stencil, params: &EnergyParams) -> f64 {
    let h = bound.geom().spacing_f64();
    let per = exact_to_f64(&perimeter(bound, stencil));
    let band = exact_to_f64(&crate::morphology::boundary_band_area(bound, h));
    stencil.anisotropy_bound() * per + params.lambda_f64() * band
}

pub fn check_sandwich(
    omega: &BinaryMask,
    params: &EnergyParams,
    stencil: &Stencil,
    margin_cells: u32,
) -> Result<SandwichCheckReport> {
    let bounds = crate::morphology::sandwich_bounds_with(omega, params, margin_cells)?;
    let solved = minimize(omega, params, stencil)?;
    let base = solved.report.total;

    let grown = solved.sigma.union(&bounds.inner)?;
    let grow_delta = energy(&grown, omega, params, stencil)?.total - base;
    let grow_tolerance = bound_tolerance(&bounds.inner, stencil, params);
    let grow_pass = exact_to_f64(&grow_delta) <= grow_tolerance;

    let trimmed = solved.sigma.intersection(&bounds.outer)?;
    let trim_delta = energy(&trimmed, omega, params, stencil)?.total - base;
    let trim_tolerance = bound_tolerance(&bounds.outer, stencil, params);
    let trim_pass = exact_to_f64(&trim_delta) <= trim_tolerance;

    Ok(SandwichCheckReport {
        bound_radius: bounds.radius,
        minimizer_energy: base,
        grow_delta,
        grow_tolerance,
        grow_pass,
        trim_delta,
        trim_tolerance,
        trim_pass,
        all_pass: grow_pass && trim_pass,
    })
}

// ---------------------------------------------------------------------------
// Vanishing threshold check
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VanishingClass {
    /// `r <= R - 2h`: the minimizer must be empty.
    Vanishes,
    /// Within `2h` of the critical radius: reported, not asserted.
    Transition,
    /// `r >= R + 2h`: the minimizer must keep most of the disc.
    Survives,
}

#[derive(Debug, Clone, Copy)]
pub struct VanishingRow {
    pub radius: f64,
    pub omega_area: f64,
    pub sigma_area: f64,
    pub class: VanishingClass,
    /// `None` in the transition band.
    pub pass: Option<bool>,
}

#[derive(Debug, Clone)]
pub struct VanishingReport {
    pub critical_radius: f64,
    /// Fraction of the input area a surviving disc must keep.
    pub survive_fraction: f64,
    pub rows: Vec<VanishingRow>,
    pub all_pass: bool,
}

/// Solves centered discs across the given radii and asserts the vanishing
/// threshold at the critical radius, with a `2h` transition band.
pub fn check_vanishing(
    geom: GridGeom,
    params: &EnergyParams,
    stencil: &Stencil,
    radii: &[f64],
    survive_fraction: f64,
) -> Result<VanishingReport> {
    let critical = params.critical_radius_f64();
    let h = geom.spacing_f64();
    let mut rows = Vec::with_capacity(radii.len());
    let mut all_pass = true;
    for &r in radii {
        let omega = crate::fixtures::centered_disc(geom, r)?;
        let solved = minimize(&omega, params, stencil)?;
        let omega_area = exact_to_f64(&omega.area());
        let sigma_area = exact_to_f64(&solved.sigma.area());
        let (class, pass) = if r <= critical - 2.0 * h {
            (VanishingClass::Vanishes, Some(solved.sigma.is_empty()))
        } else if r >= critical + 2.0 * h {
            (
                VanishingClass::Survives,
                Some(sigma_area >= survive_fraction * omega_area),
            )
        } else {
            (VanishingClass::Transition, None)
        };
        if let Some(p) = pass {
            all_pass &= p;
        }
        rows.push(VanishingRow {
            radius: r,
            omega_area,
            sigma_area,
            class,
            pass,
        });
    }
    Ok(VanishingReport {
        critical_radius: critical,
        survive_fraction,
        rows,
        all_pass,
    })
}
