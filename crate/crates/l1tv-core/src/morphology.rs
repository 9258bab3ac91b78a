//! Euclidean-disc erosion, dilation, opening, and the inner/outer sandwich
//! bounds on minimizers.
//!
//! Erosion is thresholded on an exact squared Euclidean distance transform
//! (two-pass separable lower-envelope algorithm over integer squared
//! distances), so erosion and opening are bit-reproducible. The opening by
//! radius `r` equals the union of all rasterized `r`-discs centered at cells
//! and contained in the mask.

use alloc::vec;
use alloc::vec::Vec;

use crate::energy::EnergyParams;
use crate::error::{Error, Result};
use crate::grid::BinaryMask;
use crate::math;

/// Default sandwich margin, in cells, added on top of the critical radius.
///
/// The contained-ball property is sharp exactly at the critical radius;
/// rasterization noise right at the threshold produces false positives,
/// while any radius at or above it keeps the property true (a bigger ball
/// contains a critical one). Two cells of slack absorb the raster band.
pub const DEFAULT_MARGIN_CELLS: u32 = 2;

const FAR: i64 = i64::MAX / 4;

/// Exact squared distance (in cell units) from each cell to the nearest
/// cell where `is_site` holds; `outside_is_site` controls whether the
/// infinite region beyond the grid counts as sites.
fn squared_distance_transform(
    mask: &BinaryMask,
    site_value: bool,
    outside_is_site: bool,
) -> Vec<i64> {
    let w = mask.geom().width() as usize;
    let h = mask.geom().height() as usize;

    // Pass 1: per column, distance in rows to the nearest site.
    let mut rowdist = vec![FAR; w * h];
    for x in 0..w {
        let mut d = if outside_is_site { 1i64 } else { FAR };
        for y in 0..h {
            if mask.get(x as u32, y as u32) == site_value {
                d = 0;
            }
            rowdist[y * w + x] = d;
            if d < FAR {
                d += 1;
            }
        }
        let mut d = if outside_is_site { 1i64 } else { FAR };
        for y in (0..h).rev() {
            if mask.get(x as u32, y as u32) == site_value {
                d = 0;
            }
            let i = y * w + x;
            rowdist[i] = rowdist[i].min(d);
            if d < FAR {
                d += 1;
            }
        }
    }

    // Pass 2: per row, lower envelope of parabolas i -> (x-i)^2 + g(i)^2.
    let mut out = vec![FAR; w * h];
    let mut sites: Vec<(i64, i64)> = Vec::with_capacity(w + 2); // (column, g)
    let mut hull: Vec<(usize, i64)> = Vec::with_capacity(w + 2); // (site idx, start x)
    for y in 0..h {
        sites.clear();
        if outside_is_site {
            sites.push((-1, 0));
        }
        for x in 0..w {
            let g = rowdist[y * w + x];
            if g < FAR {
                sites.push((x as i64, g));
            }
        }
        if outside_is_site {
            sites.push((w as i64, 0));
        }
        if sites.is_empty() {
            continue;
        }

        let f = |s: (i64, i64), x: i64| -> i64 { (x - s.0) * (x - s.0) + s.1 * s.1 };
        // First integer x where parabola b beats (or ties) parabola a.
        let crossover = |a: (i64, i64), b: (i64, i64)| -> i64 {
            // Solve (x-a0)^2 + a1^2 >= (x-b0)^2 + b1^2 for x, a0 < b0.
            let num = b.0 * b.0 + b.1 * b.1 - a.0 * a.0 - a.1 * a.1;
            let den = 2 * (b.0 - a.0);
            // ceil(num / den) with positive den
            let q = num.div_euclid(den);
            if num.rem_euclid(den) == 0 {
                q
            } else {
                q + 1
            }
        };

        hull.clear();
        for (i, &s) in sites.iter().enumerate() {
            loop {
                match hull.last() {
                    None => {
                        hull.push((i, i64::MIN));
                        break;
                    }
                    Some(&(j, start)) => {
                        let x0 = crossover(sites[j], s);
                        if x0 <= start {
                            hull.pop();
                        } else {
                            hull.push((i, x0));
                            break;
                        }
                    }
                }
            }
        }

        let mut k = 0;
        for x in 0..w {
            while k + 1 < hull.len() && hull[k + 1].1 <= x as i64 {
                k += 1;
            }
            out[y * w + x] = f(sites[hull[k].0], x as i64);
        }
    }
    out
}

/// Squared cell-unit distance to the nearest background cell, counting the
/// region beyond the grid as background.
pub fn distance_sq_to_background(mask: &BinaryMask) -> Vec<i64> {
    squared_distance_transform(mask, false, true)
}

/// Squared cell-unit distance to the nearest foreground cell (`FAR`-like
/// sentinel when the mask is empty).
pub fn distance_sq_to_foreground(mask: &BinaryMask) -> Vec<i64> {
    squared_distance_transform(mask, true, false)
}

/// Keeps exactly the cells whose rasterized `radius`-disc lies entirely in
/// the mask. `radius` is in length units; radius 0 is the identity.
pub fn erode(mask: &BinaryMask, radius: f64) -> BinaryMask {
    debug_assert!(radius >= 0.0);
    let geom = mask.geom();
    let h = geom.spacing_f64();
    let r_cells_sq = (radius / h) * (radius / h);
    let dist = distance_sq_to_background(mask);
    let w = geom.width();
    BinaryMask::from_fn(geom, |x, y| {
        let d = dist[(y * w + x) as usize];
        // The disc at this cell covers every cell with d^2 <= r^2; it fits
        // iff the nearest background cell lies strictly beyond.
        d as f64 > r_cells_sq
    })
}

/// Cells within `radius` of some foreground cell.
pub fn dilate(mask: &BinaryMask, radius: f64) -> BinaryMask {
    debug_assert!(radius >= 0.0);
    let geom = mask.geom();
    let h = geom.spacing_f64();
    let r_cells_sq = (radius / h) * (radius / h);
    let dist = distance_sq_to_foreground(mask);
    let w = geom.width();
    BinaryMask::from_fn(geom, |x, y| {
        (dist[(y * w + x) as usize] as f64) <= r_cells_sq
    })
}

/// Union of all rasterized `radius`-discs (cell-centered) contained in the
/// mask: `dilate(erode(mask))`. Anti-extensive and idempotent, bit-exactly.
///
/// Unlike the continuum operator this is not monotone in the radius for
/// radii near the cell size: a rasterized larger disc can have corner cells
/// no contained smaller disc covers (e.g. a 3x3 block is the radius-1.7
/// disc, but radius-1.0 discs are plus-shapes that miss its corners).
/// Erosion is monotone in the radius without exception.
pub fn opening(mask: &BinaryMask, radius: f64) -> BinaryMask {
    dilate(&erode(mask, radius), radius)
}

/// Area of the cells within `width` of the mask's boundary on either side:
/// `dilate(mask, width) \ erode(mask, width)`, in length units.
pub fn boundary_band_area(mask: &BinaryMask, width: f64) -> crate::Exact {
    let band = dilate(mask, width)
        .difference(&erode(mask, width))
        .expect("same geometry");
    band.area()
}

/// Opening of the *complement* of `mask` treating everything beyond the
/// grid as foreground (the complement of a bounded set is unbounded), then
/// cropped back and complemented: the outer sandwich bound.
///
/// Implemented on a grid padded far enough that the pad border cannot
/// influence any original cell.
pub fn outer_bound_via_complement(mask: &BinaryMask, radius: f64) -> Result<BinaryMask> {
    let geom = mask.geom();
    let h = geom.spacing_f64();
    let pad = (math::ceil(2.0 * radius / h) as u32).max(1) + 2;
    let comp_padded = mask.padded(pad, false)?.complement();
    let opened = opening(&comp_padded, radius);
    let cropped = opened.cropped(pad, geom.width(), geom.height())?;
    Ok(cropped.complement())
}

/// Inner and outer containment bounds for minimizers at one parameter
/// setting: every minimizer-compatible set can be grown to cover `inner`
/// and trimmed to stay inside `outer` without raising the energy.
#[derive(Debug, Clone)]
pub struct SandwichBounds {
    /// Union of all contained discs of the bound radius inside the input.
    pub inner: BinaryMask,
    /// Complement of the same construction applied to the complement.
    pub outer: BinaryMask,
    /// Radius actually used, `R * (1 + margin)`, in length units.
    pub radius: f64,
    /// Critical radius `R = n / lambda`.
    pub critical_radius: f64,
    pub margin_cells: u32,
}

/// [`sandwich_bounds_with`] at the default two-cell margin.
pub fn sandwich_bounds(omega: &BinaryMask, params: &EnergyParams) -> Result<SandwichBounds> {
    sandwich_bounds_with(omega, params, DEFAULT_MARGIN_CELLS)
}

pub fn sandwich_bounds_with(
    omega: &BinaryMask,
    params: &EnergyParams,
    margin_cells: u32,
) -> Result<SandwichBounds> {
    let critical = params.critical_radius_f64();
    let radius = critical + f64::from(margin_cells) * omega.geom().spacing_f64();
    let inner = opening(omega, radius);
    let outer = outer_bound_via_complement(omega, radius)?;
    if !inner.is_subset_of(&outer)? {
        // Structurally impossible: inner ⊆ omega ⊆ outer.
        return Err(Error::InvalidParameter {
            name: "sandwich",
            reason: "inner exceeds outer",
        });
    }
    Ok(SandwichBounds {
        inner,
        outer,
        radius,
        critical_radius: critical,
        margin_cells,
    })
}
