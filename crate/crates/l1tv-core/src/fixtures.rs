//! Deterministic test geometries.
//!
//! Every constructor is a pure function of its arguments (plus an explicit
//! seed where randomness is wanted), and reports exactly what it built —
//! notch areas, disc centers, radii — so downstream checks can use measured
//! rather than requested quantities.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::grid::{BinaryMask, DiscSpec, GridGeom};
use crate::math;
use crate::rng::Rng;
use crate::{exact_to_f64, Exact};

/// Angular half-width of the boundary-bite sector.
const BITE_SECTOR_HALF: f64 = 0.35;

/// How a notch is carved out of a disc.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NotchStyle {
    /// Cells removed from a boundary-adjacent angular sector,
    /// largest-distance-first, until the requested area is met.
    #[default]
    BoundaryBite,
    /// Cells removed around an interior anchor point at half the disc
    /// radius, nearest-first.
    InteriorHole,
}

#[derive(Debug, Clone)]
pub struct NotchInfo {
    pub center: (f64, f64),
    pub radius: f64,
    pub style: NotchStyle,
    pub angle: f64,
    pub requested_area: f64,
    /// Exact area actually removed; within one cell of the request.
    pub achieved_area: Exact,
    pub removed_cells: u64,
}

#[derive(Debug, Clone)]
pub struct BlobsInfo {
    /// (center_x, center_y, radius) of each union member.
    pub discs: Vec<(f64, f64, f64)>,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct NeckInfo {
    pub blob_radius: f64,
    pub neck_width: f64,
    /// Distance from the grid center to each blob center.
    pub center_offset: f64,
}

/// Disc of radius `r` centered on the grid's central cell.
pub fn centered_disc(geom: GridGeom, radius: f64) -> Result<BinaryMask> {
    let (cx, cy) = geom.central_cell_center();
    Ok(DiscSpec::new(cx, cy, radius)?.rasterize(geom))
}

/// Disc of radius `radius` with a notch of (approximately) `notch_area`
/// removed; the defect is deterministic in `(angle, style)` and its exact
/// achieved area is reported.
pub fn notched_disc(
    geom: GridGeom,
    radius: f64,
    notch_area: f64,
    angle: f64,
    style: NotchStyle,
) -> Result<(BinaryMask, NotchInfo)> {
    if notch_area < 0.0 {
        return Err(Error::InvalidParameter {
            name: "notch_area",
            reason: "must be >= 0",
        });
    }
    let (cx, cy) = geom.central_cell_center();
    let disc = DiscSpec::new(cx, cy, radius)?;
    let mut mask = disc.rasterize(geom);
    let disc_area = exact_to_f64(&mask.area());
    if notch_area >= disc_area {
        return Err(Error::InfeasibleFixture(
            "notch at least as large as the disc",
        ));
    }

    let h = geom.spacing_f64();
    let cell_area = h * h;
    let mut achieved_cells: u64 = 0;
    if notch_area > 0.0 {
        // Candidate cells with a deterministic removal order.
        let mut candidates: Vec<(i64, u32, u32)> = Vec::new();
        match style {
            NotchStyle::BoundaryBite => {
                for (x, y) in mask.iter_set() {
                    let (px, py) = geom.cell_center(x, y);
                    let (dx, dy) = (px - cx, py - cy);
                    let mut da = math::atan2(dy, dx) - angle;
                    while da > core::f64::consts::PI {
                        da -= 2.0 * core::f64::consts::PI;
                    }
                    while da < -core::f64::consts::PI {
                        da += 2.0 * core::f64::consts::PI;
                    }
                    if da.abs() <= BITE_SECTOR_HALF {
                        // integer squared distance in cell units, negated for
                        // a largest-first sort
                        let ix = math::round(dx / h) as i64;
                        let iy = math::round(dy / h) as i64;
                        candidates.push((-(ix * ix + iy * iy), y, x));
                    }
                }
            }
            NotchStyle::InteriorHole => {
                let ax = cx + 0.5 * radius * math::cos(angle);
                let ay = cy + 0.5 * radius * math::sin(angle);
                for (x, y) in mask.iter_set() {
                    let (px, py) = geom.cell_center(x, y);
                    let d2 = ((px - ax) * (px - ax) + (py - ay) * (py - ay)) / (h * h);
                    candidates.push((math::round(d2 * 16.0) as i64, y, x));
                }
            }
        }
        candidates.sort_unstable();
        let needed = notch_area / cell_area;
        for &(_, y, x) in &candidates {
            if (achieved_cells as f64) >= needed {
                break;
            }
            mask.set(x, y, false);
            achieved_cells += 1;
        }
        if (achieved_cells as f64) < needed {
            return Err(Error::InfeasibleFixture(
                "notch sector exhausted before reaching the area",
            ));
        }
    }

    let achieved_area = geom.cell_area() * Exact::from_integer(achieved_cells as i128);
    Ok((
        mask,
        NotchInfo {
            center: (cx, cy),
            radius,
            style,
            angle,
            requested_area: notch_area,
            achieved_area,
            removed_cells: achieved_cells,
        },
    ))
}

/// Union of 3 to 8 seeded random discs with radii in `[R/2, 2R]`, all kept
/// at least `2R` away from the grid border.
pub fn blobs(geom: GridGeom, critical_radius: f64, seed: u64) -> Result<(BinaryMask, BlobsInfo)> {
    let h = geom.spacing_f64();
    let (w_len, h_len) = (f64::from(geom.width()) * h, f64::from(geom.height()) * h);
    let margin = 2.0 * critical_radius;
    let r_hi = 2.0 * critical_radius;
    if w_len <= 2.0 * (margin + r_hi) || h_len <= 2.0 * (margin + r_hi) {
        return Err(Error::InfeasibleFixture("grid too small for blob margin"));
    }
    let mut rng = Rng::new(seed);
    let count = 3 + rng.next_below(6) as usize; // 3..=8
    let mut mask = BinaryMask::empty(geom);
    let mut discs = Vec::with_capacity(count);
    for _ in 0..count {
        let r = rng.range_f64(0.5 * critical_radius, r_hi);
        let cx = rng.range_f64(margin + r, w_len - margin - r);
        let cy = rng.range_f64(margin + r, h_len - margin - r);
        mask = mask.union(&DiscSpec::new(cx, cy, r)?.rasterize(geom))?;
        discs.push((cx, cy, r));
    }
    Ok((mask, BlobsInfo { discs, seed }))
}

/// Two blobs of radius `blob_radius` joined by a strip of width
/// `neck_width`, centered on the grid.
pub fn neck(geom: GridGeom, blob_radius: f64, neck_width: f64) -> Result<(BinaryMask, NeckInfo)> {
    if neck_width <= 0.0 || blob_radius <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "neck",
            reason: "sizes must be > 0",
        });
    }
    let (cx, cy) = geom.central_cell_center();
    let offset = 1.5 * blob_radius;
    let h = geom.spacing_f64();
    let (w_len, h_len) = (f64::from(geom.width()) * h, f64::from(geom.height()) * h);
    if cx - offset - blob_radius < 0.0
        || cx + offset + blob_radius > w_len
        || cy - blob_radius < 0.0
        || cy + blob_radius > h_len
    {
        return Err(Error::InfeasibleFixture("dumbbell does not fit the grid"));
    }
    let left = DiscSpec::new(cx - offset, cy, blob_radius)?.rasterize(geom);
    let right = DiscSpec::new(cx + offset, cy, blob_radius)?.rasterize(geom);
    let strip = BinaryMask::from_fn(geom, |x, y| {
        let (px, py) = geom.cell_center(x, y);
        (py - cy).abs() <= neck_width / 2.0 && px >= cx - offset && px <= cx + offset
    });
    let mask = left.union(&right)?.union(&strip)?;
    Ok((
        mask,
        NeckInfo {
            blob_radius,
            neck_width,
            center_offset: offset,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geom(w: u32, h: u32) -> GridGeom {
        GridGeom::new(w, h).unwrap()
    }

    #[test]
    fn plain_disc_has_zero_notch() {
        let g = geom(128, 128);
        let (m, info) = notched_disc(g, 20.0, 0.0, 0.0, NotchStyle::BoundaryBite).unwrap();
        assert_eq!(info.achieved_area, Exact::from_integer(0));
        assert_eq!(m, centered_disc(g, 20.0).unwrap());
    }

    #[test]
    fn bite_notch_meets_area_within_one_cell() {
        // Half-spacing grid so a half-unit area is reachable exactly.
        let g = GridGeom::with_spacing_str(256, 256, "0.5").unwrap();
        let (m, info) = notched_disc(g, 24.0, 0.5, 0.3, NotchStyle::BoundaryBite).unwrap();
        let cell = exact_to_f64(&g.cell_area());
        let achieved = exact_to_f64(&info.achieved_area);
        assert!(
            achieved >= 0.5 && achieved < 0.5 + cell,
            "achieved {achieved}"
        );
        assert_eq!(info.removed_cells, 2);
        // The defect is at the boundary: removed cells are far from center.
        let disc = centered_disc(g, 24.0).unwrap();
        let removed = disc.difference(&m).unwrap();
        for (x, y) in removed.iter_set() {
            let (px, py) = g.cell_center(x, y);
            let d = ((px - info.center.0).powi(2) + (py - info.center.1).powi(2)).sqrt();
            assert!(d > 23.0, "removed cell at distance {d}");
        }
    }

    #[test]
    fn hole_notch_is_interior() {
        let g = GridGeom::with_spacing_str(256, 256, "0.5").unwrap();
        let (m, info) = notched_disc(g, 24.0, 0.5, 1.0, NotchStyle::InteriorHole).unwrap();
        assert_eq!(info.removed_cells, 2);
        let disc = centered_disc(g, 24.0).unwrap();
        let removed = disc.difference(&m).unwrap();
        for (x, y) in removed.iter_set() {
            let (px, py) = g.cell_center(x, y);
            let d = ((px - info.center.0).powi(2) + (py - info.center.1).powi(2)).sqrt();
            assert!((d - 12.0).abs() < 2.0, "hole cell at distance {d}");
        }
    }

    #[test]
    fn oversized_notch_is_rejected() {
        let g = geom(64, 64);
        assert!(matches!(
            notched_disc(g, 10.0, 1000.0, 0.0, NotchStyle::BoundaryBite),
            Err(Error::InfeasibleFixture(_))
        ));
    }

    #[test]
    fn blobs_are_seed_deterministic_and_border_free() {
        let g = geom(256, 256);
        let (a, ia) = blobs(g, 20.0, 42).unwrap();
        let (b, _) = blobs(g, 20.0, 42).unwrap();
        assert_eq!(a, b);
        assert!((3..=8).contains(&ia.discs.len()));
        assert!(a.is_border_free());
        let (c, _) = blobs(g, 20.0, 43).unwrap();
        assert_ne!(a, c);
        for &(cx, cy, r) in &ia.discs {
            assert!((0.5 * 20.0..=2.0 * 20.0 + 1e-9).contains(&r));
            assert!(cx - r >= 2.0 * 20.0 - 1e-9 && cy - r >= 2.0 * 20.0 - 1e-9);
        }
    }

    #[test]
    fn neck_records_geometry() {
        let g = geom(256, 256);
        let (m, info) = neck(g, 30.0, 10.0).unwrap();
        assert_eq!(info.center_offset, 45.0);
        assert!(!m.is_empty());
        // Mid-neck column has roughly neck_width cells set.
        let (cx, _) = g.central_cell_center();
        let col = (cx - 0.5) as u32;
        let count = (0..256).filter(|&y| m.get(col, y)).count();
        assert!((9..=11).contains(&count), "neck column height {count}");
    }
}
