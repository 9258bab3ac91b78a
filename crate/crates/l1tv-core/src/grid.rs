//! Grid geometry, bit-packed binary masks, and disc rasterization.
//!
//! Coordinates: cell `(x, y)` with `x` running along a row, row-major
//! storage, and the cell center at `((x + 0.5) * h, (y + 0.5) * h)` in
//! length units, where `h` is the grid spacing. Everything outside the grid
//! is background; areas and lengths are reported in length units so that
//! constants like the critical radius carry over unchanged from the
//! continuum statements.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::{Exact, Rational};

/// Rectangular grid with a positive rational spacing (length per cell edge).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridGeom {
    width: u32,
    height: u32,
    spacing: Rational,
}

impl GridGeom {
    /// Grid with unit spacing.
    pub fn new(width: u32, height: u32) -> Result<Self> {
        Self::with_spacing(width, height, Rational::new(1, 1))
    }

    pub fn with_spacing(width: u32, height: u32, spacing: Rational) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidParameter {
                name: "width/height",
                reason: "must be >= 1",
            });
        }
        if spacing <= Rational::new(0, 1) {
            return Err(Error::InvalidParameter {
                name: "spacing",
                reason: "must be > 0",
            });
        }
        Ok(GridGeom {
            width,
            height,
            spacing,
        })
    }

    /// Grid with spacing given as a decimal string, e.g. `"0.5"`.
    pub fn with_spacing_str(width: u32, height: u32, spacing: &str) -> Result<Self> {
        Self::with_spacing(width, height, crate::parse_decimal(spacing)?)
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn cells(&self) -> u64 {
        u64::from(self.width) * u64::from(self.height)
    }

    pub fn spacing(&self) -> Rational {
        self.spacing
    }

    pub fn spacing_f64(&self) -> f64 {
        *self.spacing.numer() as f64 / *self.spacing.denom() as f64
    }

    /// Area of one cell, `h^2`, exact.
    pub fn cell_area(&self) -> Exact {
        let h = Exact::new(
            i128::from(*self.spacing.numer()),
            i128::from(*self.spacing.denom()),
        );
        h * h
    }

    /// Total grid area, exact.
    pub fn total_area(&self) -> Exact {
        self.cell_area() * Exact::from_integer(self.cells() as i128)
    }

    /// Center of cell `(x, y)` in length units.
    pub fn cell_center(&self, x: u32, y: u32) -> (f64, f64) {
        let h = self.spacing_f64();
        ((f64::from(x) + 0.5) * h, (f64::from(y) + 0.5) * h)
    }

    /// Center of the grid's central cell (cell-center aligned so that
    /// rasterized discs centered here are symmetric).
    pub fn central_cell_center(&self) -> (f64, f64) {
        self.cell_center(self.width / 2, self.height / 2)
    }

    fn index(&self, x: u32, y: u32) -> usize {
        (y as usize) * (self.width as usize) + x as usize
    }
}

/// Euclidean disc: continuous center coordinates and radius in length units.
///
/// Rasterization rule: a cell belongs to the disc iff its center lies in the
/// closed disc. Deterministic and monotone in the radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscSpec {
    center_x: f64,
    center_y: f64,
    radius: f64,
}

impl DiscSpec {
    pub fn new(center_x: f64, center_y: f64, radius: f64) -> Result<Self> {
        if !radius.is_finite() || radius <= 0.0 || !center_x.is_finite() || !center_y.is_finite() {
            return Err(Error::InvalidParameter {
                name: "disc",
                reason: "radius must be finite and > 0",
            });
        }
        Ok(DiscSpec {
            center_x,
            center_y,
            radius,
        })
    }

    pub fn center(&self) -> (f64, f64) {
        (self.center_x, self.center_y)
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Same center, different radius.
    pub fn with_radius(&self, radius: f64) -> Result<Self> {
        Self::new(self.center_x, self.center_y, radius)
    }

    /// Cells whose centers satisfy `(cx-x)^2 + (cy-y)^2 <= r^2`.
    /// A disc entirely outside the grid yields an empty mask.
    pub fn rasterize(&self, geom: GridGeom) -> BinaryMask {
        let mut mask = BinaryMask::empty(geom);
        let h = geom.spacing_f64();
        let r2 = self.radius * self.radius;
        // Row range that can possibly intersect the disc.
        let y_lo = crate::math::floor((self.center_y - self.radius) / h - 0.5).max(0.0) as i64;
        let y_hi = crate::math::ceil((self.center_y + self.radius) / h - 0.5)
            .min(f64::from(geom.height - 1)) as i64;
        for y in y_lo..=y_hi {
            let cy = (y as f64 + 0.5) * h;
            let dy2 = (cy - self.center_y) * (cy - self.center_y);
            if dy2 > r2 {
                continue;
            }
            let x_lo = crate::math::floor((self.center_x - self.radius) / h - 0.5).max(0.0) as i64;
            let x_hi = crate::math::ceil((self.center_x + self.radius) / h - 0.5)
                .min(f64::from(geom.width - 1)) as i64;
            for x in x_lo..=x_hi {
                let cx = (x as f64 + 0.5) * h;
                let dx = cx - self.center_x;
                if dx * dx + dy2 <= r2 {
                    mask.set(x as u32, y as u32, true);
                }
            }
        }
        mask
    }
}

/// Rasterizes a disc onto a grid; see [`DiscSpec::rasterize`].
pub fn rasterize_disc(spec: &DiscSpec, geom: GridGeom) -> BinaryMask {
    spec.rasterize(geom)
}

/// A 2-D binary field, one bit per cell, row-major, bit-packed in `u64`
/// words. Values are immutable in shared use; all set operations return
/// fresh masks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryMask {
    geom: GridGeom,
    words: Vec<u64>,
}

impl BinaryMask {
    pub fn empty(geom: GridGeom) -> Self {
        let words = vec![0u64; Self::word_len(geom)];
        BinaryMask { geom, words }
    }

    pub fn full(geom: GridGeom) -> Self {
        let mut m = Self::empty(geom);
        for w in &mut m.words {
            *w = u64::MAX;
        }
        m.clear_tail();
        m
    }

    /// Builds a mask from a per-cell predicate.
    pub fn from_fn(geom: GridGeom, mut f: impl FnMut(u32, u32) -> bool) -> Self {
        let mut m = Self::empty(geom);
        for y in 0..geom.height {
            for x in 0..geom.width {
                if f(x, y) {
                    m.set(x, y, true);
                }
            }
        }
        m
    }

    fn word_len(geom: GridGeom) -> usize {
        geom.cells().div_ceil(64) as usize
    }

    /// Zero the padding bits past `cells()` in the last word.
    fn clear_tail(&mut self) {
        let bits = self.geom.cells();
        let rem = (bits % 64) as u32;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    pub fn geom(&self) -> GridGeom {
        self.geom
    }

    #[inline]
    pub fn get(&self, x: u32, y: u32) -> bool {
        debug_assert!(x < self.geom.width && y < self.geom.height);
        let i = self.geom.index(x, y);
        (self.words[i >> 6] >> (i & 63)) & 1 == 1
    }

    /// Value at signed coordinates; anything off-grid reads as background.
    #[inline]
    pub fn get_clipped(&self, x: i64, y: i64) -> bool {
        if x < 0 || y < 0 || x >= i64::from(self.geom.width) || y >= i64::from(self.geom.height) {
            false
        } else {
            self.get(x as u32, y as u32)
        }
    }

    #[inline]
    pub fn set(&mut self, x: u32, y: u32, value: bool) {
        debug_assert!(x < self.geom.width && y < self.geom.height);
        let i = self.geom.index(x, y);
        let bit = 1u64 << (i & 63);
        if value {
            self.words[i >> 6] |= bit;
        } else {
            self.words[i >> 6] &= !bit;
        }
    }

    pub fn count_ones(&self) -> u64 {
        self.words.iter().map(|w| u64::from(w.count_ones())).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Area in length units: set cells times `h^2`, exact.
    pub fn area(&self) -> Exact {
        self.geom.cell_area() * Exact::from_integer(self.count_ones() as i128)
    }

    fn check_geom(&self, other: &Self) -> Result<()> {
        if self.geom != other.geom {
            return Err(Error::GeometryMismatch {
                a: (self.geom.width, self.geom.height),
                b: (other.geom.width, other.geom.height),
            });
        }
        Ok(())
    }

    fn zip(&self, other: &Self, f: impl Fn(u64, u64) -> u64) -> Result<Self> {
        self.check_geom(other)?;
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(&a, &b)| f(a, b))
            .collect();
        let mut m = BinaryMask {
            geom: self.geom,
            words,
        };
        m.clear_tail();
        Ok(m)
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a & b)
    }

    /// Cells in `self` but not in `other`.
    pub fn difference(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a & !b)
    }

    pub fn symmetric_difference(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a ^ b)
    }

    /// Involution; reverses subset order.
    pub fn complement(&self) -> Self {
        let words = self.words.iter().map(|&w| !w).collect();
        let mut m = BinaryMask {
            geom: self.geom,
            words,
        };
        m.clear_tail();
        m
    }

    /// `|self xor other|` in length units, exact. Symmetric in its arguments.
    pub fn symmetric_difference_area(&self, other: &Self) -> Result<Exact> {
        self.check_geom(other)?;
        let count: u64 = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(&a, &b)| u64::from((a ^ b).count_ones()))
            .sum();
        Ok(self.geom.cell_area() * Exact::from_integer(count as i128))
    }

    /// Number of differing cells, exact integer form of the above.
    pub fn symmetric_difference_count(&self, other: &Self) -> Result<u64> {
        self.check_geom(other)?;
        Ok(self
            .words
            .iter()
            .zip(&other.words)
            .map(|(&a, &b)| u64::from((a ^ b).count_ones()))
            .sum())
    }

    pub fn is_subset_of(&self, other: &Self) -> Result<bool> {
        self.check_geom(other)?;
        Ok(self
            .words
            .iter()
            .zip(&other.words)
            .all(|(&a, &b)| a & !b == 0))
    }

    /// True iff no set cell lies on the outermost ring of the grid.
    pub fn is_border_free(&self) -> bool {
        let (w, h) = (self.geom.width, self.geom.height);
        for x in 0..w {
            if self.get(x, 0) || self.get(x, h - 1) {
                return false;
            }
        }
        for y in 0..h {
            if self.get(0, y) || self.get(w - 1, y) {
                return false;
            }
        }
        true
    }

    /// Iterates set cells in row-major order.
    pub fn iter_set(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        let w = self.geom.width;
        let h = self.geom.height;
        (0..h)
            .flat_map(move |y| (0..w).map(move |x| (x, y)))
            .filter(move |&(x, y)| self.get(x, y))
    }

    /// Copies `self` into a grid padded by `pad` cells on every side,
    /// filling the ring with `fill`.
    pub fn padded(&self, pad: u32, fill: bool) -> Result<Self> {
        let geom = GridGeom::with_spacing(
            self.geom
                .width
                .checked_add(2 * pad)
                .ok_or(Error::ScaleOverflow)?,
            self.geom
                .height
                .checked_add(2 * pad)
                .ok_or(Error::ScaleOverflow)?,
            self.geom.spacing,
        )?;
        let mut out = if fill {
            Self::full(geom)
        } else {
            Self::empty(geom)
        };
        for y in 0..self.geom.height {
            for x in 0..self.geom.width {
                out.set(x + pad, y + pad, self.get(x, y));
            }
        }
        Ok(out)
    }

    /// Extracts the centered `w x h` window out of a mask padded by `pad`.
    pub fn cropped(&self, pad: u32, width: u32, height: u32) -> Result<Self> {
        if self.geom.width < width + 2 * pad || self.geom.height < height + 2 * pad {
            return Err(Error::InvalidParameter {
                name: "crop",
                reason: "window exceeds mask",
            });
        }
        let geom = GridGeom::with_spacing(width, height, self.geom.spacing)?;
        let mut out = Self::empty(geom);
        for y in 0..height {
            for x in 0..width {
                out.set(x, y, self.get(x + pad, y + pad));
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geom(w: u32, h: u32) -> GridGeom {
        GridGeom::new(w, h).unwrap()
    }

    #[test]
    fn subcell_disc_covers_exactly_its_own_center() {
        let g = geom(9, 9);
        let (cx, cy) = g.cell_center(4, 4);
        let m = DiscSpec::new(cx, cy, 0.4).unwrap().rasterize(g);
        assert_eq!(m.count_ones(), 1);
        assert!(m.get(4, 4));
    }

    #[test]
    fn disc_far_outside_grid_is_empty() {
        let g = geom(16, 16);
        let m = DiscSpec::new(-100.0, -100.0, 10.0).unwrap().rasterize(g);
        assert!(m.is_empty());
    }

    #[test]
    fn disc_area_matches_continuum_within_one_percent() {
        // Cross-checked against a half-cell-offset sweep of the same count.
        let g = geom(64, 64);
        let target = core::f64::consts::PI * 400.0;
        for (ox, oy) in [(0.5, 0.5), (0.0, 0.0), (0.5, 0.0), (0.0, 0.5)] {
            let m = DiscSpec::new(32.0 + ox, 32.0 + oy, 20.0)
                .unwrap()
                .rasterize(g);
            let rel = (m.count_ones() as f64 - target) / target;
            assert!(rel.abs() < 0.01, "offset ({ox},{oy}): rel err {rel}");
        }
    }

    #[test]
    fn rasterization_is_monotone_in_radius() {
        let g = geom(48, 48);
        let (cx, cy) = (21.3, 25.7);
        let mut prev = BinaryMask::empty(g);
        for r10 in 1..=220 {
            let m = DiscSpec::new(cx, cy, f64::from(r10) / 10.0)
                .unwrap()
                .rasterize(g);
            assert!(prev.is_subset_of(&m).unwrap());
            prev = m;
        }
    }

    #[test]
    fn complement_is_involution_and_partitions_area() {
        let g = geom(13, 7);
        let m = BinaryMask::from_fn(g, |x, y| (x * 31 + y * 17) % 3 == 0);
        assert_eq!(m.complement().complement(), m);
        let total = m.area() + m.complement().area();
        assert_eq!(total, g.total_area());
        assert_eq!(BinaryMask::empty(g).complement(), BinaryMask::full(g));
        assert_eq!(BinaryMask::full(g).complement(), BinaryMask::empty(g));
    }

    #[test]
    fn symmetric_difference_identities() {
        let g = geom(10, 10);
        let m = BinaryMask::from_fn(g, |x, y| x + y < 9);
        assert_eq!(
            m.symmetric_difference_area(&m).unwrap(),
            Exact::from_integer(0)
        );
        assert_eq!(
            m.symmetric_difference_area(&m.complement()).unwrap(),
            g.total_area()
        );
        // |A xor B| = |A \ B| + |B \ A|, exactly.
        let b = BinaryMask::from_fn(g, |x, _| x % 2 == 0);
        let lhs = m.symmetric_difference_area(&b).unwrap();
        let rhs = m.difference(&b).unwrap().area() + b.difference(&m).unwrap().area();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn shifted_disc_symmetric_difference_matches_bruteforce_xor() {
        let g = geom(48, 48);
        let a = DiscSpec::new(24.0, 24.0, 10.0).unwrap().rasterize(g);
        let b = DiscSpec::new(25.0, 24.0, 10.0).unwrap().rasterize(g);
        let mut brute = 0u64;
        for y in 0..48 {
            for x in 0..48 {
                if a.get(x, y) != b.get(x, y) {
                    brute += 1;
                }
            }
        }
        assert_eq!(a.symmetric_difference_count(&b).unwrap(), brute);
        assert!(brute > 0);
    }

    #[test]
    fn geometry_mismatch_is_an_error() {
        let a = BinaryMask::empty(geom(4, 4));
        let b = BinaryMask::empty(geom(4, 5));
        assert!(matches!(
            a.symmetric_difference_area(&b),
            Err(Error::GeometryMismatch { .. })
        ));
    }

    #[test]
    fn pad_then_crop_roundtrips() {
        let g = geom(11, 5);
        let m = BinaryMask::from_fn(g, |x, y| (x ^ y) & 1 == 0);
        for fill in [false, true] {
            let p = m.padded(3, fill).unwrap();
            assert_eq!(p.cropped(3, 11, 5).unwrap(), m);
        }
    }

    #[test]
    fn spacing_scales_areas() {
        let g = GridGeom::with_spacing_str(8, 8, "0.5").unwrap();
        let m = BinaryMask::from_fn(g, |x, y| x < 2 && y < 2);
        // 4 cells * (1/2)^2 = 1
        assert_eq!(m.area(), Exact::from_integer(1));
    }
}
