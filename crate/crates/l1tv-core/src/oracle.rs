//! Exhaustive brute-force minimization on tiny grids.
//!
//! Ground truth for solver optimality: enumerates every subset of the grid
//! in Gray-code order with incremental integer energy updates, so each step
//! costs one fidelity flip plus the local stencil delta.

use alloc::vec;
use alloc::vec::Vec;

use crate::energy::{EnergyParams, EnergyScale};
use crate::error::{Error, Result};
use crate::grid::{BinaryMask, GridGeom};
use crate::perimeter::Stencil;
use crate::Exact;

/// Hard cap on enumerable cells (2^20 subsets).
pub const MAX_CELLS: u64 = 20;

/// All-subsets cap for [`min_energy_for_all_inputs`] (2^16 inputs times
/// 2^16 candidates).
pub const MAX_TABLE_CELLS: u64 = 16;

#[derive(Debug, Clone)]
pub struct OracleResult {
    pub min_energy: Exact,
    /// Every subset attaining the minimum, as masks.
    pub minimizers: Vec<BinaryMask>,
    pub enumerated: u64,
}

/// Per-cell incremental structure shared by the enumeration paths.
struct CellGraph {
    cells: usize,
    fid_units: i64,
    /// For each cell, cost paid while the cell is set and its in-grid
    /// neighbor relationships: (neighbor index, edge units).
    border_units: Vec<i64>,
    neighbors: Vec<Vec<(u32, i64)>>,
}

impl CellGraph {
    fn build(geom: GridGeom, params: &EnergyParams, stencil: &Stencil) -> Result<Self> {
        let scale = EnergyScale::build(stencil, params, geom.spacing())?;
        let (w, h) = (i64::from(geom.width()), i64::from(geom.height()));
        let cells = (w * h) as usize;
        let mut border_units = vec![0i64; cells];
        let mut neighbors: Vec<Vec<(u32, i64)>> = vec![Vec::new(); cells];
        // Pairwise weights in scale units: pair_units are already h-scaled.
        for (k, &(dx, dy)) in stencil.offsets().iter().enumerate() {
            let wu = scale.pair_units()[k];
            for y in 0..h {
                for x in 0..w {
                    let p = (y * w + x) as usize;
                    // Every incident pair, both directions: a toggle must see
                    // all edges touching the cell.
                    for (sx, sy) in [(dx, dy), (-dx, -dy)] {
                        let (nx, ny) = (x + i64::from(sx), y + i64::from(sy));
                        if nx < 0 || ny < 0 || nx >= w || ny >= h {
                            border_units[p] += wu;
                        } else {
                            neighbors[p].push(((ny * w + nx) as u32, wu));
                        }
                    }
                }
            }
        }
        Ok(CellGraph {
            cells,
            fid_units: scale.fidelity_units(),
            border_units,
            neighbors,
        })
    }

    /// Energy delta (in units) of toggling `cell` given the current subset
    /// bits and the input bits.
    #[inline]
    fn toggle_delta(&self, cell: usize, cur: u32, omega_bits: u32) -> i64 {
        let was_set = (cur >> cell) & 1 == 1;
        let omega_set = (omega_bits >> cell) & 1 == 1;
        let sign: i64 = if was_set { -1 } else { 1 };
        // fidelity: toggling creates a disagreement iff the cell agreed before
        let mut d = if was_set == omega_set {
            self.fid_units
        } else {
            -self.fid_units
        };
        d += sign * self.border_units[cell];
        for &(q, wu) in &self.neighbors[cell] {
            let q_set = (cur >> q) & 1 == 1;
            // edge was cut iff values differed; toggling this end flips it
            if was_set == q_set {
                d += wu;
            } else {
                d -= wu;
            }
        }
        d
    }
}

fn mask_from_bits(geom: GridGeom, bits: u32) -> BinaryMask {
    BinaryMask::from_fn(geom, |x, y| (bits >> (y * geom.width() + x)) & 1 == 1)
}

fn bits_from_mask(mask: &BinaryMask) -> u32 {
    let mut bits = 0u32;
    for (x, y) in mask.iter_set() {
        bits |= 1 << (y * mask.geom().width() + x);
    }
    bits
}

/// Enumerates all `2^cells` subsets and returns the exact minimum energy
/// together with every minimizer. Refuses grids above [`MAX_CELLS`] cells.
pub fn brute_force_minimize(
    omega: &BinaryMask,
    params: &EnergyParams,
    stencil: &Stencil,
) -> Result<OracleResult> {
    let geom = omega.geom();
    if geom.cells() > MAX_CELLS {
        return Err(Error::TooManyCells {
            cells: geom.cells(),
            cap: MAX_CELLS,
        });
    }
    let graph = CellGraph::build(geom, params, stencil)?;
    let scale = EnergyScale::build(stencil, params, geom.spacing())?;
    let omega_bits = bits_from_mask(omega);
    let n = graph.cells;

    // Start at the empty set: energy = fid * |omega|.
    let mut cur_bits: u32 = 0;
    let mut cur: i64 = graph.fid_units * i64::from(omega_bits.count_ones());
    let mut best = cur;
    let mut argmins: Vec<u32> = vec![0];

    let total: u64 = 1u64 << n;
    for i in 1..total {
        // Gray code: bit flipped between step i-1 and i.
        let cell = i.trailing_zeros() as usize;
        cur += graph.toggle_delta(cell, cur_bits, omega_bits);
        cur_bits ^= 1 << cell;
        if cur < best {
            best = cur;
            argmins.clear();
            argmins.push(cur_bits);
        } else if cur == best {
            argmins.push(cur_bits);
        }
    }

    argmins.sort_unstable();
    Ok(OracleResult {
        min_energy: scale.to_exact(i128::from(best)),
        minimizers: argmins.iter().map(|&b| mask_from_bits(geom, b)).collect(),
        enumerated: total,
    })
}

/// Minimum energy for *every* possible input on the grid at once:
/// entry `omega_bits` holds `min_S E(S; omega_bits)`.
///
/// Precomputes the perimeter of each candidate in one Gray-code sweep, then
/// resolves each input with XOR popcounts. Used by the bulk solver
/// cross-check; refuses grids above [`MAX_TABLE_CELLS`] cells.
pub fn min_energy_for_all_inputs(
    geom: GridGeom,
    params: &EnergyParams,
    stencil: &Stencil,
) -> Result<Vec<Exact>> {
    if geom.cells() > MAX_TABLE_CELLS {
        return Err(Error::TooManyCells {
            cells: geom.cells(),
            cap: MAX_TABLE_CELLS,
        });
    }
    let graph = CellGraph::build(geom, params, stencil)?;
    let scale = EnergyScale::build(stencil, params, geom.spacing())?;
    let n = graph.cells;
    let total = 1usize << n;

    // Perimeter (plus border term) of every candidate subset, in units.
    let mut per = vec![0i64; total];
    let mut cur_bits: u32 = 0;
    let mut cur: i64 = 0;
    for i in 1..total {
        let cell = i.trailing_zeros() as usize;
        // fidelity-free toggle: reuse toggle_delta with omega == current, so
        // the fidelity contribution cancels out of the perimeter sweep
        let was_set = (cur_bits >> cell) & 1 == 1;
        let sign: i64 = if was_set { -1 } else { 1 };
        let mut d = sign * graph.border_units[cell];
        for &(q, wu) in &graph.neighbors[cell] {
            let q_set = (cur_bits >> q) & 1 == 1;
            if was_set == q_set {
                d += wu;
            } else {
                d -= wu;
            }
        }
        cur += d;
        cur_bits ^= 1 << cell;
        // Gray code of i
        per[i ^ (i >> 1)] = cur;
    }

    let fid_by_count: Vec<i64> = (0..=n as i64).map(|c| graph.fid_units * c).collect();

    let mut out = Vec::with_capacity(total);
    for omega_bits in 0..total as u32 {
        let mut best = i64::MAX;
        for sigma_bits in 0..total as u32 {
            let e = per[sigma_bits as usize]
                + fid_by_count[(sigma_bits ^ omega_bits).count_ones() as usize];
            if e < best {
                best = e;
            }
        }
        out.push(scale.to_exact(i128::from(best)));
    }
    Ok(out)
}
