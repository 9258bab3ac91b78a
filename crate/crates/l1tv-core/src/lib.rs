//! Exact discrete minimization of the binary L1TV shape energy
//!
//! ```text
//! E(S) = Per(S) + lambda * |S xor Omega|
//! ```
//!
//! on a regular pixel grid, together with the geometric checks that
//! characterize its minimizers:
//!
//! * [`grid`] — grid geometry, bit-packed binary masks, disc rasterization
//!   and set algebra.
//! * [`perimeter`] — weighted neighborhood stencils (`n4`, `n8`, `n16`)
//!   approximating Euclidean boundary length, with exact rational weights.
//! * [`energy`] — exact evaluation of `E(S)` and of the energy increment of
//!   unioning a disc into a candidate set.
//! * [`mincut`] — global minimization by maximum flow on the grid graph,
//!   with canonical smallest/largest minimizer extraction.
//! * [`morphology`] — Euclidean-disc erosion/dilation/opening and the
//!   inner/outer sandwich bounds on minimizers.
//! * [`verify`] — executable forms of the minimizer characterizations:
//!   contained-ball unions, the almost-contained-ball shrink property, the
//!   vanishing threshold at the critical radius, deficit thresholds and the
//!   associated quadratic root bounds.
//! * [`oracle`] — exhaustive brute-force minimization on tiny grids, the
//!   ground truth for solver optimality.
//! * [`fixtures`] — deterministic test geometries (discs, notched discs,
//!   random blob unions, necked dumbbells).
//!
//! All energies are carried as exact rationals over a common integer
//! denominator, so comparisons such as "is also a minimizer" are exact
//! integer comparisons, never float ones.
//!
//! The critical radius `R = n / lambda` is the sharp scale of the model:
//!
//! ```
//! use l1tv_core::energy::EnergyParams;
//! use l1tv_core::grid::{DiscSpec, GridGeom};
//! use l1tv_core::mincut::minimize;
//! use l1tv_core::perimeter::Stencil;
//!
//! // lambda = 0.1 puts the critical radius at R = 20: a disc of radius 16
//! // cannot pay for its own boundary and minimizes to the empty set...
//! let geom = GridGeom::new(96, 96)?;
//! let (cx, cy) = geom.central_cell_center();
//! let params = EnergyParams::from_lambda_str("0.1")?;
//! let small = DiscSpec::new(cx, cy, 16.0)?.rasterize(geom);
//! assert!(minimize(&small, &params, &Stencil::n16())?.sigma.is_empty());
//!
//! // ...while a disc of radius 25 survives nearly whole.
//! let big = DiscSpec::new(cx, cy, 25.0)?.rasterize(geom);
//! assert!(minimize(&big, &params, &Stencil::n16())?.sigma.count_ones() > 1900);
//! # Ok::<(), l1tv_core::Error>(())
//! ```
//!
//! The crate is `no_std`-compatible (requires `alloc`); enable the `libm`
//! feature instead of `std` on bare-metal targets.

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod energy;
pub mod error;
pub mod fixtures;
pub mod grid;
pub(crate) mod math;
pub mod mincut;
pub mod morphology;
pub mod oracle;
pub mod perimeter;
pub mod rng;
pub mod verify;

pub use error::{Error, Result};
pub use grid::{BinaryMask, DiscSpec, GridGeom};
pub use perimeter::{BorderPolicy, Stencil};

/// Exact energy value: rational with headroom for large grids.
pub type Exact = num_rational::Ratio<i128>;

/// Exact rational parameter (grid spacing, fidelity weight).
pub type Rational = num_rational::Ratio<i64>;

/// Lossy view of an exact value, for reporting only.
pub fn exact_to_f64(x: &Exact) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

/// Parses a decimal string (`"0.1"`, `"2"`, `"-1.25"`) into an exact rational.
///
/// Scientific notation is rejected; the point of the exercise is that values
/// like `0.1` stay exactly `1/10` instead of picking up binary rounding.
pub fn parse_decimal(s: &str) -> Result<Rational> {
    let t = s.trim();
    let (neg, digits) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, f)) => (i, f),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(Error::BadDecimal);
    }
    if !int_part.bytes().all(|b| b.is_ascii_digit())
        || !frac_part.bytes().all(|b| b.is_ascii_digit())
    {
        return Err(Error::BadDecimal);
    }
    let mut numer: i64 = 0;
    for b in int_part.bytes().chain(frac_part.bytes()) {
        numer = numer
            .checked_mul(10)
            .and_then(|n| n.checked_add(i64::from(b - b'0')))
            .ok_or(Error::BadDecimal)?;
    }
    let mut denom: i64 = 1;
    for _ in 0..frac_part.len() {
        denom = denom.checked_mul(10).ok_or(Error::BadDecimal)?;
    }
    if neg {
        numer = -numer;
    }
    Ok(Rational::new(numer, denom))
}
