//! Exact evaluation of `E(S) = Per(S) + lambda * |S xor Omega|`.
//!
//! All terms are expressed over one common integer denominator derived from
//! the stencil weights, the fidelity weight, and the grid spacing, so both
//! the solver and the verification checks can distinguish `dE <= 0` from
//! `dE > 0` without float ambiguity.

use alloc::borrow::ToOwned;
use alloc::string::String;

use crate::error::{Error, Result};
use crate::grid::{BinaryMask, DiscSpec};
use crate::perimeter::{perimeter_units, BorderPolicy, Stencil};
use crate::{math, Exact, Rational};

/// Fidelity weight and ambient dimension.
///
/// The critical radius `R = n / lambda` is the ball radius at which
/// boundary cost exactly balances fidelity reward; it drives every
/// verification check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnergyParams {
    lambda: Rational,
    dimension_n: u32,
}

impl EnergyParams {
    pub fn new(lambda: Rational, dimension_n: u32) -> Result<Self> {
        if lambda <= Rational::new(0, 1) {
            return Err(Error::InvalidParameter {
                name: "lambda",
                reason: "must be > 0",
            });
        }
        if dimension_n < 2 {
            return Err(Error::InvalidParameter {
                name: "dimension_n",
                reason: "must be >= 2",
            });
        }
        Ok(EnergyParams {
            lambda,
            dimension_n,
        })
    }

    /// Planar parameters from a decimal fidelity weight, e.g. `"0.1"`.
    pub fn from_lambda_str(lambda: &str) -> Result<Self> {
        Self::new(crate::parse_decimal(lambda)?, 2)
    }

    pub fn lambda(&self) -> Rational {
        self.lambda
    }

    pub fn lambda_f64(&self) -> f64 {
        *self.lambda.numer() as f64 / *self.lambda.denom() as f64
    }

    pub fn dimension_n(&self) -> u32 {
        self.dimension_n
    }

    /// `R = n / lambda`, exact.
    pub fn critical_radius(&self) -> Rational {
        Rational::new(i64::from(self.dimension_n), 1) / self.lambda
    }

    pub fn critical_radius_f64(&self) -> f64 {
        let r = self.critical_radius();
        *r.numer() as f64 / *r.denom() as f64
    }
}

/// Common integer scale for one (stencil, params, spacing) combination.
///
/// `unit = 1 / den`; pairwise and fidelity capacities are exact integers in
/// this unit, so min-cut values and enumerated energies are exact integers.
#[derive(Debug, Clone)]
pub struct EnergyScale {
    den: i128,
    /// Cut cost of one edge of offset family `k`, in units.
    pair_units: alloc::vec::Vec<i64>,
    /// Cost of one cell disagreeing with Omega, in units.
    fidelity_units: i64,
}

impl EnergyScale {
    pub fn build(stencil: &Stencil, params: &EnergyParams, spacing: Rational) -> Result<Self> {
        let h = Exact::new(i128::from(*spacing.numer()), i128::from(*spacing.denom()));
        let lam = Exact::new(
            i128::from(*params.lambda.numer()),
            i128::from(*params.lambda.denom()),
        );
        let fid = lam * h * h;
        // den = lcm(stencil_den * h_den, fid_den)
        let w_den = i128::from(stencil.denominator())
            .checked_mul(i128::from(*spacing.denom()))
            .ok_or(Error::ScaleOverflow)?;
        let den = lcm_i128(w_den, *fid.denom()).ok_or(Error::ScaleOverflow)?;
        let mut pair_units = alloc::vec::Vec::with_capacity(stencil.offsets().len());
        for k in 0..stencil.offsets().len() {
            let w = stencil.weight(k, spacing);
            let units = ratio_times_int(&w, den).ok_or(Error::ScaleOverflow)?;
            let units = i64::try_from(units).map_err(|_| Error::ScaleOverflow)?;
            pair_units.push(units);
        }
        let fid_units = ratio_times_int(&fid, den).ok_or(Error::ScaleOverflow)?;
        let fid_units = i64::try_from(fid_units).map_err(|_| Error::ScaleOverflow)?;
        Ok(EnergyScale {
            den,
            pair_units,
            fidelity_units: fid_units,
        })
    }

    pub fn denominator(&self) -> i128 {
        self.den
    }

    pub fn pair_units(&self) -> &[i64] {
        &self.pair_units
    }

    pub fn fidelity_units(&self) -> i64 {
        self.fidelity_units
    }

    /// Converts integer units back to an exact energy.
    pub fn to_exact(&self, units: i128) -> Exact {
        Exact::new(units, self.den)
    }

    /// Perimeter of `mask` in units (requires the stencil this scale was
    /// built from).
    pub fn perimeter_in_units(
        &self,
        mask: &BinaryMask,
        stencil: &Stencil,
        policy: BorderPolicy,
    ) -> i128 {
        // perimeter_units is per unit spacing over stencil.denominator();
        // rescale: units = raw * h * den / (stencil_den * 1)
        let raw = perimeter_units(mask, stencil, policy);
        let spacing = mask.geom().spacing();
        let num = raw * i128::from(*spacing.numer());
        let w_den = i128::from(stencil.denominator()) * i128::from(*spacing.denom());
        debug_assert_eq!(self.den % w_den, 0);
        num * (self.den / w_den)
    }
}

fn ratio_times_int(x: &Exact, m: i128) -> Option<i128> {
    // x * m must be integral by construction of m.
    debug_assert_eq!(m % x.denom(), 0);
    x.numer().checked_mul(m / x.denom())
}

fn lcm_i128(a: i128, b: i128) -> Option<i128> {
    let g = num_integer::Integer::gcd(&a, &b);
    (a / g).checked_mul(b)
}

/// Decomposed energy of a candidate set against an input set.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyReport {
    pub perimeter_term: Exact,
    pub fidelity_term: Exact,
    pub total: Exact,
    pub params: EnergyParams,
    pub stencil_name: String,
}

/// Evaluates `E(sigma; omega) = Per(sigma) + lambda |sigma xor omega|`
/// under the given border policy; all terms exact.
pub fn energy_with(
    sigma: &BinaryMask,
    omega: &BinaryMask,
    params: &EnergyParams,
    stencil: &Stencil,
    policy: BorderPolicy,
) -> Result<EnergyReport> {
    if sigma.geom() != omega.geom() {
        return Err(Error::GeometryMismatch {
            a: (sigma.geom().width(), sigma.geom().height()),
            b: (omega.geom().width(), omega.geom().height()),
        });
    }
    let scale = EnergyScale::build(stencil, params, sigma.geom().spacing())?;
    let per_units = scale.perimeter_in_units(sigma, stencil, policy);
    let diff = sigma.symmetric_difference_count(omega)?;
    let fid_units = i128::from(scale.fidelity_units) * i128::from(diff);
    Ok(EnergyReport {
        perimeter_term: scale.to_exact(per_units),
        fidelity_term: scale.to_exact(fid_units),
        total: scale.to_exact(per_units + fid_units),
        params: *params,
        stencil_name: stencil.name().to_owned(),
    })
}

/// [`energy_with`] under the default border convention.
pub fn energy(
    sigma: &BinaryMask,
    omega: &BinaryMask,
    params: &EnergyParams,
    stencil: &Stencil,
) -> Result<EnergyReport> {
    energy_with(
        sigma,
        omega,
        params,
        stencil,
        BorderPolicy::OutsideBackground,
    )
}

/// Energy increment of unioning a rasterized disc into `sigma`:
/// `E(sigma | ball) - E(sigma)`, exact.
pub fn delta_energy_ball_union(
    sigma: &BinaryMask,
    ball: &DiscSpec,
    omega: &BinaryMask,
    params: &EnergyParams,
    stencil: &Stencil,
) -> Result<Exact> {
    let b = ball.rasterize(sigma.geom());
    let after = sigma.union(&b)?;
    let e_after = energy(&after, omega, params, stencil)?;
    let e_before = energy(sigma, omega, params, stencil)?;
    Ok(e_after.total - e_before.total)
}

/// The algebraic route to the same increment when the ball lies inside
/// `omega`:
///
/// ```text
/// dE = (Per(B) - lambda |B|) + (lambda |B & sigma| - Per(B & sigma))
/// ```
///
/// Agrees exactly with [`delta_energy_ball_union`] whenever no stencil edge
/// crosses both boundaries; boundary-interaction edges make the direct route
/// cheaper, never costlier.
pub fn delta_energy_ball_union_decomposed(
    sigma: &BinaryMask,
    ball: &DiscSpec,
    omega: &BinaryMask,
    params: &EnergyParams,
    stencil: &Stencil,
) -> Result<Exact> {
    let b = ball.rasterize(sigma.geom());
    if !b.is_subset_of(omega)? {
        return Err(Error::PreconditionUnmet("ball must be contained in omega"));
    }
    let scale = EnergyScale::build(stencil, params, sigma.geom().spacing())?;
    let policy = BorderPolicy::OutsideBackground;
    let cap = b.intersection(sigma)?;
    let per_b = scale.perimeter_in_units(&b, stencil, policy);
    let per_cap = scale.perimeter_in_units(&cap, stencil, policy);
    let fid = i128::from(scale.fidelity_units);
    let units =
        per_b - fid * i128::from(b.count_ones()) + fid * i128::from(cap.count_ones()) - per_cap;
    Ok(scale.to_exact(units))
}

/// Continuum energy margin of a radius-`r` ball against the empty set:
/// `n a_n r^(n-1) - lambda a_n r^n`, where `a_n` is the unit-ball volume.
/// Zero exactly at the critical radius `r = n / lambda`.
pub fn disc_energy_margin(r: f64, params: &EnergyParams) -> f64 {
    let n = params.dimension_n;
    let an = unit_ball_volume(n);
    let nf = f64::from(n);
    nf * an * math::powf(r, nf - 1.0) - params.lambda_f64() * an * math::powf(r, nf)
}

/// Volume of the unit ball in `n` dimensions, by the two-step recurrence
/// `a_n = a_{n-2} * 2 pi / n`.
pub fn unit_ball_volume(n: u32) -> f64 {
    let mut v = if n.is_multiple_of(2) { 1.0 } else { 2.0 };
    let mut k = if n.is_multiple_of(2) { 2 } else { 3 };
    while k <= n {
        v *= 2.0 * core::f64::consts::PI / f64::from(k);
        k += 2;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_to_f64;
    use crate::grid::GridGeom;

    fn geom(w: u32, h: u32) -> GridGeom {
        GridGeom::new(w, h).unwrap()
    }

    fn disc(g: GridGeom, r: f64) -> BinaryMask {
        let (cx, cy) = g.central_cell_center();
        DiscSpec::new(cx, cy, r).unwrap().rasterize(g)
    }

    #[test]
    fn empty_candidate_pays_lambda_area_of_omega() {
        let g = geom(64, 64);
        let omega = disc(g, 20.0);
        let params = EnergyParams::from_lambda_str("0.1").unwrap();
        let rep = energy(&BinaryMask::empty(g), &omega, &params, &Stencil::n16()).unwrap();
        assert_eq!(rep.perimeter_term, Exact::from_integer(0));
        let expect = 0.1 * core::f64::consts::PI * 400.0;
        let got = exact_to_f64(&rep.fidelity_term);
        assert!((got - expect).abs() / expect < 0.01, "{got} vs {expect}");
        assert_eq!(rep.total, rep.fidelity_term);
    }

    #[test]
    fn candidate_equal_to_omega_pays_only_perimeter() {
        let g = geom(96, 96);
        let omega = disc(g, 30.0);
        let params = EnergyParams::from_lambda_str("0.1").unwrap();
        let rep = energy(&omega, &omega, &params, &Stencil::n16()).unwrap();
        assert_eq!(rep.fidelity_term, Exact::from_integer(0));
        let target = 2.0 * core::f64::consts::PI * 30.0;
        let got = exact_to_f64(&rep.total);
        assert!((got - target).abs() / target < 0.02, "{got} vs {target}");
    }

    #[test]
    fn total_is_exact_sum_of_terms() {
        let g = GridGeom::with_spacing_str(20, 20, "0.5").unwrap();
        let params = EnergyParams::new(Rational::new(3, 7), 2).unwrap();
        let mut rng = crate::rng::Rng::new(5);
        for _ in 0..20 {
            let a = BinaryMask::from_fn(g, |_, _| rng.next_u64() & 1 == 1);
            let b = BinaryMask::from_fn(g, |_, _| rng.next_u64() & 1 == 1);
            let rep = energy(&a, &b, &params, &Stencil::n8()).unwrap();
            assert_eq!(rep.total, rep.perimeter_term + rep.fidelity_term);
        }
    }

    #[test]
    fn ball_union_delta_sign_matches_continuum_margins() {
        let params = EnergyParams::from_lambda_str("0.1").unwrap(); // R = 20
        let g = geom(128, 128);
        let empty = BinaryMask::empty(g);
        // Above the critical radius the disc pays for itself.
        let omega_big = disc(g, 27.0);
        let (cx, cy) = g.central_cell_center();
        let ball_big = DiscSpec::new(cx, cy, 25.0).unwrap();
        let d_big =
            delta_energy_ball_union(&empty, &ball_big, &omega_big, &params, &Stencil::n16())
                .unwrap();
        assert!(
            d_big < Exact::from_integer(0),
            "dE = {}",
            exact_to_f64(&d_big)
        );
        // Below it the empty set wins.
        let omega_small = disc(g, 17.0);
        let ball_small = DiscSpec::new(cx, cy, 15.0).unwrap();
        let d_small =
            delta_energy_ball_union(&empty, &ball_small, &omega_small, &params, &Stencil::n16())
                .unwrap();
        assert!(
            d_small > Exact::from_integer(0),
            "dE = {}",
            exact_to_f64(&d_small)
        );
    }

    #[test]
    fn ball_already_inside_sigma_changes_nothing() {
        let g = geom(64, 64);
        let params = EnergyParams::from_lambda_str("0.5").unwrap();
        let sigma = disc(g, 20.0);
        let omega = disc(g, 22.0);
        let (cx, cy) = g.central_cell_center();
        let ball = DiscSpec::new(cx, cy, 10.0).unwrap();
        let d = delta_energy_ball_union(&sigma, &ball, &omega, &params, &Stencil::n8()).unwrap();
        assert_eq!(d, Exact::from_integer(0));
    }

    #[test]
    fn decomposed_delta_agrees_when_boundaries_are_separated() {
        // sigma: a block far from the ball; ball inside omega; no stencil
        // edge touches both boundaries.
        let g = geom(80, 80);
        let params = EnergyParams::from_lambda_str("0.2").unwrap();
        let omega = BinaryMask::full(g);
        let sigma = BinaryMask::from_fn(g, |x, y| x < 10 && y < 10);
        let ball = DiscSpec::new(50.0, 50.0, 12.0).unwrap();
        for st in [Stencil::n4(), Stencil::n8(), Stencil::n16()] {
            let direct = delta_energy_ball_union(&sigma, &ball, &omega, &params, &st).unwrap();
            let alg =
                delta_energy_ball_union_decomposed(&sigma, &ball, &omega, &params, &st).unwrap();
            assert_eq!(direct, alg, "stencil {}", st.name());
        }
        // When the boundaries do share stencil edges the direct route can
        // only be cheaper.
        let sigma2 = BinaryMask::from_fn(g, |x, _| x < 50);
        for st in [Stencil::n4(), Stencil::n16()] {
            let direct = delta_energy_ball_union(&sigma2, &ball, &omega, &params, &st).unwrap();
            let alg =
                delta_energy_ball_union_decomposed(&sigma2, &ball, &omega, &params, &st).unwrap();
            assert!(direct <= alg, "stencil {}", st.name());
        }
    }

    #[test]
    fn complement_duality_is_exact_under_interior_convention() {
        let g = geom(20, 20);
        let params = EnergyParams::from_lambda_str("0.3").unwrap();
        let mut rng = crate::rng::Rng::new(99);
        for _ in 0..50 {
            let sigma = BinaryMask::from_fn(g, |_, _| rng.next_u64().is_multiple_of(3));
            let omega = BinaryMask::from_fn(g, |_, _| rng.next_u64().is_multiple_of(2));
            let lhs = energy_with(
                &sigma,
                &omega,
                &params,
                &Stencil::n8(),
                BorderPolicy::InteriorOnly,
            )
            .unwrap();
            let rhs = energy_with(
                &sigma.complement(),
                &omega.complement(),
                &params,
                &Stencil::n8(),
                BorderPolicy::InteriorOnly,
            )
            .unwrap();
            assert_eq!(lhs.total, rhs.total);
            assert_eq!(lhs.fidelity_term, rhs.fidelity_term);
        }
    }

    #[test]
    fn energy_zero_iff_both_empty() {
        let g = geom(12, 12);
        let params = EnergyParams::from_lambda_str("1").unwrap();
        let e = energy(
            &BinaryMask::empty(g),
            &BinaryMask::empty(g),
            &params,
            &Stencil::n4(),
        )
        .unwrap();
        assert_eq!(e.total, Exact::from_integer(0));
        let mut one = BinaryMask::empty(g);
        one.set(5, 5, true);
        let e1 = energy(&one, &one, &params, &Stencil::n4()).unwrap();
        assert!(e1.total > Exact::from_integer(0));
        let e2 = energy(&BinaryMask::empty(g), &one, &params, &Stencil::n4()).unwrap();
        assert!(e2.total > Exact::from_integer(0));
    }

    #[test]
    fn disc_margin_vanishes_at_critical_radius() {
        let params = EnergyParams::from_lambda_str("0.1").unwrap();
        assert!(disc_energy_margin(20.0, &params).abs() < 1e-9);
        let m10 = disc_energy_margin(10.0, &params);
        let expect = 2.0 * core::f64::consts::PI * 10.0 - 0.1 * core::f64::consts::PI * 100.0;
        assert!((m10 - expect).abs() < 1e-9);
        assert!(m10 > 0.0);
        // n = 3: zero at r = 3 / lambda.
        let p3 = EnergyParams::new(Rational::new(1, 10), 3).unwrap();
        assert!(disc_energy_margin(30.0, &p3).abs() < 1e-9);
    }

    #[test]
    fn unit_ball_volumes_match_known_values() {
        assert!((unit_ball_volume(2) - core::f64::consts::PI).abs() < 1e-12);
        assert!((unit_ball_volume(3) - 4.0 / 3.0 * core::f64::consts::PI).abs() < 1e-12);
        assert!(
            (unit_ball_volume(4) - core::f64::consts::PI * core::f64::consts::PI / 2.0).abs()
                < 1e-12
        );
    }
}
