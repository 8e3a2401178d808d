//! Root-finding for smoothed decision-boundary locations: the smoothed ball
//! radius `R_σ`, the cone projection `Υ_σ`, the empirical vanishing factor,
//! and finite-difference shrinking-rate curves.
//!
//! All roots use bisection: the objectives are monotone (Lemmas on axis
//! extremality), each evaluation is an expensive quadrature, and bisection is
//! unconditionally convergent.

use crate::curve::{Cell, CurveTable};
use crate::error::{Error, Result};
use crate::quad::QuadratureSettings;
use crate::smoothprob::{ball_axis_prob, ball_origin_prob, cone_axis_prob};
use crate::sweep::map_grid;
use crate::thresholds::bounded_vanish_threshold;

#[derive(Clone, Copy, Debug)]
pub struct RootSettings {
    pub x_tol: f64,
    pub max_iter: u32,
    pub bracket_growth: f64,
}

impl Default for RootSettings {
    fn default() -> Self {
        Self { x_tol: 1e-6, max_iter: 200, bracket_growth: 2.0 }
    }
}

impl RootSettings {
    pub fn validate(&self) -> Result<()> {
        if !self.x_tol.is_finite() || self.x_tol <= 0.0 {
            return Err(Error::Domain(format!("x_tol {} must be positive", self.x_tol)));
        }
        if self.bracket_growth <= 1.0 {
            return Err(Error::Domain("bracket_growth must exceed 1".into()));
        }
        Ok(())
    }
}

/// Bisection for a decreasing objective with `g(lo) >= 0 >= g(hi)`.
fn bisect_decreasing<G: Fn(f64) -> Result<f64>>(
    g: &G,
    mut lo: f64,
    mut hi: f64,
    s: &RootSettings,
) -> Result<f64> {
    for _ in 0..s.max_iter {
        if (hi - lo).abs() <= s.x_tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if g(mid)? >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// The smoothed ball either has a boundary radius or has vanished outright.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BallRadius {
    Radius(f64),
    Vanished,
}

impl BallRadius {
    pub fn radius(self) -> Option<f64> {
        match self {
            BallRadius::Radius(r) => Some(r),
            BallRadius::Vanished => None,
        }
    }
}

fn class_target(c: u32) -> Result<f64> {
    if c < 2 {
        return Err(Error::Domain(format!("class count c = {c} must be >= 2")));
    }
    Ok(1.0 / c as f64)
}

/// Radius `R_σ` of the smoothed region of `Ball(R)` under the `1/c`
/// threshold: the unique `a >= 0` with `f_σ(a·e_d) = 1/c`, or `Vanished`
/// when even the origin falls below `1/c`.
pub fn smoothed_ball_radius(
    radius: f64,
    dim: u32,
    c: u32,
    sigma: f64,
    q: &QuadratureSettings,
    s: &RootSettings,
) -> Result<BallRadius> {
    let target = class_target(c)?;
    s.validate()?;
    if ball_origin_prob(radius, dim, sigma)?.get() < target {
        return Ok(BallRadius::Vanished);
    }
    let g = |a: f64| Ok(ball_axis_prob(radius, dim, sigma, a, q)?.get() - target);
    let mut hi = radius.max(sigma);
    let mut grow = 0;
    while g(hi)? >= 0.0 {
        hi *= s.bracket_growth;
        grow += 1;
        if grow > 200 {
            return Err(Error::Bracket(format!(
                "no upper bracket for R_sigma at R={radius}, d={dim}, c={c}, sigma={sigma}"
            )));
        }
    }
    bisect_decreasing(&g, 0.0, hi, s).map(BallRadius::Radius)
}

/// Empirical vanishing factor: the unique `σ` with
/// `Q(d/2, R²/(2σ²)) = 1/c`. Always at or below the closed-form
/// sufficient bound `R√c/√d`.
pub fn vanish_sigma(radius: f64, dim: u32, c: u32, s: &RootSettings) -> Result<f64> {
    let target = class_target(c)?;
    s.validate()?;
    let g = |sigma: f64| Ok(ball_origin_prob(radius, dim, sigma)?.get() - target);
    // The gamma inequality makes the closed-form bound a strict upper bracket.
    let mut hi = bounded_vanish_threshold(radius, c, dim)?;
    let mut grow = 0;
    while g(hi)? >= 0.0 {
        hi *= s.bracket_growth;
        grow += 1;
        if grow > 60 {
            return Err(Error::Bracket("no upper bracket for vanish_sigma".into()));
        }
    }
    let mut lo = hi * 1e-3;
    while g(lo)? < 0.0 {
        lo *= 0.5;
        if lo < 1e-300 {
            return Err(Error::Bracket("no lower bracket for vanish_sigma".into()));
        }
    }
    bisect_decreasing(&g, lo, hi, s)
}

/// Shrinking-rate curve for `Ball(R)`: rows `(sigma, r_sigma, shrink_rate,
/// vanished)` where `shrink_rate = -dR_σ/dσ` by central finite difference
/// (a positive quantity for a shrinking region). Grid points past the
/// vanishing factor come back flagged rather than erroring, so sweep tables
/// stay rectangular.
pub fn shrink_rate_curve(
    radius: f64,
    dim: u32,
    c: u32,
    sigma_grid: &[f64],
    q: &QuadratureSettings,
    s: &RootSettings,
) -> Result<CurveTable> {
    class_target(c)?;
    if sigma_grid.is_empty() {
        return Err(Error::Domain("sigma grid must be nonempty".into()));
    }
    let spacing = sigma_grid
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min);
    let h = if spacing.is_finite() { (spacing / 10.0).min(1e-4) } else { 1e-4 };

    let results = map_grid(sigma_grid, |&sigma| -> Result<(f64, Option<(f64, f64)>)> {
        match smoothed_ball_radius(radius, dim, c, sigma, q, s)? {
            BallRadius::Vanished => Ok((sigma, None)),
            BallRadius::Radius(r_sigma) => {
                let back = smoothed_ball_radius(radius, dim, c, sigma - h, q, s)?;
                let fwd = smoothed_ball_radius(radius, dim, c, sigma + h, q, s)?;
                let rate = match (back.radius(), fwd.radius()) {
                    (Some(rb), Some(rf)) => -(rf - rb) / (2.0 * h),
                    // One-sided difference against the surviving neighbor.
                    (Some(rb), None) => -(r_sigma - rb) / h,
                    (None, Some(rf)) => -(rf - r_sigma) / h,
                    (None, None) => f64::NAN,
                };
                Ok((sigma, Some((r_sigma, rate))))
            }
        }
    });

    let mut table = CurveTable::new(vec!["sigma", "r_sigma", "shrink_rate", "vanished"]);
    for res in results {
        let (sigma, row) = res?;
        match row {
            Some((r_sigma, rate)) => table.push_row(vec![
                Cell::Num(sigma),
                Cell::Num(r_sigma),
                Cell::Num(rate),
                Cell::Bool(false),
            ]),
            None => table.push_row(vec![
                Cell::Num(sigma),
                Cell::Num(f64::NAN),
                Cell::Num(f64::NAN),
                Cell::Bool(true),
            ]),
        }
    }
    Ok(table)
}

/// Projection bound `Υ_σ` of the smoothed canonical cone: the unique `a`
/// with `f_σ(a·e_d) = 1/c`. The unsmoothed cone has `Υ = 0`, so a negative
/// return is shrinkage. `theta` in radians.
pub fn cone_projection(
    theta: f64,
    dim: u32,
    c: u32,
    sigma: f64,
    q: &QuadratureSettings,
    s: &RootSettings,
) -> Result<f64> {
    let target = class_target(c)?;
    s.validate()?;
    let g = |a: f64| Ok(cone_axis_prob(theta, dim, sigma, a, q)?.get() - target);

    let mut lo = -sigma;
    let mut grow = 0;
    while g(lo)? < 0.0 {
        lo *= s.bracket_growth;
        grow += 1;
        if grow > 200 {
            return Err(Error::Bracket("no lower bracket for cone_projection".into()));
        }
    }
    let mut hi = sigma;
    grow = 0;
    while g(hi)? >= 0.0 {
        hi *= s.bracket_growth;
        grow += 1;
        if grow > 200 {
            return Err(Error::Bracket("no upper bracket for cone_projection".into()));
        }
    }
    bisect_decreasing(&g, lo, hi, s)
}
