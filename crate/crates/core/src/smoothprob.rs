//! Deterministic Gaussian-smoothed class-1 probabilities at axis points of
//! canonical regions, via closed forms and 1D quadrature.
//!
//! Only axis points are computed analytically: they are extremal for both the
//! ball and the cone, and every threshold question is decided there. Off-axis
//! values are served by the Monte Carlo oracle in [`crate::mc`].

use crate::error::{Error, Result};
use crate::quad::{adaptive_simpson_panels, QuadratureSettings};
use crate::specfn::{reg_lower_gamma, reg_lower_gamma_raw, std_normal_cdf, Probability};

#[inline]
fn gauss_pdf(t: f64, center: f64, sigma: f64) -> f64 {
    let z = (t - center) / sigma;
    (-0.5 * z * z).exp() / (sigma * (2.0 * std::f64::consts::PI).sqrt())
}

fn check_sigma(sigma: f64) -> Result<()> {
    if !sigma.is_finite() || sigma <= 0.0 {
        return Err(Error::Domain(format!("smoothing factor {sigma} must be positive")));
    }
    Ok(())
}

/// Smoothed probability of a centered ball at its center:
/// `Q(d/2, R²/(2σ²))`, exact.
pub fn ball_origin_prob(radius: f64, dim: u32, sigma: f64) -> Result<Probability> {
    if !radius.is_finite() || radius <= 0.0 {
        return Err(Error::Domain(format!("ball radius {radius} must be positive")));
    }
    if dim == 0 {
        return Err(Error::Domain("dimension must be >= 1".into()));
    }
    check_sigma(sigma)?;
    reg_lower_gamma(dim as f64 / 2.0, radius * radius / (2.0 * sigma * sigma))
}

/// Smoothed probability of a centered ball at the axis point `a·e_d`,
/// by 1D quadrature of the factorized integrand
/// `∫_{-R}^{R} Q((d-1)/2, (R²-t²)/(2σ²)) φ_σ(t-a) dt`.
///
/// Needs `d >= 2`; the 1D ball is an interval, see [`interval1d_prob`].
pub fn ball_axis_prob(
    radius: f64,
    dim: u32,
    sigma: f64,
    a: f64,
    q: &QuadratureSettings,
) -> Result<Probability> {
    if !radius.is_finite() || radius <= 0.0 {
        return Err(Error::Domain(format!("ball radius {radius} must be positive")));
    }
    if dim < 2 {
        return Err(Error::Domain(
            "ball_axis_prob needs d >= 2; use interval1d_prob for d = 1".into(),
        ));
    }
    check_sigma(sigma)?;
    if !a.is_finite() {
        return Err(Error::Domain(format!("axis coordinate {a} must be finite")));
    }
    q.validate()?;

    let lo = (-radius).max(a - q.tail_sigmas * sigma);
    let hi = radius.min(a + q.tail_sigmas * sigma);
    if lo >= hi {
        return Ok(Probability::ZERO);
    }
    let s = (dim - 1) as f64 / 2.0;
    let inv_two_var = 1.0 / (2.0 * sigma * sigma);
    let r2 = radius * radius;
    let f = |t: f64| {
        let cross = reg_lower_gamma_raw(s, (r2 - t * t).max(0.0) * inv_two_var);
        cross * gauss_pdf(t, a, sigma)
    };
    let v = adaptive_simpson_panels(&f, lo, hi, 8, q.abs_tol, q.max_subdivisions)?;
    Probability::new_clamped(v, 1e-6)
}

/// Smoothed probability of the canonical cone (apex at origin, interior
/// toward `-e_d`, half-angle `theta`) at the axis point `a·e_d`:
/// `(2πσ²)^{-1/2} ∫_{-∞}^{0} Q((d-1)/2, tan²θ·t²/(2σ²)) e^{-(t-a)²/(2σ²)} dt`,
/// with the infinite tail truncated `tail_sigmas·σ` beyond the Gaussian center.
pub fn cone_axis_prob(
    theta: f64,
    dim: u32,
    sigma: f64,
    a: f64,
    q: &QuadratureSettings,
) -> Result<Probability> {
    if !theta.is_finite() || theta <= 0.0 || theta >= std::f64::consts::FRAC_PI_2 {
        return Err(Error::Domain(format!("cone half-angle {theta} rad outside (0, π/2)")));
    }
    if dim < 2 {
        return Err(Error::Domain("cone dimension must be >= 2".into()));
    }
    check_sigma(sigma)?;
    if !a.is_finite() {
        return Err(Error::Domain(format!("axis coordinate {a} must be finite")));
    }
    q.validate()?;

    let lo = a.min(0.0) - q.tail_sigmas * sigma;
    let hi = (a + q.tail_sigmas * sigma).min(0.0);
    if lo >= hi {
        return Ok(Probability::ZERO);
    }
    let s = (dim - 1) as f64 / 2.0;
    let tan2 = theta.tan().powi(2);
    let inv_two_var = 1.0 / (2.0 * sigma * sigma);
    let f = |t: f64| reg_lower_gamma_raw(s, tan2 * t * t * inv_two_var) * gauss_pdf(t, a, sigma);
    let v = adaptive_simpson_panels(&f, lo, hi, 8, q.abs_tol, q.max_subdivisions)?;
    Probability::new_clamped(v, 1e-6)
}

/// Evaluates the scaling identity `f_σ(a·e_d) = f_1((a/σ)·e_d)` on the cone:
/// returns both sides; they agree within `2·abs_tol` by contract.
pub fn scale_invariance_check(
    theta: f64,
    dim: u32,
    sigma: f64,
    a: f64,
    q: &QuadratureSettings,
) -> Result<(Probability, Probability)> {
    let direct = cone_axis_prob(theta, dim, sigma, a, q)?;
    let scaled = cone_axis_prob(theta, dim, 1.0, a / sigma, q)?;
    Ok((direct, scaled))
}

/// Smoothed probability of the half-space `{x : x_d ≤ b}` at the axis point
/// `a·e_d`: `Φ((b - a)/σ)`, closed form.
pub fn halfspace_prob(b: f64, sigma: f64, a: f64) -> Result<Probability> {
    check_sigma(sigma)?;
    if !b.is_finite() || !a.is_finite() {
        return Err(Error::Domain("half-space offset and point must be finite".into()));
    }
    std_normal_cdf((b - a) / sigma)
}

/// Smoothed probability of a disjoint interval union at point `a`:
/// `Σᵢ Φ((hiᵢ - a)/σ) - Φ((loᵢ - a)/σ)`, closed form.
pub fn interval1d_prob(intervals: &[(f64, f64)], sigma: f64, a: f64) -> Result<Probability> {
    check_sigma(sigma)?;
    if !a.is_finite() {
        return Err(Error::Domain(format!("point {a} must be finite")));
    }
    crate::regions::validate_intervals(intervals)?;
    let mut total = 0.0;
    for &(lo, hi) in intervals {
        total += std_normal_cdf((hi - a) / sigma)?.get() - std_normal_cdf((lo - a) / sigma)?.get();
    }
    Probability::new_clamped(total, 1e-12)
}
