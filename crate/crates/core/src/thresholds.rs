//! Closed-form sufficient-condition thresholds for shrinkage and vanishing
//! of smoothed decision regions. These are sufficient bounds, not tight ones;
//! vacuous bounds come back as `+∞` with an explicit flag so sweeps stay total.
//!
//! Natural logarithm throughout; this reproduces the published narrowness
//! constants (76.7°, 83.2°, 75.2°) exactly.

use crate::error::{Error, Result};
use crate::specfn::std_normal_quantile;

fn check_c(c: u32) -> Result<f64> {
    if c < 2 {
        return Err(Error::Domain(format!("class count c = {c} must be >= 2")));
    }
    Ok(c as f64)
}

fn check_radius(r: f64) -> Result<()> {
    if !r.is_finite() || r <= 0.0 {
        return Err(Error::Domain(format!("radius {r} must be positive")));
    }
    Ok(())
}

/// Smoothing factors above `R√c / √(2(d-1))` shrink a bounded region of
/// radius `R`. Restricted to `d >= 3`: the underlying gamma inequality is
/// applied at dimension `d - 1`.
pub fn bounded_shrink_threshold(r: f64, c: u32, d: u32) -> Result<f64> {
    check_radius(r)?;
    let c = check_c(c)?;
    if d < 3 {
        return Err(Error::Domain(format!(
            "bounded_shrink_threshold needs d >= 3, got {d}; analyze d = 2 via ball_axis_prob"
        )));
    }
    Ok(r * c.sqrt() / (2.0 * (d as f64 - 1.0)).sqrt())
}

/// Smoothing factors above `R√c / √d` make a bounded region of radius `R`
/// vanish entirely (origin probability below `1/c`).
pub fn bounded_vanish_threshold(r: f64, c: u32, d: u32) -> Result<f64> {
    check_radius(r)?;
    let c = check_c(c)?;
    if d < 2 {
        return Err(Error::Domain(format!("bounded_vanish_threshold needs d >= 2, got {d}")));
    }
    Ok(r * c.sqrt() / (d as f64).sqrt())
}

/// Largest cone half-angle (degrees) for which the cone-shrinkage condition
/// is non-vacuous: `arctan √((d-1)/(2c·ln(c-1)))`. For `c = 2` the bound is
/// vacuous (`ln 1 = 0`) and the limit is 90°: any non-half-space cone shrinks.
pub fn cone_narrowness_limit_deg(c: u32, d: u32) -> Result<f64> {
    let cf = check_c(c)?;
    if d < 2 {
        return Err(Error::Domain(format!("cone dimensions start at 2, got {d}")));
    }
    if c == 2 {
        return Ok(90.0);
    }
    let tan_limit = ((d as f64 - 1.0) / (2.0 * cf * (cf - 1.0).ln())).sqrt();
    Ok(tan_limit.atan().to_degrees())
}

/// Result of [`cone_shrink_threshold`]: the threshold may be `+∞` when the
/// narrowness condition fails.
#[derive(Clone, Copy, Debug)]
pub struct ConeShrinkThreshold {
    pub sigma: f64,
    pub condition_met: bool,
}

/// Smoothing factors above
/// `gap·tanθ·√(c/(d-1)) · 2(d-1)/((d-1) - 2tan²θ·c·ln(c-1))`
/// shrink a semi-bounded region whose `θ`-bounding cone sits `gap` above it.
/// `theta` in radians.
pub fn cone_shrink_threshold(gap: f64, theta: f64, c: u32, d: u32) -> Result<ConeShrinkThreshold> {
    if !gap.is_finite() || gap < 0.0 {
        return Err(Error::Domain(format!("projection gap {gap} must be nonnegative")));
    }
    let cf = check_c(c)?;
    if d < 2 {
        return Err(Error::Domain(format!("cone dimensions start at 2, got {d}")));
    }
    if !theta.is_finite() || theta <= 0.0 || theta >= std::f64::consts::FRAC_PI_2 {
        return Err(Error::Domain(format!("half-angle {theta} rad outside (0, π/2)")));
    }
    let dm1 = d as f64 - 1.0;
    let tan2 = theta.tan().powi(2);
    let denom = dm1 - 2.0 * tan2 * cf * (cf - 1.0).ln();
    if denom <= 0.0 {
        return Ok(ConeShrinkThreshold { sigma: f64::INFINITY, condition_met: false });
    }
    let sigma = gap * theta.tan() * (cf / dm1).sqrt() * 2.0 * dm1 / denom;
    Ok(ConeShrinkThreshold { sigma, condition_met: true })
}

/// Lower bound on the per-unit-σ shrinking rate of a cone-like region:
/// `√((d-1)/(c·tan²θ)) · ((d-1) - 2tan²θ·c·ln(c-1)) / (2(d-1))`,
/// clamped at 0 where the formula goes negative. `theta` in radians.
pub fn cone_shrink_rate_bound(theta: f64, c: u32, d: u32) -> Result<f64> {
    let cf = check_c(c)?;
    if d < 2 {
        return Err(Error::Domain(format!("cone dimensions start at 2, got {d}")));
    }
    if !theta.is_finite() || theta <= 0.0 || theta >= std::f64::consts::FRAC_PI_2 {
        return Err(Error::Domain(format!("half-angle {theta} rad outside (0, π/2)")));
    }
    let dm1 = d as f64 - 1.0;
    let tan2 = theta.tan().powi(2);
    let v = (dm1 / (cf * tan2)).sqrt() * (dm1 - 2.0 * tan2 * cf * (cf - 1.0).ln()) / (2.0 * dm1);
    Ok(v.max(0.0))
}

/// Shrink and vanish thresholds for a 1D interval `[-R, R]`:
/// `(2R/Φ⁻¹(1/2 + 1/c), R/Φ⁻¹(1/2 + 1/(2c)))`. The shrink formula is
/// degenerate at `c = 2` (quantile argument hits 1) and is reported as `+∞`.
pub fn unidim_thresholds(r: f64, c: u32) -> Result<(f64, f64)> {
    check_radius(r)?;
    let cf = check_c(c)?;
    let shrink = if c == 2 {
        f64::INFINITY
    } else {
        2.0 * r / std_normal_quantile(0.5 + 1.0 / cf)?
    };
    let vanish = r / std_normal_quantile(0.5 + 1.0 / (2.0 * cf))?;
    Ok((shrink, vanish))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shrink_threshold_formula() {
        assert!((bounded_shrink_threshold(1.0, 2, 3).unwrap() - 1.0 / 2f64.sqrt()).abs() < 1e-15);
        assert!((bounded_shrink_threshold(1.0, 2, 50).unwrap() - (2f64 / 98.0).sqrt()).abs() < 1e-15);
        assert!((bounded_shrink_threshold(2.0, 10, 101).unwrap() - (40f64 / 200.0).sqrt()).abs() < 1e-15);
        assert!(bounded_shrink_threshold(1.0, 2, 2).is_err());
        assert!(bounded_shrink_threshold(1.0, 1, 5).is_err());
    }

    #[test]
    fn vanish_threshold_formula() {
        let v = bounded_vanish_threshold(1.0, 2, 3).unwrap();
        assert!((v - (2f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!(v > 0.651); // sufficient, not tight
        // R = √d/2 makes the bound 1/√2 regardless of d.
        for &d in &[4u32, 16, 100] {
            let r = (d as f64).sqrt() / 2.0;
            assert!((bounded_vanish_threshold(r, 2, d).unwrap() - 0.5f64.sqrt()).abs() < 1e-14);
        }
        assert!(bounded_vanish_threshold(1.0, 2, 100).unwrap() > 0.099);
    }

    #[test]
    fn vanish_threshold_monotonicity() {
        let base = bounded_vanish_threshold(1.0, 4, 20).unwrap();
        assert!(bounded_vanish_threshold(1.0, 4, 40).unwrap() < base);
        assert!(bounded_vanish_threshold(2.0, 4, 20).unwrap() > base);
        assert!(bounded_vanish_threshold(1.0, 9, 20).unwrap() > base);
    }

    #[test]
    fn narrowness_constants() {
        assert!((cone_narrowness_limit_deg(10, 784).unwrap() - 76.7).abs() < 0.1);
        assert!((cone_narrowness_limit_deg(10, 3072).unwrap() - 83.2).abs() < 0.1);
        // The published ImageNet constant corresponds to 256x256x3 inputs.
        assert!((cone_narrowness_limit_deg(1000, 196_608).unwrap() - 75.2).abs() < 0.1);
        assert!((cone_narrowness_limit_deg(1000, 150_528).unwrap() - 73.1).abs() < 0.1);
        assert_eq!(cone_narrowness_limit_deg(2, 50).unwrap(), 90.0);
    }

    #[test]
    fn cone_threshold_cases() {
        let t = cone_shrink_threshold(1.0, 45f64.to_radians(), 2, 10).unwrap();
        assert!(t.condition_met);
        assert!((t.sigma - 2.0 * (2f64 / 9.0).sqrt()).abs() < 1e-12);

        let zero = cone_shrink_threshold(0.0, 30f64.to_radians(), 5, 20).unwrap();
        assert_eq!(zero.sigma, 0.0);
        assert!(zero.condition_met);

        // θ above the narrowness limit: vacuous.
        let vac = cone_shrink_threshold(1.0, 60f64.to_radians(), 10, 10).unwrap();
        assert!(!vac.condition_met);
        assert!(vac.sigma.is_infinite());

        assert!(cone_shrink_threshold(-1.0, 0.5, 2, 10).is_err());
    }

    #[test]
    fn shrink_rate_bound_cases() {
        let v = cone_shrink_rate_bound(45f64.to_radians(), 2, 10).unwrap();
        assert!((v - 3.0 / 2f64.sqrt() * 0.5).abs() < 1e-12);
        let v2 = cone_shrink_rate_bound(45f64.to_radians(), 2, 2).unwrap();
        assert!((v2 - 0.5 / 2f64.sqrt()).abs() < 1e-12);
        // Negative formula value clamps to zero.
        assert_eq!(cone_shrink_rate_bound(80f64.to_radians(), 100, 3).unwrap(), 0.0);
    }

    #[test]
    fn unidim_threshold_cases() {
        let (shrink, vanish) = unidim_thresholds(1.0, 2).unwrap();
        assert!(shrink.is_infinite()); // degenerate c = 2 case
        assert!((vanish - 1.0 / 0.6744897501960817).abs() < 1e-9);

        let (shrink4, _) = unidim_thresholds(1.0, 4).unwrap();
        assert!((shrink4 - 2.0 / 0.6744897501960817).abs() < 1e-9);
        assert!(unidim_thresholds(1.0, 1).is_err());
    }
}
