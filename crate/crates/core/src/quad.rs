//! Adaptive Simpson quadrature (interval halving with Richardson criterion).
//!
//! Chosen over fixed-order rules because several integrands here have a
//! kink-like transition (the regularized-gamma factor for narrow cones); the
//! adaptive rule localizes subdivision there.

use crate::error::{Error, Result};

/// Tolerances and budgets shared by all quadrature-backed operations.
#[derive(Clone, Copy, Debug)]
pub struct QuadratureSettings {
    /// Absolute tolerance on the integral value.
    pub abs_tol: f64,
    /// Total subdivision budget before giving up.
    pub max_subdivisions: u32,
    /// Infinite limits are truncated this many sigmas beyond the Gaussian
    /// center; at the default 10 the dropped Gaussian mass is < 1e-22.
    pub tail_sigmas: f64,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        Self { abs_tol: 1e-10, max_subdivisions: 2000, tail_sigmas: 10.0 }
    }
}

impl QuadratureSettings {
    pub fn validate(&self) -> Result<()> {
        if !self.abs_tol.is_finite() || self.abs_tol <= 0.0 {
            return Err(Error::Domain(format!("abs_tol {} must be positive", self.abs_tol)));
        }
        if self.tail_sigmas < 6.0 {
            return Err(Error::Domain(format!("tail_sigmas {} must be >= 6", self.tail_sigmas)));
        }
        Ok(())
    }
}

const MAX_DEPTH: u32 = 50;

fn simpson(h: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    h / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adapt<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    budget: &mut u32,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(m - a, fa, flm, fm);
    let right = simpson(b - m, fm, frm, fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol || depth >= MAX_DEPTH {
        return Ok(left + right + delta / 15.0);
    }
    if *budget == 0 {
        return Err(Error::Quadrature {
            estimate: left + right + delta / 15.0,
            error_bound: delta.abs() / 15.0,
        });
    }
    *budget -= 1;
    let l = adapt(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1, budget)?;
    let r = adapt(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1, budget)?;
    Ok(l + r)
}

/// Integrates `f` over `[a, b]` to absolute tolerance `abs_tol`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    abs_tol: f64,
    max_subdivisions: u32,
) -> Result<f64> {
    adaptive_simpson_panels(f, a, b, 1, abs_tol, max_subdivisions)
}

/// Integrates `f` over `[a, b]` with a fixed pre-split into `panels` equal
/// panels, each refined adaptively. The pre-split keeps narrow features from
/// hiding between the initial sample points of a very wide interval.
pub fn adaptive_simpson_panels<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    panels: u32,
    abs_tol: f64,
    max_subdivisions: u32,
) -> Result<f64> {
    debug_assert!(panels >= 1);
    if a >= b {
        return Ok(0.0);
    }
    let mut budget = max_subdivisions;
    let mut total = 0.0;
    let panel_tol = abs_tol / panels as f64;
    let width = (b - a) / panels as f64;
    for i in 0..panels {
        let pa = a + i as f64 * width;
        let pb = if i == panels - 1 { b } else { pa + width };
        let pm = 0.5 * (pa + pb);
        let fa = f(pa);
        let fm = f(pm);
        let fb = f(pb);
        let whole = simpson(pb - pa, fa, fm, fb);
        total += adapt(f, pa, pb, fa, fm, fb, whole, panel_tol, 0, &mut budget).map_err(
            |e| match e {
                Error::Quadrature { estimate, error_bound } => Error::Quadrature {
                    estimate: total + estimate,
                    error_bound,
                },
                other => other,
            },
        )?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        // Simpson is exact on cubics; the adaptive wrapper must preserve that.
        let v = adaptive_simpson(&|x: f64| x * x * x - 2.0 * x + 1.0, -1.0, 3.0, 1e-12, 100).unwrap();
        let exact = (81.0 - 1.0) / 4.0 - (9.0 - 1.0) + 4.0;
        assert!((v - exact).abs() < 1e-12);
    }

    #[test]
    fn gaussian_mass() {
        let v = adaptive_simpson(
            &|x: f64| (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt(),
            -10.0,
            10.0,
            1e-12,
            5000,
        )
        .unwrap();
        assert!((v - 1.0).abs() < 1e-11);
    }

    #[test]
    fn narrow_spike_in_wide_interval() {
        // Mass 1 Gaussian of width 0.1 centered at -5 inside [-200, 0]; the
        // panel pre-split has to find it.
        let v = adaptive_simpson_panels(
            &|x: f64| (-0.5 * ((x + 5.0) / 0.1).powi(2)).exp() / (0.1 * (2.0 * std::f64::consts::PI).sqrt()),
            -200.0,
            0.0,
            32,
            1e-10,
            100_000,
        )
        .unwrap();
        assert!((v - 1.0).abs() < 1e-9, "got {v}");
    }

    #[test]
    fn budget_exhaustion_reports_estimate() {
        let err = adaptive_simpson(&|x: f64| (1e6 * x).sin().abs(), 0.0, 1.0, 1e-14, 4);
        match err {
            Err(Error::Quadrature { estimate, error_bound }) => {
                assert!(estimate.is_finite());
                assert!(error_bound > 0.0);
            }
            other => panic!("expected quadrature error, got {other:?}"),
        }
    }

    #[test]
    fn settings_validation() {
        assert!(QuadratureSettings::default().validate().is_ok());
        assert!(QuadratureSettings { abs_tol: 0.0, ..Default::default() }.validate().is_err());
        assert!(QuadratureSettings { tail_sigmas: 3.0, ..Default::default() }.validate().is_err());
    }
}
