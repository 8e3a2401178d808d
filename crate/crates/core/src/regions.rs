//! Canonical decision-region geometries with exact membership predicates.
//!
//! Every region is stored in canonical orientation: axis along the last
//! coordinate `e_d`, apex or center at the origin. Boundary points count as
//! inside; the smoothed integrals are insensitive to measure-zero choices and
//! a fixed convention keeps membership deterministic.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A canonical decision region.
///
/// Serialized as JSON with a `kind` tag, e.g.
/// `{"kind": "ball", "dim": 3, "radius": 1.0}`,
/// `{"kind": "cone", "dim": 10, "theta_deg": 45.0}`,
/// `{"kind": "half_space", "dim": 5, "offset": 0.0}`,
/// `{"kind": "interval_1d", "intervals": [[-1.0, 1.0]]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RegionSpec {
    /// `{x : ‖x‖₂ ≤ radius}`.
    Ball { dim: usize, radius: f64 },
    /// Solid right circular cone with apex at the origin, axis along `-e_d`,
    /// half-angle `theta_deg` measured from the axis (aperture `2θ`):
    /// `{x : x_d + ‖x‖₂ cos θ ≤ 0}`.
    Cone { dim: usize, theta_deg: f64 },
    /// `{x : x_d ≤ offset}`.
    HalfSpace { dim: usize, offset: f64 },
    /// Disjoint union of closed intervals on the line.
    Interval1d { intervals: Vec<(f64, f64)> },
}

impl RegionSpec {
    pub fn dim(&self) -> usize {
        match self {
            RegionSpec::Ball { dim, .. }
            | RegionSpec::Cone { dim, .. }
            | RegionSpec::HalfSpace { dim, .. } => *dim,
            RegionSpec::Interval1d { .. } => 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            RegionSpec::Ball { dim, radius } => {
                if *dim == 0 {
                    return Err(Error::Domain("ball dimension must be >= 1".into()));
                }
                if !radius.is_finite() || *radius <= 0.0 {
                    return Err(Error::Domain(format!("ball radius {radius} must be positive")));
                }
            }
            RegionSpec::Cone { dim, theta_deg } => {
                if *dim < 2 {
                    return Err(Error::Domain("cone dimension must be >= 2".into()));
                }
                if !theta_deg.is_finite() || *theta_deg <= 0.0 || *theta_deg >= 90.0 {
                    return Err(Error::Domain(format!(
                        "cone half-angle {theta_deg}° outside (0°, 90°)"
                    )));
                }
            }
            RegionSpec::HalfSpace { dim, offset } => {
                if *dim == 0 {
                    return Err(Error::Domain("half-space dimension must be >= 1".into()));
                }
                if !offset.is_finite() {
                    return Err(Error::Domain(format!("half-space offset {offset} must be finite")));
                }
            }
            RegionSpec::Interval1d { intervals } => {
                validate_intervals(intervals)?;
            }
        }
        Ok(())
    }

    /// Exact membership: true iff the point satisfies the region's defining
    /// inequality, with the boundary counting as inside.
    pub fn contains(&self, point: &[f64]) -> Result<bool> {
        if point.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: point.len(),
            });
        }
        Ok(self.contains_unchecked(point))
    }

    /// Membership without the dimension check, for sampling inner loops.
    /// Callers must have validated `point.len() == self.dim()`.
    #[inline]
    pub(crate) fn contains_unchecked(&self, point: &[f64]) -> bool {
        match self {
            RegionSpec::Ball { radius, .. } => {
                let norm2: f64 = point.iter().map(|x| x * x).sum();
                norm2 <= radius * radius
            }
            RegionSpec::Cone { theta_deg, .. } => {
                let norm: f64 = point.iter().map(|x| x * x).sum::<f64>().sqrt();
                let x_d = point[point.len() - 1];
                x_d + norm * theta_deg.to_radians().cos() <= 0.0
            }
            RegionSpec::HalfSpace { offset, .. } => point[point.len() - 1] <= *offset,
            RegionSpec::Interval1d { intervals } => {
                let x = point[0];
                intervals.iter().any(|&(lo, hi)| lo <= x && x <= hi)
            }
        }
    }
}

pub(crate) fn validate_intervals(intervals: &[(f64, f64)]) -> Result<()> {
    for &(lo, hi) in intervals {
        if !lo.is_finite() || !hi.is_finite() || lo >= hi {
            return Err(Error::Domain(format!("invalid interval [{lo}, {hi}]")));
        }
    }
    let mut sorted: Vec<_> = intervals.to_vec();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    for w in sorted.windows(2) {
        if w[1].0 <= w[0].1 {
            return Err(Error::Domain(format!(
                "intervals [{}, {}] and [{}, {}] overlap",
                w[0].0, w[0].1, w[1].0, w[1].1
            )));
        }
    }
    Ok(())
}

/// A point `a·e_d` on a region's symmetry axis. For a ball, `a` is the signed
/// distance from the center; for the canonical cone, `a < 0` is inside.
#[derive(Clone, Debug)]
pub struct AxisPoint<'a> {
    pub region: &'a RegionSpec,
    pub coordinate: f64,
}

impl<'a> AxisPoint<'a> {
    pub fn new(region: &'a RegionSpec, coordinate: f64) -> Result<Self> {
        if !coordinate.is_finite() {
            return Err(Error::Domain(format!("axis coordinate {coordinate} must be finite")));
        }
        Ok(AxisPoint { region, coordinate })
    }

    pub fn to_vector(&self) -> Vec<f64> {
        let mut v = vec![0.0; self.region.dim()];
        *v.last_mut().expect("regions have dim >= 1") = self.coordinate;
        v
    }
}

/// Validated accessor for the projection gap `Υ_C - Υ_D >= 0` between a
/// region and its bounding cone; the threshold formulas consume it as-is.
pub fn bounding_cone_projection_gap(region: &RegionSpec, gap: f64) -> Result<f64> {
    if !matches!(region, RegionSpec::Cone { .. }) {
        return Err(Error::Domain("projection gap is defined for cones only".into()));
    }
    if !gap.is_finite() || gap < 0.0 {
        return Err(Error::Domain(format!("projection gap {gap} must be nonnegative")));
    }
    Ok(gap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn membership_examples() {
        let ball = RegionSpec::Ball { dim: 3, radius: 1.0 };
        assert!(ball.contains(&[0.0, 0.0, 0.0]).unwrap());
        assert!(ball.contains(&[0.0, 0.0, 1.0]).unwrap()); // boundary inside
        assert!(!ball.contains(&[0.0, 0.0, 1.0 + 1e-12]).unwrap());

        let cone = RegionSpec::Cone { dim: 2, theta_deg: 45.0 };
        assert!(cone.contains(&[0.0, -1.0]).unwrap());
        assert!(!cone.contains(&[0.0, 1.0]).unwrap());

        let hs = RegionSpec::HalfSpace { dim: 5, offset: 0.0 };
        assert!(!hs.contains(&[0.0, 0.0, 0.0, 0.0, 0.1]).unwrap());
        assert!(hs.contains(&[0.0, 0.0, 0.0, 0.0, 0.0]).unwrap());

        assert!(matches!(
            ball.contains(&[0.0, 0.0]),
            Err(Error::DimensionMismatch { expected: 3, got: 2 })
        ));
    }

    #[test]
    fn cone_axis_membership_iff_nonpositive() {
        for &theta in &[5.0, 30.0, 45.0, 60.0, 89.0] {
            let cone = RegionSpec::Cone { dim: 4, theta_deg: theta };
            for &a in &[-3.0, -0.5, 0.0, 0.5, 3.0] {
                let p = AxisPoint::new(&cone, a).unwrap().to_vector();
                assert_eq!(cone.contains(&p).unwrap(), a <= 0.0, "theta = {theta}, a = {a}");
            }
        }
    }

    #[test]
    fn interval_validation() {
        assert!(validate_intervals(&[(-1.0, 1.0), (2.0, 3.0)]).is_ok());
        assert!(validate_intervals(&[(2.0, 3.0), (-1.0, 1.0)]).is_ok()); // order-insensitive
        assert!(validate_intervals(&[(-1.0, 1.0), (0.5, 2.0)]).is_err());
        assert!(validate_intervals(&[(1.0, 1.0)]).is_err());
    }

    #[test]
    fn projection_gap_accessor() {
        let cone = RegionSpec::Cone { dim: 3, theta_deg: 30.0 };
        assert_eq!(bounding_cone_projection_gap(&cone, 0.0).unwrap(), 0.0);
        assert_eq!(bounding_cone_projection_gap(&cone, 1.5).unwrap(), 1.5);
        assert!(bounding_cone_projection_gap(&cone, -1.0).is_err());
        let ball = RegionSpec::Ball { dim: 3, radius: 1.0 };
        assert!(bounding_cone_projection_gap(&ball, 1.0).is_err());
    }

    #[test]
    fn json_round_trip() {
        let specs = vec![
            RegionSpec::Ball { dim: 3, radius: 1.0 },
            RegionSpec::Cone { dim: 10, theta_deg: 45.0 },
            RegionSpec::HalfSpace { dim: 5, offset: 0.25 },
            RegionSpec::Interval1d { intervals: vec![(-1.0, 1.0), (2.0, 2.5)] },
        ];
        for spec in specs {
            let json = serde_json::to_string(&spec).unwrap();
            let back: RegionSpec = serde_json::from_str(&json).unwrap();
            assert_eq!(spec, back);
        }
        let parsed: RegionSpec =
            serde_json::from_str(r#"{"kind": "ball", "dim": 3, "radius": 1.0}"#).unwrap();
        assert_eq!(parsed, RegionSpec::Ball { dim: 3, radius: 1.0 });
    }

    proptest! {
        #[test]
        fn nested_balls_contain(
            r1 in 0.1f64..1.0,
            extra in 0.01f64..2.0,
            coords in prop::collection::vec(-2.0f64..2.0, 4)
        ) {
            let inner = RegionSpec::Ball { dim: 4, radius: r1 };
            let outer = RegionSpec::Ball { dim: 4, radius: r1 + extra };
            if inner.contains(&coords).unwrap() {
                prop_assert!(outer.contains(&coords).unwrap());
            }
        }
    }
}
