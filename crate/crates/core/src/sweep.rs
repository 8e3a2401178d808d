//! Grid evaluation helpers. Every grid point is independent, so sweeps run
//! data-parallel when the `parallel` feature is enabled; results always come
//! back in input order, so output tables are identical either way.

/// Maps `f` over `items`, in parallel when built with the `parallel` feature.
#[cfg(feature = "parallel")]
pub fn map_grid<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_grid<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    map_grid_seq(items, f)
}

/// Sequential reference path; the benchmark suite compares it against
/// [`map_grid`].
pub fn map_grid_seq<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

/// Inclusive-start, stop-bounded arithmetic grid: `start, start+step, ...`
/// while the value stays within `stop` (plus a half-step of slack against
/// roundoff).
pub fn arithmetic_grid(start: f64, stop: f64, step: f64) -> Vec<f64> {
    assert!(step > 0.0, "grid step must be positive");
    let mut out = Vec::new();
    let mut i = 0u64;
    loop {
        let v = start + i as f64 * step;
        if v > stop + 0.5 * step {
            break;
        }
        if v <= stop + 1e-12 * step.abs().max(stop.abs()) {
            out.push(v.min(stop));
        } else {
            break;
        }
        i += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_and_sequential_agree() {
        let xs: Vec<f64> = (0..100).map(|i| i as f64 * 0.1).collect();
        let a = map_grid(&xs, |&x| x * x);
        let b = map_grid_seq(&xs, |&x| x * x);
        assert_eq!(a, b);
    }

    #[test]
    fn grid_endpoints() {
        let g = arithmetic_grid(0.0, 1.0, 0.25);
        assert_eq!(g, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        let g = arithmetic_grid(0.01, 0.7, 0.005);
        assert_eq!(g.len(), 139);
        assert!((g[138] - 0.7).abs() < 1e-12);
        let single = arithmetic_grid(2.0, 2.0, 1.0);
        assert_eq!(single, vec![2.0]);
    }
}
