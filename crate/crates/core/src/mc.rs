//! Seeded Monte Carlo estimation of smoothed probabilities — the independent
//! cross-check for the quadrature path.
//!
//! Reproducibility contract: sample `i` always reads the ChaCha8 stream at
//! word position `i·d·2` and converts each 64-bit draw to a standard normal
//! by inverse CDF. Estimates are therefore bit-identical across runs, thread
//! counts, and chunk partitions for a fixed `(seed, n, d)`.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::regions::RegionSpec;
use crate::specfn::{reg_inc_beta, std_normal_quantile};
use crate::sweep::map_grid;

/// Identifies the sampling scheme in output manifests; bump on any change
/// that alters the sample stream.
pub const GENERATOR_ID: &str = "chacha8-invcdf-v1";

const CHUNK: u64 = 1 << 13;

#[derive(Clone, Copy, Debug)]
pub struct McEstimate {
    pub p_hat: f64,
    pub n: u64,
    pub successes: u64,
    pub lower_cp: f64,
    pub seed: u64,
    pub alpha: f64,
}

impl McEstimate {
    /// Binomial standard error of `p_hat`.
    pub fn std_error(&self) -> f64 {
        (self.p_hat * (1.0 - self.p_hat) / self.n as f64).sqrt()
    }
}

#[inline]
fn unit_open(u: u64) -> f64 {
    // 53 significant bits, shifted into the open interval (0, 1).
    ((u >> 11) as f64 + 0.5) * (1.0 / 9_007_199_254_740_992.0)
}

#[inline]
fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    let u = unit_open(rng.next_u64());
    std_normal_quantile(u).expect("u lies strictly inside (0, 1)")
}

fn check_inputs(region: &RegionSpec, point: &[f64], sigma: f64, n: u64, alpha: f64) -> Result<()> {
    region.validate()?;
    if point.len() != region.dim() {
        return Err(Error::DimensionMismatch { expected: region.dim(), got: point.len() });
    }
    if !sigma.is_finite() || sigma <= 0.0 {
        return Err(Error::Domain(format!("sigma {sigma} must be positive")));
    }
    if n < 100 {
        return Err(Error::Domain(format!("sample count {n} below minimum of 100")));
    }
    if !alpha.is_finite() || alpha <= 0.0 || alpha >= 1.0 {
        return Err(Error::Domain(format!("confidence level alpha {alpha} outside (0, 1)")));
    }
    Ok(())
}

/// Monte Carlo estimate of `f_σ(point)` for `region`, with a one-sided
/// Clopper–Pearson lower confidence bound at level `alpha`.
pub fn mc_smoothed_prob(
    region: &RegionSpec,
    point: &[f64],
    sigma: f64,
    n: u64,
    seed: u64,
    alpha: f64,
) -> Result<McEstimate> {
    check_inputs(region, point, sigma, n, alpha)?;
    let d = region.dim();

    let chunk_starts: Vec<u64> = (0..n).step_by(CHUNK as usize).collect();
    let counts = map_grid(&chunk_starts, |&start| {
        let end = (start + CHUNK).min(n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_word_pos(start as u128 * d as u128 * 2);
        let mut sample = vec![0.0f64; d];
        let mut hits = 0u64;
        for _ in start..end {
            for (j, s) in sample.iter_mut().enumerate() {
                *s = point[j] + sigma * standard_normal(&mut rng);
            }
            if region.contains_unchecked(&sample) {
                hits += 1;
            }
        }
        hits
    });
    let successes: u64 = counts.iter().sum();
    let p_hat = successes as f64 / n as f64;
    let lower_cp = clopper_pearson_lower(successes, n, alpha)?;
    Ok(McEstimate { p_hat, n, successes, lower_cp, seed, alpha })
}

/// Exact one-sided Clopper–Pearson lower bound: the `p` solving
/// `P(X ≥ k | n, p) = alpha`, i.e. `I_p(k, n-k+1) = alpha`; 0 when `k = 0`.
pub fn clopper_pearson_lower(k: u64, n: u64, alpha: f64) -> Result<f64> {
    if n == 0 || k > n {
        return Err(Error::Domain(format!("invalid binomial counts k = {k}, n = {n}")));
    }
    if !alpha.is_finite() || alpha <= 0.0 || alpha >= 1.0 {
        return Err(Error::Domain(format!("alpha {alpha} outside (0, 1)")));
    }
    if k == 0 {
        return Ok(0.0);
    }
    if k == n {
        return Ok(alpha.powf(1.0 / n as f64));
    }
    let a = k as f64;
    let b = (n - k + 1) as f64;
    // I_p(a, b) increases from 0 to 1 in p; bisect on it.
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if reg_inc_beta(a, b, mid)? < alpha {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-14 {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Evaluates two regions of the same dimension on one shared sample stream.
/// Returns `(hits_a, hits_b)`; with common random numbers, `A ⊆ B` forces
/// `hits_a <= hits_b` exactly, sample by sample.
pub fn common_random_containment(
    region_a: &RegionSpec,
    region_b: &RegionSpec,
    point: &[f64],
    sigma: f64,
    n: u64,
    seed: u64,
) -> Result<(u64, u64)> {
    check_inputs(region_a, point, sigma, n, 0.05)?;
    check_inputs(region_b, point, sigma, n, 0.05)?;
    if region_a.dim() != region_b.dim() {
        return Err(Error::DimensionMismatch { expected: region_a.dim(), got: region_b.dim() });
    }
    let d = region_a.dim();
    let chunk_starts: Vec<u64> = (0..n).step_by(CHUNK as usize).collect();
    let counts = map_grid(&chunk_starts, |&start| {
        let end = (start + CHUNK).min(n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_word_pos(start as u128 * d as u128 * 2);
        let mut sample = vec![0.0f64; d];
        let (mut ha, mut hb) = (0u64, 0u64);
        for _ in start..end {
            for (j, s) in sample.iter_mut().enumerate() {
                *s = point[j] + sigma * standard_normal(&mut rng);
            }
            if region_a.contains_unchecked(&sample) {
                ha += 1;
            }
            if region_b.contains_unchecked(&sample) {
                hb += 1;
            }
        }
        (ha, hb)
    });
    let hits_a = counts.iter().map(|c| c.0).sum();
    let hits_b = counts.iter().map(|c| c.1).sum();
    Ok((hits_a, hits_b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smoothprob::{ball_origin_prob, halfspace_prob};

    fn ball(dim: usize, radius: f64) -> RegionSpec {
        RegionSpec::Ball { dim, radius }
    }

    #[test]
    fn deterministic_across_runs() {
        let r = ball(4, 1.0);
        let p = [0.2, 0.0, -0.1, 0.3];
        let a = mc_smoothed_prob(&r, &p, 0.5, 20_000, 7, 0.001).unwrap();
        let b = mc_smoothed_prob(&r, &p, 0.5, 20_000, 7, 0.001).unwrap();
        assert_eq!(a.successes, b.successes);
        assert_eq!(a.p_hat.to_bits(), b.p_hat.to_bits());
        assert_eq!(a.lower_cp.to_bits(), b.lower_cp.to_bits());
    }

    #[test]
    fn prefix_property_of_stream() {
        // Growing n keeps the shared prefix of hits: successes are monotone
        // and the first-20k prefix count is unchanged.
        let r = ball(3, 1.0);
        let p = [0.0; 3];
        let small = mc_smoothed_prob(&r, &p, 0.4, 20_000, 11, 0.001).unwrap();
        let large = mc_smoothed_prob(&r, &p, 0.4, 40_000, 11, 0.001).unwrap();
        assert!(large.successes >= small.successes);
        assert!(large.successes - small.successes <= 20_000);
    }

    #[test]
    fn agrees_with_analytic_ball_origin() {
        let exact = ball_origin_prob(1.0, 5, 0.3).unwrap().get();
        let est = mc_smoothed_prob(&ball(5, 1.0), &[0.0; 5], 0.3, 1_000_000, 42, 0.001).unwrap();
        let se = (exact * (1.0 - exact) / 1e6).sqrt();
        assert!(
            (est.p_hat - exact).abs() < 3.0 * se + 1e-9,
            "MC {} vs exact {exact}",
            est.p_hat
        );
        assert!(est.lower_cp < est.p_hat);
    }

    #[test]
    fn agrees_with_halfspace_closed_form() {
        let region = RegionSpec::HalfSpace { dim: 3, offset: 0.0 };
        let point = [0.0, 0.0, 1.0];
        let exact = halfspace_prob(0.0, 1.0, 1.0).unwrap().get(); // Φ(-1)
        let est = mc_smoothed_prob(&region, &point, 1.0, 400_000, 3, 0.001).unwrap();
        let se = (exact * (1.0 - exact) / 4e5).sqrt();
        assert!((est.p_hat - exact).abs() < 3.5 * se, "MC {} vs Φ(-1) {exact}", est.p_hat);
    }

    #[test]
    fn tiny_sigma_interior_point_is_certain() {
        let est = mc_smoothed_prob(&ball(6, 1.0), &[0.0; 6], 1e-9, 10_000, 5, 0.01).unwrap();
        assert_eq!(est.successes, 10_000);
        assert_eq!(est.p_hat, 1.0);
        assert!((est.lower_cp - 0.01f64.powf(1.0 / 10_000.0)).abs() < 1e-12);
    }

    #[test]
    fn clopper_pearson_against_binomial_tail() {
        // Brute-force check: at the returned p, the upper binomial tail
        // P(X >= 900 | 1000, p) equals alpha.
        let p = clopper_pearson_lower(900, 1000, 0.001).unwrap();
        assert!(p > 0.86 && p < 0.90, "got {p}");
        let (n, kmin) = (1000u64, 900u64);
        let mut tail = 0.0f64;
        let mut lc = 0.0f64; // ln C(1000, k) built incrementally
        for k in 1..=n {
            lc += ((n - k + 1) as f64).ln() - (k as f64).ln();
            if k >= kmin {
                tail += (lc + k as f64 * p.ln() + (n - k) as f64 * (1.0 - p).ln()).exp();
            }
        }
        assert!((tail - 0.001).abs() < 1e-6, "tail {tail}");
        assert_eq!(clopper_pearson_lower(0, 50, 0.05).unwrap(), 0.0);
    }

    #[test]
    fn common_random_numbers_give_exact_dominance() {
        let inner = ball(4, 0.8);
        let outer = ball(4, 1.0);
        let (ha, hb) =
            common_random_containment(&inner, &outer, &[0.1, 0.0, 0.0, 0.2], 0.7, 50_000, 9)
                .unwrap();
        assert!(ha <= hb);
        assert!(hb > 0);
        // And the outer count matches a standalone run on the same seed.
        let solo = mc_smoothed_prob(&outer, &[0.1, 0.0, 0.0, 0.2], 0.7, 50_000, 9, 0.01).unwrap();
        assert_eq!(hb, solo.successes);
    }

    #[test]
    fn two_stage_smoothing_composes() {
        // N(0, σ₁²) then N(·, σ₂²) equals N(0, σ₁²+σ₂²) in distribution:
        // E over first stage of f_{σ₂} should match f_{√(σ₁²+σ₂²)}(0).
        let region = ball(3, 1.0);
        let (s1, s2) = (0.3f64, 0.4f64);
        let combined = ball_origin_prob(1.0, 3, (s1 * s1 + s2 * s2).sqrt()).unwrap().get();
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let outer = 300usize;
        let inner = 2_000u64;
        let mut acc = 0.0;
        for i in 0..outer {
            let center = [
                s1 * standard_normal(&mut rng),
                s1 * standard_normal(&mut rng),
                s1 * standard_normal(&mut rng),
            ];
            acc += mc_smoothed_prob(&region, &center, s2, inner, 1000 + i as u64, 0.01)
                .unwrap()
                .p_hat;
        }
        let est = acc / outer as f64;
        let se = (combined * (1.0 - combined) / (outer as f64 * inner as f64)).sqrt();
        // Outer-stage variance dominates; allow a generous band.
        assert!((est - combined).abs() < 0.02, "two-stage {est} vs direct {combined}, se {se}");
    }

    #[test]
    fn input_validation() {
        let r = ball(3, 1.0);
        assert!(mc_smoothed_prob(&r, &[0.0; 2], 0.5, 1000, 1, 0.01).is_err());
        assert!(mc_smoothed_prob(&r, &[0.0; 3], 0.0, 1000, 1, 0.01).is_err());
        assert!(mc_smoothed_prob(&r, &[0.0; 3], 0.5, 99, 1, 0.01).is_err());
        assert!(mc_smoothed_prob(&r, &[0.0; 3], 0.5, 1000, 1, 1.0).is_err());
    }
}
