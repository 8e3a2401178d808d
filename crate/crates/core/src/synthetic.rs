//! The three-point synthetic dataset, its Gaussian-smoothed class densities,
//! the Bayes classifier trained on the smoothed problem, accuracy under both
//! prediction rules, and mutual-information curves.
//!
//! Class 1 puts mass 1/2 at 0; class 2 puts mass 1/2-ε at -a and ε at ka.

use crate::curve::{Cell, CurveTable};
use crate::error::{Error, Result};
use crate::quad::adaptive_simpson_panels;
use crate::smoothprob::interval1d_prob;
use crate::specfn::Probability;
use crate::sweep::map_grid;

#[derive(Clone, Copy, Debug)]
pub struct SyntheticDataset {
    a: f64,
    k: f64,
    eps: f64,
}

impl SyntheticDataset {
    pub fn new(a: f64, k: f64, eps: f64) -> Result<Self> {
        if !a.is_finite() || a <= 0.0 {
            return Err(Error::Domain(format!("location scale a = {a} must be positive")));
        }
        if !k.is_finite() || k <= 0.0 {
            return Err(Error::Domain(format!("location multiplier k = {k} must be positive")));
        }
        if !eps.is_finite() || eps <= 0.0 || eps >= 0.5 {
            return Err(Error::Domain(format!("mass eps = {eps} outside (0, 1/2)")));
        }
        Ok(Self { a, k, eps })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// `(location, class, mass)` triples; masses sum to 1 by construction.
    pub fn support(&self) -> [(f64, u8, f64); 3] {
        [
            (0.0, 1, 0.5),
            (-self.a, 2, 0.5 - self.eps),
            (self.k * self.a, 2, self.eps),
        ]
    }

    /// Smoothed joint density `ψ_σ(x, class)`: the class's point masses
    /// blurred by `N(0, σ²)`. Each class density integrates to its class
    /// mass of 1/2.
    pub fn smoothed_density(&self, sigma: f64, x: f64, class: u8) -> Result<f64> {
        check_sigma(sigma)?;
        let phi = |mean: f64| {
            let z = (x - mean) / sigma;
            (-0.5 * z * z).exp() / (sigma * (2.0 * std::f64::consts::PI).sqrt())
        };
        match class {
            1 => Ok(0.5 * phi(0.0)),
            2 => Ok((0.5 - self.eps) * phi(-self.a) + self.eps * phi(self.k * self.a)),
            _ => Err(Error::Domain(format!("class {class} must be 1 or 2"))),
        }
    }
}

fn check_sigma(sigma: f64) -> Result<()> {
    if !sigma.is_finite() || sigma <= 0.0 {
        return Err(Error::Domain(format!("sigma {sigma} must be positive")));
    }
    Ok(())
}

/// Bayes classifier for the smoothed training problem: predicts class 1 on
/// a finite union of intervals (ties go to class 1).
#[derive(Clone, Debug)]
pub struct LearnedClassifier1d {
    pub class1_intervals: Vec<(f64, f64)>,
    pub sigma_train: f64,
}

impl LearnedClassifier1d {
    pub fn predicts_class1(&self, x: f64) -> bool {
        self.class1_intervals.iter().any(|&(lo, hi)| lo <= x && x <= hi)
    }
}

/// Trains the Bayes-optimal classifier on the σ-smoothed dataset: the
/// class-1 region is `{x : ψ_σ(x,1) >= ψ_σ(x,2)}`. Sign changes of the
/// density difference are bracketed on a 10⁴-cell grid over
/// `[-a - 20σ, ka + 20σ]` and refined by bisection to 1e-9. Both mixtures
/// tail off with class 2 on top on each side, so the region is bounded and
/// the grid span always covers it.
pub fn train_classifier(ds: &SyntheticDataset, sigma: f64) -> Result<LearnedClassifier1d> {
    check_sigma(sigma)?;
    let lo = -ds.a - 20.0 * sigma;
    let hi = ds.k * ds.a + 20.0 * sigma;
    let diff = |x: f64| {
        ds.smoothed_density(sigma, x, 1).expect("sigma validated")
            - ds.smoothed_density(sigma, x, 2).expect("sigma validated")
    };

    const CELLS: usize = 10_000;
    let step = (hi - lo) / CELLS as f64;
    let mut boundaries = Vec::new();
    let mut prev_x = lo;
    let mut prev_in = diff(lo) >= 0.0;
    let start_in = prev_in;
    for i in 1..=CELLS {
        let x = lo + i as f64 * step;
        let now_in = diff(x) >= 0.0;
        if now_in != prev_in {
            // Bisect the membership flip to 1e-9.
            let (mut xl, mut xr) = (prev_x, x);
            while xr - xl > 1e-9 {
                let mid = 0.5 * (xl + xr);
                if (diff(mid) >= 0.0) == prev_in {
                    xl = mid;
                } else {
                    xr = mid;
                }
            }
            boundaries.push(0.5 * (xl + xr));
            prev_in = now_in;
        }
        prev_x = x;
    }

    let mut intervals = Vec::new();
    let mut open = if start_in { Some(lo) } else { None };
    for b in boundaries {
        match open.take() {
            Some(start) => intervals.push((start, b)),
            None => open = Some(b),
        }
    }
    if let Some(start) = open {
        intervals.push((start, hi));
    }
    Ok(LearnedClassifier1d { class1_intervals: intervals, sigma_train: sigma })
}

/// Accuracy of the classifier on the point masses under the original
/// (noise-free) prediction rule.
pub fn accuracy_original_rule(ds: &SyntheticDataset, clf: &LearnedClassifier1d) -> Probability {
    accuracy_with(ds, |x| clf.predicts_class1(x))
}

/// Accuracy under the Gaussian-smoothing prediction rule: class 1 iff the
/// smoothed probability of the class-1 region at `x` reaches 1/2.
pub fn accuracy_smoothing_rule(
    ds: &SyntheticDataset,
    clf: &LearnedClassifier1d,
    sigma_infer: f64,
) -> Result<Probability> {
    check_sigma(sigma_infer)?;
    let mut correct = 0.0;
    for (x, class, mass) in ds.support() {
        let p1 = if clf.class1_intervals.is_empty() {
            0.0
        } else {
            interval1d_prob(&clf.class1_intervals, sigma_infer, x)?.get()
        };
        let predicted: u8 = if p1 >= 0.5 { 1 } else { 2 };
        if predicted == class {
            correct += mass;
        }
    }
    Probability::new_clamped(correct, 1e-12)
}

fn accuracy_with<F: Fn(f64) -> bool>(ds: &SyntheticDataset, class1: F) -> Probability {
    let mut correct = 0.0;
    for (x, class, mass) in ds.support() {
        let predicted: u8 = if class1(x) { 1 } else { 2 };
        if predicted == class {
            correct += mass;
        }
    }
    Probability::new_clamped(correct, 1e-12).expect("support masses sum to 1")
}

/// Mutual information `I(X; Y)` of the σ-smoothed dataset, in nats.
/// At σ = 0 the label is a deterministic function of the support point and
/// the class masses are (1/2, 1/2), so I = ln 2 exactly. For σ > 0,
/// `I = Σ_y ∫ ψ(x,y) ln(ψ(x,y) / (ψ(x) ρ(y))) dx` by adaptive quadrature.
pub fn mutual_information(ds: &SyntheticDataset, sigma: f64) -> Result<f64> {
    if !sigma.is_finite() || sigma < 0.0 {
        return Err(Error::Domain(format!("sigma {sigma} must be nonnegative")));
    }
    if sigma == 0.0 {
        return Ok(std::f64::consts::LN_2);
    }
    let lo = -ds.a - 20.0 * sigma;
    let hi = ds.k * ds.a + 20.0 * sigma;
    let ds = *ds;
    let integrand = move |x: f64| {
        let p1 = ds.smoothed_density(sigma, x, 1).expect("sigma validated");
        let p2 = ds.smoothed_density(sigma, x, 2).expect("sigma validated");
        let p = p1 + p2;
        if p <= 0.0 {
            return 0.0;
        }
        // ρ(y) = 1/2 for both classes.
        let mut s = 0.0;
        if p1 > 0.0 {
            s += p1 * (2.0 * p1 / p).ln();
        }
        if p2 > 0.0 {
            s += p2 * (2.0 * p2 / p).ln();
        }
        s
    };
    let raw = adaptive_simpson_panels(&integrand, lo, hi, 32, 1e-8, 40_000)?;
    // The integrand is pointwise a KL contribution, nonnegative up to
    // quadrature noise.
    Ok(raw.max(0.0))
}

/// Mutual-information curve over a σ grid. Columns: `sigma, mi_nats`.
pub fn mi_curve(ds: &SyntheticDataset, sigma_grid: &[f64]) -> Result<CurveTable> {
    let results = map_grid(sigma_grid, |&sigma| mutual_information(ds, sigma));
    let mut table = CurveTable::new(vec!["sigma", "mi_nats"]);
    for (i, res) in results.into_iter().enumerate() {
        table.push_row(vec![Cell::Num(sigma_grid[i]), Cell::Num(res?)]);
    }
    Ok(table)
}

/// Smallest σ for which the original-rule accuracy cap of Theorem 7 applies:
/// `a·√(k(k+2) / (2·ln(2ε(k+1)²)))`, valid when `k > √(1/(2ε)) - 1`.
pub fn theorem7_sigma_bound(ds: &SyntheticDataset) -> Result<f64> {
    let (a, k, eps) = (ds.a, ds.k, ds.eps);
    if k <= (1.0 / (2.0 * eps)).sqrt() - 1.0 {
        return Err(Error::Domain(format!(
            "theorem 7 needs k > sqrt(1/(2 eps)) - 1 = {}, got k = {k}",
            (1.0 / (2.0 * eps)).sqrt() - 1.0
        )));
    }
    let denom = 2.0 * (2.0 * eps * (k + 1.0) * (k + 1.0)).ln();
    Ok(a * (k * (k + 2.0) / denom).sqrt())
}

/// Smallest σ for which the smoothing-rule accuracy cap of Theorem 8 applies:
/// `a·√(k(k+1) / (2·ln(2ε(k+1)) - 2k/(k+2)))`, valid when `k > e²/ε - 1`.
pub fn theorem8_sigma_bound(ds: &SyntheticDataset) -> Result<f64> {
    let (a, k, eps) = (ds.a, ds.k, ds.eps);
    let kmin = std::f64::consts::E.powi(2) / eps - 1.0;
    if k <= kmin {
        return Err(Error::Domain(format!(
            "theorem 8 needs k > e^2/eps - 1 = {kmin}, got k = {k}"
        )));
    }
    let denom = 2.0 * (2.0 * eps * (k + 1.0)).ln() - 2.0 * k / (k + 2.0);
    Ok(a * (k * (k + 1.0) / denom).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ds(a: f64, k: f64, eps: f64) -> SyntheticDataset {
        SyntheticDataset::new(a, k, eps).unwrap()
    }

    #[test]
    fn density_values_and_mass() {
        let d = ds(1.0, 2.0, 0.1);
        let sigma = 0.7;
        let norm = 1.0 / (sigma * (2.0 * std::f64::consts::PI).sqrt());
        assert!((d.smoothed_density(sigma, 0.0, 1).unwrap() - 0.5 * norm).abs() < 1e-15);
        let at_minus_a = 0.5 * (-0.5 / (sigma * sigma)).exp() * norm;
        assert!((d.smoothed_density(sigma, -1.0, 1).unwrap() - at_minus_a).abs() < 1e-15);

        for class in [1u8, 2] {
            let mass = adaptive_simpson_panels(
                &|x| d.smoothed_density(sigma, x, class).unwrap(),
                -2.0 - 20.0 * sigma,
                2.0 + 20.0 * sigma,
                16,
                1e-10,
                20_000,
            )
            .unwrap();
            assert!((mass - 0.5).abs() < 1e-9, "class {class} mass {mass}");
        }
    }

    #[test]
    fn small_sigma_training_recovers_labels() {
        let d = ds(1.0, 2.0, 0.1);
        let clf = train_classifier(&d, 0.01).unwrap();
        assert!(clf.predicts_class1(0.0));
        assert!(!clf.predicts_class1(-1.0));
        assert!(!clf.predicts_class1(2.0));
        assert_eq!(accuracy_original_rule(&d, &clf).get(), 1.0);
    }

    #[test]
    fn theorem7_regime_misclassifies_minus_a() {
        // (a=1, k=2, eps=0.1, sigma=3): above the Theorem 7 bound (~2.61).
        let d = ds(1.0, 2.0, 0.1);
        assert!((theorem7_sigma_bound(&d).unwrap() - 2.6087).abs() < 1e-3);
        let clf = train_classifier(&d, 3.0).unwrap();
        assert!(clf.predicts_class1(-1.0), "-a must fall in the class-1 region");
        // At sigma=3 the class-1 region swallows ka too, so only the mass-1/2
        // point at 0 is classified correctly.
        assert!(clf.predicts_class1(2.0));
        let acc = accuracy_original_rule(&d, &clf).get();
        assert!((acc - 0.5).abs() < 1e-12);
        assert!(acc <= 0.5 + 0.1 + 1e-9); // the theorem's cap
    }

    #[test]
    fn theorem7_family_sweep() {
        for &eps in &[0.05f64, 0.1, 0.2] {
            let k = (1.0 / (2.0 * eps)).sqrt().ceil();
            let d = ds(1.0, k, eps);
            let sigma = 1.05 * theorem7_sigma_bound(&d).unwrap();
            let clf = train_classifier(&d, sigma).unwrap();
            let acc = accuracy_original_rule(&d, &clf).get();
            assert!(acc <= 0.5 + eps + 1e-9, "eps {eps}: accuracy {acc}");
        }
    }

    #[test]
    fn theorem8_regime_and_family_sweep() {
        let d = ds(1.0, 80.0, 0.1);
        let bound = theorem8_sigma_bound(&d).unwrap();
        assert!((bound - 42.3).abs() < 0.2, "bound {bound}");
        let clf = train_classifier(&d, 45.0).unwrap();
        // Class-1 region reaches past ka/2 on the right in this regime.
        assert!(clf.class1_intervals.iter().any(|&(_, hi)| hi > 40.0));
        let acc = accuracy_smoothing_rule(&d, &clf, 45.0).unwrap().get();
        assert!(acc <= 0.6 + 1e-9, "accuracy {acc}");

        for &eps in &[0.1, 0.2] {
            let k = (std::f64::consts::E.powi(2) / eps).ceil();
            let d = ds(1.0, k, eps);
            let sigma = 1.05 * theorem8_sigma_bound(&d).unwrap();
            let clf = train_classifier(&d, sigma).unwrap();
            let acc = accuracy_smoothing_rule(&d, &clf, sigma).unwrap().get();
            assert!(acc <= 0.5 + eps + 1e-9, "eps {eps}: accuracy {acc}");
        }
    }

    #[test]
    fn smoothing_rule_degenerate_cases() {
        let d = ds(1.0, 2.0, 0.1);
        // Whole-line classifier: everything predicted class 1.
        let whole = LearnedClassifier1d {
            class1_intervals: vec![(-1e6, 1e6)],
            sigma_train: 1.0,
        };
        assert!((accuracy_smoothing_rule(&d, &whole, 1.0).unwrap().get() - 0.5).abs() < 1e-12);
        // Empty region: both class-2 points correct.
        let empty = LearnedClassifier1d { class1_intervals: vec![], sigma_train: 1.0 };
        assert!((accuracy_smoothing_rule(&d, &empty, 1.0).unwrap().get() - 0.5).abs() < 1e-12);
        assert!((accuracy_original_rule(&d, &empty).get() - 0.5).abs() < 1e-12);
        // Tiny inference noise recovers the original rule.
        let clf = train_classifier(&d, 0.01).unwrap();
        let orig = accuracy_original_rule(&d, &clf).get();
        let tiny = accuracy_smoothing_rule(&d, &clf, 1e-6).unwrap().get();
        assert_eq!(orig, tiny);
    }

    #[test]
    fn mutual_information_curve() {
        let d = ds(1.0, 2.0, 0.1);
        assert!((mutual_information(&d, 0.0).unwrap() - std::f64::consts::LN_2).abs() < 1e-12);
        let grid = [0.25, 0.5, 1.0, 2.0, 4.0, 8.0];
        let t = mi_curve(&d, &grid).unwrap();
        let ln2 = std::f64::consts::LN_2;
        for i in 0..t.len() {
            let mi = t.num(i, 1).unwrap();
            assert!(mi < ln2 && mi >= 0.0);
            if i > 0 {
                assert!(mi < t.num(i - 1, 1).unwrap(), "MI must strictly decrease");
            }
        }
        assert!(mutual_information(&d, 100.0).unwrap() < 0.01);
    }

    #[test]
    fn marginal_label_entropy_preserved() {
        // ψ(y) = ρ(y) = 1/2 for both classes at every σ: checked by the mass
        // quadrature in density_values_and_mass; here check a second σ.
        let d = ds(1.0, 3.0, 0.2);
        for class in [1u8, 2] {
            let mass = adaptive_simpson_panels(
                &|x| d.smoothed_density(2.0, x, class).unwrap(),
                -1.0 - 40.0,
                3.0 + 40.0,
                16,
                1e-10,
                20_000,
            )
            .unwrap();
            assert!((mass - 0.5).abs() < 1e-8);
        }
    }

    #[test]
    fn parameter_validation() {
        assert!(SyntheticDataset::new(0.0, 2.0, 0.1).is_err());
        assert!(SyntheticDataset::new(1.0, -1.0, 0.1).is_err());
        assert!(SyntheticDataset::new(1.0, 2.0, 0.5).is_err());
        assert!(theorem7_sigma_bound(&ds(1.0, 0.5, 0.1)).is_err());
        assert!(theorem8_sigma_bound(&ds(1.0, 2.0, 0.1)).is_err());
    }
}
