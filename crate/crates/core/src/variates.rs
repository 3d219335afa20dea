//! Poisson and multinomial variates.

use rand::Rng;
use rand_distr::{Binomial, Distribution};

/// Rates below this use sequential inversion; above, PTRS.
const INVERSION_LIMIT: f64 = 10.0;

/// One draw from Poisson(`rate`). `rate` must be finite and non-negative.
///
/// Small rates use inversion by sequential search of the CDF. Larger rates
/// use Hörmann's transformed rejection with squeeze (PTRS), whose expected
/// cost is bounded independently of the rate.
pub fn poisson<R: Rng + ?Sized>(rate: f64, rng: &mut R) -> u64 {
    debug_assert!(rate.is_finite() && rate >= 0.0);
    if rate <= 0.0 {
        0
    } else if rate < INVERSION_LIMIT {
        poisson_inversion(rate, rng)
    } else {
        poisson_ptrs(rate, rng)
    }
}

fn poisson_inversion<R: Rng + ?Sized>(rate: f64, rng: &mut R) -> u64 {
    let u: f64 = rng.random();
    let mut k = 0u64;
    let mut p = (-rate).exp();
    let mut cdf = p;
    while u > cdf {
        k += 1;
        p *= rate / k as f64;
        let next = cdf + p;
        if next == cdf {
            // u sits in the rounding gap just below 1.
            break;
        }
        cdf = next;
    }
    k
}

fn poisson_ptrs<R: Rng + ?Sized>(rate: f64, rng: &mut R) -> u64 {
    let sqrt_rate = rate.sqrt();
    let log_rate = rate.ln();
    let b = 0.931 + 2.53 * sqrt_rate;
    let a = -0.059 + 0.02483 * b;
    let inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    let v_r = 0.9277 - 3.6224 / (b - 2.0);
    loop {
        let u = rng.random::<f64>() - 0.5;
        let v: f64 = rng.random();
        let us = 0.5 - u.abs();
        let k = ((2.0 * a / us + b) * u + rate + 0.43).floor();
        if us >= 0.07 && v <= v_r {
            return k as u64;
        }
        if k < 0.0 || (us < 0.013 && v > us) {
            continue;
        }
        let lhs = v.ln() + inv_alpha.ln() - (a / (us * us) + b).ln();
        let rhs = -rate + k * log_rate - libm::lgamma(k + 1.0);
        if lhs <= rhs {
            return k as u64;
        }
    }
}

/// One draw from Multinomial(`total`, `weights / Σ weights`) by sequential
/// binomial conditioning over the cells in order.
///
/// Zero-weight cells always receive zero. If every weight is zero, `total`
/// must be zero.
pub fn multinomial<R: Rng + ?Sized>(total: u64, weights: &[f64], rng: &mut R) -> Vec<u64> {
    let mut counts = vec![0u64; weights.len()];
    let mut suffix = vec![0.0; weights.len() + 1];
    for i in (0..weights.len()).rev() {
        suffix[i] = suffix[i + 1] + weights[i];
    }
    debug_assert!(total == 0 || suffix[0] > 0.0, "no mass for {total} trials");

    let mut remaining = total;
    for (i, &w) in weights.iter().enumerate() {
        if remaining == 0 {
            break;
        }
        if w <= 0.0 {
            continue;
        }
        let p = w / suffix[i];
        let x = if p >= 1.0 || suffix[i + 1] <= 0.0 {
            remaining
        } else {
            Binomial::new(remaining, p)
                .expect("probability lies in (0, 1)")
                .sample(rng)
        };
        counts[i] = x;
        remaining -= x;
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded_rng;

    fn mean_var(samples: &[u64]) -> (f64, f64) {
        let n = samples.len() as f64;
        let mean = samples.iter().sum::<u64>() as f64 / n;
        let var = samples.iter().map(|&x| (x as f64 - mean).powi(2)).sum::<f64>() / (n - 1.0);
        (mean, var)
    }

    #[test]
    fn zero_and_tiny_rates() {
        let mut rng = seeded_rng(1);
        assert!((0..1000).all(|_| poisson(0.0, &mut rng) == 0));
        let hits: u64 = (0..100_000).map(|_| poisson(1e-9, &mut rng)).sum();
        assert!(hits <= 1);
    }

    #[test]
    fn moments_across_both_methods() {
        let mut rng = seeded_rng(11);
        let reps = 100_000;
        for rate in [0.5, 4.0, 9.99, 10.0, 37.5, 1e4] {
            let samples: Vec<u64> = (0..reps).map(|_| poisson(rate, &mut rng)).collect();
            let (mean, var) = mean_var(&samples);
            let se_mean = (rate / reps as f64).sqrt();
            // var of the sample variance is about (2λ² + λ) / reps.
            let se_var = ((2.0 * rate * rate + rate) / reps as f64).sqrt();
            assert!((mean - rate).abs() < 4.0 * se_mean, "rate {rate}: mean {mean}");
            assert!((var - rate).abs() < 4.0 * se_var, "rate {rate}: var {var}");
        }
    }

    #[test]
    fn rate_ten_matches_poisson_moments() {
        let mut rng = seeded_rng(10);
        let reps = 100_000;
        let samples: Vec<u64> = (0..reps).map(|_| poisson(10.0, &mut rng)).collect();
        let (mean, var) = mean_var(&samples);
        assert!((mean - 10.0).abs() < 3.0 * (10.0 / reps as f64).sqrt(), "mean {mean}");
        assert!((var - 10.0).abs() < 0.3, "var {var}");
    }

    #[test]
    fn ptrs_pmf_near_rate_twelve() {
        // Compare the empirical pmf against the exact one on the bulk.
        let rate: f64 = 12.0;
        let reps = 400_000;
        let mut rng = seeded_rng(5);
        let mut counts = vec![0u64; 40];
        for _ in 0..reps {
            let k = poisson(rate, &mut rng) as usize;
            counts[k.min(39)] += 1;
        }
        for (k, &count) in counts.iter().enumerate().take(22).skip(4) {
            let pmf = (-rate + k as f64 * rate.ln() - libm::lgamma(k as f64 + 1.0)).exp();
            let freq = count as f64 / reps as f64;
            let se = (pmf * (1.0 - pmf) / reps as f64).sqrt();
            assert!((freq - pmf).abs() < 5.0 * se, "k={k}: {freq} vs {pmf}");
        }
    }

    #[test]
    fn multinomial_degenerate_and_empty() {
        let mut rng = seeded_rng(3);
        assert_eq!(multinomial(17, &[0.0, 0.0, 2.0, 0.0], &mut rng), vec![0, 0, 17, 0]);
        assert_eq!(multinomial(0, &[1.0, 1.0], &mut rng), vec![0, 0]);
        assert_eq!(multinomial(0, &[0.0, 0.0], &mut rng), vec![0, 0]);
    }

    #[test]
    fn multinomial_uniform_cells() {
        let mut rng = seeded_rng(8);
        let m = 1_000_000u64;
        let counts = multinomial(m, &[1.0; 4], &mut rng);
        assert_eq!(counts.iter().sum::<u64>(), m);
        let sd = (m as f64 * 3.0 / 16.0).sqrt();
        for c in counts {
            assert!((c as f64 - m as f64 / 4.0).abs() < 3.0 * sd, "{c}");
        }
    }
}
