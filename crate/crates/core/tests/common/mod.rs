//! Chi-square helpers shared by the statistical integration tests.
#![allow(dead_code)]

use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Upper-tail probability of a chi-square statistic.
pub fn chi_square_sf(stat: f64, df: usize) -> f64 {
    if df == 0 {
        return 1.0;
    }
    ChiSquared::new(df as f64).expect("positive df").sf(stat)
}

/// Goodness of fit of `observed` against `probs`. Categories are merged in
/// order until each pooled expected count reaches 5.
pub fn gof_p_value(observed: &[u64], probs: &[f64]) -> f64 {
    let total: u64 = observed.iter().sum();
    let mut pooled: Vec<(f64, f64)> = Vec::new();
    let (mut obs, mut exp) = (0.0, 0.0);
    for (&o, &p) in observed.iter().zip(probs) {
        obs += o as f64;
        exp += p * total as f64;
        if exp >= 5.0 {
            pooled.push((obs, exp));
            obs = 0.0;
            exp = 0.0;
        }
    }
    if exp > 0.0 || obs > 0.0 {
        match pooled.last_mut() {
            Some(last) => {
                last.0 += obs;
                last.1 += exp;
            }
            None => pooled.push((obs, exp)),
        }
    }
    let stat: f64 = pooled.iter().map(|(o, e)| (o - e).powi(2) / e).sum();
    chi_square_sf(stat, pooled.len().saturating_sub(1))
}

/// Two-sample chi-square test of homogeneity on category counts. Categories
/// empty in both samples are dropped.
pub fn two_sample_p_value(a: &[u64], b: &[u64]) -> f64 {
    let na: u64 = a.iter().sum();
    let nb: u64 = b.iter().sum();
    let n = (na + nb) as f64;
    let mut stat = 0.0;
    let mut categories = 0usize;
    for (&x, &y) in a.iter().zip(b) {
        let col = (x + y) as f64;
        if col == 0.0 {
            continue;
        }
        categories += 1;
        let ea = col * na as f64 / n;
        let eb = col * nb as f64 / n;
        stat += (x as f64 - ea).powi(2) / ea + (y as f64 - eb).powi(2) / eb;
    }
    chi_square_sf(stat, categories.saturating_sub(1))
}

/// Histogram over `{0, 1, …, top − 1, ≥ top}`.
pub fn binned(values: impl IntoIterator<Item = u64>, top: usize) -> Vec<u64> {
    let mut bins = vec![0; top + 1];
    for v in values {
        bins[(v as usize).min(top)] += 1;
    }
    bins
}

/// Sample mean and standard error of the mean.
pub fn mean_and_se(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// All multinomial count vectors of `total` items over `cells` categories,
/// in lexicographic order.
pub fn compositions(total: u64, cells: usize) -> Vec<Vec<u64>> {
    if cells == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, cells - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

pub fn multinomial_pmf(counts: &[u64], probs: &[f64]) -> f64 {
    let ln_fact = |k: u64| (1..=k).map(|i| (i as f64).ln()).sum::<f64>();
    let total: u64 = counts.iter().sum();
    let mut log_p = ln_fact(total);
    for (&c, &p) in counts.iter().zip(probs) {
        log_p -= ln_fact(c);
        if c > 0 {
            log_p += c as f64 * p.ln();
        }
    }
    log_p.exp()
}

#[test]
fn helpers_behave() {
    assert!((chi_square_sf(3.841_458_820_694_124, 1) - 0.05).abs() < 1e-9);
    assert_eq!(compositions(5, 4).len(), 56);
    let probs = [0.1, 0.2, 0.3, 0.4];
    let total: f64 = compositions(5, 4).iter().map(|c| multinomial_pmf(c, &probs)).sum();
    assert!((total - 1.0).abs() < 1e-12);
    assert!(two_sample_p_value(&[50, 50], &[50, 50]) > 0.99);
    assert_eq!(binned([0, 1, 5, 2, 3], 3), vec![1, 1, 1, 2]);
}
