//! Monte Carlo checks of the channel simulator.

use std::f64::consts::PI;

use dmnn_core::channel::{build_layout, Channel, Dataset, LayoutConfig, PropagationParams, SmallScaleMode};
use dmnn_core::decorrelation::normal;
use dmnn_core::rng::stream;

fn channel(mode: SmallScaleMode) -> Channel {
    let layout = build_layout(&LayoutConfig::default()).unwrap();
    let params = PropagationParams {
        small_scale_mode: mode,
        ..PropagationParams::default()
    };
    Channel::new(layout, params, &mut stream(99, 0)).unwrap()
}

/// `E|h|` for `h ~ N(mu, sigma^2)` (folded normal).
fn folded_mean(mu: f64, sigma: f64) -> f64 {
    let z = mu / sigma;
    sigma * (2.0 / PI).sqrt() * (-z * z / 2.0).exp() + mu * (1.0 - 2.0 * normal::cdf(-z))
}

#[test]
fn amplitude_mean_within_three_standard_errors() {
    let ch = channel(SmallScaleMode::PerSample);
    let n = 100_000;
    let expected_h = folded_mean(1.0, 0.1f64.sqrt());
    let mut rng = stream(5, 0);
    for (office, sensor) in [(0, 0), (7, 1), (14, 2)] {
        let mut sums = vec![(0.0, 0.0); 3];
        for _ in 0..n {
            let cir = ch.draw_cir(office, sensor, &mut rng).unwrap();
            for (s, tap) in sums.iter_mut().zip(&cir.taps) {
                let a = tap.norm();
                s.0 += a;
                s.1 += a * a;
            }
        }
        for (path, (sum, sq)) in sums.into_iter().enumerate() {
            let mean = sum / n as f64;
            let var = sq / n as f64 - mean * mean;
            let se = (var / n as f64).sqrt();
            let expected = ch.large_scale_amplitude(office, sensor, path) * expected_h;
            assert!(
                (mean - expected).abs() < 3.0 * se,
                "office {office} sensor {sensor} path {path}: {mean} vs {expected} (se {se})"
            );
        }
    }
}

#[test]
fn phases_are_uniform() {
    let ch = channel(SmallScaleMode::PerSample);
    let mut rng = stream(6, 0);
    let mut bins = [0u32; 16];
    let n = 100_000;
    let mut draws = 0;
    while draws < n {
        let cir = ch.draw_cir(3, 1, &mut rng).unwrap();
        for tap in &cir.taps {
            let theta = tap.arg().rem_euclid(2.0 * PI);
            bins[((theta / (2.0 * PI) * 16.0) as usize).min(15)] += 1;
            draws += 1;
        }
    }
    let expected = draws as f64 / 16.0;
    let chi2: f64 = bins.iter().map(|&b| (b as f64 - expected).powi(2) / expected).sum();
    // 99th percentile of chi-square with 15 degrees of freedom.
    assert!(chi2 < 30.578, "chi2 = {chi2}, bins = {bins:?}");
}

fn pearson(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let (ma, mb) = (a.iter().sum::<f64>() / n, b.iter().sum::<f64>() / n);
    let cov: f64 = a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).sum();
    let va: f64 = a.iter().map(|x| (x - ma).powi(2)).sum();
    let vb: f64 = b.iter().map(|y| (y - mb).powi(2)).sum();
    cov / (va * vb).sqrt()
}

#[test]
fn adjacent_offices_have_more_similar_fingerprints() {
    let ch = channel(SmallScaleMode::PerSample);
    let mut rng = stream(7, 0);
    let draws = 2000;
    // Mean tap amplitudes over sensors and paths for every office.
    let fingerprints: Vec<Vec<f64>> = (0..ch.num_offices())
        .map(|k| {
            let mut fp = vec![0.0; ch.num_sensors() * ch.num_paths()];
            for _ in 0..draws {
                for l in 0..ch.num_sensors() {
                    let cir = ch.draw_cir(k, l, &mut rng).unwrap();
                    for (d, tap) in cir.taps.iter().enumerate() {
                        fp[l * ch.num_paths() + d] += tap.norm() / draws as f64;
                    }
                }
            }
            fp
        })
        .collect();
    let mean_corr = |pred: &dyn Fn(usize, usize) -> bool| {
        let mut v = Vec::new();
        for i in 0..fingerprints.len() {
            for j in i + 1..fingerprints.len() {
                if pred(i, j) {
                    v.push(pearson(&fingerprints[i], &fingerprints[j]));
                }
            }
        }
        v.iter().sum::<f64>() / v.len() as f64
    };
    let adjacent = mean_corr(&|i, j| j - i == 1);
    let distant = mean_corr(&|i, j| j - i >= 7);
    assert!(adjacent > distant, "adjacent {adjacent} distant {distant}");
}

#[test]
fn empirical_snr_matches_target() {
    let ch = channel(SmallScaleMode::PerLocation);
    for snr in [0.0, 20.0] {
        let noisy = Dataset::generate(&ch, 100, snr, 11).unwrap();
        let clean = Dataset::generate_clean(&ch, 100, 11).unwrap();
        let signal = clean.mean_component_power();
        let noise: f64 = noisy
            .features()
            .iter()
            .zip(clean.features())
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            / clean.features().len() as f64;
        let measured = 10.0 * (signal / noise).log10();
        assert!((measured - snr).abs() < 0.5, "target {snr} dB, measured {measured} dB");
    }
}

#[test]
fn generation_is_deterministic() {
    let ch = channel(SmallScaleMode::PerSample);
    let a = Dataset::generate(&ch, 20, 10.0, 3).unwrap();
    assert_eq!(a, Dataset::generate(&ch, 20, 10.0, 3).unwrap());
    assert_ne!(a, Dataset::generate(&ch, 20, 10.0, 4).unwrap());
    assert_eq!(
        channel(SmallScaleMode::PerLocation).large_scale_amplitude(4, 2, 1),
        ch.large_scale_amplitude(4, 2, 1)
    );
}

#[test]
fn per_location_amplitudes_are_frozen_and_phases_vary() {
    let ch = channel(SmallScaleMode::PerLocation);
    let mut rng = stream(8, 0);
    let first = ch.draw_cir(2, 1, &mut rng).unwrap();
    let second = ch.draw_cir(2, 1, &mut rng).unwrap();
    for (a, b) in first.taps.iter().zip(&second.taps) {
        assert!((a.norm() - b.norm()).abs() < 1e-12 * a.norm());
        assert_ne!(a.arg(), b.arg());
    }
}
