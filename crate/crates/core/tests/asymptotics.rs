use colperm::asymptotics::{ks_distance, mc_class_sample, normal_cdf, theoretical_moments};
use colperm::conjugacy::RPartition;
use colperm::stats::Statistic;

#[test]
fn des_mean_on_a_long_cycle() {
    let lambda = RPartition::single_cycle(50, 2, 0).unwrap();
    let n = 200_000u64;
    let s = mc_class_sample(Statistic::Des, &lambda, n, 1).unwrap();
    let t = theoretical_moments(Statistic::Des, 50, 2).unwrap();
    let sigma = t.sigma_sq_f64().sqrt();
    assert!((s.mean - t.mu_f64()).abs() < 4.0 * sigma / (n as f64).sqrt());
}

#[test]
fn fmaj_ks_on_a_long_cycle() {
    let lambda = RPartition::single_cycle(60, 3, 0).unwrap();
    let s = mc_class_sample(Statistic::Fmaj, &lambda, 200_000, 2).unwrap();
    assert!(s.ks_distance < 0.05);
    assert!(s.ks_distance_lattice.unwrap() < 0.05);
}

#[test]
fn standardized_moments_on_qualifying_classes() {
    let n = 100_000u64;
    let tol_mean = 4.0 / (n as f64).sqrt();
    let tol_var = 10.0 / (n as f64).sqrt();
    for (text, r) in [("0:[12,9]; 1:[5]", 2), ("0:[20]", 2), ("1:[7,6]; 2:[8]", 3)] {
        let lambda = RPartition::parse(text, r).unwrap();
        for stat in [Statistic::Des, Statistic::Maj, Statistic::Fmaj] {
            let s = mc_class_sample(stat, &lambda, n, 33).unwrap();
            let (m, v) = (s.standardized_mean.unwrap(), s.standardized_variance.unwrap());
            assert!(m.abs() < tol_mean, "{} {} mean {}", stat, lambda, m);
            assert!((v - 1.0).abs() < tol_var, "{} {} variance {}", stat, lambda, v);
        }
    }
}

#[test]
fn ks_basics() {
    assert!(ks_distance(&[1.0]) >= 0.5);
    let grid: Vec<f64> = (1..1000).map(|i| i as f64 / 1000.0).map(inverse_phi).collect();
    assert!(ks_distance(&grid) < 0.002);
}

fn inverse_phi(p: f64) -> f64 {
    let (mut lo, mut hi) = (-10.0, 10.0);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if normal_cdf(mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn summary_json_round_trip() {
    let lambda = RPartition::single_cycle(8, 2, 1).unwrap();
    let s = mc_class_sample(Statistic::Maj, &lambda, 500, 4).unwrap();
    let json = serde_json::to_string(&s).unwrap();
    let back: colperm::asymptotics::SampleSummary = serde_json::from_str(&json).unwrap();
    assert_eq!(back.histogram, s.histogram);
    assert_eq!(back.theoretical, s.theoretical);
}
