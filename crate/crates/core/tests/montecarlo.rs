use golden_core::dynamics::MapKind;
use golden_core::measures::{freq_s_at_one, FreqAffine};
use golden_core::montecarlo::{simulate, SimConfig, StartPoint};
use golden_core::verify::random_parameters;
use golden_core::words::{enumerate_matching_words, MatchingRecord};

const N: u64 = 10_000_000;

#[test]
fn greedy_expansion_frequency() {
    let r = simulate(&SimConfig::new(MapKind::B, 1.0, N, 3)).unwrap();
    assert!((r.freq(0) - freq_s_at_one().to_f64()).abs() < 3e-3, "{}", r.freq(0));
}

#[test]
fn jump_map_plateau() {
    let rec = MatchingRecord::new(&"1001".parse().unwrap()).unwrap();
    let r = simulate(&SimConfig::new(MapKind::T, rec.midpoint().to_f64(), N, 4)).unwrap();
    assert!((r.freq(0) - 0.75).abs() < 3e-3, "{}", r.freq(0));
    let s: f64 = r.freq_by_digit.values().sum();
    assert!((s - 1.0).abs() < 1e-12);
}

#[test]
fn maps_agree_through_jump_relation() {
    let atlas = enumerate_matching_words(10).unwrap();
    for (i, (alpha, r)) in random_parameters(&atlas, 10, 11).into_iter().enumerate() {
        let n = 2_000_000;
        let s = simulate(&SimConfig::new(MapKind::S, alpha, n, 100 + i as u64)).unwrap().freq(0);
        let t = simulate(&SimConfig::new(MapKind::T, alpha, n, 200 + i as u64)).unwrap().freq(0);
        // 3σ for the binomial estimates, propagated through 2 − 1/x
        let sigma = (s * (1.0 - s) / n as f64).sqrt() / (s * s) + (t * (1.0 - t) / n as f64).sqrt();
        assert!((t - (2.0 - 1.0 / s)).abs() <= 3.0 * sigma, "alpha {alpha}: {t} vs {}", 2.0 - 1.0 / s);
        let exact = 2.0 - 1.0 / FreqAffine::from_record(r).eval_f64(alpha);
        assert!((t - exact).abs() < 3e-3);
    }
}

#[test]
fn start_point_independence() {
    let base = SimConfig { chains: 1, ..SimConfig::new(MapKind::S, 1.3, N, 0) };
    let a = simulate(&SimConfig { x0: StartPoint::Fixed(0.123), ..base.clone() }).unwrap();
    let b = simulate(&SimConfig { x0: StartPoint::Fixed(-0.777), ..base }).unwrap();
    assert!((a.freq(0) - b.freq(0)).abs() <= 1e-3);
}

#[test]
fn thread_count_does_not_change_results() {
    let cfg = SimConfig::new(MapKind::T, 1.25, 400_000, 9);
    let wide = simulate(&cfg).unwrap();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let narrow = pool.install(|| simulate(&cfg).unwrap());
    assert!(wide.same_outcome(&narrow));
}
