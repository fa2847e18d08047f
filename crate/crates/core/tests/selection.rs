use rangekit::generators::{gen_adversarial_median, gen_random, random_bits, reconstruct_median_bits};
use rangekit::oracle::rank_interval;
use rangekit::selection::{FixedRankSelector, OnlineRankSelector, RankFunction};

fn within(seq: &[u64], a: usize, b: usize, k: usize, p: usize, alpha: f64) -> bool {
    let (lo, hi) = rank_interval(seq, a, b, seq[p - 1]);
    let r = alpha * (b - a + 1) as f64;
    (a..=b).contains(&p) && hi as f64 >= k as f64 - r - 2.0 && lo as f64 <= k as f64 + r + 2.0
}

#[test]
fn reloaded_selectors_agree() {
    let seq = gen_random(700, 50, 3).unwrap();
    for f in [RankFunction::Median, RankFunction::Const(5), RankFunction::Max] {
        let sel = FixedRankSelector::build(&seq, 0.2, f).unwrap();
        let back = FixedRankSelector::from_bytes(&sel.to_bytes()).unwrap();
        assert_eq!(back.rank_function(), f);
        for (a, b) in [(1, 700), (20, 80), (333, 334), (600, 700)] {
            let p = back.query(a, b).unwrap();
            assert_eq!(p, sel.query(a, b).unwrap());
            assert!(within(&seq, a, b, f.eval(b - a + 1), p, 0.2));
        }
    }
    let sel = OnlineRankSelector::build(&seq, 0.3).unwrap();
    let back = OnlineRankSelector::from_bytes(&sel.to_bytes()).unwrap();
    for (a, b) in [(1, 700), (50, 450)] {
        for k in [1, 7, (b - a) / 2, b - a + 1] {
            let p = back.query(a, b, k).unwrap();
            assert_eq!(p, sel.query(a, b, k).unwrap());
            assert!(within(&seq, a, b, k, p, 0.3));
        }
    }
    assert!(OnlineRankSelector::from_bytes(&sel.to_bytes()[..10]).is_err());
}

#[test]
fn median_bits_are_recoverable() {
    for seed in 0..8 {
        let bits = random_bits(100, seed);
        let seq = gen_adversarial_median(201, &bits).unwrap();
        let sel = FixedRankSelector::build(&seq, 0.45, RankFunction::Median).unwrap();
        let back = FixedRankSelector::from_bytes(&sel.to_bytes()).unwrap();
        assert_eq!(reconstruct_median_bits(&back, 201).unwrap(), bits);
    }
}

#[test]
fn rank_function_parsing() {
    for (s, f) in [("median", RankFunction::Median), ("min", RankFunction::Min), ("max", RankFunction::Max), ("const:7", RankFunction::Const(7))] {
        assert_eq!(s.parse::<RankFunction>().unwrap(), f);
        assert_eq!(f.to_string().parse::<RankFunction>().unwrap(), f);
    }
    assert!("zero".parse::<RankFunction>().is_err());
    assert!("0".parse::<RankFunction>().is_err());
}
