use rangekit::mode_dynamic::{
    parse_script, random_script, replay, DynamicMode, LevelSpec, Op, ReplayOptions,
};
use rangekit::oracle;

fn violates(ivs: &[(usize, usize)], f: usize, spec: &LevelSpec) -> bool {
    if ivs.is_empty() {
        return f >= spec.min_occurrences();
    }
    let bad_size = ivs.iter().any(|&(s, e)| e < s || e - s < spec.size_lo || e - s > spec.size_hi);
    let bad_gap = ivs.windows(2).any(|w| {
        let g = w[1].0 - w[0].0;
        g < spec.gap_lo || g > spec.gap_hi
    });
    bad_size || bad_gap || ivs[0].0 - 1 > spec.gap_lo || f - ivs[ivs.len() - 1].1 > spec.gap_lo
}

/// Interval ranks after deleting occurrence `rho`, before any repair.
fn after_delete(ivs: &[(usize, usize)], rho: usize) -> Vec<(usize, usize)> {
    ivs.iter()
        .filter(|&&(s, e)| !(s == rho && e == rho))
        .map(|&(s, e)| (if s > rho { s - 1 } else { s }, if e >= rho { e - 1 } else { e }))
        .collect()
}

#[test]
fn rebuild_fires_exactly_when_an_invariant_fails() {
    let eps = 1.0;
    let mut d = DynamicMode::new(eps, 64).unwrap();
    let j = d.params().dense_cutoff;
    let size_hi = d.params().level(j).size_hi;
    let f0 = 2 * size_hi;
    for i in 0..f0 {
        d.insert(i + 1, 7).unwrap();
    }
    d.check_invariants().unwrap();
    assert!(!d.intervals(7, j).is_empty());

    let mut first_violation = None;
    let mut first_rebuild = None;
    let mut f = f0;
    for step in 0..f0 - 1 {
        let rho = f.div_ceil(2);
        // Predicted breakage on every sparse level that stays active.
        let predicted = d
            .params()
            .levels()
            .iter()
            .filter(|l| !l.dense && f - 1 >= l.min_occurrences())
            .any(|l| violates(&after_delete(&d.intervals(7, l.j), rho), f - 1, l));
        let before = d.stats().rebuilds;
        d.delete(rho).unwrap();
        f -= 1;
        d.check_color(7).unwrap();
        let fired = d.stats().rebuilds > before;
        assert_eq!(fired, predicted, "step {step}, f {f}");
        if predicted && first_violation.is_none() {
            first_violation = Some(step);
        }
        if fired && first_rebuild.is_none() {
            first_rebuild = Some(step);
        }
        let level = d.intervals(7, j);
        if level.iter().any(|&(s, e)| e - s + 1 <= d.params().level(j).size_lo) {
            panic!("interval with pot <= size_lo survived at step {step}");
        }
    }
    assert!(first_violation.is_some());
    assert_eq!(first_violation, first_rebuild);
    d.check_invariants().unwrap();
}

#[test]
fn rebuilds_stay_local() {
    let eps = 0.5;
    let mut d = DynamicMode::new(eps, 0).unwrap();
    for i in 0..3000 {
        d.insert(i / 3 + 1, 1).unwrap();
    }
    for i in 0..2000 {
        d.delete((i * 37) % d.len() + 1).unwrap();
    }
    d.check_invariants().unwrap();
    let bound = d
        .params()
        .levels()
        .iter()
        .filter(|l| !l.dense)
        .map(|l| 2 * l.size_hi / l.gap_lo + 4)
        .max()
        .unwrap();
    let st = d.stats();
    assert!(st.rebuilds > 0);
    assert!(st.max_rebuilt <= bound, "{} intervals in one rebuild, bound {bound}", st.max_rebuilt);
}

#[test]
fn appends_keep_the_right_slack() {
    let mut d = DynamicMode::new(1.0, 400).unwrap();
    let j = d.params().dense_cutoff + 2;
    let spec = *d.params().level(j);
    let mut fired = 0;
    for i in 0..400 {
        let before = d.stats().rebuilds;
        d.insert(i + 1, 2).unwrap();
        fired += usize::from(d.stats().rebuilds > before);
        let ivs = d.intervals(2, j);
        if let Some(&(_, e)) = ivs.last() {
            assert!(i + 1 - e <= spec.gap_lo);
        }
    }
    assert!(fired > 0);
    d.check_invariants().unwrap();
}

#[test]
fn spec_examples() {
    let mut d = DynamicMode::new(1.0, 3).unwrap();
    for i in 1..=3 {
        d.insert(i, 1).unwrap();
    }
    assert_eq!(d.query(1, 3).unwrap().color, 1);
    for l in d.params().levels().iter().filter(|l| l.size_lo <= 3) {
        assert_eq!(d.intervals(1, l.j).len(), 4 - l.size_lo);
    }

    let mut d = DynamicMode::from_sequence(&[3, 8, 8, 3], 1.0).unwrap();
    assert!(d.dominance_points_of(3) > 0);
    d.delete(4).unwrap();
    assert_eq!(d.dominance_points_of(3), 0);
    assert_eq!(d.query(1, 3).unwrap().color, 8);

    let d = DynamicMode::from_sequence(&(1..=30).collect::<Vec<_>>(), 1.0).unwrap();
    for (a, b) in [(1, 30), (4, 9), (17, 17)] {
        let ans = d.peek(a, b).unwrap();
        assert_eq!((ans.position, ans.level), (a, None));
    }
}

#[test]
fn five_thousand_op_script_matches_the_oracle() {
    let ops = random_script(5000, 3, 2024);
    let mut d = DynamicMode::new(1.0, 0).unwrap();
    let mut mirror = Vec::new();
    for &op in &ops {
        match op {
            Op::Insert { pos, color } => {
                d.insert(pos, color).unwrap();
                mirror.insert(pos - 1, color);
            }
            Op::Delete { pos } => {
                assert_eq!(d.delete(pos).unwrap(), mirror.remove(pos - 1));
            }
            Op::Query { a, b } => {
                let ans = d.query(a, b).unwrap();
                let big = oracle::exact_mode(&mirror, a, b).unwrap().1;
                let freq = oracle::freq_of(&mirror, a, b, ans.color).unwrap();
                assert!(freq as f64 * 2.0 >= big as f64, "Q {a} {b}: {freq} vs {big}");
                assert_eq!(mirror[ans.position - 1], ans.color);
            }
        }
    }
    assert_eq!(d.to_vec(), mirror);
    d.check_invariants().unwrap();
}

#[test]
fn replay_of_a_parsed_script() {
    let text = "# three ones and a two\nI 1 1\nI 2 1\nI 1 2\nI 4 1\nQ 1 4\nD 1\nQ 1 3\n";
    let ops = parse_script(text).unwrap();
    let mut d = DynamicMode::new(0.5, 0).unwrap();
    let rep = replay(&mut d, &ops, ReplayOptions::default());
    assert!(rep.ok(), "{:?}", rep.violations);
    assert_eq!((rep.queries, rep.exact, rep.final_len), (2, 2, 3));
}

#[test]
fn seeds_do_not_change_answers() {
    let ops = random_script(1500, 4, 5);
    let run = |seed| {
        let mut d = DynamicMode::with_seed(1.0, 0, seed).unwrap();
        let mut answers = Vec::new();
        for &op in &ops {
            match op {
                Op::Insert { pos, color } => d.insert(pos, color).unwrap(),
                Op::Delete { pos } => {
                    d.delete(pos).unwrap();
                }
                Op::Query { a, b } => answers.push(d.query(a, b).unwrap().level),
            }
        }
        answers
    };
    assert_eq!(run(1), run(99));
}
