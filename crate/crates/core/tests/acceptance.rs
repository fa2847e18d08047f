//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any FAIL.

use std::time::Instant;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rangekit::generators::{
    gen_adversarial_median, gen_adversarial_mode, mode_block_half, random_bits, reconstruct_median_bits,
    reconstruct_mode_bits,
};
use rangekit::harness::{
    bench_fixed, bench_online, bench_static, fit_touches, script_alphabet,
    sweep_all, sweep_fixed, sweep_online, sweep_static, touch_constant, BenchReport, Check,
    CorpusSpec, Sweep,
};
use rangekit::mode_dynamic::{random_script, replay, DynamicMode, ReplayOptions};
use rangekit::mode_static::StaticModeIndex;
use rangekit::selection::{FixedRankSelector, RankFunction};
use rangekit::succinct::RankSelectBitVector;

const SEED: u64 = 20240611;

const STATIC_EPS: [f64; 4] = [1.0, 0.5, 0.25, 0.125];
/// `(ε, low budget, trichotomy budget)`, worked out by hand.
const BUDGETS: [(f64, u32, u32); 4] = [(1.0, 2, 4), (0.5, 3, 5), (0.25, 4, 6), (0.125, 5, 7)];

const SPACE_NS: [usize; 5] = [1 << 12, 1 << 13, 1 << 14, 1 << 15, 1 << 16];
const SPACE_EPS: [f64; 3] = [1.0, 0.5, 0.25];
const SPACE_BAND: f64 = 4.0;
const DOUBLING: (f64, f64) = (1.6, 2.5);

const DYN_EPS: [f64; 2] = [1.0, 0.5];
const DYN_SCRIPTS: usize = 50;
const DYN_OPS: usize = 5000;
const TOUCH_SPREAD: f64 = 0.5;
/// Scripts per ε that also run the full checker after every op.
const EVERY_OP_SCRIPTS: usize = 2;

const ALPHAS: [f64; 3] = [0.4, 0.25, 0.1];
const ONLINE_SEEDS: u64 = 10;
const SELECT_NS: [usize; 4] = [1 << 10, 1 << 11, 1 << 12, 1 << 13];
const FIXED_EXP: f64 = 2.3;
const ONLINE_EXP: f64 = 3.3;

const PATTERNS: u64 = 64;
const VECTORS: u64 = 1000;

struct Outcome {
    results: Vec<(usize, bool, String)>,
}

impl Outcome {
    fn report(&mut self, id: usize, name: &str, ok: bool, detail: String, t: Instant) {
        let verdict = if ok { "PASS" } else { "FAIL" };
        let line = format!(
            "criterion {id:>2} {verdict} {name}: {detail} ({:.1}s)",
            t.elapsed().as_secs_f64()
        );
        eprintln!("{line}");
        self.results.push((id, ok, line));
    }
}

fn failures(sw: &Sweep, checks: &[Check]) -> u64 {
    checks.iter().map(|&c| sw.count(c).failed).sum()
}

fn checked(sw: &Sweep, checks: &[Check]) -> u64 {
    checks.iter().map(|&c| sw.count(c).checked).sum()
}

fn show_first(sw: &Sweep) {
    for v in sw.violations.iter().take(3) {
        println!("    {v:?}");
    }
}

fn static_criteria(out: &mut Outcome) {
    let t = Instant::now();
    let items = CorpusSpec::default().build();
    let mut sweeps = Vec::new();
    for eps in STATIC_EPS {
        let sw = sweep_all(&items, |it, sw| sweep_static(it, eps, sw)).expect("static sweep");
        show_first(&sw);
        sweeps.push((eps, sw));
    }
    let total = |cs: &[Check]| -> (u64, u64) {
        sweeps
            .iter()
            .fold((0, 0), |(c, f), (_, sw)| (c + checked(sw, cs), f + failures(sw, cs)))
    };

    let cs = [Check::ModeSound, Check::ModeExact];
    let (c, f) = total(&cs);
    let ok = f == 0 && sweeps.iter().all(|(_, sw)| sw.count(Check::ModeExact).checked > 0);
    out.report(
        1,
        "static soundness and exactness",
        ok,
        format!("{} sequences, {c} checks, {f} violations", items.len()),
        t,
    );

    let (c, f) = total(&[Check::Trichotomy]);
    out.report(2, "level trichotomy", f == 0 && c > 0, format!("{c} verdicts, {f} violations"), t);

    let (c, f) = total(&[Check::Sandwich]);
    out.report(3, "quad sandwich", f == 0 && c > 0, format!("{c} windows, {f} violations"), t);

    let mut ok = true;
    let mut detail = Vec::new();
    for ((eps, sw), (beps, low, tri)) in sweeps.iter().zip(BUDGETS) {
        assert_eq!(*eps, beps);
        ok &= sw.max_low_probes <= low && sw.max_tri_probes <= tri;
        ok &= failures(sw, &[Check::LowProbes, Check::TriProbes]) == 0;
        detail.push(format!(
            "eps {eps}: low {}/{low} tri {}/{tri}",
            sw.max_low_probes, sw.max_tri_probes
        ));
    }
    out.report(5, "probe budgets", ok, detail.join(", "), t);

    let (c, f) = total(&[Check::MonotonePayload]);
    let payload_ok = f == 0 && c > 0;
    let laws = rank_select_laws();
    out.report(
        11,
        "succinct layer",
        payload_ok && laws.is_ok(),
        format!(
            "{c} tables within 2n bits ({f} over); rank/select laws: {}",
            laws.err().unwrap_or_else(|| format!("{VECTORS} vectors ok"))
        ),
        t,
    );
}

fn rank_select_laws() -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for v in 0..VECTORS {
        let len = rng.random_range(0..=3000usize);
        let density = rng.random_range(0.0..=1.0f64);
        let bits: Vec<bool> = (0..len).map(|_| rng.random_bool(density)).collect();
        let bv = RankSelectBitVector::from_bits(bits.iter().copied());
        let mut ones = 0;
        for (i, &bit) in bits.iter().enumerate() {
            if bv.rank1(i) != ones || bv.rank0(i) != i - ones || bv.get(i) != bit {
                return Err(format!("vector {v}: rank mismatch at {i}"));
            }
            if bit {
                ones += 1;
                if bv.select1(ones) != Some(i + 1) {
                    return Err(format!("vector {v}: select1({ones})"));
                }
            } else if bv.select0(i + 1 - ones) != Some(i + 1) {
                return Err(format!("vector {v}: select0({})", i + 1 - ones));
            }
        }
        if bv.rank1(len) != ones || bv.select1(ones + 1).is_some() || bv.select0(len - ones + 1).is_some() {
            return Err(format!("vector {v}: bounds"));
        }
    }
    Ok(())
}

fn criteria_line(rep: &BenchReport) -> String {
    let fits: Vec<String> = rep.fits.iter().map(|(k, v)| format!("{k}={v:.3}")).collect();
    let crit: Vec<String> = rep.criteria.iter().map(|(k, v)| format!("{k}={v}")).collect();
    format!("{} | {}", fits.join(" "), crit.join(" "))
}

fn space_law(out: &mut Outcome) {
    let t = Instant::now();
    let rep = bench_static(&SPACE_NS, &SPACE_EPS, SEED, 0).expect("static bench");
    let lo = rep.rows.iter().map(|r| r.normalized).fold(f64::MAX, f64::min);
    let hi = rep.rows.iter().map(|r| r.normalized).fold(0.0, f64::max);
    let mut doubling_ok = true;
    let mut worst = (f64::MAX, 0f64);
    for w in rep.rows.windows(2) {
        if w[0].param == w[1].param && w[1].n == 2 * w[0].n {
            let r = w[1].total_bits as f64 / w[0].total_bits as f64;
            worst = (worst.0.min(r), worst.1.max(r));
            doubling_ok &= (DOUBLING.0..=DOUBLING.1).contains(&r);
        }
    }
    out.report(
        4,
        "static space law",
        hi <= SPACE_BAND * lo && doubling_ok && rep.ok(),
        format!(
            "bits/(n/eps) in [{lo:.2}, {hi:.2}], doubling ratios in [{:.3}, {:.3}]",
            worst.0, worst.1
        ),
        t,
    );
}

fn dynamic_criteria(out: &mut Outcome) {
    let t = Instant::now();
    let mut clean = 0;
    let mut total = 0;
    let mut constants = Vec::new();
    let mut queries = 0;
    for eps in DYN_EPS {
        for i in 0..DYN_SCRIPTS {
            let seed = SEED.wrapping_add(i as u64);
            let script = random_script(DYN_OPS, script_alphabet(i), seed);
            let mut d = DynamicMode::new(eps, DYN_OPS).expect("dynamic");
            let mut opts = ReplayOptions::default();
            if i < EVERY_OP_SCRIPTS {
                opts.full_check_every = 1;
            }
            let r = replay(&mut d, &script, opts);
            total += 1;
            queries += r.queries;
            if r.ok() {
                clean += 1;
            } else {
                println!("    eps {eps} script {i}: {:?}", r.violations.first());
            }
            constants.push(touch_constant(&r, d.params().eps_prime));
        }
    }
    out.report(
        6,
        "dynamic replay",
        clean == total,
        format!(
            "{clean}/{total} scripts clean ({} with a full check after every op), {queries} queries judged",
            EVERY_OP_SCRIPTS * DYN_EPS.len()
        ),
        t,
    );
    let fit = fit_touches(&constants).expect("scripts ran");
    let stable = fit.min >= (1.0 - TOUCH_SPREAD) * fit.c && fit.max <= (1.0 + TOUCH_SPREAD) * fit.c;
    out.report(
        7,
        "amortized touches",
        stable && fit.stable,
        format!("c = {:.3} (scripts range {:.3} to {:.3})", fit.c, fit.min, fit.max),
        t,
    );
}

fn selection_criteria(out: &mut Outcome) {
    let t = Instant::now();
    let items = CorpusSpec::default().build();
    let mut sweep = Sweep::new();
    for alpha in ALPHAS {
        for f in [RankFunction::Median, RankFunction::Min, RankFunction::Max] {
            let sw = sweep_all(&items, |it, sw| sweep_fixed(it, alpha, f, sw)).expect("fixed sweep");
            show_first(&sw);
            sweep.merge(sw);
        }
    }
    let fixed = (sweep.queries, sweep.violation_count);
    let online_items = CorpusSpec { seeds: ONLINE_SEEDS, ..CorpusSpec::default() }.build();
    let mut online = Sweep::new();
    for alpha in ALPHAS {
        let sw = sweep_all(&online_items, |it, sw| sweep_online(it, alpha, sw)).expect("online sweep");
        show_first(&sw);
        online.merge(sw);
    }
    let strict = sweep.count(Check::SelectStrict).checked + online.count(Check::SelectStrict).checked;
    out.report(
        8,
        "selection soundness",
        sweep.ok() && online.ok() && strict > 0,
        format!(
            "fixed {} queries / {} violations, online {} queries / {} violations, {strict} strict checks",
            fixed.0, fixed.1, online.queries, online.violation_count
        ),
        t,
    );

    let t = Instant::now();
    let mut ok = true;
    let mut lines = Vec::new();
    for f in [RankFunction::Median, RankFunction::Max] {
        let rep = bench_fixed(&SELECT_NS, &ALPHAS, f, SEED).expect("fixed bench");
        ok &= rep.ok() && rep.fits["inverse_param_exponent_max"] <= FIXED_EXP;
        lines.push(format!("fixed {f}: {}", criteria_line(&rep)));
    }
    let rep = bench_online(&SELECT_NS, &ALPHAS, SEED).expect("online bench");
    ok &= rep.ok() && rep.fits["inverse_param_exponent_max"] <= ONLINE_EXP;
    lines.push(format!("online: {}", criteria_line(&rep)));
    out.report(9, "selection space law", ok, lines.join("; "), t);
}

fn reconstruction(out: &mut Outcome) {
    let t = Instant::now();
    let mut bad = Vec::new();
    for seed in 0..PATTERNS {
        for eps in [1.0, 0.25] {
            let n = 1200;
            let bits = random_bits(n / (2 * mode_block_half(eps)), SEED ^ seed);
            let seq = gen_adversarial_mode(n, eps, &bits).expect("mode family");
            let idx = StaticModeIndex::build(&seq, eps).expect("index");
            if reconstruct_mode_bits(&idx, n, eps).ok().as_deref() != Some(&bits[..]) {
                bad.push(format!("mode seed {seed} eps {eps}"));
            }
        }
        let n = 1000;
        let bits = random_bits(n / 2, SEED ^ seed);
        let seq = gen_adversarial_median(n, &bits).expect("median family");
        let sel = FixedRankSelector::build(&seq, 0.45, RankFunction::Median).expect("selector");
        if reconstruct_median_bits(&sel, n).ok().as_deref() != Some(&bits[..]) {
            bad.push(format!("median seed {seed}"));
        }
    }
    out.report(
        10,
        "lower-bound reconstruction",
        bad.is_empty(),
        format!("{PATTERNS} patterns per family, failures: {bad:?}"),
        t,
    );
}

fn main() {
    let mut out = Outcome { results: Vec::new() };
    static_criteria(&mut out);
    space_law(&mut out);
    dynamic_criteria(&mut out);
    selection_criteria(&mut out);
    reconstruction(&mut out);
    out.results.sort_by_key(|r| r.0);
    for (_, _, line) in &out.results {
        println!("{line}");
    }
    let failed = out.results.iter().filter(|r| !r.1).count();
    println!("acceptance: {} criteria, {failed} failed", out.results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
