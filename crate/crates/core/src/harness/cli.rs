//! The `rangekit` command line.

use std::fs;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use super::bench::{
    bench_dynamic, bench_fixed, bench_online, bench_static, fit_touches, script_alphabet, touch_constant,
    BenchReport, TouchFit, BENCH_SIGMA, SCHEMA,
};
use super::corpus::{CorpusItem, CorpusSpec, Family};
use super::seqfile::{format_sequence, parse_queries, parse_sequence};
use super::verify::{sweep_all, sweep_fixed, sweep_online, sweep_static, CheckCount, Sweep, Violation};
use crate::generators::{
    gen_adversarial_median, gen_adversarial_mode, gen_random, gen_zipf, mode_block_half, random_bits,
};
use crate::mode_dynamic::{format_script, parse_script, random_script, replay, DynamicMode, ReplayOptions};
use crate::mode_static::StaticModeIndex;
use crate::selection::{FixedRankSelector, OnlineRankSelector, RankFunction};
use crate::succinct::SpaceBits;

/// Exit code for a contract violation.
pub const EXIT_VIOLATION: i32 = 1;
/// Exit code for bad input or usage.
pub const EXIT_ERROR: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "rangekit", version, about = "Approximate range mode and range selection encodings")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Write a generated sequence (or update script).
    Gen(GenArgs),
    /// Build an index from a sequence file and serialize it.
    Build(BuildArgs),
    /// Answer `a b [k]` lines against a serialized index.
    Query(QueryArgs),
    /// Sweep every window of a corpus against the oracle.
    Verify(VerifyArgs),
    /// Measure space and probes over a parameter grid.
    Bench(BenchArgs),
    /// Print the space breakdown of one index.
    Space(SpaceArgs),
    /// Drive the dynamic structure from an update script.
    Replay(ReplayArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    Random,
    Zipf,
    AdversarialMode,
    AdversarialMedian,
    /// Random update script for `replay`.
    Script,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Structure {
    StaticMode,
    FixedSelect,
    OnlineSelect,
    DynamicMode,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    /// Length (or number of ops for scripts).
    #[arg(long, default_value_t = 64)]
    n: usize,
    #[arg(long, default_value_t = 4)]
    sigma: usize,
    #[arg(long, default_value_t = 1.0)]
    skew: f64,
    #[arg(long, default_value_t = 1.0)]
    eps: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Seed of the encoded bits of the adversarial families.
    #[arg(long)]
    bits_seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BuildArgs {
    #[arg(long, value_enum)]
    structure: Structure,
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = 0.5)]
    eps: f64,
    #[arg(long, default_value_t = 0.25)]
    alpha: f64,
    /// `median`, `min`, `max` or `const:<k>`.
    #[arg(long, default_value = "median")]
    rank_fn: RankFunction,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct QueryArgs {
    #[arg(long)]
    index: PathBuf,
    /// Query file; standard input when absent.
    #[arg(long)]
    queries: Option<PathBuf>,
    /// Sequence file, to print the color at each answer.
    #[arg(long)]
    seq: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    structure: Structure,
    #[arg(long, value_delimiter = ',', default_value = "1")]
    eps: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "0.25")]
    alpha: Vec<f64>,
    #[arg(long, default_value = "median")]
    rank_fn: RankFunction,
    /// Longest corpus sequence.
    #[arg(long, default_value_t = 64)]
    nmax: usize,
    /// Seeds per length and family.
    #[arg(long, default_value_t = 200)]
    seeds: u64,
    /// Verify this sequence file instead of the corpus.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Random scripts per ε (dynamic mode).
    #[arg(long, default_value_t = 4)]
    scripts: usize,
    #[arg(long, default_value_t = 2000)]
    ops: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[arg(long, value_enum)]
    structure: Structure,
    #[arg(long, value_delimiter = ',')]
    n: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "1,0.5,0.25")]
    eps: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "0.4,0.25,0.1")]
    alpha: Vec<f64>,
    #[arg(long, default_value = "median")]
    rank_fn: RankFunction,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Random queries per static index.
    #[arg(long, default_value_t = 1000)]
    queries: usize,
    #[arg(long, default_value_t = 4)]
    scripts: usize,
    #[arg(long, default_value_t = 2000)]
    ops: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SpaceArgs {
    #[arg(long, value_enum)]
    structure: Structure,
    #[arg(long, default_value_t = 0.5)]
    eps: f64,
    #[arg(long, default_value_t = 0.25)]
    alpha: f64,
    #[arg(long, default_value = "median")]
    rank_fn: RankFunction,
    #[arg(long, default_value_t = 4096)]
    n: usize,
    #[arg(long, default_value_t = BENCH_SIGMA)]
    sigma: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Measure this sequence file instead of a random one.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ReplayArgs {
    #[arg(long)]
    script: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    eps: f64,
    /// Skip per-op structural checks.
    #[arg(long)]
    no_check: bool,
    #[arg(long, default_value_t = 100)]
    check_every: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Serialize)]
struct VerifyReport {
    schema: u32,
    structure: Structure,
    params: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rank_fn: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    corpus: Option<CorpusSpec>,
    sequences: u64,
    windows: u64,
    queries: u64,
    checks: std::collections::BTreeMap<&'static str, CheckCount>,
    violation_count: u64,
    violations: Vec<Violation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_low_probes: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_tri_probes: Option<u32>,
}

#[derive(Serialize)]
struct DynVerifyReport {
    schema: u32,
    structure: Structure,
    params: Vec<f64>,
    scripts: usize,
    ops: usize,
    queries: usize,
    worst_ratio: f64,
    violation_count: usize,
    violations: Vec<String>,
    touch_fit: Option<TouchFit>,
}

#[derive(Serialize)]
struct SpaceOutput {
    schema: u32,
    structure: Structure,
    n: usize,
    param: f64,
    total_bits: usize,
    bits_per_element: f64,
    components: std::collections::BTreeMap<String, SpaceBits>,
}

#[derive(Serialize)]
struct ReplayOutput {
    schema: u32,
    epsilon: f64,
    #[serde(flatten)]
    report: crate::mode_dynamic::ReplayReport,
}

fn read_text(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn read_seq(path: &Path) -> anyhow::Result<Vec<u64>> {
    let seq = parse_sequence(&read_text(path)?).with_context(|| format!("in {}", path.display()))?;
    if seq.is_empty() {
        bail!("{}: empty sequence", path.display());
    }
    Ok(seq)
}

fn emit<T: Serialize>(value: &T, out_path: Option<&Path>, out: &mut dyn Write) -> anyhow::Result<()> {
    let json = serde_json::to_string_pretty(value)?;
    match out_path {
        Some(p) => fs::write(p, json + "\n").with_context(|| format!("cannot write {}", p.display()))?,
        None => writeln!(out, "{json}")?,
    }
    Ok(())
}

fn write_text(text: &str, out_path: Option<&Path>, out: &mut dyn Write) -> anyhow::Result<()> {
    match out_path {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display()))?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn configure_threads() {
    if let Some(t) = std::env::var("RANGEKIT_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // A second configuration in the same process is ignored.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build_global();
    }
}

/// Runs the CLI on `argv` (program name first) and returns the exit code.
/// Diagnostics go to `err`.
pub fn run<I, T>(argv: I, input: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { EXIT_ERROR } else { 0 };
        }
    };
    configure_threads();
    match dispatch(cli.cmd, input, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            EXIT_ERROR
        }
    }
}

fn dispatch(cmd: Cmd, input: &mut dyn BufRead, out: &mut dyn Write) -> anyhow::Result<i32> {
    match cmd {
        Cmd::Gen(a) => gen(a, out),
        Cmd::Build(a) => build(a),
        Cmd::Query(a) => query(a, input, out),
        Cmd::Verify(a) => verify(a, out),
        Cmd::Bench(a) => bench(a, out),
        Cmd::Space(a) => space(a, out),
        Cmd::Replay(a) => replay_cmd(a, out),
    }
}

fn gen(a: GenArgs, out: &mut dyn Write) -> anyhow::Result<i32> {
    let bits_seed = a.bits_seed.unwrap_or(a.seed);
    let text = match a.kind {
        Kind::Random => format_sequence(&gen_random(a.n, a.sigma, a.seed)?),
        Kind::Zipf => format_sequence(&gen_zipf(a.n, a.sigma, a.skew, a.seed)?),
        Kind::AdversarialMode => {
            let k = mode_block_half(a.eps);
            let bits = random_bits(a.n / (2 * k), bits_seed);
            format_sequence(&gen_adversarial_mode(a.n, a.eps, &bits)?)
        }
        Kind::AdversarialMedian => {
            let bits = random_bits(a.n / 2, bits_seed);
            format_sequence(&gen_adversarial_median(a.n, &bits)?)
        }
        Kind::Script => format_script(&random_script(a.n, a.sigma as u64, a.seed)),
    };
    write_text(&text, a.out.as_deref(), out)?;
    Ok(0)
}

fn build(a: BuildArgs) -> anyhow::Result<i32> {
    let seq = read_seq(&a.input)?;
    let bytes = match a.structure {
        Structure::StaticMode => StaticModeIndex::build(&seq, a.eps)?.to_bytes(),
        Structure::FixedSelect => FixedRankSelector::build(&seq, a.alpha, a.rank_fn)?.to_bytes(),
        Structure::OnlineSelect => OnlineRankSelector::build(&seq, a.alpha)?.to_bytes(),
        Structure::DynamicMode => bail!("the dynamic structure is not serialized; use `replay`"),
    };
    fs::write(&a.out, bytes).with_context(|| format!("cannot write {}", a.out.display()))?;
    Ok(0)
}

enum Loaded {
    Static(StaticModeIndex),
    Fixed(FixedRankSelector),
    Online(OnlineRankSelector),
}

fn load_index(path: &Path) -> anyhow::Result<Loaded> {
    let bytes = fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
    let ctx = || format!("in {}", path.display());
    Ok(match bytes.get(..4) {
        Some(b"ARMQ") => Loaded::Static(StaticModeIndex::from_bytes(&bytes).with_context(ctx)?),
        Some(b"AFRS") => Loaded::Fixed(FixedRankSelector::from_bytes(&bytes).with_context(ctx)?),
        Some(b"AORS") => Loaded::Online(OnlineRankSelector::from_bytes(&bytes).with_context(ctx)?),
        _ => bail!("{}: not a rangekit index", path.display()),
    })
}

fn query(a: QueryArgs, input: &mut dyn BufRead, out: &mut dyn Write) -> anyhow::Result<i32> {
    let index = load_index(&a.index)?;
    let text = match &a.queries {
        Some(p) => read_text(p)?,
        None => {
            let mut s = String::new();
            input.read_to_string(&mut s)?;
            s
        }
    };
    let seq = a.seq.as_deref().map(read_seq).transpose()?;
    for q in parse_queries(&text)? {
        let at = |e: crate::Error| anyhow!("line {}: {e}", q.line);
        let p = match (&index, q.k) {
            (Loaded::Static(ix), None) => ix.query(q.a, q.b).map_err(at)?,
            (Loaded::Fixed(sel), None) => sel.query(q.a, q.b).map_err(at)?,
            (Loaded::Online(sel), Some(k)) => sel.query(q.a, q.b, k).map_err(at)?,
            (Loaded::Online(_), None) => bail!("line {}: the online selector needs a rank `a b k`", q.line),
            (_, Some(_)) => bail!("line {}: this index takes `a b` only", q.line),
        };
        let k = q.k.map(|k| format!(" {k}")).unwrap_or_default();
        match &seq {
            Some(s) => {
                let c = s.get(p - 1).ok_or_else(|| anyhow!("sequence file shorter than the index"))?;
                writeln!(out, "{} {}{k} {p} {c}", q.a, q.b)?
            }
            None => writeln!(out, "{} {}{k} {p}", q.a, q.b)?,
        }
    }
    Ok(0)
}

fn verify(a: VerifyArgs, out: &mut dyn Write) -> anyhow::Result<i32> {
    if a.structure == Structure::DynamicMode {
        return verify_dynamic(a, out);
    }
    let (items, corpus) = match &a.input {
        Some(p) => {
            let seq = read_seq(p)?;
            (vec![CorpusItem { family: Family::File, seed: 0, seq }], None)
        }
        None => {
            let spec = CorpusSpec {
                nmax: a.nmax,
                seeds: a.seeds,
            };
            (spec.build(), Some(spec))
        }
    };
    let params = match a.structure {
        Structure::StaticMode => a.eps.clone(),
        _ => a.alpha.clone(),
    };
    let mut total = Sweep::new();
    for &p in &params {
        let sw = match a.structure {
            Structure::StaticMode => sweep_all(&items, |it, sw| sweep_static(it, p, sw))?,
            Structure::FixedSelect => sweep_all(&items, |it, sw| sweep_fixed(it, p, a.rank_fn, sw))?,
            Structure::OnlineSelect => sweep_all(&items, |it, sw| sweep_online(it, p, sw))?,
            Structure::DynamicMode => unreachable!(),
        };
        total.merge(sw);
    }
    let is_static = a.structure == Structure::StaticMode;
    let report = VerifyReport {
        schema: SCHEMA,
        structure: a.structure,
        params,
        rank_fn: (a.structure == Structure::FixedSelect).then(|| a.rank_fn.to_string()),
        corpus,
        sequences: total.sequences,
        windows: total.windows,
        queries: total.queries,
        checks: total.checks(),
        violation_count: total.violation_count,
        violations: total.violations.clone(),
        max_low_probes: is_static.then_some(total.max_low_probes),
        max_tri_probes: is_static.then_some(total.max_tri_probes),
    };
    emit(&report, a.out.as_deref(), out)?;
    Ok(if total.ok() { 0 } else { EXIT_VIOLATION })
}

fn verify_dynamic(a: VerifyArgs, out: &mut dyn Write) -> anyhow::Result<i32> {
    let mut report = DynVerifyReport {
        schema: SCHEMA,
        structure: a.structure,
        params: a.eps.clone(),
        scripts: a.scripts,
        ops: a.ops,
        queries: 0,
        worst_ratio: 1.0,
        violation_count: 0,
        violations: Vec::new(),
        touch_fit: None,
    };
    let mut constants = Vec::new();
    for &eps in &a.eps {
        for i in 0..a.scripts {
            let seed = a.seed.wrapping_add(i as u64);
            let script = random_script(a.ops, script_alphabet(i), seed);
            let mut d = DynamicMode::new(eps, a.ops)?;
            let r = replay(&mut d, &script, ReplayOptions::default());
            constants.push(touch_constant(&r, d.params().eps_prime));
            report.queries += r.queries;
            report.worst_ratio = report.worst_ratio.max(r.worst_ratio);
            report.violation_count += r.violation_count;
            for v in r.violations {
                if report.violations.len() < Sweep::KEEP {
                    report.violations.push(format!("eps {eps} seed {seed}: {v}"));
                }
            }
        }
    }
    report.touch_fit = fit_touches(&constants);
    emit(&report, a.out.as_deref(), out)?;
    Ok(if report.violation_count == 0 { 0 } else { EXIT_VIOLATION })
}

fn default_ns(s: Structure) -> Vec<usize> {
    match s {
        Structure::StaticMode => (12..=16).map(|e| 1 << e).collect(),
        Structure::FixedSelect => (10..=13).map(|e| 1 << e).collect(),
        Structure::OnlineSelect => (10..=13).map(|e| 1 << e).collect(),
        Structure::DynamicMode => Vec::new(),
    }
}

fn bench(a: BenchArgs, out: &mut dyn Write) -> anyhow::Result<i32> {
    let ns = if a.n.is_empty() { default_ns(a.structure) } else { a.n.clone() };
    let rep: BenchReport = match a.structure {
        Structure::StaticMode => bench_static(&ns, &a.eps, a.seed, a.queries)?,
        Structure::FixedSelect => bench_fixed(&ns, &a.alpha, a.rank_fn, a.seed)?,
        Structure::OnlineSelect => bench_online(&ns, &a.alpha, a.seed)?,
        Structure::DynamicMode => bench_dynamic(&a.eps, a.scripts, a.ops, a.seed)?,
    };
    emit(&rep, a.out.as_deref(), out)?;
    Ok(if rep.ok() { 0 } else { EXIT_VIOLATION })
}

fn space(a: SpaceArgs, out: &mut dyn Write) -> anyhow::Result<i32> {
    let seq = match &a.input {
        Some(p) => read_seq(p)?,
        None => gen_random(a.n, a.sigma, a.seed)?,
    };
    let n = seq.len();
    let (param, components): (f64, Vec<(&str, SpaceBits)>) = match a.structure {
        Structure::StaticMode => {
            let s = StaticModeIndex::build(&seq, a.eps)?.space();
            (a.eps, vec![("low", s.low), ("levels", s.levels), ("quad", s.quad)])
        }
        Structure::FixedSelect => (
            a.alpha,
            vec![("samples", FixedRankSelector::build(&seq, a.alpha, a.rank_fn)?.space())],
        ),
        Structure::OnlineSelect => (a.alpha, vec![("samples", OnlineRankSelector::build(&seq, a.alpha)?.space())]),
        Structure::DynamicMode => bail!("space accounting covers the static structures"),
    };
    let total: usize = components.iter().map(|(_, s)| s.total()).sum();
    let report = SpaceOutput {
        schema: SCHEMA,
        structure: a.structure,
        n,
        param,
        total_bits: total,
        bits_per_element: total as f64 / n as f64,
        components: components.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
    };
    emit(&report, a.out.as_deref(), out)?;
    Ok(0)
}

fn replay_cmd(a: ReplayArgs, out: &mut dyn Write) -> anyhow::Result<i32> {
    let ops = parse_script(&read_text(&a.script)?).with_context(|| format!("in {}", a.script.display()))?;
    let mut d = DynamicMode::new(a.eps, ops.len())?;
    let opts = ReplayOptions {
        local_checks: !a.no_check,
        full_check_every: if a.no_check { 0 } else { a.check_every },
        compare_dmax: !a.no_check,
    };
    let report = replay(&mut d, &ops, opts);
    let ok = report.ok();
    emit(
        &ReplayOutput {
            schema: SCHEMA,
            epsilon: a.eps,
            report,
        },
        a.out.as_deref(),
        out,
    )?;
    Ok(if ok { 0 } else { EXIT_VIOLATION })
}
