//! Command-line harness: file formats, the verification corpus, oracle
//! sweeps, benchmarks and JSON reports.

mod bench;
pub mod cli;
mod corpus;
mod seqfile;
mod verify;

pub use bench::{
    bench_dynamic, bench_fixed, bench_online, bench_static, fit_exponent, fit_touches, script_alphabet,
    touch_constant, BenchReport, BenchRow, ProbeSummary, TouchFit, BENCH_SIGMA, SCHEMA,
};
pub use corpus::{CorpusItem, CorpusSpec, Family};
pub use seqfile::{format_sequence, parse_queries, parse_sequence, QueryLine};
pub use verify::{sweep_all, sweep_fixed, sweep_online, sweep_static, Check, CheckCount, Sweep, Violation};
