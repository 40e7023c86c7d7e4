//! Benchmark harness: parameter suites, online/offline timing, memory
//! accounting, speedup and score, and report serialization.
//!
//! Speedup of a candidate `l` against the CPU reference `c`:
//!
//! ```text
//! S_l = (t_ntt^c + t_intt^c) / (t_ntt^l + t_intt^l)
//! ```
//!
//! Score against a baseline with speedup `S_b` and memory `M_b`:
//!
//! ```text
//! s = S_l / S_b + M_b / M_l
//! ```
//!
//! The fast engine is the speedup reference and `matrix_lut` the score
//! baseline. Both are always measured at every parameter point, whether or
//! not they were requested as report rows.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::{self, make_engine, EngineKind, NttEngine};
use crate::error::NttError;
use crate::modarith::NttParams;
use crate::poly::{nwc_schoolbook, random_polynomial};

pub const DEFAULT_ITERS: usize = 11;
pub const SPEEDUP_REFERENCE: EngineKind = EngineKind::Fast;
pub const SCORE_BASELINE: EngineKind = EngineKind::MatrixLut;

/// 2^23 - 2^13 + 1
pub const Q_DILITHIUM: u64 = 8_380_417;
/// 2^30 - 2^18 + 1
pub const Q_HE: u64 = 1_073_479_681;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error(transparent)]
    Params(#[from] NttError),
    #[error("{name} must be positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("need at least 3 timed iterations, got {0}")]
    TooFewIters(usize),
    #[error("nothing to run: empty suite or engine list")]
    EmptyRun,
    #[error("oracle mismatch: engine {engine} disagrees with schoolbook at q = {q}, n = {n}, seed = {seed}")]
    OracleMismatch {
        engine: EngineKind,
        q: u64,
        n: u64,
        seed: u64,
    },
    #[error("unsupported report format `{0}` (expected table, csv or json)")]
    UnsupportedFormat(String),
    #[error("unknown suite `{0}` (expected pqc, he or all)")]
    UnknownSuite(String),
    #[error("malformed report: {0}")]
    Parse(String),
}

pub type BenchResult<T> = std::result::Result<T, BenchError>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamSuite {
    pub name: String,
    pub entries: Vec<(u64, u64)>,
}

impl ParamSuite {
    /// Post-quantum parameter grid.
    pub fn pqc() -> Self {
        Self {
            name: "pqc".into(),
            entries: vec![
                (7681, 64),
                (7681, 128),
                (7681, 256),
                (12289, 512),
                (12289, 1024),
                (12289, 2048),
                (Q_DILITHIUM, 256),
                (Q_DILITHIUM, 512),
                (Q_DILITHIUM, 1024),
            ],
        }
    }

    /// Large-modulus homomorphic-encryption grid.
    pub fn he() -> Self {
        Self {
            name: "he".into(),
            entries: vec![(Q_DILITHIUM, 2048), (Q_HE, 1024), (Q_HE, 2048)],
        }
    }

    pub fn all() -> Self {
        let mut entries = Self::pqc().entries;
        entries.extend(Self::he().entries);
        Self {
            name: "all".into(),
            entries,
        }
    }
}

impl FromStr for ParamSuite {
    type Err = BenchError;

    fn from_str(s: &str) -> BenchResult<Self> {
        match s {
            "pqc" => Ok(Self::pqc()),
            "he" => Ok(Self::he()),
            "all" => Ok(Self::all()),
            other => Err(BenchError::UnknownSuite(other.to_string())),
        }
    }
}

/// Source of monotonic timestamps, swappable for deterministic tests.
pub trait Clock {
    fn now(&mut self) -> Duration;
}

#[derive(Debug, Clone)]
pub struct SystemClock {
    origin: Instant,
}

impl Default for SystemClock {
    fn default() -> Self {
        Self {
            origin: Instant::now(),
        }
    }
}

impl Clock for SystemClock {
    fn now(&mut self) -> Duration {
        self.origin.elapsed()
    }
}

/// Advances by a fixed step on every reading.
#[derive(Debug, Clone)]
pub struct MockClock {
    now: Duration,
    step: Duration,
}

impl MockClock {
    pub fn new(step: Duration) -> Self {
        Self {
            now: Duration::ZERO,
            step,
        }
    }
}

impl Clock for MockClock {
    fn now(&mut self) -> Duration {
        self.now += self.step;
        self.now
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimingRecord {
    pub engine: EngineKind,
    pub q: u64,
    pub n: u64,
    /// Median forward time, seconds.
    pub t_ntt: f64,
    /// Median inverse time, seconds.
    pub t_intt: f64,
    pub t_precompute: f64,
    pub iters: usize,
    pub ntt_samples: Vec<f64>,
    pub intt_samples: Vec<f64>,
}

/// Middle order statistic; mean of the two middle values for even lengths.
pub fn median(samples: &[f64]) -> f64 {
    assert!(!samples.is_empty(), "median of no samples");
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mid = sorted.len() / 2;
    if sorted.len() % 2 == 1 {
        sorted[mid]
    } else {
        (sorted[mid - 1] + sorted[mid]) / 2.0
    }
}

fn timed<T>(clock: &mut dyn Clock, f: impl FnOnce() -> T) -> (T, f64) {
    let start = clock.now();
    let out = f();
    let elapsed = clock.now().saturating_sub(start);
    (out, elapsed.as_secs_f64())
}

/// Times an already built engine: one discarded warm-up, then `iters`
/// forward and `iters` inverse runs on the same seeded input.
pub fn time_built_engine(
    engine: &dyn NttEngine,
    t_precompute: f64,
    iters: usize,
    seed: u64,
    clock: &mut dyn Clock,
) -> BenchResult<TimingRecord> {
    if iters < 3 {
        return Err(BenchError::TooFewIters(iters));
    }
    let params = *engine.params();
    let a = random_polynomial(&params, seed);
    let a_prime = engine.forward(&a)?;
    engine.inverse(&a_prime)?;

    let mut ntt_samples = Vec::with_capacity(iters);
    let mut intt_samples = Vec::with_capacity(iters);
    for _ in 0..iters {
        let (out, t) = timed(clock, || engine.forward(&a));
        out?;
        ntt_samples.push(t);
        let (out, t) = timed(clock, || engine.inverse(&a_prime));
        out?;
        intt_samples.push(t);
    }
    Ok(TimingRecord {
        engine: engine.kind(),
        q: params.q() as u64,
        n: params.n() as u64,
        t_ntt: median(&ntt_samples),
        t_intt: median(&intt_samples),
        t_precompute,
        iters,
        ntt_samples,
        intt_samples,
    })
}

pub fn time_engine_with_clock(
    kind: EngineKind,
    q: u64,
    n: u64,
    iters: usize,
    seed: u64,
    clock: &mut dyn Clock,
) -> BenchResult<TimingRecord> {
    let params = NttParams::new(q, n)?;
    if iters < 3 {
        return Err(BenchError::TooFewIters(iters));
    }
    let (engine, t_precompute) = timed(clock, || make_engine(kind, &params));
    time_built_engine(&engine, t_precompute, iters, seed, clock)
}

pub fn time_engine(
    kind: EngineKind,
    q: u64,
    n: u64,
    iters: usize,
    seed: u64,
) -> BenchResult<TimingRecord> {
    time_engine_with_clock(kind, q, n, iters, seed, &mut SystemClock::default())
}

fn check_positive(name: &'static str, value: f64) -> BenchResult<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(BenchError::NonPositive { name, value })
    }
}

pub fn speedup(t_ntt_ref: f64, t_intt_ref: f64, t_ntt: f64, t_intt: f64) -> BenchResult<f64> {
    let reference =
        check_positive("t_ntt_ref", t_ntt_ref)? + check_positive("t_intt_ref", t_intt_ref)?;
    let candidate = check_positive("t_ntt", t_ntt)? + check_positive("t_intt", t_intt)?;
    Ok(reference / candidate)
}

pub fn score(s_l: f64, s_baseline: f64, m_baseline: f64, m_l: f64) -> BenchResult<f64> {
    Ok(
        check_positive("speedup", s_l)? / check_positive("baseline speedup", s_baseline)?
            + check_positive("baseline memory", m_baseline)? / check_positive("memory", m_l)?,
    )
}

/// Deterministic byte accounting of an engine's online footprint.
pub fn memory_account(kind: EngineKind, params: &NttParams) -> u64 {
    engine::accounted_bytes(kind, params.n())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportMeta {
    pub suite: String,
    pub seed: u64,
    pub iters: usize,
    pub baseline_fast: EngineKind,
    pub baseline_gpu: EngineKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub engine: EngineKind,
    pub q: u64,
    pub n: u64,
    pub precompute_s: f64,
    pub ntt_time_s: f64,
    pub intt_time_s: f64,
    pub speedup: f64,
    pub memory_bytes: u64,
    pub score: f64,
}

pub const CSV_HEADER: &str =
    "engine,q,n,precompute_s,ntt_time_s,intt_time_s,speedup,memory_bytes,score";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub meta: ReportMeta,
    pub rows: Vec<ReportRow>,
    /// Raw timings behind `rows`; kept in memory only.
    #[serde(skip)]
    pub records: Vec<TimingRecord>,
}

impl BenchReport {
    pub fn empty(meta: ReportMeta) -> Self {
        Self {
            meta,
            rows: Vec::new(),
            records: Vec::new(),
        }
    }

    pub fn memory(&self) -> BTreeMap<(EngineKind, u64, u64), u64> {
        self.rows
            .iter()
            .map(|r| ((r.engine, r.q, r.n), r.memory_bytes))
            .collect()
    }

    pub fn speedups(&self) -> BTreeMap<(EngineKind, u64, u64), f64> {
        self.rows
            .iter()
            .map(|r| ((r.engine, r.q, r.n), r.speedup))
            .collect()
    }

    pub fn scores(&self) -> BTreeMap<(EngineKind, u64, u64), f64> {
        self.rows
            .iter()
            .map(|r| ((r.engine, r.q, r.n), r.score))
            .collect()
    }

    pub fn row(&self, engine: EngineKind, q: u64, n: u64) -> Option<&ReportRow> {
        self.rows
            .iter()
            .find(|r| r.engine == engine && r.q == q && r.n == n)
    }

    pub fn from_json(text: &str) -> BenchResult<Self> {
        serde_json::from_str(text).map_err(|e| BenchError::Parse(e.to_string()))
    }
}

pub fn rows_from_csv(text: &str) -> BenchResult<Vec<ReportRow>> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| BenchError::Parse(e.to_string()))?
        .iter()
        .collect::<Vec<_>>()
        .join(",");
    if header != CSV_HEADER {
        return Err(BenchError::Parse(format!(
            "unexpected csv header `{header}`"
        )));
    }
    reader
        .deserialize()
        .collect::<Result<Vec<ReportRow>, _>>()
        .map_err(|e| BenchError::Parse(e.to_string()))
}

/// Builds one engine for the harness; swappable so tests can inject faults.
pub type EngineFactory<'a> = dyn Fn(EngineKind, &NttParams) -> Box<dyn NttEngine> + 'a;

pub fn default_factory(kind: EngineKind, params: &NttParams) -> Box<dyn NttEngine> {
    Box::new(make_engine(kind, params))
}

pub fn run_suite(
    suite: &ParamSuite,
    kinds: &[EngineKind],
    iters: usize,
    seed: u64,
) -> BenchResult<BenchReport> {
    run_suite_with(
        suite,
        kinds,
        iters,
        seed,
        &default_factory,
        &mut SystemClock::default(),
    )
}

/// Runs every point of `suite` sequentially. Before an engine is timed its
/// product of a seeded random pair is compared with the schoolbook result;
/// any disagreement aborts the whole run.
pub fn run_suite_with(
    suite: &ParamSuite,
    kinds: &[EngineKind],
    iters: usize,
    seed: u64,
    factory: &EngineFactory<'_>,
    clock: &mut dyn Clock,
) -> BenchResult<BenchReport> {
    if suite.entries.is_empty() || kinds.is_empty() {
        return Err(BenchError::EmptyRun);
    }
    if iters < 3 {
        return Err(BenchError::TooFewIters(iters));
    }
    let mut requested: Vec<EngineKind> = Vec::new();
    for &k in kinds {
        if !requested.contains(&k) {
            requested.push(k);
        }
    }
    let mut measured = requested.clone();
    for k in [SPEEDUP_REFERENCE, SCORE_BASELINE] {
        if !measured.contains(&k) {
            measured.push(k);
        }
    }

    let mut report = BenchReport::empty(ReportMeta {
        suite: suite.name.clone(),
        seed,
        iters,
        baseline_fast: SPEEDUP_REFERENCE,
        baseline_gpu: SCORE_BASELINE,
    });

    for &(q, n) in &suite.entries {
        let params = NttParams::new(q, n)?;
        let a = random_polynomial(&params, seed);
        let b = random_polynomial(&params, seed.wrapping_add(1));
        let expected = nwc_schoolbook(&a, &b)?;

        let mut records: BTreeMap<EngineKind, TimingRecord> = BTreeMap::new();
        for &kind in &measured {
            let (engine, t_precompute) = timed(clock, || factory(kind, &params));
            if engine.polymul(&a, &b)? != expected {
                return Err(BenchError::OracleMismatch {
                    engine: kind,
                    q,
                    n,
                    seed,
                });
            }
            records.insert(
                kind,
                time_built_engine(engine.as_ref(), t_precompute, iters, seed, clock)?,
            );
        }

        let reference = &records[&SPEEDUP_REFERENCE];
        let baseline = &records[&SCORE_BASELINE];
        let s_baseline = speedup(
            reference.t_ntt,
            reference.t_intt,
            baseline.t_ntt,
            baseline.t_intt,
        )?;
        let m_baseline = memory_account(SCORE_BASELINE, &params);
        for &kind in &requested {
            let rec = &records[&kind];
            let s = speedup(reference.t_ntt, reference.t_intt, rec.t_ntt, rec.t_intt)?;
            let memory = memory_account(kind, &params);
            report.rows.push(ReportRow {
                engine: kind,
                q,
                n,
                precompute_s: rec.t_precompute,
                ntt_time_s: rec.t_ntt,
                intt_time_s: rec.t_intt,
                speedup: s,
                memory_bytes: memory,
                score: score(s, s_baseline, m_baseline as f64, memory as f64)?,
            });
            report.records.push(rec.clone());
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Table,
    Csv,
    Json,
}

impl FromStr for ReportFormat {
    type Err = BenchError;

    fn from_str(s: &str) -> BenchResult<Self> {
        match s {
            "table" => Ok(Self::Table),
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(BenchError::UnsupportedFormat(other.to_string())),
        }
    }
}

impl fmt::Display for ReportFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Table => "table",
            Self::Csv => "csv",
            Self::Json => "json",
        })
    }
}

pub fn emit_report(report: &BenchReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            s
        }
        ReportFormat::Csv => {
            let mut writer = csv::Writer::from_writer(Vec::new());
            if report.rows.is_empty() {
                writer
                    .write_record(CSV_HEADER.split(','))
                    .expect("in-memory write");
            }
            for row in &report.rows {
                writer.serialize(row).expect("in-memory write");
            }
            String::from_utf8(writer.into_inner().expect("flush")).expect("csv is utf-8")
        }
        ReportFormat::Table => render_table(report),
    }
}

/// Parses a format name and renders; the CLI entry point.
pub fn emit_report_named(report: &BenchReport, format: &str) -> BenchResult<String> {
    Ok(emit_report(report, format.parse()?))
}

fn render_table(report: &BenchReport) -> String {
    let header: Vec<String> = CSV_HEADER.split(',').map(str::to_string).collect();
    let mut cells: Vec<Vec<String>> = vec![header];
    for r in &report.rows {
        cells.push(vec![
            r.engine.to_string(),
            r.q.to_string(),
            r.n.to_string(),
            format!("{:.6}", r.precompute_s),
            format!("{:.6}", r.ntt_time_s),
            format!("{:.6}", r.intt_time_s),
            format!("{:.2}", r.speedup),
            r.memory_bytes.to_string(),
            format!("{:.2}", r.score),
        ]);
    }
    let widths: Vec<usize> = (0..cells[0].len())
        .map(|c| cells.iter().map(|row| row[c].len()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in &cells {
        let line: Vec<String> = row
            .iter()
            .zip(&widths)
            .enumerate()
            .map(|(c, (cell, &w))| {
                if c == 0 {
                    format!("{cell:<w$}")
                } else {
                    format!("{cell:>w$}")
                }
            })
            .collect();
        let _ = writeln!(out, "{}", line.join("  ").trim_end());
    }
    out
}
