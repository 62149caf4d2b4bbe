//! Instance generation, reduce → solve → oracle verification, and the scaling
//! benchmark.

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Norm;
use crate::oracles::{conv3sum_brute, ov_brute};
use crate::reduction::conv3sum::{reduce_conv3sum_with, Conv3SumInstance};
use crate::reduction::ov::{preprocess_ov, reduce_ov, OVInstance};
use crate::reduction::ReductionOutput;
use crate::solver::{decide_translation_with, Direction, SolverOptions};

/// Uniform random bits; `planted` clears shared 1-bits of one random pair.
pub fn gen_ov(m: usize, n: usize, d: usize, planted: bool, seed: u64) -> Result<OVInstance> {
    if m == 0 || n == 0 || d == 0 {
        return Err(Error::InvalidInput("m, n and d must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vecs = |k: usize, rng: &mut ChaCha8Rng| -> Vec<Vec<bool>> {
        (0..k).map(|_| (0..d).map(|_| rng.gen_bool(0.5)).collect()).collect()
    };
    let mut x = vecs(m, &mut rng);
    let mut y = vecs(n, &mut rng);
    if planted {
        let i = rng.gen_range(0..m);
        let j = rng.gen_range(0..n);
        for k in 0..d {
            if x[i][k] && y[j][k] {
                if rng.gen_bool(0.5) {
                    x[i][k] = false;
                } else {
                    y[j][k] = false;
                }
            }
        }
    }
    OVInstance::new(x, y)
}

/// Like [`gen_ov`] but every vector has both a 0 and a 1, so preprocessing
/// keeps the instance intact.
pub fn gen_ov_nondegenerate(m: usize, n: usize, d: usize, seed: u64) -> Result<OVInstance> {
    if d < 2 {
        return Err(Error::InvalidInput("nondegenerate vectors need d >= 2".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha8Rng| loop {
        let v: Vec<bool> = (0..d).map(|_| rng.gen_bool(0.5)).collect();
        if v.iter().any(|&b| b) && v.iter().any(|&b| !b) {
            return v;
        }
    };
    let x = (0..m).map(|_| draw(&mut rng)).collect();
    let y = (0..n).map(|_| draw(&mut rng)).collect();
    OVInstance::new(x, y)
}

/// Values uniform in `[1, M]`; `planted` sets `x_{i+j} := x_i + x_j` for
/// random `i, j ≥ 1` with `i + j ≤ n − 1`.
pub fn gen_conv3sum(n: usize, max: i64, planted: bool, seed: u64) -> Result<Conv3SumInstance> {
    if n == 0 || max < 1 {
        return Err(Error::InvalidInput("need n >= 1 and M >= 1".into()));
    }
    if planted && (n < 3 || max < 2) {
        return Err(Error::InvalidInput("a planted solution needs n >= 3 and M >= 2".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=max)).collect();
    if planted {
        let i = rng.gen_range(1..n - 1);
        let j = rng.gen_range(1..n - i);
        if i == j {
            x[i] = rng.gen_range(1..=max / 2);
        } else {
            x[i] = rng.gen_range(1..max);
            x[j] = rng.gen_range(1..=max - x[i]);
        }
        x[i + j] = x[i] + x[j];
    }
    Conv3SumInstance::with_bound(x, max)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReductionKind {
    Ov,
    Conv3Sum,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PipelineInput {
    Ov(OVInstance),
    Conv3Sum(Conv3SumInstance),
}

impl PipelineInput {
    pub fn kind(&self) -> ReductionKind {
        match self {
            PipelineInput::Ov(_) => ReductionKind::Ov,
            PipelineInput::Conv3Sum(_) => ReductionKind::Conv3Sum,
        }
    }

    pub fn to_text(&self) -> String {
        match self {
            PipelineInput::Ov(i) => i.to_text(),
            PipelineInput::Conv3Sum(i) => i.to_text(),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct PipelineConfig {
    pub solver: SolverOptions,
    /// Pad the diagonal gadget of the Conv3SUM construction.
    pub extend_diagonal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub id: String,
    pub kind: ReductionKind,
    pub norm: String,
    pub direction: String,
    pub oracle: bool,
    pub solver: bool,
    /// Answer fixed by preprocessing, if any; then no geometry was built.
    pub forced: Option<bool>,
    pub witness: Option<String>,
    pub agreement: bool,
    pub construction_ns: u64,
    pub solve_ns: u64,
    pub size_a: usize,
    pub size_b: usize,
    pub candidates_generated: u64,
    pub candidates_tested: u64,
}

/// Reduction output plus its report; `output` is `None` for forced OV answers.
pub struct PipelineRun {
    pub report: VerificationReport,
    pub output: Option<ReductionOutput>,
}

pub fn verify_pipeline(
    id: &str,
    input: &PipelineInput,
    norm: Norm,
    dir: Direction,
    config: &PipelineConfig,
) -> Result<PipelineRun> {
    let oracle = match input {
        PipelineInput::Ov(i) => ov_brute(i).is_some(),
        PipelineInput::Conv3Sum(i) => conv3sum_brute(i).is_some(),
    };
    let mut report = VerificationReport {
        id: id.to_string(),
        kind: input.kind(),
        norm: norm.to_string(),
        direction: dir.to_string(),
        oracle,
        solver: false,
        forced: None,
        witness: None,
        agreement: false,
        construction_ns: 0,
        solve_ns: 0,
        size_a: 0,
        size_b: 0,
        candidates_generated: 0,
        candidates_tested: 0,
    };

    let start = Instant::now();
    let output = match input {
        PipelineInput::Ov(inst) => {
            if let Some(answer) = preprocess_ov(inst).forced {
                report.construction_ns = elapsed_ns(start);
                report.forced = Some(answer);
                report.solver = answer;
                report.agreement = answer == oracle;
                return Ok(PipelineRun { report, output: None });
            }
            reduce_ov(inst, norm)?.0
        }
        PipelineInput::Conv3Sum(inst) => {
            if norm.canonical() != Norm::L2 {
                return Err(Error::UnsupportedNorm {
                    norm: norm.to_string(),
                    operation: "the Conv3SUM reduction (L2 only)",
                });
            }
            reduce_conv3sum_with(inst, config.extend_diagonal)?.0
        }
    };
    report.construction_ns = elapsed_ns(start);
    report.size_a = output.a.len();
    report.size_b = output.b.len();

    let start = Instant::now();
    let result = decide_translation_with(&output.a, &output.b, &output.delta, output.norm, dir, &config.solver)?;
    report.solve_ns = elapsed_ns(start);
    report.solver = result.feasible;
    report.witness = result.witness.as_ref().map(ToString::to_string);
    report.candidates_generated = result.stats.candidates_generated;
    report.candidates_tested = result.stats.candidates_tested;
    report.agreement = report.solver == oracle;
    Ok(PipelineRun { report, output: Some(output) })
}

/// Runs independent cases, optionally on a worker pool; reports keep input order.
pub fn verify_batch(
    cases: &[(String, PipelineInput)],
    norm: Norm,
    dir: Direction,
    config: &PipelineConfig,
    workers: usize,
) -> Vec<Result<VerificationReport>> {
    let run = |(id, input): &(String, PipelineInput)| verify_pipeline(id, input, norm, dir, config).map(|r| r.report);
    if workers <= 1 {
        return cases.iter().map(run).collect();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(pool) => pool.install(|| cases.par_iter().map(run).collect()),
        Err(e) => vec![Err(Error::Internal(e.to_string()))],
    }
}

/// Writes instance, reduction, provenance and report for a failed case.
pub fn dump_failure(dir: &Path, input: &PipelineInput, run: &PipelineRun) -> Result<PathBuf> {
    let case = dir.join(sanitize(&run.report.id));
    fs::create_dir_all(&case)?;
    fs::write(case.join("input.txt"), input.to_text())?;
    if let Some(out) = &run.output {
        fs::write(case.join("instance.txt"), out.instance().to_text())?;
        fs::write(case.join("provenance.json"), out.provenance_json())?;
    }
    let report = serde_json::to_string_pretty(&run.report).map_err(|e| Error::Internal(e.to_string()))?;
    fs::write(case.join("report.json"), report)?;
    Ok(case)
}

fn sanitize(id: &str) -> String {
    id.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' }).collect()
}

fn elapsed_ns(start: Instant) -> u64 {
    start.elapsed().as_nanos().min(u64::MAX as u128) as u64
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub n: usize,
    pub m: usize,
    pub d: usize,
    pub norm: String,
    pub wall_ns: u64,
    pub candidates: u64,
    pub tested: u64,
    pub timed_out: bool,
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    /// `(m, n)` pairs.
    pub grid: Vec<(usize, usize)>,
    pub d: usize,
    pub norm: Norm,
    pub direction: Direction,
    pub repetitions: usize,
    pub seed: u64,
    pub timeout: Option<Duration>,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            grid: vec![(2, 2), (3, 3), (4, 4)],
            d: 4,
            norm: Norm::L1,
            direction: Direction::Undirected,
            repetitions: 3,
            seed: 0,
            timeout: Some(Duration::from_secs(60)),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchSummary {
    pub records: Vec<BenchRecord>,
    /// Slope of `log(mean time)` against `log(nm)`; needs 3 or more grid points.
    pub slope: Option<f64>,
}

/// Times the OV reduction pipeline on fresh nondegenerate instances. The
/// first repetition at each size is a discarded warm-up.
pub fn bench_scaling(cfg: &BenchConfig) -> Result<BenchSummary> {
    let mut records = Vec::new();
    let mut means = Vec::new();
    if cfg.repetitions == 0 {
        return Ok(BenchSummary { records, slope: None });
    }
    for (g, &(m, n)) in cfg.grid.iter().enumerate() {
        let mut times = Vec::new();
        for rep in 0..=cfg.repetitions {
            let seed = cfg.seed ^ ((g as u64) << 32) ^ rep as u64;
            let inst = gen_ov_nondegenerate(m, n, cfg.d, seed)?;
            let (out, _, _) = reduce_ov(&inst, cfg.norm)?;
            let opts = SolverOptions { deadline: cfg.timeout.map(|t| Instant::now() + t), ..Default::default() };
            let start = Instant::now();
            let outcome = decide_translation_with(&out.a, &out.b, &out.delta, out.norm, cfg.direction, &opts);
            let wall_ns = elapsed_ns(start);
            if rep == 0 {
                continue;
            }
            let (candidates, tested, timed_out) = match outcome {
                Ok(r) => (r.stats.candidates_generated, r.stats.candidates_tested, false),
                Err(Error::Timeout) => (0, 0, true),
                Err(e) => return Err(e),
            };
            if !timed_out {
                times.push(wall_ns as f64);
            }
            records.push(BenchRecord { n, m, d: cfg.d, norm: cfg.norm.to_string(), wall_ns, candidates, tested, timed_out });
        }
        if !times.is_empty() {
            means.push((((n * m) as f64).ln(), (times.iter().sum::<f64>() / times.len() as f64).ln()));
        }
    }
    let slope = if cfg.grid.len() >= 3 { fit_slope(&means) } else { None };
    Ok(BenchSummary { records, slope })
}

/// Least-squares slope; `None` with fewer than two distinct x values.
pub fn fit_slope(points: &[(f64, f64)]) -> Option<f64> {
    let k = points.len() as f64;
    if points.len() < 2 {
        return None;
    }
    let mx = points.iter().map(|p| p.0).sum::<f64>() / k;
    let my = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

pub fn write_bench_csv<W: Write>(records: &[BenchRecord], writer: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(writer);
    w.write_record(["n", "m", "d", "norm", "wall_ns", "candidates", "tested", "timed_out"])?;
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_bench_csv<R: Read>(reader: R) -> Result<Vec<BenchRecord>> {
    let mut r = csv::Reader::from_reader(reader);
    let expected = ["n", "m", "d", "norm", "wall_ns", "candidates", "tested", "timed_out"];
    let headers = r.headers()?.clone();
    if headers.iter().ne(expected) {
        return Err(Error::Parse(format!("unexpected CSV header `{}`", headers.iter().collect::<Vec<_>>().join(","))));
    }
    r.deserialize().map(|row| row.map_err(Error::from)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_deterministic() {
        assert_eq!(gen_ov(3, 2, 4, false, 7).unwrap(), gen_ov(3, 2, 4, false, 7).unwrap());
        assert_eq!(gen_conv3sum(5, 8, true, 3).unwrap(), gen_conv3sum(5, 8, true, 3).unwrap());
    }

    #[test]
    fn planted_instances_are_positive() {
        for seed in 0..200 {
            assert!(ov_brute(&gen_ov(3, 3, 4, true, seed).unwrap()).is_some());
            let c = gen_conv3sum(3 + (seed as usize % 3), 2 + (seed as i64 % 7), true, seed).unwrap();
            assert!(conv3sum_brute(&c).is_some(), "{c:?}");
        }
        assert!(gen_conv3sum(2, 8, true, 0).is_err());
        assert!(gen_conv3sum(4, 1, true, 0).is_err());
    }

    #[test]
    fn all_ones_is_negative() {
        let inst = OVInstance::from_strings(&["1"], &["1"]).unwrap();
        assert!(ov_brute(&inst).is_none());
    }

    #[test]
    fn nondegenerate_vectors_survive_preprocessing() {
        for seed in 0..50 {
            let inst = gen_ov_nondegenerate(3, 3, 2, seed).unwrap();
            assert_eq!(preprocess_ov(&inst).forced, None);
        }
    }

    #[test]
    fn pipeline_examples() {
        let cfg = PipelineConfig::default();
        let pos = PipelineInput::Conv3Sum(Conv3SumInstance::new(vec![5, 2, 4]).unwrap());
        let r = verify_pipeline("pos", &pos, Norm::L2, Direction::AToB, &cfg).unwrap().report;
        assert!(r.agreement && r.oracle);
        let neg = PipelineInput::Conv3Sum(Conv3SumInstance::new(vec![1, 1, 3]).unwrap());
        let r = verify_pipeline("neg", &neg, Norm::L2, Direction::Undirected, &cfg).unwrap().report;
        assert!(r.agreement && !r.oracle);
        let ov = PipelineInput::Ov(gen_ov(2, 2, 3, true, 11).unwrap());
        let r = verify_pipeline("ov", &ov, Norm::L1, Direction::Undirected, &cfg).unwrap().report;
        assert!(r.agreement && r.oracle);
        let e = verify_pipeline("bad", &pos, Norm::L1, Direction::AToB, &cfg);
        assert!(matches!(e, Err(Error::UnsupportedNorm { .. })));
    }

    #[test]
    fn batch_keeps_order() {
        let cases: Vec<_> = (0..4)
            .map(|s| (format!("c{s}"), PipelineInput::Ov(gen_ov(2, 2, 2, s % 2 == 0, s).unwrap())))
            .collect();
        let reports = verify_batch(&cases, Norm::L1, Direction::BToA, &PipelineConfig::default(), 2);
        let ids: Vec<_> = reports.iter().map(|r| r.as_ref().unwrap().id.clone()).collect();
        assert_eq!(ids, ["c0", "c1", "c2", "c3"]);
        assert!(reports.iter().all(|r| r.as_ref().unwrap().agreement));
    }

    #[test]
    fn csv_round_trip() {
        let records = vec![
            BenchRecord { n: 2, m: 3, d: 4, norm: "L1".into(), wall_ns: 10, candidates: 5, tested: 1, timed_out: false },
            BenchRecord { n: 4, m: 4, d: 4, norm: "Lp:3".into(), wall_ns: 0, candidates: 0, tested: 0, timed_out: true },
        ];
        let mut buf = Vec::new();
        write_bench_csv(&records, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("n,m,d,norm,wall_ns,candidates,tested,timed_out\n"));
        assert_eq!(read_bench_csv(buf.as_slice()).unwrap(), records);

        let mut empty = Vec::new();
        write_bench_csv(&[], &mut empty).unwrap();
        assert!(read_bench_csv(empty.as_slice()).unwrap().is_empty());
    }

    #[test]
    fn slope_fit() {
        let pts: Vec<_> = (1..5).map(|i| (i as f64, 2.0 * i as f64 + 1.0)).collect();
        assert!((fit_slope(&pts).unwrap() - 2.0).abs() < 1e-12);
        assert_eq!(fit_slope(&pts[..1]), None);
    }

    #[test]
    fn zero_repetitions() {
        let cfg = BenchConfig { repetitions: 0, ..Default::default() };
        let s = bench_scaling(&cfg).unwrap();
        assert!(s.records.is_empty() && s.slope.is_none());
    }

    #[test]
    fn failure_dump() {
        let dir = tempfile::tempdir().unwrap();
        let input = PipelineInput::Ov(OVInstance::from_strings(&["10"], &["01"]).unwrap());
        let run = verify_pipeline("x/1", &input, Norm::L1, Direction::Undirected, &PipelineConfig::default()).unwrap();
        let path = dump_failure(dir.path(), &input, &run).unwrap();
        assert!(path.join("provenance.json").exists());
        assert!(path.join("report.json").exists());
    }
}
