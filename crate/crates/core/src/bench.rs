//! Wall-clock harness for full decompositions and log-log scaling fits.
//!
//! Each cell `(engine, N)` runs one untimed warm-up decomposition of the
//! rational test signal, then `repeats` timed ones. Summaries use the median
//! over repeats.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::afd::decompose::{decompose, DecomposeOptions, Engine};
use crate::afd::grid::ParameterGrid;
use crate::error::{AfdError, Result};
use crate::signals::synth_f1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum BenchEngine {
    #[serde(rename = "fft")]
    Fft,
    #[serde(rename = "fft-parallel")]
    FftParallel,
    #[serde(rename = "direct")]
    Direct,
}

impl BenchEngine {
    fn options(self, terms: usize) -> DecomposeOptions {
        let (engine, parallel) = match self {
            BenchEngine::Fft => (Engine::Fft, false),
            BenchEngine::FftParallel => (Engine::Fft, true),
            BenchEngine::Direct => (Engine::Direct, false),
        };
        DecomposeOptions {
            max_terms: terms,
            engine,
            parallel,
            ..DecomposeOptions::default()
        }
    }
}

impl fmt::Display for BenchEngine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BenchEngine::Fft => "fft",
            BenchEngine::FftParallel => "fft-parallel",
            BenchEngine::Direct => "direct",
        })
    }
}

impl FromStr for BenchEngine {
    type Err = AfdError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fft" => Ok(BenchEngine::Fft),
            "fft-parallel" => Ok(BenchEngine::FftParallel),
            "direct" => Ok(BenchEngine::Direct),
            other => Err(AfdError::Format(format!("unknown bench engine '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub sizes: Vec<usize>,
    pub radii: Vec<f64>,
    pub terms: usize,
    pub repeats: usize,
    pub engines: Vec<BenchEngine>,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            sizes: vec![128, 256, 512, 1024, 2048, 4096],
            radii: (0..9).map(|i| i as f64 * 0.1).collect(),
            terms: 10,
            repeats: 6,
            engines: vec![BenchEngine::Fft, BenchEngine::Direct],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub engine: BenchEngine,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "M")]
    pub m: usize,
    pub terms: usize,
    pub repeat: usize,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    pub cpu_model: String,
    pub timestamp: String,
}

fn cpu_model() -> String {
    std::fs::read_to_string("/proc/cpuinfo")
        .ok()
        .and_then(|info| {
            info.lines()
                .find(|l| l.starts_with("model name"))
                .and_then(|l| l.split_once(':'))
                .map(|(_, v)| v.trim().to_string())
        })
        .unwrap_or_else(|| std::env::consts::ARCH.to_string())
}

impl BenchConfig {
    fn validate(&self) -> Result<()> {
        if self.repeats == 0 {
            return Err(AfdError::Domain("repeats must be at least 1".into()));
        }
        if self.terms == 0 {
            return Err(AfdError::Domain("terms must be at least 1".into()));
        }
        if self.sizes.is_empty() || self.engines.is_empty() {
            return Err(AfdError::Domain(
                "need at least one size and one engine".into(),
            ));
        }
        if let Some(&n) = self.sizes.iter().find(|&&n| n < 8 || !n.is_power_of_two()) {
            return Err(AfdError::Size(format!(
                "size {n} is not a power of two >= 8"
            )));
        }
        Ok(())
    }
}

/// Times every `(engine, size)` cell of `config`.
pub fn run_benchmark(config: &BenchConfig) -> Result<BenchReport> {
    config.validate()?;
    let mut rows = Vec::new();
    for &engine in &config.engines {
        let options = engine.options(config.terms);
        for &n in &config.sizes {
            let g = synth_f1(n)?;
            let grid = ParameterGrid::new(config.radii.clone(), n)?;
            decompose(&g, &grid, &options)?;
            for repeat in 0..config.repeats {
                let start = Instant::now();
                let d = decompose(&g, &grid, &options)?;
                let seconds = start.elapsed().as_secs_f64();
                std::hint::black_box(&d);
                log::debug!("{engine} N={n} repeat={repeat}: {seconds:.6}s");
                rows.push(BenchRow {
                    engine,
                    n,
                    m: grid.radius_count(),
                    terms: config.terms,
                    repeat,
                    seconds,
                });
            }
        }
    }
    Ok(BenchReport {
        rows,
        cpu_model: cpu_model(),
        timestamp: chrono::Utc::now().to_rfc3339(),
    })
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let mid = values.len() / 2;
    if values.len() % 2 == 1 {
        values[mid]
    } else {
        0.5 * (values[mid - 1] + values[mid])
    }
}

impl BenchReport {
    /// `(N, median seconds)` for one engine, sorted by `N`.
    pub fn medians(&self, engine: BenchEngine) -> Vec<(usize, f64)> {
        let mut by_size: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
        for row in self.rows.iter().filter(|r| r.engine == engine) {
            by_size.entry(row.n).or_default().push(row.seconds);
        }
        by_size
            .into_iter()
            .map(|(n, mut times)| (n, median(&mut times)))
            .collect()
    }

    pub fn engines(&self) -> Vec<BenchEngine> {
        let mut engines: Vec<BenchEngine> = self.rows.iter().map(|r| r.engine).collect();
        engines.sort();
        engines.dedup();
        engines
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(writer);
        for row in &self.rows {
            w.serialize(row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn summary(&self) -> BenchSummary {
        let engines = self
            .engines()
            .into_iter()
            .map(|engine| EngineSummary {
                engine,
                medians: self
                    .medians(engine)
                    .into_iter()
                    .map(|(n, seconds)| MedianEntry { n, seconds })
                    .collect(),
                slope: fit_scaling(self, engine).ok(),
            })
            .collect();
        BenchSummary {
            cpu_model: self.cpu_model.clone(),
            timestamp: self.timestamp.clone(),
            engines,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MedianEntry {
    #[serde(rename = "N")]
    pub n: usize,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EngineSummary {
    pub engine: BenchEngine,
    pub medians: Vec<MedianEntry>,
    /// Log-log slope of median time against `N`; absent with fewer than three sizes.
    pub slope: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchSummary {
    pub cpu_model: String,
    pub timestamp: String,
    pub engines: Vec<EngineSummary>,
}

impl BenchSummary {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("summary serializes")
    }
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 3 {
        return Err(AfdError::Domain(format!(
            "need at least 3 points for a slope, got {}",
            points.len()
        )));
    }
    if points.iter().any(|&(x, y)| !(x > 0.0 && y > 0.0)) {
        return Err(AfdError::Domain("log-log fit needs positive data".into()));
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let k = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / k;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = logs.iter().map(|&(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = logs.iter().map(|&(x, _)| (x - mx) * (x - mx)).sum();
    Ok(sxy / sxx)
}

/// Slope of `log(median seconds)` against `log N` for one engine.
pub fn fit_scaling(report: &BenchReport, engine: BenchEngine) -> Result<f64> {
    let points: Vec<(f64, f64)> = report
        .medians(engine)
        .into_iter()
        .map(|(n, t)| (n as f64, t))
        .collect();
    if points.len() < 3 {
        return Err(AfdError::Domain(format!(
            "engine {engine} has {} distinct sizes, need at least 3",
            points.len()
        )));
    }
    loglog_slope(&points)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic(engine: BenchEngine, f: impl Fn(f64) -> f64) -> BenchReport {
        let rows = (8..=13)
            .flat_map(|k| {
                let n = 1usize << k;
                (0..3).map(move |repeat| (n, repeat))
            })
            .map(|(n, repeat)| BenchRow {
                engine,
                n,
                m: 9,
                terms: 10,
                repeat,
                seconds: f(n as f64) * (1.0 + 0.01 * repeat as f64),
            })
            .collect();
        BenchReport {
            rows,
            cpu_model: "test".into(),
            timestamp: "now".into(),
        }
    }

    #[test]
    fn quadratic_slope_is_two() {
        let report = synthetic(BenchEngine::Direct, |n| 3e-9 * n * n);
        let slope = fit_scaling(&report, BenchEngine::Direct).unwrap();
        assert!((slope - 2.0).abs() < 1e-6);
    }

    #[test]
    fn n_log_n_slope_in_expected_band() {
        let report = synthetic(BenchEngine::Fft, |n| 1e-8 * n * n.log2());
        let slope = fit_scaling(&report, BenchEngine::Fft).unwrap();
        // Local slope is 1 + 1 / ln N, between 1.11 and 1.18 on this range.
        assert!((1.0..=1.3).contains(&slope), "slope {slope}");
    }

    #[test]
    fn insufficient_data_is_an_error() {
        let report = synthetic(BenchEngine::Fft, |n| n);
        assert!(fit_scaling(&report, BenchEngine::Direct).is_err());
        assert!(loglog_slope(&[(1.0, 1.0), (2.0, 2.0)]).is_err());
    }

    #[test]
    fn median_of_even_and_odd_counts() {
        assert_eq!(median(&mut [3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&mut [4.0, 1.0, 2.0, 3.0]), 2.5);
    }

    #[test]
    fn smoke_run_has_one_row_per_engine() {
        let config = BenchConfig {
            sizes: vec![128],
            repeats: 1,
            terms: 2,
            ..BenchConfig::default()
        };
        let report = run_benchmark(&config).unwrap();
        assert_eq!(report.rows.len(), config.engines.len());
        assert!(report.rows.iter().all(|r| r.seconds > 0.0 && r.m == 9));
        let mut csv = Vec::new();
        report.write_csv(&mut csv).unwrap();
        let text = String::from_utf8(csv).unwrap();
        assert!(text.starts_with("engine,N,M,terms,repeat,seconds\n"));
        let summary = report.summary();
        assert_eq!(summary.engines.len(), 2);
        assert!(summary.engines.iter().all(|e| e.slope.is_none()));
    }

    #[test]
    fn rejects_bad_config() {
        let bad = BenchConfig {
            repeats: 0,
            ..BenchConfig::default()
        };
        assert!(run_benchmark(&bad).is_err());
        let bad = BenchConfig {
            sizes: vec![100],
            ..BenchConfig::default()
        };
        assert!(matches!(run_benchmark(&bad), Err(AfdError::Size(_))));
    }
}
