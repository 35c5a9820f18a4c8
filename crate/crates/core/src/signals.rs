//! Test-signal generators and the signal CSV format.
//!
//! The CSV layout is a header `index,real,imag` followed by one row per
//! sample, UTF-8 with LF line endings.

use std::f64::consts::PI;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::afd::signal::{analytic_projection, SampledSignal};
use crate::error::{AfdError, Result};

/// Rational test signal `(0.0247 z^3 + 0.355 z^2) / (1 - 0.3679 z)`.
pub fn synth_f1(n: usize) -> Result<SampledSignal> {
    SampledSignal::from_fn(n, |z| {
        (0.0247 * z.powi(3) + 0.355 * z * z) / (1.0 - 0.3679 * z)
    })
}

/// Analytic projection of `sgn(sin t)`, with `sgn(0) = 0`.
pub fn synth_f2(n: usize) -> Result<SampledSignal> {
    let step = 2.0 * PI / n as f64;
    let x: Vec<f64> = (0..n)
        .map(|m| {
            // sin t_m is exactly zero on the grid only at t = 0 and t = pi.
            if m == 0 || 2 * m == n {
                0.0
            } else {
                (step * m as f64).sin().signum()
            }
        })
        .collect();
    analytic_projection(&x)
}

/// Random polynomial `sum_{l <= degree} g_l z^l` with i.i.d. standard complex
/// Gaussian coefficients drawn from a ChaCha stream seeded by `seed`.
pub fn synth_random_hardy(n: usize, degree: usize, seed: u64) -> Result<SampledSignal> {
    if degree >= n / 2 {
        return Err(AfdError::Domain(format!(
            "degree {degree} must be below N/2 = {}",
            n / 2
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, std::f64::consts::FRAC_1_SQRT_2).expect("valid deviation");
    let coeffs: Vec<Complex64> = (0..=degree)
        .map(|_| Complex64::new(normal.sample(&mut rng), normal.sample(&mut rng)))
        .collect();
    SampledSignal::from_fn(n, |z| {
        coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum SignalKind {
    F1,
    F2,
    RandomHardy { degree: usize, seed: u64 },
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SignalSpec {
    pub kind: SignalKind,
    pub n_samples: usize,
}

impl SignalSpec {
    pub fn generate(&self) -> Result<SampledSignal> {
        let n = self.n_samples;
        if !n.is_power_of_two() {
            return Err(AfdError::Size(format!(
                "sample count {n} is not a power of two"
            )));
        }
        match &self.kind {
            SignalKind::F1 => synth_f1(n),
            SignalKind::F2 => synth_f2(n),
            SignalKind::RandomHardy { degree, seed } => synth_random_hardy(n, *degree, *seed),
            SignalKind::File(path) => {
                let g = read_signal_csv(path)?;
                if g.len() != n {
                    return Err(AfdError::Size(format!(
                        "{} holds {} samples, expected {n}",
                        path.display(),
                        g.len()
                    )));
                }
                Ok(g)
            }
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct SampleRow {
    index: usize,
    real: f64,
    imag: f64,
}

pub fn write_signal<W: Write>(g: &SampledSignal, writer: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(writer);
    for (index, v) in g.samples().iter().enumerate() {
        w.serialize(SampleRow {
            index,
            real: v.re,
            imag: v.im,
        })?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_signal<R: Read>(reader: R) -> Result<SampledSignal> {
    let mut r = csv::ReaderBuilder::new().from_reader(reader);
    let headers = r.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != ["index", "real", "imag"] {
        return Err(AfdError::Format(format!(
            "expected header 'index,real,imag', found '{}'",
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut samples = Vec::new();
    for (row, record) in r.deserialize::<SampleRow>().enumerate() {
        let record = record?;
        if record.index != row {
            return Err(AfdError::Format(format!(
                "row {row} carries index {}",
                record.index
            )));
        }
        samples.push(Complex64::new(record.real, record.imag));
    }
    SampledSignal::new(samples)
}

pub fn write_signal_csv(g: &SampledSignal, path: impl AsRef<Path>) -> Result<()> {
    let file = std::fs::File::create(path)?;
    write_signal(g, std::io::BufWriter::new(file))
}

pub fn read_signal_csv(path: impl AsRef<Path>) -> Result<SampledSignal> {
    read_signal(std::fs::File::open(path)?)
}
