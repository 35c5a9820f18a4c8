use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{AfdError, Result};
use crate::transform::{self, ComplexBuffer};

/// Smallest admissible signal length.
pub const MIN_SAMPLES: usize = 8;

/// Boundary samples `G(e^{i 2 pi m / N})`, `m = 0..N`, with `N = 2^K >= 8`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledSignal {
    samples: Vec<Complex64>,
}

impl SampledSignal {
    pub fn new(samples: Vec<Complex64>) -> Result<Self> {
        let n = samples.len();
        if n < MIN_SAMPLES || !n.is_power_of_two() {
            return Err(AfdError::Size(format!(
                "signal length {n} must be a power of two >= {MIN_SAMPLES}"
            )));
        }
        if let Some(m) = samples.iter().position(|v| !v.is_finite()) {
            return Err(AfdError::Domain(format!("sample {m} is not finite")));
        }
        Ok(Self { samples })
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::new(vec![Complex64::new(0.0, 0.0); n])
    }

    /// Samples `f(e^{i t_m})` of a function on the circle.
    pub fn from_fn(n: usize, f: impl Fn(Complex64) -> Complex64) -> Result<Self> {
        Self::new(circle_points(n).into_iter().map(f).collect())
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<Complex64> {
        self.samples
    }

    pub fn to_buffer(&self) -> ComplexBuffer {
        ComplexBuffer::new(self.samples.clone()).expect("signal length is a power of two")
    }

    /// Pointwise scaling by a complex constant.
    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            samples: self.samples.iter().map(|&v| v * factor).collect(),
        }
    }

    /// Largest pointwise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Grid points `z_m = e^{i 2 pi m / N}` on the unit circle.
pub fn circle_points(n: usize) -> Vec<Complex64> {
    let step = 2.0 * PI / n as f64;
    (0..n)
        .map(|m| Complex64::from_polar(1.0, step * m as f64))
        .collect()
}

/// `(1/N) sum_m |G[m]|^2`.
pub fn discrete_energy(g: &SampledSignal) -> f64 {
    g.samples.iter().map(|v| v.norm_sqr()).sum::<f64>() / g.len() as f64
}

/// Discrete analytic signal of a real sequence.
///
/// With `X = DFT(x)`, the output spectrum keeps `X_0` and `X_{N/2}`, doubles
/// bins `1..N/2`, and zeroes bins above `N/2`.
pub fn analytic_projection(x: &[f64]) -> Result<SampledSignal> {
    let n = x.len();
    if let Some(m) = x.iter().position(|v| !v.is_finite()) {
        return Err(AfdError::Domain(format!("input sample {m} is not finite")));
    }
    let buf = ComplexBuffer::new(x.iter().map(|&v| Complex64::new(v, 0.0)).collect())?;
    let mut spectrum = transform::dft_forward(&buf).into_vec();
    let half = n / 2;
    for (l, v) in spectrum.iter_mut().enumerate() {
        if l > half {
            *v = Complex64::new(0.0, 0.0);
        } else if l > 0 && l < half {
            *v *= 2.0;
        }
    }
    let out = transform::dft_inverse(&ComplexBuffer::new(spectrum)?);
    SampledSignal::new(out.into_vec())
}
