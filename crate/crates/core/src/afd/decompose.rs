//! The greedy decomposition loop, remainder recursion, and reconstruction.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::field::{
    inner_product_field, inner_product_field_parallel, maximal_selection, spectral_coefficients,
    InnerProductField, Selection,
};
use super::grid::{ParameterGrid, ParameterPoint};
use super::kernel::{blaschke_at, check_pole, kernel_at};
use super::signal::{circle_points, discrete_energy, SampledSignal};
use crate::error::{AfdError, Result};
use crate::oracle;

/// How the inner-product field is evaluated at each step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    /// Spectrum plus one weighted inverse transform per radius.
    Fft,
    /// Quadrature at every grid point.
    Direct,
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Engine::Fft => "fft",
            Engine::Direct => "direct",
        })
    }
}

impl FromStr for Engine {
    type Err = AfdError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fft" => Ok(Engine::Fft),
            "direct" => Ok(Engine::Direct),
            other => Err(AfdError::Format(format!("unknown engine '{other}'"))),
        }
    }
}

/// Choice of the first pole.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FirstPole {
    /// `a_1 = 0`, so the first term is the mean of the signal.
    #[default]
    Origin,
    /// `a_1` comes from maximal selection like every later pole.
    Select,
}

impl fmt::Display for FirstPole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FirstPole::Origin => "origin",
            FirstPole::Select => "select",
        })
    }
}

impl FromStr for FirstPole {
    type Err = AfdError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "origin" => Ok(FirstPole::Origin),
            "select" => Ok(FirstPole::Select),
            other => Err(AfdError::Format(format!(
                "unknown first-pole rule '{other}'"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecomposeOptions {
    pub max_terms: usize,
    /// Stop once `residual / initial` energy drops to this value or below.
    pub energy_threshold: Option<f64>,
    pub engine: Engine,
    pub first_pole: FirstPole,
    /// Evaluate FFT field rows on the rayon pool.
    pub parallel: bool,
}

impl Default for DecomposeOptions {
    fn default() -> Self {
        Self {
            max_terms: 10,
            energy_threshold: None,
            engine: Engine::Fft,
            first_pole: FirstPole::Origin,
            parallel: false,
        }
    }
}

impl DecomposeOptions {
    pub fn with_engine(mut self, engine: Engine) -> Self {
        self.engine = engine;
        self
    }

    pub fn with_terms(mut self, max_terms: usize) -> Self {
        self.max_terms = max_terms;
        self
    }

    pub fn with_first_pole(mut self, first_pole: FirstPole) -> Self {
        self.first_pole = first_pole;
        self
    }
}

/// One greedy step: the pole, its coefficient `<G_k, e_{a_k}>`, and `||G_{k+1}||^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecompositionStep {
    pub pole: ParameterPoint,
    /// Index into the grid radii, `None` for a forced origin pole.
    pub radius_index: Option<usize>,
    pub coeff: Complex64,
    pub residual_energy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub steps: Vec<DecompositionStep>,
    pub grid: ParameterGrid,
    pub n_samples: usize,
    pub initial_energy: f64,
    pub engine: Engine,
    pub first_pole: FirstPole,
    /// The remainder `G_{n+1}` after the last step.
    pub remainder: SampledSignal,
}

impl Decomposition {
    pub fn poles(&self) -> Vec<Complex64> {
        self.steps.iter().map(|s| s.pole.value()).collect()
    }

    /// `prod_{k <= n} (z - a_k) / (1 - conj(a_k) z)` on the sample grid.
    pub fn blaschke_product(&self, n: usize) -> Result<SampledSignal> {
        self.check_terms(n)?;
        let poles = self.poles();
        SampledSignal::new(
            circle_points(self.n_samples)
                .into_iter()
                .map(|z| {
                    poles[..n]
                        .iter()
                        .fold(Complex64::new(1.0, 0.0), |acc, &a| acc * blaschke_at(a, z))
                })
                .collect(),
        )
    }

    /// `delta_n = ||G - S_n||^2 / ||G||^2` for `n = 1..=steps`.
    pub fn relative_errors(&self, g: &SampledSignal) -> Result<Vec<f64>> {
        partial_sums(self, self.steps.len())?
            .iter()
            .map(|s| relative_error(g, s))
            .collect()
    }

    fn check_terms(&self, n: usize) -> Result<()> {
        if n > self.steps.len() {
            return Err(AfdError::Range(format!(
                "requested {n} terms but the decomposition has {}",
                self.steps.len()
            )));
        }
        Ok(())
    }
}

/// `G_{k+1} = (G_k - c_k e_{a_k}) (1 - conj(a_k) z) / (z - a_k)`, pointwise.
pub fn remainder_update(
    g: &SampledSignal,
    a: Complex64,
    coeff: Complex64,
) -> Result<SampledSignal> {
    check_pole(a)?;
    let samples = g
        .samples()
        .iter()
        .zip(circle_points(g.len()))
        .map(|(&v, z)| (v - coeff * kernel_at(a, z)) / blaschke_at(a, z))
        .collect();
    SampledSignal::new(samples)
}

fn compute_field(
    g: &SampledSignal,
    grid: &ParameterGrid,
    options: &DecomposeOptions,
) -> Result<InnerProductField> {
    match options.engine {
        Engine::Fft => {
            let spectrum = spectral_coefficients(g);
            if options.parallel {
                inner_product_field_parallel(&spectrum, grid)
            } else {
                inner_product_field(&spectrum, grid)
            }
        }
        Engine::Direct => oracle::field_direct(g, grid),
    }
}

fn origin_coefficient(g: &SampledSignal, engine: Engine) -> Result<Complex64> {
    match engine {
        Engine::Fft => Ok(spectral_coefficients(g).as_slice()[0] / g.len() as f64),
        Engine::Direct => oracle::inner_product_direct(g, &ParameterPoint::origin(g.len())),
    }
}

/// Runs the greedy decomposition of `g` over `grid`.
///
/// An all-zero signal yields an empty decomposition. The loop also stops early
/// when the remainder vanishes exactly or falls under the energy threshold.
pub fn decompose(
    g: &SampledSignal,
    grid: &ParameterGrid,
    options: &DecomposeOptions,
) -> Result<Decomposition> {
    let n = g.len();
    if grid.angular_count() != n {
        return Err(AfdError::Domain(format!(
            "grid has {} angles but the signal has {n} samples",
            grid.angular_count()
        )));
    }
    if options.max_terms == 0 {
        return Err(AfdError::Domain("max_terms must be at least 1".into()));
    }
    if let Some(t) = options.energy_threshold {
        if t.is_nan() || t < 0.0 {
            return Err(AfdError::Domain(format!(
                "energy threshold {t} must be >= 0"
            )));
        }
    }

    let initial_energy = discrete_energy(g);
    let mut steps = Vec::new();
    let mut remainder = g.clone();
    let mut residual = initial_energy;

    while steps.len() < options.max_terms && residual > 0.0 {
        if let Some(t) = options.energy_threshold {
            if residual / initial_energy <= t {
                break;
            }
        }
        let (pole, radius_index, coeff) =
            if steps.is_empty() && options.first_pole == FirstPole::Origin {
                let coeff = origin_coefficient(&remainder, options.engine)?;
                (ParameterPoint::origin(n), None, coeff)
            } else {
                let field = compute_field(&remainder, grid, options)?;
                let Selection {
                    radius_index,
                    point,
                    value,
                } = maximal_selection(&field, grid)?;
                (point, Some(radius_index), value)
            };
        remainder = remainder_update(&remainder, pole.value(), coeff)?;
        residual = discrete_energy(&remainder);
        steps.push(DecompositionStep {
            pole,
            radius_index,
            coeff,
            residual_energy: residual,
        });
    }

    Ok(Decomposition {
        steps,
        grid: grid.clone(),
        n_samples: n,
        initial_energy,
        engine: options.engine,
        first_pole: options.first_pole,
        remainder,
    })
}

/// `S_1, ..., S_terms` in one pass.
fn partial_sums(d: &Decomposition, terms: usize) -> Result<Vec<SampledSignal>> {
    d.check_terms(terms)?;
    partial_sums_of(&d.steps[..terms], d.n_samples)
}

fn partial_sums_of(steps: &[DecompositionStep], n_samples: usize) -> Result<Vec<SampledSignal>> {
    let z = circle_points(n_samples);
    let mut sum = vec![Complex64::new(0.0, 0.0); n_samples];
    let mut product = vec![Complex64::new(1.0, 0.0); n_samples];
    let mut out = Vec::with_capacity(steps.len());
    for step in steps {
        let a = step.pole.value();
        check_pole(a)?;
        for ((s, p), &zm) in sum.iter_mut().zip(product.iter_mut()).zip(&z) {
            *s += step.coeff * kernel_at(a, zm) * *p;
            *p *= blaschke_at(a, zm);
        }
        out.push(SampledSignal::new(sum.clone())?);
    }
    Ok(out)
}

/// `S_n = sum_{k <= n} c_k B_{a_1..a_k}` on the sample grid.
pub fn reconstruct(d: &Decomposition, n: usize) -> Result<SampledSignal> {
    d.check_terms(n)?;
    reconstruct_steps(&d.steps[..n], d.n_samples)
}

/// Partial sum over an explicit list of steps, e.g. one read back from disk.
pub fn reconstruct_steps(steps: &[DecompositionStep], n_samples: usize) -> Result<SampledSignal> {
    if steps.is_empty() {
        return SampledSignal::zeros(n_samples);
    }
    Ok(partial_sums_of(steps, n_samples)?
        .pop()
        .expect("one partial sum per step"))
}

/// `||G - S||^2 / ||G||^2`.
pub fn relative_error(g: &SampledSignal, s: &SampledSignal) -> Result<f64> {
    if g.len() != s.len() {
        return Err(AfdError::Size(format!(
            "signal lengths differ: {} vs {}",
            g.len(),
            s.len()
        )));
    }
    let energy = discrete_energy(g);
    if energy == 0.0 {
        return Err(AfdError::Domain("reference signal has zero energy".into()));
    }
    let diff: f64 = g
        .samples()
        .iter()
        .zip(s.samples())
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
        / g.len() as f64;
    Ok(diff / energy)
}
