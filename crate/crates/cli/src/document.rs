//! On-disk form of a decomposition.

use std::io::{self, Write};
use std::path::Path;

use afd_core::{
    AfdError, Decomposition, DecompositionStep, Engine, FirstPole, ParameterGrid, ParameterPoint,
};
use anyhow::{bail, Context};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridDocument {
    pub radii: Vec<f64>,
    pub angular_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepDocument {
    pub k: usize,
    pub a_radius: f64,
    pub a_angle_index: usize,
    pub a_re: f64,
    pub a_im: f64,
    pub coeff_re: f64,
    pub coeff_im: f64,
    pub residual_energy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionDocument {
    pub schema_version: u32,
    pub n_samples: usize,
    pub grid: GridDocument,
    pub engine: Engine,
    pub first_pole: FirstPole,
    pub initial_energy: f64,
    pub steps: Vec<StepDocument>,
    /// `relative_errors[n - 1]` is the relative error of the `n`-term sum.
    pub relative_errors: Vec<f64>,
}

impl DecompositionDocument {
    pub fn from_decomposition(d: &Decomposition, relative_errors: Vec<f64>) -> Self {
        let steps = d
            .steps
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let a = s.pole.value();
                StepDocument {
                    k: i + 1,
                    a_radius: s.pole.radius,
                    a_angle_index: s.pole.angle_index,
                    a_re: a.re,
                    a_im: a.im,
                    coeff_re: s.coeff.re,
                    coeff_im: s.coeff.im,
                    residual_energy: s.residual_energy,
                }
            })
            .collect();
        Self {
            schema_version: SCHEMA_VERSION,
            n_samples: d.n_samples,
            grid: GridDocument {
                radii: d.grid.radii().to_vec(),
                angular_count: d.grid.angular_count(),
            },
            engine: d.engine,
            first_pole: d.first_pole,
            initial_energy: d.initial_energy,
            steps,
            relative_errors,
        }
    }

    /// Checks the structural invariants of a document read from disk.
    pub fn validate(&self) -> anyhow::Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            bail!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                self.schema_version
            );
        }
        ParameterGrid::new(self.grid.radii.clone(), self.grid.angular_count)?;
        if self.grid.angular_count != self.n_samples {
            bail!(
                "grid has {} angles but n_samples is {}",
                self.grid.angular_count,
                self.n_samples
            );
        }
        if self.relative_errors.len() != self.steps.len() {
            bail!(
                "{} relative errors for {} steps",
                self.relative_errors.len(),
                self.steps.len()
            );
        }
        let mut previous = self.initial_energy;
        for (i, step) in self.steps.iter().enumerate() {
            if step.k != i + 1 {
                bail!("step {} is labelled k = {}", i + 1, step.k);
            }
            let a = ParameterPoint::new(step.a_radius, step.a_angle_index, self.n_samples)?.value();
            if (a - Complex64::new(step.a_re, step.a_im)).norm() > 1e-12 {
                bail!(
                    "step {}: a_re/a_im disagree with a_radius/a_angle_index",
                    step.k
                );
            }
            if step.residual_energy > previous {
                bail!(
                    "step {}: residual energy {} exceeds the previous {}",
                    step.k,
                    step.residual_energy,
                    previous
                );
            }
            previous = step.residual_energy;
        }
        Ok(())
    }

    pub fn steps(&self) -> Result<Vec<DecompositionStep>, AfdError> {
        let grid = &self.grid.radii;
        self.steps
            .iter()
            .map(|s| {
                Ok(DecompositionStep {
                    pole: ParameterPoint::new(s.a_radius, s.a_angle_index, self.n_samples)?,
                    radius_index: if s.k == 1 && self.first_pole == FirstPole::Origin {
                        None
                    } else {
                        grid.iter().position(|&r| r == s.a_radius)
                    },
                    coeff: Complex64::new(s.coeff_re, s.coeff_im),
                    residual_energy: s.residual_energy,
                })
            })
            .collect()
    }

    pub fn to_writer<W: Write>(&self, writer: W) -> io::Result<()> {
        let mut ser = serde_json::Serializer::with_formatter(writer, FixedDigits::default());
        self.serialize(&mut ser).map_err(io::Error::other)?;
        let mut writer = ser.into_inner();
        writer.write_all(b"\n")
    }

    pub fn write(&self, path: &Path) -> anyhow::Result<()> {
        let file = std::fs::File::create(path)
            .with_context(|| format!("cannot create {}", path.display()))?;
        let mut out = io::BufWriter::new(file);
        self.to_writer(&mut out)?;
        out.flush()?;
        Ok(())
    }

    pub fn read(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read {}", path.display()))?;
        let doc: Self = serde_json::from_str(&text)
            .with_context(|| format!("{} is not a decomposition document", path.display()))?;
        doc.validate()
            .with_context(|| format!("invalid document {}", path.display()))?;
        Ok(doc)
    }
}

/// Pretty JSON with every float written as `d.dddddddddddddddde±x`.
///
/// Seventeen significant digits round-trip any `f64`, and a fixed layout
/// keeps output byte-identical across runs.
#[derive(Default)]
struct FixedDigits(PrettyFormatter<'static>);

impl Formatter for FixedDigits {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}
