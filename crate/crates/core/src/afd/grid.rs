use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{AfdError, Result};

/// Radii above this degrade the `1/(1 - r^N)` factor and the aliasing bound.
pub const RADIUS_WARN_THRESHOLD: f64 = 0.95;

/// A candidate pole `a = r e^{i 2 pi j / N}` strictly inside the unit disc.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParameterPoint {
    pub radius: f64,
    pub angle_index: usize,
    pub angular_count: usize,
}

impl ParameterPoint {
    pub fn new(radius: f64, angle_index: usize, angular_count: usize) -> Result<Self> {
        if !(0.0..1.0).contains(&radius) {
            return Err(AfdError::Domain(format!(
                "pole radius {radius} must lie in [0, 1)"
            )));
        }
        if angular_count == 0 || angle_index >= angular_count {
            return Err(AfdError::Range(format!(
                "angle index {angle_index} out of range for {angular_count} angles"
            )));
        }
        Ok(Self {
            radius,
            angle_index,
            angular_count,
        })
    }

    pub fn origin(angular_count: usize) -> Self {
        Self {
            radius: 0.0,
            angle_index: 0,
            angular_count,
        }
    }

    pub fn value(&self) -> Complex64 {
        let theta = 2.0 * PI * self.angle_index as f64 / self.angular_count as f64;
        Complex64::from_polar(self.radius, theta)
    }
}

/// Polar grid of candidate poles: `M` radii times `N` equispaced angles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParameterGrid {
    radii: Vec<f64>,
    angular_count: usize,
}

impl ParameterGrid {
    pub fn new(radii: Vec<f64>, angular_count: usize) -> Result<Self> {
        if radii.is_empty() {
            return Err(AfdError::Domain("grid needs at least one radius".into()));
        }
        if !angular_count.is_power_of_two() || angular_count < 2 {
            return Err(AfdError::Size(format!(
                "angular count {angular_count} must be a power of two"
            )));
        }
        for &r in &radii {
            if !(0.0..1.0).contains(&r) {
                return Err(AfdError::Domain(format!("radius {r} must lie in [0, 1)")));
            }
        }
        if radii.windows(2).any(|w| w[0] >= w[1]) {
            return Err(AfdError::Domain("radii must be strictly increasing".into()));
        }
        if let Some(&r) = radii.last().filter(|&&r| r > RADIUS_WARN_THRESHOLD) {
            log::warn!("largest radius {r} exceeds {RADIUS_WARN_THRESHOLD}; field accuracy degrades near the circle");
        }
        Ok(Self {
            radii,
            angular_count,
        })
    }

    /// Radii `0.0, 0.1, ..., 0.8`.
    pub fn standard(angular_count: usize) -> Result<Self> {
        Self::from_range(0.0, 0.1, 0.8, angular_count)
    }

    /// Radii `r_s = s / (M + 1)` for `s = 1..=M`.
    pub fn uniform(m: usize, angular_count: usize) -> Result<Self> {
        let radii = (1..=m).map(|s| s as f64 / (m + 1) as f64).collect();
        Self::new(radii, angular_count)
    }

    /// Arithmetic range `start, start + step, ...` up to and including `end`.
    ///
    /// Each radius is `start + i * step`, so values do not accumulate error.
    pub fn from_range(start: f64, step: f64, end: f64, angular_count: usize) -> Result<Self> {
        if step.is_nan() || step <= 0.0 || !start.is_finite() || !end.is_finite() {
            return Err(AfdError::Domain(format!(
                "invalid radius range {start}:{step}:{end}"
            )));
        }
        let count = ((end - start) / step + 1e-9).floor();
        if count < 0.0 {
            return Err(AfdError::Domain(format!(
                "empty radius range {start}:{step}:{end}"
            )));
        }
        let radii = (0..=count as usize)
            .map(|i| start + i as f64 * step)
            .collect();
        Self::new(radii, angular_count)
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn radius_count(&self) -> usize {
        self.radii.len()
    }

    pub fn angular_count(&self) -> usize {
        self.angular_count
    }

    pub fn point(&self, radius_index: usize, angle_index: usize) -> ParameterPoint {
        ParameterPoint {
            radius: self.radii[radius_index],
            angle_index,
            angular_count: self.angular_count,
        }
    }
}
