//! FFT evaluation of the inner-product field and maximal selection over it.

use num_complex::Complex64;
use rayon::prelude::*;

use super::grid::{ParameterGrid, ParameterPoint};
use super::signal::SampledSignal;
use crate::error::{AfdError, Result};
use crate::transform::{self, ComplexBuffer};

/// The unnormalized DFT `c_l = sum_m G[m] e^{-i 2 pi l m / N}` of a signal.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralCoefficients {
    coeffs: ComplexBuffer,
}

impl SpectralCoefficients {
    pub fn as_slice(&self) -> &[Complex64] {
        self.coeffs.as_slice()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn buffer(&self) -> &ComplexBuffer {
        &self.coeffs
    }
}

pub fn spectral_coefficients(g: &SampledSignal) -> SpectralCoefficients {
    SpectralCoefficients {
        coeffs: transform::dft_forward(&g.to_buffer()),
    }
}

/// `M x N` values of `<G, e_a>` on a parameter grid, stored row-major by radius.
#[derive(Debug, Clone, PartialEq)]
pub struct InnerProductField {
    values: Vec<Complex64>,
    radius_count: usize,
    angular_count: usize,
}

impl InnerProductField {
    pub fn new(values: Vec<Complex64>, radius_count: usize, angular_count: usize) -> Result<Self> {
        if values.len() != radius_count * angular_count {
            return Err(AfdError::Size(format!(
                "{} values do not form a {radius_count} x {angular_count} field",
                values.len()
            )));
        }
        Ok(Self {
            values,
            radius_count,
            angular_count,
        })
    }

    pub fn radius_count(&self) -> usize {
        self.radius_count
    }

    pub fn angular_count(&self) -> usize {
        self.angular_count
    }

    pub fn get(&self, radius_index: usize, angle_index: usize) -> Complex64 {
        self.values[radius_index * self.angular_count + angle_index]
    }

    pub fn row(&self, radius_index: usize) -> &[Complex64] {
        let start = radius_index * self.angular_count;
        &self.values[start..start + self.angular_count]
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Largest `|a - b| / |b|` over all entries.
    pub fn max_relative_diff(&self, reference: &Self) -> f64 {
        self.values
            .iter()
            .zip(&reference.values)
            .map(|(a, b)| {
                let d = (a - b).norm();
                if d == 0.0 {
                    0.0
                } else {
                    d / b.norm()
                }
            })
            .fold(0.0, f64::max)
    }
}

fn check_grid(c: &SpectralCoefficients, grid: &ParameterGrid) -> Result<()> {
    if grid.angular_count() != c.len() {
        return Err(AfdError::Size(format!(
            "grid has {} angles but the spectrum has {} bins",
            grid.angular_count(),
            c.len()
        )));
    }
    Ok(())
}

/// Row `s` is the weighted inverse transform of `c` at radius `r_s`.
pub fn inner_product_field(
    c: &SpectralCoefficients,
    grid: &ParameterGrid,
) -> Result<InnerProductField> {
    check_grid(c, grid)?;
    let n = c.len();
    let plan = transform::plan_for(n)?;
    let mut values = vec![Complex64::new(0.0, 0.0); grid.radius_count() * n];
    for (row, &r) in values.chunks_exact_mut(n).zip(grid.radii()) {
        plan.weighted_inverse_into(c.as_slice(), r, row);
    }
    InnerProductField::new(values, grid.radius_count(), n)
}

/// Same as [`inner_product_field`] with rows evaluated on the rayon pool.
///
/// Every row goes through the identical per-row kernel, so the result is
/// bit-identical to the sequential field.
pub fn inner_product_field_parallel(
    c: &SpectralCoefficients,
    grid: &ParameterGrid,
) -> Result<InnerProductField> {
    check_grid(c, grid)?;
    let n = c.len();
    let plan = transform::plan_for(n)?;
    let mut values = vec![Complex64::new(0.0, 0.0); grid.radius_count() * n];
    values
        .par_chunks_exact_mut(n)
        .zip(grid.radii().par_iter())
        .for_each(|(row, &r)| plan.weighted_inverse_into(c.as_slice(), r, row));
    InnerProductField::new(values, grid.radius_count(), n)
}

/// Outcome of a maximal selection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Selection {
    pub radius_index: usize,
    pub point: ParameterPoint,
    pub value: Complex64,
}

/// Entries whose `|field|^2` lies within this relative distance of the maximum
/// count as tied.
///
/// Signals with real Taylor coefficients have exactly symmetric fields under
/// `a -> conj(a)`, so ties are real and rounding alone must not decide them.
pub const TIE_RELATIVE_TOLERANCE: f64 = 1e-10;

/// Grid point maximizing `|field|^2`.
///
/// Among entries within [`TIE_RELATIVE_TOLERANCE`] of the maximum, the
/// smallest radius index wins, then the smallest angle index.
pub fn maximal_selection(field: &InnerProductField, grid: &ParameterGrid) -> Result<Selection> {
    if field.values.is_empty() {
        return Err(AfdError::Domain("cannot select from an empty field".into()));
    }
    if field.radius_count != grid.radius_count() || field.angular_count != grid.angular_count() {
        return Err(AfdError::Size("field shape does not match the grid".into()));
    }
    let peak = field
        .values
        .iter()
        .map(|v| v.norm_sqr())
        .fold(0.0, f64::max);
    let floor = peak * (1.0 - TIE_RELATIVE_TOLERANCE);
    let best = field
        .values
        .iter()
        .position(|v| v.norm_sqr() >= floor)
        .expect("the peak itself clears the floor");
    let (s, j) = (best / field.angular_count, best % field.angular_count);
    Ok(Selection {
        radius_index: s,
        point: grid.point(s, j),
        value: field.values[best],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn constant_signal_rows_follow_closed_form() {
        let n = 64;
        let g = SampledSignal::new(vec![c(1.0, 0.0); n]).unwrap();
        let grid = ParameterGrid::new(vec![0.0, 0.3, 0.7], n).unwrap();
        let field = inner_product_field(&spectral_coefficients(&g), &grid).unwrap();
        for (s, &r) in grid.radii().iter().enumerate() {
            let want = (1.0 - r * r).sqrt() / (1.0 - r.powi(n as i32));
            for v in field.row(s) {
                assert!((v - c(want, 0.0)).norm() < 1e-13);
            }
        }
        let sel = maximal_selection(&field, &grid).unwrap();
        assert_eq!((sel.radius_index, sel.point.angle_index), (0, 0));
        assert_eq!(sel.point.value(), c(0.0, 0.0));
    }

    #[test]
    fn zero_radius_row_is_mean() {
        let g = SampledSignal::new((0..8).map(|k| c(k as f64, 1.0)).collect()).unwrap();
        let grid = ParameterGrid::new(vec![0.0], 8).unwrap();
        let field = inner_product_field(&spectral_coefficients(&g), &grid).unwrap();
        for v in field.row(0) {
            assert!((v - c(3.5, 1.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn tie_break_prefers_smaller_radius_index() {
        let grid = ParameterGrid::new(vec![0.1, 0.2, 0.3], 4).unwrap();
        let mut values = vec![c(0.0, 0.0); 12];
        values[4 + 3] = c(2.0, 0.0);
        values[8] = c(0.0, 2.0);
        let field = InnerProductField::new(values, 3, 4).unwrap();
        let sel = maximal_selection(&field, &grid).unwrap();
        assert_eq!((sel.radius_index, sel.point.angle_index), (1, 3));
        assert_eq!(sel.value, c(2.0, 0.0));
    }

    #[test]
    fn near_ties_within_tolerance_go_to_first_index() {
        let grid = ParameterGrid::new(vec![0.1, 0.2], 4).unwrap();
        let mut values = vec![c(0.0, 0.0); 8];
        values[2] = c(1.0, 0.0);
        values[5] = c(1.0 + 1e-13, 0.0);
        let field = InnerProductField::new(values.clone(), 2, 4).unwrap();
        let sel = maximal_selection(&field, &grid).unwrap();
        assert_eq!((sel.radius_index, sel.point.angle_index), (0, 2));
        values[5] = c(1.0 + 1e-6, 0.0);
        let field = InnerProductField::new(values, 2, 4).unwrap();
        let sel = maximal_selection(&field, &grid).unwrap();
        assert_eq!((sel.radius_index, sel.point.angle_index), (1, 1));
    }

    #[test]
    fn rejects_mismatched_shapes() {
        let g = SampledSignal::new(vec![c(1.0, 0.0); 16]).unwrap();
        let grid = ParameterGrid::new(vec![0.1], 8).unwrap();
        assert!(matches!(
            inner_product_field(&spectral_coefficients(&g), &grid),
            Err(AfdError::Size(_))
        ));
        assert!(InnerProductField::new(vec![c(0.0, 0.0); 5], 2, 4).is_err());
        let empty = InnerProductField::new(vec![], 0, 8).unwrap();
        assert!(matches!(
            maximal_selection(&empty, &grid),
            Err(AfdError::Domain(_))
        ));
    }

    #[test]
    fn parallel_field_is_bit_identical() {
        let n = 256;
        let g = SampledSignal::from_fn(n, |z| z * z / (1.0 - 0.4 * z) + c(0.1, -0.3)).unwrap();
        let grid = ParameterGrid::standard(n).unwrap();
        let spec = spectral_coefficients(&g);
        let seq = inner_product_field(&spec, &grid).unwrap();
        let par = inner_product_field_parallel(&spec, &grid).unwrap();
        assert_eq!(seq, par);
    }
}
