//! Direct quadrature of the Szegő inner product, `O(N)` per grid point.
//!
//! This is the slow reference engine. It never touches the transform module.

use num_complex::Complex64;

use crate::afd::field::InnerProductField;
use crate::afd::grid::{ParameterGrid, ParameterPoint};
use crate::afd::signal::{circle_points, SampledSignal};
use crate::error::{AfdError, Result};

fn direct_sum(
    samples: &[Complex64],
    conj_roots: &[Complex64],
    a: Complex64,
    radius: f64,
) -> Complex64 {
    let sum: Complex64 = samples
        .iter()
        .zip(conj_roots)
        .map(|(&g, &w)| g / (1.0 - a * w))
        .sum();
    sum * ((1.0 - radius * radius).sqrt() / samples.len() as f64)
}

/// `(sqrt(1 - r^2) / N) sum_m G[m] / (1 - a e^{-i 2 pi m / N})`.
pub fn inner_product_direct(g: &SampledSignal, a: &ParameterPoint) -> Result<Complex64> {
    if !(0.0..1.0).contains(&a.radius) {
        return Err(AfdError::Domain(format!(
            "pole radius {} must lie in [0, 1)",
            a.radius
        )));
    }
    let conj_roots: Vec<Complex64> = circle_points(g.len()).iter().map(|z| z.conj()).collect();
    Ok(direct_sum(g.samples(), &conj_roots, a.value(), a.radius))
}

/// The full field by direct summation at every grid point, `O(M N^2)`.
pub fn field_direct(g: &SampledSignal, grid: &ParameterGrid) -> Result<InnerProductField> {
    let n = g.len();
    if grid.angular_count() != n {
        return Err(AfdError::Size(format!(
            "grid has {} angles but the signal has {n} samples",
            grid.angular_count()
        )));
    }
    let conj_roots: Vec<Complex64> = circle_points(n).iter().map(|z| z.conj()).collect();
    let mut values = Vec::with_capacity(grid.radius_count() * n);
    for s in 0..grid.radius_count() {
        for j in 0..n {
            let p = grid.point(s, j);
            values.push(direct_sum(g.samples(), &conj_roots, p.value(), p.radius));
        }
    }
    InnerProductField::new(values, grid.radius_count(), n)
}

/// `(1/N) sum_m G[m] conj(F[m])`.
pub fn quadrature_inner_product(g: &SampledSignal, f: &SampledSignal) -> Result<Complex64> {
    if g.len() != f.len() {
        return Err(AfdError::Size(format!(
            "signal lengths differ: {} vs {}",
            g.len(),
            f.len()
        )));
    }
    let sum: Complex64 = g
        .samples()
        .iter()
        .zip(f.samples())
        .map(|(a, b)| a * b.conj())
        .sum();
    Ok(sum / g.len() as f64)
}
