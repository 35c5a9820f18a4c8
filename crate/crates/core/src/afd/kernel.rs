//! Szegő kernels, Blaschke factors and the Takenaka–Malmquist basis sampled
//! on the unit circle.

use num_complex::Complex64;

use super::signal::{circle_points, SampledSignal};
use crate::error::{AfdError, Result};

pub(crate) fn check_pole(a: Complex64) -> Result<()> {
    if !a.is_finite() || a.norm() >= 1.0 {
        return Err(AfdError::Domain(format!(
            "pole {a} is not strictly inside the unit disc"
        )));
    }
    Ok(())
}

#[inline]
pub(crate) fn kernel_at(a: Complex64, z: Complex64) -> Complex64 {
    (1.0 - a.norm_sqr()).sqrt() / (1.0 - a.conj() * z)
}

#[inline]
pub(crate) fn blaschke_at(a: Complex64, z: Complex64) -> Complex64 {
    (z - a) / (1.0 - a.conj() * z)
}

/// Samples of the normalized Szegő kernel `e_a(z) = sqrt(1 - |a|^2) / (1 - conj(a) z)`.
pub fn kernel_samples(a: Complex64, n: usize) -> Result<SampledSignal> {
    check_pole(a)?;
    SampledSignal::new(
        circle_points(n)
            .into_iter()
            .map(|z| kernel_at(a, z))
            .collect(),
    )
}

/// Samples of the Blaschke factor `(z - a) / (1 - conj(a) z)`; unimodular on the circle.
pub fn blaschke_samples(a: Complex64, n: usize) -> Result<SampledSignal> {
    check_pole(a)?;
    SampledSignal::new(
        circle_points(n)
            .into_iter()
            .map(|z| blaschke_at(a, z))
            .collect(),
    )
}

/// Samples of `B_n = e_{a_n} * prod_{l<n} (z - a_l) / (1 - conj(a_l) z)`.
///
/// Normalized to unit norm under the `(1/N)`-weighted inner product.
pub fn tm_basis_samples(poles: &[Complex64], n: usize) -> Result<SampledSignal> {
    let (&last, rest) = poles
        .split_last()
        .ok_or_else(|| AfdError::Domain("basis function needs at least one pole".into()))?;
    for &a in poles {
        check_pole(a)?;
    }
    SampledSignal::new(
        circle_points(n)
            .into_iter()
            .map(|z| {
                rest.iter()
                    .fold(kernel_at(last, z), |acc, &a| acc * blaschke_at(a, z))
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::afd::signal::discrete_energy;

    #[test]
    fn kernel_examples() {
        let e0 = kernel_samples(Complex64::new(0.0, 0.0), 16).unwrap();
        assert!(e0.samples().iter().all(|&v| v == Complex64::new(1.0, 0.0)));
        let e = kernel_samples(Complex64::new(0.5, 0.0), 16).unwrap();
        assert!((e.samples()[0].re - 1.732_051).abs() < 1e-6);
        let e = kernel_samples(Complex64::from_polar(0.8, 1.1), 256).unwrap();
        assert!((discrete_energy(&e) - 1.0).abs() < 1e-12);
        assert!(kernel_samples(Complex64::new(0.6, 0.8), 16).is_err());
    }

    #[test]
    fn blaschke_examples() {
        let b = blaschke_samples(Complex64::new(0.0, 0.0), 8).unwrap();
        for (v, z) in b.samples().iter().zip(circle_points(8)) {
            assert!((v - z).norm() < 1e-16);
        }
        let b = blaschke_samples(Complex64::new(0.5, 0.0), 8).unwrap();
        assert!((b.samples()[0] - Complex64::new(1.0, 0.0)).norm() < 1e-16);
        assert!(blaschke_samples(Complex64::new(1.0, 0.0), 8).is_err());
    }

    #[test]
    fn tm_basis_examples() {
        let zero = Complex64::new(0.0, 0.0);
        let b1 = tm_basis_samples(&[zero], 8).unwrap();
        assert!(b1.samples().iter().all(|&v| v == Complex64::new(1.0, 0.0)));
        let b2 = tm_basis_samples(&[zero, zero], 8).unwrap();
        for (v, z) in b2.samples().iter().zip(circle_points(8)) {
            assert!((v - z).norm() < 1e-15);
        }
        assert!(tm_basis_samples(&[], 8).is_err());
        assert!(tm_basis_samples(&[zero, Complex64::new(0.0, 1.0)], 8).is_err());
    }
}
