//! Independent reference computations shared by the integration suites.
#![allow(dead_code)]

use std::f64::consts::PI;

use afd_core::oracle::quadrature_inner_product;
use afd_core::{decompose, reconstruct, DecomposeOptions, Decomposition, SampledSignal};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn random_values(n: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect()
}

/// `sum_m x[m] e^{-i 2 pi m l / N}` evaluated term by term, for any integer `l`.
pub fn naive_coefficient(x: &[Complex64], l: i64) -> Complex64 {
    let n = x.len() as f64;
    x.iter()
        .enumerate()
        .map(|(m, &v)| v * Complex64::from_polar(1.0, -2.0 * PI * (m as f64) * (l as f64) / n))
        .sum()
}

pub fn naive_dft(x: &[Complex64]) -> Vec<Complex64> {
    (0..x.len() as i64)
        .map(|l| naive_coefficient(x, l))
        .collect()
}

/// `sqrt(1-r^2) / (N (1 - r^N)) sum_l r^l c_l e^{i 2 pi j l / N}` summed directly.
pub fn naive_weighted_inverse(c: &[Complex64], r: f64) -> Vec<Complex64> {
    let n = c.len();
    let scale = (1.0 - r * r).sqrt() / (n as f64 * (1.0 - r.powi(n as i32)));
    (0..n)
        .map(|j| {
            let s: Complex64 = c
                .iter()
                .enumerate()
                .map(|(l, &v)| {
                    v * r.powi(l as i32)
                        * Complex64::from_polar(1.0, 2.0 * PI * (j * l) as f64 / n as f64)
                })
                .sum();
            s * scale
        })
        .collect()
}

/// The two half-outputs built from explicit even and odd sums,
/// `scale * (E_j +/- W^{-j} O_j)` with `W = e^{-i 2 pi / N}`.
pub fn split_halves(c: &[Complex64], r: f64) -> Vec<Complex64> {
    let n = c.len();
    let half = n / 2;
    let scale = (1.0 - r * r).sqrt() / (n as f64 * (1.0 - r.powi(n as i32)));
    let w_inv = |e: f64| Complex64::from_polar(1.0, 2.0 * PI * e / n as f64);
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for j in 0..half {
        let even: Complex64 = (0..half)
            .map(|l| c[2 * l] * r.powi(2 * l as i32) * w_inv((2 * j * l) as f64))
            .sum();
        let odd: Complex64 = (0..half)
            .map(|l| c[2 * l + 1] * r.powi(2 * l as i32 + 1) * w_inv((2 * j * l) as f64))
            .sum::<Complex64>()
            * w_inv(j as f64);
        out[j] = scale * (even + odd);
        out[j + half] = scale * (even - odd);
    }
    out
}

pub fn max_rel(a: &[Complex64], b: &[Complex64]) -> f64 {
    let scale = b
        .iter()
        .map(|v| v.norm())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
        / scale
}

pub fn gram_deviation(basis: &[SampledSignal]) -> f64 {
    let mut worst: f64 = 0.0;
    for (p, bp) in basis.iter().enumerate() {
        for (q, bq) in basis.iter().enumerate() {
            let g = quadrature_inner_product(bp, bq).unwrap();
            let target = if p == q { 1.0 } else { 0.0 };
            worst = worst.max((g - Complex64::new(target, 0.0)).norm());
        }
    }
    worst
}

/// Max modulus of `G - S_n - G_{n+1} prod_{k<=n} B(a_k)` over every prefix,
/// where `G_{n+1}` is recomputed by a fresh run truncated at `n` terms.
pub fn telescoping_defect(g: &SampledSignal, d: &Decomposition, opts: &DecomposeOptions) -> f64 {
    let mut worst: f64 = 0.0;
    for n in 1..=d.steps.len() {
        let prefix = decompose(g, &d.grid, &opts.clone().with_terms(n)).unwrap();
        assert_eq!(prefix.steps[..], d.steps[..n]);
        let s = reconstruct(d, n).unwrap();
        let b = d.blaschke_product(n).unwrap();
        for m in 0..g.len() {
            let rebuilt = s.samples()[m] + prefix.remainder.samples()[m] * b.samples()[m];
            worst = worst.max((g.samples()[m] - rebuilt).norm());
        }
    }
    worst
}
