//! Radix-2 transforms on power-of-two complex buffers.
//!
//! The forward transform is the unnormalized DFT
//! `c[l] = sum_m x[m] e^{-i 2 pi m l / N}`. The weighted inverse evaluates,
//! for a radius `0 <= r < 1`,
//!
//! ```text
//! out[j] = sqrt(1 - r^2) / (N (1 - r^N)) * sum_l r^l c[l] e^{+i 2 pi j l / N}
//! ```
//!
//! which is the discrete Szegő-kernel inner product on the circle of radius
//! `r` once `c` holds the spectrum of a sampled signal.
//!
//! Twiddle tables are built once per size and shared through a global cache,
//! so repeated transforms of the same length only pay for the butterflies.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, OnceLock, RwLock};

use num_complex::Complex64;

use crate::error::{AfdError, Result};

/// A complex buffer whose length is an exact power of two, `N >= 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexBuffer {
    values: Vec<Complex64>,
    log2_len: u32,
}

impl ComplexBuffer {
    pub fn new(values: Vec<Complex64>) -> Result<Self> {
        let log2_len = log2_exact(values.len())?;
        Ok(Self { values, log2_len })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn log2_len(&self) -> u32 {
        self.log2_len
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.values
    }
}

/// Returns `K` with `n = 2^K`, rejecting anything that is not a power of two `>= 2`.
pub fn log2_exact(n: usize) -> Result<u32> {
    if n < 2 || !n.is_power_of_two() {
        return Err(AfdError::Size(format!(
            "length {n} is not a power of two >= 2"
        )));
    }
    Ok(n.trailing_zeros())
}

/// Reverses the lowest `bits` bits of `index`.
#[inline]
pub fn bit_reverse(index: usize, bits: u32) -> usize {
    if bits == 0 {
        return 0;
    }
    index.reverse_bits() >> (usize::BITS - bits)
}

/// Precomputed tables for one transform size.
#[derive(Debug)]
pub struct Radix2Plan {
    len: usize,
    log2_len: u32,
    /// Forward twiddles stage by stage: the stage of half-width `h` holds
    /// `e^{-i pi k / h}`, `k < h`, at offsets `h - 1 .. 2h - 1`.
    forward_twiddles: Vec<Complex64>,
    /// Conjugates of `forward_twiddles`, same layout.
    inverse_twiddles: Vec<Complex64>,
    bitrev: Vec<usize>,
}

impl Radix2Plan {
    pub fn new(len: usize) -> Result<Self> {
        let log2_len = log2_exact(len)?;
        let mut forward_twiddles = Vec::with_capacity(len - 1);
        let mut half = 1;
        while half < len {
            // Reuse the full-length angles so every stage sees the same rounding.
            let stride = len / (2 * half);
            forward_twiddles.extend(
                (0..half).map(|k| {
                    Complex64::from_polar(1.0, -2.0 * PI * (k * stride) as f64 / len as f64)
                }),
            );
            half *= 2;
        }
        let inverse_twiddles = forward_twiddles.iter().map(|w| w.conj()).collect();
        let bitrev = (0..len).map(|j| bit_reverse(j, log2_len)).collect();
        Ok(Self {
            len,
            log2_len,
            forward_twiddles,
            inverse_twiddles,
            bitrev,
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn log2_len(&self) -> u32 {
        self.log2_len
    }

    fn check(&self, data: &[Complex64]) {
        assert_eq!(
            data.len(),
            self.len,
            "buffer length does not match plan length"
        );
    }

    /// In-place bit-reversal permutation.
    pub fn permute(&self, data: &mut [Complex64]) {
        self.check(data);
        for (j, &k) in self.bitrev.iter().enumerate() {
            if j < k {
                data.swap(j, k);
            }
        }
    }

    /// Butterfly stages on bit-reversed data.
    ///
    /// Stages narrower than [`CACHE_BLOCK`] run block by block so each block
    /// stays in L1 across those stages; the wider stages then sweep the full
    /// buffer two at a time. The arithmetic per element is the same either way.
    fn butterflies(&self, data: &mut [Complex64], inverse: bool) {
        let table = if inverse {
            &self.inverse_twiddles
        } else {
            &self.forward_twiddles
        };
        let block = CACHE_BLOCK.min(self.len);
        for chunk in data.chunks_exact_mut(block) {
            for pair in chunk.chunks_exact_mut(2) {
                let (a, b) = (pair[0], pair[1]);
                pair[0] = a + b;
                pair[1] = a - b;
            }
            let mut half = 2;
            while half < block {
                stage(chunk, &table[half - 1..2 * half - 1]);
                half *= 2;
            }
        }
        let mut half = block;
        while 2 * half < self.len {
            double_stage(
                data,
                &table[half - 1..2 * half - 1],
                &table[2 * half - 1..4 * half - 1],
            );
            half *= 4;
        }
        if half < self.len {
            stage(data, &table[half - 1..2 * half - 1]);
        }
    }

    /// In-place unnormalized forward DFT.
    pub fn forward_in_place(&self, data: &mut [Complex64]) {
        self.permute(data);
        self.butterflies(data, false);
    }

    /// In-place unnormalized inverse DFT (`e^{+i...}` kernel, no `1/N`).
    pub fn inverse_in_place(&self, data: &mut [Complex64]) {
        self.permute(data);
        self.butterflies(data, true);
    }

    /// Writes the weighted inverse of `coeffs` at radius `r` into `out`.
    ///
    /// `r` must already be validated to lie in `[0, 1)`.
    pub fn weighted_inverse_into(&self, coeffs: &[Complex64], r: f64, out: &mut [Complex64]) {
        self.check(coeffs);
        self.check(out);
        // Weighted coefficients go straight to their bit-reversed slots.
        // Weights below WEIGHT_FLOOR are flushed to zero: they sit far under
        // the rounding of any output, and subnormal products are very slow.
        let mut power = 1.0;
        for (&c, &k) in coeffs.iter().zip(&self.bitrev) {
            out[k] = c * power;
            power *= r;
            if power < WEIGHT_FLOOR {
                power = 0.0;
            }
        }
        let r_n = r.powi(self.len as i32);
        let scale = (1.0 - r * r).sqrt() / (self.len as f64 * (1.0 - r_n));
        self.butterflies(out, true);
        for o in out.iter_mut() {
            *o *= scale;
        }
    }
}

/// Radial weights `r^l` below this are treated as zero.
const WEIGHT_FLOOR: f64 = 1e-250;

/// Elements per block for the narrow butterfly stages (16 KiB of `Complex64`).
const CACHE_BLOCK: usize = 1024;

#[inline]
fn stage(data: &mut [Complex64], twiddles: &[Complex64]) {
    let half = twiddles.len();
    for block in data.chunks_exact_mut(2 * half) {
        let (lo, hi) = block.split_at_mut(half);
        for ((a, b), &w) in lo.iter_mut().zip(hi.iter_mut()).zip(twiddles) {
            let t = *b * w;
            *b = *a - t;
            *a += t;
        }
    }
}

/// Stages of half-width `h` and `2h` fused into one sweep over blocks of `4h`.
#[inline]
fn double_stage(data: &mut [Complex64], inner: &[Complex64], outer: &[Complex64]) {
    let half = inner.len();
    let (outer_lo, outer_hi) = outer.split_at(half);
    for block in data.chunks_exact_mut(4 * half) {
        let (left, right) = block.split_at_mut(2 * half);
        let (q0, q1) = left.split_at_mut(half);
        let (q2, q3) = right.split_at_mut(half);
        for k in 0..half {
            let w = inner[k];
            let t1 = q1[k] * w;
            let t3 = q3[k] * w;
            let (a0, a1) = (q0[k] + t1, q0[k] - t1);
            let (a2, a3) = (q2[k] + t3, q2[k] - t3);
            let u = a2 * outer_lo[k];
            let v = a3 * outer_hi[k];
            q0[k] = a0 + u;
            q2[k] = a0 - u;
            q1[k] = a1 + v;
            q3[k] = a1 - v;
        }
    }
}

fn plan_cache() -> &'static RwLock<HashMap<usize, Arc<Radix2Plan>>> {
    static CACHE: OnceLock<RwLock<HashMap<usize, Arc<Radix2Plan>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Returns the shared plan for `len`, building it on first use.
pub fn plan_for(len: usize) -> Result<Arc<Radix2Plan>> {
    if let Some(plan) = plan_cache().read().expect("plan cache poisoned").get(&len) {
        return Ok(Arc::clone(plan));
    }
    let plan = Arc::new(Radix2Plan::new(len)?);
    let mut cache = plan_cache().write().expect("plan cache poisoned");
    Ok(Arc::clone(cache.entry(len).or_insert(plan)))
}

fn check_radius(r: f64) -> Result<()> {
    if !(0.0..1.0).contains(&r) {
        return Err(AfdError::Domain(format!("radius {r} is outside [0, 1)")));
    }
    Ok(())
}

/// `output[j] = x[bitrev(j)]`.
pub fn bit_reverse_permute(x: &ComplexBuffer) -> ComplexBuffer {
    let bits = x.log2_len;
    let values = (0..x.len())
        .map(|j| x.values[bit_reverse(j, bits)])
        .collect();
    ComplexBuffer {
        values,
        log2_len: bits,
    }
}

/// Unnormalized forward DFT.
pub fn dft_forward(x: &ComplexBuffer) -> ComplexBuffer {
    let plan = plan_for(x.len()).expect("buffer length is a power of two");
    let mut values = x.values.clone();
    plan.forward_in_place(&mut values);
    ComplexBuffer {
        values,
        log2_len: x.log2_len,
    }
}

/// Inverse DFT with the `1/N` normalization, so `dft_inverse(dft_forward(x)) == x`.
pub fn dft_inverse(c: &ComplexBuffer) -> ComplexBuffer {
    let plan = plan_for(c.len()).expect("buffer length is a power of two");
    let mut values = c.values.clone();
    plan.inverse_in_place(&mut values);
    let scale = 1.0 / c.len() as f64;
    for v in &mut values {
        *v *= scale;
    }
    ComplexBuffer {
        values,
        log2_len: c.log2_len,
    }
}

/// Weighted inverse via the iterative in-place transform.
pub fn weighted_inverse(c: &ComplexBuffer, r: f64) -> Result<ComplexBuffer> {
    check_radius(r)?;
    let plan = plan_for(c.len())?;
    let mut values = vec![Complex64::new(0.0, 0.0); c.len()];
    plan.weighted_inverse_into(&c.values, r, &mut values);
    Ok(ComplexBuffer {
        values,
        log2_len: c.log2_len,
    })
}

/// Weighted inverse via explicit recursive even/odd splitting.
///
/// Each level combines the half-length transforms of the even and odd
/// weighted coefficients as `E[j] +/- e^{+i 2 pi j / N} O[j]` for the outputs
/// `j` and `j + N/2`. Slower than [`weighted_inverse`]; kept as a second route
/// to the same values.
pub fn weighted_inverse_split(c: &ComplexBuffer, r: f64) -> Result<ComplexBuffer> {
    check_radius(r)?;
    let n = c.len();
    let mut power = 1.0;
    let weighted: Vec<Complex64> = c
        .values
        .iter()
        .map(|&v| {
            let w = v * power;
            power *= r;
            w
        })
        .collect();
    let scale = (1.0 - r * r).sqrt() / (n as f64 * (1.0 - power));
    let values = split_inverse(&weighted)
        .into_iter()
        .map(|v| v * scale)
        .collect();
    Ok(ComplexBuffer {
        values,
        log2_len: c.log2_len,
    })
}

fn split_inverse(f: &[Complex64]) -> Vec<Complex64> {
    let n = f.len();
    if n == 1 {
        return vec![f[0]];
    }
    let even: Vec<Complex64> = f.iter().step_by(2).copied().collect();
    let odd: Vec<Complex64> = f.iter().skip(1).step_by(2).copied().collect();
    let even = split_inverse(&even);
    let odd = split_inverse(&odd);
    let half = n / 2;
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for j in 0..half {
        let w = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / n as f64);
        let t = w * odd[j];
        out[j] = even[j] + t;
        out[j + half] = even[j] - t;
    }
    out
}
