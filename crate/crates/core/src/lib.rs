//! Adaptive Fourier decomposition (Core-AFD) of sampled Hardy-space signals.
//!
//! A signal is given by `N = 2^K` samples on the unit circle. Each
//! decomposition step evaluates the discrete Szegő-kernel inner product
//! `<G_k, e_a>` over a polar grid of candidate poles, picks the maximizer,
//! and divides the remainder by the Blaschke factor of the chosen pole.
//!
//! Two engines evaluate the inner-product field:
//!
//! - [`Engine::Fft`] computes one spectrum per step and then one weighted
//!   inverse radix-2 transform per radius, `O(M N log N)`.
//! - [`Engine::Direct`] sums the quadrature at every grid point, `O(M N^2)`.
//!   It lives in [`oracle`] and doubles as the correctness reference.
//!
//! ```
//! use afd_core::{decompose, signals, DecomposeOptions, ParameterGrid};
//!
//! let g = signals::synth_f1(256).unwrap();
//! let grid = ParameterGrid::standard(256).unwrap();
//! let d = decompose(&g, &grid, &DecomposeOptions::default()).unwrap();
//! assert_eq!(d.steps.len(), 10);
//! ```

pub mod afd;
pub mod bench;
pub mod error;
pub mod oracle;
pub mod signals;
pub mod transform;

pub use afd::decompose::{
    decompose, reconstruct, reconstruct_steps, relative_error, remainder_update, DecomposeOptions,
    Decomposition, DecompositionStep, Engine, FirstPole,
};
pub use afd::field::{
    inner_product_field, inner_product_field_parallel, maximal_selection, spectral_coefficients,
    InnerProductField, SpectralCoefficients,
};
pub use afd::grid::{ParameterGrid, ParameterPoint};
pub use afd::kernel::{blaschke_samples, kernel_samples, tm_basis_samples};
pub use afd::signal::{analytic_projection, discrete_energy, SampledSignal};
pub use error::{AfdError, Result};
pub use transform::ComplexBuffer;
