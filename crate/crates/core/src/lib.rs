//! Dirac fermions in (1+1) dimensions coupled to a complex difermion pairing
//! field.
//!
//! The crate is organised bottom-up:
//!
//! * [`algebra`]: 2×2 Clifford algebra, discrete symmetries, spinor bilinears.
//! * [`kinematics`]: free dispersion, boost parametrizations, plane waves.
//! * [`meanfield`]: the in-medium 4×4 Fourier problem, dressed plane waves and
//!   condensate algebra.
//! * [`scsfactor`]: spin-charge factorization of the dressed boost.
//! * [`gauge`]: emergent gauge potential built from the number and difermion
//!   phases, field strength and regime classification.
//! * [`pairdyn`]: nonlinear Klein-Gordon dynamics of the pairing field.
//! * [`quasi`]: decoupled quasiparticle solutions of the spinor equations.
//! * [`config`] and [`cli`]: the `scs` command line tool.

pub mod algebra;
pub mod cli;
pub mod config;
pub mod error;
pub mod gauge;
pub mod grid;
pub mod kinematics;
pub mod meanfield;
pub mod output;
pub mod pairdyn;
pub mod quasi;
pub mod scsfactor;

pub use error::{Error, Result};
pub use num_complex::Complex64;
