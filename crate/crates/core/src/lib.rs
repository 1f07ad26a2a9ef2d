//! Numerical laboratory for multilinear Fourier multiplier experiments on
//! periodic grids.
//!
//! The crate is organized around a small set of concrete objects:
//!
//! * [`Grid`] — a uniformly discretized cube `[-L, L)^d` together with its
//!   centered frequency lattice,
//! * [`Field`] — complex sample data on a grid, tagged as physical-side or
//!   frequency-side,
//! * transforms ([`fft`]) realizing the continuum Fourier integral exactly on
//!   band-limited grid data,
//! * function-space machinery: decreasing rearrangements and Lorentz norms
//!   ([`lorentz`]), smoothness norms ([`bessel`]), maximal averages
//!   ([`maximal`]),
//! * dyadic frequency decompositions ([`lp`]) and the multilinear multiplier
//!   operator itself ([`multiplier`]),
//! * experiment drivers for operator-norm growth sweeps ([`sharpness`]) and
//!   boundedness phase diagrams ([`region`]).
//!
//! Everything is deterministic: reductions run in fixed index order with
//! compensated summation, random instances come from counter-based seeded
//! generators, and no iteration order depends on hashing.

pub mod bessel;
pub mod error;
pub mod fft;
pub mod field;
pub mod grid;
pub mod io;
pub mod lorentz;
pub mod lp;
pub mod maximal;
pub mod multiplier;
pub mod quadrature;
pub mod random;
pub mod region;
pub mod sharpness;
pub mod sum;
pub mod symbol;

/// Crate version, echoed into experiment-report provenance.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub use error::CoreError;
pub use field::{Field, QuadratureResult, Space};
pub use grid::Grid;
pub use num_complex::Complex64;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, CoreError>;
