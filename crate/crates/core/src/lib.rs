//! hp-version interior penalty discontinuous Galerkin methods for the
//! biharmonic problem `Δ²u = f`, together with hp-optimal H² projectors.
//!
//! The crate is organised bottom-up:
//!
//! * [`polylib`] – Legendre polynomials, Gauss rules, integrated Legendre functions.
//! * [`projectors`] – 1D L²/H¹/H² projectors and their tensor-product extensions.
//! * [`mesh`] – Cartesian and triangular meshes with face connectivity.
//! * [`space`] – modal DG and C⁰ spaces with derivative tabulation.
//! * [`assembly`] – IPDG and C⁰-IPDG forms, loads, lifting, error norms.
//! * [`linalg`] – envelope Cholesky and sampled Rayleigh quotients.
//! * [`solutions`] – manufactured solutions with exact derivatives.
//! * [`driver`] – p/h convergence sweeps and table output.
//! * [`verify`] – self-checks used by the `verify` CLI subcommand.

pub mod assembly;
pub mod driver;
pub mod error;
pub mod linalg;
pub mod mesh;
pub mod polylib;
pub mod projectors;
pub mod solutions;
pub mod space;
pub mod verify;

pub use error::{Error, Result};
