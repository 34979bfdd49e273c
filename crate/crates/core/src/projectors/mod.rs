//! One-dimensional L², H¹ and H² projectors, their tensor products on the
//! reference square and cube, and the C¹ interpolant on Cartesian meshes.

pub mod global;
pub mod one_d;
pub mod tensor;

pub use global::{global_h2_interpolant, GlobalInterpolant};
pub use one_d::{
    band_constant, h1_project_1d, h2_error_bounds, h2_project_1d, h2_project_1d_with, l2_project_1d, EndpointData,
    Projection1D, RegularityConfig,
};
pub use tensor::{h2_project_along, h2_project_tensor, MixedFn, TensorProjection};
