//! Domain skeleton, shock graphs and the structured grid of the elliptic region.

pub mod config;
pub mod distance;
pub mod mesh;
pub mod shock_curve;

pub use config::{build_configuration, cone_directions, in_lambda, ConeDirections, ReflectionConfiguration};
pub use distance::c1_family_distance;
pub use mesh::SquareMap;
pub use shock_curve::{GraphSamples, ShockCurve};
