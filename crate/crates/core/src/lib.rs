//! Geometry and statistics in Billera-Holmes-Vogtmann tree spaces.
//!
//! The crate covers exact geodesics, Fréchet means, directional derivatives
//! of the Fréchet function, stickiness certificates for means on strata of
//! positive codimension, and the comparison of sticky samples through their
//! degrees of stickiness.

pub mod direction;
pub mod error;
mod flow;
pub mod frechet;
pub mod geodesic;
pub mod labels;
pub mod newick;
pub mod split;
pub mod stats;
pub mod topology;
pub mod tree;

pub use direction::{
    cos_angle, cos_angle_limit, decompose_direction, enumerate_perp_directions, Direction,
};
pub use error::{BhvError, Result};
pub use frechet::{
    directional_derivative, frechet_mean, frechet_value, perp_derivative_constancy_check,
    stickiness_certificate, stickiness_certificate_with, EmpiricalDistribution, MeanOptions,
    MeanSolution, StickinessCertificate, StickinessReport,
};
pub use geodesic::{distance, distance_with_pendants, geodesic, project_to_stratum, GeodesicPath};
pub use labels::LabelDict;
pub use newick::{parse_newick, parse_newick_records, write_newick, NewickOptions};
pub use split::Split;
pub use topology::Topology;
pub use tree::Tree;
