//! Exact polyhedral primitives: vertex enumeration, convex hulls, and the
//! planar polygon operations used by the branching analysis.

mod dd;
mod hull;
mod plane;
mod polytope;

pub use hull::{point_in_hull, ConvexHull};
pub(crate) use plane::project_to_plane_with;
pub use plane::{
    convex_hull_2d, lower_envelope, polygon_area, project_to_plane, strengthened_proportion,
    LowerEnvelope, PlaneMap, Point2, Polygon2D,
};
pub use polytope::{enumerate_vertices, enumerate_vertices_with, HPolytope};
