//! Exact convex geometry: rational linear algebra, linear programming over
//! the log-rational tower, polyhedra and polytopes, cones and complete fans,
//! lattice-normalized volumes and piecewise-affine integration.

pub mod linalg;
pub mod lp;
pub mod polytope;

pub use polytope::{Constraint, GeometryError, HPolyhedron, RationalPolytope};
