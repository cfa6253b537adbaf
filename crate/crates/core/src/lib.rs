//! Unit-distance geometry on spheres in R³: exact chord-metric constructions,
//! rigid embeddings of unit-distance graphs, exact chromatic numbers and
//! verified region colorings.

pub mod colorings;
pub mod embedding;
pub mod sampling;
pub mod sphere_geom;
pub mod udgraph;
