//! Rays, ray-to-ray maps, and the probability-preservation test that a ray
//! map must pass before it can be lifted to vectors.

mod oracle;
mod preservation;
mod ray;

pub use oracle::{FrozenComposition, FrozenSlot, RayMap, RayMapOracle};
pub use preservation::{
    check_probability_preservation, check_structured_preservation, structured_pairs,
    worst_pair_among, PreservationReport,
};
pub use ray::{canonicalize, ray_equal, Ray};
