//! Reconstructing quantum-mechanical structure from transition probabilities.
//!
//! - [`hilbert`]: complex vectors, matrices, subspaces, seeded randomness.
//! - [`projective`]: rays, ray maps and probability preservation.
//! - [`lift`]: rebuilding a unitary or antiunitary from a ray map.
//! - [`tensor`]: composition maps and the isomorphism `C ≅ A ⊗ B`.
//! - [`codec`]: JSON wire formats.
//! - [`harness`]: seeded randomized verification with negative controls.

pub mod codec;
pub mod error;
pub mod harness;
pub mod hilbert;
pub mod lift;
pub mod projective;
pub mod tensor;

pub use error::{Error, Result};
pub use hilbert::{ComplexMatrix, ComplexVector, ToleranceConfig};
pub use lift::SemilinearLift;
pub use projective::{Ray, RayMap, RayMapOracle};
pub use tensor::{BilinearComposition, CompositionOracle, IsomorphismResult};
