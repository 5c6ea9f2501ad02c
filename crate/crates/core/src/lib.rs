//! Combinatorial maps, quadrangulations and basic nets on the sphere and the
//! projective plane.
//!
//! Sphere maps are dart-based rotation systems ([`OrientedMap`]). Maps on the
//! projective plane are stored as their double cover on the sphere together
//! with the deck involution ([`ProjectiveMap`]). Quadrangulations of minimum
//! degree 3 are generated by closure under local moves from explicit seed
//! families, deduplicated by canonical codes.

pub mod canon;
pub mod codec;
pub mod enumerate;
pub mod map;
pub mod moves;
pub mod predicates;
pub mod projective;
pub mod verify;

pub use canon::{are_isomorphic, canonical_code, canonical_form, CanonicalCode};
pub use map::{build_map, from_neighbor_lists, Dart, Face, MapError, OrientedMap, Vertex};
pub use projective::{canonical_code_projective, DeckInvolution, ProjectiveMap};
