mod cone;
mod correspond;
mod point;
mod profile;
mod shortest;

pub use cone::{Cone, ConeGrid, ConeName, ConePoint};
pub use correspond::{
    correspondence_check_g, correspondence_check_mt, Correspondence, CorrespondenceCap, CorrespondenceWitness,
};
pub use point::{LatticePoint, MAX_EXPONENT};
pub use profile::{cone_orbit_profile, OrbitProfile, ProfileCell};
pub use shortest::{mahler_height, shortest_vector_norm, vector_norm, LatticeVector, SearchCap, ShortestVector};
