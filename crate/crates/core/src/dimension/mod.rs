mod boxdim;
mod entropy;
mod exceptional;
mod pointset;

pub use boxdim::{box_dim_estimate, default_ladder, geometric_ladder, BoxDimFit};
pub use entropy::{separation_count_entropy, OrbitSegment};
pub use exceptional::{exceptional_scan, exceptional_scan_ladder, ExceptionalRow, ExceptionalScan, UGrid};
pub use pointset::{separated_count, PointSet1D, RESOLUTION};
