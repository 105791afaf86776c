//! Matrix factorizations and periodic resolutions over hypersurface rings,
//! built from a DGΓ-algebra resolution of a grade-four Gorenstein link.

pub mod ring;
pub mod complexes;
pub mod bundle;
pub mod dga;
pub mod dg_solver;
pub mod fixtures;
pub mod factorization;
pub mod linkage;
pub mod report;
