//! Exact polyhedral engine: cones, polyhedra, complexes, fans and
//! Gamma-admissible fans in `N_Q x Q_{>=0}`.

pub mod complex;
pub mod cone;
pub mod dd;
pub mod fan;
pub mod io;
pub mod polyhedron;

pub use complex::{Cell, Complex, Fan, PolyhedralComplex};
pub use cone::Cone;
pub use fan::{
    common_refinement, cone_complex, cone_over, fan_over_complex, height_one_complex, is_gamma_admissible,
    recession_fan, refines, star_fan, AdmissibleCone, GublerFan, RefinementMap,
};
pub use polyhedron::{Halfspace, Polyhedron};
