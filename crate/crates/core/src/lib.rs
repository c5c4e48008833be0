//! Labeled random walks, their coisometric families and Cuntz dilations,
//! intertwiners between walks, and spectral frames of self-affine measures.

pub mod coisometry;
pub mod dilation;
pub mod error;
pub mod fixtures;
pub mod intertwiners;
pub mod linalg;
pub mod product;
pub mod scc;
pub mod spectral;
pub mod walk;

pub use coisometry::{apply_sigma, Coisometry};
pub use dilation::{
    build_dilation, complete_unitary, CuntzReport, Dilation, DilationSpace, DilationWord,
};
pub use error::{Error, Result};
pub use intertwiners::{
    commutant_product, first_arrival_check, fixed_point_oracle, intertwiner_basis, IntertwinerSpace,
};
pub use linalg::{CMatrix, CVector, SparseMatrix, C64};
pub use product::{MinimalSet, MinimalSetReport, ProductGraph};
pub use spectral::{
    export_min_set_walk, find_min_sets, frame_frequencies, verify_parseval, MinSet, SpectralSystem,
};
pub use walk::{LabeledWalk, ValidationReport, Violation, Word};
