//! Matrix representations of the solution group and of the game
//! algebras, and numerical certification of the identities between them.

mod family;
mod iso;
mod matrix;
mod rep;
mod scalar;

pub use family::{
    build_projection_family, check_mutual_inverse, f_projection, p_block, phi_checks, phi_image, psi_image,
    round_trip_checks, spectral_checks, FamilyRow, PhiImage, ProjectionFamily,
};
pub use iso::{check_iso_relations, iso_generator_images, iso_sum_checks, IsoFamily, IsoRelationReport};
pub use matrix::Matrix;
pub use rep::{
    load_representation, pauli_magic_square_rep, rep_to_file, rep_to_json, scalar_rep_from_solution, two_qubit_pauli,
    LoadedRep, RepFile, Representation, PAULI_MAGIC_SQUARE,
};
pub use scalar::{root_of_unity, Cyclotomic, Scalar};
