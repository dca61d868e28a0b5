//! Exact computations with Frobenius roots, test ideals and the Frobenius
//! action on top local cohomology, over prime fields and integer models.

pub mod char_zero;
pub mod cohomology;
pub mod error;
pub mod frobenius;
pub mod ideal;
pub mod linalg;
pub mod model;
pub mod monomial;
pub mod pipeline;
pub mod poly;
pub mod power;
pub mod ring;
pub mod test_ideal;

pub use char_zero::{
    general_product, jumping_exponents, multiplier_ideal_at, multiplier_profile, predicted_test_ideal,
    GeneralCombinationConfig, GeneralProduct, MultiplierProfile,
};
pub use cohomology::{
    annihilator_subspace, check_key_proposition, e_multiply, e_piece, frobenius_matrix, hasse_witt_matrix,
    is_frobenius_bijective, EClass, EGradedPiece, FrobeniusMatrix, KeyPropositionCheck,
};
pub use error::{Error, Result};
pub use frobenius::{bracket_power, frobenius_root, frobenius_root_ideal, root_of_power, FrobeniusLevel};
pub use ideal::{GradedPiece, HomogeneousIdeal, Ideal};
pub use model::{parse_model, parse_model_file, IntegerModel, ModelFile};
pub use monomial::Monomial;
pub use pipeline::{
    emit_report, good_prime, point_count, scan, PointCount, PrimeReport, ReportFormat, ScanOptions,
};
pub use poly::{reduce_mod_p, Polynomial};
pub use power::{poly_power, Limits};
pub use ring::{Integers, PrimeField, Ring};
pub use test_ideal::{
    containment_power_check, fedder_root, nu_invariant, tau_equals_fedder_check, test_ideal, ChainStatus,
    RationalExponent, TestIdealOptions, TestIdealResult,
};
