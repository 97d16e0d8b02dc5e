//! Quadratic algebras with scalar involution over exactly-represented
//! commutative rings.
//!
//! The crate builds finite-rank algebras `A = D + F` from a coefficient
//! algebra `D` with scalar involution, a free right `D`-module `F` with a
//! sesquilinear form `h`, and a cross product on `F`, via
//!
//! ```text
//! (a, u)(b, v) = (a b - h(v, u),  v a + u conj(b) + v x u)
//! ```
//!
//! Specializations cover the Cayley-Dickson doubling, the ternary-hermitian
//! octonion construction, quaternion algebras from rank-3 quadratic modules,
//! spin factors, and related doublings. Everything is exact: scalars are
//! rationals, integers, odd prime fields, or quadratic extensions, and all
//! laws (flexibility, alternativity, norm composition, ...) are decided by
//! formal polynomial expansion, not sampling.

pub mod algebra;
pub mod analysis;
pub mod catalog;
pub mod construct;
pub mod error;
pub mod forms;
pub mod fuzzing;
pub mod linalg;
pub mod poly;
pub mod ring;
pub mod serial;

pub use algebra::{
    check_composition, check_identity, check_identity_witness, check_quadratic,
    check_scalar_involution, CompositionCheck, Element, Identity, InvolutionCheck,
    InvolutionFailure, NormForm, StructureAlgebra, SymbolicElement, Witness,
};
pub use analysis::{
    check_trace_form_associative, classify_composition, find_zero_divisors,
    lemma2_alternative_criterion, lemma2_flexible_criterion, lemma3_decompose, nucleus,
    orthogonal_complement, radical, skew_sym_split, theorem1_extract, Classification,
    CompositionLabel, RadicalForm, SubmoduleBasis, SubmoduleRole, ZeroDivisorSearch,
};
pub use construct::{
    becker_double, build_unified, cay_rank2, cayley_dickson, hat, jspin, quat, split_etale,
    thakur, BilinearProduct, UnifiedInput,
};
pub use error::{Error, Result};
pub use forms::{
    alpha_cross, check_theorem1_conditions, induced_dual_trivialization, is_hermitian,
    is_nondegenerate, scale_form, wedge_cross, CoefficientAlgebra, CrossProduct,
    DeterminantTrivialization, FreeRightModule, ScaledForm, SesquilinearForm,
};
pub use fuzzing::{FuzzOutcome, FuzzProfile};
pub use poly::MultiPoly;
pub use ring::{Ring, Scalar};
