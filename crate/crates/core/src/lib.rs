//! Irreducibility certificates for Bloch varieties of periodic discrete
//! Schrodinger operators `H = A + V` on `Z^d`.
//!
//! The exact pipeline builds the symbol `p(z)` of the hopping operator, its
//! lowest-degree component, the Floquet matrix `D(z) + B`, the characteristic
//! Laurent polynomial `det(D(z) + B - lambda I)` and its lift to the
//! Floquet variables `w_j = z_j^q_j`, and checks the two sufficient
//! conditions on the lowest-degree component. The [`oracle`] module
//! cross-checks all of it numerically.

pub mod certify;
pub mod cyclo;
pub mod error;
pub mod floquet;
pub mod laurent;
pub mod model;
pub mod oracle;

pub use certify::{certify, check_a1, check_a2, rn_family, Certificate, Verdict};
pub use cyclo::CycloNumber;
pub use error::{Error, Result};
pub use floquet::FloquetSystem;
pub use laurent::{Coefficient, LaurentPoly, Monomial};
pub use model::{GaussianRational, OperatorModel, Preset};
