//! Indicial families of cone operators: roots, spectral flow, singular
//! functions, the adjoint pairing and its signature, and a first-order cone
//! model with boundary conditions.

pub mod adjoint_pairing;
pub mod cone_ode;
pub mod error;
pub mod io;
pub mod model_zoo;
pub mod numerics;
pub mod pencil;
pub mod singular_functions;
pub mod spectral_flow;

pub use adjoint_pairing::{gram, pair, verify_signature_equals_sf, GramForm, GramOptions, SignatureVerdict, Verdict};
pub use cone_ode::{deficiency_indices, lagrangian_boundary, verify_null_cobordism, ConeRealization, DeficiencyReport};
pub use error::{Error, Result};
pub use numerics::{CMatrix, CVector, HermitianMatrix, SignatureTriple};
pub use pencil::{indicial_roots, DiracData, IndicialRoot, SelfAdjointPencil};
pub use singular_functions::{CutoffSpec, LogPowerElement, SingularSpaceBasis};
pub use spectral_flow::{spectral_flow, SfMethod, SfTolerances, SpectralFlowReport};
