//! Deciding vanishing of genus-zero three-point Gromov–Witten invariants on
//! partial flag varieties by reduction to polynomial systems.

pub mod algebra;
pub mod error;
pub mod oracle;
pub mod par;
pub mod perm;
pub mod pipeline;
pub mod splits;
pub mod suite;
pub mod sysbuild;
pub mod woodward;

pub use error::{AlgebraError, Error, InputError, SplitError};
pub use perm::{FlagShape, Permutation};
pub use pipeline::{decide, decide_complete, decide_exact, dimension_check, DeciderConfig, Decision, Verdict};
pub use woodward::{reduce_to_complete, CompleteInstance, GwInstance};
