//! GIT data `(V, G, T, θ)` and King stability of coordinate supports.

mod cone;
mod stability;
mod target;

pub use cone::Cone;
pub use stability::{
    levi_roots, maximal_unstable_supports, maximal_unstable_supports_with_cap, semistable_support, stable_support,
    verify_assumptions, verify_assumptions_with_cap, AssumptionFailure, AssumptionReport, LeviSplit, Support,
    DEFAULT_ENUM_CAP,
};
pub use target::{
    act_on_character, mat_mul, mat_vec, EffectivityMode, IntMatrix, Preset, Target, TargetSpec, WEYL_GROUP_CAP,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GitError {
    #[error("malformed GIT datum: {0}")]
    Malformed(String),
    #[error("{n} coordinates exceed the support enumeration cap of {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("support index {0} is out of range")]
    IndexOutOfRange(usize),
}
