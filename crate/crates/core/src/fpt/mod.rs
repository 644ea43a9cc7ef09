//! Pattern enumeration over coresets with leader/radius guessing.

mod extension;
mod grid;
mod pipeline;
mod pm;
mod submodular;

pub use extension::{FictitiousExtension, ImprovOracle, Node};
pub use grid::{candidate_set, discretize, Radius, RadiusGrid};
pub use pipeline::{solve_divkmed_3apx, solve_divkmed_fpt, CoresetMode, FptConfig};
pub use pm::{
    eta_for, grid_unit, pool_guesses, solve_kmed_kpm, GuessSpace, KpmOutcome, PartitionInstance, PoolGuess,
    GUESS_CAP,
};
pub use submodular::{
    maximize_improv, selector_registry, ArbitrarySelector, CandidateSelector, ExactSelector, GreedySelector,
    EXACT_PRODUCT_CAP,
};
