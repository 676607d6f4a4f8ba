//! Rate–distortion analysis for the focal-loss distortion measure.
//!
//! The distortion of reproducing a symbol `x` by a distribution `P` is
//! `(1 - P(x))^gamma * log2(1/P(x))`: log loss damped by a confidence
//! factor, so mass placed on likely symbols is forgiven and mass wasted on
//! unlikely ones is not. At `gamma = 0` every quantity here collapses
//! exactly to its classical log-loss counterpart.
//!
//! The crate provides, for a finite source `r` compressed into `M`
//! messages:
//!
//! * the focal entropy `H_gamma` and its alphabet-constrained maximum
//!   ([`focal_entropy`], [`focal_entropy_max`]), which drive the converse;
//! * a converse bound and two achievability bounds on the single-shot
//!   expected distortion ([`converse_bound`], [`ach_bound_log`],
//!   [`ach_bound_linear`]), plus a blocklength-`n` refinement computed from
//!   the exact information spectrum ([`ach_bound_n_letter`]);
//! * the greedy code construction behind the achievability results
//!   ([`build_code`], [`exact_code_distortion`]) and a randomized search
//!   over the reconstruction distribution it is built from
//!   ([`optimize_fx`]);
//! * an exhaustive oracle for the true optimum on small instances
//!   ([`exhaustive_dstar`]);
//! * the asymptotic distortion-rate function ([`asymptotic_distortion_rate`]).
//!
//! All logarithms are base 2; distortions are in bits.

pub mod bounds;
pub mod code;
pub mod error;
pub mod focal;
pub mod fx_opt;
pub mod oracle;
pub mod pmf;
pub mod spectrum;

pub use bounds::{
    ach_bound_linear, ach_bound_log, ach_bound_n_letter, asymptotic_distortion_rate,
    converse_bound, BoundReport,
};
pub use code::{build_code, exact_code_distortion, expected_distortion, Code};
pub use error::{Error, Result};
pub use focal::{
    focal_distortion, focal_entropy, focal_entropy_max, focal_entropy_upper, focal_loss,
    focal_power, inflection_count, HGammaMax,
};
pub use fx_opt::{derive_seed, optimize_fx, FxOptimum, FxSearchConfig};
pub use oracle::{
    exhaustive_dstar, optimal_cell_reconstruction, simplex_grid_max_focal_entropy, OracleResult,
};
pub use pmf::{parse_ratio, shannon_entropy, information, reweight, Pmf, Source};
pub use spectrum::{iid_spectrum, Atom, Spectrum};
