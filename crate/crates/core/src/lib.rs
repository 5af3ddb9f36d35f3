//! Exact lower bounds on the Hofer norm of Hamiltonian diffeomorphisms that
//! preserve a premonotone Lagrangian link on a surface with genus and
//! boundary, computed from the braid type of the diffeomorphism.
//!
//! - [`braid`]: braid words, parsing, reduction and exponent sums.
//! - [`link`]: link area data, monotonicity constants, weight simplex.
//! - [`hofer`]: the homomorphisms `f_{v1,v2}`, their maximum and the bounds.
//! - [`symprod`]: signed diagonal intersections in `Sym^2(C)`.

pub mod braid;
pub mod hofer;
pub mod link;
pub mod rational;
pub mod symprod;

pub use braid::{
    braid_relation_moves, expand_restricted, exponent_summary, free_reduce, linking_number,
    parse_word, z_last_word, AlphabetMode, BraidError, BraidWord, ExponentSummary, GroupSignature,
    Letter, LetterKind,
};
pub use hofer::{
    bound_from_summary, disc_lk_bound, f_generator, f_max_closed, f_max_lp, f_value,
    hofer_lower_bound, terms, BoundError, BoundReport, Terms,
};
pub use link::{
    general_monotonicity_check, ComponentData, LambdaInterval, LinkConfig, LinkError, LinkParams,
    WeightPair, WeightVector,
};
pub use rational::{Rational, Q};
