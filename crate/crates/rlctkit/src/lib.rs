//! Exact real log canonical thresholds of sum-of-products polynomials.
//!
//! The library computes RLCTs of non-negative sop binomials exactly via
//! blow-up trees and closed-form index ratios, and the LP-based simplex
//! upper bound (with optimal weighted-blow-up weights) for arbitrary
//! polynomials. All arithmetic is exact: arbitrary-precision integers and
//! rationals throughout, no floating point anywhere.

pub mod binomial;
pub mod blowup;
pub mod bound;
pub mod error;
pub mod lp;
pub mod matrix;
pub mod models;
pub mod parse;
pub mod poly;
pub mod rational;

pub use binomial::{
    rlct_from_tree_signed,
    bivariate_ratios, index_ratios, invariant_value, potential_ratios, rlct_binomial,
    rlct_binomial_closed_form, rlct_from_tree, rlct_normal_crossing, rlct_via_tree,
    stem_terminal_ratio, IndexRatioSet, PotentialRatioMatrix, RlctValue,
};
pub use blowup::{
    blowup_between_terms, blowup_between_variables, blowup_between_variables_with_jacobian,
    classify_exclusive_triple, local_nc_blowup, max_degree_selective, min_degree_selective,
    tree_to_dot, tree_to_json, BlowupNode, BlowupTree, Caps, ChartLabel, SelectiveOutcome,
    StemPath, StemSide, TripleSopClass,
};
pub use bound::{
    linear_transform, minimum_index_ratio, optimal_weight, parameter_upper_bound_check,
    simplex_upper_bound, translate, weight_from_alpha, weighted_blowup_chart, SimplexBound,
};
pub use error::{Error, Result};
pub use lp::{lp_solve, lp_solve_capped, LpProblem, LpSolution, LpStatus};
pub use matrix::{BlowMatrix, MultiIndexMatrix};
pub use poly::{
    apply_blow_matrix, supports_disjoint, Factorization, GeneralPolynomial, OuterMonomial,
    SopPolynomial,
};
pub use rational::{Lambda, Nat, Rat};
