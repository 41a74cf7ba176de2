//! hierkit: a toolkit for designing and modifying system hierarchies.
//!
//! The crate covers a family of related combinatorial problems that show
//! up when a set of elements has to be organized into a tree, a layered
//! network or a modular structure:
//!
//! * [`clustering`] — agglomerative hierarchical clustering with
//!   pluggable aggregation and an ordinal / Pareto pair selection rule;
//! * [`graph`] — spanning trees and forests, vertex connectivity;
//! * [`spanning`] — Steiner tree heuristic, maximum-leaf spanning trees
//!   and the connected-dominating-set correspondence;
//! * [`multilayer`] — three-layer k-connected network construction,
//!   two-level network design and access-point/user assignment;
//! * [`knapsack`] — exact and FPTAS solvers for 0/1 knapsack and the
//!   multiple choice problem;
//! * [`condense`] — overlay-tree condensing under RAM path constraints;
//! * [`modify`] — hotlink assignment, tree-to-Steiner augmentation and
//!   solution restructuring;
//! * [`morpho`] — morphological hierarchies with composition enumeration
//!   and Pareto filtering.
//!
//! Every numeric quantity is an exact rational ([`num::Rat`]); solver
//! outputs are deterministic functions of (instance, parameters, seed).
//!
//! Start with the runnable examples (`cargo run --example ...`) or the
//! `hierkit` command-line front end, which reads instance files in the
//! JSON format described in the README.

pub mod clustering;
pub mod condense;
pub mod dot;
pub mod error;
pub mod graph;
pub mod instance;
pub mod knapsack;
pub mod modify;
pub mod morpho;
pub mod multilayer;
pub mod num;
pub mod report;
pub mod spanning;
pub mod tree;

pub mod cli;

pub use error::{Error, Result};
pub use num::Rat;
