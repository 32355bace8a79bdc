//! Complexity estimation by algorithmic probability and causal deconvolution.
//!
//! The crate enumerates small Turing machines to build empirical
//! frequency tables of their halting outputs (`ctm`), turns those tables
//! into block-decomposition complexity estimates for strings, grids and
//! graph adjacency matrices (`bdm`), measures the information
//! contribution of single-element perturbations (`perturb`), and cuts
//! objects into components most likely produced by distinct generative
//! mechanisms (`deconvolve`). Supporting modules simulate elementary and
//! interacting cellular automata (`ca`), generate labelled graph
//! composites for scoring (`graphs`), and provide classical-information
//! baselines (`baselines`).

pub mod baselines;
pub mod bdm;
pub mod ca;
pub mod ctm;
pub mod deconvolve;
pub mod graphs;
pub mod grid;
pub mod perturb;

pub use grid::Grid;
