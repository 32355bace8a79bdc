//! Information contributions of single-element perturbations: edge
//! deletions, pixel flips, bit flips and deletions. A positive
//! contribution means removing or flipping the element loses
//! information (the object gets simpler without it); negative means the
//! edit injects information.

use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;
use thiserror::Error;

use crate::bdm::{bdm_string, BdmContext, BdmError, TableIndex};
use crate::graphs::Graph;
use crate::grid::Grid;

#[derive(Debug, Error)]
pub enum PerturbError {
    #[error("edge ({0}, {1}) is not in the graph")]
    EdgeNotInGraph(u32, u32),
    #[error("graph has no edges")]
    EmptyEdgeSet,
    #[error("string of length {0} too short for {1} mode")]
    StringTooShort(usize, &'static str),
    #[error(transparent)]
    Bdm(#[from] BdmError),
}

/// Counts contribution evaluations, for the complexity-budget checks.
#[derive(Default, Debug)]
pub struct EvalCounter(AtomicU64);

impl EvalCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bump(&self) {
        self.0.fetch_add(1, Ordering::Relaxed);
    }

    pub fn add(&self, n: u64) {
        self.0.fetch_add(n, Ordering::Relaxed);
    }

    pub fn get(&self) -> u64 {
        self.0.load(Ordering::Relaxed)
    }
}

#[derive(Clone, Copy, PartialEq, Debug)]
pub struct SignatureEntry {
    pub element: (u32, u32),
    pub contribution: f64,
}

/// Contributions of all perturbable elements, sorted by contribution
/// descending; ties broken by the smaller endpoint pair so identical
/// inputs always yield identical entry order.
#[derive(Clone, Debug)]
pub struct InformationSignature {
    pub entries: Vec<SignatureEntry>,
    pub base_bits: f64,
}

impl InformationSignature {
    pub fn contributions(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.contribution).collect()
    }

    /// Consecutive differences of the sorted contributions
    /// (non-negative by construction).
    pub fn differences(&self) -> Vec<f64> {
        self.entries.windows(2).map(|w| w[0].contribution - w[1].contribution).collect()
    }
}

/// `I(G, e) = C(G) - C(G \ e)` under the graph's fixed node order.
pub fn edge_contribution(
    g: &Graph,
    e: (u32, u32),
    index: &TableIndex,
    d: usize,
) -> Result<f64, PerturbError> {
    if !g.has_edge(e.0, e.1) {
        return Err(PerturbError::EdgeNotInGraph(e.0, e.1));
    }
    let ctx = BdmContext::new_adjacency(g, index, d)?;
    Ok(ctx.delta_delete_edge(e.0 as usize, e.1 as usize))
}

pub fn signature(
    g: &Graph,
    index: &TableIndex,
    d: usize,
) -> Result<InformationSignature, PerturbError> {
    signature_counted(g, index, d, &EvalCounter::new())
}

/// Signature with instrumented evaluation counting. Per-edge
/// contributions are independent and computed in parallel against the
/// shared base context.
pub fn signature_counted(
    g: &Graph,
    index: &TableIndex,
    d: usize,
    counter: &EvalCounter,
) -> Result<InformationSignature, PerturbError> {
    signature_of_context(g, &BdmContext::new_adjacency(g, index, d)?, counter)
}

/// Signature against an existing context (used by iterative
/// deconvolution to avoid rebuilding after each wave).
pub(crate) fn signature_of_context(
    g: &Graph,
    ctx: &BdmContext,
    counter: &EvalCounter,
) -> Result<InformationSignature, PerturbError> {
    let edges: Vec<(u32, u32)> = g.edges().collect();
    if edges.is_empty() {
        return Err(PerturbError::EmptyEdgeSet);
    }
    let mut entries: Vec<SignatureEntry> = edges
        .par_iter()
        .map(|&(u, v)| {
            counter.bump();
            SignatureEntry {
                element: (u, v),
                contribution: ctx.delta_delete_edge(u as usize, v as usize),
            }
        })
        .collect();
    sort_signature(&mut entries);
    Ok(InformationSignature { entries, base_bits: ctx.base_bits() })
}

fn sort_signature(entries: &mut [SignatureEntry]) {
    entries.sort_by(|a, b| {
        b.contribution
            .total_cmp(&a.contribution)
            .then_with(|| a.element.cmp(&b.element))
    });
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum EditMode {
    Flip,
    Delete,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FootprintClass {
    Positive,
    Neutral,
    Negative,
}

/// Per-element signed contribution map over a grid or string.
#[derive(Clone, Debug)]
pub struct Footprint {
    pub rows: usize,
    pub cols: usize,
    pub contributions: Vec<f64>,
    pub tau: f64,
    pub base_bits: f64,
}

impl Footprint {
    pub fn contribution(&self, r: usize, c: usize) -> f64 {
        self.contributions[r * self.cols + c]
    }

    pub fn class(&self, r: usize, c: usize) -> FootprintClass {
        classify(self.contribution(r, c), self.tau)
    }

    pub fn classes(&self) -> Vec<FootprintClass> {
        self.contributions.iter().map(|&c| classify(c, self.tau)).collect()
    }
}

pub fn classify(contribution: f64, tau: f64) -> FootprintClass {
    if contribution.abs() <= tau {
        FootprintClass::Neutral
    } else if contribution > 0.0 {
        FootprintClass::Positive
    } else {
        FootprintClass::Negative
    }
}

/// Half the population standard deviation of the contributions.
pub fn default_tau(contributions: &[f64]) -> f64 {
    if contributions.is_empty() {
        return 0.0;
    }
    let n = contributions.len() as f64;
    let mean = contributions.iter().sum::<f64>() / n;
    let var = contributions.iter().map(|c| (c - mean) * (c - mean)).sum::<f64>() / n;
    var.sqrt() / 2.0
}

/// Per-cell flip contributions of a binary grid.
pub fn grid_footprint(
    grid: &Grid,
    index: &TableIndex,
    d: usize,
    tau: Option<f64>,
) -> Result<Footprint, PerturbError> {
    grid_footprint_counted(grid, index, d, tau, &EvalCounter::new())
}

pub fn grid_footprint_counted(
    grid: &Grid,
    index: &TableIndex,
    d: usize,
    tau: Option<f64>,
    counter: &EvalCounter,
) -> Result<Footprint, PerturbError> {
    let ctx = BdmContext::new_grid(grid, index, d)?;
    let (rows, cols) = (grid.rows(), grid.cols());
    let contributions: Vec<f64> = (0..rows * cols)
        .into_par_iter()
        .map(|i| {
            counter.bump();
            ctx.delta_flip(i / cols, i % cols)
        })
        .collect();
    let tau = tau.unwrap_or_else(|| default_tau(&contributions));
    Ok(Footprint { rows, cols, contributions, tau, base_bits: ctx.base_bits() })
}

/// Per-position contributions of a binary string under flip or delete
/// edits.
pub fn string_footprint(
    s: &[u8],
    index: &TableIndex,
    d: usize,
    mode: EditMode,
    tau: Option<f64>,
) -> Result<Footprint, PerturbError> {
    if s.is_empty() {
        return Err(PerturbError::StringTooShort(0, "flip"));
    }
    let contributions: Vec<f64> = match mode {
        EditMode::Flip => {
            let ctx = BdmContext::new_string(s, index, d)?;
            (0..s.len()).map(|i| ctx.delta_for_changes(&[(0, i, s[i] ^ 1)])).collect()
        }
        EditMode::Delete => {
            if s.len() < 2 {
                return Err(PerturbError::StringTooShort(s.len(), "delete"));
            }
            // Deletion shifts every later position, so each edit is a
            // full recompute.
            let base = bdm_string(s, index, d)?.bits;
            (0..s.len())
                .map(|i| {
                    let mut shorter = s.to_vec();
                    shorter.remove(i);
                    Ok(base - bdm_string(&shorter, index, d)?.bits)
                })
                .collect::<Result<_, PerturbError>>()?
        }
    };
    let base_bits = bdm_string(s, index, d)?.bits;
    let tau = tau.unwrap_or_else(|| default_tau(&contributions));
    Ok(Footprint { rows: 1, cols: s.len(), contributions, tau, base_bits })
}
