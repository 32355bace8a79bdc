//! Graph families used in the deconvolution experiments, composition
//! with random connecting links, and scoring of recovered components
//! against ground-truth labels.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::grid::Grid;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("invalid size: {0}")]
    InvalidSize(String),
    #[error("attachment count {k} exceeds existing node count {nodes}")]
    AttachmentTooLarge { k: usize, nodes: usize },
    #[error("{requested} connectors requested but only {available} distinct cross pairs exist")]
    TooManyConnectors { requested: usize, available: usize },
    #[error("ground-truth labels are missing")]
    MissingLabels,
    #[error("parse error at line {0}: {1}")]
    Parse(usize, String),
}

/// Where an edge came from in a composed graph.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum EdgeOrigin {
    Part(u32),
    Connector,
}

/// Undirected simple graph with a stable insertion node order.
#[derive(Clone, PartialEq, Debug, Default)]
pub struct Graph {
    n: usize,
    edges: BTreeSet<(u32, u32)>,
    /// Ground-truth part id per node, when the graph was composed.
    pub node_labels: Option<Vec<u32>>,
    /// Ground-truth origin per edge, when the graph was composed.
    pub edge_labels: Option<BTreeMap<(u32, u32), EdgeOrigin>>,
}

fn norm(u: u32, v: u32) -> (u32, u32) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph { n, ..Default::default() }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn add_edge(&mut self, u: u32, v: u32) -> bool {
        assert!(u != v, "self loop on node {u}");
        assert!((u as usize) < self.n && (v as usize) < self.n, "edge endpoint out of range");
        self.edges.insert(norm(u, v))
    }

    pub fn remove_edge(&mut self, u: u32, v: u32) -> bool {
        self.edges.remove(&norm(u, v))
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.edges.contains(&norm(u, v))
    }

    /// Edges in deterministic (u, v) order with u < v.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.edges.iter().copied()
    }

    pub fn degree(&self, u: u32) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == u || b == u).count()
    }

    pub fn adjacency_grid(&self) -> Grid {
        let mut g = Grid::new(self.n, self.n);
        for &(u, v) in &self.edges {
            g.set(u as usize, v as usize, 1);
            g.set(v as usize, u as usize, 1);
        }
        g
    }

    /// Connected components as sorted node lists, largest first; ties by
    /// smallest member.
    pub fn components(&self) -> Vec<Vec<u32>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        let mut seen = vec![false; self.n];
        let mut comps = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            let mut stack = vec![start as u32];
            seen[start] = true;
            let mut comp = Vec::new();
            while let Some(u) = stack.pop() {
                comp.push(u);
                for &w in &adj[u as usize] {
                    if !seen[w as usize] {
                        seen[w as usize] = true;
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
        comps
    }

    pub fn component_count(&self) -> usize {
        self.components().len()
    }

    /// Edge list `u v` per line, 0-based.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for (u, v) in self.edges() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    pub fn from_edge_list(text: &str) -> Result<Self, GraphError> {
        let mut edges = Vec::new();
        let mut max_node = 0u32;
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut it = line.split_whitespace();
            let (u, v) = (it.next(), it.next());
            let parse = |t: Option<&str>| -> Result<u32, GraphError> {
                t.and_then(|t| t.parse().ok())
                    .ok_or_else(|| GraphError::Parse(i + 1, format!("bad edge line {line:?}")))
            };
            let (u, v) = (parse(u)?, parse(v)?);
            if u == v {
                return Err(GraphError::Parse(i + 1, format!("self loop {u}")));
            }
            max_node = max_node.max(u).max(v);
            edges.push((u, v));
        }
        if edges.is_empty() {
            return Err(GraphError::Parse(0, "no edges".into()));
        }
        let mut g = Graph::new(max_node as usize + 1);
        for (u, v) in edges {
            g.add_edge(u, v);
        }
        Ok(g)
    }
}

pub fn gen_complete(n: usize) -> Result<Graph, GraphError> {
    if n < 1 {
        return Err(GraphError::InvalidSize("complete graph needs n >= 1".into()));
    }
    let mut g = Graph::new(n);
    for u in 0..n as u32 {
        for v in u + 1..n as u32 {
            g.add_edge(u, v);
        }
    }
    Ok(g)
}

/// Star with hub 0.
pub fn gen_star(n: usize) -> Result<Graph, GraphError> {
    if n < 2 {
        return Err(GraphError::InvalidSize("star needs n >= 2".into()));
    }
    let mut g = Graph::new(n);
    for v in 1..n as u32 {
        g.add_edge(0, v);
    }
    Ok(g)
}

pub fn gen_cycle(n: usize) -> Result<Graph, GraphError> {
    if n < 3 {
        return Err(GraphError::InvalidSize("cycle needs n >= 3".into()));
    }
    let mut g = Graph::new(n);
    for u in 0..n as u32 {
        g.add_edge(u, ((u + 1) as usize % n) as u32);
    }
    Ok(g)
}

/// Complete `arity`-ary tree with `depth` levels, nodes in BFS order
/// (root 0).
pub fn gen_ktree(arity: usize, depth: usize) -> Result<Graph, GraphError> {
    if arity < 2 || depth < 1 {
        return Err(GraphError::InvalidSize("k-ary tree needs arity >= 2, depth >= 1".into()));
    }
    let mut total = 0usize;
    let mut level = 1usize;
    for _ in 0..depth {
        total += level;
        level *= arity;
    }
    let mut g = Graph::new(total);
    for child in 1..total {
        let parent = (child - 1) / arity;
        g.add_edge(parent as u32, child as u32);
    }
    Ok(g)
}

/// Erdos-Renyi: each pair independently with probability `p`, pairs
/// visited in fixed order so the result is a pure function of the seed.
pub fn gen_er(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Graph::new(n);
    for u in 0..n as u32 {
        for v in u + 1..n as u32 {
            if rng.random::<f64>() < p {
                g.add_edge(u, v);
            }
        }
    }
    g
}

/// Barabasi-Albert preferential attachment: start from a 3-cycle, then
/// each new node attaches `k` edges to distinct existing nodes with
/// probability proportional to degree (sampling without replacement).
pub fn gen_ba(n: usize, k: usize, seed: u64) -> Result<Graph, GraphError> {
    if n < 3 {
        return Err(GraphError::InvalidSize("preferential attachment needs n >= 3".into()));
    }
    if k < 1 {
        return Err(GraphError::InvalidSize("attachment count must be >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Graph::new(n);
    let mut degree = vec![0usize; n];
    for (u, v) in [(0u32, 1u32), (1, 2), (0, 2)] {
        g.add_edge(u, v);
        degree[u as usize] += 1;
        degree[v as usize] += 1;
    }
    for new in 3..n {
        if k >= new {
            return Err(GraphError::AttachmentTooLarge { k, nodes: new });
        }
        let mut chosen: Vec<usize> = Vec::with_capacity(k);
        while chosen.len() < k {
            let total: usize =
                (0..new).filter(|t| !chosen.contains(t)).map(|t| degree[t]).sum();
            let mut ticket = rng.random_range(0..total);
            for t in 0..new {
                if chosen.contains(&t) {
                    continue;
                }
                if ticket < degree[t] {
                    chosen.push(t);
                    break;
                }
                ticket -= degree[t];
            }
        }
        for &t in &chosen {
            g.add_edge(new as u32, t as u32);
            degree[new] += 1;
            degree[t] += 1;
        }
    }
    Ok(g)
}

#[derive(Clone, Debug)]
pub struct CompositionSpec {
    pub parts: Vec<Graph>,
    /// Number of random inter-part connector edges.
    pub connectors: usize,
    pub seed: u64,
}

/// Disjoint union of the parts plus `connectors` random cross-part
/// edges; node and edge labels record the ground truth.
pub fn compose(spec: &CompositionSpec) -> Result<Graph, GraphError> {
    assert!(!spec.parts.is_empty(), "composition needs at least one part");
    let total: usize = spec.parts.iter().map(|p| p.node_count()).sum();
    let mut g = Graph::new(total);
    let mut node_labels = Vec::with_capacity(total);
    let mut edge_labels = BTreeMap::new();
    let mut offsets = Vec::with_capacity(spec.parts.len());
    let mut offset = 0u32;
    for (pid, part) in spec.parts.iter().enumerate() {
        offsets.push(offset);
        for _ in 0..part.node_count() {
            node_labels.push(pid as u32);
        }
        for (u, v) in part.edges() {
            g.add_edge(u + offset, v + offset);
            edge_labels.insert(norm(u + offset, v + offset), EdgeOrigin::Part(pid as u32));
        }
        offset += part.node_count() as u32;
    }
    // Cross-part pair capacity bounds the connector count.
    let cross_pairs: usize = {
        let sq: usize = spec.parts.iter().map(|p| p.node_count() * p.node_count()).sum();
        (total * total - sq) / 2
    };
    if spec.connectors > cross_pairs {
        return Err(GraphError::TooManyConnectors {
            requested: spec.connectors,
            available: cross_pairs,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut added = 0;
    while added < spec.connectors {
        let u = rng.random_range(0..total as u32);
        let v = rng.random_range(0..total as u32);
        if u == v || node_labels[u as usize] == node_labels[v as usize] {
            continue;
        }
        if g.add_edge(u, v) {
            edge_labels.insert(norm(u, v), EdgeOrigin::Connector);
            added += 1;
        }
    }
    g.node_labels = Some(node_labels);
    g.edge_labels = Some(edge_labels);
    Ok(g)
}

/// Set-overlap scores of recovered components against ground-truth node
/// labels, with best matching by total Jaccard over all assignments of
/// true parts to distinct found components.
#[derive(Clone, Debug, PartialEq)]
pub struct ComponentScore {
    /// Per true part, in part-id order: (jaccard, precision, recall).
    pub per_part: Vec<(f64, f64, f64)>,
    pub mean_jaccard: f64,
}

pub fn score_components(
    found: &[Vec<u32>],
    node_labels: &[u32],
) -> Result<ComponentScore, GraphError> {
    if node_labels.is_empty() {
        return Err(GraphError::MissingLabels);
    }
    let parts = *node_labels.iter().max().unwrap() as usize + 1;
    let mut truth: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); parts];
    for (node, &part) in node_labels.iter().enumerate() {
        truth[part as usize].insert(node as u32);
    }
    let found_sets: Vec<BTreeSet<u32>> =
        found.iter().map(|c| c.iter().copied().collect()).collect();
    // Exhaustive assignment of parts to distinct found components; part
    // counts are small in every experiment.
    assert!(parts <= 6, "assignment search limited to 6 parts");
    let mut best: Option<(f64, Vec<Option<usize>>)> = None;
    let mut assignment = vec![None; parts];
    search_assignment(&truth, &found_sets, 0, &mut assignment, &mut best);
    let (_, assignment) = best.expect("assignment search found nothing");
    let mut per_part = Vec::with_capacity(parts);
    let mut total_j = 0.0;
    for (part, assigned) in assignment.iter().enumerate() {
        let t = &truth[part];
        let (j, p, r) = match assigned {
            Some(f) => overlap(t, &found_sets[*f]),
            None => (0.0, 0.0, 0.0),
        };
        total_j += j;
        per_part.push((j, p, r));
    }
    Ok(ComponentScore { per_part, mean_jaccard: total_j / parts as f64 })
}

fn overlap(truth: &BTreeSet<u32>, found: &BTreeSet<u32>) -> (f64, f64, f64) {
    let inter = truth.intersection(found).count() as f64;
    let union = truth.union(found).count() as f64;
    let precision = if found.is_empty() { 0.0 } else { inter / found.len() as f64 };
    let recall = if truth.is_empty() { 0.0 } else { inter / truth.len() as f64 };
    (if union == 0.0 { 0.0 } else { inter / union }, precision, recall)
}

fn search_assignment(
    truth: &[BTreeSet<u32>],
    found: &[BTreeSet<u32>],
    part: usize,
    assignment: &mut Vec<Option<usize>>,
    best: &mut Option<(f64, Vec<Option<usize>>)>,
) {
    if part == truth.len() {
        let score: f64 = assignment
            .iter()
            .enumerate()
            .map(|(p, a)| a.map_or(0.0, |f| overlap(&truth[p], &found[f]).0))
            .sum();
        if best.as_ref().map_or(true, |(s, _)| score > *s) {
            *best = Some((score, assignment.clone()));
        }
        return;
    }
    search_assignment(truth, found, part + 1, assignment, best);
    for f in 0..found.len() {
        if assignment.contains(&Some(f)) {
            continue;
        }
        assignment[part] = Some(f);
        search_assignment(truth, found, part + 1, assignment, best);
        assignment[part] = None;
    }
}

/// Edge-level identification scores for removed edges against
/// ground-truth connector labels.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConnectorScore {
    /// Removed edges that are true connectors / all removed edges.
    pub precision: f64,
    /// True connectors removed / all true connectors.
    pub recall: f64,
    /// Removed non-connectors / all non-connector edges.
    pub false_positive_rate: f64,
}

pub fn score_connectors(
    removed: &[(u32, u32)],
    edge_labels: &BTreeMap<(u32, u32), EdgeOrigin>,
) -> Result<ConnectorScore, GraphError> {
    if edge_labels.is_empty() {
        return Err(GraphError::MissingLabels);
    }
    let connectors: BTreeSet<(u32, u32)> = edge_labels
        .iter()
        .filter(|(_, o)| **o == EdgeOrigin::Connector)
        .map(|(e, _)| *e)
        .collect();
    let non_connectors = edge_labels.len() - connectors.len();
    let mut tp = 0usize;
    let mut fp = 0usize;
    for &(u, v) in removed {
        if connectors.contains(&norm(u, v)) {
            tp += 1;
        } else {
            fp += 1;
        }
    }
    let precision = if removed.is_empty() { 0.0 } else { tp as f64 / removed.len() as f64 };
    let recall =
        if connectors.is_empty() { 0.0 } else { tp as f64 / connectors.len() as f64 };
    let false_positive_rate =
        if non_connectors == 0 { 0.0 } else { fp as f64 / non_connectors as f64 };
    Ok(ConnectorScore { precision, recall, false_positive_rate })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_sizes() {
        assert_eq!(gen_complete(3).unwrap().edge_count(), 3);
        let star = gen_star(10).unwrap();
        assert_eq!(star.edge_count(), 9);
        assert_eq!(star.degree(0), 9);
        assert_eq!(gen_cycle(20).unwrap().edge_count(), 20);
        let tree = gen_ktree(2, 3).unwrap();
        assert_eq!(tree.node_count(), 7);
        assert_eq!(tree.edge_count(), 6);
        assert!(gen_complete(0).is_err());
        assert!(gen_ktree(1, 3).is_err());
    }

    #[test]
    fn er_extremes_and_concentration() {
        assert_eq!(gen_er(10, 0.0, 7).edge_count(), 0);
        assert_eq!(gen_er(10, 1.0, 7).edge_count(), 45);
        // n=40, p=0.5: within 3 sigma of 390.
        let e = gen_er(40, 0.5, 123).edge_count() as f64;
        let sigma = (780.0f64 * 0.25).sqrt();
        assert!((e - 390.0).abs() <= 3.0 * sigma, "edge count {e}");
    }

    #[test]
    fn er_is_reproducible() {
        let a = gen_er(30, 0.3, 42);
        let b = gen_er(30, 0.3, 42);
        assert_eq!(a, b);
        assert_ne!(a, gen_er(30, 0.3, 43));
    }

    #[test]
    fn ba_edge_arithmetic() {
        assert_eq!(gen_ba(3, 2, 1).unwrap().edge_count(), 3);
        let g = gen_ba(100, 2, 5).unwrap();
        assert_eq!(g.edge_count(), 3 + 2 * 97);
        assert_eq!(gen_ba(100, 2, 5).unwrap(), g);
        assert!(matches!(gen_ba(10, 4, 1), Err(GraphError::AttachmentTooLarge { .. })));
    }

    #[test]
    fn ba_tail_heavier_than_er() {
        // Same expected density; compare mass of degrees >= 8.
        let mut ba_tail = 0usize;
        let mut er_tail = 0usize;
        for seed in 0..5u64 {
            let ba = gen_ba(200, 2, seed).unwrap();
            let m = ba.edge_count() as f64;
            let p = m / (200.0 * 199.0 / 2.0);
            let er = gen_er(200, p, seed + 100);
            ba_tail += (0..200).filter(|&u| ba.degree(u as u32) >= 8).count();
            er_tail += (0..200).filter(|&u| er.degree(u as u32) >= 8).count();
        }
        assert!(ba_tail > er_tail, "ba {ba_tail} vs er {er_tail}");
    }

    #[test]
    fn composition_counts_and_labels() {
        let spec = CompositionSpec {
            parts: vec![gen_complete(20).unwrap(), gen_ba(100, 2, 9).unwrap()],
            connectors: 3,
            seed: 11,
        };
        let g = compose(&spec).unwrap();
        assert_eq!(g.edge_count(), 190 + 197 + 3);
        let labels = g.node_labels.as_ref().unwrap();
        assert_eq!(labels.iter().filter(|&&l| l == 0).count(), 20);
        let edge_labels = g.edge_labels.as_ref().unwrap();
        let connectors: Vec<_> = edge_labels
            .iter()
            .filter(|(_, o)| **o == EdgeOrigin::Connector)
            .map(|(e, _)| *e)
            .collect();
        assert_eq!(connectors.len(), 3);
        for (u, v) in connectors {
            assert_ne!(labels[u as usize], labels[v as usize]);
        }
    }

    #[test]
    fn composition_rejects_impossible_connector_counts() {
        let spec = CompositionSpec {
            parts: vec![gen_complete(2).unwrap(), gen_complete(2).unwrap()],
            connectors: 5,
            seed: 0,
        };
        assert!(matches!(compose(&spec), Err(GraphError::TooManyConnectors { .. })));
    }

    #[test]
    fn perfect_recovery_scores_one() {
        let labels = vec![0, 0, 0, 1, 1];
        let found = vec![vec![0, 1, 2], vec![3, 4]];
        let s = score_components(&found, &labels).unwrap();
        assert_eq!(s.mean_jaccard, 1.0);
        for (j, p, r) in s.per_part {
            assert_eq!((j, p, r), (1.0, 1.0, 1.0));
        }
    }

    #[test]
    fn single_component_on_two_part_truth_scores_below_one() {
        let labels = vec![0, 0, 0, 1, 1];
        let found = vec![vec![0, 1, 2, 3, 4]];
        let s = score_components(&found, &labels).unwrap();
        assert!(s.mean_jaccard < 1.0);
        assert!(s.per_part[0].0 < 1.0);
    }

    #[test]
    fn score_invariant_to_component_order() {
        let labels = vec![0, 0, 1, 1, 2, 2, 2];
        let found_a = vec![vec![0, 1], vec![2, 3], vec![4, 5, 6]];
        let mut found_b = found_a.clone();
        found_b.rotate_left(1);
        let a = score_components(&found_a, &labels).unwrap();
        let b = score_components(&found_b, &labels).unwrap();
        assert_eq!(a.per_part, b.per_part);
    }

    #[test]
    fn connector_scores() {
        let spec = CompositionSpec {
            parts: vec![gen_complete(5).unwrap(), gen_complete(5).unwrap()],
            connectors: 2,
            seed: 3,
        };
        let g = compose(&spec).unwrap();
        let labels = g.edge_labels.as_ref().unwrap();
        let connectors: Vec<(u32, u32)> = labels
            .iter()
            .filter(|(_, o)| **o == EdgeOrigin::Connector)
            .map(|(e, _)| *e)
            .collect();
        let s = score_connectors(&connectors, labels).unwrap();
        assert_eq!(s.precision, 1.0);
        assert_eq!(s.recall, 1.0);
        assert_eq!(s.false_positive_rate, 0.0);
        let mixed = vec![connectors[0], (0, 1)];
        let s = score_connectors(&mixed, labels).unwrap();
        assert_eq!(s.precision, 0.5);
        assert_eq!(s.recall, 0.5);
        assert!(s.false_positive_rate > 0.0 && s.false_positive_rate <= 0.1);
    }

    #[test]
    fn components_and_edge_list_roundtrip() {
        let mut g = Graph::new(6);
        g.add_edge(0, 1);
        g.add_edge(1, 2);
        g.add_edge(3, 4);
        let comps = g.components();
        assert_eq!(comps.len(), 3);
        assert_eq!(comps[0], vec![0, 1, 2]);
        assert_eq!(comps[1], vec![3, 4]);
        assert_eq!(comps[2], vec![5]);
        let text = g.to_edge_list();
        let parsed = Graph::from_edge_list(&text).unwrap();
        assert_eq!(parsed.edge_count(), 3);
        assert!(parsed.has_edge(0, 1) && parsed.has_edge(3, 4));
        assert!(Graph::from_edge_list("0 0\n").is_err());
        assert!(Graph::from_edge_list("1 x\n").is_err());
    }
}
