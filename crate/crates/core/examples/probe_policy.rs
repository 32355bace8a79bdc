// Scratch: where do connectors rank in signatures, and does a
// max-information-loss wave policy separate the composites?

use std::path::Path;

use algodecon::bdm::{BdmContext, TableIndex};
use algodecon::ctm::CtmTable;
use algodecon::graphs::{
    compose, gen_ba, gen_complete, gen_er, gen_star, score_components, CompositionSpec,
    EdgeOrigin, Graph,
};
use algodecon::perturb::{signature, EvalCounter};

fn max_loss_deconvolve(
    g: &Graph,
    index: &TableIndex,
    d: usize,
    n_target: usize,
) -> (Graph, usize, Vec<(u32, u32)>) {
    let mut work = g.clone();
    let mut ctx = BdmContext::new_adjacency(g, index, d).unwrap();
    let counter = EvalCounter::new();
    let mut removed = Vec::new();
    let mut iters = 0;
    while work.components().len() < n_target && work.edge_count() > 0 {
        let edges: Vec<(u32, u32)> = work.edges().collect();
        let contributions: Vec<f64> = edges
            .iter()
            .map(|&(u, v)| {
                counter.bump();
                ctx.delta_delete_edge(u as usize, v as usize)
            })
            .collect();
        let max = contributions.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        for (e, c) in edges.iter().zip(&contributions) {
            if *c == max {
                work.remove_edge(e.0, e.1);
                ctx.delete_edge(e.0 as usize, e.1 as usize);
                removed.push(*e);
            }
        }
        iters += 1;
        if iters > 2000 {
            break;
        }
    }
    (work, iters, removed)
}

fn main() {
    let table = CtmTable::load_path(Path::new("/tmp/t322d.tbl")).unwrap();
    let index = TableIndex::new(&table).unwrap();

    // Where do connectors sit in the K20+BA signature?
    let spec = CompositionSpec {
        parts: vec![gen_complete(20).unwrap(), gen_ba(100, 2, 8).unwrap()],
        connectors: 3,
        seed: 5,
    };
    let g = compose(&spec).unwrap();
    let sig = signature(&g, &index, 3).unwrap();
    let labels = g.edge_labels.as_ref().unwrap();
    println!("K20+BA signature: {} edges", sig.entries.len());
    for (rank, e) in sig.entries.iter().enumerate() {
        if labels[&e.element] == EdgeOrigin::Connector {
            println!("  connector {:?} rank {} contribution {:.4}", e.element, rank, e.contribution);
        }
    }
    println!("  top5:");
    for e in sig.entries.iter().take(5) {
        println!("    {:?} {:.4} {:?}", e.element, e.contribution, labels[&e.element]);
    }

    // Max-loss waves on K20+BA.
    for seed in 0..6u64 {
        let spec = CompositionSpec {
            parts: vec![gen_complete(20).unwrap(), gen_ba(100, 2, seed * 7 + 1).unwrap()],
            connectors: 3,
            seed: seed * 13 + 5,
        };
        let g = compose(&spec).unwrap();
        let (cut, iters, removed) = max_loss_deconvolve(&g, &index, 3, 2);
        let comps = cut.components();
        let score = score_components(&comps, g.node_labels.as_ref().unwrap()).unwrap();
        let conn_removed = removed
            .iter()
            .filter(|e| g.edge_labels.as_ref().unwrap()[e] == EdgeOrigin::Connector)
            .count();
        println!(
            "K20+BA maxloss seed {seed}: iters {iters} removed {} (conn {conn_removed}/3) comps {:?} jacc {:.3}",
            removed.len(),
            comps.iter().map(|c| c.len()).take(4).collect::<Vec<_>>(),
            score.mean_jaccard
        );
    }

    // Max-loss waves on the fig4 composite.
    for seed in 0..6u64 {
        let spec = CompositionSpec {
            parts: vec![
                gen_star(10).unwrap(),
                gen_complete(10).unwrap(),
                gen_er(15, 0.5, seed * 3 + 2),
            ],
            connectors: 2,
            seed: seed * 17 + 3,
        };
        let g = compose(&spec).unwrap();
        let (cut, iters, removed) = max_loss_deconvolve(&g, &index, 3, 3);
        let comps = cut.components();
        let score = score_components(&comps, g.node_labels.as_ref().unwrap()).unwrap();
        println!(
            "fig4 maxloss seed {seed}: iters {iters} removed {} comps {:?} jacc {:?}",
            removed.len(),
            comps.iter().map(|c| c.len()).take(5).collect::<Vec<_>>(),
            score
                .per_part
                .iter()
                .map(|(j, _, _)| (j * 100.0).round() / 100.0)
                .collect::<Vec<_>>()
        );
    }
}
