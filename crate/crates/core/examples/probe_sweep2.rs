// Scratch: criterion-7 sweep with separation-aware identification:
// identified connectors = removed edges whose endpoints end up in
// different components.

use std::path::Path;

use algodecon::bdm::{BdmContext, TableIndex};
use algodecon::ctm::CtmTable;
use algodecon::graphs::{
    compose, gen_ba, gen_er, score_connectors, CompositionSpec, Graph,
};
use algodecon::perturb::EvalCounter;

fn deconv_max_i(g: &Graph, index: &TableIndex, d: usize, n: usize) -> (Vec<Vec<u32>>, Vec<(u32, u32)>) {
    let mut work = g.clone();
    let mut ctx = BdmContext::new_adjacency(g, index, d).unwrap();
    let counter = EvalCounter::new();
    let mut removed = Vec::new();
    while work.components().len() < n && work.edge_count() > 0 {
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
    }
    (work.components(), removed)
}

fn comp_of(comps: &[Vec<u32>], node: u32) -> usize {
    comps.iter().position(|c| c.contains(&node)).unwrap()
}

fn main() {
    let table = CtmTable::load_path(Path::new("/tmp/t322d.tbl")).unwrap();
    let index = TableIndex::new(&table).unwrap();
    println!("fraction j prec fpr  (10 replicates, separation-aware)");
    for pct in [5.0f64, 10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0, 45.0, 50.0] {
        let mut precs = Vec::new();
        let mut fprs = Vec::new();
        let mut base_edges = 0usize;
        let mut j = 0usize;
        for rep in 0..10u64 {
            let sf = gen_ba(20, 2, 100 + rep).unwrap();
            let er = gen_er(20, 0.5, 200 + rep);
            base_edges = sf.edge_count() + er.edge_count();
            let f = pct / 100.0;
            j = ((f * base_edges as f64) / (1.0 - f)).round() as usize;
            let spec = CompositionSpec {
                parts: vec![sf, er],
                connectors: j.max(1),
                seed: 300 + rep,
            };
            let g = compose(&spec).unwrap();
            let (comps, removed) = deconv_max_i(&g, &index, 4, 2);
            let identified: Vec<(u32, u32)> = removed
                .iter()
                .copied()
                .filter(|&(u, v)| comp_of(&comps, u) != comp_of(&comps, v))
                .collect();
            let cs = score_connectors(&identified, g.edge_labels.as_ref().unwrap()).unwrap();
            precs.push(cs.precision);
            fprs.push(cs.false_positive_rate);
        }
        let mp = precs.iter().sum::<f64>() / precs.len() as f64;
        let mf = fprs.iter().sum::<f64>() / fprs.len() as f64;
        println!("  {pct:>4}% (j~{j}, base {base_edges}): precision {mp:.3} fpr {mf:.3}");
    }
}
