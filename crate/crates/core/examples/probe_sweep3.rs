// Scratch: sweep with iterated auto passes until separation; measure
// node-level component precision and edge-level false positives.

use std::path::Path;

use algodecon::bdm::TableIndex;
use algodecon::ctm::CtmTable;
use algodecon::deconvolve::{deconvolve_auto, Components, Element, EpsilonPolicy};
use algodecon::graphs::{
    compose, gen_ba, gen_er, score_components, score_connectors, CompositionSpec, Graph,
};

fn iterated_auto(
    g: &Graph,
    index: &TableIndex,
    d: usize,
    n_target: usize,
    max_rounds: usize,
) -> (Vec<Vec<u32>>, Vec<(u32, u32)>) {
    let mut work = g.clone();
    let mut removed = Vec::new();
    for _ in 0..max_rounds {
        if work.components().len() >= n_target || work.edge_count() == 0 {
            break;
        }
        let res = deconvolve_auto(&work, EpsilonPolicy::default(), index, d).unwrap();
        if res.removed.is_empty() {
            break;
        }
        for (el, _) in &res.removed {
            if let Element::Edge(u, v) = el {
                work.remove_edge(*u, *v);
                removed.push((*u, *v));
            }
        }
    }
    (work.components(), removed)
}

fn main() {
    let table = CtmTable::load_path(Path::new("/tmp/t322d.tbl")).unwrap();
    let index = TableIndex::new(&table).unwrap();
    println!("pct  j  node-precision  edge-fpr  separated/10");
    for pct in [5.0f64, 10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0, 45.0, 50.0] {
        let mut precs = Vec::new();
        let mut fprs = Vec::new();
        let mut separated = 0;
        let mut j = 0usize;
        for rep in 0..10u64 {
            let sf = gen_ba(20, 2, 100 + rep).unwrap();
            let er = gen_er(20, 0.5, 200 + rep);
            let base = sf.edge_count() + er.edge_count();
            let f = pct / 100.0;
            j = ((f * base as f64) / (1.0 - f)).round() as usize;
            let spec =
                CompositionSpec { parts: vec![sf, er], connectors: j.max(1), seed: 300 + rep };
            let g = compose(&spec).unwrap();
            let (comps, removed) = iterated_auto(&g, &index, 4, 2, 60);
            if comps.len() >= 2 {
                separated += 1;
            }
            let sc = score_components(&comps, g.node_labels.as_ref().unwrap()).unwrap();
            let mean_prec: f64 =
                sc.per_part.iter().map(|(_, p, _)| *p).sum::<f64>() / sc.per_part.len() as f64;
            precs.push(mean_prec);
            let cs = score_connectors(&removed, g.edge_labels.as_ref().unwrap()).unwrap();
            fprs.push(cs.false_positive_rate);
        }
        let mp = precs.iter().sum::<f64>() / precs.len() as f64;
        let mf = fprs.iter().sum::<f64>() / fprs.len() as f64;
        println!("  {pct:>4}% j~{j:<3} precision {mp:.3}  fpr {mf:.3}  sep {separated}/10");
    }

    // Same machinery on fig4 (check iterated auto doesn't regress it).
    let mut pass = 0;
    for seed in 0..20u64 {
        let spec = CompositionSpec {
            parts: vec![
                algodecon::graphs::gen_star(10).unwrap(),
                algodecon::graphs::gen_complete(10).unwrap(),
                gen_er(15, 0.5, seed * 3 + 2),
            ],
            connectors: 2,
            seed: seed * 17 + 3,
        };
        let g = compose(&spec).unwrap();
        let res = deconvolve_auto(&g, EpsilonPolicy::default(), &index, 4).unwrap();
        let comps = match &res.components {
            Components::Nodes(v) => v.clone(),
            _ => unreachable!(),
        };
        let sc = score_components(&comps, g.node_labels.as_ref().unwrap()).unwrap();
        if sc.per_part.iter().all(|(j, _, _)| *j >= 0.8) {
            pass += 1;
        }
    }
    println!("fig4 single-pass auto d=4: {pass}/20");
}
