// Scratch: connector salience vs composite scale, and cut quality of
// the top-band rule at 40 nodes (criterion-7 scale) and 35 (fig 4).

use std::path::Path;

use algodecon::bdm::TableIndex;
use algodecon::ctm::CtmTable;
use algodecon::deconvolve::{deconvolve_auto, Components, EpsilonPolicy};
use algodecon::graphs::{
    compose, gen_ba, gen_complete, gen_er, gen_star, score_components, score_connectors,
    CompositionSpec, EdgeOrigin,
};
use algodecon::perturb::signature;

fn main() {
    let table = CtmTable::load_path(Path::new("/tmp/t322d.tbl")).unwrap();
    let index = TableIndex::new(&table).unwrap();

    println!("== sweep: SF(20)+ER(20,0.5), d=4, varying connectors");
    for j in [2usize, 5, 9, 14, 20, 28] {
        let mut precs = Vec::new();
        let mut fprs = Vec::new();
        for seed in 0..8u64 {
            let spec = CompositionSpec {
                parts: vec![gen_ba(20, 2, seed * 31 + 7).unwrap(), gen_er(20, 0.5, seed * 5 + 1)],
                connectors: j,
                seed: seed * 11 + 2,
            };
            let g = compose(&spec).unwrap();
            let res = deconvolve_auto(&g, EpsilonPolicy::default(), &index, 4).unwrap();
            let removed: Vec<(u32, u32)> = res
                .removed
                .iter()
                .map(|(e, _)| match e {
                    algodecon::deconvolve::Element::Edge(u, v) => (*u, *v),
                    _ => unreachable!(),
                })
                .collect();
            let cs = score_connectors(&removed, g.edge_labels.as_ref().unwrap()).unwrap();
            precs.push(cs.precision);
            fprs.push(cs.false_positive_rate);
        }
        let mp = precs.iter().sum::<f64>() / precs.len() as f64;
        let mf = fprs.iter().sum::<f64>() / fprs.len() as f64;
        println!("  j={j}: mean precision {mp:.3} mean fpr {mf:.3}");
    }

    println!("== fig4 connector ranks, d=3");
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
        let sig = signature(&g, &index, 3).unwrap();
        let labels = g.edge_labels.as_ref().unwrap();
        let ranks: Vec<(usize, f64)> = sig
            .entries
            .iter()
            .enumerate()
            .filter(|(_, e)| labels[&e.element] == EdgeOrigin::Connector)
            .map(|(r, e)| (r, (e.contribution * 100.0).round() / 100.0))
            .collect();
        let top: Vec<f64> = sig
            .entries
            .iter()
            .take(6)
            .map(|e| (e.contribution * 100.0).round() / 100.0)
            .collect();
        println!("  seed {seed}: connector (rank, I) {ranks:?}; top6 {top:?}");
    }

    println!("== K20+BA auto (top-band), d=3");
    for seed in 0..4u64 {
        let spec = CompositionSpec {
            parts: vec![gen_complete(20).unwrap(), gen_ba(100, 2, seed * 7 + 1).unwrap()],
            connectors: 3,
            seed: seed * 13 + 5,
        };
        let g = compose(&spec).unwrap();
        let res = deconvolve_auto(&g, EpsilonPolicy::default(), &index, 3).unwrap();
        let comps = match &res.components {
            Components::Nodes(v) => v.clone(),
            _ => unreachable!(),
        };
        let sc = score_components(&comps, g.node_labels.as_ref().unwrap()).unwrap();
        println!(
            "  seed {seed}: removed {} comps {:?} J {:.3}",
            res.removed.len(),
            comps.iter().map(|c| c.len()).take(4).collect::<Vec<_>>(),
            sc.mean_jaccard
        );
    }
}
