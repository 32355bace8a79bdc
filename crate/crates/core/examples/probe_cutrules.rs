// Scratch: compare candidate cut rules on the acceptance composites.
// Rules tried:
//  A: delete all positive entries below the deepest qualifying break
//  B: delete the quiet positive band in [0, t) for the largest-jump threshold t
//  C: oracle upper bound - delete exactly the true connectors

use std::path::Path;

use algodecon::bdm::TableIndex;
use algodecon::ctm::CtmTable;
use algodecon::deconvolve::estimate_epsilon;
use algodecon::graphs::{
    compose, gen_ba, gen_complete, gen_er, gen_star, score_components, CompositionSpec,
    EdgeOrigin, Graph,
};
use algodecon::perturb::signature;

fn score_after_removal(g: &Graph, removed: &[(u32, u32)]) -> (Vec<usize>, f64) {
    let mut work = g.clone();
    for &(u, v) in removed {
        work.remove_edge(u, v);
    }
    let comps = work.components();
    let score = score_components(&comps, g.node_labels.as_ref().unwrap()).unwrap();
    (comps.iter().map(|c| c.len()).take(4).collect(), score.mean_jaccard)
}

fn main() {
    let table = CtmTable::load_path(Path::new("/tmp/t322d.tbl")).unwrap();
    let index = TableIndex::new(&table).unwrap();

    let cases: Vec<(&str, Box<dyn Fn(u64) -> Graph>)> = vec![
        (
            "K20+BA100",
            Box::new(|seed| {
                compose(&CompositionSpec {
                    parts: vec![gen_complete(20).unwrap(), gen_ba(100, 2, seed * 7 + 1).unwrap()],
                    connectors: 3,
                    seed: seed * 13 + 5,
                })
                .unwrap()
            }),
        ),
        (
            "ER100+BA100",
            Box::new(|seed| {
                compose(&CompositionSpec {
                    parts: vec![gen_er(100, 0.5, seed + 400), gen_ba(100, 2, seed * 7 + 1).unwrap()],
                    connectors: 3,
                    seed: seed * 13 + 5,
                })
                .unwrap()
            }),
        ),
        (
            "fig4",
            Box::new(|seed| {
                compose(&CompositionSpec {
                    parts: vec![
                        gen_star(10).unwrap(),
                        gen_complete(10).unwrap(),
                        gen_er(15, 0.5, seed * 3 + 2),
                    ],
                    connectors: 2,
                    seed: seed * 17 + 3,
                })
                .unwrap()
            }),
        ),
    ];

    for (name, make) in &cases {
        println!("== {name}");
        for seed in 0..6u64 {
            let g = make(seed);
            let sig = signature(&g, &index, 3).unwrap();
            let eps = estimate_epsilon(&sig, 1.0).unwrap();
            let entries = &sig.entries;
            let positives = entries.iter().take_while(|e| e.contribution > 0.0).count();
            // Rule A: deepest break within positives; cut everything below it.
            let mut deepest = None;
            for i in 0..positives.saturating_sub(1) {
                if entries[i].contribution - entries[i + 1].contribution - 1.0 > eps {
                    deepest = Some(i);
                }
            }
            let rule_a: Vec<(u32, u32)> = match deepest {
                Some(i) => entries[i + 1..positives].iter().map(|e| e.element).collect(),
                None => Vec::new(),
            };
            // Rule C: oracle connectors.
            let oracle: Vec<(u32, u32)> = g
                .edge_labels
                .as_ref()
                .unwrap()
                .iter()
                .filter(|(_, o)| **o == EdgeOrigin::Connector)
                .map(|(e, _)| *e)
                .collect();

            let (ca, ja) = score_after_removal(&g, &rule_a);
            let (cc, jc) = score_after_removal(&g, &oracle);
            let conn_in_a = rule_a.iter().filter(|e| oracle.contains(e)).count();
            println!(
                " seed {seed}: pos {positives}/{} eps {eps:.2} | A: cut {} (conn {conn_in_a}/{}) comps {ca:?} J {ja:.3} | oracle comps {cc:?} J {jc:.3}",
                entries.len(),
                rule_a.len(),
                oracle.len(),
            );
        }
    }
}
