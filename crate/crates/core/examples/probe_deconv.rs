// Scratch: check deconvolution behaviour on the acceptance-style graphs
// with the real (3,2,2D) table.

use std::path::Path;

use algodecon::bdm::TableIndex;
use algodecon::ctm::CtmTable;
use algodecon::deconvolve::{
    deconvolve_auto, deconvolve_n, estimate_epsilon, signature_breaks, Components,
    EpsilonPolicy, SelectionPolicy,
};
use algodecon::graphs::{
    compose, gen_ba, gen_complete, gen_er, gen_star, score_components, score_connectors,
    CompositionSpec, EdgeOrigin,
};
use algodecon::perturb::signature;

fn main() {
    let table = CtmTable::load_path(Path::new("/tmp/t322d.tbl")).unwrap();
    let index = TableIndex::new(&table).unwrap();

    // Two K5s and one bridge.
    let spec = CompositionSpec {
        parts: vec![gen_complete(5).unwrap(), gen_complete(5).unwrap()],
        connectors: 1,
        seed: 1,
    };
    let g = compose(&spec).unwrap();
    let sig = signature(&g, &index, 3).unwrap();
    println!("bridge-K5s signature head:");
    for e in sig.entries.iter().take(5) {
        let label = g.edge_labels.as_ref().unwrap()[&e.element];
        println!("  {:?} {:.3} {:?}", e.element, e.contribution, label);
    }
    println!("  ... tail:");
    for e in sig.entries.iter().rev().take(3) {
        println!("  {:?} {:.3}", e.element, e.contribution);
    }
    for policy in [SelectionPolicy::Literal, SelectionPolicy::AlgebraicMin] {
        let res = deconvolve_n(&g, 2, &index, 3, policy).unwrap();
        let comps = match &res.components {
            Components::Nodes(v) => v.clone(),
            _ => unreachable!(),
        };
        println!(
            "  policy {:?}: iters {}, removed {:?}, comps {:?}",
            policy,
            res.iterations,
            res.removed.iter().map(|(e, _)| e).collect::<Vec<_>>(),
            comps.iter().map(|c| c.len()).collect::<Vec<_>>()
        );
    }

    // K20 + BA(100,2) with 3 connectors, a few seeds, both policies.
    for policy in [SelectionPolicy::AlgebraicMin, SelectionPolicy::Literal] {
        let mut jaccards = Vec::new();
        for seed in 0..6u64 {
            let spec = CompositionSpec {
                parts: vec![gen_complete(20).unwrap(), gen_ba(100, 2, seed * 7 + 1).unwrap()],
                connectors: 3,
                seed: seed * 13 + 5,
            };
            let g = compose(&spec).unwrap();
            let res = deconvolve_n(&g, 2, &index, 3, policy).unwrap();
            let comps = match &res.components {
                Components::Nodes(v) => v.clone(),
                _ => unreachable!(),
            };
            let score = score_components(&comps, g.node_labels.as_ref().unwrap()).unwrap();
            let conn =
                score_connectors(
                    &res.removed
                        .iter()
                        .map(|(e, _)| match e {
                            algodecon::deconvolve::Element::Edge(u, v) => (*u, *v),
                            _ => unreachable!(),
                        })
                        .collect::<Vec<_>>(),
                    g.edge_labels.as_ref().unwrap(),
                )
                .unwrap();
            jaccards.push(score.mean_jaccard);
            println!(
                "K20+BA seed {seed} {policy:?}: iters {} removed {} mean-jacc {:.3} prec {:.2} fpr {:.3}",
                res.iterations,
                res.removed.len(),
                score.mean_jaccard,
                conn.precision,
                conn.false_positive_rate,
            );
        }
        let mean: f64 = jaccards.iter().sum::<f64>() / jaccards.len() as f64;
        println!("  {policy:?} mean jaccard {mean:.3}");
    }

    // Fig 4 composite: star(10) + K(10) + ER(15, 0.5), two connectors.
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
        let eps = estimate_epsilon(&sig, 1.0).unwrap();
        let breaks = signature_breaks(&sig, 1.0, eps);
        let res = deconvolve_auto(&g, EpsilonPolicy::default(), &index, 3).unwrap();
        let comps = match &res.components {
            Components::Nodes(v) => v.clone(),
            _ => unreachable!(),
        };
        let score = score_components(&comps, g.node_labels.as_ref().unwrap()).unwrap();
        let removed_conn = res
            .removed
            .iter()
            .filter(|(e, _)| match e {
                algodecon::deconvolve::Element::Edge(u, v) => {
                    g.edge_labels.as_ref().unwrap()[&(*u.min(v), *v.max(u))]
                        == EdgeOrigin::Connector
                }
                _ => false,
            })
            .count();
        println!(
            "fig4 seed {seed}: eps {:.3} breaks {} removed {} (conn {}) comps {:?} jacc {:?}",
            eps,
            breaks.len(),
            res.removed.len(),
            removed_conn,
            comps.iter().map(|c| c.len()).take(4).collect::<Vec<_>>(),
            score.per_part.iter().map(|(j, _, _)| (j * 100.0).round() / 100.0).collect::<Vec<_>>(),
        );
    }
}
