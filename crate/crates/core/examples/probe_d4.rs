// Scratch: criterion 6/7 feasibility at d=3 vs d=4, 20 seeds.

use std::path::Path;

use algodecon::bdm::{BdmContext, TableIndex};
use algodecon::ctm::CtmTable;
use algodecon::deconvolve::{deconvolve_auto, Components, EpsilonPolicy};
use algodecon::graphs::{
    compose, gen_ba, gen_complete, gen_er, gen_star, score_components, score_connectors,
    CompositionSpec, Graph,
};
use algodecon::perturb::EvalCounter;

// deconvolve_n with the corrected algebraic-min reading: waves of
// maximal information contribution (removal minimizes C(G\e)).
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

fn main() {
    let table = CtmTable::load_path(Path::new("/tmp/t322d.tbl")).unwrap();
    let index = TableIndex::new(&table).unwrap();

    for d in [3usize, 4] {
        println!("== fig4 auto, d={d}, 20 seeds");
        let mut pass = 0;
        for seed in 0..20u64 {
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
            let res = deconvolve_auto(&g, EpsilonPolicy::default(), &index, d).unwrap();
            let comps = match &res.components {
                Components::Nodes(v) => v.clone(),
                _ => unreachable!(),
            };
            let sc = score_components(&comps, g.node_labels.as_ref().unwrap()).unwrap();
            let ok = sc.per_part.iter().all(|(j, _, _)| *j >= 0.8);
            if ok {
                pass += 1;
            }
            if seed < 8 {
                println!(
                    "  seed {seed}: comps {:?} jaccs {:?} {}",
                    comps.iter().map(|c| c.len()).take(4).collect::<Vec<_>>(),
                    sc.per_part.iter().map(|(j, _, _)| (j * 100.0).round() / 100.0).collect::<Vec<_>>(),
                    if ok { "PASS" } else { "fail" }
                );
            }
        }
        println!("  d={d}: {pass}/20 seeds with all parts >= 0.8");
    }

    for d in [3usize, 4] {
        println!("== sweep SF(20)+ER(20) max-I N=2, d={d}");
        for j in [2usize, 5, 9, 14, 20, 28] {
            let mut precs = Vec::new();
            let mut fprs = Vec::new();
            for seed in 0..10u64 {
                let spec = CompositionSpec {
                    parts: vec![
                        gen_ba(20, 2, seed * 31 + 7).unwrap(),
                        gen_er(20, 0.5, seed * 5 + 1),
                    ],
                    connectors: j,
                    seed: seed * 11 + 2,
                };
                let g = compose(&spec).unwrap();
                let (_, removed) = deconv_max_i(&g, &index, d, 2);
                let cs = score_connectors(&removed, g.edge_labels.as_ref().unwrap()).unwrap();
                precs.push(cs.precision);
                fprs.push(cs.false_positive_rate);
            }
            let mp = precs.iter().sum::<f64>() / precs.len() as f64;
            let mf = fprs.iter().sum::<f64>() / fprs.len() as f64;
            println!("  j={j}: precision {mp:.3} fpr {mf:.3}");
        }
    }

    println!("== K20+BA and ER100+BA, max-I N=2, d=3 and 4");
    for d in [3usize, 4] {
        let mut jk = Vec::new();
        let mut je = Vec::new();
        for seed in 0..6u64 {
            let spec = CompositionSpec {
                parts: vec![gen_complete(20).unwrap(), gen_ba(100, 2, seed * 7 + 1).unwrap()],
                connectors: 3,
                seed: seed * 13 + 5,
            };
            let g = compose(&spec).unwrap();
            let (comps, _) = deconv_max_i(&g, &index, d, 2);
            jk.push(score_components(&comps, g.node_labels.as_ref().unwrap()).unwrap().mean_jaccard);

            let spec = CompositionSpec {
                parts: vec![gen_er(100, 0.5, seed + 900), gen_ba(100, 2, seed * 7 + 1).unwrap()],
                connectors: 3,
                seed: seed * 13 + 5,
            };
            let g = compose(&spec).unwrap();
            let (comps, _) = deconv_max_i(&g, &index, d, 2);
            je.push(score_components(&comps, g.node_labels.as_ref().unwrap()).unwrap().mean_jaccard);
        }
        println!(
            "  d={d}: K20+BA mean J {:.3}; ER100+BA mean J {:.3}",
            jk.iter().sum::<f64>() / jk.len() as f64,
            je.iter().sum::<f64>() / je.len() as f64
        );
    }
}
