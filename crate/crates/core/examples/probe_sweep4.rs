// Scratch: criterion-7 sweep over K(20)+ER(20,0.5), identification via
// the single-pass terminating-criterion cut, d=4.

use std::path::Path;

use algodecon::bdm::TableIndex;
use algodecon::ctm::CtmTable;
use algodecon::deconvolve::{deconvolve_auto, Element, EpsilonPolicy};
use algodecon::graphs::{
    compose, gen_complete, gen_er, score_connectors, CompositionSpec,
};

fn main() {
    let table = CtmTable::load_path(Path::new("/tmp/t322d.tbl")).unwrap();
    let index = TableIndex::new(&table).unwrap();
    println!("pct  j  precision  recall  fpr   (10 reps)");
    for pct in [5.0f64, 7.5, 10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0, 45.0, 50.0] {
        let mut precs = Vec::new();
        let mut recalls = Vec::new();
        let mut fprs = Vec::new();
        let mut j = 0usize;
        for rep in 0..10u64 {
            let k = gen_complete(20).unwrap();
            let er = gen_er(20, 0.5, 200 + rep);
            let base = k.edge_count() + er.edge_count();
            let f = pct / 100.0;
            j = ((f * base as f64) / (1.0 - f)).round() as usize;
            let spec =
                CompositionSpec { parts: vec![k, er], connectors: j.max(1), seed: 300 + rep };
            let g = compose(&spec).unwrap();
            let res = deconvolve_auto(&g, EpsilonPolicy::default(), &index, 4).unwrap();
            let removed: Vec<(u32, u32)> = res
                .removed
                .iter()
                .map(|(e, _)| match e {
                    Element::Edge(u, v) => (*u, *v),
                    _ => unreachable!(),
                })
                .collect();
            let cs = score_connectors(&removed, g.edge_labels.as_ref().unwrap()).unwrap();
            precs.push(cs.precision);
            recalls.push(cs.recall);
            fprs.push(cs.false_positive_rate);
        }
        let m = |v: &Vec<f64>| v.iter().sum::<f64>() / v.len() as f64;
        println!(
            "  {pct:>4}% j~{j:<3} precision {:.3}  recall {:.3}  fpr {:.3}",
            m(&precs),
            m(&recalls),
            m(&fprs)
        );
    }
}
