// Scratch: identification = top signature plateau (exact ties) vs
// one-log-unit window below the maximum, K(20)+ER(20,0.5), d=4.

use std::path::Path;

use algodecon::bdm::TableIndex;
use algodecon::ctm::CtmTable;
use algodecon::graphs::{compose, gen_complete, gen_er, score_connectors, CompositionSpec};
use algodecon::perturb::signature;

fn main() {
    let table = CtmTable::load_path(Path::new("/tmp/t322d.tbl")).unwrap();
    let index = TableIndex::new(&table).unwrap();
    println!("pct   j   tie: prec fpr | window: prec fpr");
    let mut grid = Vec::new();
    let mut pct = 5.0f64;
    while pct <= 50.0 {
        grid.push(pct);
        pct += 2.5;
    }
    for &pct in &grid {
        let mut tie_p = Vec::new();
        let mut tie_f = Vec::new();
        let mut win_p = Vec::new();
        let mut win_f = Vec::new();
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
            let sig = signature(&g, &index, 4).unwrap();
            let max = sig.entries[0].contribution;
            let tie: Vec<(u32, u32)> = sig
                .entries
                .iter()
                .take_while(|e| e.contribution == max)
                .map(|e| e.element)
                .collect();
            let window: Vec<(u32, u32)> = sig
                .entries
                .iter()
                .take_while(|e| e.contribution > max - 1.0)
                .map(|e| e.element)
                .collect();
            let labels = g.edge_labels.as_ref().unwrap();
            let ts = score_connectors(&tie, labels).unwrap();
            let ws = score_connectors(&window, labels).unwrap();
            tie_p.push(ts.precision);
            tie_f.push(ts.false_positive_rate);
            win_p.push(ws.precision);
            win_f.push(ws.false_positive_rate);
        }
        let m = |v: &Vec<f64>| v.iter().sum::<f64>() / v.len() as f64;
        println!(
            "  {pct:>4}% j~{j:<3} tie {:.3} {:.4} | win {:.3} {:.4}",
            m(&tie_p),
            m(&tie_f),
            m(&win_p),
            m(&win_f)
        );
    }
}
