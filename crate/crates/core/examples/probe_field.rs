// Scratch: visualize the footprint block-mean field vs the A-mask.

use std::path::Path;

use algodecon::bdm::TableIndex;
use algodecon::ca::{interaction_rule, EcaRule, Interaction, InteractingSystem, INTERACTION_RULES};
use algodecon::ctm::CtmTable;
use algodecon::perturb::grid_footprint;

fn main() {
    let table = CtmTable::load_path(Path::new("/tmp/t322d.tbl")).unwrap();
    let index = TableIndex::new(&table).unwrap();
    let d = 3usize;
    let sys = InteractingSystem::new(
        EcaRule::new(60),
        EcaRule::new(110),
        Interaction::Rule(interaction_rule(INTERACTION_RULES).unwrap()),
        None,
    )
    .unwrap();
    let init = algodecon::ca::split_random_init(99, 3);
    let evo = sys.evolve(&init, 98).unwrap();
    let proj = evo.binary_projection();
    let fp = grid_footprint(&proj, &index, d, None).unwrap();
    let brows = proj.rows().div_ceil(d);
    let bcols = proj.cols().div_ceil(d);
    let mut means = vec![0.0f64; brows * bcols];
    for r in 0..proj.rows() {
        for c in 0..proj.cols() {
            means[(r / d) * bcols + (c / d)] += fp.contribution(r, c) / (d * d) as f64;
        }
    }
    // Quantiles for display.
    let mut sorted = means.clone();
    sorted.sort_by(f64::total_cmp);
    let q = |p: f64| sorted[((sorted.len() - 1) as f64 * p) as usize];
    let (q20, q40, q60, q80) = (q(0.2), q(0.4), q(0.6), q(0.8));
    println!("block-mean quantiles: {:.2} {:.2} {:.2} {:.2}", q20, q40, q60, q80);
    println!("contribution field (0..4 = quintile) | A-fraction per block (.:o#)");
    for br in 0..brows {
        let mut left = String::new();
        let mut right = String::new();
        for bc in 0..bcols {
            let m = means[br * bcols + bc];
            let ch = if m < q20 {
                '0'
            } else if m < q40 {
                '1'
            } else if m < q60 {
                '2'
            } else if m < q80 {
                '3'
            } else {
                '4'
            };
            left.push(ch);
            let mut a = 0;
            let mut tot = 0;
            for r in br * d..((br + 1) * d).min(proj.rows()) {
                for c in bc * d..((bc + 1) * d).min(proj.cols()) {
                    tot += 1;
                    if evo.state(r, c) == -1 {
                        a += 1;
                    }
                }
            }
            let f = a as f64 / tot as f64;
            right.push(if f > 0.5 {
                '#'
            } else if f > 0.2 {
                'o'
            } else if f > 0.0 {
                '.'
            } else {
                ' '
            });
        }
        println!("{left} | {right}");
    }
}
