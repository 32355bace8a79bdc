// Scratch: do footprint statistics differ between true A and B
// territories of the interacting 60|110 evolution?

use std::path::Path;

use algodecon::bdm::TableIndex;
use algodecon::ca::{interaction_rule, EcaRule, Interaction, InteractingSystem, INTERACTION_RULES};
use algodecon::ctm::CtmTable;
use algodecon::perturb::grid_footprint;

fn main() {
    let table = CtmTable::load_path(Path::new("/tmp/t322d.tbl")).unwrap();
    let index = TableIndex::new(&table).unwrap();
    let d = 3usize;
    for seed in 0..4u64 {
        let sys = InteractingSystem::new(
            EcaRule::new(60),
            EcaRule::new(110),
            Interaction::Rule(interaction_rule(INTERACTION_RULES).unwrap()),
            None,
        )
        .unwrap();
        let init = algodecon::ca::split_random_init(99, seed);
        let evo = sys.evolve(&init, 98).unwrap();
        let proj = evo.binary_projection();
        let fp = grid_footprint(&proj, &index, d, None).unwrap();
        // Ground truth per cell: A if any cell in its 3x3 block is -1.
        let mut a_vals = Vec::new();
        let mut b_vals = Vec::new();
        for r in 0..proj.rows() {
            for c in 0..proj.cols() {
                let s = evo.state(r, c);
                let v = fp.contribution(r, c);
                if s == -1 {
                    a_vals.push(v);
                } else if s == 1 {
                    b_vals.push(v);
                }
            }
        }
        let stats = |v: &Vec<f64>| {
            let n = v.len() as f64;
            let mean = v.iter().sum::<f64>() / n;
            let mut s = v.clone();
            s.sort_by(f64::total_cmp);
            let med = s[s.len() / 2];
            let absmean = v.iter().map(|x| x.abs()).sum::<f64>() / n;
            (v.len(), mean, med, absmean)
        };
        let (na, ma, meda, aa) = stats(&a_vals);
        let (nb, mb, medb, ab) = stats(&b_vals);
        println!(
            "seed {seed}: A n={na} mean {ma:.2} med {meda:.2} |.| {aa:.2} ; B n={nb} mean {mb:.2} med {medb:.2} |.| {ab:.2}"
        );
    }
}
