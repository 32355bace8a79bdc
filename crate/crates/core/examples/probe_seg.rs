// Scratch: block-aggregated footprint segmentation of interacting CAs.

use std::path::Path;

use algodecon::bdm::{bdm_grid, TableIndex};
use algodecon::ca::{interaction_rule, EcaRule, Interaction, InteractingSystem, INTERACTION_RULES};
use algodecon::ctm::CtmTable;
use algodecon::grid::Grid;
use algodecon::perturb::{grid_footprint, FootprintClass};

fn main() {
    let table = CtmTable::load_path(Path::new("/tmp/t322d.tbl")).unwrap();
    let index = TableIndex::new(&table).unwrap();
    let d = 3usize;

    let mut a_side = Vec::new();
    let mut b_side = Vec::new();
    for seed in 0..8u64 {
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
        // Block means over the dxd tiling.
        let brows = proj.rows().div_ceil(d);
        let bcols = proj.cols().div_ceil(d);
        let mut means = vec![0.0f64; brows * bcols];
        let mut counts = vec![0usize; brows * bcols];
        for r in 0..proj.rows() {
            for c in 0..proj.cols() {
                let b = (r / d) * bcols + (c / d);
                means[b] += fp.contribution(r, c);
                counts[b] += 1;
            }
        }
        for (m, n) in means.iter_mut().zip(&counts) {
            *m /= *n as f64;
        }
        // Classify block means by sigma/2.
        let n = means.len() as f64;
        let mu = means.iter().sum::<f64>() / n;
        let var = means.iter().map(|m| (m - mu) * (m - mu)).sum::<f64>() / n;
        let tau = var.sqrt() / 2.0;
        let classes: Vec<FootprintClass> = means
            .iter()
            .map(|&m| {
                if m.abs() <= tau {
                    FootprintClass::Neutral
                } else if m > 0.0 {
                    FootprintClass::Positive
                } else {
                    FootprintClass::Negative
                }
            })
            .collect();
        // Components over the block grid.
        let mut comp = vec![usize::MAX; classes.len()];
        let mut comps: Vec<Vec<usize>> = Vec::new();
        for start in 0..classes.len() {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = comps.len();
            let mut stack = vec![start];
            comp[start] = id;
            let mut blocks = Vec::new();
            while let Some(b) = stack.pop() {
                blocks.push(b);
                let (br, bc) = (b / bcols, b % bcols);
                let mut push = |nb: usize| {
                    if comp[nb] == usize::MAX && classes[nb] == classes[b] {
                        comp[nb] = id;
                        stack.push(nb);
                    }
                };
                if br > 0 {
                    push(b - bcols);
                }
                if br + 1 < brows {
                    push(b + bcols);
                }
                if bc > 0 {
                    push(b - 1);
                }
                if bc + 1 < bcols {
                    push(b + 1);
                }
            }
            comps.push(blocks);
        }
        comps.sort_by_key(|c| std::cmp::Reverse(c.len()));
        // Stats of the two largest components.
        print!("seed {seed}: tau {tau:.3} comps {:?} | ", comps.iter().map(|c| c.len()).take(5).collect::<Vec<_>>());
        for (i, blocks) in comps.iter().take(2).enumerate() {
            // A-fraction over non-white cells + per-area bdm of bounding box.
            let mut a = 0usize;
            let mut nw = 0usize;
            let (mut r0, mut r1, mut c0, mut c1) = (usize::MAX, 0usize, usize::MAX, 0usize);
            for &b in blocks {
                let (br, bc) = (b / bcols, b % bcols);
                for r in br * d..((br + 1) * d).min(proj.rows()) {
                    for c in bc * d..((bc + 1) * d).min(proj.cols()) {
                        let s = evo.state(r, c);
                        if s != 0 {
                            nw += 1;
                            if s == -1 {
                                a += 1;
                            }
                        }
                        r0 = r0.min(r);
                        r1 = r1.max(r);
                        c0 = c0.min(c);
                        c1 = c1.max(c);
                    }
                }
            }
            let sub = Grid::from_rows(
                (r0..=r1).map(|r| (c0..=c1).map(|c| proj.get(r, c)).collect()).collect(),
            );
            let bpa = bdm_grid(&sub, &index, d).unwrap().bits / ((r1 - r0 + 1) * (c1 - c0 + 1)) as f64;
            let af = a as f64 / nw.max(1) as f64;
            print!("R{i}: {}blk A%{af:.2} bpa {bpa:.3} | ", blocks.len());
            if i == 0 {
                a_side.push(bpa);
            } else {
                b_side.push(bpa);
            }
        }
        println!();
    }
    println!("largest-region bpa: {a_side:?}");
    println!("second-region bpa: {b_side:?}");
}
