// Scratch: criterion 8 (interacting 60|110 segmentation) and criterion 4
// (paper string boundary) feasibility.

use std::path::Path;

use algodecon::bdm::{bdm_grid, TableIndex};
use algodecon::ca::{interaction_rule, EcaRule, Interaction, InteractingSystem, INTERACTION_RULES};
use algodecon::ctm::{build_table, CtmTable, Dim, MachineClass};
use algodecon::deconvolve::{deconvolve_string, segment_grid, Components};
use algodecon::grid::Grid;

fn region_stats(
    grid: &Grid,
    evo: &algodecon::ca::Evolution,
    index: &TableIndex,
    cells: &[(u32, u32)],
) -> (f64, f64, usize) {
    // Per-area BDM of the bounding box restricted... use the subgrid of
    // the region's bounding box for a quick check.
    let (mut r0, mut r1, mut c0, mut c1) = (usize::MAX, 0usize, usize::MAX, 0usize);
    for &(r, c) in cells {
        r0 = r0.min(r as usize);
        r1 = r1.max(r as usize);
        c0 = c0.min(c as usize);
        c1 = c1.max(c as usize);
    }
    let sub = Grid::from_rows(
        (r0..=r1)
            .map(|r| (c0..=c1).map(|c| grid.get(r, c)).collect())
            .collect(),
    );
    let bits = bdm_grid(&sub, index, 3).unwrap().bits;
    let area = sub.rows() * sub.cols();
    // Ground truth: fraction of A (state -1) among non-white cells.
    let mut a = 0usize;
    let mut nonwhite = 0usize;
    for &(r, c) in cells {
        let s = evo.state(r as usize, c as usize);
        if s != 0 {
            nonwhite += 1;
            if s == -1 {
                a += 1;
            }
        }
    }
    (bits / area as f64, a as f64 / nonwhite.max(1) as f64, cells.len())
}

fn main() {
    let table = CtmTable::load_path(Path::new("/tmp/t322d.tbl")).unwrap();
    let index = TableIndex::new(&table).unwrap();

    println!("== interacting 60|110, inter 531441, 100x100");
    for seed in 0..6u64 {
        let sys = InteractingSystem::new(
            EcaRule::new(60),
            EcaRule::new(110),
            Interaction::Rule(interaction_rule(INTERACTION_RULES).unwrap()),
            None,
        )
        .unwrap();
        let init = algodecon::ca::split_random_init(100, seed);
        let evo = sys.evolve(&init, 99).unwrap();
        let proj = evo.binary_projection();
        let res = segment_grid(&proj, &index, 3, None).unwrap();
        let comps = match &res.components {
            Components::Cells(v) => v.clone(),
            _ => unreachable!(),
        };
        let sizes: Vec<usize> = comps.iter().map(|c| c.len()).take(5).collect();
        let sep = res.removed.len();
        print!("seed {seed}: sep {sep} comps {sizes:?} | ");
        for cells in comps.iter().take(3) {
            let (bpa, afrac, n) = region_stats(&proj, &evo, &index, cells);
            print!("[{n}c {bpa:.3}b/c A%{:.2}] ", afrac);
        }
        println!();
    }

    println!("== paper string, (3,2,1D) table, d=4");
    let t1 = build_table(MachineClass::new(3, 2, Dim::OneD).unwrap(), 107, 2).unwrap();
    let idx1 = TableIndex::new(&t1).unwrap();
    let blue = "0101010101010101010101010101010101010101010101010101";
    let red = "110100101010100000001001100111100110000011100110";
    println!("blue len {} red len {}", blue.len(), red.len());
    let s: Vec<u8> = format!("{blue}{red}").bytes().map(|b| (b == b'1') as u8).collect();
    let res = deconvolve_string(&s, &idx1, 4).unwrap();
    println!("ranges {:?} eps {:?}", res.components, res.epsilon);
    let rev: Vec<u8> = s.iter().rev().copied().collect();
    let res_rev = deconvolve_string(&rev, &idx1, 4).unwrap();
    println!("reversed ranges {:?}", res_rev.components);
    // per-block means comparison periodic vs random
    use algodecon::bdm::bdm_string;
    let blue_bits: Vec<u8> = blue.bytes().map(|b| (b == b'1') as u8).collect();
    let red_bits: Vec<u8> = red.bytes().map(|b| (b == b'1') as u8).collect();
    let mean_block = |x: &[u8]| {
        let blocks: Vec<f64> = x
            .chunks(4)
            .map(|c| bdm_string(c, &idx1, 4).unwrap().bits)
            .collect();
        blocks.iter().sum::<f64>() / blocks.len() as f64
    };
    println!("blue mean/block {:.3} red mean/block {:.3}", mean_block(&blue_bits), mean_block(&red_bits));
    let ones: Vec<u8> = vec![1; 40];
    let res_ones = deconvolve_string(&ones, &idx1, 4).unwrap();
    println!("1^40 ranges {:?}", res_ones.components);
}
