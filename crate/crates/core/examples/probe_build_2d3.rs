// Scratch: time the full (3,2,2D) table build and dump shape coverage.

use std::collections::BTreeMap;
use std::time::Instant;

use algodecon::ctm::{build_table, Dim, MachineClass};

fn main() {
    let class = MachineClass::new(3, 2, Dim::TwoD).unwrap();
    let t0 = Instant::now();
    let t = build_table(class, 200, 2).unwrap();
    println!(
        "(3,2,2D) cutoff 200: {:?}, halted {} / total {}, distinct {}",
        t0.elapsed(),
        t.halted_machines,
        t.total_machines,
        t.entries.len()
    );
    let mut by_shape: BTreeMap<(usize, usize), (usize, u64)> = BTreeMap::new();
    for (k, v) in &t.entries {
        let (dims, _) = k.split_once(':').unwrap();
        let (r, c) = dims.split_once('x').unwrap();
        let shape = (r.parse().unwrap(), c.parse().unwrap());
        let e = by_shape.entry(shape).or_insert((0, 0));
        e.0 += 1;
        e.1 += v;
    }
    for ((r, c), (distinct, mass)) in &by_shape {
        println!("  {r}x{c}: {distinct}/{} distinct, mass {mass}", 1u64 << (r * c));
    }
    t.save_path(std::path::Path::new("/tmp/t322d.tbl")).unwrap();
}
