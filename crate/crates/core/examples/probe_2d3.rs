// Scratch: estimate (3,2,2D) build cost and square-shape coverage from a slice.

use std::collections::BTreeMap;
use std::time::Instant;

use algodecon::ctm::{enumerate_range, Dim, MachineClass, RunStatus};

fn main() {
    let class = MachineClass::new(3, 2, Dim::TwoD).unwrap();
    let total = class.machine_count().unwrap();
    println!("total {total}");
    let slice = 3_000_000u64;
    // Sample a few spread ranges rather than the low indices only.
    let mut by_shape: BTreeMap<(usize, usize), (usize, u64)> = BTreeMap::new();
    let mut halted = 0u64;
    let t0 = Instant::now();
    for part in 0..3u64 {
        let lo = part * (total / 3);
        for m in enumerate_range(class, lo, lo + slice / 3).unwrap() {
            let out = m.run(200);
            if out.status == RunStatus::Halted {
                halted += 1;
                let key = out.output.unwrap();
                let (dims, _) = key.split_once(':').unwrap();
                let (r, c) = dims.split_once('x').unwrap();
                let shape = (r.parse().unwrap(), c.parse().unwrap());
                let e = by_shape.entry(shape).or_insert((0, 0));
                e.0 += 1;
                e.1 += 1;
            }
        }
    }
    let dt = t0.elapsed();
    println!(
        "slice {slice} in {dt:?} -> est full {:?}; halted {halted}",
        dt * (total / slice) as u32
    );
    for ((r, c), (distinct, mass)) in &by_shape {
        println!("  {r}x{c}: seen {distinct} outputs, mass {mass}");
    }
}
