// Scratch tool: build the desk-scale tables and dump coverage stats.

use std::collections::BTreeMap;
use std::time::Instant;

use algodecon::ctm::{build_table, Dim, MachineClass};

fn main() {
    let t0 = Instant::now();
    let c22 = MachineClass::new(2, 2, Dim::OneD).unwrap();
    let t22 = build_table(c22, 107, 2).unwrap();
    println!("(2,2,1D) cutoff 107: {:?}, halted {} / total {}, distinct {}",
        t0.elapsed(), t22.halted_machines, t22.total_machines, t22.entries.len());
    let mut by_len: BTreeMap<usize, (usize, u64)> = BTreeMap::new();
    for (k, v) in &t22.entries {
        let e = by_len.entry(k.len()).or_insert((0, 0));
        e.0 += 1;
        e.1 += v;
    }
    for (len, (distinct, mass)) in &by_len {
        println!("  len {len}: {distinct}/{} distinct, mass {mass}", 1u64 << len);
    }

    let t0 = Instant::now();
    let c32 = MachineClass::new(3, 2, Dim::OneD).unwrap();
    let t32 = build_table(c32, 107, 2).unwrap();
    println!("(3,2,1D) cutoff 107: {:?}, halted {} / total {}, distinct {}",
        t0.elapsed(), t32.halted_machines, t32.total_machines, t32.entries.len());
    let mut by_len: BTreeMap<usize, (usize, u64)> = BTreeMap::new();
    let mut max_steps_len = 0;
    for (k, v) in &t32.entries {
        let e = by_len.entry(k.len()).or_insert((0, 0));
        e.0 += 1;
        e.1 += v;
        max_steps_len = max_steps_len.max(k.len());
    }
    for (len, (distinct, mass)) in &by_len {
        println!("  len {len}: {distinct}/{} distinct, mass {mass}", 1u64 << len);
    }
    println!("  ctm bits: 01={:?} 0101={:?} 010101={:?} 110100={:?} 01010101={:?} 11010010={:?}",
        t32.ctm_bits("01"), t32.ctm_bits("0101"), t32.ctm_bits("010101"),
        t32.ctm_bits("110100"), t32.ctm_bits("01010101"), t32.ctm_bits("11010010"));

    let t0 = Instant::now();
    let c2d = MachineClass::new(2, 2, Dim::TwoD).unwrap();
    let t2d = build_table(c2d, 200, 2).unwrap();
    println!("(2,2,2D) cutoff 200: {:?}, halted {} / total {}, distinct {}",
        t0.elapsed(), t2d.halted_machines, t2d.total_machines, t2d.entries.len());
    let mut by_shape: BTreeMap<(usize, usize), (usize, u64)> = BTreeMap::new();
    for (k, v) in &t2d.entries {
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
}
