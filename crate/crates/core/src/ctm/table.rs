//! Aggregation of halting outputs into an empirical Universal
//! Distribution, plus the on-disk table format.

use std::collections::{BTreeMap, HashMap};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use sha2::{Digest, Sha256};

use super::machine::{decode_into, run_with_scratch, Scratch, Transition, TuringMachine};
use super::{CtmError, Dim, MachineClass, RunStatus};

/// Where a table's numbers came from. Tables for classes we can rebuild
/// here are checked against the class arithmetic on load; anything else
/// (e.g. published 5-state tables) is accepted as externally produced.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Provenance {
    SelfBuilt,
    External,
}

/// Empirical frequency table over canonical halting outputs.
///
/// `ctm_bits` of an output with count `c` is `-log2(c / halted)`,
/// derived on demand and never stored.
#[derive(Clone, PartialEq, Debug)]
pub struct CtmTable {
    pub class: MachineClass,
    pub cutoff: u64,
    pub total_machines: u64,
    pub halted_machines: u64,
    pub entries: BTreeMap<String, u64>,
    pub provenance: Provenance,
}

impl CtmTable {
    pub fn count(&self, key: &str) -> Option<u64> {
        self.entries.get(key).copied()
    }

    pub fn ctm_bits(&self, key: &str) -> Option<f64> {
        self.count(key)
            .map(|c| (self.halted_machines as f64).log2() - (c as f64).log2())
    }

    pub fn max_ctm_bits(&self) -> f64 {
        let min_count = self.entries.values().copied().min().unwrap_or(1);
        (self.halted_machines as f64).log2() - (min_count as f64).log2()
    }

    pub fn save_path(&self, path: &Path) -> Result<(), CtmError> {
        let mut w = BufWriter::new(File::create(path)?);
        self.save(&mut w)
    }

    pub fn save<W: Write>(&self, w: &mut W) -> Result<(), CtmError> {
        writeln!(
            w,
            "#class {} {} {}",
            self.class.states,
            self.class.symbols,
            self.class.dim.as_number()
        )?;
        writeln!(w, "#cutoff {}", self.cutoff)?;
        writeln!(w, "#total {}", self.total_machines)?;
        writeln!(w, "#halted {}", self.halted_machines)?;
        writeln!(w, "#checksum {}", self.rows_digest())?;
        for (key, count) in &self.entries {
            writeln!(w, "{key} {count}")?;
        }
        Ok(())
    }

    pub fn load_path(path: &Path) -> Result<Self, CtmError> {
        Self::load(&mut BufReader::new(File::open(path)?))
    }

    pub fn load<R: BufRead>(r: &mut R) -> Result<Self, CtmError> {
        let mut lines = Vec::new();
        let mut buf = String::new();
        loop {
            buf.clear();
            if r.read_line(&mut buf)? == 0 {
                break;
            }
            lines.push(buf.trim_end_matches('\n').to_string());
        }
        let mut it = lines.iter().enumerate();
        let class = parse_header(&mut it, "#class", |rest| {
            let parts: Vec<_> = rest.split_whitespace().collect();
            if parts.len() != 3 {
                return None;
            }
            let states: u8 = parts[0].parse().ok()?;
            let symbols: u8 = parts[1].parse().ok()?;
            let dim = Dim::from_number(parts[2].parse().ok()?)?;
            MachineClass::new(states, symbols, dim).ok()
        })?;
        let cutoff = parse_header(&mut it, "#cutoff", |rest| rest.parse().ok())?;
        let total: u64 = parse_header(&mut it, "#total", |rest| rest.parse().ok())?;
        let halted: u64 = parse_header(&mut it, "#halted", |rest| rest.parse().ok())?;
        let checksum: String =
            parse_header(&mut it, "#checksum", |rest| Some(rest.to_string()))?;

        let mut entries = BTreeMap::new();
        let mut sum = 0u64;
        for (i, line) in it {
            if line.is_empty() {
                continue;
            }
            let (key, count) = line
                .split_once(' ')
                .ok_or_else(|| CtmError::Parse(i + 1, "expected `<key> <count>`".into()))?;
            let count: u64 = count
                .parse()
                .map_err(|_| CtmError::Parse(i + 1, format!("bad count {count:?}")))?;
            if count == 0 {
                return Err(CtmError::Parse(i + 1, "zero count".into()));
            }
            validate_key(class.dim, key).map_err(|m| CtmError::Parse(i + 1, m))?;
            if entries.insert(key.to_string(), count).is_some() {
                return Err(CtmError::DuplicateKey(key.to_string()));
            }
            sum += count;
        }
        if halted > total {
            return Err(CtmError::InconsistentTable(format!(
                "halted {halted} exceeds total {total}"
            )));
        }
        if sum != halted {
            return Err(CtmError::InconsistentTable(format!(
                "row counts sum to {sum} but header declares {halted} halted machines"
            )));
        }
        let provenance = if class.is_self_buildable()
            && class.machine_count().map_or(false, |c| c * 2 == total)
        {
            Provenance::SelfBuilt
        } else {
            Provenance::External
        };
        let table = CtmTable {
            class,
            cutoff,
            total_machines: total,
            halted_machines: halted,
            entries,
            provenance,
        };
        let actual = table.rows_digest();
        if actual != checksum {
            return Err(CtmError::ChecksumMismatch { expected: checksum, actual });
        }
        Ok(table)
    }

    /// SHA-256 over the row lines exactly as written to disk.
    pub fn rows_digest(&self) -> String {
        let mut hasher = Sha256::new();
        for (key, count) in &self.entries {
            hasher.update(key.as_bytes());
            hasher.update(b" ");
            hasher.update(count.to_string().as_bytes());
            hasher.update(b"\n");
        }
        hex_string(&hasher.finalize())
    }
}

fn hex_string(bytes: &[u8]) -> String {
    let mut s = String::with_capacity(bytes.len() * 2);
    for b in bytes {
        s.push_str(&format!("{b:02x}"));
    }
    s
}

fn parse_header<'a, T>(
    it: &mut impl Iterator<Item = (usize, &'a String)>,
    tag: &str,
    parse: impl FnOnce(&str) -> Option<T>,
) -> Result<T, CtmError> {
    let (i, line) = it
        .next()
        .ok_or_else(|| CtmError::Parse(0, format!("missing {tag} header")))?;
    let rest = line
        .strip_prefix(tag)
        .and_then(|r| r.strip_prefix(' '))
        .ok_or_else(|| CtmError::Parse(i + 1, format!("expected {tag} header")))?;
    parse(rest).ok_or_else(|| CtmError::Parse(i + 1, format!("malformed {tag} header")))
}

fn validate_key(dim: Dim, key: &str) -> Result<(), String> {
    match dim {
        Dim::OneD => {
            if key.is_empty() || !key.bytes().all(|b| b == b'0' || b == b'1') {
                return Err(format!("bad 1D key {key:?}"));
            }
        }
        Dim::TwoD => {
            let err = || format!("bad 2D key {key:?}");
            let (dims, bits) = key.split_once(':').ok_or_else(err)?;
            let (r, c) = dims.split_once('x').ok_or_else(err)?;
            let r: usize = r.parse().map_err(|_| err())?;
            let c: usize = c.parse().map_err(|_| err())?;
            if r == 0 || c == 0 || bits.len() != r * c {
                return Err(err());
            }
            if !bits.bytes().all(|b| b == b'0' || b == b'1') {
                return Err(err());
            }
        }
    }
    Ok(())
}

/// Runs every machine of the class to `cutoff` and aggregates halting
/// outputs. Work is split into contiguous index ranges across `workers`
/// threads with private histograms; the merge is count addition, so the
/// result is identical for any worker count.
///
/// Each machine is counted twice: once started on a 0-blank tape and
/// once on a 1-blank tape. The 1-blank run of a machine equals the
/// complement-relabelled 0-blank run of its 0/1-swapped twin, which is
/// again a machine of the class, so the second pass reduces to adding
/// the complement reflection of the raw histogram. Without it, output
/// and complement counts would differ (the symbol swap is a class
/// bijection but does not fix the blank tape). `total_machines` and
/// `halted_machines` therefore count runs, at two per machine.
pub fn build_table(class: MachineClass, cutoff: u64, workers: usize) -> Result<CtmTable, CtmError> {
    let machines = class.machine_count()?;
    let total = machines
        .checked_mul(2)
        .ok_or_else(|| CtmError::ClassTooLarge(format!("{class:?}")))?;
    let workers = workers.clamp(1, 256) as u64;
    let chunk = machines.div_ceil(workers);
    let ranges: Vec<(u64, u64)> = (0..workers)
        .map(|w| (w * chunk, ((w + 1) * chunk).min(machines)))
        .filter(|(lo, hi)| lo < hi)
        .collect();

    let partials: Vec<(u64, HashMap<String, u64>)> = std::thread::scope(|scope| {
        let handles: Vec<_> = ranges
            .iter()
            .map(|&(lo, hi)| scope.spawn(move || count_range(class, cutoff, lo, hi)))
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });

    let mut raw: BTreeMap<String, u64> = BTreeMap::new();
    let mut halted = 0u64;
    for (h, map) in partials {
        halted += h;
        for (key, count) in map {
            *raw.entry(key).or_insert(0) += count;
        }
    }
    let mut entries: BTreeMap<String, u64> = BTreeMap::new();
    for (key, count) in &raw {
        *entries.entry(key.clone()).or_insert(0) += count;
        *entries.entry(complement_key(key)).or_insert(0) += count;
    }
    Ok(CtmTable {
        class,
        cutoff,
        total_machines: total,
        halted_machines: halted * 2,
        entries,
        provenance: Provenance::SelfBuilt,
    })
}

/// Output key with all written symbols flipped (dimensions untouched).
pub fn complement_key(key: &str) -> String {
    match key.split_once(':') {
        Some((dims, bits)) => {
            let flipped: String =
                bits.chars().map(|c| if c == '0' { '1' } else { '0' }).collect();
            format!("{dims}:{flipped}")
        }
        None => key.chars().map(|c| if c == '0' { '1' } else { '0' }).collect(),
    }
}

fn count_range(
    class: MachineClass,
    cutoff: u64,
    lo: u64,
    hi: u64,
) -> (u64, HashMap<String, u64>) {
    let mut scratch = Scratch::new(class.dim, cutoff);
    let mut transitions = vec![Transition::Halt { write: 0 }; class.entry_count() as usize];
    let mut counts: HashMap<String, u64> = HashMap::new();
    let mut halted = 0u64;
    let mut machine = TuringMachine { class, index: 0, transitions: Vec::new() };
    for index in lo..hi {
        decode_into(&class, index, &mut transitions);
        machine.index = index;
        std::mem::swap(&mut machine.transitions, &mut transitions);
        let outcome = run_with_scratch(&machine, cutoff, &mut scratch, false);
        std::mem::swap(&mut machine.transitions, &mut transitions);
        if outcome.status == RunStatus::Halted {
            if let Some(out) = outcome.output {
                if !out.is_empty() {
                    halted += 1;
                    *counts.entry(out).or_insert(0) += 1;
                }
            }
        }
    }
    (halted, counts)
}

/// Load a table, falling back to `ALGODECON_TABLE_DIR` when `path` is
/// relative and not found in the working directory.
pub fn load_table_with_env(path: &Path) -> Result<CtmTable, CtmError> {
    if path.exists() || path.is_absolute() {
        return CtmTable::load_path(path);
    }
    if let Ok(dir) = std::env::var("ALGODECON_TABLE_DIR") {
        let candidate = Path::new(&dir).join(path);
        if candidate.exists() {
            return CtmTable::load_path(&candidate);
        }
    }
    CtmTable::load_path(path)
}

/// Convenience wrappers used by tests and the CLI.
pub fn save_table(table: &CtmTable, w: &mut impl Write) -> Result<(), CtmError> {
    table.save(w)
}

pub fn load_table(r: &mut impl Read) -> Result<CtmTable, CtmError> {
    CtmTable::load(&mut BufReader::new(r))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn class(n: u8, dim: Dim) -> MachineClass {
        MachineClass::new(n, 2, dim).unwrap()
    }

    #[test]
    fn one_state_table_is_symmetric_singletons() {
        let t = build_table(class(1, Dim::OneD), 10, 1).unwrap();
        assert_eq!(t.total_machines, 2 * 36);
        // Only first-step halters produce output; they write one symbol.
        for key in t.entries.keys() {
            assert_eq!(key.len(), 1, "unexpected output {key}");
        }
        assert_eq!(t.count("0"), t.count("1"));
        assert!(t.count("0").is_some());
        assert_eq!(t.halted_machines, t.entries.values().sum::<u64>());
    }

    #[test]
    fn builds_are_identical_for_any_worker_count() {
        let c = class(2, Dim::OneD);
        let t1 = build_table(c, 20, 1).unwrap();
        let t2 = build_table(c, 20, 2).unwrap();
        let t3 = build_table(c, 20, 7).unwrap();
        assert_eq!(t1, t2);
        assert_eq!(t1, t3);
    }

    #[test]
    fn merging_half_ranges_equals_full_build() {
        let c = class(2, Dim::OneD);
        let full = build_table(c, 20, 1).unwrap();
        let (h1, m1) = count_range(c, 20, 0, 5_000);
        let (h2, m2) = count_range(c, 20, 5_000, 10_000);
        assert_eq!(2 * (h1 + h2), full.halted_machines);
        let mut merged: BTreeMap<String, u64> = BTreeMap::new();
        for (k, v) in m1.into_iter().chain(m2) {
            *merged.entry(k.clone()).or_insert(0) += v;
            *merged.entry(complement_key(&k)).or_insert(0) += v;
        }
        assert_eq!(merged, full.entries);
    }

    #[test]
    fn complement_and_reversal_symmetry() {
        let t = build_table(class(2, Dim::OneD), 20, 2).unwrap();
        for (key, count) in &t.entries {
            let complement: String =
                key.chars().map(|c| if c == '0' { '1' } else { '0' }).collect();
            let reversal: String = key.chars().rev().collect();
            assert_eq!(t.count(&complement), Some(*count), "complement of {key}");
            assert_eq!(t.count(&reversal), Some(*count), "reversal of {key}");
        }
    }

    #[test]
    fn halting_counts_monotone_in_cutoff() {
        let c = class(2, Dim::OneD);
        let short = build_table(c, 3, 1).unwrap();
        let long = build_table(c, 20, 1).unwrap();
        assert!(short.halted_machines <= long.halted_machines);
        for (key, count) in &short.entries {
            assert!(long.count(key).unwrap_or(0) >= *count);
        }
    }

    #[test]
    fn semi_measure_mass_below_one() {
        let t = build_table(class(2, Dim::OneD), 20, 1).unwrap();
        assert!(t.halted_machines < t.total_machines);
        let mass: f64 = t
            .entries
            .values()
            .map(|&c| c as f64 / t.total_machines as f64)
            .sum();
        assert!(mass < 1.0);
    }

    #[test]
    fn ctm_bits_is_exact_log_frequency() {
        let t = build_table(class(2, Dim::OneD), 20, 1).unwrap();
        for (key, &count) in &t.entries {
            let bits = t.ctm_bits(key).unwrap();
            let exact = -((count as f64 / t.halted_machines as f64).log2());
            assert!((bits - exact).abs() < 1e-12);
            assert!(bits > 0.0, "ctm bits for {key} not positive");
        }
    }

    #[test]
    fn save_load_roundtrip_exact() {
        let t = build_table(class(1, Dim::OneD), 10, 1).unwrap();
        let mut buf = Vec::new();
        t.save(&mut buf).unwrap();
        let loaded = CtmTable::load(&mut BufReader::new(&buf[..])).unwrap();
        assert_eq!(loaded, t);
        assert_eq!(loaded.provenance, Provenance::SelfBuilt);
    }

    #[test]
    fn load_rejects_count_sum_mismatch() {
        let t = build_table(class(1, Dim::OneD), 10, 1).unwrap();
        let mut buf = Vec::new();
        t.save(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap().replace("#halted 24", "#halted 23");
        let err = CtmTable::load(&mut BufReader::new(text.as_bytes())).unwrap_err();
        assert!(matches!(err, CtmError::InconsistentTable(_)), "got {err:?}");
    }

    #[test]
    fn load_rejects_checksum_mismatch_and_duplicates() {
        let t = build_table(class(1, Dim::OneD), 10, 1).unwrap();
        let mut buf = Vec::new();
        t.save(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let tampered = text.replace("0 ", "1 ");
        let err = CtmTable::load(&mut BufReader::new(tampered.as_bytes())).unwrap_err();
        assert!(
            matches!(err, CtmError::ChecksumMismatch { .. } | CtmError::DuplicateKey(_)),
            "got {err:?}"
        );
    }

    #[test]
    fn external_table_is_flagged() {
        // A 2D table advertised as a 5-state class we never rebuild.
        let text = "#class 5 2 2\n#cutoff 500\n#total 1000\n#halted 2\n#checksum CK\n2x2:0110 1\n2x2:1001 1\n";
        let digest = {
            let mut entries = BTreeMap::new();
            entries.insert("2x2:0110".to_string(), 1u64);
            entries.insert("2x2:1001".to_string(), 1u64);
            CtmTable {
                class: MachineClass::new(5, 2, Dim::TwoD).unwrap(),
                cutoff: 500,
                total_machines: 1000,
                halted_machines: 2,
                entries,
                provenance: Provenance::External,
            }
            .rows_digest()
        };
        let text = text.replace("CK", &digest);
        let t = CtmTable::load(&mut BufReader::new(text.as_bytes())).unwrap();
        assert_eq!(t.provenance, Provenance::External);
        assert_eq!(t.count("2x2:0110"), Some(1));
    }
}
