//! Small Turing machines in the busy-beaver formalism: one explicit halt
//! state, blank symbol 0, two-way unbounded tape (1D) or unbounded grid
//! (2D, "turmite"). Halting transitions write a symbol and stop without
//! moving, so a class with `n` states and 2 symbols has `(4n+2)^(2n)`
//! machines in 1D and `(8n+2)^(2n)` in 2D.

use super::CtmError;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Dim {
    OneD,
    TwoD,
}

impl Dim {
    pub fn as_number(self) -> u8 {
        match self {
            Dim::OneD => 1,
            Dim::TwoD => 2,
        }
    }

    pub fn from_number(n: u8) -> Option<Self> {
        match n {
            1 => Some(Dim::OneD),
            2 => Some(Dim::TwoD),
            _ => None,
        }
    }
}

/// Head moves; `Up`/`Down` are only valid for 2D machines.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Move {
    Left,
    Right,
    Up,
    Down,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Transition {
    Halt { write: u8 },
    Step { write: u8, mv: Move, next: u8 },
}

/// A machine class `(n, k, dim)`. Only `k = 2` is supported; other
/// alphabets are reserved.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct MachineClass {
    pub states: u8,
    pub symbols: u8,
    pub dim: Dim,
}

impl MachineClass {
    pub fn new(states: u8, symbols: u8, dim: Dim) -> Result<Self, CtmError> {
        if states < 1 {
            return Err(CtmError::InvalidClass("state count must be at least 1".into()));
        }
        if symbols != 2 {
            return Err(CtmError::UnsupportedSymbols(symbols));
        }
        Ok(MachineClass { states, symbols, dim })
    }

    /// Number of alternatives for a single transition entry: the two
    /// halting writes plus write x move x next-state combinations.
    pub fn entry_variants(&self) -> u64 {
        let n = self.states as u64;
        match self.dim {
            Dim::OneD => 4 * n + 2,
            Dim::TwoD => 8 * n + 2,
        }
    }

    pub fn entry_count(&self) -> u32 {
        2 * self.states as u32
    }

    /// Total machines in the class, or a capacity error if the count
    /// does not fit the 64-bit index space.
    pub fn machine_count(&self) -> Result<u64, CtmError> {
        self.entry_variants()
            .checked_pow(self.entry_count())
            .ok_or_else(|| CtmError::ClassTooLarge(format!("{self:?}")))
    }

    /// Classes this artifact can rebuild from scratch at desk scale;
    /// anything else found in a table file is treated as externally
    /// produced.
    pub fn is_self_buildable(&self) -> bool {
        match self.dim {
            Dim::OneD => self.states <= 4,
            Dim::TwoD => self.states <= 2,
        }
    }
}

const MOVES_1D: [Move; 2] = [Move::Left, Move::Right];
const MOVES_2D: [Move; 4] = [Move::Up, Move::Down, Move::Left, Move::Right];

/// A fully defined transition table. `transitions[(s-1)*2 + r]` is the
/// entry for state `s` reading symbol `r`.
///
/// Machine index and transition table are a bijection: entries are
/// ordered by (state, read symbol) and each entry is a base-`(4n+2)`
/// (or `(8n+2)`) digit of the index, the first entry being the most
/// significant digit. Within a digit, values 0 and 1 are `Halt` writing
/// 0 and 1; value `v >= 2` encodes `u = v - 2` as
/// `write = u % 2`, `move = (u/2) % m`, `next = u/(2m) + 1` with the
/// move order left, right (1D) or up, down, left, right (2D).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TuringMachine {
    pub class: MachineClass,
    pub index: u64,
    pub transitions: Vec<Transition>,
}

fn decode_entry(class: &MachineClass, digit: u64) -> Transition {
    match digit {
        0 => Transition::Halt { write: 0 },
        1 => Transition::Halt { write: 1 },
        v => {
            let u = v - 2;
            let write = (u % 2) as u8;
            let moves: &[Move] = match class.dim {
                Dim::OneD => &MOVES_1D,
                Dim::TwoD => &MOVES_2D,
            };
            let mv = moves[(u / 2) as usize % moves.len()];
            let next = (u / (2 * moves.len() as u64)) as u8 + 1;
            Transition::Step { write, mv, next }
        }
    }
}

fn encode_entry(class: &MachineClass, t: &Transition) -> u64 {
    match *t {
        Transition::Halt { write } => write as u64,
        Transition::Step { write, mv, next } => {
            let moves: &[Move] = match class.dim {
                Dim::OneD => &MOVES_1D,
                Dim::TwoD => &MOVES_2D,
            };
            let mv_idx = moves.iter().position(|m| *m == mv).unwrap() as u64;
            2 + write as u64 + 2 * (mv_idx + moves.len() as u64 * (next as u64 - 1))
        }
    }
}

impl TuringMachine {
    pub fn from_index(class: MachineClass, index: u64) -> Result<Self, CtmError> {
        let count = class.machine_count()?;
        if index >= count {
            return Err(CtmError::InvalidClass(format!(
                "index {index} out of range for class of {count} machines"
            )));
        }
        let mut transitions = vec![Transition::Halt { write: 0 }; class.entry_count() as usize];
        decode_into(&class, index, &mut transitions);
        Ok(TuringMachine { class, index, transitions })
    }

    pub fn encode_index(&self) -> u64 {
        let base = self.class.entry_variants();
        let mut index = 0u64;
        for t in &self.transitions {
            index = index * base + encode_entry(&self.class, t);
        }
        index
    }

    pub fn run(&self, cutoff: u64) -> RunOutcome {
        let mut scratch = Scratch::new(self.class.dim, cutoff);
        run_with_scratch(self, cutoff, &mut scratch, false)
    }

    /// Like [`run`](Self::run) but a cutoff-exceeded run still reports
    /// the tape contents written so far, for display of non-halting
    /// machines.
    pub fn run_snapshot(&self, cutoff: u64) -> RunOutcome {
        let mut scratch = Scratch::new(self.class.dim, cutoff);
        run_with_scratch(self, cutoff, &mut scratch, true)
    }
}

pub(crate) fn decode_into(class: &MachineClass, index: u64, out: &mut [Transition]) {
    let base = class.entry_variants();
    let entries = class.entry_count() as usize;
    let mut rest = index;
    for j in (0..entries).rev() {
        out[j] = decode_entry(class, rest % base);
        rest /= base;
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RunStatus {
    Halted,
    CutoffExceeded,
}

/// Result of simulating one machine from an all-blank tape.
///
/// `output` is the canonical tape content over the span of cells the
/// head occupied: every occupied cell has been written (possibly with
/// an explicit 0), so the span doubles as the written region. In 2D the
/// output is the minimal bounding rectangle of occupied cells, keyed
/// `RxC:bits` row-major.
#[derive(Clone, PartialEq, Debug)]
pub struct RunOutcome {
    pub status: RunStatus,
    pub output: Option<String>,
    pub steps: u64,
}

/// Reusable simulation buffers. One per worker thread; cleared between
/// runs by resetting only the touched span.
pub(crate) struct Scratch {
    dim: Dim,
    cutoff: usize,
    tape: Vec<u8>,
    side: usize, // 2D row stride
    walks: Vec<Option<FreshWalk>>,
}

impl Scratch {
    pub(crate) fn new(dim: Dim, cutoff: u64) -> Self {
        let cutoff = cutoff as usize;
        match dim {
            Dim::OneD => {
                Scratch { dim, cutoff, tape: vec![0; 2 * cutoff + 3], side: 0, walks: Vec::new() }
            }
            Dim::TwoD => {
                let side = 2 * cutoff + 3;
                Scratch { dim, cutoff, tape: vec![0; side * side], side, walks: Vec::new() }
            }
        }
    }

    fn reset_walks(&mut self, states: u8) {
        self.walks.clear();
        self.walks.resize(states as usize, None);
    }
}

/// Returns true when the machine, currently in `state` about to process
/// the fresh cell `q` (outside the written box `bbox`), provably never
/// halts.
fn escapes(
    m: &TuringMachine,
    walks: &mut [Option<FreshWalk>],
    state: u8,
    q: (i64, i64),
    bbox: (i64, i64, i64, i64),
) -> bool {
    let slot = &mut walks[state as usize - 1];
    if slot.is_none() {
        *slot = Some(analyze_fresh_walk(m, state));
    }
    let walk = slot.as_ref().unwrap();
    !walk.may_halt && walk.self_safe && walk_avoids_box(walk, q, bbox)
}

pub(crate) fn run_with_scratch(
    m: &TuringMachine,
    cutoff: u64,
    scratch: &mut Scratch,
    snapshot: bool,
) -> RunOutcome {
    debug_assert_eq!(m.class.dim, scratch.dim);
    debug_assert!(cutoff as usize <= scratch.cutoff);
    match m.class.dim {
        Dim::OneD => run_1d(m, cutoff, scratch, snapshot),
        Dim::TwoD => run_2d(m, cutoff, scratch, snapshot),
    }
}

/// Analysis of the walk a machine performs from a given state over
/// all-blank cells, following only the `(state, 0)` transitions.
///
/// Because the state set is finite the walk either reaches a halting
/// entry within `n` steps or enters a cycle. If the cycle provably stays
/// on cells it has not written a 1 to and never returns to previously
/// written territory, the machine cannot halt and simulation can stop.
#[derive(Clone, Debug)]
struct FreshWalk {
    may_halt: bool,
    /// Positions (relative to the walk start) processed before the
    /// cycle, paired with the symbol written there.
    prefix: Vec<((i64, i64), u8)>,
    /// Positions of one full cycle period, paired with writes.
    cycle: Vec<((i64, i64), u8)>,
    /// Net displacement of one period.
    delta: (i64, i64),
    /// Whether the infinite walk provably keeps reading blanks,
    /// independent of earlier tape contents (those are covered by the
    /// bounding-box test at escape time).
    self_safe: bool,
}

fn analyze_fresh_walk(m: &TuringMachine, start_state: u8) -> FreshWalk {
    let mut pos = (0i64, 0i64);
    let mut state = start_state;
    let mut first_seen = [usize::MAX; 256];
    let mut trail: Vec<((i64, i64), u8)> = Vec::new();
    loop {
        if first_seen[state as usize] != usize::MAX {
            let split = first_seen[state as usize];
            let cycle: Vec<_> = trail[split..].to_vec();
            let prefix: Vec<_> = trail[..split].to_vec();
            let cycle_start = cycle[0].0;
            let delta = (pos.0 - cycle_start.0, pos.1 - cycle_start.1);
            let self_safe = fresh_walk_self_safe(&prefix, &cycle, delta);
            return FreshWalk { may_halt: false, prefix, cycle, delta, self_safe };
        }
        first_seen[state as usize] = trail.len();
        match m.transitions[(state as usize - 1) * 2] {
            Transition::Halt { .. } => {
                return FreshWalk {
                    may_halt: true,
                    prefix: Vec::new(),
                    cycle: Vec::new(),
                    delta: (0, 0),
                    self_safe: false,
                }
            }
            Transition::Step { write, mv, next } => {
                trail.push((pos, write));
                match mv {
                    Move::Left => pos.1 -= 1,
                    Move::Right => pos.1 += 1,
                    Move::Up => pos.0 -= 1,
                    Move::Down => pos.0 += 1,
                }
                state = next;
            }
        }
    }
}

/// True when every cell the infinite walk processes is guaranteed to
/// still hold a blank when processed (ignoring pre-walk tape contents).
fn fresh_walk_self_safe(
    prefix: &[((i64, i64), u8)],
    cycle: &[((i64, i64), u8)],
    delta: (i64, i64),
) -> bool {
    if delta == (0, 0) {
        // The walk loops over a fixed finite set of cells; it keeps
        // reading blanks iff it only ever writes blanks.
        return prefix.iter().chain(cycle).all(|&(_, w)| w == 0);
    }
    // Distinctness of all first-period positions.
    let all: Vec<(i64, i64)> = prefix.iter().chain(cycle).map(|&(p, _)| p).collect();
    for i in 0..all.len() {
        for j in i + 1..all.len() {
            if all[i] == all[j] {
                return false;
            }
        }
    }
    // Later periods (k >= 1) must not land on any first-period position.
    for &(c, _) in cycle {
        for &p in &all {
            if on_forward_ray(c, delta, p) {
                return false;
            }
        }
    }
    true
}

/// Whether `target = origin + k * delta` for some integer `k >= 1`.
fn on_forward_ray(origin: (i64, i64), delta: (i64, i64), target: (i64, i64)) -> bool {
    let d = (target.0 - origin.0, target.1 - origin.1);
    let k = if delta.0 != 0 {
        if d.0 % delta.0 != 0 {
            return false;
        }
        d.0 / delta.0
    } else if delta.1 != 0 {
        if d.0 != 0 || d.1 % delta.1 != 0 {
            return false;
        }
        d.1 / delta.1
    } else {
        return false;
    };
    k >= 1 && d.0 == k * delta.0 && d.1 == k * delta.1
}

/// Integer solutions `k` of `lo <= k*step <= hi`, intersected with
/// `k >= 0`. `None` means no solution.
fn k_interval(lo: i64, hi: i64, step: i64) -> Option<(i64, i64)> {
    if step == 0 {
        return if lo <= 0 && 0 <= hi { Some((0, i64::MAX)) } else { None };
    }
    let (a, b) = if step > 0 {
        (div_ceil_i(lo, step), div_floor_i(hi, step))
    } else {
        (div_ceil_i(hi, step), div_floor_i(lo, step))
    };
    let a = a.max(0);
    if a <= b {
        Some((a, b))
    } else {
        None
    }
}

fn div_floor_i(a: i64, b: i64) -> i64 {
    a.div_euclid(b)
}

fn div_ceil_i(a: i64, b: i64) -> i64 {
    -(-a).div_euclid(b)
}

/// True when the walk starting at absolute position `q` provably never
/// touches the box `[r0..=r1] x [c0..=c1]` of previously written cells.
fn walk_avoids_box(walk: &FreshWalk, q: (i64, i64), bbox: (i64, i64, i64, i64)) -> bool {
    let (r0, r1, c0, c1) = bbox;
    let inside =
        |p: (i64, i64)| -> bool { p.0 >= r0 && p.0 <= r1 && p.1 >= c0 && p.1 <= c1 };
    for &(p, _) in &walk.prefix {
        if inside((q.0 + p.0, q.1 + p.1)) {
            return false;
        }
    }
    for &(cpos, _) in &walk.cycle {
        let base = (q.0 + cpos.0, q.1 + cpos.1);
        if walk.delta == (0, 0) {
            if inside(base) {
                return false;
            }
            continue;
        }
        let kr = k_interval(r0 - base.0, r1 - base.0, walk.delta.0);
        let kc = k_interval(c0 - base.1, c1 - base.1, walk.delta.1);
        if let (Some((ar, br)), Some((ac, bc))) = (kr, kc) {
            if ar.max(ac) <= br.min(bc) {
                return false;
            }
        }
    }
    true
}

fn run_1d(m: &TuringMachine, cutoff: u64, scratch: &mut Scratch, snapshot: bool) -> RunOutcome {
    scratch.reset_walks(m.class.states);
    let origin = scratch.cutoff + 1;
    let tape = &mut scratch.tape;
    let mut pos = origin;
    let (mut lo, mut hi) = (pos, pos);
    let mut state = 1u8;
    let mut steps = 0u64;
    let mut halted = false;
    while steps < cutoff {
        if pos < lo || pos > hi {
            // Fresh frontier cell: the rest of the run follows the
            // blank-cell walk until it re-enters written territory. The
            // snapshot path skips this so displayed tapes keep growing.
            if !snapshot
                && steps > 0
                && escapes(
                    m,
                    &mut scratch.walks,
                    state,
                    (0, pos as i64),
                    (0, 0, lo as i64, hi as i64),
                )
            {
                break;
            }
            if pos < lo {
                lo = pos;
            } else {
                hi = pos;
            }
        }
        let sym = tape[pos];
        steps += 1;
        match m.transitions[(state as usize - 1) * 2 + sym as usize] {
            Transition::Halt { write } => {
                tape[pos] = write;
                halted = true;
                break;
            }
            Transition::Step { write, mv, next } => {
                tape[pos] = write;
                state = next;
                match mv {
                    Move::Left => pos -= 1,
                    Move::Right => pos += 1,
                    _ => unreachable!("vertical move in 1D machine"),
                }
            }
        }
    }
    let output = if halted || snapshot {
        Some(tape[lo..=hi].iter().map(|&c| if c == 0 { '0' } else { '1' }).collect())
    } else {
        None
    };
    tape[lo..=hi].fill(0);
    RunOutcome {
        status: if halted { RunStatus::Halted } else { RunStatus::CutoffExceeded },
        output,
        steps,
    }
}

fn run_2d(m: &TuringMachine, cutoff: u64, scratch: &mut Scratch, snapshot: bool) -> RunOutcome {
    scratch.reset_walks(m.class.states);
    let origin = scratch.cutoff + 1;
    let side = scratch.side;
    let tape = &mut scratch.tape;
    let (mut r, mut c) = (origin, origin);
    let (mut r0, mut r1, mut c0, mut c1) = (r, r, c, c);
    let mut state = 1u8;
    let mut steps = 0u64;
    let mut halted = false;
    while steps < cutoff {
        if r < r0 || r > r1 || c < c0 || c > c1 {
            if !snapshot
                && steps > 0
                && escapes(
                    m,
                    &mut scratch.walks,
                    state,
                    (r as i64, c as i64),
                    (r0 as i64, r1 as i64, c0 as i64, c1 as i64),
                )
            {
                break;
            }
        }
        r0 = r0.min(r);
        r1 = r1.max(r);
        c0 = c0.min(c);
        c1 = c1.max(c);
        let cell = r * side + c;
        let sym = tape[cell];
        steps += 1;
        match m.transitions[(state as usize - 1) * 2 + sym as usize] {
            Transition::Halt { write } => {
                tape[cell] = write;
                halted = true;
                break;
            }
            Transition::Step { write, mv, next } => {
                tape[cell] = write;
                state = next;
                match mv {
                    Move::Up => r -= 1,
                    Move::Down => r += 1,
                    Move::Left => c -= 1,
                    Move::Right => c += 1,
                }
            }
        }
    }
    let output = if halted || snapshot {
        let rows = r1 - r0 + 1;
        let cols = c1 - c0 + 1;
        let mut s = format!("{rows}x{cols}:");
        for rr in r0..=r1 {
            for cc in c0..=c1 {
                s.push(if tape[rr * side + cc] == 0 { '0' } else { '1' });
            }
        }
        Some(s)
    } else {
        None
    };
    for rr in r0..=r1 {
        tape[rr * side + c0..=rr * side + c1].fill(0);
    }
    RunOutcome {
        status: if halted { RunStatus::Halted } else { RunStatus::CutoffExceeded },
        output,
        steps,
    }
}

/// Yields every machine of `class` with index in `[lo, hi)`, in index
/// order. The full class is `enumerate_machines`.
pub fn enumerate_range(
    class: MachineClass,
    lo: u64,
    hi: u64,
) -> Result<impl Iterator<Item = TuringMachine>, CtmError> {
    let count = class.machine_count()?;
    if lo > hi || hi > count {
        return Err(CtmError::InvalidClass(format!(
            "range [{lo}, {hi}) out of bounds for class of {count} machines"
        )));
    }
    Ok((lo..hi).map(move |index| {
        let mut transitions =
            vec![Transition::Halt { write: 0 }; class.entry_count() as usize];
        decode_into(&class, index, &mut transitions);
        TuringMachine { class, index, transitions }
    }))
}

pub fn enumerate_machines(
    class: MachineClass,
) -> Result<impl Iterator<Item = TuringMachine>, CtmError> {
    let count = class.machine_count()?;
    enumerate_range(class, 0, count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn class_1d(n: u8) -> MachineClass {
        MachineClass::new(n, 2, Dim::OneD).unwrap()
    }

    #[test]
    fn class_counts_match_closed_form() {
        assert_eq!(class_1d(1).machine_count().unwrap(), 36);
        assert_eq!(class_1d(2).machine_count().unwrap(), 10_000);
        assert_eq!(class_1d(3).machine_count().unwrap(), 7_529_536);
        let c2d = MachineClass::new(2, 2, Dim::TwoD).unwrap();
        assert_eq!(c2d.machine_count().unwrap(), 18u64.pow(4));
    }

    #[test]
    fn oversized_class_is_a_capacity_error() {
        let big = MachineClass::new(7, 2, Dim::OneD).unwrap();
        assert!(matches!(big.machine_count(), Err(CtmError::ClassTooLarge(_))));
    }

    #[test]
    fn non_binary_alphabet_rejected() {
        assert!(matches!(
            MachineClass::new(2, 3, Dim::OneD),
            Err(CtmError::UnsupportedSymbols(3))
        ));
    }

    #[test]
    fn enumeration_is_exhaustive_and_in_order() {
        let machines: Vec<_> = enumerate_machines(class_1d(1)).unwrap().collect();
        assert_eq!(machines.len(), 36);
        for (i, m) in machines.iter().enumerate() {
            assert_eq!(m.index, i as u64);
            assert_eq!(m.encode_index(), i as u64);
        }
        // Sub-ranges partition the class.
        let a: Vec<_> = enumerate_range(class_1d(1), 0, 17).unwrap().collect();
        let b: Vec<_> = enumerate_range(class_1d(1), 17, 36).unwrap().collect();
        assert_eq!(a.len() + b.len(), 36);
        assert_eq!(a[16], machines[16]);
        assert_eq!(b[0], machines[17]);
    }

    #[test]
    fn immediate_halt_writes_its_symbol() {
        // Index 0 decodes to all-Halt{write 0}; first step halts.
        let m = TuringMachine::from_index(class_1d(2), 0).unwrap();
        let out = m.run(10);
        assert_eq!(out.status, RunStatus::Halted);
        assert_eq!(out.steps, 1);
        assert_eq!(out.output.as_deref(), Some("0"));
    }

    #[test]
    fn alternator_snapshot_writes_01_pattern() {
        // A0 -> write 0, right, B; B0 -> write 1, right, A. Never halts,
        // leaving 0101... behind the head.
        let class = class_1d(2);
        let tm = TuringMachine {
            class,
            index: 0,
            transitions: vec![
                Transition::Step { write: 0, mv: Move::Right, next: 2 },
                Transition::Halt { write: 0 },
                Transition::Step { write: 1, mv: Move::Right, next: 1 },
                Transition::Halt { write: 0 },
            ],
        };
        let tm = TuringMachine::from_index(class, tm.encode_index()).unwrap();
        let out = tm.run_snapshot(20);
        assert_eq!(out.status, RunStatus::CutoffExceeded);
        let tape = out.output.unwrap();
        assert!(tape.starts_with("01010101"), "tape was {tape}");
    }

    #[test]
    fn two_d_output_is_bounding_rectangle() {
        // Write 1, move right, write 1 and halt: a 1x2 block of ones.
        let class = MachineClass::new(2, 2, Dim::TwoD).unwrap();
        let tm = TuringMachine {
            class,
            index: 0,
            transitions: vec![
                Transition::Step { write: 1, mv: Move::Right, next: 2 },
                Transition::Halt { write: 0 },
                Transition::Halt { write: 1 },
                Transition::Halt { write: 0 },
            ],
        };
        let out = tm.run(10);
        assert_eq!(out.status, RunStatus::Halted);
        assert_eq!(out.output.as_deref(), Some("1x2:11"));
        assert_eq!(out.steps, 2);
    }

    proptest! {
        #[test]
        fn index_roundtrips_through_transition_table(
            n in 1u8..=4,
            dim in prop_oneof![Just(Dim::OneD), Just(Dim::TwoD)],
            frac in 0.0f64..1.0,
        ) {
            let class = MachineClass::new(n, 2, dim).unwrap();
            let count = class.machine_count().unwrap();
            let index = (frac * (count as f64 - 1.0)) as u64;
            let m = TuringMachine::from_index(class, index).unwrap();
            prop_assert_eq!(m.encode_index(), index);
        }
    }

    /// Straight-line reference simulator with no early-exit analysis,
    /// used as the oracle for the escape optimization.
    fn run_brute(m: &TuringMachine, cutoff: u64) -> (RunStatus, Option<String>, u64) {
        let span = 2 * cutoff as usize + 3;
        let (rows, origin) = match m.class.dim {
            Dim::OneD => (1usize, 0usize),
            Dim::TwoD => (span, cutoff as usize + 1),
        };
        let mut tape = vec![vec![0u8; span]; rows];
        let (mut r, mut c) = (origin, cutoff as usize + 1);
        let (mut r0, mut r1, mut c0, mut c1) = (r, r, c, c);
        let mut state = 1u8;
        let mut steps = 0;
        while steps < cutoff {
            r0 = r0.min(r);
            r1 = r1.max(r);
            c0 = c0.min(c);
            c1 = c1.max(c);
            steps += 1;
            match m.transitions[(state as usize - 1) * 2 + tape[r][c] as usize] {
                Transition::Halt { write } => {
                    tape[r][c] = write;
                    let mut out = String::new();
                    if m.class.dim == Dim::TwoD {
                        out = format!("{}x{}:", r1 - r0 + 1, c1 - c0 + 1);
                    }
                    for row in &tape[r0..=r1] {
                        for cell in &row[c0..=c1] {
                            out.push(if *cell == 0 { '0' } else { '1' });
                        }
                    }
                    return (RunStatus::Halted, Some(out), steps);
                }
                Transition::Step { write, mv, next } => {
                    tape[r][c] = write;
                    state = next;
                    match mv {
                        Move::Left => c -= 1,
                        Move::Right => c += 1,
                        Move::Up => r -= 1,
                        Move::Down => r += 1,
                    }
                }
            }
        }
        (RunStatus::CutoffExceeded, None, steps)
    }

    #[test]
    fn escape_analysis_agrees_with_brute_force_1d() {
        let class = class_1d(2);
        let mut scratch = Scratch::new(Dim::OneD, 107);
        for m in enumerate_machines(class).unwrap() {
            let fast = run_with_scratch(&m, 107, &mut scratch, false);
            let (status, output, steps) = run_brute(&m, 107);
            assert_eq!(fast.status, status, "machine {}", m.index);
            assert_eq!(fast.output, output, "machine {}", m.index);
            if status == RunStatus::Halted {
                assert_eq!(fast.steps, steps, "machine {}", m.index);
            }
        }
    }

    #[test]
    fn escape_analysis_agrees_with_brute_force_2d() {
        let class = MachineClass::new(2, 2, Dim::TwoD).unwrap();
        let mut scratch = Scratch::new(Dim::TwoD, 200);
        for m in enumerate_machines(class).unwrap() {
            let fast = run_with_scratch(&m, 200, &mut scratch, false);
            let (status, output, steps) = run_brute(&m, 200);
            assert_eq!(fast.status, status, "machine {}", m.index);
            assert_eq!(fast.output, output, "machine {}", m.index);
            if status == RunStatus::Halted {
                assert_eq!(fast.steps, steps, "machine {}", m.index);
            }
        }
    }

    #[test]
    fn escape_analysis_agrees_on_three_state_slices() {
        for (dim, cutoff) in [(Dim::OneD, 107), (Dim::TwoD, 200)] {
            let class = MachineClass::new(3, 2, dim).unwrap();
            let total = class.machine_count().unwrap();
            let mut scratch = Scratch::new(dim, cutoff);
            // Spread slices over the index space.
            for part in 0..7u64 {
                let lo = part * (total / 7);
                for m in enumerate_range(class, lo, lo + 40_000).unwrap() {
                    let fast = run_with_scratch(&m, cutoff, &mut scratch, false);
                    let (status, output, _) = run_brute(&m, cutoff);
                    assert_eq!(fast.status, status, "machine {} dim {dim:?}", m.index);
                    assert_eq!(fast.output, output, "machine {} dim {dim:?}", m.index);
                }
            }
        }
    }
}
