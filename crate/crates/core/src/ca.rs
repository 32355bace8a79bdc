//! Elementary cellular automata and the 3-state interacting-CA model:
//! two ECAs over disjoint colours (-1 for automaton A, +1 for automaton
//! B, 0 shared white) with the twelve mixed neighbourhoods resolved by
//! an interaction rule indexed in 1..=3^12, or drawn independently at
//! random per site and step.

use thiserror::Error;

use crate::grid::Grid;

#[derive(Debug, Error)]
pub enum CaError {
    #[error("interaction rule index {0} out of range 1..={1}")]
    InteractionIndexOutOfRange(u64, u64),
    #[error("rules {a} and {b} both claim the all-white neighbourhood; pass an explicit zero owner")]
    AmbiguousZeroOwner { a: u8, b: u8 },
    #[error("configuration width {0} is below the minimum of 3")]
    WidthTooSmall(usize),
}

/// Wolfram-coded elementary CA rule: bit `k` of the number is the
/// output for the neighbourhood whose bits spell `k` (so 111 is the
/// most significant position).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct EcaRule {
    pub number: u8,
    table: [u8; 8],
}

impl EcaRule {
    pub fn new(number: u8) -> Self {
        let mut table = [0u8; 8];
        for (k, slot) in table.iter_mut().enumerate() {
            *slot = (number >> k) & 1;
        }
        EcaRule { number, table }
    }

    pub fn apply(&self, left: u8, center: u8, right: u8) -> u8 {
        self.table[((left << 2) | (center << 1) | right) as usize]
    }
}

/// One synchronous update of a cyclic row.
pub fn eca_step(rule: &EcaRule, row: &[u8]) -> Vec<u8> {
    let n = row.len();
    debug_assert!(n >= 3);
    (0..n)
        .map(|i| rule.apply(row[(i + n - 1) % n], row[i], row[(i + 1) % n]))
        .collect()
}

/// Space-time diagram with `steps + 1` rows, row 0 the initial
/// configuration.
pub fn eca_evolve(rule: &EcaRule, init: &[u8], steps: usize) -> Grid {
    let mut rows = Vec::with_capacity(steps + 1);
    rows.push(init.to_vec());
    let mut row = init.to_vec();
    for _ in 0..steps {
        row = eca_step(rule, &row);
        rows.push(row.clone());
    }
    Grid::from_rows(rows)
}

pub const INTERACTION_RULES: u64 = 531_441; // 3^12

/// The twelve mixed neighbourhoods, in the fixed order the rule-table
/// tuples are assigned to.
pub const MIXED_NEIGHBOURHOODS: [[i8; 3]; 12] = [
    [-1, 1, 0],
    [-1, 0, 1],
    [-1, 1, 1],
    [1, -1, 1],
    [1, -1, 0],
    [1, 1, -1],
    [1, 0, -1],
    [0, 1, -1],
    [0, -1, 1],
    [1, -1, -1],
    [-1, 1, -1],
    [-1, -1, 1],
];

/// Deterministic resolution of mixed neighbourhoods: the `index`-th
/// tuple (1-based) in the lexicographic enumeration of `{-1,0,1}^12`
/// with `-1 < 0 < 1`, assigned to `MIXED_NEIGHBOURHOODS` in order.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct InteractionRule {
    pub index: u64,
    pub outputs: [i8; 12],
}

pub fn interaction_rule(index: u64) -> Result<InteractionRule, CaError> {
    if index < 1 || index > INTERACTION_RULES {
        return Err(CaError::InteractionIndexOutOfRange(index, INTERACTION_RULES));
    }
    let mut rest = index - 1;
    let mut outputs = [0i8; 12];
    for slot in outputs.iter_mut().rev() {
        *slot = (rest % 3) as i8 - 1;
        rest /= 3;
    }
    Ok(InteractionRule { index, outputs })
}

impl InteractionRule {
    fn output_for(&self, l: i8, c: i8, r: i8) -> i8 {
        let probe = [l, c, r];
        for (i, n) in MIXED_NEIGHBOURHOODS.iter().enumerate() {
            if *n == probe {
                return self.outputs[i];
            }
        }
        unreachable!("neighbourhood {probe:?} is not mixed")
    }
}

/// How mixed neighbourhoods are resolved.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Interaction {
    Rule(InteractionRule),
    /// I.i.d. uniform over {-1,0,1}, independent per (position, time),
    /// reproducible from the seed via a counter-based generator.
    Random { seed: u64 },
}

/// Owner of the all-white neighbourhood when the two rules disagree on
/// 000.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ZeroOwner {
    A,
    B,
    White,
}

/// Two interacting ECAs on a cyclic 3-state row.
pub struct InteractingSystem {
    pub rule_a: EcaRule,
    pub rule_b: EcaRule,
    pub interaction: Interaction,
    zero_output: i8,
}

impl InteractingSystem {
    pub fn new(
        rule_a: EcaRule,
        rule_b: EcaRule,
        interaction: Interaction,
        zero_owner: Option<ZeroOwner>,
    ) -> Result<Self, CaError> {
        let a0 = rule_a.apply(0, 0, 0);
        let b0 = rule_b.apply(0, 0, 0);
        let zero_output = match zero_owner {
            Some(ZeroOwner::A) => -(a0 as i8),
            Some(ZeroOwner::B) => b0 as i8,
            Some(ZeroOwner::White) => 0,
            None => {
                // Both rules map 000 to white for every rule used in
                // the experiments; anything else needs an explicit call.
                if a0 == 0 && b0 == 0 {
                    0
                } else {
                    return Err(CaError::AmbiguousZeroOwner {
                        a: rule_a.number,
                        b: rule_b.number,
                    });
                }
            }
        };
        Ok(InteractingSystem { rule_a, rule_b, interaction, zero_output })
    }

    /// One synchronous update. Per cell: a neighbourhood holding both
    /// colours is resolved by the interaction; one holding only A
    /// colours evolves under rule A (with -1 read as black); only B
    /// colours under rule B; all-white per the zero owner.
    pub fn step(&self, config: &[i8], t: u64) -> Vec<i8> {
        let n = config.len();
        (0..n)
            .map(|i| {
                let l = config[(i + n - 1) % n];
                let c = config[i];
                let r = config[(i + 1) % n];
                let has_a = l == -1 || c == -1 || r == -1;
                let has_b = l == 1 || c == 1 || r == 1;
                match (has_a, has_b) {
                    (true, true) => match self.interaction {
                        Interaction::Rule(rule) => rule.output_for(l, c, r),
                        Interaction::Random { seed } => {
                            (site_noise(seed, t, i as u64) % 3) as i8 - 1
                        }
                    },
                    (true, false) => {
                        let bit = self.rule_a.apply(
                            (l == -1) as u8,
                            (c == -1) as u8,
                            (r == -1) as u8,
                        );
                        -(bit as i8)
                    }
                    (false, true) => {
                        self.rule_b.apply((l == 1) as u8, (c == 1) as u8, (r == 1) as u8)
                            as i8
                    }
                    (false, false) => self.zero_output,
                }
            })
            .collect()
    }

    pub fn evolve(&self, init: &[i8], steps: usize) -> Result<Evolution, CaError> {
        if init.len() < 3 {
            return Err(CaError::WidthTooSmall(init.len()));
        }
        let mut rows = Vec::with_capacity(steps + 1);
        rows.push(init.to_vec());
        let mut row = init.to_vec();
        for t in 0..steps {
            row = self.step(&row, t as u64);
            rows.push(row.clone());
        }
        Ok(Evolution { rows })
    }
}

/// Counter-based per-site randomness: a SplitMix64 pass over the packed
/// (seed, time, position) key, so parallel evaluation order cannot
/// change the stream.
fn site_noise(seed: u64, t: u64, i: u64) -> u64 {
    let mut z = seed
        .wrapping_mul(0x9e37_79b9_7f4a_7c15)
        .wrapping_add(t.wrapping_mul(0xbf58_476d_1ce4_e5b9))
        .wrapping_add(i.wrapping_mul(0x94d0_49bb_1331_11eb))
        .wrapping_add(0x2545_f491_4f6c_dd1d);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Full 3-state space-time history of an interacting evolution.
#[derive(Clone, PartialEq, Debug)]
pub struct Evolution {
    pub rows: Vec<Vec<i8>>,
}

impl Evolution {
    pub fn height(&self) -> usize {
        self.rows.len()
    }

    pub fn width(&self) -> usize {
        self.rows.first().map_or(0, |r| r.len())
    }

    /// Observer view: both colours project to 1, white stays 0.
    pub fn binary_projection(&self) -> Grid {
        Grid::from_rows(
            self.rows
                .iter()
                .map(|row| row.iter().map(|&c| (c != 0) as u8).collect())
                .collect(),
        )
    }

    /// Ground-truth mask of automaton-A cells (state -1).
    pub fn mask_a(&self) -> Grid {
        Grid::from_rows(
            self.rows
                .iter()
                .map(|row| row.iter().map(|&c| (c == -1) as u8).collect())
                .collect(),
        )
    }

    pub fn state(&self, r: usize, c: usize) -> i8 {
        self.rows[r][c]
    }
}

/// Width-spanning random initial condition: left half draws A-colours
/// (-1 or white), right half B-colours (+1 or white), uniformly from
/// the seed.
pub fn split_random_init(width: usize, seed: u64) -> Vec<i8> {
    (0..width)
        .map(|i| {
            let bit = site_noise(seed, u64::MAX, i as u64) & 1;
            if bit == 0 {
                0
            } else if i < width / 2 {
                -1
            } else {
                1
            }
        })
        .collect()
}
