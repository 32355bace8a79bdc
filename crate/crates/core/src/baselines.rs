//! Classical-information and compression baselines the algorithmic
//! estimates are compared against: Shannon block entropy, normalized
//! compression distance, mutual information, and sliding-window row
//! scans.

use std::collections::HashMap;
use std::io::Write;

use flate2::write::ZlibEncoder;
use flate2::Compression;
use statrs::distribution::{ContinuousCDF, Normal};
use thiserror::Error;

use crate::bdm::{bdm_string, BdmError, BlockKey, BlockMultiset, TableIndex};
use crate::ctm::Dim;
use crate::grid::Grid;

#[derive(Debug, Error)]
pub enum BaselineError {
    #[error("empty input")]
    EmptyInput,
    #[error("sequences have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("row of length {len} too short for windows {lw}+{rw}")]
    RowTooShort { len: usize, lw: usize, rw: usize },
    #[error("block size must be at least 1")]
    ZeroBlock,
    #[error(transparent)]
    Bdm(#[from] BdmError),
}

/// Shannon entropy in bits per block over the empirical distribution of
/// non-overlapping `block_size` chunks.
pub fn shannon_entropy(seq: &[u8], block_size: usize) -> Result<f64, BaselineError> {
    if seq.is_empty() {
        return Err(BaselineError::EmptyInput);
    }
    if block_size == 0 {
        return Err(BaselineError::ZeroBlock);
    }
    let mut counts: HashMap<&[u8], u64> = HashMap::new();
    let mut total = 0u64;
    for chunk in seq.chunks(block_size) {
        *counts.entry(chunk).or_insert(0) += 1;
        total += 1;
    }
    Ok(entropy_of_counts(counts.values().copied(), total))
}

fn entropy_of_counts(counts: impl Iterator<Item = u64>, total: u64) -> f64 {
    let total = total as f64;
    counts
        .map(|c| {
            let p = c as f64 / total;
            -p * p.log2()
        })
        .sum()
}

/// Total description length of a grid under an i.i.d. block model:
/// blocks-count times the entropy of the empirical d x d block
/// distribution. The entropy analogue of the BDM total, used for the
/// sensitivity comparisons.
pub struct EntropyContext {
    ms: BlockMultiset,
}

impl EntropyContext {
    pub fn new_grid(g: &Grid, d: usize) -> Result<Self, BaselineError> {
        Ok(EntropyContext { ms: BlockMultiset::from_grid(Dim::TwoD, g, d)? })
    }

    fn term(&self) -> impl Fn(&BlockKey, u64) -> f64 {
        // total = N log2 N - sum c log2 c, with N constant across edits;
        // the per-block term carries the -c log2 c part.
        |_k, m| if m == 0 { 0.0 } else { -(m as f64) * (m as f64).log2() }
    }

    pub fn total_bits(&self) -> f64 {
        let n = self.ms.block_count() as f64;
        n * n.log2() + self.ms.total(self.term())
    }

    pub fn delta_flip(&self, r: usize, c: usize) -> f64 {
        let v = self.ms.cell(r, c) ^ 1;
        self.ms.delta_for_changes(&[(r, c, v)], self.term())
    }

    pub fn rows(&self) -> usize {
        self.ms.rows()
    }

    pub fn cols(&self) -> usize {
        self.ms.cols()
    }
}

/// Normalized compression distance under a deflate-class compressor at
/// a fixed level (recorded in output metadata by the callers).
pub fn ncd(x: &[u8], y: &[u8]) -> Result<f64, BaselineError> {
    if x.is_empty() || y.is_empty() {
        return Err(BaselineError::EmptyInput);
    }
    let cx = compressed_len(x);
    let cy = compressed_len(y);
    let mut xy = x.to_vec();
    xy.extend_from_slice(y);
    let cxy = compressed_len(&xy);
    Ok((cxy as f64 - cx.min(cy) as f64) / cx.max(cy) as f64)
}

pub fn compressed_len(data: &[u8]) -> usize {
    let mut enc = ZlibEncoder::new(Vec::new(), Compression::new(6));
    enc.write_all(data).expect("in-memory compression");
    enc.finish().expect("in-memory compression").len()
}

/// Standard mutual information H(x) + H(y) - H(x, y) over the empirical
/// per-position joint distribution of two equal-length sequences.
pub fn mutual_information(x: &[u8], y: &[u8]) -> Result<f64, BaselineError> {
    if x.is_empty() {
        return Err(BaselineError::EmptyInput);
    }
    if x.len() != y.len() {
        return Err(BaselineError::LengthMismatch(x.len(), y.len()));
    }
    let n = x.len() as u64;
    let mut cx: HashMap<u8, u64> = HashMap::new();
    let mut cy: HashMap<u8, u64> = HashMap::new();
    let mut cxy: HashMap<(u8, u8), u64> = HashMap::new();
    for (&a, &b) in x.iter().zip(y) {
        *cx.entry(a).or_insert(0) += 1;
        *cy.entry(b).or_insert(0) += 1;
        *cxy.entry((a, b)).or_insert(0) += 1;
    }
    let hx = entropy_of_counts(cx.values().copied(), n);
    let hy = entropy_of_counts(cy.values().copied(), n);
    let hxy = entropy_of_counts(cxy.values().copied(), n);
    Ok(hx + hy - hxy)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RowScanMethod {
    BdmDiff,
    MutualInformation,
    Ncd,
}

/// Per-row sliding comparison of adjacent windows. `stride` defaults to
/// the full window span (non-overlapping); pass 1 for the dense variant.
pub fn row_window_scan(
    grid: &Grid,
    method: RowScanMethod,
    left_width: usize,
    right_width: usize,
    stride: Option<usize>,
    index: Option<&TableIndex>,
) -> Result<Vec<Vec<f64>>, BaselineError> {
    if left_width == 0 || right_width == 0 {
        return Err(BaselineError::ZeroBlock);
    }
    let span = left_width + right_width;
    if grid.cols() < span {
        return Err(BaselineError::RowTooShort {
            len: grid.cols(),
            lw: left_width,
            rw: right_width,
        });
    }
    let stride = stride.unwrap_or(span).max(1);
    let mut out = Vec::with_capacity(grid.rows());
    for r in 0..grid.rows() {
        let row = grid.row(r);
        let mut scores = Vec::new();
        let mut m = 0usize;
        while m + span <= row.len() {
            let left = &row[m..m + left_width];
            let right = &row[m + left_width..m + span];
            let score = match method {
                RowScanMethod::BdmDiff => {
                    let index = index.expect("BDM row scan needs a table index");
                    (bdm_string(left, index, left_width)?.bits
                        - bdm_string(right, index, right_width)?.bits)
                        .abs()
                }
                RowScanMethod::MutualInformation => {
                    // Unequal windows are compared over their overlap.
                    let w = left_width.min(right_width);
                    mutual_information(&left[..w], &right[..w])?
                }
                RowScanMethod::Ncd => ncd(left, right)?,
            };
            scores.push(score);
            m += stride;
        }
        out.push(scores);
    }
    Ok(out)
}

/// Count of distinct values produced by a scan, the paper's sensitivity
/// measure.
pub fn distinct_scores(scores: &[Vec<f64>]) -> usize {
    let mut all: Vec<u64> = scores.iter().flatten().map(|v| v.to_bits()).collect();
    all.sort_unstable();
    all.dedup();
    all.len()
}

/// Mann-Whitney U test (two-sided, normal approximation with tie
/// correction). Returns `(u_statistic, p_value)`.
pub fn mann_whitney(a: &[f64], b: &[f64]) -> Result<(f64, f64), BaselineError> {
    if a.is_empty() || b.is_empty() {
        return Err(BaselineError::EmptyInput);
    }
    let n1 = a.len() as f64;
    let n2 = b.len() as f64;
    let mut all: Vec<(f64, usize)> = a
        .iter()
        .map(|&v| (v, 0usize))
        .chain(b.iter().map(|&v| (v, 1usize)))
        .collect();
    all.sort_by(|x, y| x.0.total_cmp(&y.0));
    // Average ranks over ties.
    let mut ranks = vec![0.0f64; all.len()];
    let mut tie_correction = 0.0;
    let mut i = 0;
    while i < all.len() {
        let mut j = i;
        while j + 1 < all.len() && all[j + 1].0 == all[i].0 {
            j += 1;
        }
        let avg_rank = (i + j) as f64 / 2.0 + 1.0;
        for slot in ranks.iter_mut().take(j + 1).skip(i) {
            *slot = avg_rank;
        }
        let t = (j - i + 1) as f64;
        tie_correction += t * t * t - t;
        i = j + 1;
    }
    let r1: f64 = all
        .iter()
        .zip(&ranks)
        .filter(|((_, g), _)| *g == 0)
        .map(|(_, r)| *r)
        .sum();
    let u1 = r1 - n1 * (n1 + 1.0) / 2.0;
    let u = u1.min(n1 * n2 - u1);
    let n = n1 + n2;
    let mu = n1 * n2 / 2.0;
    let sigma2 = n1 * n2 / 12.0 * ((n + 1.0) - tie_correction / (n * (n - 1.0)));
    if sigma2 <= 0.0 {
        // All values tied; no evidence of difference.
        return Ok((u, 1.0));
    }
    let z = (u - mu + 0.5) / sigma2.sqrt();
    let normal = Normal::new(0.0, 1.0).expect("unit normal");
    let p = (2.0 * normal.cdf(z)).min(1.0);
    Ok((u, p))
}

/// Spearman rank correlation (ties get average ranks).
pub fn spearman_rho(x: &[f64], y: &[f64]) -> Result<f64, BaselineError> {
    if x.len() != y.len() {
        return Err(BaselineError::LengthMismatch(x.len(), y.len()));
    }
    if x.len() < 2 {
        return Err(BaselineError::EmptyInput);
    }
    let rx = average_ranks(x);
    let ry = average_ranks(y);
    let n = x.len() as f64;
    let mx = rx.iter().sum::<f64>() / n;
    let my = ry.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut vx = 0.0;
    let mut vy = 0.0;
    for (a, b) in rx.iter().zip(&ry) {
        cov += (a - mx) * (b - my);
        vx += (a - mx) * (a - mx);
        vy += (b - my) * (b - my);
    }
    if vx == 0.0 || vy == 0.0 {
        return Ok(0.0);
    }
    Ok(cov / (vx * vy).sqrt())
}

fn average_ranks(v: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
    let mut ranks = vec![0.0; v.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            ranks[k] = avg;
        }
        i = j + 1;
    }
    ranks
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn bits_of(s: &str) -> Vec<u8> {
        s.bytes().map(|b| (b == b'1') as u8).collect()
    }

    #[test]
    fn entropy_examples() {
        let alternating: Vec<u8> = [0u8, 1].iter().copied().cycle().take(64).collect();
        assert_eq!(shannon_entropy(&alternating, 2).unwrap(), 0.0);
        assert!((shannon_entropy(&alternating, 1).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(shannon_entropy(&vec![0u8; 40], 4).unwrap(), 0.0);
        assert!(shannon_entropy(&[], 2).is_err());
    }

    #[test]
    fn entropy_bounded_by_log_distinct_blocks() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let seq: Vec<u8> = (0..300).map(|_| rng.random_range(0..2u8)).collect();
        for bs in [1usize, 2, 3, 5] {
            let h = shannon_entropy(&seq, bs).unwrap();
            let distinct: std::collections::BTreeSet<&[u8]> = seq.chunks(bs).collect();
            assert!(h >= 0.0);
            assert!(h <= (distinct.len() as f64).log2() + 1e-12);
        }
    }

    #[test]
    fn mi_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let x: Vec<u8> = (0..2000).map(|_| rng.random_range(0..2u8)).collect();
        let hx = shannon_entropy(&x, 1).unwrap();
        assert!((mutual_information(&x, &x).unwrap() - hx).abs() < 1e-12);
        let not_x: Vec<u8> = x.iter().map(|&b| b ^ 1).collect();
        assert!((mutual_information(&x, &not_x).unwrap() - hx).abs() < 1e-12);
        assert!(mutual_information(&x, &x[..10]).is_err());
    }

    #[test]
    fn mi_of_independent_sequences_is_small() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let x: Vec<u8> = (0..10_000).map(|_| rng.random_range(0..2u8)).collect();
        let y: Vec<u8> = (0..10_000).map(|_| rng.random_range(0..2u8)).collect();
        let mi = mutual_information(&x, &y).unwrap();
        assert!(mi < 0.02, "mi {mi}");
        assert!(mi >= 0.0);
    }

    #[test]
    fn mi_is_symmetric() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let x: Vec<u8> = (0..500).map(|_| rng.random_range(0..4u8)).collect();
        let y: Vec<u8> = (0..500).map(|_| rng.random_range(0..3u8)).collect();
        let a = mutual_information(&x, &y).unwrap();
        let b = mutual_information(&y, &x).unwrap();
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn ncd_near_identity_and_independence() {
        // Structured ~1 KiB input vs itself.
        let x: Vec<u8> = (0..1024u32).map(|i| (i % 7) as u8 + b'a').collect();
        let self_ncd = ncd(&x, &x).unwrap();
        assert!(self_ncd <= 0.2, "ncd(x,x) = {self_ncd}");
        // Independent random 4 KiB inputs.
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let a: Vec<u8> = (0..4096).map(|_| rng.random()).collect();
        let b: Vec<u8> = (0..4096).map(|_| rng.random()).collect();
        let indep = ncd(&a, &b).unwrap();
        assert!(indep >= 0.8, "ncd(a,b) = {indep}");
        assert!(ncd(&[], &x).is_err());
    }

    #[test]
    fn ncd_quasi_symmetry_and_shared_prefix() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a: Vec<u8> = (0..2048).map(|_| rng.random_range(0..16u8)).collect();
        let b: Vec<u8> = (0..2048).map(|_| rng.random_range(0..16u8)).collect();
        let ab = ncd(&a, &b).unwrap();
        let ba = ncd(&b, &a).unwrap();
        assert!((ab - ba).abs() <= 0.05, "|{ab} - {ba}|");
        // Appending a shared prefix lowers the distance.
        let prefix: Vec<u8> = (0..1024u32).map(|i| (i % 5) as u8).collect();
        let pa: Vec<u8> = prefix.iter().chain(&a).copied().collect();
        let pb: Vec<u8> = prefix.iter().chain(&b).copied().collect();
        assert!(ncd(&pa, &pb).unwrap() < ab);
    }

    #[test]
    fn uniform_row_scan_is_constant() {
        let g = Grid::from_rows(vec![vec![0u8; 30]; 3]);
        let scores = row_window_scan(&g, RowScanMethod::Ncd, 6, 6, Some(1), None).unwrap();
        assert_eq!(distinct_scores(&scores), 1);
        let mi = row_window_scan(&g, RowScanMethod::MutualInformation, 6, 6, Some(1), None)
            .unwrap();
        assert_eq!(distinct_scores(&mi), 1);
    }

    #[test]
    fn regime_change_produces_extremal_score() {
        // One row, left half zeros, right half alternating: the BDM
        // difference peaks at the window pair that straddles the change.
        use crate::bdm::TableIndex;
        use crate::ctm::{build_table, MachineClass};
        let t = build_table(MachineClass::new(2, 2, Dim::OneD).unwrap(), 107, 2).unwrap();
        let idx = TableIndex::new(&t).unwrap();
        let mut row = vec![0u8; 20];
        row.extend(bits_of("0110100111010010"));
        let g = Grid::from_rows(vec![row]);
        let scores =
            row_window_scan(&g, RowScanMethod::BdmDiff, 4, 4, Some(1), Some(&idx)).unwrap();
        let best = scores[0]
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap()
            .0;
        // Change point at 20; windows starting in 12..=20 straddle it.
        assert!((12..=20).contains(&best), "peak at {best}");
    }

    #[test]
    fn row_too_short_is_an_error() {
        let g = Grid::from_rows(vec![vec![0u8; 5]]);
        assert!(matches!(
            row_window_scan(&g, RowScanMethod::Ncd, 6, 6, None, None),
            Err(BaselineError::RowTooShort { .. })
        ));
    }

    #[test]
    fn entropy_context_matches_direct_total_and_flip() {
        let g = Grid::parse("011010\n100101\n011010\n110011\n001100\n101010\n").unwrap();
        let ctx = EntropyContext::new_grid(&g, 3).unwrap();
        let direct = |grid: &Grid| {
            let mut counts: HashMap<Vec<u8>, u64> = HashMap::new();
            let mut total = 0u64;
            for br in 0..2 {
                for bc in 0..2 {
                    let mut cells = Vec::new();
                    for r in 0..3 {
                        for c in 0..3 {
                            cells.push(grid.get(br * 3 + r, bc * 3 + c));
                        }
                    }
                    *counts.entry(cells).or_insert(0) += 1;
                    total += 1;
                }
            }
            total as f64 * entropy_of_counts(counts.values().copied(), total)
        };
        assert!((ctx.total_bits() - direct(&g)).abs() < 1e-9);
        for r in 0..6 {
            for c in 0..6 {
                let mut flipped = g.clone();
                flipped.flip(r, c);
                let expected = direct(&g) - direct(&flipped);
                assert!((ctx.delta_flip(r, c) - expected).abs() < 1e-9, "({r},{c})");
            }
        }
    }

    #[test]
    fn mann_whitney_detects_shift_and_accepts_null() {
        let a: Vec<f64> = (0..20).map(|i| i as f64 * 0.1).collect();
        let b: Vec<f64> = (0..20).map(|i| 5.0 + i as f64 * 0.1).collect();
        let (_, p) = mann_whitney(&a, &b).unwrap();
        assert!(p < 0.001, "p {p}");
        let c: Vec<f64> = (0..20).map(|i| (i as f64 * 7.3) % 5.0).collect();
        let d: Vec<f64> = (0..20).map(|i| (i as f64 * 3.7 + 1.1) % 5.0).collect();
        let (_, p) = mann_whitney(&c, &d).unwrap();
        assert!(p > 0.05, "p {p}");
        let (_, p_ties) = mann_whitney(&[1.0, 1.0], &[1.0, 1.0]).unwrap();
        assert_eq!(p_ties, 1.0);
    }

    #[test]
    fn spearman_signs() {
        let x = [1.0, 2.0, 3.0, 4.0, 5.0];
        let up = [2.0, 3.0, 5.0, 7.0, 11.0];
        let down = [9.0, 6.0, 5.0, 3.0, 1.0];
        assert!((spearman_rho(&x, &up).unwrap() - 1.0).abs() < 1e-12);
        assert!((spearman_rho(&x, &down).unwrap() + 1.0).abs() < 1e-12);
    }
}
