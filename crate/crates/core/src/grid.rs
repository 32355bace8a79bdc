//! Binary grids: CA space-time diagrams and image-like observations.

use std::fmt;

/// A 2D array over {0, 1}, stored row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Grid {
    rows: usize,
    cols: usize,
    cells: Vec<u8>,
}

impl Grid {
    pub fn new(rows: usize, cols: usize) -> Self {
        Grid { rows, cols, cells: vec![0; rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<u8>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged grid");
        let mut cells = Vec::with_capacity(nrows * ncols);
        for r in rows {
            debug_assert!(r.iter().all(|&c| c <= 1));
            cells.extend(r);
        }
        Grid { rows: nrows, cols: ncols, cells }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.cells[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u8) {
        debug_assert!(v <= 1);
        self.cells[r * self.cols + c] = v;
    }

    pub fn flip(&mut self, r: usize, c: usize) {
        self.cells[r * self.cols + c] ^= 1;
    }

    pub fn row(&self, r: usize) -> &[u8] {
        &self.cells[r * self.cols..(r + 1) * self.cols]
    }

    pub fn cells(&self) -> &[u8] {
        &self.cells
    }

    /// Parses lines of `0`/`1` characters (one row per line).
    pub fn parse(text: &str) -> Result<Self, String> {
        let mut rows = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut row = Vec::with_capacity(line.len());
            for ch in line.chars() {
                match ch {
                    '0' => row.push(0),
                    '1' => row.push(1),
                    _ => return Err(format!("line {}: invalid cell {:?}", i + 1, ch)),
                }
            }
            rows.push(row);
        }
        if rows.is_empty() {
            return Err("empty grid".into());
        }
        let cols = rows[0].len();
        if rows.iter().any(|r| r.len() != cols) {
            return Err("rows of unequal length".into());
        }
        Ok(Grid::from_rows(rows))
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            for c in 0..self.cols {
                write!(f, "{}", self.get(r, c))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_roundtrip() {
        let g = Grid::parse("010\n101\n").unwrap();
        assert_eq!(g.rows(), 2);
        assert_eq!(g.cols(), 3);
        assert_eq!(g.get(1, 0), 1);
        assert_eq!(Grid::parse(&g.to_string()).unwrap(), g);
    }

    #[test]
    fn parse_rejects_bad_input() {
        assert!(Grid::parse("01\n0").is_err());
        assert!(Grid::parse("0x1").is_err());
        assert!(Grid::parse("").is_err());
    }
}
