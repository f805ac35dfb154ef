//! 2-modular diagrams for partitions with distinct odd parts.
//!
//! A part `2t` becomes a row of `t` cells all holding 2; a part `2t + 1`
//! becomes `t` cells of 2 followed by one cell of 1. Requiring odd parts to
//! be pairwise distinct (even parts unrestricted) is exactly what makes the
//! diagram transposable: column sums then reproduce a partition of the same
//! class. The transpose defines a conjugation under which the rank-like
//! statistic [`Mod2Graph::m2_rank`] changes sign.

use std::fmt;

use crate::error::{Error, Result};
use crate::partition::Partition;

/// The 2-modular diagram of a partition with distinct odd parts.
///
/// Stored as the underlying parts, weakly decreasing; rows of cells are
/// derived on demand. Descending part order automatically places, within a
/// group of rows of equal cell count, the even row (all 2s) above the odd
/// row (trailing 1) — the unique layout in which the trailing 1s form a
/// legal column profile.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mod2Graph {
    parts: Vec<u64>,
}

/// Builds the 2-modular diagram of `p`, rejecting repeated odd parts.
pub fn to_mod2(p: &Partition) -> Result<Mod2Graph> {
    Mod2Graph::from_partition(p)
}

/// Transposes the cell grid of `g`; an involution on valid diagrams.
pub fn conjugate_mod2(g: &Mod2Graph) -> Mod2Graph {
    g.conjugate()
}

/// Cell count of the largest row minus the number of rows.
pub fn m2_rank(g: &Mod2Graph) -> Result<i64> {
    g.m2_rank()
}

impl Mod2Graph {
    /// See [`to_mod2`].
    pub fn from_partition(p: &Partition) -> Result<Self> {
        for w in p.parts().windows(2) {
            if w[0] == w[1] && w[0] % 2 == 1 {
                return Err(Error::RepeatedOddPart { part: w[0] });
            }
        }
        Ok(Mod2Graph { parts: p.parts().to_vec() })
    }

    pub fn empty() -> Self {
        Mod2Graph { parts: Vec::new() }
    }

    /// The underlying partition.
    pub fn to_partition(&self) -> Partition {
        Partition::from_unsorted(self.parts.iter().copied())
    }

    pub fn parts(&self) -> &[u64] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Sum of all cell entries = sum of parts.
    pub fn weight(&self) -> u64 {
        self.parts.iter().sum()
    }

    pub fn num_rows(&self) -> u64 {
        self.parts.len() as u64
    }

    /// Cells in row `i` (0-based): `ceil(part / 2)`.
    pub fn row_cell_count(&self, i: u64) -> u64 {
        self.parts.get(i as usize).map_or(0, |p| p.div_ceil(2))
    }

    /// Cell counts of every row, weakly decreasing.
    pub fn cell_counts(&self) -> Vec<u64> {
        (0..self.num_rows()).map(|i| self.row_cell_count(i)).collect()
    }

    /// Whether row `i` ends in a 1-cell (i.e. the part is odd).
    pub fn row_ends_in_one(&self, i: u64) -> bool {
        self.parts.get(i as usize).is_some_and(|p| p % 2 == 1)
    }

    /// Cell count of the largest row; 0 when empty.
    pub fn largest_row_cells(&self) -> u64 {
        self.row_cell_count(0)
    }

    /// Cell count of the largest row minus the number of rows. Changes sign
    /// under [`Mod2Graph::conjugate`]. Undefined on the empty diagram.
    pub fn m2_rank(&self) -> Result<i64> {
        if self.is_empty() {
            return Err(Error::EmptyMod2Graph { operation: "m2_rank" });
        }
        Ok(self.largest_row_cells() as i64 - self.num_rows() as i64)
    }

    /// Transposes the cell grid. Transposed row `c` gathers the cells of
    /// column `c`: its length is the number of rows with ≥ `c` cells, and it
    /// ends in a 1 exactly when some original row of exactly `c` cells does
    /// (there is at most one, and it sits lowest in its column, so the 1
    /// lands at the row's end).
    pub fn conjugate(&self) -> Mod2Graph {
        let width = self.largest_row_cells();
        let rows = self.num_rows();
        let mut parts = Vec::with_capacity(width as usize);
        for c in 1..=width {
            let height = (0..rows).take_while(|&i| self.row_cell_count(i) >= c).count() as u64;
            let has_one = self.parts.contains(&(2 * c - 1));
            parts.push(2 * height - u64::from(has_one));
        }
        Mod2Graph::from_partition(&Partition::from_unsorted(parts))
            .expect("transposed diagram is always a valid 2-modular diagram")
    }

    /// One text line per row: cells separated by spaces, e.g. `2 2 2 1`.
    pub fn render_grid(&self) -> String {
        let mut out = String::new();
        for i in 0..self.num_rows() {
            if i > 0 {
                out.push('\n');
            }
            let cells = self.row_cell_count(i);
            for c in 1..=cells {
                if c > 1 {
                    out.push(' ');
                }
                out.push(if c == cells && self.row_ends_in_one(i) { '1' } else { '2' });
            }
        }
        out
    }
}

impl fmt::Display for Mod2Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "mod2({})", self.to_partition())
    }
}
