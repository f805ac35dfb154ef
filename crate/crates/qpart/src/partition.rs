//! Integer partitions and their classical combinatorial statistics.
//!
//! A [`Partition`] is a weakly decreasing sequence of positive parts. On top
//! of the value type this module provides conjugation, the rank and crank
//! statistics, rank-set membership together with the boundary-segment
//! geometry that certifies it, successive Durfee squares with the
//! higher-order rank they induce, and a constrained enumerator that serves
//! as the brute-force oracle for the generating-function layer.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A weakly decreasing sequence of positive integers; empty allowed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    parts: Vec<u64>,
}

/// The scalar statistics of a nonempty partition, bundled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Stats {
    /// Largest part.
    pub largest_part: u64,
    /// Number of parts.
    pub num_parts: u64,
    /// Number of parts equal to 1.
    pub num_ones: u64,
    /// Number of parts strictly larger than the number of ones.
    pub num_parts_above_ones: u64,
    /// See [`Partition::overhang`].
    pub overhang: i64,
}

/// Sides of the successive Durfee squares, largest first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DurfeeDissection {
    sizes: Vec<u64>,
}

impl DurfeeDissection {
    /// Square sides, weakly decreasing; empty for the empty partition.
    pub fn sizes(&self) -> &[u64] {
        &self.sizes
    }

    pub fn count(&self) -> u64 {
        self.sizes.len() as u64
    }
}

impl Partition {
    // ---- construction --------------------------------------------------

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// Validates that `parts` is weakly decreasing with every entry ≥ 1.
    pub fn new(parts: Vec<u64>) -> Result<Self> {
        for w in parts.windows(2) {
            if w[0] < w[1] {
                return Err(Error::InvalidPartition {
                    reason: format!("parts must be weakly decreasing, got {} before {}", w[0], w[1]),
                });
            }
        }
        if parts.iter().any(|&p| p == 0) {
            return Err(Error::InvalidPartition { reason: "parts must be positive".into() });
        }
        Ok(Partition { parts })
    }

    /// Sorts the given parts into canonical order, discarding zeros. The
    /// natural constructor for maps that assemble parts out of order.
    pub fn from_unsorted<I: IntoIterator<Item = u64>>(parts: I) -> Self {
        let mut parts: Vec<u64> = parts.into_iter().filter(|&p| p > 0).collect();
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    // ---- basic accessors ----------------------------------------------

    pub fn parts(&self) -> &[u64] {
        &self.parts
    }

    /// The part at `index` (0-based), reading 0 beyond the last part.
    pub fn part_at(&self, index: u64) -> u64 {
        usize::try_from(index)
            .ok()
            .and_then(|i| self.parts.get(i).copied())
            .unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Sum of parts.
    pub fn weight(&self) -> u64 {
        self.parts.iter().sum()
    }

    /// Largest part; 0 for the empty partition.
    pub fn largest_part(&self) -> u64 {
        self.parts.first().copied().unwrap_or(0)
    }

    pub fn num_parts(&self) -> u64 {
        self.parts.len() as u64
    }

    /// Number of parts equal to 1.
    pub fn num_ones(&self) -> u64 {
        self.parts.iter().rev().take_while(|&&p| p == 1).count() as u64
    }

    /// Number of parts strictly larger than [`Partition::num_ones`].
    pub fn num_parts_above_ones(&self) -> u64 {
        let ones = self.num_ones();
        self.parts.iter().take_while(|&&p| p > ones).count() as u64
    }

    // ---- rank and crank -------------------------------------------------

    /// Largest part minus number of parts (0 for the empty partition).
    pub fn rank(&self) -> i64 {
        self.largest_part() as i64 - self.num_parts() as i64
    }

    /// The crank: the largest part when no part equals 1; otherwise the
    /// number of parts larger than the count of ones, minus that count.
    /// The empty partition has no crank.
    pub fn crank(&self) -> Result<i64> {
        if self.is_empty() {
            return Err(Error::EmptyPartition { statistic: "crank" });
        }
        let ones = self.num_ones();
        Ok(if ones == 0 {
            self.largest_part() as i64
        } else {
            self.num_parts_above_ones() as i64 - ones as i64
        })
    }

    /// Auxiliary offset used by the crank-negating self-inverse map: the gap
    /// between the two largest parts, except that when exactly one part
    /// exceeds the count of ones it is largest part − number of ones − 1.
    /// The empty partition has no overhang.
    pub fn overhang(&self) -> Result<i64> {
        if self.is_empty() {
            return Err(Error::EmptyPartition { statistic: "overhang" });
        }
        Ok(if self.num_parts_above_ones() != 1 {
            self.part_at(0) as i64 - self.part_at(1) as i64
        } else {
            self.largest_part() as i64 - self.num_ones() as i64 - 1
        })
    }

    /// All scalar statistics of a nonempty partition at once.
    pub fn stats(&self) -> Result<Stats> {
        Ok(Stats {
            largest_part: self.largest_part(),
            num_parts: self.num_parts(),
            num_ones: self.num_ones(),
            num_parts_above_ones: self.num_parts_above_ones(),
            overhang: self.overhang()?,
        })
    }

    // ---- conjugation ----------------------------------------------------

    /// Number of parts ≥ `c`, i.e. the height of column `c` (1-based) of the
    /// Ferrers graph.
    pub fn column_height(&self, c: u64) -> u64 {
        debug_assert!(c >= 1);
        self.parts.iter().take_while(|&&p| p >= c).count() as u64
    }

    /// The transposed Ferrers graph: part `c` of the result is the height of
    /// column `c`. An involution.
    pub fn conjugate(&self) -> Partition {
        let parts = (1..=self.largest_part()).map(|c| self.column_height(c)).collect();
        Partition { parts }
    }

    // ---- rank-set ------------------------------------------------------

    /// The values `j − p_{j+1}` for `j = 0 .. num_parts`, strictly
    /// increasing. Together with "every integer ≥ num_parts" these form the
    /// full rank-set.
    pub fn rank_set_prefix(&self) -> Vec<i64> {
        (0..self.num_parts()).map(|j| j as i64 - self.part_at(j) as i64).collect()
    }

    /// Whether some `j ≥ 0` has `j − p_{j+1} = k` (parts past the end read
    /// as 0, so every `k ≥ num_parts` is a member).
    pub fn rank_set_contains(&self, k: i64) -> bool {
        self.rank_set_witness(k).is_some()
    }

    /// The unique `j` with `j − p_{j+1} = k`, when `k` is in the rank-set.
    /// Uniqueness holds because `j − p_{j+1}` is strictly increasing in `j`
    /// and the finite prefix stays below `num_parts`.
    pub fn rank_set_witness(&self, k: i64) -> Option<i64> {
        let nu = self.num_parts() as i64;
        if k >= nu {
            return Some(k);
        }
        (0..nu).map(|j| (j, j - self.part_at(j as u64) as i64)).find(|&(_, v)| v == k).map(|(j, _)| j)
    }

    /// Orientation of the unit boundary segment of the Ferrers profile lying
    /// in the diagonal strip `k + x ≤ y ≤ k + 1 + x` (top-left origin, `y`
    /// downward): `true` for vertical. Computed by literally walking the
    /// profile; agrees with [`Partition::rank_set_contains`] everywhere.
    pub fn boundary_segment_vertical(&self, k: i64) -> bool {
        // Start on the profile at height 0, far enough right that the walk
        // begins strictly before strip k; each unit step advances the strip
        // index `y − x` by exactly 1.
        let mut x = (self.largest_part() as i64).max(-k) + 1;
        let mut y: i64 = 0;
        loop {
            // Part length of row y+1 (0 when below the last row).
            let row_below = if y >= 0 { self.part_at(y as u64) as i64 } else { unreachable!() };
            let vertical = row_below == x;
            if y - x == k {
                return vertical;
            }
            if vertical {
                y += 1;
            } else {
                x -= 1;
            }
        }
    }

    // ---- Durfee squares -------------------------------------------------

    /// Sides of the successive Durfee squares: the largest square fitting in
    /// the top-left corner, then the largest square fitting in the rows
    /// below it, and so on until no rows remain.
    pub fn durfee_dissection(&self) -> DurfeeDissection {
        let mut sizes = Vec::new();
        let mut offset: u64 = 0;
        loop {
            let mut side: u64 = 0;
            while self.part_at(offset + side) >= side + 1 {
                side += 1;
            }
            if side == 0 {
                break;
            }
            sizes.push(side);
            offset += side;
        }
        DurfeeDissection { sizes }
    }

    /// One text line per part: `part` asterisks separated by spaces, e.g.
    /// `* * *`. Empty partition renders as the empty string.
    pub fn render_ferrers(&self) -> String {
        let mut out = String::new();
        for (i, &part) in self.parts.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            for c in 0..part {
                if c > 0 {
                    out.push(' ');
                }
                out.push('*');
            }
        }
        out
    }

    /// Higher-order rank of order `k ≥ 2`: the number of Ferrers-graph
    /// columns to the right of the first Durfee square no taller than the
    /// (k−1)-th square, minus the number of parts below the (k−1)-th square.
    /// Requires at least k−1 successive Durfee squares; order 2 recovers
    /// [`Partition::rank`].
    pub fn k_rank(&self, order: u64) -> Result<i64> {
        assert!(order >= 2, "higher-order rank needs order >= 2");
        let dissection = self.durfee_dissection();
        let sizes = dissection.sizes();
        let required = order - 1;
        if (sizes.len() as u64) < required {
            return Err(Error::NotEnoughSquares {
                order,
                required,
                found: sizes.len() as u64,
            });
        }
        let first = sizes[0];
        let cap = sizes[required as usize - 1];
        let columns = (first + 1..=self.largest_part())
            .filter(|&c| self.column_height(c) <= cap)
            .count() as i64;
        let below = self.num_parts() as i64
            - sizes[..required as usize].iter().sum::<u64>() as i64;
        Ok(columns - below)
    }
}

// ---- enumeration --------------------------------------------------------

/// Constraints for [`enumerate`]. Default: no constraints.
#[derive(Debug, Clone, Copy, Default)]
pub struct EnumerateOpts {
    /// Upper bound on every part.
    pub max_part: Option<u64>,
    /// Upper bound on the number of parts.
    pub max_parts: Option<u64>,
    /// Restrict to partitions whose odd parts are pairwise distinct (even
    /// parts unrestricted).
    pub distinct_odd_parts: bool,
}

/// All partitions of `n` meeting the constraints, each exactly once, in
/// descending lexicographic order (first parts largest first).
pub fn enumerate(n: u64, opts: EnumerateOpts) -> impl Iterator<Item = Partition> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    let cap = opts.max_part.map_or(n, |m| m.min(n));
    descend(n, cap, &opts, &mut current, &mut out);
    out.into_iter()
}

/// All partitions of `n`, unconstrained.
pub fn partitions_of(n: u64) -> impl Iterator<Item = Partition> {
    enumerate(n, EnumerateOpts::default())
}

fn descend(
    remaining: u64,
    cap: u64,
    opts: &EnumerateOpts,
    current: &mut Vec<u64>,
    out: &mut Vec<Partition>,
) {
    if remaining == 0 {
        out.push(Partition { parts: current.clone() });
        return;
    }
    let slots = match opts.max_parts {
        Some(m) => m.saturating_sub(current.len() as u64),
        None => u64::MAX,
    };
    if slots == 0 {
        return;
    }
    let prev = current.last().copied();
    for c in (1..=cap.min(remaining)).rev() {
        if opts.distinct_odd_parts && c % 2 == 1 && prev == Some(c) {
            continue;
        }
        // Even with every remaining slot at size c the target is out of
        // reach; smaller c only gets worse.
        if slots != u64::MAX && c.checked_mul(slots).map_or(false, |max| max < remaining) {
            break;
        }
        current.push(c);
        descend(remaining - c, c, opts, current, out);
        current.pop();
    }
}

// ---- text form -----------------------------------------------------------

impl fmt::Display for Partition {
    /// Parts joined by `+`; the empty partition prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return f.write_str("0");
        }
        let rendered: Vec<String> = self.parts.iter().map(u64::to_string).collect();
        f.write_str(&rendered.join("+"))
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Parses `"a+b+c"` (weakly decreasing required); `"0"` is the empty
    /// partition.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" {
            return Ok(Partition::empty());
        }
        if s.is_empty() {
            return Err(Error::InvalidPartition { reason: "empty input (write 0 for the empty partition)".into() });
        }
        let parts = s
            .split('+')
            .map(|piece| {
                piece.trim().parse::<u64>().map_err(|e| Error::InvalidPartition {
                    reason: format!("bad part {piece:?}: {e}"),
                })
            })
            .collect::<Result<Vec<u64>>>()?;
        Partition::new(parts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[u64]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(p(&[5, 2, 1]).conjugate(), p(&[3, 2, 1, 1, 1]));
        assert_eq!(Partition::empty().conjugate(), Partition::empty());
        assert_eq!(p(&[3]).conjugate(), p(&[1, 1, 1]));
    }

    #[test]
    fn conjugate_is_an_involution() {
        for n in 0..=15 {
            for q in partitions_of(n) {
                assert_eq!(q.conjugate().conjugate(), q);
                assert_eq!(q.conjugate().weight(), q.weight());
            }
        }
    }

    #[test]
    fn rank_negates_under_conjugation() {
        for n in 0..=12 {
            for q in partitions_of(n) {
                assert_eq!(q.conjugate().rank(), -q.rank());
            }
        }
    }

    #[test]
    fn rank_examples() {
        assert_eq!(p(&[7, 6, 6, 5, 2]).rank(), 2);
        assert_eq!(Partition::empty().rank(), 0);
        assert_eq!(p(&[1]).rank(), 0);
    }

    #[test]
    fn crank_examples() {
        assert_eq!(p(&[4]).crank().unwrap(), 4);
        assert_eq!(p(&[1, 1, 1, 1]).crank().unwrap(), -4);
        assert_eq!(p(&[3, 1]).crank().unwrap(), 0);
        assert_eq!(p(&[1]).crank().unwrap(), -1);
        assert!(matches!(
            Partition::empty().crank(),
            Err(Error::EmptyPartition { statistic: "crank" })
        ));
    }

    #[test]
    fn crank_multiset_symmetric_under_negation() {
        use std::collections::BTreeMap;
        for n in 2..=12 {
            let mut counts: BTreeMap<i64, i64> = BTreeMap::new();
            for q in partitions_of(n) {
                *counts.entry(q.crank().unwrap()).or_default() += 1;
            }
            for (&k, &c) in &counts {
                assert_eq!(
                    c,
                    counts.get(&-k).copied().unwrap_or(0),
                    "crank counts asymmetric at n = {n}, k = {k}"
                );
            }
        }
    }

    #[test]
    fn stats_bundle() {
        // 5+3+2+1+1: two ones, parts above 2: {5, 3} so overhang = 5 − 3 = 2.
        let s = p(&[5, 3, 2, 1, 1]).stats().unwrap();
        assert_eq!(
            s,
            Stats {
                largest_part: 5,
                num_parts: 5,
                num_ones: 2,
                num_parts_above_ones: 2,
                overhang: 2,
            }
        );
        // 5+2+1: one 1, one part above 1 is... parts above 1: {5, 2} so two;
        // overhang = 5 − 2 = 3.
        let s = p(&[5, 2, 1]).stats().unwrap();
        assert_eq!(s.num_parts_above_ones, 2);
        assert_eq!(s.overhang, 3);
        // 5+1: exactly one part above the single 1: overhang = 5 − 1 − 1 = 3.
        let s = p(&[5, 1]).stats().unwrap();
        assert_eq!(s.num_parts_above_ones, 1);
        assert_eq!(s.overhang, 3);
    }

    #[test]
    fn rank_set_examples() {
        assert!(p(&[3, 2, 1, 1]).rank_set_contains(2));
        assert!(!p(&[2, 1]).rank_set_contains(1));
        assert!(Partition::empty().rank_set_contains(0));
        assert!(!Partition::empty().rank_set_contains(-1));
        // Single part 1: prefix value −1, then everything ≥ 1; 0 is absent.
        assert!(p(&[1]).rank_set_contains(-1));
        assert!(!p(&[1]).rank_set_contains(0));
        assert!(p(&[1]).rank_set_contains(1));
    }

    #[test]
    fn rank_set_prefix_is_strictly_increasing() {
        for n in 0..=12 {
            for q in partitions_of(n) {
                let prefix = q.rank_set_prefix();
                for w in prefix.windows(2) {
                    assert!(w[0] < w[1]);
                }
                if let Some(&last) = prefix.last() {
                    assert!(last < q.num_parts() as i64);
                }
            }
        }
    }

    #[test]
    fn rank_set_membership_eventually_true() {
        for n in 0..=10 {
            for q in partitions_of(n) {
                let nu = q.num_parts() as i64;
                for k in nu..nu + 4 {
                    assert!(q.rank_set_contains(k));
                    assert_eq!(q.rank_set_witness(k), Some(k));
                }
            }
        }
    }

    #[test]
    fn rank_set_excludes_num_parts_minus_one_plus_one() {
        // Whenever k is in the rank-set, the number of parts is never k + 1.
        for n in 0..=12 {
            for q in partitions_of(n) {
                for k in -8..=8 {
                    if q.rank_set_contains(k) {
                        assert_ne!(q.num_parts() as i64, k + 1, "violated by {q} at k = {k}");
                    }
                }
            }
        }
    }

    #[test]
    fn boundary_segment_examples() {
        assert!(p(&[3, 2, 1, 1]).boundary_segment_vertical(2));
        assert!(!p(&[2, 1]).boundary_segment_vertical(1));
    }

    #[test]
    fn boundary_segment_orientation_matches_rank_set() {
        for n in 0..=12 {
            for q in partitions_of(n) {
                for k in -8..=8 {
                    assert_eq!(
                        q.boundary_segment_vertical(k),
                        q.rank_set_contains(k),
                        "disagreement for {q} at k = {k}"
                    );
                }
            }
        }
    }

    #[test]
    fn enumerate_unconstrained() {
        let all: Vec<Partition> = partitions_of(4).collect();
        assert_eq!(
            all,
            vec![p(&[4]), p(&[3, 1]), p(&[2, 2]), p(&[2, 1, 1]), p(&[1, 1, 1, 1])]
        );
        let zero: Vec<Partition> = partitions_of(0).collect();
        assert_eq!(zero, vec![Partition::empty()]);
    }

    #[test]
    fn enumerate_with_max_part() {
        let all: Vec<Partition> = enumerate(
            6,
            EnumerateOpts { max_part: Some(2), ..Default::default() },
        )
        .collect();
        assert_eq!(
            all,
            vec![p(&[2, 2, 2]), p(&[2, 2, 1, 1]), p(&[2, 1, 1, 1, 1]), p(&[1, 1, 1, 1, 1, 1])]
        );
    }

    #[test]
    fn enumerate_with_max_parts() {
        let all: Vec<Partition> = enumerate(
            5,
            EnumerateOpts { max_parts: Some(2), ..Default::default() },
        )
        .collect();
        assert_eq!(all, vec![p(&[5]), p(&[4, 1]), p(&[3, 2])]);
    }

    #[test]
    fn enumerate_distinct_odd_parts() {
        // Counts for n = 0..8 of partitions whose odd parts are distinct.
        let expected = [1, 1, 1, 2, 3, 4, 5, 7, 10];
        for (n, want) in expected.iter().enumerate() {
            let got = enumerate(
                n as u64,
                EnumerateOpts { distinct_odd_parts: true, ..Default::default() },
            )
            .count();
            assert_eq!(got, *want, "distinct-odd count at n = {n}");
        }
        // Spot check contents at n = 5: 5, 4+1, 3+2, 2+2+1.
        let all: Vec<Partition> = enumerate(
            5,
            EnumerateOpts { distinct_odd_parts: true, ..Default::default() },
        )
        .collect();
        assert_eq!(all, vec![p(&[5]), p(&[4, 1]), p(&[3, 2]), p(&[2, 2, 1])]);
    }

    #[test]
    fn durfee_dissection_examples() {
        let d = p(&[6, 5, 4, 2, 2, 1]).durfee_dissection();
        assert_eq!(d.sizes(), &[3, 2, 1]);
        assert_eq!(&d.sizes()[..2], &[3, 2]);
        assert_eq!(p(&[1]).durfee_dissection().sizes(), &[1]);
        assert!(Partition::empty().durfee_dissection().sizes().is_empty());
        assert_eq!(p(&[4, 4, 4, 4]).durfee_dissection().sizes(), &[4]);
    }

    #[test]
    fn durfee_sizes_weakly_decreasing_and_weight_bounded() {
        for n in 0..=14 {
            for q in partitions_of(n) {
                let d = q.durfee_dissection();
                for w in d.sizes().windows(2) {
                    assert!(w[0] >= w[1]);
                }
                let squares: u64 = d.sizes().iter().map(|s| s * s).sum();
                assert!(squares <= n);
            }
        }
    }

    #[test]
    fn k_rank_examples() {
        assert_eq!(p(&[6, 5, 4, 2, 2, 1]).k_rank(3).unwrap(), 1);
        assert_eq!(p(&[1]).k_rank(2).unwrap(), 0);
        assert!(matches!(
            p(&[1]).k_rank(3),
            Err(Error::NotEnoughSquares { order: 3, required: 2, found: 1 })
        ));
    }

    #[test]
    fn order_two_rank_is_the_rank() {
        for n in 1..=12 {
            for q in partitions_of(n) {
                assert_eq!(q.k_rank(2).unwrap(), q.rank(), "mismatch for {q}");
            }
        }
    }

    #[test]
    fn parse_and_render_round_trip() {
        let q: Partition = "4+3+1".parse().unwrap();
        assert_eq!(q, p(&[4, 3, 1]));
        assert_eq!(q.to_string(), "4+3+1");
        assert_eq!("0".parse::<Partition>().unwrap(), Partition::empty());
        assert_eq!(Partition::empty().to_string(), "0");
        assert!("3+4".parse::<Partition>().is_err());
        assert!("4+0".parse::<Partition>().is_err());
        assert!("".parse::<Partition>().is_err());
        assert!("4+x".parse::<Partition>().is_err());
    }

    #[test]
    fn from_unsorted_normalizes() {
        assert_eq!(Partition::from_unsorted([1, 3, 0, 2, 3]), p(&[3, 3, 2, 1]));
        assert_eq!(Partition::from_unsorted([]), Partition::empty());
    }

    #[test]
    fn part_at_reads_zero_beyond_end() {
        let q = p(&[3, 1]);
        assert_eq!(q.part_at(0), 3);
        assert_eq!(q.part_at(1), 1);
        assert_eq!(q.part_at(2), 0);
        assert_eq!(q.part_at(100), 0);
    }
}
