//! Weight-tracked combinatorial maps with their inverses.
//!
//! Each map here certifies a generating-function identity: the forward
//! direction carries a partition (or 2-modular diagram) from one statistic
//! class into another with a controlled weight change, and the inverse
//! reconstructs the original exactly. Bookkeeping contracts (weight deltas,
//! image characterizations, branch invariants) are asserted where they are
//! load-bearing and exercised exhaustively in the test suite. Every map can
//! also narrate its intermediate diagrams for interactive display.

use crate::error::{Error, Result};
use crate::mod2::Mod2Graph;
use crate::partition::Partition;

/// One step of a map's narration: a label plus an ASCII diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub label: String,
    pub diagram: String,
}

fn trace(steps: &mut Option<&mut Vec<TraceStep>>, label: impl Into<String>, p: &Partition) {
    if let Some(steps) = steps {
        steps.push(TraceStep { label: label.into(), diagram: p.render_ferrers() });
    }
}

fn trace_grid(steps: &mut Option<&mut Vec<TraceStep>>, label: impl Into<String>, g: &Mod2Graph) {
    if let Some(steps) = steps {
        steps.push(TraceStep { label: label.into(), diagram: g.render_grid() });
    }
}

// ---- adjoint ------------------------------------------------------------

/// Remove the largest part, conjugate the remainder, then attach a new
/// largest part `largest − m − 1` (attaching 0 adds nothing). Defined for
/// nonempty `p` with `rank(p) ≥ m ≥ 0`; shrinks the weight by `m + 1` and
/// yields a partition of rank ≥ `−2 − m`, with largest part
/// `largest(p) − m − 1`. The image is empty exactly when `|p| = m + 1`.
pub fn dyson_adjoint(p: &Partition, m: i64) -> Result<Partition> {
    dyson_adjoint_impl(p, m, &mut None)
}

/// [`dyson_adjoint`] plus the intermediate diagrams.
pub fn dyson_adjoint_traced(p: &Partition, m: i64) -> Result<(Partition, Vec<TraceStep>)> {
    let mut steps = Vec::new();
    let out = dyson_adjoint_impl(p, m, &mut Some(&mut steps))?;
    Ok((out, steps))
}

fn dyson_adjoint_impl(
    p: &Partition,
    m: i64,
    steps: &mut Option<&mut Vec<TraceStep>>,
) -> Result<Partition> {
    assert!(m >= 0, "adjoint offset must be nonnegative");
    if p.is_empty() {
        return Err(Error::EmptyPartition { statistic: "dyson_adjoint" });
    }
    if p.rank() < m {
        return Err(Error::RankTooSmall { rank: p.rank(), required: m });
    }
    trace(steps, "input", p);
    let largest = p.largest_part();
    let rest = Partition::from_unsorted(p.parts()[1..].iter().copied());
    trace(steps, format!("removed largest part {largest}"), &rest);
    let conj = rest.conjugate();
    trace(steps, "conjugated the remainder", &conj);
    let attached = largest as i64 - m - 1;
    let mut parts = Vec::with_capacity(conj.parts().len() + 1);
    if attached > 0 {
        parts.push(attached as u64);
    }
    parts.extend_from_slice(conj.parts());
    let out = Partition::new(parts).expect("attached part dominates the conjugate");
    trace(steps, format!("attached new largest part {attached}"), &out);
    debug_assert_eq!(out.weight() as i64, p.weight() as i64 - m - 1);
    debug_assert!(out.rank() >= -2 - m || out.is_empty());
    Ok(out)
}

/// Inverse of [`dyson_adjoint`] at offset `m`: defined on the empty
/// partition (giving the single part `m + 1`) and on partitions of rank
/// ≥ `−2 − m`. Grows the weight by `m + 1`.
pub fn dyson_adjoint_inverse(p: &Partition, m: i64) -> Result<Partition> {
    assert!(m >= 0, "adjoint offset must be nonnegative");
    if p.is_empty() {
        return Ok(Partition::new(vec![(m + 1) as u64]).expect("single positive part"));
    }
    if p.rank() < -2 - m {
        return Err(Error::RankTooSmall { rank: p.rank(), required: -2 - m });
    }
    let largest = p.largest_part() as i64 + m + 1;
    let tail = Partition::from_unsorted(p.parts()[1..].iter().copied());
    let conj = tail.conjugate();
    let mut parts = Vec::with_capacity(conj.parts().len() + 1);
    parts.push(largest as u64);
    parts.extend_from_slice(conj.parts());
    Ok(Partition::new(parts).expect("restored largest part dominates"))
}

// ---- rank-set insertion --------------------------------------------------

/// For `k ≥ 0` in the rank-set of `p`, with witness `i` (`i − p_{i+1} = k`):
/// delete row `i + 1` and add one cell to each of the first `i` rows (rows
/// past the end start from length 0, so a degenerate witness appends ones).
/// Grows the weight by exactly `k` and removes `k − 1` from the rank-set of
/// the result.
pub fn rank_set_insertion(p: &Partition, k: i64) -> Result<Partition> {
    rank_set_insertion_impl(p, k, &mut None)
}

/// [`rank_set_insertion`] plus the intermediate diagrams.
pub fn rank_set_insertion_traced(p: &Partition, k: i64) -> Result<(Partition, Vec<TraceStep>)> {
    let mut steps = Vec::new();
    let out = rank_set_insertion_impl(p, k, &mut Some(&mut steps))?;
    Ok((out, steps))
}

fn rank_set_insertion_impl(
    p: &Partition,
    k: i64,
    steps: &mut Option<&mut Vec<TraceStep>>,
) -> Result<Partition> {
    assert!(k >= 0, "insertion offset must be nonnegative");
    let Some(i) = p.rank_set_witness(k) else {
        return Err(Error::NotInRankSet { offset: k, partition: p.to_string() });
    };
    trace(steps, "input", p);
    let removed_len = p.part_at(i as u64);
    let after_removal = Partition::from_unsorted(
        p.parts()
            .iter()
            .enumerate()
            .filter(|&(idx, _)| idx as i64 != i)
            .map(|(_, &part)| part),
    );
    trace(steps, format!("removed row {} of length {removed_len}", i + 1), &after_removal);
    // One new cell on each of the first i rows; rows that do not exist yet
    // are created as parts of size 1.
    let mut parts: Vec<u64> = Vec::new();
    for j in 0..i {
        parts.push(after_removal.part_at(j as u64) + 1);
    }
    parts.extend(after_removal.parts().iter().skip(i as usize).copied());
    let out = Partition::from_unsorted(parts);
    trace(steps, format!("added one cell to each of the first {i} rows"), &out);
    debug_assert_eq!(out.weight() as i64, p.weight() as i64 + k);
    debug_assert!(!out.rank_set_contains(k - 1));
    Ok(out)
}

/// Inverse of [`rank_set_insertion`] at offset `k`: defined exactly when
/// `k − 1` is absent from the rank-set of `p`. Locates the unique index `i`
/// where the rank-set values jump over `k − 1`, removes one cell from each
/// of the first `i` rows, and re-inserts a row of length `i − k`.
pub fn rank_set_insertion_inverse(p: &Partition, k: i64) -> Result<Partition> {
    assert!(k >= 0, "insertion offset must be nonnegative");
    if p.rank_set_contains(k - 1) {
        return Err(Error::NotInImage { map: "rank_set_insertion", value: p.to_string() });
    }
    // f(j) = j − p_{j+1} is strictly increasing and misses k − 1, so there
    // is a unique i ≥ 0 with f(i−1) ≤ k − 2 and f(i) ≥ k (f(−1) = −∞).
    let mut i: i64 = 0;
    while i - (p.part_at(i as u64) as i64) < k {
        i += 1;
    }
    debug_assert!(i == 0 || (i - 1) - (p.part_at(i as u64 - 1) as i64) <= k - 2);
    let mut parts: Vec<u64> = Vec::new();
    for j in 0..i {
        parts.push(p.part_at(j as u64).saturating_sub(1));
    }
    parts.push((i - k) as u64);
    parts.extend(p.parts().iter().skip(i as usize).copied());
    Ok(Partition::from_unsorted(parts))
}

// ---- crank map -----------------------------------------------------------

/// Carries a partition with `k` in its rank-set to one with crank ≤ `k`,
/// preserving the weight. Three branches:
///
/// 1. at least `k + 2` parts — remove the witness row (length `i − k`) and
///    append that many ones;
/// 2. at most `k` parts with a unique largest part — decrement the largest
///    part and append a single 1 (the one-cell partition maps to itself);
/// 3. at most `k` parts with a repeated largest part (forces `k ≥ 2`) —
///    conjugate.
///
/// Having exactly `k + 1` parts is impossible when `k` is in the rank-set
/// (asserted). The empty partition (any `k ≥ 0`) maps to itself.
pub fn crank_map(p: &Partition, k: i64) -> Result<Partition> {
    crank_map_impl(p, k, &mut None)
}

/// [`crank_map`] plus the intermediate diagrams.
pub fn crank_map_traced(p: &Partition, k: i64) -> Result<(Partition, Vec<TraceStep>)> {
    let mut steps = Vec::new();
    let out = crank_map_impl(p, k, &mut Some(&mut steps))?;
    Ok((out, steps))
}

fn crank_map_impl(
    p: &Partition,
    k: i64,
    steps: &mut Option<&mut Vec<TraceStep>>,
) -> Result<Partition> {
    if !p.rank_set_contains(k) {
        return Err(Error::NotInRankSet { offset: k, partition: p.to_string() });
    }
    trace(steps, "input", p);
    if p.is_empty() {
        trace(steps, "empty input is fixed", p);
        return Ok(Partition::empty());
    }
    let nu = p.num_parts() as i64;
    assert!(nu != k + 1, "a rank-set member never has k + 1 parts");
    let out = if nu >= k + 2 {
        // Branch 1: the witness row exists and has positive length.
        let i = p.rank_set_witness(k).expect("membership checked above");
        let row_len = p.part_at(i as u64);
        debug_assert_eq!(row_len as i64, i - k);
        debug_assert!(row_len > 0);
        let mut parts: Vec<u64> = p
            .parts()
            .iter()
            .enumerate()
            .filter(|&(idx, _)| idx as i64 != i)
            .map(|(_, &part)| part)
            .collect();
        let removed = Partition::from_unsorted(parts.iter().copied());
        trace(steps, format!("removed row {} of length {row_len}", i + 1), &removed);
        parts.extend(std::iter::repeat(1).take(row_len as usize));
        let out = Partition::from_unsorted(parts);
        trace(steps, format!("appended {row_len} ones"), &out);
        out
    } else if p.num_parts() == 1 || p.part_at(0) > p.part_at(1) {
        // Branch 2: unique largest part.
        if p.weight() == 1 {
            trace(steps, "single-cell input is fixed", p);
            p.clone()
        } else {
            let mut parts = p.parts().to_vec();
            parts[0] -= 1;
            parts.push(1);
            let out = Partition::from_unsorted(parts);
            trace(steps, "moved one cell from the largest part to a new 1", &out);
            out
        }
    } else {
        // Branch 3: repeated largest part, at most k parts, so k ≥ 2.
        debug_assert!(k >= 2);
        let out = p.conjugate();
        trace(steps, "conjugated", &out);
        out
    };
    debug_assert_eq!(out.weight(), p.weight());
    debug_assert!(out.is_empty() || out.crank().unwrap() <= k);
    Ok(out)
}

/// Inverse of [`crank_map`] at offset `k`, defined on partitions of crank
/// ≤ `k` — except that for `k = 0` the single-cell partition is outside the
/// image. Branch selection: some ones and ≥ `k + 2` parts invert branch 1;
/// some ones and ≤ `k + 1` parts invert branch 2; no ones inverts branch 3.
pub fn crank_map_inverse(p: &Partition, k: i64) -> Result<Partition> {
    if p.is_empty() {
        return if k >= 0 {
            Ok(Partition::empty())
        } else {
            Err(Error::NotInImage { map: "crank_map", value: p.to_string() })
        };
    }
    if p.crank().expect("nonempty") > k {
        return Err(Error::NotInImage { map: "crank_map", value: p.to_string() });
    }
    let ones = p.num_ones() as i64;
    let nu = p.num_parts() as i64;
    if ones > 0 && nu >= k + 2 {
        // Undo branch 1: find where the boundary crosses the offset-k
        // diagonal, i.e. the smallest i ≥ max(k, 0) with p_{i+1} ≤ i − k.
        let mut i = k.max(0);
        while p.part_at(i as u64) as i64 > i - k {
            i += 1;
        }
        let row_len = i - k;
        assert!(
            row_len > 0 && row_len <= ones,
            "restored row length must fit inside the block of ones"
        );
        let mut parts: Vec<u64> = p.parts()[..(nu - row_len) as usize].to_vec();
        parts.push(row_len as u64);
        Ok(Partition::from_unsorted(parts))
    } else if ones > 0 {
        // Undo branch 2: remove one 1, put the cell back on the largest part.
        if p.weight() == 1 {
            if k == 0 {
                // A single cell has crank −1 ≤ 0, yet no preimage: branch 1
                // would need ≥ 2 parts and branch 2 needs offset ≥ 1.
                return Err(Error::NotInImage { map: "crank_map", value: p.to_string() });
            }
            return Ok(p.clone());
        }
        let mut parts = p.parts()[..nu as usize - 1].to_vec();
        if parts.is_empty() {
            return Err(Error::NotInImage { map: "crank_map", value: p.to_string() });
        }
        parts[0] += 1;
        Ok(Partition::from_unsorted(parts))
    } else {
        // Undo branch 3.
        Ok(p.conjugate())
    }
}

// ---- pseudo-conjugation --------------------------------------------------

/// A weight-preserving involution that negates the crank (for weight > 1).
/// The empty and one-cell partitions are fixed by convention. Branches:
///
/// (i) no ones — replace the largest row by that many ones;
/// (ii) some ones, no part above the count of ones — replace the ones by a
///      single new largest part;
/// (iii) both — with `M` = number of ones, the `N` parts above `M`, middle
///       parts `A` (values in `2..=M`), and overhang `γ`: rebuild as `M`
///       rows of `N + 1 + A*_i` (adding `γ` to the first), then the parts
///       of `B*`, then `N` ones, where `B` collects the big-part excesses
///       `q_i − M − 1` (first reduced by `γ`) and `*` is conjugation.
pub fn pseudo_conjugate(p: &Partition) -> Partition {
    pseudo_conjugate_impl(p, &mut None)
}

/// [`pseudo_conjugate`] plus the intermediate diagrams.
pub fn pseudo_conjugate_traced(p: &Partition) -> (Partition, Vec<TraceStep>) {
    let mut steps = Vec::new();
    let out = pseudo_conjugate_impl(p, &mut Some(&mut steps));
    (out, steps)
}

fn pseudo_conjugate_impl(p: &Partition, steps: &mut Option<&mut Vec<TraceStep>>) -> Partition {
    trace(steps, "input", p);
    if p.weight() <= 1 {
        trace(steps, "fixed by convention", p);
        return p.clone();
    }
    let ones = p.num_ones();
    let above = p.num_parts_above_ones();
    let out = if ones == 0 {
        // Branch i.
        let largest = p.largest_part();
        let mut parts: Vec<u64> = p.parts()[1..].to_vec();
        parts.extend(std::iter::repeat(1).take(largest as usize));
        let out = Partition::from_unsorted(parts);
        trace(steps, format!("traded the largest part for {largest} ones"), &out);
        out
    } else if above == 0 {
        // Branch ii.
        let mut parts = vec![ones];
        parts.extend(p.parts().iter().take_while(|&&part| part > 1).copied());
        let out = Partition::new(parts).expect("new largest part dominates");
        trace(steps, format!("traded the {ones} ones for a new largest part"), &out);
        out
    } else {
        // Branch iii.
        let m = ones;
        let n = above;
        let gamma = p.overhang().expect("nonempty") as u64;
        let bigs: Vec<u64> = p.parts()[..n as usize].to_vec();
        let middles: Vec<u64> = p.parts()[n as usize..]
            .iter()
            .copied()
            .take_while(|&part| part > 1)
            .collect();
        debug_assert!(middles.iter().all(|&part| part >= 2 && part <= m));
        let excesses = Partition::from_unsorted(bigs.iter().enumerate().map(|(idx, &q)| {
            let reduction = m + 1 + if idx == 0 { gamma } else { 0 };
            q - reduction
        }));
        let middles_conj = Partition::from_unsorted(middles).conjugate();
        let mut parts: Vec<u64> = Vec::new();
        for i in 0..m {
            parts.push(n + 1 + middles_conj.part_at(i) + if i == 0 { gamma } else { 0 });
        }
        parts.extend_from_slice(excesses.conjugate().parts());
        parts.extend(std::iter::repeat(1).take(n as usize));
        let out = Partition::new(parts).expect("rebuilt rows are sorted");
        trace(
            steps,
            format!("rebuilt from {n} big parts, {} middles, overhang {gamma}", middles_conj.weight()),
            &out,
        );
        debug_assert_eq!(out.num_ones(), n);
        debug_assert_eq!(out.num_parts_above_ones(), m);
        debug_assert_eq!(out.overhang().expect("nonempty"), gamma as i64);
        out
    };
    debug_assert_eq!(out.weight(), p.weight());
    debug_assert_eq!(out.crank().unwrap(), -p.crank().unwrap());
    out
}

// ---- 2-modular adjoint ---------------------------------------------------

/// Adjoint on 2-modular diagrams at offset `r ≥ 0`: remove the largest row,
/// transpose the remainder, then attach a new largest row — even of
/// `ℓ − 1` cells if the removed row was odd, odd of `ℓ` cells if it was
/// even, where `ℓ` = (cells in the removed row) − `r`. Needs a nonempty
/// diagram with rank-statistic ≥ `r`; shrinks the weight by `2r + 1` and
/// the result has rank-statistic ≥ `−1 − r`. The image is empty exactly
/// when the input is the single odd part `2r + 1`.
pub fn mod2_adjoint(g: &Mod2Graph, r: i64) -> Result<Mod2Graph> {
    mod2_adjoint_impl(g, r, &mut None)
}

/// [`mod2_adjoint`] plus the intermediate grids.
pub fn mod2_adjoint_traced(g: &Mod2Graph, r: i64) -> Result<(Mod2Graph, Vec<TraceStep>)> {
    let mut steps = Vec::new();
    let out = mod2_adjoint_impl(g, r, &mut Some(&mut steps))?;
    Ok((out, steps))
}

fn mod2_adjoint_impl(
    g: &Mod2Graph,
    r: i64,
    steps: &mut Option<&mut Vec<TraceStep>>,
) -> Result<Mod2Graph> {
    assert!(r >= 0, "adjoint offset must be nonnegative");
    let rank = g.m2_rank()?;
    if rank < r {
        return Err(Error::M2RankTooSmall { rank, required: r });
    }
    trace_grid(steps, "input", g);
    let removed = g.parts()[0];
    let ell = g.largest_row_cells() as i64 - r;
    debug_assert!(ell >= 1);
    let rest = Mod2Graph::from_partition(&Partition::from_unsorted(
        g.parts()[1..].iter().copied(),
    ))
    .expect("sub-diagram stays valid");
    trace_grid(steps, format!("removed the largest row ({removed})"), &rest);
    let conj = rest.conjugate();
    trace_grid(steps, "transposed the remainder", &conj);
    let attached: u64 = if removed % 2 == 1 {
        (2 * ell - 2) as u64 // even part of ℓ − 1 cells
    } else {
        (2 * ell - 1) as u64 // odd part of ℓ cells
    };
    let mut parts: Vec<u64> = Vec::new();
    if attached > 0 {
        parts.push(attached);
    }
    parts.extend_from_slice(conj.parts());
    let out = Mod2Graph::from_partition(&Partition::from_unsorted(parts))
        .expect("attached row keeps odd parts distinct");
    trace_grid(steps, format!("attached new largest row ({attached})"), &out);
    debug_assert_eq!(out.weight() as i64, g.weight() as i64 - 2 * r - 1);
    debug_assert!(out.is_empty() || out.m2_rank().unwrap() >= -1 - r);
    Ok(out)
}

/// Inverse of [`mod2_adjoint`] at offset `r`: the empty diagram comes from
/// the single odd part `2r + 1`; otherwise the parity of the largest part
/// identifies what was removed, and transposing the rest restores it.
pub fn mod2_adjoint_inverse(g: &Mod2Graph, r: i64) -> Result<Mod2Graph> {
    assert!(r >= 0, "adjoint offset must be nonnegative");
    if g.is_empty() {
        let part = (2 * r + 1) as u64;
        return Ok(Mod2Graph::from_partition(&Partition::new(vec![part]).expect("positive part"))
            .expect("single odd part"));
    }
    let rank = g.m2_rank().expect("nonempty");
    if rank < -1 - r {
        return Err(Error::M2RankTooSmall { rank, required: -1 - r });
    }
    let largest = g.parts()[0];
    // Attached even 2ℓ−2 came from odd 2(ℓ+r)−1; attached odd 2ℓ−1 from
    // even 2(ℓ+r).
    let restored: u64 = if largest % 2 == 0 {
        let ell = (largest / 2 + 1) as i64;
        (2 * (ell + r) - 1) as u64
    } else {
        let ell = largest.div_ceil(2) as i64;
        (2 * (ell + r)) as u64
    };
    let tail = Mod2Graph::from_partition(&Partition::from_unsorted(
        g.parts()[1..].iter().copied(),
    ))
    .expect("sub-diagram stays valid");
    let conj = tail.conjugate();
    let mut parts = vec![restored];
    parts.extend_from_slice(conj.parts());
    let p = Partition::from_unsorted(parts);
    Mod2Graph::from_partition(&p)
        .map_err(|_| Error::NotInImage { map: "mod2_adjoint", value: g.to_partition().to_string() })
}
