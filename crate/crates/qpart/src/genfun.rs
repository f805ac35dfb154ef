//! Generating functions for partition families, built two independent ways.
//!
//! [`oracle_series`] counts partitions directly by exhaustive enumeration and
//! is the ground truth everything else is measured against. [`formula_series`]
//! evaluates closed-form expressions — sums of Gaussian binomials, products,
//! theta-like alternating sums — for the same families, selected by an opaque
//! catalog key. The two construction routes share no code beyond basic series
//! arithmetic, so agreement between them is meaningful evidence.
//!
//! The module also provides the rewrite engine [`iterate_qml`], which expands
//! a bounded rank family into a sum of Gaussian binomials by repeatedly
//! applying one of two recurrence steps, and [`rank_crank_table`], which
//! tabulates rank and crank counts by residue class.

use crate::bijection::pseudo_conjugate;
use crate::error::{Error, Result};
use crate::hypergeom::{au, triangular};
use crate::mod2::to_mod2;
use crate::partition::{enumerate, EnumerateOpts, Partition};
use crate::series::{bracket, bracket_base, FactorCount, QMonomial, QSeries};

/// A family of partition counts, selected by the statistic being prescribed.
///
/// Unless a variant says otherwise, "partitions" means ordinary partitions of
/// `n` and the coefficient of `q^n` is the number of partitions of `n` in the
/// family. The `*Bounded` variants additionally require the largest part to
/// be at most `l`. Variants over "distinct-odd-class" partitions range over
/// partitions whose odd parts are pairwise distinct, with even parts
/// unrestricted.
///
/// The empty partition needs a convention per family, since rank-style
/// statistics degenerate there. The conventions used by both the census and
/// the closed forms are stated on each variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// Partitions with rank exactly `m`. The empty partition never counts.
    RankEquals { m: i64 },
    /// Rank exactly `m` and largest part at most `l`. Empty never counts.
    RankEqualsBounded { m: i64, l: i64 },
    /// Partitions with rank at least `m`. The empty partition never counts.
    RankAtLeast { m: i64 },
    /// Rank at least `m` and largest part at most `l`. Empty never counts.
    RankAtLeastBounded { m: i64, l: i64 },
    /// Partitions whose rank-set contains `k`. The empty partition counts
    /// exactly when `k ≥ 0` (its rank-set is all of `0, 1, 2, …`).
    RankSetMember { k: i64 },
    /// Rank-set contains `k`, largest part at most `l`. Empty counts iff
    /// `k ≥ 0`.
    RankSetMemberBounded { k: i64, l: i64 },
    /// Partitions with crank at most `k`. The empty partition counts exactly
    /// when `k ≥ 0`.
    CrankAtMost { k: i64 },
    /// Crank at most `k`, largest part at most `l`. Empty counts iff `k ≥ 0`.
    CrankAtMostBounded { k: i64, l: i64 },
    /// Partitions with crank exactly `k`. The empty partition counts exactly
    /// when `k = 0`.
    CrankEquals { k: i64 },
    /// Crank exactly `k`, largest part at most `l`. Empty counts iff `k = 0`.
    CrankEqualsBounded { k: i64, l: i64 },
    /// Distinct-odd-class partitions, no further restriction. Empty counts.
    DistinctOddClass,
    /// Distinct-odd-class partitions with 2-modular rank at least `r`.
    /// The empty partition never counts.
    M2RankAtLeast { r: i64 },
    /// Distinct-odd-class partitions with 2-modular rank at most `r`.
    /// The empty partition always counts.
    M2RankAtMost { r: i64 },
    /// Partitions carrying at least `order − 1` successive Durfee squares
    /// whose order-`order` rank is at least `m`. Empty never counts.
    KRankAtLeast { order: u64, m: i64 },
    /// Partitions fixed by the crank-negating pseudo-conjugation. Empty
    /// counts (it is trivially fixed).
    SelfPseudoConjugate,
}

impl Family {
    /// Short human-readable description, used in errors and CLI output.
    pub fn describe(&self) -> String {
        match self {
            Family::RankEquals { m } => format!("rank = {m}"),
            Family::RankEqualsBounded { m, l } => format!("rank = {m}, largest part ≤ {l}"),
            Family::RankAtLeast { m } => format!("rank ≥ {m}"),
            Family::RankAtLeastBounded { m, l } => format!("rank ≥ {m}, largest part ≤ {l}"),
            Family::RankSetMember { k } => format!("{k} in rank-set"),
            Family::RankSetMemberBounded { k, l } => {
                format!("{k} in rank-set, largest part ≤ {l}")
            }
            Family::CrankAtMost { k } => format!("crank ≤ {k}"),
            Family::CrankAtMostBounded { k, l } => format!("crank ≤ {k}, largest part ≤ {l}"),
            Family::CrankEquals { k } => format!("crank = {k}"),
            Family::CrankEqualsBounded { k, l } => format!("crank = {k}, largest part ≤ {l}"),
            Family::DistinctOddClass => "distinct odd parts, free even parts".to_string(),
            Family::M2RankAtLeast { r } => format!("distinct-odd class, M2-rank ≥ {r}"),
            Family::M2RankAtMost { r } => format!("distinct-odd class, M2-rank ≤ {r}"),
            Family::KRankAtLeast { order, m } => format!("order-{order} rank ≥ {m}"),
            Family::SelfPseudoConjugate => "fixed by pseudo-conjugation".to_string(),
        }
    }
}

/// A family together with the truncation order its series is computed to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeriesSpec {
    pub family: Family,
    pub trunc: i64,
}

impl SeriesSpec {
    pub fn new(family: Family, trunc: i64) -> Self {
        SeriesSpec { family, trunc }
    }
}

fn domain_err(family: &Family, reason: &str) -> Error {
    Error::FamilyOutOfDomain { family: family.describe(), reason: reason.to_string() }
}

// ---- census ---------------------------------------------------------------

/// Counts partitions family-by-family, weight-by-weight, with no reference
/// to any closed form. Authoritative through `q^trunc`.
pub fn oracle_series(spec: &SeriesSpec) -> Result<QSeries> {
    let t = spec.trunc;
    let f = spec.family;
    if let Family::KRankAtLeast { order, .. } = f {
        if order < 2 {
            return Err(domain_err(&f, "order must be at least 2"));
        }
    }
    let mut opts = EnumerateOpts::default();
    match f {
        Family::RankEqualsBounded { l, .. }
        | Family::RankAtLeastBounded { l, .. }
        | Family::RankSetMemberBounded { l, .. }
        | Family::CrankAtMostBounded { l, .. }
        | Family::CrankEqualsBounded { l, .. } => {
            if l < 0 {
                return Err(domain_err(&f, "largest-part bound must be nonnegative"));
            }
            opts.max_part = Some(l as u64);
        }
        Family::DistinctOddClass | Family::M2RankAtLeast { .. } | Family::M2RankAtMost { .. } => {
            opts.distinct_odd_parts = true;
        }
        _ => {}
    }
    let counts_empty = match f {
        Family::RankEquals { .. }
        | Family::RankEqualsBounded { .. }
        | Family::RankAtLeast { .. }
        | Family::RankAtLeastBounded { .. }
        | Family::M2RankAtLeast { .. }
        | Family::KRankAtLeast { .. } => false,
        Family::RankSetMember { k }
        | Family::RankSetMemberBounded { k, .. }
        | Family::CrankAtMost { k }
        | Family::CrankAtMostBounded { k, .. } => k >= 0,
        Family::CrankEquals { k } | Family::CrankEqualsBounded { k, .. } => k == 0,
        Family::DistinctOddClass | Family::M2RankAtMost { .. } | Family::SelfPseudoConjugate => {
            true
        }
    };
    let pred: Box<dyn Fn(&Partition) -> bool> = match f {
        Family::RankEquals { m } | Family::RankEqualsBounded { m, .. } => {
            Box::new(move |p| p.rank() == m)
        }
        Family::RankAtLeast { m } | Family::RankAtLeastBounded { m, .. } => {
            Box::new(move |p| p.rank() >= m)
        }
        Family::RankSetMember { k } | Family::RankSetMemberBounded { k, .. } => {
            Box::new(move |p| p.rank_set_contains(k))
        }
        Family::CrankAtMost { k } | Family::CrankAtMostBounded { k, .. } => {
            Box::new(move |p| p.crank().expect("nonempty") <= k)
        }
        Family::CrankEquals { k } | Family::CrankEqualsBounded { k, .. } => {
            Box::new(move |p| p.crank().expect("nonempty") == k)
        }
        Family::DistinctOddClass => Box::new(|_| true),
        Family::M2RankAtLeast { r } => Box::new(move |p| {
            to_mod2(p).expect("distinct odd parts").m2_rank().expect("nonempty") >= r
        }),
        Family::M2RankAtMost { r } => Box::new(move |p| {
            to_mod2(p).expect("distinct odd parts").m2_rank().expect("nonempty") <= r
        }),
        Family::KRankAtLeast { order, m } => Box::new(move |p| {
            p.durfee_dissection().count() >= order - 1 && p.k_rank(order).unwrap() >= m
        }),
        Family::SelfPseudoConjugate => Box::new(|p| pseudo_conjugate(p) == *p),
    };
    let mut terms: Vec<(i64, i64)> = Vec::new();
    if counts_empty {
        terms.push((0, 1));
    }
    for n in 1..=t.max(0) {
        let count = enumerate(n as u64, opts).filter(|p| pred(p)).count() as i64;
        if count != 0 {
            terms.push((n, count));
        }
    }
    Ok(QSeries::from_terms(terms).truncated(t))
}

// ---- shared closed-form ingredients ---------------------------------------

/// `1/((q;q)_∞)`, the unrestricted partition number series, authoritative
/// through `q^trunc`.
pub fn partition_series(trunc: i64) -> QSeries {
    QSeries::pochhammer(QMonomial::plus(1), 1, FactorCount::Infinite, Some(trunc))
        .expect("truncated infinite product")
        .invert_to(trunc)
        .expect("unit lowest coefficient")
}

/// `(−q;q²)_∞ / (q²;q²)_∞`, the distinct-odd-class partition series,
/// authoritative through `q^trunc`.
pub fn distinct_odd_series(trunc: i64) -> QSeries {
    let num = QSeries::pochhammer(QMonomial::minus(1), 2, FactorCount::Infinite, Some(trunc))
        .expect("truncated infinite product");
    let den = QSeries::pochhammer(QMonomial::plus(2), 2, FactorCount::Infinite, Some(trunc))
        .expect("truncated infinite product");
    num.mul(&den.invert_to(trunc).expect("unit lowest coefficient")).truncated(trunc)
}

/// `(q;q)_n`, exact.
pub(crate) fn q_factorial(n: i64) -> QSeries {
    assert!(n >= 0, "q-factorial needs a nonnegative length");
    QSeries::pochhammer(QMonomial::plus(1), 1, FactorCount::Finite(n as u64), None)
        .expect("finite product")
}

pub(crate) fn pent(j: i64) -> i64 {
    j * (3 * j - 1) / 2
}

/// (−1)^(j−1) as a sign for alternating sums indexed from j = 1.
pub(crate) fn alt(j: i64) -> i64 {
    if j % 2 == 0 {
        -1
    } else {
        1
    }
}

// ---- closed forms ---------------------------------------------------------

/// Evaluates the closed form registered under `formula` for the family in
/// `spec`. Catalog keys are opaque dotted identifiers; a few keys describe a
/// one-parameter family of sums indexed by the period of the rewrite word
/// that produces them, selected with an `@n` suffix (for example `2.20@n3`;
/// the default period is 1).
///
/// Errors with `FamilyOutOfDomain` when the key does not apply to the
/// spec's family or the parameters fall outside the form's stated domain,
/// and with `UnknownCheckId` for unrecognized keys.
pub fn formula_series(spec: &SeriesSpec, formula: &str) -> Result<QSeries> {
    let (base, period) = match formula.split_once("@n") {
        Some((b, digits)) => {
            let n: u64 = digits
                .parse()
                .map_err(|_| Error::UnknownCheckId { id: formula.to_string() })?;
            if n == 0 {
                return Err(Error::UnknownCheckId { id: formula.to_string() });
            }
            (b, n)
        }
        None => (formula, 1),
    };
    if period != 1 && !matches!(base, "2.20" | "2.21" | "2.23") {
        return Err(Error::UnknownCheckId { id: formula.to_string() });
    }
    let t = spec.trunc;
    let f = &spec.family;
    match base {
        // Rank exactly m, as an alternating theta-like sum over 1/(q;q)_∞.
        "1.11" => {
            let Family::RankEquals { m } = *f else {
                return Err(domain_err(f, "key 1.11 builds the rank = m series"));
            };
            let ma = m.abs();
            let mut sum = QSeries::zero();
            let mut j = 1i64;
            loop {
                let e = pent(j) + ma * j;
                if e > t {
                    break;
                }
                let term = QSeries::monomial(alt(j), e).sub(&QSeries::monomial(alt(j), e + j));
                sum = sum.add(&term);
                j += 1;
            }
            Ok(partition_series(t).mul(&sum).truncated(t))
        }
        // Rank at least m (m ≥ 0), as an alternating sum over 1/(q;q)_∞.
        "1.25" => {
            let Family::RankAtLeast { m } = *f else {
                return Err(domain_err(f, "key 1.25 builds the rank ≥ m series"));
            };
            if m < 0 {
                return Err(domain_err(f, "key 1.25 requires m ≥ 0"));
            }
            let mut sum = QSeries::zero();
            let mut j = 1i64;
            loop {
                let e = pent(j) + m * j;
                if e > t {
                    break;
                }
                sum = sum.add(&QSeries::monomial(alt(j), e));
                j += 1;
            }
            Ok(partition_series(t).mul(&sum).truncated(t))
        }
        // Bounded rank ≥ m: the four single-word binomial sums. Exact.
        "2.8" | "2.9" | "2.10" | "2.11" => {
            let Family::RankAtLeastBounded { m, l } = *f else {
                return Err(domain_err(f, "this key builds a bounded rank ≥ m series"));
            };
            if m < 0 || l < 0 {
                return Err(domain_err(f, "this key requires m ≥ 0 and l ≥ 0"));
            }
            let mut sum = QSeries::zero();
            for j in 1..=(2 * l + m.abs() + 4) {
                let b = match base {
                    "2.8" => bracket(2 * l - m + j, l - m - j),
                    "2.9" => bracket(2 * l - m - j + 1, l + j),
                    "2.10" => bracket(2 * l - m + 1, l - (-3 * j).div_euclid(2)),
                    _ => bracket(2 * l - m, l + (3 * j).div_euclid(2)),
                };
                if b.is_zero() {
                    continue;
                }
                let signed = if alt(j) < 0 { b.neg() } else { b };
                sum = sum.add(&signed.times_monomial(QMonomial::plus(pent(j) + m * j)));
            }
            Ok(sum)
        }
        // Bounded rank ≥ m: the period-n word sums, and the m ≥ −1 extension
        // of the first of them (which subtracts 1 exactly at m = −1).
        "2.20" | "2.23" => {
            let Family::RankAtLeastBounded { m, l } = *f else {
                return Err(domain_err(f, "this key builds a bounded rank ≥ m series"));
            };
            let min_m = if base == "2.20" { 0 } else { -1 };
            if m < min_m || l < 0 {
                return Err(domain_err(f, "parameters outside this form's domain"));
            }
            let mut sum = periodic_sum_ones_then_two(period, m, l);
            if base == "2.23" && m == -1 {
                sum = sum.sub(&QSeries::one());
            }
            Ok(sum)
        }
        "2.21" => {
            let Family::RankAtLeastBounded { m, l } = *f else {
                return Err(domain_err(f, "this key builds a bounded rank ≥ m series"));
            };
            if m < 0 || l < 0 {
                return Err(domain_err(f, "this key requires m ≥ 0 and l ≥ 0"));
            }
            Ok(periodic_sum_twos_then_one(period, m, l))
        }
        // Bounded rank = m (m ≥ 0): difference of two binomial sums. Exact.
        "2.27" => {
            let Family::RankEqualsBounded { m, l } = *f else {
                return Err(domain_err(f, "key 2.27 builds a bounded rank = m series"));
            };
            if m < 0 || l < 0 {
                return Err(domain_err(f, "key 2.27 requires m ≥ 0 and l ≥ 0"));
            }
            Ok(bounded_rank_equals_sum(m, l, 1))
        }
        // Bounded rank = m, any sign of m. Exact.
        "2.29" => {
            let Family::RankEqualsBounded { m, l } = *f else {
                return Err(domain_err(f, "key 2.29 builds a bounded rank = m series"));
            };
            if l < 0 {
                return Err(domain_err(f, "key 2.29 requires l ≥ 0"));
            }
            let sign = if m >= 0 { 1 } else { -1 };
            Ok(bounded_rank_equals_sum(m, l, sign))
        }
        // Crank exactly k, as an alternating sum over 1/(q;q)_∞ plus a
        // correction supported on q^1 at k ∈ {0, 1}.
        "3.1" => {
            let Family::CrankEquals { k } = *f else {
                return Err(domain_err(f, "key 3.1 builds the crank = k series"));
            };
            let ka = k.abs();
            let mut sum = QSeries::zero();
            let mut j = 1i64;
            loop {
                let e = triangular(j - 1) + ka * j;
                if e > t {
                    break;
                }
                let term = QSeries::monomial(alt(j), e).sub(&QSeries::monomial(alt(j), e + j));
                sum = sum.add(&term);
                j += 1;
            }
            let mut out = partition_series(t).mul(&sum);
            if k == 0 {
                out = out.add(&QSeries::monomial(1, 1));
            } else if k == 1 {
                out = out.sub(&QSeries::monomial(1, 1));
            }
            Ok(out.truncated(t))
        }
        // Crank ≤ k via the rank-set family plus a q-correction at k = 0.
        "3.5" => {
            let Family::CrankAtMost { k } = *f else {
                return Err(domain_err(f, "key 3.5 builds the crank ≤ k series"));
            };
            if k < -1 {
                return Err(domain_err(f, "key 3.5 requires k ≥ −1"));
            }
            let g = formula_series(
                &SeriesSpec::new(Family::RankSetMember { k }, t),
                "3.10",
            )?;
            let mut out = g;
            if k == 0 {
                out = out.add(&QSeries::monomial(1, 1));
            }
            Ok(out.truncated(t))
        }
        // Rank-set membership (k ≥ −1), as an alternating sum over 1/(q;q)_∞.
        "3.10" => {
            let Family::RankSetMember { k } = *f else {
                return Err(domain_err(f, "key 3.10 builds the rank-set membership series"));
            };
            if k < -1 {
                return Err(domain_err(f, "key 3.10 requires k ≥ −1"));
            }
            let mut sum = QSeries::zero();
            let mut j = 0i64;
            loop {
                let e = triangular(j) + k * j;
                if e > t {
                    break;
                }
                sum = sum.add(&QSeries::monomial(-alt(j), e));
                j += 1;
            }
            Ok(partition_series(t).mul(&sum).truncated(t))
        }
        // Bounded crank ≤ k from the bounded rank-set form plus corrections.
        "4.1" => {
            let Family::CrankAtMostBounded { k, l } = *f else {
                return Err(domain_err(f, "key 4.1 builds the bounded crank ≤ k series"));
            };
            check_bounded_crank_domain(f, k, l)?;
            let g = formula_series(
                &SeriesSpec::new(Family::RankSetMemberBounded { k, l }, t),
                "4.3",
            )?;
            let one_minus_q = QSeries::one().sub(&QSeries::monomial(1, 1));
            let head = one_minus_q.mul(&q_factorial(k).invert_to(t)?);
            let tail = one_minus_q.neg().mul(&bracket(l + k, k));
            let mut out = g.add(&head).add(&tail);
            if k == 0 {
                out = out.add(&QSeries::monomial(1, 1));
            }
            Ok(out.truncated(t))
        }
        // Bounded rank-set membership as a terminating alternating sum.
        "4.3" => {
            let Family::RankSetMemberBounded { k, l } = *f else {
                return Err(domain_err(f, "key 4.3 builds the bounded rank-set series"));
            };
            check_bounded_crank_domain(f, k, l)?;
            let mut out = QSeries::zero_to(t);
            for j in 0..=l {
                let e = triangular(j) + k * j;
                if e > t {
                    continue;
                }
                let inv = q_factorial(l - j).invert_to(t - e)?;
                let term = inv.times_monomial(QMonomial::plus(e));
                // The j-th term carries sign (−1)^j.
                out = if j % 2 == 0 { out.add(&term) } else { out.sub(&term) };
            }
            Ok(out)
        }
        // Bounded crank = k (0 < k ≤ l): alternating sum plus two closed
        // correction terms.
        "4.9" => {
            let Family::CrankEqualsBounded { k, l } = *f else {
                return Err(domain_err(f, "key 4.9 builds the bounded crank = k series"));
            };
            if !(0 < k && k <= l) {
                return Err(domain_err(f, "key 4.9 requires 0 < k ≤ l"));
            }
            let mut out = QSeries::zero_to(t);
            for j in 1..=l {
                let e = triangular(j - 1) + k * j;
                if e > t {
                    continue;
                }
                let inv = q_factorial(l - j).invert_to((t - e).max(0))?;
                let num = QSeries::one().sub(&QSeries::monomial(1, j));
                let term = num.mul(&inv).times_monomial(QMonomial::plus(e));
                out = if alt(j) > 0 { out.add(&term) } else { out.sub(&term) };
            }
            let one_minus_q = QSeries::one().sub(&QSeries::monomial(1, 1));
            if k > 1 {
                let head = one_minus_q
                    .mul(&q_factorial(k).invert_to(t - k)?)
                    .times_monomial(QMonomial::plus(k));
                out = out.add(&head);
            }
            let tail = one_minus_q
                .neg()
                .mul(&bracket(l - 1 + k, k))
                .times_monomial(QMonomial::plus(k));
            Ok(out.add(&tail).truncated(t))
        }
        // Bounded crank = k (0 < k ≤ l): positive-term sum from a direct
        // diagram decomposition.
        "4.12" => {
            let Family::CrankEqualsBounded { k, l } = *f else {
                return Err(domain_err(f, "key 4.12 builds the bounded crank = k series"));
            };
            if !(0 < k && k <= l) {
                return Err(domain_err(f, "key 4.12 requires 0 < k ≤ l"));
            }
            let mut out = QSeries::zero_to(t);
            if k > 1 {
                let one_minus_q = QSeries::one().sub(&QSeries::monomial(1, 1));
                let head = one_minus_q
                    .mul(&q_factorial(k).invert_to((t - k).max(0))?)
                    .times_monomial(QMonomial::plus(k));
                out = out.add(&head);
            }
            for mu in 1..=(l - 1) {
                let e = (mu + 1) * (mu + k) + mu;
                if e > t {
                    continue;
                }
                // (q²;q)_{μ−1} = (q;q)_μ / (1 − q)
                let den = QSeries::pochhammer(
                    QMonomial::plus(2),
                    1,
                    FactorCount::Finite((mu - 1) as u64),
                    None,
                )?;
                let term = den
                    .invert_to(t - e)?
                    .mul(&bracket(l - 1 + k, mu + k))
                    .times_monomial(QMonomial::plus(e));
                out = out.add(&term);
            }
            Ok(out.truncated(t))
        }
        // Distinct-odd-class partitions as an infinite product.
        "5.1" => {
            let Family::DistinctOddClass = *f else {
                return Err(domain_err(f, "key 5.1 builds the distinct-odd-class series"));
            };
            Ok(distinct_odd_series(t))
        }
        // M2-rank ≥ r (r ≥ 0) over the distinct-odd-class product.
        "5.8" => {
            let Family::M2RankAtLeast { r } = *f else {
                return Err(domain_err(f, "key 5.8 builds the M2-rank ≥ r series"));
            };
            if r < 0 {
                return Err(domain_err(f, "key 5.8 requires r ≥ 0"));
            }
            let mut sum = QSeries::zero();
            let mut j = 1i64;
            loop {
                let e = 2 * r * j + j * (2 * j - 1);
                if e > t {
                    break;
                }
                sum = sum.add(&QSeries::monomial(alt(j), e));
                j += 1;
            }
            Ok(distinct_odd_series(t).mul(&sum).truncated(t))
        }
        // M2-rank ≤ r (r ≥ 0) over the distinct-odd-class product.
        "5.13" => {
            let Family::M2RankAtMost { r } = *f else {
                return Err(domain_err(f, "key 5.13 builds the M2-rank ≤ r series"));
            };
            if r < 0 {
                return Err(domain_err(f, "key 5.13 requires r ≥ 0"));
            }
            let mut sum = QSeries::zero();
            let mut j = 0i64;
            loop {
                let e = 2 * r * j + j * (2 * j + 1);
                if e > t {
                    break;
                }
                sum = sum.add(&QSeries::monomial(-alt(j), e));
                j += 1;
            }
            Ok(distinct_odd_series(t).mul(&sum).truncated(t))
        }
        // M2-rank ≤ r (r ≥ 0) as a double sum of base-q² binomials, sorting
        // the counted partitions by their number of odd and even parts.
        "5.14" => {
            let Family::M2RankAtMost { r } = *f else {
                return Err(domain_err(f, "key 5.14 builds the M2-rank ≤ r series"));
            };
            if r < 0 {
                return Err(domain_err(f, "key 5.14 requires r ≥ 0"));
            }
            // A binomial whose lower index is zero is an empty product and
            // equals 1 even when the upper index is negative.
            let corner = |top: i64, bottom: i64| -> QSeries {
                if bottom == 0 {
                    QSeries::one()
                } else {
                    bracket_base(top, bottom, 2)
                }
            };
            let mut out = QSeries::zero();
            let mut j = 0i64;
            while j * j <= t {
                let mut i = 0i64;
                while j * j + 2 * i <= t {
                    let term = corner(i + j + r, j)
                        .mul(&corner(2 * i + j + r - 1, i))
                        .times_monomial(QMonomial::plus(j * j + 2 * i));
                    out = out.add(&term);
                    i += 1;
                }
                j += 1;
            }
            Ok(out.truncated(t))
        }
        // Order-k rank ≥ m (k ≥ 2, m ≥ 0) over 1/(q;q)_∞.
        "6.2" => {
            let Family::KRankAtLeast { order, m } = *f else {
                return Err(domain_err(f, "key 6.2 builds the order-k rank ≥ m series"));
            };
            if order < 2 || m < 0 {
                return Err(domain_err(f, "key 6.2 requires order ≥ 2 and m ≥ 0"));
            }
            let ko = order as i64;
            let mut sum = QSeries::zero();
            let mut j = 1i64;
            loop {
                let e = j * ((2 * ko - 1) * j - 1) / 2 + m * j;
                if e > t {
                    break;
                }
                sum = sum.add(&QSeries::monomial(alt(j), e));
                j += 1;
            }
            Ok(partition_series(t).mul(&sum).truncated(t))
        }
        // Pseudo-conjugation fixed points: sum over the largest-square size.
        "A.2" => {
            let Family::SelfPseudoConjugate = *f else {
                return Err(domain_err(f, "key A.2 builds the fixed-point series"));
            };
            let mut out = QSeries::one().add(&QSeries::monomial(1, 1)).truncated(t);
            let mut big_m = 1i64;
            loop {
                let e = big_m * (big_m + 1) + big_m;
                if e > t {
                    break;
                }
                let den = QSeries::one()
                    .sub(&QSeries::monomial(1, 1))
                    .mul(&QSeries::pochhammer(
                        QMonomial::plus(4),
                        2,
                        FactorCount::Finite((big_m - 1) as u64),
                        None,
                    )?);
                let term = den.invert_to(t - e)?.times_monomial(QMonomial::plus(e));
                out = out.add(&term);
                big_m += 1;
            }
            Ok(out.truncated(t))
        }
        // Pseudo-conjugation fixed points as a single infinite product.
        "A.4" => {
            let Family::SelfPseudoConjugate = *f else {
                return Err(domain_err(f, "key A.4 builds the fixed-point series"));
            };
            QSeries::pochhammer(QMonomial::minus(1), 2, FactorCount::Infinite, Some(t))
        }
        _ => Err(Error::UnknownCheckId { id: formula.to_string() }),
    }
}

fn check_bounded_crank_domain(f: &Family, k: i64, l: i64) -> Result<()> {
    if !(0 <= k && k <= l && l >= 1) {
        return Err(domain_err(f, "requires 0 ≤ k ≤ l with l ≥ 1"));
    }
    Ok(())
}

/// The canonical closed-form key for each family, used by the CLI when no
/// explicit key is requested. Families whose canonical form has a restricted
/// domain simply report an error for out-of-domain parameters.
pub fn default_formula(family: &Family) -> &'static str {
    match family {
        Family::RankEquals { .. } => "1.11",
        Family::RankEqualsBounded { .. } => "2.29",
        Family::RankAtLeast { .. } => "1.25",
        Family::RankAtLeastBounded { .. } => "2.23",
        Family::RankSetMember { .. } => "3.10",
        Family::RankSetMemberBounded { .. } => "4.3",
        Family::CrankAtMost { .. } => "3.5",
        Family::CrankAtMostBounded { .. } => "4.1",
        Family::CrankEquals { .. } => "3.1",
        Family::CrankEqualsBounded { .. } => "4.12",
        Family::DistinctOddClass => "5.1",
        Family::M2RankAtLeast { .. } => "5.8",
        Family::M2RankAtMost { .. } => "5.13",
        Family::KRankAtLeast { .. } => "6.2",
        Family::SelfPseudoConjugate => "A.4",
    }
}

/// Shared shape of the two-sum closed forms for bounded rank = m. `sign`
/// flips the binomial lower indices between the m ≥ 0 and m < 0 variants.
fn bounded_rank_equals_sum(m: i64, l: i64, sign: i64) -> QSeries {
    let ma = m.abs();
    let mut sum = QSeries::zero();
    for j in 1..=(2 * l + ma + 4) {
        let b1 = bracket(2 * l - m, l + sign * (3 * j).div_euclid(2));
        if !b1.is_zero() {
            let signed = if alt(j) < 0 { b1.neg() } else { b1 };
            sum = sum.add(&signed.times_monomial(QMonomial::plus(pent(j) + ma * j)));
        }
        let b2 = bracket(2 * l - m, l - sign * (-3 * j).div_euclid(2));
        if !b2.is_zero() {
            let signed = if alt(j) < 0 { b2.neg() } else { b2 };
            sum = sum.sub(&signed.times_monomial(QMonomial::plus(j * (3 * j + 1) / 2 + ma * j)));
        }
    }
    sum
}

/// The period-`n` binomial sum produced by the rewrite word of `n − 1`
/// single-raise steps followed by one double-raise step. Valid for `m ≥ −1`
/// (at `m = −1` the sum exceeds the family's series by exactly 1).
pub fn periodic_sum_ones_then_two(period: u64, m: i64, l: i64) -> QSeries {
    assert!(period >= 1, "period must be positive");
    assert!(m >= -1 && l >= 0, "requires m ≥ −1 and l ≥ 0");
    let n = period as i64;
    let mut sum = QSeries::zero();
    for j in 1..=(2 * l + m.abs() + 4) {
        let b = bracket(2 * l - m - au(period, j), l + ((n + 1) * j).div_euclid(n));
        if b.is_zero() {
            continue;
        }
        let signed = if alt(j) < 0 { b.neg() } else { b };
        sum = sum.add(&signed.times_monomial(QMonomial::plus(pent(j) + m * j)));
    }
    sum
}

/// The period-`n` binomial sum produced by the rewrite word of `n − 1`
/// double-raise steps followed by one single-raise step. Valid for `m ≥ 0`.
pub fn periodic_sum_twos_then_one(period: u64, m: i64, l: i64) -> QSeries {
    assert!(period >= 1, "period must be positive");
    assert!(m >= 0 && l >= 0, "requires m ≥ 0 and l ≥ 0");
    let n = period as i64;
    let mut sum = QSeries::zero();
    for j in 1..=(2 * l + m.abs() + 4) {
        let b = bracket(
            2 * l + 1 - m + au(period, j),
            l + 1 - m + (-(n + 1) * j).div_euclid(n),
        );
        if b.is_zero() {
            continue;
        }
        let signed = if alt(j) < 0 { b.neg() } else { b };
        sum = sum.add(&signed.times_monomial(QMonomial::plus(pent(j) + m * j)));
    }
    sum
}

// ---- rewrite engine -------------------------------------------------------

/// One step of the bounded-rank recurrence. Each step trades the current
/// symbol for an explicit binomial term plus a new symbol with `m` raised by
/// 3 and `l` raised by the step's amount.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RewriteStep {
    /// Raises the part bound by 2. Applicable for `m ≥ 0`.
    RaiseTwo,
    /// Raises the part bound by 1. Applicable for `m ≥ −1`; exactly at
    /// `m = −1` the emitted term overshoots by the pending prefactor, which
    /// the engine subtracts back out.
    RaiseOne,
}

/// Expands the bounded rank ≥ `m` series with largest part ≤ `l` into an
/// exact polynomial by cycling through `word`: each step contributes
/// `prefactor · q^{m+1} · [binomial]` and multiplies the pending prefactor
/// by `−q^{m+1}`, until the remaining symbol is identically zero (`l ≤ m`).
pub fn iterate_qml(word: &[RewriteStep], m: i64, l: i64) -> Result<QSeries> {
    assert!(!word.is_empty(), "the rewrite word must be nonempty");
    if m < -1 {
        return Err(Error::RewriteOutOfDomain { step: "start", m });
    }
    let mut m = m;
    let mut l = l;
    let mut acc = QSeries::zero();
    let mut pending = QSeries::one();
    let mut idx = 0usize;
    while l > m {
        let step = word[idx % word.len()];
        idx += 1;
        match step {
            RewriteStep::RaiseTwo => {
                if m < 0 {
                    return Err(Error::RewriteOutOfDomain { step: "RaiseTwo", m });
                }
                let emitted = bracket(2 * l - m + 1, l + 2)
                    .times_monomial(QMonomial::plus(m + 1))
                    .mul(&pending);
                acc = acc.add(&emitted);
                pending = pending.times_monomial(QMonomial::minus(m + 1));
                m += 3;
                l += 2;
            }
            RewriteStep::RaiseOne => {
                let emitted = bracket(2 * l - m, l + 1)
                    .times_monomial(QMonomial::plus(m + 1))
                    .mul(&pending);
                acc = acc.add(&emitted);
                if m == -1 {
                    acc = acc.sub(&pending);
                }
                pending = pending.times_monomial(QMonomial::minus(m + 1));
                m += 3;
                l += 1;
            }
        }
    }
    Ok(acc)
}

// ---- residue tables -------------------------------------------------------

/// Rank and crank counts of the partitions of `n`, tallied by residue class
/// modulo `modulus`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueTable {
    pub modulus: u64,
    pub n: u64,
    /// Entry `k` counts partitions of `n` with rank ≡ k (mod modulus).
    pub rank_counts: Vec<u64>,
    /// Entry `k` counts partitions of `n` with crank ≡ k (mod modulus).
    pub crank_counts: Vec<u64>,
}

/// Tallies ranks and cranks of all partitions of `n` by residue class.
///
/// For `n = 0` the empty partition contributes to the rank column (its rank
/// is 0) but to no crank class, since its crank is undefined.
pub fn rank_crank_table(modulus: u64, n: u64) -> Result<ResidueTable> {
    if modulus == 0 {
        return Err(Error::FamilyOutOfDomain {
            family: "residue table".to_string(),
            reason: "modulus must be positive".to_string(),
        });
    }
    let m = modulus as i64;
    let mut rank_counts = vec![0u64; modulus as usize];
    let mut crank_counts = vec![0u64; modulus as usize];
    for p in enumerate(n, EnumerateOpts::default()) {
        rank_counts[p.rank().rem_euclid(m) as usize] += 1;
        if let Ok(c) = p.crank() {
            crank_counts[c.rem_euclid(m) as usize] += 1;
        }
    }
    Ok(ResidueTable { modulus, n, rank_counts, crank_counts })
}

impl std::fmt::Display for ResidueTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "residue classes mod {} for n = {}", self.modulus, self.n)?;
        writeln!(f, "{:>7}  {:>8}  {:>8}", "class", "rank", "crank")?;
        for k in 0..self.modulus as usize {
            writeln!(f, "{:>7}  {:>8}  {:>8}", k, self.rank_counts[k], self.crank_counts[k])?;
        }
        Ok(())
    }
}

// ---- helpers shared with the identity suite -------------------------------

/// Convenience: the census series for a family, panicking on out-of-domain
/// parameters. Intended for fixed, known-good test grids.
pub fn oracle(family: Family, trunc: i64) -> QSeries {
    oracle_series(&SeriesSpec::new(family, trunc)).expect("family parameters in domain")
}

/// Convenience wrapper around [`formula_series`] mirroring [`oracle`].
pub fn formula(family: Family, trunc: i64, key: &str) -> QSeries {
    formula_series(&SeriesSpec::new(family, trunc), key).expect("formula key and domain")
}
