//! Registry and runner for the library's verification suite.
//!
//! Every entry in the registry pairs two independent computations of the same
//! quantity — a brute-force census against a closed form, two closed forms
//! against each other, or a rewrite-engine expansion against its summed
//! shape — and compares them coefficient by coefficient over an explicit
//! exponent window. Check ids are opaque catalog keys (dotted strings such as
//! `"2.22"` or `"4.13@term"`); the registry itself is the single source of
//! truth for which sides are compared, on which parameter grid, and to which
//! truncation.
//!
//! Reports serialize to one JSON object per check with the fields
//! `{id, params, truncation, mode, gating, pass, verified_range,
//! first_mismatch, elapsed_ms}` (plus `error` when evaluation itself failed).

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex, OnceLock};
use std::thread;
use std::time::Instant;

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::genfun::{self, alt, pent, q_factorial, Family, RewriteStep, SeriesSpec};
use crate::hypergeom::{cubic_sum, pentagonal_sum_general, phi21_partial, triangular, LowerParam};
use crate::series::{bracket, bracket_base, qbinom, FactorCount, QMonomial, QSeries};
use crate::Result;

// ---- check and report types -----------------------------------------------

/// How the two sides of a check are expected to agree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckMode {
    /// Both sides are finite polynomials and must agree on their entire
    /// support; any term escaping the certified window is a failure.
    ExactPolynomial,
    /// The sides agree on every exponent up to the common authoritative
    /// truncation; nothing is claimed beyond it.
    TruncatedSeries,
}

/// Named integer parameters of a check, ordered for deterministic output.
pub type Params = BTreeMap<&'static str, i64>;

type Eval = Arc<dyn Fn(i64) -> Result<(QSeries, QSeries)> + Send + Sync>;

/// One registered comparison: an id, its parameter assignment, the working
/// truncation, and the evaluator producing the two sides.
#[derive(Clone, Serialize)]
pub struct IdentityCheck {
    /// Opaque catalog key; several checks may share one id across a grid.
    pub id: &'static str,
    /// Parameter assignment within the registered grid.
    pub params: Params,
    /// Exponent window the comparison aims to certify.
    pub truncation: i64,
    pub mode: CheckMode,
    /// Gating checks must pass for the suite to succeed; non-gating checks
    /// are exploratory probes outside the asserted domain.
    pub gating: bool,
    #[serde(skip)]
    eval: Eval,
}

impl fmt::Debug for IdentityCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IdentityCheck")
            .field("id", &self.id)
            .field("params", &self.params)
            .field("truncation", &self.truncation)
            .field("mode", &self.mode)
            .field("gating", &self.gating)
            .finish_non_exhaustive()
    }
}

/// First coefficient disagreement found, with both values rendered in
/// decimal (or `"unverified"` for a side not authoritative at the exponent).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub exponent: i64,
    pub lhs: String,
    pub rhs: String,
}

/// Outcome of running one check.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub id: &'static str,
    pub params: Params,
    pub truncation: i64,
    pub mode: CheckMode,
    pub gating: bool,
    pub pass: bool,
    /// Inclusive exponent interval over which equality was certified.
    pub verified_range: Option<(i64, i64)>,
    pub first_mismatch: Option<Mismatch>,
    /// Set when an evaluator returned an error instead of two sides.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub elapsed_ms: u64,
}

// ---- comparison -----------------------------------------------------------

fn coeff_repr(s: &QSeries, e: i64) -> String {
    match s.truncation() {
        Some(b) if e > b => "unverified".to_string(),
        _ => s.coeff(e).to_string(),
    }
}

/// Compares two series under the given mode. Returns pass, the certified
/// window, and the first mismatch (if any).
fn compare(
    mode: CheckMode,
    lhs: &QSeries,
    rhs: &QSeries,
) -> (bool, Option<(i64, i64)>, Option<Mismatch>) {
    let bound = match (lhs.truncation(), rhs.truncation()) {
        (None, None) => None,
        (Some(a), None) | (None, Some(a)) => Some(a),
        (Some(a), Some(b)) => Some(a.min(b)),
    };
    let mut exps: BTreeSet<i64> = BTreeSet::new();
    exps.extend(lhs.terms().map(|(e, _)| e));
    exps.extend(rhs.terms().map(|(e, _)| e));
    for &e in &exps {
        if let Some(b) = bound {
            if e > b {
                if mode == CheckMode::ExactPolynomial {
                    // A full-support claim cannot be certified when a term
                    // escapes the window the other side is authoritative for.
                    let mm = Mismatch {
                        exponent: e,
                        lhs: coeff_repr(lhs, e),
                        rhs: coeff_repr(rhs, e),
                    };
                    return (false, None, Some(mm));
                }
                break;
            }
        }
        let (a, b) = (lhs.coeff(e), rhs.coeff(e));
        if a != b {
            let mm = Mismatch { exponent: e, lhs: a.to_string(), rhs: b.to_string() };
            return (false, None, Some(mm));
        }
    }
    let lo = [lhs.min_exponent(), rhs.min_exponent(), Some(0)]
        .into_iter()
        .flatten()
        .min()
        .unwrap_or(0);
    let hi = match bound {
        Some(b) => b,
        None => [lhs.max_exponent(), rhs.max_exponent(), Some(0)]
            .into_iter()
            .flatten()
            .max()
            .unwrap_or(0),
    };
    (true, Some((lo, hi)), None)
}

/// Runs a single check and reports the outcome.
pub fn run(check: &IdentityCheck) -> IdentityReport {
    let start = Instant::now();
    let (pass, verified_range, first_mismatch, error) = match (check.eval)(check.truncation) {
        Ok((lhs, rhs)) => {
            let (pass, range, mm) = compare(check.mode, &lhs, &rhs);
            (pass, range, mm, None)
        }
        Err(e) => (false, None, None, Some(e.to_string())),
    };
    IdentityReport {
        id: check.id,
        params: check.params.clone(),
        truncation: check.truncation,
        mode: check.mode,
        gating: check.gating,
        pass,
        verified_range,
        first_mismatch,
        error,
        elapsed_ms: start.elapsed().as_millis() as u64,
    }
}

/// True when `id` matches the filter pattern: either exact equality or, for
/// patterns ending in `*`, a prefix match (`"2.*"`, `"4.13*"`, `"*"`).
pub fn matches_filter(id: &str, pattern: &str) -> bool {
    match pattern.strip_suffix('*') {
        Some(prefix) => id.starts_with(prefix),
        None => id == pattern,
    }
}

/// Runs every registered check whose id matches `filter` (all when `None`),
/// on up to `jobs` worker threads. A truncation override replaces the
/// registered truncation of truncated-series checks only; exact-polynomial
/// windows are intrinsic to their parameters. The report order is the
/// registry order (sorted by id, then params) regardless of scheduling.
pub fn run_suite(filter: Option<&str>, trunc: Option<i64>, jobs: usize) -> Vec<IdentityReport> {
    let checks: Vec<IdentityCheck> = registry()
        .into_iter()
        .filter(|c| filter.map_or(true, |p| matches_filter(c.id, p)))
        .map(|mut c| {
            if c.mode == CheckMode::TruncatedSeries {
                if let Some(t) = trunc {
                    c.truncation = t;
                }
            }
            c
        })
        .collect();
    let n = checks.len();
    let slots: Mutex<Vec<Option<IdentityReport>>> = Mutex::new((0..n).map(|_| None).collect());
    let next = AtomicUsize::new(0);
    let workers = jobs.max(1).min(n.max(1));
    thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= n {
                    break;
                }
                let report = run(&checks[i]);
                slots.lock().expect("report slots")[i] = Some(report);
            });
        }
    });
    slots
        .into_inner()
        .expect("report slots")
        .into_iter()
        .map(|r| r.expect("every check ran"))
        .collect()
}

/// Number of failed gating checks in a report list.
pub fn gating_failures(reports: &[IdentityReport]) -> usize {
    reports.iter().filter(|r| r.gating && !r.pass).count()
}

// ---- shared evaluator helpers ---------------------------------------------

/// Census series, memoized per (family, truncation): the same enumeration is
/// shared by every check that needs it.
fn census(family: Family, trunc: i64) -> Result<QSeries> {
    static CACHE: OnceLock<Mutex<HashMap<(Family, i64), QSeries>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().expect("census cache").get(&(family, trunc)) {
        return Ok(hit.clone());
    }
    let computed = genfun::oracle_series(&SeriesSpec::new(family, trunc))?;
    cache
        .lock()
        .expect("census cache")
        .insert((family, trunc), computed.clone());
    Ok(computed)
}

fn closed_form(family: Family, trunc: i64, key: &str) -> Result<QSeries> {
    genfun::formula_series(&SeriesSpec::new(family, trunc), key)
}

fn mono(e: i64) -> QSeries {
    QSeries::monomial(1, e)
}

fn one_minus_q() -> QSeries {
    QSeries::from_terms([(0, 1), (1, -1)])
}

/// `(q^e; q)_n` as an exact (Laurent) polynomial.
fn poch1(e: i64, n: i64) -> QSeries {
    QSeries::pochhammer(QMonomial::plus(e), 1, FactorCount::Finite(n.max(0) as u64), None)
        .expect("finite product")
}

/// `(x; q²)_n` as an exact polynomial, `x = ±q^e` by `sign`.
fn poch2(x: QMonomial, n: i64) -> QSeries {
    QSeries::pochhammer(x, 2, FactorCount::Finite(n.max(0) as u64), None).expect("finite product")
}

/// `(x; q)_∞` through `q^t`.
fn poch1_inf(x: QMonomial, t: i64) -> QSeries {
    QSeries::pochhammer(x, 1, FactorCount::Infinite, Some(t)).expect("truncated product")
}

/// `(x; q²)_∞` through `q^t`.
fn poch2_inf(x: QMonomial, t: i64) -> QSeries {
    QSeries::pochhammer(x, 2, FactorCount::Infinite, Some(t)).expect("truncated product")
}

/// `1/(q; q)_n` through `q^t`.
fn inv_qfac(n: i64, t: i64) -> Result<QSeries> {
    q_factorial(n).invert_to(t)
}

/// `(q²; q²)_n` as an exact polynomial.
fn qfac2(n: i64) -> QSeries {
    poch2(QMonomial::plus(2), n)
}

/// `1/(q²; q²)_n` through `q^t`.
fn inv_qfac2(n: i64, t: i64) -> Result<QSeries> {
    qfac2(n).invert_to(t)
}

fn shifted(s: &QSeries, e: i64) -> QSeries {
    s.times_monomial(QMonomial::plus(e))
}

/// 1 when the condition holds, else 0 (exact).
fn indicator(cond: bool) -> QSeries {
    if cond {
        QSeries::one()
    } else {
        QSeries::zero()
    }
}

/// `Σ_j sign(j)·q^{f(j)}` over all integers `j` with `f(j) ≤ t`,
/// authoritative through `q^t`. The reach covers every quadratic exponent
/// with leading coefficient ≥ 1/2.
fn bilateral(f: impl Fn(i64) -> i64, sign: impl Fn(i64) -> i64, t: i64) -> QSeries {
    let reach = ((2 * t.max(0)) as f64).sqrt() as i64 + 3;
    let mut acc = QSeries::zero_to(t);
    for j in -reach..=reach {
        let e = f(j);
        if e <= t {
            acc = acc.add(&QSeries::monomial(sign(j), e));
        }
    }
    acc
}

/// `Σ_{j≥j0} sign(j)·q^{f(j)}` for increasing `f`, authoritative through `q^t`.
fn one_sided(j0: i64, f: impl Fn(i64) -> i64, sign: impl Fn(i64) -> i64, t: i64) -> QSeries {
    let mut acc = QSeries::zero_to(t);
    let mut j = j0;
    while f(j) <= t {
        acc = acc.add(&QSeries::monomial(sign(j), f(j)));
        j += 1;
    }
    acc
}

fn add(
    v: &mut Vec<IdentityCheck>,
    id: &'static str,
    params: &[(&'static str, i64)],
    truncation: i64,
    mode: CheckMode,
    gating: bool,
    eval: impl Fn(i64) -> Result<(QSeries, QSeries)> + Send + Sync + 'static,
) {
    v.push(IdentityCheck {
        id,
        params: params.iter().copied().collect(),
        truncation,
        mode,
        gating,
        eval: Arc::new(eval),
    });
}

use CheckMode::{ExactPolynomial as EP, TruncatedSeries as TS};

// ---- the registry ---------------------------------------------------------

/// Builds the full check registry, sorted by id then params.
pub fn registry() -> Vec<IdentityCheck> {
    let mut v = Vec::new();
    residue_class_checks(&mut v);
    pentagonal_checks(&mut v);
    bounded_rank_checks(&mut v);
    rank_set_crank_checks(&mut v);
    bounded_crank_checks(&mut v);
    m2_rank_checks(&mut v);
    durfee_rank_checks(&mut v);
    pseudo_conjugation_checks(&mut v);
    product_expansion_checks(&mut v);
    cubic_checks(&mut v);
    v.sort_by(|a, b| a.id.cmp(b.id).then_with(|| a.params.cmp(&b.params)));
    v
}

/// Uniform residue-class tables: `modulus · (class count)` must equal the
/// total partition number, itself cross-checked against the series module.
fn residue_class_checks(v: &mut Vec<IdentityCheck>) {
    let table = |id, which_rank: bool, modulus: i64, step: i64, offset: i64, n_max: i64, v: &mut Vec<_>| {
        for n in 0..=n_max {
            let arg = step * n + offset;
            add(v, id, &[("n", n)], modulus - 1, EP, true, move |_| {
                let t = genfun::rank_crank_table(modulus as u64, arg as u64)?;
                let counts = if which_rank { &t.rank_counts } else { &t.crank_counts };
                let lhs = QSeries::from_terms(
                    counts.iter().enumerate().map(|(k, c)| (k as i64, modulus * *c as i64)),
                );
                let total = genfun::partition_series(arg)
                    .coeff(arg)
                    .to_i64()
                    .expect("partition count fits in i64 at these arguments");
                let rhs = QSeries::from_terms((0..modulus).map(|k| (k, total)));
                Ok((lhs, rhs))
            });
        }
    };
    table("1.4", true, 5, 5, 4, 6, v);
    table("1.5", true, 7, 7, 5, 4, v);
    table("1.7", false, 5, 5, 4, 6, v);
    table("1.8", false, 7, 7, 5, 4, v);
    table("1.9", false, 11, 11, 6, 2, v);
}

/// Rank generating functions and the pentagonal-type sums.
fn pentagonal_checks(v: &mut Vec<IdentityCheck>) {
    for m in -5..=5 {
        add(v, "1.11", &[("m", m)], 40, TS, true, move |t| {
            let lhs = census(Family::RankEquals { m }, t)?;
            let rhs = closed_form(Family::RankEquals { m }, t, "1.11")?;
            Ok((lhs, rhs))
        });
    }
    add(v, "1.14", &[], 100, TS, true, |t| {
        let theta = bilateral(pent, |j| if j % 2 == 0 { 1 } else { -1 }, t);
        Ok((genfun::partition_series(t).mul(&theta), QSeries::one()))
    });
    for m in -3..=3 {
        add(v, "1.17", &[("m", m)], 30, TS, true, move |t| {
            let lhs = census(Family::RankEquals { m }, t)?;
            let rhs = census(Family::RankAtLeast { m }, t)?
                .sub(&census(Family::RankAtLeast { m: m + 1 }, t)?);
            Ok((lhs, rhs))
        });
    }
    for m in -3..=4 {
        add(v, "1.18", &[("m", m)], 30, TS, true, move |t| {
            let lhs = census(Family::RankAtLeast { m }, t)?
                .add(&census(Family::RankAtLeast { m: 1 - m }, t)?)
                .add(&QSeries::one());
            Ok((lhs, genfun::partition_series(t)))
        });
    }
    for m in 0..=5 {
        add(v, "1.19", &[("m", m)], 30, TS, true, move |t| {
            let lhs = census(Family::RankAtLeast { m }, t)?;
            let rhs = shifted(
                &census(Family::RankAtLeast { m: -2 - m }, t)?.add(&QSeries::one()),
                m + 1,
            );
            Ok((lhs, rhs))
        });
        add(v, "1.24", &[("m", m)], 30, TS, true, move |t| {
            let lhs = census(Family::RankAtLeast { m }, t)?
                .add(&shifted(&census(Family::RankAtLeast { m: m + 3 }, t)?, m + 1));
            Ok((lhs, shifted(&genfun::partition_series(t), m + 1)))
        });
        add(v, "1.25", &[("m", m)], 40, TS, true, move |t| {
            let lhs = census(Family::RankAtLeast { m }, t)?;
            let rhs = closed_form(Family::RankAtLeast { m }, t, "1.25")?;
            Ok((lhs, rhs))
        });
        add(v, "1.26", &[("m", m)], 30, TS, true, move |t| {
            let lhs = census(Family::RankEquals { m }, t)?;
            let rhs = census(Family::RankEquals { m: -m }, t)?;
            Ok((lhs, rhs))
        });
    }
    for l in 0..=12 {
        add(v, "1.27", &[("l", l)], l * l + 2, EP, true, move |_| {
            let mut rhs = QSeries::zero();
            for j in -(l + 2)..=(l + 2) {
                let b = bracket(2 * l, l + (3 * j).div_euclid(2));
                let signed = if j % 2 == 0 { b } else { b.neg() };
                rhs = rhs.add(&signed.times_monomial(QMonomial::plus(pent(j))));
            }
            Ok((QSeries::one(), rhs))
        });
        add(v, "1.28", &[("l", l)], l * l + 2, EP, true, move |_| {
            let mut rhs = QSeries::zero();
            for j in -(l + 2)..=(l + 2) {
                let b = bracket(2 * l - j, l + j);
                let signed = if j % 2 == 0 { b } else { b.neg() };
                rhs = rhs.add(&signed.times_monomial(QMonomial::plus(j * (3 * j + 1) / 2)));
            }
            Ok((QSeries::one(), rhs))
        });
    }
    for n in 1..=6i64 {
        for sigma in -1..=1 {
            for l in 0..=12 {
                add(
                    v,
                    "1.30",
                    &[("n", n), ("sigma", sigma), ("l", l)],
                    l * l + 2,
                    EP,
                    true,
                    move |_| {
                        let lhs = pentagonal_sum_general(n as u64, sigma, l as u64);
                        let rhs = if sigma == -1 { QSeries::zero() } else { QSeries::one() };
                        Ok((lhs, rhs))
                    },
                );
            }
        }
    }
    add(v, "1.34", &[], 100, TS, true, |t| {
        let lhs = poch2_inf(QMonomial::plus(2), t)
            .mul(&poch2_inf(QMonomial::plus(1), t).invert()?);
        let rhs = one_sided(0, triangular, |_| 1, t);
        Ok((lhs, rhs))
    });
}

/// Largest-part-bounded rank families: recurrences, binomial closed forms,
/// and the rewrite engine that produces them.
fn bounded_rank_checks(v: &mut Vec<IdentityCheck>) {
    let q = |m: i64, l: i64| Family::RankAtLeastBounded { m, l };
    let p = |m: i64, l: i64| Family::RankEqualsBounded { m, l };
    let window = |m: i64, l: i64| (l * (l - m)).max(l).max(0) + 2;

    for m in 0..=3 {
        for l in 1..=8 {
            let t = window(m, l);
            add(v, "2.2", &[("m", m), ("l", l)], t, EP, true, move |t| {
                let lhs = census(q(m, l), t)?.sub(&census(q(m, l - 1), t)?);
                let rhs = shifted(&bracket(2 * l - m - 1, l), l);
                Ok((lhs, rhs))
            });
        }
        for l in (m + 1)..=8 {
            let t = window(m, l);
            add(v, "2.3", &[("m", m), ("l", l)], t, EP, true, move |t| {
                let lhs = census(q(m, l), t)?
                    .add(&census(q(1 - m, l - m), t)?)
                    .add(&QSeries::one());
                Ok((lhs, bracket(2 * l - m, l)))
            });
            add(v, "2.4", &[("m", m), ("l", l)], t, EP, true, move |t| {
                let lhs = census(q(m, l), t)?;
                let rhs = shifted(
                    &census(q(-2 - m, l - 1 - m), t)?.add(&QSeries::one()),
                    m + 1,
                );
                Ok((lhs, rhs))
            });
        }
        for l in 0..=8 {
            let t = ((l + 2) * (l - m - 1) + m + 1).max(l * (l - m)).max(0) + 2;
            add(v, "2.5", &[("m", m), ("l", l)], t, EP, true, move |t| {
                let lhs = census(q(m, l), t)?
                    .add(&shifted(&census(q(m + 3, l + 2), t)?, m + 1));
                let rhs = shifted(&bracket(2 * l - m + 1, l + 2), m + 1);
                Ok((lhs, rhs))
            });
            let t = window(m, l);
            add(v, "2.7", &[("m", m), ("l", l)], t, EP, true, move |t| {
                let lhs = census(q(m, l), t)?
                    .add(&shifted(&census(q(m + 3, l + 1), t)?, m + 1));
                let rhs = shifted(&bracket(2 * l - m, l + 1), m + 1);
                Ok((lhs, rhs))
            });
            for (id, key) in [("2.8", "2.8"), ("2.9", "2.9"), ("2.10", "2.10"), ("2.11", "2.11")] {
                add(v, id, &[("m", m), ("l", l)], t, EP, true, move |t| {
                    let lhs = census(q(m, l), t)?;
                    let rhs = closed_form(q(m, l), t, key)?;
                    Ok((lhs, rhs))
                });
            }
        }
        for l in 0..=10 {
            let t = window(m, l);
            let words: [(&'static str, &'static str, Vec<RewriteStep>); 4] = [
                ("2.12", "2.8", vec![RewriteStep::RaiseTwo]),
                ("2.13", "2.9", vec![RewriteStep::RaiseOne]),
                ("2.14", "2.10", vec![RewriteStep::RaiseTwo, RewriteStep::RaiseOne]),
                ("2.15", "2.11", vec![RewriteStep::RaiseOne, RewriteStep::RaiseTwo]),
            ];
            for (id, key, word) in words {
                add(v, id, &[("m", m), ("l", l)], t, EP, true, move |t| {
                    let lhs = genfun::iterate_qml(&word, m, l)?;
                    let rhs = closed_form(q(m, l), t, key)?;
                    Ok((lhs, rhs))
                });
            }
        }
    }
    // Corrected two-parameter recurrence for the box generating function.
    for n in 0..=6 {
        for m in 0..=6 {
            if (n, m) == (0, 0) {
                continue;
            }
            add(v, "2.6", &[("n", n), ("m", m)], n * m + 2, EP, true, move |_| {
                let lhs = qbinom(n, m);
                let rhs = shifted(&qbinom(n, m - 1), n).add(&qbinom(n - 1, m));
                Ok((lhs, rhs))
            });
        }
    }
    for l in 0..=8 {
        let t = l * l + 2;
        add(v, "2.16", &[("l", l)], t, EP, true, move |t| {
            let lhs = census(q(0, l), t)?
                .add(&census(q(1, l), t)?)
                .add(&QSeries::one());
            Ok((lhs, bracket(2 * l, l)))
        });
    }
    for l in 0..=6 {
        for a in 0..=l {
            add(v, "2.17", &[("l", l), ("a", a)], l * l + 2, EP, true, move |_| {
                Ok((bracket(2 * l, l + a), bracket(2 * l, l - a)))
            });
        }
    }
    // Period-n rewrite words against their summed shapes, and both against
    // the census.
    for n in 1..=4i64 {
        let m_lo = if n == 1 { 0 } else { -1 };
        for m in m_lo..=3 {
            for l in 0..=10 {
                let t = window(m, l);
                add(v, "2.18", &[("n", n), ("m", m), ("l", l)], t, EP, true, move |_| {
                    let mut word = vec![RewriteStep::RaiseOne; (n - 1) as usize];
                    word.push(RewriteStep::RaiseTwo);
                    let lhs = genfun::iterate_qml(&word, m, l)?.add(&indicator(m == -1));
                    Ok((lhs, genfun::periodic_sum_ones_then_two(n as u64, m, l)))
                });
            }
        }
        for m in 0..=3 {
            for l in 0..=10 {
                let t = window(m, l);
                add(v, "2.19", &[("n", n), ("m", m), ("l", l)], t, EP, true, move |_| {
                    let mut word = vec![RewriteStep::RaiseTwo; (n - 1) as usize];
                    word.push(RewriteStep::RaiseOne);
                    let lhs = genfun::iterate_qml(&word, m, l)?;
                    Ok((lhs, genfun::periodic_sum_twos_then_one(n as u64, m, l)))
                });
            }
        }
        for m in 0..=2 {
            for l in 0..=8 {
                let t = window(m, l);
                add(v, "2.20", &[("n", n), ("m", m), ("l", l)], t, EP, true, move |t| {
                    let lhs = census(q(m, l), t)?;
                    Ok((lhs, genfun::periodic_sum_ones_then_two(n as u64, m, l)))
                });
                add(v, "2.21", &[("n", n), ("m", m), ("l", l)], t, EP, true, move |t| {
                    let lhs = census(q(m, l), t)?;
                    Ok((lhs, genfun::periodic_sum_twos_then_one(n as u64, m, l)))
                });
            }
        }
        for m in -1..=3 {
            for l in 0..=6 {
                let t = window(m, l);
                add(v, "2.23", &[("n", n), ("m", m), ("l", l)], t, EP, true, move |t| {
                    let lhs = indicator(m == -1).add(&census(q(m, l), t)?);
                    Ok((lhs, genfun::periodic_sum_ones_then_two(n as u64, m, l)))
                });
            }
        }
    }
    for m in -1..=3 {
        for l in 0..=8 {
            let t = window(m, l);
            add(v, "2.22", &[("m", m), ("l", l)], t, EP, true, move |t| {
                let lhs = indicator(m == -1)
                    .add(&census(q(m, l), t)?)
                    .add(&shifted(&census(q(m + 3, l + 1), t)?, m + 1));
                let rhs = shifted(&bracket(2 * l - m, l + 1), m + 1);
                Ok((lhs, rhs))
            });
        }
    }
    for l in 1..=8 {
        let t = l * (l + 1) + 2;
        add(v, "2.24", &[("l", l)], t, EP, true, move |t| {
            let lhs = QSeries::one()
                .add(&census(q(-1, l - 1), t)?)
                .add(&census(q(2, l), t)?);
            Ok((lhs, bracket(2 * l - 1, l - 1)))
        });
    }
    for m in 0..=3 {
        for l in 0..=8 {
            let t = window(m, l);
            add(v, "2.26", &[("m", m), ("l", l)], t, EP, true, move |t| {
                let lhs = census(p(m, l), t)?;
                let rhs = census(q(m, l), t)?.sub(&census(q(m + 1, l), t)?);
                Ok((lhs, rhs))
            });
            add(v, "2.27", &[("m", m), ("l", l)], t, EP, true, move |t| {
                let lhs = census(p(m, l), t)?;
                Ok((lhs, closed_form(p(m, l), t, "2.27")?))
            });
        }
    }
    for m in 0..=4 {
        for l in 0..=8 {
            let t = l * (l + m) + 2;
            add(v, "2.28", &[("m", m), ("l", l)], t, EP, true, move |t| {
                let lhs = census(p(-m, l), t)?;
                let rhs = census(p(m, l + m), t)?;
                Ok((lhs, rhs))
            });
        }
    }
    for m in -4i64..=4 {
        for l in 0..=8 {
            let t = l * (l + m.abs()) + 2;
            add(v, "2.29", &[("m", m), ("l", l)], t, EP, true, move |t| {
                let lhs = census(p(m, l), t)?;
                Ok((lhs, closed_form(p(m, l), t, "2.29")?))
            });
        }
    }
}

/// Rank-set membership and crank families.
fn rank_set_crank_checks(v: &mut Vec<IdentityCheck>) {
    let g = |k: i64| Family::RankSetMember { k };
    let c = |k: i64| Family::CrankAtMost { k };
    let ch = |k: i64| Family::CrankEquals { k };

    for k in -6..=6 {
        add(v, "3.1", &[("k", k)], 30, TS, true, move |t| {
            Ok((census(ch(k), t)?, closed_form(ch(k), t, "3.1")?))
        });
        add(v, "3.5", &[("k", k)], 30, TS, true, move |t| {
            let lhs = census(c(k), t)?;
            let rhs = census(g(k), t)?.add(&indicator(k == 0).times_monomial(QMonomial::plus(1)));
            Ok((lhs, rhs))
        });
    }
    for k in -3..=4 {
        add(v, "3.8", &[("k", k)], 30, TS, true, move |t| {
            let lhs = census(g(-k), t)?.add(&census(g(k - 1), t)?);
            Ok((lhs, genfun::partition_series(t)))
        });
    }
    for k in -1..=5 {
        add(v, "3.9", &[("k", k)], 30, TS, true, move |t| {
            let lhs = census(g(k), t)?.add(&shifted(&census(g(k + 1), t)?, k + 1));
            Ok((lhs, genfun::partition_series(t)))
        });
        add(v, "3.10", &[("k", k)], 30, TS, true, move |t| {
            Ok((census(g(k), t)?, closed_form(g(k), t, "3.10")?))
        });
    }
    for k in -4..=4 {
        add(v, "3.11", &[("k", k)], 30, TS, true, move |t| {
            let lhs = census(ch(k), t)?;
            let rhs = census(c(k), t)?.sub(&census(c(k - 1), t)?);
            Ok((lhs, rhs))
        });
    }
    for k in 0..=5 {
        add(v, "3.12", &[("k", k)], 30, TS, true, move |t| {
            let lhs = census(ch(k), t)?;
            let mut theta = QSeries::zero_to(t);
            let mut j = 1;
            while triangular(j - 1) + k * j <= t {
                let head = QSeries::monomial(alt(j), triangular(j - 1) + k * j);
                let tail = QSeries::monomial(alt(j), triangular(j) + k * j);
                theta = theta.add(&head).sub(&tail);
                j += 1;
            }
            let corr = match k {
                0 => mono(1),
                1 => mono(1).neg(),
                _ => QSeries::zero(),
            };
            Ok((lhs, genfun::partition_series(t).mul(&theta).add(&corr)))
        });
        add(v, "3.13", &[("k", k)], 30, TS, true, move |t| {
            let lhs = census(g(-k), t)?.sub(&census(g(-k - 1), t)?);
            let rhs = census(g(k), t)?.sub(&census(g(k - 1), t)?);
            Ok((lhs, rhs))
        });
        add(v, "3.15", &[("k", k)], 30, TS, true, move |t| {
            let lhs = census(ch(k), t)?;
            let corr = match k {
                0 => mono(1),
                1 => mono(1).neg(),
                _ => QSeries::zero(),
            };
            let rhs = census(g(k), t)?.sub(&census(g(k - 1), t)?).add(&corr);
            Ok((lhs, rhs))
        });
        add(v, "3.16", &[("k", k)], 30, TS, true, move |t| {
            let lhs = census(ch(-k), t)?;
            let rhs = census(g(k), t)?
                .sub(&census(g(k - 1), t)?)
                .add(&indicator(k == 0).times_monomial(QMonomial::plus(1)));
            Ok((lhs, rhs))
        });
    }
    for k in 0..=6 {
        add(v, "3.17", &[("k", k)], 30, TS, true, move |t| {
            let lhs = census(ch(-k), t)?;
            let rhs = census(ch(k), t)?
                .add(&indicator(k == 1).times_monomial(QMonomial::plus(1)));
            Ok((lhs, rhs))
        });
    }
    for k in 0..=5 {
        add(v, "3.18", &[("k", k)], 16, TS, true, move |t| {
            let lhs = census(g(k), t)?;
            let rhs = genfun::partition_series(t + k)
                .sub(&census(g(k - 1), t + k)?)
                .times_monomial(QMonomial::plus(-k));
            Ok((lhs, rhs))
        });
    }
    add(v, "3.19", &[], 16, TS, true, move |t| {
        let lhs = census(c(0), t)?;
        Ok((lhs, census(g(0), t)?.add(&mono(1))))
    });
}

/// The alternating numerator sum shared by several bounded-crank forms:
/// `Σ_{j=1}^{l} (−1)^{j−1} q^{T(j−1)+kj} (1−q^j) / (q)_{l−j}`.
fn crank_equal_bounded_sum(k: i64, l: i64, t: i64) -> Result<QSeries> {
    let mut acc = QSeries::zero_to(t);
    for j in 1..=l {
        let base = triangular(j - 1) + k * j;
        if base > t {
            break;
        }
        let piece = mono(base).sub(&mono(base + j)).mul(&inv_qfac(l - j, t)?);
        acc = if alt(j) > 0 { acc.add(&piece) } else { acc.sub(&piece) };
    }
    Ok(acc)
}

/// Largest-part-bounded crank and rank-set families, and the transformation
/// chain rewriting the alternating numerator sum into positive-term shapes.
fn bounded_crank_checks(v: &mut Vec<IdentityCheck>) {
    let g = |k: i64, l: i64| Family::RankSetMemberBounded { k, l };
    let c = |k: i64, l: i64| Family::CrankAtMostBounded { k, l };
    let ch = |k: i64, l: i64| Family::CrankEqualsBounded { k, l };

    for l in 1..=6 {
        for k in 0..=l {
            add(v, "4.1", &[("l", l), ("k", k)], 30, TS, true, move |t| {
                Ok((census(c(k, l), t)?, closed_form(c(k, l), t, "4.1")?))
            });
            add(v, "4.2", &[("l", l), ("k", k)], 30, TS, true, move |t| {
                let lhs = census(g(k, l), t)?
                    .add(&shifted(&census(g(k + 1, l - 1), t)?, k + 1));
                Ok((lhs, inv_qfac(l, t)?))
            });
            add(v, "4.3", &[("l", l), ("k", k)], 30, TS, true, move |t| {
                Ok((census(g(k, l), t)?, closed_form(g(k, l), t, "4.3")?))
            });
        }
        for k in 1..=l {
            add(v, "4.8", &[("l", l), ("k", k)], 30, TS, true, move |t| {
                let lhs = census(ch(k, l), t)?;
                let rhs = census(c(k, l), t)?.sub(&census(c(k - 1, l), t)?);
                Ok((lhs, rhs))
            });
            add(v, "4.9", &[("l", l), ("k", k)], 30, TS, true, move |t| {
                Ok((census(ch(k, l), t)?, closed_form(ch(k, l), t, "4.9")?))
            });
            add(v, "4.12", &[("l", l), ("k", k)], 30, TS, true, move |t| {
                Ok((census(ch(k, l), t)?, closed_form(ch(k, l), t, "4.12")?))
            });
        }
    }
    // Positive-term rewrites of the alternating numerator sum.
    let rhs_positive = |k: i64, l: i64, t: i64, exponent: fn(i64, i64) -> i64| -> Result<QSeries> {
        let mut acc = QSeries::zero_to(t);
        for mu in 0..=(l - 1) {
            let base = exponent(mu, k);
            if base > t {
                break;
            }
            let term = mono(base)
                .mul(&inv_qfac(mu, t)?)
                .mul(&bracket(l - 1 + k, mu + k));
            acc = acc.add(&term);
        }
        Ok(acc.mul(&one_minus_q()))
    };
    for l in 1..=8 {
        for k in 1..=l {
            add(v, "4.13", &[("l", l), ("k", k)], 60, TS, true, move |t| {
                let lhs = crank_equal_bounded_sum(k, l, t)?;
                let rhs = rhs_positive(k, l, t, |mu, k| (mu + 1) * (mu + k) + mu)?;
                Ok((lhs, rhs))
            });
            add(v, "4.24", &[("l", l), ("k", k)], 60, TS, true, move |t| {
                let lhs = crank_equal_bounded_sum(k, l, t)?;
                let rhs = rhs_positive(k, l, t, |i, k| i * i + (2 + k) * i + k)?;
                Ok((lhs, rhs))
            });
            // Termwise bridge: the i-th term of the transformed sum equals
            // the i-th positive term, after clearing denominators.
            for i in 0..=(l - 1) {
                add(
                    v,
                    "4.13@term",
                    &[("l", l), ("k", k), ("i", i)],
                    l * (l + k),
                    EP,
                    true,
                    move |_| {
                        let lhs = poch1(1 + k + i, l - 1 - i).mul(&poch1(1 - l, i));
                        let lhs = if i % 2 == 0 { lhs } else { lhs.neg() };
                        let rhs = QSeries::monomial(1, triangular(i) - l * i)
                            .mul(&bracket(l - 1 + k, i + k))
                            .mul(&q_factorial(l - 1));
                        Ok((lhs, rhs))
                    },
                );
            }
        }
    }
    // Exploratory probe outside the asserted domain: the k = 0 boundary.
    for l in 1..=6 {
        add(v, "4.13@k0", &[("l", l)], 40, TS, false, move |t| {
            let lhs = crank_equal_bounded_sum(0, l, t)?;
            let rhs = rhs_positive(0, l, t, |mu, k| (mu + 1) * (mu + k) + mu)?;
            Ok((lhs, rhs))
        });
    }
    for l in 1..=6 {
        for k in 1..=4.min(l) {
            add(v, "4.16", &[("l", l), ("k", k)], 40, TS, true, move |t| {
                let tt = t + l * l;
                let lhs = crank_equal_bounded_sum(k, l, t)?;
                let phi = phi21_partial(
                    QMonomial::plus(2),
                    QMonomial::plus(1 - l),
                    LowerParam::LimitZero,
                    QMonomial::plus(l + k),
                    (l + 2) as u64,
                    tt,
                )?;
                let rhs = mono(k)
                    .mul(&one_minus_q())
                    .mul(&inv_qfac(l - 1, tt)?)
                    .mul(&phi)
                    .truncated(t);
                Ok((lhs, rhs))
            });
            add(v, "4.14", &[("l", l), ("k", k)], 40, TS, true, move |t| {
                let tt = t + l * l;
                let lhs = crank_equal_bounded_sum(k, l, t)?;
                let pre = mono(k)
                    .mul(&one_minus_q())
                    .mul(&inv_qfac(l - 1, tt)?)
                    .mul(&poch1(1 + k, l - 1));
                let mut sum = QSeries::zero_to(tt);
                for i in 0..=(l - 1) {
                    let term = poch1(1 - l, i)
                        .mul(&inv_qfac(i, tt)?)
                        .mul(&poch1(1 + k, i).invert_to(tt)?)
                        .mul(&mono(triangular(i - 1) + (l + k + 2) * i));
                    sum = if i % 2 == 0 { sum.add(&term) } else { sum.sub(&term) };
                }
                Ok((lhs, pre.mul(&sum).truncated(t)))
            });
        }
    }
}

/// The two-sided double sum for the distinct-odd class with free parameter
/// specialized to `q^{2r}`: quotient-of-products shape.
fn m2_double_sum_products(r: i64, t: i64) -> Result<QSeries> {
    let mut acc = QSeries::zero_to(t);
    let mut j = 0;
    while j * j <= t {
        let mut i = 0;
        while j * j + 2 * i <= t {
            let term = mono(j * j + 2 * i)
                .mul(&poch2(QMonomial::plus(2 * r + 2 * i + 2), j))
                .mul(&poch2(QMonomial::plus(2 * r + 2 * i + 2 * j), i))
                .mul(&inv_qfac2(j, t)?)
                .mul(&inv_qfac2(i, t)?);
            acc = acc.add(&term);
            i += 1;
        }
        j += 1;
    }
    Ok(acc)
}

/// Alternating theta factor `Σ_{j≥0} (−1)^j q^{2j²+j+2rj}` through `q^t`.
fn m2_theta(r: i64, t: i64) -> QSeries {
    one_sided(0, |j| 2 * j * j + j + 2 * r * j, |j| if j % 2 == 0 { 1 } else { -1 }, t)
}

/// Distinct-odd-class families and their 2-modular rank statistics.
fn m2_rank_checks(v: &mut Vec<IdentityCheck>) {
    let ge = |r: i64| Family::M2RankAtLeast { r };
    let le = |r: i64| Family::M2RankAtMost { r };

    for r in -2..=3 {
        add(v, "5.3", &[("r", r)], 30, TS, true, move |t| {
            let lhs = census(ge(r), t)?
                .add(&census(ge(1 - r), t)?)
                .add(&QSeries::one());
            Ok((lhs, census(Family::DistinctOddClass, t)?))
        });
    }
    for r in 0..=4 {
        add(v, "5.4", &[("r", r)], 30, TS, true, move |t| {
            let lhs = census(ge(r), t)?;
            let rhs = shifted(&census(ge(-1 - r), t)?.add(&QSeries::one()), 2 * r + 1);
            Ok((lhs, rhs))
        });
        add(v, "5.7", &[("r", r)], 30, TS, true, move |t| {
            let lhs = census(ge(r), t)?.add(&shifted(&census(ge(r + 2), t)?, 2 * r + 1));
            let rhs = shifted(&census(Family::DistinctOddClass, t)?, 2 * r + 1);
            Ok((lhs, rhs))
        });
    }
    for r in 0..=5 {
        add(v, "5.8", &[("r", r)], 30, TS, true, move |t| {
            Ok((census(ge(r), t)?, closed_form(ge(r), t, "5.8")?))
        });
        add(v, "5.13", &[("r", r)], 30, TS, true, move |t| {
            Ok((census(le(r), t)?, closed_form(le(r), t, "5.13")?))
        });
        add(v, "5.14", &[("r", r)], 30, TS, true, move |t| {
            Ok((census(le(r), t)?, closed_form(le(r), t, "5.14")?))
        });
    }
    add(v, "5.10", &[], 100, TS, true, |t| {
        let theta = bilateral(|j| j * (2 * j + 1), |j| if j % 2 == 0 { 1 } else { -1 }, t);
        Ok((QSeries::one(), genfun::distinct_odd_series(t).mul(&theta)))
    });
    add(v, "5.11", &[], 100, TS, true, |t| {
        let lhs = poch2_inf(QMonomial::plus(2), t)
            .mul(&poch2_inf(QMonomial::minus(1), t).invert()?);
        let rhs = bilateral(|j| j * (2 * j + 1), |j| if j % 2 == 0 { 1 } else { -1 }, t);
        Ok((lhs, rhs))
    });
    add(v, "5.12", &[], 100, TS, true, |t| {
        let lhs = poch2_inf(QMonomial::plus(2), t)
            .mul(&poch2_inf(QMonomial::plus(1), t).invert()?);
        let rhs = bilateral(|j| j * (2 * j + 1), |_| 1, t);
        Ok((lhs, rhs))
    });
    for r in 0..=4 {
        add(v, "5.15", &[("r", r)], 40, TS, true, move |t| {
            let lhs = closed_form(le(r), t, "5.14")?;
            Ok((lhs, genfun::distinct_odd_series(t).mul(&m2_theta(r, t))))
        });
        add(v, "5.17", &[("r", r)], 40, TS, true, move |t| {
            let lhs = m2_double_sum_products(r, t)?;
            Ok((lhs, genfun::distinct_odd_series(t).mul(&m2_theta(r, t))))
        });
    }
    let mut grid: Vec<(i64, i64, i64)> = Vec::new();
    for s in 1..=3 {
        for u in 1..=3 {
            grid.push((s, u, 1));
            grid.push((s, u, -1));
        }
    }
    grid.push((4, 1, 1));
    grid.push((5, 1, 1));
    for (s, u, sign) in grid {
        add(
            v,
            "5.18",
            &[("s", s), ("u", u), ("sign", sign)],
            40,
            TS,
            true,
            move |t| {
                // (−aq; q²)_n with a = sign·q^u.
                let neg_aq = if sign > 0 { QMonomial::minus(u + 1) } else { QMonomial::plus(u + 1) };
                let mut lhs = QSeries::zero_to(t);
                let mut n = 0;
                while (s + 2) * n <= t {
                    let term = mono((s + 2) * n)
                        .mul(&poch2(neg_aq, n))
                        .mul(&inv_qfac2(n, t)?);
                    lhs = lhs.add(&term);
                    n += 1;
                }
                let neg_atq3 =
                    if sign > 0 { QMonomial::minus(u + s + 3) } else { QMonomial::plus(u + s + 3) };
                let rhs = poch2_inf(neg_atq3, t)
                    .mul(&poch2_inf(QMonomial::plus(s + 2), t).invert()?);
                Ok((lhs, rhs))
            },
        );
    }
}

/// Iterated-Durfee-square rank families.
fn durfee_rank_checks(v: &mut Vec<IdentityCheck>) {
    let fg = |k: i64, m: i64| Family::KRankAtLeast { order: k as u64, m };
    let fg_closed = |k: i64, m: i64, t: i64| -> QSeries {
        let theta = one_sided(1, |j| j * ((2 * k - 1) * j - 1) / 2 + m * j, alt, t);
        genfun::partition_series(t).mul(&theta)
    };
    for k in 2..=4 {
        for m in 0..=3 {
            add(v, "6.2", &[("k", k), ("m", m)], 25, TS, true, move |t| {
                Ok((census(fg(k, m), t)?, closed_form(fg(k, m), t, "6.2")?))
            });
            add(v, "6.3", &[("k", k), ("m", m)], 60, TS, true, move |t| {
                let lhs = fg_closed(k, m, t)
                    .add(&shifted(&fg_closed(k, 2 * k - 1 + m, t), k + m - 1));
                let rhs = shifted(&genfun::partition_series(t), k + m - 1);
                Ok((lhs, rhs))
            });
        }
    }
    for k in 2..=3 {
        for m in 0..=2 {
            add(v, "6.3@census", &[("k", k), ("m", m)], 20, TS, true, move |t| {
                let lhs = census(fg(k, m), t)?
                    .add(&shifted(&census(fg(k, 2 * k - 1 + m), t)?, k + m - 1));
                let rhs = shifted(&genfun::partition_series(t), k + m - 1);
                Ok((lhs, rhs))
            });
        }
    }
}

/// The crank-negating involution's fixed points and the related products.
fn pseudo_conjugation_checks(v: &mut Vec<IdentityCheck>) {
    for k in 0..=6 {
        add(v, "A.1", &[("k", k)], 18, TS, true, move |t| {
            let lhs = census(Family::CrankEquals { k: -k }, t)?;
            let rhs = census(Family::CrankEquals { k }, t)?
                .add(&indicator(k == 1).times_monomial(QMonomial::plus(1)));
            Ok((lhs, rhs))
        });
    }
    add(v, "A.2", &[], 30, TS, true, |t| {
        let lhs = census(Family::SelfPseudoConjugate, t)?;
        Ok((lhs, closed_form(Family::SelfPseudoConjugate, t, "A.2")?))
    });
    for s in 0..=4 {
        add(v, "A.3", &[("s", s)], 40, TS, true, move |t| {
            let mut lhs = QSeries::zero_to(t);
            let mut j = 0;
            while j * (j + 1) + s * j <= t {
                lhs = lhs.add(&mono(j * (j + 1) + s * j).mul(&inv_qfac2(j, t)?));
                j += 1;
            }
            Ok((lhs, poch2_inf(QMonomial::minus(s + 2), t)))
        });
    }
    add(v, "A.4", &[], 30, TS, true, |t| {
        let lhs = census(Family::SelfPseudoConjugate, t)?;
        Ok((lhs, closed_form(Family::SelfPseudoConjugate, t, "A.4")?))
    });
    add(v, "A.4@product", &[], 60, TS, true, |t| {
        let lhs = QSeries::from_terms([(0, 1), (1, 1)]).mul(&poch2_inf(QMonomial::minus(3), t));
        Ok((lhs, poch2_inf(QMonomial::minus(1), t)))
    });
}

/// Product-expansion chain rewriting the free-parameter double sum into a
/// single theta factor, step by step.
fn product_expansion_checks(v: &mut Vec<IdentityCheck>) {
    // Finite binomial expansion of a finite product.
    for l in 0..=8 {
        for s in 0..=3 {
            add(v, "B.1", &[("l", l), ("s", s)], 2 * l * l + 2, EP, true, move |_| {
                let mut lhs = QSeries::zero();
                for n in 0..=l {
                    lhs = lhs.add(&mono(n * n - n + s * n).mul(&bracket_base(l, n, 2)));
                }
                Ok((lhs, poch2(QMonomial::minus(s), l)))
            });
        }
    }
    for s in 1..=4 {
        add(v, "B.3", &[("s", s)], 40, TS, true, move |t| {
            let mut lhs = QSeries::zero_to(t);
            let mut n = 0;
            while s * n <= t {
                lhs = lhs.add(&mono(s * n).mul(&inv_qfac(n, t)?));
                n += 1;
            }
            Ok((lhs, poch1_inf(QMonomial::plus(s), t).invert()?))
        });
    }

    let quad_sum = |r: i64, t: i64| -> Result<QSeries> {
        let mut acc = QSeries::zero_to(t);
        let mut s = 0;
        while 3 * s * s + s + 2 * r * s <= t {
            let mut u = 0;
            loop {
                let base_u = 2 * u * u + u + 3 * s * s + s + 4 * s * u + 2 * r * (s + u);
                if base_u > t {
                    break;
                }
                let mut j = 0;
                loop {
                    let base_j = base_u + j * j + 2 * j * u + 2 * s * j;
                    if base_j > t {
                        break;
                    }
                    let mut i = 0;
                    loop {
                        let base_i = base_j + 2 * i * (1 + s + u);
                        if base_i > t {
                            break;
                        }
                        let sign = if (s + u) % 2 == 0 { 1 } else { -1 };
                        let term = QSeries::monomial(sign, base_i)
                            .mul(&inv_qfac2(i, t)?)
                            .mul(&inv_qfac2(j, t)?)
                            .mul(&inv_qfac2(s, t)?)
                            .mul(&inv_qfac2(u, t)?);
                        acc = acc.add(&term);
                        i += 1;
                    }
                    j += 1;
                }
                u += 1;
            }
            s += 1;
        }
        Ok(acc)
    };
    let b4_sum = |r: i64, t: i64| -> Result<QSeries> {
        let mut acc = QSeries::zero_to(t);
        let mut s = 0;
        while 3 * s * s + s + 2 * r * s <= t {
            let mut u = 0;
            loop {
                let base = 2 * u * u + 4 * s * u + 3 * s * s + s + u + 2 * r * (s + u);
                if base > t {
                    break;
                }
                let sign = if (s + u) % 2 == 0 { 1 } else { -1 };
                let ratio = poch2_inf(QMonomial::minus(1 + 2 * s + 2 * u), t)
                    .mul(&poch2_inf(QMonomial::plus(2 + 2 * s + 2 * u), t).invert()?);
                let term = QSeries::monomial(sign, base)
                    .mul(&inv_qfac2(s, t)?)
                    .mul(&inv_qfac2(u, t)?)
                    .mul(&ratio);
                acc = acc.add(&term);
                u += 1;
            }
            s += 1;
        }
        Ok(acc)
    };
    let b6_sum = |r: i64, t: i64| -> Result<QSeries> {
        let mut acc = QSeries::zero_to(t);
        let mut n = 0;
        while 2 * n * n + n + 2 * r * n <= t {
            let mut inner = QSeries::zero();
            for s in 0..=n {
                inner = inner.add(&mono(s * s).mul(&bracket_base(n, s, 2)));
            }
            let sign = if n % 2 == 0 { 1 } else { -1 };
            let term = QSeries::monomial(sign, 2 * n * n + n + 2 * r * n)
                .mul(&poch2(QMonomial::minus(1), n).invert_to(t)?)
                .mul(&inner);
            acc = acc.add(&term);
            n += 1;
        }
        Ok(genfun::distinct_odd_series(t).mul(&acc))
    };

    for r in 0..=3 {
        add(v, "B.2", &[("r", r)], 40, TS, true, move |t| {
            Ok((m2_double_sum_products(r, t)?, quad_sum(r, t)?))
        });
        add(v, "B.4", &[("r", r)], 40, TS, true, move |t| {
            Ok((quad_sum(r, t)?, b4_sum(r, t)?))
        });
        add(v, "B.6", &[("r", r)], 40, TS, true, move |t| {
            Ok((b4_sum(r, t)?, b6_sum(r, t)?))
        });
        add(v, "B.7", &[("r", r)], 40, TS, true, move |t| {
            let rhs = genfun::distinct_odd_series(t).mul(&m2_theta(r, t));
            Ok((b6_sum(r, t)?, rhs))
        });
    }
}

/// Terminating cubic-base sum: exact Laurent-polynomial evaluation.
fn cubic_checks(v: &mut Vec<IdentityCheck>) {
    for n in 0..=30 {
        add(v, "N.2", &[("n", n)], 0, EP, true, move |_| {
            let lhs = cubic_sum(n as u64);
            let rhs = if n % 3 == 2 {
                QSeries::zero()
            } else {
                let sign = if (n / 3) % 2 == 0 { 1 } else { -1 };
                QSeries::monomial(sign, -(n * (n - 1)) / 6)
            };
            Ok((lhs, rhs))
        });
    }
}
