//! q-hypergeometric building blocks: the `au` staircase function, finite
//! bilateral pentagonal-type bracket sums, partial 2φ1 sums at monomial
//! parameters, and a finite cubic-style sum with a closed-form evaluation.

use crate::error::{Error, Result};
use crate::series::{bracket, FactorCount, QMonomial, QSeries};

/// The triangular number `j(j+1)/2` (well-defined for negative `j` too:
/// `triangular(-1) = 0`).
pub fn triangular(j: i64) -> i64 {
    j * (j + 1) / 2
}

/// Staircase offset used by the general pentagonal-type sum: `−j` for
/// `n = 1`, `0` for `n = 2`, and `Σ_{k=1}^{n−2} ⌊(j+k)/n⌋` for `n > 2`
/// (floor division, so negative `j` works directly and satisfies
/// `au(n, −j) = −au(n, j)`).
///
/// Panics when `n = 0`.
pub fn au(n: u64, j: i64) -> i64 {
    assert!(n >= 1, "au needs a positive modulus");
    match n {
        1 => -j,
        2 => 0,
        _ => (1..=(n as i64 - 2)).map(|k| (j + k).div_euclid(n as i64)).sum(),
    }
}

/// The bilateral sum
/// `Σ_j (−1)^j q^{j(3j−1)/2 + σj} · bracket(2L + σ − au(n,j), L + σ + ⌊(n+1)j/n⌋)`
/// as an exact polynomial. Only finitely many terms are nonzero (the
/// brackets vanish once the bottom index leaves `0..=top`); `|j| ≤ 2L + 2`
/// provably covers them all. For every `n ≥ 1`, `σ ∈ {−1, 0, 1}`, `L ≥ 0`
/// the value is the constant `1 − δ_{σ,−1}`.
pub fn pentagonal_sum_general(n: u64, sigma: i64, l: u64) -> QSeries {
    assert!(n >= 1, "modulus must be positive");
    assert!((-1..=1).contains(&sigma), "sigma must be −1, 0, or 1");
    let l = l as i64;
    let mut acc = QSeries::zero();
    for j in -(2 * l + 2)..=(2 * l + 2) {
        let top = 2 * l + sigma - au(n, j);
        let bottom = l + sigma + ((n as i64 + 1) * j).div_euclid(n as i64);
        let b = bracket(top, bottom);
        if b.is_zero() {
            continue;
        }
        let sign = if j.rem_euclid(2) == 0 { 1 } else { -1 };
        let exponent = j * (3 * j - 1) / 2 + sigma * j;
        acc = acc.add(&b.times_monomial(QMonomial::plus(exponent)).scaled(sign));
    }
    acc
}

/// Lower parameter of a partial 2φ1 sum: either a monomial or the exact
/// limit in which the corresponding Pochhammer factor becomes 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LowerParam {
    Monomial(QMonomial),
    /// Replaces `(c; q)_n` by 1 in every term — the value of the limit
    /// `c → 0`, taken exactly rather than numerically.
    LimitZero,
}

/// Partial sum of the basic hypergeometric series
/// `Σ_{n≥0} (a;q)_n (b;q)_n / ((c;q)_n (q;q)_n) · z^n`,
/// over the first `n_terms` terms (starting at the empty-product term 1),
/// authoritative to exponent `trunc`.
///
/// Stops early when a numerator factor vanishes (e.g. `b = q^{1−L}`
/// terminates the series after `L` terms). Errors when a denominator
/// Pochhammer factor vanishes before the requested terms are exhausted.
pub fn phi21_partial(
    a: QMonomial,
    b: QMonomial,
    c: LowerParam,
    z: QMonomial,
    n_terms: u64,
    trunc: i64,
) -> Result<QSeries> {
    let poch = |x: QMonomial, n: u64| {
        QSeries::pochhammer(x, 1, FactorCount::Finite(n), None).expect("step 1 is positive")
    };
    let mut acc = QSeries::zero_to(trunc);
    for n in 0..n_terms {
        let mut numer = poch(a, n).mul(&poch(b, n)).mul(&z.to_series().power(n));
        if numer.is_zero() {
            break; // a vanished numerator factor kills every later term too
        }
        let mut denom = poch(QMonomial::plus(1), n);
        if let LowerParam::Monomial(c) = c {
            denom = denom.mul(&poch(c, n));
        }
        if denom.is_zero() {
            return Err(Error::VanishingDenominatorFactor { term: n as u32 });
        }
        // Invert the denominator far enough that the term is authoritative
        // to `trunc` after multiplying in the (possibly Laurent) numerator.
        let need = trunc - numer.min_exponent().expect("numer nonzero");
        let inv = denom.invert_to(need.max(denom.min_exponent().unwrap_or(0) * -2))?;
        numer = numer.mul(&inv);
        acc = acc.add(&numer.truncated(trunc));
    }
    Ok(acc)
}

/// The finite sum
/// `Σ_{k=0}^{⌊N/2⌋} (q^{−N};q)_{2k} / ((q;q)_k (q^{−N};q)_k) · q^k`
/// as an exact Laurent polynomial (every term divides exactly). Evaluates
/// to `(−1)^{⌊N/3⌋} q^{−N(N−1)/6}` when `N ≢ 2 (mod 3)` and to 0 otherwise.
pub fn cubic_sum(n_param: u64) -> QSeries {
    let a = QMonomial::plus(-(n_param as i64));
    let poch = |x: QMonomial, count: u64| {
        QSeries::pochhammer(x, 1, FactorCount::Finite(count), None).expect("step 1 is positive")
    };
    let mut acc = QSeries::zero();
    for k in 0..=n_param / 2 {
        let numer = poch(a, 2 * k);
        let denom = poch(QMonomial::plus(1), k).mul(&poch(a, k));
        // The quotient is a shifted, sign-twisted Gaussian binomial, so the
        // division is always exact.
        let term = numer
            .div_exact(&denom)
            .expect("cubic-sum term divides exactly")
            .times_monomial(QMonomial::plus(k as i64));
        acc = acc.add(&term);
    }
    acc
}

impl QSeries {
    /// `self` raised to the `n`-th power (1 for `n = 0`).
    pub fn power(&self, n: u64) -> QSeries {
        let mut acc = match self.truncation() {
            Some(t) if n > 0 => QSeries::one().truncated(t),
            _ => QSeries::one(),
        };
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn au_examples() {
        assert_eq!(au(1, 5), -5);
        for j in -7..=7 {
            assert_eq!(au(2, j), 0);
        }
        assert_eq!(au(3, 4), 1);
        assert_eq!(au(4, -3), -au(4, 3));
    }

    #[test]
    fn au_is_antisymmetric() {
        for n in 1..=8 {
            for j in 0..=20 {
                assert_eq!(au(n, -j), -au(n, j), "antisymmetry failed at n = {n}, j = {j}");
            }
        }
    }

    #[test]
    fn au_stabilizes_at_j_minus_one() {
        for j in 1..=6i64 {
            for n in (j as u64 + 1)..=(j as u64 + 6) {
                assert_eq!(au(n, j), j - 1, "stabilization failed at n = {n}, j = {j}");
            }
        }
    }

    #[test]
    fn pentagonal_sum_collapses_to_constant() {
        for n in 1..=4 {
            for sigma in -1..=1 {
                for l in 0..=8 {
                    let value = pentagonal_sum_general(n, sigma, l);
                    let expected = if sigma == -1 { QSeries::zero() } else { QSeries::one() };
                    assert_eq!(
                        value, expected,
                        "sum did not collapse at n = {n}, sigma = {sigma}, L = {l}"
                    );
                }
            }
        }
    }

    #[test]
    fn phi21_single_term_is_one() {
        let one = phi21_partial(
            QMonomial::plus(2),
            QMonomial::minus(3),
            LowerParam::Monomial(QMonomial::plus(5)),
            QMonomial::plus(1),
            1,
            20,
        )
        .unwrap();
        assert!(one.sub(&QSeries::one()).is_zero());
    }

    #[test]
    fn phi21_two_terms_match_direct_construction() {
        // 1 + (1−a)(1−b)/((1−c)(1−q)) z with a=q², b=q³, c=q⁴, z=q.
        let got = phi21_partial(
            QMonomial::plus(2),
            QMonomial::plus(3),
            LowerParam::Monomial(QMonomial::plus(4)),
            QMonomial::plus(1),
            2,
            15,
        )
        .unwrap();
        let second = QSeries::from_terms([(0, 1), (2, -1)])
            .mul(&QSeries::from_terms([(0, 1), (3, -1)]))
            .mul(
                &QSeries::from_terms([(0, 1), (4, -1)])
                    .mul(&QSeries::from_terms([(0, 1), (1, -1)]))
                    .invert_to(14)
                    .unwrap(),
            )
            .times_monomial(QMonomial::plus(1));
        let want = QSeries::one().add(&second);
        assert!(got.sub(&want).is_zero());
    }

    #[test]
    fn phi21_terminates_with_negative_exponent_upper_parameter() {
        // b = q^{1−L} kills every term from n = L on, so asking for more
        // terms changes nothing.
        let l = 4;
        let args = |terms| {
            phi21_partial(
                QMonomial::plus(2),
                QMonomial::plus(1 - l),
                LowerParam::LimitZero,
                QMonomial::plus(l + 1),
                terms,
                25,
            )
            .unwrap()
        };
        assert_eq!(args(l as u64), args(l as u64 + 5));
    }

    #[test]
    fn phi21_detects_vanishing_denominator() {
        // c = q^{−2} makes (c;q)_n contain the factor (1 − q^{−2}·q²) = 0
        // from n = 3 on.
        let r = phi21_partial(
            QMonomial::plus(5),
            QMonomial::plus(6),
            LowerParam::Monomial(QMonomial::plus(-2)),
            QMonomial::plus(1),
            4,
            20,
        );
        assert_eq!(r, Err(Error::VanishingDenominatorFactor { term: 3 }));
    }

    #[test]
    fn phi21_limit_zero_marker_drops_lower_pochhammer() {
        // With c → 0 the two-term partial sum is 1 + (1−a)(1−b)/(1−q)·z.
        let got = phi21_partial(
            QMonomial::plus(2),
            QMonomial::plus(3),
            LowerParam::LimitZero,
            QMonomial::plus(1),
            2,
            12,
        )
        .unwrap();
        let second = QSeries::from_terms([(0, 1), (2, -1)])
            .mul(&QSeries::from_terms([(0, 1), (3, -1)]))
            .mul(&QSeries::from_terms([(0, 1), (1, -1)]).invert_to(11).unwrap())
            .times_monomial(QMonomial::plus(1));
        assert!(got.sub(&QSeries::one().add(&second)).is_zero());
    }

    #[test]
    fn cubic_sum_small_values() {
        assert_eq!(cubic_sum(0), QSeries::one());
        assert_eq!(cubic_sum(2), QSeries::zero());
        assert_eq!(cubic_sum(3), QSeries::monomial(-1, -1));
    }

    #[test]
    fn cubic_sum_closed_form() {
        for n in 0..=30u64 {
            let value = cubic_sum(n);
            let expected = if n % 3 == 2 {
                QSeries::zero()
            } else {
                let sign = if (n / 3) % 2 == 0 { 1 } else { -1 };
                let e = -((n as i64) * (n as i64 - 1) / 6);
                QSeries::monomial(sign, e)
            };
            assert_eq!(value, expected, "closed form mismatch at N = {n}");
        }
    }

    #[test]
    fn power_matches_repeated_multiplication() {
        let x = QSeries::from_terms([(1, 1), (2, 1)]);
        assert_eq!(x.power(0), QSeries::one());
        assert_eq!(x.power(3), x.mul(&x).mul(&x));
        assert_eq!(x.power(2).coeff(3), BigInt::from(2));
    }
}
