//! Exact truncated Laurent-series and polynomial arithmetic in one variable q.
//!
//! A [`QSeries`] stores integer coefficients keyed by (possibly negative)
//! exponent. A value is either *exact* — a finite Laurent polynomial,
//! authoritative at every exponent — or *truncated*, authoritative for all
//! exponents up to an inclusive bound. Arithmetic propagates the tightest
//! honest bound, so a comparison can always report the exponent range over
//! which it actually proved something.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// `sign * q^exponent`, exactly. The carrier for monomial-specialized
/// parameters of hypergeometric sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QMonomial {
    sign: i8,
    exponent: i64,
}

impl QMonomial {
    /// `+q^exponent`.
    pub fn plus(exponent: i64) -> Self {
        QMonomial { sign: 1, exponent }
    }

    /// `−q^exponent`.
    pub fn minus(exponent: i64) -> Self {
        QMonomial { sign: -1, exponent }
    }

    /// +1 or −1.
    pub fn sign(&self) -> i64 {
        i64::from(self.sign)
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    /// The same value as an exact one-term series.
    pub fn to_series(&self) -> QSeries {
        QSeries::monomial(self.sign(), self.exponent)
    }

    /// The product of two monomials.
    pub fn times(&self, other: &QMonomial) -> QMonomial {
        QMonomial {
            sign: self.sign * other.sign,
            exponent: self.exponent + other.exponent,
        }
    }
}

impl fmt::Display for QMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign < 0 {
            write!(f, "-")?;
        }
        match self.exponent {
            0 => write!(f, "1"),
            1 => write!(f, "q"),
            e => write!(f, "q^{e}"),
        }
    }
}

/// Number of factors in a Pochhammer-style product.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorCount {
    Finite(u64),
    Infinite,
}

/// A Laurent series/polynomial in q with exact integer coefficients.
///
/// Invariants: no stored coefficient is zero, and when a truncation bound is
/// present every stored exponent is ≤ that bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QSeries {
    coeffs: BTreeMap<i64, BigInt>,
    /// `None` means exact (finite Laurent polynomial, authoritative
    /// everywhere); `Some(t)` means coefficients are authoritative for all
    /// exponents ≤ t.
    bound: Option<i64>,
}

impl QSeries {
    // ---- constructors -------------------------------------------------

    /// The exact zero polynomial.
    pub fn zero() -> Self {
        QSeries { coeffs: BTreeMap::new(), bound: None }
    }

    /// Zero known only up to `trunc`.
    pub fn zero_to(trunc: i64) -> Self {
        QSeries { coeffs: BTreeMap::new(), bound: Some(trunc) }
    }

    /// The exact constant 1.
    pub fn one() -> Self {
        QSeries::monomial(1, 0)
    }

    /// The exact constant `c`.
    pub fn constant(c: i64) -> Self {
        QSeries::monomial(c, 0)
    }

    /// The exact one-term value `c * q^e` (zero if `c` is 0).
    pub fn monomial(c: i64, e: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        if c != 0 {
            coeffs.insert(e, BigInt::from(c));
        }
        QSeries { coeffs, bound: None }
    }

    /// Builds an exact value from explicit `(exponent, coefficient)` pairs.
    pub fn from_terms<I: IntoIterator<Item = (i64, i64)>>(terms: I) -> Self {
        let mut s = QSeries::zero();
        for (e, c) in terms {
            s.add_term(e, &BigInt::from(c));
        }
        s
    }

    // ---- inspection ---------------------------------------------------

    /// `None` when exact; otherwise the inclusive authoritative bound.
    pub fn truncation(&self) -> Option<i64> {
        self.bound
    }

    pub fn is_exact(&self) -> bool {
        self.bound.is_none()
    }

    /// True when no (known) term is present.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// The coefficient at exponent `e` (zero when absent). Only authoritative
    /// for `e` within the truncation bound.
    pub fn coeff(&self, e: i64) -> BigInt {
        self.coeffs.get(&e).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Lowest stored exponent, if any term is present.
    pub fn min_exponent(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    /// Highest stored exponent, if any term is present.
    pub fn max_exponent(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// Iterates `(exponent, coefficient)` in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    /// Number of nonzero stored terms.
    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    // ---- bound plumbing ----------------------------------------------

    fn combined_bound(a: Option<i64>, b: Option<i64>) -> Option<i64> {
        match (a, b) {
            (None, None) => None,
            (Some(t), None) | (None, Some(t)) => Some(t),
            (Some(s), Some(t)) => Some(s.min(t)),
        }
    }

    fn add_term(&mut self, e: i64, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        if let Some(t) = self.bound {
            if e > t {
                return;
            }
        }
        let entry = self.coeffs.entry(e).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&e);
        }
    }

    /// A copy truncated to `min(current bound, trunc)`, dropping higher terms.
    pub fn truncated(&self, trunc: i64) -> QSeries {
        let bound = Some(self.bound.map_or(trunc, |t| t.min(trunc)));
        let coeffs = self
            .coeffs
            .range(..=bound.unwrap())
            .map(|(e, c)| (*e, c.clone()))
            .collect();
        QSeries { coeffs, bound }
    }

    // ---- ring operations ---------------------------------------------

    pub fn add(&self, other: &QSeries) -> QSeries {
        let mut out = QSeries {
            coeffs: BTreeMap::new(),
            bound: Self::combined_bound(self.bound, other.bound),
        };
        for (e, c) in &self.coeffs {
            out.add_term(*e, c);
        }
        for (e, c) in &other.coeffs {
            out.add_term(*e, c);
        }
        out
    }

    pub fn neg(&self) -> QSeries {
        QSeries {
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, -c)).collect(),
            bound: self.bound,
        }
    }

    pub fn sub(&self, other: &QSeries) -> QSeries {
        self.add(&other.neg())
    }

    /// Cauchy product. The result's bound accounts for each operand's unknown
    /// tail entering at (own bound) + (other's lowest known exponent).
    pub fn mul(&self, other: &QSeries) -> QSeries {
        // Multiplying by the exact zero annihilates even unknown tails.
        if (self.is_zero() && self.is_exact()) || (other.is_zero() && other.is_exact()) {
            return QSeries::zero();
        }
        // Earliest exponent where a factor may hold a nonzero coefficient:
        // its lowest stored term, or just past its bound when it stores
        // nothing (a bounded zero is only known zero through the bound).
        let earliest = |s: &QSeries| {
            s.min_exponent()
                .or_else(|| s.bound.map(|t| t + 1))
                .expect("exact zero factors were handled above")
        };
        let from_self = self.bound.map(|t| t + earliest(other));
        let from_other = other.bound.map(|t| t + earliest(self));
        let mut out = QSeries {
            coeffs: BTreeMap::new(),
            bound: Self::combined_bound(from_self, from_other),
        };
        for (ea, ca) in &self.coeffs {
            for (eb, cb) in &other.coeffs {
                if let Some(t) = out.bound {
                    if ea + eb > t {
                        break; // exponents ascend within the inner loop
                    }
                }
                out.add_term(ea + eb, &(ca * cb));
            }
        }
        out
    }

    /// Multiplies by the single term `sign * q^e` (an exact operation that
    /// shifts the bound along with the exponents).
    pub fn times_monomial(&self, m: QMonomial) -> QSeries {
        let sign = m.sign();
        QSeries {
            coeffs: self
                .coeffs
                .iter()
                .map(|(e, c)| (*e + m.exponent(), if sign < 0 { -c } else { c.clone() }))
                .collect(),
            bound: self.bound.map(|t| t + m.exponent()),
        }
    }

    /// Multiplies every coefficient by the integer `k`.
    pub fn scaled(&self, k: i64) -> QSeries {
        if k == 0 {
            return if self.is_exact() { QSeries::zero() } else { QSeries::zero_to(self.bound.unwrap()) };
        }
        let k = BigInt::from(k);
        QSeries {
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, c * &k)).collect(),
            bound: self.bound,
        }
    }

    /// Substitutes `q -> q^d` (`d` ≥ 1), stretching exponents by `d`. A value
    /// authoritative to `t` yields one authoritative to `d*(t+1) - 1`: every
    /// exponent strictly below the next stretched unknown is accounted for.
    pub fn stretched(&self, d: i64) -> QSeries {
        assert!(d >= 1, "stretch factor must be positive");
        QSeries {
            coeffs: self.coeffs.iter().map(|(e, c)| (*e * d, c.clone())).collect(),
            bound: self.bound.map(|t| d * (t + 1) - 1),
        }
    }

    // ---- inversion and division ---------------------------------------

    /// Multiplicative inverse. The lowest coefficient must be ±1. Truncated
    /// input of bound `t` and lowest exponent `e` yields a result
    /// authoritative to `t − 2e`; exact input must be a single term (any
    /// other exact polynomial inverts to an infinite series — use
    /// [`QSeries::invert_to`]).
    pub fn invert(&self) -> Result<QSeries> {
        let (e0, c0) = self.unit_lowest()?;
        if self.coeffs.len() == 1 {
            // (±q^e)^{-1} = ±q^{-e}, exactly; a truncated one-term value
            // still carries its honest bound through.
            let mut out = QSeries::monomial(c0, -e0);
            out.bound = self.bound.map(|t| t - 2 * e0);
            return Ok(out);
        }
        match self.bound {
            Some(t) => self.invert_impl(e0, c0, t - 2 * e0),
            None => Err(Error::InversionNeedsTruncation),
        }
    }

    /// Multiplicative inverse authoritative to `trunc`, valid for exact
    /// inputs (and for truncated inputs when `trunc` does not exceed what
    /// [`QSeries::invert`] would honestly produce).
    pub fn invert_to(&self, trunc: i64) -> Result<QSeries> {
        let (e0, c0) = self.unit_lowest()?;
        if let Some(t) = self.bound {
            let honest = t - 2 * e0;
            if trunc > honest {
                return Err(Error::InversionNeedsTruncation);
            }
        }
        self.invert_impl(e0, c0, trunc)
    }

    fn unit_lowest(&self) -> Result<(i64, i64)> {
        let Some(e0) = self.min_exponent() else {
            return Err(Error::DivisionByZero);
        };
        let c0 = &self.coeffs[&e0];
        if c0.magnitude() != BigInt::one().magnitude() {
            return Err(Error::NonUnitLowestCoefficient { found: c0.to_string() });
        }
        Ok((e0, if c0.is_negative() { -1 } else { 1 }))
    }

    /// Core inversion: with lowest term `c0 * q^{e0}` (`c0 = ±1`), write
    /// `self = c0 q^{e0} (1 + u)` and solve `(1 + u)(1 + v) = 1` by the
    /// integer recurrence `v_n = −u_n − Σ_{k<n} u_k v_{n−k}`.
    fn invert_impl(&self, e0: i64, c0: i64, trunc: i64) -> Result<QSeries> {
        // u's relative order n coefficient is self's coefficient at e0 + n.
        let rel_order = trunc + e0; // highest relative order needed in v
        let mut v: BTreeMap<i64, BigInt> = BTreeMap::new();
        let u = |n: i64| -> BigInt {
            let c = self.coeff(e0 + n);
            if c0 < 0 {
                -c
            } else {
                c
            }
        };
        for n in 1..=rel_order.max(0) {
            let mut acc = -u(n);
            for (k, vk) in v.range(1..n) {
                let un_k = u(n - k);
                if !un_k.is_zero() {
                    acc -= un_k * vk;
                }
            }
            if !acc.is_zero() {
                v.insert(n, acc);
            }
        }
        let mut out = QSeries { coeffs: BTreeMap::new(), bound: Some(trunc) };
        out.add_term(-e0, &BigInt::from(c0));
        for (n, c) in &v {
            let coeff = if c0 < 0 { -c } else { c.clone() };
            out.add_term(n - e0, &coeff);
        }
        Ok(out)
    }

    /// Exact polynomial division: both operands must be exact and the
    /// divisor's lowest coefficient ±1. Returns an error when the division
    /// leaves a remainder.
    pub fn div_exact(&self, divisor: &QSeries) -> Result<QSeries> {
        if !self.is_exact() || !divisor.is_exact() {
            return Err(Error::InversionNeedsTruncation);
        }
        let (ed, cd) = divisor.unit_lowest()?;
        if self.is_zero() {
            return Ok(QSeries::zero());
        }
        // The quotient's top exponent, when division is exact.
        let max_q = self.max_exponent().unwrap() - divisor.max_exponent().unwrap();
        let mut rem = self.clone();
        let mut quo = QSeries::zero();
        while let Some(er) = rem.min_exponent() {
            let eq = er - ed;
            if eq > max_q {
                return Err(Error::InexactDivision);
            }
            let cr = rem.coeff(er);
            let cq = if cd < 0 { -&cr } else { cr.clone() };
            quo.add_term(eq, &cq);
            // rem -= (cq q^eq) * divisor
            for (e, c) in &divisor.coeffs {
                rem.add_term(e + eq, &(-(&cq) * c));
            }
        }
        Ok(quo)
    }

    // ---- products ------------------------------------------------------

    /// The product `(a; q^step)_count = ∏_j (1 − a·q^{step·j})` over
    /// `j = 0..count`. Finite products are exact unless a truncation is
    /// supplied; infinite products require one and multiply factors until
    /// the factor's exponent exceeds it.
    pub fn pochhammer(
        a: QMonomial,
        step: u64,
        count: FactorCount,
        trunc: Option<i64>,
    ) -> Result<QSeries> {
        if step == 0 {
            return Err(Error::NonPositiveStep);
        }
        let step = step as i64;
        let factor = |j: i64| -> QSeries {
            let mut f = QSeries::one();
            f.add_term(a.exponent() + step * j, &BigInt::from(-a.sign()));
            f
        };
        let mut acc = match trunc {
            Some(t) => {
                let mut one = QSeries::one();
                one.bound = Some(t);
                one
            }
            None => QSeries::one(),
        };
        match count {
            FactorCount::Finite(n) => {
                for j in 0..n as i64 {
                    acc = acc.mul(&factor(j));
                }
                if let Some(t) = trunc {
                    acc = acc.truncated(t);
                }
                Ok(acc)
            }
            FactorCount::Infinite => {
                let Some(t) = trunc else {
                    return Err(Error::InfiniteProductNeedsTruncation);
                };
                let mut j = 0i64;
                while a.exponent() + step * j <= t {
                    acc = acc.mul(&factor(j));
                    j += 1;
                }
                Ok(acc)
            }
        }
    }

    // ---- rendering ------------------------------------------------------

    /// Canonical ascending-exponent rendering, e.g. `1 - q + 2*q^3 + O(q^8)`.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let one = BigInt::one();
        let minus_one = -BigInt::one();
        for (i, (e, c)) in self.coeffs.iter().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else if neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let mag = c.magnitude();
            let coeff_is_one = *c == one || *c == minus_one;
            match (*e, coeff_is_one) {
                (0, _) => out.push_str(&mag.to_string()),
                (1, true) => out.push('q'),
                (1, false) => out.push_str(&format!("{mag}*q")),
                (_, true) => out.push_str(&format!("q^{e}")),
                (_, false) => out.push_str(&format!("{mag}*q^{e}")),
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        if let Some(t) = self.bound {
            out.push_str(&format!(" + O(q^{})", t + 1));
        }
        out
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

// ---- Gaussian binomials -------------------------------------------------

/// The Gaussian binomial: partitions fitting in an `n × m` box, i.e.
/// `(q)_{n+m} / ((q)_n (q)_m)` for `n, m ≥ 0`, and the zero polynomial
/// otherwise. Always an exact polynomial of degree `n·m`.
pub fn qbinom(n: i64, m: i64) -> QSeries {
    if n < 0 || m < 0 {
        return QSeries::zero();
    }
    // ∏_{i=1}^{s} (1 − q^{r+i}) / (1 − q^i) with s the smaller index.
    let (r, s) = if n < m { (m, n) } else { (n, m) };
    let mut num = QSeries::one();
    let mut den = QSeries::one();
    for i in 1..=s {
        num = num.mul(&QSeries::from_terms([(0, 1), (r + i, -1)]));
        den = den.mul(&QSeries::from_terms([(0, 1), (i, -1)]));
    }
    num.div_exact(&den)
        .expect("Gaussian binomial division is always exact")
}

/// The same binomial in row form: partitions in a box with `bottom` columns
/// and `top − bottom` rows; zero whenever `bottom` lies outside `0..=top`.
pub fn bracket(top: i64, bottom: i64) -> QSeries {
    qbinom(bottom, top - bottom)
}

/// Row-form binomial with `q` replaced by `q^d`.
pub fn bracket_base(top: i64, bottom: i64, d: i64) -> QSeries {
    bracket(top, bottom).stretched(d)
}
