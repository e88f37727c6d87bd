//! The monoid of supernatural numbers: formal products prod_p p^{e_p} with
//! exponents in N or infinity.
//!
//! Representable elements carry finitely many explicit exponents over a
//! default tail of 0 or infinity. Supernaturals with infinitely many
//! distinct finite nonzero exponents (an uncountable class) are out of
//! scope: every computation here lands in the representable subclass or is
//! approximated by truncations.

use crate::arith::{divides_i, factor, is_prime};
use crate::error::{Error, Result};
use crate::ratio::ratio_u;
use crate::sieve::{spf_table, Sieve};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{BigUint, One, Signed};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::BTreeMap;

/// Exponent stored in an entry: finite (>= 1) or infinite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Exponent {
    Finite(u64),
    Infinite,
}

/// Default exponent for unlisted primes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tail {
    Zero,
    Infinite,
}

/// The value of v_p on a supernatural number.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExponentValue {
    Finite(u64),
    Infinite,
}

impl ExponentValue {
    fn min(self, other: Self) -> Self {
        match (self, other) {
            (ExponentValue::Finite(a), ExponentValue::Finite(b)) => ExponentValue::Finite(a.min(b)),
            (ExponentValue::Finite(a), _) | (_, ExponentValue::Finite(a)) => ExponentValue::Finite(a),
            _ => ExponentValue::Infinite,
        }
    }

    fn max(self, other: Self) -> Self {
        match (self, other) {
            (ExponentValue::Finite(a), ExponentValue::Finite(b)) => ExponentValue::Finite(a.max(b)),
            _ => ExponentValue::Infinite,
        }
    }

    fn add(self, other: Self) -> Self {
        match (self, other) {
            (ExponentValue::Finite(a), ExponentValue::Finite(b)) => ExponentValue::Finite(a + b),
            _ => ExponentValue::Infinite,
        }
    }

    fn le(self, other: Self) -> bool {
        match (self, other) {
            (ExponentValue::Finite(a), ExponentValue::Finite(b)) => a <= b,
            (_, ExponentValue::Infinite) => true,
            (ExponentValue::Infinite, ExponentValue::Finite(_)) => false,
        }
    }
}

/// A representable supernatural number.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Supernatural {
    entries: BTreeMap<u64, Exponent>,
    tail: Tail,
}

impl Supernatural {
    pub fn one() -> Self {
        Supernatural { entries: BTreeMap::new(), tail: Tail::Zero }
    }

    /// rho(0) = prod_p p^infinity, the image of 0.
    pub fn from_zero() -> Self {
        Supernatural { entries: BTreeMap::new(), tail: Tail::Infinite }
    }

    pub fn from_natural(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroNotNatural);
        }
        let entries = factor(n)
            .into_iter()
            .map(|(p, e)| (p, Exponent::Finite(e as u64)))
            .collect();
        Ok(Supernatural { entries, tail: Tail::Zero })
    }

    pub fn prime_power(p: u64, e: Exponent) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Precondition(format!("{p} is not prime")));
        }
        let mut s = Supernatural::one();
        match e {
            Exponent::Finite(0) => {}
            other => {
                s.entries.insert(p, other);
            }
        }
        Ok(s)
    }

    /// Build from explicit parts; entries may not repeat a prime, must have
    /// exponents >= 1 and must differ from the tail.
    pub fn from_parts(entries: Vec<(u64, Exponent)>, tail: Tail) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (p, e) in entries {
            if !is_prime(p) {
                return Err(Error::Precondition(format!("{p} is not prime")));
            }
            if matches!(e, Exponent::Finite(0)) {
                return Err(Error::Precondition("entry exponents must be at least 1".into()));
            }
            if matches!((e, tail), (Exponent::Infinite, Tail::Infinite)) {
                return Err(Error::Precondition("entry equals the infinite tail".into()));
            }
            if map.insert(p, e).is_some() {
                return Err(Error::Precondition(format!("duplicate prime {p}")));
            }
        }
        Ok(Supernatural { entries: map, tail })
    }

    pub fn tail(&self) -> Tail {
        self.tail
    }

    pub fn entries(&self) -> impl Iterator<Item = (u64, Exponent)> + '_ {
        self.entries.iter().map(|(&p, &e)| (p, e))
    }

    pub fn exponent_of(&self, p: u64) -> ExponentValue {
        match self.entries.get(&p) {
            Some(Exponent::Finite(k)) => ExponentValue::Finite(*k),
            Some(Exponent::Infinite) => ExponentValue::Infinite,
            None => match self.tail {
                Tail::Zero => ExponentValue::Finite(0),
                Tail::Infinite => ExponentValue::Infinite,
            },
        }
    }

    fn tail_value(&self) -> ExponentValue {
        match self.tail {
            Tail::Zero => ExponentValue::Finite(0),
            Tail::Infinite => ExponentValue::Infinite,
        }
    }

    fn from_values(tail: ExponentValue, values: BTreeMap<u64, ExponentValue>) -> Self {
        let tail = match tail {
            ExponentValue::Finite(0) => Tail::Zero,
            ExponentValue::Infinite => Tail::Infinite,
            ExponentValue::Finite(_) => unreachable!("tails combine to 0 or infinity"),
        };
        let mut entries = BTreeMap::new();
        for (p, v) in values {
            let keep = match (v, tail) {
                (ExponentValue::Finite(0), Tail::Zero) => None,
                (ExponentValue::Infinite, Tail::Infinite) => None,
                (ExponentValue::Finite(0), Tail::Infinite) => {
                    unreachable!("exponent 0 under an infinite tail is not representable")
                }
                (ExponentValue::Finite(k), _) => Some(Exponent::Finite(k)),
                (ExponentValue::Infinite, Tail::Zero) => Some(Exponent::Infinite),
            };
            if let Some(e) = keep {
                entries.insert(p, e);
            }
        }
        Supernatural { entries, tail }
    }

    fn combine(&self, other: &Self, f: impl Fn(ExponentValue, ExponentValue) -> ExponentValue) -> Self {
        let tail = f(self.tail_value(), other.tail_value());
        let mut values = BTreeMap::new();
        for &p in self.entries.keys().chain(other.entries.keys()) {
            values.insert(p, f(self.exponent_of(p), other.exponent_of(p)));
        }
        Self::from_values(tail, values)
    }

    /// Multiplication: exponentwise addition with infinity absorbing.
    pub fn mul(&self, other: &Self) -> Self {
        self.combine(other, ExponentValue::add)
    }

    /// self divides other: v_p(self) <= v_p(other) for every p.
    pub fn divides(&self, other: &Self) -> bool {
        if !self.tail_value().le(other.tail_value()) {
            return false;
        }
        self.entries
            .keys()
            .chain(other.entries.keys())
            .all(|&p| self.exponent_of(p).le(other.exponent_of(p)))
    }

    pub fn gcd(&self, other: &Self) -> Self {
        self.combine(other, ExponentValue::min)
    }

    pub fn lcm(&self, other: &Self) -> Self {
        self.combine(other, ExponentValue::max)
    }

    pub fn is_one(&self) -> bool {
        self.entries.is_empty() && self.tail == Tail::Zero
    }

    /// Number of primes in the support.
    pub fn omega(&self) -> ExponentValue {
        match self.tail {
            Tail::Infinite => ExponentValue::Infinite,
            Tail::Zero => ExponentValue::Finite(self.entries.len() as u64),
        }
    }

    /// Sum of all exponents.
    pub fn big_omega(&self) -> ExponentValue {
        match self.tail {
            Tail::Infinite => ExponentValue::Infinite,
            Tail::Zero => {
                let mut total = 0u64;
                for e in self.entries.values() {
                    match e {
                        Exponent::Finite(k) => total += k,
                        Exponent::Infinite => return ExponentValue::Infinite,
                    }
                }
                ExponentValue::Finite(total)
            }
        }
    }

    /// Abundancy index h = prod_p h(p^{e_p}), with h(p^r) = (p^{r+1}-1) /
    /// (p^r (p-1)) and h(p^inf) = p/(p-1). Infinite tails diverge.
    pub fn abundancy(&self) -> ExtendedRational {
        if self.tail == Tail::Infinite {
            return ExtendedRational::Infinite;
        }
        let mut h = BigRational::one();
        for (&p, &e) in &self.entries {
            h *= match e {
                Exponent::Infinite => ratio_u(p, p - 1),
                Exponent::Finite(k) => {
                    let pk = BigUint::from(p).pow(k as u32);
                    let pk1 = &pk * BigUint::from(p);
                    BigRational::new(
                        BigInt::from(pk1 - BigUint::one()),
                        BigInt::from(pk * BigUint::from(p - 1)),
                    )
                }
            };
        }
        ExtendedRational::Finite(h)
    }

    /// Product of the support primes, for squarefree finite supernaturals.
    pub fn squarefree_value(&self) -> Option<BigUint> {
        if self.tail == Tail::Infinite {
            return None;
        }
        let mut acc = BigUint::one();
        for (&p, &e) in &self.entries {
            if e != Exponent::Finite(1) {
                return None;
            }
            acc *= BigUint::from(p);
        }
        Some(acc)
    }
}

/// An exact nonnegative rational or infinity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExtendedRational {
    Finite(BigRational),
    Infinite,
}

impl ExtendedRational {
    pub fn as_finite(&self) -> Option<&BigRational> {
        match self {
            ExtendedRational::Finite(r) => Some(r),
            ExtendedRational::Infinite => None,
        }
    }
}

/// Greedy squarefree approximation of a target abundancy: walk the primes in
/// increasing order, including p whenever h * (1 + 1/p) stays at most t,
/// stopping as soon as |h - t| < eps.
pub fn approx_target(t: &BigRational, eps: &BigRational, prime_limit: u64) -> Result<Supernatural> {
    if *t <= BigRational::one() {
        return Err(Error::Precondition("target must exceed 1".into()));
    }
    if !eps.is_positive() {
        return Err(Error::Precondition("eps must be positive".into()));
    }
    let close = |h: &BigRational| (h - t).abs() < *eps;
    let mut h = BigRational::one();
    let mut picked: Vec<(u64, Exponent)> = Vec::new();
    if close(&h) {
        return Supernatural::from_parts(picked, Tail::Zero);
    }
    let sieve = Sieve::new(prime_limit);
    for p in sieve.primes() {
        let candidate = &h * ratio_u(p + 1, p);
        if candidate <= *t {
            h = candidate;
            picked.push((p, Exponent::Finite(1)));
            if close(&h) {
                return Supernatural::from_parts(picked, Tail::Zero);
            }
        }
    }
    Err(Error::EpsUnreachable { achieved: crate::ratio::format_ratio(&h) })
}

/// Membership in the order closure of a finite set: s <= t for some listed t.
pub fn order_closure_member(s: &Supernatural, set: &[Supernatural]) -> bool {
    set.iter().any(|t| s.divides(t))
}

/// Arithmetic functions checked for divisibility monotonicity.
#[derive(Debug, Clone)]
pub enum ArithmeticFn {
    Phi,
    Mu,
    Sigma,
    Identity,
    Power(u32),
    /// The i-th entry holds f(i); index 0 is ignored.
    Table(Vec<i64>),
}

impl ArithmeticFn {
    fn eval(&self, n: u64, spf: &[u32]) -> Result<i128> {
        Ok(match self {
            ArithmeticFn::Identity => n as i128,
            ArithmeticFn::Power(k) => {
                (n as i128).checked_pow(*k).ok_or(Error::Overflow)?
            }
            ArithmeticFn::Phi => {
                let mut phi = n as i128;
                let mut m = n;
                while m > 1 {
                    let p = spf[m as usize] as u64;
                    phi = phi / p as i128 * (p as i128 - 1);
                    while m % p == 0 {
                        m /= p;
                    }
                }
                phi
            }
            ArithmeticFn::Mu => {
                let mut m = n;
                let mut mu = 1i128;
                while m > 1 {
                    let p = spf[m as usize] as u64;
                    m /= p;
                    if m % p == 0 {
                        return Ok(0);
                    }
                    mu = -mu;
                }
                mu
            }
            ArithmeticFn::Sigma => {
                let mut m = n;
                let mut sigma = 1i128;
                while m > 1 {
                    let p = spf[m as usize] as u64;
                    let mut pk = 1i128;
                    let mut term = 1i128;
                    while m % p == 0 {
                        m /= p;
                        pk = pk.checked_mul(p as i128).ok_or(Error::Overflow)?;
                        term += pk;
                    }
                    sigma = sigma.checked_mul(term).ok_or(Error::Overflow)?;
                }
                sigma
            }
            ArithmeticFn::Table(t) => {
                *t.get(n as usize).ok_or(Error::TableIncomplete { bound: n })? as i128
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MonotoneResult {
    Monotone,
    /// First failing pair in (b, a)-lexicographic order: a | b but f(a) does
    /// not divide f(b).
    Counterexample { a: u64, b: u64 },
}

/// Check a | b implies f(a) | f(b) over 1 <= a <= b <= bound, with signed
/// divisibility conventions (every integer divides 0, units divide all).
pub fn divisibility_monotone(f: &ArithmeticFn, bound: u64) -> Result<MonotoneResult> {
    if bound < 2 {
        return Err(Error::Precondition("bound must be at least 2".into()));
    }
    if let ArithmeticFn::Table(t) = f {
        if t.len() <= bound as usize {
            return Err(Error::TableIncomplete { bound });
        }
    }
    let spf = spf_table(bound as usize);
    let values: Vec<i128> = {
        let mut v = Vec::with_capacity(bound as usize + 1);
        v.push(0);
        for n in 1..=bound {
            v.push(f.eval(n, &spf)?);
        }
        v
    };
    for b in 1..=bound {
        let mut divisors: Vec<u64> = Vec::new();
        let mut d = 1;
        while d * d <= b {
            if b % d == 0 {
                divisors.push(d);
                if d != b / d {
                    divisors.push(b / d);
                }
            }
            d += 1;
        }
        divisors.sort_unstable();
        for a in divisors {
            if !divides_i(values[a as usize], values[b as usize]) {
                return Ok(MonotoneResult::Counterexample { a, b });
            }
        }
    }
    Ok(MonotoneResult::Monotone)
}

/// Convergence evidence configuration.
#[derive(Debug, Clone, Copy)]
pub struct ConvergesConfig {
    /// For a target exponent of infinity, terms must reach this value.
    pub inf_threshold: u64,
    /// A disagreement only refutes once it is constant over a suffix of at
    /// least this many terms.
    pub min_stable_suffix: usize,
}

impl Default for ConvergesConfig {
    fn default() -> Self {
        ConvergesConfig { inf_threshold: 3, min_stable_suffix: 10 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConvergesReport {
    /// Per prime: the first index from which every later term matches the
    /// target exponent (None when the prefix has not stabilized yet).
    /// Finite-prefix evidence, not a proof of convergence.
    Consistent { stabilized_at: BTreeMap<u64, Option<usize>> },
    RefutedAt { prime: u64, index: usize },
}

/// Check v_p-convergence of a sequence toward s for all primes up to the
/// bound: each v_p(seq_i) must eventually equal v_p(s) (or clear the
/// threshold when v_p(s) is infinite).
pub fn converges_report(
    seq: &[Supernatural],
    target: &Supernatural,
    prime_bound: u64,
    config: &ConvergesConfig,
) -> Result<ConvergesReport> {
    if seq.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut stabilized_at = BTreeMap::new();
    let mut p = 2u64;
    while p <= prime_bound {
        if is_prime(p) {
            let goal = target.exponent_of(p);
            let matches = |s: &Supernatural| -> bool {
                match (s.exponent_of(p), goal) {
                    (v, ExponentValue::Finite(k)) => v == ExponentValue::Finite(k),
                    (ExponentValue::Infinite, ExponentValue::Infinite) => true,
                    (ExponentValue::Finite(v), ExponentValue::Infinite) => v >= config.inf_threshold,
                }
            };
            let conds: Vec<bool> = seq.iter().map(matches).collect();
            if *conds.last().expect("nonempty") {
                let first_good = (0..conds.len())
                    .rev()
                    .take_while(|&i| conds[i])
                    .last()
                    .expect("last is good");
                stabilized_at.insert(p, Some(first_good));
            } else {
                // look for a stabilized disagreement: a constant tail of
                // valuations, long enough, that misses the target
                let last_val = seq.last().expect("nonempty").exponent_of(p);
                let run = seq
                    .iter()
                    .rev()
                    .take_while(|s| s.exponent_of(p) == last_val)
                    .count();
                if run >= config.min_stable_suffix {
                    return Ok(ConvergesReport::RefutedAt { prime: p, index: seq.len() - run });
                }
                stabilized_at.insert(p, None);
            }
        }
        p += 1;
    }
    Ok(ConvergesReport::Consistent { stabilized_at })
}

// ---------------------------------------------------------------------------
// serde: {"tail": "0"|"inf", "entries": [{"p":, "e": int|"inf"}]}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Exponent::Finite(k) => serializer.serialize_u64(*k),
            Exponent::Infinite => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(u64),
            Word(String),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Num(k) => Ok(Exponent::Finite(k)),
            Repr::Word(w) if w == "inf" => Ok(Exponent::Infinite),
            Repr::Word(w) => Err(D::Error::custom(format!("expected integer or \"inf\", got {w:?}"))),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct EntryRepr {
    p: u64,
    e: Exponent,
}

#[derive(Serialize, Deserialize)]
struct SupernaturalRepr {
    tail: String,
    entries: Vec<EntryRepr>,
}

impl Serialize for Supernatural {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        SupernaturalRepr {
            tail: match self.tail {
                Tail::Zero => "0".into(),
                Tail::Infinite => "inf".into(),
            },
            entries: self.entries().map(|(p, e)| EntryRepr { p, e }).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Supernatural {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = SupernaturalRepr::deserialize(deserializer)?;
        let tail = match repr.tail.as_str() {
            "0" => Tail::Zero,
            "inf" => Tail::Infinite,
            other => return Err(D::Error::custom(format!("tail must be \"0\" or \"inf\", got {other:?}"))),
        };
        Supernatural::from_parts(repr.entries.into_iter().map(|e| (e.p, e.e)).collect(), tail)
            .map_err(D::Error::custom)
    }
}

impl std::fmt::Display for Supernatural {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        if self.entries.is_empty() && self.tail == Tail::Infinite {
            return write!(f, "rho(0)");
        }
        let parts: Vec<String> = self
            .entries()
            .map(|(p, e)| match e {
                Exponent::Finite(1) => p.to_string(),
                Exponent::Finite(k) => format!("{p}^{k}"),
                Exponent::Infinite => format!("{p}^inf"),
            })
            .collect();
        write!(f, "{}", parts.join("*"))?;
        if self.tail == Tail::Infinite {
            write!(f, "*(tail inf)")?;
        }
        Ok(())
    }
}
