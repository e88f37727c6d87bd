//! Truncated arithmetic in the profinite completion of Z.
//!
//! A `TruncatedProfinite` is the clopen coset r + N*Zhat: the shadow of a
//! profinite integer at working level N. Everything an operation reports is
//! an exact statement about that coset (valuations cap at v_p(N), units mod
//! N are exactly the residues coprime to N).

use crate::arith::{crt_pair, factor, gcd, gcd_i, mod_u, valuation};
use crate::error::{Error, Result};
use crate::families::FamilySpec;
use crate::ratio::{ratio_big, ratio_u};
use crate::residue::{ResidueSet, MAX_MODULUS};
use crate::sieve::Sieve;
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{BigUint, One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::BTreeMap;

/// The clopen coset residue + level*Zhat.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct TruncatedProfinite {
    level: u64,
    residue: u64,
}

/// What a truncation knows about a p-adic valuation: exact below the cap,
/// otherwise only a lower bound at the cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "k", rename_all = "snake_case")]
pub enum Valuation {
    Exact(u32),
    AtLeast(u32),
}

impl Valuation {
    /// The lower bound carried by either variant.
    pub fn floor(self) -> u32 {
        match self {
            Valuation::Exact(k) | Valuation::AtLeast(k) => k,
        }
    }

    pub fn is_exact(self) -> bool {
        matches!(self, Valuation::Exact(_))
    }
}

impl TruncatedProfinite {
    pub fn new(residue: u64, level: u64) -> Result<Self> {
        if level == 0 {
            return Err(Error::ZeroModulus);
        }
        Ok(TruncatedProfinite { level, residue: residue % level })
    }

    pub fn from_integer(a: i64, level: u64) -> Result<Self> {
        if level == 0 {
            return Err(Error::ZeroModulus);
        }
        Ok(TruncatedProfinite { level, residue: mod_u(a, level) })
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn residue(&self) -> u64 {
        self.residue
    }

    /// CRT decomposition: for every p | N the local datum (v_p(N), x mod p^v).
    pub fn crt_split(&self) -> BTreeMap<u64, (u32, u64)> {
        factor(self.level)
            .into_iter()
            .map(|(p, e)| (p, (e, self.residue % p.pow(e))))
            .collect()
    }

    /// Inverse of `crt_split`.
    pub fn crt_join(parts: &BTreeMap<u64, (u32, u64)>) -> Result<TruncatedProfinite> {
        if parts.is_empty() {
            return Err(Error::EmptyInput);
        }
        let mut residue = 0u64;
        let mut level = 1u64;
        for (&p, &(e, r)) in parts {
            if !crate::arith::is_prime(p) {
                return Err(Error::Precondition(format!("{p} is not prime")));
            }
            let q = p.checked_pow(e).ok_or(Error::Overflow)?;
            residue = crt_pair(residue, level, r % q, q)?;
            level = level.checked_mul(q).ok_or(Error::Overflow)?;
        }
        Ok(TruncatedProfinite { level, residue })
    }

    /// The valuation at p, for p dividing the level.
    pub fn valuation(&self, p: u64) -> Result<Valuation> {
        let cap = valuation(self.level, p).expect("level is positive");
        if cap == 0 {
            return Err(Error::Precondition(format!(
                "{p} does not divide the level {}; the truncation carries no information",
                self.level
            )));
        }
        match valuation(self.residue, p) {
            None => Ok(Valuation::AtLeast(cap)), // residue 0: v_p at least the cap
            Some(v) if v >= cap => Ok(Valuation::AtLeast(cap)),
            Some(v) => Ok(Valuation::Exact(v)),
        }
    }

    /// Exponent data of the image under rho: x -> prod p^{v_p(x)}, with
    /// lower-bound flags where the truncation saturates.
    pub fn rho_truncated(&self) -> PartialSupernatural {
        let entries = factor(self.level)
            .into_iter()
            .map(|(p, _)| (p, self.valuation(p).expect("p divides level")))
            .collect();
        PartialSupernatural { level: self.level, entries }
    }
}

/// Finite part of a supernatural number as seen through a truncation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartialSupernatural {
    pub level: u64,
    pub entries: BTreeMap<u64, Valuation>,
}

impl PartialSupernatural {
    /// Agreement with a true supernatural: exact entries must match, and
    /// saturated entries must be dominated.
    pub fn agrees_with(&self, s: &crate::supernatural::Supernatural) -> bool {
        use crate::supernatural::ExponentValue;
        self.entries.iter().all(|(&p, &val)| match (val, s.exponent_of(p)) {
            (Valuation::Exact(k), ExponentValue::Finite(e)) => u64::from(k) == e,
            (Valuation::Exact(_), ExponentValue::Infinite) => false,
            (Valuation::AtLeast(k), ExponentValue::Finite(e)) => e >= u64::from(k),
            (Valuation::AtLeast(_), ExponentValue::Infinite) => true,
        })
    }
}

/// Generator of the ideal the inputs generate, at the common level: the
/// product over p | N of p^{min of the input valuations}.
pub fn bezout_generator(xs: &[TruncatedProfinite]) -> Result<TruncatedProfinite> {
    let first = xs.first().ok_or(Error::EmptyInput)?;
    let level = first.level;
    for x in xs {
        if x.level != level {
            return Err(Error::ModulusMismatch { expected: level, found: x.level });
        }
    }
    let mut residue = 1 % level;
    for (p, cap) in factor(level) {
        let m = xs
            .iter()
            .map(|x| x.valuation(p).expect("p divides level").floor().min(cap))
            .min()
            .unwrap_or(cap);
        residue = crate::arith::mul_mod(residue, p.pow(m), level);
    }
    TruncatedProfinite::new(residue, level)
}

/// One local factor of a + b*Zhat = prod_p (a + p^{v_p(b)} Z_p).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LocalCoset {
    pub p: u64,
    pub exponent: u32,
    pub residue: u64,
}

/// Local factors of the coset a + b*Zhat over the primes dividing b; at all
/// other primes the factor is the whole Z_p.
pub fn unit_coset_decomposition(a: i64, b: u64) -> Result<Vec<LocalCoset>> {
    if b == 0 {
        return Err(Error::ZeroModulus);
    }
    Ok(factor(b)
        .into_iter()
        .map(|(p, e)| LocalCoset { p, exponent: e, residue: mod_u(a, p.pow(e)) })
        .collect())
}

/// A finite boolean combination of basic cosets, stored at a working level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClopenSet {
    level: u64,
    members: ResidueSet,
}

impl ClopenSet {
    pub fn new(level: u64, members: ResidueSet) -> Result<Self> {
        if members.modulus() != level {
            return Err(Error::ModulusMismatch { expected: level, found: members.modulus() });
        }
        Ok(ClopenSet { level, members })
    }

    pub fn empty(level: u64) -> Result<Self> {
        Ok(ClopenSet { level, members: ResidueSet::empty(level)? })
    }

    pub fn whole(level: u64) -> Result<Self> {
        Ok(ClopenSet { level, members: ResidueSet::full(level)? })
    }

    /// The basic coset a + n*Zhat, at a level n must divide.
    pub fn coset(a: i64, n: u64, level: u64) -> Result<Self> {
        if n == 0 || level % n != 0 {
            return Err(Error::NotADivisor { n, m: level });
        }
        Ok(ClopenSet { level, members: ResidueSet::coset(level, mod_u(a, n), n)? })
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn members(&self) -> &ResidueSet {
        &self.members
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        Ok(ClopenSet { level: self.level, members: self.members.union(&other.members)? })
    }

    pub fn intersection(&self, other: &Self) -> Result<Self> {
        Ok(ClopenSet { level: self.level, members: self.members.intersection(&other.members)? })
    }

    pub fn difference(&self, other: &Self) -> Result<Self> {
        Ok(ClopenSet { level: self.level, members: self.members.difference(&other.members)? })
    }

    pub fn complement(&self) -> Self {
        ClopenSet { level: self.level, members: self.members.complement() }
    }

    pub fn translate(&self, c: i64) -> Self {
        ClopenSet { level: self.level, members: self.members.translate(c) }
    }

    /// Haar measure: |members| / level, exactly.
    pub fn haar_measure(&self) -> BigRational {
        ratio_u(self.members.len(), self.level)
    }
}

impl Serialize for ClopenSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            #[serde(rename = "N")]
            level: u64,
            members: &'a ResidueSet,
        }
        Repr { level: self.level, members: &self.members }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ClopenSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            #[serde(rename = "N")]
            level: u64,
            members: Vec<u64>,
        }
        let r = Repr::deserialize(deserializer)?;
        let members = ResidueSet::from_residues(r.level, r.members).map_err(D::Error::custom)?;
        Ok(ClopenSet { level: r.level, members })
    }
}

/// prod_{p <= bound} (1 - 1/p) as an exact rational: the Haar measure of the
/// unit group seen through the primes up to the bound.
pub fn euler_unit_measure(bound: u64) -> Result<BigRational> {
    if bound < 2 {
        return Err(Error::Precondition("prime bound must be at least 2".into()));
    }
    let sieve = Sieve::new(bound);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for p in sieve.primes() {
        num *= BigUint::from(p - 1);
        den *= BigUint::from(p);
    }
    Ok(ratio_big(num, den))
}

/// Residues of the primes up to the sieve limit, modulo n.
pub fn prime_residues(n: u64, sieve: &Sieve) -> Result<ResidueSet> {
    if n == 0 {
        return Err(Error::ZeroModulus);
    }
    if n > MAX_MODULUS {
        return Err(Error::ModulusTooLarge { n, max: MAX_MODULUS });
    }
    if sieve.limit() < n {
        return Err(Error::Precondition(format!(
            "sieve limit {} is below the modulus {n}",
            sieve.limit()
        )));
    }
    let mut out = ResidueSet::empty(n)?;
    for p in sieve.primes() {
        out.insert(p % n);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DirichletShadow {
    pub residues: Vec<u64>,
    pub check: bool,
}

/// Finite shadow of the closure-of-primes description: the primes' residues
/// mod n must be exactly the units together with the images of the primes
/// dividing n.
pub fn dirichlet_check(n: u64, sieve: &Sieve) -> Result<DirichletShadow> {
    let seen = prime_residues(n, sieve)?;
    let mut expected = ResidueSet::empty(n)?;
    for x in 0..n {
        if gcd(x, n) == 1 {
            expected.insert(x);
        }
    }
    for (p, _) in factor(n) {
        if p <= sieve.limit() {
            expected.insert(p % n);
        }
    }
    Ok(DirichletShadow { residues: seen.to_vec(), check: seen == expected })
}

/// Golomb's measure of the progression a + bN: 1/phi(b) on invertible
/// classes, 0 otherwise.
pub fn golomb_pi_measure(a: i64, b: u64) -> Result<BigRational> {
    if b == 0 {
        return Err(Error::ZeroModulus);
    }
    if gcd_i(a, b) == 1 {
        Ok(ratio_u(1, crate::arith::euler_phi(b)))
    } else {
        Ok(BigRational::zero())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalDensity {
    /// pi(t, A) / (t / log t), with log t taken in f64 and converted exactly.
    pub absolute: BigRational,
    /// pi(t, A) / pi(t), an exact ratio of counts.
    pub relative: BigRational,
    pub count_in_class: u64,
    pub count_primes: u64,
}

/// Empirical density of primes in a + bZ up to t, against the sieve.
pub fn empirical_prime_density(a: i64, b: u64, t: u64, sieve: &Sieve) -> Result<EmpiricalDensity> {
    if b == 0 {
        return Err(Error::ZeroModulus);
    }
    if t < 100 {
        return Err(Error::Precondition("empirical density needs t >= 100".into()));
    }
    if sieve.limit() < t {
        return Err(Error::Precondition(format!(
            "sieve limit {} is below t = {t}",
            sieve.limit()
        )));
    }
    let target = mod_u(a, b);
    let mut count_in_class = 0u64;
    let mut count_primes = 0u64;
    for p in sieve.primes() {
        if p > t {
            break;
        }
        count_primes += 1;
        if p % b == target {
            count_in_class += 1;
        }
    }
    let log_t = BigRational::from_float((t as f64).ln())
        .ok_or_else(|| Error::InternalConsistency("log of positive t is finite".into()))?;
    let absolute = BigRational::from_integer(BigInt::from(count_in_class)) * log_t
        / BigRational::from_integer(BigInt::from(t));
    Ok(EmpiricalDensity {
        absolute,
        relative: ratio_u(count_in_class, count_primes),
        count_in_class,
        count_primes,
    })
}

/// Level-N shadow of membership in the compactification attached to a
/// family: some residue mod N must project into the minimal open
/// neighbourhood of the assigned value at every divisor of N.
///
/// This is a necessary condition for membership in general; it is exact when
/// N is a determining level for the queried divisors.
pub fn compactification_member(
    fam: &FamilySpec,
    assignment: &BTreeMap<u64, i64>,
    level: u64,
) -> Result<bool> {
    if level == 0 {
        return Err(Error::ZeroModulus);
    }
    let mut admissible = ResidueSet::full(level)?;
    for n in 1..=level {
        if level % n != 0 {
            continue;
        }
        let &x_n = assignment
            .get(&n)
            .ok_or_else(|| Error::Precondition(format!("assignment missing divisor {n}")))?;
        let t = crate::families::topology_at(fam, n)?;
        let u_n = t.min_open(mod_u(x_n, n));
        admissible.intersect_with(&u_n.pullback(level)?)?;
        if admissible.is_empty() {
            return Ok(false);
        }
    }
    Ok(!admissible.is_empty())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::format_ratio;

    #[test]
    fn crt_split_examples() {
        let x = TruncatedProfinite::new(10, 72).unwrap();
        let parts = x.crt_split();
        assert_eq!(parts.get(&2), Some(&(3, 2)));
        assert_eq!(parts.get(&3), Some(&(2, 1)));
        assert_eq!(TruncatedProfinite::crt_join(&parts).unwrap(), x);
        let z = TruncatedProfinite::new(0, 30).unwrap();
        let parts = z.crt_split();
        assert_eq!(parts.get(&2), Some(&(1, 0)));
        assert_eq!(parts.get(&3), Some(&(1, 0)));
        assert_eq!(parts.get(&5), Some(&(1, 0)));
    }

    #[test]
    fn valuation_examples() {
        let x = TruncatedProfinite::new(12, 72).unwrap();
        assert_eq!(x.valuation(2).unwrap(), Valuation::Exact(2));
        let y = TruncatedProfinite::new(8, 72).unwrap();
        assert_eq!(y.valuation(2).unwrap(), Valuation::AtLeast(3));
        let z = TruncatedProfinite::new(0, 72).unwrap();
        assert_eq!(z.valuation(3).unwrap(), Valuation::AtLeast(2));
        assert!(x.valuation(5).is_err());
    }

    #[test]
    fn bezout_examples() {
        let at = |r: u64| TruncatedProfinite::new(r, 72).unwrap();
        assert_eq!(bezout_generator(&[at(12), at(18)]).unwrap().residue(), 6);
        assert_eq!(bezout_generator(&[at(0)]).unwrap().residue(), 0);
        assert_eq!(bezout_generator(&[at(5)]).unwrap().residue(), 1);
        assert!(matches!(bezout_generator(&[]), Err(Error::EmptyInput)));
        let mixed = [at(3), TruncatedProfinite::new(3, 8).unwrap()];
        assert!(matches!(bezout_generator(&mixed), Err(Error::ModulusMismatch { .. })));
    }

    #[test]
    fn unit_coset_examples() {
        let d = unit_coset_decomposition(3, 10).unwrap();
        assert_eq!(
            d,
            vec![
                LocalCoset { p: 2, exponent: 1, residue: 1 },
                LocalCoset { p: 5, exponent: 1, residue: 3 }
            ]
        );
        let d = unit_coset_decomposition(0, 4).unwrap();
        assert_eq!(d, vec![LocalCoset { p: 2, exponent: 2, residue: 0 }]);
        assert_eq!(unit_coset_decomposition(7, 1).unwrap(), vec![]);
    }

    #[test]
    fn haar_measure_examples() {
        let coset = ClopenSet::coset(3, 10, 10).unwrap();
        assert_eq!(format_ratio(&coset.haar_measure()), "1/10");
        // the orbit set 2Zhat minus (4Zhat union 6Zhat) at level 12
        let orbit = ClopenSet::coset(0, 2, 12)
            .unwrap()
            .difference(&ClopenSet::coset(0, 4, 12).unwrap().union(&ClopenSet::coset(0, 6, 12).unwrap()).unwrap())
            .unwrap();
        assert_eq!(orbit.members().to_vec(), vec![2, 10]);
        assert_eq!(format_ratio(&orbit.haar_measure()), "1/6");
        assert_eq!(format_ratio(&ClopenSet::whole(7).unwrap().haar_measure()), "1");
    }

    #[test]
    fn haar_translation_invariance() {
        let s = ClopenSet::coset(1, 3, 12).unwrap().union(&ClopenSet::coset(0, 4, 12).unwrap()).unwrap();
        for c in [-5i64, 1, 7, 100] {
            assert_eq!(s.haar_measure(), s.translate(c).haar_measure());
        }
    }

    #[test]
    fn euler_measure_values() {
        assert_eq!(format_ratio(&euler_unit_measure(2).unwrap()), "1/2");
        assert_eq!(format_ratio(&euler_unit_measure(10).unwrap()), "8/35");
        assert!(euler_unit_measure(1).is_err());
    }

    #[test]
    fn dirichlet_examples() {
        let sieve = Sieve::new(100_000);
        let d = dirichlet_check(10, &sieve).unwrap();
        assert_eq!(d.residues, vec![1, 2, 3, 5, 7, 9]);
        assert!(d.check);
        let d = dirichlet_check(4, &sieve).unwrap();
        assert_eq!(d.residues, vec![1, 2, 3]);
        assert!(d.check);
        let d = dirichlet_check(1, &sieve).unwrap();
        assert_eq!(d.residues, vec![0]);
        assert!(d.check);
    }

    #[test]
    fn pi_measure_examples() {
        assert_eq!(format_ratio(&golomb_pi_measure(3, 10).unwrap()), "1/4");
        assert_eq!(format_ratio(&golomb_pi_measure(4, 10).unwrap()), "0");
        assert_eq!(format_ratio(&golomb_pi_measure(0, 1).unwrap()), "1");
    }

    #[test]
    fn compactification_examples() {
        let mut assignment: BTreeMap<u64, i64> = BTreeMap::new();
        for n in [1u64, 2, 3, 4, 6, 12] {
            assignment.insert(n, if n == 2 { 0 } else { 1 });
        }
        assert!(compactification_member(&FamilySpec::Kp, &assignment, 12).unwrap());
        assert!(!compactification_member(&FamilySpec::Furstenberg, &assignment, 12).unwrap());
        let mut consistent: BTreeMap<u64, i64> = BTreeMap::new();
        for n in [1u64, 2, 3, 5, 6, 10, 15, 30] {
            consistent.insert(n, 7);
        }
        for fam in [FamilySpec::Furstenberg, FamilySpec::Golomb, FamilySpec::Rizza] {
            assert!(compactification_member(&fam, &consistent, 30).unwrap());
        }
        let incomplete: BTreeMap<u64, i64> = BTreeMap::new();
        assert!(compactification_member(&FamilySpec::Kp, &incomplete, 4).is_err());
    }

    #[test]
    fn rho_truncated_examples() {
        let x = TruncatedProfinite::new(12, 72).unwrap();
        let rho = x.rho_truncated();
        assert_eq!(rho.entries.get(&2), Some(&Valuation::Exact(2)));
        assert_eq!(rho.entries.get(&3), Some(&Valuation::Exact(1)));
        let z = TruncatedProfinite::new(0, 72).unwrap();
        let rho = z.rho_truncated();
        assert_eq!(rho.entries.get(&2), Some(&Valuation::AtLeast(3)));
        assert_eq!(rho.entries.get(&3), Some(&Valuation::AtLeast(2)));
        let u = TruncatedProfinite::new(35, 72).unwrap();
        let rho = u.rho_truncated();
        assert_eq!(rho.entries.get(&2), Some(&Valuation::Exact(0)));
        assert_eq!(rho.entries.get(&3), Some(&Valuation::Exact(0)));
    }

    #[test]
    fn clopen_json_schema() {
        let s = ClopenSet::coset(3, 10, 10).unwrap();
        assert_eq!(serde_json::to_string(&s).unwrap(), r#"{"N":10,"members":[3]}"#);
        let back: ClopenSet = serde_json::from_str(r#"{"N":12,"members":[2,10]}"#).unwrap();
        assert_eq!(back.members().to_vec(), vec![2, 10]);
    }
}
