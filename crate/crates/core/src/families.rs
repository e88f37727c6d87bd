//! Named coset-topology families on Z.
//!
//! A family assigns a topology to every finite quotient Z/nZ; the topology on
//! Z is pulled back from the product. `topology_at` returns the member of the
//! *maximal* (quotient-topology) family at a level, built here from each
//! family's explicit finite-level description through the generic engine
//! (subbases, CRT transport, quotients). Closed-form openness rules for
//! cosets live in `coset_open` and never search.

use crate::arith::{factor, gcd, gcd_i, is_squarefree, mod_u, pow_mod, smallest_prime_factor, support};
use crate::error::{Error, Result};
use crate::finite_topology::{FiniteTopology, MapProperties};
use crate::residue::ResidueSet;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

/// Levels up to this bound are memoized by `topology_at`.
const CACHE_MAX_LEVEL: u64 = 512;

/// An arithmetic progression a + bZ (or a + bN when restricted to naturals).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct APSet {
    pub a: i64,
    pub b: u64,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub restrict_to_naturals: bool,
}

impl APSet {
    pub fn new(a: i64, b: u64) -> APSet {
        APSet { a, b, restrict_to_naturals: false }
    }

    /// Residues hit modulo m. A progression a + bZ meets exactly the classes
    /// congruent to a modulo gcd(b, m); restriction to N changes nothing at
    /// the level of residues.
    pub fn residues_mod(&self, m: u64) -> Result<ResidueSet> {
        if self.b == 0 {
            return Err(Error::ZeroModulus);
        }
        let g = gcd(self.b, m);
        ResidueSet::coset(m, mod_u(self.a, m) % g, g)
    }
}

/// A finite integer set or an arithmetic progression, as closure input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IntegerSet {
    Finite(Vec<i64>),
    Progression(APSet),
}

impl IntegerSet {
    pub fn residues_mod(&self, m: u64) -> Result<ResidueSet> {
        match self {
            IntegerSet::Finite(xs) => ResidueSet::from_integers(m, xs.iter().copied()),
            IntegerSet::Progression(ap) => ap.residues_mod(m),
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, IntegerSet::Finite(xs) if xs.is_empty())
    }
}

/// One explicitly given level of a custom family.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CustomLevel {
    pub n: u64,
    pub topology: FiniteTopology,
}

/// A named family of topologies on the quotients of Z.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FamilySpec {
    Furstenberg,
    Kp,
    Golomb,
    Kirch,
    Rizza,
    Szczuka,
    ZeroDivisor,
    BroughanM {
        m: u64,
    },
    Custom {
        levels: Vec<CustomLevel>,
        #[serde(rename = "L")]
        master: u64,
    },
}

impl FamilySpec {
    pub fn broughan_m(m: u64) -> Result<FamilySpec> {
        if m == 0 {
            return Err(Error::Precondition("Broughan m-topology requires m >= 1".into()));
        }
        Ok(FamilySpec::BroughanM { m })
    }

    pub fn custom(levels: Vec<CustomLevel>, master: u64) -> Result<FamilySpec> {
        if master == 0 {
            return Err(Error::ZeroModulus);
        }
        let mut seen = Vec::new();
        for lvl in &levels {
            if lvl.n == 0 || master % lvl.n != 0 {
                return Err(Error::LevelOutsideMaster { n: lvl.n, master });
            }
            if lvl.topology.modulus() != lvl.n {
                return Err(Error::ModulusMismatch { expected: lvl.n, found: lvl.topology.modulus() });
            }
            if seen.contains(&lvl.n) {
                return Err(Error::Precondition(format!("level {} listed twice", lvl.n)));
            }
            seen.push(lvl.n);
        }
        Ok(FamilySpec::Custom { levels, master })
    }

    fn validate(&self) -> Result<()> {
        match self {
            FamilySpec::BroughanM { m } if *m == 0 => {
                Err(Error::Precondition("Broughan m-topology requires m >= 1".into()))
            }
            FamilySpec::Custom { levels, master } => {
                Self::custom(levels.clone(), *master).map(|_| ())
            }
            _ => Ok(()),
        }
    }
}

type TopologyCache = RwLock<HashMap<(FamilySpec, u64), Arc<FiniteTopology>>>;

fn cache() -> &'static TopologyCache {
    static CACHE: OnceLock<TopologyCache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Golomb level at a prime power: units are a base of open points.
fn units_open_level(q: u64) -> Result<FiniteTopology> {
    let singletons: Vec<ResidueSet> = (0..q)
        .filter(|&x| gcd(x, q) == 1)
        .map(|x| ResidueSet::from_residues(q, [x]).unwrap())
        .collect();
    FiniteTopology::from_subbase(q, &singletons)
}

/// Szczuka level at a prime power: nilpotents are a base of open points.
fn nilpotents_open_level(p: u64, q: u64) -> Result<FiniteTopology> {
    let singletons: Vec<ResidueSet> = (0..q)
        .step_by(p as usize)
        .map(|x| ResidueSet::from_residues(q, [x]).unwrap())
        .collect();
    FiniteTopology::from_subbase(q, &singletons)
}

/// CRT-combine per-prime-power levels in order.
fn crt_chain(parts: Vec<FiniteTopology>) -> Result<FiniteTopology> {
    let mut iter = parts.into_iter();
    let mut acc = iter.next().ok_or(Error::EmptyInput)?;
    for t in iter {
        acc = FiniteTopology::crt_combine(&acc, &t)?;
    }
    Ok(acc)
}

fn build_maximal(fam: &FamilySpec, n: u64) -> Result<FiniteTopology> {
    if n == 0 {
        return Err(Error::ZeroModulus);
    }
    if n == 1 {
        return FiniteTopology::trivial(1);
    }
    match fam {
        FamilySpec::Furstenberg => FiniteTopology::discrete(n),
        FamilySpec::Kp => {
            let singletons: Vec<ResidueSet> = (1..n)
                .map(|x| ResidueSet::from_residues(n, [x]).unwrap())
                .collect();
            FiniteTopology::from_subbase(n, &singletons)
        }
        FamilySpec::Golomb => crt_chain(
            factor(n)
                .into_iter()
                .map(|(p, e)| units_open_level(p.pow(e)))
                .collect::<Result<Vec<_>>>()?,
        ),
        FamilySpec::Kirch => {
            // Coarsest topology making every projection to a prime level
            // continuous: the subbase is the pullback of open unit points.
            let mut sets = Vec::new();
            for p in support(n) {
                for u in 1..p {
                    sets.push(ResidueSet::coset(n, u, p)?);
                }
            }
            FiniteTopology::from_subbase(n, &sets)
        }
        FamilySpec::Rizza => {
            // Topology generated by the ideals of Z/nZ.
            let mut sets = Vec::new();
            let mut d = 1;
            while d * d <= n {
                if n % d == 0 {
                    sets.push(ResidueSet::coset(n, 0, d)?);
                    sets.push(ResidueSet::coset(n, 0, n / d)?);
                }
                d += 1;
            }
            FiniteTopology::from_subbase(n, &sets)
        }
        FamilySpec::Szczuka => crt_chain(
            factor(n)
                .into_iter()
                .map(|(p, e)| nilpotents_open_level(p, p.pow(e)))
                .collect::<Result<Vec<_>>>()?,
        ),
        FamilySpec::ZeroDivisor => {
            let singletons: Vec<ResidueSet> = (0..n)
                .filter(|&x| gcd(x, n) != 1)
                .map(|x| ResidueSet::from_residues(n, [x]).unwrap())
                .collect();
            FiniteTopology::from_subbase(n, &singletons)
        }
        FamilySpec::BroughanM { m } => crt_chain(
            factor(n)
                .into_iter()
                .map(|(p, e)| {
                    if m % p == 0 {
                        FiniteTopology::discrete(p.pow(e))
                    } else {
                        units_open_level(p.pow(e))
                    }
                })
                .collect::<Result<Vec<_>>>()?,
        ),
        FamilySpec::Custom { levels, master } => {
            if *master % n != 0 {
                return Err(Error::LevelOutsideMaster { n, master: *master });
            }
            if n == *master {
                let mut sets = Vec::new();
                for lvl in levels {
                    for x in 0..lvl.n {
                        sets.push(lvl.topology.min_open(x).pullback(*master)?);
                    }
                }
                FiniteTopology::from_subbase(*master, &sets)
            } else {
                let master_topology = topology_at(fam, *master)?;
                master_topology.quotient(n)
            }
        }
    }
}

/// The maximal-family member of `fam` at level n.
///
/// Results at small levels are memoized; the cache is safe for concurrent
/// use and duplicate fills are benign (results are deterministic).
pub fn topology_at(fam: &FamilySpec, n: u64) -> Result<Arc<FiniteTopology>> {
    fam.validate()?;
    if n <= CACHE_MAX_LEVEL {
        let key = (fam.clone(), n);
        if let Some(hit) = cache().read().expect("cache lock").get(&key) {
            return Ok(Arc::clone(hit));
        }
        let built = Arc::new(build_maximal(fam, n)?);
        cache().write().expect("cache lock").insert(key, Arc::clone(&built));
        Ok(built)
    } else {
        Ok(Arc::new(build_maximal(fam, n)?))
    }
}

/// The family's raw (non-maximalized) level topology, as defined.
pub fn raw_topology_at(fam: &FamilySpec, n: u64) -> Result<FiniteTopology> {
    fam.validate()?;
    if n == 0 {
        return Err(Error::ZeroModulus);
    }
    if n == 1 {
        return FiniteTopology::trivial(1);
    }
    let point_rule = |open: Box<dyn Fn(u64) -> bool>| -> Result<FiniteTopology> {
        let singletons: Vec<ResidueSet> = (0..n)
            .filter(|&x| open(x))
            .map(|x| ResidueSet::from_residues(n, [x]).unwrap())
            .collect();
        FiniteTopology::from_subbase(n, &singletons)
    };
    match fam {
        FamilySpec::Furstenberg => FiniteTopology::discrete(n),
        FamilySpec::Kp => point_rule(Box::new(|x| x != 0)),
        FamilySpec::Golomb => point_rule(Box::new(move |x| gcd(x, n) == 1)),
        FamilySpec::Kirch => {
            if crate::arith::is_prime(n) {
                point_rule(Box::new(|x| x != 0))
            } else {
                FiniteTopology::trivial(n)
            }
        }
        FamilySpec::Rizza => {
            FiniteTopology::from_subbase(n, &[ResidueSet::from_residues(n, [0])?])
        }
        FamilySpec::Szczuka => {
            let r = crate::arith::radical(n);
            point_rule(Box::new(move |x| x % r == 0))
        }
        FamilySpec::ZeroDivisor => point_rule(Box::new(move |x| gcd(x, n) != 1)),
        FamilySpec::BroughanM { m } => {
            let m = *m;
            point_rule(Box::new(move |x| support(gcd(x, n)).iter().all(|p| m % p == 0)))
        }
        FamilySpec::Custom { levels, .. } => match levels.iter().find(|lvl| lvl.n == n) {
            Some(lvl) => Ok(lvl.topology.clone()),
            None => FiniteTopology::trivial(n),
        },
    }
}

/// Whether the coset a + bZ is open in the family's topology on Z, by each
/// family's closed-form rule.
pub fn coset_open(fam: &FamilySpec, a: i64, b: u64) -> Result<bool> {
    fam.validate()?;
    if b == 0 {
        return Err(Error::ZeroModulus);
    }
    if b == 1 {
        return Ok(true);
    }
    Ok(match fam {
        FamilySpec::Furstenberg => true,
        FamilySpec::Kp => mod_u(a, b) != 0,
        FamilySpec::Golomb => gcd_i(a, b) == 1,
        FamilySpec::Kirch => is_squarefree(b) && gcd_i(a, b) == 1,
        FamilySpec::Rizza => mod_u(a, b) == 0,
        FamilySpec::Szczuka => {
            // supp(b) contained in supp(a); a = 0 has full support.
            a == 0 || support(b).iter().all(|&p| a.unsigned_abs() % p == 0)
        }
        FamilySpec::ZeroDivisor => gcd_i(a, b) != 1,
        FamilySpec::BroughanM { m } => support(gcd_i(a, b)).iter().all(|&p| m % p == 0),
        FamilySpec::Custom { master, .. } => {
            if *master % b == 0 {
                let t = topology_at(fam, b)?;
                let singleton = ResidueSet::from_residues(b, [mod_u(a, b)])?;
                t.is_open(&singleton)?
            } else {
                // Basic opens all live at levels dividing the master modulus,
                // so no proper coset at a foreign level can be open.
                false
            }
        }
    })
}

/// Closure of the image of `set` in the maximal level-m topology.
pub fn closure_mod(fam: &FamilySpec, set: &IntegerSet, m: u64) -> Result<ResidueSet> {
    let t = topology_at(fam, m)?;
    t.closure(&set.residues_mod(m)?)
}

pub fn dense_mod(fam: &FamilySpec, set: &IntegerSet, m: u64) -> Result<bool> {
    Ok(closure_mod(fam, set, m)?.is_full())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BrownConditions {
    pub b1: bool,
    pub b2: bool,
    pub core_n: ResidueSet,
    pub core_nk: ResidueSet,
}

/// Brown-type conditions for the projection from level n*k onto level n:
/// B1 = the projection is open, B2 = it maps the indiscrete core onto the
/// indiscrete core.
pub fn brown_conditions(fam: &FamilySpec, n: u64, k: u64) -> Result<BrownConditions> {
    if n == 0 || k == 0 {
        return Err(Error::ZeroModulus);
    }
    let nk = n.checked_mul(k).ok_or(Error::ModulusTooLarge {
        n: u64::MAX,
        max: crate::residue::MAX_MODULUS,
    })?;
    let t_n = topology_at(fam, n)?;
    let t_nk = topology_at(fam, nk)?;
    let core_n = t_n.indiscrete_core();
    let core_nk = t_nk.indiscrete_core();
    let props: MapProperties = t_nk.map_properties(&t_n)?;
    let b2 = core_nk.project(n)? == core_n;
    Ok(BrownConditions { b1: props.open, b2, core_n, core_nk })
}

/// Search for a set A in Z/nZ whose preimage is open in the topology the raw
/// family generates on Z although A is not open in the raw level-n topology.
///
/// Levels n, 2n, ... up to `level_bound` are inspected; `None` means no
/// witness up to the bound, never a maximality certificate.
pub fn nonmaximality_witness(
    fam: &FamilySpec,
    n: u64,
    level_bound: u64,
) -> Result<Option<ResidueSet>> {
    if n == 0 {
        return Err(Error::ZeroModulus);
    }
    if level_bound < n {
        return Err(Error::LevelExceeded { requested: n, max: level_bound });
    }
    let raw_n = raw_topology_at(fam, n)?;
    let mut m = n;
    while m <= level_bound {
        // Topology generated at level m by all raw levels dividing m.
        let mut sets = Vec::new();
        for d in 1..=m {
            if m % d != 0 {
                continue;
            }
            let raw_d = raw_topology_at(fam, d)?;
            for x in 0..d {
                sets.push(raw_d.min_open(x).pullback(m)?);
            }
        }
        let generated = FiniteTopology::from_subbase(m, &sets)?;
        let quotient = generated.quotient(n)?;
        for x in 0..n {
            let candidate = quotient.min_open(x);
            if !raw_n.is_open(candidate)? {
                return Ok(Some(candidate.clone()));
            }
        }
        m += n;
    }
    Ok(None)
}

/// Configuration for `zd_separation_witness`.
#[derive(Debug, Clone, Copy)]
pub struct ZdConfig {
    /// Largest n for which the factorial level n! may be used.
    pub max_factorial: u32,
    /// Integers in [-bound, bound] are checked against the cover.
    pub coverage_bound: i64,
}

impl Default for ZdConfig {
    fn default() -> Self {
        ZdConfig { max_factorial: 9, coverage_bound: 200 }
    }
}

/// The piece of the open cover V containing a given integer: a zero-divisor
/// class at level k! whose image at the base level avoids the excluded class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZdPiece {
    /// k, the piece living at level k! (not materialized; k can be large).
    pub factorial_base: u32,
    /// The class of the covered integer at the base level n!.
    pub class_mod_level: u64,
    /// A prime dividing both the integer and k!, so its class at level k!
    /// is a zero-divisor.
    pub witness_prime: u64,
}

/// Verified separation data for two integers in the zero-divisor topology.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZdSeparation {
    /// n, with the separation happening at level n!.
    pub base: u32,
    /// n! itself.
    pub level: u64,
    /// U = a + n! Z.
    pub u: APSet,
    /// The class of a modulo n!, excluded from every V piece.
    pub excluded_class: u64,
    /// Whether the class of a is itself a zero-divisor class (the proof's
    /// stronger form). U is open in either case since a is not +-1 mod n!.
    pub u_center_zero_divisor: bool,
    /// The V piece containing b.
    pub b_piece: ZdPiece,
    /// Disjointness/coverage verified for all integers in [-bound, bound].
    pub coverage_bound: i64,
}

fn factorial(n: u32) -> Option<u64> {
    (2..=n as u64).try_fold(1u64, |acc, k| acc.checked_mul(k))
}

/// V-piece certificate for an integer x not congruent to the excluded class:
/// the level k! at which x's class consists of zero-divisors.
fn zd_piece_for(x: i64, base: u32, level: u64, excluded: u64) -> Result<ZdPiece> {
    if x == 1 || x == -1 {
        return Err(Error::Precondition("units +-1 are outside the separated space".into()));
    }
    if mod_u(x, level) == excluded {
        return Err(Error::InternalConsistency(format!("{x} lies in U, not V")));
    }
    let (k, witness_prime) = if x == 0 {
        (base, 2)
    } else {
        let p = smallest_prime_factor(x.unsigned_abs()).expect("|x| >= 2");
        (base.max(p as u32), p)
    };
    Ok(ZdPiece { factorial_base: k, class_mod_level: mod_u(x, level), witness_prime })
}

/// Separation of a and b (both outside {-1, 1}) by disjoint open sets in the
/// zero-divisor topology, at a factorial level.
///
/// The level follows the textbook choice n = |a|+|b|+1 whenever that fits
/// `max_factorial`; otherwise the smallest workable factorial level is used.
pub fn zd_separation_witness(a: i64, b: i64, config: &ZdConfig) -> Result<ZdSeparation> {
    if a == b {
        return Err(Error::Precondition("inputs must be distinct".into()));
    }
    for x in [a, b] {
        if x == 1 || x == -1 {
            return Err(Error::Precondition("inputs must avoid the units -1 and 1".into()));
        }
    }
    let sum = a.unsigned_abs().saturating_add(b.unsigned_abs());
    let usable = |n: u32| -> Option<u64> {
        let level = factorial(n)?;
        // distinct classes, and a away from the classes of the units
        let ok = mod_u(a, level) != mod_u(b, level)
            && mod_u(a, level) != mod_u(1, level)
            && mod_u(a, level) != mod_u(-1, level)
            && mod_u(b, level) != mod_u(1, level)
            && mod_u(b, level) != mod_u(-1, level);
        ok.then_some(level)
    };
    let paper_n = sum.checked_add(1).filter(|&s| s <= config.max_factorial as u64).map(|s| s as u32);
    let (base, level) = match paper_n.and_then(|n| usable(n).map(|l| (n, l))) {
        Some(found) => found,
        None => (2..=config.max_factorial)
            .find_map(|n| usable(n).map(|l| (n, l)))
            .ok_or(Error::LevelExceeded {
                requested: sum.saturating_add(1),
                max: config.max_factorial as u64,
            })?,
    };
    let excluded_class = mod_u(a, level);
    let b_piece = zd_piece_for(b, base, level, excluded_class)?;
    // Coverage and disjointness over a window of integers: everything except
    // the units falls in exactly one of U and V.
    for x in -config.coverage_bound..=config.coverage_bound {
        if x == 1 || x == -1 {
            continue;
        }
        if mod_u(x, level) == excluded_class {
            continue; // x in U
        }
        let piece = zd_piece_for(x, base, level, excluded_class)?;
        // piece avoids U: classes differ at level n!, which divides k!.
        if piece.class_mod_level == excluded_class {
            return Err(Error::InternalConsistency(format!("piece for {x} meets U")));
        }
        if x != 0 && x.unsigned_abs() % piece.witness_prime != 0 {
            return Err(Error::InternalConsistency(format!("bad witness prime for {x}")));
        }
    }
    Ok(ZdSeparation {
        base,
        level,
        u: APSet::new(a, level),
        excluded_class,
        u_center_zero_divisor: gcd_i(a, level) != 1,
        b_piece,
        coverage_bound: config.coverage_bound,
    })
}

/// (2 + 2^(5^k)) * (3 + 3^(5^k)) mod 5, by modular exponentiation.
///
/// Constant at 4 for every k, which is why multiplication fails to be
/// continuous for the Broughan assignment sending 2, 3, 6 to the monoids
/// generated by 2, 3, 5.
pub fn broughan_product_mod5(k: u32) -> u64 {
    let exp = 5u64.pow(k);
    let left = (2 + pow_mod(2, exp, 5)) % 5;
    let right = (3 + pow_mod(3, exp, 5)) % 5;
    left * right % 5
}
