//! General Golomb systems: per-prime base sets generating cores B_n at every
//! level, Kirch coarsenings, openness, Hausdorff witnesses, duality and the
//! superconnected/totally-separated dichotomy.

use crate::arith::{checked_lcm, factor, is_prime, mod_u, prime_index, valuation};
use crate::error::{Error, Result};
use crate::finite_topology::FiniteTopology;
use crate::families::APSet;
use crate::residue::{ResidueSet, MAX_MODULUS};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::{BTreeMap, HashMap};
use std::sync::{OnceLock, RwLock};

/// Parity of the 1-based index of a prime, memoized (the sqrt-interval rule
/// consults it for every prime it touches).
fn odd_indexed(p: u64) -> Result<bool> {
    static CACHE: OnceLock<RwLock<HashMap<u64, bool>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(&hit) = cache.read().expect("parity lock").get(&p) {
        return Ok(hit);
    }
    let parity = prime_index(p)? % 2 == 1;
    cache.write().expect("parity lock").insert(p, parity);
    Ok(parity)
}

/// Default per-prime rule for the base sets B_p (all have gamma = 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DefaultRule {
    /// B_p = {0}: cores are the nilpotents (Golomb/Kirch shape).
    Zero,
    /// B_p = (Z/pZ)^*: cores are the units (Szczuka shape).
    Units,
    /// B_p alternates between the interval set X_p and its complement Y_p
    /// by the parity of the index of p (odd-indexed primes take X_p).
    SqrtInterval,
    /// Complement of `SqrtInterval` at every prime.
    Complement,
}

/// Override of the base set at a single prime.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PrimeOverride {
    pub p: u64,
    pub gamma: u32,
    /// Base set at level p^gamma (at level 1 for gamma = 0, necessarily full).
    pub base: ResidueSet,
}

/// A Golomb system: per-prime base sets B_{p^gamma(p)}, described by a
/// default rule plus finitely many overrides.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GolombSystemSpec {
    pub default_rule: DefaultRule,
    overrides: Vec<PrimeOverride>,
}

/// Interval set X_p: residues with a representative x, |x| <= sqrt(p) - 1.
fn interval_set(p: u64) -> ResidueSet {
    let mut s = ResidueSet::empty(p).expect("prime modulus");
    let mut x = 0u64;
    while (x + 1) * (x + 1) <= p {
        s.insert(x % p);
        s.insert((p - x % p) % p);
        x += 1;
    }
    s
}

impl GolombSystemSpec {
    pub fn new(default_rule: DefaultRule, mut overrides: Vec<PrimeOverride>) -> Result<Self> {
        overrides.sort_by_key(|o| o.p);
        for w in overrides.windows(2) {
            if w[0].p == w[1].p {
                return Err(Error::Precondition(format!("duplicate override at prime {}", w[0].p)));
            }
        }
        for o in &overrides {
            if !is_prime(o.p) {
                return Err(Error::Precondition(format!("override key {} is not prime", o.p)));
            }
            let level = o.p.checked_pow(o.gamma).ok_or(Error::Overflow)?;
            if o.base.modulus() != level {
                return Err(Error::ModulusMismatch { expected: level, found: o.base.modulus() });
            }
            if o.gamma >= 1 && (o.base.is_empty() || o.base.is_full()) {
                return Err(Error::Precondition(format!(
                    "base at {} must be nonempty and proper",
                    o.p
                )));
            }
            if o.gamma >= 2 {
                // canonical gamma: the base must not be the full preimage of
                // its own projection one level down
                let down = o.base.project(level / o.p)?;
                if down.pullback(level)? == o.base {
                    return Err(Error::Precondition(format!(
                        "gamma {} at prime {} is not canonical",
                        o.gamma, o.p
                    )));
                }
            }
        }
        Ok(GolombSystemSpec { default_rule, overrides })
    }

    pub fn zero_class() -> Self {
        GolombSystemSpec { default_rule: DefaultRule::Zero, overrides: Vec::new() }
    }

    pub fn units() -> Self {
        GolombSystemSpec { default_rule: DefaultRule::Units, overrides: Vec::new() }
    }

    pub fn sqrt_interval() -> Self {
        GolombSystemSpec { default_rule: DefaultRule::SqrtInterval, overrides: Vec::new() }
    }

    pub fn overrides(&self) -> &[PrimeOverride] {
        &self.overrides
    }

    pub fn gamma(&self, p: u64) -> u32 {
        self.overrides.iter().find(|o| o.p == p).map(|o| o.gamma).unwrap_or(1)
    }

    /// The base set B_{p^gamma(p)}.
    pub fn base_at(&self, p: u64) -> Result<ResidueSet> {
        if let Some(o) = self.overrides.iter().find(|o| o.p == p) {
            return Ok(o.base.clone());
        }
        if !is_prime(p) {
            return Err(Error::Precondition(format!("{p} is not prime")));
        }
        Ok(match self.default_rule {
            DefaultRule::Zero => ResidueSet::from_residues(p, [0])?,
            DefaultRule::Units => ResidueSet::from_residues(p, [0])?.complement(),
            DefaultRule::SqrtInterval | DefaultRule::Complement => {
                let x_p = interval_set(p);
                let takes_interval = match self.default_rule {
                    DefaultRule::SqrtInterval => odd_indexed(p)?,
                    _ => !odd_indexed(p)?,
                };
                if takes_interval {
                    x_p
                } else {
                    x_p.complement()
                }
            }
        })
    }

    /// Membership of a residue class in B_{p^r}. For r >= gamma the core is
    /// the preimage of the base; for r < gamma it is the projection.
    pub fn in_core_prime_power(&self, p: u64, r: u32, a: i64) -> Result<bool> {
        let (dec, set) = self.core_decision_set(p, r)?;
        Ok(set.contains(mod_u(a, dec)))
    }

    /// Core membership at level p^r only depends on the reduction to the
    /// decision level p^min(r, gamma); this returns that level and the
    /// membership set there. dec = 1 with a full set means "everything".
    pub fn core_decision_set(&self, p: u64, r: u32) -> Result<(u64, ResidueSet)> {
        let gamma = self.gamma(p);
        if gamma == 0 || r == 0 {
            return Ok((1, ResidueSet::full(1)?));
        }
        let base = self.base_at(p)?;
        if r >= gamma {
            Ok((p.checked_pow(gamma).ok_or(Error::Overflow)?, base))
        } else {
            let dec = p.checked_pow(r).ok_or(Error::Overflow)?;
            let projected = base.project(dec)?;
            Ok((dec, projected))
        }
    }

    /// Whether all gamma values are <= 1 (overrides may set 0 or higher).
    fn max_gamma(&self) -> u32 {
        self.overrides.iter().map(|o| o.gamma).max().unwrap_or(1).max(1)
    }
}

/// Core B_n: residues whose image at every prime-power part of n lies in the
/// corresponding core.
pub fn core_at(spec: &GolombSystemSpec, n: u64) -> Result<ResidueSet> {
    if n == 0 {
        return Err(Error::ZeroModulus);
    }
    if n > MAX_MODULUS {
        return Err(Error::ModulusTooLarge { n, max: MAX_MODULUS });
    }
    let mut core = ResidueSet::full(n)?;
    for (p, e) in factor(n) {
        let (dec, local) = spec.core_decision_set(p, e)?;
        if dec > 1 {
            core.intersect_with(&local.pullback(n)?)?;
        }
    }
    Ok(core)
}

/// n in G_a: every prime-power part of n avoids the core at a.
pub fn in_g_a(spec: &GolombSystemSpec, a: i64, n: u64) -> Result<bool> {
    if n == 0 {
        return Err(Error::ZeroModulus);
    }
    if n == 1 {
        return Ok(true);
    }
    for (p, e) in factor(n) {
        if spec.in_core_prime_power(p, e, a)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Per-prime exponent cap kappa.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kappa {
    Finite(u32),
    Infinite,
}

impl Kappa {
    pub fn at_least(self, r: u32) -> bool {
        match self {
            Kappa::Finite(k) => k >= r,
            Kappa::Infinite => true,
        }
    }

    pub fn min_with(self, r: u32) -> u32 {
        match self {
            Kappa::Finite(k) => k.min(r),
            Kappa::Infinite => r,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct KirchFunction {
    pub default: Kappa,
    pub overrides: BTreeMap<u64, Kappa>,
}

impl KirchFunction {
    /// kappa identically infinity: the finest topology of the system.
    pub fn golomb() -> Self {
        KirchFunction { default: Kappa::Infinite, overrides: BTreeMap::new() }
    }

    /// kappa identically 1 (Kirch's choice).
    pub fn kirch() -> Self {
        KirchFunction { default: Kappa::Finite(1), overrides: BTreeMap::new() }
    }

    pub fn constant(k: u32) -> Self {
        KirchFunction { default: Kappa::Finite(k), overrides: BTreeMap::new() }
    }

    /// Effective value at p: gamma(p) = 0 forces 0.
    pub fn at(&self, spec: &GolombSystemSpec, p: u64) -> Kappa {
        if spec.gamma(p) == 0 {
            return Kappa::Finite(0);
        }
        self.overrides.get(&p).copied().unwrap_or(self.default)
    }

    /// kappa(p) >= gamma(p) must hold wherever gamma(p) >= 1.
    pub fn validate(&self, spec: &GolombSystemSpec) -> Result<()> {
        let need = |p: u64, gamma: u32, k: Kappa| -> Result<()> {
            if gamma >= 1 && !k.at_least(gamma) {
                return Err(Error::Precondition(format!(
                    "kappa({p}) must be at least gamma({p}) = {gamma}"
                )));
            }
            Ok(())
        };
        for o in spec.overrides() {
            let k = self.overrides.get(&o.p).copied().unwrap_or(self.default);
            need(o.p, o.gamma, k)?;
        }
        for (&p, &k) in &self.overrides {
            need(p, spec.gamma(p), k)?;
        }
        if !self.default.at_least(spec.max_gamma().min(1)) {
            return Err(Error::Precondition(
                "default kappa must cover the default gamma = 1".into(),
            ));
        }
        Ok(())
    }

    pub fn is_locally_connected(&self) -> bool {
        self.default != Kappa::Infinite && self.overrides.values().all(|k| *k != Kappa::Infinite)
    }
}

/// Local connectedness of the topology attached to kappa.
pub fn locally_connected(kappa: &KirchFunction) -> bool {
    kappa.is_locally_connected()
}

/// Openness of a + nZ: n must lie in G_{a,kappa}.
pub fn coset_open(spec: &GolombSystemSpec, kappa: &KirchFunction, a: i64, n: u64) -> Result<bool> {
    kappa.validate(spec)?;
    if n == 0 {
        return Err(Error::ZeroModulus);
    }
    if n == 1 {
        return Ok(true);
    }
    for (p, e) in factor(n) {
        if !kappa.at(spec, p).at_least(e) {
            return Ok(false);
        }
        if spec.in_core_prime_power(p, e, a)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Maximal-family member of the topology of (spec, kappa) at level n.
///
/// The minimal open set of x is the coset pinned, at each prime p | n, to
/// level p^min(v_p(n), kappa(p)) exactly when x avoids the core there.
pub fn topology_at(
    spec: &GolombSystemSpec,
    kappa: &KirchFunction,
    n: u64,
) -> Result<FiniteTopology> {
    kappa.validate(spec)?;
    if n == 0 {
        return Err(Error::ZeroModulus);
    }
    if n == 1 {
        return FiniteTopology::trivial(1);
    }
    let mut parts = Vec::new();
    for (p, e) in factor(n) {
        let r = kappa.at(spec, p).min_with(e);
        if r > 0 {
            let (dec, set) = spec.core_decision_set(p, r)?;
            parts.push((p.pow(r), dec, set));
        }
    }
    let mut moduli = Vec::with_capacity(n as usize);
    for x in 0..n {
        let mut m = 1u64;
        for (pin, dec, set) in &parts {
            if !set.contains(x % dec) {
                m *= pin;
            }
        }
        moduli.push(m);
    }
    FiniteTopology::from_coset_moduli(n, &moduli)
}

/// Least (p, r), ordered by p then r, separating a and b by cosets that are
/// open in the system: distinct classes mod p^r, both outside B_{p^r}.
pub fn hausdorff_witness(
    spec: &GolombSystemSpec,
    kappa: &KirchFunction,
    a: i64,
    b: i64,
    prime_bound: u64,
) -> Result<Option<(u64, u32)>> {
    kappa.validate(spec)?;
    if a == b {
        return Err(Error::Precondition("hausdorff witness requires distinct integers".into()));
    }
    let diff = a.abs_diff(b);
    let mut p = 2u64;
    while p <= prime_bound {
        if is_prime(p) {
            let gamma = spec.gamma(p);
            if gamma >= 1 {
                // distinctness first appears at exponent v_p(a - b) + 1
                let v = valuation(diff, p).expect("a != b");
                let r = gamma.max(v + 1);
                if kappa.at(spec, p).at_least(r)
                    && !spec.in_core_prime_power(p, r, a)?
                    && !spec.in_core_prime_power(p, r, b)?
                {
                    return Ok(Some((p, r)));
                }
            }
        }
        p += 1;
    }
    Ok(None)
}

/// The dual system: complement every base set. Defined for gamma <= 1.
pub fn dual(spec: &GolombSystemSpec) -> Result<GolombSystemSpec> {
    let default_rule = match spec.default_rule {
        DefaultRule::Zero => DefaultRule::Units,
        DefaultRule::Units => DefaultRule::Zero,
        DefaultRule::SqrtInterval => DefaultRule::Complement,
        DefaultRule::Complement => DefaultRule::SqrtInterval,
    };
    let mut overrides = Vec::new();
    for o in spec.overrides() {
        match o.gamma {
            0 => overrides.push(o.clone()),
            1 => overrides.push(PrimeOverride {
                p: o.p,
                gamma: 1,
                base: o.base.complement(),
            }),
            g => return Err(Error::DualityUnsupported { p: o.p, gamma: g }),
        }
    }
    GolombSystemSpec::new(default_rule, overrides)
}

/// The dichotomy for cosets: superconnected iff the class lies in the core.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum CosetClass {
    Superconnected { modulus: u64, residue: u64 },
    TotallySeparated { prime: u64, exponent: u32 },
}

pub fn classify_coset(spec: &GolombSystemSpec, a: i64, n: u64) -> Result<CosetClass> {
    if n == 0 {
        return Err(Error::ZeroModulus);
    }
    for (p, e) in factor(n) {
        if !spec.in_core_prime_power(p, e, a)? {
            return Ok(CosetClass::TotallySeparated { prime: p, exponent: e });
        }
    }
    Ok(CosetClass::Superconnected { modulus: n, residue: mod_u(a, n) })
}

/// For a core class a + nZ and finitely many open cosets meeting it, produce
/// b = a (mod n) lying in the core at the combined level m, hence in the
/// level-m closure shadow of each listed open set.
pub fn superconnect_witness(
    spec: &GolombSystemSpec,
    kappa: &KirchFunction,
    a: i64,
    n: u64,
    opens: &[APSet],
) -> Result<i64> {
    kappa.validate(spec)?;
    if n == 0 {
        return Err(Error::ZeroModulus);
    }
    if !matches!(classify_coset(spec, a, n)?, CosetClass::Superconnected { .. }) {
        return Err(Error::Precondition(format!("class of {a} mod {n} is not in the core")));
    }
    let mut open_lcm = 1u64;
    for o in opens {
        if !coset_open(spec, kappa, o.a, o.b)? {
            return Err(Error::Precondition(format!("{} + {}Z is not open", o.a, o.b)));
        }
        let g = crate::arith::gcd(n, o.b);
        if mod_u(a, g) != mod_u(o.a, g) {
            return Err(Error::Precondition(format!(
                "{} + {}Z does not meet {a} + {n}Z",
                o.a, o.b
            )));
        }
        open_lcm = checked_lcm(open_lcm, o.b).ok_or(Error::Overflow)?;
    }
    let m = n
        .checked_mul(open_lcm)
        .filter(|&v| v <= MAX_MODULUS)
        .ok_or(Error::ModulusTooLarge { n: u64::MAX, max: MAX_MODULUS })?;
    let core_m = core_at(spec, m)?;
    let mut b = mod_u(a, n);
    let found = loop {
        if b >= m {
            break None;
        }
        if core_m.contains(b) {
            break Some(b);
        }
        b += n;
    };
    let b = found.ok_or_else(|| {
        Error::InternalConsistency(format!("core at {m} misses the class of {a} mod {n}"))
    })?;
    // verify the closure claim: the minimal open coset of b at level m meets
    // every listed open set
    let mut pinned = 1u64;
    for (p, e) in factor(m) {
        let r = kappa.at(spec, p).min_with(e);
        if r > 0 && !spec.in_core_prime_power(p, r, b as i64)? {
            pinned *= p.pow(r);
        }
    }
    for o in opens {
        let g = crate::arith::gcd(pinned, o.b);
        if mod_u(b as i64, g) != mod_u(o.a, g) {
            return Err(Error::InternalConsistency(format!(
                "witness {b} is not in the closure of {} + {}Z at level {m}",
                o.a, o.b
            )));
        }
    }
    Ok(b as i64)
}

/// A disjoint open cover of a + nZ (with the p-part of n raised to where a
/// first leaves the core) by p open cosets one exponent deeper.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DisconnectCover {
    pub prime: u64,
    /// The covered coset a + n'Z.
    pub covered: APSet,
    /// p disjoint open cosets of p*n' Z partitioning the covered coset.
    pub pieces: Vec<APSet>,
}

/// sigma_a(p): least r with the class of a outside B_{p^r}; None when a lies
/// in the core at every level of p.
fn sigma_a(spec: &GolombSystemSpec, a: i64, p: u64) -> Result<Option<u32>> {
    let gamma = spec.gamma(p);
    if gamma == 0 {
        return Ok(None);
    }
    for r in 1..=gamma {
        if !spec.in_core_prime_power(p, r, a)? {
            return Ok(Some(r));
        }
    }
    Ok(None)
}

pub fn disconnect_cover(
    spec: &GolombSystemSpec,
    kappa: &KirchFunction,
    a: i64,
    n: u64,
) -> Result<DisconnectCover> {
    kappa.validate(spec)?;
    if n == 0 {
        return Err(Error::ZeroModulus);
    }
    let n_parts = factor(n);
    // candidate splitting primes: divisors of n and of a, override primes,
    // small primes
    let mut candidates: Vec<u64> = n_parts.iter().map(|&(p, _)| p).collect();
    for o in spec.overrides() {
        candidates.push(o.p);
    }
    if a != 0 {
        candidates.extend(factor(a.unsigned_abs()).into_iter().map(|(p, _)| p));
    }
    let mut q = 2;
    while q <= 97 {
        if is_prime(q) {
            candidates.push(q);
        }
        q += 1;
    }
    candidates.sort_unstable();
    candidates.dedup();
    'candidate: for p in candidates {
        let Some(sigma) = sigma_a(spec, a, p)? else { continue };
        let v = n_parts.iter().find(|&&(q, _)| q == p).map(|&(_, e)| e).unwrap_or(0);
        let e = v.max(sigma);
        if !kappa.at(spec, p).at_least(e + 1) {
            continue;
        }
        // the pieces are cosets of p^{e+1} * (n with p removed); they are
        // open only if every other prime of n already sits outside its core
        for &(q, eq) in &n_parts {
            if q != p && (spec.in_core_prime_power(q, eq, a)? || !kappa.at(spec, q).at_least(eq)) {
                continue 'candidate;
            }
        }
        let lifted = n
            .checked_mul(p.checked_pow(e - v).ok_or(Error::Overflow)?)
            .ok_or(Error::Overflow)?;
        let piece_mod = lifted.checked_mul(p).ok_or(Error::Overflow)?;
        let mut pieces = Vec::with_capacity(p as usize);
        for i in 0..p {
            let shift = (i as i64).checked_mul(lifted as i64).ok_or(Error::Overflow)?;
            let start = a.checked_add(shift).ok_or(Error::Overflow)?;
            if !coset_open(spec, kappa, start, piece_mod)? {
                return Err(Error::InternalConsistency(format!(
                    "piece {start} + {piece_mod}Z is not open"
                )));
            }
            pieces.push(APSet::new(start, piece_mod));
        }
        // pieces partition the covered coset: same modulus, classes
        // a + i*lifted are pairwise distinct mod p*lifted
        for (i, x) in pieces.iter().enumerate() {
            for y in &pieces[i + 1..] {
                if mod_u(x.a, piece_mod) == mod_u(y.a, piece_mod) {
                    return Err(Error::InternalConsistency("pieces are not disjoint".into()));
                }
            }
        }
        return Ok(DisconnectCover { prime: p, covered: APSet::new(a, lifted), pieces });
    }
    Err(Error::NoSplittingPrime)
}

/// Level-N shadow of the closed set B inside the profinite completion;
/// equals the core at N and is verified against the product of prime-power
/// cores.
pub fn core_closed_set_truncated(spec: &GolombSystemSpec, level: u64) -> Result<ResidueSet> {
    let core = core_at(spec, level)?;
    if level > 1 {
        let mut product = ResidueSet::full(level)?;
        for (p, e) in factor(level) {
            let q = p.pow(e);
            let (dec, set) = spec.core_decision_set(p, e)?;
            let mut local = ResidueSet::empty(q)?;
            for x in 0..q {
                if set.contains(x % dec) {
                    local.insert(x);
                }
            }
            product.intersect_with(&local.pullback(level)?)?;
        }
        if product != core {
            return Err(Error::InternalConsistency(
                "core does not factor through prime powers".into(),
            ));
        }
    }
    Ok(core)
}

// ---------------------------------------------------------------------------
// serde: {"default": "...", "overrides": [{"p":, "gamma":, "B": [...]}]}
// and kappa {"default": int|"inf", "overrides": {"p": int|"inf"}}

#[derive(Serialize, Deserialize)]
struct OverrideRepr {
    p: u64,
    gamma: u32,
    #[serde(rename = "B")]
    base: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct SpecRepr {
    default: DefaultRule,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    overrides: Vec<OverrideRepr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    kappa: Option<KirchFunction>,
}

impl Serialize for GolombSystemSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        SpecRepr {
            default: self.default_rule,
            overrides: self
                .overrides
                .iter()
                .map(|o| OverrideRepr { p: o.p, gamma: o.gamma, base: o.base.to_vec() })
                .collect(),
            kappa: None,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for GolombSystemSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = SpecRepr::deserialize(deserializer)?;
        spec_from_repr(repr).map(|(spec, _)| spec).map_err(D::Error::custom)
    }
}

fn spec_from_repr(repr: SpecRepr) -> Result<(GolombSystemSpec, Option<KirchFunction>)> {
    let overrides = repr
        .overrides
        .into_iter()
        .map(|o| {
            let level = o.p.checked_pow(o.gamma).ok_or(Error::Overflow)?;
            Ok(PrimeOverride {
                p: o.p,
                gamma: o.gamma,
                base: ResidueSet::from_residues(level, o.base)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((GolombSystemSpec::new(repr.default, overrides)?, repr.kappa))
}

/// Parse a combined spec file: the system plus an optional embedded kappa.
pub fn parse_spec_with_kappa(json: &str) -> Result<(GolombSystemSpec, Option<KirchFunction>)> {
    let repr: SpecRepr =
        serde_json::from_str(json).map_err(|e| Error::Parse(format!("golomb spec: {e}")))?;
    spec_from_repr(repr)
}

impl Serialize for Kappa {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Kappa::Finite(k) => serializer.serialize_u32(*k),
            Kappa::Infinite => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Kappa {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(u32),
            Word(String),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Num(k) => Ok(Kappa::Finite(k)),
            Repr::Word(w) if w == "inf" => Ok(Kappa::Infinite),
            Repr::Word(w) => Err(D::Error::custom(format!("expected integer or \"inf\", got {w:?}"))),
        }
    }
}

impl Serialize for KirchFunction {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            default: &'a Kappa,
            #[serde(skip_serializing_if = "BTreeMap::is_empty")]
            overrides: &'a BTreeMap<u64, Kappa>,
        }
        Repr { default: &self.default, overrides: &self.overrides }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for KirchFunction {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            default: Kappa,
            #[serde(default)]
            overrides: BTreeMap<u64, Kappa>,
        }
        let r = Repr::deserialize(deserializer)?;
        Ok(KirchFunction { default: r.default, overrides: r.overrides })
    }
}
