//! Shared test oracles, independent of the library's computation paths.
//!
//! The subbase oracle enumerates whole open-set families by powerset
//! closure; the openness oracle decides whether a coset is open at a
//! saturation level directly from the minimal-open-box description of the
//! maximal family, never through the closed-form coset rule it is used to
//! check.

#![allow(dead_code)]

use pcl_core::arith::{factor, mod_u, valuation};
use pcl_core::golomb::{GolombSystemSpec, Kappa, KirchFunction, PrimeOverride};
use pcl_core::residue::ResidueSet;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// All open sets generated by a subbase, as bitmasks; n <= 20.
///
/// Starts from the subbase together with the empty and full sets and closes
/// under pairwise union and intersection by fixpoint iteration.
pub fn opens_from_subbase(n: u64, subbase: &[u64]) -> Vec<u64> {
    assert!(n <= 20);
    let full: u64 = if n == 64 { u64::MAX } else { (1 << n) - 1 };
    let mut opens: Vec<u64> = vec![0, full];
    for &s in subbase {
        if !opens.contains(&s) {
            opens.push(s);
        }
    }
    loop {
        let mut grew = false;
        let snapshot = opens.clone();
        for (i, &a) in snapshot.iter().enumerate() {
            for &b in &snapshot[i + 1..] {
                for candidate in [a | b, a & b] {
                    if !opens.contains(&candidate) {
                        opens.push(candidate);
                        grew = true;
                    }
                }
            }
        }
        if !grew {
            return opens;
        }
    }
}

/// Minimal open set containing x, from an explicit opens family.
pub fn min_open_from_opens(opens: &[u64], x: u64) -> u64 {
    opens
        .iter()
        .filter(|&&o| o >> x & 1 == 1)
        .fold(u64::MAX, |acc, &o| acc & o)
}

pub fn mask_of(set: &ResidueSet) -> u64 {
    assert!(set.modulus() <= 64);
    set.iter().fold(0u64, |acc, x| acc | 1 << x)
}

/// A random topology on Z/nZ via a random subbase; n <= 20.
pub fn random_topology(rng: &mut ChaCha8Rng, n: u64) -> pcl_core::finite_topology::FiniteTopology {
    let k = rng.gen_range(0..=4usize);
    let sets: Vec<ResidueSet> = (0..k)
        .map(|_| {
            let mask: u64 = rng.gen_range(0..(1u64 << n));
            ResidueSet::from_residues(n, (0..n).filter(|&x| mask >> x & 1 == 1)).unwrap()
        })
        .collect();
    pcl_core::finite_topology::FiniteTopology::from_subbase(n, &sets).unwrap()
}

/// A random Golomb system over override primes <= 13, with canonical gammas.
pub fn random_system(rng: &mut ChaCha8Rng) -> GolombSystemSpec {
    use pcl_core::golomb::DefaultRule;
    let default_rule = match rng.gen_range(0..4u8) {
        0 => DefaultRule::Zero,
        1 => DefaultRule::Units,
        2 => DefaultRule::SqrtInterval,
        _ => DefaultRule::Complement,
    };
    let mut overrides = Vec::new();
    let mut primes: Vec<u64> = vec![2, 3, 5, 7, 11, 13];
    primes.shuffle(rng);
    for &p in primes.iter().take(rng.gen_range(0..=3usize)) {
        let gamma = *[0u32, 1, 1, 2].choose(rng).unwrap();
        let base = random_base(rng, p, gamma);
        overrides.push(PrimeOverride { p, gamma, base });
    }
    GolombSystemSpec::new(default_rule, overrides).expect("generated overrides are valid")
}

/// A random gamma = 1 system (every base a proper nonempty subset mod p).
pub fn random_gamma1_system(rng: &mut ChaCha8Rng) -> GolombSystemSpec {
    use pcl_core::golomb::DefaultRule;
    let default_rule = match rng.gen_range(0..4u8) {
        0 => DefaultRule::Zero,
        1 => DefaultRule::Units,
        2 => DefaultRule::SqrtInterval,
        _ => DefaultRule::Complement,
    };
    let mut overrides = Vec::new();
    let mut primes: Vec<u64> = vec![2, 3, 5, 7, 11, 13];
    primes.shuffle(rng);
    for &p in primes.iter().take(rng.gen_range(0..=3usize)) {
        overrides.push(PrimeOverride { p, gamma: 1, base: random_base(rng, p, 1) });
    }
    GolombSystemSpec::new(default_rule, overrides).expect("gamma-1 overrides are valid")
}

fn random_base(rng: &mut ChaCha8Rng, p: u64, gamma: u32) -> ResidueSet {
    let level = p.pow(gamma);
    if gamma == 0 {
        return ResidueSet::full(1).unwrap();
    }
    loop {
        let size = rng.gen_range(1..level);
        let mut members: Vec<u64> = (0..level).collect();
        members.shuffle(rng);
        members.truncate(size as usize);
        let set = ResidueSet::from_residues(level, members).unwrap();
        if gamma >= 2 {
            // canonical gamma: reject bases that are full preimages from one
            // level down
            let down = set.project(level / p).unwrap();
            if down.pullback(level).unwrap() == set {
                continue;
            }
        }
        return set;
    }
}

pub fn random_kappa(rng: &mut ChaCha8Rng, spec: &GolombSystemSpec) -> KirchFunction {
    let default = match rng.gen_range(0..4u8) {
        0 => Kappa::Finite(1),
        1 => Kappa::Finite(2),
        2 => Kappa::Finite(3),
        _ => Kappa::Infinite,
    };
    let mut kappa = KirchFunction { default, overrides: Default::default() };
    for o in spec.overrides() {
        if o.gamma >= 1 {
            let k = match rng.gen_range(0..3u8) {
                0 => Kappa::Finite(o.gamma + rng.gen_range(0..3u32)),
                1 => Kappa::Finite(o.gamma),
                _ => Kappa::Infinite,
            };
            kappa.overrides.insert(o.p, k);
        }
    }
    kappa.validate(spec).expect("generated kappa respects gamma");
    kappa
}

fn kappa_cap(spec: &GolombSystemSpec, kappa: &KirchFunction, p: u64, r: u32) -> u32 {
    match kappa.at(spec, p) {
        Kappa::Finite(k) => k.min(r),
        Kappa::Infinite => r,
    }
}

fn kappa_at_least(spec: &GolombSystemSpec, kappa: &KirchFunction, p: u64, r: u32) -> bool {
    match kappa.at(spec, p) {
        Kappa::Finite(k) => k >= r,
        Kappa::Infinite => true,
    }
}

/// Core membership at a prime-power level, recomputed from the defining
/// equations by direct enumeration (projection memberships are found by
/// scanning the base for a congruent lift).
pub fn oracle_in_core(spec: &GolombSystemSpec, p: u64, r: u32, x: i64) -> bool {
    let gamma = spec.gamma(p);
    if gamma == 0 || r == 0 {
        return true;
    }
    let base = spec.base_at(p).expect("base exists at override or default primes");
    if r >= gamma {
        base.contains(mod_u(x, p.pow(gamma)))
    } else {
        let level = p.pow(r);
        base.iter().any(|y| y % level == mod_u(x, level))
    }
}

/// Saturation level for openness checks: one exponent beyond
/// max(v_p(n), gamma(p)) at every relevant prime, capped by kappa.
pub fn saturation_level(spec: &GolombSystemSpec, kappa: &KirchFunction, n: u64) -> u128 {
    let mut relevant: Vec<u64> = factor(n).into_iter().map(|(p, _)| p).collect();
    relevant.extend(spec.overrides().iter().map(|o| o.p));
    relevant.extend([2u64, 3, 5, 7, 11, 13]);
    relevant.sort_unstable();
    relevant.dedup();
    let mut m: u128 = n as u128;
    for p in relevant {
        let v = valuation(n, p).unwrap_or(0);
        let want = kappa_cap(spec, kappa, p, v.max(spec.gamma(p)) + 1);
        m *= (p as u128).pow(want.saturating_sub(v));
    }
    m
}

/// Saturation restricted to the primes of n. Openness of the image of a
/// coset of nZ is insensitive to the other primes (their box factors impose
/// no constraint on containment in the coset), so materialized checks can
/// work at this smaller level.
pub fn restricted_saturation_level(
    spec: &GolombSystemSpec,
    kappa: &KirchFunction,
    n: u64,
) -> u128 {
    let mut m: u128 = n as u128;
    for (p, v) in factor(n) {
        let want = kappa_cap(spec, kappa, p, v.max(spec.gamma(p)) + 1);
        m *= (p as u128).pow(want.saturating_sub(v));
    }
    m
}

/// Brute-force openness of the image of a + nZ in the maximal topology at
/// the saturation level M, straight from the minimal-open-box description:
/// the set is open iff the box of every member sits inside it, which for a
/// coset of nZ comes down to per-prime residue enumeration.
pub fn oracle_coset_open(
    spec: &GolombSystemSpec,
    kappa: &KirchFunction,
    a: i64,
    n: u64,
) -> bool {
    if n == 1 {
        return true;
    }
    let m = saturation_level(spec, kappa, n);
    for (p, v) in factor(n) {
        let v_m = {
            // v_p of the saturation level
            let mut q = m;
            let mut e = 0u32;
            while q % p as u128 == 0 {
                q /= p as u128;
                e += 1;
            }
            e
        };
        let r = kappa_cap(spec, kappa, p, v_m);
        // the box pins p only up to level p^r; the coset needs p^v
        if r < v {
            return false;
        }
        // every residue of the coset at level p^r must avoid the core,
        // otherwise the box at that member is not pinned at p
        let step = p.pow(v);
        let level = p.pow(r);
        let c = mod_u(a, step);
        let mut xi = c;
        while xi < level {
            if oracle_in_core(spec, p, r, xi as i64) {
                return false;
            }
            xi += step;
        }
        // r >= v already implies kappa admits the pin at p^v
        assert!(kappa_at_least(spec, kappa, p, v));
    }
    true
}
