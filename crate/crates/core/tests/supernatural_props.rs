//! Lattice and monoid laws for supernatural numbers, abundancy properties,
//! and the accumulation-point construction shadow.

mod common;

use common::rng;
use num::rational::BigRational;
use num::One;
use pcl_core::sieve::Sieve;
use pcl_core::supernatural::{
    converges_report, ConvergesConfig, ConvergesReport, Exponent, ExponentValue, ExtendedRational,
    Supernatural, Tail,
};
use proptest::prelude::*;
use rand::Rng;

fn nat(n: u64) -> Supernatural {
    Supernatural::from_natural(n).unwrap()
}

/// Arbitrary representable supernatural over a small prime pool.
fn arb_supernatural() -> impl Strategy<Value = Supernatural> {
    let entry = (prop::sample::select(vec![2u64, 3, 5, 7, 11]), 0u64..4);
    (prop::collection::btree_map(entry.0, entry.1, 0..4), prop::bool::ANY).prop_map(
        |(map, inf_tail)| {
            let tail = if inf_tail { Tail::Infinite } else { Tail::Zero };
            let entries: Vec<(u64, Exponent)> = map
                .into_iter()
                .filter(|&(_, e)| e > 0)
                .map(|(p, e)| (p, if e == 3 { Exponent::Infinite } else { Exponent::Finite(e) }))
                .filter(|&(_, e)| !(matches!(e, Exponent::Infinite) && tail == Tail::Infinite))
                .collect();
            Supernatural::from_parts(entries, tail).unwrap()
        },
    )
}

proptest! {
    #[test]
    fn lattice_laws(a in arb_supernatural(), b in arb_supernatural(), c in arb_supernatural()) {
        // commutativity
        prop_assert_eq!(a.gcd(&b), b.gcd(&a));
        prop_assert_eq!(a.lcm(&b), b.lcm(&a));
        // associativity
        prop_assert_eq!(a.gcd(&b).gcd(&c), a.gcd(&b.gcd(&c)));
        prop_assert_eq!(a.lcm(&b).lcm(&c), a.lcm(&b.lcm(&c)));
        // absorption
        prop_assert_eq!(a.gcd(&a.lcm(&b)), a.clone());
        prop_assert_eq!(a.lcm(&a.gcd(&b)), a.clone());
        // gcd divides, lcm is divided
        prop_assert!(a.gcd(&b).divides(&a));
        prop_assert!(a.divides(&a.lcm(&b)));
        // divisibility is the lattice order
        prop_assert_eq!(a.divides(&b), a.gcd(&b) == a);
    }

    #[test]
    fn multiplication_laws(a in arb_supernatural(), b in arb_supernatural()) {
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&Supernatural::one()), a.clone());
        prop_assert!(a.divides(&a.mul(&b)));
    }

    #[test]
    fn omega_laws(a in arb_supernatural(), b in arb_supernatural()) {
        let le = |x: ExponentValue, y: ExponentValue| match (x, y) {
            (ExponentValue::Finite(u), ExponentValue::Finite(v)) => u <= v,
            (_, ExponentValue::Infinite) => true,
            _ => false,
        };
        // omega <= Omega
        prop_assert!(le(a.omega(), a.big_omega()));
        // subadditivity of omega under products
        if let (ExponentValue::Finite(oa), ExponentValue::Finite(ob), ExponentValue::Finite(oab)) =
            (a.omega(), b.omega(), a.mul(&b).omega())
        {
            prop_assert!(oab <= oa + ob);
        }
        // additivity of Omega on finite values
        if let (ExponentValue::Finite(wa), ExponentValue::Finite(wb)) = (a.big_omega(), b.big_omega()) {
            prop_assert_eq!(a.mul(&b).big_omega(), ExponentValue::Finite(wa + wb));
        }
    }

    #[test]
    fn abundancy_monotone_and_bounded(a in arb_supernatural(), b in arb_supernatural()) {
        if let ExtendedRational::Finite(h) = a.abundancy() {
            prop_assert!(h >= BigRational::one());
            prop_assert_eq!(h == BigRational::one(), a.is_one());
        }
        if a.divides(&b) {
            match (a.abundancy(), b.abundancy()) {
                (ExtendedRational::Finite(ha), ExtendedRational::Finite(hb)) => prop_assert!(ha <= hb),
                (ExtendedRational::Infinite, ExtendedRational::Finite(_)) => prop_assert!(false),
                _ => {}
            }
        }
    }
}

#[test]
fn monoid_isomorphism_shadow() {
    // multiplication corresponds to exponentwise addition, cross-checked
    // against independent integer factorization
    let mut r = rng(41);
    for _ in 0..500 {
        let a = r.gen_range(1..=1000u64);
        let b = r.gen_range(1..=1000u64);
        assert_eq!(nat(a).mul(&nat(b)), nat(a * b), "{a} * {b}");
    }
    let mut r = rng(42);
    for _ in 0..100 {
        let n = r.gen_range(1..=1_000_000u64);
        let s = nat(n);
        // independent: divide out each prime by trial division
        let mut m = n;
        let mut p = 2u64;
        while p * p <= m {
            let mut e = 0u64;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            if e > 0 {
                assert_eq!(s.exponent_of(p), ExponentValue::Finite(e), "{n} at {p}");
            }
            p += 1;
        }
        if m > 1 {
            assert_eq!(s.exponent_of(m), ExponentValue::Finite(1));
        }
    }
}

#[test]
fn abundancy_multiplicative_on_coprime_supports() {
    let mut r = rng(43);
    for _ in 0..200 {
        let a = 2 * r.gen_range(1..=200u64);
        let mut b = r.gen_range(1..=400u64);
        while pcl_core::arith::gcd(a, b) != 1 {
            b = r.gen_range(1..=400u64);
        }
        let (ha, hb, hab) = (
            nat(a).abundancy(),
            nat(b).abundancy(),
            nat(a * b).abundancy(),
        );
        match (ha, hb, hab) {
            (
                ExtendedRational::Finite(x),
                ExtendedRational::Finite(y),
                ExtendedRational::Finite(xy),
            ) => assert_eq!(x * y, xy),
            _ => unreachable!("finite naturals have finite abundancy"),
        }
    }
}

#[test]
fn abundancy_agrees_with_divisor_sums() {
    for n in 1..=500u64 {
        let sigma: u64 = (1..=n).filter(|d| n % d == 0).sum();
        let expected = BigRational::new(sigma.into(), n.into());
        match nat(n).abundancy() {
            ExtendedRational::Finite(h) => assert_eq!(h, expected, "h({n})"),
            ExtendedRational::Infinite => unreachable!(),
        }
    }
}

#[test]
fn accumulation_point_shadow() {
    // x = 10 against the sequence p_i * 10 over the first 500 primes:
    // consistent convergence back to 10, with omega increasing by one
    let sieve = Sieve::new(10_000);
    let ten = nat(10);
    let seq: Vec<Supernatural> = sieve.primes().take(500).map(|p| nat(p).mul(&ten)).collect();
    let report = converges_report(&seq, &ten, 100, &ConvergesConfig::default()).unwrap();
    match report {
        ConvergesReport::Consistent { stabilized_at } => {
            for (p, idx) in stabilized_at {
                assert!(idx.is_some(), "prime {p} did not stabilize");
            }
        }
        ConvergesReport::RefutedAt { prime, index } => {
            panic!("refuted at prime {prime}, index {index}")
        }
    }
    for (i, p) in sieve.primes().take(500).enumerate() {
        if 10 % p != 0 {
            assert_eq!(
                seq[i].omega(),
                ExponentValue::Finite(3),
                "omega(10 p) = omega(10) + 1"
            );
        }
    }
}

#[test]
fn converges_rejects_wrong_target() {
    // primes do not converge to 2: v_2 sticks at 0 while the target wants 1
    let sieve = Sieve::new(10_000);
    let seq: Vec<Supernatural> = sieve.primes().skip(1).take(100).map(nat).collect();
    let report =
        converges_report(&seq, &nat(2), 10, &ConvergesConfig::default()).unwrap();
    assert_eq!(report, ConvergesReport::RefutedAt { prime: 2, index: 0 });
}
