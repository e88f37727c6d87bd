//! Properties of the finite-topology engine, checked against a powerset
//! brute-force oracle on small moduli.

mod common;

use common::{mask_of, min_open_from_opens, opens_from_subbase, random_topology, rng};
use pcl_core::finite_topology::FiniteTopology;
use pcl_core::residue::ResidueSet;
use proptest::prelude::*;
use rand::Rng;

fn random_set(r: &mut rand_chacha::ChaCha8Rng, n: u64) -> ResidueSet {
    let mask: u64 = r.gen_range(0..(1u64 << n));
    ResidueSet::from_residues(n, (0..n).filter(|&x| mask >> x & 1 == 1)).unwrap()
}

#[test]
fn from_subbase_matches_powerset_oracle() {
    let mut r = rng(1);
    for _ in 0..200 {
        let n = r.gen_range(1..=8u64);
        let k = r.gen_range(0..=3usize);
        let subbase_masks: Vec<u64> = (0..k).map(|_| r.gen_range(0..(1u64 << n))).collect();
        let sets: Vec<ResidueSet> = subbase_masks
            .iter()
            .map(|&m| ResidueSet::from_residues(n, (0..n).filter(|&x| m >> x & 1 == 1)).unwrap())
            .collect();
        let t = FiniteTopology::from_subbase(n, &sets).unwrap();
        let opens = opens_from_subbase(n, &subbase_masks);
        for x in 0..n {
            assert_eq!(
                mask_of(t.min_open(x)),
                min_open_from_opens(&opens, x),
                "min_open mismatch at {x} for subbase {subbase_masks:?} mod {n}"
            );
        }
        // is_open agrees with membership in the generated family
        for _ in 0..10 {
            let probe: u64 = r.gen_range(0..(1u64 << n));
            let set = ResidueSet::from_residues(n, (0..n).filter(|&x| probe >> x & 1 == 1)).unwrap();
            assert_eq!(t.is_open(&set).unwrap(), opens.contains(&probe));
        }
    }
}

#[test]
fn closure_laws_hold() {
    let mut r = rng(2);
    for _ in 0..300 {
        let n = r.gen_range(1..=12u64);
        let t = random_topology(&mut r, n);
        let a = random_set(&mut r, n);
        let b = random_set(&mut r, n);
        let cl_a = t.closure(&a).unwrap();
        // extensive
        assert!(a.is_subset_of(&cl_a).unwrap());
        // idempotent
        assert_eq!(t.closure(&cl_a).unwrap(), cl_a);
        // monotone
        let ab = a.union(&b).unwrap();
        assert!(cl_a.is_subset_of(&t.closure(&ab).unwrap()).unwrap());
        // finitely additive
        assert_eq!(
            t.closure(&ab).unwrap(),
            cl_a.union(&t.closure(&b).unwrap()).unwrap()
        );
        // closure of the empty set is empty
        assert!(t.closure(&ResidueSet::empty(n).unwrap()).unwrap().is_empty());
    }
}

#[test]
fn preorder_laws_on_random_constructions() {
    let mut r = rng(3);
    for _ in 0..200 {
        let n = r.gen_range(1..=12u64);
        let t = random_topology(&mut r, n);
        for x in 0..n {
            assert!(t.min_open(x).contains(x));
            for y in t.min_open(x).iter() {
                assert!(t.min_open(y).is_subset_of(t.min_open(x)).unwrap());
            }
        }
    }
}

#[test]
fn quotient_of_product_is_product_of_quotients() {
    // exact min_open-table equality, random topologies and divisors
    let mut r = rng(4);
    let mut checked = 0;
    while checked < 200 {
        let m1 = r.gen_range(2..=12u64);
        let m2 = r.gen_range(2..=12u64);
        if pcl_core::arith::gcd(m1, m2) != 1 {
            continue;
        }
        let t1 = random_topology(&mut r, m1);
        let t2 = random_topology(&mut r, m2);
        let divisors = |m: u64| (1..=m).filter(|d| m % d == 0).collect::<Vec<_>>();
        let n1 = *divisors(m1).get(r.gen_range(0..divisors(m1).len())).unwrap();
        let n2 = *divisors(m2).get(r.gen_range(0..divisors(m2).len())).unwrap();
        let product = FiniteTopology::crt_combine(&t1, &t2).unwrap();
        let lhs = product.quotient(n1 * n2).unwrap();
        let rhs = FiniteTopology::crt_combine(
            &t1.quotient(n1).unwrap(),
            &t2.quotient(n2).unwrap(),
        )
        .unwrap();
        assert_eq!(lhs, rhs, "qtprd fails at ({m1},{m2}) -> ({n1},{n2})");
        checked += 1;
    }
}

#[test]
fn quotient_matches_open_family_oracle() {
    // quotient opens are exactly the sets whose pullback is open; rebuild
    // the whole quotient family by enumeration and compare tables
    let mut r = rng(40);
    for _ in 0..150 {
        let m = r.gen_range(2..=10u64);
        let t = random_topology(&mut r, m);
        for n in (1..=m).filter(|d| m % d == 0) {
            let q = t.quotient(n).unwrap();
            let mut quotient_opens: Vec<u64> = Vec::new();
            for mask in 0..(1u64 << n) {
                let set =
                    ResidueSet::from_residues(n, (0..n).filter(|&x| mask >> x & 1 == 1)).unwrap();
                if t.is_open(&set.pullback(m).unwrap()).unwrap() {
                    quotient_opens.push(mask);
                }
            }
            for x in 0..n {
                assert_eq!(
                    mask_of(q.min_open(x)),
                    min_open_from_opens(&quotient_opens, x),
                    "quotient table at {m} -> {n}, point {x}"
                );
            }
        }
    }
}

#[test]
fn crt_combine_matches_initial_topology_oracle() {
    // the product transported along the CRT map equals the topology
    // generated by pullbacks of both factors' minimal opens
    let mut r = rng(41);
    let mut checked = 0;
    while checked < 100 {
        let a = r.gen_range(2..=8u64);
        let b = r.gen_range(2..=8u64);
        if pcl_core::arith::gcd(a, b) != 1 {
            continue;
        }
        let ta = random_topology(&mut r, a);
        let tb = random_topology(&mut r, b);
        let combined = FiniteTopology::crt_combine(&ta, &tb).unwrap();
        let mut subbase = Vec::new();
        for x in 0..a {
            subbase.push(ta.min_open(x).pullback(a * b).unwrap());
        }
        for x in 0..b {
            subbase.push(tb.min_open(x).pullback(a * b).unwrap());
        }
        let generated = FiniteTopology::from_subbase(a * b, &subbase).unwrap();
        assert_eq!(combined, generated, "CRT transport at ({a}, {b})");
        checked += 1;
    }
}

#[test]
fn map_properties_match_full_enumeration() {
    let mut r = rng(42);
    for _ in 0..100 {
        let m = r.gen_range(2..=8u64);
        let t = random_topology(&mut r, m);
        for n in (1..=m).filter(|d| m % d == 0) {
            let target = random_topology(&mut r, n);
            let props = t.map_properties(&target).unwrap();
            // exhaustive: preimage of every open is open / image of every
            // open is open
            let mut continuous = true;
            let mut open = true;
            for mask in 0..(1u64 << n) {
                let set =
                    ResidueSet::from_residues(n, (0..n).filter(|&x| mask >> x & 1 == 1)).unwrap();
                if target.is_open(&set).unwrap()
                    && !t.is_open(&set.pullback(m).unwrap()).unwrap()
                {
                    continuous = false;
                }
            }
            for mask in 0..(1u64 << m) {
                let set =
                    ResidueSet::from_residues(m, (0..m).filter(|&x| mask >> x & 1 == 1)).unwrap();
                if t.is_open(&set).unwrap() && !target.is_open(&set.project(n).unwrap()).unwrap() {
                    open = false;
                }
            }
            assert_eq!((props.continuous, props.open), (continuous, open), "{m} -> {n}");
        }
    }
}

#[test]
fn operation_continuity_matches_box_enumeration() {
    use pcl_core::finite_topology::RingOp;
    let mut r = rng(43);
    for _ in 0..60 {
        let n = r.gen_range(2..=6u64);
        let t = random_topology(&mut r, n);
        for op in [RingOp::Add, RingOp::Mul] {
            let f = |u: u64, v: u64| match op {
                RingOp::Add => (u + v) % n,
                RingOp::Mul => u * v % n,
            };
            // continuity of f on the product: the preimage of every open
            // must contain a minimal box around each of its points
            let mut expected = true;
            'outer: for mask in 0..(1u64 << n) {
                let set =
                    ResidueSet::from_residues(n, (0..n).filter(|&x| mask >> x & 1 == 1)).unwrap();
                if !t.is_open(&set).unwrap() {
                    continue;
                }
                for u in 0..n {
                    for v in 0..n {
                        if !set.contains(f(u, v)) {
                            continue;
                        }
                        for uu in t.min_open(u).iter() {
                            for vv in t.min_open(v).iter() {
                                if !set.contains(f(uu, vv)) {
                                    expected = false;
                                    break 'outer;
                                }
                            }
                        }
                    }
                }
            }
            assert_eq!(t.operation_continuity(op).unwrap(), expected, "{op:?} at {n}");
        }
    }
}

#[test]
fn projections_to_quotients_are_continuous() {
    let mut r = rng(5);
    for _ in 0..100 {
        let m = r.gen_range(2..=12u64);
        let t = random_topology(&mut r, m);
        for n in (1..=m).filter(|d| m % d == 0) {
            let q = t.quotient(n).unwrap();
            let props = t.map_properties(&q).unwrap();
            assert!(props.continuous, "projection {m} -> {n} not continuous");
        }
    }
}

#[test]
fn nonempty_core_forces_one_component() {
    let mut r = rng(6);
    for _ in 0..200 {
        let n = r.gen_range(1..=12u64);
        let t = random_topology(&mut r, n);
        if !t.indiscrete_core().is_empty() {
            assert_eq!(t.connected_components().len(), 1);
        }
    }
}

fn arb_set(n: u64) -> impl Strategy<Value = ResidueSet> {
    prop::collection::vec(0..n, 0..=n as usize)
        .prop_map(move |xs| ResidueSet::from_residues(n, xs).unwrap())
}

proptest! {
    #[test]
    fn residue_set_boolean_algebra(a in arb_set(24), b in arb_set(24), c in arb_set(24)) {
        prop_assert_eq!(a.union(&b).unwrap(), b.union(&a).unwrap());
        prop_assert_eq!(a.intersection(&b).unwrap(), b.intersection(&a).unwrap());
        // distributivity
        prop_assert_eq!(
            a.intersection(&b.union(&c).unwrap()).unwrap(),
            a.intersection(&b).unwrap().union(&a.intersection(&c).unwrap()).unwrap()
        );
        // De Morgan
        prop_assert_eq!(
            a.union(&b).unwrap().complement(),
            a.complement().intersection(&b.complement()).unwrap()
        );
        // complement is an involution, difference agrees with it
        prop_assert_eq!(a.complement().complement(), a.clone());
        prop_assert_eq!(a.difference(&b).unwrap(), a.intersection(&b.complement()).unwrap());
        // counting
        prop_assert_eq!(
            a.union(&b).unwrap().len() + a.intersection(&b).unwrap().len(),
            a.len() + b.len()
        );
    }

    #[test]
    fn projection_sections_pullback(k in 1u64..6, m in 1u64..5, xs in prop::collection::vec(0u64..1000, 0..10)) {
        let big = k * m;
        let set = ResidueSet::from_residues(big, xs).unwrap();
        // pullback of projection contains the set; projecting back is identity
        let projected = set.project(m).unwrap();
        prop_assert!(set.is_subset_of(&projected.pullback(big).unwrap()).unwrap());
        prop_assert_eq!(projected.pullback(big).unwrap().project(m).unwrap(), projected);
    }
}

#[test]
fn components_partition_the_space() {
    let mut r = rng(7);
    for _ in 0..100 {
        let n = r.gen_range(1..=12u64);
        let t = random_topology(&mut r, n);
        let comps = t.connected_components();
        let mut union = ResidueSet::empty(n).unwrap();
        let mut total = 0;
        for c in &comps {
            assert!(!c.is_empty());
            total += c.len();
            union.union_with(c).unwrap();
        }
        assert_eq!(total, n);
        assert!(union.is_full());
        // each component is clopen-saturated: min_open of members stays inside
        for c in &comps {
            for x in c.iter() {
                assert!(t.min_open(x).is_subset_of(c).unwrap());
            }
        }
    }
}
