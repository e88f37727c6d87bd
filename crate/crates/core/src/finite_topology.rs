//! Topologies on the finite ring Z/nZ.
//!
//! A finite topology is the same thing as a preorder: the table of minimal
//! open neighbourhoods `min_open[x]` determines everything, a set being open
//! iff it is a union of table entries. All operations below work on that
//! canonical form.

use crate::arith::{gcd, inv_mod, mod_u};
use crate::error::{Error, Result};
use crate::residue::ResidueSet;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// Bound over which table-building (quadratic in n) operations refuse to run.
pub const QUADRATIC_GUARD: u64 = 1 << 14;

/// Bound for `operation_continuity` / `ring_ideal_base`, whose worst case is
/// worse than quadratic.
pub const CONTINUITY_GUARD: u64 = 1 << 11;

fn check_table_size(n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::ZeroModulus);
    }
    if n > QUADRATIC_GUARD {
        return Err(Error::QuadraticGuard { n, max: QUADRATIC_GUARD });
    }
    Ok(())
}

/// A topology on Z/nZ stored as per-residue minimal open neighbourhoods.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteTopology {
    n: u64,
    min_open: Vec<ResidueSet>,
}

impl std::fmt::Debug for FiniteTopology {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FiniteTopology(n={}, min_open=", self.n)?;
        f.debug_list().entries(self.min_open.iter().map(|s| s.to_vec())).finish()?;
        write!(f, ")")
    }
}

impl FiniteTopology {
    /// Validates the preorder laws: reflexivity and transitivity.
    pub fn from_min_open(n: u64, min_open: Vec<ResidueSet>) -> Result<Self> {
        check_table_size(n)?;
        if min_open.len() != n as usize {
            return Err(Error::Precondition(format!(
                "min_open table has {} entries for modulus {n}",
                min_open.len()
            )));
        }
        for (x, s) in min_open.iter().enumerate() {
            if s.modulus() != n {
                return Err(Error::ModulusMismatch { expected: n, found: s.modulus() });
            }
            if !s.contains(x as u64) {
                return Err(Error::Precondition(format!("min_open[{x}] does not contain {x}")));
            }
        }
        for (x, s) in min_open.iter().enumerate() {
            for y in s.iter() {
                if !min_open[y as usize].is_subset_of(s)? {
                    return Err(Error::Precondition(format!(
                        "transitivity fails: {y} in min_open[{x}] but min_open[{y}] is not contained in it"
                    )));
                }
            }
        }
        Ok(FiniteTopology { n, min_open })
    }

    fn from_min_open_trusted(n: u64, min_open: Vec<ResidueSet>) -> Self {
        let t = FiniteTopology { n, min_open };
        #[cfg(debug_assertions)]
        t.debug_validate();
        t
    }

    #[cfg(debug_assertions)]
    fn debug_validate(&self) {
        for (x, s) in self.min_open.iter().enumerate() {
            assert!(s.contains(x as u64), "reflexivity at {x}");
        }
        // the full transitivity sweep is cubic in n; sample rows above 300
        // (dense verification of every constructor lives in the test suite)
        let stride = (self.n / 32).max(1) as usize;
        let rows: Box<dyn Iterator<Item = usize>> = if self.n <= 300 {
            Box::new(0..self.n as usize)
        } else {
            Box::new((0..self.n as usize).step_by(stride))
        };
        for x in rows {
            let s = &self.min_open[x];
            for y in s.iter() {
                assert!(
                    self.min_open[y as usize].is_subset_of(s).unwrap(),
                    "transitivity at ({x}, {y})"
                );
            }
        }
    }

    /// Topology whose minimal open sets are the cosets x + m(x)·Z/nZ.
    ///
    /// Every named coset-family level has this shape. Validity requires
    /// m(y) | m(x)·k... precisely: y ≡ x (mod m(x)) implies m(x) | m(y).
    pub fn from_coset_moduli(n: u64, moduli: &[u64]) -> Result<Self> {
        check_table_size(n)?;
        if moduli.len() != n as usize {
            return Err(Error::Precondition("coset modulus table has wrong length".into()));
        }
        for (x, &m) in moduli.iter().enumerate() {
            if m == 0 || n % m != 0 {
                return Err(Error::NotADivisor { n: m, m: n });
            }
            let mut y = (x as u64) % m;
            while y < n {
                if moduli[y as usize] % m != 0 {
                    return Err(Error::Precondition(format!(
                        "transitivity fails: modulus at {y} not a multiple of modulus at {x}"
                    )));
                }
                y += m;
            }
        }
        let min_open = moduli
            .iter()
            .enumerate()
            .map(|(x, &m)| ResidueSet::coset(n, x as u64 % m, m).expect("validated divisor"))
            .collect();
        Ok(FiniteTopology { n, min_open })
    }

    pub fn discrete(n: u64) -> Result<Self> {
        check_table_size(n)?;
        let min_open = (0..n).map(|x| ResidueSet::from_residues(n, [x]).unwrap()).collect();
        Ok(FiniteTopology { n, min_open })
    }

    pub fn trivial(n: u64) -> Result<Self> {
        check_table_size(n)?;
        let full = ResidueSet::full(n)?;
        Ok(FiniteTopology { n, min_open: vec![full; n as usize] })
    }

    /// Coarsest topology in which every listed set is open.
    pub fn from_subbase(n: u64, sets: &[ResidueSet]) -> Result<Self> {
        check_table_size(n)?;
        let full = ResidueSet::full(n)?;
        let mut min_open = vec![full; n as usize];
        for s in sets {
            if s.modulus() != n {
                return Err(Error::ModulusMismatch { expected: n, found: s.modulus() });
            }
            for x in s.iter() {
                min_open[x as usize].intersect_with(s)?;
            }
        }
        Ok(Self::from_min_open_trusted(n, min_open))
    }

    pub fn modulus(&self) -> u64 {
        self.n
    }

    pub fn min_open(&self, x: u64) -> &ResidueSet {
        &self.min_open[(x % self.n) as usize]
    }

    pub fn min_open_table(&self) -> &[ResidueSet] {
        &self.min_open
    }

    fn check_set(&self, s: &ResidueSet) -> Result<()> {
        if s.modulus() != self.n {
            return Err(Error::ModulusMismatch { expected: self.n, found: s.modulus() });
        }
        Ok(())
    }

    /// A set is open iff it contains the minimal open set of each of its points.
    pub fn is_open(&self, s: &ResidueSet) -> Result<bool> {
        self.check_set(s)?;
        for x in s.iter() {
            if !self.min_open[x as usize].is_subset_of(s)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// closure(S) = the set of x whose min_open meets S.
    pub fn closure(&self, s: &ResidueSet) -> Result<ResidueSet> {
        self.check_set(s)?;
        let mut out = ResidueSet::empty(self.n)?;
        for x in 0..self.n {
            if self.min_open[x as usize].intersects(s)? {
                out.insert(x);
            }
        }
        Ok(out)
    }

    /// Points whose only neighbourhood is the whole space; equivalently the
    /// intersection of all nonempty closed sets.
    pub fn indiscrete_core(&self) -> ResidueSet {
        let mut out = ResidueSet::empty(self.n).expect("valid modulus");
        for x in 0..self.n {
            if self.min_open[x as usize].is_full() {
                out.insert(x);
            }
        }
        out
    }

    /// Connected components; for finite spaces these are the components of
    /// the specialization graph joining x to every y in its minimal open set.
    pub fn connected_components(&self) -> Vec<ResidueSet> {
        let n = self.n as usize;
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for x in 0..n {
            for y in self.min_open[x].iter() {
                let (a, b) = (find(&mut parent, x), find(&mut parent, y as usize));
                if a != b {
                    parent[a] = b;
                }
            }
        }
        let mut reps: Vec<usize> = Vec::new();
        let mut comp: HashMap<usize, ResidueSet> = HashMap::new();
        for x in 0..n {
            let r = find(&mut parent, x);
            comp.entry(r)
                .or_insert_with(|| {
                    reps.push(r);
                    ResidueSet::empty(self.n).unwrap()
                })
                .insert(x as u64);
        }
        let mut out: Vec<ResidueSet> = comp.into_values().collect();
        out.sort_by_key(|s| s.iter().next().unwrap_or(u64::MAX));
        out
    }

    /// Quotient topology on Z/nZ along the reduction from Z/mZ, n | m.
    pub fn quotient(&self, n: u64) -> Result<FiniteTopology> {
        if n == 0 || self.n % n != 0 {
            return Err(Error::NotADivisor { n, m: self.n });
        }
        // spread[c]: union over z = c (mod n) of the image of min_open[z].
        let mut spread = vec![ResidueSet::empty(n)?; n as usize];
        for z in 0..self.n {
            let img = self.min_open[z as usize].project(n)?;
            spread[(z % n) as usize].union_with(&img)?;
        }
        // min_open of x in the quotient: least set containing x and closed
        // under c -> spread[c].
        let mut min_open = Vec::with_capacity(n as usize);
        for x in 0..n {
            let mut s = ResidueSet::empty(n)?;
            s.insert(x);
            let mut stack = vec![x];
            while let Some(c) = stack.pop() {
                for d in spread[c as usize].iter() {
                    if !s.contains(d) {
                        s.insert(d);
                        stack.push(d);
                    }
                }
            }
            min_open.push(s);
        }
        Ok(Self::from_min_open_trusted(n, min_open))
    }

    /// Product topology transported along the CRT isomorphism
    /// Z/abZ = Z/aZ x Z/bZ, for coprime a, b.
    pub fn crt_combine(left: &FiniteTopology, right: &FiniteTopology) -> Result<FiniteTopology> {
        let (a, b) = (left.n, right.n);
        if gcd(a, b) != 1 {
            return Err(Error::NotCoprime { a, b });
        }
        let n = a.checked_mul(b).ok_or(Error::ModulusTooLarge { n: u64::MAX, max: QUADRATIC_GUARD })?;
        check_table_size(n)?;
        // y = u (mod a), y = v (mod b)  <=>  y = u*c1 + v*c2 (mod ab)
        let (part_a, part_b): (Vec<u64>, Vec<u64>) = if a == 1 {
            ((0..a).map(|_| 0).collect(), (0..b).collect())
        } else if b == 1 {
            ((0..a).collect(), (0..b).map(|_| 0).collect())
        } else {
            let inv_b_mod_a = inv_mod(b % a, a)?;
            let inv_a_mod_b = inv_mod(a % b, b)?;
            let c1 = (b as u128 * inv_b_mod_a as u128 % n as u128) as u64;
            let c2 = (a as u128 * inv_a_mod_b as u128 % n as u128) as u64;
            (
                (0..a).map(|u| (u as u128 * c1 as u128 % n as u128) as u64).collect(),
                (0..b).map(|v| (v as u128 * c2 as u128 % n as u128) as u64).collect(),
            )
        };
        let mut min_open = Vec::with_capacity(n as usize);
        for x in 0..n {
            let sa = &left.min_open[(x % a) as usize];
            let sb = &right.min_open[(x % b) as usize];
            let mut s = ResidueSet::empty(n)?;
            for u in sa.iter() {
                let base = part_a[u as usize];
                for v in sb.iter() {
                    let mut y = base + part_b[v as usize];
                    if y >= n {
                        y -= n;
                    }
                    s.insert(y);
                }
            }
            min_open.push(s);
        }
        Ok(Self::from_min_open_trusted(n, min_open))
    }

    /// Continuity and openness of the reduction map from `self` (level m)
    /// onto `target` (level n), n | m.
    pub fn map_properties(&self, target: &FiniteTopology) -> Result<MapProperties> {
        let (m, n) = (self.n, target.n);
        if n == 0 || m % n != 0 {
            return Err(Error::NotADivisor { n, m });
        }
        // Continuity of a map of finite spaces = specialization-preorder
        // monotonicity: the image of min_open[z] must sit inside
        // min_open[image of z].
        let mut continuous = true;
        let mut open = true;
        for z in 0..m {
            let img = self.min_open[z as usize].project(n)?;
            if continuous && !img.is_subset_of(&target.min_open[(z % n) as usize])? {
                continuous = false;
            }
            if open && !target.is_open(&img)? {
                open = false;
            }
            if !continuous && !open {
                break;
            }
        }
        Ok(MapProperties { continuous, open })
    }

    /// Whether the chosen ring operation is continuous as a map
    /// (Z/nZ)^2 -> Z/nZ for the product topology.
    pub fn operation_continuity(&self, which: RingOp) -> Result<bool> {
        let n = self.n;
        if n > CONTINUITY_GUARD {
            return Err(Error::QuadraticGuard { n, max: CONTINUITY_GUARD });
        }
        // Continuity at (u, v) means f(min_open[u] x min_open[v]) lands in
        // min_open[f(u,v)]; minimal boxes are exactly products of minimal
        // open sets, so checking these suffices.
        let class = self.min_open_classes();
        let mut images: HashMap<(u32, u32), ResidueSet> = HashMap::new();
        for u in 0..n {
            for v in 0..n {
                let key = (class[u as usize], class[v as usize]);
                let img = match images.get(&key) {
                    Some(s) => s,
                    None => {
                        let mut s = ResidueSet::empty(n)?;
                        for a in self.min_open[u as usize].iter() {
                            for b in self.min_open[v as usize].iter() {
                                s.insert(which.apply(a, b, n));
                            }
                        }
                        images.entry(key).or_insert(s)
                    }
                };
                let w = which.apply(u, v, n);
                if !img.is_subset_of(&self.min_open[w as usize])? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// If both ring operations are continuous, the opens are exactly the
    /// unions of cosets of an ideal dZ/nZ; returns that d.
    pub fn ring_ideal_base(&self) -> Result<Option<u64>> {
        let n = self.n;
        let zero_nbhd = &self.min_open[0];
        // min_open[0] must be the subgroup dZ/nZ, d its least positive element.
        let d = zero_nbhd.iter().find(|&x| x > 0).unwrap_or(n);
        if n % d != 0 || *zero_nbhd != ResidueSet::coset(n, 0, d)? {
            return Ok(None);
        }
        for x in 0..n {
            if self.min_open[x as usize] != ResidueSet::coset(n, x, d)? {
                return Ok(None);
            }
        }
        if !self.operation_continuity(RingOp::Add)? || !self.operation_continuity(RingOp::Mul)? {
            return Ok(None);
        }
        Ok(Some(d))
    }

    /// Map each residue to a small id shared by residues with equal min_open.
    fn min_open_classes(&self) -> Vec<u32> {
        let mut ids: HashMap<&ResidueSet, u32> = HashMap::new();
        let mut out = Vec::with_capacity(self.n as usize);
        for s in &self.min_open {
            let next = ids.len() as u32;
            out.push(*ids.entry(s).or_insert(next));
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MapProperties {
    pub continuous: bool,
    pub open: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RingOp {
    Add,
    Mul,
}

impl RingOp {
    fn apply(self, a: u64, b: u64, n: u64) -> u64 {
        match self {
            RingOp::Add => (a + b) % n,
            RingOp::Mul => (a as u128 * b as u128 % n as u128) as u64,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct FiniteTopologyRepr {
    n: u64,
    min_open: Vec<Vec<u64>>,
}

impl Serialize for FiniteTopology {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = FiniteTopologyRepr {
            n: self.n,
            min_open: self.min_open.iter().map(|s| s.to_vec()).collect(),
        };
        repr.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FiniteTopology {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = FiniteTopologyRepr::deserialize(deserializer)?;
        let sets = repr
            .min_open
            .into_iter()
            .map(|xs| ResidueSet::from_residues(repr.n, xs))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        FiniteTopology::from_min_open(repr.n, sets).map_err(D::Error::custom)
    }
}

/// Convenience: reduce a signed integer to a residue at level n.
pub fn residue_at(a: i64, n: u64) -> u64 {
    mod_u(a, n)
}
