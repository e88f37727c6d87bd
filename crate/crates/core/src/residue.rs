//! Subsets of Z/nZ with bitset semantics.

use crate::error::{Error, Result};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Largest modulus any residue-level object may carry.
pub const MAX_MODULUS: u64 = 1 << 20;

/// A subset of Z/nZ, stored as a bitset.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ResidueSet {
    n: u64,
    words: Vec<u64>,
}

impl ResidueSet {
    pub fn empty(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroModulus);
        }
        if n > MAX_MODULUS {
            return Err(Error::ModulusTooLarge { n, max: MAX_MODULUS });
        }
        let words = vec![0u64; n.div_ceil(64) as usize];
        Ok(ResidueSet { n, words })
    }

    pub fn full(n: u64) -> Result<Self> {
        let mut s = Self::empty(n)?;
        for w in &mut s.words {
            *w = u64::MAX;
        }
        s.clear_tail();
        Ok(s)
    }

    /// Build from residues, reducing each mod n.
    pub fn from_residues<I: IntoIterator<Item = u64>>(n: u64, iter: I) -> Result<Self> {
        let mut s = Self::empty(n)?;
        for x in iter {
            s.insert(x % n);
        }
        Ok(s)
    }

    /// Build from signed integers, reducing each mod n.
    pub fn from_integers<I: IntoIterator<Item = i64>>(n: u64, iter: I) -> Result<Self> {
        let mut s = Self::empty(n)?;
        for x in iter {
            s.insert(crate::arith::mod_u(x, n));
        }
        Ok(s)
    }

    /// The coset a + m(Z/nZ), for m dividing n.
    pub fn coset(n: u64, a: u64, m: u64) -> Result<Self> {
        if m == 0 || n % m != 0 {
            return Err(Error::NotADivisor { n: m, m: n });
        }
        let mut s = Self::empty(n)?;
        let mut x = a % m;
        while x < n {
            s.insert(x);
            x += m;
        }
        Ok(s)
    }

    fn clear_tail(&mut self) {
        let bits = (self.n % 64) as u32;
        if bits != 0 {
            let last = self.words.len() - 1;
            self.words[last] &= (1u64 << bits) - 1;
        }
    }

    pub fn modulus(&self) -> u64 {
        self.n
    }

    pub fn insert(&mut self, x: u64) {
        debug_assert!(x < self.n);
        self.words[(x / 64) as usize] |= 1 << (x % 64);
    }

    pub fn remove(&mut self, x: u64) {
        debug_assert!(x < self.n);
        self.words[(x / 64) as usize] &= !(1 << (x % 64));
    }

    pub fn contains(&self, x: u64) -> bool {
        debug_assert!(x < self.n);
        self.words[(x / 64) as usize] >> (x % 64) & 1 == 1
    }

    pub fn len(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.n
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::ModulusMismatch { expected: self.n, found: other.n });
        }
        Ok(())
    }

    pub fn union_with(&mut self, other: &Self) -> Result<()> {
        self.check(other)?;
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
        Ok(())
    }

    pub fn intersect_with(&mut self, other: &Self) -> Result<()> {
        self.check(other)?;
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
        Ok(())
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        let mut s = self.clone();
        s.union_with(other)?;
        Ok(s)
    }

    pub fn intersection(&self, other: &Self) -> Result<Self> {
        let mut s = self.clone();
        s.intersect_with(other)?;
        Ok(s)
    }

    pub fn difference(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut s = self.clone();
        for (a, b) in s.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
        Ok(s)
    }

    pub fn complement(&self) -> Self {
        let mut s = self.clone();
        for w in &mut s.words {
            *w = !*w;
        }
        s.clear_tail();
        s
    }

    pub fn intersects(&self, other: &Self) -> Result<bool> {
        self.check(other)?;
        Ok(self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0))
    }

    pub fn is_subset_of(&self, other: &Self) -> Result<bool> {
        self.check(other)?;
        Ok(self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0))
    }

    /// Translate by c: {x + c mod n}.
    pub fn translate(&self, c: i64) -> Self {
        let shift = crate::arith::mod_u(c, self.n);
        let mut s = Self::empty(self.n).expect("same modulus");
        for x in self.iter() {
            s.insert((x + shift) % self.n);
        }
        s
    }

    /// Image under reduction mod m, for m dividing n.
    pub fn project(&self, m: u64) -> Result<Self> {
        if m == 0 || self.n % m != 0 {
            return Err(Error::NotADivisor { n: m, m: self.n });
        }
        let mut s = Self::empty(m)?;
        for x in self.iter() {
            s.insert(x % m);
        }
        Ok(s)
    }

    /// Preimage under reduction from level m, for n dividing m.
    pub fn pullback(&self, m: u64) -> Result<Self> {
        if self.n == 0 || m % self.n != 0 {
            return Err(Error::NotADivisor { n: self.n, m });
        }
        let mut s = Self::empty(m)?;
        for x in self.iter() {
            let mut y = x;
            while y < m {
                s.insert(y);
                y += self.n;
            }
        }
        Ok(s)
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as u64;
                    w &= w - 1;
                    Some(i as u64 * 64 + b)
                }
            })
        })
    }

    pub fn to_vec(&self) -> Vec<u64> {
        self.iter().collect()
    }
}

impl std::fmt::Debug for ResidueSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ResidueSet(mod {}: {:?})", self.n, self.to_vec())
    }
}

impl Serialize for ResidueSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for ResidueSet {
    fn deserialize<D: Deserializer<'de>>(_: D) -> std::result::Result<Self, D::Error> {
        Err(D::Error::custom(
            "ResidueSet cannot be deserialized without a modulus; deserialize the enclosing object",
        ))
    }
}
