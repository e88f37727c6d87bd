//! Segmented sieve of Eratosthenes with an on-disk bit-array cache.
//!
//! Cache layout: magic `PCLSIEVE`, version (u32 LE), limit (u64 LE), then the
//! primality bit array, least significant bit first.

use crate::error::{Error, Result};
use std::fs;
use std::io::Write;
use std::path::Path;

const MAGIC: &[u8; 8] = b"PCLSIEVE";
const VERSION: u32 = 1;
const SEGMENT: usize = 1 << 16;

/// Primality of every integer in [0, limit].
pub struct Sieve {
    limit: u64,
    bits: Vec<u64>,
}

impl Sieve {
    pub fn new(limit: u64) -> Sieve {
        let n = limit as usize;
        let mut bits = vec![0u64; n / 64 + 1];
        let mut set = |i: usize| bits[i / 64] |= 1 << (i % 64);
        if limit >= 2 {
            set(2);
        }
        let mut i = 3;
        while i <= n {
            set(i);
            i += 2;
        }
        // base primes up to sqrt(limit), by plain sieving
        let root = (limit as f64).sqrt() as usize + 1;
        let mut base = vec![true; root + 1];
        let mut p = 2;
        while p * p <= root {
            if base[p] {
                let mut q = p * p;
                while q <= root {
                    base[q] = false;
                    q += p;
                }
            }
            p += 1;
        }
        let base_primes: Vec<usize> =
            (2..=root).filter(|&q| base[q]).collect();
        // mark composites segment by segment
        let mut sieve = Sieve { limit, bits };
        let mut lo = 2usize;
        while lo <= n {
            let hi = (lo + SEGMENT - 1).min(n);
            for &p in &base_primes {
                if p * p > hi {
                    break;
                }
                let start = (p * p).max(lo.div_ceil(p) * p);
                let mut q = start;
                while q <= hi {
                    sieve.clear(q as u64);
                    q += p;
                }
            }
            lo = hi + 1;
        }
        if limit >= 1 {
            sieve.clear(1);
        }
        sieve.clear(0);
        sieve
    }

    fn clear(&mut self, i: u64) {
        self.bits[(i / 64) as usize] &= !(1 << (i % 64));
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn is_prime(&self, x: u64) -> bool {
        debug_assert!(x <= self.limit);
        self.bits[(x / 64) as usize] >> (x % 64) & 1 == 1
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        (0..=self.limit).filter(move |&x| self.is_prime(x))
    }

    pub fn count_primes(&self) -> u64 {
        self.bits.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// Load from a cache file when it matches (magic, version, limit);
    /// otherwise build and, if a path is given, write the cache.
    pub fn load_or_build(limit: u64, cache: Option<&Path>) -> Result<Sieve> {
        if let Some(path) = cache {
            if let Ok(bytes) = fs::read(path) {
                match Self::decode(&bytes) {
                    Ok(s) if s.limit == limit => return Ok(s),
                    _ => {} // stale or foreign cache: rebuild
                }
            }
        }
        let sieve = Sieve::new(limit);
        if let Some(path) = cache {
            sieve.store(path)?;
        }
        Ok(sieve)
    }

    pub fn store(&self, path: &Path) -> Result<()> {
        let mut out = Vec::with_capacity(20 + self.bits.len() * 8);
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&VERSION.to_le_bytes());
        out.extend_from_slice(&self.limit.to_le_bytes());
        for w in &self.bits {
            out.extend_from_slice(&w.to_le_bytes());
        }
        // write-once semantics: write to a sibling temp file, then rename
        let tmp = path.with_extension("tmp");
        let mut f = fs::File::create(&tmp).map_err(|e| Error::SieveCache(e.to_string()))?;
        f.write_all(&out).map_err(|e| Error::SieveCache(e.to_string()))?;
        fs::rename(&tmp, path).map_err(|e| Error::SieveCache(e.to_string()))?;
        Ok(())
    }

    pub fn decode(bytes: &[u8]) -> Result<Sieve> {
        if bytes.len() < 20 || &bytes[0..8] != MAGIC {
            return Err(Error::SieveCache("bad magic".into()));
        }
        let version = u32::from_le_bytes(bytes[8..12].try_into().unwrap());
        if version != VERSION {
            return Err(Error::SieveCache(format!("unsupported version {version}")));
        }
        let limit = u64::from_le_bytes(bytes[12..20].try_into().unwrap());
        let words = (limit / 64 + 1) as usize;
        if bytes.len() != 20 + words * 8 {
            return Err(Error::SieveCache("truncated bit array".into()));
        }
        let bits = bytes[20..]
            .chunks_exact(8)
            .map(|c| u64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        Ok(Sieve { limit, bits })
    }
}

/// Smallest-prime-factor table for 0..=limit (entry 0 for 0 and 1).
pub fn spf_table(limit: usize) -> Vec<u32> {
    let mut spf = vec![0u32; limit + 1];
    for i in 2..=limit {
        if spf[i] == 0 {
            let mut j = i;
            while j <= limit {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    spf
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_primes() {
        let s = Sieve::new(100);
        let ps: Vec<u64> = s.primes().collect();
        assert_eq!(
            ps,
            vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97]
        );
    }

    #[test]
    fn pi_of_powers_of_ten() {
        assert_eq!(Sieve::new(1_000).count_primes(), 168);
        assert_eq!(Sieve::new(100_000).count_primes(), 9_592);
        assert_eq!(Sieve::new(1_000_000).count_primes(), 78_498);
    }

    #[test]
    fn agrees_with_miller_rabin() {
        let s = Sieve::new(20_000);
        for x in 0..=20_000u64 {
            assert_eq!(s.is_prime(x), crate::arith::is_prime(x), "disagree at {x}");
        }
    }

    #[test]
    fn cache_roundtrip_and_rejection() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("primes.sieve");
        let s = Sieve::load_or_build(10_000, Some(&path)).unwrap();
        assert!(path.exists());
        let s2 = Sieve::load_or_build(10_000, Some(&path)).unwrap();
        assert_eq!(s.count_primes(), s2.count_primes());
        // A different limit must trigger a rebuild, not a bad read.
        let s3 = Sieve::load_or_build(5_000, Some(&path)).unwrap();
        assert_eq!(s3.limit(), 5_000);
        assert_eq!(s3.count_primes(), 669);
        // Corrupt magic is rejected by decode.
        let mut bytes = fs::read(&path).unwrap();
        bytes[0] = b'X';
        assert!(Sieve::decode(&bytes).is_err());
    }

    #[test]
    fn spf_table_basics() {
        let spf = spf_table(30);
        assert_eq!(spf[2], 2);
        assert_eq!(spf[15], 3);
        assert_eq!(spf[29], 29);
        assert_eq!(spf[30], 2);
        assert_eq!(spf[1], 0);
    }
}
