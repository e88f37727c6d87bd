//! Elementary integer arithmetic: gcd/lcm, modular exponentiation, CRT,
//! factorization, valuations and primality for `u64` operands.

use crate::error::{Error, Result};

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// gcd of a signed integer with a positive modulus; gcd(0, n) = n.
pub fn gcd_i(a: i64, n: u64) -> u64 {
    gcd(a.unsigned_abs(), n)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

pub fn checked_lcm(a: u64, b: u64) -> Option<u64> {
    if a == 0 || b == 0 {
        return Some(0);
    }
    (a / gcd(a, b)).checked_mul(b)
}

/// Reduce a signed integer into [0, n).
pub fn mod_u(a: i64, n: u64) -> u64 {
    debug_assert!(n > 0);
    (a as i128).rem_euclid(n as i128) as u64
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Extended Euclid: returns (g, x, y) with a*x + b*y = g.
pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// Modular inverse of a mod m for coprime inputs.
pub fn inv_mod(a: u64, m: u64) -> Result<u64> {
    let (g, x, _) = ext_gcd(a as i128, m as i128);
    if g != 1 {
        return Err(Error::NotCoprime { a, b: m });
    }
    Ok(x.rem_euclid(m as i128) as u64)
}

/// Solve x = r1 (mod m1), x = r2 (mod m2) for coprime m1, m2.
pub fn crt_pair(r1: u64, m1: u64, r2: u64, m2: u64) -> Result<u64> {
    let m = m1
        .checked_mul(m2)
        .ok_or(Error::ModulusTooLarge { n: u64::MAX, max: u64::MAX })?;
    let inv = inv_mod(m1 % m2, m2)?;
    let diff = (r2 as i128 - r1 as i128).rem_euclid(m2 as i128) as u64;
    Ok((r1 as u128 + m1 as u128 * mul_mod(diff, inv, m2) as u128).rem_euclid(m as u128) as u64)
}

/// p-adic valuation of n; None (i.e. infinity) for n = 0.
pub fn valuation(mut n: u64, p: u64) -> Option<u32> {
    debug_assert!(p >= 2);
    if n == 0 {
        return None;
    }
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    Some(v)
}

/// Deterministic Miller-Rabin, valid for all u64.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

/// Prime factorization as sorted (prime, exponent) pairs.
pub fn factor(n: u64) -> Vec<(u64, u32)> {
    let mut out: Vec<(u64, u32)> = Vec::new();
    let push = |p: u64, out: &mut Vec<(u64, u32)>| match out.iter_mut().find(|(q, _)| *q == p) {
        Some((_, e)) => *e += 1,
        None => out.push((p, 1)),
    };
    let mut rest = n;
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
        while rest % p == 0 {
            rest /= p;
            push(p, &mut out);
        }
    }
    let mut stack = vec![rest];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime(m) {
            push(m, &mut out);
            continue;
        }
        let d = pollard_rho(m);
        stack.push(d);
        stack.push(m / d);
    }
    out.sort_unstable();
    out
}

/// Set of primes dividing n (the support), sorted.
pub fn support(n: u64) -> Vec<u64> {
    factor(n).into_iter().map(|(p, _)| p).collect()
}

/// Support of a signed integer; support(0) is every prime, signalled as None.
pub fn support_i(a: i64) -> Option<Vec<u64>> {
    if a == 0 {
        None
    } else {
        Some(support(a.unsigned_abs()))
    }
}

/// Product of the distinct primes dividing n; radical(1) = 1.
pub fn radical(n: u64) -> u64 {
    support(n).into_iter().product()
}

pub fn is_squarefree(n: u64) -> bool {
    n != 0 && factor(n).iter().all(|&(_, e)| e == 1)
}

pub fn euler_phi(n: u64) -> u64 {
    factor(n).into_iter().fold(n, |acc, (p, _)| acc / p * (p - 1))
}

/// Smallest prime factor; None for n in {0, 1}.
pub fn smallest_prime_factor(n: u64) -> Option<u64> {
    if n < 2 {
        None
    } else {
        Some(factor(n)[0].0)
    }
}

/// Signed divisibility with the zero convention: x | y iff y is a multiple
/// of x, where every integer divides 0 and only 0 divides 0 among x = 0.
pub fn divides_i(x: i128, y: i128) -> bool {
    if x == 0 {
        y == 0
    } else {
        y % x == 0
    }
}

/// 1-based index of a prime in the increasing enumeration of all primes.
pub fn prime_index(p: u64) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::Precondition(format!("{p} is not prime")));
    }
    let mut idx = 0;
    let mut q = 2;
    loop {
        if is_prime(q) {
            idx += 1;
            if q == p {
                return Ok(idx);
            }
        }
        q += 1;
    }
}
