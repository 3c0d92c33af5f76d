//! Integer helpers: extended gcd, primality, factorization, Kronecker symbols
//! and square roots modulo primes.

use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Extended gcd `(g, s, t)` with `s*a + t*b = g >= 0`.
///
/// When `a` divides `b` the representative `(|a|, sign(a), 0)` is returned, so
/// a left fold over repeated values keeps the first coefficient.
pub fn egcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    if !a.is_zero() && (b % a).is_zero() {
        let s = if a.is_negative() { -BigInt::one() } else { BigInt::one() };
        return (a.abs(), s, BigInt::zero());
    }
    let (mut old_r, mut r) = (a.clone(), b.clone());
    let (mut old_s, mut s) = (BigInt::one(), BigInt::zero());
    let (mut old_t, mut t) = (BigInt::zero(), BigInt::one());
    while !r.is_zero() {
        let q = &old_r / &r;
        let next_r = &old_r - &q * &r;
        old_r = core::mem::replace(&mut r, next_r);
        let next_s = &old_s - &q * &s;
        old_s = core::mem::replace(&mut s, next_s);
        let next_t = &old_t - &q * &t;
        old_t = core::mem::replace(&mut t, next_t);
    }
    if old_r.is_negative() {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Exponent of the prime `p` in the nonzero integer `n`.
pub fn valuation(n: &BigInt, p: u64) -> u32 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut k = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return k;
        }
        n = q;
        k += 1;
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
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

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in SMALL {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn rho_u64(n: u64) -> u64 {
    // Brent's variant; n is odd, composite and not a prime power of a small prime.
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = x.abs_diff(y).gcd(&n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

fn factor_u64_into(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime_u64(n) {
        out.push(n);
        return;
    }
    for p in [2u64, 3, 5, 7, 11, 13] {
        if n.is_multiple_of(p) {
            out.push(p);
            factor_u64_into(n / p, out);
            return;
        }
    }
    let d = rho_u64(n);
    factor_u64_into(d, out);
    factor_u64_into(n / d, out);
}

fn is_probable_prime_big(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    let one = BigUint::one();
    let n_minus_one = n - &one;
    let s = n_minus_one.trailing_zeros().unwrap_or(0);
    let d = &n_minus_one >> s;
    'witness: for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41] {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == n_minus_one {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_one {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn rho_big(n: &BigUint) -> BigUint {
    let mut c = BigUint::one();
    loop {
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut x = BigUint::from(2u32);
        let mut y = x.clone();
        let mut d = BigUint::one();
        while d.is_one() {
            x = f(&x);
            y = f(&f(&y));
            let diff = if x > y { &x - &y } else { &y - &x };
            d = diff.gcd(n);
        }
        if &d != n {
            return d;
        }
        c += 1u32;
    }
}

fn factor_big_into(n: BigUint, out: &mut Vec<u64>) -> Result<()> {
    if let Some(small) = n.to_u64() {
        factor_u64_into(small, out);
        return Ok(());
    }
    if is_probable_prime_big(&n) {
        return Err(Error::PrimeTooLarge);
    }
    let d = rho_big(&n);
    let rest = &n / &d;
    factor_big_into(d, out)?;
    factor_big_into(rest, out)
}

/// Prime factorization of `|n|` as `(prime, exponent)` pairs in increasing order.
///
/// Fails only when a prime factor does not fit in 64 bits.
pub fn factor(n: &BigInt) -> Result<Vec<(u64, u32)>> {
    if n.is_zero() {
        return Err(Error::ZeroElement);
    }
    let mut rest = n.magnitude().clone();
    let mut primes = Vec::new();
    let mut p = 2u64;
    while p < 1000 {
        while (&rest % p).is_zero() {
            primes.push(p);
            rest /= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    factor_big_into(rest, &mut primes)?;
    primes.sort_unstable();
    let mut out: Vec<(u64, u32)> = Vec::new();
    for q in primes {
        match out.last_mut() {
            Some((last, k)) if *last == q => *k += 1,
            _ => out.push((q, 1)),
        }
    }
    Ok(out)
}

/// Factorization of a machine integer.
pub fn factor_u64(n: u64) -> Vec<(u64, u32)> {
    factor(&BigInt::from(n)).expect("64-bit input has 64-bit factors")
}

fn residue(a: &BigInt, p: u64) -> u64 {
    let r = a.mod_floor(&BigInt::from(p));
    r.to_u64().expect("residue below a 64-bit modulus")
}

/// Kronecker symbol `(d | p)` for a prime `p`.
pub fn kronecker(d: &BigInt, p: u64) -> i8 {
    if p == 2 {
        let r = residue(d, 8);
        return match r {
            0 | 2 | 4 | 6 => 0,
            1 | 7 => 1,
            _ => -1,
        };
    }
    let r = residue(d, p);
    if r == 0 {
        return 0;
    }
    if pow_mod(r, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// A square root of `a` modulo the odd prime `p`, if one exists (Tonelli-Shanks).
pub fn sqrt_mod_prime(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod(a, (p + 1) / 4, p));
    }
    let mut q = p - 1;
    let mut s = 0u32;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mul_mod(tt, tt, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

/// Whether `n` is a perfect square (negative numbers are not).
pub fn is_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}

/// Whether `n` is squarefree; `n` must be nonzero.
pub fn is_squarefree(n: &BigInt) -> Result<bool> {
    Ok(factor(n)?.iter().all(|&(_, k)| k == 1))
}

/// Euler's totient of a positive integer.
pub fn totient(n: u64) -> BigUint {
    let mut acc = BigUint::one();
    for (p, k) in factor_u64(n) {
        acc *= BigUint::from(p).pow(k - 1) * (p - 1);
    }
    acc
}
