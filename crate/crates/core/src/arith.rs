//! Small integer-arithmetic helpers: primality, factoring, factorials.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Deterministic Miller-Rabin for `u64`. The listed bases decide primality
/// exactly for all 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a % n, d, n);
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

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
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

/// `k!` as `u64`, or an error when it overflows.
pub fn checked_factorial(k: u32) -> Result<u64> {
    let mut acc: u64 = 1;
    for i in 2..=k as u64 {
        acc = acc.checked_mul(i).ok_or(Error::DegreeTooLarge(k))?;
    }
    Ok(acc)
}

/// Factor a positive integer into `(prime, exponent)` pairs, smallest prime
/// first. Trial division handles the small part; Pollard's rho picks up any
/// large cofactors (resultant coefficients can get big).
pub fn factor(n: &BigInt) -> Vec<(BigInt, u32)> {
    assert!(n.is_positive(), "factor() expects a positive integer");
    let mut out: Vec<(BigInt, u32)> = Vec::new();
    let mut rest = n.clone();
    for p in 2u64.. {
        if p > 100_000 {
            break;
        }
        let bp = BigInt::from(p);
        if (&bp * &bp) > rest {
            break;
        }
        let mut e = 0u32;
        while (&rest % &bp).is_zero() {
            rest /= &bp;
            e += 1;
        }
        if e > 0 {
            out.push((bp, e));
        }
    }
    if !rest.is_one() {
        let mut stack = vec![rest];
        let mut found: Vec<BigInt> = Vec::new();
        while let Some(m) = stack.pop() {
            if is_probable_prime(&m) {
                found.push(m);
                continue;
            }
            let d = pollard_rho(&m);
            stack.push(m / &d);
            stack.push(d);
        }
        found.sort();
        let mut i = 0;
        while i < found.len() {
            let mut j = i;
            while j < found.len() && found[j] == found[i] {
                j += 1;
            }
            out.push((found[i].clone(), (j - i) as u32));
            i = j;
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
    }
    out
}

/// All positive divisors of `n` in ascending order. Errors out if the
/// divisor count explodes (keeps rational-root candidate sets sane).
pub fn divisors(n: &BigInt) -> Result<Vec<BigInt>> {
    let mut divs = vec![BigInt::one()];
    for (p, e) in factor(n) {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        let mut pe = BigInt::one();
        for _ in 0..=e {
            for d in &divs {
                next.push(d * &pe);
            }
            pe *= &p;
        }
        divs = next;
        if divs.len() > 200_000 {
            return Err(Error::RootSearchOverflow);
        }
    }
    divs.sort();
    Ok(divs)
}

fn is_probable_prime(n: &BigInt) -> bool {
    if let Ok(small) = u64::try_from(n) {
        return is_prime_u64(small);
    }
    let two = BigInt::from(2);
    if (n % &two).is_zero() {
        return false;
    }
    let n_minus_1: BigInt = n - 1;
    let mut d = n_minus_1.clone();
    let mut s = 0u32;
    while (&d % &two).is_zero() {
        d /= &two;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let a = BigInt::from(a);
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: &BigInt) -> BigInt {
    let one = BigInt::one();
    let two = BigInt::from(2);
    if (n % &two).is_zero() {
        return two;
    }
    let mut c = BigInt::one();
    loop {
        let mut x = BigInt::from(2);
        let mut y = BigInt::from(2);
        let mut d = BigInt::one();
        while d.is_one() {
            x = (&x * &x + &c) % n;
            y = (&y * &y + &c) % n;
            y = (&y * &y + &c) % n;
            let diff = (&x - &y).abs();
            if diff.is_zero() {
                break;
            }
            d = diff.gcd(n);
        }
        if !d.is_one() && &d != n {
            return d;
        }
        c += &one;
    }
}
