//! Modular arithmetic helpers: primality, Legendre symbols, square roots
//! modulo odd primes (Tonelli-Shanks) and their Hensel lifts to prime
//! powers.

use crate::error::Error;

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

/// Modular inverse, when `gcd(a, m) = 1`.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i128) as u64)
}

/// Trial-division primality; sufficient for the desk-scale orders used here.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Legendre symbol of `a` modulo an odd prime: 0, 1 or −1.
pub fn legendre(a: u64, p: u64) -> i32 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    match pow_mod(a, (p - 1) / 2, p) {
        1 => 1,
        x if x == p - 1 => -1,
        _ => unreachable!("p must be an odd prime"),
    }
}

/// Square root of `a` modulo an odd prime `p`, if `a` is a quadratic
/// residue. Tonelli-Shanks.
pub fn sqrt_mod_prime(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if legendre(a, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod(a, (p + 1) / 4, p));
    }
    // write p−1 = q·2^s with q odd
    let mut q = p - 1;
    let mut s = 0u32;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    // a quadratic non-residue z
    let mut z = 2u64;
    while legendre(z, p) != -1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0u32;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
            if i == m {
                return None; // not a residue; cannot happen after the check
            }
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

/// Square root of `a` modulo `p^k` for odd prime `p` and `a` coprime to `p`,
/// by Tonelli-Shanks modulo `p` followed by Hensel lifting.
pub fn sqrt_mod_prime_power(a: u64, p: u64, k: u32) -> Result<Option<u64>, Error> {
    if p == 2 || !is_prime(p) {
        return Err(Error::validation(format!("{p} is not an odd prime")));
    }
    let pk = p.checked_pow(k).ok_or_else(|| {
        Error::validation(format!("prime power {p}^{k} exceeds the supported range"))
    })?;
    let a = a % pk;
    if a % p == 0 {
        return Err(Error::validation(
            "square roots of non-units are not supported".to_string(),
        ));
    }
    let Some(mut t) = sqrt_mod_prime(a % p, p) else {
        return Ok(None);
    };
    let mut modulus = p;
    while modulus < pk {
        // lift t from a root mod `modulus` to a root mod `modulus·p`
        let next = modulus * p;
        let t2 = mul_mod(t, t, next);
        let diff = (a % next + next - t2) % next;
        debug_assert_eq!(diff % modulus, 0);
        let c = mul_mod(
            diff / modulus,
            inv_mod(mul_mod(2, t, p), p).expect("2t is a unit"),
            p,
        );
        t = (t + c * modulus) % next;
        modulus = next;
    }
    debug_assert_eq!(mul_mod(t, t, pk), a % pk);
    Ok(Some(t))
}
