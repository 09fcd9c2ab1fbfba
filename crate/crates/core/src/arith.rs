//! Small-integer helpers shared by the modular-symbol and class-number code.

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut f = 3;
    while f * f <= n {
        if n.is_multiple_of(f) {
            return false;
        }
        f += 2;
    }
    true
}

/// Primes in `lo..=hi`, ascending.
pub fn primes_between(lo: u64, hi: u64) -> Vec<u64> {
    if hi < 2 || lo > hi {
        return Vec::new();
    }
    let hi_us = hi as usize;
    let mut sieve = vec![true; hi_us + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= hi_us {
        if sieve[i] {
            let mut j = i * i;
            while j <= hi_us {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    (lo.max(2)..=hi).filter(|&k| sieve[k as usize]).collect()
}

/// Smallest prime factor of `n >= 2`.
pub fn smallest_prime_factor(n: u64) -> u64 {
    debug_assert!(n >= 2);
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut f = 3;
    while f * f <= n {
        if n.is_multiple_of(f) {
            return f;
        }
        f += 2;
    }
    n
}

pub fn gcd_i64(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Extended Euclid: returns `(g, x, y)` with `a*x + b*y = g >= 0`.
pub fn xgcd_i64(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i64, 0i64);
    let (mut old_t, mut t) = (0i64, 1i64);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Inverse of `a` modulo the prime `p`, for `a` not divisible by `p`.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    let (g, x, _) = xgcd_i64(a as i64, p as i64);
    debug_assert_eq!(g, 1);
    x.rem_euclid(p as i64) as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_small() {
        assert_eq!(primes_between(0, 20), vec![2, 3, 5, 7, 11, 13, 17, 19]);
        assert_eq!(primes_between(14, 16), Vec::<u64>::new());
        assert!(is_prime(653));
        assert!(!is_prime(1) && !is_prime(4) && !is_prime(9));
    }

    #[test]
    fn xgcd_identity() {
        for a in -30..30i64 {
            for b in -30..30i64 {
                let (g, x, y) = xgcd_i64(a, b);
                assert_eq!(a * x + b * y, g);
                assert_eq!(g, gcd_i64(a, b));
            }
        }
        assert_eq!(inv_mod(5, 11), 9);
    }
}
