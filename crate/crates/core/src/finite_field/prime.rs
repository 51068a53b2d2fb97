//! Primality and the binomial field-size bound.

/// Witnesses that make Miller-Rabin deterministic for every `u64`.
const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
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

/// Deterministic primality test for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &WITNESSES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &WITNESSES {
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

/// Least prime strictly greater than `m`, or `None` if it does not fit in a `u64`.
pub fn smallest_prime_above(m: u64) -> Option<u64> {
    let mut candidate = m.checked_add(1)?;
    loop {
        if is_prime(candidate) {
            return Some(candidate);
        }
        candidate = candidate.checked_add(1)?;
    }
}

/// `C(n, k)`, or `None` on overflow.
pub fn binomial(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // exact at every step: acc * (n - i) is divisible by (i + 1)
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

/// The field-size bound `C(n-1, k-1)` an instantiation field must exceed.
pub fn field_size_bound(n: usize, k: usize) -> Option<u64> {
    if k == 0 || k > n {
        return None;
    }
    binomial(n as u64 - 1, k as u64 - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
    }

    #[test]
    fn miller_rabin_matches_trial_division() {
        for n in 0..20_000u64 {
            assert_eq!(is_prime(n), trial_division(n), "n = {n}");
        }
    }

    #[test]
    fn large_primes_and_pseudoprimes() {
        assert!(is_prime(1_000_000_007));
        assert!(is_prime(18_446_744_073_709_551_557)); // largest u64 prime
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to 2,3,5,7
        assert!(!is_prime(341_550_071_728_321));
        assert!(!is_prime(u64::MAX));
    }

    #[test]
    fn smallest_prime_above_examples() {
        // oracle: trial division scan
        let oracle = |m: u64| (m + 1..).find(|&c| trial_division(c)).unwrap();
        assert_eq!(oracle(35), 37);
        assert_eq!(oracle(6), 7);
        assert_eq!(oracle(3), 5);
        assert_eq!(smallest_prime_above(35), Some(37));
        assert_eq!(smallest_prime_above(1), Some(2));
        assert_eq!(smallest_prime_above(6), Some(7));
        assert_eq!(smallest_prime_above(3), Some(5));
        for m in 0..2_000 {
            assert_eq!(smallest_prime_above(m), Some(oracle(m)));
        }
        assert_eq!(smallest_prime_above(u64::MAX - 1), None);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(7, 4), Some(35));
        assert_eq!(binomial(3, 1), Some(3));
        assert_eq!(binomial(4, 2), Some(6));
        assert_eq!(binomial(5, 7), Some(0));
        assert_eq!(binomial(63, 31), Some(916_312_070_471_295_267));
        assert_eq!(binomial(200, 100), None);
        assert_eq!(field_size_bound(8, 5), Some(35));
        assert_eq!(field_size_bound(3, 5), None);
    }
}
