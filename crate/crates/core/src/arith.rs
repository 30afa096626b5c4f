//! Small integer helpers: primality, modular powers, valuations and digit weights.

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub fn mod_pow(base: u64, mut exp: u64, modulus: u64) -> u64 {
    let m = modulus as u128;
    let mut b = base as u128 % m;
    let mut acc = 1u128 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

/// Distinct prime factors in ascending order.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Multiplicative order of `a` modulo `m`, given that it divides `group_order`.
pub fn multiplicative_order(a: u64, m: u64, group_order: u64) -> u64 {
    let mut order = group_order;
    for q in prime_factors(group_order) {
        while order.is_multiple_of(q) && mod_pow(a, order / q, m) == 1 {
            order /= q;
        }
    }
    order
}

/// Exponent of the largest power of `p` dividing `d` (d > 0).
pub fn valuation(mut d: u64, p: u64) -> u32 {
    debug_assert!(d > 0);
    let mut v = 0;
    while d.is_multiple_of(p) {
        d /= p;
        v += 1;
    }
    v
}

/// Number of nonzero digits of `x` in base `p`.
pub fn digit_weight(mut x: u64, p: u64) -> u32 {
    let mut w = 0;
    while x > 0 {
        if !x.is_multiple_of(p) {
            w += 1;
        }
        x /= p;
    }
    w
}

pub fn pow(p: u64, e: u32) -> u64 {
    p.pow(e)
}

/// `log_p(x)` when `x` is an exact power of `p`.
pub fn exact_log(mut x: u64, p: u64) -> Option<u32> {
    if x == 0 {
        return None;
    }
    let mut e = 0;
    while x > 1 {
        if !x.is_multiple_of(p) {
            return None;
        }
        x /= p;
        e += 1;
    }
    Some(e)
}

/// C(n, k) saturating at `u128::MAX`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // exact at every step: acc * (n - i) / (i + 1) is C(n, i + 1)
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_of_two() {
        assert_eq!(multiplicative_order(2, 9, 6), 6);
        assert_eq!(multiplicative_order(2, 25, 20), 20);
        assert_eq!(multiplicative_order(2, 49, 42), 21);
        assert_eq!(multiplicative_order(2, 7, 6), 3);
    }

    #[test]
    fn valuations_and_weights() {
        assert_eq!(valuation(6, 3), 1);
        assert_eq!(valuation(1, 3), 0);
        assert_eq!(valuation(18, 3), 2);
        assert_eq!(digit_weight(21, 3), 2);
        assert_eq!(digit_weight(1, 2), 1);
        assert_eq!(digit_weight(0, 5), 0);
        assert_eq!(exact_log(27, 3), Some(3));
        assert_eq!(exact_log(12, 3), None);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(27, 3), 2925);
        assert_eq!(binomial(9, 0), 1);
        assert_eq!(binomial(3, 4), 0);
        assert_eq!(binomial(64, 32), 1_832_624_140_942_590_534);
    }
}
