//! Exact rational scalars and the integer utilities (factorisation,
//! divisor enumeration, square testing) that the root searches rely on.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Arbitrary-precision rational in canonical form (gcd 1, positive
/// denominator); `BigRational` maintains the invariant on construction.
pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rint(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parses an exact rational "p" or "p/q"; decimal points are rejected to
/// keep the exactness contract explicit.
pub fn parse_exact(s: &str) -> Result<Rat> {
    let s = s.trim();
    if s.contains('.') || s.contains('e') || s.contains('E') {
        return Err(Error::InconsistentInput(format!(
            "expected an exact fraction p/q, got '{s}'"
        )));
    }
    Rat::from_str(s)
        .map_err(|_| Error::InconsistentInput(format!("expected an exact fraction p/q, got '{s}'")))
}

/// Exact square root when `r` is a perfect square of a rational.
pub fn rational_sqrt(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    let num = r.numer().magnitude();
    let den = r.denom().magnitude();
    let sn = num.sqrt();
    let sd = den.sqrt();
    if &sn * &sn == *num && &sd * &sd == *den {
        Some(Rat::new(BigInt::from(sn), BigInt::from(sd)))
    } else {
        None
    }
}

/// Splits n > 0 as s²·d with d squarefree.
pub fn squarefree_split(n: &BigUint) -> (BigUint, BigUint) {
    let f = factorize(n.clone());
    let mut s = BigUint::one();
    let mut d = BigUint::one();
    for (p, e) in f {
        for _ in 0..e / 2 {
            s *= &p;
        }
        if e % 2 == 1 {
            d *= &p;
        }
    }
    (s, d)
}

/// Prime factorisation: trial division by small primes, then Miller-Rabin
/// plus Pollard's rho (Brent variant) on the remaining cofactor.
pub fn factorize(mut n: BigUint) -> BTreeMap<BigUint, u32> {
    let mut out = BTreeMap::new();
    if n.is_zero() || n.is_one() {
        return out;
    }
    for p in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let bp = BigUint::from(p);
        while (&n % &bp).is_zero() {
            *out.entry(bp.clone()).or_insert(0) += 1;
            n /= &bp;
        }
    }
    let mut q = BigUint::from(41u32);
    let limit = BigUint::from(100_000u32);
    while &q * &q <= n && q < limit {
        while (&n % &q).is_zero() {
            *out.entry(q.clone()).or_insert(0) += 1;
            n /= &q;
        }
        q += 2u32;
    }
    if n.is_one() {
        return out;
    }
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_probable_prime(&m) {
            *out.entry(m).or_insert(0) += 1;
            continue;
        }
        let f = pollard_rho(&m);
        stack.push(&m / &f);
        stack.push(f);
    }
    out
}

fn is_probable_prime(n: &BigUint) -> bool {
    if n < &BigUint::from(2u32) {
        return false;
    }
    for p in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let bp = BigUint::from(p);
        if n == &bp {
            return true;
        }
        if (n % &bp).is_zero() {
            return false;
        }
    }
    // Miller-Rabin with a fixed deterministic base set (valid < 3.3e24)
    let one = BigUint::one();
    let two = BigUint::from(2u32);
    let n1 = n - &one;
    let s = n1.trailing_zeros().unwrap_or(0);
    let d = &n1 >> s;
    'bases: for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == n1 {
            continue;
        }
        for _ in 0..s.saturating_sub(1) {
            x = x.modpow(&two, n);
            if x == n1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: &BigUint) -> BigUint {
    let one = BigUint::one();
    if (n % 2u32).is_zero() {
        return BigUint::from(2u32);
    }
    let mut c = BigUint::one();
    loop {
        let mut x = BigUint::from(2u32);
        let mut y = BigUint::from(2u32);
        let mut d = BigUint::one();
        while d == one {
            x = (&x * &x + &c) % n;
            y = (&y * &y + &c) % n;
            y = (&y * &y + &c) % n;
            let diff = if x > y { &x - &y } else { &y - &x };
            if diff.is_zero() {
                break;
            }
            d = diff.gcd(n);
        }
        if d != one && &d != n {
            return d;
        }
        c += 1u32;
    }
}

/// All positive divisors of |n|.
pub fn divisors(n: &BigInt) -> Vec<BigUint> {
    let mag = n.magnitude().clone();
    if mag.is_zero() {
        return vec![];
    }
    let f = factorize(mag);
    let mut out = vec![BigUint::one()];
    for (p, e) in f {
        let mut next = Vec::with_capacity(out.len() * (e as usize + 1));
        for d in &out {
            let mut pk = BigUint::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        out = next;
    }
    out.sort();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_rejects_floats() {
        assert!(parse_exact("1.5").is_err());
        assert!(parse_exact("1e3").is_err());
        assert_eq!(parse_exact("-3/4").unwrap(), rat(-3, 4));
        assert_eq!(parse_exact("7").unwrap(), rint(7));
    }

    #[test]
    fn square_detection() {
        assert_eq!(rational_sqrt(&rat(9, 4)), Some(rat(3, 2)));
        assert_eq!(rational_sqrt(&rat(2, 1)), None);
        assert_eq!(rational_sqrt(&rat(-1, 1)), None);
        assert_eq!(rational_sqrt(&Rat::zero()), Some(Rat::zero()));
    }

    #[test]
    fn squarefree_of_24() {
        let (s, d) = squarefree_split(&BigUint::from(24u32));
        assert_eq!(s, BigUint::from(2u32));
        assert_eq!(d, BigUint::from(6u32));
    }

    #[test]
    fn factor_and_divisors() {
        let f = factorize(BigUint::from(2916u32)); // 2²·3⁶
        assert_eq!(f.get(&BigUint::from(2u32)), Some(&2));
        assert_eq!(f.get(&BigUint::from(3u32)), Some(&6));
        let d = divisors(&BigInt::from(28));
        let vals: Vec<u32> = d.iter().map(|x| x.to_string().parse().unwrap()).collect();
        assert_eq!(vals, vec![1, 2, 4, 7, 14, 28]);
    }

    #[test]
    fn factor_larger_semiprime() {
        // 1000003 × 998117 — beyond the trial-division window
        let n = BigUint::from(1000003u64) * BigUint::from(998117u64);
        let f = factorize(n.clone());
        let rebuilt = f.iter().fold(BigUint::one(), |acc, (p, e)| acc * p.pow(*e));
        assert_eq!(rebuilt, n);
        assert_eq!(f.len(), 2);
    }
}
