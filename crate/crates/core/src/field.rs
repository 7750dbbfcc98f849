//! Arithmetic in prime fields `Z/qZ` with small `q`.

use crate::error::{Error, Result};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn check_prime(q: u64) -> Result<()> {
    if is_prime(q) {
        Ok(())
    } else {
        Err(Error::NotPrime(q))
    }
}

/// The first `count` primes in increasing order.
pub fn first_primes(count: usize) -> Vec<u64> {
    (2u64..).filter(|&n| is_prime(n)).take(count).collect()
}

/// A prime field small enough that every element fits in a `u32`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    q: u32,
}

impl PrimeField {
    pub fn new(q: u64) -> Result<Self> {
        check_prime(q)?;
        let q = u32::try_from(q).map_err(|_| Error::Precondition(format!("field order {q} too large")))?;
        Ok(Self { q })
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.q as u64) as u32
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        ((a as u64 + self.q as u64 - b as u64) % self.q as u64) as u32
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.q as u64) as u32
    }

    pub fn pow(&self, mut base: u32, mut exp: u64) -> u32 {
        let mut acc = 1 % self.q;
        base %= self.q;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `a` must be nonzero.
    pub fn inv(&self, a: u32) -> u32 {
        debug_assert!(!a.is_multiple_of(self.q));
        self.pow(a, self.q as u64 - 2)
    }

    /// Smallest generator of the multiplicative group.
    pub fn primitive_root(&self) -> u32 {
        if self.q == 2 {
            return 1;
        }
        let n = (self.q - 1) as u64;
        let mut factors = Vec::new();
        let mut m = n;
        let mut d = 2;
        while d * d <= m {
            if m.is_multiple_of(d) {
                factors.push(d);
                while m.is_multiple_of(d) {
                    m /= d;
                }
            }
            d += 1;
        }
        if m > 1 {
            factors.push(m);
        }
        (2..self.q)
            .find(|&g| factors.iter().all(|&p| self.pow(g, n / p) != 1))
            .expect("prime field has a primitive root")
    }
}
