//! Prime field arithmetic with precomputed quadratic character tables.
//!
//! Everything in this crate counts points through the quadratic character
//! chi: chi(0) = 0, chi(x) = +1 for nonzero squares, -1 otherwise. A counting
//! loop touches chi once per point, so [`FieldCtx`] materialises the whole
//! table (and a square-root table next to it) at construction time for any
//! modulus small enough to enumerate. For larger moduli the same operations
//! fall back to exponentiation.

use crate::error::{Error, Result};

/// Largest q for which chi and sqrt tables are materialised (16M entries).
const TABLE_LIMIT: u64 = 1 << 24;

/// Arithmetic context for a prime field F_q.
#[derive(Debug, Clone)]
pub struct FieldCtx {
    q: u64,
    /// chi[x] for all x in [0, q); empty when q > TABLE_LIMIT.
    chi: Vec<i8>,
    /// sqrt[x] = the smaller square root of x when chi[x] >= 0; empty like chi.
    sqrt: Vec<u32>,
}

impl FieldCtx {
    /// Builds the context for prime q. Fails on composite or even input.
    pub fn new(q: u64) -> Result<FieldCtx> {
        if q < 2 || !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        if q == 2 {
            return Err(Error::InvalidInput("q = 2 unsupported (odd q required)".into()));
        }
        let (chi, sqrt) = if q <= TABLE_LIMIT {
            build_tables(q)
        } else {
            (Vec::new(), Vec::new())
        };
        Ok(FieldCtx { q, chi, sqrt })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    #[inline]
    pub fn reduce_i64(&self, x: i64) -> u64 {
        x.rem_euclid(self.q as i64) as u64
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.q {
            s - self.q
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.q - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.q - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        mulmod(a, b, self.q)
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
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

    /// Multiplicative inverse of a nonzero element, via Fermat.
    pub fn inv(&self, a: u64) -> u64 {
        debug_assert!(a % self.q != 0, "inverse of zero");
        self.pow(a, self.q - 2)
    }

    /// Quadratic character of x (reduced or not).
    #[inline]
    pub fn chi(&self, x: u64) -> i8 {
        let x = if x < self.q { x } else { x % self.q };
        if self.chi.is_empty() {
            chi_by_euler(x, self.q)
        } else {
            self.chi[x as usize]
        }
    }

    /// Table access without reduction; callers must pass x < q.
    #[inline]
    pub fn chi_reduced(&self, x: u64) -> i8 {
        debug_assert!(x < self.q);
        if self.chi.is_empty() {
            chi_by_euler(x, self.q)
        } else {
            self.chi[x as usize]
        }
    }

    /// Raw chi table for hot loops. Empty above the table limit.
    pub fn chi_table(&self) -> &[i8] {
        &self.chi
    }

    /// A square root of x, if one exists. Returns the smaller of the pair.
    pub fn sqrt(&self, x: u64) -> Option<u64> {
        let x = x % self.q;
        if x == 0 {
            return Some(0);
        }
        if !self.sqrt.is_empty() {
            return if self.chi[x as usize] == 1 {
                Some(self.sqrt[x as usize] as u64)
            } else {
                None
            };
        }
        if chi_by_euler(x, self.q) != 1 {
            return None;
        }
        let r = tonelli_shanks(x, self.q);
        Some(r.min(self.q - r))
    }

    /// Smallest quadratic nonresidue, used as the canonical scaling class.
    pub fn nonsquare(&self) -> u64 {
        (2..self.q).find(|&x| self.chi(x) == -1).expect("odd prime field has a nonresidue")
    }
}

/// Quadratic character by Euler's criterion: x^((q-1)/2) in {1, q-1}.
pub fn chi_by_euler(x: u64, q: u64) -> i8 {
    let x = x % q;
    if x == 0 {
        return 0;
    }
    let e = powmod(x, (q - 1) / 2, q);
    if e == 1 {
        1
    } else {
        debug_assert_eq!(e, q - 1);
        -1
    }
}

#[inline]
pub fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn powmod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, m);
        }
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    acc
}

fn build_tables(q: u64) -> (Vec<i8>, Vec<u32>) {
    let n = q as usize;
    let mut chi = vec![-1i8; n];
    let mut sqrt = vec![0u32; n];
    chi[0] = 0;
    // Walk i^2 for i up to (q-1)/2; each nonzero square is hit exactly once
    // and i is the smaller of its two roots.
    for i in 1..=(q / 2) {
        let s = mulmod(i, i, q) as usize;
        chi[s] = 1;
        sqrt[s] = i as u32;
    }
    (chi, sqrt)
}

/// Tonelli-Shanks over F_q for an odd prime q; x must be a nonzero square.
fn tonelli_shanks(x: u64, q: u64) -> u64 {
    if q % 4 == 3 {
        return powmod(x, (q + 1) / 4, q);
    }
    let mut s = 0u32;
    let mut t = q - 1;
    while t % 2 == 0 {
        t /= 2;
        s += 1;
    }
    let z = (2..q).find(|&z| chi_by_euler(z, q) == -1).expect("nonresidue exists");
    let mut m = s;
    let mut c = powmod(z, t, q);
    let mut u = powmod(x, t, q);
    let mut r = powmod(x, (t + 1) / 2, q);
    while u != 1 {
        let mut i = 0u32;
        let mut probe = u;
        while probe != 1 {
            probe = mulmod(probe, probe, q);
            i += 1;
        }
        let mut b = c;
        for _ in 0..(m - i - 1) {
            b = mulmod(b, b, q);
        }
        m = i;
        c = mulmod(b, b, q);
        u = mulmod(u, c, q);
        r = mulmod(r, b, q);
    }
    r
}

/// Deterministic Miller-Rabin, exact for all u64.
pub fn is_prime(n: u64) -> bool {
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
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chi_matches_euler_criterion_exhaustively() {
        for q in [5u64, 7, 47, 61, 97] {
            let f = FieldCtx::new(q).unwrap();
            for x in 0..q {
                assert_eq!(f.chi(x), chi_by_euler(x, q), "q={q} x={x}");
            }
        }
    }

    #[test]
    fn chi_of_five_over_f47_is_minus_one() {
        let f = FieldCtx::new(47).unwrap();
        assert_eq!(f.chi(5), -1);
    }

    #[test]
    fn chi_table_balance() {
        for q in [47u64, 61, 137, 997] {
            let f = FieldCtx::new(q).unwrap();
            assert_eq!(f.chi(0), 0);
            let plus = (0..q).filter(|&x| f.chi(x) == 1).count() as u64;
            let minus = (0..q).filter(|&x| f.chi(x) == -1).count() as u64;
            assert_eq!(plus, (q - 1) / 2);
            assert_eq!(minus, (q - 1) / 2);
            let sum: i64 = (0..q).map(|x| f.chi(x) as i64).sum();
            assert_eq!(sum, 0);
        }
    }

    #[test]
    fn chi_is_multiplicative() {
        // Exhaustive on a couple of fields, including one above table size in
        // spirit (997 still uses tables; the Euler path is covered separately).
        for q in [47u64, 61] {
            let f = FieldCtx::new(q).unwrap();
            for x in 1..q {
                for y in 1..q {
                    assert_eq!(f.chi(f.mul(x, y)), f.chi(x) * f.chi(y));
                }
            }
        }
    }

    #[test]
    fn sqrt_inverts_squaring() {
        for q in [47u64, 61, 557] {
            let f = FieldCtx::new(q).unwrap();
            for x in 0..q {
                match f.sqrt(x) {
                    Some(r) => assert_eq!(f.mul(r, r), x, "q={q} x={x}"),
                    None => assert_eq!(f.chi(x), -1),
                }
            }
        }
    }

    #[test]
    fn tonelli_shanks_agrees_with_tables() {
        for q in [41u64, 97, 113] {
            let f = FieldCtx::new(q).unwrap();
            for x in 1..q {
                if f.chi(x) == 1 {
                    let r = tonelli_shanks(x, q);
                    assert_eq!(mulmod(r, r, q), x);
                }
            }
        }
    }

    #[test]
    fn inv_and_pow() {
        let f = FieldCtx::new(47).unwrap();
        for x in 1..47 {
            assert_eq!(f.mul(x, f.inv(x)), 1);
        }
        assert_eq!(f.pow(5, 23), 46); // Euler criterion for the nonresidue 5
    }

    #[test]
    fn primality_basics() {
        assert!(is_prime(2));
        assert!(is_prime(47));
        assert!(is_prime(997));
        assert!(is_prime(2_147_483_647));
        assert!(!is_prime(1));
        assert!(!is_prime(35));
        assert!(!is_prime(2209));
        assert!(FieldCtx::new(35).is_err());
    }

    #[test]
    fn nonsquare_is_canonical() {
        let f = FieldCtx::new(47).unwrap();
        let s = f.nonsquare();
        assert_eq!(f.chi(s), -1);
        for x in 2..s {
            assert_eq!(f.chi(x), 1);
        }
    }
}
