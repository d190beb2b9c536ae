//! Degree 2 and 3 extensions of a prime field.
//!
//! An extension is represented as F_q[x] modulo a monic irreducible picked
//! deterministically: the first irreducible in lexicographic order of the
//! non-leading coefficient tuple (c0, c1, ...), lowest degree position first.
//! Elements are coefficient triples `[c0, c1, c2]` with unused entries zero.
//!
//! The quadratic character of F_{q^r} is evaluated either through a table
//! built by walking powers of a multiplicative generator (chi of g^k is
//! (-1)^k), or by square-and-multiply when q^r is too large to tabulate.

use crate::error::{Error, Result};
use crate::field::FieldCtx;
use crate::poly::Poly;
use std::sync::OnceLock;

/// Extensions up to this many elements get a materialised chi table.
const EXT_TABLE_LIMIT: u64 = 1 << 25;

/// An element of F_{q^r}, r <= 3; coefficients reduced, unused entries zero.
pub type ExtElem = [u64; 3];

#[derive(Debug)]
pub struct ExtField {
    q: u64,
    degree: usize,
    modulus: Poly,
    /// x^r and x^(r+1) reduced mod the modulus, used by multiplication.
    red: [[u64; 3]; 2],
    chi_table: OnceLock<Option<Vec<i8>>>,
}

impl FieldCtx {
    /// Attaches the canonical degree-r extension, r in {2, 3}.
    pub fn extension(&self, r: usize) -> Result<ExtField> {
        ExtField::new(self, r)
    }
}

impl ExtField {
    pub fn new(ctx: &FieldCtx, r: usize) -> Result<ExtField> {
        if r != 2 && r != 3 {
            return Err(Error::BadExtensionDegree(r));
        }
        let modulus = smallest_irreducible(ctx, r);
        let mut ext = ExtField {
            q: ctx.q(),
            degree: r,
            modulus,
            red: [[0; 3]; 2],
            chi_table: OnceLock::new(),
        };
        ext.red[0] = ext.reduce_power(ctx, r);
        ext.red[1] = ext.reduce_power(ctx, r + 1);
        Ok(ext)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    /// Number of field elements q^r.
    pub fn order(&self) -> u64 {
        self.q.pow(self.degree as u32)
    }

    fn reduce_power(&self, ctx: &FieldCtx, k: usize) -> [u64; 3] {
        // x^k mod modulus for k = r or r + 1.
        let xk = Poly::x().inflate(k);
        let (_, rem) = xk.divrem(ctx, &self.modulus);
        let mut out = [0u64; 3];
        for i in 0..self.degree {
            out[i] = rem.coeff(i);
        }
        out
    }

    fn fadd(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.q {
            s - self.q
        } else {
            s
        }
    }

    fn fsub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.q - b
        }
    }

    pub fn zero(&self) -> ExtElem {
        [0; 3]
    }

    pub fn one(&self) -> ExtElem {
        [1, 0, 0]
    }

    pub fn embed(&self, c: u64) -> ExtElem {
        [c % self.q, 0, 0]
    }

    pub fn is_zero(&self, a: &ExtElem) -> bool {
        a.iter().all(|&c| c == 0)
    }

    /// Checks an element is reduced: coefficients below q, none beyond degree.
    pub fn check_reduced(&self, a: &ExtElem) -> Result<()> {
        for (i, &c) in a.iter().enumerate() {
            if c >= self.q || (i >= self.degree && c != 0) {
                return Err(Error::NotReduced { value: c, q: self.q });
            }
        }
        Ok(())
    }

    /// Bijection onto [0, q^r) used for tables and enumeration.
    pub fn index(&self, a: &ExtElem) -> u64 {
        a[0] + self.q * (a[1] + self.q * a[2])
    }

    pub fn from_index(&self, mut i: u64) -> ExtElem {
        let mut out = [0u64; 3];
        for slot in out.iter_mut().take(self.degree) {
            *slot = i % self.q;
            i /= self.q;
        }
        debug_assert_eq!(i, 0);
        out
    }

    pub fn add(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        [self.fadd(a[0], b[0]), self.fadd(a[1], b[1]), self.fadd(a[2], b[2])]
    }

    pub fn sub(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        [self.fsub(a[0], b[0]), self.fsub(a[1], b[1]), self.fsub(a[2], b[2])]
    }

    pub fn mul(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        let q = self.q as u128;
        let r = self.degree;
        // Schoolbook product, coefficients accumulated in u128.
        let mut prod = [0u128; 5];
        for i in 0..r {
            if a[i] == 0 {
                continue;
            }
            for j in 0..r {
                prod[i + j] += a[i] as u128 * b[j] as u128;
            }
        }
        // Fold x^r and x^(r+1) back down using the precomputed reductions.
        for k in (r..2 * r - 1).rev() {
            let c = (prod[k] % q) as u64;
            prod[k] = 0;
            if c == 0 {
                continue;
            }
            let red = &self.red[k - r];
            for i in 0..r {
                prod[i] += c as u128 * red[i] as u128;
            }
        }
        let mut out = [0u64; 3];
        for i in 0..r {
            out[i] = (prod[i] % q) as u64;
        }
        out
    }

    pub fn pow(&self, a: &ExtElem, mut e: u64) -> ExtElem {
        let mut base = *a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Evaluates a base-field polynomial at an extension element.
    pub fn eval_poly(&self, p: &Poly, x: &ExtElem) -> ExtElem {
        let mut acc = self.zero();
        for &c in p.coeffs().iter().rev() {
            acc = self.mul(&acc, x);
            acc[0] = self.fadd(acc[0], c % self.q);
        }
        acc
    }

    /// Quadratic character of F_{q^r}. Rejects non-reduced input.
    pub fn chi(&self, a: &ExtElem) -> Result<i8> {
        self.check_reduced(a)?;
        if self.is_zero(a) {
            return Ok(0);
        }
        if let Some(table) = self.chi_table() {
            return Ok(table[self.index(a) as usize]);
        }
        let e = self.pow(a, (self.order() - 1) / 2);
        if e == self.one() {
            Ok(1)
        } else {
            debug_assert_eq!(e, self.embed(self.q - 1));
            Ok(-1)
        }
    }

    /// The chi table, built on first use by a generator walk; None when the
    /// extension is too large to tabulate.
    pub fn chi_table(&self) -> Option<&Vec<i8>> {
        self.chi_table
            .get_or_init(|| {
                let n = self.order();
                if n > EXT_TABLE_LIMIT {
                    return None;
                }
                let g = self.generator();
                let mut table = vec![0i8; n as usize];
                let mut acc = self.one();
                for k in 0..n - 1 {
                    table[self.index(&acc) as usize] = if k % 2 == 0 { 1 } else { -1 };
                    acc = self.mul(&acc, &g);
                }
                debug_assert_eq!(acc, self.one(), "generator order mismatch");
                Some(table)
            })
            .as_ref()
    }

    /// A multiplicative generator, found by scanning elements in index order
    /// and testing the order against the prime factors of q^r - 1.
    pub fn generator(&self) -> ExtElem {
        let n = self.order() - 1;
        let primes = prime_factors(n);
        for i in 2..self.order() {
            let c = self.from_index(i);
            if primes.iter().all(|&p| self.pow(&c, n / p) != self.one()) {
                return c;
            }
        }
        unreachable!("finite field has a generator")
    }

    /// Square root in F_{q^r} by Tonelli-Shanks; None for nonresidues.
    pub fn sqrt(&self, a: &ExtElem) -> Result<Option<ExtElem>> {
        match self.chi(a)? {
            0 => return Ok(Some(self.zero())),
            -1 => return Ok(None),
            _ => {}
        }
        let n = self.order();
        if n % 4 == 3 {
            return Ok(Some(self.pow(a, (n + 1) / 4)));
        }
        let mut s = 0u32;
        let mut t = n - 1;
        while t % 2 == 0 {
            t /= 2;
            s += 1;
        }
        // Deterministic nonresidue scan in index order.
        let z = (2..n)
            .map(|i| self.from_index(i))
            .find(|c| self.chi(c).unwrap() == -1)
            .expect("nonresidue exists");
        let mut m = s;
        let mut c = self.pow(&z, t);
        let mut u = self.pow(a, t);
        let mut r = self.pow(a, (t + 1) / 2);
        while u != self.one() {
            let mut i = 0u32;
            let mut probe = u;
            while probe != self.one() {
                probe = self.mul(&probe, &probe);
                i += 1;
            }
            let mut b = c;
            for _ in 0..(m - i - 1) {
                b = self.mul(&b, &b);
            }
            m = i;
            c = self.mul(&b, &b);
            u = self.mul(&u, &c);
            r = self.mul(&r, &b);
        }
        Ok(Some(r))
    }
}

/// First monic irreducible of degree r in lexicographic coefficient order.
/// For r in {2, 3} irreducibility is equivalent to having no root.
fn smallest_irreducible(ctx: &FieldCtx, r: usize) -> Poly {
    let q = ctx.q();
    let total = q.pow(r as u32);
    for idx in 0..total {
        let mut i = idx;
        let mut coeffs = Vec::with_capacity(r + 1);
        // idx = c0 * q^(r-1) + ... + c_(r-1), so tuples (c0, c1, ...) ascend
        // lexicographically as idx ascends.
        let mut tuple = [0u64; 3];
        for k in (0..r).rev() {
            tuple[k] = i % q;
            i /= q;
        }
        coeffs.extend_from_slice(&tuple[..r]);
        coeffs.push(1);
        let cand = Poly::from_coeffs(ctx, coeffs);
        if (0..q).all(|x| cand.eval(ctx, x) != 0) {
            return cand;
        }
    }
    unreachable!("irreducibles of degree {r} exist over F_{q}")
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}
