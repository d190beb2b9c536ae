//! Dense univariate polynomials over a prime field.
//!
//! Coefficients are stored lowest degree first and always reduced mod q; the
//! zero polynomial has an empty coefficient vector and `degree() == None`,
//! playing the role of degree minus infinity. Operations take the field
//! context explicitly so a `Poly` stays a plain data value.

use crate::error::{Error, Result};
use crate::field::FieldCtx;
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Poly {
    coeffs: Vec<u64>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(ctx: &FieldCtx, c: u64) -> Poly {
        Poly::from_coeffs(ctx, vec![c])
    }

    pub fn x() -> Poly {
        Poly { coeffs: vec![0, 1] }
    }

    /// Builds from lowest-first coefficients, reducing and trimming.
    pub fn from_coeffs(ctx: &FieldCtx, coeffs: Vec<u64>) -> Poly {
        let mut coeffs: Vec<u64> = coeffs.into_iter().map(|c| c % ctx.q()).collect();
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_coeffs_i64(ctx: &FieldCtx, coeffs: &[i64]) -> Poly {
        Poly::from_coeffs(ctx, coeffs.iter().map(|&c| ctx.reduce_i64(c)).collect())
    }

    /// None encodes the zero polynomial (degree minus infinity).
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Leading coefficient; 0 for the zero polynomial.
    pub fn lc(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    /// Horner evaluation.
    pub fn eval(&self, ctx: &FieldCtx, x: u64) -> u64 {
        let mut acc = 0u64;
        for &c in self.coeffs.iter().rev() {
            acc = ctx.add(ctx.mul(acc, x), c);
        }
        acc
    }

    pub fn add(&self, ctx: &FieldCtx, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(ctx.add(self.coeff(i), rhs.coeff(i)));
        }
        Poly::from_coeffs(ctx, out)
    }

    pub fn sub(&self, ctx: &FieldCtx, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(ctx.sub(self.coeff(i), rhs.coeff(i)));
        }
        Poly::from_coeffs(ctx, out)
    }

    pub fn mul(&self, ctx: &FieldCtx, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![0u64; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = ctx.add(out[i + j], ctx.mul(a, b));
            }
        }
        Poly::from_coeffs(ctx, out)
    }

    pub fn mul_scalar(&self, ctx: &FieldCtx, s: u64) -> Poly {
        Poly::from_coeffs(ctx, self.coeffs.iter().map(|&c| ctx.mul(c, s)).collect())
    }

    pub fn monic(&self, ctx: &FieldCtx) -> Poly {
        match self.lc() {
            0 | 1 => self.clone(),
            lc => self.mul_scalar(ctx, ctx.inv(lc)),
        }
    }

    /// Quotient and remainder; panics only if rhs is zero.
    pub fn divrem(&self, ctx: &FieldCtx, rhs: &Poly) -> (Poly, Poly) {
        assert!(!rhs.is_zero(), "division by the zero polynomial");
        let d = rhs.degree().unwrap();
        if self.coeffs.len() < rhs.coeffs.len() {
            return (Poly::zero(), self.clone());
        }
        let lcinv = ctx.inv(rhs.lc());
        let mut rem = self.coeffs.clone();
        let mut quo = vec![0u64; self.coeffs.len() - d];
        for i in (d..rem.len()).rev() {
            let c = ctx.mul(rem[i], lcinv);
            if c == 0 {
                continue;
            }
            quo[i - d] = c;
            for j in 0..=d {
                let t = ctx.mul(c, rhs.coeff(j));
                rem[i - d + j] = ctx.sub(rem[i - d + j], t);
            }
        }
        (Poly::from_coeffs(ctx, quo), Poly::from_coeffs(ctx, rem))
    }

    /// Exact division; errors if the remainder is nonzero.
    pub fn div_exact(&self, ctx: &FieldCtx, rhs: &Poly) -> Result<Poly> {
        let (q, r) = self.divrem(ctx, rhs);
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::InvalidInput("inexact polynomial division".into()))
        }
    }

    pub fn derivative(&self, ctx: &FieldCtx) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        let out = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| ctx.mul(c, (i as u64) % ctx.q()))
            .collect();
        Poly::from_coeffs(ctx, out)
    }

    /// Monic gcd; gcd(a, 0) = monic a, gcd(0, 0) = 0.
    pub fn gcd(&self, ctx: &FieldCtx, rhs: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(ctx, &b);
            a = b;
            b = r;
        }
        a.monic(ctx)
    }

    pub fn is_squarefree(&self, ctx: &FieldCtx) -> bool {
        if self.is_constant() {
            return !self.is_zero();
        }
        self.gcd(ctx, &self.derivative(ctx)).is_constant()
    }

    /// Substitutes another polynomial for x.
    pub fn compose(&self, ctx: &FieldCtx, inner: &Poly) -> Poly {
        let mut acc = Poly::zero();
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul(ctx, inner);
            acc = acc.add(ctx, &Poly::constant(ctx, c));
        }
        acc
    }

    /// p(x) -> p(x^k).
    pub fn inflate(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![0u64; (self.coeffs.len() - 1) * k + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            out[i * k] = c;
        }
        Poly { coeffs: out }
    }

    /// Multiplicity of x0 as a root (0 if not a root).
    pub fn multiplicity_at(&self, ctx: &FieldCtx, x0: u64) -> usize {
        assert!(!self.is_zero(), "multiplicity in the zero polynomial");
        let lin = Poly::from_coeffs(ctx, vec![ctx.neg(x0), 1]);
        let mut m = 0;
        let mut p = self.clone();
        while !p.is_constant() {
            let (q, r) = p.divrem(ctx, &lin);
            if !r.is_zero() {
                break;
            }
            p = q;
            m += 1;
        }
        m
    }

    /// Removes (x - x0)^mult; errors if the division is inexact.
    pub fn deflate_root(&self, ctx: &FieldCtx, x0: u64, mult: usize) -> Result<Poly> {
        let lin = Poly::from_coeffs(ctx, vec![ctx.neg(x0), 1]);
        let mut p = self.clone();
        for _ in 0..mult {
            p = p.div_exact(ctx, &lin)?;
        }
        Ok(p)
    }

    /// All roots in F_q by evaluation scan.
    pub fn roots(&self, ctx: &FieldCtx) -> Vec<u64> {
        (0..ctx.q()).filter(|&x| self.eval(ctx, x) == 0).collect()
    }

    /// Squarefree decomposition p = lc * prod part_i^mult_i with the parts
    /// monic, squarefree and pairwise coprime. Handles multiplicities
    /// divisible by the characteristic by deflating p-th powers, so it is
    /// exact in any F_q.
    pub fn squarefree_decomposition(&self, ctx: &FieldCtx) -> Vec<(Poly, usize)> {
        assert!(!self.is_zero(), "squarefree decomposition of zero");
        let mut out = Vec::new();
        decompose_into(&self.monic(ctx), ctx, 1, &mut out);
        out.sort_by_key(|(_, m)| *m);
        out
    }

    /// Product of the distinct monic irreducible factors.
    pub fn squarefree_part(&self, ctx: &FieldCtx) -> Poly {
        let mut acc = Poly::constant(ctx, 1);
        for (part, _) in self.squarefree_decomposition(ctx) {
            acc = acc.mul(ctx, &part);
        }
        acc
    }
}

fn decompose_into(f: &Poly, ctx: &FieldCtx, stride: usize, out: &mut Vec<(Poly, usize)>) {
    if f.is_constant() {
        return;
    }
    let fp = f.derivative(ctx);
    if fp.is_zero() {
        // f is a polynomial in x^p; its deflation g satisfies g(x)^p = f(x)
        // because coefficients lie in the prime field.
        decompose_into(&deflate_char(f, ctx), ctx, stride * ctx.q() as usize, out);
        return;
    }
    let mut c = f.gcd(ctx, &fp);
    let mut w = f.div_exact(ctx, &c).expect("gcd divides");
    let mut i = 1usize;
    while !w.is_constant() {
        let y = w.gcd(ctx, &c);
        let z = w.div_exact(ctx, &y).expect("gcd divides");
        if !z.is_constant() {
            out.push((z, i * stride));
        }
        w = y;
        c = c.div_exact(ctx, &w).expect("gcd divides");
        i += 1;
    }
    if !c.is_constant() {
        decompose_into(&deflate_char(&c, ctx), ctx, stride * ctx.q() as usize, out);
    }
}

fn deflate_char(f: &Poly, ctx: &FieldCtx) -> Poly {
    let p = ctx.q() as usize;
    let mut out = Vec::with_capacity(f.coeffs().len() / p + 1);
    for (i, &c) in f.coeffs().iter().enumerate() {
        if i % p == 0 {
            out.push(c);
        } else {
            assert_eq!(c, 0, "deflation of a polynomial not in x^p");
        }
    }
    Poly::from_coeffs(ctx, out)
}

impl fmt::Display for Poly {
    /// Renders highest degree first in the compact table style, e.g.
    /// `10x^2+46x+39`. Coefficients are the reduced representatives.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match (i, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "x")?,
                (1, c) => write!(f, "{c}x")?,
                (i, 1) => write!(f, "x^{i}")?,
                (i, c) => write!(f, "{c}x^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(q: u64) -> FieldCtx {
        FieldCtx::new(q).unwrap()
    }

    #[test]
    fn degree_sentinel() {
        let f = ctx(47);
        assert_eq!(Poly::zero().degree(), None);
        assert_eq!(Poly::constant(&f, 3).degree(), Some(0));
        assert_eq!(Poly::constant(&f, 0).degree(), None);
        assert_eq!(Poly::x().degree(), Some(1));
    }

    #[test]
    fn eval_matches_example() {
        let f = ctx(47);
        let p = Poly::from_coeffs(&f, vec![38, 1, 0, 1]); // x^3 + x + 38
        assert_eq!(p.eval(&f, 1), 40);
        assert_eq!(p.eval(&f, 0), 38);
    }

    #[test]
    fn divrem_roundtrip() {
        let f = ctx(47);
        let a = Poly::from_coeffs(&f, vec![3, 7, 0, 1, 9]);
        let b = Poly::from_coeffs(&f, vec![5, 2, 1]);
        let (q, r) = a.divrem(&f, &b);
        let back = q.mul(&f, &b).add(&f, &r);
        assert_eq!(back, a);
        assert!(r.degree() < b.degree());
    }

    #[test]
    fn gcd_of_shared_factor() {
        let f = ctx(47);
        let s = Poly::from_coeffs(&f, vec![1, 1]); // x + 1
        let a = s.mul(&f, &Poly::from_coeffs(&f, vec![2, 0, 1]));
        let b = s.mul(&f, &Poly::from_coeffs(&f, vec![5, 1]));
        assert_eq!(a.gcd(&f, &b), s.monic(&f));
        assert_eq!(a.gcd(&f, &Poly::zero()), a.monic(&f));
    }

    #[test]
    fn squarefree_detection() {
        let f = ctx(47);
        let sf = Poly::from_coeffs(&f, vec![1, 0, 1]); // x^2 + 1
        assert!(sf.is_squarefree(&f));
        let sq = Poly::from_coeffs(&f, vec![1, 46, 1]).mul(&f, &Poly::from_coeffs(&f, vec![1, 46, 1]));
        assert!(!sq.is_squarefree(&f));
    }

    #[test]
    fn squarefree_decomposition_examples() {
        let f = ctx(47);
        // (x - 1)^2: one part (x - 1) at multiplicity 2.
        let lin = Poly::from_coeffs_i64(&f, &[-1, 1]);
        let p = lin.mul(&f, &lin);
        let d = p.squarefree_decomposition(&f);
        assert_eq!(d, vec![(lin.clone(), 2)]);
        // x^3: part x at multiplicity 3.
        let p = Poly::from_coeffs(&f, vec![0, 0, 0, 1]);
        assert_eq!(p.squarefree_decomposition(&f), vec![(Poly::x(), 3)]);
        // x^2 + 1 over F_47 is irreducible and squarefree.
        let p = Poly::from_coeffs(&f, vec![1, 0, 1]);
        assert_eq!(p.squarefree_decomposition(&f), vec![(p.clone(), 1)]);
    }

    #[test]
    fn squarefree_decomposition_reconstructs() {
        let f = ctx(47);
        let a = Poly::from_coeffs(&f, vec![3, 1]);
        let b = Poly::from_coeffs(&f, vec![5, 1]);
        let mut p = Poly::constant(&f, 9);
        p = p.mul(&f, &a);
        for _ in 0..3 {
            p = p.mul(&f, &b);
        }
        let d = p.squarefree_decomposition(&f);
        let mut back = Poly::constant(&f, p.lc());
        for (part, m) in &d {
            for _ in 0..*m {
                back = back.mul(&f, part);
            }
        }
        assert_eq!(back, p);
        assert_eq!(d.len(), 2);
    }

    #[test]
    fn char_power_deflation() {
        let f = ctx(5);
        // x^5 + 1 = (x + 1)^5 over F_5.
        let p = Poly::from_coeffs(&f, vec![1, 0, 0, 0, 0, 1]);
        let d = p.squarefree_decomposition(&f);
        assert_eq!(d, vec![(Poly::from_coeffs(&f, vec![1, 1]), 5)]);
        assert!(!p.is_squarefree(&f));
    }

    #[test]
    fn multiplicity_and_deflate() {
        let f = ctx(47);
        let lin = Poly::from_coeffs_i64(&f, &[-3, 1]);
        let other = Poly::from_coeffs(&f, vec![1, 1]);
        let p = lin.mul(&f, &lin).mul(&f, &other);
        assert_eq!(p.multiplicity_at(&f, 3), 2);
        assert_eq!(p.multiplicity_at(&f, 46), 1);
        assert_eq!(p.multiplicity_at(&f, 5), 0);
        let d = p.deflate_root(&f, 3, 2).unwrap();
        assert_eq!(d, other);
    }

    #[test]
    fn compose_and_inflate() {
        let f = ctx(47);
        let p = Poly::from_coeffs(&f, vec![38, 1, 0, 1]);
        let sq = Poly::from_coeffs(&f, vec![0, 0, 1]);
        let c = p.compose(&f, &sq);
        assert_eq!(c, p.inflate(2));
        for x in 0..47 {
            assert_eq!(c.eval(&f, x), p.eval(&f, f.mul(x, x)));
        }
    }

    #[test]
    fn roots_scan() {
        let f = ctx(47);
        let p = Poly::from_coeffs_i64(&f, &[-6, 1]).mul(&f, &Poly::from_coeffs_i64(&f, &[-9, 1]));
        assert_eq!(p.roots(&f), vec![6, 9]);
    }

    #[test]
    fn display_table_style() {
        let f = ctx(47);
        let p = Poly::from_coeffs(&f, vec![39, 46, 10]);
        assert_eq!(p.to_string(), "10x^2+46x+39");
        let s = Poly::from_coeffs(&f, vec![33, 0, 22, 0, 4, 0, 1]);
        assert_eq!(s.to_string(), "x^6+4x^4+22x^2+33");
        assert_eq!(Poly::zero().to_string(), "0");
    }
}
