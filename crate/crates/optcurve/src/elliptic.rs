//! Elliptic curves y^2 = x^3 + a x + b over odd prime fields.
//!
//! The affine count is the character sum over x of 1 + chi(x^3 + a x + b),
//! plus one point at infinity. Over a discriminant -19 field the trace
//! t = q + 1 - N classifies a curve as maximal (t = -m), minimal (t = +m) or
//! neither, and twisting by a nonsquare negates the trace.

use crate::disc19::{Classification, Disc19Field, Kind};
use crate::error::{Error, Result};
use crate::field::FieldCtx;
use crate::poly::Poly;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EllipticCurve {
    pub q: u64,
    pub a: u64,
    pub b: u64,
}

impl EllipticCurve {
    /// Builds the curve, rejecting singular Weierstrass data.
    pub fn new(ctx: &FieldCtx, a: u64, b: u64) -> Result<EllipticCurve> {
        let q = ctx.q();
        let (a, b) = (a % q, b % q);
        if discriminant_vanishes(ctx, a, b) {
            return Err(Error::SingularCurve { q, a, b });
        }
        Ok(EllipticCurve { q, a, b })
    }

    /// The right-hand side cubic x^3 + a x + b.
    pub fn rhs(&self, ctx: &FieldCtx) -> Poly {
        Poly::from_coeffs(ctx, vec![self.b, self.a, 0, 1])
    }

    /// Exact point count including the point at infinity.
    pub fn count(&self, ctx: &FieldCtx) -> u64 {
        count_raw(ctx, self.a, self.b)
    }

    /// Frobenius trace t = q + 1 - N.
    pub fn trace(&self, ctx: &FieldCtx) -> i64 {
        (self.q + 1) as i64 - self.count(ctx) as i64
    }

    /// Counts and classifies against the Serre interval of the field.
    pub fn classify(&self, field: &Disc19Field, ctx: &FieldCtx) -> TraceReport {
        debug_assert_eq!(field.q(), self.q);
        let n1 = self.count(ctx);
        TraceReport {
            q: self.q,
            a: self.a,
            b: self.b,
            n1,
            trace: (self.q + 1) as i64 - n1 as i64,
            class: field.classify_count(1, n1),
        }
    }

    /// The quadratic twist by c: (a c^2, b c^3). The trace is negated
    /// exactly when c is a nonsquare; for square c the result is isomorphic.
    pub fn quadratic_twist(&self, ctx: &FieldCtx, c: u64) -> Result<Twist> {
        let c = c % ctx.q();
        if c == 0 {
            return Err(Error::InvalidInput("twist by zero".into()));
        }
        let c2 = ctx.mul(c, c);
        let c3 = ctx.mul(c2, c);
        let curve = EllipticCurve {
            q: self.q,
            a: ctx.mul(self.a, c2),
            b: ctx.mul(self.b, c3),
        };
        debug_assert!(!discriminant_vanishes(ctx, curve.a, curve.b));
        Ok(Twist { curve, trace_negated: ctx.chi(c) == -1 })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Twist {
    pub curve: EllipticCurve,
    pub trace_negated: bool,
}

/// Count, trace and Serre classification of one curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceReport {
    pub q: u64,
    pub a: u64,
    pub b: u64,
    pub n1: u64,
    pub trace: i64,
    pub class: Classification,
}

fn discriminant_vanishes(ctx: &FieldCtx, a: u64, b: u64) -> bool {
    // 4 a^3 + 27 b^2 = 0 exactly for singular models.
    let a3 = ctx.mul(ctx.mul(a, a), a);
    let b2 = ctx.mul(b, b);
    ctx.add(ctx.mul(4 % ctx.q(), a3), ctx.mul(27 % ctx.q(), b2)) == 0
}

/// Character-sum count of y^2 = x^3 + a x + b without a smoothness check.
pub(crate) fn count_raw(ctx: &FieldCtx, a: u64, b: u64) -> u64 {
    let q = ctx.q();
    let cubes = cube_table(ctx);
    let mut n: i64 = (q + 1) as i64;
    for x in 0..q {
        let v = (cubes[x as usize] + a * x + b) % q;
        n += ctx.chi_reduced(v) as i64;
    }
    n as u64
}

/// x^3 mod q for every x; shared across candidates during searches.
pub(crate) fn cube_table(ctx: &FieldCtx) -> Vec<u64> {
    let q = ctx.q();
    (0..q).map(|x| ctx.mul(ctx.mul(x, x), x)).collect()
}

/// True when the chi sum over x lands exactly on `target`, with an early
/// abort as soon as the exact tail bound |remaining sum| <= points remaining
/// rules the target out.
fn chi_sum_hits(ctx: &FieldCtx, cubes: &[u64], a: u64, b: u64, target: i64) -> bool {
    let q = ctx.q();
    let mut sum: i64 = 0;
    for x in 0..q {
        let v = (cubes[x as usize] + a * x + b) % q;
        sum += ctx.chi_reduced(v) as i64;
        let remaining = (q - x - 1) as i64;
        if (target - sum).abs() > remaining {
            return false;
        }
    }
    sum == target
}

/// First (a, b) in lexicographic order whose curve is optimal of the given
/// kind. The scan is sharded with rayon yet returns the lexicographic
/// minimum of all hits, so the result is independent of the worker count.
pub fn find_optimal(field: &Disc19Field, ctx: &FieldCtx, kind: Kind) -> Result<(EllipticCurve, u64)> {
    let q = field.q();
    let target = -kind.sign() * field.m() as i64; // trace = -sign * m, chi sum = kind.sign() * m
    let cubes = cube_table(ctx);
    let hit = (0..q * q).into_par_iter().find_first(|&idx| {
        let (a, b) = (idx / q, idx % q);
        !discriminant_vanishes(ctx, a, b) && chi_sum_hits(ctx, &cubes, a, b, -target)
    });
    match hit {
        Some(idx) => {
            let curve = EllipticCurve { q, a: idx / q, b: idx % q };
            Ok((curve, field.optimal_count(1, kind)))
        }
        None => Err(Error::SearchFailed(format!(
            "no {kind} elliptic curve over F_{q}; class number one guarantees one exists"
        ))),
    }
}
