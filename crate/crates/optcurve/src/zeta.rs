//! Weil polynomials from exact point counts over small extensions.
//!
//! Counting a curve over F_q, F_{q^2}, ..., F_{q^g} pins down the numerator
//! L(t) of its zeta function: the power sums of the Frobenius eigenvalues are
//! S_r = q^r + 1 - N_r, and Newton's identities convert those into the
//! elementary symmetric functions, i.e. the coefficients of L. Every division
//! in that conversion must be exact and every power sum must respect the Weil
//! bound, so inconsistent counts are rejected rather than rounded.

use crate::disc19::{Disc19Field, Kind};
use crate::elliptic::EllipticCurve;
use crate::error::{Error, Result};
use crate::field::FieldCtx;
use crate::genus2::Genus2Curve;
use crate::genus3::Genus3Cover;
use serde::{Deserialize, Serialize};

/// Points of y^2 = x^3 + ax + b over the degree-r extension, infinity included.
pub fn elliptic_over_ext(ctx: &FieldCtx, e: &EllipticCurve, r: usize) -> Result<u64> {
    if r == 1 {
        return Ok(e.count(ctx));
    }
    let ext = ctx.extension(r)?;
    let f = e.rhs(ctx);
    let mut n: u64 = 1;
    for i in 0..ext.order() {
        let x = ext.from_index(i);
        let fx = ext.eval_poly(&f, &x);
        n = (n as i64 + 1 + ext.chi(&fx)? as i64) as u64;
    }
    Ok(n)
}

/// Points of the smooth model z^2 = h(x) of a genus 2 sextic over the
/// degree-r extension. The sextic has even degree, so the two points over
/// x = infinity exist exactly when the leading coefficient is a square there.
pub fn genus2_over_ext(ctx: &FieldCtx, curve: &Genus2Curve, r: usize) -> Result<u64> {
    if r == 1 {
        return Ok(curve.count(ctx));
    }
    let ext = ctx.extension(r)?;
    let h = &curve.sextic;
    let lc = ext.embed(h.lc());
    let mut n: i64 = if ext.chi(&lc)? == 1 { 2 } else { 0 };
    for i in 0..ext.order() {
        let x = ext.from_index(i);
        let hx = ext.eval_poly(h, &x);
        n += 1 + ext.chi(&hx)? as i64;
    }
    Ok(n as u64)
}

/// Points of the double cover z^2 = u(x) + v(x) y over the degree-r extension.
///
/// The plain character sum over the points of E is exact only when every
/// affine zero of u + vy on E is simple over the algebraic closure. That holds
/// whenever the norm polynomial u^2 - v^2 f is squarefree and coprime to f
/// (for v = 0: whenever u itself is). Covers outside that certificate would
/// need the same even-order corrections as the base count, but resolved over
/// each extension; they are rejected instead of miscounted.
pub fn genus3_over_ext(ctx: &FieldCtx, cover: &Genus3Cover, r: usize) -> Result<u64> {
    if r == 1 {
        return Ok(cover.count(ctx));
    }
    certify_simple_zeros(ctx, cover)?;
    let ext = ctx.extension(r)?;
    let f = cover.e.rhs(ctx);
    let fiber = cover.infinity_fiber(ctx);
    let mut n: i64 = if fiber.ramified {
        1
    } else {
        // Even pole order comes from the u^2 term, so the square class of
        // lc(u) decides whether the two sheets are rational over F_{q^r}.
        let lc = ext.embed(cover.u.lc());
        if ext.chi(&lc)? == 1 {
            2
        } else {
            0
        }
    };
    for i in 0..ext.order() {
        let x = ext.from_index(i);
        let fx = ext.eval_poly(&f, &x);
        match ext.chi(&fx)? {
            -1 => {}
            0 => {
                // One curve point (x, 0); the fiber functions reduce to u(x).
                let ux = ext.eval_poly(&cover.u, &x);
                n += 1 + ext.chi(&ux)? as i64;
            }
            _ => {
                let y = ext
                    .sqrt(&fx)?
                    .expect("chi said square, sqrt must succeed");
                let ux = ext.eval_poly(&cover.u, &x);
                let vy = ext.mul(&ext.eval_poly(&cover.v, &x), &y);
                let w_plus = ext.add(&ux, &vy);
                let w_minus = ext.sub(&ux, &vy);
                n += 2 + ext.chi(&w_plus)? as i64 + ext.chi(&w_minus)? as i64;
            }
        }
    }
    Ok(n as u64)
}

fn certify_simple_zeros(ctx: &FieldCtx, cover: &Genus3Cover) -> Result<()> {
    let f = cover.e.rhs(ctx);
    let witness = if cover.v.is_zero() {
        cover.u.clone()
    } else {
        cover.norm_poly(ctx)
    };
    if !witness.is_squarefree(ctx) {
        return Err(Error::ExtensionCountUnsupported(
            "the fiber discriminant has a repeated factor, so some zeros of \
             u + vy are not simple"
                .into(),
        ));
    }
    if witness.gcd(ctx, &f).degree() != Some(0) {
        return Err(Error::ExtensionCountUnsupported(
            "the fiber discriminant shares a factor with x^3 + ax + b, so \
             u + vy vanishes to even order at a 2-torsion point"
                .into(),
        ));
    }
    Ok(())
}

/// Numerator of the zeta function, stored low degree first: coeffs[k] is the
/// t^k coefficient, coeffs[0] = 1, degree 2 * genus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LPolynomial {
    pub q: u64,
    pub genus: usize,
    pub coeffs: Vec<i64>,
}

impl LPolynomial {
    /// a_{2g-i} = q^{g-i} a_i for every i.
    pub fn functional_equation_holds(&self) -> bool {
        let g = self.genus;
        (0..g).all(|i| {
            let scale = (self.q as i128).pow((g - i) as u32);
            self.coeffs[2 * g - i] as i128 == scale * self.coeffs[i] as i128
        })
    }

    /// The point count over F_{q^r} this polynomial predicts, via the
    /// power-sum recurrence run forward from the coefficients.
    pub fn predicted_count(&self, r: usize) -> u64 {
        assert!(r >= 1 && r <= 12, "power sums overflow past r = 12");
        let n = 2 * self.genus;
        // e_k with alternating signs recovered from a_k = (-1)^k e_k.
        let e: Vec<i128> = (0..=n)
            .map(|k| {
                let a = self.coeffs[k] as i128;
                if k % 2 == 0 {
                    a
                } else {
                    -a
                }
            })
            .collect();
        let mut p = vec![0i128; r + 1];
        for k in 1..=r {
            let mut acc = 0i128;
            for i in 1..k.min(n + 1) {
                let term = e[i] * p[k - i];
                acc += if i % 2 == 1 { term } else { -term };
            }
            if k <= n {
                let term = k as i128 * e[k];
                acc += if k % 2 == 1 { term } else { -term };
            }
            p[k] = acc;
        }
        ((self.q as i128).pow(r as u32) + 1 - p[r]) as u64
    }
}

/// Recovers L(t) from the counts N_1, ..., N_g over the first g extensions.
///
/// Newton's identities give k e_k = sum_{i<k} (-1)^{i-1} e_{k-i} p_i ... with
/// p_r = q^r + 1 - N_r; each division by k must be exact, and each p_r must
/// satisfy p_r^2 <= (2 g)^2 q^r, or the counts cannot come from any curve.
pub fn lpoly_from_counts(q: u64, genus: usize, counts: &[u64]) -> Result<LPolynomial> {
    if genus == 0 || counts.len() != genus {
        return Err(Error::InvalidInput(format!(
            "need exactly {genus} counts, got {}",
            counts.len()
        )));
    }
    let mut p = vec![0i128; genus + 1];
    for r in 1..=genus {
        let qr = (q as i128).pow(r as u32);
        let s = qr + 1 - counts[r - 1] as i128;
        let bound = 4 * (genus as i128) * (genus as i128) * qr;
        if s * s > bound {
            return Err(Error::InconsistentCounts(format!(
                "trace {s} over the degree-{r} extension violates the Weil \
                 bound {s}^2 <= 4g^2 q^{r}"
            )));
        }
        p[r] = s;
    }
    let mut e = vec![0i128; genus + 1];
    e[0] = 1;
    for k in 1..=genus {
        let mut acc = 0i128;
        for i in 1..=k {
            let term = e[k - i] * p[i];
            acc += if i % 2 == 1 { term } else { -term };
        }
        if acc % k as i128 != 0 {
            return Err(Error::InconsistentCounts(format!(
                "Newton identity at degree {k} needs {acc} divisible by {k}"
            )));
        }
        e[k] = acc / k as i128;
    }
    let mut coeffs = vec![0i64; 2 * genus + 1];
    for (k, ek) in e.iter().enumerate() {
        let a = if k % 2 == 0 { *ek } else { -*ek };
        coeffs[k] = i64::try_from(a)
            .map_err(|_| Error::InconsistentCounts(format!("coefficient a_{k} overflows")))?;
    }
    for i in 0..genus {
        let scale = (q as i128).pow((genus - i) as u32);
        let a = scale * coeffs[i] as i128;
        coeffs[2 * genus - i] = i64::try_from(a)
            .map_err(|_| Error::InconsistentCounts(format!("coefficient a_{} overflows", 2 * genus - i)))?;
    }
    Ok(LPolynomial {
        q,
        genus,
        coeffs,
    })
}

/// The target numerator (1 +/- mt + qt^2)^genus of an optimal curve: plus for
/// maximal, minus for minimal.
pub fn optimal_lpoly(field: &Disc19Field, genus: usize, kind: Kind) -> LPolynomial {
    let base = [1i64, kind.sign() * field.m() as i64, field.q() as i64];
    let mut coeffs = vec![1i64];
    for _ in 0..genus {
        let mut next = vec![0i64; coeffs.len() + 2];
        for (i, &c) in coeffs.iter().enumerate() {
            for (j, &b) in base.iter().enumerate() {
                next[i + j] += c * b;
            }
        }
        coeffs = next;
    }
    LPolynomial {
        q: field.q(),
        genus,
        coeffs,
    }
}

/// Whether the counts' L-polynomial is the optimal one of the given kind.
pub fn is_optimal(field: &Disc19Field, lpoly: &LPolynomial, kind: Kind) -> bool {
    *lpoly == optimal_lpoly(field, lpoly.genus, kind)
}
