//! Exhaustive search for genus 3 covers of an elliptic curve hitting an
//! optimal point count.
//!
//! Candidates are the pairs (u, v) in one of the three normal forms. Scaling
//! (u, v) by a nonzero square lambda^2 gives an isomorphic cover, so each
//! scaling class is enumerated exactly once by pinning a designated
//! coefficient to a square-class representative: 1 or the smallest
//! nonsquare. The index layouts per form, most significant digit first:
//!
//! * form 1 (v = beta_0):           [vsel, a2, a1, a0], size 2 q^3
//! * form 2 (v = beta_1 x + beta_0): [vsel, b0, a2, a1, a0], size 2 q^4
//! * form 3 (deg u = 3), three sub-shapes in order, total size 2 q^5:
//!     v = 0:      [vsel -> a3, a2, a1, a0]                 2 q^3
//!     v = beta_0: [vsel, a3 in 1..q, a2, a1, a0]           2 (q-1) q^3
//!     v linear:   [vsel, b0, a3 in 1..q, a2, a1, a0]       2 q (q-1) q^3
//!
//! a0 is always the innermost digit, so a block of q consecutive indices
//! shares every precomputable quantity. The kernel walks the affine points
//! of E once per block, accumulating the naive character sum per candidate
//! with an exact interval prune: after j points the final affine sum lies in
//! [acc - z, acc + z + 2 rem] where z counts zeros of w seen so far. A
//! candidate surviving the scan with z = 0 has a certified exact count;
//! otherwise the exact smooth count decides. Count hits are accepted only
//! with a branch certificate B = 4, since a genus 4 cover can meet a genus 3
//! target inside its own Weil window.

use crate::disc19::{Disc19Field, Kind};
use crate::elliptic::EllipticCurve;
use crate::error::{Error, Result};
use crate::field::FieldCtx;
use crate::genus3::Genus3Cover;
use crate::poly::Poly;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Candidates per parallel slice; slices are scanned in order so outcomes
/// are identical for any worker count.
const CHUNK_BLOCKS: u64 = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchParams {
    pub form: u8,
    /// Resume point; must be a multiple of q (blocks are never split).
    pub cursor: u64,
    /// Cap on candidates scanned this call, None for the whole space.
    pub budget: Option<u64>,
    /// Stop at the end of the first slice containing a hit.
    pub stop_on_hit: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchHit {
    pub index: u64,
    pub u: [u64; 4],
    pub v: [u64; 2],
    pub count: u64,
    pub branch_b: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub form: u8,
    pub hits: Vec<SearchHit>,
    pub scanned: u64,
    /// First unscanned index; resume from here.
    pub cursor: u64,
    pub space: u64,
    pub complete: bool,
}

/// Number of candidates for the form over F_q.
pub fn space_size(q: u64, form: u8) -> u64 {
    let q3 = q * q * q;
    match form {
        1 => 2 * q3,
        2 => 2 * q3 * q,
        3 => 2 * q3 * q * q,
        _ => 0,
    }
}

/// Decodes an index into (u, v) coefficient arrays, lowest degree first.
/// `s` is the designated nonsquare representative.
pub fn decode(q: u64, s: u64, form: u8, idx: u64) -> ([u64; 4], [u64; 2]) {
    let q3 = q * q * q;
    let rep = |sel: u64| if sel == 0 { 1 } else { s };
    let low3 = |r: u64| [r % q, (r / q) % q, (r / (q * q)) % q];
    match form {
        1 => {
            let [a0, a1, a2] = low3(idx % q3);
            ([a0, a1, a2, 0], [rep(idx / q3), 0])
        }
        2 => {
            let q4 = q3 * q;
            let b0 = (idx % q4) / q3;
            let [a0, a1, a2] = low3(idx % q3);
            ([a0, a1, a2, 0], [b0, rep(idx / q4)])
        }
        3 => {
            let shape_a = 2 * q3;
            let shape_b = 2 * (q - 1) * q3;
            if idx < shape_a {
                let [a0, a1, a2] = low3(idx % q3);
                ([a0, a1, a2, rep(idx / q3)], [0, 0])
            } else if idx < shape_a + shape_b {
                let j = idx - shape_a;
                let stride = (q - 1) * q3;
                let a3 = 1 + (j % stride) / q3;
                let [a0, a1, a2] = low3(j % q3);
                ([a0, a1, a2, a3], [rep(j / stride), 0])
            } else {
                let j = idx - shape_a - shape_b;
                let stride = q * (q - 1) * q3;
                let b0 = (j % stride) / ((q - 1) * q3);
                let a3 = 1 + (j % ((q - 1) * q3)) / q3;
                let [a0, a1, a2] = low3(j % q3);
                ([a0, a1, a2, a3], [b0, rep(j / stride)])
            }
        }
        _ => unreachable!("form validated by search_form"),
    }
}

/// Affine points of E in a fixed order: x ascending, the table square root
/// before its negative, torsion points once.
struct PointTable {
    xs: Vec<u64>,
    x2s: Vec<u64>,
    x3s: Vec<u64>,
    ys: Vec<u64>,
    xys: Vec<u64>,
}

impl PointTable {
    fn build(ctx: &FieldCtx, e: &EllipticCurve) -> PointTable {
        let q = ctx.q();
        let f = e.rhs(ctx);
        let mut t = PointTable {
            xs: Vec::new(),
            x2s: Vec::new(),
            x3s: Vec::new(),
            ys: Vec::new(),
            xys: Vec::new(),
        };
        let mut push = |x: u64, y: u64| {
            t.xs.push(x);
            t.x2s.push(ctx.mul(x, x));
            t.x3s.push(ctx.mul(ctx.mul(x, x), x));
            t.ys.push(y);
            t.xys.push(ctx.mul(x, y));
        };
        for x in 0..q {
            let s = f.eval(ctx, x);
            match ctx.chi(s) {
                -1 => {}
                0 => push(x, 0),
                _ => {
                    let y = ctx.sqrt(s).expect("chi said square");
                    push(x, y);
                    push(x, ctx.sub(0, y));
                }
            }
        }
        t
    }

    fn len(&self) -> usize {
        self.xs.len()
    }
}

struct Kernel<'a> {
    ctx: &'a FieldCtx,
    e: EllipticCurve,
    table: PointTable,
    /// chi duplicated over [0, 2q) so reduced sums index without a modulo.
    chi2: Vec<i8>,
    form: u8,
    nonsquare: u64,
    target: u64,
}

impl Kernel<'_> {
    /// Scans the q candidates of one block, returning certified hits.
    fn scan_block(&self, block: u64) -> Vec<SearchHit> {
        let ctx = self.ctx;
        let q = ctx.q();
        let base = block * q;
        let (u, v) = decode(q, self.nonsquare, self.form, base);

        // Infinity points are block constant: a0 never affects the fiber.
        let pole_even_lc = if u[3] != 0 {
            Some(u[3])
        } else if v[1] != 0 {
            None // pole order 5
        } else if u[2] != 0 {
            Some(u[2])
        } else {
            None // pole order 3
        };
        let inf_pts: u64 = match pole_even_lc {
            Some(lc) => {
                if ctx.chi(lc) == 1 {
                    2
                } else {
                    0
                }
            }
            None => 1,
        };
        if self.target < inf_pts {
            return Vec::new();
        }
        let t_affine = (self.target - inf_pts) as i64;

        let n = self.table.len();
        let mut wb = vec![0u64; n];
        for (j, w) in wb.iter_mut().enumerate() {
            let t = &self.table;
            let mut acc = ctx.mul(u[1], t.xs[j]);
            acc = ctx.add(acc, ctx.mul(u[2], t.x2s[j]));
            acc = ctx.add(acc, ctx.mul(u[3], t.x3s[j]));
            acc = ctx.add(acc, ctx.mul(v[0], t.ys[j]));
            acc = ctx.add(acc, ctx.mul(v[1], t.xys[j]));
            *w = acc;
        }

        let mut hits = Vec::new();
        for a0 in 0..q {
            let mut acc: i64 = 0;
            let mut zeros: i64 = 0;
            let mut alive = true;
            for (j, &w) in wb.iter().enumerate() {
                let val = (w + a0) as usize;
                let c = self.chi2[val];
                if c == 0 {
                    zeros += 1;
                    acc += 1;
                } else {
                    acc += 1 + c as i64;
                }
                let rem = (n - 1 - j) as i64;
                if t_affine < acc - zeros || t_affine > acc + zeros + 2 * rem {
                    alive = false;
                    break;
                }
            }
            if !alive {
                continue;
            }
            let exact_hit = zeros == 0 && acc == t_affine;
            let needs_recount = zeros > 0;
            if !exact_hit && !needs_recount {
                continue;
            }
            let mut u_full = u;
            u_full[0] = a0;
            if let Some(hit) = self.certify(base + a0, u_full, v, exact_hit) {
                hits.push(hit);
            }
        }
        hits
    }

    /// Exact-count check (unless already certain) plus the branch
    /// certificate B = 4; both must hold for a hit.
    fn certify(&self, index: u64, u: [u64; 4], v: [u64; 2], count_certain: bool) -> Option<SearchHit> {
        let ctx = self.ctx;
        let cover = Genus3Cover::new(
            ctx,
            self.e,
            Poly::from_coeffs(ctx, u.to_vec()),
            Poly::from_coeffs(ctx, v.to_vec()),
        )
        .ok()?;
        let count = if count_certain { self.target } else { cover.count(ctx) };
        if count != self.target {
            return None;
        }
        let rep = cover.branch_count(ctx).ok()?;
        (rep.genus == 3).then_some(SearchHit {
            index,
            u,
            v,
            count,
            branch_b: rep.b,
        })
    }
}

/// Runs the search for covers of `e` meeting the optimal count of `kind`,
/// over the given form's candidate space. Results are deterministic for any
/// rayon pool size: slices are merged in index order.
pub fn search_form(
    ctx: &FieldCtx,
    field: &Disc19Field,
    e: EllipticCurve,
    kind: Kind,
    params: SearchParams,
) -> Result<SearchOutcome> {
    let q = ctx.q();
    if !(1..=3).contains(&params.form) {
        return Err(Error::InvalidInput(format!("no such form {}", params.form)));
    }
    if params.cursor % q != 0 {
        return Err(Error::InvalidInput(format!(
            "cursor {} is not block aligned (multiple of {q})",
            params.cursor
        )));
    }
    let space = space_size(q, params.form);
    if params.cursor > space {
        return Err(Error::InvalidInput(format!(
            "cursor {} beyond space {space}",
            params.cursor
        )));
    }
    let mut chi2 = vec![0i8; 2 * q as usize];
    for i in 0..2 * q {
        chi2[i as usize] = ctx.chi(i % q);
    }
    let kernel = Kernel {
        ctx,
        e,
        table: PointTable::build(ctx, &e),
        chi2,
        form: params.form,
        nonsquare: ctx.nonsquare(),
        target: field.optimal_count(3, kind),
    };

    let total_blocks = space / q;
    let mut block = params.cursor / q;
    let budget_blocks = match params.budget {
        Some(b) => b.div_ceil(q),
        None => total_blocks,
    };
    let stop_block = total_blocks.min(block + budget_blocks);

    let mut hits = Vec::new();
    while block < stop_block {
        let chunk_end = stop_block.min(block + CHUNK_BLOCKS);
        let mut chunk_hits: Vec<SearchHit> = (block as usize..chunk_end as usize)
            .into_par_iter()
            .with_min_len(16)
            .fold(Vec::new, |mut acc, b| {
                acc.extend(kernel.scan_block(b as u64));
                acc
            })
            .reduce(Vec::new, |mut a, mut b| {
                a.append(&mut b);
                a
            });
        let found = !chunk_hits.is_empty();
        hits.append(&mut chunk_hits);
        block = chunk_end;
        if params.stop_on_hit && found {
            break;
        }
    }

    Ok(SearchOutcome {
        form: params.form,
        hits,
        scanned: block * q - params.cursor,
        cursor: block * q,
        space,
        complete: block == total_blocks,
    })
}

/// Searches forms 1, 2, 3 in order until a hit appears; returns the full
/// per-form outcomes in order.
pub fn find_first(
    ctx: &FieldCtx,
    field: &Disc19Field,
    e: EllipticCurve,
    kind: Kind,
) -> Result<Vec<SearchOutcome>> {
    let mut outcomes = Vec::new();
    for form in 1..=3u8 {
        let out = search_form(
            ctx,
            field,
            e,
            kind,
            SearchParams { form, cursor: 0, budget: None, stop_on_hit: true },
        )?;
        let done = !out.hits.is_empty();
        outcomes.push(out);
        if done {
            break;
        }
    }
    Ok(outcomes)
}
