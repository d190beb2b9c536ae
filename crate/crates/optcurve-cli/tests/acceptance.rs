//! Release gate: ten acceptance criteria, one printed verdict line each.
//! Runs without the libtest harness so every line is visible; exits
//! nonzero if any criterion fails.

use optcurve::genus2::construct_fibered_sextic;
use optcurve::genus3::search::{search_form, SearchParams};
use optcurve::zeta::{genus3_over_ext, lpoly_from_counts, optimal_lpoly};
use optcurve::{
    Disc19Field, EllipticCurve, FieldCtx, Genus2Curve, Genus2Recipe, Genus3Cover, HermitianGram,
    Kind, Poly,
};
use optcurve_cli::audit::{audit_tables, Status};
use optcurve_cli::dataset::{parse_payload, Dataset, ParsedPayload, TableId};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::process::Command;
use std::time::{Duration, Instant};

struct Gate {
    failures: usize,
}

impl Gate {
    fn report(&mut self, n: u32, ok: bool, what: &str, t: Duration, evidence: &[String]) {
        let verdict = if ok { "PASS" } else { "FAIL" };
        println!("criterion {n:>2}  {verdict}  {what}  ({:.1} ms)", t.as_secs_f64() * 1e3);
        for line in evidence {
            println!("              {line}");
        }
        if !ok {
            self.failures += 1;
        }
    }
}

fn main() {
    let mut gate = Gate { failures: 0 };
    c1_field_enumeration(&mut gate);
    c2_elliptic_table_audit(&mut gate);
    c3_genus2_reconstruction(&mut gate);
    c4_genus3_published_rows(&mut gate);
    c5_oracle_equivalence(&mut gate);
    c6_mutual_exclusion(&mut gate);
    c7_lpolynomial(&mut gate);
    c8_twist_antisymmetry(&mut gate);
    c9_hermitian_constant(&mut gate);
    c10_parallel_determinism(&mut gate);
    if gate.failures > 0 {
        println!("{} of 10 criteria failed", gate.failures);
        std::process::exit(1);
    }
    println!("all 10 criteria passed");
}

fn c1_field_enumeration(gate: &mut Gate) {
    let t0 = Instant::now();
    let fields = optcurve::disc19::enumerate(1000);
    let t = t0.elapsed();
    let got: Vec<(u64, u64)> = fields.iter().map(|f| (f.q(), f.m())).collect();
    let want = [
        (47, 13),
        (61, 15),
        (137, 23),
        (277, 33),
        (311, 35),
        (347, 37),
        (467, 43),
        (557, 47),
        (761, 55),
        (997, 63),
    ];
    let exact = got == want;
    let invariants = fields
        .iter()
        .all(|f| f.m() % 2 == 1 && (f.m() * f.m()) as i64 - 4 * f.q() as i64 == -19);
    let ok = exact && invariants && t < Duration::from_millis(1);
    gate.report(1, ok, "ten fields below 1000, odd m, m^2 - 4q = -19", t, &[]);
}

fn c2_elliptic_table_audit(gate: &mut Gate) {
    let t0 = Instant::now();
    let dataset = Dataset::embedded().filter(Some(TableId::Elliptic), None);
    let report = audit_tables(&dataset);
    let t = t0.elapsed();
    let mut evidence = Vec::new();
    let mut ok = report.total == 20 && t < Duration::from_millis(50);
    // Every row must pass except genuine transcription errors, and those
    // must be reported as failures with the recomputed count, never
    // silently passed.
    for row in &report.rows {
        let genuine_error = row.q == 277 && row.role == Kind::Minimal;
        if genuine_error {
            if row.status != Status::FailCount || !row.detail.contains("276") {
                ok = false;
            }
            evidence.push(format!(
                "flagged q=277 minimal: {} ({})",
                row.status, row.detail
            ));
        } else if row.status != Status::Pass {
            ok = false;
            evidence.push(format!("unexpected {} at q={} {}", row.status, row.q, row.role));
        }
    }
    gate.report(
        2,
        ok,
        "elliptic table: 19 rows verify, the one transcription error is fail-reported",
        t,
        &evidence,
    );
}

fn genus2_row(q: u64) -> (FieldCtx, Genus2Recipe, Poly) {
    let dataset = Dataset::embedded().filter(Some(TableId::Genus2), Some(q));
    let row = dataset.rows.iter().find(|r| r.role == Kind::Maximal).unwrap();
    let ctx = FieldCtx::new(q).unwrap();
    let ParsedPayload::Genus2 {
        a,
        b,
        alpha,
        beta,
        sextic,
    } = parse_payload(row).unwrap()
    else {
        panic!("genus2 payload expected");
    };
    let e1 = EllipticCurve::new(&ctx, a, b).unwrap();
    let recipe = Genus2Recipe::new(&ctx, e1, alpha, beta).unwrap();
    let printed = Poly::from_coeffs(&ctx, sextic);
    (ctx, recipe, printed)
}

fn c3_genus2_reconstruction(gate: &mut Gate) {
    let t0 = Instant::now();
    let mut evidence = Vec::new();
    let mut ok = true;

    // q=47: fixed recipe reproduces the even sextic coefficientwise.
    let ctx = FieldCtx::new(47).unwrap();
    let e1 = EllipticCurve::new(&ctx, 1, 38).unwrap();
    let recipe = Genus2Recipe::new(&ctx, e1, 1, 30).unwrap();
    let curve = construct_fibered_sextic(&ctx, &recipe).unwrap();
    if curve.sextic.coeffs() != [33, 0, 22, 0, 4, 0, 1] || curve.count(&ctx) != 74 {
        ok = false;
        evidence.push(format!(
            "q=47 built {:?} counting {}",
            curve.sextic.coeffs(),
            curve.count(&ctx)
        ));
    }

    // q=61: printed recipe rebuilds the printed sextic and attains 92.
    let (ctx61, recipe61, printed61) = genus2_row(61);
    let curve61 = construct_fibered_sextic(&ctx61, &recipe61).unwrap();
    if curve61.sextic != printed61 || curve61.count(&ctx61) != 92 {
        ok = false;
        evidence.push(format!("q=61 count {}", curve61.count(&ctx61)));
    }

    // q=277: the constructed sextic carries leading coefficient 104.
    let (ctx277, recipe277, printed277) = genus2_row(277);
    let curve277 = construct_fibered_sextic(&ctx277, &recipe277).unwrap();
    if curve277.sextic.lc() != 104 || curve277.sextic != printed277 {
        ok = false;
        evidence.push(format!("q=277 leading coefficient {}", curve277.sextic.lc()));
    }

    let t = t0.elapsed();
    let ok = ok && t < Duration::from_millis(10);
    gate.report(3, ok, "fibered sextics rebuilt for q=47 (74), 61 (92), 277 (lc 104)", t, &evidence);
}

fn genus3_row_cover(q: u64) -> (FieldCtx, Disc19Field, Genus3Cover, Kind) {
    let dataset = Dataset::embedded().filter(Some(TableId::Genus3), Some(q));
    let row = &dataset.rows[0];
    let ctx = FieldCtx::new(q).unwrap();
    let field = Disc19Field::new(q).unwrap();
    let ParsedPayload::Genus3 { scale, a, b, u, v } = parse_payload(row).unwrap() else {
        panic!("genus3 payload expected");
    };
    assert_eq!(scale, 1, "rows used here need no normalization");
    let e = EllipticCurve::new(&ctx, a, b).unwrap();
    let cover = Genus3Cover::new(
        &ctx,
        e,
        Poly::from_coeffs(&ctx, u),
        Poly::from_coeffs(&ctx, v),
    )
    .unwrap();
    (ctx, field, cover, row.role)
}

fn c4_genus3_published_rows(gate: &mut Gate) {
    // q=47 as printed: z^2 = 10x^2+46x+39+y over y^2 = x^3+x+38. The claim
    // is an exact count of 87; recounting gives 57, so this criterion
    // fails and stays failed. The evidence lines carry the forensics.
    let t0 = Instant::now();
    let (ctx47, field47, cover47, role47) = genus3_row_cover(47);
    let rep47 = cover47.verify(&field47, &ctx47, role47);
    let t47 = t0.elapsed();
    let mut evidence = vec![format!(
        "recount {} against claimed 87; branch number {} certifies genus {}",
        rep47.count, rep47.branch_b, rep47.genus
    )];
    // The same cover coefficients over the rescaled maximal model (14, 46)
    // do attain 87, and exhausting form 1 over (1, 38) finds optimal
    // covers with different coefficients, so the printed pairing of E and
    // cover is the transcription defect.
    let e_alt = EllipticCurve::new(&ctx47, 14, 46).unwrap();
    let alt = Genus3Cover::new(&ctx47, e_alt, cover47.u.clone(), cover47.v.clone()).unwrap();
    evidence.push(format!(
        "same cover over the rescaled maximal model y^2=x^3+14x+46 counts {}",
        alt.count(&ctx47)
    ));
    evidence.push(
        "form-1 exhaustion over y^2=x^3+x+38 reaches 87 only at z^2=44x^2+19x+23+y and \
         z^2=15x^2+46x+26+5y"
            .to_string(),
    );
    let ok47 = rep47.count == 87 && t47 < Duration::from_millis(100);

    let t0 = Instant::now();
    let (ctx347, field347, cover347, role347) = genus3_row_cover(347);
    let rep347 = cover347.verify(&field347, &ctx347, role347);
    let t347 = t0.elapsed();
    let ok347 = rep347.count == 237 && rep347.pass && t347 < Duration::from_millis(100);
    evidence.push(format!(
        "q=347 row counts {} against target {}",
        rep347.count, rep347.target
    ));

    gate.report(
        4,
        ok47 && ok347,
        "published genus 3 rows: q=47 at exactly 87, q=347 at exactly 237",
        t47 + t347,
        &evidence,
    );
}

/// Full-enumeration count of y^2 = x^3 + ax + b including the point at
/// infinity; no character shortcuts.
fn naive_elliptic(ctx: &FieldCtx, e: &EllipticCurve) -> u64 {
    let q = ctx.q();
    let f = e.rhs(ctx);
    let mut n = 1;
    for x in 0..q {
        let fx = f.eval(ctx, x);
        n += (0..q).filter(|&y| ctx.mul(y, y) == fx).count() as u64;
    }
    n
}

/// Full-enumeration count of the smooth model of z^2 = h(x) for an even
/// sextic: two points at infinity exactly when some c^2 equals the leading
/// coefficient.
fn naive_sextic(ctx: &FieldCtx, h: &Poly) -> u64 {
    let q = ctx.q();
    // c and q - c pair up, so this is 0 or 2.
    let mut n = (1..q).filter(|&c| ctx.mul(c, c) == h.lc()).count() as u64;
    for x in 0..q {
        let hx = h.eval(ctx, x);
        n += (0..q).filter(|&z| ctx.mul(z, z) == hx).count() as u64;
    }
    n
}

/// Full-enumeration count of z^2 = u + vy over affine E plus one point at
/// infinity. Exact when deg v = 1 and deg u <= 2 (odd pole order, so the
/// infinite place ramifies) and every affine zero of u + vy is simple.
fn naive_cover(ctx: &FieldCtx, c: &Genus3Cover) -> u64 {
    let q = ctx.q();
    let f = c.e.rhs(ctx);
    let mut n = 1;
    for x in 0..q {
        let fx = f.eval(ctx, x);
        for y in (0..q).filter(|&y| ctx.mul(y, y) == fx) {
            let w = ctx.add(c.u.eval(ctx, x), ctx.mul(c.v.eval(ctx, x), y));
            n += (0..q).filter(|&z| ctx.mul(z, z) == w).count() as u64;
        }
    }
    n
}

/// Simple-zero certificate: the norm polynomial u^2 - v^2 f is squarefree
/// and shares no root with f.
fn cover_is_certified(ctx: &FieldCtx, e: &EllipticCurve, u: &Poly, v: &Poly) -> bool {
    let f = e.rhs(ctx);
    let r = u.mul(ctx, u).sub(ctx, &v.mul(ctx, v).mul(ctx, &f));
    if r.is_zero() {
        return false;
    }
    r.is_squarefree(ctx) && r.gcd(ctx, &f).degree() == Some(0)
}

fn c5_oracle_equivalence(gate: &mut Gate) {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x0c19);
    let mut ok = true;
    let mut evidence = Vec::new();
    for q in [5u64, 7, 11, 13] {
        let ctx = FieldCtx::new(q).unwrap();

        let mut done = 0;
        while done < 50 {
            let (a, b) = (rng.gen_range(0..q), rng.gen_range(0..q));
            let Ok(e) = EllipticCurve::new(&ctx, a, b) else { continue };
            if e.count(&ctx) != naive_elliptic(&ctx, &e) {
                ok = false;
                evidence.push(format!("elliptic mismatch q={q} a={a} b={b}"));
            }
            done += 1;
        }

        done = 0;
        while done < 50 {
            let coeffs: Vec<u64> = (0..7)
                .map(|i| {
                    if i == 6 {
                        rng.gen_range(1..q)
                    } else {
                        rng.gen_range(0..q)
                    }
                })
                .collect();
            let h = Poly::from_coeffs(&ctx, coeffs);
            let Ok(curve) = Genus2Curve::new(&ctx, h) else { continue };
            if curve.count(&ctx) != naive_sextic(&ctx, &curve.sextic) {
                ok = false;
                evidence.push(format!("sextic mismatch q={q} {:?}", curve.sextic.coeffs()));
            }
            done += 1;
        }

        done = 0;
        while done < 50 {
            let (a, b) = (rng.gen_range(0..q), rng.gen_range(0..q));
            let Ok(e) = EllipticCurve::new(&ctx, a, b) else { continue };
            let u = Poly::from_coeffs(
                &ctx,
                vec![rng.gen_range(0..q), rng.gen_range(0..q), rng.gen_range(0..q)],
            );
            let v = Poly::from_coeffs(&ctx, vec![rng.gen_range(0..q), rng.gen_range(1..q)]);
            if !cover_is_certified(&ctx, &e, &u, &v) {
                continue;
            }
            let cover = Genus3Cover::new(&ctx, e, u, v).unwrap();
            if cover.count(&ctx) != naive_cover(&ctx, &cover) {
                ok = false;
                evidence.push(format!(
                    "cover mismatch q={q} a={a} b={b} u={:?} v={:?}",
                    cover.u.coeffs(),
                    cover.v.coeffs()
                ));
            }
            done += 1;
        }
    }
    let t = t0.elapsed();
    let ok = ok && t < Duration::from_secs(5);
    gate.report(
        5,
        ok,
        "library counts match full-enumeration oracles, 50 random instances per kind per q in {5,7,11,13}",
        t,
        &evidence,
    );
}

fn c6_mutual_exclusion(gate: &mut Gate) {
    let t0 = Instant::now();
    let ctx = FieldCtx::new(47).unwrap();
    let field = Disc19Field::new(47).unwrap();

    // At least one maximal cover over the maximal curve.
    let e_max = EllipticCurve::new(&ctx, 1, 38).unwrap();
    let first = search_form(
        &ctx,
        &field,
        e_max,
        Kind::Maximal,
        SearchParams {
            form: 1,
            cursor: 0,
            budget: None,
            stop_on_hit: true,
        },
    )
    .unwrap();

    // No minimal cover over the minimal curve, across all three forms.
    let e_min = EllipticCurve::new(&ctx, 32, 27).unwrap();
    let mut minimal_hits = 0;
    let mut scanned = 0;
    for form in 1..=3 {
        let outcome = search_form(
            &ctx,
            &field,
            e_min,
            Kind::Minimal,
            SearchParams {
                form,
                cursor: 0,
                budget: None,
                stop_on_hit: false,
            },
        )
        .unwrap();
        assert!(outcome.complete);
        minimal_hits += outcome.hits.len();
        scanned += outcome.scanned;
    }
    let t = t0.elapsed();
    let ok = !first.hits.is_empty() && minimal_hits == 0 && t < Duration::from_secs(600);
    gate.report(
        6,
        ok,
        "F_47: a maximal cover exists over the maximal E, none minimal over the minimal E",
        t,
        &[format!(
            "{} maximal hit(s); {scanned} candidates over y^2=x^3+32x+27 yield {minimal_hits} hits",
            first.hits.len()
        )],
    );
}

fn c7_lpolynomial(gate: &mut Gate) {
    let t0 = Instant::now();
    let ctx = FieldCtx::new(47).unwrap();
    let field = Disc19Field::new(47).unwrap();
    let e = EllipticCurve::new(&ctx, 1, 38).unwrap();
    let cover = Genus3Cover::new(
        &ctx,
        e,
        Poly::from_coeffs(&ctx, vec![23, 19, 44]),
        Poly::from_coeffs(&ctx, vec![1]),
    )
    .unwrap();
    let n1 = genus3_over_ext(&ctx, &cover, 1).unwrap();
    let n2 = genus3_over_ext(&ctx, &cover, 2).unwrap();
    let n3 = genus3_over_ext(&ctx, &cover, 3).unwrap();
    let l = lpoly_from_counts(47, 3, &[n1, n2, n3]).unwrap();
    let cube = optimal_lpoly(&field, 3, Kind::Maximal);
    let t = t0.elapsed();
    let ok = (n1, n2) == (87, 1985)
        && l.coeffs == cube.coeffs
        && l.coeffs == [1, 39, 648, 5863, 30456, 86151, 103823]
        && t < Duration::from_secs(30);
    gate.report(
        7,
        ok,
        "N_1=87, N_2=1985 and the direct F_47^3 count reconstruct (1+13t+47t^2)^3",
        t,
        &[format!("N_3 = {n3}")],
    );
}

fn c8_twist_antisymmetry(gate: &mut Gate) {
    let t0 = Instant::now();
    let mut ok = true;
    let mut checked = 0u64;
    for q in [47u64, 61] {
        let ctx = FieldCtx::new(q).unwrap();
        let c = ctx.nonsquare();
        for a in 0..q {
            for b in 0..q {
                let Ok(e) = EllipticCurve::new(&ctx, a, b) else { continue };
                let tw = e.quadratic_twist(&ctx, c).unwrap();
                if !tw.trace_negated || tw.curve.trace(&ctx) != -e.trace(&ctx) {
                    ok = false;
                }
                checked += 1;
            }
        }
    }
    let t = t0.elapsed();
    let ok = ok && t < Duration::from_secs(5);
    gate.report(
        8,
        ok,
        "quadratic twist negates the trace for every nonsingular curve over F_47 and F_61",
        t,
        &[format!("{checked} curves checked")],
    );
}

fn c9_hermitian_constant(gate: &mut Gate) {
    let t0 = Instant::now();
    let gram = HermitianGram::canonical();
    let mut ok = gram.projection_degree(1) == Ok(2);
    let mut degrees = Vec::new();
    for k in 1..=3 {
        match gram.projection_degree(k) {
            Ok(d) => degrees.push(d),
            Err(_) => ok = false,
        }
    }
    let t = t0.elapsed();
    let ok = ok && t < Duration::from_millis(1);
    gate.report(
        9,
        ok,
        "projection degree of the canonical Gram matrix is 2 at k=1 and an integer for every k",
        t,
        &[format!("degrees {degrees:?}")],
    );
}

fn run_with_threads(args: &[&str], threads: &str) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_optcurve"))
        .args(args)
        .args(["--threads", threads])
        .output()
        .expect("binary runs");
    assert!(out.status.success(), "{args:?} with {threads} threads failed");
    out.stdout
}

fn c10_parallel_determinism(gate: &mut Gate) {
    let t0 = Instant::now();
    let search_args = [
        "genus3", "exhaust", "--q", "47", "--kind", "max", "--form", "1", "--format", "json",
    ];
    let audit_args = ["audit", "--format", "json"];
    let mut ok = true;
    let search_ref = run_with_threads(&search_args, "1");
    let audit_ref = run_with_threads(&audit_args, "1");
    for threads in ["4", "8"] {
        if run_with_threads(&search_args, threads) != search_ref {
            ok = false;
        }
        if run_with_threads(&audit_args, threads) != audit_ref {
            ok = false;
        }
    }
    let t = t0.elapsed();
    gate.report(
        10,
        ok,
        "search and audit output byte-identical for 1, 4 and 8 workers",
        t,
        &[],
    );
}
