//! The published reference tables, embedded as a human-auditable CSV.
//!
//! Each row keeps the curve equations exactly as printed, in the `payload`
//! column; the `normalization` column records any documented reinterpretation
//! the auditor applies before verifying (currently only `monic-y` for the one
//! row whose Weierstrass model is written with a 4y^2 left-hand side). Raw
//! text and applied interpretation stay separately visible on purpose.

use optcurve::{Error, Kind, Result};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

pub const EMBEDDED_CSV: &str = include_str!("../data/reference_tables.csv");

/// Which published table a row belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TableId {
    Elliptic,
    Genus2,
    Genus3,
}

impl fmt::Display for TableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TableId::Elliptic => write!(f, "elliptic"),
            TableId::Genus2 => write!(f, "genus2"),
            TableId::Genus3 => write!(f, "genus3"),
        }
    }
}

impl FromStr for TableId {
    type Err = Error;
    fn from_str(s: &str) -> Result<TableId> {
        match s {
            "elliptic" => Ok(TableId::Elliptic),
            "genus2" => Ok(TableId::Genus2),
            "genus3" => Ok(TableId::Genus3),
            _ => Err(Error::InvalidInput(format!(
                "unknown table '{s}', expected elliptic, genus2 or genus3"
            ))),
        }
    }
}

/// One published row, equations as printed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReferenceRow {
    pub table: TableId,
    pub q: u64,
    pub role: Kind,
    pub payload: String,
    pub normalization: String,
}

#[derive(Debug, Clone)]
pub struct Dataset {
    pub rows: Vec<ReferenceRow>,
}

impl Dataset {
    /// The tables shipped with the binary.
    pub fn embedded() -> Dataset {
        Dataset::parse_csv(EMBEDDED_CSV).expect("embedded dataset is well formed")
    }

    /// Parses `table,q,role,payload,normalization` rows. (table, q, role)
    /// triples must be unique; payloads are stored verbatim and only parsed
    /// into curve data on demand.
    pub fn parse_csv(text: &str) -> Result<Dataset> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::InvalidInput("empty dataset".into()))?;
        if header.trim() != "table,q,role,payload,normalization" {
            return Err(Error::InvalidInput(format!("unexpected header '{header}'")));
        }
        let mut rows = Vec::new();
        for (lineno, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 5 {
                return Err(Error::InvalidInput(format!(
                    "line {}: expected 5 fields, got {}",
                    lineno + 2,
                    fields.len()
                )));
            }
            let row = ReferenceRow {
                table: fields[0].parse()?,
                q: fields[1]
                    .parse()
                    .map_err(|_| Error::InvalidInput(format!("bad q '{}'", fields[1])))?,
                role: fields[2].parse()?,
                payload: fields[3].trim().to_string(),
                normalization: fields[4].trim().to_string(),
            };
            if rows
                .iter()
                .any(|r: &ReferenceRow| (r.table, r.q, r.role) == (row.table, row.q, row.role))
            {
                return Err(Error::InvalidInput(format!(
                    "duplicate row ({}, {}, {})",
                    row.table, row.q, row.role
                )));
            }
            rows.push(row);
        }
        Ok(Dataset { rows })
    }

    pub fn filter(&self, table: Option<TableId>, q: Option<u64>) -> Dataset {
        Dataset {
            rows: self
                .rows
                .iter()
                .filter(|r| table.is_none_or(|t| r.table == t))
                .filter(|r| q.is_none_or(|v| r.q == v))
                .cloned()
                .collect(),
        }
    }

    /// The elliptic-table model printed for (q, role), if any.
    pub fn elliptic_model(&self, q: u64, role: Kind) -> Option<(u64, u64)> {
        self.rows
            .iter()
            .find(|r| r.table == TableId::Elliptic && r.q == q && r.role == role)
            .and_then(|r| match parse_payload(r) {
                Ok(ParsedPayload::Elliptic { a, b }) => Some((a, b)),
                _ => None,
            })
    }
}

/// A row's equations decoded into coefficient data, reduced mod q.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParsedPayload {
    /// y^2 = x^3 + ax + b.
    Elliptic { a: u64, b: u64 },
    /// y^2 = (x^3 + ax + b)(alpha x + beta) next to z^2 = (printed sextic).
    Genus2 {
        a: u64,
        b: u64,
        alpha: u64,
        beta: u64,
        /// Ascending coefficients, degree exactly 6, odd ones zero.
        sextic: Vec<u64>,
    },
    /// scale * y^2 = x^3 + ax + b next to z^2 = u(x) + v(x) y.
    Genus3 {
        scale: u64,
        a: u64,
        b: u64,
        u: Vec<u64>,
        v: Vec<u64>,
    },
}

pub fn parse_payload(row: &ReferenceRow) -> Result<ParsedPayload> {
    let q = row.q;
    match row.table {
        TableId::Elliptic => {
            let (scale, a, b) = parse_weierstrass(&row.payload, q)?;
            if scale != 1 {
                return Err(Error::InvalidInput(
                    "elliptic rows must have a monic y^2 left-hand side".into(),
                ));
            }
            Ok(ParsedPayload::Elliptic { a, b })
        }
        TableId::Genus2 => {
            let (model, sextic) = split_pair(&row.payload)?;
            let (a, b, alpha, beta) = parse_product_model(model, q)?;
            let sextic = parse_sextic(sextic, q)?;
            Ok(ParsedPayload::Genus2 {
                a,
                b,
                alpha,
                beta,
                sextic,
            })
        }
        TableId::Genus3 => {
            let (model, cover) = split_pair(&row.payload)?;
            let (scale, a, b) = parse_weierstrass(model, q)?;
            let (u, v) = parse_cover(cover, q)?;
            Ok(ParsedPayload::Genus3 { scale, a, b, u, v })
        }
    }
}

fn split_pair(payload: &str) -> Result<(&str, &str)> {
    payload
        .split_once(';')
        .map(|(a, b)| (a.trim(), b.trim()))
        .ok_or_else(|| Error::InvalidInput("expected two equations separated by ';'".into()))
}

/// A parsed monomial c x^xdeg y^ydeg.
#[derive(Debug, Clone, Copy)]
struct Term {
    coeff: i64,
    xdeg: usize,
    ydeg: usize,
}

/// Splits a sum like "439+322x+5x^2+122y" into signed monomials.
fn parse_terms(s: &str) -> Result<Vec<Term>> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(Error::InvalidInput("empty expression".into()));
    }
    let mut terms = Vec::new();
    let mut rest = compact.as_str();
    let mut sign = 1i64;
    if let Some(r) = rest.strip_prefix('-') {
        sign = -1;
        rest = r;
    }
    loop {
        let split = rest.find(['+', '-']);
        let (chunk, next) = match split {
            Some(pos) => (&rest[..pos], Some(rest.split_at(pos))),
            None => (rest, None),
        };
        terms.push(parse_term(chunk, sign)?);
        match next {
            Some((_, tail)) => {
                sign = if tail.starts_with('-') { -1 } else { 1 };
                rest = &tail[1..];
            }
            None => break,
        }
    }
    Ok(terms)
}

fn parse_term(chunk: &str, sign: i64) -> Result<Term> {
    if chunk.is_empty() {
        return Err(Error::InvalidInput("empty term".into()));
    }
    let bad = || Error::InvalidInput(format!("cannot parse term '{chunk}'"));
    let digits: String = chunk.chars().take_while(|c| c.is_ascii_digit()).collect();
    let mut rest = &chunk[digits.len()..];
    let coeff: i64 = if digits.is_empty() {
        1
    } else {
        digits.parse().map_err(|_| bad())?
    };
    let mut xdeg = 0;
    if let Some(r) = rest.strip_prefix('x') {
        rest = r;
        xdeg = 1;
        if let Some(r) = rest.strip_prefix('^') {
            let exp: String = r.chars().take_while(|c| c.is_ascii_digit()).collect();
            xdeg = exp.parse().map_err(|_| bad())?;
            rest = &r[exp.len()..];
        }
    }
    let mut ydeg = 0;
    if let Some(r) = rest.strip_prefix('y') {
        rest = r;
        ydeg = 1;
    }
    if !rest.is_empty() {
        return Err(bad());
    }
    Ok(Term {
        coeff: sign * coeff,
        xdeg,
        ydeg,
    })
}

/// Collects x-only terms into ascending coefficients mod q.
fn poly_from_terms(terms: &[Term], q: u64, max_deg: usize) -> Result<Vec<u64>> {
    let mut coeffs = vec![0u64; max_deg + 1];
    for t in terms {
        if t.ydeg != 0 {
            return Err(Error::InvalidInput("unexpected y term".into()));
        }
        if t.xdeg > max_deg {
            return Err(Error::InvalidInput(format!(
                "degree {} exceeds the allowed {max_deg}",
                t.xdeg
            )));
        }
        coeffs[t.xdeg] = (coeffs[t.xdeg] + t.coeff.rem_euclid(q as i64) as u64) % q;
    }
    while coeffs.len() > 1 && *coeffs.last().unwrap() == 0 {
        coeffs.pop();
    }
    Ok(coeffs)
}

/// "y^2=x^3+ax+b" or "Ny^2=...": returns (N, a, b) with the cubic required
/// monic and depressed (no x^2 term).
fn parse_weierstrass(s: &str, q: u64) -> Result<(u64, u64, u64)> {
    let (lhs, rhs) = s
        .split_once('=')
        .ok_or_else(|| Error::InvalidInput(format!("no '=' in '{s}'")))?;
    let lhs: String = lhs.chars().filter(|c| !c.is_whitespace()).collect();
    let scale_digits: String = lhs.chars().take_while(|c| c.is_ascii_digit()).collect();
    if &lhs[scale_digits.len()..] != "y^2" {
        return Err(Error::InvalidInput(format!(
            "left-hand side '{lhs}' is not of the form [N]y^2"
        )));
    }
    let scale: u64 = if scale_digits.is_empty() {
        1
    } else {
        scale_digits
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad scale in '{lhs}'")))?
    };
    let cubic = poly_from_terms(&parse_terms(rhs)?, q, 3)?;
    check_depressed_cubic(&cubic)?;
    Ok((scale % q, cubic[1], cubic[0]))
}

fn check_depressed_cubic(c: &[u64]) -> Result<()> {
    if c.len() != 4 || c[3] != 1 {
        return Err(Error::InvalidInput(
            "right-hand side is not a monic cubic".into(),
        ));
    }
    if c[2] != 0 {
        return Err(Error::InvalidInput(
            "cubic has an x^2 term; expected the depressed form x^3 + ax + b".into(),
        ));
    }
    Ok(())
}

/// "y^2=(x^3+ax+b)(alpha x+beta)": the twisted-fiber model of the second
/// elliptic curve in a fibered product.
fn parse_product_model(s: &str, q: u64) -> Result<(u64, u64, u64, u64)> {
    let (lhs, rhs) = s
        .split_once('=')
        .ok_or_else(|| Error::InvalidInput(format!("no '=' in '{s}'")))?;
    if lhs.trim() != "y^2" {
        return Err(Error::InvalidInput(format!(
            "left-hand side '{}' is not y^2",
            lhs.trim()
        )));
    }
    let rhs: String = rhs.chars().filter(|c| !c.is_whitespace()).collect();
    let inner = rhs
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| Error::InvalidInput(format!("'{rhs}' is not a product of two factors")))?;
    let (first, second) = inner
        .split_once(")(")
        .ok_or_else(|| Error::InvalidInput(format!("'{rhs}' is not a product of two factors")))?;
    let cubic = poly_from_terms(&parse_terms(first)?, q, 3)?;
    check_depressed_cubic(&cubic)?;
    let linear = poly_from_terms(&parse_terms(second)?, q, 1)?;
    if linear.len() != 2 {
        return Err(Error::InvalidInput(format!(
            "'{second}' is not a linear factor"
        )));
    }
    Ok((cubic[1], cubic[0], linear[1], linear[0]))
}

/// "z^2=c6 x^6 + c4 x^4 + c2 x^2 + c0": ascending coefficients, degree 6.
fn parse_sextic(s: &str, q: u64) -> Result<Vec<u64>> {
    let (lhs, rhs) = s
        .split_once('=')
        .ok_or_else(|| Error::InvalidInput(format!("no '=' in '{s}'")))?;
    if lhs.trim() != "z^2" {
        return Err(Error::InvalidInput(format!(
            "left-hand side '{}' is not z^2",
            lhs.trim()
        )));
    }
    let coeffs = poly_from_terms(&parse_terms(rhs)?, q, 6)?;
    if coeffs.len() != 7 {
        return Err(Error::InvalidInput("sextic does not have degree 6".into()));
    }
    Ok(coeffs)
}

/// "z^2=u(x)+v(x)y": splits terms by their y-degree. u may reach degree 3,
/// v stays linear.
fn parse_cover(s: &str, q: u64) -> Result<(Vec<u64>, Vec<u64>)> {
    let (lhs, rhs) = s
        .split_once('=')
        .ok_or_else(|| Error::InvalidInput(format!("no '=' in '{s}'")))?;
    if lhs.trim() != "z^2" {
        return Err(Error::InvalidInput(format!(
            "left-hand side '{}' is not z^2",
            lhs.trim()
        )));
    }
    let terms = parse_terms(rhs)?;
    let (with_y, without): (Vec<Term>, Vec<Term>) = terms.iter().partition(|t| t.ydeg == 1);
    let u = poly_from_terms(&without, q, 3)?;
    let stripped: Vec<Term> = with_y
        .iter()
        .map(|t| Term { ydeg: 0, ..*t })
        .collect();
    let v = poly_from_terms(&stripped, q, 1)?;
    Ok((u, v))
}
