//! Shared equation renderers matching the published table style.

/// "y^2=x^3+ax+b" with 1x and +0 suppressed.
pub fn weq(a: u64, b: u64) -> String {
    let mut s = String::from("y^2=x^3");
    match a {
        0 => {}
        1 => s.push_str("+x"),
        _ => s.push_str(&format!("+{a}x")),
    }
    if b != 0 {
        s.push_str(&format!("+{b}"));
    }
    s
}

/// Descending-power rendering of an x-polynomial from ascending coefficients.
pub fn xpoly(coeffs: &[u64]) -> String {
    let mut parts = Vec::new();
    for (deg, &c) in coeffs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let var = match deg {
            0 => String::new(),
            1 => "x".to_string(),
            _ => format!("x^{deg}"),
        };
        let part = match (c, deg) {
            (_, 0) => format!("{c}"),
            (1, _) => var,
            _ => format!("{c}{var}"),
        };
        parts.push(part);
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join("+")
    }
}

/// "z^2=u(x)+v(x)y" in the same grammar the dataset parser reads.
pub fn cover_eq(u: &[u64], v: &[u64]) -> String {
    let mut s = format!("z^2={}", xpoly(u));
    for (deg, &c) in v.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let x = if deg == 1 { "x" } else { "" };
        if c == 1 {
            s.push_str(&format!("+{x}y"));
        } else {
            s.push_str(&format!("+{c}{x}y"));
        }
    }
    s
}
