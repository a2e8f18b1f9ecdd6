//! Number formatting for the text tables.

fn group_thousands(mut n: u64) -> String {
    let mut parts = Vec::new();
    while n >= 1000 {
        parts.push(format!("{:03}", n % 1000));
        n /= 1000;
    }
    parts.push(n.to_string());
    parts.reverse();
    parts.join(",")
}

/// Integer with thousands separators.
pub fn thousands(n: i64) -> String {
    let s = group_thousands(n.unsigned_abs());
    if n < 0 {
        format!("-{s}")
    } else {
        s
    }
}

/// Euros as millions with one decimal and thousands separators: `1,767.0`.
pub fn eur_m(euros: i64) -> String {
    let tenths = (euros.unsigned_abs() + 50_000) / 100_000;
    let s = format!("{}.{}", group_thousands(tenths / 10), tenths % 10);
    if euros < 0 && tenths > 0 {
        format!("-{s}")
    } else {
        s
    }
}

/// Compact millions for player values: `€180m`, `€62.5m`.
pub fn eur_m_short(euros: u64) -> String {
    let s = eur_m(euros as i64).replace(',', "");
    format!("€{}m", s.strip_suffix(".0").unwrap_or(&s))
}

pub fn fixed(v: Option<f64>, decimals: usize) -> String {
    match v {
        Some(v) if v.is_finite() => format!("{v:.decimals$}"),
        _ => "NA".to_owned(),
    }
}

/// Left-aligned first column, right-aligned others, two-space gutter.
pub fn align(rows: &[Vec<String>]) -> String {
    let ncol = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..ncol)
        .map(|j| rows.iter().filter_map(|r| r.get(j)).map(|c| c.chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in rows {
        let mut line = String::new();
        for (j, cell) in row.iter().enumerate() {
            let pad = widths[j] - cell.chars().count();
            if j == 0 {
                line.push_str(cell);
                line.push_str(&" ".repeat(pad));
            } else {
                line.push_str("  ");
                line.push_str(&" ".repeat(pad));
                line.push_str(cell);
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}
