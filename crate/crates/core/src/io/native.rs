use std::fmt::Write as _;

use crate::election::{ArrivalOrder, Election};
use crate::error::{parse_err, Result};

/// An election together with the arrival order stored alongside it, if any.
#[derive(Debug, Clone, PartialEq)]
pub struct NativeInstance {
    pub election: Election,
    pub order: Option<ArrivalOrder>,
}

/// Serializes `e` (and optionally an arrival order) to the native format:
///
/// ```text
/// n m k [B]
/// order: i1 i2 ...     (optional, 1-indexed)
/// u_11;u_12;...;u_1m
/// ...
/// ```
///
/// Numbers use Rust's shortest round-trip formatting, so reading the output
/// back reproduces every value bit for bit.
pub fn write_native(e: &Election, order: Option<&ArrivalOrder>) -> String {
    let (n, m) = (e.num_voters(), e.num_candidates());
    let mut out = format!("{n} {m} {}", e.committee_size());
    if let Some(b) = e.score_cap() {
        write!(out, " {b}").unwrap();
    }
    out.push('\n');
    if let Some(o) = order {
        out.push_str("order:");
        for c in o.as_slice() {
            write!(out, " {}", c + 1).unwrap();
        }
        out.push('\n');
    }
    for i in 0..n {
        for c in 0..m {
            if c > 0 {
                out.push(';');
            }
            write!(out, "{}", e.utility(i, c)).unwrap();
        }
        out.push('\n');
    }
    out
}

/// Parses the native format. Blank lines and lines starting with `#` are
/// ignored.
pub fn read_native(text: &str) -> Result<NativeInstance> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "missing header line"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if !(3..=4).contains(&fields.len()) {
        return Err(parse_err(hl, format!("header must be 'n m k [B]', got '{header}'")));
    }
    let int = |s: &str, what: &str| {
        s.parse::<usize>()
            .map_err(|_| parse_err(hl, format!("{what} must be a non-negative integer, got '{s}'")))
    };
    let (n, m, k) = (int(fields[0], "n")?, int(fields[1], "m")?, int(fields[2], "k")?);
    let cap = match fields.get(3) {
        Some(s) => Some(
            s.parse::<f64>()
                .map_err(|_| parse_err(hl, format!("malformed score bound '{s}'")))?,
        ),
        None => None,
    };

    let mut order = None;
    let mut rows = Vec::with_capacity(n);
    for (ln, line) in lines {
        if let Some(rest) = line.strip_prefix("order:") {
            if order.is_some() || !rows.is_empty() {
                return Err(parse_err(ln, "the order line must directly follow the header"));
            }
            let perm = rest
                .split_whitespace()
                .map(|t| match t.parse::<usize>() {
                    Ok(c) if c >= 1 => Ok(c - 1),
                    _ => Err(parse_err(ln, format!("bad candidate index '{t}'"))),
                })
                .collect::<Result<Vec<_>>>()?;
            if perm.len() != m {
                return Err(parse_err(ln, format!("order lists {} candidates, expected {m}", perm.len())));
            }
            order = Some(ArrivalOrder::new(perm).map_err(|e| parse_err(ln, e.to_string()))?);
            continue;
        }
        if rows.len() == n {
            return Err(parse_err(ln, format!("more than {n} voter rows")));
        }
        let row = line
            .split(';')
            .map(|t| {
                let t = t.trim();
                match t.parse::<f64>() {
                    Ok(u) if u.is_finite() && u >= 0.0 => Ok(u),
                    Ok(_) => Err(parse_err(ln, format!("utility '{t}' must be finite and non-negative"))),
                    Err(_) => Err(parse_err(ln, format!("malformed number '{t}'"))),
                }
            })
            .collect::<Result<Vec<f64>>>()?;
        if row.len() != m {
            return Err(parse_err(ln, format!("row has {} values, expected {m}", row.len())));
        }
        rows.push(row);
    }
    if rows.len() != n {
        let last = text.lines().count();
        return Err(parse_err(last, format!("found {} voter rows, expected {n}", rows.len())));
    }
    let election = Election::new(&rows, k, cap).map_err(|e| parse_err(hl, e.to_string()))?;
    Ok(NativeInstance { election, order })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn example_round_trip() {
        let e = Election::example_hiring_board();
        let text = write_native(&e, None);
        assert_eq!(text, "2 6 2\n0;1;2;0;0;0\n2;0;0;3;1;3\n");
        let back = read_native(&text).unwrap();
        assert_eq!(back.election, e);
        assert_eq!(back.order, None);
    }

    #[test]
    fn awkward_values_survive() {
        let rows = vec![vec![0.1 + 0.2, 1e-300, 123456.789], vec![2.0 / 3.0, 0.0, 5e10]];
        let e = Election::new(&rows, 2, Some(1e11)).unwrap();
        let o = ArrivalOrder::new(vec![2, 0, 1]).unwrap();
        let back = read_native(&write_native(&e, Some(&o))).unwrap();
        assert_eq!(back.election, e);
        assert_eq!(back.order, Some(o));
    }

    #[test]
    fn short_row_is_reported() {
        let err = read_native("2 6 2\n0;1;2;0;0;0\n2;0;0;3;1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
    }

    #[test]
    fn other_errors() {
        assert!(matches!(read_native("2 3 2\n1;x;0\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(read_native("1 3 2\n1;-1;0\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(read_native("1 3\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(read_native("2 3 2\n1;1;0\n"), Err(Error::Parse { .. })));
        assert!(matches!(read_native("1 3 2\norder: 1 1 2\n1;0;0\n"), Err(Error::Parse { line: 2, .. })));
    }
}
