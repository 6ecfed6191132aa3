use super::{Arrangement, ArrangementError, Hyperplane};
use num_bigint::BigInt;

fn parse_err(line: usize, message: impl Into<String>) -> ArrangementError {
    ArrangementError::Parse { line, message: message.into() }
}

fn ints(line: usize, s: &str) -> Result<Vec<BigInt>, ArrangementError> {
    s.split_whitespace()
        .map(|t| t.parse::<BigInt>().map_err(|_| parse_err(line, format!("expected an integer, found `{t}`"))))
        .collect()
}

/// One hyperplane `a1 … ad | b` per line, `#` comments. An optional `dim d`
/// line fixes the ambient dimension; otherwise it is read off the first
/// hyperplane.
pub fn parse_arrangement(src: &str) -> Result<Arrangement, ArrangementError> {
    let mut dim: Option<(usize, usize)> = None;
    let mut hyperplanes: Vec<(usize, Hyperplane)> = Vec::new();
    for (i, raw) in src.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        if let Some(rest) = body.strip_prefix("dim") {
            if dim.is_some() {
                return Err(parse_err(line, "duplicate `dim` line"));
            }
            let d = rest.trim().parse().map_err(|_| parse_err(line, "`dim` expects a nonnegative integer"))?;
            dim = Some((d, line));
            continue;
        }
        let (lhs, rhs) = body.split_once('|').ok_or_else(|| parse_err(line, "expected `a1 … ad | b`"))?;
        let normal = ints(line, lhs)?;
        let offset = match ints(line, rhs)?.as_slice() {
            [b] => b.clone(),
            _ => return Err(parse_err(line, "expected exactly one offset after `|`")),
        };
        hyperplanes.push((line, Hyperplane { normal, offset }));
    }
    let dimension = match (dim, hyperplanes.first()) {
        (Some((d, _)), _) => d,
        (None, Some((_, h))) => h.normal.len(),
        (None, None) => return Err(parse_err(1, "empty arrangement needs a `dim` line")),
    };
    if let Some((line, h)) = hyperplanes.iter().find(|(_, h)| h.normal.len() != dimension) {
        return Err(parse_err(*line, format!("expected {dimension} coefficients, found {}", h.normal.len())));
    }
    Arrangement::new(dimension, hyperplanes.into_iter().map(|(_, h)| h).collect())
}

/// Inverse of [`parse_arrangement`].
pub fn serialize_arrangement(arr: &Arrangement) -> String {
    let mut out = format!("dim {}\n", arr.dimension);
    for h in &arr.hyperplanes {
        let normal: Vec<String> = h.normal.iter().map(ToString::to_string).collect();
        out.push_str(&format!("{} | {}\n", normal.join(" "), h.offset));
    }
    out
}
