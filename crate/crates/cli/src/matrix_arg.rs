use motivic_core::{GwElement, GwMatrix, IntMatrix, Matrix};
use num_bigint::BigInt;

#[derive(Debug, Clone, PartialEq)]
pub enum MatrixArg {
    Integer(IntMatrix),
    ZEps(GwMatrix),
}

/// `2`, `-h`, `3h-1`, `1+2e`, `2ε`: integer combinations of `1`, `ε` and `h`.
fn parse_element(tok: &str) -> Result<GwElement, String> {
    let bad = || format!("cannot parse matrix entry `{tok}`");
    let mut acc = GwElement::from_int(0);
    let mut rest = tok;
    if rest.is_empty() {
        return Err(bad());
    }
    while !rest.is_empty() {
        let (sign, body) = match rest.as_bytes()[0] {
            b'+' => (1, &rest[1..]),
            b'-' => (-1, &rest[1..]),
            _ if rest.len() == tok.len() => (1, rest),
            _ => return Err(bad()),
        };
        let digits = body.find(|c: char| !c.is_ascii_digit()).unwrap_or(body.len());
        let coef: BigInt = if digits == 0 { 1.into() } else { body[..digits].parse().map_err(|_| bad())? };
        let coef = coef * sign;
        let after = &body[digits..];
        let (term, consumed) = if let Some(r) = after.strip_prefix('h') {
            (GwElement::h_multiple(coef), after.len() - r.len())
        } else if let Some(r) = after.strip_prefix('e').or_else(|| after.strip_prefix('ε')) {
            (GwElement::new(0, coef), after.len() - r.len())
        } else if digits > 0 {
            (GwElement::from_int(coef), 0)
        } else {
            return Err(bad());
        };
        acc += &term;
        rest = &after[consumed..];
    }
    Ok(acc)
}

/// Rows separated by `;`, entries by whitespace. Integer entries throughout
/// give an integer matrix, anything involving `e`/`ε`/`h` a `ℤ_ε` matrix.
pub fn parse_matrix(s: &str) -> Result<MatrixArg, String> {
    let rows: Vec<Vec<&str>> = s.split(';').map(|r| r.split_whitespace().collect()).collect();
    let rows: Vec<Vec<&str>> = if rows.iter().all(Vec::is_empty) { vec![] } else { rows };
    let cols = rows.first().map_or(0, Vec::len);
    if let Some(i) = rows.iter().position(|r| r.len() != cols || r.is_empty()) {
        return Err(format!("matrix row {} has {} entries, expected {cols}", i + 1, rows[i].len()));
    }
    if rows.iter().flatten().all(|t| t.parse::<BigInt>().is_ok()) {
        let data = rows.iter().flatten().map(|t| t.parse().expect("checked above")).collect();
        return Ok(MatrixArg::Integer(IntMatrix::from_vec(rows.len(), cols, data)));
    }
    let data = rows.iter().flatten().map(|t| parse_element(t)).collect::<Result<Vec<_>, _>>()?;
    Ok(MatrixArg::ZEps(Matrix::from_vec(rows.len(), cols, data)))
}
