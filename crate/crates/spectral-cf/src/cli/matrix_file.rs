//! Plain-text matrix files.
//!
//! ```text
//! # Pauli σ2
//! dim 2
//! 0  -1i
//! 1i  0
//! ```
//!
//! Entries are `a`, `bi`, `a+bi` or `a-bi` with decimal reals; a bare `i` or `-i`
//! stands for `±1i`. Blank lines and `#` comments are ignored.

use std::path::Path;

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, HermitianOperator, C64};

/// Parses one entry; `None` when the token is not a finite complex number.
pub fn parse_complex(token: &str) -> Option<C64> {
    let finite = |z: C64| (z.re.is_finite() && z.im.is_finite()).then_some(z);
    let Some(body) = token.strip_suffix('i') else {
        return parse_real(token).map(|x| C64::new(x, 0.0)).and_then(finite);
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (parse_real(&body[..k])?, parse_imag(&body[k..])?),
        None => (0.0, parse_imag(body)?),
    };
    finite(C64::new(re, im))
}

fn parse_real(s: &str) -> Option<f64> {
    let ok = !s.is_empty() && s.chars().all(|c| c.is_ascii_digit() || matches!(c, '.' | 'e' | 'E' | '+' | '-'));
    if ok {
        s.parse().ok()
    } else {
        None
    }
}

fn parse_imag(s: &str) -> Option<f64> {
    match s {
        "" | "+" => Some(1.0),
        "-" => Some(-1.0),
        other => parse_real(other),
    }
}

/// Tokens of a line with their 1-based starting columns, comments removed.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let content = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start = None;
    for (k, c) in content.char_indices() {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some(k),
            (true, Some(s)) => {
                out.push((content[..s].chars().count() + 1, &content[s..k]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((content[..s].chars().count() + 1, &content[s..]));
    }
    out
}

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Parses the text of a matrix file into entries, without the Hermiticity check.
pub fn parse_matrix(text: &str) -> Result<CMatrix> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, tokens(l)))
        .filter(|(_, t)| !t.is_empty());

    let (line_no, header) = lines.next().ok_or_else(|| parse_error(1, 1, "empty file; expected 'dim n'"))?;
    let dim = match header.as_slice() {
        [(_, "dim"), (col, n)] => n
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| parse_error(line_no, *col, format!("dimension must be a positive integer, got '{n}'")))?,
        [(col, _), ..] => return Err(parse_error(line_no, *col, "expected 'dim n' header")),
        [] => unreachable!("blank lines are filtered"),
    };

    let mut m = CMatrix::zeros(dim, dim);
    let mut row = 0;
    let mut last_line = line_no;
    for (line_no, toks) in lines {
        last_line = line_no;
        if row == dim {
            return Err(parse_error(line_no, toks[0].0, format!("more than {dim} rows")));
        }
        if toks.len() != dim {
            let col = toks.get(dim).map_or(toks.last().unwrap().0, |t| t.0);
            return Err(parse_error(line_no, col, format!("row has {} entries, expected {dim}", toks.len())));
        }
        for (j, (col, tok)) in toks.iter().enumerate() {
            m[(row, j)] = parse_complex(tok).ok_or_else(|| parse_error(line_no, *col, format!("cannot read entry '{tok}'")))?;
        }
        row += 1;
    }
    if row < dim {
        return Err(parse_error(last_line + 1, 1, format!("found {row} rows, expected {dim}")));
    }
    Ok(m)
}

/// Reads and validates a matrix file.
pub fn load_matrix(path: impl AsRef<Path>) -> Result<HermitianOperator> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let m = parse_matrix(&text)?;
    Ok(HermitianOperator::new(m)?.with_label(path.display().to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entry_syntax() {
        let c = |re, im| Some(C64::new(re, im));
        assert_eq!(parse_complex("1"), c(1.0, 0.0));
        assert_eq!(parse_complex("-0.5"), c(-0.5, 0.0));
        assert_eq!(parse_complex("1i"), c(0.0, 1.0));
        assert_eq!(parse_complex("-1i"), c(0.0, -1.0));
        assert_eq!(parse_complex("i"), c(0.0, 1.0));
        assert_eq!(parse_complex("-i"), c(0.0, -1.0));
        assert_eq!(parse_complex("2+3i"), c(2.0, 3.0));
        assert_eq!(parse_complex("2-i"), c(2.0, -1.0));
        assert_eq!(parse_complex("1e-3+2.5e2i"), c(1e-3, 250.0));
        assert_eq!(parse_complex("-1e-3-2E-1i"), c(-1e-3, -0.2));
        for bad in ["", "x", "1+", "ii", "inf", "nan", "1..2", "2j"] {
            assert_eq!(parse_complex(bad), None, "{bad}");
        }
    }

    #[test]
    fn sigma2_file() {
        let m = parse_matrix("# sigma 2\ndim 2\n\n0 -1i\n1i 0   # row two\n").unwrap();
        assert_eq!(m[(0, 1)], C64::new(0.0, -1.0));
        assert_eq!(m[(1, 0)], C64::new(0.0, 1.0));
        HermitianOperator::new(m).unwrap();
    }

    #[test]
    fn errors_carry_positions() {
        match parse_matrix("dim 2\n1 1\n1 x\n") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (3, 3)),
            other => panic!("{other:?}"),
        }
        match parse_matrix("dim 2\n1 1 1\n") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (2, 5)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_matrix("dim 2\n1 1\n"), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(parse_matrix("size 2\n"), Err(Error::Parse { line: 1, column: 1, .. })));
        assert!(matches!(parse_matrix("dim 0\n"), Err(Error::Parse { line: 1, column: 5, .. })));
        assert!(matches!(parse_matrix(""), Err(Error::Parse { .. })));
    }

    #[test]
    fn non_hermitian_names_the_pair() {
        let m = parse_matrix("dim 2\n1 2\n3 1\n").unwrap();
        match HermitianOperator::new(m) {
            Err(Error::NotHermitian { row, col, asymmetry }) => {
                assert_eq!((row.min(col), row.max(col)), (0, 1));
                assert_eq!(asymmetry, 1.0);
            }
            other => panic!("{other:?}"),
        }
    }
}
