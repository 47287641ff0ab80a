//! Reader for the line-oriented quantified interval matrix format.
//!
//! ```text
//! qim 2 2
//! [0.8,1]E [-1,0]A
//! -1       1
//! ```
//!
//! A cell is a number (a degenerate ∀ entry) or `[lo,hi]` followed by `A` or
//! `E`. Numbers are decimals (optionally with an exponent) or `p/q` and are
//! converted exactly. Blank lines and lines starting with `#` are ignored.

use std::str::FromStr;

use aereg::{Interval, IntervalMatrix, Matrix, QIMatrix, Quantifier, Rational};
use num_bigint::BigInt;
use num_traits::{Pow, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

fn err<T>(line: usize, column: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { line, column, message: message.into() })
}

/// Exact value of a decimal (`-1.25`, `3e-2`) or fraction (`-5/4`) literal.
pub fn parse_number(text: &str) -> Result<Rational, String> {
    let text = text.replace('−', "-");
    if let Some((p, q)) = text.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| format!("invalid numerator in `{text}`"))?;
        let q = BigInt::from_str(q.trim()).map_err(|_| format!("invalid denominator in `{text}`"))?;
        if q.is_zero() {
            return Err(format!("zero denominator in `{text}`"));
        }
        return Ok(Rational::new(p, q));
    }
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(k) => {
            let e = text[k + 1..].parse::<i32>().map_err(|_| format!("invalid exponent in `{text}`"))?;
            (&text[..k], e)
        }
        None => (text.as_str(), 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty()
        || !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit())
    {
        return Err(format!("invalid number `{text}`"));
    }
    let all_digits = format!("{int_part}{frac_part}");
    let numer = BigInt::from_str(&all_digits).map_err(|_| format!("invalid number `{text}`"))?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let value = if scale >= 0 {
        Rational::from_integer(numer * Pow::pow(&ten, scale as u32))
    } else {
        Rational::new(numer, Pow::pow(&ten, scale.unsigned_abs()))
    };
    Ok(if negative { -value } else { value })
}

struct Cursor<'a> {
    line: usize,
    chars: Vec<(usize, char)>,
    pos: usize,
    text: &'a str,
}

impl Cursor<'_> {
    fn column(&self) -> usize {
        self.chars.get(self.pos).map_or(self.text.chars().count() + 1, |&(c, _)| c + 1)
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|(_, c)| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> String {
        let mut out = String::new();
        while let Some(c) = self.peek().filter(|&c| f(c)) {
            out.push(c);
            self.pos += 1;
        }
        out
    }

    fn number(&mut self, stop: &[char]) -> Result<Rational, ParseError> {
        self.skip_ws();
        let column = self.column();
        let token = self.take_while(|c| !c.is_whitespace() && !stop.contains(&c));
        if token.is_empty() {
            return err(self.line, column, "expected a number");
        }
        parse_number(&token).or_else(|m| err(self.line, column, m))
    }

    fn cell(&mut self) -> Result<(Interval<Rational>, Quantifier), ParseError> {
        let column = self.column();
        if self.peek() != Some('[') {
            return Ok((Interval::point(self.number(&[])?), Quantifier::Forall));
        }
        self.pos += 1;
        let lo = self.number(&[','])?;
        self.skip_ws();
        if self.peek() != Some(',') {
            return err(self.line, self.column(), "expected `,` between interval endpoints");
        }
        self.pos += 1;
        let hi = self.number(&[']'])?;
        self.skip_ws();
        if self.peek() != Some(']') {
            return err(self.line, self.column(), "expected `]`");
        }
        self.pos += 1;
        let quantifier = match self.peek() {
            Some('A') => Quantifier::Forall,
            Some('E') => Quantifier::Exists,
            _ => return err(self.line, self.column(), "expected quantifier `A` or `E` after interval"),
        };
        self.pos += 1;
        if self.peek().is_some_and(|c| !c.is_whitespace()) {
            return err(self.line, self.column(), "expected whitespace after cell");
        }
        let interval = Interval::new(lo, hi).or_else(|e| err(self.line, column, e.to_string()))?;
        Ok((interval, quantifier))
    }
}

/// Parses a matrix file. Degenerate cells tagged `E` are normalized to ∀.
pub fn parse_matrix_file(text: &str) -> Result<QIMatrix<Rational>, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l))
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));

    let Some((hline, header)) = lines.next() else {
        return err(1, 1, "empty input: expected header `qim <m> <n>`");
    };
    let fields: Vec<&str> = header.split_whitespace().collect();
    let dims = match fields.as_slice() {
        ["qim", m, n] => m.parse::<usize>().ok().zip(n.parse::<usize>().ok()),
        _ => None,
    };
    let Some((m, n)) = dims.filter(|&(m, n)| m > 0 && n > 0) else {
        return err(hline, 1, "expected header `qim <m> <n>` with positive dimensions");
    };

    let mut cells = Vec::with_capacity(m * n);
    let mut quants = Vec::with_capacity(m * n);
    let mut last_line = hline;
    for row in 0..m {
        let Some((line, text)) = lines.next() else {
            return err(last_line + 1, 1, format!("expected {m} rows, found {row}"));
        };
        last_line = line;
        let mut cur = Cursor { line, chars: text.chars().enumerate().collect(), pos: 0, text };
        for col in 0..n {
            cur.skip_ws();
            if cur.peek().is_none() {
                return err(line, cur.column(), format!("row {} has {col} cells, expected {n}", row + 1));
            }
            let (interval, quantifier) = cur.cell()?;
            cells.push(interval);
            quants.push(quantifier);
        }
        cur.skip_ws();
        if cur.peek().is_some() {
            return err(line, cur.column(), format!("row {} has more than {n} cells", row + 1));
        }
    }
    if let Some((line, _)) = lines.next() {
        return err(line, 1, format!("unexpected content after {m} rows"));
    }
    let base = IntervalMatrix::new(Matrix::from_vec(m, n, cells).expect("m*n cells"));
    let quants = Matrix::from_vec(m, n, quants).expect("m*n cells");
    Ok(QIMatrix::new(base, quants).expect("matching shapes").normalized())
}

/// Inverse of [`parse_matrix_file`].
pub fn format_matrix_file(q: &QIMatrix<Rational>) -> String {
    q.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use aereg::Scalar;

    fn r(n: i64, d: i64) -> Rational {
        Rational::ratio(n, d)
    }

    #[test]
    fn numbers_convert_exactly() {
        assert_eq!(parse_number("0.8").unwrap(), r(4, 5));
        assert_eq!(parse_number("-1.25").unwrap(), r(-5, 4));
        assert_eq!(parse_number("3e-2").unwrap(), r(3, 100));
        assert_eq!(parse_number("1.5E2").unwrap(), r(150, 1));
        assert_eq!(parse_number("-7/21").unwrap(), r(-1, 3));
        assert_eq!(parse_number(".5").unwrap(), r(1, 2));
        assert_eq!(parse_number("−2").unwrap(), r(-2, 1));
        assert!(parse_number("1/0").is_err());
        assert!(parse_number("abc").is_err());
        assert!(parse_number(".").is_err());
    }

    #[test]
    fn parses_cells_and_normalizes_degenerate_exists() {
        let q = parse_matrix_file("qim 2 2\n[0.8, 1]E [-1,0]A\n-1 [1,1]E\n").unwrap();
        assert_eq!(q.entry(0, 0), &Interval::new(r(4, 5), r(1, 1)).unwrap());
        assert!(q.is_exists(0, 0));
        assert_eq!(q.quantifiers()[(1, 1)], Quantifier::Forall);
        assert_eq!(format_matrix_file(&q), "qim 2 2\n[4/5,1]E [-1,0]A\n-1 1\n");
    }

    #[test]
    fn errors_report_positions() {
        let e = parse_matrix_file("qim 1 2\n1 [2,1]A\n").unwrap_err();
        assert_eq!((e.line, e.column), (2, 3));
        let e = parse_matrix_file("qim 1 2\n1 [0,1]X\n").unwrap_err();
        assert_eq!((e.line, e.column), (2, 8));
        let e = parse_matrix_file("qim 2 1\n1\n").unwrap_err();
        assert_eq!(e.line, 3);
        let e = parse_matrix_file("matrix 1 1\n1\n").unwrap_err();
        assert_eq!((e.line, e.column), (1, 1));
        let e = parse_matrix_file("qim 1 1\n1 2\n").unwrap_err();
        assert_eq!((e.line, e.column), (2, 3));
        let e = parse_matrix_file("qim 1 1\n# note\nx\n").unwrap_err();
        assert_eq!((e.line, e.column), (3, 1));
    }
}
