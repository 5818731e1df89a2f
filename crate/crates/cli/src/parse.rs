//! Coefficient and complex-value text formats.
//!
//! Values are separated by whitespace. A value is either a real number or a
//! parenthesized pair `(re,im)`; blanks inside the parentheses are allowed,
//! line breaks are not.

use std::fmt;

use polytame::{Complex, Polynomial};
use thiserror::Error;

/// 1-based position of a value in the input text.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("{at}: {message}")]
    Syntax { at: Position, message: String },
    #[error("{at}: leading coefficient is zero")]
    LeadingZero { at: Position },
    #[error("no coefficients given")]
    Empty,
    #[error("{at}: a polynomial needs at least two coefficients")]
    ConstantPolynomial { at: Position },
}

impl ParseError {
    fn syntax(at: Position, message: impl Into<String>) -> Self {
        ParseError::Syntax {
            at,
            message: message.into(),
        }
    }
}

/// Parses a list of values with their positions.
pub fn parse_values(text: &str) -> Result<Vec<(Complex, Position)>, ParseError> {
    let mut out = Vec::new();
    for (line_idx, line) in text.lines().enumerate() {
        let chars: Vec<(usize, char)> = line.char_indices().collect();
        let mut k = 0;
        while k < chars.len() {
            if chars[k].1.is_whitespace() {
                k += 1;
                continue;
            }
            let at = Position {
                line: line_idx + 1,
                column: k + 1,
            };
            let start = k;
            if chars[k].1 == '(' {
                while k < chars.len() && chars[k].1 != ')' {
                    k += 1;
                }
                if k == chars.len() {
                    return Err(ParseError::syntax(at, "unclosed '('"));
                }
                k += 1;
                if k < chars.len() && !chars[k].1.is_whitespace() {
                    return Err(ParseError::syntax(
                        Position {
                            line: at.line,
                            column: k + 1,
                        },
                        "expected whitespace after ')'",
                    ));
                }
            } else {
                while k < chars.len() && !chars[k].1.is_whitespace() {
                    k += 1;
                }
            }
            let byte_start = chars[start].0;
            let byte_end = chars.get(k).map_or(line.len(), |c| c.0);
            out.push((parse_value(&line[byte_start..byte_end], at)?, at));
        }
    }
    Ok(out)
}

/// Parses a single value: a real number or `(re,im)`.
pub fn parse_complex(token: &str) -> Result<Complex, ParseError> {
    parse_value(token.trim(), Position { line: 1, column: 1 })
}

fn parse_value(token: &str, at: Position) -> Result<Complex, ParseError> {
    if let Some(inner) = token.strip_prefix('(') {
        let inner = inner
            .strip_suffix(')')
            .ok_or_else(|| ParseError::syntax(at, format!("malformed pair '{token}'")))?;
        let mut parts = inner.split(',');
        let (Some(re), Some(im), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(ParseError::syntax(
                at,
                format!("expected (re,im), got '{token}'"),
            ));
        };
        Ok(Complex::new(
            parse_real(re.trim(), at)?,
            parse_real(im.trim(), at)?,
        ))
    } else if token.contains([')', ',']) {
        Err(ParseError::syntax(at, format!("unexpected '{token}'")))
    } else {
        Ok(Complex::new(parse_real(token, at)?, 0.0))
    }
}

fn parse_real(text: &str, at: Position) -> Result<f64, ParseError> {
    let x: f64 = text
        .parse()
        .map_err(|_| ParseError::syntax(at, format!("invalid number '{text}'")))?;
    if !x.is_finite() {
        return Err(ParseError::syntax(
            at,
            format!("non-finite number '{text}'"),
        ));
    }
    Ok(x)
}

/// Parses coefficients listed lowest degree first.
pub fn parse_polynomial(text: &str) -> Result<Polynomial, ParseError> {
    let values = parse_values(text)?;
    let Some(&(lead, at)) = values.last() else {
        return Err(ParseError::Empty);
    };
    if values.len() < 2 {
        return Err(ParseError::ConstantPolynomial { at });
    }
    if lead == Complex::new(0.0, 0.0) {
        return Err(ParseError::LeadingZero { at });
    }
    let coeffs = values.into_iter().map(|(c, _)| c).collect();
    Ok(Polynomial::new(coeffs).expect("validated coefficients"))
}

/// Splits `text` at commas that are not inside parentheses.
pub fn split_top_level(text: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in text.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&text[start..]);
    parts
}
