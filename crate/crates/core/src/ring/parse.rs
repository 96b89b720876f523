use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{Monomial, Polynomial, Rational};

/// A located syntax error; `column` is 1-based and counts characters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "column {}: {}", self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
}

fn err<T>(column: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { column, message: message.into() })
}

fn tokenize(text: &str) -> Result<Vec<(Token, usize)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if i < chars.len() && (chars[i] == '.' || chars[i] == 'e' || chars[i] == 'E') {
                return err(i + 1, "rational literals must be p/q");
            }
            let digits: String = chars[start..i].iter().collect();
            out.push((Token::Int(digits.parse().expect("ascii digits")), col));
            continue;
        }
        if c == '.' {
            return err(col, "rational literals must be p/q");
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Token::Ident(chars[start..i].iter().collect()), col));
            continue;
        }
        let tok = match c {
            '+' => Token::Plus,
            '-' => Token::Minus,
            '*' => Token::Star,
            '/' => Token::Slash,
            '^' => Token::Caret,
            _ => return err(col, format!("unexpected character '{c}'")),
        };
        out.push((tok, col));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<(Token, usize)>,
    pos: usize,
    end_column: usize,
    names: &'a [String],
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn column(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end_column, |(_, c)| *c)
    }

    fn next(&mut self) -> Option<(Token, usize)> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expression(&mut self) -> Result<Polynomial, ParseError> {
        let n = self.names.len();
        let mut acc = Polynomial::zero(n);
        let mut sign = match self.peek() {
            Some(Token::Minus) => {
                self.pos += 1;
                -1
            }
            Some(Token::Plus) => {
                self.pos += 1;
                1
            }
            _ => 1,
        };
        loop {
            let (m, c) = self.term()?;
            let c = if sign < 0 { -c } else { c };
            acc.add_term(m, c);
            match self.next() {
                None => return Ok(acc),
                Some((Token::Plus, _)) => sign = 1,
                Some((Token::Minus, _)) => sign = -1,
                Some((_, col)) => return err(col, "expected '+', '-' or '*'"),
            }
        }
    }

    fn term(&mut self) -> Result<(Monomial, Rational), ParseError> {
        let n = self.names.len();
        let mut coeff = Rational::one();
        let mut exps = vec![0u32; n];
        loop {
            let col = self.column();
            match self.next() {
                Some((Token::Int(p), _)) => {
                    let value = if self.peek() == Some(&Token::Slash) {
                        self.pos += 1;
                        let qcol = self.column();
                        match self.next() {
                            Some((Token::Int(q), _)) if !q.is_zero() => Rational::new(p, q),
                            Some((Token::Int(_), _)) => return err(qcol, "zero denominator"),
                            _ => return err(qcol, "expected integer denominator"),
                        }
                    } else {
                        Rational::from_integer(p)
                    };
                    coeff *= value;
                }
                Some((Token::Ident(name), _)) => {
                    let Some(j) = self.names.iter().position(|v| *v == name) else {
                        return err(col, format!("undeclared variable '{name}'"));
                    };
                    let mut e = 1u32;
                    if self.peek() == Some(&Token::Caret) {
                        self.pos += 1;
                        let ecol = self.column();
                        match self.next() {
                            Some((Token::Int(k), _)) => {
                                e = u32::try_from(k).map_err(|_| ParseError {
                                    column: ecol,
                                    message: "exponent too large".into(),
                                })?;
                            }
                            _ => return err(ecol, "expected nonnegative integer exponent"),
                        }
                    }
                    exps[j] = exps[j].checked_add(e).ok_or(ParseError {
                        column: col,
                        message: "exponent too large".into(),
                    })?;
                }
                _ => return err(col, "expected coefficient or variable"),
            }
            if self.peek() == Some(&Token::Star) {
                self.pos += 1;
            } else {
                return Ok((Monomial::new(exps), coeff));
            }
        }
    }
}

/// Parses a polynomial over the declared variable names.
///
/// Grammar: terms joined by `+`/`-`; a term is `*`-separated factors, each a
/// coefficient (`7`, `3/4`) or a power `name^k`. Whitespace is ignored.
pub fn parse_polynomial(text: &str, names: &[String]) -> Result<Polynomial, ParseError> {
    let tokens = tokenize(text)?;
    let end_column = text.chars().count() + 1;
    if tokens.is_empty() {
        return err(end_column, "empty expression");
    }
    let mut p = Parser { tokens, pos: 0, end_column, names };
    p.expression()
}
