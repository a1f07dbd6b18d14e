//! Recursive-descent parser for polynomial expressions.
//!
//! Grammar:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | '+' unary | power
//! power  := atom ('^' INT)?
//! atom   := INT ('/' INT)? | IDENT | '(' expr ')'
//! ```

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use super::chart::Chart;
use super::coeff::Q;
use super::poly::PolyFn;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unexpected character `{found}` at column {pos}")]
    UnexpectedChar { pos: usize, found: char },
    #[error("expected {expected} at column {pos}, found {found}")]
    Unexpected { pos: usize, expected: &'static str, found: String },
    #[error("unknown identifier `{name}` at column {pos}")]
    UnknownIdentifier { pos: usize, name: String },
    #[error("zero denominator at column {pos}")]
    ZeroDenominator { pos: usize },
    #[error("exponent at column {pos} is too large")]
    ExponentTooLarge { pos: usize },
}

impl ParseError {
    /// 1-based column of the offending token.
    pub fn column(&self) -> usize {
        match self {
            ParseError::UnexpectedChar { pos, .. }
            | ParseError::Unexpected { pos, .. }
            | ParseError::UnknownIdentifier { pos, .. }
            | ParseError::ZeroDenominator { pos }
            | ParseError::ExponentTooLarge { pos } => *pos,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(n) => format!("number `{n}`"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Caret => "`^`".into(),
            Tok::Slash => "`/`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let pos = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = bytes[start..i].iter().collect();
            out.push((pos, Tok::Int(s.parse().expect("digits"))));
            continue;
        }
        if c.is_ascii_alphabetic() {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == '_') {
                i += 1;
            }
            out.push((pos, Tok::Ident(bytes[start..i].iter().collect())));
            continue;
        }
        let t = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '^' => Tok::Caret,
            '/' => Tok::Slash,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            _ => return Err(ParseError::UnexpectedChar { pos, found: c }),
        };
        out.push((pos, t));
        i += 1;
    }
    out.push((bytes.len() + 1, Tok::End));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    chart: &'a Chart,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn pos(&self) -> usize {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> (usize, Tok) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn unexpected(&self, expected: &'static str) -> ParseError {
        ParseError::Unexpected { pos: self.pos(), expected, found: self.peek().describe() }
    }

    fn expr(&mut self) -> Result<PolyFn, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc += &self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc -= &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<PolyFn, ParseError> {
        let mut acc = self.unary()?;
        while *self.peek() == Tok::Star {
            self.bump();
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<PolyFn, ParseError> {
        match self.peek() {
            Tok::Minus => {
                self.bump();
                Ok(-self.unary()?)
            }
            Tok::Plus => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<PolyFn, ParseError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let pos = self.pos();
        match self.bump().1 {
            Tok::Int(n) => {
                let k: u32 = n.try_into().map_err(|_| ParseError::ExponentTooLarge { pos })?;
                if k > 4096 {
                    return Err(ParseError::ExponentTooLarge { pos });
                }
                Ok(base.pow(k))
            }
            other => Err(ParseError::Unexpected {
                pos,
                expected: "nonnegative integer exponent",
                found: other.describe(),
            }),
        }
    }

    fn atom(&mut self) -> Result<PolyFn, ParseError> {
        let n = self.chart.dim();
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Int(num) => {
                self.bump();
                let mut den = BigInt::from(1);
                if *self.peek() == Tok::Slash {
                    self.bump();
                    let dpos = self.pos();
                    match self.bump().1 {
                        Tok::Int(d) if d.is_zero() => {
                            return Err(ParseError::ZeroDenominator { pos: dpos })
                        }
                        Tok::Int(d) => den = d,
                        other => {
                            return Err(ParseError::Unexpected {
                                pos: dpos,
                                expected: "integer denominator",
                                found: other.describe(),
                            })
                        }
                    }
                }
                Ok(PolyFn::constant(n, Q::new(num, den)))
            }
            Tok::Ident(name) => {
                self.bump();
                match self.chart.index_of(&name) {
                    Some(axis) => Ok(PolyFn::var(n, axis)),
                    None => Err(ParseError::UnknownIdentifier { pos, name }),
                }
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.unexpected("`)`"));
                }
                self.bump();
                Ok(inner)
            }
            _ => Err(self.unexpected("number, identifier or `(`")),
        }
    }
}

/// Parses `src` into canonical sparse form over `chart`.
pub fn parse_poly(src: &str, chart: &Chart) -> Result<PolyFn, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, at: 0, chart };
    let out = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.unexpected("operator or end of input"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::coeff::q;

    fn chart() -> Chart {
        Chart::new(["f", "x2"]).unwrap()
    }

    #[test]
    fn single_coordinate() {
        assert_eq!(parse_poly("f", &chart()).unwrap(), PolyFn::var(2, 0));
    }

    #[test]
    fn grammar_expansion() {
        let p = parse_poly("3*f^2*x2 - 1/2", &chart()).unwrap();
        assert_eq!(p.num_terms(), 2);
        assert_eq!(p.coeff(&[2, 1]), q(3, 1));
        assert_eq!(p.coeff(&[0, 0]), q(-1, 2));
    }

    #[test]
    fn unknown_identifier() {
        let e = parse_poly("y", &chart()).unwrap_err();
        assert_eq!(e, ParseError::UnknownIdentifier { pos: 1, name: "y".into() });
        assert!(e.to_string().contains("`y`"));
    }

    #[test]
    fn syntax_errors_carry_position() {
        assert_eq!(parse_poly("f +", &chart()).unwrap_err().column(), 4);
        assert_eq!(parse_poly("f ^ x2", &chart()).unwrap_err().column(), 5);
        assert!(matches!(parse_poly("1/0", &chart()), Err(ParseError::ZeroDenominator { pos: 3 })));
        assert!(matches!(parse_poly("f $", &chart()), Err(ParseError::UnexpectedChar { .. })));
        assert!(parse_poly("(f + 1", &chart()).is_err());
        assert!(parse_poly("f x2", &chart()).is_err());
    }

    #[test]
    fn unary_minus_binds_looser_than_power() {
        let p = parse_poly("-f^2", &chart()).unwrap();
        assert_eq!(p.coeff(&[2, 0]), q(-1, 1));
        let p = parse_poly("(-f)^2 + -(x2)", &chart()).unwrap();
        assert_eq!(p.coeff(&[2, 0]), q(1, 1));
        assert_eq!(p.coeff(&[0, 1]), q(-1, 1));
    }
}
